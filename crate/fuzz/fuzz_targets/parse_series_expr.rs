#![no_main]

use libfuzzer_sys::fuzz_target;
use wronskian_core::parse::{parse_mseries, parse_rational, parse_series};
use wronskian_core::FieldSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for field in [FieldSpec::RATIONALS, FieldSpec::prime(7).unwrap()] {
        // printed series must parse back to themselves
        if let Ok(s) = parse_series(text, field) {
            let again = parse_series(&s.to_string(), field).expect("printed series re-parses");
            assert_eq!(again, s);
        }
        if let Ok((f, _)) = parse_rational(text, field) {
            let (again, _) = parse_rational(&f.to_string(), field).expect("printed rational re-parses");
            assert_eq!(again, f);
        }
        if let Ok(s) = parse_mseries(text, field, 3) {
            let again = parse_mseries(&s.to_string(), field, 3).expect("printed series re-parses");
            assert_eq!(again, s);
        }
    }
});
