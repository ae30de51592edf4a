#![no_main]

use libfuzzer_sys::fuzz_target;
use wronskian_core::FieldSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = text.parse::<FieldSpec>() {
        assert_eq!(spec.to_string().parse::<FieldSpec>().unwrap(), spec);
        // a valid spec is a field: 1 is invertible and 1 + (-1) = 0
        let one = spec.one();
        assert!(one.inv().unwrap().is_one());
        assert!((&one + &-&one).is_zero());
    }
});
