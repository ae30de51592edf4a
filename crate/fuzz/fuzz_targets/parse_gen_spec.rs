#![no_main]

use libfuzzer_sys::fuzz_target;
use wronskian_core::GenWronskianSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = text.parse::<GenWronskianSpec>() {
        let again: GenWronskianSpec = spec.to_string().parse().unwrap();
        assert_eq!(again, spec);
        assert_eq!(spec.diff_ops().len(), spec.size());
        let _ = spec.label();
    }
});
