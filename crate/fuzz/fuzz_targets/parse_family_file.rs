#![no_main]

use libfuzzer_sys::fuzz_target;
use wronskian_core::parse::FamilyFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = FamilyFile::parse(text) {
        let _ = file.univariate();
        let _ = file.multivariate();
    }
});
