#![no_main]

use fairorient::Lambda;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(l) = text.parse::<Lambda>() {
        let again: Lambda = l.to_string().parse().expect("displayed lambda parses");
        assert_eq!(again, l);
        assert!(l.scan_budget() >= 1);
    }
});
