#![no_main]

use fairorient::workload::{parse_stream, write_stream};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(stream) = parse_stream(text) {
        let again = parse_stream(&write_stream(&stream)).expect("written streams parse");
        assert_eq!(again.updates, stream.updates);
        assert_eq!(again.header.n, stream.header.n);
    }
});
