#![no_main]

use fairorient::workload::{parse_orientation, write_orientation};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(o) = parse_orientation(text) {
        let again = parse_orientation(&write_orientation(&o)).expect("written orientations parse");
        assert_eq!(again, o);
        assert_eq!(
            o.out_degrees().iter().map(|&d| d as usize).sum::<usize>(),
            o.arcs().len()
        );
    }
});
