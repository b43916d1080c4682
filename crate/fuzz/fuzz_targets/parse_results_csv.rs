#![no_main]

use fairorient_bench::{read_rows, write_rows, Extras};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(rows) = read_rows(data, "fuzz") {
        let extras = Extras {
            audit: true,
            oracle: true,
        };
        let mut buf = Vec::new();
        write_rows(&mut buf, &rows, extras).expect("rows write");
        assert_eq!(
            read_rows(&buf[..], "again").expect("written rows parse"),
            rows
        );
    }
});
