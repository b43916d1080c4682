#![no_main]

use fairorient::packed::{pack, unpack, DefaultWidths, Widths};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|word: u32| {
    let (c, k, r) = unpack::<DefaultWidths>(word);
    assert_eq!(pack::<DefaultWidths>(c, k, r), Ok(word));
    let (c, k, r) = unpack::<Widths<9, 10, 13>>(word);
    assert_eq!(pack::<Widths<9, 10, 13>>(c, k, r), Ok(word));
});
