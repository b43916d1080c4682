#![no_main]

use fairorient::workload::{parse_stream, replay};
use fairorient::{Fractional, OrientedMultigraph, PackedList, Params};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(stream) = parse_stream(text) else {
        return;
    };
    if stream.header.n > 1 << 12 || stream.len() > 1 << 12 || stream.validate().is_err() {
        return;
    }
    let params = Params::new("1/10".parse().unwrap(), 1, 3).unwrap();
    let mut a: OrientedMultigraph<Fractional> =
        OrientedMultigraph::new(params, stream.header.n).unwrap();
    let mut b: OrientedMultigraph<PackedList> =
        OrientedMultigraph::new(params, stream.header.n).unwrap();
    let oa = replay(&mut a, &stream.updates).expect("valid streams replay");
    let ob = replay(&mut b, &stream.updates).expect("valid streams replay");
    assert_eq!(oa, ob);
    a.check_structure().expect("structure holds");
    b.check_structure().expect("structure holds");
    assert_eq!(a.diedges(), b.diedges());
    assert_eq!(a.edge_count(), stream.final_edges().len());
});
