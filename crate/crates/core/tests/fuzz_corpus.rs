//! Runs the fuzz target properties over the checked-in corpus seeds.

use std::path::PathBuf;

use fairorient::packed::{pack, unpack, DefaultWidths, Widths};
use fairorient::workload::{
    parse_orientation, parse_stream, replay, write_orientation, write_stream,
};
use fairorient::{Fractional, Lambda, OrientedMultigraph, PackedList, Params};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.display().to_string(), std::fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn text(data: &[u8]) -> Option<&str> {
    std::str::from_utf8(data).ok()
}

#[test]
fn parse_stream_seeds() {
    let mut parsed = 0;
    for (name, data) in seeds("parse_stream") {
        let Some(t) = text(&data) else { continue };
        if let Ok(s) = parse_stream(t) {
            let again = parse_stream(&write_stream(&s)).unwrap();
            assert_eq!(again.updates, s.updates, "{name}");
            assert_eq!(again.header.n, s.header.n, "{name}");
            parsed += 1;
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn parse_orientation_seeds() {
    for (name, data) in seeds("parse_orientation") {
        let Some(t) = text(&data) else { continue };
        if let Ok(o) = parse_orientation(t) {
            assert_eq!(
                parse_orientation(&write_orientation(&o)).unwrap(),
                o,
                "{name}"
            );
        }
    }
}

#[test]
fn parse_lambda_seeds() {
    for (name, data) in seeds("parse_lambda") {
        let Some(t) = text(&data) else { continue };
        if let Ok(l) = t.parse::<Lambda>() {
            assert_eq!(l.to_string().parse::<Lambda>().unwrap(), l, "{name}");
            assert!(l.scan_budget() >= 1);
        }
    }
}

#[test]
fn replay_stream_seeds() {
    for (name, data) in seeds("replay_stream") {
        let stream = parse_stream(text(&data).unwrap()).unwrap();
        stream.validate().unwrap();
        let params = Params::new("1/10".parse().unwrap(), 1, 3).unwrap();
        let mut a: OrientedMultigraph<Fractional> =
            OrientedMultigraph::new(params, stream.header.n).unwrap();
        let mut b: OrientedMultigraph<PackedList> =
            OrientedMultigraph::new(params, stream.header.n).unwrap();
        assert_eq!(
            replay(&mut a, &stream.updates).unwrap(),
            replay(&mut b, &stream.updates).unwrap(),
            "{name}"
        );
        a.check_structure().unwrap();
        b.check_structure().unwrap();
        assert_eq!(a.diedges(), b.diedges(), "{name}");
        assert_eq!(a.edge_count(), stream.final_edges().len());
    }
}

#[test]
fn unpack_word_seeds() {
    for (name, data) in seeds("unpack_word") {
        let mut bytes = [0u8; 4];
        for (d, s) in bytes.iter_mut().zip(&data) {
            *d = *s;
        }
        let word = u32::from_le_bytes(bytes);
        let (c, k, r) = unpack::<DefaultWidths>(word);
        assert_eq!(pack::<DefaultWidths>(c, k, r), Ok(word), "{name}");
        let (c, k, r) = unpack::<Widths<9, 10, 13>>(word);
        assert_eq!(pack::<Widths<9, 10, 13>>(c, k, r), Ok(word), "{name}");
    }
}
