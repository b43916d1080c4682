//! Shared test helpers: a literal recursive reference simulator and random
//! stream generation.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use fairorient::workload::{Header, Op, Update, UpdateStream};
use fairorient::VertexId;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `floor(log_{(p+q)/q} d)` by exact big-integer powers; 0 for `d = 0`.
pub fn exact_class(p: u32, q: u32, d: u32) -> u32 {
    if d <= 1 {
        return 0;
    }
    let (base, den) = (BigUint::from(p + q), BigUint::from(q));
    let d = BigUint::from(d);
    let (mut num_pow, mut den_pow) = (base.clone(), den.clone());
    let mut i = 0;
    // (1 + lambda)^(i+1) <= d  <=>  (p+q)^(i+1) <= d * q^(i+1)
    while num_pow <= &d * &den_pow {
        i += 1;
        num_pow *= &base;
        den_pow *= &den;
    }
    i
}

/// Smallest `k` with `(1 + lambda)^k >= x`.
pub fn exact_ceil_log(p: u32, q: u32, x: u64) -> u32 {
    let (base, den) = (BigUint::from(p + q), BigUint::from(q));
    let x = BigUint::from(x);
    let (mut num_pow, mut den_pow) = (BigUint::from(1u32), BigUint::from(1u32));
    let mut k = 0;
    while num_pow < &x * &den_pow {
        k += 1;
        num_pow *= &base;
        den_pow *= &den;
    }
    k
}

/// Direct transcription of the recursive procedures with plain containers.
/// Buckets hold the source vertex; out-lists hold `(target, counter)`.
pub struct Reference {
    p: u32,
    q: u32,
    theta: u32,
    b: u32,
    deg: Vec<u32>,
    out: Vec<Vec<(VertexId, u32)>>,
    robin: Vec<usize>,
    buckets: Vec<BTreeMap<u32, Vec<VertexId>>>,
    class: HashMap<(VertexId, VertexId), u32>,
    class_memo: HashMap<u32, u32>,
    pub depth: u32,
    pub max_depth: u32,
}

impl Reference {
    pub fn new(p: u32, q: u32, theta: u32, b: u32, n: usize) -> Self {
        Reference {
            p,
            q,
            theta,
            b,
            deg: vec![0; n],
            out: vec![Vec::new(); n],
            robin: vec![0; n],
            buckets: vec![BTreeMap::new(); n],
            class: HashMap::new(),
            class_memo: HashMap::new(),
            depth: 0,
            max_depth: 0,
        }
    }

    fn budget(&self) -> usize {
        (2 * self.q).div_ceil(self.p) as usize
    }

    fn class_of(&mut self, d: u32) -> u32 {
        let (p, q) = (self.p, self.q);
        *self
            .class_memo
            .entry(d)
            .or_insert_with(|| exact_class(p, q, d))
    }

    /// `high > max((1 + p/q) * low + theta, b / 4)`, multiplied out.
    fn exceeds(&self, high: u32, low: u32) -> bool {
        let (p, q, h, l) = (self.p as u64, self.q as u64, high as u64, low as u64);
        q * h > (q + p) * l + q * self.theta as u64 && 4 * h > self.b as u64
    }

    fn pos(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.out[u as usize].iter().position(|&(t, _)| t == v)
    }

    pub fn counter(&self, u: VertexId, v: VertexId) -> u32 {
        self.pos(u, v).map_or(0, |i| self.out[u as usize][i].1)
    }

    pub fn degree(&self, u: VertexId) -> u32 {
        self.deg[u as usize]
    }

    fn bucket_remove(&mut self, u: VertexId, v: VertexId) {
        let c = self.class[&(u, v)];
        let bucket = self.buckets[v as usize].get_mut(&c).unwrap();
        let i = bucket.iter().position(|&s| s == u).unwrap();
        bucket.swap_remove(i);
        if bucket.is_empty() {
            self.buckets[v as usize].remove(&c);
        }
    }

    fn info_update(&mut self, u: VertexId, v: VertexId) {
        let c = self.class_of(self.deg[u as usize]);
        match self.class.get(&(u, v)) {
            Some(&old) if old == c => {}
            Some(_) => {
                self.bucket_remove(u, v);
                self.buckets[v as usize].entry(c).or_default().push(u);
                self.class.insert((u, v), c);
            }
            None => {
                self.buckets[v as usize].entry(c).or_default().push(u);
                self.class.insert((u, v), c);
            }
        }
    }

    fn add(&mut self, u: VertexId, v: VertexId) {
        self.deg[u as usize] += 1;
        match self.pos(u, v) {
            Some(i) => {
                self.out[u as usize][i].1 += 1;
                assert!(self.out[u as usize][i].1 <= self.b);
            }
            None => {
                self.out[u as usize].push((v, 1));
                self.info_update(u, v);
            }
        }
    }

    fn remove(&mut self, u: VertexId, v: VertexId) {
        self.deg[u as usize] -= 1;
        let i = self.pos(u, v).unwrap();
        self.out[u as usize][i].1 -= 1;
        if self.out[u as usize][i].1 == 0 {
            let list = &mut self.out[u as usize];
            let last = list.len() - 1;
            list.swap_remove(i);
            let r = &mut self.robin[u as usize];
            if *r == last {
                *r = if i < last { i } else { 0 };
            }
            self.bucket_remove(u, v);
            self.class.remove(&(u, v));
        }
    }

    fn inform_next(&mut self, u: VertexId) {
        let len = self.out[u as usize].len();
        if len == 0 {
            return;
        }
        let start = self.robin[u as usize] % len;
        for k in 1..=self.budget().min(len) {
            let w = self.out[u as usize][(start + k) % len].0;
            self.info_update(u, w);
        }
    }

    fn insert_di(&mut self, u: VertexId, v: VertexId) {
        self.add(u, v);
        for _ in 0..self.budget() {
            let len = self.out[u as usize].len();
            let r = (self.robin[u as usize] + 1) % len;
            self.robin[u as usize] = r;
            let x = self.out[u as usize][r].0;
            if self.exceeds(self.deg[u as usize], self.deg[x as usize]) {
                self.remove(u, x);
                self.depth += 1;
                self.insert_di(x, u);
                break;
            }
        }
        self.inform_next(u);
    }

    fn delete_di(&mut self, u: VertexId, v: VertexId) {
        self.remove(u, v);
        let x = self.buckets[u as usize]
            .iter()
            .next_back()
            .map(|(_, members)| members[0]);
        match x {
            Some(x) if self.exceeds(self.deg[x as usize], self.deg[u as usize]) => {
                self.add(u, x);
                self.depth += 1;
                self.delete_di(x, u);
            }
            _ => self.inform_next(u),
        }
    }

    pub fn insert_edge(&mut self, u: VertexId, v: VertexId) {
        for _ in 0..self.b {
            self.depth = 0;
            if self.deg[u as usize] <= self.deg[v as usize] {
                self.insert_di(u, v);
            } else {
                self.insert_di(v, u);
            }
            self.max_depth = self.max_depth.max(self.depth);
        }
    }

    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) {
        for _ in 0..self.b {
            self.depth = 0;
            if self.counter(v, u) > 0 {
                self.delete_di(v, u);
            } else {
                self.delete_di(u, v);
            }
            self.max_depth = self.max_depth.max(self.depth);
        }
    }

    pub fn apply(&mut self, up: &Update) {
        match up.op {
            Op::Insert => self.insert_edge(up.u, up.v),
            Op::Delete => self.delete_edge(up.u, up.v),
        }
    }

    /// All records as sorted `(source, target, counter)`.
    pub fn diedges(&self) -> Vec<(VertexId, VertexId, u32)> {
        let mut out: Vec<_> = self
            .out
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&(v, c)| (u as VertexId, v, c)))
            .collect();
        out.sort_unstable();
        out
    }
}

/// A valid mixed stream on `n` vertices: inserts with probability
/// `insert_pct`% while absent pairs remain, deletions otherwise.
pub fn random_stream(n: usize, ops: usize, insert_pct: u32, seed: u64) -> UpdateStream {
    assert!(n >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut present: Vec<(VertexId, VertexId)> = Vec::new();
    let mut index: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    let full = n * (n - 1) / 2;
    let mut updates = Vec::with_capacity(ops);
    while updates.len() < ops {
        let insert =
            present.is_empty() || (present.len() < full && rng.gen_range(0..100) < insert_pct);
        if insert {
            loop {
                let u = rng.gen_range(0..n as VertexId);
                let v = rng.gen_range(0..n as VertexId);
                let key = (u.min(v), u.max(v));
                if u != v && !index.contains_key(&key) {
                    index.insert(key, present.len());
                    present.push(key);
                    updates.push(Update::insert(u, v));
                    break;
                }
            }
        } else {
            let i = rng.gen_range(0..present.len());
            let key = present.swap_remove(i);
            index.remove(&key);
            if i < present.len() {
                index.insert(present[i], i);
            }
            let (u, v) = if rng.gen_bool(0.5) {
                key
            } else {
                (key.1, key.0)
            };
            updates.push(Update::delete(u, v));
        }
    }
    UpdateStream {
        header: Header {
            n,
            seed: Some(seed),
            mode: "mixed".into(),
            extra: Vec::new(),
        },
        updates,
    }
}

/// A random simple graph with `n` vertices and `m` edges.
pub fn random_graph(n: usize, m: usize, rng: &mut impl Rng) -> Vec<(VertexId, VertexId)> {
    fairorient::workload::gen_gnm(n, m as u64, rng.gen()).unwrap()
}
