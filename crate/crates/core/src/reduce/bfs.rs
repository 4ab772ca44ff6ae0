//! Breadth-first closure of the elementary group and the membership oracles built on it.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::form::FormRing;
use crate::gens::{
    all_symbols, apply_right, commutator, eval, gen_matrix, peel_elementary, validate, Family, Letter, Payload, Symbol, Word,
};
use crate::group::{gl_embed, gl_project, FGroup, Group};
use crate::matrix::{self as mx, Mat};
use crate::ring::{localize_at_element, El, FiniteRing};
use crate::sample::{self, Rng64};

/// Row-major element indices, bit-packed when they fit in 128 bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Key {
    Packed(u128),
    Bytes(Box<[u8]>),
}

#[derive(Clone, Copy, Debug)]
struct Codec {
    bits: u32,
    dim: usize,
    packed: bool,
}

impl Codec {
    fn new(ring_size: usize, dim: usize) -> Codec {
        let bits = (usize::BITS - (ring_size.max(2) - 1).leading_zeros()).max(1);
        Codec { bits, dim, packed: bits as usize * dim * dim <= 128 }
    }

    fn encode(&self, m: &Mat<El>) -> Key {
        if self.packed {
            let mut k = 0u128;
            for &x in m.data.iter().rev() {
                k = (k << self.bits) | x as u128;
            }
            Key::Packed(k)
        } else {
            Key::Bytes(m.data.iter().flat_map(|x| x.to_le_bytes()).collect())
        }
    }

    fn decode(&self, k: &Key) -> Mat<El> {
        let n = self.dim * self.dim;
        let data = match k {
            Key::Packed(mut v) => {
                let mask = (1u128 << self.bits) - 1;
                (0..n)
                    .map(|_| {
                        let x = (v & mask) as El;
                        v >>= self.bits;
                        x
                    })
                    .collect()
            }
            Key::Bytes(b) => b.chunks(4).map(|c| El::from_le_bytes([c[0], c[1], c[2], c[3]])).collect(),
        };
        Mat { rows: self.dim, cols: self.dim, data }
    }

    fn entry_bytes(&self) -> usize {
        // key stored twice (table + arena), the table slot and the tree entry
        let k = if self.packed { 16 } else { 24 + 4 * self.dim * self.dim };
        2 * k + 4 + 8 + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMode {
    BfsClosure,
    Constructive,
    WordWitness,
}

#[derive(Clone, Copy, Debug)]
pub struct BfsCaps {
    pub max_elements: usize,
    pub max_bytes: usize,
}

impl Default for BfsCaps {
    fn default() -> Self {
        BfsCaps { max_elements: 50_000_000, max_bytes: 2 << 30 }
    }
}

impl BfsCaps {
    pub fn elements(n: usize) -> BfsCaps {
        BfsCaps { max_elements: n, ..Default::default() }
    }
}

/// Yes carries a witness word when the mode can produce one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes(Option<Word<El>>),
    No,
    Unknown,
}

struct Closure {
    codec: Codec,
    index: HashMap<Key, u32>,
    keys: Vec<Key>,
    // (parent, generator); the root's parent is u32::MAX
    tree: Vec<(u32, u16)>,
    complete: bool,
}

/// Closure of {I} under `step(m, k)` for k < ngens, level by level; the frontier expands in parallel.
fn enumerate<F>(codec: Codec, identity: &Mat<El>, ngens: usize, caps: BfsCaps, step: F) -> Closure
where
    F: Fn(&Mat<El>, usize) -> Mat<El> + Sync,
{
    let max = caps.max_elements.min(caps.max_bytes / codec.entry_bytes()).max(1);
    let root = codec.encode(identity);
    let mut index = HashMap::new();
    index.insert(root.clone(), 0u32);
    let mut keys = vec![root];
    let mut tree = vec![(u32::MAX, 0u16)];
    let mut complete = true;
    let mut lo = 0;
    while lo < keys.len() && complete {
        let hi = keys.len();
        let batch: Vec<(Key, u32, u16)> = (lo..hi)
            .into_par_iter()
            .flat_map_iter(|i| {
                let m = codec.decode(&keys[i]);
                let step = &step;
                (0..ngens).map(move |k| (codec.encode(&step(&m, k)), i as u32, k as u16))
            })
            .collect();
        for (k, pi, gi) in batch {
            if index.contains_key(&k) {
                continue;
            }
            if keys.len() >= max {
                complete = false;
                break;
            }
            index.insert(k.clone(), keys.len() as u32);
            keys.push(k);
            tree.push((pi, gi));
        }
        lo = hi;
    }
    Closure { codec, index, keys, tree, complete }
}

impl Closure {
    fn path(&self, mut i: u32) -> Vec<u16> {
        let mut out = Vec::new();
        while self.tree[i as usize].0 != u32::MAX {
            out.push(self.tree[i as usize].1);
            i = self.tree[i as usize].0;
        }
        out.reverse();
        out
    }
}

/// A membership oracle for the elementary group of one group descriptor.
pub struct MembershipOracle {
    pub mode: OracleMode,
    pub generators: Vec<Symbol<El>>,
    pub max_steps: usize,
    group: FGroup,
    closure: Option<Closure>,
}

/// Symbols with nonzero payloads, one per distinct matrix.
pub fn closure_generators(g: &FGroup) -> Vec<Symbol<El>> {
    let elems: Vec<El> = g.ring().elements().collect();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for s in all_symbols(g, &elems) {
        let nonzero = match &s.payload {
            Payload::Scalar(a) => *a != 0,
            Payload::Column { zeta, f } => zeta.iter().any(|&z| z != 0) || *f != 0,
        };
        if nonzero && seen.insert(gen_matrix(g, &s).expect("enumerated symbols are valid").data) {
            out.push(s);
        }
    }
    out
}

/// Closure of {I} under right multiplication by every generator. Past a cap the partial set is kept and
/// flagged incomplete.
pub fn bfs_closure(g: &FGroup, caps: BfsCaps) -> MembershipOracle {
    bfs_with(g, closure_generators(g), caps)
}

pub fn bfs_with(g: &FGroup, generators: Vec<Symbol<El>>, caps: BfsCaps) -> MembershipOracle {
    let codec = Codec::new(g.ring().size(), g.dim());
    let closure = enumerate(codec, &g.identity(), generators.len(), caps, |m, k| {
        let mut x = m.clone();
        apply_right(g, &generators[k], &mut x);
        x
    });
    MembershipOracle { mode: OracleMode::BfsClosure, generators, max_steps: 0, group: g.clone(), closure: Some(closure) }
}

impl MembershipOracle {
    /// Greedy peeling: yes with a witness, otherwise unknown.
    pub fn constructive(g: &FGroup, max_steps: usize) -> MembershipOracle {
        MembershipOracle { mode: OracleMode::Constructive, generators: Vec::new(), max_steps, group: g.clone(), closure: None }
    }

    /// Accepts words, re-verifying them; matrices alone are unknown.
    pub fn word_witness(g: &FGroup) -> MembershipOracle {
        MembershipOracle { mode: OracleMode::WordWitness, generators: Vec::new(), max_steps: 0, group: g.clone(), closure: None }
    }

    pub fn group(&self) -> &FGroup {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.closure.as_ref().map_or(0, |c| c.keys.len())
    }

    pub fn complete(&self) -> bool {
        self.closure.as_ref().is_some_and(|c| c.complete)
    }

    pub fn contains(&self, m: &Mat<El>) -> Answer {
        match (&self.closure, self.mode) {
            (Some(c), _) => match c.index.get(&c.codec.encode(m)) {
                Some(&i) => Answer::Yes(Some(Word::from_symbols(
                    c.path(i).into_iter().map(|k| self.generators[k as usize].clone()).collect(),
                ))),
                None if c.complete => Answer::No,
                None => Answer::Unknown,
            },
            (None, OracleMode::Constructive) => match peel_elementary(&self.group, m, self.max_steps) {
                Some(w) => Answer::Yes(Some(w)),
                None => Answer::Unknown,
            },
            (None, _) => Answer::Unknown,
        }
    }

    /// Membership of eval(w); word-witness mode answers yes with w itself once it re-evaluates.
    pub fn contains_word(&self, w: &Word<El>) -> Result<Answer> {
        let m = eval(&self.group, w)?;
        if self.mode == OracleMode::WordWitness {
            return Ok(Answer::Yes(Some(w.clone())));
        }
        Ok(self.contains(&m))
    }

    /// Random products of closure elements and generator inverses stay in the closure.
    pub fn spot_check_subgroup(&self, samples: usize, rng: &mut Rng64) -> Result<bool> {
        let Some(c) = &self.closure else {
            return Err(Error::Precondition("no enumerated closure".into()));
        };
        let g = &self.group;
        for _ in 0..samples {
            let a = c.codec.decode(&c.keys[rng.gen_range(0..c.keys.len())]);
            let b = c.codec.decode(&c.keys[rng.gen_range(0..c.keys.len())]);
            let s = &self.generators[rng.gen_range(0..self.generators.len())];
            let inv = eval(g, &Word { letters: vec![Letter { sym: s.clone(), inv: true }] })?;
            for m in [g.mul(&a, &b), g.mul(&a, &inv), g.inverse(&a)] {
                if c.complete && !c.index.contains_key(&c.codec.encode(&m)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// |Sp(2n, q)| = q^{n²} ∏_{i=1..n} (q^{2i} − 1), computed without any group enumeration.
pub fn symplectic_order(n: u32, q: u128) -> u128 {
    (1..=n).fold(q.pow(n * n), |acc, i| acc * (q.pow(2 * i) - 1))
}

/// GL(2n, R) elementary closure mapped into the quadratic group over the hyperbolic double, compared
/// with that group's own elementary closure.
#[derive(Clone, Debug, Serialize)]
pub struct GlComparison {
    pub n: usize,
    pub gl_size: usize,
    pub quadratic_size: usize,
    pub images_in_closure: bool,
    pub equal: bool,
    pub complete: bool,
}

fn plain_ring(base: &Arc<FiniteRing>) -> Result<FormRing> {
    FormRing::build(base, base.one(), &[])
}

fn hyperbolic_group(base: &Arc<FiniteRing>, n: usize) -> Result<FGroup> {
    Group::quadratic_any(&Arc::new(crate::form::make_hyperbolic_double(base)?), n)
}

/// Elementary matrices e_pq(a) of size d with p ≠ q and a ≠ 0.
pub fn gl_elementary(base: &Arc<FiniteRing>, d: usize) -> Vec<(usize, usize, El)> {
    let mut out = Vec::new();
    for p in 0..d {
        for q in 0..d {
            if p != q {
                out.extend(base.elements().filter(|&a| a != 0).map(|a| (p, q, a)));
            }
        }
    }
    out
}

fn gl_matrix(plain: &FormRing, d: usize, (p, q, a): (usize, usize, El)) -> Mat<El> {
    let mut m = mx::identity(plain, d);
    m.set(p, q, a);
    m
}

pub fn gl_closure_comparison(base: &Arc<FiniteRing>, n: usize, caps: BfsCaps) -> Result<GlComparison> {
    let plain = plain_ring(base)?;
    let hyp = hyperbolic_group(base, n)?;
    let d = 2 * n;
    let gens = gl_elementary(base, d);
    let gl = enumerate(Codec::new(base.size(), d), &mx::identity(&plain, d), gens.len(), caps, |m, k| {
        let (p, q, a) = gens[k];
        // right multiplication by e_pq(a): column q += column p · a
        let mut x = m.clone();
        for r in 0..d {
            x.set(r, q, base.add(*m.get(r, q), base.mul(*m.get(r, p), a)));
        }
        x
    });
    let quad = bfs_closure(&hyp, caps);
    let qc = quad.closure.as_ref().expect("bfs mode");
    let mut images_in_closure = true;
    for k in &gl.keys {
        let img = gl_embed(&hyp, base, &gl.codec.decode(k))?;
        if !qc.index.contains_key(&qc.codec.encode(&img)) {
            images_in_closure = false;
            break;
        }
    }
    let complete = gl.complete && qc.complete;
    Ok(GlComparison {
        n,
        gl_size: gl.keys.len(),
        quadratic_size: qc.keys.len(),
        images_in_closure,
        equal: complete && images_in_closure && gl.keys.len() == qc.keys.len(),
        complete,
    })
}

/// Generator correspondence and multiplicativity of the GL embedding, checked over every generator and
/// every pair of generators.
#[derive(Clone, Debug, Serialize)]
pub struct GlCorrespondence {
    pub gl_generators: usize,
    pub quadratic_generators: usize,
    pub gl_to_quadratic: usize,
    pub quadratic_to_gl: usize,
    pub gl_pairs: usize,
    pub gl_pairs_ok: usize,
    pub quadratic_pairs: usize,
    pub quadratic_pairs_ok: usize,
}

impl GlCorrespondence {
    pub fn passed(&self) -> bool {
        self.gl_to_quadratic == self.gl_generators
            && self.quadratic_to_gl == self.quadratic_generators
            && self.gl_pairs_ok == self.gl_pairs
            && self.quadratic_pairs_ok == self.quadratic_pairs
    }
}

pub fn gl_correspondence(base: &Arc<FiniteRing>, n: usize) -> Result<GlCorrespondence> {
    let plain = plain_ring(base)?;
    let hyp = hyperbolic_group(base, n)?;
    let d = 2 * n;
    let gl: Vec<Mat<El>> = gl_elementary(base, d).into_iter().map(|e| gl_matrix(&plain, d, e)).collect();
    let quad: Vec<Mat<El>> = closure_generators(&hyp).iter().map(|s| gen_matrix(&hyp, s)).collect::<Result<_>>()?;
    let quad_set: std::collections::HashSet<&Vec<El>> = quad.iter().map(|m| &m.data).collect();
    let embedded: Vec<Mat<El>> = gl.iter().map(|m| gl_embed(&hyp, base, m)).collect::<Result<_>>()?;
    let gl_to_quadratic = embedded.iter().filter(|m| quad_set.contains(&m.data)).count();
    // each quadratic generator projects to I + N, a product of elementary matrices read off N
    let mut quadratic_to_gl = 0;
    for m in &quad {
        let p = gl_project(base, m);
        let mut prod = mx::identity(&plain, d);
        for r in 0..d {
            for c in 0..d {
                let x = *p.get(r, c);
                if r != c && x != 0 {
                    prod = mx::mul(&plain, &prod, &gl_matrix(&plain, d, (r, c, x)));
                }
            }
        }
        let diag_ok = (0..d).all(|i| *p.get(i, i) == 1);
        if diag_ok && prod == p && gl_embed(&hyp, base, &p)? == *m {
            quadratic_to_gl += 1;
        }
    }
    let gl_pairs_ok = (0..gl.len())
        .into_par_iter()
        .map(|i| {
            (0..gl.len())
                .filter(|&j| {
                    gl_embed(&hyp, base, &mx::mul(&plain, &gl[i], &gl[j])).ok().as_ref()
                        == Some(&hyp.mul(&embedded[i], &embedded[j]))
                })
                .count()
        })
        .sum();
    let quadratic_pairs_ok = (0..quad.len())
        .into_par_iter()
        .map(|i| {
            (0..quad.len())
                .filter(|&j| gl_project(base, &hyp.mul(&quad[i], &quad[j])) == mx::mul(&plain, &gl_project(base, &quad[i]), &gl_project(base, &quad[j])))
                .count()
        })
        .sum();
    Ok(GlCorrespondence {
        gl_generators: gl.len(),
        quadratic_generators: quad.len(),
        gl_to_quadratic,
        quadratic_to_gl,
        gl_pairs: gl.len() * gl.len(),
        gl_pairs_ok,
        quadratic_pairs: quad.len() * quad.len(),
        quadratic_pairs_ok,
    })
}

/// Pass/fail/unknown tallies for one exponent l.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ContainmentTally {
    pub l: u32,
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
}

/// Commutators [θ_ij(a/s), σ] with σ ≡ I mod s^l, tested for membership in the elementary group over R.
/// θ's payload a/s lives in the localization at s and is pulled back through the slice embedding; σ is a
/// word whose generators all lie in s^l R.
pub fn commutator_containment_check(
    oracle: &MembershipOracle,
    s: El,
    ls: &[u32],
    samples: usize,
    rng: &mut Rng64,
) -> Result<Vec<ContainmentTally>> {
    let g = oracle.group();
    let ring = g.ring().clone();
    let loc = localize_at_element(&ring, s)?;
    let s_loc = loc.target.inv(loc.apply(s)).ok_or_else(|| Error::LocalizationZero(ring.show(s)))?;
    let scalar: Vec<Family> = Family::for_flavor(g.flavor).iter().copied().filter(|f| !f.is_column()).collect();
    let mut out = Vec::new();
    for &l in ls {
        let sl = ring.pow(s, l);
        let ideal = crate::ring::Ideal::generated(&ring, &[sl]);
        let pool = sample::congruent_pool(g, |x| ideal.contains(x));
        let mut t = ContainmentTally { l, ..Default::default() };
        for _ in 0..samples {
            let theta = loop {
                let fam = scalar[rng.gen_range(0..scalar.len())];
                let (i, j) = (rng.gen_range(0..g.n), rng.gen_range(0..g.n));
                let a = rng.gen_range(0..ring.size()) as El;
                let x = loc.embed[loc.target.mul(loc.apply(a), s_loc) as usize];
                let sym = Symbol::scalar(fam, i, j, x);
                if validate(g, &sym).is_ok() {
                    break sym;
                }
            };
            let sigma = sample::random_word(&pool, 3, rng);
            let w = commutator(&Word::single(theta), &sigma);
            match oracle.contains_word(&w)? {
                Answer::Yes(Some(wit)) if eval(g, &wit)? == eval(g, &w)? => t.pass += 1,
                Answer::Yes(_) | Answer::No => t.fail += 1,
                Answer::Unknown => t.unknown += 1,
            }
        }
        out.push(t);
    }
    Ok(out)
}
