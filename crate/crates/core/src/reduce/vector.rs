//! Moving isotropic unimodular vectors to e_{2n} with generator words.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::alg::FormAlg;
use crate::error::{Error, Result};
use crate::gens::{all_symbols, apply_to_vector, column_symbol, eval_on_vector, validate, Family, Symbol, Word};
use crate::group::{FGroup, Flavor};
use crate::ring::{jacobson_radical, El, FiniteRing, Ideal};

/// A dual vector u with Σ v_i u_i = 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnimodularCertificate {
    pub v: Vec<El>,
    pub u: Vec<El>,
}

impl UnimodularCertificate {
    pub fn check(&self, ring: &FiniteRing) -> bool {
        self.v.len() == self.u.len() && self.v.iter().zip(&self.u).fold(0, |acc, (&a, &b)| ring.add(acc, ring.mul(a, b))) == ring.one()
    }
}

/// eval(word)·input = e_{2n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    pub input: Vec<El>,
    pub word: Word<El>,
    /// Always true: the word carries the input to e_{2n} (its inverse carries e_{2n} to the input).
    pub to_basis: bool,
}

/// Search the right ideal Σ v_i R for 1, remembering how each element was reached.
pub fn unimodular_certificate(ring: &FiniteRing, v: &[El]) -> Option<UnimodularCertificate> {
    let k = v.len();
    let mut seen: HashMap<El, Vec<El>> = HashMap::new();
    seen.insert(0, vec![0; k]);
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        if x == ring.one() {
            return Some(UnimodularCertificate { v: v.to_vec(), u: seen[&x].clone() });
        }
        let base = seen[&x].clone();
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for r in ring.elements() {
                let y = ring.add(x, ring.mul(vi, r));
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(y) {
                    let mut u = base.clone();
                    u[i] = ring.add(u[i], r);
                    e.insert(u);
                    queue.push_back(y);
                }
            }
        }
    }
    None
}

/// Σ x̄_i y_i for the quadratic flavor; the Λ-valued part of the quadratic form.
pub fn quadratic_value(g: &FGroup, v: &[El]) -> El {
    let a = g.alg.as_ref();
    let n = g.n;
    (0..n).fold(0, |acc, i| a.add(&acc, &a.mul(&a.conj(&v[i]), &v[n + i])))
}

/// Ok when ⟨v, v⟩ = 0 and, for the quadratic flavor, the quadratic value lies in Λ.
pub fn check_isotropic(g: &FGroup, v: &[El]) -> Result<()> {
    let a = g.alg.as_ref();
    let h = g.inner(v, v);
    if h != 0 {
        return Err(Error::Precondition(format!("not isotropic: ⟨v, v⟩ = {}", a.show(&h))));
    }
    if g.flavor == Flavor::Quadratic {
        let q = quadratic_value(g, v);
        if !a.in_lambda(&q) {
            return Err(Error::Precondition(format!("not isotropic: quadratic value {} ∉ Λ", a.show(&q))));
        }
    }
    Ok(())
}

/// Given a and a left ideal I with Ra + I = Re for an idempotent e, find i ∈ I and a unit u with a + i = u·e.
pub fn find_unit_in_coset(ring: &FiniteRing, a: El, ideal: &Ideal) -> Result<(El, El, El)> {
    let mut gens = ideal.elements();
    gens.push(a);
    let j = Ideal::left_generated(ring, &gens);
    let e = ring
        .idempotents()
        .into_iter()
        .find(|&e| Ideal::left_generated(ring, &[e]) == j)
        .ok_or_else(|| Error::Precondition("Ra + I is not generated by an idempotent".into()))?;
    if ring.is_unit(a) && ideal.contains(0) && e == ring.one() {
        return Ok((0, a, e));
    }
    for i in ideal.elements() {
        let t = ring.add(a, i);
        for u in ring.elements().filter(|&u| ring.is_unit(u)) {
            if ring.mul(u, e) == t {
                return Ok((i, u, e));
            }
        }
    }
    Err(Error::Precondition("no unit in the coset a + I".into()))
}

/// diag(u, u⁻¹) on x-coordinates (i, j), as ε_ij(u) ε_ji(−u⁻¹) ε_ij(u) ε_ij(−1) ε_ji(1) ε_ij(−1).
pub fn torus_word(g: &FGroup, i: usize, j: usize, u: El) -> Result<Word<El>> {
    let r = g.ring();
    let ui = r.inv(u).ok_or_else(|| Error::Precondition(format!("{} is not a unit", r.show(u))))?;
    let (fe, _, _) = Family::triple(g.flavor);
    let e = |p, q, x| Symbol::scalar(fe, p, q, x);
    let one = r.one();
    let w = Word::from_symbols(vec![
        e(i, j, u),
        e(j, i, r.neg(ui)),
        e(i, j, u),
        e(i, j, r.neg(one)),
        e(j, i, one),
        e(i, j, r.neg(one)),
    ]);
    for l in &w.letters {
        validate(g, &l.sym)?;
    }
    Ok(w)
}

fn lo(g: &FGroup) -> usize {
    if g.flavor == Flavor::Hermitian {
        g.r()
    } else {
        0
    }
}

/// ε-moves carrying the x-coordinates lo..n of (x, 0) to (0, …, 0, e) with Σ R x_i = Re.
/// Coordinates below r (Hermitian) must vanish.
pub fn column_reduce_semisimple(g: &FGroup, x: &[El]) -> Result<(Word<El>, El)> {
    let ring = g.ring();
    let n = g.n;
    let lo = lo(g);
    if x.len() != n {
        return Err(Error::Dimension(format!("expected a column of length {n}")));
    }
    if x[..lo].iter().any(|&c| c != 0) {
        return Err(Error::Precondition("coordinates inside the r-block must vanish".into()));
    }
    let sub: Vec<El> = x[lo..].to_vec();
    let ideal = Ideal::left_generated(ring, &sub);
    let e = ring
        .idempotents()
        .into_iter()
        .find(|&e| Ideal::left_generated(ring, &[e]) == ideal)
        .ok_or_else(|| Error::Precondition("Σ R x_i is not generated by an idempotent".into()))?;
    let mut goal = vec![0; sub.len()];
    *goal.last_mut().unwrap() = e;
    let (fe, _, _) = Family::triple(g.flavor);
    let m = sub.len();
    let mut parent: HashMap<Vec<El>, (Vec<El>, Symbol<El>)> = HashMap::new();
    let mut queue = VecDeque::from([sub.clone()]);
    let mut seen = std::collections::HashSet::from([sub.clone()]);
    let nonzero: Vec<El> = ring.elements().filter(|&c| c != 0).collect();
    while let Some(cur) = queue.pop_front() {
        if cur == goal {
            let mut syms = Vec::new();
            let mut k = cur;
            while let Some((p, s)) = parent.get(&k) {
                syms.push(s.clone());
                k = p.clone();
            }
            // applied in reverse order of discovery
            return Ok((Word::from_symbols(syms), e));
        }
        for i in 0..m {
            for j in 0..m {
                if i == j || cur[j] == 0 {
                    continue;
                }
                for &c in &nonzero {
                    let mut nxt = cur.clone();
                    nxt[i] = ring.add(nxt[i], ring.mul(c, cur[j]));
                    if seen.insert(nxt.clone()) {
                        parent.insert(nxt.clone(), (cur.clone(), Symbol::scalar(fe, lo + i, lo + j, c)));
                        queue.push_back(nxt);
                    }
                }
            }
        }
    }
    Err(Error::Certification("column could not be reduced".into()))
}

fn has_unit_x(ring: &FiniteRing, n: usize, v: &[El]) -> bool {
    v[..n].iter().any(|&x| ring.is_unit(x))
}

fn x_ideal_mod_j(ring: &FiniteRing, j: &Ideal, n: usize, v: &[El]) -> usize {
    let mut gens: Vec<El> = v[..n].to_vec();
    gens.extend(j.elements());
    Ideal::generated(ring, &gens).len()
}

/// A word whose evaluation makes some x-coordinate of v a unit. Each greedy step strictly enlarges
/// the ideal generated by the x-coordinates modulo the radical.
pub fn improve_to_unit(g: &FGroup, v: &[El]) -> Result<Word<El>> {
    let ring = g.ring().clone();
    let n = g.n;
    if unimodular_certificate(&ring, v).is_none() {
        return Err(Error::Precondition("vector is not unimodular".into()));
    }
    let rad = jacobson_radical(&ring);
    let syms = all_symbols(g, &ring.elements().collect::<Vec<_>>());
    let mut cur = v.to_vec();
    let mut applied: Vec<Symbol<El>> = Vec::new();
    let mut measure = x_ideal_mod_j(&ring, &rad, n, &cur);
    let finish = |applied: Vec<Symbol<El>>| Word::from_symbols(applied.into_iter().rev().collect());
    loop {
        if has_unit_x(&ring, n, &cur) {
            return Ok(finish(applied));
        }
        let mut best: Option<(usize, Symbol<El>, Vec<El>)> = None;
        for s in &syms {
            let mut w = cur.clone();
            apply_to_vector(g, s, &mut w);
            if has_unit_x(&ring, n, &w) {
                applied.push(s.clone());
                return Ok(finish(applied));
            }
            let m = x_ideal_mod_j(&ring, &rad, n, &w);
            if m > measure && best.as_ref().is_none_or(|b| m > b.0) {
                best = Some((m, s.clone(), w));
            }
        }
        match best {
            Some((m, s, w)) => {
                measure = m;
                applied.push(s);
                cur = w;
            }
            None => {
                for s in &syms {
                    let mut w = cur.clone();
                    apply_to_vector(g, s, &mut w);
                    for t in &syms {
                        let mut w2 = w.clone();
                        apply_to_vector(g, t, &mut w2);
                        if has_unit_x(&ring, n, &w2) {
                            applied.push(s.clone());
                            applied.push(t.clone());
                            return Ok(finish(applied));
                        }
                    }
                }
                return Err(Error::Certification("no generator pair produces a unit x-coordinate".into()));
            }
        }
    }
}

struct Tracker<'a> {
    g: &'a FGroup,
    v: Vec<El>,
    applied: Vec<Symbol<El>>,
}

impl Tracker<'_> {
    fn apply(&mut self, s: Symbol<El>) -> Result<()> {
        validate(self.g, &s)?;
        apply_to_vector(self.g, &s, &mut self.v);
        self.applied.push(s);
        Ok(())
    }

    fn word(&self) -> Word<El> {
        Word::from_symbols(self.applied.iter().rev().cloned().collect())
    }
}

pub(crate) fn direct(g: &FGroup, v: &[El]) -> Result<Word<El>> {
    let ring = g.ring().clone();
    let (n, r) = (g.n, g.r());
    let last = n - 1;
    let lo = lo(g);
    let (fe, fr, fl) = Family::triple(g.flavor);
    let mut t = Tracker { g, v: v.to_vec(), applied: Vec::new() };
    let inv = |x: El| ring.inv(x).ok_or_else(|| Error::Certification(format!("{} is not a unit", ring.show(x))));

    // a unit in some x-coordinate
    let pre = improve_to_unit(g, &t.v)?;
    for l in pre.letters.iter().rev() {
        t.apply(l.sym.clone())?;
    }
    // move it to x_n
    if !ring.is_unit(t.v[last]) {
        let j = (0..n).find(|&j| ring.is_unit(t.v[j])).unwrap();
        let c = ring.mul(ring.sub(ring.one(), t.v[last]), inv(t.v[j])?);
        t.apply(Symbol::scalar(fe, last, j, c))?;
    }
    let xn_inv = inv(t.v[last])?;
    // clear x_k, k < r, with one column generator
    if g.flavor == Flavor::Hermitian && t.v[..r].iter().any(|&x| x != 0) {
        let zeta: Vec<El> = (0..r).map(|k| ring.neg(ring.mul(t.v[k], xn_inv))).collect();
        let s = column_symbol(g, Family::HM, last, zeta)
            .ok_or_else(|| Error::Certification("hm payload for clearing the r-block has no ζ_f".into()))?;
        t.apply(s)?;
    }
    for j in lo..n {
        if j != last && t.v[j] != 0 {
            t.apply(Symbol::scalar(fe, j, last, ring.neg(ring.mul(t.v[j], xn_inv))))?;
        }
    }
    for j in 0..n {
        if j != last && t.v[n + j] != 0 {
            t.apply(Symbol::scalar(fl, j, last, ring.neg(ring.mul(t.v[n + j], xn_inv))))?;
        }
    }
    if t.v[n + last] != 0 {
        t.apply(Symbol::scalar(fl, last, last, ring.neg(ring.mul(t.v[n + last], xn_inv))))?;
    }
    // u·e_n ↦ e_{n+j} ↦ e_{2n}
    let u = t.v[last];
    let j = (lo..n).find(|&j| j != last).ok_or_else(|| Error::Unsupported("needs a second index outside the r-block".into()))?;
    t.apply(Symbol::scalar(fl, j, last, inv(u)?))?;
    t.apply(Symbol::scalar(fr, last, j, ring.neg(u)))?;
    t.apply(Symbol::scalar(fe, j, last, ring.neg(ring.one())))?;
    t.apply(Symbol::scalar(fe, last, j, ring.one()))?;
    Ok(t.word())
}

/// Breadth-first search over vectors, for instances where the direct steps hit an invalid symbol.
fn search(g: &FGroup, v: &[El], cap: usize) -> Result<Word<El>> {
    let ring = g.ring();
    let target = g.basis(g.dim() - 1);
    let syms = all_symbols(g, &ring.elements().collect::<Vec<_>>());
    let mut parent: HashMap<Vec<El>, (Vec<El>, usize)> = HashMap::new();
    let mut queue = VecDeque::from([v.to_vec()]);
    let mut seen = std::collections::HashSet::from([v.to_vec()]);
    while let Some(cur) = queue.pop_front() {
        if cur == target {
            let mut out = Vec::new();
            let mut k = cur;
            while let Some((p, si)) = parent.get(&k) {
                out.push(syms[*si].clone());
                k = p.clone();
            }
            return Ok(Word::from_symbols(out));
        }
        for (si, s) in syms.iter().enumerate() {
            let mut w = cur.clone();
            apply_to_vector(g, s, &mut w);
            if seen.insert(w.clone()) {
                if seen.len() > cap {
                    return Err(Error::ResourceLimit(format!("vector search exceeded {cap} states")));
                }
                parent.insert(w.clone(), (cur.clone(), si));
                queue.push_back(w);
            }
        }
    }
    Err(Error::Certification("e_2n is not in the orbit of the vector".into()))
}

/// A word w with eval(w)·v = e_{2n} for an isotropic unimodular v.
pub fn reduce_isotropic_unimodular(g: &FGroup, v: &[El]) -> Result<ReductionResult> {
    let ring = g.ring();
    if v.len() != g.dim() {
        return Err(Error::Dimension(format!("expected a vector of length {}", g.dim())));
    }
    unimodular_certificate(ring, v).ok_or_else(|| Error::Precondition("vector is not unimodular".into()))?;
    check_isotropic(g, v)?;
    let word = match direct(g, v) {
        Ok(w) => w,
        Err(Error::Constraint(_)) | Err(Error::Certification(_)) | Err(Error::Unsupported(_)) => search(g, v, 2_000_000)?,
        Err(e) => return Err(e),
    };
    if eval_on_vector(g, &word, v)? != g.basis(g.dim() - 1) {
        return Err(Error::Certification("reduction word does not reach e_2n".into()));
    }
    Ok(ReductionResult { input: v.to_vec(), word, to_basis: true })
}
