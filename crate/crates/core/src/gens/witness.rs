//! Commutator witnesses: words w₁, w₂ with [w₁, w₂] equal to a given generator.

use crate::alg::FormAlg;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::matrix::Mat;

use super::{apply_left, entries, eval, gen_inverse, gen_matrix, Payload, Symbol, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<E> {
    pub w1: Word<E>,
    pub w2: Word<E>,
}

/// [x, y] = x y x⁻¹ y⁻¹ as a word.
pub fn commutator<E: Clone>(x: &Word<E>, y: &Word<E>) -> Word<E> {
    x.concat(y).concat(&x.inverse()).concat(&y.inverse())
}

fn is_trivial<A: FormAlg>(g: &Group<A>, s: &Symbol<A::E>) -> bool {
    entries(g, s).is_empty()
}

struct Cand<E> {
    sym: Symbol<E>,
    mat: Mat<E>,
    inv: Word<E>,
}

/// Words (w₁, w₂) over the symbols with payloads in `pool` such that [w₁, w₂] = s. Single-symbol pairs
/// touching the target's indices are tried first, then words of length up to two on each side. Every hit
/// is re-verified by evaluation.
pub fn commutator_witness<A: FormAlg>(g: &Group<A>, s: &Symbol<A::E>, pool: &[A::E]) -> Result<Witness<A::E>> {
    let target = gen_matrix(g, s)?;
    if is_trivial(g, s) {
        return Ok(Witness { w1: Word::new(), w2: Word::new() });
    }
    let need = match g.flavor {
        crate::group::Flavor::Quadratic => 3,
        crate::group::Flavor::Hermitian => g.r() + 3,
    };
    if g.n < need {
        return Err(Error::Unsupported(format!("commutator witnesses need n ≥ {need}")));
    }
    let mut cands: Vec<Cand<A::E>> = Vec::new();
    for sym in super::all_symbols(g, pool) {
        if is_trivial(g, &sym) {
            continue;
        }
        let mat = super::gen_matrix_unchecked(g, &sym);
        let inv = gen_inverse(g, &sym)?;
        cands.push(Cand { sym, mat, inv });
    }
    let touches = |c: &Symbol<A::E>| c.i == s.i || c.j == s.j || c.i == s.j || c.j == s.i;
    cands.sort_by_key(|c| !touches(&c.sym));
    let target_minus = target.data.iter().zip(&g.identity().data).filter(|(x, y)| x != y).count();
    for x in &cands {
        for y in &cands {
            if std::ptr::eq(x, y) {
                continue;
            }
            // x y x⁻¹ y⁻¹, built by left-applying symbols to y⁻¹
            let mut m = g.identity();
            for l in y.inv.letters.iter().rev() {
                apply_left(g, &l.sym, &mut m);
            }
            for l in x.inv.letters.iter().rev() {
                apply_left(g, &l.sym, &mut m);
            }
            m = g.mul(&y.mat, &m);
            m = g.mul(&x.mat, &m);
            if m.data.iter().zip(&g.identity().data).filter(|(p, q)| p != q).count() != target_minus {
                continue;
            }
            if m == target {
                let w = Witness { w1: Word::single(x.sym.clone()), w2: Word::single(y.sym.clone()) };
                if eval(g, &commutator(&w.w1, &w.w2))? == target {
                    return Ok(w);
                }
            }
        }
    }
    if let Some(w) = word_witness(g, &target, &cands)? {
        return Ok(w);
    }
    Err(Error::Certification(format!("no commutator witness found for {}", super::show_symbol(g, s))))
}

struct WordMat<E> {
    word: Word<E>,
    mat: Mat<E>,
    inv: Mat<E>,
}

fn word_mats<A: FormAlg>(g: &Group<A>, cands: &[Cand<A::E>], len: usize) -> Vec<WordMat<A::E>> {
    let singles: Vec<WordMat<A::E>> = cands
        .iter()
        .map(|c| WordMat { word: Word::single(c.sym.clone()), mat: c.mat.clone(), inv: g.inverse(&c.mat) })
        .collect();
    if len == 1 {
        return singles;
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for p in &singles {
        for q in &singles {
            let mat = g.mul(&p.mat, &q.mat);
            if seen.insert(mat.data.clone()) {
                out.push(WordMat { word: p.word.concat(&q.word), inv: g.inverse(&mat), mat });
            }
        }
    }
    out
}

/// Words x, y = u·v with [x, y] = T. Uses [x, u·v] = T  ⇔  v x v⁻¹ = u⁻¹ T⁻¹ x u, matched through a
/// table of conjugates of x, for growing word lengths.
fn word_witness<A: FormAlg>(
    g: &Group<A>,
    target: &Mat<A::E>,
    cands: &[Cand<A::E>],
) -> Result<Option<Witness<A::E>>> {
    let t_inv = g.inverse(target);
    let l1 = word_mats(g, cands, 1);
    let l2 = word_mats(g, cands, 2);
    for (xs, us, vs) in [(&l1, &l1, &l1), (&l1, &l1, &l2), (&l2, &l1, &l1), (&l2, &l1, &l2)] {
        for x in xs.iter() {
            let mut conj: std::collections::HashMap<Vec<A::E>, usize> = std::collections::HashMap::new();
            for (k, v) in vs.iter().enumerate() {
                conj.entry(g.mul(&g.mul(&v.mat, &x.mat), &v.inv).data).or_insert(k);
            }
            let tx = g.mul(&t_inv, &x.mat);
            for u in us.iter() {
                let rhs = g.mul(&g.mul(&u.inv, &tx), &u.mat);
                let Some(&v) = conj.get(&rhs.data) else { continue };
                let w = Witness { w1: x.word.clone(), w2: u.word.concat(&vs[v].word) };
                if eval(g, &commutator(&w.w1, &w.w2))? == *target {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

/// A product of commutators equal to `s`: one pair when possible, otherwise [x, y]·[x', y'] where the
/// second factor is a generator with its own single-pair witness.
pub fn commutator_factors<A: FormAlg>(g: &Group<A>, s: &Symbol<A::E>, pool: &[A::E]) -> Result<Vec<Witness<A::E>>> {
    match commutator_witness(g, s, pool) {
        Ok(w) => return Ok(vec![w]),
        Err(Error::Certification(_)) => {}
        Err(e) => return Err(e),
    }
    let target = gen_matrix(g, s)?;
    let syms: Vec<Symbol<A::E>> = super::all_symbols(g, pool).into_iter().filter(|c| !is_trivial(g, c)).collect();
    let by_matrix: std::collections::HashMap<Vec<A::E>, &Symbol<A::E>> =
        syms.iter().map(|c| (super::gen_matrix_unchecked(g, c).data, c)).collect();
    let mats: Vec<(Mat<A::E>, Mat<A::E>)> = syms
        .iter()
        .map(|c| {
            let m = super::gen_matrix_unchecked(g, c);
            let inv = g.inverse(&m);
            (m, inv)
        })
        .collect();
    let touches = |c: &Symbol<A::E>| c.i == s.i || c.j == s.j || c.i == s.j || c.j == s.i;
    let mut order: Vec<usize> = (0..syms.len()).collect();
    order.sort_by_key(|&k| !touches(&syms[k]));
    for &x in &order {
        for &y in &order {
            if x == y {
                continue;
            }
            let c = g.mul(&g.mul(&g.mul(&mats[x].0, &mats[y].0), &mats[x].1), &mats[y].1);
            let rest = g.mul(&g.inverse(&c), &target);
            let Some(r) = by_matrix.get(&rest.data) else { continue };
            if std::ptr::eq(*r, s) || **r == *s {
                continue;
            }
            let Ok(second) = commutator_witness(g, r, pool) else { continue };
            let first = Witness { w1: Word::single(syms[x].clone()), w2: Word::single(syms[y].clone()) };
            let word = commutator(&first.w1, &first.w2).concat(&commutator(&second.w1, &second.w2));
            if eval(g, &word)? == target {
                return Ok(vec![first, second]);
            }
        }
    }
    Err(Error::Certification(format!("no product of two commutators found for {}", super::show_symbol(g, s))))
}

/// The payload of a symbol, for callers that build payload pools.
pub fn payload_elements<E: Clone>(s: &Symbol<E>) -> Vec<E> {
    match &s.payload {
        Payload::Scalar(x) => vec![x.clone()],
        Payload::Column { zeta, f } => zeta.iter().cloned().chain(std::iter::once(f.clone())).collect(),
    }
}
