//! Diagonalizing a group element congruent to I modulo an ideal inside the radical.

use crate::alg::FormAlg;
use crate::error::{Error, Result};
use crate::gens::{apply_left, apply_right, column_symbol, entries, eval, validate, Family, Symbol, Word};
use crate::group::{FGroup, Flavor};
use crate::matrix::{self as mx, Mat};
use crate::ring::{jacobson_radical, El, Ideal};

/// eval(left) · β · eval(right) = d, with d diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonalization {
    pub left: Word<El>,
    pub right: Word<El>,
    pub d: Mat<El>,
}

/// Generators with value c at entry (p, q).
fn hitting(g: &FGroup, p: usize, q: usize, c: El) -> Vec<Symbol<El>> {
    let a = g.alg.as_ref();
    let (n, r) = (g.n, g.r());
    let (fe, fr, fl) = Family::triple(g.flavor);
    let mut out = Vec::new();
    let herm = g.flavor == Flavor::Hermitian;
    let col = |fam: Family, i: usize, k: usize, z: El| {
        let mut zeta = vec![0; r];
        zeta[k] = z;
        column_symbol(g, fam, i, zeta)
    };
    match (p < n, q < n) {
        (true, true) => {
            out.push(Symbol::scalar(fe, p, q, c));
            if herm && p < r {
                out.extend(col(Family::HM, q, p, c));
            }
        }
        (true, false) => {
            let j = q - n;
            out.push(Symbol::scalar(fr, p, j, c));
            if herm && p < r {
                out.extend(col(Family::HRV, j, p, c));
            }
            if herm && j < r {
                out.extend(col(Family::HRV, p, j, a.neg(&a.mul(&a.lambda(), &a.conj(&c)))));
            }
        }
        (false, true) => out.push(Symbol::scalar(fl, p - n, q, c)),
        (false, false) => {
            out.push(Symbol::scalar(fe, q - n, p - n, a.neg(&a.conj(&c))));
            if herm && q - n < r {
                out.extend(col(Family::HM, p - n, q - n, a.neg(&a.conj(&c))));
            }
        }
    }
    out.retain(|s| validate(g, s).is_ok());
    out
}

fn off_diagonal(m: &Mat<El>) -> usize {
    (0..m.rows).map(|i| (0..m.cols).filter(|&j| i != j && *m.get(i, j) != 0).count()).sum()
}

fn congruent(g: &FGroup, s: &Symbol<El>, ideal: &Ideal) -> bool {
    entries(g, s).iter().all(|(p, q, v)| ideal.contains(if p == q { g.ring().sub(*v, g.ring().one()) } else { *v }))
}

#[derive(Clone)]
struct Move {
    left: bool,
    sym: Symbol<El>,
}

fn apply_move(g: &FGroup, m: &Mat<El>, mv: &Move) -> Mat<El> {
    let mut out = m.clone();
    if mv.left {
        apply_left(g, &mv.sym, &mut out);
    } else {
        apply_right(g, &mv.sym, &mut out);
    }
    out
}

fn moves(g: &FGroup, m: &Mat<El>, ideal: &Ideal, allow_left: bool) -> Vec<Move> {
    let ring = g.ring();
    let d = g.dim();
    let mut out = Vec::new();
    for p in 0..d {
        for q in 0..d {
            let x = *m.get(p, q);
            if p == q || x == 0 {
                continue;
            }
            // right: column q += column p · c kills (p, q) when c = −m_pp⁻¹ x
            if let Some(dp) = ring.inv(*m.get(p, p)) {
                for s in hitting(g, p, q, ring.neg(ring.mul(dp, x))) {
                    if congruent(g, &s, ideal) {
                        out.push(Move { left: false, sym: s });
                    }
                }
            }
            if allow_left {
                if let Some(dq) = ring.inv(*m.get(q, q)) {
                    for s in hitting(g, p, q, ring.neg(ring.mul(x, dq))) {
                        if congruent(g, &s, ideal) {
                            out.push(Move { left: true, sym: s });
                        }
                    }
                }
            }
        }
    }
    out
}

fn sweep(g: &FGroup, beta: &Mat<El>, ideal: &Ideal, allow_left: bool, max_steps: usize) -> Option<(Vec<Move>, Mat<El>)> {
    let mut cur = beta.clone();
    let mut taken = Vec::new();
    for _ in 0..max_steps {
        let score = off_diagonal(&cur);
        if score == 0 {
            return Some((taken, cur));
        }
        let cands = moves(g, &cur, ideal, allow_left);
        let mut best: Option<(usize, Move, Mat<El>)> = None;
        for mv in &cands {
            let nxt = apply_move(g, &cur, mv);
            let s = off_diagonal(&nxt);
            if s < score && best.as_ref().is_none_or(|b| s < b.0) {
                best = Some((s, mv.clone(), nxt));
            }
        }
        if best.is_none() {
            // two moves at once
            'outer: for m1 in &cands {
                let mid = apply_move(g, &cur, m1);
                for m2 in moves(g, &mid, ideal, allow_left) {
                    let nxt = apply_move(g, &mid, &m2);
                    if off_diagonal(&nxt) < score {
                        taken.push(m1.clone());
                        best = Some((0, m2, nxt));
                        break 'outer;
                    }
                }
            }
        }
        let (_, mv, nxt) = best?;
        taken.push(mv);
        cur = nxt;
    }
    None
}

/// Diagonalize β ≡ I mod I (I inside the radical) with generators ≡ I mod I. Column operations are
/// tried first; row operations are added when columns alone get stuck.
pub fn diagonalize_mod_radical(g: &FGroup, beta: &Mat<El>, ideal: &Ideal) -> Result<Diagonalization> {
    let ring = g.ring();
    if !ideal.is_subset(&jacobson_radical(ring)) {
        return Err(Error::Precondition("the ideal is not inside the Jacobson radical".into()));
    }
    let d = g.dim();
    for i in 0..d {
        for j in 0..d {
            let x = *beta.get(i, j);
            let y = if i == j { ring.sub(x, ring.one()) } else { x };
            if !ideal.contains(y) {
                return Err(Error::Precondition(format!("entry ({}, {}) is not ≡ δ_ij modulo the ideal", i + 1, j + 1)));
            }
        }
    }
    if !g.is_member(beta) {
        return Err(Error::Precondition("β is not a group element".into()));
    }
    let steps = 4 * d * d;
    let (taken, dm) = sweep(g, beta, ideal, false, steps)
        .or_else(|| sweep(g, beta, ideal, true, steps))
        .ok_or_else(|| Error::Certification("the clearing sweep got stuck".into()))?;
    let mut left = Vec::new();
    let mut right = Vec::new();
    for mv in taken {
        if mv.left {
            left.push(mv.sym);
        } else {
            right.push(mv.sym);
        }
    }
    // left moves were applied innermost-last, so the left word is reversed
    let left = Word::from_symbols(left.into_iter().rev().collect());
    let right = Word::from_symbols(right);
    let prod = g.mul(&g.mul(&eval(g, &left)?, beta), &eval(g, &right)?);
    if prod != dm || !mx::is_diagonal(g.alg.as_ref(), &dm) {
        return Err(Error::Certification("sweep result does not verify".into()));
    }
    for i in 0..d {
        let x = *dm.get(i, i);
        if !ring.is_unit(x) || !ideal.contains(ring.sub(x, ring.one())) {
            return Err(Error::Certification(format!("diagonal entry {} is not a unit ≡ 1", i + 1)));
        }
    }
    Ok(Diagonalization { left, right, d: dm })
}
