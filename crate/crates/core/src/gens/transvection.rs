//! Factoring I + M(v, w) and transvections into generators, and peeling matrices into generators.

use crate::alg::FormAlg;
use crate::error::{Error, Result};
use crate::group::{Flavor, Group};
use crate::matrix::{self as mx, Mat};

use super::{
    apply_left, apply_right, column_symbol, eval, gen_inverse, validate, Family, Payload, Symbol, Word,
};

fn left_peel<A: FormAlg>(g: &Group<A>, s: &Symbol<A::E>, cur: &mut Mat<A::E>) -> Result<()> {
    for l in gen_inverse(g, s)?.letters.iter().rev() {
        apply_left(g, &l.sym, cur);
    }
    Ok(())
}

/// Factor a matrix that differs from I only in column c and row n+c (a transvection along e_{n+c})
/// as generators: column entries first, then the diagonal correction.
pub fn peel_column<A: FormAlg>(g: &Group<A>, target: &Mat<A::E>, c: usize) -> Result<Word<A::E>> {
    let a = g.alg.as_ref();
    let (n, r) = (g.n, g.r());
    let (fe, _, fl) = Family::triple(g.flavor);
    let mut cur = target.clone();
    let mut out = Vec::new();
    if g.flavor == Flavor::Hermitian {
        let zeta: Vec<A::E> = (0..r).map(|k| cur.get(k, c).clone()).collect();
        if zeta.iter().any(|z| !a.is_zero(z)) {
            if c < r {
                return Err(Error::Certification("column index inside the r-block".into()));
            }
            let s = column_symbol(g, Family::HM, c, zeta)
                .ok_or_else(|| Error::Certification("column payload has no admissible ζ_f".into()))?;
            left_peel(g, &s, &mut cur)?;
            out.push(s);
        }
    }
    let lo = if g.flavor == Flavor::Hermitian { r } else { 0 };
    for j in lo..n {
        if j == c || a.is_zero(cur.get(j, c)) {
            continue;
        }
        let s = Symbol::scalar(fe, j, c, cur.get(j, c).clone());
        validate(g, &s)?;
        left_peel(g, &s, &mut cur)?;
        out.push(s);
    }
    for i in 0..n {
        if i == c || a.is_zero(cur.get(n + i, c)) {
            continue;
        }
        let s = Symbol::scalar(fl, i, c, cur.get(n + i, c).clone());
        validate(g, &s)?;
        left_peel(g, &s, &mut cur)?;
        out.push(s);
    }
    let d = cur.get(n + c, c).clone();
    if !a.is_zero(&d) {
        let s = Symbol::scalar(fl, c, c, d);
        validate(g, &s).map_err(|e| Error::Certification(format!("diagonal correction rejected: {e}")))?;
        left_peel(g, &s, &mut cur)?;
        out.push(s);
    }
    if !mx::is_identity(a, &cur) {
        return Err(Error::Certification("residual after peeling the column is not the identity".into()));
    }
    Ok(Word::from_symbols(out))
}

fn conjugated<A: FormAlg>(
    g: &Group<A>,
    eps: &Word<A::E>,
    w: &[A::E],
    inner: impl Fn(&[A::E]) -> Mat<A::E>,
) -> Result<(Word<A::E>, Mat<A::E>)> {
    let e = eval(g, eps)?;
    let einv = g.inverse(&e);
    let w1 = mx::mat_vec(g.alg.as_ref(), &einv, w);
    let core = inner(&w1);
    let peeled = peel_column(g, &core, g.n - 1)?;
    let word = eps.concat(&peeled).concat(&eps.inverse());
    Ok((word, e))
}

/// A word for I + M(v, w) where v = eval(ε)·e_{2n} and ⟨v, w⟩ = 0.
pub fn factor_i_plus_m<A: FormAlg>(g: &Group<A>, eps: &Word<A::E>, w: &[A::E]) -> Result<Word<A::E>> {
    let a = g.alg.as_ref();
    let z = a.zero();
    factor_transvection(g, eps, w, &z)
}

/// A word for T(v, w, c) = I + M(v, w) + v c ṽ where v = eval(ε)·e_{2n} and ⟨v, w⟩ = 0.
pub fn factor_transvection<A: FormAlg>(g: &Group<A>, eps: &Word<A::E>, w: &[A::E], c: &A::E) -> Result<Word<A::E>> {
    let a = g.alg.as_ref();
    let d = g.dim();
    if w.len() != d {
        return Err(Error::Dimension(format!("vector length {} ≠ {d}", w.len())));
    }
    if w.iter().all(|x| a.is_zero(x)) && a.is_zero(c) {
        return Ok(Word::new());
    }
    let v = mx::mat_vec(a, &eval(g, eps)?, &g.basis(d - 1));
    if !a.is_zero(&g.inner(&v, w)) {
        return Err(Error::Pairing(format!("⟨v, w⟩ = {} ≠ 0", a.show(&g.inner(&v, w)))));
    }
    let target = g.transvection(&v, w, c);
    if !g.is_member(&target) {
        return Err(Error::Certification(format!(
            "I + M(v, w) + v c ṽ is not in the group: {}",
            g.membership(&target).diagnostic
        )));
    }
    let e_last = g.basis(d - 1);
    let (word, _) = conjugated(g, eps, w, |w1| g.transvection(&e_last, w1, c))?;
    if eval(g, &word)? != target {
        return Err(Error::Certification("factorization does not evaluate to the transvection".into()));
    }
    Ok(word)
}

/// (v, w, c) with gen_matrix(s) = T(v, w, c) and v a standard basis vector.
pub fn as_transvection<A: FormAlg>(g: &Group<A>, s: &Symbol<A::E>) -> (Vec<A::E>, Vec<A::E>, A::E) {
    let a = g.alg.as_ref();
    let n = g.n;
    let zero = vec![a.zero(); 2 * n];
    let unit = |k: usize, x: A::E| {
        let mut v = zero.clone();
        v[k] = x;
        v
    };
    let lam = a.lambda();
    match (&s.payload, s.family) {
        (Payload::Scalar(x), Family::QE | Family::HE) => (g.basis(s.i), unit(n + s.j, a.conj(x)), a.zero()),
        (Payload::Scalar(x), Family::QR | Family::HR) if s.i != s.j => {
            (g.basis(s.i), unit(s.j, a.mul(&lam, &a.conj(x))), a.zero())
        }
        (Payload::Scalar(x), Family::QR | Family::HR) => (g.basis(s.i), zero.clone(), a.mul(&a.lambda_bar(), x)),
        (Payload::Scalar(x), Family::QL | Family::HL) if s.i != s.j => {
            (g.basis(n + s.i), unit(n + s.j, a.conj(x)), a.zero())
        }
        (Payload::Scalar(x), Family::QL | Family::HL) => (g.basis(n + s.i), zero.clone(), x.clone()),
        (Payload::Column { zeta, f }, fam) => {
            let mut w = zero.clone();
            let hm = fam == Family::HM;
            for (k, z) in zeta.iter().enumerate() {
                w[k] = if hm { a.neg(&a.mul(&lam, z)) } else { a.neg(z) };
                let az = a.mul(&a.conj(&g.a[k]), z);
                w[n + k] = if hm { a.mul(&lam, &az) } else { az };
            }
            let v = if hm { g.basis(n + s.i) } else { g.basis(s.i) };
            (v, w, a.conj(f))
        }
        _ => unreachable!("payload kind does not match family"),
    }
}

fn off_identity<A: FormAlg>(g: &Group<A>, m: &Mat<A::E>) -> usize {
    let a = g.alg.as_ref();
    let d = g.dim();
    (0..d).map(|i| (0..d).filter(|&j| if i == j { !a.is_one(m.get(i, j)) } else { !a.is_zero(m.get(i, j)) }).count()).sum()
}

/// Generators whose matrix has entry (p, q), with payloads read off `m`.
fn candidates<A: FormAlg>(g: &Group<A>, m: &Mat<A::E>, p: usize, q: usize) -> Vec<Symbol<A::E>> {
    let a = g.alg.as_ref();
    let (n, r) = (g.n, g.r());
    let (fe, fr, fl) = Family::triple(g.flavor);
    let val = m.get(p, q).clone();
    let mut out = Vec::new();
    match (p < n, q < n) {
        (true, true) => {
            out.push(Symbol::scalar(fe, p, q, val.clone()));
            if g.flavor == Flavor::Hermitian && p < r {
                let zeta: Vec<A::E> = (0..r).map(|k| m.get(k, q).clone()).collect();
                if let Some(s) = column_symbol(g, Family::HM, q, zeta) {
                    out.push(s);
                }
            }
        }
        (true, false) => {
            out.push(Symbol::scalar(fr, p, q - n, val.clone()));
            if g.flavor == Flavor::Hermitian {
                let i = if p < r { q - n } else { p };
                let zeta: Vec<A::E> = (0..r).map(|k| m.get(k, n + i).clone()).collect();
                if let Some(s) = column_symbol(g, Family::HRV, i, zeta.clone()) {
                    out.push(s);
                }
                // ζ_f read from the (i, n+i) entry
                let f = a.conj(&a.mul(&a.lambda_bar(), m.get(i, n + i)));
                out.push(Symbol { family: Family::HRV, i, j: i, payload: Payload::Column { zeta, f } });
            }
        }
        (false, true) => {
            out.push(Symbol::scalar(fl, p - n, q, val.clone()));
            if g.flavor == Flavor::Hermitian && p - n == q && q >= r {
                let zeta: Vec<A::E> = (0..r).map(|k| m.get(k, q).clone()).collect();
                let f = a.conj(&val);
                out.push(Symbol { family: Family::HM, i: q, j: q, payload: Payload::Column { zeta, f } });
            }
        }
        (false, false) => {
            out.push(Symbol::scalar(fe, q - n, p - n, a.neg(&a.conj(&val))));
            if g.flavor == Flavor::Hermitian && q - n < r {
                let i = p - n;
                let zeta: Vec<A::E> = (0..r).map(|k| a.neg(&a.conj(m.get(n + i, n + k)))).collect();
                if let Some(s) = column_symbol(g, Family::HM, i, zeta) {
                    out.push(s);
                }
            }
        }
    }
    out.retain(|s| validate(g, s).is_ok());
    out
}

/// Greedily write `m` as a product of generators by peeling one generator at a time from either side,
/// always strictly reducing the number of entries that differ from I.
pub fn peel_elementary<A: FormAlg>(g: &Group<A>, m: &Mat<A::E>, max_steps: usize) -> Option<Word<A::E>> {
    let a = g.alg.as_ref();
    let d = g.dim();
    let mut cur = m.clone();
    let mut left: Vec<Symbol<A::E>> = Vec::new();
    let mut right: Vec<Symbol<A::E>> = Vec::new();
    for _ in 0..max_steps {
        let score = off_identity(g, &cur);
        if score == 0 {
            let mut w = Word::from_symbols(left);
            w.append(&Word::from_symbols(right.into_iter().rev().collect()));
            return Some(w);
        }
        let mut best: Option<(usize, bool, Symbol<A::E>, Mat<A::E>)> = None;
        for p in 0..d {
            for q in 0..d {
                if p == q || a.is_zero(cur.get(p, q)) {
                    continue;
                }
                for s in candidates(g, &cur, p, q) {
                    let inv = gen_inverse(g, &s).ok()?;
                    let mut l = cur.clone();
                    for x in inv.letters.iter().rev() {
                        apply_left(g, &x.sym, &mut l);
                    }
                    let mut rr = cur.clone();
                    for x in &inv.letters {
                        apply_right(g, &x.sym, &mut rr);
                    }
                    for (is_left, cand) in [(true, l), (false, rr)] {
                        let sc = off_identity(g, &cand);
                        if sc < score && best.as_ref().is_none_or(|b| sc < off_identity(g, &b.3)) {
                            best = Some((sc, is_left, s.clone(), cand));
                        }
                    }
                }
            }
        }
        let (_, is_left, s, next) = best?;
        if is_left {
            left.push(s);
        } else {
            right.push(s);
        }
        cur = next;
    }
    None
}
