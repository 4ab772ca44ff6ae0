//! Words over R[X, T]: substitution, constant/core splitting, and the normal form of words ≡ I mod X.

use crate::error::{Error, Result};
use crate::group::PGroup;
use crate::ring::{MPoly, Subst};
use crate::ring::El;

use super::{column_symbol, eval, positive_form, split_column, Payload, Symbol, Word};
use super::transvection::peel_elementary;
use crate::alg::FormAlg;

/// Apply a substitution to every payload (ζ_f included).
pub fn substitute_word(pg: &PGroup, w: &Word<MPoly>, rule: &Subst) -> Word<MPoly> {
    w.map_payloads(|p| pg.alg.poly.substitute(p, rule))
}

/// Constant polynomials from base payloads.
pub fn lift_word(w: &Word<El>) -> Word<MPoly> {
    w.map_payloads(|&x| MPoly::constant(x))
}

/// Evaluate X and T at ring elements.
pub fn specialize_word(pg: &PGroup, w: &Word<MPoly>, x: El, t: El) -> Word<El> {
    w.map_payloads(|p| pg.alg.poly.eval(p, x, t))
}

fn const_part(p: &MPoly) -> MPoly {
    MPoly::constant(p.constant_term())
}

/// θ(p) = θ(p(0)) · core, where every payload of the core word has no constant term.
pub fn split_constant(pg: &PGroup, s: &Symbol<MPoly>) -> Result<(Symbol<MPoly>, Word<MPoly>)> {
    let a = pg.alg.as_ref();
    match &s.payload {
        Payload::Scalar(p) => {
            let p0 = const_part(p);
            let rest = a.sub(p, &p0);
            let c = Symbol::scalar(s.family, s.i, s.j, p0);
            let core = if rest.is_zero() { Word::new() } else { Word::single(Symbol::scalar(s.family, s.i, s.j, rest)) };
            Ok((c, core))
        }
        Payload::Column { zeta, f } => {
            let z0: Vec<MPoly> = zeta.iter().map(const_part).collect();
            let z1: Vec<MPoly> = zeta.iter().zip(&z0).map(|(p, q)| a.sub(p, q)).collect();
            let c = Symbol { family: s.family, i: s.i, j: s.i, payload: Payload::Column { zeta: z0, f: const_part(f) } };
            if z1.iter().all(|p| p.is_zero()) && (a.sub(f, &const_part(f))).is_zero() {
                return Ok((c, Word::new()));
            }
            let t = column_symbol(pg, s.family, s.i, z1)
                .ok_or_else(|| Error::Constraint("non-constant part of ζ has no ζ_f".into()))?;
            // c·t = s·corr, so s = c·t·corr⁻¹
            let (_, corr) = split_column(pg, &c, &t, Some(s))?;
            let mut core = Word::single(t);
            if let Some(k) = corr {
                let x = k.scalar_payload().cloned().unwrap();
                core.push(Symbol::scalar(k.family, k.i, k.j, a.neg(&x)));
            }
            Ok((c, core))
        }
    }
}

/// One factor ε·θ·ε⁻¹ of the normal form: ε over R, θ with payload in X·R[X].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruentFactor {
    pub eps: Word<El>,
    pub core: Symbol<MPoly>,
}

fn has_no_constant(s: &Symbol<MPoly>) -> bool {
    match &s.payload {
        Payload::Scalar(p) => p.constant_term() == 0,
        Payload::Column { zeta, f } => zeta.iter().all(|p| p.constant_term() == 0) && f.constant_term() == 0,
    }
}

fn base_word(w: &Word<MPoly>) -> Word<El> {
    w.map_payloads(|p| p.constant_term())
}

/// Write a word whose value is ≡ I mod X as Π ε_k θ_k ε_k⁻¹ with θ_k ≡ I mod X.
pub fn normal_form_congruent_x(pg: &PGroup, w: &Word<MPoly>) -> Result<Vec<CongruentFactor>> {
    let base = pg.base_group();
    let pos = positive_form(pg, w)?;
    let mut prefix: Word<El> = Word::new();
    let mut out = Vec::new();
    for l in &pos.letters {
        let (c, core) = split_constant(pg, &l.sym)?;
        let c0 = base_word(&Word::single(c));
        if !c0.letters.iter().all(|l| super::entries(&base, &l.sym).is_empty()) {
            prefix.append(&c0);
        }
        for k in core.letters {
            if !has_no_constant(&k.sym) {
                return Err(Error::Certification("core payload has a constant term".into()));
            }
            out.push(CongruentFactor { eps: prefix.clone(), core: k.sym });
        }
    }
    if !crate::matrix::is_identity(base.alg.as_ref(), &eval(&base, &prefix)?) {
        return Err(Error::Precondition("the word is not congruent to I modulo X".into()));
    }
    Ok(out)
}

/// The word Π ε_k θ_k ε_k⁻¹ described by a normal form.
pub fn interleave_identity(factors: &[CongruentFactor]) -> Word<MPoly> {
    let mut w = Word::new();
    for f in factors {
        let e = lift_word(&f.eps);
        w.append(&e);
        w.push(f.core.clone());
        w.append(&e.inverse());
    }
    w
}

fn divisible(s: &Symbol<MPoly>, k: u16) -> bool {
    let ok = |p: &MPoly| p.terms().iter().all(|((x, _), _)| *x >= k);
    match &s.payload {
        Payload::Scalar(p) => ok(p),
        Payload::Column { zeta, f } => zeta.iter().all(ok) && ok(f),
    }
}

/// Rewrite ε·θ·ε⁻¹ as a product of generators whose payloads are divisible by X^k.
/// ε·θ·ε⁻¹ is peeled directly; failing that, the commutator [ε, θ] is peeled and θ appended.
pub fn conjugation_split(pg: &PGroup, eps: &Word<MPoly>, theta: &Symbol<MPoly>, k: u16) -> Result<Word<MPoly>> {
    let e = eval(pg, eps)?;
    let t = eval(pg, &Word::single(theta.clone()))?;
    let target = pg.mul(&pg.mul(&e, &t), &pg.inverse(&e));
    let steps = 8 * pg.dim() * pg.dim();
    let good = |w: &Word<MPoly>| w.letters.iter().all(|l| divisible(&l.sym, k));
    if let Some(w) = peel_elementary(pg, &target, steps) {
        if good(&w) && eval(pg, &w)? == target {
            return Ok(w);
        }
    }
    let comm = pg.mul(&target, &pg.inverse(&t));
    if let Some(mut w) = peel_elementary(pg, &comm, steps) {
        w.push(theta.clone());
        if good(&w) && eval(pg, &w)? == target {
            return Ok(w);
        }
    }
    Err(Error::Certification(format!("could not split the conjugate into payloads divisible by X^{k}")))
}
