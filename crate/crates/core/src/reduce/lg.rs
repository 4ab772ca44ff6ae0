//! Dilation, local-global patching over a finite commutative ring, and conjugation into E.

use std::sync::Arc;

use crate::alg::FormAlg;
use crate::error::{Error, Result};
use crate::form::induce_localized_parameter;
use crate::gens::{
    as_transvection, eval, factor_transvection, interleave_identity, lift_word, normal_form_congruent_x, positive_form,
    specialize_word, substitute_word, Word,
};
use crate::group::{FGroup, Flavor, Group, PGroup};
use crate::matrix::{self as mx, Mat};
use crate::ring::{enumerate_maximal_ideals, localize_at_maximal, El, LocalizationMap, MPoly, Subst};

use super::vector::{reduce_isotropic_unimodular, unimodular_certificate};

/// A localization R → eR together with the group of the same shape over eR.
#[derive(Clone, Debug)]
pub struct LocalSlice {
    pub loc: LocalizationMap,
    pub group: FGroup,
}

impl LocalSlice {
    pub fn idempotent(&self) -> El {
        self.loc.idem
    }
}

/// The group of the same shape over the localization.
pub fn local_group(g: &FGroup, loc: &LocalizationMap) -> Result<FGroup> {
    let f = Arc::new(induce_localized_parameter(&g.alg, loc)?);
    match g.flavor {
        Flavor::Quadratic => Group::quadratic(&f, g.n),
        Flavor::Hermitian => Group::hermitian(&f, g.n, g.a.iter().map(|&x| loc.apply(x)).collect()),
    }
}

/// One slice per maximal ideal, in the order the ideals are enumerated.
pub fn local_slices(g: &FGroup) -> Result<Vec<LocalSlice>> {
    let ring = g.ring();
    if !ring.is_commutative() {
        return Err(Error::Unsupported("localization needs a commutative ring".into()));
    }
    enumerate_maximal_ideals(ring)?
        .into_iter()
        .map(|(m, _)| {
            let loc = localize_at_maximal(ring, &m)?;
            let group = local_group(g, &loc)?;
            Ok(LocalSlice { loc, group })
        })
        .collect()
}

fn map_poly(pg: &PGroup, p: &MPoly, f: impl Fn(El) -> El) -> MPoly {
    pg.alg.poly.map_coeffs(p, f)
}

/// Image of a word over R[X, T] in eR[X, T].
pub fn localize_word(pg: &PGroup, loc: &LocalizationMap, w: &Word<MPoly>) -> Word<MPoly> {
    w.map_payloads(|p| map_poly(pg, p, |c| loc.apply(c)))
}

/// A word over eR[X, T] read as a word over R[X, T].
pub fn embed_word(pg: &PGroup, loc: &LocalizationMap, w: &Word<MPoly>) -> Word<MPoly> {
    w.map_payloads(|p| map_poly(pg, p, |c| loc.lift(c)))
}

pub fn localize_matrix(pg: &PGroup, loc: &LocalizationMap, m: &Mat<MPoly>) -> Mat<MPoly> {
    m.map(|p| map_poly(pg, p, |c| loc.apply(c)))
}

/// Substitute X ↦ x, T ↦ t in every entry.
pub fn specialize_matrix(pg: &PGroup, m: &Mat<MPoly>, x: El, t: El) -> Mat<El> {
    m.map(|p| pg.alg.poly.eval(p, x, t))
}

fn scaled_x(c: El) -> MPoly {
    MPoly::monomial(c, 1, 0)
}

/// Output of the dilation: `word` over R[X] (or R[X, T]) whose image in the localization is α_s(b'X),
/// where b' is the image of `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dilation {
    pub b: El,
    /// Smallest k with R → R_s injective on s^k R.
    pub conductor: u32,
    pub d: u16,
    pub m: u32,
    /// Number of conjugates in the normal form (0 when the word involves T).
    pub factors: usize,
    pub word: Word<MPoly>,
}

fn off_identity_in_slice(pg: &PGroup, loc: &LocalizationMap, m: &Mat<MPoly>) -> bool {
    let e = loc.idem;
    let r = &loc.source;
    let id = pg.identity();
    m.data.iter().zip(&id.data).all(|(p, q)| pg.alg.sub(p, q).terms().iter().all(|&(_, c)| r.mul(e, c) == c))
}

/// Carry a word over R_s[X] with value I at X = 0 back to R[X], dilating X by a power of s.
/// The exponents are searched upward to `cap`; the answer is certified by mapping it back to R_s and by
/// checking that it is trivial away from the slice, where the localization is injective.
pub fn dilate(g: &FGroup, loc: &LocalizationMap, alpha_s: &Word<MPoly>, cap: u32) -> Result<Dilation> {
    let pg = g.over_poly();
    let lg = local_group(g, loc)?;
    let lpg = lg.over_poly();
    let base = eval(&lpg, alpha_s)?;
    if !mx::is_identity(lg.alg.as_ref(), &specialize_matrix(&lpg, &base, 0, 0)) {
        return Err(Error::Precondition("the word is not the identity at X = 0".into()));
    }
    let conductor = loc.conductor(cap).ok_or_else(|| Error::ResourceLimit(format!("no conductor up to s^{cap}")))?;
    let ring = &loc.source;
    let s = loc.s.unwrap_or(loc.idem);
    let t_free = alpha_s.letters.iter().all(|l| match &l.sym.payload {
        crate::gens::Payload::Scalar(p) => p.deg_t().is_none(),
        crate::gens::Payload::Column { zeta, f } => zeta.iter().all(|p| p.deg_t().is_none()) && f.deg_t().is_none(),
    });
    let (core, factors) = if t_free {
        let nf = normal_form_congruent_x(&lpg, alpha_s)?;
        (interleave_identity(&nf), nf.len())
    } else {
        (alpha_s.clone(), 0)
    };
    for d in 0..=cap.min(u16::MAX as u32) as u16 {
        for m in 0..=cap {
            let b = ring.mul(ring.pow(s, conductor), ring.pow(ring.pow(s, m), d as u32));
            let bl = loc.apply(b);
            let mut w = core.clone();
            if t_free && d > 0 {
                // X ↦ X T^d, T ↦ s^m T, T ↦ 1
                w = substitute_word(&lpg, &w, &Subst::XTimesTPow(d));
                w = substitute_word(&lpg, &w, &Subst::ScaleT(loc.apply(ring.pow(s, m))));
                w = substitute_word(&lpg, &w, &Subst::TConst(lg.ring().one()));
                w = substitute_word(&lpg, &w, &Subst::ScaleX(loc.apply(ring.pow(s, conductor))));
            } else {
                w = substitute_word(&lpg, &w, &Subst::ScaleX(bl));
            }
            let global = embed_word(&pg, loc, &w);
            let Ok(value) = eval(&pg, &global) else { continue };
            let target = eval(&lpg, &substitute_word(&lpg, alpha_s, &Subst::ScaleX(bl)))?;
            if localize_matrix(&pg, loc, &value) == target && off_identity_in_slice(&pg, loc, &value) {
                return Ok(Dilation { b, conductor, d, m, factors, word: global });
            }
        }
    }
    Err(Error::ResourceLimit(format!("no dilation exponents up to {cap} certified")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatchStatus {
    Success,
    Failure(String),
    Unknown(String),
}

/// What each maximal ideal contributed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlicePiece {
    pub idempotent: El,
    pub local_word: Word<MPoly>,
    pub b: El,
    pub dilation: Dilation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchReport {
    pub input: Mat<MPoly>,
    pub pieces: Vec<SlicePiece>,
    pub word: Word<MPoly>,
    pub status: PatchStatus,
}

/// α(X) ∈ G(R[X]) with α(0) = I, elementary after localizing at each maximal ideal (with the local words
/// supplied in slice order), is assembled as Π θ_i(b_i X, (b_1 + … + b_{i−1}) X) with
/// θ_i(X, T) = α_i(X + T) α_i(T)⁻¹ and Σ b_i = 1.
pub fn local_global_patch(g: &FGroup, alpha: &Mat<MPoly>, local_words: &[Word<MPoly>], cap: u32) -> Result<PatchReport> {
    let pg = g.over_poly();
    let ring = g.ring().clone();
    if !mx::is_identity(g.alg.as_ref(), &specialize_matrix(&pg, alpha, 0, 0)) {
        return Err(Error::Precondition("α(0) ≠ I".into()));
    }
    if !pg.is_member(alpha) {
        return Err(Error::Precondition(format!("α is not in the group: {}", pg.membership(alpha).diagnostic)));
    }
    let slices = local_slices(g)?;
    if local_words.len() != slices.len() {
        return Err(Error::Dimension(format!("expected {} local words, got {}", slices.len(), local_words.len())));
    }
    let fail = |pieces: Vec<SlicePiece>, status: PatchStatus| PatchReport { input: alpha.clone(), pieces, word: Word::new(), status };
    let mut dilations = Vec::new();
    for (sl, w) in slices.iter().zip(local_words) {
        let lpg = sl.group.over_poly();
        let Ok(value) = eval(&lpg, w) else {
            return Ok(fail(Vec::new(), PatchStatus::Failure("a local word has an invalid symbol".into())));
        };
        if value != localize_matrix(&pg, &sl.loc, alpha) {
            return Ok(fail(Vec::new(), PatchStatus::Failure("a local word does not factor the localization of α".into())));
        }
        // θ(X, T) = α(X + T) α(T)⁻¹
        let x_plus_t = Subst::General(lpg.alg.add(&lpg.alg.poly.x(), &lpg.alg.poly.t()), lpg.alg.poly.t());
        let at_t = Subst::General(lpg.alg.poly.t(), lpg.alg.poly.t());
        let theta = substitute_word(&lpg, w, &x_plus_t).concat(&substitute_word(&lpg, w, &at_t).inverse());
        dilations.push(dilate(g, &sl.loc, &theta, cap)?);
    }
    // b_i = (dilation factor)_i · c_i with Σ b_i = 1
    let scales: Vec<El> = dilations.iter().map(|d| d.b).collect();
    let cert = unimodular_certificate(&ring, &scales)
        .ok_or_else(|| Error::Certification("the dilation factors do not generate the unit ideal".into()))?;
    let mut pieces = Vec::new();
    let mut word = Word::new();
    let mut partial = 0;
    for ((sl, w), (dil, &c)) in slices.iter().zip(local_words).zip(dilations.iter().zip(&cert.u)) {
        let b = ring.mul(dil.b, c);
        let sub = Subst::General(scaled_x(c), scaled_x(partial));
        let piece = substitute_word(&pg, &dil.word, &sub);
        // pieces multiply with the latest on the left
        word = piece.concat(&word);
        partial = ring.add(partial, b);
        pieces.push(SlicePiece { idempotent: sl.idempotent(), local_word: w.clone(), b, dilation: dil.clone() });
    }
    let status = match eval(&pg, &word) {
        Ok(v) if &v == alpha => PatchStatus::Success,
        Ok(_) => PatchStatus::Failure("the assembled word does not reproduce α".into()),
        Err(e) => PatchStatus::Failure(format!("the assembled word is invalid: {e}")),
    };
    Ok(PatchReport { input: alpha.clone(), pieces, word, status })
}

/// Patch a global word: the local factorizations are the word's images.
pub fn patch_word(g: &FGroup, w: &Word<MPoly>, cap: u32) -> Result<PatchReport> {
    let pg = g.over_poly();
    let alpha = eval(&pg, w)?;
    let locals: Vec<Word<MPoly>> = local_slices(g)?.iter().map(|sl| localize_word(&pg, &sl.loc, w)).collect();
    local_global_patch(g, &alpha, &locals, cap)
}

/// A word for β·eval(α)·β⁻¹. Each letter's conjugate T(βv, βw, c) is deformed to
/// γ(X) = T(βv, X·βw, X²c), factored locally (a transitive-action word for βv followed by a column
/// factorization), patched, and specialized at X = 1.
pub fn conjugate_into_e(g: &FGroup, beta: &Mat<El>, alpha: &Word<El>, cap: u32) -> Result<Word<El>> {
    if !g.is_member(beta) {
        return Err(Error::Precondition(format!("β is not in the group: {}", g.membership(beta).diagnostic)));
    }
    if mx::is_identity(g.alg.as_ref(), beta) {
        return Ok(alpha.clone());
    }
    let a = g.alg.as_ref();
    let pg = g.over_poly();
    let slices = local_slices(g)?;
    let beta_inv = g.inverse(beta);
    let mut out = Word::new();
    for l in positive_form(g, alpha)?.letters {
        let (v, w, c) = as_transvection(g, &l.sym);
        let v1 = mx::mat_vec(a, beta, &v);
        let w1 = mx::mat_vec(a, beta, &w);
        let target = g.mul(&g.mul(beta, &eval(g, &Word::single(l.sym.clone()))?), &beta_inv);
        if g.transvection(&v1, &w1, &c) != target {
            return Err(Error::Certification("conjugated generator is not T(βv, βw, c)".into()));
        }
        let x = pg.alg.poly.x();
        let wx: Vec<MPoly> = w1.iter().map(|&e| pg.alg.mul(&x, &MPoly::constant(e))).collect();
        let cx = MPoly::monomial(c, 2, 0);
        let vx: Vec<MPoly> = v1.iter().map(|&e| MPoly::constant(e)).collect();
        let gamma = pg.transvection(&vx, &wx, &cx);
        let mut locals = Vec::new();
        for sl in &slices {
            let lv: Vec<El> = v1.iter().map(|&e| sl.loc.apply(e)).collect();
            let red = reduce_isotropic_unimodular(&sl.group, &lv)?;
            let eps = lift_word(&red.word.inverse());
            let lpg = sl.group.over_poly();
            let lw: Vec<MPoly> = wx.iter().map(|p| map_poly(&pg, p, |e| sl.loc.apply(e))).collect();
            let lc = map_poly(&pg, &cx, |e| sl.loc.apply(e));
            locals.push(factor_transvection(&lpg, &eps, &lw, &lc)?);
        }
        let report = local_global_patch(g, &gamma, &locals, cap)?;
        match report.status {
            PatchStatus::Success => {}
            PatchStatus::Failure(m) | PatchStatus::Unknown(m) => return Err(Error::Certification(m)),
        }
        let at_one = specialize_word(&pg, &report.word, g.ring().one(), 0);
        if eval(g, &at_one)? != target {
            return Err(Error::Certification("the patched word at X = 1 is not the conjugate".into()));
        }
        out.append(&at_one);
    }
    let expect = g.mul(&g.mul(beta, &eval(g, alpha)?), &beta_inv);
    if eval(g, &out)? != expect {
        return Err(Error::Certification("the conjugate word does not verify".into()));
    }
    Ok(out)
}
