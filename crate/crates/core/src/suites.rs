//! Seeded property suites shared by the CLI and the acceptance tests.

use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::form::{lambda_max, make_hyperbolic_double, FormRing};
use crate::gens::{
    commutator, commutator_factors, eval, eval_on_vector, factor_i_plus_m, gen_matrix, interleave_identity, lift_word,
    normal_form_congruent_x, split, column_symbol, conjugation_split, validate, Payload, Symbol, Word,
};
use crate::group::{parse_group, FGroup, PGroup};
use crate::io::{diagonalization_to_json, patch_report_to_json, reduction_to_json, word_to_json};
use crate::matrix::{self as mx, Mat};
use crate::reduce::{
    conjugate_into_e, diagonalize_mod_radical, patch_word, reduce_isotropic_unimodular, specialize_matrix, PatchStatus,
};
use crate::ring::{jacobson_radical, El, FiniteRing, Ideal, MPoly};
use crate::sample::{self, Rng64};

pub const SUITES: [&str; 10] = ["membership", "split", "commutator", "key5", "key1", "key3", "swan", "sol3a", "lg", "normality"];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cases: usize,
    /// Cap on the searched exponents in dilation and patching.
    pub cap_exponent: u32,
    pub word_len: usize,
    pub degree: usize,
    /// Ideal generators for the diagonalization suite; the Jacobson radical when empty.
    pub ideal: Vec<El>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, cases: 100, cap_exponent: 16, word_len: 5, degree: 3, ideal: Vec::new() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub index: usize,
    pub verdict: Verdict,
    pub detail: String,
    pub input: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub group: String,
    pub seed: u64,
    pub cases: usize,
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
    pub elapsed_ms: u128,
    pub max_case_ms: u128,
    pub results: Vec<CaseResult>,
}

impl SuiteReport {
    /// 0 all pass, 1 any failure, 2 unknowns but no failure.
    pub fn exit_code(&self) -> i32 {
        if self.fail > 0 {
            1
        } else if self.unknown > 0 {
            2
        } else {
            0
        }
    }
}

struct Ctx {
    g: FGroup,
    pg: PGroup,
    pool: Vec<Symbol<El>>,
    elems: Vec<El>,
    cfg: SuiteConfig,
}

struct Outcome {
    verdict: Verdict,
    detail: String,
    input: Value,
    witness: Option<Value>,
}

fn pass(input: Value, witness: Value) -> Outcome {
    Outcome { verdict: Verdict::Pass, detail: String::new(), input, witness: Some(witness) }
}

fn fail(input: Value, detail: impl Into<String>) -> Outcome {
    Outcome { verdict: Verdict::Fail, detail: detail.into(), input, witness: None }
}

fn unknown(input: Value, detail: impl Into<String>) -> Outcome {
    Outcome { verdict: Verdict::Unknown, detail: detail.into(), input, witness: None }
}

/// An error from a search cap is unknown; anything else is a failure.
fn from_error(input: Value, e: Error) -> Outcome {
    match e {
        Error::ResourceLimit(_) | Error::Unsupported(_) => unknown(input, e.to_string()),
        _ => fail(input, e.to_string()),
    }
}

fn case_rng(seed: u64, index: usize) -> Rng64 {
    sample::rng(seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn run_suite(name: &str, group: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let g = parse_group(group)?;
    run_suite_on(name, &g, cfg)
}

pub fn run_suite_on(name: &str, g: &FGroup, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let case: fn(&Ctx, &mut Rng64) -> Outcome = match name {
        "membership" => membership_case,
        "split" => split_case,
        "commutator" => commutator_case,
        "key5" => i_plus_m_case,
        "key1" => key1_case,
        "key3" => key3_case,
        "swan" => vector_case,
        "sol3a" => diagonal_case,
        "lg" => lg_case,
        "normality" => normality_case,
        _ => return Err(Error::Descriptor(format!("unknown suite '{name}'; expected one of {}", SUITES.join(", ")))),
    };
    let ctx = Ctx {
        g: g.clone(),
        pg: g.over_poly(),
        pool: sample::symbol_pool(g),
        elems: g.ring().elements().collect(),
        cfg: cfg.clone(),
    };
    if name == "sol3a" {
        diagonal_ideal(&ctx)?;
    }
    let start = Instant::now();
    let timed: Vec<(CaseResult, u128)> = (0..cfg.cases)
        .into_par_iter()
        .map(|i| {
            let t = Instant::now();
            let mut rng = case_rng(cfg.seed, i);
            let o = case(&ctx, &mut rng);
            (CaseResult { index: i, verdict: o.verdict, detail: o.detail, input: o.input, witness: o.witness }, t.elapsed().as_millis())
        })
        .collect();
    let count = |v: Verdict| timed.iter().filter(|(r, _)| r.verdict == v).count();
    Ok(SuiteReport {
        suite: name.to_string(),
        group: g.spec(),
        seed: cfg.seed,
        cases: cfg.cases,
        pass: count(Verdict::Pass),
        fail: count(Verdict::Fail),
        unknown: count(Verdict::Unknown),
        elapsed_ms: start.elapsed().as_millis(),
        max_case_ms: timed.iter().map(|(_, t)| *t).max().unwrap_or(0),
        results: timed.into_iter().map(|(r, _)| r).collect(),
    })
}

fn pick(ctx: &Ctx, rng: &mut Rng64) -> Symbol<El> {
    ctx.pool[rng.gen_range(0..ctx.pool.len())].clone()
}

fn sym_json(ctx: &Ctx, s: &Symbol<El>) -> Value {
    word_to_json(&ctx.g, &Word::single(s.clone()))
}

fn membership_case(ctx: &Ctx, rng: &mut Rng64) -> Outcome {
    let s = pick(ctx, rng);
    let input = sym_json(ctx, &s);
    match gen_matrix(&ctx.g, &s) {
        Ok(m) => {
            let v = ctx.g.membership(&m);
            if v.member {
                pass(input.clone(), input)
            } else {
                fail(input, v.diagnostic)
            }
        }
        Err(e) => fail(input, e.to_string()),
    }
}

fn split_case(ctx: &Ctx, rng: &mut Rng64) -> Outcome {
    let s = pick(ctx, rng);
    let same: Vec<&Symbol<El>> = ctx.pool.iter().filter(|t| (t.family, t.i, t.j) == (s.family, s.i, s.j)).collect();
    let t = same[rng.gen_range(0..same.len())].clone();
    let input = word_to_json(&ctx.g, &Word::from_symbols(vec![s.clone(), t.clone()]));
    match split(&ctx.g, &s, &t) {
        Ok((lhs, rhs)) => match (eval(&ctx.g, &lhs), eval(&ctx.g, &rhs)) {
            (Ok(a), Ok(b)) if a == b => pass(input, json!({"lhs": word_to_json(&ctx.g, &lhs), "rhs": word_to_json(&ctx.g, &rhs)})),
            _ => fail(input, "the two sides differ"),
        },
        Err(e) => fail(input, e.to_string()),
    }
}

fn commutator_case(ctx: &Ctx, rng: &mut Rng64) -> Outcome {
    let s = pick(ctx, rng);
    let input = sym_json(ctx, &s);
    match commutator_factors(&ctx.g, &s, &ctx.elems) {
        Ok(ws) => {
            let word = ws.iter().fold(Word::new(), |acc, w| acc.concat(&commutator(&w.w1, &w.w2)));
            match (eval(&ctx.g, &word), gen_matrix(&ctx.g, &s)) {
                (Ok(a), Ok(b)) if a == b => pass(
                    input,
                    Value::Array(ws.iter().map(|w| json!({"w1": word_to_json(&ctx.g, &w.w1), "w2": word_to_json(&ctx.g, &w.w2)})).collect()),
                ),
                _ => fail(input, "witness does not re-evaluate"),
            }
        }
        Err(e) => from_error(input, e),
    }
}

fn i_plus_m_case(ctx: &Ctx, rng: &mut Rng64) -> Outcome {
    let g = &ctx.g;
    let d = g.dim();
    let len = rng.gen_range(1..=ctx.cfg.word_len.max(1));
    let eps = sample::random_word(&ctx.pool, len, rng);
    let v = match eval_on_vector(g, &eps, &g.basis(d - 1)) {
        Ok(v) => v,
        Err(e) => return fail(json!({"eps": word_to_json(g, &eps)}), e.to_string()),
    };
    for _ in 0..2000 {
        let w: Vec<El> = (0..d).map(|_| ctx.elems[rng.gen_range(0..ctx.elems.len())]).collect();
        if g.inner(&v, &w) != 0 {
            continue;
        }
        let target = mx::add(g.alg.as_ref(), &g.identity(), &g.build_m(&v, &w));
        if !g.is_member(&target) {
            continue;
        }
        let input = json!({"eps": word_to_json(g, &eps), "w": w});
        return match factor_i_plus_m(g, &eps, &w) {
            Ok(word) if eval(g, &word).ok().as_ref() == Some(&target) => pass(input, word_to_json(g, &word)),
            Ok(_) => fail(input, "word does not evaluate to I + M(v, w)"),
            Err(e) => fail(input, e.to_string()),
        };
    }
    unknown(json!({"eps": word_to_json(g, &eps)}), "no admissible w sampled")
}

fn poly_identity_at_zero(pg: &PGroup, m: &Mat<MPoly>, g: &FGroup) -> bool {
    specialize_matrix(pg, m, 0, 0) == g.identity()
}

fn key1_case(ctx: &Ctx, rng: &mut Rng64) -> Outcome {
    let (g, pg) = (&ctx.g, &ctx.pg);
    let w = sample::random_poly_word_trivial_at_zero(pg, &ctx.pool, ctx.cfg.degree, ctx.cfg.word_len.min(4), rng);
    let input = word_to_json(pg, &w);
    let nf = match normal_form_congruent_x(pg, &w) {
        Ok(nf) => nf,
        Err(e) => return fail(input, e.to_string()),
    };
    let back = interleave_identity(&nf);
    let cores_ok = nf.iter().all(|f| gen_matrix(pg, &f.core).is_ok_and(|m| poly_identity_at_zero(pg, &m, g)));
    match (eval(pg, &back), eval(pg, &w)) {
        (Ok(a), Ok(b)) if a == b && cores_ok => pass(
            input,
            Value::Array(
                nf.iter().map(|f| json!({"eps": word_to_json(g, &f.eps), "core": word_to_json(pg, &Word::single(f.core.clone()))})).collect(),
            ),
        ),
        (Ok(a), Ok(b)) if a == b => fail(input, "a core symbol is not ≡ I mod X"),
        _ => fail(input, "conjugate product differs from the input"),
    }
}

/// Every entry of m − I divisible by X^k.
fn divisible_by_x(pg: &PGroup, m: &Mat<MPoly>, k: u16) -> bool {
    let diff = mx::sub(pg.alg.as_ref(), m, &pg.identity());
    diff.data.iter().all(|p| p.terms().iter().all(|((dx, _), _)| *dx >= k))
}

fn key3_case(ctx: &Ctx, rng: &mut Rng64) -> Outcome {
    let pg = &ctx.pg;
    let m: u16 = 1;
    let eps = lift_word(&sample::random_word(&ctx.pool, 2, rng));
    let theta = loop {
        let s = pick(ctx, rng);
        let sym = match &s.payload {
            Payload::Scalar(c) => Symbol::scalar(s.family, s.i, s.j, MPoly::monomial(*c, 2 * m, 0)),
            Payload::Column { zeta, .. } => {
                let z: Vec<MPoly> = zeta.iter().map(|&c| MPoly::monomial(c, 2 * m, 0)).collect();
                match column_symbol(pg, s.family, s.i, z) {
                    Some(t) => t,
                    None => continue,
                }
            }
        };
        if validate(pg, &sym).is_ok() && gen_matrix(pg, &sym).is_ok_and(|t| t != pg.identity()) {
            break sym;
        }
    };
    let input = json!({"eps": word_to_json(pg, &eps), "theta": word_to_json(pg, &Word::single(theta.clone()))});
    let e = match eval(pg, &eps) {
        Ok(e) => e,
        Err(err) => return fail(input, err.to_string()),
    };
    let target = pg.mul(&pg.mul(&e, &gen_matrix(pg, &theta).unwrap()), &pg.inverse(&e));
    match conjugation_split(pg, &eps, &theta, m) {
        Ok(w) => {
            let congruent = w.letters.iter().all(|l| gen_matrix(pg, &l.sym).is_ok_and(|x| divisible_by_x(pg, &x, m)));
            if eval(pg, &w).ok().as_ref() == Some(&target) && congruent {
                pass(input, word_to_json(pg, &w))
            } else {
                fail(input, "rewritten word does not verify")
            }
        }
        Err(e) => from_error(input, e),
    }
}

fn vector_case(ctx: &Ctx, rng: &mut Rng64) -> Outcome {
    let g = &ctx.g;
    let v = sample::random_isotropic_vector(g, &ctx.pool, ctx.cfg.word_len.max(6), rng);
    let input = json!(v);
    match reduce_isotropic_unimodular(g, &v) {
        Ok(r) => {
            if eval_on_vector(g, &r.word, &v).ok() == Some(g.basis(g.dim() - 1)) {
                pass(input, reduction_to_json(g, &r))
            } else {
                fail(input, "word does not carry v to e_2n")
            }
        }
        Err(e) => from_error(input, e),
    }
}

fn diagonal_ideal(ctx: &Ctx) -> Result<Ideal> {
    let ring = ctx.g.ring();
    let ideal = if ctx.cfg.ideal.is_empty() { jacobson_radical(ring) } else { Ideal::generated(ring, &ctx.cfg.ideal) };
    if !ideal.is_subset(&jacobson_radical(ring)) {
        return Err(Error::Precondition("the ideal is not inside the Jacobson radical".into()));
    }
    Ok(ideal)
}

fn diagonal_case(ctx: &Ctx, rng: &mut Rng64) -> Outcome {
    let g = &ctx.g;
    let ideal = diagonal_ideal(ctx).expect("checked before the run");
    let pool = sample::congruent_pool(g, |x| ideal.contains(x));
    let w = sample::random_word(&pool, ctx.cfg.word_len.max(6), rng);
    let beta = eval(g, &w).expect("pool symbols are valid");
    let input = json!({"word": word_to_json(g, &w)});
    match diagonalize_mod_radical(g, &beta, &ideal) {
        Ok(dg) => {
            let lhs = g.mul(&g.mul(&eval(g, &dg.left).unwrap(), &beta), &eval(g, &dg.right).unwrap());
            let congruent = dg.left.letters.iter().chain(&dg.right.letters).all(|l| {
                gen_matrix(g, &l.sym).is_ok_and(|m| crate::gens::congruent_to_identity(g, &m, |x| ideal.contains(*x)))
            });
            let ring = g.ring();
            let diag_ok = mx::is_diagonal(g.alg.as_ref(), &lhs)
                && (0..g.dim()).all(|i| ring.is_unit(*lhs.get(i, i)) && ideal.contains(ring.sub(*lhs.get(i, i), ring.one())));
            if lhs == dg.d && congruent && diag_ok {
                pass(input, diagonalization_to_json(g, &dg))
            } else {
                fail(input, "diagonalization does not verify")
            }
        }
        Err(e) => from_error(input, e),
    }
}

fn lg_case(ctx: &Ctx, rng: &mut Rng64) -> Outcome {
    let pg = &ctx.pg;
    let w = sample::random_poly_word_trivial_at_zero(pg, &ctx.pool, ctx.cfg.degree, 3, rng);
    let input = word_to_json(pg, &w);
    match patch_word(&ctx.g, &w, ctx.cfg.cap_exponent) {
        Ok(rep) => match &rep.status {
            PatchStatus::Success if eval(pg, &rep.word).ok() == eval(pg, &w).ok() => pass(input, patch_report_to_json(pg, &rep)),
            PatchStatus::Success => fail(input, "patched word differs from the input"),
            PatchStatus::Failure(m) => fail(input, m.clone()),
            PatchStatus::Unknown(m) => unknown(input, m.clone()),
        },
        Err(e) => from_error(input, e),
    }
}

fn normality_case(ctx: &Ctx, rng: &mut Rng64) -> Outcome {
    let g = &ctx.g;
    let b = sample::random_word(&ctx.pool, 4, rng);
    let a = sample::random_word(&ctx.pool, 2, rng);
    let beta = eval(g, &b).expect("pool symbols are valid");
    let input = json!({"beta": word_to_json(g, &b), "alpha": word_to_json(g, &a)});
    match conjugate_into_e(g, &beta, &a, ctx.cfg.cap_exponent) {
        Ok(w) => {
            let expect = g.mul(&g.mul(&beta, &eval(g, &a).unwrap()), &g.inverse(&beta));
            if eval(g, &w).ok().as_ref() == Some(&expect) {
                pass(input, word_to_json(g, &w))
            } else {
                fail(input, "word does not evaluate to βαβ⁻¹")
            }
        }
        Err(e) => from_error(input, e),
    }
}

/// Every λ with λλ̄ = 1 for ℤ/n (n = 2..16) and the hyperbolic doubles of ℤ/2, ℤ/3, ℤ/4.
pub fn catalog_rings() -> Result<Vec<(Arc<FiniteRing>, Vec<El>)>> {
    let mut out = Vec::new();
    for n in 2..=16 {
        let r = FiniteRing::zmod(n)?;
        let lambdas: Vec<El> = r.elements().filter(|&l| r.mul(l, r.conj(l)) == r.one()).collect();
        out.push((r, lambdas));
    }
    for n in 2..=4 {
        let r = FiniteRing::hyperbolic(&FiniteRing::zmod(n)?)?;
        let lambdas: Vec<El> = r.elements().filter(|&l| r.mul(l, r.conj(l)) == r.one()).collect();
        out.push((r, lambdas));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub rings: usize,
    pub parameters: usize,
    pub failures: Vec<String>,
}

/// Builds Λ_min, Λ_max, the canonical double parameter and Λ generated by each element of Λ_max, and
/// checks every axiom exhaustively.
pub fn form_axiom_sweep() -> Result<AxiomReport> {
    let mut rep = AxiomReport { rings: 0, parameters: 0, failures: Vec::new() };
    for (r, lambdas) in catalog_rings()? {
        rep.rings += 1;
        if matches!(r.kind(), crate::ring::RingKind::Hyperbolic { .. }) {
            if let crate::ring::RingKind::Hyperbolic { inner } = r.kind() {
                let f = make_hyperbolic_double(inner)?;
                rep.parameters += 1;
                if let Err(e) = f.check_axioms() {
                    rep.failures.push(format!("{}: {e}", f.spec()));
                }
            }
        }
        for l in lambdas {
            let maxs: Vec<El> = lambda_max(&r, l).iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as El).collect();
            let mut gens_list: Vec<Vec<El>> = vec![Vec::new(), maxs.clone()];
            gens_list.extend(maxs.iter().map(|&a| vec![a]));
            for gens in gens_list {
                rep.parameters += 1;
                match FormRing::build(&r, l, &gens).and_then(|f| f.check_axioms().map(|_| f)) {
                    Ok(f) => {
                        let set = f.lambda_set();
                        let min_ok = f.lambda_min_set().iter().all(|x| set.contains(x));
                        let max_ok = set.iter().all(|x| f.lambda_max_set().contains(x));
                        if !min_ok || !max_ok {
                            rep.failures.push(format!("{}: Λ outside [Λ_min, Λ_max]", f.spec()));
                        }
                    }
                    Err(e) => rep.failures.push(format!("{} λ={} gens={gens:?}: {e}", r.spec(), r.show(l))),
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_runs() {
        let cfg = SuiteConfig { cases: 3, seed: 1, ..Default::default() };
        for (name, group) in [
            ("membership", "zmod:4:lambda=3/herm:4:a=0"),
            ("split", "zmod:5:lambda=4/quad:3"),
            ("commutator", "zmod:4:lambda=3/quad:3"),
            ("key5", "zmod:5:lambda=4/quad:3"),
            ("key1", "zmod:4:lambda=3/quad:3"),
            ("key3", "zmod:5:lambda=4/quad:3"),
            ("swan", "zmod:4:lambda=3/herm:4:a=0"),
            ("sol3a", "zmod:8/quad:3"),
            ("lg", "zmod:6:lambda=5/quad:3"),
            ("normality", "zmod:5:lambda=4/quad:3"),
        ] {
            let rep = run_suite(name, group, &cfg).unwrap();
            assert_eq!(rep.pass, 3, "{name}: {:?}", rep.results.iter().map(|r| &r.detail).collect::<Vec<_>>());
        }
    }

    #[test]
    fn empty_and_unknown_suites() {
        let rep = run_suite("split", "zmod:5:lambda=4/quad:3", &SuiteConfig { cases: 0, ..Default::default() }).unwrap();
        assert_eq!((rep.cases, rep.exit_code()), (0, 0));
        assert!(run_suite("nope", "zmod:5:lambda=4/quad:3", &SuiteConfig::default()).is_err());
    }

    #[test]
    fn reports_are_reproducible() {
        let cfg = SuiteConfig { cases: 4, seed: 9, ..Default::default() };
        let a = run_suite("swan", "zmod:5:lambda=4/quad:3", &cfg).unwrap();
        let b = run_suite("swan", "zmod:5:lambda=4/quad:3", &cfg).unwrap();
        assert_eq!(serde_json::to_value(&a.results).unwrap(), serde_json::to_value(&b.results).unwrap());
    }
}
