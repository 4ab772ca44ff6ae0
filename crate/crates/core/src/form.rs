//! Form parameters Λ with Λ_min ⊆ Λ ⊆ Λ_max, and the form rings built from them.

use std::sync::Arc;

use crate::alg::FormAlg;
use crate::error::{Error, Result};
use crate::ring::{self, El, FiniteRing, LocalizationMap, MPoly, ParsedRing, PolyRing, RingKind};

/// {a − λā : a ∈ R}, closed additively.
pub fn lambda_min(ring: &FiniteRing, lambda: El) -> Vec<bool> {
    let img: Vec<El> = ring.elements().map(|a| ring.sub(a, ring.mul(lambda, ring.conj(a)))).collect();
    ring::local_additive_closure(ring, &img)
}

/// {a : a = −λā}.
pub fn lambda_max(ring: &FiniteRing, lambda: El) -> Vec<bool> {
    ring.elements().map(|a| a == ring.neg(ring.mul(lambda, ring.conj(a)))).collect()
}

/// Check λλ̄ = 1 and that λ is central.
pub fn check_multiplier(ring: &FiniteRing, lambda: El) -> Result<()> {
    if ring.mul(lambda, ring.conj(lambda)) != ring.one() {
        return Err(Error::MultiplierInvalid(format!("λλ̄ ≠ 1 for λ = {}", ring.show(lambda))));
    }
    if !ring.is_central(lambda) {
        return Err(Error::MultiplierInvalid(format!("λ = {} is not central", ring.show(lambda))));
    }
    Ok(())
}

fn members(mask: &[bool]) -> Vec<El> {
    mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i as El).collect()
}

/// A finite ring with multiplier λ and form parameter Λ, all validated.
#[derive(Clone, Debug)]
pub struct FormRing {
    pub ring: Arc<FiniteRing>,
    pub lambda: El,
    lam: Vec<bool>,
    lam_min: Vec<bool>,
    lam_max: Vec<bool>,
    pub gens: Vec<El>,
    f_table: Vec<Option<El>>,
}

impl FormRing {
    /// Smallest Λ containing Λ_min and `gens`, closed under addition and a ↦ x̄ax.
    pub fn build(ring: &Arc<FiniteRing>, lambda: El, gens: &[El]) -> Result<FormRing> {
        check_multiplier(ring, lambda)?;
        let r = ring.as_ref();
        let lam_min = lambda_min(r, lambda);
        let lam_max = lambda_max(r, lambda);
        let mut mask = lam_min.clone();
        for &g in gens {
            mask[g as usize] = true;
        }
        loop {
            let cur = members(&mask);
            let mut seeds = cur.clone();
            for &a in &cur {
                for x in r.elements() {
                    seeds.push(r.mul(r.mul(r.conj(x), a), x));
                }
            }
            let next = ring::local_additive_closure(r, &seeds);
            if next == mask {
                break;
            }
            mask = next;
            if let Some(bad) = (0..r.size()).find(|&i| mask[i] && !lam_max[i]) {
                return Err(Error::InvalidFormParameter(r.show(bad as El)));
            }
        }
        if let Some(bad) = (0..r.size()).find(|&i| mask[i] && !lam_max[i]) {
            return Err(Error::InvalidFormParameter(r.show(bad as El)));
        }
        let mut f_table = vec![None; r.size()];
        for z in r.elements() {
            let t = r.add(z, r.mul(lambda, r.conj(z)));
            if f_table[t as usize].is_none() {
                f_table[t as usize] = Some(z);
            }
        }
        Ok(FormRing { ring: ring.clone(), lambda, lam: mask, lam_min, lam_max, gens: gens.to_vec(), f_table })
    }

    pub fn lambda_set(&self) -> Vec<El> {
        members(&self.lam)
    }

    pub fn lambda_min_set(&self) -> Vec<El> {
        members(&self.lam_min)
    }

    pub fn lambda_max_set(&self) -> Vec<El> {
        members(&self.lam_max)
    }

    pub fn mask(&self) -> &[bool] {
        &self.lam
    }

    pub fn in_lambda_min(&self, a: El) -> bool {
        self.lam_min[a as usize]
    }

    /// Form-ring spec string: `<ring>:lambda=<v>;gens=<...>`. Empty generators are left out except over a
    /// hyperbolic double, where leaving them out would mean the canonical Λ.
    pub fn spec(&self) -> String {
        let r = &self.ring;
        let gens: Vec<String> = self.gens.iter().map(|&g| r.show(g)).collect();
        let head = format!("{}:lambda={}", r.spec(), r.show(self.lambda));
        if gens.is_empty() && !matches!(r.kind(), crate::ring::RingKind::Hyperbolic { .. }) {
            head
        } else {
            format!("{head};gens={}", gens.join(","))
        }
    }

    /// Exhaustive verification of the form-parameter axioms.
    pub fn check_axioms(&self) -> Result<()> {
        let r = &self.ring;
        if !self.lam[0] {
            return Err(Error::InvalidFormParameter("0 missing".into()));
        }
        for a in r.elements() {
            if self.lam_min[a as usize] && !self.lam[a as usize] {
                return Err(Error::InvalidFormParameter(format!("Λ_min element {} missing", r.show(a))));
            }
            if self.lam[a as usize] && !self.lam_max[a as usize] {
                return Err(Error::InvalidFormParameter(r.show(a)));
            }
            if !self.lam[a as usize] {
                continue;
            }
            for b in r.elements() {
                if self.lam[b as usize] && !self.lam[r.add(a, b) as usize] {
                    return Err(Error::InvalidFormParameter(format!("not additively closed at {}", r.show(a))));
                }
                let c = r.mul(r.mul(r.conj(b), a), b);
                if !self.lam[c as usize] {
                    return Err(Error::InvalidFormParameter(format!("not closed under conjugation at {}", r.show(a))));
                }
            }
        }
        Ok(())
    }
}

impl FormAlg for FormRing {
    type E = El;

    fn zero(&self) -> El {
        0
    }
    fn one(&self) -> El {
        self.ring.one()
    }
    fn add(&self, a: &El, b: &El) -> El {
        self.ring.add(*a, *b)
    }
    fn neg(&self, a: &El) -> El {
        self.ring.neg(*a)
    }
    fn mul(&self, a: &El, b: &El) -> El {
        self.ring.mul(*a, *b)
    }
    fn conj(&self, a: &El) -> El {
        self.ring.conj(*a)
    }
    fn is_zero(&self, a: &El) -> bool {
        *a == 0
    }
    fn inv(&self, a: &El) -> Option<El> {
        self.ring.inv(*a)
    }
    fn lambda(&self) -> El {
        self.lambda
    }
    fn in_lambda(&self, a: &El) -> bool {
        self.lam[*a as usize]
    }
    fn in_lambda_max(&self, a: &El) -> bool {
        self.lam_max[*a as usize]
    }
    fn in_lambda_min(&self, a: &El) -> bool {
        self.lam_min[*a as usize]
    }
    fn solve_f(&self, t: &El) -> Option<El> {
        self.f_table[*t as usize]
    }
    fn show(&self, a: &El) -> String {
        self.ring.show(*a)
    }
}

/// Z/n with trivial involution and multiplier λ (λ² ≡ 1 required).
pub fn make_zmod(n: u32, lambda: i64) -> Result<(Arc<FiniteRing>, El)> {
    let r = FiniteRing::zmod(n)?;
    let l = r.from_int(lambda);
    if r.mul(l, l) != r.one() {
        return Err(Error::MultiplierInvalid(format!("{lambda}² ≢ 1 mod {n}")));
    }
    Ok((r, l))
}

/// R ⊕ R° with λ = (1,1) and the canonical Λ = {(x, −x)}.
pub fn make_hyperbolic_double(inner: &Arc<FiniteRing>) -> Result<FormRing> {
    let r = FiniteRing::hyperbolic(inner)?;
    let k = inner.size() as El;
    let gens: Vec<El> = inner.elements().map(|x| x + k * inner.neg(x)).collect();
    let f = FormRing::build(&r, r.one(), &gens)?;
    Ok(FormRing { gens: Vec::new(), ..f })
}

/// The form parameter induced on R[X] (and R[X, T]) by (R, Λ).
/// A coefficient of X^i T^j must lie in Λ when i and j are both even and in Λ_min otherwise.
#[derive(Clone, Debug)]
pub struct PolyFormRing {
    pub base: Arc<FormRing>,
    pub poly: PolyRing,
}

impl PolyFormRing {
    pub fn new(base: &Arc<FormRing>) -> PolyFormRing {
        PolyFormRing { base: base.clone(), poly: PolyRing::new(&base.ring) }
    }

    pub fn constant(&self, a: El) -> MPoly {
        MPoly::constant(a)
    }
}

impl FormAlg for PolyFormRing {
    type E = MPoly;

    fn zero(&self) -> MPoly {
        MPoly::zero()
    }
    fn one(&self) -> MPoly {
        MPoly::constant(self.base.ring.one())
    }
    fn add(&self, a: &MPoly, b: &MPoly) -> MPoly {
        self.poly.add(a, b)
    }
    fn neg(&self, a: &MPoly) -> MPoly {
        self.poly.neg(a)
    }
    fn mul(&self, a: &MPoly, b: &MPoly) -> MPoly {
        self.poly.mul(a, b)
    }
    fn conj(&self, a: &MPoly) -> MPoly {
        self.poly.conj(a)
    }
    fn is_zero(&self, a: &MPoly) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &MPoly) -> Option<MPoly> {
        if a.terms().len() == 1 && a.terms()[0].0 == (0, 0) {
            self.base.ring.inv(a.terms()[0].1).map(MPoly::constant)
        } else {
            None
        }
    }
    fn lambda(&self) -> MPoly {
        MPoly::constant(self.base.lambda)
    }
    fn in_lambda(&self, a: &MPoly) -> bool {
        a.terms().iter().all(|&((x, t), c)| if x % 2 == 0 && t % 2 == 0 { self.base.in_lambda(&c) } else { self.base.in_lambda_min(c) })
    }
    fn in_lambda_max(&self, a: &MPoly) -> bool {
        a.terms().iter().all(|(_, c)| self.base.in_lambda_max(c))
    }
    fn in_lambda_min(&self, a: &MPoly) -> bool {
        a.terms().iter().all(|(_, c)| self.base.in_lambda_min(*c))
    }
    fn solve_f(&self, t: &MPoly) -> Option<MPoly> {
        let mut out = MPoly::zero();
        for &((x, y), c) in t.terms() {
            let z = self.base.solve_f(&c)?;
            out = self.poly.add(&out, &MPoly::monomial(z, x, y));
        }
        Some(out)
    }
    fn show(&self, a: &MPoly) -> String {
        self.poly.show(a)
    }
}

/// Λ_s: the image of Λ under a localization, closed in the target.
pub fn induce_localized_parameter(f: &FormRing, loc: &LocalizationMap) -> Result<FormRing> {
    let gens: Vec<El> = f.lambda_set().iter().map(|&a| loc.apply(a)).collect();
    FormRing::build(&loc.target, loc.apply(f.lambda), &gens)
}

/// Either kind of parsed form ring.
#[derive(Clone, Debug)]
pub enum ParsedForm {
    Finite(Arc<FormRing>),
    Poly(Arc<PolyFormRing>),
}

/// Parse `<ring>[:lambda=<v>][;gens=<e1,e2,...>]`. The hyperbolic double defaults to its canonical Λ.
pub fn parse_form_ring(spec: &str) -> Result<ParsedForm> {
    let spec = spec.trim();
    let (ring_part, gens_part) = match spec.find(";gens=") {
        Some(i) => (&spec[..i], Some(&spec[i + 6..])),
        None => (spec, None),
    };
    let (ring_part, lambda_part) = match ring_part.find(":lambda=") {
        Some(i) => (&ring_part[..i], Some(&ring_part[i + 8..])),
        None => (ring_part, None),
    };
    let (parsed, _) = (ring::parse_ring(ring_part)?, ());
    let (base, poly) = match parsed {
        ParsedRing::Finite(r) => (r, false),
        ParsedRing::Poly(r) => (r, true),
    };
    let lambda = match lambda_part {
        Some(v) => ring::parse_element(&base, v)?,
        None => base.one(),
    };
    if let RingKind::Zmod { n } = base.kind() {
        if base.mul(lambda, lambda) != base.one() {
            return Err(Error::MultiplierInvalid(format!("{}² ≢ 1 mod {n}", base.show(lambda))));
        }
    }
    let mut gens = Vec::new();
    if let Some(g) = gens_part {
        for tok in split_list(g) {
            gens.push(ring::parse_element(&base, tok)?);
        }
    }
    let form = if matches!(base.kind(), RingKind::Hyperbolic { .. }) && lambda_part.is_none() && gens.is_empty() {
        let RingKind::Hyperbolic { inner } = base.kind() else { unreachable!() };
        make_hyperbolic_double(inner)?
    } else {
        FormRing::build(&base, lambda, &gens)?
    };
    let form = Arc::new(form);
    Ok(if poly { ParsedForm::Poly(Arc::new(PolyFormRing::new(&form))) } else { ParsedForm::Finite(form) })
}

pub(crate) fn split_list(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out.into_iter().map(str::trim).filter(|t| !t.is_empty()).collect()
}

/// Parse a finite form ring, rejecting polynomial specs.
pub fn parse_finite_form_ring(spec: &str) -> Result<Arc<FormRing>> {
    match parse_form_ring(spec)? {
        ParsedForm::Finite(f) => Ok(f),
        ParsedForm::Poly(_) => Err(Error::Parse { pos: 0, msg: "expected a finite ring, got poly:".into() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(f: &FormRing) -> Vec<El> {
        f.lambda_set()
    }

    #[test]
    fn lambda_min_examples() {
        let r5 = FiniteRing::zmod(5).unwrap();
        assert_eq!(members(&lambda_min(&r5, 1)), vec![0]);
        assert_eq!(members(&lambda_min(&r5, 4)), vec![0, 1, 2, 3, 4]);
        let r4 = FiniteRing::zmod(4).unwrap();
        assert_eq!(members(&lambda_min(&r4, 3)), vec![0, 2]);
    }

    #[test]
    fn lambda_max_examples() {
        let r4 = FiniteRing::zmod(4).unwrap();
        assert_eq!(members(&lambda_max(&r4, 1)), vec![0, 2]);
        let r5 = FiniteRing::zmod(5).unwrap();
        assert_eq!(members(&lambda_max(&r5, 1)), vec![0]);
        assert_eq!(members(&lambda_max(&r5, 4)).len(), 5);
    }

    #[test]
    fn build_examples() {
        let r4 = FiniteRing::zmod(4).unwrap();
        assert_eq!(set(&FormRing::build(&r4, 1, &[2]).unwrap()), vec![0, 2]);
        let r5 = FiniteRing::zmod(5).unwrap();
        assert_eq!(set(&FormRing::build(&r5, 1, &[]).unwrap()), vec![0]);
        assert_eq!(FormRing::build(&r5, 1, &[1]).unwrap_err(), Error::InvalidFormParameter("1".into()));
    }

    #[test]
    fn zmod_multiplier() {
        assert!(make_zmod(5, 1).is_ok());
        assert_eq!(make_zmod(8, 3).unwrap().1, 3);
        assert!(matches!(make_zmod(6, 2), Err(Error::MultiplierInvalid(_))));
    }

    #[test]
    fn hyperbolic_canonical_parameter() {
        let f = make_hyperbolic_double(&FiniteRing::zmod(2).unwrap()).unwrap();
        let shown: Vec<String> = f.lambda_set().iter().map(|&a| f.ring.show(a)).collect();
        assert_eq!(shown, vec!["(0,0)", "(1,1)"]);
        f.check_axioms().unwrap();
    }

    #[test]
    fn poly_parameter_examples() {
        let r5 = FiniteRing::zmod(5).unwrap();
        let f = Arc::new(FormRing::build(&r5, 4, &[1]).unwrap());
        let p = PolyFormRing::new(&f);
        assert!(p.in_lambda(&MPoly::constant(3)));
        assert!(p.in_lambda(&MPoly::monomial(3, 2, 0)));
        let f1 = Arc::new(FormRing::build(&r5, 1, &[]).unwrap());
        let p1 = PolyFormRing::new(&f1);
        assert!(!p1.in_lambda(&p1.poly.x()));
    }

    #[test]
    fn localized_parameter_z6() {
        let r6 = FiniteRing::zmod(6).unwrap();
        let f = FormRing::build(&r6, 5, &[]).unwrap();
        assert_eq!(f.lambda_set(), vec![0, 2, 4]);
        let loc = ring::localize_at_element(&r6, 4).unwrap();
        let fs = induce_localized_parameter(&f, &loc).unwrap();
        assert_eq!(fs.lambda_set().len(), 3);
    }

    #[test]
    fn parse_specs() {
        let f = parse_finite_form_ring("zmod:5:lambda=1;gens=").unwrap();
        assert_eq!(f.lambda_set(), vec![0]);
        assert!(matches!(parse_form_ring("zmod:6:lambda=2"), Err(Error::MultiplierInvalid(_))));
        let h = parse_finite_form_ring("hyp:zmod:2").unwrap();
        assert_eq!(h.lambda_set().len(), 2);
        assert!(matches!(parse_form_ring("poly:zmod:5:lambda=4;gens=1").unwrap(), ParsedForm::Poly(_)));
    }
}
