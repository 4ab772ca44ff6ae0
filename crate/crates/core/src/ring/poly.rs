use std::collections::BTreeMap;
use std::sync::Arc;

use super::{El, FiniteRing};

/// Element of R[X, T] as a sorted list of ((deg X, deg T), nonzero coefficient).
/// Univariate polynomials simply never mention T.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MPoly {
    terms: Vec<((u16, u16), El)>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly { terms: Vec::new() }
    }

    pub fn constant(c: El) -> MPoly {
        MPoly::monomial(c, 0, 0)
    }

    pub fn monomial(c: El, dx: u16, dt: u16) -> MPoly {
        if c == 0 {
            MPoly::zero()
        } else {
            MPoly { terms: vec![((dx, dt), c)] }
        }
    }

    /// From coefficients of 1, X, X², … ; trailing zeros are dropped.
    pub fn from_coeffs(cs: &[El]) -> MPoly {
        MPoly { terms: cs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| ((i as u16, 0), c)).collect() }
    }

    pub fn terms(&self) -> &[((u16, u16), El)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, dx: u16, dt: u16) -> El {
        self.terms.iter().find(|(d, _)| *d == (dx, dt)).map(|&(_, c)| c).unwrap_or(0)
    }

    /// Coefficients in X (T-free part assumed), dense and stripped.
    pub fn coeffs_x(&self) -> Vec<El> {
        let deg = self.terms.iter().map(|((x, _), _)| *x as usize + 1).max().unwrap_or(0);
        let mut out = vec![0; deg];
        for &((x, t), c) in &self.terms {
            if t == 0 {
                out[x as usize] = c;
            }
        }
        out
    }

    pub fn deg_x(&self) -> Option<u16> {
        self.terms.iter().map(|((x, _), _)| *x).max()
    }

    pub fn deg_t(&self) -> Option<u16> {
        self.terms.iter().map(|((_, t), _)| *t).max()
    }

    pub fn constant_term(&self) -> El {
        self.coeff(0, 0)
    }

    fn from_map(m: BTreeMap<(u16, u16), El>) -> MPoly {
        MPoly { terms: m.into_iter().filter(|&(_, c)| c != 0).collect() }
    }
}

/// A substitution homomorphism on R[X, T].
#[derive(Clone, Debug)]
pub enum Subst {
    /// X ↦ c·X
    ScaleX(El),
    /// X ↦ X·T^d
    XTimesTPow(u16),
    /// T ↦ c·T
    ScaleT(El),
    /// X ↦ c
    XConst(El),
    /// T ↦ c
    TConst(El),
    /// X ↦ p, T ↦ q for arbitrary polynomials with central coefficients
    General(MPoly, MPoly),
}

/// Arithmetic on R[X, T] for a finite base ring R.
#[derive(Clone, Debug)]
pub struct PolyRing {
    pub base: Arc<FiniteRing>,
}

impl PolyRing {
    pub fn new(base: &Arc<FiniteRing>) -> PolyRing {
        PolyRing { base: base.clone() }
    }

    pub fn x(&self) -> MPoly {
        MPoly::monomial(self.base.one(), 1, 0)
    }

    pub fn t(&self) -> MPoly {
        MPoly::monomial(self.base.one(), 0, 1)
    }

    pub fn add(&self, a: &MPoly, b: &MPoly) -> MPoly {
        let r = &self.base;
        let mut m: BTreeMap<(u16, u16), El> = a.terms.iter().copied().collect();
        for &(d, c) in &b.terms {
            let e = m.entry(d).or_insert(0);
            *e = r.add(*e, c);
        }
        MPoly::from_map(m)
    }

    pub fn neg(&self, a: &MPoly) -> MPoly {
        MPoly { terms: a.terms.iter().map(|&(d, c)| (d, self.base.neg(c))).collect() }
    }

    pub fn sub(&self, a: &MPoly, b: &MPoly) -> MPoly {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &MPoly, b: &MPoly) -> MPoly {
        let r = &self.base;
        let mut m: BTreeMap<(u16, u16), El> = BTreeMap::new();
        for &((ax, at), ac) in &a.terms {
            for &((bx, bt), bc) in &b.terms {
                let e = m.entry((ax + bx, at + bt)).or_insert(0);
                *e = r.add(*e, r.mul(ac, bc));
            }
        }
        MPoly::from_map(m)
    }

    pub fn scale(&self, c: El, a: &MPoly) -> MPoly {
        MPoly::from_map(a.terms.iter().map(|&(d, x)| (d, self.base.mul(c, x))).collect())
    }

    /// Involution acts on coefficients; the variables are fixed.
    pub fn conj(&self, a: &MPoly) -> MPoly {
        MPoly { terms: a.terms.iter().map(|&(d, c)| (d, self.base.conj(c))).collect() }
    }

    pub fn map_coeffs(&self, a: &MPoly, f: impl Fn(El) -> El) -> MPoly {
        MPoly::from_map(a.terms.iter().map(|&(d, c)| (d, f(c))).collect())
    }

    pub fn pow(&self, a: &MPoly, k: u16) -> MPoly {
        let mut r = MPoly::constant(self.base.one());
        for _ in 0..k {
            r = self.mul(&r, a);
        }
        r
    }

    pub fn substitute(&self, p: &MPoly, rule: &Subst) -> MPoly {
        let r = &self.base;
        match rule {
            Subst::ScaleX(c) => MPoly::from_map(p.terms.iter().map(|&((x, t), a)| ((x, t), r.mul(a, r.pow(*c, x as u32)))).collect()),
            Subst::ScaleT(c) => MPoly::from_map(p.terms.iter().map(|&((x, t), a)| ((x, t), r.mul(a, r.pow(*c, t as u32)))).collect()),
            Subst::XTimesTPow(d) => MPoly::from_map(p.terms.iter().map(|&((x, t), a)| ((x, t + x * d), a)).collect()),
            Subst::XConst(c) => self.substitute(p, &Subst::General(MPoly::constant(*c), self.t())),
            Subst::TConst(c) => self.substitute(p, &Subst::General(self.x(), MPoly::constant(*c))),
            Subst::General(px, pt) => {
                let mut acc = MPoly::zero();
                for &((x, t), a) in &p.terms {
                    let term = self.mul(&self.pow(px, x), &self.pow(pt, t));
                    acc = self.add(&acc, &self.scale(a, &term));
                }
                acc
            }
        }
    }

    /// Evaluate X and T at ring elements.
    pub fn eval(&self, p: &MPoly, x: El, t: El) -> El {
        let r = &self.base;
        p.terms.iter().fold(0, |acc, &((dx, dt), a)| r.add(acc, r.mul(a, r.mul(r.pow(x, dx as u32), r.pow(t, dt as u32)))))
    }

    /// True when every term has X-degree at least k.
    pub fn divisible_by_x_pow(&self, p: &MPoly, k: u16) -> bool {
        p.terms.iter().all(|((x, _), _)| *x >= k)
    }

    /// Split into the X-degree-0 part and the rest.
    pub fn split_x0(&self, p: &MPoly) -> (MPoly, MPoly) {
        let (a, b): (Vec<_>, Vec<_>) = p.terms.iter().partition(|((x, _), _)| *x == 0);
        (MPoly { terms: a }, MPoly { terms: b })
    }

    pub fn show(&self, p: &MPoly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let r = &self.base;
        p.terms
            .iter()
            .map(|&((x, t), c)| {
                let mut s = r.show(c);
                if x > 0 {
                    s.push_str(if x == 1 { "X".into() } else { format!("X^{x}") }.as_str());
                }
                if t > 0 {
                    s.push_str(if t == 1 { "T".into() } else { format!("T^{t}") }.as_str());
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_examples() {
        let r5 = FiniteRing::zmod(5).unwrap();
        let p = PolyRing::new(&r5);
        let x2 = MPoly::monomial(1, 2, 0);
        assert_eq!(p.substitute(&x2, &Subst::ScaleX(2)), MPoly::monomial(4, 2, 0));
        let x = p.x();
        assert_eq!(p.substitute(&x, &Subst::XTimesTPow(3)), MPoly::monomial(1, 1, 3));
        let r6 = FiniteRing::zmod(6).unwrap();
        let p6 = PolyRing::new(&r6);
        let q = MPoly::from_coeffs(&[1, 3]);
        assert_eq!(p6.substitute(&q, &Subst::XConst(0)), MPoly::constant(1));
    }

    #[test]
    fn trailing_zeros_are_stripped() {
        let a = MPoly::from_coeffs(&[1, 2, 0, 0]);
        assert_eq!(a.coeffs_x(), vec![1, 2]);
        let r = FiniteRing::zmod(4).unwrap();
        let p = PolyRing::new(&r);
        assert!(p.add(&MPoly::from_coeffs(&[0, 2]), &MPoly::from_coeffs(&[0, 2])).is_zero());
    }
}
