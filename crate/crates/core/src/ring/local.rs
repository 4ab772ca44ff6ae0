use std::sync::Arc;

use super::{El, FiniteRing, NONE};
use crate::error::{Error, Result};

/// A subset of a ring's elements, stored as a membership mask.
#[derive(Clone, Debug, PartialEq)]
pub struct Ideal {
    pub mask: Vec<bool>,
}

impl Ideal {
    pub fn from_elements(ring: &FiniteRing, elems: &[El]) -> Ideal {
        let mut mask = vec![false; ring.size()];
        for &e in elems {
            mask[e as usize] = true;
        }
        Ideal { mask }
    }

    /// Two-sided ideal generated by the given elements.
    pub fn generated(ring: &FiniteRing, gens: &[El]) -> Ideal {
        let mut seeds: Vec<El> = Vec::new();
        for &g in gens {
            for x in ring.elements() {
                for y in ring.elements() {
                    seeds.push(ring.mul(ring.mul(x, g), y));
                }
            }
        }
        Ideal { mask: additive_closure(ring, &seeds) }
    }

    /// Left ideal Σ R·g.
    pub fn left_generated(ring: &FiniteRing, gens: &[El]) -> Ideal {
        let seeds: Vec<El> = gens.iter().flat_map(|&g| ring.elements().map(move |x| (x, g))).map(|(x, g)| ring.mul(x, g)).collect();
        Ideal { mask: additive_closure(ring, &seeds) }
    }

    pub fn contains(&self, a: El) -> bool {
        self.mask[a as usize]
    }

    pub fn elements(&self) -> Vec<El> {
        self.mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i as El).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b)
    }

    pub fn is_zero(&self) -> bool {
        self.mask.iter().skip(1).all(|&m| !m)
    }
}

pub(crate) fn additive_closure(ring: &FiniteRing, seeds: &[El]) -> Vec<bool> {
    let mut mask = vec![false; ring.size()];
    mask[0] = true;
    let mut members = vec![0 as El];
    let mut frontier: Vec<El> = Vec::new();
    for &s in seeds {
        if !mask[s as usize] {
            mask[s as usize] = true;
            members.push(s);
            frontier.push(s);
        }
    }
    while let Some(a) = frontier.pop() {
        let snapshot = members.clone();
        for b in snapshot {
            let c = ring.add(a, b);
            if !mask[c as usize] {
                mask[c as usize] = true;
                members.push(c);
                frontier.push(c);
            }
        }
    }
    mask
}

/// The projection R → R/I together with a least-index section.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    pub source: Arc<FiniteRing>,
    pub target: Arc<FiniteRing>,
    pub ideal: Ideal,
    pub proj: Vec<El>,
    pub lift: Vec<El>,
}

impl QuotientMap {
    pub fn new(source: &Arc<FiniteRing>, ideal: &Ideal) -> Result<QuotientMap> {
        let r = source;
        for a in ideal.elements() {
            if !ideal.contains(r.conj(a)) {
                return Err(Error::Ring("ideal is not stable under the involution".into()));
            }
            for x in r.elements() {
                if !ideal.contains(r.mul(x, a)) || !ideal.contains(r.mul(a, x)) {
                    return Err(Error::Ring("subset is not a two-sided ideal".into()));
                }
            }
        }
        if ideal.contains(r.one()) {
            return Err(Error::Ring("quotient by the unit ideal is the zero ring".into()));
        }
        let (target, proj) = FiniteRing::quotient_by(source, &ideal.mask)?;
        let mut lift = vec![NONE; target.size()];
        for a in (0..r.size()).rev() {
            lift[proj[a] as usize] = a as El;
        }
        Ok(QuotientMap { source: source.clone(), target, ideal: ideal.clone(), proj, lift })
    }

    pub fn apply(&self, a: El) -> El {
        self.proj[a as usize]
    }

    pub fn lift(&self, a: El) -> El {
        self.lift[a as usize]
    }
}

/// The Jacobson radical, computed as {r : 1 + x·r is a unit for all x}.
pub fn jacobson_radical(ring: &FiniteRing) -> Ideal {
    let mask = ring
        .elements()
        .map(|r| ring.elements().all(|x| ring.is_unit(ring.add(ring.one(), ring.mul(x, r)))))
        .collect();
    Ideal { mask }
}

/// Localization of a finite commutative ring, realized as the slice eR.
#[derive(Clone, Debug)]
pub struct LocalizationMap {
    pub source: Arc<FiniteRing>,
    pub target: Arc<FiniteRing>,
    /// The inverted element, when the map came from an element.
    pub s: Option<El>,
    /// Idempotent of the source with target = e·R.
    pub idem: El,
    /// Source index → target index.
    pub map: Vec<El>,
    /// Target index → source element of the slice.
    pub embed: Vec<El>,
}

impl LocalizationMap {
    fn from_idempotent(source: &Arc<FiniteRing>, e: El, s: Option<El>) -> Result<LocalizationMap> {
        let r = source;
        if r.conj(e) != e {
            return Err(Error::Ring(format!("idempotent {} is not fixed by the involution", r.show(e))));
        }
        let mut elems: Vec<El> = r.elements().map(|x| r.mul(e, x)).collect();
        elems.sort_unstable();
        elems.dedup();
        let target = FiniteRing::slice(source, elems.clone(), e)?;
        let mut pos = vec![NONE; r.size()];
        for (i, &x) in elems.iter().enumerate() {
            pos[x as usize] = i as El;
        }
        let map = r.elements().map(|x| pos[r.mul(e, x) as usize]).collect();
        Ok(LocalizationMap { source: source.clone(), target, s, idem: e, map, embed: elems })
    }

    pub fn apply(&self, a: El) -> El {
        self.map[a as usize]
    }

    /// Source element representing a target element (its own slice element).
    pub fn lift(&self, a: El) -> El {
        self.embed[a as usize]
    }

    /// Smallest k such that the map is injective on s^k·R, searched up to `cap`.
    pub fn conductor(&self, cap: u32) -> Option<u32> {
        let r = &self.source;
        let s = self.s.unwrap_or(self.idem);
        for k in 0..=cap {
            let sk = r.pow(s, k);
            let injective = r.elements().all(|x| {
                let y = r.mul(sk, x);
                y == 0 || self.apply(y) != 0
            });
            if injective {
                return Some(k);
            }
        }
        None
    }
}

fn require_commutative(ring: &FiniteRing) -> Result<()> {
    if ring.is_commutative() {
        Ok(())
    } else {
        Err(Error::Ring("localization needs a commutative ring".into()))
    }
}

/// R_s as eR where e is the idempotent among the powers of s.
pub fn localize_at_element(ring: &Arc<FiniteRing>, s: El) -> Result<LocalizationMap> {
    require_commutative(ring)?;
    if ring.is_nilpotent(s) {
        return Err(Error::LocalizationZero(ring.show(s)));
    }
    let mut p = s;
    let e = loop {
        if ring.mul(p, p) == p {
            break p;
        }
        p = ring.mul(p, s);
    };
    LocalizationMap::from_idempotent(ring, e, Some(s))
}

/// Primitive idempotents of a commutative ring, in index order.
pub fn primitive_idempotents(ring: &FiniteRing) -> Vec<El> {
    let ids = ring.idempotents();
    ids.iter()
        .copied()
        .filter(|&e| e != 0 && ids.iter().all(|&f| f == 0 || f == e || ring.mul(f, e) != f))
        .collect()
}

/// Maximal ideals paired with the primitive idempotent of their local factor.
pub fn enumerate_maximal_ideals(ring: &FiniteRing) -> Result<Vec<(Ideal, El)>> {
    require_commutative(ring)?;
    let mut out = Vec::new();
    for e in primitive_idempotents(ring) {
        let mask = ring
            .elements()
            .map(|x| {
                let ex = ring.mul(e, x);
                !ring.elements().any(|y| ring.mul(ex, y) == e)
            })
            .collect();
        out.push((Ideal { mask }, e));
    }
    Ok(out)
}

/// Localization at a maximal ideal: projection onto the local factor it belongs to.
pub fn localize_at_maximal(ring: &Arc<FiniteRing>, m: &Ideal) -> Result<LocalizationMap> {
    for (ideal, e) in enumerate_maximal_ideals(ring)? {
        if &ideal == m {
            return LocalizationMap::from_idempotent(ring, e, None);
        }
    }
    Err(Error::InvalidIdeal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32) -> Arc<FiniteRing> {
        FiniteRing::zmod(n).unwrap()
    }

    #[test]
    fn localize_z6_at_3() {
        let r = z(6);
        let l = localize_at_element(&r, 3).unwrap();
        assert_eq!(l.idem, 3);
        assert_eq!(l.target.size(), 2);
        assert!(l.target.is_unit(l.apply(3)));
    }

    #[test]
    fn localize_at_unit_is_identity() {
        let r = z(5);
        let l = localize_at_element(&r, 2).unwrap();
        assert_eq!(l.idem, 1);
        assert_eq!(l.target.size(), 5);
        for a in r.elements() {
            assert_eq!(l.lift(l.apply(a)), a);
        }
    }

    #[test]
    fn nilpotent_rejected() {
        assert!(matches!(localize_at_element(&z(4), 2), Err(Error::LocalizationZero(_))));
    }

    #[test]
    fn radical_examples() {
        assert_eq!(jacobson_radical(&z(8)).elements(), vec![0, 2, 4, 6]);
        assert_eq!(jacobson_radical(&z(5)).elements(), vec![0]);
        assert_eq!(jacobson_radical(&z(6)).elements(), vec![0]);
    }

    #[test]
    fn maximal_ideals_of_z6() {
        let m = enumerate_maximal_ideals(&z(6)).unwrap();
        assert_eq!(m.len(), 2);
        let sets: Vec<Vec<El>> = m.iter().map(|(i, _)| i.elements()).collect();
        assert!(sets.contains(&vec![0, 2, 4]));
        assert!(sets.contains(&vec![0, 3]));
        assert_eq!(enumerate_maximal_ideals(&z(8)).unwrap()[0].0.elements(), vec![0, 2, 4, 6]);
        assert_eq!(enumerate_maximal_ideals(&z(5)).unwrap()[0].0.elements(), vec![0]);
    }

    #[test]
    fn localize_z6_at_maximal_ideals() {
        let r = z(6);
        for (m, _) in enumerate_maximal_ideals(&r).unwrap() {
            let l = localize_at_maximal(&r, &m).unwrap();
            let expected = if m.contains(2) { 2 } else { 3 };
            assert_eq!(l.target.size(), expected);
        }
        let bogus = Ideal::from_elements(&r, &[0]);
        assert!(localize_at_maximal(&r, &bogus).is_err());
    }

    #[test]
    fn quotient_by_radical() {
        let r = z(8);
        let q = QuotientMap::new(&r, &jacobson_radical(&r)).unwrap();
        assert_eq!(q.target.size(), 2);
        assert!(jacobson_radical(&q.target).is_zero());
        assert_eq!(q.lift(q.apply(5)), 1);
    }

    #[test]
    fn conductor_of_z6_at_3() {
        let l = localize_at_element(&z(6), 3).unwrap();
        assert_eq!(l.conductor(8), Some(1));
        let l = localize_at_element(&z(12), 2).unwrap();
        assert_eq!(l.idem, 4);
        assert_eq!(l.conductor(8), Some(2));
    }
}
