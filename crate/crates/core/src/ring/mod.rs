//! Finite rings with involution, stored as full operation tables.

mod local;
mod poly;
mod spec;

pub use local::{
    enumerate_maximal_ideals, jacobson_radical, localize_at_element, localize_at_maximal, primitive_idempotents, Ideal,
    LocalizationMap, QuotientMap,
};
pub(crate) use local::additive_closure as local_additive_closure;
pub use poly::{MPoly, PolyRing, Subst};
pub use spec::{parse_element, parse_ring, parse_ring_prefix, ParsedRing};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Canonical index of a ring element.
pub type El = u32;

const NONE: El = El::MAX;

/// Largest ring the table representation accepts.
pub const MAX_RING_SIZE: usize = 4096;

#[derive(Clone, Debug)]
pub enum RingKind {
    Zmod { n: u32 },
    Hyperbolic { inner: Arc<FiniteRing> },
    Product { factors: Vec<Arc<FiniteRing>> },
    Quotient { parent: Arc<FiniteRing>, reps: Vec<El> },
    Slice { parent: Arc<FiniteRing>, elems: Vec<El>, idem: El },
}

/// A finite ring with involution. Zero is always index 0.
pub struct FiniteRing {
    kind: RingKind,
    size: usize,
    one: El,
    add: Vec<El>,
    mul: Vec<El>,
    neg: Vec<El>,
    conj: Vec<El>,
    inv: Vec<El>,
    commutative: bool,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({}, {} elements)", self.spec(), self.size)
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.add == other.add && self.mul == other.mul && self.conj == other.conj
    }
}

impl FiniteRing {
    fn from_ops(
        kind: RingKind,
        size: usize,
        one: El,
        add: impl Fn(El, El) -> El,
        mul: impl Fn(El, El) -> El,
        conj: impl Fn(El) -> El,
    ) -> Result<FiniteRing> {
        if size < 2 {
            return Err(Error::Ring("the zero ring is not allowed".into()));
        }
        if size > MAX_RING_SIZE {
            return Err(Error::Ring(format!("ring with {size} elements exceeds the table limit {MAX_RING_SIZE}")));
        }
        let mut at = vec![0; size * size];
        let mut mt = vec![0; size * size];
        for a in 0..size {
            for b in 0..size {
                at[a * size + b] = add(a as El, b as El);
                mt[a * size + b] = mul(a as El, b as El);
            }
        }
        let mut neg = vec![NONE; size];
        for a in 0..size {
            for b in 0..size {
                if at[a * size + b] == 0 {
                    neg[a] = b as El;
                    break;
                }
            }
        }
        let conj: Vec<El> = (0..size).map(|a| conj(a as El)).collect();
        let mut inv = vec![NONE; size];
        for a in 0..size {
            for b in 0..size {
                if mt[a * size + b] == one && mt[b * size + a] == one {
                    inv[a] = b as El;
                    break;
                }
            }
        }
        let commutative = (0..size).all(|a| (0..a).all(|b| mt[a * size + b] == mt[b * size + a]));
        let ring = FiniteRing { kind, size, one, add: at, mul: mt, neg, conj, inv, commutative };
        if ring.neg.contains(&NONE) {
            return Err(Error::Ring("addition has no inverses".into()));
        }
        Ok(ring)
    }

    /// The ring Z/n with trivial involution.
    pub fn zmod(n: u32) -> Result<Arc<FiniteRing>> {
        if n < 2 {
            return Err(Error::Ring(format!("Z/{n} is not a nonzero ring")));
        }
        let m = n as u64;
        let r = Self::from_ops(
            RingKind::Zmod { n },
            n as usize,
            1,
            |a, b| ((a as u64 + b as u64) % m) as El,
            |a, b| ((a as u64 * b as u64) % m) as El,
            |a| a,
        )?;
        Ok(Arc::new(r))
    }

    /// R ⊕ R° with the swap involution (x, y°) ↦ (y, x°). Element (x, y) has index x + |R|·y.
    pub fn hyperbolic(inner: &Arc<FiniteRing>) -> Result<Arc<FiniteRing>> {
        let k = inner.size as El;
        let split = move |a: El| (a % k, a / k);
        let i1 = inner.clone();
        let i2 = inner.clone();
        let r = Self::from_ops(
            RingKind::Hyperbolic { inner: inner.clone() },
            inner.size * inner.size,
            inner.one + k * inner.one,
            move |a, b| {
                let (ax, ay) = split(a);
                let (bx, by) = split(b);
                i1.add(ax, bx) + k * i1.add(ay, by)
            },
            move |a, b| {
                let (ax, ay) = split(a);
                let (bx, by) = split(b);
                // the second coordinate multiplies in the opposite ring
                i2.mul(ax, bx) + k * i2.mul(by, ay)
            },
            move |a| {
                let (x, y) = split(a);
                y + k * x
            },
        )?;
        Ok(Arc::new(r))
    }

    /// Direct product with componentwise involution, mixed-radix indexing (first factor least significant).
    pub fn product(factors: &[Arc<FiniteRing>]) -> Result<Arc<FiniteRing>> {
        if factors.is_empty() {
            return Err(Error::Ring("empty product".into()));
        }
        let size: usize = factors.iter().map(|f| f.size).product();
        let fs = factors.to_vec();
        let decode = {
            let fs = fs.clone();
            move |mut a: El| -> Vec<El> {
                fs.iter()
                    .map(|f| {
                        let c = a % f.size as El;
                        a /= f.size as El;
                        c
                    })
                    .collect()
            }
        };
        let encode = {
            let fs = fs.clone();
            move |cs: &[El]| -> El {
                let mut a = 0;
                for (f, &c) in fs.iter().zip(cs).rev() {
                    a = a * f.size as El + c;
                }
                a
            }
        };
        let one = encode(&fs.iter().map(|f| f.one).collect::<Vec<_>>());
        let (d1, d2, d3) = (decode.clone(), decode.clone(), decode);
        let (e1, e2, e3) = (encode.clone(), encode.clone(), encode);
        let (f1, f2, f3) = (fs.clone(), fs.clone(), fs.clone());
        let r = Self::from_ops(
            RingKind::Product { factors: fs },
            size,
            one,
            move |a, b| {
                let (x, y) = (d1(a), d1(b));
                e1(&f1.iter().enumerate().map(|(i, f)| f.add(x[i], y[i])).collect::<Vec<_>>())
            },
            move |a, b| {
                let (x, y) = (d2(a), d2(b));
                e2(&f2.iter().enumerate().map(|(i, f)| f.mul(x[i], y[i])).collect::<Vec<_>>())
            },
            move |a| {
                let x = d3(a);
                e3(&f3.iter().enumerate().map(|(i, f)| f.conj(x[i])).collect::<Vec<_>>())
            },
        )?;
        Ok(Arc::new(r))
    }

    /// Build the ring on a subset closed under the operations, with its own identity `idem`.
    pub(crate) fn slice(parent: &Arc<FiniteRing>, elems: Vec<El>, idem: El) -> Result<Arc<FiniteRing>> {
        let mut pos = vec![NONE; parent.size];
        for (i, &e) in elems.iter().enumerate() {
            pos[e as usize] = i as El;
        }
        let look = |x: El| -> El {
            let p = pos[x as usize];
            assert!(p != NONE, "slice is not closed");
            p
        };
        let el = elems.clone();
        let r = Self::from_ops(
            RingKind::Slice { parent: parent.clone(), elems: elems.clone(), idem },
            elems.len(),
            look(idem),
            |a, b| look(parent.add(el[a as usize], el[b as usize])),
            |a, b| look(parent.mul(el[a as usize], el[b as usize])),
            |a| look(parent.conj(el[a as usize])),
        )?;
        Ok(Arc::new(r))
    }

    /// Quotient by a two-sided, involution-stable ideal. Classes are indexed by the rank of their least member.
    pub(crate) fn quotient_by(parent: &Arc<FiniteRing>, ideal: &[bool]) -> Result<(Arc<FiniteRing>, Vec<El>)> {
        let n = parent.size;
        let mut proj = vec![NONE; n];
        let mut reps = Vec::new();
        for a in 0..n {
            if proj[a] != NONE {
                continue;
            }
            let c = reps.len() as El;
            reps.push(a as El);
            for i in 0..n {
                if ideal[i] {
                    proj[parent.add(a as El, i as El) as usize] = c;
                }
            }
        }
        let pr = proj.clone();
        let rp = reps.clone();
        let r = Self::from_ops(
            RingKind::Quotient { parent: parent.clone(), reps: reps.clone() },
            reps.len(),
            pr[parent.one as usize],
            |a, b| pr[parent.add(rp[a as usize], rp[b as usize]) as usize],
            |a, b| pr[parent.mul(rp[a as usize], rp[b as usize]) as usize],
            |a| pr[parent.conj(rp[a as usize]) as usize],
        )?;
        Ok((Arc::new(r), proj))
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> El {
        0
    }

    pub fn one(&self) -> El {
        self.one
    }

    pub fn elements(&self) -> impl Iterator<Item = El> {
        0..self.size as El
    }

    #[inline]
    pub fn add(&self, a: El, b: El) -> El {
        self.add[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: El, b: El) -> El {
        self.mul[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: El) -> El {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: El, b: El) -> El {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn conj(&self, a: El) -> El {
        self.conj[a as usize]
    }

    pub fn inv(&self, a: El) -> Option<El> {
        let i = self.inv[a as usize];
        (i != NONE).then_some(i)
    }

    pub fn is_unit(&self, a: El) -> bool {
        self.inv[a as usize] != NONE
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn is_central(&self, a: El) -> bool {
        self.elements().all(|x| self.mul(a, x) == self.mul(x, a))
    }

    pub fn pow(&self, a: El, k: u32) -> El {
        let mut r = self.one;
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }

    pub fn is_nilpotent(&self, a: El) -> bool {
        let mut p = a;
        for _ in 0..=self.size {
            if p == 0 {
                return true;
            }
            p = self.mul(p, a);
        }
        false
    }

    /// Image of an integer under Z → R.
    pub fn from_int(&self, k: i64) -> El {
        let m = k.unsigned_abs();
        let mut r = 0;
        for _ in 0..(m % self.char_bound()) {
            r = self.add(r, self.one);
        }
        if k < 0 {
            self.neg(r)
        } else {
            r
        }
    }

    fn char_bound(&self) -> u64 {
        let mut c = 1u64;
        let mut x = self.one;
        while x != 0 {
            x = self.add(x, self.one);
            c += 1;
        }
        c
    }

    pub fn characteristic(&self) -> u64 {
        self.char_bound()
    }

    pub fn idempotents(&self) -> Vec<El> {
        self.elements().filter(|&e| self.mul(e, e) == e).collect()
    }

    /// Canonical spec string, without multiplier or form parameter.
    pub fn spec(&self) -> String {
        match &self.kind {
            RingKind::Zmod { n } => format!("zmod:{n}"),
            RingKind::Hyperbolic { inner } => format!("hyp:{}", inner.spec()),
            RingKind::Product { factors } => {
                format!("prod({})", factors.iter().map(|f| f.spec()).collect::<Vec<_>>().join(","))
            }
            RingKind::Quotient { parent, reps } => format!("quot({};{})", parent.spec(), reps.len()),
            RingKind::Slice { parent, idem, .. } => format!("slice({};{})", parent.spec(), parent.show(*idem)),
        }
    }

    /// Human-readable element.
    pub fn show(&self, a: El) -> String {
        match &self.kind {
            RingKind::Zmod { .. } => a.to_string(),
            RingKind::Hyperbolic { inner } => {
                let k = inner.size as El;
                format!("({},{})", inner.show(a % k), inner.show(a / k))
            }
            RingKind::Product { factors } => {
                let mut x = a;
                let parts: Vec<String> = factors
                    .iter()
                    .map(|f| {
                        let c = x % f.size as El;
                        x /= f.size as El;
                        f.show(c)
                    })
                    .collect();
                format!("({})", parts.join(","))
            }
            RingKind::Quotient { parent, reps } => format!("[{}]", parent.show(reps[a as usize])),
            RingKind::Slice { parent, elems, .. } => parent.show(elems[a as usize]),
        }
    }

    /// Exhaustive check of the ring and involution axioms.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.size as El;
        for a in 0..n {
            if self.conj(self.conj(a)) != a {
                return Err(Error::Ring(format!("involution not self-inverse at {}", self.show(a))));
            }
            for b in 0..n {
                if self.conj(self.add(a, b)) != self.add(self.conj(a), self.conj(b)) {
                    return Err(Error::Ring("involution not additive".into()));
                }
                if self.conj(self.mul(a, b)) != self.mul(self.conj(b), self.conj(a)) {
                    return Err(Error::Ring("involution not anti-multiplicative".into()));
                }
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::Ring("multiplication not associative".into()));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
                        || self.mul(self.add(a, b), c) != self.add(self.mul(a, c), self.mul(b, c))
                    {
                        return Err(Error::Ring("distributivity fails".into()));
                    }
                }
            }
        }
        if self.conj(self.one) != self.one {
            return Err(Error::Ring("involution does not fix 1".into()));
        }
        Ok(())
    }
}
