//! Quadratic and Hermitian groups: the forms ψ, membership, partitions, stabilization and the pairing.

use std::sync::Arc;

use crate::alg::FormAlg;
use crate::error::{Error, Result};
use crate::form::{parse_form_ring, FormRing, ParsedForm, PolyFormRing};
use crate::matrix::{self as mx, Mat};
use crate::ring::{parse_element, El, FiniteRing, RingKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Quadratic,
    Hermitian,
}

/// A group GQ(2n, R, Λ) or GH(2n, R, a₁..a_r, Λ) with its form matrix cached.
#[derive(Clone, Debug)]
pub struct Group<A: FormAlg> {
    pub alg: Arc<A>,
    pub flavor: Flavor,
    pub n: usize,
    /// a₁..a_r; empty for the quadratic flavor.
    pub a: Vec<A::E>,
    psi: Mat<A::E>,
    psi_inv: Mat<A::E>,
}

pub type FGroup = Group<FormRing>;
pub type PGroup = Group<PolyFormRing>;

/// A membership verdict with the first failing condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub diagnostic: String,
}

impl<A: FormAlg> Group<A> {
    pub fn quadratic(alg: &Arc<A>, n: usize) -> Result<Group<A>> {
        if n < 3 {
            return Err(Error::Dimension(format!("quadratic groups need 2n ≥ 6, got 2n = {}", 2 * n)));
        }
        Ok(Self::assemble(alg, Flavor::Quadratic, n, Vec::new()))
    }

    /// Quadratic group of any half-rank n ≥ 1, for small experiments.
    pub fn quadratic_any(alg: &Arc<A>, n: usize) -> Result<Group<A>> {
        if n == 0 {
            return Err(Error::Dimension("half-rank must be positive".into()));
        }
        Ok(Self::assemble(alg, Flavor::Quadratic, n, Vec::new()))
    }

    pub fn hermitian(alg: &Arc<A>, n: usize, a: Vec<A::E>) -> Result<Group<A>> {
        let r = a.len();
        if r == 0 || n <= r {
            return Err(Error::Dimension(format!("Hermitian groups need 1 ≤ r < n, got r = {r}, n = {n}")));
        }
        if !alg.is_zero(&a[0]) {
            return Err(Error::Constraint("a₁ must be 0".into()));
        }
        if let Some(bad) = a.iter().find(|x| !alg.in_lambda_min(x)) {
            return Err(Error::Constraint(format!("a_i = {} is not in Λ_min", alg.show(bad))));
        }
        Ok(Self::assemble(alg, Flavor::Hermitian, n, a))
    }

    fn assemble(alg: &Arc<A>, flavor: Flavor, n: usize, a: Vec<A::E>) -> Group<A> {
        let al = alg.as_ref();
        let mut psi = mx::zeros(al, 2 * n, 2 * n);
        let mut psi_inv = mx::zeros(al, 2 * n, 2 * n);
        let lam = al.lambda();
        let lb = al.lambda_bar();
        for i in 0..n {
            psi.set(i, n + i, lam.clone());
            psi.set(n + i, i, al.one());
            psi_inv.set(i, n + i, al.one());
            psi_inv.set(n + i, i, lb.clone());
        }
        for (k, ak) in a.iter().enumerate() {
            psi.set(k, k, ak.clone());
            psi_inv.set(n + k, n + k, al.neg(&al.mul(&lb, ak)));
        }
        Group { alg: alg.clone(), flavor, n, a, psi, psi_inv }
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn r(&self) -> usize {
        self.a.len()
    }

    pub fn form_matrix(&self) -> &Mat<A::E> {
        &self.psi
    }

    pub fn form_inverse(&self) -> &Mat<A::E> {
        &self.psi_inv
    }

    pub fn identity(&self) -> Mat<A::E> {
        mx::identity(self.alg.as_ref(), self.dim())
    }

    pub fn mul(&self, x: &Mat<A::E>, y: &Mat<A::E>) -> Mat<A::E> {
        mx::mul(self.alg.as_ref(), x, y)
    }

    /// σ̄ψσ = ψ, plus the diagonal-entry Λ condition on γ̄α and δ̄β for the quadratic flavor.
    /// Does not test invertibility; see `check_member` for finite rings.
    pub fn membership(&self, s: &Mat<A::E>) -> Membership {
        let a = self.alg.as_ref();
        let d = self.dim();
        if s.rows != d || s.cols != d {
            return Membership { member: false, diagnostic: format!("expected {d}×{d}, got {}×{}", s.rows, s.cols) };
        }
        let sb = mx::conjugate_transpose(a, s);
        let lhs = mx::mul(a, &mx::mul(a, &sb, &self.psi), s);
        for i in 0..d {
            for j in 0..d {
                if lhs.get(i, j) != self.psi.get(i, j) {
                    return Membership {
                        member: false,
                        diagnostic: format!(
                            "form not preserved: (σ̄ψσ)[{},{}] = {} but ψ[{},{}] = {}",
                            i + 1,
                            j + 1,
                            a.show(lhs.get(i, j)),
                            i + 1,
                            j + 1,
                            a.show(self.psi.get(i, j))
                        ),
                    };
                }
            }
        }
        if self.flavor == Flavor::Quadratic {
            let n = self.n;
            let (al, be, ga, de) = self.blocks(s);
            let ga_al = mx::mul(a, &mx::conjugate_transpose(a, &ga), &al);
            let de_be = mx::mul(a, &mx::conjugate_transpose(a, &de), &be);
            for (name, m) in [("γ̄α", &ga_al), ("δ̄β", &de_be)] {
                for k in 0..n {
                    if !a.in_lambda(m.get(k, k)) {
                        return Membership {
                            member: false,
                            diagnostic: format!("({name})[{},{}] = {} is not in Λ", k + 1, k + 1, a.show(m.get(k, k))),
                        };
                    }
                }
            }
        }
        Membership { member: true, diagnostic: "member".into() }
    }

    pub fn is_member(&self, s: &Mat<A::E>) -> bool {
        self.membership(s).member
    }

    /// σ⁻¹ = ψ⁻¹σ̄ψ, valid for members.
    pub fn inverse(&self, s: &Mat<A::E>) -> Mat<A::E> {
        let a = self.alg.as_ref();
        mx::mul(a, &mx::mul(a, &self.psi_inv, &mx::conjugate_transpose(a, s)), &self.psi)
    }

    /// (α, β, γ, δ).
    pub fn blocks(&self, s: &Mat<A::E>) -> (Mat<A::E>, Mat<A::E>, Mat<A::E>, Mat<A::E>) {
        let n = self.n;
        (s.block(0, 0, n, n), s.block(0, n, n, n), s.block(n, 0, n, n), s.block(n, n, n, n))
    }

    pub fn from_blocks(&self, al: &Mat<A::E>, be: &Mat<A::E>, ga: &Mat<A::E>, de: &Mat<A::E>) -> Mat<A::E> {
        let n = self.n;
        let mut s = mx::zeros(self.alg.as_ref(), 2 * n, 2 * n);
        s.put_block(0, 0, al);
        s.put_block(0, n, be);
        s.put_block(n, 0, ga);
        s.put_block(n, n, de);
        s
    }

    /// Each block split at row and column r: [α₁₁, α₁₂, α₂₁, α₂₂, β₁₁, …, δ₂₂].
    pub fn fine_partition(&self, s: &Mat<A::E>) -> Vec<Mat<A::E>> {
        let (n, r) = (self.n, self.r());
        let (al, be, ga, de) = self.blocks(s);
        let mut out = Vec::with_capacity(16);
        for b in [al, be, ga, de] {
            out.push(b.block(0, 0, r, r));
            out.push(b.block(0, r, r, n - r));
            out.push(b.block(r, 0, n - r, r));
            out.push(b.block(r, r, n - r, n - r));
        }
        out
    }

    pub fn from_fine_partition(&self, parts: &[Mat<A::E>]) -> Mat<A::E> {
        let (n, r) = (self.n, self.r());
        let a = self.alg.as_ref();
        let mut blocks = Vec::new();
        for q in parts.chunks(4) {
            let mut b = mx::zeros(a, n, n);
            b.put_block(0, 0, &q[0]);
            b.put_block(0, r, &q[1]);
            b.put_block(r, 0, &q[2]);
            b.put_block(r, r, &q[3]);
            blocks.push(b);
        }
        self.from_blocks(&blocks[0], &blocks[1], &blocks[2], &blocks[3])
    }

    /// The same group one size up.
    pub fn stabilized_group(&self) -> Group<A> {
        Self::assemble(&self.alg, self.flavor, self.n + 1, self.a.clone())
    }

    /// Pad each of α, β, γ, δ with one trailing diagonal entry (1 for α and δ, 0 for β and γ).
    pub fn stabilize(&self, s: &Mat<A::E>) -> Mat<A::E> {
        let a = self.alg.as_ref();
        let big = self.stabilized_group();
        let (al, be, ga, de) = self.blocks(s);
        let pad = |m: &Mat<A::E>, one: bool| {
            let mut p = mx::zeros(a, self.n + 1, self.n + 1);
            p.put_block(0, 0, m);
            if one {
                p.set(self.n, self.n, a.one());
            }
            p
        };
        big.from_blocks(&pad(&al, true), &pad(&be, false), &pad(&ga, false), &pad(&de, true))
    }

    /// ṽ = v̄^t ψ.
    pub fn tilde(&self, v: &[A::E]) -> Vec<A::E> {
        let a = self.alg.as_ref();
        let vb: Vec<A::E> = v.iter().map(|x| a.conj(x)).collect();
        mx::mul(a, &mx::row_vec(&vb), &self.psi).data
    }

    /// ⟨v, w⟩ = ṽ w.
    pub fn inner(&self, v: &[A::E], w: &[A::E]) -> A::E {
        let a = self.alg.as_ref();
        self.tilde(v).iter().zip(w).fold(a.zero(), |acc, (x, y)| a.add(&acc, &a.mul(x, y)))
    }

    /// M(v, w) = v w̃ − λ̄ w ṽ.
    pub fn build_m(&self, v: &[A::E], w: &[A::E]) -> Mat<A::E> {
        self.build_m_with(v, w, false)
    }

    /// `conj_w` selects v w̃ − λ̄ w̄ ṽ instead, which is not a group element in general.
    pub fn build_m_with(&self, v: &[A::E], w: &[A::E], conj_w: bool) -> Mat<A::E> {
        let a = self.alg.as_ref();
        let wt = self.tilde(w);
        let vt = self.tilde(v);
        let lb = a.lambda_bar();
        let wb: Vec<A::E> = w.iter().map(|x| a.mul(&lb, &if conj_w { a.conj(x) } else { x.clone() })).collect();
        let p = mx::mul(a, &mx::column_vec(v), &mx::row_vec(&wt));
        let q = mx::mul(a, &mx::column_vec(&wb), &mx::row_vec(&vt));
        mx::sub(a, &p, &q)
    }

    /// T(v, w, c) = I + M(v, w) + v c ṽ.
    pub fn transvection(&self, v: &[A::E], w: &[A::E], c: &A::E) -> Mat<A::E> {
        let a = self.alg.as_ref();
        let vc: Vec<A::E> = v.iter().map(|x| a.mul(x, c)).collect();
        let q = mx::mul(a, &mx::column_vec(&vc), &mx::row_vec(&self.tilde(v)));
        mx::add(a, &mx::add(a, &self.identity(), &self.build_m(v, w)), &q)
    }

    /// Standard basis vector e_k (0-based).
    pub fn basis(&self, k: usize) -> Vec<A::E> {
        let a = self.alg.as_ref();
        (0..self.dim()).map(|i| if i == k { a.one() } else { a.zero() }).collect()
    }

    /// Short spec such as `quad:3` or `herm:4:a=0,2`.
    pub fn shape_spec(&self) -> String {
        match self.flavor {
            Flavor::Quadratic => format!("quad:{}", self.n),
            Flavor::Hermitian => {
                let a: Vec<String> = self.a.iter().map(|x| self.alg.show(x)).collect();
                format!("herm:{}:a={}", self.n, a.join(","))
            }
        }
    }
}

impl FGroup {
    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.alg.ring
    }

    pub fn spec(&self) -> String {
        format!("{}/{}", self.alg.spec(), self.shape_spec())
    }

    /// Membership with an invertibility check first.
    pub fn check_member(&self, s: &Mat<El>) -> Result<Membership> {
        if let Some(false) = is_invertible(self.ring(), s) {
            return Err(Error::Singular);
        }
        Ok(self.membership(s))
    }

    /// The same shape over R[X].
    pub fn over_poly(&self) -> PGroup {
        let p = Arc::new(PolyFormRing::new(&self.alg));
        let a = self.a.iter().map(|&x| p.constant(x)).collect();
        Group::assemble(&p, self.flavor, self.n, a)
    }
}

impl PGroup {
    /// The same shape over the base ring.
    pub fn base_group(&self) -> FGroup {
        let a = self.a.iter().map(|x| x.constant_term()).collect();
        Group::assemble(&self.alg.base, self.flavor, self.n, a)
    }
}

/// Some(true/false) when invertibility can be decided from determinants, None otherwise.
pub fn is_invertible(ring: &Arc<FiniteRing>, s: &Mat<El>) -> Option<bool> {
    if ring.is_commutative() {
        let f = FormRing::build(ring, ring.one(), &[]).ok();
        let d = match f {
            Some(f) => mx::det_commutative(&f, s),
            None => det_plain(ring, s),
        };
        return Some(ring.is_unit(d));
    }
    if let RingKind::Hyperbolic { inner } = ring.kind() {
        if inner.is_commutative() {
            let k = inner.size() as El;
            let first = s.map(|&x| x % k);
            let second = s.map(|&x| x / k);
            return Some(ring_det_unit(inner, &first) && ring_det_unit(inner, &second));
        }
    }
    None
}

fn ring_det_unit(ring: &Arc<FiniteRing>, s: &Mat<El>) -> bool {
    ring.is_unit(det_plain(ring, s))
}

/// Determinant over a commutative ring without needing a form parameter.
fn det_plain(ring: &Arc<FiniteRing>, s: &Mat<El>) -> El {
    struct Plain<'a>(&'a FiniteRing);
    impl FormAlg for Plain<'_> {
        type E = El;
        fn zero(&self) -> El {
            0
        }
        fn one(&self) -> El {
            self.0.one()
        }
        fn add(&self, a: &El, b: &El) -> El {
            self.0.add(*a, *b)
        }
        fn neg(&self, a: &El) -> El {
            self.0.neg(*a)
        }
        fn mul(&self, a: &El, b: &El) -> El {
            self.0.mul(*a, *b)
        }
        fn conj(&self, a: &El) -> El {
            self.0.conj(*a)
        }
        fn is_zero(&self, a: &El) -> bool {
            *a == 0
        }
        fn inv(&self, a: &El) -> Option<El> {
            self.0.inv(*a)
        }
        fn lambda(&self) -> El {
            self.0.one()
        }
        fn in_lambda(&self, _: &El) -> bool {
            false
        }
        fn in_lambda_max(&self, _: &El) -> bool {
            false
        }
        fn in_lambda_min(&self, _: &El) -> bool {
            false
        }
        fn solve_f(&self, _: &El) -> Option<El> {
            None
        }
        fn show(&self, a: &El) -> String {
            self.0.show(*a)
        }
    }
    mx::det_commutative(&Plain(ring), s)
}

/// Parse `<formring>[/quad:<n> | /herm:<n>:a=<a1,..>]`; the shape defaults to `quad:3`.
pub fn parse_group(spec: &str) -> Result<FGroup> {
    let spec = spec.trim();
    let (form, shape) = match spec.rfind('/') {
        Some(i) => (&spec[..i], &spec[i + 1..]),
        None => (spec, "quad:3"),
    };
    let f = match parse_form_ring(form)? {
        ParsedForm::Finite(f) => f,
        ParsedForm::Poly(_) => return Err(Error::Unsupported("groups are built over finite form rings".into())),
    };
    parse_shape(&f, shape, form.len() + 1)
}

fn parse_shape(f: &Arc<FormRing>, shape: &str, offset: usize) -> Result<FGroup> {
    let perr = |msg: String| Error::Parse { pos: offset, msg };
    if let Some(n) = shape.strip_prefix("quad:") {
        let n: usize = n.parse().map_err(|_| perr(format!("bad half-rank '{n}'")))?;
        Group::quadratic(f, n)
    } else if let Some(rest) = shape.strip_prefix("herm:") {
        let (n, a) = rest.split_once(":a=").ok_or_else(|| perr("expected herm:<n>:a=<a1,..>".into()))?;
        let n: usize = n.parse().map_err(|_| perr(format!("bad half-rank '{n}'")))?;
        let a = crate::form::split_list(a).into_iter().map(|x| parse_element(&f.ring, x)).collect::<Result<Vec<_>>>()?;
        Group::hermitian(f, n, a)
    } else {
        Err(perr(format!("unknown group shape '{shape}'")))
    }
}

/// GQ(2n, R^e, Λ) ≅ GL(2n, R): g ↦ (g, ψ₀ (g⁻¹)^t ψ₀) with ψ₀ = [[0, I], [I, 0]].
/// `hyp` must be the quadratic group over the hyperbolic double of `base`.
pub fn gl_embed(hyp: &FGroup, base: &Arc<FiniteRing>, g: &Mat<El>) -> Result<Mat<El>> {
    let d = hyp.dim();
    if g.rows != d || g.cols != d {
        return Err(Error::Dimension(format!("expected {d}×{d}")));
    }
    if !base.is_commutative() {
        return Err(Error::Unsupported("GL embedding needs a commutative base ring".into()));
    }
    let plain = FormRing::build(base, base.one(), &[])?;
    let ginv = mx::inverse_commutative(&plain, g)?;
    let n = hyp.n;
    let swap = |m: &Mat<El>| {
        let mut out = mx::zeros(&plain, d, d);
        for i in 0..d {
            for j in 0..d {
                out.set((i + n) % d, (j + n) % d, *m.get(i, j));
            }
        }
        out
    };
    let h = swap(&mx::transpose(&ginv));
    let k = base.size() as El;
    Ok(Mat { rows: d, cols: d, data: g.data.iter().zip(&h.data).map(|(&x, &y)| x + k * y).collect() })
}

/// The first coordinate of a matrix over the hyperbolic double.
pub fn gl_project(base: &Arc<FiniteRing>, s: &Mat<El>) -> Mat<El> {
    let k = base.size() as El;
    s.map(|&x| x % k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::make_hyperbolic_double;

    fn zq(n: u32, lambda: El, gens: &[El]) -> Arc<FormRing> {
        Arc::new(FormRing::build(&FiniteRing::zmod(n).unwrap(), lambda, gens).unwrap())
    }

    #[test]
    fn quadratic_form_and_inverse() {
        let g = Group::quadratic(&zq(5, 1, &[]), 3).unwrap();
        let psi = g.form_matrix();
        assert_eq!(*psi.get(0, 3), 1);
        assert_eq!(*psi.get(3, 0), 1);
        assert!(mx::is_identity(g.alg.as_ref(), &g.mul(psi, g.form_inverse())));
        assert!(Group::quadratic(&zq(5, 1, &[]), 2).is_err());
    }

    #[test]
    fn hermitian_form_block() {
        let f = zq(4, 3, &[]);
        let g = Group::hermitian(&f, 4, vec![0, 2]).unwrap();
        let psi = g.form_matrix();
        assert_eq!((0..4).map(|i| *psi.get(i, i)).collect::<Vec<_>>(), vec![0, 2, 0, 0]);
        assert!(mx::is_identity(f.as_ref(), &g.mul(psi, g.form_inverse())));
        assert!(Group::hermitian(&f, 4, vec![1]).is_err());
        assert!(Group::hermitian(&f, 1, vec![0]).is_err());
    }

    #[test]
    fn membership_examples() {
        let g = Group::quadratic(&zq(7, 1, &[]), 3).unwrap();
        assert!(g.is_member(&g.identity()));
        // qε₁₂(3) = I + 3e₁₂ − 3e₅₄
        let mut s = g.identity();
        s.set(0, 1, 3);
        s.set(4, 3, 4);
        assert!(g.check_member(&s).unwrap().member);
        let mut d = g.identity();
        d.set(0, 0, 2);
        let m = g.check_member(&d).unwrap();
        assert!(!m.member);
        assert!(m.diagnostic.contains("form not preserved"));
        let mut z = g.identity();
        z.set(0, 0, 0);
        assert_eq!(g.check_member(&z), Err(Error::Singular));
    }

    #[test]
    fn block_condition_rejects_odd_diagonal() {
        // λ = 1 over Z/4: qr₁₁(1) preserves the form only up to the Λ condition
        let g = Group::quadratic(&zq(4, 3, &[]), 3).unwrap();
        let mut s = g.identity();
        s.set(0, 3, 1);
        let m = g.membership(&s);
        assert!(!m.member, "{}", m.diagnostic);
    }

    #[test]
    fn partitions_round_trip() {
        let g = Group::hermitian(&zq(4, 3, &[]), 4, vec![0]).unwrap();
        let s = Mat { rows: 8, cols: 8, data: (0..64).map(|x| x % 4).collect() };
        let (a, b, c, d) = g.blocks(&s);
        assert_eq!(g.from_blocks(&a, &b, &c, &d), s);
        assert_eq!(g.from_fine_partition(&g.fine_partition(&s)), s);
    }

    #[test]
    fn pairing_examples() {
        let g = Group::quadratic(&zq(5, 1, &[]), 3).unwrap();
        let e = |k| g.basis(k);
        assert_eq!(g.tilde(&e(0)), e(3));
        assert_eq!(g.tilde(&e(3)), e(0));
        assert_eq!(g.inner(&e(0), &e(0)), 0);
        assert_eq!(g.inner(&e(0), &e(3)), 1);
        let m = g.build_m(&e(0), &e(1));
        let mut want = mx::zeros(g.alg.as_ref(), 6, 6);
        want.set(0, 4, 1);
        want.set(1, 3, 4);
        assert_eq!(m, want);
    }

    #[test]
    fn pairing_matrix_needs_unconjugated_column() {
        // over the hyperbolic double the involution is nontrivial and only v w̃ − λ̄ w ṽ stays in the group
        let base = FiniteRing::zmod(3).unwrap();
        let f = Arc::new(make_hyperbolic_double(&base).unwrap());
        let g = Group::quadratic(&f, 3).unwrap();
        let v = g.basis(5);
        let w: Vec<El> = vec![1 + 3 * 2, 2, 0, 0, 1, 0];
        assert_eq!(g.inner(&v, &w), 0);
        assert_eq!(g.inner(&w, &w), 0);
        let plain = mx::add(f.as_ref(), &g.identity(), &g.build_m(&v, &w));
        assert!(g.is_member(&plain));
        let barred = mx::add(f.as_ref(), &g.identity(), &g.build_m_with(&v, &w, true));
        assert!(!g.is_member(&barred));
    }

    #[test]
    fn gl_embedding_round_trip() {
        let base = FiniteRing::zmod(4).unwrap();
        let hyp = Group::quadratic(&Arc::new(make_hyperbolic_double(&base).unwrap()), 3).unwrap();
        let plain = FormRing::build(&base, 1, &[]).unwrap();
        let mut g = mx::identity(&plain, 6);
        g.set(0, 1, 2);
        let s = gl_embed(&hyp, &base, &g).unwrap();
        assert!(hyp.check_member(&s).unwrap().member);
        assert_eq!(gl_project(&base, &s), g);
        let mut sing = mx::identity(&plain, 6);
        sing.set(2, 2, 2);
        assert!(gl_embed(&hyp, &base, &sing).is_err());
    }

    #[test]
    fn parses_group_specs() {
        let g = parse_group("zmod:4:lambda=3/herm:4:a=0,2").unwrap();
        assert_eq!(g.flavor, Flavor::Hermitian);
        assert_eq!(g.a, vec![0, 2]);
        assert_eq!(parse_group("zmod:5").unwrap().n, 3);
        assert!(parse_group("zmod:5/quad:x").is_err());
    }
}
