//! Elementary generators, words over them, and the identities they satisfy.

mod transvection;
mod poly;
mod witness;

pub use transvection::{as_transvection, factor_i_plus_m, factor_transvection, peel_column, peel_elementary};
pub use poly::{
    conjugation_split, interleave_identity, lift_word, normal_form_congruent_x, specialize_word, split_constant,
    substitute_word, CongruentFactor,
};
pub use witness::{commutator, commutator_factors, commutator_witness, payload_elements, Witness};

use std::fmt;

use crate::alg::FormAlg;
use crate::error::{Error, Result};
use crate::group::{Flavor, Group};
use crate::matrix::{self as mx, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    QE,
    QR,
    QL,
    HE,
    HR,
    HL,
    HM,
    HRV,
}

impl Family {
    pub const QUADRATIC: [Family; 3] = [Family::QE, Family::QR, Family::QL];
    pub const HERMITIAN: [Family; 5] = [Family::HE, Family::HR, Family::HL, Family::HM, Family::HRV];

    pub fn name(self) -> &'static str {
        match self {
            Family::QE => "qe",
            Family::QR => "qr",
            Family::QL => "ql",
            Family::HE => "he",
            Family::HR => "hr",
            Family::HL => "hl",
            Family::HM => "hm",
            Family::HRV => "hrv",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        Ok(match s {
            "qe" => Family::QE,
            "qr" => Family::QR,
            "ql" => Family::QL,
            "he" => Family::HE,
            "hr" => Family::HR,
            "hl" => Family::HL,
            "hm" => Family::HM,
            "hrv" => Family::HRV,
            _ => return Err(Error::Parse { pos: 0, msg: format!("unknown generator family '{s}'") }),
        })
    }

    pub fn flavor(self) -> Flavor {
        match self {
            Family::QE | Family::QR | Family::QL => Flavor::Quadratic,
            _ => Flavor::Hermitian,
        }
    }

    /// Families with a column payload.
    pub fn is_column(self) -> bool {
        matches!(self, Family::HM | Family::HRV)
    }

    pub fn for_flavor(f: Flavor) -> &'static [Family] {
        match f {
            Flavor::Quadratic => &Family::QUADRATIC,
            Flavor::Hermitian => &Family::HERMITIAN,
        }
    }

    /// The ε, r and l families of a flavor.
    pub fn triple(f: Flavor) -> (Family, Family, Family) {
        match f {
            Flavor::Quadratic => (Family::QE, Family::QR, Family::QL),
            Flavor::Hermitian => (Family::HE, Family::HR, Family::HL),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Payload<E> {
    Scalar(E),
    /// ζ together with the chosen ζ_f.
    Column { zeta: Vec<E>, f: E },
}

/// A generator θ_ij(a) or θ_i(ζ); indices are 0-based, and j = i for the column families.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol<E> {
    pub family: Family,
    pub i: usize,
    pub j: usize,
    pub payload: Payload<E>,
}

impl<E: Clone> Symbol<E> {
    pub fn scalar(family: Family, i: usize, j: usize, a: E) -> Symbol<E> {
        Symbol { family, i, j, payload: Payload::Scalar(a) }
    }

    pub fn scalar_payload(&self) -> Option<&E> {
        match &self.payload {
            Payload::Scalar(a) => Some(a),
            Payload::Column { .. } => None,
        }
    }
}

/// A symbol with exponent ±1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter<E> {
    pub sym: Symbol<E>,
    pub inv: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word<E> {
    pub letters: Vec<Letter<E>>,
}

impl<E: Clone> Word<E> {
    pub fn new() -> Word<E> {
        Word { letters: Vec::new() }
    }

    pub fn single(s: Symbol<E>) -> Word<E> {
        Word { letters: vec![Letter { sym: s, inv: false }] }
    }

    pub fn from_symbols(ss: Vec<Symbol<E>>) -> Word<E> {
        Word { letters: ss.into_iter().map(|sym| Letter { sym, inv: false }).collect() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, s: Symbol<E>) {
        self.letters.push(Letter { sym: s, inv: false });
    }

    pub fn append(&mut self, w: &Word<E>) {
        self.letters.extend(w.letters.iter().cloned());
    }

    pub fn concat(&self, w: &Word<E>) -> Word<E> {
        let mut out = self.clone();
        out.append(w);
        out
    }

    /// Formal inverse: reversed letters with flipped exponents.
    pub fn inverse(&self) -> Word<E> {
        Word { letters: self.letters.iter().rev().map(|l| Letter { sym: l.sym.clone(), inv: !l.inv }).collect() }
    }

    pub fn map_payloads<F, T>(&self, f: F) -> Word<T>
    where
        F: Fn(&E) -> T,
        T: Clone,
    {
        Word {
            letters: self
                .letters
                .iter()
                .map(|l| Letter {
                    sym: Symbol {
                        family: l.sym.family,
                        i: l.sym.i,
                        j: l.sym.j,
                        payload: match &l.sym.payload {
                            Payload::Scalar(a) => Payload::Scalar(f(a)),
                            Payload::Column { zeta, f: zf } => {
                                Payload::Column { zeta: zeta.iter().map(&f).collect(), f: f(zf) }
                            }
                        },
                    },
                    inv: l.inv,
                })
                .collect(),
        }
    }
}

impl<E: fmt::Debug> fmt::Display for Symbol<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            Payload::Scalar(a) => write!(f, "{}_{}{}({:?})", self.family.name(), self.i + 1, self.j + 1, a),
            Payload::Column { zeta, f: zf } => write!(f, "{}_{}({:?}; f={:?})", self.family.name(), self.i + 1, zeta, zf),
        }
    }
}

/// −Σ x̄_k a_k x_k: the value ζ_f + λζ̄_f must take for the column generators.
pub fn zeta_target<A: FormAlg>(g: &Group<A>, zeta: &[A::E]) -> A::E {
    let a = g.alg.as_ref();
    let s = zeta.iter().zip(&g.a).fold(a.zero(), |acc, (x, ak)| a.add(&acc, &a.mul(&a.mul(&a.conj(x), ak), x)));
    a.neg(&s)
}

/// Σ x̄_k a_k x_k ∈ Λ_min.
pub fn in_c<A: FormAlg>(g: &Group<A>, zeta: &[A::E]) -> bool {
    let a = g.alg.as_ref();
    zeta.len() == g.r() && a.in_lambda_min(&a.neg(&zeta_target(g, zeta)))
}

/// A column symbol with the least admissible ζ_f, if ζ ∈ C and some ζ_f exists.
pub fn column_symbol<A: FormAlg>(g: &Group<A>, family: Family, i: usize, zeta: Vec<A::E>) -> Option<Symbol<A::E>> {
    if !in_c(g, &zeta) {
        return None;
    }
    let f = g.alg.solve_f(&zeta_target(g, &zeta))?;
    Some(Symbol { family, i, j: i, payload: Payload::Column { zeta, f } })
}

pub fn validate<A: FormAlg>(g: &Group<A>, s: &Symbol<A::E>) -> Result<()> {
    let a = g.alg.as_ref();
    let (n, r) = (g.n, g.r());
    let bad = |msg: String| Err(Error::Constraint(format!("{}: {msg}", fmt_symbol(g, s))));
    if s.family.flavor() != g.flavor {
        return bad("family does not belong to this group".into());
    }
    if s.i >= n || s.j >= n {
        return bad(format!("index out of range 1..{n}"));
    }
    match (&s.payload, s.family.is_column()) {
        (Payload::Scalar(_), true) | (Payload::Column { .. }, false) => return bad("payload kind does not match family".into()),
        _ => {}
    }
    match s.family {
        Family::QE | Family::HE if s.i == s.j => return bad("needs i ≠ j".into()),
        Family::HE if s.i < r => return bad(format!("needs i > {r}")),
        Family::HR if s.i < r || s.j < r => return bad(format!("needs i, j > {r}")),
        Family::HM | Family::HRV if s.i < r || s.j != s.i => return bad(format!("needs i > {r}")),
        _ => {}
    }
    match &s.payload {
        Payload::Scalar(x) if s.i == s.j => {
            let ok = if g.flavor == Flavor::Quadratic { a.in_lambda(x) } else { a.in_lambda_max(x) };
            if !ok {
                let set = if g.flavor == Flavor::Quadratic { "Λ" } else { "Λ_max" };
                return bad(format!("diagonal payload {} is not in {set}", a.show(x)));
            }
        }
        Payload::Column { zeta, f } => {
            if !in_c(g, zeta) {
                return bad("ζ is not in C".into());
            }
            let lhs = a.add(f, &a.mul(&a.lambda(), &a.conj(f)));
            if lhs != zeta_target(g, zeta) {
                return bad("ζ_f does not satisfy ζ_f + λζ̄_f = −Σ x̄_k a_k x_k".into());
            }
        }
        _ => {}
    }
    Ok(())
}

fn fmt_symbol<A: FormAlg>(g: &Group<A>, s: &Symbol<A::E>) -> String {
    let a = g.alg.as_ref();
    match &s.payload {
        Payload::Scalar(x) => format!("{}_{}{}({})", s.family.name(), s.i + 1, s.j + 1, a.show(x)),
        Payload::Column { zeta, f } => {
            let z: Vec<String> = zeta.iter().map(|x| a.show(x)).collect();
            format!("{}_{}(({}); f={})", s.family.name(), s.i + 1, z.join(","), a.show(f))
        }
    }
}

pub fn show_symbol<A: FormAlg>(g: &Group<A>, s: &Symbol<A::E>) -> String {
    fmt_symbol(g, s)
}

pub fn show_word<A: FormAlg>(g: &Group<A>, w: &Word<A::E>) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.letters.iter().map(|l| format!("{}{}", fmt_symbol(g, &l.sym), if l.inv { "⁻¹" } else { "" })).collect::<Vec<_>>().join(" · ")
}

/// The off-identity entries (row, col, value) of a generator matrix; no validation.
pub fn entries<A: FormAlg>(g: &Group<A>, s: &Symbol<A::E>) -> Vec<(usize, usize, A::E)> {
    let a = g.alg.as_ref();
    let n = g.n;
    let (i, j) = (s.i, s.j);
    let mut out = Vec::with_capacity(4);
    match (&s.payload, s.family) {
        (Payload::Scalar(x), Family::QE | Family::HE) => {
            out.push((i, j, x.clone()));
            out.push((n + j, n + i, a.neg(&a.conj(x))));
        }
        (Payload::Scalar(x), Family::QR | Family::HR) => {
            out.push((i, n + j, x.clone()));
            if i != j {
                out.push((j, n + i, a.neg(&a.mul(&a.lambda(), &a.conj(x)))));
            }
        }
        (Payload::Scalar(x), Family::QL | Family::HL) => {
            out.push((n + i, j, x.clone()));
            if i != j {
                out.push((n + j, i, a.neg(&a.mul(&a.lambda_bar(), &a.conj(x)))));
            }
        }
        (Payload::Column { zeta, f }, Family::HM) => {
            for (k, z) in zeta.iter().enumerate() {
                out.push((k, i, z.clone()));
                out.push((n + k, i, a.neg(&a.mul(&a.conj(&g.a[k]), z))));
                out.push((n + i, n + k, a.neg(&a.conj(z))));
            }
            out.push((n + i, i, a.conj(f)));
        }
        (Payload::Column { zeta, f }, Family::HRV) => {
            for (k, z) in zeta.iter().enumerate() {
                out.push((k, n + i, z.clone()));
                out.push((i, n + k, a.neg(&a.mul(&a.lambda(), &a.conj(z)))));
                out.push((n + k, n + i, a.neg(&a.mul(&a.conj(&g.a[k]), z))));
            }
            out.push((i, n + i, a.mul(&a.lambda(), &a.conj(f))));
        }
        _ => panic!("payload kind does not match family"),
    }
    out.retain(|(_, _, v)| !a.is_zero(v));
    out
}

pub fn gen_matrix<A: FormAlg>(g: &Group<A>, s: &Symbol<A::E>) -> Result<Mat<A::E>> {
    validate(g, s)?;
    Ok(gen_matrix_unchecked(g, s))
}

pub fn gen_matrix_unchecked<A: FormAlg>(g: &Group<A>, s: &Symbol<A::E>) -> Mat<A::E> {
    let mut m = g.identity();
    for (p, q, v) in entries(g, s) {
        m.set(p, q, v);
    }
    m
}

/// M ← (I + N) M, where N is the symbol's off-identity part.
pub fn apply_left<A: FormAlg>(g: &Group<A>, s: &Symbol<A::E>, m: &mut Mat<A::E>) {
    let a = g.alg.as_ref();
    let es = entries(g, s);
    let rows: Vec<Vec<A::E>> = es.iter().map(|(_, q, _)| m.row(*q)).collect();
    for ((p, _, c), row) in es.iter().zip(rows) {
        for (col, x) in row.iter().enumerate() {
            if !a.is_zero(x) {
                let v = a.add(m.get(*p, col), &a.mul(c, x));
                m.set(*p, col, v);
            }
        }
    }
}

/// M ← M (I + N).
pub fn apply_right<A: FormAlg>(g: &Group<A>, s: &Symbol<A::E>, m: &mut Mat<A::E>) {
    let a = g.alg.as_ref();
    let es = entries(g, s);
    let cols: Vec<Vec<A::E>> = es.iter().map(|(p, _, _)| m.column(*p)).collect();
    for ((_, q, c), col) in es.iter().zip(cols) {
        for (row, x) in col.iter().enumerate() {
            if !a.is_zero(x) {
                let v = a.add(m.get(row, *q), &a.mul(x, c));
                m.set(row, *q, v);
            }
        }
    }
}

/// v ← (I + N) v.
pub fn apply_to_vector<A: FormAlg>(g: &Group<A>, s: &Symbol<A::E>, v: &mut [A::E]) {
    let a = g.alg.as_ref();
    let es = entries(g, s);
    let old: Vec<A::E> = es.iter().map(|(_, q, _)| v[*q].clone()).collect();
    for ((p, _, c), x) in es.iter().zip(old) {
        v[*p] = a.add(&v[*p], &a.mul(c, &x));
    }
}

/// Positive symbols whose product is the inverse of `s`.
pub fn gen_inverse<A: FormAlg>(g: &Group<A>, s: &Symbol<A::E>) -> Result<Word<A::E>> {
    let a = g.alg.as_ref();
    match &s.payload {
        Payload::Scalar(x) => Ok(Word::single(Symbol::scalar(s.family, s.i, s.j, a.neg(x)))),
        Payload::Column { zeta, .. } => {
            let neg: Vec<A::E> = zeta.iter().map(|x| a.neg(x)).collect();
            let t = column_symbol(g, s.family, s.i, neg)
                .ok_or_else(|| Error::Constraint("no ζ_f for −ζ".into()))?;
            let zero = Symbol { family: s.family, i: s.i, j: s.i, payload: Payload::Column { zeta: vec![a.zero(); g.r()], f: a.zero() } };
            let (_, corr) = split_column(g, s, &t, Some(&zero))?;
            let mut w = Word::single(t);
            if let Some(c) = corr {
                w.push(Symbol::scalar(c.family, c.i, c.j, a.neg(c.scalar_payload().unwrap())));
            }
            Ok(w)
        }
    }
}

/// θ(ζ)θ(ξ) = θ(ζ+ξ)·c with the correction c on the diagonal of the l (hm) or r (hrv) family.
/// Returns (θ(ζ+ξ), c); c is None when it vanishes. `sum` overrides the choice of (ζ+ξ)_f.
pub fn split_column<A: FormAlg>(
    g: &Group<A>,
    s: &Symbol<A::E>,
    t: &Symbol<A::E>,
    sum: Option<&Symbol<A::E>>,
) -> Result<(Symbol<A::E>, Option<Symbol<A::E>>)> {
    let a = g.alg.as_ref();
    let (Payload::Column { zeta, f: zf }, Payload::Column { zeta: xi, f: xf }) = (&s.payload, &t.payload) else {
        return Err(Error::Constraint("column splitting needs column payloads".into()));
    };
    let su = match sum {
        Some(x) => x.clone(),
        None => {
            let z: Vec<A::E> = zeta.iter().zip(xi).map(|(p, q)| a.add(p, q)).collect();
            column_symbol(g, s.family, s.i, z).ok_or_else(|| Error::Constraint("ζ+ξ has no ζ_f".into()))?
        }
    };
    let Payload::Column { f: sf, .. } = &su.payload else { unreachable!() };
    // ζ̄ Ā₁ ξ
    let cross = zeta
        .iter()
        .zip(xi)
        .zip(&g.a)
        .fold(a.zero(), |acc, ((z, x), ak)| a.add(&acc, &a.mul(&a.mul(&a.conj(z), &a.conj(ak)), x)));
    let inner = a.sub(&a.add(&a.add(&a.conj(zf), &a.conj(xf)), &cross), &a.conj(sf));
    let (fam, c) = match s.family {
        Family::HM => (Family::HL, inner),
        _ => (Family::HR, a.mul(&a.lambda(), &inner)),
    };
    let corr = if a.is_zero(&c) { None } else { Some(Symbol::scalar(fam, s.i, s.i, c)) };
    Ok((su, corr))
}

/// Both sides of a splitting identity: θ(x)θ(y) on the left, θ(x+y)[·correction] on the right.
pub fn split<A: FormAlg>(g: &Group<A>, s: &Symbol<A::E>, t: &Symbol<A::E>) -> Result<(Word<A::E>, Word<A::E>)> {
    let a = g.alg.as_ref();
    if (s.family, s.i, s.j) != (t.family, t.i, t.j) {
        return Err(Error::Constraint("split needs matching family and indices".into()));
    }
    validate(g, s)?;
    validate(g, t)?;
    let lhs = Word::from_symbols(vec![s.clone(), t.clone()]);
    let rhs = match (&s.payload, &t.payload) {
        (Payload::Scalar(x), Payload::Scalar(y)) => Word::single(Symbol::scalar(s.family, s.i, s.j, a.add(x, y))),
        _ => {
            let (su, corr) = split_column(g, s, t, None)?;
            let mut w = Word::single(su);
            if let Some(c) = corr {
                w.push(c);
            }
            w
        }
    };
    Ok((lhs, rhs))
}

pub fn eval<A: FormAlg>(g: &Group<A>, w: &Word<A::E>) -> Result<Mat<A::E>> {
    let mut m = g.identity();
    for l in &w.letters {
        validate(g, &l.sym)?;
        if l.inv {
            for s in gen_inverse(g, &l.sym)?.letters {
                apply_right(g, &s.sym, &mut m);
            }
        } else {
            apply_right(g, &l.sym, &mut m);
        }
    }
    Ok(m)
}

/// eval(w)·v.
pub fn eval_on_vector<A: FormAlg>(g: &Group<A>, w: &Word<A::E>, v: &[A::E]) -> Result<Vec<A::E>> {
    let mut out = v.to_vec();
    for l in w.letters.iter().rev() {
        validate(g, &l.sym)?;
        if l.inv {
            for s in gen_inverse(g, &l.sym)?.letters.iter().rev() {
                apply_to_vector(g, &s.sym, &mut out);
            }
        } else {
            apply_to_vector(g, &l.sym, &mut out);
        }
    }
    Ok(out)
}

/// Rewrite to positive letters only.
pub fn positive_form<A: FormAlg>(g: &Group<A>, w: &Word<A::E>) -> Result<Word<A::E>> {
    let mut out = Word::new();
    for l in &w.letters {
        if l.inv {
            out.append(&gen_inverse(g, &l.sym)?);
        } else {
            out.push(l.sym.clone());
        }
    }
    Ok(out)
}

/// Positive form, adjacent scalar symbols on the same (family, i, j) merged, zero payloads dropped.
pub fn simplify<A: FormAlg>(g: &Group<A>, w: &Word<A::E>) -> Result<Word<A::E>> {
    let a = g.alg.as_ref();
    let mut out: Vec<Symbol<A::E>> = Vec::new();
    for l in positive_form(g, w)?.letters {
        let s = l.sym;
        let zero = match &s.payload {
            Payload::Scalar(x) => a.is_zero(x),
            Payload::Column { zeta, f } => zeta.iter().all(|z| a.is_zero(z)) && a.is_zero(f),
        };
        if zero {
            continue;
        }
        if let (Some(last), Payload::Scalar(y)) = (out.last_mut(), &s.payload) {
            if (last.family, last.i, last.j) == (s.family, s.i, s.j) {
                if let Payload::Scalar(x) = &last.payload {
                    let sum = a.add(x, y);
                    if a.is_zero(&sum) {
                        out.pop();
                    } else {
                        last.payload = Payload::Scalar(sum);
                    }
                    continue;
                }
            }
        }
        out.push(s);
    }
    Ok(Word::from_symbols(out))
}

/// Every valid symbol of the group whose scalar payloads come from `payloads`; column payloads range over
/// all ζ with entries in `payloads` and the least ζ_f.
pub fn all_symbols<A: FormAlg>(g: &Group<A>, payloads: &[A::E]) -> Vec<Symbol<A::E>> {
    let mut out = Vec::new();
    let n = g.n;
    for &fam in Family::for_flavor(g.flavor) {
        if fam.is_column() {
            for i in 0..n {
                for zeta in tuples(payloads, g.r()) {
                    if let Some(s) = column_symbol(g, fam, i, zeta) {
                        if validate(g, &s).is_ok() {
                            out.push(s);
                        }
                    }
                }
            }
        } else {
            for i in 0..n {
                for j in 0..n {
                    for x in payloads {
                        let s = Symbol::scalar(fam, i, j, x.clone());
                        if validate(g, &s).is_ok() {
                            out.push(s);
                        }
                    }
                }
            }
        }
    }
    out
}

/// All length-k tuples over `xs`.
pub fn tuples<E: Clone>(xs: &[E], k: usize) -> Vec<Vec<E>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * xs.len());
        for t in &out {
            for x in xs {
                let mut u = t.clone();
                u.push(x.clone());
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// Check eval(lhs) = eval(rhs).
pub fn words_equal<A: FormAlg>(g: &Group<A>, lhs: &Word<A::E>, rhs: &Word<A::E>) -> Result<bool> {
    Ok(eval(g, lhs)? == eval(g, rhs)?)
}

/// Is every symbol's matrix ≡ I modulo the ideal described by `in_ideal`?
pub fn congruent_to_identity<A: FormAlg>(g: &Group<A>, m: &Mat<A::E>, in_ideal: impl Fn(&A::E) -> bool) -> bool {
    let a = g.alg.as_ref();
    let d = mx::sub(a, m, &g.identity());
    d.data.iter().all(in_ideal)
}

#[cfg(test)]
mod tests;
