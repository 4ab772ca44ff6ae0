//! Dense matrices over any `FormAlg`.

use crate::alg::FormAlg;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat<E> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<E>,
}

impl<E: Clone> Mat<E> {
    pub fn filled(rows: usize, cols: usize, v: E) -> Mat<E> {
        Mat { rows, cols, data: vec![v; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Mat<E> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<E> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat<E> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(self.get(r0 + i, c0 + j).clone());
            }
        }
        Mat { rows, cols, data }
    }

    pub fn put_block(&mut self, r0: usize, c0: usize, b: &Mat<E>) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn map<F, T>(&self, f: F) -> Mat<T>
    where
        F: Fn(&E) -> T,
    {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

pub fn zeros<A: FormAlg>(a: &A, rows: usize, cols: usize) -> Mat<A::E> {
    Mat::filled(rows, cols, a.zero())
}

pub fn identity<A: FormAlg>(a: &A, n: usize) -> Mat<A::E> {
    let mut m = zeros(a, n, n);
    for i in 0..n {
        m.set(i, i, a.one());
    }
    m
}

/// Matrix unit c·e_ij of size n.
pub fn unit<A: FormAlg>(a: &A, n: usize, i: usize, j: usize, c: A::E) -> Mat<A::E> {
    let mut m = zeros(a, n, n);
    m.set(i, j, c);
    m
}

pub fn mul<A: FormAlg>(a: &A, x: &Mat<A::E>, y: &Mat<A::E>) -> Mat<A::E> {
    assert_eq!(x.cols, y.rows, "matrix product shape mismatch");
    let mut out = zeros(a, x.rows, y.cols);
    for i in 0..x.rows {
        for k in 0..x.cols {
            let xik = x.get(i, k);
            if a.is_zero(xik) {
                continue;
            }
            for j in 0..y.cols {
                let ykj = y.get(k, j);
                if a.is_zero(ykj) {
                    continue;
                }
                let v = a.add(out.get(i, j), &a.mul(xik, ykj));
                out.set(i, j, v);
            }
        }
    }
    out
}

pub fn add<A: FormAlg>(a: &A, x: &Mat<A::E>, y: &Mat<A::E>) -> Mat<A::E> {
    assert_eq!((x.rows, x.cols), (y.rows, y.cols));
    Mat { rows: x.rows, cols: x.cols, data: x.data.iter().zip(&y.data).map(|(p, q)| a.add(p, q)).collect() }
}

pub fn sub<A: FormAlg>(a: &A, x: &Mat<A::E>, y: &Mat<A::E>) -> Mat<A::E> {
    assert_eq!((x.rows, x.cols), (y.rows, y.cols));
    Mat { rows: x.rows, cols: x.cols, data: x.data.iter().zip(&y.data).map(|(p, q)| a.sub(p, q)).collect() }
}

pub fn neg<A: FormAlg>(a: &A, x: &Mat<A::E>) -> Mat<A::E> {
    x.map(|e| a.neg(e))
}

/// Left scalar multiple c·M.
pub fn scale<A: FormAlg>(a: &A, c: &A::E, x: &Mat<A::E>) -> Mat<A::E> {
    x.map(|e| a.mul(c, e))
}

/// Right scalar multiple M·c.
pub fn scale_right<A: FormAlg>(a: &A, x: &Mat<A::E>, c: &A::E) -> Mat<A::E> {
    x.map(|e| a.mul(e, c))
}

pub fn transpose<E: Clone>(x: &Mat<E>) -> Mat<E> {
    let mut data = Vec::with_capacity(x.data.len());
    for j in 0..x.cols {
        for i in 0..x.rows {
            data.push(x.get(i, j).clone());
        }
    }
    Mat { rows: x.cols, cols: x.rows, data }
}

/// M̄ = (m̄_ij)^t.
pub fn conjugate_transpose<A: FormAlg>(a: &A, x: &Mat<A::E>) -> Mat<A::E> {
    transpose(&x.map(|e| a.conj(e)))
}

/// Entrywise involution without transposing.
pub fn conj_entries<A: FormAlg>(a: &A, x: &Mat<A::E>) -> Mat<A::E> {
    x.map(|e| a.conj(e))
}

pub fn is_identity<A: FormAlg>(a: &A, x: &Mat<A::E>) -> bool {
    x.is_square()
        && (0..x.rows).all(|i| (0..x.cols).all(|j| if i == j { a.is_one(x.get(i, j)) } else { a.is_zero(x.get(i, j)) }))
}

pub fn is_diagonal<A: FormAlg>(a: &A, x: &Mat<A::E>) -> bool {
    (0..x.rows).all(|i| (0..x.cols).all(|j| i == j || a.is_zero(x.get(i, j))))
}

pub fn column_vec<E: Clone>(v: &[E]) -> Mat<E> {
    Mat { rows: v.len(), cols: 1, data: v.to_vec() }
}

pub fn row_vec<E: Clone>(v: &[E]) -> Mat<E> {
    Mat { rows: 1, cols: v.len(), data: v.to_vec() }
}

pub fn mat_vec<A: FormAlg>(a: &A, m: &Mat<A::E>, v: &[A::E]) -> Vec<A::E> {
    mul(a, m, &column_vec(v)).data
}

/// Determinant over a commutative ring, division free (Berkowitz).
pub fn det_commutative<A: FormAlg>(a: &A, m: &Mat<A::E>) -> A::E {
    assert!(m.is_square());
    let n = m.rows;
    if n == 0 {
        return a.one();
    }
    // characteristic polynomial coefficients, built from the trailing principal submatrices
    let mut c: Vec<A::E> = vec![a.one(), a.neg(m.get(n - 1, n - 1))];
    for k in (0..n - 1).rev() {
        let size = n - k;
        let akk = m.get(k, k).clone();
        let r: Vec<A::E> = (k + 1..n).map(|j| m.get(k, j).clone()).collect();
        let s: Vec<A::E> = (k + 1..n).map(|i| m.get(i, k).clone()).collect();
        let sub = m.block(k + 1, k + 1, size - 1, size - 1);
        // Toeplitz column: 1, -a_kk, -r s, -r A s, -r A² s, ...
        let mut col = vec![a.one(), a.neg(&akk)];
        let mut v = s.clone();
        for _ in 0..size - 1 {
            let rv = r.iter().zip(&v).fold(a.zero(), |acc, (x, y)| a.add(&acc, &a.mul(x, y)));
            col.push(a.neg(&rv));
            v = mat_vec(a, &sub, &v);
        }
        let mut next = vec![a.zero(); size + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            let mut acc = a.zero();
            for (j, cj) in c.iter().enumerate() {
                if i >= j && i - j < col.len() {
                    acc = a.add(&acc, &a.mul(&col[i - j], cj));
                }
            }
            *slot = acc;
        }
        c = next;
    }
    let d = c[n].clone();
    if n % 2 == 1 {
        a.neg(&d)
    } else {
        d
    }
}

/// Inverse over a commutative ring via the adjugate.
pub fn inverse_commutative<A: FormAlg>(a: &A, m: &Mat<A::E>) -> Result<Mat<A::E>> {
    let n = m.rows;
    let d = det_commutative(a, m);
    let dinv = a.inv(&d).ok_or(Error::Singular)?;
    let mut out = zeros(a, n, n);
    for i in 0..n {
        for j in 0..n {
            let minor = minor(m, j, i);
            let mut c = det_commutative(a, &minor);
            if (i + j) % 2 == 1 {
                c = a.neg(&c);
            }
            out.set(i, j, a.mul(&c, &dinv));
        }
    }
    Ok(out)
}

fn minor<E: Clone>(m: &Mat<E>, skip_r: usize, skip_c: usize) -> Mat<E> {
    let mut data = Vec::new();
    for i in 0..m.rows {
        if i == skip_r {
            continue;
        }
        for j in 0..m.cols {
            if j != skip_c {
                data.push(m.get(i, j).clone());
            }
        }
    }
    Mat { rows: m.rows - 1, cols: m.cols - 1, data }
}

pub fn show<A: FormAlg>(a: &A, m: &Mat<A::E>) -> String {
    (0..m.rows).map(|i| (0..m.cols).map(|j| a.show(m.get(i, j))).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::FormRing;
    use crate::ring::FiniteRing;

    fn z(n: u32) -> FormRing {
        FormRing::build(&FiniteRing::zmod(n).unwrap(), 1, &[]).unwrap()
    }

    #[test]
    fn berkowitz_matches_cofactor_expansion() {
        let a = z(7);
        let m = Mat::from_rows(vec![vec![2, 3, 1], vec![4, 0, 5], vec![6, 1, 1]]);
        // 2(0-5) - 3(4-30) + 1(4-0) = -10 + 78 + 4 = 72 ≡ 2 mod 7
        assert_eq!(det_commutative(&a, &m), 2);
        let inv = inverse_commutative(&a, &m).unwrap();
        assert!(is_identity(&a, &mul(&a, &m, &inv)));
    }

    #[test]
    fn singular_detected() {
        let a = z(6);
        let m = Mat::from_rows(vec![vec![2, 0], vec![0, 1]]);
        assert_eq!(inverse_commutative(&a, &m), Err(Error::Singular));
    }

    #[test]
    fn conjugate_transpose_reverses_products() {
        let a = z(5);
        let x = Mat::from_rows(vec![vec![1, 2], vec![3, 4]]);
        let y = Mat::from_rows(vec![vec![0, 1], vec![2, 2]]);
        let lhs = conjugate_transpose(&a, &mul(&a, &x, &y));
        let rhs = mul(&a, &conjugate_transpose(&a, &y), &conjugate_transpose(&a, &x));
        assert_eq!(lhs, rhs);
    }
}
