//! Dense exact-rational matrices and canonically represented subspaces.
//!
//! Subspaces are stored as reduced row-echelon bases, so structural equality
//! of `Subspace` values is genuine equality of subspaces.

use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;
use crate::{Error, Result};

/// Dense matrix over the rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl std::fmt::Debug for QMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| crate::scalar::scalar_string(self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        QMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = QMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> QMat {
        QMat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        QMat::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                if !self.get(i, k).is_zero() && !rhs.get(k, j).is_zero() {
                    acc += self.get(i, k) * rhs.get(k, j);
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for k in 0..self.cols {
                    if !self.get(i, k).is_zero() && !v[k].is_zero() {
                        acc += self.get(i, k) * &v[k];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + rhs.get(i, j))
    }

    pub fn sub(&self, rhs: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - rhs.get(i, j))
    }

    pub fn neg(&self) -> QMat {
        QMat::from_fn(self.rows, self.cols, |i, j| -self.get(i, j).clone())
    }

    pub fn scale(&self, s: &Scalar) -> QMat {
        QMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * s)
    }

    pub fn kronecker(&self, rhs: &QMat) -> QMat {
        QMat::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self.get(i / rhs.rows, j / rhs.cols) * rhs.get(i % rhs.rows, j % rhs.cols)
        })
    }

    pub fn stack(&self, below: &QMat) -> QMat {
        assert_eq!(self.cols, below.cols);
        let mut rows = self.row_vecs();
        rows.extend(below.row_vecs());
        QMat::from_rows(rows)
    }

    /// Horizontal concatenation `[self | right]`.
    pub fn augment(&self, right: &QMat) -> QMat {
        assert_eq!(self.rows, right.rows);
        QMat::from_fn(self.rows, self.cols + right.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                right.get(i, j - self.cols).clone()
            }
        })
    }

    /// Reduced row-echelon form with pivot columns.
    pub fn rref(&self) -> (QMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let factor = m.get(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j) - &(m.get(r, j) * &factor);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let (red, pivots) = self.augment(&QMat::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(QMat::from_fn(n, n, |i, j| red.get(i, n + j).clone()))
    }

    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Scalar::zero();
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = -det;
            }
            det *= m.get(c, c);
            let inv = m.get(c, c).recip();
            for i in (c + 1)..n {
                if !m.get(i, c).is_zero() {
                    let factor = m.get(i, c) * &inv;
                    for j in c..n {
                        let v = m.get(i, j) - &(m.get(c, j) * &factor);
                        m.set(i, j, v);
                    }
                }
            }
        }
        det
    }

    /// Canonical basis of `{x : A x = 0}`, one row per kernel dimension.
    pub fn null_space(&self) -> QMat {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::new();
        for &fc in &free {
            let mut v = vec![Scalar::zero(); self.cols];
            v[fc] = Scalar::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -red.get(r, fc).clone();
            }
            rows.push(v);
        }
        if rows.is_empty() {
            QMat::zeros(0, self.cols)
        } else {
            QMat::from_rows(rows).rref().0
        }
    }

    /// One solution of `A x = b`, if any.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(self.rows, b.len());
        let rhs = QMat::from_rows(b.iter().map(|x| vec![x.clone()]).collect());
        let (red, pivots) = self.augment(&rhs).rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = red.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// Monic characteristic polynomial coefficients `c_0, …, c_{n-1}, 1`
    /// (Faddeev–LeVerrier).
    pub fn char_poly(&self) -> Vec<Scalar> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = Scalar::one();
        let mut m = QMat::identity(n);
        for k in 1..=n {
            let am = self.mul(&m);
            let mut tr = Scalar::zero();
            for i in 0..n {
                tr += am.get(i, i);
            }
            let c = -tr / Scalar::from(num_bigint::BigInt::from(k as i64));
            coeffs[n - k] = c.clone();
            let mut next = am;
            for i in 0..n {
                let v = next.get(i, i) + &c;
                next.set(i, i, v);
            }
            m = next;
        }
        coeffs
    }
}

/// A subspace of `E^n`, canonically stored as RREF row basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: QMat,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} of {}) {:?}", self.dim(), self.ambient, self.basis)
    }
}

impl Subspace {
    pub fn from_rows(ambient: usize, rows: Vec<Vec<Scalar>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ambient));
        if rows.is_empty() {
            return Subspace::zero(ambient);
        }
        let (red, pivots) = QMat::from_rows(rows).rref();
        let basis = QMat::from_rows((0..pivots.len()).map(|i| red.row(i).to_vec()).collect());
        Subspace { ambient, basis }
    }

    pub fn from_mat(m: &QMat) -> Self {
        Subspace::from_rows(m.cols(), m.row_vecs())
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: QMat::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: QMat::identity(ambient),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &QMat {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vecs()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Canonical residue of `v` modulo the subspace (zero iff contained).
    pub fn reduce_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        for r in 0..self.basis.rows() {
            let pivot = (0..self.ambient)
                .find(|&c| !self.basis.get(r, c).is_zero())
                .expect("nonzero basis row");
            if !w[pivot].is_zero() {
                let factor = w[pivot].clone();
                for c in 0..self.ambient {
                    let x = &w[c] - &(self.basis.get(r, c) * &factor);
                    w[c] = x;
                }
            }
        }
        w
    }

    pub fn contains_vec(&self, v: &[Scalar]) -> bool {
        self.reduce_vec(v).iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.basis_rows().iter().all(|r| self.contains_vec(r))
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coords_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let sol = self.basis.transpose().solve(v)?;
        Some(sol)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut rows = self.basis_rows();
        rows.extend(other.basis_rows());
        Subspace::from_rows(self.ambient, rows)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        // v = x·A = y·B; kernel of [Aᵀ | −Bᵀ] gives the coefficient pairs.
        let at = self.basis.transpose();
        let bt = other.basis.transpose().neg();
        let ker = at.augment(&bt).null_space();
        let mut rows = Vec::new();
        for i in 0..ker.rows() {
            let x = &ker.row(i)[..self.dim()];
            let mut v = vec![Scalar::zero(); self.ambient];
            for (k, xk) in x.iter().enumerate() {
                if !xk.is_zero() {
                    for c in 0..self.ambient {
                        let t = &v[c] + &(self.basis.get(k, c) * xk);
                        v[c] = t;
                    }
                }
            }
            rows.push(v);
        }
        Subspace::from_rows(self.ambient, rows)
    }

    /// Annihilator under the standard pairing: `{y : ⟨y, x⟩ = 0 ∀ x}`.
    pub fn annihilator(&self) -> Subspace {
        if self.is_zero() {
            return Subspace::full(self.ambient);
        }
        Subspace::from_mat(&self.basis.null_space())
    }

    /// Image `{A v : v ∈ self}` for `A` acting on column vectors.
    pub fn map_by(&self, a: &QMat) -> Subspace {
        assert_eq!(a.cols(), self.ambient);
        let rows = (0..self.dim())
            .map(|i| a.mul_vec(self.basis.row(i)))
            .collect();
        Subspace::from_rows(a.rows(), rows)
    }

    /// Tensor product subspace inside `E^{n·m}` (Kronecker coordinates).
    pub fn tensor(&self, other: &Subspace) -> Subspace {
        let amb = self.ambient * other.ambient;
        let mut rows = Vec::new();
        for u in self.basis_rows() {
            for v in other.basis_rows() {
                let mut w = Vec::with_capacity(amb);
                for a in &u {
                    for b in &v {
                        w.push(a * b);
                    }
                }
                rows.push(w);
            }
        }
        Subspace::from_rows(amb, rows)
    }
}

/// All rational roots with multiplicity, provided the polynomial splits over
/// the rationals into linear factors; coefficients are `c_0..=c_n` with
/// `c_n ≠ 0`.
pub fn rational_roots(coeffs: &[Scalar]) -> Result<Vec<(Scalar, usize)>> {
    use num_bigint::BigInt;
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    // Clear denominators to an integer polynomial.
    let mut lcm = BigInt::from(1);
    for c in coeffs {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * Scalar::from(lcm.clone())).to_integer())
        .collect();

    let mut poly = ints;
    let mut roots: Vec<(Scalar, usize)> = Vec::new();

    // Strip roots at zero.
    let mut zero_mult = 0usize;
    while poly.first().map(|c| c.is_zero()).unwrap_or(false) {
        poly.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Scalar::zero(), zero_mult));
    }

    while poly.len() > 1 {
        let a0 = poly[0].abs();
        let an = poly[poly.len() - 1].abs();
        let num_divs = divisors(&a0)?;
        let den_divs = divisors(&an)?;
        let mut found = None;
        'search: for p in &num_divs {
            for q in &den_divs {
                for sign in [1i64, -1] {
                    let cand = Scalar::new(p * BigInt::from(sign), q.clone());
                    if eval_int_poly(&poly, &cand).is_zero() {
                        found = Some(cand);
                        break 'search;
                    }
                }
            }
        }
        let Some(root) = found else {
            return Err(Error::EigenvalueDegeneracy(
                "characteristic polynomial does not split into rational linear factors".into(),
            ));
        };
        let mut mult = 0usize;
        while eval_int_poly(&poly, &root).is_zero() {
            poly = deflate(&poly, &root);
            mult += 1;
            if poly.len() == 1 {
                break;
            }
        }
        roots.push((root, mult));
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(roots)
}

fn eval_int_poly(poly: &[num_bigint::BigInt], x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for c in poly.iter().rev() {
        acc = acc * x + Scalar::from(c.clone());
    }
    acc
}

/// Exact synthetic division by `(X - r)`; the remainder must vanish.
fn deflate(poly: &[num_bigint::BigInt], r: &Scalar) -> Vec<num_bigint::BigInt> {
    let n = poly.len() - 1;
    let mut out = vec![Scalar::zero(); n];
    let mut carry = Scalar::zero();
    for k in (0..n).rev() {
        carry = Scalar::from(poly[k + 1].clone()) + carry * r;
        out[k] = carry.clone();
    }
    // Re-clear denominators introduced by a fractional root.
    let mut lcm = num_bigint::BigInt::from(1);
    for c in &out {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    out.iter()
        .map(|c| (c * Scalar::from(lcm.clone())).to_integer())
        .collect()
}

const DIVISOR_TRIAL_BOUND: u64 = 1 << 20;
const DIVISOR_COUNT_BOUND: usize = 1 << 14;

fn divisors(n: &num_bigint::BigInt) -> Result<Vec<num_bigint::BigInt>> {
    use num_bigint::BigInt;
    let mut n = n.abs();
    if n.is_zero() {
        return Ok(vec![BigInt::from(1)]);
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = 2u64;
    while BigInt::from(d.saturating_mul(d)) <= n {
        if d > DIVISOR_TRIAL_BOUND {
            return Err(Error::EigenvalueDegeneracy(
                "eigenvalue factorization exceeds desk-scale bounds".into(),
            ));
        }
        let bd = BigInt::from(d);
        let mut k = 0u32;
        while (&n % &bd).is_zero() {
            n /= &bd;
            k += 1;
        }
        if k > 0 {
            primes.push((bd, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::from(1) {
        primes.push((n, 1));
    }
    let mut divs = vec![BigInt::from(1)];
    for (p, k) in primes {
        let mut next = Vec::new();
        for dv in &divs {
            let mut pw = BigInt::from(1);
            for _ in 0..=k {
                next.push(dv * &pw);
                pw *= &p;
            }
        }
        divs = next;
        if divs.len() > DIVISOR_COUNT_BOUND {
            return Err(Error::EigenvalueDegeneracy(
                "eigenvalue divisor set exceeds desk-scale bounds".into(),
            ));
        }
    }
    divs.sort();
    divs.dedup();
    Ok(divs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn m(rows: Vec<Vec<i64>>) -> QMat {
        QMat::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(rat_int).collect())
                .collect(),
        )
    }

    #[test]
    fn inverse_and_det() {
        let a = m(vec![vec![2, 1], vec![1, 1]]);
        assert_eq!(a.det(), rat_int(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QMat::identity(2));
        assert!(m(vec![vec![1, 2], vec![2, 4]]).inverse().is_none());
    }

    #[test]
    fn null_space_and_solve() {
        let a = m(vec![vec![1, 2, 3], vec![2, 4, 6]]);
        let ns = a.null_space();
        assert_eq!(ns.rows(), 2);
        for i in 0..ns.rows() {
            assert!(a.mul_vec(ns.row(i)).iter().all(|x| x.is_zero()));
        }
        let sol = a.solve(&[rat_int(6), rat_int(12)]).unwrap();
        assert_eq!(a.mul_vec(&sol), vec![rat_int(6), rat_int(12)]);
        assert!(a.solve(&[rat_int(1), rat_int(0)]).is_none());
    }

    #[test]
    fn subspace_operations() {
        let u = Subspace::from_rows(3, vec![vec![rat_int(1), rat_int(0), rat_int(0)], vec![
            rat_int(0),
            rat_int(1),
            rat_int(0),
        ]]);
        let v = Subspace::from_rows(3, vec![vec![rat_int(0), rat_int(1), rat_int(1)]]);
        let s = u.sum(&v);
        assert_eq!(s.dim(), 3);
        let w = Subspace::from_rows(3, vec![vec![rat_int(0), rat_int(1), rat_int(0)], vec![
            rat_int(0),
            rat_int(0),
            rat_int(1),
        ]]);
        let i = u.intersect(&w);
        assert_eq!(i.dim(), 1);
        assert!(i.contains_vec(&[rat_int(0), rat_int(1), rat_int(0)]));
        let ann = v.annihilator();
        assert_eq!(ann.dim(), 2);
        for r in ann.basis_rows() {
            let dot = &r[1] + &r[2];
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn char_poly_companion() {
        // x^2 - 3x + 2 = (x-1)(x-2)
        let a = m(vec![vec![0, -2], vec![1, 3]]);
        let cp = a.char_poly();
        assert_eq!(cp, vec![rat_int(2), rat_int(-3), rat_int(1)]);
        let roots = rational_roots(&cp).unwrap();
        assert_eq!(roots, vec![(rat_int(1), 1), (rat_int(2), 1)]);
    }

    #[test]
    fn rational_roots_with_fractions_and_multiplicity() {
        // (x - 1/2)^2 (x + 3)
        let half = rat(1, 2);
        let c0 = &half * &half * rat_int(3);
        let c1 = &half * &half - (&half + &half) * rat_int(3) * rat(1, 2) - rat(3, 2) * rat_int(0);
        // Expand exactly: (x^2 - x + 1/4)(x + 3) = x^3 + 2x^2 - 11/4 x + 3/4.
        let cp = vec![rat(3, 4), rat(-11, 4), rat_int(2), rat_int(1)];
        let _ = (c0, c1);
        let roots = rational_roots(&cp).unwrap();
        assert_eq!(roots, vec![(rat_int(-3), 1), (rat(1, 2), 2)]);
    }

    #[test]
    fn irrational_spectrum_is_refused() {
        // x^2 - 2 has no rational roots.
        let cp = vec![rat_int(-2), rat_int(0), rat_int(1)];
        assert!(rational_roots(&cp).is_err());
    }
}
