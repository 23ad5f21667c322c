//! The coefficient ring `K₀⊗E ≅ E^f` with its cyclic Frobenius shift, plus
//! matrices, vectors, and submodules over it.
//!
//! Component `j` corresponds to the embedding restriction index `j`; the
//! Frobenius shift moves every component down by one: `σ(x)_j = x_{j+1 mod f}`.

use num_traits::{One, Zero};

use crate::linalg::{QMat, Subspace};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Element of `K₀⊗E`, stored as its `f` embedding components.
#[derive(Clone, PartialEq, Eq)]
pub struct SemiScalar {
    comps: Vec<Scalar>,
}

impl std::fmt::Debug for SemiScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(crate::scalar::scalar_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl SemiScalar {
    pub fn new(comps: Vec<Scalar>) -> Self {
        assert!(!comps.is_empty());
        SemiScalar { comps }
    }

    pub fn constant(x: Scalar, f: usize) -> Self {
        SemiScalar {
            comps: vec![x; f],
        }
    }

    pub fn zero(f: usize) -> Self {
        Self::constant(Scalar::zero(), f)
    }

    pub fn one(f: usize) -> Self {
        Self::constant(Scalar::one(), f)
    }

    pub fn f(&self) -> usize {
        self.comps.len()
    }

    pub fn comp(&self, c: usize) -> &Scalar {
        &self.comps[c]
    }

    pub fn comps(&self) -> &[Scalar] {
        &self.comps
    }

    /// Frobenius shift: the value at component `j+1` moves to component `j`.
    pub fn shift(&self) -> SemiScalar {
        let f = self.f();
        SemiScalar {
            comps: (0..f).map(|j| self.comps[(j + 1) % f].clone()).collect(),
        }
    }

    pub fn shift_by(&self, k: usize) -> SemiScalar {
        let f = self.f();
        SemiScalar {
            comps: (0..f).map(|j| self.comps[(j + k) % f].clone()).collect(),
        }
    }

    pub fn add(&self, rhs: &SemiScalar) -> SemiScalar {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &SemiScalar) -> SemiScalar {
        self.zip(rhs, |a, b| a - b)
    }

    pub fn mul(&self, rhs: &SemiScalar) -> SemiScalar {
        self.zip(rhs, |a, b| a * b)
    }

    pub fn neg(&self) -> SemiScalar {
        SemiScalar {
            comps: self.comps.iter().map(|x| -x.clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|x| x.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        self.comps.iter().all(|x| !x.is_zero())
    }

    pub fn invert(&self) -> Result<SemiScalar> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        Ok(SemiScalar {
            comps: self.comps.iter().map(|x| x.recip()).collect(),
        })
    }

    fn zip(&self, rhs: &SemiScalar, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> SemiScalar {
        assert_eq!(self.f(), rhs.f());
        SemiScalar {
            comps: self
                .comps
                .iter()
                .zip(rhs.comps.iter())
                .map(|(a, b)| op(a, b))
                .collect(),
        }
    }
}

/// `rows × cols` matrix over `K₀⊗E`, stored as `f` component matrices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KMat {
    comps: Vec<QMat>,
}

impl KMat {
    pub fn from_comps(comps: Vec<QMat>) -> Self {
        assert!(!comps.is_empty());
        let (r, c) = (comps[0].rows(), comps[0].cols());
        assert!(comps.iter().all(|m| m.rows() == r && m.cols() == c));
        KMat { comps }
    }

    /// Same component matrix at every embedding index.
    pub fn constant(m: QMat, f: usize) -> Self {
        KMat {
            comps: vec![m; f],
        }
    }

    pub fn identity(n: usize, f: usize) -> Self {
        Self::constant(QMat::identity(n), f)
    }

    pub fn zeros(rows: usize, cols: usize, f: usize) -> Self {
        Self::constant(QMat::zeros(rows, cols), f)
    }

    pub fn f(&self) -> usize {
        self.comps.len()
    }

    pub fn rows(&self) -> usize {
        self.comps[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.comps[0].cols()
    }

    pub fn comp(&self, c: usize) -> &QMat {
        &self.comps[c]
    }

    pub fn comp_mut(&mut self, c: usize) -> &mut QMat {
        &mut self.comps[c]
    }

    pub fn entry(&self, i: usize, j: usize) -> SemiScalar {
        SemiScalar::new(self.comps.iter().map(|m| m.get(i, j).clone()).collect())
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: &SemiScalar) {
        assert_eq!(v.f(), self.f());
        for (c, m) in self.comps.iter_mut().enumerate() {
            m.set(i, j, v.comp(c).clone());
        }
    }

    pub fn mul(&self, rhs: &KMat) -> KMat {
        assert_eq!(self.f(), rhs.f());
        KMat {
            comps: self
                .comps
                .iter()
                .zip(rhs.comps.iter())
                .map(|(a, b)| a.mul(b))
                .collect(),
        }
    }

    pub fn add(&self, rhs: &KMat) -> KMat {
        KMat {
            comps: self
                .comps
                .iter()
                .zip(rhs.comps.iter())
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> KMat {
        KMat {
            comps: self.comps.iter().map(|a| a.neg()).collect(),
        }
    }

    /// Entrywise Frobenius shift: component `c` of the result is component
    /// `c+1 mod f` of the input.
    pub fn shift(&self) -> KMat {
        let f = self.f();
        KMat {
            comps: (0..f).map(|c| self.comps[(c + 1) % f].clone()).collect(),
        }
    }

    pub fn transpose(&self) -> KMat {
        KMat {
            comps: self.comps.iter().map(|m| m.transpose()).collect(),
        }
    }

    pub fn inverse(&self) -> Option<KMat> {
        let comps: Option<Vec<QMat>> = self.comps.iter().map(|m| m.inverse()).collect();
        comps.map(|comps| KMat { comps })
    }

    pub fn is_invertible(&self) -> bool {
        self.comps.iter().all(|m| !m.det().is_zero())
    }

    pub fn kronecker(&self, rhs: &KMat) -> KMat {
        assert_eq!(self.f(), rhs.f());
        KMat {
            comps: self
                .comps
                .iter()
                .zip(rhs.comps.iter())
                .map(|(a, b)| a.kronecker(b))
                .collect(),
        }
    }

    pub fn scale(&self, s: &SemiScalar) -> KMat {
        assert_eq!(self.f(), s.f());
        KMat {
            comps: self
                .comps
                .iter()
                .enumerate()
                .map(|(c, m)| m.scale(s.comp(c)))
                .collect(),
        }
    }

    /// Matrix action on a column vector, componentwise (no shift applied).
    pub fn apply(&self, v: &KVec) -> KVec {
        assert_eq!(self.f(), v.f());
        KVec {
            comps: self
                .comps
                .iter()
                .zip(v.comps.iter())
                .map(|(m, x)| m.mul_vec(x))
                .collect(),
        }
    }
}

/// Column vector of length `n` over `K₀⊗E`.
#[derive(Clone, PartialEq, Eq)]
pub struct KVec {
    comps: Vec<Vec<Scalar>>,
}

impl std::fmt::Debug for KVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let dims: Vec<String> = self
            .comps
            .iter()
            .map(|c| {
                let parts: Vec<String> = c.iter().map(crate::scalar::scalar_string).collect();
                format!("[{}]", parts.join(", "))
            })
            .collect();
        write!(f, "KVec({})", dims.join(" | "))
    }
}

impl KVec {
    pub fn from_comps(comps: Vec<Vec<Scalar>>) -> Self {
        assert!(!comps.is_empty());
        let n = comps[0].len();
        assert!(comps.iter().all(|c| c.len() == n));
        KVec { comps }
    }

    /// Same coordinates at every embedding component.
    pub fn constant(coords: Vec<Scalar>, f: usize) -> Self {
        KVec {
            comps: vec![coords; f],
        }
    }

    pub fn zero(n: usize, f: usize) -> Self {
        Self::constant(vec![Scalar::zero(); n], f)
    }

    /// Standard basis vector `e_i`.
    pub fn unit(n: usize, f: usize, i: usize) -> Self {
        let mut coords = vec![Scalar::zero(); n];
        coords[i] = Scalar::one();
        Self::constant(coords, f)
    }

    pub fn f(&self) -> usize {
        self.comps.len()
    }

    pub fn n(&self) -> usize {
        self.comps[0].len()
    }

    pub fn comp(&self, c: usize) -> &[Scalar] {
        &self.comps[c]
    }

    pub fn comp_mut(&mut self, c: usize) -> &mut Vec<Scalar> {
        &mut self.comps[c]
    }

    pub fn shift(&self) -> KVec {
        let f = self.f();
        KVec {
            comps: (0..f).map(|c| self.comps[(c + 1) % f].clone()).collect(),
        }
    }

    pub fn add(&self, rhs: &KVec) -> KVec {
        assert_eq!((self.f(), self.n()), (rhs.f(), rhs.n()));
        KVec {
            comps: self
                .comps
                .iter()
                .zip(rhs.comps.iter())
                .map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &KVec) -> KVec {
        self.add(&rhs.scale_rat(&-Scalar::one()))
    }

    pub fn scale(&self, s: &SemiScalar) -> KVec {
        assert_eq!(self.f(), s.f());
        KVec {
            comps: self
                .comps
                .iter()
                .enumerate()
                .map(|(c, a)| a.iter().map(|x| x * s.comp(c)).collect())
                .collect(),
        }
    }

    pub fn scale_rat(&self, s: &Scalar) -> KVec {
        KVec {
            comps: self
                .comps
                .iter()
                .map(|a| a.iter().map(|x| x * s).collect())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.iter().all(|x| x.is_zero()))
    }

    /// Entry `i` as a ring element.
    pub fn entry(&self, i: usize) -> SemiScalar {
        SemiScalar::new(self.comps.iter().map(|c| c[i].clone()).collect())
    }
}

/// A `K₀⊗E`-submodule of `(K₀⊗E)^n`, one subspace of `E^n` per embedding
/// component. Sums and intersections may fail to be free; `rank` reports
/// `None` in that case.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Submodule {
    comps: Vec<Subspace>,
}

impl Submodule {
    pub fn from_comps(comps: Vec<Subspace>) -> Self {
        assert!(!comps.is_empty());
        let n = comps[0].ambient();
        assert!(comps.iter().all(|s| s.ambient() == n));
        Submodule { comps }
    }

    /// Module spanned by the given vectors; requires them to be a basis
    /// (independent in every component).
    pub fn from_basis(n: usize, f: usize, basis: &[KVec]) -> Result<Self> {
        let mut comps = Vec::with_capacity(f);
        for c in 0..f {
            let rows: Vec<Vec<Scalar>> = basis.iter().map(|v| v.comp(c).to_vec()).collect();
            let sp = Subspace::from_rows(n, rows);
            if sp.dim() != basis.len() {
                return Err(Error::NotFree(format!(
                    "basis vectors are dependent at embedding component {c}"
                )));
            }
            comps.push(sp);
        }
        if comps.is_empty() {
            comps = vec![Subspace::zero(n); f.max(1)];
        }
        Ok(Submodule { comps })
    }

    pub fn zero(n: usize, f: usize) -> Self {
        Submodule {
            comps: vec![Subspace::zero(n); f],
        }
    }

    pub fn full(n: usize, f: usize) -> Self {
        Submodule {
            comps: vec![Subspace::full(n); f],
        }
    }

    pub fn f(&self) -> usize {
        self.comps.len()
    }

    pub fn ambient(&self) -> usize {
        self.comps[0].ambient()
    }

    pub fn comp(&self, c: usize) -> &Subspace {
        &self.comps[c]
    }

    pub fn is_free(&self) -> bool {
        let d = self.comps[0].dim();
        self.comps.iter().all(|s| s.dim() == d)
    }

    pub fn rank(&self) -> Option<usize> {
        if self.is_free() {
            Some(self.comps[0].dim())
        } else {
            None
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.comps.iter().map(|s| s.dim()).collect()
    }

    pub fn contains(&self, other: &Submodule) -> bool {
        self.comps
            .iter()
            .zip(other.comps.iter())
            .all(|(a, b)| a.contains(b))
    }

    pub fn contains_kvec(&self, v: &KVec) -> bool {
        (0..self.f()).all(|c| self.comps[c].contains_vec(v.comp(c)))
    }

    pub fn sum(&self, other: &Submodule) -> Submodule {
        Submodule {
            comps: self
                .comps
                .iter()
                .zip(other.comps.iter())
                .map(|(a, b)| a.sum(b))
                .collect(),
        }
    }

    pub fn intersect(&self, other: &Submodule) -> Submodule {
        Submodule {
            comps: self
                .comps
                .iter()
                .zip(other.comps.iter())
                .map(|(a, b)| a.intersect(b))
                .collect(),
        }
    }

    /// Image under a `K₀⊗E`-linear map (componentwise action).
    pub fn map_linear(&self, m: &KMat) -> Submodule {
        Submodule {
            comps: (0..self.f())
                .map(|c| self.comps[c].map_by(m.comp(c)))
                .collect(),
        }
    }

    /// Image under the semilinear map `v ↦ Phi·σ(v)`: component `c` of the
    /// image is `Phi^{(c)}` applied to component `c+1`.
    pub fn map_semilinear(&self, phi: &KMat) -> Submodule {
        let f = self.f();
        Submodule {
            comps: (0..f)
                .map(|c| self.comps[(c + 1) % f].map_by(phi.comp(c)))
                .collect(),
        }
    }

    /// Componentwise annihilator (used for dual flags).
    pub fn annihilator(&self) -> Submodule {
        Submodule {
            comps: self.comps.iter().map(|s| s.annihilator()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;
    use proptest::prelude::*;

    #[test]
    fn shift_examples() {
        let x = SemiScalar::new(vec![rat_int(1), rat_int(2), rat_int(3)]);
        assert_eq!(
            x.shift(),
            SemiScalar::new(vec![rat_int(2), rat_int(3), rat_int(1)])
        );
        let y = SemiScalar::new(vec![rat_int(5), rat_int(7)]);
        assert_eq!(y.shift().shift(), y);
        let z = SemiScalar::new(vec![rat_int(9)]);
        assert_eq!(z.shift(), z);
    }

    fn semiscalar_strategy(f: usize) -> impl Strategy<Value = SemiScalar> {
        proptest::collection::vec((-20i64..20, 1i64..8), f).prop_map(|v| {
            SemiScalar::new(v.into_iter().map(|(n, d)| crate::scalar::rat(n, d)).collect())
        })
    }

    proptest! {
        #[test]
        fn shift_is_a_ring_automorphism(x in semiscalar_strategy(3), y in semiscalar_strategy(3)) {
            prop_assert_eq!(x.shift().mul(&y.shift()), x.mul(&y).shift());
            prop_assert_eq!(x.shift().add(&y.shift()), x.add(&y).shift());
            prop_assert_eq!(x.shift_by(3), x);
        }

        #[test]
        fn dual_ring_laws(
            a in -10i64..10, b in -10i64..10, c in -10i64..10,
            d in -10i64..10, e in -10i64..10, g in -10i64..10,
        ) {
            use crate::scalar::DualScalar;
            let x = DualScalar::new(rat_int(a), rat_int(b));
            let y = DualScalar::new(rat_int(c), rat_int(d));
            let z = DualScalar::new(rat_int(e), rat_int(g));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            // Z² = 0: (a+bZ)(c+dZ)·Z = ac·Z.
            let zed = DualScalar::new(rat_int(0), rat_int(1));
            let lhs = &(&x * &y) * &zed;
            prop_assert_eq!(lhs, DualScalar::new(rat_int(0), rat_int(a) * rat_int(c)));
        }

        #[test]
        fn valuation_is_additive(
            (n1, d1) in (-50i64..50, 1i64..50),
            (n2, d2) in (-50i64..50, 1i64..50),
        ) {
            use crate::scalar::{p_valuation, rat, Valuation};
            let p = num_bigint::BigInt::from(3);
            let x = rat(n1, d1);
            let y = rat(n2, d2);
            prop_assume!(n1 != 0 && n2 != 0);
            let (Valuation::Finite(vx), Valuation::Finite(vy)) =
                (p_valuation(&x, &p), p_valuation(&y, &p)) else { panic!() };
            prop_assert_eq!(p_valuation(&(&x * &y), &p), Valuation::Finite(vx + vy));
        }
    }

    #[test]
    fn submodule_freeness() {
        let v1 = KVec::constant(vec![rat_int(1), rat_int(0)], 2);
        let v2 = KVec::constant(vec![rat_int(1), rat_int(0)], 2);
        assert!(Submodule::from_basis(2, 2, &[v1.clone(), v2]).is_err());
        let w = Submodule::from_basis(2, 2, &[v1]).unwrap();
        assert_eq!(w.rank(), Some(1));
    }
}
