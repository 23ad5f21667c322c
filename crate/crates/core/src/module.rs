//! Filtered Frobenius-monodromy modules: validation, the rank-one family,
//! tensor/dual/sub/quotient constructions, Newton and Hodge numbers, and weak
//! admissibility in the distinct-eigenvalue regime.

use num_traits::{One, Zero};

use crate::field::FieldContext;
use crate::linalg::{rational_roots, QMat, Subspace};
use crate::scalar::{rat_int, Scalar, Valuation};
use crate::semilinear::{KMat, KVec, Submodule};
use crate::{Error, Result};

/// Descending filtration on the per-embedding pieces, stored by strict jumps:
/// an entry `(j, V)` means the filtration equals `V` on the interval ending
/// at `j`, the full space below the first jump, and zero above the last.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Filtration {
    per_tau: Vec<Vec<(i64, Subspace)>>,
}

impl Filtration {
    pub fn new(per_tau: Vec<Vec<(i64, Subspace)>>) -> Self {
        Filtration { per_tau }
    }

    /// Canonicalizes evaluation points `(jump, space)` per embedding: merges
    /// ranges where the space does not drop and trims the zero tail.
    pub fn from_semantic(per_tau: Vec<Vec<(i64, Subspace)>>) -> Self {
        let per_tau = per_tau
            .into_iter()
            .map(|mut entries| {
                entries.sort_by_key(|(j, _)| *j);
                let mut kept: Vec<(i64, Subspace)> = Vec::new();
                for (j, sp) in entries.into_iter().rev() {
                    match kept.last() {
                        Some((_, later)) if *later == sp => continue,
                        _ => kept.push((j, sp)),
                    }
                }
                kept.reverse();
                while kept.last().map(|(_, sp)| sp.is_zero()).unwrap_or(false) {
                    kept.pop();
                }
                kept
            })
            .collect();
        Filtration { per_tau }
    }

    pub fn tau_count(&self) -> usize {
        self.per_tau.len()
    }

    pub fn steps(&self, tau: usize) -> &[(i64, Subspace)] {
        &self.per_tau[tau]
    }

    /// Semantic accessor for `Fil^i` at embedding `tau`.
    pub fn at(&self, tau: usize, i: i64) -> Subspace {
        let entries = &self.per_tau[tau];
        let ambient = entries
            .first()
            .map(|(_, sp)| sp.ambient())
            .unwrap_or(0);
        for (j, sp) in entries {
            if i <= *j {
                return sp.clone();
            }
        }
        Subspace::zero(ambient)
    }

    /// Jump positions with multiplicities (the weight multiset).
    pub fn jumps(&self, tau: usize) -> Vec<(i64, usize)> {
        let entries = &self.per_tau[tau];
        let mut out = Vec::with_capacity(entries.len());
        for (k, (j, sp)) in entries.iter().enumerate() {
            let next_dim = entries.get(k + 1).map(|(_, s)| s.dim()).unwrap_or(0);
            out.push((*j, sp.dim() - next_dim));
        }
        out
    }

    /// Weight multiset as a sorted list with repetition.
    pub fn weights(&self, tau: usize) -> Vec<i64> {
        let mut w = Vec::new();
        for (j, m) in self.jumps(tau) {
            w.extend(std::iter::repeat(j).take(m));
        }
        w
    }

    fn validate(&self, n: usize) -> Vec<String> {
        let mut violations = Vec::new();
        for (tau, entries) in self.per_tau.iter().enumerate() {
            if n == 0 {
                if !entries.is_empty() {
                    violations.push(format!("filtration flag: tau_{tau} nonempty on rank 0"));
                }
                continue;
            }
            if entries.is_empty() {
                violations.push(format!("filtration flag: tau_{tau} has no steps"));
                continue;
            }
            if !entries[0].1.is_full() {
                violations.push(format!("filtration flag: tau_{tau} lowest step is not full"));
            }
            for w in entries.windows(2) {
                let ((j1, s1), (j2, s2)) = (&w[0], &w[1]);
                if j2 <= j1 {
                    violations.push(format!("filtration flag: tau_{tau} jumps not increasing"));
                }
                if !s1.contains(s2) || s1.dim() <= s2.dim() {
                    violations.push(format!(
                        "filtration flag: tau_{tau} steps not strictly nested"
                    ));
                }
            }
            if entries.last().unwrap().1.is_zero() {
                violations.push(format!("filtration flag: tau_{tau} trailing zero step"));
            }
        }
        violations
    }
}

/// Filtered module over `K₀⊗E` with semilinear Frobenius `v ↦ Phi·σ(v)` and
/// linear monodromy `N`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhiNModule {
    pub ctx: FieldContext,
    pub n: usize,
    pub phi: KMat,
    pub nmat: KMat,
    pub fil: Filtration,
}

/// Outcome of the weak-admissibility scan.
#[derive(Clone, Debug)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub newton: Scalar,
    pub hodge: Scalar,
    /// A violating stable submodule with its Hodge and Newton numbers.
    pub witness: Option<(Submodule, Scalar, Scalar)>,
}

impl PhiNModule {
    pub fn new(ctx: FieldContext, n: usize, phi: KMat, nmat: KMat, fil: Filtration) -> Self {
        PhiNModule { ctx, n, phi, nmat, fil }
    }

    /// Diagnostic check of every structural invariant; empty report = pass.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        let f = self.ctx.f();
        if self.phi.f() != f || self.nmat.f() != f {
            violations.push("shape: component count differs from residue degree".into());
            return violations;
        }
        if self.phi.rows() != self.n
            || self.phi.cols() != self.n
            || self.nmat.rows() != self.n
            || self.nmat.cols() != self.n
        {
            violations.push("shape: matrix size differs from rank".into());
            return violations;
        }
        if self.fil.tau_count() != self.ctx.degree() {
            violations.push("shape: filtration embedding count differs from ef".into());
            return violations;
        }
        if !self.phi.is_invertible() {
            violations.push("phi invertibility".into());
        }
        // N Phi = p Phi σ(N)
        let lhs = self.nmat.mul(&self.phi);
        let rhs = self
            .phi
            .mul(&self.nmat.shift())
            .scale(&crate::semilinear::SemiScalar::constant(
                self.ctx.p_scalar(),
                f,
            ));
        if lhs != rhs {
            violations.push("phi-N relation".into());
        }
        // Nilpotency.
        let mut power = self.nmat.clone();
        for _ in 1..self.n {
            power = power.mul(&self.nmat);
        }
        let zero = KMat::zeros(self.n, self.n, f);
        if self.n > 0 && power != zero {
            violations.push("nilpotent".into());
        }
        violations.extend(self.fil.validate(self.n));
        violations
    }

    /// Rank-one module: Frobenius cycles through the embedding components and
    /// picks up the value `a` when it returns, one filtration jump per
    /// embedding.
    pub fn rank1(ctx: FieldContext, a: &Scalar, jumps: &[i64]) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroFrobenius);
        }
        if jumps.len() != ctx.degree() {
            return Err(Error::Validation("need one jump per embedding".into()));
        }
        let f = ctx.f();
        let mut comps = Vec::with_capacity(f);
        for c in 0..f {
            let v = if c == 0 { a.clone() } else { Scalar::one() };
            comps.push(QMat::from_rows(vec![vec![v]]));
        }
        let phi = KMat::from_comps(comps);
        let nmat = KMat::zeros(1, 1, f);
        let fil = Filtration::new(
            jumps
                .iter()
                .map(|&j| vec![(j, Subspace::full(1))])
                .collect(),
        );
        Ok(PhiNModule::new(ctx, 1, phi, nmat, fil))
    }

    /// The unit object: rank one, Frobenius value 1, all jumps 0.
    pub fn unit_object(ctx: FieldContext) -> Self {
        let jumps = vec![0; ctx.degree()];
        PhiNModule::rank1(ctx, &Scalar::one(), &jumps).expect("unit object")
    }

    /// Tensor product, with basis ordered lexicographically `(i, j)`.
    pub fn tensor(&self, other: &PhiNModule) -> Result<PhiNModule> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        let phi = self.phi.kronecker(&other.phi);
        let n1 = KMat::identity(self.n, self.ctx.f());
        let n2 = KMat::identity(other.n, self.ctx.f());
        let nmat = self
            .nmat
            .kronecker(&n2)
            .add(&n1.kronecker(&other.nmat));
        let mut per_tau = Vec::with_capacity(self.ctx.degree());
        for tau in 0..self.ctx.degree() {
            let jumps1: Vec<i64> = self.fil.steps(tau).iter().map(|(j, _)| *j).collect();
            let jumps2: Vec<i64> = other.fil.steps(tau).iter().map(|(j, _)| *j).collect();
            let mut targets: Vec<i64> = jumps1
                .iter()
                .flat_map(|a| jumps2.iter().map(move |b| a + b))
                .collect();
            targets.sort();
            targets.dedup();
            let mut entries = Vec::new();
            for t in targets {
                let mut acc = Subspace::zero(self.n * other.n);
                for &a in &jumps1 {
                    let left = self.fil.at(tau, a);
                    let right = other.fil.at(tau, t - a);
                    if !left.is_zero() && !right.is_zero() {
                        acc = acc.sum(&left.tensor(&right));
                    }
                }
                entries.push((t, acc));
            }
            per_tau.push(entries);
        }
        Ok(PhiNModule::new(
            self.ctx.clone(),
            self.n * other.n,
            phi,
            nmat,
            Filtration::from_semantic(per_tau),
        ))
    }

    /// Dual module: Frobenius becomes the transpose inverse, monodromy the
    /// negated transpose, and the filtration the annihilator flag with the
    /// `1−i` index convention.
    pub fn dual(&self) -> PhiNModule {
        let phi = self
            .phi
            .transpose()
            .inverse()
            .expect("dual of a module with invertible phi");
        let nmat = self.nmat.transpose().neg();
        let mut per_tau = Vec::with_capacity(self.ctx.degree());
        for tau in 0..self.ctx.degree() {
            let mut entries: Vec<(i64, Subspace)> = self
                .fil
                .steps(tau)
                .iter()
                .map(|(j, _)| {
                    let sp = self.fil.at(tau, 1 - (-j)).annihilator();
                    (-j, sp)
                })
                .collect();
            entries.sort_by_key(|(j, _)| *j);
            per_tau.push(entries);
        }
        PhiNModule::new(
            self.ctx.clone(),
            self.n,
            phi,
            nmat,
            Filtration::from_semantic(per_tau),
        )
    }

    /// Checks that the given vectors span a free, `φ`- and `N`-stable
    /// submodule, and returns it.
    pub fn submodule_from_basis(&self, basis: &[KVec]) -> Result<Submodule> {
        let w = Submodule::from_basis(self.n, self.ctx.f(), basis)?;
        if !w.contains(&w.map_semilinear(&self.phi)) {
            return Err(Error::NotStable("submodule is not phi-stable".into()));
        }
        if !w.contains(&w.map_linear(&self.nmat)) {
            return Err(Error::NotStable("submodule is not N-stable".into()));
        }
        Ok(w)
    }

    /// Restriction to a stable free submodule, in the coordinates of the
    /// given basis.
    pub fn sub(&self, basis: &[KVec]) -> Result<PhiNModule> {
        let w = self.submodule_from_basis(basis)?;
        let r = basis.len();
        let f = self.ctx.f();
        // Basis matrix per component: columns are the basis vectors.
        let cols: Vec<QMat> = (0..f)
            .map(|c| {
                QMat::from_rows(basis.iter().map(|v| v.comp(c).to_vec()).collect()).transpose()
            })
            .collect();
        let coords_of = |c: usize, v: &[Scalar]| -> Result<Vec<Scalar>> {
            cols[c]
                .solve(v)
                .ok_or_else(|| Error::NotStable("image leaves the submodule".into()))
        };
        let mut phi_comps = Vec::with_capacity(f);
        let mut n_comps = Vec::with_capacity(f);
        for c in 0..f {
            let mut phi_c = QMat::zeros(r, r);
            let mut n_c = QMat::zeros(r, r);
            for (k, v) in basis.iter().enumerate() {
                let phi_img = self.phi.comp(c).mul_vec(v.comp((c + 1) % f));
                for (i, x) in coords_of(c, &phi_img)?.into_iter().enumerate() {
                    phi_c.set(i, k, x);
                }
                let n_img = self.nmat.comp(c).mul_vec(v.comp(c));
                for (i, x) in coords_of(c, &n_img)?.into_iter().enumerate() {
                    n_c.set(i, k, x);
                }
            }
            phi_comps.push(phi_c);
            n_comps.push(n_c);
        }
        let mut per_tau = Vec::with_capacity(self.ctx.degree());
        for tau in 0..self.ctx.degree() {
            let c = self.ctx.k0_index(tau);
            let mut entries = Vec::new();
            for (j, sp) in self.fil.steps(tau) {
                let inter = sp.intersect(w.comp(c));
                let rows: Vec<Vec<Scalar>> = inter
                    .basis_rows()
                    .into_iter()
                    .map(|v| coords_of(c, &v))
                    .collect::<Result<_>>()?;
                entries.push((*j, Subspace::from_rows(r, rows)));
            }
            per_tau.push(entries);
        }
        Ok(PhiNModule::new(
            self.ctx.clone(),
            r,
            KMat::from_comps(phi_comps),
            KMat::from_comps(n_comps),
            Filtration::from_semantic(per_tau),
        ))
    }

    /// Quotient by the stable free submodule spanned by `basis`. Coordinates
    /// are taken with respect to `lifts` when provided (their images must be
    /// a basis); otherwise deterministic standard-vector lifts are chosen per
    /// component. Returns the quotient and the lifts used.
    pub fn quotient(
        &self,
        basis: &[KVec],
        lifts: Option<&[KVec]>,
    ) -> Result<(PhiNModule, Vec<KVec>)> {
        let w = self.submodule_from_basis(basis)?;
        let r = basis.len();
        let q = self.n - r;
        let f = self.ctx.f();
        let lifts: Vec<KVec> = match lifts {
            Some(ls) => {
                if ls.len() != q {
                    return Err(Error::Validation(format!(
                        "need {q} quotient lifts, got {}",
                        ls.len()
                    )));
                }
                ls.to_vec()
            }
            None => {
                // Per component, complete the RREF pivots by standard vectors.
                let mut assembled = vec![KVec::zero(self.n, f); q];
                for c in 0..f {
                    let pivots: Vec<usize> = w
                        .comp(c)
                        .basis_rows()
                        .iter()
                        .map(|row| row.iter().position(|x| !x.is_zero()).unwrap())
                        .collect();
                    let free: Vec<usize> =
                        (0..self.n).filter(|i| !pivots.contains(i)).collect();
                    for (k, &col) in free.iter().enumerate() {
                        assembled[k].comp_mut(c)[col] = Scalar::one();
                    }
                }
                assembled
            }
        };
        // Square change-of-basis per component: columns = submodule basis
        // then lifts; S⁻¹'s bottom rows project onto quotient coordinates.
        let mut proj = Vec::with_capacity(f);
        let mut lift_cols = Vec::with_capacity(f);
        for c in 0..f {
            let mut rows: Vec<Vec<Scalar>> = w.comp(c).basis_rows();
            for l in &lifts {
                rows.push(l.comp(c).to_vec());
            }
            let s = QMat::from_rows(rows).transpose();
            let s_inv = s.inverse().ok_or_else(|| {
                Error::NotFree("lift images do not complete the submodule to a basis".into())
            })?;
            let p = QMat::from_fn(q, self.n, |i, j| s_inv.get(r + i, j).clone());
            let l = QMat::from_fn(self.n, q, |i, j| lifts[j].comp(c)[i].clone());
            proj.push(p);
            lift_cols.push(l);
        }
        let mut phi_comps = Vec::with_capacity(f);
        let mut n_comps = Vec::with_capacity(f);
        for c in 0..f {
            phi_comps.push(proj[c].mul(self.phi.comp(c)).mul(&lift_cols[(c + 1) % f]));
            n_comps.push(proj[c].mul(self.nmat.comp(c)).mul(&lift_cols[c]));
        }
        let mut per_tau = Vec::with_capacity(self.ctx.degree());
        for tau in 0..self.ctx.degree() {
            let c = self.ctx.k0_index(tau);
            let mut entries = Vec::new();
            for (j, sp) in self.fil.steps(tau) {
                let rows: Vec<Vec<Scalar>> = sp
                    .basis_rows()
                    .into_iter()
                    .map(|v| proj[c].mul_vec(&v))
                    .collect();
                entries.push((*j, Subspace::from_rows(q, rows)));
            }
            per_tau.push(entries);
        }
        Ok((
            PhiNModule::new(
                self.ctx.clone(),
                q,
                KMat::from_comps(phi_comps),
                KMat::from_comps(n_comps),
                Filtration::from_semantic(per_tau),
            ),
            lifts,
        ))
    }

    /// The linear action of `φ^f` on the identity embedding component.
    pub fn phi_f_identity(&self) -> QMat {
        let f = self.ctx.f();
        let mut m = self.phi.comp(0).clone();
        for c in 1..f {
            m = m.mul(self.phi.comp(c));
        }
        m
    }

    /// Newton number: `v_p` of the determinant of `φ^f` on the identity
    /// component.
    pub fn newton(&self) -> Scalar {
        if self.n == 0 {
            return Scalar::zero();
        }
        let det = self.phi_f_identity().det();
        match self.ctx.valuation(&det) {
            Valuation::Finite(v) => rat_int(v),
            Valuation::Infinite => panic!("phi is singular"),
        }
    }

    /// Hodge number: filtration jumps summed with multiplicity over all `ef`
    /// embeddings, divided by `ef`.
    pub fn hodge(&self) -> Scalar {
        let mut total = Scalar::zero();
        for tau in 0..self.ctx.degree() {
            for (j, m) in self.fil.jumps(tau) {
                total += rat_int(j) * rat_int(m as i64);
            }
        }
        total / rat_int(self.ctx.degree() as i64)
    }

    /// Hodge–Tate weight multiset at one embedding.
    pub fn weights_at(&self, tau: usize) -> Vec<i64> {
        self.fil.weights(tau)
    }

    /// Newton number of a stable submodule (`v_p` of `det φ^f` restricted to
    /// its identity component).
    pub fn newton_of(&self, w: &Submodule) -> Scalar {
        let r = w.comp(0).dim();
        if r == 0 {
            return Scalar::zero();
        }
        let m0 = self.phi_f_identity();
        let basis = w.comp(0).basis();
        let cols = basis.transpose();
        let mut restricted = QMat::zeros(r, r);
        for k in 0..r {
            let img = m0.mul_vec(basis.row(k));
            let coords = cols.solve(&img).expect("phi^f-stable identity component");
            for (i, x) in coords.into_iter().enumerate() {
                restricted.set(i, k, x);
            }
        }
        match self.ctx.valuation(&restricted.det()) {
            Valuation::Finite(v) => rat_int(v),
            Valuation::Infinite => panic!("phi restricted to submodule is singular"),
        }
    }

    /// Hodge number of a stable submodule under the induced filtration.
    pub fn hodge_of(&self, w: &Submodule) -> Scalar {
        let mut total = Scalar::zero();
        for tau in 0..self.ctx.degree() {
            let c = self.ctx.k0_index(tau);
            let dims: Vec<(i64, usize)> = self
                .fil
                .steps(tau)
                .iter()
                .map(|(j, sp)| (*j, sp.intersect(w.comp(c)).dim()))
                .collect();
            for (k, (j, d)) in dims.iter().enumerate() {
                let next = dims.get(k + 1).map(|(_, d2)| *d2).unwrap_or(0);
                total += rat_int(*j) * rat_int((d - next) as i64);
            }
        }
        total / rat_int(self.ctx.degree() as i64)
    }

    /// All `φ,N`-stable free submodules, enumerated through `φ^f`-eigenvector
    /// subsets of the identity component. Requires `n` distinct rational
    /// eigenvalues.
    pub fn stable_submodules(&self) -> Result<Vec<Submodule>> {
        let eig = self.distinct_eigen_system()?;
        let f = self.ctx.f();
        let inv_comps: Vec<QMat> = (0..f)
            .map(|c| self.phi.comp(c).inverse().expect("invertible phi"))
            .collect();
        let mut out = Vec::new();
        for mask in 0..(1u32 << self.n) {
            let rows: Vec<Vec<Scalar>> = (0..self.n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| eig[i].1.clone())
                .collect();
            let w0 = Subspace::from_rows(self.n, rows);
            let mut comps = vec![w0];
            for c in 0..f - 1 {
                let prev = comps.last().unwrap();
                comps.push(prev.map_by(&inv_comps[c]));
            }
            let w = Submodule::from_comps(comps);
            let n_image = w.map_linear(&self.nmat);
            if w.contains(&n_image) {
                out.push(w);
            }
        }
        Ok(out)
    }

    /// Weak admissibility: Hodge equals Newton globally and Hodge ≤ Newton on
    /// every stable submodule.
    pub fn weak_admissibility(&self) -> Result<AdmissibilityReport> {
        let t_n = self.newton();
        let t_h = self.hodge();
        if t_h != t_n {
            let full = Submodule::full(self.n, self.ctx.f());
            return Ok(AdmissibilityReport {
                admissible: false,
                newton: t_n.clone(),
                hodge: t_h.clone(),
                witness: Some((full, t_h, t_n)),
            });
        }
        for w in self.stable_submodules()? {
            let wh = self.hodge_of(&w);
            let wn = self.newton_of(&w);
            if wh > wn {
                return Ok(AdmissibilityReport {
                    admissible: false,
                    newton: t_n,
                    hodge: t_h,
                    witness: Some((w, wh, wn)),
                });
            }
        }
        Ok(AdmissibilityReport {
            admissible: true,
            newton: t_n,
            hodge: t_h,
            witness: None,
        })
    }

    /// Distinct rational eigenvalues of `φ^f` on the identity component with
    /// their eigenvectors, sorted by eigenvalue.
    pub fn distinct_eigen_system(&self) -> Result<Vec<(Scalar, Vec<Scalar>)>> {
        let m0 = self.phi_f_identity();
        let roots = rational_roots(&m0.char_poly())?;
        if roots.iter().any(|(_, m)| *m > 1) || roots.len() != self.n {
            return Err(Error::EigenvalueDegeneracy(
                "phi^f has repeated eigenvalues on the identity component".into(),
            ));
        }
        let mut out = Vec::with_capacity(self.n);
        for (lambda, _) in roots {
            let shifted = QMat::from_fn(self.n, self.n, |i, j| {
                if i == j {
                    m0.get(i, j) - &lambda
                } else {
                    m0.get(i, j).clone()
                }
            });
            let ker = shifted.null_space();
            debug_assert_eq!(ker.rows(), 1);
            out.push((lambda, ker.row(0).to_vec()));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn ctx(p: u64, e: usize, f: usize) -> FieldContext {
        FieldContext::new(p, e, f).unwrap()
    }

    #[test]
    fn rank1_basics() {
        let c = ctx(3, 1, 2);
        let d = PhiNModule::rank1(c.clone(), &rat_int(4), &[0, 0]).unwrap();
        assert!(d.validate().is_empty());
        // φ² acts by 4 on the identity component.
        assert_eq!(d.phi_f_identity().get(0, 0), &rat_int(4));
        assert!(PhiNModule::rank1(c, &rat_int(0), &[0, 0]).is_err());
    }

    #[test]
    fn rank1_newton_hodge() {
        let c = ctx(3, 1, 1);
        let d = PhiNModule::rank1(c.clone(), &rat_int(3), &[0]).unwrap();
        assert_eq!(d.newton(), rat_int(1));
        assert_eq!(d.hodge(), rat_int(0));
        let u = PhiNModule::unit_object(c);
        assert_eq!(u.newton(), rat_int(0));
        assert_eq!(u.hodge(), rat_int(0));
    }

    #[test]
    fn tensor_of_rank1_is_rank1_of_product() {
        let c = ctx(5, 1, 3);
        let a = PhiNModule::rank1(c.clone(), &rat_int(2), &[1, 0, 2]).unwrap();
        let b = PhiNModule::rank1(c.clone(), &rat(1, 5), &[0, 2, -1]).unwrap();
        let t = a.tensor(&b).unwrap();
        let expect = PhiNModule::rank1(c, &rat(2, 5), &[1, 2, 1]).unwrap();
        assert_eq!(t, expect);
    }

    #[test]
    fn dual_of_rank1() {
        let c = ctx(3, 2, 1);
        let d = PhiNModule::rank1(c.clone(), &rat_int(9), &[2, -1]).unwrap();
        let dd = d.dual();
        let expect = PhiNModule::rank1(c, &rat(1, 9), &[-2, 1]).unwrap();
        assert_eq!(dd, expect);
        assert_eq!(dd.newton(), -d.newton());
        assert_eq!(dd.hodge(), -d.hodge());
        assert_eq!(dd.dual(), d);
    }

    #[test]
    fn rank1_admissibility() {
        let c = ctx(3, 1, 1);
        let good = PhiNModule::rank1(c.clone(), &rat_int(3), &[1]).unwrap();
        assert!(good.weak_admissibility().unwrap().admissible);
        let bad = PhiNModule::rank1(c, &rat_int(3), &[0]).unwrap();
        let rep = bad.weak_admissibility().unwrap();
        assert!(!rep.admissible);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn quotient_by_everything_has_rank_zero() {
        let c = ctx(3, 1, 1);
        let d = PhiNModule::rank1(c, &rat_int(3), &[1]).unwrap();
        let basis = vec![KVec::unit(1, 1, 0)];
        let (q, _) = d.quotient(&basis, None).unwrap();
        assert_eq!(q.n, 0);
        assert!(q.validate().is_empty());
    }
}
