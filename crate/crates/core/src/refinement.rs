//! Complete stable flags on a filtered module: graded eigenvalue and weight
//! data, the graded monodromy operator with its marked indices, the direct
//! intersection criterion, dual refinements, and parameter sketches.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::module::PhiNModule;
use crate::scalar::Scalar;
use crate::semilinear::{KVec, SemiScalar, Submodule};
use crate::{Error, Result};

/// A complete `φ,N`-stable flag `F₀ ⊂ … ⊂ Fₙ` with rank-one graded pieces,
/// carrying canonical adapted generators (`gᵢ` spans `Fᵢ` over `Fᵢ₋₁`, with
/// leading coordinate 1 per component).
#[derive(Clone, Debug)]
pub struct Refinement {
    module: PhiNModule,
    steps: Vec<Submodule>,
    gens: Vec<KVec>,
}

/// Eigenvalue and weight orderings fixed by a refinement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedData {
    /// `αᵢ`: the scalar by which `φ^f` acts on the i-th graded piece.
    pub alphas: Vec<Scalar>,
    /// `k⃗ᵢ`: per-embedding weight of the i-th graded piece (`[i][tau]`).
    pub weights: Vec<Vec<i64>>,
}

/// Graded monodromy: per source index `i` (1-based, slot `i−1`), either zero
/// or the target index `j` with the ring scalar of the map on generators.
#[derive(Clone, Debug)]
pub struct NfOperator {
    pub maps: Vec<Option<(usize, SemiScalar)>>,
}

/// Marked indices with the two inverse bijections between sources and
/// targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedMap {
    pub marked: Vec<usize>,
    pub t_of: BTreeMap<usize, usize>,
    pub s_of: BTreeMap<usize, usize>,
}

/// Character sketch emitted for one graded piece.
#[derive(Clone, Debug)]
pub struct ParameterSketch {
    pub alpha: Scalar,
    pub weights: Vec<i64>,
    pub value_at_pi: Scalar,
    pub smooth_tag: String,
}

impl Refinement {
    /// Validates step bases `F₁ … F_{n−1}` (each of length `i`) against the
    /// module and assembles the refinement.
    pub fn new(module: &PhiNModule, flag: &[Vec<KVec>]) -> Result<Refinement> {
        let n = module.n;
        let f = module.ctx.f();
        if flag.len() + 1 != n {
            return Err(Error::NotAFlag(format!(
                "need {} proper steps for rank {n}, got {}",
                n.saturating_sub(1),
                flag.len()
            )));
        }
        let mut steps = vec![Submodule::zero(n, f)];
        for (idx, basis) in flag.iter().enumerate() {
            let i = idx + 1;
            if basis.len() != i {
                return Err(Error::WrongGradedRank(format!(
                    "step {i} must have a basis of {i} vectors, got {}",
                    basis.len()
                )));
            }
            let w = module
                .submodule_from_basis(basis)
                .map_err(|e| match e {
                    Error::NotFree(m) => Error::WrongGradedRank(m),
                    other => other,
                })?;
            if !w.contains(steps.last().unwrap()) {
                return Err(Error::NotAFlag(format!("step {i} does not contain step {}", i - 1)));
            }
            steps.push(w);
        }
        steps.push(Submodule::full(n, f));
        let gens = adapted_generators(&steps, n, f)?;
        Ok(Refinement {
            module: module.clone(),
            steps,
            gens,
        })
    }

    /// The coordinate flag, when it is stable.
    pub fn standard(module: &PhiNModule) -> Result<Refinement> {
        let f = module.ctx.f();
        let flag: Vec<Vec<KVec>> = (1..module.n)
            .map(|i| (0..i).map(|k| KVec::unit(module.n, f, k)).collect())
            .collect();
        Refinement::new(module, &flag)
    }

    pub fn module(&self) -> &PhiNModule {
        &self.module
    }

    pub fn n(&self) -> usize {
        self.module.n
    }

    /// `Fᵢ` for `i = 0..=n`.
    pub fn step(&self, i: usize) -> &Submodule {
        &self.steps[i]
    }

    /// Adapted generator of the i-th graded piece (1-based).
    pub fn generator(&self, i: usize) -> &KVec {
        &self.gens[i - 1]
    }

    /// Flag step bases `F₁ … F_{n−1}` in adapted-generator form.
    pub fn step_bases(&self) -> Vec<Vec<KVec>> {
        (1..self.n())
            .map(|i| self.gens[..i].to_vec())
            .collect()
    }

    /// Ring scalar of the single-step Frobenius on the i-th graded piece:
    /// `φ(gᵢ) ≡ βᵢ·gᵢ mod Fᵢ₋₁`.
    pub fn phi_scalar(&self, i: usize) -> Result<SemiScalar> {
        let g = self.generator(i);
        let img = self.module.phi.apply(&g.shift());
        self.graded_coefficient(&img, i)
    }

    /// Eigenvalues of `φ^f` and weight vectors on the graded pieces.
    pub fn graded_data(&self) -> Result<GradedData> {
        let n = self.n();
        let f = self.module.ctx.f();
        let mut alphas = Vec::with_capacity(n);
        for i in 1..=n {
            let mut img = self.generator(i).clone();
            for _ in 0..f {
                img = self.module.phi.apply(&img.shift());
            }
            let coeff = self.graded_coefficient(&img, i)?;
            let a0 = coeff.comp(0).clone();
            if coeff.comps().iter().any(|x| x != &a0) {
                return Err(Error::Validation(
                    "graded Frobenius eigenvalue differs across embedding components".into(),
                ));
            }
            alphas.push(a0);
        }
        let mut weights = Vec::with_capacity(n);
        for i in 1..=n {
            let mut per_tau = Vec::with_capacity(self.module.ctx.degree());
            for tau in 0..self.module.ctx.degree() {
                per_tau.push(self.graded_weight(i, tau)?);
            }
            weights.push(per_tau);
        }
        Ok(GradedData { alphas, weights })
    }

    /// Weight of the i-th graded piece at one embedding: the largest jump
    /// whose filtration step still meets `Fᵢ` outside `Fᵢ₋₁`.
    fn graded_weight(&self, i: usize, tau: usize) -> Result<i64> {
        let c = self.module.ctx.k0_index(tau);
        let fi = self.steps[i].comp(c);
        let fim1 = self.steps[i - 1].comp(c);
        let mut best = None;
        for (j, sp) in self.module.fil.steps(tau) {
            let inter = sp.intersect(fi);
            if !fim1.contains(&inter) {
                best = Some(*j);
            }
        }
        best.ok_or_else(|| {
            Error::Validation(format!("graded piece {i} meets no filtration step at tau_{tau}"))
        })
    }

    /// The graded monodromy operator.
    pub fn nf(&self) -> Result<NfOperator> {
        let n = self.n();
        let n_images: Vec<Submodule> = self
            .steps
            .iter()
            .map(|fi| fi.map_linear(&self.module.nmat))
            .collect();
        let mut maps = Vec::with_capacity(n);
        for i in 1..=n {
            if n_images[i] == n_images[i - 1] {
                maps.push(None);
                continue;
            }
            let mut target = None;
            for j in 1..=n {
                if n_images[i - 1].sum(&self.steps[j]).contains(&n_images[i]) {
                    target = Some(j);
                    break;
                }
            }
            let j = target.ok_or_else(|| {
                Error::Validation(format!("graded monodromy of piece {i} has no target"))
            })?;
            // Well-definedness guard from the stability of the flag.
            if !self.steps[j - 1].contains(&n_images[i - 1].intersect(&self.steps[j])) {
                return Err(Error::Validation(format!(
                    "monodromy image of step {} meets step {j} outside step {}",
                    i - 1,
                    j - 1
                )));
            }
            let scalar = self.nf_scalar(i, j, &n_images[i - 1])?;
            if !scalar.is_unit() {
                return Err(Error::Validation(format!(
                    "graded monodromy {i} -> {j} is a proper nonzero map"
                )));
            }
            maps.push(Some((j, scalar)));
        }
        Ok(NfOperator { maps })
    }

    /// Scalar of the graded map on generators: `N(gᵢ) ≡ ν·gⱼ` modulo
    /// `N(Fᵢ₋₁) + Fⱼ₋₁`.
    fn nf_scalar(&self, i: usize, j: usize, n_prev: &Submodule) -> Result<SemiScalar> {
        let f = self.module.ctx.f();
        let g = self.generator(i);
        let img = self.module.nmat.apply(g);
        let gj = self.generator(j);
        let mut comps = Vec::with_capacity(f);
        for c in 0..f {
            // Solve img = ν·g_j + (elt of N(F_{i−1})) + (elt of F_{j−1}).
            let mut rows = vec![gj.comp(c).to_vec()];
            rows.extend(n_prev.comp(c).basis_rows());
            rows.extend(self.steps[j - 1].comp(c).basis_rows());
            let mat = crate::linalg::QMat::from_rows(rows).transpose();
            let sol = mat.solve(img.comp(c)).ok_or_else(|| {
                Error::Validation(format!("graded monodromy {i} -> {j} is inconsistent"))
            })?;
            comps.push(sol[0].clone());
        }
        Ok(SemiScalar::new(comps))
    }

    /// Marked indices, with `t_of` mapping a marked target to its source.
    pub fn marked(&self) -> Result<MarkedMap> {
        let nf = self.nf()?;
        let mut t_of = BTreeMap::new();
        let mut s_of = BTreeMap::new();
        for (slot, entry) in nf.maps.iter().enumerate() {
            let i = slot + 1;
            if let Some((j, _)) = entry {
                if t_of.insert(*j, i).is_some() {
                    return Err(Error::Validation(format!(
                        "index {j} is the graded monodromy target of two sources"
                    )));
                }
                s_of.insert(i, *j);
            }
        }
        Ok(MarkedMap {
            marked: t_of.keys().copied().collect(),
            t_of,
            s_of,
        })
    }

    /// Direct intersection-dimension criterion for `s` marked with target
    /// pair `(s, t)`: `N F_{t−1} ∩ F_s = N F_{t−1} ∩ F_{s−1}` and
    /// `N F_t ∩ F_s ⊋ N F_t ∩ F_{s−1}`.
    pub fn marked_criterion(&self, s: usize, t: usize) -> Result<bool> {
        let n = self.n();
        if s == 0 || t == 0 || s > n || t > n || s >= t {
            return Err(Error::IndexOutOfRange(format!("(s, t) = ({s}, {t})")));
        }
        let nf_tm1 = self.steps[t - 1].map_linear(&self.module.nmat);
        let nf_t = self.steps[t].map_linear(&self.module.nmat);
        let a1 = nf_tm1.intersect(&self.steps[s]);
        let a2 = nf_tm1.intersect(&self.steps[s - 1]);
        let b1 = nf_t.intersect(&self.steps[s]);
        let b2 = nf_t.intersect(&self.steps[s - 1]);
        Ok(a1 == a2 && b1 != b2)
    }

    /// Dual refinement: the annihilator flag on the dual module.
    pub fn dual(&self) -> Result<(PhiNModule, Refinement)> {
        let n = self.n();
        let dual_module = self.module.dual();
        let flag: Vec<Vec<KVec>> = (1..n)
            .map(|i| self.steps[n - i].annihilator().kvec_basis())
            .collect();
        let r = Refinement::new(&dual_module, &flag)?;
        Ok((dual_module, r))
    }

    /// Ordered `(αᵢ, k⃗ᵢ)` pairs with character sketches; the uniformizer
    /// value is filled from `αᵢ` and the smooth twist stays an opaque tag.
    pub fn parameters(&self) -> Result<Vec<ParameterSketch>> {
        let gd = self.graded_data()?;
        Ok((0..self.n())
            .map(|idx| ParameterSketch {
                alpha: gd.alphas[idx].clone(),
                weights: gd.weights[idx].clone(),
                value_at_pi: gd.alphas[idx].clone(),
                smooth_tag: format!("smooth_{}", idx + 1),
            })
            .collect())
    }

    /// The subquotient `F_t/F_{s−1}` in adapted coordinates: its standard
    /// flag is the induced refinement.
    pub fn marked_subquotient(&self, s: usize, t: usize) -> Result<PhiNModule> {
        let n = self.n();
        if s == 0 || t == 0 || s > n || t > n || s > t {
            return Err(Error::IndexOutOfRange(format!("(s, t) = ({s}, {t})")));
        }
        let sub = self.module.sub(&self.gens[..t])?;
        let f = self.module.ctx.f();
        let basis: Vec<KVec> = (0..s - 1).map(|k| KVec::unit(t, f, k)).collect();
        let lifts: Vec<KVec> = (s - 1..t).map(|k| KVec::unit(t, f, k)).collect();
        let (q, _) = sub.quotient(&basis, Some(&lifts))?;
        Ok(q)
    }

    /// Coefficient of `v` on the generator of the i-th graded piece, solved
    /// modulo `Fᵢ₋₁` per component; fails when `v ∉ Fᵢ`.
    fn graded_coefficient(&self, v: &KVec, i: usize) -> Result<SemiScalar> {
        let f = self.module.ctx.f();
        let g = self.generator(i);
        let mut comps = Vec::with_capacity(f);
        for c in 0..f {
            let mut rows = vec![g.comp(c).to_vec()];
            rows.extend(self.steps[i - 1].comp(c).basis_rows());
            let mat = crate::linalg::QMat::from_rows(rows).transpose();
            let sol = mat.solve(v.comp(c)).ok_or_else(|| {
                Error::Validation(format!("vector does not lie in flag step {i}"))
            })?;
            comps.push(sol[0].clone());
        }
        Ok(SemiScalar::new(comps))
    }
}

/// Deterministic adapted generators: per component, the first reduced basis
/// row of `Fᵢ` outside `Fᵢ₋₁`.
fn adapted_generators(steps: &[Submodule], n: usize, f: usize) -> Result<Vec<KVec>> {
    let mut gens = Vec::with_capacity(n);
    for i in 1..steps.len() {
        let mut comps = Vec::with_capacity(f);
        for c in 0..f {
            let prev = steps[i - 1].comp(c);
            let row = steps[i]
                .comp(c)
                .basis_rows()
                .into_iter()
                .find(|r| !prev.contains_vec(r))
                .ok_or_else(|| {
                    Error::NotAFlag(format!("step {i} does not grow at component {c}"))
                })?;
            comps.push(row);
        }
        gens.push(KVec::from_comps(comps));
    }
    Ok(gens)
}

impl Submodule {
    /// Assembles one basis vector per reduced row, componentwise. Requires
    /// freeness.
    pub fn kvec_basis(&self) -> Vec<KVec> {
        let r = self.rank().expect("free submodule");
        (0..r)
            .map(|k| {
                KVec::from_comps(
                    (0..self.f())
                        .map(|c| self.comp(c).basis_rows()[k].clone())
                        .collect(),
                )
            })
            .collect()
    }
}

/// All complete stable flags, ordered lexicographically by their eigenvalue
/// sequence. Requires distinct rational `φ^f`-eigenvalues.
pub fn enumerate_refinements(module: &PhiNModule) -> Result<Vec<Refinement>> {
    let eig = module.distinct_eigen_system()?;
    let n = module.n;
    let f = module.ctx.f();
    let inv_comps: Vec<crate::linalg::QMat> = (0..f)
        .map(|c| module.phi.comp(c).inverse().expect("invertible phi"))
        .collect();
    let mut out: Vec<(Vec<Scalar>, Refinement)> = Vec::new();
    for perm in permutations(n) {
        let mut flag_bases = Vec::with_capacity(n.saturating_sub(1));
        let mut ok = true;
        for i in 1..n {
            let rows: Vec<Vec<Scalar>> =
                perm[..i].iter().map(|&k| eig[k].1.clone()).collect();
            let w0 = crate::linalg::Subspace::from_rows(n, rows);
            let mut comps = vec![w0];
            for c in 0..f - 1 {
                comps.push(comps[c].map_by(&inv_comps[c]));
            }
            let w = Submodule::from_comps(comps);
            if !w.contains(&w.map_linear(&module.nmat)) {
                ok = false;
                break;
            }
            flag_bases.push(w.kvec_basis());
        }
        if !ok {
            continue;
        }
        let r = Refinement::new(module, &flag_bases)?;
        let key: Vec<Scalar> = perm.iter().map(|&k| eig[k].0.clone()).collect();
        out.push((key, r));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, r)| r).collect())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

/// Exact graded duality identity `⟨N_ǧ x, y⟩ + ⟨x, N_g y⟩ = 0` between a
/// refinement and its dual, over all pairs of graded generators. The graded
/// pairing couples index `i` on the dual side with `n+1−i` on the primal
/// side and vanishes elsewhere.
pub fn graded_duality_check(r: &Refinement, dual_r: &Refinement) -> Result<bool> {
    let n = r.n();
    let nf = r.nf()?;
    let nf_dual = dual_r.nf()?;
    let f = r.module().ctx.f();
    let pair = |x: &KVec, y: &KVec| -> SemiScalar {
        let mut comps = Vec::with_capacity(f);
        for c in 0..f {
            let mut acc = Scalar::zero();
            for k in 0..x.n() {
                acc += &x.comp(c)[k] * &y.comp(c)[k];
            }
            comps.push(acc);
        }
        SemiScalar::new(comps)
    };
    for i in 1..=n {
        for k in 1..=n {
            let term1 = match &nf_dual.maps[i - 1] {
                Some((jd, nud)) if k == n + 1 - jd => {
                    nud.mul(&pair(dual_r.generator(*jd), r.generator(k)))
                }
                _ => SemiScalar::zero(f),
            };
            let term2 = match &nf.maps[k - 1] {
                Some((j, nu)) if i == n + 1 - j => {
                    nu.mul(&pair(dual_r.generator(i), r.generator(*j)))
                }
                _ => SemiScalar::zero(f),
            };
            if !term1.add(&term2).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;
    use crate::fixtures::{rank3_fixture, rank3_flags};
    use crate::scalar::{rat, rat_int};

    fn fixture(p: u64, e: usize, f: usize) -> (PhiNModule, Refinement, Refinement) {
        let ctx = FieldContext::new(p, e, f).unwrap();
        let l: Vec<Scalar> = (0..ctx.degree()).map(|k| rat(k as i64 + 1, 2)).collect();
        let d = rank3_fixture(&ctx, &l).unwrap();
        let (flag_a, flag_b) = rank3_flags(&ctx);
        let ra = Refinement::new(&d, &flag_a).unwrap();
        let rb = Refinement::new(&d, &flag_b).unwrap();
        (d, ra, rb)
    }

    #[test]
    fn rank3_flag_validation() {
        let (d, ra, _) = fixture(3, 1, 2);
        let gd = ra.graded_data().unwrap();
        assert_eq!(gd.alphas, vec![rat(1, 9), rat_int(1), rat_int(1)]);
        assert_eq!(gd.weights[0], vec![-1, -1]);
        assert_eq!(gd.weights[1], vec![0, 0]);
        assert_eq!(gd.weights[2], vec![0, 0]);
        // ⟨f₂⟩-started flags are not N-stable.
        let f = d.ctx.f();
        let bad = vec![
            vec![KVec::unit(3, f, 1)],
            vec![KVec::unit(3, f, 1), KVec::unit(3, f, 0)],
        ];
        assert!(matches!(
            Refinement::new(&d, &bad),
            Err(Error::NotStable(_))
        ));
    }

    #[test]
    fn rank3_nf_and_marked() {
        let (_, ra, rb) = fixture(3, 1, 1);
        let nf = ra.nf().unwrap();
        assert!(nf.maps[0].is_none());
        assert!(nf.maps[2].is_none());
        let (j, nu) = nf.maps[1].clone().unwrap();
        assert_eq!(j, 1);
        assert_eq!(nu, SemiScalar::constant(rat_int(-1), 1));
        let marked = ra.marked().unwrap();
        assert_eq!(marked.marked, vec![1]);
        assert_eq!(marked.t_of[&1], 2);

        let marked_b = rb.marked().unwrap();
        assert_eq!(marked_b.marked, vec![1]);
        assert_eq!(marked_b.t_of[&1], 2);
    }

    #[test]
    fn rank3_marked_criterion_oracle() {
        let (_, ra, _) = fixture(5, 1, 2);
        assert!(ra.marked_criterion(1, 2).unwrap());
        assert!(!ra.marked_criterion(1, 3).unwrap());
        assert!(!ra.marked_criterion(2, 3).unwrap());
    }

    #[test]
    fn nf_commutes_with_graded_phi() {
        // β_i ν_i = p σ(ν_i) β_j on every marked arrow.
        for (p, e, f) in [(3, 1, 1), (3, 1, 2), (2, 2, 1)] {
            let (d, ra, _) = fixture(p, e, f);
            let nf = ra.nf().unwrap();
            for (slot, entry) in nf.maps.iter().enumerate() {
                if let Some((j, nu)) = entry {
                    let bi = ra.phi_scalar(slot + 1).unwrap();
                    let bj = ra.phi_scalar(*j).unwrap();
                    let lhs = bi.mul(nu);
                    let p_scalar = SemiScalar::constant(d.ctx.p_scalar(), d.ctx.f());
                    let rhs = p_scalar.mul(&nu.shift()).mul(&bj);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn enumerate_on_diagonal_module() {
        use crate::linalg::QMat;
        use crate::module::Filtration;
        use crate::semilinear::KMat;
        let ctx = FieldContext::new(3, 1, 1).unwrap();
        let mut phi0 = QMat::identity(2);
        phi0.set(0, 0, rat_int(2));
        phi0.set(1, 1, rat_int(5));
        let d = PhiNModule::new(
            ctx,
            2,
            KMat::from_comps(vec![phi0]),
            KMat::zeros(2, 2, 1),
            Filtration::new(vec![vec![(0, crate::linalg::Subspace::full(2))]]),
        );
        let refs = enumerate_refinements(&d).unwrap();
        assert_eq!(refs.len(), 2);
        let a0 = refs[0].graded_data().unwrap().alphas;
        let a1 = refs[1].graded_data().unwrap().alphas;
        assert_eq!(a0, vec![rat_int(2), rat_int(5)]);
        assert_eq!(a1, vec![rat_int(5), rat_int(2)]);
    }

    #[test]
    fn rank3_has_degenerate_eigenvalues() {
        let (d, _, _) = fixture(3, 1, 1);
        assert!(matches!(
            enumerate_refinements(&d),
            Err(Error::EigenvalueDegeneracy(_))
        ));
    }

    #[test]
    fn dual_refinement_involution_and_alphas() {
        let (_, ra, _) = fixture(3, 2, 2);
        let gd = ra.graded_data().unwrap();
        let (_, rd) = ra.dual().unwrap();
        let gdd = rd.graded_data().unwrap();
        for i in 1..=3usize {
            assert_eq!(
                gdd.alphas[i - 1],
                gd.alphas[3 - i].recip(),
                "dual alphas reversed and inverted"
            );
        }
        let (_, rdd) = rd.dual().unwrap();
        for i in 0..=3 {
            assert_eq!(rdd.step(i), ra.step(i));
        }
    }

    #[test]
    fn graded_duality_on_rank3() {
        for (p, e, f) in [(3, 1, 1), (3, 2, 1), (2, 1, 2)] {
            let (_, ra, rb) = fixture(p, e, f);
            for r in [ra, rb] {
                let (_, rd) = r.dual().unwrap();
                assert!(graded_duality_check(&r, &rd).unwrap());
                let m = r.marked().unwrap();
                let md = rd.marked().unwrap();
                for (&s, &t) in &m.t_of {
                    let sd = r.n() + 1 - t;
                    assert_eq!(md.t_of.get(&sd), Some(&(r.n() + 1 - s)));
                }
            }
        }
    }
}
