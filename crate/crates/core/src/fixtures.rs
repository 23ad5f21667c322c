//! Built-in reference modules exercised throughout the test and report
//! surfaces.

use num_traits::One;

use crate::field::FieldContext;
use crate::linalg::{QMat, Subspace};
use crate::module::{Filtration, PhiNModule};
use crate::scalar::{rat_int, Scalar};
use crate::semilinear::{KMat, KVec};
use crate::{Error, Result};

/// Rank-3 module with `φ^f`-eigenvalues `(p^{−f}, 1, 1)`, monodromy
/// `N f₂ = −f₁`, `N f₃ = f₁`, and the two-dimensional middle filtration step
/// spanned by `f₂ − ℓ_τ f₁` and `f₃ + ℓ_τ f₁`.
pub fn rank3_fixture(ctx: &FieldContext, l: &[Scalar]) -> Result<PhiNModule> {
    if l.len() != ctx.degree() {
        return Err(Error::Validation(format!(
            "need {} twist coordinates, got {}",
            ctx.degree(),
            l.len()
        )));
    }
    let f = ctx.f();
    let p_inv = ctx.p_scalar().recip();
    let mut phi0 = QMat::identity(3);
    phi0.set(0, 0, p_inv);
    let phi = KMat::constant(phi0, f);
    let mut n0 = QMat::zeros(3, 3);
    n0.set(0, 1, rat_int(-1));
    n0.set(0, 2, rat_int(1));
    let nmat = KMat::constant(n0, f);
    let per_tau = l
        .iter()
        .map(|lt| {
            let mid = Subspace::from_rows(3, vec![
                vec![-lt.clone(), Scalar::one(), rat_int(0)],
                vec![lt.clone(), rat_int(0), Scalar::one()],
            ]);
            vec![(-1, Subspace::full(3)), (0, mid)]
        })
        .collect();
    Ok(PhiNModule::new(
        ctx.clone(),
        3,
        phi,
        nmat,
        Filtration::new(per_tau),
    ))
}

/// The two complete stable flags of the rank-3 fixture, as step bases
/// `F₁ ⊂ F₂`: first `(f₁, f₂, f₃)`, then `(f₁, f₃, f₂)`.
pub fn rank3_flags(ctx: &FieldContext) -> (Vec<Vec<KVec>>, Vec<Vec<KVec>>) {
    let f = ctx.f();
    let e = |i| KVec::unit(3, f, i);
    let first = vec![vec![e(0)], vec![e(0), e(1)]];
    let second = vec![vec![e(0)], vec![e(0), e(2)]];
    (first, second)
}

/// Tensor construction data: a rank-`n` base module whose first and last
/// graded pieces are linked by monodromy, plus the closed forms of the rank-4
/// tensor module and its rank-3 submodule.
#[derive(Clone, Debug)]
pub struct TensorFixture {
    pub base: PhiNModule,
    /// Step bases `F₁ ⊂ … ⊂ F_{n−1}` of the standard flag on `base`.
    pub flag: Vec<Vec<KVec>>,
    pub l: Vec<Scalar>,
    /// Closed form of the rank-4 tensor, basis
    /// `(e*₁⊗e₁, e*₁⊗eₙ, e*ₙ⊗e₁, e*ₙ⊗eₙ)`.
    pub closed_d: PhiNModule,
    /// Closed form of the rank-3 submodule, basis
    /// `(e*₁⊗e₁, e*ₙ⊗e₁, e*ₙ⊗eₙ)`.
    pub closed_d0: PhiNModule,
}

/// Builds the tensor fixture. Weight slots are per-embedding: `k_low` for the
/// first graded piece, `k_mid` for the middle block, `k_high` for the last;
/// `k_low < k_mid < k_high` is required (the middle slot is ignored at rank
/// 2). `alpha` twists the Frobenius on the first basis vector; middle slots
/// get deterministic distinct units.
pub fn tensor_fixture(
    ctx: &FieldContext,
    n: usize,
    l: &[Scalar],
    k_low: &[i64],
    k_mid: &[i64],
    k_high: &[i64],
    alpha: &Scalar,
) -> Result<TensorFixture> {
    let ef = ctx.degree();
    if n < 2 {
        return Err(Error::Validation("tensor fixture needs rank at least 2".into()));
    }
    if l.len() != ef || k_low.len() != ef || k_mid.len() != ef || k_high.len() != ef {
        return Err(Error::Validation(
            "twist and weight slots must have one entry per embedding".into(),
        ));
    }
    if alpha.is_zero() {
        return Err(Error::ZeroFrobenius);
    }
    for tau in 0..ef {
        let ok = if n == 2 {
            k_low[tau] < k_high[tau]
        } else {
            k_low[tau] < k_mid[tau] && k_mid[tau] < k_high[tau]
        };
        if !ok {
            return Err(Error::Validation(
                "weight slots must increase strictly from low to high".into(),
            ));
        }
    }
    let f = ctx.f();
    let p = ctx.p_scalar();

    // Diagonal Frobenius with the last slot exactly p times the first, so the
    // single monodromy arrow e_n -> e_1 satisfies the commutation relation.
    let pf = rat_int((ctx.p() as i128).pow(f as u32) as i64);
    let mut phi_comps = Vec::with_capacity(f);
    for c in 0..f {
        let mut m = QMat::identity(n);
        let first = if c == 0 { alpha.clone() } else { Scalar::one() };
        m.set(0, 0, first.clone());
        m.set(n - 1, n - 1, &p * &first);
        let mut scale = 2i64;
        for i in 1..n - 1 {
            // Middle eigenvalues: distinct small multiples of alpha, away
            // from the linked pair.
            while rat_int(scale) == pf {
                scale += 1;
            }
            m.set(i, i, if c == 0 { alpha * rat_int(scale) } else { Scalar::one() });
            scale += 1;
        }
        phi_comps.push(m);
    }
    let phi = KMat::from_comps(phi_comps);
    let mut n0 = QMat::zeros(n, n);
    n0.set(0, n - 1, Scalar::one());
    let nmat = KMat::constant(n0, f);

    let mut per_tau = Vec::with_capacity(ef);
    for tau in 0..ef {
        let mut line = vec![Scalar::zero(); n];
        line[0] = l[tau].clone();
        line[n - 1] = Scalar::one();
        let mut entries = vec![(k_low[tau], Subspace::full(n))];
        if n > 2 {
            let mut rows = vec![line.clone()];
            for i in 1..n - 1 {
                let mut v = vec![Scalar::zero(); n];
                v[i] = Scalar::one();
                rows.push(v);
            }
            entries.push((k_mid[tau], Subspace::from_rows(n, rows)));
        }
        entries.push((k_high[tau], Subspace::from_rows(n, vec![line])));
        per_tau.push(entries);
    }
    let base = PhiNModule::new(ctx.clone(), n, phi, nmat, Filtration::new(per_tau));

    let flag = (1..n)
        .map(|i| (0..i).map(|k| KVec::unit(n, f, k)).collect())
        .collect();

    // Closed form of the rank-4 tensor.
    let mut d_phi_comps = Vec::with_capacity(f);
    for _ in 0..f {
        let mut m = QMat::identity(4);
        m.set(1, 1, p.clone());
        m.set(2, 2, p.recip());
        d_phi_comps.push(m);
    }
    let d_phi = KMat::from_comps(d_phi_comps);
    let mut dn = QMat::zeros(4, 4);
    dn.set(2, 0, rat_int(-1));
    dn.set(0, 1, Scalar::one());
    dn.set(3, 1, rat_int(-1));
    dn.set(2, 3, Scalar::one());
    let d_nmat = KMat::constant(dn, f);
    let mut d_per_tau = Vec::with_capacity(ef);
    let mut d0_per_tau = Vec::with_capacity(ef);
    for tau in 0..ef {
        let lt = &l[tau];
        let span = k_high[tau] - k_low[tau];
        let fil0 = Subspace::from_rows(4, vec![
            vec![lt.clone(), Scalar::one(), Scalar::zero(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero(), lt.clone(), Scalar::one()],
            vec![Scalar::one(), Scalar::zero(), -lt.clone(), Scalar::zero()],
        ]);
        let top = Subspace::from_rows(4, vec![vec![
            lt.clone(),
            Scalar::one(),
            -(lt * lt),
            -lt.clone(),
        ]]);
        d_per_tau.push(vec![(-span, Subspace::full(4)), (0, fil0), (span, top)]);
        let fil0_sub = Subspace::from_rows(3, vec![
            vec![Scalar::zero(), lt.clone(), Scalar::one()],
            vec![Scalar::one(), -lt.clone(), Scalar::zero()],
        ]);
        d0_per_tau.push(vec![(-span, Subspace::full(3)), (0, fil0_sub)]);
    }
    let closed_d = PhiNModule::new(
        ctx.clone(),
        4,
        d_phi,
        d_nmat,
        Filtration::new(d_per_tau),
    );

    let mut d0_phi_comps = Vec::with_capacity(f);
    for _ in 0..f {
        let mut m = QMat::identity(3);
        m.set(1, 1, p.recip());
        d0_phi_comps.push(m);
    }
    let mut d0n = QMat::zeros(3, 3);
    d0n.set(1, 0, rat_int(-1));
    d0n.set(1, 2, Scalar::one());
    let closed_d0 = PhiNModule::new(
        ctx.clone(),
        3,
        KMat::from_comps(d0_phi_comps),
        KMat::constant(d0n, f),
        Filtration::new(d0_per_tau),
    );

    Ok(TensorFixture {
        base,
        flag,
        l: l.to_vec(),
        closed_d,
        closed_d0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn rank3_fixture_is_valid() {
        let ctx = FieldContext::new(3, 1, 2).unwrap();
        let l = vec![rat(1, 2), rat(-2, 3)];
        let d = rank3_fixture(&ctx, &l).unwrap();
        assert!(d.validate().is_empty());
        assert_eq!(d.newton(), rat_int(-2));
        assert_eq!(d.hodge(), rat_int(-1));
        // φ^f eigenvalues on the identity component: p^{-f}, 1, 1.
        let m0 = d.phi_f_identity();
        assert_eq!(m0.get(0, 0), &rat(1, 9));
        assert_eq!(m0.get(1, 1), &rat_int(1));
    }

    #[test]
    fn rank3_fixture_zero_twist_filtration() {
        let ctx = FieldContext::new(5, 1, 1).unwrap();
        let d = rank3_fixture(&ctx, &[rat_int(0)]).unwrap();
        let fil0 = d.fil.at(0, 0);
        assert!(fil0.contains_vec(&[rat_int(0), rat_int(1), rat_int(0)]));
        assert!(fil0.contains_vec(&[rat_int(0), rat_int(0), rat_int(1)]));
        assert_eq!(fil0.dim(), 2);
    }

    #[test]
    fn tensor_fixture_closed_forms_are_valid() {
        let ctx = FieldContext::new(3, 2, 1).unwrap();
        let l = vec![rat(1, 2), rat_int(2)];
        let fx = tensor_fixture(&ctx, 3, &l, &[-1, 0], &[0, 1], &[1, 2], &rat_int(1)).unwrap();
        assert!(fx.base.validate().is_empty());
        assert!(fx.closed_d.validate().is_empty());
        assert!(fx.closed_d0.validate().is_empty());
        assert_eq!(fx.base.weights_at(0), vec![-1, 0, 1]);
        assert_eq!(fx.closed_d.weights_at(0), vec![-2, 0, 0, 2]);
        assert_eq!(fx.closed_d0.weights_at(1), vec![-2, 0, 0]);
    }
}
