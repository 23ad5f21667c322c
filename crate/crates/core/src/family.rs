//! Characters of `K^×` over dual numbers, their first-order data, and the
//! residual of the derivative relation between Frobenius and weights.

use num_traits::Zero;

use crate::field::FieldContext;
use crate::linalg::QMat;
use crate::pairing::GammaCoefficients;
use crate::scalar::{rat_int, DualScalar, Scalar};
use crate::{Error, Result};

/// Character of `K^×` over the dual numbers, split into a base point and a
/// first-order part, stored by its values at the uniformizer and at `p`
/// together with its weight vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinitesimalCharacter {
    pub base_at_pi: Scalar,
    pub base_at_p: Scalar,
    pub base_weights: Vec<Scalar>,
    pub eps_at_pi: Scalar,
    pub eps_at_p: Scalar,
    pub eps_weights: Vec<Scalar>,
    pub smooth_tag: String,
}

/// Evaluation points a character stores.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalPoint {
    Uniformizer,
    P,
}

impl InfinitesimalCharacter {
    /// Constant character with unit base values and no first-order part.
    pub fn trivial(ctx: &FieldContext) -> Self {
        InfinitesimalCharacter {
            base_at_pi: rat_int(1),
            base_at_p: rat_int(1),
            base_weights: vec![Scalar::zero(); ctx.degree()],
            eps_at_pi: Scalar::zero(),
            eps_at_p: Scalar::zero(),
            eps_weights: vec![Scalar::zero(); ctx.degree()],
            smooth_tag: "trivial".into(),
        }
    }

    /// Structural checks; with `consistency` set, also enforces the
    /// uniformizer-power relations `ε(p) = e·ε(π)` and `δ(p) = δ(π)^e`.
    pub fn validate(&self, ctx: &FieldContext, consistency: bool) -> Vec<String> {
        let mut v = Vec::new();
        if self.base_at_pi.is_zero() || self.base_at_p.is_zero() {
            v.push("character: base values must be units".into());
        }
        if self.base_weights.len() != ctx.degree() || self.eps_weights.len() != ctx.degree() {
            v.push("character: weight vectors must have one entry per embedding".into());
        }
        if consistency {
            let e = rat_int(ctx.e() as i64);
            if self.eps_at_p != &e * &self.eps_at_pi {
                v.push("character: eps(p) != e * eps(pi) in consistency mode".into());
            }
            let mut pow = rat_int(1);
            for _ in 0..ctx.e() {
                pow *= &self.base_at_pi;
            }
            if self.base_at_p != pow {
                v.push("character: base(p) != base(pi)^e in consistency mode".into());
            }
        }
        v
    }

    /// The dual-number value `δ_z(x)·(1 + Z·ε(x))`.
    pub fn value_as_dual(&self, point: EvalPoint) -> DualScalar {
        let (base, eps) = match point {
            EvalPoint::Uniformizer => (&self.base_at_pi, &self.eps_at_pi),
            EvalPoint::P => (&self.base_at_p, &self.eps_at_p),
        };
        DualScalar::new(base.clone(), base * eps)
    }

    /// Logarithmic derivative at `p`: the `Z`-part of `value/base`, which is
    /// exactly `ε(p)`.
    pub fn dlog_at_p(&self) -> Scalar {
        self.eps_at_p.clone()
    }

    /// First-order weight differential `(ε_τ)_τ`.
    pub fn weight_differential(&self) -> Vec<Scalar> {
        self.eps_weights.clone()
    }
}

/// Ordered local parameters of a triangulated family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangulationFamily {
    pub characters: Vec<InfinitesimalCharacter>,
}

impl TriangulationFamily {
    pub fn n(&self) -> usize {
        self.characters.len()
    }
}

/// The residual `(1/ef)·(ε_t(p) − ε_s(p)) + Σ_τ L_τ·(ε_{t,τ} − ε_{s,τ})`;
/// zero on families coming from triangulated deformations that are
/// semistable at the base point.
pub fn cgs_residual(
    fam: &TriangulationFamily,
    s: usize,
    t: usize,
    l: &[Scalar],
    ctx: &FieldContext,
) -> Result<Scalar> {
    let n = fam.n();
    if s == 0 || t == 0 || s > n || t > n {
        return Err(Error::IndexOutOfRange(format!(
            "(s, t) = ({s}, {t}) for a family of {n} characters"
        )));
    }
    if l.len() != ctx.degree() {
        return Err(Error::IndexOutOfRange(format!(
            "invariant vector must have {} entries, got {}",
            ctx.degree(),
            l.len()
        )));
    }
    let cs = &fam.characters[s - 1];
    let ct = &fam.characters[t - 1];
    let mut out = (ct.dlog_at_p() - cs.dlog_at_p()) / rat_int(ctx.degree() as i64);
    for tau in 0..ctx.degree() {
        out += &l[tau] * &(&ct.eps_weights[tau] - &cs.eps_weights[tau]);
    }
    Ok(out)
}

/// Dictionary from first-order character data to projected-cocycle
/// coefficients: `γ₀ = −ε(p)/(ef)` and `γ_τ = ε_τ`.
pub fn gamma_from_epsilon(
    chr: &InfinitesimalCharacter,
    ctx: &FieldContext,
) -> GammaCoefficients {
    GammaCoefficients {
        gamma0: -chr.dlog_at_p() / rat_int(ctx.degree() as i64),
        gamma_tau: chr.weight_differential(),
    }
}

/// Joint report of the coefficient relation and the residual, which are the
/// same linear condition in the `ε`-data.
#[derive(Clone, Debug)]
pub struct DerivationReport {
    pub residual: Scalar,
    pub residual_vanishes: bool,
    pub aux_holds: bool,
    pub consistent: bool,
}

/// Checks, as an exact identity, that the coefficient relation between
/// `γ(δ_t)` and `γ(δ_s)` holds precisely when the residual vanishes.
pub fn derive_residual_report(
    delta_s: &InfinitesimalCharacter,
    delta_t: &InfinitesimalCharacter,
    l: &[Scalar],
    ctx: &FieldContext,
) -> Result<DerivationReport> {
    let fam = TriangulationFamily {
        characters: vec![delta_s.clone(), delta_t.clone()],
    };
    let residual = cgs_residual(&fam, 1, 2, l, ctx)?;
    let g_t = gamma_from_epsilon(delta_t, ctx);
    let g_s = gamma_from_epsilon(delta_s, ctx);
    let aux = crate::pairing::aux_relation(&g_t, &g_s, l)?;
    let vanishes = residual.is_zero();
    Ok(DerivationReport {
        residual,
        residual_vanishes: vanishes,
        aux_holds: aux,
        consistent: aux == vanishes,
    })
}

/// Splits deformation matrices over the dual numbers as `(I + ZU)·A` with
/// `A` the constant term, returning `U` for both inputs.
pub fn deformation_cocycle(
    a_phi: &[Vec<DualScalar>],
    a_gamma: &[Vec<DualScalar>],
) -> Result<(QMat, QMat)> {
    Ok((split_first_order(a_phi)?, split_first_order(a_gamma)?))
}

fn split_first_order(m: &[Vec<DualScalar>]) -> Result<QMat> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Validation("deformation matrix must be square".into()));
    }
    let constant = QMat::from_fn(n, n, |i, j| m[i][j].a.clone());
    let zpart = QMat::from_fn(n, n, |i, j| m[i][j].b.clone());
    let inv = constant.inverse().ok_or(Error::SingularConstantTerm)?;
    Ok(zpart.mul(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn ctx(p: u64, e: usize, f: usize) -> FieldContext {
        FieldContext::new(p, e, f).unwrap()
    }

    fn chr(ctx: &FieldContext, eps_p: Scalar, eps_w: Vec<Scalar>) -> InfinitesimalCharacter {
        InfinitesimalCharacter {
            eps_at_p: eps_p,
            eps_weights: eps_w,
            ..InfinitesimalCharacter::trivial(ctx)
        }
    }

    #[test]
    fn dual_value_and_dlog() {
        let c = ctx(3, 1, 1);
        let mut x = InfinitesimalCharacter::trivial(&c);
        x.eps_at_p = rat_int(3);
        assert_eq!(x.value_as_dual(EvalPoint::P), DualScalar::new(rat_int(1), rat_int(3)));
        // d log recovers eps(p) through the dual inverse: (1/a)·b = ε.
        let v = x.value_as_dual(EvalPoint::P);
        let dlog = &v.invert().unwrap().a * &v.b;
        assert_eq!(dlog, x.dlog_at_p());
        assert_eq!(x.weight_differential(), vec![Scalar::zero()]);
    }

    #[test]
    fn consistency_mode() {
        let c = ctx(3, 2, 1);
        let mut x = InfinitesimalCharacter::trivial(&c);
        x.base_at_pi = rat_int(2);
        x.base_at_p = rat_int(4);
        x.eps_at_pi = rat_int(2);
        x.eps_at_p = rat_int(4);
        assert!(x.validate(&c, true).is_empty());
        assert_eq!(x.dlog_at_p(), rat_int(2) * rat_int(c.e() as i64));
        x.eps_at_p = rat_int(5);
        assert!(!x.validate(&c, true).is_empty());
    }

    #[test]
    fn gamma_dictionary() {
        let c11 = ctx(5, 1, 1);
        let g = gamma_from_epsilon(&chr(&c11, rat_int(2), vec![rat_int(7)]), &c11);
        assert_eq!(g.gamma0, rat_int(-2));
        assert_eq!(g.gamma_tau, vec![rat_int(7)]);

        let c23 = ctx(5, 2, 3);
        let g = gamma_from_epsilon(
            &chr(&c23, rat_int(12), vec![Scalar::zero(); 6]),
            &c23,
        );
        assert_eq!(g.gamma0, rat_int(-2));
        // ef·γ₀ + ε(p) = 0, any (e, f).
        for (e, f) in [(1usize, 1usize), (2, 2), (3, 1), (1, 4)] {
            let c = ctx(3, e, f);
            let x = chr(&c, rat(7, 3), vec![Scalar::zero(); e * f]);
            let g = gamma_from_epsilon(&x, &c);
            assert_eq!(rat_int((e * f) as i64) * g.gamma0 + x.eps_at_p, Scalar::zero());
        }
    }

    #[test]
    fn residual_examples() {
        let c = ctx(3, 2, 2);
        let l: Vec<Scalar> = vec![rat(1, 2), rat_int(-1), rat(2, 3), rat_int(0)];
        let base = InfinitesimalCharacter::trivial(&c);
        let fam = TriangulationFamily {
            characters: vec![base.clone(), base.clone()],
        };
        assert_eq!(cgs_residual(&fam, 1, 2, &l, &c).unwrap(), Scalar::zero());

        // Choose Δε_τ and solve ε_t(p) − ε_s(p) = −ef·Σ L_τ Δε_τ.
        let dw: Vec<Scalar> = vec![rat_int(1), rat_int(2), rat_int(-3), rat(1, 2)];
        let mut dot = Scalar::zero();
        for (a, b) in l.iter().zip(dw.iter()) {
            dot += a * b;
        }
        let target = chr(&c, -rat_int(4) * &dot, dw);
        let fam = TriangulationFamily {
            characters: vec![base.clone(), target.clone()],
        };
        assert_eq!(cgs_residual(&fam, 1, 2, &l, &c).unwrap(), Scalar::zero());

        // Perturbing ε_t(p) by 1 moves the residual by 1/(ef).
        let mut bumped = target;
        bumped.eps_at_p += rat_int(1);
        let fam = TriangulationFamily {
            characters: vec![base, bumped],
        };
        assert_eq!(cgs_residual(&fam, 1, 2, &l, &c).unwrap(), rat(1, 4));
        assert!(cgs_residual(&fam, 0, 2, &l, &c).is_err());
        assert!(cgs_residual(&fam, 1, 3, &l, &c).is_err());
    }

    #[test]
    fn cocycle_split_examples() {
        let id = vec![
            vec![DualScalar::one(), DualScalar::zero()],
            vec![DualScalar::zero(), DualScalar::one()],
        ];
        let (u, _) = deformation_cocycle(&id, &id).unwrap();
        assert_eq!(u, QMat::zeros(2, 2));

        // (I + Z·E₁₂)·I: the split must return E₁₂ exactly.
        let elem = vec![
            vec![DualScalar::one(), DualScalar::new(Scalar::zero(), rat_int(1))],
            vec![DualScalar::zero(), DualScalar::one()],
        ];
        let (u, _) = deformation_cocycle(&elem, &id).unwrap();
        let mut e12 = QMat::zeros(2, 2);
        e12.set(0, 1, rat_int(1));
        assert_eq!(u, e12);

        let singular = vec![
            vec![DualScalar::zero(), DualScalar::zero()],
            vec![DualScalar::zero(), DualScalar::one()],
        ];
        assert!(matches!(
            deformation_cocycle(&singular, &id),
            Err(Error::SingularConstantTerm)
        ));
    }
}
