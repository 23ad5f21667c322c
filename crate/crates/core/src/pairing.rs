//! The explicit reciprocity pairing between rank-one cohomology coordinates,
//! the de Rham criterion, and the auxiliary coefficient relation.

use num_traits::Zero;

use crate::linalg::QMat;
use crate::scalar::{rat_int, Scalar};
use crate::{Error, Result};

/// Class on the unramified/weight side, in the basis `{ψ₀, ψ_τ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnramifiedClass {
    pub a0: Scalar,
    pub a_tau: Vec<Scalar>,
}

/// Class on the Kummer side: the `[(p)]`-coefficient and an embedding-indexed
/// exponential argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerClass {
    pub b0: Scalar,
    pub b: Vec<Scalar>,
}

/// Gamma coefficients of one projected cocycle: the `ψ₀`-coordinate and the
/// per-embedding `ψ_τ`-coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaCoefficients {
    pub gamma0: Scalar,
    pub gamma_tau: Vec<Scalar>,
}

/// Cup product in the normalization where `ψ₀ ∪ [(p)]` is the unit:
/// `a₀b₀ − Σ_τ a_τ b_τ` (the trace of the componentwise product).
pub fn cup_product(x: &UnramifiedClass, y: &KummerClass) -> Result<Scalar> {
    if x.a_tau.len() != y.b.len() {
        return Err(Error::Validation(
            "pairing classes live over different embedding sets".into(),
        ));
    }
    let mut trace = Scalar::zero();
    for (a, b) in x.a_tau.iter().zip(y.b.iter()) {
        trace += a * b;
    }
    Ok(&x.a0 * &y.b0 - trace)
}

/// A class is de Rham exactly when every `ψ_τ`-coordinate vanishes.
pub fn is_de_rham(x: &UnramifiedClass) -> bool {
    x.a_tau.iter().all(|a| a.is_zero())
}

/// The displayed coefficient relation:
/// `γ_{2,0} − γ_{3,0} = Σ_τ L_τ (γ_{2,τ} − γ_{3,τ})`, exactly.
pub fn aux_relation(g2: &GammaCoefficients, g3: &GammaCoefficients, l: &[Scalar]) -> Result<bool> {
    if g2.gamma_tau.len() != l.len() || g3.gamma_tau.len() != l.len() {
        return Err(Error::Validation(
            "gamma coefficients and invariant vector have different lengths".into(),
        ));
    }
    let lhs = &g2.gamma0 - &g3.gamma0;
    let mut rhs = Scalar::zero();
    for (lt, (a, b)) in l.iter().zip(g2.gamma_tau.iter().zip(g3.gamma_tau.iter())) {
        rhs += lt * &(a - b);
    }
    Ok(lhs == rhs)
}

/// Gram matrix of the basis pairings: `ψ₀` against `[(p)]`, then `ψ_τ`
/// against `exp(e_τ)`. Diagonal `(1, −1, …, −1)`.
pub fn basis_pairing_matrix(ef: usize) -> QMat {
    QMat::from_fn(ef + 1, ef + 1, |i, j| {
        if i != j {
            Scalar::zero()
        } else if i == 0 {
            rat_int(1)
        } else {
            rat_int(-1)
        }
    })
}

/// Dimension of the left kernel of the pairing (classes pairing to zero with
/// every Kummer basis class). Zero means non-degenerate.
pub fn pairing_kernel_dim(ef: usize) -> usize {
    basis_pairing_matrix(ef).null_space().rows()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn unram(a0: i64, a: Vec<i64>) -> UnramifiedClass {
        UnramifiedClass {
            a0: rat_int(a0),
            a_tau: a.into_iter().map(rat_int).collect(),
        }
    }

    fn kummer(b0: i64, b: Vec<i64>) -> KummerClass {
        KummerClass {
            b0: rat_int(b0),
            b: b.into_iter().map(rat_int).collect(),
        }
    }

    #[test]
    fn basis_pairings() {
        let ef = 3;
        assert_eq!(
            cup_product(&unram(1, vec![0; ef]), &kummer(1, vec![0; ef])).unwrap(),
            rat_int(1)
        );
        assert_eq!(
            cup_product(&unram(1, vec![0; ef]), &kummer(0, vec![5, -2, 7])).unwrap(),
            rat_int(0)
        );
        // ψ_τ ∪ exp(c e_τ) = −c.
        let x = unram(0, vec![1, 0, 0]);
        let y = KummerClass {
            b0: Scalar::zero(),
            b: vec![rat(3, 2), Scalar::zero(), Scalar::zero()],
        };
        assert_eq!(cup_product(&x, &y).unwrap(), rat(-3, 2));
    }

    #[test]
    fn de_rham_criterion() {
        assert!(is_de_rham(&unram(7, vec![0, 0])));
        assert!(!is_de_rham(&unram(0, vec![0, 1])));
        assert!(is_de_rham(&unram(0, vec![0, 0])));
    }

    #[test]
    fn aux_relation_constructed_and_perturbed() {
        let l = vec![rat(1, 2), rat_int(-3)];
        let c = vec![rat_int(4), rat(1, 3)];
        let mut lhs = Scalar::zero();
        for (lt, ct) in l.iter().zip(c.iter()) {
            lhs += lt * ct;
        }
        let g2 = GammaCoefficients {
            gamma0: lhs.clone(),
            gamma_tau: c.clone(),
        };
        let g3 = GammaCoefficients {
            gamma0: Scalar::zero(),
            gamma_tau: vec![Scalar::zero(); 2],
        };
        assert!(aux_relation(&g2, &g3, &l).unwrap());
        let g2_bad = GammaCoefficients {
            gamma0: lhs + rat_int(1),
            gamma_tau: c,
        };
        assert!(!aux_relation(&g2_bad, &g3, &l).unwrap());
        assert!(aux_relation(&g3, &g3, &l).unwrap());
    }

    #[test]
    fn pairing_nondegenerate() {
        for ef in 1..=4 {
            assert_eq!(pairing_kernel_dim(ef), 0);
        }
    }
}
