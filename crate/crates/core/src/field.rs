//! Base-field bookkeeping: the prime, ramification index, residue degree, and
//! the formal embedding labels.

use num_bigint::BigInt;

use crate::scalar::{p_valuation, Scalar, Valuation};
use crate::{Error, Result};

/// Invariants of the base field K/Q_p together with its ef formal embedding
/// labels. Embedding `tau_m` restricts to the unramified subfield through the
/// index `m mod f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldContext {
    p: u64,
    e: usize,
    f: usize,
    embeddings: Vec<String>,
}

impl FieldContext {
    pub fn new(p: u64, e: usize, f: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Validation(format!("{p} is not prime")));
        }
        if e == 0 || f == 0 {
            return Err(Error::Validation(
                "ramification index and residue degree must be positive".into(),
            ));
        }
        let embeddings = (0..e * f).map(|m| format!("tau_{m}")).collect();
        Ok(FieldContext { p, e, f, embeddings })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn f(&self) -> usize {
        self.f
    }

    /// [K : Q_p] = ef.
    pub fn degree(&self) -> usize {
        self.e * self.f
    }

    pub fn p_int(&self) -> BigInt {
        BigInt::from(self.p)
    }

    pub fn p_scalar(&self) -> Scalar {
        Scalar::from(self.p_int())
    }

    pub fn embeddings(&self) -> &[String] {
        &self.embeddings
    }

    /// Index of the unramified-subfield component an embedding restricts to.
    pub fn k0_index(&self, tau: usize) -> usize {
        tau % self.f
    }

    pub fn valuation(&self, x: &Scalar) -> Valuation {
        p_valuation(x, &self.p_int())
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_validation() {
        let ctx = FieldContext::new(3, 2, 2).unwrap();
        assert_eq!(ctx.degree(), 4);
        assert_eq!(ctx.embeddings().len(), 4);
        assert_eq!(ctx.k0_index(3), 1);
        assert!(FieldContext::new(4, 1, 1).is_err());
        assert!(FieldContext::new(5, 0, 1).is_err());
    }

    #[test]
    fn exactly_e_labels_per_k0_index() {
        let ctx = FieldContext::new(5, 3, 2).unwrap();
        for j in 0..ctx.f() {
            let count = (0..ctx.degree()).filter(|&m| ctx.k0_index(m) == j).count();
            assert_eq!(count, ctx.e());
        }
    }
}
