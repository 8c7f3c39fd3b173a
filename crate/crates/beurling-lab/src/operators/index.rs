use std::f64::consts::PI;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// `γ = (γ₁, γ₂)`; the kernel is `z^γ = z^{γ₁} z̄^{γ₂}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndex {
    pub g1: i32,
    pub g2: i32,
}

impl MultiIndex {
    pub const fn new(g1: i32, g2: i32) -> Self {
        MultiIndex { g1, g2 }
    }

    pub fn homogeneity(&self) -> i32 {
        self.g1 + self.g2
    }

    pub fn modulus(&self) -> i32 {
        self.g1.abs() + self.g2.abs()
    }

    /// `(γ₂, γ₁)`: the index of the conjugate kernel.
    pub fn swap(&self) -> Self {
        MultiIndex::new(self.g2, self.g1)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.g1 >= 0 && self.g2 >= 0
    }

    /// `z^{γ₁} z̄^{γ₂}` without the `z ≠ 0` check.
    pub(crate) fn eval(&self, z: C) -> C {
        pow(z, self.g1) * pow(z.conj(), self.g2)
    }
}

impl std::ops::Sub for MultiIndex {
    type Output = MultiIndex;
    fn sub(self, o: MultiIndex) -> MultiIndex {
        MultiIndex::new(self.g1 - o.g1, self.g2 - o.g2)
    }
}

impl std::fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.g1, self.g2)
    }
}

pub(crate) fn pow(z: C, k: i32) -> C {
    match k {
        0 => C::new(1.0, 0.0),
        1 => z,
        _ => z.powi(k),
    }
}

/// `z^{γ₁} z̄^{γ₂}` for `z ≠ 0`.
pub fn kernel(gamma: MultiIndex, z: C) -> Result<C> {
    if z == C::new(0.0, 0.0) && !gamma.is_nonnegative() {
        return Err(invalid("kernel evaluated at z = 0"));
    }
    Ok(gamma.eval(z))
}

/// `B^m = c_m T^{(-m-1, m-1)}` with `c_m = (-1)^m m / π`.
pub fn beurling_iterate_index(m: i32) -> Result<(MultiIndex, C)> {
    if m < 1 {
        return Err(invalid(format!("iterate order m = {m} must be at least 1")));
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok((MultiIndex::new(-m - 1, m - 1), C::new(sign * m as f64 / PI, 0.0)))
}

/// Outcome of `D^α T^γ χ_Ω` inside `Ω`, `D^α = ∂^{α₁} ∂̄^{α₂}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum LadderCase {
    /// `D^α T^γ χ_Ω = constant · χ_Ω`. The constant `π (n-1)!` is the value
    /// produced by the disk residue formula, confirmed by finite differences
    /// in the test suite rather than derived in general.
    Identity { constant: f64 },
    Zero,
    /// `D^α T^γ χ_Ω = constant · T^{index} χ_Ω`.
    Reduce { constant: f64, index: MultiIndex },
}

/// `x (x-1) ⋯ (x-k+1)`.
pub fn falling_factorial(x: i32, k: i32) -> f64 {
    (0..k).map(|i| (x - i) as f64).product()
}

/// Case split for derivatives of `T^γ χ_Ω`.
pub fn derivative_ladder(gamma: MultiIndex, alpha: MultiIndex) -> Result<LadderCase> {
    if alpha.g1 < 0 || alpha.g2 < 0 || alpha.homogeneity() < 1 {
        return Err(invalid(format!("derivative order {alpha} must be nonnegative with |α| ≥ 1")));
    }
    if gamma.g1 < 0 && gamma.g2 < 0 {
        return Err(Error::Unsupported(format!("index {gamma} has both entries negative")));
    }
    let identity = (gamma.g2 == -1 && alpha == MultiIndex::new(gamma.g1 + 1, 0))
        || (gamma.g1 == -1 && alpha == MultiIndex::new(0, gamma.g2 + 1));
    if identity {
        let n = alpha.homogeneity();
        return Ok(LadderCase::Identity {
            constant: PI * falling_factorial(n - 1, n - 1),
        });
    }
    if (gamma.g1 >= 0 && alpha.g1 > gamma.g1) || (gamma.g2 >= 0 && alpha.g2 > gamma.g2) {
        return Ok(LadderCase::Zero);
    }
    let constant = falling_factorial(gamma.g1, alpha.g1) * falling_factorial(gamma.g2, alpha.g2);
    let bound = ((gamma.modulus() + alpha.modulus()) as f64).powi(alpha.modulus());
    if constant.abs() > bound {
        return Err(Error::Certification(format!(
            "ladder constant {constant} exceeds (|γ| + |α|)^|α| = {bound}"
        )));
    }
    Ok(LadderCase::Reduce {
        constant,
        index: gamma - alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_examples() {
        let k = kernel(MultiIndex::new(-2, 0), C::new(0.0, 1.0)).unwrap();
        assert!((k - C::new(-1.0, 0.0)).norm() < 1e-15);
        let z = C::new(1.0, 1.0);
        let want = C::new(1.0, -1.0) / (z * z * z);
        assert!((kernel(MultiIndex::new(-3, 1), z).unwrap() - want).norm() < 1e-15);
        assert_eq!(kernel(MultiIndex::new(0, 0), C::new(0.0, 0.0)).unwrap(), C::new(1.0, 0.0));
        assert!(kernel(MultiIndex::new(-1, 0), C::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn iterate_indices() {
        let (g, c) = beurling_iterate_index(1).unwrap();
        assert_eq!(g, MultiIndex::new(-2, 0));
        assert!((c.re + 1.0 / PI).abs() < 1e-15);
        let (g, c) = beurling_iterate_index(3).unwrap();
        assert_eq!(g, MultiIndex::new(-4, 2));
        assert!((c.re + 3.0 / PI).abs() < 1e-15);
        assert!(beurling_iterate_index(0).is_err());
    }

    #[test]
    fn ladder_cases() {
        let m = MultiIndex::new;
        assert!(matches!(derivative_ladder(m(-1, 0), m(0, 1)), Ok(LadderCase::Identity { .. })));
        assert_eq!(derivative_ladder(m(-2, 0), m(0, 1)), Ok(LadderCase::Zero));
        assert_eq!(
            derivative_ladder(m(-2, 0), m(1, 0)),
            Ok(LadderCase::Reduce {
                constant: -2.0,
                index: m(-3, 0)
            })
        );
        assert!(derivative_ladder(m(-1, -1), m(1, 0)).is_err());
        assert!(derivative_ladder(m(-2, 0), m(0, 0)).is_err());
    }
}
