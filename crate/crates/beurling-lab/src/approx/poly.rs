/// Real polynomial in the centred, scaled monomial basis
/// `p(x) = Σ c_k ((x - center) / scale)^k`.
///
/// Keeping `center` at the interval midpoint and `scale` at its half-length
/// leaves the basis well conditioned on deep dyadic levels.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Poly1D {
    pub center: f64,
    pub scale: f64,
    pub coeffs: Vec<f64>,
}

impl Poly1D {
    pub fn new(center: f64, scale: f64, coeffs: Vec<f64>) -> Self {
        assert!(scale > 0.0, "polynomial scale must be positive");
        Poly1D {
            center,
            scale,
            coeffs,
        }
    }

    /// Plain monomial coefficients `a_0 + a_1 x + ...`.
    pub fn monomial(coeffs: Vec<f64>) -> Self {
        Poly1D::new(0.0, 1.0, coeffs)
    }

    pub fn zero() -> Self {
        Poly1D::monomial(vec![0.0])
    }

    /// Index of the highest non-zero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.scale;
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }

    /// k-th derivative at `x`.
    pub fn derivative(&self, x: f64, k: usize) -> f64 {
        let u = (x - self.center) / self.scale;
        let mut acc = 0.0;
        for j in (k..self.coeffs.len()).rev() {
            let falling: f64 = ((j - k + 1)..=j).map(|v| v as f64).product();
            acc = acc * u + self.coeffs[j] * falling;
        }
        acc / self.scale.powi(k as i32)
    }

    /// Coefficients in the plain basis `Σ a_j x^j`.
    pub fn to_monomial(&self) -> Vec<f64> {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        let inv = 1.0 / self.scale;
        for (j, &c) in self.coeffs.iter().enumerate() {
            // c ((x - m)/s)^j = c s^{-j} Σ_i C(j,i) x^i (-m)^{j-i}
            let cj = c * inv.powi(j as i32);
            let mut binom = 1.0;
            for i in 0..=j {
                out[i] += cj * binom * (-self.center).powi((j - i) as i32);
                binom = binom * (j - i) as f64 / (i + 1) as f64;
            }
        }
        out
    }

    /// Same polynomial expressed around a new centre and scale.
    pub fn recentered(&self, center: f64, scale: f64) -> Self {
        let plain = Poly1D::monomial(self.to_monomial());
        let n = plain.coeffs.len();
        let mut coeffs = vec![0.0; n];
        let mut fact = 1.0;
        for (k, c) in coeffs.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            *c = plain.derivative(center, k) * scale.powi(k as i32) / fact;
        }
        Poly1D::new(center, scale, coeffs)
    }
}
