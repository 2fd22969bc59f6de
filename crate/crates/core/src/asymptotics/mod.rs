//! Large-time behaviour of `X_n / n` for non-degenerate coins.
//!
//! `X_n / n` converges in distribution to `Z` with density
//!
//! ```text
//! f(x) = sqrt(1 - |a|²) / (π (1 - x²) sqrt(|a|² - x²)) · (1 - s x),   |x| < |a|
//! s    = |α|² - |β|² + (aα conj(bβ) + conj(aα) bβ) / |a|²
//! ```
//!
//! The density has inverse square-root singularities at `±|a|`. Every
//! integral here goes through `x = |a| sin t`, after which the integrand
//! `sqrt(1 - |a|²) (1 - s |a| sin t) / (π (1 - |a|² sin² t))` is smooth on
//! `[-π/2, π/2]`.

pub mod jacobi;
pub mod quadrature;

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::coin::{Coin, Qubit};
use crate::error::{Result, WalkError};
use crate::evolve::Distribution;
use crate::numeric::CompensatedSum;

use self::jacobi::jacobi_recurrence;
use self::quadrature::integrate;

const QUAD_ABS_TOL: f64 = 1e-13;
const QUAD_REL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitLaw {
    coin: Coin,
    phi: Qubit,
    half_width: f64,
    skew: f64,
}

impl LimitLaw {
    pub fn new(coin: &Coin, phi: &Qubit) -> Result<Self> {
        coin.require_non_degenerate()?;
        let big_a = coin.a().norm_sqr();
        Ok(LimitLaw {
            coin: *coin,
            phi: *phi,
            half_width: big_a.sqrt(),
            skew: phi.imbalance() + coin.interference(phi) / big_a,
        })
    }

    pub fn coin(&self) -> &Coin {
        &self.coin
    }

    pub fn phi(&self) -> &Qubit {
        &self.phi
    }

    /// `|a|`; the support is `(-|a|, |a|)`.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// `|α|² - |β|² + (aα conj(bβ) + conj(aα) bβ) / |a|²`.
    pub fn skew(&self) -> f64 {
        self.skew
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        let h = self.half_width;
        if !(x.abs() < h) {
            return Err(WalkError::OutOfSupport { x, bound: h });
        }
        let big_a = h * h;
        Ok(
            (1.0 - big_a).sqrt() / (PI * (1.0 - x * x) * (big_a - x * x).sqrt())
                * (1.0 - self.skew * x),
        )
    }

    /// Density in the substituted variable, `f(|a| sin t) · |a| cos t`.
    pub fn substituted_density(&self, t: f64) -> f64 {
        let h = self.half_width;
        let s = t.sin();
        (1.0 - h * h).sqrt() * (1.0 - self.skew * h * s) / (PI * (1.0 - h * h * s * s))
    }

    fn angle(&self, x: f64) -> f64 {
        (x / self.half_width).clamp(-1.0, 1.0).asin()
    }

    /// `∫ f` over the whole support, by quadrature.
    pub fn total_mass(&self) -> Result<f64> {
        integrate(
            |t| self.substituted_density(t),
            -FRAC_PI_2,
            FRAC_PI_2,
            QUAD_ABS_TOL,
            QUAD_REL_TOL,
        )
    }

    /// `P(Z <= x)`, clamped to `[0, 1]`.
    pub fn cdf(&self, x: f64) -> f64 {
        let h = self.half_width;
        if x <= -h {
            return 0.0;
        }
        if x >= h {
            return 1.0;
        }
        self.mass_between(-FRAC_PI_2, self.angle(x)).clamp(0.0, 1.0)
    }

    fn mass_between(&self, t0: f64, t1: f64) -> f64 {
        if t1 <= t0 {
            return 0.0;
        }
        // The substituted integrand is smooth and bounded, so adaptive
        // Gauss-Kronrod always meets the tolerance here.
        quadrature::gauss_kronrod(
            |t| self.substituted_density(t),
            t0,
            t1,
            QUAD_ABS_TOL,
            QUAD_REL_TOL,
        )
        .value
    }

    /// `E[Z^m]`: closed forms for `m = 1, 2`, quadrature otherwise.
    pub fn moment(&self, m: u32) -> Result<f64> {
        let second = 1.0 - (1.0 - self.half_width * self.half_width).sqrt();
        match m {
            0 => Ok(1.0),
            1 => Ok(-self.skew * second),
            2 => Ok(second),
            _ => self.moment_by_quadrature(m),
        }
    }

    /// `∫ x^m f(x) dx` by quadrature, for any order.
    pub fn moment_by_quadrature(&self, m: u32) -> Result<f64> {
        let h = self.half_width;
        integrate(
            |t| (h * t.sin()).powi(m as i32) * self.substituted_density(t),
            -FRAC_PI_2,
            FRAC_PI_2,
            QUAD_ABS_TOL,
            QUAD_REL_TOL,
        )
    }

    /// Limit CDF at each of the sorted points `xs`, integrating segment by
    /// segment so the total cost stays linear in the number of points.
    pub fn cdf_at_sorted(&self, xs: &[f64]) -> Vec<f64> {
        let mut acc = 0.0;
        let mut last = -FRAC_PI_2;
        xs.iter()
            .map(|&x| {
                let t = self.angle(x).max(last);
                acc += self.mass_between(last, t);
                last = t;
                if x >= self.half_width {
                    1.0
                } else {
                    acc.clamp(0.0, 1.0)
                }
            })
            .collect()
    }
}

/// Limit density `f(x; φ)`.
pub fn limit_density(coin: &Coin, phi: &Qubit, x: f64) -> Result<f64> {
    LimitLaw::new(coin, phi)?.density(x)
}

/// `E[Z^m]` of the limit law.
pub fn limit_moment(coin: &Coin, phi: &Qubit, m: u32) -> Result<f64> {
    LimitLaw::new(coin, phi)?.moment(m)
}

/// `P(Z <= x)` of the limit law.
pub fn limit_cdf(coin: &Coin, phi: &Qubit, x: f64) -> Result<f64> {
    Ok(LimitLaw::new(coin, phi)?.cdf(x))
}

/// Jacobi-polynomial form of `E[exp(iξ X_n / n)]`: the sum over
/// `k = 1..=⌊(n-1)/2⌋` with `x = k/n` substituted in every summand,
/// `P_i = P^{i,n-2k}_{k-1}(2|a|² - 1)` and prefactor `|a|^{2n-4k-2} |b|^4` of
///
/// ```text
/// [ ((2x²-2x+1)/x²) P_1² - (2/x) P_1 P_0 + (2/|b|²) P_0² ] cos((1-2x)ξ)
/// + ((1-2x)/x) [ -(1/x)((|a|²-|b|²) u + 2w) P_1² - 2(u - w/|b|²) P_0 P_1 ] i sin((1-2x)ξ)
/// ```
///
/// with `u = |α|² - |β|²` and `w = aα conj(bβ) + conj(aα) bβ`.
pub fn asymptotic_char_function(coin: &Coin, phi: &Qubit, n: usize, xi: f64) -> Result<Complex64> {
    coin.require_non_degenerate()?;
    if n < 3 {
        return Err(WalkError::InvalidArgument(
            "asymptotic characteristic function needs n >= 3".into(),
        ));
    }
    let big_a = coin.a().norm_sqr();
    let big_b = coin.b().norm_sqr();
    let u = phi.imbalance();
    let w = coin.interference(phi);
    let arg = 2.0 * big_a - 1.0;
    let nf = n as f64;

    let mut sum = CompensatedSum::default();
    for k in 1..=(n - 1) / 2 {
        let mu = (n - 2 * k) as f64;
        let x = k as f64 / nf;
        let h = big_a.powf((mu - 1.0) / 2.0) * big_b;
        let p0 = h * jacobi_recurrence(0.0, mu, k - 1, arg);
        let p1 = h * jacobi_recurrence(1.0, mu, k - 1, arg);
        let even = (2.0 * x * x - 2.0 * x + 1.0) / (x * x) * p1 * p1 - 2.0 / x * p1 * p0
            + 2.0 / big_b * p0 * p0;
        let odd = (1.0 - 2.0 * x) / x
            * (-((big_a - big_b) * u + 2.0 * w) / x * p1 * p1 - 2.0 * (u - w / big_b) * p0 * p1);
        let phase = (1.0 - 2.0 * x) * xi;
        sum.add(Complex64::new(even * phase.cos(), odd * phase.sin()));
    }
    Ok(sum.value())
}

/// Kolmogorov distance `sup_k |P(X_n <= k) - P(Z <= k/n)|` over
/// `k = -n..=n`. Parity-empty positions are included, so both sides of
/// every jump of the empirical CDF are compared.
pub fn ks_distance(dist: &Distribution, coin: &Coin, phi: &Qubit) -> Result<f64> {
    let law = LimitLaw::new(coin, phi)?;
    let n = dist.time().max(1) as f64;
    let xs: Vec<f64> = dist.iter().map(|(k, _)| k as f64 / n).collect();
    let limit = law.cdf_at_sorted(&xs);
    let empirical = dist.cumulative();
    Ok(empirical
        .iter()
        .zip(&limit)
        .map(|(e, l)| (e.min(1.0) - l).abs())
        .fold(0.0, f64::max))
}
