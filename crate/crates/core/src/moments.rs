//! Moments `E[(X_n)^m]`: empirical from a distribution, and in closed form
//! for non-degenerate coins.
//!
//! Throughout this module `m` is the moment order, unrelated to the
//! `Q`-count of `Ξ(l, m)`.
//!
//! With `A = |a|²`, `B = |b|²`, `u = |α|² - |β|²` and the interference term
//! `w = aα conj(bβ) + conj(aα) bβ`, the closed form is
//!
//! ```text
//! odd m:  A^{n-1} [ -n^m ((A - B) u + 2w)
//!           + Σ_k Σ_γ Σ_δ c(k,γ,δ) (n-2k)^{m+1} / (γδ)
//!               · ( -(n(A - B) + γ + δ) u + ((γ + δ)/B - 2n) w ) ]
//! even m: A^{n-1} [ n^m
//!           + Σ_k Σ_γ Σ_δ c(k,γ,δ) (n-2k)^m / (γδ)
//!               · ( (n-k)² + k² - n(γ + δ) + 2γδ/B ) ]
//! ```
//!
//! where `k` runs over `1..=⌊(n-1)/2⌋`, `γ, δ` over `1..=k`, and
//! `c = (-B/A)^{γ+δ} C(k-1,γ-1) C(k-1,δ-1) C(n-k-1,γ-1) C(n-k-1,δ-1)`.
//!
//! [`moment_triple_sum`] adds the terms as written. Its alternating terms
//! grow like squared binomials, so double precision loses all accuracy
//! somewhere past `n ≈ 40`. [`moment_closed_form`] evaluates the same sum
//! with the brackets split into `γ`- and `δ`-separable pieces, each single
//! sum being a Jacobi polynomial at `2A - 1`:
//!
//! ```text
//! Σ_γ (-B/A)^γ C(k-1,γ-1) C(n-k-1,γ-1)     = -(B/A) A^{1-k} P^{0,n-2k}_{k-1}
//! Σ_γ (-B/A)^γ C(k-1,γ-1) C(n-k-1,γ-1) / γ = -(B/A) A^{1-k} P^{1,n-2k}_{k-1} / k
//! ```
//!
//! and the recurrence for those is stable.

use num_complex::Complex64;

use crate::asymptotics::jacobi::jacobi_recurrence;
use crate::coin::{Coin, Qubit};
use crate::error::{Result, WalkError};
use crate::evolve::Distribution;
use crate::numeric::{binomial, CompensatedSum};

/// Largest imaginary residue tolerated, relative to `max(1, n^m)`.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-10;

/// `Σ_k k^m P(k)`.
pub fn empirical_moment(dist: &Distribution, m: u32) -> f64 {
    dist.support()
        .map(|(k, p)| (k as f64).powi(m as i32) * p)
        .sum()
}

/// Mean and standard deviation of `X_n`.
pub fn mean_and_sd(dist: &Distribution) -> (f64, f64) {
    let mean = empirical_moment(dist, 1);
    let second = empirical_moment(dist, 2);
    (mean, (second - mean * mean).max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRequest {
    pub n: usize,
    pub order: u32,
    pub coin: Coin,
    pub phi: Qubit,
}

impl MomentRequest {
    pub fn new(n: usize, order: u32, coin: Coin, phi: Qubit) -> Self {
        MomentRequest {
            n,
            order,
            coin,
            phi,
        }
    }

    fn validate(&self) -> Result<()> {
        self.coin.require_non_degenerate()?;
        if self.n == 0 {
            return Err(WalkError::InvalidArgument("moment needs n >= 1".into()));
        }
        if self.order == 0 {
            return Err(WalkError::InvalidArgument(
                "closed-form moment needs order >= 1".into(),
            ));
        }
        Ok(())
    }

    fn scale(&self) -> f64 {
        (self.n as f64).powi(self.order as i32).max(1.0)
    }
}

/// Closed-form `E[(X_n)^m]`, evaluated in complex arithmetic through the
/// Jacobi reduction. Returns the complex value before the real part is taken.
pub fn moment_closed_form_complex(req: &MomentRequest) -> Result<Complex64> {
    req.validate()?;
    let MomentRequest {
        n,
        order,
        coin,
        phi,
    } = *req;
    let big_a = coin.a().norm_sqr();
    let big_b = coin.b().norm_sqr();
    let u = Complex64::new(phi.imbalance(), 0.0);
    let w = coin.interference_complex(&phi);
    let x = 2.0 * big_a - 1.0;
    let nf = n as f64;
    let odd = order % 2 == 1;

    let mut sum = CompensatedSum::default();
    let edge = if odd {
        -nf.powi(order as i32) * ((big_a - big_b) * u + 2.0 * w)
    } else {
        Complex64::new(nf.powi(order as i32), 0.0)
    };
    sum.add(big_a.powi(n as i32 - 1) * edge);

    for k in 1..=(n - 1) / 2 {
        let mu = n - 2 * k;
        let kf = k as f64;
        let (p0, p1) = jacobi_pair(mu as f64, k - 1, x);
        // A^{n-1} (B/A)² A^{2(1-k)} = (A^{(n-2k-1)/2} B)², split over both factors.
        let h = big_a.powf((mu as f64 - 1.0) / 2.0) * big_b;
        let v0 = h * p0;
        let v1 = h * p1 / kf;
        let muf = mu as f64;
        let term = if odd {
            let s = (-nf * ((big_a - big_b) * u + 2.0 * w)) * (v1 * v1)
                + 2.0 * (w / big_b - u) * (v0 * v1);
            muf.powi(order as i32 + 1) * s
        } else {
            let s = ((nf - kf).powi(2) + kf * kf) * v1 * v1 - 2.0 * nf * v0 * v1
                + 2.0 / big_b * v0 * v0;
            Complex64::new(muf.powi(order as i32) * s, 0.0)
        };
        sum.add(term);
    }
    Ok(sum.value())
}

/// Closed-form `E[(X_n)^m]` for `m >= 1`. Errors if the complex evaluation
/// leaves an imaginary part above `1e-10 · max(1, n^m)`.
pub fn moment_closed_form(req: &MomentRequest) -> Result<f64> {
    let z = moment_closed_form_complex(req)?;
    check_real(z, req.scale())
}

/// The triple sum over `(k, γ, δ)` added term by term in complex arithmetic.
/// Only trustworthy for small `n`; kept as an independent check of the
/// Jacobi reduction.
pub fn moment_triple_sum(req: &MomentRequest) -> Result<f64> {
    req.validate()?;
    let MomentRequest {
        n,
        order,
        coin,
        phi,
    } = *req;
    let big_a = coin.a().norm_sqr();
    let big_b = coin.b().norm_sqr();
    let u = Complex64::new(phi.imbalance(), 0.0);
    let w = coin.interference_complex(&phi);
    let ratio = -big_b / big_a;
    let nf = n as f64;
    let odd = order % 2 == 1;
    let ni = n as i64;

    let mut sum = CompensatedSum::default();
    sum.add(if odd {
        -nf.powi(order as i32) * ((big_a - big_b) * u + 2.0 * w)
    } else {
        Complex64::new(nf.powi(order as i32), 0.0)
    });
    for k in 1..=(ni - 1) / 2 {
        let kf = k as f64;
        let mu = (ni - 2 * k) as f64;
        for gamma in 1..=k {
            for delta in 1..=k {
                let (g, d) = (gamma as f64, delta as f64);
                let c = ratio.powi((gamma + delta) as i32)
                    * binomial(k - 1, gamma - 1)
                    * binomial(k - 1, delta - 1)
                    * binomial(ni - k - 1, gamma - 1)
                    * binomial(ni - k - 1, delta - 1);
                let bracket = if odd {
                    mu.powi(order as i32 + 1)
                        * (-(nf * (big_a - big_b) + g + d) * u + ((g + d) / big_b - 2.0 * nf) * w)
                } else {
                    Complex64::new(
                        mu.powi(order as i32)
                            * ((nf - kf).powi(2) + kf * kf - nf * (g + d) + 2.0 * g * d / big_b),
                        0.0,
                    )
                };
                sum.add(c / (g * d) * bracket);
            }
        }
    }
    let z = big_a.powi(n as i32 - 1) * sum.value();
    check_real(z, req.scale())
}

fn check_real(z: Complex64, scale: f64) -> Result<f64> {
    if !(z.im.abs() <= IMAGINARY_RESIDUE_TOL * scale) {
        return Err(WalkError::ImaginaryResidue {
            residue: z.im.abs(),
        });
    }
    Ok(z.re)
}

/// `(P^{0,mu}_{deg}(x), P^{1,mu}_{deg}(x))`.
fn jacobi_pair(mu: f64, degree: usize, x: f64) -> (f64, f64) {
    (
        jacobi_recurrence(0.0, mu, degree, x),
        jacobi_recurrence(1.0, mu, degree, x),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::{distribution, evolve};
    use crate::sample;

    #[test]
    fn empirical_hadamard_values() {
        let h = Coin::hadamard();
        let d2 = distribution(&evolve(&Qubit::left(), &h, 2));
        assert!(empirical_moment(&d2, 1).abs() < 1e-15);
        let d3 = distribution(&evolve(&Qubit::left(), &h, 3));
        assert!((empirical_moment(&d3, 1) + 0.5).abs() < 1e-15);
        assert!((empirical_moment(&d3, 0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_hadamard_spot_values() {
        let h = Coin::hadamard();
        let req = MomentRequest::new(3, 1, h, Qubit::left());
        assert!((moment_closed_form(&req).unwrap() + 0.5).abs() < 1e-14);
        assert!((moment_triple_sum(&req).unwrap() + 0.5).abs() < 1e-14);
        let req = MomentRequest::new(2, 1, h, Qubit::left());
        assert!(moment_closed_form(&req).unwrap().abs() < 1e-15);
    }

    #[test]
    fn second_moment_at_one_step() {
        let mut rng = sample::rng(11);
        for _ in 0..10 {
            let coin = sample::random_non_degenerate_coin(&mut rng);
            let phi = sample::random_qubit(&mut rng);
            let req = MomentRequest::new(1, 2, coin, phi);
            assert!((moment_closed_form(&req).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn two_routes_agree_at_small_n() {
        let mut rng = sample::rng(5);
        for _ in 0..5 {
            let coin = sample::random_non_degenerate_coin(&mut rng);
            let phi = sample::random_qubit(&mut rng);
            for n in 1..=16 {
                for order in 1..=4 {
                    let req = MomentRequest::new(n, order, coin, phi);
                    let a = moment_closed_form(&req).unwrap();
                    let b = moment_triple_sum(&req).unwrap();
                    let scale = (n as f64).powi(order as i32).max(1.0);
                    assert!(
                        (a - b).abs() <= 1e-10 * scale,
                        "n={n} m={order}: {a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_bad_requests() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let id = Coin::new(one, zero, zero, one).unwrap();
        assert!(moment_closed_form(&MomentRequest::new(4, 1, id, Qubit::left())).is_err());
        let h = Coin::hadamard();
        assert!(moment_closed_form(&MomentRequest::new(0, 1, h, Qubit::left())).is_err());
        assert!(moment_closed_form(&MomentRequest::new(4, 0, h, Qubit::left())).is_err());
    }
}
