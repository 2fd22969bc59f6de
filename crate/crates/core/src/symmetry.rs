//! Initial states whose distributions are symmetric.
//!
//! For `abcd != 0` three sets of initial qubits coincide: those giving
//! `P(X_n = k) = P(X_n = -k)` for all `n`, those giving `E[X_n] = 0` for all
//! `n`, and `Φ_⊥ = { |α| = |β|, aα conj(bβ) + conj(aα) bβ = 0 }`. The
//! checks here are run up to a finite horizon.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::coin::{Coin, Qubit};
use crate::error::{Result, WalkError};
use crate::evolve::{distribution, trajectory, Distribution};
use crate::moments::empirical_moment;

/// Tolerance for membership in `Φ_⊥`.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// `||α| - |β|| <= tol` and `|aα conj(bβ) + conj(aα) bβ| <= tol`.
pub fn in_phi_perp(coin: &Coin, phi: &Qubit, tol: f64) -> Result<bool> {
    coin.require_non_degenerate()?;
    let balanced = (phi.alpha().norm() - phi.beta().norm()).abs() <= tol;
    let orthogonal = coin.interference_complex(phi).norm() <= tol;
    Ok(balanced && orthogonal)
}

/// Largest `|P(k) - P(-k)|`.
pub fn asymmetry(dist: &Distribution) -> f64 {
    dist.iter()
        .filter(|(k, _)| *k > 0)
        .map(|(k, p)| (p - dist.prob(-k)).abs())
        .fold(0.0, f64::max)
}

pub fn check_symmetry(dist: &Distribution, tol: f64) -> bool {
    asymmetry(dist) <= tol
}

/// Draws a member of `Φ_⊥`: `|α| = |β| = 1/√2` and the relative phase
/// solving `Re(a conj(b) e^{i(θ_α - θ_β)}) = 0`, i.e.
/// `θ_α - θ_β = ±π/2 - arg(a conj(b))`.
pub fn sample_phi_perp<R: Rng + ?Sized>(coin: &Coin, rng: &mut R) -> Qubit {
    let theta_alpha = rng.gen_range(0.0..TAU);
    let ab = coin.a() * coin.b().conj();
    let theta_beta = if ab.norm() > 0.0 {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        theta_alpha - sign * FRAC_PI_2 + ab.arg()
    } else {
        // Interference vanishes for every phase.
        rng.gen_range(0.0..TAU)
    };
    Qubit::new(
        Complex64::from_polar(FRAC_1_SQRT_2, theta_alpha),
        Complex64::from_polar(FRAC_1_SQRT_2, theta_beta),
    )
    .expect("balanced qubit is normalized")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Asymmetric,
    NonzeroMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub n: usize,
    pub kind: ViolationKind,
    /// `E[X_n]` for a mean violation, the largest `|P(k) - P(-k)|` otherwise.
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    pub phi: Qubit,
    pub coin: Coin,
    pub in_phi_perp: bool,
    /// Largest `N` with a symmetric distribution at every `n <= N`.
    pub symmetric_up_to: usize,
    /// Largest `N` with `|E[X_n]| <= tol` at every `n <= N`.
    pub mean_zero_up_to: usize,
    pub max_n: usize,
    pub first_violation: Option<Violation>,
}

impl SymmetryReport {
    pub fn symmetric_throughout(&self) -> bool {
        self.symmetric_up_to == self.max_n
    }

    pub fn mean_zero_throughout(&self) -> bool {
        self.mean_zero_up_to == self.max_n
    }

    /// Whether the three predicates agree on this state.
    pub fn consistent(&self) -> bool {
        self.in_phi_perp == self.symmetric_throughout()
            && self.in_phi_perp == self.mean_zero_throughout()
    }
}

/// Evolves `phi` up to `max_n` and records where symmetry or the zero mean
/// first fail. Membership in `Φ_⊥` uses [`MEMBERSHIP_TOL`]; `tol` applies to
/// probabilities and means.
pub fn verify_symmetric_states(
    coin: &Coin,
    phi: &Qubit,
    max_n: usize,
    tol: f64,
) -> Result<SymmetryReport> {
    coin.require_non_degenerate()?;
    if max_n == 0 {
        return Err(WalkError::InvalidArgument(
            "max_n must be at least 1".into(),
        ));
    }
    let mut report = SymmetryReport {
        phi: *phi,
        coin: *coin,
        in_phi_perp: in_phi_perp(coin, phi, MEMBERSHIP_TOL)?,
        symmetric_up_to: 0,
        mean_zero_up_to: 0,
        max_n,
        first_violation: None,
    };
    let mut symmetric = true;
    let mut mean_zero = true;
    for field in trajectory(phi, coin).skip(1).take(max_n) {
        let n = field.time();
        let dist = distribution(&field);
        let asym = asymmetry(&dist);
        let mean = empirical_moment(&dist, 1);
        symmetric &= asym <= tol;
        mean_zero &= mean.abs() <= tol;
        if symmetric {
            report.symmetric_up_to = n;
        }
        if mean_zero {
            report.mean_zero_up_to = n;
        }
        if report.first_violation.is_none() {
            report.first_violation = if mean.abs() > tol {
                Some(Violation {
                    n,
                    kind: ViolationKind::NonzeroMean,
                    magnitude: mean,
                })
            } else if asym > tol {
                Some(Violation {
                    n,
                    kind: ViolationKind::Asymmetric,
                    magnitude: asym,
                })
            } else {
                None
            };
        }
        if !symmetric && !mean_zero {
            break;
        }
    }
    Ok(report)
}
