//! Seeded random coins and qubits for property checks and sweeps.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coin::{Coin, Qubit};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Non-degenerate coin with `|a| = cos(theta)`, `theta` drawn from
/// `[margin, pi/2 - margin]`, and uniform phases for `a`, `b` and the
/// determinant. Every element of U(2) arises this way for some theta.
pub fn random_coin<R: Rng + ?Sized>(rng: &mut R, margin: f64) -> Coin {
    let theta = rng.gen_range(margin..=FRAC_PI_2 - margin);
    let a = Complex64::from_polar(theta.cos(), rng.gen_range(0.0..TAU));
    let b = Complex64::from_polar(theta.sin(), rng.gen_range(0.0..TAU));
    let delta = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
    Coin::from_first_row(a, b, delta).expect("constructed coin is unitary")
}

/// Default margin keeping `|a|` and `|b|` at least `sin(0.15)`.
pub fn random_non_degenerate_coin<R: Rng + ?Sized>(rng: &mut R) -> Coin {
    random_coin(rng, 0.15)
}

/// Haar-uniform qubit.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> Qubit {
    let u: f64 = rng.gen_range(0.0..=1.0);
    let alpha = Complex64::from_polar(u.sqrt(), rng.gen_range(0.0..TAU));
    let beta = Complex64::from_polar((1.0 - u).sqrt(), rng.gen_range(0.0..TAU));
    Qubit::new(alpha, beta).expect("constructed qubit is normalized")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_valid_and_reproducible() {
        let mut r1 = rng(7);
        let mut r2 = rng(7);
        for _ in 0..50 {
            let c1 = random_non_degenerate_coin(&mut r1);
            let c2 = random_non_degenerate_coin(&mut r2);
            assert_eq!(c1, c2);
            assert!(!c1.is_degenerate());
            assert!(c1.unitarity_residual() < 1e-12);
            let q = random_qubit(&mut r1);
            assert!((q.alpha().norm_sqr() + q.beta().norm_sqr() - 1.0).abs() < 1e-12);
            random_qubit(&mut r2);
        }
    }
}
