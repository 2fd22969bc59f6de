//! Direct amplitude evolution `Ψ_k(n+1) = P Ψ_{k+1}(n) + Q Ψ_{k-1}(n)`.
//!
//! Valid for every coin, degenerate or not, and used as the reference the
//! combinatorial closed forms are tested against.

use num_complex::Complex64;

use crate::coin::{Coin, Qubit};
use crate::error::{Result, WalkError};

/// Probabilities below this are rounding noise and get clamped to zero;
/// anything more negative is a logic error.
pub const NEGATIVE_PROB_TOL: f64 = 1e-15;

/// Amplitudes `(ψ_L(k), ψ_R(k))` at time `n`, stored densely for
/// `k = -n..=n` at index `k + n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeField {
    time: usize,
    left: Vec<Complex64>,
    right: Vec<Complex64>,
}

impl AmplitudeField {
    /// The walker at the origin in state `phi`, time zero.
    pub fn origin(phi: &Qubit) -> Self {
        AmplitudeField {
            time: 0,
            left: vec![phi.alpha()],
            right: vec![phi.beta()],
        }
    }

    pub fn time(&self) -> usize {
        self.time
    }

    /// Amplitude pair at position `k`; zero outside `-n..=n`.
    pub fn amplitude(&self, k: i64) -> [Complex64; 2] {
        match self.index(k) {
            Some(i) => [self.left[i], self.right[i]],
            None => [Complex64::new(0.0, 0.0); 2],
        }
    }

    fn index(&self, k: i64) -> Option<usize> {
        let n = self.time as i64;
        (-n..=n).contains(&k).then(|| (k + n) as usize)
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> {
        let n = self.time as i64;
        -n..=n
    }

    pub fn total_norm(&self) -> f64 {
        self.left
            .iter()
            .zip(&self.right)
            .map(|(l, r)| l.norm_sqr() + r.norm_sqr())
            .sum()
    }

    /// One time step. The new left component at `k` comes from the first
    /// coin row applied at `k + 1`; the right component from the second
    /// row applied at `k - 1`.
    pub fn step(&self, coin: &Coin) -> AmplitudeField {
        let (a, b, c, d) = (coin.a(), coin.b(), coin.c(), coin.d());
        let width = self.left.len() + 2;
        let zero = Complex64::new(0.0, 0.0);
        let mut left = vec![zero; width];
        let mut right = vec![zero; width];
        // Old index i (position i - n) maps to new index i + 1 (same position).
        for (i, (&l, &r)) in self.left.iter().zip(&self.right).enumerate() {
            if l == zero && r == zero {
                continue;
            }
            left[i] = a * l + b * r;
            right[i + 2] = c * l + d * r;
        }
        AmplitudeField {
            time: self.time + 1,
            left,
            right,
        }
    }
}

/// Field after `n` steps from `phi` at the origin.
pub fn evolve(phi: &Qubit, coin: &Coin, n: usize) -> AmplitudeField {
    let mut field = AmplitudeField::origin(phi);
    for _ in 0..n {
        field = field.step(coin);
    }
    field
}

/// Iterator over the fields at times `0, 1, 2, ...`.
pub fn trajectory<'a>(phi: &Qubit, coin: &'a Coin) -> impl Iterator<Item = AmplitudeField> + 'a {
    std::iter::successors(Some(AmplitudeField::origin(phi)), move |f| {
        Some(f.step(coin))
    })
}

/// `P(X_n = k)` for `k = -n..=n`, stored densely at index `k + n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    time: usize,
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates raw probabilities for `k = -n..=n`. Values in
    /// `[-NEGATIVE_PROB_TOL, 0)` are clamped to zero.
    pub fn from_probabilities(time: usize, mut probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 2 * time + 1 {
            return Err(WalkError::InvalidArgument(format!(
                "expected {} probabilities for n = {time}, got {}",
                2 * time + 1,
                probs.len()
            )));
        }
        for (i, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() || *p < -NEGATIVE_PROB_TOL {
                return Err(WalkError::NegativeProbability {
                    k: i as i64 - time as i64,
                    value: *p,
                });
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        Ok(Distribution { time, probs })
    }

    /// Builds a distribution from sparse `(k, p)` pairs; unlisted positions are zero.
    pub fn from_pairs(time: usize, pairs: impl IntoIterator<Item = (i64, f64)>) -> Result<Self> {
        let n = time as i64;
        let mut probs = vec![0.0; 2 * time + 1];
        for (k, p) in pairs {
            if !(-n..=n).contains(&k) {
                return Err(WalkError::InvalidArgument(format!(
                    "position {k} outside -{n}..={n}"
                )));
            }
            probs[(k + n) as usize] = p;
        }
        Distribution::from_probabilities(time, probs)
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn prob(&self, k: i64) -> f64 {
        let n = self.time as i64;
        if (-n..=n).contains(&k) {
            self.probs[(k + n) as usize]
        } else {
            0.0
        }
    }

    /// All `(k, P(k))` for `k = -n..=n`, including parity-empty slots.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let n = self.time as i64;
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (i as i64 - n, p))
    }

    /// Positions with `k ≡ n (mod 2)`, the only ones that can carry mass.
    pub fn support(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let n = self.time as i64;
        self.iter().filter(move |(k, _)| (k - n).rem_euclid(2) == 0)
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `P(X_n <= k)` for every `k = -n..=n`.
    pub fn cumulative(&self) -> Vec<f64> {
        self.probs
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }
}

/// `P(k) = |ψ_L(k)|² + |ψ_R(k)|²`.
pub fn distribution(field: &AmplitudeField) -> Distribution {
    let probs = field
        .left
        .iter()
        .zip(&field.right)
        .map(|(l, r)| l.norm_sqr() + r.norm_sqr())
        .collect();
    Distribution {
        time: field.time,
        probs,
    }
}

/// `E[exp(i xi X_n / n)] = Σ_k P(k) e^{i xi k / n}`.
pub fn exact_char_function(dist: &Distribution, xi: f64) -> Result<Complex64> {
    if dist.time == 0 {
        return Err(WalkError::InvalidArgument(
            "characteristic function of X_n / n needs n >= 1".into(),
        ));
    }
    let n = dist.time as f64;
    Ok(dist
        .support()
        .map(|(k, p)| Complex64::from_polar(p, xi * k as f64 / n))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn assert_dist(dist: &Distribution, expect: &[(i64, f64)]) {
        for (k, p) in dist.iter() {
            let want = expect.iter().find(|(j, _)| *j == k).map_or(0.0, |e| e.1);
            assert!((p - want).abs() < 1e-15, "k = {k}: {p} vs {want}");
        }
    }

    #[test]
    fn one_hadamard_step() {
        let f = evolve(&Qubit::left(), &Coin::hadamard(), 1);
        let [l, r] = f.amplitude(-1);
        assert!((l.re - FRAC_1_SQRT_2).abs() < 1e-16 && r.norm() == 0.0);
        let [l, r] = f.amplitude(1);
        assert!(l.norm() == 0.0 && (r.re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert_eq!(f.amplitude(0), [Complex64::new(0.0, 0.0); 2]);
    }

    #[test]
    fn zero_steps_is_origin() {
        let phi = Qubit::symmetric();
        let f = evolve(&phi, &Coin::symmetric(0.2, 0.4, 0.9), 0);
        assert_eq!(f.time(), 0);
        assert_eq!(f.amplitude(0), phi.as_vector());
    }

    #[test]
    fn hadamard_small_distributions() {
        let h = Coin::hadamard();
        let d2 = distribution(&evolve(&Qubit::left(), &h, 2));
        assert_dist(&d2, &[(-2, 0.25), (0, 0.5), (2, 0.25)]);
        let d3 = distribution(&evolve(&Qubit::left(), &h, 3));
        assert_dist(&d3, &[(-3, 0.125), (-1, 0.625), (1, 0.125), (3, 0.125)]);
    }

    #[test]
    fn norm_after_many_steps() {
        let f = evolve(&Qubit::symmetric(), &Coin::symmetric(1.0, 2.0, 3.0), 100);
        assert!((f.total_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn char_function_values() {
        let d2 = distribution(&evolve(&Qubit::left(), &Coin::hadamard(), 2));
        for xi in [0.0, 0.3, 1.0, 2.5, -4.0] {
            let phi = exact_char_function(&d2, xi).unwrap();
            assert!((phi - Complex64::new((1.0 + xi.cos()) / 2.0, 0.0)).norm() < 1e-15);
        }
        let d = distribution(&evolve(&Qubit::right(), &Coin::hadamard(), 9));
        assert!((exact_char_function(&d, 0.0).unwrap() - 1.0).norm() < 1e-14);
        let plus = exact_char_function(&d, 1.3).unwrap();
        let minus = exact_char_function(&d, -1.3).unwrap();
        assert!((plus - minus.conj()).norm() < 1e-15);
        let d0 = distribution(&evolve(&Qubit::right(), &Coin::hadamard(), 0));
        assert!(exact_char_function(&d0, 1.0).is_err());
    }

    #[test]
    fn clamps_rounding_but_rejects_negative() {
        let d = Distribution::from_probabilities(1, vec![0.5, -1e-17, 0.5]).unwrap();
        assert_eq!(d.prob(0), 0.0);
        let err = Distribution::from_probabilities(1, vec![0.5, -1e-9, 0.5]).unwrap_err();
        assert!(matches!(err, WalkError::NegativeProbability { k: 0, .. }));
    }

    #[test]
    fn cumulative_ends_at_total() {
        let d = distribution(&evolve(&Qubit::left(), &Coin::hadamard(), 3));
        let cdf = d.cumulative();
        assert_eq!(cdf.len(), 7);
        assert!((cdf[6] - 1.0).abs() < 1e-15);
        assert!((cdf[2] - 0.75).abs() < 1e-15);
    }
}
