//! The word sum `Ξ(l, m)`: the sum of all ordered products of `l` copies of
//! `P` and `m` copies of `Q`. Applied to the initial qubit it gives the
//! amplitude at displacement `k = m - l` after `n = l + m` steps.

use num_complex::Complex64;

use crate::coin::{Basis, Coin, Qubit};
use crate::error::{Result, WalkError};
use crate::evolve::Distribution;
use crate::matrix::Mat2;
use crate::numeric::{binomial, binomial_u128, CompensatedSum};

/// Default cap on the number of words enumerated by [`xi_bruteforce`].
pub const DEFAULT_MAX_ENUM: u128 = 10_000_000;
/// Environment variable overriding [`DEFAULT_MAX_ENUM`].
pub const MAX_ENUM_ENV: &str = "QWALK_MAX_ENUM";

/// Enumeration cap from `QWALK_MAX_ENUM`, falling back to the default when
/// unset or unparsable.
pub fn max_enum_from_env() -> u128 {
    std::env::var(MAX_ENUM_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ENUM)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiMatrix {
    pub l: usize,
    pub m: usize,
    pub matrix: Mat2,
}

impl XiMatrix {
    pub fn n(&self) -> usize {
        self.l + self.m
    }

    /// `|Ξ(l, m) φ|²`.
    pub fn probability(&self, phi: &Qubit) -> f64 {
        let [x, y] = self.matrix.apply(phi.as_vector());
        x.norm_sqr() + y.norm_sqr()
    }
}

/// Sums the raw 2×2 products over every word with `l` letters `P` and `m`
/// letters `Q`. Words are generated by unranking in the combinatorial number
/// system and multiplied left to right; the multiplication table is not used.
pub fn xi_bruteforce(l: usize, m: usize, coin: &Coin, cap: u128) -> Result<XiMatrix> {
    let n = l + m;
    if n == 0 {
        return Err(WalkError::InvalidArgument(
            "Ξ(l, m) needs l + m >= 1".into(),
        ));
    }
    let size = binomial_u128(n as u64, l as u64);
    if size > cap {
        return Err(WalkError::TooLarge { size, cap });
    }
    let p = coin.basis(Basis::P);
    let q = coin.basis(Basis::Q);
    let mut positions = vec![0usize; l];
    let mut total = Mat2::ZERO;
    for rank in 0..size {
        unrank_combination(rank, n, &mut positions);
        let mut word = Mat2::identity();
        let mut next_p = positions.iter().peekable();
        for slot in 0..n {
            let letter = if next_p.peek() == Some(&&slot) {
                next_p.next();
                p
            } else {
                q
            };
            word = word * letter;
        }
        total = total + word;
    }
    Ok(XiMatrix {
        l,
        m,
        matrix: total,
    })
}

/// Writes the `rank`-th `k`-subset of `0..n` (colex order, ascending
/// elements) into `out`, where `k = out.len()`.
fn unrank_combination(mut rank: u128, n: usize, out: &mut [usize]) {
    let k = out.len();
    let mut upper = n;
    for i in (0..k).rev() {
        // Largest c < upper with C(c, i + 1) <= rank.
        let mut c = upper - 1;
        while binomial_u128(c as u64, i as u64 + 1) > rank {
            c -= 1;
        }
        rank -= binomial_u128(c as u64, i as u64 + 1);
        out[i] = c;
        upper = c;
    }
}

/// Closed form for `Ξ(l, m)` when `abcd != 0`.
///
/// For `l, m >= 1` the coefficients over `P, Q, R, S` are
/// `a^l conj(a)^m Δ^m Σ_γ (-|b|²/|a|²)^γ C(l-1, γ-1) C(m-1, γ-1) · t_γ`
/// with `t_γ = ((l-γ)/(aγ), (m-γ)/(Δ conj(a) γ), -1/(Δ conj(b)), 1/b)`.
/// The edges are `Ξ(l, 0) = a^{l-1} P` and `Ξ(0, m) = (Δ conj(a))^{m-1} Q`.
pub fn xi_closed_form(l: usize, m: usize, coin: &Coin) -> Result<XiMatrix> {
    coin.require_non_degenerate()?;
    let n = l + m;
    if n == 0 {
        return Err(WalkError::InvalidArgument(
            "Ξ(l, m) needs l + m >= 1".into(),
        ));
    }
    let (a, b, delta) = (coin.a(), coin.b(), coin.delta());
    let matrix = if m == 0 {
        coin.basis(Basis::P).scale(a.powu(l as u32 - 1))
    } else if l == 0 {
        coin.basis(Basis::Q)
            .scale((delta * a.conj()).powu(m as u32 - 1))
    } else {
        let ratio = -b.norm_sqr() / a.norm_sqr();
        let mut sums = [CompensatedSum::default(); 4];
        let r_term = -1.0 / (delta * b.conj());
        let s_term = 1.0 / b;
        for gamma in 1..=l.min(m) {
            let g = gamma as f64;
            let weight = ratio.powi(gamma as i32)
                * binomial(l as i64 - 1, gamma as i64 - 1)
                * binomial(m as i64 - 1, gamma as i64 - 1);
            sums[0].add(weight * (l as f64 - g) / (a * g));
            sums[1].add(weight * (m as f64 - g) / (delta * a.conj() * g));
            sums[2].add(weight * r_term);
            sums[3].add(weight * s_term);
        }
        let prefactor = a.powu(l as u32) * a.conj().powu(m as u32) * delta.powu(m as u32);
        let [p, q, r, s] = sums.map(|sum| prefactor * sum.value());
        coin.basis(Basis::P).scale(p)
            + coin.basis(Basis::Q).scale(q)
            + coin.basis(Basis::R).scale(r)
            + coin.basis(Basis::S).scale(s)
    };
    Ok(XiMatrix { l, m, matrix })
}

/// `P(X_n = k) = |Ξ(l, m) φ|²` with `l = (n - k)/2`, `m = (n + k)/2`,
/// evaluated through [`xi_closed_form`].
pub fn path_distribution(phi: &Qubit, coin: &Coin, n: usize) -> Result<Distribution> {
    coin.require_non_degenerate()?;
    if n == 0 {
        return Err(WalkError::InvalidArgument(
            "path distribution needs n >= 1".into(),
        ));
    }
    let mut pairs = Vec::with_capacity(n + 1);
    for l in 0..=n {
        let m = n - l;
        let k = m as i64 - l as i64;
        pairs.push((k, xi_closed_form(l, m, coin)?.probability(phi)));
    }
    Distribution::from_pairs(n, pairs)
}

/// Scalar for the product of a word of basis letters, reduced with the
/// multiplication table: `B_1 B_2 ... B_j = scalar · B`.
pub fn reduce_word(coin: &Coin, word: &[Basis]) -> Option<(Complex64, Basis)> {
    let (first, rest) = word.split_first()?;
    Some(
        rest.iter()
            .fold((Complex64::new(1.0, 0.0), *first), |(s, x), y| {
                let (t, z) = coin.product(x, *y);
                (s * t, z)
            }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::{distribution, evolve};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unranking_lists_every_subset_once() {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = [0usize; 3];
        for rank in 0..binomial_u128(6, 3) {
            unrank_combination(rank, 6, &mut out);
            assert!(out.windows(2).all(|w| w[0] < w[1]) && out[2] < 6);
            seen.insert(out);
        }
        assert_eq!(seen.len(), 20);
    }

    #[test]
    fn brute_force_three_one() {
        let coin = Coin::symmetric(0.4, 0.1, 1.3);
        let p = coin.basis(Basis::P);
        let q = coin.basis(Basis::Q);
        let expect = p * p * p * q + p * p * q * p + p * q * p * p + q * p * p * p;
        let got = xi_bruteforce(3, 1, &coin, DEFAULT_MAX_ENUM).unwrap();
        assert!(got.matrix.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn brute_force_edges() {
        let coin = Coin::symmetric(0.4, 0.1, 1.3);
        let got = xi_bruteforce(5, 0, &coin, DEFAULT_MAX_ENUM).unwrap();
        let want = coin.basis(Basis::P).scale(coin.a().powu(4));
        assert!(got.matrix.max_abs_diff(&want) < 1e-15);
        let got = xi_bruteforce(1, 1, &coin, DEFAULT_MAX_ENUM).unwrap();
        let want = coin.basis(Basis::R).scale(coin.b()) + coin.basis(Basis::S).scale(coin.c());
        assert!(got.matrix.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn brute_force_respects_cap() {
        let err = xi_bruteforce(10, 10, &Coin::hadamard(), 1000).unwrap_err();
        assert_eq!(
            err,
            WalkError::TooLarge {
                size: 184_756,
                cap: 1000
            }
        );
        assert!(xi_bruteforce(0, 0, &Coin::hadamard(), 10).is_err());
    }

    #[test]
    fn closed_form_edges() {
        let coin = Coin::symmetric(0.7, -0.2, 0.5);
        let got = xi_closed_form(0, 4, &coin).unwrap();
        let want = coin
            .basis(Basis::Q)
            .scale((coin.delta() * coin.a().conj()).powu(3));
        assert!(got.matrix.max_abs_diff(&want) < 1e-15);
        let h = Coin::hadamard();
        let got = xi_closed_form(1, 1, &h).unwrap();
        let want = h.basis(Basis::R).scale(h.b()) + h.basis(Basis::S).scale(h.c());
        assert!(got.matrix.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn closed_form_three_one_coefficients() {
        let h = Coin::hadamard();
        let xi = xi_closed_form(3, 1, &h).unwrap();
        let d = h.decompose(&xi.matrix).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [c(r, 0.0), c(0.0, 0.0), c(r / 2.0, 0.0), c(r / 2.0, 0.0)];
        for (got, want) in d.as_array().iter().zip(expect) {
            assert!((got - want).norm() < 1e-14, "{got} vs {want}");
        }
    }

    #[test]
    fn closed_form_rejects_degenerate() {
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        let id = Coin::new(one, zero, zero, one).unwrap();
        assert!(matches!(
            xi_closed_form(2, 1, &id),
            Err(WalkError::DegenerateCoin { .. })
        ));
        assert!(path_distribution(&Qubit::left(), &id, 3).is_err());
    }

    #[test]
    fn hadamard_rightmost_atom() {
        for n in 1..=20 {
            let d = path_distribution(&Qubit::left(), &Coin::hadamard(), n).unwrap();
            let want = 0.5f64.powi(n as i32);
            assert!((d.prob(n as i64) - want).abs() <= 1e-12 * want);
            assert!((d.total() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn path_matches_evolution_small() {
        let h = Coin::hadamard();
        for n in 1..=10 {
            let path = path_distribution(&Qubit::left(), &h, n).unwrap();
            let direct = distribution(&evolve(&Qubit::left(), &h, n));
            for (k, p) in direct.iter() {
                assert!((p - path.prob(k)).abs() < 1e-12, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn table_reduction_matches_products() {
        let coin = Coin::symmetric(0.1, 0.9, -0.6);
        let word = [Basis::P, Basis::Q, Basis::S, Basis::R, Basis::Q];
        let (s, z) = reduce_word(&coin, &word).unwrap();
        let raw = word
            .iter()
            .fold(Mat2::identity(), |acc, x| acc * coin.basis(*x));
        assert!(raw.max_abs_diff(&coin.basis(z).scale(s)) < 1e-15);
        assert!(reduce_word(&coin, &[]).is_none());
    }
}
