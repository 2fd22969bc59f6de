use std::f64::consts::{FRAC_PI_2, TAU};

use proptest::prelude::*;
use qwalk::asymptotics::{limit_moment, LimitLaw};
use qwalk::coin::{Basis, Coin, Qubit};
use qwalk::evolve::{distribution, evolve, trajectory};
use qwalk::matrix::Mat2;
use qwalk::moments::{empirical_moment, moment_closed_form, MomentRequest};
use qwalk::pathsum::{xi_bruteforce, xi_closed_form, DEFAULT_MAX_ENUM};
use qwalk::sample::{random_non_degenerate_coin, random_qubit, rng};
use qwalk::Complex64;

fn arb_coin() -> impl Strategy<Value = Coin> {
    (0.15..FRAC_PI_2 - 0.15, 0.0..TAU, 0.0..TAU, 0.0..TAU).prop_map(|(theta, pa, pb, pd)| {
        Coin::from_first_row(
            Complex64::from_polar(theta.cos(), pa),
            Complex64::from_polar(theta.sin(), pb),
            Complex64::from_polar(1.0, pd),
        )
        .unwrap()
    })
}

fn arb_qubit() -> impl Strategy<Value = Qubit> {
    (0.0..=1.0f64, 0.0..TAU, 0.0..TAU).prop_map(|(u, pa, pb)| {
        Qubit::new(
            Complex64::from_polar(u.sqrt(), pa),
            Complex64::from_polar((1.0 - u).sqrt(), pb),
        )
        .unwrap()
    })
}

fn arb_complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn arb_matrix() -> impl Strategy<Value = Mat2> {
    (arb_complex(), arb_complex(), arb_complex(), arb_complex())
        .prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructed_coins_are_unitary(coin in arb_coin()) {
        prop_assert!(coin.unitarity_residual() < 1e-12);
        let (a, b, c, d, delta) = (coin.a(), coin.b(), coin.c(), coin.d(), coin.delta());
        prop_assert!((a.norm_sqr() + b.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((c.norm_sqr() + d.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((a * c.conj() + b * d.conj()).norm() < 1e-12);
        prop_assert!((c + delta * b.conj()).norm() < 1e-12);
        prop_assert!((d - delta * a.conj()).norm() < 1e-12);
    }

    #[test]
    fn symmetric_family_is_unitary(eta in -10.0..10.0f64, phi in -10.0..10.0f64, psi in -10.0..10.0f64) {
        let coin = Coin::symmetric(eta, phi, psi);
        prop_assert!(coin.unitarity_residual() < 1e-12);
        prop_assert!(!coin.is_degenerate());
    }

    #[test]
    fn basis_is_orthonormal(coin in arb_coin()) {
        for (i, row) in coin.gram().iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                let id = if i == j { 1.0 } else { 0.0 };
                prop_assert!((g - id).norm() < 1e-12);
            }
        }
        let u = coin.basis(Basis::P) + coin.basis(Basis::Q);
        prop_assert!(u.max_abs_diff(&coin.matrix()) == 0.0);
    }

    #[test]
    fn table_matches_products(coin in arb_coin()) {
        for x in Basis::ALL {
            for y in Basis::ALL {
                let (s, z) = coin.product(x, y);
                let raw = coin.basis(x) * coin.basis(y);
                prop_assert!(raw.max_abs_diff(&coin.basis(z).scale(s)) < 1e-12);
            }
        }
    }

    #[test]
    fn decomposition_reconstructs(coin in arb_coin(), m in arb_matrix()) {
        let d = coin.decompose(&m).unwrap();
        prop_assert!(d.reconstruct(&coin).max_abs_diff(&m) <= 1e-12);
    }

    #[test]
    fn evolution_is_linear_in_phi(coin in arb_coin(), phi in arb_qubit(), n in 0usize..40) {
        let whole = evolve(&phi, &coin, n);
        let left = evolve(&Qubit::left(), &coin, n);
        let right = evolve(&Qubit::right(), &coin, n);
        for k in whole.positions() {
            let [wl, wr] = whole.amplitude(k);
            let [ll, lr] = left.amplitude(k);
            let [rl, rr] = right.amplitude(k);
            prop_assert!((wl - (phi.alpha() * ll + phi.beta() * rl)).norm() < 1e-12);
            prop_assert!((wr - (phi.alpha() * lr + phi.beta() * rr)).norm() < 1e-12);
        }
    }

    #[test]
    fn parity_and_support(coin in arb_coin(), phi in arb_qubit(), n in 0usize..60) {
        let dist = distribution(&evolve(&phi, &coin, n));
        let ni = n as i64;
        for (k, p) in dist.iter() {
            if (k - ni).rem_euclid(2) != 0 {
                prop_assert_eq!(p, 0.0);
            }
        }
        prop_assert_eq!(dist.prob(ni + 1), 0.0);
        prop_assert_eq!(dist.prob(-ni - 2), 0.0);
        prop_assert!((dist.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_xi_matches_enumeration(coin in arb_coin(), l in 0usize..7, m in 0usize..7) {
        prop_assume!(l + m >= 1);
        let brute = xi_bruteforce(l, m, &coin, DEFAULT_MAX_ENUM).unwrap();
        let closed = xi_closed_form(l, m, &coin).unwrap();
        prop_assert!(brute.matrix.max_abs_diff(&closed.matrix) < 1e-10);
    }

    /// Moments see φ only through |α|² - |β|² and the interference term:
    /// reflecting the relative phase about the coin's phase leaves both fixed.
    #[test]
    fn moments_depend_on_two_qubit_invariants(
        coin in arb_coin(),
        u in 0.0..=1.0f64,
        pa in 0.0..TAU,
        rel in 0.0..TAU,
        global in 0.0..TAU,
        n in 1usize..40,
        order in 1u32..6,
    ) {
        let anchor = (coin.a() * coin.b().conj()).arg();
        let make = |rel: f64, g: f64| {
            Qubit::new(
                Complex64::from_polar(u.sqrt(), pa + g),
                Complex64::from_polar((1.0 - u).sqrt(), pa + g - rel),
            )
            .unwrap()
        };
        let phi = make(rel, 0.0);
        let twin = make(-2.0 * anchor - rel, global);
        prop_assert!((coin.interference(&phi) - coin.interference(&twin)).abs() < 1e-12);
        let m1 = moment_closed_form(&MomentRequest::new(n, order, coin, phi)).unwrap();
        let m2 = moment_closed_form(&MomentRequest::new(n, order, coin, twin)).unwrap();
        let scale = (n as f64).powi(order as i32).max(1.0);
        prop_assert!((m1 - m2).abs() <= 1e-10 * scale);
        let e1 = empirical_moment(&distribution(&evolve(&phi, &coin, n)), order);
        let e2 = empirical_moment(&distribution(&evolve(&twin, &coin, n)), order);
        prop_assert!((e1 - e2).abs() <= 1e-10 * scale);
    }

    #[test]
    fn closed_form_moment_matches_simulation(coin in arb_coin(), phi in arb_qubit(), n in 1usize..120, order in 1u32..5) {
        let closed = moment_closed_form(&MomentRequest::new(n, order, coin, phi)).unwrap();
        let sim = empirical_moment(&distribution(&evolve(&phi, &coin, n)), order);
        prop_assert!((closed - sim).abs() <= 1e-8 * (n as f64).powi(order as i32).max(1.0));
    }

    #[test]
    fn limit_density_normalized_and_nonnegative(coin in arb_coin(), phi in arb_qubit()) {
        let law = LimitLaw::new(&coin, &phi).unwrap();
        prop_assert!((law.total_mass().unwrap() - 1.0).abs() < 1e-8);
        prop_assert!(law.skew().abs() * law.half_width() <= 1.0 + 1e-12);
        for i in 1..100 {
            let x = law.half_width() * (-1.0 + i as f64 / 50.0);
            prop_assert!(law.density(x).unwrap() >= 0.0);
        }
        for m in [1u32, 2] {
            let closed = law.moment(m).unwrap();
            let quad = law.moment_by_quadrature(m).unwrap();
            prop_assert!((closed - quad).abs() < 1e-7);
        }
    }
}

#[test]
fn norm_conserved_for_many_coins() {
    let mut r = rng(1);
    for _ in 0..50 {
        let coin = random_non_degenerate_coin(&mut r);
        let phi = random_qubit(&mut r);
        for field in trajectory(&phi, &coin).take(501) {
            assert!(
                (field.total_norm() - 1.0).abs() < 1e-12,
                "n = {}",
                field.time()
            );
        }
    }
}

#[test]
fn zero_skew_gives_even_density() {
    let h = Coin::hadamard();
    let law = LimitLaw::new(&h, &Qubit::symmetric()).unwrap();
    assert_eq!(law.skew(), 0.0);
    for i in 0..100 {
        let x = law.half_width() * 0.999 * i as f64 / 100.0;
        assert_eq!(law.density(x).unwrap(), law.density(-x).unwrap());
    }
    let mut r = rng(9);
    for _ in 0..10 {
        let coin = random_non_degenerate_coin(&mut r);
        let phi = qwalk::symmetry::sample_phi_perp(&coin, &mut r);
        let law = LimitLaw::new(&coin, &phi).unwrap();
        assert!(law.skew().abs() < 1e-12);
        for i in 0..50 {
            let x = law.half_width() * 0.99 * i as f64 / 50.0;
            let (p, m) = (law.density(x).unwrap(), law.density(-x).unwrap());
            assert!((p - m).abs() <= 1e-10 * p);
        }
    }
}

#[test]
fn jacobi_orthogonality_under_weight() {
    use qwalk::asymptotics::jacobi::{jacobi_poly, JacobiParams};
    use qwalk::asymptotics::quadrature::integrate;
    let (nu, mu) = (1.0, 3.0);
    let p = |deg: usize, x: f64| jacobi_poly(&JacobiParams::new(nu, mu, deg, x)).unwrap();
    for i in 0..=6 {
        for j in 0..i {
            let ip = integrate(
                |x| (1.0 - x).powf(nu) * (1.0 + x).powf(mu) * p(i, x) * p(j, x),
                -1.0,
                1.0,
                1e-12,
                0.0,
            )
            .unwrap();
            assert!(ip.abs() < 1e-8, "<P_{i}, P_{j}> = {ip}");
        }
        let norm = integrate(
            |x| (1.0 - x).powf(nu) * (1.0 + x).powf(mu) * p(i, x).powi(2),
            -1.0,
            1.0,
            1e-12,
            0.0,
        )
        .unwrap();
        assert!(norm > 0.0);
    }
}

#[test]
fn scaled_moments_approach_limit() {
    let mut r = rng(31);
    let mut coins = vec![Coin::hadamard()];
    coins.extend((0..5).map(|_| random_non_degenerate_coin(&mut r)));
    for coin in &coins {
        let phi = random_qubit(&mut r);
        for m in [1u32, 2] {
            let target = limit_moment(coin, &phi, m).unwrap();
            let gaps: Vec<f64> = [100usize, 400, 1600]
                .iter()
                .map(|&n| {
                    let dist = distribution(&evolve(&phi, coin, n));
                    (empirical_moment(&dist, m) / (n as f64).powi(m as i32) - target).abs()
                })
                .collect();
            assert!(gaps[1] < gaps[0] && gaps[2] < gaps[1], "m = {m}: {gaps:?}");
        }
    }
}

#[test]
fn right_preset_limit_mean_is_positive_drift() {
    let h = Coin::hadamard();
    let mean = limit_moment(&h, &Qubit::right(), 1).unwrap();
    assert!((mean - 0.292_893_218_813_452_5).abs() < 1e-15);
    let law = LimitLaw::new(&h, &Qubit::right()).unwrap();
    assert!((law.moment_by_quadrature(1).unwrap() - mean).abs() < 1e-12);
    let n = 800;
    let drift = empirical_moment(&distribution(&evolve(&Qubit::right(), &h, n)), 1) / n as f64;
    assert!(drift > 0.29 && drift < 0.3);
}
