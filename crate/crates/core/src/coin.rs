//! Coins, initial qubits and the `P`/`Q`/`R`/`S` chirality basis.
//!
//! A coin `U = [[a, b], [c, d]]` splits as `U = P + Q` where `P` keeps the
//! first row and `Q` the second. Together with `R` (row `(c, d)` on top) and
//! `S` (row `(a, b)` at the bottom) these form an orthonormal basis of the
//! 2×2 complex matrices under `<A|B> = tr(A* B)` whenever `abcd != 0`, and
//! the basis is closed under multiplication up to a scalar.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::matrix::{trace_inner, Mat2};

/// Absolute tolerance applied to each unitarity relation.
pub const UNITARY_TOL: f64 = 1e-10;
/// `|abcd|` below this marks the coin as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-14;
/// Allowed deviation of `|alpha|^2 + |beta|^2` from one.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coin {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    delta: Complex64,
    degenerate: bool,
}

impl Coin {
    /// Validates `[[a, b], [c, d]]` as a unitary coin. Entries are stored as
    /// given; nothing is renormalized.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let delta = a * d - b * c;
        let relations = [
            (
                "|a|^2 + |b|^2 = 1",
                (a.norm_sqr() + b.norm_sqr() - 1.0).abs(),
            ),
            (
                "|c|^2 + |d|^2 = 1",
                (c.norm_sqr() + d.norm_sqr() - 1.0).abs(),
            ),
            (
                "a conj(c) + b conj(d) = 0",
                (a * c.conj() + b * d.conj()).norm(),
            ),
            ("|det U| = 1", (delta.norm() - 1.0).abs()),
            ("c = -det(U) conj(b)", (c + delta * b.conj()).norm()),
            ("d = det(U) conj(a)", (d - delta * a.conj()).norm()),
        ];
        for (relation, residual) in relations {
            if !(residual <= UNITARY_TOL) {
                return Err(WalkError::NonUnitary { relation, residual });
            }
        }
        let degenerate = (a * b * c * d).norm() < DEGENERACY_TOL;
        Ok(Coin {
            a,
            b,
            c,
            d,
            delta,
            degenerate,
        })
    }

    /// `H = [[1, 1], [1, -1]] / sqrt(2)`.
    pub fn hadamard() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Coin::new(h, h, h, -h).expect("Hadamard coin is unitary")
    }

    /// The family `e^{i eta} / sqrt(2) [[e^{i(phi+psi)}, e^{-i(phi-psi)}],
    /// [e^{i(phi-psi)}, -e^{-i(phi+psi)}]]`, unitary for every real triple.
    pub fn symmetric(eta: f64, phi: f64, psi: f64) -> Self {
        let g = Complex64::from_polar(FRAC_1_SQRT_2, eta);
        let a = g * Complex64::from_polar(1.0, phi + psi);
        let b = g * Complex64::from_polar(1.0, -(phi - psi));
        let c = g * Complex64::from_polar(1.0, phi - psi);
        let d = -g * Complex64::from_polar(1.0, -(phi + psi));
        Coin::new(a, b, c, d).expect("symmetric family is unitary")
    }

    /// Builds the coin from `a`, `b` and the determinant, filling in
    /// `c = -det conj(b)` and `d = det conj(a)`.
    pub fn from_first_row(a: Complex64, b: Complex64, delta: Complex64) -> Result<Self> {
        Coin::new(a, b, -delta * b.conj(), delta * a.conj())
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }
    pub fn b(&self) -> Complex64 {
        self.b
    }
    pub fn c(&self) -> Complex64 {
        self.c
    }
    pub fn d(&self) -> Complex64 {
        self.d
    }
    /// Determinant `ad - bc`.
    pub fn delta(&self) -> Complex64 {
        self.delta
    }
    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Errors with [`WalkError::DegenerateCoin`] unless `abcd != 0`.
    pub fn require_non_degenerate(&self) -> Result<()> {
        if self.degenerate {
            Err(WalkError::DegenerateCoin {
                product: (self.a * self.b * self.c * self.d).norm(),
            })
        } else {
            Ok(())
        }
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.a, self.b, self.c, self.d)
    }

    /// Largest residual over the unitarity relations.
    pub fn unitarity_residual(&self) -> f64 {
        let u = self.matrix();
        (u.adjoint() * u).max_abs_diff(&Mat2::identity())
    }

    pub fn basis(&self, label: Basis) -> Mat2 {
        let z = Complex64::new(0.0, 0.0);
        match label {
            Basis::P => Mat2::new(self.a, self.b, z, z),
            Basis::Q => Mat2::new(z, z, self.c, self.d),
            Basis::R => Mat2::new(self.c, self.d, z, z),
            Basis::S => Mat2::new(z, z, self.a, self.b),
        }
    }

    /// `X · Y = scalar · Z` from the multiplication table of the basis.
    pub fn product(&self, x: Basis, y: Basis) -> (Complex64, Basis) {
        use Basis::*;
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        match (x, y) {
            (P, P) => (a, P),
            (P, Q) => (b, R),
            (P, R) => (a, R),
            (P, S) => (b, P),
            (Q, P) => (c, S),
            (Q, Q) => (d, Q),
            (Q, R) => (c, Q),
            (Q, S) => (d, S),
            (R, P) => (c, P),
            (R, Q) => (d, R),
            (R, R) => (c, R),
            (R, S) => (d, P),
            (S, P) => (a, S),
            (S, Q) => (b, Q),
            (S, R) => (a, Q),
            (S, S) => (b, S),
        }
    }

    /// Gram matrix `G[i][j] = <B_i|B_j>` of the basis in `P, Q, R, S` order.
    pub fn gram(&self) -> [[Complex64; 4]; 4] {
        let mut g = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (i, x) in Basis::ALL.iter().enumerate() {
            for (j, y) in Basis::ALL.iter().enumerate() {
                g[i][j] = trace_inner(&self.basis(*x), &self.basis(*y));
            }
        }
        g
    }

    /// Coefficients of `m` over the orthonormal basis, via the trace inner product.
    pub fn decompose(&self, m: &Mat2) -> Result<BasisDecomposition> {
        self.require_non_degenerate()?;
        let coef = |label| trace_inner(&self.basis(label), m);
        Ok(BasisDecomposition {
            p: coef(Basis::P),
            q: coef(Basis::Q),
            r: coef(Basis::R),
            s: coef(Basis::S),
        })
    }

    /// `a alpha conj(b beta) + conj(a alpha) b beta`, the coin/qubit
    /// interference term; real by construction.
    pub fn interference(&self, phi: &Qubit) -> f64 {
        let z = self.a * phi.alpha * (self.b * phi.beta).conj();
        (z + z.conj()).re
    }

    /// Complex-valued version of [`Coin::interference`], for evaluators that
    /// check the imaginary residue themselves.
    pub(crate) fn interference_complex(&self, phi: &Qubit) -> Complex64 {
        let z = self.a * phi.alpha * (self.b * phi.beta).conj();
        z + z.conj()
    }
}

impl fmt::Display for Coin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    P,
    Q,
    R,
    S,
}

impl Basis {
    pub const ALL: [Basis; 4] = [Basis::P, Basis::Q, Basis::R, Basis::S];
}

/// Coefficients `(p, q, r, s)` of a matrix over `{P, Q, R, S}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisDecomposition {
    pub p: Complex64,
    pub q: Complex64,
    pub r: Complex64,
    pub s: Complex64,
}

impl BasisDecomposition {
    pub fn reconstruct(&self, coin: &Coin) -> Mat2 {
        coin.basis(Basis::P).scale(self.p)
            + coin.basis(Basis::Q).scale(self.q)
            + coin.basis(Basis::R).scale(self.r)
            + coin.basis(Basis::S).scale(self.s)
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.p, self.q, self.r, self.s]
    }
}

/// Initial chirality state `(alpha, beta)` with unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Qubit {
    alpha: Complex64,
    beta: Complex64,
}

impl Qubit {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if !((norm - 1.0).abs() <= NORM_TOL) {
            return Err(WalkError::NotNormalized { norm });
        }
        Ok(Qubit { alpha, beta })
    }

    /// `(1, 0)`: left chirality.
    pub fn left() -> Self {
        Qubit {
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
        }
    }

    /// `(0, 1)`: right chirality.
    pub fn right() -> Self {
        Qubit {
            alpha: Complex64::new(0.0, 0.0),
            beta: Complex64::new(1.0, 0.0),
        }
    }

    /// `(1, i) / sqrt(2)`, which gives a symmetric Hadamard walk.
    pub fn symmetric() -> Self {
        Qubit {
            alpha: Complex64::new(FRAC_1_SQRT_2, 0.0),
            beta: Complex64::new(0.0, FRAC_1_SQRT_2),
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }
    pub fn beta(&self) -> Complex64 {
        self.beta
    }
    pub fn as_vector(&self) -> [Complex64; 2] {
        [self.alpha, self.beta]
    }

    /// `|alpha|^2 - |beta|^2`.
    pub fn imbalance(&self) -> f64 {
        self.alpha.norm_sqr() - self.beta.norm_sqr()
    }
}
