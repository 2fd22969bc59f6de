//! Minimal 2×2 complex matrix algebra.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[Complex64::new(0.0, 0.0); 2]; 2]);

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Mat2([[one, zero], [zero, one]])
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Mat2([[s * m[0][0], s * m[0][1]], [s * m[1][0], s * m[1][1]]])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let d = *self - *other;
        d.0.iter()
            .flat_map(|row| row.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Trace inner product `<A|B> = tr(A* B)`.
pub fn trace_inner(a: &Mat2, b: &Mat2) -> Complex64 {
    (a.adjoint() * *b).trace()
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (l, r) = (&self.0, &rhs.0);
        Mat2([
            [l[0][0] + r[0][0], l[0][1] + r[0][1]],
            [l[1][0] + r[1][0], l[1][1] + r[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let (l, r) = (&self.0, &rhs.0);
        Mat2([
            [l[0][0] - r[0][0], l[0][1] - r[0][1]],
            [l[1][0] - r[1][0], l[1][1] - r[1][1]],
        ])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (l, r) = (&self.0, &rhs.0);
        Mat2([
            [
                l[0][0] * r[0][0] + l[0][1] * r[1][0],
                l[0][0] * r[0][1] + l[0][1] * r[1][1],
            ],
            [
                l[1][0] * r[0][0] + l[1][1] * r[1][0],
                l[1][0] * r[0][1] + l[1][1] * r[1][1],
            ],
        ])
    }
}
