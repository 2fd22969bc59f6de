//! Jacobi polynomials `P^{ν,μ}_n(x)`, orthogonal on `[-1, 1]` under the
//! weight `(1 - x)^ν (1 + x)^μ`.

use crate::error::{Result, WalkError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub nu: f64,
    pub mu: f64,
    pub degree: usize,
    pub x: f64,
}

impl JacobiParams {
    pub fn new(nu: f64, mu: f64, degree: usize, x: f64) -> Self {
        JacobiParams { nu, mu, degree, x }
    }
}

/// Value of `P^{ν,μ}_n(x)` by the three-term recurrence in the degree.
pub fn jacobi_poly(params: &JacobiParams) -> Result<f64> {
    let JacobiParams { nu, mu, degree, x } = *params;
    if !(nu > -1.0 && mu > -1.0) {
        return Err(WalkError::BadParams { nu, mu });
    }
    Ok(jacobi_recurrence(nu, mu, degree, x))
}

/// Unchecked recurrence; callers guarantee `ν, μ > -1`.
///
/// `2(j+1)(j+ν+μ+1)(2j+ν+μ) P_{j+1}
///   = (2j+ν+μ+1)((2j+ν+μ+2)(2j+ν+μ) x + ν² - μ²) P_j
///     - 2(j+ν)(j+μ)(2j+ν+μ+2) P_{j-1}`
pub(crate) fn jacobi_recurrence(nu: f64, mu: f64, degree: usize, x: f64) -> f64 {
    if degree == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = (nu - mu) / 2.0 + (nu + mu + 2.0) * x / 2.0;
    for j in 1..degree {
        let j = j as f64;
        let s = 2.0 * j + nu + mu;
        let lead = 2.0 * (j + 1.0) * (j + nu + mu + 1.0) * s;
        let lin = (s + 1.0) * (s * (s + 2.0) * x + nu * nu - mu * mu);
        let back = 2.0 * (j + nu) * (j + mu) * (s + 2.0);
        let next = (lin * cur - back * prev) / lead;
        prev = cur;
        cur = next;
    }
    cur
}
