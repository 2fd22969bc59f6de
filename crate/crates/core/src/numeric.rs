//! Small numerical helpers shared by the closed-form evaluators.

use num_complex::Complex64;

/// Binomial coefficient as a float with `C(x, y) = 0` whenever `y < 0` or
/// `y > x`, and `C(0, 0) = 1`. This makes the truncated sums self-limiting.
pub fn binomial(x: i64, y: i64) -> f64 {
    if y < 0 || x < 0 || y > x {
        return 0.0;
    }
    let y = y.min(x - y);
    let mut acc = 1.0f64;
    for i in 0..y {
        acc = acc * (x - i) as f64 / (i + 1) as f64;
    }
    // Below 2^53 the result is an integer up to rounding noise.
    if acc < 9.007_199_254_740_992e15 {
        acc.round()
    } else {
        acc
    }
}

/// Exact binomial in integers, saturating at `u128::MAX`.
pub fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Neumaier-compensated running sum of complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
