//! Scalar special functions and compensated accumulation.

use num_complex::Complex64;

/// Unnormalized sinc, `sin(x)/x`, with the removable point filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Lineshape `sinc²(θ/2)`.
pub fn sinc2_half(theta: f64) -> f64 {
    let s = sinc(0.5 * theta);
    s * s
}

/// Analytic derivative `d/dθ [sinc²(θ/2)] = sin x (x cos x − sin x)/x³`, `x = θ/2`.
///
/// For |x| < 1 the bracket is summed as a series to avoid cancellation.
pub fn sinc2_half_derivative(theta: f64) -> f64 {
    let x = 0.5 * theta;
    if x.abs() < 1.0 {
        // (x cos x − sin x)/x³ = Σ_{n≥1} (−1)ⁿ 2n x^{2n−2} / (2n+1)!
        let x2 = x * x;
        let mut term = -1.0 / 3.0;
        let mut acc = term;
        for n in 2..=12 {
            let n = n as f64;
            term *= -x2 * n / ((n - 1.0) * 2.0 * n * (2.0 * n + 1.0));
            acc += term;
        }
        x.sin() * acc
    } else {
        let (s, c) = x.sin_cos();
        s * (x * c - s) / (x * x * x)
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub const fn new() -> Self {
        Self {
            sum: 0.0,
            compensation: 0.0,
        }
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another partial sum in, keeping both compensation terms.
    #[inline]
    pub fn merge(&mut self, other: &NeumaierSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of a slice in ascending index order.
pub fn compensated_sum(values: &[f64]) -> f64 {
    values.iter().copied().collect::<NeumaierSum>().value()
}

/// Compensated complex accumulator (independent real and imaginary parts).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub const fn new() -> Self {
        Self {
            re: NeumaierSum::new(),
            im: NeumaierSum::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn merge(&mut self, other: &ComplexSum) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0), 1.0);
        assert!(sinc(std::f64::consts::PI).abs() < 1e-16);
        assert!((sinc(1e-5) - (1e-5f64).sin() / 1e-5).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for &theta in &[-7.0, -2.606, -0.5, 0.03, 0.2, 1.0, 2.606, 5.0, 11.0] {
            let h = 1e-5;
            let fd = (sinc2_half(theta + h) - sinc2_half(theta - h)) / (2.0 * h);
            let an = sinc2_half_derivative(theta);
            assert!((fd - an).abs() < 1e-9, "theta={theta}: {fd} vs {an}");
        }
    }

    #[test]
    fn derivative_series_branch_is_continuous() {
        // both sides of the branch switch at x = 1
        let theta: f64 = 2.0 - 1e-9;
        let x = 0.5 * theta;
        let closed = x.sin() * (x * x.cos() - x.sin()) / (x * x * x);
        assert!((sinc2_half_derivative(theta) - closed).abs() < 1e-14);
        // leading behaviour −θ/6
        assert!((sinc2_half_derivative(1e-6) / (-1e-6 / 6.0) - 1.0).abs() < 1e-11);
        assert_eq!(sinc2_half_derivative(0.0), 0.0);
    }

    #[test]
    fn neumaier_recovers_cancelled_mass() {
        let values = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(&values), 2.0);
        let mut a: NeumaierSum = [1e16, 1.0].into_iter().collect();
        let b: NeumaierSum = [-1e16, 1.0].into_iter().collect();
        a.merge(&b);
        assert_eq!(a.value(), 2.0);
    }
}
