use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::window::Window;

/// A continuous, compactly supported, piecewise-linear function on the line.
///
/// The function is stored as strictly increasing breakpoints with a complex
/// value per breakpoint, linear in between and identically zero outside
/// `[first, last]`. Continuity forces the first and last value to be zero.
///
/// Because each linear segment traces a straight line in the complex plane,
/// the modulus is convex on every segment, so the sup-norm is attained at a
/// breakpoint and is computed exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    breaks: Vec<f64>,
    values: Vec<Complex64>,
}

impl TestFunction {
    pub fn new(breaks: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if breaks.len() < 2 || breaks.len() != values.len() {
            return Err(Error::InvalidTestFunction(format!(
                "need matching breakpoints/values with at least two entries, got {}/{}",
                breaks.len(),
                values.len()
            )));
        }
        if breaks.iter().any(|x| !x.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidTestFunction("non-finite entry".into()));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTestFunction(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        let zero = Complex64::new(0.0, 0.0);
        if values[0] != zero || *values.last().unwrap() != zero {
            return Err(Error::InvalidTestFunction(
                "value must vanish at the first and last breakpoint".into(),
            ));
        }
        Ok(TestFunction { breaks, values })
    }

    /// The unit hat supported on `[a, c]` with peak 1 at `b`.
    pub fn hat(a: f64, b: f64, c: f64) -> Result<Self> {
        TestFunction::new(
            vec![a, b, c],
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        )
    }

    /// Real-valued trapezoid: 0 at `a`, value `v` on `[b, c]`, back to 0 at `d`.
    pub fn trapezoid(a: f64, b: f64, c: f64, d: f64, v: f64) -> Result<Self> {
        let z = Complex64::new(0.0, 0.0);
        let h = Complex64::new(v, 0.0);
        TestFunction::new(vec![a, b, c, d], vec![z, h, h, z])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let n = self.breaks.len();
        if x <= self.breaks[0] || x >= self.breaks[n - 1] {
            return Complex64::new(0.0, 0.0);
        }
        // index of the segment containing x
        let i = match self.breaks.partition_point(|b| *b <= x) {
            0 => 0,
            k => k - 1,
        };
        let (x0, x1) = (self.breaks[i], self.breaks[i + 1]);
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        let s = (x - x0) / (x1 - x0);
        v0 + (v1 - v0) * s
    }

    /// Exact sup-norm (max of breakpoint moduli).
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus of a segment slope; a Lipschitz constant for the function.
    pub fn lipschitz(&self) -> f64 {
        self.breaks
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, v)| (v[1] - v[0]).norm() / (x[1] - x[0]))
            .fold(0.0, f64::max)
    }

    /// Hull `[s0, s1]` of the support after trimming identically-zero end segments.
    /// Returns `None` for the zero function.
    pub fn support_hull(&self) -> Option<(f64, f64)> {
        let zero = Complex64::new(0.0, 0.0);
        let first = self.values.iter().position(|v| *v != zero)?;
        let last = self.values.iter().rposition(|v| *v != zero).unwrap();
        let lo = self.breaks[first.saturating_sub(1)];
        let hi = self.breaks[(last + 1).min(self.breaks.len() - 1)];
        Some((lo, hi))
    }

    /// Pointwise membership in `F_U = { g : |g| <= 1_U }`: the function vanishes
    /// outside the open window and its sup-norm is at most one.
    pub fn in_family_set(&self, u: &Window) -> bool {
        if self.sup_norm() > 1.0 {
            return false;
        }
        match self.support_hull() {
            None => true,
            Some((lo, hi)) => u.lo <= lo && hi <= u.hi,
        }
    }

    /// Whether the function dominates the indicator of the closed interval `[a, b]`
    /// (real part >= 1 there, checked exactly on the piecewise-linear structure).
    pub fn dominates_indicator(&self, a: f64, b: f64) -> bool {
        let ok = |v: Complex64| v.im == 0.0 && v.re >= 1.0;
        if !ok(self.eval_closed(a)) || !ok(self.eval_closed(b)) {
            return false;
        }
        self.breaks
            .iter()
            .zip(&self.values)
            .filter(|(x, _)| a < **x && **x < b)
            .all(|(_, v)| ok(*v))
    }

    // eval that treats the strict support ends as limits (used for domination checks)
    fn eval_closed(&self, x: f64) -> Complex64 {
        let n = self.breaks.len();
        if x < self.breaks[0] || x > self.breaks[n - 1] {
            return Complex64::new(0.0, 0.0);
        }
        if x == self.breaks[0] {
            return self.values[0];
        }
        if x == self.breaks[n - 1] {
            return self.values[n - 1];
        }
        self.eval(x)
    }

    pub fn translate(&self, t: f64) -> TestFunction {
        TestFunction {
            breaks: self.breaks.iter().map(|x| x + t).collect(),
            values: self.values.clone(),
        }
    }

    /// The reflection `g†(x) = g(-x)`.
    pub fn reflect(&self) -> TestFunction {
        TestFunction {
            breaks: self.breaks.iter().rev().map(|x| -x).collect(),
            values: self.values.iter().rev().copied().collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> TestFunction {
        TestFunction {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &TestFunction) -> TestFunction {
        let mut xs: Vec<f64> = Vec::with_capacity(self.breaks.len() + other.breaks.len());
        xs.extend_from_slice(&self.breaks);
        xs.extend_from_slice(&other.breaks);
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup();
        let values: Vec<Complex64> = xs
            .iter()
            .map(|x| self.eval_closed(*x) + other.eval_closed(*x))
            .collect();
        // union hull ends are zero for both summands
        TestFunction { breaks: xs, values }
    }

    pub fn sub(&self, other: &TestFunction) -> TestFunction {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }
}
