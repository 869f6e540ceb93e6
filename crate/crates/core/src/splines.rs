//! Normalized uniform B-splines centred at the origin.
//!
//! `B_m(α, t)` has degree `m`, knots at `(j − (m+1)/2)·α` for
//! `j = 0…m+1` and forms a partition of unity over integer shifts by `α`.
//! Values come from the truncated-power closed form
//!
//! ```text
//! B_m(α,t) = 1/(m! α^m) · Σ_{j=0}^{m+1} (−1)^j C(m+1,j) (t − knot_j)_+^m
//! ```
//!
//! which is algebraically identical to the Cox–de Boor recursion on a
//! uniform knot vector. It is evaluated at `−|t|` so that only the knots
//! left of the argument contribute.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::numeric::reduce_angle;
use crate::quadrature::PanelRule;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BSpline {
    degree: usize,
    step: f64,
}

/// A polynomial piece of a spline: on `[lo, hi]` the spline equals
/// `Σ_i coeffs[i] · (t − center)^i` with `center` the midpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPiece {
    pub lo: f64,
    pub hi: f64,
    pub coeffs: Vec<f64>,
}

impl PolynomialPiece {
    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let s = t - self.center();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }
}

impl BSpline {
    /// `degree` is the polynomial degree m (a De kernel of order r uses
    /// m = r − 1); `step` is the knot spacing α in (0, π).
    pub fn new(degree: usize, step: f64) -> Result<Self> {
        if !(step > 0.0 && step < PI) {
            return Err(domain(format!("B-spline step must lie in (0, π), got {step}")));
        }
        Ok(Self { degree, step })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Width `(m+1)α` of the support.
    pub fn support_width(&self) -> f64 {
        (self.degree + 1) as f64 * self.step
    }

    pub fn half_width(&self) -> f64 {
        self.support_width() / 2.0
    }

    pub fn knots(&self) -> Vec<f64> {
        (0..=self.degree + 1).map(|j| self.knot(j)).collect()
    }

    fn knot(&self, j: usize) -> f64 {
        (2.0 * j as f64 - (self.degree + 1) as f64) * (self.step / 2.0)
    }

    /// True when one bump fits strictly inside a period.
    pub fn fits_period(&self) -> bool {
        self.support_width() < 2.0 * PI
    }

    fn check_period(&self) -> Result<()> {
        if self.fits_period() {
            Ok(())
        } else {
            Err(Error::SupportExceedsPeriod { width: self.support_width() })
        }
    }

    /// Σ (−1)^j C(m+1,j) (s − knot_j)^m over knots left of s = −|t|;
    /// `None` for the degree-0 box.
    fn truncated_power_sum(&self, t: f64) -> Option<f64> {
        let m = self.degree;
        if m == 0 {
            return None;
        }
        let s = -t.abs();
        let mut acc = 0.0;
        let mut binom = 1.0;
        for j in 0..=m + 1 {
            let x = s - self.knot(j);
            if x <= 0.0 {
                break;
            }
            let term = binom * x.powi(m as i32);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
            binom = binom * (m + 1 - j) as f64 / (j + 1) as f64;
        }
        Some(acc)
    }

    fn box_value(&self, t: f64) -> f64 {
        let h = self.step / 2.0;
        let a = t.abs();
        if a < h {
            1.0
        } else if a == h {
            0.5
        } else {
            0.0
        }
    }

    /// Non-periodic value `B_m(α, t)`. The degree-0 box takes the jump
    /// midpoint 1/2 at `|t| = α/2`.
    pub fn eval(&self, t: f64) -> f64 {
        if t.abs() >= self.half_width() && self.degree > 0 {
            return 0.0;
        }
        match self.truncated_power_sum(t) {
            None => self.box_value(t),
            Some(sum) => sum / (factorial(self.degree) * self.step.powi(self.degree as i32)),
        }
    }

    /// Unit-mass version `(1/α)·B_m(α, t)`, divided in a single step.
    pub fn density(&self, t: f64) -> f64 {
        if t.abs() >= self.half_width() && self.degree > 0 {
            return 0.0;
        }
        match self.truncated_power_sum(t) {
            None => self.box_value(t) / self.step,
            Some(sum) => {
                sum / (factorial(self.degree) * self.step.powi(self.degree as i32 + 1))
            }
        }
    }

    /// 2π-periodic continuation of [`eval`](Self::eval).
    pub fn eval_periodic(&self, t: f64) -> Result<f64> {
        self.check_period()?;
        Ok(self.eval(reduce_angle(t)))
    }

    /// 2π-periodic continuation of [`density`](Self::density).
    pub fn density_periodic(&self, t: f64) -> Result<f64> {
        self.check_period()?;
        Ok(self.density(reduce_angle(t)))
    }

    /// The spline one degree higher: `B_{m+1} = (1/α) B_m ∗ B_0`.
    pub fn raise_order(&self) -> Result<BSpline> {
        let next = BSpline { degree: self.degree + 1, step: self.step };
        next.check_period()?;
        Ok(next)
    }

    /// Numerically evaluates `(1/α) ∫_{−α/2}^{α/2} B_m(α, t−u) du`, with
    /// panels split at every knot of the shifted spline.
    pub fn box_convolution(&self, t: f64, rule: &PanelRule) -> f64 {
        let h = self.step / 2.0;
        let breaks: Vec<f64> = self.knots().into_iter().map(|k| t - k).collect();
        rule.integrate(-h, h, &breaks, |u| self.eval(t - u)) / self.step
    }

    /// Cosine coefficient `a_k` of `(1/α) B_m(α,·)` over one period:
    /// `1/π` for k = 0 and `(1/π)·sinc(kα/2)^{m+1}` otherwise.
    pub fn fourier_coefficient(&self, k: u64) -> Result<f64> {
        self.check_period()?;
        if k == 0 {
            return Ok(1.0 / PI);
        }
        let s = crate::factors::sinc_unchecked(k as f64 * self.step / 2.0);
        Ok(s.powi(self.degree as i32 + 1) / PI)
    }

    /// The spline as `m + 1` polynomial pieces between consecutive knots.
    ///
    /// Pieces right of the origin are mirrored from the left ones, which
    /// avoids the cancellation of expanding every truncated power.
    pub fn pieces(&self) -> Vec<PolynomialPiece> {
        let m = self.degree;
        let norm = factorial(m) * self.step.powi(m as i32);
        let mut binom_row = vec![1.0; m + 2];
        for j in 1..=m + 1 {
            binom_row[j] = binom_row[j - 1] * (m + 2 - j) as f64 / j as f64;
        }
        let left_piece = |i: usize| {
            let lo = self.knot(i);
            let hi = self.knot(i + 1);
            let center = 0.5 * (lo + hi);
            let mut coeffs = vec![0.0; m + 1];
            for (j, &bj) in binom_row.iter().enumerate().take(i + 1) {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                // (center − knot_j + s)^m expanded in s
                let d = center - self.knot(j);
                let mut c_mi = 1.0;
                for (p, coeff) in coeffs.iter_mut().enumerate() {
                    *coeff += sign * bj * c_mi * d.powi((m - p) as i32) / norm;
                    c_mi = c_mi * (m - p) as f64 / (p + 1) as f64;
                }
            }
            PolynomialPiece { lo, hi, coeffs }
        };
        (0..=m)
            .map(|i| {
                let mirror = m - i;
                if i <= mirror {
                    left_piece(i)
                } else {
                    let p = left_piece(mirror);
                    let coeffs = p
                        .coeffs
                        .iter()
                        .enumerate()
                        .map(|(q, &c)| if q % 2 == 0 { c } else { -c })
                        .collect();
                    PolynomialPiece { lo: -p.hi, hi: -p.lo, coeffs }
                }
            })
            .collect()
    }
}

pub(crate) fn factorial(m: usize) -> f64 {
    (1..=m).fold(1.0, |acc, i| acc * i as f64)
}

/// Free-function form of [`BSpline::eval`].
pub fn bspline_eval(spline: &BSpline, t: f64) -> f64 {
    spline.eval(t)
}

/// Free-function form of [`BSpline::eval_periodic`].
pub fn bspline_eval_periodic(spline: &BSpline, t: f64) -> Result<f64> {
    spline.eval_periodic(t)
}

/// Free-function form of [`BSpline::raise_order`].
pub fn raise_order(spline: &BSpline) -> Result<BSpline> {
    spline.raise_order()
}

/// Free-function form of [`BSpline::fourier_coefficient`].
pub fn bspline_fourier_coefficient(spline: &BSpline, k: u64) -> Result<f64> {
    spline.fourier_coefficient(k)
}
