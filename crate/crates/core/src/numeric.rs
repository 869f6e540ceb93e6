//! Small numeric helpers shared by the evaluation paths.

use std::f64::consts::PI;

/// Kahan–Babuška–Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Reduces `t` into the fundamental interval [−π, π).
pub fn reduce_angle(t: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let r = t - two_pi * ((t + PI) / two_pi).floor();
    // rounding can land exactly on +π
    if r >= PI {
        r - two_pi
    } else {
        r
    }
}

/// Left-closed uniform grid t_j = −π + 2πj/M, j = 0…M−1.
pub fn periodic_grid(m: usize) -> Vec<f64> {
    (0..m)
        .map(|j| -PI + 2.0 * PI * j as f64 / m as f64)
        .collect()
}
