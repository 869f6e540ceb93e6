//! Summation kernels: the Poisson kernel and the De kernels.
//!
//! Both are normalized so that `(1/π)·P(r,·)` and `De(r,α,·)` carry unit
//! mass over one period, i.e.
//!
//! ```text
//! P(r,u)     = ½(1−r²)/(1−2r cos u + r²) = ½ + Σ r^k cos ku
//! De(r,α,t)  = (1/π)(½ + Σ σ_k(r,α) cos kt) = (1/α)·B_{r−1}(α,t), periodized
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::factors::{sigma_tail_sum, validate_sigma, FactorFamily};
use crate::numeric::{reduce_angle, CompensatedSum};
use crate::splines::BSpline;

/// The De kernel of order `r` and step `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeKernel {
    r: u32,
    alpha: f64,
}

impl DeKernel {
    pub fn new(r: u32, alpha: f64) -> Result<Self> {
        validate_sigma(r, alpha)?;
        Ok(Self { r, alpha })
    }

    pub fn order(&self) -> u32 {
        self.r
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The B-spline `B_{r−1}(α,·)` this kernel is a scaled copy of.
    pub fn spline(&self) -> BSpline {
        BSpline::new(self.r as usize - 1, self.alpha).expect("validated step")
    }

    pub fn factors(&self) -> FactorFamily {
        FactorFamily::SigmaRAlpha { r: self.r, alpha: self.alpha }
    }

    /// Half-width `rα/2` of the support.
    pub fn half_width(&self) -> f64 {
        self.r as f64 * self.alpha / 2.0
    }

    /// Closed-form value `(1/α)·B_{r−1}(α, t)`, 2π-periodic. When the
    /// support is wider than a period the overlapping shifts are summed.
    pub fn closed(&self, t: f64) -> f64 {
        let spline = self.spline();
        let t = reduce_angle(t);
        let (lo, hi) = self.shift_range(t);
        if lo == 0 && hi == 0 {
            return spline.density(t);
        }
        (lo..=hi)
            .map(|j| spline.density(t - 2.0 * PI * j as f64))
            .sum()
    }

    fn shift_range(&self, t: f64) -> (i64, i64) {
        let h = self.half_width();
        let lo = ((t - h) / (2.0 * PI)).ceil() as i64;
        let hi = ((t + h) / (2.0 * PI)).floor() as i64;
        (lo.min(0), hi.max(0))
    }

    /// Knots of every periodic copy that fall in [−π, π].
    pub fn breakpoints(&self) -> Vec<f64> {
        let knots = self.spline().knots();
        let copies = (self.half_width() / (2.0 * PI)).ceil() as i64 + 1;
        let mut out: Vec<f64> = (-copies..=copies)
            .flat_map(|j| knots.iter().map(move |k| k + 2.0 * PI * j as f64))
            .filter(|x| (-PI..=PI).contains(x))
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }

    /// Truncated series `(1/π)(½ + Σ_{k=1}^{N} σ_k(r,α) cos kt)`.
    pub fn spectral(&self, t: f64, n: usize) -> f64 {
        let family = self.factors();
        let mut acc = CompensatedSum::new();
        acc.add(0.5);
        for k in 1..=n {
            acc.add(family.factor(k as i64) * (k as f64 * t).cos());
        }
        acc.value() / PI
    }

    /// Uniform bound `(1/π)·Σ_{k>N} (2/(kα))^r` on `|spectral(N) − closed|`;
    /// infinite for r = 1.
    pub fn tail_bound(&self, n: usize) -> f64 {
        sigma_tail_sum(self.r, self.alpha, n, 0) / PI
    }
}

/// A summation kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kernel", rename_all = "snake_case")]
pub enum KernelSpec {
    Poisson { r: f64 },
    De(DeKernel),
}

impl KernelSpec {
    pub fn poisson(r: f64) -> Result<Self> {
        check_poisson(r)?;
        Ok(KernelSpec::Poisson { r })
    }

    pub fn de(r: u32, alpha: f64) -> Result<Self> {
        Ok(KernelSpec::De(DeKernel::new(r, alpha)?))
    }

    /// Unit-mass kernel value: `(1/π)·P(r,t)` or `De(r,α,t)`.
    pub fn density(&self, t: f64) -> f64 {
        match self {
            KernelSpec::Poisson { r } => poisson_closed(*r, t) / PI,
            KernelSpec::De(de) => de.closed(t),
        }
    }

    /// Points in [−π, π] where the kernel is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            KernelSpec::Poisson { .. } => Vec::new(),
            KernelSpec::De(de) => de.breakpoints(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            KernelSpec::Poisson { r } => format!("poisson(r={r})"),
            KernelSpec::De(de) => format!("de(r={},alpha={})", de.r, de.alpha),
        }
    }
}

fn check_poisson(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("Poisson kernel needs 0 < r < 1, got {r}")))
    }
}

fn poisson_closed(r: f64, u: f64) -> f64 {
    0.5 * (1.0 - r * r) / (1.0 - 2.0 * r * u.cos() + r * r)
}

/// `P(r,u) = ½(1−r²)/(1−2r cos u + r²)`.
pub fn poisson_kernel(r: f64, u: f64) -> Result<f64> {
    check_poisson(r)?;
    Ok(poisson_closed(r, u))
}

/// `½ + Σ_{k=1}^{N} r^k cos ku`.
pub fn poisson_kernel_spectral(r: f64, u: f64, n: usize) -> Result<f64> {
    check_poisson(r)?;
    let mut acc = CompensatedSum::new();
    acc.add(0.5);
    let mut rk = 1.0;
    for k in 1..=n {
        rk *= r;
        if rk == 0.0 {
            break;
        }
        acc.add(rk * (k as f64 * u).cos());
    }
    Ok(acc.value())
}

/// Geometric tail bound `r^{N+1}/(1−r)` for [`poisson_kernel_spectral`].
pub fn poisson_tail_bound(r: f64, n: usize) -> f64 {
    r.powi((n + 1).min(i32::MAX as usize) as i32) / (1.0 - r)
}

/// Free-function form of [`DeKernel::spectral`].
pub fn de_kernel_spectral(kernel: &DeKernel, t: f64, n: usize) -> f64 {
    kernel.spectral(t, n)
}

/// Free-function form of [`DeKernel::closed`].
pub fn de_kernel_closed(kernel: &DeKernel, t: f64) -> f64 {
    kernel.closed(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::PanelRule;

    #[test]
    fn poisson_examples() {
        assert!((poisson_kernel(0.5, 0.0).unwrap() - 1.5).abs() < 1e-15);
        assert!((poisson_kernel(0.5, PI).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        for &u in &[0.1, 1.0, 2.5] {
            assert_eq!(poisson_kernel(0.7, u).unwrap(), poisson_kernel(0.7, -u).unwrap());
        }
        assert!(poisson_kernel(1.0, 0.0).is_err());
        assert!(poisson_kernel(-0.1, 0.0).is_err());
    }

    #[test]
    fn poisson_spectral_examples() {
        assert!((poisson_kernel_spectral(0.5, 0.0, 50).unwrap() - 1.5).abs() < 1e-15);
        assert_eq!(poisson_kernel_spectral(0.5, 0.0, 0).unwrap(), 0.5);
        let u = PI / 3.0;
        let d = poisson_kernel_spectral(0.9, u, 200).unwrap() - poisson_kernel(0.9, u).unwrap();
        assert!(d.abs() <= poisson_tail_bound(0.9, 200));
    }

    #[test]
    fn de_spectral_examples() {
        let k2 = DeKernel::new(2, PI / 2.0).unwrap();
        assert!(k2.spectral(PI, 4096).abs() < 1e-4);
        assert!((k2.spectral(0.0, 4096) - 2.0 / PI).abs() < 1e-4);
        let k1 = DeKernel::new(1, PI / 2.0).unwrap();
        assert!((k1.spectral(0.0, 100_000) - 2.0 / PI).abs() < 1e-3);
    }

    #[test]
    fn de_closed_examples() {
        let k1 = DeKernel::new(1, 0.5).unwrap();
        assert_eq!(k1.closed(0.1), 2.0);
        assert_eq!(k1.closed(0.25), 1.0);
        let k2 = DeKernel::new(2, 0.5).unwrap();
        assert_eq!(k2.closed(0.25), 1.0);
        assert_eq!(k2.closed(3.0), 0.0);
        assert_eq!(k2.closed(2.0 * PI), 2.0);
    }

    #[test]
    fn spectral_tracks_closed_within_tail_bound() {
        for r in 2..=5 {
            for &alpha in &[PI / 8.0, PI / 4.0, PI / 2.0] {
                let de = DeKernel::new(r, alpha).unwrap();
                let bound = de.tail_bound(1024) + 1e-10;
                for i in 0..41 {
                    let t = -PI + 2.0 * PI * i as f64 / 40.0;
                    let d = (de.spectral(t, 1024) - de.closed(t)).abs();
                    assert!(d <= bound, "r={r} α={alpha} t={t}: {d} > {bound}");
                }
            }
        }
    }

    #[test]
    fn wide_kernels_sum_their_periodic_copies() {
        // support 5π/4 on each side: copies overlap near ±π
        let de = DeKernel::new(5, PI / 2.0).unwrap();
        let b = de.spline();
        let t = 0.9 * PI;
        let want = b.density(t) + b.density(t - 2.0 * PI);
        assert!((de.closed(t) - want).abs() < 1e-15);
        assert!(b.density(t - 2.0 * PI) > 0.0);
        assert!((de.spectral(t, 4096) - de.closed(t)).abs() < de.tail_bound(4096) + 1e-10);
    }

    #[test]
    fn kernels_have_unit_mass() {
        let rule = PanelRule::new(16).unwrap();
        for spec in [
            KernelSpec::de(1, 0.4).unwrap(),
            KernelSpec::de(3, PI / 4.0).unwrap(),
            KernelSpec::de(5, PI / 2.0).unwrap(),
            KernelSpec::poisson(0.5).unwrap(),
            KernelSpec::poisson(0.9).unwrap(),
        ] {
            let mass =
                rule.integrate_refined(-PI, PI, &spec.breakpoints(), 0.05, |t| spec.density(t));
            assert!((mass - 1.0).abs() < 1e-10, "{}: {mass}", spec.label());
        }
    }

    #[test]
    fn invalid_de_is_rejected() {
        assert!(DeKernel::new(0, 0.5).is_err());
        assert!(DeKernel::new(2, PI).is_err());
        assert!(KernelSpec::poisson(1.2).is_err());
    }
}
