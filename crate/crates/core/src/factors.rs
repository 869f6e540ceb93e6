//! Convergence-factor families μ_k and a numerically careful `sinc`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Below this magnitude `sinc` switches to its Maclaurin polynomial.
pub const SINC_SERIES_THRESHOLD: f64 = 1e-4;

/// sin(x)/x with the removable singularity filled by 1.
pub fn sinc(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain(format!("sinc of non-finite argument {x}")));
    }
    Ok(sinc_unchecked(x))
}

#[inline]
pub(crate) fn sinc_unchecked(x: f64) -> f64 {
    if x.abs() < SINC_SERIES_THRESHOLD {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

/// A rule mapping the harmonic index k to a multiplier μ_k.
///
/// Construct through the checked constructors; the variants carry the
/// already-validated parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FactorFamily {
    /// μ_k = 1: the raw partial sum.
    Identity,
    /// μ_k = r^k with 0 < r < 1.
    PoissonAbel { r: f64 },
    /// μ_k = sinc(kα/2)^r with integer r ≥ 1 and 0 < α < π.
    SigmaRAlpha { r: u32, alpha: f64 },
    /// σ_k(1, 2π/(n+1)) for k ≤ n and 0 beyond.
    Lanczos { n: u32 },
}

impl FactorFamily {
    pub fn poisson_abel(r: f64) -> Result<Self> {
        let f = FactorFamily::PoissonAbel { r };
        f.validate()?;
        Ok(f)
    }

    pub fn sigma(r: u32, alpha: f64) -> Result<Self> {
        let f = FactorFamily::SigmaRAlpha { r, alpha };
        f.validate()?;
        Ok(f)
    }

    /// Accepts a real-valued order and rejects anything that is not a
    /// positive integer instead of truncating it.
    pub fn sigma_real_order(r: f64, alpha: f64) -> Result<Self> {
        if !(r.is_finite() && r >= 1.0 && r.fract() == 0.0 && r <= u32::MAX as f64) {
            return Err(domain(format!(
                "sigma factors need a positive integer order r, got {r}"
            )));
        }
        Self::sigma(r as u32, alpha)
    }

    pub fn lanczos(n: u32) -> Result<Self> {
        let f = FactorFamily::Lanczos { n };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FactorFamily::Identity => Ok(()),
            FactorFamily::PoissonAbel { r } => {
                if r > 0.0 && r < 1.0 {
                    Ok(())
                } else {
                    Err(domain(format!("Poisson–Abel needs 0 < r < 1, got {r}")))
                }
            }
            FactorFamily::SigmaRAlpha { r, alpha } => validate_sigma(r, alpha),
            FactorFamily::Lanczos { n } => {
                if n >= 1 {
                    Ok(())
                } else {
                    Err(domain("Lanczos factors need n ≥ 1"))
                }
            }
        }
    }

    /// μ_k. Depends only on |k|; μ_0 = 1 for every family.
    pub fn factor(&self, k: i64) -> f64 {
        let k = k.unsigned_abs();
        if k == 0 {
            return 1.0;
        }
        match *self {
            FactorFamily::Identity => 1.0,
            FactorFamily::PoissonAbel { r } => r.powi(k.min(i32::MAX as u64) as i32),
            FactorFamily::SigmaRAlpha { r, alpha } => sigma_factor(r, alpha, k),
            FactorFamily::Lanczos { n } => {
                if k <= n as u64 {
                    sigma_factor(1, lanczos_alpha(n), k)
                } else {
                    0.0
                }
            }
        }
    }

    /// `[μ_0, μ_1, …, μ_N]`.
    pub fn table(&self, n: usize) -> Vec<f64> {
        (0..=n as i64).map(|k| self.factor(k)).collect()
    }

    pub fn label(&self) -> String {
        match *self {
            FactorFamily::Identity => "identity".to_string(),
            FactorFamily::PoissonAbel { r } => format!("poisson(r={r})"),
            FactorFamily::SigmaRAlpha { r, alpha } => format!("sigma(r={r},alpha={alpha})"),
            FactorFamily::Lanczos { n } => format!("lanczos(n={n})"),
        }
    }
}

/// Free-function form of [`FactorFamily::factor`].
pub fn factor(family: &FactorFamily, k: i64) -> f64 {
    family.factor(k)
}

/// Free-function form of [`FactorFamily::table`].
pub fn factor_table(family: &FactorFamily, n: usize) -> Vec<f64> {
    family.table(n)
}

/// The step α for which σ_k(1, α) reproduces Lanczos(n).
pub fn lanczos_alpha(n: u32) -> f64 {
    2.0 * PI / (n as f64 + 1.0)
}

pub(crate) fn validate_sigma(r: u32, alpha: f64) -> Result<()> {
    if r == 0 {
        return Err(domain("sigma factors need r ≥ 1"));
    }
    if !(alpha > 0.0 && alpha < PI) {
        return Err(domain(format!("sigma factors need 0 < α < π, got α = {alpha}")));
    }
    Ok(())
}

#[inline]
fn sigma_factor(r: u32, alpha: f64, k: u64) -> f64 {
    sinc_unchecked(k as f64 * alpha / 2.0).powi(r as i32)
}

/// Σ_{k>N} k^{−p}·(2/(kα))^r, the majorant of the dropped part of a
/// σ-factored series whose coefficients decay like k^{−p}.
///
/// Infinite when the majorant diverges (r + p ≤ 1).
pub fn sigma_tail_sum(r: u32, alpha: f64, n: usize, p: u32) -> f64 {
    let s = r + p;
    if s <= 1 {
        return f64::INFINITY;
    }
    let scale = (2.0 / alpha).powi(r as i32);
    // explicit terms, then the integral bound ∫_L^∞ x^{−s} dx for the rest
    const EXPLICIT: usize = 10_000;
    let mut acc = crate::numeric::CompensatedSum::new();
    for k in (n + 1..=n + EXPLICIT).rev() {
        acc.add((k as f64).powi(-(s as i32)));
    }
    // k^{−s} is convex, so each term is at most its integral over [k−½, k+½]
    let edge = (n + EXPLICIT) as f64 + 0.5;
    acc.add(edge.powi(1 - s as i32) / (s as f64 - 1.0));
    scale * acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ulps(a: f64, b: f64) -> u64 {
        if a == b {
            return 0;
        }
        (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
    }

    #[test]
    fn sinc_reference_values() {
        assert_eq!(sinc(0.0).unwrap(), 1.0);
        assert!(sinc(PI).unwrap().abs() < 1e-16);
        // 40-digit oracle values
        assert!(ulps(sinc(PI / 4.0).unwrap(), 0.900_316_316_157_106_1) <= 4);
        assert!(ulps(sinc(2.5).unwrap(), 0.239_388_857_641_582_6) <= 4);
    }

    #[test]
    fn sinc_is_accurate_around_the_series_switch() {
        // 40-digit oracle values on both sides of the threshold
        assert!(ulps(sinc(1e-5).unwrap(), 0.999_999_999_983_333_3) <= 4);
        assert!(ulps(sinc(3e-5).unwrap(), 0.999_999_999_85) <= 4);
        let below = sinc(SINC_SERIES_THRESHOLD * (1.0 - 1e-12)).unwrap();
        let above = sinc(SINC_SERIES_THRESHOLD * (1.0 + 1e-12)).unwrap();
        assert!((below - above).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn sinc_rejects_non_finite() {
        assert!(sinc(f64::NAN).is_err());
        assert!(sinc(f64::INFINITY).is_err());
    }

    #[test]
    fn factor_examples() {
        let s1 = FactorFamily::SigmaRAlpha { r: 1, alpha: PI };
        assert!(s1.factor(2).abs() < 1e-16);
        let s2 = FactorFamily::sigma(2, PI / 2.0).unwrap();
        assert!(ulps(s2.factor(1), 0.810_569_469_138_702_2) <= 4);
        let p = FactorFamily::poisson_abel(0.5).unwrap();
        assert_eq!(p.factor(3), 0.125);
        for f in [FactorFamily::Identity, p, s2, FactorFamily::lanczos(7).unwrap()] {
            assert_eq!(f.factor(0), 1.0);
        }
    }

    #[test]
    fn table_examples() {
        assert_eq!(FactorFamily::Identity.table(3), vec![1.0; 4]);
        assert_eq!(
            FactorFamily::poisson_abel(0.5).unwrap().table(3),
            vec![1.0, 0.5, 0.25, 0.125]
        );
        let t = FactorFamily::SigmaRAlpha { r: 1, alpha: PI }.table(4);
        let expect = [1.0, 2.0 / PI, 0.0, -2.0 / (3.0 * PI), 0.0];
        for (a, b) in t.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn lanczos_matches_sigma_one_and_cuts_off() {
        let n = 31;
        let l = FactorFamily::lanczos(n).unwrap();
        let s = FactorFamily::SigmaRAlpha { r: 1, alpha: lanczos_alpha(n) };
        for k in 0..=n as i64 {
            assert_eq!(l.factor(k), s.factor(k));
        }
        assert_eq!(l.factor(n as i64 + 1), 0.0);
        assert_eq!(l.factor(1000), 0.0);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(FactorFamily::poisson_abel(1.0).is_err());
        assert!(FactorFamily::poisson_abel(0.0).is_err());
        assert!(FactorFamily::sigma(0, 0.5).is_err());
        assert!(FactorFamily::sigma(1, PI).is_err());
        assert!(FactorFamily::sigma_real_order(2.5, 0.5).is_err());
        assert!(FactorFamily::sigma_real_order(2.0, 0.5).is_ok());
        assert!(FactorFamily::lanczos(0).is_err());
    }

    #[test]
    fn tail_sum_matches_direct_summation() {
        let direct: f64 = (101..2_000_000u64).rev().map(|k| (k as f64).powi(-3)).sum::<f64>()
            + 1.0 / (2.0 * 2_000_000f64.powi(2));
        let lib = sigma_tail_sum(2, 2.0, 100, 1);
        assert!(lib - direct > -1e-15 * direct && lib - direct < 1e-9 * direct, "{lib} vs {direct}");
        assert!(sigma_tail_sum(1, 0.5, 10, 0).is_infinite());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn sigma_magnitude_bound(r in 1u32..6, alpha in 0.01f64..1.0, k in 1i64..5000) {
                let f = FactorFamily::sigma(r, alpha).unwrap();
                let bound = (2.0 / (k as f64 * alpha)).powi(r as i32).min(1.0);
                prop_assert!(f.factor(k).abs() <= bound * (1.0 + 4.0 * f64::EPSILON));
            }

            #[test]
            fn sigma_power_law(r in 1u32..4, s in 1u32..4, alpha in 0.01f64..0.9, k in 1i64..2000) {
                let a = FactorFamily::sigma(r, alpha).unwrap().factor(k);
                let b = FactorFamily::sigma(s, alpha).unwrap().factor(k);
                let c = FactorFamily::sigma(r + s, alpha).unwrap().factor(k);
                prop_assert!((a * b - c).abs() <= 2.0 * f64::EPSILON * c.abs() + f64::MIN_POSITIVE,
                    "{} vs {}", a * b, c);
            }

            #[test]
            fn factors_are_even(k in 0i64..10_000, r in 0.01f64..0.99) {
                for f in [FactorFamily::sigma(2, 0.3).unwrap(), FactorFamily::PoissonAbel { r },
                          FactorFamily::Lanczos { n: 64 }] {
                    prop_assert_eq!(f.factor(k), f.factor(-k));
                }
            }
        }
    }
}
