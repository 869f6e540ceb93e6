//! Numerical checks of the summation identities and limit theorems.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::engine::{summed_function, Convolver, FunctionSpec};
use crate::error::{domain, Error, Result};
use crate::factors::FactorFamily;
use crate::kernels::{DeKernel, KernelSpec};
use crate::numeric::{reduce_angle, CompensatedSum};
use crate::quadrature::PanelRule;
use crate::splines::{BSpline, PolynomialPiece};

/// Gauss–Legendre nodes per panel used by the studies.
pub const STUDY_NODES: usize = 32;

/// Outcome of one numerical check: `passed` is `observed ≤ bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub parameters: BTreeMap<String, Value>,
    pub observed: f64,
    pub bound: f64,
    pub passed: bool,
    pub runtime_ms: f64,
}

impl VerificationReport {
    pub fn new(
        name: impl Into<String>,
        parameters: BTreeMap<String, Value>,
        observed: f64,
        bound: f64,
        started: Instant,
    ) -> Self {
        Self {
            name: name.into(),
            parameters,
            observed,
            bound,
            // NaN never passes
            passed: observed <= bound,
            runtime_ms: started.elapsed().as_secs_f64() * 1e3,
        }
    }
}

/// Builds a parameter map from `(key, value)` pairs.
pub fn params<I, K, V>(pairs: I) -> BTreeMap<String, Value>
where
    I: IntoIterator<Item = (K, V)>,
    K: Into<String>,
    V: Into<Value>,
{
    pairs.into_iter().map(|(k, v)| (k.into(), v.into())).collect()
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < PI {
        Ok(())
    } else {
        Err(domain(format!("δ must lie in (0, π), got {delta}")))
    }
}

fn panel_width(kernel: &KernelSpec) -> f64 {
    match kernel {
        KernelSpec::Poisson { r } => (-r.ln()).min(PI / 16.0),
        KernelSpec::De(_) => 2.0 * PI,
    }
}

/// Kernel mass on `δ < |t| ≤ π`. Exactly 0 for De kernels whose support
/// `rα/2` is narrower than δ.
pub fn kernel_mass_outside(kernel: &KernelSpec, delta: f64, nodes: usize) -> Result<f64> {
    check_delta(delta)?;
    if let KernelSpec::De(de) = kernel {
        if de.half_width() < delta {
            return Ok(0.0);
        }
    }
    let rule = PanelRule::new(nodes)?;
    let breaks = kernel.breakpoints();
    let one_side =
        rule.integrate_refined(delta, PI, &breaks, panel_width(kernel), |t| kernel.density(t));
    Ok(2.0 * one_side)
}

/// Kernel mass on `|t| ≤ δ`.
pub fn kernel_mass_inside(kernel: &KernelSpec, delta: f64, nodes: usize) -> Result<f64> {
    check_delta(delta)?;
    let rule = PanelRule::new(nodes)?;
    let breaks = kernel.breakpoints();
    Ok(rule.integrate_refined(-delta, delta, &breaks, panel_width(kernel), |t| {
        kernel.density(t)
    }))
}

/// Convolves `function` with `De(r, α)` at its jump `t0` for each α and
/// reports the distance to the jump midpoint, followed by a summary of
/// whether the errors are non-increasing.
pub fn jump_convergence_study(
    function: &FunctionSpec,
    r: u32,
    alphas: &[f64],
    t0: f64,
) -> Result<Vec<VerificationReport>> {
    const BOUND: f64 = 1e-10;
    if alphas.is_empty() || alphas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(domain("α list must be non-empty and strictly decreasing"));
    }
    let jump = function
        .jumps()?
        .into_iter()
        .find(|j| reduce_angle(j.location - t0).abs() < 1e-12)
        .ok_or(Error::NotAJump(t0))?;
    let midpoint = jump.midpoint();
    let conv = Convolver::new(STUDY_NODES)?;
    let mut reports = Vec::with_capacity(alphas.len() + 1);
    let mut errors = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let started = Instant::now();
        let kernel = KernelSpec::De(DeKernel::new(r, alpha)?);
        let value = conv.convolve(function, &kernel, t0)?;
        let err = (value - midpoint).abs();
        errors.push(err);
        reports.push(VerificationReport::new(
            "jump_midpoint",
            params([
                ("function", Value::from(function.label())),
                ("r", r.into()),
                ("alpha", alpha.into()),
                ("t0", t0.into()),
            ]),
            err,
            BOUND,
            started,
        ));
    }
    let started = Instant::now();
    let worst_increase = errors.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    // increases at the rounding level of the function values are not counted
    let noise = 8.0 * f64::EPSILON * jump.left.abs().max(jump.right.abs()).max(1.0);
    reports.push(VerificationReport::new(
        "jump_midpoint_monotone",
        params([
            ("function", Value::from(function.label())),
            ("r", r.into()),
            ("t0", t0.into()),
        ]),
        worst_increase,
        noise,
        started,
    ));
    Ok(reports)
}

/// `∫_0^h s^i cos(ks) ds` and `∫_0^h s^i sin(ks) ds` for i = 0…degree.
fn moment_integrals(k: f64, h: f64, degree: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jc = vec![0.0; degree + 1];
    let mut js = vec![0.0; degree + 1];
    if k == 0.0 {
        for (i, c) in jc.iter_mut().enumerate() {
            *c = h.powi(i as i32 + 1) / (i + 1) as f64;
        }
        return (jc, js);
    }
    let kh = k * h;
    if kh < 2.0 {
        // power series of cos/sin integrated term by term
        for i in 0..=degree {
            let mut c_acc = CompensatedSum::new();
            let mut s_acc = CompensatedSum::new();
            let mut term = 1.0; // (kh)^n / n!
            for n in 0..60 {
                let p = (i + n + 1) as f64;
                let v = term / p;
                match n % 4 {
                    0 => c_acc.add(v),
                    1 => s_acc.add(v),
                    2 => c_acc.add(-v),
                    _ => s_acc.add(-v),
                }
                term *= kh / (n + 1) as f64;
                if term < 1e-20 {
                    break;
                }
            }
            let scale = h.powi(i as i32 + 1);
            jc[i] = scale * c_acc.value();
            js[i] = scale * s_acc.value();
        }
    } else {
        let (s, c) = kh.sin_cos();
        jc[0] = s / k;
        js[0] = (1.0 - c) / k;
        for i in 1..=degree {
            let hi = h.powi(i as i32);
            jc[i] = hi * s / k - i as f64 / k * js[i - 1];
            js[i] = -hi * c / k + i as f64 / k * jc[i - 1];
        }
    }
    (jc, js)
}

/// Exact `∫_{lo}^{hi} p(t) cos(kt) dt` for a polynomial piece.
fn piece_cosine_integral(piece: &PolynomialPiece, k: f64) -> f64 {
    let h = 0.5 * (piece.hi - piece.lo);
    let c = piece.center();
    let degree = piece.coeffs.len() - 1;
    let (jc, js) = moment_integrals(k, h, degree);
    let mut even = 0.0;
    let mut odd = 0.0;
    for (i, &a) in piece.coeffs.iter().enumerate() {
        if i % 2 == 0 {
            even += 2.0 * a * jc[i];
        } else {
            odd += 2.0 * a * js[i];
        }
    }
    let (sk, ck) = (k * c).sin_cos();
    ck * even - sk * odd
}

/// Cosine coefficient `(1/π)∫ De(r,α,t) cos(kt) dt` by exact integration
/// of the spline's polynomial pieces.
pub fn exact_kernel_coefficient(spline: &BSpline, k: u64) -> f64 {
    let total: CompensatedSum = spline
        .pieces()
        .iter()
        .map(|p| piece_cosine_integral(p, k as f64))
        .collect();
    total.value() / (spline.step() * PI)
}

/// The same coefficient by Gauss–Legendre quadrature split at the knots.
pub fn quadrature_kernel_coefficient(spline: &BSpline, k: u64, rule: &PanelRule) -> f64 {
    let h = spline.half_width();
    rule.integrate(-h, h, &spline.knots(), |t| spline.density(t) * (k as f64 * t).cos()) / PI
}

/// Recovers σ_k(r,α) as π times the cosine coefficients of the De kernel,
/// through both exact piecewise integration and panel quadrature, and
/// reports `max_k |π·â_k − σ_k(r,α)|` over k = 0…K.
pub fn coefficient_roundtrip(r: u32, alpha: f64, max_k: u64) -> Result<VerificationReport> {
    let started = Instant::now();
    let kernel = DeKernel::new(r, alpha)?;
    let spline = kernel.spline();
    if !spline.fits_period() {
        return Err(Error::SupportExceedsPeriod { width: spline.support_width() });
    }
    let family = kernel.factors();
    let rule = PanelRule::new(STUDY_NODES)?;
    let mut worst = 0.0f64;
    for k in 0..=max_k {
        let sigma = family.factor(k as i64);
        let exact = PI * exact_kernel_coefficient(&spline, k);
        let quad = PI * quadrature_kernel_coefficient(&spline, k, &rule);
        worst = worst.max((exact - sigma).abs()).max((quad - sigma).abs());
    }
    Ok(VerificationReport::new(
        "coefficient_roundtrip",
        params([("r", Value::from(r)), ("alpha", alpha.into()), ("K", max_k.into())]),
        worst,
        1e-10,
        started,
    ))
}

/// `max_grid(summed f) − sup f` near the jumps of `function`.
pub fn gibbs_overshoot(
    function: &FunctionSpec,
    family: &FactorFamily,
    n: usize,
    m: usize,
) -> Result<f64> {
    if function.jump_locations().is_empty() {
        return Err(domain("overshoot is only defined for a function with a jump"));
    }
    if m < 4096 {
        return Err(domain(format!("overshoot grid needs M ≥ 4096, got {m}")));
    }
    let sup = function
        .supremum()
        .ok_or(Error::Unresolvable("supremum of the function is not known"))?;
    let summed = summed_function(function, family, n, m)?;
    Ok(summed.max() - sup)
}
