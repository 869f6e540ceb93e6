//! The verification suite run by `sigmasum verify`.

use std::f64::consts::PI;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::Value;

use crate::analysis::{
    coefficient_roundtrip, gibbs_overshoot, jump_convergence_study, kernel_mass_outside, params,
    VerificationReport, STUDY_NODES,
};
use crate::engine::{summed_function, truncation_bound, Convolver, FunctionSpec};
use crate::error::{domain, Error, Result};
use crate::factors::FactorFamily;
use crate::kernels::{poisson_kernel, poisson_kernel_spectral, poisson_tail_bound, DeKernel, KernelSpec};
use crate::numeric::periodic_grid;
use crate::quadrature::PanelRule;
use crate::splines::BSpline;

/// 2·Si(π)/π − 1, the relative overshoot of raw Fourier partial sums.
pub const WILBRAHAM_GIBBS: f64 = 0.178_979_744_472_167_27;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Kernels,
    Splines,
    Engine,
    Analysis,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "kernels" => Ok(Suite::Kernels),
            "splines" => Ok(Suite::Splines),
            "engine" => Ok(Suite::Engine),
            "analysis" => Ok(Suite::Analysis),
            other => Err(domain(format!(
                "unknown suite '{other}' (expected all|kernels|splines|engine|analysis)"
            ))),
        }
    }
}

type Check = fn() -> Result<Vec<VerificationReport>>;

fn checks(suite: Suite) -> Vec<Check> {
    let kernels: [Check; 3] = [kernel_closed_vs_spectral, kernel_literal_closed_forms, poisson_identity];
    let splines: [Check; 1] = [order_raising];
    let engine: [Check; 1] = [spectral_vs_convolution];
    let analysis: [Check; 4] = [coefficient_roundtrips, jump_midpoints, delta_family, gibbs];
    match suite {
        Suite::Kernels => kernels.to_vec(),
        Suite::Splines => splines.to_vec(),
        Suite::Engine => engine.to_vec(),
        Suite::Analysis => analysis.to_vec(),
        Suite::All => kernels
            .into_iter()
            .chain(splines)
            .chain(engine)
            .chain(analysis)
            .collect(),
    }
}

/// Runs every check in `suite`; reports are sorted by name, then
/// parameters, so the output order does not depend on scheduling.
pub fn run_suite(suite: Suite) -> Result<Vec<VerificationReport>> {
    let per_check: Vec<Vec<VerificationReport>> = checks(suite)
        .par_iter()
        .map(|check| check())
        .collect::<Result<_>>()?;
    let mut reports: Vec<VerificationReport> = per_check.into_iter().flatten().collect();
    reports.sort_by_cached_key(|r| (r.name.clone(), Value::from(r.parameters.clone().into_iter().collect::<serde_json::Map<_, _>>()).to_string()));
    Ok(reports)
}

fn ulp_distance(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs() as f64
    }
}

/// Deterministic quasi-random points in [lo, hi) (golden-ratio sequence).
fn quasi_random(count: usize, lo: f64, hi: f64) -> Vec<f64> {
    let phi = 0.618_033_988_749_894_9;
    (1..=count)
        .map(|i| lo + (hi - lo) * (i as f64 * phi).fract())
        .collect()
}

fn kernel_closed_vs_spectral() -> Result<Vec<VerificationReport>> {
    let n = 4096;
    let grid = periodic_grid(101);
    let mut out = Vec::new();
    for r in 2..=5 {
        for alpha in [PI / 8.0, PI / 4.0, PI / 2.0] {
            let started = Instant::now();
            let de = DeKernel::new(r, alpha)?;
            let worst = grid
                .iter()
                .map(|&t| (de.spectral(t, n) - de.closed(t)).abs())
                .fold(0.0, f64::max);
            out.push(VerificationReport::new(
                "de_closed_vs_spectral",
                params([("r", Value::from(r)), ("alpha", alpha.into()), ("N", n.into())]),
                worst,
                de.tail_bound(n) + 1e-10,
                started,
            ));
        }
    }
    Ok(out)
}

fn kernel_literal_closed_forms() -> Result<Vec<VerificationReport>> {
    let alpha = 0.5;
    let points = quasi_random(1000, -PI, PI);
    let box_ = DeKernel::new(1, alpha)?;
    let hat = DeKernel::new(2, alpha)?;
    let box_form = |t: f64| {
        if t.abs() < alpha / 2.0 {
            1.0 / alpha
        } else {
            0.0
        }
    };
    let hat_form = |t: f64| {
        if t.abs() <= alpha {
            (alpha - t.abs()) / (alpha * alpha)
        } else {
            0.0
        }
    };
    let mut out = Vec::new();
    for (name, kernel, form) in [
        ("de1_literal_closed_form", box_, &box_form as &dyn Fn(f64) -> f64),
        ("de2_literal_closed_form", hat, &hat_form),
    ] {
        let started = Instant::now();
        let worst = points
            .iter()
            .map(|&t| ulp_distance(kernel.closed(t), form(t)))
            .fold(0.0, f64::max);
        out.push(VerificationReport::new(
            name,
            params([("alpha", Value::from(alpha)), ("points", points.len().into())]),
            worst,
            2.0,
            started,
        ));
    }
    Ok(out)
}

fn poisson_identity() -> Result<Vec<VerificationReport>> {
    let us = periodic_grid(101);
    let mut out = Vec::new();
    for r in [0.3, 0.5, 0.9] {
        for n in [10usize, 50, 200] {
            let started = Instant::now();
            let mut worst = 0.0f64;
            let mut peak = 0.0f64;
            for &u in &us {
                let closed = poisson_kernel(r, u)?;
                peak = peak.max(closed.abs());
                worst = worst.max((poisson_kernel_spectral(r, u, n)? - closed).abs());
            }
            out.push(VerificationReport::new(
                "poisson_spectral_vs_closed",
                params([("r", Value::from(r)), ("N", n.into())]),
                worst,
                poisson_tail_bound(r, n) + 4.0 * f64::EPSILON * peak,
                started,
            ));
        }
    }
    Ok(out)
}

fn order_raising() -> Result<Vec<VerificationReport>> {
    let rule = PanelRule::new(8)?;
    let alpha = PI / 4.0;
    let mut out = Vec::new();
    for m in 0..4 {
        let started = Instant::now();
        let spline = BSpline::new(m, alpha)?;
        let up = spline.raise_order()?;
        let w = up.half_width() + alpha / 2.0;
        let worst = (0..1001)
            .map(|i| -w + 2.0 * w * i as f64 / 1000.0)
            .map(|t| (spline.box_convolution(t, &rule) - up.eval(t)).abs())
            .fold(0.0, f64::max);
        out.push(VerificationReport::new(
            "order_raising",
            params([("m", Value::from(m)), ("alpha", alpha.into()), ("points", 1001.into())]),
            worst,
            1e-8,
            started,
        ));
    }
    Ok(out)
}

/// True when `t` is within `gap` of an alignment of a kernel edge
/// `±half_width` with a jump of `function`.
pub fn near_edge_alignment(function: &FunctionSpec, t: f64, half_width: f64, gap: f64) -> bool {
    function.jump_locations().iter().any(|&x| {
        [half_width, -half_width].iter().any(|&e| {
            let d = crate::numeric::reduce_angle(t + e - x);
            d.abs() < gap
        })
    })
}

fn spectral_vs_convolution() -> Result<Vec<VerificationReport>> {
    let alpha = PI / 8.0;
    let m = 101;
    let conv = Convolver::new(STUDY_NODES)?;
    let grid = periodic_grid(m);
    let mut out = Vec::new();
    for function in [FunctionSpec::SquareWave, FunctionSpec::Sawtooth] {
        for r in 1..=4u32 {
            let started = Instant::now();
            let n = if r == 1 { 200_000 } else { 4096 };
            let family = FactorFamily::sigma(r, alpha)?;
            let kernel = KernelSpec::de(r, alpha)?;
            let summed = summed_function(&function, &family, n, m)?;
            let direct = conv.convolve_grid(&function, &kernel, m)?;
            let half_width = r as f64 * alpha / 2.0;
            let worst = grid
                .iter()
                .zip(summed.samples().iter().zip(direct.samples()))
                .filter(|(&t, _)| r > 1 || !near_edge_alignment(&function, t, half_width, 0.05))
                .map(|(_, (a, b))| (a - b).abs())
                .fold(0.0, f64::max);
            let bound = if r == 1 {
                1e-3
            } else {
                truncation_bound(&function, &family, n) + 1e-8
            };
            out.push(VerificationReport::new(
                "spectral_vs_convolution",
                params([
                    ("function", Value::from(function.label())),
                    ("r", r.into()),
                    ("alpha", alpha.into()),
                    ("N", n.into()),
                ]),
                worst,
                bound,
                started,
            ));
        }
    }
    Ok(out)
}

fn coefficient_roundtrips() -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for r in 1..=5 {
        for alpha in [PI / 8.0, PI / 4.0] {
            out.push(coefficient_roundtrip(r, alpha, 64)?);
        }
    }
    Ok(out)
}

fn jump_midpoints() -> Result<Vec<VerificationReport>> {
    let alphas = [PI / 4.0, PI / 8.0, PI / 16.0];
    let mut out = Vec::new();
    for (function, t0) in [
        (FunctionSpec::SquareWave, 0.0),
        (FunctionSpec::SquareWave, -PI),
        (FunctionSpec::Sawtooth, PI),
    ] {
        for r in 1..=3 {
            out.extend(jump_convergence_study(&function, r, &alphas, t0)?);
        }
    }
    Ok(out)
}

fn delta_family() -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for r in 1..=5u32 {
        for delta in [0.25, 0.5, 1.0] {
            let started = Instant::now();
            let alpha = (0.999 * 2.0 * delta / r as f64).min(3.0);
            let kernel = KernelSpec::de(r, alpha)?;
            let mass = kernel_mass_outside(&kernel, delta, STUDY_NODES)?;
            out.push(VerificationReport::new(
                "de_mass_outside_compact",
                params([("r", Value::from(r)), ("alpha", alpha.into()), ("delta", delta.into())]),
                mass,
                0.0,
                started,
            ));
        }
    }
    let delta = 0.5;
    let mut last = f64::INFINITY;
    for r in [0.9, 0.99, 0.999] {
        let started = Instant::now();
        let mass = kernel_mass_outside(&KernelSpec::poisson(r)?, delta, STUDY_NODES)?;
        let bound = if r == 0.999 { 0.01 } else { last };
        out.push(VerificationReport::new(
            "poisson_mass_outside",
            params([("r", Value::from(r)), ("delta", delta.into())]),
            mass,
            bound,
            started,
        ));
        last = mass;
    }
    Ok(out)
}

fn gibbs() -> Result<Vec<VerificationReport>> {
    let sq = FunctionSpec::SquareWave;
    let m = 8192;
    let mut out = Vec::new();
    for n in [127usize, 511] {
        let started = Instant::now();
        let raw = gibbs_overshoot(&sq, &FactorFamily::Identity, n, m)?;
        if n == 511 {
            out.push(VerificationReport::new(
                "gibbs_raw_vs_wilbraham_constant",
                params([("N", Value::from(n)), ("M", m.into())]),
                (raw - WILBRAHAM_GIBBS).abs(),
                0.01,
                started,
            ));
        }
        for r in [2u32, 3] {
            for alpha in [PI / 16.0, PI / 8.0] {
                let started = Instant::now();
                let family = FactorFamily::sigma(r, alpha)?;
                let smoothed = gibbs_overshoot(&sq, &family, n, m)?;
                // strictly smaller: the bound is the largest float below raw
                out.push(VerificationReport::new(
                    "gibbs_sigma_below_raw",
                    params([
                        ("N", Value::from(n)),
                        ("r", r.into()),
                        ("alpha", alpha.into()),
                        ("M", m.into()),
                    ]),
                    smoothed,
                    f64::from_bits(raw.to_bits() - 1),
                    started,
                ));
            }
        }
    }
    let started = Instant::now();
    let family = FactorFamily::sigma(2, PI / 16.0)?;
    out.push(VerificationReport::new(
        "gibbs_sigma2_small",
        params([("N", Value::from(511)), ("r", 2.into()), ("alpha", (PI / 16.0).into())]),
        gibbs_overshoot(&sq, &family, 511, m)?,
        0.01,
        started,
    ));
    Ok(out)
}
