//! Trigonometric series, factor application, grid summation and the
//! equivalent kernel convolutions.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::factors::{sigma_tail_sum, FactorFamily};
use crate::kernels::KernelSpec;
use crate::numeric::{periodic_grid, reduce_angle, CompensatedSum};
use crate::quadrature::{periodic_trapezoid, PanelRule};

/// `a0/2 + Σ_{k=1}^{N} (a_k cos kt + b_k sin kt)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries")]
pub struct TrigSeries {
    a0: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Deserialize)]
struct RawSeries {
    a0: f64,
    #[serde(default)]
    a: Vec<f64>,
    #[serde(default)]
    b: Vec<f64>,
}

impl TryFrom<RawSeries> for TrigSeries {
    type Error = Error;

    fn try_from(raw: RawSeries) -> Result<Self> {
        let n = raw.a.len().max(raw.b.len());
        let mut a = raw.a;
        let mut b = raw.b;
        a.resize(n, 0.0);
        b.resize(n, 0.0);
        TrigSeries::new(raw.a0, a, b)
    }
}

impl TrigSeries {
    pub fn new(a0: f64, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(domain(format!(
                "cosine and sine coefficient lists differ in length ({} vs {})",
                a.len(),
                b.len()
            )));
        }
        if !a0.is_finite() || a.iter().chain(&b).any(|c| !c.is_finite()) {
            return Err(domain("series coefficients must be finite"));
        }
        Ok(Self { a0, a, b })
    }

    pub fn zero(order: usize) -> Self {
        Self { a0: 0.0, a: vec![0.0; order], b: vec![0.0; order] }
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// Cosine coefficients a_1…a_N.
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// Sine coefficients b_1…b_N.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Truncation order N.
    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// `C = max_k max(|a_k|, |b_k|)`, the coefficient bound of a
    /// (possibly divergent) input series.
    pub fn coefficient_bound(&self) -> f64 {
        self.a.iter().chain(&self.b).fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Truncates or zero-pads to order `n`.
    pub fn with_order(&self, n: usize) -> Self {
        let mut s = self.clone();
        s.a.resize(n, 0.0);
        s.b.resize(n, 0.0);
        s
    }

    /// Coefficients of `t ↦ f(t − shift)`.
    pub fn shifted(&self, shift: f64) -> Self {
        let (a, b) = self
            .a
            .iter()
            .zip(&self.b)
            .enumerate()
            .map(|(i, (&ak, &bk))| {
                let (s, c) = ((i + 1) as f64 * shift).sin_cos();
                (ak * c - bk * s, ak * s + bk * c)
            })
            .unzip();
        Self { a0: self.a0, a, b }
    }

    /// `Σ w_i · s_i` over series of possibly different orders.
    pub fn linear_combination(terms: &[(f64, TrigSeries)]) -> Self {
        let n = terms.iter().map(|(_, s)| s.order()).max().unwrap_or(0);
        let mut out = Self::zero(n);
        for (w, s) in terms {
            out.a0 += w * s.a0;
            for (i, (&ak, &bk)) in s.a.iter().zip(&s.b).enumerate() {
                out.a[i] += w * ak;
                out.b[i] += w * bk;
            }
        }
        out
    }

    /// Multiplies the k-th harmonic by μ_k; `a0` is left alone.
    pub fn apply_factors(&self, family: &FactorFamily) -> Self {
        let mu = family.table(self.order());
        let a = self.a.iter().zip(&mu[1..]).map(|(x, m)| x * m).collect();
        let b = self.b.iter().zip(&mu[1..]).map(|(x, m)| x * m).collect();
        Self { a0: self.a0, a, b }
    }

    /// Partial sum at `t`, accumulated in ascending k with compensation.
    pub fn sum_at(&self, t: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        acc.add(0.5 * self.a0);
        for (i, (&ak, &bk)) in self.a.iter().zip(&self.b).enumerate() {
            if ak == 0.0 && bk == 0.0 {
                continue;
            }
            let (s, c) = ((i + 1) as f64 * t).sin_cos();
            acc.add(ak * c);
            acc.add(bk * s);
        }
        acc.value()
    }
}

/// Free-function form of [`TrigSeries::apply_factors`].
pub fn apply_factors(series: &TrigSeries, family: &FactorFamily) -> TrigSeries {
    series.apply_factors(family)
}

/// Free-function form of [`TrigSeries::sum_at`].
pub fn sum_series(series: &TrigSeries, t: f64) -> f64 {
    series.sum_at(t)
}

/// A jump discontinuity of the first kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub location: f64,
    pub left: f64,
    pub right: f64,
}

impl Jump {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.left + self.right)
    }
}

/// Samples on the grid `t_j = −π + 2πj/M`, plus optional jump metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    samples: Vec<f64>,
    #[serde(default)]
    jumps: Vec<Jump>,
}

impl GridFunction {
    pub fn new(samples: Vec<f64>, jumps: Vec<Jump>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(domain("a grid function needs at least 2 samples"));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(domain("grid samples must be finite"));
        }
        if jumps.iter().any(|j| !(-PI..PI).contains(&j.location)) {
            return Err(domain("jump locations must lie in [−π, π)"));
        }
        Ok(Self { samples, jumps })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn grid(&self) -> Vec<f64> {
        periodic_grid(self.samples.len())
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Built-in functions understood by the JSON input format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Builtin {
    Square,
    Sawtooth,
}

/// A 2π-periodic function to be expanded, summed or convolved.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    /// −1 on (−π, 0), +1 on (0, π).
    SquareWave,
    /// t on (−π, π).
    Sawtooth,
    /// Explicit coefficients.
    SeriesDefined(TrigSeries),
    /// Uniform samples.
    Samples(GridFunction),
    /// `t ↦ inner(t − shift)`.
    Shifted { inner: Box<FunctionSpec>, shift: f64 },
    /// `Σ w_i · f_i`.
    Combination(Vec<(f64, FunctionSpec)>),
}

/// JSON series input: `{"a0":…,"a":[…],"b":[…]}` or `{"builtin":"square"}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SeriesInput {
    Builtin { builtin: Builtin },
    Series(TrigSeries),
}

impl From<SeriesInput> for FunctionSpec {
    fn from(input: SeriesInput) -> Self {
        match input {
            SeriesInput::Builtin { builtin: Builtin::Square } => FunctionSpec::SquareWave,
            SeriesInput::Builtin { builtin: Builtin::Sawtooth } => FunctionSpec::Sawtooth,
            SeriesInput::Series(s) => FunctionSpec::SeriesDefined(s),
        }
    }
}

impl FunctionSpec {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str::<SeriesInput>(text).map(Into::into)
    }

    pub fn shifted(self, shift: f64) -> Self {
        FunctionSpec::Shifted { inner: Box::new(self), shift }
    }

    /// True when [`eval`](Self::eval) is available.
    pub fn is_pointwise(&self) -> bool {
        match self {
            FunctionSpec::Samples(_) => false,
            FunctionSpec::Shifted { inner, .. } => inner.is_pointwise(),
            FunctionSpec::Combination(parts) => parts.iter().all(|(_, f)| f.is_pointwise()),
            _ => true,
        }
    }

    /// Pointwise value; built-ins take the jump midpoint at their jumps.
    pub fn eval(&self, t: f64) -> Result<f64> {
        match self {
            FunctionSpec::SquareWave => {
                let x = reduce_angle(t);
                Ok(if x == 0.0 || x == -PI {
                    0.0
                } else if x < 0.0 {
                    -1.0
                } else {
                    1.0
                })
            }
            FunctionSpec::Sawtooth => {
                let x = reduce_angle(t);
                Ok(if x == -PI { 0.0 } else { x })
            }
            FunctionSpec::SeriesDefined(s) => Ok(s.sum_at(t)),
            FunctionSpec::Samples(_) => {
                Err(Error::Unresolvable("sampled functions have no pointwise values"))
            }
            FunctionSpec::Shifted { inner, shift } => inner.eval(t - shift),
            FunctionSpec::Combination(parts) => {
                let mut acc = CompensatedSum::new();
                for (w, f) in parts {
                    acc.add(w * f.eval(t)?);
                }
                Ok(acc.value())
            }
        }
    }

    /// Locations in [−π, π) where the function jumps.
    pub fn jump_locations(&self) -> Vec<f64> {
        let mut locs: Vec<f64> = match self {
            FunctionSpec::SquareWave => vec![-PI, 0.0],
            FunctionSpec::Sawtooth => vec![-PI],
            FunctionSpec::SeriesDefined(_) => Vec::new(),
            FunctionSpec::Samples(g) => g.jumps.iter().map(|j| j.location).collect(),
            FunctionSpec::Shifted { inner, shift } => inner
                .jump_locations()
                .into_iter()
                .map(|x| reduce_angle(x + shift))
                .collect(),
            FunctionSpec::Combination(parts) => {
                parts.iter().flat_map(|(_, f)| f.jump_locations()).collect()
            }
        };
        locs.sort_by(f64::total_cmp);
        locs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        locs
    }

    /// One-sided limits `(f(t−0), f(t+0))`, exact for the built-ins.
    pub fn one_sided_limits(&self, t: f64) -> Result<(f64, f64)> {
        let x = reduce_angle(t);
        match self {
            FunctionSpec::SquareWave => Ok(if x == 0.0 {
                (-1.0, 1.0)
            } else if x == -PI {
                (1.0, -1.0)
            } else {
                let v = self.eval(x)?;
                (v, v)
            }),
            FunctionSpec::Sawtooth => Ok(if x == -PI { (PI, -PI) } else { (x, x) }),
            FunctionSpec::SeriesDefined(s) => {
                let v = s.sum_at(x);
                Ok((v, v))
            }
            FunctionSpec::Samples(g) => g
                .jumps
                .iter()
                .find(|j| same_angle(j.location, x))
                .map(|j| (j.left, j.right))
                .ok_or(Error::Unresolvable("sampled functions have no pointwise values")),
            FunctionSpec::Shifted { inner, shift } => inner.one_sided_limits(x - shift),
            FunctionSpec::Combination(parts) => {
                let (mut l, mut r) = (0.0, 0.0);
                for (w, f) in parts {
                    let (fl, fr) = f.one_sided_limits(x)?;
                    l += w * fl;
                    r += w * fr;
                }
                Ok((l, r))
            }
        }
    }

    /// Jumps with their one-sided limits.
    pub fn jumps(&self) -> Result<Vec<Jump>> {
        self.jump_locations()
            .into_iter()
            .map(|location| {
                let (left, right) = self.one_sided_limits(location)?;
                Ok(Jump { location, left, right })
            })
            .collect()
    }

    /// Least upper bound of the function, when known exactly.
    pub fn supremum(&self) -> Option<f64> {
        match self {
            FunctionSpec::SquareWave => Some(1.0),
            FunctionSpec::Sawtooth => Some(PI),
            FunctionSpec::Samples(g) => Some(g.max()),
            FunctionSpec::Shifted { inner, .. } => inner.supremum(),
            _ => None,
        }
    }

    /// Fourier coefficients up to order `n`: analytic for the built-ins,
    /// trapezoid quadrature for samples.
    pub fn fourier_coefficients(&self, n: usize) -> Result<TrigSeries> {
        match self {
            FunctionSpec::SquareWave => {
                let b = (1..=n)
                    .map(|k| if k % 2 == 1 { 4.0 / (PI * k as f64) } else { 0.0 })
                    .collect();
                TrigSeries::new(0.0, vec![0.0; n], b)
            }
            FunctionSpec::Sawtooth => {
                let b = (1..=n)
                    .map(|k| {
                        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                        2.0 * sign / k as f64
                    })
                    .collect();
                TrigSeries::new(0.0, vec![0.0; n], b)
            }
            FunctionSpec::SeriesDefined(s) => Ok(s.with_order(n)),
            FunctionSpec::Samples(g) => sampled_coefficients(g, n),
            FunctionSpec::Shifted { inner, shift } => {
                Ok(inner.fourier_coefficients(n)?.shifted(*shift))
            }
            FunctionSpec::Combination(parts) => {
                let terms = parts
                    .iter()
                    .map(|(w, f)| Ok((*w, f.fourier_coefficients(n)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(TrigSeries::linear_combination(&terms))
            }
        }
    }

    /// `c` such that `sqrt(a_k² + b_k²) ≤ c/k` for every k, when known.
    fn amplitude_decay(&self) -> Option<f64> {
        match self {
            FunctionSpec::SquareWave => Some(4.0 / PI),
            FunctionSpec::Sawtooth => Some(2.0),
            FunctionSpec::Shifted { inner, .. } => inner.amplitude_decay(),
            FunctionSpec::Combination(parts) => parts
                .iter()
                .map(|(w, f)| f.amplitude_decay().map(|c| w.abs() * c))
                .sum(),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            FunctionSpec::SquareWave => "square".into(),
            FunctionSpec::Sawtooth => "sawtooth".into(),
            FunctionSpec::SeriesDefined(s) => format!("series(N={})", s.order()),
            FunctionSpec::Samples(g) => format!("samples(M={})", g.len()),
            FunctionSpec::Shifted { inner, shift } => format!("{}(t-{shift})", inner.label()),
            FunctionSpec::Combination(parts) => parts
                .iter()
                .map(|(w, f)| format!("{w}*{}", f.label()))
                .collect::<Vec<_>>()
                .join("+"),
        }
    }
}

fn same_angle(x: f64, y: f64) -> bool {
    let d = reduce_angle(x - y);
    d.abs() < 1e-12
}

fn sampled_coefficients(g: &GridFunction, n: usize) -> Result<TrigSeries> {
    let m = g.len();
    if 2 * n >= m {
        return Err(Error::Aliasing { order: n, samples: m });
    }
    let grid = g.grid();
    let scale = 2.0 / m as f64;
    let a0 = scale * g.samples.iter().copied().collect::<CompensatedSum>().value();
    let (a, b) = (1..=n)
        .map(|k| {
            let mut ca = CompensatedSum::new();
            let mut cb = CompensatedSum::new();
            for (&t, &f) in grid.iter().zip(&g.samples) {
                let (s, c) = (k as f64 * t).sin_cos();
                ca.add(f * c);
                cb.add(f * s);
            }
            (scale * ca.value(), scale * cb.value())
        })
        .unzip();
    TrigSeries::new(a0, a, b)
}

/// Free-function form of [`FunctionSpec::fourier_coefficients`].
pub fn fourier_coefficients(function: &FunctionSpec, n: usize) -> Result<TrigSeries> {
    function.fourier_coefficients(n)
}

/// Sums the factored series of `function` on the M-point periodic grid.
///
/// Grid points are evaluated in parallel; each point is an independent
/// sequential sum, so results do not depend on the thread count.
pub fn summed_function(
    function: &FunctionSpec,
    family: &FactorFamily,
    n: usize,
    m: usize,
) -> Result<GridFunction> {
    family.validate()?;
    if m < 2 {
        return Err(domain("grid size M must be at least 2"));
    }
    let series = function.fourier_coefficients(n)?.apply_factors(family);
    let samples: Vec<f64> = periodic_grid(m).par_iter().map(|&t| series.sum_at(t)).collect();
    let jumps = function.jumps().unwrap_or_default();
    GridFunction::new(samples, jumps)
}

/// Bound on `|Σ_{k>N} μ_k (a_k cos kt + b_k sin kt)|` for the factored
/// series of `function`; infinite when no bound is available.
pub fn truncation_bound(function: &FunctionSpec, family: &FactorFamily, n: usize) -> f64 {
    if let FunctionSpec::SeriesDefined(s) = function {
        let dropped = s.order().saturating_sub(n);
        return (0..dropped)
            .map(|i| {
                let k = n + 1 + i;
                family.factor(k as i64).abs() * s.a[k - 1].hypot(s.b[k - 1])
            })
            .sum();
    }
    let Some(c) = function.amplitude_decay() else {
        return f64::INFINITY;
    };
    match *family {
        FactorFamily::Identity => f64::INFINITY,
        FactorFamily::Lanczos { n: cut } if n >= cut as usize => 0.0,
        FactorFamily::Lanczos { .. } => f64::INFINITY,
        FactorFamily::PoissonAbel { r } => {
            c / (n as f64 + 1.0) * r.powi((n + 1).min(i32::MAX as usize) as i32) / (1.0 - r)
        }
        FactorFamily::SigmaRAlpha { r, alpha } => c * sigma_tail_sum(r, alpha, n, 1),
    }
}

/// Convolution quadrature bound to a fixed Gauss–Legendre rule.
#[derive(Debug, Clone)]
pub struct Convolver {
    rule: PanelRule,
    nodes: usize,
}

impl Convolver {
    /// `nodes` is the per-panel Gauss–Legendre count for De kernels and
    /// the trapezoid node count for the Poisson kernel; at least 16.
    pub fn new(nodes: usize) -> Result<Self> {
        if nodes < 16 {
            return Err(domain(format!("quadrature needs at least 16 nodes, got {nodes}")));
        }
        Ok(Self { rule: PanelRule::new(nodes)?, nodes })
    }

    /// `(1/α)∫ f(t+u) B_{r−1}(α,u) du` for De kernels, or
    /// `(1/π)∫ f(t+u) P(r,u) du` for the Poisson kernel.
    pub fn convolve(&self, function: &FunctionSpec, kernel: &KernelSpec, t: f64) -> Result<f64> {
        if !function.is_pointwise() {
            return Err(Error::Unresolvable(
                "convolution needs a pointwise function (built-in or series)",
            ));
        }
        let jumps = function.jump_locations();
        match kernel {
            KernelSpec::De(de) => {
                let spline = de.spline();
                let h = de.half_width();
                let mut breaks = spline.knots();
                breaks.extend(shifted_jumps(&jumps, t, -h, h));
                Ok(self.rule.integrate(-h, h, &breaks, |u| {
                    function.eval(t + u).expect("pointwise") * spline.density(u)
                }))
            }
            KernelSpec::Poisson { r } => {
                let density = |u: f64| function.eval(t + u).expect("pointwise") * kernel.density(u);
                if jumps.is_empty() {
                    Ok(periodic_trapezoid(-PI, 2.0 * PI, self.nodes, density))
                } else {
                    // peak width of P(r,·) is about −ln r
                    let width = (-r.ln()).min(PI / 16.0);
                    let breaks = shifted_jumps(&jumps, t, -PI, PI);
                    Ok(self.rule.integrate_refined(-PI, PI, &breaks, width, density))
                }
            }
        }
    }

    /// [`convolve`](Self::convolve) on the M-point periodic grid.
    pub fn convolve_grid(
        &self,
        function: &FunctionSpec,
        kernel: &KernelSpec,
        m: usize,
    ) -> Result<GridFunction> {
        if m < 2 {
            return Err(domain("grid size M must be at least 2"));
        }
        let samples = periodic_grid(m)
            .par_iter()
            .map(|&t| self.convolve(function, kernel, t))
            .collect::<Result<Vec<f64>>>()?;
        GridFunction::new(samples, function.jumps().unwrap_or_default())
    }
}

/// Values u in [lo, hi] with t + u ≡ jump (mod 2π).
fn shifted_jumps(jumps: &[f64], t: f64, lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for &x in jumps {
        let base = x - t;
        let first = ((lo - base) / (2.0 * PI)).ceil() as i64;
        let last = ((hi - base) / (2.0 * PI)).floor() as i64;
        out.extend((first..=last).map(|j| base + 2.0 * PI * j as f64));
    }
    out
}

/// Convolution of `function` with `kernel` at `t`, using `nodes`
/// quadrature nodes per smooth panel.
pub fn convolve_with_kernel(
    function: &FunctionSpec,
    kernel: &KernelSpec,
    t: f64,
    nodes: usize,
) -> Result<f64> {
    Convolver::new(nodes)?.convolve(function, kernel, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq_sigma(r: u32, alpha: f64) -> FactorFamily {
        FactorFamily::sigma(r, alpha).unwrap()
    }

    #[test]
    fn apply_factors_examples() {
        let s = TrigSeries::new(0.5, vec![1.0, -2.0], vec![3.0, 4.0]).unwrap();
        assert_eq!(s.apply_factors(&FactorFamily::Identity), s);
        let ones = TrigSeries::new(0.0, vec![1.0; 4], vec![0.0; 4]).unwrap();
        let f = ones.apply_factors(&FactorFamily::SigmaRAlpha { r: 1, alpha: PI });
        let want = [2.0 / PI, 0.0, -2.0 / (3.0 * PI), 0.0];
        for (a, b) in f.a().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        let c = TrigSeries::new(2.0, vec![], vec![]).unwrap();
        assert_eq!(c.apply_factors(&sq_sigma(3, 0.2)).a0(), 2.0);
    }

    #[test]
    fn sum_series_examples() {
        let c = TrigSeries::new(2.0, vec![0.0; 3], vec![0.0; 3]).unwrap();
        assert_eq!(c.sum_at(1.234), 1.0);
        let one = TrigSeries::new(0.6, vec![1.0], vec![0.0]).unwrap();
        assert_eq!(one.sum_at(0.0), 1.3);
        // 40-digit mpmath value of Σ_{k odd ≤ 99} 4/(πk) sin(kπ/2)
        let sq = FunctionSpec::SquareWave.fourier_coefficients(99).unwrap();
        assert!((sq.sum_at(PI / 2.0) - 0.993_634_438_578_174_1).abs() < 1e-14);
    }

    #[test]
    fn coefficient_examples() {
        let sq = FunctionSpec::SquareWave.fourier_coefficients(4).unwrap();
        let want = [4.0 / PI, 0.0, 4.0 / (3.0 * PI), 0.0];
        for (a, b) in sq.b().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        let saw = FunctionSpec::Sawtooth.fourier_coefficients(2).unwrap();
        assert_eq!(saw.b(), &[2.0, -1.0]);
        for f in [FunctionSpec::SquareWave, FunctionSpec::Sawtooth] {
            let s = f.fourier_coefficients(16).unwrap();
            assert!(s.a().iter().all(|&a| a == 0.0) && s.a0() == 0.0);
        }
    }

    #[test]
    fn sampled_coefficients_recover_trig_polynomials_and_reject_aliasing() {
        let m = 64;
        let samples = periodic_grid(m)
            .iter()
            .map(|&t| 0.25 + (3.0 * t).cos() - 0.5 * (5.0 * t).sin())
            .collect();
        let g = FunctionSpec::Samples(GridFunction::new(samples, vec![]).unwrap());
        let s = g.fourier_coefficients(8).unwrap();
        assert!((s.a0() - 0.5).abs() < 1e-14);
        assert!((s.a()[2] - 1.0).abs() < 1e-14 && (s.b()[4] + 0.5).abs() < 1e-14);
        assert!(s.a().iter().enumerate().all(|(i, a)| i == 2 || a.abs() < 1e-14));
        assert!(matches!(g.fourier_coefficients(32), Err(Error::Aliasing { .. })));
    }

    #[test]
    fn series_json_input() {
        let f = FunctionSpec::from_json(r#"{"builtin": "square"}"#).unwrap();
        assert_eq!(f, FunctionSpec::SquareWave);
        let f = FunctionSpec::from_json(r#"{"a0": 1.0, "a": [0.5], "b": [0.0, 2.0]}"#).unwrap();
        match f {
            FunctionSpec::SeriesDefined(s) => {
                assert_eq!(s.order(), 2);
                assert_eq!(s.a(), &[0.5, 0.0]);
            }
            other => panic!("{other:?}"),
        }
        assert!(FunctionSpec::from_json(r#"{"builtin": "triangle"}"#).is_err());
        assert!(FunctionSpec::from_json(r#"{"a": [1.0]}"#).is_err());
    }

    #[test]
    fn divergent_input_records_coefficient_bound() {
        let s = TrigSeries::new(0.0, vec![1.0, -1.5, 1.0], vec![0.5, 1.0, -1.0]).unwrap();
        assert_eq!(s.coefficient_bound(), 1.5);
        assert!(TrigSeries::new(f64::NAN, vec![], vec![]).is_err());
        assert!(TrigSeries::new(0.0, vec![1.0], vec![]).is_err());
    }

    #[test]
    fn summed_function_examples() {
        let raw = summed_function(&FunctionSpec::SquareWave, &FactorFamily::Identity, 64, 8)
            .unwrap();
        assert_eq!(raw.samples()[4], 0.0);
        let smooth =
            summed_function(&FunctionSpec::SquareWave, &sq_sigma(2, PI / 4.0), 512, 8).unwrap();
        assert!((smooth.samples()[6] - 1.0).abs() < 1e-6, "{}", smooth.samples()[6]);
        let saw =
            summed_function(&FunctionSpec::Sawtooth, &sq_sigma(2, PI / 8.0), 1024, 16).unwrap();
        assert!(saw.samples()[0].abs() < 1e-3);
    }

    #[test]
    fn convolution_examples() {
        let conv = Convolver::new(16).unwrap();
        let constant = FunctionSpec::SeriesDefined(TrigSeries::new(3.0, vec![], vec![]).unwrap());
        for spec in [KernelSpec::de(1, 0.3).unwrap(), KernelSpec::de(4, 1.0).unwrap()] {
            assert!((conv.convolve(&constant, &spec, 0.7).unwrap() - 1.5).abs() < 1e-14);
        }
        let de2 = KernelSpec::de(2, PI / 4.0).unwrap();
        assert!(conv.convolve(&FunctionSpec::SquareWave, &de2, 0.0).unwrap().abs() < 1e-15);
        let box_ = KernelSpec::de(1, PI / 4.0).unwrap();
        let at_eighth = conv.convolve(&FunctionSpec::SquareWave, &box_, PI / 8.0).unwrap();
        assert!((at_eighth - 1.0).abs() < 1e-14);
        let at_sixteenth = conv.convolve(&FunctionSpec::SquareWave, &box_, PI / 16.0).unwrap();
        assert!((at_sixteenth - 0.5).abs() < 1e-14);
    }

    #[test]
    fn convolution_rejects_samples_and_few_nodes() {
        let g = GridFunction::new(vec![0.0, 1.0, 0.0, -1.0], vec![]).unwrap();
        let spec = KernelSpec::de(2, 0.5).unwrap();
        assert!(convolve_with_kernel(&FunctionSpec::Samples(g), &spec, 0.0, 16).is_err());
        assert!(Convolver::new(8).is_err());
    }

    #[test]
    fn spectral_matches_convolution_for_de_kernels() {
        let conv = Convolver::new(16).unwrap();
        for f in [FunctionSpec::SquareWave, FunctionSpec::Sawtooth] {
            for r in 2..=4 {
                let kernel = KernelSpec::de(r, PI / 4.0).unwrap();
                let family = sq_sigma(r, PI / 4.0);
                let n = 1024;
                let sum = summed_function(&f, &family, n, 32).unwrap();
                let direct = conv.convolve_grid(&f, &kernel, 32).unwrap();
                let bound = truncation_bound(&f, &family, n) + 1e-8;
                for (a, b) in sum.samples().iter().zip(direct.samples()) {
                    assert!((a - b).abs() <= bound, "{} r={r}: {a} vs {b}", f.label());
                }
            }
        }
    }

    #[test]
    fn spectral_matches_convolution_for_poisson() {
        let conv = Convolver::new(32).unwrap();
        for f in [FunctionSpec::SquareWave, FunctionSpec::Sawtooth] {
            for &r in &[0.5, 0.9] {
                let kernel = KernelSpec::poisson(r).unwrap();
                let family = FactorFamily::poisson_abel(r).unwrap();
                let n = 400;
                let sum = summed_function(&f, &family, n, 32).unwrap();
                let direct = conv.convolve_grid(&f, &kernel, 32).unwrap();
                let bound = truncation_bound(&f, &family, n) + 1e-10;
                for (a, b) in sum.samples().iter().zip(direct.samples()) {
                    assert!((a - b).abs() <= bound, "{} r={r}: {a} vs {b}", f.label());
                }
            }
        }
    }

    #[test]
    fn poisson_trapezoid_path_for_smooth_series() {
        let s = TrigSeries::new(1.0, vec![0.5, 0.0, 0.25], vec![0.0, -1.0, 0.0]).unwrap();
        let f = FunctionSpec::SeriesDefined(s.clone());
        let kernel = KernelSpec::poisson(0.6).unwrap();
        let want = s.apply_factors(&FactorFamily::poisson_abel(0.6).unwrap()).sum_at(0.4);
        let got = convolve_with_kernel(&f, &kernel, 0.4, 128).unwrap();
        assert!((got - want).abs() < 1e-13, "{got} vs {want}");
    }

    #[test]
    fn translation_equivariance() {
        let s = PI / 3.0;
        let family = sq_sigma(2, PI / 8.0);
        let shifted = FunctionSpec::SquareWave.shifted(s);
        let base = FunctionSpec::SquareWave.fourier_coefficients(512).unwrap().apply_factors(&family);
        let moved = shifted.fourier_coefficients(512).unwrap().apply_factors(&family);
        for i in 0..50 {
            let t = -PI + 2.0 * PI * i as f64 / 50.0;
            assert!((moved.sum_at(t) - base.sum_at(t - s)).abs() < 1e-12);
        }
    }

    #[test]
    fn shifted_jumps_and_limits() {
        let f = FunctionSpec::SquareWave.shifted(1.0);
        let jumps = f.jumps().unwrap();
        assert_eq!(jumps.len(), 2);
        let at_one = jumps.iter().find(|j| (j.location - 1.0).abs() < 1e-12).unwrap();
        assert_eq!((at_one.left, at_one.right), (-1.0, 1.0));
        let saw = FunctionSpec::Sawtooth.jumps().unwrap();
        assert_eq!(saw, vec![Jump { location: -PI, left: PI, right: -PI }]);
        assert_eq!(FunctionSpec::Sawtooth.eval(PI).unwrap(), 0.0);
    }

    #[test]
    fn combination_is_linear() {
        let combo = FunctionSpec::Combination(vec![
            (0.7, FunctionSpec::SquareWave),
            (-1.3, FunctionSpec::Sawtooth),
        ]);
        let family = sq_sigma(3, 0.4);
        let lhs = combo.fourier_coefficients(64).unwrap().apply_factors(&family);
        let sq = FunctionSpec::SquareWave.fourier_coefficients(64).unwrap().apply_factors(&family);
        let saw = FunctionSpec::Sawtooth.fourier_coefficients(64).unwrap().apply_factors(&family);
        for k in 0..64 {
            let rhs = 0.7 * sq.b()[k] - 1.3 * saw.b()[k];
            assert!((lhs.b()[k] - rhs).abs() < 1e-12);
        }
        let conv = Convolver::new(16).unwrap();
        let kernel = KernelSpec::de(3, 0.4).unwrap();
        for &t in &[-2.0, 0.1, 3.0] {
            let lhs = conv.convolve(&combo, &kernel, t).unwrap();
            let rhs = 0.7 * conv.convolve(&FunctionSpec::SquareWave, &kernel, t).unwrap()
                - 1.3 * conv.convolve(&FunctionSpec::Sawtooth, &kernel, t).unwrap();
            assert!((lhs - rhs).abs() < 1e-13);
        }
    }

    #[test]
    fn grid_results_do_not_depend_on_thread_count() {
        let family = sq_sigma(2, PI / 8.0);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| summed_function(&FunctionSpec::Sawtooth, &family, 2048, 257).unwrap())
        };
        let one = run(1);
        let many = run(4);
        let bits = |g: &GridFunction| g.samples().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&one), bits(&many));
    }
}
