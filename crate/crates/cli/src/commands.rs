use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use serde::Serialize;
use sigmasum::analysis::gibbs_overshoot;
use sigmasum::engine::{summed_function, Convolver, FunctionSpec, GridFunction};
use sigmasum::factors::FactorFamily;
use sigmasum::kernels::{DeKernel, KernelSpec};
use sigmasum::numeric::periodic_grid;
use sigmasum::verify::{run_suite, Suite};

use crate::args::{BuiltinArg, Command, Format, InputArgs, KernelKind, MethodArgs, MethodKind, OutputArgs};
use crate::format::{csv, json, num};

/// What a successful dispatch produced.
#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
}

pub fn run(command: Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Factors { method, n, out } => {
            let family = family(&method)?;
            let table = family.table(n);
            let text = match out.format {
                Format::Csv => csv(
                    &["k", "mu_k"],
                    table.iter().enumerate().map(|(k, &mu)| vec![k.to_string(), num(mu)]),
                ),
                Format::Json => {
                    #[derive(Serialize)]
                    struct Row {
                        k: usize,
                        mu_k: f64,
                    }
                    let rows: Vec<Row> =
                        table.iter().enumerate().map(|(k, &mu_k)| Row { k, mu_k }).collect();
                    json(&rows)?
                }
            };
            emit(&out, &text)?;
        }
        Command::Kernel { r, alpha, m, n, out } => {
            let de = DeKernel::new(r, alpha)?;
            check_grid(m)?;
            let rows: Vec<[f64; 4]> = periodic_grid(m)
                .into_iter()
                .map(|t| {
                    let closed = de.closed(t);
                    let spectral = de.spectral(t, n);
                    [t, closed, spectral, (closed - spectral).abs()]
                })
                .collect();
            let text = match out.format {
                Format::Csv => csv(
                    &["t", "De_closed", "De_spectral", "abs_diff"],
                    rows.iter().map(|row| row.iter().map(|&v| num(v)).collect()),
                ),
                Format::Json => {
                    #[derive(Serialize)]
                    #[allow(non_snake_case)]
                    struct Row {
                        t: f64,
                        De_closed: f64,
                        De_spectral: f64,
                        abs_diff: f64,
                    }
                    let rows: Vec<Row> = rows
                        .iter()
                        .map(|&[t, c, s, d]| Row { t, De_closed: c, De_spectral: s, abs_diff: d })
                        .collect();
                    json(&rows)?
                }
            };
            emit(&out, &text)?;
        }
        Command::Sum { input, method, n, m, out } => {
            let function = function(&input)?;
            check_grid(m)?;
            let grid = summed_function(&function, &family(&method)?, n, m)?;
            emit(&out, &grid_output(&grid, out.format)?)?;
        }
        Command::Convolve { input, kernel, r, alpha, m, quad, out } => {
            let function = function(&input)?;
            check_grid(m)?;
            let kernel = match kernel {
                KernelKind::Poisson => KernelSpec::poisson(r)?,
                KernelKind::De => {
                    let alpha = alpha.ok_or_else(|| anyhow!("--alpha is required for the De kernel"))?;
                    KernelSpec::De(DeKernel::new(integer_order(r)?, alpha)?)
                }
            };
            let grid = Convolver::new(quad)?.convolve_grid(&function, &kernel, m)?;
            emit(&out, &grid_output(&grid, out.format)?)?;
        }
        Command::Gibbs { input, method, n, m, out } => {
            let function = function(&input)?;
            let family = family(&method)?;
            let overshoot = gibbs_overshoot(&function, &family, n, m)?;
            let text = match out.format {
                Format::Csv => csv(
                    &["function", "method", "N", "M", "overshoot"],
                    [vec![function.label(), family.label(), n.to_string(), m.to_string(), num(overshoot)]],
                ),
                Format::Json => json(&serde_json::json!({
                    "function": function.label(),
                    "method": family.label(),
                    "N": n,
                    "M": m,
                    "overshoot": overshoot,
                }))?,
            };
            emit(&out, &text)?;
        }
        Command::Verify { suite, timings, output, format } => {
            let suite: Suite = suite.parse()?;
            if format != Format::Json {
                bail!("verify emits JSON only; use --format json");
            }
            let out = OutputArgs { output, format };
            let mut reports = run_suite(suite)?;
            if !timings {
                for r in &mut reports {
                    r.runtime_ms = 0.0;
                }
            }
            emit(&out, &json(&reports)?)?;
            if reports.iter().any(|r| !r.passed) {
                return Ok(Outcome::VerificationFailed);
            }
        }
    }
    Ok(Outcome::Success)
}

fn check_grid(m: usize) -> anyhow::Result<()> {
    if m < 2 {
        bail!("grid size --M must be at least 2, got {m}");
    }
    Ok(())
}

fn integer_order(r: f64) -> anyhow::Result<u32> {
    if r.is_finite() && r >= 1.0 && r.fract() == 0.0 && r <= u32::MAX as f64 {
        Ok(r as u32)
    } else {
        bail!("--r must be a positive integer for this kernel, got {r}")
    }
}

fn family(args: &MethodArgs) -> anyhow::Result<FactorFamily> {
    let need_r = || args.r.ok_or_else(|| anyhow!("--r is required for --method {:?}", args.method));
    Ok(match args.method {
        MethodKind::Identity => FactorFamily::Identity,
        MethodKind::Poisson => FactorFamily::poisson_abel(need_r()?)?,
        MethodKind::Sigma => {
            let alpha = args.alpha.ok_or_else(|| anyhow!("--alpha is required for --method sigma"))?;
            FactorFamily::sigma_real_order(need_r()?, alpha)?
        }
        MethodKind::Lanczos => {
            let n = args
                .lanczos_n
                .ok_or_else(|| anyhow!("--lanczos-n is required for --method lanczos"))?;
            FactorFamily::lanczos(n)?
        }
    })
}

fn function(args: &InputArgs) -> anyhow::Result<FunctionSpec> {
    match (&args.builtin, &args.input) {
        (Some(BuiltinArg::Square), _) => Ok(FunctionSpec::SquareWave),
        (Some(BuiltinArg::Sawtooth), _) => Ok(FunctionSpec::Sawtooth),
        (None, Some(path)) => {
            let text = read_input(path)?;
            FunctionSpec::from_json(&text)
                .with_context(|| format!("invalid series spec in {}", path.display()))
        }
        (None, None) => bail!("one of --input or --builtin is required"),
    }
}

fn read_input(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading standard input")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn grid_output(grid: &GridFunction, format: Format) -> anyhow::Result<String> {
    let ts = periodic_grid(grid.len());
    Ok(match format {
        Format::Csv => csv(
            &["t", "value"],
            ts.iter().zip(grid.samples()).map(|(&t, &v)| vec![num(t), num(v)]),
        ),
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                t: f64,
                value: f64,
            }
            let rows: Vec<Row> =
                ts.iter().zip(grid.samples()).map(|(&t, &value)| Row { t, value }).collect();
            json(&rows)?
        }
    })
}

fn emit(out: &OutputArgs, text: &str) -> anyhow::Result<()> {
    match &out.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes()).context("writing standard output")?;
            lock.flush().context("writing standard output")
        }
    }
}
