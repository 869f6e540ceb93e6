//! Composite quadrature over panels whose endpoints are placed at the
//! non-smooth points of the integrand.

use gauss_quad::GaussLegendre;

use crate::error::{domain, Result};
use crate::numeric::CompensatedSum;

/// Gauss–Legendre rule applied on each panel between breakpoints.
#[derive(Debug, Clone)]
pub struct PanelRule {
    rule: GaussLegendre,
    nodes: usize,
}

impl PanelRule {
    pub fn new(nodes: usize) -> Result<Self> {
        let rule = GaussLegendre::new(nodes)
            .map_err(|_| domain(format!("Gauss–Legendre needs at least 2 nodes, got {nodes}")))?;
        Ok(Self { rule, nodes })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Integrates `f` over [a, b], splitting at every breakpoint strictly
    /// inside the interval.
    pub fn integrate<F>(&self, a: f64, b: f64, breakpoints: &[f64], mut f: F) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        if b <= a {
            return 0.0;
        }
        let cuts = panel_edges(a, b, breakpoints);
        let mut acc = CompensatedSum::new();
        for w in cuts.windows(2) {
            acc.add(self.rule.integrate(w[0], w[1], &mut f));
        }
        acc.value()
    }

    /// Like [`integrate`](Self::integrate), additionally subdividing every
    /// panel so that no piece is wider than `max_width`.
    pub fn integrate_refined<F>(
        &self,
        a: f64,
        b: f64,
        breakpoints: &[f64],
        max_width: f64,
        mut f: F,
    ) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        if b <= a {
            return 0.0;
        }
        let cuts = panel_edges(a, b, breakpoints);
        let mut acc = CompensatedSum::new();
        for w in cuts.windows(2) {
            let pieces = ((w[1] - w[0]) / max_width).ceil().max(1.0) as usize;
            let h = (w[1] - w[0]) / pieces as f64;
            for i in 0..pieces {
                let lo = w[0] + h * i as f64;
                let hi = if i + 1 == pieces { w[1] } else { lo + h };
                acc.add(self.rule.integrate(lo, hi, &mut f));
            }
        }
        acc.value()
    }
}

/// Sorted panel edges: `a`, the breakpoints inside (a, b), and `b`.
/// Breakpoints closer than a few ulps to an existing edge are merged.
pub fn panel_edges(a: f64, b: f64, breakpoints: &[f64]) -> Vec<f64> {
    let tol = 8.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0);
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a + tol && x < b - tol)
        .collect();
    inner.sort_by(f64::total_cmp);
    let mut edges = Vec::with_capacity(inner.len() + 2);
    edges.push(a);
    for x in inner {
        if x - edges[edges.len() - 1] > tol {
            edges.push(x);
        }
    }
    edges.push(b);
    edges
}

/// Trapezoid rule on `m` equispaced nodes over one period starting at `start`.
pub fn periodic_trapezoid<F>(start: f64, period: f64, m: usize, mut f: F) -> f64
where
    F: FnMut(f64) -> f64,
{
    let h = period / m as f64;
    let acc: CompensatedSum = (0..m).map(|j| f(start + h * j as f64)).collect();
    h * acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn panel_rule_integrates_step_exactly_when_split_at_jump() {
        let rule = PanelRule::new(4).unwrap();
        let step = |x: f64| if x < 0.3 { -1.0 } else { 2.0 };
        let v = rule.integrate(-1.0, 1.0, &[0.3], step);
        assert!((v - (-1.3 + 2.0 * 0.7)).abs() < 1e-14);
    }

    #[test]
    fn edges_drop_outside_and_duplicate_points() {
        let e = panel_edges(0.0, 1.0, &[0.5, -1.0, 0.5, 2.0, 0.25, 1.0]);
        assert_eq!(e, vec![0.0, 0.25, 0.5, 1.0]);
    }

    #[test]
    fn trapezoid_is_spectral_for_trig_polynomials() {
        let v = periodic_trapezoid(-PI, 2.0 * PI, 16, |t| (3.0 * t).cos().powi(2));
        assert!((v - PI).abs() < 1e-14);
    }

    #[test]
    fn refined_rule_matches_plain_on_polynomials() {
        let rule = PanelRule::new(3).unwrap();
        let f = |x: f64| x * x * x - x;
        let a = rule.integrate(0.0, 2.0, &[], f);
        let b = rule.integrate_refined(0.0, 2.0, &[], 0.1, f);
        assert!((a - 2.0).abs() < 1e-13 && (b - 2.0).abs() < 1e-13);
    }

    #[test]
    fn too_few_nodes_is_rejected() {
        assert!(PanelRule::new(1).is_err());
    }
}
