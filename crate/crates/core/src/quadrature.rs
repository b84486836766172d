//! Adaptive Gauss–Legendre integration and tabulated running integrals.
//!
//! Every panel is evaluated with a fixed 10-point Gauss–Legendre rule, both
//! whole and as two halves; the difference is the panel's error estimate.
//! Refinement is global: the panel with the largest estimate is split until
//! the summed estimate meets the requested relative tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const RULE_ORDER: usize = 10;

/// Panel budget before giving up with [`Error::NonConvergence`].
pub const MAX_PANELS: usize = 20_000;

/// `|halves - whole|` understates the error of the halves near endpoint
/// singularities by up to ~2.4x, so estimates are inflated by this factor.
const ERROR_SAFETY: f64 = 4.0;

/// Absolute floor under the relative tolerance.
pub const ABS_FLOOR: f64 = 1e-300;

/// Nodes and weights on [-1, 1], by Newton iteration on `P_n`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(RULE_ORDER))
}

fn gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = rule();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let sum: f64 = nodes
        .iter()
        .zip(weights)
        .map(|(x, w)| w * f(mid + half * x))
        .sum();
    sum * half
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
}

impl Estimate {
    pub fn rel_error(&self) -> f64 {
        if self.value == 0.0 {
            self.abs_error
        } else {
            (self.abs_error / self.value).abs()
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    halves: (f64, f64),
    value: f64,
    error: f64,
    // Creation order, for a deterministic heap tie-break.
    seq: usize,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, seq: usize) -> Self {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // Too narrow to split any further.
            return Panel {
                a,
                b,
                halves: (whole, 0.0),
                value: whole,
                error: 0.0,
                seq,
            };
        }
        let halves = (gauss(f, a, mid), gauss(f, mid, b));
        let value = halves.0 + halves.1;
        let error = ERROR_SAFETY * (value - whole).abs();
        Panel {
            a,
            b,
            halves,
            value,
            error,
            seq,
        }
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// `∫_a^b f` to `rel_tol`, returning the value only.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    integrate_with_error(f, a, b, rel_tol).map(|e| e.value)
}

/// `∫_a^b f` with the achieved error estimate.
///
/// `f` is only evaluated at interior points, so integrable endpoint
/// singularities are tolerated (slowly). `a == b` returns zero without
/// calling `f`.
pub fn integrate_with_error<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::Domain {
            what: "integration interval length",
            value: b - a,
        });
    }
    if !(rel_tol > 0.0 && rel_tol <= 1e-2) {
        return Err(Error::Domain {
            what: "relative tolerance in (0, 1e-2]",
            value: rel_tol,
        });
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            abs_error: 0.0,
            panels: 0,
        });
    }

    let mut seq = 0;
    let first = Panel::new(&f, a, b, gauss(&f, a, b), seq);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    loop {
        if !value.is_finite() {
            return Err(Error::NonConvergence {
                estimate: value,
                achieved: f64::INFINITY,
                panels: heap.len(),
            });
        }
        if error <= rel_tol * value.abs() || error <= ABS_FLOOR {
            // Running sums drift; settle on a fresh sum before accepting.
            let exact_error: f64 = heap.iter().map(|p| p.error).sum();
            let exact_value = sum_in_order(&heap);
            if exact_error <= rel_tol * exact_value.abs() || exact_error <= ABS_FLOOR {
                return Ok(Estimate {
                    value: exact_value,
                    abs_error: exact_error,
                    panels: heap.len(),
                });
            }
            value = exact_value;
            error = exact_error;
        }
        if heap.len() >= MAX_PANELS {
            let estimate = sum_in_order(&heap);
            return Err(Error::NonConvergence {
                estimate,
                achieved: (error / estimate).abs(),
                panels: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        if worst.error == 0.0 {
            // Nothing left that can be refined.
            heap.push(worst);
            let estimate = sum_in_order(&heap);
            return Err(Error::NonConvergence {
                estimate,
                achieved: (error / estimate).abs(),
                panels: heap.len(),
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        seq += 1;
        let left = Panel::new(&f, worst.a, mid, worst.halves.0, seq);
        seq += 1;
        let right = Panel::new(&f, mid, worst.b, worst.halves.1, seq);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
}

/// Sums panel values left to right so the result does not depend on heap
/// layout.
fn sum_in_order(heap: &BinaryHeap<Panel>) -> f64 {
    let mut panels: Vec<(f64, f64)> = heap.iter().map(|p| (p.a, p.value)).collect();
    panels.sort_by(|x, y| x.0.total_cmp(&y.0));
    panels.iter().map(|p| p.1).sum()
}

/// A monotone function sampled at strictly increasing abscissae, with
/// shape-preserving cubic Hermite interpolation between nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeTable {
    abscissae: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl CumulativeTable {
    /// Builds a table from samples. Slopes, when known, should be the exact
    /// derivative at each node; non-finite entries (and `None`) fall back to
    /// a three-point harmonic-mean estimate.
    pub fn from_nodes(
        abscissae: Vec<f64>,
        values: Vec<f64>,
        slopes: Option<Vec<f64>>,
    ) -> Result<Self> {
        validate_grid(&abscissae)?;
        if values.len() != abscissae.len() {
            return Err(Error::Grid("values and abscissae differ in length"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Grid("table values must be finite"));
        }
        let estimated = estimate_slopes(&abscissae, &values);
        let mut slopes = match slopes {
            Some(s) if s.len() == abscissae.len() => s
                .into_iter()
                .zip(&estimated)
                .map(|(s, e)| if s.is_finite() { s } else { *e })
                .collect(),
            Some(_) => return Err(Error::Grid("slopes and abscissae differ in length")),
            None => estimated,
        };
        limit_slopes(&abscissae, &values, &mut slopes);
        Ok(CumulativeTable {
            abscissae,
            values,
            slopes,
        })
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.abscissae
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn first(&self) -> f64 {
        self.abscissae[0]
    }

    pub fn last(&self) -> f64 {
        self.abscissae[self.abscissae.len() - 1]
    }

    pub fn last_value(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn interpolate(&self, x: f64) -> Result<f64> {
        interpolate(self, x)
    }
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::Grid("need at least two nodes"));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::Grid("nodes must be finite"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Grid("nodes must be strictly increasing"));
    }
    Ok(())
}

fn estimate_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let secant = |k: usize| (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
    let mut m = vec![0.0; n];
    m[0] = secant(0);
    m[n - 1] = secant(n - 2);
    for k in 1..n - 1 {
        let (d0, d1) = (secant(k - 1), secant(k));
        if d0 * d1 > 0.0 {
            let (h0, h1) = (x[k] - x[k - 1], x[k + 1] - x[k]);
            let (w1, w2) = (2.0 * h1 + h0, h1 + 2.0 * h0);
            m[k] = (w1 + w2) / (w1 / d0 + w2 / d1);
        }
    }
    m
}

/// Fritsch–Carlson limiter: keeps each interval's Hermite cubic monotone.
fn limit_slopes(x: &[f64], y: &[f64], m: &mut [f64]) {
    for k in 0..x.len() - 1 {
        let delta = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
        if delta == 0.0 {
            m[k] = 0.0;
            m[k + 1] = 0.0;
            continue;
        }
        let mut alpha = m[k] / delta;
        let mut beta = m[k + 1] / delta;
        if alpha < 0.0 {
            alpha = 0.0;
            m[k] = 0.0;
        }
        if beta < 0.0 {
            beta = 0.0;
            m[k + 1] = 0.0;
        }
        let norm = alpha * alpha + beta * beta;
        if norm > 9.0 {
            let tau = 3.0 / norm.sqrt();
            m[k] = tau * alpha * delta;
            m[k + 1] = tau * beta * delta;
        }
    }
}

/// Running integral of `f` over `grid`, one adaptive integral per panel.
/// `f` is sampled at each node for the interpolation slopes.
pub fn build_cumulative<F: Fn(f64) -> f64>(
    f: F,
    grid: &[f64],
    rel_tol: f64,
) -> Result<CumulativeTable> {
    validate_grid(grid)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut running = 0.0;
    values.push(running);
    for (panel, w) in grid.windows(2).enumerate() {
        let piece = integrate(&f, w[0], w[1], rel_tol).map_err(|source| Error::Panel {
            panel,
            source: Box::new(source),
        })?;
        running += piece;
        values.push(running);
    }
    let slopes = grid.iter().map(|&x| f(x)).collect();
    CumulativeTable::from_nodes(grid.to_vec(), values, Some(slopes))
}

/// Monotone cubic Hermite interpolation; exact at nodes.
pub fn interpolate(table: &CumulativeTable, x: f64) -> Result<f64> {
    let (lo, hi) = (table.first(), table.last());
    let slack = 1e-12 * (hi - lo);
    if !(x >= lo - slack && x <= hi + slack) {
        return Err(Error::OutOfRange { x, lo, hi });
    }
    let x = x.clamp(lo, hi);
    let xs = &table.abscissae;
    let k = xs.partition_point(|&node| node <= x);
    if k > 0 && xs[k - 1] == x {
        return Ok(table.values[k - 1]);
    }
    // x lies strictly inside [xs[k-1], xs[k]].
    let k = k - 1;
    let h = xs[k + 1] - xs[k];
    let s = (x - xs[k]) / h;
    let (y0, y1) = (table.values[k], table.values[k + 1]);
    let (m0, m1) = (table.slopes[k] * h, table.slopes[k + 1] * h);
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    Ok(h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1)
}
