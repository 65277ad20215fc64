//! Simple strategies over a cover and the regularized choice maps that
//! produce them.
//!
//! A simple strategy assigns probability `x_S` to each leaf `S`; its density
//! on the domain is `x_S / vol(S)`. Since all leaves of a cover share the same
//! volume, the logit map on densities reduces to a plain softmax over leaves.

use std::ops::Deref;

use crate::cover::Cover;
use crate::error::{Error, Result};

/// Probability vector over the leaves of a cover.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleStrategy(Vec<f64>);

impl SimpleStrategy {
    /// Wraps `probs` after checking it is a probability vector (sum within 1e-12).
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Numeric("empty strategy".into()));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::Numeric("strategy entries must be finite and nonnegative".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Numeric(format!("strategy sums to {total}, not 1")));
        }
        Ok(Self(probs))
    }

    pub fn uniform(k: usize) -> Self {
        Self(vec![1.0 / k as f64; k])
    }

    pub(crate) fn from_raw(probs: Vec<f64>) -> Self {
        Self(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Density of the strategy at `point`, read as a piecewise constant
    /// function on `cover`.
    pub fn density_at(&self, cover: &Cover, point: &[f64]) -> Result<f64> {
        if cover.len() != self.0.len() {
            return Err(Error::Dimension {
                expected: cover.len(),
                got: self.0.len(),
            });
        }
        let leaf = cover.leaf_containing(point)?;
        Ok(self.0[leaf] / cover.leaf_volume())
    }
}

impl Deref for SimpleStrategy {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Per-leaf aggregated scores.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector(pub Vec<f64>);

impl ScoreVector {
    pub fn zeros(k: usize) -> Self {
        Self(vec![0.0; k])
    }

    pub fn scaled(&self, eta: f64) -> ScoreVector {
        ScoreVector(self.0.iter().map(|s| eta * s).collect())
    }
}

impl Deref for ScoreVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Decomposable regularizer `h(x) = sum_S theta(x_S)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegularizerKind {
    /// `theta(x) = x log x`; choice map is the logit (softmax) map.
    #[default]
    Negentropy,
    /// `theta(x) = -log x`; choice map found by root finding.
    LogBarrier,
}

impl RegularizerKind {
    /// Kernel value `theta(x)`.
    pub fn kernel(self, x: f64) -> f64 {
        match self {
            RegularizerKind::Negentropy => {
                if x == 0.0 {
                    0.0
                } else {
                    x * x.ln()
                }
            }
            RegularizerKind::LogBarrier => -x.ln(),
        }
    }

    /// Kernel derivative `theta'(x)`.
    pub fn kernel_derivative(self, x: f64) -> f64 {
        match self {
            RegularizerKind::Negentropy => 1.0 + x.ln(),
            RegularizerKind::LogBarrier => -1.0 / x,
        }
    }
}

impl std::str::FromStr for RegularizerKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "negentropy" | "entropy" => Ok(Self::Negentropy),
            "logbarrier" | "log-barrier" | "burg" => Ok(Self::LogBarrier),
            other => Err(format!("unknown regularizer `{other}`")),
        }
    }
}

/// `argmax_x <y, x> - h(x)` over the simplex, for already-scaled scores `y`.
pub fn choice_map(kind: RegularizerKind, scaled_scores: &ScoreVector) -> Result<SimpleStrategy> {
    let mut out = Vec::with_capacity(scaled_scores.len());
    choice_map_into(kind, scaled_scores, 1.0, &mut out)?;
    Ok(SimpleStrategy(out))
}

/// Computes the choice map of `eta * scores` into `out`, reusing its buffer.
pub fn choice_map_into(kind: RegularizerKind, scores: &[f64], eta: f64, out: &mut Vec<f64>) -> Result<()> {
    if scores.is_empty() {
        return Err(Error::Numeric("empty score vector".into()));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::Numeric("non-finite score entry".into()));
    }
    match kind {
        RegularizerKind::Negentropy => {
            softmax_into(scores, eta, out);
            Ok(())
        }
        RegularizerKind::LogBarrier => {
            out.clear();
            out.extend(scores.iter().map(|s| eta * s));
            let xi = log_barrier_threshold(out)?;
            for y in out.iter_mut() {
                *y = 1.0 / (xi - *y);
            }
            renormalize(out);
            Ok(())
        }
    }
}

fn softmax_into(scores: &[f64], eta: f64, out: &mut Vec<f64>) {
    let m = scores
        .iter()
        .map(|s| eta * s)
        .fold(f64::NEG_INFINITY, f64::max);
    out.clear();
    out.extend(scores.iter().map(|s| (eta * s - m).exp()));
    renormalize(out);
}

/// `log x_i` of the logit map at `eta * scores`, computed without underflow.
fn log_softmax(scores: &[f64], eta: f64) -> Vec<f64> {
    let m = scores
        .iter()
        .map(|s| eta * s)
        .fold(f64::NEG_INFINITY, f64::max);
    let log_z = scores
        .iter()
        .map(|s| (eta * s - m).exp())
        .sum::<f64>()
        .ln();
    scores.iter().map(|s| eta * s - m - log_z).collect()
}

fn renormalize(v: &mut [f64]) {
    let total: f64 = v.iter().sum();
    for p in v.iter_mut() {
        *p /= total;
    }
}

/// Log-barrier choice together with the Lagrange threshold `xi`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogBarrierSolution {
    pub strategy: SimpleStrategy,
    pub xi: f64,
}

/// Solves `sum_S 1 / (xi - y_S) = 1` for `xi > max y` and returns
/// `x_S = 1 / (xi - y_S)`.
pub fn log_barrier_solve(scaled_scores: &[f64]) -> Result<LogBarrierSolution> {
    if scaled_scores.is_empty() || scaled_scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::Numeric("scores must be finite and nonempty".into()));
    }
    let xi = log_barrier_threshold(scaled_scores)?;
    let mut probs: Vec<f64> = scaled_scores.iter().map(|y| 1.0 / (xi - y)).collect();
    renormalize(&mut probs);
    Ok(LogBarrierSolution {
        strategy: SimpleStrategy(probs),
        xi,
    })
}

/// Residual `sum_S 1 / (xi - y_S) - 1` of the log-barrier optimality condition.
pub fn log_barrier_residual(scaled_scores: &[f64], xi: f64) -> f64 {
    let m = scaled_scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let shifted = xi - m;
    scaled_scores.iter().map(|y| 1.0 / (shifted - (y - m))).sum::<f64>() - 1.0
}

fn log_barrier_threshold(y: &[f64]) -> Result<f64> {
    let m = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let k = y.len() as f64;
    // shifted scores z = y - max y <= 0; the root lies in [1, K] because
    // x_S <= 1 forces xi - max y >= 1, and all terms are <= 1/K at xi - max y = K
    let f = |xi: f64| -> (f64, f64) {
        let mut value = -1.0;
        let mut slope = 0.0;
        for &v in y {
            let inv = 1.0 / (xi - (v - m));
            value += inv;
            slope -= inv * inv;
        }
        (value, slope)
    };
    let (mut lo, mut hi) = (1.0f64, k.max(1.0));
    let mut xi = lo;
    for _ in 0..200 {
        let (value, slope) = f(xi);
        if value == 0.0 {
            return Ok(xi + m);
        }
        if value > 0.0 {
            lo = xi;
        } else {
            hi = xi;
        }
        // f is convex and decreasing, so Newton from the left never overshoots;
        // bisection guards against rounding at the bracket ends
        let newton = xi - value / slope;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == xi || hi - lo <= f64::EPSILON * hi {
            return Ok(xi + m);
        }
        xi = next;
    }
    Err(Error::Numeric("log-barrier threshold did not converge".into()))
}

/// Dual Fisher norm `sqrt(sum_S x_S v_S^2)`.
pub fn fisher_dual_norm(strategy: &SimpleStrategy, v: &[f64]) -> Result<f64> {
    if strategy.len() != v.len() {
        return Err(Error::Dimension {
            expected: strategy.len(),
            got: v.len(),
        });
    }
    Ok(strategy
        .iter()
        .zip(v)
        .map(|(x, v)| x * v * v)
        .sum::<f64>()
        .sqrt())
}

/// Primal Fisher norm `sqrt(sum_S z_S^2 / x_S)`.
pub fn fisher_primal_norm(strategy: &SimpleStrategy, z: &[f64]) -> Result<f64> {
    if strategy.len() != z.len() {
        return Err(Error::Dimension {
            expected: strategy.len(),
            got: z.len(),
        });
    }
    if strategy.iter().any(|&x| x <= 0.0) {
        return Err(Error::Numeric("Fisher norm needs strictly positive probabilities".into()));
    }
    Ok(strategy
        .iter()
        .zip(z)
        .map(|(x, z)| z * z / x)
        .sum::<f64>()
        .sqrt())
}

/// Scores on the successor of `cover` whose choice map at rate `eta`
/// reproduces the same density on the domain as `eta * scores` on `cover`.
///
/// The played strategy `x` is split evenly between the two children of each
/// leaf and the new scores are `theta'(x / 2) / eta`.
pub fn migrate_scores(
    kind: RegularizerKind,
    scores: &ScoreVector,
    eta: f64,
    cover: &Cover,
) -> Result<ScoreVector> {
    if scores.len() != cover.len() {
        return Err(Error::Dimension {
            expected: cover.len(),
            got: scores.len(),
        });
    }
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::Numeric(format!("learning rate must be positive, got {eta}")));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::Numeric("non-finite score entry".into()));
    }
    let child_scores: Vec<f64> = match kind {
        RegularizerKind::Negentropy => {
            let ln2 = std::f64::consts::LN_2;
            log_softmax(scores, eta)
                .into_iter()
                .map(|log_x| (1.0 + log_x - ln2) / eta)
                .collect()
        }
        RegularizerKind::LogBarrier => {
            let mut x = Vec::with_capacity(scores.len());
            choice_map_into(kind, scores, eta, &mut x)?;
            x.into_iter()
                .map(|p| kind.kernel_derivative(0.5 * p) / eta)
                .collect()
        }
    };
    Ok(ScoreVector(
        child_scores.into_iter().flat_map(|s| [s, s]).collect(),
    ))
}
