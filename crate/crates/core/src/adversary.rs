//! Payoff streams `u_t: X -> [0, R]` and the optimum oracles used for regret
//! accounting.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::BoxDomain;
use crate::error::{Error, Result};
use crate::seed::{mix, unit_f64};

/// An oblivious sequence of bounded Lipschitz payoff functions.
pub trait PayoffStream: Send + Sync {
    fn name(&self) -> &str;

    fn domain(&self) -> &BoxDomain;

    /// Reward bound `R`: every value lies in `[0, R]`.
    fn bound(&self) -> f64;

    /// Declared Lipschitz constant (Euclidean norm).
    fn lipschitz(&self) -> f64;

    /// Whether `u_t` does not depend on `t`.
    fn is_stationary(&self) -> bool;

    /// `u_t(x)` without domain checks.
    fn value(&self, t: u64, x: &[f64]) -> f64;

    /// Closed-form best fixed action over rounds `1..=horizon`, if known.
    fn analytic_best_fixed(&self, _horizon: u64) -> Option<Optimum> {
        None
    }

    /// Closed-form maximiser of `u_t`, if known.
    fn analytic_round_max(&self, _t: u64) -> Option<Optimum> {
        None
    }
}

/// A maximising point and its (mean) payoff.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub point: Vec<f64>,
    pub value: f64,
}

/// `u_t(x)`, checking that `x` lies in the stream's domain.
pub fn evaluate(stream: &dyn PayoffStream, t: u64, x: &[f64]) -> Result<f64> {
    stream.domain().check_point(x)?;
    Ok(stream.value(t, x))
}

/// Points of the uniform grid with `n` points per axis (endpoints included)
/// over the box `[lo, hi]`.
fn grid_points<'a>(lo: &'a [f64], hi: &'a [f64], n: usize) -> impl Iterator<Item = Vec<f64>> + 'a {
    let d = lo.len();
    let total = n.pow(d as u32);
    (0..total).map(move |mut idx| {
        let mut p = vec![0.0; d];
        for axis in (0..d).rev() {
            let i = idx % n;
            idx /= n;
            p[axis] = if n == 1 {
                0.5 * (lo[axis] + hi[axis])
            } else {
                lo[axis] + (hi[axis] - lo[axis]) * i as f64 / (n - 1) as f64
            };
        }
        p
    })
}

fn argmax_on_grid<F: Fn(&[f64]) -> f64>(lo: &[f64], hi: &[f64], n: usize, f: F) -> Optimum {
    let mut best = Optimum {
        point: lo.to_vec(),
        value: f64::NEG_INFINITY,
    };
    for p in grid_points(lo, hi, n) {
        let v = f(&p);
        if v > best.value {
            best = Optimum { point: p, value: v };
        }
    }
    best
}

/// Grid argmax of a fixed function followed by a few zoomed grids around the
/// incumbent, each one cell wide on either side.
fn refined_argmax<F: Fn(&[f64]) -> f64>(domain: &BoxDomain, n: usize, f: F) -> Optimum {
    let mut best = argmax_on_grid(domain.lo(), domain.hi(), n, &f);
    let mut half_width: Vec<f64> = domain
        .lo()
        .iter()
        .zip(domain.hi())
        .map(|(l, h)| (h - l) / (n - 1) as f64)
        .collect();
    let zoom_n = n.clamp(3, 65);
    for _ in 0..4 {
        let lo: Vec<f64> = best
            .point
            .iter()
            .zip(&half_width)
            .zip(domain.lo())
            .map(|((x, w), l)| (x - w).max(*l))
            .collect();
        let hi: Vec<f64> = best
            .point
            .iter()
            .zip(&half_width)
            .zip(domain.hi())
            .map(|((x, w), h)| (x + w).min(*h))
            .collect();
        let local = argmax_on_grid(&lo, &hi, zoom_n, &f);
        if local.value > best.value {
            best = local;
        }
        for (w, (l, h)) in half_width.iter_mut().zip(lo.iter().zip(&hi)) {
            *w = (h - l) / (zoom_n - 1) as f64;
        }
    }
    best
}

fn check_grid(grid_n: usize) -> Result<()> {
    if grid_n < 2 {
        return Err(Error::config("oracle_grid", format!("need at least 2 points per axis, got {grid_n}")));
    }
    Ok(())
}

/// Best fixed action in hindsight over rounds `1..=horizon` and its mean
/// payoff `sum_t u_t(x*) / T`.
pub fn best_fixed(stream: &dyn PayoffStream, horizon: u64, grid_n: usize) -> Result<Optimum> {
    check_grid(grid_n)?;
    let horizon = horizon.max(1);
    if let Some(opt) = stream.analytic_best_fixed(horizon) {
        return Ok(opt);
    }
    if stream.is_stationary() {
        return Ok(refined_argmax(stream.domain(), grid_n, |x| stream.value(1, x)));
    }
    let domain = stream.domain();
    Ok(argmax_on_grid(domain.lo(), domain.hi(), grid_n, |x| {
        (1..=horizon).map(|t| stream.value(t, x)).sum::<f64>() / horizon as f64
    }))
}

/// Maximiser of `u_t` and its value.
pub fn per_round_max(stream: &dyn PayoffStream, t: u64, grid_n: usize) -> Result<Optimum> {
    check_grid(grid_n)?;
    if let Some(opt) = stream.analytic_round_max(t) {
        return Ok(opt);
    }
    if stream.is_stationary() {
        return best_fixed(stream, 1, grid_n);
    }
    Ok(refined_argmax(stream.domain(), grid_n, |x| stream.value(t, x)))
}

/// `V_T = sum_{t <= T} sup_x |u_{t+1}(x) - u_t(x)|` with `u_{T+1} = u_T`,
/// sup taken over the oracle grid.
pub fn total_variation(stream: &dyn PayoffStream, horizon: u64, grid_n: usize) -> Result<f64> {
    check_grid(grid_n)?;
    if stream.is_stationary() || horizon <= 1 {
        return Ok(0.0);
    }
    let domain = stream.domain();
    let points: Vec<Vec<f64>> = grid_points(domain.lo(), domain.hi(), grid_n).collect();
    Ok((1..horizon)
        .map(|t| {
            points
                .iter()
                .map(|x| (stream.value(t + 1, x) - stream.value(t, x)).abs())
                .fold(0.0, f64::max)
        })
        .sum())
}

/// One term `amplitude * sin(2 pi <frequency, x> + phase)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SineTerm {
    pub amplitude: f64,
    pub frequency: Vec<f64>,
    pub phase: f64,
}

/// Stationary trigonometric payoff on `[0, 1]^d`, normalised into `[0, 1]`
/// by `(raw - min) / (max - min)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SineStream {
    name: String,
    domain: BoxDomain,
    terms: Vec<SineTerm>,
    raw_min: f64,
    raw_max: f64,
    lipschitz: f64,
}

/// Adversary seed of the default multi-term `Sine2D` stream.
pub const SINE2D_SEED: u64 = 2021;

impl SineStream {
    /// `u(x) = (1 + sin 2 pi x) / 2` on `[0, 1]`.
    pub fn sine1d() -> Self {
        let terms = vec![SineTerm {
            amplitude: 1.0,
            frequency: vec![1.0],
            phase: 0.0,
        }];
        Self {
            name: "sine1d".into(),
            domain: BoxDomain::cube(1, 0.0, 1.0).expect("unit interval"),
            lipschitz: PI,
            terms,
            raw_min: -1.0,
            raw_max: 1.0,
        }
    }

    /// Three seeded terms on `[0, 1]^2`.
    pub fn sine2d(seed: u64) -> Self {
        let mut s = Self::random(2, 3, seed);
        s.name = "sine2d".into();
        s
    }

    /// `n_terms` terms with amplitudes in `[0.3, 1]`, per-axis frequencies in
    /// `[0.5, 2.5]` and uniform phases, drawn from `seed`.
    pub fn random(d: usize, n_terms: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms = (0..n_terms.max(1))
            .map(|_| SineTerm {
                amplitude: rng.gen_range(0.3..=1.0),
                frequency: (0..d).map(|_| rng.gen_range(0.5..=2.5)).collect(),
                phase: rng.gen_range(0.0..2.0 * PI),
            })
            .collect();
        Self::from_terms(format!("sine{d}d-multi"), d, terms)
    }

    /// Normalises `terms` over a dense grid (4096 points for `d = 1`, 512^2
    /// for `d = 2`, 64 per axis beyond).
    pub fn from_terms(name: String, d: usize, terms: Vec<SineTerm>) -> Self {
        let domain = BoxDomain::cube(d, 0.0, 1.0).expect("unit cube");
        let n = match d {
            1 => 4096,
            2 => 512,
            _ => 64,
        };
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in grid_points(domain.lo(), domain.hi(), n) {
            let v = raw_sine(&terms, &p);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if hi - lo < 1e-12 {
            hi = lo + 1.0;
        }
        let slope: f64 = terms
            .iter()
            .map(|t| t.amplitude.abs() * 2.0 * PI * t.frequency.iter().map(|f| f * f).sum::<f64>().sqrt())
            .sum();
        Self {
            name,
            domain,
            lipschitz: slope / (hi - lo),
            terms,
            raw_min: lo,
            raw_max: hi,
        }
    }

    pub fn terms(&self) -> &[SineTerm] {
        &self.terms
    }
}

fn raw_sine(terms: &[SineTerm], x: &[f64]) -> f64 {
    terms
        .iter()
        .map(|t| {
            let arg: f64 = t.frequency.iter().zip(x).map(|(f, x)| f * x).sum();
            t.amplitude * (2.0 * PI * arg + t.phase).sin()
        })
        .sum()
}

impl PayoffStream for SineStream {
    fn name(&self) -> &str {
        &self.name
    }

    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn bound(&self) -> f64 {
        1.0
    }

    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    fn is_stationary(&self) -> bool {
        true
    }

    fn value(&self, _t: u64, x: &[f64]) -> f64 {
        ((raw_sine(&self.terms, x) - self.raw_min) / (self.raw_max - self.raw_min)).clamp(0.0, 1.0)
    }
}

/// Gaussian bump `exp(-|x - mu_t|^2 / (2 s^2))` on `[-1, 1]^d` whose center
/// `mu_t` is drawn i.i.d. uniformly on the domain each round.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussStream {
    name: String,
    domain: BoxDomain,
    width: f64,
    seed: u64,
}

impl GaussStream {
    pub const DEFAULT_WIDTH: f64 = 0.5;

    pub fn new(d: usize, width: f64, seed: u64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::config("width", format!("bump width must be positive, got {width}")));
        }
        Ok(Self {
            name: format!("gauss{d}d"),
            domain: BoxDomain::cube(d, -1.0, 1.0)?,
            width,
            seed,
        })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Bump center of round `t`, a pure function of `(seed, t)`.
    pub fn mean(&self, t: u64) -> Vec<f64> {
        let round = mix(self.seed, t);
        (0..self.domain.dim() as u64)
            .map(|axis| -1.0 + 2.0 * unit_f64(mix(round, axis)))
            .collect()
    }

    fn bump(&self, mu: &[f64], x: &[f64]) -> f64 {
        let r2: f64 = x.iter().zip(mu).map(|(a, b)| (a - b) * (a - b)).sum();
        (-r2 / (2.0 * self.width * self.width)).exp()
    }
}

impl PayoffStream for GaussStream {
    fn name(&self) -> &str {
        &self.name
    }

    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn bound(&self) -> f64 {
        1.0
    }

    fn lipschitz(&self) -> f64 {
        1.0 / (self.width * (0.5f64).exp())
    }

    fn is_stationary(&self) -> bool {
        false
    }

    fn value(&self, t: u64, x: &[f64]) -> f64 {
        self.bump(&self.mean(t), x)
    }

    /// The mean payoff is symmetric and peaked at the domain center; its value
    /// is the empirical average of the realised rounds.
    fn analytic_best_fixed(&self, horizon: u64) -> Option<Optimum> {
        let center = self.domain.center();
        let value = (1..=horizon).map(|t| self.value(t, &center)).sum::<f64>() / horizon as f64;
        Some(Optimum { point: center, value })
    }

    fn analytic_round_max(&self, t: u64) -> Option<Optimum> {
        let mu = self.mean(t);
        let value = self.bump(&mu, &mu);
        Some(Optimum { point: mu, value })
    }
}

/// `u_t = c` everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantStream {
    domain: BoxDomain,
    level: f64,
    bound: f64,
}

impl ConstantStream {
    pub fn new(domain: BoxDomain, level: f64, bound: f64) -> Result<Self> {
        if !(level >= 0.0 && level <= bound) {
            return Err(Error::RewardRange { reward: level, bound });
        }
        Ok(Self { domain, level, bound })
    }
}

impl PayoffStream for ConstantStream {
    fn name(&self) -> &str {
        "constant"
    }

    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn bound(&self) -> f64 {
        self.bound
    }

    fn lipschitz(&self) -> f64 {
        0.0
    }

    fn is_stationary(&self) -> bool {
        true
    }

    fn value(&self, _t: u64, _x: &[f64]) -> f64 {
        self.level
    }
}

type PayoffFn = dyn Fn(u64, &[f64]) -> f64 + Send + Sync;

/// A user-supplied payoff function with declared metadata.
#[derive(Clone)]
pub struct CustomStream {
    name: String,
    domain: BoxDomain,
    bound: f64,
    lipschitz: f64,
    stationary: bool,
    f: Arc<PayoffFn>,
}

impl CustomStream {
    pub fn new<F>(name: &str, domain: BoxDomain, bound: f64, lipschitz: f64, stationary: bool, f: F) -> Self
    where
        F: Fn(u64, &[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            domain,
            bound,
            lipschitz,
            stationary,
            f: Arc::new(f),
        }
    }
}

impl std::fmt::Debug for CustomStream {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CustomStream")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("bound", &self.bound)
            .finish_non_exhaustive()
    }
}

impl PayoffStream for CustomStream {
    fn name(&self) -> &str {
        &self.name
    }

    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn bound(&self) -> f64 {
        self.bound
    }

    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    fn is_stationary(&self) -> bool {
        self.stationary
    }

    fn value(&self, t: u64, x: &[f64]) -> f64 {
        (self.f)(t, x)
    }
}

/// Named adversaries selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryKind {
    Sine1d,
    Sine2d,
    Gauss1d,
    Gauss2d,
}

impl AdversaryKind {
    pub fn label(self) -> &'static str {
        match self {
            AdversaryKind::Sine1d => "sine1d",
            AdversaryKind::Sine2d => "sine2d",
            AdversaryKind::Gauss1d => "gauss1d",
            AdversaryKind::Gauss2d => "gauss2d",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            AdversaryKind::Sine1d | AdversaryKind::Gauss1d => 1,
            AdversaryKind::Sine2d | AdversaryKind::Gauss2d => 2,
        }
    }

    /// Builds the stream. Sine streams use `adversary_seed` for their
    /// coefficients; Gauss streams draw their centers from `run_seed`.
    pub fn build(self, adversary_seed: u64, run_seed: u64) -> Result<Box<dyn PayoffStream>> {
        Ok(match self {
            AdversaryKind::Sine1d => Box::new(SineStream::sine1d()),
            AdversaryKind::Sine2d => Box::new(SineStream::sine2d(adversary_seed)),
            AdversaryKind::Gauss1d => Box::new(GaussStream::new(
                1,
                GaussStream::DEFAULT_WIDTH,
                mix(adversary_seed, run_seed),
            )?),
            AdversaryKind::Gauss2d => Box::new(GaussStream::new(
                2,
                GaussStream::DEFAULT_WIDTH,
                mix(adversary_seed, run_seed),
            )?),
        })
    }
}

impl std::str::FromStr for AdversaryKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "sine1d" => Ok(Self::Sine1d),
            "sine2d" => Ok(Self::Sine2d),
            "gauss1d" => Ok(Self::Gauss1d),
            "gauss2d" => Ok(Self::Gauss2d),
            other => Err(format!("unknown adversary `{other}` (expected sine1d, sine2d, gauss1d or gauss2d)")),
        }
    }
}

impl std::fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sine1d_values() {
        let s = SineStream::sine1d();
        assert_eq!(evaluate(&s, 1, &[0.25]).unwrap(), 1.0);
        assert_eq!(evaluate(&s, 9, &[0.0]).unwrap(), 0.5);
        assert!(matches!(evaluate(&s, 1, &[1.5]), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn gauss_value_at_its_center() {
        let g = GaussStream::new(1, 0.5, 3).unwrap();
        let mu = g.mean(17);
        assert_eq!(evaluate(&g, 17, &mu).unwrap(), 1.0);
        let g = GaussStream::new(1, 0.5, 3).unwrap();
        assert_eq!(g.bump(&[0.3], &[0.3]), 1.0);
        assert!(GaussStream::new(1, 0.0, 3).is_err());
    }

    #[test]
    fn best_fixed_sine1d() {
        let opt = best_fixed(&SineStream::sine1d(), 100, 4096).unwrap();
        assert_abs_diff_eq!(opt.point[0], 0.25, epsilon = 1e-6);
        assert_abs_diff_eq!(opt.value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn best_fixed_gauss_is_center() {
        for d in [1, 2] {
            let g = GaussStream::new(d, 0.5, 11).unwrap();
            let opt = best_fixed(&g, 1000, 64).unwrap();
            assert!(opt.point.iter().all(|&x| x == 0.0));
            assert!(opt.value > 0.0 && opt.value < 1.0);
        }
    }

    #[test]
    fn sine2d_grid_argmax_matches_fine_grid() {
        let s = SineStream::sine2d(SINE2D_SEED);
        let coarse = best_fixed(&s, 1, 512).unwrap();
        let fine = argmax_on_grid(s.domain().lo(), s.domain().hi(), 4096, |x| s.value(1, x));
        let cell = 1.0 / 511.0;
        for (a, b) in coarse.point.iter().zip(&fine.point) {
            assert!((a - b).abs() <= cell, "{coarse:?} vs {fine:?}");
        }
        assert!(coarse.value >= fine.value - 1e-12);
    }

    #[test]
    fn per_round_max_examples() {
        let s = SineStream::sine1d();
        let fixed = best_fixed(&s, 10, 4096).unwrap();
        for t in [1, 5, 1000] {
            assert_eq!(per_round_max(&s, t, 4096).unwrap(), fixed);
        }
        let g = GaussStream::new(1, 0.5, 5).unwrap();
        for t in 1..100 {
            let opt = per_round_max(&g, t, 64).unwrap();
            assert_eq!(opt.point, g.mean(t));
            assert_eq!(opt.value, 1.0);
        }
    }

    #[test]
    fn total_variation_examples() {
        assert_eq!(total_variation(&SineStream::sine1d(), 1000, 128).unwrap(), 0.0);
        let g = GaussStream::new(1, 0.5, 8).unwrap();
        assert_eq!(total_variation(&g, 1, 128).unwrap(), 0.0);
        let (m1, m2) = (g.mean(1), g.mean(2));
        assert_ne!(m1, m2);
        let n = 257;
        let expected = (0..n)
            .map(|i| {
                let x = [-1.0 + 2.0 * i as f64 / (n - 1) as f64];
                (g.bump(&m2, &x) - g.bump(&m1, &x)).abs()
            })
            .fold(0.0, f64::max);
        let v = total_variation(&g, 2, n).unwrap();
        assert!(v > 0.0);
        assert_eq!(v, expected);
        assert!(total_variation(&g, 2, 1).is_err());
    }

    fn streams() -> Vec<Box<dyn PayoffStream>> {
        vec![
            Box::new(SineStream::sine1d()),
            Box::new(SineStream::sine2d(SINE2D_SEED)),
            Box::new(SineStream::random(1, 4, 77)),
            Box::new(GaussStream::new(1, 0.5, 1).unwrap()),
            Box::new(GaussStream::new(2, 0.5, 2).unwrap()),
        ]
    }

    #[test]
    fn boundedness_and_lipschitz_sanity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for s in streams() {
            let dom = s.domain().clone();
            let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
                dom.lo()
                    .iter()
                    .zip(dom.hi())
                    .map(|(l, h)| rng.gen_range(*l..=*h))
                    .collect()
            };
            for _ in 0..100_000 {
                let t = rng.gen_range(1..1_000_000);
                let x = draw(&mut rng);
                let v = evaluate(s.as_ref(), t, &x).unwrap();
                assert!((0.0..=s.bound()).contains(&v), "{}: {v}", s.name());
            }
            for _ in 0..20_000 {
                let t = rng.gen_range(1..1000);
                let x = draw(&mut rng);
                let y: Vec<f64> = x
                    .iter()
                    .enumerate()
                    .map(|(i, xi)| (xi + rng.gen_range(-0.05..0.05)).clamp(dom.lo()[i], dom.hi()[i]))
                    .collect();
                let dist = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                if dist < 1e-9 {
                    continue;
                }
                let ratio = (s.value(t, &x) - s.value(t, &y)).abs() / dist;
                assert!(ratio <= 1.01 * s.lipschitz(), "{}: {ratio} > {}", s.name(), s.lipschitz());
            }
        }
    }

    #[test]
    fn gauss_mean_payoff_peaks_at_center() {
        for d in [1, 2] {
            let g = GaussStream::new(d, 0.5, 99).unwrap();
            let avg = |x: &[f64]| (1..=100_000u64).map(|t| g.value(t, x)).sum::<f64>() / 1e5;
            let center = avg(&vec![0.0; d]);
            assert!(center > avg(&vec![0.8; d]));
            assert!(center > avg(&vec![-0.8; d]));
        }
    }

    #[test]
    fn evaluation_is_pure() {
        for s in streams() {
            let x = s.domain().center();
            assert_eq!(s.value(12, &x), s.value(12, &x));
        }
        let a = GaussStream::new(1, 0.5, 1).unwrap();
        let b = GaussStream::new(1, 0.5, 1).unwrap();
        assert_eq!(a.mean(500), b.mean(500));
    }

    #[test]
    fn constant_and_custom_streams() {
        let dom = BoxDomain::cube(1, 0.0, 1.0).unwrap();
        let c = ConstantStream::new(dom.clone(), 0.4, 1.0).unwrap();
        assert_eq!(best_fixed(&c, 10, 16).unwrap().value, 0.4);
        assert!(ConstantStream::new(dom.clone(), 2.0, 1.0).is_err());
        let f = CustomStream::new("step", dom, 1.0, 0.0, false, |t, _| if t % 2 == 0 { 1.0 } else { 0.0 });
        assert_eq!(total_variation(&f, 5, 4).unwrap(), 4.0);
        assert_abs_diff_eq!(best_fixed(&f, 4, 4).unwrap().value, 0.5);
    }

    #[test]
    fn adversary_kinds_parse() {
        for k in ["sine1d", "sine2d", "gauss1d", "gauss2d"] {
            let kind: AdversaryKind = k.parse().unwrap();
            assert_eq!(kind.label(), k);
            let s = kind.build(0, 1).unwrap();
            assert_eq!(s.domain().dim(), kind.dim());
        }
        assert!("nope".parse::<AdversaryKind>().is_err());
    }
}
