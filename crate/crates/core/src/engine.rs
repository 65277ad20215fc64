//! Hierarchical dual averaging learners.
//!
//! [`Hda`] keeps per-leaf scores on a dyadic [`Cover`], plays the choice map of
//! the scaled scores, and refines the cover on a logarithmic splitting
//! schedule, migrating scores so the played density is unchanged by a split.
//! [`GridExp3`] is the fixed-mesh exponential-weights baseline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::{BoxDomain, Cover};
use crate::error::{Error, Result};
use crate::estimate::{perturb_into, EstimatorKind};
use crate::simplex::{choice_map_into, migrate_scores, RegularizerKind, ScoreVector, SimpleStrategy};

/// Largest supported cover depth; `K <= 2^24` leaves.
pub const MAX_DEPTH: u32 = 24;

// Absorbs rounding of a * log2(t) at exact integers (a = 1, t = 2^k).
const FLOOR_GUARD: f64 = 1.0 / (1u64 << 40) as f64;

fn guarded_floor(v: f64) -> f64 {
    (v + FLOOR_GUARD).floor()
}

/// Learning-rate and splitting schedules: `eta_t = gamma0 * t^-p` and
/// scheduler sequence `v_t = a * log2(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub p: f64,
    pub gamma0: f64,
    pub a: f64,
}

impl Schedule {
    pub fn new(p: f64, gamma0: f64, a: f64) -> Result<Self> {
        let s = Self { p, gamma0, a };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && self.p >= 0.0) {
            return Err(Error::config("p", format!("learning-rate exponent must be >= 0, got {}", self.p)));
        }
        if !(self.gamma0.is_finite() && self.gamma0 > 0.0) {
            return Err(Error::config("gamma0", format!("rate coefficient must be > 0, got {}", self.gamma0)));
        }
        if !(self.a >= 0.0 && self.a <= 1.0) {
            return Err(Error::config("a", format!("splitting coefficient must lie in [0, 1], got {}", self.a)));
        }
        Ok(())
    }

    pub fn learning_rate(&self, t: u64) -> f64 {
        self.gamma0 * (t as f64).powf(-self.p)
    }

    /// `v_t = a log2 t`, with `v_0 = 0`.
    pub fn scheduler(&self, t: u64) -> f64 {
        if t == 0 {
            0.0
        } else {
            self.a * (t as f64).log2()
        }
    }
}

/// Whether round `t` is a splitting round for `v_t = a log2 t`.
pub fn should_split(t: u64, a: f64) -> bool {
    if t <= 1 || a <= 0.0 {
        return false;
    }
    let now = guarded_floor(a * (t as f64).log2());
    let before = guarded_floor(a * ((t - 1) as f64).log2());
    now == before + 1.0
}

/// Number of splitting events performed before round `t`, `floor(a log2 t)`.
pub fn depth_at(t: u64, a: f64) -> u32 {
    if t <= 1 || a <= 0.0 {
        return 0;
    }
    guarded_floor(a * (t as f64).log2()) as u32
}

/// Leaf count `K_t = 2^floor(a log2 t)` of the logarithmic schedule.
pub fn leaves_at(t: u64, a: f64) -> usize {
    1usize << depth_at(t, a)
}

/// How a point is drawn once a leaf has been chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PointSampling {
    /// Uniformly inside the leaf.
    #[default]
    Uniform,
    /// Always the leaf center; consumes no randomness.
    Center,
}

/// A played action.
#[derive(Debug, Clone, PartialEq)]
pub struct Action {
    pub point: Vec<f64>,
    /// 0-based leaf (or arm) index.
    pub leaf: usize,
}

/// The act/update surface shared by all learners.
pub trait Learner: Send {
    /// Draws the action for the current round.
    fn act(&mut self) -> Result<Action>;
    /// Feeds back the reward of the last action and advances the round.
    fn update(&mut self, reward: f64) -> Result<()>;
    /// Current round `t >= 1`.
    fn round(&self) -> u64;
    /// Number of leaves (or arms) of the current cover.
    fn leaves(&self) -> usize;
    /// Distribution the last action was drawn from.
    fn sampling_strategy(&self) -> &[f64];
}

/// Everything needed to build an [`Hda`] learner.
#[derive(Debug, Clone, PartialEq)]
pub struct HdaConfig {
    pub domain: BoxDomain,
    pub schedule: Schedule,
    pub regularizer: RegularizerKind,
    pub estimator: EstimatorKind,
    pub sampling: PointSampling,
    /// Depth of the initial cover (0 = the whole domain).
    pub initial_depth: u32,
    pub seed: u64,
}

impl HdaConfig {
    /// HEW on `domain` with the static preset for its dimension.
    pub fn hew(domain: BoxDomain, seed: u64) -> Self {
        let preset = hew_preset(domain.dim());
        Self {
            domain,
            schedule: preset.schedule,
            regularizer: preset.regularizer,
            estimator: preset.estimator,
            sampling: PointSampling::Uniform,
            initial_depth: 0,
            seed,
        }
    }
}

/// Tuned parameter bundle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub schedule: Schedule,
    pub regularizer: RegularizerKind,
    pub estimator: EstimatorKind,
}

/// Static-regret tuning for HEW in dimension `d`:
/// `p = (d+1)/(d+2)`, `a = d/(d+2)`, `gamma0 = 1`, rewards in `[0, 1]`.
pub fn hew_preset(d: usize) -> Preset {
    let d = d.max(1) as f64;
    Preset {
        schedule: Schedule {
            p: (d + 1.0) / (d + 2.0),
            gamma0: 1.0,
            a: d / (d + 2.0),
        },
        regularizer: RegularizerKind::Negentropy,
        estimator: EstimatorKind::Iwe { bound: 1.0 },
    }
}

/// Dynamic-regret tuning for payoff variation `V_T = O(T^rho)`:
/// `p = (1-rho)(d+1)/(d+3)`, `a = (1-rho)d/(d+3)`.
pub fn hew_dynamic_preset(d: usize, rho: f64) -> Result<Preset> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::config("rho", format!("variation exponent must lie in [0, 1), got {rho}")));
    }
    let d = d.max(1) as f64;
    let mut preset = hew_preset(d as usize);
    preset.schedule.p = (1.0 - rho) * (d + 1.0) / (d + 3.0);
    preset.schedule.a = (1.0 - rho) * d / (d + 3.0);
    Ok(preset)
}

/// Draws an index from `probs` by inverse CDF on one uniform variate.
fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // u landed in the rounding gap above the last partial sum
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1)
}

/// The hierarchical dual averaging learner.
#[derive(Debug, Clone)]
pub struct Hda {
    cover: Cover,
    scores: ScoreVector,
    t: u64,
    schedule: Schedule,
    regularizer: RegularizerKind,
    estimator: EstimatorKind,
    point_sampling: PointSampling,
    rng: ChaCha8Rng,
    played: Vec<f64>,
    sampling: Vec<f64>,
    pending: Option<usize>,
}

impl Hda {
    pub fn new(config: HdaConfig) -> Result<Self> {
        config.schedule.validate()?;
        config.estimator.validate()?;
        if config.initial_depth > MAX_DEPTH {
            return Err(Error::config(
                "initial_depth",
                format!("at most {MAX_DEPTH} splitting events are supported"),
            ));
        }
        let cover = Cover::at_depth(config.domain, config.initial_depth);
        let k = cover.len();
        Ok(Self {
            cover,
            scores: ScoreVector::zeros(k),
            t: 1,
            schedule: config.schedule,
            regularizer: config.regularizer,
            estimator: config.estimator,
            point_sampling: config.sampling,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            played: Vec::with_capacity(k),
            sampling: Vec::with_capacity(k),
            pending: None,
        })
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn scores(&self) -> &ScoreVector {
        &self.scores
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    /// Strategy `Q(eta_t S_t)` on the current cover, before any exploration mix.
    pub fn played_strategy(&self) -> Result<SimpleStrategy> {
        let mut x = Vec::with_capacity(self.scores.len());
        choice_map_into(
            self.regularizer,
            &self.scores,
            self.schedule.learning_rate(self.t),
            &mut x,
        )?;
        Ok(SimpleStrategy::from_raw(x))
    }

    /// Splitting event at the current round: migrates the scores at
    /// `eta_t` and replaces the cover by its successor.
    pub fn refine(&mut self) -> Result<()> {
        if self.cover.sigma() >= MAX_DEPTH {
            return Err(Error::config(
                "a",
                format!("splitting schedule exceeds the cap of 2^{MAX_DEPTH} leaves"),
            ));
        }
        let eta = self.schedule.learning_rate(self.t);
        self.scores = migrate_scores(self.regularizer, &self.scores, eta, &self.cover)?;
        self.cover = self.cover.split_all();
        Ok(())
    }
}

impl Learner for Hda {
    fn act(&mut self) -> Result<Action> {
        let eta = self.schedule.learning_rate(self.t);
        choice_map_into(self.regularizer, &self.scores, eta, &mut self.played)?;
        let gamma = self.estimator.exploration(self.t);
        if gamma > 0.0 {
            perturb_into(&self.played, gamma, &mut self.sampling);
        } else {
            self.sampling.clone_from(&self.played);
        }
        let leaf = sample_index(&self.sampling, &mut self.rng);
        let mut point = Vec::with_capacity(self.cover.domain().dim());
        match self.point_sampling {
            PointSampling::Uniform => self.cover.sample_point_into(leaf, &mut self.rng, &mut point),
            PointSampling::Center => self.cover.center_into(leaf, &mut point),
        }
        self.pending = Some(leaf);
        Ok(Action { point, leaf })
    }

    fn update(&mut self, reward: f64) -> Result<()> {
        let leaf = self
            .pending
            .take()
            .ok_or_else(|| Error::State(format!("update at round {} without a preceding act", self.t)))?;
        let model = self.estimator.estimate(reward, leaf, &self.sampling)?;
        for (s, v) in self.scores.0.iter_mut().zip(model.iter()) {
            *s += v;
        }
        self.t += 1;
        if should_split(self.t, self.schedule.a) {
            self.refine()?;
        }
        Ok(())
    }

    fn round(&self) -> u64 {
        self.t
    }

    fn leaves(&self) -> usize {
        self.cover.len()
    }

    fn sampling_strategy(&self) -> &[f64] {
        &self.sampling
    }
}

/// EXP3 over a fixed mesh of cell-center points, run as dual averaging with
/// the logit map and loss-based importance weighting. The learning rate is
/// `gamma0 * t^-(d+1)/(d+2)`.
#[derive(Debug, Clone)]
pub struct GridExp3 {
    mesh: Vec<Vec<f64>>,
    scores: Vec<f64>,
    rate_exponent: f64,
    gamma0: f64,
    bound: f64,
    t: u64,
    rng: ChaCha8Rng,
    probs: Vec<f64>,
    pending: Option<usize>,
}

impl GridExp3 {
    /// Mesh of at least `n_arms` points: equispaced cell centers for `d = 1`,
    /// a product grid with `ceil(n_arms^(1/d))` centers per axis otherwise.
    pub fn new(domain: &BoxDomain, n_arms: usize, gamma0: f64, bound: f64, seed: u64) -> Result<Self> {
        if n_arms == 0 {
            return Err(Error::config("arms", "need at least one arm"));
        }
        if !(gamma0.is_finite() && gamma0 > 0.0) {
            return Err(Error::config("gamma0", format!("rate coefficient must be > 0, got {gamma0}")));
        }
        if !(bound.is_finite() && bound > 0.0) {
            return Err(Error::config("bound", format!("reward bound must be positive, got {bound}")));
        }
        let d = domain.dim();
        let mesh = grid_mesh(domain, n_arms);
        let k = mesh.len();
        Ok(Self {
            mesh,
            scores: vec![0.0; k],
            rate_exponent: (d as f64 + 1.0) / (d as f64 + 2.0),
            gamma0,
            bound,
            t: 1,
            rng: ChaCha8Rng::seed_from_u64(seed),
            probs: Vec::with_capacity(k),
            pending: None,
        })
    }

    pub fn mesh(&self) -> &[Vec<f64>] {
        &self.mesh
    }

    pub fn learning_rate(&self, t: u64) -> f64 {
        self.gamma0 * (t as f64).powf(-self.rate_exponent)
    }
}

/// Cell centers of the per-axis product grid with `m = ceil(n^(1/d))`
/// points per axis, row-major with the first axis slowest.
pub fn grid_mesh(domain: &BoxDomain, n_arms: usize) -> Vec<Vec<f64>> {
    let d = domain.dim();
    if d == 1 {
        let (lo, hi) = (domain.lo()[0], domain.hi()[0]);
        let h = (hi - lo) / n_arms as f64;
        return (0..n_arms).map(|i| vec![lo + (i as f64 + 0.5) * h]).collect();
    }
    let mut m = 1usize;
    while m.checked_pow(d as u32).is_some_and(|v| v < n_arms) {
        m += 1;
    }
    let total = m.pow(d as u32);
    (0..total)
        .map(|mut idx| {
            let mut point = vec![0.0; d];
            for axis in (0..d).rev() {
                let i = idx % m;
                idx /= m;
                let (lo, hi) = (domain.lo()[axis], domain.hi()[axis]);
                point[axis] = lo + (i as f64 + 0.5) * (hi - lo) / m as f64;
            }
            point
        })
        .collect()
}

impl Learner for GridExp3 {
    fn act(&mut self) -> Result<Action> {
        let eta = self.learning_rate(self.t);
        choice_map_into(RegularizerKind::Negentropy, &self.scores, eta, &mut self.probs)?;
        let arm = sample_index(&self.probs, &mut self.rng);
        self.pending = Some(arm);
        Ok(Action {
            point: self.mesh[arm].clone(),
            leaf: arm,
        })
    }

    fn update(&mut self, reward: f64) -> Result<()> {
        let arm = self
            .pending
            .take()
            .ok_or_else(|| Error::State(format!("update at round {} without a preceding act", self.t)))?;
        let model = EstimatorKind::Iwe { bound: self.bound }.estimate(reward, arm, &self.probs)?;
        for (s, v) in self.scores.iter_mut().zip(model.iter()) {
            *s += v;
        }
        self.t += 1;
        Ok(())
    }

    fn round(&self) -> u64 {
        self.t
    }

    fn leaves(&self) -> usize {
        self.mesh.len()
    }

    fn sampling_strategy(&self) -> &[f64] {
        &self.probs
    }
}
