//! Fast numerical self-checks run by `hdab selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::{BoxDomain, Cover, NormKind};
use crate::engine::{leaves_at, should_split};
use crate::estimate::iwe;
use crate::simplex::{
    choice_map, fisher_dual_norm, fisher_primal_norm, log_barrier_residual, log_barrier_solve, migrate_scores,
    RegularizerKind, ScoreVector, SimpleStrategy,
};

/// Outcome of one check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, worst: f64, tol: f64) -> Check {
    Check {
        name,
        passed: worst <= tol,
        detail: format!("worst {worst:.3e}, tolerance {tol:.0e}"),
    }
}

fn random_scores(rng: &mut ChaCha8Rng) -> ScoreVector {
    let k = rng.gen_range(1..=64);
    let scale = 10f64.powf(rng.gen_range(-2.0..3.0));
    ScoreVector((0..k).map(|_| rng.gen_range(-scale..scale)).collect())
}

fn normalization(rng: &mut ChaCha8Rng) -> Check {
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let y = random_scores(rng);
        for kind in [RegularizerKind::Negentropy, RegularizerKind::LogBarrier] {
            match choice_map(kind, &y) {
                Ok(x) if x.iter().all(|&p| p >= 0.0) => {
                    worst = worst.max((x.iter().sum::<f64>() - 1.0).abs());
                }
                _ => worst = f64::INFINITY,
            }
        }
    }
    check("choice maps return probability vectors", worst, 1e-12)
}

fn log_barrier_root(rng: &mut ChaCha8Rng) -> Check {
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let y = random_scores(rng);
        worst = match log_barrier_solve(&y) {
            Ok(sol) => worst.max(log_barrier_residual(&y, sol.xi).abs()),
            Err(_) => f64::INFINITY,
        };
    }
    check("log-barrier threshold solves its first-order condition", worst, 1e-9)
}

fn fisher_duality(rng: &mut ChaCha8Rng) -> Check {
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let k = rng.gen_range(1..=32);
        let mut x: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..1.0)).collect();
        let s: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= s);
        let Ok(x) = SimpleStrategy::new(x) else {
            return check("Fisher norms are dual", f64::INFINITY, 0.0);
        };
        let z: Vec<f64> = (0..k).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let w: Vec<f64> = (0..k).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let dot: f64 = z.iter().zip(&w).map(|(a, b)| a * b).sum();
        let bound = fisher_primal_norm(&x, &z).unwrap() * fisher_dual_norm(&x, &w).unwrap();
        worst = worst.max(dot.abs() - bound - 1e-12 * bound);
    }
    check("Fisher norms are dual", worst.max(0.0), 0.0)
}

fn migration(rng: &mut ChaCha8Rng) -> Check {
    let mut worst = 0.0f64;
    for kind in [RegularizerKind::Negentropy, RegularizerKind::LogBarrier] {
        let domain = BoxDomain::cube(2, 0.0, 1.0).unwrap();
        let mut cover = Cover::new(domain);
        let mut scores = ScoreVector::zeros(1);
        let eta = 0.7;
        for _ in 0..8 {
            for s in scores.0.iter_mut() {
                *s += rng.gen_range(0.0..3.0);
            }
            let before = choice_map(kind, &scores.scaled(eta)).unwrap();
            let next = cover.split_all();
            scores = migrate_scores(kind, &scores, eta, &cover).unwrap();
            let after = choice_map(kind, &scores.scaled(eta)).unwrap();
            for _ in 0..50 {
                let p = [rng.gen::<f64>(), rng.gen::<f64>()];
                let a = before.density_at(&cover, &p).unwrap();
                let b = after.density_at(&next, &p).unwrap();
                worst = worst.max((a - b).abs() / a);
            }
            cover = next;
        }
    }
    check("refinement preserves the played density", worst, 1e-9)
}

fn scheduler() -> Check {
    let mut worst = 0.0f64;
    for a in [1.0 / 3.0, 0.5, 0.6] {
        let mut splits = 0u32;
        for t in 1..=100_000u64 {
            if should_split(t, a) {
                splits += 1;
            }
            let leaves = 1usize << splits;
            if leaves != leaves_at(t, a) {
                worst = worst.max(1.0);
            }
        }
    }
    check("scheduler splits track 2^floor(a log2 t)", worst, 0.0)
}

fn diameters() -> Check {
    let mut worst = 0.0f64;
    for d in 1..=3 {
        let domain = BoxDomain::with_norm(vec![0.0; d], vec![1.0; d], NormKind::Sup).unwrap();
        for sigma in 0..=(4 * d as u32) {
            let leaf = domain.dyadic_cell(sigma, 0);
            let bound = 2f64.powf(-((sigma / d as u32) as f64));
            worst = worst.max(leaf.diameter(NormKind::Sup) - bound);
        }
    }
    check("leaf diameters halve every d splits", worst.max(0.0), 1e-15)
}

fn second_moment(rng: &mut ChaCha8Rng) -> Check {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let k = rng.gen_range(1..=16);
        let mut x: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
        let s: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= s);
        let u: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
        // exact expectation over the chosen leaf of sum_S x_S v_S^2
        let mut second = 0.0;
        for c in 0..k {
            let v = iwe(u[c], c, &x, 1.0).unwrap();
            second += x[c] * v.iter().zip(&x).map(|(v, p)| p * v * v).sum::<f64>();
        }
        worst = worst.max(second - (k as f64 + 1.0));
    }
    check("importance-weighted estimates have bounded second moment", worst.max(0.0), 1e-12)
}

/// Runs every check with a fixed seed.
pub fn run() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f_7e57);
    vec![
        normalization(&mut rng),
        log_barrier_root(&mut rng),
        fisher_duality(&mut rng),
        migration(&mut rng),
        scheduler(),
        diameters(),
        second_moment(&mut rng),
    ]
}
