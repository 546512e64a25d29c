//! Simplified firefly swarm over integer pixel positions.
//!
//! A population of "fireflies" samples the image. Each generation, every
//! member picks the most attractive strictly-better member as a target and
//! takes one quantized step toward it (plus a bounded uniform jitter). The
//! union of parents and offspring is ranked by fitness; the best
//! `best_ratio` fraction survives unchanged and the rest of the population
//! is re-seeded uniformly at random. With the fitness of
//! [`FitnessField`](crate::fitness::FitnessField) this walks members into a
//! target luminance band and keeps them there.
//!
//! Every random draw comes from a [`SfaRng`] seeded through
//! [`SfaParams::seed`], so a run is reproducible bit-for-bit.

use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::Error;
use crate::fitness::FitnessField;
use crate::keypoint::{Detector, KeyPoint};

/// Portable, explicitly seeded generator driving all swarm randomness.
pub type SfaRng = rand_chacha::ChaCha8Rng;

/// Whether better fitness means larger or smaller values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectMode {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SfaParams {
    /// Population size.
    pub fireflies: usize,
    /// Evolution steps to run.
    pub generations: usize,
    /// Attractiveness at distance zero.
    pub beta_pop: f64,
    /// Attractiveness decay rate over squared distance.
    pub gamma: f64,
    /// Amplitude of the uniform jitter added to every move.
    pub mu: f64,
    /// Fraction of the population retained by rank each generation, and the
    /// fraction reported as keypoints at the end.
    pub best_ratio: f64,
    pub select_mode: SelectMode,
    pub seed: u64,
}

impl Default for SfaParams {
    fn default() -> Self {
        SfaParams {
            fireflies: 400,
            generations: 20,
            beta_pop: 0.3,
            gamma: 0.3,
            mu: 0.25,
            best_ratio: 0.35,
            select_mode: SelectMode::Maximize,
            seed: 0,
        }
    }
}

impl SfaParams {
    pub fn validate(&self) -> Result<(), Error> {
        fn check(name: &'static str, value: f64) -> Result<(), Error> {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    detail: alloc::format!("{value} is not a finite nonnegative number"),
                });
            }
            Ok(())
        }
        if self.fireflies == 0 {
            return Err(Error::InvalidParameter {
                name: "fireflies",
                detail: alloc::string::String::from("population must not be empty"),
            });
        }
        check("beta_pop", self.beta_pop)?;
        check("gamma", self.gamma)?;
        check("mu", self.mu)?;
        if !self.best_ratio.is_finite() || self.best_ratio <= 0.0 || self.best_ratio > 1.0 {
            return Err(Error::InvalidParameter {
                name: "best_ratio",
                detail: alloc::format!("{} outside (0, 1]", self.best_ratio),
            });
        }
        if retained_of(self.best_ratio, self.fireflies) == 0 {
            return Err(Error::InvalidParameter {
                name: "best_ratio",
                detail: alloc::format!(
                    "{} of {} fireflies rounds down to an empty elite",
                    self.best_ratio, self.fireflies
                ),
            });
        }
        Ok(())
    }

    /// Number of members that survive ranking: `floor(best_ratio * fireflies)`.
    pub fn retained(&self) -> usize {
        retained_of(self.best_ratio, self.fireflies)
    }
}

fn retained_of(best_ratio: f64, population: usize) -> usize {
    (best_ratio * population as f64).floor() as usize
}

/// One swarm member: an integer pixel position with its cached fitness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Firefly {
    pub x: u32,
    pub y: u32,
    pub fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub members: Vec<Firefly>,
    pub generation: usize,
}

impl Population {
    /// `count` members placed uniformly at random, fitness evaluated
    /// immediately. Draw order per member: x, then y.
    pub fn random(field: &FitnessField, count: usize, rng: &mut SfaRng) -> Population {
        let members = (0..count)
            .map(|_| {
                let x = rng.random_range(0..field.width());
                let y = rng.random_range(0..field.height());
                Firefly { x, y, fitness: field.eval(x, y) }
            })
            .collect();
        Population { members, generation: 0 }
    }

    /// Best fitness under the given mode; `None` for an empty population.
    pub fn best_fitness(&self, mode: SelectMode) -> Option<f64> {
        let iter = self.members.iter().map(|f| f.fitness);
        match mode {
            SelectMode::Maximize => iter.reduce(f64::max),
            SelectMode::Minimize => iter.reduce(f64::min),
        }
    }
}

/// Euclidean distance between two member positions.
#[inline]
pub fn distance(a: &Firefly, b: &Firefly) -> f64 {
    let dx = a.x as f64 - b.x as f64;
    let dy = a.y as f64 - b.y as f64;
    (dx * dx + dy * dy).sqrt()
}

/// Attractiveness at distance `r`: `beta_pop * exp(-gamma * r^2)`.
#[inline]
pub fn attractiveness(params: &SfaParams, r: f64) -> f64 {
    params.beta_pop * (-params.gamma * r * r).exp()
}

/// Index of the most attractive strictly-better member, or `None` when no
/// member outranks `i`. Ties on attractiveness go to the smaller distance,
/// then to the lower index.
pub fn choose_target(pop: &Population, i: usize, params: &SfaParams) -> Option<usize> {
    let me = &pop.members[i];
    let mut best: Option<(f64, f64, usize)> = None;
    for (j, other) in pop.members.iter().enumerate() {
        if j == i {
            continue;
        }
        let outranks = match params.select_mode {
            SelectMode::Maximize => other.fitness > me.fitness,
            SelectMode::Minimize => other.fitness < me.fitness,
        };
        if !outranks {
            continue;
        }
        let r = distance(me, other);
        let beta = attractiveness(params, r);
        let replace = match best {
            None => true,
            Some((best_beta, best_r, _)) => {
                beta > best_beta || (beta == best_beta && r < best_r)
            }
        };
        if replace {
            best = Some((beta, r, j));
        }
    }
    best.map(|(_, _, j)| j)
}

/// One quantized move: per axis, `floor(a + beta(r) * (target - a) + mu * e)`
/// with `e` drawn uniformly from `[-1, 1]`, clamped into the image.
///
/// Both jitter values (x first, then y) are drawn even when there is no
/// target or `mu` is zero, so the random stream stays aligned across
/// population configurations.
pub fn move_firefly(
    a: &Firefly,
    target: Option<&Firefly>,
    params: &SfaParams,
    width: u32,
    height: u32,
    rng: &mut SfaRng,
) -> (u32, u32) {
    let ex: f64 = rng.random_range(-1.0..=1.0);
    let ey: f64 = rng.random_range(-1.0..=1.0);
    let (pull_x, pull_y) = match target {
        Some(t) => {
            let beta = attractiveness(params, distance(a, t));
            (beta * (t.x as f64 - a.x as f64), beta * (t.y as f64 - a.y as f64))
        }
        None => (0.0, 0.0),
    };
    let nx = (a.x as f64 + pull_x + params.mu * ex).floor();
    let ny = (a.y as f64 + pull_y + params.mu * ey).floor();
    (clamp_axis(nx, width), clamp_axis(ny, height))
}

#[inline]
fn clamp_axis(v: f64, extent: u32) -> u32 {
    v.clamp(0.0, (extent - 1) as f64) as u32
}

fn rank(members: &mut [Firefly], mode: SelectMode) {
    // Stable sort: fitness ties keep insertion order, so parents win over
    // offspring and lower indices over higher ones.
    match mode {
        SelectMode::Maximize => members.sort_by(|a, b| b.fitness.total_cmp(&a.fitness)),
        SelectMode::Minimize => members.sort_by(|a, b| a.fitness.total_cmp(&b.fitness)),
    }
}

/// Advances the population one generation: every member produces one moved
/// offspring, the union of parents and offspring is ranked, the top
/// `floor(best_ratio * n)` survive, and the remaining slots are re-seeded
/// uniformly at random (evaluated immediately).
pub fn step(
    pop: &Population,
    field: &FitnessField,
    params: &SfaParams,
    rng: &mut SfaRng,
) -> Population {
    let n = pop.members.len();
    let keep = retained_of(params.best_ratio, n).clamp(1, n);

    let mut pool = Vec::with_capacity(2 * n);
    pool.extend_from_slice(&pop.members);
    for i in 0..n {
        let target = choose_target(pop, i, params).map(|j| &pop.members[j]);
        let (x, y) =
            move_firefly(&pop.members[i], target, params, field.width(), field.height(), rng);
        pool.push(Firefly { x, y, fitness: field.eval(x, y) });
    }

    rank(&mut pool, params.select_mode);
    pool.truncate(keep);
    for _ in keep..n {
        let x = rng.random_range(0..field.width());
        let y = rng.random_range(0..field.height());
        pool.push(Firefly { x, y, fitness: field.eval(x, y) });
    }

    Population { members: pool, generation: pop.generation + 1 }
}

/// Full search: seeds the generator, evolves a random initial population for
/// `params.generations` steps and reports the final elite (exactly
/// [`SfaParams::retained`] members) as keypoints, best first.
pub fn run(field: &FitnessField, params: &SfaParams) -> Result<Vec<KeyPoint>, Error> {
    params.validate()?;
    let mut rng = SfaRng::seed_from_u64(params.seed);
    let mut pop = Population::random(field, params.fireflies, &mut rng);
    for _ in 0..params.generations {
        pop = step(&pop, field, params, &mut rng);
    }

    let mut members = pop.members;
    rank(&mut members, params.select_mode);
    members.truncate(params.retained());
    Ok(members
        .into_iter()
        .map(|f| KeyPoint {
            x: f.x as f64,
            y: f.y as f64,
            scale: 1.0,
            score: f.fitness,
            orientation: None,
            detector: Detector::Sfa,
        })
        .collect())
}
