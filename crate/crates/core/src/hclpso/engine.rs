use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::exemplar::{assign_exemplar, learning_probability};
use super::{
    BoundsMode, ConvergenceCurve, HclpsoConfig, HclpsoError, Role, RunOutcome, Schedule, StreamLayout,
    VariantScheme,
};
use crate::bench::{Bounds, Objective};
use crate::seed;
use crate::seqgen::{PointStream, SeqError};

/// One attraction term `coef · eps ∘ (target − x)` of a velocity update.
#[derive(Debug, Clone, Copy)]
pub struct Pull<'a> {
    pub coef: f64,
    pub eps: &'a [f64],
    pub target: &'a [f64],
}

/// `v ← w·v + Σ coef·eps∘(target − x)` over `pulls`.
pub fn update_velocity(v: &mut [f64], w: f64, x: &[f64], pulls: &[Pull<'_>]) {
    for (d, vd) in v.iter_mut().enumerate() {
        let mut acc = w * *vd;
        for p in pulls {
            acc += p.coef * p.eps[d] * (p.target[d] - x[d]);
        }
        *vd = acc;
    }
}

/// Position, velocity and memory of every particle in a run.
///
/// Particles `0..n_explore` form the exploration subpopulation, the rest the
/// exploitation subpopulation.
#[derive(Debug, Clone)]
pub struct SwarmState {
    n_explore: usize,
    n_exploit: usize,
    dim: usize,
    positions: Vec<Vec<f64>>,
    velocities: Vec<Vec<f64>>,
    pbest: Vec<Vec<f64>>,
    pbest_fitness: Vec<f64>,
    exemplars: Vec<Vec<usize>>,
    stagnation: Vec<usize>,
    gbest: Vec<f64>,
    gbest_fitness: f64,
    iteration: usize,
}

impl SwarmState {
    pub fn n_explore(&self) -> usize {
        self.n_explore
    }

    pub fn n_exploit(&self) -> usize {
        self.n_exploit
    }

    pub fn len(&self) -> usize {
        self.n_explore + self.n_exploit
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn positions(&self) -> &[Vec<f64>] {
        &self.positions
    }

    pub fn velocities(&self) -> &[Vec<f64>] {
        &self.velocities
    }

    pub fn personal_bests(&self) -> &[Vec<f64>] {
        &self.pbest
    }

    pub fn personal_best_fitness(&self) -> &[f64] {
        &self.pbest_fitness
    }

    /// Per-dimension source particle of each particle's exemplar.
    pub fn exemplars(&self) -> &[Vec<usize>] {
        &self.exemplars
    }

    pub fn stagnation(&self) -> &[usize] {
        &self.stagnation
    }

    pub fn global_best(&self) -> &[f64] {
        &self.gbest
    }

    pub fn global_best_fitness(&self) -> f64 {
        self.gbest_fitness
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    fn exemplar_position(&self, i: usize, out: &mut [f64]) {
        for (d, (o, &src)) in out.iter_mut().zip(&self.exemplars[i]).enumerate() {
            *o = self.pbest[src][d];
        }
    }
}

/// Places `n_explore + n_exploit` particles at `a + u∘(b − a)` with `u` drawn
/// from `stream`. Velocities start at zero and personal bests at the initial
/// positions; fitness is left at +∞ until the caller evaluates.
pub fn init_population(
    bounds: &Bounds,
    n_explore: usize,
    n_exploit: usize,
    stream: &mut PointStream,
) -> Result<SwarmState, HclpsoError> {
    let dim = bounds.dim();
    let n = n_explore + n_exploit;
    if n < 2 {
        return Err(HclpsoError::Config(format!("population must be at least 2, got {n}")));
    }
    let stream_err = |source| HclpsoError::Stream {
        role: Role::Init.label(),
        source,
    };
    if stream.dimension() != dim {
        return Err(stream_err(SeqError::DimensionMismatch {
            expected: dim,
            found: stream.dimension(),
        }));
    }
    let mut positions = Vec::with_capacity(n);
    let mut u = vec![0.0; dim];
    for _ in 0..n {
        stream.next_point(&mut u).map_err(stream_err)?;
        let x: Vec<f64> = (0..dim)
            .map(|d| bounds.lower()[d] + u[d] * bounds.width(d))
            .collect();
        positions.push(x);
    }
    Ok(SwarmState {
        n_explore,
        n_exploit,
        dim,
        velocities: vec![vec![0.0; dim]; n],
        pbest: positions.clone(),
        pbest_fitness: vec![f64::INFINITY; n],
        exemplars: (0..n).map(|i| vec![i; dim]).collect(),
        stagnation: vec![0; n],
        gbest: positions[0].clone(),
        gbest_fitness: f64::INFINITY,
        iteration: 0,
        positions,
    })
}

/// The live stream behind each [`Role`].
#[derive(Debug, Clone)]
pub struct RoleStreams {
    pub init: PointStream,
    pub explore: PointStream,
    pub exploit_cognitive: PointStream,
    pub exploit_social: PointStream,
    drawn: [u64; 4],
}

fn role_index(role: Role) -> usize {
    match role {
        Role::Init => 0,
        Role::Explore => 1,
        Role::ExploitCognitive => 2,
        Role::ExploitSocial => 3,
    }
}

impl RoleStreams {
    pub fn build(scheme: &VariantScheme, dim: usize, run_seed: u64) -> Result<Self, HclpsoError> {
        let make = |role: Role| {
            scheme
                .build(role, dim, run_seed)
                .map_err(|source| HclpsoError::Stream {
                    role: role.label(),
                    source,
                })
        };
        Ok(Self::new(
            make(Role::Init)?,
            make(Role::Explore)?,
            make(Role::ExploitCognitive)?,
            make(Role::ExploitSocial)?,
        ))
    }

    pub fn new(
        init: PointStream,
        explore: PointStream,
        exploit_cognitive: PointStream,
        exploit_social: PointStream,
    ) -> Self {
        Self {
            init,
            explore,
            exploit_cognitive,
            exploit_social,
            drawn: [0; 4],
        }
    }

    /// Points handed out for `role` so far, counting across rewinds.
    pub fn drawn(&self, role: Role) -> u64 {
        self.drawn[role_index(role)]
    }

    fn rewind_deterministic(&mut self) {
        for s in [&mut self.explore, &mut self.exploit_cognitive, &mut self.exploit_social] {
            if !s.is_random() {
                s.reset();
            }
        }
    }

    pub fn get(&self, role: Role) -> &PointStream {
        match role {
            Role::Init => &self.init,
            Role::Explore => &self.explore,
            Role::ExploitCognitive => &self.exploit_cognitive,
            Role::ExploitSocial => &self.exploit_social,
        }
    }

    fn draw(&mut self, role: Role, out: &mut [f64]) -> Result<(), HclpsoError> {
        let stream = match role {
            Role::Init => &mut self.init,
            Role::Explore => &mut self.explore,
            Role::ExploitCognitive => &mut self.exploit_cognitive,
            Role::ExploitSocial => &mut self.exploit_social,
        };
        stream.next_point(out).map_err(|source| HclpsoError::Stream {
            role: role.label(),
            source,
        })?;
        self.drawn[role_index(role)] += 1;
        Ok(())
    }
}

/// A run in progress.
pub struct Hclpso<'a> {
    objective: &'a dyn Objective,
    config: HclpsoConfig,
    schedule: Schedule,
    state: SwarmState,
    streams: RoleStreams,
    rng: ChaCha8Rng,
    vmax: Vec<f64>,
    curve: Vec<f64>,
    elapsed: Vec<f64>,
    started: Instant,
}

impl<'a> Hclpso<'a> {
    pub fn new(objective: &'a dyn Objective, config: HclpsoConfig) -> Result<Self, HclpsoError> {
        config.validate()?;
        let streams = RoleStreams::build(&config.variant, objective.dimension(), config.seed)?;
        Self::with_streams(objective, config, streams)
    }

    /// Starts a run on explicitly supplied streams; `config.variant` is ignored.
    pub fn with_streams(
        objective: &'a dyn Objective,
        config: HclpsoConfig,
        mut streams: RoleStreams,
    ) -> Result<Self, HclpsoError> {
        config.validate()?;
        let started = Instant::now();
        let bounds = objective.bounds();
        let dim = bounds.dim();
        if objective.dimension() != dim {
            return Err(HclpsoError::Config(format!(
                "objective dimension {} does not match bounds dimension {dim}",
                objective.dimension()
            )));
        }
        for role in [Role::Explore, Role::ExploitCognitive, Role::ExploitSocial] {
            let found = streams.get(role).dimension();
            if found != dim {
                return Err(HclpsoError::Stream {
                    role: role.label(),
                    source: SeqError::DimensionMismatch { expected: dim, found },
                });
            }
        }
        let state = init_population(bounds, config.n_explore, config.n_exploit, &mut streams.init)?;
        streams.drawn[role_index(Role::Init)] += state.len() as u64;
        let vmax = (0..dim)
            .map(|d| config.velocity_clamp * bounds.width(d))
            .collect();
        let rng = ChaCha8Rng::seed_from_u64(seed::derive(config.seed, &["exemplar"]));
        let mut run = Self {
            objective,
            schedule: Schedule::new(config.max_iter),
            config,
            state,
            streams,
            rng,
            vmax,
            curve: Vec::new(),
            elapsed: Vec::new(),
            started,
        };
        run.evaluate_initial()?;
        Ok(run)
    }

    fn evaluate_initial(&mut self) -> Result<(), HclpsoError> {
        let n = self.state.len();
        for i in 0..n {
            let f = self.evaluate(i)?;
            self.state.pbest_fitness[i] = f;
        }
        self.update_global_best();
        for i in 0..n {
            self.refresh_exemplar(i);
        }
        self.record();
        Ok(())
    }

    fn evaluate(&self, i: usize) -> Result<f64, HclpsoError> {
        let f = self.objective.evaluate(&self.state.positions[i]);
        if !f.is_finite() {
            return Err(HclpsoError::NonFinite {
                particle: i,
                iteration: self.state.iteration,
                value: f,
            });
        }
        Ok(f)
    }

    fn update_global_best(&mut self) {
        let s = &mut self.state;
        let mut best = None;
        for (i, &f) in s.pbest_fitness.iter().enumerate() {
            if f < s.gbest_fitness && best.is_none_or(|b: usize| f < s.pbest_fitness[b]) {
                best = Some(i);
            }
        }
        if let Some(b) = best {
            s.gbest_fitness = s.pbest_fitness[b];
            s.gbest.clone_from(&s.pbest[b]);
        }
    }

    fn refresh_exemplar(&mut self, i: usize) {
        let s = &mut self.state;
        let pc = learning_probability(i, s.len(), self.config.pc_min, self.config.pc_max);
        s.exemplars[i] = assign_exemplar(i, s.n_explore, &s.pbest_fitness, pc, s.dim, &mut self.rng);
        s.stagnation[i] = 0;
    }

    fn record(&mut self) {
        self.curve.push(self.state.gbest_fitness);
        self.elapsed.push(self.started.elapsed().as_secs_f64());
    }

    pub fn state(&self) -> &SwarmState {
        &self.state
    }

    pub fn streams(&self) -> &RoleStreams {
        &self.streams
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn config(&self) -> &HclpsoConfig {
        &self.config
    }

    /// Best-so-far values recorded so far.
    pub fn curve(&self) -> &[f64] {
        &self.curve
    }

    pub fn is_finished(&self) -> bool {
        self.state.iteration >= self.config.max_iter
    }

    /// Advances the swarm one iteration. Every particle moves using the
    /// memories from the start of the iteration; bests are updated afterwards.
    pub fn step(&mut self) -> Result<(), HclpsoError> {
        if self.is_finished() {
            return Err(HclpsoError::Finished(self.state.iteration));
        }
        let g = self.state.iteration;
        let dim = self.state.dim;
        let w = self.schedule.inertia(g);
        let k = self.schedule.exploration(g);
        let c1 = self.schedule.cognitive(g);
        let c2 = self.schedule.social(g);
        let mut e1 = vec![0.0; dim];
        let mut e2 = vec![0.0; dim];
        let mut target = vec![0.0; dim];
        let bounds = self.objective.bounds();
        if self.config.layout == StreamLayout::Restart {
            self.streams.rewind_deterministic();
        }

        for i in 0..self.state.len() {
            self.state.exemplar_position(i, &mut target);
            let s = &mut self.state;
            if i < s.n_explore {
                self.streams.draw(Role::Explore, &mut e1)?;
                let pull = Pull {
                    coef: k,
                    eps: &e1,
                    target: &target,
                };
                update_velocity(&mut s.velocities[i], w, &s.positions[i], &[pull]);
            } else {
                self.streams.draw(Role::ExploitCognitive, &mut e1)?;
                self.streams.draw(Role::ExploitSocial, &mut e2)?;
                let pulls = [
                    Pull {
                        coef: c1,
                        eps: &e1,
                        target: &target,
                    },
                    Pull {
                        coef: c2,
                        eps: &e2,
                        target: &s.gbest,
                    },
                ];
                update_velocity(&mut s.velocities[i], w, &s.positions[i], &pulls);
            }
            let (v, x) = (&mut s.velocities[i], &mut s.positions[i]);
            for d in 0..dim {
                v[d] = v[d].clamp(-self.vmax[d], self.vmax[d]);
                x[d] += v[d];
                if self.config.bounds_mode == BoundsMode::Clamp {
                    x[d] = x[d].clamp(bounds.lower()[d], bounds.upper()[d]);
                }
            }
        }

        for i in 0..self.state.len() {
            let mut improved = false;
            if bounds.contains(&self.state.positions[i]) {
                let f = self.evaluate(i)?;
                if f < self.state.pbest_fitness[i] {
                    let s = &mut self.state;
                    s.pbest_fitness[i] = f;
                    s.pbest[i].clone_from(&s.positions[i]);
                    improved = true;
                }
            }
            let s = &mut self.state;
            s.stagnation[i] = if improved { 0 } else { s.stagnation[i] + 1 };
        }
        self.update_global_best();
        self.state.iteration += 1;
        for i in 0..self.state.len() {
            if self.state.stagnation[i] >= self.config.refresh_gap {
                self.refresh_exemplar(i);
            }
        }
        self.record();
        Ok(())
    }

    /// Steps until the iteration budget is spent.
    pub fn run_to_end(&mut self) -> Result<(), HclpsoError> {
        while !self.is_finished() {
            self.step()?;
        }
        Ok(())
    }

    pub fn outcome(&self) -> RunOutcome {
        RunOutcome {
            curve: ConvergenceCurve(self.curve.clone()),
            elapsed: self.elapsed.clone(),
            best_position: self.state.gbest.clone(),
            best_fitness: self.state.gbest_fitness,
        }
    }
}

/// Runs HCLPSO on `objective` for `config.max_iter` iterations.
pub fn run(objective: &dyn Objective, config: &HclpsoConfig) -> Result<RunOutcome, HclpsoError> {
    let mut h = Hclpso::new(objective, config.clone())?;
    h.run_to_end()?;
    Ok(h.outcome())
}
