use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::IsingInstance;
use crate::par::Execution;
use crate::params::ParameterSet;
use crate::simulator::{QaoaSimulator, DEFAULT_QUBIT_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Central finite-difference gradients with quasi-Newton (BFGS) curvature
    /// and an Armijo backtracking line search.
    GradientAscent,
    /// Compass search halving its step when no axis move improves.
    CoordinateSearch,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub method: Method,
    pub max_steps: usize,
    /// Largest move per coordinate in one step (radians).
    pub initial_step: f64,
    /// Steps shorter than this end the search.
    pub min_step: f64,
    /// An accepted step improving the cost by no more than this ends the search.
    pub tol: f64,
    /// Gradient infinity-norm below which the point counts as stationary.
    pub grad_tol: f64,
    pub fd_step: f64,
    /// Uniform random starts in `A^p` added to the multistart set.
    pub random_starts: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: Method::GradientAscent,
            max_steps: 500,
            initial_step: 0.1,
            min_step: 1e-10,
            tol: 1e-13,
            grad_tol: 1e-8,
            fd_step: 1e-5,
            random_starts: 0,
            seed: 0,
            execution: Execution::default(),
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_steps == 0 {
            return Err(Error::InvalidArgument("max_steps must be at least 1".into()));
        }
        let positive = [self.initial_step, self.min_step, self.fd_step];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidArgument("optimizer steps must be positive".into()));
        }
        if !(self.tol >= 0.0 && self.grad_tol >= 0.0) {
            return Err(Error::InvalidArgument("tolerances must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeOutcome {
    pub params: ParameterSet,
    pub value: f64,
    pub start_value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

struct Counted<'f> {
    f: &'f dyn Fn(&[f64]) -> f64,
    evaluations: usize,
}

impl Counted<'_> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.evaluations += 1;
        (self.f)(x)
    }

    fn gradient(&mut self, x: &[f64], h: f64) -> Vec<f64> {
        let mut probe = x.to_vec();
        (0..x.len())
            .map(|i| {
                probe[i] = x[i] + h;
                let up = self.eval(&probe);
                probe[i] = x[i] - h;
                let down = self.eval(&probe);
                probe[i] = x[i];
                (up - down) / (2.0 * h)
            })
            .collect()
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Raw {
    x: Vec<f64>,
    value: f64,
    start_value: f64,
    iterations: usize,
    converged: bool,
}

fn gradient_ascent(fc: &mut Counted<'_>, x0: Vec<f64>, cfg: &OptimizerConfig) -> Raw {
    let dim = x0.len();
    let identity = || -> Vec<Vec<f64>> {
        (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect()
    };
    let mut x = x0;
    let mut fx = fc.eval(&x);
    let start_value = fx;
    let mut g = fc.gradient(&x, cfg.fd_step);
    let mut h = identity();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_steps {
        if inf_norm(&g) <= cfg.grad_tol {
            converged = true;
            break;
        }
        iterations += 1;
        let mut d: Vec<f64> = h.iter().map(|row| dot(row, &g)).collect();
        if dot(&g, &d) <= 0.0 {
            h = identity();
            d = g.clone();
        }
        let mut accepted = None;
        for attempt in 0..2 {
            let slope = dot(&g, &d);
            let mut alpha = (cfg.initial_step / inf_norm(&d)).min(1.0);
            while alpha * inf_norm(&d) >= cfg.min_step {
                let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + alpha * di).collect();
                let ft = fc.eval(&trial);
                if ft >= fx + 1e-4 * alpha * slope && ft > fx {
                    accepted = Some((trial, ft));
                    break;
                }
                alpha *= 0.5;
            }
            if accepted.is_some() || attempt == 1 {
                break;
            }
            // retry along the plain gradient
            h = identity();
            d = g.clone();
        }
        let Some((xn, fnew)) = accepted else {
            converged = inf_norm(&g) <= 1e3 * cfg.grad_tol;
            break;
        };
        let gn = fc.gradient(&xn, cfg.fd_step);
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        // curvature of the minimized function -f
        let y: Vec<f64> = g.iter().zip(&gn).map(|(a, b)| a - b).collect();
        let ys = dot(&y, &s);
        if ys > 1e-14 {
            let rho = 1.0 / ys;
            let hy: Vec<f64> = h.iter().map(|row| dot(row, &y)).collect();
            let yhy = dot(&y, &hy);
            for i in 0..dim {
                for j in 0..dim {
                    h[i][j] += (1.0 + rho * yhy) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }
        let gain = fnew - fx;
        x = xn;
        fx = fnew;
        g = gn;
        if gain <= cfg.tol {
            converged = true;
            break;
        }
    }
    Raw {
        x,
        value: fx,
        start_value,
        iterations,
        converged,
    }
}

fn coordinate_search(fc: &mut Counted<'_>, x0: Vec<f64>, cfg: &OptimizerConfig) -> Raw {
    let mut x = x0;
    let mut fx = fc.eval(&x);
    let start_value = fx;
    let mut step = cfg.initial_step;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_steps {
        iterations += 1;
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut trial = x.clone();
                trial[i] += dir * step;
                let ft = fc.eval(&trial);
                if ft > fx {
                    x = trial;
                    fx = ft;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < cfg.min_step {
                converged = true;
                break;
            }
        }
    }
    Raw {
        x,
        value: fx,
        start_value,
        iterations,
        converged,
    }
}

/// Maximizes `objective` over parameter sets of the start's depth.
pub fn maximize(
    objective: &dyn Fn(&ParameterSet) -> f64,
    start: &ParameterSet,
    cfg: &OptimizerConfig,
) -> Result<OptimizeOutcome> {
    cfg.validate()?;
    let flat_objective = |x: &[f64]| match ParameterSet::from_flat(x) {
        Ok(params) => objective(&params),
        Err(_) => f64::NEG_INFINITY,
    };
    let mut fc = Counted {
        f: &flat_objective,
        evaluations: 0,
    };
    let raw = match cfg.method {
        Method::GradientAscent => gradient_ascent(&mut fc, start.to_flat(), cfg),
        Method::CoordinateSearch => coordinate_search(&mut fc, start.to_flat(), cfg),
    };
    Ok(OptimizeOutcome {
        params: ParameterSet::from_flat(&raw.x)?,
        value: raw.value,
        start_value: raw.start_value,
        iterations: raw.iterations,
        evaluations: fc.evaluations,
        converged: raw.converged,
    })
}

/// Local ascent of the QAOA expectation from `start`.
pub fn optimize_local(inst: &IsingInstance, start: &ParameterSet, cfg: &OptimizerConfig) -> Result<OptimizeOutcome> {
    let sim = QaoaSimulator::with_options(inst, DEFAULT_QUBIT_CAP, cfg.execution)?;
    maximize(&|x| sim.expectation(x), start, cfg)
}

/// Centers of the symmetry cells of `A^p`: every layer uses the same pair
/// `gamma in {+-pi/4, +-3pi/4}`, `beta = +-pi/8`.
pub fn default_starts(p: usize) -> Vec<ParameterSet> {
    let mut out = Vec::with_capacity(8);
    for g in [0.25, -0.25, 0.75, -0.75] {
        for b in [0.125, -0.125] {
            out.push(ParameterSet::new(vec![g * PI; p], vec![b * PI; p]).expect("p >= 1"));
        }
    }
    out
}

fn random_starts(p: usize, count: usize, seed: u64) -> Vec<ParameterSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let g = (0..p).map(|_| rng.random_range(-PI..PI)).collect();
            let b = (0..p).map(|_| rng.random_range(-PI / 4.0..PI / 4.0)).collect();
            ParameterSet::new(g, b).expect("p >= 1")
        })
        .collect()
}

/// Best local optimum over the cell centers, `cfg.random_starts` random
/// points, and any caller-supplied warm starts. Ties keep the earliest start.
pub fn multistart(
    objective: &dyn Fn(&ParameterSet) -> f64,
    p: usize,
    cfg: &OptimizerConfig,
    warm: &[ParameterSet],
) -> Result<OptimizeOutcome> {
    if p == 0 {
        return Err(Error::InvalidArgument("depth p must be at least 1".into()));
    }
    if let Some(w) = warm.iter().find(|w| w.p() != p) {
        return Err(Error::LengthMismatch { expected: p, got: w.p() });
    }
    let mut starts = default_starts(p);
    starts.extend(random_starts(p, cfg.random_starts, cfg.seed));
    starts.extend(warm.iter().cloned());
    let mut best: Option<OptimizeOutcome> = None;
    for s in &starts {
        let out = maximize(objective, s, cfg)?;
        if best.as_ref().is_none_or(|b| out.value > b.value) {
            best = Some(out);
        }
    }
    Ok(best.expect("at least eight starts"))
}

/// Receiver-optimal parameters by multistart local optimization.
pub fn receiver_optimum(
    inst: &IsingInstance,
    p: usize,
    cfg: &OptimizerConfig,
    warm: &[ParameterSet],
) -> Result<OptimizeOutcome> {
    let sim = QaoaSimulator::with_options(inst, DEFAULT_QUBIT_CAP, cfg.execution)?;
    multistart(&|x| sim.expectation(x), p, cfg, warm)
}
