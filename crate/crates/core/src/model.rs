//! Compartmental SIR dynamics with an intervention factor.
//!
//! The intervention level `rho` scales transmission by `(1 - rho)`:
//!
//! ```text
//! dS/dt = -(1 - rho) * beta * S * I / N
//! dI/dt =  (1 - rho) * beta * S * I / N - gamma * I
//! dR/dt =  gamma * I
//! ```
//!
//! With `rho = 0` this is the classical Kermack-McKendrick system. Compartments
//! are real-valued; trajectories are integrated with fixed-step RK4 and sampled
//! once per day.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Default RK4 step, in days.
pub const DEFAULT_STEP_DAYS: f64 = 0.1;

/// Relative tolerance on `S + I + R = N`, and the absolute (per-capita) slack
/// below zero that is treated as rounding rather than blow-up.
pub const CONSERVATION_TOL: f64 = 1e-9;

/// Die-out threshold: the continuous infected compartment falls below one person.
pub const DIE_OUT_THRESHOLD: f64 = 1.0;

/// S, I, R at time `t` (days).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompartmentState {
    pub t: f64,
    pub s: f64,
    pub i: f64,
    pub r: f64,
}

impl CompartmentState {
    pub fn new(t: f64, s: f64, i: f64, r: f64) -> Self {
        Self { t, s, i, r }
    }

    /// Builds the state `S = N - I - R` at `t = 0`.
    pub fn from_infected(population: f64, infected: f64, removed: f64) -> Self {
        Self::new(0.0, population - infected - removed, infected, removed)
    }

    #[must_use]
    pub fn total(&self) -> f64 {
        self.s + self.i + self.r
    }

    fn check_finite(&self) -> Result<()> {
        ensure_finite("t", self.t)?;
        ensure_finite("s", self.s)?;
        ensure_finite("i", self.i)?;
        ensure_finite("r", self.r)
    }

    fn check_against(&self, population: f64) -> Result<()> {
        self.check_finite()?;
        if self.t < 0.0 {
            return Err(Error::invalid(format!(
                "t must be non-negative, got {}",
                self.t
            )));
        }
        let slack = CONSERVATION_TOL * population;
        for (name, v) in [("s", self.s), ("i", self.i), ("r", self.r)] {
            if v < -slack {
                return Err(Error::invalid(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        let drift = (self.total() - population).abs();
        if drift > CONSERVATION_TOL * population {
            return Err(Error::invalid(format!(
                "s + i + r = {} does not match population {population}",
                self.total()
            )));
        }
        Ok(())
    }
}

/// Transmission rate, recovery rate, intervention level and population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub beta: f64,
    pub gamma: f64,
    pub rho: f64,
    pub population: f64,
}

impl ModelParams {
    pub fn new(beta: f64, gamma: f64, rho: f64, population: f64) -> Result<Self> {
        let params = Self {
            beta,
            gamma,
            rho,
            population,
        };
        params.validate()?;
        Ok(params)
    }

    /// Same parameters with a different intervention level.
    pub fn with_rho(self, rho: f64) -> Result<Self> {
        Self::new(self.beta, self.gamma, rho, self.population)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("beta", self.beta)?;
        ensure_finite("gamma", self.gamma)?;
        ensure_finite("rho", self.rho)?;
        ensure_finite("population", self.population)?;
        if self.beta < 0.0 {
            return Err(Error::invalid(format!(
                "beta must be >= 0, got {}",
                self.beta
            )));
        }
        if self.gamma <= 0.0 {
            return Err(Error::invalid(format!(
                "gamma must be > 0, got {}",
                self.gamma
            )));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::invalid(format!(
                "rho must lie in [0, 1], got {}",
                self.rho
            )));
        }
        if self.population <= 0.0 {
            return Err(Error::invalid(format!(
                "population must be > 0, got {}",
                self.population
            )));
        }
        Ok(())
    }

    /// Transmission rate after the intervention factor is applied.
    #[must_use]
    pub fn effective_beta(&self) -> f64 {
        (1.0 - self.rho) * self.beta
    }
}

/// Time derivatives of the three compartments, per day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub ds: f64,
    pub di: f64,
    pub dr: f64,
}

#[inline]
fn rhs(transmission: f64, gamma: f64, population: f64, s: f64, i: f64) -> Derivatives {
    let infections = transmission * s * i / population;
    let recoveries = gamma * i;
    Derivatives {
        ds: -infections,
        di: infections - recoveries,
        dr: recoveries,
    }
}

/// Right-hand side of the classical SIR system. `params.rho` is ignored.
pub fn derivatives_classical(
    state: &CompartmentState,
    params: &ModelParams,
) -> Result<Derivatives> {
    state.check_finite()?;
    params.with_rho(0.0)?;
    Ok(rhs(
        params.beta,
        params.gamma,
        params.population,
        state.s,
        state.i,
    ))
}

/// Right-hand side of the SIR system with transmission scaled by `(1 - rho)`.
pub fn derivatives_intervention(
    state: &CompartmentState,
    params: &ModelParams,
) -> Result<Derivatives> {
    state.check_finite()?;
    params.validate()?;
    Ok(rhs(
        params.effective_beta(),
        params.gamma,
        params.population,
        state.s,
        state.i,
    ))
}

/// Basic reproduction number `beta / gamma`.
pub fn reproduction_number(params: &ModelParams) -> Result<f64> {
    ensure_finite("beta", params.beta)?;
    ensure_finite("gamma", params.gamma)?;
    if params.gamma <= 0.0 {
        return Err(Error::invalid(format!(
            "gamma must be > 0, got {}",
            params.gamma
        )));
    }
    Ok(params.beta / params.gamma)
}

/// Reproduction number under intervention, `(1 - rho) * beta / gamma`.
pub fn effective_reproduction_number(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    Ok(params.effective_beta() / params.gamma)
}

/// Daily samples of an integrated trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub states: Vec<CompartmentState>,
    pub params: ModelParams,
    /// RK4 step actually used (divides one day evenly).
    pub step_days: f64,
}

/// Highest infected sample and the day it is first reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub infected: f64,
    pub day: usize,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> &CompartmentState {
        self.states
            .last()
            .expect("trajectory has at least one sample")
    }

    pub fn infected(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.i).collect()
    }

    pub fn removed(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.r).collect()
    }

    /// First daily sample attaining the maximum of I.
    pub fn peak(&self) -> Peak {
        let mut best = Peak {
            infected: f64::NEG_INFINITY,
            day: 0,
        };
        for (day, state) in self.states.iter().enumerate() {
            if state.i > best.infected {
                best = Peak {
                    infected: state.i,
                    day,
                };
            }
        }
        best
    }

    /// First day with I below one person, if any within the horizon.
    pub fn die_out_day(&self) -> Option<usize> {
        self.states.iter().position(|s| s.i < DIE_OUT_THRESHOLD)
    }
}

/// Integrates the intervention system with fixed-step RK4 over
/// `[t0, t0 + horizon_days]`, returning one sample per whole day.
///
/// `step_days` is rounded down to the nearest value that divides one day
/// evenly, so daily samples fall exactly on step boundaries.
pub fn integrate(
    initial: &CompartmentState,
    params: &ModelParams,
    horizon_days: u32,
    step_days: f64,
) -> Result<Trajectory> {
    params.validate()?;
    initial.check_against(params.population)?;
    ensure_finite("step_days", step_days)?;
    if step_days <= 0.0 {
        return Err(Error::invalid(format!(
            "step_days must be > 0, got {step_days}"
        )));
    }
    if horizon_days == 0 {
        return Err(Error::invalid("horizon_days must be > 0"));
    }

    let substeps = (1.0 / step_days).ceil().max(1.0) as usize;
    let h = 1.0 / substeps as f64;
    let n = params.population;
    let transmission = params.effective_beta();
    let gamma = params.gamma;
    let floor = -CONSERVATION_TOL * n;

    let f = |y: [f64; 3]| {
        let d = rhs(transmission, gamma, n, y[0], y[1]);
        [d.ds, d.di, d.dr]
    };

    let mut y = [initial.s.max(0.0), initial.i.max(0.0), initial.r.max(0.0)];
    let mut states = Vec::with_capacity(horizon_days as usize + 1);
    states.push(CompartmentState::new(initial.t, y[0], y[1], y[2]));

    for day in 1..=horizon_days {
        for _ in 0..substeps {
            y = rk4_step(&f, y, h);
            for (k, v) in y.iter_mut().enumerate() {
                if !v.is_finite() || *v < floor {
                    return Err(Error::Numerical(format!(
                        "compartment {} reached {} on day {}",
                        ["s", "i", "r"][k],
                        v,
                        day
                    )));
                }
                if *v < 0.0 {
                    *v = 0.0;
                }
            }
        }
        states.push(CompartmentState::new(
            initial.t + f64::from(day),
            y[0],
            y[1],
            y[2],
        ));
    }

    Ok(Trajectory {
        states,
        params: *params,
        step_days: h,
    })
}

fn rk4_step<F>(f: &F, y: [f64; 3], h: f64) -> [f64; 3]
where
    F: Fn([f64; 3]) -> [f64; 3],
{
    let add = |a: [f64; 3], b: [f64; 3], scale: f64| {
        [
            a[0] + scale * b[0],
            a[1] + scale * b[1],
            a[2] + scale * b[2],
        ]
    };
    let k1 = f(y);
    let k2 = f(add(y, k1, h / 2.0));
    let k3 = f(add(y, k2, h / 2.0));
    let k4 = f(add(y, k3, h));
    let mut out = y;
    for k in 0..3 {
        out[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    }
    out
}
