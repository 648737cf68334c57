//! Fixed-step classical Runge-Kutta (RK4) kernel shared by every equation of motion.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fields::FieldProfile;

/// A state that can be advanced by the RK4 kernel.
pub trait OdeState: Copy {
    /// `self + h * k`.
    fn add_scaled(&self, k: &Self, h: f64) -> Self;
    fn is_finite(&self) -> bool;
}

/// Carrier resolution: at least 50 steps per period of the fastest rate.
pub const STEPS_PER_PERIOD: f64 = 50.0;

/// `[t0, t1]` with requested step `dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeSpan {
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
}

impl TimeSpan {
    pub fn new(t0: f64, t1: f64, dt: f64) -> Self {
        Self { t0, t1, dt }
    }

    /// Number of steps and the uniform step actually used. When `dt` does not
    /// divide the span, the step is shrunk to the next divisor so that the
    /// grid ends exactly at `t1`.
    pub fn grid(&self) -> Result<(usize, f64)> {
        let Self { t0, t1, dt } = *self;
        if !(t0.is_finite() && t1.is_finite() && dt.is_finite()) {
            return Err(Error::InvalidSpan("t0, t1 and dt must be finite".into()));
        }
        if dt <= 0.0 {
            return Err(Error::InvalidSpan(format!("dt must be positive, got {dt}")));
        }
        if t1 <= t0 {
            return Err(Error::InvalidSpan(format!("t1 ({t1}) must exceed t0 ({t0})")));
        }
        let n = ((t1 - t0) / dt - 1e-9).ceil().max(1.0) as usize;
        Ok((n, (t1 - t0) / n as f64))
    }
}

/// Bookkeeping carried alongside a trajectory.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrajectoryMeta {
    pub omega0: Option<f64>,
    pub profile: Option<FieldProfile>,
}

/// Uniformly sampled solution, one sample per step including both endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<S> {
    pub t0: f64,
    pub dt: f64,
    pub states: Vec<S>,
    pub meta: TrajectoryMeta,
}

impl<S> Trajectory<S> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.states.len().saturating_sub(1))
    }

    pub fn duration(&self) -> f64 {
        self.t_end() - self.t0
    }

    pub fn first(&self) -> &S {
        &self.states[0]
    }

    pub fn last(&self) -> &S {
        &self.states[self.states.len() - 1]
    }

    /// `(t, state)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, &S)> + '_ {
        self.states.iter().enumerate().map(move |(i, s)| (self.time(i), s))
    }

    /// Applies `f` pointwise, keeping the time grid and metadata.
    pub fn map<T>(&self, mut f: impl FnMut(f64, &S) -> T) -> Trajectory<T> {
        Trajectory {
            t0: self.t0,
            dt: self.dt,
            states: self.iter().map(|(t, s)| f(t, s)).collect(),
            meta: self.meta.clone(),
        }
    }

    /// Fallible version of [`Trajectory::map`].
    pub fn try_map<T, E>(&self, mut f: impl FnMut(f64, &S) -> Result<T, E>) -> Result<Trajectory<T>, E> {
        Ok(Trajectory {
            t0: self.t0,
            dt: self.dt,
            states: self.iter().map(|(t, s)| f(t, s)).collect::<Result<_, E>>()?,
            meta: self.meta.clone(),
        })
    }
}

/// Integrates `y' = rhs(t, y)` with classical RK4 on a uniform grid.
///
/// `max_rate` is the fastest angular frequency present (for the oscillators,
/// `omega0 + max |beta|`); `dt` must resolve it with [`STEPS_PER_PERIOD`] steps.
/// Each entry of `jumps` inside the span must fall on a grid point; the last
/// stage of a step ending on a jump samples just below it, so a right-continuous
/// step profile is seen from the correct side.
pub fn integrate<S, F>(rhs: F, init: S, span: TimeSpan, max_rate: f64, jumps: &[f64]) -> Result<Trajectory<S>>
where
    S: OdeState,
    F: FnMut(f64, &S) -> Result<S>,
{
    integrate_impulsive(rhs, |_, y: &S| Ok(*y), init, span, max_rate, jumps)
}

/// [`integrate`] for equations whose right-hand side carries a delta function
/// at each jump: `impulse(t_jump, y)` maps the state arriving at a jump to the
/// state leaving it. The sample stored at a jump time is the post-jump state.
pub fn integrate_impulsive<S, F, J>(
    mut rhs: F,
    mut impulse: J,
    init: S,
    span: TimeSpan,
    max_rate: f64,
    jumps: &[f64],
) -> Result<Trajectory<S>>
where
    S: OdeState,
    F: FnMut(f64, &S) -> Result<S>,
    J: FnMut(f64, &S) -> Result<S>,
{
    let (n, h) = span.grid()?;
    let max_dt = 2.0 * PI / (STEPS_PER_PERIOD * max_rate);
    if span.dt > max_dt {
        return Err(Error::StepTooLarge { dt: span.dt, max: max_dt });
    }
    if !init.is_finite() {
        return Err(Error::NonFinite { t: span.t0 });
    }

    // grid index -> exact jump time
    let mut jump_at = vec![None; n + 1];
    for &tj in jumps.iter().filter(|&&tj| tj > span.t0 && tj < span.t1) {
        let k = (tj - span.t0) / h;
        let kr = k.round();
        if (k - kr).abs() > 1e-6 {
            return Err(Error::MisalignedJump { t: tj, h });
        }
        jump_at[kr as usize] = Some(tj);
    }

    let grid_t = |i: usize| span.t0 + i as f64 * h;
    let mut states = Vec::with_capacity(n + 1);
    states.push(init);
    let mut y = init;
    for i in 0..n {
        let ts = jump_at[i].unwrap_or_else(|| grid_t(i));
        let tm = span.t0 + (i as f64 + 0.5) * h;
        let te = match jump_at[i + 1] {
            Some(tj) => f64::next_down(tj),
            None => grid_t(i + 1),
        };
        let k1 = rhs(ts, &y)?;
        let k2 = rhs(tm, &y.add_scaled(&k1, h / 2.0))?;
        let k3 = rhs(tm, &y.add_scaled(&k2, h / 2.0))?;
        let k4 = rhs(te, &y.add_scaled(&k3, h))?;
        y = y.add_scaled(&k1, h / 6.0).add_scaled(&k2, h / 3.0).add_scaled(&k3, h / 3.0).add_scaled(&k4, h / 6.0);
        if let Some(tj) = jump_at[i + 1] {
            y = impulse(tj, &y)?;
        }
        if !y.is_finite() {
            return Err(Error::NonFinite { t: grid_t(i + 1) });
        }
        states.push(y);
    }

    Ok(Trajectory { t0: span.t0, dt: h, states, meta: TrajectoryMeta::default() })
}
