//! Per-motor servo simulation.
//!
//! The driver board runs a PID loop at a fast internal rate while the host
//! only sends a new goal once per communication cycle. Between goals the
//! board ramps its working target linearly so the motor does not see a step
//! every cycle. The plant is a first-order velocity lag driven by a PWM
//! duty in `[0, 1]` and a direction bit.
//!
//! Decreasing goals are ramped the same way as increasing ones: the working
//! target always stays between the latched start and the goal.

use core::fmt;

use crate::math;

/// Nanoseconds per second.
pub const NANOS_PER_SEC: u64 = 1_000_000_000;

#[inline]
fn secs(ns: u64) -> f64 {
    ns as f64 * 1e-9
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ServoError {
    /// A value that must be finite was NaN or infinite.
    NonFinite(&'static str),
    /// A gain was negative.
    NegativeGain(&'static str),
    /// Input limit outside `[0, 1]`.
    InputLimit(f64),
    /// A period or step length that must be positive was not.
    NonPositivePeriod(&'static str),
    /// The internal control period is longer than the command period.
    ControlSlowerThanCommands { control_ns: u64, command_ns: u64 },
    /// Plant parameters out of range.
    Plant(&'static str),
}

impl fmt::Display for ServoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ServoError::NonFinite(what) => write!(f, "{what} is not finite"),
            ServoError::NegativeGain(which) => write!(f, "gain {which} is negative"),
            ServoError::InputLimit(v) => write!(f, "input limit {v} outside [0, 1]"),
            ServoError::NonPositivePeriod(what) => write!(f, "{what} must be positive"),
            ServoError::ControlSlowerThanCommands {
                control_ns,
                command_ns,
            } => write!(
                f,
                "control period {control_ns} ns exceeds command period {command_ns} ns"
            ),
            ServoError::Plant(what) => write!(f, "invalid plant parameters: {what}"),
        }
    }
}

impl core::error::Error for ServoError {}

fn finite(v: f64, what: &'static str) -> Result<f64, ServoError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ServoError::NonFinite(what))
    }
}

/// Proportional, integral and derivative gains.
///
/// Units are duty per unit of error, per unit·s and per unit/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
}

impl PidGains {
    pub fn new(kp: f64, ki: f64, kd: f64) -> Result<Self, ServoError> {
        let g = PidGains { kp, ki, kd };
        g.validate()?;
        Ok(g)
    }

    /// Pure proportional control.
    pub fn proportional(kp: f64) -> Result<Self, ServoError> {
        Self::new(kp, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<(), ServoError> {
        for (v, name) in [(self.kp, "kp"), (self.ki, "ki"), (self.kd, "kd")] {
            finite(v, name)?;
            if v < 0.0 {
                return Err(ServoError::NegativeGain(name));
            }
        }
        Ok(())
    }
}

/// Rotation direction bit sent to the motor driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum Direction {
    /// σ = 0
    #[default]
    Forward,
    /// σ = 1
    Reverse,
}

impl Direction {
    pub fn bit(self) -> u8 {
        match self {
            Direction::Forward => 0,
            Direction::Reverse => 1,
        }
    }

    /// +1 for forward, -1 for reverse.
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Reverse => -1.0,
        }
    }
}

/// Measured and controller-internal state of one motor.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ServoState {
    /// Current angle `w`.
    pub angle: f64,
    pub angular_velocity: f64,
    /// Accumulated `∫e dt`. Frozen while the duty is saturated.
    pub integral_error: f64,
    pub last_error: f64,
    /// Applied duty `u`, always within `[0, 1]`.
    pub input_ratio: f64,
    pub direction: Direction,
}

impl ServoState {
    pub fn at_rest(angle: f64) -> Self {
        ServoState {
            angle,
            ..Default::default()
        }
    }
}

/// Result of one controller evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PidOutput {
    /// Unclamped signed command `u'`.
    pub raw: f64,
    /// Applied duty `u = min(|u'|, u_lim)`.
    pub duty: f64,
    pub direction: Direction,
    pub saturated: bool,
}

/// One controller evaluation against target `target`.
///
/// The duty is `|u'|` clamped to `input_limit`; the direction bit is set iff
/// `u' < 0`. When the new integral would leave the duty saturated the
/// integral keeps its previous value.
pub fn pid_step(
    state: &ServoState,
    target: f64,
    gains: &PidGains,
    input_limit: f64,
    dt: f64,
) -> Result<(PidOutput, ServoState), ServoError> {
    finite(target, "target")?;
    finite(state.angle, "angle")?;
    finite(state.integral_error, "integral error")?;
    finite(state.last_error, "last error")?;
    finite(dt, "dt")?;
    gains.validate()?;
    if dt <= 0.0 {
        return Err(ServoError::NonPositivePeriod("dt"));
    }
    if !(0.0..=1.0).contains(&input_limit) {
        return Err(ServoError::InputLimit(input_limit));
    }

    let error = target - state.angle;
    let derivative = (error - state.last_error) / dt;
    let command = |integral: f64| gains.kp * error + gains.ki * integral + gains.kd * derivative;

    let integral = state.integral_error + error * dt;
    let mut raw = command(integral);
    let mut next_integral = integral;
    if math::abs(raw) >= input_limit {
        next_integral = state.integral_error;
        raw = command(next_integral);
    }
    finite(raw, "controller output")?;

    let magnitude = math::abs(raw);
    let saturated = magnitude >= input_limit;
    let duty = if saturated { input_limit } else { magnitude };
    let direction = if raw >= 0.0 {
        Direction::Forward
    } else {
        Direction::Reverse
    };

    let next = ServoState {
        integral_error: next_integral,
        last_error: error,
        input_ratio: duty,
        direction,
        ..*state
    };
    Ok((
        PidOutput {
            raw,
            duty,
            direction,
            saturated,
        },
        next,
    ))
}

/// Linear ramp from the last latched target towards the commanded goal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interpolator {
    /// `w_d0`, the working target when the goal was latched.
    pub start: f64,
    /// `w'_d`, the commanded goal.
    pub goal: f64,
    /// Ramp velocity `v` in units per second.
    pub velocity: f64,
    /// Latch time `t0` in seconds.
    pub latched_at: f64,
    /// Ramp length `T` in seconds; the goal is reached exactly at its end.
    pub duration: f64,
}

impl Interpolator {
    /// A ramp that sits at `angle` forever.
    pub fn hold(angle: f64) -> Self {
        Interpolator {
            start: angle,
            goal: angle,
            velocity: 0.0,
            latched_at: 0.0,
            duration: 0.0,
        }
    }

    /// Working target at time `now` (seconds).
    ///
    /// `start + velocity·δt`, saturated at `goal`. Times before the latch
    /// are treated as the latch instant.
    pub fn target_at(&self, now: f64) -> f64 {
        self.target_after(now - self.latched_at)
    }

    /// Working target `elapsed` seconds after the latch.
    pub fn target_after(&self, elapsed: f64) -> f64 {
        let elapsed = elapsed.max(0.0);
        if elapsed >= self.duration {
            return self.goal;
        }
        let raw = self.start + self.velocity * elapsed;
        let (lo, hi) = if self.start <= self.goal {
            (self.start, self.goal)
        } else {
            (self.goal, self.start)
        };
        raw.clamp(lo, hi)
    }

    /// Latches a new goal at `now`, ramping over `period` seconds.
    pub fn latch(&self, goal: f64, period: f64, now: f64) -> Result<Self, ServoError> {
        finite(goal, "goal")?;
        finite(period, "command period")?;
        finite(now, "latch time")?;
        if period <= 0.0 {
            return Err(ServoError::NonPositivePeriod("command period"));
        }
        let start = self.target_at(now);
        Ok(Interpolator {
            start,
            goal,
            velocity: (goal - start) / period,
            latched_at: now,
            duration: period,
        })
    }
}

/// First-order motor model. Not a model of any particular motor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantParams {
    /// Steady-state speed at duty 1.0, units/s.
    pub max_speed: f64,
    /// Velocity lag time constant, seconds.
    pub time_constant: f64,
    pub min_angle: f64,
    pub max_angle: f64,
}

impl PlantParams {
    pub fn validate(&self) -> Result<(), ServoError> {
        if !(self.max_speed.is_finite() && self.max_speed > 0.0) {
            return Err(ServoError::Plant("max_speed must be positive"));
        }
        if !(self.time_constant.is_finite() && self.time_constant > 0.0) {
            return Err(ServoError::Plant("time_constant must be positive"));
        }
        if !(self.min_angle.is_finite() && self.max_angle.is_finite())
            || self.min_angle > self.max_angle
        {
            return Err(ServoError::Plant("position limits must be ordered"));
        }
        Ok(())
    }
}

/// Advances the plant by `dt` under a constant duty and direction.
///
/// Velocity relaxes exactly (exponential step) toward
/// `sign(direction)·duty·max_speed`; the angle integrates the new velocity
/// and stops at the position limits.
pub fn plant_step(
    state: &ServoState,
    duty: f64,
    direction: Direction,
    params: &PlantParams,
    dt: f64,
) -> ServoState {
    let steady = direction.sign() * duty.clamp(0.0, 1.0) * params.max_speed;
    let decay = math::exp(-dt / params.time_constant);
    let mut velocity = steady + (state.angular_velocity - steady) * decay;
    let mut angle = state.angle + velocity * dt;
    if angle >= params.max_angle {
        angle = params.max_angle;
        velocity = velocity.min(0.0);
    } else if angle <= params.min_angle {
        angle = params.min_angle;
        velocity = velocity.max(0.0);
    }
    ServoState {
        angle,
        angular_velocity: velocity,
        ..*state
    }
}

/// Everything needed to run one motor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServoConfig {
    pub gains: PidGains,
    pub input_limit: f64,
    pub plant: PlantParams,
    pub control_period_ns: u64,
    pub command_period_ns: u64,
}

/// Default internal control period (1 kHz).
pub const DEFAULT_CONTROL_PERIOD_NS: u64 = 1_000_000;
/// Default host command period (100 Hz).
pub const DEFAULT_COMMAND_PERIOD_NS: u64 = 10_000_000;

/// Frozen gains for motors working in degrees (eyes, neck).
///
/// Tuned against the default degree plant so that a 10° step settles
/// within 2 % in under 0.2 s with overshoot inside the band.
pub const DEGREE_GAINS: PidGains = PidGains {
    kp: 0.08,
    ki: 0.02,
    kd: 0.0015,
};

/// Frozen gains for facial motors working in normalized units.
pub const NORMALIZED_GAINS: PidGains = PidGains {
    kp: 6.0,
    ki: 1.0,
    kd: 0.1,
};

impl ServoConfig {
    pub fn validate(&self) -> Result<(), ServoError> {
        self.gains.validate()?;
        self.plant.validate()?;
        if !(0.0..=1.0).contains(&self.input_limit) {
            return Err(ServoError::InputLimit(self.input_limit));
        }
        if self.control_period_ns == 0 {
            return Err(ServoError::NonPositivePeriod("control period"));
        }
        if self.command_period_ns == 0 {
            return Err(ServoError::NonPositivePeriod("command period"));
        }
        if self.control_period_ns > self.command_period_ns {
            return Err(ServoError::ControlSlowerThanCommands {
                control_ns: self.control_period_ns,
                command_ns: self.command_period_ns,
            });
        }
        Ok(())
    }

    /// Defaults for an eye or neck motor limited to `[min, max]` degrees.
    pub fn degrees(min: f64, max: f64) -> Self {
        ServoConfig {
            gains: DEGREE_GAINS,
            input_limit: 1.0,
            plant: PlantParams {
                max_speed: 360.0,
                time_constant: 0.02,
                min_angle: min,
                max_angle: max,
            },
            control_period_ns: DEFAULT_CONTROL_PERIOD_NS,
            command_period_ns: DEFAULT_COMMAND_PERIOD_NS,
        }
    }

    /// Defaults for a facial motor limited to `[min, max]` normalized units.
    pub fn normalized(min: f64, max: f64) -> Self {
        ServoConfig {
            gains: NORMALIZED_GAINS,
            input_limit: 1.0,
            plant: PlantParams {
                max_speed: 5.0,
                time_constant: 0.02,
                min_angle: min,
                max_angle: max,
            },
            control_period_ns: DEFAULT_CONTROL_PERIOD_NS,
            command_period_ns: DEFAULT_COMMAND_PERIOD_NS,
        }
    }
}

/// One simulated motor: interpolator, PID and plant driven on a fixed tick.
#[derive(Debug, Clone, PartialEq)]
pub struct Servo {
    config: ServoConfig,
    state: ServoState,
    interp: Interpolator,
    ticks: u64,
    latched_ns: u64,
    last_target: f64,
}

impl Servo {
    pub fn new(config: ServoConfig, initial_angle: f64) -> Result<Self, ServoError> {
        config.validate()?;
        finite(initial_angle, "initial angle")?;
        let angle = initial_angle.clamp(config.plant.min_angle, config.plant.max_angle);
        Ok(Servo {
            config,
            state: ServoState::at_rest(angle),
            interp: Interpolator::hold(angle),
            ticks: 0,
            latched_ns: 0,
            last_target: angle,
        })
    }

    pub fn config(&self) -> &ServoConfig {
        &self.config
    }

    pub fn state(&self) -> &ServoState {
        &self.state
    }

    pub fn interpolator(&self) -> &Interpolator {
        &self.interp
    }

    /// Target used by the most recent control tick.
    pub fn last_target(&self) -> f64 {
        self.last_target
    }

    /// Simulated time of the last executed tick.
    pub fn time_ns(&self) -> u64 {
        self.ticks * self.config.control_period_ns
    }

    /// Latches a new goal received at `now_ns`.
    pub fn command(&mut self, goal: f64, now_ns: u64) -> Result<(), ServoError> {
        let period = secs(self.config.command_period_ns);
        let start = self.target_at_ns(now_ns);
        let mut next = Interpolator::hold(start).latch(goal, period, 0.0)?;
        next.latched_at = secs(now_ns);
        self.interp = next;
        self.latched_ns = now_ns;
        Ok(())
    }

    // Elapsed time is taken in integer nanoseconds so a ramp ends exactly on
    // the tick that completes the command period.
    fn target_at_ns(&self, now_ns: u64) -> f64 {
        self.interp
            .target_after(secs(now_ns.saturating_sub(self.latched_ns)))
    }

    /// Latches a goal together with a new input limit.
    pub fn command_with_limit(
        &mut self,
        goal: f64,
        input_limit: f64,
        now_ns: u64,
    ) -> Result<(), ServoError> {
        if !(0.0..=1.0).contains(&input_limit) {
            return Err(ServoError::InputLimit(input_limit));
        }
        self.command(goal, now_ns)?;
        self.config.input_limit = input_limit;
        Ok(())
    }

    /// Runs one control tick.
    pub fn tick(&mut self) -> Result<(), ServoError> {
        let dt_ns = self.config.control_period_ns;
        let dt = secs(dt_ns);
        let target = self.target_at_ns((self.ticks + 1) * dt_ns);
        let (out, next) = pid_step(
            &self.state,
            target,
            &self.config.gains,
            self.config.input_limit,
            dt,
        )?;
        self.state = plant_step(&next, out.duty, out.direction, &self.config.plant, dt);
        self.last_target = target;
        self.ticks += 1;
        Ok(())
    }

    /// Runs every control tick whose time is at or before `now_ns`.
    pub fn advance_to(&mut self, now_ns: u64) -> Result<&ServoState, ServoError> {
        while (self.ticks + 1) * self.config.control_period_ns <= now_ns {
            self.tick()?;
        }
        Ok(&self.state)
    }
}

/// Time for a step from `from` to `to` to enter and stay inside a band of
/// `band` times the step size, simulated for at most `horizon_ns`.
///
/// The step is commanded at time zero through the normal command ramp.
/// Returns `None` when the response is still outside the band at the
/// horizon, and zero for a null step.
pub fn settle_time_ns(
    config: ServoConfig,
    from: f64,
    to: f64,
    band: f64,
    horizon_ns: u64,
) -> Result<Option<u64>, ServoError> {
    let mut servo = Servo::new(config, from)?;
    let to = to.clamp(config.plant.min_angle, config.plant.max_angle);
    let tol = band * math::abs(to - servo.state().angle);
    if tol == 0.0 {
        return Ok(Some(0));
    }
    servo.command(to, 0)?;
    let mut last_outside = 0;
    while servo.time_ns() < horizon_ns {
        servo.tick()?;
        if math::abs(servo.state().angle - to) > tol {
            last_outside = servo.time_ns();
        }
    }
    Ok((last_outside < servo.time_ns()).then_some(last_outside))
}
