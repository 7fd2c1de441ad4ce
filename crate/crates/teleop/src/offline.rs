//! Deterministic single-threaded runs on a virtual clock: both daemons
//! share one in-process bus and step in a fixed order every cycle.

use yui_core::expression::MappingParams;
use yui_core::protocol::{decode_as, encode, Message, Topic};
use yui_core::rig::MotorTargets;
use yui_core::MOTOR_COUNT;

use crate::avatar::{Avatar, AvatarStats};
use crate::bus::Bus;
use crate::clock::{Clock, VirtualClock};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::operator::{apply_world, Operator, OperatorStats};
use crate::scenario::Scenario;
use crate::session::Session;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Record every bus message into the returned session.
    pub record: bool,
    /// Topics to record; empty records all of them.
    pub record_topics: Vec<Topic>,
    pub params: Option<MappingParams>,
}

/// Avatar state after one cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t_ns: u64,
    pub targets: MotorTargets,
    pub angles: [f64; MOTOR_COUNT],
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub cycles: u64,
    pub trajectory: Vec<Sample>,
    pub session: Option<Session>,
    pub avatar: AvatarStats,
    pub operator: OperatorStats,
}

impl RunReport {
    pub fn final_angles(&self) -> [f64; MOTOR_COUNT] {
        self.trajectory.last().map_or([0.0; MOTOR_COUNT], |s| s.angles)
    }

    /// Peak absolute angle of motor index `i` over the run.
    pub fn peak(&self, i: usize) -> f64 {
        self.trajectory.iter().map(|s| s.angles[i].abs()).fold(0.0, f64::max)
    }
}

pub fn run_offline(cfg: &Config, scenario: &Scenario, opts: RunOptions) -> Result<RunReport> {
    let clock = VirtualClock::new();
    let bus = Bus::new(cfg.bus.queue_depth);
    let recorder = opts.record.then(|| {
        let topics = if opts.record_topics.is_empty() {
            Topic::ALL.to_vec()
        } else {
            opts.record_topics.clone()
        };
        bus.subscribe(&topics)
    });
    let mut operator = Operator::with_params(cfg, bus.clone(), opts.params)?;
    let mut avatar = Avatar::new(cfg, bus.clone())?;
    let mut session = opts.record.then(|| Session::new(cfg.cycle_ns()));

    let cycle = cfg.cycle_ns();
    let end_ns = scenario.duration_ms() * 1_000_000;
    let mut events = scenario.events.iter().peekable();
    let mut trajectory = Vec::new();
    let mut cycles = 0;
    while clock.now_ns() <= end_ns {
        let now = clock.now_ns();
        while let Some(ev) = events.next_if(|e| e.t_ms * 1_000_000 <= now) {
            if let Some(change) = operator.apply(&ev.event, now)? {
                apply_world(&mut avatar.world, change);
            }
        }
        operator.step(now)?;
        let targets = operator.targets(now);
        avatar.step(now)?;
        if let (Some(rec), Some(s)) = (&recorder, &mut session) {
            for (topic, msg) in rec.drain() {
                s.push(now, topic, msg);
            }
        }
        trajectory.push(Sample {
            t_ns: now,
            targets,
            angles: avatar.angles(),
        });
        cycles += 1;
        clock.sleep_until(now + cycle);
    }
    Ok(RunReport {
        cycles,
        trajectory,
        session,
        avatar: avatar.stats(),
        operator: operator.stats(),
    })
}

/// Feeds the recorded joint targets into a fresh avatar and checks that it
/// publishes byte-identical joint states. Returns the number compared.
pub fn replay(cfg: &Config, session: &Session) -> Result<usize> {
    if session.cycle_ns != cfg.cycle_ns() {
        return Err(Error::Config(format!(
            "session cycle {} ns does not match configured {} ns",
            session.cycle_ns,
            cfg.cycle_ns()
        )));
    }
    let bus = Bus::new(cfg.bus.queue_depth);
    let states = bus.subscribe(&[Topic::JointStates]);
    let mut avatar = Avatar::new(cfg, bus.clone())?;
    let mut targets = session.on(Topic::JointTargets).peekable();
    let mut expected = session.on(Topic::JointStates).enumerate();
    let Some(last) = session.records.last().map(|r| r.t_ns) else {
        return Ok(0);
    };
    let mut compared = 0;
    let mut now = 0;
    while now <= last {
        while let Some(r) = targets.next_if(|r| r.t_ns <= now) {
            bus.publish(Topic::JointTargets, r.message.clone())?;
        }
        avatar.step(now)?;
        for (_, got) in states.drain() {
            let Some((index, want)) = expected.next() else {
                return Err(Error::ReplayMismatch {
                    index: compared,
                    timestamp_ns: got.timestamp_ns(),
                });
            };
            // Compare on the wire so that NaN payloads and -0.0 count too.
            let a = encode(Topic::JointStates, &got)?;
            let b = encode(Topic::JointStates, &want.message)?;
            if a != b {
                return Err(Error::ReplayMismatch {
                    index,
                    timestamp_ns: want.message.timestamp_ns(),
                });
            }
            debug_assert_eq!(decode_as(&b, Topic::JointStates)?, want.message);
            compared += 1;
        }
        now += cfg.cycle_ns();
    }
    if let Some((index, want)) = expected.next() {
        return Err(Error::ReplayMismatch {
            index,
            timestamp_ns: want.message.timestamp_ns(),
        });
    }
    Ok(compared)
}

/// Joint states recorded in a session, decoded.
pub fn recorded_states(session: &Session) -> impl Iterator<Item = &yui_core::protocol::JointStateMsg> + '_ {
    session.on(Topic::JointStates).filter_map(|r| match &r.message {
        Message::Joints(j) => Some(j),
        _ => None,
    })
}
