//! Scripted sessions.
//!
//! A scenario file is JSON Lines: one object per line with a time in
//! milliseconds and an `event` tag. Blank lines and lines starting with `#`
//! are ignored. Times must not decrease.
//!
//! ```text
//! {"t_ms": 0, "event": "set_emotion", "name": "happiness"}
//! {"t_ms": 500, "event": "set_motions", "motions": {"27": 0.6}}
//! {"t_ms": 800, "event": "gaze", "azimuth": 60.0}
//! {"t_ms": 2000, "event": "end"}
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use yui_core::perception::Point3;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub t_ms: u64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case", deny_unknown_fields)]
pub enum Event {
    /// Replace the face with a preset scaled by `intensity`.
    SetEmotion {
        name: String,
        #[serde(default = "one")]
        intensity: f64,
    },
    /// Replace the face with compiled Action Units, keyed by AU number.
    SetAu { aus: BTreeMap<String, f64> },
    /// Override single motions on top of the face, keyed by motion id.
    SetMotions { motions: BTreeMap<String, f64> },
    /// Drive all motors from an expression vector, keyed by channel name.
    SetExpression { values: BTreeMap<String, f64> },
    SetNeck {
        #[serde(default)]
        yaw: f64,
        #[serde(default)]
        pitch: f64,
        #[serde(default)]
        roll: f64,
    },
    SetEyes {
        #[serde(default)]
        left_yaw: f64,
        #[serde(default)]
        right_yaw: f64,
        #[serde(default)]
        pitch: f64,
    },
    /// Look towards a direction, eyes first.
    Gaze {
        azimuth: f64,
        #[serde(default)]
        elevation: f64,
    },
    /// Sound a tone from one of the eight sweep positions.
    PlayTone {
        position: u8,
        duration_ms: u64,
        freq_hz: Option<f64>,
    },
    /// Move a tracked object along a path, times relative to the event.
    MoveObject {
        path: Vec<Waypoint>,
        #[serde(default)]
        follow: bool,
    },
    /// Operator speech stand-in: a tone on the operator microphone.
    Speak { duration_ms: u64, freq_hz: Option<f64> },
    /// Drop the face, overrides and expression vector.
    Clear,
    End,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimedEvent {
    pub t_ms: u64,
    #[serde(flatten)]
    pub event: Event,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scenario {
    pub name: String,
    pub events: Vec<TimedEvent>,
}

/// Time left for motion to settle after the last event when there is no
/// explicit `end`.
const TAIL_MS: u64 = 1000;

impl Scenario {
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Parse {
            path: name.into(),
            line,
            msg,
        };
        let mut events: Vec<TimedEvent> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let ev: TimedEvent = serde_json::from_str(line).map_err(|e| err(i + 1, e.to_string()))?;
            if let Some(prev) = events.last() {
                if ev.t_ms < prev.t_ms {
                    return Err(err(i + 1, format!("time {} ms goes backwards", ev.t_ms)));
                }
            }
            validate(&ev.event).map_err(|m| err(i + 1, m))?;
            events.push(ev);
        }
        Ok(Scenario {
            name: name.into(),
            events,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Scenario::parse(&path.display().to_string(), &text)
    }

    pub fn to_jsonl(&self) -> String {
        self.events
            .iter()
            .map(|e| serde_json::to_string(e).expect("event serializes") + "\n")
            .collect()
    }

    pub fn duration_ms(&self) -> u64 {
        match self.events.iter().find(|e| e.event == Event::End) {
            Some(end) => end.t_ms,
            None => self.events.last().map_or(0, |e| e.t_ms) + TAIL_MS,
        }
    }

    /// Built-in scenario by name.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "greeting" => Some(greeting()),
            "object-following" => Some(object_following()),
            _ => None,
        }
    }
}

fn validate(ev: &Event) -> std::result::Result<(), String> {
    let finite = |v: f64, what: &str| {
        if v.is_finite() {
            Ok(())
        } else {
            Err(format!("{what} must be finite"))
        }
    };
    match ev {
        Event::SetEmotion { name, intensity } => {
            name.parse::<yui_core::expression::Emotion>()
                .map_err(|_| format!("unknown emotion {name:?}"))?;
            if !(0.0..=1.0).contains(intensity) {
                return Err("intensity must be in [0, 1]".into());
            }
        }
        Event::SetAu { aus } => {
            for (k, v) in aus {
                let id: u8 = k.parse().map_err(|_| format!("bad AU key {k:?}"))?;
                yui_core::expression::AuId::new(id).map_err(|e| e.to_string())?;
                finite(*v, "AU intensity")?;
            }
        }
        Event::SetMotions { motions } => {
            for (k, v) in motions {
                let id: u8 = k.parse().map_err(|_| format!("bad motion key {k:?}"))?;
                yui_core::MotionId::new(id).ok_or(format!("motion {id} out of range"))?;
                finite(*v, "motion value")?;
            }
        }
        Event::SetExpression { values } => {
            for v in values.values() {
                finite(*v, "expression value")?;
            }
        }
        Event::SetNeck { yaw, pitch, roll } => {
            for v in [yaw, pitch, roll] {
                finite(*v, "neck angle")?;
            }
        }
        Event::SetEyes {
            left_yaw,
            right_yaw,
            pitch,
        } => {
            for v in [left_yaw, right_yaw, pitch] {
                finite(*v, "eye angle")?;
            }
        }
        Event::Gaze { azimuth, elevation } => {
            finite(*azimuth, "azimuth")?;
            finite(*elevation, "elevation")?;
        }
        Event::PlayTone {
            position, freq_hz, ..
        } => {
            if !(1..=8).contains(position) {
                return Err(format!("sweep position {position} not in 1..=8"));
            }
            if let Some(f) = freq_hz {
                if !(*f > 0.0 && f.is_finite()) {
                    return Err("freq_hz must be positive".into());
                }
            }
        }
        Event::MoveObject { path, .. } => {
            if path.is_empty() {
                return Err("object path is empty".into());
            }
            if path.windows(2).any(|w| w[1].t_ms < w[0].t_ms) {
                return Err("object path times go backwards".into());
            }
            for w in path {
                for v in [w.x, w.y, w.z] {
                    finite(v, "waypoint")?;
                }
            }
        }
        Event::Speak { freq_hz, .. } => {
            if let Some(f) = freq_hz {
                if !(*f > 0.0 && f.is_finite()) {
                    return Err("freq_hz must be positive".into());
                }
            }
        }
        Event::Clear | Event::End => {}
    }
    Ok(())
}

/// Piecewise-linear object path with absolute times.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectPath {
    points: Vec<(u64, Point3)>,
}

impl ObjectPath {
    pub fn new(start_ns: u64, path: &[Waypoint]) -> Self {
        ObjectPath {
            points: path
                .iter()
                .map(|w| (start_ns + w.t_ms * 1_000_000, Point3::new(w.x, w.y, w.z)))
                .collect(),
        }
    }

    /// Position at `t_ns`, holding the end points outside the path.
    pub fn at(&self, t_ns: u64) -> Point3 {
        let first = self.points[0];
        if t_ns <= first.0 {
            return first.1;
        }
        for w in self.points.windows(2) {
            let ((t0, a), (t1, b)) = (w[0], w[1]);
            if t_ns <= t1 {
                if t1 == t0 {
                    return b;
                }
                let s = (t_ns - t0) as f64 / (t1 - t0) as f64;
                return Point3::new(a.x + s * (b.x - a.x), a.y + s * (b.y - a.y), a.z + s * (b.z - a.z));
            }
        }
        self.points[self.points.len() - 1].1
    }
}

fn ev(t_ms: u64, event: Event) -> TimedEvent {
    TimedEvent { t_ms, event }
}

fn motions(pairs: &[(u8, f64)]) -> Event {
    Event::SetMotions {
        motions: pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
    }
}

/// A short greeting: smile, blink, speak with jaw and mouth-corner motion,
/// a small nod, then back to neutral.
pub fn greeting() -> Scenario {
    let mut events = vec![
        ev(0, Event::Clear),
        ev(
            200,
            Event::SetEmotion {
                name: "happiness".into(),
                intensity: 0.8,
            },
        ),
        ev(600, motions(&[(5, 1.0)])),
        ev(750, motions(&[(5, 0.0)])),
        ev(
            900,
            Event::Speak {
                duration_ms: 1200,
                freq_hz: Some(220.0),
            },
        ),
    ];
    // Syllables: jaw opens and closes while the mouth corners pull.
    for k in 0..6u64 {
        let t = 900 + k * 200;
        events.push(ev(t, motions(&[(27, 0.7), (28, 0.0), (20, 0.4), (21, 0.4), (22, 0.0)])));
        events.push(ev(t + 100, motions(&[(27, 0.0), (28, 0.3), (20, 0.0), (21, 0.0), (22, 0.3)])));
    }
    events.extend([
        ev(
            2100,
            motions(&[(27, 0.0), (28, 0.0), (20, 0.0), (21, 0.0), (22, 0.0), (25, 0.0), (26, 0.0)]),
        ),
        ev(2200, Event::SetNeck { yaw: 0.0, pitch: -12.0, roll: 0.0 }),
        ev(2600, Event::SetNeck { yaw: 0.0, pitch: 0.0, roll: 0.0 }),
        ev(2900, motions(&[(5, 1.0)])),
        ev(3050, motions(&[(5, 0.0)])),
        ev(3300, Event::Clear),
        ev(4300, Event::End),
    ]);
    Scenario {
        name: "greeting".into(),
        events,
    }
}

/// An object crossing the field of view from -70° to +70° at 1.5 m while
/// the head follows it.
pub fn object_following() -> Scenario {
    let r = 1.5;
    let path: Vec<Waypoint> = (0..=14)
        .map(|k| {
            let az = (-70.0 + 10.0 * k as f64).to_radians();
            Waypoint {
                t_ms: k * 300,
                x: r * az.sin(),
                y: 0.0,
                z: r * az.cos(),
            }
        })
        .collect();
    Scenario {
        name: "object-following".into(),
        events: vec![
            ev(0, Event::MoveObject { path, follow: true }),
            ev(5200, Event::End),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_round_trip_through_jsonl() {
        for s in [greeting(), object_following()] {
            let back = Scenario::parse(&s.name, &s.to_jsonl()).unwrap();
            assert_eq!(back.events, s.events);
        }
    }

    #[test]
    fn parses_comments_and_defaults() {
        let s = Scenario::parse(
            "t",
            "# hello\n\n{\"t_ms\": 5, \"event\": \"set_emotion\", \"name\": \"Fear\"}\n{\"t_ms\": 9, \"event\": \"gaze\", \"azimuth\": 10}\n",
        )
        .unwrap();
        assert_eq!(
            s.events[0].event,
            Event::SetEmotion {
                name: "Fear".into(),
                intensity: 1.0
            }
        );
        assert_eq!(s.duration_ms(), 9 + TAIL_MS);
    }

    #[test]
    fn reports_line_numbers() {
        let text = "{\"t_ms\": 10, \"event\": \"clear\"}\n{\"t_ms\": 5, \"event\": \"clear\"}\n";
        match Scenario::parse("s", text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        for bad in [
            r#"{"t_ms": 0, "event": "set_emotion", "name": "boredom"}"#,
            r#"{"t_ms": 0, "event": "set_au", "aus": {"3": 1.0}}"#,
            r#"{"t_ms": 0, "event": "set_motions", "motions": {"32": 1.0}}"#,
            r#"{"t_ms": 0, "event": "play_tone", "position": 9, "duration_ms": 10}"#,
            r#"{"t_ms": 0, "event": "dance"}"#,
        ] {
            assert!(Scenario::parse("s", bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn object_path_interpolates() {
        let p = ObjectPath::new(
            1_000,
            &[
                Waypoint { t_ms: 0, x: 0.0, y: 0.0, z: 1.0 },
                Waypoint { t_ms: 10, x: 1.0, y: 0.0, z: 1.0 },
            ],
        );
        assert_eq!(p.at(0).x, 0.0);
        assert_eq!(p.at(1_000 + 5_000_000).x, 0.5);
        assert_eq!(p.at(u64::MAX).x, 1.0);
    }

    #[test]
    fn following_path_crosses_sixty_degrees() {
        let s = object_following();
        let Event::MoveObject { path, .. } = &s.events[0].event else { panic!() };
        let az: Vec<f64> = path.iter().map(|w| w.x.atan2(w.z).to_degrees()).collect();
        assert!(az.iter().any(|a| *a < -60.0) && az.iter().any(|a| *a > 60.0));
    }
}
