//! Recorded bus traffic.
//!
//! A session file is line-delimited text. The first line is the header
//! `# yui-session 1 cycle_ns=<n>`; every other line is
//! `<bus time ns> <wire frame as hex>`.

use std::fmt::Write as _;
use std::path::Path;

use yui_core::protocol::{decode, encode, Message, Topic};

use crate::error::{Error, Result};

pub const SESSION_VERSION: u32 = 1;
const MAGIC: &str = "# yui-session";

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub t_ns: u64,
    pub topic: Topic,
    pub message: Message,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Session {
    pub cycle_ns: u64,
    pub records: Vec<Record>,
}

impl Session {
    pub fn new(cycle_ns: u64) -> Self {
        Session {
            cycle_ns,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, t_ns: u64, topic: Topic, message: Message) {
        self.records.push(Record { t_ns, topic, message });
    }

    pub fn on(&self, topic: Topic) -> impl Iterator<Item = &Record> + '_ {
        self.records.iter().filter(move |r| r.topic == topic)
    }

    pub fn to_text(&self) -> Result<String> {
        let mut out = format!("{MAGIC} {SESSION_VERSION} cycle_ns={}\n", self.cycle_ns);
        for r in &self.records {
            let frame = encode(r.topic, &r.message)?;
            writeln!(out, "{} {}", r.t_ns, hex::encode(frame)).expect("write to string");
        }
        Ok(out)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&path.display().to_string(), &text)
    }

    /// Parses a session; errors name the byte offset and line of the bad
    /// record.
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let mut offset = 0u64;
        let mut session: Option<Session> = None;
        let mut last_t = 0u64;
        for (i, raw) in text.split_inclusive('\n').enumerate() {
            let line_no = i + 1;
            let err = |msg: String| Error::Session {
                path: name.into(),
                offset,
                line: line_no,
                msg,
            };
            if !raw.ends_with('\n') {
                return Err(err("truncated record (no line terminator)".into()));
            }
            let line = raw.trim_end_matches(['\n', '\r']);
            match &mut session {
                None => session = Some(parse_header(line).map_err(err)?),
                Some(s) => {
                    let (t, frame) = line
                        .split_once(' ')
                        .ok_or_else(|| err("expected `<time> <frame>`".into()))?;
                    let t_ns: u64 = t.parse().map_err(|_| err(format!("bad time {t:?}")))?;
                    if t_ns < last_t {
                        return Err(err(format!("time {t_ns} goes backwards")));
                    }
                    last_t = t_ns;
                    let bytes = hex::decode(frame).map_err(|e| err(format!("bad hex: {e}")))?;
                    let (topic, message) = decode(&bytes).map_err(|e| err(e.to_string()))?;
                    s.push(t_ns, topic, message);
                }
            }
            offset += raw.len() as u64;
        }
        session.ok_or_else(|| Error::Session {
            path: name.into(),
            offset: 0,
            line: 1,
            msg: "empty session".into(),
        })
    }
}

fn parse_header(line: &str) -> std::result::Result<Session, String> {
    let rest = line
        .strip_prefix(MAGIC)
        .ok_or_else(|| format!("missing `{MAGIC}` header"))?;
    let mut parts = rest.split_whitespace();
    let version: u32 = parts
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or("missing session version")?;
    if version != SESSION_VERSION {
        return Err(format!("unsupported session version {version}"));
    }
    let cycle_ns = parts
        .next()
        .and_then(|p| p.strip_prefix("cycle_ns="))
        .and_then(|v| v.parse().ok())
        .filter(|&c: &u64| c > 0)
        .ok_or("missing cycle_ns")?;
    Ok(Session::new(cycle_ns))
}
