//! TCP transport between the operator and avatar daemons. Both directions
//! carry wire frames back to back; each side bridges a socket onto its
//! local bus.

use std::io::{ErrorKind, Read, Write};
use std::net::{TcpListener, TcpStream, ToSocketAddrs};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::thread::{self, JoinHandle};
use std::time::Duration;

use log::{info, warn};
use yui_core::protocol::{decode, encode, frame_length, Topic};

use crate::avatar::Avatar;
use crate::bus::Bus;
use crate::clock::Clock;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::operator::{apply_world, Operator};
use crate::scenario::Scenario;

/// Topics the avatar sends to the operator.
pub const AVATAR_OUT: [Topic; 4] = [
    Topic::JointStates,
    Topic::AudioAvatar,
    Topic::CameraLeft,
    Topic::CameraRight,
];
/// Topics the operator sends to the avatar.
pub const OPERATOR_OUT: [Topic; 2] = [Topic::JointTargets, Topic::AudioOperator];

const POLL: Duration = Duration::from_millis(20);
const WRITE_TIMEOUT: Duration = Duration::from_millis(500);

#[derive(Debug, Default)]
pub struct LinkCounters {
    pub frames_in: AtomicU64,
    pub frames_out: AtomicU64,
    pub rejected: AtomicU64,
}

/// One connected socket bridged onto a bus. Dropping it shuts the socket
/// down and joins both threads.
pub struct Bridge {
    stream: TcpStream,
    alive: Arc<AtomicBool>,
    counters: Arc<LinkCounters>,
    threads: Vec<JoinHandle<()>>,
}

impl Bridge {
    /// Publishes frames on `incoming` topics read from `stream` and writes
    /// everything published on `outgoing`.
    pub fn spawn(stream: TcpStream, bus: &Bus, incoming: &[Topic], outgoing: &[Topic]) -> Result<Self> {
        stream.set_nodelay(true)?;
        stream.set_read_timeout(Some(POLL))?;
        stream.set_write_timeout(Some(WRITE_TIMEOUT))?;
        let alive = Arc::new(AtomicBool::new(true));
        let counters = Arc::new(LinkCounters::default());

        let reader = {
            let mut stream = stream.try_clone()?;
            let (bus, alive, counters) = (bus.clone(), alive.clone(), counters.clone());
            let incoming = incoming.to_vec();
            thread::spawn(move || {
                if let Err(e) = read_loop(&mut stream, &bus, &incoming, &alive, &counters) {
                    warn!("link read: {e}");
                }
                alive.store(false, Ordering::SeqCst);
            })
        };
        let writer = {
            let mut stream = stream.try_clone()?;
            let sub = bus.subscribe(outgoing);
            let (alive, counters) = (alive.clone(), counters.clone());
            thread::spawn(move || {
                while alive.load(Ordering::SeqCst) {
                    let Some((topic, msg)) = sub.recv_timeout(POLL) else {
                        continue;
                    };
                    let frame = match encode(topic, &msg) {
                        Ok(f) => f,
                        Err(e) => {
                            warn!("dropping unencodable {topic} message: {e}");
                            continue;
                        }
                    };
                    if let Err(e) = stream.write_all(&frame) {
                        warn!("link write: {e}");
                        break;
                    }
                    counters.frames_out.fetch_add(1, Ordering::Relaxed);
                }
                alive.store(false, Ordering::SeqCst);
            })
        };
        Ok(Bridge {
            stream,
            alive,
            counters,
            threads: vec![reader, writer],
        })
    }

    pub fn is_connected(&self) -> bool {
        self.alive.load(Ordering::SeqCst)
    }

    pub fn counters(&self) -> &LinkCounters {
        &self.counters
    }
}

impl Drop for Bridge {
    fn drop(&mut self) {
        self.alive.store(false, Ordering::SeqCst);
        let _ = self.stream.shutdown(std::net::Shutdown::Both);
        for t in self.threads.drain(..) {
            let _ = t.join();
        }
    }
}

fn read_loop(
    stream: &mut TcpStream,
    bus: &Bus,
    incoming: &[Topic],
    alive: &AtomicBool,
    counters: &LinkCounters,
) -> Result<()> {
    let mut buf: Vec<u8> = Vec::with_capacity(64 * 1024);
    let mut chunk = [0u8; 16 * 1024];
    while alive.load(Ordering::SeqCst) {
        match stream.read(&mut chunk) {
            Ok(0) => {
                info!("peer closed the connection");
                return Ok(());
            }
            Ok(n) => buf.extend_from_slice(&chunk[..n]),
            Err(e) if matches!(e.kind(), ErrorKind::WouldBlock | ErrorKind::TimedOut) => continue,
            Err(e) => return Err(e.into()),
        }
        let mut start = 0;
        // A malformed header cannot be resynchronised; drop the link.
        while let Some(len) = frame_length(&buf[start..])? {
            let frame = &buf[start..start + len];
            start += len;
            match decode(frame) {
                Ok((topic, msg)) if incoming.contains(&topic) => {
                    bus.publish(topic, msg)?;
                    counters.frames_in.fetch_add(1, Ordering::Relaxed);
                }
                Ok((topic, _)) => {
                    warn!("peer sent {topic}, which this side does not accept");
                    counters.rejected.fetch_add(1, Ordering::Relaxed);
                }
                Err(e) => {
                    warn!("dropping bad frame: {e}");
                    counters.rejected.fetch_add(1, Ordering::Relaxed);
                }
            }
        }
        buf.drain(..start);
    }
    Ok(())
}

/// Lets a caller stop a daemon loop from another thread.
#[derive(Debug, Clone, Default)]
pub struct StopFlag(Arc<AtomicBool>);

impl StopFlag {
    pub fn stop(&self) {
        self.0.store(true, Ordering::SeqCst);
    }

    pub fn is_stopped(&self) -> bool {
        self.0.load(Ordering::SeqCst)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DaemonReport {
    pub cycles: u64,
    pub connections: u64,
}

/// Runs the avatar: accepts one operator at a time on `listener` and
/// keeps stepping between connections, holding the last targets.
/// `world` supplies tones and objects for the simulated surroundings.
pub fn run_avatar(
    cfg: &Config,
    listener: TcpListener,
    clock: &dyn Clock,
    world: Option<&Scenario>,
    max_cycles: Option<u64>,
    stop: &StopFlag,
) -> Result<(Avatar, DaemonReport)> {
    listener.set_nonblocking(true)?;
    let bus = Bus::new(cfg.bus.queue_depth);
    let mut avatar = Avatar::new(cfg, bus.clone())?;
    // World events are resolved through an operator instance that never
    // publishes, so tones and paths mean the same as offline.
    let mut world_events = world.map(|s| s.events.iter().peekable());
    let mut resolver = Operator::new(cfg, Bus::new(1))?;
    let mut bridge: Option<Bridge> = None;
    let mut report = DaemonReport::default();
    let cycle = cfg.cycle_ns();
    let mut next = clock.now_ns();
    while !stop.is_stopped() && max_cycles.is_none_or(|m| report.cycles < m) {
        match listener.accept() {
            Ok((stream, peer)) => {
                stream.set_nonblocking(false)?;
                info!("operator connected from {peer}");
                // A new operator replaces the old one.
                drop(bridge.take());
                bridge = Some(Bridge::spawn(stream, &bus, &OPERATOR_OUT, &AVATAR_OUT)?);
                report.connections += 1;
            }
            Err(e) if e.kind() == ErrorKind::WouldBlock => {}
            Err(e) => return Err(Error::Net(e)),
        }
        if bridge.as_ref().is_some_and(|b| !b.is_connected()) {
            info!("operator disconnected; holding last targets");
            bridge = None;
        }
        let now = clock.now_ns();
        if let Some(events) = &mut world_events {
            while let Some(ev) = events.next_if(|e| e.t_ms * 1_000_000 <= now) {
                if let Some(change) = resolver.apply(&ev.event, now)? {
                    apply_world(&mut avatar.world, change);
                }
            }
        }
        avatar.step(now)?;
        report.cycles += 1;
        next += cycle;
        clock.sleep_until(next);
    }
    bus.close();
    Ok((avatar, report))
}

/// Connects to `addr`, retrying for up to `patience`.
pub fn connect(addr: &str, patience: Duration) -> Result<TcpStream> {
    let deadline = std::time::Instant::now() + patience;
    loop {
        let mut last = None;
        for a in addr.to_socket_addrs()? {
            match TcpStream::connect_timeout(&a, Duration::from_millis(500)) {
                Ok(s) => return Ok(s),
                Err(e) => last = Some(e),
            }
        }
        if std::time::Instant::now() >= deadline {
            return Err(Error::Net(last.unwrap_or_else(|| {
                std::io::Error::new(ErrorKind::NotFound, format!("{addr} did not resolve"))
            })));
        }
        thread::sleep(Duration::from_millis(100));
    }
}

/// Runs the operator side of `scenario` against a remote avatar.
pub fn run_operator(
    cfg: &Config,
    stream: TcpStream,
    scenario: &Scenario,
    clock: &dyn Clock,
    stop: &StopFlag,
) -> Result<(Operator, DaemonReport)> {
    let bus = Bus::new(cfg.bus.queue_depth);
    let mut operator = Operator::new(cfg, bus.clone())?;
    let bridge = Bridge::spawn(stream, &bus, &AVATAR_OUT, &OPERATOR_OUT)?;
    let mut events = scenario.events.iter().peekable();
    let start = clock.now_ns();
    let end = start + scenario.duration_ms() * 1_000_000;
    let cycle = cfg.cycle_ns();
    let mut next = start;
    let mut report = DaemonReport {
        cycles: 0,
        connections: 1,
    };
    while !stop.is_stopped() && clock.now_ns() <= end {
        if !bridge.is_connected() {
            return Err(Error::Net(std::io::Error::new(
                ErrorKind::ConnectionAborted,
                "avatar closed the connection",
            )));
        }
        let now = clock.now_ns();
        while let Some(ev) = events.next_if(|e| start + e.t_ms * 1_000_000 <= now) {
            // Tones and objects belong to the avatar's surroundings.
            operator.apply(&ev.event, now)?;
        }
        operator.step(now)?;
        report.cycles += 1;
        next += cycle;
        clock.sleep_until(next);
    }
    // Let the writer flush the final targets before the socket closes.
    let flush_deadline = std::time::Instant::now() + Duration::from_millis(500);
    let sent = bus.published(Topic::JointTargets) + bus.published(Topic::AudioOperator);
    while bridge.counters().frames_out.load(Ordering::Relaxed) < sent
        && std::time::Instant::now() < flush_deadline
    {
        thread::sleep(Duration::from_millis(5));
    }
    drop(bridge);
    bus.close();
    Ok((operator, report))
}
