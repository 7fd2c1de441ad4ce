//! Simulated unreliable network link for testing stream recovery.
//!
//! Frames on lossy topics are dropped at random and, when the link backs
//! up, oldest first. Joint topics model a reliable transport: they are
//! never dropped and do not count towards the capacity.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use yui_core::protocol::Topic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LinkStats {
    pub sent: u64,
    pub delivered: u64,
    pub dropped_random: u64,
    pub dropped_overflow: u64,
}

impl LinkStats {
    pub fn dropped(&self) -> u64 {
        self.dropped_random + self.dropped_overflow
    }
}

#[derive(Debug)]
pub struct LossyLink {
    rng: ChaCha8Rng,
    drop_probability: f64,
    capacity: usize,
    queue: VecDeque<(Topic, Vec<u8>)>,
    lossy_queued: usize,
    stats: LinkStats,
}

impl LossyLink {
    /// `capacity` bounds the lossy frames in flight.
    pub fn new(seed: u64, drop_probability: f64, capacity: usize) -> Self {
        LossyLink {
            rng: ChaCha8Rng::seed_from_u64(seed),
            drop_probability: drop_probability.clamp(0.0, 1.0),
            capacity: capacity.max(1),
            queue: VecDeque::new(),
            lossy_queued: 0,
            stats: LinkStats::default(),
        }
    }

    pub fn stats(&self) -> LinkStats {
        self.stats
    }

    pub fn send(&mut self, topic: Topic, frame: Vec<u8>) {
        self.stats.sent += 1;
        if topic.is_lossless() {
            self.queue.push_back((topic, frame));
            return;
        }
        if self.rng.random_bool(self.drop_probability) {
            self.stats.dropped_random += 1;
            return;
        }
        if self.lossy_queued >= self.capacity {
            let oldest = self
                .queue
                .iter()
                .position(|(t, _)| !t.is_lossless())
                .expect("a lossy frame is queued");
            self.queue.remove(oldest);
            self.lossy_queued -= 1;
            self.stats.dropped_overflow += 1;
        }
        self.queue.push_back((topic, frame));
        self.lossy_queued += 1;
    }

    pub fn recv(&mut self) -> Option<(Topic, Vec<u8>)> {
        let item = self.queue.pop_front()?;
        if !item.0.is_lossless() {
            self.lossy_queued -= 1;
        }
        self.stats.delivered += 1;
        Some(item)
    }

    pub fn in_flight(&self) -> usize {
        self.queue.len()
    }
}
