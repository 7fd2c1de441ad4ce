//! In-process publish/subscribe bus.
//!
//! Every subscription owns a bounded queue. When a queue is full, audio and
//! camera topics drop the oldest queued message and count it, while joint
//! topics block the publisher until the subscriber catches up (or
//! [`Bus::try_publish`] reports [`BusError::Full`]). Delivery happens inside
//! `publish`, so a single-threaded caller gets fully deterministic ordering.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Condvar, Mutex, MutexGuard, Weak};
use std::time::Duration;

use yui_core::protocol::{Message, SchemaError, Topic};

pub const DEFAULT_QUEUE_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BusError {
    #[error("rejected by schema: {0}")]
    Schema(#[from] SchemaError),
    #[error("subscriber queue full on lossless topic {0}")]
    Full(Topic),
    #[error("bus closed")]
    Closed,
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

#[derive(Debug)]
struct Queue {
    items: Mutex<VecDeque<(Topic, Message)>>,
    changed: Condvar,
    depth: usize,
    dropped: AtomicU64,
    alive: AtomicBool,
}

#[derive(Debug)]
struct Slot {
    topics: Vec<Topic>,
    queue: Weak<Queue>,
}

#[derive(Debug, Default)]
struct Shared {
    slots: Mutex<Vec<Slot>>,
    closed: AtomicBool,
    published: [AtomicU64; 6],
}

/// Cheap to clone; clones share the same subscribers.
#[derive(Debug, Clone)]
pub struct Bus {
    shared: Arc<Shared>,
    depth: usize,
}

impl Default for Bus {
    fn default() -> Self {
        Bus::new(DEFAULT_QUEUE_DEPTH)
    }
}

impl Bus {
    pub fn new(queue_depth: usize) -> Self {
        Bus {
            shared: Arc::default(),
            depth: queue_depth.max(1),
        }
    }

    pub fn subscribe(&self, topics: &[Topic]) -> Subscription {
        let queue = Arc::new(Queue {
            items: Mutex::new(VecDeque::with_capacity(self.depth.min(64))),
            changed: Condvar::new(),
            depth: self.depth,
            dropped: AtomicU64::new(0),
            alive: AtomicBool::new(true),
        });
        let mut slots = lock(&self.shared.slots);
        slots.retain(|s| s.queue.strong_count() > 0);
        slots.push(Slot {
            topics: topics.to_vec(),
            queue: Arc::downgrade(&queue),
        });
        Subscription {
            queue,
            shared: Arc::clone(&self.shared),
        }
    }

    fn targets(&self, topic: Topic) -> Vec<Arc<Queue>> {
        lock(&self.shared.slots)
            .iter()
            .filter(|s| s.topics.contains(&topic))
            .filter_map(|s| s.queue.upgrade())
            .collect()
    }

    fn deliver(&self, topic: Topic, msg: Message, block: bool) -> Result<(), BusError> {
        if self.shared.closed.load(Ordering::SeqCst) {
            return Err(BusError::Closed);
        }
        msg.validate_for(topic)?;
        let targets = self.targets(topic);
        if !block && topic.is_lossless() {
            // All-or-nothing so a refused message is not half delivered.
            for q in &targets {
                if lock(&q.items).len() >= q.depth {
                    return Err(BusError::Full(topic));
                }
            }
        }
        for q in targets {
            let mut items = lock(&q.items);
            if items.len() >= q.depth {
                if topic.is_lossless() {
                    while items.len() >= q.depth
                        && q.alive.load(Ordering::SeqCst)
                        && !self.shared.closed.load(Ordering::SeqCst)
                    {
                        items = q
                            .changed
                            .wait_timeout(items, Duration::from_millis(50))
                            .unwrap_or_else(|e| e.into_inner())
                            .0;
                    }
                    if !q.alive.load(Ordering::SeqCst) {
                        continue;
                    }
                    if self.shared.closed.load(Ordering::SeqCst) {
                        return Err(BusError::Closed);
                    }
                } else {
                    items.pop_front();
                    q.dropped.fetch_add(1, Ordering::Relaxed);
                }
            }
            items.push_back((topic, msg.clone()));
            drop(items);
            q.changed.notify_all();
        }
        self.shared.published[topic.id() as usize - 1].fetch_add(1, Ordering::Relaxed);
        Ok(())
    }

    /// Validates `msg` against `topic` and hands it to every subscriber.
    /// Blocks on full joint-topic queues.
    pub fn publish(&self, topic: Topic, msg: Message) -> Result<(), BusError> {
        self.deliver(topic, msg, true)
    }

    /// Like [`Bus::publish`] but never blocks.
    pub fn try_publish(&self, topic: Topic, msg: Message) -> Result<(), BusError> {
        self.deliver(topic, msg, false)
    }

    /// Messages accepted on `topic` so far.
    pub fn published(&self, topic: Topic) -> u64 {
        self.shared.published[topic.id() as usize - 1].load(Ordering::Relaxed)
    }

    /// Rejects further publishes and wakes every blocked caller.
    pub fn close(&self) {
        self.shared.closed.store(true, Ordering::SeqCst);
        for slot in lock(&self.shared.slots).iter() {
            if let Some(q) = slot.queue.upgrade() {
                q.changed.notify_all();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.shared.closed.load(Ordering::SeqCst)
    }
}

/// Single-consumer stream of the messages on the subscribed topics, in
/// publish order.
#[derive(Debug)]
pub struct Subscription {
    queue: Arc<Queue>,
    shared: Arc<Shared>,
}

impl Subscription {
    pub fn try_recv(&self) -> Option<(Topic, Message)> {
        let item = lock(&self.queue.items).pop_front();
        if item.is_some() {
            self.queue.changed.notify_all();
        }
        item
    }

    /// Waits up to `timeout`. Returns `None` on timeout or once the bus is
    /// closed and the queue is empty.
    pub fn recv_timeout(&self, timeout: Duration) -> Option<(Topic, Message)> {
        let mut items = lock(&self.queue.items);
        let deadline = std::time::Instant::now() + timeout;
        loop {
            if let Some(item) = items.pop_front() {
                drop(items);
                self.queue.changed.notify_all();
                return Some(item);
            }
            let now = std::time::Instant::now();
            if now >= deadline || self.shared.closed.load(Ordering::SeqCst) {
                return None;
            }
            items = self
                .queue
                .changed
                .wait_timeout(items, deadline - now)
                .unwrap_or_else(|e| e.into_inner())
                .0;
        }
    }

    /// Everything queued right now.
    pub fn drain(&self) -> Vec<(Topic, Message)> {
        let out: Vec<_> = lock(&self.queue.items).drain(..).collect();
        self.queue.changed.notify_all();
        out
    }

    pub fn len(&self) -> usize {
        lock(&self.queue.items).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Messages discarded by drop-oldest on this subscription.
    pub fn dropped(&self) -> u64 {
        self.queue.dropped.load(Ordering::Relaxed)
    }
}

impl Drop for Subscription {
    fn drop(&mut self) {
        self.queue.alive.store(false, Ordering::SeqCst);
        self.queue.changed.notify_all();
    }
}
