use alloc::collections::VecDeque;
use alloc::vec::Vec;

/// Holds timestamped items until `capture + delay`.
///
/// Items are kept in capture order; an item pushed with an earlier capture
/// time than ones already queued is inserted after all items with the same
/// or earlier time, so equal timestamps keep arrival order.
#[derive(Debug, Clone)]
pub struct DelayBuffer<T> {
    delay_ns: u64,
    queue: VecDeque<(u64, T)>,
}

impl<T> DelayBuffer<T> {
    pub fn new(delay_ns: u64) -> Self {
        DelayBuffer {
            delay_ns,
            queue: VecDeque::new(),
        }
    }

    pub fn delay_ns(&self) -> u64 {
        self.delay_ns
    }

    /// Changes the delay for everything still queued.
    pub fn set_delay_ns(&mut self, delay_ns: u64) {
        self.delay_ns = delay_ns;
    }

    pub fn push(&mut self, capture_ns: u64, item: T) {
        let at = self.queue.partition_point(|(t, _)| *t <= capture_ns);
        self.queue.insert(at, (capture_ns, item));
    }

    /// Release time of the next item.
    pub fn next_release_ns(&self) -> Option<u64> {
        self.queue.front().map(|(t, _)| t.saturating_add(self.delay_ns))
    }

    /// Removes and returns every item with `capture + delay <= now`, in
    /// capture order.
    pub fn release(&mut self, now_ns: u64) -> Vec<(u64, T)> {
        let mut out = Vec::new();
        while let Some((t, _)) = self.queue.front() {
            if t.saturating_add(self.delay_ns) > now_ns {
                break;
            }
            out.extend(self.queue.pop_front());
        }
        out
    }

    pub fn len(&self) -> usize {
        self.queue.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queue.is_empty()
    }
}

/// Common playback delay for streams with the given end-to-end latencies:
/// every stream waits as long as the slowest one.
pub fn aligned_delay(latencies_ns: &[u64]) -> u64 {
    latencies_ns.iter().copied().max().unwrap_or(0)
}
