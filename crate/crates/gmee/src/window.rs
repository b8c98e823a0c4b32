//! Sliding window of recent (input, desired) samples.

use std::collections::VecDeque;

/// The `L` most recent training pairs, ordered oldest → newest.
///
/// Pushing beyond capacity evicts the oldest entry; its input buffer is
/// recycled for the incoming sample so steady-state operation does not
/// allocate.
#[derive(Debug, Clone)]
pub struct SampleWindow {
    entries: VecDeque<(Vec<f64>, f64)>,
    capacity: usize,
}

impl SampleWindow {
    /// Window with room for `capacity ≥ 1` samples.
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "window capacity must be at least 1");
        SampleWindow {
            entries: VecDeque::with_capacity(capacity),
            capacity,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.entries.len() == self.capacity
    }

    pub fn push(&mut self, input: &[f64], desired: f64) {
        if self.entries.len() == self.capacity {
            let (mut buf, _) = self.entries.pop_front().expect("capacity ≥ 1");
            buf.clear();
            buf.extend_from_slice(input);
            self.entries.push_back((buf, desired));
        } else {
            self.entries.push_back((input.to_vec(), desired));
        }
    }

    /// Oldest-to-newest iteration over (input, desired) pairs.
    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.entries.iter().map(|(u, d)| (u.as_slice(), *d))
    }

    pub fn get(&self, index: usize) -> (&[f64], f64) {
        let (u, d) = &self.entries[index];
        (u.as_slice(), *d)
    }
}
