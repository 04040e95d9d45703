//! Indexed binary min-heap over vertex ids with decrease-key.
//!
//! Keys are chase times; equal keys are ordered by vertex id so that
//! extraction order is deterministic. Every operation is `O(log n)`.

use crate::graph::VertexId;
use crate::time::ChaseTime;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

const ABSENT: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct IndexedMinHeap {
    heap: Vec<VertexId>,
    pos: Vec<usize>,
    keys: Vec<ChaseTime>,
}

impl IndexedMinHeap {
    /// Heap over `0..keys.len()`, all present.
    pub fn from_keys(keys: Vec<ChaseTime>) -> IndexedMinHeap {
        let n = keys.len();
        let mut h = IndexedMinHeap {
            heap: (0..n).collect(),
            pos: (0..n).collect(),
            keys,
        };
        for i in (0..n / 2).rev() {
            h.sift_down(i);
        }
        h
    }

    /// Empty heap able to hold ids `0..capacity`.
    pub fn with_capacity(capacity: usize) -> IndexedMinHeap {
        IndexedMinHeap {
            heap: Vec::with_capacity(capacity),
            pos: vec![ABSENT; capacity],
            keys: vec![ChaseTime::INFINITE; capacity],
        }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.pos[v] != ABSENT
    }

    pub fn key(&self, v: VertexId) -> ChaseTime {
        self.keys[v]
    }

    pub fn push(&mut self, v: VertexId, key: ChaseTime) {
        assert!(!self.contains(v), "vertex {v} already queued");
        self.keys[v] = key;
        self.pos[v] = self.heap.len();
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1);
    }

    pub fn peek(&self) -> Option<(VertexId, ChaseTime)> {
        self.heap.first().map(|&v| (v, self.keys[v]))
    }

    pub fn pop(&mut self) -> Option<(VertexId, ChaseTime)> {
        let top = *self.heap.first()?;
        let last = self.heap.len() - 1;
        self.swap(0, last);
        self.heap.pop();
        self.pos[top] = ABSENT;
        if !self.heap.is_empty() {
            self.sift_down(0);
        }
        Some((top, self.keys[top]))
    }

    /// Lowers the key of a queued vertex. Panics if `v` is absent or the key would grow.
    pub fn decrease_key(&mut self, v: VertexId, key: ChaseTime) {
        let i = self.pos[v];
        assert!(i != ABSENT, "vertex {v} is not queued");
        assert!(
            key.total_cmp(&self.keys[v]) != Ordering::Greater,
            "decrease_key would increase the key of {v}"
        );
        self.keys[v] = key;
        self.sift_up(i);
    }

    fn less(&self, a: VertexId, b: VertexId) -> bool {
        self.keys[a]
            .total_cmp(&self.keys[b])
            .then(a.cmp(&b))
            .is_lt()
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.heap.swap(i, j);
        self.pos[self.heap[i]] = i;
        self.pos[self.heap[j]] = j;
    }

    fn sift_up(&mut self, mut i: usize) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if !self.less(self.heap[i], self.heap[parent]) {
                break;
            }
            self.swap(i, parent);
            i = parent;
        }
    }

    fn sift_down(&mut self, mut i: usize) {
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            let r = l + 1;
            let mut best = i;
            if l < n && self.less(self.heap[l], self.heap[best]) {
                best = l;
            }
            if r < n && self.less(self.heap[r], self.heap[best]) {
                best = r;
            }
            if best == i {
                break;
            }
            self.swap(i, best);
            i = best;
        }
    }
}
