use core::cmp::Ordering;
use core::fmt;

/// Expected number of rounds until capture. Either a finite value `>= 1`
/// or an explicit infinity (the cop can never capture from here).
#[derive(Clone, Copy, PartialEq, Default)]
pub struct ChaseTime(f64);

/// Strict improvements smaller than this (relative to the value being
/// improved, with an absolute floor at magnitude 1) are ignored.
pub const IMPROVEMENT_TOLERANCE: f64 = 1e-12;

impl ChaseTime {
    pub const INFINITE: ChaseTime = ChaseTime(f64::INFINITY);
    pub const ONE: ChaseTime = ChaseTime(1.0);

    /// Wraps a finite or `+inf` value. NaN and negative inputs are rejected.
    pub fn new(value: f64) -> Option<ChaseTime> {
        if value.is_nan() || value < 0.0 {
            None
        } else {
            Some(ChaseTime(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// Expected time of a cop who stays on a vertex with capture probability `p` forever.
    pub fn stay(p: f64) -> ChaseTime {
        if p > 0.0 {
            ChaseTime(1.0 / p)
        } else {
            ChaseTime::INFINITE
        }
    }

    /// One round at a vertex with capture probability `p`, continuing with
    /// expected time `next` on failure: `1 + (1 - p) * next`.
    ///
    /// `(1 - p) * inf` is `0` when `p == 1` and `inf` otherwise.
    pub fn step(p: f64, next: ChaseTime) -> ChaseTime {
        if p >= 1.0 {
            ChaseTime::ONE
        } else if next.is_infinite() {
            ChaseTime::INFINITE
        } else {
            ChaseTime(1.0 + (1.0 - p) * next.0)
        }
    }

    /// True when `candidate` is smaller than `self` by more than the improvement tolerance.
    pub fn improved_by(self, candidate: ChaseTime) -> bool {
        if candidate.is_infinite() {
            return false;
        }
        if self.is_infinite() {
            return true;
        }
        self.0 - candidate.0 > IMPROVEMENT_TOLERANCE * self.0.max(1.0)
    }

    /// Absolute difference; infinite iff exactly one side is infinite.
    pub fn distance(self, other: ChaseTime) -> f64 {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => 0.0,
            (false, false) => libm::fabs(self.0 - other.0),
            _ => f64::INFINITY,
        }
    }

    /// Total order used for argmin: infinity is the largest value.
    pub fn total_cmp(&self, other: &ChaseTime) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Debug for ChaseTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ChaseTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}
