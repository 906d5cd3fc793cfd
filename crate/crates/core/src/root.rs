//! Monotone bisection.
//!
//! Both the similarity-dimension solver and the envelope solver reduce to
//! locating the switch point of a monotone predicate on the positive reals.

/// A bracket `[lo, hi]` around the switch point of a monotone predicate:
/// the predicate holds at `lo` and fails at `hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Shrinks `[lo, hi]` until `hi - lo <= rtol * hi`, keeping `pred(lo)` true
/// and `pred(hi)` false.
///
/// The caller guarantees the endpoints satisfy that sign pattern and that
/// `pred` is monotone (true below the switch point, false above). Stops early
/// when the bracket can no longer be split in `f64`.
pub fn bisect<P>(mut pred: P, mut lo: f64, mut hi: f64, rtol: f64) -> Bracket
where
    P: FnMut(f64) -> bool,
{
    debug_assert!(lo < hi);
    while hi - lo > rtol * hi.abs() {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Bracket { lo, hi }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let b = bisect(|x| x * x <= 2.0, 0.0, 2.0, 1e-14);
        assert!(b.lo * b.lo <= 2.0 && b.hi * b.hi > 2.0);
        assert!((b.midpoint() - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn stops_at_float_resolution() {
        let b = bisect(|x| x <= 1.0, 1.0, 1.0 + 4.0 * f64::EPSILON, 0.0);
        assert!(b.width() <= 4.0 * f64::EPSILON);
        assert_eq!(b.lo, 1.0);
    }
}
