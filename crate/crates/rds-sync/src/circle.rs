//! Points on the circle S^1 = R/Z and the arc-length metric.
//!
//! Every point is stored by its canonical representative in `[0, 1)`.
//! Canonicalisation subtracts the floor; the single awkward case is a real
//! just below an integer whose fractional part rounds up to exactly `1.0`,
//! which is folded back to `0.0` (the same point of R/Z, displaced by one
//! ulp of the input).

use std::fmt;

/// A point of the circle R/Z, held as its unique representative in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct CirclePoint {
    pos: f64,
}

impl CirclePoint {
    /// Wraps an arbitrary finite real to its class representative in `[0, 1)`.
    ///
    /// Panics if `x` is NaN or infinite; there is no sensible circle point
    /// for those inputs and letting them through would silently poison every
    /// downstream distance and mean.
    pub fn new(x: f64) -> CirclePoint {
        assert!(x.is_finite(), "circle point from non-finite value {x}");
        let mut pos = x - x.floor();
        // `x - floor(x)` can round up to 1.0 when x is a hair below an integer.
        if pos >= 1.0 {
            pos = 0.0;
        }
        debug_assert!((0.0..1.0).contains(&pos));
        CirclePoint { pos }
    }

    /// The canonical representative in `[0, 1)`.
    #[inline]
    pub fn pos(self) -> f64 {
        self.pos
    }

    /// Rotates the point by `c` (any finite real; reduction mod 1 applied).
    #[inline]
    pub fn rotate(self, c: f64) -> CirclePoint {
        CirclePoint::new(self.pos + c)
    }
}

impl fmt::Debug for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.pos)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.pos, f)
    }
}

/// Arc-length distance on R/Z: `min(|x - y|, 1 - |x - y|)`, in `[0, 1/2]`.
#[inline]
pub fn circle_dist(x: CirclePoint, y: CirclePoint) -> f64 {
    let d = (x.pos - y.pos).abs();
    d.min(1.0 - d)
}
