use crate::error::{Error, Result};

/// An open bounded interval `(lo, hi)` on the line.
///
/// Windows serve two roles: the norming set `U` in the sliding norm, and the
/// truncation region on which an infinite measure is faithfully realized. The
/// open-interval convention is used throughout: points exactly at `lo` or `hi`
/// are outside.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        Ok(Window { lo, hi })
    }

    /// Haar (Lebesgue) length of the interval.
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    /// Open-interval membership.
    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    /// Whether `other` sits inside `self` (closure of `other` in the closure of `self`).
    pub fn contains_window(&self, other: &Window) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Whether the closed interval `[a, b]` sits inside the closure of the window.
    pub fn contains_closed(&self, a: f64, b: f64) -> bool {
        self.lo <= a && b <= self.hi
    }

    pub fn translate(&self, t: f64) -> Window {
        Window {
            lo: self.lo + t,
            hi: self.hi + t,
        }
    }

    pub fn reflect(&self) -> Window {
        Window {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn intersect(&self, other: &Window) -> Option<Window> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo < hi {
            Some(Window { lo, hi })
        } else {
            None
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Intersection of two optional faithful regions; `None` means "everywhere".
pub fn intersect_truncations(a: Option<Window>, b: Option<Window>) -> Option<Option<Window>> {
    match (a, b) {
        (None, None) => Some(None),
        (Some(w), None) | (None, Some(w)) => Some(Some(w)),
        (Some(w), Some(v)) => w.intersect(&v).map(Some),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty() {
        assert!(Window::new(1.0, 1.0).is_err());
        assert!(Window::new(2.0, 1.0).is_err());
        assert!(Window::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn open_membership() {
        let w = Window::new(0.0, 1.0).unwrap();
        assert!(!w.contains(0.0));
        assert!(!w.contains(1.0));
        assert!(w.contains(0.5));
        assert_eq!(w.len(), 1.0);
    }

    #[test]
    fn reflect_translate() {
        let w = Window::new(-1.0, 2.0).unwrap();
        assert_eq!(w.reflect(), Window { lo: -2.0, hi: 1.0 });
        assert_eq!(w.translate(3.0), Window { lo: 2.0, hi: 5.0 });
    }
}
