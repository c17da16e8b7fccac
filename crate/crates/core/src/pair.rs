//! Validated inputs.

use crate::error::DomainError;

/// Two strictly positive, finite, normal binary64 numbers.
///
/// Components are stored in canonical order, `x >= y`, so every mean is
/// bit-identical under swapping the arguments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivePair {
    x: f64,
    y: f64,
}

fn check(v: f64) -> Result<f64, DomainError> {
    if !v.is_finite() {
        Err(DomainError::NonFinite)
    } else if v <= 0.0 {
        Err(DomainError::NonPositive)
    } else if !v.is_normal() {
        Err(DomainError::Subnormal)
    } else {
        Ok(v)
    }
}

impl PositivePair {
    /// Validates and canonicalizes `(x, y)`.
    pub fn new(x: f64, y: f64) -> Result<Self, DomainError> {
        let (x, y) = (check(x)?, check(y)?);
        Ok(if x >= y { Self { x, y } } else { Self { x: y, y: x } })
    }

    /// The pair `(t, 1)`.
    pub fn from_ratio(t: f64) -> Result<Self, DomainError> {
        Self::new(t, 1.0)
    }

    /// The larger component.
    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    /// The smaller component.
    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    /// `true` when both components are equal.
    #[inline]
    pub fn is_diagonal(&self) -> bool {
        self.x == self.y
    }

    /// Multiplies both components by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Result<Self, DomainError> {
        Self::new(self.x * lambda, self.y * lambda)
    }

    /// Splits the pair into the canonical ratio and its scale.
    pub fn normalize(&self) -> Result<RatioForm, DomainError> {
        let t = self.x / self.y;
        if !t.is_finite() {
            return Err(DomainError::RatioOverflow);
        }
        Ok(RatioForm { t, scale: self.y })
    }
}

/// A pair written as `scale * (t, 1)` with `t >= 1`.
///
/// All seven means are homogeneous of degree one, so `M(x, y) = scale *
/// M(t, 1)` and the sign of every margin depends on `t` alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioForm {
    /// `max(x, y) / min(x, y)`.
    pub t: f64,
    /// `min(x, y)`.
    pub scale: f64,
}

impl RatioForm {
    /// Unit-scale form of `t`.
    pub fn unit(t: f64) -> Result<Self, DomainError> {
        let t = check(t)?;
        if t < 1.0 {
            return Err(DomainError::NonPositive);
        }
        Ok(Self { t, scale: 1.0 })
    }

    /// `(t * scale, scale)`; equals the original pair up to the rounding of
    /// `t`.
    pub fn to_pair(&self) -> Result<PositivePair, DomainError> {
        PositivePair::new(self.t * self.scale, self.scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_components() {
        assert_eq!(PositivePair::new(0.0, 1.0), Err(DomainError::NonPositive));
        assert_eq!(PositivePair::new(1.0, -2.0), Err(DomainError::NonPositive));
        assert_eq!(PositivePair::new(f64::NAN, 1.0), Err(DomainError::NonFinite));
        assert_eq!(PositivePair::new(1.0, f64::INFINITY), Err(DomainError::NonFinite));
        assert_eq!(PositivePair::new(1.0, 1e-310), Err(DomainError::Subnormal));
        assert_eq!(PositivePair::new(-0.0, 1.0), Err(DomainError::NonPositive));
    }

    #[test]
    fn canonical_order() {
        let a = PositivePair::new(1.0, 4.0).unwrap();
        let b = PositivePair::new(4.0, 1.0).unwrap();
        assert_eq!(a, b);
        assert_eq!((a.x(), a.y()), (4.0, 1.0));
    }

    #[test]
    fn normalize_examples() {
        let r = PositivePair::new(3.0, 3.0).unwrap().normalize().unwrap();
        assert_eq!((r.t, r.scale), (1.0, 3.0));
        let r = PositivePair::new(1.0, 4.0).unwrap().normalize().unwrap();
        assert_eq!((r.t, r.scale), (4.0, 1.0));
        let r = PositivePair::new(4.0, 1.0).unwrap().normalize().unwrap();
        assert_eq!((r.t, r.scale), (4.0, 1.0));
    }

    #[test]
    fn ratio_overflow() {
        let p = PositivePair::new(1e300, 1e-300).unwrap();
        assert_eq!(p.normalize(), Err(DomainError::RatioOverflow));
    }

    #[test]
    fn reconstruction() {
        let p = PositivePair::new(0.3, 7.1).unwrap();
        let q = p.normalize().unwrap().to_pair().unwrap();
        assert!((q.x() - p.x()).abs() <= p.x() * f64::EPSILON);
        assert_eq!(q.y(), p.y());
    }
}
