//! 3D points and vectors.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// A point (or vector) in 3-space. One type serves both roles; differences
/// of points are vectors, and all the usual vector operations are available.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ZERO: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(&self, other: Point3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: Point3) -> Point3 {
        Point3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(*self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Unit vector in the same direction, or `None` if the length is below `eps`.
    pub fn normalized(&self, eps: f64) -> Option<Point3> {
        let n = self.norm();
        if n <= eps {
            None
        } else {
            Some(*self / n)
        }
    }

    pub fn distance(&self, other: Point3) -> f64 {
        (*self - other).norm()
    }

    pub fn lerp(&self, other: Point3, t: f64) -> Point3 {
        *self * (1.0 - t) + other * t
    }

    /// Angle between two vectors in [0, pi], via atan2 of cross and dot
    /// magnitudes. Accurate near 0 and pi where acos loses digits.
    pub fn angle_between(&self, other: Point3) -> f64 {
        let cross = self.cross(other).norm();
        let dot = self.dot(other);
        cross.atan2(dot)
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, rhs: Point3) -> Point3 {
        Point3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, rhs: Point3) -> Point3 {
        Point3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Point3 {
    type Output = Point3;
    fn div(self, s: f64) -> Point3 {
        Point3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}
