//! Points in ℝ^d (d ≤ 3) and Gaussian-bump test functions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::special::bessel_i0e;

/// A point of ℝ^d stored in three slots; unused coordinates are zero.
pub type Point = [f64; 3];

pub const ORIGIN: Point = [0.0; 3];

#[inline]
pub fn norm(x: &Point) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

#[inline]
pub fn dist(x: &Point, y: &Point) -> f64 {
    let (a, b, c) = (x[0] - y[0], x[1] - y[1], x[2] - y[2]);
    (a * a + b * b + c * c).sqrt()
}

/// Spatial dimension, restricted to 1..=3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Dim(usize);

impl Dim {
    pub fn new(d: usize) -> Result<Self> {
        ensure((1..=3).contains(&d), || format!("dimension {d} not in 1..=3"))?;
        Ok(Self(d))
    }
    pub fn get(self) -> usize {
        self.0
    }
    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }
}

impl TryFrom<usize> for Dim {
    type Error = crate::Error;
    fn try_from(d: usize) -> Result<Self> {
        Self::new(d)
    }
}

impl From<Dim> for usize {
    fn from(d: Dim) -> usize {
        d.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: Point,
    pub width: f64,
    pub amplitude: f64,
}

impl Bump {
    #[inline]
    pub fn eval(&self, x: &Point) -> f64 {
        let r = dist(x, &self.center);
        self.amplitude * (-0.5 * r * r / (self.width * self.width)).exp()
    }

    pub fn integral(&self, d: Dim) -> f64 {
        self.amplitude * (2.0 * PI * self.width * self.width).powf(d.as_f64() / 2.0)
    }

    /// Average of the bump over the sphere of radius ρ about a point at
    /// distance `a` from its center.
    pub fn spherical_mean(&self, d: Dim, a: f64, rho: f64) -> f64 {
        self.spherical_mean_offset(d, a, rho - a)
    }

    /// Same as [`Self::spherical_mean`] with ρ = a + s; passing the offset
    /// keeps full precision when a ≫ σ.
    pub fn spherical_mean_offset(&self, d: Dim, a: f64, s: f64) -> f64 {
        let rho = a + s;
        let s2 = self.width * self.width;
        let near = (-s * s / (2.0 * s2)).exp();
        let m = match d.get() {
            1 => 0.5 * (near + (-(a + rho) * (a + rho) / (2.0 * s2)).exp()),
            2 => near * bessel_i0e(a * rho / s2),
            _ => {
                let z = a * rho / s2;
                if z < 1e-8 {
                    (-(a * a + rho * rho) / (2.0 * s2)).exp() * (1.0 + z * z / 6.0)
                } else {
                    // e^{-(a²+ρ²)/2σ²} sinh(z)/z = (near − far)/(2z)
                    near * (-(-2.0 * z).exp_m1()) / (2.0 * z)
                }
            }
        };
        self.amplitude * m
    }
}

/// A finite positive combination of Gaussian bumps
/// φ(x) = Σ A_i exp(−|x − c_i|²/2σ_i²); the empty sum is the zero function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    bumps: Vec<Bump>,
}

impl TestFunction {
    pub fn gaussian(center: Point, width: f64, amplitude: f64) -> Result<Self> {
        ensure(width > 0.0 && width.is_finite(), || format!("bump width {width}"))?;
        ensure(amplitude >= 0.0 && amplitude.is_finite(), || format!("bump amplitude {amplitude}"))?;
        let bumps = if amplitude == 0.0 { vec![] } else { vec![Bump { center, width, amplitude }] };
        Ok(Self { bumps })
    }

    pub fn centered(width: f64) -> Result<Self> {
        Self::gaussian(ORIGIN, width, 1.0)
    }

    pub fn zero() -> Self {
        Self { bumps: vec![] }
    }

    pub fn plus(&self, other: &TestFunction) -> TestFunction {
        let mut bumps = self.bumps.clone();
        bumps.extend_from_slice(&other.bumps);
        TestFunction { bumps }
    }

    pub fn scaled(&self, c: f64) -> TestFunction {
        assert!(c >= 0.0);
        if c == 0.0 {
            return TestFunction::zero();
        }
        let bumps = self.bumps.iter().map(|b| Bump { amplitude: b.amplitude * c, ..*b }).collect();
        TestFunction { bumps }
    }

    pub fn bumps(&self) -> &[Bump] {
        &self.bumps
    }

    pub fn is_zero(&self) -> bool {
        self.bumps.is_empty()
    }

    #[inline]
    pub fn eval(&self, x: &Point) -> f64 {
        self.bumps.iter().map(|b| b.eval(x)).sum()
    }

    pub fn integral(&self, d: Dim) -> f64 {
        self.bumps.iter().map(|b| b.integral(d)).sum()
    }

    /// Radius about the origin outside of which φ < 1e-30·max φ.
    pub fn support_radius(&self) -> f64 {
        self.bumps.iter().map(|b| norm(&b.center) + 12.0 * b.width).fold(0.0, f64::max)
    }

    pub fn min_width(&self) -> f64 {
        self.bumps.iter().map(|b| b.width).fold(f64::INFINITY, f64::min)
    }

    pub fn is_radial(&self) -> bool {
        self.bumps.iter().all(|b| b.center == ORIGIN)
    }

    pub fn spherical_mean(&self, d: Dim, x: &Point, rho: f64) -> f64 {
        self.bumps.iter().map(|b| b.spherical_mean(d, dist(x, &b.center), rho)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, Tol};

    #[test]
    fn integral_closed_form() {
        let phi = TestFunction::gaussian([1.0, 0.0, 0.0], 0.7, 2.0).unwrap();
        let d1 = Dim::new(1).unwrap();
        let q = integrate(|x| phi.eval(&[x, 0.0, 0.0]), -20.0, 20.0, Tol::default()).unwrap();
        assert!((q.value - phi.integral(d1)).abs() < 1e-10);
    }

    #[test]
    fn spherical_means_match_direct_averages() {
        let b = Bump { center: ORIGIN, width: 0.8, amplitude: 1.3 };
        let x = [0.9, 0.0, 0.0];
        let rho = 1.1;
        // d = 2: average over the circle
        let d2 = Dim::new(2).unwrap();
        let circ = integrate(|th| b.eval(&[x[0] + rho * th.cos(), rho * th.sin(), 0.0]), 0.0, 2.0 * PI, Tol::default())
            .unwrap()
            .value
            / (2.0 * PI);
        assert!((circ - b.spherical_mean(d2, 0.9, rho)).abs() < 1e-12);
        // d = 3: average over the sphere, by the polar angle
        let d3 = Dim::new(3).unwrap();
        let sph = integrate(
            |th| b.eval(&[x[0] + rho * th.cos(), rho * th.sin(), 0.0]) * th.sin() / 2.0,
            0.0,
            PI,
            Tol::default(),
        )
        .unwrap()
        .value;
        assert!((sph - b.spherical_mean(d3, 0.9, rho)).abs() < 1e-12);
    }

    #[test]
    fn zero_function() {
        let z = TestFunction::gaussian(ORIGIN, 1.0, 0.0).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.eval(&ORIGIN), 0.0);
        assert_eq!(z.integral(Dim::new(3).unwrap()), 0.0);
    }
}
