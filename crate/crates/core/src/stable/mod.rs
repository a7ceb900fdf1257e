//! The standard symmetric α-stable process in ℝ^d, d ≤ 3: characteristic
//! function e^{−t|z|^α}.

mod inversion;
mod operators;

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{ensure, Error, Result};
use crate::phi::{norm, Dim, Point};

pub use inversion::{radial_inversion, RadialTable};
pub use operators::{potential_apply, potential_constant, semigroup_apply, semigroup_apply_fourier};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLaw", into = "RawLaw")]
pub struct StableLaw {
    alpha: f64,
    dim: Dim,
}

#[derive(Serialize, Deserialize)]
struct RawLaw {
    alpha: f64,
    dim: usize,
}

impl TryFrom<RawLaw> for StableLaw {
    type Error = Error;
    fn try_from(r: RawLaw) -> Result<Self> {
        StableLaw::new(r.alpha, r.dim)
    }
}

impl From<StableLaw> for RawLaw {
    fn from(l: StableLaw) -> RawLaw {
        RawLaw { alpha: l.alpha, dim: l.dim.get() }
    }
}

impl StableLaw {
    pub fn new(alpha: f64, dim: usize) -> Result<Self> {
        ensure(alpha > 0.0 && alpha <= 2.0, || format!("stability index {alpha} not in (0, 2]"))?;
        Ok(Self { alpha, dim: Dim::new(dim)? })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn d(&self) -> usize {
        self.dim.get()
    }

    pub fn is_transient(&self) -> bool {
        self.alpha < self.dim.as_f64()
    }

    /// Handle for fast repeated evaluation of the unit-time radial density.
    pub fn unit_density(&self) -> Result<UnitDensity> {
        let d = self.d();
        if self.alpha == 2.0 {
            Ok(UnitDensity::Gauss { norm: (4.0 * PI).powf(-(d as f64) / 2.0) })
        } else if self.alpha == 1.0 {
            let h = (d as f64 + 1.0) / 2.0;
            Ok(UnitDensity::Cauchy { norm: gamma(h) / PI.powf(h), power: h })
        } else {
            Ok(UnitDensity::Table(inversion::table_for(self.alpha, d)?))
        }
    }

    /// p_t(x), always through the t = 1 density: p_t(x) = t^{−d/α} p₁(x t^{−1/α}).
    pub fn density(&self, t: f64, x: &Point) -> Result<f64> {
        self.density_radial(t, norm(x))
    }

    pub fn density_radial(&self, t: f64, r: f64) -> Result<f64> {
        ensure(t > 0.0 && t.is_finite(), || format!("density at non-positive time {t}"))?;
        Ok(self.unit_density()?.at_time(self.alpha, self.d(), t, r))
    }

    /// p_t(x) by direct inversion at every call, bypassing closed forms and tables.
    pub fn density_by_inversion(&self, t: f64, r: f64) -> Result<f64> {
        ensure(t > 0.0 && t.is_finite(), || format!("density at non-positive time {t}"))?;
        let s = t.powf(-1.0 / self.alpha);
        let (v, _, _) = radial_inversion(self.alpha, self.d(), r * s)?;
        Ok(v * s.powi(self.d() as i32))
    }

    pub fn sampler(&self, dt: f64) -> Result<IncrementSampler> {
        ensure(dt > 0.0 && dt.is_finite(), || format!("increment over non-positive time {dt}"))?;
        Ok(IncrementSampler { alpha: self.alpha, dim: self.d(), scale: dt.powf(1.0 / self.alpha) })
    }

    pub fn sample_increment<R: Rng + ?Sized>(&self, dt: f64, rng: &mut R) -> Result<Point> {
        Ok(self.sampler(dt)?.sample(rng))
    }
}

#[derive(Debug, Clone)]
pub enum UnitDensity {
    Gauss { norm: f64 },
    Cauchy { norm: f64, power: f64 },
    Table(Arc<RadialTable>),
}

impl UnitDensity {
    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            UnitDensity::Gauss { norm } => norm * (-0.25 * r * r).exp(),
            UnitDensity::Cauchy { norm, power } => norm * (1.0 + r * r).powf(-power),
            UnitDensity::Table(t) => t.eval(r),
        }
    }

    #[inline]
    pub fn at_time(&self, alpha: f64, d: usize, t: f64, r: f64) -> f64 {
        if t == 1.0 {
            return self.eval(r);
        }
        let s = t.powf(-1.0 / alpha);
        self.eval(r * s) * s.powi(d as i32)
    }
}

/// Draws increments over a fixed time step.
#[derive(Debug, Clone, Copy)]
pub struct IncrementSampler {
    alpha: f64,
    dim: usize,
    scale: f64,
}

impl IncrementSampler {
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self.dim {
            1 => [self.scale * symmetric_stable(self.alpha, rng), 0.0, 0.0],
            d => {
                let radius = if self.alpha == 2.0 {
                    std::f64::consts::SQRT_2
                } else {
                    (2.0 * positive_stable(self.alpha / 2.0, rng)).sqrt()
                };
                let mut x = [0.0; 3];
                for xi in x.iter_mut().take(d) {
                    let n: f64 = StandardNormal.sample(rng);
                    *xi = self.scale * radius * n;
                }
                x
            }
        }
    }

    #[inline]
    pub fn sample_scalar<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.scale * symmetric_stable(self.alpha, rng)
    }
}

/// Chambers–Mallows–Stuck draw with characteristic function e^{−|z|^α}.
#[inline]
pub fn symmetric_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha == 2.0 {
        let n: f64 = StandardNormal.sample(rng);
        return std::f64::consts::SQRT_2 * n;
    }
    let v = PI * (rng.random::<f64>() - 0.5);
    if alpha == 1.0 {
        return v.tan();
    }
    let w: f64 = Exp1.sample(rng);
    let av = alpha * v;
    // sin(αV)/cos(V)^{1/α} · (cos((1−α)V)/W)^{(1−α)/α}
    let lc = v.cos().ln();
    let lr = ((v - av).cos() / w).ln();
    av.sin() * ((-lc + (1.0 - alpha) * lr) / alpha).exp()
}

/// Kanter's draw of a positive β-stable variable with E e^{−λS} = e^{−λ^β}.
#[inline]
pub fn positive_stable<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> f64 {
    if beta == 1.0 {
        return 1.0;
    }
    let u = PI * rng.random::<f64>();
    let u = if u == 0.0 { FRAC_PI_2 } else { u };
    let w: f64 = Exp1.sample(rng);
    let a = (beta * u).sin() / u.sin().powf(1.0 / beta);
    let b = (((1.0 - beta) * u).sin() / w).powf((1.0 - beta) / beta);
    a * b
}
