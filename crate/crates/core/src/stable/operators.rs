//! Semigroup 𝒯_t and α-potential G acting on Gaussian-bump test functions,
//! both written in polar coordinates about the evaluation point so that only
//! the spherical means of the bumps enter.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use super::StableLaw;
use crate::error::{Error, Result};
use crate::phi::{dist, Point, TestFunction};
use crate::quadrature::{integrate, integrate_breaks, Tol};
use crate::special::sphere_area;

const SEMIGROUP_TOL: Tol = Tol::new(1e-200, 1e-10);

fn sorted_breaks(lo: f64, hi: f64, candidates: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut b: Vec<f64> = std::iter::once(lo)
        .chain(candidates.into_iter().filter(|&c| c > lo && c < hi))
        .chain(std::iter::once(hi))
        .collect();
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

/// (𝒯_t φ)(x) = ∫ p_t(x − y) φ(y) dy.
pub fn semigroup_apply(law: &StableLaw, t: f64, phi: &TestFunction, x: &Point) -> Result<f64> {
    semigroup_apply_tol(law, t, phi, x, SEMIGROUP_TOL)
}

pub(crate) fn semigroup_apply_tol(law: &StableLaw, t: f64, phi: &TestFunction, x: &Point, tol: Tol) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("semigroup at time {t}")));
    }
    if t == 0.0 {
        return Ok(phi.eval(x));
    }
    let p1 = law.unit_density()?;
    let (alpha, d) = (law.alpha(), law.d());
    let dim = law.dim();
    let area = sphere_area(d);
    let scale = t.powf(1.0 / alpha);
    let mut total = 0.0;
    for b in phi.bumps() {
        let a = dist(x, &b.center);
        let s = b.width;
        // integrate over the offset u = ρ − a
        let lo = (-12.0 * s).max(-a);
        let hi = 12.0 * s;
        let breaks = sorted_breaks(
            lo,
            hi,
            [0.5 * scale - a, 2.0 * scale - a, 8.0 * scale - a, -3.0 * s, 0.0, 3.0 * s],
        );
        let f = |u: f64| {
            let rho = a + u;
            let (p, m) = (p1.at_time(alpha, d, t, rho), b.spherical_mean_offset(dim, a, u));
            // far out ρ^{d−1} overflows while the density underflows
            if p == 0.0 || m == 0.0 {
                return 0.0;
            }
            p * area * rho.powi(d as i32 - 1) * m
        };
        total += integrate_breaks(f, &breaks, tol)?.value;
    }
    Ok(total)
}

/// Spectral evaluation of 𝒯_t φ in d = 1 for cross-checking:
/// (A√(2π)σ/π) ∫₀^∞ e^{−σ²z²/2 − t z^α} cos(z(x − c)) dz per bump.
pub fn semigroup_apply_fourier(law: &StableLaw, t: f64, phi: &TestFunction, x: f64) -> Result<f64> {
    if law.d() != 1 {
        return Err(Error::Domain("spectral semigroup evaluation is one-dimensional".into()));
    }
    let alpha = law.alpha();
    let mut total = 0.0;
    for b in phi.bumps() {
        let s = b.width;
        let u = x - b.center[0];
        let zmax = 80f64.sqrt() / s;
        let period = if u != 0.0 { PI / u.abs() } else { zmax };
        let n = ((zmax / period).ceil() as usize).clamp(1, 4000);
        let mut breaks: Vec<f64> = (1..40).rev().map(|k| zmax.min(period) * 2f64.powi(-k)).collect();
        breaks.insert(0, 0.0);
        breaks.extend((1..=n).map(|k| k as f64 * zmax / n as f64));
        breaks.dedup();
        let f = |z: f64| (-0.5 * s * s * z * z - t * z.powf(alpha)).exp() * (z * u).cos();
        let e = integrate_breaks(f, &breaks, Tol::new(1e-16, 1e-12))?;
        total += b.amplitude * (2.0 * PI).sqrt() * s / PI * e.value;
    }
    Ok(total)
}

const FAR_FIELD: f64 = 1e3;

/// C_{α,d} = Γ((d−α)/2) / (2^α π^{d/2} Γ(α/2)).
pub fn potential_constant(alpha: f64, d: usize) -> f64 {
    let df = d as f64;
    gamma((df - alpha) / 2.0) / (2f64.powf(alpha) * PI.powf(df / 2.0) * gamma(alpha / 2.0))
}

/// Gφ(x) = C_{α,d} ∫ φ(y)|x − y|^{α−d} dy = C_{α,d} S_{d−1} ∫₀^∞ ρ^{α−1} M_φ(x, ρ) dρ.
///
/// The ball ρ < r_in = min(σ, 0.1) is integrated after ρ = r_in v^{1/α}, which
/// absorbs ρ^{α−1} into dv.
pub fn potential_apply(law: &StableLaw, phi: &TestFunction, x: &Point) -> Result<f64> {
    if !law.is_transient() {
        return Err(Error::Domain(format!(
            "potential operator needs α < d (α = {}, d = {})",
            law.alpha(),
            law.d()
        )));
    }
    let (alpha, d) = (law.alpha(), law.d());
    let dim = law.dim();
    let tol = Tol::new(1e-200, 1e-11);
    let mut total = 0.0;
    for b in phi.bumps() {
        let a = dist(x, &b.center);
        let s = b.width;
        if a > FAR_FIELD * s {
            // E|x + σZ|^{−p} = |x|^{−p}(1 + σ²p(p + 2 − d)/(2|x|²) + O(σ⁴/|x|⁴))
            let p = d as f64 - alpha;
            let mass = b.amplitude * (2.0 * PI * s * s).powf(d as f64 / 2.0);
            let corr = 1.0 + s * s * p * (p + 2.0 - d as f64) / (2.0 * a * a);
            total += mass * a.powf(-p) * corr / sphere_area(d);
            continue;
        }
        let r_in = s.min(0.1);
        let inner = if a - 12.0 * s < r_in {
            let g = |v: f64| b.spherical_mean(dim, a, r_in * v.powf(1.0 / alpha));
            r_in.powf(alpha) / alpha * integrate(g, 0.0, 1.0, tol)?.value
        } else {
            0.0
        };
        let lo = r_in.max(a - 12.0 * s);
        let hi = (a + 12.0 * s).max(lo);
        let breaks = sorted_breaks(lo, hi, [a - 3.0 * s, a, a + 3.0 * s]);
        let f = |rho: f64| rho.powf(alpha - 1.0) * b.spherical_mean(dim, a, rho);
        let outer = integrate_breaks(f, &breaks, tol)?.value;
        total += inner + outer;
    }
    Ok(potential_constant(alpha, d) * sphere_area(d) * total)
}
