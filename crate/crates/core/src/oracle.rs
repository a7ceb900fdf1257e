//! Deterministic quadrature oracles for finite horizons: the exact second
//! moment of an increment of X_T, the critical-case averages of the
//! semigroup, the total expected occupation, and the decay of E⟨N_t, φ⟩.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::intensity::IntensityMeasure;
use crate::phi::{Point, TestFunction};
use crate::quadrature::{gauss_legendre, integrate_breaks, over_line, Estimate, Tol};
use crate::stable::{potential_apply, semigroup_apply, StableLaw, UnitDensity};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(f64, f64)", into = "(f64, f64)")]
pub struct IncrementWindow {
    t1: f64,
    t2: f64,
}

impl IncrementWindow {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        ensure(0.0 <= t1 && t1 <= t2 && t2 <= 1.0, || format!("window ({t1}, {t2}) not ordered in [0, 1]"))?;
        Ok(Self { t1, t2 })
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    pub fn is_empty(&self) -> bool {
        self.t1 == self.t2
    }
}

impl TryFrom<(f64, f64)> for IncrementWindow {
    type Error = Error;
    fn try_from((a, b): (f64, f64)) -> Result<Self> {
        Self::new(a, b)
    }
}

impl From<IncrementWindow> for (f64, f64) {
    fn from(w: IncrementWindow) -> Self {
        (w.t1, w.t2)
    }
}

fn point(x: f64) -> Point {
    [x, 0.0, 0.0]
}

/// Density of E N_s at y in d = 1: ∫ p_s(y − x) μ(dx).
fn mean_density(mu: &IntensityMeasure, p1: &UnitDensity, alpha: f64, s: f64, y: f64) -> Result<f64> {
    let atoms: f64 = mu.atoms().iter().map(|a| a.weight * p1.at_time(alpha, 1, s, (y - a.position[0]).abs())).sum();
    if s == 0.0 {
        return Ok(atoms + mu.radial_density(y.abs()));
    }
    let sigma = s.powf(1.0 / alpha);
    let w0 = y / sigma;
    let mut breaks = vec![0.0, -1.0, 1.0, -4.0, 4.0, w0];
    for k in [1.0, 4.0, 16.0, 64.0] {
        breaks.extend([w0 - k / sigma, w0 + k / sigma]);
    }
    let f = |w: f64| p1.eval(w.abs()) * mu.radial_density((y - sigma * w).abs());
    let scale = mu.radial_density(y.abs()).max(mu.radial_density(sigma));
    Ok(atoms + over_line(f, &breaks, Tol::new(1e-14 * scale, 1e-10))?.value)
}

/// Outer panels on [a, b], refined geometrically toward both ends.
fn two_sided_panels(a: f64, b: f64, levels: i32) -> Vec<f64> {
    let w = b - a;
    let mut p: Vec<f64> = vec![a, b, a + 0.5 * w];
    for k in 1..=levels {
        let h = w * 2f64.powi(-k - 1);
        p.extend([a + h, b - h]);
    }
    p.sort_by(f64::total_cmp);
    p.dedup();
    p
}

fn gl_nodes(panels: &[f64], n: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    panels
        .windows(2)
        .flat_map(|p| {
            let (c, h) = (0.5 * (p[0] + p[1]), 0.5 * (p[1] - p[0]));
            x.iter().zip(&w).map(move |(x, w)| (c + h * x, h * w)).collect::<Vec<_>>()
        })
        .collect()
}

const RULES: [usize; 2] = [10, 7];
const PANEL_LEVELS: i32 = 14;

/// E⟨X_T(t₂) − X_T(t₁), φ⟩² = (2/F²) ∫φ(y) ∫_{Tt₁}^{Tt₂} m_s(y) u_{Tt₂−s}(y) ds dy,
/// where m_s is the density of E N_s and u_L(y) = ∫₀^L 𝒯_rφ(y) dr. The
/// returned error compares two tensor Gauss–Legendre rules.
pub fn variance_exact(
    mu: &IntensityMeasure,
    law: &StableLaw,
    horizon: f64,
    phi: &TestFunction,
    window: IncrementWindow,
    norming: f64,
) -> Result<Estimate> {
    ensure(law.d() == 1 && mu.d() == 1, || "the variance oracle is one-dimensional".into())?;
    ensure(horizon > 1.0, || format!("horizon {horizon} must exceed 1"))?;
    ensure(norming > 0.0, || format!("norming {norming} must be positive"))?;
    if window.is_empty() || phi.is_zero() {
        return Ok(Estimate::zero());
    }
    let alpha = law.alpha();
    let p1 = law.unit_density()?;
    let (a, b) = (horizon * window.t1, horizon * window.t2);

    let mut ypanels = Vec::new();
    for bump in phi.bumps() {
        let (c, s) = (bump.center[0], bump.width);
        ypanels.extend([-12.0, -6.0, -3.0, 0.0, 3.0, 6.0, 12.0].map(|k| c + k * s));
    }
    ypanels.sort_by(f64::total_cmp);
    ypanels.dedup();

    let spanels = two_sided_panels(a, b, PANEL_LEVELS);
    let snodes: Vec<Vec<(f64, f64)>> = RULES.iter().map(|&n| gl_nodes(&spanels, n)).collect();
    // every s node of both rules, so u_L is accumulated once per y
    let mut ls: Vec<f64> = snodes.iter().flatten().map(|&(s, _)| b - s).collect();
    ls.sort_by(f64::total_cmp);
    ls.dedup();

    let gap_rule = gauss_legendre(5);
    let per_rule = |n: usize| -> Result<[f64; 2]> {
        let ynodes = gl_nodes(&ypanels, n);
        let rows = crate::par::map(&ynodes, |&(y, wy)| -> Result<[f64; 2]> {
            let x = point(y);
            // u_L(y) at each needed L by accumulation over consecutive L; the
            // gaps are far below the scale on which 𝒯_rφ varies, so a 5-point
            // rule per gap is exact to rounding
            let mut cum = Vec::with_capacity(ls.len());
            let (mut acc, mut prev) = (0.0, 0.0);
            for &l in &ls {
                let (c, h) = (0.5 * (prev + l), 0.5 * (l - prev));
                for (xk, wk) in gap_rule.0.iter().zip(&gap_rule.1) {
                    acc += h * wk * semigroup_apply(law, c + h * xk, phi, &x)?;
                }
                cum.push(acc);
                prev = l;
            }
            let u = |l: f64| -> f64 {
                let i = ls.partition_point(|&v| v < l);
                cum[i]
            };
            let fy = wy * phi.eval(&x);
            let mut out = [0.0; 2];
            for (o, nodes) in out.iter_mut().zip(&snodes) {
                for &(s, ws) in nodes {
                    *o += ws * mean_density(mu, &p1, alpha, s, y)? * u(b - s);
                }
                *o *= fy;
            }
            Ok(out)
        });
        let mut totals = [0.0; 2];
        for r in rows {
            let r = r?;
            totals[0] += r[0];
            totals[1] += r[1];
        }
        Ok(totals)
    };
    let fine = per_rule(RULES[0])?;
    let coarse_y = per_rule(RULES[1])?[0];
    let scale = 2.0 / (norming * norming);
    let err = (fine[0] - fine[1]).abs().max((fine[0] - coarse_y).abs());
    Ok(Estimate::new(scale * fine[0], scale * err))
}

/// (1/log T)∫₀^T 𝒯_uφ(x) du via u = T^v, i.e. ∫_{−∞}^1 𝒯_{T^v}φ(x) T^v dv.
pub fn log_average(law: &StableLaw, phi: &TestFunction, x: &Point, horizon: f64) -> Result<f64> {
    critical(law)?;
    ensure(horizon > 1.0, || format!("horizon {horizon} must exceed 1"))?;
    if phi.is_zero() {
        return Ok(0.0);
    }
    Ok(log_kernel(law, phi, x, horizon)? / horizon.ln())
}

fn critical(law: &StableLaw) -> Result<()> {
    if law.alpha() != law.d() as f64 {
        return Err(Error::Domain(format!("critical averages need d = α (d = {}, α = {})", law.d(), law.alpha())));
    }
    Ok(())
}

/// ∫₀^T 𝒯_uφ(x) du with the logarithmic substitution.
fn log_kernel(law: &StableLaw, phi: &TestFunction, x: &Point, horizon: f64) -> Result<f64> {
    let lt = horizon.ln();
    // below u₀ the semigroup is φ(x) to within O(u₀)
    let u0: f64 = 1e-12;
    let v0 = u0.ln() / lt;
    let n = ((1.0 - v0) / 0.25).ceil() as usize;
    let breaks: Vec<f64> = (0..=n).map(|k| v0 + (1.0 - v0) * k as f64 / n as f64).collect();
    let mut err = None;
    let body = integrate_breaks(
        |v| {
            let u = horizon.powf(v);
            semigroup_apply(law, u, phi, x).unwrap_or_else(|e| {
                err.get_or_insert(e);
                0.0
            }) * u
        },
        &breaks,
        Tol::new(1e-300, 1e-8),
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(u0 * phi.eval(x) + lt * body.value)
}

/// (1/log T)∫_{|x|^d > T} ∫₀^T 𝒯_uφ(x) du |x|^{−d} dx, for radial φ.
pub fn tail_log_average(law: &StableLaw, phi: &TestFunction, horizon: f64) -> Result<f64> {
    critical(law)?;
    ensure(horizon > 1.0, || format!("horizon {horizon} must exceed 1"))?;
    if phi.is_zero() {
        return Ok(0.0);
    }
    let d = law.d();
    ensure(d == 1 || phi.is_radial(), || "tail average in d ≥ 2 needs a radial test function".into())?;
    let r0 = horizon.powf(1.0 / d as f64);
    let area = crate::special::sphere_area(d);
    let g = |r: f64| -> Result<f64> {
        let v = if d == 1 {
            log_kernel(law, phi, &point(r), horizon)? + log_kernel(law, phi, &point(-r), horizon)?
        } else {
            area * r.powi(d as i32 - 1) * log_kernel(law, phi, &point(r), horizon)?
        };
        Ok(v * r.powi(-(d as i32)))
    };
    // r = r₀e^w
    let mut err = None;
    let breaks = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 14.0, 20.0];
    let body = integrate_breaks(
        |w| {
            let r = r0 * w.exp();
            g(r).unwrap_or_else(|e| {
                err.get_or_insert(e);
                0.0
            }) * r
        },
        &breaks,
        Tol::new(1e-300, 1e-6),
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    // beyond r₀e^{20} the integrand decays like r^{−2α−1}
    Ok(body.value / horizon.ln())
}

/// ∫ Gφ dμ, the total expected occupation of a transient system.
pub fn total_occupation(mu: &IntensityMeasure, law: &StableLaw, phi: &TestFunction) -> Result<f64> {
    total_occupation_beyond(mu, law, phi, 0.0)
}

/// ∫_{|x| > R} Gφ dμ.
pub fn total_occupation_beyond(mu: &IntensityMeasure, law: &StableLaw, phi: &TestFunction, radius: f64) -> Result<f64> {
    let alpha = law.alpha();
    if !law.is_transient() {
        return Err(Error::Domain(format!("total occupation needs α < d (α = {alpha}, d = {})", law.d())));
    }
    if let Some(g) = mu.gamma() {
        ensure(g > alpha, || format!("total occupation needs γ > α (γ = {g}, α = {alpha})"))?;
    }
    ensure(law.dim() == mu.dim, || "law and intensity live in different dimensions".into())?;
    mu.integrate_against(phi, phi.support_radius(), radius, |x| potential_apply(law, phi, x))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayTable {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// least-squares slope of log value against log t
    pub slope: f64,
}

pub fn mean_decay(mu: &IntensityMeasure, law: &StableLaw, phi: &TestFunction, times: &[f64]) -> Result<DecayTable> {
    ensure(times.len() >= 2 && times.iter().all(|&t| t > 0.0), || "decay ladder needs ≥ 2 positive times".into())?;
    let values: Vec<f64> = times.iter().map(|&t| mu.mean_functional(law, t, phi)).collect::<Result<_>>()?;
    let slope = if values.iter().all(|&v| v > 0.0) {
        let xs: Vec<f64> = times.iter().map(|t| t.ln()).collect();
        let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
        let n = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        sxy / sxx
    } else {
        f64::NAN
    };
    Ok(DecayTable { times: times.to_vec(), values, slope })
}
