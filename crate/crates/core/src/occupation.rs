//! One replica of the particle system: Poisson initial configuration,
//! stable motion on a uniform time lattice, and midpoint-rule occupation
//! integrals ∫₀^{Tt}⟨N_s, φ⟩ds on a grid of t ∈ [0, 1].

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::intensity::{IntensityMeasure, PointSampler};
use crate::phi::{Point, TestFunction};
use crate::quadrature::{gauss_legendre, integrate_breaks, Tol};
use crate::rng::StreamId;
use crate::stable::{semigroup_apply, IncrementSampler, StableLaw};

const LADDER_START: f64 = 1.0;
const LADDER_STEPS: usize = 48;
const CENTERING_LEVELS: usize = 12;

/// u_T(x) = ∫₀^T 𝒯_sφ(x) ds, the expected occupation of φ by one particle from x.
pub fn occupation_kernel(law: &StableLaw, phi: &TestFunction, x: &Point, horizon: f64) -> Result<f64> {
    if phi.is_zero() || horizon == 0.0 {
        return Ok(0.0);
    }
    let mut breaks: Vec<f64> = (0..12).rev().map(|k| horizon * 4f64.powi(-k)).collect();
    breaks.insert(0, 0.0);
    let mut err = None;
    let v = integrate_breaks(
        |s| {
            semigroup_apply(law, s, phi, x).unwrap_or_else(|e| {
                err.get_or_insert(e);
                0.0
            })
        },
        &breaks,
        Tol::new(1e-300, 1e-8),
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(v.value),
    }
}

/// Expected occupation over [0, T] contributed by particles starting outside B(0, R).
pub fn truncation_tail(mu: &IntensityMeasure, law: &StableLaw, horizon: f64, phi: &TestFunction, radius: f64) -> Result<f64> {
    if phi.is_zero() {
        return Ok(0.0);
    }
    ensure(law.dim() == mu.dim, || "law and intensity live in different dimensions".into())?;
    let spread = horizon.powf(1.0 / law.alpha());
    mu.integrate_against(phi, spread, radius, |x| occupation_kernel(law, phi, x, horizon))
}

/// Upper bound on `truncation_tail` from radial monotonicity of the stable
/// density: a particle at distance r > ρ from the origin, with φ essentially
/// supported in B(0, ρ), occupies φ for at most ∫φ·∫₀^T p_s(r − ρ) ds.
pub fn truncation_bound(mu: &IntensityMeasure, law: &StableLaw, horizon: f64, phi: &TestFunction, radius: f64) -> Result<f64> {
    if phi.is_zero() {
        return Ok(0.0);
    }
    ensure(law.dim() == mu.dim, || "law and intensity live in different dimensions".into())?;
    let rho = phi.support_radius();
    ensure(radius > rho, || format!("radius {radius} inside the support of φ ({rho})"))?;
    let p1 = law.unit_density()?;
    let (alpha, d) = (law.alpha(), law.d());
    let mass = phi.integral(law.dim());
    let mut breaks: Vec<f64> = (0..40).rev().map(|k| horizon * 2f64.powi(-k)).collect();
    breaks.insert(0, 0.0);
    let occupation = |a: f64| -> Result<f64> {
        let v = integrate_breaks(|s| if s == 0.0 { 0.0 } else { p1.at_time(alpha, d, s, a) }, &breaks, Tol::new(1e-300, 1e-6))?;
        Ok(mass * v.value)
    };
    let spread = horizon.powf(1.0 / alpha);
    mu.integrate_against(phi, spread, radius, |x| occupation(crate::phi::norm(x) - rho))
}

/// Smallest radius R = 2^k beyond the support of φ whose omitted expected
/// occupation, bounded by `truncation_bound`, is below `eps`.
pub fn truncation_radius(mu: &IntensityMeasure, law: &StableLaw, horizon: f64, phi: &TestFunction, eps: f64) -> Result<f64> {
    ensure(eps > 0.0, || format!("truncation budget {eps} must be positive"))?;
    ensure(horizon > 0.0, || format!("horizon {horizon} must be positive"))?;
    if phi.is_zero() {
        return Ok(LADDER_START);
    }
    let mut radius = LADDER_START;
    while radius <= 2.0 * phi.support_radius() {
        radius *= 2.0;
    }
    let mut bound = f64::INFINITY;
    for _ in 0..LADDER_STEPS {
        bound = truncation_bound(mu, law, horizon, phi, radius)?;
        if bound < eps {
            return Ok(radius);
        }
        radius *= 2.0;
    }
    Err(Error::TruncationUnreachable { budget: eps, bound, radius: radius / 2.0 })
}

/// Grid times t_i ∈ [0, 1] mapped onto whole numbers of steps of size dt.
fn grid_steps(horizon: f64, grid: &[f64], dt: f64) -> Result<Vec<usize>> {
    ensure(dt > 0.0 && dt.is_finite(), || format!("time step {dt}"))?;
    ensure(!grid.is_empty(), || "empty time grid".into())?;
    ensure(grid.windows(2).all(|w| w[0] < w[1]), || "grid must be increasing".into())?;
    ensure(grid[0] >= 0.0 && *grid.last().unwrap() <= 1.0, || "grid must lie in [0, 1]".into())?;
    grid.iter()
        .map(|&t| {
            let n = (horizon * t / dt).round();
            ensure((n * dt - horizon * t).abs() <= 1e-9 * horizon.max(1.0), || {
                format!("dt = {dt} does not divide T·t = {}", horizon * t)
            })?;
            Ok(n as usize)
        })
        .collect()
}

/// Raw occupation integrals ∫₀^{Tt_i}⟨N_s, φ_j⟩ds of one replica: `values[j][i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawPath {
    pub grid: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

/// Everything a replica needs, prepared once per scenario.
#[derive(Debug, Clone)]
pub struct Simulation {
    sampler: PointSampler,
    half: IncrementSampler,
    full: IncrementSampler,
    phis: Vec<TestFunction>,
    grid: Vec<f64>,
    steps: Vec<usize>,
    dt: f64,
    horizon: f64,
}

impl Simulation {
    pub fn new(
        mu: &IntensityMeasure,
        law: &StableLaw,
        horizon: f64,
        phis: Vec<TestFunction>,
        grid: Vec<f64>,
        dt: f64,
        radius: f64,
    ) -> Result<Self> {
        ensure(mu.dim == law.dim(), || "law and intensity live in different dimensions".into())?;
        ensure(horizon > 0.0, || format!("horizon {horizon}"))?;
        let steps = grid_steps(horizon, &grid, dt)?;
        Ok(Self {
            sampler: mu.sampler(radius)?,
            half: law.sampler(0.5 * dt)?,
            full: law.sampler(dt)?,
            phis,
            grid,
            steps,
            dt,
            horizon,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn expected_particles(&self) -> f64 {
        self.sampler.mean_count()
    }

    pub fn run(&self, stream: StreamId) -> RawPath {
        let mut rng = stream.rng();
        let points = self.sampler.sample(&mut rng);
        let mut values = vec![vec![0.0; self.grid.len()]; self.phis.len()];
        for x0 in &points {
            self.accumulate(*x0, &mut rng, &mut values);
        }
        RawPath { grid: self.grid.clone(), values }
    }

    /// Occupation integrals of a single particle started at x0.
    pub fn run_from<R: Rng + ?Sized>(&self, x0: Point, rng: &mut R) -> RawPath {
        let mut values = vec![vec![0.0; self.grid.len()]; self.phis.len()];
        self.accumulate(x0, rng, &mut values);
        RawPath { grid: self.grid.clone(), values }
    }

    fn accumulate<R: Rng + ?Sized>(&self, x0: Point, rng: &mut R, out: &mut [Vec<f64>]) {
        let n_total = *self.steps.last().unwrap();
        let mut acc = vec![0.0; self.phis.len()];
        let mut next = 0;
        // grid points at step 0
        while next < self.steps.len() && self.steps[next] == 0 {
            next += 1;
        }
        if n_total == 0 {
            return;
        }
        // midpoint of the first step
        let mut x = add(x0, self.half.sample(rng));
        for k in 1..=n_total {
            for (a, phi) in acc.iter_mut().zip(&self.phis) {
                *a += phi.eval(&x);
            }
            while next < self.steps.len() && self.steps[next] == k {
                for (o, a) in out.iter_mut().zip(&acc) {
                    o[next] += self.dt * a;
                }
                next += 1;
            }
            if k < n_total {
                x = add(x, self.full.sample(rng));
            }
        }
    }
}

#[inline]
fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// ∫₀^{Tt_i} E⟨N_s, φ⟩ds for each grid time, computed once per scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Centering {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl Centering {
    /// Fixed 10-point Gauss–Legendre rule on panels refined geometrically
    /// toward s = 0; the mean E⟨N_s, φ⟩ is smooth and monotone in s, and
    /// each evaluation is itself a μ-integral, so adaptivity is too costly.
    pub fn compute(mu: &IntensityMeasure, law: &StableLaw, horizon: f64, phi: &TestFunction, grid: &[f64]) -> Result<Self> {
        let (x, w) = gauss_legendre(10);
        let mut edges = vec![0.0];
        for &t in grid {
            let hi = horizon * t;
            let lo = *edges.last().unwrap();
            if hi > lo {
                edges.extend((1..CENTERING_LEVELS).rev().map(|k| hi * 2f64.powi(-(k as i32))).filter(|&b| b > lo * 1.5));
                edges.push(hi);
            }
        }
        let nodes: Vec<(f64, f64)> = edges
            .windows(2)
            .flat_map(|e| {
                let (c, h) = (0.5 * (e[0] + e[1]), 0.5 * (e[1] - e[0]));
                x.iter().zip(&w).map(move |(xk, wk)| (c + h * xk, h * wk))
            })
            .collect();
        let means = crate::par::map(&nodes, |&(s, _)| mu.mean_functional(law, s, phi));
        let mut values = Vec::with_capacity(grid.len());
        let mut acc = 0.0;
        let mut it = nodes.iter().zip(means).peekable();
        for &t in grid {
            let hi = horizon * t;
            while let Some(((_, wk), m)) = it.next_if(|((s, _), _)| *s < hi) {
                acc += wk * m?;
            }
            values.push(acc);
        }
        Ok(Self { grid: grid.to_vec(), values })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathKind {
    /// centered and normed occupation, X_T
    Fluctuation,
    /// normed occupation of the whole system (finite μ), Y_T
    Occupation,
    /// normed occupation of a single particle, Z_T
    SinglePath,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluctuationPath {
    pub kind: PathKind,
    pub horizon: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn fluctuation_path(raw: &[f64], grid: &[f64], horizon: f64, centering: &Centering, norming: f64) -> Result<FluctuationPath> {
    ensure(norming > 0.0, || format!("norming {norming}"))?;
    if raw.len() != grid.len() {
        return Err(Error::Misaligned(format!("{} values on a grid of {}", raw.len(), grid.len())));
    }
    let values = grid
        .iter()
        .zip(raw)
        .map(|(&t, &v)| {
            let i = centering.grid.iter().position(|&c| c == t).ok_or(Error::MissingCentering(t))?;
            Ok(if t == 0.0 { 0.0 } else { (v - centering.values[i]) / norming })
        })
        .collect::<Result<_>>()?;
    Ok(FluctuationPath { kind: PathKind::Fluctuation, horizon, grid: grid.to_vec(), values })
}

pub fn occupation_path(
    raw: &[f64],
    grid: &[f64],
    horizon: f64,
    mu: Option<&IntensityMeasure>,
    norming: f64,
    kind: PathKind,
) -> Result<FluctuationPath> {
    ensure(norming > 0.0, || format!("norming {norming}"))?;
    if raw.len() != grid.len() {
        return Err(Error::Misaligned(format!("{} values on a grid of {}", raw.len(), grid.len())));
    }
    match kind {
        PathKind::Fluctuation => return Err(Error::InvalidParameter("fluctuation paths need a centering".into())),
        PathKind::Occupation => {
            let mu = mu.ok_or_else(|| Error::InvalidParameter("occupation process needs its intensity".into()))?;
            if !mu.mass(f64::INFINITY)?.is_finite() {
                return Err(Error::InfiniteMass { radius: f64::INFINITY });
            }
        }
        PathKind::SinglePath => {}
    }
    Ok(FluctuationPath { kind, horizon, grid: grid.to_vec(), values: raw.iter().map(|v| v / norming).collect() })
}

/// (1/2ε)·(time spent in [−ε, ε]) for a path sampled at the midpoints of
/// steps of length dt.
pub fn local_time_estimate(path: &[f64], eps: f64, dt: f64) -> f64 {
    let hits = path.iter().filter(|x| x.abs() <= eps).count();
    hits as f64 * dt / (2.0 * eps)
}

/// Occupation-density local time at 0 of a d = 1 path from the origin,
/// evaluated at each of `times` without storing the path.
pub fn simulate_local_time<R: Rng + ?Sized>(law: &StableLaw, times: &[f64], eps: f64, dt: f64, rng: &mut R) -> Result<Vec<f64>> {
    ensure(law.d() == 1 && law.alpha() > 1.0, || "local time at 0 needs d = 1 < α".into())?;
    let horizon = times.last().copied().unwrap_or(0.0);
    ensure(horizon > 0.0, || "local time needs a positive time".into())?;
    let rel: Vec<f64> = times.iter().map(|t| t / horizon).collect();
    let steps = grid_steps(horizon, &rel, dt)?;
    let half = law.sampler(0.5 * dt)?;
    let full = law.sampler(dt)?;
    let mut out = Vec::with_capacity(times.len());
    let mut hits = 0usize;
    let mut next = 0;
    while next < steps.len() && steps[next] == 0 {
        out.push(0.0);
        next += 1;
    }
    let n_total = steps.last().copied().unwrap_or(0);
    let mut x = half.sample_scalar(rng);
    for k in 1..=n_total {
        if x.abs() <= eps {
            hits += 1;
        }
        while next < steps.len() && steps[next] == k {
            out.push(hits as f64 * dt / (2.0 * eps));
            next += 1;
        }
        if k < n_total {
            x += full.sample_scalar(rng);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intensity::{Atom, FiniteDensity, IntensityKind};
    use crate::phi::ORIGIN;

    fn atomic(weight: f64) -> IntensityMeasure {
        IntensityMeasure::new(
            1,
            IntensityKind::FiniteGeneric { density: FiniteDensity::Atoms { atoms: vec![Atom { position: ORIGIN, weight }] } },
        )
        .unwrap()
    }

    #[test]
    fn empty_configuration_gives_zero_path() {
        let law = StableLaw::new(1.5, 1).unwrap();
        let sim = Simulation::new(&atomic(0.0), &law, 10.0, vec![TestFunction::centered(1.0).unwrap()], vec![0.0, 0.5, 1.0], 0.5, f64::INFINITY)
            .unwrap();
        let p = sim.run(StreamId::new(3, 9));
        assert!(p.values[0].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn grid_must_align_with_step() {
        let law = StableLaw::new(1.5, 1).unwrap();
        let r = Simulation::new(&atomic(1.0), &law, 10.0, vec![TestFunction::centered(1.0).unwrap()], vec![0.33, 1.0], 0.5, 1.0);
        assert!(r.is_err());
    }

    #[test]
    fn determinism_and_linearity() {
        let law = StableLaw::new(1.5, 1).unwrap();
        let mu = IntensityMeasure::power_law(1, 0.5).unwrap();
        let f1 = TestFunction::centered(1.0).unwrap();
        let f2 = TestFunction::gaussian([2.0, 0.0, 0.0], 0.5, 3.0).unwrap();
        let grid = vec![0.0, 0.25, 0.5, 1.0];
        let sim = Simulation::new(&mu, &law, 8.0, vec![f1.clone(), f2.clone(), f1.plus(&f2)], grid, 0.25, 64.0).unwrap();
        let a = sim.run(StreamId::new(1, 2));
        let b = sim.run(StreamId::new(1, 2));
        assert_eq!(a, b);
        for i in 0..4 {
            let sum = a.values[0][i] + a.values[1][i];
            assert!((sum - a.values[2][i]).abs() <= 1e-12 * sum.abs().max(1.0));
        }
        assert!(a.values[0].windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(a.values[0][0], 0.0);
    }

    #[test]
    fn truncation_zero_phi_and_monotone() {
        let law = StableLaw::new(1.5, 1).unwrap();
        let mu = IntensityMeasure::power_law(1, 0.5).unwrap();
        assert_eq!(truncation_radius(&mu, &law, 10.0, &TestFunction::zero(), 1e-3).unwrap(), LADDER_START);
        let phi = TestFunction::centered(1.0).unwrap();
        let t1 = truncation_tail(&mu, &law, 10.0, &phi, 16.0).unwrap();
        let t2 = truncation_tail(&mu, &law, 10.0, &phi, 32.0).unwrap();
        assert!(t2 < t1 && t2 > 0.0);
        let b = truncation_bound(&mu, &law, 10.0, &phi, 32.0).unwrap();
        assert!(b >= t2 && b < 3.0 * t2, "bound {b} vs exact {t2}");
    }

    #[test]
    fn centering_matches_adaptive_quadrature() {
        let law = StableLaw::new(1.5, 1).unwrap();
        let mu = IntensityMeasure::power_law(1, 0.5).unwrap();
        let phi = TestFunction::centered(1.0).unwrap();
        let c = Centering::compute(&mu, &law, 8.0, &phi, &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(c.values[0], 0.0);
        let direct = integrate_breaks(
            |s| mu.mean_functional(&law, s, &phi).unwrap(),
            &[0.0, 1e-3, 1e-2, 0.1, 1.0, 4.0],
            Tol::new(1e-300, 1e-10),
        )
        .unwrap()
        .value;
        assert!((c.values[1] - direct).abs() < 1e-8 * direct, "{} vs {direct}", c.values[1]);
    }

    #[test]
    fn local_time_band() {
        assert_eq!(local_time_estimate(&[1.0, -2.0, 0.5], 0.1, 0.01), 0.0);
        assert!((local_time_estimate(&[0.05, -0.05, 3.0], 0.1, 0.01) - 0.1).abs() < 1e-15);
    }
}
