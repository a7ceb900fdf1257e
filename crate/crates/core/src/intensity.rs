//! Initial intensity measures μ of the Poisson field, Poisson sampling of the
//! initial configuration, and μ-integrals of semigroup images.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::phi::{norm, Dim, Point, TestFunction, ORIGIN};
use crate::quadrature::{exp_sinh, integrate, integrate_breaks, tanh_sinh, Estimate, Tol};
use crate::rng::StreamId;
use crate::special::{beta, beta_reg, gamma_lr, sphere_area};
use crate::stable::{semigroup_apply, StableLaw};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub position: Point,
    pub weight: f64,
}

/// Bounded nonnegative radial profile h(|x|) of the mixed intensity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum Profile {
    Constant { level: f64 },
    /// `levels[i]` on `(edges[i-1], edges[i]]`, with `edges[-1] = 0` and the
    /// last level extending to infinity.
    Annuli { edges: Vec<f64>, levels: Vec<f64> },
    /// 1 on [0, 4]; 1 on (n^n, (n+1)^{n+1}] for even n ≥ 2 and 2 for odd n.
    /// Its ball averages oscillate between two limit points.
    Alternating,
}

// n^n for n = 2.. while finite
fn alternating_edges() -> impl Iterator<Item = (u32, f64)> {
    (2u32..).map(|n| (n, (n as f64).powi(n as i32))).take_while(|(_, e)| e.is_finite())
}

impl Profile {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Profile::Constant { level } => *level,
            Profile::Annuli { edges, levels } => {
                let i = edges.partition_point(|&e| e < r);
                levels[i]
            }
            Profile::Alternating => {
                let mut level = 1.0;
                for (n, e) in alternating_edges() {
                    if r <= e {
                        break;
                    }
                    level = if n % 2 == 0 { 1.0 } else { 2.0 };
                }
                level
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Profile::Constant { level } => ensure(*level >= 0.0 && level.is_finite(), || format!("profile level {level}")),
            Profile::Annuli { edges, levels } => {
                ensure(levels.len() == edges.len() + 1, || "annuli need one more level than edges".into())?;
                ensure(edges.windows(2).all(|w| w[0] < w[1]) && edges.iter().all(|&e| e > 0.0), || {
                    "annulus edges must be positive and increasing".into()
                })?;
                ensure(levels.iter().all(|l| *l >= 0.0 && l.is_finite()), || "negative annulus level".into())
            }
            Profile::Alternating => Ok(()),
        }
    }

    /// Radii in (a, b) where the profile jumps.
    pub fn jumps(&self, a: f64, b: f64) -> Vec<f64> {
        let all: Vec<f64> = match self {
            Profile::Constant { .. } => vec![],
            Profile::Annuli { edges, .. } => edges.clone(),
            Profile::Alternating => alternating_edges().map(|(_, e)| e).collect(),
        };
        all.into_iter().filter(|&e| e > a && e < b).collect()
    }

    /// Whether the profile stays positive far out (so that μ is infinite when γ ≤ d).
    fn positive_at_infinity(&self) -> bool {
        match self {
            Profile::Constant { level } => *level > 0.0,
            Profile::Annuli { levels, .. } => levels.last().is_some_and(|l| *l > 0.0),
            Profile::Alternating => true,
        }
    }

    /// ∫_{|x| ≤ R} h(|x|) dx, exactly (the profile is piecewise constant).
    pub fn ball_integral(&self, d: Dim, radius: f64) -> f64 {
        let df = d.as_f64();
        let vol = |r: f64| sphere_area(d.get()) / df * r.powf(df);
        let mut total = 0.0;
        let mut lo = 0.0;
        for e in self.jumps(0.0, radius).into_iter().chain(std::iter::once(radius)) {
            let mid = 0.5 * (lo + e);
            total += self.eval(mid) * (vol(e) - vol(lo));
            lo = e;
        }
        total
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum FiniteDensity {
    /// total·N(0, width² I) density.
    Gaussian { total: f64, width: f64 },
    Atoms { atoms: Vec<Atom> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum IntensityKind {
    /// dx / (1 + |x|^γ)
    PowerLawSmoothed { gamma: f64 },
    /// |x|^{−γ} dx
    PurePower { gamma: f64 },
    /// ν(dx) + h(|x|) dx / (1 + |x|^γ)
    GeneralMixed { atoms: Vec<Atom>, profile: Profile, gamma: f64 },
    FiniteGeneric { density: FiniteDensity },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntensityMeasure {
    pub dim: Dim,
    pub kind: IntensityKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mass {
    Finite(f64),
    Infinite,
}

impl Mass {
    pub fn value(self) -> Option<f64> {
        match self {
            Mass::Finite(m) => Some(m),
            Mass::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Mass::Finite(_))
    }
}

const MASS_TOL: Tol = Tol::new(1e-300, 1e-12);

/// ∫₀^R f(r) dr for power-law-like radial integrands: tanh–sinh on [0, r₀]
/// (absorbing r^{−γ}-type singularities), adaptive Gauss–Legendre in log r
/// beyond, with `breaks` forced as panel edges.
pub(crate) fn radial_integral<F: FnMut(f64) -> f64>(mut f: F, radius: f64, breaks: &[f64], tol: Tol) -> Result<Estimate> {
    if radius <= 0.0 {
        return Ok(Estimate::zero());
    }
    let r0 = radius.min(1.0).min(breaks.iter().copied().filter(|&b| b > 0.0).fold(f64::INFINITY, f64::min));
    let head = tanh_sinh(&mut f, 0.0, r0, tol.scaled(0.5))?;
    if r0 >= radius {
        return Ok(head);
    }
    let (l0, l1) = (r0.ln(), radius.ln());
    let mut lb: Vec<f64> = std::iter::once(l0)
        .chain(breaks.iter().filter(|&&b| b > r0 && b < radius).map(|b| b.ln()))
        .chain((1..).map(|k| l0 + k as f64).take_while(|&l| l < l1))
        .chain(std::iter::once(l1))
        .collect();
    lb.sort_by(f64::total_cmp);
    lb.dedup();
    let body = integrate_breaks(
        |u| {
            let r = u.exp();
            f(r) * r
        },
        &lb,
        tol.scaled(0.5),
    )?;
    Ok(head + body)
}

impl IntensityMeasure {
    pub fn new(dim: usize, kind: IntensityKind) -> Result<Self> {
        let m = Self { dim: Dim::new(dim)?, kind };
        m.validate()?;
        Ok(m)
    }

    pub fn power_law(dim: usize, gamma: f64) -> Result<Self> {
        Self::new(dim, IntensityKind::PowerLawSmoothed { gamma })
    }

    pub fn validate(&self) -> Result<()> {
        let check_atoms = |atoms: &[Atom]| {
            ensure(atoms.iter().all(|a| a.weight >= 0.0 && a.weight.is_finite()), || "atom weights must be finite and ≥ 0".into())
        };
        match &self.kind {
            IntensityKind::PowerLawSmoothed { gamma } | IntensityKind::PurePower { gamma } => {
                ensure(*gamma > 0.0 && gamma.is_finite(), || format!("γ = {gamma} must be positive"))
            }
            IntensityKind::GeneralMixed { atoms, profile, gamma } => {
                ensure(*gamma > 0.0 && gamma.is_finite(), || format!("γ = {gamma} must be positive"))?;
                check_atoms(atoms)?;
                profile.validate()
            }
            IntensityKind::FiniteGeneric { density: FiniteDensity::Gaussian { total, width } } => ensure(
                *total >= 0.0 && total.is_finite() && *width > 0.0 && width.is_finite(),
                || format!("finite Gaussian intensity (total {total}, width {width})"),
            ),
            IntensityKind::FiniteGeneric { density: FiniteDensity::Atoms { atoms } } => check_atoms(atoms),
        }
    }

    pub fn d(&self) -> usize {
        self.dim.get()
    }

    pub fn gamma(&self) -> Option<f64> {
        match &self.kind {
            IntensityKind::PowerLawSmoothed { gamma }
            | IntensityKind::PurePower { gamma }
            | IntensityKind::GeneralMixed { gamma, .. } => Some(*gamma),
            IntensityKind::FiniteGeneric { .. } => None,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        match &self.kind {
            IntensityKind::GeneralMixed { atoms, .. } | IntensityKind::FiniteGeneric { density: FiniteDensity::Atoms { atoms } } => {
                atoms
            }
            _ => &[],
        }
    }

    /// Lebesgue density of the absolutely continuous part at radius r.
    #[inline]
    pub fn radial_density(&self, r: f64) -> f64 {
        match &self.kind {
            IntensityKind::PowerLawSmoothed { gamma } => 1.0 / (1.0 + r.powf(*gamma)),
            IntensityKind::PurePower { gamma } => r.powf(-gamma),
            IntensityKind::GeneralMixed { profile, gamma, .. } => profile.eval(r) / (1.0 + r.powf(*gamma)),
            IntensityKind::FiniteGeneric { density: FiniteDensity::Gaussian { total, width } } => {
                total * (2.0 * PI * width * width).powf(-self.dim.as_f64() / 2.0) * (-0.5 * r * r / (width * width)).exp()
            }
            IntensityKind::FiniteGeneric { density: FiniteDensity::Atoms { .. } } => 0.0,
        }
    }

    fn has_continuous_part(&self) -> bool {
        !matches!(self.kind, IntensityKind::FiniteGeneric { density: FiniteDensity::Atoms { .. } })
    }

    /// Radii where the continuous density is not smooth.
    fn kinks(&self, a: f64, b: f64) -> Vec<f64> {
        match &self.kind {
            IntensityKind::GeneralMixed { profile, .. } => profile.jumps(a, b),
            _ => vec![],
        }
    }

    /// Whether the continuous part has infinite total mass (at 0 or at ∞).
    fn continuous_mass_diverges(&self, radius: f64) -> bool {
        let d = self.dim.as_f64();
        match &self.kind {
            IntensityKind::PowerLawSmoothed { gamma } => radius.is_infinite() && *gamma <= d,
            IntensityKind::PurePower { gamma } => *gamma >= d || radius.is_infinite(),
            IntensityKind::GeneralMixed { profile, gamma, .. } => {
                radius.is_infinite() && *gamma <= d && profile.positive_at_infinity()
            }
            IntensityKind::FiniteGeneric { .. } => false,
        }
    }

    fn shell_density(&self, r: f64) -> f64 {
        let d = self.d();
        sphere_area(d) * r.powi(d as i32 - 1) * self.radial_density(r)
    }

    /// μ(B(0, R)) for R ∈ (0, ∞].
    pub fn mass(&self, radius: f64) -> Result<Mass> {
        ensure(radius >= 0.0, || format!("negative radius {radius}"))?;
        if self.continuous_mass_diverges(radius) {
            return Ok(Mass::Infinite);
        }
        let atoms: f64 = self.atoms().iter().filter(|a| norm(&a.position) <= radius).map(|a| a.weight).sum();
        let d = self.dim.as_f64();
        let s = sphere_area(self.d());
        let cont = match &self.kind {
            IntensityKind::PowerLawSmoothed { gamma } if *gamma > d => {
                let (a, b) = (d / gamma, 1.0 - d / gamma);
                let full = s * PI / (gamma * (PI * a).sin());
                if radius.is_infinite() {
                    full
                } else {
                    // w = R^γ/(1+R^γ); near w = 1 use the complement I_{1−w}(b, a)
                    let rg = radius.powf(*gamma);
                    let w = rg / (1.0 + rg);
                    if w < 0.5 {
                        s / gamma * beta(a, b) * beta_reg(a, b, w)
                    } else {
                        full - s / gamma * beta(a, b) * beta_reg(b, a, 1.0 / (1.0 + rg))
                    }
                }
            }
            IntensityKind::PowerLawSmoothed { gamma } if *gamma == d => s / d * radius.powf(d).ln_1p(),
            IntensityKind::PurePower { gamma } => s * radius.powf(d - gamma) / (d - gamma),
            IntensityKind::FiniteGeneric { density: FiniteDensity::Gaussian { total, width } } => {
                if radius.is_infinite() {
                    *total
                } else {
                    total * gamma_lr(d / 2.0, radius * radius / (2.0 * width * width))
                }
            }
            IntensityKind::FiniteGeneric { density: FiniteDensity::Atoms { .. } } => 0.0,
            _ => self.shell_mass(0.0, radius)?,
        };
        Ok(Mass::Finite(atoms + cont))
    }

    /// Continuous-part mass of the annulus a < |x| ≤ b by quadrature.
    pub fn shell_mass(&self, a: f64, b: f64) -> Result<f64> {
        ensure(0.0 <= a && a <= b, || format!("annulus ({a}, {b}]"))?;
        if !self.has_continuous_part() || a == b {
            return Ok(0.0);
        }
        let f = |r: f64| self.shell_density(r);
        if b.is_infinite() {
            let big = a.max(1.0);
            let inner = self.shell_mass(a, big)?;
            let kinks = self.kinks(big, f64::INFINITY);
            let mut lo = big;
            let mut total = inner;
            for k in kinks.into_iter().take(64) {
                total += integrate(f, lo, k, MASS_TOL)?.value;
                lo = k;
            }
            return Ok(total + exp_sinh(f, lo, lo, MASS_TOL)?.value);
        }
        let kinks = self.kinks(a, b);
        if a == 0.0 {
            return Ok(radial_integral(f, b, &kinks, MASS_TOL)?.value);
        }
        let mut lb: Vec<f64> = std::iter::once(a.ln())
            .chain(kinks.iter().map(|k| k.ln()))
            .chain(std::iter::once(b.ln()))
            .collect();
        let n = ((b / a).ln().ceil() as usize).max(1);
        lb.extend((1..n).map(|k| a.ln() + k as f64 * (b / a).ln() / n as f64));
        lb.sort_by(f64::total_cmp);
        lb.dedup();
        Ok(integrate_breaks(|u| f(u.exp()) * u.exp(), &lb, MASS_TOL)?.value)
    }

    /// Precomputed sampler for configurations restricted to B(0, R).
    pub fn sampler(&self, radius: f64) -> Result<PointSampler> {
        let total = self.mass(radius)?;
        if !total.is_finite() {
            return Err(Error::InfiniteMass { radius });
        }
        let atoms: Vec<Atom> =
            self.atoms().iter().filter(|a| norm(&a.position) <= radius && a.weight > 0.0).copied().collect();
        let radial = match &self.kind {
            IntensityKind::FiniteGeneric { density: FiniteDensity::Gaussian { total, width } } => {
                let inside = total * if radius.is_infinite() { 1.0 } else { gamma_lr(self.dim.as_f64() / 2.0, radius * radius / (2.0 * width * width)) };
                Radial::Gaussian { mass: inside, width: *width }
            }
            IntensityKind::FiniteGeneric { density: FiniteDensity::Atoms { .. } } => Radial::None,
            _ => {
                ensure(radius.is_finite(), || "tabulated radial sampling needs a finite radius".into())?;
                Radial::Table(RadialCdf::build(self, radius)?)
            }
        };
        Ok(PointSampler { dim: self.d(), radius, atoms, radial })
    }

    /// E⟨N_t, φ⟩ = ∫ 𝒯_tφ dμ.
    pub fn mean_functional(&self, law: &StableLaw, t: f64, phi: &TestFunction) -> Result<f64> {
        ensure(t >= 0.0, || format!("negative time {t}"))?;
        ensure(law.dim() == self.dim, || "law and intensity live in different dimensions".into())?;
        let spread = t.powf(1.0 / law.alpha());
        self.integrate_against(phi, spread, 0.0, |x| semigroup_apply(law, t, phi, x))
    }

    /// ∫_{|x| > from} f dμ (all of μ when `from` = 0) for f concentrated
    /// where φ is, spread by the motion over length `spread`, with at most
    /// stable-like tails.
    pub fn integrate_against<F: Fn(&Point) -> Result<f64>>(
        &self,
        phi: &TestFunction,
        spread: f64,
        from: f64,
        f: F,
    ) -> Result<f64> {
        if phi.is_zero() {
            return Ok(0.0);
        }
        let mut total = 0.0;
        for a in self.atoms() {
            if from == 0.0 || norm(&a.position) > from {
                total += a.weight * f(&a.position)?;
            }
        }
        if !self.has_continuous_part() {
            return Ok(total);
        }
        let d = self.d();
        ensure(d == 1 || phi.is_radial(), || "μ-integrals in d ≥ 2 need a radial test function".into())?;
        let mut err = None;
        let mut g = |r: f64| -> f64 {
            let v = if d == 1 {
                f(&[r, 0.0, 0.0]).and_then(|a| Ok(a + f(&[-r, 0.0, 0.0])?))
            } else {
                f(&[r, 0.0, 0.0]).map(|a| if a == 0.0 { 0.0 } else { a * sphere_area(d) * r.powi(d as i32 - 1) })
            };
            match v {
                Ok(0.0) => 0.0,
                Ok(v) => v * self.radial_density(r),
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            }
        };
        let mut breaks: Vec<f64> = Vec::new();
        for b in phi.bumps() {
            let c = norm(&b.center);
            breaks.extend([c - 3.0 * b.width, c, c + 3.0 * b.width, c + 12.0 * b.width]);
        }
        breaks.extend([0.5 * spread, 2.0 * spread, 8.0 * spread]);
        let reach = phi.support_radius() + 20.0 * spread;
        breaks.extend(self.kinks(0.0, reach));
        breaks.retain(|&b| b > from && b < reach);
        // absolute floor relative to the natural size ∫φ·density near φ
        let r_typ = phi.support_radius().max(1.0);
        let floor = 1e-13 * phi.integral(self.dim) * self.radial_density(r_typ).max(self.radial_density(1.0));
        let tol = Tol::new(floor, 1e-9);
        let body = if from == 0.0 {
            radial_integral(&mut g, reach, &breaks, tol)?.value
        } else if from < reach {
            let mut lb: Vec<f64> = std::iter::once(from).chain(breaks).chain(std::iter::once(reach)).map(f64::ln).collect();
            let n = ((reach / from).ln().ceil() as usize).max(1);
            lb.extend((1..n).map(|k| from.ln() + k as f64 * (reach / from).ln() / n as f64));
            lb.sort_by(f64::total_cmp);
            lb.dedup();
            integrate_breaks(|u| g(u.exp()) * u.exp(), &lb, tol)?.value
        } else {
            0.0
        };
        let tail = self.tail_integral(&mut g, reach.max(from), tol)?;
        if let Some(e) = err {
            return Err(e);
        }
        Ok(total + body + tail)
    }

    fn tail_integral<G: FnMut(f64) -> f64>(&self, g: &mut G, from: f64, tol: Tol) -> Result<f64> {
        let kinks = self.kinks(from, f64::INFINITY);
        let mut lo = from;
        let mut total = 0.0;
        for k in kinks.into_iter().take(64) {
            total += integrate(&mut *g, lo, k, tol)?.value;
            lo = k;
        }
        Ok(total + exp_sinh(&mut *g, lo, lo, tol)?.value)
    }
}

/// Tabulated inverse CDF of the radial law on [0, R].
#[derive(Debug, Clone)]
struct RadialCdf {
    knots: Vec<f64>,
    cdf: Vec<f64>,
}

const CDF_KNOTS: usize = 2048;

impl RadialCdf {
    fn build(mu: &IntensityMeasure, radius: f64) -> Result<Self> {
        let r_min = radius * 1e-9;
        let ratio = (radius / r_min).ln() / (CDF_KNOTS - 2) as f64;
        let mut knots: Vec<f64> = std::iter::once(0.0)
            .chain((0..CDF_KNOTS - 1).map(|i| r_min * (ratio * i as f64).exp()))
            .chain(mu.kinks(0.0, radius))
            .collect();
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        *knots.last_mut().unwrap() = radius;
        let f = |r: f64| mu.shell_density(r);
        let tol = Tol::new(1e-300, 1e-11);
        let mut cdf = Vec::with_capacity(knots.len());
        cdf.push(0.0);
        let mut acc = 0.0;
        for (i, w) in knots.windows(2).enumerate() {
            let cell = if i == 0 { tanh_sinh(f, w[0], w[1], tol)? } else { integrate(f, w[0], w[1], tol)? };
            acc += cell.value;
            cdf.push(acc);
        }
        Ok(Self { knots, cdf })
    }

    fn total(&self) -> f64 {
        *self.cdf.last().unwrap()
    }

    #[inline]
    fn invert(&self, u: f64) -> f64 {
        let target = u * self.total();
        let i = self.cdf.partition_point(|&c| c <= target).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let (r0, r1) = (self.knots[i - 1], self.knots[i]);
        if c1 > c0 {
            r0 + (r1 - r0) * ((target - c0) / (c1 - c0)).clamp(0.0, 1.0)
        } else {
            r0
        }
    }
}

#[derive(Debug, Clone)]
enum Radial {
    None,
    Gaussian { mass: f64, width: f64 },
    Table(RadialCdf),
}

#[derive(Debug, Clone)]
pub struct PointSampler {
    dim: usize,
    radius: f64,
    atoms: Vec<Atom>,
    radial: Radial,
}

#[inline]
fn direction<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Point {
    match d {
        1 => [if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0, 0.0],
        2 => {
            let th = 2.0 * PI * rng.random::<f64>();
            [th.cos(), th.sin(), 0.0]
        }
        _ => loop {
            let v: Point = [StandardNormal.sample(rng), StandardNormal.sample(rng), StandardNormal.sample(rng)];
            let n = norm(&v);
            if n > 0.0 {
                break [v[0] / n, v[1] / n, v[2] / n];
            }
        },
    }
}

fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).map(|p| p.sample(rng) as usize).unwrap_or(0)
}

impl PointSampler {
    pub fn mean_count(&self) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.weight).sum();
        atoms
            + match &self.radial {
                Radial::None => 0.0,
                Radial::Gaussian { mass, .. } => *mass,
                Radial::Table(t) => t.total(),
            }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// One Poisson configuration: atoms first (with Poisson multiplicities),
    /// then the continuous part.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Point> {
        let mut points = Vec::new();
        for a in &self.atoms {
            let k = poisson(a.weight, rng);
            points.extend(std::iter::repeat_n(a.position, k));
        }
        match &self.radial {
            Radial::None => {}
            Radial::Gaussian { mass, width } => {
                let n = poisson(*mass, rng);
                for _ in 0..n {
                    loop {
                        let mut x = ORIGIN;
                        for xi in x.iter_mut().take(self.dim) {
                            let z: f64 = StandardNormal.sample(rng);
                            *xi = width * z;
                        }
                        if norm(&x) <= self.radius {
                            points.push(x);
                            break;
                        }
                    }
                }
            }
            Radial::Table(t) => {
                let n = poisson(t.total(), rng);
                for _ in 0..n {
                    let r = t.invert(rng.random::<f64>());
                    let u = direction(self.dim, rng);
                    points.push([r * u[0], r * u[1], r * u[2]]);
                }
            }
        }
        points
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointConfiguration {
    pub points: Vec<Point>,
    pub truncation_radius: f64,
    pub stream: StreamId,
}

pub fn sample_points(mu: &IntensityMeasure, radius: f64, stream: StreamId) -> Result<PointConfiguration> {
    let sampler = mu.sampler(radius)?;
    let points = sampler.sample(&mut stream.rng());
    Ok(PointConfiguration { points, truncation_radius: radius, stream })
}

/// Ball averages R^{−d}∫_{|x|≤R} h along a radius ladder. `converged` is a
/// numerical stabilization flag, not a proof that the limit exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CesaroEstimate {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub last: f64,
    pub converged: bool,
}

pub const CESARO_TOL: f64 = 1e-3;
const CESARO_WINDOW: usize = 3;

fn cesaro_from(radii: &[f64], values: Vec<f64>) -> CesaroEstimate {
    let converged = values.len() > CESARO_WINDOW
        && values[values.len() - CESARO_WINDOW - 1..]
            .windows(2)
            .all(|w| (w[1] - w[0]).abs() <= CESARO_TOL * w[1].abs().max(f64::MIN_POSITIVE));
    CesaroEstimate { radii: radii.to_vec(), last: values.last().copied().unwrap_or(f64::NAN), values, converged }
}

pub fn geometric_ladder(r0: f64, r_max: f64, factor: f64) -> Vec<f64> {
    let mut v = Vec::new();
    let mut r = r0;
    while r <= r_max * (1.0 + 1e-12) {
        v.push(r);
        r *= factor;
    }
    v
}

/// Ball averages of a radial function h evaluated pointwise, by quadrature.
pub fn cesaro_limit<H: Fn(f64) -> f64>(h: H, d: Dim, radii: &[f64]) -> Result<CesaroEstimate> {
    let s = sphere_area(d.get());
    let k = d.get() as i32 - 1;
    let tol = Tol::new(1e-300, 1e-10);
    let mut values = Vec::with_capacity(radii.len());
    let mut acc = 0.0;
    let mut lo = 0.0;
    for &r in radii {
        ensure(r > lo, || "radius ladder must increase".into())?;
        acc += if lo == 0.0 {
            radial_integral(|x| s * x.powi(k) * h(x), r, &[], tol)?.value
        } else {
            let n = ((r / lo).ln().ceil() as usize * 4).max(1);
            let lb: Vec<f64> = (0..=n).map(|i| lo.ln() + i as f64 * (r / lo).ln() / n as f64).collect();
            integrate_breaks(|u| s * u.exp().powi(k + 1) * h(u.exp()), &lb, tol)?.value
        };
        lo = r;
        values.push(acc / r.powi(d.get() as i32));
    }
    Ok(cesaro_from(radii, values))
}

/// Ball averages of a piecewise-constant profile, exactly.
pub fn cesaro_profile(profile: &Profile, d: Dim, radii: &[f64]) -> CesaroEstimate {
    let values = radii.iter().map(|&r| profile.ball_integral(d, r) / r.powi(d.get() as i32)).collect();
    cesaro_from(radii, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smoothed(gamma: f64, d: usize) -> IntensityMeasure {
        IntensityMeasure::power_law(d, gamma).unwrap()
    }

    #[test]
    fn mass_examples() {
        let m = smoothed(0.5, 1).mass(4.0).unwrap().value().unwrap();
        assert!((m - 4.0 * (2.0 - 3f64.ln())).abs() < 1e-10);
        let m = smoothed(2.0, 1).mass(f64::INFINITY).unwrap().value().unwrap();
        assert!((m - PI).abs() < 1e-13);
        let pure = IntensityMeasure::new(1, IntensityKind::PurePower { gamma: 0.5 }).unwrap();
        assert_eq!(pure.mass(f64::INFINITY).unwrap(), Mass::Infinite);
        assert_eq!(smoothed(1.0, 1).mass(f64::INFINITY).unwrap(), Mass::Infinite);
    }

    #[test]
    fn closed_forms_match_quadrature() {
        for (g, d, r) in [(2.0, 1, 3.0), (2.5, 2, 40.0), (3.5, 3, 1e3), (1.0, 1, 1e5), (3.0, 3, 7.0)] {
            let mu = smoothed(g, d);
            let closed = mu.mass(r).unwrap().value().unwrap();
            let quad = mu.shell_mass(0.0, r).unwrap();
            assert!((closed - quad).abs() < 1e-10 * closed, "γ={g} d={d}: {closed} vs {quad}");
        }
        let mu = smoothed(2.5, 1);
        let closed = mu.mass(f64::INFINITY).unwrap().value().unwrap();
        let quad = mu.shell_mass(0.0, f64::INFINITY).unwrap();
        assert!((closed - quad).abs() < 1e-6 * closed);
    }

    #[test]
    fn mixed_profile_mass() {
        let mu = IntensityMeasure::new(
            1,
            IntensityKind::GeneralMixed {
                atoms: vec![Atom { position: [2.0, 0.0, 0.0], weight: 0.5 }],
                profile: Profile::Annuli { edges: vec![1.0], levels: vec![0.0, 2.0] },
                gamma: 2.0,
            },
        )
        .unwrap();
        // 0.5 + 2·2∫₁^∞ dx/(1+x²) = 0.5 + 4·π/4
        let m = mu.mass(f64::INFINITY).unwrap().value().unwrap();
        assert!((m - (0.5 + PI)).abs() < 1e-9, "{m}");
        let m1 = mu.mass(1.5).unwrap().value().unwrap();
        assert!((m1 - 4.0 * (1.5f64.atan() - 1f64.atan())).abs() < 1e-10);
    }

    #[test]
    fn profile_alternating_levels() {
        let h = Profile::Alternating;
        assert_eq!(h.eval(3.0), 1.0);
        assert_eq!(h.eval(5.0), 1.0); // (2², 3³]: n = 2 even
        assert_eq!(h.eval(100.0), 2.0); // (3³, 4⁴]: n = 3 odd
        assert_eq!(h.eval(1000.0), 1.0);
    }

    #[test]
    fn cesaro_examples() {
        let d1 = Dim::new(1).unwrap();
        let ladder = geometric_ladder(1.0, 1e6, 4.0);
        let c = cesaro_limit(|_| 1.0, d1, &ladder).unwrap();
        assert!((c.last - 2.0).abs() < 1e-9 && c.converged);
        let c = cesaro_profile(&Profile::Constant { level: 0.7 }, d1, &ladder);
        assert!((c.last - 1.4).abs() < 1e-12 && c.converged);
        let c = cesaro_profile(&Profile::Alternating, d1, &geometric_ladder(1.0, 1e12, 2.0));
        assert!(!c.converged);
        // generic quadrature path agrees with the exact one on a jump profile
        let h = Profile::Annuli { edges: vec![2.0, 5.0], levels: vec![1.0, 3.0, 0.5] };
        let a = cesaro_limit(|r| h.eval(r), d1, &ladder).unwrap();
        let b = cesaro_profile(&h, d1, &ladder);
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-8 * y);
        }
    }

    #[test]
    fn atomic_configuration() {
        let mu = IntensityMeasure::new(
            1,
            IntensityKind::FiniteGeneric { density: FiniteDensity::Atoms { atoms: vec![Atom { position: ORIGIN, weight: 5.0 }] } },
        )
        .unwrap();
        let conf = sample_points(&mu, f64::INFINITY, StreamId::new(1, 0)).unwrap();
        assert!(conf.points.iter().all(|p| *p == ORIGIN));
    }

    #[test]
    fn sampling_infinite_mass_is_an_error() {
        let mu = IntensityMeasure::new(1, IntensityKind::PurePower { gamma: 1.5 }).unwrap();
        assert!(matches!(mu.sampler(10.0), Err(Error::InfiniteMass { .. })));
    }

    #[test]
    fn mean_functional_at_zero_time() {
        let mu = smoothed(2.0, 1);
        let law = StableLaw::new(1.5, 1).unwrap();
        let phi = TestFunction::gaussian([0.5, 0.0, 0.0], 0.6, 1.0).unwrap();
        let got = mu.mean_functional(&law, 0.0, &phi).unwrap();
        let want = integrate_breaks(|x| phi.eval(&[x, 0.0, 0.0]) / (1.0 + x * x), &[-10.0, 0.5, 10.0], Tol::new(1e-15, 1e-13))
            .unwrap()
            .value;
        assert!((got - want).abs() < 1e-9 * want);
        assert_eq!(mu.mean_functional(&law, 3.0, &TestFunction::zero()).unwrap(), 0.0);
    }

    #[test]
    fn mean_functional_lebesgue_is_invariant() {
        // Lebesgue measure is invariant: ∫𝒯_tφ dx = ∫φ
        let mu = IntensityMeasure::new(
            1,
            IntensityKind::GeneralMixed { atoms: vec![], profile: Profile::Constant { level: 1.0 }, gamma: 1e-300 },
        );
        // γ must be positive but tiny γ makes 1/(1+r^γ) ≈ 1/2
        let mu = mu.unwrap();
        let law = StableLaw::new(1.5, 1).unwrap();
        let phi = TestFunction::centered(0.5).unwrap();
        let v = mu.mean_functional(&law, 2.0, &phi).unwrap();
        assert!((v - 0.5 * phi.integral(mu.dim)).abs() < 1e-7, "{v}");
    }
}
