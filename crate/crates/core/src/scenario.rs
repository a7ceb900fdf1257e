//! Scenario configuration (a single JSON document) and the verification
//! pipeline built on it: classify, prepare, simulate, compare.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intensity::{Atom, FiniteDensity, IntensityKind, IntensityMeasure, Profile};
use crate::limits::{compound_laplace, local_time_mean, potential_pairing, ConstantK, KMethod, LimitLaw};
use crate::occupation::{fluctuation_path, occupation_path, truncation_radius, Centering, PathKind, Simulation};
use crate::oracle::{total_occupation, total_occupation_beyond, variance_exact, IncrementWindow};
use crate::phi::{Bump, ORIGIN};
use crate::regime::{classify, MuClass, Rational, RegimeId, RegimeSpec};
use crate::rng::StreamId;
use crate::special::{mittag_leffler_neg, stable_density_at_zero};
use crate::stats::{
    compare_report, correlation_of, empirical_corr, empirical_laplace, normality_test, run_ensemble, Comparison, Ensemble,
    Provenance, TolerancePolicy, VerificationReport,
};
use crate::{StableLaw, TestFunction};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum IntensityConfig {
    PowerLawSmoothed { gamma: Rational },
    PurePower { gamma: Rational },
    GeneralMixed { gamma: Rational, atoms: Vec<Atom>, profile: Profile },
    Finite { density: FiniteDensity },
}

impl IntensityConfig {
    pub fn mu_class(&self) -> MuClass {
        match self {
            IntensityConfig::PowerLawSmoothed { gamma } | IntensityConfig::PurePower { gamma } | IntensityConfig::GeneralMixed { gamma, .. } => {
                MuClass::PowerLaw { gamma: *gamma }
            }
            IntensityConfig::Finite { .. } => MuClass::Finite,
        }
    }

    pub fn measure(&self, d: usize) -> Result<IntensityMeasure> {
        let kind = match self {
            IntensityConfig::PowerLawSmoothed { gamma } => IntensityKind::PowerLawSmoothed { gamma: gamma.to_f64() },
            IntensityConfig::PurePower { gamma } => IntensityKind::PurePower { gamma: gamma.to_f64() },
            IntensityConfig::GeneralMixed { gamma, atoms, profile } => {
                IntensityKind::GeneralMixed { atoms: atoms.clone(), profile: profile.clone(), gamma: gamma.to_f64() }
            }
            IntensityConfig::Finite { density } => IntensityKind::FiniteGeneric { density: density.clone() },
        };
        IntensityMeasure::new(d, kind)
    }
}

fn default_z() -> f64 {
    3.0
}
fn default_correlation() -> f64 {
    0.07
}
fn default_level() -> Option<f64> {
    Some(0.01)
}
fn default_thetas() -> Vec<f64> {
    vec![0.25, 0.5, 1.0, 2.0]
}

/// Per-scenario tolerances. Finite-T convergence rates differ by regime
/// (power law vs logarithmic), so these live in the configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// standard errors allowed for Monte Carlo comparisons
    #[serde(default = "default_z")]
    pub z: f64,
    /// absolute allowance on correlation entries against the limit
    #[serde(default = "default_correlation")]
    pub correlation: f64,
    /// relative allowance on top of z·SE for slowly converging comparisons
    #[serde(default)]
    pub relative: f64,
    /// Anderson–Darling level at the last grid time; `null` skips the test
    #[serde(default = "default_level")]
    pub normality_level: Option<f64>,
    #[serde(default = "default_thetas")]
    pub laplace_thetas: Vec<f64>,
    /// increment windows checked against the exact second-moment oracle (d = 1)
    #[serde(default)]
    pub variance_windows: Vec<IncrementWindow>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            z: default_z(),
            correlation: default_correlation(),
            relative: 0.0,
            normality_level: default_level(),
            laplace_thetas: default_thetas(),
            variance_windows: vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub id: String,
    pub d: u32,
    pub alpha: Rational,
    pub intensity: IntensityConfig,
    pub phi: Vec<Bump>,
    /// T
    pub horizon: f64,
    /// times in [0, 1]
    pub grid: Vec<f64>,
    pub dt: f64,
    /// allowed truncation bias relative to the norming F_T
    pub truncation: f64,
    pub replicas: u64,
    pub seed: u64,
    /// defaults to the regime's natural path kind
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<PathKind>,
    #[serde(default)]
    pub tolerance: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

fn config_err(msg: String) -> Error {
    Error::Config(msg)
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: ScenarioConfig = serde_json::from_str(text).map_err(|e| config_err(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configs serialize")
    }

    /// Schema-level checks; regime admissibility is left to `classify`.
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, msg: &dyn Fn() -> String| if ok { Ok(()) } else { Err(config_err(msg())) };
        check(!self.id.is_empty() && self.id.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)), &|| {
            format!("scenario id {:?} must be non-empty [A-Za-z0-9._-]", self.id)
        })?;
        check(!self.phi.is_empty(), &|| "φ needs at least one bump".into())?;
        for b in &self.phi {
            check(b.width > 0.0 && b.width.is_finite() && b.amplitude > 0.0 && b.amplitude.is_finite(), &|| {
                format!("bump width {} and amplitude {} must be positive", b.width, b.amplitude)
            })?;
            check(b.center.iter().skip(self.d as usize).all(|&c| c == 0.0), &|| "bump centre has coordinates beyond d".into())?;
        }
        check(self.horizon > 1.0 && self.horizon.is_finite(), &|| format!("horizon {} must exceed 1", self.horizon))?;
        check(!self.grid.is_empty(), &|| "empty grid".into())?;
        check(self.grid.windows(2).all(|w| w[0] < w[1]), &|| "grid must be strictly increasing".into())?;
        check(self.grid[0] >= 0.0 && *self.grid.last().unwrap() <= 1.0, &|| "grid must lie in [0, 1]".into())?;
        check(self.dt > 0.0 && self.dt.is_finite(), &|| format!("dt = {}", self.dt))?;
        for &t in &self.grid {
            let n = (self.horizon * t / self.dt).round();
            check((n * self.dt - self.horizon * t).abs() <= 1e-9 * self.horizon, &|| {
                format!("dt = {} does not divide T·t = {}", self.dt, self.horizon * t)
            })?;
        }
        check(self.truncation > 0.0 && self.truncation.is_finite(), &|| format!("truncation budget {}", self.truncation))?;
        let tol = &self.tolerance;
        check(tol.z >= 0.0 && tol.correlation >= 0.0 && tol.relative >= 0.0, &|| "tolerances must be nonnegative".into())?;
        check(tol.normality_level.map_or(true, |l| l > 0.0 && l < 1.0), &|| format!("normality level {:?}", tol.normality_level))?;
        check(tol.laplace_thetas.iter().all(|&t| t >= 0.0), &|| "Laplace θ must be ≥ 0".into())?;
        for w in &tol.variance_windows {
            check(self.grid.contains(&w.t2()) && (w.t1() == 0.0 || self.grid.contains(&w.t1())), &|| {
                format!("variance window ({}, {}) is not on the grid", w.t1(), w.t2())
            })?;
        }
        Ok(())
    }

    pub fn test_function(&self) -> Result<TestFunction> {
        self.phi.iter().try_fold(TestFunction::zero(), |acc, b| Ok(acc.plus(&TestFunction::gaussian(b.center, b.width, b.amplitude)?)))
    }

    pub fn classify(&self) -> Result<RegimeSpec> {
        classify(self.intensity.mu_class(), self.d, self.alpha)
    }
}

/// The limit object of a regime, with K factored out; `None` for regime B.
pub fn limit_law(spec: &RegimeSpec, mu: &IntensityMeasure, law: &StableLaw, phi: &TestFunction) -> Result<Option<LimitLaw>> {
    let (alpha, d) = (law.alpha(), law.d());
    let gamma = || spec.gamma().map(Rational::to_f64).ok_or_else(|| Error::Inadmissible("regime needs a power-law γ".into()));
    let mass = || mu.mass(f64::INFINITY).map(|m| m.value().unwrap_or(f64::INFINITY));
    Ok(Some(match spec.id {
        RegimeId::G1 => LimitLaw::Xi { gamma: gamma()?, d, alpha },
        RegimeId::G4 => LimitLaw::Xi { gamma: d as f64, d, alpha },
        RegimeId::G2 => LimitLaw::BetaWiener { gamma: gamma()?, alpha },
        RegimeId::G3 => LimitLaw::PotentialWiener { gamma: gamma()?, alpha, pairing: potential_pairing(law, phi, phi)? },
        RegimeId::C1 => LimitLaw::PotentialConstant { pairing: potential_pairing(law, phi, phi)? },
        RegimeId::C2 => LimitLaw::StandardNormalConstant,
        RegimeId::F1 => LimitLaw::CompoundLocalTime { mass: mass()?, alpha },
        RegimeId::F2 => LimitLaw::CompoundExponential { mass: mass()? },
        RegimeId::B => return Ok(None),
    }))
}

fn closed_form_k(spec: &RegimeSpec, law: &StableLaw) -> Option<ConstantK> {
    let k = match spec.id {
        RegimeId::F1 => crate::limits::local_time_constant(law.alpha()),
        RegimeId::F2 => stable_density_at_zero(law.alpha(), law.d()),
        _ => return None,
    };
    Some(ConstantK { regime: spec.id, k, method: KMethod::ClosedForm, k_squared: [k * k; 2] })
}

#[derive(Debug, Clone)]
enum Pipeline {
    Simulate { sim: Simulation, centering: Option<Centering>, kind: PathKind, norming: f64, radius: f64 },
    /// regime B: no norming; the total occupation is finite
    TotalOccupation,
}

/// A classified scenario with everything computed once per run: the
/// norming, centering cache, truncation radius and limit law.
#[derive(Debug, Clone)]
pub struct PreparedScenario {
    pub config: ScenarioConfig,
    pub regime: RegimeSpec,
    pub mu: IntensityMeasure,
    pub law: StableLaw,
    pub phi: TestFunction,
    pub limit: Option<LimitLaw>,
    pub constant: Option<ConstantK>,
    pipeline: Pipeline,
}

impl PreparedScenario {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let regime = config.classify()?;
        let d = config.d as usize;
        let mu = config.intensity.measure(d)?;
        let law = StableLaw::new(config.alpha.to_f64(), d)?;
        let phi = config.test_function()?;
        let limit = limit_law(&regime, &mu, &law, &phi)?;
        let constant = closed_form_k(&regime, &law);
        let pipeline = if regime.id == RegimeId::B {
            Pipeline::TotalOccupation
        } else {
            let natural = if regime.id.is_finite_mass() { PathKind::Occupation } else { PathKind::Fluctuation };
            let kind = config.kind.unwrap_or(natural);
            match (kind, natural) {
                (PathKind::SinglePath, PathKind::Occupation) | (PathKind::Occupation, PathKind::Occupation) => {}
                (PathKind::Fluctuation, PathKind::Fluctuation) => {}
                _ => return Err(Error::Config(format!("path kind {kind:?} does not apply to regime {}", regime.id))),
            }
            let norming = regime.norming(config.horizon)?;
            let radius = if kind == PathKind::SinglePath || mu.mass(f64::INFINITY)?.is_finite() {
                f64::INFINITY
            } else {
                truncation_radius(&mu, &law, config.horizon, &phi, config.truncation * norming)?
            };
            let sim = Simulation::new(&mu, &law, config.horizon, vec![phi.clone()], config.grid.clone(), config.dt, radius)?;
            let centering = match kind {
                PathKind::Fluctuation => Some(Centering::compute(&mu, &law, config.horizon, &phi, &config.grid)?),
                _ => None,
            };
            Pipeline::Simulate { sim, centering, kind, norming, radius }
        };
        Ok(Self { config, regime, mu, law, phi, limit, constant, pipeline })
    }

    pub fn kind(&self) -> Option<PathKind> {
        match &self.pipeline {
            Pipeline::Simulate { kind, .. } => Some(*kind),
            Pipeline::TotalOccupation => None,
        }
    }

    pub fn norming(&self) -> Option<f64> {
        match &self.pipeline {
            Pipeline::Simulate { norming, .. } => Some(*norming),
            Pipeline::TotalOccupation => None,
        }
    }

    /// Truncation radius of the initial configuration (∞ for finite μ).
    pub fn radius(&self) -> Option<f64> {
        match &self.pipeline {
            Pipeline::Simulate { radius, .. } => Some(*radius),
            Pipeline::TotalOccupation => None,
        }
    }

    pub fn expected_particles(&self) -> Option<f64> {
        match &self.pipeline {
            Pipeline::Simulate { sim, kind, .. } => Some(if *kind == PathKind::SinglePath { 1.0 } else { sim.expected_particles() }),
            Pipeline::TotalOccupation => None,
        }
    }

    /// The rescaled path of replica `i`.
    pub fn replica(&self, i: u64) -> Result<Vec<f64>> {
        let Pipeline::Simulate { sim, centering, kind, norming, .. } = &self.pipeline else {
            return Err(Error::NoNorming("B"));
        };
        let (grid, t) = (&self.config.grid, self.config.horizon);
        let stream = StreamId::new(self.config.seed, i);
        let path = match kind {
            PathKind::Fluctuation => {
                let raw = sim.run(stream);
                fluctuation_path(&raw.values[0], grid, t, centering.as_ref().expect("fluctuations carry a centering"), *norming)?
            }
            PathKind::Occupation => occupation_path(&sim.run(stream).values[0], grid, t, Some(&self.mu), *norming, *kind)?,
            PathKind::SinglePath => {
                let raw = sim.run_from(ORIGIN, &mut stream.rng());
                occupation_path(&raw.values[0], grid, t, None, *norming, *kind)?
            }
        };
        Ok(path.values)
    }

    /// Runs the configured number of replicas.
    pub fn simulate(&self) -> Result<Ensemble> {
        self.simulate_with(self.config.replicas)
    }

    pub fn simulate_with(&self, replicas: u64) -> Result<Ensemble> {
        run_ensemble(&self.config.grid, replicas, self.config.seed, |i| self.replica(i))
    }

    /// Full pipeline: simulate (except in regime B) and compare.
    pub fn run(&self) -> Result<(Option<Ensemble>, VerificationReport)> {
        match self.pipeline {
            Pipeline::TotalOccupation => Ok((None, self.verify(None)?)),
            Pipeline::Simulate { .. } => {
                let e = self.simulate()?;
                let r = self.verify(Some(&e))?;
                Ok((Some(e), r))
            }
        }
    }

    pub fn verify(&self, ensemble: Option<&Ensemble>) -> Result<VerificationReport> {
        let mut out = Vec::new();
        let replicas = match (&self.pipeline, ensemble) {
            (Pipeline::TotalOccupation, _) => {
                self.total_occupation_checks(&mut out)?;
                0
            }
            (Pipeline::Simulate { kind, .. }, Some(e)) => {
                match kind {
                    PathKind::Fluctuation => self.fluctuation_checks(e, &mut out)?,
                    PathKind::Occupation | PathKind::SinglePath => self.occupation_checks(e, *kind, &mut out)?,
                }
                e.summary.replicas()
            }
            (Pipeline::Simulate { .. }, None) => return Err(Error::InvalidParameter("verification needs an ensemble".into())),
        };
        Ok(compare_report(&self.config.id, self.regime.id.as_str(), self.config.seed, replicas, out))
    }

    /// Plot-ready grid means: `scenario,regime,t,value,se`.
    pub fn summary_csv(&self, e: &Ensemble) -> String {
        let mut out = String::from("scenario,regime,t,value,se\n");
        for ((t, m), se) in e.summary.grid.iter().zip(e.summary.means()).zip(e.summary.mean_se()) {
            out += &format!("{},{},{t},{m},{se}\n", self.config.id, self.regime.id);
        }
        out
    }

    /// Every replica path: `replica,t,value`.
    pub fn paths_csv(&self, e: &Ensemble) -> String {
        let mut out = String::from("replica,t,value\n");
        for (i, p) in &e.paths {
            for (t, v) in e.summary.grid.iter().zip(p) {
                out += &format!("{i},{t},{v}\n");
            }
        }
        out
    }

    /// Empirical correlation with jackknife errors next to the limit's:
    /// `t,s,empirical,se,limit` (limit empty for non-Gaussian laws).
    pub fn correlation_csv(&self, e: &Ensemble) -> Result<String> {
        let grid = &self.config.grid;
        let corr = empirical_corr(&e.summary)?;
        let limit = match self.limit.filter(LimitLaw::is_gaussian) {
            Some(l) => Some(correlation_of(&l.cov_grid(grid)?.matrix).0),
            None => None,
        };
        let mut out = String::from("t,s,empirical,se,limit\n");
        for i in 0..grid.len() {
            for j in 0..grid.len() {
                let lim = limit.as_ref().map(|m| m[(i, j)].to_string()).unwrap_or_default();
                out += &format!("{},{},{},{},{lim}\n", grid[i], grid[j], corr.corr[(i, j)], corr.se[(i, j)]);
            }
        }
        Ok(out)
    }

    fn policy(&self) -> TolerancePolicy {
        TolerancePolicy { z: self.config.tolerance.z, abs: 0.0, rel: self.config.tolerance.relative }
    }

    fn fluctuation_checks(&self, e: &Ensemble, out: &mut Vec<Comparison>) -> Result<()> {
        let grid = &self.config.grid;
        let tol = &self.config.tolerance;
        let summary = &e.summary;
        // exact centering: every grid mean is zero in expectation
        let (means, se) = (summary.means(), summary.mean_se());
        for (i, &t) in grid.iter().enumerate().filter(|(_, &t)| t > 0.0) {
            out.push(Comparison::new(format!("mean[t={t}]"), means[i], 0.0, se[i], TolerancePolicy::z_score(tol.z), Provenance::ClosedForm));
        }
        for w in &tol.variance_windows {
            let c: Vec<f64> = grid.iter().map(|&t| if t == w.t2() { 1.0 } else if t == w.t1() && t > 0.0 { -1.0 } else { 0.0 }).collect();
            let cv = DMatrix::from_column_slice(c.len(), 1, &c);
            let (v, v_se) = summary.jackknife(|m| cv.transpose() * m.covariance() * &cv);
            let exact = variance_exact(&self.mu, &self.law, self.config.horizon, &self.phi, *w, self.norming().unwrap_or(1.0))?;
            let policy = TolerancePolicy { z: tol.z, abs: exact.error, rel: tol.relative };
            out.push(Comparison::new(
                format!("variance[{}, {}]", w.t1(), w.t2()),
                v[(0, 0)],
                exact.value,
                v_se[(0, 0)],
                policy,
                Provenance::Oracle,
            ));
        }
        if let Some(law) = self.limit.filter(LimitLaw::is_gaussian) {
            let idx: Vec<usize> = (0..grid.len()).filter(|&i| grid[i] > 0.0).collect();
            if idx.len() >= 2 {
                let corr = empirical_corr(summary)?;
                let (limit, _) = correlation_of(&law.cov_grid(grid)?.matrix);
                for (a, &i) in idx.iter().enumerate() {
                    for &j in &idx[a + 1..] {
                        out.push(Comparison::new(
                            format!("corr[{}, {}]", grid[i], grid[j]),
                            corr.corr[(i, j)],
                            limit[(i, j)],
                            corr.se[(i, j)],
                            TolerancePolicy::absolute(tol.correlation),
                            Provenance::LimitLaw,
                        ));
                    }
                }
            }
            if let (Some(&last), Some(level)) = (idx.last(), tol.normality_level) {
                if summary.replicas() >= 100 {
                    let t = normality_test(&e.marginal(last), level)?;
                    out.push(Comparison::verdict(
                        format!("normality[t={}]", grid[last]),
                        t.p_value,
                        level,
                        t.passed,
                        Provenance::LimitLaw,
                    ));
                }
            }
        }
        Ok(())
    }

    fn occupation_checks(&self, e: &Ensemble, kind: PathKind, out: &mut Vec<Comparison>) -> Result<()> {
        let grid = &self.config.grid;
        let last = grid.len() - 1;
        let t = grid[last];
        let k = self.constant.map(|c| c.k).ok_or(Error::NoNorming(self.regime.id.as_str()))?;
        let (alpha, phi_int) = (self.law.alpha(), self.phi.integral(self.law.dim()));
        let law = self.limit.ok_or(Error::NoNorming(self.regime.id.as_str()))?;
        // the mean of the limit at t
        let mean = match law {
            LimitLaw::CompoundLocalTime { mass, .. } => mass * k * phi_int * local_time_mean(alpha, t),
            LimitLaw::CompoundExponential { mass } => mass * k * phi_int,
            _ => unreachable!("finite-mass regimes have compound limits"),
        };
        let mean = if kind == PathKind::SinglePath { mean / law_mass(&law) } else { mean };
        let (m, se) = (e.summary.means(), e.summary.mean_se());
        out.push(Comparison::new(format!("mean[t={t}]"), m[last], mean, se[last], self.policy(), Provenance::ClosedForm));
        let samples = e.marginal(last);
        for p in empirical_laplace(&samples, &self.config.tolerance.laplace_thetas)? {
            let expected = match kind {
                PathKind::SinglePath => single_laplace(&law, p.theta, t, phi_int, k)?,
                _ => compound_laplace(&law, p.theta, t, phi_int, k)?,
            };
            out.push(Comparison::new(format!("laplace[θ={}]", p.theta), p.value, expected, p.se, self.policy(), Provenance::LimitLaw));
        }
        Ok(())
    }

    fn total_occupation_checks(&self, out: &mut Vec<Comparison>) -> Result<()> {
        let total = total_occupation(&self.mu, &self.law, &self.phi)?;
        out.push(Comparison::verdict("total_occupation", total, total, total.is_finite() && total > 0.0, Provenance::Oracle));
        // the omitted mass beyond R must vanish as R grows
        let mut prev = total;
        for r in [10.0, 100.0, 1000.0] {
            let tail = total_occupation_beyond(&self.mu, &self.law, &self.phi, r)?;
            out.push(Comparison::verdict(format!("tail_fraction[R={r}]"), tail / total, 0.0, tail >= 0.0 && tail < prev, Provenance::Oracle));
            prev = tail;
        }
        Ok(())
    }
}

fn law_mass(law: &LimitLaw) -> f64 {
    match *law {
        LimitLaw::CompoundLocalTime { mass, .. } | LimitLaw::CompoundExponential { mass } => mass,
        _ => 1.0,
    }
}

/// E exp(−θ·K∫φ·L(t)) for a single particle from the origin.
fn single_laplace(law: &LimitLaw, theta: f64, t: f64, phi_integral: f64, k: f64) -> Result<f64> {
    let s = k * theta * phi_integral;
    match *law {
        LimitLaw::CompoundLocalTime { alpha, .. } => {
            let ap = 1.0 - 1.0 / alpha;
            mittag_leffler_neg(ap, s * t.powf(ap))
        }
        LimitLaw::CompoundExponential { .. } => Ok(1.0 / (1.0 + s)),
        _ => Err(Error::Domain("single-path limits exist for finite-mass regimes".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn g1_json() -> &'static str {
        r#"{
            "id": "g1-small",
            "d": 1,
            "alpha": "3/2",
            "intensity": { "variant": "power_law_smoothed", "gamma": "1/2" },
            "phi": [{ "center": [0, 0, 0], "width": 1, "amplitude": 1 }],
            "horizon": 20,
            "grid": [0.25, 0.5, 0.75, 1],
            "dt": 0.25,
            "truncation": 0.01,
            "replicas": 200,
            "seed": 7,
            "tolerance": { "variance_windows": [[0, 1]] }
        }"#
    }

    #[test]
    fn parse_and_round_trip() {
        let c = ScenarioConfig::from_json(g1_json()).unwrap();
        assert_eq!(c.alpha, "3/2".parse().unwrap());
        assert_eq!(c.tolerance.z, 3.0);
        let again = ScenarioConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn schema_errors_are_config_errors() {
        for bad in [
            g1_json().replace("\"dt\": 0.25", "\"dt\": 0.3"),
            g1_json().replace("\"horizon\": 20", "\"horizon\": 0.5"),
            g1_json().replace("\"seed\": 7", "\"seed\": 7, \"bogus\": 1"),
            g1_json().replace("[[0, 1]]", "[[0, 0.3]]"),
            g1_json().replace("\"3/2\"", "1.5"),
        ] {
            assert!(matches!(ScenarioConfig::from_json(&bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn inadmissible_regime() {
        let c = ScenarioConfig::from_json(&g1_json().replace("\"3/2\"", "\"5/2\"")).unwrap();
        assert!(matches!(PreparedScenario::new(c), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn small_g1_pipeline_is_deterministic() {
        let c = ScenarioConfig::from_json(g1_json()).unwrap();
        let p = PreparedScenario::new(c).unwrap();
        assert_eq!(p.regime.id, RegimeId::G1);
        assert_eq!(p.kind(), Some(PathKind::Fluctuation));
        let (_, a) = p.run().unwrap();
        let (_, b) = p.run().unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.comparisons.iter().any(|c| c.name.starts_with("variance")));
        assert!(a.comparisons.iter().any(|c| c.name.starts_with("corr")));
    }

    #[test]
    fn regime_b_runs_total_occupation_only() {
        let json = g1_json()
            .replace("\"d\": 1", "\"d\": 3")
            .replace("\"3/2\"", "\"1\"")
            .replace("\"1/2\"", "\"2\"")
            .replace(", \"tolerance\": { \"variance_windows\": [[0, 1]] }", "");
        let json = json.replace("\"tolerance\": { \"variance_windows\": [[0, 1]] }", "\"tolerance\": {}");
        let p = PreparedScenario::new(ScenarioConfig::from_json(&json).unwrap()).unwrap();
        assert_eq!(p.regime.id, RegimeId::B);
        let (e, r) = p.run().unwrap();
        assert!(e.is_none());
        assert!(r.passed, "{}", r.to_text());
        assert_eq!(r.replicas, 0);
    }
}
