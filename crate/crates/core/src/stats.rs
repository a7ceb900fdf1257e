//! Replica ensembles and the statistics run on them: exactly mergeable
//! moment summaries, grouped-jackknife standard errors, Anderson–Darling
//! normality, empirical Laplace transforms, and tolerance-checked reports.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::limits::CovGrid;
use crate::special::normal_cdf;

const LIMBS: usize = 35;
/// bit position of 2⁰ in the limb array
const OFFSET: i32 = 1088;
const RADIX: i128 = 1 << 64;

/// Exact sum of f64 values: each addend is split into 64-bit chunks of a
/// fixed-point number spanning the whole double range, so addition is
/// associative and commutative and merges are exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSum {
    limbs: [i128; LIMBS],
}

impl Default for ExactSum {
    fn default() -> Self {
        Self { limbs: [0; LIMBS] }
    }
}

fn ldexp(x: f64, e: i32) -> f64 {
    let (mut x, mut e) = (x, e);
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e)
}

impl ExactSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        assert!(x.is_finite(), "exact sums take finite values, got {x}");
        if x == 0.0 {
            return;
        }
        let bits = x.to_bits();
        let biased = ((bits >> 52) & 0x7ff) as i32;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 { (frac, -1074) } else { (frac | (1u64 << 52), biased - 1075) };
        let p = e + OFFSET;
        let (k, off) = ((p / 64) as usize, p % 64);
        let mut v = (m as i128) << off;
        if x < 0.0 {
            v = -v;
        }
        self.limbs[k] += v.rem_euclid(RADIX);
        self.limbs[k + 1] += v.div_euclid(RADIX);
    }

    pub fn merge(&mut self, other: &ExactSum) {
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a += b;
        }
    }

    pub fn subtract(&mut self, other: &ExactSum) {
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a -= b;
        }
    }

    fn normalized(&self) -> [i128; LIMBS] {
        let mut l = self.limbs;
        for k in 0..LIMBS - 1 {
            let c = l[k].div_euclid(RADIX);
            l[k] -= c * RADIX;
            l[k + 1] += c;
        }
        l
    }

    /// Nearest-ish double; a function of the exact value only.
    pub fn value(&self) -> f64 {
        let mut l = self.normalized();
        // the top limb carries the sign of the two's-complement total
        let negative = l[LIMBS - 1] < 0;
        if negative {
            l.iter_mut().for_each(|v| *v = -*v);
            l = ExactSum { limbs: l }.normalized();
        }
        let mag = l.iter().enumerate().fold(0.0, |acc, (k, &v)| acc + ldexp(v as f64, 64 * k as i32 - OFFSET));
        if negative {
            -mag
        } else {
            mag
        }
    }
}

impl PartialEq<f64> for ExactSum {
    fn eq(&self, other: &f64) -> bool {
        let mut s = ExactSum::new();
        s.add(*other);
        self.normalized() == s.normalized()
    }
}

/// Count, sums and upper-triangular cross sums of grid vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    count: u64,
    sums: Vec<ExactSum>,
    cross: Vec<ExactSum>,
}

fn tri(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    j * (j + 1) / 2 + i
}

impl Moments {
    pub fn new(n: usize) -> Self {
        Self { count: 0, sums: vec![ExactSum::new(); n], cross: vec![ExactSum::new(); n * (n + 1) / 2] }
    }

    pub fn push(&mut self, x: &[f64]) {
        assert_eq!(x.len(), self.sums.len());
        self.count += 1;
        for (i, &xi) in x.iter().enumerate() {
            self.sums[i].add(xi);
            for j in i..x.len() {
                self.cross[tri(i, j)].add(xi * x[j]);
            }
        }
    }

    pub fn merge(&mut self, o: &Moments) {
        self.count += o.count;
        self.sums.iter_mut().zip(&o.sums).for_each(|(a, b)| a.merge(b));
        self.cross.iter_mut().zip(&o.cross).for_each(|(a, b)| a.merge(b));
    }

    fn without(&self, o: &Moments) -> Moments {
        let mut m = self.clone();
        m.count -= o.count;
        m.sums.iter_mut().zip(&o.sums).for_each(|(a, b)| a.subtract(b));
        m.cross.iter_mut().zip(&o.cross).for_each(|(a, b)| a.subtract(b));
        m
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn means(&self) -> Vec<f64> {
        let n = self.count as f64;
        self.sums.iter().map(|s| s.value() / n).collect()
    }

    /// Unbiased covariance matrix.
    pub fn covariance(&self) -> DMatrix<f64> {
        let k = self.sums.len();
        let n = self.count as f64;
        let s: Vec<f64> = self.sums.iter().map(ExactSum::value).collect();
        DMatrix::from_fn(k, k, |i, j| (self.cross[tri(i, j)].value() - s[i] * s[j] / n) / (n - 1.0))
    }
}

pub fn correlation_of(cov: &DMatrix<f64>) -> (DMatrix<f64>, Vec<bool>) {
    let n = cov.nrows();
    let degenerate: Vec<bool> = (0..n).map(|i| !(cov[(i, i)] > 0.0)).collect();
    let m = DMatrix::from_fn(n, n, |i, j| {
        if degenerate[i] || degenerate[j] {
            if i == j {
                1.0
            } else {
                0.0
            }
        } else {
            cov[(i, j)] / (cov[(i, i)] * cov[(j, j)]).sqrt()
        }
    });
    (m, degenerate)
}

/// Replicas are assigned to jackknife groups by index modulo this count, so
/// group membership does not depend on how an ensemble was split.
pub const JACKKNIFE_GROUPS: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSummary {
    pub grid: Vec<f64>,
    pub master_seed: u64,
    groups: Vec<Moments>,
}

impl EnsembleSummary {
    pub fn new(grid: &[f64], master_seed: u64) -> Self {
        Self { grid: grid.to_vec(), master_seed, groups: vec![Moments::new(grid.len()); JACKKNIFE_GROUPS] }
    }

    pub fn push(&mut self, replica: u64, x: &[f64]) {
        self.groups[(replica % JACKKNIFE_GROUPS as u64) as usize].push(x);
    }

    /// Exact: equals the summary of the union of both ensembles.
    pub fn merge(&mut self, o: &EnsembleSummary) -> Result<()> {
        if self.grid != o.grid || self.master_seed != o.master_seed {
            return Err(Error::Misaligned("summaries of different scenarios".into()));
        }
        self.groups.iter_mut().zip(&o.groups).for_each(|(a, b)| a.merge(b));
        Ok(())
    }

    pub fn total(&self) -> Moments {
        let mut m = Moments::new(self.grid.len());
        self.groups.iter().for_each(|g| m.merge(g));
        m
    }

    pub fn replicas(&self) -> u64 {
        self.groups.iter().map(|g| g.count).sum()
    }

    pub fn means(&self) -> Vec<f64> {
        self.total().means()
    }

    pub fn variances(&self) -> Vec<f64> {
        self.total().covariance().diagonal().iter().copied().collect()
    }

    /// Standard errors of the grid means.
    pub fn mean_se(&self) -> Vec<f64> {
        let m = self.replicas() as f64;
        self.variances().iter().map(|v| (v.max(0.0) / m).sqrt()).collect()
    }

    /// Grouped jackknife of a matrix-valued statistic: (estimate, standard errors).
    pub fn jackknife<F: Fn(&Moments) -> DMatrix<f64>>(&self, stat: F) -> (DMatrix<f64>, DMatrix<f64>) {
        let total = self.total();
        let est = stat(&total);
        let leave: Vec<DMatrix<f64>> = self.groups.iter().filter(|g| g.count > 0 && g.count < total.count).map(|g| stat(&total.without(g))).collect();
        let g = leave.len();
        if g < 2 {
            return (est.clone(), DMatrix::from_element(est.nrows(), est.ncols(), f64::NAN));
        }
        let mean = leave.iter().fold(DMatrix::zeros(est.nrows(), est.ncols()), |a, b| a + b) / g as f64;
        let var = leave.iter().fold(DMatrix::zeros(est.nrows(), est.ncols()), |a, b| a + (b - &mean).map(|v| v * v));
        (est, var.map(|v| (v * (g as f64 - 1.0) / g as f64).sqrt()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCov {
    pub cov: CovGrid,
    pub se: DMatrix<f64>,
}

pub fn empirical_cov(summary: &EnsembleSummary) -> Result<EmpiricalCov> {
    ensure(summary.replicas() >= 2, || "covariance needs at least two replicas".into())?;
    let (m, se) = summary.jackknife(Moments::covariance);
    Ok(EmpiricalCov { cov: CovGrid { grid: summary.grid.clone(), matrix: m }, se })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCorr {
    pub corr: DMatrix<f64>,
    pub se: DMatrix<f64>,
    /// grid points with zero sample variance; their rows are set to the identity
    pub degenerate: Vec<bool>,
}

pub fn empirical_corr(summary: &EnsembleSummary) -> Result<EmpiricalCorr> {
    ensure(summary.replicas() >= 2, || "correlation needs at least two replicas".into())?;
    let (corr, se) = summary.jackknife(|m| correlation_of(&m.covariance()).0);
    let degenerate = correlation_of(&summary.total().covariance()).1;
    Ok(EmpiricalCorr { corr, se, degenerate })
}

/// Replica paths kept alongside the summary, keyed by replica index.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub summary: EnsembleSummary,
    pub paths: BTreeMap<u64, Vec<f64>>,
}

impl Ensemble {
    pub fn new(grid: &[f64], master_seed: u64) -> Self {
        Self { summary: EnsembleSummary::new(grid, master_seed), paths: BTreeMap::new() }
    }

    pub fn push(&mut self, replica: u64, path: Vec<f64>) -> Result<()> {
        if path.len() != self.summary.grid.len() {
            return Err(Error::Misaligned(format!("path of {} values on a grid of {}", path.len(), self.summary.grid.len())));
        }
        if self.paths.contains_key(&replica) {
            return Err(Error::InvalidParameter(format!("replica {replica} pushed twice")));
        }
        self.summary.push(replica, &path);
        self.paths.insert(replica, path);
        Ok(())
    }

    pub fn merge(&mut self, o: &Ensemble) -> Result<()> {
        if o.paths.keys().any(|k| self.paths.contains_key(k)) {
            return Err(Error::InvalidParameter("ensembles share replicas".into()));
        }
        self.summary.merge(&o.summary)?;
        self.paths.extend(o.paths.iter().map(|(k, v)| (*k, v.clone())));
        Ok(())
    }

    /// Values at grid index `i`, in replica order.
    pub fn marginal(&self, i: usize) -> Vec<f64> {
        self.paths.values().map(|p| p[i]).collect()
    }
}

/// Runs replicas `0..m` through `replica`, which maps an index to its path.
pub fn run_ensemble<F>(grid: &[f64], m: u64, master_seed: u64, replica: F) -> Result<Ensemble>
where
    F: Fn(u64) -> Result<Vec<f64>> + Sync + Send,
{
    collect(grid, m, master_seed, |ids| crate::par::map(ids, |&i| replica(i)))
}

pub fn run_ensemble_sequential<F>(grid: &[f64], m: u64, master_seed: u64, replica: F) -> Result<Ensemble>
where
    F: Fn(u64) -> Result<Vec<f64>>,
{
    collect(grid, m, master_seed, |ids| crate::par::map_sequential(ids, |&i| replica(i)))
}

fn collect<M>(grid: &[f64], m: u64, master_seed: u64, map: M) -> Result<Ensemble>
where
    M: FnOnce(&[u64]) -> Vec<Result<Vec<f64>>>,
{
    ensure(m >= 2, || format!("an ensemble needs M ≥ 2, got {m}"))?;
    let ids: Vec<u64> = (0..m).collect();
    let mut out = Ensemble::new(grid, master_seed);
    for (i, path) in ids.iter().zip(map(&ids)) {
        out.push(*i, path?)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalityTest {
    /// Anderson–Darling A² with the small-sample factor (1 + 0.75/n + 2.25/n²)
    pub statistic: f64,
    pub p_value: f64,
    pub passed: bool,
    pub degenerate: bool,
}

/// Anderson–Darling test of normality with mean and variance estimated.
pub fn normality_test(samples: &[f64], level: f64) -> Result<NormalityTest> {
    let n = samples.len();
    ensure(n >= 100, || format!("normality test needs ≥ 100 samples, got {n}"))?;
    ensure(level > 0.0 && level < 1.0, || format!("level {level}"))?;
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    if !(var > 0.0) {
        return Ok(NormalityTest { statistic: f64::INFINITY, p_value: 0.0, passed: false, degenerate: true });
    }
    let sd = var.sqrt();
    let mut z: Vec<f64> = samples.iter().map(|x| (x - mean) / sd).collect();
    z.sort_by(f64::total_cmp);
    let s: f64 = (0..n)
        .map(|i| {
            let lo = normal_cdf(z[i]).ln();
            let hi = normal_cdf(-z[n - 1 - i]).ln();
            (2.0 * i as f64 + 1.0) * (lo + hi)
        })
        .sum();
    let a2 = -nf - s / nf;
    let a = a2 * (1.0 + 0.75 / nf + 2.25 / (nf * nf));
    // D'Agostino & Stephens (1986), Table 4.9
    let p = if a >= 10.0 {
        0.0
    } else if a >= 0.6 {
        (1.2937 - 5.709 * a + 0.0186 * a * a).exp()
    } else if a >= 0.34 {
        (0.9177 - 4.279 * a - 1.38 * a * a).exp()
    } else if a >= 0.2 {
        1.0 - (-8.318 + 42.796 * a - 59.938 * a * a).exp()
    } else {
        1.0 - (-13.436 + 101.14 * a - 223.73 * a * a).exp()
    };
    let p = p.clamp(0.0, 1.0);
    Ok(NormalityTest { statistic: a, p_value: p, passed: p >= level, degenerate: false })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplacePoint {
    pub theta: f64,
    pub value: f64,
    pub se: f64,
}

/// Sample means of e^{−θX} with their standard errors.
pub fn empirical_laplace(samples: &[f64], thetas: &[f64]) -> Result<Vec<LaplacePoint>> {
    ensure(!samples.is_empty(), || "no samples".into())?;
    thetas
        .iter()
        .map(|&theta| {
            ensure(theta >= 0.0, || format!("θ = {theta} must be ≥ 0"))?;
            if theta == 0.0 {
                return Ok(LaplacePoint { theta, value: 1.0, se: 0.0 });
            }
            let n = samples.len() as f64;
            let v: Vec<f64> = samples.iter().map(|x| (-theta * x).exp()).collect();
            let mean = v.iter().sum::<f64>() / n;
            let var = if n > 1.0 { v.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
            Ok(LaplacePoint { theta, value: mean, se: (var / n).sqrt() })
        })
        .collect()
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Oracle,
    LimitLaw,
    ClosedForm,
}

/// |observed − expected| ≤ z·se + abs + rel·|expected|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    #[serde(default)]
    pub z: f64,
    #[serde(default)]
    pub abs: f64,
    #[serde(default)]
    pub rel: f64,
}

impl TolerancePolicy {
    pub fn z_score(z: f64) -> Self {
        Self { z, abs: 0.0, rel: 0.0 }
    }

    pub fn absolute(abs: f64) -> Self {
        Self { z: 0.0, abs, rel: 0.0 }
    }

    pub fn allowance(&self, expected: f64, se: f64) -> f64 {
        self.z * se + self.abs + self.rel * expected.abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    pub se: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub provenance: Provenance,
}

impl Comparison {
    pub fn new(name: impl Into<String>, observed: f64, expected: f64, se: f64, policy: TolerancePolicy, provenance: Provenance) -> Self {
        let tolerance = policy.allowance(expected, se);
        let passed = (observed - expected).abs() <= tolerance;
        Self { name: name.into(), observed, expected, se, tolerance, passed, provenance }
    }

    /// A pass/fail fact with no numeric tolerance (e.g. a test's verdict).
    pub fn verdict(name: impl Into<String>, observed: f64, expected: f64, passed: bool, provenance: Provenance) -> Self {
        Self { name: name.into(), observed, expected, se: 0.0, tolerance: 0.0, passed, provenance }
    }
}

/// Elementwise comparisons of aligned vectors; names get an index suffix.
pub fn compare(
    name: &str,
    observed: &[f64],
    expected: &[f64],
    se: &[f64],
    policy: TolerancePolicy,
    provenance: Provenance,
) -> Result<Vec<Comparison>> {
    if observed.len() != expected.len() || observed.len() != se.len() {
        return Err(Error::Misaligned(format!(
            "{name}: {} observed, {} expected, {} standard errors",
            observed.len(),
            expected.len(),
            se.len()
        )));
    }
    Ok(observed
        .iter()
        .zip(expected)
        .zip(se)
        .enumerate()
        .map(|(i, ((&o, &e), &s))| Comparison::new(format!("{name}[{i}]"), o, e, s, policy, provenance))
        .collect())
}

pub const SCHEMA_VERSION: u32 = 1;

/// Verification outcome of one scenario. Wall-clock time is deliberately
/// absent so that reruns are byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub scenario: String,
    pub regime: String,
    pub master_seed: u64,
    pub replicas: u64,
    pub comparisons: Vec<Comparison>,
    pub passed: bool,
}

pub fn compare_report(scenario: &str, regime: &str, master_seed: u64, replicas: u64, comparisons: Vec<Comparison>) -> VerificationReport {
    let passed = comparisons.iter().all(|c| c.passed);
    VerificationReport { schema_version: SCHEMA_VERSION, scenario: scenario.into(), regime: regime.into(), master_seed, replicas, comparisons, passed }
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("scenario {} (regime {}), seed {}, M = {}\n", self.scenario, self.regime, self.master_seed, self.replicas);
        for c in &self.comparisons {
            s += &format!(
                "  [{}] {:<28} observed {:>12.6e}  expected {:>12.6e}  tol {:>10.3e}  ({:?})\n",
                if c.passed { "pass" } else { "FAIL" },
                c.name,
                c.observed,
                c.expected,
                c.tolerance,
                c.provenance
            );
        }
        s += if self.passed { "all comparisons passed\n" } else { "some comparisons failed\n" };
        s
    }
}
