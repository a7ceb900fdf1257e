//! Classification of (γ, d, α) into limit regimes, with norming F_T, the
//! self-similarity index and the limit descriptor. Classification compares
//! exact rationals so that boundary cases (γ = α, γ = d, d = α) are decidable.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact rational parameter, serialized as a string such as `"3/2"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Rational(pub Ratio<i64>);

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter(format!("{num}/0")));
        }
        Ok(Self(Ratio::new(num, den)))
    }

    pub fn integer(n: i64) -> Self {
        Self(Ratio::from_integer(n))
    }

    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl FromStr for Rational {
    type Err = Error;
    /// Accepts `p/q`, integers, and finite decimals (`0.75` = 3/4).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("not an exact rational: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            return Rational::new(p, q).map_err(|_| bad());
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 12 {
                return Err(bad());
            }
            let neg = int.starts_with('-');
            let whole: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
            let den = 10i64.pow(frac.len() as u32);
            let f: i64 = frac.parse().map_err(|_| bad())?;
            let num = whole.abs().checked_mul(den).and_then(|w| w.checked_add(f)).ok_or_else(bad)?;
            return Rational::new(if neg { -num } else { num }, den);
        }
        Ok(Rational::integer(s.parse().map_err(|_| bad())?))
    }
}

impl TryFrom<String> for Rational {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Rational> for String {
    fn from(r: Rational) -> String {
        r.to_string()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeId {
    G1,
    G2,
    G3,
    C1,
    B,
    G4,
    C2,
    F1,
    F2,
}

impl RegimeId {
    pub const ALL: [RegimeId; 9] =
        [RegimeId::G1, RegimeId::G2, RegimeId::G3, RegimeId::C1, RegimeId::B, RegimeId::G4, RegimeId::C2, RegimeId::F1, RegimeId::F2];

    pub fn as_str(self) -> &'static str {
        match self {
            RegimeId::G1 => "G1",
            RegimeId::G2 => "G2",
            RegimeId::G3 => "G3",
            RegimeId::C1 => "C1",
            RegimeId::B => "B",
            RegimeId::G4 => "G4",
            RegimeId::C2 => "C2",
            RegimeId::F1 => "F1",
            RegimeId::F2 => "F2",
        }
    }

    /// Regimes of a finite intensity, where the occupation is not centered.
    pub fn is_finite_mass(self) -> bool {
        matches!(self, RegimeId::F1 | RegimeId::F2)
    }
}

impl fmt::Display for RegimeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RegimeId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RegimeId::ALL.into_iter().find(|r| r.as_str() == s).ok_or_else(|| Error::InvalidParameter(format!("unknown regime {s:?}")))
    }
}

/// What kind of initial intensity enters the classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuClass {
    PowerLaw { gamma: Rational },
    Finite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitDescriptor {
    /// extended fractional Brownian motion ξ
    Xi,
    /// inhomogeneous Wiener process β
    BetaWiener,
    /// time-inhomogeneous Wiener process with potential-operator covariance
    PotentialWiener,
    /// Gaussian variable constant in time, potential-operator variance
    PotentialConstant,
    /// standard normal constant in time
    StandardNormalConstant,
    /// Poisson sum of independent local times
    CompoundLocalTime,
    /// Poisson sum of independent standard exponentials
    CompoundExponential,
    /// bounded total occupation, no limit theorem needed
    FiniteOccupation,
}

/// Time domain of the limit: [0, τ] or [ε, τ] for limits discontinuous at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeDomain {
    FromZero,
    AwayFromZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeSpec {
    pub id: RegimeId,
    pub mu: MuClass,
    pub d: u32,
    pub alpha: Rational,
    /// F_T = T^kappa (log T)^log_power; `None` when no norming is defined.
    pub kappa: Option<f64>,
    pub log_power: f64,
    pub limit: LimitDescriptor,
    pub time_domain: TimeDomain,
}

impl RegimeSpec {
    pub fn gamma(&self) -> Option<Rational> {
        match self.mu {
            MuClass::PowerLaw { gamma } => Some(gamma),
            MuClass::Finite => None,
        }
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha.to_f64()
    }

    /// F_T for T > 1.
    pub fn norming(&self, t: f64) -> Result<f64> {
        let kappa = self.kappa.ok_or(Error::NoNorming(self.id.as_str()))?;
        if !(t > 1.0) {
            return Err(Error::InvalidParameter(format!("norming needs T > 1, got {t}")));
        }
        Ok(t.powf(kappa) * t.ln().powf(self.log_power))
    }
}

pub fn classify(mu: MuClass, d: u32, alpha: Rational) -> Result<RegimeSpec> {
    let zero = Rational::integer(0);
    if !(1..=3).contains(&d) {
        return Err(Error::Inadmissible(format!("dimension {d} not in 1..=3")));
    }
    if !(alpha > zero && alpha <= Rational::integer(2)) {
        return Err(Error::Inadmissible(format!("α = {alpha} not in (0, 2]")));
    }
    let dr = Rational::integer(d as i64);
    let (a, df) = (alpha.to_f64(), d as f64);
    use std::cmp::Ordering::*;
    let spec = |id, kappa: Option<f64>, log_power, limit, time_domain| RegimeSpec {
        id,
        mu,
        d,
        alpha,
        kappa,
        log_power,
        limit,
        time_domain,
    };
    let finite = |spec_fn: &dyn Fn(RegimeId, Option<f64>, f64, LimitDescriptor, TimeDomain) -> RegimeSpec| match dr.cmp(&alpha) {
        Less => spec_fn(RegimeId::F1, Some(1.0 - 1.0 / a), 0.0, LimitDescriptor::CompoundLocalTime, TimeDomain::FromZero),
        Equal => spec_fn(RegimeId::F2, Some(0.0), 1.0, LimitDescriptor::CompoundExponential, TimeDomain::AwayFromZero),
        Greater => spec_fn(RegimeId::B, None, 0.0, LimitDescriptor::FiniteOccupation, TimeDomain::FromZero),
    };
    let gamma = match mu {
        MuClass::Finite => return Ok(finite(&spec)),
        MuClass::PowerLaw { gamma } => gamma,
    };
    if gamma <= zero {
        return Err(Error::Inadmissible(format!("γ = {gamma} must be positive")));
    }
    let g = gamma.to_f64();
    let s = match (gamma.cmp(&dr), dr.cmp(&alpha), gamma.cmp(&alpha)) {
        (Less, Less, _) => {
            if d != 1 {
                return Err(Error::Inadmissible("γ < d < α forces d = 1".into()));
            }
            spec(RegimeId::G1, Some(1.0 - (df + g) / (2.0 * a)), 0.0, LimitDescriptor::Xi, TimeDomain::FromZero)
        }
        (Less, Equal, _) => spec(RegimeId::G2, Some((1.0 - g / a) / 2.0), 0.5, LimitDescriptor::BetaWiener, TimeDomain::FromZero),
        (Less, Greater, Less) => {
            spec(RegimeId::G3, Some((1.0 - g / a) / 2.0), 0.0, LimitDescriptor::PotentialWiener, TimeDomain::FromZero)
        }
        (Less, Greater, Equal) => {
            spec(RegimeId::C1, Some(0.0), 0.5, LimitDescriptor::PotentialConstant, TimeDomain::AwayFromZero)
        }
        // α < d and α < γ: the relation between γ and d is irrelevant
        (_, Greater, _) => spec(RegimeId::B, None, 0.0, LimitDescriptor::FiniteOccupation, TimeDomain::FromZero),
        (Equal, Less, _) => spec(RegimeId::G4, Some(1.0 - df / a), 0.5, LimitDescriptor::Xi, TimeDomain::FromZero),
        (Equal, Equal, _) => {
            spec(RegimeId::C2, Some(0.0), 1.5, LimitDescriptor::StandardNormalConstant, TimeDomain::AwayFromZero)
        }
        // γ > d: μ is finite
        (Greater, _, _) => finite(&spec),
    };
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn pl(s: &str) -> MuClass {
        MuClass::PowerLaw { gamma: r(s) }
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(r("3/2"), Rational::new(3, 2).unwrap());
        assert_eq!(r("0.75"), Rational::new(3, 4).unwrap());
        assert_eq!(r("2"), Rational::integer(2));
        assert_eq!(r("6/4").to_string(), "3/2");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert!("0.1e3".parse::<Rational>().is_err());
    }

    #[test]
    fn examples() {
        let g1 = classify(pl("1/2"), 1, r("3/2")).unwrap();
        assert_eq!(g1.id, RegimeId::G1);
        assert!((g1.kappa.unwrap() - 0.5).abs() < 1e-15);
        assert!((g1.norming(100.0).unwrap() - 10.0).abs() < 1e-12);
        let b = classify(pl("1"), 3, r("1/2")).unwrap();
        assert_eq!(b.id, RegimeId::B);
        assert!(matches!(b.norming(10.0), Err(Error::NoNorming("B"))));
        let f1 = classify(MuClass::Finite, 1, r("3/2")).unwrap();
        assert_eq!(f1.id, RegimeId::F1);
        assert!((f1.kappa.unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let c2 = classify(pl("1"), 1, r("1")).unwrap();
        assert_eq!(c2.id, RegimeId::C2);
        assert!((c2.norming(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        let f2 = classify(MuClass::Finite, 1, r("1")).unwrap();
        assert!((f2.norming(std::f64::consts::E.powi(2)).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(f2.time_domain, TimeDomain::AwayFromZero);
    }

    #[test]
    fn boundaries_are_exact() {
        assert_eq!(classify(pl("1/2"), 3, r("1/2")).unwrap().id, RegimeId::C1);
        assert_eq!(classify(pl("2/4"), 3, r("0.5")).unwrap().id, RegimeId::C1);
        assert_eq!(classify(pl("1"), 1, r("3/2")).unwrap().id, RegimeId::G4);
        assert_eq!(classify(pl("1/2"), 1, r("1")).unwrap().id, RegimeId::G2);
        assert_eq!(classify(pl("1/2"), 3, r("1")).unwrap().id, RegimeId::G3);
        assert_eq!(classify(pl("2"), 1, r("3/2")).unwrap().id, RegimeId::F1);
        assert_eq!(classify(pl("3"), 2, r("2")).unwrap().id, RegimeId::F2);
    }

    #[test]
    fn rejects_inadmissible() {
        assert!(classify(pl("0"), 1, r("1")).is_err());
        assert!(classify(pl("1"), 4, r("1")).is_err());
        assert!(classify(pl("1"), 1, r("5/2")).is_err());
        assert!(classify(MuClass::Finite, 1, r("0")).is_err());
    }
}
