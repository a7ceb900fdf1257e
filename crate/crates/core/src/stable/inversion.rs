//! Radial Fourier inversion of e^{−|z|^α} and the cached interpolation table
//! for p₁ built from it.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::quadrature::{apply_rule, gauss_legendre, gl16};
use crate::special::{bessel_j0, bessel_j1};

fn gl20() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(20))
}

fn kernel_constant(d: usize) -> f64 {
    match d {
        1 => 1.0 / PI,
        2 => 1.0 / (2.0 * PI),
        _ => 1.0 / (2.0 * PI * PI),
    }
}

#[inline]
fn radial_kernel(d: usize, u: f64) -> f64 {
    match d {
        1 => u.cos(),
        2 => bessel_j0(u),
        _ => {
            if u.abs() < 1e-4 {
                1.0 - u * u / 6.0
            } else {
                u.sin() / u
            }
        }
    }
}

#[inline]
fn radial_kernel_deriv(d: usize, u: f64) -> f64 {
    match d {
        1 => -u.sin(),
        2 => -bessel_j1(u),
        _ => {
            if u.abs() < 1e-3 {
                -u / 3.0 + u * u * u / 30.0
            } else {
                (u * u.cos() - u.sin()) / (u * u)
            }
        }
    }
}

/// Panels for ∫₀^Z f(z) dz with f = K(rz)·z^m·e^{−z^α}: geometric grading near
/// the z^α non-smoothness at 0, then widths limited by the oscillation period.
fn panels(alpha: f64, d: usize, r: f64) -> Vec<(f64, f64)> {
    let mut zmax = 45f64.powf(1.0 / alpha);
    while zmax.powi(d as i32 + 1) * (-zmax.powf(alpha)).exp() > 1e-20 {
        zmax *= 1.1;
    }
    let osc = if r > 0.0 { PI / r } else { f64::INFINITY };
    let grade_end = 0.5f64.min(0.5 * osc);
    let mut out = Vec::new();
    let mut a = grade_end * 2f64.powi(-44);
    out.push((0.0, a));
    while a < grade_end {
        out.push((a, 2.0 * a));
        a *= 2.0;
    }
    while a < zmax {
        let w = osc.min((0.5 * a).max(0.25));
        let b = (a + w).min(zmax);
        out.push((a, b));
        a = b;
    }
    out
}

/// p₁(r) and p₁'(r) by direct radial inversion, with an error estimate from
/// comparing two Gauss–Legendre orders on the same panels.
pub fn radial_inversion(alpha: f64, d: usize, r: f64) -> Result<(f64, f64, f64)> {
    let c = kernel_constant(d);
    let m = (d - 1) as i32;
    let mut val = [0.0; 2];
    let mut der = [0.0; 2];
    for (i, rule) in [gl16(), gl20()].into_iter().enumerate() {
        for &(a, b) in &panels(alpha, d, r) {
            let mut f = |z: f64| radial_kernel(d, r * z) * z.powi(m) * (-z.powf(alpha)).exp();
            val[i] += apply_rule(rule, &mut f, a, b);
            let mut g = |z: f64| radial_kernel_deriv(d, r * z) * z.powi(m + 1) * (-z.powf(alpha)).exp();
            der[i] += apply_rule(rule, &mut g, a, b);
        }
    }
    let err = c * ((val[0] - val[1]).abs() + 2e-16 * val[1].abs());
    if err > 1e-10 {
        return Err(Error::Quadrature { estimate: c * val[1], error: err, requested: 1e-10 });
    }
    Ok((c * val[1], c * der[1], err))
}

/// Asymptotic (α ≥ 1) or convergent (α < 1) expansion
/// p₁(r) = π^{−d/2−1} Σ_k (−1)^{k+1}/k! 2^{kα} Γ(kα/2+1) Γ((kα+d)/2) sin(kπα/2) r^{−kα−d}.
#[derive(Debug, Clone)]
struct TailSeries {
    coef: Vec<f64>,
    expo: Vec<f64>,
}

impl TailSeries {
    fn new(alpha: f64, d: usize) -> Self {
        let df = d as f64;
        let mut coef = Vec::new();
        let mut expo = Vec::new();
        for k in 1..=120 {
            let kf = k as f64;
            let s = (kf * PI * alpha / 2.0).sin();
            let lm = kf * alpha * 2f64.ln() + ln_gamma(kf * alpha / 2.0 + 1.0) + ln_gamma((kf * alpha + df) / 2.0)
                - ln_gamma(kf + 1.0)
                - (df / 2.0 + 1.0) * PI.ln();
            if lm > 700.0 {
                break;
            }
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            // sin(kπα/2) vanishes exactly for some k; suppress rounding noise
            let s = if s.abs() < 1e-13 { 0.0 } else { s };
            coef.push(sign * s * lm.exp());
            expo.push(kf * alpha + df);
        }
        Self { coef, expo }
    }

    /// Value, derivative and magnitude of the first neglected term.
    fn eval(&self, r: f64) -> (f64, f64, f64) {
        let lr = r.ln();
        let (mut v, mut dv) = (0.0, 0.0);
        let mut last = f64::INFINITY;
        for (c, e) in self.coef.iter().zip(&self.expo) {
            if *c == 0.0 {
                continue;
            }
            let t = c * (-e * lr).exp();
            if t.abs() > last {
                return (v, dv, last);
            }
            v += t;
            dv -= e * t / r;
            last = t.abs();
            if last < 1e-17 * v.abs() {
                return (v, dv, last);
            }
        }
        (v, dv, last)
    }
}

/// Cubic Hermite table of p₁ on [0, r_tab] plus the tail series beyond.
#[derive(Debug)]
pub struct RadialTable {
    h: f64,
    values: Vec<f64>,
    derivs: Vec<f64>,
    r_tab: f64,
    tail: TailSeries,
}

const TAB_LADDER: [f64; 14] = [1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0, 64.0, 96.0];

impl RadialTable {
    pub fn build(alpha: f64, d: usize) -> Result<Self> {
        let tail = TailSeries::new(alpha, d);
        let mut r_tab = None;
        for &r in &TAB_LADDER {
            let (v, _, err) = tail.eval(r);
            if err < 1e-13 * v.abs() {
                let (direct, _, qerr) = radial_inversion(alpha, d, r)?;
                if (direct - v).abs() <= 1e-10 * direct.abs() + qerr {
                    r_tab = Some(r);
                    break;
                }
            }
        }
        let r_tab = r_tab.ok_or(Error::Quadrature { estimate: f64::NAN, error: f64::INFINITY, requested: 1e-10 })?;
        // knot spacing: finer for α < 1 where p₁ is sharply peaked
        let h = if alpha < 1.0 { 1.0 / 512.0 } else { 1.0 / 64.0 };
        let n = (r_tab / h).round() as usize;
        let mut values = Vec::with_capacity(n + 1);
        let mut derivs = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let (v, dv, _) = radial_inversion(alpha, d, k as f64 * h)?;
            values.push(v);
            derivs.push(dv);
        }
        Ok(Self { h, values, derivs, r_tab: n as f64 * h, tail })
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        if r >= self.r_tab {
            return self.tail.eval(r).0.max(0.0);
        }
        let s = r / self.h;
        let k = (s as usize).min(self.values.len() - 2);
        let u = s - k as f64;
        let (u2, u3) = (u * u, u * u * u);
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        (h00 * self.values[k]
            + h10 * self.h * self.derivs[k]
            + h01 * self.values[k + 1]
            + h11 * self.h * self.derivs[k + 1])
            .max(0.0)
    }

    pub fn tabulated_radius(&self) -> f64 {
        self.r_tab
    }
}

type TableKey = (u64, usize);

/// Tables depend only on (α, d); they are built once per process and shared.
pub(crate) fn table_for(alpha: f64, d: usize) -> Result<Arc<RadialTable>> {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, Arc<OnceLock<Result<Arc<RadialTable>>>>>>> = OnceLock::new();
    let cell = {
        let mut map = CACHE.get_or_init(Default::default).lock().expect("table cache poisoned");
        map.entry((alpha.to_bits(), d)).or_default().clone()
    };
    cell.get_or_init(|| RadialTable::build(alpha, d).map(Arc::new)).clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversion_matches_closed_forms() {
        for r in [0.0, 0.3, 1.0, 2.5, 7.0] {
            let (cauchy, dc, _) = radial_inversion(1.0, 1, r).unwrap();
            assert!((cauchy - 1.0 / (PI * (1.0 + r * r))).abs() < 1e-12, "r={r}");
            assert!((dc + 2.0 * r / (PI * (1.0 + r * r).powi(2))).abs() < 1e-12);
            let (gauss, _, _) = radial_inversion(2.0, 1, r).unwrap();
            assert!((gauss - (-r * r / 4.0).exp() / (4.0 * PI).sqrt()).abs() < 1e-12);
            let (c3, _, _) = radial_inversion(1.0, 3, r).unwrap();
            assert!((c3 - 1.0 / (PI * PI * (1.0 + r * r).powi(2))).abs() < 1e-12);
            let (g2, _, _) = radial_inversion(2.0, 2, r).unwrap();
            assert!((g2 - (-r * r / 4.0).exp() / (4.0 * PI)).abs() < 1e-11, "r={r}");
        }
    }

    #[test]
    fn tail_series_matches_inversion() {
        for &(alpha, d) in &[(1.5, 1), (0.5, 1), (1.2, 3), (1.7, 2)] {
            let s = TailSeries::new(alpha, d);
            let (v, _, _) = s.eval(20.0);
            let (direct, _, _) = radial_inversion(alpha, d, 20.0).unwrap();
            assert!((v - direct).abs() < 1e-9 * direct, "α={alpha} d={d}: {v} vs {direct}");
        }
    }

    #[test]
    fn table_interpolates_between_knots() {
        let t = RadialTable::build(1.5, 1).unwrap();
        for r in [0.01, 0.123, 0.777, 1.9, 3.33, t.tabulated_radius() - 0.01, t.tabulated_radius() + 0.5] {
            let (direct, _, _) = radial_inversion(1.5, 1, r).unwrap();
            assert!((t.eval(r) - direct).abs() < 1e-10, "r={r}");
        }
    }
}
