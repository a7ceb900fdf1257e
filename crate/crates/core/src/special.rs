//! Special functions not provided by `statrs`: Bessel kernels for radial
//! Fourier inversion, the Mittag-Leffler function on the negative axis, and
//! moment formulas of isotropic stable laws.

use std::f64::consts::{FRAC_PI_4, PI};

use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::quadrature::{exp_sinh, Tol};

pub use statrs::function::beta::{beta, beta_reg, ln_beta};
pub use statrs::function::erf::{erf, erfc};
pub use statrs::function::gamma::gamma_lr;
pub use statrs::function::gamma::{gamma as gamma_fn, ln_gamma as ln_gamma_fn};

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Surface area of the unit sphere in ℝ^d.
pub fn sphere_area(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

// Hankel asymptotic series P_ν, Q_ν for large argument.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        term *= (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * x);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        if k % 2 == 1 {
            // odd terms feed Q with alternating sign
            q += if (k / 2) % 2 == 0 { term } else { -term };
        } else {
            p += if (k / 2) % 2 == 1 { -term } else { term };
        }
        if last < 1e-17 {
            break;
        }
    }
    (p, q)
}

fn bessel_series(nu: u32, x: f64) -> f64 {
    let y = -0.25 * x * x;
    let mut term = (0.5 * x).powi(nu as i32) / (1..=nu).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= y / (kf * (kf + nu as f64));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

const BESSEL_SWITCH: f64 = 12.0;

pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < BESSEL_SWITCH {
        return bessel_series(0, x);
    }
    let (p, q) = hankel_pq(0.0, x);
    let chi = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

pub fn bessel_j1(x: f64) -> f64 {
    let s = x.signum();
    let x = x.abs();
    if x < BESSEL_SWITCH {
        return s * bessel_series(1, x);
    }
    let (p, q) = hankel_pq(1.0, x);
    let chi = x - 3.0 * FRAC_PI_4;
    s * (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// e^{-x} I₀(x) for x ≥ 0.
pub fn bessel_i0e(x: f64) -> f64 {
    let x = x.abs();
    if x <= 20.0 {
        let y = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..300 {
            let kf = k as f64;
            term *= y / (kf * kf);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        return sum * (-x).exp();
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..40 {
        let kf = k as f64;
        let next = term * (2.0 * kf - 1.0).powi(2) / (kf * 8.0 * x);
        if next > term {
            break;
        }
        term = next;
        sum += term;
        if term < 1e-17 {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}

/// E_β(−x) for β ∈ (0, 1], x ≥ 0.
///
/// Uses the power series for small x and otherwise the Laplace-type
/// representation E_β(−t^β) = ∫₀^∞ e^{−rt} K_β(r) dr with the spectral
/// density K_β(r) = sin(βπ) r^{β−1} / (π (r^{2β} + 2r^β cos βπ + 1)),
/// after substituting w = r^β.
pub fn mittag_leffler_neg(beta: f64, x: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) || x < 0.0 || !x.is_finite() {
        return Err(Error::InvalidParameter(format!("Mittag-Leffler E_{beta}(-{x})")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if beta == 1.0 {
        return Ok((-x).exp());
    }
    if x <= 0.5 {
        return Ok(mittag_leffler_series(beta, -x));
    }
    let t = x.powf(1.0 / beta);
    let (s, c) = (beta * PI).sin_cos();
    let integrand = |w: f64| (-t * w.powf(1.0 / beta)).exp() / (w * w + 2.0 * w * c + 1.0);
    let e = exp_sinh(integrand, 0.0, 1.0, Tol::new(1e-15, 1e-13))?;
    Ok(s / (beta * PI) * e.value)
}

/// Σ z^k / Γ(βk + 1); accurate for moderate |z|.
pub fn mittag_leffler_series(beta: f64, z: f64) -> f64 {
    let mut sum = 0.0;
    for k in 0..400 {
        let kf = k as f64;
        let lg = ln_gamma(beta * kf + 1.0);
        let mag = kf * z.abs().ln() - lg;
        let term = if k == 0 { 1.0 } else { z.signum().powi(k) * mag.exp() };
        sum += term;
        if k > 5 && term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// E|ζ₁|^p for the isotropic standard α-stable law in ℝ^d, −d < p < α.
pub fn stable_abs_moment(alpha: f64, d: usize, p: f64) -> Result<f64> {
    let df = d as f64;
    if !(p > -df && (p < alpha || alpha == 2.0)) {
        return Err(Error::Domain(format!("E|ζ|^{p} for α={alpha}, d={d}")));
    }
    if p == 0.0 {
        return Ok(1.0);
    }
    if alpha == 2.0 {
        // |ζ|² / 2 ~ Gamma(d/2): E|ζ|^p = 2^p Γ((d+p)/2)/Γ(d/2)
        return Ok(2f64.powf(p) * gamma((df + p) / 2.0) / gamma(df / 2.0));
    }
    Ok(2f64.powf(p) * gamma((df + p) / 2.0) * gamma(1.0 - p / alpha) / (gamma(df / 2.0) * gamma(1.0 - p / 2.0)))
}

/// p₁(0) of the standard α-stable law in ℝ^d.
pub fn stable_density_at_zero(alpha: f64, d: usize) -> f64 {
    let df = d as f64;
    sphere_area(d) * gamma(df / alpha) / (alpha * (2.0 * PI).powf(df))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_reference_values() {
        // Abramowitz & Stegun table 9.1
        assert!((bessel_j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!((bessel_j0(10.0) - (-0.245_935_764_451_348_3)).abs() < 1e-13);
        assert!((bessel_j1(1.0) - 0.440_050_585_744_933_5).abs() < 1e-14);
        assert!((bessel_j1(10.0) - 0.043_472_746_168_861_44).abs() < 1e-13);
        assert!((bessel_j0(30.0) - (-0.086_367_983_581_040_23)).abs() < 1e-13);
        assert!((bessel_j1(30.0) - (-0.118_751_062_616_623_05)).abs() < 1e-13);
    }

    #[test]
    fn bessel_branches_agree_at_switch() {
        for x in [BESSEL_SWITCH - 1e-9, BESSEL_SWITCH + 1e-9] {
            let (p, q) = hankel_pq(0.0, x);
            let chi = x - FRAC_PI_4;
            let asym = (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin());
            assert!((asym - bessel_series(0, x)).abs() < 1e-12);
        }
    }

    #[test]
    fn i0e_reference() {
        // I0(1) = 1.2660658777520084, I0(25)e^{-25} = 0.08019...
        assert!((bessel_i0e(1.0) - 1.266_065_877_752_008_4 * (-1f64).exp()).abs() < 1e-15);
        let v20 = bessel_i0e(20.0 - 1e-12);
        let v20b = bessel_i0e(20.0 + 1e-12);
        assert!((v20 - v20b).abs() < 1e-13);
    }

    #[test]
    fn mittag_leffler_branches_agree() {
        for beta in [0.3, 1.0 / 3.0, 0.5, 0.8] {
            for x in [0.5, 0.9] {
                let a = mittag_leffler_neg(beta, x).unwrap();
                let b = mittag_leffler_series(beta, -x);
                assert!((a - b).abs() < 1e-11, "β={beta} x={x}: {a} vs {b}");
            }
        }
        // high-precision series sums
        for (beta, x, want) in [
            (0.3, 2.0, 0.290_232_226_167_875_355),
            (0.3, 1.0, 0.456_594_408_329_690_671),
            (0.8, 2.0, 0.189_796_692_363_705_648),
        ] {
            assert!((mittag_leffler_neg(beta, x).unwrap() - want).abs() < 1e-13);
        }
        // E_{1/2}(−x) = e^{x²} erfc(x), scaled complementary error function
        for (x, want) in [(0.3, 0.734_599_334_567_655_4), (1.5, 0.321_585_416_454_317_6), (4.0, 0.136_999_457_625_061_4)] {
            assert!((mittag_leffler_neg(0.5, x).unwrap() - want).abs() < 1e-13);
        }
    }

    #[test]
    fn stable_moment_special_cases() {
        // Cauchy: E|ζ|^{1/2} = 1/cos(π/4) = √2
        let m = stable_abs_moment(1.0, 1, 0.5).unwrap();
        assert!((m - 2f64.sqrt()).abs() < 1e-13);
        // Gaussian variance 2: E ζ² = 2
        assert!((stable_abs_moment(2.0, 1, 2.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((stable_density_at_zero(1.0, 1) - 1.0 / PI).abs() < 1e-15);
        assert!((stable_density_at_zero(2.0, 2) - 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert!((stable_density_at_zero(1.0, 3) - 1.0 / (PI * PI)).abs() < 1e-15);
    }
}
