//! Deterministic one-dimensional quadrature: globally adaptive Gauss–Legendre
//! with bisection error estimates, and double-exponential rules for endpoint
//! singularities and semi-infinite ranges.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tol {
    pub abs: f64,
    pub rel: f64,
}

impl Tol {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    pub fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.abs * factor, self.rel * factor)
    }
}

impl Default for Tol {
    fn default() -> Self {
        Self::new(1e-12, 1e-10)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: f64, error: f64) -> Self {
        Self { value, error }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0)
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate::new(self.value + o.value, self.error + o.error)
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = nf * (z * p - p0) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

pub(crate) fn gl15() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(15))
}

pub(crate) fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

#[inline]
pub(crate) fn apply_rule<F: FnMut(f64) -> f64>(rule: &(Vec<f64>, Vec<f64>), f: &mut F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for (x, w) in rule.0.iter().zip(&rule.1) {
        s += w * f(c + h * x);
    }
    s * h
}

struct Segment {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    err: f64,
}

impl Segment {
    fn new<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, whole: f64) -> Self {
        let rule = gl15();
        let m = 0.5 * (a + b);
        let left = apply_rule(rule, f, a, m);
        let right = apply_rule(rule, f, m, b);
        let mut err = (whole - left - right).abs();
        if !(m > a && m < b) {
            // Interval exhausted at machine resolution; nothing left to gain.
            err = 0.0;
        }
        Self { a, b, left, right, err }
    }
}

impl PartialEq for Segment {
    fn eq(&self, o: &Self) -> bool {
        self.err.total_cmp(&o.err) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Segment {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err).then(o.a.total_cmp(&self.a))
    }
}

const MAX_SEGMENTS: usize = 4000;

/// Globally adaptive 15-point Gauss–Legendre over the given breakpoints.
pub fn integrate_breaks<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], tol: Tol) -> Result<Estimate> {
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b > a {
            let whole = apply_rule(gl15(), &mut f, a, b);
            heap.push(Segment::new(&mut f, a, b, whole));
        }
    }
    if heap.is_empty() {
        return Ok(Estimate::zero());
    }
    let total = |h: &BinaryHeap<Segment>| {
        let mut v: Vec<&Segment> = h.iter().collect();
        v.sort_by(|x, y| x.a.total_cmp(&y.a));
        v.iter().fold((0.0, 0.0), |(s, e), g| (s + g.left + g.right, e + g.err))
    };
    let (mut value, mut error) = total(&heap);
    let mut since_sync = 0;
    loop {
        if !value.is_finite() {
            return Err(Error::Quadrature { estimate: value, error, requested: tol.target(value) });
        }
        if error <= tol.target(value) {
            break;
        }
        if heap.len() >= MAX_SEGMENTS {
            let (v, e) = total(&heap);
            if e <= tol.target(v) {
                break;
            }
            return Err(Error::Quadrature { estimate: v, error: e, requested: tol.target(v) });
        }
        let seg = heap.pop().expect("nonempty");
        if seg.err == 0.0 {
            heap.push(seg);
            break;
        }
        let m = 0.5 * (seg.a + seg.b);
        let l = Segment::new(&mut f, seg.a, m, seg.left);
        let r = Segment::new(&mut f, m, seg.b, seg.right);
        value += l.left + l.right + r.left + r.right - seg.left - seg.right;
        error += l.err + r.err - seg.err;
        heap.push(l);
        heap.push(r);
        since_sync += 1;
        if since_sync == 64 {
            (value, error) = total(&heap);
            since_sync = 0;
        }
    }
    let (v, e) = total(&heap);
    Ok(Estimate::new(v, e))
}

pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: Tol) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate::zero());
    }
    if b < a {
        let e = integrate(f, b, a, tol)?;
        return Ok(Estimate::new(-e.value, e.error));
    }
    integrate_breaks(f, &[a, b], tol)
}

/// ∫_a^∞ f via x = a + s·u/(1−u) on u ∈ [0,1). Suited to tails decaying faster
/// than x^{-2}; slower tails should use [`exp_sinh`].
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, scale: f64, tol: Tol) -> Result<Estimate> {
    let g = |u: f64| {
        let one_minus = 1.0 - u;
        let x = a + scale * u / one_minus;
        if !x.is_finite() {
            return 0.0;
        }
        f(x) * scale / (one_minus * one_minus)
    };
    integrate_breaks(g, &[0.0, 0.5, 0.9, 0.99, 1.0], tol)
}

const DE_MAX_LEVEL: u32 = 12;

fn de_sum<F: FnMut(f64) -> Option<f64>>(mut term: F, tol: Tol, t_max: f64) -> Result<Estimate> {
    // Level 0 on the integer lattice, then successive halvings adding odd nodes.
    let mut sum = term(0.0).unwrap_or(0.0);
    let mut k = 1.0;
    while k <= t_max {
        sum += term(k).unwrap_or(0.0) + term(-k).unwrap_or(0.0);
        k += 1.0;
    }
    let mut h = 1.0;
    let mut prev = sum * h;
    for level in 1..=DE_MAX_LEVEL {
        h *= 0.5;
        let mut t = h;
        let mut add = 0.0;
        while t <= t_max {
            add += term(t).unwrap_or(0.0) + term(-t).unwrap_or(0.0);
            t += 2.0 * h;
        }
        sum += add;
        let cur = sum * h;
        if !cur.is_finite() {
            return Err(Error::Quadrature { estimate: cur, error: f64::INFINITY, requested: tol.target(0.0) });
        }
        let err = (cur - prev).abs();
        if level >= 4 && err <= tol.target(cur) {
            return Ok(Estimate::new(cur, err));
        }
        prev = cur;
    }
    let err = f64::INFINITY;
    Err(Error::Quadrature { estimate: prev, error: err, requested: tol.target(prev) })
}

/// Tanh–sinh rule on [a, b]; tolerates integrable endpoint singularities.
/// Nodes are placed relative to the nearer endpoint so that singularities at
/// `a = 0` are resolved down to the underflow threshold.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tol) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate::zero());
    }
    let hw = 0.5 * (b - a);
    let term = |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        let e = (2.0 * u.abs()).exp();
        // distance from the nearer endpoint: hw·(1 − tanh|u|)
        let delta = hw * 2.0 / (e + 1.0);
        let x = if t < 0.0 { a + delta } else if t > 0.0 { b - delta } else { a + hw };
        if delta == 0.0 || (t < 0.0 && x == a) || (t > 0.0 && x == b) {
            return None;
        }
        let ch = u.cosh();
        let w = hw * FRAC_PI_2 * t.cosh() / (ch * ch);
        if w == 0.0 || !w.is_finite() {
            return None;
        }
        let v = f(x);
        Some(w * v)
    };
    de_sum(term, tol, 6.5)
}

/// Exp–sinh rule on [a, ∞) with x = a + s·exp(π/2·sinh t); handles algebraic
/// tails and singularities at `a`.
pub fn exp_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, scale: f64, tol: Tol) -> Result<Estimate> {
    let term = |t: f64| {
        let arg = FRAC_PI_2 * t.sinh();
        if arg > 700.0 {
            return None;
        }
        let e = arg.exp();
        let dx = scale * e;
        let x = a + dx;
        if dx == 0.0 || x == a || !x.is_finite() {
            return None;
        }
        let w = dx * FRAC_PI_2 * t.cosh();
        let v = f(x);
        if v == 0.0 {
            return Some(0.0);
        }
        Some(w * v)
    };
    de_sum(term, tol, 6.8)
}

/// ∫_{-∞}^{∞} f: tanh–sinh between consecutive breaks (kinks and integrable
/// singularities may sit on them), exp–sinh beyond the outermost ones.
pub fn over_line<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], tol: Tol) -> Result<Estimate> {
    let mut b: Vec<f64> = breaks.iter().copied().filter(|x| x.is_finite()).collect();
    b.sort_by(f64::total_cmp);
    b.dedup();
    let (lo, hi) = match (b.first(), b.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0.0, 0.0),
    };
    let mut e = exp_sinh(&mut f, hi, 1.0, tol)? + exp_sinh(|x| f(-x), -lo, 1.0, tol)?;
    for w in b.windows(2) {
        e = e + tanh_sinh(&mut f, w[0], w[1], tol)?;
    }
    Ok(e)
}

/// ∫_{-∞}^{∞} of an even function, folded to 2∫_0^∞.
pub fn even_over_line<F: FnMut(f64) -> f64>(f: F, breaks: &[f64], tail_scale: f64, tol: Tol) -> Result<Estimate> {
    let last = *breaks.last().unwrap_or(&0.0);
    let mut f = f;
    let inner = integrate_breaks(&mut f, breaks, tol.scaled(0.5))?;
    let outer = exp_sinh(&mut f, last, tail_scale, tol.scaled(0.5))?;
    let e = inner + outer;
    Ok(Estimate::new(2.0 * e.value, 2.0 * e.error))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(15);
        for p in 0..30 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
            let want = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "degree {p}: {got} vs {want}");
        }
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_peaks() {
        let e = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, Tol::new(1e-12, 1e-12)).unwrap();
        let want = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((e.value - want).abs() < 1e-9 * want);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        let e = tanh_sinh(|x| x.powf(-0.9), 0.0, 1.0, Tol::new(1e-10, 1e-10)).unwrap();
        assert!((e.value - 10.0).abs() < 1e-7, "{}", e.value);
        let e = tanh_sinh(|x| (1.0 - x * x).sqrt(), -1.0, 1.0, Tol::new(1e-13, 1e-13)).unwrap();
        assert!((e.value - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn exp_sinh_heavy_tail() {
        let e = exp_sinh(|x| x.powf(-1.25), 1.0, 1.0, Tol::new(1e-10, 1e-10)).unwrap();
        assert!((e.value - 4.0).abs() < 1e-8, "{}", e.value);
        let e = exp_sinh(|x| (-x).exp() / x.sqrt(), 0.0, 1.0, Tol::new(1e-12, 1e-12)).unwrap();
        assert!((e.value - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn mapped_infinity() {
        let e = integrate_to_infinity(|x| (-x * x).exp(), 0.0, 1.0, Tol::new(1e-13, 1e-12)).unwrap();
        assert!((e.value - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn unreachable_tolerance_is_an_error() {
        let r = integrate(|x| if x > 0.3 { 1.0 / (x - 0.3) } else { 0.0 }, 0.0, 1.0, Tol::new(1e-12, 1e-12));
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
