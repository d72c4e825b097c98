//! The smooth moment weight omega and its t-power integrals.

use crate::divisor::smoothstep;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Smooth weight supported in [c1 T, c2 T], ramping over width T0 at both
/// ends and identically 1 on the plateau between.
#[derive(Debug, Clone)]
pub struct WeightSpec {
    pub t_big: f64,
    pub t0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl WeightSpec {
    pub fn new(t_big: f64, t0: f64, c1: f64, c2: f64) -> Result<Self> {
        if !(0.0 < c1 && c1 < c2) {
            return Err(Error::Domain(format!(
                "weight needs 0 < c1 < c2; got c1 = {c1}, c2 = {c2}"
            )));
        }
        if t0 < t_big.powf(0.75) {
            return Err(Error::Domain(format!(
                "weight needs T0 >= T^(3/4); got T0 = {t0}, T^(3/4) = {}",
                t_big.powf(0.75)
            )));
        }
        if (c2 - c1) * t_big < 2.0 * t0 {
            return Err(Error::Domain(format!(
                "no plateau: (c2 - c1) T = {} < 2 T0 = {}",
                (c2 - c1) * t_big,
                2.0 * t0
            )));
        }
        Ok(WeightSpec { t_big, t0, c1, c2 })
    }

    /// c1 = 0.5, c2 = 1.0 (c1 = 0.25 below T = 300), T0 = T^0.8 clamped so
    /// a plateau survives; the clamp stays inside the T^{3/4} .. T window for
    /// every desk-scale T.
    pub fn standard(t_big: f64) -> Result<Self> {
        let c1 = if t_big >= 300.0 { 0.5 } else { 0.25 };
        let t0 = t_big.powf(0.8).min(0.49 * (1.0 - c1) * t_big);
        Self::new(t_big, t0, c1, 1.0)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.c1 * self.t_big, self.c2 * self.t_big)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (lo, hi) = self.support();
        if t <= lo || t >= hi {
            return 0.0;
        }
        smoothstep((t - lo) / self.t0) * smoothstep((hi - t) / self.t0)
    }

    /// Exact mass of the weight: plateau plus two half-ramps,
    /// (c2 - c1) T - T0 (the exp-step is symmetric about its midpoint).
    pub fn mass(&self) -> f64 {
        (self.c2 - self.c1) * self.t_big - self.t0
    }
}

fn gl16() -> &'static ([f64; 8], [f64; 8]) {
    crate::divisor::gauss_legendre_16()
}

/// int (t / 2 pi)^{-e} omega(t) dt by fixed-panel Gauss-Legendre
/// (8 panels per ramp, 24 on the plateau; fixed nodes keep the result
/// analytic in e for the regularized limits).
pub fn t_power_integral(spec: &WeightSpec, e: Complex64) -> Result<Complex64> {
    if e.norm() > 1.0 {
        return Err(Error::Domain(format!(
            "t_power_integral needs |e| <= 1; got {}",
            e.norm()
        )));
    }
    let (lo, hi) = spec.support();
    let (xs, ws) = gl16();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut add_panel = |a: f64, b: f64| {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for k in 0..8 {
            for sgn in [-1.0f64, 1.0] {
                let t = mid + sgn * half * xs[k];
                let w = spec.eval(t);
                if w == 0.0 {
                    continue;
                }
                acc += crate::localfac::p_pow(t / (2.0 * PI), -e) * (w * ws[k] * half);
            }
        }
    };
    let ramp_panels = 8;
    for i in 0..ramp_panels {
        let step = spec.t0 / ramp_panels as f64;
        add_panel(lo + i as f64 * step, lo + (i + 1) as f64 * step);
        add_panel(
            hi - spec.t0 + i as f64 * step,
            hi - spec.t0 + (i + 1) as f64 * step,
        );
    }
    let plat_lo = lo + spec.t0;
    let plat_hi = hi - spec.t0;
    let plat_panels = 24;
    for i in 0..plat_panels {
        let step = (plat_hi - plat_lo) / plat_panels as f64;
        add_panel(plat_lo + i as f64 * step, plat_lo + (i + 1) as f64 * step);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn omega_shape() {
        let spec = WeightSpec::standard(2000.0).unwrap();
        assert_eq!(spec.eval(900.0), 0.0);
        assert_eq!(spec.eval(2100.0), 0.0);
        assert_eq!(spec.eval(1500.0), 1.0); // plateau midpoint
    }

    #[test]
    fn omega_derivative_probe() {
        // |omega'| <= 4 / T0 on the ramp, by central differences
        let spec = WeightSpec::standard(2000.0).unwrap();
        let (lo, _) = spec.support();
        let h = 0.05;
        let mut worst: f64 = 0.0;
        for i in 0..200 {
            let t = lo + spec.t0 * i as f64 / 200.0;
            let d = (spec.eval(t + h) - spec.eval(t - h)) / (2.0 * h);
            worst = worst.max(d.abs());
        }
        assert!(worst <= 4.0 / spec.t0, "|omega'| = {worst:.3e}");
    }

    #[test]
    fn no_plateau_rejected() {
        assert!(WeightSpec::new(1000.0, 400.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn t_power_integral_at_zero_matches_mass() {
        let spec = WeightSpec::standard(3000.0).unwrap();
        let v = t_power_integral(&spec, c(0.0, 0.0)).unwrap();
        // direct trapezoid oracle
        let (lo, hi) = spec.support();
        let n = 400_000;
        let h = (hi - lo) / n as f64;
        let mut direct = 0.0;
        for i in 0..=n {
            let w = spec.eval(lo + i as f64 * h);
            direct += if i == 0 || i == n { 0.5 * w } else { w };
        }
        direct *= h;
        assert!((v.re - direct).abs() < 1e-6 * direct, "{} vs {direct}", v.re);
        assert!((v.re - spec.mass()).abs() < 1e-6 * spec.mass());
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn t_power_integral_midpoint_approximation() {
        // e = 0.01: matches (Tbar / 2 pi)^{-e} * mass within 1%
        let spec = WeightSpec::standard(3000.0).unwrap();
        let e = c(0.01, 0.0);
        let v = t_power_integral(&spec, e).unwrap();
        let tbar = 0.5 * (spec.c1 + spec.c2) * spec.t_big;
        let approx = (tbar / (2.0 * PI)).powf(-0.01) * spec.mass();
        assert!((v.re - approx).abs() < 0.01 * approx);
    }

    #[test]
    fn t_power_integral_conjugation() {
        let spec = WeightSpec::standard(1500.0).unwrap();
        let e = c(0.013, 0.021);
        let v1 = t_power_integral(&spec, e).unwrap();
        let v2 = t_power_integral(&spec, e.conj()).unwrap();
        assert!((v1.conj() - v2).norm() < 1e-12 * v1.norm());
    }

    #[test]
    fn t_power_e_bound() {
        let spec = WeightSpec::standard(1500.0).unwrap();
        assert!(t_power_integral(&spec, c(1.2, 0.0)).is_err());
    }
}
