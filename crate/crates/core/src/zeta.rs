//! Riemann zeta: Euler-Maclaurin evaluation in the half-plane, functional
//! equation continuation on the left, and a Riemann-Siegel fast path on the
//! critical line for bulk moment integration.

use crate::error::{Error, Result};
use crate::gamma::log_gamma;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// B_{2k} / (2k)! for k = 1..=12 (Euler-Maclaurin tail weights).
const EM_COEF: [f64; 12] = [
    8.333_333_333_333_333e-2,     // B2/2!
    -1.388_888_888_888_888_9e-3,  // B4/4!
    3.306_878_306_878_306_9e-5,   // B6/6!
    -8.267_195_767_195_767e-7,    // B8/8!
    2.087_675_698_786_809_9e-8,   // B10/10!
    -5.284_190_138_687_493e-10,   // B12/12!
    1.338_253_653_068_467_6e-11,  // B14/14!
    -3.389_680_296_322_582_6e-13, // B16/16!
    8.586_062_056_277_845e-15,    // B18/18!
    -2.174_868_698_558_062e-16,   // B20/20!
    5.509_002_828_360_229_5e-18,  // B22/22!
    -1.395_446_468_581_252e-19,   // B24/24!
];

fn zeta_euler_maclaurin(s: Complex64) -> Complex64 {
    let t = s.im.abs();
    let n = (1.8 * t).ceil().max(24.0) as usize;
    let nf = n as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..n {
        sum += Complex64::from_polar((k as f64).powf(-s.re), -s.im * (k as f64).ln());
    }
    let n_ms = Complex64::from_polar(nf.powf(-s.re), -s.im * nf.ln());
    sum += n_ms * nf / (s - 1.0);
    sum += n_ms * 0.5;
    // Bernoulli tail: sum_j B_{2j}/(2j)! * (s)_{2j-1} * N^{-s-2j+1}
    let mut poch = s; // rising factorial (s)_{2j-1}, starting at j = 1
    let mut npow = n_ms / nf; // N^{-s-2j+1}, starting at j = 1
    for (j, c) in EM_COEF.iter().enumerate() {
        sum += *c * poch * npow;
        let k = 2.0 * (j + 1) as f64;
        poch *= (s + (k - 1.0)) * (s + k);
        npow /= nf * nf;
    }
    sum
}

/// chi(s) in zeta(s) = chi(s) zeta(1-s), computed in log space.
fn chi(s: Complex64) -> Result<Complex64> {
    // chi(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s)
    let lg = log_gamma(Complex64::new(1.0, 0.0) - s)?;
    let log_sin = crate::gamma::log_sin_pi(s / 2.0);
    Ok((s * std::f64::consts::LN_2 + (s - 1.0) * PI.ln() + log_sin + lg).exp())
}

/// Riemann zeta for general complex s away from the pole at 1.
///
/// Euler-Maclaurin for Re(s) >= 0, functional equation for Re(s) < 0.
/// Target: 1e-10 relative for |Im s| <= 1e4.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    let d = (s - Complex64::new(1.0, 0.0)).norm();
    if d < 1e-8 {
        return Err(Error::PoleProximity {
            context: "zeta at s = 1".into(),
            distance: d,
        });
    }
    if s.im.abs() > 1e6 {
        return Err(Error::Domain(format!(
            "zeta: |Im s| = {:.3e} beyond 1e6",
            s.im.abs()
        )));
    }
    if s.re < 0.0 {
        return Ok(chi(s)? * zeta_euler_maclaurin(Complex64::new(1.0, 0.0) - s));
    }
    Ok(zeta_euler_maclaurin(s))
}

// ---------------------------------------------------------------------------
// Riemann-Siegel on the critical line
// ---------------------------------------------------------------------------

/// theta(t) by the asymptotic series; accurate to ~1e-12 for t >= 50.
pub fn rs_theta(t: f64) -> f64 {
    let l = (t / (2.0 * PI)).ln();
    t / 2.0 * l - t / 2.0 - PI / 8.0 + 1.0 / (48.0 * t) + 7.0 / (5760.0 * t * t * t)
        + 31.0 / (80640.0 * t.powi(5))
}

/// psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p); numerator and
/// denominator share every zero, so the ratio extends to an entire function.
fn rs_psi(z: Complex64) -> Complex64 {
    let num = (2.0 * PI * (z * z - z - 0.0625)).cos();
    let den = (2.0 * PI * z).cos();
    num / den
}

struct RsTable {
    /// c[k][i]: correction C_k at p-node i; nodes p_i = (i as f64 - 1.0) * STEP.
    c: [Vec<f64>; 4],
    step: f64,
    n_nodes: usize,
}

static RS_TABLE: OnceLock<RsTable> = OnceLock::new();

/// Derivatives psi^(j)(p), j = 0..=9, by the Cauchy integral on a radius-1/2
/// circle (psi is entire; trapezoid on the circle is spectrally accurate).
fn psi_derivatives(p: f64) -> [f64; 10] {
    const M: usize = 128;
    const R: f64 = 0.5;
    let mut moments = [Complex64::new(0.0, 0.0); 10];
    for k in 0..M {
        let phi = 2.0 * PI * k as f64 / M as f64;
        let w = Complex64::from_polar(R, phi);
        let f = rs_psi(Complex64::new(p, 0.0) + w);
        let mut wp = Complex64::new(1.0, 0.0);
        for m in moments.iter_mut() {
            *m += f / wp;
            wp *= w;
        }
    }
    let mut out = [0.0f64; 10];
    let mut fact = 1.0f64;
    for j in 0..10 {
        if j > 0 {
            fact *= j as f64;
        }
        out[j] = (moments[j] / M as f64 * fact).re;
    }
    out
}

fn build_rs_table() -> RsTable {
    // Nodes straddle [0, 1] by one step each side so cubic interpolation
    // never needs one-sided stencils.
    const N: usize = 516;
    let step = 1.0 / 512.0;
    let mut c: [Vec<f64>; 4] = [
        Vec::with_capacity(N),
        Vec::with_capacity(N),
        Vec::with_capacity(N),
        Vec::with_capacity(N),
    ];
    for i in 0..N {
        let p = (i as f64 - 1.0) * step;
        let d = psi_derivatives(p);
        let pi2 = PI * PI;
        let pi4 = pi2 * pi2;
        let pi6 = pi4 * pi2;
        c[0].push(d[0]);
        c[1].push(-d[3] / (96.0 * pi2));
        c[2].push(d[2] / (64.0 * pi2) + d[6] / (18432.0 * pi4));
        c[3].push(-d[1] / (64.0 * pi2) - d[5] / (3840.0 * pi4) - d[9] / (5_308_416.0 * pi6));
    }
    RsTable {
        c,
        step,
        n_nodes: N,
    }
}

fn rs_corrections(p: f64) -> [f64; 4] {
    let tab = RS_TABLE.get_or_init(build_rs_table);
    // Catmull-Rom cubic on the uniform grid.
    let x = p / tab.step + 1.0;
    let i = (x.floor() as usize).clamp(1, tab.n_nodes - 3);
    let u = x - i as f64;
    let cm = |f0: f64, f1: f64, f2: f64, f3: f64| -> f64 {
        // Catmull-Rom spline through f0..f3 at parameter u in [0,1] between f1, f2
        let a = 2.0 * f1;
        let b = f2 - f0;
        let cc = 2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3;
        let d = -f0 + 3.0 * f1 - 3.0 * f2 + f3;
        0.5 * (a + b * u + cc * u * u + d * u * u * u)
    };
    let mut out = [0.0f64; 4];
    for k in 0..4 {
        let f = &tab.c[k];
        out[k] = cm(f[i - 1], f[i], f[i + 1], f[i + 2]);
    }
    out
}

/// Hardy Z(t) by Riemann-Siegel with four correction terms.
pub fn hardy_z(t: f64) -> Result<f64> {
    if t < 50.0 {
        return Err(Error::Domain(format!(
            "hardy_z: t = {t} below 50; use the Euler-Maclaurin zeta"
        )));
    }
    let a = (t / (2.0 * PI)).sqrt();
    let n = a.floor() as usize;
    let p = a - n as f64;
    let theta = rs_theta(t);
    let mut main = 0.0f64;
    for k in 1..=n {
        let kf = k as f64;
        main += (theta - t * kf.ln()).cos() / kf.sqrt();
    }
    main *= 2.0;
    let c = rs_corrections(p);
    let ainv = 1.0 / a;
    let corr = c[0] + ainv * (c[1] + ainv * (c[2] + ainv * c[3]));
    let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
    Ok(main + sign * a.sqrt().recip() * corr)
}

/// zeta(1/2 + i t) via Riemann-Siegel; t >= 50.
pub fn zeta_critical_fast(t: f64) -> Result<Complex64> {
    if t < 0.0 {
        return Ok(zeta_critical_fast(-t)?.conj());
    }
    let z = hardy_z(t)?;
    let theta = rs_theta(t);
    Ok(Complex64::from_polar(1.0, -theta) * z)
}
