//! The smoothed approximate functional equation for
//! zeta_I(1/2+it) zeta_J(1/2-it): the even damping weight G, the Gamma-ratio
//! factors g and X, the inverse-Mellin weight V, and the full two-sided sum.

use crate::arith::{primes_up_to, sigma_prime_power};
use crate::error::{Error, Result};
use crate::gamma::log_gamma;
use crate::shifts::ShiftSet;
use crate::zeta::zeta;
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::PI;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

// ---------------------------------------------------------------------------
// Q polynomial and G weight
// ---------------------------------------------------------------------------

/// Even polynomial Q(s) = prod_rho (1 - s^2 / rho^2) held by its root list;
/// Q(0) = 1 by construction and Q(rho) = 0 for every stored root.
#[derive(Debug, Clone)]
pub struct QPolySpec {
    pub roots: Vec<Complex64>,
}

impl QPolySpec {
    /// The trivial spec Q = 1 (empty root set).
    pub fn trivial() -> Self {
        QPolySpec { roots: Vec::new() }
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let s2 = s * s;
        let mut v = one();
        for &rho in &self.roots {
            v *= one() - s2 / (rho * rho);
        }
        v
    }
}

/// The full symmetric orbit: roots 1/2 - (e_a a_i + e_b b_j)/2 over all nine
/// index pairs and both sign choices (36 points; evenness supplies the
/// negatives). This is the faithful maximal-symmetry choice; its degree-72
/// growth makes it unusable inside the V quadrature (see `GWeight`), but the
/// polynomial itself is perfectly evaluable near the origin.
pub fn build_q_poly(i_set: &ShiftSet, j_set: &ShiftSet) -> Result<QPolySpec> {
    let mut roots = Vec::with_capacity(36);
    for &ea in &[1.0, -1.0] {
        for &eb in &[1.0, -1.0] {
            for &a in i_set.shifts() {
                for &b in j_set.shifts() {
                    let rho = Complex64::new(0.5, 0.0) - (ea * a + eb * b) / 2.0;
                    if rho.norm() < 1e-8 {
                        return Err(Error::DegenerateShift {
                            context: "Q root at the origin cannot be normalized",
                            gap: rho.norm(),
                            min: 1e-8,
                        });
                    }
                    roots.push(rho);
                }
            }
        }
    }
    Ok(QPolySpec { roots })
}

/// Minimal admissible variant carrying only the named vanishing point
/// 1/2 - (a_1 + b_1)/2 (with evenness supplying its negative). Degree 2, so
/// the V integrand stays O(1) on the contour.
pub fn q_named_root(i_set: &ShiftSet, j_set: &ShiftSet) -> QPolySpec {
    QPolySpec {
        roots: vec![Complex64::new(0.5, 0.0) - (i_set.get(0) + j_set.get(0)) / 2.0],
    }
}

/// G(s) = Q(s) exp(lambda s^2): even, entire, rapid decay on vertical strips,
/// G(0) = 1.
///
/// lambda = 1 is the paper's footnote choice. The quadrature default uses the
/// degree-2 Q with lambda = 1/4: the 36-root orbit forces |Q(sigma+iu)| ~
/// (4u^2)^36 along any vertical line, which exp(s^2) only overcomes after the
/// integrand has accumulated ~1e40 of oscillating mass -- far beyond f64
/// cancellation. Any admissible G gives the same two-sum total (checked as a
/// property test), so conditioning is free.
#[derive(Debug, Clone)]
pub struct GWeight {
    pub q: QPolySpec,
    pub lambda: f64,
}

impl GWeight {
    pub fn paper(i_set: &ShiftSet, j_set: &ShiftSet) -> Result<Self> {
        Ok(GWeight {
            q: build_q_poly(i_set, j_set)?,
            lambda: 1.0,
        })
    }

    /// Well-conditioned default: degree-2 Q at the named vanishing point,
    /// lambda = 1/4.
    pub fn conditioned(i_set: &ShiftSet, j_set: &ShiftSet) -> Self {
        GWeight {
            q: q_named_root(i_set, j_set),
            lambda: 0.25,
        }
    }

    /// Alternative admissible choice for the stability property test.
    pub fn alternative() -> Self {
        GWeight {
            q: QPolySpec::trivial(),
            lambda: 1.0 / 9.0,
        }
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.q.eval(s) * (self.lambda * s * s).exp()
    }
}

/// Classic form G(s) = Q(s) exp(s^2) from the paper's footnote.
pub fn g_weight(q: &QPolySpec, s: Complex64) -> Complex64 {
    q.eval(s) * (s * s).exp()
}

// ---------------------------------------------------------------------------
// Gamma-ratio factors
// ---------------------------------------------------------------------------

/// g_{I,J}(s,t): the product of six Gamma ratios, exponentiated once.
/// g(0,t) = 1 exactly.
pub fn g_factor(i_set: &ShiftSet, j_set: &ShiftSet, s: Complex64, t: f64) -> Result<Complex64> {
    if s.norm() == 0.0 {
        return Ok(one());
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let it = Complex64::new(0.0, t);
    for idx in 0..i_set.len() {
        let a = i_set.get(idx);
        let b = j_set.get(idx);
        acc += log_gamma((Complex64::new(0.5, 0.0) + a + s + it) / 2.0)?;
        acc += log_gamma((Complex64::new(0.5, 0.0) + b + s - it) / 2.0)?;
        acc -= log_gamma((Complex64::new(0.5, 0.0) + a + it) / 2.0)?;
        acc -= log_gamma((Complex64::new(0.5, 0.0) + b - it) / 2.0)?;
    }
    Ok(acc.exp())
}

/// X_{I,J;t}: pi^{sum(a+b)} times six reflected Gamma ratios. Exactly 1 at
/// zero shifts (identical argument multisets).
pub fn x_factor(i_set: &ShiftSet, j_set: &ShiftSet, t: f64) -> Result<Complex64> {
    let mut acc = (i_set.sum() + j_set.sum()) * PI.ln();
    let it = Complex64::new(0.0, t);
    let half = Complex64::new(0.5, 0.0);
    for idx in 0..i_set.len() {
        let a = i_set.get(idx);
        let b = j_set.get(idx);
        acc += log_gamma((half - a - it) / 2.0)?;
        acc += log_gamma((half - b + it) / 2.0)?;
        acc -= log_gamma((half + a + it) / 2.0)?;
        acc -= log_gamma((half + b - it) / 2.0)?;
    }
    Ok(acc.exp())
}

// ---------------------------------------------------------------------------
// V weight: inverse Mellin transform on a vertical line
// ---------------------------------------------------------------------------

/// Quadrature parameters for the V integral.
#[derive(Debug, Clone)]
pub struct VQuad {
    /// Contour line Re(s) = sigma0 (shiftable right for decay checks).
    pub sigma0: f64,
    /// Trapezoid step in Im(s).
    pub step: f64,
    /// Truncation: |Im(s)| <= u_max.
    pub u_max: f64,
}

impl Default for VQuad {
    fn default() -> Self {
        // e^{lambda (sigma0^2 - U^2)} < 1e-16 for the default lambda = 1/4
        VQuad {
            sigma0: 1.0,
            step: 0.04,
            u_max: 13.0,
        }
    }
}

/// Precomputed contour data: G(s_j)/s_j * g_{I,J}(s_j, t) on the quadrature
/// nodes, so each V evaluation is a single weighted power sum.
pub struct VKernel {
    sigma0: f64,
    step: f64,
    nodes_u: Vec<f64>,
    coef: Vec<Complex64>,
}

impl VKernel {
    pub fn build(
        i_set: &ShiftSet,
        j_set: &ShiftSet,
        t: f64,
        g: &GWeight,
        quad: &VQuad,
    ) -> Result<Self> {
        let n = (2.0 * quad.u_max / quad.step).ceil() as usize + 1;
        let mut nodes_u = Vec::with_capacity(n);
        let mut coef = Vec::with_capacity(n);
        // denominator Gamma values are s-independent
        let it = Complex64::new(0.0, t);
        let half = Complex64::new(0.5, 0.0);
        let mut den = Complex64::new(0.0, 0.0);
        for idx in 0..i_set.len() {
            den += log_gamma((half + i_set.get(idx) + it) / 2.0)?;
            den += log_gamma((half + j_set.get(idx) - it) / 2.0)?;
        }
        for j in 0..n {
            let u = -quad.u_max + j as f64 * quad.step;
            let s = Complex64::new(quad.sigma0, u);
            let mut num = Complex64::new(0.0, 0.0);
            for idx in 0..i_set.len() {
                num += log_gamma((half + i_set.get(idx) + s + it) / 2.0)?;
                num += log_gamma((half + j_set.get(idx) + s - it) / 2.0)?;
            }
            let gfac = (num - den).exp();
            nodes_u.push(u);
            coef.push(g.eval(s) / s * gfac);
        }
        Ok(VKernel {
            sigma0: quad.sigma0,
            step: quad.step,
            nodes_u,
            coef,
        })
    }

    /// V(x) = (step / 2 pi) sum_j coef_j x^{-sigma0 - i u_j}.
    pub fn eval(&self, x: f64) -> Complex64 {
        let lx = x.ln();
        let amp = (-self.sigma0 * lx).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for (u, c) in self.nodes_u.iter().zip(&self.coef) {
            acc += c * Complex64::from_polar(1.0, -u * lx);
        }
        acc * amp * self.step / (2.0 * PI)
    }
}

/// V_{I,J;t}(x) with an automatic one-step Richardson refinement check:
/// halving the step and doubling the truncation must move the value by less
/// than `tol` relative (default 1e-8).
pub fn v_weight(
    i_set: &ShiftSet,
    j_set: &ShiftSet,
    t: f64,
    x: f64,
    g: &GWeight,
    quad: &VQuad,
) -> Result<Complex64> {
    if x <= 0.0 || t < 10.0 {
        return Err(Error::Domain("v_weight needs x > 0, t >= 10".into()));
    }
    let base = VKernel::build(i_set, j_set, t, g, quad)?.eval(x);
    let fine = VKernel::build(
        i_set,
        j_set,
        t,
        g,
        &VQuad {
            sigma0: quad.sigma0,
            step: quad.step / 2.0,
            u_max: quad.u_max * 2.0,
        },
    )?
    .eval(x);
    let scale = base.norm().max(1e-300);
    let change = (base - fine).norm() / scale.max(1e-12);
    if change > 1e-8 && (base - fine).norm() > 1e-14 {
        return Err(Error::Refinement {
            context: "v_weight quadrature",
            last_change: change,
            tol: 1e-8,
        });
    }
    Ok(fine)
}

// ---------------------------------------------------------------------------
// V on a log-spaced table (bulk AFE summation)
// ---------------------------------------------------------------------------

struct VTable {
    ln_min: f64,
    dln: f64,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl VTable {
    fn build(kernel: &VKernel, x_min: f64, x_max: f64) -> Self {
        let dln = 0.01;
        let ln_min = x_min.ln() - 2.0 * dln;
        let n = ((x_max.ln() - ln_min) / dln).ceil() as usize + 4;
        let mut re = Vec::with_capacity(n);
        let mut im = Vec::with_capacity(n);
        for i in 0..n {
            let v = kernel.eval((ln_min + i as f64 * dln).exp());
            re.push(v.re);
            im.push(v.im);
        }
        VTable {
            ln_min,
            dln,
            re,
            im,
        }
    }

    #[inline]
    fn eval_ln(&self, lx: f64) -> Complex64 {
        let x = (lx - self.ln_min) / self.dln;
        let i = (x as usize).clamp(1, self.re.len() - 3);
        let u = x - i as f64;
        let cm = |f: &[f64]| -> f64 {
            let (f0, f1, f2, f3) = (f[i - 1], f[i], f[i + 1], f[i + 2]);
            let a = 2.0 * f1;
            let b = f2 - f0;
            let c = 2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3;
            let d = -f0 + 3.0 * f1 - 3.0 * f2 + f3;
            0.5 * (a + u * (b + u * (c + u * d)))
        };
        Complex64::new(cm(&self.re), cm(&self.im))
    }
}

// ---------------------------------------------------------------------------
// Bulk shifted-sigma machinery
// ---------------------------------------------------------------------------

/// sigma values for two shift sets over a contiguous block [lo, lo+len),
/// by a segmented factor sieve.
fn sigma_block(
    sets: (&ShiftSet, &ShiftSet),
    lo: u64,
    len: usize,
    primes: &[u64],
    cache: &HashMap<(u64, u32), (Complex64, Complex64)>,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut rem: Vec<u64> = (lo..lo + len as u64).collect();
    let mut s1 = vec![one(); len];
    let mut s2 = vec![one(); len];
    for &p in primes {
        if p * p > lo + len as u64 {
            break;
        }
        let mut m = lo.div_ceil(p) * p;
        while m < lo + len as u64 {
            let idx = (m - lo) as usize;
            let mut a = 0u32;
            while rem[idx] % p == 0 {
                rem[idx] /= p;
                a += 1;
            }
            if a > 0 {
                if let Some(&(v1, v2)) = cache.get(&(p, a)) {
                    s1[idx] *= v1;
                    s2[idx] *= v2;
                } else {
                    s1[idx] *= sigma_prime_power(sets.0, p as f64, a);
                    s2[idx] *= sigma_prime_power(sets.1, p as f64, a);
                }
            }
            m += p;
        }
    }
    // leftover large prime cofactors
    for idx in 0..len {
        let q = rem[idx];
        if q > 1 {
            let lq = (q as f64).ln();
            let mut v1 = Complex64::new(0.0, 0.0);
            for &x in sets.0.shifts() {
                v1 += (-x * lq).exp();
            }
            let mut v2 = Complex64::new(0.0, 0.0);
            for &x in sets.1.shifts() {
                v2 += (-x * lq).exp();
            }
            s1[idx] *= v1;
            s2[idx] *= v2;
        }
    }
    (s1, s2)
}

fn sigma_pp_cache(
    sets: (&ShiftSet, &ShiftSet),
    primes: &[u64],
    n_max: u64,
) -> HashMap<(u64, u32), (Complex64, Complex64)> {
    let mut cache = HashMap::new();
    for &p in primes {
        let mut pa = p;
        let mut a = 1u32;
        loop {
            cache.insert(
                (p, a),
                (
                    sigma_prime_power(sets.0, p as f64, a),
                    sigma_prime_power(sets.1, p as f64, a),
                ),
            );
            if pa > n_max / p {
                break;
            }
            pa *= p;
            a += 1;
        }
    }
    cache
}

// ---------------------------------------------------------------------------
// The full approximate functional equation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct AfeParams {
    /// Cap on the mn truncation (None: decay-driven, bounded by the
    /// t^3 log^2 t / pi^3 default).
    pub mn_cap: Option<u64>,
    pub quad: VQuad,
    /// Weight choice; None picks the conditioned default.
    pub g: Option<GWeight>,
}

impl Default for AfeParams {
    fn default() -> Self {
        AfeParams {
            mn_cap: None,
            quad: VQuad::default(),
            g: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AfeResult {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub mn_max: u64,
    pub terms: u64,
    pub v_boundary: f64,
}

/// One smoothed double sum: sum_{mn <= M} s1(m) s2(n) (mn)^{-1/2} (m/n)^{-it}
/// V(pi^3 mn), with s1 over the small-m tables and s2 block-sieved.
#[allow(clippy::too_many_arguments)]
fn half_sum(
    small_sets: (&ShiftSet, &ShiftSet),
    block_sets: (&ShiftSet, &ShiftSet),
    t: f64,
    mn_max: u64,
    v1: &VTable,
    v2: &VTable,
    primes: &[u64],
    exclude_small_n: bool,
) -> (Complex64, Complex64, u64) {
    // small-m tables: sigma * m^{-1/2} * e^{-i t ln m}, for both sum variants
    let m_lim = (mn_max as f64).sqrt().floor() as u64;
    let mut tab1: Vec<Complex64> = Vec::with_capacity(m_lim as usize + 1);
    let mut tab2: Vec<Complex64> = Vec::with_capacity(m_lim as usize + 1);
    let mut ln_m: Vec<f64> = Vec::with_capacity(m_lim as usize + 1);
    tab1.push(Complex64::new(0.0, 0.0));
    tab2.push(Complex64::new(0.0, 0.0));
    ln_m.push(0.0);
    for m in 1..=m_lim {
        let f = crate::arith::factorize(m);
        let s1 = crate::arith::sigma_shifted_from_factors(small_sets.0, &f.factors);
        let s2 = crate::arith::sigma_shifted_from_factors(small_sets.1, &f.factors);
        let lm = (m as f64).ln();
        let w = Complex64::from_polar((m as f64).powf(-0.5), -t * lm);
        tab1.push(s1 * w);
        tab2.push(s2 * w);
        ln_m.push(lm);
    }
    let ln_pi3 = 3.0 * PI.ln();
    const BLOCK: usize = 65_536;
    let n_lo: u64 = if exclude_small_n { m_lim + 1 } else { 1 };
    if n_lo > mn_max {
        return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0);
    }
    let n_blocks = ((mn_max - n_lo) as usize) / BLOCK + 1;
    let cache = sigma_pp_cache(block_sets, primes, mn_max);
    let partials: Vec<(Complex64, Complex64, u64)> = (0..n_blocks)
        .into_par_iter()
        .map(|bi| {
            let lo = n_lo + (bi * BLOCK) as u64;
            let len = BLOCK.min((mn_max - lo + 1) as usize);
            let (sb1, sb2) = sigma_block(block_sets, lo, len, primes, &cache);
            let mut acc1 = Complex64::new(0.0, 0.0);
            let mut acc2 = Complex64::new(0.0, 0.0);
            let mut terms = 0u64;
            for (idx, n) in (lo..lo + len as u64).enumerate() {
                let m_hi = (mn_max / n).min(m_lim);
                if m_hi == 0 {
                    continue;
                }
                let ln_n = (n as f64).ln();
                let wn = Complex64::from_polar((n as f64).powf(-0.5), t * ln_n);
                let row1 = sb1[idx] * wn;
                let row2 = sb2[idx] * wn;
                let base_ln = ln_pi3 + ln_n;
                let mut inner1 = Complex64::new(0.0, 0.0);
                let mut inner2 = Complex64::new(0.0, 0.0);
                for m in 1..=m_hi as usize {
                    let v1v = v1.eval_ln(base_ln + ln_m[m]);
                    let v2v = v2.eval_ln(base_ln + ln_m[m]);
                    inner1 += tab1[m] * v1v;
                    inner2 += tab2[m] * v2v;
                }
                acc1 += row1 * inner1;
                acc2 += row2 * inner2;
                terms += m_hi;
            }
            (acc1, acc2, terms)
        })
        .collect();
    let mut s1 = Complex64::new(0.0, 0.0);
    let mut s2 = Complex64::new(0.0, 0.0);
    let mut terms = 0u64;
    for (a, b, c) in partials {
        s1 += a;
        s2 += b;
        terms += c;
    }
    (s1, s2, terms)
}

/// Evaluate both sides of the smoothed functional equation at height t.
pub fn afe_evaluate(
    i_set: &ShiftSet,
    j_set: &ShiftSet,
    t: f64,
    params: &AfeParams,
) -> Result<AfeResult> {
    if !(50.0..=5000.0).contains(&t) {
        return Err(Error::Domain(format!(
            "afe_evaluate: t = {t} outside the desk-scale window [50, 5000]"
        )));
    }
    let g = params
        .g
        .clone()
        .unwrap_or_else(|| GWeight::conditioned(i_set, j_set));
    let neg_j = j_set.negated();
    let neg_i = i_set.negated();
    let k1 = VKernel::build(i_set, j_set, t, &g, &params.quad)?;
    let k2 = VKernel::build(&neg_j, &neg_i, t, &g, &params.quad)?;
    // truncation: walk out in x until both V weights are below 1e-8, then
    // cap at the t^3 log^2 t / pi^3 default
    let spec_cap = (t.powi(3) * t.ln().powi(2) / PI.powi(3)) as u64;
    let mn_max = match params.mn_cap {
        Some(cap) => cap,
        None => {
            let mut m = (t.powi(3) / (8.0 * PI.powi(3))) as u64 + 10;
            loop {
                let x = PI.powi(3) * m as f64;
                if k1.eval(x).norm().max(k2.eval(x).norm()) < 1e-8 {
                    break;
                }
                m = (m as f64 * 1.25) as u64;
                if m >= spec_cap {
                    m = spec_cap;
                    break;
                }
            }
            (m + m / 10).min(spec_cap.max(1000))
        }
    };
    let x_bound = PI.powi(3) * mn_max as f64;
    let v_boundary = k1.eval(x_bound).norm().max(k2.eval(x_bound).norm());
    if v_boundary > 1e-8 {
        return Err(Error::Truncation(format!(
            "afe cutoff mn <= {mn_max} leaves |V| = {v_boundary:.3e} at the boundary"
        )));
    }
    let vt1 = VTable::build(&k1, PI.powi(3), x_bound * 1.05);
    let vt2 = VTable::build(&k2, PI.powi(3), x_bound * 1.05);
    let primes = primes_up_to((mn_max as f64).sqrt() as usize + 2);
    // part (a): m <= sqrt(M) (small tables), n block-sieved over everything
    let (a1, a2, terms_a) = half_sum(
        (i_set, &neg_j),
        (j_set, &neg_i),
        t,
        mn_max,
        &vt1,
        &vt2,
        &primes,
        false,
    );
    // part (b): n <= sqrt(M) small, m > sqrt(M) block-sieved; the conjugate
    // role swap means t -> -t and the V argument is symmetric in (m, n)
    let (b1, b2, terms_b) = half_sum(
        (j_set, &neg_i),
        (i_set, &neg_j),
        -t,
        mn_max,
        &vt1,
        &vt2,
        &primes,
        true,
    );
    let sum_main = a1 + b1;
    let sum_mirror = a2 + b2;
    let xf = x_factor(i_set, j_set, t)?;
    let rhs = sum_main + xf * sum_mirror;
    // direct side
    let half = Complex64::new(0.5, 0.0);
    let it = Complex64::new(0.0, t);
    let mut lhs = one();
    for idx in 0..i_set.len() {
        lhs *= zeta(half + i_set.get(idx) + it)?;
        lhs *= zeta(half + j_set.get(idx) - it)?;
    }
    Ok(AfeResult {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
        mn_max,
        terms: terms_a + terms_b,
        v_boundary,
    })
}
