//! Moment integrals and their conjectural main terms: swap-set enumeration,
//! the 2^k-choose swap sum with (t/2pi)-power weights, weighted raw moments
//! on the critical line, the classical leading asymptotics, and the ladder
//! driver comparing all three.

use crate::dirichlet::z_factored;
use crate::divisor::{phase_average, LimitResult};
use crate::error::{Error, Result};
use crate::localfac::{a_k_constant, g_k_constant};
use crate::shifts::ShiftSet;
use crate::weight::{t_power_integral, WeightSpec};
use crate::zeta::{zeta, zeta_critical_fast};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// A swap pair (S, T): the index sets, the swapped shift tuple, and the
/// exponent of the (t/2pi) weight (the sum over the *original* selected
/// shifts).
#[derive(Debug, Clone)]
pub struct SwapPair {
    pub s_indices: Vec<usize>,
    pub t_indices: Vec<usize>,
    pub swapped_i: ShiftSet,
    pub swapped_j: ShiftSet,
    pub exponent_sum: Complex64,
}

/// All binom(k, j)^2 j-swaps: a_{i_r} is replaced by -b_{l_r} and b_{l_r} by
/// -a_{i_r}, pairing the r-th smallest indices of S and T.
pub fn swap_terms(i_set: &ShiftSet, j_set: &ShiftSet, j: usize) -> Result<Vec<SwapPair>> {
    let k = i_set.len();
    if j_set.len() != k {
        return Err(Error::Domain("swap_terms needs |I| = |J|".into()));
    }
    if j > k {
        return Err(Error::Domain(format!("swap count {j} exceeds k = {k}")));
    }
    let masks: Vec<u32> = (0..1u32 << k).filter(|m| m.count_ones() == j as u32).collect();
    let mut out = Vec::with_capacity(masks.len() * masks.len());
    for &ms in &masks {
        let s_idx: Vec<usize> = (0..k).filter(|&i| ms >> i & 1 == 1).collect();
        for &mt in &masks {
            let t_idx: Vec<usize> = (0..k).filter(|&i| mt >> i & 1 == 1).collect();
            let mut a: Vec<Complex64> = i_set.shifts().to_vec();
            let mut b: Vec<Complex64> = j_set.shifts().to_vec();
            for r in 0..j {
                a[s_idx[r]] = -j_set.get(t_idx[r]);
                b[t_idx[r]] = -i_set.get(s_idx[r]);
            }
            let mut e = Complex64::new(0.0, 0.0);
            for &i in &s_idx {
                e += i_set.get(i);
            }
            for &l in &t_idx {
                e += j_set.get(l);
            }
            out.push(SwapPair {
                s_indices: s_idx.clone(),
                t_indices: t_idx,
                swapped_i: ShiftSet::new(&a)?,
                swapped_j: ShiftSet::new(&b)?,
                exponent_sum: e,
            });
        }
    }
    Ok(out)
}

pub fn all_swap_terms(i_set: &ShiftSet, j_set: &ShiftSet) -> Result<Vec<SwapPair>> {
    let mut out = Vec::new();
    for j in 0..=i_set.len() {
        out.extend(swap_terms(i_set, j_set, j)?);
    }
    Ok(out)
}

/// The conjectural main term: sum over all swap pairs of
/// Z_{I_S, J_T}(0) * int (t/2pi)^{-S-T} omega(t) dt.
pub fn cfkrs_main_term(
    i_set: &ShiftSet,
    j_set: &ShiftSet,
    spec: &WeightSpec,
    p_max: u64,
) -> Result<Complex64> {
    // canonical entry order: the sum is a multiset function of the sets, and
    // sorting first makes it bitwise permutation-invariant despite the large
    // cancellation between swap terms
    let i_set = i_set.canonical();
    let j_set = j_set.canonical();
    let (i_set, j_set) = (&i_set, &j_set);
    let swaps = all_swap_terms(i_set, j_set)?;
    let mut total = Complex64::new(0.0, 0.0);
    for sp in &swaps {
        // every zeta argument 1 + x + y must stay clear of the pole
        for &x in sp.swapped_i.shifts() {
            for &y in sp.swapped_j.shifts() {
                let d = (x + y).norm();
                if d < 1e-4 {
                    return Err(Error::PoleProximity {
                        context: format!(
                            "cfkrs swap term S = {:?}, T = {:?} has zeta argument within {d:.2e} of the pole",
                            sp.s_indices, sp.t_indices
                        ),
                        distance: d,
                    });
                }
            }
        }
        let z = z_factored(&sp.swapped_i, &sp.swapped_j, Complex64::new(0.0, 0.0), p_max)?;
        let w = t_power_integral(spec, sp.exponent_sum)?;
        total += z * w;
    }
    Ok(total)
}

/// Regularization patterns for the zero-shift limit, truncated to size k.
fn moment_patterns(k: usize) -> (Vec<f64>, Vec<f64>) {
    let (pa, pb) = crate::divisor::regularization_patterns();
    (pa[..k].to_vec(), pb[..k].to_vec())
}

const PHASE_ORDER: usize = 6;

/// Zero-shift moment main term by the regularized limit: the shift pattern
/// is scaled by delta times 6th roots of unity (Cauchy mean), at radii delta
/// and delta/2, Richardson-combined on the leading delta^6 term.
pub fn cfkrs_zero_shift_limit(
    k: usize,
    spec: &WeightSpec,
    delta: f64,
    p_max: u64,
) -> Result<LimitResult> {
    let (pa, pb) = moment_patterns(k);
    let eval_at = |w: Complex64| -> Result<Complex64> {
        let ia: Vec<Complex64> = pa.iter().map(|&c| w * c).collect();
        let jb: Vec<Complex64> = pb.iter().map(|&c| w * c).collect();
        cfkrs_main_term(&ShiftSet::new(&ia)?, &ShiftSet::new(&jb)?, spec, p_max)
    };
    let s1 = phase_average(delta, PHASE_ORDER, eval_at)?;
    let s2 = phase_average(delta / 2.0, PHASE_ORDER, eval_at)?;
    let w = 2.0f64.powi(PHASE_ORDER as i32);
    let combined = (w * s2 - s1) / (w - 1.0);
    let spread = (s1 - s2).norm() / s2.norm().max(1e-300);
    Ok(LimitResult {
        value: combined.re,
        spread,
        unstable: spread > 0.01,
    })
}

/// Weighted raw moment: int prod_j zeta(1/2+a_j+it) zeta(1/2+b_j-it) omega(t) dt
/// by the trapezoid rule. Zero shifts ride the Riemann-Siegel fast path;
/// shifted sets go through the Euler-Maclaurin evaluator.
pub fn raw_moment(
    i_set: &ShiftSet,
    j_set: &ShiftSet,
    spec: &WeightSpec,
    step: f64,
) -> Result<Complex64> {
    let k = i_set.len();
    if j_set.len() != k {
        return Err(Error::Domain("raw_moment needs |I| = |J|".into()));
    }
    if spec.t_big > 1e4 {
        return Err(Error::Domain(format!(
            "raw_moment desk-scale cap: T = {} > 1e4",
            spec.t_big
        )));
    }
    let max_step = 0.022 / spec.t_big.ln();
    if step > max_step {
        return Err(Error::Domain(format!(
            "raw_moment step {step:.2e} coarser than 0.02/log T = {max_step:.2e}"
        )));
    }
    let (lo, hi) = spec.support();
    let zero_shift = i_set.shifts().iter().all(|s| s.norm() == 0.0)
        && j_set.shifts().iter().all(|s| s.norm() == 0.0);
    if zero_shift && lo < 50.0 {
        return Err(Error::Domain(
            "zero-shift raw moment needs support above t = 50 (Riemann-Siegel)".into(),
        ));
    }
    let n = ((hi - lo) / step).ceil() as usize;
    let chunk = 16_384usize;
    let ids: Vec<usize> = (0..=n).collect();
    let partial: Result<Vec<f64>> = ids
        .par_chunks(chunk)
        .map(|block| {
            let mut acc = 0.0f64;
            for &i in block {
                let t = lo + i as f64 * step;
                let w = spec.eval(t);
                if w == 0.0 {
                    continue;
                }
                let v = if zero_shift {
                    let z = crate::zeta::hardy_z(t)?;
                    z.abs().powi(2 * k as i32) * w
                } else {
                    let half = Complex64::new(0.5, 0.0);
                    let it = Complex64::new(0.0, t);
                    let mut prod = one();
                    for idx in 0..k {
                        prod *= zeta(half + i_set.get(idx) + it)?;
                        prod *= zeta(half + j_set.get(idx) - it)?;
                    }
                    (prod * w).re
                };
                acc += v;
            }
            Ok(acc)
        })
        .collect();
    let total: f64 = partial?.iter().sum();
    // the integrand vanishes at both endpoints, so plain sums are exact
    // trapezoid sums
    let value = total * step;
    if zero_shift {
        return Ok(Complex64::new(value, 0.0));
    }
    // shifted integrands are complex; redo the imaginary part in one pass
    let partial_im: Result<Vec<f64>> = ids
        .par_chunks(chunk)
        .map(|block| {
            let mut acc = 0.0f64;
            for &i in block {
                let t = lo + i as f64 * step;
                let w = spec.eval(t);
                if w == 0.0 {
                    continue;
                }
                let half = Complex64::new(0.5, 0.0);
                let it = Complex64::new(0.0, t);
                let mut prod = one();
                for idx in 0..k {
                    prod *= zeta(half + i_set.get(idx) + it)?;
                    prod *= zeta(half + j_set.get(idx) - it)?;
                }
                acc += (prod * w).im;
            }
            Ok(acc)
        })
        .collect();
    let total_im: f64 = partial_im?.iter().sum();
    Ok(Complex64::new(value, total_im * step))
}

/// Raw moment with a step-halving Richardson check (relative change must be
/// below `tol`).
pub fn raw_moment_checked(
    i_set: &ShiftSet,
    j_set: &ShiftSet,
    spec: &WeightSpec,
    step: f64,
    tol: f64,
) -> Result<Complex64> {
    let coarse = raw_moment(i_set, j_set, spec, step)?;
    let fine = raw_moment(i_set, j_set, spec, step / 2.0)?;
    let change = (coarse - fine).norm() / fine.norm().max(1e-300);
    if change > tol {
        return Err(Error::Refinement {
            context: "raw_moment trapezoid step",
            last_change: change,
            tol,
        });
    }
    Ok(fine)
}

/// Keating-Snaith leading asymptotic g_k a_k T (log T)^{k^2} / (k^2)!.
pub fn leading_asymptotic(k: u32, t_big: f64) -> Result<f64> {
    let gk = g_k_constant(k)?.as_f64();
    let ak = a_k_constant(k, 20_000)?.value.re;
    let k2 = (k * k) as u64;
    let mut fact = 1.0f64;
    for i in 2..=k2 {
        fact *= i as f64;
    }
    Ok(gk * ak / fact * t_big * t_big.ln().powi(k2 as i32))
}

#[derive(Debug, Clone)]
pub struct LadderEntry {
    pub t_big: f64,
    pub raw: f64,
    pub main_term: f64,
    pub main_spread: f64,
    pub leading: f64,
    pub ratio: f64,
}

/// Ladder of weighted zero-shift moments against the swap-sum main term and
/// the classical leading asymptotic, one entry per T.
pub fn moment_ladder(
    k: usize,
    t_values: &[f64],
    delta: f64,
    p_max: u64,
) -> Result<Vec<LadderEntry>> {
    if t_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("moment_ladder needs increasing T".into()));
    }
    if t_values.last().copied().unwrap_or(0.0) > 1e4 {
        return Err(Error::Domain("moment_ladder desk-scale cap is T = 1e4".into()));
    }
    let zeros = ShiftSet::from_reals(&vec![0.0; k])?;
    let mut out = Vec::with_capacity(t_values.len());
    for &t_big in t_values {
        let spec = WeightSpec::standard(t_big)?;
        let step = 0.02 / t_big.ln();
        let raw = raw_moment(&zeros, &zeros, &spec, step)?.re;
        let main = cfkrs_zero_shift_limit(k, &spec, delta, p_max)?;
        let leading = leading_asymptotic(k as u32, t_big)?;
        out.push(LadderEntry {
            t_big,
            raw,
            main_term: main.value,
            main_spread: main.spread,
            leading,
            ratio: raw / main.value,
        });
    }
    Ok(out)
}
