//! Global Dirichlet series: zeta_X, the correlation series Z_{X,Y}(s) by
//! truncated summation and by zeta-factorization, and the shifted-correlation
//! series H by double summation and by its factorization.

use crate::arith::{sieve_mobius, sigma_prime_power, SpfTable};
use crate::error::{Error, Result};
use crate::localfac::{a_local_poly, big_g_local, c_local, euler_product, LocalPoint};
use crate::shifts::ShiftSet;
use crate::zeta::zeta;
use num_complex::Complex64;
use std::collections::HashMap;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Truncated-series value with bookkeeping.
#[derive(Debug, Clone)]
pub struct SeriesValue {
    pub value: Complex64,
    pub terms_used: u64,
    /// Heuristic integral-comparison tail; labeled, not rigorous.
    pub tail_estimate: f64,
}

/// zeta_X(s) = prod_{x in X} zeta(s + x).
pub fn zeta_shifted(x: &ShiftSet, s: Complex64) -> Result<Complex64> {
    let mut v = one();
    for &xs in x.shifts() {
        v *= zeta(s + xs)?;
    }
    Ok(v)
}

/// Z_{X,Y}(s) = sum sigma_X(n) sigma_Y(n) / n^{1+s}, truncated at N.
pub fn z_truncated(
    x: &ShiftSet,
    y: &ShiftSet,
    s: Complex64,
    n_max: u64,
) -> Result<SeriesValue> {
    if s.re < 0.5 {
        return Err(Error::Domain(format!(
            "z_truncated needs Re(s) >= 0.5 for usable convergence; got {}",
            s.re
        )));
    }
    let spf = SpfTable::new(n_max as usize)?;
    let mut cache: HashMap<(u64, u32), Complex64> = HashMap::new();
    let mut sum = one(); // n = 1 term
    let mut last_band = 0.0f64;
    let band_start = (n_max as f64 * 0.9) as u64;
    for n in 2..=n_max {
        let mut coeff = one();
        for (p, a) in spf.factor(n as usize) {
            let key = (p, a);
            let sig = *cache.entry(key).or_insert_with(|| {
                sigma_prime_power(x, p as f64, a) * sigma_prime_power(y, p as f64, a)
            });
            coeff *= sig;
        }
        let nf = n as f64;
        let term = coeff * Complex64::from_polar(nf.powf(-1.0 - s.re), -s.im * nf.ln());
        sum += term;
        if n >= band_start {
            last_band += coeff.norm() / nf;
        }
    }
    // integral comparison: sum_{n > N} |ss| n^{-1-sigma} ~ rho N^{-sigma}/sigma
    // with the coefficient size rho averaged over the last band of terms
    // (sum of |ss|/n over the band divides out to rho ln(N/band_start))
    let rho = last_band / (n_max as f64 / band_start as f64).ln();
    let tail = 1.6 * rho * (n_max as f64).powf(-s.re) / s.re.max(0.05);
    Ok(SeriesValue {
        value: sum,
        terms_used: n_max,
        tail_estimate: tail,
    })
}

/// Z_{X,Y}(s) through the zeta-factorization; this *is* the analytic
/// continuation. k = 1 is a single zeta, k = 2 the Ramanujan quotient,
/// k = 3 nine zetas times the Euler product of the local polynomial.
pub fn z_factored(
    x: &ShiftSet,
    y: &ShiftSet,
    s: Complex64,
    p_max: u64,
) -> Result<Complex64> {
    let k = x.len();
    if y.len() != k {
        return Err(Error::Domain("z_factored needs |X| = |Y|".into()));
    }
    if s.re <= -0.4 {
        return Err(Error::Domain(format!(
            "z_factored outside convergence region: Re(s) = {} <= -0.4",
            s.re
        )));
    }
    // pole guard on every zeta argument
    for &xs in x.shifts() {
        for &ys in y.shifts() {
            let d = (s + xs + ys).norm();
            if d < 1e-8 {
                return Err(Error::PoleProximity {
                    context: "z_factored zeta argument at 1 + s + x + y".into(),
                    distance: d,
                });
            }
        }
    }
    let mut zetas = one();
    for &xs in x.shifts() {
        for &ys in y.shifts() {
            zetas *= zeta(one() + s + xs + ys)?;
        }
    }
    match k {
        1 => Ok(zetas),
        2 => {
            let total: Complex64 = x.sum() + y.sum();
            Ok(zetas / zeta(Complex64::new(2.0, 0.0) + 2.0 * s + total)?)
        }
        3 => {
            let prod = euler_product(
                |p| Ok(a_local_poly(&LocalPoint::new(p, s, x, y)?)),
                p_max,
                s.re,
            )?;
            Ok(zetas * prod.value)
        }
        _ => unreachable!(),
    }
}

/// Multiplicative table of G_X(s0, l) for l = 1..=l_max via the SPF sieve.
fn big_g_table(
    x: &ShiftSet,
    s0: Complex64,
    l_max: u64,
    spf: &SpfTable,
) -> Result<Vec<Complex64>> {
    let mut cache: HashMap<(u64, u32), Complex64> = HashMap::new();
    let mut out = vec![one(); l_max as usize + 1];
    out[0] = Complex64::new(0.0, 0.0);
    for l in 2..=l_max as usize {
        let mut v = one();
        for (p, a) in spf.factor(l) {
            let g = match cache.entry((p, a)) {
                std::collections::hash_map::Entry::Occupied(e) => *e.get(),
                std::collections::hash_map::Entry::Vacant(e) => {
                    *e.insert(big_g_local(x, s0, p, a)?)
                }
            };
            v *= g;
        }
        out[l] = v;
    }
    Ok(out)
}

/// H_{I,J;{a1},{b1}}(s): double sum over r <= R, l <= L of
/// c_l(r) G_I(1-a1,l) G_J(1-b1,l) / (l^{2-a1-b1} r^{a1+b1+2s}).
///
/// The Ramanujan sum is opened into its divisor form, which reorganizes the
/// double sum into prefix power sums; the truncation set is exactly
/// {r <= R} x {l <= L}.
pub fn h_truncated(
    i_set: &ShiftSet,
    j_set: &ShiftSet,
    s: Complex64,
    r_max: u64,
    l_max: u64,
) -> Result<SeriesValue> {
    if s.re <= 0.55 {
        return Err(Error::Domain(format!(
            "h_truncated needs Re(s) > 0.55; got {}",
            s.re
        )));
    }
    let a1 = i_set.get(0);
    let b1 = j_set.get(0);
    let c_exp = a1 + b1 + 2.0 * s; // r-exponent
    let spf = SpfTable::new(l_max as usize)?;
    let gi = big_g_table(i_set, one() - a1, l_max, &spf)?;
    let gj = big_g_table(j_set, one() - b1, l_max, &spf)?;
    let mu = sieve_mobius(l_max as usize);
    // prefix sums T_m = sum_{k<=m} k^{-c}
    let mut prefix = vec![Complex64::new(0.0, 0.0); r_max as usize + 1];
    for r in 1..=r_max as usize {
        let rf = r as f64;
        prefix[r] =
            prefix[r - 1] + Complex64::from_polar(rf.powf(-c_exp.re), -c_exp.im * rf.ln());
    }
    let w = |l: u64| -> Complex64 {
        let lf = l as f64;
        gi[l as usize]
            * gj[l as usize]
            * Complex64::from_polar(
                lf.powf(-(2.0 - a1.re - b1.re)),
                (a1.im + b1.im) * lf.ln(),
            )
    };
    // half-truncation value rides along for the tail estimate
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_half = Complex64::new(0.0, 0.0);
    for d in 1..=l_max {
        let df = d as f64;
        let d_pow = Complex64::from_polar(df.powf(1.0 - c_exp.re), -c_exp.im * df.ln());
        let reach = r_max / d;
        if reach == 0 {
            break;
        }
        let s_d = d_pow * prefix[reach as usize];
        let s_d_half = d_pow * prefix[(r_max / 2 / d) as usize];
        let mut m = 1u64;
        while d * m <= l_max {
            let mv = mu[m as usize];
            if mv != 0 {
                let contribution = w(d * m) * mv as f64;
                total += contribution * s_d;
                if d * m <= l_max / 2 {
                    total_half += contribution * s_d_half;
                }
            }
            m += 1;
        }
    }
    let tail = 2.0 * (total - total_half).norm();
    Ok(SeriesValue {
        value: total,
        terms_used: r_max * l_max,
        tail_estimate: tail,
    })
}

/// H by its factorization: zeta(a1+b1+2s) times the four
/// zeta(1+a_k1+b_k2+2s), times the Euler product of the C local factor.
pub fn h_factored(
    i_set: &ShiftSet,
    j_set: &ShiftSet,
    s: Complex64,
    p_max: u64,
) -> Result<Complex64> {
    if s.re <= -0.4 {
        return Err(Error::Domain(format!(
            "h_factored outside convergence region: Re(s) = {}",
            s.re
        )));
    }
    let a1 = i_set.get(0);
    let b1 = j_set.get(0);
    let lead_arg = a1 + b1 + 2.0 * s;
    if (lead_arg - one()).norm() < 1e-8 {
        return Err(Error::PoleProximity {
            context: "h_factored zeta argument a1 + b1 + 2s".into(),
            distance: (lead_arg - one()).norm(),
        });
    }
    let mut v = zeta(lead_arg)?;
    for k1 in 1..3 {
        for k2 in 1..3 {
            let arg = one() + i_set.get(k1) + j_set.get(k2) + 2.0 * s;
            if (arg - one()).norm() < 1e-8 {
                return Err(Error::PoleProximity {
                    context: "h_factored zeta argument 1 + a + b + 2s".into(),
                    distance: (arg - one()).norm(),
                });
            }
            v *= zeta(arg)?;
        }
    }
    let prod = euler_product(|p| c_local(i_set, j_set, 0, 0, s, p), p_max, s.re.min(0.0))?;
    Ok(v * prod.value)
}
