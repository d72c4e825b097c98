//! Integer arithmetic foundation: factorization, divisor-function sieves,
//! Mobius/phi, Ramanujan sums, and the shifted divisor coefficients sigma_X(n).

use crate::error::{Error, Result};
use crate::shifts::ShiftSet;
use num_complex::Complex64;

/// Prime factorization n = prod p^a with primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn omega(&self) -> usize {
        self.factors.len()
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64 (fixed witness set valid to 2^64).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    // Brent's variant; n must be odd composite, not a prime power of 2.
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Factor n; trial division below 10^6, then Miller-Rabin + Pollard rho.
pub fn factorize(n: u64) -> Factorization {
    let original = n;
    let mut n = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in [2u64, 3, 5] {
        if n % p == 0 {
            let mut a = 0;
            while n % p == 0 {
                n /= p;
                a += 1;
            }
            factors.push((p, a));
        }
    }
    let mut d = 7u64;
    let steps = [4u64, 2, 4, 2, 4, 6, 2, 6]; // wheel mod 30
    let mut si = 0usize;
    while d <= 1_000_000 && d * d <= n {
        if n % d == 0 {
            let mut a = 0;
            while n % d == 0 {
                n /= d;
                a += 1;
            }
            factors.push((d, a));
        }
        d += steps[si];
        si = (si + 1) & 7;
    }
    // Remaining part has no prime factor below 10^6.
    let mut stack = vec![n];
    let mut large: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            large.push(m);
            continue;
        }
        let f = pollard_rho(m);
        stack.push(f);
        stack.push(m / f);
    }
    large.sort_unstable();
    let mut i = 0;
    while i < large.len() {
        let p = large[i];
        let mut a = 0u32;
        while i < large.len() && large[i] == p {
            a += 1;
            i += 1;
        }
        factors.push((p, a));
    }
    factors.sort_unstable_by_key(|&(p, _)| p);
    debug_assert_eq!(
        factors
            .iter()
            .map(|&(p, a)| p.pow(a))
            .product::<u64>(),
        original.max(1)
    );
    Factorization {
        n: original,
        factors,
    }
}

/// All primes up to `limit` inclusive (simple sieve of Eratosthenes).
pub fn primes_up_to(limit: usize) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for p in 2..=limit {
        if !composite[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m <= limit {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

/// Smallest-prime-factor table: spf[n] = least prime dividing n (spf[1] = 1).
/// Backs bulk factorizations for the truncated series and divisor sums.
pub struct SpfTable {
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn new(limit: usize) -> Result<Self> {
        // ~4 bytes per entry; cap at 1 GiB worth of table.
        if limit > 250_000_000 {
            return Err(Error::Resource(format!(
                "SPF table of size {limit} exceeds memory budget"
            )));
        }
        let mut spf: Vec<u32> = vec![0; limit + 1];
        if limit >= 1 {
            spf[1] = 1;
        }
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut m = i;
                while m <= limit {
                    if spf[m] == 0 {
                        spf[m] = i as u32;
                    }
                    m += i;
                }
            }
        }
        Ok(SpfTable { spf })
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// Iterate the prime-power factorization of n (n <= limit).
    pub fn factor(&self, mut n: usize) -> Vec<(u64, u32)> {
        let mut out = Vec::with_capacity(4);
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut a = 0u32;
            while n % p == 0 {
                n /= p;
                a += 1;
            }
            out.push((p as u64, a));
        }
        out
    }
}

/// d_k(1..=limit) computed by k-1 divisor-convolution passes.
///
/// d_k(n) counts ordered k-tuples with product n; values are exact u64.
pub fn sieve_dk(k: u32, limit: usize) -> Result<Vec<u64>> {
    if k == 0 || k > 6 {
        return Err(Error::Domain(format!("sieve_dk: k = {k} outside 1..=6")));
    }
    if limit > 100_000_000 {
        return Err(Error::Resource(format!(
            "sieve_dk limit {limit} exceeds 1e8 memory bound"
        )));
    }
    let mut cur: Vec<u64> = vec![1; limit + 1];
    if limit >= 1 {
        cur[0] = 0;
    }
    for _ in 1..k {
        let mut next: Vec<u64> = vec![0; limit + 1];
        for d in 1..=limit {
            let c = cur[d];
            if c == 0 {
                continue;
            }
            let mut m = d;
            while m <= limit {
                next[m] += c;
                m += d;
            }
        }
        cur = next;
    }
    if limit >= 1 {
        cur[0] = 0;
    }
    Ok(cur)
}

/// Mobius function from a factorization.
pub fn mobius(f: &Factorization) -> i64 {
    let mut m = 1i64;
    for &(_, a) in &f.factors {
        if a > 1 {
            return 0;
        }
        m = -m;
    }
    m
}

pub fn mobius_u64(n: u64) -> i64 {
    mobius(&factorize(n))
}

/// Euler phi from a factorization.
pub fn euler_phi(f: &Factorization) -> u64 {
    let mut phi = 1u64;
    for &(p, a) in &f.factors {
        phi *= p.pow(a - 1) * (p - 1);
    }
    phi
}

pub fn euler_phi_u64(n: u64) -> u64 {
    euler_phi(&factorize(n))
}

/// Mobius table mu(1..=limit) via SPF-style sieve.
pub fn sieve_mobius(limit: usize) -> Vec<i8> {
    let mut mu = vec![1i8; limit + 1];
    if limit >= 1 {
        mu[0] = 0;
    }
    let mut is_comp = vec![false; limit + 1];
    let mut primes: Vec<usize> = Vec::new();
    // linear sieve
    for i in 2..=limit {
        if !is_comp[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > limit {
                break;
            }
            is_comp[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu
}

/// Ramanujan sum c_q(r) via the divisor-sum definition
/// c_q(r) = sum_{d | (q, r)} d * mu(q/d).
pub fn ramanujan_sum(q: u64, r: i64) -> i64 {
    assert!(q >= 1, "ramanujan_sum: q must be >= 1");
    assert!(r != 0, "ramanujan_sum: r must be nonzero");
    let g = gcd(q, r.unsigned_abs());
    // divisors of g
    let fg = factorize(g);
    let mut divisors = vec![1u64];
    for &(p, a) in &fg.factors {
        let len = divisors.len();
        let mut pk = 1u64;
        for _ in 0..a {
            pk *= p;
            for i in 0..len {
                divisors.push(divisors[i] * pk);
            }
        }
    }
    let mut total = 0i64;
    for &d in &divisors {
        let m = mobius_u64(q / d);
        total += d as i64 * m;
    }
    total
}

/// Ramanujan sum via Hoelder's closed form mu(q/g) phi(q) / phi(q/g), g = (q, r).
/// Kept as an independent route for cross-checking the definition sum.
pub fn ramanujan_sum_hoelder(q: u64, r: i64) -> i64 {
    let g = gcd(q, r.unsigned_abs());
    let qg = q / g;
    let m = mobius_u64(qg);
    if m == 0 {
        return 0;
    }
    let phi_q = euler_phi_u64(q);
    let phi_qg = euler_phi_u64(qg);
    m * (phi_q / phi_qg) as i64
}

/// sigma_X(p^a) for a single prime power: the sum over ordered factorizations
/// p^(j_1 + ... + j_k) = p^a of p^(-x_1 j_1 - ... - x_k j_k).
///
/// Computed by the k-fold convolution recurrence in the exponent, which is
/// stable for coincident shifts (no partial fractions).
pub fn sigma_prime_power(x: &ShiftSet, p: f64, alpha: u32) -> Complex64 {
    let a = alpha as usize;
    // One slot: coefficients p^(-x j), j = 0..=a; convolve per extra slot.
    let lp = p.ln();
    let mut acc: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); a + 1];
    acc[0] = Complex64::new(1.0, 0.0);
    for (slot, &xs) in x.shifts().iter().enumerate() {
        let pw: Vec<Complex64> = (0..=a)
            .map(|j| (-xs * (j as f64) * lp).exp())
            .collect();
        if slot == 0 {
            acc.copy_from_slice(&pw);
            continue;
        }
        let mut next = vec![Complex64::new(0.0, 0.0); a + 1];
        for j in 0..=a {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..=j {
                s += acc[i] * pw[j - i];
            }
            next[j] = s;
        }
        acc = next;
    }
    acc[a]
}

/// sigma_X(n) from a prepared factorization (multiplicative in n).
pub fn sigma_shifted_from_factors(x: &ShiftSet, factors: &[(u64, u32)]) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    for &(p, a) in factors {
        v *= sigma_prime_power(x, p as f64, a);
    }
    v
}

/// sigma_X(n): coefficient of n^{-s} in prod_x zeta(s + x).
pub fn sigma_shifted(x: &ShiftSet, n: u64) -> Complex64 {
    if n == 1 {
        return Complex64::new(1.0, 0.0);
    }
    sigma_shifted_from_factors(x, &factorize(n).factors)
}
