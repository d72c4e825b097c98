//! Shift sets: small complex perturbations of the critical-line arguments.
//!
//! A `ShiftSet` is an ordered tuple (a_1, ..., a_k), k <= 3, with every
//! |a_i| <= 0.45 so that all downstream evaluations stay inside the
//! holomorphy region. Pairwise distinctness is *not* required at
//! construction; routes that need it (partial fractions) check `min_gap`
//! against their own tolerance.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Minimum pairwise shift distance accepted by partial-fraction routes.
pub const DELTA_DIST: f64 = 1e-6;
/// Minimum raw denominator |1 - p^(x_i - x_l)| before a route declares degeneracy.
pub const DELTA_DEN: f64 = 1e-8;
/// Holomorphy bound on individual shifts.
pub const MAX_SHIFT: f64 = 0.45;

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSet {
    shifts: Vec<Complex64>,
    min_gap: f64,
}

impl ShiftSet {
    pub fn new(shifts: &[Complex64]) -> Result<Self> {
        if shifts.is_empty() || shifts.len() > 3 {
            return Err(Error::Domain(format!(
                "shift set size {} outside 1..=3",
                shifts.len()
            )));
        }
        for (i, s) in shifts.iter().enumerate() {
            if s.norm() > MAX_SHIFT {
                return Err(Error::Domain(format!(
                    "|shift[{i}]| = {:.4} exceeds {MAX_SHIFT}",
                    s.norm()
                )));
            }
        }
        let mut min_gap = f64::INFINITY;
        for i in 0..shifts.len() {
            for j in i + 1..shifts.len() {
                min_gap = min_gap.min((shifts[i] - shifts[j]).norm());
            }
        }
        Ok(ShiftSet {
            shifts: shifts.to_vec(),
            min_gap,
        })
    }

    pub fn from_reals(shifts: &[f64]) -> Result<Self> {
        let v: Vec<Complex64> = shifts.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(&v)
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn shifts(&self) -> &[Complex64] {
        &self.shifts
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.shifts[i]
    }

    /// Smallest pairwise distance (infinity for singletons).
    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    /// Sum of all shifts; the exponent weight of full swaps.
    pub fn sum(&self) -> Complex64 {
        self.shifts.iter().sum()
    }

    /// Element-wise negation, preserving order.
    pub fn negated(&self) -> ShiftSet {
        let v: Vec<Complex64> = self.shifts.iter().map(|s| -s).collect();
        ShiftSet {
            shifts: v,
            min_gap: self.min_gap,
        }
    }

    /// Multiply every shift by `factor` (used by the regularized zero-shift limits).
    pub fn scaled(&self, factor: Complex64) -> ShiftSet {
        let v: Vec<Complex64> = self.shifts.iter().map(|s| s * factor).collect();
        let mut min_gap = f64::INFINITY;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                min_gap = min_gap.min((v[i] - v[j]).norm());
            }
        }
        ShiftSet { shifts: v, min_gap }
    }

    /// Entries sorted by (re, im). The swap sum and the divisor main term are
    /// multiset functions of their inputs, but their floating arithmetic is
    /// not reassociation-free; canonical ordering makes them bitwise
    /// invariant under entry permutations.
    pub fn canonical(&self) -> ShiftSet {
        let mut v = self.shifts.clone();
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        ShiftSet {
            shifts: v,
            min_gap: self.min_gap,
        }
    }

    /// Reorder so that element `first` comes first and the rest keep their order.
    /// This is the index-selection convention of the C-factor notation.
    pub fn with_first(&self, first: usize) -> ShiftSet {
        let mut v = Vec::with_capacity(self.len());
        v.push(self.shifts[first]);
        for (i, s) in self.shifts.iter().enumerate() {
            if i != first {
                v.push(*s);
            }
        }
        ShiftSet {
            shifts: v,
            min_gap: self.min_gap,
        }
    }

    pub fn require_distinct(&self, context: &'static str) -> Result<()> {
        if self.len() > 1 && self.min_gap < DELTA_DIST {
            return Err(Error::DegenerateShift {
                context,
                gap: self.min_gap,
                min: DELTA_DIST,
            });
        }
        Ok(())
    }
}

/// The third index completing {i, k} to {0, 1, 2} (0-based form of the
/// unique-r rule for triples).
pub fn third_index(i: usize, k: usize) -> usize {
    debug_assert!(i < 3 && k < 3 && i != k);
    3 - i - k
}
