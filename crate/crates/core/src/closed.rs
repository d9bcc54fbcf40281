//! Closed genus-0 invariants `GW_d(Δ_{a_1}, …, Δ_{a_l})` of `CP^n`, where
//! `Δ_a = [ω^a]`.
//!
//! Non-canonical inputs are reduced by the dimension, fundamental class,
//! zero and divisor axioms. Canonical keys (`d ≥ 1`, every `a` in `2..=n`)
//! are reconstructed from the line through two points with the WDVV exchange
//! `(Δ_1, Δ_{a-1} | Δ_b, Δ_c)`, where `a` is the smallest insertion and
//! `b`, `c` the two largest. Each step lowers `(d, l, min a)`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{binomial, multiset_splits, ExactRational};
use crate::error::GwError;
use crate::memo::MemoStore;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClosedKey {
    pub n: u32,
    pub d: u32,
    /// Sorted; every entry in `2..=n`.
    pub insertions: Vec<u32>,
}

impl ClosedKey {
    pub fn new(n: u32, d: u32, mut insertions: Vec<u32>) -> Self {
        insertions.sort_unstable();
        Self { n, d, insertions }
    }

    /// True when the key satisfies the invariants of a stored key.
    pub fn is_canonical(&self) -> bool {
        self.n >= 2
            && self.d >= 1
            && self.insertions.windows(2).all(|w| w[0] <= w[1])
            && self.insertions.iter().all(|&a| (2..=self.n).contains(&a))
    }
}

impl fmt::Display for ClosedKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GW[n={},d={}](", self.n, self.d)?;
        for (i, a) in self.insertions.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// Dimension axiom: `Σ a = n + (n+1) d + l - 3`.
pub fn closed_admissible(n: u32, d: u32, insertions: &[u32]) -> bool {
    let sum: i64 = insertions.iter().map(|&a| i64::from(a)).sum();
    let (n, d, l) = (i64::from(n), i64::from(d), insertions.len() as i64);
    sum == n + (n + 1) * d + l - 3
}

/// `GW_d(Δ_{a_1}, …, Δ_{a_l})` on `CP^n`.
pub fn gw_closed(
    store: &mut MemoStore,
    n: u32,
    d: u32,
    insertions: &[u32],
) -> Result<ExactRational, GwError> {
    if n < 2 {
        return Err(GwError::InvalidInput(alloc::format!(
            "closed invariants need n >= 2, got {n}"
        )));
    }
    if let Some(a) = insertions.iter().find(|&&a| a > n) {
        return Err(GwError::InvalidInput(alloc::format!(
            "insertion {a} outside 0..={n}"
        )));
    }
    let list: Vec<i64> = insertions.iter().map(|&a| i64::from(a)).collect();
    gw(store, n, d, &list)
}

/// Internal entry point. Indices outside `0..=n` stand for the zero class
/// and make the whole invariant vanish.
pub(crate) fn gw(
    store: &mut MemoStore,
    n: u32,
    d: u32,
    insertions: &[i64],
) -> Result<ExactRational, GwError> {
    if insertions.iter().any(|&a| a < 0 || a > i64::from(n)) {
        return Ok(ExactRational::zero());
    }
    let mut ins: Vec<u32> = insertions.iter().map(|&a| a as u32).collect();
    if !closed_admissible(n, d, &ins) {
        return Ok(ExactRational::zero());
    }
    let l = ins.len();
    if ins.contains(&0) || d == 0 {
        // the dimension filter already forces Σa = n when l = 3
        return Ok(if d == 0 && l == 3 {
            ExactRational::one()
        } else {
            ExactRational::zero()
        });
    }
    let before = ins.len();
    ins.retain(|&a| a != 1);
    let divisors = (before - ins.len()) as u32;
    let key = ClosedKey::new(n, d, ins);
    let value = store.get_or_compute(key.clone(), |s| reconstruct(s, &key))?;
    if divisors == 0 {
        Ok(value)
    } else {
        Ok(value * ExactRational::from_integer(BigInt::from(d).pow(divisors)))
    }
}

fn reconstruct(store: &mut MemoStore, key: &ClosedKey) -> Result<ExactRational, GwError> {
    let (n, d) = (key.n, key.d);
    let ins = &key.insertions;
    let l = ins.len();
    if l <= 2 {
        return Ok(if d == 1 && ins[..] == [n, n] {
            ExactRational::one()
        } else {
            ExactRational::zero()
        });
    }
    let a = i64::from(ins[0]);
    let b = i64::from(ins[l - 1]);
    let c = i64::from(ins[l - 2]);
    let spectators = &ins[1..l - 2];
    let spec_i: Vec<i64> = spectators.iter().map(|&x| i64::from(x)).collect();
    let with = |extra: &[i64], rest: &[i64]| -> Vec<i64> {
        let mut v = Vec::with_capacity(extra.len() + rest.len());
        v.extend_from_slice(extra);
        v.extend_from_slice(rest);
        v
    };
    let dq = ExactRational::from_integer(BigInt::from(d));

    let mut total = gw(store, n, d, &with(&[a - 1, b + 1, c], &spec_i))?;
    total += &dq * gw(store, n, d, &with(&[b, a - 1 + c], &spec_i))?;
    total -= &dq * gw(store, n, d, &with(&[a - 1, b + c], &spec_i))?;

    let splits = multiset_splits(spectators);
    for d1 in 1..d {
        let d2 = d - d1;
        for split in &splits {
            let s1: Vec<i64> = split.left.iter().map(|&x| i64::from(x)).collect();
            let s2: Vec<i64> = split.right.iter().map(|&x| i64::from(x)).collect();
            let mut inner = ExactRational::zero();
            for i in 0..=i64::from(n) {
                let j = i64::from(n) - i;
                let left = gw(store, n, d1, &with(&[1, b, i], &s1))?;
                if !left.is_zero() {
                    inner += left * gw(store, n, d2, &with(&[j, a - 1, c], &s2))?;
                }
                let left = gw(store, n, d1, &with(&[1, a - 1, i], &s1))?;
                if !left.is_zero() {
                    inner -= left * gw(store, n, d2, &with(&[j, b, c], &s2))?;
                }
            }
            if !inner.is_zero() {
                total += inner * ExactRational::from_integer(split.weight.clone());
            }
        }
    }
    Ok(total)
}

/// Every admissible canonical key of degree `d` on `CP^n`, i.e. sorted
/// multisets over `2..=n` with `Σ (a - 1) = n + (n+1)d - 3`.
pub fn canonical_closed_keys(n: u32, d: u32) -> Vec<ClosedKey> {
    let mut out = Vec::new();
    if d == 0 || n < 2 {
        return out;
    }
    let target = n + (n + 1) * d - 3;
    let mut parts = Vec::new();
    fill(target, 1, n - 1, &mut parts, &mut |p| {
        out.push(ClosedKey::new(n, d, p.iter().map(|&x| x + 1).collect()));
    });
    out
}

fn fill(remaining: u32, min: u32, max: u32, parts: &mut Vec<u32>, emit: &mut dyn FnMut(&[u32])) {
    if remaining == 0 {
        emit(parts);
        return;
    }
    for p in min..=max.min(remaining) {
        parts.push(p);
        fill(remaining - p, p, max, parts, emit);
        parts.pop();
    }
}

/// Plane-curve counts `N_d` from Kontsevich's recursion, computed without
/// touching the WDVV solver.
pub fn kontsevich_n2_oracle(d: u32) -> BigInt {
    let d = d as usize;
    let mut counts = vec![BigInt::zero(); d.max(1) + 1];
    counts[1] = BigInt::one();
    for e in 2..=d {
        let mut acc = BigInt::zero();
        for d1 in 1..e {
            let d2 = e - d1;
            let (b1, b2) = (BigInt::from(d1), BigInt::from(d2));
            let top = (3 * e - 4) as u64;
            let bracket =
                &b2 * binomial(top, 3 * d1 as i64 - 2) - &b1 * binomial(top, 3 * d1 as i64 - 1);
            acc += &counts[d1] * &counts[d2] * &b1 * &b1 * &b2 * bracket;
        }
        counts[e] = acc;
    }
    counts[d].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn gwv(n: u32, d: u32, ins: &[u32]) -> ExactRational {
        gw_closed(&mut MemoStore::new(), n, d, ins).unwrap()
    }

    #[test]
    fn admissibility_examples() {
        assert!(closed_admissible(3, 1, &[2, 2, 2, 2]));
        assert!(!closed_admissible(3, 1, &[2, 2, 2]));
        assert!(closed_admissible(2, 3, &[2; 8]));
    }

    #[test]
    fn seeds_and_axioms() {
        assert_eq!(gwv(3, 1, &[2, 2, 2, 2]), rat(2));
        assert_eq!(gwv(5, 1, &[3, 3, 3, 3]), rat(3));
        assert_eq!(gwv(3, 0, &[1, 1, 1]), rat(1));
        assert_eq!(gwv(3, 1, &[2, 2, 2]), rat(0));
        assert_eq!(gwv(2, 3, &[2; 8]), rat(12));
        assert_eq!(gwv(4, 1, &[4, 4]), rat(1));
        // fundamental class only survives in degree zero with three points
        assert_eq!(gwv(3, 0, &[0, 1, 2]), rat(1));
        assert_eq!(gwv(3, 1, &[0, 3, 3, 2]), rat(0));
        // divisor: GW_2(Δ_1, pt^5) on CP^2 = 2 * 1
        assert_eq!(gwv(2, 2, &[1, 2, 2, 2, 2, 2]), rat(2));
    }

    #[test]
    fn out_of_range_input_is_rejected() {
        let mut store = MemoStore::new();
        assert!(gw_closed(&mut store, 3, 1, &[4, 2]).is_err());
        assert!(gw_closed(&mut store, 1, 1, &[1]).is_err());
    }

    #[test]
    fn oracle_values() {
        let expected = [1u64, 1, 12, 620, 87304, 26312976];
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(kontsevich_n2_oracle(i as u32 + 1), BigInt::from(e));
        }
    }

    #[test]
    fn twisted_cubics_through_twelve_lines() {
        // Δ_2 is dual to a line in CP^3: twisted cubics meeting 12 lines
        assert_eq!(gwv(3, 3, &[2; 12]), rat(80160));
        // conics in CP^3 through 8 lines
        assert_eq!(gwv(3, 2, &[2; 8]), rat(92));
    }
}
