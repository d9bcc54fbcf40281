//! Exact arithmetic and the small combinatorial helpers shared by both
//! solvers.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Value type of every invariant. Always in lowest terms with a positive
/// denominator.
pub type ExactRational = BigRational;

pub fn rat(v: i64) -> ExactRational {
    ExactRational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> ExactRational {
    ExactRational::new(BigInt::from(num), BigInt::from(den))
}

/// `(-1)^e`.
pub fn sign(e: u64) -> ExactRational {
    if e % 2 == 0 {
        ExactRational::one()
    } else {
        -ExactRational::one()
    }
}

/// Binomial coefficient `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) here
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// True when the denominator is a power of two.
pub fn is_dyadic(value: &ExactRational) -> bool {
    let den = value.denom().abs();
    let mut d = den;
    let two = BigInt::from(2);
    while d.is_even() {
        d /= &two;
    }
    d.is_one()
}

/// One way of distributing a multiset over two labelled sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    /// Number of position-labelled splits collapsing onto this pair of
    /// sub-multisets: the product of `C(m, s)` over distinct values.
    pub weight: BigInt,
}

/// Groups a sorted slice into `(value, multiplicity)` runs.
pub fn runs(sorted: &[u32]) -> Vec<(u32, usize)> {
    let mut out: Vec<(u32, usize)> = Vec::new();
    for &v in sorted {
        match out.last_mut() {
            Some((last, m)) if *last == v => *m += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// Enumerates `S1 ⊔ S2 = S` over labelled positions of a sorted multiset,
/// deduplicated by content. The weights sum to `2^|S|`.
pub fn multiset_splits(sorted: &[u32]) -> Vec<Split> {
    let groups = runs(sorted);
    let mut out = Vec::new();
    let mut counts = alloc::vec![0usize; groups.len()];
    loop {
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut weight = BigInt::one();
        for (&(v, m), &s) in groups.iter().zip(&counts) {
            left.extend(core::iter::repeat_n(v, s));
            right.extend(core::iter::repeat_n(v, m - s));
            weight *= binomial(m as u64, s as i64);
        }
        out.push(Split {
            left,
            right,
            weight,
        });
        // odometer over 0..=m for each group
        let mut i = 0;
        loop {
            if i == groups.len() {
                return out;
            }
            if counts[i] < groups[i].1 {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(n: u64, k: i64) -> BigInt {
        // row-by-row Pascal triangle, independent of the product formula
        let mut row = alloc::vec![BigInt::one()];
        for _ in 0..n {
            let mut next = alloc::vec![BigInt::one(); row.len() + 1];
            for j in 1..row.len() {
                next[j] = &row[j - 1] + &row[j];
            }
            row = next;
        }
        if k < 0 || k as usize >= row.len() {
            BigInt::zero()
        } else {
            row[k as usize].clone()
        }
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(pascal(10, 5), BigInt::from(252));
        assert_eq!(binomial(10, 5), pascal(10, 5));
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn binomial_matches_pascal_triangle() {
        for n in 0..40u64 {
            for k in -2..(n as i64 + 3) {
                assert_eq!(binomial(n, k), pascal(n, k), "C({n},{k})");
            }
        }
    }

    #[test]
    fn splits_weights_count_labelled_subsets() {
        let s = [2, 2, 3, 5, 5, 5];
        let splits = multiset_splits(&s);
        // (2+1)(1+1)(3+1) content classes
        assert_eq!(splits.len(), 24);
        let total: BigInt = splits.iter().map(|x| x.weight.clone()).sum();
        assert_eq!(total, BigInt::from(64));
        assert!(splits.iter().all(|x| x.left.len() + x.right.len() == 6));
        assert_eq!(multiset_splits(&[]).len(), 1);
    }

    #[test]
    fn dyadic_detection() {
        assert!(is_dyadic(&ratio(-43515, 512)));
        assert!(is_dyadic(&rat(7)));
        assert!(!is_dyadic(&ratio(1, 6)));
    }
}
