//! Independent consistency checks.
//!
//! The solvers only ever use particular instances of the WDVV relations.
//! Here the relations are evaluated in full generality (every insertion
//! direction, sphere degree zero included) on values produced by the
//! solvers, so each passing instance is a genuine cross-check.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{binomial, is_dyadic, multiset_splits, sign, ExactRational};
use crate::closed::gw;
use crate::error::GwError;
use crate::memo::MemoStore;
use crate::open::{interior_recursion, ob, ogwb_key, OpenKey};

fn ints(v: &[u32]) -> Vec<i64> {
    v.iter().map(|&x| i64::from(x)).collect()
}

fn with(extra: &[i64], rest: &[i64]) -> Vec<i64> {
    let mut v = Vec::with_capacity(extra.len() + rest.len());
    v.extend_from_slice(extra);
    v.extend_from_slice(rest);
    v
}

fn sorted(v: &[u32]) -> Vec<u32> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

fn weight(w: &num_bigint::BigInt) -> ExactRational {
    ExactRational::from_integer(w.clone())
}

/// `F(pq|rs) = Σ GW_{d_1}(Δ_p, Δ_q, Δ_i, S_1) · GW_{d_2}(Δ_{n-i}, Δ_r, Δ_s, S_2)`
/// over `d_1 + d_2 = d`, `0 ≤ i ≤ n` and labelled splits of `S`.
pub fn closed_split_sum(
    store: &mut MemoStore,
    n: u32,
    d: u32,
    [p, q, r, s]: [u32; 4],
    spectators: &[u32],
) -> Result<ExactRational, GwError> {
    let ni = i64::from(n);
    let mut total = ExactRational::zero();
    for split in multiset_splits(&sorted(spectators)) {
        let (s1, s2) = (ints(&split.left), ints(&split.right));
        for d1 in 0..=d {
            for i in 0..=ni {
                let a = gw(store, n, d1, &with(&[i64::from(p), i64::from(q), i], &s1))?;
                if a.is_zero() {
                    continue;
                }
                let b = gw(
                    store,
                    n,
                    d - d1,
                    &with(&[ni - i, i64::from(r), i64::from(s)], &s2),
                )?;
                total += a * b * weight(&split.weight);
            }
        }
    }
    Ok(total)
}

fn check_indices(n: u32, indices: &[u32]) -> Result<(), GwError> {
    match indices.iter().find(|&&a| a > n) {
        Some(a) => Err(GwError::InvalidInput(alloc::format!(
            "index {a} outside 0..={n}"
        ))),
        None => Ok(()),
    }
}

fn check_open_target(n: u32) -> Result<(), GwError> {
    if n < 3 || n % 2 == 0 {
        return Err(GwError::InvalidInput(alloc::format!(
            "open invariants need odd n >= 3, got {n}"
        )));
    }
    Ok(())
}

/// Four-point WDVV exchange `F(e1 e2 | e3 e4) = F(e1 e3 | e2 e4)`.
pub fn check_closed_exchange(
    store: &mut MemoStore,
    n: u32,
    d: u32,
    e: [u32; 4],
    spectators: &[u32],
) -> Result<bool, GwError> {
    if n < 2 {
        return Err(GwError::InvalidInput(alloc::format!(
            "n must be >= 2, got {n}"
        )));
    }
    check_indices(n, &e)?;
    check_indices(n, spectators)?;
    let lhs = closed_split_sum(store, n, d, e, spectators)?;
    let rhs = closed_split_sum(store, n, d, [e[0], e[2], e[1], e[3]], spectators)?;
    Ok(lhs == rhs)
}

/// One instance of the open WDVV relation with point-like bounding chain:
/// insertion directions `Γ_u, Γ_v, Γ_w`, degree `β`, `k` boundary points and
/// extra interior insertions `Γ_{spectators}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenWdvvInstance {
    pub n: u32,
    pub u: u32,
    pub v: u32,
    pub w: u32,
    pub beta: u32,
    pub k: u32,
    pub spectators: Vec<u32>,
}

impl OpenWdvvInstance {
    fn validate(&self) -> Result<(), GwError> {
        check_open_target(self.n)?;
        check_indices(self.n, &[self.u, self.v, self.w])?;
        check_indices(self.n, &self.spectators)
    }
}

/// One side of the coefficient-extracted relation: the `(u, v)` ordering.
///
/// `Σ σ(β̂) ogwb_{β-2β̂,k}(Γ_u, Γ_{n-i}, I_2) GW_β̂(Δ_i, Δ_w, Δ_v, I_1)
///  - Σ C(k,k_1) ogwb_{β_1,k_1+1}(Γ_u, I_1) ogwb_{β_2,k_2}(Γ_w, Γ_v, I_2)`
pub fn cor1_side(
    store: &mut MemoStore,
    inst: &OpenWdvvInstance,
    u: u32,
    v: u32,
) -> Result<ExactRational, GwError> {
    let (n, beta, k) = (inst.n, inst.beta, inst.k);
    let ni = i64::from(n);
    let (u, v, w) = (i64::from(u), i64::from(v), i64::from(inst.w));
    let splits = multiset_splits(&sorted(&inst.spectators));
    let mut total = ExactRational::zero();
    for split in &splits {
        let (s1, s2) = (ints(&split.left), ints(&split.right));
        let wt = weight(&split.weight);
        for sphere in 0..=beta / 2 {
            let sigma = sign(u64::from((n + 1) / 2) * u64::from(sphere));
            for i in 0..=ni {
                let c = gw(store, n, sphere, &with(&[i, w, v], &s1))?;
                if c.is_zero() {
                    continue;
                }
                let o = ob(store, n, beta - 2 * sphere, k, &with(&[u, ni - i], &s2))?;
                total += c * o * &sigma * &wt;
            }
        }
        for beta1 in 0..=beta {
            for k1 in 0..=k {
                let a = ob(store, n, beta1, k1 + 1, &with(&[u], &s1))?;
                if a.is_zero() {
                    continue;
                }
                let b = ob(store, n, beta - beta1, k - k1, &with(&[w, v], &s2))?;
                let choose = ExactRational::from_integer(binomial(u64::from(k), i64::from(k1)));
                total -= a * b * choose * &wt;
            }
        }
    }
    Ok(total)
}

/// The relation with `u`, `v` exchanged must give the same value.
pub fn check_open_wdvv_cor1(
    store: &mut MemoStore,
    inst: &OpenWdvvInstance,
) -> Result<bool, GwError> {
    inst.validate()?;
    let lhs = cor1_side(store, inst, inst.u, inst.v)?;
    let rhs = cor1_side(store, inst, inst.v, inst.u)?;
    Ok(lhs == rhs)
}

/// Left-hand side minus right-hand side of the `s`-direction relation; zero
/// when the relation holds.
pub fn cor2_residual(
    store: &mut MemoStore,
    n: u32,
    v: u32,
    w: u32,
    beta: u32,
    k: u32,
    spectators: &[u32],
) -> Result<ExactRational, GwError> {
    check_open_target(n)?;
    check_indices(n, &[v, w])?;
    check_indices(n, spectators)?;
    let ni = i64::from(n);
    let (v, w) = (i64::from(v), i64::from(w));
    let mut total = ExactRational::zero();
    for split in multiset_splits(&sorted(spectators)) {
        let (s1, s2) = (ints(&split.left), ints(&split.right));
        let wt = weight(&split.weight);
        for sphere in 0..=beta / 2 {
            let sigma = sign(u64::from((n + 1) / 2) * u64::from(sphere));
            for i in 0..=ni {
                let c = gw(store, n, sphere, &with(&[i, w, v], &s1))?;
                if c.is_zero() {
                    continue;
                }
                let o = ob(store, n, beta - 2 * sphere, k + 1, &with(&[ni - i], &s2))?;
                total += c * o * &sigma * &wt;
            }
        }
        for beta1 in 0..=beta {
            let beta2 = beta - beta1;
            for k1 in 0..=k {
                let k2 = k - k1;
                let choose = ExactRational::from_integer(binomial(u64::from(k), i64::from(k1)));
                let a = ob(store, n, beta1, k1 + 2, &s1)?;
                if !a.is_zero() {
                    let b = ob(store, n, beta2, k2, &with(&[w, v], &s2))?;
                    total -= a * b * &choose * &wt;
                }
                let a = ob(store, n, beta1, k1 + 1, &with(&[w], &s1))?;
                if !a.is_zero() {
                    let b = ob(store, n, beta2, k2 + 1, &with(&[v], &s2))?;
                    total += a * b * &choose * &wt;
                }
            }
        }
    }
    Ok(total)
}

pub fn check_open_wdvv_cor2(
    store: &mut MemoStore,
    n: u32,
    v: u32,
    w: u32,
    beta: u32,
    k: u32,
    spectators: &[u32],
) -> Result<bool, GwError> {
    Ok(cor2_residual(store, n, v, w, beta, k, spectators)?.is_zero())
}

/// Re-evaluates the interior recursion with every choice of the lowered and
/// raised constraint and compares against the memoized value.
pub fn check_alt_reduction(store: &mut MemoStore, key: &OpenKey) -> Result<bool, GwError> {
    if !key.is_canonical() || key.beta == 0 || key.interior.len() < 2 {
        return Err(GwError::InvalidInput(alloc::format!(
            "alternative reductions need a canonical key with beta >= 1 and l >= 2, got {key}"
        )));
    }
    let expected = ogwb_key(store, key)?;
    let l = key.interior.len();
    for p1 in 0..l {
        for p2 in 0..l {
            if p1 == p2 {
                continue;
            }
            // equal values at different positions give the same computation
            let first_p1 = key.interior.iter().position(|&j| j == key.interior[p1]) == Some(p1);
            let first_p2 = key
                .interior
                .iter()
                .enumerate()
                .position(|(p, &j)| p != p1 && j == key.interior[p2])
                == Some(p2);
            if !(first_p1 && first_p2) {
                continue;
            }
            if interior_recursion(store, key, p1, p2)? != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every admissible canonical key (interior indices in `2..=n`) with
/// `β ≤ max_beta`, in increasing `(β, k, interior)` order.
pub fn canonical_keys(n: u32, max_beta: u32) -> Vec<OpenKey> {
    let mut out = Vec::new();
    for beta in 0..=max_beta {
        // (n-1)k + 2 Σ (j-1) = n - 3 + (n+1)β
        let total = i64::from(n) - 3 + i64::from(n + 1) * i64::from(beta);
        let mut k = 0i64;
        while (i64::from(n) - 1) * k <= total {
            let rest = total - (i64::from(n) - 1) * k;
            if rest % 2 == 0 {
                let mut parts = Vec::new();
                bounded_partitions(rest / 2, 1, i64::from(n) - 1, &mut parts, &mut |p| {
                    out.push(OpenKey::new(
                        n,
                        beta,
                        k as u32,
                        p.iter().map(|&x| (x + 1) as u32).collect(),
                    ));
                });
            }
            k += 1;
        }
    }
    out
}

fn bounded_partitions(
    remaining: i64,
    min_part: i64,
    max_part: i64,
    parts: &mut Vec<i64>,
    emit: &mut dyn FnMut(&[i64]),
) {
    if remaining == 0 {
        emit(parts);
        return;
    }
    for p in min_part..=max_part.min(remaining) {
        parts.push(p);
        bounded_partitions(remaining - p, p, max_part, parts, emit);
        parts.pop();
    }
}

/// Keys among [`canonical_keys`] whose value has an odd prime in its
/// denominator. Empty on success.
pub fn check_dyadic(
    store: &mut MemoStore,
    n: u32,
    max_beta: u32,
) -> Result<Vec<(OpenKey, ExactRational)>, GwError> {
    check_open_target(n)?;
    let mut violations = Vec::new();
    for key in canonical_keys(n, max_beta) {
        let value = ob(store, n, key.beta, key.k, &ints(&key.interior))?;
        if !is_dyadic(&value) {
            violations.push((key, value));
        }
    }
    Ok(violations)
}
