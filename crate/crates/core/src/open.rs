//! Open invariants `ogwb_{β,k}(Γ_{j_1}, …, Γ_{j_l})` of `(CP^n, RP^n)`, `n` odd.
//!
//! `β ∈ H_2(CP^n, RP^n) ≅ ℤ` with Maslov index `μ(β) = (n+1)β`; a sphere of
//! degree `d` doubles to the disk class `2d`. Interior constraints are the
//! classes `Γ_j = [ω^j]` (degree `2j`) and `Γ_⋄` (degree `n+1`); `k` counts
//! boundary points.
//!
//! Inputs are first reduced by wall-crossing, the unit, divisor and zero
//! axioms and the degree axiom ([`normalize`]). What remains is a canonical
//! key with every interior index in `2..=n`, evaluated by:
//!
//! * the degree-one seeds `ogwb_{1,2} = 2`, `ogwb_{1,1}(Γ_{(n+1)/2}) = 0`,
//!   `ogwb_{1,0}(Γ_n) = (-1)^{(n+3)/2}`;
//! * the interior recursion when `l ≥ 2`, lowering the smallest index;
//! * the boundary recursion when `l ≤ 1` and `k ≥ 2`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{binomial, multiset_splits, ratio, sign, ExactRational};
use crate::closed::gw;
use crate::error::GwError;
use crate::memo::MemoStore;

/// A basis class of `Ĥ*(CP^n, RP^n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    /// `Γ_j = [ω^j]`.
    Power(u32),
    /// `Γ_⋄ = y(1)`, the class supported near `RP^n`.
    Diamond,
}

impl Class {
    /// Real cohomological degree.
    pub fn degree(self, n: u32) -> u32 {
        match self {
            Class::Power(j) => 2 * j,
            Class::Diamond => n + 1,
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Class::Power(j) => write!(f, "{j}"),
            Class::Diamond => f.write_str("d"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpenKey {
    pub n: u32,
    pub beta: u32,
    pub k: u32,
    /// Sorted; every entry in `2..=n`.
    pub interior: Vec<u32>,
}

impl OpenKey {
    pub fn new(n: u32, beta: u32, k: u32, mut interior: Vec<u32>) -> Self {
        interior.sort_unstable();
        Self {
            n,
            beta,
            k,
            interior,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.n >= 3
            && self.n % 2 == 1
            && self.interior.windows(2).all(|w| w[0] <= w[1])
            && self.interior.iter().all(|&j| (2..=self.n).contains(&j))
    }

    pub fn is_admissible(&self) -> bool {
        degree_balance(
            self.n,
            self.beta,
            self.k,
            self.interior.len(),
            self.interior.iter().map(|&j| 2 * j),
        )
    }
}

impl fmt::Display for OpenKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ogwb[n={},beta={},k={}](", self.n, self.beta, self.k)?;
        for (i, j) in self.interior.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
        }
        f.write_str(")")
    }
}

fn degree_balance(n: u32, beta: u32, k: u32, l: usize, degrees: impl Iterator<Item = u32>) -> bool {
    let (n, beta, k, l) = (i64::from(n), i64::from(beta), i64::from(k), l as i64);
    let total: i64 = degrees.map(i64::from).sum();
    n - 3 + (n + 1) * beta + k + 2 * l == k * n + total
}

/// Degree axiom: `n - 3 + μ(β) + k + 2l = kn + Σ|A_j|`.
pub fn open_admissible(n: u32, beta: u32, k: u32, interior: &[Class]) -> bool {
    degree_balance(
        n,
        beta,
        k,
        interior.len(),
        interior.iter().map(|c| c.degree(n)),
    )
}

/// Result of reducing an input to a canonical key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized {
    /// The axioms fix the value outright.
    Terminal(ExactRational),
    /// The value is `coefficient * ogwb(key)`.
    Scaled {
        coefficient: ExactRational,
        key: OpenKey,
    },
}

fn check_target(n: u32) -> Result<(), GwError> {
    if n < 3 || n % 2 == 0 {
        return Err(GwError::InvalidInput(alloc::format!(
            "open invariants need odd n >= 3, got {n}"
        )));
    }
    Ok(())
}

fn check_classes(n: u32, interior: &[Class]) -> Result<(), GwError> {
    match interior
        .iter()
        .find(|c| matches!(c, Class::Power(j) if *j > n))
    {
        Some(c) => Err(GwError::InvalidInput(alloc::format!(
            "class {c} outside 0..={n}"
        ))),
        None => Ok(()),
    }
}

/// Applies wall-crossing, unit, divisor, zero and degree axioms, in that
/// order.
pub fn normalize(n: u32, beta: u32, k: u32, interior: &[Class]) -> Result<Normalized, GwError> {
    check_target(n)?;
    check_classes(n, interior)?;
    let diamonds = interior.iter().filter(|c| **c == Class::Diamond).count();
    let powers: Vec<u32> = interior
        .iter()
        .filter_map(|c| match c {
            Class::Power(j) => Some(*j),
            Class::Diamond => None,
        })
        .collect();
    let coefficient = sign(diamonds as u64);
    Ok(match reduce_powers(n, beta, k + diamonds as u32, powers) {
        Normalized::Terminal(v) => Normalized::Terminal(coefficient * v),
        Normalized::Scaled {
            coefficient: c,
            key,
        } => Normalized::Scaled {
            coefficient: coefficient * c,
            key,
        },
    })
}

/// Unit, divisor, zero and degree axioms on a list of `Γ_j` indices.
fn reduce_powers(n: u32, beta: u32, k: u32, mut powers: Vec<u32>) -> Normalized {
    if powers.contains(&0) {
        // P_R vanishes on every Γ_j, so only (β, k, l) = (0, 1, 1) survives
        let v = if beta == 0 && k == 1 && powers.len() == 1 {
            -ExactRational::one()
        } else {
            ExactRational::zero()
        };
        return Normalized::Terminal(v);
    }
    let before = powers.len();
    powers.retain(|&j| j != 1);
    let divisors = (before - powers.len()) as i32;
    if beta == 0 {
        // P_R(Γ_a ⌣ Γ_b) = 0, and no unit is left
        return Normalized::Terminal(ExactRational::zero());
    }
    let key = OpenKey::new(n, beta, k, powers);
    if !key.is_admissible() {
        return Normalized::Terminal(ExactRational::zero());
    }
    // ∫_β Γ_1 = β/2
    let coefficient = ratio(i64::from(beta), 2).pow(divisors);
    Normalized::Scaled { coefficient, key }
}

/// `ogwb_{β,k}` of arbitrary basis classes.
pub fn ogwb(
    store: &mut MemoStore,
    n: u32,
    beta: u32,
    k: u32,
    interior: &[Class],
) -> Result<ExactRational, GwError> {
    match normalize(n, beta, k, interior)? {
        Normalized::Terminal(v) => Ok(v),
        Normalized::Scaled { coefficient, key } => Ok(coefficient * ogwb_key(store, &key)?),
    }
}

/// `ogw_{β,k}`: zero when `k = 0` and `β` is even, otherwise `ogwb`.
pub fn ogw(
    store: &mut MemoStore,
    n: u32,
    beta: u32,
    k: u32,
    interior: &[Class],
) -> Result<ExactRational, GwError> {
    check_target(n)?;
    check_classes(n, interior)?;
    if k == 0 && beta % 2 == 0 {
        return Ok(ExactRational::zero());
    }
    ogwb(store, n, beta, k, interior)
}

/// A rational combination of basis classes, used as one interior insertion.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintVector {
    coefficients: BTreeMap<Class, ExactRational>,
}

impl ConstraintVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(class: Class) -> Self {
        Self::zero().with(class, ExactRational::one())
    }

    /// Adds `coefficient * class`.
    pub fn with(mut self, class: Class, coefficient: ExactRational) -> Self {
        self.add_term(class, coefficient);
        self
    }

    pub fn add_term(&mut self, class: Class, coefficient: ExactRational) {
        let entry = self
            .coefficients
            .entry(class)
            .or_insert_with(ExactRational::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.coefficients.remove(&class);
        }
    }

    pub fn scaled(&self, factor: &ExactRational) -> Self {
        let mut out = Self::zero();
        for (c, v) in &self.coefficients {
            out.add_term(*c, v * factor);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Class, &ExactRational)> {
        self.coefficients.iter().map(|(c, v)| (*c, v))
    }
}

/// Multilinear extension of `ogwb` to combinations of basis classes.
pub fn ogwb_linear(
    store: &mut MemoStore,
    n: u32,
    beta: u32,
    k: u32,
    constraints: &[ConstraintVector],
) -> Result<ExactRational, GwError> {
    check_target(n)?;
    for v in constraints {
        check_classes(n, &v.terms().map(|(c, _)| c).collect::<Vec<_>>())?;
    }
    let mut total = ExactRational::zero();
    let mut chosen = Vec::with_capacity(constraints.len());
    expand(
        store,
        n,
        beta,
        k,
        constraints,
        &mut chosen,
        ExactRational::one(),
        &mut total,
    )?;
    Ok(total)
}

/// Multilinear extension of `ogw`.
pub fn ogw_linear(
    store: &mut MemoStore,
    n: u32,
    beta: u32,
    k: u32,
    constraints: &[ConstraintVector],
) -> Result<ExactRational, GwError> {
    check_target(n)?;
    if k == 0 && beta % 2 == 0 {
        return Ok(ExactRational::zero());
    }
    ogwb_linear(store, n, beta, k, constraints)
}

#[allow(clippy::too_many_arguments)]
fn expand(
    store: &mut MemoStore,
    n: u32,
    beta: u32,
    k: u32,
    rest: &[ConstraintVector],
    chosen: &mut Vec<Class>,
    weight: ExactRational,
    total: &mut ExactRational,
) -> Result<(), GwError> {
    let Some((first, rest)) = rest.split_first() else {
        *total += weight * ogwb(store, n, beta, k, chosen)?;
        return Ok(());
    };
    for (class, coefficient) in first.terms() {
        chosen.push(class);
        expand(
            store,
            n,
            beta,
            k,
            rest,
            chosen,
            &weight * coefficient,
            total,
        )?;
        chosen.pop();
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Recursive evaluation on canonical keys.

/// Internal entry point on `Γ_j` indices. Indices above `n` are the zero
/// class.
pub(crate) fn ob(
    store: &mut MemoStore,
    n: u32,
    beta: u32,
    k: u32,
    powers: &[i64],
) -> Result<ExactRational, GwError> {
    if powers.iter().any(|&j| j < 0 || j > i64::from(n)) {
        return Ok(ExactRational::zero());
    }
    let powers = powers.iter().map(|&j| j as u32).collect();
    match reduce_powers(n, beta, k, powers) {
        Normalized::Terminal(v) => Ok(v),
        Normalized::Scaled { coefficient, key } => Ok(coefficient * ogwb_key(store, &key)?),
    }
}

/// Value of a canonical key with `β ≥ 1`, memoized.
pub(crate) fn ogwb_key(store: &mut MemoStore, key: &OpenKey) -> Result<ExactRational, GwError> {
    debug_assert!(key.is_canonical(), "non-canonical key {key}");
    store.get_or_compute(key.clone(), |s| evaluate(s, key))
}

fn evaluate(store: &mut MemoStore, key: &OpenKey) -> Result<ExactRational, GwError> {
    let l = key.interior.len();
    if key.beta == 1 && l <= 1 {
        return Ok(degree_one_seed(key));
    }
    if l >= 2 {
        return interior_recursion(store, key, 0, l - 1);
    }
    if key.k >= 2 {
        return boundary_recursion(store, key);
    }
    // β ≥ 2 with l ≤ 1 forces k ≥ 2 through the degree axiom
    debug_assert!(!key.is_admissible());
    Ok(ExactRational::zero())
}

fn degree_one_seed(key: &OpenKey) -> ExactRational {
    let n = key.n;
    match (key.k, key.interior.as_slice()) {
        (2, []) => ExactRational::from_integer(BigInt::from(2)),
        (1, [j]) if *j == (n + 1) / 2 => ExactRational::zero(),
        (0, [j]) if *j == n => sign(u64::from((n + 3) / 2)),
        _ => ExactRational::zero(),
    }
}

fn to_i64(v: &[u32]) -> Vec<i64> {
    v.iter().map(|&x| i64::from(x)).collect()
}

fn list(extra: &[i64], rest: &[i64]) -> Vec<i64> {
    let mut v = Vec::with_capacity(extra.len() + rest.len());
    v.extend_from_slice(extra);
    v.extend_from_slice(rest);
    v
}

/// Sign `(-1)^{w_s(β̂)}` of a sphere of degree `β̂`, `w_s(β̂) ≡ (n+1)β̂/2`.
fn sphere_sign(n: u32, sphere: u32) -> ExactRational {
    sign(u64::from((n + 1) / 2) * u64::from(sphere))
}

/// A product of two open invariants. The factor of lower degree is
/// evaluated first so that degree-zero factors, which vanish on these
/// arguments, short-circuit the other one.
#[allow(clippy::too_many_arguments)]
fn open_product(
    store: &mut MemoStore,
    n: u32,
    (b1, k1, l1): (u32, u32, &[i64]),
    (b2, k2, l2): (u32, u32, &[i64]),
) -> Result<ExactRational, GwError> {
    let (first, second) = if b1 <= b2 {
        ((b1, k1, l1), (b2, k2, l2))
    } else {
        ((b2, k2, l2), (b1, k1, l1))
    };
    let a = ob(store, n, first.0, first.1, first.2)?;
    if a.is_zero() {
        return Ok(a);
    }
    Ok(a * ob(store, n, second.0, second.1, second.2)?)
}

/// Interior recursion with `Γ_{j_1}` at position `p1` being lowered and
/// `Γ_{j_2}` at position `p2` being raised. The solver always uses the
/// smallest and the largest index; the identity holds for any pair.
pub(crate) fn interior_recursion(
    store: &mut MemoStore,
    key: &OpenKey,
    p1: usize,
    p2: usize,
) -> Result<ExactRational, GwError> {
    debug_assert!(p1 != p2);
    let (n, beta, k) = (key.n, key.beta, key.k);
    let ni = i64::from(n);
    let j1 = i64::from(key.interior[p1]);
    let j2 = i64::from(key.interior[p2]);
    let rest: Vec<u32> = key
        .interior
        .iter()
        .enumerate()
        .filter(|(p, _)| *p != p1 && *p != p2)
        .map(|(_, &j)| j)
        .collect();
    let rest_i = to_i64(&rest);
    let splits = multiset_splits(&rest);

    // leading term; Γ_{j_2+1} vanishes past n
    let mut total = ob(store, n, beta, k, &list(&[j1 - 1, j2 + 1], &rest_i))?;

    // sphere bubbles of degree β̂ ≥ 1 glued to a disk of degree β - 2β̂
    for sphere in 1..=beta / 2 {
        let beta1 = beta - 2 * sphere;
        let sigma = sphere_sign(n, sphere);
        for split in &splits {
            let (s1, s2) = (to_i64(&split.left), to_i64(&split.right));
            let mut inner = ExactRational::zero();
            for i in 0..=ni {
                let c = gw(store, n, sphere, &list(&[1, j2, i], &s1))?;
                if !c.is_zero() {
                    inner += c * ob(store, n, beta1, k, &list(&[ni - i, j1 - 1], &s2))?;
                }
                let c = gw(store, n, sphere, &list(&[1, j1 - 1, i], &s1))?;
                if !c.is_zero() {
                    inner -= c * ob(store, n, beta1, k, &list(&[ni - i, j2], &s2))?;
                }
            }
            if !inner.is_zero() {
                total += inner * &sigma * ExactRational::from_integer(split.weight.clone());
            }
        }
    }

    // two disks sharing a boundary node
    for beta1 in 0..=beta {
        let beta2 = beta - beta1;
        for k1 in 0..=k {
            let k2 = k - k1;
            let choose = binomial(u64::from(k), i64::from(k1));
            for split in &splits {
                let (s1, s2) = (to_i64(&split.left), to_i64(&split.right));
                let a = open_product(
                    store,
                    n,
                    (beta1, k1, &list(&[1, j1 - 1], &s1)),
                    (beta2, k2 + 1, &list(&[j2], &s2)),
                )?;
                let b = open_product(
                    store,
                    n,
                    (beta1, k1, &list(&[1, j2], &s1)),
                    (beta2, k2 + 1, &list(&[j1 - 1], &s2)),
                )?;
                let diff = a - b;
                if !diff.is_zero() {
                    total += diff * ExactRational::from_integer(&choose * &split.weight);
                }
            }
        }
    }
    Ok(total)
}

/// Boundary recursion for `k ≥ 2`, obtained from the `T^{β+1}` coefficient
/// of the `s`-derivative identity with `v = Γ_1`, `w = Γ_n`.
pub(crate) fn boundary_recursion(
    store: &mut MemoStore,
    key: &OpenKey,
) -> Result<ExactRational, GwError> {
    let (n, beta, k) = (key.n, key.beta, key.k);
    debug_assert!(k >= 2);
    let ni = i64::from(n);
    let splits = multiset_splits(&key.interior);
    let m = k - 2;

    let mut spheres = ExactRational::zero();
    for sphere in 1..=(beta + 1) / 2 {
        let beta1 = beta + 1 - 2 * sphere;
        let sigma = sphere_sign(n, sphere);
        for split in &splits {
            let (s1, s2) = (to_i64(&split.left), to_i64(&split.right));
            let mut inner = ExactRational::zero();
            for i in 0..=ni {
                let c = gw(store, n, sphere, &list(&[1, ni, i], &s1))?;
                if !c.is_zero() {
                    inner += c * ob(store, n, beta1, k - 1, &list(&[ni - i], &s2))?;
                }
            }
            if !inner.is_zero() {
                total_add(&mut spheres, inner * &sigma, &split.weight);
            }
        }
    }

    let mut disks = ExactRational::zero();
    for k1 in 0..=m {
        let k2 = m - k1;
        let choose = binomial(u64::from(m), i64::from(k1));
        for split in &splits {
            let (s1, s2) = (to_i64(&split.left), to_i64(&split.right));
            let weight = &choose * &split.weight;
            for beta1 in 1..=beta {
                let beta2 = beta + 1 - beta1;
                if beta1 >= 2 {
                    let t = open_product(
                        store,
                        n,
                        (beta1, k1, &list(&[1, ni], &s1)),
                        (beta2, k2 + 2, &s2),
                    )?;
                    if !t.is_zero() {
                        total_add(&mut disks, -t, &weight);
                    }
                }
                let t = open_product(
                    store,
                    n,
                    (beta1, k1 + 1, &list(&[1], &s1)),
                    (beta2, k2 + 1, &list(&[ni], &s2)),
                )?;
                if !t.is_zero() {
                    total_add(&mut disks, t, &weight);
                }
            }
        }
    }
    let two = ExactRational::from_integer(BigInt::from(2));
    Ok(sign(u64::from((n + 3) / 2)) * two * (spheres + disks))
}

fn total_add(acc: &mut ExactRational, term: ExactRational, weight: &BigInt) {
    *acc += term * ExactRational::from_integer(weight.clone());
}
