//! Seeded verification suites over the overdetermined relations.
//!
//! Random instances are drawn so that the relation is degree-balanced (so it
//! can have nonzero terms at all), with one index solved for from the
//! others.

use clap::ValueEnum;
use gw_core::open::Class::{self, Diamond, Power};
use gw_core::verify::{
    canonical_keys, check_alt_reduction, check_closed_exchange, check_dyadic, cor1_side,
    cor2_residual, OpenWdvvInstance,
};
use gw_core::{ogwb, open_admissible, GwError, MemoStore, OpenKey};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Four-point exchange symmetry of the closed invariants.
    ClosedWdvv,
    /// Both open relations (u/v exchange and the boundary direction).
    OpenWdvv,
    /// Denominators of every admissible key are powers of two.
    Dyadic,
    /// The interior recursion agrees for every choice of lowered/raised pair.
    AltReduction,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub checked: usize,
    /// Instances in which the relation has at least one nonzero term.
    pub nontrivial: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, nontrivial: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if nontrivial {
            self.nontrivial += 1;
        }
        if !ok {
            self.failures.push(describe());
        }
    }
}

/// Upper bound on draws per requested sample before giving up on finding a
/// balanced instance.
const ATTEMPTS: usize = 10_000;

/// Runs `suite`. `max_beta` bounds the curve degree (`d` for closed
/// instances); `samples` and `seed` only matter for the sampled suites.
pub fn run_suite(
    store: &mut MemoStore,
    suite: Suite,
    n: u32,
    max_beta: u32,
    samples: usize,
    seed: u64,
) -> Result<SuiteReport, GwError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        Suite::ClosedWdvv => closed_wdvv(store, &mut rng, n, max_beta, samples),
        Suite::OpenWdvv => open_wdvv(store, &mut rng, n, max_beta, samples),
        Suite::Dyadic => {
            let keys = canonical_keys(n, max_beta).len();
            let violations = check_dyadic(store, n, max_beta)?;
            Ok(SuiteReport {
                checked: keys,
                nontrivial: keys,
                failures: violations
                    .iter()
                    .map(|(k, v)| format!("{k} = {v}"))
                    .collect(),
            })
        }
        Suite::AltReduction => {
            let mut report = SuiteReport::default();
            for key in canonical_keys(n, max_beta) {
                if key.beta >= 1 && key.interior.len() >= 2 {
                    let ok = check_alt_reduction(store, &key)?;
                    report.record(ok, true, || key.to_string());
                }
            }
            Ok(report)
        }
    }
}

fn closed_wdvv(
    store: &mut MemoStore,
    rng: &mut ChaCha8Rng,
    n: u32,
    max_d: u32,
    samples: usize,
) -> Result<SuiteReport, GwError> {
    if n < 2 {
        return Err(GwError::InvalidInput(format!(
            "closed invariants need n >= 2, got {n}"
        )));
    }
    let mut report = SuiteReport::default();
    for _ in 0..samples {
        // Σ e + Σ S = n + (n+1) d + |S|; e[3] is solved for
        let found = (0..ATTEMPTS).find_map(|_| {
            let d = rng.gen_range(0..=max_d);
            let spectators: Vec<u32> = (0..rng.gen_range(0..=2))
                .map(|_| rng.gen_range(2..=n))
                .collect();
            let mut e = [0u32; 4];
            for x in &mut e[..3] {
                *x = rng.gen_range(0..=n);
            }
            let target = i64::from(n) + i64::from(n + 1) * i64::from(d) + spectators.len() as i64;
            let rest = target
                - e[..3]
                    .iter()
                    .chain(&spectators)
                    .map(|&x| i64::from(x))
                    .sum::<i64>();
            (0..=i64::from(n)).contains(&rest).then(|| {
                e[3] = rest as u32;
                e.shuffle(rng);
                (d, e, spectators)
            })
        });
        let Some((d, e, spectators)) = found else {
            break;
        };
        let ok = check_closed_exchange(store, n, d, e, &spectators)?;
        let nontrivial = !gw_core::verify::closed_split_sum(store, n, d, e, &spectators)?.is_zero();
        report.record(ok, nontrivial, || {
            format!("n={n} d={d} e={e:?} S={spectators:?}")
        });
    }
    Ok(report)
}

fn open_wdvv(
    store: &mut MemoStore,
    rng: &mut ChaCha8Rng,
    n: u32,
    max_beta: u32,
    samples: usize,
) -> Result<SuiteReport, GwError> {
    if n < 3 || n % 2 == 0 {
        return Err(GwError::InvalidInput(format!(
            "open invariants need odd n >= 3, got {n}"
        )));
    }
    let mut report = SuiteReport::default();
    let ni = i64::from(n);
    for _ in 0..samples {
        // kn + 2(u+v+w+ΣI) = n + 1 + (n+1)β + k + 2|I|; w is solved for
        let found = (0..ATTEMPTS).find_map(|_| {
            let (beta, k, spectators) = draw_open(rng, n, max_beta);
            let (u, v) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
            let twice_w =
                ni + 1 + (ni + 1) * i64::from(beta) + i64::from(k) + 2 * spectators.len() as i64
                    - i64::from(k) * ni
                    - 2 * (i64::from(u)
                        + i64::from(v)
                        + spectators.iter().map(|&j| i64::from(j)).sum::<i64>());
            (twice_w % 2 == 0 && (0..=2 * ni).contains(&twice_w)).then_some(OpenWdvvInstance {
                n,
                u,
                v,
                w: (twice_w / 2) as u32,
                beta,
                k,
                spectators,
            })
        });
        let Some(inst) = found else { break };
        let lhs = cor1_side(store, &inst, inst.u, inst.v)?;
        let rhs = cor1_side(store, &inst, inst.v, inst.u)?;
        let nontrivial = !lhs.is_zero() || !rhs.is_zero();
        report.record(lhs == rhs, nontrivial, || {
            format!("{inst:?}: {lhs} != {rhs}")
        });
    }
    for _ in 0..samples {
        // (n+1)β + k + 2|I| = kn + 2(v+w+ΣI); w is solved for
        let found = (0..ATTEMPTS).find_map(|_| {
            let (beta, k, spectators) = draw_open(rng, n, max_beta);
            let v = rng.gen_range(0..=n);
            let twice_w = (ni + 1) * i64::from(beta) + i64::from(k) + 2 * spectators.len() as i64
                - i64::from(k) * ni
                - 2 * (i64::from(v) + spectators.iter().map(|&j| i64::from(j)).sum::<i64>());
            (twice_w % 2 == 0 && (0..=2 * ni).contains(&twice_w)).then_some((
                v,
                (twice_w / 2) as u32,
                beta,
                k,
                spectators,
            ))
        });
        let Some((v, w, beta, k, spectators)) = found else {
            break;
        };
        let residual = cor2_residual(store, n, v, w, beta, k, &spectators)?;
        report.record(residual.is_zero(), true, || {
            format!("n={n} v={v} w={w} beta={beta} k={k} I={spectators:?}: residual {residual}")
        });
    }
    Ok(report)
}

fn draw_open(rng: &mut ChaCha8Rng, n: u32, max_beta: u32) -> (u32, u32, Vec<u32>) {
    let beta = rng.gen_range(0..=max_beta);
    // k beyond this bound makes the left side of either balance too large
    let k_max = ((n + 1) * (beta + 1) + 4) / (n - 1);
    let k = rng.gen_range(0..=k_max);
    let spectators = (0..rng.gen_range(0..=2))
        .map(|_| rng.gen_range(2..=n))
        .collect();
    (beta, k, spectators)
}

/// Random inputs for the degree axiom and order-independence: every
/// inadmissible input must vanish and every permutation of the interior
/// constraints must give the same value.
pub fn check_axioms_sampled(
    store: &mut MemoStore,
    ns: &[u32],
    max_beta: u32,
    samples: usize,
    seed: u64,
) -> Result<SuiteReport, GwError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::default();
    let pools: Vec<(u32, Vec<OpenKey>)> = ns
        .iter()
        .map(|&n| {
            let keys = canonical_keys(n, max_beta)
                .into_iter()
                .filter(|k| k.beta >= 1)
                .collect();
            (n, keys)
        })
        .collect();
    for _ in 0..samples {
        let (n, pool) = pools.choose(&mut rng).expect("at least one dimension");
        let n = *n;
        let (beta, k, mut classes) = match pool.choose(&mut rng) {
            // half the draws start from an admissible key, dressed up with
            // unit/divisor classes or a wall-crossed boundary point
            Some(key) if rng.gen_bool(0.5) => {
                let mut classes: Vec<Class> = key.interior.iter().map(|&j| Power(j)).collect();
                let mut k = key.k;
                match rng.gen_range(0..4) {
                    0 => classes.push(Power(1)),
                    1 if k > 0 => {
                        k -= 1;
                        classes.push(Diamond);
                    }
                    2 => classes.push(Power(0)),
                    _ => {}
                }
                (key.beta, k, classes)
            }
            _ => {
                let classes = (0..rng.gen_range(0..=5))
                    .map(|_| {
                        if rng.gen_bool(0.15) {
                            Diamond
                        } else {
                            Power(rng.gen_range(0..=n))
                        }
                    })
                    .collect();
                (rng.gen_range(0..=max_beta), rng.gen_range(0..=8), classes)
            }
        };
        let value = ogwb(store, n, beta, k, &classes)?;
        classes.shuffle(&mut rng);
        let permuted = ogwb(store, n, beta, k, &classes)?;
        let admissible = open_admissible(n, beta, k, &classes);
        let ok = value == permuted && (admissible || value.is_zero());
        report.record(ok, !value.is_zero(), || {
            format!("n={n} beta={beta} k={k} {classes:?}: {value} vs {permuted}, admissible={admissible}")
        });
    }
    Ok(report)
}
