//! Acceptance gate. Prints one `PASS`/`FAIL` line per criterion item and
//! exits non-zero on any unexpected outcome. Every comparison is exact
//! equality of rationals; the only tolerances are the wall-clock budgets
//! pinned below.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use gw::suites::{check_axioms_sampled, run_suite, Suite, SuiteReport};
use gw::tables::{emit_table, TableName};
use gw_core::open::Class::{self, Diamond, Power};
use gw_core::{
    gw_closed, kontsevich_n2_oracle, ogw, ogw_linear, ConstraintVector, ExactRational, GwError,
    MemoStore,
};

const BUDGET_VALUES: Duration = Duration::from_secs(60);
const BUDGET_STRETCH: Duration = Duration::from_secs(15 * 60);
const BUDGET_DIM5: Duration = Duration::from_secs(60);
const BUDGET_DIM7: Duration = Duration::from_secs(120);
const BUDGET_CLOSED: Duration = Duration::from_secs(120);
const BUDGET_PROPERTIES: Duration = Duration::from_secs(10 * 60);

/// Items known not to hold, with the reason. They still print `FAIL`; the
/// gate fails if one of them starts passing so the list stays honest.
const KNOWN_BLOCKED: &[(&str, &str)] = &[(
    "4 n=5",
    "expected ogw_{1,0}(Γ_3,Γ_3) = -1/2 conflicts with dim5 (β=1,l2=1) = 1/2: \
     at β = 1 both reduce to ½·ogw_{1,0}(Γ_n) = ½(-1)^{(n+3)/2}, which is +1/2 for n = 5",
)];

/// `(n, β, k, value)` with boundary constraints only.
const VALUES: [(u32, u32, u32, i64); 7] = [
    (3, 3, 6, -2),
    (3, 5, 10, 90),
    (3, 7, 14, -29178),
    (5, 5, 8, 2),
    (5, 9, 14, 1974),
    (7, 7, 10, -2),
    (9, 9, 12, 2),
];
const STRETCH: [(u32, u32, u32, i64); 3] =
    [(5, 13, 20, 42781410), (7, 13, 18, 35498), (15, 15, 18, -2)];

/// `(β, l2, num, den)` for `ogw^5_{β,0}(Γ_2^{l1}, Γ_4^{l2})`.
const DIM5: [(u32, u32, i64, i64); 6] = [
    (1, 0, 1, 8),
    (1, 1, 1, 2),
    (3, 0, -43515, 512),
    (3, 1, -255, 32),
    (3, 2, -11, 32),
    (3, 3, 3, 8),
];
/// `(β, l2, num, den)` for `ogw^7_{β,0}(Γ_2^{l1}, Γ_6^{l2})`.
const DIM7: [(u32, u32, i64, i64); 5] = [
    (1, 0, -1, 32),
    (1, 1, -1, 2),
    (3, 1, -23229, 512),
    (3, 2, -11, 32),
    (3, 3, 0, 1),
];
const KONTSEVICH: [i64; 6] = [1, 1, 12, 620, 87304, 26312976];

struct Outcome {
    id: String,
    passed: bool,
    gating: bool,
    detail: String,
    elapsed: Duration,
}

fn q(num: i64, den: i64) -> ExactRational {
    ExactRational::new(num.into(), den.into())
}

/// Runs `body`, which returns whether it passed and a one-line summary.
fn item(
    out: &mut Vec<Outcome>,
    id: impl Into<String>,
    budget: Duration,
    gating: bool,
    body: impl FnOnce() -> Result<(bool, String), GwError>,
) {
    let start = Instant::now();
    let (passed, detail) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let detail = if in_time {
        detail
    } else {
        format!("{detail}; over budget {budget:?}")
    };
    out.push(Outcome {
        id: id.into(),
        passed: passed && in_time,
        gating,
        detail,
        elapsed,
    });
}

fn mismatches(list: Vec<String>) -> (bool, String) {
    if list.is_empty() {
        (true, "all equal".into())
    } else {
        (false, list.join("; "))
    }
}

fn suite_line(report: &SuiteReport, minimum: usize) -> (bool, String) {
    let enough = report.checked >= minimum;
    let mut detail = format!(
        "checked={} (need {minimum}) nontrivial={} failed={}",
        report.checked,
        report.nontrivial,
        report.failures.len()
    );
    if let Some(first) = report.failures.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    (report.passed() && enough, detail)
}

fn table_values(out: &mut Vec<Outcome>) {
    item(out, "1", BUDGET_VALUES, true, || {
        let mut store = MemoStore::new();
        let mut bad = Vec::new();
        for (n, beta, k, want) in VALUES {
            let got = ogw(&mut store, n, beta, k, &[])?;
            if got != q(want, 1) {
                bad.push(format!("ogw^{n}_{{{beta},{k}}} = {got}, want {want}"));
            }
        }
        let (ok, detail) = mismatches(bad);
        Ok((
            ok,
            format!("boundary-only table, {} entries: {detail}", VALUES.len()),
        ))
    });
    for (n, beta, k, want) in STRETCH {
        item(
            out,
            format!("1 stretch n={n} b={beta}"),
            BUDGET_STRETCH,
            false,
            || {
                let got = ogw(&mut MemoStore::new(), n, beta, k, &[])?;
                Ok((
                    got == q(want, 1),
                    format!("ogw^{n}_{{{beta},{k}}} = {got}, want {want}"),
                ))
            },
        );
    }
}

/// `l1(β, l2)` is the number of `Γ_2` insertions forced by the degree axiom.
fn mixed_table(
    out: &mut Vec<Outcome>,
    id: &str,
    (n, top): (u32, u32),
    l1: fn(i64, i64) -> i64,
    rows: &[(u32, u32, i64, i64)],
    budget: Duration,
) {
    item(out, id, budget, true, || {
        let mut store = MemoStore::new();
        let mut bad = Vec::new();
        for &(beta, l2, num, den) in rows {
            let l1 = l1(i64::from(beta), i64::from(l2));
            let got = if l1 < 0 {
                q(0, 1)
            } else {
                let mut classes = vec![Power(2); l1 as usize];
                classes.extend(std::iter::repeat_n(Power(top), l2 as usize));
                ogw(&mut store, n, beta, 0, &classes)?
            };
            if got != q(num, den) {
                bad.push(format!("(β={beta}, l2={l2}) = {got}, want {}", q(num, den)));
            }
        }
        let (ok, detail) = mismatches(bad);
        Ok((
            ok,
            format!(
                "ogw^{n}_{{β,0}}(Γ_2^l1, Γ_{top}^l2), {} entries: {detail}",
                rows.len()
            ),
        ))
    });
}

fn real_lines(out: &mut Vec<Outcome>) {
    for n in [3u32, 5, 7] {
        item(out, format!("4 n={n}"), BUDGET_VALUES, true, || {
            let mut s = MemoStore::new();
            let r1 = (n + 1) / 2;
            let plus = ConstraintVector::basis(Power(r1)).with(Diamond, q(-1, 2));
            let minus = ConstraintVector::basis(Power(r1)).with(Diamond, q(1, 2));
            let sign = if ((n + 3) / 2) % 2 == 0 { 1 } else { -1 };
            let checks: Vec<(&str, ExactRational, ExactRational)> = vec![
                ("ogw_{1,2}", ogw(&mut s, n, 1, 2, &[])?, q(2, 1)),
                (
                    "ogw_{1,1}(Γ_{r+1})",
                    ogw(&mut s, n, 1, 1, &[Power(r1)])?,
                    q(0, 1),
                ),
                (
                    "ogw_{1,0}(Γ_n)",
                    ogw(&mut s, n, 1, 0, &[Power(n)])?,
                    q(sign, 1),
                ),
                (
                    "ogw_{1,0}(Γ_{r+1},Γ_{r+1})",
                    ogw(&mut s, n, 1, 0, &[Power(r1), Power(r1)])?,
                    q(-1, 2),
                ),
                (
                    "ogw_{1,0}(Γ_⋄,Γ_⋄)",
                    ogw(&mut s, n, 1, 0, &[Diamond, Diamond] as &[Class])?,
                    q(2, 1),
                ),
                (
                    "ogw_{1,0}(Γ_{r+1},Γ_⋄)",
                    ogw(&mut s, n, 1, 0, &[Power(r1), Diamond])?,
                    q(0, 1),
                ),
                (
                    "λ+λ-",
                    ogw_linear(&mut s, n, 1, 0, &[plus.clone(), minus.clone()])?,
                    q(-1, 1),
                ),
                (
                    "λ-λ+",
                    ogw_linear(&mut s, n, 1, 0, &[minus.clone(), plus.clone()])?,
                    q(-1, 1),
                ),
                (
                    "λ+λ+",
                    ogw_linear(&mut s, n, 1, 0, &[plus.clone(), plus])?,
                    q(0, 1),
                ),
                (
                    "λ-λ-",
                    ogw_linear(&mut s, n, 1, 0, &[minus.clone(), minus])?,
                    q(0, 1),
                ),
            ];
            let bad = checks
                .into_iter()
                .filter(|(_, got, want)| got != want)
                .map(|(name, got, want)| format!("{name} = {got}, want {want}"))
                .collect();
            let (ok, detail) = mismatches(bad);
            Ok((ok, format!("degree-one identities: {detail}")))
        });
    }
}

fn closed(out: &mut Vec<Outcome>) {
    item(out, "5", BUDGET_CLOSED, true, || {
        let mut store = MemoStore::new();
        let mut bad = Vec::new();
        for r in [1u32, 2, 3] {
            let n = 2 * r + 1;
            let got = gw_closed(&mut store, n, 1, &[r + 1; 4])?;
            if got != q(i64::from(r) + 1, 1) {
                bad.push(format!("lines in CP^{n}: {got}, want {}", r + 1));
            }
        }
        for (d, want) in (1u32..).zip(KONTSEVICH) {
            let oracle = kontsevich_n2_oracle(d);
            let got = gw_closed(&mut store, 2, d, &vec![2; (3 * d - 1) as usize])?;
            if got != ExactRational::from_integer(oracle.clone()) || oracle != want.into() {
                bad.push(format!(
                    "plane degree {d}: solver {got}, oracle {oracle}, want {want}"
                ));
            }
        }
        let (ok, detail) = mismatches(bad);
        Ok((
            ok,
            format!("line seeds n=3,5,7 and plane curves d<=6: {detail}"),
        ))
    });
}

fn properties(out: &mut Vec<Outcome>) {
    let start = Instant::now();
    let mut store = MemoStore::new();
    item(out, "6a", BUDGET_PROPERTIES, true, || {
        let mut a = run_suite(&mut store, Suite::Dyadic, 3, 5, 0, 0)?;
        let b = run_suite(&mut store, Suite::Dyadic, 5, 5, 0, 0)?;
        a.checked += b.checked;
        a.nontrivial += b.nontrivial;
        a.failures.extend(b.failures);
        let (ok, detail) = suite_line(&a, 1);
        Ok((ok, format!("dyadic denominators n=3,5 β<=5: {detail}")))
    });
    item(out, "6b", BUDGET_PROPERTIES, true, || {
        let mut total = SuiteReport::default();
        for n in 2..=5 {
            let r = run_suite(&mut store, Suite::ClosedWdvv, n, 3, 60, 1000 + u64::from(n))?;
            total.checked += r.checked;
            total.nontrivial += r.nontrivial;
            total.failures.extend(r.failures);
        }
        let (ok, detail) = suite_line(&total, 200);
        Ok((ok, format!("closed exchange n<=5 d<=3: {detail}")))
    });
    item(out, "6c", BUDGET_PROPERTIES, true, || {
        // each suite run draws `samples` instances of both relations
        let mut total = SuiteReport::default();
        for n in [3, 5] {
            let r = run_suite(&mut store, Suite::OpenWdvv, n, 4, 60, 2000 + u64::from(n))?;
            total.checked += r.checked;
            total.nontrivial += r.nontrivial;
            total.failures.extend(r.failures);
        }
        let (ok, detail) = suite_line(&total, 200);
        Ok((
            ok,
            format!("open relations n=3,5 β<=4, 120 of each: {detail}"),
        ))
    });
    item(out, "6d", BUDGET_PROPERTIES, true, || {
        let r = run_suite(&mut store, Suite::AltReduction, 3, 4, 0, 0)?;
        let (ok, detail) = suite_line(&r, 1);
        Ok((ok, format!("alternative reductions n=3 β<=4: {detail}")))
    });
    item(out, "6e", BUDGET_PROPERTIES, true, || {
        let r = check_axioms_sampled(&mut store, &[3, 5, 7], 4, 500, 3000)?;
        let (ok, detail) = suite_line(&r, 500);
        Ok((ok, format!("degree vanishing and symmetry: {detail}")))
    });
    item(out, "6", BUDGET_PROPERTIES, true, || {
        Ok((
            true,
            format!("property suite total {:.2?}", start.elapsed()),
        ))
    });
}

fn cache_round_trip(out: &mut Vec<Outcome>) {
    item(out, "7", BUDGET_VALUES * 2, true, || {
        let dir = tempfile::tempdir().expect("temporary directory");
        let cache = dir.path().join("values.gwcache");
        let copy = dir.path().join("copy.gwcache");
        let gw = |args: &[&str]| {
            Command::new(env!("CARGO_BIN_EXE_gw"))
                .arg("--cache")
                .arg(&cache)
                .arg("--stats")
                .args(args)
                .env_remove("GW_CACHE")
                .output()
                .expect("running gw")
        };
        let table = ["table", "--name", "values", "--max-beta", "9"];
        let cold = gw(&table);
        let warm = gw(&table);
        let resave = gw(&["cache", "--save", copy.to_str().expect("utf-8 path")]);
        let warm_stats = String::from_utf8_lossy(&warm.stderr);
        let checks = [
            (
                cold.status.success() && warm.status.success() && resave.status.success(),
                "exit status",
            ),
            (cold.stdout.lines().count() == VALUES.len(), "row count"),
            (cold.stdout == warm.stdout, "byte-identical tables"),
            (
                warm_stats.contains(" computed=0 "),
                "no recomputation after reload",
            ),
            (
                std::fs::read(&cache).ok() == std::fs::read(&copy).ok(),
                "save/load/save fixed point",
            ),
        ];
        let bad: Vec<String> = checks
            .iter()
            .filter(|(ok, _)| !ok)
            .map(|(_, what)| what.to_string())
            .collect();
        let (ok, detail) = mismatches(bad);
        Ok((
            ok,
            format!(
                "cache round-trip through a fresh process ({}): {detail}",
                warm_stats.trim()
            ),
        ))
    });
}

trait Lines {
    fn lines(&self) -> std::str::Lines<'_>;
}

impl Lines for Vec<u8> {
    fn lines(&self) -> std::str::Lines<'_> {
        std::str::from_utf8(self).unwrap_or("").lines()
    }
}

fn main() -> ExitCode {
    let mut out = Vec::new();
    table_values(&mut out);
    mixed_table(
        &mut out,
        "2",
        (5, 4),
        |b, l2| 1 + 3 * b - 3 * l2,
        &DIM5,
        BUDGET_DIM5,
    );
    mixed_table(
        &mut out,
        "3",
        (7, 6),
        |b, l2| 2 + 4 * b - 5 * l2,
        &DIM7,
        BUDGET_DIM7,
    );
    real_lines(&mut out);
    closed(&mut out);
    properties(&mut out);
    cache_round_trip(&mut out);

    let mut unexpected = 0;
    for o in &out {
        let blocked = KNOWN_BLOCKED.iter().find(|(id, _)| *id == o.id);
        let status = if o.passed { "PASS" } else { "FAIL" };
        let mut note = String::new();
        if !o.gating {
            note.push_str(" [non-gating]");
        }
        if let Some((_, why)) = blocked {
            note.push_str(&format!(" [known blocked: {why}]"));
        }
        println!(
            "{status} {:<20} {:>9.3?}  {}{note}",
            o.id, o.elapsed, o.detail
        );
        let expected_pass = blocked.is_none();
        if o.gating && o.passed != expected_pass {
            unexpected += 1;
        }
    }
    // sanity: the reference table matches the emitted table rows
    let emitted = emit_table(&mut MemoStore::new(), TableName::Values, 9, 1).unwrap_or_default();
    let expected: String = VALUES
        .iter()
        .map(|(n, b, k, v)| format!("{n} {b} {k} {v}\n"))
        .collect();
    if emitted != expected {
        println!("FAIL table emitter disagrees with the reference rows");
        unexpected += 1;
    }
    if unexpected == 0 {
        println!("acceptance: all gating items as expected");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} unexpected outcome(s)");
        ExitCode::FAILURE
    }
}
