//! Tables of open invariants with purely boundary or mixed interior
//! constraints.

use std::fmt::Write as _;
use std::thread;

use clap::ValueEnum;
use gw_core::open::Class::{self, Power};
use gw_core::{ogw, ExactRational, GwError, MemoStore};
use num_traits::Zero;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableName {
    /// `ogw^n_{β,k}` with boundary constraints only; rows `n beta k value`.
    Values,
    /// `ogw^5_{β,0}(Γ_2^{l1}, Γ_4^{l2})`; rows `beta l2 value`.
    Dim5,
    /// `ogw^7_{β,0}(Γ_2^{l1}, Γ_6^{l2})`; rows `beta l2 value`.
    Dim7,
}

/// `(n, β, k)` for the boundary-only table.
pub const VALUES_ROWS: [(u32, u32, u32); 17] = [
    (3, 3, 6),
    (3, 5, 10),
    (3, 7, 14),
    (5, 5, 8),
    (5, 9, 14),
    (5, 13, 20),
    (5, 17, 26),
    (7, 7, 10),
    (7, 13, 18),
    (7, 19, 26),
    (7, 25, 34),
    (9, 9, 12),
    (9, 17, 22),
    (9, 25, 32),
    (9, 33, 42),
    (15, 15, 18),
    (15, 29, 34),
];

/// One table row: its leading columns and the invariant to evaluate, if the
/// constraint counts are realizable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub label: String,
    pub query: Option<(u32, u32, u32, Vec<Class>)>,
}

pub fn cells(name: TableName, max_beta: u32) -> Vec<Cell> {
    match name {
        TableName::Values => VALUES_ROWS
            .iter()
            .filter(|&&(_, beta, _)| beta <= max_beta)
            .map(|&(n, beta, k)| Cell {
                label: format!("{n} {beta} {k}"),
                query: Some((n, beta, k, Vec::new())),
            })
            .collect(),
        TableName::Dim5 => mixed(5, 4, max_beta, |beta, l2| 1 + 3 * beta - 3 * l2),
        TableName::Dim7 => mixed(7, 6, max_beta, |beta, l2| 2 + 4 * beta - 5 * l2),
    }
}

/// Odd `β` up to `max_beta`, `l2 = 0..=3` copies of `Γ_top`, and the number
/// of `Γ_2`s forced by the degree axiom (row value 0 when that is negative).
fn mixed(n: u32, top: u32, max_beta: u32, l1: impl Fn(i64, i64) -> i64) -> Vec<Cell> {
    let mut out = Vec::new();
    for beta in (1..=max_beta).step_by(2) {
        for l2 in 0..=3u32 {
            let count = l1(i64::from(beta), i64::from(l2));
            let query = (count >= 0).then(|| {
                let mut classes = vec![Power(2); count as usize];
                classes.extend(std::iter::repeat_n(Power(top), l2 as usize));
                (n, beta, 0, classes)
            });
            out.push(Cell {
                label: format!("{beta} {l2}"),
                query,
            });
        }
    }
    out
}

pub fn evaluate(store: &mut MemoStore, cell: &Cell) -> Result<ExactRational, GwError> {
    match &cell.query {
        Some((n, beta, k, classes)) => ogw(store, *n, *beta, *k, classes),
        None => Ok(ExactRational::zero()),
    }
}

/// A worker's store and the `(cell index, value)` pairs it produced.
type WorkerOutput = (MemoStore, Vec<(usize, ExactRational)>);

/// Evaluates every cell and renders one `label value` line per row.
///
/// With `jobs > 1` cells are dealt round-robin to worker threads, each
/// working on its own clone of `store`; the clones are folded back in
/// afterwards, so the rendered text does not depend on `jobs`.
pub fn emit_table(
    store: &mut MemoStore,
    name: TableName,
    max_beta: u32,
    jobs: usize,
) -> Result<String, GwError> {
    let cells = cells(name, max_beta);
    let values = if jobs <= 1 || cells.len() <= 1 {
        cells
            .iter()
            .map(|c| evaluate(store, c))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        let jobs = jobs.min(cells.len());
        let base: &MemoStore = store;
        let results: Vec<Result<WorkerOutput, GwError>> = thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs)
                .map(|worker| {
                    let cells = &cells;
                    scope.spawn(move || {
                        let mut local = base.clone();
                        local.reset_stats();
                        let mut out = Vec::new();
                        for (i, cell) in cells.iter().enumerate().skip(worker).step_by(jobs) {
                            out.push((i, evaluate(&mut local, cell)?));
                        }
                        Ok((local, out))
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("table worker panicked"))
                .collect()
        });
        let mut values = vec![ExactRational::zero(); cells.len()];
        for result in results {
            let (local, part) = result?;
            store.absorb(&local)?;
            for (i, v) in part {
                values[i] = v;
            }
        }
        values
    };
    let mut text = String::new();
    for (cell, value) in cells.iter().zip(values) {
        writeln!(text, "{} {}", cell.label, value).expect("writing to a String");
    }
    Ok(text)
}
