//! The persistent memo store shared by the closed and open solvers.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::ExactRational;
use crate::closed::ClosedKey;
use crate::error::GwError;
use crate::open::OpenKey;

/// Version tag carried by serialized stores.
pub const VERSION_TAG: &str = "gwcache v1";

/// Either kind of key, used for cycle detection and dependency tracing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnyKey {
    Closed(ClosedKey),
    Open(OpenKey),
}

impl fmt::Display for AnyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyKey::Closed(k) => k.fmt(f),
            AnyKey::Open(k) => k.fmt(f),
        }
    }
}

/// A canonical key that owns one of the store's tables.
pub trait MemoKey: Ord + Clone + fmt::Display + 'static {
    fn table(store: &MemoStore) -> &BTreeMap<Self, ExactRational>;
    fn table_mut(store: &mut MemoStore) -> &mut BTreeMap<Self, ExactRational>;
    fn to_any(&self) -> AnyKey;
}

impl MemoKey for ClosedKey {
    fn table(store: &MemoStore) -> &BTreeMap<Self, ExactRational> {
        &store.closed
    }
    fn table_mut(store: &mut MemoStore) -> &mut BTreeMap<Self, ExactRational> {
        &mut store.closed
    }
    fn to_any(&self) -> AnyKey {
        AnyKey::Closed(self.clone())
    }
}

impl MemoKey for OpenKey {
    fn table(store: &MemoStore) -> &BTreeMap<Self, ExactRational> {
        &store.open
    }
    fn table_mut(store: &mut MemoStore) -> &mut BTreeMap<Self, ExactRational> {
        &mut store.open
    }
    fn to_any(&self) -> AnyKey {
        AnyKey::Open(self.clone())
    }
}

/// Write-once map from canonical keys to exact values.
///
/// The store never normalizes keys; callers hand it canonical keys only.
#[derive(Debug, Clone, Default)]
pub struct MemoStore {
    closed: BTreeMap<ClosedKey, ExactRational>,
    open: BTreeMap<OpenKey, ExactRational>,
    in_progress: BTreeSet<AnyKey>,
    stack: Vec<AnyKey>,
    trace: Option<Vec<(AnyKey, AnyKey)>>,
    computed: u64,
    hits: u64,
    max_depth: usize,
}

impl MemoStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// A store that records every (requesting key, requested key) pair seen
    /// while a computation is in flight.
    pub fn with_trace() -> Self {
        Self {
            trace: Some(Vec::new()),
            ..Self::default()
        }
    }

    pub fn version_tag(&self) -> &'static str {
        VERSION_TAG
    }

    pub fn get<K: MemoKey>(&self, key: &K) -> Option<&ExactRational> {
        K::table(self).get(key)
    }

    /// Binds `key` to `value`. Rebinding to the same value is a no-op;
    /// rebinding to a different one is an error.
    pub fn insert<K: MemoKey>(&mut self, key: K, value: ExactRational) -> Result<(), GwError> {
        let table = K::table_mut(self);
        match table.get(&key) {
            Some(stored) if *stored != value => Err(GwError::Conflict {
                key: key.to_string(),
                stored: stored.to_string(),
                new: value.to_string(),
            }),
            Some(_) => Ok(()),
            None => {
                table.insert(key, value);
                Ok(())
            }
        }
    }

    /// Returns the stored value for `key`, or runs `compute`, stores its
    /// result and returns it. Re-entering a key that is still being computed
    /// yields [`GwError::Cycle`].
    pub fn get_or_compute<K, F>(&mut self, key: K, compute: F) -> Result<ExactRational, GwError>
    where
        K: MemoKey,
        F: FnOnce(&mut MemoStore) -> Result<ExactRational, GwError>,
    {
        let any = key.to_any();
        if let (Some(trace), Some(parent)) = (self.trace.as_mut(), self.stack.last()) {
            trace.push((parent.clone(), any.clone()));
        }
        if let Some(v) = K::table(self).get(&key).cloned() {
            self.hits += 1;
            return Ok(v);
        }
        if !self.in_progress.insert(any.clone()) {
            return Err(GwError::Cycle(any.to_string()));
        }
        self.stack.push(any.clone());
        self.max_depth = self.max_depth.max(self.stack.len());
        let result = compute(self);
        self.stack.pop();
        self.in_progress.remove(&any);
        let value = result?;
        self.computed += 1;
        self.insert(key, value.clone())?;
        Ok(value)
    }

    pub fn closed_entries(&self) -> impl Iterator<Item = (&ClosedKey, &ExactRational)> {
        self.closed.iter()
    }

    pub fn open_entries(&self) -> impl Iterator<Item = (&OpenKey, &ExactRational)> {
        self.open.iter()
    }

    pub fn len(&self) -> usize {
        self.closed.len() + self.open.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of compute closures run since creation or the last
    /// [`reset_stats`](Self::reset_stats).
    pub fn computed(&self) -> u64 {
        self.computed
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    /// Deepest nesting of in-flight computations seen so far.
    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn reset_stats(&mut self) {
        self.computed = 0;
        self.hits = 0;
        self.max_depth = 0;
    }

    pub fn trace(&self) -> &[(AnyKey, AnyKey)] {
        self.trace.as_deref().unwrap_or(&[])
    }

    /// Copies every entry of `other` into `self`, failing on the first key
    /// whose values disagree.
    pub fn merge(&mut self, other: &MemoStore) -> Result<(), GwError> {
        for (k, v) in other.closed_entries() {
            self.insert(k.clone(), v.clone())?;
        }
        for (k, v) in other.open_entries() {
            self.insert(k.clone(), v.clone())?;
        }
        Ok(())
    }

    /// [`merge`](Self::merge) followed by adding `other`'s work counters to
    /// ours; used to fold a worker's clone back into the parent store.
    pub fn absorb(&mut self, other: &MemoStore) -> Result<(), GwError> {
        self.merge(other)?;
        self.computed += other.computed;
        self.hits += other.hits;
        self.max_depth = self.max_depth.max(other.max_depth);
        Ok(())
    }
}

/// Entries compare equal; bookkeeping (stats, trace) is ignored.
impl PartialEq for MemoStore {
    fn eq(&self, other: &Self) -> bool {
        self.closed == other.closed && self.open == other.open
    }
}

impl Eq for MemoStore {}
