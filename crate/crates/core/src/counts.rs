//! Occurrence counts over symbol triples.
//!
//! A [`CountTable`] keeps the three marginals, the three pair joints and the
//! full triple joint. [`SlidingCounts`] maintains a table over the last `W`
//! triples by decrementing on eviction; [`WindowedAccumulator`] pairs it with
//! an ever-growing cumulative table.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::symbolizer::{SymbolLimits, SymbolTriple};

fn bump<K: Ord>(map: &mut BTreeMap<K, u64>, key: K, by: u64) {
    *map.entry(key).or_insert(0) += by;
}

fn drop_one<K: Ord + Copy>(map: &mut BTreeMap<K, u64>, key: K) {
    match map.get_mut(&key) {
        Some(c) if *c > 1 => *c -= 1,
        Some(_) => {
            map.remove(&key);
        }
        None => unreachable!("decrement of absent key"),
    }
}

/// Sparse marginal and joint counts. Zero counts are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountTable {
    n: u64,
    c_s: BTreeMap<u32, u64>,
    c_a: BTreeMap<u32, u64>,
    c_snext: BTreeMap<u32, u64>,
    c_sa: BTreeMap<(u32, u32), u64>,
    c_asnext: BTreeMap<(u32, u32), u64>,
    c_ssnext: BTreeMap<(u32, u32), u64>,
    c_sasnext: BTreeMap<(u32, u32, u32), u64>,
}

impl CountTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_triples<'a>(triples: impl IntoIterator<Item = &'a SymbolTriple>) -> Self {
        let mut table = Self::new();
        for t in triples {
            table.add(*t, 1);
        }
        table
    }

    pub fn record(&mut self, t: SymbolTriple) {
        self.add(t, 1);
    }

    /// Adds `count` occurrences of `t`.
    pub fn add(&mut self, t: SymbolTriple, count: u64) {
        if count == 0 {
            return;
        }
        self.n += count;
        bump(&mut self.c_s, t.s, count);
        bump(&mut self.c_a, t.a, count);
        bump(&mut self.c_snext, t.s_next, count);
        bump(&mut self.c_sa, (t.s, t.a), count);
        bump(&mut self.c_asnext, (t.a, t.s_next), count);
        bump(&mut self.c_ssnext, (t.s, t.s_next), count);
        bump(&mut self.c_sasnext, (t.s, t.a, t.s_next), count);
    }

    /// Removes one occurrence of `t`, which must be present.
    pub(crate) fn remove_one(&mut self, t: SymbolTriple) {
        debug_assert!(self.c_sasnext.contains_key(&(t.s, t.a, t.s_next)));
        self.n -= 1;
        drop_one(&mut self.c_s, t.s);
        drop_one(&mut self.c_a, t.a);
        drop_one(&mut self.c_snext, t.s_next);
        drop_one(&mut self.c_sa, (t.s, t.a));
        drop_one(&mut self.c_asnext, (t.a, t.s_next));
        drop_one(&mut self.c_ssnext, (t.s, t.s_next));
        drop_one(&mut self.c_sasnext, (t.s, t.a, t.s_next));
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn states(&self) -> &BTreeMap<u32, u64> {
        &self.c_s
    }

    pub fn actions(&self) -> &BTreeMap<u32, u64> {
        &self.c_a
    }

    pub fn next_states(&self) -> &BTreeMap<u32, u64> {
        &self.c_snext
    }

    pub fn state_action(&self) -> &BTreeMap<(u32, u32), u64> {
        &self.c_sa
    }

    pub fn action_next(&self) -> &BTreeMap<(u32, u32), u64> {
        &self.c_asnext
    }

    pub fn state_next(&self) -> &BTreeMap<(u32, u32), u64> {
        &self.c_ssnext
    }

    pub fn triples(&self) -> &BTreeMap<(u32, u32, u32), u64> {
        &self.c_sasnext
    }

    /// Every count multiplied by `k`.
    pub fn scaled(&self, k: u64) -> Self {
        let mut out = Self::new();
        for (&(s, a, s_next), &c) in &self.c_sasnext {
            out.add(SymbolTriple::new(s, a, s_next), c * k);
        }
        out
    }

    /// Relabels codes through the given maps (states use `state_map` on both
    /// `s` and `s_next`). Maps must be injective over the codes present.
    pub fn relabeled(
        &self,
        state_map: impl Fn(u32) -> u32,
        action_map: impl Fn(u32) -> u32,
    ) -> Self {
        let mut out = Self::new();
        for (&(s, a, s_next), &c) in &self.c_sasnext {
            out.add(
                SymbolTriple::new(state_map(s), action_map(a), state_map(s_next)),
                c,
            );
        }
        out
    }

    /// Checks that every marginal and pair table is the projection of the
    /// triple table.
    pub fn is_consistent(&self) -> bool {
        let rebuilt = {
            let mut t = Self::new();
            for (&(s, a, s_next), &c) in &self.c_sasnext {
                t.add(SymbolTriple::new(s, a, s_next), c);
            }
            t
        };
        rebuilt == *self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub struct SupportSizes {
    pub states: usize,
    pub actions: usize,
    pub next_states: usize,
}

pub fn support_sizes(table: &CountTable) -> SupportSizes {
    SupportSizes {
        states: table.c_s.len(),
        actions: table.c_a.len(),
        next_states: table.c_snext.len(),
    }
}

/// Counts over the most recent `capacity` triples.
#[derive(Debug, Clone)]
pub struct SlidingCounts {
    capacity: usize,
    ring: VecDeque<SymbolTriple>,
    table: CountTable,
}

impl SlidingCounts {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::Config("sliding window must hold at least 1 step".into()));
        }
        Ok(Self {
            capacity,
            ring: VecDeque::with_capacity(capacity),
            table: CountTable::new(),
        })
    }

    pub fn push(&mut self, t: SymbolTriple) {
        if self.ring.len() == self.capacity {
            let old = self.ring.pop_front().expect("full ring is non-empty");
            self.table.remove_one(old);
        }
        self.ring.push_back(t);
        self.table.record(t);
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.ring.len() == self.capacity
    }

    pub fn table(&self) -> &CountTable {
        &self.table
    }

    pub fn contents(&self) -> impl Iterator<Item = &SymbolTriple> {
        self.ring.iter()
    }
}

/// Cumulative and sliding-window counts fed from one stream.
#[derive(Debug, Clone)]
pub struct WindowedAccumulator {
    limits: SymbolLimits,
    boundary: u64,
    cumulative: CountTable,
    window: SlidingCounts,
}

impl WindowedAccumulator {
    /// `window` is the sliding capacity W, `boundary` the cumulative snapshot
    /// interval B.
    pub fn new(window: usize, boundary: u64, limits: SymbolLimits) -> Result<Self> {
        if boundary == 0 {
            return Err(Error::Config("snapshot boundary must be at least 1 step".into()));
        }
        Ok(Self {
            limits,
            boundary,
            cumulative: CountTable::new(),
            window: SlidingCounts::new(window)?,
        })
    }

    pub fn record(&mut self, t: SymbolTriple) -> Result<()> {
        t.check(self.limits)?;
        self.cumulative.record(t);
        self.window.push(t);
        Ok(())
    }

    pub fn cumulative_counts(&self) -> CountTable {
        self.cumulative.clone()
    }

    pub fn sliding_counts(&self) -> CountTable {
        self.window.table().clone()
    }

    pub fn cumulative(&self) -> &CountTable {
        &self.cumulative
    }

    pub fn window(&self) -> &SlidingCounts {
        &self.window
    }

    pub fn boundary(&self) -> u64 {
        self.boundary
    }

    /// True right after a record that completed a snapshot interval.
    pub fn at_boundary(&self) -> bool {
        self.cumulative.n() > 0 && self.cumulative.n() % self.boundary == 0
    }
}
