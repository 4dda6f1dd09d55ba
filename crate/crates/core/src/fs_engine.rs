//! Dynamic programming over subsets by table folding.
//!
//! A [`FsState`] describes the bottom levels of an optimal diagram once the
//! variables of an ordered block prefix `<I_1, ..., I_m>` have been placed
//! at the lowest levels. Its table maps every assignment of the remaining
//! (unfolded) variables to the node representing the corresponding
//! subfunction. Folding one more variable halves the table and materializes
//! exactly one more level, so the minimum over fold orders can be computed
//! subset by subset.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::boolfn::TruthTable;
use crate::diagram::{DiagramKind, NodeRef, VariableOrder};
use crate::error::{Error, Result};
use crate::subset::{self, VarSet};
use crate::Var;

/// Ordered list of pairwise disjoint variable blocks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PartitionPrefix {
    blocks: Vec<VarSet>,
}

impl PartitionPrefix {
    pub fn new(blocks: Vec<VarSet>) -> Result<Self> {
        let mut union = 0;
        for &b in &blocks {
            if b & union != 0 {
                return Err(Error::InvalidSet(format!(
                    "block {} overlaps earlier blocks",
                    subset::display(b)
                )));
            }
            union |= b;
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[VarSet] {
        &self.blocks
    }

    pub fn union(&self) -> VarSet {
        self.blocks.iter().fold(0, |a, &b| a | b)
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    fn extended(&self, block: VarSet) -> Self {
        let mut blocks = self.blocks.clone();
        blocks.push(block);
        Self { blocks }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FsState {
    n: usize,
    kind: DiagramKind,
    prefix: PartitionPrefix,
    folded: VarSet,
    /// Folded variables, bottom level first.
    pi_folded: Vec<Var>,
    min_cost: u32,
    /// Indexed by the assignment to the unfolded variables, the smallest
    /// unfolded index being the least significant bit.
    table: Vec<NodeRef>,
    /// Children of the nodes on the topmost folded level, in reference order.
    top_nodes: Vec<(NodeRef, NodeRef)>,
    fold_increments: Vec<u32>,
}

/// Debug dump of a state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDump {
    pub kind: DiagramKind,
    pub prefix: Vec<Vec<usize>>,
    pub pi_folded: Vec<usize>,
    pub min_cost: u32,
    pub fold_increments: Vec<u32>,
    pub table_len: usize,
}

impl FsState {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> DiagramKind {
        self.kind
    }

    pub fn prefix(&self) -> &PartitionPrefix {
        &self.prefix
    }

    pub fn folded(&self) -> VarSet {
        self.folded
    }

    pub fn unfolded(&self) -> VarSet {
        subset::full(self.n) & !self.folded
    }

    pub fn pi_folded(&self) -> &[Var] {
        &self.pi_folded
    }

    pub fn min_cost(&self) -> u32 {
        self.min_cost
    }

    pub fn table(&self) -> &[NodeRef] {
        &self.table
    }

    /// Per-level node counts, bottom level first.
    pub fn fold_increments(&self) -> &[u32] {
        &self.fold_increments
    }

    /// Sum of the increments for the folds at positions `range` (0-based,
    /// bottom first).
    pub fn cost_of_levels(&self, range: std::ops::Range<usize>) -> u32 {
        self.fold_increments[range].iter().sum()
    }

    /// The unique-node map of the topmost folded level, `(lo, hi) -> ref`.
    pub fn node_map(&self) -> HashMap<(NodeRef, NodeRef), NodeRef> {
        let first = self.first_top_ref();
        self.top_nodes
            .iter()
            .enumerate()
            .map(|(i, &children)| (children, first + i as NodeRef))
            .collect()
    }

    fn first_top_ref(&self) -> NodeRef {
        self.min_cost + 2 - self.top_nodes.len() as NodeRef
    }

    /// Complete the folded sub-order to a full variable order by placing the
    /// unfolded variables above it in ascending index order.
    pub fn completed_order(&self) -> VariableOrder {
        let mut pi = self.pi_folded.clone();
        pi.extend(subset::members(self.unfolded()));
        VariableOrder::from_levels(pi).expect("folded and unfolded partition the variables")
    }

    pub fn dump(&self) -> StateDump {
        StateDump {
            kind: self.kind,
            prefix: self
                .prefix
                .blocks()
                .iter()
                .map(|&b| subset::members(b).map(|v| v + 1).collect())
                .collect(),
            pi_folded: self.pi_folded.iter().map(|v| v + 1).collect(),
            min_cost: self.min_cost,
            fold_increments: self.fold_increments.clone(),
            table_len: self.table.len(),
        }
    }

    /// Replace the block structure above `base` blocks by the single block
    /// `block`. Used once a subroutine has optimized over all orders of it.
    pub(crate) fn regrouped(mut self, base: &PartitionPrefix, block: VarSet) -> Self {
        debug_assert_eq!(base.union() | block, self.folded);
        self.prefix = base.extended(block);
        self
    }
}

pub fn initial_state(tt: &TruthTable, kind: DiagramKind) -> FsState {
    FsState {
        n: tt.n(),
        kind,
        prefix: PartitionPrefix::default(),
        folded: 0,
        pi_folded: Vec::new(),
        min_cost: 0,
        table: tt.bits().iter().map(|b| NodeRef::from(*b)).collect(),
        top_nodes: Vec::new(),
        fold_increments: Vec::new(),
    }
}

/// Fold the table of `s` with respect to variable `k`.
pub fn fold(s: &FsState, k: Var) -> Result<FsState> {
    if k >= s.n {
        return Err(Error::VariableOutOfRange { index: k + 1, n: s.n });
    }
    if subset::contains(s.folded, k) {
        return Err(Error::AlreadyFolded(k + 1));
    }
    Ok(fold_unchecked(s, k))
}

fn fold_unchecked(s: &FsState, k: Var) -> FsState {
    // bit position of x_k inside the table index
    let p = (s.unfolded() & (subset::singleton(k) - 1)).count_ones();
    let low_mask = (1usize << p) - 1;
    let half = s.table.len() / 2;

    let mut unique: FxHashMap<(NodeRef, NodeRef), NodeRef> = FxHashMap::default();
    let mut top_nodes = Vec::new();
    let mut min_cost = s.min_cost;
    let table = (0..half)
        .map(|b| {
            let i0 = (b & low_mask) | ((b & !low_mask) << 1);
            let (u0, u1) = (s.table[i0], s.table[i0 | (1 << p)]);
            if let Some(r) = s.kind.collapse(u0, u1) {
                return r;
            }
            *unique.entry((u0, u1)).or_insert_with(|| {
                let fresh = min_cost + 2;
                min_cost += 1;
                top_nodes.push((u0, u1));
                fresh
            })
        })
        .collect();

    let mut pi_folded = Vec::with_capacity(s.pi_folded.len() + 1);
    pi_folded.extend_from_slice(&s.pi_folded);
    pi_folded.push(k);
    let mut fold_increments = Vec::with_capacity(s.fold_increments.len() + 1);
    fold_increments.extend_from_slice(&s.fold_increments);
    fold_increments.push(min_cost - s.min_cost);

    FsState {
        n: s.n,
        kind: s.kind,
        prefix: s.prefix.extended(subset::singleton(k)),
        folded: s.folded | subset::singleton(k),
        pi_folded,
        min_cost,
        table,
        top_nodes,
        fold_increments,
    }
}

pub(crate) fn check_block(s: &FsState, j: VarSet) -> Result<()> {
    if j == 0 {
        return Err(Error::InvalidSet("variable set is empty".into()));
    }
    if j & !subset::full(s.n) != 0 {
        return Err(Error::InvalidSet(format!(
            "{} is not a subset of x1..x{}",
            subset::display(j),
            s.n
        )));
    }
    if j & s.folded != 0 {
        return Err(Error::InvalidSet(format!(
            "{} intersects the folded variables {}",
            subset::display(j),
            subset::display(s.folded)
        )));
    }
    Ok(())
}

/// Best fold of `k` in `set` on top of the states for `set \ {k}`; ties go
/// to the smallest `k`.
fn best_extension<'a>(set: VarSet, parent: impl Fn(VarSet) -> &'a FsState) -> FsState {
    let mut best: Option<FsState> = None;
    for k in subset::members(set) {
        let cand = fold_unchecked(parent(set & !subset::singleton(k)), k);
        if best.as_ref().is_none_or(|b| cand.min_cost < b.min_cost) {
            best = Some(cand);
        }
    }
    best.expect("nonempty set")
}

/// Run the rank-by-rank sweep over subsets of `j` up to `rank`, keeping
/// only the last two ranks alive.
fn sweep(s: &FsState, j: VarSet, rank: usize) -> FxHashMap<VarSet, FsState> {
    let base = &s.prefix;
    let mut layer: FxHashMap<VarSet, FsState> = FxHashMap::default();
    for r in 1..=rank {
        let prev = &layer;
        let next: Vec<(VarSet, FsState)> = subset::k_subsets(j, r)
            .into_par_iter()
            .map(|set| {
                let st = best_extension(set, |rest| if rest == 0 { s } else { &prev[&rest] });
                (set, st.regrouped(base, set))
            })
            .collect();
        layer = next.into_iter().collect();
    }
    layer
}

/// The state for `<prefix of s, J>`: optimal over all orders of `J` placed
/// directly above the already folded levels.
pub fn fs_star(s: &FsState, j: VarSet) -> Result<FsState> {
    check_block(s, j)?;
    let mut layer = sweep(s, j, subset::len(j));
    Ok(layer.remove(&j).expect("full rank holds J"))
}

/// Stop the sweep at `rank`: one optimal state per `rank`-subset `K` of `J`.
pub fn fs_star_truncated(s: &FsState, j: VarSet, rank: usize) -> Result<BTreeMap<VarSet, FsState>> {
    check_block(s, j)?;
    if rank == 0 || rank > subset::len(j) {
        return Err(Error::InvalidSet(format!(
            "rank {rank} outside 1..={}",
            subset::len(j)
        )));
    }
    Ok(sweep(s, j, rank).into_iter().collect())
}

/// Result of a full minimization.
#[derive(Clone, Debug)]
pub struct Minimum {
    pub order: VariableOrder,
    pub min_cost: u32,
    /// Bottom level first.
    pub per_level_costs: Vec<u32>,
    pub state: FsState,
}

impl Minimum {
    pub fn from_state(state: FsState) -> Self {
        Self {
            order: state.completed_order(),
            min_cost: state.min_cost(),
            per_level_costs: state.fold_increments().to_vec(),
            state,
        }
    }
}

/// Exact minimum over all `n!` orders in `O*(3^n)` time.
pub fn min_obdd_fs(tt: &TruthTable, kind: DiagramKind) -> Minimum {
    let init = initial_state(tt, kind);
    let fin = fs_star(&init, subset::full(tt.n())).expect("full set is a valid block");
    Minimum::from_state(fin)
}

/// `sum_{k=0}^{n} 2^{n-k} C(n,k)`: the number of table cells touched by the
/// full sweep, which equals `3^n`.
pub fn sweep_work(n: u32) -> u128 {
    (0..=n)
        .map(|k| (1u128 << (n - k)) * u128::from(subset::binomial(n.into(), k.into())))
        .sum()
}
