//! Divide-and-conquer minimization.
//!
//! For a block `J` above a folded prefix, the optimal cost of `J` splits at
//! any rank `s` into the best cost of some `s`-subset `K` at the bottom plus
//! the best cost of `J \ K` on top of it. [`compose_step`] applies that split
//! recursively with sizes `s_1 < ... < s_k < |J|` derived from a vector of
//! fractions `alpha`, precomputes every `s_1`-subset state with a truncated
//! sweep, searches each split with [`find_min_by`], and hands the top part of
//! every candidate to a pluggable subroutine. Plugging a `compose_step`
//! instance into another one yields the composition chain.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::boolfn::TruthTable;
use crate::diagram::DiagramKind;
use crate::error::{Error, Result};
use crate::fs_engine::{self, check_block, fs_star, fs_star_truncated, FsState, PartitionPrefix};
use crate::qsearch::{find_min_by, SearchMode};
use crate::subset::{self, VarSet};

/// One level of the chain: `k` split fractions, strictly increasing in (0, 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DncLevel {
    pub k: usize,
    pub alphas: Vec<f64>,
}

impl DncLevel {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        let level = Self {
            k: alphas.len(),
            alphas,
        };
        level.validate()?;
        Ok(level)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k != self.alphas.len() {
            return Err(Error::Config(format!(
                "k = {} does not match {} alphas",
                self.k,
                self.alphas.len()
            )));
        }
        if self.alphas.iter().any(|a| !(*a > 0.0 && *a < 1.0)) {
            return Err(Error::Config(format!("alphas {:?} not inside (0, 1)", self.alphas)));
        }
        if self.alphas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!(
                "alphas {:?} not strictly increasing",
                self.alphas
            )));
        }
        Ok(())
    }
}

/// `levels[0]` is the innermost level (it calls the plain sweep), the last
/// entry is the outermost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DncConfig {
    pub levels: Vec<DncLevel>,
    /// Defaults to `2^-n`.
    pub epsilon: Option<f64>,
    pub mode: SearchMode,
    pub kind: DiagramKind,
    pub memoize: bool,
}

impl DncConfig {
    pub fn single(level: DncLevel, kind: DiagramKind, mode: SearchMode) -> Self {
        Self::chain(vec![level], kind, mode)
    }

    pub fn chain(levels: Vec<DncLevel>, kind: DiagramKind, mode: SearchMode) -> Self {
        Self {
            levels,
            epsilon: None,
            mode,
            kind,
            memoize: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let outer = self
            .levels
            .last()
            .ok_or_else(|| Error::Config("no levels configured".into()))?;
        for level in &self.levels {
            level.validate()?;
        }
        if outer.alphas[0] >= 1.0 / 3.0 {
            return Err(Error::Config(format!(
                "outermost alpha_1 = {} must be below 1/3",
                outer.alphas[0]
            )));
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::Config(format!("epsilon {eps} outside (0, 1)")));
            }
        }
        Ok(())
    }
}

/// Integer split sizes `s_1 < ... < s_k < m` for a block of `m` variables,
/// followed by `m` itself. Each `alpha_t * m` is rounded half-up; collisions
/// are pushed upwards and a split that reaches `m` is rejected.
pub fn split_sizes(alphas: &[f64], m: usize) -> Result<Vec<usize>> {
    let mut sizes = Vec::with_capacity(alphas.len() + 1);
    let mut prev = 0usize;
    for &a in alphas {
        let s = ((a * m as f64 + 0.5).floor() as usize).max(prev + 1);
        if s >= m {
            return Err(Error::SplitCollapse {
                alphas: alphas.to_vec(),
                size: m,
            });
        }
        sizes.push(s);
        prev = s;
    }
    sizes.push(m);
    Ok(sizes)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FindMinRecord {
    /// Index into [`DncConfig::levels`].
    pub depth: usize,
    /// Stage `t` of the recursion; candidates have size `s_{t-1}`.
    pub stage: usize,
    pub domain_size: u64,
    pub classical_evals: u64,
    pub quantum_query_bound: Option<u64>,
    pub argmin: u64,
    pub min_cost: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DncStats {
    pub epsilon: f64,
    pub find_min: Vec<FindMinRecord>,
    pub total_classical_evals: u64,
    pub total_quantum_query_bound: u64,
    /// Key evaluations a run without the subset-state cache would perform.
    pub unmemoized_classical_evals: u64,
    pub cache_hits: u64,
    /// Calls into the plain sweep as the innermost subroutine.
    pub sweep_calls: u64,
    /// Inner levels whose splits collapsed for a small block and that
    /// delegated straight to their own subroutine.
    pub fallbacks: u64,
}

pub struct Context {
    pub mode: SearchMode,
    pub epsilon: f64,
    pub memoize: bool,
    pub stats: DncStats,
}

impl Context {
    pub fn new(mode: SearchMode, epsilon: f64, memoize: bool) -> Self {
        Self {
            mode,
            epsilon,
            memoize,
            stats: DncStats {
                epsilon,
                ..DncStats::default()
            },
        }
    }
}

/// Produces the state for `<prefix of state, J>` from `state`.
pub trait SubSolver {
    fn solve(&self, state: &FsState, j: VarSet, ctx: &mut Context) -> Result<FsState>;
}

/// The plain subset sweep.
pub struct Sweep;

impl SubSolver for Sweep {
    fn solve(&self, state: &FsState, j: VarSet, ctx: &mut Context) -> Result<FsState> {
        ctx.stats.sweep_calls += 1;
        fs_star(state, j)
    }
}

/// Levels `levels[0..]` stacked on the sweep, outermost last.
pub struct Chain<'a> {
    pub levels: &'a [DncLevel],
}

impl Chain<'_> {
    fn depth(&self) -> usize {
        self.levels.len() - 1
    }
}

impl SubSolver for Chain<'_> {
    fn solve(&self, state: &FsState, j: VarSet, ctx: &mut Context) -> Result<FsState> {
        let Some((outer, inner)) = self.levels.split_last() else {
            return Sweep.solve(state, j, ctx);
        };
        let inner = Chain { levels: inner };
        match compose_step(state, j, outer, &inner, self.depth(), ctx) {
            Err(Error::SplitCollapse { .. }) => {
                ctx.stats.fallbacks += 1;
                inner.solve(state, j, ctx)
            }
            other => other,
        }
    }
}

struct Driver<'a> {
    base: &'a PartitionPrefix,
    sizes: Vec<usize>,
    pre: BTreeMap<VarSet, FsState>,
    sub: &'a dyn SubSolver,
    depth: usize,
    /// `(stage, set) -> (state, unmemoized evaluations spent on it)`
    memo: HashMap<(usize, VarSet), (FsState, u64)>,
}

impl Driver<'_> {
    /// Optimal state for `<base, L>` where `|L| = s_t`.
    fn best(&mut self, l: VarSet, t: usize, ctx: &mut Context) -> Result<FsState> {
        if t == 1 {
            return Ok(self.pre[&l].clone());
        }
        if ctx.memoize {
            if let Some((st, cost)) = self.memo.get(&(t, l)) {
                ctx.stats.cache_hits += 1;
                ctx.stats.unmemoized_classical_evals += cost;
                return Ok(st.clone());
            }
        }
        let spent_before = ctx.stats.unmemoized_classical_evals;
        let size = self.sizes[t - 2];
        let domain = subset::binomial(subset::len(l) as u64, size as u64);
        let (mode, epsilon) = (ctx.mode, ctx.epsilon);
        let found = find_min_by::<_, _, Error>(domain, mode, epsilon, |i| {
            let k = subset::unrank_subset(l, size, i);
            let bottom = self.best(k, t - 1, ctx)?;
            let st = self.sub.solve(&bottom, l & !k, ctx)?;
            Ok((st.min_cost(), st))
        })?;

        let stats = &mut ctx.stats;
        stats.total_classical_evals += found.stats.classical_evals;
        stats.unmemoized_classical_evals += found.stats.classical_evals;
        stats.total_quantum_query_bound += found.stats.quantum_query_bound.unwrap_or(0);
        stats.find_min.push(FindMinRecord {
            depth: self.depth,
            stage: t,
            domain_size: found.stats.domain_size,
            classical_evals: found.stats.classical_evals,
            quantum_query_bound: found.stats.quantum_query_bound,
            argmin: found.index,
            min_cost: found.key,
        });
        let result = found.value.regrouped(self.base, l);
        if ctx.memoize {
            let spent = ctx.stats.unmemoized_classical_evals - spent_before;
            self.memo.insert((t, l), (result.clone(), spent));
        }
        Ok(result)
    }
}

/// One divide-and-conquer level on block `j` above `prefix_state`, with
/// `sub` producing the top part of every candidate split.
pub fn compose_step(
    prefix_state: &FsState,
    j: VarSet,
    level: &DncLevel,
    sub: &dyn SubSolver,
    depth: usize,
    ctx: &mut Context,
) -> Result<FsState> {
    check_block(prefix_state, j)?;
    level.validate()?;
    let sizes = split_sizes(&level.alphas, subset::len(j))?;
    let pre = fs_star_truncated(prefix_state, j, sizes[0])?;
    let mut driver = Driver {
        base: prefix_state.prefix(),
        sizes,
        pre,
        sub,
        depth,
        memo: HashMap::new(),
    };
    driver.best(j, level.k + 1, ctx)
}

fn run(tt: &TruthTable, cfg: &DncConfig) -> Result<(FsState, DncStats)> {
    cfg.validate()?;
    let epsilon = cfg.epsilon.unwrap_or_else(|| 2f64.powi(-(tt.n() as i32)));
    let mut ctx = Context::new(cfg.mode, epsilon, cfg.memoize);
    let init = fs_engine::initial_state(tt, cfg.kind);
    let (outer, inner) = cfg.levels.split_last().expect("validated");
    let state = compose_step(
        &init,
        subset::full(tt.n()),
        outer,
        &Chain { levels: inner },
        cfg.levels.len() - 1,
        &mut ctx,
    )?;
    Ok((state, ctx.stats))
}

/// Single-level driver: precompute all `s_1`-subset states, then recurse.
pub fn opt_obdd(tt: &TruthTable, cfg: &DncConfig) -> Result<(FsState, DncStats)> {
    if cfg.levels.len() != 1 {
        return Err(Error::Config(format!(
            "expected one level, got {}",
            cfg.levels.len()
        )));
    }
    run(tt, cfg)
}

/// The composition chain: level `i + 1` uses level `i` as its subroutine.
pub fn opt_obdd_composed(tt: &TruthTable, cfg: &DncConfig) -> Result<(FsState, DncStats)> {
    run(tt, cfg)
}

/// `min_K (MinCost<prefix, K> + cost of the levels of J \ K above it)` over
/// the `k`-subsets `K` of `j`, every part taken from the sweep. Equals the
/// optimal cost of `j` for every `k` in `1..|j|`.
pub fn best_split_cost(state: &FsState, j: VarSet, k: usize) -> Result<u32> {
    let pre = fs_star_truncated(state, j, k)?;
    let mut best = u32::MAX;
    for (&kset, bottom) in &pre {
        let top = fs_star(bottom, j & !kset)?;
        let below = bottom.pi_folded().len();
        let upper = top.cost_of_levels(below..top.pi_folded().len());
        best = best.min(bottom.min_cost() + upper);
    }
    Ok(best)
}

/// Split fractions reported in the published parameter tables.
pub mod presets {
    use super::DncLevel;

    /// Optimal split fractions for `k = 1..=6` against a `3^n` subroutine.
    pub const TABLE1: [&[f64]; 6] = [
        &[0.274862],
        &[0.192754, 0.334571],
        &[0.184664, 0.205128, 0.342677],
        &[0.183859, 0.186017, 0.206375, 0.343503],
        &[0.183795, 0.183967, 0.186125, 0.206474, 0.343569],
        &[0.183791, 0.183802, 0.183974, 0.186131, 0.206480, 0.343573],
    ];

    /// `k = 6` split fractions for each step of the composition chain,
    /// innermost first.
    pub const TABLE2: [[f64; 6]; 10] = [
        [0.183792, 0.183802, 0.183974, 0.186132, 0.206480, 0.343573],
        [0.165753, 0.165759, 0.165857, 0.167339, 0.183883, 0.312741],
        [0.160487, 0.160491, 0.160574, 0.16189, 0.177376, 0.303603],
        [0.158777, 0.15878, 0.158859, 0.160124, 0.175273, 0.300622],
        [0.158203, 0.158207, 0.158284, 0.159532, 0.174568, 0.299621],
        [0.158009, 0.158013, 0.158089, 0.159332, 0.174330, 0.299282],
        [0.157943, 0.157947, 0.158023, 0.159264, 0.174249, 0.299166],
        [0.15792, 0.157924, 0.158000, 0.159241, 0.174221, 0.299127],
        [0.157913, 0.157916, 0.157992, 0.159233, 0.174212, 0.299114],
        [0.157910, 0.157914, 0.157990, 0.159230, 0.174208, 0.299109],
    ];

    /// The one-split fraction balancing the precomputation against the
    /// search, `0.274863`.
    pub const SINGLE_SPLIT: f64 = 0.274863;

    pub fn table1(k: usize) -> Option<DncLevel> {
        let alphas = TABLE1.get(k.checked_sub(1)?)?;
        DncLevel::new(alphas.to_vec()).ok()
    }

    pub fn table2_chain(levels: usize) -> Option<Vec<DncLevel>> {
        if levels == 0 || levels > TABLE2.len() {
            return None;
        }
        TABLE2[..levels]
            .iter()
            .map(|a| DncLevel::new(a.to_vec()).ok())
            .collect()
    }
}
