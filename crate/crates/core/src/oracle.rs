//! Brute force over all `n!` variable orders.
//!
//! Every order is built from scratch with [`diagram::level_widths`]; nothing
//! is shared with the subset dynamic program, so this is the reference the
//! other modules are checked against.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::boolfn::TruthTable;
use crate::diagram::{self, DiagramKind, VariableOrder};
use crate::error::{Error, Result};
use crate::Var;

pub const MAX_BRUTE_FORCE_VARS: usize = 9;
pub const MAX_ENUMERATE_VARS: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderingReport {
    pub order: VariableOrder,
    pub nonterminals: usize,
    /// Bottom level first.
    pub widths: Vec<usize>,
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// The `rank`-th permutation of `0..n` in lexicographic order.
fn unrank_permutation(mut rank: u64, n: usize) -> Vec<Var> {
    let mut pool: Vec<Var> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let f = factorial(i);
        out.push(pool.remove((rank / f) as usize));
        rank %= f;
    }
    out
}

fn check_n(tt: &TruthTable, max: usize) -> Result<()> {
    if tt.n() > max {
        return Err(Error::TooLarge {
            what: "brute-force variable count",
            n: tt.n(),
            max,
        });
    }
    Ok(())
}

fn report(tt: &TruthTable, read: &[Var], kind: DiagramKind) -> OrderingReport {
    let order = VariableOrder::from_read_order(read).expect("permutation");
    let widths = diagram::level_widths(tt, &order, kind).expect("sizes match");
    OrderingReport {
        order,
        nonterminals: widths.iter().sum(),
        widths,
    }
}

/// Minimum nonterminal count over all orders, with the number of orders
/// attaining it. Among minimizers the lexicographically first read order
/// (root variable first) is reported.
pub fn brute_force_min(tt: &TruthTable, kind: DiagramKind) -> Result<(OrderingReport, u64)> {
    check_n(tt, MAX_BRUTE_FORCE_VARS)?;
    let n = tt.n();
    let (best_rank, best_cost, count) = (0..factorial(n))
        .into_par_iter()
        .map(|rank| {
            let cost = report(tt, &unrank_permutation(rank, n), kind).nonterminals;
            (rank, cost, 1u64)
        })
        .reduce_with(|a, b| match a.1.cmp(&b.1) {
            std::cmp::Ordering::Less => a,
            std::cmp::Ordering::Greater => b,
            std::cmp::Ordering::Equal => (a.0.min(b.0), a.1, a.2 + b.2),
        })
        .expect("at least one order");
    let best = report(tt, &unrank_permutation(best_rank, n), kind);
    debug_assert_eq!(best.nonterminals, best_cost);
    Ok((best, count))
}

/// Nonterminal count of every order.
pub fn enumerate_costs(tt: &TruthTable, kind: DiagramKind) -> Result<BTreeMap<VariableOrder, usize>> {
    check_n(tt, MAX_ENUMERATE_VARS)?;
    let n = tt.n();
    Ok((0..factorial(n))
        .into_par_iter()
        .map(|rank| {
            let r = report(tt, &unrank_permutation(rank, n), kind);
            (r.order, r.nonterminals)
        })
        .collect())
}
