//! Reduced OBDDs and ZDDs for a fixed variable order.
//!
//! Levels are numbered bottom-up: level 1 is read last and sits next to the
//! terminals, level `n` holds the root. Terminal references are `0` (false)
//! and `1` (true); nonterminals are numbered from `2` upwards.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::boolfn::TruthTable;
use crate::error::{Error, Result};
use crate::Var;

pub type NodeRef = u32;

pub const FALSE: NodeRef = 0;
pub const TRUE: NodeRef = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagramKind {
    Obdd,
    Zdd,
}

impl DiagramKind {
    /// The node-elimination rule: `Some(r)` when a node with children
    /// `(lo, hi)` is redundant and every reference to it becomes `r`.
    #[inline]
    pub fn collapse(self, lo: NodeRef, hi: NodeRef) -> Option<NodeRef> {
        match self {
            DiagramKind::Obdd if lo == hi => Some(lo),
            DiagramKind::Zdd if hi == FALSE => Some(lo),
            _ => None,
        }
    }
}

impl fmt::Display for DiagramKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagramKind::Obdd => "obdd",
            DiagramKind::Zdd => "zdd",
        })
    }
}

impl std::str::FromStr for DiagramKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "obdd" | "bdd" => Ok(DiagramKind::Obdd),
            "zdd" => Ok(DiagramKind::Zdd),
            other => Err(Error::Config(format!("unknown diagram kind `{other}`"))),
        }
    }
}

/// A variable ordering stored bottom-up: `levels()[0]` is read last.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariableOrder {
    pi: Vec<Var>,
}

impl VariableOrder {
    /// From the bottom-up listing (`pi[0]` is the variable at level 1).
    pub fn from_levels(pi: Vec<Var>) -> Result<Self> {
        let n = pi.len();
        let mut seen = vec![false; n];
        for &v in &pi {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidOrder(format!(
                    "{:?} is not a permutation of 0..{n}",
                    pi
                )));
            }
        }
        Ok(Self { pi })
    }

    /// From the order in which variables are read, root first.
    pub fn from_read_order(read: &[Var]) -> Result<Self> {
        Self::from_levels(read.iter().rev().copied().collect())
    }

    /// Read order `x1, x2, ..., xn`.
    pub fn natural(n: usize) -> Self {
        Self {
            pi: (0..n).rev().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.pi.len()
    }

    pub fn levels(&self) -> &[Var] {
        &self.pi
    }

    /// Variable at `level` (1-based).
    pub fn var_at(&self, level: usize) -> Var {
        self.pi[level - 1]
    }

    /// Level (1-based) of variable `var`.
    pub fn level_of(&self, var: Var) -> Option<usize> {
        self.pi.iter().position(|&v| v == var).map(|p| p + 1)
    }

    pub fn read_order(&self) -> Vec<Var> {
        self.pi.iter().rev().copied().collect()
    }
}

impl fmt::Display for VariableOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.read_order().iter().map(|v| format!("x{}", v + 1)).collect();
        write!(f, "({})", names.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub level: u32,
    pub lo: NodeRef,
    pub hi: NodeRef,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    kind: DiagramKind,
    order: VariableOrder,
    /// Node `r` lives at `nodes[r - 2]`.
    nodes: Vec<Node>,
    root: NodeRef,
    /// `widths[l - 1]` is the node count at level `l`.
    widths: Vec<usize>,
}

/// JSON-facing summary of a diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramSummary {
    pub kind: DiagramKind,
    pub order_read_first_to_last: Vec<usize>,
    pub widths_root_to_bottom: Vec<usize>,
    pub nonterminals: usize,
    pub total: usize,
}

/// Truth table rearranged so that bit `l - 1` of an index carries the
/// variable at level `l`.
fn level_major_table(tt: &TruthTable, order: &VariableOrder) -> Result<Vec<NodeRef>> {
    if order.n() != tt.n() {
        return Err(Error::SizeMismatch {
            expected: tt.n(),
            actual: order.n(),
        });
    }
    let pi = order.levels();
    Ok((0..tt.len())
        .map(|idx| {
            let orig = pi
                .iter()
                .enumerate()
                .fold(0usize, |acc, (l, &v)| acc | ((idx >> l & 1) << v));
            NodeRef::from(tt.get(orig))
        })
        .collect())
}

/// Bottom-up reduction. Adjacent entries of the level table differ only in
/// the variable of the level being built, so each level pairs them up.
fn reduce(
    tt: &TruthTable,
    order: &VariableOrder,
    kind: DiagramKind,
    mut emit: impl FnMut(Node),
) -> Result<(NodeRef, Vec<usize>)> {
    let mut table = level_major_table(tt, order)?;
    let mut widths = Vec::with_capacity(tt.n());
    let mut next: NodeRef = 2;
    for level in 1..=tt.n() {
        let mut unique: FxHashMap<(NodeRef, NodeRef), NodeRef> = FxHashMap::default();
        let before = next;
        table = table
            .chunks_exact(2)
            .map(|pair| {
                let (lo, hi) = (pair[0], pair[1]);
                if let Some(r) = kind.collapse(lo, hi) {
                    return r;
                }
                *unique.entry((lo, hi)).or_insert_with(|| {
                    emit(Node {
                        level: level as u32,
                        lo,
                        hi,
                    });
                    next += 1;
                    next - 1
                })
            })
            .collect();
        widths.push((next - before) as usize);
    }
    debug_assert_eq!(table.len(), 1);
    Ok((table[0], widths))
}

/// Per-level widths (bottom-up) without materializing the node store.
pub fn level_widths(tt: &TruthTable, order: &VariableOrder, kind: DiagramKind) -> Result<Vec<usize>> {
    reduce(tt, order, kind, |_| {}).map(|(_, w)| w)
}

/// The unique reduced diagram of `kind` for `tt` under `order`.
pub fn build_diagram(tt: &TruthTable, order: &VariableOrder, kind: DiagramKind) -> Result<Diagram> {
    let mut nodes = Vec::new();
    let (root, widths) = reduce(tt, order, kind, |node| nodes.push(node))?;
    Ok(Diagram {
        kind,
        order: order.clone(),
        nodes,
        root,
        widths,
    })
}

impl Diagram {
    pub fn kind(&self) -> DiagramKind {
        self.kind
    }

    pub fn order(&self) -> &VariableOrder {
        &self.order
    }

    pub fn n(&self) -> usize {
        self.order.n()
    }

    pub fn root(&self) -> NodeRef {
        self.root
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, r: NodeRef) -> Option<&Node> {
        r.checked_sub(2).and_then(|i| self.nodes.get(i as usize))
    }

    /// Bottom-up widths, `widths()[l - 1]` for level `l`.
    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn nonterminals(&self) -> usize {
        self.nodes.len()
    }

    /// Nonterminals plus the terminals reachable from the root.
    pub fn total_size(&self) -> usize {
        self.nonterminals() + self.reachable_terminals().len()
    }

    pub fn reachable_terminals(&self) -> Vec<NodeRef> {
        let mut seen = [false; 2];
        if self.root < 2 {
            seen[self.root as usize] = true;
        }
        for node in &self.nodes {
            for child in [node.lo, node.hi] {
                if child < 2 {
                    seen[child as usize] = true;
                }
            }
        }
        (0..2).filter(|&t| seen[t as usize]).collect()
    }

    /// Width at the level holding variable `var`.
    pub fn level_width(&self, var: Var) -> Result<usize> {
        let level = self.order.level_of(var).ok_or(Error::VariableOutOfRange {
            index: var + 1,
            n: self.n(),
        })?;
        Ok(self.widths[level - 1])
    }

    fn level_of_ref(&self, r: NodeRef) -> usize {
        self.node(r).map_or(0, |n| n.level as usize)
    }

    pub fn evaluate(&self, point: &[bool]) -> Result<bool> {
        if point.len() != self.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                actual: point.len(),
            });
        }
        let mut r = self.root;
        match self.kind {
            DiagramKind::Obdd => {
                while let Some(node) = self.node(r) {
                    let var = self.order.var_at(node.level as usize);
                    r = if point[var] { node.hi } else { node.lo };
                }
                Ok(r == TRUE)
            }
            DiagramKind::Zdd => {
                // Any level jumped over by an edge forces its variable to 0.
                let mut pending = self.n();
                loop {
                    let level = self.level_of_ref(r);
                    for skipped in level + 1..=pending {
                        if point[self.order.var_at(skipped)] {
                            return Ok(false);
                        }
                    }
                    let Some(node) = self.node(r) else {
                        return Ok(r == TRUE);
                    };
                    pending = level - 1;
                    r = if point[self.order.var_at(level)] {
                        node.hi
                    } else {
                        node.lo
                    };
                }
            }
        }
    }

    /// Scan for violations of the reduction rules and of the level
    /// structure. Returns a description of the first violation found.
    pub fn check_reduced(&self) -> std::result::Result<(), String> {
        let mut seen: HashMap<(u32, NodeRef, NodeRef), NodeRef> = HashMap::new();
        for (i, node) in self.nodes.iter().enumerate() {
            let r = i as NodeRef + 2;
            for child in [node.lo, node.hi] {
                if child >= 2 && self.level_of_ref(child) >= node.level as usize {
                    return Err(format!("edge {r} -> {child} does not descend"));
                }
                if child >= 2 && self.node(child).is_none() {
                    return Err(format!("dangling reference {child}"));
                }
            }
            if self.kind.collapse(node.lo, node.hi).is_some() {
                return Err(format!("node {r} is redundant under the {} rule", self.kind));
            }
            if let Some(other) = seen.insert((node.level, node.lo, node.hi), r) {
                return Err(format!("nodes {other} and {r} are duplicates"));
            }
        }
        let mut counts = vec![0usize; self.n()];
        for node in &self.nodes {
            counts[node.level as usize - 1] += 1;
        }
        if counts != self.widths {
            return Err("widths disagree with node levels".into());
        }
        Ok(())
    }

    pub fn summary(&self) -> DiagramSummary {
        DiagramSummary {
            kind: self.kind,
            order_read_first_to_last: self.order.read_order().iter().map(|v| v + 1).collect(),
            widths_root_to_bottom: self.widths.iter().rev().copied().collect(),
            nonterminals: self.nonterminals(),
            total: self.total_size(),
        }
    }

    /// Graphviz rendering: solid arcs are 1-edges, dotted arcs 0-edges.
    pub fn to_dot(&self) -> String {
        fn name(r: NodeRef) -> String {
            match r {
                FALSE => "F".into(),
                TRUE => "T".into(),
                r => format!("n{r}"),
            }
        }
        let mut out = String::new();
        let _ = writeln!(out, "digraph {} {{", self.kind);
        let _ = writeln!(out, "  // read order {}", self.order);
        let _ = writeln!(out, "  node [shape=circle];");
        let _ = writeln!(out, "  F [shape=box, label=\"F\"];");
        let _ = writeln!(out, "  T [shape=box, label=\"T\"];");
        for (i, node) in self.nodes.iter().enumerate() {
            let var = self.order.var_at(node.level as usize);
            let _ = writeln!(out, "  n{} [label=\"x{}\"];", i + 2, var + 1);
        }
        for (i, node) in self.nodes.iter().enumerate() {
            let r = i as NodeRef + 2;
            let _ = writeln!(out, "  n{r} -> {} [style=dotted];", name(node.lo));
            let _ = writeln!(out, "  n{r} -> {} [style=solid];", name(node.hi));
        }
        out.push_str("}\n");
        out
    }
}
