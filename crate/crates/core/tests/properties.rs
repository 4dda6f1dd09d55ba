use std::collections::HashMap;

use optobdd::diagram::level_widths;
use optobdd::dnc::{best_split_cost, presets};
use optobdd::fs_engine::fs_star_truncated;
use optobdd::oracle::brute_force_min;
use optobdd::subset;
use optobdd::*;
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum E {
    C(bool),
    V(usize),
    Not(Box<E>),
    And(Box<E>, Box<E>),
    Xor(Box<E>, Box<E>),
    Or(Box<E>, Box<E>),
}

impl E {
    fn eval(&self, x: usize) -> bool {
        match self {
            E::C(b) => *b,
            E::V(v) => x >> v & 1 == 1,
            E::Not(e) => !e.eval(x),
            E::And(a, b) => a.eval(x) && b.eval(x),
            E::Xor(a, b) => a.eval(x) != b.eval(x),
            E::Or(a, b) => a.eval(x) || b.eval(x),
        }
    }

    /// Fully parenthesized, with random spacing decided by `spaced`.
    fn render(&self, spaced: bool) -> String {
        let sp = if spaced { " " } else { "" };
        match self {
            E::C(b) => u8::from(*b).to_string(),
            E::V(v) => format!("x{}", v + 1),
            E::Not(e) => format!("~{}", e.render(spaced)),
            E::And(a, b) => format!("({}{sp}&{sp}{})", a.render(spaced), b.render(spaced)),
            E::Xor(a, b) => format!("({}{sp}^{sp}{})", a.render(spaced), b.render(spaced)),
            E::Or(a, b) => format!("({}{sp}|{sp}{})", a.render(spaced), b.render(spaced)),
        }
    }
}

fn expr(n: usize) -> impl Strategy<Value = E> {
    let leaf = prop_oneof![any::<bool>().prop_map(E::C), (0..n).prop_map(E::V)];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| E::Not(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| E::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| E::Xor(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| E::Or(Box::new(a), Box::new(b))),
        ]
    })
}

fn function(max_n: usize) -> impl Strategy<Value = TruthTable> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| TruthTable::random(n, seed).unwrap())
}

fn kind() -> impl Strategy<Value = DiagramKind> {
    prop_oneof![Just(DiagramKind::Obdd), Just(DiagramKind::Zdd)]
}

fn order(n: usize) -> impl Strategy<Value = VariableOrder> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| VariableOrder::from_levels(v).unwrap())
}

/// Top-down Shannon expansion with a per-level unique table: an
/// independent construction of the reduced diagram's level widths.
fn shannon_widths(tt: &TruthTable, order: &VariableOrder, kind: DiagramKind) -> Vec<usize> {
    let n = tt.n();
    let read = order.read_order();
    let mut unique: Vec<HashMap<(usize, usize), usize>> = vec![HashMap::new(); n];
    let mut next = 2;

    fn go(
        tt: &TruthTable,
        read: &[usize],
        depth: usize,
        fixed: usize,
        kind: DiagramKind,
        unique: &mut [HashMap<(usize, usize), usize>],
        next: &mut usize,
    ) -> usize {
        if depth == read.len() {
            return usize::from(tt.get(fixed));
        }
        let v = read[depth];
        let lo = go(tt, read, depth + 1, fixed, kind, unique, next);
        let hi = go(tt, read, depth + 1, fixed | 1 << v, kind, unique, next);
        let redundant = match kind {
            DiagramKind::Obdd => lo == hi,
            DiagramKind::Zdd => hi == 0,
        };
        if redundant {
            return lo;
        }
        *unique[depth].entry((lo, hi)).or_insert_with(|| {
            *next += 1;
            *next - 1
        })
    }

    go(tt, &read, 0, 0, kind, &mut unique, &mut next);
    // bottom level first
    unique.iter().rev().map(|m| m.len()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn parser_agrees_with_recursive_evaluation(n in 1usize..=6, e in expr(6), spaced in any::<bool>()) {
        let e = clamp(e, n);
        let tt = parse_expression(&e.render(spaced), n).unwrap();
        for x in 0..1usize << n {
            prop_assert_eq!(tt.get(x), e.eval(x));
        }
    }
}

fn clamp(e: E, n: usize) -> E {
    match e {
        E::V(v) => E::V(v % n),
        E::C(b) => E::C(b),
        E::Not(a) => E::Not(Box::new(clamp(*a, n))),
        E::And(a, b) => E::And(Box::new(clamp(*a, n)), Box::new(clamp(*b, n))),
        E::Xor(a, b) => E::Xor(Box::new(clamp(*a, n)), Box::new(clamp(*b, n))),
        E::Or(a, b) => E::Or(Box::new(clamp(*a, n)), Box::new(clamp(*b, n))),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_format_round_trips(tt in function(10)) {
        let text = tt.to_text();
        prop_assert_eq!(TruthTable::from_text(&text).unwrap(), tt);
    }

    #[test]
    fn diagram_evaluates_to_its_function(
        (tt, order) in function(7).prop_flat_map(|tt| { let n = tt.n(); (Just(tt), order(n)) }),
        kind in kind(),
    ) {
        let d = build_diagram(&tt, &order, kind).unwrap();
        prop_assert!(d.check_reduced().is_ok());
        for x in 0..tt.len() {
            let point: Vec<bool> = (0..tt.n()).map(|v| x >> v & 1 == 1).collect();
            prop_assert_eq!(d.evaluate(&point).unwrap(), tt.get(x));
        }
    }

    #[test]
    fn diagram_matches_shannon_expansion(
        (tt, order) in function(9).prop_flat_map(|tt| { let n = tt.n(); (Just(tt), order(n)) }),
        kind in kind(),
    ) {
        let want = shannon_widths(&tt, &order, kind);
        let d = build_diagram(&tt, &order, kind).unwrap();
        prop_assert_eq!(d.widths(), &want[..]);
        prop_assert_eq!(level_widths(&tt, &order, kind).unwrap(), want);
    }

    #[test]
    fn sweep_equals_brute_force(tt in function(6), kind in kind()) {
        let m = min_obdd_fs(&tt, kind);
        let (best, _) = brute_force_min(&tt, kind).unwrap();
        prop_assert_eq!(m.min_cost as usize, best.nonterminals);
        let d = build_diagram(&tt, &m.order, kind).unwrap();
        prop_assert_eq!(d.nonterminals(), m.min_cost as usize);
        prop_assert_eq!(d.widths().iter().map(|&w| w as u32).collect::<Vec<_>>(), m.per_level_costs);
    }

    #[test]
    fn sweep_step_is_best_single_fold(seed in any::<u64>(), n in 2usize..=7, kind in kind()) {
        let tt = TruthTable::random(n, seed).unwrap();
        let init = initial_state(&tt, kind);
        let full = subset::full(n);
        for rank in 2..=n {
            let upper = fs_star_truncated(&init, full, rank).unwrap();
            let lower = fs_star_truncated(&init, full, rank - 1).unwrap();
            for (&set, st) in &upper {
                let best = subset::members(set)
                    .map(|k| fold(&lower[&(set & !subset::singleton(k))], k).unwrap().min_cost())
                    .min()
                    .unwrap();
                prop_assert_eq!(st.min_cost(), best);
            }
        }
    }

    #[test]
    fn split_identity_with_prefix(seed in any::<u64>(), n in 3usize..=8, pmask in any::<u32>(), kind in kind()) {
        let tt = TruthTable::random(n, seed).unwrap();
        let full = subset::full(n);
        let p = pmask & full & !1;
        let init = initial_state(&tt, kind);
        let (state, j) = if p == 0 || p == full { (init, full) } else { (fs_star(&init, p).unwrap(), full & !p) };
        let want = fs_star(&state, j).unwrap().min_cost();
        for k in 1..subset::len(j) {
            prop_assert_eq!(best_split_cost(&state, j, k).unwrap(), want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn dnc_is_exact(seed in any::<u64>(), n in 7usize..=10, row in 1usize..=6, kind in kind(), qsim in any::<bool>()) {
        let tt = TruthTable::random(n, seed).unwrap();
        let mode = if qsim { SearchMode::SimulatedQuantum } else { SearchMode::Classical };
        let cfg = DncConfig::single(presets::table1(row).unwrap(), kind, mode);
        match opt_obdd(&tt, &cfg) {
            Ok((st, stats)) => {
                prop_assert_eq!(st.min_cost(), min_obdd_fs(&tt, kind).min_cost);
                prop_assert_eq!(stats.find_min.iter().all(|r| r.quantum_query_bound.is_some()), qsim);
            }
            Err(Error::SplitCollapse { .. }) => prop_assert!(n <= row),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn memoization_never_changes_results(seed in any::<u64>(), n in 7usize..=9, levels in 1usize..=3) {
        let tt = TruthTable::random(n, seed).unwrap();
        let mut cfg = DncConfig::chain(presets::table2_chain(levels).unwrap(), DiagramKind::Obdd, SearchMode::Classical);
        let a = opt_obdd_composed(&tt, &cfg).unwrap();
        cfg.memoize = false;
        let b = opt_obdd_composed(&tt, &cfg).unwrap();
        prop_assert_eq!(&a.0, &b.0);
        prop_assert_eq!(a.1.unmemoized_classical_evals, b.1.total_classical_evals);
    }

    #[test]
    fn find_min_is_first_argmin(keys in proptest::collection::vec(-50i64..50, 1..300), qsim in any::<bool>()) {
        let mode = if qsim { SearchMode::SimulatedQuantum } else { SearchMode::Classical };
        let (i, k, stats) = find_min(keys.len() as u64, |i| keys[i as usize], mode, 0.01).unwrap();
        let m = *keys.iter().min().unwrap();
        prop_assert_eq!(k, m);
        prop_assert_eq!(i as usize, keys.iter().position(|&x| x == m).unwrap());
        prop_assert_eq!(stats.classical_evals, keys.len() as u64);
    }

    #[test]
    fn subset_rank_round_trips(set in 1u32..(1 << 12), pick in any::<prop::sample::Index>()) {
        let m = subset::len(set);
        let k = 1 + pick.index(m);
        let all = subset::k_subsets(set, k);
        prop_assert_eq!(all.len() as u64, subset::binomial(m as u64, k as u64));
        for (r, &s) in all.iter().enumerate() {
            prop_assert_eq!(subset::unrank_subset(set, k, r as u64), s);
            prop_assert_eq!(s & !set, 0);
            prop_assert_eq!(subset::len(s), k);
        }
    }
}

#[test]
fn level_width_depends_only_on_the_set_below() {
    // Same set below x_i at the same level: width of x_i must agree across
    // every order of the variables beneath and above it.
    for seed in 0..5 {
        let tt = TruthTable::random(5, seed).unwrap();
        let mut seen: HashMap<(u32, usize), usize> = HashMap::new();
        for rank in 0..120u64 {
            let mut pool: Vec<usize> = (0..5).collect();
            let mut pi = Vec::new();
            let mut r = rank;
            for i in (0..5).rev() {
                let f: u64 = (1..=i as u64).product();
                pi.push(pool.remove((r / f) as usize));
                r %= f;
            }
            let order = VariableOrder::from_levels(pi.clone()).unwrap();
            let widths = level_widths(&tt, &order, DiagramKind::Obdd).unwrap();
            for (l, &v) in pi.iter().enumerate() {
                let below = subset::from_vars(pi[..l].iter().copied());
                let w = *seen.entry((below, v)).or_insert(widths[l]);
                assert_eq!(w, widths[l]);
            }
        }
    }
}
