//! Minimum finding over `[0, N)`.
//!
//! Both modes scan the whole domain and return the same exact answer. The
//! simulated-quantum mode additionally reports the nominal query count of
//! Dürr–Høyer minimum finding with error `epsilon`, namely
//! `ceil(sqrt(N * log2(1/epsilon)))`. The bound is constant-free and uses a
//! base-2 logarithm; no amplitude dynamics are simulated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    #[default]
    Classical,
    SimulatedQuantum,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(SearchMode::Classical),
            "qsim" | "quantum" | "simulated_quantum" => Ok(SearchMode::SimulatedQuantum),
            other => Err(Error::Config(format!("unknown search mode `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryStats {
    pub domain_size: u64,
    pub classical_evals: u64,
    /// Nominal, constant-free; only reported in simulated-quantum mode.
    pub quantum_query_bound: Option<u64>,
    pub epsilon: f64,
}

/// `ceil(sqrt(N * log2(1/epsilon)))`, at least 1.
pub fn quantum_query_bound(domain_size: u64, epsilon: f64) -> u64 {
    let log_inv = -epsilon.log2();
    let bound = (domain_size as f64 * log_inv).sqrt().ceil() as u64;
    bound.max(1)
}

#[derive(Clone, Debug)]
pub struct Found<K, T> {
    pub index: u64,
    pub key: K,
    pub value: T,
    pub stats: QueryStats,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("epsilon {epsilon} outside (0, 1)")))
    }
}

/// General form: the evaluator yields a key and a payload; the payload of
/// the first minimizer is kept. Evaluator errors abort the search.
pub fn find_min_by<K, T, E>(
    domain_size: u64,
    mode: SearchMode,
    epsilon: f64,
    mut eval: impl FnMut(u64) -> std::result::Result<(K, T), E>,
) -> std::result::Result<Found<K, T>, E>
where
    K: Ord,
    E: From<Error>,
{
    if domain_size == 0 {
        return Err(Error::EmptyDomain.into());
    }
    check_epsilon(epsilon)?;
    let mut best: Option<(u64, K, T)> = None;
    for i in 0..domain_size {
        let (key, value) = eval(i)?;
        if best.as_ref().is_none_or(|(_, k, _)| key < *k) {
            best = Some((i, key, value));
        }
    }
    let (index, key, value) = best.expect("domain is nonempty");
    let stats = QueryStats {
        domain_size,
        classical_evals: domain_size,
        quantum_query_bound: match mode {
            SearchMode::Classical => None,
            SearchMode::SimulatedQuantum => Some(quantum_query_bound(domain_size, epsilon)),
        },
        epsilon,
    };
    Ok(Found {
        index,
        key,
        value,
        stats,
    })
}

/// Argmin of an integer key over `[0, N)`, smallest index on ties.
pub fn find_min(
    domain_size: u64,
    key: impl Fn(u64) -> i64,
    mode: SearchMode,
    epsilon: f64,
) -> Result<(u64, i64, QueryStats)> {
    let found = find_min_by::<_, _, Error>(domain_size, mode, epsilon, |i| Ok((key(i), ())))?;
    Ok((found.index, found.key, found.stats))
}
