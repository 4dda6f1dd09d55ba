//! Exponent arithmetic for the divide-and-conquer schedule.
//!
//! All logarithms are base 2. With `H` the binary entropy,
//!
//! ```text
//! g_γ(x, y) = (1 - y) + (y - x) log γ
//! f_γ(x, y) = y H(x / y) / 2 + g_γ(x, y)
//! ```
//!
//! and a schedule `0 < α_1 < ... < α_k < α_{k+1} = 1` costs `2^(e n)` up to
//! polynomial factors, where `e` is [`recurrence_exponent`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BRACKET: (f64, f64) = (1e-6, 1.0 / 3.0 - 1e-6);
const MAX_ITER: usize = 200;

pub fn binary_entropy(delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Domain(format!("entropy argument {delta} outside [0, 1]")));
    }
    Ok(entropy(delta))
}

fn entropy(d: f64) -> f64 {
    if d <= 0.0 || d >= 1.0 {
        return 0.0;
    }
    -d * d.log2() - (1.0 - d) * (1.0 - d).log2()
}

pub fn g_gamma(x: f64, y: f64, gamma: f64) -> f64 {
    (1.0 - y) + (y - x) * gamma.log2()
}

pub fn f_gamma(x: f64, y: f64, gamma: f64) -> f64 {
    0.5 * y * entropy(x / y) + g_gamma(x, y, gamma)
}

/// Exponent of the precomputation `sum_{l <= α_1 n} 2^(n-l) C(n, l)`.
pub fn preprocess_exponent(alpha1: f64) -> f64 {
    let a = alpha1.min(1.0 / 3.0);
    (1.0 - a) + entropy(a)
}

fn check_alphas(alphas: &[f64]) -> Result<()> {
    if alphas.is_empty() {
        return Err(Error::Config("empty alpha vector".into()));
    }
    let ok = alphas.iter().all(|a| *a > 0.0 && *a < 1.0) && alphas.windows(2).all(|w| w[0] < w[1]);
    if !ok {
        return Err(Error::Config(format!(
            "alphas {alphas:?} must be strictly increasing inside (0, 1)"
        )));
    }
    Ok(())
}

/// Time exponent of a schedule run on top of a `γ^n` subroutine.
///
/// With `preprocess = false` the first stage runs the subroutine on every
/// `α_1 n`-subset instead of reading a precomputed table.
pub fn recurrence_exponent(alphas: &[f64], gamma: f64, preprocess: bool) -> Result<f64> {
    check_alphas(alphas)?;
    if !(gamma > 2.0) {
        return Err(Error::Domain(format!("gamma {gamma} must exceed 2")));
    }
    let a1 = alphas[0];
    let (pre, mut l) = if preprocess {
        (preprocess_exponent(a1), 0.0)
    } else {
        (0.0, (1.0 - a1) + a1 * gamma.log2())
    };
    for (j, &x) in alphas.iter().enumerate() {
        let y = alphas.get(j + 1).copied().unwrap_or(1.0);
        l = 0.5 * y * entropy(x / y) + l.max(g_gamma(x, y, gamma));
    }
    Ok(pre.max(l))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSolution {
    pub k: usize,
    pub gamma_in: f64,
    pub alphas: Vec<f64>,
    pub beta_out: f64,
    /// Absolute residual of the closing equation followed by the `k - 1`
    /// balancing equations.
    pub residuals: Vec<f64>,
}

#[derive(Debug)]
enum Miss {
    /// The target exceeds `f` everywhere on the branch.
    Low,
    /// The target is below `f(y, y)`.
    High,
}

/// Solve `f_γ(x, y) = target` on the branch where `f` decreases in `x`.
fn solve_f(y: f64, target: f64, gamma: f64) -> std::result::Result<f64, Miss> {
    let mut lo = y / (1.0 + gamma * gamma);
    let mut hi = y;
    if f_gamma(lo, y, gamma) < target {
        return Err(Miss::Low);
    }
    if f_gamma(hi, y, gamma) > target {
        return Err(Miss::High);
    }
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f_gamma(mid, y, gamma) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Walk the equations down from `α_{k+1} = 1` for a trial `α_1`. Returns the
/// implied `α_1` and the full vector, or a signed miss.
fn chain(alpha1: f64, k: usize, gamma: f64) -> std::result::Result<Vec<f64>, Miss> {
    let target = preprocess_exponent(alpha1);
    let mut alphas = vec![0.0; k];
    alphas[k - 1] = solve_f(1.0, target, gamma)?;
    for j in (1..k).rev() {
        let y = alphas[j];
        let z = alphas.get(j + 1).copied().unwrap_or(1.0);
        alphas[j - 1] = solve_f(y, g_gamma(y, z, gamma), gamma)?;
    }
    Ok(alphas)
}

fn signed_gap(alpha1: f64, k: usize, gamma: f64) -> f64 {
    match chain(alpha1, k, gamma) {
        Ok(a) => a[0] - alpha1,
        Err(Miss::Low) => -1.0,
        Err(Miss::High) => 1.0,
    }
}

/// Balance the schedule: the precomputation, every stage and the closing
/// stage all get the same exponent.
pub fn solve_system(k: usize, gamma: f64) -> Result<ParamSolution> {
    if k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    if !(gamma > 2.0) {
        return Err(Error::Domain(format!("gamma {gamma} must exceed 2")));
    }
    let (mut lo, mut hi) = BRACKET;
    if !(signed_gap(lo, k, gamma) > 0.0 && signed_gap(hi, k, gamma) < 0.0) {
        return Err(Error::Solver(format!(
            "no root bracketed in [{lo}, {hi}] for k = {k}, gamma = {gamma}"
        )));
    }
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if signed_gap(mid, k, gamma) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha1 = 0.5 * (lo + hi);
    let mut alphas =
        chain(alpha1, k, gamma).map_err(|m| Error::Solver(format!("chain failed at the root: {m:?}")))?;
    alphas[0] = alpha1;
    check_alphas(&alphas).map_err(|e| Error::Solver(e.to_string()))?;
    if alpha1 >= 1.0 / 3.0 {
        return Err(Error::Solver(format!("alpha_1 = {alpha1} not below 1/3")));
    }

    let mut residuals = vec![(preprocess_exponent(alpha1) - f_gamma(alphas[k - 1], 1.0, gamma)).abs()];
    for j in 1..k {
        let z = alphas.get(j + 1).copied().unwrap_or(1.0);
        residuals.push((f_gamma(alphas[j - 1], alphas[j], gamma) - g_gamma(alphas[j], z, gamma)).abs());
    }
    if let Some(r) = residuals.iter().find(|r| !(**r < 1e-9)) {
        return Err(Error::Solver(format!("residual {r:e} did not converge")));
    }
    let beta_out = 2f64.powf(recurrence_exponent(&alphas, gamma, true)?);
    Ok(ParamSolution {
        k,
        gamma_in: gamma,
        alphas,
        beta_out,
        residuals,
    })
}

/// Feed each solution's base into the next level as its subroutine base.
pub fn composition_chain(k: usize, gamma0: f64, iterations: usize) -> Result<Vec<ParamSolution>> {
    if iterations == 0 {
        return Err(Error::Config("at least one iteration required".into()));
    }
    let mut rows = Vec::with_capacity(iterations);
    let mut gamma = gamma0;
    for _ in 0..iterations {
        let row = solve_system(k, gamma)?;
        gamma = row.beta_out;
        rows.push(row);
    }
    Ok(rows)
}

/// Single split without precomputation: `(log 3 - 1) / (2 log 3 - 1)`.
pub fn alpha_star_no_preprocess() -> f64 {
    let l3 = 3f64.log2();
    (l3 - 1.0) / (2.0 * l3 - 1.0)
}

/// Single split with precomputation: the root of
/// `(1 - a) + H(a) = H(a) / 2 + (1 - a) log 3`.
pub fn alpha_star_preprocess() -> f64 {
    let l3 = 3f64.log2();
    let h = |a: f64| (1.0 - a) + 0.5 * entropy(a) - (1.0 - a) * l3;
    let (mut lo, mut hi) = BRACKET;
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
