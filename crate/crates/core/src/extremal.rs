//! Closed-form maxima for k-path counts and graphs attaining them.
//!
//! With `N = n·k + r`, `0 <= r < k`, an acyclic graph with `N` edges has at
//! most `P(N, k) = (n+1)^r · n^(k-r)` paths of length `k`; allowing loops of
//! length at least `k` multiplies the maximum by `k`. Over rational labels of
//! total weight `N` the supremum is `k · (N/k)^k`.

use num_bigint::BigUint;
use num_traits::Pow;
use thiserror::Error;

use crate::graph::{Edge, Graph};
use crate::semiring::{Label, Mode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("N = {0} violates N >= 2")]
    WeightTooSmall(u64),
    #[error("k = 0 violates k >= 1")]
    ZeroLength,
    #[error("k = {k} exceeds N = {n}")]
    LengthExceedsWeight { n: u64, k: u64 },
    #[error("the weight must be positive")]
    ZeroWeight,
}

/// Validated `(N, k)` together with the decomposition `N = n·k + r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundParams {
    pub weight: u64,
    pub k: u64,
    pub quotient: u64,
    pub remainder: u64,
}

impl BoundParams {
    /// Requires `N >= 2` and `1 <= k <= N`.
    pub fn new(weight: u64, k: u64) -> Result<Self, BoundError> {
        if weight < 2 {
            return Err(BoundError::WeightTooSmall(weight));
        }
        if k == 0 {
            return Err(BoundError::ZeroLength);
        }
        if k > weight {
            return Err(BoundError::LengthExceedsWeight { n: weight, k });
        }
        Ok(BoundParams {
            weight,
            k,
            quotient: weight / k,
            remainder: weight % k,
        })
    }

    /// The balanced split of the weight into `k` parts: `r` copies of `n+1`
    /// followed by `k - r` copies of `n`.
    pub fn balanced_parts(&self) -> Vec<u64> {
        (0..self.k)
            .map(|i| self.quotient + u64::from(i < self.remainder))
            .collect()
    }
}

/// `(n+1)^r · n^(k-r)`, the most `k`-paths an acyclic graph with `N` edges has.
pub fn acyclic_bound(weight: u64, k: u64) -> Result<BigUint, BoundError> {
    let p = BoundParams::new(weight, k)?;
    let heavy = Pow::pow(BigUint::from(p.quotient + 1), p.remainder as u32);
    let light = Pow::pow(BigUint::from(p.quotient), (p.k - p.remainder) as u32);
    Ok(heavy * light)
}

/// `k · P(N, k)`, the most `k`-paths without loops shorter than `k`.
pub fn loop_bound(weight: u64, k: u64) -> Result<BigUint, BoundError> {
    Ok(acyclic_bound(weight, k)? * BigUint::from(k))
}

/// `k · (N/k)^k`, the supremum of the `k`-content over rational labels.
pub fn semiring_bound(weight: &Label, k: u64) -> Result<Label, BoundError> {
    if weight.is_zero() {
        return Err(BoundError::ZeroWeight);
    }
    if k == 0 {
        return Err(BoundError::ZeroLength);
    }
    Ok(weight.div_int(k).pow(k as u32) * Label::from(k))
}

/// Open path `0 -> 1 -> ... -> k` with balanced labels, heavier ones first.
pub fn construct_extremal_acyclic(weight: u64, k: u64) -> Result<Graph, BoundError> {
    let p = BoundParams::new(weight, k)?;
    let edges = p
        .balanced_parts()
        .into_iter()
        .enumerate()
        .map(|(i, label)| Edge::new(i, i + 1, label))
        .collect();
    Ok(Graph::from_edges(Mode::Nat, edges).expect("open path is a valid graph"))
}

/// Directed `k`-cycle on vertices `0..k` with balanced labels, heavier first.
pub fn construct_extremal_loop(weight: u64, k: u64) -> Result<Graph, BoundError> {
    let p = BoundParams::new(weight, k)?;
    Ok(cycle(
        Mode::Nat,
        p.balanced_parts().into_iter().map(Label::from).collect(),
    ))
}

/// Directed `k`-cycle whose labels all equal `N / k`.
pub fn construct_extremal_rational(weight: &Label, k: u64) -> Result<Graph, BoundError> {
    if weight.is_zero() {
        return Err(BoundError::ZeroWeight);
    }
    if k == 0 {
        return Err(BoundError::ZeroLength);
    }
    let label = weight.div_int(k);
    Ok(cycle(Mode::Rat, vec![label; k as usize]))
}

fn cycle(mode: Mode, labels: Vec<Label>) -> Graph {
    let k = labels.len();
    let edges = labels
        .into_iter()
        .enumerate()
        .map(|(i, label)| Edge::new(i, (i + 1) % k, label))
        .collect();
    Graph::from_edges(mode, edges).expect("cycle is a valid graph")
}

/// Whether `semiring_bound(N, k) >= loop_bound(N, k)`, with equality exactly
/// when `k` divides `N`.
pub fn rational_relaxation_dominates(weight: u64, k: u64) -> Result<bool, BoundError> {
    let nat = Label::from(loop_bound(weight, k)?);
    let rat = semiring_bound(&Label::from(weight), k)?;
    Ok(rat > nat || (rat == nat && weight.is_multiple_of(k)))
}
