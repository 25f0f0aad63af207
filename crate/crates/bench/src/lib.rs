//! Shared fixtures for the benchmarks.

use std::collections::BTreeMap;

use signbal_core::graphon::{builtin_spec, sample_network};
use signbal_core::{GraphonSpec, SignedAdjacency};

/// Logistic balance graphon with `alpha = 100`.
pub fn spec() -> GraphonSpec {
    let params = BTreeMap::from([("alpha".to_string(), 100.0)]);
    builtin_spec("logistic-balance", &params).expect("valid built-in")
}

pub fn network(n: usize, seed: u64) -> SignedAdjacency {
    sample_network(&spec(), n, seed).expect("sampling succeeds")
}
