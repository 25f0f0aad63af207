mod common;

use std::collections::BTreeMap;
use std::io::Cursor;

use proptest::prelude::*;
use rand::{RngCore, SeedableRng};
use signbal_core::bootstrap::{
    bootstrap_distribution, interval_from_draws, resample_network, EmpiricalGraphon,
};
use signbal_core::graph::{read_edge_list, to_edge_list_string, ParseOptions};
use signbal_core::graphon::{
    balanced_probability, builtin_spec, sample_network, type_probabilities,
};
use signbal_core::{triangle_profile, GraphonSpec, StreamRng, Target};
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete, DiscreteCDF};

use common::random_graph;

fn density(adj: &signbal_core::SignedAdjacency) -> f64 {
    let n = adj.n() as f64;
    adj.edge_count() as f64 / (n * (n - 1.0) / 2.0)
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    (m, var.sqrt())
}

#[test]
fn rng_golden_vector() {
    let golden = include_str!("data/rng_seed0.txt");
    let mut rng = StreamRng::new(0);
    let draws: Vec<String> = (0..16)
        .map(|_| format!("{:016x}", rng.next_u64()))
        .collect();
    let expected: Vec<&str> = golden.lines().collect();
    assert_eq!(draws, expected);

    // key rebuilt from the published SplitMix64 recurrence
    let mut key = [0u8; 32];
    let mut state = 0u64;
    for chunk in key.chunks_exact_mut(8) {
        state = state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        chunk.copy_from_slice(&(z ^ (z >> 31)).to_le_bytes());
    }
    let mut chacha = rand_chacha::ChaCha8Rng::from_seed(key);
    let direct: Vec<String> = (0..16)
        .map(|_| format!("{:016x}", chacha.next_u64()))
        .collect();
    assert_eq!(direct, expected);
}

#[test]
fn edge_proportion_matches_constant_density() {
    let spec = builtin_spec("const-cos", &BTreeMap::new()).unwrap();
    let props: Vec<f64> = (0..200)
        .map(|r| density(&sample_network(&spec, 160, 1000 + r).unwrap()))
        .collect();
    let (m, sd) = mean_sd(&props);
    let se = sd / (props.len() as f64).sqrt();
    assert!((m - 0.8).abs() < 3.0 * se, "mean {m}, se {se}");
}

#[test]
fn edge_counts_are_binomial() {
    let (n, p, reps) = (10usize, 0.3, 5000u64);
    let spec = GraphonSpec::constant(p, 0.5).unwrap();
    let pairs = (n * (n - 1) / 2) as u64;
    let mut observed = vec![0u64; pairs as usize + 1];
    for r in 0..reps {
        observed[sample_network(&spec, n, r).unwrap().edge_count()] += 1;
    }
    let law = Binomial::new(p, pairs).unwrap();
    // pool adjacent counts until each bin expects at least 5
    let (mut stat, mut bins) = (0.0, 0usize);
    let (mut obs, mut exp) = (0.0, 0.0);
    for k in 0..=pairs {
        obs += observed[k as usize] as f64;
        exp += law.pmf(k) * reps as f64;
        if exp >= 5.0 && law.sf(k) * reps as f64 >= 5.0 {
            stat += (obs - exp).powi(2) / exp;
            bins += 1;
            obs = 0.0;
            exp = 0.0;
        }
    }
    stat += (obs - exp).powi(2) / exp;
    bins += 1;
    let p_value = ChiSquared::new((bins - 1) as f64).unwrap().sf(stat);
    assert!(
        p_value > 1e-3,
        "chi-square {stat} on {bins} bins, p = {p_value}"
    );
}

#[test]
fn sign_configuration_law() {
    // direct simulation of three independent signs against the closed forms
    let s = [0.15, 0.4, 0.72];
    let mut rng = StreamRng::new(99);
    let mut counts = [0u64; 4];
    let draws = 1_000_000;
    for _ in 0..draws {
        let negatives = s.iter().filter(|&&p| rng.uniform() < p).count();
        counts[negatives] += 1;
    }
    let probs = type_probabilities(s);
    for t in 0..4 {
        let freq = counts[t] as f64 / draws as f64;
        let se = (probs[t] * (1.0 - probs[t]) / draws as f64).sqrt();
        assert!(
            (freq - probs[t]).abs() < 5.0 * se,
            "type {t}: {freq} vs {}",
            probs[t]
        );
    }
    let balanced = (counts[0] + counts[2]) as f64 / draws as f64;
    assert!((balanced - balanced_probability(s)).abs() < 5e-3);
    assert!((probs[0] + probs[2] - balanced_probability(s)).abs() < 1e-15);
}

#[test]
fn resampled_edge_proportion() {
    let adj = random_graph(40, 0.5, 0.3, 8);
    let original = density(&adj);
    let egraphon = EmpiricalGraphon::new(&adj);
    let props: Vec<f64> = (0..10_000)
        .map(|r| density(&resample_network(&egraphon, r)))
        .collect();
    let (m, sd) = mean_sd(&props);
    let expected = (1.0 - 1.0 / 40.0) * original;
    let se = sd / (props.len() as f64).sqrt();
    assert!(
        (m - expected).abs() < 4.0 * se,
        "mean {m} vs {expected} (se {se})"
    );
}

#[test]
fn bootstrap_is_deterministic() {
    let adj = random_graph(30, 0.7, 0.3, 21);
    let a = bootstrap_distribution(&adj, Target::Balanced, 200, 4).unwrap();
    let b = bootstrap_distribution(&adj, Target::Balanced, 200, 4).unwrap();
    let c = bootstrap_distribution(&adj, Target::Balanced, 200, 5).unwrap();
    assert_eq!(a.draws, b.draws);
    assert_ne!(a.draws, c.draws);
}

#[test]
fn bootstrap_endpoint_spread_shrinks_with_replicates() {
    let adj = random_graph(30, 0.7, 0.3, 22);
    let spread = |b: usize| {
        let uppers: Vec<f64> = (0..8)
            .map(|seed| {
                let d = bootstrap_distribution(&adj, Target::Balanced, b, 1000 + seed).unwrap();
                interval_from_draws(&d, 0.95).1
            })
            .collect();
        mean_sd(&uppers).1
    };
    let sds = [spread(100), spread(1_000), spread(10_000)];
    assert!(sds[0] > sds[1] && sds[1] > sds[2], "{sds:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn edge_list_round_trip(n in 1usize..30, d in 0.0..=1.0f64, s in 0.0..=1.0f64, seed in any::<u64>()) {
        let adj = random_graph(n, d, s, seed);
        let text = to_edge_list_string(&adj);
        let back = read_edge_list(Cursor::new(text.as_bytes()), &ParseOptions::default()).unwrap();
        prop_assert_eq!(back.n(), adj.n());
        prop_assert_eq!(back.edge_count(), adj.edge_count());
        prop_assert_eq!(triangle_profile(&back).census, triangle_profile(&adj).census);
        prop_assert_eq!(to_edge_list_string(&back), text);
    }

    #[test]
    fn uniform_stream_in_range(seed in any::<u64>(), r in any::<u64>()) {
        let mut rng = StreamRng::stream(seed, r);
        for _ in 0..64 {
            let u = rng.uniform();
            prop_assert!((0.0..1.0).contains(&u));
        }
    }
}
