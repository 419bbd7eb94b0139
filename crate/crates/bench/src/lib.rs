//! Fixtures shared by the criterion benches.

use adamplus_core::harness::ExperimentConfig;
use adamplus_core::problems::{
    make_mlp, make_noisy_quadratic, Activation, Dataset, Mlp, NoisyQuadratic,
};

pub fn quadratic(dim: usize) -> NoisyQuadratic {
    make_noisy_quadratic(dim, 1.0, 1.0).expect("valid quadratic")
}

/// A 20-10-3 tanh network on 256 blob samples.
pub fn small_mlp() -> Mlp {
    let data = Dataset::synthetic_blobs(256, 20, 3, 1.0, 7).expect("valid blobs");
    make_mlp(&[20, 10, 3], data, Activation::Tanh).expect("valid mlp")
}

pub fn sweep_config(seeds: u64, iterations: usize) -> ExperimentConfig {
    let json = format!(
        r#"{{
            "problem": {{"kind": "quadratic", "dim": 10, "sigma": 1.0}},
            "iterations": {iterations},
            "batch_size": 1,
            "seeds": {:?}
        }}"#,
        (0..seeds).collect::<Vec<_>>()
    );
    ExperimentConfig::from_json_str(&json).expect("valid config")
}
