//! The example matrix: catalog symbols against the criteria with known outcomes.

use omdyn::classify::{
    check_abel_growth, check_hypercyclic_sufficient, check_mixing_bijective, check_mixing_grid,
    check_mixing_nonsurjective, check_necessary, check_not_transitive, DecayProtocol, HypercyclicConfig, MixingConfig,
    Verdict, VerdictKind, A_GRID,
};
use omdyn::schwartz::Weight;
use omdyn::symbols::from_label;
use serde::Serialize;

use crate::commands::kind_name;

/// `sqrt_glide` orbits escape like `√n`, so its tables need a long horizon.
pub const SLOW_ESCAPE_N_MAX: usize = 2000;

#[derive(Debug, Clone, Serialize)]
pub struct MatrixEntry {
    pub example: &'static str,
    pub criterion: &'static str,
    pub expected: VerdictKind,
    /// parameters beyond the defaults
    pub setup: &'static str,
}

pub fn entries() -> Vec<MatrixEntry> {
    use VerdictKind::*;
    let e = |example, criterion, expected, setup| MatrixEntry { example, criterion, expected, setup };
    vec![
        e("translation:1", "necessary", EvidenceHolds, ""),
        e("translation:1", "mixing_bij", EvidenceHolds, "a-grid {-2,0,2}, n_max 40"),
        e("translation:1", "hypercyclic_sufficient", EvidenceHolds, "alpha = beta = 0"),
        e("translation:1", "abel_growth", EvidenceHolds, "n_max 40"),
        e("translation:1", "not_transitive", HypothesisViolated, ""),
        e("tiled_3x", "necessary", EvidenceHolds, ""),
        e("tiled_3x", "mixing_bij", FailsWithWitness, "a-grid {-2,0,2}, n_max 40"),
        e("sqrt_glide", "mixing_bij", EvidenceHolds, "a = -2, n_max 2000"),
        e("sqrt_glide", "abel_growth", EvidenceHolds, "n_max 2000"),
        e("exp_double", "mixing_nonsurj", EvidenceHolds, "a = 1, n_max 40"),
        e("gauss_perturbed", "necessary", EvidenceHolds, ""),
        e("gauss_perturbed", "not_transitive", EvidenceHolds, ""),
    ]
}

pub fn matrix_config() -> serde_json::Value {
    serde_json::json!({
        "entries": entries(),
        "mixing": { "k_max": 3, "n_max": 40, "points": 65, "weights": weight_labels() },
        "slow_escape_n_max": SLOW_ESCAPE_N_MAX,
        "a_grid": A_GRID,
        "protocol": DecayProtocol::default(),
    })
}

fn weight_labels() -> Vec<String> {
    Weight::default_family().iter().map(|w| w.label().to_string()).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixRow {
    pub example: String,
    pub criterion: String,
    pub expected: String,
    pub observed: String,
    pub matches: bool,
}

pub struct MatrixRun {
    pub rows: Vec<MatrixRow>,
    pub verdicts: Vec<Verdict>,
}

fn run_entry(entry: &MatrixEntry) -> anyhow::Result<Verdict> {
    let psi = from_label(entry.example).map_err(anyhow::Error::msg)?;
    let slow = entry.example == "sqrt_glide";
    let mixing = MixingConfig { n_max: if slow { SLOW_ESCAPE_N_MAX } else { 40 }, ..MixingConfig::default() };
    Ok(match entry.criterion {
        "necessary" => check_necessary(&psi),
        "mixing_bij" if slow => check_mixing_bijective(&psi, -2.0, None, &mixing),
        "mixing_bij" => check_mixing_grid(&psi, &A_GRID, &mixing),
        "mixing_nonsurj" => check_mixing_nonsurjective(&psi, 1.0, &mixing),
        "hypercyclic_sufficient" => check_hypercyclic_sufficient(&psi, &HypercyclicConfig::default()),
        "not_transitive" => check_not_transitive(&psi),
        "abel_growth" => check_abel_growth(&psi, &Weight::default_family(), mixing.n_max, &mixing.protocol),
        other => anyhow::bail!("no matrix runner for {other}"),
    })
}

pub fn run_matrix() -> anyhow::Result<MatrixRun> {
    let mut rows = Vec::new();
    let mut verdicts = Vec::new();
    for entry in entries() {
        let v = run_entry(&entry)?;
        rows.push(MatrixRow {
            example: entry.example.into(),
            criterion: entry.criterion.into(),
            expected: kind_name(entry.expected).into(),
            observed: kind_name(v.kind).into(),
            matches: v.kind == entry.expected,
        });
        verdicts.push(v);
    }
    Ok(MatrixRun { rows, verdicts })
}
