//! Running scenarios, with symmetry expansion and figure checks.

use std::time::Instant;

use serde::Serialize;

use super::engine::{forced_cells, search, Forced, ForcedOutcome, SearchConfig, Verdict};
use super::scenario::{bundled, bundled_ids, Scenario, ScenarioError};
use super::window::CellState;
use crate::coord::Coord;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VariantReport {
    pub symmetry: &'static str,
    pub verdict: &'static str,
    pub nodes: u64,
    pub ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Mismatch {
    pub cell: Coord,
    pub expected: CellState,
    pub found: Forced,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FigureCheck {
    /// `forced`, `unsat` or `inconclusive`.
    pub outcome: &'static str,
    pub matches: bool,
    pub mismatches: Vec<Mismatch>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub forced_rows: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ScenarioReport {
    pub id: String,
    pub verdict: &'static str,
    pub nodes: u64,
    pub ms: u128,
    pub variants: Vec<VariantReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub figure: Option<FigureCheck>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.verdict == "verified" && self.figure.as_ref().is_none_or(|f| f.matches)
    }

    pub fn without_timing(&self) -> ScenarioReport {
        let mut r = self.clone();
        r.ms = 0;
        r.variants.iter_mut().for_each(|v| v.ms = 0);
        r
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SuiteReport {
    pub scenarios: Vec<ScenarioReport>,
    pub all_passed: bool,
    pub nodes: u64,
    pub ms: u128,
}

impl SuiteReport {
    /// The report with every duration zeroed; identical for any number of
    /// workers.
    pub fn without_timing(&self) -> SuiteReport {
        SuiteReport {
            scenarios: self.scenarios.iter().map(|s| s.without_timing()).collect(),
            ms: 0,
            ..self.clone()
        }
    }
}

fn check_figure(s: &Scenario, config: SearchConfig) -> Result<Option<FigureCheck>, ScenarioError> {
    let Some(fig) = &s.figure else { return Ok(None) };
    let check = match forced_cells(s, config)? {
        ForcedOutcome::Forced(map) => {
            let mismatches: Vec<Mismatch> = fig
                .cells()
                .into_iter()
                .filter_map(|(cell, expected)| {
                    let found = map.get(cell).expect("figure inside window");
                    let ok = matches!((expected, found), (CellState::In, Forced::In) | (CellState::Out, Forced::Out));
                    (!ok).then_some(Mismatch { cell, expected, found })
                })
                .collect();
            FigureCheck { outcome: "forced", matches: mismatches.is_empty(), mismatches, forced_rows: map.rows() }
        }
        ForcedOutcome::Unsat => {
            FigureCheck { outcome: "unsat", matches: false, mismatches: Vec::new(), forced_rows: Vec::new() }
        }
        ForcedOutcome::Inconclusive => {
            FigureCheck { outcome: "inconclusive", matches: false, mismatches: Vec::new(), forced_rows: Vec::new() }
        }
    };
    Ok(Some(check))
}

/// Search every symmetric variant (when enabled). The scenario's verdict
/// is the first counterexample in variant order, else inconclusive if any
/// variant ran out of budget, else verified.
pub fn check_scenario(s: &Scenario, config: SearchConfig) -> Result<(ScenarioReport, Verdict), ScenarioError> {
    let start = Instant::now();
    let syms: Vec<&'static str> = if s.symmetries {
        crate::coord::Symmetry::ALL.iter().map(|g| g.name()).collect()
    } else {
        vec![crate::coord::Symmetry::IDENTITY.name()]
    };
    let mut variants = Vec::new();
    let mut overall: Option<Verdict> = None;
    let mut inconclusive = false;
    let mut nodes = 0;
    for (v, symmetry) in s.variants().iter().zip(syms) {
        let out = search(v, config)?;
        nodes += out.nodes;
        let counterexample = match &out.verdict {
            Verdict::Counterexample(w) => Some(w.rows()),
            _ => None,
        };
        variants.push(VariantReport { symmetry, verdict: out.verdict.name(), nodes: out.nodes, ms: out.elapsed_ms, counterexample });
        match out.verdict {
            Verdict::Counterexample(_) if overall.is_none() => overall = Some(out.verdict),
            Verdict::Inconclusive => inconclusive = true,
            _ => {}
        }
    }
    let verdict = overall.unwrap_or(if inconclusive { Verdict::Inconclusive } else { Verdict::Verified });
    let figure = check_figure(s, config)?;
    let report = ScenarioReport {
        id: s.id.clone(),
        verdict: verdict.name(),
        nodes,
        ms: start.elapsed().as_millis(),
        variants,
        figure,
    };
    Ok((report, verdict))
}

/// Run bundled scenarios by id, or all of them when `ids` is empty.
pub fn run_suite(ids: &[String], config: SearchConfig) -> Result<SuiteReport, ScenarioError> {
    let start = Instant::now();
    let ids: Vec<String> =
        if ids.is_empty() { bundled_ids().into_iter().map(String::from).collect() } else { ids.to_vec() };
    let mut scenarios = Vec::new();
    for id in &ids {
        let s = bundled(id)?;
        scenarios.push(check_scenario(&s, config)?.0);
    }
    let all_passed = scenarios.iter().all(|s| s.passed());
    let nodes = scenarios.iter().map(|s| s.nodes).sum();
    Ok(SuiteReport { scenarios, all_passed, nodes, ms: start.elapsed().as_millis() })
}
