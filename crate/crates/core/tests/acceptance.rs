//! One pass/fail line per acceptance criterion. Pass criterion numbers as
//! arguments to run a subset.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use kingid_core::discharge::{self, certify_bound, run_discharging, run_discharging_with, DischargeReport, Mode, Options};
use kingid_core::lemma::{self, SearchConfig};
use kingid_core::rational::{int, ratio};
use kingid_core::search::{self, min_code_size, SearchOptions};
use kingid_core::*;

type Check = fn(usize) -> Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn construction_reproduction(_: usize) -> Result<String, String> {
    for side in [7, 14] {
        let code = diagonal_code(7, &[1, 3, 6], side, side).map_err(|e| e.to_string())?;
        ensure(verify_code(&code).valid, format!("{side}x{side} code is not valid"))?;
        ensure(density(&code) == ratio(3, 7), format!("{side}x{side} density {}", density(&code)))?;
    }
    Ok("7x7 and 14x14 valid, density 3/7".into())
}

fn run_ids(ids: &[&str], jobs: usize) -> Result<lemma::SuiteReport, String> {
    let ids: Vec<String> = ids.iter().map(|s| s.to_string()).collect();
    lemma::run_suite(&ids, SearchConfig { budget: lemma::DEFAULT_BUDGET, jobs }).map_err(|e| e.to_string())
}

fn all_verified(report: &lemma::SuiteReport) -> Result<String, String> {
    for s in &report.scenarios {
        ensure(s.verdict == "verified", format!("{}: {}", s.id, s.verdict))?;
    }
    let nodes: Vec<String> = report.scenarios.iter().map(|s| format!("{} {}", s.id, s.nodes)).collect();
    Ok(format!("all Verified; nodes: {}", nodes.join(", ")))
}

fn frame_lemmas(jobs: usize) -> Result<String, String> {
    all_verified(&run_ids(&["lemma3_fourcorners", "obs_nc", "obs_co"], jobs)?)
}

fn lemma_four(jobs: usize) -> Result<String, String> {
    let s = lemma::bundled("lemma4").map_err(|e| e.to_string())?;
    let spec = s.window_spec().map_err(|e| e.to_string())?;
    ensure((spec.w, spec.h) == (6, 4), format!("window {}x{}", spec.w, spec.h))?;
    all_verified(&run_ids(&["lemma4"], jobs)?)
}

fn lemma_five(jobs: usize) -> Result<String, String> {
    let ids: Vec<&str> = lemma::bundled_ids().into_iter().filter(|id| id.starts_with("lemma5_")).collect();
    ensure(ids.len() == 18, format!("{} lemma-five scenarios", ids.len()))?;
    for id in &ids {
        let s = lemma::bundled(id).map_err(|e| e.to_string())?;
        let spec = s.window_spec().map_err(|e| e.to_string())?;
        ensure(s.symmetries && (spec.w, spec.h) == (8, 8), format!("{id}: window {}x{} symmetries {}", spec.w, spec.h, s.symmetries))?;
    }
    all_verified(&run_ids(&ids, jobs)?)
}

fn poverty_lemmas(jobs: usize) -> Result<String, String> {
    let report = run_ids(&["lemma_1poor", "lemma_2poor"], jobs)?;
    let summary = all_verified(&report)?;
    for s in &report.scenarios {
        let fig = s.figure.as_ref().ok_or(format!("{}: no figure", s.id))?;
        ensure(fig.matches, format!("{}: forced cells {} with {} mismatches", s.id, fig.outcome, fig.mismatches.len()))?;
    }
    Ok(format!("{summary}; forced cells match both figures"))
}

fn random_valid_codes(n: usize) -> Vec<TorusCode> {
    let mut rng = common::rng(61);
    let mut seeds: Vec<TorusCode> = vec![three_sevenths_code(7)];
    for (w, h) in [(4, 4), (4, 5), (5, 5), (4, 6), (6, 6), (5, 6)] {
        if let Some(code) = min_code_size(w, h, SearchOptions::default()).ok().and_then(|r| r.witness) {
            seeds.push(code);
        }
    }
    (0..n)
        .map(|i| {
            let seed = &seeds[i % seeds.len()];
            let kx = 12usize.div_ceil(seed.width()).max(1);
            let ky = 12usize.div_ceil(seed.height()).max(1);
            common::perturbed(&common::tiled(seed, kx, ky), 0.05 + 0.05 * (i % 5) as f64, &mut rng)
        })
        .collect()
}

fn discharging(_: usize) -> Result<String, String> {
    let construction = three_sevenths_code(7);
    let full = certify_bound(&run_discharging(&construction, Mode::Full));
    ensure(full.min_charge >= ratio(188, 37), format!("full min {}", full.min_charge))?;
    ensure(full.density_bound >= ratio(47, 111), format!("full bound {}", full.density_bound))?;
    let simple = certify_bound(&run_discharging(&construction, Mode::Simple));
    ensure(simple.min_charge >= int(5), format!("simple min {}", simple.min_charge))?;
    ensure(simple.density_bound >= ratio(5, 12), format!("simple bound {}", simple.density_bound))?;

    let codes = random_valid_codes(100);
    for (i, code) in codes.iter().enumerate() {
        ensure(is_valid(code), format!("code {i} invalid"))?;
        for mode in [Mode::Simple, Mode::Full] {
            let ledger = run_discharging(code, mode);
            let sum = |v: &[Rational]| v.iter().copied().fold(int(0), |a, b| a + b);
            ensure(sum(&ledger.initial) == sum(&ledger.final_charge), format!("code {i} {mode:?}: charge not conserved"))?;
        }
    }
    Ok(format!(
        "construction full min {} bound {}, simple min {} bound {}; conservation on {} codes",
        full.min_charge,
        full.density_bound,
        simple.min_charge,
        simple.density_bound,
        codes.len()
    ))
}

fn audit(_: usize) -> Result<String, String> {
    let report = discharge::audit_rule_arithmetic();
    let expect = [
        ("seven_two_four_frames", ratio(66, 37), ratio(71, 37)),
        ("seven_one_four_frame", ratio(60, 37), ratio(71, 37)),
        ("seven_not_benefactor", ratio(56, 37), ratio(71, 37)),
        ("six_rule1_no_extra", ratio(37, 37), ratio(37, 37)),
        ("six_rule1b_three_extra", ratio(34, 37), ratio(34, 37)),
        ("six_rule2", ratio(67, 74), ratio(34, 37)),
        ("six_one_poor_benefactor", ratio(32, 37), ratio(34, 37)),
        ("six_two_poor_benefactor", ratio(29, 37), ratio(34, 37)),
        ("six_not_benefactor", ratio(32, 37), ratio(34, 37)),
        ("four_frame_gift", ratio(10, 37), ratio(10, 37)),
        ("density_bound", ratio(47, 111), ratio(47, 111)),
    ];
    for (id, value, bound) in expect {
        let item = report.get(id).ok_or(format!("missing {id}"))?;
        ensure(item.value.value() == value && item.bound.value() == bound && item.holds, format!("{id}: {} vs {}", item.value.value(), value))?;
    }
    ensure(report.all_hold, "some inequality fails")?;
    ensure(ratio(188, 37) / 12 == ratio(47, 111), "(188/37)/12")?;
    Ok(format!("{} items reproduced exactly", report.items.len()))
}

fn extremal_count(jobs: usize) -> Result<String, String> {
    let r = min_code_size(7, 7, SearchOptions { jobs, ..SearchOptions::default() }).map_err(|e| e.to_string())?;
    ensure(r.optimal, format!("not optimal: lower {} upper {:?} after {} nodes", r.lower, r.upper, r.nodes))?;
    let from_below = (47 * 49usize).div_ceil(111);
    ensure(r.size() == Some(from_below), format!("minimum {:?}, expected {from_below}", r.size()))?;
    ensure(three_sevenths_code(7).len() == from_below, "construction size")?;
    let witness = r.witness.ok_or("no witness")?;
    ensure(is_valid(&witness), "witness invalid")?;
    Ok(format!("min_code_size(7,7) = {from_below}, {} nodes", r.nodes))
}

fn properties(jobs: usize) -> Result<String, String> {
    let mut codes = common::mixed_codes(100, 62);
    codes.extend(random_valid_codes(20));
    for code in &codes {
        ensure(frame_average(code) == density(code) * 12, "frame average")?;
        if is_valid(code) {
            ensure(density(code) >= ratio(1, 3), format!("valid code below 1/3\n{code}"))?;
        }
    }
    let random = common::mixed_codes(50, 63);
    for code in &random {
        ensure(identification_oracle(code, 5).identifying == is_valid(code), format!("oracle disagrees\n{code}"))?;
    }
    let seeded = common::seeded_single_violations(10, 64);
    for code in &seeded {
        ensure(!identification_oracle(code, 5).identifying, format!("oracle misses a violation\n{code}"))?;
    }

    let par = jobs.max(2);
    for code in codes.iter().filter(|c| is_valid(c)).take(10) {
        for mode in [Mode::Simple, Mode::Full] {
            let report = |jobs| {
                let ledger = run_discharging_with(code, mode, Options { jobs, ..Options::default() });
                serde_json::to_string(&DischargeReport::new(code, &ledger)).unwrap()
            };
            ensure(report(1) == report(par), "discharge report differs between serial and parallel")?;
        }
    }
    for id in ["lemma4", "obs_co"] {
        let report = |jobs| {
            let r = lemma::run_suite(&[id.to_string()], SearchConfig { budget: lemma::DEFAULT_BUDGET, jobs }).unwrap();
            serde_json::to_string(&r.without_timing()).unwrap()
        };
        ensure(report(1) == report(par), format!("{id} report differs between serial and parallel"))?;
    }
    let search = |jobs| min_code_size(6, 6, SearchOptions { jobs, ..SearchOptions::default() }).unwrap();
    ensure(search(1) == search(par), "search result differs between serial and parallel")?;
    ensure(search::check_density_bounds(&three_sevenths_code(7)).is_ok(), "construction density bounds")?;
    Ok(format!("{} codes, oracle on {} random + {} seeded, serial = parallel", codes.len(), random.len(), seeded.len()))
}

fn main() {
    let criteria: [(usize, &str, Check); 9] = [
        (1, "diagonal 3/7 code reproduction", construction_reproduction),
        (2, "frame-local lemmas", frame_lemmas),
        (3, "lemma4 on the 6x4 window", lemma_four),
        (4, "18 lemma-five scenarios", lemma_five),
        (5, "1-poor and 2-poor lemmas with forced cells", poverty_lemmas),
        (6, "discharging certification and conservation", discharging),
        (7, "rule arithmetic audit", audit),
        (8, "extremal count on the 7x7 torus", extremal_count),
        (9, "property suites", properties),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut failed = 0;
    for (n, name, check) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(|| check(jobs))).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {n} PASS  {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n} FAIL  {name} ({secs:.1}s): {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
