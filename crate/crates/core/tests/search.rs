mod common;

use kingid_core::bits::CellSet;
use kingid_core::rational::ratio;
use kingid_core::search::*;
use kingid_core::*;
use rand::prelude::*;

fn masks(code: &TorusCode) -> u64 {
    code.members().map(|p| 1u64 << (p.y as usize * code.width() + p.x as usize)).fold(0, |a, b| a | b)
}

fn valid_masks(w: usize, h: usize) -> Vec<u64> {
    common::all_codes(w, h).filter(is_valid).map(|c| masks(&c)).collect()
}

#[test]
fn lower_bound_never_overshoots() {
    let (w, h) = (4, 4);
    let valid = valid_masks(w, h);
    let mut rng = common::rng(41);
    let mut tested = 0;
    while tested < 1000 {
        let mut ins = 0u64;
        let mut outs = 0u64;
        for i in 0..w * h {
            match rng.gen_range(0..5) {
                0 => ins |= 1 << i,
                1 => outs |= 1 << i,
                _ => {}
            }
        }
        let best = valid.iter().filter(|&&m| m & ins == ins && m & outs == 0).map(|m| m.count_ones() as usize).min();
        let Some(best) = best else { continue };
        let mut state = SearchState::new(w, h);
        state.asg.ins = (0..w * h).filter(|i| ins >> i & 1 == 1).collect::<CellSet>();
        state.asg.outs = (0..w * h).filter(|i| outs >> i & 1 == 1).collect::<CellSet>();
        let lb = lower_bound(&state);
        assert!(lb <= best, "bound {lb} above optimum {best}");
        tested += 1;
    }
}

#[test]
fn complete_state_bound_is_its_size() {
    let code = three_sevenths_code(7);
    let mut state = SearchState::new(7, 7);
    for p in code.domain() {
        let i = state.index(p);
        if code.contains(p) {
            state.asg.ins.insert(i);
        } else {
            state.asg.outs.insert(i);
        }
    }
    assert_eq!(lower_bound(&state), 21);
}

#[test]
fn small_optima_match_enumeration() {
    for (w, h) in [(4, 4), (4, 5), (5, 4)] {
        let best = valid_masks(w, h).iter().map(|m| m.count_ones() as usize).min().unwrap();
        let r = min_code_size(w, h, SearchOptions::default()).unwrap();
        assert!(r.optimal);
        assert_eq!(r.size(), Some(best), "{w}x{h}");
        let witness = r.witness.unwrap();
        assert!(is_valid(&witness));
        assert_eq!(witness.len(), best);
        assert!(density(&witness) >= density_lower_bound());
        // ceil(47 * area / 111)
        assert!(best >= (47 * w * h).div_ceil(111));
    }
}

#[test]
fn cap_below_optimum_is_exhausted() {
    let best = valid_masks(4, 4).iter().map(|m| m.count_ones() as usize).min().unwrap();
    let r = min_code_size(4, 4, SearchOptions { ub: Some(best - 1), ..SearchOptions::default() }).unwrap();
    assert!(r.witness.is_none());
    assert!(!r.optimal);
    assert_eq!(r.lower, best);
}

#[test]
fn tiny_budget_reports_bounds() {
    let r = min_code_size(6, 6, SearchOptions { budget: 1, ..SearchOptions::default() }).unwrap();
    assert!(!r.optimal);
    assert!(r.lower >= 12);
    assert_eq!(r.size(), None);
}

#[test]
fn jobs_do_not_change_the_result() {
    for (w, h) in [(4, 6), (5, 5), (6, 6)] {
        let a = min_code_size(w, h, SearchOptions { jobs: 1, ..SearchOptions::default() }).unwrap();
        let b = min_code_size(w, h, SearchOptions { jobs: 3, ..SearchOptions::default() }).unwrap();
        assert_eq!(a, b, "{w}x{h}");
        assert!(a.optimal);
    }
}

#[test]
fn density_bounds_of_construction() {
    let r = check_density_bounds(&three_sevenths_code(14)).unwrap();
    assert_eq!(r.density.value(), ratio(3, 7));
    assert_eq!(r.bound_gap.value(), ratio(4, 777));
    assert_eq!(r.above_lower.value(), ratio(4, 777));
    assert_eq!(check_density_bounds(&TorusCode::empty(5, 5).unwrap()), Err(SearchError::InvalidCode));
}
