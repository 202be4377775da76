mod common;

use std::collections::BTreeSet;

use kingid_core::rational::ratio;
use kingid_core::*;

fn summed_frame_average(code: &TorusCode) -> Rational {
    let mut total = 0i64;
    for y in 0..code.height() as i32 {
        for x in 0..code.width() as i32 {
            for dy in 0..4 {
                for dx in 0..4 {
                    let ring = dx == 0 || dx == 3 || dy == 0 || dy == 3;
                    if ring && code.contains(Coord::new(x + dx, y + dy)) {
                        total += 1;
                    }
                }
            }
        }
    }
    ratio(total, code.area() as i64)
}

#[test]
fn construction_on_both_tori() {
    for side in [7, 14] {
        let code = diagonal_code(7, &[1, 3, 6], side, side).unwrap();
        assert!(verify_code(&code).valid);
        assert_eq!(density(&code), ratio(3, 7));
        assert_eq!(code.len(), 3 * side * side / 7);
        assert_eq!(code, three_sevenths_code(side));
    }
}

#[test]
fn verify_matches_direct_scan() {
    for code in common::mixed_codes(200, 11) {
        let v = verify_code(&code);
        let found: Vec<(Coord, SetKind)> = v.violations.iter().map(|v| (v.position, v.kind)).collect();
        let mut expected = common::scan_violations(&code);
        let mut found_sorted = found.clone();
        expected.sort();
        found_sorted.sort();
        assert_eq!(found_sorted, expected);
        assert_eq!(v.valid, expected.is_empty());
        assert_eq!(is_valid(&code), v.valid);
    }
}

#[test]
fn verify_iff_conditions_at_every_anchor() {
    for code in common::mixed_codes(200, 12) {
        let by_frames = code.domain().all(|a| {
            let c = check_conditions(&code, a);
            c.cond1 && c.cond2
        });
        assert_eq!(by_frames, verify_code(&code).valid);
    }
}

#[test]
fn frame_average_is_twelve_times_density() {
    let mut codes = common::mixed_codes(100, 13);
    codes.push(three_sevenths_code(7));
    codes.push(TorusCode::full(5, 6).unwrap());
    codes.push(TorusCode::empty(6, 5).unwrap());
    for code in &codes {
        assert_eq!(frame_average(code), summed_frame_average(code));
        assert_eq!(frame_average(code), density(code) * 12);
    }
    assert_eq!(frame_average(&three_sevenths_code(7)), ratio(36, 7));
}

#[test]
fn valid_codes_have_density_at_least_a_third() {
    let mut seen = 0;
    for code in common::mixed_codes(200, 14).into_iter().chain(common::all_codes(4, 4)) {
        if is_valid(&code) {
            seen += 1;
            assert!(density(&code) >= ratio(1, 3), "{code}");
        }
    }
    assert!(seen > 100);
}

#[test]
fn even_columns_on_eight_by_eight() {
    let code = TorusCode::from_fn(8, 8, |p| p.x % 2 == 0).unwrap();
    let v = verify_code(&code);
    assert!(!v.valid);
    let mut found: Vec<(Coord, SetKind)> = v.violations.iter().map(|v| (v.position, v.kind)).collect();
    found.sort();
    let mut expected = common::scan_violations(&code);
    expected.sort();
    assert_eq!(found, expected);
    // Only vertical triples in odd columns miss: 4 columns x 8 rows.
    assert_eq!(found.len(), 32);
    assert!(found.iter().all(|&(p, k)| k == SetKind::Vertical && p.x % 2 == 1));
}

#[test]
fn empty_code_first_violation_at_origin() {
    let v = verify_code(&TorusCode::empty(5, 5).unwrap());
    assert!(!v.valid);
    assert_eq!(v.violations[0].position, Coord::new(0, 0));
}

fn trace(code: &TorusCode, set: &[Coord]) -> BTreeSet<Coord> {
    let mut t = BTreeSet::new();
    for &x in set {
        for dy in -1..=1 {
            for dx in -1..=1 {
                let c = x + Coord::new(dx, dy);
                if code.contains(c) {
                    t.insert(c);
                }
            }
        }
    }
    t
}

fn assert_collides(code: &TorusCode, res: &OracleResult) {
    let (a, b) = res.confusion.as_ref().expect("confusion expected");
    let sa: BTreeSet<Coord> = a.iter().copied().collect();
    let sb: BTreeSet<Coord> = b.iter().copied().collect();
    assert_ne!(sa, sb);
    assert!(a.len() <= 2 && b.len() <= 2);
    assert_eq!(trace(code, a), trace(code, b));
}

#[test]
fn oracle_agrees_on_random_codes() {
    let codes = common::mixed_codes(50, 15);
    let valid = codes.iter().filter(|c| is_valid(c)).count();
    assert!((20..=40).contains(&valid), "{valid}");
    for code in &codes {
        let res = identification_oracle(code, 5);
        assert_eq!(res.identifying, is_valid(code), "{code}");
        if !res.identifying {
            assert_collides(code, &res);
        }
    }
}

#[test]
fn oracle_finds_seeded_violations() {
    for code in common::seeded_single_violations(10, 16) {
        let res = identification_oracle(&code, 5);
        assert!(!res.identifying, "{code}");
        assert_collides(&code, &res);
    }
}
