//! Brute-force identification check straight from the definition: within
//! a window, no two sets `X ≠ Y` with `|X|, |Y| ≤ 2` may have the same
//! codewords in their closed neighbourhoods.
//!
//! Only a cross-check. A pair of confusable sets whose union does not fit
//! in any ball of the chosen radius is not looked for.

use std::collections::HashMap;

use serde::Serialize;

use crate::coord::Coord;
use crate::torus::TorusCode;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub identifying: bool,
    /// Two distinct sets with equal traces `N[X] ∩ C = N[Y] ∩ C`.
    pub confusion: Option<(Vec<Coord>, Vec<Coord>)>,
}

pub fn identification_oracle(code: &TorusCode, radius: u32) -> OracleResult {
    let r = radius as i32;
    let side = 2 * r + 3;
    let words = ((side * side) as usize).div_ceil(64);

    // Ball cells relative to the centre, centre first.
    let mut ball = vec![Coord::ORIGIN];
    for dy in -r..=r {
        for dx in -r..=r {
            if dx != 0 || dy != 0 {
                ball.push(Coord::new(dx, dy));
            }
        }
    }
    let local = |p: Coord| ((p.y + r + 1) * side + (p.x + r + 1)) as usize;

    for center in code.domain() {
        let mut codewords = vec![0u64; words];
        for dy in -(r + 1)..=(r + 1) {
            for dx in -(r + 1)..=(r + 1) {
                let p = Coord::new(dx, dy);
                if code.contains(center + p) {
                    let i = local(p);
                    codewords[i >> 6] |= 1 << (i & 63);
                }
            }
        }
        let trace: Vec<Vec<u64>> = ball
            .iter()
            .map(|&v| {
                let mut t = vec![0u64; words];
                for dy in -1..=1 {
                    for dx in -1..=1 {
                        let i = local(v + Coord::new(dx, dy));
                        t[i >> 6] |= 1 << (i & 63);
                    }
                }
                t.iter_mut().zip(&codewords).for_each(|(a, b)| *a &= b);
                t
            })
            .collect();

        let abs = |ids: &[usize]| ids.iter().map(|&i| center + ball[i]).collect::<Vec<_>>();
        let mut seen: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
        let mut check = |sig: Vec<u64>, ids: Vec<usize>| -> Option<(Vec<Coord>, Vec<Coord>)> {
            match seen.get(&sig) {
                Some(prev) => Some((abs(prev), abs(&ids))),
                None => {
                    seen.insert(sig, ids);
                    None
                }
            }
        };

        let mut found = check(vec![0u64; words], vec![]);
        for i in 0..ball.len() {
            if found.is_some() {
                break;
            }
            found = check(trace[i].clone(), vec![i]);
        }
        'pairs: for i in 0..ball.len() {
            for j in i + 1..ball.len() {
                if found.is_some() {
                    break 'pairs;
                }
                let sig = trace[i].iter().zip(&trace[j]).map(|(a, b)| a | b).collect();
                found = check(sig, vec![i, j]);
            }
        }
        if let Some(pair) = found {
            return OracleResult { identifying: false, confusion: Some(pair) };
        }
    }
    OracleResult { identifying: true, confusion: None }
}
