//! Admissible lower bounds for partially assigned torus codes.

use crate::bits::Assignment;
use crate::coord::Coord;

/// A torus with some cells decided.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SearchState {
    pub width: usize,
    pub height: usize,
    pub asg: Assignment,
}

impl SearchState {
    pub fn new(width: usize, height: usize) -> Self {
        SearchState { width, height, asg: Assignment::default() }
    }

    pub fn index(&self, p: Coord) -> usize {
        let q = p.wrap(self.width, self.height);
        q.y as usize * self.width + q.x as usize
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    In,
    Out,
    Free,
}

const IMPOSSIBLE: usize = usize::MAX / 4;

/// Fewest codewords on a cycle of slots such that every three cyclically
/// consecutive slots hold one, respecting fixed slots.
fn cyclic_min(slots: &[Slot]) -> usize {
    let n = slots.len();
    let allowed = |i: usize, v: usize| match slots[i] {
        Slot::In => v == 1,
        Slot::Out => v == 0,
        Slot::Free => true,
    };
    let mut best = IMPOSSIBLE;
    for a0 in 0..2 {
        for a1 in 0..2 {
            if !allowed(0, a0) || !allowed(1, a1) {
                continue;
            }
            // dp[p][q]: cost so far with the previous two slots p, q.
            let mut dp = [[IMPOSSIBLE; 2]; 2];
            dp[a0][a1] = a0 + a1;
            for i in 2..n {
                let mut next = [[IMPOSSIBLE; 2]; 2];
                for p in 0..2 {
                    for q in 0..2 {
                        if dp[p][q] >= IMPOSSIBLE {
                            continue;
                        }
                        for v in 0..2 {
                            if allowed(i, v) && p + q + v > 0 {
                                let c = dp[p][q] + v;
                                if c < next[q][v] {
                                    next[q][v] = c;
                                }
                            }
                        }
                    }
                }
                dp = next;
            }
            for p in 0..2 {
                for q in 0..2 {
                    if dp[p][q] < IMPOSSIBLE && p + q + a0 > 0 && q + a0 + a1 > 0 {
                        best = best.min(dp[p][q]);
                    }
                }
            }
        }
    }
    best
}

/// Largest of the row total and the column total, where each row (column)
/// contributes the fewest codewords hitting all its cyclic triples given
/// the decided cells. Returns a huge value when some row or column cannot
/// be completed.
pub fn lower_bound(state: &SearchState) -> usize {
    let (w, h) = (state.width, state.height);
    let slot = |x: usize, y: usize| {
        let i = y * w + x;
        if state.asg.ins.contains(i) {
            Slot::In
        } else if state.asg.outs.contains(i) {
            Slot::Out
        } else {
            Slot::Free
        }
    };
    let mut rows = 0;
    let mut buf = Vec::with_capacity(w.max(h));
    for y in 0..h {
        buf.clear();
        buf.extend((0..w).map(|x| slot(x, y)));
        rows += cyclic_min(&buf);
    }
    let mut cols = 0;
    for x in 0..w {
        buf.clear();
        buf.extend((0..h).map(|y| slot(x, y)));
        cols += cyclic_min(&buf);
    }
    rows.max(cols).min(IMPOSSIBLE)
}
