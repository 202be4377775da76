//! The local characterisation of (1,≤2)-identifying codes in the king grid:
//! at every position, the 4-corner set, the horizontal triple and the
//! vertical triple each contain a codeword.

use serde::Serialize;

use crate::coord::Coord;
use crate::frame::{Frame, FRAME_OFFSETS};
use crate::rational::Rational;
use crate::torus::{CodeError, TorusCode};

/// The three set families, each based at a position `(x, y)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    /// `{(x,y), (x+3,y), (x,y+3), (x+3,y+3)}`
    Corners,
    /// `{(x,y), (x+1,y), (x+2,y)}`
    Horizontal,
    /// `{(x,y), (x,y+1), (x,y+2)}`
    Vertical,
}

impl SetKind {
    pub const ALL: [SetKind; 3] = [SetKind::Corners, SetKind::Horizontal, SetKind::Vertical];

    pub fn cells(self, at: Coord) -> Vec<Coord> {
        let o = |x, y| at + Coord::new(x, y);
        match self {
            SetKind::Corners => vec![o(0, 0), o(3, 0), o(0, 3), o(3, 3)],
            SetKind::Horizontal => vec![o(0, 0), o(1, 0), o(2, 0)],
            SetKind::Vertical => vec![o(0, 0), o(0, 1), o(0, 2)],
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Violation {
    pub position: Coord,
    pub kind: SetKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionCheck {
    /// Some corner of the frame is a codeword.
    pub cond1: bool,
    /// Each of the 8 side triples holds a codeword.
    pub cond2: bool,
}

pub fn check_conditions(code: &TorusCode, anchor: Coord) -> ConditionCheck {
    let f = Frame::new(anchor);
    ConditionCheck {
        cond1: f.corners().iter().any(|&c| code.contains(c)),
        cond2: f.side_triples().iter().all(|t| t.iter().any(|&c| code.contains(c))),
    }
}

/// Scan every position of the fundamental domain (row-major) for unhit sets.
pub fn verify_code(code: &TorusCode) -> Verification {
    let mut violations = Vec::new();
    for p in code.domain() {
        for kind in SetKind::ALL {
            if !kind.cells(p).iter().any(|&c| code.contains(c)) {
                violations.push(Violation { position: p, kind });
            }
        }
    }
    Verification { valid: violations.is_empty(), violations }
}

pub fn is_valid(code: &TorusCode) -> bool {
    code.domain()
        .all(|p| SetKind::ALL.iter().all(|k| k.cells(p).iter().any(|&c| code.contains(c))))
}

pub fn density(code: &TorusCode) -> Rational {
    Rational::new(code.len() as i64, code.area() as i64)
}

pub fn frame_count(code: &TorusCode, anchor: Coord) -> u8 {
    FRAME_OFFSETS.iter().filter(|&&o| code.contains(anchor + o)).count() as u8
}

/// Mean frame count over all anchors of the fundamental domain.
pub fn frame_average(code: &TorusCode) -> Rational {
    let total: i64 = code.domain().map(|a| frame_count(code, a) as i64).sum();
    Rational::new(total, code.area() as i64)
}

/// Codewords at the cells with `(x - y) mod period` in `residues`.
pub fn diagonal_code(period: usize, residues: &[usize], width: usize, height: usize) -> Result<TorusCode, CodeError> {
    if period == 0 {
        return Err(CodeError::ZeroPeriod);
    }
    if let Some(&r) = residues.iter().find(|&&r| r >= period) {
        return Err(CodeError::BadResidue { residue: r, period });
    }
    if !width.is_multiple_of(period) || !height.is_multiple_of(period) {
        return Err(CodeError::PeriodMismatch { period, width, height });
    }
    TorusCode::from_fn(width, height, |p| residues.contains(&((p.x - p.y).rem_euclid(period as i32) as usize)))
}

/// The density-3/7 construction on a `side × side` torus (`7 | side`).
pub fn three_sevenths_code(side: usize) -> TorusCode {
    diagonal_code(7, &[1, 3, 6], side, side).expect("side must be a multiple of 7")
}
