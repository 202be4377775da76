//! Frame roles: k-frames, benefactors and poor frames.
//!
//! All neighbourhood queries are made by offset from the frame's anchor,
//! so on a torus they describe the periodic code on the whole plane: two
//! different offsets that wrap onto the same anchor still count as two
//! frames.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::conditions::frame_count;
use crate::coord::{Coord, Symmetry};
use crate::frame::{AXIS2, BALL2, RING1, RING2};
use crate::torus::TorusCode;

/// How the poverty definitions count rich neighbours.
///
/// `Literal` counts frames with exactly six codewords where the definitions
/// say "6-frame"; `SixPlus` counts every frame with at least six. Under the
/// literal reading a 5-frame surrounded by 7-frames can be 1-poor, and then
/// its one 6-frame may also be a 4-benefactor, so the benefactor roles stop
/// being exclusive. `SixPlus` is the reading the structural lemmas need.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PovertyReading {
    Literal,
    #[default]
    SixPlus,
}

impl PovertyReading {
    fn rich(self, count: u8) -> bool {
        match self {
            PovertyReading::Literal => count == 6,
            PovertyReading::SixPlus => count >= 6,
        }
    }
}

/// Frame counts for every anchor of a torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameCounts {
    width: usize,
    height: usize,
    counts: Vec<u8>,
    reading: PovertyReading,
}

impl FrameCounts {
    pub fn new(code: &TorusCode) -> Self {
        Self::with_reading(code, PovertyReading::default())
    }

    pub fn with_reading(code: &TorusCode, reading: PovertyReading) -> Self {
        let counts = code.domain().map(|a| frame_count(code, a)).collect();
        FrameCounts { width: code.width(), height: code.height(), counts, reading }
    }

    pub fn reading(&self) -> PovertyReading {
        self.reading
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn index(&self, anchor: Coord) -> usize {
        let a = anchor.wrap(self.width, self.height);
        a.y as usize * self.width + a.x as usize
    }

    pub fn at(&self, anchor: Coord) -> u8 {
        self.counts[self.index(anchor)]
    }

    pub fn anchors(&self) -> impl Iterator<Item = Coord> {
        let (w, h) = (self.width, self.height);
        (0..h).flat_map(move |y| (0..w).map(move |x| Coord::new(x as i32, y as i32)))
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.counts
    }

    fn num_where(&self, a: Coord, offsets: &[Coord], pred: impl Fn(u8) -> bool) -> usize {
        offsets.iter().filter(|&&o| pred(self.at(a + o))).count()
    }

    /// A 5-frame with at most one rich frame in its 2-ball.
    pub fn is_one_poor(&self, a: Coord) -> bool {
        let r = self.reading;
        self.at(a) == 5 && self.num_where(a, &BALL2, |c| r.rich(c)) <= 1
    }

    /// A 5-frame with no 6⁺-frame at distance 1 and at most two rich frames
    /// at distance 2.
    pub fn is_two_poor(&self, a: Coord) -> bool {
        let r = self.reading;
        self.at(a) == 5 && self.num_where(a, &RING1, |c| c >= 6) == 0 && self.num_where(a, &RING2, |c| r.rich(c)) <= 2
    }

    /// Offsets in `AXIS2` order holding a 4-frame.
    pub fn four_frame_offsets(&self, a: Coord) -> Vec<Coord> {
        AXIS2.iter().copied().filter(|&o| self.at(a + o) == 4).collect()
    }

    pub fn is_four_benefactor(&self, a: Coord) -> bool {
        self.at(a) >= 6 && AXIS2.iter().any(|&o| self.at(a + o) == 4)
    }
}

/// The two 2-ball corners flanking the axis offset `d`.
pub fn co_benefactor_offsets(d: Coord) -> [Coord; 2] {
    if d.x == 0 {
        [Coord::new(-2, d.y), Coord::new(2, d.y)]
    } else {
        [Coord::new(d.x, -2), Coord::new(d.x, 2)]
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub enum RoleKind {
    /// Fewer than four codewords; only possible in an invalid code.
    Deficient,
    FourFrame,
    FiveFrame,
    PlainSix,
    FourBenefactorSixNoSevenCoben,
    FourBenefactorSixWithSevenCoben,
    FourBenefactorSevenPlus,
    OnePoorBenefactor,
    TwoPoorBenefactor,
    PlainSevenPlus,
}

impl RoleKind {
    pub fn name(self) -> &'static str {
        match self {
            RoleKind::Deficient => "deficient",
            RoleKind::FourFrame => "four_frame",
            RoleKind::FiveFrame => "five_frame",
            RoleKind::PlainSix => "plain_six",
            RoleKind::FourBenefactorSixNoSevenCoben => "four_benefactor_six_no_seven_coben",
            RoleKind::FourBenefactorSixWithSevenCoben => "four_benefactor_six_with_seven_coben",
            RoleKind::FourBenefactorSevenPlus => "four_benefactor_seven_plus",
            RoleKind::OnePoorBenefactor => "one_poor_benefactor",
            RoleKind::TwoPoorBenefactor => "two_poor_benefactor",
            RoleKind::PlainSevenPlus => "plain_seven_plus",
        }
    }
}

impl fmt::Display for RoleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct FrameRole {
    pub kind: RoleKind,
    pub count: u8,
    pub one_poor: bool,
    pub two_poor: bool,
}

/// Class of an offset in the 2-ball of a 4-benefactor whose 4-frame has
/// been rotated to offset `(-2, 0)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum PositionClass {
    FourFrame,
    CoBenefactor,
    X,
    Y,
    Z,
}

pub fn position_class(canonical: Coord) -> Option<PositionClass> {
    if canonical.norm() == 0 || canonical.norm() > 2 {
        return None;
    }
    Some(match (canonical.x, canonical.y) {
        (-2, 0) => PositionClass::FourFrame,
        (-2, -2) | (-2, 2) => PositionClass::CoBenefactor,
        (-1, -1) | (-1, 1) => PositionClass::Y,
        (0, 1) | (0, -1) | (1, 1) | (1, 0) | (1, -1) => PositionClass::Z,
        _ => PositionClass::X,
    })
}

/// A symmetry sending the 4-frame offset `d` to `(-2, 0)`.
pub fn orientation(d: Coord) -> Symmetry {
    *Symmetry::ALL
        .iter()
        .find(|s| s.apply(d) == Coord::new(-2, 0))
        .expect("axis offset at distance 2")
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Anomaly {
    DeficientFrame { anchor: Coord, count: u8 },
    /// A 6-frame that is both a 4-benefactor and a 1-poor-benefactor.
    RoleConflict { anchor: Coord },
    /// A 4-benefactor 6-frame next to more than one 4-frame.
    SixBenefactorFourFrames { anchor: Coord, four_frames: u8 },
    /// A 4-benefactor 7⁺-frame next to more than two 4-frames.
    SevenBenefactorFourFrames { anchor: Coord, four_frames: u8 },
    /// Rule 1a's special Z position does not hold a 5-frame.
    Rule1aTargetNotFive { donor: Coord, target: Coord, count: u8 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub counts: FrameCounts,
    /// Indexed like [`FrameCounts::index`].
    pub roles: Vec<FrameRole>,
    pub anomalies: Vec<Anomaly>,
}

impl Classification {
    pub fn role(&self, anchor: Coord) -> FrameRole {
        self.roles[self.counts.index(anchor)]
    }

    pub fn histogram(&self) -> BTreeMap<String, usize> {
        let mut h = BTreeMap::new();
        for r in &self.roles {
            *h.entry(r.kind.name().to_string()).or_insert(0) += 1;
        }
        h
    }
}

fn one_poor_benefactor(c: &FrameCounts, a: Coord) -> bool {
    c.at(a) == 6 && RING1.iter().any(|&o| c.is_one_poor(a + o))
}

fn two_poor_benefactor(c: &FrameCounts, a: Coord) -> bool {
    c.at(a) == 6
        && RING2.iter().any(|&o| c.is_two_poor(a + o))
        && !c.is_four_benefactor(a)
        && !one_poor_benefactor(c, a)
        && BALL2.iter().filter(|&&o| c.at(a + o) >= 6).count() >= 4
        && BALL2.iter().filter(|&&o| c.is_two_poor(a + o)).count() == 1
}

pub fn classify(code: &TorusCode) -> Classification {
    classify_counts(FrameCounts::new(code))
}

pub fn classify_with(code: &TorusCode, reading: PovertyReading) -> Classification {
    classify_counts(FrameCounts::with_reading(code, reading))
}

pub fn classify_counts(counts: FrameCounts) -> Classification {
    let mut anomalies = Vec::new();
    let mut roles = Vec::with_capacity(counts.width() * counts.height());
    for a in counts.anchors() {
        let count = counts.at(a);
        let fours = counts.four_frame_offsets(a);
        let kind = match count {
            0..=3 => {
                anomalies.push(Anomaly::DeficientFrame { anchor: a, count });
                RoleKind::Deficient
            }
            4 => RoleKind::FourFrame,
            5 => RoleKind::FiveFrame,
            6 => {
                let four_ben = !fours.is_empty();
                let one_ben = one_poor_benefactor(&counts, a);
                if four_ben && one_ben {
                    anomalies.push(Anomaly::RoleConflict { anchor: a });
                }
                if four_ben {
                    if fours.len() > 1 {
                        anomalies.push(Anomaly::SixBenefactorFourFrames { anchor: a, four_frames: fours.len() as u8 });
                    }
                    let seven_coben =
                        co_benefactor_offsets(fours[0]).iter().any(|&o| counts.at(a + o) >= 7);
                    if seven_coben {
                        RoleKind::FourBenefactorSixWithSevenCoben
                    } else {
                        RoleKind::FourBenefactorSixNoSevenCoben
                    }
                } else if one_ben {
                    RoleKind::OnePoorBenefactor
                } else if two_poor_benefactor(&counts, a) {
                    RoleKind::TwoPoorBenefactor
                } else {
                    RoleKind::PlainSix
                }
            }
            _ => {
                if fours.is_empty() {
                    RoleKind::PlainSevenPlus
                } else {
                    if fours.len() > 2 {
                        anomalies.push(Anomaly::SevenBenefactorFourFrames { anchor: a, four_frames: fours.len() as u8 });
                    }
                    RoleKind::FourBenefactorSevenPlus
                }
            }
        };
        roles.push(FrameRole { kind, count, one_poor: counts.is_one_poor(a), two_poor: counts.is_two_poor(a) });
    }
    Classification { counts, roles, anomalies }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DischargeError {
    #[error("frame at {0} is not a 4-benefactor")]
    NotABenefactor(Coord),
}

/// Co-benefactors of a 4-benefactor, as unreduced anchors, sorted.
pub fn co_benefactors(code: &TorusCode, anchor: Coord) -> Result<Vec<Coord>, DischargeError> {
    let counts = FrameCounts::new(code);
    if !counts.is_four_benefactor(anchor) {
        return Err(DischargeError::NotABenefactor(anchor));
    }
    let mut out: Vec<Coord> = counts
        .four_frame_offsets(anchor)
        .into_iter()
        .flat_map(co_benefactor_offsets)
        .map(|o| anchor + o)
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::three_sevenths_code;

    #[test]
    fn position_classes_partition_the_ball() {
        let mut sizes = BTreeMap::new();
        for o in BALL2 {
            *sizes.entry(format!("{:?}", position_class(o).unwrap())).or_insert(0) += 1;
        }
        assert_eq!(sizes["X"], 14);
        assert_eq!(sizes["Y"], 2);
        assert_eq!(sizes["Z"], 5);
        assert_eq!(sizes["CoBenefactor"], 2);
        assert_eq!(sizes["FourFrame"], 1);
        assert_eq!(position_class(Coord::ORIGIN), None);
    }

    #[test]
    fn orientation_is_unambiguous_on_classes() {
        for d in AXIS2 {
            let fitting: Vec<Symmetry> =
                Symmetry::ALL.iter().copied().filter(|s| s.apply(d) == Coord::new(-2, 0)).collect();
            assert_eq!(fitting.len(), 2);
            for o in BALL2 {
                assert_eq!(position_class(fitting[0].apply(o)), position_class(fitting[1].apply(o)));
            }
        }
    }

    #[test]
    fn co_benefactor_geometry() {
        assert_eq!(co_benefactor_offsets(Coord::new(-2, 0)), [Coord::new(-2, -2), Coord::new(-2, 2)]);
        assert_eq!(co_benefactor_offsets(Coord::new(0, 2)), [Coord::new(-2, 2), Coord::new(2, 2)]);
        for d in AXIS2 {
            for c in co_benefactor_offsets(d) {
                assert_eq!(c.norm(), 2);
                assert_eq!(c.chebyshev(d), 2);
            }
        }
    }

    #[test]
    fn all_codeword_torus_is_plain() {
        let c = classify(&TorusCode::full(6, 6).unwrap());
        assert!(c.roles.iter().all(|r| r.kind == RoleKind::PlainSevenPlus && r.count == 12));
        assert!(c.anomalies.is_empty());
        assert_eq!(co_benefactors(&TorusCode::full(6, 6).unwrap(), Coord::ORIGIN), Err(DischargeError::NotABenefactor(Coord::ORIGIN)));
    }

    #[test]
    fn construction_has_no_four_frames() {
        let c = classify(&three_sevenths_code(7));
        assert!(c.roles.iter().all(|r| r.count >= 5));
        assert!(c.anomalies.is_empty());
    }
}
