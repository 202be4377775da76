//! The two discharging procedures, with exact charges.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::roles::{
    classify_with, co_benefactor_offsets, orientation, position_class, Anomaly, Classification, PositionClass, PovertyReading, RoleKind,
};
use crate::coord::Coord;
use crate::frame::{AXIS2, BALL2};
use crate::parallel::map_all;
use crate::rational::{int, ratio, Rational, RationalJson};
use crate::torus::TorusCode;

pub fn alpha() -> Rational {
    ratio(1, 37)
}

/// What each 4-benefactor hands to an adjacent 4-frame in full mode.
pub fn four_frame_gift() -> Rational {
    (alpha() * 3 + 1) / 4
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Simple,
    Full,
}

impl Mode {
    /// Minimum final charge the procedure guarantees on a valid code.
    pub fn threshold(self) -> Rational {
        match self {
            Mode::Simple => int(5),
            Mode::Full => int(5) + alpha() * 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Simple => "simple",
            Mode::Full => "full",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "simple" => Ok(Mode::Simple),
            "full" => Ok(Mode::Full),
            _ => Err(format!("unknown mode `{s}`, expected simple or full")),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum RuleId {
    Simple,
    R1a,
    R1b,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
}

impl RuleId {
    pub fn name(self) -> &'static str {
        match self {
            RuleId::Simple => "simple",
            RuleId::R1a => "1a",
            RuleId::R1b => "1b",
            RuleId::R2 => "2",
            RuleId::R3 => "3",
            RuleId::R4 => "4",
            RuleId::R5 => "5",
            RuleId::R6 => "6",
            RuleId::R7 => "7",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for RuleId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    RationalJson::from(*r).serialize(s)
}

/// One charge movement. `recipient` is `donor + offset` reduced onto the
/// torus; `offset` keeps the plane geometry.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Transfer {
    pub donor: Coord,
    pub recipient: Coord,
    pub offset: Coord,
    #[serde(serialize_with = "ser_rational")]
    pub amount: Rational,
    pub rule: RuleId,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChargeLedger {
    pub mode: Mode,
    pub classification: Classification,
    pub initial: Vec<Rational>,
    pub final_charge: Vec<Rational>,
    /// Sorted by donor (row-major), then rule, then generation order.
    pub transfers: Vec<Transfer>,
    /// Classification anomalies followed by those found while donating.
    pub anomalies: Vec<Anomaly>,
}

impl ChargeLedger {
    pub fn width(&self) -> usize {
        self.classification.counts.width()
    }

    pub fn height(&self) -> usize {
        self.classification.counts.height()
    }

    pub fn initial_at(&self, anchor: Coord) -> Rational {
        self.initial[self.classification.counts.index(anchor)]
    }

    pub fn final_at(&self, anchor: Coord) -> Rational {
        self.final_charge[self.classification.counts.index(anchor)]
    }

    pub fn received_by(&self, anchor: Coord) -> impl Iterator<Item = &Transfer> {
        let a = anchor.wrap(self.width(), self.height());
        self.transfers.iter().filter(move |t| t.recipient == a)
    }

    pub fn given_by(&self, anchor: Coord) -> impl Iterator<Item = &Transfer> {
        let a = anchor.wrap(self.width(), self.height());
        self.transfers.iter().filter(move |t| t.donor == a)
    }

    /// Smallest final charge and the first anchor (row-major) holding it.
    pub fn min_charge(&self) -> (Rational, Coord) {
        let (i, m) = self
            .final_charge
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
            .expect("non-empty torus");
        let w = self.width();
        (*m, Coord::new((i % w) as i32, (i / w) as i32))
    }
}

struct Donation {
    transfers: Vec<Transfer>,
    anomalies: Vec<Anomaly>,
}

struct Giver<'a> {
    cls: &'a Classification,
    donor: Coord,
    out: Donation,
}

impl Giver<'_> {
    fn count(&self, o: Coord) -> u8 {
        self.cls.counts.at(self.donor + o)
    }

    fn give(&mut self, offset: Coord, amount: Rational, rule: RuleId) {
        let c = &self.cls.counts;
        self.out.transfers.push(Transfer {
            donor: self.donor,
            recipient: (self.donor + offset).wrap(c.width(), c.height()),
            offset,
            amount,
            rule,
        });
    }

    /// `near` to 5-frames at distance 1 and `far` at distance 2.
    fn by_distance(&mut self, near: Rational, far: Rational, rule: RuleId, skip: impl Fn(Coord) -> bool) {
        for o in BALL2 {
            if self.count(o) == 5 && !skip(o) {
                self.give(o, if o.norm() == 1 { near } else { far }, rule);
            }
        }
    }

    fn four_frames(&mut self, rule: RuleId) {
        for o in AXIS2 {
            if self.count(o) == 4 {
                self.give(o, four_frame_gift(), rule);
            }
        }
    }

    fn four_benefactor_six(&mut self, seven_coben: bool) {
        let counts = &self.cls.counts;
        let d = counts.four_frame_offsets(self.donor)[0];
        let s = orientation(d);
        let back = s.inverse();
        let a = alpha();
        let six_plus = |c: Coord| counts.at(self.donor + back.apply(c)) >= 6;

        let mut skipped: Vec<Coord> = Vec::new();
        let mut special: Option<Coord> = None;
        let rule = if seven_coben {
            for c in co_benefactor_offsets(d) {
                if counts.at(self.donor + c) >= 7 {
                    let canon = s.apply(c);
                    skipped.push(back.apply(Coord::new(-1, canon.y / 2)));
                }
            }
            RuleId::R2
        } else {
            let heavy: Vec<Coord> = BALL2
                .iter()
                .map(|&o| s.apply(o))
                .filter(|&c| matches!(position_class(c), Some(PositionClass::Y | PositionClass::Z)) && six_plus(c))
                .collect();
            if heavy.len() == 1 && position_class(heavy[0]) == Some(PositionClass::Y) {
                special = Some(back.apply(Coord::new(0, heavy[0].y)));
                RuleId::R1a
            } else {
                RuleId::R1b
            }
        };

        self.four_frames(rule);
        if let Some(sp) = special {
            let n = self.count(sp);
            if n != 5 {
                self.out.anomalies.push(Anomaly::Rule1aTargetNotFive {
                    donor: self.donor,
                    target: self.donor + sp,
                    count: n,
                });
            }
        }
        for o in BALL2 {
            if self.count(o) != 5 || skipped.contains(&o) {
                continue;
            }
            let amount = if Some(o) == special {
                a
            } else {
                match position_class(s.apply(o)).expect("ball offset") {
                    PositionClass::Z => a * 2,
                    PositionClass::Y => a * 3 / 2,
                    _ => a,
                }
            };
            self.give(o, amount, rule);
        }
    }
}

fn donate(cls: &Classification, donor: Coord, mode: Mode) -> Donation {
    let mut g = Giver { cls, donor, out: Donation { transfers: Vec::new(), anomalies: Vec::new() } };
    let role = cls.role(donor);
    let a = alpha();
    match mode {
        Mode::Simple => {
            if role.count >= 6 {
                for o in AXIS2 {
                    if g.count(o) == 4 {
                        g.give(o, ratio(1, 4), RuleId::Simple);
                    }
                }
            }
        }
        Mode::Full => match role.kind {
            RoleKind::FourBenefactorSixNoSevenCoben => g.four_benefactor_six(false),
            RoleKind::FourBenefactorSixWithSevenCoben => g.four_benefactor_six(true),
            RoleKind::FourBenefactorSevenPlus => {
                g.four_frames(RuleId::R3);
                g.by_distance(a * 3, a * 2, RuleId::R3, |_| false);
            }
            RoleKind::OnePoorBenefactor => {
                for o in BALL2 {
                    if cls.counts.is_one_poor(donor + o) {
                        g.give(o, a * 3, RuleId::R4);
                    }
                }
                g.by_distance(a * 2, a, RuleId::R4, |o| cls.counts.is_one_poor(donor + o));
            }
            RoleKind::TwoPoorBenefactor => {
                for o in BALL2 {
                    if cls.counts.is_two_poor(donor + o) {
                        g.give(o, a * 2, RuleId::R5);
                    }
                }
                g.by_distance(a * 2, a, RuleId::R5, |o| cls.counts.is_two_poor(donor + o));
            }
            RoleKind::PlainSix => g.by_distance(a * 2, a, RuleId::R6, |_| false),
            RoleKind::PlainSevenPlus => g.by_distance(a * 3, a * 2, RuleId::R7, |_| false),
            RoleKind::Deficient | RoleKind::FourFrame | RoleKind::FiveFrame => {}
        },
    }
    g.out.transfers.sort_by_key(|t| t.rule);
    g.out
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub reading: PovertyReading,
    /// Worker threads; the ledger is identical for every value.
    pub jobs: usize,
}

pub fn run_discharging(code: &TorusCode, mode: Mode) -> ChargeLedger {
    run_discharging_with(code, mode, Options::default())
}

pub fn run_discharging_with(code: &TorusCode, mode: Mode, options: Options) -> ChargeLedger {
    let classification = classify_with(code, options.reading);
    let jobs = options.jobs;
    let anchors: Vec<Coord> = classification.counts.anchors().collect();
    let donations = map_all(anchors, jobs, |a| donate(&classification, a, mode));

    let initial: Vec<Rational> = classification.counts.as_slice().iter().map(|&c| int(c as i64)).collect();
    let mut final_charge = initial.clone();
    let mut transfers = Vec::new();
    let mut anomalies = classification.anomalies.clone();
    for d in donations {
        for t in &d.transfers {
            final_charge[classification.counts.index(t.donor)] -= t.amount;
            final_charge[classification.counts.index(t.recipient)] += t.amount;
        }
        transfers.extend(d.transfers);
        anomalies.extend(d.anomalies);
    }
    ChargeLedger { mode, classification, initial, final_charge, transfers, anomalies }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub mode: Mode,
    pub min_charge: Rational,
    pub argmin_anchor: Coord,
    pub density_bound: Rational,
    pub threshold: Rational,
    pub pass: bool,
}

pub fn certify_bound(ledger: &ChargeLedger) -> Certificate {
    let (min_charge, argmin_anchor) = ledger.min_charge();
    let threshold = ledger.mode.threshold();
    Certificate {
        mode: ledger.mode,
        min_charge,
        argmin_anchor,
        density_bound: min_charge / 12,
        threshold,
        pass: min_charge >= threshold,
    }
}

/// Machine-readable summary of a discharging run.
#[derive(Clone, Debug, Serialize)]
pub struct DischargeReport {
    pub mode: Mode,
    pub reading: PovertyReading,
    pub width: usize,
    pub height: usize,
    pub valid: bool,
    pub density: RationalJson,
    pub role_histogram: std::collections::BTreeMap<String, usize>,
    pub min_charge: RationalJson,
    pub argmin_anchor: Coord,
    pub density_bound: RationalJson,
    pub pass: bool,
    pub n_transfers: usize,
    pub anomalies: Vec<Anomaly>,
}

impl DischargeReport {
    pub fn new(code: &TorusCode, ledger: &ChargeLedger) -> Self {
        let cert = certify_bound(ledger);
        DischargeReport {
            mode: ledger.mode,
            reading: ledger.classification.counts.reading(),
            width: ledger.width(),
            height: ledger.height(),
            valid: crate::conditions::is_valid(code),
            density: crate::conditions::density(code).into(),
            role_histogram: ledger.classification.histogram(),
            min_charge: cert.min_charge.into(),
            argmin_anchor: cert.argmin_anchor,
            density_bound: cert.density_bound.into(),
            pass: cert.pass,
            n_transfers: ledger.transfers.len(),
            anomalies: ledger.anomalies.clone(),
        }
    }
}
