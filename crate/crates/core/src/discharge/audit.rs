//! Exact re-evaluation of the worst-case outgo sums behind the rules.

use serde::Serialize;

use super::engine::{alpha, four_frame_gift};
use crate::rational::{int, ratio, Rational, RationalJson};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    Equals,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditItem {
    pub id: &'static str,
    pub formula: &'static str,
    pub value: RationalJson,
    pub relation: Relation,
    pub bound: RationalJson,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub items: Vec<AuditItem>,
    pub all_hold: bool,
}

impl AuditReport {
    pub fn get(&self, id: &str) -> Option<&AuditItem> {
        self.items.iter().find(|i| i.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditItem> {
        self.items.iter().filter(|i| !i.holds)
    }
}

fn item(id: &'static str, formula: &'static str, value: Rational, relation: Relation, bound: Rational) -> AuditItem {
    let holds = match relation {
        Relation::AtMost => value <= bound,
        Relation::Equals => value == bound,
    };
    AuditItem { id, formula, value: value.into(), relation, bound: bound.into(), holds }
}

pub fn audit_rule_arithmetic() -> AuditReport {
    use Relation::*;
    let a = alpha();
    let g = four_frame_gift();
    let half3 = a * 3 / 2;
    let seven_budget = int(2) - a * 3;
    let six_budget = int(1) - a * 3;
    let rule1_full = g + a * 10 + half3 * 2 + a * 14;

    let items = vec![
        item("four_frame_gift", "(3a+1)/4", g, Equals, ratio(10, 37)),
        item("seven_budget", "2-3a", seven_budget, Equals, ratio(71, 37)),
        item("six_budget", "1-3a", six_budget, Equals, ratio(34, 37)),
        item("seven_two_four_frames", "2g + 8*3a + 11*2a", g * 2 + a * 24 + a * 22, AtMost, seven_budget),
        item("seven_one_four_frame", "g + 8*3a + 13*2a", g + a * 24 + a * 26, AtMost, seven_budget),
        item("seven_not_benefactor", "8*3a + 16*2a", a * 24 + a * 32, AtMost, seven_budget),
        item("six_rule1_no_extra", "g + 5*2a + 2*(3a/2) + 14a", rule1_full, Equals, int(1)),
        item("six_rule1a", "1 - (3a/2 + a) - a", rule1_full - half3 - a - a, AtMost, six_budget),
        item("six_rule1b_two_y", "1 - 2*(3a/2)", rule1_full - half3 * 2, AtMost, six_budget),
        item("six_rule1b_two_z", "1 - 2*2a", rule1_full - a * 4, AtMost, six_budget),
        item("six_rule1b_z_y", "1 - (2a + 3a/2)", rule1_full - a * 2 - half3, AtMost, six_budget),
        item("six_rule1b_z_x", "1 - (2a + a)", rule1_full - a * 3, AtMost, six_budget),
        item("six_rule1b_three_extra", "1 - 3a", rule1_full - a * 3, AtMost, six_budget),
        item("six_rule2", "g + 5*2a + 3a/2 + 12a", g + a * 10 + half3 + a * 12, AtMost, six_budget),
        item("six_one_poor_benefactor", "2*3a + 6*2a + 14a", a * 6 + a * 12 + a * 14, AtMost, six_budget),
        item("six_two_poor_benefactor", "2a + 8*2a + 11a", a * 2 + a * 16 + a * 11, AtMost, six_budget),
        item("six_not_benefactor", "8*2a + 16a", a * 16 + a * 16, AtMost, six_budget),
        item("four_frame_receives", "4 + 4g", int(4) + g * 4, Equals, int(5) + a * 3),
        item("final_charge", "5+3a", int(5) + a * 3, Equals, ratio(188, 37)),
        item("density_bound", "(5+3a)/12", (int(5) + a * 3) / 12, Equals, ratio(47, 111)),
    ];
    let all_hold = items.iter().all(|i| i.holds);
    AuditReport { items, all_hold }
}
