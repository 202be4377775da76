//! Exact rationals for densities and charges.

use serde::{Deserialize, Serialize};

pub type Rational = num_rational::Rational64;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// `{num, den, decimal}` rendering used in every JSON report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: i64,
    pub den: i64,
    pub decimal: String,
}

impl From<Rational> for RationalJson {
    fn from(r: Rational) -> Self {
        RationalJson { num: *r.numer(), den: *r.denom(), decimal: decimal(r, 6) }
    }
}

impl RationalJson {
    pub fn value(&self) -> Rational {
        Rational::new(self.num, self.den)
    }
}

/// Truncated decimal expansion with `places` digits.
pub fn decimal(r: Rational, places: usize) -> String {
    let neg = r < Rational::from_integer(0);
    let r = if neg { -r } else { r };
    let whole = r.to_integer();
    let mut frac = r - Rational::from_integer(whole);
    let mut s = format!("{}{}", if neg { "-" } else { "" }, whole);
    if places > 0 {
        s.push('.');
        for _ in 0..places {
            frac *= Rational::from_integer(10);
            let d = frac.to_integer();
            s.push(char::from(b'0' + d as u8));
            frac -= Rational::from_integer(d);
        }
    }
    s
}
