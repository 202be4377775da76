use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A cell of the king grid: `x` grows rightward, `y` upward.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct Coord {
    pub x: i32,
    pub y: i32,
}

impl Coord {
    pub const ORIGIN: Coord = Coord { x: 0, y: 0 };

    pub const fn new(x: i32, y: i32) -> Self {
        Coord { x, y }
    }

    /// King-move distance.
    pub fn chebyshev(self, other: Coord) -> i32 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }

    pub fn norm(self) -> i32 {
        self.x.abs().max(self.y.abs())
    }

    /// Reduce onto a `width × height` torus.
    pub fn wrap(self, width: usize, height: usize) -> Coord {
        Coord {
            x: self.x.rem_euclid(width as i32),
            y: self.y.rem_euclid(height as i32),
        }
    }

    /// Parse a position of the 8×8 lettered grid around a frame: row letter
    /// `A`..`H` (top to bottom) then column letter `a`..`h` (left to right).
    /// `Fc` is the frame's anchor, `Cc` its top-left corner.
    pub fn from_letters(s: &str) -> Option<Coord> {
        let b = s.as_bytes();
        if b.len() != 2 || !(b'A'..=b'H').contains(&b[0]) || !(b'a'..=b'h').contains(&b[1]) {
            return None;
        }
        Some(Coord { x: (b[1] - b'a') as i32 - 2, y: 5 - (b[0] - b'A') as i32 })
    }

    pub fn to_letters(self) -> Option<String> {
        if !(-2..=5).contains(&self.x) || !(-2..=5).contains(&self.y) {
            return None;
        }
        let row = (b'A' + (5 - self.y) as u8) as char;
        let col = (b'a' + (self.x + 2) as u8) as char;
        Some(format!("{row}{col}"))
    }
}

impl Add for Coord {
    type Output = Coord;
    fn add(self, o: Coord) -> Coord {
        Coord { x: self.x + o.x, y: self.y + o.y }
    }
}

impl Sub for Coord {
    type Output = Coord;
    fn sub(self, o: Coord) -> Coord {
        Coord { x: self.x - o.x, y: self.y - o.y }
    }
}

impl Neg for Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        Coord { x: -self.x, y: -self.y }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(i32, i32)> for Coord {
    fn from((x, y): (i32, i32)) -> Self {
        Coord { x, y }
    }
}

/// One of the eight symmetries of the square, as an integer matrix acting on
/// column vectors: `(x, y) -> (a·x + b·y, c·x + d·y)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Symmetry {
    a: i32,
    b: i32,
    c: i32,
    d: i32,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry { a: 1, b: 0, c: 0, d: 1 };

    /// Identity first, then the rotations, then the reflections.
    pub const ALL: [Symmetry; 8] = [
        Symmetry { a: 1, b: 0, c: 0, d: 1 },
        Symmetry { a: 0, b: -1, c: 1, d: 0 },
        Symmetry { a: -1, b: 0, c: 0, d: -1 },
        Symmetry { a: 0, b: 1, c: -1, d: 0 },
        Symmetry { a: -1, b: 0, c: 0, d: 1 },
        Symmetry { a: 1, b: 0, c: 0, d: -1 },
        Symmetry { a: 0, b: 1, c: 1, d: 0 },
        Symmetry { a: 0, b: -1, c: -1, d: 0 },
    ];

    pub fn name(&self) -> &'static str {
        match (self.a, self.b, self.c, self.d) {
            (1, 0, 0, 1) => "id",
            (0, -1, 1, 0) => "rot90",
            (-1, 0, 0, -1) => "rot180",
            (0, 1, -1, 0) => "rot270",
            (-1, 0, 0, 1) => "flip_x",
            (1, 0, 0, -1) => "flip_y",
            (0, 1, 1, 0) => "transpose",
            _ => "antitranspose",
        }
    }

    pub fn apply(&self, p: Coord) -> Coord {
        Coord { x: self.a * p.x + self.b * p.y, y: self.c * p.x + self.d * p.y }
    }

    pub fn inverse(&self) -> Symmetry {
        // Orthogonal, so the inverse is the transpose.
        Symmetry { a: self.a, b: self.c, c: self.b, d: self.d }
    }

    /// Image of the axis-aligned box with lower-left `origin` and the given
    /// size, as (new lower-left, new width, new height).
    pub fn apply_box(&self, origin: Coord, width: i32, height: i32) -> (Coord, i32, i32) {
        let corners = [
            origin,
            origin + Coord::new(width - 1, 0),
            origin + Coord::new(0, height - 1),
            origin + Coord::new(width - 1, height - 1),
        ]
        .map(|p| self.apply(p));
        let min_x = corners.iter().map(|p| p.x).min().unwrap();
        let min_y = corners.iter().map(|p| p.y).min().unwrap();
        let max_x = corners.iter().map(|p| p.x).max().unwrap();
        let max_y = corners.iter().map(|p| p.y).max().unwrap();
        (Coord::new(min_x, min_y), max_x - min_x + 1, max_y - min_y + 1)
    }

    /// Anchor of the image of the frame anchored at `anchor`.
    pub fn apply_frame(&self, anchor: Coord) -> Coord {
        self.apply_box(anchor, 4, 4).0
    }
}
