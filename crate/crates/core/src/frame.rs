//! The 12-cell frame: boundary ring of a 4×4 block, anchored at its
//! bottom-left corner.

use serde::Serialize;

use crate::coord::Coord;

/// Cell offsets of a frame, row-major with `y` ascending.
pub const FRAME_OFFSETS: [Coord; 12] = [
    Coord::new(0, 0),
    Coord::new(1, 0),
    Coord::new(2, 0),
    Coord::new(3, 0),
    Coord::new(0, 1),
    Coord::new(3, 1),
    Coord::new(0, 2),
    Coord::new(3, 2),
    Coord::new(0, 3),
    Coord::new(1, 3),
    Coord::new(2, 3),
    Coord::new(3, 3),
];

pub const CORNER_OFFSETS: [Coord; 4] =
    [Coord::new(0, 0), Coord::new(3, 0), Coord::new(0, 3), Coord::new(3, 3)];

/// Two windows of three consecutive cells on each of the four sides.
pub const SIDE_TRIPLE_OFFSETS: [[Coord; 3]; 8] = [
    [Coord::new(0, 0), Coord::new(1, 0), Coord::new(2, 0)],
    [Coord::new(1, 0), Coord::new(2, 0), Coord::new(3, 0)],
    [Coord::new(0, 3), Coord::new(1, 3), Coord::new(2, 3)],
    [Coord::new(1, 3), Coord::new(2, 3), Coord::new(3, 3)],
    [Coord::new(0, 0), Coord::new(0, 1), Coord::new(0, 2)],
    [Coord::new(0, 1), Coord::new(0, 2), Coord::new(0, 3)],
    [Coord::new(3, 0), Coord::new(3, 1), Coord::new(3, 2)],
    [Coord::new(3, 1), Coord::new(3, 2), Coord::new(3, 3)],
];

/// Frames at axis distance 2: where a 4-frame's benefactors sit.
pub const AXIS2: [Coord; 4] = [Coord::new(0, 2), Coord::new(0, -2), Coord::new(2, 0), Coord::new(-2, 0)];

const fn ring(r: i32) -> [Coord; 24] {
    // Fixed-size scratch; callers slice by the ring length.
    let mut out = [Coord::new(0, 0); 24];
    let mut n = 0;
    let mut y = -r;
    while y <= r {
        let mut x = -r;
        while x <= r {
            let ax = if x < 0 { -x } else { x };
            let ay = if y < 0 { -y } else { y };
            let d = if ax > ay { ax } else { ay };
            if d == r {
                out[n] = Coord::new(x, y);
                n += 1;
            }
            x += 1;
        }
        y += 1;
    }
    out
}

const RING1_RAW: [Coord; 24] = ring(1);
const RING2_RAW: [Coord; 24] = ring(2);

/// Frame offsets at Chebyshev distance exactly 1, row-major.
pub const RING1: [Coord; 8] = {
    let mut o = [Coord::new(0, 0); 8];
    let mut i = 0;
    while i < 8 {
        o[i] = RING1_RAW[i];
        i += 1;
    }
    o
};

/// Frame offsets at Chebyshev distance exactly 2, row-major.
pub const RING2: [Coord; 16] = {
    let mut o = [Coord::new(0, 0); 16];
    let mut i = 0;
    while i < 16 {
        o[i] = RING2_RAW[i];
        i += 1;
    }
    o
};

/// The 24 non-zero offsets of the 2-ball, row-major.
pub const BALL2: [Coord; 24] = {
    let mut o = [Coord::new(0, 0); 24];
    let mut n = 0;
    let mut y = -2;
    while y <= 2 {
        let mut x = -2;
        while x <= 2 {
            if x != 0 || y != 0 {
                o[n] = Coord::new(x, y);
                n += 1;
            }
            x += 1;
        }
        y += 1;
    }
    o
};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub struct Frame {
    pub anchor: Coord,
}

impl Frame {
    pub fn new(anchor: Coord) -> Self {
        Frame { anchor }
    }

    pub fn cells(&self) -> [Coord; 12] {
        frame_cells(self.anchor)
    }

    pub fn corners(&self) -> [Coord; 4] {
        CORNER_OFFSETS.map(|o| self.anchor + o)
    }

    pub fn side_triples(&self) -> [[Coord; 3]; 8] {
        SIDE_TRIPLE_OFFSETS.map(|t| t.map(|o| self.anchor + o))
    }

    pub fn translate(&self, by: Coord) -> Frame {
        Frame { anchor: self.anchor + by }
    }
}

pub fn frame_cells(anchor: Coord) -> [Coord; 12] {
    FRAME_OFFSETS.map(|o| anchor + o)
}

/// Codeword count of one frame and its charge excess `count - 5`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct FrameStats {
    pub frame: Frame,
    pub count: u8,
    pub excess: i8,
}

impl FrameStats {
    pub fn new(frame: Frame, count: u8) -> Self {
        FrameStats { frame, count, excess: count as i8 - 5 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn frame_at_origin_is_the_ring() {
        let cells: BTreeSet<Coord> = frame_cells(Coord::ORIGIN).into_iter().collect();
        let mut expect = BTreeSet::new();
        for x in 0..4 {
            for y in 0..4 {
                if !((1..=2).contains(&x) && (1..=2).contains(&y)) {
                    expect.insert(Coord::new(x, y));
                }
            }
        }
        assert_eq!(cells, expect);
        assert_eq!(cells.len(), 12);
    }

    #[test]
    fn translation_equivariance() {
        let a = Coord::new(5, -2);
        let moved: Vec<Coord> = frame_cells(Coord::ORIGIN).iter().map(|&c| c + a).collect();
        assert_eq!(moved, frame_cells(a).to_vec());
    }

    #[test]
    fn corners_and_triples_cover_the_frame() {
        let f = Frame::new(Coord::new(-3, 7));
        let mut union: BTreeSet<Coord> = f.corners().into_iter().collect();
        for t in f.side_triples() {
            union.extend(t);
        }
        let cells: BTreeSet<Coord> = f.cells().into_iter().collect();
        assert_eq!(union, cells);
        assert_eq!(f.side_triples().len(), 8);
        let distinct: BTreeSet<_> = f.side_triples().iter().map(|t| t.to_vec()).collect();
        assert_eq!(distinct.len(), 8);
    }

    #[test]
    fn rings_partition_the_ball() {
        assert!(RING1.iter().all(|c| c.norm() == 1));
        assert!(RING2.iter().all(|c| c.norm() == 2));
        let mut all: BTreeSet<Coord> = RING1.into_iter().collect();
        all.extend(RING2);
        assert_eq!(all, BALL2.into_iter().collect());
        assert_eq!(BALL2.len() + 1, 25);
    }

    #[test]
    fn stats_excess() {
        let s = FrameStats::new(Frame::new(Coord::ORIGIN), 7);
        assert_eq!(s.excess, 2);
    }
}
