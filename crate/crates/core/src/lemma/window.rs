//! Partially assigned rectangular windows of the king grid.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{Assignment, Cardinality, CellSet, Conflict, Propagator, MAX_CELLS};
use crate::coord::Coord;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellState {
    In,
    Out,
    Unknown,
}

impl CellState {
    pub fn symbol(self) -> char {
        match self {
            CellState::In => '#',
            CellState::Out => '.',
            CellState::Unknown => '?',
        }
    }

    pub fn from_symbol(c: char) -> Option<CellState> {
        match c {
            '#' | '1' => Some(CellState::In),
            '.' | '0' => Some(CellState::Out),
            '?' => Some(CellState::Unknown),
            _ => None,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WindowError {
    #[error("window {0}x{1} is empty or exceeds {MAX_CELLS} cells")]
    BadSize(usize, usize),
    #[error("cell {0} lies outside the window")]
    Outside(Coord),
    #[error("cell {0} is fixed both in and out")]
    Clash(Coord),
}

/// Every cell is In, Out or Unknown. Cells are indexed row-major from the
/// bottom-left `origin`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TriStateWindow {
    origin: Coord,
    width: usize,
    height: usize,
    asg: Assignment,
}

impl TriStateWindow {
    pub fn new(origin: Coord, width: usize, height: usize) -> Result<Self, WindowError> {
        if width == 0 || height == 0 || width * height > MAX_CELLS {
            return Err(WindowError::BadSize(width, height));
        }
        Ok(TriStateWindow { origin, width, height, asg: Assignment::default() })
    }

    pub fn origin(&self) -> Coord {
        self.origin
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn n_cells(&self) -> usize {
        self.width * self.height
    }

    pub fn contains(&self, p: Coord) -> bool {
        let d = p - self.origin;
        d.x >= 0 && d.y >= 0 && (d.x as usize) < self.width && (d.y as usize) < self.height
    }

    pub fn index(&self, p: Coord) -> Option<usize> {
        self.contains(p).then(|| {
            let d = p - self.origin;
            d.y as usize * self.width + d.x as usize
        })
    }

    pub fn coord(&self, i: usize) -> Coord {
        self.origin + Coord::new((i % self.width) as i32, (i / self.width) as i32)
    }

    pub fn cells(&self) -> impl Iterator<Item = Coord> + '_ {
        (0..self.n_cells()).map(|i| self.coord(i))
    }

    pub fn assignment(&self) -> &Assignment {
        &self.asg
    }

    pub fn with_assignment(&self, asg: Assignment) -> Self {
        TriStateWindow { asg, ..self.clone() }
    }

    pub fn get(&self, p: Coord) -> Option<CellState> {
        let i = self.index(p)?;
        Some(if self.asg.ins.contains(i) {
            CellState::In
        } else if self.asg.outs.contains(i) {
            CellState::Out
        } else {
            CellState::Unknown
        })
    }

    pub fn set(&mut self, p: Coord, state: CellState) -> Result<(), WindowError> {
        let i = self.index(p).ok_or(WindowError::Outside(p))?;
        let current = self.get(p).unwrap_or(CellState::Unknown);
        if current != CellState::Unknown && state != CellState::Unknown && current != state {
            return Err(WindowError::Clash(p));
        }
        self.asg.ins.remove(i);
        self.asg.outs.remove(i);
        match state {
            CellState::In => self.asg.ins.insert(i),
            CellState::Out => self.asg.outs.insert(i),
            CellState::Unknown => {}
        }
        Ok(())
    }

    pub fn is_complete(&self) -> bool {
        self.asg.decided().len() == self.n_cells()
    }

    /// Does the frame anchored at `anchor` lie entirely inside the window?
    pub fn is_interior(&self, anchor: Coord) -> bool {
        self.contains(anchor) && self.contains(anchor + Coord::new(3, 3))
    }

    /// Anchors of all interior frames, row-major.
    pub fn interior_frames(&self) -> Vec<Coord> {
        if self.width < 4 || self.height < 4 {
            return Vec::new();
        }
        let o = self.origin;
        (0..=(self.height - 4) as i32)
            .flat_map(|y| (0..=(self.width - 4) as i32).map(move |x| o + Coord::new(x, y)))
            .collect()
    }

    /// Bit mask of a frame's twelve cells (the frame must be interior).
    pub fn frame_mask(&self, anchor: Coord) -> CellSet {
        crate::frame::frame_cells(anchor).iter().filter_map(|&c| self.index(c)).collect()
    }

    /// The "at least one codeword" sets of the given frames, deduplicated,
    /// in a fixed order.
    pub fn condition_constraints(&self, anchors: &[Coord]) -> Vec<Cardinality> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &a in anchors {
            let f = crate::frame::Frame::new(a);
            let mut sets: Vec<Vec<Coord>> = vec![f.corners().to_vec()];
            sets.extend(f.side_triples().iter().map(|t| t.to_vec()));
            for s in sets {
                let mut idx: Vec<usize> = s.iter().filter_map(|&c| self.index(c)).collect();
                if idx.len() != s.len() {
                    continue;
                }
                idx.sort_unstable();
                if seen.insert(idx.clone()) {
                    out.push(Cardinality::at_least_one(idx.into_iter().collect()));
                }
            }
        }
        out
    }

    /// Unit propagation of the conditions of every interior frame.
    pub fn propagate(&self) -> Result<TriStateWindow, Conflict> {
        let prop = Propagator::new(self.n_cells(), self.condition_constraints(&self.interior_frames()));
        let mut asg = self.asg;
        prop.propagate(&mut asg)?;
        Ok(self.with_assignment(asg))
    }

    /// Do all interior frames meet Conditions 1 and 2? Unknown cells count
    /// as non-codewords.
    pub fn satisfies_conditions(&self) -> bool {
        let hit = |cells: &[Coord]| cells.iter().any(|&c| self.get(c) == Some(CellState::In));
        self.interior_frames().iter().all(|&a| {
            let f = crate::frame::Frame::new(a);
            hit(&f.corners()) && f.side_triples().iter().all(|t| hit(t))
        })
    }


    /// Rows from top to bottom using `#`, `.` and `?`.
    pub fn rows(&self) -> Vec<String> {
        (0..self.height as i32)
            .rev()
            .map(|y| {
                (0..self.width as i32)
                    .map(|x| self.get(self.origin + Coord::new(x, y)).unwrap().symbol())
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for TriStateWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "window {}x{} at {}", self.width, self.height, self.origin)?;
        for r in self.rows() {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}
