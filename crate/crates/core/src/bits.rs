//! Fixed-capacity cell bitsets and a cardinality-constraint propagator.
//!
//! Both the lemma windows and the torus search compile their local
//! conditions to the same form: a set of cells that must contain between
//! `min` and `max` codewords.

use std::ops::{BitAnd, BitOr, BitOrAssign};

/// Largest number of cells a [`CellSet`] can index.
pub const MAX_CELLS: usize = 256;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug, PartialOrd, Ord)]
pub struct CellSet([u64; 4]);

impl CellSet {
    pub const EMPTY: CellSet = CellSet([0; 4]);

    pub fn full(n: usize) -> CellSet {
        let mut s = CellSet::EMPTY;
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0[i >> 6] &= !(1 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0 == [0; 4]
    }

    #[inline]
    pub fn and_not(&self, other: &CellSet) -> CellSet {
        CellSet([
            self.0[0] & !other.0[0],
            self.0[1] & !other.0[1],
            self.0[2] & !other.0[2],
            self.0[3] & !other.0[3],
        ])
    }

    #[inline]
    pub fn intersects(&self, other: &CellSet) -> bool {
        !(*self & *other).is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + b)
                }
            })
        })
    }
}

impl BitAnd for CellSet {
    type Output = CellSet;
    #[inline]
    fn bitand(self, o: CellSet) -> CellSet {
        CellSet([self.0[0] & o.0[0], self.0[1] & o.0[1], self.0[2] & o.0[2], self.0[3] & o.0[3]])
    }
}

impl BitOr for CellSet {
    type Output = CellSet;
    #[inline]
    fn bitor(self, o: CellSet) -> CellSet {
        CellSet([self.0[0] | o.0[0], self.0[1] | o.0[1], self.0[2] | o.0[2], self.0[3] | o.0[3]])
    }
}

impl BitOrAssign for CellSet {
    #[inline]
    fn bitor_assign(&mut self, o: CellSet) {
        *self = *self | o;
    }
}

impl FromIterator<usize> for CellSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = CellSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

/// Partial assignment: every cell is In, Out, or neither (unknown).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct Assignment {
    pub ins: CellSet,
    pub outs: CellSet,
}

impl Assignment {
    #[inline]
    pub fn decided(&self) -> CellSet {
        self.ins | self.outs
    }

    #[inline]
    pub fn unknown_in(&self, mask: &CellSet) -> CellSet {
        mask.and_not(&self.decided())
    }
}

/// `min <= |mask ∩ In| <= max`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Cardinality {
    pub mask: CellSet,
    pub min: u16,
    pub max: u16,
}

impl Cardinality {
    pub fn at_least_one(mask: CellSet) -> Self {
        Cardinality { mask, min: 1, max: u16::MAX }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Conflict;

/// Unit propagation over cardinality constraints.
#[derive(Clone, Debug)]
pub struct Propagator {
    n_cells: usize,
    constraints: Vec<Cardinality>,
    by_cell: Vec<Vec<u32>>,
}

impl Propagator {
    pub fn new(n_cells: usize, constraints: Vec<Cardinality>) -> Self {
        assert!(n_cells <= MAX_CELLS);
        let mut by_cell = vec![Vec::new(); n_cells];
        for (k, c) in constraints.iter().enumerate() {
            for i in c.mask.iter() {
                by_cell[i].push(k as u32);
            }
        }
        Propagator { n_cells, constraints, by_cell }
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn constraints(&self) -> &[Cardinality] {
        &self.constraints
    }

    pub fn constraints_of(&self, cell: usize) -> &[u32] {
        &self.by_cell[cell]
    }

    /// Full fixpoint, starting from every constraint.
    pub fn propagate(&self, a: &mut Assignment) -> Result<(), Conflict> {
        let mut work: Vec<u32> = (0..self.constraints.len() as u32).collect();
        self.run(a, &mut work)
    }

    /// Fixpoint after the cells in `changed` were assigned.
    pub fn propagate_from(&self, a: &mut Assignment, changed: &CellSet) -> Result<(), Conflict> {
        let mut work = Vec::new();
        for i in changed.iter() {
            work.extend_from_slice(&self.by_cell[i]);
        }
        self.run(a, &mut work)
    }

    fn run(&self, a: &mut Assignment, work: &mut Vec<u32>) -> Result<(), Conflict> {
        while let Some(k) = work.pop() {
            let c = &self.constraints[k as usize];
            let i = (a.ins & c.mask).len();
            let unk = a.unknown_in(&c.mask);
            let u = unk.len();
            if i > c.max as usize || i + u < c.min as usize {
                return Err(Conflict);
            }
            if u == 0 {
                continue;
            }
            if i == c.max as usize {
                a.outs |= unk;
            } else if i + u == c.min as usize {
                a.ins |= unk;
            } else {
                continue;
            }
            for cell in unk.iter() {
                work.extend_from_slice(&self.by_cell[cell]);
            }
        }
        Ok(())
    }

    /// True when every constraint is met by a complete assignment.
    pub fn satisfied_by(&self, ins: &CellSet) -> bool {
        self.constraints.iter().all(|c| {
            let i = (*ins & c.mask).len();
            i >= c.min as usize && i <= c.max as usize
        })
    }
}
