//! Minimum valid codes on small tori by iterative deepening.
//!
//! For each target size `t`, starting at the lower bound of the empty
//! torus, a depth-first search looks for a valid code with at most `t`
//! codewords. Cells are branched in row-major order, non-codeword first,
//! with unit propagation of the local conditions and a global cap of `t`.
//! Every nonempty code has a translate containing `(0, 0)`, so that cell is
//! fixed as a codeword.

mod bound;

pub use bound::{lower_bound, SearchState};

use serde::Serialize;
use thiserror::Error;

use crate::bits::{Cardinality, CellSet, Propagator, MAX_CELLS};
use crate::conditions::{density, is_valid, SetKind};
use crate::coord::Coord;
use crate::parallel::{ordered_first, Explore, Stop};
use crate::rational::{ratio, Rational, RationalJson};
use crate::torus::TorusCode;

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;
const SPLIT_DEPTH: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("torus {0}x{1}: sides must be at least 4 and the area at most {MAX_CELLS}")]
    BadSize(usize, usize),
    #[error("code is not valid")]
    InvalidCode,
    #[error("valid code of density {0} is below 47/111")]
    BelowBound(Rational),
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Only look for codes of at most this size.
    pub ub: Option<usize>,
    pub jobs: usize,
    /// Total node limit over all targets.
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { ub: None, jobs: 1, budget: DEFAULT_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub width: usize,
    pub height: usize,
    /// Every valid code has at least this many codewords.
    pub lower: usize,
    /// Size of `witness`, when one was found.
    pub upper: Option<usize>,
    pub witness: Option<TorusCode>,
    /// `lower == upper` was established.
    pub optimal: bool,
    pub nodes: u64,
}

impl SearchResult {
    pub fn size(&self) -> Option<usize> {
        self.optimal.then_some(self.lower)
    }
}

struct Solver {
    width: usize,
    height: usize,
    prop: Propagator,
}

impl Solver {
    fn new(width: usize, height: usize, target: usize) -> Solver {
        let n = width * height;
        let mut sets = std::collections::BTreeSet::new();
        for y in 0..height as i32 {
            for x in 0..width as i32 {
                for kind in SetKind::ALL {
                    let idx: CellSet = kind
                        .cells(Coord::new(x, y))
                        .into_iter()
                        .map(|c| {
                            let c = c.wrap(width, height);
                            c.y as usize * width + c.x as usize
                        })
                        .collect();
                    sets.insert(idx);
                }
            }
        }
        let mut constraints: Vec<Cardinality> = sets.into_iter().map(Cardinality::at_least_one).collect();
        constraints.push(Cardinality { mask: CellSet::full(n), min: 0, max: target as u16 });
        Solver { width, height, prop: Propagator::new(n, constraints) }
    }

    fn n(&self) -> usize {
        self.width * self.height
    }

    fn bound(&self, a: &crate::bits::Assignment) -> usize {
        lower_bound(&SearchState { width: self.width, height: self.height, asg: *a })
    }

    fn code(&self, ins: &CellSet) -> TorusCode {
        let w = self.width;
        TorusCode::from_fn(self.width, self.height, |c| ins.contains(c.y as usize * w + c.x as usize))
            .expect("size checked")
    }

    fn root(&self, target: usize) -> Option<crate::bits::Assignment> {
        let mut a = crate::bits::Assignment::default();
        a.ins.insert(0);
        self.prop.propagate(&mut a).ok()?;
        (self.bound(&a) <= target).then_some(a)
    }

    fn children(&self, a: &crate::bits::Assignment, cell: usize, target: usize) -> Vec<crate::bits::Assignment> {
        let mut changed = CellSet::EMPTY;
        changed.insert(cell);
        let mut out = Vec::with_capacity(2);
        for inn in [false, true] {
            let mut c = *a;
            if inn {
                c.ins.insert(cell);
            } else {
                c.outs.insert(cell);
            }
            if self.prop.propagate_from(&mut c, &changed).is_ok() && self.bound(&c) <= target {
                out.push(c);
            }
        }
        out
    }

    fn next_cell(&self, a: &crate::bits::Assignment) -> Option<usize> {
        CellSet::full(self.n()).and_not(&a.decided()).first()
    }

    fn split(&self, a: crate::bits::Assignment, target: usize, depth: usize, nodes: &mut u64, out: &mut Vec<Open>) {
        *nodes += 1;
        match self.next_cell(&a) {
            None => out.push(Open::Done(a.ins)),
            Some(_) if depth == SPLIT_DEPTH => out.push(Open::Subtree(a)),
            Some(cell) => {
                for c in self.children(&a, cell, target) {
                    self.split(c, target, depth + 1, nodes, out);
                }
            }
        }
    }

    fn dfs(&self, a: crate::bits::Assignment, target: usize, nodes: &mut u64, budget: u64, stop: &Stop) -> Explore<CellSet> {
        *nodes += 1;
        if *nodes > budget || stop.requested() {
            return Explore::OutOfBudget;
        }
        let Some(cell) = self.next_cell(&a) else { return Explore::Found(a.ins) };
        for c in self.children(&a, cell, target) {
            match self.dfs(c, target, nodes, budget, stop) {
                Explore::Exhausted => {}
                other => return other,
            }
        }
        Explore::Exhausted
    }

    /// A valid code with at most `target` codewords, if any.
    fn feasible(&self, target: usize, jobs: usize, budget: u64, nodes: &mut u64) -> Explore<TorusCode> {
        let Some(root) = self.root(target) else { return Explore::Exhausted };
        let mut items = Vec::new();
        self.split(root, target, 0, nodes, &mut items);
        let remaining = budget.saturating_sub(*nodes);
        let results = ordered_first(items, jobs, |item, stop| match item {
            Open::Done(ins) => (Explore::Found(ins), 0),
            Open::Subtree(a) => {
                let mut n = 0;
                let e = self.dfs(a, target, &mut n, remaining, stop);
                (e, n)
            }
        });
        let mut out_of_budget = false;
        for (e, n) in results {
            *nodes += n;
            match e {
                Explore::Found(ins) => return Explore::Found(self.code(&ins)),
                Explore::OutOfBudget => out_of_budget = true,
                Explore::Exhausted => {}
            }
        }
        if out_of_budget || *nodes > budget {
            Explore::OutOfBudget
        } else {
            Explore::Exhausted
        }
    }
}

enum Open {
    Done(CellSet),
    Subtree(crate::bits::Assignment),
}

/// Minimum number of codewords of a valid code on the `width` x `height`
/// torus.
pub fn min_code_size(width: usize, height: usize, options: SearchOptions) -> Result<SearchResult, SearchError> {
    if width < 4 || height < 4 || width * height > MAX_CELLS {
        return Err(SearchError::BadSize(width, height));
    }
    let cap = options.ub.unwrap_or(width * height).min(width * height);
    let mut lower = lower_bound(&SearchState::new(width, height));
    let mut nodes = 0;
    let mut result = SearchResult { width, height, lower, upper: None, witness: None, optimal: false, nodes };
    let mut target = lower;
    while target <= cap {
        let solver = Solver::new(width, height, target);
        match solver.feasible(target, options.jobs.max(1), options.budget, &mut nodes) {
            Explore::Found(code) => {
                debug_assert!(is_valid(&code));
                result.upper = Some(code.len());
                result.optimal = code.len() == lower;
                result.witness = Some(code);
                break;
            }
            Explore::Exhausted => {
                lower = target + 1;
            }
            Explore::OutOfBudget => break,
        }
        target += 1;
    }
    result.lower = lower;
    result.nodes = nodes;
    Ok(result)
}

/// The construction's density 3/7 and the proven lower bound 47/111.
pub fn density_lower_bound() -> Rational {
    ratio(47, 111)
}

pub fn construction_density() -> Rational {
    ratio(3, 7)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DensityBoundsReport {
    pub density: RationalJson,
    pub lower_bound: RationalJson,
    pub construction: RationalJson,
    /// density - 47/111
    pub above_lower: RationalJson,
    /// 3/7 - density; negative when the code is denser than the construction.
    pub gap_to_construction: RationalJson,
    /// 3/7 - 47/111
    pub bound_gap: RationalJson,
}

/// Compare a valid code's density with 47/111 and 3/7. A valid code below
/// 47/111 would contradict the theorem, so it is reported as an error.
pub fn check_density_bounds(code: &TorusCode) -> Result<DensityBoundsReport, SearchError> {
    if !is_valid(code) {
        return Err(SearchError::InvalidCode);
    }
    let d = density(code);
    if d < density_lower_bound() {
        return Err(SearchError::BelowBound(d));
    }
    Ok(DensityBoundsReport {
        density: d.into(),
        lower_bound: density_lower_bound().into(),
        construction: construction_density().into(),
        above_lower: (d - density_lower_bound()).into(),
        gap_to_construction: (construction_density() - d).into(),
        bound_gap: (construction_density() - density_lower_bound()).into(),
    })
}
