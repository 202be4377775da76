//! Exhaustive counterexample search over a scenario's window.
//!
//! The conditions only ask for "at least one codeword" in various sets, so
//! they are monotone: a partial assignment with no all-Out set can always
//! be completed by making every undecided cell a codeword. The search
//! therefore branches only on cells that some hypothesis or conclusion atom
//! reads, and declares a counterexample as soon as the hypothesis is true
//! and the conclusion false on every completion.

use std::time::Instant;

use serde::Serialize;

use super::expr::{Expr, Node, Tri};
use super::scenario::{Scenario, ScenarioError};
use super::window::TriStateWindow;
use crate::bits::{Assignment, Cardinality, CellSet, Propagator};
use crate::coord::Coord;
use crate::parallel::{map_all, ordered_first, Explore, Stop};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Depth of the fixed top-level split handed to workers. It does not
/// depend on the number of workers, so neither do the results.
const SPLIT_DEPTH: usize = 7;

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    /// Node limit per scenario variant.
    pub budget: u64,
    pub jobs: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: DEFAULT_BUDGET, jobs: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    /// A complete window meeting every enforced condition and the
    /// hypothesis while violating the conclusion.
    Counterexample(TriStateWindow),
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Counterexample(_) => "counterexample",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    pub nodes: u64,
    pub elapsed_ms: u128,
}

/// A scenario lowered onto its window.
#[derive(Clone)]
pub struct Compiled {
    window: TriStateWindow,
    conditions: Vec<Cardinality>,
    hypothesis: Vec<Node>,
    /// Conjuncts of the conclusion, each searched on its own.
    obligations: Vec<Node>,
}

fn flatten(e: &Expr, out: &mut Vec<Expr>) {
    match e {
        Expr::And { args } => args.iter().for_each(|a| flatten(a, out)),
        Expr::True => {}
        _ => out.push(e.clone()),
    }
}

/// Top-level conjuncts, looking through negated disjunctions.
fn conjuncts(n: Node, out: &mut Vec<Node>) {
    match n {
        Node::And(v) => v.into_iter().for_each(|x| conjuncts(x, out)),
        Node::Not(x) => match *x {
            Node::Or(v) => v.into_iter().for_each(|y| conjuncts(Node::Not(Box::new(y)), out)),
            Node::Not(y) => conjuncts(*y, out),
            other => out.push(Node::Not(Box::new(other))),
        },
        Node::Const(true) => {}
        other => out.push(other),
    }
}

impl Compiled {
    pub fn new(s: &Scenario) -> Result<Compiled, ScenarioError> {
        let mut window = s.build_window()?;
        let conditions = window.condition_constraints(&s.enforced_frames(&window));
        let mut hyp = Vec::new();
        s.hypothesis.iter().for_each(|e| flatten(e, &mut hyp));
        for e in &hyp {
            if let Expr::Cell { at, state } = e {
                window.set(at.0, *state).map_err(|source| ScenarioError::Window { id: s.id.clone(), source })?;
            }
        }
        let hypothesis: Vec<Node> = hyp.iter().map(|e| e.compile(&window)).collect();
        let mut obligations = Vec::new();
        conjuncts(s.conclusion.compile(&window), &mut obligations);
        Ok(Compiled { window, conditions, hypothesis, obligations })
    }

    pub fn window(&self) -> &TriStateWindow {
        &self.window
    }

    pub fn obligations(&self) -> usize {
        self.obligations.len()
    }

    /// The same problem with every cell fixed that takes one value in all
    /// solutions surveyed by `seen`, and the obligations simplified and
    /// split again under those cells.
    fn with_forced(&self, seen: &Seen) -> Compiled {
        let n = self.window.n_cells();
        let a = self.window.assignment();
        let ins = a.ins | seen.ins.and_not(&seen.outs) & CellSet::full(n);
        let outs = a.outs | seen.outs.and_not(&seen.ins) & CellSet::full(n);
        let a = Assignment { ins, outs };
        let mut obligations = Vec::new();
        for g in &self.obligations {
            match g.simplify(&a) {
                Node::Const(true) => {}
                other => conjuncts(other, &mut obligations),
            }
        }
        Compiled { window: self.window.with_assignment(a), obligations, ..self.clone() }
    }

    fn problem(&self, goal: Option<&Node>) -> Problem<'_> {
        let mut constraints = self.conditions.clone();
        for h in &self.hypothesis {
            h.implied(true, &mut constraints);
        }
        if let Some(g) = goal {
            g.implied(false, &mut constraints);
        }
        let relevant = self.hypothesis.iter().fold(goal.map_or(CellSet::EMPTY, |g| g.cells()), |acc, n| acc | n.cells());
        Problem {
            c: self,
            prop: Propagator::new(self.window.n_cells(), constraints),
            n_conditions: self.conditions.len(),
            goal: goal.cloned(),
            relevant,
        }
    }
}

/// The search space for one obligation, or for enumeration when `goal`
/// is absent.
struct Problem<'a> {
    c: &'a Compiled,
    prop: Propagator,
    n_conditions: usize,
    goal: Option<Node>,
    relevant: CellSet,
}

impl Problem<'_> {
    fn hypothesis(&self, a: &Assignment) -> Tri {
        let mut out = Tri::True;
        for h in &self.c.hypothesis {
            match h.eval(a) {
                Tri::False => return Tri::False,
                Tri::Unknown => out = Tri::Unknown,
                Tri::True => {}
            }
        }
        out
    }

    /// Undecided relevant cell sitting in the most condition sets that have
    /// no codeword and exactly two undecided cells; ties go to the lowest
    /// index.
    fn branch_cell(&self, a: &Assignment) -> Option<usize> {
        let candidates = self.relevant.and_not(&a.decided());
        let mut best: Option<(usize, usize)> = None;
        for cell in candidates.iter() {
            let score = self
                .prop
                .constraints_of(cell)
                .iter()
                .filter(|&&k| (k as usize) < self.n_conditions)
                .filter(|&&k| {
                    let m = &self.prop.constraints()[k as usize].mask;
                    !m.intersects(&a.ins) && a.unknown_in(m).len() == 2
                })
                .count();
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, cell));
            }
        }
        best.map(|(_, c)| c)
    }

    /// Completion of a counterexample node: every undecided cell becomes a
    /// codeword.
    fn complete(&self, a: &Assignment) -> TriStateWindow {
        let n = self.c.window.n_cells();
        let ins = a.ins | CellSet::full(n).and_not(&a.decided());
        let full = Assignment { ins, outs: CellSet::full(n).and_not(&ins) };
        assert!(self.prop.satisfied_by(&full.ins), "completion breaks a constraint");
        assert_eq!(self.hypothesis(&full), Tri::True, "completion breaks the hypothesis");
        if let Some(g) = &self.goal {
            assert_eq!(g.eval(&full), Tri::False, "completion satisfies the conclusion");
        }
        self.c.window.with_assignment(full)
    }

    fn root(&self) -> Option<Assignment> {
        let mut a = *self.c.window.assignment();
        self.prop.propagate(&mut a).ok()?;
        Some(a)
    }

    fn step(&self, a: Assignment) -> Step {
        let h = self.hypothesis(&a);
        if h == Tri::False {
            return Step::Pruned;
        }
        if let Some(g) = &self.goal {
            let c = g.eval(&a);
            if c == Tri::True {
                return Step::Pruned;
            }
            if h == Tri::True && c == Tri::False {
                return Step::Hit(a);
            }
        }
        match self.branch_cell(&a) {
            Some(cell) => Step::Branch(a, cell),
            None => {
                debug_assert!(h == Tri::True);
                Step::Hit(a)
            }
        }
    }

    fn children(&self, a: &Assignment, cell: usize) -> [Option<Assignment>; 2] {
        let mut changed = CellSet::EMPTY;
        changed.insert(cell);
        let mut out = *a;
        out.outs.insert(cell);
        let mut inn = *a;
        inn.ins.insert(cell);
        [out, inn].map(|mut c| self.prop.propagate_from(&mut c, &changed).ok().map(|_| c))
    }

    /// Open subtrees after `SPLIT_DEPTH` levels, in depth-first order,
    /// with what was settled on the way.
    fn split(&self, a: Assignment, depth: usize, nodes: &mut u64, items: &mut Vec<Item>) {
        if depth == SPLIT_DEPTH {
            items.push(Item::Open(a));
            return;
        }
        *nodes += 1;
        match self.step(a) {
            Step::Pruned => {}
            Step::Hit(h) => items.push(Item::Settled(Some(h))),
            Step::Branch(a, cell) => {
                for c in self.children(&a, cell).into_iter().flatten() {
                    self.split(c, depth + 1, nodes, items);
                }
            }
        }
    }

    fn items(&self) -> (Vec<Item>, u64) {
        let mut nodes = 0;
        let mut items = Vec::new();
        match self.root() {
            Some(root) => self.split(root, 0, &mut nodes, &mut items),
            None => nodes = 1,
        }
        (items, nodes)
    }
}

enum Step {
    Pruned,
    Hit(Assignment),
    Branch(Assignment, usize),
}

enum Item {
    Settled(Option<Assignment>),
    Open(Assignment),
}

struct Refuter<'a> {
    p: &'a Problem<'a>,
    nodes: u64,
    budget: u64,
}

impl Refuter<'_> {
    fn dfs(&mut self, a: Assignment, stop: &Stop) -> Explore<Assignment> {
        self.nodes += 1;
        if self.nodes > self.budget || stop.requested() {
            return Explore::OutOfBudget;
        }
        match self.p.step(a) {
            Step::Pruned => Explore::Exhausted,
            Step::Hit(h) => Explore::Found(h),
            Step::Branch(a, cell) => {
                for c in self.p.children(&a, cell).into_iter().flatten() {
                    match self.dfs(c, stop) {
                        Explore::Exhausted => {}
                        other => return other,
                    }
                }
                Explore::Exhausted
            }
        }
    }
}

/// Search one scenario exactly as written, ignoring its `symmetries` flag.
pub fn search(s: &Scenario, config: SearchConfig) -> Result<SearchOutcome, ScenarioError> {
    let c = Compiled::new(s)?;
    Ok(search_compiled(&c, config))
}

/// Obligations are searched in order; the first counterexample ends the
/// search. The budget applies to the total node count. Cells forced by the
/// conditions and the hypothesis are fixed first.
pub fn search_compiled(c: &Compiled, config: SearchConfig) -> SearchOutcome {
    let start = Instant::now();
    let seen = survey(c, SearchConfig { budget: config.budget / 8, ..config });
    let mut nodes = seen.nodes;
    if !seen.out_of_budget && !seen.any {
        return SearchOutcome { verdict: Verdict::Verified, nodes, elapsed_ms: start.elapsed().as_millis() };
    }
    let strengthened;
    let c = if seen.out_of_budget {
        c
    } else {
        strengthened = c.with_forced(&seen);
        &strengthened
    };
    let mut inconclusive = false;
    for goal in &c.obligations {
        let p = c.problem(Some(goal));
        let (items, split_nodes) = p.items();
        nodes += split_nodes;
        let budget = config.budget.saturating_sub(nodes);
        let results = ordered_first(items, config.jobs, |item, stop| match item {
            Item::Settled(Some(h)) => (Explore::Found(h), 0),
            Item::Settled(None) => (Explore::Exhausted, 0),
            Item::Open(a) => {
                let mut r = Refuter { p: &p, nodes: 0, budget };
                let e = r.dfs(a, stop);
                (e, r.nodes)
            }
        });
        for (e, n) in results {
            nodes += n;
            match e {
                Explore::Found(h) => {
                    let verdict = Verdict::Counterexample(p.complete(&h));
                    return SearchOutcome { verdict, nodes, elapsed_ms: start.elapsed().as_millis() };
                }
                Explore::OutOfBudget => inconclusive = true,
                Explore::Exhausted => {}
            }
        }
        if nodes > config.budget {
            inconclusive = true;
        }
        if inconclusive {
            break;
        }
    }
    let verdict = if inconclusive { Verdict::Inconclusive } else { Verdict::Verified };
    SearchOutcome { verdict, nodes, elapsed_ms: start.elapsed().as_millis() }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Forced {
    In,
    Out,
    Free,
}

impl Forced {
    pub fn symbol(self) -> char {
        match self {
            Forced::In => '#',
            Forced::Out => '.',
            Forced::Free => '*',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcedMap {
    pub origin: Coord,
    pub width: usize,
    pub height: usize,
    pub cells: Vec<Forced>,
}

impl ForcedMap {
    pub fn get(&self, p: Coord) -> Option<Forced> {
        let d = p - self.origin;
        if d.x < 0 || d.y < 0 || d.x as usize >= self.width || d.y as usize >= self.height {
            return None;
        }
        Some(self.cells[d.y as usize * self.width + d.x as usize])
    }

    /// Rows from the top using `#` forced in, `.` forced out, `*` free.
    pub fn rows(&self) -> Vec<String> {
        (0..self.height)
            .rev()
            .map(|y| (0..self.width).map(|x| self.cells[y * self.width + x].symbol()).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForcedOutcome {
    Forced(ForcedMap),
    /// No assignment meets the conditions and the hypothesis.
    Unsat,
    Inconclusive,
}

#[derive(Default)]
struct Seen {
    ins: CellSet,
    outs: CellSet,
    any: bool,
    nodes: u64,
    out_of_budget: bool,
}

impl Seen {
    fn merge(&mut self, o: Seen) {
        self.ins |= o.ins;
        self.outs |= o.outs;
        self.any |= o.any;
        self.nodes += o.nodes;
        self.out_of_budget |= o.out_of_budget;
    }

    /// Every undecided cell of a propagated node can go either way: all of
    /// them In completes it, and any single one Out still leaves each set
    /// with another undecided or In cell.
    fn record(&mut self, a: &Assignment, n: usize) {
        let free = CellSet::full(n).and_not(&a.decided());
        self.ins |= a.ins | free;
        self.outs |= a.outs | free;
        self.any = true;
    }
}

fn enumerate(p: &Problem, a: Assignment, budget: u64, seen: &mut Seen) {
    seen.nodes += 1;
    if seen.nodes > budget {
        seen.out_of_budget = true;
        return;
    }
    match p.step(a) {
        Step::Pruned => {}
        Step::Hit(h) => seen.record(&h, p.c.window.n_cells()),
        Step::Branch(a, cell) => {
            for c in p.children(&a, cell).into_iter().flatten() {
                enumerate(p, c, budget, seen);
                if seen.out_of_budget {
                    return;
                }
            }
        }
    }
}

/// Every value each cell takes over the assignments meeting the enforced
/// conditions and the hypothesis.
fn survey(c: &Compiled, config: SearchConfig) -> Seen {
    let p = c.problem(None);
    let n = c.window.n_cells();
    let (items, split_nodes) = p.items();
    let mut seen = Seen { nodes: split_nodes, ..Seen::default() };
    let parts = map_all(items, config.jobs, |item| {
        let mut part = Seen::default();
        match item {
            Item::Settled(Some(h)) => part.record(&h, n),
            Item::Settled(None) => {}
            Item::Open(a) => enumerate(&p, a, config.budget, &mut part),
        }
        part
    });
    for part in parts {
        seen.merge(part);
    }
    seen.out_of_budget |= seen.nodes > config.budget;
    seen
}

/// Which cells take the same value in every window assignment meeting
/// the enforced conditions and the hypothesis.
pub fn forced_cells(s: &Scenario, config: SearchConfig) -> Result<ForcedOutcome, ScenarioError> {
    let c = Compiled::new(s)?;
    let n = c.window.n_cells();
    let seen = survey(&c, config);
    if seen.out_of_budget {
        return Ok(ForcedOutcome::Inconclusive);
    }
    if !seen.any {
        return Ok(ForcedOutcome::Unsat);
    }
    let w = &c.window;
    let cells = (0..n)
        .map(|i| match (seen.ins.contains(i), seen.outs.contains(i)) {
            (true, false) => Forced::In,
            (false, true) => Forced::Out,
            _ => Forced::Free,
        })
        .collect();
    Ok(ForcedOutcome::Forced(ForcedMap { origin: w.origin(), width: w.width(), height: w.height(), cells }))
}
