//! Boolean expressions over frame counts and cells, with three-valued
//! evaluation on partial assignments.

use serde::{Deserialize, Serialize};

use super::window::{CellState, TriStateWindow};
use crate::bits::{Assignment, Cardinality, CellSet};
use crate::coord::{Coord, Symmetry};
use crate::frame::{BALL2, RING1, RING2};

/// A position written as `[x, y]`, `{"x": .., "y": ..}` or a two-letter
/// name such as `"Cc"`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "PosJson", into = "[i32; 2]")]
pub struct Pos(pub Coord);

#[derive(Deserialize)]
#[serde(untagged)]
enum PosJson {
    Pair([i32; 2]),
    Object { x: i32, y: i32 },
    Letters(String),
}

impl TryFrom<PosJson> for Pos {
    type Error = String;

    fn try_from(p: PosJson) -> Result<Self, String> {
        match p {
            PosJson::Pair([x, y]) | PosJson::Object { x, y } => Ok(Pos(Coord::new(x, y))),
            PosJson::Letters(s) => Coord::from_letters(&s).map(Pos).ok_or_else(|| format!("bad position name `{s}`")),
        }
    }
}

impl From<Pos> for [i32; 2] {
    fn from(p: Pos) -> Self {
        [p.0.x, p.0.y]
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Cmp {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
}

impl Cmp {
    pub fn holds(self, v: i64, k: i64) -> bool {
        match self {
            Cmp::Eq => v == k,
            Cmp::Ge => v >= k,
            Cmp::Le => v <= k,
        }
    }
}

/// A set of frames: an explicit list of anchors, or the frames around a
/// centre within a Chebyshev distance range.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FrameSet {
    List(Vec<Pos>),
    Around {
        around: Pos,
        #[serde(default)]
        min: i32,
        max: i32,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        except: Vec<Pos>,
    },
}

impl FrameSet {
    pub fn anchors(&self) -> Vec<Coord> {
        match self {
            FrameSet::List(v) => v.iter().map(|p| p.0).collect(),
            FrameSet::Around { around, min, max, except } => {
                let mut out = Vec::new();
                for y in -max..=*max {
                    for x in -max..=*max {
                        let d = Coord::new(x, y);
                        let a = around.0 + d;
                        if d.norm() >= *min && !except.iter().any(|e| e.0 == a) {
                            out.push(a);
                        }
                    }
                }
                out
            }
        }
    }

    fn transform(&self, g: Symmetry) -> FrameSet {
        let f = |p: &Pos| Pos(g.apply_frame(p.0));
        match self {
            FrameSet::List(v) => FrameSet::List(v.iter().map(f).collect()),
            FrameSet::Around { around, min, max, except } => FrameSet::Around {
                around: f(around),
                min: *min,
                max: *max,
                except: except.iter().map(f).collect(),
            },
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Expr {
    True,
    And { args: Vec<Expr> },
    Or { args: Vec<Expr> },
    Not { arg: Box<Expr> },
    AtLeast { n: usize, args: Vec<Expr> },
    /// Codewords in one frame compared with `k`.
    Count { frame: Pos, cmp: Cmp, k: u8 },
    /// The number of frames of `frames` whose count satisfies `cmp k`,
    /// compared with `n` by `rel`.
    NumFrames { frames: FrameSet, cmp: Cmp, k: u8, rel: Cmp, n: usize },
    /// Sum of `count - 5` over `frames` is at least `k`.
    ExcessSum { frames: FrameSet, k: i32 },
    OnePoor { frame: Pos },
    TwoPoor { frame: Pos },
    Cell { at: Pos, state: CellState },
}

/// Where an expression looks.
#[derive(Default, Debug)]
pub struct Footprint {
    pub frames: Vec<Coord>,
    pub cells: Vec<Coord>,
}

impl Expr {
    pub fn count(frame: Coord, cmp: Cmp, k: u8) -> Expr {
        Expr::Count { frame: Pos(frame), cmp, k }
    }

    pub fn footprint(&self, fp: &mut Footprint) {
        match self {
            Expr::True => {}
            Expr::And { args } | Expr::Or { args } | Expr::AtLeast { args, .. } => {
                args.iter().for_each(|a| a.footprint(fp))
            }
            Expr::Not { arg } => arg.footprint(fp),
            Expr::Count { frame, .. } => fp.frames.push(frame.0),
            Expr::NumFrames { frames, .. } | Expr::ExcessSum { frames, .. } => fp.frames.extend(frames.anchors()),
            Expr::OnePoor { frame } | Expr::TwoPoor { frame } => {
                fp.frames.push(frame.0);
                fp.frames.extend(BALL2.iter().map(|&d| frame.0 + d));
            }
            Expr::Cell { at, .. } => fp.cells.push(at.0),
        }
    }

    /// The image under `g`, acting on cells directly and on frames through
    /// their cell sets.
    pub fn transform(&self, g: Symmetry) -> Expr {
        let f = |p: &Pos| Pos(g.apply_frame(p.0));
        let all = |v: &[Expr]| v.iter().map(|e| e.transform(g)).collect();
        match self {
            Expr::True => Expr::True,
            Expr::And { args } => Expr::And { args: all(args) },
            Expr::Or { args } => Expr::Or { args: all(args) },
            Expr::Not { arg } => Expr::Not { arg: Box::new(arg.transform(g)) },
            Expr::AtLeast { n, args } => Expr::AtLeast { n: *n, args: all(args) },
            Expr::Count { frame, cmp, k } => Expr::Count { frame: f(frame), cmp: *cmp, k: *k },
            Expr::NumFrames { frames, cmp, k, rel, n } => {
                Expr::NumFrames { frames: frames.transform(g), cmp: *cmp, k: *k, rel: *rel, n: *n }
            }
            Expr::ExcessSum { frames, k } => Expr::ExcessSum { frames: frames.transform(g), k: *k },
            Expr::OnePoor { frame } => Expr::OnePoor { frame: f(frame) },
            Expr::TwoPoor { frame } => Expr::TwoPoor { frame: f(frame) },
            Expr::Cell { at, state } => Expr::Cell { at: Pos(g.apply(at.0)), state: *state },
        }
    }

    /// Lower onto window cell indices. Every referenced frame must be
    /// interior and every cell inside the window.
    pub fn compile(&self, w: &TriStateWindow) -> Node {
        let mask = |a: Coord| w.frame_mask(a);
        let masks = |a: &[Coord]| a.iter().map(|&x| mask(x)).collect::<Vec<_>>();
        let all = |v: &[Expr]| v.iter().map(|e| e.compile(w)).collect::<Vec<_>>();
        match self {
            Expr::True => Node::Const(true),
            Expr::And { args } => Node::And(all(args)),
            Expr::Or { args } => Node::Or(all(args)),
            Expr::Not { arg } => Node::Not(Box::new(arg.compile(w))),
            Expr::AtLeast { n, args } => Node::AtLeast(*n, all(args)),
            Expr::Count { frame, cmp, k } => Node::Count { mask: mask(frame.0), cmp: *cmp, k: *k },
            Expr::NumFrames { frames, cmp, k, rel, n } => {
                Node::NumFrames { masks: masks(&frames.anchors()), cmp: *cmp, k: *k, rel: *rel, n: *n }
            }
            Expr::ExcessSum { frames, k } => Node::ExcessSum { masks: masks(&frames.anchors()), k: *k },
            Expr::OnePoor { frame } => {
                let ball: Vec<Coord> = BALL2.iter().map(|&d| frame.0 + d).collect();
                Node::And(vec![
                    Node::Count { mask: mask(frame.0), cmp: Cmp::Eq, k: 5 },
                    Node::NumFrames { masks: masks(&ball), cmp: Cmp::Ge, k: 6, rel: Cmp::Le, n: 1 },
                ])
            }
            Expr::TwoPoor { frame } => {
                let r1: Vec<Coord> = RING1.iter().map(|&d| frame.0 + d).collect();
                let r2: Vec<Coord> = RING2.iter().map(|&d| frame.0 + d).collect();
                Node::And(vec![
                    Node::Count { mask: mask(frame.0), cmp: Cmp::Eq, k: 5 },
                    Node::NumFrames { masks: masks(&r1), cmp: Cmp::Ge, k: 6, rel: Cmp::Le, n: 0 },
                    Node::NumFrames { masks: masks(&r2), cmp: Cmp::Ge, k: 6, rel: Cmp::Le, n: 2 },
                ])
            }
            Expr::Cell { at, state } => Node::Cell {
                index: w.index(at.0).expect("validated cell"),
                want_in: *state == CellState::In,
            },
        }
    }
}

/// Kleene truth value.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Tri {
    False,
    Unknown,
    True,
}

impl Tri {
    fn from_bool(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    pub fn not(self) -> Tri {
        match self {
            Tri::False => Tri::True,
            Tri::Unknown => Tri::Unknown,
            Tri::True => Tri::False,
        }
    }
}

/// Truth of `v cmp k` for every `v` in `lo..=hi`.
fn interval(lo: i64, hi: i64, cmp: Cmp, k: i64) -> Tri {
    let (t, f) = match cmp {
        Cmp::Eq => (lo == k && hi == k, k < lo || k > hi),
        Cmp::Ge => (lo >= k, hi < k),
        Cmp::Le => (hi <= k, lo > k),
    };
    if t {
        Tri::True
    } else if f {
        Tri::False
    } else {
        Tri::Unknown
    }
}

/// The count range of `mask` when `count cmp k` has truth value `t`; an
/// impossible range comes out with `min > max`.
fn range(mask: CellSet, cmp: Cmp, k: u8, t: bool) -> Option<Cardinality> {
    let size = mask.len() as u16;
    let k = k as u16;
    let (min, max) = match (cmp, t) {
        (Cmp::Eq, true) => (k, k),
        (Cmp::Ge, true) => (k, size),
        (Cmp::Le, true) => (0, k),
        (Cmp::Ge, false) if k == 0 => (1, 0),
        (Cmp::Ge, false) => (0, k - 1),
        (Cmp::Le, false) => (k + 1, size),
        (Cmp::Eq, false) => return None,
    };
    Some(Cardinality { mask, min, max })
}

fn bounds(mask: &CellSet, a: &Assignment) -> (i64, i64) {
    let lo = (*mask & a.ins).len() as i64;
    let hi = mask.len() as i64 - (*mask & a.outs).len() as i64;
    (lo, hi)
}

/// A compiled expression.
#[derive(Clone, Debug)]
pub enum Node {
    Const(bool),
    And(Vec<Node>),
    Or(Vec<Node>),
    Not(Box<Node>),
    AtLeast(usize, Vec<Node>),
    Count { mask: CellSet, cmp: Cmp, k: u8 },
    NumFrames { masks: Vec<CellSet>, cmp: Cmp, k: u8, rel: Cmp, n: usize },
    ExcessSum { masks: Vec<CellSet>, k: i32 },
    Cell { index: usize, want_in: bool },
}

impl Node {
    pub fn eval(&self, a: &Assignment) -> Tri {
        match self {
            Node::Const(b) => Tri::from_bool(*b),
            Node::And(args) => {
                let mut out = Tri::True;
                for x in args {
                    match x.eval(a) {
                        Tri::False => return Tri::False,
                        Tri::Unknown => out = Tri::Unknown,
                        Tri::True => {}
                    }
                }
                out
            }
            Node::Or(args) => {
                let mut out = Tri::False;
                for x in args {
                    match x.eval(a) {
                        Tri::True => return Tri::True,
                        Tri::Unknown => out = Tri::Unknown,
                        Tri::False => {}
                    }
                }
                out
            }
            Node::Not(x) => x.eval(a).not(),
            Node::AtLeast(n, args) => {
                let (mut t, mut u) = (0, 0);
                for x in args {
                    match x.eval(a) {
                        Tri::True => t += 1,
                        Tri::Unknown => u += 1,
                        Tri::False => {}
                    }
                }
                interval(t, t + u, Cmp::Ge, *n as i64)
            }
            Node::Count { mask, cmp, k } => {
                let (lo, hi) = bounds(mask, a);
                interval(lo, hi, *cmp, *k as i64)
            }
            Node::NumFrames { masks, cmp, k, rel, n } => {
                let (mut t, mut u) = (0, 0);
                for m in masks {
                    let (lo, hi) = bounds(m, a);
                    match interval(lo, hi, *cmp, *k as i64) {
                        Tri::True => t += 1,
                        Tri::Unknown => u += 1,
                        Tri::False => {}
                    }
                }
                interval(t, t + u, *rel, *n as i64)
            }
            Node::ExcessSum { masks, k } => {
                let (mut lo, mut hi) = (0, 0);
                for m in masks {
                    let (l, h) = bounds(m, a);
                    lo += l - 5;
                    hi += h - 5;
                }
                interval(lo, hi, Cmp::Ge, *k as i64)
            }
            Node::Cell { index, want_in } => {
                if a.ins.contains(*index) {
                    Tri::from_bool(*want_in)
                } else if a.outs.contains(*index) {
                    Tri::from_bool(!*want_in)
                } else {
                    Tri::Unknown
                }
            }
        }
    }

    /// Cardinality constraints that hold whenever this node evaluates to
    /// `truth`. Only a subset of the consequences is returned, which is
    /// all propagation needs.
    pub fn implied(&self, truth: bool, out: &mut Vec<Cardinality>) {
        match (self, truth) {
            (Node::Not(x), t) => x.implied(!t, out),
            (Node::And(v), true) | (Node::Or(v), false) => v.iter().for_each(|x| x.implied(truth, out)),
            (Node::And(v), false) | (Node::Or(v), true) if v.len() == 1 => v[0].implied(truth, out),
            (Node::Count { mask, cmp, k }, t) => out.extend(range(*mask, *cmp, *k, t)),
            (Node::Cell { index, want_in }, t) => {
                let mask: CellSet = [*index].into_iter().collect();
                let v = (*want_in == t) as u16;
                out.push(Cardinality { mask, min: v, max: v });
            }
            (Node::NumFrames { masks, cmp, k, rel, n }, t) => {
                let len = masks.len();
                // "none of the frames" or "all of the frames" satisfy cmp.
                let every = match (rel, t) {
                    (Cmp::Le, true) | (Cmp::Eq, true) if *n == 0 => Some(false),
                    (Cmp::Ge, false) if *n == 1 => Some(false),
                    (Cmp::Ge, true) | (Cmp::Eq, true) if *n == len => Some(true),
                    (Cmp::Le, false) if *n + 1 == len => Some(true),
                    _ => None,
                };
                if let Some(sat) = every {
                    for m in masks {
                        out.extend(range(*m, *cmp, *k, sat));
                    }
                }
            }
            _ => {}
        }
    }

    /// Cells whose values can change the result.
    /// Partial evaluation: subtrees `a` already decides become constants.
    pub fn simplify(&self, a: &Assignment) -> Node {
        match self.eval(a) {
            Tri::True => return Node::Const(true),
            Tri::False => return Node::Const(false),
            Tri::Unknown => {}
        }
        let open = |v: &[Node]| v.iter().map(|x| x.simplify(a)).filter(|x| !matches!(x, Node::Const(_))).collect();
        match self {
            Node::And(v) => Node::And(open(v)),
            Node::Or(v) => Node::Or(open(v)),
            Node::Not(x) => Node::Not(Box::new(x.simplify(a))),
            Node::AtLeast(n, v) => {
                let held = v.iter().filter(|x| x.eval(a) == Tri::True).count();
                let rest: Vec<Node> = open(v);
                match n - held {
                    1 => Node::Or(rest),
                    m if m == rest.len() => Node::And(rest),
                    m => Node::AtLeast(m, rest),
                }
            }
            other => other.clone(),
        }
    }

    pub fn cells(&self) -> CellSet {
        match self {
            Node::Const(_) => CellSet::EMPTY,
            Node::And(v) | Node::Or(v) | Node::AtLeast(_, v) => {
                v.iter().fold(CellSet::EMPTY, |acc, x| acc | x.cells())
            }
            Node::Not(x) => x.cells(),
            Node::Count { mask, .. } => *mask,
            Node::NumFrames { masks, .. } | Node::ExcessSum { masks, .. } => {
                masks.iter().fold(CellSet::EMPTY, |acc, m| acc | *m)
            }
            Node::Cell { index, .. } => [*index].into_iter().collect(),
        }
    }
}
