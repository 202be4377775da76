//! Scenario files: a window, fixed cells, hypotheses and a conclusion.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::expr::{Expr, Footprint, Pos};
use super::window::{CellState, TriStateWindow, WindowError};
use crate::coord::{Coord, Symmetry};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("scenario `{id}`: {source}")]
    Window {
        id: String,
        #[source]
        source: WindowError,
    },
    #[error("scenario `{id}`: frame at {anchor} is not inside the window")]
    FrameOutside { id: String, anchor: Coord },
    #[error("scenario `{id}`: cell {cell} is not inside the window")]
    CellOutside { id: String, cell: Coord },
    #[error("scenario `{id}`: figure row {row} has bad length or symbol")]
    BadFigure { id: String, row: usize },
    #[error("scenario `{id}`: nothing referenced, cannot size the window")]
    NoFootprint { id: String },
    #[error("unknown scenario `{0}`")]
    Unknown(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WindowSpec {
    #[serde(default)]
    pub x: i32,
    #[serde(default)]
    pub y: i32,
    pub w: usize,
    pub h: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(from = "FixedJson")]
pub struct Fixed {
    #[serde(flatten)]
    pub at: Coord,
    pub state: CellState,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FixedJson {
    Flat { x: i32, y: i32, state: CellState },
    At { at: Pos, state: CellState },
}

impl From<FixedJson> for Fixed {
    fn from(f: FixedJson) -> Self {
        match f {
            FixedJson::Flat { x, y, state } => Fixed { at: Coord::new(x, y), state },
            FixedJson::At { at, state } => Fixed { at: at.0, state },
        }
    }
}

/// An expected pattern: `rows[0]` is the top row, its first symbol is the
/// cell `(x, y)`. `#` codeword, `.` non-codeword, `?` not compared.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Figure {
    pub x: i32,
    pub y: i32,
    pub rows: Vec<String>,
}

impl Figure {
    pub fn cells(&self) -> Vec<(Coord, CellState)> {
        let mut out = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            for (c, ch) in row.chars().enumerate() {
                if let Some(s) = CellState::from_symbol(ch) {
                    if s != CellState::Unknown {
                        out.push((Coord::new(self.x + c as i32, self.y - r as i32), s));
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Scenario {
    pub id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    /// Omitted: the bounding box of everything referenced plus a margin
    /// of two cells.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowSpec>,
    #[serde(default)]
    pub fixed: Vec<Fixed>,
    #[serde(default)]
    pub hypothesis: Vec<Expr>,
    pub conclusion: Expr,
    #[serde(default)]
    pub symmetries: bool,
    /// Frames whose conditions are enforced; all interior frames when
    /// omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditions_on: Option<Vec<Pos>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub figure: Option<Figure>,
}

const MARGIN: i32 = 2;

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario, ScenarioError> {
        let s: Scenario = serde_json::from_str(text)?;
        s.build_window()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    fn footprint(&self) -> Footprint {
        let mut fp = Footprint::default();
        for e in self.hypothesis.iter().chain(std::iter::once(&self.conclusion)) {
            e.footprint(&mut fp);
        }
        fp.cells.extend(self.fixed.iter().map(|f| f.at));
        if let Some(c) = &self.conditions_on {
            fp.frames.extend(c.iter().map(|p| p.0));
        }
        fp
    }

    pub fn window_spec(&self) -> Result<WindowSpec, ScenarioError> {
        if let Some(w) = self.window {
            return Ok(w);
        }
        let fp = self.footprint();
        let cells: Vec<Coord> = fp
            .frames
            .iter()
            .flat_map(|&a| [a, a + Coord::new(3, 3)])
            .chain(fp.cells.iter().copied())
            .collect();
        if cells.is_empty() {
            return Err(ScenarioError::NoFootprint { id: self.id.clone() });
        }
        let x0 = cells.iter().map(|c| c.x).min().unwrap() - MARGIN;
        let y0 = cells.iter().map(|c| c.y).min().unwrap() - MARGIN;
        let x1 = cells.iter().map(|c| c.x).max().unwrap() + MARGIN;
        let y1 = cells.iter().map(|c| c.y).max().unwrap() + MARGIN;
        Ok(WindowSpec { x: x0, y: y0, w: (x1 - x0 + 1) as usize, h: (y1 - y0 + 1) as usize })
    }

    /// The initial window with fixed cells applied, after checking that
    /// everything the scenario mentions fits inside.
    pub fn build_window(&self) -> Result<TriStateWindow, ScenarioError> {
        let id = || self.id.clone();
        let spec = self.window_spec()?;
        let mut w = TriStateWindow::new(Coord::new(spec.x, spec.y), spec.w, spec.h)
            .map_err(|source| ScenarioError::Window { id: id(), source })?;
        for f in &self.fixed {
            w.set(f.at, f.state).map_err(|source| ScenarioError::Window { id: id(), source })?;
        }
        let fp = self.footprint();
        if let Some(&anchor) = fp.frames.iter().find(|&&a| !w.is_interior(a)) {
            return Err(ScenarioError::FrameOutside { id: id(), anchor });
        }
        if let Some(&cell) = fp.cells.iter().find(|&&c| !w.contains(c)) {
            return Err(ScenarioError::CellOutside { id: id(), cell });
        }
        if let Some(fig) = &self.figure {
            let width = fig.rows.first().map_or(0, |r| r.chars().count());
            for (row, r) in fig.rows.iter().enumerate() {
                if r.chars().count() != width || r.chars().any(|c| CellState::from_symbol(c).is_none()) {
                    return Err(ScenarioError::BadFigure { id: id(), row });
                }
            }
            if let Some((cell, _)) = fig.cells().into_iter().find(|(c, _)| !w.contains(*c)) {
                return Err(ScenarioError::CellOutside { id: id(), cell });
            }
        }
        Ok(w)
    }

    /// Anchors whose conditions are enforced.
    pub fn enforced_frames(&self, w: &TriStateWindow) -> Vec<Coord> {
        match &self.conditions_on {
            Some(v) => v.iter().map(|p| p.0).collect(),
            None => w.interior_frames(),
        }
    }

    /// The scenario moved by a symmetry of the grid. The id gets the
    /// symmetry's name appended unless it is the identity.
    pub fn transform(&self, g: Symmetry) -> Scenario {
        let spec = self.window_spec().ok();
        let window = spec.map(|s| {
            let (o, w, h) = g.apply_box(Coord::new(s.x, s.y), s.w as i32, s.h as i32);
            WindowSpec { x: o.x, y: o.y, w: w as usize, h: h as usize }
        });
        let figure = self.figure.as_ref().map(|fig| {
            let cells = fig.cells();
            let pts: Vec<Coord> = cells.iter().map(|(c, _)| g.apply(*c)).collect();
            figure_from(&cells.iter().zip(pts).map(|((_, s), p)| (p, *s)).collect::<Vec<_>>())
        });
        Scenario {
            id: if g == Symmetry::IDENTITY { self.id.clone() } else { format!("{}@{}", self.id, g.name()) },
            description: self.description.clone(),
            window,
            fixed: self.fixed.iter().map(|f| Fixed { at: g.apply(f.at), state: f.state }).collect(),
            hypothesis: self.hypothesis.iter().map(|e| e.transform(g)).collect(),
            conclusion: self.conclusion.transform(g),
            symmetries: self.symmetries,
            conditions_on: self
                .conditions_on
                .as_ref()
                .map(|v| v.iter().map(|p| Pos(g.apply_frame(p.0))).collect()),
            figure,
        }
    }

    /// The scenario itself, followed by its seven other images when
    /// `symmetries` is set.
    pub fn variants(&self) -> Vec<Scenario> {
        if self.symmetries {
            Symmetry::ALL.iter().map(|&g| self.transform(g)).collect()
        } else {
            vec![self.clone()]
        }
    }
}

fn figure_from(cells: &[(Coord, CellState)]) -> Figure {
    if cells.is_empty() {
        return Figure { x: 0, y: 0, rows: Vec::new() };
    }
    let x0 = cells.iter().map(|c| c.0.x).min().unwrap();
    let x1 = cells.iter().map(|c| c.0.x).max().unwrap();
    let y0 = cells.iter().map(|c| c.0.y).min().unwrap();
    let y1 = cells.iter().map(|c| c.0.y).max().unwrap();
    let mut rows = vec![vec!['?'; (x1 - x0 + 1) as usize]; (y1 - y0 + 1) as usize];
    for (c, s) in cells {
        rows[(y1 - c.y) as usize][(c.x - x0) as usize] = s.symbol();
    }
    Figure { x: x0, y: y1, rows: rows.into_iter().map(|r| r.into_iter().collect()).collect() }
}

macro_rules! bundled_files {
    ($($name:literal),* $(,)?) => {
        const BUNDLED: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../../scenarios/", $name, ".json")))),*
        ];
    };
}

bundled_files!(
    "lemma3_fourcorners",
    "obs_nc",
    "obs_co",
    "lemma4",
    "lemma_4benef",
    "lemma_4benef6_bullet1",
    "lemma_4benef6_bullet2",
    "lemma5_A1",
    "lemma5_A2",
    "lemma5_A3",
    "lemma5_A4",
    "lemma5_A5",
    "lemma5_A6",
    "lemma5_A7",
    "lemma5_A8",
    "lemma5_A9",
    "lemma5_A10",
    "lemma5_B1",
    "lemma5_B2",
    "lemma5_B3",
    "lemma5_B4",
    "lemma5_C1",
    "lemma5_C2",
    "lemma5_C3",
    "lemma5_D",
    "lemma_1poor",
    "lemma_2poor",
);

pub fn bundled_ids() -> Vec<&'static str> {
    BUNDLED.iter().map(|(id, _)| *id).collect()
}

pub fn bundled(id: &str) -> Result<Scenario, ScenarioError> {
    let (_, text) = BUNDLED.iter().find(|(i, _)| *i == id).ok_or_else(|| ScenarioError::Unknown(id.to_string()))?;
    Scenario::from_json(text)
}

pub fn all_bundled() -> Vec<Scenario> {
    bundled_ids().into_iter().map(|id| bundled(id).expect("bundled scenario loads")).collect()
}
