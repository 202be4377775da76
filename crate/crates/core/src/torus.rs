//! Doubly periodic codes stored as their fundamental domain.

use std::fmt;

use thiserror::Error;

use crate::coord::Coord;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("torus dimensions must be at least 4x4, got {width}x{height}")]
    TooSmall { width: usize, height: usize },
    #[error("torus dimensions {width}x{height} exceed the supported maximum")]
    TooLarge { width: usize, height: usize },
    #[error("period {period} does not divide both dimensions {width}x{height}")]
    PeriodMismatch { period: usize, width: usize, height: usize },
    #[error("residue {residue} is outside [0, {period})")]
    BadResidue { residue: usize, period: usize },
    #[error("period must be positive")]
    ZeroPeriod,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

/// Largest side accepted anywhere; keeps every index comfortably in `i32`.
pub const MAX_SIDE: usize = 4096;

/// Membership bitset of a `width × height` fundamental domain. Queries at
/// any [`Coord`] reduce modulo the dimensions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TorusCode {
    width: usize,
    height: usize,
    bits: Vec<u64>,
}

impl TorusCode {
    pub fn empty(width: usize, height: usize) -> Result<Self, CodeError> {
        if width < 4 || height < 4 {
            return Err(CodeError::TooSmall { width, height });
        }
        if width > MAX_SIDE || height > MAX_SIDE {
            return Err(CodeError::TooLarge { width, height });
        }
        Ok(TorusCode { width, height, bits: vec![0; (width * height).div_ceil(64)] })
    }

    pub fn full(width: usize, height: usize) -> Result<Self, CodeError> {
        Self::from_fn(width, height, |_| true)
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(Coord) -> bool) -> Result<Self, CodeError> {
        let mut code = Self::empty(width, height)?;
        for y in 0..height {
            for x in 0..width {
                let p = Coord::new(x as i32, y as i32);
                if f(p) {
                    code.insert(p);
                }
            }
        }
        Ok(code)
    }

    pub fn from_members(width: usize, height: usize, members: impl IntoIterator<Item = Coord>) -> Result<Self, CodeError> {
        let mut code = Self::empty(width, height)?;
        for p in members {
            code.insert(p);
        }
        Ok(code)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }

    /// Row-major index (`y` ascending) of a wrapped coordinate.
    pub fn index(&self, p: Coord) -> usize {
        let q = p.wrap(self.width, self.height);
        q.y as usize * self.width + q.x as usize
    }

    pub fn coord_of(&self, index: usize) -> Coord {
        Coord::new((index % self.width) as i32, (index / self.width) as i32)
    }

    pub fn contains(&self, p: Coord) -> bool {
        let i = self.index(p);
        self.bits[i >> 6] >> (i & 63) & 1 == 1
    }

    pub fn insert(&mut self, p: Coord) {
        let i = self.index(p);
        self.bits[i >> 6] |= 1 << (i & 63);
    }

    pub fn remove(&mut self, p: Coord) {
        let i = self.index(p);
        self.bits[i >> 6] &= !(1 << (i & 63));
    }

    pub fn set(&mut self, p: Coord, member: bool) {
        if member {
            self.insert(p)
        } else {
            self.remove(p)
        }
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Codewords of the fundamental domain, row-major.
    pub fn members(&self) -> impl Iterator<Item = Coord> + '_ {
        (0..self.area()).filter(|&i| self.bits[i >> 6] >> (i & 63) & 1 == 1).map(|i| self.coord_of(i))
    }

    /// Every cell of the fundamental domain, row-major.
    pub fn domain(&self) -> impl Iterator<Item = Coord> {
        let (w, h) = (self.width, self.height);
        (0..h).flat_map(move |y| (0..w).map(move |x| Coord::new(x as i32, y as i32)))
    }

    /// Parse the text format: `torus W H`, then `H` rows of `W` characters
    /// (`#` codeword, `.` empty), the first row being `y = H - 1`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
        let (hline, header) = lines.next().ok_or_else(|| ParseError::new(1, 1, "empty input"))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("torus") {
            return Err(ParseError::new(hline, 1, "expected header `torus W H`"));
        }
        let dim = |s: Option<&str>, what: &str| -> Result<usize, ParseError> {
            let s = s.ok_or_else(|| ParseError::new(hline, header.len() + 1, format!("missing {what}")))?;
            let col = header.find(s).map_or(1, |c| c + 1);
            s.parse::<usize>().map_err(|_| ParseError::new(hline, col, format!("invalid {what} `{s}`")))
        };
        let width = dim(parts.next(), "width")?;
        let height = dim(parts.next(), "height")?;
        if let Some(extra) = parts.next() {
            let col = header.rfind(extra).map_or(1, |c| c + 1);
            return Err(ParseError::new(hline, col, "unexpected trailing token in header"));
        }
        let mut code = TorusCode::empty(width, height).map_err(|e| ParseError::new(hline, 1, e.to_string()))?;
        let mut rows = 0;
        for (ln, line) in lines {
            if rows == height {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(ParseError::new(ln, 1, format!("expected {height} rows, found more")));
            }
            let chars: Vec<char> = line.chars().collect();
            for (i, ch) in chars.iter().enumerate() {
                if i >= width {
                    return Err(ParseError::new(ln, i + 1, format!("row longer than width {width}")));
                }
                match ch {
                    '#' => code.insert(Coord::new(i as i32, (height - 1 - rows) as i32)),
                    '.' => {}
                    other => return Err(ParseError::new(ln, i + 1, format!("unexpected character `{other}`"))),
                }
            }
            if chars.len() < width {
                return Err(ParseError::new(ln, chars.len() + 1, format!("row shorter than width {width}")));
            }
            rows += 1;
        }
        if rows < height {
            return Err(ParseError::new(text.lines().count() + 1, 1, format!("expected {height} rows, found {rows}")));
        }
        Ok(code)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for TorusCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "torus {} {}", self.width, self.height)?;
        for y in (0..self.height).rev() {
            let row: String = (0..self.width)
                .map(|x| if self.contains(Coord::new(x as i32, y as i32)) { '#' } else { '.' })
                .collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}
