use crate::{Color, GridCoord, GridError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};

/// A finite set of cells.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Figure {
    cells: BTreeSet<GridCoord>,
}

impl FromIterator<GridCoord> for Figure {
    fn from_iter<I: IntoIterator<Item = GridCoord>>(iter: I) -> Self {
        Figure { cells: iter.into_iter().collect() }
    }
}

impl Figure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rect(rows: std::ops::RangeInclusive<i32>, cols: std::ops::RangeInclusive<i32>) -> Self {
        rows.flat_map(|r| cols.clone().map(move |c| GridCoord::new(r, c))).collect()
    }

    /// Parse a picture where `#`, `W` or `B` mark present cells and `.` marks
    /// absent ones. The first character of the first line is cell `origin`.
    pub fn from_picture(picture: &str, origin: GridCoord) -> Self {
        let mut cells = BTreeSet::new();
        for (i, line) in picture.lines().map(str::trim).filter(|l| !l.is_empty()).enumerate() {
            for (j, ch) in line.chars().enumerate() {
                if ch != '.' {
                    cells.insert(GridCoord::new(origin.row + i as i32, origin.col + j as i32));
                }
            }
        }
        Figure { cells }
    }

    pub fn cells(&self) -> &BTreeSet<GridCoord> {
        &self.cells
    }

    pub fn iter(&self) -> impl Iterator<Item = GridCoord> + '_ {
        self.cells.iter().copied()
    }

    pub fn contains(&self, c: GridCoord) -> bool {
        self.cells.contains(&c)
    }

    pub fn insert(&mut self, c: GridCoord) -> bool {
        self.cells.insert(c)
    }

    pub fn remove(&mut self, c: GridCoord) -> bool {
        self.cells.remove(&c)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn white_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_white()).count()
    }

    pub fn black_count(&self) -> usize {
        self.len() - self.white_count()
    }

    pub fn count(&self, color: Color) -> usize {
        match color {
            Color::White => self.white_count(),
            Color::Black => self.black_count(),
        }
    }

    /// `(min_row, min_col, max_row, max_col)`, or `None` when empty.
    pub fn bounding_box(&self) -> Option<(i32, i32, i32, i32)> {
        let first = self.cells.iter().next()?;
        let mut bb = (first.row, first.col, first.row, first.col);
        for c in &self.cells {
            bb.0 = bb.0.min(c.row);
            bb.1 = bb.1.min(c.col);
            bb.2 = bb.2.max(c.row);
            bb.3 = bb.3.max(c.col);
        }
        Some(bb)
    }

    /// 4-connected components, each listed by its smallest cell first.
    pub fn components(&self) -> Vec<Figure> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in &self.cells {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            while let Some(c) = queue.pop_front() {
                comp.insert(c);
                for nb in c.neighbors() {
                    if self.contains(nb) && seen.insert(nb) {
                        queue.push_back(nb);
                    }
                }
            }
            out.push(Figure { cells: comp });
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Components of the complement inside the bounding box that do not
    /// touch the box border.
    pub fn holes(&self) -> Vec<Figure> {
        let Some((r0, c0, r1, c1)) = self.bounding_box() else {
            return Vec::new();
        };
        let complement: Figure = (r0..=r1)
            .flat_map(|r| (c0..=c1).map(move |c| GridCoord::new(r, c)))
            .filter(|c| !self.contains(*c))
            .collect();
        complement
            .components()
            .into_iter()
            .filter(|h| {
                h.iter().all(|c| c.row > r0 && c.row < r1 && c.col > c0 && c.col < c1)
            })
            .collect()
    }

    pub fn union(&self, other: &Figure) -> Figure {
        self.cells.union(&other.cells).copied().collect()
    }

    pub fn difference(&self, other: &Figure) -> Figure {
        self.cells.difference(&other.cells).copied().collect()
    }

    /// One `row col` pair per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.cells {
            s.push_str(&format!("{} {}\n", c.row, c.col));
        }
        s
    }

    /// Inverse of [`Figure::to_text`]. Blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Figure, GridError> {
        let mut cells = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<i32>().map_err(|e| GridError::Parse { line: i + 1, msg: e.to_string() })
            };
            match parts.as_slice() {
                [r, c] => {
                    cells.insert(GridCoord::new(parse(r)?, parse(c)?));
                }
                _ => {
                    return Err(GridError::Parse {
                        line: i + 1,
                        msg: format!("expected `row col`, got {line:?}"),
                    })
                }
            }
        }
        Ok(Figure { cells })
    }

    /// Accepts either the JSON array form or the line format.
    pub fn parse(text: &str) -> Result<Figure, GridError> {
        if text.trim_start().starts_with('[') {
            serde_json::from_str(text).map_err(|e| GridError::Parse { line: e.line(), msg: e.to_string() })
        } else {
            Figure::from_text(text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let f = Figure::from_picture("#.#\n###", GridCoord::new(2, 3));
        assert_eq!(Figure::from_text(&f.to_text()).unwrap(), f);
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.starts_with("[[2,3]"));
        assert_eq!(Figure::parse(&json).unwrap(), f);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = Figure::from_text("1 1\n\n2 x\n").unwrap_err();
        assert!(matches!(err, GridError::Parse { line: 3, .. }));
    }

    #[test]
    fn components_and_holes() {
        let ring = Figure::rect(1..=3, 1..=3).difference(&Figure::from_iter([GridCoord::new(2, 2)]));
        assert_eq!(ring.components().len(), 1);
        assert_eq!(ring.holes().len(), 1);
        let diag = Figure::from_iter([GridCoord::new(1, 1), GridCoord::new(2, 2)]);
        assert_eq!(diag.components().len(), 2);
    }
}
