use crate::MatchingError;
use grid_core::{Domino, Figure, GridCoord};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Node-disjoint set of grid edges.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartialMatching {
    edges: BTreeSet<Domino>,
}

impl PartialMatching {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a matching, rejecting non-adjacent or overlapping pairs.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, MatchingError>
    where
        I: IntoIterator<Item = (GridCoord, GridCoord)>,
    {
        let mut m = PartialMatching::new();
        for (a, b) in pairs {
            m.insert(a, b)?;
        }
        Ok(m)
    }

    pub fn insert(&mut self, a: GridCoord, b: GridCoord) -> Result<(), MatchingError> {
        if !a.is_adjacent(b) {
            return Err(MatchingError::NotAdjacent(a, b));
        }
        for c in [a, b] {
            if self.is_matched(c) {
                return Err(MatchingError::AlreadyMatched(c));
            }
        }
        self.edges.insert(Domino::new(a, b));
        Ok(())
    }

    pub fn with(&self, a: GridCoord, b: GridCoord) -> Result<Self, MatchingError> {
        let mut m = self.clone();
        m.insert(a, b)?;
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = Domino> + '_ {
        self.edges.iter().copied()
    }

    pub fn is_matched(&self, c: GridCoord) -> bool {
        self.partner(c).is_some()
    }

    pub fn partner(&self, c: GridCoord) -> Option<GridCoord> {
        self.edges.iter().find_map(|d| d.other(c))
    }

    pub fn nodes(&self) -> Figure {
        self.edges.iter().flat_map(|d| [d.cells().0, d.cells().1]).collect()
    }

    pub fn check_in_grid(&self, n: i64) -> Result<(), MatchingError> {
        for c in self.nodes().iter() {
            if !c.in_grid(n as i32) {
                return Err(MatchingError::OutsideGrid(c));
            }
        }
        Ok(())
    }

    /// All sub-matchings, as bitmask-selected subsets (small `len` only).
    pub fn subsets(&self) -> Vec<PartialMatching> {
        let all: Vec<Domino> = self.edges().collect();
        assert!(all.len() < 20, "subset enumeration is for small matchings");
        (0u32..1 << all.len())
            .map(|mask| PartialMatching {
                edges: all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, d)| *d).collect(),
            })
            .collect()
    }

    pub fn partner_map(&self) -> BTreeMap<GridCoord, GridCoord> {
        let mut m = BTreeMap::new();
        for d in &self.edges {
            let (a, b) = d.cells();
            m.insert(a, b);
            m.insert(b, a);
        }
        m
    }
}
