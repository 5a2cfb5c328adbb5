use crate::{Color, Figure, GridCoord};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, VecDeque};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(GridCoord, GridCoord)", into = "(GridCoord, GridCoord)")]
pub struct Domino {
    a: GridCoord,
    b: GridCoord,
}

impl From<(GridCoord, GridCoord)> for Domino {
    fn from((a, b): (GridCoord, GridCoord)) -> Self {
        Domino::new(a, b)
    }
}

impl From<Domino> for (GridCoord, GridCoord) {
    fn from(d: Domino) -> Self {
        (d.a, d.b)
    }
}

impl Domino {
    /// Endpoints are stored in row-major order.
    pub fn new(a: GridCoord, b: GridCoord) -> Self {
        if a <= b {
            Domino { a, b }
        } else {
            Domino { a: b, b: a }
        }
    }

    pub fn cells(&self) -> (GridCoord, GridCoord) {
        (self.a, self.b)
    }

    pub fn is_adjacent(&self) -> bool {
        self.a.is_adjacent(self.b)
    }

    pub fn contains(&self, c: GridCoord) -> bool {
        self.a == c || self.b == c
    }

    pub fn other(&self, c: GridCoord) -> Option<GridCoord> {
        if c == self.a {
            Some(self.b)
        } else if c == self.b {
            Some(self.a)
        } else {
            None
        }
    }

    pub fn is_horizontal(&self) -> bool {
        self.a.row == self.b.row
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DominoMatching {
    pub dominoes: Vec<Domino>,
}

impl FromIterator<Domino> for DominoMatching {
    fn from_iter<I: IntoIterator<Item = Domino>>(iter: I) -> Self {
        let mut dominoes: Vec<Domino> = iter.into_iter().collect();
        dominoes.sort();
        DominoMatching { dominoes }
    }
}

impl DominoMatching {
    pub fn len(&self) -> usize {
        self.dominoes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dominoes.is_empty()
    }

    pub fn covered(&self) -> Figure {
        self.dominoes.iter().flat_map(|d| [d.a, d.b]).collect()
    }

    pub fn partner_map(&self) -> HashMap<GridCoord, GridCoord> {
        let mut m = HashMap::with_capacity(2 * self.len());
        for d in &self.dominoes {
            m.insert(d.a, d.b);
            m.insert(d.b, d.a);
        }
        m
    }

    /// Every domino joins two adjacent cells and no cell is used twice.
    pub fn is_valid(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(2 * self.len());
        self.dominoes.iter().all(|d| d.is_adjacent() && seen.insert(d.a) && seen.insert(d.b))
    }

    /// Valid, and covers exactly the cells of `fig`.
    pub fn is_perfect_for(&self, fig: &Figure) -> bool {
        self.is_valid() && 2 * self.len() == fig.len() && self.dominoes.iter().all(|d| fig.contains(d.a) && fig.contains(d.b))
    }
}

/// Bipartite view of a figure: whites on the left, blacks on the right.
struct Bipartite {
    whites: Vec<GridCoord>,
    blacks: Vec<GridCoord>,
    adj: Vec<Vec<usize>>,
}

impl Bipartite {
    fn new(fig: &Figure) -> Self {
        let mut whites = Vec::new();
        let mut blacks = Vec::new();
        let mut black_index = HashMap::new();
        for c in fig.iter() {
            if c.is_white() {
                whites.push(c);
            } else {
                black_index.insert(c, blacks.len());
                blacks.push(c);
            }
        }
        let adj = whites
            .iter()
            .map(|w| w.neighbors().iter().filter_map(|nb| black_index.get(nb).copied()).collect())
            .collect();
        Bipartite { whites, blacks, adj }
    }

    /// Hopcroft-Karp. Returns (mate of each white, mate of each black).
    fn max_matching(&self) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
        const INF: u32 = u32::MAX;
        let nw = self.whites.len();
        let mut mate_w: Vec<Option<usize>> = vec![None; nw];
        let mut mate_b: Vec<Option<usize>> = vec![None; self.blacks.len()];
        let mut dist = vec![INF; nw];
        loop {
            // Layer the free whites.
            let mut queue = VecDeque::new();
            for w in 0..nw {
                if mate_w[w].is_none() {
                    dist[w] = 0;
                    queue.push_back(w);
                } else {
                    dist[w] = INF;
                }
            }
            let mut found = false;
            while let Some(w) = queue.pop_front() {
                for &b in &self.adj[w] {
                    match mate_b[b] {
                        None => found = true,
                        Some(w2) if dist[w2] == INF => {
                            dist[w2] = dist[w] + 1;
                            queue.push_back(w2);
                        }
                        Some(_) => {}
                    }
                }
            }
            if !found {
                break;
            }
            // Iterative layered DFS from each free white.
            let mut it = vec![0usize; nw];
            for root in 0..nw {
                if mate_w[root].is_some() {
                    continue;
                }
                let mut stack = vec![root];
                let mut path_b: Vec<usize> = Vec::new();
                let mut augmented = false;
                while let Some(&w) = stack.last() {
                    if it[w] >= self.adj[w].len() {
                        dist[w] = INF;
                        stack.pop();
                        path_b.pop();
                        continue;
                    }
                    let b = self.adj[w][it[w]];
                    it[w] += 1;
                    match mate_b[b] {
                        None => {
                            path_b.push(b);
                            augmented = true;
                            break;
                        }
                        Some(w2) if dist[w2] == dist[w] + 1 => {
                            path_b.push(b);
                            stack.push(w2);
                        }
                        Some(_) => {}
                    }
                }
                if augmented {
                    for (w, b) in stack.iter().zip(path_b.iter()) {
                        mate_w[*w] = Some(*b);
                        mate_b[*b] = Some(*w);
                    }
                }
            }
        }
        (mate_w, mate_b)
    }
}

/// A maximum domino matching of the figure (deterministic).
pub fn maximum_matching(fig: &Figure) -> DominoMatching {
    let g = Bipartite::new(fig);
    let (mate_w, _) = g.max_matching();
    mate_w
        .iter()
        .enumerate()
        .filter_map(|(w, b)| b.map(|b| Domino::new(g.whites[w], g.blacks[b])))
        .collect()
}

/// A perfect domino tiling of the figure, if one exists.
pub fn tile(fig: &Figure) -> Option<DominoMatching> {
    if fig.white_count() != fig.black_count() {
        return None;
    }
    let m = maximum_matching(fig);
    (2 * m.len() == fig.len()).then_some(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    /// More black than white cells; every boundary edge inside the parent
    /// has a white cell on its right and the perimeter cost is negative.
    ExcessBlack,
    /// The color-swapped situation, used when the parent has more whites.
    ExcessWhite,
}

impl CertificateKind {
    pub fn bounding_color(self) -> Color {
        match self {
            CertificateKind::ExcessBlack => Color::White,
            CertificateKind::ExcessWhite => Color::Black,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub figure: Figure,
    pub kind: CertificateKind,
}

impl Certificate {
    /// Checks connectivity, containment, the boundary-color condition edge by
    /// edge, and the sign of the perimeter cost.
    pub fn verify(&self, parent: &Figure) -> bool {
        let sub = &self.figure;
        if sub.is_empty() || !sub.is_connected() || !sub.iter().all(|c| parent.contains(c)) {
            return false;
        }
        let bound = self.kind.bounding_color();
        for p in sub.perimeters() {
            for e in &p.edges {
                let outside = e.left_cell().expect("unit edge");
                if parent.contains(outside) && e.right_cell().map(|c| c.color()) != Some(bound) {
                    return false;
                }
            }
        }
        let cost = sub.perimeter_cost();
        match self.kind {
            CertificateKind::ExcessBlack => cost < 0,
            CertificateKind::ExcessWhite => cost > 0,
        }
    }
}

/// For an untileable figure, a connected Hall violator `L ∪ N(L)` taken from
/// the alternating-path closure of the cells a maximum matching leaves
/// uncovered. Returns `None` exactly when the figure is tileable.
pub fn find_negative_certificate(fig: &Figure) -> Option<Certificate> {
    let g = Bipartite::new(fig);
    let (mate_w, mate_b) = g.max_matching();
    let free_b: Vec<usize> = (0..g.blacks.len()).filter(|&b| mate_b[b].is_none()).collect();
    let free_w: Vec<usize> = (0..g.whites.len()).filter(|&w| mate_w[w].is_none()).collect();
    if free_b.is_empty() && free_w.is_empty() {
        return None;
    }
    let (cells, kind) = if !free_b.is_empty() {
        let mut radj: Vec<Vec<usize>> = vec![Vec::new(); g.blacks.len()];
        for (w, bs) in g.adj.iter().enumerate() {
            for &b in bs {
                radj[b].push(w);
            }
        }
        (closure(&free_b, &radj, &mate_w, &g.blacks, &g.whites), CertificateKind::ExcessBlack)
    } else {
        (closure(&free_w, &g.adj, &mate_b, &g.whites, &g.blacks), CertificateKind::ExcessWhite)
    };
    // Some component must carry the surplus; take the first one that does.
    let surplus = |f: &Figure| match kind {
        CertificateKind::ExcessBlack => f.black_count() > f.white_count(),
        CertificateKind::ExcessWhite => f.white_count() > f.black_count(),
    };
    let figure = cells.components().into_iter().find(surplus).expect("Hall violator has a surplus component");
    Some(Certificate { figure, kind })
}

/// Cells reachable from `free` (on side X) by alternating paths: X to any
/// neighbor on side Y, then Y back along its matching edge.
fn closure(
    free: &[usize],
    adj_x: &[Vec<usize>],
    mate_y: &[Option<usize>],
    xs: &[GridCoord],
    ys: &[GridCoord],
) -> Figure {
    let mut seen_x = vec![false; xs.len()];
    let mut seen_y: BTreeMap<usize, ()> = BTreeMap::new();
    let mut queue: VecDeque<usize> = free.iter().copied().collect();
    for &x in free {
        seen_x[x] = true;
    }
    while let Some(x) = queue.pop_front() {
        for &y in &adj_x[x] {
            if seen_y.insert(y, ()).is_none() {
                let x2 = mate_y[y].expect("a free neighbor would give an augmenting path");
                if !seen_x[x2] {
                    seen_x[x2] = true;
                    queue.push_back(x2);
                }
            }
        }
    }
    let mut fig: Figure = seen_y.keys().map(|&y| ys[y]).collect();
    for (x, s) in seen_x.iter().enumerate() {
        if *s {
            fig.insert(xs[x]);
        }
    }
    fig
}
