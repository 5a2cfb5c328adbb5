use crate::layout::{BrickId, Layout, Region};
use crate::system::MiniId;
use crate::RestrictionError;
use grid_core::{Color, GridCoord};
use matching_engine::match_dented_square;
use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

const NONE: u32 = u32::MAX;

/// Perfect matching of a dented square in local coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalMatching {
    pub side: i32,
    partner: Vec<u32>,
}

impl LocalMatching {
    pub fn partner(&self, r: i32, c: i32) -> Option<(i32, i32)> {
        let p = self.partner[(r * self.side + c) as usize];
        (p != NONE).then(|| (p as i32 / self.side, p as i32 % self.side))
    }

    pub fn joins(&self, a: (i32, i32), b: (i32, i32)) -> bool {
        self.partner(a.0, a.1) == Some(b)
    }
}

type DentKey = (i32, Vec<(i32, i32)>);

/// Memoized [`match_dented_square`] on local coordinates.
pub fn local_matching(side: i32, dents: &BTreeSet<(i32, i32)>) -> Result<Arc<LocalMatching>, RestrictionError> {
    static CACHE: OnceLock<Mutex<HashMap<DentKey, Arc<LocalMatching>>>> = OnceLock::new();
    let key: DentKey = (side, dents.iter().copied().collect());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(m) = cache.lock().expect("matching cache").get(&key) {
        return Ok(m.clone());
    }
    let cells: BTreeSet<GridCoord> = dents.iter().map(|&(r, c)| GridCoord::new(r, c)).collect();
    let m = match_dented_square(side, &cells)
        .ok_or_else(|| RestrictionError::Assembly(format!("side-{side} square with dents {:?} has no perfect matching", key.1)))?;
    let mut partner = vec![NONE; (side * side) as usize];
    for d in &m.dominoes {
        let (a, b) = d.cells();
        partner[(a.row * side + a.col) as usize] = (b.row * side + b.col) as u32;
        partner[(b.row * side + b.col) as usize] = (a.row * side + a.col) as u32;
    }
    let lm = Arc::new(LocalMatching { side, partner });
    let mut guard = cache.lock().expect("matching cache");
    if side <= 64 || guard.len() < 64 {
        guard.insert(key, lm.clone());
    }
    Ok(lm)
}

/// Local matchings of every brick and mini-square for one assignment of
/// path types. Fixed paths always have type 1.
#[derive(Debug, Clone)]
pub struct Assembly {
    /// Type of every layout path.
    pub y: Vec<bool>,
    pub bricks: HashMap<BrickId, Arc<LocalMatching>>,
    plain_brick: Arc<LocalMatching>,
    pub minis: Vec<Option<Arc<LocalMatching>>>,
}

/// Type of every layout path from the variable bits.
pub fn path_types(layout: &Layout, var_bits: &[bool]) -> Vec<bool> {
    layout
        .paths
        .iter()
        .map(|p| match p.kind {
            crate::PathKind::Variable(i) => var_bits[layout.system.var_path(p.pair, i)],
            crate::PathKind::Fixed(_) => true,
        })
        .collect()
}

pub fn brick_dents(layout: &Layout, b: BrickId, y: &[bool]) -> BTreeSet<(i32, i32)> {
    let o = layout.brick_origin(b);
    let mut dents = BTreeSet::new();
    for &pid in layout.paths_in_brick(b) {
        if !y[pid] {
            continue;
        }
        let s = layout.paths[pid].steps.iter().find(|s| s.brick == b).expect("path visits brick");
        dents.insert((s.entry.row - o.row, s.entry.col - o.col));
        dents.insert((s.exit.row - o.row, s.exit.col - o.col));
    }
    dents
}

pub fn mini_dents(layout: &Layout, mini: MiniId, y: &[bool]) -> BTreeSet<(i32, i32)> {
    let o = layout.mini_origin(mini);
    layout.mini_attachments(mini).iter().filter(|(pid, _)| y[*pid]).map(|(_, c)| (c.row - o.row, c.col - o.col)).collect()
}

/// The white centre cell of the survivor.
pub fn survivor_centre(layout: &Layout) -> (i32, i32) {
    let h = (layout.params.survivor_side() - 1) / 2;
    (h, h)
}

impl Assembly {
    /// Matches every brick and every mini-square outside `skip`. A survivor
    /// with balanced dents gets its centre as one more dent.
    pub fn new(layout: &Layout, y: Vec<bool>, skip: &BTreeSet<MiniId>) -> Result<Assembly, RestrictionError> {
        let mut bricks = HashMap::new();
        for b in layout.used_bricks() {
            bricks.insert(b, local_matching(layout.params.brick, &brick_dents(layout, b, &y))?);
        }
        let plain_brick = local_matching(layout.params.brick, &BTreeSet::new())?;
        let mut minis = vec![None; layout.system.num_minis()];
        for (mini, slot) in minis.iter_mut().enumerate() {
            if skip.contains(&mini) {
                continue;
            }
            let mut dents = mini_dents(layout, mini, &y);
            if mini == layout.system.survivor() {
                let whites = dents.iter().filter(|&&(r, c)| (r + c) % 2 == 0).count();
                if 2 * whites == dents.len() {
                    dents.insert(survivor_centre(layout));
                }
            }
            *slot = Some(local_matching(layout.mini_side(mini), &dents)?);
        }
        Ok(Assembly { y, bricks, plain_brick, minis })
    }

    pub fn brick(&self, b: BrickId) -> &LocalMatching {
        self.bricks.get(&b).unwrap_or(&self.plain_brick)
    }

    /// Value of `x_e` in the assembled matching. Edges inside skipped
    /// mini-squares read as 0.
    pub fn edge_value(&self, layout: &Layout, a: GridCoord, b: GridCoord) -> bool {
        match (layout.locate(a), layout.locate(b)) {
            (Region::Mini(x, ar, ac), Region::Mini(y, br, bc)) if x == y => {
                self.minis[x].as_ref().is_some_and(|m| m.joins((ar, ac), (br, bc)))
            }
            (Region::Brick(p, ar, ac), Region::Brick(q, br, bc)) if p == q => self.brick(p).joins((ar, ac), (br, bc)),
            (Region::Strip, Region::Strip) => layout.strip_partner(a) == Some(b),
            _ => layout.crossing_path(grid_core::Domino::new(a, b)).is_some_and(|pid| self.y[pid]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct NewMatchingReport {
    pub cells: usize,
    pub matched: usize,
    /// Cells covered by no edge; exactly the survivor centre when the check
    /// passes.
    pub uncovered: Vec<GridCoord>,
    pub overcovered: Vec<GridCoord>,
}

impl NewMatchingReport {
    pub fn is_near_perfect(&self) -> bool {
        self.overcovered.is_empty() && self.uncovered.len() == 1 && self.uncovered[0].color() == Color::White
    }
}

/// Assembles the whole-grid matching for balanced variable bits and counts
/// the true edges at every cell. The odd grid has no perfect matching, so
/// the best possible outcome leaves one white survivor cell uncovered.
pub fn check_newmatching(layout: &Layout, var_bits: &[bool]) -> Result<NewMatchingReport, RestrictionError> {
    let asm = Assembly::new(layout, path_types(layout, var_bits), &BTreeSet::new())?;
    let n = layout.params.n;
    let mut report = NewMatchingReport { cells: (n * n) as usize, matched: 0, uncovered: Vec::new(), overcovered: Vec::new() };
    for r in 1..=n {
        for c in 1..=n {
            let v = GridCoord::new(r, c);
            let count = v.neighbors().into_iter().filter(|w| w.in_grid(n) && asm.edge_value(layout, v, *w)).count();
            match count {
                0 => report.uncovered.push(v),
                1 => report.matched += 1,
                _ => report.overcovered.push(v),
            }
        }
    }
    Ok(report)
}
