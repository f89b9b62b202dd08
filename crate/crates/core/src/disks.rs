//! Immersed-disk enumeration on a resolved diagram.
//!
//! The enumerator sweeps the diagram left to right, maintaining the
//! intersection of a disk-in-progress with the vertical line between
//! columns: a multiset of intervals, each endpoint riding a wire. Intervals
//! open at east corner wedges and birth caps, close at west wedges and loop
//! caps, change wires at negative corners, and merge or split where the
//! boundary wraps a cap. A completed evolution is accepted as a disk when
//! its boundary links close into a single cycle, the Euler count comes out
//! to 1, and the boundary turning number is 1.
//!
//! Corner sign convention: at every crossing the east and west quadrants
//! (the wedges between the two outgoing and the two incoming strand halves)
//! are positive; north and south are negative. The over strand of every
//! crossing of a resolved front is the descending one.

use crate::diagram::{Cap, Column, ResolvedDiagram};
use crate::error::{Error, Result};

/// The data the sweep needs: columns, wire layouts west of each column,
/// and, per crossing, whether the over strand is the page-descending one.
#[derive(Debug, Clone)]
pub struct SweepDiagram {
    pub columns: Vec<Column>,
    pub layouts: Vec<Vec<usize>>,
    pub over_descending: Vec<bool>,
    /// Cost charged per corner at each crossing; a disk's total corner cost
    /// is capped by [`DiskConfig::max_corner_cost`]. Zero everywhere for
    /// base diagrams; the copy diagrams charge the chord level, which a
    /// disk word can only spend twice over.
    pub corner_cost: Vec<usize>,
}

impl SweepDiagram {
    pub fn of_resolved(d: &ResolvedDiagram) -> SweepDiagram {
        SweepDiagram {
            columns: d.columns.clone(),
            layouts: d.layouts.clone(),
            over_descending: vec![true; d.crossings.len()],
            corner_cost: vec![0; d.crossings.len()],
        }
    }
}

/// Quadrant of a crossing occupied by a disk corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quadrant {
    North,
    East,
    South,
    West,
}

impl Quadrant {
    pub fn positive(self) -> bool {
        matches!(self, Quadrant::East | Quadrant::West)
    }
}

/// A corner of a disk. `positive` records the corner sign: for crossings
/// whose over strand descends on the page (every crossing of a resolved
/// front) the east/west quadrants are the positive ones; where the over
/// strand ascends, the signs flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiskCorner {
    pub crossing: usize,
    pub quadrant: Quadrant,
    pub positive: bool,
}

impl DiskCorner {
    pub fn positive(&self) -> bool {
        self.positive
    }
}

/// One step of a boundary arc between two corners.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArcStep {
    /// A run along `wire` between two of its event columns, in travel order
    /// (`eastbound` tells which way the knot boundary moves).
    Wire { wire: usize, col_from: usize, col_to: usize, eastbound: bool },
    /// The boundary wraps around a cap.
    Wrap(Cap),
}

/// Boundary arc following a corner, in counterclockwise travel order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiskArc {
    pub steps: Vec<ArcStep>,
}

/// An admissible immersed disk, up to reparametrization: corners in
/// counterclockwise order (`arcs[i]` follows `corners[i]`), rotated to the
/// lexicographically least corner sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Disk {
    pub corners: Vec<DiskCorner>,
    pub arcs: Vec<DiskArc>,
}

impl Disk {
    pub fn positive_count(&self) -> usize {
        self.corners.iter().filter(|c| c.positive()).count()
    }

    pub fn positive_indices(&self) -> Vec<usize> {
        (0..self.corners.len()).filter(|&i| self.corners[i].positive()).collect()
    }

    /// Negative-corner crossings counterclockwise starting after corner `k`.
    pub fn word_from(&self, k: usize) -> Vec<usize> {
        let n = self.corners.len();
        (1..n)
            .map(|step| &self.corners[(k + step) % n])
            .filter(|c| !c.positive())
            .map(|c| c.crossing)
            .collect()
    }

    /// Height positivity in the left-to-right height order: at the largest
    /// crossing with unequal positive/negative corner counts, the positives
    /// must dominate.
    pub fn stokes_positive(&self) -> bool {
        let mut net: std::collections::BTreeMap<usize, i64> = std::collections::BTreeMap::new();
        for c in &self.corners {
            *net.entry(c.crossing).or_insert(0) += if c.positive() { 1 } else { -1 };
        }
        for (_, v) in net.iter().rev() {
            if *v != 0 {
                return *v > 0;
            }
        }
        false
    }
}

/// Enumeration limits.
#[derive(Debug, Clone)]
pub struct DiskConfig {
    /// Maximum number of positive corners per disk.
    pub max_positive: usize,
    /// Hard cap on emitted disks.
    pub max_disks: usize,
    /// Cap on simultaneous section intervals.
    pub max_intervals: usize,
    /// Cap on explored search nodes.
    pub max_nodes: usize,
    /// Cap on the summed corner cost of a disk.
    pub max_corner_cost: usize,
    /// When set, positive corners are only allowed at these crossings.
    pub allowed_positive: Option<Vec<bool>>,
}

impl DiskConfig {
    pub fn budget(max_positive: usize) -> Self {
        DiskConfig {
            max_positive,
            max_disks: 1_000_000,
            max_intervals: 12,
            max_nodes: 80_000_000,
            max_corner_cost: usize::MAX,
            allowed_positive: None,
        }
    }

    fn positive_ok(&self, crossing: usize) -> bool {
        self.allowed_positive.as_ref().is_none_or(|a| a[crossing])
    }

    pub fn with_max_disks(mut self, max_disks: usize) -> Self {
        self.max_disks = max_disks;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Interval {
    top: usize,
    bot: usize,
    top_piece: usize,
    bot_piece: usize,
}

#[derive(Debug, Clone)]
struct Piece {
    wire: usize,
    col_start: usize,
    col_end: usize,
    is_top: bool,
}

#[derive(Debug, Clone, Copy)]
enum LinkLabel {
    Corner(DiskCorner),
    Wrap(Cap),
}

#[derive(Debug, Clone, Copy)]
struct Link {
    from: usize,
    to: usize,
    label: LinkLabel,
}

#[derive(Debug, Clone)]
struct PathState {
    intervals: Vec<Interval>,
    pieces: Vec<Piece>,
    links: Vec<Link>,
    opens: i64,
    closes: i64,
    saddles: i64,
    /// Net half-turns of the boundary: +1 per inside u-turn (positive
    /// corners, cap closes, birth spawns), -1 per outside u-turn (splits,
    /// merges around a cap).
    turns: i64,
    positives: usize,
    corner_cost: usize,
}

impl PathState {
    fn new() -> Self {
        PathState {
            intervals: Vec::new(),
            pieces: Vec::new(),
            links: Vec::new(),
            opens: 0,
            closes: 0,
            saddles: 0,
            turns: 0,
            positives: 0,
            corner_cost: 0,
        }
    }

    fn new_piece(&mut self, wire: usize, col: usize, is_top: bool) -> usize {
        self.pieces.push(Piece { wire, col_start: col, col_end: col, is_top });
        self.pieces.len() - 1
    }

    fn sort(&mut self) {
        self.intervals.sort_by_key(|iv| (iv.top, iv.bot, iv.top_piece, iv.bot_piece));
    }
}

/// Enumerates all admissible disks with between 1 and `cfg.max_positive`
/// positive corners, each exactly once.
pub fn enumerate_disks(diagram: &ResolvedDiagram, cfg: DiskConfig) -> Result<Vec<Disk>> {
    enumerate_disks_on(&SweepDiagram::of_resolved(diagram), cfg)
}

/// As [`enumerate_disks`], over any wiring diagram.
pub fn enumerate_disks_on(diagram: &SweepDiagram, cfg: DiskConfig) -> Result<Vec<Disk>> {
    let mut search = Search { d: diagram, cfg, disks: Vec::new(), nodes: 0 };
    for c0 in 0..diagram.columns.len() {
        for st in search.root_states(c0) {
            search.dfs(c0 + 1, st)?;
        }
    }
    Ok(search.disks)
}

struct Search<'a> {
    d: &'a SweepDiagram,
    cfg: DiskConfig,
    disks: Vec<Disk>,
    nodes: usize,
}

impl<'a> Search<'a> {
    /// Wires east of a crossing column at positions `pos`, `pos+1`.
    fn east_wires(&self, col: usize, pos: usize) -> (usize, usize) {
        let layout = &self.d.layouts[col];
        (layout[pos + 1], layout[pos])
    }

    /// Opening moves at column `c0` from the empty state. A disk is rooted
    /// at its leftmost event, so roots only create intervals.
    fn root_states(&mut self, c0: usize) -> Vec<PathState> {
        let mut out = Vec::new();
        match self.d.columns[c0] {
            Column::Birth { pos, .. } => {
                for m in 1..=2usize {
                    let mut st = PathState::new();
                    spawn_at_birth(&mut st, self.d, c0, pos, m);
                    st.sort();
                    out.push(st);
                }
            }
            Column::Cross { pos, crossing } => {
                for m in 1..=2usize {
                    let mut st = PathState::new();
                    if !self.spawn_east(&mut st, c0, pos, crossing, m) {
                        continue;
                    }
                    st.sort();
                    out.push(st);
                }
            }
            Column::Loop { pos, crossing, .. } => {
                for m in 1..=2usize {
                    let mut st = PathState::new();
                    if !self.spawn_east(&mut st, c0, pos, crossing, m) {
                        continue;
                    }
                    st.sort();
                    out.extend(self.cap_states(st, c0, pos));
                }
            }
            Column::Death { .. } => {}
        }
        out
    }

    fn dfs(&mut self, col: usize, state: PathState) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cfg.max_nodes {
            return Err(Error::CapExceeded(format!("disk search nodes > {}", self.cfg.max_nodes)));
        }
        if state.positives > self.cfg.max_positive
            || state.intervals.len() > self.cfg.max_intervals
            || state.corner_cost > self.cfg.max_corner_cost
        {
            return Ok(());
        }
        if state.intervals.is_empty() {
            self.finalize(state)?;
            return Ok(());
        }
        if col == self.d.columns.len() {
            return Ok(());
        }
        let succ = match self.d.columns[col] {
            Column::Birth { pos, .. } => self.birth_states(state, col, pos),
            Column::Cross { pos, crossing } => self.cross_states(state, col, pos, crossing),
            Column::Loop { pos, crossing, .. } => {
                let mut out = Vec::new();
                for st in self.cross_states(state, col, pos, crossing) {
                    out.extend(self.cap_states(st, col, pos));
                }
                out
            }
            Column::Death { pos, .. } => self.cap_states(state, col, pos),
        };
        for st in succ {
            self.dfs(col + 1, st)?;
        }
        Ok(())
    }

    fn birth_states(&self, mut state: PathState, col: usize, j: usize) -> Vec<PathState> {
        for iv in &mut state.intervals {
            if iv.top >= j {
                iv.top += 2;
            }
            if iv.bot >= j {
                iv.bot += 2;
            }
        }
        let spanning: Vec<usize> = (0..state.intervals.len())
            .filter(|&i| state.intervals[i].top < j && state.intervals[i].bot > j + 1)
            .collect();
        let mut out = Vec::new();
        let mut choice = vec![0u8; spanning.len()]; // 0 keep, 1 disjoint split, 2 overlap split
        loop {
            for m in 0..=2usize {
                let mut st = state.clone();
                for (k, &idx) in spanning.iter().enumerate() {
                    match choice[k] {
                        0 => {}
                        1 => split_disjoint(&mut st, self.d, col, j, idx),
                        _ => split_overlap(&mut st, self.d, col, j, idx),
                    }
                }
                spawn_at_birth(&mut st, self.d, col, j, m);
                st.sort();
                out.push(st);
            }
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return out;
                }
                choice[k] += 1;
                if choice[k] < 3 {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    fn cross_states(
        &self,
        state: PathState,
        col: usize,
        j: usize,
        crossing: usize,
    ) -> Vec<PathState> {
        #[derive(Clone, Copy)]
        enum Act {
            None,
            WClose,
            TopPass,
            TopS,
            BotPass,
            BotN,
        }
        let mut choices: Vec<Vec<Act>> = Vec::new();
        for iv in &state.intervals {
            let t = iv.top == j || iv.top == j + 1;
            let b = iv.bot == j || iv.bot == j + 1;
            let acts: Vec<Act> = match (t, b) {
                (false, false) => vec![Act::None],
                (true, true) => vec![Act::WClose], // necessarily [j, j+1]
                (true, false) => {
                    if iv.top == j {
                        vec![Act::TopPass]
                    } else {
                        vec![Act::TopPass, Act::TopS]
                    }
                }
                (false, true) => {
                    if iv.bot == j {
                        vec![Act::BotPass, Act::BotN]
                    } else {
                        vec![Act::BotPass]
                    }
                }
            };
            choices.push(acts);
        }
        let (e_up_wire, e_dn_wire) = self.east_wires(col, j);
        let mut out = Vec::new();
        let mut assignment = vec![0usize; choices.len()];
        loop {
            for spawns in 0..=2usize {
                let mut st = state.clone();
                let mut remove: Vec<usize> = Vec::new();
                let mut ok = true;
                for (i, &ai) in assignment.iter().enumerate() {
                    let act = choices[i][ai];
                    let iv = st.intervals[i];
                    match act {
                        Act::None => {}
                        Act::WClose => {
                            if self.d.over_descending[crossing] && !self.cfg.positive_ok(crossing) {
                                ok = false;
                                break;
                            }
                            st.pieces[iv.bot_piece].col_end = col;
                            st.pieces[iv.top_piece].col_end = col;
                            st.links.push(Link {
                                from: iv.bot_piece,
                                to: iv.top_piece,
                                label: LinkLabel::Corner(DiskCorner {
                                    crossing,
                                    quadrant: Quadrant::West,
                                    positive: self.d.over_descending[crossing],
                                }),
                            });
                            st.closes += 1;
                            st.turns += 1;
                            st.positives += usize::from(self.d.over_descending[crossing]);
                            st.corner_cost += self.d.corner_cost[crossing];
                            remove.push(i);
                        }
                        Act::TopPass => {
                            let iv = &mut st.intervals[i];
                            iv.top = if iv.top == j { j + 1 } else { j };
                        }
                        Act::TopS => {
                            if !self.d.over_descending[crossing] && !self.cfg.positive_ok(crossing) {
                                ok = false;
                                break;
                            }
                            let old = iv.top_piece;
                            st.pieces[old].col_end = col;
                            let np = st.new_piece(e_dn_wire, col, true);
                            st.links.push(Link {
                                from: np,
                                to: old,
                                label: LinkLabel::Corner(DiskCorner {
                                    crossing,
                                    quadrant: Quadrant::South,
                                    positive: !self.d.over_descending[crossing],
                                }),
                            });
                            st.positives += usize::from(!self.d.over_descending[crossing]);
                            st.corner_cost += self.d.corner_cost[crossing];
                            st.intervals[i].top_piece = np;
                        }
                        Act::BotPass => {
                            let iv = &mut st.intervals[i];
                            iv.bot = if iv.bot == j { j + 1 } else { j };
                        }
                        Act::BotN => {
                            if !self.d.over_descending[crossing] && !self.cfg.positive_ok(crossing) {
                                ok = false;
                                break;
                            }
                            let old = iv.bot_piece;
                            st.pieces[old].col_end = col;
                            let np = st.new_piece(e_up_wire, col, false);
                            st.links.push(Link {
                                from: old,
                                to: np,
                                label: LinkLabel::Corner(DiskCorner {
                                    crossing,
                                    quadrant: Quadrant::North,
                                    positive: !self.d.over_descending[crossing],
                                }),
                            });
                            st.positives += usize::from(!self.d.over_descending[crossing]);
                            st.corner_cost += self.d.corner_cost[crossing];
                            st.intervals[i].bot_piece = np;
                        }
                    }
                }
                let ok = ok
                    && st
                        .intervals
                        .iter()
                        .enumerate()
                        .all(|(i, iv)| remove.contains(&i) || iv.top < iv.bot);
                if ok {
                    for i in remove.iter().rev() {
                        st.intervals.remove(*i);
                    }
                    if self.spawn_east(&mut st, col, j, crossing, spawns) {
                        st.sort();
                        out.push(st);
                    }
                }
            }
            let mut k = 0;
            loop {
                if k == choices.len() {
                    return out;
                }
                assignment[k] += 1;
                if assignment[k] < choices[k].len() {
                    break;
                }
                assignment[k] = 0;
                k += 1;
            }
        }
    }

    /// Cap junctions at a loop column, applied to the post-crossing state.
    /// Every endpoint on the dying wires must pair: a bottom endpoint at `j`
    /// (or `j+1`) with a top endpoint at `j+1` (or `j`). Same-interval pairs
    /// close a sheet; cross pairs merge two sheets.
    fn cap_states(&self, state: PathState, col: usize, j: usize) -> Vec<PathState> {
        let cap = Cap { col, birth: false };
        let mut bot_j = Vec::new();
        let mut top_j1 = Vec::new();
        let mut bot_j1 = Vec::new();
        let mut top_j = Vec::new();
        for (i, iv) in state.intervals.iter().enumerate() {
            if iv.top == j {
                top_j.push(i);
            }
            if iv.top == j + 1 {
                top_j1.push(i);
            }
            if iv.bot == j {
                bot_j.push(i);
            }
            if iv.bot == j + 1 {
                bot_j1.push(i);
            }
        }
        if bot_j.len() != top_j1.len() || bot_j1.len() != top_j.len() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for m1 in permutations(top_j1.len()) {
            for m2 in permutations(top_j.len()) {
                // (bot interval, top interval, inside turn?)
                let mut pairs: Vec<(usize, usize, bool)> = Vec::new();
                for (k, &b) in bot_j.iter().enumerate() {
                    pairs.push((b, top_j1[m1[k]], false));
                }
                for (k, &b) in bot_j1.iter().enumerate() {
                    pairs.push((b, top_j[m2[k]], true));
                }
                if let Some(st) = self.apply_cap_pairs(&state, col, j, cap, &pairs) {
                    out.push(st);
                }
            }
        }
        out
    }

    fn apply_cap_pairs(
        &self,
        state: &PathState,
        col: usize,
        j: usize,
        cap: Cap,
        pairs: &[(usize, usize, bool)],
    ) -> Option<PathState> {
        let mut st = state.clone();
        let n = st.intervals.len();
        let mut parent: Vec<usize> = (0..n).collect();
        let mut alive = vec![true; n];
        let mut data = st.intervals.clone();
        fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for &(b, t, inside) in pairs {
            let bp = state.intervals[b].bot_piece;
            let tp = state.intervals[t].top_piece;
            st.pieces[bp].col_end = col;
            st.pieces[tp].col_end = col;
            st.links.push(Link { from: bp, to: tp, label: LinkLabel::Wrap(cap) });
            st.turns += if inside { 1 } else { -1 };
            let rb = find(&mut parent, b);
            let rt = find(&mut parent, t);
            if rb == rt {
                st.closes += 1;
                alive[rb] = false;
            } else {
                st.saddles += 1;
                let merged = Interval {
                    top: data[rb].top,
                    top_piece: data[rb].top_piece,
                    bot: data[rt].bot,
                    bot_piece: data[rt].bot_piece,
                };
                parent[rt] = rb;
                alive[rt] = false;
                data[rb] = merged;
            }
        }
        let mut keep = Vec::new();
        for i in 0..n {
            if alive[i] && find(&mut parent, i) == i {
                keep.push(data[i]);
            }
        }
        for iv in &keep {
            if iv.top >= j && iv.top <= j + 1 || iv.bot >= j && iv.bot <= j + 1 {
                return None; // unpaired endpoint on a dying wire
            }
            if iv.top >= iv.bot {
                return None;
            }
        }
        st.intervals = keep;
        for iv in &mut st.intervals {
            if iv.top > j + 1 {
                iv.top -= 2;
            }
            if iv.bot > j + 1 {
                iv.bot -= 2;
            }
        }
        st.sort();
        Some(st)
    }

    /// Opens `m` east-wedge intervals; returns false when the positive
    /// budget is exceeded.
    fn spawn_east(&self, st: &mut PathState, col: usize, j: usize, crossing: usize, m: usize) -> bool {
        let (e_up_wire, e_dn_wire) = self.east_wires(col, j);
        let positive = self.d.over_descending[crossing];
        if m > 0 && positive && !self.cfg.positive_ok(crossing) {
            return false;
        }
        for _ in 0..m {
            let tp = st.new_piece(e_up_wire, col, true);
            let bp = st.new_piece(e_dn_wire, col, false);
            st.links.push(Link {
                from: tp,
                to: bp,
                label: LinkLabel::Corner(DiskCorner { crossing, quadrant: Quadrant::East, positive }),
            });
            st.intervals.push(Interval { top: j, bot: j + 1, top_piece: tp, bot_piece: bp });
            st.opens += 1;
            st.turns += 1;
            st.positives += usize::from(positive);
            st.corner_cost += self.d.corner_cost[crossing];
        }
        st.positives <= self.cfg.max_positive && st.corner_cost <= self.cfg.max_corner_cost
    }

    fn finalize(&mut self, state: PathState) -> Result<()> {
        if state.opens + state.closes != 2 + state.saddles {
            return Ok(()); // Euler characteristic != 1
        }
        if state.turns != 2 {
            return Ok(()); // boundary turning number != 1
        }
        let n = state.pieces.len();
        if n == 0 {
            return Ok(());
        }
        let mut next = vec![usize::MAX; n];
        let mut link_from = vec![usize::MAX; n];
        for (li, l) in state.links.iter().enumerate() {
            if next[l.from] != usize::MAX {
                return Ok(());
            }
            next[l.from] = l.to;
            link_from[l.from] = li;
        }
        if next.iter().any(|&x| x == usize::MAX) {
            return Ok(());
        }
        let mut order = Vec::with_capacity(n);
        let mut cur = 0usize;
        loop {
            order.push(cur);
            cur = next[cur];
            if cur == 0 {
                break;
            }
            if order.len() > n {
                return Ok(());
            }
        }
        if order.len() != n {
            return Ok(()); // boundary is not a single circle
        }
        let mut corners = Vec::new();
        let mut arcs: Vec<DiskArc> = vec![DiskArc { steps: Vec::new() }];
        for &p in &order {
            let link = state.links[link_from[p]];
            let piece = &state.pieces[p];
            let (f, t) = if piece.is_top {
                (piece.col_end, piece.col_start)
            } else {
                (piece.col_start, piece.col_end)
            };
            arcs.last_mut().unwrap().steps.push(ArcStep::Wire {
                wire: piece.wire,
                col_from: f,
                col_to: t,
                eastbound: !piece.is_top,
            });
            match link.label {
                LinkLabel::Corner(c) => {
                    corners.push(c);
                    arcs.push(DiskArc { steps: Vec::new() });
                }
                LinkLabel::Wrap(cap) => {
                    arcs.last_mut().unwrap().steps.push(ArcStep::Wrap(cap));
                }
            }
        }
        if corners.is_empty() {
            return Ok(());
        }
        // steps before the first corner belong after the last corner
        let head = arcs.remove(0);
        let m = corners.len();
        debug_assert_eq!(arcs.len(), m);
        arcs[m - 1].steps.extend(head.steps);
        let rot = (0..m)
            .min_by_key(|&r| (0..m).map(|i| corners[(r + i) % m]).collect::<Vec<_>>())
            .unwrap();
        let corners: Vec<DiskCorner> = (0..m).map(|i| corners[(rot + i) % m]).collect();
        let arcs: Vec<DiskArc> = (0..m).map(|i| arcs[(rot + i) % m].clone()).collect();
        let disk = Disk { corners, arcs };
        if self.disks.len() >= self.cfg.max_disks {
            return Err(Error::CapExceeded(format!("more than {} disks", self.cfg.max_disks)));
        }
        self.disks.push(disk);
        Ok(())
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    match n {
        0 => vec![vec![]],
        1 => vec![vec![0]],
        2 => vec![vec![0, 1], vec![1, 0]],
        _ => {
            let mut out = Vec::new();
            for tail in permutations(n - 1) {
                for slot in 0..n {
                    let mut p = Vec::with_capacity(n);
                    p.extend(tail.iter().map(|&x| if x >= slot { x + 1 } else { x }));
                    p.insert(slot.min(p.len()), slot);
                    let _ = &p;
                    out.push(p);
                }
            }
            // de-duplicate; n stays tiny so this is fine
            out.sort();
            out.dedup();
            out
        }
    }
}

/// Spawns `m` intervals `[j, j+1]` at a birth cap (the boundary rounds the
/// cap from the east; no corner, one inside turn each).
fn spawn_at_birth(st: &mut PathState, d: &SweepDiagram, col: usize, j: usize, m: usize) {
    let wire_top = d.layouts[col + 1][j];
    let wire_bot = d.layouts[col + 1][j + 1];
    for _ in 0..m {
        let tp = st.new_piece(wire_top, col, true);
        let bp = st.new_piece(wire_bot, col, false);
        st.links.push(Link { from: tp, to: bp, label: LinkLabel::Wrap(Cap { col, birth: true }) });
        st.intervals.push(Interval { top: j, bot: j + 1, top_piece: tp, bot_piece: bp });
        st.opens += 1;
        st.turns += 1;
    }
}

/// Splits interval `idx` around a birth cap into disjoint halves:
/// `[a,c] -> [a,j] + [j+1,c]` (outside turn).
fn split_disjoint(st: &mut PathState, d: &SweepDiagram, col: usize, j: usize, idx: usize) {
    let iv = st.intervals[idx];
    let wire_top = d.layouts[col + 1][j];
    let wire_bot = d.layouts[col + 1][j + 1];
    let nb = st.new_piece(wire_top, col, false); // new bottom of the upper half
    let nt = st.new_piece(wire_bot, col, true); // new top of the lower half
    st.links.push(Link { from: nt, to: nb, label: LinkLabel::Wrap(Cap { col, birth: true }) });
    st.intervals[idx] = Interval { top: iv.top, bot: j, top_piece: iv.top_piece, bot_piece: nb };
    st.intervals.push(Interval { top: j + 1, bot: iv.bot, top_piece: nt, bot_piece: iv.bot_piece });
    st.saddles += 1;
    st.turns -= 1;
}

/// Splits interval `idx` around a birth cap into overlapping halves:
/// `[a,c] -> [a,j+1] + [j,c]` (inside turn).
fn split_overlap(st: &mut PathState, d: &SweepDiagram, col: usize, j: usize, idx: usize) {
    let iv = st.intervals[idx];
    let wire_top = d.layouts[col + 1][j];
    let wire_bot = d.layouts[col + 1][j + 1];
    let nt = st.new_piece(wire_top, col, true); // new top of the lower half
    let nb = st.new_piece(wire_bot, col, false); // new bottom of the upper half
    st.links.push(Link { from: nt, to: nb, label: LinkLabel::Wrap(Cap { col, birth: true }) });
    st.intervals[idx] = Interval { top: iv.top, bot: j + 1, top_piece: iv.top_piece, bot_piece: nb };
    st.intervals.push(Interval { top: j, bot: iv.bot, top_piece: nt, bot_piece: iv.bot_piece });
    st.saddles += 1;
    st.turns += 1;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_front;

    #[test]
    fn unknot_budget_one() {
        let d = crate::diagram::resolve(&parse_front("L1 R1").unwrap()).unwrap();
        let disks = enumerate_disks(&d, DiskConfig::budget(1)).unwrap();
        let one: Vec<&Disk> = disks.iter().filter(|k| k.positive_count() == 1).collect();
        assert_eq!(one.len(), 2, "{disks:#?}");
        for k in &one {
            assert_eq!(k.corners.len(), 1);
            assert_eq!(k.corners[0].crossing, 0);
            assert!(k.corners[0].positive());
            assert!(k.word_from(0).is_empty());
        }
    }

    #[test]
    fn stokes_on_trefoil() {
        let d = crate::diagram::resolve(&parse_front("L1 L1 X2 X2 X2 R1 R1").unwrap()).unwrap();
        let disks = enumerate_disks(&d, DiskConfig::budget(2)).unwrap();
        assert!(!disks.is_empty());
        for k in &disks {
            assert!(k.stokes_positive(), "{k:?}");
        }
    }
}
