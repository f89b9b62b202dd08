//! Independent brute-force disk enumerator and the planar face structure.
//!
//! The oracle enumerates closed boundary paths along the diagram with only
//! convex corners, then verifies immersion data: boundary turning number 1
//! and a nonnegative face-multiplicity vector obtained by jumping by one
//! across each boundary edge. It shares no code with the sweep in
//! [`crate::disks`] and is used to cross-check it on small diagrams.
//!
//! Edges of the planar 4-valent graph are the traversal slots (arcs of the
//! knot between consecutive passages, rounding caps). Dart `2k` travels
//! slot `k` in the traversal direction, dart `2k+1` the other way.

use crate::diagram::{Cap, Column, ResolvedDiagram, Role, Waypoint};
use crate::disks::{ArcStep, Disk, DiskArc, DiskCorner, Quadrant};
use std::collections::{BTreeMap, BTreeSet};

/// The four half-edges around a crossing, in counterclockwise rotation
/// order starting just above east.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Half {
    EUp,
    WUp,
    WDn,
    EDn,
}

fn cw_next(h: Half) -> Half {
    match h {
        Half::EUp => Half::EDn,
        Half::WUp => Half::EUp,
        Half::WDn => Half::WUp,
        Half::EDn => Half::WDn,
    }
}

/// Quadrant between `h_out` and the arrival half `h_in`, where
/// `h_out = cw_next(h_in)`; this is the sector a convex left-turn corner
/// occupies.
fn quadrant_of(h_in: Half) -> Quadrant {
    match h_in {
        Half::EUp => Quadrant::East,  // out = EDn
        Half::WUp => Quadrant::North, // out = EUp
        Half::WDn => Quadrant::West,  // out = WUp
        Half::EDn => Quadrant::South, // out = WDn
    }
}

#[derive(Debug, Clone)]
struct Edge {
    /// (crossing, half) at the tail (traversal-out) and head (traversal-in).
    tail: (usize, Half),
    head: (usize, Half),
    /// Arc steps in traversal direction.
    steps: Vec<ArcStep>,
    /// Sum of cap half-turns in traversal direction (+1 inside, -1 outside).
    cap_turns: i64,
}

/// Planar structure: edges, faces and dart incidences.
#[derive(Debug, Clone)]
pub struct Planar {
    edges: Vec<Edge>,
    /// Faces as dart cycles; `faces[0]` is the outer face.
    pub faces: Vec<Vec<usize>>,
    /// Left face of each dart.
    pub left_face: Vec<usize>,
}

fn passage_halves(role: Role, east: bool) -> (Half, Half) {
    // (enter, leave) halves of a passage
    match (role, east) {
        (Role::Over, true) => (Half::WUp, Half::EDn),
        (Role::Over, false) => (Half::EDn, Half::WUp),
        (Role::Under, true) => (Half::WDn, Half::EUp),
        (Role::Under, false) => (Half::EUp, Half::WDn),
    }
}

fn wire_of_half(d: &ResolvedDiagram, crossing: usize, h: Half) -> usize {
    let c = &d.crossings[crossing];
    match h {
        Half::WUp | Half::EDn => c.over_wire,
        Half::WDn | Half::EUp => c.under_wire,
    }
}

fn cap_wires(d: &ResolvedDiagram, cap: Cap) -> (usize, usize) {
    // (upper wire, lower wire) in page position at the cap
    match d.columns[cap.col] {
        Column::Birth { top, bot, .. } => (top, bot),
        Column::Loop { top, bot, .. } => (top, bot),
        Column::Death { top, bot, .. } => (top, bot),
        Column::Cross { .. } => unreachable!("cap at a plain crossing column"),
    }
}

/// Half-turn of the boundary rounding `cap`, arriving on `wire`.
fn cap_turn(d: &ResolvedDiagram, cap: Cap, arriving_wire: usize) -> i64 {
    let (top, bot) = cap_wires(d, cap);
    debug_assert!(arriving_wire == top || arriving_wire == bot);
    if cap.birth {
        // arriving travelling west; inside turn when on the upper wire
        if arriving_wire == top {
            1
        } else {
            -1
        }
    } else {
        // arriving travelling east; inside turn when on the lower wire
        if arriving_wire == bot {
            1
        } else {
            -1
        }
    }
}

/// Builds the planar structure of a resolved diagram.
pub fn build_planar(d: &ResolvedDiagram) -> Planar {
    let t = &d.traversal;
    let n = t.passages.len();
    let mut edges = Vec::with_capacity(n);
    for k in 0..n {
        let p = t.passages[k];
        let q = t.passages[(k + 1) % n];
        let (_, leave) = passage_halves(p.role, p.east);
        let (enter, _) = passage_halves(q.role, q.east);
        // walk waypoints building steps
        let mut steps = Vec::new();
        let mut cap_turns = 0i64;
        let mut wire = wire_of_half(d, p.crossing, leave);
        let mut col = d.crossings[p.crossing].col;
        for wp in &t.slots[k] {
            match *wp {
                Waypoint::Gap(g) => debug_assert_eq!(g.wire, wire),
                Waypoint::Cap(cap) => {
                    steps.push(ArcStep::Wire {
                        wire,
                        col_from: col,
                        col_to: cap.col,
                        eastbound: cap.col >= col,
                    });
                    steps.push(ArcStep::Wrap(cap));
                    cap_turns += cap_turn(d, cap, wire);
                    let (top, bot) = cap_wires(d, cap);
                    wire = if wire == top { bot } else { top };
                    col = cap.col;
                }
            }
        }
        let end_col = d.crossings[q.crossing].col;
        steps.push(ArcStep::Wire { wire, col_from: col, col_to: end_col, eastbound: end_col >= col });
        debug_assert_eq!(wire, wire_of_half(d, q.crossing, enter));
        edges.push(Edge {
            tail: (p.crossing, leave),
            head: (q.crossing, enter),
            steps,
            cap_turns,
        });
    }

    // dart incidence: dart 2k tail->head, 2k+1 head->tail
    // outgoing dart at a (crossing, half); each half hosts exactly one end
    let mut out_at: BTreeMap<(usize, Half), usize> = BTreeMap::new();
    for (k, e) in edges.iter().enumerate() {
        out_at.insert(e.tail, 2 * k);
        out_at.insert(e.head, 2 * k + 1);
    }
    let head_of = |dart: usize| -> (usize, Half) {
        let e = &edges[dart / 2];
        if dart % 2 == 0 {
            e.head
        } else {
            e.tail
        }
    };
    // face successor: arrive at (v, h): leave via cw_next(h)
    let next_dart = |dart: usize| -> usize {
        let (v, h) = head_of(dart);
        out_at[&(v, cw_next(h))]
    };

    let nd = 2 * edges.len();
    let mut left_face = vec![usize::MAX; nd];
    let mut faces = Vec::new();
    for d0 in 0..nd {
        if left_face[d0] != usize::MAX {
            continue;
        }
        let mut cycle = Vec::new();
        let mut cur = d0;
        loop {
            left_face[cur] = faces.len();
            cycle.push(cur);
            cur = next_dart(cur);
            if cur == d0 {
                break;
            }
        }
        faces.push(cycle);
    }

    // outer face: total turning -2 (in half-turns of pi)
    let turning = |face: &[usize]| -> i64 {
        let mut t_sum = 0i64;
        for &dart in face {
            let e = &edges[dart / 2];
            t_sum += if dart % 2 == 0 { e.cap_turns } else { -e.cap_turns };
            let (_, h_in) = head_of(dart);
            t_sum += match quadrant_of(h_in) {
                Quadrant::East | Quadrant::West => 1,
                _ => 0,
            };
        }
        t_sum
    };
    let outer = (0..faces.len())
        .find(|&f| turning(&faces[f]) == -2)
        .expect("no outer face found");
    faces.swap(0, outer);
    for lf in left_face.iter_mut() {
        if *lf == 0 {
            *lf = outer;
        } else if *lf == outer {
            *lf = 0;
        }
    }
    Planar { edges, faces, left_face }
}

/// Face boundaries as dart lists (outer face first), for
/// [`ResolvedDiagram::faces`].
pub fn faces_of(d: &ResolvedDiagram) -> Vec<Vec<usize>> {
    build_planar(d).faces
}

/// Limits for the brute-force search.
#[derive(Debug, Clone, Copy)]
pub struct BruteConfig {
    pub max_positive: usize,
    pub max_corners: usize,
    pub max_edge_steps: usize,
}

impl BruteConfig {
    pub fn budget(max_positive: usize) -> Self {
        BruteConfig { max_positive, max_corners: 8, max_edge_steps: 24 }
    }
}

/// Enumerates admissible disks by exhaustive search over closed
/// convex-corner boundary paths, rooted at a positive corner; immersion is
/// verified via the boundary turning number and nonnegative face
/// multiplicities obtained by jumping by one across boundary edges.
///
/// For a one-positive-corner search the height order prunes hard: every
/// negative corner lies strictly left of the positive one except corners at
/// the positive corner's own crossing.
pub fn enumerate_disks_brute(d: &ResolvedDiagram, cfg: BruteConfig) -> crate::error::Result<Vec<Disk>> {
    let p = build_planar(d);
    let mut out_at: BTreeMap<(usize, Half), usize> = BTreeMap::new();
    for (k, e) in p.edges.iter().enumerate() {
        out_at.insert(e.tail, 2 * k);
        out_at.insert(e.head, 2 * k + 1);
    }
    let col_of: Vec<usize> = d.crossings.iter().map(|c| c.col).collect();
    let mut ctx = Brute {
        p: &p,
        cfg,
        out_at,
        col_of,
        nodes: 0,
        found: BTreeSet::new(),
        out: Vec::new(),
    };
    // roots: positive corner at (crossing, E) or (crossing, W)
    for x in 0..d.crossings.len() {
        for h_in in [Half::EUp, Half::WDn] {
            let root = DiskCorner {
                crossing: x,
                quadrant: quadrant_of(h_in),
                positive: quadrant_of(h_in).positive(),
            };
            debug_assert!(root.quadrant.positive());
            let start = ctx.out_at[&(x, cw_next(h_in))];
            let mut seq: Vec<(usize, Option<DiskCorner>)> = vec![(start, None)];
            ctx.explore(x, h_in, root, &mut seq, 1, 0)?;
        }
    }
    Ok(ctx.out)
}

struct Brute<'a> {
    p: &'a Planar,
    cfg: BruteConfig,
    out_at: BTreeMap<(usize, Half), usize>,
    col_of: Vec<usize>,
    nodes: usize,
    found: BTreeSet<Disk>,
    out: Vec<Disk>,
}

impl<'a> Brute<'a> {
    fn head_of(&self, dart: usize) -> (usize, Half) {
        let e = &self.p.edges[dart / 2];
        if dart % 2 == 0 {
            e.head
        } else {
            e.tail
        }
    }

    /// `seq[i] = (dart, corner entering that dart)`; the root positive
    /// corner closes the cycle and is not stored in `seq`.
    fn explore(
        &mut self,
        x: usize,
        h_close: Half,
        root: DiskCorner,
        seq: &mut Vec<(usize, Option<DiskCorner>)>,
        positives: usize,
        straight_run: usize,
    ) -> crate::error::Result<()> {
        self.nodes += 1;
        if self.nodes > 50_000_000 {
            return Err(crate::error::Error::CapExceeded("oracle search nodes".into()));
        }
        if seq.len() > self.cfg.max_edge_steps {
            return Ok(());
        }
        let corners = 1 + seq.iter().filter(|(_, c)| c.is_some()).count();
        if corners > self.cfg.max_corners {
            return Ok(());
        }
        let (dart, _) = *seq.last().unwrap();
        let (v, h) = self.head_of(dart);
        // closure with the root corner
        if (v, h) == (x, h_close) {
            self.finish(root, seq)?;
        }
        // straight pass; a full straight circuit of the knot is never part
        // of a disk boundary (it would wind the outer face)
        if straight_run < 2 * self.p.edges.len() {
            let straight = match h {
                Half::WUp => Half::EDn,
                Half::EDn => Half::WUp,
                Half::WDn => Half::EUp,
                Half::EUp => Half::WDn,
            };
            seq.push((self.out_at[&(v, straight)], None));
            self.explore(x, h_close, root, seq, positives, straight_run + 1)?;
            seq.pop();
        }
        // convex corner
        let q = quadrant_of(h);
        let allowed = if q.positive() {
            positives < self.cfg.max_positive
        } else {
            // height-order prune is exact only in the one-positive search
            self.cfg.max_positive > 1 || self.col_of[v] < self.col_of[x] || v == x
        };
        if allowed {
            let npos = positives + usize::from(q.positive());
            let corner = DiskCorner { crossing: v, quadrant: q, positive: q.positive() };
            seq.push((self.out_at[&(v, cw_next(h))], Some(corner)));
            self.explore(x, h_close, root, seq, npos, 0)?;
            seq.pop();
        }
        Ok(())
    }

    fn finish(&mut self, root: DiskCorner, seq: &[(usize, Option<DiskCorner>)]) -> crate::error::Result<()> {
        // turning number must be 1 (two half-turns of pi)
        let mut turning: i64 = 1; // the root corner
        for &(dart, corner) in seq {
            let e = &self.p.edges[dart / 2];
            turning += if dart % 2 == 0 { e.cap_turns } else { -e.cap_turns };
            if let Some(c) = corner {
                if c.quadrant.positive() {
                    turning += 1;
                }
            }
        }
        if turning != 2 {
            return Ok(());
        }
        // face multiplicities from the winding of the path
        let nf = self.p.faces.len();
        let mut net: BTreeMap<usize, i64> = BTreeMap::new();
        for &(dart, _) in seq {
            *net.entry(dart / 2).or_insert(0) += if dart % 2 == 0 { 1 } else { -1 };
        }
        let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); nf];
        for e in 0..self.p.edges.len() {
            let lf = self.p.left_face[2 * e];
            let rf = self.p.left_face[2 * e + 1];
            let w = net.get(&e).copied().unwrap_or(0);
            adj[rf].push((lf, w));
            adj[lf].push((rf, -w));
        }
        let mut m = vec![i64::MIN; nf];
        m[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(f) = queue.pop_front() {
            let base = m[f];
            for &(g, w) in &adj[f].clone() {
                if m[g] == i64::MIN {
                    m[g] = base + w;
                    queue.push_back(g);
                } else if m[g] != base + w {
                    return Ok(());
                }
            }
        }
        if m.iter().any(|&v| v == i64::MIN || v < 0) {
            return Ok(());
        }
        // every corner's quadrant must be covered: it is the left face of
        // the dart leaving the corner
        for (i, &(dart, corner)) in seq.iter().enumerate() {
            let _ = i;
            if corner.is_some() && m[self.p.left_face[dart]] < 1 {
                return Ok(());
            }
        }
        if m[self.p.left_face[seq[0].0]] < 1 {
            return Ok(()); // root corner quadrant
        }
        // assemble: corners in ccw order starting at the root
        let mut corners = vec![root];
        let mut arcs: Vec<DiskArc> = vec![DiskArc { steps: Vec::new() }];
        for &(dart, corner) in seq {
            if let Some(c) = corner {
                corners.push(c);
                arcs.push(DiskArc { steps: Vec::new() });
            }
            let e = &self.p.edges[dart / 2];
            let steps = &mut arcs.last_mut().unwrap().steps;
            if dart % 2 == 0 {
                steps.extend(e.steps.iter().cloned());
            } else {
                for st in e.steps.iter().rev() {
                    steps.push(match st {
                        ArcStep::Wire { wire, col_from, col_to, eastbound } => ArcStep::Wire {
                            wire: *wire,
                            col_from: *col_to,
                            col_to: *col_from,
                            eastbound: !eastbound,
                        },
                        ArcStep::Wrap(cap) => ArcStep::Wrap(*cap),
                    });
                }
            }
        }
        let k = corners.len();
        let rot = (0..k)
            .min_by_key(|&r| (0..k).map(|i| corners[(r + i) % k]).collect::<Vec<_>>())
            .unwrap();
        let corners: Vec<DiskCorner> = (0..k).map(|i| corners[(rot + i) % k]).collect();
        let arcs: Vec<DiskArc> = (0..k).map(|i| arcs[(rot + i) % k].clone()).collect();
        let disk = Disk { corners, arcs };
        if self.found.insert(disk.clone()) {
            self.out.push(disk);
        }
        Ok(())
    }
}

/// Normalizes a disk's arcs by fusing consecutive wire steps on the same
/// wire and dropping direction flags, so disks from different enumerators
/// compare equal.
pub fn normalize_disk(disk: &Disk) -> Disk {
    let arcs = disk
        .arcs
        .iter()
        .map(|arc| {
            let mut steps: Vec<ArcStep> = Vec::new();
            for s in &arc.steps {
                let s = match *s {
                    ArcStep::Wire { wire, col_from, col_to, .. } => ArcStep::Wire {
                        wire,
                        col_from: col_from.min(col_to),
                        col_to: col_from.max(col_to),
                        eastbound: true,
                    },
                    ArcStep::Wrap(c) => ArcStep::Wrap(c),
                };
                match (steps.last_mut(), &s) {
                    (
                        Some(ArcStep::Wire { wire: w0, col_from: f0, col_to: t0, .. }),
                        ArcStep::Wire { wire: w1, col_from: f1, col_to: t1, .. },
                    ) if *w0 == *w1 => {
                        *f0 = (*f0).min(*f1);
                        *t0 = (*t0).max(*t1);
                    }
                    _ => steps.push(s),
                }
            }
            DiskArc { steps }
        })
        .collect();
    Disk { corners: disk.corners.clone(), arcs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_front;

    #[test]
    fn unknot_faces() {
        let d = crate::diagram::resolve(&parse_front("L1 R1").unwrap()).unwrap();
        let p = build_planar(&d);
        // V=1, E=2, F=3
        assert_eq!(p.edges.len(), 2);
        assert_eq!(p.faces.len(), 3);
    }

    #[test]
    fn unknot_brute_matches_hand_count() {
        let d = crate::diagram::resolve(&parse_front("L1 R1").unwrap()).unwrap();
        let disks = enumerate_disks_brute(&d, BruteConfig::budget(1)).unwrap();
        assert_eq!(disks.len(), 2, "{disks:#?}");
    }

    #[test]
    fn trefoil_euler() {
        let d = crate::diagram::resolve(&parse_front("L1 L1 X2 X2 X2 R1 R1").unwrap()).unwrap();
        let p = build_planar(&d);
        let v = d.crossings.len() as i64;
        let e = p.edges.len() as i64;
        let f = p.faces.len() as i64;
        assert_eq!(v - e + f, 2);
    }
}

#[cfg(test)]
mod agreement_tests {
    use super::*;
    use crate::diagram::{parse_front, resolve};
    use crate::disks::DiskConfig;

    fn compare(front: &str) {
        let d = resolve(&parse_front(front).unwrap()).unwrap();
        let mut sweep: Vec<Disk> =
            crate::disks::enumerate_disks(&d, DiskConfig::budget(1))
                .unwrap()
                .iter()
                .map(normalize_disk)
                .collect();
        let mut brute: Vec<Disk> =
            enumerate_disks_brute(&d, BruteConfig::budget(1)).unwrap().iter().map(normalize_disk).collect();
        sweep.sort();
        brute.sort();
        assert_eq!(sweep, brute, "sweep/oracle disagree on {front}");
    }

    #[test]
    fn unknot_agreement() {
        compare("L1 R1");
    }

    #[test]
    fn trefoil_agreement() {
        compare("L1 L1 X2 X2 X2 R1 R1");
    }
}
