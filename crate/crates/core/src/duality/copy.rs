//! The expanded algebra of n vertically stacked copies of the knot.
//!
//! Generators: per crossing `i`, chords `q_i^k` (levels 0..n-1, from the
//! under strand up to the over strand k copies higher) and `p_i^k` (levels
//! 1..n-1, from the over strand up to the under strand k copies higher);
//! per perturbation critical point, chords `c_j^k` (maxima) and `d_j^k`
//! (minima), levels 1..n-1. Chords differing by a vertical translation are
//! identified, so every differential is computed at the representative
//! whose lower component is copy 0.
//!
//! The differential splits into thick disks (lifts of disks of the base
//! diagram, obtained by assigning a copy index to every boundary segment
//! between corners and critical-point passages) and thin disks (strips
//! collapsing onto the knot, enumerated from the perturbation data). A
//! lifted corner in a positive quadrant reads as a positive q corner or a
//! negative p corner; one in a negative quadrant as a negative q corner or
//! a positive p corner. A boundary segment switching copies at a maximum
//! makes a negative c corner; at a minimum, a positive d corner.

use crate::dga::{gamma_filter, Dga};
use crate::diagram::{Column, ResolvedDiagram, Role, Waypoint};
use crate::disks::{enumerate_disks, enumerate_disks_on, ArcStep, Disk, DiskConfig, Quadrant, SweepDiagram};
use crate::duality::perturb::{PerturbationScheme, Run, SiteRef};
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// A generator of the expanded algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CopyGen {
    pub kind: CopyKind,
    pub level: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CopyKind {
    /// Chord of crossing `i` from under strand up to over strand.
    Q(usize),
    /// Chord of crossing `i` from over strand up to under strand.
    P(usize),
    /// Chord at maximum `j`.
    C(usize),
    /// Chord at minimum `j`.
    D(usize),
}

impl fmt::Display for CopyGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CopyKind::Q(i) => write!(f, "q{}^{}", i + 1, self.level),
            CopyKind::P(i) => write!(f, "p{}^{}", i + 1, self.level),
            CopyKind::C(j) => write!(f, "c{}^{}", j + 1, self.level),
            CopyKind::D(j) => write!(f, "d{}^{}", j + 1, self.level),
        }
    }
}

impl CopyGen {
    pub fn q(i: usize, level: u8) -> Self {
        CopyGen { kind: CopyKind::Q(i), level }
    }
    pub fn p(i: usize, level: u8) -> Self {
        CopyGen { kind: CopyKind::P(i), level }
    }
    pub fn c(j: usize, level: u8) -> Self {
        CopyGen { kind: CopyKind::C(j), level }
    }
    pub fn d(j: usize, level: u8) -> Self {
        CopyGen { kind: CopyKind::D(j), level }
    }
}

/// Disk class a word came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    Thick,
    /// Thin disk types 1-5.
    Thin(u8),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CopyWord {
    pub letters: Vec<CopyGen>,
    pub provenance: Provenance,
}

/// The n-fold expanded algebra.
#[derive(Debug, Clone)]
pub struct CopyDga {
    pub n: u8,
    pub gens: Vec<CopyGen>,
    pub gradings: BTreeMap<CopyGen, i64>,
    pub modulus: Option<i64>,
    /// Unreduced boundary words with provenance.
    pub raw: BTreeMap<CopyGen, Vec<CopyWord>>,
    /// Mod-2 reduced boundary.
    pub boundary: BTreeMap<CopyGen, Vec<Vec<CopyGen>>>,
}

impl CopyDga {
    pub fn grading(&self, g: CopyGen) -> i64 {
        self.gradings[&g]
    }

    pub fn normalize(&self, v: i64) -> i64 {
        match self.modulus {
            Some(m) => v.rem_euclid(m),
            None => v,
        }
    }

    pub fn word_grading(&self, w: &[CopyGen]) -> i64 {
        self.normalize(w.iter().map(|g| self.gradings[g]).sum())
    }

    /// Thick part of a boundary, mod 2.
    pub fn thick_part(&self, g: CopyGen) -> Vec<Vec<CopyGen>> {
        reduce(
            self.raw[&g]
                .iter()
                .filter(|w| w.provenance == Provenance::Thick)
                .map(|w| w.letters.clone()),
        )
    }

    /// Thin part of a boundary, mod 2.
    pub fn thin_part(&self, g: CopyGen) -> Vec<Vec<CopyGen>> {
        reduce(
            self.raw[&g]
                .iter()
                .filter(|w| matches!(w.provenance, Provenance::Thin(_)))
                .map(|w| w.letters.clone()),
        )
    }

    /// Leibniz differential of a word over the reduced boundary.
    pub fn d_word(&self, w: &[CopyGen]) -> Vec<Vec<CopyGen>> {
        let mut acc: BTreeMap<Vec<CopyGen>, u64> = BTreeMap::new();
        for i in 0..w.len() {
            for dw in &self.boundary[&w[i]] {
                let mut term = Vec::with_capacity(w.len() - 1 + dw.len());
                term.extend_from_slice(&w[..i]);
                term.extend_from_slice(dw);
                term.extend_from_slice(&w[i + 1..]);
                *acc.entry(term).or_insert(0) += 1;
            }
        }
        acc.into_iter().filter(|(_, c)| c % 2 == 1).map(|(w, _)| w).collect()
    }

    pub fn d_sum(&self, ws: &[Vec<CopyGen>]) -> Vec<Vec<CopyGen>> {
        reduce(ws.iter().flat_map(|w| self.d_word(w)))
    }

    pub fn word_name(w: &[CopyGen]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" ")
    }
}

pub fn reduce<I: IntoIterator<Item = Vec<CopyGen>>>(words: I) -> Vec<Vec<CopyGen>> {
    let mut acc: BTreeMap<Vec<CopyGen>, u64> = BTreeMap::new();
    for w in words {
        *acc.entry(w).or_insert(0) += 1;
    }
    acc.into_iter().filter(|(_, c)| c % 2 == 1).map(|(w, _)| w).collect()
}

/// Component labels `(upper, lower)` for the letters of a word in the
/// boundary of a level-`level` generator, telescoping from the top
/// component down; `None` when the word cannot chain.
pub fn component_labels(level: u8, word: &[CopyGen]) -> Option<Vec<(u8, u8)>> {
    let mut upper = level;
    let mut out = Vec::with_capacity(word.len());
    for g in word {
        let lower = upper.checked_sub(g.level)?;
        out.push((upper, lower));
        upper = lower;
    }
    if upper == 0 {
        Some(out)
    } else {
        None
    }
}

/// Builds the n-fold expanded algebra from the base diagram, its DGA, and a
/// perturbation scheme. Fails fast if a structural identity (degree, chain
/// compliance, `d^2 = 0`, height positivity) does not hold.
pub fn build_copies(
    diagram: &ResolvedDiagram,
    base: &Dga,
    scheme: &PerturbationScheme,
    n: u8,
) -> Result<CopyDga> {
    if !(2..=3).contains(&n) {
        return Err(Error::Validation(format!("copy count {n} not supported (use 2 or 3)")));
    }
    let nn = n as usize;
    let crossings = diagram.crossings.len();
    let modulus = base.modulus;
    let norm = |v: i64| match modulus {
        Some(m) => v.rem_euclid(m),
        None => v,
    };

    let mut gens: Vec<CopyGen> = Vec::new();
    let mut gradings: BTreeMap<CopyGen, i64> = BTreeMap::new();
    for i in 0..crossings {
        for k in 0..n {
            gens.push(CopyGen::q(i, k));
            gradings.insert(CopyGen::q(i, k), base.gradings[i]);
        }
        for k in 1..n {
            gens.push(CopyGen::p(i, k));
            gradings.insert(CopyGen::p(i, k), norm(-1 - base.gradings[i]));
        }
    }
    for j in 0..scheme.count {
        for k in 1..n {
            gens.push(CopyGen::c(j, k));
            gradings.insert(CopyGen::c(j, k), 0);
            gens.push(CopyGen::d(j, k));
            gradings.insert(CopyGen::d(j, k), norm(-1));
        }
    }
    gens.sort();

    // The full differential comes from sweeps over the explicit copy
    // wirings. Chords of level m only see the sub-link of components
    // spanned by their endpoints, so levels 0 and 1 are computed on the
    // 2-copy diagram and only level-n-1 representatives need the n-copy.
    let mut per_gen: BTreeMap<CopyGen, Vec<Vec<CopyGen>>> = Default::default();
    for stage in 2..=n {
        let (wiring, meta) = build_copy_wiring(diagram, scheme, stage)?;
        let target_level = if stage == 2 { None } else { Some(stage - 1) };
        let mut cfg = DiskConfig::budget(1);
        cfg.max_intervals = 16;
        cfg.max_corner_cost = 2 * (stage as usize - 1);
        cfg.allowed_positive = Some(
            meta.iter()
                .map(|m| m.lower == 0 && target_level.is_none_or(|t| m.gen.level == t))
                .collect(),
        );
        for disk in &enumerate_disks_on(&wiring, cfg)? {
            if disk.positive_count() != 1 {
                continue;
            }
            let k = disk.positive_indices()[0];
            let plus = &meta[disk.corners[k].crossing];
            if plus.lower != 0 || target_level.is_some_and(|t| plus.gen.level != t) {
                continue;
            }
            let word: Vec<CopyGen> = disk.word_from(k).iter().map(|&x| meta[x].gen).collect();
            per_gen.entry(plus.gen).or_default().push(word);
        }
    }
    let boundary: BTreeMap<CopyGen, Vec<Vec<CopyGen>>> =
        gens.iter().map(|&g| (g, reduce(per_gen.remove(&g).unwrap_or_default()))).collect();

    // thick words from the copy-index lift of base disks; the rest is thin
    let mut thick: BTreeMap<CopyGen, Vec<CopyWord>> =
        gens.iter().map(|&g| (g, Vec::new())).collect();
    for disk in &enumerate_disks(diagram, DiskConfig::budget(n as usize))? {
        lift_disk(scheme, n, disk, &mut thick);
    }
    let mut catalogue: BTreeMap<CopyGen, Vec<CopyWord>> =
        gens.iter().map(|&g| (g, Vec::new())).collect();
    thin_strips(diagram, scheme, n, &mut catalogue);

    let mut raw: BTreeMap<CopyGen, Vec<CopyWord>> = BTreeMap::new();
    for &g in &gens {
        let mut words = thick[&g].clone();
        let thick_reduced = reduce(words.iter().map(|w| w.letters.clone()));
        // thin = boundary (xor) thick, classified against the strip catalogue
        let mut thin: Vec<Vec<CopyGen>> = Vec::new();
        {
            let mut acc: BTreeMap<Vec<CopyGen>, bool> = BTreeMap::new();
            for w in boundary[&g].iter().chain(thick_reduced.iter()) {
                *acc.entry(w.clone()).or_insert(false) ^= true;
            }
            for (w, odd) in acc {
                if odd {
                    thin.push(w);
                }
            }
        }
        for w in thin {
            let ty = catalogue[&g]
                .iter()
                .find(|cw| cw.letters == w)
                .map(|cw| cw.provenance)
                .unwrap_or(Provenance::Thin(0));
            words.push(CopyWord { letters: w, provenance: ty });
        }
        raw.insert(g, words);
    }

    let dga = CopyDga { n, gens, gradings, modulus, raw, boundary };
    verify(&dga, diagram, base)?;
    Ok(dga)
}

/// Per copy-diagram crossing: the identified generator and the actual
/// component pair of this representative.
#[derive(Debug, Clone, Copy)]
struct CopyMeta {
    gen: CopyGen,
    upper: u8,
    lower: u8,
}

/// Copy-wire bookkeeping: the base wire it copies and its copy index.
#[derive(Debug, Clone, Copy)]
struct CopyWire {
    base: usize,
    copy: u8,
}

/// Builds the wiring diagram of the perturbed n-copy link: n parallel
/// copies of every base wire, an n x n crossing grid per base crossing, an
/// order-reversing fan of C(n,2) crossings at every perturbation site, and
/// nested caps at cusps. The copy page order on each knot segment comes
/// from the downhill direction, which makes fans at minima cross with
/// ascending over strands and fans at maxima with descending ones.
fn build_copy_wiring(
    diagram: &ResolvedDiagram,
    scheme: &PerturbationScheme,
    n: u8,
) -> Result<(SweepDiagram, Vec<CopyMeta>)> {
    let nn = n as usize;
    let orients = segment_orders(diagram, scheme, n)?;

    let mut columns: Vec<Column> = Vec::new();
    let mut layouts: Vec<Vec<usize>> = Vec::new();
    let mut over_descending: Vec<bool> = Vec::new();
    let mut meta: Vec<CopyMeta> = Vec::new();
    let mut layout: Vec<usize> = Vec::new();
    let mut wires: Vec<CopyWire> = Vec::new();

    fn emit_fan(
        columns: &mut Vec<Column>,
        layouts: &mut Vec<Vec<usize>>,
        over_descending: &mut Vec<bool>,
        meta: &mut Vec<CopyMeta>,
        layout: &mut Vec<usize>,
        wires: &[CopyWire],
        block: usize,
        nn: usize,
        site: SiteRef,
    ) {
        for i in 1..nn {
            for j in (0..i).rev() {
                let pos = block + j;
                let hi = wires[layout[pos]];
                let lo = wires[layout[pos + 1]];
                let (a, b) = (hi.copy, lo.copy);
                let level = a.abs_diff(b);
                let gen = match site {
                    SiteRef::Min(m) => CopyGen::d(m, level),
                    SiteRef::Max(m) => CopyGen::c(m, level),
                };
                layouts.push(layout.clone());
                columns.push(Column::Cross { pos, crossing: meta.len() });
                over_descending.push(a > b);
                meta.push(CopyMeta { gen, upper: a.max(b), lower: a.min(b) });
                layout.swap(pos, pos + 1);
            }
        }
    }

    fn emit_grid(
        columns: &mut Vec<Column>,
        layouts: &mut Vec<Vec<usize>>,
        over_descending: &mut Vec<bool>,
        meta: &mut Vec<CopyMeta>,
        layout: &mut Vec<usize>,
        wires: &[CopyWire],
        block: usize,
        nn: usize,
        over_base: usize,
        base_crossing: usize,
    ) -> Result<()> {
        for pass in 0..nn {
            for k in 0..nn {
                let pos = block + (nn - 1 - pass) + k;
                let hi = wires[layout[pos]];
                let lo = wires[layout[pos + 1]];
                if hi.base != over_base || lo.base == over_base {
                    return Err(Error::Verify("grid emission misaligned".into()));
                }
                let (a, b) = (hi.copy, lo.copy); // over copy, under copy
                let (gen, upper, lower) = if a >= b {
                    (CopyGen::q(base_crossing, a - b), a, b)
                } else {
                    (CopyGen::p(base_crossing, b - a), b, a)
                };
                layouts.push(layout.clone());
                columns.push(Column::Cross { pos, crossing: meta.len() });
                over_descending.push(a >= b);
                meta.push(CopyMeta { gen, upper, lower });
                layout.swap(pos, pos + 1);
            }
        }
        Ok(())
    }

    let prev_event = |wire: usize, col: usize| -> Option<usize> {
        diagram.wire_events[wire].iter().copied().take_while(|&e| e < col).last()
    };

    let mut next_wire_id = 0usize;
    for (bcol, column) in diagram.columns.iter().enumerate() {
        // fans of sites in gaps closing at this column
        let mut fan_wires: Vec<usize> = Vec::new();
        match *column {
            Column::Cross { pos, .. } | Column::Loop { pos, .. } => {
                fan_wires.push(diagram.layouts[bcol][pos]);
                fan_wires.push(diagram.layouts[bcol][pos + 1]);
            }
            Column::Birth { .. } => {}
            Column::Death { .. } => unreachable!("base diagrams have no bare caps"),
        }
        for w in fan_wires {
            let Some(pe) = prev_event(w, bcol) else { continue };
            let site = scheme
                .sites_on_wire
                .get(&w)
                .and_then(|l| l.iter().find(|&&(c, _)| c == pe))
                .map(|&(_, s)| s);
            if let Some(site) = site {
                let bpos = diagram.layouts[bcol].iter().position(|&x| x == w).unwrap();
                emit_fan(
                    &mut columns,
                    &mut layouts,
                    &mut over_descending,
                    &mut meta,
                    &mut layout,
                    &wires,
                    bpos * nn,
                    nn,
                    site,
                );
            }
        }
        match *column {
            Column::Birth { pos, top, bot } => {
                let o_top = orients.first_order(top);
                let o_bot = orients.first_order(bot);
                let site = cap_site(scheme, bcol);
                if site.is_none() {
                    if o_bot != reversed(&o_top) {
                        return Err(Error::Verify(format!(
                            "copy orders at birth {bcol} do not nest"
                        )));
                    }
                } else if o_bot != o_top {
                    return Err(Error::Verify(format!(
                        "copy orders at a decorated birth {bcol} do not match"
                    )));
                }
                let x = if site.is_some() { reversed(&o_top) } else { o_top.clone() };
                for t in 0..nn {
                    let wt = next_wire_id;
                    let wb = next_wire_id + 1;
                    next_wire_id += 2;
                    wires.push(CopyWire { base: top, copy: x[t] });
                    wires.push(CopyWire { base: bot, copy: x[t] });
                    layouts.push(layout.clone());
                    columns.push(Column::Birth { pos: pos * nn + t, top: wt, bot: wb });
                    layout.splice(pos * nn + t..pos * nn + t, [wt, wb]);
                }
                if let Some(site) = site {
                    emit_fan(
                        &mut columns,
                        &mut layouts,
                        &mut over_descending,
                        &mut meta,
                        &mut layout,
                        &wires,
                        pos * nn,
                        nn,
                        site,
                    );
                }
            }
            Column::Cross { pos, crossing } => {
                let over_base = diagram.crossings[crossing].over_wire;
                emit_grid(
                    &mut columns,
                    &mut layouts,
                    &mut over_descending,
                    &mut meta,
                    &mut layout,
                    &wires,
                    pos * nn,
                    nn,
                    over_base,
                    crossing,
                )?;
            }
            Column::Loop { pos, crossing, .. } => {
                let over_base = diagram.crossings[crossing].over_wire;
                emit_grid(
                    &mut columns,
                    &mut layouts,
                    &mut over_descending,
                    &mut meta,
                    &mut layout,
                    &wires,
                    pos * nn,
                    nn,
                    over_base,
                    crossing,
                )?;
                if let Some(site) = cap_site(scheme, bcol) {
                    emit_fan(
                        &mut columns,
                        &mut layouts,
                        &mut over_descending,
                        &mut meta,
                        &mut layout,
                        &wires,
                        pos * nn,
                        nn,
                        site,
                    );
                }
                let top_copies: Vec<u8> =
                    (0..nn).map(|k| wires[layout[pos * nn + k]].copy).collect();
                let bot_copies: Vec<u8> =
                    (0..nn).map(|k| wires[layout[pos * nn + nn + k]].copy).collect();
                if top_copies != reversed(&bot_copies) {
                    return Err(Error::Verify(format!(
                        "copy orders at cusp {bcol} do not nest for the caps"
                    )));
                }
                for t in 0..nn {
                    let p = pos * nn + (nn - 1) - t;
                    let wt = layout[p];
                    let wb = layout[p + 1];
                    layouts.push(layout.clone());
                    columns.push(Column::Death { pos: p, top: wt, bot: wb });
                    layout.drain(p..=p + 1);
                }
            }
            Column::Death { .. } => unreachable!(),
        }
    }
    layouts.push(layout.clone());
    if !layout.is_empty() {
        return Err(Error::Verify("copy wiring does not close up".into()));
    }
    let corner_cost = meta.iter().map(|m| m.gen.level as usize).collect();
    Ok((SweepDiagram { columns, layouts, over_descending, corner_cost }, meta))
}

fn reversed(v: &[u8]) -> Vec<u8> {
    let mut out = v.to_vec();
    out.reverse();
    out
}

fn cap_site(scheme: &PerturbationScheme, col: usize) -> Option<SiteRef> {
    scheme.site_at_cap.iter().find(|(cap, _)| cap.col == col).map(|(_, &s)| s)
}

/// Per-wire copy page orders.
struct SegmentOrders {
    /// Order at the very start (west end) of each wire.
    first: BTreeMap<usize, Vec<u8>>,
}

impl SegmentOrders {
    fn first_order(&self, wire: usize) -> Vec<u8> {
        self.first[&wire].clone()
    }
}

/// Computes the copy page order on every knot sub-segment: `[0..n-1]` top
/// to bottom where the downhill direction points page-east, reversed where
/// it points west.
fn segment_orders(
    diagram: &ResolvedDiagram,
    scheme: &PerturbationScheme,
    n: u8,
) -> Result<SegmentOrders> {
    let t = &diagram.traversal;
    #[derive(Clone, Copy)]
    struct Point {
        slot: usize,
        wi: usize,
        travel_east: bool,
    }
    let mut points: Vec<Point> = Vec::new();
    for (slot, wps) in t.slots.iter().enumerate() {
        let mut east = t.passages[slot].east;
        for (wi, wp) in wps.iter().enumerate() {
            points.push(Point { slot, wi, travel_east: east });
            if matches!(wp, Waypoint::Cap(_)) {
                east = !east;
            }
        }
    }
    let site_of = |slot: usize, wi: usize| -> Option<SiteRef> {
        if let Some(j) = scheme.minima.iter().position(|&p| p == (slot, wi)) {
            return Some(SiteRef::Min(j));
        }
        scheme.maxima.iter().position(|&p| p == (slot, wi)).map(SiteRef::Max)
    };
    let l = points.len();
    let next_site = |i: usize, include_self: bool| -> SiteRef {
        for step in 0..=l {
            let k = (i + step) % l;
            if step == 0 && !include_self {
                continue;
            }
            if let Some(s) = site_of(points[k].slot, points[k].wi) {
                return s;
            }
        }
        unreachable!("no sites at all")
    };
    let order = |downhill_page_east: bool| -> Vec<u8> {
        if downhill_page_east {
            (0..n).collect()
        } else {
            (0..n).rev().collect()
        }
    };

    let mut gap_west: BTreeMap<(usize, usize), Vec<u8>> = BTreeMap::new();
    for (i, pt) in points.iter().enumerate() {
        if let Waypoint::Gap(g) = t.slots[pt.slot][pt.wi] {
            let ahead = next_site(i, true);
            let down_before_east = pt.travel_east == matches!(ahead, SiteRef::Min(_));
            let ahead_after = next_site(i, false);
            let down_after_east = pt.travel_east == matches!(ahead_after, SiteRef::Min(_));
            let west = if pt.travel_east { down_before_east } else { down_after_east };
            gap_west.insert((g.wire, g.after_col), order(west));
        }
    }
    let mut first = BTreeMap::new();
    for w in 0..diagram.wire_events.len() {
        let events = &diagram.wire_events[w];
        if events.len() >= 2 {
            if let Some(o) = gap_west.get(&(w, events[0])) {
                first.insert(w, o.clone());
                continue;
            }
        }
        return Err(Error::Verify(format!("wire {w} has no gap to orient")));
    }
    Ok(SegmentOrders { first })
}

/// One junction along a lifted boundary: a disk corner or a critical-point
/// passage where the copy index may switch.
#[derive(Debug, Clone, Copy)]
enum Junction {
    Corner { crossing: usize, quadrant: Quadrant },
    Site(SiteRef),
}

/// Lifted letter at a junction: generator, positivity, lower component.
/// `Err(())` marks a switch a disk boundary cannot make: a negative corner
/// enters on the chord's upper strand and leaves on the lower, a positive
/// corner the other way round, which forces maxima switches to descend and
/// minima switches to ascend.
#[allow(clippy::result_unit_err)]
fn eval_junction(
    j: Junction,
    incoming: u8,
    outgoing: u8,
) -> std::result::Result<Option<(CopyGen, bool, u8)>, ()> {
    match j {
        Junction::Corner { crossing, quadrant } => {
            // E/W corners: boundary arrives on the under branch, leaves on
            // the over branch; N/S the other way round.
            let (over, under) = if quadrant.positive() {
                (outgoing, incoming)
            } else {
                (incoming, outgoing)
            };
            if over >= under {
                Ok(Some((CopyGen::q(crossing, over - under), quadrant.positive(), under)))
            } else {
                Ok(Some((CopyGen::p(crossing, under - over), !quadrant.positive(), over)))
            }
        }
        Junction::Site(site) => {
            if incoming == outgoing {
                return Ok(None);
            }
            let level = incoming.abs_diff(outgoing);
            let lower = incoming.min(outgoing);
            match site {
                SiteRef::Min(m) if incoming < outgoing => {
                    Ok(Some((CopyGen::d(m, level), true, lower)))
                }
                SiteRef::Max(m) if incoming > outgoing => {
                    Ok(Some((CopyGen::c(m, level), false, lower)))
                }
                _ => Err(()),
            }
        }
    }
}

/// Enumerates copy-index assignments and records every lift with exactly
/// one positive corner whose lower component is copy 0.
fn lift_disk(
    scheme: &PerturbationScheme,
    n: u8,
    disk: &Disk,
    raw: &mut BTreeMap<CopyGen, Vec<CopyWord>>,
) {
    let mut junctions: Vec<Junction> = Vec::new();
    for (ci, corner) in disk.corners.iter().enumerate() {
        junctions.push(Junction::Corner { crossing: corner.crossing, quadrant: corner.quadrant });
        for step in &disk.arcs[ci].steps {
            match *step {
                ArcStep::Wire { wire, col_from, col_to, .. } => {
                    for site in scheme.sites_on_run(wire, col_from, col_to) {
                        junctions.push(Junction::Site(site));
                    }
                }
                ArcStep::Wrap(cap) => {
                    if let Some(&site) = scheme.site_at_cap.get(&cap) {
                        junctions.push(Junction::Site(site));
                    }
                }
            }
        }
    }
    let s = junctions.len();
    // comps[i] is the copy of the segment from junction i to junction i+1;
    // junction i sits between segments i-1 and i.
    let mut comps = vec![0u8; s];
    let mut letters: Vec<Vec<(CopyGen, bool, u8)>> = vec![Vec::new(); s + 1];
    rec_assign(n, &junctions, &mut comps, 0, &mut letters, 0, raw);

    fn rec_assign(
        n: u8,
        junctions: &[Junction],
        comps: &mut Vec<u8>,
        idx: usize,
        letters: &mut Vec<Vec<(CopyGen, bool, u8)>>,
        positives: usize,
        raw: &mut BTreeMap<CopyGen, Vec<CopyWord>>,
    ) {
        let s = junctions.len();
        if idx == s {
            // close the cycle: junction 0 between segments s-1 and 0
            let Ok(lifted) = eval_junction(junctions[0], comps[s - 1], comps[0]) else {
                return;
            };
            let extra = usize::from(lifted.as_ref().is_some_and(|l| l.1));
            if positives + extra != 1 {
                return;
            }
            // gather letters in junction order: junction 0's letter first
            let mut seq: Vec<(CopyGen, bool, u8)> = Vec::new();
            if let Some(l) = lifted {
                seq.push(l);
            }
            for i in 1..s {
                seq.extend(letters[i].iter().copied());
            }
            let plus = seq.iter().position(|&(_, pos, _)| pos).unwrap();
            let (pg, _, lower) = seq[plus];
            if lower != 0 {
                return;
            }
            let m = seq.len();
            let word: Vec<CopyGen> = (1..m).map(|k| seq[(plus + k) % m].0).collect();
            raw.get_mut(&pg)
                .unwrap()
                .push(CopyWord { letters: word, provenance: Provenance::Thick });
            return;
        }
        for c in 0..n {
            comps[idx] = c;
            if idx == 0 {
                rec_assign(n, junctions, comps, 1, letters, positives, raw);
                continue;
            }
            // evaluate junction idx between segments idx-1 and idx
            let Ok(lifted) = eval_junction(junctions[idx], comps[idx - 1], comps[idx]) else {
                continue;
            };
            let extra = usize::from(lifted.as_ref().is_some_and(|l| l.1));
            if positives + extra > 1 {
                continue;
            }
            letters[idx] = lifted.into_iter().collect();
            rec_assign(n, junctions, comps, idx + 1, letters, positives + extra, raw);
            letters[idx].clear();
        }
    }
}

/// Words a strip contributes when it stops at passage `w` with section
/// `[lo, hi]`: each stop yields a (negative, negative) corner pair.
fn bottom_stops(
    diagram: &ResolvedDiagram,
    passage: usize,
    lo: u8,
    hi: u8,
) -> Vec<[CopyGen; 2]> {
    let p = diagram.traversal.passages[passage];
    let x = p.crossing;
    let mut out = Vec::new();
    match p.role {
        Role::Over => {
            for g in lo + 1..=hi {
                out.push([CopyGen::q(x, hi - g), CopyGen::p(x, g - lo)]);
            }
        }
        Role::Under => {
            for g in lo..hi {
                out.push([CopyGen::p(x, hi - g), CopyGen::q(x, g - lo)]);
            }
        }
    }
    out
}

/// All strip words out of a run with section `[lo, hi]`, paired with thin
/// type tags: stops are `stop_type`, reaching the minimum is `min_type`.
fn run_words(
    diagram: &ResolvedDiagram,
    run: &Run,
    lo: u8,
    hi: u8,
    stop_type: u8,
    min_type: u8,
) -> Vec<(Vec<CopyGen>, u8)> {
    let mut out = Vec::new();
    for &w in &run.passages {
        for pair in bottom_stops(diagram, w, lo, hi) {
            out.push((pair.to_vec(), stop_type));
        }
    }
    out.push((vec![CopyGen::d(run.min, hi - lo)], min_type));
    out
}

/// Enumerates the thin-disk words of every generator.
fn thin_strips(
    diagram: &ResolvedDiagram,
    scheme: &PerturbationScheme,
    n: u8,
    raw: &mut BTreeMap<CopyGen, Vec<CopyWord>>,
) {
    let t = &diagram.traversal;
    let mut passage_of: Vec<[usize; 2]> = vec![[usize::MAX; 2]; diagram.crossings.len()];
    for (k, p) in t.passages.iter().enumerate() {
        passage_of[p.crossing][if p.role == Role::Over { 0 } else { 1 }] = k;
    }

    let mut push = |g: CopyGen, letters: Vec<CopyGen>, ty: u8| {
        raw.get_mut(&g).unwrap().push(CopyWord { letters, provenance: Provenance::Thin(ty) });
    };

    for i in 0..diagram.crossings.len() {
        let [w_over, w_under] = passage_of[i];
        let run_over = &scheme.run_from_passage[w_over];
        let run_under = &scheme.run_from_passage[w_under];
        for k in 1..n {
            let qk = CopyGen::q(i, k);
            // strips hanging from the over passage: trailing q letter
            for lo in 0..k {
                for (mut word, ty) in run_words(diagram, run_over, lo, k, 4, 3) {
                    word.push(CopyGen::q(i, lo));
                    push(qk, word, ty);
                }
            }
            // strips hanging from the under passage: leading q letter
            for hi in 1..=k {
                for (word, ty) in run_words(diagram, run_under, 0, hi, 4, 3) {
                    let mut full = vec![CopyGen::q(i, k - hi)];
                    full.extend(word);
                    push(qk, full, ty);
                }
            }
            // lattice rectangles
            for a1 in 0..k {
                for c2 in a1 + 1..=k {
                    push(
                        qk,
                        vec![CopyGen::q(i, k - c2), CopyGen::p(i, c2 - a1), CopyGen::q(i, a1)],
                        5,
                    );
                }
            }

            let pk = CopyGen::p(i, k);
            // strips with a positive p corner need level at least 2
            for hi in 1..k {
                for (word, ty) in run_words(diagram, run_over, 0, hi, 4, 3) {
                    let mut full = vec![CopyGen::p(i, k - hi)];
                    full.extend(word);
                    push(pk, full, ty);
                }
            }
            for lo in 1..k {
                for (mut word, ty) in run_words(diagram, run_under, lo, k, 4, 3) {
                    word.push(CopyGen::p(i, lo));
                    push(pk, word, ty);
                }
            }
        }
    }

    for j in 0..scheme.count {
        for k in 1..n {
            let ck = CopyGen::c(j, k);
            for run in &scheme.runs_from_max[j] {
                for (word, ty) in run_words(diagram, run, 0, k, 2, 1) {
                    push(ck, word, ty);
                }
            }
            // triangles inside the minimum's half-lattice
            if k == 2 {
                push(CopyGen::d(j, 2), vec![CopyGen::d(j, 1), CopyGen::d(j, 1)], 5);
            }
        }
    }
}

/// Exact height of a generator in the Stokes preorder:
/// `level * BIG + strand part`, with q above and p below their level and a
/// small offset putting maxima above minima.
fn weight(g: CopyGen, _crossings: usize) -> i128 {
    const BIG: i128 = 1 << 80;
    let level = g.level as i128 * BIG;
    match g.kind {
        CopyKind::Q(i) => level + 100 * (1i128 << (4 * (i as u32 + 1))),
        CopyKind::P(i) => level - 100 * (1i128 << (4 * (i as u32 + 1))),
        CopyKind::C(_) => level + 1,
        CopyKind::D(_) => level - 1,
    }
}

fn verify(dga: &CopyDga, diagram: &ResolvedDiagram, base: &Dga) -> Result<()> {
    let crossings = diagram.crossings.len();
    // degree -1, chain compliance, height positivity
    for (&g, words) in &dga.raw {
        let target = dga.normalize(dga.grading(g) - 1);
        for w in words {
            if dga.word_grading(&w.letters) != target {
                return Err(Error::Verify(format!(
                    "degree violation in d({g}) at word {} ({:?})",
                    CopyDga::word_name(&w.letters),
                    w.provenance
                )));
            }
            let Some(labels) = component_labels(g.level, &w.letters) else {
                return Err(Error::Verify(format!(
                    "word {} of d({g}) does not chain",
                    CopyDga::word_name(&w.letters)
                )));
            };
            if !gamma_filter(&labels, g.level, 0) {
                return Err(Error::Verify(format!(
                    "word {} of d({g}) fails the component filter",
                    CopyDga::word_name(&w.letters)
                )));
            }
            let deficit = weight(g, crossings)
                - w.letters.iter().map(|&l| weight(l, crossings)).sum::<i128>();
            let strict = match w.provenance {
                Provenance::Thick | Provenance::Thin(1..=3) => deficit > 0,
                _ => deficit >= 0,
            };
            if !strict {
                return Err(Error::Verify(format!(
                    "height positivity fails for {} in d({g}) ({:?})",
                    CopyDga::word_name(&w.letters),
                    w.provenance
                )));
            }
        }
    }
    // the level-0 part is the base differential
    for i in 0..crossings {
        let here = &dga.boundary[&CopyGen::q(i, 0)];
        let base_words: Vec<Vec<CopyGen>> = base.boundary[i]
            .iter()
            .map(|w| w.iter().map(|&l| CopyGen::q(l, 0)).collect())
            .collect();
        if *here != base_words {
            return Err(Error::Verify(format!(
                "level-0 boundary of q{} differs from the base differential",
                i + 1
            )));
        }
    }
    // d^2 = 0
    for &g in &dga.gens {
        let residue = dga.d_sum(&dga.boundary[&g]);
        if let Some(w) = residue.first() {
            let prov: Vec<String> =
                dga.raw[&g].iter().map(|cw| format!("{:?}", cw.provenance)).collect();
            return Err(Error::Verify(format!(
                "d^2(d({g})) has residue {} (boundary words came from: {})",
                CopyDga::word_name(w),
                prov.join(", ")
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::differential;
    use crate::diagram::{parse_front, resolve};
    use crate::duality::perturb::{perturbation_data, SchemeKind};

    fn copies(front: &str, n: u8) -> (ResolvedDiagram, CopyDga) {
        let d = resolve(&parse_front(front).unwrap()).unwrap();
        let base = differential(&d).unwrap();
        let scheme = perturbation_data(&d, SchemeKind::Canonical).unwrap();
        let c = build_copies(&d, &base, &scheme, n).unwrap();
        (d, c)
    }

    #[test]
    fn unknot_two_copies() {
        let (_, c) = copies("L1 R1", 2);
        // hand-computed differentials
        let q1 = CopyGen::q(0, 1);
        assert_eq!(
            c.boundary[&q1],
            vec![
                vec![CopyGen::q(0, 0), CopyGen::p(0, 1), CopyGen::q(0, 0)],
                vec![CopyGen::q(0, 0), CopyGen::d(0, 1)],
                vec![CopyGen::c(0, 1)],
                vec![CopyGen::d(0, 1), CopyGen::q(0, 0)],
            ]
        );
        assert_eq!(c.boundary[&CopyGen::d(0, 1)], vec![vec![CopyGen::p(0, 1)]]);
        assert!(c.boundary[&CopyGen::p(0, 1)].is_empty());
        // dC(c^1) = d + d-bar = 0 here; the two type-2 stops survive
        assert_eq!(
            c.boundary[&CopyGen::c(0, 1)],
            vec![
                vec![CopyGen::q(0, 0), CopyGen::p(0, 1)],
                vec![CopyGen::p(0, 1), CopyGen::q(0, 0)],
            ]
        );
    }

    #[test]
    fn unknot_three_copies_build() {
        let (_, c) = copies("L1 R1", 3);
        assert_eq!(c.n, 3);
        // d(p^2) = p^1 d^1 + d^1 p^1
        assert_eq!(
            c.boundary[&CopyGen::p(0, 2)],
            vec![
                vec![CopyGen::p(0, 1), CopyGen::d(0, 1)],
                vec![CopyGen::d(0, 1), CopyGen::p(0, 1)],
            ]
        );
    }

    #[test]
    fn trefoil_copies_verify() {
        for n in [2, 3] {
            let (_, c) = copies("L1 L1 X2 X2 X2 R1 R1", n);
            assert!(c.n == n);
        }
    }
}
