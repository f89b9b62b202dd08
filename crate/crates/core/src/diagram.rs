//! Front diagrams, classical invariants, Maslov potentials and Ng resolution.
//!
//! A front is encoded as an ordered word of events read left to right:
//! `L<i>` inserts a left cusp whose two new strands occupy positions `i`,
//! `i+1` (position 1 is the topmost strand), `X<i>` crosses strands `i` and
//! `i+1`, and `R<i>` closes strands `i`, `i+1` in a right cusp.
//!
//! Resolution replaces every right cusp by a crossing followed immediately
//! by a cap (the loop), smooths left cusps, and resolves front crossings so
//! the strand of lesser slope goes in front. In the resulting diagram the
//! crossing heights strictly increase left to right, so the left-to-right
//! crossing order doubles as the height order used in Stokes checks.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// One event of a front word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Event {
    /// Left cusp inserting strands at positions `i`, `i+1` (1-based).
    LeftCusp(usize),
    /// Crossing of strands `i`, `i+1`.
    Crossing(usize),
    /// Right cusp closing strands `i`, `i+1`.
    RightCusp(usize),
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::LeftCusp(i) => write!(f, "L{i}"),
            Event::Crossing(i) => write!(f, "X{i}"),
            Event::RightCusp(i) => write!(f, "R{i}"),
        }
    }
}

/// A validated front diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontDiagram {
    pub events: Vec<Event>,
    pub name: Option<String>,
}

impl fmt::Display for FrontDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.events.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", words.join(" "))
    }
}

/// Thurston–Bennequin and rotation numbers of an oriented front.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalInvariants {
    pub tb: i64,
    pub rot: i64,
}

/// Maslov potential: one integer per front arc (arc = wire of the resolved
/// diagram), satisfying `potential(upper) = potential(lower) + 1` at every
/// cusp. Unique up to a global constant; reduced mod `2·|rot|` when the
/// rotation number is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaslovPotential {
    /// Potential per wire id.
    pub potential: Vec<i64>,
    /// `2·|rot|`, or `None` when `rot = 0` (integer potentials).
    pub modulus: Option<i64>,
}

impl MaslovPotential {
    /// Potential shifted by a global constant (still a valid potential).
    pub fn shifted(&self, c: i64) -> MaslovPotential {
        let potential = self
            .potential
            .iter()
            .map(|&p| match self.modulus {
                Some(m) => (p + c).rem_euclid(m),
                None => p + c,
            })
            .collect();
        MaslovPotential { potential, modulus: self.modulus }
    }
}

/// Where a resolved crossing came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingSource {
    /// An honest crossing of the front.
    Front,
    /// The loop replacing a right cusp.
    Cusp,
}

/// Strand role at a passage through a crossing: the over strand is the
/// descending one (enters at the upper position and exits at the lower).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Role {
    Over,
    Under,
}

/// One crossing of the resolved diagram. The `id` order (0-based, displayed
/// as `q{id+1}`) is the left-to-right column order, hence the height order.
#[derive(Debug, Clone)]
pub struct Crossing {
    pub id: usize,
    pub source: CrossingSource,
    /// Column of the event producing this crossing.
    pub col: usize,
    /// 0-based upper strand position at the column.
    pub pos: usize,
    /// Grading, reduced mod `2·|rot|` when `rot != 0`; loop crossings are 1.
    pub grading: i64,
    /// Wire arriving at the upper-west position (the over strand).
    pub over_wire: usize,
    /// Wire arriving at the lower-west position (the under strand).
    pub under_wire: usize,
}

/// One column of the resolved diagram, in left-to-right order.
#[derive(Debug, Clone)]
pub enum Column {
    /// Left cusp: wires `top`, `bot` born at positions `pos`, `pos+1`.
    Birth { pos: usize, top: usize, bot: usize },
    /// Crossing of the wires at `pos`, `pos+1`.
    Cross { pos: usize, crossing: usize },
    /// Right cusp: crossing at `pos`, `pos+1` followed by a cap joining the
    /// two wires east of it. `top`/`bot` are the wires at positions `pos`,
    /// `pos+1` east of the crossing (the wires killed by the cap).
    Loop { pos: usize, crossing: usize, top: usize, bot: usize },
    /// A bare cap closing the wires at `pos`, `pos+1` (used by derived
    /// diagrams; resolution itself only produces caps fused to loops).
    Death { pos: usize, top: usize, bot: usize },
}

/// A cap of the diagram: the closed end of a pair of wires.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cap {
    pub col: usize,
    /// True for a left-cusp (west) cap, false for a loop (east) cap.
    pub birth: bool,
}

/// One visit of the oriented knot to a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Passage {
    pub crossing: usize,
    pub role: Role,
    /// Direction of travel through the column.
    pub east: bool,
}

/// A point of the knot between two consecutive events on a wire: strictly
/// between column `after_col` and the wire's next event column. Used to
/// address perturbation data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct WireGap {
    pub wire: usize,
    pub after_col: usize,
}

/// An addressable point along a traversal slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Waypoint {
    Gap(WireGap),
    Cap(Cap),
}

/// Cyclic knot traversal: passages in the order the oriented knot visits
/// them; slot `k` is the arc from passage `k` to passage `k+1` (cyclically)
/// and lists the waypoints available on that arc, in travel order.
#[derive(Debug, Clone)]
pub struct KnotTraversal {
    pub passages: Vec<Passage>,
    pub slots: Vec<Vec<Waypoint>>,
}

impl KnotTraversal {
    /// Each crossing id appears exactly twice, once per role.
    pub fn check(&self, crossings: usize) -> Result<()> {
        let mut seen = vec![[0usize; 2]; crossings];
        for p in &self.passages {
            seen[p.crossing][if p.role == Role::Over { 0 } else { 1 }] += 1;
        }
        for (i, s) in seen.iter().enumerate() {
            if *s != [1, 1] {
                return Err(Error::Verify(format!(
                    "crossing q{} visited {}x over / {}x under",
                    i + 1,
                    s[0],
                    s[1]
                )));
            }
        }
        Ok(())
    }
}

/// The combinatorial Lagrangian-style diagram produced by resolution.
#[derive(Debug, Clone)]
pub struct ResolvedDiagram {
    pub front: FrontDiagram,
    pub invariants: ClassicalInvariants,
    pub potential: MaslovPotential,
    pub crossings: Vec<Crossing>,
    pub columns: Vec<Column>,
    /// Wire layout west of each column (top to bottom), plus one final entry
    /// east of the last column (always empty for a knot).
    pub layouts: Vec<Vec<usize>>,
    /// Per wire: ordered event columns it participates in (birth, crossings,
    /// death cap).
    pub wire_events: Vec<Vec<usize>>,
    pub traversal: KnotTraversal,
    /// Planar faces as cyclic dart lists; `faces[0]` is the outer face. See
    /// [`crate::oracle`] for the dart encoding.
    pub faces: Vec<Vec<usize>>,
}

impl ResolvedDiagram {
    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// `2·|rot|` modulus for gradings, if any.
    pub fn grading_modulus(&self) -> Option<i64> {
        self.potential.modulus
    }

    pub fn normalize_grading(&self, g: i64) -> i64 {
        match self.grading_modulus() {
            Some(m) => g.rem_euclid(m),
            None => g,
        }
    }

    /// Height comparison proxy: the strictly increasing left-to-right order.
    pub fn height_rank(&self, crossing: usize) -> usize {
        crossing
    }
}

/// Parses a front word. Tokens are whitespace separated; `#` starts a
/// comment running to end of line.
pub fn parse_front(text: &str) -> Result<FrontDiagram> {
    let mut cleaned = String::new();
    for line in text.lines() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        cleaned.push_str(line);
        cleaned.push(' ');
    }
    let mut events = Vec::new();
    for (idx, tok) in cleaned.split_whitespace().enumerate() {
        let (kind, num) = tok.split_at(1);
        let i: usize = num
            .parse()
            .map_err(|_| Error::Syntax { token: idx, msg: format!("bad index in `{tok}`") })?;
        if i == 0 {
            return Err(Error::Syntax { token: idx, msg: format!("index must be >= 1 in `{tok}`") });
        }
        let ev = match kind {
            "L" => Event::LeftCusp(i),
            "X" => Event::Crossing(i),
            "R" => Event::RightCusp(i),
            _ => {
                return Err(Error::Syntax { token: idx, msg: format!("unknown event `{tok}`") });
            }
        };
        events.push(ev);
    }
    let front = FrontDiagram { events, name: None };
    validate(&front)?;
    Ok(front)
}

/// Checks strand counts, index ranges and the single-component condition.
pub fn validate(front: &FrontDiagram) -> Result<()> {
    if front.events.is_empty() {
        return Err(Error::Validation("empty front".into()));
    }
    let mut count: usize = 0;
    for (idx, ev) in front.events.iter().enumerate() {
        match *ev {
            Event::LeftCusp(i) => {
                if i > count + 1 {
                    return Err(Error::Validation(format!(
                        "event {idx} ({ev}): index out of range for {count} strands"
                    )));
                }
                count += 2;
            }
            Event::Crossing(i) | Event::RightCusp(i) => {
                if count < 2 || i > count - 1 {
                    return Err(Error::Validation(format!(
                        "event {idx} ({ev}): index out of range for {count} strands"
                    )));
                }
                if matches!(ev, Event::RightCusp(_)) {
                    count -= 2;
                }
            }
        }
    }
    if count != 0 {
        return Err(Error::Validation(format!(
            "strand count does not return to 0 (ends at {count})"
        )));
    }
    // Component count via the wiring; resolve_unchecked cannot fail past this
    // point except through the walk itself.
    let w = Wiring::build(front)?;
    let components = w.component_count();
    if components != 1 {
        return Err(Error::Validation(format!(
            "front has {components} components; only knots are accepted"
        )));
    }
    Ok(())
}

/// Internal wiring simulation shared by validation and resolution.
struct Wiring {
    columns: Vec<Column>,
    layouts: Vec<Vec<usize>>,
    crossings: Vec<(usize, usize, CrossingSource, usize, usize)>, // col,pos,source,over,under
    wire_events: Vec<Vec<usize>>,
    caps: Vec<(Cap, usize, usize)>, // cap, upper wire, lower wire (front positions)
    wire_count: usize,
}

/// One step of the cyclic knot walk.
#[derive(Debug, Clone, Copy)]
enum WalkItem {
    Passage(Passage),
    Way(Waypoint),
}

impl Wiring {
    fn build(front: &FrontDiagram) -> Result<Self> {
        let mut wires: Vec<usize> = Vec::new();
        let mut next = 0usize;
        let mut columns = Vec::new();
        let mut layouts = Vec::new();
        let mut crossings = Vec::new();
        let mut wire_events: Vec<Vec<usize>> = Vec::new();
        let mut caps = Vec::new();
        for (col, ev) in front.events.iter().enumerate() {
            layouts.push(wires.clone());
            match *ev {
                Event::LeftCusp(i) => {
                    let j = i - 1;
                    let (top, bot) = (next, next + 1);
                    next += 2;
                    wire_events.push(vec![col]);
                    wire_events.push(vec![col]);
                    wires.splice(j..j, [top, bot]);
                    columns.push(Column::Birth { pos: j, top, bot });
                    caps.push((Cap { col, birth: true }, top, bot));
                }
                Event::Crossing(i) => {
                    let j = i - 1;
                    let (a, b) = (wires[j], wires[j + 1]);
                    let id = crossings.len();
                    crossings.push((col, j, CrossingSource::Front, a, b));
                    wire_events[a].push(col);
                    wire_events[b].push(col);
                    wires.swap(j, j + 1);
                    columns.push(Column::Cross { pos: j, crossing: id });
                }
                Event::RightCusp(i) => {
                    let j = i - 1;
                    let (a, b) = (wires[j], wires[j + 1]);
                    let id = crossings.len();
                    crossings.push((col, j, CrossingSource::Cusp, a, b));
                    wire_events[a].push(col);
                    wire_events[b].push(col);
                    wires.swap(j, j + 1);
                    // East of the crossing: position j holds b, j+1 holds a.
                    columns.push(Column::Loop { pos: j, crossing: id, top: b, bot: a });
                    caps.push((Cap { col, birth: false }, a, b)); // front upper = a
                    wires.drain(j..=j + 1);
                }
            }
        }
        layouts.push(wires.clone());
        Ok(Wiring { columns, layouts, crossings, wire_events, caps, wire_count: next })
    }

    fn component_count(&self) -> usize {
        if self.wire_count == 0 {
            return 0;
        }
        // Walk wire ends: state (wire, east). Caps connect wire ends.
        let mut cap_of_east_end: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        let mut cap_of_west_end: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for &(cap, up, dn) in &self.caps {
            if cap.birth {
                cap_of_west_end.insert(up, (up, dn));
                cap_of_west_end.insert(dn, (up, dn));
            } else {
                cap_of_east_end.insert(up, (up, dn));
                cap_of_east_end.insert(dn, (up, dn));
            }
        }
        let mut seen = vec![false; self.wire_count];
        let mut components = 0;
        for start in 0..self.wire_count {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut wire = start;
            loop {
                seen[wire] = true;
                // travel east to the loop cap, cross to the partner, travel
                // west to its birth cap, cross again
                let &(u, d) = cap_of_east_end.get(&wire).expect("loop cap");
                let partner = if u == wire { d } else { u };
                seen[partner] = true;
                let &(u2, d2) = cap_of_west_end.get(&partner).expect("birth cap");
                let next = if u2 == partner { d2 } else { u2 };
                wire = next;
                if wire == start {
                    break;
                }
            }
        }
        components
    }
}

/// Computes tb and rot for a valid front.
pub fn classical_invariants(front: &FrontDiagram) -> Result<ClassicalInvariants> {
    let resolved = resolve(front)?;
    Ok(resolved.invariants)
}

/// Computes a Maslov potential for a valid front.
pub fn maslov_potential(front: &FrontDiagram) -> Result<MaslovPotential> {
    let resolved = resolve(front)?;
    Ok(resolved.potential)
}

/// Resolves a validated front into its combinatorial Lagrangian diagram.
pub fn resolve(front: &FrontDiagram) -> Result<ResolvedDiagram> {
    validate(front)?;
    let w = Wiring::build(front)?;

    // Knot traversal. Start on the first left cusp's upper strand heading
    // east; the base point is just before its first passage.
    let traversal = traverse(&w)?;

    // Orientation data per wire: direction of travel (east/west).
    let mut east_of_wire = vec![None::<bool>; w.wire_count];
    {
        // Reconstruct per-wire travel direction from the traversal walk.
        let dirs = walk_directions(&w);
        for (wire, east) in dirs {
            east_of_wire[wire] = Some(east);
        }
    }
    let east_of_wire: Vec<bool> =
        east_of_wire.into_iter().map(|d| d.expect("wire direction")).collect();

    // rot = (#down cusps - #up cusps) / 2. A cusp is traversed downward when
    // the knot arrives on the front-upper strand and leaves on the lower.
    let mut down = 0i64;
    let mut up = 0i64;
    for &(cap, upper, lower) in &w.caps {
        let arrives_on_upper = if cap.birth {
            // west cap: the knot arrives on the wire travelling west
            !east_of_wire[upper]
        } else {
            east_of_wire[upper]
        };
        let _ = lower;
        if arrives_on_upper {
            down += 1;
        } else {
            up += 1;
        }
    }
    debug_assert_eq!((down - up) % 2, 0);
    let rot = (down - up) / 2;

    // Writhe over front crossings; the over strand is the descending one.
    let mut writhe = 0i64;
    let mut right_cusps = 0i64;
    for &(_, _, source, over, under) in &w.crossings {
        match source {
            CrossingSource::Front => {
                let d_o: (i64, i64) = if east_of_wire[over] { (1, -1) } else { (-1, 1) };
                let d_u: (i64, i64) = if east_of_wire[under] { (1, 1) } else { (-1, -1) };
                writhe += (d_o.0 * d_u.1 - d_o.1 * d_u.0).signum();
            }
            CrossingSource::Cusp => right_cusps += 1,
        }
    }
    let tb = writhe - right_cusps;
    let invariants = ClassicalInvariants { tb, rot };

    // Maslov potential per wire: potential(front upper) = potential(lower)+1
    // at every cusp (birth and loop alike).
    let modulus = if rot == 0 { None } else { Some(2 * rot.abs()) };
    let potential = solve_potential(&w, modulus)?;

    // Crossing gradings.
    let mut crossings = Vec::new();
    for (id, &(col, pos, source, over, under)) in w.crossings.iter().enumerate() {
        let grading = match source {
            CrossingSource::Cusp => 1,
            CrossingSource::Front => {
                let g = potential.potential[over] - potential.potential[under];
                match modulus {
                    Some(m) => g.rem_euclid(m),
                    None => g,
                }
            }
        };
        crossings.push(Crossing { id, source, col, pos, grading, over_wire: over, under_wire: under });
    }

    let mut diagram = ResolvedDiagram {
        front: front.clone(),
        invariants,
        potential,
        crossings,
        columns: w.columns,
        layouts: w.layouts,
        wire_events: w.wire_events,
        traversal,
        faces: Vec::new(),
    };
    diagram.traversal.check(diagram.crossings.len())?;
    diagram.faces = crate::oracle::faces_of(&diagram);
    Ok(diagram)
}

/// Walks the knot once, recording (wire, direction of travel).
fn walk_directions(w: &Wiring) -> Vec<(usize, bool)> {
    let mut east_cap: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut west_cap: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for &(cap, up, dn) in &w.caps {
        if cap.birth {
            west_cap.insert(up, (up, dn));
            west_cap.insert(dn, (up, dn));
        } else {
            east_cap.insert(up, (up, dn));
            east_cap.insert(dn, (up, dn));
        }
    }
    let start = match w.columns.first() {
        Some(Column::Birth { top, .. }) => *top,
        _ => unreachable!("validated front starts with a left cusp"),
    };
    let mut out = Vec::new();
    let (mut wire, mut east) = (start, true);
    loop {
        out.push((wire, east));
        let (u, d) = if east { east_cap[&wire] } else { west_cap[&wire] };
        wire = if u == wire { d } else { u };
        east = !east;
        if wire == start && east {
            break;
        }
    }
    out
}

/// Builds the cyclic passage/slot traversal.
///
/// The walk state is `(wire, east, i)`: travelling east the knot sits just
/// east of `wire_events[wire][i]`; travelling west, just west of it. Caps
/// reverse the direction; a loop cap is entered immediately after the loop
/// crossing's passage and left immediately before the partner's passage at
/// the same column.
fn traverse(w: &Wiring) -> Result<KnotTraversal> {
    let mut role_at: BTreeMap<(usize, usize), (usize, Role)> = BTreeMap::new();
    for (id, &(col, _, _, over, under)) in w.crossings.iter().enumerate() {
        role_at.insert((over, col), (id, Role::Over));
        role_at.insert((under, col), (id, Role::Under));
    }
    let mut cap_at: BTreeMap<(usize, bool), Cap> = BTreeMap::new();
    let mut partner: BTreeMap<(usize, bool), usize> = BTreeMap::new();
    for &(cap, up, dn) in &w.caps {
        let east_end = !cap.birth;
        cap_at.insert((up, east_end), cap);
        cap_at.insert((dn, east_end), cap);
        partner.insert((up, east_end), dn);
        partner.insert((dn, east_end), up);
    }

    let start_wire = match w.columns.first() {
        Some(Column::Birth { top, .. }) => *top,
        _ => unreachable!("validated front starts with a left cusp"),
    };
    let start = (start_wire, true, 0usize);

    let mut stream: Vec<WalkItem> = Vec::new();
    let (mut wire, mut east, mut i) = start;
    loop {
        let events = &w.wire_events[wire];
        if east {
            if i + 1 == events.len() {
                // east end: loop cap, then the partner's passage at the same
                // column, travelling west.
                stream.push(WalkItem::Way(Waypoint::Cap(cap_at[&(wire, true)])));
                let p = partner[&(wire, true)];
                let j = w.wire_events[p].len() - 1;
                let col = w.wire_events[p][j];
                let (crossing, role) = role_at[&(p, col)];
                stream.push(WalkItem::Passage(Passage { crossing, role, east: false }));
                wire = p;
                east = false;
                i = j;
            } else {
                stream.push(WalkItem::Way(Waypoint::Gap(WireGap { wire, after_col: events[i] })));
                let col = events[i + 1];
                let (crossing, role) = role_at[&(wire, col)];
                stream.push(WalkItem::Passage(Passage { crossing, role, east: true }));
                i += 1;
            }
        } else {
            stream.push(WalkItem::Way(Waypoint::Gap(WireGap { wire, after_col: events[i - 1] })));
            if i == 1 {
                // west end: birth cap, continue east on the partner.
                stream.push(WalkItem::Way(Waypoint::Cap(cap_at[&(wire, false)])));
                let p = partner[&(wire, false)];
                wire = p;
                east = true;
                i = 0;
            } else {
                let col = events[i - 1];
                let (crossing, role) = role_at[&(wire, col)];
                stream.push(WalkItem::Passage(Passage { crossing, role, east: false }));
                i -= 1;
            }
        }
        if (wire, east, i) == start {
            break;
        }
    }

    // Rotate so the stream starts at the first passage.
    let first = stream
        .iter()
        .position(|it| matches!(it, WalkItem::Passage(_)))
        .ok_or_else(|| Error::Verify("no passages in traversal".into()))?;
    stream.rotate_left(first);

    let mut passages = Vec::new();
    let mut slots: Vec<Vec<Waypoint>> = Vec::new();
    for item in stream {
        match item {
            WalkItem::Passage(p) => {
                passages.push(p);
                slots.push(Vec::new());
            }
            WalkItem::Way(wp) => slots
                .last_mut()
                .ok_or_else(|| Error::Verify("waypoint before first passage".into()))?
                .push(wp),
        }
    }
    if passages.len() != 2 * w.crossings.len() {
        return Err(Error::Verify(format!(
            "traversal has {} passages, expected {}",
            passages.len(),
            2 * w.crossings.len()
        )));
    }
    Ok(KnotTraversal { passages, slots })
}

/// Assigns Maslov potentials by propagation over the cusp constraints.
fn solve_potential(w: &Wiring, modulus: Option<i64>) -> Result<MaslovPotential> {
    let n = w.wire_count;
    let mut potential = vec![i64::MIN; n];
    potential[0] = 0;
    // constraints: (upper, lower): mu[upper] = mu[lower] + 1
    let constraints: Vec<(usize, usize)> =
        w.caps.iter().map(|&(_, up, dn)| (up, dn)).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for &(u, l) in &constraints {
            if potential[u] == i64::MIN && potential[l] != i64::MIN {
                potential[u] = potential[l] + 1;
                changed = true;
            } else if potential[l] == i64::MIN && potential[u] != i64::MIN {
                potential[l] = potential[u] - 1;
                changed = true;
            }
        }
    }
    if potential.iter().any(|&p| p == i64::MIN) {
        return Err(Error::Verify("potential propagation did not reach every arc".into()));
    }
    for &(u, l) in &constraints {
        let diff = potential[u] - potential[l] - 1;
        let ok = match modulus {
            Some(m) => diff.rem_euclid(m) == 0,
            None => diff == 0,
        };
        if !ok {
            return Err(Error::Verify(format!(
                "inconsistent Maslov potential at cusp ({u},{l})"
            )));
        }
    }
    if let Some(m) = modulus {
        for p in &mut potential {
            *p = p.rem_euclid(m);
        }
    }
    Ok(MaslovPotential { potential, modulus })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_unknot() {
        let f = parse_front("L1 R1").unwrap();
        assert_eq!(f.events, vec![Event::LeftCusp(1), Event::RightCusp(1)]);
    }

    #[test]
    fn parse_comment_and_whitespace() {
        let f = parse_front("# a front\n L1   R1 # trailing\n").unwrap();
        assert_eq!(f.events.len(), 2);
    }

    #[test]
    fn reject_bad_token() {
        assert!(matches!(parse_front("L1 Z3"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_front("L1 X0"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn reject_open_strands() {
        assert!(matches!(parse_front("L1 X1"), Err(Error::Validation(_))));
    }

    #[test]
    fn reject_two_components() {
        // two disjoint unknots
        let err = parse_front("L1 R1 L1 R1").unwrap_err();
        match err {
            Error::Validation(msg) => assert!(msg.contains("2 components"), "{msg}"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn unknot_invariants() {
        let f = parse_front("L1 R1").unwrap();
        let inv = classical_invariants(&f).unwrap();
        assert_eq!(inv.tb, -1);
        assert_eq!(inv.rot, 0);
    }

    #[test]
    fn unknot_resolution() {
        let f = parse_front("L1 R1").unwrap();
        let d = resolve(&f).unwrap();
        assert_eq!(d.crossings.len(), 1);
        assert_eq!(d.crossings[0].grading, 1);
        assert_eq!(d.traversal.passages.len(), 2);
        // two arcs with potentials differing by 1
        let p = &d.potential.potential;
        assert_eq!(p.len(), 2);
        assert_eq!((p[0] - p[1]).abs(), 1);
    }

    #[test]
    fn potential_shift_preserves_gradings() {
        let f = parse_front("L1 L1 X2 X2 X2 R1 R1").unwrap();
        let d = resolve(&f).unwrap();
        let shifted = d.potential.shifted(1);
        for c in &d.crossings {
            if c.source == CrossingSource::Front {
                let g = shifted.potential[c.over_wire] - shifted.potential[c.under_wire];
                assert_eq!(g, c.grading);
            }
        }
    }

    #[test]
    fn trefoil_invariants() {
        let f = parse_front("L1 L1 X2 X2 X2 R1 R1").unwrap();
        let inv = classical_invariants(&f).unwrap();
        assert_eq!(inv.tb, 1);
        assert_eq!(inv.rot, 0);
    }
}
