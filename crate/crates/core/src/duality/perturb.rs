//! Perturbation data for the copy construction: a Morse function on the
//! knot with minima (`d` points) and maxima (`c` points) alternating along
//! the traversal, none of them over a crossing.
//!
//! The canonical scheme puts one minimum on each right-cusp loop (at the
//! loop's cap) and one maximum at the median free waypoint of each
//! complementary arc; the alternate scheme shifts each maximum to the first
//! free waypoint instead, exercising independence of the choice.

use crate::diagram::{Cap, ResolvedDiagram, Waypoint};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Canonical,
    Alt,
}

/// Reference to a perturbation critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SiteRef {
    Min(usize),
    Max(usize),
}

/// One downhill run: the passages encountered from a start point to the
/// minimum ending the run.
#[derive(Debug, Clone)]
pub struct Run {
    pub passages: Vec<usize>,
    pub min: usize,
}

#[derive(Debug, Clone)]
pub struct PerturbationScheme {
    pub kind: SchemeKind,
    /// Number of minima = number of maxima.
    pub count: usize,
    /// Positions: `minima[j]` and `maxima[j]` as (slot, waypoint index).
    pub minima: Vec<(usize, usize)>,
    pub maxima: Vec<(usize, usize)>,
    /// Downhill remainder from each passage: passages strictly after it on
    /// its segment, then the minimum reached.
    pub run_from_passage: Vec<Run>,
    /// The two downhill runs out of each maximum.
    pub runs_from_max: Vec<[Run; 2]>,
    /// The two minima adjacent to each maximum (the ends of its runs).
    pub adjacent_minima: Vec<[usize; 2]>,
    /// Sites on wire gaps: per wire, sorted (after_col, site).
    pub sites_on_wire: BTreeMap<usize, Vec<(usize, SiteRef)>>,
    /// Sites at caps.
    pub site_at_cap: BTreeMap<Cap, SiteRef>,
}

impl PerturbationScheme {
    /// Sites passed by a wire run from `col_from` to `col_to` (travel
    /// order).
    pub fn sites_on_run(&self, wire: usize, col_from: usize, col_to: usize) -> Vec<SiteRef> {
        let Some(list) = self.sites_on_wire.get(&wire) else { return Vec::new() };
        if col_from <= col_to {
            list.iter()
                .filter(|(c, _)| *c >= col_from && *c < col_to)
                .map(|&(_, s)| s)
                .collect()
        } else {
            list.iter()
                .rev()
                .filter(|(c, _)| *c >= col_to && *c < col_from)
                .map(|&(_, s)| s)
                .collect()
        }
    }
}

/// Builds the perturbation scheme for a resolved knot diagram.
pub fn perturbation_data(d: &ResolvedDiagram, kind: SchemeKind) -> Result<PerturbationScheme> {
    let t = &d.traversal;
    let n_pass = t.passages.len();

    // minima: at loop caps, indexed in traversal order
    let mut minima: Vec<(usize, usize)> = Vec::new();
    for (slot, wps) in t.slots.iter().enumerate() {
        for (wi, wp) in wps.iter().enumerate() {
            if let Waypoint::Cap(cap) = wp {
                if !cap.birth {
                    minima.push((slot, wi));
                }
            }
        }
    }
    if minima.is_empty() {
        return Err(Error::Validation("no right cusps; not a closed front".into()));
    }
    let r = minima.len();

    // complementary arcs: from minimum j to minimum j+1 (cyclically), the
    // free waypoints strictly between them
    let mut maxima = Vec::new();
    for j in 0..r {
        let (s0, w0) = minima[j];
        let (s1, w1) = minima[(j + 1) % r];
        let mut candidates: Vec<(usize, usize)> = Vec::new();
        // waypoints after the minimum in its slot
        let mut slot = s0;
        let mut wi = w0 + 1;
        loop {
            if slot == s1 && (s0, w0) != (s1, w1) {
                for k in wi..w1 {
                    candidates.push((slot, k));
                }
                break;
            }
            let wps = &t.slots[slot];
            for k in wi..wps.len() {
                candidates.push((slot, k));
            }
            slot = (slot + 1) % t.slots.len();
            wi = 0;
            if slot == s1 {
                for k in 0..w1 {
                    candidates.push((slot, k));
                }
                break;
            }
        }
        if candidates.is_empty() {
            return Err(Error::Validation(format!(
                "no room for a maximum between minima {j} and {}",
                (j + 1) % r
            )));
        }
        let pick = match kind {
            SchemeKind::Canonical => candidates.len() / 2,
            SchemeKind::Alt => 0,
        };
        maxima.push(candidates[pick]);
    }

    // cyclic order of all items for runs: walk slots and record sites
    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    enum Item {
        Passage(usize),
        Site(SiteRef),
    }
    let mut site_at: BTreeMap<(usize, usize), SiteRef> = BTreeMap::new();
    for (j, &pos) in minima.iter().enumerate() {
        site_at.insert(pos, SiteRef::Min(j));
    }
    for (j, &pos) in maxima.iter().enumerate() {
        if site_at.insert(pos, SiteRef::Max(j)).is_some() {
            return Err(Error::Verify("maximum placed on a minimum".into()));
        }
    }
    let mut order: Vec<Item> = Vec::new();
    for slot in 0..t.slots.len() {
        order.push(Item::Passage(slot));
        for wi in 0..t.slots[slot].len() {
            if let Some(&s) = site_at.get(&(slot, wi)) {
                order.push(Item::Site(s));
            }
        }
    }
    // alternation of minima and maxima along the cyclic order
    let site_seq: Vec<SiteRef> =
        order.iter().filter_map(|it| if let Item::Site(s) = it { Some(*s) } else { None }).collect();
    for k in 0..site_seq.len() {
        let a = site_seq[k];
        let b = site_seq[(k + 1) % site_seq.len()];
        let ok = matches!(
            (a, b),
            (SiteRef::Min(_), SiteRef::Max(_)) | (SiteRef::Max(_), SiteRef::Min(_))
        );
        if !ok {
            return Err(Error::Verify("maxima and minima do not alternate".into()));
        }
    }

    // runs: from each position, walk forward/backward to the adjacent min
    let l = order.len();
    let forward_run = |start: usize| -> Run {
        let mut passages = Vec::new();
        let mut i = (start + 1) % l;
        loop {
            match order[i] {
                Item::Passage(p) => passages.push(p),
                Item::Site(SiteRef::Min(m)) => return Run { passages, min: m },
                Item::Site(SiteRef::Max(_)) => unreachable!("run hit a maximum"),
            }
            i = (i + 1) % l;
        }
    };
    let backward_run = |start: usize| -> Run {
        let mut passages = Vec::new();
        let mut i = (start + l - 1) % l;
        loop {
            match order[i] {
                Item::Passage(p) => passages.push(p),
                Item::Site(SiteRef::Min(m)) => return Run { passages, min: m },
                Item::Site(SiteRef::Max(_)) => unreachable!("run hit a maximum"),
            }
            i = (i + l - 1) % l;
        }
    };

    let mut run_from_passage = Vec::with_capacity(n_pass);
    for p in 0..n_pass {
        let pos = order.iter().position(|&it| it == Item::Passage(p)).unwrap();
        // downhill is the direction that hits a minimum first
        let mut i = (pos + 1) % l;
        let downhill_forward = loop {
            match order[i] {
                Item::Site(SiteRef::Min(_)) => break true,
                Item::Site(SiteRef::Max(_)) => break false,
                Item::Passage(_) => i = (i + 1) % l,
            }
        };
        run_from_passage.push(if downhill_forward { forward_run(pos) } else { backward_run(pos) });
    }
    let mut runs_from_max = Vec::with_capacity(r);
    let mut adjacent_minima = Vec::with_capacity(r);
    for j in 0..r {
        let pos = order.iter().position(|&it| it == Item::Site(SiteRef::Max(j))).unwrap();
        let fwd = forward_run(pos);
        let bwd = backward_run(pos);
        adjacent_minima.push([fwd.min, bwd.min]);
        runs_from_max.push([fwd, bwd]);
    }

    // site positions resolved to waypoints for boundary-piece matching
    let mut sites_on_wire: BTreeMap<usize, Vec<(usize, SiteRef)>> = BTreeMap::new();
    let mut site_at_cap: BTreeMap<Cap, SiteRef> = BTreeMap::new();
    for (&(slot, wi), &site) in &site_at {
        match t.slots[slot][wi] {
            Waypoint::Gap(g) => sites_on_wire.entry(g.wire).or_default().push((g.after_col, site)),
            Waypoint::Cap(cap) => {
                site_at_cap.insert(cap, site);
            }
        }
    }
    for list in sites_on_wire.values_mut() {
        list.sort();
    }

    Ok(PerturbationScheme {
        kind,
        count: r,
        minima,
        maxima,
        run_from_passage,
        runs_from_max,
        adjacent_minima,
        sites_on_wire,
        site_at_cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_front, resolve};

    #[test]
    fn unknot_scheme() {
        let d = resolve(&parse_front("L1 R1").unwrap()).unwrap();
        let s = perturbation_data(&d, SchemeKind::Canonical).unwrap();
        assert_eq!(s.count, 1);
        assert_eq!(s.adjacent_minima[0], [0, 0]);
        // each run out of the maximum passes exactly one passage
        assert_eq!(s.runs_from_max[0][0].passages.len(), 1);
        assert_eq!(s.runs_from_max[0][1].passages.len(), 1);
    }

    #[test]
    fn five_two_scheme() {
        let d = resolve(&parse_front("L1 L1 X2 X2 X1 X3 X2 X2 X2 R1 R1").unwrap()).unwrap();
        for kind in [SchemeKind::Canonical, SchemeKind::Alt] {
            let s = perturbation_data(&d, kind).unwrap();
            assert_eq!(s.count, 2);
            // every passage has a downhill run ending at a minimum
            assert_eq!(s.run_from_passage.len(), 18);
        }
    }
}
