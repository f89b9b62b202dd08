//! The length-two layer of the conjugated expanded differential and the
//! cap product inverting the duality map on homology.
//!
//! With three copies, the length-two words of the conjugated differential
//! split by the types of their two letters into components with domain the
//! `P` spaces (into Q (x) P, P (x) Q and P (x) P) and the `Q` spaces (into
//! Q (x) P and Q (x) Q). Contracting the second factor with the evaluation
//! against a fundamental-class representative yields the cap product
//! `phi: P -> Q`, which drops one level, has degree +1, and inverts `eta`
//! on homology after one translation.

use crate::duality::copy::{CopyDga, CopyGen, CopyKind, Provenance};
use crate::duality::split::{induced_map, FundamentalClass, SplitComplexes};
use crate::error::{Error, Result};
use crate::gf2::Mat;
use std::collections::BTreeMap;

type Pairs = BTreeMap<CopyGen, Vec<(CopyGen, CopyGen)>>;

/// Length-two components of the conjugated differential of a 3-copy
/// algebra, split by letter types.
#[derive(Debug, Clone)]
pub struct LengthTwoComponents {
    /// `P -> Q (x) P` (first letter a q/c/d chord, second a p chord).
    pub phi_qp: Pairs,
    /// `P -> P (x) Q`.
    pub phi_pq: Pairs,
    /// `P -> P (x) P`.
    pub phi_pp: Pairs,
    /// `Q -> Q (x) P` on level-2 q/c/d chords.
    pub psi_qp: Pairs,
    /// `Q -> Q (x) Q` on level-2 q/c/d chords.
    pub psi_qq: Pairs,
}

fn is_p(g: CopyGen) -> bool {
    matches!(g.kind, CopyKind::P(_))
}

/// Extracts and verifies the length-two components of a 3-copy algebra.
pub fn length_two(copy: &CopyDga, s: &SplitComplexes) -> Result<LengthTwoComponents> {
    if copy.n != 3 {
        return Err(Error::Validation("the length-two layer needs the 3-copy algebra".into()));
    }
    let mut phi_qp: Pairs = BTreeMap::new();
    let mut phi_pq: Pairs = BTreeMap::new();
    let mut phi_pp: Pairs = BTreeMap::new();
    let mut psi_qp: Pairs = BTreeMap::new();
    let mut psi_qq: Pairs = BTreeMap::new();
    for (&g, words) in &s.conj {
        for w in words {
            if w.len() != 2 {
                continue;
            }
            let (a, b) = (w[0], w[1]);
            if a.level + b.level != g.level {
                return Err(Error::Verify(format!(
                    "levels of {} do not sum to the level of {g}",
                    CopyDga::word_name(w)
                )));
            }
            if is_p(g) {
                match (is_p(a), is_p(b)) {
                    (false, true) => phi_qp.entry(g).or_default().push((a, b)),
                    (true, false) => phi_pq.entry(g).or_default().push((a, b)),
                    (true, true) => phi_pp.entry(g).or_default().push((a, b)),
                    (false, false) => {
                        return Err(Error::Verify(format!(
                            "d({g}) leaves P: length-two word {}",
                            CopyDga::word_name(w)
                        )))
                    }
                }
            } else if g.level == 2 {
                match (is_p(a), is_p(b)) {
                    (false, true) => psi_qp.entry(g).or_default().push((a, b)),
                    (false, false) => psi_qq.entry(g).or_default().push((a, b)),
                    _ => {}
                }
            }
        }
    }
    let lt = LengthTwoComponents { phi_qp, phi_pq, phi_pp, psi_qp, psi_qq };
    verify_length_two(copy, s, &lt)?;
    Ok(lt)
}

/// Linearized differential restricted to the Q or P side, at the generator
/// level, from the split data.
fn d1_map(s: &SplitComplexes) -> BTreeMap<CopyGen, Vec<CopyGen>> {
    let mut out = BTreeMap::new();
    for (&g, words) in &s.conj {
        out.insert(g, words.iter().filter(|w| w.len() == 1).map(|w| w[0]).collect::<Vec<_>>());
    }
    out
}

fn eta_of(g: CopyGen, d1: &BTreeMap<CopyGen, Vec<CopyGen>>) -> Vec<CopyGen> {
    if is_p(g) || g.level == 0 {
        return Vec::new();
    }
    d1[&g].iter().copied().filter(|&t| is_p(t)).collect()
}

fn q_part(g: CopyGen, d1: &BTreeMap<CopyGen, Vec<CopyGen>>) -> Vec<CopyGen> {
    d1[&g].iter().copied().filter(|&t| !is_p(t)).collect()
}

fn p_part(d1: &BTreeMap<CopyGen, Vec<CopyGen>>, g: CopyGen) -> Vec<CopyGen> {
    d1[&g].iter().copied().filter(|&t| is_p(t)).collect()
}

/// Adds `pairs(x)` for every `x` in `list` into an accumulator with parity.
fn accumulate(acc: &mut BTreeMap<(CopyGen, CopyGen), u64>, items: impl IntoIterator<Item = (CopyGen, CopyGen)>) {
    for it in items {
        *acc.entry(it).or_insert(0) += 1;
    }
}

fn residue(acc: BTreeMap<(CopyGen, CopyGen), u64>) -> Vec<(CopyGen, CopyGen)> {
    acc.into_iter().filter(|(_, c)| c % 2 == 1).map(|(p, _)| p).collect()
}

/// Chain identities satisfied by the length-two components, as the
/// length-two part of `d^2 = 0` in each letter-type block.
fn verify_length_two(copy: &CopyDga, s: &SplitComplexes, lt: &LengthTwoComponents) -> Result<()> {
    let d1 = d1_map(s);
    let empty: Vec<(CopyGen, CopyGen)> = Vec::new();
    let get = |m: &Pairs, g: CopyGen| m.get(&g).cloned().unwrap_or_default();

    // Phi_QP dP + (dQ (x) 1 + 1 (x) dP) Phi_QP = 0
    for &g in copy.gens.iter().filter(|g| is_p(**g)) {
        let mut acc = BTreeMap::new();
        for t in p_part(&d1, g) {
            accumulate(&mut acc, get(&lt.phi_qp, t));
        }
        for (u, v) in get(&lt.phi_qp, g) {
            accumulate(&mut acc, q_part(u, &d1).into_iter().map(|u2| (u2, v)));
            accumulate(&mut acc, p_part(&d1, v).into_iter().map(|v2| (u, v2)));
        }
        let r = residue(acc);
        if !r.is_empty() {
            return Err(Error::Verify(format!(
                "Phi_QP chain identity fails at {g}: residue {} (x) {}",
                r[0].0, r[0].1
            )));
        }
    }
    // Phi_PQ dP + (dP (x) 1 + 1 (x) dQ) Phi_PQ = 0
    for &g in copy.gens.iter().filter(|g| is_p(**g)) {
        let mut acc = BTreeMap::new();
        for t in p_part(&d1, g) {
            accumulate(&mut acc, get(&lt.phi_pq, t));
        }
        for (u, v) in get(&lt.phi_pq, g) {
            accumulate(&mut acc, p_part(&d1, u).into_iter().map(|u2| (u2, v)));
            accumulate(&mut acc, q_part(v, &d1).into_iter().map(|v2| (u, v2)));
        }
        let r = residue(acc);
        if !r.is_empty() {
            return Err(Error::Verify(format!(
                "Phi_PQ chain identity fails at {g}: residue {} (x) {}",
                r[0].0, r[0].1
            )));
        }
    }
    // Phi_PP dP + (dP (x) 1 + 1 (x) dP) Phi_PP
    //   + (eta (x) 1) Phi_QP + (1 (x) eta) Phi_PQ = 0
    for &g in copy.gens.iter().filter(|g| is_p(**g)) {
        let mut acc = BTreeMap::new();
        for t in p_part(&d1, g) {
            accumulate(&mut acc, get(&lt.phi_pp, t));
        }
        for (u, v) in get(&lt.phi_pp, g) {
            accumulate(&mut acc, p_part(&d1, u).into_iter().map(|u2| (u2, v)));
            accumulate(&mut acc, p_part(&d1, v).into_iter().map(|v2| (u, v2)));
        }
        for (u, v) in get(&lt.phi_qp, g) {
            accumulate(&mut acc, eta_of(u, &d1).into_iter().map(|u2| (u2, v)));
        }
        for (u, v) in get(&lt.phi_pq, g) {
            accumulate(&mut acc, eta_of(v, &d1).into_iter().map(|v2| (u, v2)));
        }
        let r = residue(acc);
        if !r.is_empty() {
            return Err(Error::Verify(format!(
                "Phi_PP chain identity fails at {g}: residue {} (x) {}",
                r[0].0, r[0].1
            )));
        }
    }
    // Psi_QP dQ + Phi_QP eta + (dQ (x) 1 + 1 (x) dP) Psi_QP
    //   + (1 (x) eta) Psi_QQ = 0 on level-2 Q chords
    for &g in copy.gens.iter().filter(|g| !is_p(**g) && g.level == 2) {
        let mut acc = BTreeMap::new();
        for t in q_part(g, &d1) {
            accumulate(&mut acc, get(&lt.psi_qp, t));
        }
        for t in eta_of(g, &d1) {
            accumulate(&mut acc, get(&lt.phi_qp, t));
        }
        for (u, v) in get(&lt.psi_qp, g) {
            accumulate(&mut acc, q_part(u, &d1).into_iter().map(|u2| (u2, v)));
            accumulate(&mut acc, p_part(&d1, v).into_iter().map(|v2| (u, v2)));
        }
        for (u, v) in get(&lt.psi_qq, g) {
            accumulate(&mut acc, eta_of(v, &d1).into_iter().map(|v2| (u, v2)));
        }
        let r = residue(acc);
        if !r.is_empty() {
            return Err(Error::Verify(format!(
                "Psi_QP chain identity fails at {g}: residue {} (x) {}",
                r[0].0, r[0].1
            )));
        }
    }
    let _ = empty;
    Ok(())
}

/// The cap product data and its verification.
#[derive(Debug, Clone)]
pub struct CapReport {
    /// `phi: P^2 -> Q^1` over the split bases.
    pub phi2: Mat,
    /// `phi: P^1 -> Q^0`.
    pub phi1: Mat,
    /// Per degree: the matrix of `(phi tau)_*` on `H(P^1) -> H(Q^1)`.
    pub inverse_on_homology: BTreeMap<i64, Mat>,
    /// True when `(phi tau)_*` equals the inverse of `eta_*` in every
    /// degree, computed both by composing induced maps and by inducing the
    /// composed chain map.
    pub inverse_verified: bool,
    /// Whether the opposite composition through level 0 agrees (it loses
    /// the minima classes in general).
    pub through_level_zero_agrees: bool,
}

/// Builds `phi = (1 (x) ev) Phi_QP`, checks it is a degree +1 chain map,
/// verifies that `tau` then `phi` inverts `eta` on homology, and checks the
/// chain-level homotopy identities binding `eta`, `phi` and `tau`.
pub fn cap_product(
    copy: &CopyDga,
    s: &SplitComplexes,
    lt: &LengthTwoComponents,
    fc: &FundamentalClass,
) -> Result<CapReport> {
    let crossings = s.crossings;
    let lv0 = &s.levels[0];
    let lv1 = &s.levels[1];
    let lv2 = &s.levels[2];
    let d1 = d1_map(s);

    // ev on P^1 from the fundamental class representative
    let ev = |g: CopyGen| -> bool {
        match g.kind {
            CopyKind::P(i) if g.level == 1 => fc.representative.get(i),
            _ => false,
        }
    };
    // ev kills dP(P^1)
    for (col, &p) in lv1.p_basis.iter().enumerate() {
        let _ = p;
        let mut count = 0;
        for row in lv1.p.d.column(col).ones() {
            if ev(lv1.p_basis[row]) {
                count += 1;
            }
        }
        if count % 2 != 0 {
            return Err(Error::Verify(format!(
                "ev does not vanish on dP({})",
                lv1.p_basis[col]
            )));
        }
    }

    // eta evaluated against the class: <eta(g), k>
    let ev_eta = |g: CopyGen| -> bool {
        if is_p(g) || g.level != 1 {
            return false;
        }
        d1[&g].iter().filter(|t| is_p(**t) && ev(**t)).count() % 2 == 1
    };

    // phi matrices
    let pairs_of = |m: &Pairs, g: CopyGen| m.get(&g).cloned().unwrap_or_default();
    let mut phi2 = Mat::zero(lv1.q_basis.len(), lv2.p_basis.len());
    for (col, &p) in lv2.p_basis.iter().enumerate() {
        for (u, v) in pairs_of(&lt.phi_qp, p) {
            if ev(v) {
                let row = lv1.q_basis.iter().position(|&x| x == u).unwrap();
                phi2.flip(row, col);
            }
        }
    }
    let mut phi1 = Mat::zero(lv0.q_basis.len(), lv1.p_basis.len());
    for (col, &p) in lv1.p_basis.iter().enumerate() {
        for (u, v) in pairs_of(&lt.phi_qp, p) {
            if ev(v) {
                let row = lv0.q_basis.iter().position(|&x| x == u).unwrap();
                phi1.flip(row, col);
            }
        }
    }

    // degree +1
    for (col, &p) in lv2.p_basis.iter().enumerate() {
        for row in phi2.column(col).ones() {
            let want = copy.normalize(copy.grading(p) + 1);
            if lv1.q.gradings[row] != want {
                return Err(Error::Verify(format!("phi({p}) is not degree +1")));
            }
        }
    }
    // chain maps
    if phi2.mul(&lv2.p.d) != lv1.q.d.mul(&phi2) || phi1.mul(&lv1.p.d) != lv0.q.d.mul(&phi1) {
        return Err(Error::Verify("phi is not a chain map".into()));
    }

    // (phi tau)_* inverts eta_*; tau: P^1 -> P^2 is the basis relabel, so
    // the composed chain map is phi2 itself read over the P^1 basis.
    let phi_tau = phi2.clone();
    let composed = induced_map(&lv1.p_homology, &lv1.q_homology, &lv1.q, &phi_tau, 1)?;
    // route two: compose tau_* (identity on classes) with phi2_* per degree
    let tau_p = Mat::identity(lv1.p_basis.len());
    let tau_star = induced_map(&lv1.p_homology, &lv2.p_homology, &lv2.p, &tau_p, 0)?;
    let phi2_star = induced_map(&lv2.p_homology, &lv1.q_homology, &lv1.q, &phi2, 1)?;
    let mut inverse_verified = true;
    for (&deg, m) in &composed {
        let via = phi2_star
            .get(&deg)
            .map(|b| b.mul(tau_star.get(&deg).expect("tau on this degree")));
        if via.as_ref() != Some(m) {
            inverse_verified = false;
        }
        // against eta: eta_*: H_{deg+1}(Q^1) -> H_deg(P^1)
        let eta_star =
            induced_map(&lv1.q_homology, &lv1.p_homology, &lv1.p, &lv1.eta, -1)?;
        if let Some(e) = eta_star.get(&lv1.q.normalize(deg + 1)) {
            let id_q = m.mul(e);
            let id_p = e.mul(m);
            if id_q != Mat::identity(id_q.rows) || id_p != Mat::identity(id_p.rows) {
                inverse_verified = false;
            }
        } else if lv1.p_homology.dim(deg) > 0 {
            inverse_verified = false;
        }
    }
    if !inverse_verified {
        return Err(Error::Verify("phi after tau does not invert eta on homology".into()));
    }

    // composition through level zero loses the minima classes in general
    let tau_q0 = {
        let mut m = Mat::zero(lv1.q_basis.len(), lv0.q_basis.len());
        for i in 0..crossings {
            m.set(i, i, true);
        }
        m
    };
    let through0 = tau_q0.mul(&phi1);
    let mut through_level_zero_agrees = true;
    for (&deg, h) in &lv1.p_homology.by_degree {
        if h.dim == 0 {
            continue;
        }
        for z in &h.reps {
            let a = phi_tau.apply(z);
            let b = through0.apply(z);
            let target = lv1.q.normalize(deg + 1);
            let ca = lv1.q_homology.class_of(target, &a);
            let cb = lv1.q_homology.class_of(target, &b);
            if ca != cb {
                through_level_zero_agrees = false;
            }
        }
    }

    // homotopy identities at the chain level
    // H = (1 (x) ev) Phi_PP tau, iota_P = (1 (x) ev eta) Phi_PQ tau
    let np1 = lv1.p_basis.len();
    let mut h_map = Mat::zero(np1, np1);
    let mut iota_p = Mat::zero(np1, np1);
    for (col, &p1) in lv1.p_basis.iter().enumerate() {
        let p2 = CopyGen::p(index_of_p(p1), 2);
        for (u, v) in pairs_of(&lt.phi_pp, p2) {
            if ev(v) {
                let row = lv1.p_basis.iter().position(|&x| x == u).unwrap();
                h_map.flip(row, col);
            }
        }
        for (u, v) in pairs_of(&lt.phi_pq, p2) {
            if ev_eta(v) {
                let row = lv1.p_basis.iter().position(|&x| x == u).unwrap();
                iota_p.flip(row, col);
            }
        }
    }
    // eta phi tau: P^1 -> Q^1 -> P^1
    let eta_phi_tau = lv1.eta.mul(&phi_tau);
    let lhs = eta_phi_tau.add(&iota_p);
    let rhs = h_map.mul(&lv1.p.d).add(&lv1.p.d.mul(&h_map));
    if lhs != rhs {
        return Err(Error::Verify(
            "the chain homotopy identity for eta phi tau fails".into(),
        ));
    }
    // iota_P acts as the identity on homology
    for (&deg, h) in &lv1.p_homology.by_degree {
        for z in &h.reps {
            let image = iota_p.apply(z);
            let class = lv1
                .p_homology
                .class_of(deg, &image)
                .ok_or_else(|| Error::Verify("iota_P image is not a cycle".into()))?;
            let self_class = lv1.p_homology.class_of(deg, z).unwrap();
            if class != self_class {
                return Err(Error::Verify(
                    "iota_P is not the identity on homology".into(),
                ));
            }
        }
    }
    // exactly one thin disk contributes a p (x) d term to Phi_PQ tau(p),
    // and ev eta of a minimum chord is 1
    for i in 0..crossings {
        let p2 = CopyGen::p(i, 2);
        let count = copy.raw[&p2]
            .iter()
            .filter(|w| {
                matches!(w.provenance, Provenance::Thin(_))
                    && w.letters.len() == 2
                    && w.letters[0] == CopyGen::p(i, 1)
                    && matches!(w.letters[1].kind, CopyKind::D(_))
            })
            .count();
        if count != 1 {
            return Err(Error::Verify(format!(
                "{} thin disks contribute p (x) d to d(p{}^2); expected exactly one",
                count,
                i + 1
            )));
        }
    }
    for j in 0..s.minima {
        if !ev_eta(CopyGen::d(j, 1)) {
            return Err(Error::Verify(format!(
                "eta(d{}^1) does not pair to 1 with the fundamental class",
                j + 1
            )));
        }
    }

    // K = (1 (x) ev) Psi_QP tau and the matching identity on Q^1
    let nq1 = lv1.q_basis.len();
    let mut k_map = Mat::zero(nq1, nq1);
    let mut iota_q = Mat::zero(nq1, nq1);
    for (col, &g1) in lv1.q_basis.iter().enumerate() {
        let g2 = CopyGen { kind: g1.kind, level: 2 };
        for (u, v) in pairs_of(&lt.psi_qp, g2) {
            if ev(v) {
                let row = lv1.q_basis.iter().position(|&x| x.kind == u.kind && u.level == 1);
                let row = row.ok_or_else(|| Error::Verify(format!("{u} outside Q^1")))?;
                k_map.flip(row, col);
            }
        }
        for (u, v) in pairs_of(&lt.psi_qq, g2) {
            if ev_eta(v) {
                let row = lv1.q_basis.iter().position(|&x| x.kind == u.kind && u.level == 1);
                let row = row.ok_or_else(|| Error::Verify(format!("{u} outside Q^1")))?;
                iota_q.flip(row, col);
            }
        }
    }
    // phi eta tau: Q^1 -> Q^2 -> P^2 -> Q^1; tau is the relabel, and eta at
    // level 2 equals eta at level 1
    let phi_eta_tau = phi2.mul(&lv1.eta);
    let lhs_q = phi_eta_tau.add(&iota_q);
    let rhs_q = k_map.mul(&lv1.q.d).add(&lv1.q.d.mul(&k_map));
    if lhs_q != rhs_q {
        return Err(Error::Verify(
            "the chain homotopy identity for phi eta tau fails".into(),
        ));
    }

    Ok(CapReport {
        phi2,
        phi1,
        inverse_on_homology: composed,
        inverse_verified,
        through_level_zero_agrees,
    })
}

fn index_of_p(g: CopyGen) -> usize {
    match g.kind {
        CopyKind::P(i) => i,
        _ => unreachable!(),
    }
}
