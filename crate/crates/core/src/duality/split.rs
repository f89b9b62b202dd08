//! Linearized structure of the expanded algebra: the extended augmentation,
//! the level-preserving splitting of the length-one differential into the
//! `Q` and `P` complexes with the connecting map `eta`, the circle complex
//! of the perturbation, the translation between levels, the duality of
//! dimensions under the `<p_i, q_j>` pairing, and the fundamental class.

use crate::diagram::{CrossingSource, ResolvedDiagram};
use crate::duality::copy::{reduce, CopyDga, CopyGen, CopyKind};
use crate::duality::perturb::PerturbationScheme;
use crate::error::{Error, Result};
use crate::gf2::{Mat, Vec2};
use crate::linearize::{homology, Augmentation, Homology, LinearComplex};
use std::collections::{BTreeMap, BTreeSet};

/// An augmentation of the expanded algebra: supported on level-0 chords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyAugmentation {
    pub augmented: BTreeSet<CopyGen>,
}

impl CopyAugmentation {
    pub fn evaluates(&self, g: CopyGen) -> bool {
        self.augmented.contains(&g)
    }

    pub fn evaluates_word(&self, w: &[CopyGen]) -> bool {
        w.iter().all(|g| self.augmented.contains(g))
    }

    /// Checks support (level-0 q chords only) and that the extension kills
    /// the differential.
    pub fn validate(&self, copy: &CopyDga) -> Result<()> {
        for &g in &self.augmented {
            if g.level != 0 || !matches!(g.kind, CopyKind::Q(_)) {
                return Err(Error::Verify(format!(
                    "augmentation must vanish off level-0 chords; {g} is augmented"
                )));
            }
        }
        for (&g, words) in &copy.boundary {
            let ones = words.iter().filter(|w| self.evaluates_word(w)).count();
            if ones % 2 != 0 {
                return Err(Error::Verify(format!("extended augmentation does not kill d({g})")));
            }
        }
        Ok(())
    }
}

/// Extends a base augmentation by zero off level 0 and verifies it kills
/// the expanded differential.
pub fn extend_augmentation(copy: &CopyDga, aug: &Augmentation) -> Result<CopyAugmentation> {
    let ext =
        CopyAugmentation { augmented: aug.augmented.iter().map(|&i| CopyGen::q(i, 0)).collect() };
    ext.validate(copy)?;
    Ok(ext)
}

/// Conjugates the expanded boundary by the extended augmentation
/// (substituting `g -> g + 1` on augmented letters).
pub fn conjugate_copy(
    copy: &CopyDga,
    aug: &CopyAugmentation,
) -> Result<BTreeMap<CopyGen, Vec<Vec<CopyGen>>>> {
    let mut out = BTreeMap::new();
    for (&g, words) in &copy.boundary {
        let expanded = reduce(words.iter().flat_map(|w| expand(w, aug)));
        if expanded.iter().any(|w| w.is_empty()) {
            return Err(Error::Verify(format!("constant term survives in conjugated d({g})")));
        }
        out.insert(g, expanded);
    }
    Ok(out)
}

fn expand(w: &[CopyGen], aug: &CopyAugmentation) -> Vec<Vec<CopyGen>> {
    let mut acc: Vec<Vec<CopyGen>> = vec![Vec::new()];
    for &g in w {
        if aug.evaluates(g) {
            let mut next = Vec::with_capacity(acc.len() * 2);
            for t in &acc {
                let mut with = t.clone();
                with.push(g);
                next.push(with);
                next.push(t.clone());
            }
            acc = next;
        } else {
            for t in &mut acc {
                t.push(g);
            }
        }
    }
    acc
}

/// One level of the splitting.
#[derive(Debug, Clone)]
pub struct Level {
    /// Basis of `Q^m`: q chords by crossing, then c chords, then d chords.
    pub q_basis: Vec<CopyGen>,
    pub q: LinearComplex,
    /// Basis of `P^m` (empty at level 0).
    pub p_basis: Vec<CopyGen>,
    pub p: LinearComplex,
    /// The connecting component of the linearized differential,
    /// `eta: Q^m -> P^m` (degree -1).
    pub eta: Mat,
    pub q_homology: Homology,
    pub p_homology: Homology,
}

/// The split linearization of an expanded algebra at an extended
/// augmentation, with its structural identities verified.
#[derive(Debug, Clone)]
pub struct SplitComplexes {
    pub n: u8,
    pub crossings: usize,
    pub minima: usize,
    pub aug: CopyAugmentation,
    /// Conjugated boundary (all word lengths), for the length-two layer.
    pub conj: BTreeMap<CopyGen, Vec<Vec<CopyGen>>>,
    pub levels: Vec<Level>,
}

impl SplitComplexes {
    pub fn q_of(&self, m: usize) -> &LinearComplex {
        &self.levels[m].q
    }

    pub fn p_of(&self, m: usize) -> &LinearComplex {
        &self.levels[m].p
    }

    /// The q-only (thick) sub-block of `dQ` at a level.
    pub fn qbar_matrix(&self, m: usize) -> Mat {
        let lv = &self.levels[m];
        let mut out = Mat::zero(self.crossings, self.crossings);
        for j in 0..self.crossings {
            for i in 0..self.crossings {
                if lv.q.d.get(i, j) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }
}

/// Induced map on homology of a chain map `m` shifting degree by `shift`.
/// Fails when the image of a representative cycle is not a cycle.
pub fn induced_map(
    src: &Homology,
    dst: &Homology,
    dst_c: &LinearComplex,
    m: &Mat,
    shift: i64,
) -> Result<BTreeMap<i64, Mat>> {
    let mut out = BTreeMap::new();
    for (&deg, h) in &src.by_degree {
        if h.dim == 0 {
            continue;
        }
        let target_deg = dst_c.normalize(deg + shift);
        let target_dim = dst.by_degree.get(&target_deg).map_or(0, |t| t.dim);
        let mut mat = Mat::zero(target_dim, h.dim);
        for (k, z) in h.reps.iter().enumerate() {
            let image = m.apply(z);
            if image.is_zero() {
                continue;
            }
            let class = dst.class_of(target_deg, &image).ok_or_else(|| {
                Error::Verify(format!(
                    "image {} of a homology representative is not a cycle in degree {target_deg}",
                    dst_c.vector_name(&image)
                ))
            })?;
            mat.set_column(k, class);
        }
        out.insert(deg, mat);
    }
    Ok(out)
}

/// Splits the linearized conjugated differential by level and verifies the
/// structural identities. `base_linear` is `(A, d_1)` of the conjugated
/// base DGA.
pub fn split_linearized(
    copy: &CopyDga,
    aug: &CopyAugmentation,
    diagram: &ResolvedDiagram,
    scheme: &PerturbationScheme,
    base_linear: &LinearComplex,
) -> Result<SplitComplexes> {
    let n = copy.n as usize;
    let crossings = diagram.crossings.len();
    let minima = scheme.count;
    let conj = conjugate_copy(copy, aug)?;

    let mut d1: BTreeMap<CopyGen, Vec<CopyGen>> = BTreeMap::new();
    for (&g, words) in &conj {
        d1.insert(g, words.iter().filter(|w| w.len() == 1).map(|w| w[0]).collect());
    }

    // level preservation and the absence of P -> Q components
    for (&g, targets) in &d1 {
        for &t in targets {
            if t.level != g.level {
                return Err(Error::Verify(format!("d1({g}) crosses levels: hits {t}")));
            }
            let g_is_p = matches!(g.kind, CopyKind::P(_));
            let t_is_p = matches!(t.kind, CopyKind::P(_));
            if g_is_p && !t_is_p {
                return Err(Error::Verify(format!("d1({g}) leaves P: hits {t}")));
            }
        }
    }

    let mut levels = Vec::with_capacity(n);
    for m in 0..n {
        let m8 = m as u8;
        let mut q_basis: Vec<CopyGen> = (0..crossings).map(|i| CopyGen::q(i, m8)).collect();
        if m >= 1 {
            q_basis.extend((0..minima).map(|j| CopyGen::c(j, m8)));
            q_basis.extend((0..minima).map(|j| CopyGen::d(j, m8)));
        }
        let p_basis: Vec<CopyGen> =
            if m >= 1 { (0..crossings).map(|i| CopyGen::p(i, m8)).collect() } else { Vec::new() };
        let qi: BTreeMap<CopyGen, usize> =
            q_basis.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        let pi: BTreeMap<CopyGen, usize> =
            p_basis.iter().enumerate().map(|(k, &g)| (g, k)).collect();

        let mut dq = Mat::zero(q_basis.len(), q_basis.len());
        let mut dp = Mat::zero(p_basis.len(), p_basis.len());
        let mut eta = Mat::zero(p_basis.len(), q_basis.len());
        for (col, &g) in q_basis.iter().enumerate() {
            for &t in &d1[&g] {
                if let Some(&row) = qi.get(&t) {
                    dq.flip(row, col);
                } else {
                    eta.flip(pi[&t], col);
                }
            }
        }
        for (col, &g) in p_basis.iter().enumerate() {
            for &t in &d1[&g] {
                dp.flip(pi[&t], col);
            }
        }

        let q = LinearComplex {
            labels: q_basis.iter().map(|g| g.to_string()).collect(),
            gradings: q_basis.iter().map(|g| copy.grading(*g)).collect(),
            modulus: copy.modulus,
            d: dq,
        };
        let p = LinearComplex {
            labels: p_basis.iter().map(|g| g.to_string()).collect(),
            gradings: p_basis.iter().map(|g| copy.grading(*g)).collect(),
            modulus: copy.modulus,
            d: dp,
        };
        q.check()?;
        p.check()?;
        let q_homology = homology(&q)?;
        let p_homology = homology(&p)?;
        levels.push(Level { q_basis, q, p_basis, p, eta, q_homology, p_homology });
    }

    let split =
        SplitComplexes { n: copy.n, crossings, minima, aug: aug.clone(), conj, levels };
    verify_split(&split, copy, diagram, scheme, base_linear)?;
    Ok(split)
}

fn verify_split(
    s: &SplitComplexes,
    copy: &CopyDga,
    diagram: &ResolvedDiagram,
    scheme: &PerturbationScheme,
    base_linear: &LinearComplex,
) -> Result<()> {
    let n = s.n as usize;
    let crossings = s.crossings;
    let minima = s.minima;

    // (Q^0, dQ) is the linearized base complex
    if s.levels[0].q.d != base_linear.d {
        return Err(Error::Verify("level-0 complex differs from the base linearization".into()));
    }

    for m in 1..n {
        let lv = &s.levels[m];
        // thick q block reproduces the base linearization
        let qbar = s.qbar_matrix(m);
        if qbar != base_linear.d {
            return Err(Error::Verify(format!(
                "thick block of dQ at level {m} differs from the base linearization"
            )));
        }
        // c/d columns never hit q rows
        for col in crossings..lv.q_basis.len() {
            for row in 0..crossings {
                if lv.q.d.get(row, col) {
                    return Err(Error::Verify(format!(
                        "d1({}) hits {}",
                        lv.q_basis[col], lv.q_basis[row]
                    )));
                }
            }
        }
        // circle complex: dC(c_j) = d + d-bar, dC(d_j) = 0
        for j in 0..minima {
            let col = crossings + j;
            let mut want = Vec2::zero(lv.q_basis.len());
            let [m0, m1] = scheme.adjacent_minima[j];
            want.flip(crossings + minima + m0);
            want.flip(crossings + minima + m1);
            let mut got = Vec2::zero(lv.q_basis.len());
            for row in crossings..lv.q_basis.len() {
                if lv.q.d.get(row, col) {
                    got.flip(row);
                }
            }
            if got != want {
                return Err(Error::Verify(format!(
                    "dC(c{}^{m}) is not the sum of its adjacent minima",
                    j + 1
                )));
            }
            let dcol = crossings + minima + j;
            for row in crossings..lv.q_basis.len() {
                if lv.q.d.get(row, dcol) {
                    return Err(Error::Verify(format!("dC(d{}^{m}) is nonzero", j + 1)));
                }
            }
        }
        // d rows of q columns follow the adjacent-minima rule
        for i in 0..crossings {
            let augmented = s.aug.evaluates(CopyGen::q(i, 0));
            let mut want = Vec2::zero(lv.q_basis.len());
            if augmented {
                let over = diagram
                    .traversal
                    .passages
                    .iter()
                    .position(|p| p.crossing == i && p.role == crate::diagram::Role::Over)
                    .unwrap();
                let under = diagram
                    .traversal
                    .passages
                    .iter()
                    .position(|p| p.crossing == i && p.role == crate::diagram::Role::Under)
                    .unwrap();
                let m0 = crossings + minima + scheme.run_from_passage[over].min;
                let m1 = crossings + minima + scheme.run_from_passage[under].min;
                want.flip(m0);
                if m1 == m0 {
                    want.flip(m0);
                } else {
                    want.flip(m1);
                }
            }
            for row in crossings + minima..lv.q_basis.len() {
                if lv.q.d.get(row, i) != want.get(row) {
                    return Err(Error::Verify(format!(
                        "d rows of d1(q{}^{m}) do not match the adjacent-minima rule",
                        i + 1
                    )));
                }
            }
        }
        // pairing duality at the chain level: dP is the transpose of the
        // thick block
        if lv.p.d != qbar.transpose() {
            return Err(Error::Verify(format!(
                "dP at level {m} is not the transpose of the thick block"
            )));
        }
        // mapping cone (Q^m + P^m, d1) is acyclic
        let cone = cone_complex(lv, copy);
        let ch = homology(&cone)?;
        if ch.total_dim() != 0 {
            return Err(Error::Verify(format!(
                "mapping cone at level {m} is not acyclic: dims {:?}",
                ch.dims()
            )));
        }
    }

    // translation: levels 1..n-1 are combinatorially identical
    for m in 2..n {
        if s.levels[m].q.d != s.levels[1].q.d
            || s.levels[m].p.d != s.levels[1].p.d
            || s.levels[m].eta != s.levels[1].eta
        {
            return Err(Error::Verify(format!(
                "translation from level 1 to level {m} fails to commute with the differentials"
            )));
        }
    }

    // homology dimension relations (integer degrees only)
    if copy.modulus.is_none() {
        let h0 = &s.levels[0].q_homology;
        let h1q = &s.levels[1].q_homology;
        let h1p = &s.levels[1].p_homology;
        let mut degrees: BTreeSet<i64> = h0.dims().keys().copied().collect();
        degrees.extend(h1q.dims().keys());
        for &k in &degrees {
            if k.abs() > 1 && h1q.dim(k) != h0.dim(k) {
                return Err(Error::Verify(format!(
                    "dim H_{k}(Q^1) = {} differs from dim H_{k}(Q^0) = {}",
                    h1q.dim(k),
                    h0.dim(k)
                )));
            }
            if h0.dim(k) != h1p.dim(-k - 1) {
                return Err(Error::Verify(format!(
                    "dim H_{k}(Q^0) = {} differs from dim H_{}(P^1) = {}",
                    h0.dim(k),
                    -k - 1,
                    h1p.dim(-k - 1)
                )));
            }
        }
        if h1q.dim(-1) != h0.dim(-1) + 1 {
            return Err(Error::Verify(format!(
                "dim H_-1(Q^1) = {} is not dim H_-1(Q^0) + 1 = {}",
                h1q.dim(-1),
                h0.dim(-1) + 1
            )));
        }
        // all minima chords represent one nonzero class
        let lv = &s.levels[1];
        let dim = lv.q_basis.len();
        let mut first = None;
        for j in 0..minima {
            let mut v = Vec2::zero(dim);
            v.flip(crossings + minima + j);
            let class = lv
                .q_homology
                .class_of(-1, &v)
                .ok_or_else(|| Error::Verify(format!("d{}^1 is not a cycle", j + 1)))?;
            if class.is_zero() {
                return Err(Error::Verify(format!("[d{}^1] vanishes in H_-1(Q^1)", j + 1)));
            }
            match &first {
                None => first = Some(class),
                Some(f) => {
                    if *f != class {
                        return Err(Error::Verify(format!(
                            "[d{}^1] differs from [d1^1] in H_-1(Q^1)",
                            j + 1
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// The mapping cone complex `(Q^m + P^m, [[dQ, 0], [eta, dP]])`; the `P`
/// part sits one degree up so the block differential has uniform degree -1.
fn cone_complex(lv: &Level, copy: &CopyDga) -> LinearComplex {
    let nq = lv.q_basis.len();
    let np = lv.p_basis.len();
    let mut d = Mat::zero(nq + np, nq + np);
    for c in 0..nq {
        for r in lv.q.d.column(c).ones() {
            d.set(r, c, true);
        }
        for r in lv.eta.column(c).ones() {
            d.set(nq + r, c, true);
        }
    }
    for c in 0..np {
        for r in lv.p.d.column(c).ones() {
            d.set(nq + r, nq + c, true);
        }
    }
    let mut gradings: Vec<i64> = lv.q.gradings.clone();
    gradings.extend(lv.p.gradings.iter().map(|g| match copy.modulus {
        Some(m) => (g + 1).rem_euclid(m),
        None => g + 1,
    }));
    let mut labels = lv.q.labels.clone();
    labels.extend(lv.p.labels.iter().map(|l| format!("{l}+")));
    LinearComplex { labels, gradings, modulus: copy.modulus, d }
}

/// The degree-indexed isomorphism induced by `eta` on homology.
#[derive(Debug, Clone)]
pub struct EtaHomology {
    /// Chain-level `eta: Q^1 -> P^1`.
    pub chain: Mat,
    /// Per degree `k`: matrix `H_k(Q^1) -> H_{k-1}(P^1)`.
    pub on_homology: BTreeMap<i64, Mat>,
}

/// Computes `eta` on homology at level 1; the mapping cone is acyclic, so
/// this must be an isomorphism in every degree.
pub fn eta_homology(s: &SplitComplexes) -> Result<EtaHomology> {
    let lv = &s.levels[1];
    let on_homology = induced_map(&lv.q_homology, &lv.p_homology, &lv.p, &lv.eta, -1)?;
    for (&deg, m) in &on_homology {
        let src = lv.q_homology.dim(deg);
        let dst = lv.p_homology.dim(lv.p.normalize(deg - 1));
        if m.rows != dst || m.cols != src || src != dst || m.rank() != src {
            return Err(Error::Verify(format!(
                "eta is not an isomorphism on homology in degree {deg}"
            )));
        }
    }
    for (&deg, h) in &lv.p_homology.by_degree {
        if h.dim > 0 && lv.q_homology.dim(lv.q.normalize(deg + 1)) != h.dim {
            return Err(Error::Verify(format!("eta misses H_{deg}(P^1) (dimension mismatch)")));
        }
    }
    Ok(EtaHomology { chain: lv.eta.clone(), on_homology })
}

/// The fundamental class: the unique degree-1 class of the base
/// linearization pairing to 1 with `eta([d])` and to 0 with the images of
/// the thick degree -1 classes.
#[derive(Debug, Clone)]
pub struct FundamentalClass {
    /// Canonical representative over the crossing basis.
    pub representative: Vec2,
    /// Coordinates over the canonical basis of `H_1(A, d1)`.
    pub class: Vec2,
}

impl FundamentalClass {
    pub fn crossings(&self) -> Vec<usize> {
        self.representative.ones()
    }
}

pub fn fundamental_class(
    s: &SplitComplexes,
    diagram: &ResolvedDiagram,
) -> Result<FundamentalClass> {
    if s.levels[0].q.modulus.is_some() {
        return Err(Error::Validation("fundamental class requires rotation number 0".into()));
    }
    let lv0 = &s.levels[0];
    let lv1 = &s.levels[1];
    let crossings = s.crossings;
    let h1 = lv0
        .q_homology
        .by_degree
        .get(&1)
        .ok_or_else(|| Error::Verify("no degree-1 homology".into()))?;
    let unknowns = h1.dim;
    if unknowns == 0 {
        return Err(Error::Verify("H_1(A, d1) vanishes; no fundamental class".into()));
    }

    // eta applied to [d^1] and to the lifted thick degree -1 classes
    let mut d_chain = Vec2::zero(lv1.q_basis.len());
    d_chain.flip(crossings + s.minima);
    let mut constraints: Vec<(Vec2, bool)> = vec![(lv1.eta.apply(&d_chain), true)];
    if let Some(hm1) = lv0.q_homology.by_degree.get(&-1) {
        for z in &hm1.reps {
            let mut incl = Vec2::zero(lv1.q_basis.len());
            for i in z.ones() {
                incl.flip(i);
            }
            if !lv1.q.d.apply(&incl).is_zero() {
                return Err(Error::Verify("a degree -1 cycle fails to lift to level 1".into()));
            }
            constraints.push((lv1.eta.apply(&incl), false));
        }
    }

    // <eta(x), sum a_k z_k> = target, pairing p_i^1 with q_i^0
    let mut system = Mat::zero(constraints.len(), unknowns);
    let mut rhs = Vec2::zero(constraints.len());
    for (row, (p_chain, target)) in constraints.iter().enumerate() {
        let mut p_vec = Vec2::zero(crossings);
        for i in p_chain.ones() {
            p_vec.flip(i);
        }
        for (k, z) in h1.reps.iter().enumerate() {
            if p_vec.dot(z) {
                system.flip(row, k);
            }
        }
        rhs.set(row, *target);
    }
    let solution = system.solve(&rhs).ok_or_else(|| {
        Error::Verify("the pairing system for the fundamental class is infeasible".into())
    })?;
    if system.rank() != unknowns {
        return Err(Error::Verify(
            "the fundamental class is not unique (degenerate pairing system)".into(),
        ));
    }
    let mut representative = Vec2::zero(crossings);
    for k in solution.ones() {
        representative.xor_assign(&h1.reps[k]);
    }
    // every right-cusp chord is a summand of every representative
    for c in &diagram.crossings {
        if c.source == CrossingSource::Cusp {
            if !representative.get(c.id) {
                return Err(Error::Verify(format!(
                    "right-cusp chord q{} is missing from the fundamental class representative",
                    c.id + 1
                )));
            }
            for b in &h1.boundaries {
                if b.get(c.id) {
                    return Err(Error::Verify(format!(
                        "right-cusp chord q{} can be cancelled by a boundary",
                        c.id + 1
                    )));
                }
            }
        }
    }
    Ok(FundamentalClass { representative, class: solution })
}

/// Per-augmentation outcome of the duality verification.
#[derive(Debug, Clone)]
pub struct DualityReport {
    pub h_base: BTreeMap<i64, usize>,
    pub h_q1: BTreeMap<i64, usize>,
    pub h_p1: BTreeMap<i64, usize>,
    pub holds: bool,
    pub failures: Vec<String>,
}

/// Checks the duality identities through the three-complex dimension chain
/// (rotation number 0 inputs only).
pub fn duality_check(s: &SplitComplexes) -> Result<DualityReport> {
    if s.levels[0].q.modulus.is_some() {
        return Err(Error::Validation("duality check requires rotation number 0".into()));
    }
    let h_base = s.levels[0].q_homology.dims();
    let h_q1 = s.levels[1].q_homology.dims();
    let h_p1 = s.levels[1].p_homology.dims();
    let mut failures = Vec::new();
    let mut degrees: BTreeSet<i64> = h_base.keys().copied().collect();
    degrees.extend(h_base.keys().map(|k| -k).collect::<Vec<_>>());
    degrees.insert(1);
    degrees.insert(-1);
    let dim = |m: &BTreeMap<i64, usize>, k: i64| m.get(&k).copied().unwrap_or(0);
    for &k in &degrees {
        if k.abs() > 1 && dim(&h_base, k) != dim(&h_base, -k) {
            failures.push(format!(
                "h_{k} = {} but h_{} = {}",
                dim(&h_base, k),
                -k,
                dim(&h_base, -k)
            ));
        }
        if dim(&h_base, k) != dim(&h_p1, -k - 1) {
            failures.push(format!(
                "h_{k} = {} but dim H_{}(P^1) = {}",
                dim(&h_base, k),
                -k - 1,
                dim(&h_p1, -k - 1)
            ));
        }
        if dim(&h_p1, -k - 1) != dim(&h_q1, -k) {
            failures.push(format!(
                "dim H_{}(P^1) = {} but dim H_{}(Q^1) = {}",
                -k - 1,
                dim(&h_p1, -k - 1),
                -k,
                dim(&h_q1, -k)
            ));
        }
    }
    if dim(&h_base, 1) != dim(&h_base, -1) + 1 {
        failures.push(format!(
            "h_1 = {} but h_-1 + 1 = {}",
            dim(&h_base, 1),
            dim(&h_base, -1) + 1
        ));
    }
    Ok(DualityReport { h_base, h_q1, h_p1, holds: failures.is_empty(), failures })
}
