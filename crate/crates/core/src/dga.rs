//! The Chekanov–Eliashberg differential graded algebra of a resolved
//! diagram: the free unital tensor algebra over GF(2) on the crossings,
//! with the differential counting one-positive-corner immersed disks. A
//! boundary is stored as a set of words (the empty word is the unit), the
//! multiset of disk words reduced mod 2.

use crate::diagram::ResolvedDiagram;
use crate::disks::{enumerate_disks, Disk, DiskConfig};
use crate::error::Result;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// A word over the generators; empty means the unit 1.
pub type Word = Vec<usize>;

/// A graded free DGA over GF(2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dga {
    /// Grading per generator, reduced mod `modulus` when set.
    pub gradings: Vec<i64>,
    pub modulus: Option<i64>,
    /// Boundary per generator: a set of words, mod-2 reduced, sorted.
    pub boundary: Vec<Vec<Word>>,
}

impl Dga {
    pub fn generator_count(&self) -> usize {
        self.gradings.len()
    }

    pub fn normalize(&self, g: i64) -> i64 {
        match self.modulus {
            Some(m) => g.rem_euclid(m),
            None => g,
        }
    }

    pub fn word_grading(&self, w: &Word) -> i64 {
        self.normalize(w.iter().map(|&g| self.gradings[g]).sum())
    }

    /// `q{i+1} ...` display of a word; `1` for the empty word.
    pub fn word_name(w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut s = String::new();
        for (i, g) in w.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "q{}", g + 1);
        }
        s
    }

    /// Leibniz expansion of the differential on a word, mod 2.
    pub fn d_word(&self, w: &Word) -> Vec<Word> {
        let mut acc: BTreeMap<Word, u64> = BTreeMap::new();
        for i in 0..w.len() {
            for dw in &self.boundary[w[i]] {
                let mut term = Vec::with_capacity(w.len() - 1 + dw.len());
                term.extend_from_slice(&w[..i]);
                term.extend_from_slice(dw);
                term.extend_from_slice(&w[i + 1..]);
                *acc.entry(term).or_insert(0) += 1;
            }
        }
        acc.into_iter().filter(|(_, c)| c % 2 == 1).map(|(w, _)| w).collect()
    }

    /// The boundary of a sum of words, mod 2.
    pub fn d_sum(&self, ws: &[Word]) -> Vec<Word> {
        reduce_mod2(ws.iter().flat_map(|w| self.d_word(w)))
    }
}

/// Reduces a multiset of words mod 2 into a sorted set.
pub fn reduce_mod2<I: IntoIterator<Item = Word>>(words: I) -> Vec<Word> {
    let mut acc: BTreeMap<Word, u64> = BTreeMap::new();
    for w in words {
        *acc.entry(w).or_insert(0) += 1;
    }
    acc.into_iter().filter(|(_, c)| c % 2 == 1).map(|(w, _)| w).collect()
}

/// Enumerates admissible disks with positive-corner count between 1 and
/// `budget`.
pub fn diagram_disks(diagram: &ResolvedDiagram, budget: usize) -> Result<Vec<Disk>> {
    enumerate_disks(diagram, DiskConfig::budget(budget))
}

/// Assembles the differential from one-positive-corner disks.
pub fn differential(diagram: &ResolvedDiagram) -> Result<Dga> {
    differential_capped(diagram, 1_000_000)
}

/// As [`differential`] with an explicit disk cap.
pub fn differential_capped(diagram: &ResolvedDiagram, max_disks: usize) -> Result<Dga> {
    differential_with(diagram, DiskConfig::budget(1).with_max_disks(max_disks))
}

/// As [`differential`] with full control over enumeration limits.
pub fn differential_with(diagram: &ResolvedDiagram, cfg: DiskConfig) -> Result<Dga> {
    let disks = enumerate_disks(diagram, cfg)?;
    let n = diagram.crossings.len();
    let mut per_gen: Vec<Vec<Word>> = vec![Vec::new(); n];
    for d in &disks {
        if d.positive_count() != 1 {
            continue;
        }
        let k = d.positive_indices()[0];
        per_gen[d.corners[k].crossing].push(d.word_from(k));
    }
    let boundary: Vec<Vec<Word>> = per_gen.into_iter().map(reduce_mod2).collect();
    let gradings = diagram.crossings.iter().map(|c| c.grading).collect();
    Ok(Dga { gradings, modulus: diagram.grading_modulus(), boundary })
}

/// Diagnostic report of [`check_dga`].
#[derive(Debug, Clone, Default)]
pub struct DgaReport {
    /// `(generator, word)` pairs where the word grading is not `|g| - 1`.
    pub degree_violations: Vec<(usize, Word)>,
    /// Nonzero words of `d(d(generator))`.
    pub d_squared_residues: Vec<(usize, Word)>,
    /// Disks failing strict height positivity.
    pub height_violations: Vec<Disk>,
}

impl DgaReport {
    pub fn is_clean(&self) -> bool {
        self.degree_violations.is_empty()
            && self.d_squared_residues.is_empty()
            && self.height_violations.is_empty()
    }
}

/// Checks degree -1, `d^2 = 0`, and height positivity of contributing
/// disks. The report is empty on success.
pub fn check_dga(diagram: &ResolvedDiagram, dga: &Dga) -> Result<DgaReport> {
    let mut report = DgaReport::default();
    for g in 0..dga.generator_count() {
        let target = dga.normalize(dga.gradings[g] - 1);
        for w in &dga.boundary[g] {
            if dga.word_grading(w) != target {
                report.degree_violations.push((g, w.clone()));
            }
        }
        for w in dga.d_sum(&dga.boundary[g]) {
            report.d_squared_residues.push((g, w));
        }
    }
    for d in enumerate_disks(diagram, DiskConfig::budget(1))? {
        if !d.stokes_positive() {
            report.height_violations.push(d);
        }
    }
    Ok(report)
}

/// Γ-filter for link DGAs: each letter carries `(upper, lower)` component
/// labels; a word lies in `Γ_{jk}` iff the first letter's upper strand is
/// `j`, the last letter's lower strand is `k`, and adjacent letters chain.
/// The empty word stands for the idempotent `e_j`, so it passes iff
/// `j == k`.
pub fn gamma_filter(word: &[(u8, u8)], j: u8, k: u8) -> bool {
    if word.is_empty() {
        return j == k;
    }
    if word[0].0 != j || word[word.len() - 1].1 != k {
        return false;
    }
    word.windows(2).all(|p| p[0].1 == p[1].0)
}

/// Convenience: grading-0 generators of a DGA, ascending.
pub fn degree_zero_generators(dga: &Dga) -> Vec<usize> {
    let zero = dga.normalize(0);
    (0..dga.generator_count()).filter(|&g| dga.gradings[g] == zero).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_front, resolve};

    #[test]
    fn unknot_dga() {
        let d = resolve(&parse_front("L1 R1").unwrap()).unwrap();
        let dga = differential(&d).unwrap();
        assert_eq!(dga.gradings, vec![1]);
        // the two disks cancel mod 2
        assert!(dga.boundary[0].is_empty());
        assert!(check_dga(&d, &dga).unwrap().is_clean());
    }

    #[test]
    fn trefoil_dga_invariants() {
        let d = resolve(&parse_front("L1 L1 X2 X2 X2 R1 R1").unwrap()).unwrap();
        let dga = differential(&d).unwrap();
        let report = check_dga(&d, &dga).unwrap();
        assert!(report.is_clean(), "{report:?}");
        // cusp crossings have grading 1 and a unit term from the teardrop
        for c in &d.crossings {
            if c.source == crate::diagram::CrossingSource::Cusp {
                assert_eq!(c.grading, 1);
                assert!(dga.boundary[c.id].contains(&Vec::new()), "{:?}", dga.boundary[c.id]);
            }
        }
    }

    #[test]
    fn gamma_filter_cases() {
        // single letter with labels (1,0) against (0,1): false
        assert!(!gamma_filter(&[(1, 0)], 0, 1));
        // empty word passes iff j == k
        assert!(gamma_filter(&[], 2, 2));
        assert!(!gamma_filter(&[], 1, 0));
        // chained word
        assert!(gamma_filter(&[(1, 0), (0, 0)], 1, 0));
        assert!(!gamma_filter(&[(1, 1), (0, 0)], 1, 0));
    }

    #[test]
    fn degree_violation_detected() {
        let dga = Dga { gradings: vec![5], modulus: None, boundary: vec![vec![vec![0]]] };
        let target = dga.normalize(dga.gradings[0] - 1);
        assert_ne!(dga.word_grading(&vec![0]), target);
    }
}
