//! Augmentations, the change of variables, the word-length-one part of the
//! differential, graded GF(2) homology and Poincaré polynomials.

use crate::dga::{degree_zero_generators, reduce_mod2, Dga, Word};
use crate::error::{Error, Result};
use crate::gf2::{echelon, reduce_mod, Mat, Vec2};
use std::collections::{BTreeMap, BTreeSet};

/// An augmentation: the set of generators sent to 1. All of them have
/// grading 0 and the multiplicative extension kills the differential.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Augmentation {
    pub augmented: BTreeSet<usize>,
}

impl Augmentation {
    pub fn empty() -> Self {
        Augmentation { augmented: BTreeSet::new() }
    }

    pub fn evaluates_word(&self, w: &Word) -> bool {
        w.iter().all(|g| self.augmented.contains(g))
    }

    /// `epsilon(d(g))` over GF(2).
    fn kills_boundary_of(&self, dga: &Dga, g: usize) -> bool {
        let ones = dga.boundary[g].iter().filter(|w| self.evaluates_word(w)).count();
        ones % 2 == 0
    }

    /// Checks the two augmentation conditions against a DGA.
    pub fn is_valid(&self, dga: &Dga) -> bool {
        let zero = dga.normalize(0);
        self.augmented.iter().all(|&g| dga.gradings[g] == zero)
            && (0..dga.generator_count()).all(|g| self.kills_boundary_of(dga, g))
    }
}

/// Exhaustively lists all augmentations, in lexicographic order of their
/// augmented sets (viewed as sorted generator lists).
pub fn find_augmentations(dga: &Dga) -> Result<Vec<Augmentation>> {
    let zeros = degree_zero_generators(dga);
    if zeros.len() > 25 {
        return Err(Error::CapExceeded(format!(
            "augmentation search over 2^{} candidates",
            zeros.len()
        )));
    }
    let mut out = Vec::new();
    for mask in 0..(1u64 << zeros.len()) {
        let augmented: BTreeSet<usize> =
            zeros.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &g)| g).collect();
        let aug = Augmentation { augmented };
        if aug.is_valid(dga) {
            out.push(aug);
        }
    }
    out.sort();
    Ok(out)
}

/// Conjugates the DGA by the change of variables sending each augmented
/// generator `q` to `q + 1`. Over GF(2) this substitution is an involution,
/// and for a valid augmentation the constant part of the result vanishes.
pub fn conjugate(dga: &Dga, aug: &Augmentation) -> Result<Dga> {
    let boundary: Vec<Vec<Word>> = dga
        .boundary
        .iter()
        .map(|words| {
            reduce_mod2(words.iter().flat_map(|w| expand_word(w, aug)))
        })
        .collect();
    for (g, words) in boundary.iter().enumerate() {
        if words.iter().any(|w| w.is_empty()) {
            return Err(Error::Verify(format!(
                "not an augmentation: constant term survives in d(q{})",
                g + 1
            )));
        }
    }
    Ok(Dga { gradings: dga.gradings.clone(), modulus: dga.modulus, boundary })
}

/// Substitutes `q -> q + 1` for augmented letters: all subwords obtained by
/// deleting subsets of augmented letters.
fn expand_word(w: &Word, aug: &Augmentation) -> Vec<Word> {
    let mut acc: Vec<Word> = vec![Vec::new()];
    for &g in w {
        if aug.augmented.contains(&g) {
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

/// A graded GF(2) chain complex with a degree -1 differential given as one
/// matrix over the whole basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearComplex {
    /// Display name per basis element.
    pub labels: Vec<String>,
    pub gradings: Vec<i64>,
    pub modulus: Option<i64>,
    /// `d` as a matrix: column `j` is `d(basis[j])`.
    pub d: Mat,
}

impl LinearComplex {
    pub fn dim(&self) -> usize {
        self.gradings.len()
    }

    pub fn normalize(&self, g: i64) -> i64 {
        match self.modulus {
            Some(m) => g.rem_euclid(m),
            None => g,
        }
    }

    /// Indices of basis elements in degree `g`.
    pub fn degree_indices(&self, g: i64) -> Vec<usize> {
        let g = self.normalize(g);
        (0..self.dim()).filter(|&i| self.gradings[i] == g).collect()
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut ds: Vec<i64> = self.gradings.clone();
        ds.sort();
        ds.dedup();
        ds
    }

    /// Verifies `d^2 = 0` and that `d` lowers degree by exactly 1.
    pub fn check(&self) -> Result<()> {
        if !self.d.mul(&self.d).is_zero() {
            return Err(Error::Verify("d^2 != 0 on a linear complex".into()));
        }
        for j in 0..self.dim() {
            for i in self.d.column(j).ones() {
                if self.gradings[i] != self.normalize(self.gradings[j] - 1) {
                    return Err(Error::Verify(format!(
                        "degree violation: d({}) hits {}",
                        self.labels[j], self.labels[i]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Pretty form of a chain vector.
    pub fn vector_name(&self, v: &Vec2) -> String {
        let ones = v.ones();
        if ones.is_empty() {
            return "0".into();
        }
        ones.iter().map(|&i| self.labels[i].clone()).collect::<Vec<_>>().join("+")
    }
}

/// Extracts the word-length-one differential of a DGA with vanishing
/// constant part.
pub fn linear_part(dga: &Dga) -> Result<LinearComplex> {
    let n = dga.generator_count();
    let mut d = Mat::zero(n, n);
    for g in 0..n {
        for w in &dga.boundary[g] {
            match w.len() {
                0 => {
                    return Err(Error::Verify(format!(
                        "constant part of d(q{}) is nonzero; conjugate by an augmentation first",
                        g + 1
                    )))
                }
                1 => d.flip(w[0], g),
                _ => {}
            }
        }
    }
    let lc = LinearComplex {
        labels: (0..n).map(|g| format!("q{}", g + 1)).collect(),
        gradings: dga.gradings.clone(),
        modulus: dga.modulus,
        d,
    };
    lc.check()?;
    Ok(lc)
}

/// Homology of one degree: dimension and canonical representative cycles.
#[derive(Debug, Clone)]
pub struct HomologyDegree {
    pub dim: usize,
    /// Representative cycles, reduced against the boundary space and
    /// echelonized (deterministic pivoting by basis index).
    pub reps: Vec<Vec2>,
    /// Echelon basis of the boundary space in this degree.
    pub boundaries: Vec<Vec2>,
    /// Echelon basis of the cycle space in this degree.
    pub cycles: Vec<Vec2>,
}

/// Graded homology of a [`LinearComplex`].
#[derive(Debug, Clone)]
pub struct Homology {
    pub by_degree: BTreeMap<i64, HomologyDegree>,
}

impl Homology {
    pub fn dim(&self, degree: i64) -> usize {
        self.by_degree.get(&degree).map_or(0, |h| h.dim)
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.by_degree.iter().filter(|(_, h)| h.dim > 0).map(|(&g, h)| (g, h.dim)).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.by_degree.values().map(|h| h.dim).sum()
    }

    /// Coordinates of a cycle's class in the representative basis of its
    /// degree; `None` if the vector is not a cycle of this degree.
    pub fn class_of(&self, degree: i64, v: &Vec2) -> Option<Vec2> {
        let h = self.by_degree.get(&degree)?;
        let reduced = reduce_mod(v, &h.boundaries);
        // express `reduced` in span(reps) (reps are echelonized)
        let mut coords = Vec2::zero(h.reps.len());
        let mut rest = reduced;
        for (k, r) in h.reps.iter().enumerate() {
            if let Some(p) = r.first_one() {
                if rest.get(p) {
                    rest.xor_assign(r);
                    coords.set(k, true);
                }
            }
        }
        if rest.is_zero() {
            Some(coords)
        } else {
            None
        }
    }
}

/// Computes graded homology with deterministic representatives.
pub fn homology(c: &LinearComplex) -> Result<Homology> {
    c.check()?;
    let n = c.dim();
    let mut by_degree = BTreeMap::new();
    for g in c.degrees() {
        let idx = c.degree_indices(g);
        // cycles: kernel of d restricted to degree-g columns
        let mut restricted = Mat::zero(n, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            restricted.set_column(jj, c.d.column(j).clone());
        }
        let kernel_small = restricted.kernel_basis();
        let cycles: Vec<Vec2> = kernel_small
            .iter()
            .map(|k| {
                let mut v = Vec2::zero(n);
                for jj in k.ones() {
                    v.flip(idx[jj]);
                }
                v
            })
            .collect();
        let cycles = echelon(cycles);
        // boundaries: image of d from degree g+1 (respecting the modulus)
        let above = c.degree_indices(g + 1);
        let boundaries = echelon(above.iter().map(|&j| c.d.column(j).clone()).collect());
        let reps = echelon(
            cycles.iter().map(|z| reduce_mod(z, &boundaries)).filter(|v| !v.is_zero()).collect(),
        );
        let dim = reps.len();
        debug_assert_eq!(dim, cycles.len() - boundaries.len());
        by_degree.insert(g, HomologyDegree { dim, reps, boundaries, cycles });
    }
    Ok(Homology { by_degree })
}

/// A Laurent polynomial with nonnegative integer coefficients; exponents
/// live in `Z` or in `Z / 2rot`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LaurentPoly {
    pub coefficients: BTreeMap<i64, u64>,
    pub modulus: Option<i64>,
}

impl LaurentPoly {
    pub fn from_dims(dims: &BTreeMap<i64, usize>, modulus: Option<i64>) -> Self {
        let coefficients =
            dims.iter().filter(|(_, &d)| d > 0).map(|(&g, &d)| (g, d as u64)).collect();
        LaurentPoly { coefficients, modulus }
    }

    /// `P(1/t)`, only meaningful over integer exponents.
    pub fn inverted(&self) -> LaurentPoly {
        LaurentPoly {
            coefficients: self.coefficients.iter().map(|(&e, &c)| (-e, c)).collect(),
            modulus: self.modulus,
        }
    }
}

impl std::fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coefficients.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in &self.coefficients {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (c, e) {
                (c, 0) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, e) => write!(f, "t^{e}")?,
                (c, 1) => write!(f, "{c}t")?,
                (c, e) => write!(f, "{c}t^{e}")?,
            }
        }
        Ok(())
    }
}

/// The Poincaré polynomial of the linearization at one augmentation.
pub fn poincare_polynomial(dga: &Dga, aug: &Augmentation) -> Result<LaurentPoly> {
    let lc = linear_part(&conjugate(dga, aug)?)?;
    let h = homology(&lc)?;
    Ok(LaurentPoly::from_dims(&h.dims(), dga.modulus))
}

/// The full set of Poincaré polynomials over all augmentations, duplicates
/// collapsed.
pub fn poincare_set(dga: &Dga) -> Result<BTreeSet<LaurentPoly>> {
    let mut out = BTreeSet::new();
    for aug in find_augmentations(dga)? {
        out.insert(poincare_polynomial(dga, &aug)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_front, resolve};

    fn unknot_dga() -> Dga {
        crate::dga::differential(&resolve(&parse_front("L1 R1").unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn unknot_single_empty_augmentation() {
        let dga = unknot_dga();
        let augs = find_augmentations(&dga).unwrap();
        assert_eq!(augs.len(), 1);
        assert!(augs[0].augmented.is_empty());
    }

    #[test]
    fn unknot_poincare() {
        let dga = unknot_dga();
        let set = poincare_set(&dga).unwrap();
        assert_eq!(set.len(), 1);
        let p = set.iter().next().unwrap();
        assert_eq!(p.coefficients, BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn conjugate_is_involution() {
        let d = resolve(&parse_front("L1 L1 X2 X2 X2 R1 R1").unwrap()).unwrap();
        let dga = crate::dga::differential(&d).unwrap();
        for aug in find_augmentations(&dga).unwrap() {
            let once = conjugate(&dga, &aug).unwrap();
            // the conjugated differential keeps the augmentation valid in the
            // sense that substituting again returns the original
            let twice_boundary: Vec<Vec<Word>> = once
                .boundary
                .iter()
                .map(|ws| reduce_mod2(ws.iter().flat_map(|w| expand_word(w, &aug))))
                .collect();
            assert_eq!(twice_boundary, dga.boundary);
        }
    }

    #[test]
    fn stabilization_pair_has_zero_homology() {
        // two generators a (degree k), b (degree k-1), d(a) = b
        let mut d = Mat::zero(2, 2);
        d.set(1, 0, true);
        let lc = LinearComplex {
            labels: vec!["a".into(), "b".into()],
            gradings: vec![3, 2],
            modulus: None,
            d,
        };
        let h = homology(&lc).unwrap();
        assert_eq!(h.total_dim(), 0);
    }

    #[test]
    fn zero_complex_dims_match_generators() {
        let lc = LinearComplex {
            labels: vec!["a".into(), "b".into(), "c".into()],
            gradings: vec![0, 0, 2],
            modulus: None,
            d: Mat::zero(3, 3),
        };
        let h = homology(&lc).unwrap();
        assert_eq!(h.dim(0), 2);
        assert_eq!(h.dim(2), 1);
    }
}
