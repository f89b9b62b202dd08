//! Temporary corpus search harness (deleted after the corpus is frozen).

use lch_core::dga::{differential, Word};
use lch_core::diagram::{parse_front, resolve};

fn words(v: &[&[usize]]) -> Vec<Word> {
    let mut out: Vec<Word> = v.iter().map(|w| w.to_vec()).collect();
    out.sort();
    out
}

#[test]
#[ignore]
fn search_5_2() {
    let mut hits = Vec::new();
    for p in 0..=7usize {
        for l2 in 1..=3usize {
            let tail = 7 - p;
            for mask in 0..3usize.pow(tail as u32) {
                for r1 in 1..=3usize {
                    let mut word = String::from("L1");
                    for _ in 0..p {
                        word.push_str(" X1");
                    }
                    word.push_str(&format!(" L{l2}"));
                    let mut m = mask;
                    for _ in 0..tail {
                        word.push_str(&format!(" X{}", m % 3 + 1));
                        m /= 3;
                    }
                    word.push_str(&format!(" R{r1} R1"));
                    let Ok(front) = parse_front(&word) else { continue };
                    let Ok(d) = resolve(&front) else { continue };
                    if d.invariants.tb != 1 || d.invariants.rot != 0 {
                        continue;
                    }
                    let gradings: Vec<i64> = d.crossings.iter().map(|c| c.grading).collect();
                    if gradings != vec![0, 0, 1, 1, 2, -2, 2, 1, 1] {
                        continue;
                    }
                    let Ok(dga) = differential(&d) else { continue };
                    let want: Vec<Vec<Word>> = vec![
                        words(&[]),
                        words(&[]),
                        words(&[&[], &[0, 1]]),
                        words(&[&[], &[1, 0]]),
                        words(&[&[2, 0], &[0, 3]]),
                        words(&[]),
                        words(&[]),
                        words(&[&[], &[0], &[0, 5, 6]]),
                        words(&[&[], &[0], &[6, 5, 0]]),
                    ];
                    if dga.boundary == want {
                        hits.push(word.clone());
                        println!("EXACT MATCH: {word}");
                    }
                }
            }
        }
    }
    println!("total hits: {}", hits.len());
    assert!(!hits.is_empty());
}


/// Kauffman bracket of the resolved diagram, as exponent -> coeff in A.
fn kauffman(d: &lch_core::diagram::ResolvedDiagram) -> std::collections::BTreeMap<i64, i64> {
    use lch_core::diagram::Role;
    // edge-end nodes: (crossing, half) with half in 0..4: 0=EUp,1=WUp,2=WDn,3=EDn
    let halves = |role: Role, east: bool| -> (usize, usize) {
        match (role, east) {
            (Role::Over, true) => (1, 3),
            (Role::Over, false) => (3, 1),
            (Role::Under, true) => (2, 0),
            (Role::Under, false) => (0, 2),
        }
    };
    let n = d.crossings.len();
    let t = &d.traversal;
    let idx = |c: usize, h: usize| c * 4 + h;
    // edges connect (leave half of passage k) to (enter half of passage k+1)
    let mut edge_pairs = Vec::new();
    let m = t.passages.len();
    for k in 0..m {
        let p = t.passages[k];
        let q = t.passages[(k + 1) % m];
        let (_, leave) = halves(p.role, p.east);
        let (enter, _) = halves(q.role, q.east);
        edge_pairs.push((idx(p.crossing, leave), idx(q.crossing, enter)));
    }
    let mut bracket: std::collections::BTreeMap<i64, i64> = std::collections::BTreeMap::new();
    for state in 0..(1u32 << n) {
        let mut parent: Vec<usize> = (0..4 * n).collect();
        fn find(p: &mut Vec<usize>, mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        let mut union = |p: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(p, a), find(p, b));
            if ra != rb {
                p[ra] = rb;
            }
        };
        for &(a, b) in &edge_pairs {
            union(&mut parent, a, b);
        }
        let mut exp = 0i64;
        for c in 0..n {
            // A joins the regions swept ccw from the over strand (E and W):
            // arcs pair (WUp,EUp) and (WDn,EDn); B pairs (WUp,WDn),(EUp,EDn)
            if state >> c & 1 == 0 {
                exp += 1;
                union(&mut parent, idx(c, 1), idx(c, 0));
                union(&mut parent, idx(c, 2), idx(c, 3));
            } else {
                exp -= 1;
                union(&mut parent, idx(c, 1), idx(c, 2));
                union(&mut parent, idx(c, 0), idx(c, 3));
            }
        }
        let mut roots = std::collections::BTreeSet::new();
        for i in 0..4 * n {
            let r = find(&mut parent, i);
            roots.insert(r);
        }
        let loops = roots.len() as i64;
        // contribute A^exp * (-A^2 - A^-2)^(loops-1)
        for j in 0..loops {
            let coeff = binom(loops - 1, j) * if (loops - 1) % 2 == 0 { 1 } else { -1 };
            let e = exp + 2 * j - 2 * (loops - 1 - j);
            *bracket.entry(e).or_insert(0) += coeff;
        }
    }
    bracket.retain(|_, v| *v != 0);
    bracket
}

fn binom(n: i64, k: i64) -> i64 {
    let mut r = 1i64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// f-polynomial: bracket * (-A^3)^(-w), w = tb of the resolved diagram.
fn f_poly(d: &lch_core::diagram::ResolvedDiagram) -> std::collections::BTreeMap<i64, i64> {
    let w = d.invariants.tb;
    let bracket = kauffman(d);
    let sign = if (3 * w) % 2 == 0 { 1 } else { -1 };
    bracket
        .into_iter()
        .map(|(e, c)| (e - 3 * w, c * sign))
        .collect()
}

fn is_fig8_jones(d: &lch_core::diagram::ResolvedDiagram) -> bool {
    let f = f_poly(d);
    let want: std::collections::BTreeMap<i64, i64> =
        [(-8, 1), (-4, -1), (0, 1), (4, -1), (8, 1)].into_iter().collect();
    f == want
}

static STAGE: [std::sync::atomic::AtomicUsize; 4] = [
    std::sync::atomic::AtomicUsize::new(0),
    std::sync::atomic::AtomicUsize::new(0),
    std::sync::atomic::AtomicUsize::new(0),
    std::sync::atomic::AtomicUsize::new(0),
];

fn fig8_candidate(word: &str) -> bool {
    use lch_core::gf2::Vec2;
    use lch_core::linearize::{conjugate, find_augmentations, homology, linear_part};
    use std::sync::atomic::Ordering;
    let n0 = STAGE[0].fetch_add(1, Ordering::Relaxed);
    if n0 % 200_000 == 0 {
        eprintln!(
            "progress {} / resolved-ok {} / dga {} / augs2 {}",
            n0,
            STAGE[1].load(Ordering::Relaxed),
            STAGE[2].load(Ordering::Relaxed),
            STAGE[3].load(Ordering::Relaxed)
        );
    }
    let Ok(front) = parse_front(word) else { return false };
    let Ok(d) = resolve(&front) else { return false };
    if d.invariants.tb != -3 || d.invariants.rot != 0 {
        return false;
    }
    for i in [4, 6, 7, 8] {
        if d.crossings[i].grading != 1 {
            return false;
        }
    }
    if !is_fig8_jones(&d) {
        return false;
    }
    STAGE[1].fetch_add(1, Ordering::Relaxed);
    let mut cfg = lch_core::disks::DiskConfig::budget(1);
    cfg.max_nodes = 60_000;
    cfg.max_disks = 5_000;
    let Ok(dga) = lch_core::dga::differential_with(&d, cfg) else { return false };
    STAGE[2].fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    let Ok(augs) = find_augmentations(&dga) else { return false };
    if augs.len() != 2 {
        return false;
    }
    STAGE[3].fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    for aug in &augs {
        let Ok(c) = conjugate(&dga, aug) else { return false };
        let Ok(lc) = linear_part(&c) else { return false };
        let Ok(h) = homology(&lc) else { return false };
        if h.dim(1) != h.dim(-1) + 1 {
            return false;
        }
        for (&g, _) in &h.dims() {
            if g.abs() > 1 && h.dim(g) != h.dim(-g) {
                return false;
            }
        }
        let mut v = Vec2::zero(9);
        for i in [4, 6, 7, 8] {
            v.flip(i);
        }
        match h.class_of(1, &v) {
            Some(c) if !c.is_zero() => {}
            _ => return false,
        }
    }
    true
}

#[test]
#[ignore]
fn search_fig8() {
    let mut candidates: Vec<String> = Vec::new();
    for p2 in 0..=6usize {
        for p3 in p2..=6usize {
            for l2 in 1..=3usize {
                for l3 in 1..=5usize {
                    let n_mid = p3 - p2;
                    let n_aft = 6 - p3;
                    for mid_mask in 0..3usize.pow(n_mid as u32) {
                        for aft_mask in 0..5usize.pow(n_aft as u32) {
                            for r1 in 1..=5usize {
                                for r2 in 1..=3usize {
                                    let mut w = String::from("L1");
                                    for _ in 0..p2 {
                                        w.push_str(" X1");
                                    }
                                    w.push_str(&format!(" L{l2}"));
                                    let mut m = mid_mask;
                                    for _ in 0..n_mid {
                                        w.push_str(&format!(" X{}", m % 3 + 1));
                                        m /= 3;
                                    }
                                    w.push_str(&format!(" L{l3}"));
                                    let mut m = aft_mask;
                                    for _ in 0..n_aft {
                                        w.push_str(&format!(" X{}", m % 5 + 1));
                                        m /= 5;
                                    }
                                    w.push_str(&format!(" R{r1} R{r2} R1"));
                                    candidates.push(w);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for p in 0..=7usize {
        for l2 in 1..=3usize {
            let tail = 7 - p;
            for mask in 0..3usize.pow(tail as u32) {
                for r1 in 1..=3usize {
                    let mut w = String::from("L1");
                    for _ in 0..p {
                        w.push_str(" X1");
                    }
                    w.push_str(&format!(" L{l2}"));
                    let mut m = mask;
                    for _ in 0..tail {
                        w.push_str(&format!(" X{}", m % 3 + 1));
                        m /= 3;
                    }
                    w.push_str(&format!(" R{r1} R1"));
                    candidates.push(w);
                }
            }
        }
    }
    println!("candidates: {}", candidates.len());
    let n_threads = 16usize;
    let chunk = candidates.len().div_ceil(n_threads);
    let mut handles = Vec::new();
    for t in 0..n_threads {
        let lo = t * chunk;
        let hi = ((t + 1) * chunk).min(candidates.len());
        if lo >= hi {
            break;
        }
        let slice: Vec<String> = candidates[lo..hi].to_vec();
        handles.push(std::thread::spawn(move || {
            let mut hits = Vec::new();
            for w in &slice {
                if fig8_candidate(w) {
                    hits.push(w.clone());
                }
            }
            hits
        }));
    }
    let mut hits: Vec<String> = Vec::new();
    for h in handles {
        hits.extend(h.join().unwrap());
    }
    hits.sort();
    for h in hits.iter().take(40) {
        println!("CAND: {h}");
    }
    println!("total: {}", hits.len());
}

#[test]
#[ignore]
fn jones_sanity() {
    // unknot: f = 1
    let d = resolve(&parse_front("L1 R1").unwrap()).unwrap();
    let f = f_poly(&d);
    assert_eq!(f, [(0i64, 1i64)].into_iter().collect(), "{f:?}");
    // trefoil: V(t) = -t^-4 + t^-3 + t^-1 (left-handed) or mirror
    let d = resolve(&parse_front("L1 L1 X2 X2 X2 R1 R1").unwrap()).unwrap();
    let f = f_poly(&d);
    println!("trefoil f: {f:?}");
    assert_eq!(f.len(), 3);
    // 5_2 should NOT look like fig-8
    let d = resolve(&parse_front("L1 L1 X2 X2 X1 X3 X2 X2 X2 R1 R1").unwrap()).unwrap();
    assert!(!is_fig8_jones(&d));
}
