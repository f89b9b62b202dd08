use std::time::Instant;
fn main() {
    for (name, front) in [
        ("unknot", "L1 R1"),
        ("trefoil", "L1 L1 X2 X2 X2 R1 R1"),
        ("5_2", "L1 L1 X2 X2 X1 X3 X2 X2 X2 R1 R1"),
    ] {
        let f = lch_core::diagram::parse_front(front).unwrap();
        let d = lch_core::diagram::resolve(&f).unwrap();
        let base = lch_core::dga::differential(&d).unwrap();
        let scheme = lch_core::duality::perturb::perturbation_data(
            &d,
            lch_core::duality::perturb::SchemeKind::Canonical,
        )
        .unwrap();
        for n in [2u8, 3] {
            let t0 = Instant::now();
            match lch_core::duality::copy::build_copies(&d, &base, &scheme, n) {
                Ok(c) => println!("{name} n={n}: ok, {} gens, {:?}", c.gens.len(), t0.elapsed()),
                Err(e) => println!("{name} n={n}: ERR {e} after {:?}", t0.elapsed()),
            }
        }
    }
}
