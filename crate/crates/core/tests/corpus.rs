use khovanov::corpus::{prime_knots, random_diagrams};
use khovanov::oracle::{cube_homology, kauffman_bracket};
use khovanov::planar::{order_crossings, Diagram, OrderStrategy};
use khovanov::ring::{Integers, PrimeField, Rationals, Ring};
use khovanov::scan::{closed_euler, scan, scan_homology, ScanOptions};

fn agree<R: Ring>(ring: &R, d: &Diagram, label: &str) {
    let order = order_crossings(d.crossings(), OrderStrategy::Greedy);
    let s = scan_homology(ring, d, &order, &ScanOptions::default()).unwrap();
    let o = cube_homology(ring, d).unwrap();
    assert_eq!(s, o, "{label} over {}", ring.name());
}

#[test]
fn prime_knots_match_the_table_and_the_cube() {
    for k in prime_knots() {
        let order = order_crossings(k.diagram.crossings(), OrderStrategy::Greedy);
        let s = scan_homology(&Integers, &k.diagram, &order, &ScanOptions::default()).unwrap();
        assert_eq!(s, k.homology, "{}", k.name);
        agree(&Integers, &k.diagram, &k.name);
        agree(&Rationals, &k.diagram, &k.name);
        agree(&PrimeField::new(2).unwrap(), &k.diagram, &k.name);
    }
}

#[test]
fn random_diagrams_match_the_cube() {
    for r in random_diagrams(2024, 50, 8) {
        let label = format!("{}-strand {:?}", r.strands, r.word);
        agree(&Integers, &r.diagram, &label);
        agree(&Rationals, &r.diagram, &label);
        agree(&PrimeField::new(2).unwrap(), &r.diagram, &label);
    }
}

#[test]
fn euler_characteristic_is_the_bracket() {
    let knots = prime_knots().into_iter().map(|k| (k.name, k.diagram));
    let random = random_diagrams(2024, 50, 8).into_iter().map(|r| (format!("{:?}", r.word), r.diagram));
    for (name, d) in knots.chain(random) {
        let order = order_crossings(d.crossings(), OrderStrategy::Greedy);
        let r = scan(&Integers, &d, &order, &ScanOptions::default()).unwrap();
        assert_eq!(closed_euler(&r.complex), kauffman_bracket(&d).unwrap(), "{name}");
    }
}
