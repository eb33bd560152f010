use khovanov::complex::FormalComplex;
use khovanov::corpus::{knot, prime_knots};
use khovanov::homology::{homology, to_graded, HomologyTable};
use khovanov::planar::{order_crossings, Diagram, OrderStrategy, ScanOrder};
use khovanov::ring::{Integers, Rationals, Ring};
use khovanov::scan::{divide_and_conquer, scan, scan_homology, ScanOptions};

fn greedy(d: &Diagram) -> ScanOrder {
    order_crossings(d.crossings(), OrderStrategy::Greedy)
}

fn table<R: Ring>(c: &FormalComplex<R>) -> HomologyTable {
    homology(&to_graded(c).unwrap())
}

#[test]
fn braid_closures_agree_with_pd() {
    for k in prime_knots().into_iter().filter(|k| !k.braid.is_empty()) {
        let strands = k.braid.iter().map(|g| g.unsigned_abs() as usize).max().unwrap() + 1;
        let b = Diagram::from_braid(strands, &k.braid).unwrap();
        let h = scan_homology(&Integers, &b, &greedy(&b), &ScanOptions::default()).unwrap();
        assert_eq!(h, k.homology, "{} as braid {:?}", k.name, k.braid);
    }
}

#[test]
fn halves_agree_with_scanning() {
    for k in prime_knots().into_iter().filter(|k| k.diagram.crossing_count() >= 4) {
        let n = k.diagram.crossing_count();
        let order = greedy(&k.diagram);
        let cut: Vec<usize> = order.permutation[..n / 2].to_vec();
        let (c, split) = divide_and_conquer(&Integers, &k.diagram, &cut, &ScanOptions::default()).unwrap();
        assert_eq!(table(&c), k.homology, "{}", k.name);
        assert!(split.tensor_objects <= split.left_objects * split.right_objects);
    }
}

#[test]
fn figure_eight_split_tensor() {
    let d = knot("4_1").unwrap().diagram;
    let (c, split) = divide_and_conquer(&Rationals, &d, &[0, 1], &ScanOptions::default()).unwrap();
    assert_eq!(split.tensor_objects, 9);
    assert_eq!(table(&c).total_rank(), 6);
}

#[test]
fn mirror_reflects_rational_homology() {
    for k in prime_knots() {
        let m = k.diagram.mirror();
        let h = scan_homology(&Rationals, &k.diagram, &greedy(&k.diagram), &ScanOptions::default()).unwrap();
        let hm = scan_homology(&Rationals, &m, &greedy(&m), &ScanOptions::default()).unwrap();
        assert_eq!(hm, h.mirror_free(), "{}", k.name);
    }
}

#[test]
fn scanning_stays_below_the_cube() {
    for k in prime_knots() {
        let d = &k.diagram;
        let n = d.crossing_count();
        let r = scan(&Integers, d, &greedy(d), &ScanOptions::default()).unwrap();
        assert!(r.stats.peak_objects <= 1 << n, "{}", k.name);
        if n >= 6 {
            assert!(r.stats.peak_objects < 1 << n, "{}", k.name);
        }
        // a closed simplified complex holds only shifted empty smoothings
        assert_eq!(r.complex.total_loops(), 0);
        for id in r.complex.ids() {
            assert_eq!(r.complex.object(id).unwrap().smoothing.boundary_size(), 0);
        }
        assert!(r.complex.object_count() >= k.homology.total_rank());
    }
}

#[test]
fn greedy_and_given_orders_agree() {
    for k in prime_knots() {
        let given = order_crossings(k.diagram.crossings(), OrderStrategy::Given);
        let h = scan_homology(&Integers, &k.diagram, &given, &ScanOptions::default()).unwrap();
        assert_eq!(h, k.homology, "{}", k.name);
    }
}
