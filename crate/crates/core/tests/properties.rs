use dashu_int::IBig;
use proptest::prelude::*;

use khovanov::cobcat::{cycles_of, Cobordism, LinComb, Morphism, Smoothing};
use khovanov::complex::tensor;
use khovanov::homology::snf::{determinant, mat_mul, smith_normal_form, DenseMatrix};
use khovanov::planar::glue_unchecked;
use khovanov::ring::Integers;
use khovanov::scan::{scan_tangle, simplify_checked, ScanOptions};
use khovanov::verify::{braid_tangle, planar_matchings};

fn smoothing(b: usize) -> impl Strategy<Value = Smoothing> {
    let matchings = planar_matchings(b);
    (0..matchings.len(), 0..3usize).prop_map(move |(i, loops)| Smoothing::new(matchings[i].clone(), loops).unwrap())
}

/// A random integer combination of basis cobordisms from `s` to `t`.
fn morphism(s: Smoothing, t: Smoothing) -> impl Strategy<Value = Morphism<IBig>> {
    let cycles = cycles_of(&s, &t).unwrap().len();
    let mask = if cycles >= 64 { u64::MAX } else { (1u64 << cycles) - 1 };
    prop::collection::vec((any::<u64>(), -3i64..=3), 0..4).prop_map(move |terms| {
        let terms: Vec<(Cobordism, i64)> = terms.into_iter().map(|(d, c)| (Cobordism::disks(cycles, d & mask), c)).collect();
        Morphism { source: s.clone(), target: t.clone(), terms: LinComb::from_integers(&Integers, &terms) }
    })
}

/// `len` composable morphisms between smoothings with `b` boundary points.
fn chain(b: usize, len: usize) -> impl Strategy<Value = Vec<Morphism<IBig>>> {
    prop::collection::vec(smoothing(b), len + 1)
        .prop_flat_map(move |objs| (0..len).map(|i| morphism(objs[i].clone(), objs[i + 1].clone())).collect::<Vec<_>>())
}

fn any_chain(len: usize) -> impl Strategy<Value = Vec<Morphism<IBig>>> {
    (0usize..4).prop_flat_map(move |k| chain(2 * k, len))
}

fn letters() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2]), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(v in any_chain(3)) {
        let (f, g, h) = (&v[0], &v[1], &v[2]);
        let left = h.compose(&Integers, &g.compose(&Integers, f).unwrap()).unwrap();
        let right = h.compose(&Integers, g).unwrap().compose(&Integers, f).unwrap();
        prop_assert_eq!(left.terms, right.terms);
    }

    #[test]
    fn identity_is_neutral(v in any_chain(1)) {
        let f = &v[0];
        let left = Morphism::identity(&Integers, &f.target).compose(&Integers, f).unwrap();
        let right = f.compose(&Integers, &Morphism::identity(&Integers, &f.source)).unwrap();
        prop_assert_eq!(&left.terms, &f.terms);
        prop_assert_eq!(&right.terms, &f.terms);
    }

    #[test]
    fn composition_adds_degrees(v in any_chain(2)) {
        let (f, g) = (&v[0], &v[1]);
        let gf = g.compose(&Integers, f).unwrap();
        if let (Some(df), Some(dg), Some(d)) = (f.degree(), g.degree(), gf.degree()) {
            prop_assert_eq!(d, df + dg);
        }
    }

    #[test]
    fn interchange_law(a in chain(4, 2), b in chain(4, 2), shared in 0u32..=3) {
        // the right boundary shares its first `shared` edges with the left one
        let left: Vec<u32> = vec![1, 2, 3, 4];
        let right: Vec<u32> = (0..4).map(|i| if i < shared { 4 - i } else { 10 + i }).collect();
        let spec = glue_unchecked(&left, &right).spec;
        let glue = |x: &Morphism<IBig>, y: &Morphism<IBig>| Morphism::glue(&Integers, &spec, x, y).unwrap();
        let outer = glue(&a[1], &b[1]).compose(&Integers, &glue(&a[0], &b[0])).unwrap();
        let inner = glue(&a[1].compose(&Integers, &a[0]).unwrap(), &b[1].compose(&Integers, &b[0]).unwrap());
        prop_assert_eq!(outer.terms, inner.terms);
    }

    #[test]
    fn smith_form_remultiplies(rows in 1usize..7, cols in 1usize..7, seed in prop::collection::vec(-12i64..=12, 36)) {
        let a: DenseMatrix = (0..rows).map(|i| (0..cols).map(|j| IBig::from(seed[i * 6 + j])).collect()).collect();
        let f = smith_normal_form(&a);
        prop_assert_eq!(mat_mul(&mat_mul(&f.u, &a), &f.v), f.d.clone());
        let one = IBig::ONE;
        prop_assert!(determinant(&f.u) == one || determinant(&f.u) == -&one);
        prop_assert!(determinant(&f.v) == one || determinant(&f.v) == -&one);
        for i in 0..rows {
            for j in 0..cols {
                if i != j {
                    prop_assert_eq!(&f.d[i][j], &IBig::ZERO);
                }
            }
        }
        prop_assert_eq!(f.divisors.len(), f.rank);
        for w in f.divisors.windows(2) {
            prop_assert_eq!(&w[1] % &w[0], IBig::ZERO);
        }
        prop_assert!(f.divisors.iter().all(|d| *d > IBig::ZERO));
    }

    /// Two braid tangles sharing their middle edges: the raw tensor
    /// product and its simplification are both graded complexes with the
    /// same Euler characteristic.
    #[test]
    fn random_tensors_are_complexes(w1 in letters(), w2 in letters()) {
        let opts = ScanOptions { check_every_step: true, ..Default::default() };
        let (lower, top) = braid_tangle(&[1, 2, 3], &w1, 10).unwrap();
        let (upper, _) = braid_tangle(&top, &w2, 100).unwrap();
        let scan_all = |cs: &[khovanov::planar::Crossing]| {
            scan_tangle(&Integers, cs, &(0..cs.len()).collect::<Vec<_>>(), &opts, &mut |_, _| {}).unwrap().0
        };
        let (a, b) = (scan_all(&lower), scan_all(&upper));
        let g = glue_unchecked(&a.boundary, &b.boundary);
        let mut c = tensor(&g.spec, &a.complex, &b.complex).unwrap();
        c.validate().unwrap();
        let chi = c.euler_characteristic();
        simplify_checked(&mut c, true).unwrap();
        c.validate().unwrap();
        prop_assert_eq!(c.euler_characteristic(), chi);
        prop_assert_eq!(c.total_loops(), 0);
    }
}
