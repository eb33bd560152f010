//! Scanning: build the complex of a diagram by adding one crossing at a
//! time to a running tangle complex, simplifying after every step.

use std::time::{Duration, Instant};

use log::debug;

use crate::cobcat::{LinComb, Morphism, Smoothing};
use crate::complex::{tensor, FormalComplex, Object, SimplifyStats, Step};
use crate::error::{Error, Result};
use crate::homology::laurent::Laurent;
use crate::homology::{homology, to_graded, HomologyTable};
use crate::planar::{glue_unchecked, Crossing, Diagram, EdgeId, GluingSpec, ScanOrder, Sign};
use crate::ring::Ring;

/// The complex of a single crossing with legs 0..4 counterclockwise from
/// the incoming under-strand: 0-smoothing → saddle → 1-smoothing, shifted
/// so that the oriented smoothing sits at height 0.
pub fn crossing_complex<R: Ring>(ring: &R, sign: Sign) -> FormalComplex<R> {
    let (s0, s1) = Smoothing::crossing_smoothings();
    let (heights, shifts) = match sign {
        Sign::Positive => ((0, 1), (1, 2)),
        Sign::Negative => ((-1, 0), (-2, -1)),
    };
    let mut c = FormalComplex::new(ring.clone(), 4);
    let a = c.add_object(heights.0, Object { smoothing: s0.clone(), qshift: shifts.0 }).expect("4 points");
    let b = c.add_object(heights.1, Object { smoothing: s1.clone(), qshift: shifts.1 }).expect("4 points");
    let saddle = Morphism::connected(ring, &s0, &s1, false).expect("same boundary");
    c.set_entry(a, b, saddle.terms).expect("adjacent heights");
    c
}

#[derive(Clone, Debug, Default)]
pub struct ScanOptions {
    /// Fail when a gluing step is not realizable in the plane with the
    /// tracked boundary order.
    pub require_planar: bool,
    /// Validate d∘d = 0, degrees and the Euler characteristic after every
    /// delooping and elimination (slow).
    pub check_every_step: bool,
    /// Give up with [`Error::Timeout`] once this much time has passed
    /// since the scan started; checked between crossings.
    pub time_limit: Option<Duration>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanStats {
    /// Largest complex formed, counted right after a tensor product.
    pub peak_objects: usize,
    /// Object count after simplifying each step.
    pub object_profile: Vec<usize>,
    pub max_width: usize,
    pub deloops: usize,
    pub eliminations: usize,
}

impl ScanStats {
    fn absorb(&mut self, s: SimplifyStats) {
        self.deloops += s.deloops;
        self.eliminations += s.eliminations;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Progress {
    pub crossings_done: usize,
    pub crossings_total: usize,
    pub objects: usize,
}

/// A tangle complex with the edge labels of its boundary points.
#[derive(Clone, Debug)]
pub struct TangleComplex<R: Ring> {
    pub complex: FormalComplex<R>,
    pub boundary: Vec<EdgeId>,
}

impl<R: Ring> TangleComplex<R> {
    pub fn empty(ring: &R) -> Self {
        TangleComplex { complex: FormalComplex::single(ring.clone(), 0, Smoothing::empty(), 0), boundary: Vec::new() }
    }
}

/// Simplifies in place, optionally checking invariants after each step.
pub fn simplify_checked<R: Ring>(c: &mut FormalComplex<R>, check: bool) -> Result<SimplifyStats> {
    if !check {
        return c.simplify_with(&mut |_, _| Ok(()));
    }
    c.validate()?;
    let chi = c.euler_characteristic();
    c.simplify_with(&mut |step: Step, now: &FormalComplex<R>| {
        if now.euler_characteristic() != chi {
            return Err(Error::Invariant(format!("Euler characteristic changed by {step:?}")));
        }
        now.validate().map_err(|e| Error::Invariant(format!("after {step:?}: {e}")))
    })
}

/// Glues `b` onto `a` along their common edges and simplifies.
pub fn glue_tangles<R: Ring>(
    a: &TangleComplex<R>,
    b: &TangleComplex<R>,
    opts: &ScanOptions,
    stats: &mut ScanStats,
) -> Result<TangleComplex<R>> {
    let g = glue_unchecked(&a.boundary, &b.boundary);
    if opts.require_planar && !g.planar {
        return Err(Error::NonPlanar(format!("cannot glue {:?} onto {:?} in the plane", b.boundary, a.boundary)));
    }
    let mut complex = tensor(&g.spec, &a.complex, &b.complex)?;
    stats.peak_objects = stats.peak_objects.max(complex.object_count());
    stats.max_width = stats.max_width.max(g.boundary.len());
    stats.absorb(simplify_checked(&mut complex, opts.check_every_step)?);
    stats.object_profile.push(complex.object_count());
    Ok(TangleComplex { complex, boundary: g.boundary })
}

pub fn crossing_tangle<R: Ring>(ring: &R, c: &Crossing) -> TangleComplex<R> {
    TangleComplex { complex: crossing_complex(ring, c.sign), boundary: c.edges.to_vec() }
}

/// Scans the given crossings in `order`. The result's boundary consists of
/// the edges that occur only once among them.
pub fn scan_tangle<R: Ring>(
    ring: &R,
    crossings: &[Crossing],
    order: &[usize],
    opts: &ScanOptions,
    progress: &mut dyn FnMut(Progress, &TangleComplex<R>),
) -> Result<(TangleComplex<R>, ScanStats)> {
    let mut stats = ScanStats::default();
    let mut current = TangleComplex::empty(ring);
    let start = Instant::now();
    for (done, &i) in order.iter().enumerate() {
        if let Some(limit) = opts.time_limit {
            if start.elapsed() > limit {
                return Err(Error::Timeout(limit));
            }
        }
        let c = crossings.get(i).ok_or_else(|| Error::InvalidInput(format!("no crossing {i}")))?;
        current = glue_tangles(&current, &crossing_tangle(ring, c), opts, &mut stats)?;
        debug!("crossing {} of {}: {} objects", done + 1, order.len(), current.complex.object_count());
        let p = Progress {
            crossings_done: done + 1,
            crossings_total: order.len(),
            objects: current.complex.object_count(),
        };
        progress(p, &current);
    }
    Ok((current, stats))
}

/// Adds `k` crossingless circles and simplifies.
fn add_free_loops<R: Ring>(c: FormalComplex<R>, k: usize, opts: &ScanOptions) -> Result<FormalComplex<R>> {
    if k == 0 {
        return Ok(c);
    }
    let loops = FormalComplex::single(c.ring().clone(), 0, Smoothing::loops_only(k), 0);
    let mut out = tensor(&GluingSpec::disjoint(c.boundary_size(), 0), &c, &loops)?;
    simplify_checked(&mut out, opts.check_every_step)?;
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ScanResult<R: Ring> {
    /// Simplified complex of the closed diagram: shifted empty smoothings.
    pub complex: FormalComplex<R>,
    pub stats: ScanStats,
}

/// The simplified Khovanov complex of a closed diagram.
pub fn scan<R: Ring>(ring: &R, d: &Diagram, order: &ScanOrder, opts: &ScanOptions) -> Result<ScanResult<R>> {
    scan_with_progress(ring, d, order, opts, &mut |_, _| {})
}

pub fn scan_with_progress<R: Ring>(
    ring: &R,
    d: &Diagram,
    order: &ScanOrder,
    opts: &ScanOptions,
    progress: &mut dyn FnMut(Progress, &TangleComplex<R>),
) -> Result<ScanResult<R>> {
    if order.permutation.len() != d.crossing_count() {
        return Err(Error::InvalidInput("scan order does not match the diagram".into()));
    }
    let (t, stats) = scan_tangle(ring, d.crossings(), &order.permutation, opts, progress)?;
    if !t.boundary.is_empty() {
        return Err(Error::InvalidInput(format!("diagram has open edges {:?}", t.boundary)));
    }
    let complex = add_free_loops(t.complex, d.free_loops(), opts)?;
    Ok(ScanResult { complex, stats })
}

/// Homology of a diagram by scanning in the given crossing order.
pub fn scan_homology<R: Ring>(ring: &R, d: &Diagram, order: &ScanOrder, opts: &ScanOptions) -> Result<HomologyTable> {
    let r = scan(ring, d, order, opts)?;
    Ok(homology(&to_graded(&r.complex)?))
}

/// Sizes seen while computing by halves.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplitStats {
    pub left_objects: usize,
    pub right_objects: usize,
    /// Objects of the tensor product of the two simplified halves.
    pub tensor_objects: usize,
    pub final_objects: usize,
}

/// Simplifies the tangles formed by `left` and by the remaining crossings
/// separately, then glues them.
pub fn divide_and_conquer<R: Ring>(
    ring: &R,
    d: &Diagram,
    left: &[usize],
    opts: &ScanOptions,
) -> Result<(FormalComplex<R>, SplitStats)> {
    let n = d.crossing_count();
    let mut in_left = vec![false; n];
    for &i in left {
        if i >= n || std::mem::replace(&mut in_left[i], true) {
            return Err(Error::InvalidInput(format!("bad cut index {i}")));
        }
    }
    let right: Vec<usize> = (0..n).filter(|&i| !in_left[i]).collect();
    let (a, _) = scan_tangle(ring, d.crossings(), left, opts, &mut |_, _| {})?;
    let (b, _) = scan_tangle(ring, d.crossings(), &right, opts, &mut |_, _| {})?;
    let mut stats = ScanStats::default();
    let glued = glue_tangles(&a, &b, opts, &mut stats)?;
    let split = SplitStats {
        left_objects: a.complex.object_count(),
        right_objects: b.complex.object_count(),
        tensor_objects: stats.peak_objects,
        final_objects: glued.complex.object_count(),
    };
    Ok((add_free_loops(glued.complex, d.free_loops(), opts)?, split))
}

/// Graded Euler characteristic of a closed complex.
pub fn closed_euler<R: Ring>(c: &FormalComplex<R>) -> Laurent {
    c.euler_characteristic().remove(&Vec::new()).unwrap_or_default()
}

/// The scalar of an entry between two empty smoothings.
pub fn scalar<R: Ring>(ring: &R, m: &LinComb<R::Elem>) -> R::Elem {
    match m.terms() {
        [] => ring.zero(),
        [(_, e)] => e.clone(),
        _ => unreachable!("morphisms between empty smoothings are scalars"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::{order_crossings, parse_pd, OrderStrategy};
    use crate::ring::{Integers, Rationals};

    #[test]
    fn crossing_complexes_are_valid() {
        for sign in [Sign::Positive, Sign::Negative] {
            let c = crossing_complex(&Integers, sign);
            c.validate().unwrap();
            assert_eq!(c.object_count(), 2);
        }
    }

    #[test]
    fn unknot() {
        let d = parse_pd("PD[Loop[1]]").unwrap();
        let r = scan(&Integers, &d, &order_crossings(d.crossings(), OrderStrategy::Given), &ScanOptions::default())
            .unwrap();
        let objs = r.complex.object_multiset();
        assert_eq!(objs.len(), 2);
        assert_eq!(objs[0], (0, Object { smoothing: Smoothing::empty(), qshift: -1 }));
        assert_eq!(objs[1], (0, Object { smoothing: Smoothing::empty(), qshift: 1 }));
    }

    #[test]
    fn kinks_give_the_unknot() {
        for pd in ["PD[X[1,1,2,2]]", "PD[X[1,2,2,1]]"] {
            let d = parse_pd(pd).unwrap();
            let opts = ScanOptions { check_every_step: true, ..Default::default() };
            let r = scan(&Integers, &d, &order_crossings(d.crossings(), OrderStrategy::Given), &opts).unwrap();
            let q: Vec<(i32, i32)> = r.complex.object_multiset().into_iter().map(|(h, o)| (h, o.qshift)).collect();
            assert_eq!(q, vec![(0, -1), (0, 1)], "{pd}");
        }
    }

    #[test]
    fn figure_eight_over_q() {
        let d = parse_pd("PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]").unwrap();
        let opts = ScanOptions { check_every_step: true, ..Default::default() };
        let r = scan(&Rationals, &d, &order_crossings(d.crossings(), OrderStrategy::Greedy), &opts).unwrap();
        let c = &r.complex;
        assert_eq!(c.entry_count(), 0);
        let mut q: Vec<(i32, i32)> = c.object_multiset().into_iter().map(|(h, o)| (h, o.qshift)).collect();
        q.sort();
        assert_eq!(q, vec![(-2, -5), (-1, -1), (0, -1), (0, 1), (1, 1), (2, 5)]);
    }
}
