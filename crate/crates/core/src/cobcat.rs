//! The dotted cobordism category: crossingless smoothings of a disk with
//! boundary points, and linear combinations of dotted surfaces between them
//! modulo the local relations (sphere = 0, dotted sphere = 1, two dots = 0,
//! neck cutting).
//!
//! Every cobordism is stored in normal form relative to its source and
//! target: the boundary of the surface splits into cycles (see
//! [`cycles_of`]), and the surface is recorded as a partition of those
//! cycles into genus-0 components, each carrying at most one dot.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::planar::{GluingSpec, Point};
use crate::ring::Ring;

/// A crossingless matching of `0..n` plus a number of closed loops.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Smoothing {
    matching: SmallVec<[u8; 16]>,
    loops: u16,
}

impl Smoothing {
    pub fn new(matching: Vec<usize>, loops: usize) -> Result<Smoothing> {
        let n = matching.len();
        if n > 250 {
            return Err(Error::TooLarge(format!("{n} boundary points")));
        }
        for (i, &j) in matching.iter().enumerate() {
            if j >= n || j == i || matching[j] != i {
                return Err(Error::InvalidInput(format!("{matching:?} is not a perfect matching")));
            }
        }
        Ok(Smoothing { matching: matching.iter().map(|&j| j as u8).collect(), loops: loops as u16 })
    }

    pub fn empty() -> Smoothing {
        Smoothing { matching: SmallVec::new(), loops: 0 }
    }

    pub fn loops_only(loops: usize) -> Smoothing {
        Smoothing { matching: SmallVec::new(), loops: loops as u16 }
    }

    /// The two smoothings of a crossing whose legs are boundary points
    /// 0..4 in counterclockwise order.
    pub fn crossing_smoothings() -> (Smoothing, Smoothing) {
        (
            Smoothing { matching: smallvec![1, 0, 3, 2], loops: 0 },
            Smoothing { matching: smallvec![3, 2, 1, 0], loops: 0 },
        )
    }

    pub fn boundary_size(&self) -> usize {
        self.matching.len()
    }

    pub fn loops(&self) -> usize {
        self.loops as usize
    }

    pub fn partner(&self, p: usize) -> usize {
        self.matching[p] as usize
    }

    pub fn matching(&self) -> Vec<usize> {
        self.matching.iter().map(|&j| j as usize).collect()
    }

    /// The same smoothing with `k` loops removed.
    pub fn without_loops(&self, k: usize) -> Smoothing {
        Smoothing { matching: self.matching.clone(), loops: self.loops - k as u16 }
    }

    /// Whether the matching is planar for the cyclic order `0..n`.
    pub fn is_planar(&self) -> bool {
        let n = self.matching.len();
        (0..n).all(|a| {
            let b = self.partner(a);
            (0..n).all(|c| {
                let d = self.partner(c);
                let inside = |x: usize| (a < x && x < b) || (b < x && x < a);
                inside(c) == inside(d)
            })
        })
    }
}

impl fmt::Display for Smoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arcs: Vec<String> = (0..self.boundary_size())
            .filter(|&p| p < self.partner(p))
            .map(|p| format!("{}-{}", p, self.partner(p)))
            .collect();
        write!(f, "[{}]", arcs.join(" "))?;
        if self.loops > 0 {
            write!(f, "+{}o", self.loops)?;
        }
        Ok(())
    }
}

/// Boundary cycles of a surface from `s` to `t`.
///
/// Cycles through boundary points come first, numbered by their smallest
/// point; then one cycle per loop of `s`, then one per loop of `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycles {
    /// Cycle index of the vertical line over each boundary point.
    pub of_point: SmallVec<[u8; 24]>,
    /// Smallest point of each arc cycle.
    pub min_point: SmallVec<[u8; 16]>,
    pub source_loops: usize,
    pub target_loops: usize,
}

impl Cycles {
    pub fn arcs(&self) -> usize {
        self.min_point.len()
    }

    pub fn len(&self) -> usize {
        self.arcs() + self.source_loops + self.target_loops
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn source_loop(&self, k: usize) -> usize {
        self.arcs() + k
    }

    pub fn target_loop(&self, k: usize) -> usize {
        self.arcs() + self.source_loops + k
    }

    /// Points on each arc cycle, for display and tests.
    pub fn point_sets(&self) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); self.arcs()];
        for (p, &c) in self.of_point.iter().enumerate() {
            sets[c as usize].push(p);
        }
        sets
    }
}

pub fn cycles_of(s: &Smoothing, t: &Smoothing) -> Result<Cycles> {
    if s.boundary_size() != t.boundary_size() {
        return Err(Error::InvalidInput(format!("boundary mismatch: {s} vs {t}")));
    }
    Ok(cycles_unchecked(s, t))
}

fn cycles_unchecked(s: &Smoothing, t: &Smoothing) -> Cycles {
    let n = s.boundary_size();
    let mut of_point: SmallVec<[u8; 24]> = smallvec![u8::MAX; n];
    let mut min_point = SmallVec::new();
    for p in 0..n {
        if of_point[p] != u8::MAX {
            continue;
        }
        let k = min_point.len() as u8;
        min_point.push(p as u8);
        let mut q = p;
        loop {
            of_point[q] = k;
            let r = s.partner(q);
            of_point[r] = k;
            q = t.partner(r);
            if q == p {
                break;
            }
        }
    }
    Cycles { of_point, min_point, source_loops: s.loops(), target_loops: t.loops() }
}

/// A normal-form dotted cobordism.
///
/// Neck cutting rewrites every surface as a combination of disjoint disks,
/// one capping each boundary cycle, each with or without a dot; these form
/// a basis of the morphism space. A basis element is the number of cycles
/// and the set of dotted ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cobordism {
    cycles: u8,
    dots: u64,
}

/// Integer combination of basis cobordisms produced by a reduction.
pub type Terms = SmallVec<[(Cobordism, i64); 4]>;

impl Cobordism {
    /// Disks on `cycles` cycles, dotted where `dots` has a bit set.
    pub fn disks(cycles: usize, dots: u64) -> Cobordism {
        assert!(cycles <= 64, "too many boundary cycles");
        debug_assert!(cycles == 64 || dots >> cycles == 0);
        Cobordism { cycles: cycles as u8, dots }
    }

    pub fn cycles(&self) -> usize {
        self.cycles as usize
    }

    pub fn dots(&self) -> u64 {
        self.dots
    }

    pub fn has_dot(&self, cycle: usize) -> bool {
        self.dots >> cycle & 1 == 1
    }

    pub fn dot_count(&self) -> usize {
        self.dots.count_ones() as usize
    }

    /// Degree: Σ (2 − #cycles) over components − 2·#dots − b/2.
    pub fn degree(&self, boundary_size: usize) -> i32 {
        self.cycles as i32 - 2 * self.dot_count() as i32 - boundary_size as i32 / 2
    }

    /// Whether this is the identity of a loop-free smoothing.
    pub fn is_identity_shape(&self, cycles: &Cycles) -> bool {
        cycles.source_loops == 0
            && cycles.target_loops == 0
            && self.dots == 0
            && 2 * cycles.arcs() == cycles.of_point.len()
    }
}

impl fmt::Display for Cobordism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for c in 0..self.cycles() {
            f.write_str(if self.has_dot(c) { "*" } else { "o" })?;
        }
        write!(f, ">")
    }
}

/// A surface before reduction: pieces assembled by a union-find, tracking
/// Euler characteristic and dots per piece.
struct RawSurface {
    parent: SmallVec<[u8; 32]>,
    chi: SmallVec<[i32; 32]>,
    dots: SmallVec<[u32; 32]>,
}

impl RawSurface {
    fn new() -> Self {
        RawSurface { parent: SmallVec::new(), chi: SmallVec::new(), dots: SmallVec::new() }
    }

    fn push(&mut self, chi: i32, dots: u32) -> usize {
        let id = self.parent.len();
        assert!(id < 255, "surface too large");
        self.parent.push(id as u8);
        self.chi.push(chi);
        self.dots.push(dots);
        id
    }

    /// Adds the disks of a basis cobordism; returns the node offset (one
    /// node per cycle).
    fn add(&mut self, c: &Cobordism) -> usize {
        let offset = self.parent.len();
        for i in 0..c.cycles() {
            self.push(1, c.has_dot(i) as u32);
        }
        offset
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> usize {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[b] = a as u8;
            self.chi[a] += self.chi[b];
            self.dots[a] += self.dots[b];
        }
        a
    }

    /// Glues along an interval (χ = 1).
    fn glue_interval(&mut self, a: usize, b: usize) {
        let r = self.union(a, b);
        self.chi[r] -= 1;
    }

    /// Glues along a circle (χ = 0).
    fn glue_circle(&mut self, a: usize, b: usize) {
        self.union(a, b);
    }

    /// Expands into the disk basis. `nodes[c]` is a piece containing result
    /// cycle `c`. A component with genus g and d dots is 2^g times the same
    /// surface with d + g dots and no genus; it vanishes with two or more
    /// dots; a closed one survives only as a dotted sphere; otherwise neck
    /// cutting puts a dot on every cycle but one (no dot) or on all (one dot).
    fn reduce(mut self, nodes: &[usize]) -> Terms {
        let n = self.parent.len();
        let roots: SmallVec<[usize; 24]> = nodes.iter().map(|&x| self.find(x)).collect();
        let mut masks: SmallVec<[u64; 32]> = smallvec![0; n];
        for (c, &r) in roots.iter().enumerate() {
            masks[r] |= 1 << c;
        }
        let mut terms: SmallVec<[(u64, i64); 4]> = smallvec![(0, 1)];
        for x in 0..n {
            if self.find(x) != x {
                continue;
            }
            let mask = masks[x];
            let b = mask.count_ones() as i32;
            let twice_genus = 2 - self.chi[x] - b;
            debug_assert!(twice_genus >= 0 && twice_genus % 2 == 0, "bad surface");
            let genus = twice_genus / 2;
            let eff = self.dots[x] as i32 + genus;
            if eff >= 2 || (b == 0 && eff != 1) {
                return Terms::new();
            }
            let factor = 1i64 << genus;
            if b == 0 {
                terms.iter_mut().for_each(|t| t.1 *= factor);
            } else if eff == 1 {
                terms.iter_mut().for_each(|t| {
                    t.0 |= mask;
                    t.1 *= factor;
                });
            } else {
                let mut next = SmallVec::with_capacity(terms.len() * b as usize);
                for &(d, k) in &terms {
                    for c in 0..64 {
                        if mask >> c & 1 == 1 {
                            next.push((d | (mask & !(1 << c)), k));
                        }
                    }
                }
                terms = next;
            }
        }
        let cycles = nodes.len();
        terms.into_iter().map(|(d, k)| (Cobordism::disks(cycles, d), k)).collect()
    }
}

/// Reduces a surface given by components with genus and dot counts.
/// `labels[c]` is the component of cycle `c`; a component that no cycle
/// refers to is closed.
pub fn reduce_raw(labels: &[usize], genus: &[u32], dots: &[u32]) -> Terms {
    let mut raw = RawSurface::new();
    let mut count = vec![0i32; genus.len()];
    for &l in labels {
        count[l] += 1;
    }
    for (i, (&g, &d)) in genus.iter().zip(dots).enumerate() {
        raw.push(2 - 2 * g as i32 - count[i], d);
    }
    raw.reduce(labels)
}

/// Composes basis cobordisms `g ∘ f` for `f: s → t`, `g: t → u`.
pub fn compose_cobordisms(
    g: &Cobordism,
    f: &Cobordism,
    st: &Cycles,
    tu: &Cycles,
    su: &Cycles,
    t: &Smoothing,
) -> Terms {
    let mut raw = RawSurface::new();
    let fo = raw.add(f);
    let go = raw.add(g);
    for p in 0..t.boundary_size() {
        if p < t.partner(p) {
            raw.glue_interval(fo + st.of_point[p] as usize, go + tu.of_point[p] as usize);
        }
    }
    for k in 0..t.loops() {
        raw.glue_circle(fo + st.target_loop(k), go + tu.source_loop(k));
    }
    let mut nodes: SmallVec<[usize; 24]> = SmallVec::new();
    for &p in &su.min_point {
        nodes.push(fo + st.of_point[p as usize] as usize);
    }
    for k in 0..su.source_loops {
        nodes.push(fo + st.source_loop(k));
    }
    for k in 0..su.target_loops {
        nodes.push(go + tu.target_loop(k));
    }
    raw.reduce(&nodes)
}

/// Basis expansion of the surface from `s` to `t` whose components are
/// given by `labels` (one per cycle of (s, t)), with `dotted` components.
pub fn surface(s: &Smoothing, t: &Smoothing, labels: &[usize], dotted: &[usize]) -> Terms {
    let cyc = cycles_unchecked(s, t);
    assert_eq!(labels.len(), cyc.len(), "one label per cycle");
    let comps = labels.iter().max().map_or(0, |&m| m + 1);
    let mut dots = vec![0u32; comps];
    for &d in dotted {
        dots[d] += 1;
    }
    reduce_raw(labels, &vec![0; comps], &dots)
}

/// The identity: a disk over every arc, a cylinder over every loop.
pub fn identity_terms(s: &Smoothing) -> Terms {
    let cyc = cycles_unchecked(s, s);
    let mut labels: Vec<usize> = (0..cyc.arcs()).collect();
    labels.extend((0..s.loops()).map(|k| cyc.arcs() + k));
    labels.extend((0..s.loops()).map(|k| cyc.arcs() + k));
    surface(s, s, &labels, &[])
}

/// A smoothing obtained by horizontal composition, remembering where the
/// loops it created came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Glued {
    pub smoothing: Smoothing,
    /// Number of loops inherited from the left and right pieces.
    pub inherited: (usize, usize),
    /// A joined point on each newly closed loop.
    pub new_loops: Vec<Point>,
}

pub fn glue_smoothings(spec: &GluingSpec, a: &Smoothing, b: &Smoothing) -> Result<Glued> {
    if a.boundary_size() != spec.left || b.boundary_size() != spec.right {
        return Err(Error::InvalidInput(format!(
            "gluing {}+{} points, got {} and {}",
            spec.left,
            spec.right,
            a.boundary_size(),
            b.boundary_size()
        )));
    }
    Ok(glue_smoothings_unchecked(spec, a, b))
}

fn glue_smoothings_unchecked(spec: &GluingSpec, a: &Smoothing, b: &Smoothing) -> Glued {
    let idx = |p: Point| match p {
        Point::Left(i) => i,
        Point::Right(j) => spec.left + j,
    };
    let total = spec.left + spec.right;
    let pt = |i: usize| if i < spec.left { Point::Left(i) } else { Point::Right(i - spec.left) };
    let inner = |i: usize| {
        if i < spec.left {
            a.partner(i)
        } else {
            spec.left + b.partner(i - spec.left)
        }
    };
    let mut join = vec![usize::MAX; total];
    for &(p, q) in &spec.joins {
        join[idx(p)] = idx(q);
        join[idx(q)] = idx(p);
    }
    let mut outer_index = vec![usize::MAX; total];
    for (o, &p) in spec.outer.iter().enumerate() {
        outer_index[idx(p)] = o;
    }
    let mut visited = vec![false; total];
    let mut matching = vec![0usize; spec.outer.len()];
    for (o, &p) in spec.outer.iter().enumerate() {
        let mut x = idx(p);
        visited[x] = true;
        loop {
            x = inner(x);
            visited[x] = true;
            if outer_index[x] != usize::MAX {
                matching[o] = outer_index[x];
                break;
            }
            x = join[x];
            visited[x] = true;
        }
    }
    let mut new_loops = Vec::new();
    for start in 0..total {
        if visited[start] {
            continue;
        }
        new_loops.push(pt(start));
        let mut x = start;
        loop {
            visited[x] = true;
            x = inner(x);
            visited[x] = true;
            x = join[x];
            if x == start {
                break;
            }
        }
    }
    let loops = a.loops() + b.loops() + new_loops.len();
    Glued {
        smoothing: Smoothing {
            matching: matching.iter().map(|&j| j as u8).collect(),
            loops: loops as u16,
        },
        inherited: (a.loops(), b.loops()),
        new_loops,
    }
}

/// Data for gluing cobordisms `f: a → a'` and `g: b → b'` side by side.
pub struct HorizontalFrame<'a> {
    pub spec: &'a GluingSpec,
    pub left: &'a Cycles,
    pub right: &'a Cycles,
    pub source: &'a Glued,
    pub target: &'a Glued,
    /// Cycles of (source, target) of the glued smoothings.
    pub glued: &'a Cycles,
}

pub fn glue_cobordisms(fr: &HorizontalFrame<'_>, f: &Cobordism, g: &Cobordism) -> Terms {
    let mut raw = RawSurface::new();
    let fo = raw.add(f);
    let go = raw.add(g);
    let node = |p: Point| match p {
        Point::Left(i) => fo + fr.left.of_point[i] as usize,
        Point::Right(j) => go + fr.right.of_point[j] as usize,
    };
    for &(p, q) in &fr.spec.joins {
        raw.glue_interval(node(p), node(q));
    }
    let mut nodes: SmallVec<[usize; 24]> = SmallVec::new();
    for &o in &fr.glued.min_point {
        nodes.push(node(fr.spec.outer[o as usize]));
    }
    let loop_node = |glued: &Glued, k: usize, source: bool| -> usize {
        let (la, lb) = glued.inherited;
        if k < la {
            fo + if source { fr.left.source_loop(k) } else { fr.left.target_loop(k) }
        } else if k < la + lb {
            go + if source { fr.right.source_loop(k - la) } else { fr.right.target_loop(k - la) }
        } else {
            node(glued.new_loops[k - la - lb])
        }
    };
    for k in 0..fr.glued.source_loops {
        nodes.push(loop_node(fr.source, k, true));
    }
    for k in 0..fr.glued.target_loops {
        nodes.push(loop_node(fr.target, k, false));
    }
    raw.reduce(&nodes)
}

/// A formal linear combination of normal-form cobordisms between a fixed
/// pair of smoothings, sorted, with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinComb<E> {
    terms: Vec<(Cobordism, E)>,
}

impl<E> Default for LinComb<E> {
    fn default() -> Self {
        LinComb { terms: Vec::new() }
    }
}

impl<E: Clone + PartialEq> LinComb<E> {
    pub fn zero() -> Self {
        LinComb { terms: Vec::new() }
    }

    /// Integer combination, as produced by [`reduce_raw`] and friends.
    pub fn from_integers<R: Ring<Elem = E>>(ring: &R, terms: &[(Cobordism, i64)]) -> Self {
        LinComb::from_terms(ring, terms.iter().map(|&(c, k)| (c, ring.from_i64(k))))
    }

    pub fn single<R: Ring<Elem = E>>(ring: &R, c: Cobordism, coeff: E) -> Self {
        if ring.is_zero(&coeff) {
            LinComb::zero()
        } else {
            LinComb { terms: vec![(c, coeff)] }
        }
    }

    pub fn from_terms<R: Ring<Elem = E>>(ring: &R, terms: impl IntoIterator<Item = (Cobordism, E)>) -> Self {
        let mut acc: BTreeMap<Cobordism, E> = BTreeMap::new();
        for (c, e) in terms {
            add_into(ring, &mut acc, c, e);
        }
        LinComb::from_map(ring, acc)
    }

    fn from_map<R: Ring<Elem = E>>(ring: &R, acc: BTreeMap<Cobordism, E>) -> Self {
        LinComb { terms: acc.into_iter().filter(|(_, e)| !ring.is_zero(e)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Cobordism, E)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        LinComb {
            terms: self
                .terms
                .iter()
                .map(|(k, e)| (k.clone(), ring.mul(e, c)))
                .filter(|(_, e)| !ring.is_zero(e))
                .collect(),
        }
    }

    pub fn neg<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        LinComb { terms: self.terms.iter().map(|(k, e)| (k.clone(), ring.neg(e))).collect() }
    }

    /// `self + c·other`, merging sorted term lists.
    pub fn add_scaled<R: Ring<Elem = E>>(&self, ring: &R, other: &Self, c: &E) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let e = ring.mul(&other.terms[j].1, c);
                    if !ring.is_zero(&e) {
                        out.push((other.terms[j].0.clone(), e));
                    }
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = ring.add(&self.terms[i].1, &ring.mul(&other.terms[j].1, c));
                    if !ring.is_zero(&e) {
                        out.push((self.terms[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        LinComb { terms: out }
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        self.add_scaled(ring, other, &ring.one())
    }

    /// The common degree of the terms, or `None` if zero or inhomogeneous.
    pub fn degree(&self, boundary_size: usize) -> Option<i32> {
        let mut degs = self.terms.iter().map(|(c, _)| c.degree(boundary_size));
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    /// The scalar `c` when this is `c` times the identity of a loop-free
    /// smoothing.
    pub fn unit_coefficient<R: Ring<Elem = E>>(&self, ring: &R, cycles: &Cycles) -> Option<E> {
        match self.terms.as_slice() {
            [(c, e)] if c.is_identity_shape(cycles) && ring.is_unit(e) => Some(e.clone()),
            _ => None,
        }
    }
}

fn add_into<R: Ring>(ring: &R, acc: &mut BTreeMap<Cobordism, R::Elem>, c: Cobordism, e: R::Elem) {
    match acc.entry(c) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(e);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = ring.add(o.get(), &e);
            *o.get_mut() = s;
        }
    }
}

/// `g ∘ f` for `f: s → t`, `g: t → u`.
pub fn compose<R: Ring>(
    ring: &R,
    g: &LinComb<R::Elem>,
    f: &LinComb<R::Elem>,
    s: &Smoothing,
    t: &Smoothing,
    u: &Smoothing,
) -> LinComb<R::Elem> {
    if g.is_zero() || f.is_zero() {
        return LinComb::zero();
    }
    let st = cycles_unchecked(s, t);
    let tu = cycles_unchecked(t, u);
    let su = cycles_unchecked(s, u);
    compose_with(ring, g, f, &st, &tu, &su, t)
}

pub fn compose_with<R: Ring>(
    ring: &R,
    g: &LinComb<R::Elem>,
    f: &LinComb<R::Elem>,
    st: &Cycles,
    tu: &Cycles,
    su: &Cycles,
    t: &Smoothing,
) -> LinComb<R::Elem> {
    let mut acc = BTreeMap::new();
    for (cf, a) in &f.terms {
        for (cg, b) in &g.terms {
            let ab = ring.mul(a, b);
            for (c, k) in compose_cobordisms(cg, cf, st, tu, su, t) {
                add_into(ring, &mut acc, c, ring.mul(&ab, &ring.from_i64(k)));
            }
        }
    }
    LinComb::from_map(ring, acc)
}

/// A morphism together with its source and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism<E> {
    pub source: Smoothing,
    pub target: Smoothing,
    pub terms: LinComb<E>,
}

impl<E: Clone + PartialEq + fmt::Display> Morphism<E> {
    pub fn zero(source: Smoothing, target: Smoothing) -> Self {
        Morphism { source, target, terms: LinComb::zero() }
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, s: &Smoothing) -> Self {
        Morphism { source: s.clone(), target: s.clone(), terms: LinComb::from_integers(ring, &identity_terms(s)) }
    }

    /// A single connected genus-0 surface from `s` to `t` (for the two
    /// smoothings of a crossing, the saddle).
    pub fn connected<R: Ring<Elem = E>>(ring: &R, s: &Smoothing, t: &Smoothing, dotted: bool) -> Result<Self> {
        let cyc = cycles_of(s, t)?;
        let dotted: &[usize] = if dotted { &[0] } else { &[] };
        Ok(Morphism {
            source: s.clone(),
            target: t.clone(),
            terms: LinComb::from_integers(ring, &surface(s, t, &vec![0; cyc.len()], dotted)),
        })
    }

    /// Caps off the last loop of `s`, identity elsewhere.
    pub fn cap<R: Ring<Elem = E>>(ring: &R, s: &Smoothing, dotted: bool) -> Result<Self> {
        let t = loop_removed(s)?;
        Ok(Morphism { terms: LinComb::from_integers(ring, &cap_terms(s, dotted)), source: s.clone(), target: t })
    }

    /// A cup creating the last loop of `t`, identity elsewhere.
    pub fn cup<R: Ring<Elem = E>>(ring: &R, t: &Smoothing, dotted: bool) -> Result<Self> {
        let s = loop_removed(t)?;
        Ok(Morphism { terms: LinComb::from_integers(ring, &cup_terms(t, dotted)), source: s, target: t.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn degree(&self) -> Option<i32> {
        self.terms.degree(self.source.boundary_size())
    }

    pub fn compose<R: Ring<Elem = E>>(&self, ring: &R, f: &Self) -> Result<Self> {
        if f.target != self.source {
            return Err(Error::InvalidInput(format!("cannot compose: {} is not {}", f.target, self.source)));
        }
        Ok(Morphism {
            source: f.source.clone(),
            target: self.target.clone(),
            terms: compose(ring, &self.terms, &f.terms, &f.source, &self.source, &self.target),
        })
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Result<Self> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::InvalidInput("adding morphisms with different ends".into()));
        }
        Ok(Morphism { terms: self.terms.add(ring, &other.terms), ..self.clone() })
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        Morphism { terms: self.terms.scale(ring, c), ..self.clone() }
    }

    /// The inverse, when this is a unit times the identity of a loop-free
    /// smoothing.
    pub fn unit_inverse<R: Ring<Elem = E>>(&self, ring: &R) -> Option<Self> {
        if self.source != self.target {
            return None;
        }
        let cyc = cycles_unchecked(&self.source, &self.target);
        let c = self.terms.unit_coefficient(ring, &cyc)?;
        let inv = ring.inverse(&c)?;
        Some(Morphism::identity(ring, &self.source).scale(ring, &inv))
    }

    /// Horizontal composition of `a: s → s'` and `b: t → t'`.
    pub fn glue<R: Ring<Elem = E>>(ring: &R, spec: &GluingSpec, a: &Self, b: &Self) -> Result<Self> {
        let source = glue_smoothings(spec, &a.source, &b.source)?;
        let target = glue_smoothings(spec, &a.target, &b.target)?;
        let left = cycles_unchecked(&a.source, &a.target);
        let right = cycles_unchecked(&b.source, &b.target);
        let glued = cycles_unchecked(&source.smoothing, &target.smoothing);
        let frame = HorizontalFrame { spec, left: &left, right: &right, source: &source, target: &target, glued: &glued };
        let mut terms = Vec::new();
        for (f, x) in a.terms.terms() {
            for (g, y) in b.terms.terms() {
                let xy = ring.mul(x, y);
                for (c, k) in glue_cobordisms(&frame, f, g) {
                    terms.push((c, ring.mul(&xy, &ring.from_i64(k))));
                }
            }
        }
        Ok(Morphism { source: source.smoothing, target: target.smoothing, terms: LinComb::from_terms(ring, terms) })
    }
}

impl<E: fmt::Display> fmt::Display for Morphism<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}:", self.source, self.target)?;
        if self.terms.terms.is_empty() {
            return write!(f, " 0");
        }
        for (c, e) in &self.terms.terms {
            write!(f, " {e}{c}")?;
        }
        Ok(())
    }
}

fn loop_removed(s: &Smoothing) -> Result<Smoothing> {
    if s.loops() == 0 {
        return Err(Error::InvalidInput(format!("{s} has no loop")));
    }
    Ok(s.without_loops(1))
}

/// From `s` (with loops) to `s` minus its last loop: a cap on that loop,
/// the identity elsewhere.
pub fn cap_terms(s: &Smoothing, dotted: bool) -> Terms {
    let t = s.without_loops(1);
    let a = cycles_unchecked(s, &t).arcs();
    let k = t.loops();
    let mut labels: Vec<usize> = (0..a).collect();
    labels.extend((0..k).map(|i| a + i));
    labels.push(a + k);
    labels.extend((0..k).map(|i| a + i));
    let dots: &[usize] = if dotted { &[a + k] } else { &[] };
    surface(s, &t, &labels, dots)
}

/// From `t` minus its last loop to `t`: a cup creating that loop.
pub fn cup_terms(t: &Smoothing, dotted: bool) -> Terms {
    let s = t.without_loops(1);
    let a = cycles_unchecked(&s, t).arcs();
    let k = s.loops();
    let mut labels: Vec<usize> = (0..a).collect();
    labels.extend((0..k).map(|i| a + i));
    labels.extend((0..k).map(|i| a + i));
    labels.push(a + k);
    let dots: &[usize] = if dotted { &[a + k] } else { &[] };
    surface(&s, t, &labels, dots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Integers;
    use dashu_int::IBig;

    fn sm(m: &[usize], loops: usize) -> Smoothing {
        Smoothing::new(m.to_vec(), loops).unwrap()
    }

    #[test]
    fn cycles_examples() {
        let s = sm(&[1, 0, 3, 2], 0);
        let t = sm(&[3, 2, 1, 0], 0);
        assert_eq!(cycles_of(&s, &s).unwrap().point_sets(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(cycles_of(&s, &t).unwrap().point_sets(), vec![vec![0, 1, 2, 3]]);
        let c = cycles_of(&Smoothing::loops_only(1), &Smoothing::loops_only(1)).unwrap();
        assert_eq!((c.arcs(), c.len()), (0, 2));
        assert!(cycles_of(&s, &Smoothing::empty()).is_err());
    }

    fn terms(v: &[(usize, u64, i64)]) -> Terms {
        v.iter().map(|&(n, d, k)| (Cobordism::disks(n, d), k)).collect()
    }

    #[test]
    fn reduction_rules() {
        // torus, dotted sphere, sphere
        assert_eq!(reduce_raw(&[], &[1], &[0]), terms(&[(0, 0, 2)]));
        assert_eq!(reduce_raw(&[], &[0], &[1]), terms(&[(0, 0, 1)]));
        assert!(reduce_raw(&[], &[0], &[0]).is_empty());
        // two dots on a disk
        assert!(reduce_raw(&[0], &[0], &[2]).is_empty());
        // a genus-one disk is twice a dotted disk
        assert_eq!(reduce_raw(&[0], &[1], &[0]), terms(&[(1, 1, 2)]));
        assert!(reduce_raw(&[0], &[1], &[1]).is_empty());
        assert!(reduce_raw(&[0, 0], &[2], &[0]).is_empty());
    }

    #[test]
    fn neck_cutting() {
        // a plain cylinder is the sum of its two one-dotted cuts
        assert_eq!(reduce_raw(&[0, 0], &[0], &[0]), terms(&[(2, 0b10, 1), (2, 0b01, 1)]));
        // a dotted cylinder is dotted on both ends
        assert_eq!(reduce_raw(&[0, 0], &[0], &[1]), terms(&[(2, 0b11, 1)]));
        // pants: one plain end, two dotted
        let p = reduce_raw(&[0, 0, 0], &[0], &[0]);
        assert_eq!(p.len(), 3);
        assert!(p.iter().all(|(c, k)| c.dot_count() == 2 && *k == 1));
    }

    #[test]
    fn reduce_is_idempotent() {
        let r = reduce_raw(&[0, 1, 2], &[0, 0, 0], &[0, 1, 0]);
        assert_eq!(r, terms(&[(3, 0b010, 1)]));
    }

    #[test]
    fn cap_cup_relations() {
        let z = Integers;
        let o = Smoothing::loops_only(1);
        let cup: Morphism<IBig> = Morphism::cup(&z, &o, false).unwrap();
        let cap = Morphism::cap(&z, &o, false).unwrap();
        let dcap = Morphism::cap(&z, &o, true).unwrap();
        assert!(cap.compose(&z, &cup).unwrap().is_zero());
        assert_eq!(dcap.compose(&z, &cup).unwrap(), Morphism::identity(&z, &Smoothing::empty()));
        assert_eq!(cup.degree(), Some(1));
        assert_eq!(cap.degree(), Some(1));
        assert_eq!(dcap.degree(), Some(-1));
    }

    #[test]
    fn delooping_maps_compose_to_identity() {
        let z = Integers;
        for o in [Smoothing::loops_only(1), sm(&[1, 0], 2)] {
            let cap: Morphism<IBig> = Morphism::cap(&z, &o, false).unwrap();
            let dcap = Morphism::cap(&z, &o, true).unwrap();
            let cup = Morphism::cup(&z, &o, false).unwrap();
            let dcup = Morphism::cup(&z, &o, true).unwrap();
            let sum = cup.compose(&z, &dcap).unwrap().add(&z, &dcup.compose(&z, &cap).unwrap()).unwrap();
            assert_eq!(sum, Morphism::identity(&z, &o));
            let t = o.without_loops(1);
            let id = Morphism::identity(&z, &t);
            assert_eq!(dcap.compose(&z, &cup).unwrap(), id);
            assert_eq!(cap.compose(&z, &dcup).unwrap(), id);
            assert!(dcap.compose(&z, &dcup).unwrap().is_zero());
            assert!(cap.compose(&z, &cup).unwrap().is_zero());
        }
    }

    #[test]
    fn degrees() {
        let z = Integers;
        let (s0, s1) = Smoothing::crossing_smoothings();
        let saddle: Morphism<IBig> = Morphism::connected(&z, &s0, &s1, false).unwrap();
        assert_eq!(saddle.degree(), Some(-1));
        assert_eq!(Morphism::identity(&z, &s0).degree(), Some(0));
        let back = Morphism::connected(&z, &s1, &s0, false).unwrap();
        let round = back.compose(&z, &saddle).unwrap();
        assert_eq!(round.degree(), Some(-2));
    }

    #[test]
    fn unit_detection() {
        let z = Integers;
        let (s0, _) = Smoothing::crossing_smoothings();
        let id: Morphism<IBig> = Morphism::identity(&z, &s0);
        assert_eq!(id.unit_inverse(&z), Some(id.clone()));
        let neg = id.scale(&z, &z.from_i64(-1));
        assert_eq!(neg.unit_inverse(&z), Some(neg.clone()));
        assert_eq!(id.scale(&z, &z.from_i64(2)).unit_inverse(&z), None);
        let o = Smoothing::loops_only(1);
        assert_eq!(Morphism::<IBig>::identity(&z, &o).unit_inverse(&z), None);
    }

    #[test]
    fn smoothing_glue() {
        let arc = sm(&[1, 0], 0);
        let spec = GluingSpec {
            left: 2,
            right: 2,
            joins: vec![(Point::Left(1), Point::Right(0))],
            outer: vec![Point::Left(0), Point::Right(1)],
        };
        let g = glue_smoothings(&spec, &arc, &arc).unwrap();
        assert_eq!(g.smoothing, arc);
        let spec = GluingSpec {
            left: 2,
            right: 2,
            joins: vec![(Point::Left(0), Point::Right(1)), (Point::Left(1), Point::Right(0))],
            outer: vec![],
        };
        let g = glue_smoothings(&spec, &arc, &arc).unwrap();
        assert_eq!(g.smoothing, Smoothing::loops_only(1));
        assert_eq!(g.new_loops, vec![Point::Left(0)]);
    }

    #[test]
    fn identity_glued_with_saddle() {
        let z = Integers;
        let (s0, s1) = Smoothing::crossing_smoothings();
        let saddle: Morphism<IBig> = Morphism::connected(&z, &s0, &s1, false).unwrap();
        let arc = sm(&[1, 0], 0);
        let id = Morphism::identity(&z, &arc);
        let spec = GluingSpec {
            left: 2,
            right: 4,
            joins: vec![(Point::Left(1), Point::Right(0))],
            outer: vec![Point::Left(0), Point::Right(1), Point::Right(2), Point::Right(3)],
        };
        let m = Morphism::glue(&z, &spec, &id, &saddle).unwrap();
        assert_eq!(m.degree(), Some(-1));
        let close = GluingSpec {
            left: 4,
            right: 0,
            joins: vec![(Point::Left(0), Point::Left(1))],
            outer: vec![Point::Left(2), Point::Left(3)],
        };
        let empty = Morphism::identity(&z, &Smoothing::empty());
        let k = Morphism::glue(&z, &close, &saddle, &empty).unwrap();
        assert_eq!(k.degree(), Some(-1));
    }

    #[test]
    fn stable_text() {
        let z = Integers;
        let (s0, s1) = Smoothing::crossing_smoothings();
        let saddle: Morphism<IBig> = Morphism::connected(&z, &s0, &s1, false).unwrap();
        assert_eq!(saddle.to_string(), "[0-1 2-3] -> [0-3 1-2]: 1<o>");
        let o = Smoothing::loops_only(2);
        let dcap: Morphism<IBig> = Morphism::cap(&z, &o, true).unwrap();
        assert_eq!(dcap.to_string(), "[]+2o -> []+1o: 1<**o> 1<o**>");
    }
}
