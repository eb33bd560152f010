//! Formal complexes over the cobordism category: shifted smoothings at
//! integer heights with morphism entries between adjacent heights, plus the
//! two simplifications (delooping and Gaussian elimination) and the planar
//! tensor product.
//!
//! Objects live in a slab addressed by [`NodeId`]; an entry is addressed by
//! its source and target node. Ids are stable under the operations that do
//! not touch them, and fresh ids are allocated deterministically.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde_json::json;

use crate::cobcat::{
    self, cycles_of, glue_cobordisms, glue_smoothings, Cycles, Glued, HorizontalFrame, LinComb,
    Smoothing,
};
use crate::error::{Error, Result};
use crate::homology::laurent::Laurent;
use crate::planar::GluingSpec;
use crate::ring::Ring;

pub type NodeId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Object {
    pub smoothing: Smoothing,
    pub qshift: i32,
}

#[derive(Clone, Debug)]
struct Node<E> {
    height: i32,
    object: Object,
    out: BTreeMap<NodeId, LinComb<E>>,
    inc: BTreeSet<NodeId>,
}

/// A single simplification step, reported to [`FormalComplex::simplify_with`]
/// hooks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Deloop { node: NodeId },
    Eliminate { from: NodeId, to: NodeId },
}

#[derive(Clone, Debug)]
pub struct FormalComplex<R: Ring> {
    ring: R,
    boundary_size: usize,
    nodes: Vec<Option<Node<R::Elem>>>,
    live: usize,
}

impl<R: Ring> FormalComplex<R> {
    pub fn new(ring: R, boundary_size: usize) -> Self {
        FormalComplex { ring, boundary_size, nodes: Vec::new(), live: 0 }
    }

    /// The complex with one object and no differential.
    pub fn single(ring: R, height: i32, smoothing: Smoothing, qshift: i32) -> Self {
        let mut c = FormalComplex::new(ring, smoothing.boundary_size());
        c.add_object(height, Object { smoothing, qshift }).expect("boundary matches");
        c
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn boundary_size(&self) -> usize {
        self.boundary_size
    }

    pub fn add_object(&mut self, height: i32, object: Object) -> Result<NodeId> {
        if object.smoothing.boundary_size() != self.boundary_size {
            return Err(Error::InvalidInput(format!(
                "object {} does not have {} boundary points",
                object.smoothing, self.boundary_size
            )));
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(Some(Node { height, object, out: BTreeMap::new(), inc: BTreeSet::new() }));
        self.live += 1;
        Ok(id)
    }

    /// Sets the differential entry `from → to`; a zero entry is removed.
    pub fn set_entry(&mut self, from: NodeId, to: NodeId, m: LinComb<R::Elem>) -> Result<()> {
        let (hf, ht) = (self.node(from)?.height, self.node(to)?.height);
        if ht != hf + 1 {
            return Err(Error::InvalidInput(format!("entry {from}->{to} does not raise height by one")));
        }
        self.put(from, to, m);
        Ok(())
    }

    fn put(&mut self, from: NodeId, to: NodeId, m: LinComb<R::Elem>) {
        if m.is_zero() {
            self.n_mut(from).out.remove(&to);
            self.n_mut(to).inc.remove(&from);
        } else {
            self.n_mut(from).out.insert(to, m);
            self.n_mut(to).inc.insert(from);
        }
    }

    fn node(&self, id: NodeId) -> Result<&Node<R::Elem>> {
        self.nodes
            .get(id as usize)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::InvalidInput(format!("no object {id}")))
    }

    fn n(&self, id: NodeId) -> &Node<R::Elem> {
        self.nodes[id as usize].as_ref().expect("live node")
    }

    fn n_mut(&mut self, id: NodeId) -> &mut Node<R::Elem> {
        self.nodes[id as usize].as_mut().expect("live node")
    }

    pub fn object(&self, id: NodeId) -> Option<&Object> {
        self.node(id).ok().map(|n| &n.object)
    }

    pub fn height(&self, id: NodeId) -> Option<i32> {
        self.node(id).ok().map(|n| n.height)
    }

    pub fn entry(&self, from: NodeId, to: NodeId) -> Option<&LinComb<R::Elem>> {
        self.node(from).ok()?.out.get(&to)
    }

    /// Non-zero entries leaving `from`, by target id.
    pub fn entries_from(&self, from: NodeId) -> impl Iterator<Item = (NodeId, &LinComb<R::Elem>)> {
        self.n(from).out.iter().map(|(&t, m)| (t, m))
    }

    pub fn object_count(&self) -> usize {
        self.live
    }

    pub fn entry_count(&self) -> usize {
        self.ids().map(|i| self.n(i).out.len()).sum()
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.is_some())
            .map(|(i, _)| i as NodeId)
    }

    /// Node ids grouped by height, each column in id order.
    pub fn columns(&self) -> BTreeMap<i32, Vec<NodeId>> {
        let mut cols: BTreeMap<i32, Vec<NodeId>> = BTreeMap::new();
        for id in self.ids() {
            cols.entry(self.n(id).height).or_default().push(id);
        }
        cols
    }

    pub fn total_loops(&self) -> usize {
        self.ids().map(|i| self.n(i).object.smoothing.loops()).sum()
    }

    /// Multiset of (height, qshift, smoothing) for comparisons.
    pub fn object_multiset(&self) -> Vec<(i32, Object)> {
        let mut v: Vec<_> = self.ids().map(|i| (self.n(i).height, self.n(i).object.clone())).collect();
        v.sort();
        v
    }

    /// Shifts every object in height and q-degree.
    pub fn shifted(&self, height: i32, q: i32) -> Self {
        let mut c = self.clone();
        for n in c.nodes.iter_mut().flatten() {
            n.height += height;
            n.object.qshift += q;
        }
        c
    }

    /// Renumbers live nodes consecutively in (height, id) order.
    pub fn compacted(&self) -> Self {
        let order: Vec<NodeId> = self.columns().into_values().flatten().collect();
        let map: BTreeMap<NodeId, NodeId> = order.iter().enumerate().map(|(k, &i)| (i, k as NodeId)).collect();
        let mut c = FormalComplex::new(self.ring.clone(), self.boundary_size);
        for &i in &order {
            let n = self.n(i);
            c.add_object(n.height, n.object.clone()).expect("same boundary");
        }
        for &i in &order {
            for (t, m) in &self.n(i).out {
                c.put(map[&i], map[t], m.clone());
            }
        }
        c
    }

    fn remove_node(&mut self, id: NodeId) {
        let node = self.nodes[id as usize].take().expect("live node");
        for t in node.out.keys() {
            self.n_mut(*t).inc.remove(&id);
        }
        for s in &node.inc {
            self.n_mut(*s).out.remove(&id);
        }
        self.live -= 1;
    }

    /// Replaces the object at `id` (which must have a loop) by two copies
    /// without its last loop, shifted by +1 and −1. Returns the new ids.
    pub fn deloop_mut(&mut self, id: NodeId) -> Result<(NodeId, NodeId)> {
        let node = self.node(id)?.clone();
        let s = &node.object.smoothing;
        if s.loops() == 0 {
            return Err(Error::InvalidInput(format!("object {id} has no loop")));
        }
        let t = s.without_loops(1);
        let ring = self.ring.clone();
        let cap = LinComb::from_integers(&ring, &cobcat::cap_terms(s, false));
        let dcap = LinComb::from_integers(&ring, &cobcat::cap_terms(s, true));
        let cup = LinComb::from_integers(&ring, &cobcat::cup_terms(s, false));
        let dcup = LinComb::from_integers(&ring, &cobcat::cup_terms(s, true));

        let incoming: Vec<(NodeId, LinComb<R::Elem>)> =
            node.inc.iter().map(|&src| (src, self.n(src).out[&id].clone())).collect();
        self.remove_node(id);
        let q = node.object.qshift;
        let plus = self.add_object(node.height, Object { smoothing: t.clone(), qshift: q + 1 })?;
        let minus = self.add_object(node.height, Object { smoothing: t.clone(), qshift: q - 1 })?;
        for (src, f) in incoming {
            let src_sm = self.n(src).object.smoothing.clone();
            self.put(src, plus, cobcat::compose(&ring, &dcap, &f, &src_sm, s, &t));
            self.put(src, minus, cobcat::compose(&ring, &cap, &f, &src_sm, s, &t));
        }
        for (&dst, g) in &node.out {
            let dst_sm = self.n(dst).object.smoothing.clone();
            self.put(plus, dst, cobcat::compose(&ring, g, &cup, &t, s, &dst_sm));
            self.put(minus, dst, cobcat::compose(&ring, g, &dcup, &t, s, &dst_sm));
        }
        Ok((plus, minus))
    }

    pub fn deloop(&self, id: NodeId) -> Result<Self> {
        let mut c = self.clone();
        c.deloop_mut(id)?;
        Ok(c)
    }

    /// The unit coefficient of the entry `from → to`, if it is a unit times
    /// an identity.
    pub fn unit_entry(&self, from: NodeId, to: NodeId) -> Option<R::Elem> {
        let (a, b) = (&self.node(from).ok()?.object, &self.node(to).ok()?.object);
        if a != b || a.smoothing.loops() > 0 {
            return None;
        }
        let m = self.entry(from, to)?;
        let cyc = cycles_of(&a.smoothing, &b.smoothing).ok()?;
        m.unit_coefficient(&self.ring, &cyc)
    }

    /// Cancels the unit entry `from → to` together with both objects.
    /// Returns the sources whose rows were modified.
    pub fn gaussian_eliminate_mut(&mut self, from: NodeId, to: NodeId) -> Result<Vec<NodeId>> {
        let c = self
            .unit_entry(from, to)
            .ok_or_else(|| Error::InvalidInput(format!("entry {from}->{to} is not a detected unit")))?;
        let ring = self.ring.clone();
        let minus_inv = ring.neg(&ring.inverse(&c).expect("unit"));
        let s = self.n(from).object.smoothing.clone();
        let sources: Vec<(NodeId, Smoothing, Cycles, LinComb<R::Elem>)> = self
            .n(to)
            .inc
            .iter()
            .filter(|&&y| y != from)
            .map(|&y| {
                let sm = self.n(y).object.smoothing.clone();
                let cyc = cycles_of(&sm, &s).expect("same boundary");
                (y, sm, cyc, self.n(y).out[&to].clone())
            })
            .collect();
        let targets: Vec<(NodeId, Smoothing, Cycles, LinComb<R::Elem>)> = self
            .n(from)
            .out
            .iter()
            .filter(|(&z, _)| z != to)
            .map(|(&z, m)| {
                let sm = self.n(z).object.smoothing.clone();
                let cyc = cycles_of(&s, &sm).expect("same boundary");
                (z, sm, cyc, m.clone())
            })
            .collect();
        for (y, ysm, ycyc, delta) in &sources {
            for (z, zsm, zcyc, gamma) in &targets {
                let yz = cycles_of(ysm, zsm).expect("same boundary");
                let corr = cobcat::compose_with(&ring, gamma, delta, ycyc, zcyc, &yz, &s);
                if corr.is_zero() {
                    continue;
                }
                let old = self.n(*y).out.get(z).cloned().unwrap_or_default();
                self.put(*y, *z, old.add_scaled(&ring, &corr, &minus_inv));
            }
        }
        self.remove_node(from);
        self.remove_node(to);
        Ok(sources.into_iter().map(|(y, ..)| y).collect())
    }

    pub fn gaussian_eliminate(&self, from: NodeId, to: NodeId) -> Result<Self> {
        let mut c = self.clone();
        c.gaussian_eliminate_mut(from, to)?;
        Ok(c)
    }

    /// Deloops every object, then cancels unit entries until none is left.
    /// Sources are visited lowest height first, then by id; within a row the
    /// first unit entry by target id is cancelled.
    pub fn simplify_with(&mut self, hook: &mut dyn FnMut(Step, &Self) -> Result<()>) -> Result<SimplifyStats> {
        let mut stats = SimplifyStats::default();
        let mut loops: BTreeSet<NodeId> =
            self.ids().filter(|&i| self.n(i).object.smoothing.loops() > 0).collect();
        while let Some(id) = loops.pop_first() {
            let (p, m) = self.deloop_mut(id)?;
            stats.deloops += 1;
            hook(Step::Deloop { node: id }, self)?;
            if self.n(p).object.smoothing.loops() > 0 {
                loops.insert(p);
                loops.insert(m);
            }
        }

        let mut work: BTreeSet<(i32, NodeId)> = self.ids().map(|i| (self.n(i).height, i)).collect();
        while let Some((_, y)) = work.pop_first() {
            let hit = self.n(y).out.keys().copied().find(|&z| self.unit_entry(y, z).is_some());
            if let Some(z) = hit {
                let z_height = self.n(z).height;
                let touched = self.gaussian_eliminate_mut(y, z)?;
                stats.eliminations += 1;
                work.remove(&(z_height, z));
                for t in touched {
                    work.insert((self.n(t).height, t));
                }
                hook(Step::Eliminate { from: y, to: z }, self)?;
            }
        }
        Ok(stats)
    }

    pub fn simplify(&self) -> Self {
        let mut c = self.clone();
        c.simplify_with(&mut |_, _| Ok(())).expect("no hook errors");
        c
    }

    /// Checks dimensions, degree homogeneity and d∘d = 0.
    pub fn validate(&self) -> Result<()> {
        let b = self.boundary_size;
        for x in self.ids() {
            let nx = self.n(x);
            for (&y, e) in &nx.out {
                let ny = self.node(y)?;
                if ny.height != nx.height + 1 {
                    return Err(Error::Invariant(format!("entry {x}->{y} skips heights")));
                }
                if !ny.inc.contains(&x) {
                    return Err(Error::Invariant(format!("entry {x}->{y} missing from incidence")));
                }
                let want = nx.object.qshift - ny.object.qshift;
                for (c, _) in e.terms() {
                    if c.degree(b) != want {
                        return Err(Error::Invariant(format!(
                            "entry {x}->{y} has a term of degree {} but the shifts require {want}",
                            c.degree(b)
                        )));
                    }
                }
            }
            let mut sq: BTreeMap<NodeId, LinComb<R::Elem>> = BTreeMap::new();
            for (&y, e) in &nx.out {
                for (&z, f) in &self.n(y).out {
                    let term = cobcat::compose(
                        &self.ring,
                        f,
                        e,
                        &nx.object.smoothing,
                        &self.n(y).object.smoothing,
                        &self.n(z).object.smoothing,
                    );
                    let acc = sq.entry(z).or_default();
                    *acc = acc.add(&self.ring, &term);
                }
            }
            if let Some((z, _)) = sq.iter().find(|(_, m)| !m.is_zero()) {
                return Err(Error::Invariant(format!("d∘d is non-zero from {x} to {z}")));
            }
        }
        Ok(())
    }

    /// Σ (−1)^height q^qshift (q + q⁻¹)^loops, one polynomial per boundary
    /// matching.
    pub fn euler_characteristic(&self) -> BTreeMap<Vec<usize>, Laurent> {
        let mut out: BTreeMap<Vec<usize>, Laurent> = BTreeMap::new();
        for id in self.ids() {
            let n = self.n(id);
            let sign = if n.height.rem_euclid(2) == 0 { 1 } else { -1 };
            let term = Laurent::circle().pow(n.object.smoothing.loops()).shift(n.object.qshift);
            let e = out.entry(n.object.smoothing.matching()).or_default();
            *e = e.clone() + if sign > 0 { term } else { -term };
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Stable text form: objects by height, then entries.
    pub fn dump(&self) -> String {
        let c = self.compacted();
        let mut s = String::new();
        for (h, ids) in c.columns() {
            let _ = writeln!(s, "height {h}:");
            for id in ids {
                let n = c.n(id);
                let _ = writeln!(s, "  #{id} {}{{{}}}", n.object.smoothing, n.object.qshift);
                for (t, m) in &n.out {
                    let terms: Vec<String> = m.terms().iter().map(|(k, e)| format!("{e}{k}")).collect();
                    let _ = writeln!(s, "    -> #{t}: {}", terms.join(" + "));
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let c = self.compacted();
        let objects: Vec<_> = c
            .ids()
            .map(|id| {
                let n = c.n(id);
                json!({
                    "id": id,
                    "height": n.height,
                    "qshift": n.object.qshift,
                    "smoothing": n.object.smoothing.to_string(),
                })
            })
            .collect();
        let entries: Vec<_> = c
            .ids()
            .flat_map(|id| {
                c.n(id)
                    .out
                    .iter()
                    .map(move |(t, m)| {
                        let terms: Vec<_> = m
                            .terms()
                            .iter()
                            .map(|(k, e)| json!({"coeff": e.to_string(), "cobordism": k.to_string()}))
                            .collect();
                        json!({"from": id, "to": t, "terms": terms})
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        json!({"ring": self.ring.name(), "boundary": self.boundary_size, "objects": objects, "entries": entries})
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SimplifyStats {
    pub deloops: usize,
    pub eliminations: usize,
}

/// Planar tensor product: objects are glued pairs, heights and shifts add,
/// and the second factor's differential picks up (−1)^(height in the first).
pub fn tensor<R: Ring>(spec: &GluingSpec, a: &FormalComplex<R>, b: &FormalComplex<R>) -> Result<FormalComplex<R>> {
    spec.validate()?;
    if a.boundary_size != spec.left || b.boundary_size != spec.right {
        return Err(Error::InvalidInput(format!(
            "gluing expects {}+{} points, complexes have {}+{}",
            spec.left, spec.right, a.boundary_size, b.boundary_size
        )));
    }
    let ring = a.ring.clone();
    let ia: Vec<NodeId> = a.columns().into_values().flatten().collect();
    let ib: Vec<NodeId> = b.columns().into_values().flatten().collect();
    let pos_a: BTreeMap<NodeId, usize> = ia.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let pos_b: BTreeMap<NodeId, usize> = ib.iter().enumerate().map(|(k, &i)| (i, k)).collect();

    let mut glued: Vec<Vec<Glued>> = Vec::with_capacity(ia.len());
    for &i in &ia {
        let sa = &a.n(i).object.smoothing;
        glued.push(ib.iter().map(|&j| glue_smoothings(spec, sa, &b.n(j).object.smoothing)).collect::<Result<_>>()?);
    }
    let mut c = FormalComplex::new(ring.clone(), spec.outer.len());
    let mut id = vec![vec![0; ib.len()]; ia.len()];
    for (x, &i) in ia.iter().enumerate() {
        for (y, &j) in ib.iter().enumerate() {
            let (na, nb) = (a.n(i), b.n(j));
            id[x][y] = c.add_object(
                na.height + nb.height,
                Object { smoothing: glued[x][y].smoothing.clone(), qshift: na.object.qshift + nb.object.qshift },
            )?;
        }
    }

    let identity = |n: &Node<R::Elem>| {
        let s = &n.object.smoothing;
        (cobcat::identity_terms(s), cycles_of(s, s).expect("same smoothing"))
    };
    let ids_b: Vec<_> = ib.iter().map(|&j| identity(b.n(j))).collect();
    let ids_a: Vec<_> = ia.iter().map(|&i| identity(a.n(i))).collect();

    for (x, &i) in ia.iter().enumerate() {
        for (&i2, f) in &a.n(i).out {
            let x2 = pos_a[&i2];
            let left = cycles_of(&a.n(i).object.smoothing, &a.n(i2).object.smoothing)?;
            for y in 0..ib.len() {
                let (src, dst) = (&glued[x][y], &glued[x2][y]);
                let gc = cycles_of(&src.smoothing, &dst.smoothing)?;
                let frame =
                    HorizontalFrame { spec, left: &left, right: &ids_b[y].1, source: src, target: dst, glued: &gc };
                let mut terms = Vec::new();
                for (k, e) in f.terms() {
                    for (id, n) in &ids_b[y].0 {
                        for (c, m) in glue_cobordisms(&frame, k, id) {
                            terms.push((c, ring.mul(e, &ring.from_i64(n * m))));
                        }
                    }
                }
                c.put(id[x][y], id[x2][y], LinComb::from_terms(&ring, terms));
            }
        }
    }
    for (y, &j) in ib.iter().enumerate() {
        for (&j2, g) in &b.n(j).out {
            let y2 = pos_b[&j2];
            let right = cycles_of(&b.n(j).object.smoothing, &b.n(j2).object.smoothing)?;
            for (x, &i) in ia.iter().enumerate() {
                let sign = if a.n(i).height.rem_euclid(2) == 0 { 1 } else { -1 };
                let (src, dst) = (&glued[x][y], &glued[x][y2]);
                let gc = cycles_of(&src.smoothing, &dst.smoothing)?;
                let frame =
                    HorizontalFrame { spec, left: &ids_a[x].1, right: &right, source: src, target: dst, glued: &gc };
                let mut terms = Vec::new();
                for (k, e) in g.terms() {
                    for (id, n) in &ids_a[x].0 {
                        for (c, m) in glue_cobordisms(&frame, id, k) {
                            terms.push((c, ring.mul(e, &ring.from_i64(sign * n * m))));
                        }
                    }
                }
                c.put(id[x][y], id[x][y2], LinComb::from_terms(&ring, terms));
            }
        }
    }
    Ok(c)
}
