//! Reidemeister checks on open tangles: the simplified complex of each
//! move's hard side against its easy side.

use std::fmt;

use serde::Serialize;

use crate::cobcat::Smoothing;
use crate::complex::FormalComplex;
use crate::error::{Error, Result};
use crate::homology::{homology, to_graded, HomologyTable};
use crate::planar::{Crossing, EdgeId, Sign};
use crate::ring::{Integers, Ring};
use crate::scan::{glue_tangles, scan_tangle, ScanOptions, ScanStats, TangleComplex};

/// An object described through the edge labels of its boundary points.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LabelledObject {
    pub height: i32,
    pub arcs: Vec<(EdgeId, EdgeId)>,
    pub loops: usize,
    pub qshift: i32,
}

impl fmt::Display for LabelledObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arcs: Vec<String> = self.arcs.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        write!(f, "h={} [{}]", self.height, arcs.join(" "))?;
        if self.loops > 0 {
            write!(f, "+{}o", self.loops)?;
        }
        write!(f, "{{{}}}", self.qshift)
    }
}

/// Objects of a tangle complex, sorted, with arcs named by edge labels.
pub fn labelled_objects<R: Ring>(t: &TangleComplex<R>) -> Vec<LabelledObject> {
    let mut v: Vec<LabelledObject> = t
        .complex
        .object_multiset()
        .into_iter()
        .map(|(height, o)| {
            let mut arcs: Vec<(EdgeId, EdgeId)> = (0..o.smoothing.boundary_size())
                .filter(|&p| p < o.smoothing.partner(p))
                .map(|p| {
                    let (a, b) = (t.boundary[p], t.boundary[o.smoothing.partner(p)]);
                    (a.min(b), a.max(b))
                })
                .collect();
            arcs.sort();
            LabelledObject { height, arcs, loops: o.smoothing.loops(), qshift: o.qshift }
        })
        .collect();
    v.sort();
    v
}

/// Crossings of a braid word read bottom to top, with the given bottom
/// labels and fresh labels from `fresh` on. Returns the crossings and the
/// top labels by position.
pub fn braid_tangle(bottom: &[EdgeId], word: &[i32], mut fresh: EdgeId) -> Result<(Vec<Crossing>, Vec<EdgeId>)> {
    let mut current = bottom.to_vec();
    let mut out = Vec::with_capacity(word.len());
    for &g in word {
        let i = g.unsigned_abs() as usize;
        if g == 0 || i >= current.len() {
            return Err(Error::InvalidInput(format!("braid generator {g} out of range")));
        }
        let (a, b) = (current[i - 1], current[i]);
        let (c, d) = (fresh, fresh + 1);
        fresh += 2;
        out.push(if g > 0 {
            Crossing::new([b, d, c, a], Sign::Positive)
        } else {
            Crossing::new([a, b, d, c], Sign::Negative)
        });
        current[i - 1] = c;
        current[i] = d;
    }
    Ok((out, current))
}

fn rename(crossings: &mut [Crossing], from: &[EdgeId], to: &[EdgeId]) {
    for c in crossings {
        for e in c.edges.iter_mut() {
            if let Some(k) = from.iter().position(|x| x == e) {
                *e = to[k];
            }
        }
    }
}

/// Scans in the given order, checking invariants after every step.
fn scan_all<R: Ring>(ring: &R, crossings: &[Crossing]) -> Result<TangleComplex<R>> {
    Ok(scan_counted(ring, crossings)?.0)
}

/// Also returns the largest object count seen.
fn scan_counted<R: Ring>(ring: &R, crossings: &[Crossing]) -> Result<(TangleComplex<R>, usize)> {
    let order: Vec<usize> = (0..crossings.len()).collect();
    let opts = ScanOptions { check_every_step: true, ..Default::default() };
    let (t, stats) = scan_tangle(ring, crossings, &order, &opts, &mut |_, _| {})?;
    Ok((t, stats.peak_objects))
}

/// One comparison inside a check.
#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub description: String,
    pub passed: bool,
}

/// Outcome of one Reidemeister check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub cases: Vec<Case>,
}

impl CheckReport {
    fn new(name: &'static str, cases: Vec<(String, bool)>) -> CheckReport {
        let cases: Vec<Case> = cases.into_iter().map(|(description, passed)| Case { description, passed }).collect();
        CheckReport { name, passed: cases.iter().all(|c| c.passed), cases }
    }

    pub fn passed(&self) -> bool {
        self.passed
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = self.cases.iter().filter(|c| c.passed).count();
        writeln!(f, "{}: {} ({ok}/{} cases)", self.name, if self.passed() { "PASS" } else { "FAIL" }, self.cases.len())?;
        for c in &self.cases {
            writeln!(f, "  [{}] {}", if c.passed { "ok" } else { "FAIL" }, c.description)?;
        }
        Ok(())
    }
}

/// Whether a tangle complex is exactly one object at height 0 with no
/// shift and the given arcs.
fn is_easy_side<R: Ring>(t: &TangleComplex<R>, arcs: &[(EdgeId, EdgeId)]) -> (bool, String) {
    let objs = labelled_objects(t);
    let want = LabelledObject { height: 0, arcs: arcs.to_vec(), loops: 0, qshift: 0 };
    let summary: Vec<String> = objs.iter().map(|o| o.to_string()).collect();
    (objs == [want] && t.complex.entry_count() == 0, summary.join(", "))
}

/// Every kink on one strand, in both rotations and signs consistent with
/// an orientation, reduces to a plain arc.
pub fn check_r1() -> Result<CheckReport> {
    let kinks = [
        ("legs 0,1 joined", [3, 3, 1, 2], Sign::Positive),
        ("legs 1,2 joined", [1, 3, 3, 2], Sign::Negative),
        ("legs 2,3 joined", [1, 2, 3, 3], Sign::Positive),
        ("legs 3,0 joined", [3, 1, 2, 3], Sign::Negative),
    ];
    let mut cases = Vec::new();
    for (name, edges, sign) in kinks {
        let (t, peak) = scan_counted(&Integers, &[Crossing::new(edges, sign)])?;
        let (ok, got) = is_easy_side(&t, &[(1, 2)]);
        cases.push((format!("{name}, {sign:?}: {peak} objects -> {got}"), ok));
    }
    Ok(CheckReport::new("check_r1", cases))
}

/// σ₁σ₁⁻¹ and σ₁⁻¹σ₁ reduce to two parallel strands, and agree with
/// them under every closure.
pub fn check_r2() -> Result<CheckReport> {
    let ring = Integers;
    let mut cases = Vec::new();
    let closures = closures(&ring, &[1, 2], &[101, 102])?;
    let easy = arcs_tangle(&ring, &[1, 2, 102, 101], &[(1, 101), (2, 102)])?;
    for word in [[1, -1], [-1, 1]] {
        let (mut crossings, top) = braid_tangle(&[1, 2], &word, 3)?;
        rename(&mut crossings, &top, &[101, 102]);
        let (t, peak) = scan_counted(&ring, &crossings)?;
        let (ok, got) = is_easy_side(&t, &[(1, 101), (2, 102)]);
        cases.push((format!("{word:?}: {peak} objects -> {got}"), ok));
        cases.extend(compare_closures(&t, &easy, &closures, &format!("{word:?} against parallel strands"))?);
    }
    Ok(CheckReport::new("check_r2", cases))
}

/// The two sides of the third move with the same boundary labels: bottom
/// 1, 2, 3 and top 101, 102, 103.
fn r3_sides<R: Ring>(ring: &R) -> Result<[TangleComplex<R>; 2]> {
    let side = |word: &[i32]| -> Result<TangleComplex<R>> {
        let (mut crossings, top) = braid_tangle(&[1, 2, 3], word, 4)?;
        rename(&mut crossings, &top, &[101, 102, 103]);
        scan_all(ring, &crossings)
    };
    Ok([side(&[1, 2, 1])?, side(&[2, 1, 2])?])
}

/// Non-crossing perfect matchings of `n` points on a circle.
pub fn planar_matchings(n: usize) -> Vec<Vec<usize>> {
    fn go(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
        if points.is_empty() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for k in (1..points.len()).step_by(2) {
            for inner in go(&points[1..k]) {
                for outer in go(&points[k + 1..]) {
                    let mut m = vec![(points[0], points[k])];
                    m.extend(inner.iter().chain(&outer));
                    out.push(m);
                }
            }
        }
        out
    }
    let points: Vec<usize> = (0..n).collect();
    go(&points)
        .into_iter()
        .map(|pairs| {
            let mut m = vec![0; n];
            for (a, b) in pairs {
                m[a] = b;
                m[b] = a;
            }
            m
        })
        .collect()
}

fn closed_homology<R: Ring>(t: &TangleComplex<R>, closing: &TangleComplex<R>) -> Result<HomologyTable> {
    let glued = glue_tangles(t, closing, &ScanOptions::default(), &mut ScanStats::default())?;
    if !glued.boundary.is_empty() {
        return Err(Error::Invariant(format!("closure left edges {:?} open", glued.boundary)));
    }
    Ok(homology(&to_graded(&glued.complex)?))
}

/// A crossingless tangle: one object made of the given arcs.
fn arcs_tangle<R: Ring>(ring: &R, boundary: &[EdgeId], arcs: &[(EdgeId, EdgeId)]) -> Result<TangleComplex<R>> {
    let pos = |e: EdgeId| boundary.iter().position(|&x| x == e).expect("arc end on the boundary");
    let mut m = vec![0; boundary.len()];
    for &(a, b) in arcs {
        m[pos(a)] = pos(b);
        m[pos(b)] = pos(a);
    }
    let complex = FormalComplex::single(ring.clone(), 0, Smoothing::new(m, 0)?, 0);
    Ok(TangleComplex { complex, boundary: boundary.to_vec() })
}

/// Ways to close a braid-like tangle with the given bottom and top labels:
/// every crossingless matching of its endpoints (in the cyclic order
/// bottom left to right, then top right to left), and every braid word of
/// length three placed on top and closed up.
pub fn closures<R: Ring>(ring: &R, bottom: &[EdgeId], top: &[EdgeId]) -> Result<Vec<(String, TangleComplex<R>)>> {
    let n = bottom.len();
    let cyclic: Vec<EdgeId> = bottom.iter().chain(top.iter().rev()).copied().collect();
    let mut out = Vec::new();
    for m in planar_matchings(2 * n) {
        let arcs: Vec<(EdgeId, EdgeId)> = (0..2 * n).filter(|&p| p < m[p]).map(|p| (cyclic[p], cyclic[m[p]])).collect();
        let names: Vec<String> = arcs.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        out.push((format!("matching {}", names.join(" ")), arcs_tangle(ring, &cyclic, &arcs)?));
    }
    let letters: Vec<i32> = (1..n as i32).flat_map(|g| [g, -g]).collect();
    let mut words = Vec::new();
    for &a in &letters {
        for &b in &letters {
            for &c in &letters {
                words.push([a, b, c]);
            }
        }
    }
    let fresh = cyclic.iter().max().copied().unwrap_or(0) + 1;
    for word in words {
        let (mut crossings, ends) = braid_tangle(top, &word, fresh)?;
        rename(&mut crossings, &ends, bottom);
        let mut t = scan_all(ring, &crossings)?;
        // strands the word does not touch go straight through
        for (pos, &e) in ends.iter().enumerate() {
            if e == top[pos] {
                let arc = arcs_tangle(ring, &[e, bottom[pos]], &[(e, bottom[pos])])?;
                t = glue_tangles(&t, &arc, &ScanOptions::default(), &mut ScanStats::default())?;
            }
        }
        out.push((format!("braid closure {word:?}"), t));
    }
    Ok(out)
}

/// One case per disagreeing closure, then a summary case.
fn compare_closures<R: Ring>(
    a: &TangleComplex<R>,
    b: &TangleComplex<R>,
    closures: &[(String, TangleComplex<R>)],
    what: &str,
) -> Result<Vec<(String, bool)>> {
    let mut cases = Vec::new();
    let mut agree = 0;
    for (name, closing) in closures {
        if closed_homology(a, closing)? == closed_homology(b, closing)? {
            agree += 1;
        } else {
            cases.push((format!("{what}: {name}"), false));
        }
    }
    cases.push((format!("{what}: homology agrees under {agree}/{} closures", closures.len()), agree == closures.len()));
    Ok(cases)
}

/// σ₁σ₂σ₁ against σ₂σ₁σ₂: equal labelled object multisets, and equal
/// homology under every closure.
pub fn check_r3() -> Result<CheckReport> {
    let ring = Integers;
    let [a, b] = r3_sides(&ring)?;
    let mut cases = Vec::new();
    let (oa, ob) = (labelled_objects(&a), labelled_objects(&b));
    cases.push((format!("object multisets ({} and {} objects)", oa.len(), ob.len()), oa == ob));
    let closures = closures(&ring, &[1, 2, 3], &[101, 102, 103])?;
    cases.extend(compare_closures(&a, &b, &closures, "121 against 212")?);
    Ok(CheckReport::new("check_r3", cases))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan() {
        assert_eq!(planar_matchings(2).len(), 1);
        assert_eq!(planar_matchings(4).len(), 2);
        assert_eq!(planar_matchings(6).len(), 5);
        for m in planar_matchings(8) {
            assert!(Smoothing::new(m, 0).unwrap().is_planar());
        }
    }

    #[test]
    fn reidemeister() {
        for r in [check_r1().unwrap(), check_r2().unwrap(), check_r3().unwrap()] {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn wrong_sign_kink_is_not_an_arc() {
        let t = scan_all(&Integers, &[Crossing::new([1, 2, 3, 3], Sign::Negative)]).unwrap();
        assert!(!is_easy_side(&t, &[(1, 2)]).0);
    }
}
