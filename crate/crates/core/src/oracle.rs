//! Brute-force cube of resolutions. Shares nothing with the scanning code
//! beyond the diagram type and the linear algebra.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::homology::laurent::Laurent;
use crate::homology::matrix::SparseMatrix;
use crate::homology::{homology, GradedComplex, HomologyTable};
use crate::planar::Diagram;
use crate::ring::Ring;

/// Largest diagram the cube is built for.
pub const MAX_CROSSINGS: usize = 14;

struct Resolutions {
    /// Per state: circle index of every edge, circles numbered by first edge.
    circle_of: Vec<Vec<u8>>,
    circles: Vec<u8>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn resolutions(d: &Diagram) -> Resolutions {
    let mut index: HashMap<u32, usize> = HashMap::new();
    let legs: Vec<[usize; 4]> = d
        .crossings()
        .iter()
        .map(|c| {
            c.edges.map(|e| {
                let n = index.len();
                *index.entry(e).or_insert(n)
            })
        })
        .collect();
    let n_edges = index.len();
    let n = legs.len();
    let mut circle_of = Vec::with_capacity(1 << n);
    let mut circles = Vec::with_capacity(1 << n);
    for state in 0usize..(1 << n) {
        let mut parent: Vec<usize> = (0..n_edges).collect();
        for (c, l) in legs.iter().enumerate() {
            let pairs = if state >> c & 1 == 0 { [(l[0], l[1]), (l[2], l[3])] } else { [(l[0], l[3]), (l[1], l[2])] };
            for (a, b) in pairs {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let mut label: HashMap<usize, u8> = HashMap::new();
        let ids: Vec<u8> = (0..n_edges)
            .map(|e| {
                let r = find(&mut parent, e);
                let k = label.len() as u8;
                *label.entry(r).or_insert(k)
            })
            .collect();
        circles.push(label.len() as u8 + d.free_loops() as u8);
        circle_of.push(ids);
    }
    Resolutions { circle_of, circles }
}

/// Kauffman bracket normalized as the graded Euler characteristic:
/// Σ over states of (−1)^{r−n₋} q^{r+n₊−2n₋} (q+q⁻¹)^{circles}.
pub fn kauffman_bracket(d: &Diagram) -> Result<Laurent> {
    check_size(d, 24)?;
    let (np, nm) = d.sign_counts();
    let (np, nm) = (np as i32, nm as i32);
    let res = resolutions(d);
    let circle = Laurent::circle();
    let mut powers = vec![Laurent::one()];
    let mut total = Laurent::zero();
    for (state, &k) in res.circles.iter().enumerate() {
        while powers.len() <= k as usize {
            let next = powers.last().unwrap() * &circle;
            powers.push(next);
        }
        let r = state.count_ones() as i32;
        let term = powers[k as usize].shift(r + np - 2 * nm);
        total = if (r - nm).rem_euclid(2) == 0 { total + term } else { total - term };
    }
    Ok(total)
}

fn check_size(d: &Diagram, limit: usize) -> Result<()> {
    if d.crossing_count() > limit {
        return Err(Error::TooLarge(format!(
            "{} crossings; the cube is limited to {limit}",
            d.crossing_count()
        )));
    }
    Ok(())
}

/// The Khovanov complex as a cube of resolutions. A generator is a state
/// together with a label per circle: bit set means v₋.
pub fn cube_complex<R: Ring>(ring: &R, d: &Diagram) -> Result<GradedComplex<R>> {
    check_size(d, MAX_CROSSINGS)?;
    let (np, nm) = d.sign_counts();
    let (np, nm) = (np as i32, nm as i32);
    let n = d.crossing_count();
    let res = resolutions(d);
    let grading = |state: usize, labels: u32| {
        let k = res.circles[state] as i32;
        let minus = labels.count_ones() as i32;
        let r = state.count_ones() as i32;
        (r - nm, (k - 2 * minus) + r + np - 2 * nm)
    };

    let mut index: HashMap<(usize, u32), usize> = HashMap::new();
    let mut dims: BTreeMap<(i32, i32), usize> = BTreeMap::new();
    for (state, &k) in res.circles.iter().enumerate() {
        for labels in 0u32..(1 << k) {
            let slot = dims.entry(grading(state, labels)).or_insert(0);
            index.insert((state, labels), *slot);
            *slot += 1;
        }
    }
    let mut g = GradedComplex::new(ring.clone());
    for (&(r, q), &dim) in &dims {
        g.set_dim(r, q, dim);
    }

    let free = d.free_loops() as u32;
    let one = ring.one();
    let minus_one = ring.neg(&one);
    let mut mats: BTreeMap<(i32, i32), SparseMatrix<R::Elem>> = BTreeMap::new();
    for state in 0..res.circles.len() {
        let k = res.circles[state] as u32;
        let edge_circles = k - free;
        for c in 0..n {
            if state >> c & 1 == 1 {
                continue;
            }
            let target = state | 1 << c;
            let kt = res.circles[target] as u32;
            let sign = if (state & ((1 << c) - 1)).count_ones() % 2 == 0 { &one } else { &minus_one };
            // Target circles of every source circle: one each, except for a
            // circle that splits.
            let (src, dst) = (&res.circle_of[state], &res.circle_of[target]);
            let mut targets: Vec<Vec<u32>> = vec![Vec::new(); k as usize];
            for e in 0..src.len() {
                let t = &mut targets[src[e] as usize];
                if !t.contains(&(dst[e] as u32)) {
                    t.push(dst[e] as u32);
                }
            }
            for f in 0..free {
                targets[(edge_circles + f) as usize].push(kt - free + f);
            }
            let saddle = Saddle::new(&targets, kt);
            for labels in 0u32..(1 << k) {
                let (r, q) = grading(state, labels);
                let row = index[&(state, labels)];
                let images = saddle.apply(labels);
                for t in images {
                    debug_assert_eq!(grading(target, t).1, q);
                    let col = index[&(target, t)];
                    let m = mats
                        .entry((r, q))
                        .or_insert_with(|| SparseMatrix::zeros(dims[&(r, q)], dims[&(r + 1, q)]));
                    m.insert(row, col, sign.clone());
                }
            }
        }
    }
    for ((r, q), m) in mats {
        g.set_differential(r, q, m)?;
    }
    Ok(g)
}

enum SaddleKind {
    Merge { a: u32, b: u32, t: u32 },
    Split { a: u32, t1: u32, t2: u32 },
}

/// Circle correspondence along one edge of the cube.
struct Saddle {
    /// Target circle of each source circle not involved in the saddle.
    carried: Vec<(u32, u32)>,
    kind: SaddleKind,
}

impl Saddle {
    fn new(targets: &[Vec<u32>], kt: u32) -> Saddle {
        let mut hits = vec![Vec::new(); kt as usize];
        let mut split = None;
        for (s, t) in targets.iter().enumerate() {
            match t.as_slice() {
                [x] => hits[*x as usize].push(s as u32),
                [x, y] => split = Some(SaddleKind::Split { a: s as u32, t1: *x, t2: *y }),
                _ => unreachable!("a circle meets at most two circles after a saddle"),
            }
        }
        let merge = hits.iter().position(|h| h.len() == 2);
        let kind = match (split, merge) {
            (Some(k), None) => k,
            (None, Some(t)) => SaddleKind::Merge { a: hits[t][0], b: hits[t][1], t: t as u32 },
            _ => unreachable!("a saddle either merges or splits"),
        };
        let carried = hits
            .iter()
            .enumerate()
            .filter(|(_, h)| h.len() == 1)
            .map(|(t, h)| (h[0], t as u32))
            .collect();
        Saddle { carried, kind }
    }

    /// Images of a labelled state under m or Δ, all with coefficient one.
    fn apply(&self, labels: u32) -> Vec<u32> {
        let mut base = 0u32;
        for &(s, t) in &self.carried {
            base |= (labels >> s & 1) << t;
        }
        match self.kind {
            // v₊v₊ → v₊, v₊v₋ → v₋, v₋v₋ → 0
            SaddleKind::Merge { a, b, t } => match (labels >> a & 1) + (labels >> b & 1) {
                0 => vec![base],
                1 => vec![base | 1 << t],
                _ => vec![],
            },
            // v₊ → v₊v₋ + v₋v₊, v₋ → v₋v₋
            SaddleKind::Split { a, t1, t2 } => {
                if labels >> a & 1 == 0 {
                    vec![base | 1 << t2, base | 1 << t1]
                } else {
                    vec![base | 1 << t1 | 1 << t2]
                }
            }
        }
    }
}

/// Homology computed from the full cube.
pub fn cube_homology<R: Ring>(ring: &R, d: &Diagram) -> Result<HomologyTable> {
    Ok(homology(&cube_complex(ring, d)?))
}
