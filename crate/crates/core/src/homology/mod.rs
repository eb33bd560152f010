//! Homology of closed complexes: every object is a shifted empty smoothing,
//! every entry a scalar, so the complex splits into one chain complex of
//! free modules per q-degree.

pub mod laurent;
pub mod matrix;
pub mod snf;

use std::collections::BTreeMap;
use std::fmt;

use dashu_int::IBig;
use serde::{Deserialize, Serialize};

use crate::complex::FormalComplex;
use crate::error::{Error, Result};
use crate::ring::Ring;
use laurent::Laurent;
use matrix::SparseMatrix;

/// Chain groups and differentials, split by q-degree.
#[derive(Clone, Debug)]
pub struct GradedComplex<R: Ring> {
    ring: R,
    /// Rank of the chain group at (r, q).
    dims: BTreeMap<(i32, i32), usize>,
    /// Differential from (r, q) to (r + 1, q); rows index the source.
    diffs: BTreeMap<(i32, i32), SparseMatrix<R::Elem>>,
}

impl<R: Ring> GradedComplex<R> {
    pub fn new(ring: R) -> Self {
        GradedComplex { ring, dims: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn set_dim(&mut self, r: i32, q: i32, dim: usize) {
        if dim == 0 {
            self.dims.remove(&(r, q));
        } else {
            self.dims.insert((r, q), dim);
        }
    }

    pub fn dim(&self, r: i32, q: i32) -> usize {
        self.dims.get(&(r, q)).copied().unwrap_or(0)
    }

    /// Sets the differential out of (r, q); its shape must match the ranks.
    pub fn set_differential(&mut self, r: i32, q: i32, m: SparseMatrix<R::Elem>) -> Result<()> {
        if m.rows() != self.dim(r, q) || m.cols() != self.dim(r + 1, q) {
            return Err(Error::InvalidInput(format!(
                "differential at ({r},{q}) is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                self.dim(r, q),
                self.dim(r + 1, q)
            )));
        }
        self.diffs.insert((r, q), m);
        Ok(())
    }

    pub fn differential(&self, r: i32, q: i32) -> Option<&SparseMatrix<R::Elem>> {
        self.diffs.get(&(r, q))
    }

    pub fn degrees(&self) -> impl Iterator<Item = ((i32, i32), usize)> + '_ {
        self.dims.iter().map(|(&k, &v)| (k, v))
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn euler_characteristic(&self) -> Laurent {
        let mut p = Laurent::zero();
        for (&(r, q), &d) in &self.dims {
            p.add_term(q, if r.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) });
        }
        p
    }

    /// Checks d∘d = 0 in every q-degree.
    pub fn check_d_squared(&self) -> Result<()> {
        for (&(r, q), d1) in &self.diffs {
            let Some(d2) = self.diffs.get(&(r + 1, q)) else { continue };
            for i in 0..d1.rows() {
                let mut acc: BTreeMap<usize, R::Elem> = BTreeMap::new();
                for (&j, a) in d1.row(i) {
                    for (&k, b) in d2.row(j) {
                        let e = acc.entry(k).or_insert_with(|| self.ring.zero());
                        *e = self.ring.add(e, &self.ring.mul(a, b));
                    }
                }
                if acc.values().any(|e| !self.ring.is_zero(e)) {
                    return Err(Error::Invariant(format!("d∘d ≠ 0 from ({r},{q}) generator {i}")));
                }
            }
        }
        Ok(())
    }
}

/// Applies the functor taking ∅ to the ground ring: a closed complex
/// becomes one chain complex per q-degree.
pub fn to_graded<R: Ring>(c: &FormalComplex<R>) -> Result<GradedComplex<R>> {
    let ring = c.ring().clone();
    let mut index: BTreeMap<u32, (i32, i32, usize)> = BTreeMap::new();
    let mut dims: BTreeMap<(i32, i32), usize> = BTreeMap::new();
    for (h, ids) in c.columns() {
        for id in ids {
            let obj = c.object(id).expect("live id");
            if obj.smoothing.boundary_size() != 0 || obj.smoothing.loops() != 0 {
                return Err(Error::InvalidInput(format!(
                    "object {} is not an empty smoothing; scan and simplify first",
                    obj.smoothing
                )));
            }
            let slot = dims.entry((h, obj.qshift)).or_insert(0);
            index.insert(id, (h, obj.qshift, *slot));
            *slot += 1;
        }
    }
    let mut g = GradedComplex::new(ring.clone());
    for (&(r, q), &d) in &dims {
        g.set_dim(r, q, d);
    }
    let mut mats: BTreeMap<(i32, i32), SparseMatrix<R::Elem>> = BTreeMap::new();
    for (&id, &(r, q, i)) in &index {
        for (t, m) in c.entries_from(id) {
            let (r2, q2, j) = index[&t];
            if r2 != r + 1 || q2 != q {
                return Err(Error::Invariant(format!("entry {id}->{t} does not preserve q")));
            }
            let e = crate::scan::scalar(&ring, m);
            mats.entry((r, q))
                .or_insert_with(|| SparseMatrix::zeros(dims[&(r, q)], dims[&(r + 1, q)]))
                .insert(i, j, e);
        }
    }
    for ((r, q), m) in mats {
        g.set_differential(r, q, m)?;
    }
    Ok(g)
}

/// A finitely generated abelian group (or vector space): free rank and
/// torsion as prime powers in increasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Group {
    pub free: usize,
    pub torsion: Vec<u64>,
}

impl Group {
    /// From a free rank and any list of cyclic orders (units ignored).
    pub fn new(free: usize, orders: &[u64]) -> Group {
        let mut torsion: Vec<u64> = orders.iter().flat_map(|&n| prime_powers(n)).collect();
        torsion.sort_unstable();
        Group { free, torsion }
    }

    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }

    /// Invariant factors d₁ | d₂ | ….
    pub fn invariant_factors(&self) -> Vec<u64> {
        let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &pp in &self.torsion {
            by_prime.entry(smallest_prime_factor(pp)).or_default().push(pp);
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![1u64; len];
        for powers in by_prime.values_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (k, &pp) in powers.iter().enumerate() {
                out[len - 1 - k] *= pp;
            }
        }
        out
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free {
            0 => {}
            1 => parts.push("Z".to_string()),
            n => parts.push(format!("Z^{n}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

fn prime_powers(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 1 {
        let p = smallest_prime_factor(n);
        let mut pp = 1;
        while n % p == 0 {
            n /= p;
            pp *= p;
        }
        out.push(pp);
    }
    out
}

/// Homology groups keyed by (r, q): homological height and absolute
/// q-degree. Zero groups are omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HomologyTable {
    pub entries: BTreeMap<(i32, i32), Group>,
}

#[derive(Serialize, Deserialize)]
struct Row {
    r: i32,
    j: i32,
    q: i32,
    free: usize,
    /// Elementary divisors, each dividing the next.
    torsion: Vec<u64>,
    /// The same torsion split into prime powers.
    #[serde(default)]
    primary: Vec<u64>,
}

impl HomologyTable {
    pub fn get(&self, r: i32, q: i32) -> Group {
        self.entries.get(&(r, q)).cloned().unwrap_or_default()
    }

    pub fn insert(&mut self, r: i32, q: i32, g: Group) {
        if g.is_zero() {
            self.entries.remove(&(r, q));
        } else {
            self.entries.insert((r, q), g);
        }
    }

    pub fn total_rank(&self) -> usize {
        self.entries.values().map(|g| g.free).sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.entries.values().any(|g| !g.torsion.is_empty())
    }

    /// Σ (−1)^r · free rank · q^q.
    pub fn euler_characteristic(&self) -> Laurent {
        let mut p = Laurent::zero();
        for (&(r, q), g) in &self.entries {
            p.add_term(q, if r.rem_euclid(2) == 0 { g.free as i64 } else { -(g.free as i64) });
        }
        p
    }

    /// Reflects (r, q) → (−r, −q), keeping free ranks only.
    pub fn mirror_free(&self) -> HomologyTable {
        let mut t = HomologyTable::default();
        for (&(r, q), g) in &self.entries {
            t.insert(-r, -q, Group::new(g.free, &[]));
        }
        t
    }

    /// Free parts only.
    pub fn free_part(&self) -> HomologyTable {
        let mut t = HomologyTable::default();
        for (&(r, q), g) in &self.entries {
            t.insert(r, q, Group::new(g.free, &[]));
        }
        t
    }

    /// One JSON row per non-zero group; `j` is the column index q − 2r.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Row> = self
            .entries
            .iter()
            .map(|(&(r, q), g)| Row {
                r,
                j: q - 2 * r,
                q,
                free: g.free,
                torsion: g.invariant_factors(),
                primary: g.torsion.clone(),
            })
            .collect();
        serde_json::to_value(rows).expect("rows serialize")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<HomologyTable> {
        let rows: Vec<Row> =
            serde_json::from_value(v.clone()).map_err(|e| Error::InvalidInput(format!("homology json: {e}")))?;
        let mut t = HomologyTable::default();
        for row in rows {
            t.insert(row.r, row.q, Group::new(row.free, &row.torsion));
        }
        Ok(t)
    }

    /// One line per group: `r q j group`, with the elementary divisors
    /// when they differ from the prime-power form.
    pub fn to_list(&self) -> String {
        let mut s = String::new();
        for (&(r, q), g) in &self.entries {
            s.push_str(&format!("r={r:<4} q={q:<4} j={:<4} {g}", q - 2 * r));
            let inv = g.invariant_factors();
            if inv != g.torsion {
                s.push_str(&format!("  divisors {inv:?}"));
            }
            s.push('\n');
        }
        s
    }

    /// Tab-separated `r j q free torsion` with a header line.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("r\tj\tq\tfree\ttorsion\n");
        for (&(r, q), g) in &self.entries {
            let t: Vec<String> = g.invariant_factors().iter().map(u64::to_string).collect();
            s.push_str(&format!("{r}\t{}\t{q}\t{}\t{}\n", q - 2 * r, g.free, t.join(",")));
        }
        s
    }

    /// Grid with one row per height r and one column per j = q − 2r.
    pub fn to_grid(&self) -> String {
        if self.entries.is_empty() {
            return "(zero)\n".to_string();
        }
        let rs: Vec<i32> = {
            let mut v: Vec<i32> = self.entries.keys().map(|&(r, _)| r).collect();
            v.dedup();
            v
        };
        let mut js: Vec<i32> = self.entries.keys().map(|&(r, q)| q - 2 * r).collect();
        js.sort_unstable();
        js.dedup();
        let cell = |r: i32, j: i32| {
            self.entries.get(&(r, j + 2 * r)).map(|g| g.to_string()).unwrap_or_default()
        };
        let mut width = 3;
        for &r in &rs {
            for &j in &js {
                width = width.max(cell(r, j).len());
            }
        }
        let mut s = format!("{:>5} |", "r\\j");
        for &j in &js {
            s.push_str(&format!(" {j:>width$}"));
        }
        s.push('\n');
        s.push_str(&"-".repeat(7 + js.len() * (width + 1)));
        s.push('\n');
        for &r in &rs {
            s.push_str(&format!("{r:>5} |"));
            for &j in &js {
                s.push_str(&format!(" {:>width$}", cell(r, j)));
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for HomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_list())
    }
}

/// Homology of a graded complex: in each degree, free rank
/// dim − rank(d_out) − rank(d_in) and torsion from the invariant factors of
/// the incoming differential.
pub fn homology<R: Ring>(g: &GradedComplex<R>) -> HomologyTable {
    let mut inv = BTreeMap::new();
    for (&key, m) in &g.diffs {
        inv.insert(key, g.ring.matrix_invariants(m));
    }
    let mut t = HomologyTable::default();
    for (&(r, q), &dim) in &g.dims {
        let out = inv.get(&(r, q)).map_or(0, |i: &matrix::MatrixInvariants| i.rank);
        let (inc, torsion) = match inv.get(&(r - 1, q)) {
            Some(i) => (i.rank, i.torsion.iter().map(ibig_to_u64).collect::<Vec<_>>()),
            None => (0, Vec::new()),
        };
        t.insert(r, q, Group::new(dim - out - inc, &torsion));
    }
    t
}

fn ibig_to_u64(n: &IBig) -> u64 {
    u64::try_from(n.clone()).expect("torsion order fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobcat::{LinComb, Smoothing};
    use crate::complex::Object;
    use crate::ring::{Integers, Rationals};

    #[test]
    fn group_normal_form() {
        assert_eq!(Group::new(0, &[6]), Group::new(0, &[2, 3]));
        assert_eq!(Group::new(0, &[2, 4, 5, 7]).invariant_factors(), vec![2, 140]);
        assert_eq!(Group::new(1, &[1]).to_string(), "Z");
        assert_eq!(Group::new(2, &[12]).to_string(), "Z^2+Z3+Z4");
        assert!(Group::new(0, &[1, 1]).is_zero());
    }

    #[test]
    fn scalar_two() {
        let z = Integers;
        let mut c = FormalComplex::new(z, 0);
        let e = Object { smoothing: Smoothing::empty(), qshift: 1 };
        let a = c.add_object(0, e.clone()).unwrap();
        let b = c.add_object(1, e).unwrap();
        let two = LinComb::from_integers(&z, &[(crate::cobcat::Cobordism::disks(0, 0), 2)]);
        c.set_entry(a, b, two).unwrap();
        let g = to_graded(&c).unwrap();
        assert_eq!(g.differential(0, 1).unwrap().get(0, 0), Some(&IBig::from(2)));
        let h = homology(&g);
        assert_eq!(h.entries.len(), 1);
        assert_eq!(h.get(1, 1), Group::new(0, &[2]));
        // over Q the same complex is acyclic
        let mut cq = FormalComplex::new(Rationals, 0);
        let e = Object { smoothing: Smoothing::empty(), qshift: 1 };
        let a = cq.add_object(0, e.clone()).unwrap();
        let b = cq.add_object(1, e).unwrap();
        cq.set_entry(a, b, LinComb::from_integers(&Rationals, &[(crate::cobcat::Cobordism::disks(0, 0), 2)]))
            .unwrap();
        assert!(homology(&to_graded(&cq).unwrap()).entries.is_empty());
    }

    #[test]
    fn empty_complex() {
        let g = to_graded(&FormalComplex::new(Integers, 0)).unwrap();
        assert_eq!(g.total_dim(), 0);
        assert!(homology(&g).entries.is_empty());
    }

    #[test]
    fn rejects_open_objects() {
        let (s0, _) = Smoothing::crossing_smoothings();
        let c = FormalComplex::single(Integers, 0, s0, 0);
        assert!(to_graded(&c).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut t = HomologyTable::default();
        t.insert(3, 47, Group::new(0, &[2]));
        t.insert(0, 41, Group::new(1, &[]));
        let v = t.to_json();
        assert_eq!(v[0]["j"], 41);
        assert_eq!(v[1]["j"], 41);
        assert_eq!(v[1]["q"], 47);
        assert_eq!(HomologyTable::from_json(&v).unwrap(), t);
    }
}
