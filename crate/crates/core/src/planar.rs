//! Planar diagram (PD) codes: parsing, orientation, crossing orders and the
//! boundary bookkeeping for gluing one tangle onto another.
//!
//! A crossing `X[i,j,k,l]` lists its four edges counterclockwise starting
//! from the incoming under-strand. The crossing is positive when the
//! over-strand runs from `l` to `j`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type EdgeId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub edges: [EdgeId; 4],
    pub sign: Sign,
}

impl Crossing {
    pub fn new(edges: [EdgeId; 4], sign: Sign) -> Self {
        Crossing { edges, sign }
    }

    /// The same crossing with over and under exchanged.
    pub fn mirrored(&self) -> Crossing {
        let [i, j, k, l] = self.edges;
        let edges = match self.sign {
            // over-strand l -> j becomes the under-strand
            Sign::Positive => [l, i, j, k],
            Sign::Negative => [j, k, l, i],
        };
        Crossing { edges, sign: self.sign.flip() }
    }
}

/// A validated, oriented link diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    free_loops: usize,
    components: usize,
    edge_count: usize,
}

impl Diagram {
    /// Builds a diagram from raw PD tuples, computing the orientation.
    pub fn from_pd(tuples: &[[EdgeId; 4]], free_loops: usize) -> Result<Diagram> {
        let (signs, traversed) = orient(tuples)?;
        let crossings = tuples
            .iter()
            .zip(signs)
            .map(|(&edges, sign)| Crossing { edges, sign })
            .collect();
        let mut edges: Vec<EdgeId> = tuples.iter().flatten().copied().collect();
        edges.sort_unstable();
        edges.dedup();
        Ok(Diagram {
            crossings,
            free_loops,
            components: traversed + free_loops,
            edge_count: edges.len(),
        })
    }

    /// Closure of a braid on `strands` strands. Generator `i` (1-based) is a
    /// positive crossing between positions `i` and `i+1`; `-i` is its inverse.
    pub fn from_braid(strands: usize, word: &[i32]) -> Result<Diagram> {
        if strands == 0 {
            return Err(Error::InvalidInput("a braid needs at least one strand".into()));
        }
        let mut current: Vec<EdgeId> = (1..=strands as EdgeId).collect();
        let mut fresh = strands as EdgeId + 1;
        let mut tuples = Vec::with_capacity(word.len());
        for &g in word {
            let i = g.unsigned_abs() as usize;
            if g == 0 || i >= strands {
                return Err(Error::InvalidInput(format!(
                    "braid generator {g} out of range for {strands} strands"
                )));
            }
            let (a, b) = (current[i - 1], current[i]);
            let (c, d) = (fresh, fresh + 1);
            fresh += 2;
            tuples.push(if g > 0 { [b, d, c, a] } else { [a, b, d, c] });
            current[i - 1] = c;
            current[i] = d;
        }
        // close up: the top edge at each position is the bottom edge there
        let mut rename: HashMap<EdgeId, EdgeId> = HashMap::new();
        let mut free_loops = 0;
        for (pos, &top) in current.iter().enumerate() {
            let bottom = pos as EdgeId + 1;
            if top == bottom {
                free_loops += 1;
            } else {
                rename.insert(top, bottom);
            }
        }
        for t in &mut tuples {
            for e in t.iter_mut() {
                if let Some(&r) = rename.get(e) {
                    *e = r;
                }
            }
        }
        let tuples = compact_labels(&tuples);
        Diagram::from_pd(&tuples, free_loops)
    }

    /// Standard diagram of the torus link T(strands, twists): the closure of
    /// (σ₁⋯σ_{strands−1})^twists.
    pub fn torus(strands: usize, twists: usize) -> Result<Diagram> {
        let word: Vec<i32> = (0..twists)
            .flat_map(|_| 1..strands as i32)
            .collect();
        Diagram::from_braid(strands, &word)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// (n₊, n₋)
    pub fn sign_counts(&self) -> (usize, usize) {
        let pos = self.crossings.iter().filter(|c| c.sign == Sign::Positive).count();
        (pos, self.crossings.len() - pos)
    }

    pub fn writhe(&self) -> i32 {
        self.crossings.iter().map(|c| c.sign.value()).sum()
    }

    pub fn mirror(&self) -> Diagram {
        Diagram {
            crossings: self.crossings.iter().map(Crossing::mirrored).collect(),
            ..self.clone()
        }
    }

    /// The PD text form, `PD[X[..],...,Loop[..]]`. Byte-deterministic.
    pub fn to_pd_string(&self) -> String {
        let mut items: Vec<String> = self
            .crossings
            .iter()
            .map(|c| {
                let [i, j, k, l] = c.edges;
                format!("X[{i},{j},{k},{l}]")
            })
            .collect();
        let max_edge = self.crossings.iter().flat_map(|c| c.edges).max().unwrap_or(0);
        for n in 0..self.free_loops {
            items.push(format!("Loop[{}]", max_edge as usize + 1 + n));
        }
        format!("PD[{}]", items.join(","))
    }

    pub fn to_json(&self) -> String {
        let doc = PdJson {
            crossings: self.crossings.iter().map(|c| c.edges).collect(),
            loops: self.free_loops,
        };
        serde_json::to_string(&doc).expect("PD json serializes")
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_string())
    }
}

#[derive(Serialize, Deserialize)]
struct PdJson {
    crossings: Vec<[EdgeId; 4]>,
    #[serde(default)]
    loops: usize,
}

fn compact_labels(tuples: &[[EdgeId; 4]]) -> Vec<[EdgeId; 4]> {
    let mut map: HashMap<EdgeId, EdgeId> = HashMap::new();
    let mut order: Vec<EdgeId> = tuples.iter().flatten().copied().collect();
    order.sort_unstable();
    order.dedup();
    for (n, e) in order.into_iter().enumerate() {
        map.insert(e, n as EdgeId + 1);
    }
    tuples.iter().map(|t| t.map(|e| map[&e])).collect()
}

/// Computes crossing signs by walking each component along the
/// under-strand direction. Returns the signs and the number of components
/// met by crossings.
fn orient(tuples: &[[EdgeId; 4]]) -> Result<(Vec<Sign>, usize)> {
    let mut occurrences: HashMap<EdgeId, Vec<(usize, usize)>> = HashMap::new();
    for (c, t) in tuples.iter().enumerate() {
        for (slot, &e) in t.iter().enumerate() {
            if e == 0 {
                return Err(Error::InvalidInput("edge labels must be positive".into()));
            }
            occurrences.entry(e).or_default().push((c, slot));
        }
    }
    let mut bad: Vec<_> = occurrences.iter().filter(|(_, v)| v.len() != 2).collect();
    bad.sort();
    if let Some((e, v)) = bad.first() {
        return Err(Error::EdgeMultiplicity { edge: **e, count: v.len() });
    }

    let partner = |c: usize, slot: usize| -> (usize, usize) {
        let occ = &occurrences[&tuples[c][slot]];
        if occ[0] == (c, slot) {
            occ[1]
        } else {
            occ[0]
        }
    };

    // incoming over-strand slot (1 or 3) per crossing
    let mut over_in: Vec<Option<usize>> = vec![None; tuples.len()];
    let mut under_seen = vec![false; tuples.len()];
    let mut components = 0;

    let walk = |start: (usize, usize),
                    over_in: &mut Vec<Option<usize>>,
                    under_seen: &mut Vec<bool>|
     -> Result<()> {
        let (mut c, mut slot) = start;
        loop {
            match slot {
                0 => {
                    if under_seen[c] && (c, slot) != start {
                        return Err(Error::Orientation(format!("crossing {} traversed twice", c + 1)));
                    }
                    under_seen[c] = true;
                }
                2 => {
                    return Err(Error::Orientation(format!(
                        "strand enters crossing {} through its outgoing under-edge",
                        c + 1
                    )))
                }
                _ => match over_in[c] {
                    Some(s) if s != slot => {
                        return Err(Error::Orientation(format!(
                            "over-strand of crossing {} traversed in both directions",
                            c + 1
                        )))
                    }
                    _ => over_in[c] = Some(slot),
                },
            }
            let exit = (slot + 2) % 4;
            let next = partner(c, exit);
            c = next.0;
            slot = next.1;
            if (c, slot) == start {
                return Ok(());
            }
        }
    };

    for c in 0..tuples.len() {
        if !under_seen[c] {
            walk((c, 0), &mut over_in, &mut under_seen)?;
            components += 1;
        }
    }
    // components that only pass over: pick the direction of increasing labels
    for c in 0..tuples.len() {
        if over_in[c].is_none() {
            let [_, j, _, l] = tuples[c];
            let start = if j == l + 1 || l > j + 1 { 3 } else { 1 };
            walk((c, start), &mut over_in, &mut under_seen)?;
            components += 1;
        }
    }

    let signs = over_in
        .into_iter()
        .map(|s| match s {
            Some(3) => Sign::Positive,
            _ => Sign::Negative,
        })
        .collect();
    Ok((signs, components))
}

/// Parses `PD[X[a,b,c,d], ..., Loop[k]]` or the JSON form
/// `{"crossings": [[a,b,c,d], ...], "loops": n}`.
pub fn parse_pd(text: &str) -> Result<Diagram> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let doc: PdJson = serde_json::from_str(trimmed).map_err(|e| Error::Syntax {
            position: e.column(),
            message: e.to_string(),
        })?;
        return Diagram::from_pd(&doc.crossings, doc.loops);
    }
    let mut p = Parser { text, pos: 0 };
    let (tuples, loops) = p.pd()?;
    Diagram::from_pd(&tuples, loops)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while let Some(ch) = self.text[self.pos..].chars().next() {
            if ch.is_whitespace() {
                self.pos += ch.len_utf8();
            } else {
                break;
            }
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { position: self.pos, message: message.into() })
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(format!("expected `{token}`"))
        }
    }

    fn number(&mut self) -> Result<EdgeId> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.text[start..].bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.err("expected a positive integer");
        }
        self.pos += digits;
        match self.text[start..self.pos].parse::<EdgeId>() {
            Ok(0) => Err(Error::Syntax { position: start, message: "edge labels must be positive".into() }),
            Ok(n) => Ok(n),
            Err(_) => Err(Error::Syntax { position: start, message: "edge label too large".into() }),
        }
    }

    fn pd(&mut self) -> Result<(Vec<[EdgeId; 4]>, usize)> {
        self.expect("PD")?;
        self.expect("[")?;
        let mut tuples = Vec::new();
        let mut loops = 0;
        if !self.eat("]") {
            loop {
                if self.eat("X") {
                    self.expect("[")?;
                    let mut t = [0; 4];
                    for (n, slot) in t.iter_mut().enumerate() {
                        if n > 0 {
                            self.expect(",")?;
                        }
                        *slot = self.number()?;
                    }
                    self.expect("]")?;
                    tuples.push(t);
                } else if self.eat("Loop") {
                    self.expect("[")?;
                    self.number()?;
                    self.expect("]")?;
                    loops += 1;
                } else {
                    return self.err("expected `X[` or `Loop[`");
                }
                if self.eat("]") {
                    break;
                }
                self.expect(",")?;
            }
        }
        self.skip_ws();
        if self.pos != self.text.len() {
            return self.err("trailing input");
        }
        Ok((tuples, loops))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderStrategy {
    Given,
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanOrder {
    pub permutation: Vec<usize>,
    /// Number of open strands after each prefix of `permutation`.
    pub width_profile: Vec<usize>,
}

impl ScanOrder {
    pub fn max_width(&self) -> usize {
        self.width_profile.iter().copied().max().unwrap_or(0)
    }

    /// Order with its width profile; `permutation` must be a bijection.
    pub fn from_permutation(crossings: &[Crossing], permutation: Vec<usize>) -> Result<ScanOrder> {
        let mut seen = vec![false; crossings.len()];
        if permutation.len() != crossings.len() {
            return Err(Error::InvalidInput("order length differs from crossing count".into()));
        }
        for &i in &permutation {
            if i >= crossings.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidInput(format!("order is not a permutation (index {i})")));
            }
        }
        let mut open = OpenEdges::default();
        let width_profile = permutation
            .iter()
            .map(|&i| {
                open.add(&crossings[i]);
                open.len()
            })
            .collect();
        Ok(ScanOrder { permutation, width_profile })
    }
}

#[derive(Default, Clone)]
struct OpenEdges {
    count: HashMap<EdgeId, u8>,
    open: usize,
}

impl OpenEdges {
    fn delta(&self, c: &Crossing) -> isize {
        let mut local: HashMap<EdgeId, u8> = HashMap::new();
        for &e in &c.edges {
            *local.entry(e).or_default() += 1;
        }
        local
            .iter()
            .map(|(e, &k)| {
                let before = self.count.get(e).copied().unwrap_or(0);
                let was_open = before == 1;
                let now_open = before + k == 1;
                now_open as isize - was_open as isize
            })
            .sum()
    }

    fn add(&mut self, c: &Crossing) {
        let d = self.delta(c);
        for &e in &c.edges {
            *self.count.entry(e).or_default() += 1;
        }
        self.open = (self.open as isize + d) as usize;
    }

    fn len(&self) -> usize {
        self.open
    }
}

/// Chooses the order in which crossings are added during a scan.
pub fn order_crossings(crossings: &[Crossing], strategy: OrderStrategy) -> ScanOrder {
    let permutation = match strategy {
        OrderStrategy::Given => (0..crossings.len()).collect(),
        OrderStrategy::Greedy => {
            let mut used = vec![false; crossings.len()];
            let mut open = OpenEdges::default();
            let mut perm = Vec::with_capacity(crossings.len());
            for _ in 0..crossings.len() {
                let (best, _) = (0..crossings.len())
                    .filter(|&i| !used[i])
                    .map(|i| (i, open.delta(&crossings[i])))
                    .min_by_key(|&(i, d)| (d, i))
                    .expect("a crossing remains");
                used[best] = true;
                open.add(&crossings[best]);
                perm.push(best);
            }
            perm
        }
    };
    ScanOrder::from_permutation(crossings, permutation).expect("valid permutation")
}

/// A boundary point of one of the two tangles being glued.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Left(usize),
    Right(usize),
}

/// How two tangles with `left` and `right` boundary points are placed side
/// by side: which points are joined, and the numbering of the points that
/// stay on the boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingSpec {
    pub left: usize,
    pub right: usize,
    pub joins: Vec<(Point, Point)>,
    pub outer: Vec<Point>,
}

impl GluingSpec {
    /// Disjoint placement, no joins.
    pub fn disjoint(left: usize, right: usize) -> GluingSpec {
        let outer = (0..left).map(Point::Left).chain((0..right).map(Point::Right)).collect();
        GluingSpec { left, right, joins: Vec::new(), outer }
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashMap::new();
        let mut mark = |p: Point| -> Result<()> {
            let in_range = match p {
                Point::Left(i) => i < self.left,
                Point::Right(j) => j < self.right,
            };
            if !in_range || seen.insert(p, ()).is_some() {
                return Err(Error::InvalidInput(format!("bad gluing point {p:?}")));
            }
            Ok(())
        };
        for &(a, b) in &self.joins {
            mark(a)?;
            mark(b)?;
        }
        for &p in &self.outer {
            mark(p)?;
        }
        if seen.len() != self.left + self.right {
            return Err(Error::InvalidInput("gluing does not cover every point".into()));
        }
        Ok(())
    }
}

/// Result of gluing two edge-labelled boundaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub spec: GluingSpec,
    /// Edge labels of the new boundary, in `spec.outer` order.
    pub boundary: Vec<EdgeId>,
    /// Whether the new boundary order is a genuine counterclockwise order
    /// (the gluing was realizable in the plane).
    pub planar: bool,
}

/// Glue data for boundaries given as counterclockwise edge lists; fails
/// when the joins cannot be realized with those cyclic orders.
pub fn glue_data(left: &[EdgeId], right: &[EdgeId]) -> Result<Gluing> {
    let g = glue_unchecked(left, right);
    if g.planar {
        Ok(g)
    } else {
        Err(Error::NonPlanar(format!("cannot glue {right:?} onto {left:?} in the plane")))
    }
}

/// Same as [`glue_data`], but a non-planar request is reported through
/// `Gluing::planar` instead of failing.
pub fn glue_unchecked(left: &[EdgeId], right: &[EdgeId]) -> Gluing {
    let mut joins = Vec::new();
    let mut pos: HashMap<EdgeId, Point> = HashMap::new();
    let mut joined = std::collections::HashSet::new();
    for (p, &e) in left
        .iter()
        .enumerate()
        .map(|(i, e)| (Point::Left(i), e))
        .chain(right.iter().enumerate().map(|(j, e)| (Point::Right(j), e)))
    {
        if let Some(q) = pos.remove(&e) {
            joins.push((q, p));
            joined.insert(q);
            joined.insert(p);
        } else {
            pos.insert(e, p);
        }
    }

    let label = |p: Point| match p {
        Point::Left(i) => left[i],
        Point::Right(j) => right[j],
    };
    let left_pts: Vec<Point> = (0..left.len()).map(Point::Left).collect();
    let right_pts: Vec<Point> = (0..right.len()).map(Point::Right).collect();

    let planar_outer = planar_outer(&left_pts, &right_pts, &joins, &label);
    let planar = planar_outer.is_some();
    let outer = planar_outer.unwrap_or_else(|| {
        left_pts
            .iter()
            .chain(right_pts.iter())
            .copied()
            .filter(|p| !joined.contains(p))
            .collect()
    });
    let boundary = outer.iter().map(|&p| label(p)).collect();
    Gluing {
        spec: GluingSpec { left: left.len(), right: right.len(), joins, outer },
        boundary,
        planar,
    }
}

/// Removes adjacent self-joined pairs (kinks) repeatedly; `None` if some
/// self-join is not nested.
fn strip_self_joins(cycle: &[Point], joins: &[(Point, Point)]) -> Option<Vec<Point>> {
    let partner: HashMap<Point, Point> = joins
        .iter()
        .flat_map(|&(a, b)| [(a, b), (b, a)])
        .collect();
    let same_side = |a: Point, b: Point| {
        matches!((a, b), (Point::Left(_), Point::Left(_)) | (Point::Right(_), Point::Right(_)))
    };
    let mut v: Vec<Point> = cycle.to_vec();
    loop {
        let n = v.len();
        let hit = (0..n).find(|&i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            n >= 2 && partner.get(&a) == Some(&b) && same_side(a, b)
        });
        match hit {
            Some(i) => {
                let j = (i + 1) % n;
                let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                v.remove(hi);
                v.remove(lo);
            }
            None => break,
        }
    }
    let leftover = v
        .iter()
        .any(|p| partner.get(p).map_or(false, |q| same_side(*p, *q)));
    (!leftover).then_some(v)
}

fn planar_outer(
    left: &[Point],
    right: &[Point],
    joins: &[(Point, Point)],
    label: &dyn Fn(Point) -> EdgeId,
) -> Option<Vec<Point>> {
    let left = strip_self_joins(left, joins)?;
    let right = strip_self_joins(right, joins)?;
    let shared = |p: &Point| joins.iter().any(|&(a, b)| a == *p || b == *p);
    let k = left.iter().filter(|p| shared(p)).count();
    if k == 0 {
        return Some(left.iter().chain(right.iter()).copied().collect());
    }
    let block_start = |v: &[Point]| -> Option<usize> {
        let n = v.len();
        (0..n).find(|&s| (0..k).all(|t| shared(&v[(s + t) % n])) && (k == n || !shared(&v[(s + n - 1) % n])))
    };
    let (ls, rs) = (block_start(&left)?, block_start(&right)?);
    let (ln, rn) = (left.len(), right.len());
    // the shared block is traversed in opposite directions on the two sides
    for t in 0..k {
        if label(left[(ls + t) % ln]) != label(right[(rs + k - 1 - t) % rn]) {
            return None;
        }
    }
    let mut outer: Vec<Point> = (k..ln).map(|t| left[(ls + t) % ln]).collect();
    outer.extend((k..rn).map(|t| right[(rs + t) % rn]));
    Some(outer)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]";
    const FIGURE_EIGHT: &str = "PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]";

    #[test]
    fn parses_trefoil() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.edge_count(), 6);
        assert_eq!(d.components(), 1);
        // KnotTheory's 3_1 is the left-handed trefoil
        assert_eq!(d.sign_counts(), (0, 3));
    }

    #[test]
    fn parses_unknot_marker_and_kink() {
        let d = parse_pd("PD[Loop[1]]").unwrap();
        assert_eq!((d.crossing_count(), d.components()), (0, 1));
        let k = parse_pd("PD[X[1,1,2,2]]").unwrap();
        assert_eq!(k.crossing_count(), 1);
        assert_eq!(k.components(), 1);
        let (p, n) = k.sign_counts();
        assert_eq!(p + n, 1);
        assert_eq!(k.crossings()[0].sign, Sign::Positive);
        let empty = parse_pd("PD[]").unwrap();
        assert_eq!(empty.components(), 0);
    }

    #[test]
    fn whitespace_and_json() {
        let a = parse_pd(" PD[ X[1, 4,2,5] ,X[3,6,4,1],\nX[5,2,6,3] ] ").unwrap();
        let b = parse_pd(r#"{"crossings": [[1,4,2,5],[3,6,4,1],[5,2,6,3]]}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_pd(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn syntax_errors_report_position() {
        match parse_pd("PD[X[1,2,3]]") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 10),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_pd("PD[X[1,2,3,4]] junk"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_pd("PD[X[0,1,1,2]]"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn edge_multiplicity() {
        assert!(matches!(
            parse_pd("PD[X[1,2,3,4]]"),
            Err(Error::EdgeMultiplicity { count: 1, .. })
        ));
        assert!(matches!(
            parse_pd("PD[X[1,1,1,2]]"),
            Err(Error::EdgeMultiplicity { .. })
        ));
    }

    #[test]
    fn inconsistent_orientation() {
        // edge 3 leaves both crossings as the outgoing under-strand
        assert!(matches!(
            parse_pd("PD[X[1,2,3,4],X[4,2,3,1]]"),
            Err(Error::Orientation(_))
        ));
    }

    #[test]
    fn signs_sum_to_writhe() {
        for pd in [TREFOIL, FIGURE_EIGHT, "PD[X[1,1,2,2]]"] {
            let d = parse_pd(pd).unwrap();
            let (p, n) = d.sign_counts();
            assert_eq!(p + n, d.crossing_count());
            assert_eq!(d.writhe(), p as i32 - n as i32);
        }
        let fig8 = parse_pd(FIGURE_EIGHT).unwrap();
        assert_eq!(fig8.sign_counts(), (2, 2));
    }

    #[test]
    fn braid_closures() {
        let t = Diagram::torus(2, 3).unwrap();
        assert_eq!(t.crossing_count(), 3);
        assert_eq!(t.components(), 1);
        assert_eq!(t.sign_counts(), (3, 0));
        let hopf = Diagram::from_braid(2, &[1, 1]).unwrap();
        assert_eq!(hopf.components(), 2);
        let unlink = Diagram::from_braid(3, &[1, -1]).unwrap();
        assert_eq!(unlink.components(), 3);
        assert_eq!(unlink.free_loops(), 1);
        let fig8 = Diagram::from_braid(3, &[1, -2, 1, -2]).unwrap();
        assert_eq!(fig8.sign_counts(), (2, 2));
        let t87 = Diagram::torus(7, 8).unwrap();
        assert_eq!(t87.crossing_count(), 48);
        assert_eq!(t87.components(), 1);
    }

    #[test]
    fn mirror_flips_signs_and_is_involutive() {
        let d = parse_pd(FIGURE_EIGHT).unwrap();
        let m = d.mirror();
        assert_eq!(m.writhe(), -d.writhe());
        assert_eq!(m.mirror(), d);
        // the mirror is still a valid, consistently oriented diagram
        let raw: Vec<[EdgeId; 4]> = m.crossings().iter().map(|c| c.edges).collect();
        assert_eq!(Diagram::from_pd(&raw, 0).unwrap(), m);
    }

    #[test]
    fn single_kink_width_profile() {
        let d = parse_pd("PD[X[1,1,2,2]]").unwrap();
        let o = order_crossings(d.crossings(), OrderStrategy::Given);
        assert_eq!(o.width_profile, vec![0]);
    }

    #[test]
    fn torus_width_is_twice_strands() {
        for (p, q) in [(2, 3), (3, 4), (4, 3), (7, 8)] {
            let d = Diagram::torus(p, q).unwrap();
            let o = order_crossings(d.crossings(), OrderStrategy::Given);
            assert_eq!(o.max_width(), 2 * p, "T({p},{q})");
            assert_eq!(*o.width_profile.last().unwrap(), 0);
        }
    }

    #[test]
    fn greedy_is_optimal_on_figure_eight() {
        use itertools::Itertools;
        let d = parse_pd(FIGURE_EIGHT).unwrap();
        let best = (0..4)
            .permutations(4)
            .map(|p| ScanOrder::from_permutation(d.crossings(), p).unwrap().max_width())
            .min()
            .unwrap();
        let greedy = order_crossings(d.crossings(), OrderStrategy::Greedy);
        assert_eq!(greedy.max_width(), best);
        assert!(greedy.max_width() <= 4);
    }

    #[test]
    fn gluing_onto_empty() {
        let g = glue_data(&[], &[1, 2, 3, 4]).unwrap();
        assert!(g.spec.joins.is_empty());
        assert_eq!(g.boundary, vec![1, 2, 3, 4]);
    }

    #[test]
    fn gluing_two_shared_points() {
        // crossing legs run counterclockwise, so the shared pair is reversed
        let g = glue_data(&[1, 2, 3, 4], &[3, 2, 5, 6]).unwrap();
        assert_eq!(g.spec.joins.len(), 2);
        assert_eq!(g.boundary, vec![4, 1, 5, 6]);
        assert!(glue_data(&[1, 2, 3, 4], &[2, 3, 5, 6]).is_err());
        assert!(!glue_unchecked(&[1, 2, 3, 4], &[2, 3, 5, 6]).planar);
    }

    #[test]
    fn gluing_closes_up() {
        let g = glue_data(&[1, 2, 3, 4], &[4, 3, 2, 1]).unwrap();
        assert!(g.boundary.is_empty());
        g.spec.validate().unwrap();
    }

    #[test]
    fn kink_gluing() {
        let g = glue_data(&[7, 8], &[8, 9, 9, 7]).unwrap();
        assert!(g.boundary.is_empty());
        assert_eq!(g.spec.joins.len(), 3);
    }

    #[test]
    fn pd_round_trip() {
        for pd in [TREFOIL, FIGURE_EIGHT, "PD[X[1,1,2,2],Loop[3]]", "PD[]"] {
            let d = parse_pd(pd).unwrap();
            assert_eq!(parse_pd(&d.to_pd_string()).unwrap(), d);
        }
    }
}
