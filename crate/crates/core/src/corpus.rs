//! Bundled test diagrams: prime knots up to eight crossings with their
//! integral homology, and seeded random braid closures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::homology::{Group, HomologyTable};
use crate::planar::{parse_pd, Diagram};

const KNOTS: &str = include_str!("../data/knots_le8.txt");

#[derive(Clone, Debug)]
pub struct KnotEntry {
    pub name: String,
    pub diagram: Diagram,
    pub braid: Vec<i32>,
    /// Integral homology as tabulated.
    pub homology: HomologyTable,
}

/// The prime knots with at most eight crossings, and the unknot.
pub fn prime_knots() -> Vec<KnotEntry> {
    KNOTS
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| parse_line(l).unwrap_or_else(|e| panic!("bundled corpus line {l:?}: {e}")))
        .collect()
}

pub fn knot(name: &str) -> Option<KnotEntry> {
    prime_knots().into_iter().find(|k| k.name == name)
}

fn parse_line(line: &str) -> Result<KnotEntry> {
    let fields: Vec<&str> = line.split('|').map(str::trim).collect();
    let [name, pd, braid, poly] = fields[..] else {
        return Err(Error::InvalidInput("expected four fields".into()));
    };
    let braid = braid
        .trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<i32>().map_err(|e| Error::InvalidInput(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok(KnotEntry { name: name.to_string(), diagram: parse_pd(pd)?, braid, homology: parse_khovanov_polynomial(poly)? })
}

/// Reads a polynomial such as `q+t^(2)*q^(5)+2*t^(3)*q^(7)*T^(2)`: each
/// term is a coefficient times t^r q^q, with `T^(2)` marking copies of ℤ/2.
pub fn parse_khovanov_polynomial(s: &str) -> Result<HomologyTable> {
    let mut groups: std::collections::BTreeMap<(i32, i32), (usize, Vec<u64>)> = Default::default();
    for term in s.split('+').map(str::trim).filter(|t| !t.is_empty()) {
        let mut coeff = 1usize;
        let (mut r, mut q, mut torsion) = (0, 0, None);
        for factor in term.split('*') {
            let bad = || Error::InvalidInput(format!("bad factor {factor:?} in {term:?}"));
            if let Ok(n) = factor.parse::<usize>() {
                coeff = n;
                continue;
            }
            let (var, exp) = match factor.split_once('^') {
                Some((v, e)) => (v, e.trim_matches(|c| c == '(' || c == ')').parse::<i32>().map_err(|_| bad())?),
                None => (factor, 1),
            };
            match var {
                "t" => r = exp,
                "q" => q = exp,
                "T" => torsion = Some(u64::try_from(exp).map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        let g = groups.entry((r, q)).or_default();
        match torsion {
            Some(n) => g.1.extend(std::iter::repeat(n).take(coeff)),
            None => g.0 += coeff,
        }
    }
    let mut t = HomologyTable::default();
    for ((r, q), (free, tors)) in groups {
        t.insert(r, q, Group::new(free, &tors));
    }
    Ok(t)
}

/// A seeded random braid closure.
#[derive(Clone, Debug)]
pub struct RandomDiagram {
    pub strands: usize,
    pub word: Vec<i32>,
    pub diagram: Diagram,
}

/// `count` closures of random braid words on two to four strands with one
/// to `max_crossings` letters.
pub fn random_diagrams(seed: u64, count: usize, max_crossings: usize) -> Vec<RandomDiagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let strands = rng.gen_range(2..=4);
            let len = rng.gen_range(1..=max_crossings.max(1));
            let word: Vec<i32> = (0..len)
                .map(|_| {
                    let g = rng.gen_range(1..strands as i32);
                    if rng.gen_bool(0.5) { g } else { -g }
                })
                .collect();
            let diagram = Diagram::from_braid(strands, &word).expect("generators in range");
            RandomDiagram { strands, word, diagram }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_loads() {
        let knots = prime_knots();
        assert_eq!(knots.len(), 36);
        assert_eq!(knots.iter().filter(|k| k.diagram.crossing_count() == 8).count(), 21);
        for k in &knots {
            assert_eq!(k.diagram.components(), 1, "{}", k.name);
            let n = k.name.split('_').next().unwrap().parse::<usize>().unwrap();
            assert_eq!(k.diagram.crossing_count(), n, "{}", k.name);
        }
    }

    #[test]
    fn trefoil_polynomial() {
        let t = knot("3_1").unwrap().homology;
        assert_eq!(t.get(3, 7), Group::new(0, &[2]));
        assert_eq!(t.get(0, 1), Group::new(1, &[]));
        assert_eq!(t.total_rank(), 4);
    }

    #[test]
    fn repeated_torsion() {
        let t = parse_khovanov_polynomial("2*t^(-1)*q^(3)*T^(2)+3*q").unwrap();
        assert_eq!(t.get(-1, 3), Group::new(0, &[2, 2]));
        assert_eq!(t.get(0, 1), Group::new(3, &[]));
    }

    #[test]
    fn random_is_seeded() {
        let a = random_diagrams(7, 10, 8);
        let b = random_diagrams(7, 10, 8);
        assert_eq!(a.iter().map(|d| d.word.clone()).collect::<Vec<_>>(), b.iter().map(|d| d.word.clone()).collect::<Vec<_>>());
        assert!(a.iter().all(|d| d.diagram.crossing_count() <= 8));
    }
}
