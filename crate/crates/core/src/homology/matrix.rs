//! Sparse matrices over a [`Ring`] and elimination by unit pivots.

use std::collections::{BTreeMap, BTreeSet};

use dashu_int::IBig;

use crate::ring::Ring;

/// Row-major sparse matrix. Zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, E>>,
}

impl<E: Clone> SparseMatrix<E> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Stores `value` at `(r, c)`; the caller must not pass a zero.
    pub fn insert(&mut self, r: usize, c: usize, value: E) {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of range");
        self.data[r].insert(c, value);
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&E> {
        self.data[r].get(&c)
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, E> {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|row| row.len()).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &E)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(&c, v)| (r, c, v)))
    }

    pub fn map<F, T: Clone>(&self, f: F) -> SparseMatrix<T>
    where
        F: Fn(&E) -> T,
    {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|row| row.iter().map(|(&c, v)| (c, f(v))).collect())
                .collect(),
        }
    }

    pub fn to_dense(&self, zero: E) -> Vec<Vec<E>> {
        let mut out = vec![vec![zero; self.cols]; self.rows];
        for (r, c, v) in self.iter() {
            out[r][c] = v.clone();
        }
        out
    }
}

/// Rank and torsion of a linear map, as read off a diagonal form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatrixInvariants {
    pub rank: usize,
    /// Elementary divisors greater than one, in divisibility order.
    pub torsion: Vec<IBig>,
}

impl MatrixInvariants {
    pub fn free(rank: usize) -> Self {
        MatrixInvariants { rank, torsion: Vec::new() }
    }
}

/// Eliminates pivots whose value is a unit of `ring` until none are left.
///
/// Returns the number of pivots removed together with the remaining rows
/// (restricted to rows and columns that were not pivots). Over a field the
/// remainder is always zero.
pub(crate) fn eliminate_units<R: Ring>(
    ring: &R,
    m: &SparseMatrix<R::Elem>,
) -> (usize, Vec<BTreeMap<usize, R::Elem>>) {
    let mut rows: Vec<BTreeMap<usize, R::Elem>> = m.data.clone();
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (r, row) in rows.iter().enumerate() {
        for &c in row.keys() {
            cols[c].insert(r);
        }
    }
    let mut alive = vec![true; rows.len()];
    let mut pivots = 0;

    loop {
        // Markowitz-style choice: cheapest unit by (row length - 1) * (column length - 1).
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            if !alive[r] || row.is_empty() {
                continue;
            }
            for (&c, v) in row {
                if !ring.is_unit(v) {
                    continue;
                }
                let cost = (row.len() - 1) * (cols[c].len() - 1);
                if best.map_or(true, |(_, _, b)| cost < b) {
                    best = Some((r, c, cost));
                }
                if cost == 0 {
                    break;
                }
            }
            if matches!(best, Some((_, _, 0))) {
                break;
            }
        }
        let Some((pr, pc, _)) = best else { break };

        let pivot_row = std::mem::take(&mut rows[pr]);
        let inv = ring.inverse(&pivot_row[&pc]).expect("pivot is a unit");
        alive[pr] = false;
        for &c in pivot_row.keys() {
            cols[c].remove(&pr);
        }

        let targets: Vec<usize> = cols[pc].iter().copied().collect();
        for r in targets {
            let factor = ring.mul(&rows[r][&pc], &inv);
            for (&c, v) in &pivot_row {
                let delta = ring.neg(&ring.mul(&factor, v));
                let row = &mut rows[r];
                match row.get(&c) {
                    Some(old) => {
                        let new = ring.add(old, &delta);
                        if ring.is_zero(&new) {
                            row.remove(&c);
                            cols[c].remove(&r);
                        } else {
                            row.insert(c, new);
                        }
                    }
                    None => {
                        row.insert(c, delta);
                        cols[c].insert(r);
                    }
                }
            }
            debug_assert!(!rows[r].contains_key(&pc));
        }
        // Column pc is now zero outside the pivot row; the pivot row's other
        // entries are cleared by column operations that touch nothing else.
        pivots += 1;
    }

    let rest = rows
        .into_iter()
        .zip(alive)
        .filter(|(row, a)| *a && !row.is_empty())
        .map(|(row, _)| row)
        .collect();
    (pivots, rest)
}

/// Rank over a field.
pub fn field_rank<R: Ring>(ring: &R, m: &SparseMatrix<R::Elem>) -> usize {
    let (rank, rest) = eliminate_units(ring, m);
    assert!(rest.is_empty(), "{} is not a field", ring.name());
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{PrimeField, Rationals};

    fn from_rows<R: Ring>(ring: &R, rows: &[&[i64]]) -> SparseMatrix<R::Elem> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                let x = ring.from_i64(v);
                if !ring.is_zero(&x) {
                    m.insert(r, c, x);
                }
            }
        }
        m
    }

    #[test]
    fn rank_over_q_and_f2() {
        let rows: &[&[i64]] = &[&[2, 4], &[6, 8]];
        assert_eq!(field_rank(&Rationals, &from_rows(&Rationals, rows)), 2);
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(field_rank(&f2, &from_rows(&f2, rows)), 0);
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(field_rank(&f3, &from_rows(&f3, rows)), 2);
    }

    #[test]
    fn rank_deficient() {
        let rows: &[&[i64]] = &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]];
        assert_eq!(field_rank(&Rationals, &from_rows(&Rationals, rows)), 2);
    }

    #[test]
    fn zero_matrix() {
        let m = SparseMatrix::<dashu_ratio::RBig>::zeros(3, 4);
        assert_eq!(field_rank(&Rationals, &m), 0);
    }
}
