//! Smith normal form over ℤ with arbitrary-precision entries.

use dashu_int::ops::UnsignedAbs;
use dashu_int::{IBig, UBig};

use super::matrix::{eliminate_units, MatrixInvariants, SparseMatrix};
use crate::ring::Integers;

pub type DenseMatrix = Vec<Vec<IBig>>;

/// `d = u · a · v` with `u`, `v` unimodular and `d` diagonal with
/// `d[0][0] | d[1][1] | ...`, all non-negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: DenseMatrix,
    pub d: DenseMatrix,
    pub v: DenseMatrix,
    pub rank: usize,
    /// Nonzero diagonal entries (including ones).
    pub divisors: Vec<IBig>,
}

pub fn identity(n: usize) -> DenseMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { IBig::ONE } else { IBig::ZERO }).collect())
        .collect()
}

pub fn mat_mul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(IBig::ZERO, |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &DenseMatrix) -> IBig {
    let n = a.len();
    let mut m = a.clone();
    let mut sign = IBig::ONE;
    let mut prev = IBig::ONE;
    for k in 0..n {
        if m[k][k] == IBig::ZERO {
            let Some(swap) = (k + 1..n).find(|&i| m[i][k] != IBig::ZERO) else {
                return IBig::ZERO;
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = val / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        IBig::ONE
    } else {
        sign * &m[n - 1][n - 1]
    }
}

struct Work {
    a: DenseMatrix,
    u: Option<DenseMatrix>,
    v: Option<DenseMatrix>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v {
                row.swap(i, j);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &IBig) {
        fn apply(m: &mut DenseMatrix, dst: usize, src: usize, k: &IBig) {
            let (s, d) = if src < dst {
                let (lo, hi) = m.split_at_mut(dst);
                (&lo[src], &mut hi[0])
            } else {
                let (lo, hi) = m.split_at_mut(src);
                (&hi[0], &mut lo[dst])
            };
            for (x, y) in d.iter_mut().zip(s.iter()) {
                if *y != IBig::ZERO {
                    *x += k * y;
                }
            }
        }
        apply(&mut self.a, dst, src, k);
        if let Some(u) = &mut self.u {
            apply(u, dst, src, k);
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &IBig) {
        fn apply(m: &mut DenseMatrix, dst: usize, src: usize, k: &IBig) {
            for row in m {
                if row[src] != IBig::ZERO {
                    let delta = k * &row[src];
                    row[dst] += delta;
                }
            }
        }
        apply(&mut self.a, dst, src, k);
        if let Some(v) = &mut self.v {
            apply(v, dst, src, k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -&*x;
            }
        }
    }

    /// Nonzero entry of least absolute value in the block from (t, t).
    fn smallest(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, UBig)> = None;
        for (i, row) in self.a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if *x == IBig::ZERO {
                    continue;
                }
                let abs = x.unsigned_abs();
                if best.as_ref().map_or(true, |b| abs < b.2) {
                    let one = abs == UBig::ONE;
                    best = Some((i, j, abs));
                    if one {
                        return best.map(|b| (b.0, b.1));
                    }
                }
            }
        }
        best.map(|b| (b.0, b.1))
    }

    fn run(&mut self) -> Vec<IBig> {
        let rows = self.a.len();
        let cols = self.a.first().map_or(0, |r| r.len());
        let mut divisors = Vec::new();
        for t in 0..rows.min(cols) {
            let Some((bi, bj)) = self.smallest(t) else { break };
            self.swap_rows(t, bi);
            self.swap_cols(t, bj);
            // Each round either finishes the pivot or leaves a nonzero
            // remainder smaller than it, which becomes the next pivot.
            loop {
                let p = self.a[t][t].clone();
                for i in t + 1..rows {
                    if self.a[i][t] != IBig::ZERO {
                        let q = rounded_quotient(&self.a[i][t], &p);
                        if q != IBig::ZERO {
                            self.add_row(i, t, &-q);
                        }
                    }
                }
                for j in t + 1..cols {
                    if self.a[t][j] != IBig::ZERO {
                        let q = rounded_quotient(&self.a[t][j], &p);
                        if q != IBig::ZERO {
                            self.add_col(j, t, &-q);
                        }
                    }
                }
                let clean = (t + 1..rows).all(|i| self.a[i][t] == IBig::ZERO)
                    && (t + 1..cols).all(|j| self.a[t][j] == IBig::ZERO);
                if clean {
                    // the pivot must divide the whole trailing block
                    let bad = (t + 1..rows)
                        .find(|&i| (t + 1..cols).any(|j| &self.a[i][j] % &p != IBig::ZERO));
                    match bad {
                        Some(i) => self.add_row(t, i, &IBig::ONE),
                        None => break,
                    }
                    continue;
                }
                // move the smallest entry of row t or column t to the pivot
                let mut best = (t, t);
                let mut best_abs = (&p).unsigned_abs();
                for i in t + 1..rows {
                    let x = &self.a[i][t];
                    if *x != IBig::ZERO && x.unsigned_abs() < best_abs {
                        best_abs = x.unsigned_abs();
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let x = &self.a[t][j];
                    if *x != IBig::ZERO && x.unsigned_abs() < best_abs {
                        best_abs = x.unsigned_abs();
                        best = (t, j);
                    }
                }
                self.swap_rows(t, best.0);
                self.swap_cols(t, best.1);
            }
            if self.a[t][t] < IBig::ZERO {
                self.negate_row(t);
            }
            divisors.push(self.a[t][t].clone());
        }
        divisors
    }
}

/// Nearest integer to a / b, so that the remainder is at most |b| / 2.
fn rounded_quotient(a: &IBig, b: &IBig) -> IBig {
    let q = a / b;
    let r = a - &q * b;
    let twice = (&r * IBig::from(2)).unsigned_abs();
    if twice > b.unsigned_abs() {
        if (r < IBig::ZERO) == (*b < IBig::ZERO) {
            q + IBig::ONE
        } else {
            q - IBig::ONE
        }
    } else {
        q
    }
}

/// Full Smith normal form with transformation matrices.
pub fn smith_normal_form(a: &DenseMatrix) -> SmithForm {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut w = Work { a: a.clone(), u: Some(identity(rows)), v: Some(identity(cols)) };
    let divisors = w.run();
    SmithForm {
        u: w.u.unwrap(),
        d: w.a,
        v: w.v.unwrap(),
        rank: divisors.len(),
        divisors,
    }
}

/// Elementary divisors of a dense matrix, without tracking transforms.
pub fn elementary_divisors(a: &DenseMatrix) -> Vec<IBig> {
    let mut w = Work { a: a.clone(), u: None, v: None };
    w.run()
}

/// Rank and torsion of a sparse integer matrix: unit pivots are removed
/// sparsely, the remainder goes through dense Smith normal form.
pub fn integer_invariants(m: &SparseMatrix<IBig>) -> MatrixInvariants {
    let (units, rest) = eliminate_units(&Integers, m);
    if rest.is_empty() {
        return MatrixInvariants::free(units);
    }
    let mut col_ids: Vec<usize> = rest.iter().flat_map(|row| row.keys().copied()).collect();
    col_ids.sort_unstable();
    col_ids.dedup();
    let dense: DenseMatrix = rest
        .iter()
        .map(|row| {
            col_ids
                .iter()
                .map(|c| row.get(c).cloned().unwrap_or(IBig::ZERO))
                .collect()
        })
        .collect();
    let divisors = elementary_divisors(&dense);
    let torsion = divisors.iter().filter(|d| **d != IBig::ONE).cloned().collect();
    MatrixInvariants { rank: units + divisors.len(), torsion }
}
