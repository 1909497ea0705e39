//! Smith normal form over ℤ.
//!
//! [`smith_normal_form`] returns the full decomposition `U·A·V = D`.
//! [`invariant_factors`] only needs the diagonal; it first removes unit
//! pivots with sparse row operations (which preserve the nontrivial
//! invariant factors) and runs the dense algorithm on what remains.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Matrix, Z};

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: Matrix<Z>,
    pub d: Matrix<Z>,
    pub v: Matrix<Z>,
    pub rank: usize,
}

impl Smith {
    /// The nonzero diagonal entries.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i)).collect()
    }
}

pub fn smith_normal_form(a: &Matrix<Z>) -> Smith {
    let (m, n) = (a.rows(), a.cols());
    let mut work = a.to_dense();
    let mut u = identity_dense(m);
    let mut v = identity_dense(n);
    let rank = dense_snf(&mut work, Some(&mut u), Some(&mut v));
    let smith = Smith {
        u: Matrix::from_dense(m, m, u).expect("square"),
        d: Matrix::from_dense(m, n, work).expect("shape"),
        v: Matrix::from_dense(n, n, v).expect("square"),
        rank,
    };
    debug_assert!(smith.u.mul(a).and_then(|ua| ua.mul(&smith.v)).map(|x| x == smith.d).unwrap_or(false));
    smith
}

/// Nonzero invariant factors `d₁ | d₂ | … | d_r` of an integer matrix
/// (units included); `r` is the rank.
pub fn invariant_factors(a: &Matrix<Z>) -> Vec<BigInt> {
    invariant_factors_of_rows(a.row_data().to_vec(), a.cols())
}

pub(crate) fn invariant_factors_of_rows(rows: Vec<Vec<(usize, BigInt)>>, cols: usize) -> Vec<BigInt> {
    let (units, rest, rest_cols) = eliminate_units(rows, cols);
    let mut dense: Vec<Vec<BigInt>> = rest
        .into_iter()
        .map(|r| {
            let mut d = vec![BigInt::zero(); rest_cols];
            for (j, x) in r {
                d[j] = x;
            }
            d
        })
        .collect();
    let rank = dense_snf(&mut dense, None, None);
    let mut out = vec![BigInt::one(); units];
    out.extend((0..rank).map(|i| dense[i][i].clone()));
    out
}

fn identity_dense(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

type SparseRow = Vec<(usize, BigInt)>;

/// Repeatedly pivot on entries ±1, clearing their column by row operations
/// and then discarding the pivot row and column. Returns the number of
/// pivots, the surviving nonzero rows and the compressed column count.
fn eliminate_units(rows: Vec<SparseRow>, cols: usize) -> (usize, Vec<SparseRow>, usize) {
    let mut rows: Vec<Option<SparseRow>> = rows.into_iter().map(Some).collect();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cols];
    for (i, r) in rows.iter().enumerate() {
        for (j, _) in r.as_ref().unwrap() {
            col_rows[*j].insert(i);
        }
    }
    let mut count = 0;
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        'scan: for (i, r) in rows.iter().enumerate() {
            let Some(r) = r else { continue };
            for (j, x) in r {
                if x.abs().is_one() {
                    let cost = (r.len() - 1) * (col_rows[*j].len() - 1);
                    if best.is_none_or(|(_, _, c)| cost < c) {
                        best = Some((i, *j, cost));
                        if cost == 0 {
                            break 'scan;
                        }
                    }
                }
            }
        }
        let Some((p, c, _)) = best else { break };
        let prow = rows[p].take().unwrap();
        let pval = prow.iter().find(|(j, _)| *j == c).unwrap().1.clone();
        for (j, _) in &prow {
            col_rows[*j].remove(&p);
        }
        let others: Vec<usize> = col_rows[c].iter().copied().collect();
        for i in others {
            let r = rows[i].take().unwrap();
            let a = &r.iter().find(|(j, _)| *j == c).unwrap().1;
            let factor = a * &pval; // pivot is ±1, so a / pval = a · pval
            let new = axpy(&r, &prow, &factor);
            for (j, _) in &prow {
                if new.binary_search_by_key(j, |(k, _)| *k).is_ok() {
                    col_rows[*j].insert(i);
                } else {
                    col_rows[*j].remove(&i);
                }
            }
            rows[i] = Some(new);
        }
        count += 1;
    }
    let live_cols: Vec<usize> = (0..cols).filter(|&j| !col_rows[j].is_empty()).collect();
    let mut new_index = vec![usize::MAX; cols];
    for (k, &j) in live_cols.iter().enumerate() {
        new_index[j] = k;
    }
    let rest = rows
        .into_iter()
        .flatten()
        .filter(|r| !r.is_empty())
        .map(|r| r.into_iter().map(|(j, x)| (new_index[j], x)).collect())
        .collect();
    (count, rest, live_cols.len())
}

/// `r − factor·p` on sorted sparse rows.
fn axpy(r: &[(usize, BigInt)], p: &[(usize, BigInt)], factor: &BigInt) -> SparseRow {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut k) = (0, 0);
    while i < r.len() || k < p.len() {
        if k == p.len() || (i < r.len() && r[i].0 < p[k].0) {
            out.push(r[i].clone());
            i += 1;
        } else if i == r.len() || p[k].0 < r[i].0 {
            out.push((p[k].0, -(factor * &p[k].1)));
            k += 1;
        } else {
            let v = &r[i].1 - factor * &p[k].1;
            if !v.is_zero() {
                out.push((r[i].0, v));
            }
            i += 1;
            k += 1;
        }
    }
    out
}

/// In-place dense Smith normal form; returns the rank. Row operations are
/// mirrored on `u` and column operations on `v` when supplied.
fn dense_snf(
    a: &mut [Vec<BigInt>],
    mut u: Option<&mut Vec<Vec<BigInt>>>,
    mut v: Option<&mut Vec<Vec<BigInt>>>,
) -> usize {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_entry(a, t) else { break };
        swap_rows(a, u.as_deref_mut(), t, pi);
        swap_cols(a, v.as_deref_mut(), t, pj);
        loop {
            let mut clean = true;
            // clear column t below the pivot
            let pivot_cols: Vec<usize> = (t..n).filter(|&j| !a[t][j].is_zero()).collect();
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for &j in &pivot_cols {
                    let s = &q * &a[t][j];
                    a[i][j] -= s;
                }
                if let Some(u) = u.as_deref_mut() {
                    let (head, tail) = u.split_at_mut(i);
                    let (ut, ui) = (&head[t], &mut tail[0]);
                    for (x, y) in ui.iter_mut().zip(ut) {
                        if !y.is_zero() {
                            *x -= &q * y;
                        }
                    }
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            // clear row t right of the pivot; column t is zero below t
            // whenever `clean` holds, so only row t changes in `a`
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    if !row[t].is_zero() {
                        let s = &q * &row[t];
                        row[j] -= s;
                    }
                }
                if let Some(v) = v.as_deref_mut() {
                    for row in v.iter_mut() {
                        if !row[t].is_zero() {
                            let s = &q * &row[t];
                            row[j] -= s;
                        }
                    }
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // move the smallest remaining entry of row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..m {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                swap_rows(a, u.as_deref_mut(), t, best.0);
                swap_cols(a, v.as_deref_mut(), t, best.1);
                continue;
            }
            if !a[t][t].abs().is_one() {
                let p = a[t][t].clone();
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&p)));
                if let Some(i) = bad {
                    add_row(a, u.as_deref_mut(), t, i);
                    continue;
                }
            }
            break;
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -std::mem::take(x);
            }
            if let Some(u) = u.as_deref_mut() {
                for x in u[t].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
        }
        t += 1;
    }
    t
}

fn min_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            if x.abs().is_one() {
                return Some((i, j));
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn swap_rows(a: &mut [Vec<BigInt>], u: Option<&mut Vec<Vec<BigInt>>>, i: usize, k: usize) {
    if i != k {
        a.swap(i, k);
        if let Some(u) = u {
            u.swap(i, k);
        }
    }
}

fn swap_cols(a: &mut [Vec<BigInt>], v: Option<&mut Vec<Vec<BigInt>>>, j: usize, k: usize) {
    if j != k {
        for row in a.iter_mut() {
            row.swap(j, k);
        }
        if let Some(v) = v {
            for row in v.iter_mut() {
                row.swap(j, k);
            }
        }
    }
}

/// row t += row i
fn add_row(a: &mut [Vec<BigInt>], u: Option<&mut Vec<Vec<BigInt>>>, t: usize, i: usize) {
    let src = a[i].clone();
    for (x, y) in a[t].iter_mut().zip(&src) {
        *x += y;
    }
    if let Some(u) = u {
        let src = u[i].clone();
        for (x, y) in u[t].iter_mut().zip(&src) {
            *x += y;
        }
    }
}
