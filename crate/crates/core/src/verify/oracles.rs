//! Independent reference computations, written without the nerve, simplex
//! or coefficient machinery they are used to check.

use crate::exactalg::{IntComplex, Matrix, Orientation, Z};
use crate::fincat::{FinCat, MorId};

/// Normalized bar cochain complex of a finite group with trivial ℤ
/// coefficients, from its multiplication table (element 0 is the unit).
pub fn bar_complex(table: &[Vec<usize>], top: usize) -> IntComplex<Z> {
    let g = table.len();
    let tuples = |n: usize| -> Vec<Vec<usize>> {
        (0..n).fold(vec![vec![]], |acc, _| {
            acc.into_iter().flat_map(|t| (1..g).map(move |x| [t.clone(), vec![x]].concat())).collect()
        })
    };
    let levels: Vec<Vec<Vec<usize>>> = (0..=top).map(tuples).collect();
    let diffs = (0..top)
        .map(|n| {
            let (src, dst) = (&levels[n], &levels[n + 1]);
            let mut dense = vec![vec![0i64; src.len()]; dst.len()];
            for (r, x) in dst.iter().enumerate() {
                let mut add = |face: Vec<usize>, sign: i64| {
                    if face.contains(&0) {
                        return;
                    }
                    let c = src.iter().position(|y| *y == face).unwrap();
                    dense[r][c] += sign;
                };
                add(x[1..].to_vec(), 1);
                for i in 1..=n {
                    let mut f = x[..i - 1].to_vec();
                    f.push(table[x[i - 1]][x[i]]);
                    f.extend_from_slice(&x[i + 1..]);
                    add(f, if i % 2 == 1 { -1 } else { 1 });
                }
                add(x[..n].to_vec(), if n % 2 == 0 { -1 } else { 1 });
            }
            let flat: Vec<i64> = dense.concat();
            Matrix::from_i64_shaped(dst.len(), src.len(), &flat)
        })
        .collect();
    IntComplex::new(Orientation::Cochain, levels.iter().map(Vec::len).collect(), diffs).unwrap()
}

pub fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

/// Simplicial cochains on the order complex of a finite poset given by its
/// strict order relation.
pub fn order_complex(n_obj: usize, less: &[(usize, usize)], top: usize) -> IntComplex<Z> {
    let lt = |a: usize, b: usize| less.contains(&(a, b));
    let mut levels: Vec<Vec<Vec<usize>>> = vec![(0..n_obj).map(|x| vec![x]).collect()];
    for n in 1..=top {
        let next = levels[n - 1]
            .iter()
            .flat_map(|c| (0..n_obj).filter(|&y| lt(*c.last().unwrap(), y)).map(move |y| [c.clone(), vec![y]].concat()))
            .collect();
        levels.push(next);
    }
    let diffs = (0..top)
        .map(|n| {
            let (src, dst) = (&levels[n], &levels[n + 1]);
            let mut flat = vec![0i64; src.len() * dst.len()];
            for (r, x) in dst.iter().enumerate() {
                for i in 0..x.len() {
                    let mut f = x.clone();
                    f.remove(i);
                    let c = src.iter().position(|y| *y == f).unwrap();
                    flat[r * src.len() + c] += if i % 2 == 1 { -1 } else { 1 };
                }
            }
            Matrix::from_i64_shaped(dst.len(), src.len(), &flat)
        })
        .collect();
    IntComplex::new(Orientation::Cochain, levels.iter().map(Vec::len).collect(), diffs).unwrap()
}


/// Order complex of a finite poset category (strict relation = non-identity arrows).
pub fn poset_order_complex(cat: &FinCat, top: usize) -> IntComplex<Z> {
    let less: Vec<(usize, usize)> =
        cat.morphism_ids().filter(|&m| !cat.is_identity(m)).map(|m| (cat.src(m).0, cat.dst(m).0)).collect();
    order_complex(cat.num_objects(), &less, top)
}

/// Number of chains of `n` composable arrows, counted by direct recursion
/// over the morphism list.
pub fn count_chains(cat: &FinCat, n: usize) -> usize {
    if n == 0 {
        return cat.num_objects();
    }
    // ends[k][x] = number of k-chains whose last arrow ends at x
    let mut ends: Vec<usize> = vec![1; cat.num_objects()];
    for _ in 0..n {
        let mut next = vec![0; cat.num_objects()];
        for m in (0..cat.num_morphisms()).map(MorId) {
            next[cat.dst(m).0] += ends[cat.src(m).0];
        }
        ends = next;
    }
    ends.iter().sum()
}
