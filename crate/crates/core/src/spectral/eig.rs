//! Per-point eigendecomposition of the (normal) symbol matrix.

use num_complex::Complex64;

use crate::symbol::CMatrix;

/// Eigenvalues and an orthonormal eigenbasis of a unitary matrix.
///
/// For a normal matrix the Schur form is diagonal, so the Schur vectors are
/// eigenvectors; `vectors.column(j)` belongs to `values[j]`.
pub(crate) struct PointEigen {
    pub values: Vec<Complex64>,
    pub vectors: CMatrix,
}

pub(crate) fn eigen(u: &CMatrix) -> PointEigen {
    let (q, t) = u.clone().schur().unpack();
    let values = (0..t.nrows()).map(|j| t[(j, j)]).collect();
    PointEigen { values, vectors: q }
}

pub(crate) fn eigenvalues(u: &CMatrix) -> Vec<Complex64> {
    eigen(u).values
}

/// Groups values whose single-linkage distance is below `tol`.
///
/// Clusters are returned in order of their first member.
pub(crate) fn cluster(values: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() < tol {
                let (a, b) = (root(&mut label, i), root(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index_of_root = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut label, i);
        if index_of_root[r] == usize::MAX {
            index_of_root[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index_of_root[r]].push(i);
    }
    groups
}

/// Assignment of `slots` to `targets` (equal lengths, at most 16) minimizing
/// the summed cost, by dynamic programming over target subsets.
///
/// Returns `assignment[slot] = target`.
pub(crate) fn min_cost_assignment(cost: impl Fn(usize, usize) -> f64, n: usize) -> Vec<usize> {
    assert!(n <= 16, "assignment size {n} too large");
    let full = 1usize << n;
    let mut best = vec![f64::INFINITY; full];
    let mut choice = vec![usize::MAX; full];
    best[0] = 0.0;
    for mask in 0..full {
        let slot = mask.count_ones() as usize;
        if slot >= n || !best[mask].is_finite() {
            continue;
        }
        for target in 0..n {
            if mask & (1 << target) != 0 {
                continue;
            }
            let next = mask | (1 << target);
            let c = best[mask] + cost(slot, target);
            if c < best[next] {
                best[next] = c;
                choice[next] = target;
            }
        }
    }
    let mut assignment = vec![0; n];
    let mut mask = full - 1;
    for slot in (0..n).rev() {
        let target = choice[mask];
        assignment[slot] = target;
        mask ^= 1 << target;
    }
    assignment
}
