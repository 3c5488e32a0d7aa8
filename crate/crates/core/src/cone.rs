//! The cone of nonnegative kernel elements and its extreme rays.
//!
//! The kernel is parametrized by its lattice basis, `x = K^T c`, so the cone
//! becomes `{c : (K^T c)_j >= 0 for all j}`. Its extreme rays are found by the
//! double description method and mapped back to domain coordinates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::graph::DecoratedDualGraph;
use crate::lattice::lattice_summary;
use crate::matrix::{dot, primitive, IntegerMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDescription {
    pub ambient_dim: usize,
    pub kernel_dim: usize,
    /// Primitive integer generators, sorted lexicographically.
    pub extreme_rays: Vec<Vec<BigInt>>,
    pub is_strictly_convex: bool,
    /// The rays span the real kernel.
    pub is_top_dimensional_in_k: bool,
    /// The cone contains a point with every coordinate strictly positive.
    pub meets_positive_orthant: bool,
}

pub fn sigma_cone(g: &DecoratedDualGraph) -> ConeDescription {
    let summary = lattice_summary(g);
    cone_of_kernel(&summary.kernel_basis)
}

/// Cone of nonnegative vectors in the row span of `kernel`, whose rows must
/// be linearly independent.
pub fn cone_of_kernel(kernel: &IntegerMatrix) -> ConeDescription {
    let k = kernel.rows();
    let n = kernel.cols();
    let halfspaces: Vec<Vec<BigInt>> = (0..n).map(|j| kernel.column(j)).collect();
    let rays_c = if k == 0 { Vec::new() } else { double_description(&halfspaces, k) };

    let mut rays: Vec<Vec<BigInt>> = rays_c
        .iter()
        .map(|c| primitive(&kernel.transpose().mul_vec(c)))
        .collect();
    rays.sort();
    rays.dedup();

    let rank = IntegerMatrix::from_rows(n, rays.clone()).rank();
    let meets_positive_orthant = (0..n).all(|j| rays.iter().any(|r| r[j].is_positive()));
    ConeDescription {
        ambient_dim: n,
        kernel_dim: k,
        extreme_rays: rays,
        // The cone lies in the nonnegative orthant, which contains no line.
        is_strictly_convex: true,
        is_top_dimensional_in_k: rank == k,
        meets_positive_orthant,
    }
}

/// Extreme rays of the pointed cone `{c in R^k : a.c >= 0 for a in rows}`,
/// where the rows have rank `k`.
pub fn double_description(rows: &[Vec<BigInt>], k: usize) -> Vec<Vec<BigInt>> {
    // Greedy choice of k independent rows for the initial simplicial cone.
    let mut chosen: Vec<usize> = Vec::new();
    for (j, _) in rows.iter().enumerate() {
        let mut trial: Vec<Vec<BigInt>> = chosen.iter().map(|&c| rows[c].clone()).collect();
        trial.push(rows[j].clone());
        if IntegerMatrix::from_rows(k, trial).rank() == chosen.len() + 1 {
            chosen.push(j);
            if chosen.len() == k {
                break;
            }
        }
    }
    assert_eq!(chosen.len(), k, "halfspace normals must have full rank");

    let base: Vec<Vec<BigInt>> = chosen.iter().map(|&c| rows[c].clone()).collect();
    let mut rays: Vec<Vec<BigInt>> = inverse_columns(&base);
    let mut processed: Vec<usize> = chosen.clone();

    for (j, a) in rows.iter().enumerate() {
        if chosen.contains(&j) {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|r| dot(a, r)).collect();
        let mut next: Vec<Vec<BigInt>> = Vec::new();
        for (r, v) in rays.iter().zip(&values) {
            if !v.is_negative() {
                next.push(r.clone());
            }
        }
        for (p, vp) in rays.iter().zip(&values) {
            if !vp.is_positive() {
                continue;
            }
            for (m, vm) in rays.iter().zip(&values) {
                if !vm.is_negative() || !adjacent(rows, &processed, p, m, k) {
                    continue;
                }
                let combined: Vec<BigInt> = p.iter().zip(m).map(|(x, y)| vp * y - vm * x).collect();
                next.push(primitive(&combined));
            }
        }
        next.sort();
        next.dedup();
        rays = next;
        processed.push(j);
    }
    rays
}

/// Algebraic adjacency: the constraints tight at both rays have rank `k - 2`.
fn adjacent(rows: &[Vec<BigInt>], processed: &[usize], p: &[BigInt], m: &[BigInt], k: usize) -> bool {
    let tight: Vec<Vec<BigInt>> = processed
        .iter()
        .map(|&j| &rows[j])
        .filter(|a| dot(a, p).is_zero() && dot(a, m).is_zero())
        .cloned()
        .collect();
    k >= 2 && tight.len() >= k - 2 && IntegerMatrix::from_rows(k, tight).rank() == k - 2
}

/// Columns of the inverse of a square matrix, each scaled to a primitive
/// integer vector.
fn inverse_columns(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let k = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            r.extend((0..k).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..k {
        let p = (c..k).find(|&r| !m[r][c].is_zero()).expect("invertible");
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &pivot;
        }
        let pivot_row = m[c].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    (0..k)
        .map(|j| {
            let col: Vec<BigRational> = (0..k).map(|i| m[i][k + j].clone()).collect();
            let denominators = col.iter().fold(BigInt::one(), |l, x| num_integer::lcm(l, x.denom().clone()));
            let ints: Vec<BigInt> = col.iter().map(|x| (x * &denominators).to_integer()).collect();
            primitive(&ints)
        })
        .collect()
}
