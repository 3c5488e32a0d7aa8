//! Exact rational feasibility of `A y = b, y >= 0`.
//!
//! Phase one of the simplex method on a dense tableau with Bland's rule.
//! Infeasibility is returned with a Farkas vector `u` satisfying
//! `u^T A >= 0` and `u^T b < 0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<BigRational>),
    Infeasible(Vec<BigRational>),
}

pub fn nonnegative_solution(a: &[Vec<BigRational>], b: &[BigRational]) -> Feasibility {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    assert_eq!(b.len(), m, "right-hand side length mismatch");
    let width = n + m + 1;
    let rhs = width - 1;

    let mut flipped = vec![false; m];
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for r in 0..m {
        assert_eq!(a[r].len(), n, "ragged constraint matrix");
        flipped[r] = b[r].is_negative();
        let sign = |x: &BigRational| if flipped[r] { -x } else { x.clone() };
        let mut row: Vec<BigRational> = a[r].iter().map(sign).collect();
        row.extend((0..m).map(|k| if k == r { one() } else { BigRational::zero() }));
        row.push(sign(&b[r]));
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs of the phase-one objective, the sum of artificials.
    let mut cost = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[rhs] -= &row[rhs];
    }

    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<usize> = None;
        for r in 0..m {
            if !t[r][enter].is_positive() {
                continue;
            }
            let ratio = &t[r][rhs] / &t[r][enter];
            leave = match leave {
                None => Some(r),
                Some(l) => {
                    let best = &t[l][rhs] / &t[l][enter];
                    if ratio < best || (ratio == best && basis[r] < basis[l]) {
                        Some(r)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        // The phase-one objective is bounded below by zero.
        let leave = leave.expect("phase one is bounded");
        pivot(&mut t, &mut cost, leave, enter);
        basis[leave] = enter;
    }

    let artificial = |j: usize| j >= n;
    let objective: BigRational = (0..m).filter(|&r| artificial(basis[r])).map(|r| t[r][rhs].clone()).sum();
    if objective.is_zero() {
        let mut y = vec![BigRational::zero(); n];
        for r in 0..m {
            if basis[r] < n {
                y[basis[r]] = t[r][rhs].clone();
            }
        }
        return Feasibility::Feasible(y);
    }

    // Dual values of the final basis, read from the artificial columns.
    let u = (0..m)
        .map(|i| {
            let pi: BigRational = (0..m).filter(|&r| artificial(basis[r])).map(|r| t[r][n + i].clone()).sum();
            if flipped[i] {
                pi
            } else {
                -pi
            }
        })
        .collect();
    Feasibility::Infeasible(u)
}

fn pivot(t: &mut [Vec<BigRational>], cost: &mut [BigRational], r: usize, c: usize) {
    let p = t[r][c].clone();
    for x in t[r].iter_mut() {
        *x /= &p;
    }
    let pivot_row = t[r].clone();
    for (k, row) in t.iter_mut().enumerate() {
        if k == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (x, y) in row.iter_mut().zip(&pivot_row) {
            *x -= &f * y;
        }
    }
    if !cost[c].is_zero() {
        let f = cost[c].clone();
        for (x, y) in cost.iter_mut().zip(&pivot_row) {
            *x -= &f * y;
        }
    }
}

fn one() -> BigRational {
    BigRational::from_integer(BigInt::from(1))
}

/// `u^T A`.
pub fn left_product(u: &[BigRational], a: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = a.first().map_or(0, Vec::len);
    (0..n).map(|j| u.iter().zip(a).map(|(ui, row)| ui * &row[j]).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect()
    }

    fn qv(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    fn check(a: &[Vec<BigRational>], b: &[BigRational]) -> bool {
        match nonnegative_solution(a, b) {
            Feasibility::Feasible(y) => {
                assert!(y.iter().all(|x| !x.is_negative()));
                assert_eq!(left_product_t(a, &y), b);
                true
            }
            Feasibility::Infeasible(u) => {
                assert!(left_product(&u, a).iter().all(|x| !x.is_negative()));
                let ub: BigRational = u.iter().zip(b).map(|(x, y)| x * y).sum();
                assert!(ub.is_negative());
                false
            }
        }
    }

    fn left_product_t(a: &[Vec<BigRational>], y: &[BigRational]) -> Vec<BigRational> {
        a.iter().map(|row| row.iter().zip(y).map(|(x, z)| x * z).sum()).collect()
    }

    #[test]
    fn simple_feasible() {
        assert!(check(&q(&[&[1, 1], &[1, -1]]), &qv(&[4, 2])));
    }

    #[test]
    fn simple_infeasible() {
        assert!(!check(&q(&[&[1, 1]]), &qv(&[-1])));
        assert!(!check(&q(&[&[1, -1], &[1, -1]]), &qv(&[1, 2])));
    }

    #[test]
    fn degenerate_rows() {
        assert!(check(&q(&[&[0, 0], &[1, 2]]), &qv(&[0, 3])));
        assert!(!check(&q(&[&[0, 0]]), &qv(&[5])));
    }

    #[test]
    fn empty_system() {
        assert_eq!(nonnegative_solution(&[], &[]), Feasibility::Feasible(vec![]));
    }
}
