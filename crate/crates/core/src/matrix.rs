//! Dense integer matrices over arbitrary-precision integers, with Smith and
//! Hermite normal forms and integer kernels.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row vectors; every row must have length `cols`.
    pub fn from_rows<R, T>(cols: usize, rows: R) -> Self
    where
        R: IntoIterator<Item = Vec<T>>,
        T: Into<BigInt>,
    {
        let mut data = Vec::new();
        let mut n = 0;
        for row in rows {
            assert_eq!(row.len(), cols, "row length mismatch");
            data.extend(row.into_iter().map(Into::into));
            n += 1;
        }
        IntegerMatrix { rows: n, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| r.to_vec()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut p = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    p[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        p
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, x.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += q * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * q;
            self[(dst, j)] += v;
        }
    }

    /// `col[dst] += q * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * q;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    /// Rank over the rationals, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..a.cols {
            let Some(p) = (rank..a.rows).find(|&i| !a[(i, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(rank, p);
            for i in rank + 1..a.rows {
                for j in col + 1..a.cols {
                    let v = (&a[(rank, col)] * &a[(i, j)] - &a[(i, col)] * &a[(rank, j)]) / &prev;
                    a[(i, j)] = v;
                }
                a[(i, col)] = BigInt::zero();
            }
            prev = a[(rank, col)].clone();
            rank += 1;
            if rank == a.rows {
                break;
            }
        }
        rank
    }

    /// Determinant of a square matrix (Bareiss).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        if n == 0 {
            BigInt::one()
        } else {
            sign * &a[(n - 1, n - 1)]
        }
    }

    /// Plain row-major text dump, one row per line.
    pub fn dump(&self) -> String {
        let mut out = format!("{} x {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    pub rank: usize,
}

impl SmithNormalForm {
    /// Nonzero diagonal entries, all positive.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Diagonal entries exceeding one: the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_one()).collect()
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithNormalForm {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntegerMatrix::identity(r);
    let mut v = IntegerMatrix::identity(c);
    let mut t = 0;
    'outer: while t < r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &a[(i, j)];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'outer;
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, t)] / &a[(t, t)]);
                a.add_row(i, t, &q);
                u.add_row(i, t, &q);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(t, j)] / &a[(t, t)]);
                a.add_col(j, t, &q);
                v.add_col(j, t, &q);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let pivot = a[(t, t)].clone();
            let offending = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    a.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithNormalForm { u, d: a, v, rank: t }
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `m`.
///
/// Returns the nonzero rows: echelon form with positive pivots and the
/// entries above each pivot reduced into `[0, pivot)`. Two generating sets
/// span the same lattice exactly when their Hermite forms are equal.
pub fn hermite_normal_form(m: &IntegerMatrix) -> IntegerMatrix {
    hermite_with_pivots(m).0
}

/// As [`hermite_normal_form`], also returning the pivot column of each row.
pub fn hermite_with_pivots(m: &IntegerMatrix) -> (IntegerMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut p = 0;
    for col in 0..a.cols {
        if p == a.rows {
            break;
        }
        loop {
            let best = (p..a.rows)
                .filter(|&i| !a[(i, col)].is_zero())
                .min_by(|&x, &y| a[(x, col)].abs().cmp(&a[(y, col)].abs()));
            let Some(b) = best else { break };
            a.swap_rows(p, b);
            let mut clean = true;
            for i in p + 1..a.rows {
                if a[(i, col)].is_zero() {
                    continue;
                }
                let q = -a[(i, col)].div_floor(&a[(p, col)]);
                a.add_row(i, p, &q);
                clean &= a[(i, col)].is_zero();
            }
            if clean {
                break;
            }
        }
        if a[(p, col)].is_zero() {
            continue;
        }
        if a[(p, col)].is_negative() {
            a.negate_row(p);
        }
        for i in 0..p {
            let q = -a[(i, col)].div_floor(&a[(p, col)]);
            if !q.is_zero() {
                a.add_row(i, p, &q);
            }
        }
        pivots.push(col);
        p += 1;
    }
    let cols = a.cols;
    let rows = a.row_vecs().into_iter().take(p);
    (IntegerMatrix::from_rows(cols, rows), pivots)
}

/// Basis of `{x in Z^cols : m x = 0}`, as the rows of the returned matrix,
/// in Hermite normal form.
pub fn integer_kernel(m: &IntegerMatrix) -> IntegerMatrix {
    let snf = smith_normal_form(m);
    let basis = (snf.rank..m.cols).map(|j| snf.v.column(j));
    hermite_normal_form(&IntegerMatrix::from_rows(m.cols, basis))
}

/// Index of the lattice spanned by the rows of `sub` inside the lattice
/// spanned by the rows of `sup`, when both have the same rank and the first
/// is contained in the second. Returns `None` otherwise.
pub fn lattice_index(sub: &IntegerMatrix, sup: &IntegerMatrix) -> Option<BigInt> {
    let (hs, ps) = hermite_with_pivots(sub);
    let (hp, pp) = hermite_with_pivots(sup);
    if ps != pp || !contains_lattice(&hp, &hs) {
        return None;
    }
    let product = |h: &IntegerMatrix, p: &[usize]| -> BigInt { p.iter().enumerate().map(|(i, &j)| h[(i, j)].clone()).product() };
    let (num, den) = (product(&hs, &ps), product(&hp, &pp));
    let (q, rem) = num.div_rem(&den);
    rem.is_zero().then_some(q)
}

/// Whether every row of `rows` lies in the lattice with Hermite basis `hnf`.
pub fn contains_lattice(hnf: &IntegerMatrix, rows: &IntegerMatrix) -> bool {
    let (h, pivots) = hermite_with_pivots(hnf);
    (0..rows.rows).all(|r| {
        let mut x = rows.row(r).to_vec();
        for (i, &col) in pivots.iter().enumerate() {
            let (q, rem) = x[col].div_rem(&h[(i, col)]);
            if !rem.is_zero() {
                return false;
            }
            for j in 0..x.len() {
                x[j] -= &q * &h[(i, j)];
            }
        }
        x.iter().all(Zero::is_zero)
    })
}

/// Divides a vector by the gcd of its entries.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        v.to_vec()
    } else {
        v.iter().map(|x| x / &g).collect()
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntegerMatrix) -> SmithNormalForm {
        let snf = smith_normal_form(m);
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d);
        assert!(snf.u.determinant().abs().is_one());
        assert!(snf.v.determinant().abs().is_one());
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                if i != j {
                    assert!(snf.d[(i, j)].is_zero());
                }
            }
        }
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        snf
    }

    #[test]
    fn identity_is_its_own_smith_form() {
        let snf = check_snf(&IntegerMatrix::identity(4));
        assert_eq!(snf.u, IntegerMatrix::identity(4));
        assert_eq!(snf.d, IntegerMatrix::identity(4));
        assert_eq!(snf.v, IntegerMatrix::identity(4));
    }

    #[test]
    fn one_by_one() {
        let snf = check_snf(&IntegerMatrix::from_i64(&[&[-6]]));
        assert_eq!(snf.diagonal(), vec![BigInt::from(6)]);
    }

    #[test]
    fn divisibility_chain_is_enforced() {
        let snf = check_snf(&IntegerMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        let snf = check_snf(&IntegerMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn empty_and_zero_matrices() {
        let snf = check_snf(&IntegerMatrix::zeros(0, 3));
        assert_eq!(snf.rank, 0);
        let snf = check_snf(&IntegerMatrix::zeros(2, 3));
        assert_eq!(snf.rank, 0);
        assert_eq!(integer_kernel(&IntegerMatrix::zeros(2, 3)), IntegerMatrix::identity(3));
    }

    #[test]
    fn hermite_form_is_canonical() {
        let a = IntegerMatrix::from_i64(&[&[2, 4], &[1, 1]]);
        let b = IntegerMatrix::from_i64(&[&[1, 3], &[3, 5], &[0, 2]]);
        assert_eq!(hermite_normal_form(&a), hermite_normal_form(&b));
        assert_eq!(hermite_normal_form(&a), IntegerMatrix::from_i64(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn kernel_of_a_row() {
        let k = integer_kernel(&IntegerMatrix::from_i64(&[&[2, -1, 0]]));
        assert_eq!(k, IntegerMatrix::from_i64(&[&[1, 2, 0], &[0, 0, 1]]));
    }

    #[test]
    fn index_of_sublattice() {
        let sub = IntegerMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let sup = IntegerMatrix::identity(2);
        assert_eq!(lattice_index(&sub, &sup), Some(BigInt::from(6)));
        assert_eq!(lattice_index(&sup, &sub), None);
    }

    #[test]
    fn rank_and_determinant() {
        let m = IntegerMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(m.rank(), 2);
        assert!(m.determinant().is_zero());
        let m = IntegerMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.determinant(), BigInt::from(-1));
    }

    #[test]
    fn dump_is_row_major() {
        let m = IntegerMatrix::from_i64(&[&[1, -2], &[3, 4]]);
        assert_eq!(m.dump(), "2 x 2\n1 -2\n3 4\n");
    }
}
