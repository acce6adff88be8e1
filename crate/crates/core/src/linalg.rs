//! Dense Smith normal form over the integers and over fields, with the
//! transforming matrices and their inverses kept in step.

use num_traits::Zero;

use crate::coeff::{BaseRing, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(ring: &BaseRing, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &BaseRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn mul_vec(&self, ring: &BaseRing, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(
                    ring.zero(),
                    |acc, c| {
                        if v[c].is_zero() {
                            acc
                        } else {
                            acc.add(&self.get(r, c).mul(&v[c]))
                        }
                    },
                )
            })
            .collect()
    }

    pub fn mul(&self, ring: &BaseRing, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(ring, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c).add(&a.mul(b));
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    /// Rows `from..` as a new matrix.
    pub fn rows_from(&self, from: usize) -> Matrix {
        Matrix { rows: self.rows - from, cols: self.cols, data: self.data[from * self.cols..].to_vec() }
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &Scalar) {
        for k in 0..self.cols {
            let v = self.get(j, k);
            if !v.is_zero() {
                let s = self.get(i, k).add(&c.mul(v));
                self.set(i, k, s);
            }
        }
    }

    /// col_j += c * col_i
    fn add_col(&mut self, j: usize, i: usize, c: &Scalar) {
        for r in 0..self.rows {
            let v = self.get(r, i);
            if !v.is_zero() {
                let s = self.get(r, j).add(&c.mul(v));
                self.set(r, j, s);
            }
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for k in 0..self.cols {
                self.data.swap(i * self.cols + k, j * self.cols + k);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, i: usize, c: &Scalar) {
        for k in 0..self.cols {
            let s = self.get(i, k).mul(c);
            self.set(i, k, s);
        }
    }

    fn scale_col(&mut self, j: usize, c: &Scalar) {
        for r in 0..self.rows {
            let s = self.get(r, j).mul(c);
            self.set(r, j, s);
        }
    }
}

/// `u * a * v = d` with `d` diagonal, `d[i] | d[i+1]`, and `u`, `v`
/// invertible over the ring. Nonzero diagonal entries come first.
#[derive(Clone, Debug)]
pub(crate) struct Smith {
    pub diagonal: Vec<Scalar>,
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Some `x` with `a x = b`, or `None` when the system has no solution.
    pub fn solve(&self, ring: &BaseRing, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let c = self.u.mul_vec(ring, b);
        let mut y = vec![ring.zero(); self.v.rows];
        for (i, ci) in c.iter().enumerate() {
            if i < self.rank() {
                y[i] = ci.div_exact(&self.diagonal[i])?;
            } else if !ci.is_zero() {
                return None;
            }
        }
        Some(self.v.mul_vec(ring, &y))
    }
}

struct Reducer<'a> {
    ring: &'a BaseRing,
    d: Matrix,
    u: Matrix,
    u_inv: Matrix,
    v: Matrix,
    v_inv: Matrix,
}

impl Reducer<'_> {
    fn add_row(&mut self, i: usize, j: usize, c: &Scalar) {
        self.d.add_row(i, j, c);
        self.u.add_row(i, j, c);
        self.u_inv.add_col(j, i, &c.neg());
    }

    fn add_col(&mut self, j: usize, i: usize, c: &Scalar) {
        self.d.add_col(j, i, c);
        self.v.add_col(j, i, c);
        self.v_inv.add_row(i, j, &c.neg());
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.d.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.d.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn scale_row(&mut self, i: usize, unit: &Scalar) {
        let inv = unit.inverse().expect("unit");
        self.d.scale_row(i, unit);
        self.u.scale_row(i, unit);
        self.u_inv.scale_col(i, &inv);
    }

    /// Position of a nonzero entry of least magnitude in the block `t.., t..`.
    fn smallest(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), num_bigint::BigInt)> = None;
        for r in t..self.d.rows {
            for c in t..self.d.cols {
                let m = self.d.get(r, c).magnitude();
                if m.is_zero() {
                    continue;
                }
                if best.as_ref().is_none_or(|(_, b)| &m < b) {
                    let one = num_traits::One::is_one(&m);
                    best = Some(((r, c), m));
                    if one {
                        return best.map(|(p, _)| p);
                    }
                }
            }
        }
        best.map(|(p, _)| p)
    }

    /// Clears row and column `t` outside the pivot; returns false if a
    /// smaller remainder appeared and was moved into the pivot.
    fn clear_cross(&mut self, t: usize) -> bool {
        let pivot = self.d.get(t, t).clone();
        for r in t + 1..self.d.rows {
            let e = self.d.get(r, t).clone();
            if !e.is_zero() {
                let q = e.div_round(&pivot);
                self.add_row(r, t, &q.neg());
                if !self.d.get(r, t).is_zero() {
                    self.swap_rows(r, t);
                    return false;
                }
            }
        }
        for c in t + 1..self.d.cols {
            let e = self.d.get(t, c).clone();
            if !e.is_zero() {
                let q = e.div_round(&pivot);
                self.add_col(c, t, &q.neg());
                if !self.d.get(t, c).is_zero() {
                    self.swap_cols(c, t);
                    return false;
                }
            }
        }
        true
    }

    /// Row index of an entry in the block `t+1.., t+1..` not divisible by the pivot.
    fn indivisible(&self, t: usize) -> Option<usize> {
        let pivot = self.d.get(t, t);
        for r in t + 1..self.d.rows {
            for c in t + 1..self.d.cols {
                let e = self.d.get(r, c);
                if !e.is_zero() && e.div_exact(pivot).is_none() {
                    return Some(r);
                }
            }
        }
        None
    }
}

pub(crate) fn smith(ring: &BaseRing, a: &Matrix) -> Smith {
    let mut red = Reducer {
        ring,
        d: a.clone(),
        u: Matrix::identity(ring, a.rows),
        u_inv: Matrix::identity(ring, a.rows),
        v: Matrix::identity(ring, a.cols),
        v_inv: Matrix::identity(ring, a.cols),
    };
    let mut t = 0;
    while t < a.rows.min(a.cols) {
        let Some((r, c)) = red.smallest(t) else { break };
        red.swap_rows(t, r);
        red.swap_cols(t, c);
        loop {
            if !red.clear_cross(t) {
                continue;
            }
            match red.indivisible(t) {
                Some(r) => {
                    let one = red.ring.one();
                    red.add_row(t, r, &one);
                }
                None => break,
            }
        }
        let pivot = red.d.get(t, t).clone();
        let normal = match &pivot {
            Scalar::Int(_) => pivot.abs(),
            _ => red.ring.one(),
        };
        if normal != pivot {
            let unit = normal.div_exact(&pivot).expect("associate");
            red.scale_row(t, &unit);
        }
        t += 1;
    }
    let diagonal = (0..t).map(|i| red.d.get(i, i).clone()).collect();
    Smith { diagonal, u: red.u, u_inv: red.u_inv, v: red.v, v_inv: red.v_inv }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn from_rows(ring: &BaseRing, rows: &[&[i64]]) -> Matrix {
        let mut m = Matrix::zeros(ring, rows.len(), rows.first().map_or(0, |r| r.len()));
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, ring.from_i64(v));
            }
        }
        m
    }

    fn check(ring: &BaseRing, a: &Matrix) -> Smith {
        let s = smith(ring, a);
        let d = s.u.mul(ring, a).mul(ring, &s.v);
        for i in 0..d.rows {
            for j in 0..d.cols {
                let expected = if i == j && i < s.rank() { s.diagonal[i].clone() } else { ring.zero() };
                assert_eq!(d.get(i, j), &expected);
            }
        }
        assert_eq!(s.u.mul(ring, &s.u_inv), Matrix::identity(ring, a.rows));
        assert_eq!(s.v.mul(ring, &s.v_inv), Matrix::identity(ring, a.cols));
        for w in s.diagonal.windows(2) {
            assert!(w[1].div_exact(&w[0]).is_some());
        }
        s
    }

    #[test]
    fn integer_invariant_factors() {
        let z = BaseRing::Integers;
        let s = check(&z, &from_rows(&z, &[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(s.diagonal, vec![z.from_i64(2), z.from_i64(6), z.from_i64(12)]);
    }

    #[test]
    fn divisibility_is_enforced() {
        let z = BaseRing::Integers;
        let s = check(&z, &from_rows(&z, &[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal, vec![z.from_i64(1), z.from_i64(6)]);
    }

    #[test]
    fn solve_integer_system() {
        let z = BaseRing::Integers;
        let s = smith(&z, &from_rows(&z, &[&[2]]));
        assert_eq!(s.solve(&z, &[z.from_i64(4)]), Some(vec![z.from_i64(2)]));
        assert_eq!(s.solve(&z, &[z.from_i64(3)]), None);
    }

    #[test]
    fn empty_matrices() {
        let z = BaseRing::Integers;
        let s = check(&z, &Matrix::zeros(&z, 0, 3));
        assert_eq!(s.rank(), 0);
        assert_eq!(s.solve(&z, &[]), Some(vec![z.zero(); 3]));
    }

    proptest! {
        #[test]
        fn smith_factorization_holds(
            rows in 0usize..5,
            cols in 0usize..5,
            entries in proptest::collection::vec(-6i64..7, 25),
            p in prop_oneof![Just(0u32), Just(2), Just(3), Just(7)],
        ) {
            let ring = if p == 0 { BaseRing::Integers } else { BaseRing::PrimeField(p) };
            let mut m = Matrix::zeros(&ring, rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m.set(i, j, ring.from_i64(entries[i * 5 + j]));
                }
            }
            let s = check(&ring, &m);
            let x: Vec<Scalar> = (0..cols).map(|j| ring.from_i64(entries[(j * 3) % 25])).collect();
            let b = m.mul_vec(&ring, &x);
            let y = s.solve(&ring, &b).expect("consistent system");
            prop_assert_eq!(m.mul_vec(&ring, &y), b);
        }
    }
}
