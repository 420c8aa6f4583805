//! Dense matrices over [`Scalar`] and exact Gaussian elimination.

use std::fmt;

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution {
    /// A particular solution (free unknowns set to zero) and the indices of free unknowns.
    Solved {
        x: Vec<Scalar>,
        free: Vec<usize>,
    },
    Inconsistent,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn diag(d: &[Scalar]) -> Self {
        let mut m = Matrix::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_exact(&self) -> bool {
        self.data.iter().all(Scalar::is_exact)
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix shape");
        let mut m = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = m.get(i, j) + &(a * b);
                        m.set(i, j, v);
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "vector length");
        (0..self.rows).map(|i| (0..self.cols).fold(Scalar::zero(), |acc, j| &acc + &(self.get(i, j) * &v[j]))).collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.rows, v.len(), "vector length");
        (0..self.cols).map(|j| (0..self.rows).fold(Scalar::zero(), |acc, i| &acc + &(&v[i] * self.get(i, j)))).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn conj(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::conj).collect() }
    }

    pub fn adjoint(&self) -> Matrix {
        self.conj().transpose()
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn to_float(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::to_float).collect() }
    }

    /// Block-diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// First nonzero entry (row-major), used as a normalization pivot.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        self.data.iter().position(|a| !a.is_zero()).map(|k| (k / self.cols, k % self.cols))
    }

    /// `self = c * other` for some nonzero scalar `c`; returns `c`.
    pub fn proportional_to(&self, other: &Matrix) -> Option<Scalar> {
        if self.rows != other.rows || self.cols != other.cols {
            return None;
        }
        let (i, j) = other.first_nonzero()?;
        let c = self.get(i, j) / other.get(i, j);
        if c.is_zero() {
            return None;
        }
        self.data.iter().zip(&other.data).all(|(a, b)| *a == &c * b).then_some(c)
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a.to_c64() - b.to_c64()).norm()).fold(0.0, f64::max)
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let piv = pick_pivot(&a, col, col)?;
            a.swap_rows(col, piv);
            inv.swap_rows(col, piv);
            let p = a.get(col, col).inv()?;
            for j in 0..n {
                a.set(col, j, a.get(col, j) * &p);
                inv.set(col, j, inv.get(col, j) * &p);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    a.set(r, j, a.get(r, j) - &(&f * a.get(col, j)));
                    inv.set(r, j, inv.get(r, j) - &(&f * inv.get(col, j)));
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Solves `self x = b` by row reduction; free unknowns are set to zero.
    pub fn solve(&self, b: &[Scalar]) -> LinearSolution {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for (i, bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, bi.clone());
        }
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = pick_pivot(&aug, col, r) else { continue };
            aug.swap_rows(r, piv);
            let p = aug.get(r, col).inv().expect("nonzero pivot");
            for j in col..=self.cols {
                aug.set(r, j, aug.get(r, j) * &p);
            }
            for i in 0..self.rows {
                if i == r || aug.get(i, col).is_zero() {
                    continue;
                }
                let f = aug.get(i, col).clone();
                for j in col..=self.cols {
                    aug.set(i, j, aug.get(i, j) - &(&f * aug.get(r, j)));
                }
            }
            pivots.push(col);
            r += 1;
        }
        if (r..self.rows).any(|i| !aug.get(i, self.cols).is_zero()) {
            return LinearSolution::Inconsistent;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(i, self.cols).clone();
        }
        let free = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        LinearSolution::Solved { x, free }
    }
}

/// Exact backend: the first nonzero entry; floats: the largest modulus.
fn pick_pivot(a: &Matrix, col: usize, from: usize) -> Option<usize> {
    let rows = from..a.rows;
    if a.is_exact() {
        return rows.into_iter().find(|&r| !a.get(r, col).is_zero());
    }
    rows.into_iter()
        .filter(|&r| !a.get(r, col).is_zero())
        .max_by(|&x, &y| a.get(x, col).to_c64().norm().total_cmp(&a.get(y, col).to_c64().norm()))
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&k| Scalar::from_i64(k)).collect()).collect())
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(3));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solves_overdetermined_consistent_systems() {
        let a = m(&[&[1, 1], &[1, -1], &[2, 0]]);
        let b: Vec<Scalar> = [3, 1, 4].iter().map(|&k| Scalar::from_i64(k)).collect();
        match a.solve(&b) {
            LinearSolution::Solved { x, free } => {
                assert_eq!(x, vec![Scalar::from_i64(2), Scalar::from_i64(1)]);
                assert!(free.is_empty());
            }
            LinearSolution::Inconsistent => panic!(),
        }
        let b2: Vec<Scalar> = [3, 1, 5].iter().map(|&k| Scalar::from_i64(k)).collect();
        assert_eq!(a.solve(&b2), LinearSolution::Inconsistent);
    }

    #[test]
    fn proportionality() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.scale(&Scalar::i()).proportional_to(&a), Some(Scalar::i()));
        assert!(m(&[&[1, 2], &[3, 5]]).proportional_to(&a).is_none());
    }
}
