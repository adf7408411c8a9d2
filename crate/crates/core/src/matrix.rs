//! Dense complex matrices and spinors over a [`Scalar`] type, with the
//! small amount of linear algebra the engine needs: products, Kronecker
//! products, Gaussian elimination for rank/solve, and linear-system
//! solving with exact consistency checks.

use crate::error::CcksError;
use crate::scalar::Scalar;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense rows×cols matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix<T: Scalar> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

/// A spinor is a plain component vector of dimension 2^m.
pub type Spinor<T> = Vec<T>;

impl<T: Scalar> fmt::Debug for CMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{}, ", self.at(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        assert!(rows.iter().all(|row| row.len() == c));
        CMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut T {
        &mut self.data[r * self.cols + c]
    }

    pub fn scale(&self, s: &T) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn trace(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let mut t = T::zero();
        for i in 0..self.rows {
            t = t + self.at(i, i).clone();
        }
        t
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *m.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        m
    }

    /// Kronecker product, `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.at(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = other.at(r2, c2);
                        if b.is_zero() {
                            continue;
                        }
                        *m.at_mut(r1 * other.rows + r2, c1 * other.cols + c2) =
                            a.clone() * b.clone();
                    }
                }
            }
        }
        m
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![T::zero(); self.rows];
        for r in 0..self.rows {
            let mut acc = T::zero();
            for c in 0..self.cols {
                let a = self.at(r, c);
                if a.is_zero() || v[c].is_zero() {
                    continue;
                }
                acc = acc + a.clone() * v[c].clone();
            }
            out[r] = acc;
        }
        out
    }

    /// Rank by Gaussian elimination. `pivot_eps` is the magnitude below
    /// which a float entry counts as zero; pass 0.0 in exact mode.
    pub fn rank(&self, pivot_eps: f64) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..m.cols {
            // Find the best pivot in this column.
            let mut piv = None;
            let mut best = pivot_eps;
            for r in row..m.rows {
                let mag = m.at(r, col).norm_f64();
                if T::EXACT {
                    if !m.at(r, col).is_zero() {
                        piv = Some(r);
                        break;
                    }
                } else if mag > best {
                    best = mag;
                    piv = Some(r);
                }
            }
            let Some(p) = piv else { continue };
            m.data.swap(row * m.cols + col, p * m.cols + col);
            for c in 0..m.cols {
                if c != col {
                    let tmp = m.at(row, c).clone();
                    *m.at_mut(row, c) = m.at(p, c).clone();
                    *m.at_mut(p, c) = tmp;
                }
            }
            let inv = m.at(row, col).inv().expect("nonzero pivot");
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.at(r, col).clone() * inv.clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let sub = f.clone() * m.at(row, c).clone();
                    *m.at_mut(r, c) = m.at(r, c).clone() - sub;
                }
            }
            rank += 1;
            row += 1;
            if row == m.rows {
                break;
            }
        }
        rank
    }
}

impl<T: Scalar> Add for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn add(self, o: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: Scalar> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn sub(self, o: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Scalar> Neg for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn neg(self) -> CMatrix<T> {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a.clone()).collect(),
        }
    }
}

impl<T: Scalar> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, o: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.cols, o.rows);
        let mut m: CMatrix<T> = CMatrix::zeros(self.rows, o.cols);
        // The representation matrices are monomial (one entry per row), so
        // skipping zero entries makes this effectively O(n²).
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let b = o.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.clone() * b.clone();
                    let cur = m.at(r, c).clone();
                    *m.at_mut(r, c) = cur + prod;
                }
            }
        }
        m
    }
}

/// Result of solving `M x = b` by elimination.
pub struct SolveOutcome<T: Scalar> {
    /// A particular solution, if the system is consistent.
    pub solution: Option<Vec<T>>,
    /// Basis of the homogeneous solution space.
    pub kernel: Vec<Vec<T>>,
    pub rank: usize,
}

/// Solve a (possibly over- or under-determined) linear system exactly,
/// reporting consistency, a particular solution, and the kernel.
pub fn solve_linear_system<T: Scalar>(
    m: &CMatrix<T>,
    b: &[T],
    pivot_eps: f64,
) -> Result<SolveOutcome<T>, CcksError> {
    assert_eq!(m.rows, b.len());
    let rows = m.rows;
    let cols = m.cols;
    let mut aug = CMatrix::zeros(rows, cols + 1);
    for r in 0..rows {
        for c in 0..cols {
            *aug.at_mut(r, c) = m.at(r, c).clone();
        }
        *aug.at_mut(r, cols) = b[r].clone();
    }

    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let mut piv = None;
        let mut best = pivot_eps;
        for r in row..rows {
            let mag = aug.at(r, col).norm_f64();
            if T::EXACT {
                if !aug.at(r, col).is_zero() {
                    piv = Some(r);
                    break;
                }
            } else if mag > best {
                best = mag;
                piv = Some(r);
            }
        }
        let Some(p) = piv else { continue };
        if p != row {
            for c in 0..=cols {
                let tmp = aug.at(row, c).clone();
                *aug.at_mut(row, c) = aug.at(p, c).clone();
                *aug.at_mut(p, c) = tmp;
            }
        }
        let inv = aug.at(row, col).inv().expect("nonzero pivot");
        for c in col..=cols {
            let v = aug.at(row, c).clone() * inv.clone();
            *aug.at_mut(row, c) = v;
        }
        for r in 0..rows {
            if r == row {
                continue;
            }
            let f = aug.at(r, col).clone();
            if f.is_zero() {
                continue;
            }
            for c in col..=cols {
                let sub = f.clone() * aug.at(row, c).clone();
                *aug.at_mut(r, c) = aug.at(r, c).clone() - sub;
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    let rank = pivot_cols.len();

    // Consistency: any residual row 0 = nonzero means no solution.
    let consistent_eps = if T::EXACT { 0.0 } else { pivot_eps.max(1e-9) };
    let mut consistent = true;
    for r in rank..rows {
        if aug.at(r, cols).norm_f64() > consistent_eps {
            consistent = false;
            break;
        }
    }

    let solution = if consistent {
        let mut x = vec![T::zero(); cols];
        for (i, &pc) in pivot_cols.iter().enumerate() {
            x[pc] = aug.at(i, cols).clone();
        }
        Some(x)
    } else {
        None
    };

    let mut kernel = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![T::zero(); cols];
        v[free] = T::one();
        for (i, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -aug.at(i, free).clone();
        }
        kernel.push(v);
    }

    Ok(SolveOutcome {
        solution,
        kernel,
        rank,
    })
}

/// Spinor helpers.
pub fn spinor_add<T: Scalar>(u: &[T], v: &[T]) -> Spinor<T> {
    u.iter().zip(v).map(|(a, b)| a.clone() + b.clone()).collect()
}

pub fn spinor_sub<T: Scalar>(u: &[T], v: &[T]) -> Spinor<T> {
    u.iter().zip(v).map(|(a, b)| a.clone() - b.clone()).collect()
}

pub fn spinor_scale<T: Scalar>(s: &T, u: &[T]) -> Spinor<T> {
    u.iter().map(|a| s.clone() * a.clone()).collect()
}

pub fn spinor_is_zero<T: Scalar>(u: &[T]) -> bool {
    u.iter().all(|a| a.is_zero())
}

pub fn spinor_norm_f64<T: Scalar>(u: &[T]) -> f64 {
    u.iter().map(|a| a.norm_f64().powi(2)).sum::<f64>().sqrt()
}
