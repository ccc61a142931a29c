//! Dense square matrices over a [`Ring`], plus exact elimination over a [`Field`].

use std::fmt;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};
use crate::scalar::{Field, Ring};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<R> {
    dim: usize,
    entries: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Format("matrix must have at least one row".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
        }
        Ok(Matrix { dim, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Matrix { dim, entries }
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| R::zero())
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { R::one() } else { R::zero() })
    }

    pub fn diagonal(diag: Vec<R>) -> Self {
        let dim = diag.len();
        let mut m = Self::zero(dim);
        for (i, d) in diag.into_iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// The matrix with a single one at `(i, j)`.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(dim);
        m[(i, j)] = R::one();
        m
    }

    /// Anti-diagonal ones: the Gram matrix of the split orthogonal form.
    pub fn anti_diagonal(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i + j + 1 == dim { R::one() } else { R::zero() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> impl Iterator<Item = &[R]> {
        self.entries.chunks(self.dim)
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.dim).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        self.rows().map(<[R]>::to_vec).collect()
    }

    pub fn entries(&self) -> &[R] {
        &self.entries
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { dim: self.dim, entries: self.entries.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| x.mul_ref(c))
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim == other {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, found: other })
        }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs.dim)?;
        let n = self.dim;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = R::zero();
                for k in 0..n {
                    let a = &self.entries[i * n + k];
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc.add_ref(&a.mul_ref(&rhs.entries[k * n + j]));
                }
                out.push(acc);
            }
        }
        Ok(Matrix { dim: n, entries: out })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs.dim)?;
        Ok(Matrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.add_ref(b)).collect(),
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs.dim)?;
        Ok(Matrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.sub_ref(b)).collect(),
        })
    }

    pub fn mul_vec(&self, v: &[R]) -> Result<Vec<R>> {
        self.check_dim(v.len())?;
        Ok(self
            .rows()
            .map(|row| dot(row, v))
            .collect())
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[R]) -> Result<Vec<R>> {
        self.check_dim(v.len())?;
        let n = self.dim;
        Ok((0..n)
            .map(|j| {
                (0..n).fold(R::zero(), |acc, i| acc.add_ref(&v[i].mul_ref(&self[(i, j)])))
            })
            .collect())
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar_of(&R::one())
    }

    fn is_scalar_of(&self, c: &R) -> bool {
        self.rows().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, x)| if i == j { x == c } else { x.is_zero() })
        })
    }

    /// Some `c` with `self = c I`.
    pub fn scalar_value(&self) -> Option<R> {
        let c = self[(0, 0)].clone();
        self.is_scalar_of(&c).then_some(c)
    }

    pub fn is_diagonal(&self) -> bool {
        self.rows()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, x)| i == j || x.is_zero()))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

pub fn dot<R: Ring>(a: &[R], b: &[R]) -> R {
    a.iter()
        .zip(b)
        .filter(|(x, _)| !x.is_zero())
        .fold(R::zero(), |acc, (x, y)| acc.add_ref(&x.mul_ref(y)))
}

impl<F: Field> Matrix<F> {
    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let mut a = self.to_rows();
        let mut inv = Matrix::<F>::identity(n).to_rows();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularMatrix)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].recip_ref();
            for x in a[col].iter_mut().chain(inv[col].iter_mut()) {
                *x = x.mul_ref(&p);
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for k in 0..n {
                    let s = a[col][k].mul_ref(&f);
                    a[r][k] = a[r][k].sub_ref(&s);
                    let s = inv[col][k].mul_ref(&f);
                    inv[r][k] = inv[r][k].sub_ref(&s);
                }
            }
        }
        Matrix::from_rows(inv)
    }

    pub fn determinant(&self) -> F {
        let n = self.dim;
        let mut a = self.to_rows();
        let mut det = F::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return F::zero();
            };
            if pivot != col {
                a.swap(col, pivot);
                det = det.neg_ref();
            }
            det = det.mul_ref(&a[col][col]);
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].div_ref(&a[col][col]);
                for k in col..n {
                    let s = a[col][k].mul_ref(&f);
                    a[r][k] = a[r][k].sub_ref(&s);
                }
            }
        }
        det
    }

    /// Exponential of a nilpotent matrix, `Σ X^k / k!`. `None` if `self` is
    /// not nilpotent.
    pub fn nilpotent_exp(&self) -> Option<Self> {
        let n = self.dim;
        let mut acc = Self::identity(n);
        let mut term = Self::identity(n);
        let mut fact = F::one();
        let mut k = F::zero();
        for _ in 1..=n {
            term = &term * self;
            if term.entries.iter().all(|x| x.is_zero()) {
                return Some(acc);
            }
            k = k.add_ref(&F::one());
            fact = fact.mul_ref(&k);
            acc = acc.try_add(&term.map(|x| x.div_ref(&fact))).ok()?;
        }
        let last = &term * self;
        last.entries.iter().all(|x| x.is_zero()).then_some(acc)
    }
}

/// Rank of a rectangular list of rows by exact Gaussian elimination.
pub fn row_rank<F: Field>(mut rows: Vec<Vec<F>>) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank][col].recip_ref();
        for x in rows[rank].iter_mut() {
            *x = x.mul_ref(&p);
        }
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for k in col..width {
                let s = pivot_row[k].mul_ref(&f);
                row[k] = row[k].sub_ref(&s);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

impl<R> std::ops::Index<(usize, usize)> for Matrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.entries[i * self.dim + j]
    }
}

impl<R> std::ops::IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.entries[i * self.dim + j]
    }
}

/// Panics on dimension mismatch; use [`Matrix::try_mul`] for checked products.
impl<'a, R: Ring> Mul<&'a Matrix<R>> for &'a Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, rhs: &'a Matrix<R>) -> Matrix<R> {
        self.try_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl<'a, R: Ring> Add<&'a Matrix<R>> for &'a Matrix<R> {
    type Output = Matrix<R>;
    fn add(self, rhs: &'a Matrix<R>) -> Matrix<R> {
        self.try_add(rhs).expect("matrix dimensions must agree")
    }
}

impl<R: fmt::Debug> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.chunks(self.dim)).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{LaurentPoly, MatrixL, MatrixQ, Rational};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn mq(rows: &[&[i64]]) -> MatrixQ {
        MatrixQ::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let a = mq(&[&[1, 2], &[3, 4]]);
        assert_eq!(&MatrixQ::identity(2) * &a, a);
    }

    #[test]
    fn two_by_two_inverse_matches_adjugate() {
        let a = mq(&[&[1, 1], &[1, 2]]);
        // adjugate [[d, -b], [-c, a]] / det with det = 1
        let adj = mq(&[&[2, -1], &[-1, 1]]);
        assert_eq!(a.determinant(), q(1));
        assert_eq!(a.inverse().unwrap(), adj);
        assert!((&adj * &a).is_identity());
    }

    #[test]
    fn singular_inverse_fails() {
        assert_eq!(mq(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn laurent_diagonal_product() {
        let a = MatrixL::diagonal(vec![LaurentPoly::t_pow(-1), LaurentPoly::t_pow(1)]);
        let b = MatrixL::diagonal(vec![LaurentPoly::t_pow(1), LaurentPoly::t_pow(-1)]);
        assert!((&a * &b).is_identity());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = MatrixQ::identity(2);
        let b = MatrixQ::identity(3);
        assert_eq!(a.try_mul(&b), Err(Error::DimensionMismatch { expected: 2, found: 3 }));
    }

    #[test]
    fn random_inverses() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 200 {
            let n = rng.gen_range(1..=7);
            let m = MatrixQ::from_fn(n, |_, _| {
                Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into())
            });
            let Ok(inv) = m.inverse() else {
                assert_eq!(m.determinant(), q(0));
                continue;
            };
            assert!((&inv * &m).is_identity());
            assert!((&m * &inv).is_identity());
            checked += 1;
        }
    }

    #[test]
    fn rank_of_rectangular_rows() {
        let rows = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(row_rank(rows), 2);
        assert_eq!(row_rank::<Rational>(vec![]), 0);
        assert_eq!(row_rank(vec![vec![1.0f64, 0.0], vec![0.0, 2.0]]), 2);
    }

    #[test]
    fn nilpotent_exponential() {
        let x = mq(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let e = x.nilpotent_exp().unwrap();
        assert_eq!(e[(0, 2)], Rational::new(1.into(), 2.into()));
        assert!(MatrixQ::identity(2).nilpotent_exp().is_none());
    }
}
