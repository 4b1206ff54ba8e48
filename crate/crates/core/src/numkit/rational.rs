//! Dense matrices over exact arbitrary-precision fractions.

use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Exact fraction; always kept in canonical form (gcd 1, positive denominator).
pub type Rational = BigRational;

/// `p/q` as a canonical [`Rational`].
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as a [`Rational`].
pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Nearest `f64` to a fraction.
pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 only fails on overflow of both parts; fall back to a split division.
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Render as `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `p/q` or `p`; the result is canonicalized.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Dense row-major matrix of exact fractions.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Self { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    /// Integer matrix given as nested `i64` rows.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
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

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Rational] {
        &self.data
    }

    /// Exact symmetry test.
    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Error unless square and exactly symmetric.
    pub fn require_symmetric(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("{}×{} matrix is not square", self.rows, self.cols)));
        }
        if !self.is_symmetric() {
            let worst = (0..self.rows)
                .flat_map(|i| (i + 1..self.cols).map(move |j| (i, j)))
                .map(|(i, j)| to_f64(&(&self[(i, j)] - &self[(j, i)]).abs()))
                .fold(0.0, f64::max);
            return Err(Error::NotSymmetric(worst));
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(Error::Dimension("matvec length mismatch".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| !self[(i, j)].is_zero())
                    .fold(Rational::zero(), |acc, j| acc + &self[(i, j)] * &x[j])
            })
            .collect())
    }

    /// Exact `xᵀ A x`.
    pub fn quadratic_form(&self, x: &[Rational]) -> Result<Rational> {
        let ax = self.matvec(x)?;
        Ok(x.iter().zip(&ax).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("subtraction shape mismatch".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// Nearest-float copy.
    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.rows, self.cols, |i, j| to_f64(&self[(i, j)]))
    }

    /// Number of nonzero entries.
    pub fn nonzeros(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    /// Least common multiple of all denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.data.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}
