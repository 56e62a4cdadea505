//! Exact rational vectors and the small amount of rational linear algebra the
//! alcove computations need (solving, null spaces, lattice membership).

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::IntMatrix;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
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

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A point of `X ⊗ Q`, coordinates always in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self(coords)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Rational::zero(); n])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self(v.iter().map(|&x| int(x)).collect())
    }

    pub fn from_bigints(v: &[BigInt]) -> Self {
        Self(v.iter().cloned().map(Rational::from_integer).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rational::is_integer)
    }

    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.0
            .iter()
            .map(|q| q.is_integer().then(|| q.to_integer()))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self(self.0.iter().map(|x| x * c).collect())
    }

    /// Pairing with an integer functional (dot product).
    pub fn pair(&self, functional: &[i64]) -> Rational {
        assert_eq!(functional.len(), self.dim());
        self.0
            .iter()
            .zip(functional)
            .filter(|(_, &f)| f != 0)
            .fold(Rational::zero(), |acc, (x, &f)| acc + x * int(f))
    }

    pub fn dot(&self, other: &[Rational]) -> Rational {
        assert_eq!(other.len(), self.dim());
        self.0
            .iter()
            .zip(other)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Least common multiple of the denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }

    pub fn apply(m: &IntMatrix, v: &Self) -> Self {
        assert_eq!(m.cols(), v.dim());
        Self(
            (0..m.rows())
                .map(|i| {
                    m.row(i)
                        .iter()
                        .zip(&v.0)
                        .filter(|(a, _)| !a.is_zero())
                        .fold(Rational::zero(), |acc, (a, x)| {
                            acc + x * Rational::from_integer(a.clone())
                        })
                })
                .collect(),
        )
    }
}

impl Index<usize> for RationalVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Add for &RationalVector {
    type Output = RationalVector;

    fn add(self, rhs: &RationalVector) -> RationalVector {
        assert_eq!(self.dim(), rhs.dim());
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;

    fn sub(self, rhs: &RationalVector) -> RationalVector {
        assert_eq!(self.dim(), rhs.dim());
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;

    fn neg(self) -> RationalVector {
        RationalVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(q))?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for RationalVector {
    type Err = Error;

    /// Comma separated coordinates, e.g. `"1/2,0,1/3"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(Self::default());
        }
        s.split(',').map(parse_rational).collect::<Result<_>>().map(Self)
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let items: Vec<String> = Vec::deserialize(d)?;
        items
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect::<std::result::Result<_, _>>()
            .map(Self)
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut m = m.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(m: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `m x = b`, or `None` when inconsistent. Free variables are
/// set to zero.
pub fn solve(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][ncols].clone();
    }
    Some(x)
}

/// Unique solution of `m x = b`; `None` when inconsistent or underdetermined.
pub fn solve_unique(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let ncols = m.first().map_or(0, Vec::len);
    (rank(m) == ncols).then(|| solve(m, b)).flatten()
}

pub fn to_rational_rows(m: &IntMatrix) -> Vec<Vec<Rational>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(Rational::from_integer).collect())
        .collect()
}

/// Decides whether `v` lies in the lattice spanned by the columns of `basis`.
/// The columns must be linearly independent; on success the integer
/// coordinates are returned.
pub fn lattice_membership(v: &RationalVector, basis: &[RationalVector]) -> Result<Option<Vec<BigInt>>> {
    let n = v.dim();
    if let Some(b) = basis.iter().find(|b| b.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.dim(),
        });
    }
    let m: Vec<Vec<Rational>> = (0..n)
        .map(|i| basis.iter().map(|b| b[i].clone()).collect())
        .collect();
    if rank(&m) < basis.len() {
        return Err(Error::InvalidDatum(
            "lattice basis is linearly dependent".into(),
        ));
    }
    Ok(solve(&m, v.coords()).and_then(|x| {
        // Consistency was checked by `solve`; integrality decides membership.
        x.iter()
            .map(|q| q.is_integer().then(|| q.to_integer()))
            .collect()
    }))
}

pub fn abs_max(v: &[Rational]) -> Rational {
    v.iter().map(|q| q.abs()).max().unwrap_or_else(Rational::zero)
}
