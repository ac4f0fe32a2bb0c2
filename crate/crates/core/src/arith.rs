//! Exact rational scalars, vectors, matrices and hyperplanes.
//!
//! Everything downstream (facets, incidences, equivalence verdicts) is decided
//! with these types, so no floating point value ever enters a combinatorial
//! judgment.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Index, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom.into())))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        if self.0.is_positive() {
            Ordering::Greater
        } else if self.0.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Self> {
        Rational::one().checked_div(self)
    }

    /// Division by a value the caller has already checked to be nonzero.
    pub(crate) fn div_nonzero(&self, rhs: &Rational) -> Self {
        debug_assert!(!rhs.is_zero());
        Rational(&self.0 / &rhs.0)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses `p/q` or `p`. Non-reduced input is accepted and reduced.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(String::from(s));
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = match den {
            Some(d) if d.starts_with('+') || d.starts_with('-') => return Err(bad()),
            Some(d) => d.parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        Rational::from_bigints(num, den)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// A point or direction with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        QVector(coords)
    }

    pub fn zeros(len: usize) -> Self {
        QVector(alloc::vec![Rational::zero(); len])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        QVector(coords.iter().map(|&c| Rational::integer(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn dot(&self, other: &QVector) -> Result<Rational> {
        check_dims(self.len(), other.len())?;
        Ok(self.dot_unchecked(other))
    }

    pub(crate) fn dot_unchecked(&self, other: &QVector) -> Rational {
        let mut acc = Rational::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                acc = acc + a * b;
            }
        }
        acc
    }

    pub fn scale(&self, k: &Rational) -> QVector {
        QVector(self.0.iter().map(|c| c * k).collect())
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().chain(&other.0).cloned().collect())
    }

    /// Keeps only the listed coordinates, in the listed order.
    pub fn select(&self, axes: &[usize]) -> QVector {
        QVector(axes.iter().map(|&a| self.0[a].clone()).collect())
    }

    pub fn push(&mut self, c: Rational) {
        self.0.push(c);
    }
}

impl Index<usize> for QVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Add<&QVector> for &QVector {
    type Output = QVector;
    fn add(self, rhs: &QVector) -> QVector {
        assert_eq!(self.len(), rhs.len(), "dimension mismatch");
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&QVector> for &QVector {
    type Output = QVector;
    fn sub(self, rhs: &QVector) -> QVector {
        assert_eq!(self.len(), rhs.len(), "dimension mismatch");
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Debug for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, found: b });
    }
    Ok(())
}

/// Row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QMatrix {
    rows: Vec<QVector>,
    cols: usize,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
}

impl QMatrix {
    pub fn from_rows(rows: Vec<QVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, QVector::len);
        for r in &rows {
            check_dims(cols, r.len())?;
        }
        Ok(QMatrix { rows, cols })
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[QVector] {
        &self.rows
    }

    pub fn transpose(&self) -> QMatrix {
        let rows = (0..self.cols)
            .map(|c| QVector(self.rows.iter().map(|r| r[c].clone()).collect()))
            .collect();
        QMatrix { rows, cols: self.rows.len() }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    pub fn echelon(&self) -> Echelon {
        echelon(self.rows.iter().map(|r| r.0.clone()).collect(), self.cols)
    }
}

/// Gauss-Jordan elimination. The pivot for each column is the first row
/// (lowest index) at or below the current position with a nonzero entry.
pub(crate) fn echelon(mut rows: Vec<Vec<Rational>>, cols: usize) -> Echelon {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip().expect("pivot is nonzero");
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !p.is_zero() {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(pivots.len());
    Echelon { rows, pivots }
}

impl Rational {
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

fn differences(points: &[QVector]) -> Result<Vec<Vec<Rational>>> {
    let first = points.first().ok_or(Error::NoPoints)?;
    let m = first.len();
    points[1..]
        .iter()
        .map(|p| {
            check_dims(m, p.len())?;
            Ok((p - first).0)
        })
        .collect()
}

/// Dimension of the affine span of `points`.
pub fn affine_dim(points: &[QVector]) -> Result<usize> {
    let diffs = differences(points)?;
    Ok(echelon(diffs, points[0].len()).pivots.len())
}

/// Coordinate axes onto which the affine span of `points` projects
/// bijectively, i.e. the pivot columns of the difference matrix. Their
/// count is the affine dimension.
pub fn span_axes(points: &[QVector]) -> Result<Vec<usize>> {
    let diffs = differences(points)?;
    Ok(echelon(diffs, points[0].len()).pivots)
}

/// An oriented affine hyperplane `{x : <normal, x> = offset}`.
///
/// Normal and offset are scaled by a positive factor so that the first
/// nonzero normal coordinate is `+1` or `-1`; the orientation (which side is
/// "below") is preserved.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    normal: QVector,
    offset: Rational,
}

impl Hyperplane {
    pub fn new(normal: QVector, offset: Rational) -> Result<Self> {
        let lead = normal
            .iter()
            .find(|c| !c.is_zero())
            .ok_or(Error::ZeroNormal)?
            .abs();
        if lead.is_one() {
            return Ok(Hyperplane { normal, offset });
        }
        Ok(Hyperplane {
            normal: QVector(normal.iter().map(|c| c.div_nonzero(&lead)).collect()),
            offset: offset.div_nonzero(&lead),
        })
    }

    pub fn normal(&self) -> &QVector {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// The same plane with the opposite orientation.
    pub fn flipped(&self) -> Hyperplane {
        Hyperplane {
            normal: QVector(self.normal.iter().map(|c| -c).collect()),
            offset: -&self.offset,
        }
    }

    /// `<normal, p> - offset`.
    pub fn eval(&self, p: &QVector) -> Result<Rational> {
        check_dims(self.dim(), p.len())?;
        Ok(self.eval_unchecked(p))
    }

    pub(crate) fn eval_unchecked(&self, p: &QVector) -> Rational {
        self.normal.dot_unchecked(p) - &self.offset
    }

    pub fn contains(&self, p: &QVector) -> Result<bool> {
        Ok(self.eval(p)?.is_zero())
    }
}

impl fmt::Debug for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{:?}, x> = {}", self.normal, self.offset)
    }
}

/// The unique hyperplane through `points`, which must span an affine flat of
/// dimension one less than the ambient dimension. The first nonzero normal
/// coordinate of the result is `+1`.
pub fn hyperplane_through(points: &[QVector]) -> Result<Hyperplane> {
    let m = points.first().ok_or(Error::NoPoints)?.len();
    let ech = echelon(differences(points)?, m);
    if m == 0 || ech.pivots.len() + 1 != m {
        return Err(Error::DegenerateFlat);
    }
    let free = (0..m).find(|c| !ech.pivots.contains(c)).expect("one free column");
    let mut normal = QVector::zeros(m);
    normal.0[free] = Rational::one();
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        normal.0[p] = -&row[free];
    }
    let offset = normal.dot_unchecked(&points[0]);
    let h = Hyperplane::new(normal, offset)?;
    let lead_negative = h.normal.iter().find(|c| !c.is_zero()).map(Rational::signum) == Some(Ordering::Less);
    Ok(if lead_negative { h.flipped() } else { h })
}

/// Which side of `h` the point `p` lies on: `Greater` when
/// `<normal, p> > offset`.
pub fn side_of(h: &Hyperplane, p: &QVector) -> Result<Ordering> {
    Ok(h.eval(p)?.signum())
}

/// Solves the square system `A x = b`, returning `None` when `A` is singular.
pub fn solve(a: &[QVector], b: &[Rational]) -> Option<QVector> {
    let n = a.len();
    if n == 0 || b.len() != n || a.iter().any(|r| r.len() != n) {
        return None;
    }
    let augmented = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.0.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let ech = echelon(augmented, n + 1);
    if ech.pivots.len() != n || ech.pivots.last() == Some(&n) {
        return None;
    }
    Some(QVector(ech.rows.iter().map(|r| r[n].clone()).collect()))
}

/// Mean of the given points.
pub fn centroid(points: &[QVector]) -> Result<QVector> {
    let first = points.first().ok_or(Error::NoPoints)?;
    let mut acc = QVector::zeros(first.len());
    for p in points {
        check_dims(first.len(), p.len())?;
        acc = &acc + p;
    }
    let count = Rational::integer(points.len() as i64);
    Ok(QVector(acc.0.iter().map(|c| c.div_nonzero(&count)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn v(cs: &[&str]) -> QVector {
        QVector::new(cs.iter().map(|c| q(c)).collect())
    }

    #[test]
    fn rational_text_form() {
        assert_eq!(q("6/4").to_string(), "3/2");
        assert_eq!(q("-4/2").to_string(), "-2");
        assert!("3/-6".parse::<Rational>().is_err());
        assert_eq!(q("0/5").to_string(), "0");
        assert!(matches!("1/0".parse::<Rational>(), Err(Error::DivisionByZero)));
        assert!("1.5".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
        assert!("1/+2".parse::<Rational>().is_err());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(q("1").checked_div(&q("0")).is_err());
        assert!(q("0").recip().is_err());
        assert_eq!(q("2/3").checked_div(&q("4")).unwrap(), q("1/6"));
    }

    #[test]
    fn affine_dim_examples() {
        assert_eq!(affine_dim(&[v(&["0", "0"])]).unwrap(), 0);
        assert_eq!(
            affine_dim(&[v(&["0", "0"]), v(&["1", "0"]), v(&["0", "1"])]).unwrap(),
            2
        );
        assert!(matches!(affine_dim(&[]), Err(Error::NoPoints)));
        assert!(affine_dim(&[v(&["0", "0"]), v(&["1"])]).is_err());
    }

    #[test]
    fn hyperplane_examples() {
        let h = hyperplane_through(&[v(&["1", "0"]), v(&["0", "1"])]).unwrap();
        assert_eq!(h.normal(), &v(&["1", "1"]));
        assert_eq!(h.offset(), &q("1"));

        let z = hyperplane_through(&[v(&["0", "0", "0"]), v(&["1", "0", "0"]), v(&["0", "1", "0"])])
            .unwrap();
        assert_eq!(z.normal(), &v(&["0", "0", "1"]));
        assert_eq!(z.offset(), &q("0"));

        assert_eq!(side_of(&z, &v(&["0", "0", "0"])).unwrap(), Ordering::Equal);
        assert_eq!(side_of(&z, &v(&["0", "0", "1"])).unwrap(), Ordering::Greater);
        assert_eq!(side_of(&z, &v(&["0", "0", "-1/3"])).unwrap(), Ordering::Less);
        assert!(side_of(&z, &v(&["0", "0"])).is_err());
    }

    #[test]
    fn degenerate_flat_rejected() {
        let collinear = [v(&["0", "0", "0"]), v(&["1", "1", "1"]), v(&["2", "2", "2"])];
        assert!(matches!(hyperplane_through(&collinear), Err(Error::DegenerateFlat)));
        assert!(matches!(
            hyperplane_through(&[v(&["0", "0"]), v(&["0", "0"])]),
            Err(Error::DegenerateFlat)
        ));
    }

    #[test]
    fn hyperplane_scaling_keeps_orientation() {
        let h = Hyperplane::new(v(&["-3", "6"]), q("9")).unwrap();
        assert_eq!(h.normal(), &v(&["-1", "2"]));
        assert_eq!(h.offset(), &q("3"));
        assert!(Hyperplane::new(v(&["0", "0"]), q("1")).is_err());
    }

    #[test]
    fn rank_and_solve() {
        let m = QMatrix::from_rows(vec![
            v(&["1", "2", "3"]),
            v(&["2", "4", "6"]),
            v(&["0", "1", "1/2"]),
        ])
        .unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.transpose().rank(), 2);

        let a = [v(&["2", "1"]), v(&["1", "3"])];
        let x = solve(&a, &[q("3"), q("5")]).unwrap();
        assert_eq!(x, v(&["4/5", "7/5"]));
        assert!(solve(&[v(&["1", "2"]), v(&["2", "4"])], &[q("1"), q("2")]).is_none());
    }

    #[test]
    fn span_axes_picks_independent_coordinates() {
        let pts = [v(&["0", "0", "5"]), v(&["1", "1", "5"]), v(&["2", "2", "5"])];
        assert_eq!(span_axes(&pts).unwrap(), vec![0]);
    }
}
