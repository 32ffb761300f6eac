//! Exact rational scalars, planar vectors and a small dense solver.
//!
//! Every quantity in the solver is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. Floating point
//! only shows up through [`to_f64`], which exists for display and logging.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always normalized.
pub type Rational = BigRational;

/// `n / d` as a rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses a decimal literal (`-1.25`, `3e-2`, `.5`) or a fraction `p/q`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::ParseRational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = parse_integer(p.trim()).ok_or_else(bad)?;
        let q: BigInt = parse_integer(q.trim()).ok_or_else(bad)?;
        if q.is_zero() {
            return Err(Error::ZeroDenominator(text.to_string()));
        }
        return Ok(Rational::new(p, q));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, unsigned) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = match unsigned.split_once('.') {
        Some((w, f)) => (w, f),
        None => (unsigned, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let mut value = Rational::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let shift = exponent - frac.len() as i64;
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= Rational::from_integer(scale);
    } else {
        value /= Rational::from_integer(scale);
    }
    Ok(if negative { -value } else { value })
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical `p/q` text form. The denominator is always written, so integers
/// come out as `3/1`; [`parse_rational`] accepts both spellings.
pub fn render_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Nearest `f64`, for display only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Ratio of huge integers: scale both down before dividing.
        let bits = r.numer().bits().max(r.denom().bits());
        let shift = bits.saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact inner product.
pub fn dot(a: &[Rational], b: &[Rational]) -> Result<Rational> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y))
}

/// Smallest integer `>= r`.
pub fn ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Nearest multiple of `step` to `value`, halves rounded up.
pub fn round_to_multiple(value: &Rational, step: &Rational) -> Rational {
    let half = ratio(1, 2);
    let k = (value / step + half).floor();
    k * step
}

/// Least common multiple of the denominators of `values` (1 for an empty list).
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// A point or direction in the plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec2 {
    pub x: Rational,
    pub y: Rational,
}

impl Vec2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Vec2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Vec2::new(int(x), int(y))
    }

    pub fn zero() -> Self {
        Vec2::new(Rational::zero(), Rational::zero())
    }

    pub fn dot(&self, other: &Vec2) -> Rational {
        &self.x * &other.x + &self.y * &other.y
    }

    /// z-component of the 3-d cross product.
    pub fn cross(&self, other: &Vec2) -> Rational {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    pub fn scale(&self, s: &Rational) -> Vec2 {
        Vec2::new(&self.x * s, &self.y * s)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> Rational {
        let (ax, ay) = (self.x.abs(), self.y.abs());
        if ax > ay {
            ax
        } else {
            ay
        }
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for &Vec2 {
    type Output = Vec2;
    fn add(self, rhs: &Vec2) -> Vec2 {
        Vec2::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Sub for &Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: &Vec2) -> Vec2 {
        Vec2::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Mul<&Rational> for &Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: &Rational) -> Vec2 {
        self.scale(rhs)
    }
}

impl Neg for &Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-&self.x, -&self.y)
    }
}

/// Outcome of [`solve_linear_system`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolve {
    Unique(Vec<Rational>),
    Inconsistent,
    /// Consistent, but the columns are linearly dependent.
    Underdetermined,
}

/// Solves `A x = b` by exact Gauss-Jordan elimination. `a` is row-major with
/// any number of rows.
pub fn solve_linear_system(a: &[Vec<Rational>], b: &[Rational]) -> Result<LinearSolve> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = Vec::with_capacity(a.len());
    for (row, rhs) in a.iter().zip(b) {
        if row.len() != cols {
            return Err(Error::LengthMismatch {
                left: row.len(),
                right: cols,
            });
        }
        let mut r = row.clone();
        r.push(rhs.clone());
        m.push(r);
    }

    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        let Some(found) = (pivot_row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, found);
        let inv = m[pivot_row][col].recip();
        for v in m[pivot_row].iter_mut() {
            *v *= &inv;
        }
        let pivot = m[pivot_row].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == pivot_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot) {
                *v -= &factor * p;
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }

    if m[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(LinearSolve::Inconsistent);
    }
    if pivots.len() < cols {
        return Ok(LinearSolve::Underdetermined);
    }
    Ok(LinearSolve::Unique(
        (0..cols).map(|c| m[c][cols].clone()).collect(),
    ))
}
