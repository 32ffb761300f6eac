//! Simplex working numbers: `Ratio<i64>` while everything fits, `BigRational`
//! once an operation would overflow. Values are exact either way.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::numeric::Rational;

#[derive(Clone, Debug)]
pub(crate) enum Scalar {
    Small(Ratio<i64>),
    Big(Rational),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Small(Ratio::zero())
    }

    pub fn one() -> Self {
        Scalar::Small(Ratio::one())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Small(v) => v.is_zero(),
            Scalar::Big(v) => v.is_zero(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Small(v) => v.is_negative(),
            Scalar::Big(v) => v.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Small(v) => v.is_positive(),
            Scalar::Big(v) => v.is_positive(),
        }
    }

    pub fn to_rational(&self) -> Rational {
        match self {
            Scalar::Small(v) => Rational::new(BigInt::from(*v.numer()), BigInt::from(*v.denom())),
            Scalar::Big(v) => v.clone(),
        }
    }

    pub fn recip(&self) -> Scalar {
        match self {
            Scalar::Small(v) => match Ratio::one().checked_div(v) {
                Some(r) => Scalar::Small(r),
                None => Scalar::Big(self.to_rational().recip()),
            },
            Scalar::Big(v) => Scalar::from(&v.recip()),
        }
    }

    fn big(&self) -> std::borrow::Cow<'_, Rational> {
        match self {
            Scalar::Small(_) => std::borrow::Cow::Owned(self.to_rational()),
            Scalar::Big(v) => std::borrow::Cow::Borrowed(v),
        }
    }
}

impl From<&Rational> for Scalar {
    fn from(v: &Rational) -> Self {
        match (v.numer().to_i64(), v.denom().to_i64()) {
            // `i64::MIN` has no negation; keep it out of the small range.
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => Scalar::Small(Ratio::new_raw(n, d)),
            _ => Scalar::Big(v.clone()),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                if let (Scalar::Small(a), Scalar::Small(b)) = (self, rhs) {
                    if let Some(r) = a.$checked(b) {
                        if *r.numer() != i64::MIN {
                            return Scalar::Small(r);
                        }
                    }
                }
                Scalar::from(&$trait::$method(&*self.big(), &*rhs.big()))
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Small(v) => Scalar::Small(-v),
            Scalar::Big(v) => Scalar::from(&-v),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Small(a), Scalar::Small(b)) => a.cmp(b),
            _ => self.big().cmp(&other.big()),
        }
    }
}
