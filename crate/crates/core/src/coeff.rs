//! Exact Gaussian-rational scalars, the coefficient field of the group algebra.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

/// An element `re + im·i` of ℚ(i). Both parts are kept in lowest terms by
/// `BigRational`, so structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coefficient {
    re: BigRational,
    im: BigRational,
}

impl Coefficient {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Coefficient { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Coefficient {
            re: BigRational::from_integer(n.into()),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Coefficient {
            re: BigRational::new(num.into(), den.into()),
            im: BigRational::zero(),
        }
    }

    /// `(re_num/re_den) + (im_num/im_den)·i`. Panics on a zero denominator.
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Coefficient {
            re: BigRational::new(re_num.into(), re_den.into()),
            im: BigRational::new(im_num.into(), im_den.into()),
        }
    }

    pub fn i() -> Self {
        Coefficient {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn conj(&self) -> Self {
        Coefficient {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `|z|²`, always rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Coefficient {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    /// The integer value, when the coefficient is a real integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.im.is_zero() && self.re.is_integer() {
            self.re.to_integer().to_i64()
        } else {
            None
        }
    }
}

impl Zero for Coefficient {
    fn zero() -> Self {
        Coefficient::default()
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Coefficient {
    fn one() -> Self {
        Coefficient::from_int(1)
    }
}

impl From<i64> for Coefficient {
    fn from(n: i64) -> Self {
        Coefficient::from_int(n)
    }
}

impl Add<&Coefficient> for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        Coefficient {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Add for Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: Coefficient) -> Coefficient {
        Coefficient {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, rhs: &Coefficient) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Coefficient> for Coefficient {
    fn sub_assign(&mut self, rhs: &Coefficient) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Sub<&Coefficient> for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        Coefficient {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Sub for Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: Coefficient) -> Coefficient {
        &self - &rhs
    }
}

impl Mul<&Coefficient> for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        // Real coefficients dominate in practice; skip the cross terms then.
        if self.im.is_zero() && rhs.im.is_zero() {
            return Coefficient {
                re: &self.re * &rhs.re,
                im: BigRational::zero(),
            };
        }
        Coefficient {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul for Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: Coefficient) -> Coefficient {
        &self * &rhs
    }
}

impl Div<&Coefficient> for &Coefficient {
    type Output = Coefficient;
    /// Panics on division by zero, like the integer types do.
    fn div(self, rhs: &Coefficient) -> Coefficient {
        self * &rhs.inv().expect("division by zero coefficient")
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -self.clone()
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => fmt_rational(&self.re, f),
            (re_zero, false) => {
                if !re_zero {
                    fmt_rational(&self.re, f)?;
                    if self.im.is_positive() {
                        write!(f, "+")?;
                    }
                }
                if self.im == BigRational::one() {
                    write!(f, "i")
                } else if self.im == -BigRational::one() {
                    write!(f, "-i")
                } else {
                    fmt_rational(&self.im, f)?;
                    write!(f, "i")
                }
            }
        }
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// JSON form: [re_num, re_den, im_num, im_den] in lowest terms. Integers that
// overflow i64 are written as decimal strings.

fn ser_bigint<S: SerializeTuple>(seq: &mut S, n: &BigInt) -> Result<(), S::Error> {
    match n.to_i64() {
        Some(v) => seq.serialize_element(&v),
        None => seq.serialize_element(&n.to_string()),
    }
}

impl Serialize for Coefficient {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_tuple(4)?;
        ser_bigint(&mut seq, self.re.numer())?;
        ser_bigint(&mut seq, self.re.denom())?;
        ser_bigint(&mut seq, self.im.numer())?;
        ser_bigint(&mut seq, self.im.denom())?;
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Int(i64),
    Str(String),
}

impl IntRepr {
    fn into_bigint<E: de::Error>(self) -> Result<BigInt, E> {
        match self {
            IntRepr::Int(v) => Ok(v.into()),
            IntRepr::Str(s) => s
                .parse()
                .map_err(|_| E::custom(format!("invalid integer {s:?}"))),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoefficientRepr {
    Int(i64),
    Parts(Vec<IntRepr>),
}

fn ratio<E: de::Error>(num: BigInt, den: BigInt) -> Result<BigRational, E> {
    if den.is_zero() {
        return Err(E::custom("zero denominator in coefficient"));
    }
    Ok(BigRational::new(num, den))
}

impl<'de> Deserialize<'de> for Coefficient {
    /// Accepts the canonical 4-array, a 2-array `[num, den]` for a real
    /// rational, or a bare integer.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match CoefficientRepr::deserialize(deserializer)? {
            CoefficientRepr::Int(v) => Ok(Coefficient::from_int(v)),
            CoefficientRepr::Parts(parts) => {
                let mut ints = Vec::with_capacity(parts.len());
                for p in parts {
                    ints.push(p.into_bigint::<D::Error>()?);
                }
                match <[BigInt; 4]>::try_from(ints) {
                    Ok([rn, rd, inum, id]) => Ok(Coefficient {
                        re: ratio::<D::Error>(rn, rd)?,
                        im: ratio::<D::Error>(inum, id)?,
                    }),
                    Err(ints) => match <[BigInt; 2]>::try_from(ints) {
                        Ok([n, d]) => Ok(Coefficient {
                            re: ratio::<D::Error>(n, d)?,
                            im: BigRational::zero(),
                        }),
                        Err(ints) => Err(de::Error::invalid_length(
                            ints.len(),
                            &"a coefficient [re_num, re_den, im_num, im_den]",
                        )),
                    },
                }
            }
        }
    }
}
