//! Exact rational scalars and vectors.
//!
//! Every geometric quantity in the crate is carried as a [`Rat`]; distances
//! are stored squared so that no radicals ever enter a computation.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

/// `n / d` as a [`Rat`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a [`Rat`].
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` into a canonical rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    let den = BigInt::from_str(den).map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rat::new(num, den))
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rat) -> Rat {
    x - x.floor()
}

/// Least common multiple of the denominators of `xs` (1 for an empty slice).
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// A squared Euclidean distance.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SqDist(Rat);

impl SqDist {
    pub fn new(value: Rat) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::Invariant(format!("negative squared distance {value}")));
        }
        Ok(SqDist(value))
    }

    pub fn zero() -> Self {
        SqDist(Rat::zero())
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    pub fn into_inner(self) -> Rat {
        self.0
    }
}

impl fmt::Display for SqDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A fixed-dimension vector of exact rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatVec(Vec<Rat>);

impl RatVec {
    pub fn new(coords: Vec<Rat>) -> Self {
        RatVec(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        RatVec(vec![Rat::zero(); dim])
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        RatVec(xs.iter().map(|&x| int(x)).collect())
    }

    /// Builds a vector from `(numerator, denominator)` pairs.
    pub fn from_fracs(xs: &[(i64, i64)]) -> Self {
        RatVec(xs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rat> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    pub fn sum(&self) -> Rat {
        self.0.iter().fold(Rat::zero(), |acc, x| acc + x)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_sum_zero(&self) -> bool {
        self.sum().is_zero()
    }

    pub fn dot(&self, other: &RatVec) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn norm_sq(&self) -> Rat {
        self.dot(self)
    }

    pub fn scale(&self, c: &Rat) -> RatVec {
        RatVec(self.0.iter().map(|x| x * c).collect())
    }

    /// Copy with `value` inserted so that it lands at position `pos`.
    pub fn inserted(&self, pos: usize, value: Rat) -> RatVec {
        let mut v = self.0.clone();
        v.insert(pos, value);
        RatVec(v)
    }

    /// Copy with coordinate `pos` deleted.
    pub fn removed(&self, pos: usize) -> RatVec {
        let mut v = self.0.clone();
        v.remove(pos);
        RatVec(v)
    }

    /// Lossy conversion for display and sampling only.
    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl From<Vec<Rat>> for RatVec {
    fn from(v: Vec<Rat>) -> Self {
        RatVec(v)
    }
}

impl FromIterator<Rat> for RatVec {
    fn from_iter<I: IntoIterator<Item = Rat>>(iter: I) -> Self {
        RatVec(iter.into_iter().collect())
    }
}

impl Index<usize> for RatVec {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl IndexMut<usize> for RatVec {
    fn index_mut(&mut self, i: usize) -> &mut Rat {
        &mut self.0[i]
    }
}

impl<'a> Add<&'a RatVec> for &'a RatVec {
    type Output = RatVec;
    fn add(self, rhs: &'a RatVec) -> RatVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a RatVec> for &'a RatVec {
    type Output = RatVec;
    fn sub(self, rhs: &'a RatVec) -> RatVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RatVec {
    type Output = RatVec;
    fn neg(self) -> RatVec {
        RatVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A rational that serializes as the string `"p/q"` (or `"p"` for integers).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JsonRat(pub Rat);

impl Serialize for JsonRat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for JsonRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map(JsonRat).map_err(de::Error::custom)
    }
}

impl Serialize for RatVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|x| x.to_string()))
    }
}

impl<'de> Deserialize<'de> for RatVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<JsonRat>::deserialize(d)?;
        Ok(RatVec(v.into_iter().map(|r| r.0).collect()))
    }
}

/// Decimal rendering of `x` with `sig` significant digits (rounded half up).
pub fn to_decimal(x: &Rat, sig: usize) -> String {
    assert!(sig > 0);
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let a = x.abs();
    let ten = BigInt::from(10);
    // e = floor(log10(a))
    let mut e: i64 = (a.numer().to_string().len() as i64) - (a.denom().to_string().len() as i64);
    let pow10 = |k: i64| -> Rat {
        if k >= 0 {
            Rat::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            Rat::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while a < pow10(e) {
        e -= 1;
    }
    while a >= pow10(e + 1) {
        e += 1;
    }
    let shift = sig as i64 - 1 - e;
    let scaled = &a * pow10(shift);
    let mut digits = (scaled + rat(1, 2)).floor().to_integer();
    if digits >= num_traits::pow(ten.clone(), sig) {
        digits /= &ten;
        e += 1;
    }
    let s = digits.to_string();
    let body = if e >= 0 {
        let int_len = (e + 1) as usize;
        if int_len >= s.len() {
            format!("{}{}", s, "0".repeat(int_len - s.len()))
        } else {
            format!("{}.{}", &s[..int_len], &s[int_len..])
        }
    } else {
        format!("0.{}{}", "0".repeat((-e - 1) as usize), s)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Decimal approximation of `sqrt(x)` for `x >= 0`, to `sig` significant digits.
pub fn sqrt_decimal(x: &Rat, sig: usize) -> String {
    assert!(!x.is_negative(), "square root of a negative rational");
    if x.is_zero() {
        return "0".to_string();
    }
    // Enough guard digits that truncation does not reach the printed ones.
    let magnitude = x.numer().to_string().len() + x.denom().to_string().len();
    let k = sig + magnitude + 4;
    let scale = num_traits::pow(BigInt::from(10), 2 * k);
    let root = ((x.numer() * scale) / x.denom()).sqrt();
    let approx = Rat::new(root, num_traits::pow(BigInt::from(10), k));
    to_decimal(&approx, sig)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(rat(2, -4), rat(-1, 2));
        assert_eq!(rat(-1, 2).denom(), &BigInt::from(2));
        assert_eq!(rat(6, 3).to_string(), "2");
        assert_eq!(rat(-1, 3).to_string(), "-1/3");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "-1/3", "2/9", "40465625/55059264", "7"] {
            assert_eq!(parse_rat(s).unwrap().to_string(), s);
        }
        assert_eq!(parse_rat("2/4").unwrap(), rat(1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn frac_of_negative() {
        assert_eq!(frac(&rat(-1, 3)), rat(2, 3));
        assert_eq!(frac(&rat(7, 4)), rat(3, 4));
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&rat(20, 27), 20), "0.74074074074074074074");
        assert_eq!(to_decimal(&rat(3, 4), 5), "0.75000");
        assert_eq!(to_decimal(&rat(-1, 8), 3), "-0.125");
        assert_eq!(to_decimal(&int(1234), 2), "1200");
        assert_eq!(to_decimal(&rat(1, 1000), 2), "0.0010");
        assert_eq!(to_decimal(&rat(999, 1000), 2), "1.0");
        assert_eq!(sqrt_decimal(&int(2), 20), "1.4142135623730950488");
        assert_eq!(sqrt_decimal(&rat(1, 8), 6), "0.353553");
    }

    #[test]
    fn vector_ops() {
        let a = RatVec::from_fracs(&[(1, 2), (-1, 2)]);
        let b = RatVec::from_ints(&[1, 1]);
        assert!(a.is_sum_zero());
        assert_eq!(a.dot(&b), int(0));
        assert_eq!(a.norm_sq(), rat(1, 2));
        assert_eq!((&a + &b).to_string(), "(3/2, 1/2)");
        assert_eq!(a.inserted(1, int(0)).to_string(), "(1/2, 0, -1/2)");
        assert_eq!(a.removed(0).dim(), 1);
    }

    #[test]
    fn json_round_trip() {
        let v = RatVec::from_fracs(&[(0, 1), (-1, 3), (5, 4)]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["0","-1/3","5/4"]"#);
        let back: RatVec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
