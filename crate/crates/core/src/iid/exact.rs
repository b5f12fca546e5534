//! Real numbers as rational coefficient vectors over a declared basis.

use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{CheckedAdd, CheckedMul, One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Real numbers assumed linearly independent over the rationals; the first is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    names: Vec<String>,
    values: Vec<f64>,
}

fn parse_element(name: &str) -> Result<f64> {
    let bad = || Error::Schema(format!("unrecognized basis element {name:?}"));
    let value = match name {
        "1" => 1.0,
        "pi" => std::f64::consts::PI,
        "e" => std::f64::consts::E,
        _ => match name.strip_prefix("sqrt") {
            Some(arg) => parse_rational(arg).map_err(|_| bad())?.to_f64().ok_or_else(bad)?.sqrt(),
            None => name.parse::<f64>().map_err(|_| bad())?,
        },
    };
    if value.is_finite() && value != 0.0 {
        Ok(value)
    } else {
        Err(bad())
    }
}

impl Basis {
    /// Accepts "1", "sqrtN" (N a positive rational), "pi", "e" or a float literal.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().trim().to_string()).collect();
        if names.first().map(String::as_str) != Some("1") {
            return Err(Error::Schema("basis must start with \"1\"".into()));
        }
        let values = names.iter().map(|n| parse_element(n)).collect::<Result<Vec<_>>>()?;
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Schema(format!("basis element {n:?} repeated")));
            }
        }
        Ok(Self { names, values })
    }

    /// The basis {1}: exact rationals.
    pub fn rational() -> Self {
        Self { names: vec!["1".into()], values: vec![1.0] }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Parses "p/q", "p" or a terminating decimal such as "0.25".
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::Schema(format!("cannot parse rational {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.len() as u32;
        if digits > 17 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10i64.pow(digits);
        let negative = int.starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let f: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = whole.checked_abs().and_then(|w| w.checked_mul(den)).and_then(|w| w.checked_add(f)).ok_or(Error::Overflow)?;
        return Ok(Rational64::new(if negative { -num } else { num }, den));
    }
    Ok(Rational64::from_integer(s.parse().map_err(|_| bad())?))
}

/// Exact real: Σ_i c_i b_i with rational c_i. Equality and hashing use the
/// coefficients only; `value` is the derived float.
#[derive(Debug, Clone)]
pub struct ExactReal {
    coeffs: Vec<Rational64>,
    value: f64,
}

impl PartialEq for ExactReal {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for ExactReal {}

impl Hash for ExactReal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

fn float_value(coeffs: &[Rational64], basis: &Basis) -> f64 {
    coeffs.iter().zip(basis.values()).map(|(c, b)| c.to_f64().unwrap_or(f64::NAN) * b).sum()
}

impl ExactReal {
    pub fn new(coeffs: Vec<Rational64>, basis: &Basis) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::ShapeMismatch(format!("{} coefficients for a {}-element basis", coeffs.len(), basis.len())));
        }
        let value = float_value(&coeffs, basis);
        Ok(Self { coeffs, value })
    }

    /// Parses one coefficient string per basis element.
    pub fn parse<S: AsRef<str>>(coeffs: &[S], basis: &Basis) -> Result<Self> {
        let coeffs = coeffs.iter().map(|c| parse_rational(c.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::new(coeffs, basis)
    }

    pub fn rational(q: Rational64, basis: &Basis) -> Self {
        let mut coeffs = vec![Rational64::zero(); basis.len()];
        coeffs[0] = q;
        Self { value: q.to_f64().unwrap_or(f64::NAN), coeffs }
    }

    pub fn integer(n: i64, basis: &Basis) -> Self {
        Self::rational(Rational64::from_integer(n), basis)
    }

    /// The k-th basis element itself.
    pub fn basis_element(k: usize, basis: &Basis) -> Self {
        let mut coeffs = vec![Rational64::zero(); basis.len()];
        coeffs[k] = Rational64::one();
        Self { value: basis.values()[k], coeffs }
    }

    pub fn coeffs(&self) -> &[Rational64] {
        &self.coeffs
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1)
    }

    fn combine(&self, other: &Self, sign: i64) -> Result<Self> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::ShapeMismatch("exact reals over different bases".into()));
        }
        let s = Rational64::from_integer(sign);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| b.checked_mul(&s).and_then(|b| a.checked_add(&b)).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coeffs, value: self.value + sign as f64 * other.value })
    }

    pub fn checked_scale(&self, q: Rational64) -> Result<Self> {
        let coeffs =
            self.coeffs.iter().map(|c| c.checked_mul(&q).ok_or(Error::Overflow)).collect::<Result<Vec<_>>>()?;
        Ok(Self { coeffs, value: self.value * q.to_f64().unwrap_or(f64::NAN) })
    }

    pub(crate) fn to_big(&self) -> Vec<BigRational> {
        self.coeffs.iter().map(|c| BigRational::new(BigInt::from(*c.numer()), BigInt::from(*c.denom()))).collect()
    }

    pub(crate) fn from_big(coeffs: &[BigRational], basis: &Basis) -> Result<Self> {
        let small = coeffs
            .iter()
            .map(|c| Some(Rational64::new(c.numer().to_i64()?, c.denom().to_i64()?)))
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::Overflow)?;
        Self::new(small, basis)
    }

    /// Coefficient strings in the file format ("p/q" or "p").
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }
}

impl std::fmt::Display for ExactReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]", self.coeff_strings().join(", "))
    }
}

/// Integer vectors proportional to exact values, used as hash keys for sums.
pub(crate) type Key = SmallVec<[i64; 4]>;

/// Common denominator turning every coefficient of `values` into an integer.
pub(crate) fn integer_keys(values: &[&ExactReal]) -> Result<Vec<Key>> {
    let mut den: i64 = 1;
    for v in values {
        for c in &v.coeffs {
            let g = den.gcd(c.denom());
            den = (den / g).checked_mul(*c.denom()).ok_or(Error::Overflow)?;
        }
    }
    values
        .iter()
        .map(|v| {
            v.coeffs
                .iter()
                .map(|c| (den / c.denom()).checked_mul(*c.numer()).ok_or(Error::Overflow))
                .collect::<Result<Key>>()
        })
        .collect()
}

/// Rank over the rationals of a list of rational row vectors.
pub(crate) fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x -= &factor * p;
            }
        }
        rank += 1;
    }
    rank
}

/// gcd of nonzero rationals in lowest terms: gcd(numerators)/lcm(denominators).
pub(crate) fn rational_gcd(values: &[BigRational]) -> BigRational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for v in values.iter().filter(|v| !v.is_zero()) {
        num = num.gcd(&v.numer().abs());
        den = den.lcm(v.denom());
    }
    BigRational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn basis_parsing() {
        let b = Basis::new(&["1", "sqrt2", "pi", "e", "0.37", "sqrt1/2"]).unwrap();
        assert!((b.values()[1] - 2f64.sqrt()).abs() < 1e-15);
        assert!((b.values()[5] - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(b.values()[4], 0.37);
        assert!(matches!(Basis::new(&["sqrt2"]), Err(Error::Schema(_))));
        assert!(matches!(Basis::new(&["1", "cbrt2"]), Err(Error::Schema(_))));
        assert!(matches!(Basis::new(&["1", "sqrt2", "sqrt2"]), Err(Error::Schema(_))));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/2").unwrap(), Rational64::new(3, 2));
        assert_eq!(parse_rational("-4").unwrap(), Rational64::from_integer(-4));
        assert_eq!(parse_rational("0.25").unwrap(), Rational64::new(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), Rational64::new(-3, 2));
        assert!(parse_rational("1/0").is_err() && parse_rational("x").is_err());
    }

    #[test]
    fn arithmetic_and_equality() {
        let b = Basis::new(&["1", "sqrt2"]).unwrap();
        let x = ExactReal::parse(&["1/2", "1"], &b).unwrap();
        let y = ExactReal::parse(&["1/2", "-1"], &b).unwrap();
        let s = x.checked_add(&y).unwrap();
        assert_eq!(s, ExactReal::integer(1, &b));
        assert!((s.value() - 1.0).abs() < 1e-12);
        let d = x.checked_sub(&y).unwrap();
        assert_eq!(d, ExactReal::basis_element(1, &b).checked_scale(Rational64::from_integer(2)).unwrap());
        assert!((x.value() - (0.5 + 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn keys_share_a_denominator() {
        let b = Basis::new(&["1", "sqrt2"]).unwrap();
        let x = ExactReal::parse(&["1/2", "1/3"], &b).unwrap();
        let y = ExactReal::parse(&["2", "0"], &b).unwrap();
        let keys = integer_keys(&[&x, &y]).unwrap();
        assert_eq!(keys[0].as_slice(), &[3, 2]);
        assert_eq!(keys[1].as_slice(), &[12, 0]);
    }

    #[test]
    fn rank_and_gcd() {
        let rows = vec![vec![r(1, 1), r(0, 1)], vec![r(2, 1), r(0, 1)], vec![r(0, 1), r(1, 2)]];
        assert_eq!(rational_rank(rows), 2);
        assert_eq!(rational_rank(vec![vec![r(0, 1)]]), 0);
        assert_eq!(rational_gcd(&[r(3, 2), r(3, 1)]), r(3, 2));
        assert_eq!(rational_gcd(&[r(2, 3), r(1, 2)]), r(1, 6));
    }
}
