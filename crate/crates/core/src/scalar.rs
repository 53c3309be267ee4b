//! Exact arithmetic in `Q` and in real quadratic fields `Q(sqrt(D))`.
//!
//! A [`QuadReal`] is the number `rat + irr * sqrt(D)` with arbitrary
//! precision rational coefficients. Values created without a field (plain
//! rationals) combine freely with values of any field; two values carrying
//! different square roots never meet in one computation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::ScalarError;

/// Which field the entries live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldDesc {
    Rational,
    /// `Q(sqrt(D))`, `D >= 2` squarefree.
    Quadratic(u64),
}

impl FieldDesc {
    pub fn quadratic(d: u64) -> Result<Self, ScalarError> {
        if d < 2 || !is_squarefree(d) {
            return Err(ScalarError::BadRadicand(d));
        }
        Ok(FieldDesc::Quadratic(d))
    }

    pub fn radicand(&self) -> Option<u64> {
        match self {
            FieldDesc::Rational => None,
            FieldDesc::Quadratic(d) => Some(*d),
        }
    }

    /// The common field of two descriptors, if any.
    pub fn join(self, other: FieldDesc) -> Result<FieldDesc, ScalarError> {
        match (self, other) {
            (FieldDesc::Rational, f) | (f, FieldDesc::Rational) => Ok(f),
            (FieldDesc::Quadratic(a), FieldDesc::Quadratic(b)) if a == b => Ok(self),
            (FieldDesc::Quadratic(a), FieldDesc::Quadratic(b)) => {
                Err(ScalarError::FieldMix { left: a, right: b })
            }
        }
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDesc::Rational => write!(f, "rational"),
            FieldDesc::Quadratic(d) => write!(f, "{d}"),
        }
    }
}

pub(crate) fn is_squarefree(n: u64) -> bool {
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Writes `n = k^2 * m` with `m` squarefree.
fn split_square(mut n: u64) -> (u64, u64) {
    let mut k = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        while n.is_multiple_of(p * p) {
            n /= p * p;
            k *= p;
        }
        p += 1;
    }
    (k, n)
}

/// The real number `rat + irr * sqrt(D)`.
#[derive(Clone, Debug)]
pub struct QuadReal {
    rat: BigRational,
    irr: BigRational,
    field: FieldDesc,
}

impl QuadReal {
    pub fn new(rat: BigRational, irr: BigRational, field: FieldDesc) -> Self {
        match field {
            FieldDesc::Rational => {
                assert!(irr.is_zero(), "irrational part in rational mode");
                QuadReal { rat, irr, field }
            }
            FieldDesc::Quadratic(_) => QuadReal { rat, irr, field }.normalized(),
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn from_rational(rat: BigRational) -> Self {
        QuadReal { rat, irr: BigRational::zero(), field: FieldDesc::Rational }
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// `sqrt(d)` for squarefree `d >= 2`.
    pub fn sqrt(d: u64) -> Result<Self, ScalarError> {
        let field = FieldDesc::quadratic(d)?;
        Ok(QuadReal { rat: BigRational::zero(), irr: BigRational::one(), field })
    }

    /// `a + b sqrt(d)` with integer coefficients.
    pub fn from_ints(a: i64, b: i64, field: FieldDesc) -> Self {
        let irr = BigRational::from_integer(b.into());
        match field {
            FieldDesc::Rational => {
                assert_eq!(b, 0, "irrational part in rational mode");
                Self::from_int(a)
            }
            FieldDesc::Quadratic(_) => {
                QuadReal { rat: BigRational::from_integer(a.into()), irr, field }.normalized()
            }
        }
    }

    pub fn rat(&self) -> &BigRational {
        &self.rat
    }

    pub fn irr(&self) -> &BigRational {
        &self.irr
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    fn normalized(mut self) -> Self {
        if self.irr.is_zero() {
            self.field = FieldDesc::Rational;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    /// Exact sign of `rat + irr sqrt(D)`.
    pub fn sign(&self) -> i8 {
        let sa = signum(&self.rat);
        let sb = signum(&self.irr);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // Opposite signs: compare rat^2 with irr^2 * D.
        let d = self.field.radicand().expect("irrational part implies a radicand");
        let lhs = &self.rat * &self.rat;
        let rhs = &self.irr * &self.irr * BigRational::from_integer(d.into());
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => unreachable!("sqrt(D) is irrational"),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// The Galois conjugate `rat - irr sqrt(D)`.
    pub fn galois(&self) -> Self {
        QuadReal { rat: self.rat.clone(), irr: -self.irr.clone(), field: self.field }
    }

    /// Field norm `rat^2 - D irr^2`.
    pub fn norm(&self) -> BigRational {
        match self.field {
            FieldDesc::Rational => &self.rat * &self.rat,
            FieldDesc::Quadratic(d) => {
                &self.rat * &self.rat - &self.irr * &self.irr * BigRational::from_integer(d.into())
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ScalarError> {
        let field = self.field.join(other.field)?;
        Ok(QuadReal { rat: &self.rat + &other.rat, irr: &self.irr + &other.irr, field }.normalized())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        let field = self.field.join(other.field)?;
        let mut rat = &self.rat * &other.rat;
        if let FieldDesc::Quadratic(d) = field {
            rat += &self.irr * &other.irr * BigRational::from_integer(d.into());
        }
        let irr = &self.rat * &other.irr + &self.irr * &other.rat;
        Ok(QuadReal { rat, irr, field }.normalized())
    }

    pub fn inverse(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let n = self.norm();
        Ok(QuadReal { rat: &self.rat / &n, irr: -&self.irr / &n, field: self.field }.normalized())
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.try_mul(&other.inverse()?)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let k = BigRational::from_integer(k.into());
        QuadReal { rat: &self.rat * &k, irr: &self.irr * &k, field: self.field }.normalized()
    }

    pub fn scale_rational(&self, k: &BigRational) -> Self {
        QuadReal { rat: &self.rat * k, irr: &self.irr * k, field: self.field }.normalized()
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        let approx = self.to_f64();
        let mut k = if approx.is_finite() && approx.abs() < 1e15 {
            BigInt::from(approx.floor() as i64)
        } else {
            // Huge magnitude: start from the rational floor and walk.
            self.rat.floor().to_integer()
        };
        loop {
            let kq = QuadReal::from_bigint(k.clone());
            if (&kq - self).is_positive() {
                k -= 1;
                continue;
            }
            let k1 = QuadReal::from_bigint(&k + 1);
            if !(&k1 - self).is_positive() {
                k += 1;
                continue;
            }
            return k;
        }
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.rat.to_f64().unwrap_or(f64::NAN);
        match self.field {
            FieldDesc::Rational => r,
            FieldDesc::Quadratic(d) => r + self.irr.to_f64().unwrap_or(f64::NAN) * (d as f64).sqrt(),
        }
    }

    /// Common denominator of both coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        self.rat.denom().lcm(self.irr.denom())
    }
}

fn signum(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialEq for QuadReal {
    fn eq(&self, other: &Self) -> bool {
        self.rat == other.rat
            && self.irr == other.irr
            && (self.irr.is_zero() || self.field == other.field)
    }
}

impl Eq for QuadReal {}

impl PartialOrd for QuadReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadReal {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign().cmp(&0)
    }
}

impl std::hash::Hash for QuadReal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rat.hash(state);
        self.irr.hash(state);
    }
}

// Operator impls panic on field mixing; parsing guarantees a single field.
macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&QuadReal> for &QuadReal {
            type Output = QuadReal;
            fn $m(self, rhs: &QuadReal) -> QuadReal {
                let f: fn(&QuadReal, &QuadReal) -> Result<QuadReal, ScalarError> = $body;
                f(self, rhs).expect("mixed quadratic fields")
            }
        }
        impl $tr<QuadReal> for QuadReal {
            type Output = QuadReal;
            fn $m(self, rhs: QuadReal) -> QuadReal {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QuadReal> for QuadReal {
            type Output = QuadReal;
            fn $m(self, rhs: &QuadReal) -> QuadReal {
                (&self).$m(rhs)
            }
        }
        impl $tr<QuadReal> for &QuadReal {
            type Output = QuadReal;
            fn $m(self, rhs: QuadReal) -> QuadReal {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.try_add(b));
binop!(Sub, sub, |a, b| a.try_add(&-b.clone()));
binop!(Mul, mul, |a, b| a.try_mul(b));

impl AddAssign<&QuadReal> for QuadReal {
    fn add_assign(&mut self, rhs: &QuadReal) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&QuadReal> for QuadReal {
    fn sub_assign(&mut self, rhs: &QuadReal) {
        *self = &*self - rhs;
    }
}

impl Neg for QuadReal {
    type Output = QuadReal;
    fn neg(self) -> QuadReal {
        QuadReal { rat: -self.rat, irr: -self.irr, field: self.field }
    }
}

impl Neg for &QuadReal {
    type Output = QuadReal;
    fn neg(self) -> QuadReal {
        -self.clone()
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadReal {
    /// Canonical text form: `a/b+c/d*sqrt(D)` with zero parts and unit
    /// coefficients omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match (self.field, self.irr.is_zero()) {
            (FieldDesc::Quadratic(d), false) => d,
            _ => return write!(f, "{}", fmt_rational(&self.rat)),
        };
        let mut out = String::new();
        if !self.rat.is_zero() {
            out.push_str(&fmt_rational(&self.rat));
        }
        let neg = self.irr.is_negative();
        let mag = self.irr.abs();
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if !mag.is_one() {
            out.push_str(&fmt_rational(&mag));
            out.push('*');
        }
        out.push_str(&format!("sqrt({d})"));
        f.write_str(&out)
    }
}

impl Serialize for QuadReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl std::str::FromStr for QuadReal {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_quadreal(s)
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, msg: &str) -> ScalarError {
        ScalarError::Parse { input: self.src.to_string(), message: format!("{msg} at offset {}", self.pos) }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(w) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(self.src[start..self.pos].parse().expect("digits"))
    }

    fn rational(&mut self) -> Result<BigRational, ScalarError> {
        let num = self.integer()?;
        if self.eat('/') {
            let den = self.integer()?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    fn sqrt(&mut self) -> Result<u64, ScalarError> {
        if !self.eat('(') {
            return Err(self.err("expected '(' after sqrt"));
        }
        let n = self.integer()?;
        if !self.eat(')') {
            return Err(self.err("expected ')'"));
        }
        n.to_u64().filter(|&n| n >= 1).ok_or_else(|| self.err("radicand must be a positive integer"))
    }
}

/// Parses the text form `a/b+c/d*sqrt(D)` (whitespace allowed, zero parts
/// omissible, `sqrt(D)*c`, `sqrt(D)/c` and non-squarefree radicands
/// accepted).
pub fn parse_quadreal(s: &str) -> Result<QuadReal, ScalarError> {
    let mut lx = Lexer { src: s, pos: 0 };
    let mut acc = QuadReal::zero();
    let mut first = true;
    loop {
        lx.skip_ws();
        if lx.pos == s.len() {
            if first {
                return Err(lx.err("empty number"));
            }
            break;
        }
        let mut sign = BigRational::one();
        if lx.eat('-') {
            sign = -sign;
        } else if !lx.eat('+') && !first {
            return Err(lx.err("expected '+' or '-'"));
        }
        first = false;
        let term = if lx.eat_word("sqrt") {
            let n = lx.sqrt()?;
            let mut coef = BigRational::one();
            if lx.eat('*') {
                coef = lx.rational()?;
            } else if lx.eat('/') {
                let den = lx.integer()?;
                if den.is_zero() {
                    return Err(lx.err("zero denominator"));
                }
                coef = BigRational::new(BigInt::one(), den);
            }
            radical_term(coef, n)?
        } else {
            let coef = lx.rational()?;
            if lx.eat('*') {
                if !lx.eat_word("sqrt") {
                    return Err(lx.err("expected sqrt after '*'"));
                }
                let n = lx.sqrt()?;
                radical_term(coef, n)?
            } else {
                QuadReal::from_rational(coef)
            }
        };
        acc = acc.try_add(&term.scale_rational(&sign))?;
    }
    Ok(acc)
}

fn radical_term(coef: BigRational, n: u64) -> Result<QuadReal, ScalarError> {
    let (k, m) = split_square(n);
    let coef = coef * BigRational::from_integer(k.into());
    if m == 1 {
        Ok(QuadReal::from_rational(coef))
    } else {
        Ok(QuadReal::sqrt(m)?.scale_rational(&coef))
    }
}

/// A complex number whose real and imaginary parts are [`QuadReal`]s.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KComplex {
    pub re: QuadReal,
    pub im: QuadReal,
}

impl KComplex {
    pub fn new(re: QuadReal, im: QuadReal) -> Self {
        KComplex { re, im }
    }

    pub fn zero() -> Self {
        KComplex { re: QuadReal::zero(), im: QuadReal::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        KComplex { re: QuadReal::from_int(re), im: QuadReal::from_int(im) }
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn field(&self) -> Result<FieldDesc, ScalarError> {
        self.re.field().join(self.im.field())
    }

    pub fn conj(&self) -> Self {
        KComplex { re: self.re.clone(), im: -&self.im }
    }

    pub fn galois(&self) -> Self {
        KComplex { re: self.re.galois(), im: self.im.galois() }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        KComplex { re: self.re.scale_int(k), im: self.im.scale_int(k) }
    }

    pub fn scale_real(&self, k: &QuadReal) -> Self {
        KComplex { re: &self.re * k, im: &self.im * k }
    }

    /// `Im(conj(self) * other) = Re(self) Im(other) - Im(self) Re(other)`.
    pub fn cross(&self, other: &Self) -> QuadReal {
        &self.re * &other.im - &self.im * &other.re
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl Add<&KComplex> for &KComplex {
    type Output = KComplex;
    fn add(self, rhs: &KComplex) -> KComplex {
        KComplex { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub<&KComplex> for &KComplex {
    type Output = KComplex;
    fn sub(self, rhs: &KComplex) -> KComplex {
        KComplex { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul<&KComplex> for &KComplex {
    type Output = KComplex;
    fn mul(self, rhs: &KComplex) -> KComplex {
        KComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &KComplex {
    type Output = KComplex;
    fn neg(self) -> KComplex {
        KComplex { re: -&self.re, im: -&self.im }
    }
}

impl AddAssign<&KComplex> for KComplex {
    fn add_assign(&mut self, rhs: &KComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl fmt::Display for KComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}

impl Serialize for KComplex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.re.to_string(), self.im.to_string()].serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadReal {
        s.parse().unwrap()
    }

    #[test]
    fn sign_examples() {
        assert_eq!(QuadReal::from_ints(0, 0, FieldDesc::Quadratic(2)).sign(), 0);
        // 9 > 8
        assert_eq!(q("3-2*sqrt(2)").sign(), 1);
        // 1 < 2
        assert_eq!(q("1-sqrt(2)").sign(), -1);
        assert_eq!(q("-3+2*sqrt(2)").sign(), -1);
        assert_eq!(q("-1+sqrt(2)").sign(), 1);
        assert_eq!(q("-5/7").sign(), -1);
    }

    #[test]
    fn galois_examples() {
        assert_eq!(q("1+sqrt(2)").galois(), q("1-sqrt(2)"));
        let x = q("3/2+5*sqrt(3)");
        assert_eq!(x.galois().galois(), x);
        assert_eq!(QuadReal::from_int(7).galois(), QuadReal::from_int(7));
    }

    #[test]
    fn text_form_round_trip() {
        for (input, canon) in [
            ("3", "3"),
            ("sqrt(2)", "sqrt(2)"),
            ("-1/2*sqrt(5)", "-1/2*sqrt(5)"),
            ("1/2 + 3/4*sqrt(7)", "1/2+3/4*sqrt(7)"),
            ("2-sqrt(3)", "2-sqrt(3)"),
            ("sqrt(8)", "2*sqrt(2)"),
            ("sqrt(9)", "3"),
            ("sqrt(2)*3", "3*sqrt(2)"),
            ("sqrt(2)/2", "1/2*sqrt(2)"),
            ("4/6", "2/3"),
            ("-0", "0"),
            ("1+sqrt(2)-sqrt(2)", "1"),
        ] {
            let v = q(input);
            assert_eq!(v.to_string(), canon, "input {input}");
            assert_eq!(q(&v.to_string()), v);
        }
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "1/0", "sqrt(2", "2*", "abc", "1 2", "sqrt(0)"] {
            assert!(bad.parse::<QuadReal>().is_err(), "{bad}");
        }
        assert!(matches!("sqrt(2)+sqrt(3)".parse::<QuadReal>(), Err(ScalarError::FieldMix { .. })));
    }

    #[test]
    fn inverse_and_floor() {
        let x = q("1+sqrt(2)");
        assert_eq!(&x * &x.inverse().unwrap(), QuadReal::one());
        assert_eq!(x.floor(), BigInt::from(2));
        assert_eq!(q("-1/3*sqrt(2)").floor(), BigInt::from(-1));
        assert_eq!(q("7").floor(), BigInt::from(7));
        assert!(QuadReal::zero().inverse().is_err());
    }

    #[test]
    fn radicand_validation() {
        assert!(FieldDesc::quadratic(1).is_err());
        assert!(FieldDesc::quadratic(12).is_err());
        assert!(FieldDesc::quadratic(15).is_ok());
    }
}
