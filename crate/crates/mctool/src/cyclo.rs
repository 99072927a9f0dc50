//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! Elements are stored as coordinate vectors in the power basis
//! `1, z, ..., z^(phi(N)-1)` after reduction modulo the N-th cyclotomic
//! polynomial, where `z` denotes a fixed primitive N-th root of unity.
//! All coefficients are arbitrary-precision rationals; equality is exact.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;
use thiserror::Error;

/// Exact rational scalar. Stored reduced with positive denominator.
pub type Rational = BigRational;

pub const DEFAULT_MAX_ORDER: u64 = 1_000_000;

/// Cyclotomic order bound; overridable through `MCTOOL_MAX_ORDER`.
pub fn max_order() -> u64 {
    std::env::var("MCTOOL_MAX_ORDER")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_ORDER)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic order {0} exceeds the configured bound {1}")]
    OrderOverflow(u64, u64),
    #[error("order {0} does not divide {1}")]
    NotADivisor(u64, u64),
    #[error("element does not lie in Q(zeta_{0})")]
    NotInSubfield(u64),
    #[error("exponent {0} is not coprime to the order {1}")]
    NotCoprime(u64, u64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u64) -> Vec<u64> {
    let mut divs = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            divs.push(d);
            if d != n / d {
                divs.push(n / d);
            }
        }
        d += 1;
    }
    divs.sort_unstable();
    divs
}

/// Integer polynomial coefficients, ascending degree.
type IntPoly = Vec<BigInt>;

static CYCLO_CACHE: Lazy<Mutex<HashMap<u64, IntPoly>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// The N-th cyclotomic polynomial, monic of degree `phi(N)`, computed by
/// iterated exact division of `x^N - 1` by the `Phi_d` for proper divisors d.
pub fn cyclotomic_polynomial(n: u64) -> IntPoly {
    if let Some(p) = CYCLO_CACHE.lock().unwrap().get(&n) {
        return p.clone();
    }
    let poly = if n == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        // x^n - 1
        let mut num = vec![BigInt::zero(); n as usize + 1];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        for d in divisors(n) {
            if d != n {
                num = int_poly_div_exact(&num, &cyclotomic_polynomial(d));
            }
        }
        num
    };
    CYCLO_CACHE.lock().unwrap().insert(n, poly.clone());
    poly
}

/// Exact division of integer polynomials; the divisor must be monic.
fn int_poly_div_exact(num: &IntPoly, den: &IntPoly) -> IntPoly {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let nd = rem.len() - 1;
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd].clone();
        quot[k] = c.clone();
        for j in 0..=dd {
            rem[k + j] -= &c * &den[j];
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division not exact");
    quot
}

fn rat(i: i64) -> Rational {
    Rational::from_integer(BigInt::from(i))
}

/// An element of `Q(zeta_N)` in the power basis mod `Phi_N`.
#[derive(Clone)]
pub struct CycNum {
    order: u64,
    coeffs: Vec<Rational>,
}

impl CycNum {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn zero(order: u64) -> Self {
        CycNum {
            order,
            coeffs: vec![Rational::zero(); euler_phi(order) as usize],
        }
    }

    pub fn one(order: u64) -> Self {
        let mut c = Self::zero(order);
        c.coeffs[0] = Rational::one();
        c
    }

    pub fn from_rational(r: Rational) -> Self {
        CycNum {
            order: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_integer(i: i64) -> Self {
        Self::from_rational(rat(i))
    }

    /// Build from polynomial coefficients in `z` (any length); reduces mod `Phi_N`.
    pub fn from_poly(order: u64, coeffs: Vec<Rational>) -> Self {
        let reduced = reduce_mod_cyclo(coeffs, order);
        CycNum {
            order,
            coeffs: reduced,
        }
    }

    /// `zeta_N^k` as a canonical element of order N.
    pub fn root_of_unity(order: u64, k: i64) -> Result<Self, CycloError> {
        let bound = max_order();
        if order > bound {
            return Err(CycloError::OrderOverflow(order, bound));
        }
        let k = k.rem_euclid(order as i64) as usize;
        let mut poly = vec![Rational::zero(); k + 1];
        poly[k] = Rational::one();
        Ok(Self::from_poly(order, poly))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Same field element written in `Q(zeta_M)`; requires `order | M`.
    pub fn embed(&self, m: u64) -> Result<Self, CycloError> {
        if m % self.order != 0 {
            return Err(CycloError::NotADivisor(self.order, m));
        }
        let bound = max_order();
        if m > bound {
            return Err(CycloError::OrderOverflow(m, bound));
        }
        if m == self.order {
            return Ok(self.clone());
        }
        let step = (m / self.order) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[j * step] = c.clone();
        }
        Ok(Self::from_poly(m, poly))
    }

    /// Inverse of `embed`: rewrite in `Q(zeta_n)` when the element lies there.
    pub fn project(&self, n: u64) -> Result<Self, CycloError> {
        if self.order % n != 0 {
            return Err(CycloError::NotADivisor(n, self.order));
        }
        if n == self.order {
            return Ok(self.clone());
        }
        let phi_n = euler_phi(n) as usize;
        let phi_m = euler_phi(self.order) as usize;
        // Columns of the linear system: images of the power basis of Q(zeta_n).
        let mut cols = Vec::with_capacity(phi_n);
        for j in 0..phi_n {
            let b = Self::root_of_unity(n, j as i64)?.embed(self.order)?;
            cols.push(b.coeffs);
        }
        let x = solve_rational_system(phi_m, &cols, &self.coeffs)
            .ok_or(CycloError::NotInSubfield(n))?;
        Ok(CycNum {
            order: n,
            coeffs: x,
        })
    }

    /// Apply the Galois automorphism `zeta_N -> zeta_N^t` with `gcd(t, N) = 1`.
    pub fn galois(&self, t: u64) -> Result<Self, CycloError> {
        if BigInt::from(t).gcd(&BigInt::from(self.order)) != BigInt::one() {
            return Err(CycloError::NotCoprime(t, self.order));
        }
        let mut poly = vec![Rational::zero(); self.order as usize];
        if self.order == 1 {
            return Ok(self.clone());
        }
        for (j, c) in self.coeffs.iter().enumerate() {
            let e = (j as u64 * t) % self.order;
            poly[e as usize] += c;
        }
        Ok(Self::from_poly(self.order, poly))
    }

    fn unify(&self, other: &Self) -> Result<(Self, Self), CycloError> {
        if self.order == other.order {
            return Ok((self.clone(), other.clone()));
        }
        let l = lcm_checked(self.order, other.order)?;
        Ok((self.embed(l)?, other.embed(l)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self, CycloError> {
        let (mut a, b) = self.unify(other)?;
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        Ok(a)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CycloError> {
        let (mut a, b) = self.unify(other)?;
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        Ok(a)
    }

    pub fn neg(&self) -> Self {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, CycloError> {
        let (a, b) = self.unify(other)?;
        let mut prod = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Ok(Self::from_poly(a.order, prod))
    }

    pub fn inv(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        let modulus: Vec<Rational> = cyclotomic_polynomial(self.order)
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        let inv = poly_mod_inverse(&self.coeffs, &modulus).expect("Phi_N is irreducible");
        Ok(CycNum {
            order: self.order,
            coeffs: reduce_mod_cyclo(inv, self.order),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, CycloError> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, CycloError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.order);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            sq = sq.mul(&sq)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Multiplicative order, when this is a root of unity in `Q(zeta_N)`.
    pub fn mult_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let bound = if self.order % 2 == 0 {
            self.order
        } else {
            2 * self.order
        };
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_one() {
                return Some(k);
            }
            acc = acc.mul(self).ok()?;
        }
        None
    }
}

// Operator sugar for contexts where both operands are already in a common
// admissible field (e.g. matrix entries); panics only on order overflow.
impl std::ops::Add for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        CycNum::add(self, rhs).expect("cyclotomic order overflow")
    }
}

impl std::ops::Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        CycNum::sub(self, rhs).expect("cyclotomic order overflow")
    }
}

impl std::ops::Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        CycNum::mul(self, rhs).expect("cyclotomic order overflow")
    }
}

impl std::ops::Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum::neg(self)
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        match self.unify(other) {
            Ok((a, b)) => a.coeffs == b.coeffs,
            Err(_) => false,
        }
    }
}

impl Eq for CycNum {}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum(N={}, {})", self.order, self)
    }
}

fn lcm_checked(a: u64, b: u64) -> Result<u64, CycloError> {
    let l = a / a.gcd(&b) * b;
    let bound = max_order();
    if l > bound {
        return Err(CycloError::OrderOverflow(l, bound));
    }
    Ok(l)
}

pub fn lcm_order(a: u64, b: u64) -> Result<u64, CycloError> {
    lcm_checked(a, b)
}

/// Remainder of a rational polynomial modulo `Phi_N`, padded to length `phi(N)`.
fn reduce_mod_cyclo(mut poly: Vec<Rational>, order: u64) -> Vec<Rational> {
    let phi = euler_phi(order) as usize;
    let modulus = cyclotomic_polynomial(order);
    while poly.len() > phi {
        let deg = poly.len() - 1;
        let lead = poly.pop().unwrap();
        if lead.is_zero() {
            continue;
        }
        let shift = deg - phi;
        for j in 0..phi {
            if !modulus[j].is_zero() {
                let m = Rational::from_integer(modulus[j].clone());
                poly[shift + j] -= &lead * m;
            }
        }
    }
    poly.resize(phi, Rational::zero());
    poly
}

fn poly_deg(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn poly_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

/// Division with remainder in `Q[x]`.
fn poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let dd = poly_deg(den).expect("division by zero polynomial");
    let mut rem = num.to_vec();
    let nd = match poly_deg(&rem) {
        Some(d) if d >= dd => d,
        _ => return (vec![Rational::zero()], poly_trim(rem)),
    };
    let lead_inv = den[dd].recip();
    let mut quot = vec![Rational::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = &rem[k + dd] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for j in 0..=dd {
            let t = &c * &den[j];
            rem[k + j] -= t;
        }
    }
    (poly_trim(quot), poly_trim(rem))
}

fn poly_mul_raw(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub_raw(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), Rational::zero());
    }
    for (j, y) in b.iter().enumerate() {
        out[j] -= y;
    }
    poly_trim(out)
}

/// Inverse of `a` modulo `m` in `Q[x]` via the extended Euclidean algorithm.
fn poly_mod_inverse(a: &[Rational], m: &[Rational]) -> Option<Vec<Rational>> {
    // Invariants: r0 = s0*a mod m, r1 = s1*a mod m.
    let mut r0 = m.to_vec();
    let mut r1 = poly_trim(a.to_vec());
    let mut s0 = vec![Rational::zero()];
    let mut s1 = vec![Rational::one()];
    while poly_deg(&r1).is_some() {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub_raw(&s0, &poly_mul_raw(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    let d = poly_deg(&r0)?;
    if d != 0 {
        return None; // gcd not constant
    }
    let scale = r0[0].recip();
    Some(s0.iter().map(|c| c * &scale).collect())
}

/// Solve `sum_j x_j * cols[j] = target` over the rationals.
fn solve_rational_system(
    rows: usize,
    cols: &[Vec<Rational>],
    target: &[Rational],
) -> Option<Vec<Rational>> {
    let n = cols.len();
    // Augmented matrix, row-reduced.
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..n {
        if let Some(r) = (prow..rows).find(|&r| !m[r][col].is_zero()) {
            m.swap(prow, r);
            let inv = m[prow][col].recip();
            for v in m[prow].iter_mut() {
                *v *= &inv;
            }
            for r in 0..rows {
                if r != prow && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..=n {
                        let t = &f * &m[prow][c];
                        m[r][c] -= t;
                    }
                }
            }
            pivots.push(col);
            prow += 1;
            if prow == rows {
                break;
            }
        }
    }
    // Inconsistent if a zero row has nonzero augmented entry.
    for r in prow..rows {
        if !m[r][n].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = m[i][n].clone();
    }
    Some(x)
}

// ---------------------------------------------------------------------------
// Text syntax: polynomial expressions in `z` with rational coefficients.
// ---------------------------------------------------------------------------

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, abs) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let coeff_is_one = abs.is_one();
            if k == 0 {
                write!(f, "{}", fmt_rational(&abs))?;
            } else {
                if !coeff_is_one {
                    write!(f, "{}*", fmt_rational(&abs))?;
                }
                if k == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{}", k)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse the scalar text syntax in the symbol `z` for an element of order N.
pub fn parse_scalar(text: &str, order: u64) -> Result<CycNum, CycloError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        order,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(CycloError::Parse(format!(
            "trailing input at position {} in {:?}",
            p.pos, text
        )));
    }
    Ok(v)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    order: u64,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<CycNum, CycloError> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some('-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<CycNum, CycloError> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let t = self.factor()?;
            acc = acc.mul(&t)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<CycNum, CycloError> {
        let base = self.base()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let mut neg = false;
            if self.peek() == Some('-') {
                neg = true;
                self.pos += 1;
            }
            let e = self.integer()?;
            let e: i64 = e
                .to_string()
                .parse()
                .map_err(|_| CycloError::Parse("exponent too large".into()))?;
            return base.pow(if neg { -e } else { e });
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<CycNum, CycloError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(CycloError::Parse("expected ')'".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('z') => {
                self.pos += 1;
                CycNum::root_of_unity(self.order, 1)?.embed(self.order)
            }
            Some(c) if c.is_ascii_digit() => {
                let numer = self.integer()?;
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let denom = self.integer()?;
                    if denom.is_zero() {
                        return Err(CycloError::Parse("zero denominator".into()));
                    }
                    Ok(CycNum::from_rational(Rational::new(numer, denom)).embed(self.order)?)
                } else {
                    Ok(CycNum::from_rational(Rational::from_integer(numer)).embed(self.order)?)
                }
            }
            other => Err(CycloError::Parse(format!("unexpected {:?}", other))),
        }
    }

    fn integer(&mut self) -> Result<BigInt, CycloError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(CycloError::Parse("expected number".into()));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| CycloError::Parse("bad integer".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zeta(n: u64, k: i64) -> CycNum {
        CycNum::root_of_unity(n, k).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        let to_i64 = |p: IntPoly| -> Vec<i64> {
            p.into_iter().map(|c| i64::try_from(c).unwrap()).collect()
        };
        assert_eq!(to_i64(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        // Phi_12 by iterated division of x^12 - 1.
        assert_eq!(to_i64(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(3)), vec![1, 1, 1]);
    }

    #[test]
    fn basic_identities() {
        // zeta_3 + zeta_3^2 = -1
        let s = zeta(3, 1).add(&zeta(3, 2)).unwrap();
        assert_eq!(s, CycNum::from_integer(-1));
        // i^2 = -1
        let i2 = zeta(4, 1).mul(&zeta(4, 1)).unwrap();
        assert_eq!(i2, CycNum::from_integer(-1));
        assert_eq!(zeta(2, 1), CycNum::from_integer(-1));
    }

    #[test]
    fn inverse_of_one_minus_zeta3() {
        // Oracle: (1 - zeta_3)(2 + zeta_3) = 2 + zeta_3 - 2 zeta_3 - zeta_3^2
        //       = 2 - zeta_3 - zeta_3^2 = 3 since 1 + zeta_3 + zeta_3^2 = 0.
        let a = CycNum::one(3).sub(&zeta(3, 1)).unwrap();
        let b = CycNum::from_integer(2).add(&zeta(3, 1)).unwrap();
        assert_eq!(a.mul(&b).unwrap(), CycNum::from_integer(3));
        let expected = b.div(&CycNum::from_integer(3)).unwrap();
        assert_eq!(a.inv().unwrap(), expected);
        assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
    }

    #[test]
    fn embeddings() {
        // zeta_3 = zeta_6^2
        assert_eq!(zeta(3, 1).embed(6).unwrap(), zeta(6, 2));
        // zeta_12^4 is zeta_3 in order 12
        assert_eq!(zeta(12, 4), zeta(3, 1).embed(12).unwrap());
        // zeta_4 embedded into order 12 squares to -1
        let e = zeta(4, 1).embed(12).unwrap();
        assert_eq!(e.mul(&e).unwrap(), CycNum::from_integer(-1));
        assert_eq!(e, zeta(12, 3));
        assert_eq!(
            CycNum::from_integer(-1).embed(12).unwrap(),
            CycNum::from_integer(-1)
        );
        // project undoes embed
        let a = zeta(3, 1).add(&CycNum::from_integer(5)).unwrap();
        assert_eq!(a.embed(12).unwrap().project(3).unwrap(), a);
        assert!(zeta(12, 1).project(3).is_err());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(
            CycNum::one(3).div(&CycNum::zero(3)),
            Err(CycloError::DivisionByZero)
        );
    }

    #[test]
    fn order_bound() {
        assert!(matches!(
            CycNum::root_of_unity(2_000_000, 1),
            Err(CycloError::OrderOverflow(..))
        ));
    }

    #[test]
    fn multiplicative_orders() {
        for n in [1u64, 2, 3, 4, 6, 12] {
            assert_eq!(zeta(n, 1).mult_order(), Some(n));
        }
        assert_eq!(zeta(12, 4).mult_order(), Some(3));
        assert_eq!(zeta(3, 1).neg().mult_order(), Some(6));
    }

    #[test]
    fn galois_action() {
        // zeta_12 -> zeta_12^7 fixes zeta_3 and inverts zeta_4.
        let z3 = zeta(12, 4);
        let z4 = zeta(12, 3);
        assert_eq!(z3.galois(7).unwrap(), z3);
        assert_eq!(z4.galois(7).unwrap(), z4.inv().unwrap());
        assert!(zeta(12, 1).galois(4).is_err());
    }

    #[test]
    fn text_round_trip() {
        for (s, n) in [
            ("1/2 - z^3", 12u64),
            ("z", 5),
            ("-1", 1),
            ("2*z^2 + 1/3", 7),
            ("0", 4),
        ] {
            let v = parse_scalar(s, n).unwrap();
            let printed = v.to_string();
            assert_eq!(parse_scalar(&printed, n).unwrap(), v);
        }
        assert_eq!(parse_scalar("z^2*z", 12).unwrap(), zeta(12, 3));
        assert!(parse_scalar("z +", 3).is_err());
        assert!(parse_scalar("w", 3).is_err());
    }

    fn arb_cyc(order: u64) -> impl Strategy<Value = CycNum> {
        let phi = euler_phi(order) as usize;
        proptest::collection::vec(-4i64..5, phi).prop_map(move |cs| {
            CycNum::from_poly(order, cs.into_iter().map(rat).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in arb_cyc(12), b in arb_cyc(12), c in arb_cyc(12)) {
            let ab_c = a.add(&b).unwrap().add(&c).unwrap();
            let a_bc = a.add(&b.add(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            let left = a.mul(&b.add(&c).unwrap()).unwrap();
            let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            if !a.is_zero() {
                prop_assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
            }
        }

        #[test]
        fn embed_is_homomorphism(a in arb_cyc(6), b in arb_cyc(6)) {
            let l = a.mul(&b).unwrap().embed(12).unwrap();
            let r = a.embed(12).unwrap().mul(&b.embed(12).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn print_parse_round_trip(a in arb_cyc(12)) {
            let s = a.to_string();
            prop_assert_eq!(parse_scalar(&s, 12).unwrap(), a);
        }
    }
}
