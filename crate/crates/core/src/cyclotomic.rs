//! Exact arithmetic in the cyclotomic field Q(ζ_N).
//!
//! Elements are kept reduced modulo the N-th cyclotomic polynomial Φ_N, so
//! two elements are equal exactly when their coefficient vectors are equal.
//! Internally only the `φ(N)` power-basis coefficients are stored; the
//! remaining exponents are always zero in canonical form.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Per-order reduction data, shared by every element of that order.
#[derive(Debug)]
struct Field {
    order: u32,
    /// Degree of Φ_N, i.e. Euler's totient of N.
    degree: usize,
    /// Reduced coordinates of ζ^e for e in 0..N.
    powers: Vec<Vec<i64>>,
}

fn field(order: u32) -> Arc<Field> {
    static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    let cache = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cyclotomic field cache poisoned");
    guard
        .entry(order)
        .or_insert_with(|| Arc::new(Field::new(order)))
        .clone()
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Φ_n as integer coefficients, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n > 0, "cyclotomic polynomial of order 0");
    // x^n - 1
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        poly = exact_div_monic(&poly, &cyclotomic_polynomial(d));
    }
    poly
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "non-exact polynomial division");
    quot
}

impl Field {
    fn new(order: u32) -> Self {
        assert!(order > 0, "cyclotomic order must be positive");
        let phi = cyclotomic_polynomial(order);
        let degree = phi.len() - 1;
        let n = order as usize;
        let mut powers = Vec::with_capacity(n);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x and reduce the overflow term with the monic Φ_N
            let top = cur[degree - 1];
            let mut next = vec![0i64; degree];
            next[1..degree].copy_from_slice(&cur[..(degree - 1)]);
            if top != 0 {
                for j in 0..degree {
                    next[j] -= top * phi[j];
                }
            }
            cur = next;
        }
        Field {
            order,
            degree,
            powers,
        }
    }
}

/// Element of Q(ζ_N) in canonical reduced form.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<Field>,
    coeffs: Vec<Rational>,
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic[N={}]({})", self.order(), self)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Hash for Cyclotomic {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.order().hash(state);
        self.coeffs.hash(state);
    }
}

/// Binary operation selector for [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn arith(a: &Cyclotomic, b: &Cyclotomic, op: ArithOp) -> Result<Cyclotomic> {
    a.check_order(b)?;
    Ok(match op {
        ArithOp::Add => a.add_unchecked(b),
        ArithOp::Sub => a.sub_unchecked(b),
        ArithOp::Mul => a.mul_unchecked(b),
    })
}

/// ω_d^s written in Q(ζ_ambient).
pub fn root_of_unity(order: u32, exponent: i64, ambient: u32) -> Result<Cyclotomic> {
    if order == 0 || ambient == 0 || !ambient.is_multiple_of(order) {
        return Err(Error::IncompatibleOrder {
            left: order,
            right: ambient,
        });
    }
    let step = i64::from(ambient / order);
    let e = (step * exponent).rem_euclid(i64::from(ambient));
    Ok(Cyclotomic::zeta_power(e as u32, ambient))
}

impl Cyclotomic {
    pub fn zero(order: u32) -> Self {
        let field = field(order);
        let coeffs = vec![Rational::zero(); field.degree];
        Cyclotomic { field, coeffs }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(Rational::one(), order)
    }

    pub fn from_int(value: i64, order: u32) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(value)), order)
    }

    pub fn from_rational(value: Rational, order: u32) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = value;
        z
    }

    /// ζ_N^k.
    pub fn zeta_power(k: u32, order: u32) -> Self {
        let field = field(order);
        let e = (k % order) as usize;
        let coeffs = field.powers[e]
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        Cyclotomic { field, coeffs }
    }

    /// Builds Σ coeffs[k]·ζ_N^k for an arbitrary-length coefficient list
    /// (exponents are taken mod N) and canonicalizes.
    pub fn from_coeffs(order: u32, coeffs: &[Rational]) -> Self {
        let mut out = Self::zero(order);
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.add_term(c, k as u64);
            }
        }
        out
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    /// Coefficients of ζ_N^0..ζ_N^{N-1} in canonical form (length N).
    pub fn coeffs(&self) -> Vec<Rational> {
        let mut out = self.coeffs.clone();
        out.resize(self.order() as usize, Rational::zero());
        out
    }

    /// Canonical coefficients restricted to the power basis 1, ζ, …, ζ^{φ(N)-1}.
    pub fn reduced_coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// The rational value of this element, if it lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_order(&self, other: &Cyclotomic) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::IncompatibleOrder {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    /// Adds c·ζ^e in place.
    fn add_term(&mut self, c: &Rational, e: u64) {
        let e = (e % u64::from(self.order())) as usize;
        let field = self.field.clone();
        for (slot, &p) in self.coeffs.iter_mut().zip(field.powers[e].iter()) {
            if p != 0 {
                *slot += c * Rational::from_integer(BigInt::from(p));
            }
        }
    }

    fn add_unchecked(&self, other: &Cyclotomic) -> Cyclotomic {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Cyclotomic {
            field: self.field.clone(),
            coeffs,
        }
    }

    fn sub_unchecked(&self, other: &Cyclotomic) -> Cyclotomic {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Cyclotomic {
            field: self.field.clone(),
            coeffs,
        }
    }

    fn mul_unchecked(&self, other: &Cyclotomic) -> Cyclotomic {
        if let Some(q) = self.as_rational() {
            return other.scale(q);
        }
        if let Some(q) = other.as_rational() {
            return self.scale(q);
        }
        let n = self.order() as usize;
        let mut raw = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[(i + j) % n] += a * b;
            }
        }
        let mut out = Cyclotomic::zero(self.order());
        for (e, c) in raw.iter().enumerate() {
            if !c.is_zero() {
                out.add_term(c, e as u64);
            }
        }
        out
    }

    pub fn checked_add(&self, other: &Cyclotomic) -> Result<Cyclotomic> {
        arith(self, other, ArithOp::Add)
    }

    pub fn checked_sub(&self, other: &Cyclotomic) -> Result<Cyclotomic> {
        arith(self, other, ArithOp::Sub)
    }

    pub fn checked_mul(&self, other: &Cyclotomic) -> Result<Cyclotomic> {
        arith(self, other, ArithOp::Mul)
    }

    pub fn scale(&self, q: &Rational) -> Cyclotomic {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Complex conjugation, ζ^k ↦ ζ^{-k}.
    pub fn conj(&self) -> Cyclotomic {
        if self.as_rational().is_some() {
            return self.clone();
        }
        let n = u64::from(self.order());
        let mut out = Cyclotomic::zero(self.order());
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.add_term(c, (n - k as u64) % n);
            }
        }
        out
    }

    /// Re-expresses the element in Q(ζ_target); requires N | target.
    pub fn lift(&self, target: u32) -> Result<Cyclotomic> {
        if target == 0 || !target.is_multiple_of(self.order()) {
            return Err(Error::IncompatibleOrder {
                left: self.order(),
                right: target,
            });
        }
        if target == self.order() {
            return Ok(self.clone());
        }
        let step = u64::from(target / self.order());
        let mut out = Cyclotomic::zero(target);
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.add_term(c, k as u64 * step);
            }
        }
        Ok(out)
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = f64::from(self.order());
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().unwrap_or(f64::NAN);
            let theta = std::f64::consts::TAU * k as f64 / n;
            acc += Complex64::from_polar(v, theta);
        }
        acc
    }

    /// Least common denominator of the coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Canonical text literal: terms `<rational>*w^<k>` joined by ` + `.
    pub fn to_literal(&self) -> String {
        self.to_string()
    }

    /// Parses a literal such as `"1 + 1*w^1 + -1/2*w^2"` in Q(ζ_order).
    pub fn parse_literal(text: &str, order: u32) -> Result<Cyclotomic> {
        let bad = |why: &str| Error::Literal {
            literal: text.to_string(),
            reason: why.to_string(),
        };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty literal"));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..bytes.len() {
            let prev = bytes[i - 1];
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(prev, b'*' | b'^' | b'/' | b'+' | b'-')
            {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);

        let mut out = Cyclotomic::zero(order);
        for term in terms {
            let term = term.strip_prefix('+').unwrap_or(term);
            let (coef, exp) = match term.split_once('*') {
                Some((c, w)) => {
                    let e = w
                        .strip_prefix("w^")
                        .ok_or_else(|| bad("expected `w^<k>` after `*`"))?;
                    let e: u32 = e.parse().map_err(|_| bad("bad exponent"))?;
                    (c, e)
                }
                None if term == "w" => ("1", 1),
                None => match term.strip_prefix("w^") {
                    Some(e) => ("1", e.parse().map_err(|_| bad("bad exponent"))?),
                    None => (term, 0),
                },
            };
            if exp >= order {
                return Err(bad("exponent not below the ambient order"));
            }
            let q = parse_rational(coef).ok_or_else(|| bad("bad rational coefficient"))?;
            out.add_term(&q, u64::from(exp));
        }
        Ok(out)
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*w^{k}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_add(rhs).expect("cyclotomic order mismatch")
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_sub(rhs).expect("cyclotomic order mismatch")
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_mul(rhs).expect("cyclotomic order mismatch")
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

/// Smallest common ambient order for a list of root orders (always even).
pub fn ambient_order(orders: impl IntoIterator<Item = u32>) -> u32 {
    orders.into_iter().fold(2u32, |acc, d| acc.lcm(&d.max(1)))
}

/// |x| as an exact rational when x ∈ Q, otherwise a rational upper bound on
/// the complex modulus obtained by rounding the floating value outward.
pub fn modulus_upper_bound(x: &Cyclotomic) -> Rational {
    if let Some(q) = x.as_rational() {
        return q.abs();
    }
    // float error on Σ c_k ζ^k is tiny relative to the coefficient mass
    let mass: f64 = x
        .reduced_coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY).abs())
        .sum();
    let approx = x.to_complex().norm() + mass * 1e-12 + 1e-300;
    let scale = 1u64 << 32;
    let num = (approx * scale as f64).ceil() as u64 + 1;
    Rational::new(BigInt::from(num), BigInt::from(scale))
}
