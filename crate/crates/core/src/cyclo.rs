//! Exact arithmetic in cyclotomic fields `Q(ζ_k)`.
//!
//! An element is stored in the power basis `1, ζ_k, …, ζ_k^{φ(k)-1}` with
//! rational coefficients, reduced modulo the cyclotomic polynomial `Φ_k`.
//! Since `Z[ζ_k]` is the full ring of integers of `Q(ζ_k)`, integrality is a
//! coefficient-wise test.
//!
//! Binary operations between elements of different conductors lift both
//! operands to the least common multiple. Results are never silently moved
//! to a smaller conductor; [`CycNum::normalize`] does that on request.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::rc::Rc;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::qmat::QMatrix;

pub type Rational = BigRational;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

pub fn euler_phi(k: u32) -> usize {
    let mut n = k;
    let mut result = k;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn mobius(k: u32) -> i64 {
    let mut n = k;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn divisors(k: u32) -> Vec<u32> {
    (1..=k).filter(|d| k.is_multiple_of(*d)).collect()
}

/// Coefficients of the `k`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(k: u32) -> Vec<i64> {
    assert!(k >= 1, "conductor must be positive");
    let mut known: HashMap<u32, Vec<i64>> = HashMap::new();
    for d in divisors(k) {
        // x^d - 1 divided by Φ_e for every proper divisor e of d
        let mut num = vec![0i64; d as usize + 1];
        num[0] = -1;
        num[d as usize] = 1;
        for e in divisors(d) {
            if e == d {
                continue;
            }
            num = poly_exact_div(&num, &known[&e]);
        }
        known.insert(d, num);
    }
    known.remove(&k).unwrap()
}

fn poly_exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    let qlen = rem.len() - dd;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Per-conductor reduction data.
struct FieldTable {
    phi: usize,
    /// `ζ^e` in the power basis for `e in 0..k`, as sparse `(index, coeff)` lists.
    powers: Vec<Vec<(usize, i64)>>,
    /// `Tr_{E/Q}(ζ^t)` for `t in 0..φ(k)`.
    traces: Vec<i64>,
}

impl FieldTable {
    fn build(k: u32) -> Self {
        let phi = euler_phi(k);
        let poly = cyclotomic_polynomial(k);
        let mut powers = Vec::with_capacity(k as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..k {
            powers.push(
                cur.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (i, c))
                    .collect(),
            );
            // multiply by x, then reduce the x^phi term with the monic Φ_k
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] -= top * poly[i];
                }
            }
        }
        let phi_k = phi as i64;
        let traces = (0..phi)
            .map(|t| {
                let g = gcd(t as u64, k as u64) as u32;
                let q = k / g;
                mobius(q) * phi_k / euler_phi(q) as i64
            })
            .collect();
        FieldTable {
            phi,
            powers,
            traces,
        }
    }
}

thread_local! {
    static TABLES: RefCell<HashMap<u32, Rc<FieldTable>>> = RefCell::new(HashMap::new());
}

fn table(k: u32) -> Rc<FieldTable> {
    TABLES.with(|t| {
        t.borrow_mut()
            .entry(k)
            .or_insert_with(|| Rc::new(FieldTable::build(k)))
            .clone()
    })
}

/// An element of the cyclotomic field `Q(ζ_k)`.
#[derive(Clone, Debug)]
pub struct CycNum {
    conductor: u32,
    coeffs: Vec<Rational>,
}

/// A root of unity written as `(-1)^negated · ζ_k^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootOfUnity {
    pub conductor: u32,
    pub exponent: u32,
    pub negated: bool,
}

impl RootOfUnity {
    /// Exponent `e` with this root equal to `ζ_n^e`, if it is an `n`-th root of unity.
    pub fn exponent_mod(&self, n: u32) -> Option<u32> {
        let two_k = 2 * self.conductor as u64;
        let e = (self.exponent as u64 * 2 + if self.negated { self.conductor as u64 } else { 0 }) % two_k;
        let scaled = e * n as u64;
        if !scaled.is_multiple_of(two_k) {
            return None;
        }
        Some(((scaled / two_k) % n as u64) as u32)
    }
}

fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

impl CycNum {
    pub fn zero(conductor: u32) -> Self {
        assert!(conductor >= 1, "conductor must be positive");
        CycNum {
            conductor,
            coeffs: vec![Rational::zero(); euler_phi(conductor)],
        }
    }

    pub fn one(conductor: u32) -> Self {
        Self::from_rational(conductor, Rational::one())
    }

    pub fn from_rational(conductor: u32, r: Rational) -> Self {
        let mut z = Self::zero(conductor);
        z.coeffs[0] = r;
        z
    }

    pub fn from_i64(conductor: u32, v: i64) -> Self {
        Self::from_rational(conductor, rat(v))
    }

    pub fn from_frac(conductor: u32, num: i64, den: i64) -> Self {
        Self::from_rational(conductor, Rational::new(num.into(), den.into()))
    }

    /// `ζ_k^e` for any integer `e`.
    pub fn zeta_pow(conductor: u32, e: i64) -> Self {
        let t = table(conductor);
        let idx = e.rem_euclid(conductor as i64) as usize;
        let mut z = Self::zero(conductor);
        for &(i, c) in &t.powers[idx] {
            z.coeffs[i] = rat(c);
        }
        z
    }

    pub fn zeta(conductor: u32) -> Self {
        Self::zeta_pow(conductor, 1)
    }

    /// The imaginary unit `i = ζ_4`.
    pub fn i() -> Self {
        Self::zeta(4)
    }

    /// `1 + i`, the prime above 2 that appears throughout the Barnes-Wall construction.
    pub fn one_plus_i() -> Self {
        Self::from_coeffs(4, vec![rat(1), rat(1)]).unwrap()
    }

    /// `√2 = ζ_8 + ζ_8^{-1}`.
    pub fn sqrt2() -> Self {
        Self::zeta(8) + Self::zeta_pow(8, -1)
    }

    pub fn from_coeffs(conductor: u32, coeffs: Vec<Rational>) -> Result<Self> {
        let phi = euler_phi(conductor);
        if coeffs.len() != phi {
            return Err(Error::ShapeMismatch(format!(
                "conductor {conductor} needs {phi} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(CycNum { conductor, coeffs })
    }

    /// Reduces an arbitrary polynomial in `ζ_k` modulo `Φ_k`.
    pub fn from_poly(conductor: u32, poly: &[Rational]) -> Self {
        let t = table(conductor);
        let mut z = Self::zero(conductor);
        for (e, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(i, p) in &t.powers[e % conductor as usize] {
                z.coeffs[i] += c * rat(p);
            }
        }
        z
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The constant coefficient, meaningful when [`is_rational`](Self::is_rational) holds.
    pub fn rational_part(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Fixed by complex conjugation, i.e. an element of the real subfield.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Integral and real: membership in `O_E ∩ K`.
    pub fn is_real_integral(&self) -> bool {
        self.is_integral() && self.is_real()
    }

    /// Re-expresses the element in `Q(ζ_target)`; requires `conductor | target`.
    pub fn lift(&self, target: u32) -> Result<Self> {
        if target == self.conductor {
            return Ok(self.clone());
        }
        if !target.is_multiple_of(self.conductor) {
            return Err(Error::NotInField {
                found: self.conductor,
                expected: target,
            });
        }
        let step = (target / self.conductor) as usize;
        let t = table(target);
        let mut z = Self::zero(target);
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(i, p) in &t.powers[e * step] {
                z.coeffs[i] += c * rat(p);
            }
        }
        Ok(z)
    }

    fn lift_unchecked(&self, target: u32) -> Self {
        self.lift(target).expect("target is a multiple of the conductor")
    }

    /// The element in the smallest cyclotomic field containing it, if it lies in `Q(ζ_d)`.
    pub fn restrict(&self, d: u32) -> Option<Self> {
        if d == self.conductor {
            return Some(self.clone());
        }
        if !self.conductor.is_multiple_of(d) {
            return None;
        }
        let phi_d = euler_phi(d);
        let phi_k = self.coeffs.len();
        let mut basis = QMatrix::zeros(phi_k, phi_d);
        for t in 0..phi_d {
            let lifted = Self::zeta_pow(d, t as i64).lift_unchecked(self.conductor);
            for (r, c) in lifted.coeffs.into_iter().enumerate() {
                basis.set(r, t, c);
            }
        }
        let sol = basis.solve(&self.coeffs)?;
        Some(CycNum {
            conductor: d,
            coeffs: sol,
        })
    }

    /// Moves the element to the smallest conductor dividing the current one that contains it.
    pub fn normalize(&self) -> Self {
        for d in divisors(self.conductor) {
            if let Some(z) = self.restrict(d) {
                return z;
            }
        }
        self.clone()
    }

    fn binary(&self, other: &Self, f: impl Fn(&[Rational], &[Rational], u32) -> CycNum) -> CycNum {
        if self.conductor == other.conductor {
            f(&self.coeffs, &other.coeffs, self.conductor)
        } else {
            let k = lcm(self.conductor, other.conductor);
            let a = self.lift_unchecked(k);
            let b = other.lift_unchecked(k);
            f(&a.coeffs, &b.coeffs, k)
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplication by `ζ_k^e` (a signed permutation of coefficients for 2-power conductors).
    pub fn mul_zeta_pow(&self, e: i64) -> Self {
        let k = self.conductor as i64;
        let t = table(self.conductor);
        let mut z = Self::zero(self.conductor);
        for (s, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = (s as i64 + e).rem_euclid(k) as usize;
            for &(i, p) in &t.powers[idx] {
                match p {
                    1 => z.coeffs[i] += c,
                    -1 => z.coeffs[i] -= c,
                    _ => z.coeffs[i] += c * rat(p),
                }
            }
        }
        z
    }

    /// Multiplication by `i`; lifts to a conductor divisible by 4 if needed.
    pub fn mul_i(&self) -> Self {
        if self.conductor.is_multiple_of(4) {
            self.mul_zeta_pow(self.conductor as i64 / 4)
        } else {
            let k = lcm(self.conductor, 4);
            self.lift_unchecked(k).mul_zeta_pow(k as i64 / 4)
        }
    }

    /// Image under the automorphism `ζ_k ↦ ζ_k^j`.
    pub fn galois(&self, j: i64) -> Result<Self> {
        let k = self.conductor as i64;
        if gcd(j.rem_euclid(k) as u64, k as u64) != 1 && k > 1 {
            return Err(Error::NotCoprime {
                exponent: j,
                conductor: self.conductor,
            });
        }
        Ok(self.galois_unchecked(j))
    }

    fn galois_unchecked(&self, j: i64) -> Self {
        let k = self.conductor as i64;
        let t = table(self.conductor);
        let mut z = Self::zero(self.conductor);
        for (s, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = (s as i64 * j).rem_euclid(k) as usize;
            for &(i, p) in &t.powers[idx] {
                z.coeffs[i] += c * rat(p);
            }
        }
        z
    }

    /// Complex conjugation, `ζ_k ↦ ζ_k^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois_unchecked(-1)
    }

    /// Sum of all `φ(k)` Galois conjugates.
    pub fn trace_e_over_q(&self) -> Rational {
        let t = table(self.conductor);
        self.coeffs
            .iter()
            .zip(&t.traces)
            .filter(|(c, _)| !c.is_zero())
            .fold(Rational::zero(), |acc, (c, &tr)| acc + c * rat(tr))
    }

    /// `|a|^2 = a · conj(a)`.
    pub fn norm_sq(&self) -> Self {
        self * &self.conj()
    }

    /// `Tr_{K/Q}(a a*) = ½ Tr_{E/Q}(a a*)`, the squared Euclidean length in the trace form.
    pub fn trace_k_over_q_of_norm(&self) -> Rational {
        self.norm_sq().trace_e_over_q() / rat(2)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Self::from_rational(self.conductor, self.coeffs[0].recip()));
        }
        let k = self.conductor as u64;
        let mut prod = Self::one(self.conductor);
        for u in 2..k {
            if gcd(u, k) == 1 {
                prod = &prod * &self.galois_unchecked(u as i64);
            }
        }
        let norm = self * &prod;
        debug_assert!(norm.is_rational());
        Ok(prod.scale(&norm.coeffs[0].recip()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// `Some(self / d)` when `d` divides `self` in the ring of integers.
    pub fn quotient_if_divisible(&self, d: &Self) -> Result<Option<Self>> {
        let q = self.div(d)?;
        Ok(q.is_integral().then_some(q))
    }

    /// Recognizes `±ζ_k^j`.
    pub fn root_of_unity(&self) -> Option<RootOfUnity> {
        if !self.is_integral() {
            return None;
        }
        let t = table(self.conductor);
        for negated in [false, true] {
            for (j, row) in t.powers.iter().enumerate() {
                if self.matches_sparse(row, negated) {
                    return Some(RootOfUnity {
                        conductor: self.conductor,
                        exponent: j as u32,
                        negated,
                    });
                }
            }
        }
        None
    }

    fn matches_sparse(&self, row: &[(usize, i64)], negated: bool) -> bool {
        let mut next = 0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let expected = match row.get(next) {
                Some(&(ri, rc)) if ri == i => {
                    next += 1;
                    if negated {
                        -rc
                    } else {
                        rc
                    }
                }
                _ => 0,
            };
            if !(c.is_integer() && c.to_integer() == BigInt::from(expected)) {
                return false;
            }
        }
        true
    }

    /// Floating-point value under the standard embedding `ζ_k = exp(2πi/k)`.
    ///
    /// Debugging aid only; compare with a tolerance of about `1e-9`.
    pub fn to_complex(&self) -> (f64, f64) {
        let k = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (t, c) in self.coeffs.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * t as f64 / k;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }

    /// Coefficients as `"p/q"` strings (denominator omitted when 1).
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings(conductor: u32, parts: &[impl AsRef<str>]) -> Result<Self> {
        let coeffs = parts
            .iter()
            .enumerate()
            .map(|(i, s)| parse_rational(s.as_ref()).map_err(|e| Error::Parse(format!("coefficient {i}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(conductor, coeffs)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("`{s}`: zero denominator")));
        }
        Ok(Rational::new(n, d))
    } else {
        let n = BigInt::from_str(s).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
        Ok(Rational::from_integer(n))
    }
}

/// `Some(a / d)` when `d` divides `a` in the ring of integers; errors when `d = 0`.
pub fn divides(d: &CycNum, a: &CycNum) -> Result<Option<CycNum>> {
    a.quotient_if_divisible(d)
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            self.coeffs == other.coeffs
        } else {
            let k = lcm(self.conductor, other.conductor);
            self.lift_unchecked(k).coeffs == other.lift_unchecked(k).coeffs
        }
    }
}

impl Eq for CycNum {}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (t, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match t {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => write!(f, "z{}^{t}", self.conductor)?,
                _ => write!(f, "{a}*z{}^{t}", self.conductor)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        self.binary(rhs, |a, b, k| CycNum {
            conductor: k,
            coeffs: a.iter().zip(b).map(|(x, y)| x + y).collect(),
        })
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self.binary(rhs, |a, b, k| CycNum {
            conductor: k,
            coeffs: a.iter().zip(b).map(|(x, y)| x - y).collect(),
        })
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        self.binary(rhs, |a, b, k| {
            let a_rat = a[1..].iter().all(Zero::is_zero);
            let b_rat = b[1..].iter().all(Zero::is_zero);
            if a_rat || b_rat {
                let (s, v) = if a_rat { (&a[0], b) } else { (&b[0], a) };
                return CycNum {
                    conductor: k,
                    coeffs: v.iter().map(|c| c * s).collect(),
                };
            }
            let t = table(k);
            let mut prod = vec![Rational::zero(); 2 * t.phi - 1];
            for (i, x) in a.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b.iter().enumerate() {
                    if !y.is_zero() {
                        prod[i + j] += x * y;
                    }
                }
            }
            if prod.len() <= t.phi {
                prod.resize(t.phi, Rational::zero());
                return CycNum { conductor: k, coeffs: prod };
            }
            let mut out = vec![Rational::zero(); t.phi];
            for (e, c) in prod.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if e < t.phi {
                    out[e] += c;
                    continue;
                }
                for &(i, p) in &t.powers[e % k as usize] {
                    match p {
                        1 => out[i] += &c,
                        -1 => out[i] -= &c,
                        _ => out[i] += &c * rat(p),
                    }
                }
            }
            CycNum { conductor: k, coeffs: out }
        })
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(mut self) -> CycNum {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<CycNum> for &'a CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                self.$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        if self.conductor == rhs.conductor {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a += b;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        if self.conductor == rhs.conductor {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a -= b;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}
