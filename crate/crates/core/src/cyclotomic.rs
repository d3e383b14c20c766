//! Exact arithmetic in `Q(z)[t]`, where `z` is a primitive `4p`-th root of unity
//! (reduced modulo the cyclotomic polynomial) and `t` is a formal square root of `2p`.
//!
//! Elements are stored as a common positive denominator over integer numerators,
//! which keeps the hot multiply/add paths in integer arithmetic. The rational
//! coefficient view is available through [`CycScalar::a`] and [`CycScalar::b`].

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{check_p, Error, Result};

pub type Rational = BigRational;

static CYCLOTOMIC_MEMO: OnceLock<Mutex<HashMap<usize, Arc<Vec<BigInt>>>>> = OnceLock::new();
static RING_MEMO: OnceLock<Mutex<HashMap<u32, Arc<CycRing>>>> = OnceLock::new();

/// Coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
///
/// Computed by dividing `x^n - 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_poly(n: usize) -> Result<Vec<BigInt>> {
    if n == 0 {
        return Err(Error::InvalidParameter("cyclotomic index must be positive".into()));
    }
    Ok(cyclotomic_memo(n).as_ref().clone())
}

fn cyclotomic_memo(n: usize) -> Arc<Vec<BigInt>> {
    let memo = CYCLOTOMIC_MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = memo.lock().expect("memo poisoned").get(&n) {
        return hit.clone();
    }
    let mut poly = vec![BigInt::zero(); n + 1];
    poly[0] = BigInt::from(-1);
    poly[n] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        poly = exact_monic_div(&poly, &cyclotomic_memo(d));
    }
    let poly = Arc::new(poly);
    memo.lock().expect("memo poisoned").insert(n, poly.clone());
    poly
}

/// Quotient of `num` by the monic `den`; the remainder must vanish.
fn exact_monic_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quo = vec![BigInt::zero(); num.len() - dd];
    for k in (0..quo.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, di) in den.iter().enumerate() {
            rem[k + i] -= &c * di;
        }
        quo[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quo
}

/// The ring `Q(z)[t]/(Φ_{4p}(z), t^2 - 2p)` for one value of `p`.
#[derive(Debug)]
pub struct CycRing {
    p: u32,
    min_poly: Vec<BigInt>,
    degree: usize,
    /// `z^k` reduced to degree below `degree`, for `k` in `0..4p`.
    powers: Vec<Vec<i64>>,
}

impl CycRing {
    /// Shared ring instance for `p`; construction is memoized.
    pub fn new(p: u32) -> Result<Arc<CycRing>> {
        check_p(p)?;
        let memo = RING_MEMO.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = memo.lock().expect("memo poisoned");
        if let Some(ring) = guard.get(&p) {
            return Ok(ring.clone());
        }
        let ring = Arc::new(Self::build(p));
        guard.insert(p, ring.clone());
        Ok(ring)
    }

    fn build(p: u32) -> CycRing {
        let n = 4 * p as usize;
        let min_poly = cyclotomic_memo(n).as_ref().clone();
        let degree = min_poly.len() - 1;
        let low: Vec<i64> = min_poly[..degree]
            .iter()
            .map(|c| c.to_i64().expect("small cyclotomic coefficient"))
            .collect();
        let mut powers = Vec::with_capacity(n);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by z and reduce with z^degree = -sum(low[i] z^i)
            let top = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1] - top * low[i];
            }
            cur[0] = -top * low[0];
        }
        CycRing { p, min_poly, degree, powers }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Order of `z`, i.e. `4p`.
    pub fn conductor(&self) -> usize {
        4 * self.p as usize
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Minimal polynomial of `z`, lowest degree first.
    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    /// JSON header `{"p", "conductor", "min_poly"}`.
    pub fn header_json(&self) -> serde_json::Value {
        let coeffs: Vec<i64> = self.min_poly.iter().map(|c| c.to_i64().unwrap_or(0)).collect();
        serde_json::json!({ "p": self.p, "conductor": self.conductor(), "min_poly": coeffs })
    }

    fn power_row(&self, k: i64) -> &[i64] {
        &self.powers[k.rem_euclid(self.conductor() as i64) as usize]
    }
}

impl PartialEq for CycRing {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for CycRing {}

/// An exact element `(a(z) + b(z) t) / den` of a [`CycRing`].
#[derive(Clone)]
pub struct CycScalar {
    ring: Arc<CycRing>,
    /// `2 * degree` numerators: the `t^0` part followed by the `t^1` part.
    num: Vec<BigInt>,
    /// Positive, coprime to the numerators; `1` for zero.
    den: BigInt,
}

impl CycScalar {
    pub fn zero(ring: &Arc<CycRing>) -> Self {
        CycScalar { ring: ring.clone(), num: vec![BigInt::zero(); 2 * ring.degree], den: BigInt::one() }
    }

    pub fn one(ring: &Arc<CycRing>) -> Self {
        Self::from_int(ring, 1)
    }

    pub fn from_int(ring: &Arc<CycRing>, n: i64) -> Self {
        let mut x = Self::zero(ring);
        x.num[0] = BigInt::from(n);
        x
    }

    pub fn from_ratio(ring: &Arc<CycRing>, n: i64, d: i64) -> Self {
        Self::from_rational(ring, &Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(ring: &Arc<CycRing>, r: &Rational) -> Self {
        let mut x = Self::zero(ring);
        x.num[0] = r.numer().clone();
        x.den = r.denom().clone();
        x.normalize();
        x
    }

    /// Builds `sum a_i z^i + t sum b_i z^i`; inputs may be shorter than the degree
    /// or longer (higher powers are reduced).
    pub fn from_parts(ring: &Arc<CycRing>, a: &[Rational], b: &[Rational]) -> Self {
        let den = a
            .iter()
            .chain(b)
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let d = ring.degree;
        let mut num = vec![BigInt::zero(); 2 * d];
        for (offset, part) in [(0, a), (d, b)] {
            for (k, r) in part.iter().enumerate() {
                if r.is_zero() {
                    continue;
                }
                let c = r.numer() * (&den / r.denom());
                for (i, w) in ring.power_row(k as i64).iter().enumerate() {
                    if *w != 0 {
                        num[offset + i] += &c * *w;
                    }
                }
            }
        }
        let mut x = CycScalar { ring: ring.clone(), num, den };
        x.normalize();
        x
    }

    /// `z^m`, i.e. `q^{m/2}`.
    pub fn z_power(ring: &Arc<CycRing>, m: i64) -> Self {
        let mut x = Self::zero(ring);
        for (i, w) in ring.power_row(m).iter().enumerate() {
            x.num[i] = BigInt::from(*w);
        }
        x
    }

    /// `q^k = z^{2k}`.
    pub fn q_power(ring: &Arc<CycRing>, k: i64) -> Self {
        Self::z_power(ring, 2 * k)
    }

    /// The formal square root `t` of `2p`.
    pub fn sqrt_2p(ring: &Arc<CycRing>) -> Self {
        let mut x = Self::zero(ring);
        x.num[ring.degree] = BigInt::one();
        x
    }

    pub fn ring(&self) -> &Arc<CycRing> {
        &self.ring
    }

    pub fn p(&self) -> u32 {
        self.ring.p
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// Rough size of the representation, used to prefer cheap pivots.
    pub fn complexity(&self) -> u64 {
        self.den.bits() + self.num.iter().filter(|n| !n.is_zero()).map(|n| n.bits() + 8).sum::<u64>()
    }

    /// True when the element lies in `Q(z)` (no `t` component).
    pub fn is_rational_part(&self) -> bool {
        self.num[self.ring.degree..].iter().all(Zero::is_zero)
    }

    /// True when the element is a rational number.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(Rational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Coefficients of the `t^0` part in powers of `z`.
    pub fn a(&self) -> Vec<Rational> {
        self.part(0)
    }

    /// Coefficients of the `t^1` part in powers of `z`.
    pub fn b(&self) -> Vec<Rational> {
        self.part(self.ring.degree)
    }

    fn part(&self, offset: usize) -> Vec<Rational> {
        self.num[offset..offset + self.ring.degree]
            .iter()
            .map(|n| Rational::new(n.clone(), self.den.clone()))
            .collect()
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring.p == other.ring.p {
            Ok(())
        } else {
            Err(Error::RingMismatch { left: self.ring.p, right: other.ring.p })
        }
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for n in &mut self.num {
                *n = -&*n;
            }
        }
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for n in &self.num {
            if !n.is_zero() {
                g = g.gcd(n);
                if g.is_one() {
                    return;
                }
            }
        }
        self.den /= &g;
        for n in &mut self.num {
            if !n.is_zero() {
                *n /= &g;
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut out = self.clone();
        out.add_scaled(other, 1);
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut out = self.clone();
        out.add_scaled(other, -1);
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_scaled(&mut self, other: &Self, sign: i32) {
        if other.is_zero() {
            return;
        }
        if self.den == other.den {
            for (x, y) in self.num.iter_mut().zip(&other.num) {
                if !y.is_zero() {
                    if sign > 0 {
                        *x += y;
                    } else {
                        *x -= y;
                    }
                }
            }
        } else {
            let g = self.den.gcd(&other.den);
            let fs = &other.den / &g;
            let fo = &self.den / &g;
            for (x, y) in self.num.iter_mut().zip(&other.num) {
                if !x.is_zero() {
                    *x *= &fs;
                }
                if !y.is_zero() {
                    if sign > 0 {
                        *x += y * &fo;
                    } else {
                        *x -= y * &fo;
                    }
                }
            }
            self.den *= fs;
        }
        self.normalize();
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.ring.degree;
        let ring = &self.ring;
        if self.is_zero() || other.is_zero() {
            return Self::zero(ring);
        }
        let (a1, b1) = self.num.split_at(d);
        let (a2, b2) = other.num.split_at(d);
        let b1z = b1.iter().all(Zero::is_zero);
        let b2z = b2.iter().all(Zero::is_zero);
        let mut num = vec![BigInt::zero(); 2 * d];
        {
            let (na, nb) = num.split_at_mut(d);
            poly_mul_acc(ring, na, a1, a2, 1);
            if !b1z && !b2z {
                poly_mul_acc(ring, na, b1, b2, 2 * ring.p as i64);
            }
            if !b2z {
                poly_mul_acc(ring, nb, a1, b2, 1);
            }
            if !b1z {
                poly_mul_acc(ring, nb, b1, a2, 1);
            }
        }
        let mut out = CycScalar { ring: ring.clone(), num, den: &self.den * &other.den };
        out.normalize();
        out
    }

    /// Multiplies by an integer.
    pub fn scale_int(&self, k: i64) -> Self {
        let mut out = self.clone();
        if k == 0 {
            return Self::zero(&self.ring);
        }
        for n in &mut out.num {
            if !n.is_zero() {
                *n *= k;
            }
        }
        out.normalize();
        out
    }

    /// Multiplies by a rational number.
    pub fn scale_rational(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero(&self.ring);
        }
        let mut out = self.clone();
        for n in &mut out.num {
            if !n.is_zero() {
                *n *= r.numer();
            }
        }
        out.den *= r.denom();
        out.normalize();
        out
    }

    /// Multiplies by `z^m`, a signed permutation-and-reduction of the coefficients.
    pub fn mul_z_power(&self, m: i64) -> Self {
        self.mul_unchecked(&Self::z_power(&self.ring, m))
    }

    /// Multiplicative inverse. For `x = a + b t` this is `(a - b t) / (a^2 - 2p b^2)`,
    /// with the field inverse of the norm taken by extended Euclid against `Φ_{4p}`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverse of zero".into()));
        }
        let d = self.ring.degree;
        let ring = &self.ring;
        let (a, b) = self.num.split_at(d);
        let a_el = CycScalar { ring: ring.clone(), num: [a, &vec![BigInt::zero(); d][..]].concat(), den: BigInt::one() };
        let b_el = CycScalar { ring: ring.clone(), num: [b, &vec![BigInt::zero(); d][..]].concat(), den: BigInt::one() };
        let norm = &(&a_el * &a_el) - &(&b_el * &b_el).scale_int(2 * ring.p as i64);
        if norm.is_zero() {
            return Err(Error::NotInvertible(format!("{self} has zero norm a^2 - 2p b^2")));
        }
        let norm_inv = field_inverse(ring, &norm.num[..d])?;
        let mut conj = self.clone();
        for n in &mut conj.num[d..] {
            *n = -&*n;
        }
        // x^{-1} = den * conj(numerator) / norm(numerator)
        conj.den = BigInt::one();
        let mut out = conj.mul_unchecked(&norm_inv);
        for n in &mut out.num {
            if !n.is_zero() {
                *n *= &self.den;
            }
        }
        out.normalize();
        Ok(out)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.mul_unchecked(&other.inverse()?))
    }

    /// `self^k` for integer `k` (negative powers invert).
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(&self.ring);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Complex value under `z -> e^{iπ/2p}`, `t -> +sqrt(2p)`, to within `10^-digits`.
    pub fn embed_complex(&self, digits: u32) -> ComplexApprox {
        let max_bits = self.num.iter().map(|n| n.bits()).max().unwrap_or(0) as usize;
        let prec = (((digits as f64) * std::f64::consts::LOG2_10) as usize + max_bits + 128).div_ceil(64) * 64;
        let rm = RoundingMode::ToEven;
        let mut cc = Consts::new().expect("astro-float constants");
        let conductor = self.ring.conductor() as u64;
        let angle_unit = cc.pi(prec, rm).div(&BigFloat::from_u64(conductor / 2, prec), prec, rm);
        let root = BigFloat::from_u64(2 * self.ring.p as u64, prec).sqrt(prec, rm);
        let d = self.ring.degree;
        let mut re = BigFloat::from_u64(0, prec);
        let mut im = BigFloat::from_u64(0, prec);
        for k in 0..d {
            let (ak, bk) = (&self.num[k], &self.num[d + k]);
            if ak.is_zero() && bk.is_zero() {
                continue;
            }
            let mut coeff = bigint_to_float(ak, prec);
            if !bk.is_zero() {
                coeff = coeff.add(&bigint_to_float(bk, prec).mul(&root, prec, rm), prec, rm);
            }
            let angle = angle_unit.mul(&BigFloat::from_u64(k as u64, prec), prec, rm);
            let cos = angle.cos(prec, rm, &mut cc);
            let sin = angle.sin(prec, rm, &mut cc);
            re = re.add(&coeff.mul(&cos, prec, rm), prec, rm);
            im = im.add(&coeff.mul(&sin, prec, rm), prec, rm);
        }
        let den = bigint_to_float(&self.den, prec);
        ComplexApprox { re: re.div(&den, prec, rm), im: im.div(&den, prec, rm) }
    }

    /// Double-precision embedding, for diagnostics.
    pub fn to_c64(&self) -> num_complex::Complex64 {
        let a = self.embed_complex(20);
        num_complex::Complex64::new(float_to_f64(&a.re), float_to_f64(&a.im))
    }
}

/// Accumulates `scale * x * y mod Φ` into `acc`.
fn poly_mul_acc(ring: &CycRing, acc: &mut [BigInt], x: &[BigInt], y: &[BigInt], scale: i64) {
    let d = ring.degree;
    let mut full: Vec<BigInt> = vec![BigInt::zero(); 2 * d - 1];
    let ynz: Vec<(usize, &BigInt)> = y.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    if ynz.is_empty() {
        return;
    }
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for &(j, yj) in &ynz {
            full[i + j] += xi * yj;
        }
    }
    for (k, c) in full.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let c = if scale == 1 { c } else { c * scale };
        if k < d {
            acc[k] += c;
        } else {
            for (i, w) in ring.powers[k].iter().enumerate() {
                if *w != 0 {
                    acc[i] += &c * *w;
                }
            }
        }
    }
}

type QPoly = Vec<Rational>;

fn qpoly_trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn qpoly_divrem(num: &QPoly, den: &QPoly) -> (QPoly, QPoly) {
    let dd = den.len() - 1;
    let lead_inv = den[dd].recip();
    let mut rem = num.clone();
    if num.len() <= dd {
        return (Vec::new(), qpoly_trim(rem));
    }
    let mut quo = vec![Rational::zero(); num.len() - dd];
    for k in (0..quo.len()).rev() {
        let c = &rem[k + dd] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (i, di) in den.iter().enumerate() {
            rem[k + i] -= &c * di;
        }
        quo[k] = c;
    }
    (qpoly_trim(quo), qpoly_trim(rem))
}

fn qpoly_mul(x: &QPoly, y: &QPoly) -> QPoly {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); x.len() + y.len() - 1];
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            out[i + j] += xi * yj;
        }
    }
    qpoly_trim(out)
}

fn qpoly_sub(x: &QPoly, y: &QPoly) -> QPoly {
    let n = x.len().max(y.len());
    let out = (0..n)
        .map(|i| {
            let a = x.get(i).cloned().unwrap_or_else(Rational::zero);
            let b = y.get(i).cloned().unwrap_or_else(Rational::zero);
            a - b
        })
        .collect();
    qpoly_trim(out)
}

/// Inverse of a `t`-free element given by integer numerators.
fn field_inverse(ring: &Arc<CycRing>, a: &[BigInt]) -> Result<CycScalar> {
    let to_q = |v: &[BigInt]| qpoly_trim(v.iter().map(|c| Rational::from_integer(c.clone())).collect());
    let mut r0 = to_q(&ring.min_poly);
    let mut r1 = to_q(a);
    let mut s0: QPoly = Vec::new();
    let mut s1: QPoly = vec![Rational::one()];
    while !r1.is_empty() {
        let (quo, rem) = qpoly_divrem(&r0, &r1);
        let s2 = qpoly_sub(&s0, &qpoly_mul(&quo, &s1));
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if r0.len() != 1 {
        return Err(Error::NotInvertible("element shares a factor with the modulus".into()));
    }
    let c = r0[0].recip();
    let coeffs: Vec<Rational> = s0.iter().map(|x| x * &c).collect();
    Ok(CycScalar::from_parts(ring, &coeffs, &[]))
}

fn bigint_to_float(n: &BigInt, prec: usize) -> BigFloat {
    let (sign, digits) = n.to_u64_digits();
    if digits.is_empty() {
        return BigFloat::from_u64(0, prec);
    }
    let bits = digits.len() * 64;
    let s = if sign == num_bigint::Sign::Minus { Sign::Neg } else { Sign::Pos };
    // mantissa is read as 0.m * 2^e, most significant word last
    let x = BigFloat::from_words(&digits, s, bits as i32);
    let mut out = BigFloat::from_u64(0, prec.max(bits));
    out = out.add(&x, prec.max(bits), RoundingMode::ToEven);
    out
}

fn float_to_f64(x: &BigFloat) -> f64 {
    match float_parts(x) {
        None => 0.0,
        Some((neg, mant, shift)) => {
            let bits = mant.bits() as i64;
            let keep = 60.min(bits);
            let top = (&mant >> (bits - keep) as usize).to_u64().unwrap_or(0) as f64;
            let v = top * 2f64.powi((shift + bits - keep) as i32);
            if neg {
                -v
            } else {
                v
            }
        }
    }
}

/// Returns `(negative, mantissa, exponent)` with value `±mantissa * 2^exponent`.
fn float_parts(x: &BigFloat) -> Option<(bool, BigUint, i64)> {
    let (words, _, sign, e, _) = x.as_raw_parts()?;
    let mut bytes = Vec::with_capacity(words.len() * 8);
    for w in words {
        bytes.extend_from_slice(&w.to_le_bytes());
    }
    let mant = BigUint::from_bytes_le(&bytes);
    if mant.is_zero() {
        return None;
    }
    Some((sign == Sign::Neg, mant, e as i64 - (words.len() * 64) as i64))
}

/// Decimal string of `x` rounded to `digits` fractional digits.
fn to_fixed(x: &BigFloat, digits: u32) -> String {
    let Some((neg, mant, shift)) = float_parts(x) else {
        return format!("{:.*}", digits as usize, 0.0);
    };
    let scaled = mant * BigUint::from(10u32).pow(digits);
    let rounded = if shift >= 0 {
        scaled << shift as usize
    } else {
        let s = (-shift) as usize;
        let half = BigUint::one() << (s - 1);
        (scaled + half) >> s
    };
    let mut text = rounded.to_str_radix(10);
    let width = digits as usize + 1;
    if text.len() < width {
        text = "0".repeat(width - text.len()) + &text;
    }
    let split = text.len() - digits as usize;
    let (int, frac) = text.split_at(split);
    let neg = neg && text.bytes().any(|c| c != b'0');
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// High-precision complex value of an embedded scalar.
#[derive(Clone, Debug)]
pub struct ComplexApprox {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl ComplexApprox {
    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(float_to_f64(&self.re), float_to_f64(&self.im))
    }

    /// Real and imaginary parts as fixed-point decimal strings.
    pub fn to_decimal_strings(&self, digits: u32) -> (String, String) {
        (to_fixed(&self.re, digits), to_fixed(&self.im, digits))
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        self.ring.p == other.ring.p && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycScalar {}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycScalar(p={}, {})", self.ring.p, self)
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, coeffs: &[Rational]) -> fmt::Result {
    let mut first = true;
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        first = false;
        match (k, mag.is_one()) {
            (0, _) => write!(f, "{mag}")?,
            (_, true) => write!(f, "z^{k}")?,
            (_, false) => write!(f, "{mag}*z^{k}")?,
        }
    }
    Ok(())
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let a = self.a();
        let b = self.b();
        let a_nz = a.iter().any(|c| !c.is_zero());
        if a_nz {
            write_poly(f, &a)?;
        }
        if b.iter().any(|c| !c.is_zero()) {
            if a_nz {
                write!(f, " + ")?;
            }
            write!(f, "sqrt({})*(", 2 * self.ring.p)?;
            write_poly(f, &b)?;
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl Serialize for CycScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let strings = |v: Vec<Rational>| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        let mut st = serializer.serialize_struct("CycScalar", 2)?;
        st.serialize_field("a", &strings(self.a()))?;
        st.serialize_field("b", &strings(self.b()))?;
        st.end()
    }
}

impl CycScalar {
    /// Parses the `{"a": [...], "b": [...]}` encoding.
    pub fn from_json(ring: &Arc<CycRing>, value: &serde_json::Value) -> Result<Self> {
        let parse_part = |key: &str| -> Result<Vec<Rational>> {
            let arr = value
                .get(key)
                .and_then(|v| v.as_array())
                .ok_or_else(|| Error::Parse(format!("missing array '{key}'")))?;
            if arr.len() != ring.degree {
                return Err(Error::DimensionMismatch { expected: ring.degree, found: arr.len() });
            }
            arr.iter()
                .map(|s| {
                    let s = s.as_str().ok_or_else(|| Error::Parse("coefficient is not a string".into()))?;
                    s.parse::<Rational>().map_err(|e| Error::Parse(format!("bad rational '{s}': {e}")))
                })
                .collect()
        };
        Ok(Self::from_parts(ring, &parse_part("a")?, &parse_part("b")?))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &CycScalar) -> CycScalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: CycScalar) -> CycScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &CycScalar) -> CycScalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: &CycScalar) {
        self.same_ring(rhs).unwrap_or_else(|e| panic!("{e}"));
        self.add_scaled(rhs, 1);
    }
}

impl SubAssign<&CycScalar> for CycScalar {
    fn sub_assign(&mut self, rhs: &CycScalar) {
        self.same_ring(rhs).unwrap_or_else(|e| panic!("{e}"));
        self.add_scaled(rhs, -1);
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        let mut out = self.clone();
        for n in &mut out.num {
            if !n.is_zero() {
                *n = -&*n;
            }
        }
        out
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1).unwrap(), ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2).unwrap(), ints(&[1, 1]));
        assert_eq!(cyclotomic_poly(12).unwrap(), ints(&[1, 0, -1, 0, 1]));
        assert!(cyclotomic_poly(0).is_err());
    }

    #[test]
    fn ring_header() {
        let ring = CycRing::new(3).unwrap();
        assert_eq!(
            ring.header_json(),
            serde_json::json!({"p": 3, "conductor": 12, "min_poly": [1, 0, -1, 0, 1]})
        );
        assert!(CycRing::new(2).is_err());
    }

    #[test]
    fn q_powers() {
        for p in 3..=8 {
            let ring = CycRing::new(p).unwrap();
            let one = CycScalar::one(&ring);
            assert!(CycScalar::q_power(&ring, 0).is_one());
            assert_eq!(CycScalar::q_power(&ring, p as i64), -&one);
            assert_eq!(CycScalar::q_power(&ring, 2 * p as i64), one);
            assert_eq!(&CycScalar::q_power(&ring, 1) * &CycScalar::q_power(&ring, -1), one);
        }
    }

    #[test]
    fn sqrt_squares_to_2p() {
        let ring = CycRing::new(5).unwrap();
        let t = CycScalar::sqrt_2p(&ring);
        assert_eq!(&t * &t, CycScalar::from_int(&ring, 10));
        let inv = t.inverse().unwrap();
        assert_eq!(inv, t.scale_rational(&Rational::new(1.into(), 10.into())));
    }

    #[test]
    fn inverses() {
        let ring = CycRing::new(4).unwrap();
        let two = CycScalar::from_int(&ring, 2);
        assert_eq!(two.inverse().unwrap(), CycScalar::from_ratio(&ring, 1, 2));
        let q = CycScalar::q_power(&ring, 1);
        let diff = &q - &CycScalar::q_power(&ring, -1);
        assert!((&diff.inverse().unwrap() * &diff).is_one());
        let mixed = &q + &CycScalar::sqrt_2p(&ring).scale_int(3);
        assert!((&mixed.inverse().unwrap() * &mixed).is_one());
        assert!(CycScalar::zero(&ring).inverse().is_err());
    }

    #[test]
    fn zero_norm_rejected() {
        // for p = 8, 4 - t is a zero divisor since t^2 = 16
        let ring = CycRing::new(8).unwrap();
        let x = CycScalar::from_int(&ring, 4) - CycScalar::sqrt_2p(&ring);
        assert!(matches!(x.inverse(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn mismatched_rings() {
        let a = CycScalar::one(&CycRing::new(3).unwrap());
        let b = CycScalar::one(&CycRing::new(4).unwrap());
        assert_eq!(a.checked_add(&b), Err(Error::RingMismatch { left: 3, right: 4 }));
    }

    #[test]
    fn embedding_values() {
        let ring = CycRing::new(3).unwrap();
        let (re, im) = CycScalar::q_power(&ring, 1).embed_complex(30).to_decimal_strings(30);
        assert_eq!(re, "0.500000000000000000000000000000");
        assert_eq!(im, "0.866025403784438646763723170753");
        let (re, im) = CycScalar::sqrt_2p(&ring).embed_complex(12).to_decimal_strings(12);
        assert_eq!((re.as_str(), im.as_str()), ("2.449489742783", "0.000000000000"));
        let (re, im) = CycScalar::zero(&ring).embed_complex(3).to_decimal_strings(3);
        assert_eq!((re.as_str(), im.as_str()), ("0.000", "0.000"));
        let c = CycScalar::from_ratio(&ring, -7, 3).to_c64();
        assert!((c.re + 7.0 / 3.0).abs() < 1e-14 && c.im.abs() < 1e-14);
    }

    #[test]
    fn json_roundtrip() {
        let ring = CycRing::new(3).unwrap();
        let x = CycScalar::from_ratio(&ring, 1, 2) + CycScalar::sqrt_2p(&ring) * CycScalar::z_power(&ring, 3);
        let v = serde_json::to_value(&x).unwrap();
        assert_eq!(v["a"], serde_json::json!(["1/2", "0", "0", "0"]));
        assert_eq!(CycScalar::from_json(&ring, &v).unwrap(), x);
    }
}
