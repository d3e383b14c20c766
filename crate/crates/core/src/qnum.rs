//! Quantum numbers at `q = e^{iπ/p}` and exact Laurent polynomials.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cyclotomic::{CycRing, CycScalar, Rational};
use crate::error::{Error, Result};

/// Cached constants of the scalar ring for a fixed `p`.
///
/// Every bracket is periodic in its argument with period `2p`, so the values
/// and the inverses of the nonzero ones are tabulated once.
#[derive(Clone, Debug)]
pub struct QNumbers {
    inner: Arc<Tables>,
}

#[derive(Debug)]
struct Tables {
    ring: Arc<CycRing>,
    /// `z^m` for `m` in `0..4p`.
    half_powers: Vec<CycScalar>,
    /// `[s]` and `{s}` for `s` in `0..2p`.
    brackets: Vec<CycScalar>,
    braces: Vec<CycScalar>,
    /// `1/[s]`, absent when `s ≡ 0 mod p`.
    bracket_inv: Vec<Option<CycScalar>>,
    inv_diff: CycScalar,
    sqrt_2p: CycScalar,
}

impl QNumbers {
    pub fn new(p: u32) -> Result<Self> {
        let ring = CycRing::new(p)?;
        let n = 4 * p as i64;
        let half_powers: Vec<CycScalar> = (0..n).map(|m| CycScalar::z_power(&ring, m)).collect();
        let qp = |k: i64| half_powers[(2 * k).rem_euclid(n) as usize].clone();
        let inv_diff = (qp(1) - qp(-1)).inverse()?;
        let period = 2 * p as i64;
        let brackets: Vec<CycScalar> = (0..period).map(|s| (qp(s) - qp(-s)) * &inv_diff).collect();
        let braces: Vec<CycScalar> = (0..period).map(|s| (qp(s) + qp(-s)) * &inv_diff).collect();
        let bracket_inv = brackets
            .iter()
            .map(|b| if b.is_zero() { Ok(None) } else { b.inverse().map(Some) })
            .collect::<Result<Vec<_>>>()?;
        let sqrt_2p = CycScalar::sqrt_2p(&ring);
        Ok(QNumbers {
            inner: Arc::new(Tables { ring, half_powers, brackets, braces, bracket_inv, inv_diff, sqrt_2p }),
        })
    }

    pub fn p(&self) -> u32 {
        self.inner.ring.p()
    }

    fn pi(&self) -> i64 {
        self.p() as i64
    }

    pub fn ring(&self) -> &Arc<CycRing> {
        &self.inner.ring
    }

    pub fn zero(&self) -> CycScalar {
        CycScalar::zero(self.ring())
    }

    pub fn one(&self) -> CycScalar {
        CycScalar::one(self.ring())
    }

    pub fn int(&self, n: i64) -> CycScalar {
        CycScalar::from_int(self.ring(), n)
    }

    pub fn ratio(&self, n: i64, d: i64) -> CycScalar {
        CycScalar::from_ratio(self.ring(), n, d)
    }

    pub fn rational(&self, r: &Rational) -> CycScalar {
        CycScalar::from_rational(self.ring(), r)
    }

    /// `(-1)^k` as a scalar.
    pub fn sign(&self, k: i64) -> CycScalar {
        self.int(sign(k))
    }

    /// `q^{m/2}`.
    pub fn q_half_pow(&self, m: i64) -> CycScalar {
        let n = self.inner.half_powers.len() as i64;
        self.inner.half_powers[m.rem_euclid(n) as usize].clone()
    }

    /// `q^k`.
    pub fn q_pow(&self, k: i64) -> CycScalar {
        self.q_half_pow(2 * k)
    }

    /// `q`.
    pub fn q(&self) -> CycScalar {
        self.q_pow(1)
    }

    /// `1/(q - q^{-1})`.
    pub fn inv_q_diff(&self) -> CycScalar {
        self.inner.inv_diff.clone()
    }

    /// The formal `sqrt(2p)`.
    pub fn sqrt_2p(&self) -> CycScalar {
        self.inner.sqrt_2p.clone()
    }

    /// `1/sqrt(2p) = sqrt(2p)/(2p)`.
    pub fn inv_sqrt_2p(&self) -> CycScalar {
        self.sqrt_2p().scale_rational(&Rational::new(1.into(), (2 * self.pi()).into()))
    }

    fn slot(&self, s: i64) -> usize {
        s.rem_euclid(2 * self.pi()) as usize
    }

    /// `[s] = (q^s - q^{-s})/(q - q^{-1})`.
    pub fn q_bracket(&self, s: i64) -> CycScalar {
        self.inner.brackets[self.slot(s)].clone()
    }

    /// `{s} = (q^s + q^{-s})/(q - q^{-1})`.
    pub fn q_brace(&self, s: i64) -> CycScalar {
        self.inner.braces[self.slot(s)].clone()
    }

    /// `1/[s]`; fails when `s ≡ 0 mod p`.
    pub fn q_bracket_inv(&self, s: i64) -> Result<CycScalar> {
        self.inner.bracket_inv[self.slot(s)]
            .clone()
            .ok_or_else(|| Error::DivisionByZero(format!("[{s}] vanishes")))
    }

    /// `[s, j]`: `s` for `j ≡ 0`, `(-1)^{s-1} s` for `j ≡ p`, else `[sj]/[j]` (j taken mod 2p).
    pub fn bracket2(&self, s: i64, j: i64) -> CycScalar {
        let j = j.rem_euclid(2 * self.pi());
        if j == 0 {
            self.int(s)
        } else if j == self.pi() {
            self.int(sign(s - 1) * s)
        } else {
            self.q_bracket(s * j) * self.inner.bracket_inv[j as usize].as_ref().expect("j is not a multiple of p")
        }
    }

    /// `{s, j}`: zero for `j ≡ 0 mod p`, else `{sj}/[j]`.
    pub fn brace2(&self, s: i64, j: i64) -> CycScalar {
        let j = j.rem_euclid(2 * self.pi());
        if j % self.pi() == 0 {
            self.zero()
        } else {
            self.q_brace(s * j) * self.inner.bracket_inv[j as usize].as_ref().expect("j is not a multiple of p")
        }
    }

    /// `ω_s = (-1)^{p+s+1} p sqrt(2p) / [s]^2`.
    pub fn omega(&self, s: i64) -> Result<CycScalar> {
        let inv = self.q_bracket_inv(s)?;
        Ok(self.sqrt_2p().scale_int(sign(self.pi() + s + 1) * self.pi()) * &inv * &inv)
    }

    /// `ξ_s = -(-1)^{p-s} p sqrt(2p) / (q^s - q^{-s})`.
    pub fn xi(&self, s: i64) -> Result<CycScalar> {
        let inv = self.q_bracket_inv(s)?;
        // q^s - q^{-s} = (q - q^{-1}) [s]
        Ok(self.sqrt_2p().scale_int(-sign(self.pi() - s) * self.pi()) * &inv * self.inv_q_diff())
    }

    /// `μ_s = q^s + q^{-s}`.
    pub fn mu(&self, s: i64) -> CycScalar {
        self.q_pow(s) + self.q_pow(-s)
    }
}

/// `(-1)^k`.
pub fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Laurent polynomial with exact coefficients; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    ring: Arc<CycRing>,
    terms: BTreeMap<i64, CycScalar>,
}

impl LaurentPoly {
    pub fn zero(ring: &Arc<CycRing>) -> Self {
        LaurentPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn monomial(ring: &Arc<CycRing>, exp: i64, coeff: CycScalar) -> Self {
        let mut f = Self::zero(ring);
        f.add_term(exp, &coeff);
        f
    }

    pub fn constant(ring: &Arc<CycRing>, coeff: CycScalar) -> Self {
        Self::monomial(ring, 0, coeff)
    }

    pub fn ring(&self) -> &Arc<CycRing> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> CycScalar {
        self.terms.get(&exp).cloned().unwrap_or_else(|| CycScalar::zero(&self.ring))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &CycScalar)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exp: i64, coeff: &CycScalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, coeff.clone());
            }
        }
    }

    /// Removes and returns the coefficient at `exp`.
    pub fn take_term(&mut self, exp: i64) -> Option<CycScalar> {
        self.terms.remove(&exp)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in other.terms() {
            out.add_term(k, v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|_, c| -c)
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        self.map_coeffs(|_, v| v * c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.ring);
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                out.add_term(i + j, &(a * b));
            }
        }
        out
    }

    /// Multiplication by `X^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// `f(X^{-1})`.
    pub fn reflect(&self) -> Self {
        LaurentPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// `f(cX)` for a scalar `c`, given its powers by `pow(k) = c^k`.
    pub fn substitute_scaled(&self, pow: impl Fn(i64) -> CycScalar) -> Self {
        self.map_coeffs(|k, v| v * &pow(k))
    }

    /// `X f'(X)`.
    pub fn x_derivative(&self) -> Self {
        self.map_coeffs(|k, v| v.scale_int(k))
    }

    /// Value at a point, given the point's integer powers.
    pub fn eval_powers(&self, pow: impl Fn(i64) -> CycScalar) -> CycScalar {
        let mut acc = CycScalar::zero(&self.ring);
        for (k, v) in self.terms() {
            acc += &(v * &pow(k));
        }
        acc
    }

    /// Exact quotient by `X^2 - 1`; fails when the division leaves a remainder.
    pub fn div_x2_minus_1(&self) -> Result<Self> {
        let (Some(lo), Some(hi)) = (self.min_exp(), self.max_exp()) else {
            return Ok(self.clone());
        };
        let mut rem = self.clone();
        let mut quo = Self::zero(&self.ring);
        let mut k = hi;
        while k >= lo + 2 {
            if let Some(c) = rem.take_term(k) {
                quo.add_term(k - 2, &c);
                rem.add_term(k - 2, &c);
            }
            k -= 1;
        }
        if rem.is_zero() {
            Ok(quo)
        } else {
            Err(Error::Verification("Laurent polynomial is not divisible by X^2 - 1".into()))
        }
    }

    fn map_coeffs(&self, f: impl Fn(i64, &CycScalar) -> CycScalar) -> Self {
        let mut out = Self::zero(&self.ring);
        for (k, v) in self.terms() {
            out.add_term(k, &f(k, v));
        }
        out
    }
}

/// `U_s(X) = X^{s-1} + X^{s-3} + ... + X^{-(s-1)}`; `U_0 = 0`.
pub fn chebyshev_u(ring: &Arc<CycRing>, s: i64) -> Result<LaurentPoly> {
    if s < 0 {
        return Err(Error::InvalidParameter(format!("Chebyshev index must be non-negative, got {s}")));
    }
    let mut f = LaurentPoly::zero(ring);
    let one = CycScalar::one(ring);
    let mut e = s - 1;
    while e >= -(s - 1) && s > 0 {
        f.add_term(e, &one);
        e -= 2;
    }
    Ok(f)
}
