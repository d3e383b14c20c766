//! The `(6p-4)`-dimensional module `Z` in its X-basis.
//!
//! Basis order: `w_1..w_{2p}`, `e_1..e_{2p}`, then `m_s` for
//! `s ∈ {2..p-1} ∪ {p+2..2p-1}`. Subscripts of `w` and `e` are read modulo `2p`
//! with representatives `1..2p`, so `w_0 = w_{2p}`. Matrices act on columns.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::cyclotomic::{CycRing, CycScalar};
use crate::error::{check_p, Error, Result};
use crate::linalg::Matrix;
use crate::qnum::QNumbers;
use crate::report::Report;

/// Operators on `Z` are plain matrices in the X-basis.
pub type ZOperator = Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BasisKind {
    W,
    E,
    M,
}

/// Tagged basis label `w_s`, `e_s` or `m_s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    pub kind: BasisKind,
    pub s: u32,
}

impl BasisIndex {
    /// Validated label for the given `p`.
    pub fn new(kind: BasisKind, s: u32, p: u32) -> Result<Self> {
        let ok = match kind {
            BasisKind::W | BasisKind::E => (1..=2 * p).contains(&s),
            BasisKind::M => is_m_label(p, s as i64),
        };
        if ok {
            Ok(BasisIndex { kind, s })
        } else {
            Err(Error::InvalidParameter(format!("no basis vector {kind:?}{s} for p = {p}")))
        }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            BasisKind::W => 'w',
            BasisKind::E => 'e',
            BasisKind::M => 'm',
        };
        write!(f, "{tag}{}", self.s)
    }
}

impl FromStr for BasisIndex {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let mut chars = text.chars();
        let kind = match chars.next() {
            Some('w') => BasisKind::W,
            Some('e') => BasisKind::E,
            Some('m') => BasisKind::M,
            _ => return Err(Error::Parse(format!("bad basis label '{text}'"))),
        };
        let s = chars.as_str().parse().map_err(|_| Error::Parse(format!("bad basis label '{text}'")))?;
        Ok(BasisIndex { kind, s })
    }
}

/// Whether `m_s` exists: `s ∈ {2..p-1} ∪ {p+2..2p-1}`.
pub fn is_m_label(p: u32, s: i64) -> bool {
    let p = p as i64;
    (2..p).contains(&s) || (p + 2..2 * p).contains(&s)
}

/// Labels `s` of the m-block, ascending.
pub fn m_labels(p: u32) -> Vec<i64> {
    (1..2 * p as i64).filter(|&s| is_m_label(p, s)).collect()
}

/// Index bookkeeping for the X-basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZBasis {
    p: u32,
    labels: Vec<BasisIndex>,
    m_slots: Vec<Option<usize>>,
}

impl ZBasis {
    pub fn new(p: u32) -> Result<Self> {
        check_p(p)?;
        let two_p = 2 * p;
        let mut labels = Vec::with_capacity(6 * p as usize - 4);
        labels.extend((1..=two_p).map(|s| BasisIndex { kind: BasisKind::W, s }));
        labels.extend((1..=two_p).map(|s| BasisIndex { kind: BasisKind::E, s }));
        let mut m_slots = vec![None; two_p as usize + 1];
        for s in m_labels(p) {
            m_slots[s as usize] = Some(labels.len());
            labels.push(BasisIndex { kind: BasisKind::M, s: s as u32 });
        }
        Ok(ZBasis { p, labels, m_slots })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[BasisIndex] {
        &self.labels
    }

    pub fn label_strings(&self) -> Vec<String> {
        self.labels.iter().map(ToString::to_string).collect()
    }

    fn wrap(&self, s: i64) -> usize {
        (s - 1).rem_euclid(2 * self.p as i64) as usize
    }

    /// Position of `w_s`, subscript read modulo `2p`.
    pub fn w(&self, s: i64) -> usize {
        self.wrap(s)
    }

    /// Position of `e_s`, subscript read modulo `2p`.
    pub fn e(&self, s: i64) -> usize {
        2 * self.p as usize + self.wrap(s)
    }

    /// Position of `m_s`; panics when the label does not exist.
    pub fn m(&self, s: i64) -> usize {
        self.try_m(s).unwrap_or_else(|| panic!("no m_{s} for p = {}", self.p))
    }

    pub fn try_m(&self, s: i64) -> Option<usize> {
        usize::try_from(s).ok().and_then(|s| self.m_slots.get(s).copied().flatten())
    }

    pub fn position(&self, idx: BasisIndex) -> Option<usize> {
        match idx.kind {
            BasisKind::W if (1..=2 * self.p).contains(&idx.s) => Some(self.w(idx.s as i64)),
            BasisKind::E if (1..=2 * self.p).contains(&idx.s) => Some(self.e(idx.s as i64)),
            BasisKind::M => self.try_m(idx.s as i64),
            _ => None,
        }
    }

    /// Positions of the `w` and `e` vectors (the polynomial submodule).
    pub fn we_positions(&self) -> Vec<usize> {
        (0..4 * self.p as usize).collect()
    }
}

/// A vector in `Z`, coordinates in the X-basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZVector {
    #[serde(skip)]
    p: u32,
    coeffs: Vec<CycScalar>,
}

impl ZVector {
    pub fn zero(qn: &QNumbers) -> Self {
        ZVector { p: qn.p(), coeffs: vec![qn.zero(); 6 * qn.p() as usize - 4] }
    }

    pub fn from_coeffs(p: u32, coeffs: Vec<CycScalar>) -> Result<Self> {
        let dim = 6 * p as usize - 4;
        if coeffs.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: coeffs.len() });
        }
        Ok(ZVector { p, coeffs })
    }

    pub fn basis_vector(qn: &QNumbers, position: usize) -> Self {
        let mut v = Self::zero(qn);
        v.coeffs[position] = qn.one();
        v
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[CycScalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<CycScalar> {
        self.coeffs
    }

    pub fn get(&self, position: usize) -> &CycScalar {
        &self.coeffs[position]
    }

    pub fn set(&mut self, position: usize, x: CycScalar) {
        self.coeffs[position] = x;
    }

    pub fn add_at(&mut self, position: usize, x: &CycScalar) {
        self.coeffs[position] += x;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(CycScalar::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        ZVector { p: self.p, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        ZVector { p: self.p, coeffs }
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        ZVector { p: self.p, coeffs }
    }

    /// `A v`.
    pub fn apply(&self, op: &ZOperator) -> Result<Self> {
        Ok(ZVector { p: self.p, coeffs: op.mul_vec(&self.coeffs)? })
    }
}

fn ring_of(qn: &QNumbers) -> &Arc<CycRing> {
    qn.ring()
}

fn dim(qn: &QNumbers) -> usize {
    6 * qn.p() as usize - 4
}

/// `X`: `X w_s = q^s w_s`, `X e_s = q^s (e_s + w_s)`, `X m_s = q^s m_s`.
pub fn build_x(qn: &QNumbers) -> Result<ZOperator> {
    let basis = ZBasis::new(qn.p())?;
    let mut x = Matrix::zeros(ring_of(qn), dim(qn), dim(qn));
    for s in 1..=2 * qn.p() as i64 {
        let qs = qn.q_pow(s);
        x.set(basis.w(s), basis.w(s), qs.clone());
        x.set(basis.e(s), basis.e(s), qs.clone());
        x.set(basis.w(s), basis.e(s), qs);
    }
    for s in m_labels(qn.p()) {
        x.set(basis.m(s), basis.m(s), qn.q_pow(s));
    }
    Ok(x)
}

/// `T`, from its action on `w`, `e` and `m`.
pub fn build_t(qn: &QNumbers) -> Result<ZOperator> {
    let p = qn.p() as i64;
    let b = ZBasis::new(qn.p())?;
    let mut t = Matrix::zeros(ring_of(qn), dim(qn), dim(qn));
    let q = qn.q();
    let qi = qn.q_pow(-1);
    for s in [p, 2 * p] {
        t.add_at(b.w(s), b.w(s), &-&qi);
        t.add_at(b.e(s), b.w(s), &(&qi - &q));
        t.add_at(b.e(s), b.e(s), &q);
    }
    for s in (1..2 * p).filter(|&s| s != p) {
        let inv = qn.q_bracket_inv(s)?;
        let diag = -(qn.q_pow(-s) * &inv);
        let cross = qn.q_bracket(s - 1) * &inv;
        let c = (qn.inv_q_diff() * &inv * &inv).scale_int(2);
        t.add_at(b.w(s), b.w(s), &diag);
        t.add_at(b.w(2 * p - s), b.w(s), &-&cross);
        t.add_at(b.e(s), b.e(s), &diag);
        t.add_at(b.e(2 * p - s), b.e(s), &cross);
        t.add_at(b.w(s), b.e(s), &c);
        t.add_at(b.w(2 * p - s), b.e(s), &-&c);
    }
    t.add_at(b.m(2 * p - 1), b.m(2 * p - 1), &q);
    t.add_at(b.w(1), b.m(2 * p - 1), &-(&q + &qi));
    t.add_at(b.m(p - 1), b.m(p - 1), &q);
    for s in m_labels(qn.p()).into_iter().filter(|&s| s != p - 1 && s != 2 * p - 1) {
        let inv = qn.q_bracket_inv(s)?;
        t.add_at(b.m(s), b.m(s), &-(qn.q_pow(-s) * &inv));
        t.add_at(b.m(2 * p - s), b.m(s), &(qn.q_bracket(s - 1) * &inv));
    }
    Ok(t)
}

/// `Y`, from its action on `w`, `e` and `m` (`w_0` read as `w_{2p}`).
pub fn build_y(qn: &QNumbers) -> Result<ZOperator> {
    let p = qn.p() as i64;
    let b = ZBasis::new(qn.p())?;
    let mut y = Matrix::zeros(ring_of(qn), dim(qn), dim(qn));
    let q = qn.q();
    let qi = qn.q_pow(-1);
    let diff = &q - &qi;
    for s in [p, 2 * p] {
        y.add_at(b.w(s + 1), b.w(s), &-&qi);
        y.add_at(b.e(s + 1), b.w(s), &diff);
        y.add_at(b.e(s + 1), b.e(s), &-&q);
    }
    for s in (1..2 * p).filter(|&s| s != p) {
        let inv = qn.q_bracket_inv(s)?;
        let reflect = qn.q_pow(-s) * &inv;
        let step = qn.q_bracket(s - 1) * &inv;
        let c = (qn.inv_q_diff() * &inv * &inv).scale_int(2);
        y.add_at(b.w(2 * p - s + 1), b.w(s), &-&reflect);
        y.add_at(b.w(s + 1), b.w(s), &-&step);
        y.add_at(b.e(2 * p - s + 1), b.e(s), &reflect);
        y.add_at(b.e(s + 1), b.e(s), &-&step);
        y.add_at(b.w(s + 1), b.e(s), &-&c);
        y.add_at(b.w(2 * p - s + 1), b.e(s), &c);
    }
    y.add_at(b.m(2), b.m(2 * p - 1), &-&q);
    y.add_at(b.w(0), b.m(2 * p - 1), &-(&q + &qi));
    y.add_at(b.m(p + 2), b.m(p - 1), &-&q);
    for s in m_labels(qn.p()).into_iter().filter(|&s| s != p - 1 && s != 2 * p - 1) {
        let inv = qn.q_bracket_inv(s)?;
        y.add_at(b.m(s + 1), b.m(s), &-(qn.q_bracket(s - 1) * &inv));
        y.add_at(b.m(2 * p - s + 1), b.m(s), &(qn.q_pow(-s) * &inv));
    }
    Ok(y)
}

/// Exact inverse by Gauss-Jordan elimination.
pub fn invert_operator(a: &ZOperator) -> Result<ZOperator> {
    a.inverse()
}

/// Inverse of `X` from its Jordan action: `X^{-1} e_s = q^{-s} (e_s - w_s)`.
pub fn x_inverse(qn: &QNumbers) -> Result<ZOperator> {
    let basis = ZBasis::new(qn.p())?;
    let mut x = Matrix::zeros(ring_of(qn), dim(qn), dim(qn));
    for s in 1..=2 * qn.p() as i64 {
        let qs = qn.q_pow(-s);
        x.set(basis.w(s), basis.w(s), qs.clone());
        x.set(basis.e(s), basis.e(s), qs.clone());
        x.set(basis.w(s), basis.e(s), -qs);
    }
    for s in m_labels(qn.p()) {
        x.set(basis.m(s), basis.m(s), qn.q_pow(-s));
    }
    Ok(x)
}

/// The generators `X`, `Y`, `T` together with their inverses.
#[derive(Clone, Debug)]
pub struct Generators {
    pub x: ZOperator,
    pub y: ZOperator,
    pub t: ZOperator,
    pub x_inv: ZOperator,
    pub y_inv: ZOperator,
    pub t_inv: ZOperator,
}

impl Generators {
    /// Builds the generators; every inverse is certified by an exact product.
    pub fn new(qn: &QNumbers) -> Result<Self> {
        let x = build_x(qn)?;
        let y = build_y(qn)?;
        let t = build_t(qn)?;
        let n = x.rows();
        let id = Matrix::identity(qn.ring(), n);
        let x_inv = x_inverse(qn)?;
        if &x * &x_inv != id {
            return Err(Error::Verification("X^{-1} from the Jordan action is not an inverse".into()));
        }
        let y_inv = invert_operator(&y)?;
        let t_inv = invert_operator(&t)?;
        Ok(Generators { x, y, t, x_inv, y_inv, t_inv })
    }
}

/// The Hecke-algebra relations with `𝔱^{1/2} = q`.
pub fn verify_daha(qn: &QNumbers, g: &Generators) -> Report {
    let mut r = Report::new("daha", qn.p());
    let q = qn.q();
    r.matrix_eq("TXT = X^-1", &(&(&g.t * &g.x) * &g.t), &g.x_inv);
    r.matrix_eq("TY^-1T = Y", &(&(&g.t * &g.y_inv) * &g.t), &g.y);
    let rhs = (&(&(&g.y * &g.x) * &g.t) * &g.t).scale(&q);
    r.matrix_eq("XY = qYXT^2", &(&g.x * &g.y), &rhs);
    let quad = g.t.sub_scalar(&q).and_then(|a| Ok(&a * &g.t.sub_scalar(&-qn.q_pow(-1))?));
    r.matrix_eq_result(
        "(T - q)(T + q^-1) = 0",
        quad.map(|m| (m, Matrix::zeros(qn.ring(), g.t.rows(), g.t.cols()))),
    );
    let id = Matrix::identity(qn.ring(), g.t.rows());
    r.matrix_eq("T T^-1 = I", &(&g.t * &g.t_inv), &id);
    r.matrix_eq("Y Y^-1 = I", &(&g.y * &g.y_inv), &id);
    r.matrix_eq_result("T^-1 = T - (q - q^-1)", g.t.sub_scalar(&(&q - &qn.q_pow(-1))).map(|m| (g.t_inv.clone(), m)));
    r
}

/// Product on `Z`: `e_i e_j = δ e_j`, `e_i w_j = δ w_j`, `e_i m_j = δ m_j`, all others zero.
pub fn multiply(u: &ZVector, v: &ZVector) -> Result<ZVector> {
    if u.p != v.p {
        return Err(Error::RingMismatch { left: u.p, right: v.p });
    }
    let basis = ZBasis::new(u.p)?;
    let ring = u.coeffs[0].ring().clone();
    let mut out = vec![CycScalar::zero(&ring); basis.dim()];
    for s in 1..=2 * u.p as i64 {
        let (ie, iw) = (basis.e(s), basis.w(s));
        out[ie] = &u.coeffs[ie] * &v.coeffs[ie];
        out[iw] = &u.coeffs[ie] * &v.coeffs[iw] + &u.coeffs[iw] * &v.coeffs[ie];
        if let Some(im) = basis.try_m(s) {
            out[im] = &u.coeffs[ie] * &v.coeffs[im] + &u.coeffs[im] * &v.coeffs[ie];
        }
    }
    ZVector::from_coeffs(u.p, out)
}

/// `1 = Σ e_s`.
pub fn unit(qn: &QNumbers) -> Result<ZVector> {
    let basis = ZBasis::new(qn.p())?;
    let mut v = ZVector::zero(qn);
    for s in 1..=2 * qn.p() as i64 {
        v.set(basis.e(s), qn.one());
    }
    Ok(v)
}

/// `v = Σ q^{-(s²-1)/2} e_s - w_1 + q^{-p²/2} w_{p+1} + Σ_m q^{-(s²-1)/2} ((p-s) w_s + p m_s)`.
pub fn gaussian_element(qn: &QNumbers) -> Result<ZVector> {
    let p = qn.p() as i64;
    let basis = ZBasis::new(qn.p())?;
    let mut v = ZVector::zero(qn);
    for s in 1..=2 * p {
        v.add_at(basis.e(s), &qn.q_half_pow(-(s * s - 1)));
    }
    v.add_at(basis.w(1), &qn.int(-1));
    v.add_at(basis.w(p + 1), &qn.q_half_pow(-p * p));
    for s in m_labels(qn.p()) {
        let g = qn.q_half_pow(-(s * s - 1));
        v.add_at(basis.w(s), &g.scale_int(p - s));
        v.add_at(basis.m(s), &g.scale_int(p));
    }
    Ok(v)
}

/// Inverse in the algebra: with `v = d + n`, `d` in the span of the `e_s`,
/// `v^{-1} = d^{-1} - d^{-1} n d^{-1}` since `n^2 = 0`.
pub fn invert_algebra_element(v: &ZVector) -> Result<ZVector> {
    let basis = ZBasis::new(v.p)?;
    let ring = v.coeffs[0].ring().clone();
    let mut d_inv = vec![CycScalar::zero(&ring); basis.dim()];
    let mut nil = v.coeffs.clone();
    for s in 1..=2 * v.p as i64 {
        let ie = basis.e(s);
        let c = &v.coeffs[ie];
        if c.is_zero() {
            return Err(Error::NotInvertible(format!("coefficient of e{s} vanishes")));
        }
        d_inv[ie] = c.inverse()?;
        nil[ie] = CycScalar::zero(&ring);
    }
    let d_inv = ZVector::from_coeffs(v.p, d_inv)?;
    let nil = ZVector::from_coeffs(v.p, nil)?;
    let correction = multiply(&multiply(&d_inv, &nil)?, &d_inv)?;
    Ok(d_inv.sub(&correction))
}

/// Matrix of `x -> v x`.
pub fn mult_operator(v: &ZVector) -> Result<ZOperator> {
    let basis = ZBasis::new(v.p)?;
    let ring = v.coeffs[0].ring().clone();
    let mut a = Matrix::zeros(&ring, basis.dim(), basis.dim());
    for s in 1..=2 * v.p as i64 {
        let (ie, iw) = (basis.e(s), basis.w(s));
        let ve = v.coeffs[ie].clone();
        a.set(ie, ie, ve.clone());
        a.set(iw, ie, v.coeffs[iw].clone());
        a.set(iw, iw, ve.clone());
        if let Some(im) = basis.try_m(s) {
            a.set(im, ie, v.coeffs[im].clone());
            a.set(im, im, ve);
        }
    }
    Ok(a)
}

/// Whether the coordinate subspace on `positions` is invariant under `a`.
pub fn coordinate_span_invariant(a: &ZOperator, positions: &[usize]) -> Option<(usize, usize)> {
    let inside: std::collections::HashSet<usize> = positions.iter().copied().collect();
    for &j in positions {
        for i in 0..a.rows() {
            if !inside.contains(&i) && !a.get(i, j).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Invariant subspaces and the identification of the two blocks of `Z/W`.
pub fn submodule_checks(qn: &QNumbers, g: &Generators) -> Result<Report> {
    let p = qn.p() as i64;
    let basis = ZBasis::new(qn.p())?;
    let mut r = Report::new("submodules", qn.p());
    let mut w_span: Vec<usize> = (1..=2 * p).map(|s| basis.w(s)).collect();
    w_span.extend([1, p, p + 1, 2 * p].map(|s| basis.e(s)));
    let ops = [("X", &g.x), ("Y", &g.y), ("T", &g.t)];
    for (name, op) in ops {
        let hit = coordinate_span_invariant(op, &w_span);
        r.assert(
            &format!("{name} preserves W = span(w, e1, ep, e(p+1), e2p)"),
            hit.is_none(),
            hit.map(|(i, j)| format!("column {j} reaches row {i}")).unwrap_or_default(),
        );
    }
    for (name, op) in ops {
        let hit = coordinate_span_invariant(op, &basis.we_positions());
        r.assert(
            &format!("{name} preserves span(w, e)"),
            hit.is_none(),
            hit.map(|(i, j)| format!("column {j} reaches row {i}")).unwrap_or_default(),
        );
    }
    let labels = m_labels(qn.p());
    let e_pos: Vec<usize> = labels.iter().map(|&s| basis.e(s)).collect();
    let m_pos: Vec<usize> = labels.iter().map(|&s| basis.m(s)).collect();
    for (name, op) in ops {
        let e_block = op.select(&e_pos, &e_pos);
        let m_block = op.select(&m_pos, &m_pos);
        r.matrix_eq(&format!("{name}: E-block equals M-block on Z/W"), &e_block, &m_block);
        let cross = op.select(&m_pos, &e_pos).is_zero() && op.select(&e_pos, &m_pos).is_zero();
        r.assert(&format!("{name}: E and M do not mix on Z/W"), cross, "");
    }
    let m_hit = coordinate_span_invariant(&g.t, &m_pos);
    r.assert(
        "span(m) alone is not T-invariant",
        m_hit.is_some(),
        m_hit.map(|(i, j)| format!("column {j} reaches row {i}")).unwrap_or_default(),
    );
    Ok(r)
}

/// Jordan block counts of an operator at one eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JordanCount {
    pub exponent: i64,
    pub size1: usize,
    pub size2: usize,
    pub larger: usize,
    pub generalized_dim: usize,
}

/// Jordan block counts at each eigenvalue `q^s`, from ranks of `(A - q^s)^k`, `k = 1, 2, 3`.
pub fn jordan_profile(qn: &QNumbers, a: &ZOperator, exponents: &[i64]) -> Result<Vec<JordanCount>> {
    exponents.iter().map(|&s| jordan_count(a, &qn.q_pow(s), s)).collect()
}

/// Jordan block counts of `a` at `eigenvalue`; `exponent` is stored as the label.
pub fn jordan_count(a: &ZOperator, eigenvalue: &CycScalar, exponent: i64) -> Result<JordanCount> {
    let n = a.rows();
    let shifted = a.sub_scalar(eigenvalue)?;
    let sq = &shifted * &shifted;
    let cube = &sq * &shifted;
    let (r1, r2, r3) = (shifted.rank()?, sq.rank()?, cube.rank()?);
    Ok(JordanCount {
        exponent,
        size1: (n - r1) - (r1 - r2),
        size2: (r1 - r2) - (r2 - r3),
        larger: r2 - r3,
        generalized_dim: n - r3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qn(p: u32) -> QNumbers {
        QNumbers::new(p).unwrap()
    }

    #[test]
    fn basis_layout() {
        let b = ZBasis::new(4).unwrap();
        assert_eq!(b.dim(), 20);
        assert_eq!(b.label_strings()[..2], ["w1", "w2"]);
        assert_eq!(b.label_strings()[8], "e1");
        assert_eq!(b.label_strings()[16..], ["m2", "m3", "m6", "m7"]);
        assert_eq!(b.w(0), b.w(8));
        assert_eq!(b.e(9), b.e(1));
        assert_eq!(b.try_m(4), None);
        assert!(BasisIndex::new(BasisKind::M, 5, 4).unwrap_err().to_string().contains("M5"));
        assert_eq!("m6".parse::<BasisIndex>().unwrap(), BasisIndex { kind: BasisKind::M, s: 6 });
    }

    #[test]
    fn x_columns() {
        let q = qn(3);
        let b = ZBasis::new(3).unwrap();
        let x = build_x(&q).unwrap();
        assert_eq!(x.get(b.w(1), b.w(1)), &q.q());
        assert_eq!(x.get(b.e(3), b.e(3)), &q.int(-1));
        assert_eq!(x.get(b.w(3), b.e(3)), &q.int(-1));
        assert_eq!(x.get(b.m(2), b.m(2)), &q.q_pow(2));
    }

    #[test]
    fn t_and_y_sample_columns() {
        let q = qn(4);
        let b = ZBasis::new(4).unwrap();
        let t = build_t(&q).unwrap();
        let col = |m: &Matrix, j: usize| m.column(j);
        let mut expect = vec![q.zero(); b.dim()];
        expect[b.e(4)] = q.q();
        assert_eq!(col(&t, b.e(4)), expect);
        let mut expect = vec![q.zero(); b.dim()];
        expect[b.m(7)] = q.q();
        expect[b.w(1)] = -(q.q() + q.q_pow(-1));
        assert_eq!(col(&t, b.m(7)), expect);
        let y = build_y(&q).unwrap();
        let mut expect = vec![q.zero(); b.dim()];
        expect[b.e(1)] = -q.q();
        assert_eq!(col(&y, b.e(8)), expect);
        let mut expect = vec![q.zero(); b.dim()];
        expect[b.m(2)] = -q.q();
        expect[b.w(8)] = -(q.q() + q.q_pow(-1));
        assert_eq!(col(&y, b.m(7)), expect);
        let mut expect = vec![q.zero(); b.dim()];
        expect[b.m(6)] = -q.q();
        assert_eq!(col(&y, b.m(3)), expect);
    }

    #[test]
    fn daha_relations_small_p() {
        for p in [3, 4] {
            let q = qn(p);
            let g = Generators::new(&q).unwrap();
            let r = verify_daha(&q, &g);
            assert!(r.passed(), "{:#?}", r.summary_lines());
        }
    }

    #[test]
    fn sabotage_is_reported() {
        let q = qn(3);
        let mut g = Generators::new(&q).unwrap();
        let b = ZBasis::new(3).unwrap();
        g.t.add_at(b.w(2), b.w(2), &q.one());
        let r = verify_daha(&q, &g);
        let failed = r.get("TXT = X^-1").unwrap();
        assert!(!failed.passed());
        assert!(failed.first_mismatch.is_some());
    }

    #[test]
    fn algebra_structure() {
        let q = qn(3);
        let b = ZBasis::new(3).unwrap();
        let e = |s: i64| ZVector::basis_vector(&q, b.e(s));
        let m = |s: i64| ZVector::basis_vector(&q, b.m(s));
        let w = |s: i64| ZVector::basis_vector(&q, b.w(s));
        assert_eq!(multiply(&e(2), &m(2)).unwrap(), m(2));
        assert!(multiply(&w(1), &w(1)).unwrap().is_zero());
        let one = unit(&q).unwrap();
        assert_eq!(multiply(&one, &e(5)).unwrap(), e(5));
        assert_eq!(multiply(&one, &one).unwrap(), one);
        assert_eq!(mult_operator(&one).unwrap(), Matrix::identity(q.ring(), b.dim()));
        assert!(invert_algebra_element(&e(1)).is_err());
        assert_eq!(invert_algebra_element(&one).unwrap(), one);
        let t = build_t(&q).unwrap();
        assert_eq!(one.apply(&t).unwrap(), one.scale(&q.q()));
    }

    #[test]
    fn x_is_a_multiplication_operator() {
        let q = qn(5);
        let b = ZBasis::new(5).unwrap();
        let mut v = ZVector::zero(&q);
        for s in 1..=10 {
            v.set(b.e(s), q.q_pow(s));
            v.set(b.w(s), q.q_pow(s));
        }
        assert_eq!(mult_operator(&v).unwrap(), build_x(&q).unwrap());
    }

    #[test]
    fn gaussian_coefficients() {
        let q = qn(3);
        let b = ZBasis::new(3).unwrap();
        let v = gaussian_element(&q).unwrap();
        assert!(v.get(b.e(1)).is_one());
        assert_eq!(v.get(b.w(1)), &q.int(-1));
        assert_eq!(v.get(b.m(2)), &q.q_half_pow(-3).scale_int(3));
        let inv = invert_algebra_element(&v).unwrap();
        assert_eq!(multiply(&inv, &v).unwrap(), unit(&q).unwrap());
    }
}
