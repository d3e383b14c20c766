//! Polynomial model of the `4p`-dimensional submodule `span(w, e)`: Laurent
//! polynomials modulo `X^{2p} + X^{-2p} - 2`, normal form on exponents
//! `-(2p-1)..2p`.

use std::sync::Arc;

use crate::cyclotomic::{CycRing, CycScalar};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::qnum::{chebyshev_u, sign, LaurentPoly, QNumbers};
use crate::rep_z::{is_m_label, Generators, ZBasis, ZOperator};
use crate::report::Report;
use crate::ybasis::{f_vector, k_vector, u_vector};

/// A Laurent polynomial in normal form: every exponent in `-(2p-1)..=2p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientPoly {
    p: u32,
    rep: LaurentPoly,
}

/// `(lo, hi)` of the normal-form window.
pub fn window(p: u32) -> (i64, i64) {
    let p = p as i64;
    (-(2 * p - 1), 2 * p)
}

/// Rewrites exponents outside the window using `X^k = 2 X^{k-2p} - X^{k-4p}` (and its mirror).
pub fn reduce(p: u32, f: &LaurentPoly) -> QuotientPoly {
    let (lo, hi) = window(p);
    let two_p = 2 * p as i64;
    let mut rep = f.clone();
    while let Some(k) = rep.max_exp().filter(|&k| k > hi) {
        let c = rep.take_term(k).expect("max term present");
        rep.add_term(k - two_p, &c.scale_int(2));
        rep.add_term(k - 2 * two_p, &-c);
    }
    while let Some(k) = rep.min_exp().filter(|&k| k < lo) {
        let c = rep.take_term(k).expect("min term present");
        rep.add_term(k + two_p, &c.scale_int(2));
        rep.add_term(k + 2 * two_p, &-c);
    }
    QuotientPoly { p, rep }
}

impl QuotientPoly {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ring(&self) -> &Arc<CycRing> {
        self.rep.ring()
    }

    pub fn representative(&self) -> &LaurentPoly {
        &self.rep
    }

    /// Coefficients on `X^lo..X^hi`.
    pub fn window_coeffs(&self) -> Vec<CycScalar> {
        let (lo, hi) = window(self.p);
        (lo..=hi).map(|k| self.rep.coeff(k)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        QuotientPoly { p: self.p, rep: self.rep.add(&other.rep) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        QuotientPoly { p: self.p, rep: self.rep.sub(&other.rep) }
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        QuotientPoly { p: self.p, rep: self.rep.scale(c) }
    }
}

/// Square root of the Hecke parameter used in `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeckeParam {
    /// `t = q^2`, `t^{1/2} = q`
    QSquared,
    /// `t = q^{-2}`, `t^{1/2} = q^{-1}`
    QInverseSquared,
}

/// Multiplication by `X`.
pub fn op_x_poly(f: &QuotientPoly) -> QuotientPoly {
    reduce(f.p, &f.rep.shift(1))
}

/// `T f = t^{1/2} s f + (t^{1/2} - t^{-1/2}) (s f - f)/(X^2 - 1)`, `s f(X) = f(X^{-1})`.
pub fn op_t_poly(qn: &QNumbers, f: &QuotientPoly, param: HeckeParam) -> Result<QuotientPoly> {
    let th = match param {
        HeckeParam::QSquared => 1,
        HeckeParam::QInverseSquared => -1,
    };
    let sf = f.rep.reflect();
    let divided = sf.sub(&f.rep).div_x2_minus_1()?;
    let out = sf.scale(&qn.q_pow(th)).add(&divided.scale(&(qn.q_pow(th) - qn.q_pow(-th))));
    Ok(reduce(f.p, &out))
}

/// `Y f = -s(p(T f))`, `p f(X) = f(qX)`.
pub fn op_y_poly(qn: &QNumbers, f: &QuotientPoly, param: HeckeParam) -> Result<QuotientPoly> {
    let tf = op_t_poly(qn, f, param)?;
    let out = tf.rep.substitute_scaled(|k| qn.q_pow(k)).reflect().neg();
    Ok(reduce(f.p, &out))
}

/// `w_s = (1/4p²)(X^{2p} - 1) Σ_{j=0}^{2p-1} q^{-sj} X^j`.
pub fn w_poly(qn: &QNumbers, s: i64) -> QuotientPoly {
    let p = qn.p() as i64;
    let ring = qn.ring();
    let mut f = LaurentPoly::zero(ring);
    let c = qn.ratio(1, 4 * p * p);
    for j in 0..2 * p {
        let a = &c * &qn.q_pow(-s * j);
        f.add_term(j + 2 * p, &a);
        f.add_term(j, &-a);
    }
    reduce(qn.p(), &f)
}

/// `e_s = 1/(2p) + Σ_{j=1}^{2p-1} (2p-j)/(4p²) (q^{-sj} X^j + q^{sj} X^{-j})`.
pub fn e_poly(qn: &QNumbers, s: i64) -> QuotientPoly {
    let p = qn.p() as i64;
    let mut f = LaurentPoly::constant(qn.ring(), qn.ratio(1, 2 * p));
    for j in 1..2 * p {
        let c = qn.ratio(2 * p - j, 4 * p * p);
        f.add_term(j, &(&c * &qn.q_pow(-s * j)));
        f.add_term(-j, &(&c * &qn.q_pow(s * j)));
    }
    reduce(qn.p(), &f)
}

/// `U_n(X)` and `U_n(q^{-1} X)`.
fn cheb(qn: &QNumbers, n: i64) -> Result<(LaurentPoly, LaurentPoly)> {
    let u = chebyshev_u(qn.ring(), n)?;
    let shifted = u.substitute_scaled(|k| qn.q_pow(-k));
    Ok((u, shifted))
}

fn prefactor(qn: &QNumbers) -> CycScalar {
    qn.inv_sqrt_2p() * qn.ratio(1, qn.p() as i64)
}

/// Polynomial form of `u_s`, `s = 1..2p`.
pub fn u_poly(qn: &QNumbers, s: i64) -> Result<QuotientPoly> {
    let p = qn.p() as i64;
    if !(1..=2 * p).contains(&s) {
        return Err(Error::InvalidParameter(format!("u index {s} outside 1..{}", 2 * p)));
    }
    let pre = prefactor(qn);
    let half = qn.ratio(1, 2);
    // s <= p: indices p - s, p + s; s = p + t: indices t, 2p - t
    let (c, lead, a, b) = if s <= p {
        (pre.scale_int(sign(s)), qn.q_pow(s), p - s, p + s)
    } else {
        let t = s - p;
        (pre.scale_int(sign(s)), qn.q_pow(s), t, 2 * p - t)
    };
    let (ua, ua_q) = cheb(qn, a)?;
    let (ub, ub_q) = cheb(qn, b)?;
    let f = ua.add(&ub).scale(&(&lead * &half)).add(&ua_q.add(&ub_q).scale(&(qn.q() * &half)));
    Ok(reduce(qn.p(), &f.scale(&c)))
}

/// Polynomial form of `k_s` for `s` in the `m` range.
pub fn k_poly(qn: &QNumbers, s: i64) -> Result<QuotientPoly> {
    let p = qn.p() as i64;
    if !is_m_label(qn.p(), s) {
        return Err(Error::InvalidParameter(format!("k index {s} outside the m range")));
    }
    let pre = prefactor(qn);
    let (c, n) = if s < p { (pre.scale_int(sign(s + 1)), p - s) } else { (pre.scale_int(sign(s)), s - p) };
    let (u, u_q) = cheb(qn, n)?;
    let f = u.scale(&qn.q_pow(s)).add(&u_q.scale(&qn.q()));
    Ok(reduce(qn.p(), &f.scale(&c)))
}

/// Polynomial form of `f_s` for `s ∈ {1, p, p+1, 2p}`.
pub fn f_special_poly(qn: &QNumbers, s: i64) -> Result<QuotientPoly> {
    let p = qn.p() as i64;
    let pre = prefactor(qn);
    let (up, _) = cheb(qn, p)?;
    let (u2p, _) = cheb(qn, 2 * p)?;
    let f = if s == p {
        u2p.scale(&(pre.scale_int(sign(p + 1)) * qn.ratio(1, 2)))
    } else if s == 2 * p {
        up.scale(&pre)
    } else if s == p + 1 {
        u2p.shift(1).scale(&(pre.scale_int(sign(p)) * qn.q() * qn.ratio(1, 2)))
    } else if s == 1 {
        up.shift(1).scale(&-(&pre * &qn.q()))
    } else {
        return Err(Error::InvalidParameter(format!("f{s} has no polynomial form")));
    };
    Ok(reduce(qn.p(), &f))
}

/// Coefficients over `w_1..w_2p, e_1..e_2p`: `w_s -> (X f')(q^s)`, `e_s -> f(q^s)`.
pub fn decompose(qn: &QNumbers, f: &QuotientPoly) -> Vec<CycScalar> {
    let p = qn.p() as i64;
    let deriv = f.rep.x_derivative();
    let mut out: Vec<CycScalar> = (1..=2 * p).map(|s| deriv.eval_powers(|k| qn.q_pow(s * k))).collect();
    out.extend((1..=2 * p).map(|s| f.rep.eval_powers(|k| qn.q_pow(s * k))));
    out
}

/// Inverse of [`decompose`].
pub fn reassemble(qn: &QNumbers, coeffs: &[CycScalar]) -> QuotientPoly {
    let p = qn.p() as i64;
    let mut out = reduce(qn.p(), &LaurentPoly::zero(qn.ring()));
    for s in 1..=2 * p {
        let (cw, ce) = (&coeffs[(s - 1) as usize], &coeffs[(2 * p + s - 1) as usize]);
        out = out.add(&w_poly(qn, s).scale(cw)).add(&e_poly(qn, s).scale(ce));
    }
    out
}

/// Matrix of a polynomial operator in the basis `w_1..w_2p, e_1..e_2p`, by exact
/// elimination against the window monomials.
pub fn poly_matrix(qn: &QNumbers, op: impl Fn(&QuotientPoly) -> Result<QuotientPoly>) -> Result<Matrix> {
    let p = qn.p() as i64;
    let n = 4 * p as usize;
    let basis: Vec<QuotientPoly> = (1..=2 * p).map(|s| w_poly(qn, s)).chain((1..=2 * p).map(|s| e_poly(qn, s))).collect();
    let b = Matrix::from_columns(qn.ring(), n, &basis.iter().map(QuotientPoly::window_coeffs).collect::<Vec<_>>())?;
    let images: Vec<Vec<CycScalar>> = basis.iter().map(|f| op(f).map(|g| g.window_coeffs())).collect::<Result<_>>()?;
    b.solve(&Matrix::from_columns(qn.ring(), n, &images)?)
}

/// The three generator matrices of the polynomial model.
#[derive(Clone, Debug)]
pub struct OracleMatrices {
    pub x: Matrix,
    pub y: Matrix,
    pub t: Matrix,
}

pub fn oracle_matrices(qn: &QNumbers, param: HeckeParam) -> Result<OracleMatrices> {
    Ok(OracleMatrices {
        x: poly_matrix(qn, |f| Ok(op_x_poly(f)))?,
        y: poly_matrix(qn, |f| op_y_poly(qn, f, param))?,
        t: poly_matrix(qn, |f| op_t_poly(qn, f, param))?,
    })
}

/// `A` restricted to `span(w, e)`.
pub fn we_block(a: &ZOperator) -> Result<Matrix> {
    let n = (a.rows() + 4) / 6;
    let pos = ZBasis::new(n as u32)?.we_positions();
    Ok(a.select(&pos, &pos))
}

/// Oracle matrices against the `span(w, e)` blocks of `X`, `Y`, `T`, plus the
/// relations inside the oracle and the polynomial forms of the `Y`-basis.
pub fn crosscheck_matrices(qn: &QNumbers, g: &Generators) -> Result<Report> {
    let p = qn.p() as i64;
    let mut r = Report::new("oracle", qn.p());
    let m = oracle_matrices(qn, HeckeParam::QSquared)?;
    r.matrix_eq("X oracle = X on span(w, e)", &m.x, &we_block(&g.x)?);
    r.matrix_eq("Y oracle = Y on span(w, e)", &m.y, &we_block(&g.y)?);
    r.matrix_eq("T oracle = T on span(w, e)", &m.t, &we_block(&g.t)?);

    let q = qn.q();
    let q_inv = qn.q_pow(-1);
    let n = m.x.rows();
    let id = Matrix::identity(qn.ring(), n);
    r.matrix_eq_result("oracle: (T - q)(T + q^-1) = 0", (|| {
        Ok((m.t.sub_scalar(&q)?.try_mul(&m.t.sub_scalar(&-q_inv.clone())?)?, Matrix::zeros(qn.ring(), n, n)))
    })());
    r.matrix_eq("oracle: TXT X = 1", &(&(&(&m.t * &m.x) * &m.t) * &m.x), &id);
    r.matrix_eq_result("oracle: TY^-1T = Y", m.y.inverse().map(|y_inv| (&(&m.t * &y_inv) * &m.t, m.y.clone())));
    let t2 = &m.t * &m.t;
    r.matrix_eq("oracle: XY = qYXT^2", &(&m.x * &m.y), &(&(&m.y * &m.x) * &t2).scale(&q));

    let unit = (1..=2 * p).fold(reduce(qn.p(), &LaurentPoly::zero(qn.ring())), |acc, s| acc.add(&e_poly(qn, s)));
    r.assert("sum of e_s = 1", unit == reduce(qn.p(), &LaurentPoly::constant(qn.ring(), qn.one())), "");

    // With Y = -s p T both Chebyshev relations carry an overall minus sign.
    for s in 1..=2 * p {
        let (u, u_q) = cheb(qn, s)?;
        let (uf, uqf) = (reduce(qn.p(), &u), reduce(qn.p(), &u_q));
        let lhs = op_y_poly(qn, &uf, HeckeParam::QSquared)?;
        r.assert(&format!("Y U{s}(X) = -q U{s}(X/q)"), lhs == uqf.scale(&-q.clone()), "");
        let lhs = op_y_poly(qn, &uqf, HeckeParam::QSquared)?;
        let rhs = uf.scale(&q_inv).sub(&uqf.scale(&qn.mu(s)));
        r.assert(&format!("Y U{s}(X/q) = q^-1 U{s}(X) - (q^{s} + q^-{s}) U{s}(X/q)"), lhs == rhs, "");
    }

    let zb = ZBasis::new(qn.p())?;
    let pos = zb.we_positions();
    let restrict = |v: &crate::rep_z::ZVector| pos.iter().map(|&i| v.get(i).clone()).collect::<Vec<_>>();
    for s in 1..=2 * p {
        let f = u_poly(qn, s)?;
        r.vector_eq(&format!("decompose(u{s} poly) = u{s}"), &decompose(qn, &f), &restrict(&u_vector(qn, s)?));
        let yf = op_y_poly(qn, &f, HeckeParam::QSquared)?;
        r.assert(&format!("Y u{s} poly = q^-{s} u{s} poly"), yf == f.scale(&qn.q_pow(-s)), "");
    }
    for s in (1..=2 * p).filter(|&s| is_m_label(qn.p(), s)) {
        let f = k_poly(qn, s)?;
        r.vector_eq(&format!("decompose(k{s} poly) = k{s}"), &decompose(qn, &f), &restrict(&k_vector(qn, s)?));
    }
    for s in [1, p, p + 1, 2 * p] {
        let f = f_special_poly(qn, s)?;
        r.vector_eq(&format!("decompose(f{s} poly) = f{s}"), &decompose(qn, &f), &restrict(&f_vector(qn, s)?));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_examples() {
        let qn = QNumbers::new(3).unwrap();
        let ring = qn.ring();
        let x = |k| LaurentPoly::monomial(ring, k, qn.one());
        assert_eq!(reduce(3, &x(6)).representative(), &x(6));
        let expect = x(1).scale(&qn.int(2)).sub(&x(-5));
        assert_eq!(reduce(3, &x(7)).representative(), &expect);
        assert_eq!(reduce(3, &x(0)).representative(), &x(0));
        let t1 = op_t_poly(&qn, &reduce(3, &x(0)), HeckeParam::QSquared).unwrap();
        assert_eq!(t1.representative(), &LaurentPoly::constant(ring, qn.q()));
    }

    #[test]
    fn basis_polys() {
        let qn = QNumbers::new(3).unwrap();
        for s in 1..=6 {
            let w = w_poly(&qn, s);
            let e = e_poly(&qn, s);
            assert_eq!(op_x_poly(&w), w.scale(&qn.q_pow(s)));
            assert_eq!(op_x_poly(&e), e.add(&w).scale(&qn.q_pow(s)));
        }
        let f2p = f_special_poly(&qn, 6).unwrap();
        let up = chebyshev_u(qn.ring(), 3).unwrap().scale(&prefactor(&qn));
        assert_eq!(f2p, reduce(3, &up));
        let one = reduce(3, &LaurentPoly::constant(qn.ring(), qn.one()));
        let d = decompose(&qn, &one);
        assert!(d[..6].iter().all(CycScalar::is_zero) && d[6..].iter().all(CycScalar::is_one));
        let x = reduce(3, &LaurentPoly::monomial(qn.ring(), 1, qn.one()));
        let d = decompose(&qn, &x);
        for s in 1..=6 {
            assert_eq!(d[(s - 1) as usize], qn.q_pow(s));
            assert_eq!(d[(5 + s) as usize], qn.q_pow(s));
        }
        assert_eq!(reassemble(&qn, &d), x);
    }

    #[test]
    fn crosscheck_p3() {
        let qn = QNumbers::new(3).unwrap();
        let g = Generators::new(&qn).unwrap();
        let r = crosscheck_matrices(&qn, &g).unwrap();
        assert!(r.passed(), "{:#?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn inverse_hecke_parameter_disagrees() {
        let qn = QNumbers::new(3).unwrap();
        let g = Generators::new(&qn).unwrap();
        let m = oracle_matrices(&qn, HeckeParam::QInverseSquared).unwrap();
        assert_ne!(m.t, we_block(&g.t).unwrap());
    }
}
