//! Jordan basis of `Y^{-1}` (`u_s`, `k_s`, `f_s`) from closed-form coefficients,
//! and the Fourier operator `S` with `S w_s = u_s`, `S e_s = f_s`, `S m_s = k_s`.
//!
//! Coefficient functions take the component index `j` first and the vector
//! label `s` second. Bare `q` always means `q^1`.

use crate::cyclotomic::CycScalar;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::qnum::{sign, QNumbers};
use crate::rep_z::{is_m_label, jordan_profile, m_labels, Generators, JordanCount, ZBasis, ZOperator, ZVector};
use crate::report::Report;

/// Closed-form components of the `u`, `k` and `f` vectors.
#[derive(Clone, Debug)]
pub struct YCoefficients {
    qn: QNumbers,
    p: i64,
    /// `1/sqrt(2p)`
    inv_root: CycScalar,
    /// `1/(p sqrt(2p))`
    inv_p_root: CycScalar,
}

impl YCoefficients {
    pub fn new(qn: &QNumbers) -> Self {
        let p = qn.p() as i64;
        let inv_root = qn.inv_sqrt_2p();
        let inv_p_root = inv_root.scale_rational(&crate::Rational::new(1.into(), p.into()));
        YCoefficients { qn: qn.clone(), p, inv_root, inv_p_root }
    }

    fn is_special(&self, j: i64) -> bool {
        let p = self.p;
        j == 1 || j == p || j == p + 1 || j == 2 * p
    }

    fn q(&self, k: i64) -> CycScalar {
        self.qn.q_pow(k)
    }

    pub fn u_w(&self, j: i64, s: i64) -> CycScalar {
        let qn = &self.qn;
        let inner = self.q(s) * qn.brace2(s, j) - qn.q() * qn.brace2(s, j - 1);
        (inner * &self.inv_root).scale_int(sign(s + j))
    }

    pub fn u_e(&self, j: i64, s: i64) -> CycScalar {
        let p = self.p;
        let (sg, qp) = match j {
            _ if j == 1 => (sign(s), self.q(1)),
            _ if j == 2 * p => (sign(s), self.q(s)),
            _ if j == p + 1 => (sign(p + 1), self.q(1)),
            _ if j == p => (sign(p + 1), self.q(s)),
            _ => return self.qn.zero(),
        };
        (qp * &self.inv_root).scale_int(sg)
    }

    pub fn k_w(&self, j: i64, s: i64) -> CycScalar {
        let qn = &self.qn;
        let p = self.p;
        let lead = self.u_w(j, s).scale_rational(&crate::Rational::new((s - p).into(), p.into()));
        let inner = self.q(s) * qn.bracket2(s, j) * qn.brace2(1, j) - qn.q() * qn.bracket2(s, j - 1) * qn.brace2(1, j - 1);
        lead - (inner * &self.inv_p_root).scale_int(sign(s + j))
    }

    pub fn k_e(&self, j: i64, s: i64) -> CycScalar {
        let qn = &self.qn;
        let p = self.p;
        let br = qn.q_bracket(s);
        let ps = qn.int(p - s);
        let (sg, inner) = match j {
            _ if j == 1 => (sign(s + 1), self.q(s) * &br + qn.q() * &ps),
            _ if j == p => (sign(p), qn.q() * &br + self.q(s) * &ps),
            _ if j == p + 1 => (sign(p), self.q(s) * &br + qn.q() * &ps),
            _ if j == 2 * p => (sign(s + 1), qn.q() * &br + self.q(s) * &ps),
            _ => (sign(s + j), self.q(s) * qn.bracket2(s, j) - qn.q() * qn.bracket2(s, j - 1)),
        };
        (inner * &self.inv_p_root).scale_int(sg)
    }

    pub fn f_w(&self, j: i64, s: i64) -> CycScalar {
        let qn = &self.qn;
        let p = self.p;
        let two_q2s = (self.q(2 * s) * qn.inv_q_diff() * &self.inv_root).scale_int(2);
        let q_br = qn.q() * qn.q_bracket(s) * &self.inv_root;
        match j {
            _ if j == 1 => two_q2s.scale_int(sign(s + 1)),
            _ if j == p => q_br.scale_int(sign(p + 1)),
            _ if j == p + 1 => two_q2s.scale_int(sign(p)),
            _ if j == 2 * p => q_br.scale_int(sign(s)),
            _ => {
                let tail = (qn.q() * qn.bracket2(s, j - 1) + self.q(s) * qn.brace2(s, j)) * &self.inv_root;
                self.k_e(j, s).scale_int(-p * (p - j)) + tail.scale_int(sign(s + j))
            }
        }
    }

    pub fn f_e(&self, j: i64, s: i64) -> CycScalar {
        let p = self.p;
        let at_p = (self.q(s) * &self.inv_root).scale_int(sign(p + 1));
        match j {
            _ if j == p => at_p,
            _ if j == 2 * p => at_p.scale_int(sign(p + s + 1)),
            _ => self.qn.zero(),
        }
    }

    pub fn f_m(&self, j: i64, s: i64) -> CycScalar {
        if self.is_special(s) {
            self.qn.zero()
        } else {
            self.k_e(j, s).scale_int(-self.p * self.p)
        }
    }
}

fn check_label(p: i64, s: i64) -> Result<()> {
    if (1..=2 * p).contains(&s) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("label {s} outside 1..{}", 2 * p)))
    }
}

/// `u_s`, `s ∈ 1..2p`.
pub fn u_vector(qn: &QNumbers, s: i64) -> Result<ZVector> {
    let p = qn.p() as i64;
    check_label(p, s)?;
    let c = YCoefficients::new(qn);
    let b = ZBasis::new(qn.p())?;
    let mut v = ZVector::zero(qn);
    for j in 1..=2 * p {
        v.set(b.w(j), c.u_w(j, s));
        v.set(b.e(j), c.u_e(j, s));
    }
    Ok(v)
}

/// `k_s`, `s ∈ {2..p-1} ∪ {p+2..2p-1}`.
pub fn k_vector(qn: &QNumbers, s: i64) -> Result<ZVector> {
    let p = qn.p() as i64;
    if !is_m_label(qn.p(), s) {
        return Err(Error::InvalidParameter(format!("k_{s} is not defined for p = {p}")));
    }
    let c = YCoefficients::new(qn);
    let b = ZBasis::new(qn.p())?;
    let mut v = ZVector::zero(qn);
    for j in 1..=2 * p {
        v.set(b.w(j), c.k_w(j, s));
        v.set(b.e(j), c.k_e(j, s));
    }
    Ok(v)
}

/// `f_s`, `s ∈ 1..2p`.
pub fn f_vector(qn: &QNumbers, s: i64) -> Result<ZVector> {
    let p = qn.p() as i64;
    check_label(p, s)?;
    let c = YCoefficients::new(qn);
    let b = ZBasis::new(qn.p())?;
    let mut v = ZVector::zero(qn);
    for j in 1..=2 * p {
        v.set(b.w(j), c.f_w(j, s));
        v.set(b.e(j), c.f_e(j, s));
    }
    for j in m_labels(qn.p()) {
        v.set(b.m(j), c.f_m(j, s));
    }
    Ok(v)
}

/// The Jordan basis of `Y^{-1}` and its change-of-basis matrix.
#[derive(Clone, Debug)]
pub struct YBasis {
    /// `u_1..u_{2p}`
    pub u: Vec<ZVector>,
    /// `(s, k_s)` in ascending `s`
    pub k: Vec<(i64, ZVector)>,
    /// `f_1..f_{2p}`
    pub f: Vec<ZVector>,
    /// Columns `u_1..u_{2p}, f_1..f_{2p}`, then the `k` block.
    pub change_of_basis: ZOperator,
}

impl YBasis {
    pub fn u(&self, s: i64) -> &ZVector {
        &self.u[wrap(self.u.len(), s)]
    }

    pub fn f(&self, s: i64) -> &ZVector {
        &self.f[wrap(self.f.len(), s)]
    }

    pub fn k(&self, s: i64) -> Option<&ZVector> {
        self.k.iter().find(|(t, _)| *t == s).map(|(_, v)| v)
    }
}

fn wrap(period: usize, s: i64) -> usize {
    (s - 1).rem_euclid(period as i64) as usize
}

/// Assembles all `u`, `k`, `f` and asserts the change of basis is invertible.
pub fn build_change_of_basis(qn: &QNumbers) -> Result<YBasis> {
    let p = qn.p() as i64;
    let u: Vec<ZVector> = (1..=2 * p).map(|s| u_vector(qn, s)).collect::<Result<_>>()?;
    let f: Vec<ZVector> = (1..=2 * p).map(|s| f_vector(qn, s)).collect::<Result<_>>()?;
    let k: Vec<(i64, ZVector)> = m_labels(qn.p()).into_iter().map(|s| Ok((s, k_vector(qn, s)?))).collect::<Result<_>>()?;
    let columns: Vec<Vec<CycScalar>> = u
        .iter()
        .chain(&f)
        .chain(k.iter().map(|(_, v)| v))
        .map(|v| v.coeffs().to_vec())
        .collect();
    let n = columns.len();
    let change_of_basis = Matrix::from_columns(qn.ring(), n, &columns)?;
    let rank = change_of_basis.rank()?;
    if rank != n {
        return Err(Error::Verification(format!("Y-basis is linearly dependent: rank {rank} < {n}")));
    }
    Ok(YBasis { u, k, f, change_of_basis })
}

/// `S`: column `w_s` is `u_s`, column `e_s` is `f_s`, column `m_s` is `k_s`.
pub fn build_s(qn: &QNumbers, yb: &YBasis) -> Result<ZOperator> {
    let b = ZBasis::new(qn.p())?;
    let mut s_op = Matrix::zeros(qn.ring(), b.dim(), b.dim());
    let mut put = |col: usize, v: &ZVector| {
        for (i, x) in v.coeffs().iter().enumerate() {
            s_op.set(i, col, x.clone());
        }
    };
    for s in 1..=2 * qn.p() as i64 {
        put(b.w(s), yb.u(s));
        put(b.e(s), yb.f(s));
    }
    for (s, v) in &yb.k {
        put(b.m(*s), v);
    }
    Ok(s_op)
}

/// Eigenvector and Jordan-chain relations of `Y^{-1}` on the constructed vectors,
/// and membership of the vectors in the stated subspaces.
pub fn verify_y_jordan(qn: &QNumbers, g: &Generators, yb: &YBasis) -> Result<Report> {
    let p = qn.p() as i64;
    let b = ZBasis::new(qn.p())?;
    let mut r = Report::new("ybasis", qn.p());
    for s in 1..=2 * p {
        let qs = qn.q_pow(s);
        let u = yb.u(s);
        r.vector_eq(&format!("Y^-1 u{s} = q^{s} u{s}"), u.apply(&g.y_inv)?.coeffs(), u.scale(&qs).coeffs());
        let f = yb.f(s);
        r.vector_eq(
            &format!("Y^-1 f{s} = q^{s} (f{s} + u{s})"),
            f.apply(&g.y_inv)?.coeffs(),
            f.add(u).scale(&qs).coeffs(),
        );
    }
    for (s, k) in &yb.k {
        r.vector_eq(&format!("Y^-1 k{s} = q^{s} k{s}"), k.apply(&g.y_inv)?.coeffs(), k.scale(&qn.q_pow(*s)).coeffs());
    }
    let m_zero = |v: &ZVector| m_labels(qn.p()).iter().all(|&j| v.get(b.m(j)).is_zero());
    let outside_w = |v: &ZVector| {
        (1..=2 * p).filter(|&j| !(j == 1 || j == p || j == p + 1 || j == 2 * p)).all(|j| v.get(b.e(j)).is_zero())
    };
    r.assert("u_s lie in span(w, e)", yb.u.iter().all(m_zero), "");
    r.assert("k_s lie in span(w, e)", yb.k.iter().all(|(_, v)| m_zero(v)), "");
    let special = [1, p, p + 1, 2 * p];
    r.assert(
        "u_s, f1, fp, f(p+1), f2p lie in W",
        yb.u.iter().all(|v| m_zero(v) && outside_w(v))
            && special.iter().all(|&s| m_zero(yb.f(s)) && outside_w(yb.f(s))),
        "",
    );
    r.assert(
        "generic f_s meet the m-block",
        (1..=2 * p).filter(|s| !special.contains(s)).all(|s| !m_zero(yb.f(s))),
        "",
    );
    Ok(r)
}

/// Jordan forms of `X` and `Y^{-1}`: one 2-block at every `q^s`, `s = 1..2p`,
/// `2p - 4` 1-blocks in total, and identical profiles for the two operators.
pub fn verify_jordan_forms(qn: &QNumbers, g: &Generators) -> Result<Report> {
    let p = qn.p() as i64;
    let exps: Vec<i64> = (1..=2 * p).collect();
    let mut r = Report::new("jordan", qn.p());
    let x = jordan_profile(qn, &g.x, &exps)?;
    let y = jordan_profile(qn, &g.y_inv, &exps)?;
    for (name, prof) in [("X", &x), ("Y^-1", &y)] {
        let size2: usize = prof.iter().map(|c| c.size2).sum();
        let size1: usize = prof.iter().map(|c| c.size1).sum();
        let larger: usize = prof.iter().map(|c| c.larger).sum();
        let total: usize = prof.iter().map(|c| c.generalized_dim).sum();
        r.assert(&format!("{name}: 2p blocks of size 2"), size2 == 2 * p as usize && prof.iter().all(|c| c.size2 == 1), format!("{size2}"));
        r.assert(&format!("{name}: 2p - 4 blocks of size 1"), size1 == 2 * p as usize - 4, format!("{size1}"));
        r.assert(&format!("{name}: no larger blocks, spectrum exhausted"), larger == 0 && total == 6 * p as usize - 4, "");
    }
    r.assert("Jordan forms of X and Y^-1 coincide", x == y, profile_summary(&x, &y));
    Ok(r)
}

fn profile_summary(x: &[JordanCount], y: &[JordanCount]) -> String {
    if x == y {
        return String::new();
    }
    let fmt = |v: &[JordanCount]| v.iter().map(|c| format!("q^{}:{}+{}", c.exponent, c.size1, c.size2)).collect::<Vec<_>>().join(" ");
    format!("X [{}] vs Y^-1 [{}]", fmt(x), fmt(y))
}

/// `S X S^-1 = Y^-1`, `S Y S^-1 = X T^2`, `S T S^-1 = T`, `S^2 = q T^-1`.
///
/// `S` is invertible (checked when the basis is built), so each conjugation
/// identity is checked in the multiplied-out form `S A = B S`.
pub fn verify_s_relations(qn: &QNumbers, g: &Generators, s_op: &ZOperator) -> Result<Report> {
    let p = qn.p() as i64;
    let b = ZBasis::new(qn.p())?;
    let mut r = Report::new("fourier", qn.p());
    r.matrix_eq("SXS^-1 = Y^-1", &(s_op * &g.x), &(&g.y_inv * s_op));
    let xt2 = &(&g.x * &g.t) * &g.t;
    r.matrix_eq("SYS^-1 = XT^2", &(s_op * &g.y), &(&xt2 * s_op));
    r.matrix_eq("STS^-1 = T", &(s_op * &g.t), &(&g.t * s_op));
    let s2 = s_op * s_op;
    r.matrix_eq("S^2 = qT^-1", &s2, &g.t_inv.scale(&qn.q()));
    let ts2 = &g.t * &s2;
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for s in 1..=2 * p {
        lhs.extend(ts2.column(b.e(s)));
        rhs.extend(ZVector::basis_vector(qn, b.e(s)).scale(&qn.q()).into_coeffs());
    }
    r.vector_eq("TS^2 e_s = q e_s", &lhs, &rhs);
    for s in [p, 2 * p] {
        r.vector_eq(&format!("S^2 e{s} = e{s}"), &s2.column(b.e(s)), ZVector::basis_vector(qn, b.e(s)).coeffs());
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_examples() {
        let qn = QNumbers::new(3).unwrap();
        let c = YCoefficients::new(&qn);
        for s in 1..=6 {
            assert_eq!(c.u_e(1, s), (qn.q() * qn.inv_sqrt_2p()).scale_int(sign(s)));
            assert!(c.u_e(2, s).is_zero());
            let expect = (qn.q_pow(2 * s) * qn.inv_q_diff() * qn.inv_sqrt_2p()).scale_int(2 * sign(s + 1));
            assert_eq!(c.f_w(1, s), expect);
            assert!(c.f_e(1, s).is_zero() && c.f_e(2, s).is_zero());
        }
        assert!(k_vector(&qn, 1).is_err());
        assert!(u_vector(&qn, 7).is_err());
    }

    #[test]
    fn fourier_relations_p3() {
        let qn = QNumbers::new(3).unwrap();
        let g = Generators::new(&qn).unwrap();
        let yb = build_change_of_basis(&qn).unwrap();
        let s = build_s(&qn, &yb).unwrap();
        let b = ZBasis::new(3).unwrap();
        assert_eq!(s.column(b.w(1)), yb.u(1).coeffs());
        assert_eq!(s.column(b.m(2)), yb.k(2).unwrap().coeffs());
        let rep = verify_y_jordan(&qn, &g, &yb).unwrap();
        assert!(rep.passed(), "{:#?}", rep.summary_lines());
        let rep = verify_s_relations(&qn, &g, &s).unwrap();
        assert!(rep.passed(), "{:#?}", rep.summary_lines());
    }
}
