use daha_core::emit::{emit, EmitTarget};
use daha_core::polyoracle::{op_y_poly, reduce, HeckeParam};
use daha_core::rep_z::{ZBasis, ZVector};
use daha_core::symmetric::{c_operator, h_operator, TqLabel};
use daha_core::{chebyshev_u, cyclotomic_poly, CycScalar, LaurentPoly, Model, QNumbers};
use num_bigint::BigInt;

/// Schoolbook division of integer polynomials (low degree first) by a monic divisor.
fn div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    assert!(rem.iter().all(|&r| r == 0), "division left a remainder");
    quot
}

fn cyclotomic_oracle(n: usize) -> Vec<i64> {
    let mut f = vec![0i64; n + 1];
    f[0] = -1;
    f[n] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        f = div_exact(&f, &cyclotomic_oracle(d));
    }
    f
}

#[test]
fn cyclotomic_polys_match_division_oracle() {
    for n in 1..=32 {
        let expected: Vec<BigInt> = cyclotomic_oracle(n).into_iter().map(BigInt::from).collect();
        assert_eq!(cyclotomic_poly(n).unwrap(), expected, "n = {n}");
    }
}

#[test]
fn z_is_a_root_of_its_minimal_polynomial() {
    for p in 3..=8u32 {
        let qn = QNumbers::new(p).unwrap();
        let mut acc = qn.zero();
        for (k, c) in cyclotomic_poly(4 * p as usize).unwrap().iter().enumerate() {
            let c: i64 = c.try_into().unwrap();
            acc += &qn.q_half_pow(k as i64).scale_int(c);
        }
        assert!(acc.is_zero(), "p = {p}");
        assert_eq!(qn.q_pow(p as i64), qn.int(-1));
        assert_eq!(qn.q_pow(2 * p as i64), qn.one());
    }
}

#[test]
fn numeric_embedding() {
    let qn = QNumbers::new(3).unwrap();
    let q = qn.q().to_c64();
    assert!((q.re - 0.5).abs() < 1e-15 && (q.im - 0.75f64.sqrt()).abs() < 1e-15);
    assert!((qn.sqrt_2p().to_c64().re - 6f64.sqrt()).abs() < 1e-15);
    let (re, im) = qn.sqrt_2p().embed_complex(20).to_decimal_strings(20);
    assert_eq!(re, "2.44948974278317809820");
    assert_eq!(im, "0.00000000000000000000");
}

#[test]
fn chebyshev_at_q_is_the_bracket() {
    for p in 3..=8u32 {
        let qn = QNumbers::new(p).unwrap();
        for s in 1..=2 * p as i64 {
            let u = chebyshev_u(qn.ring(), s).unwrap();
            assert_eq!(u.eval_powers(|k| qn.q_pow(k)), qn.q_bracket(s), "p = {p}, s = {s}");
        }
    }
}

/// `Y U_s(X) = q U_s(q^-1 X)` and `Y U_s(q^-1 X) = (q^s + q^-s) U_s(q^-1 X) - q^-1 U_s(X)`
/// for `Y = -s p T`, taken literally with no sign correction.
///
/// These fail: already `Y 1 = -q`. Both hold with the opposite overall sign,
/// which is what the oracle suite checks.
#[test]
fn y_on_chebyshev_polynomials_unsigned() {
    let qn = QNumbers::new(3).unwrap();
    let y = |f: &LaurentPoly| op_y_poly(&qn, &reduce(3, f), HeckeParam::QSquared).unwrap();
    let mut failures = Vec::new();
    for s in 1..=6 {
        let u = chebyshev_u(qn.ring(), s).unwrap();
        let u_shift = u.substitute_scaled(|k| qn.q_pow(-k));
        if y(&u) != reduce(3, &u_shift.scale(&qn.q())) {
            failures.push(format!("Y U{s}(X)"));
        }
        let rhs = u_shift.scale(&qn.mu(s)).sub(&u.scale(&qn.q_pow(-1)));
        if y(&u_shift) != reduce(3, &rhs) {
            failures.push(format!("Y U{s}(X/q)"));
        }
    }
    assert!(failures.is_empty(), "relations fail for: {}", failures.join(", "));
}

#[test]
fn generator_columns() {
    let p = 4;
    let m = Model::get(p).unwrap();
    let (qn, g) = (m.qn(), m.generators().unwrap());
    let b = ZBasis::new(p).unwrap();
    let pi = p as i64;
    let col = |a: &daha_core::Matrix, i: usize| ZVector::from_coeffs(p, a.column(i)).unwrap();
    let unit = |i: usize| ZVector::basis_vector(qn, i);
    let q_plus = qn.q() + qn.q_pow(-1);

    assert_eq!(col(&g.t, b.m(2 * pi - 1)), unit(b.m(2 * pi - 1)).scale(&qn.q()).sub(&unit(b.w(1)).scale(&q_plus)));
    assert_eq!(col(&g.y, b.e(2 * pi)), unit(b.e(1)).scale(&-qn.q()));
    assert_eq!(col(&g.y, b.m(pi - 1)), unit(b.m(pi + 2)).scale(&-qn.q()));
    assert_eq!(
        col(&g.y, b.m(2 * pi - 1)),
        unit(b.m(2)).scale(&-qn.q()).sub(&unit(b.w(2 * pi)).scale(&q_plus))
    );
    assert_eq!(col(&g.x, b.e(pi)), unit(b.e(pi)).add(&unit(b.w(pi))).scale(&qn.int(-1)));
    // T^-1 = T - (q - q^-1)
    assert_eq!(g.t_inv, g.t.sub_scalar(&(qn.q() - qn.q_pow(-1))).unwrap());
}

#[test]
fn fourier_on_basis_vectors() {
    for p in [3u32, 5] {
        let m = Model::get(p).unwrap();
        let (qn, s, yb) = (m.qn(), m.s_operator().unwrap(), m.ybasis().unwrap());
        let b = ZBasis::new(p).unwrap();
        let unit = |i: usize| ZVector::basis_vector(qn, i);
        assert_eq!(&unit(b.w(1)).apply(s).unwrap(), yb.u(1));
        assert_eq!(&unit(b.m(2)).apply(s).unwrap(), yb.k(2).unwrap());
        let ep = unit(b.e(p as i64));
        assert_eq!(ep.apply(s).unwrap().apply(s).unwrap(), ep);
    }
}

#[test]
fn symmetrized_eigenspace_examples() {
    for (p, dim) in [(3u32, 8usize), (4, 11)] {
        let m = Model::get(p).unwrap();
        let (qn, g) = (m.qn(), m.generators().unwrap());
        let model = m.symmetric().unwrap();
        assert_eq!(model.tq.dim(), dim);
        assert_eq!(model.tq.complement_dim, 3 * p as usize - 3);
        let e0 = model.c_basis.get(TqLabel::E(0));
        assert_eq!(e0.apply(&c_operator(g)).unwrap(), e0.scale(&qn.int(2)));
        assert_eq!(model.c_basis.get(TqLabel::E(p as i64)), &ZVector::basis_vector(qn, ZBasis::new(p).unwrap().e(2 * p as i64)));
        let fp = model.h_basis.get(TqLabel::E(p as i64));
        assert_eq!(fp.apply(&h_operator(g)).unwrap(), fp.scale(&qn.int(-2)));
    }
}

#[test]
fn emission_is_deterministic_and_shaped() {
    for what in EmitTarget::ALL {
        let a = emit(3, what, Some(6)).unwrap();
        let b = emit(3, what, Some(6)).unwrap();
        assert_eq!(serde_json::to_string(&a.json).unwrap(), serde_json::to_string(&b.json).unwrap(), "{what}");
        assert_eq!(a.csv_rows, b.csv_rows, "{what}");
        assert!(a.csv_rows.iter().all(|r| r.len() == a.csv_header.len()), "{what}");
    }
    let s = emit(4, EmitTarget::SMatrix, None).unwrap().json;
    let rows = s["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|r| r.as_array().unwrap().len() == 20));
    assert!(s.get("rows_float").is_none());

    let fusion = emit(3, EmitTarget::Fusion, None).unwrap().json;
    let n = fusion["N"].as_array().unwrap();
    assert_eq!(n.len(), 6);
    assert!(n.iter().all(|a| a.as_array().unwrap().len() == 6 && a[0].as_array().unwrap().len() == 6));

    let ribbon = emit(3, EmitTarget::Ribbon, Some(20)).unwrap().json;
    let qn = QNumbers::new(3).unwrap();
    let w1 = ZBasis::new(3).unwrap().w(1);
    let exact = CycScalar::from_json(qn.ring(), &ribbon["coeffs"][w1]).unwrap();
    assert_eq!(exact, qn.int(-1));
    assert_eq!(ribbon["coeffs_float"][w1][0], "-1.00000000000000000000");
}
