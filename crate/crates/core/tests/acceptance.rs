//! Acceptance suite: nine criteria over p = 3..8, one PASS/FAIL line each.
//!
//! Every comparison is exact. Where a value can be produced without going
//! through the library's own verification code, it is recomputed here.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use daha_core::emit::{emit, EmitTarget};
use daha_core::identities::{tally_family, verify_s_squared_assembly, Family};
use daha_core::polyoracle::{e_poly, oracle_matrices, reduce, we_block, HeckeParam};
use daha_core::rep_z::{gaussian_element, multiply, mult_operator, ZBasis, ZVector};
use daha_core::symmetric::{c_basis, c_operator, fusion_constants, h_operator, restrict, rules_product, ProductPath, TqLabel};
use daha_core::{CycScalar, LaurentPoly, Matrix, Model, QNumbers, Result};

const P_RANGE: std::ops::RangeInclusive<u32> = 3..=8;

/// Failures collected for one criterion.
#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn check(&mut self, p: u32, what: &str, ok: bool) {
        if !ok {
            self.failures.push(format!("p={p}: {what}"));
        }
    }

    fn absorb(&mut self, p: u32, r: Result<()>) {
        if let Err(e) = r {
            self.failures.push(format!("p={p}: error: {e}"));
        }
    }
}

fn identity(qn: &QNumbers, n: usize) -> Matrix {
    Matrix::identity(qn.ring(), n)
}

fn c1_daha(out: &mut Outcome, p: u32) -> Result<()> {
    let m = Model::get(p)?;
    let (qn, g) = (m.qn(), m.generators()?);
    let n = 6 * p as usize - 4;
    out.check(p, "generators are (6p-4) x (6p-4)", [&g.x, &g.y, &g.t].iter().all(|a| a.rows() == n && a.cols() == n));
    let x_inv = g.x.inverse()?;
    let y_inv = g.y.inverse()?;
    out.check(p, "TXT = X^-1", &(&g.t * &g.x) * &g.t == x_inv);
    out.check(p, "TY^-1T = Y", &(&g.t * &y_inv) * &g.t == g.y);
    let rhs = (&(&(&g.y * &g.x) * &g.t) * &g.t).scale(&qn.q());
    out.check(p, "XY = qYXT^2", &g.x * &g.y == rhs);
    let quad = &g.t.sub_scalar(&qn.q())? * &g.t.sub_scalar(&-qn.q_pow(-1))?;
    out.check(p, "(T - q)(T + q^-1) = 0", quad.is_zero());
    Ok(())
}

/// Radical of a commutative algebra over a field of characteristic zero is the
/// kernel of its trace form `(a, b) -> Tr(L_a L_b)`.
fn trace_form_rank(qn: &QNumbers, basis: &Matrix) -> Result<(usize, usize)> {
    let k = basis.cols();
    let vecs: Vec<ZVector> = basis.columns().into_iter().map(|c| ZVector::from_coeffs(qn.p(), c)).collect::<Result<_>>()?;
    let mut products = Vec::with_capacity(k * k);
    for a in &vecs {
        for b in &vecs {
            products.push(multiply(a, b)?.into_coeffs());
        }
    }
    // L_a has column b equal to the coordinates of a*b.
    let coords = basis.solve(&Matrix::from_columns(qn.ring(), basis.rows(), &products)?)?;
    let left: Vec<Matrix> = (0..k)
        .map(|a| Matrix::from_columns(qn.ring(), k, &(0..k).map(|b| coords.column(a * k + b)).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let mut gram = Matrix::zeros(qn.ring(), k, k);
    for a in 0..k {
        for b in 0..k {
            let mut tr = qn.zero();
            for i in 0..k {
                for j in 0..k {
                    tr += &(left[a].get(i, j) * left[b].get(j, i));
                }
            }
            gram.set(a, b, tr);
        }
    }
    let rank = gram.rank()?;
    Ok((k - rank, rank))
}

fn c2_dimensions(out: &mut Outcome, p: u32) -> Result<()> {
    let m = Model::get(p)?;
    let (qn, g) = (m.qn(), m.generators()?);
    let pu = p as usize;
    out.check(p, "dim Z = 6p - 4", ZBasis::new(p)?.dim() == 6 * pu - 4 && g.t.rows() == 6 * pu - 4);
    let ker_q = g.t.sub_scalar(&qn.q())?.kernel()?;
    out.check(p, "dim ker(T - q) = 3p - 1", ker_q.len() == 3 * pu - 1);
    let ker_qi = g.t.sub_scalar(&-qn.q_pow(-1))?.kernel()?;
    out.check(p, "dim ker(T + q^-1) = 3p - 3", ker_qi.len() == 3 * pu - 3);
    let basis = Matrix::from_columns(qn.ring(), g.t.rows(), &ker_q)?;
    let (radical, quotient) = trace_form_rank(qn, &basis)?;
    out.check(p, &format!("dim radical = 2p - 2 (got {radical})"), radical == 2 * pu - 2);
    out.check(p, &format!("dim semisimple quotient = p + 1 (got {quotient})"), quotient == pu + 1);
    Ok(())
}

/// `(blocks of size 1, blocks of size 2, blocks of size >= 3)` for eigenvalue `lambda`.
fn jordan_blocks(a: &Matrix, lambda: &CycScalar) -> Result<(usize, usize, usize)> {
    let n = a.rows();
    let nil = a.sub_scalar(lambda)?;
    let nil2 = &nil * &nil;
    let nil3 = &nil2 * &nil;
    let (r1, r2, r3) = (nil.rank()?, nil2.rank()?, nil3.rank()?);
    let at_least = [n - r1, r1 - r2, r2 - r3];
    Ok((at_least[0] - at_least[1], at_least[1] - at_least[2], at_least[2]))
}

fn c3_jordan(out: &mut Outcome, p: u32) -> Result<()> {
    let m = Model::get(p)?;
    let (qn, g) = (m.qn(), m.generators()?);
    let n = g.x.rows();
    let y_inv = g.y.inverse()?;
    let mut profiles = Vec::new();
    for (name, a) in [("X", &g.x), ("Y^-1", &y_inv)] {
        let mut profile = BTreeMap::new();
        let (mut ones, mut twos, mut larger, mut total) = (0, 0, 0, 0);
        for s in 1..=2 * p as i64 {
            let (b1, b2, b3) = jordan_blocks(a, &qn.q_pow(s))?;
            out.check(p, &format!("{name}: one size-2 block at q^{s}"), b2 == 1);
            profile.insert(s, (b1, b2, b3));
            ones += b1;
            twos += b2;
            larger += b3;
            total += b1 + 2 * b2;
        }
        out.check(p, &format!("{name}: 2p size-2 blocks"), twos == 2 * p as usize);
        out.check(p, &format!("{name}: 2p - 4 size-1 blocks"), ones == 2 * p as usize - 4);
        out.check(p, &format!("{name}: no larger blocks"), larger == 0);
        out.check(p, &format!("{name}: spectrum is {{q^s}}"), total == n);
        profiles.push(profile);
    }
    out.check(p, "Jordan forms of X and Y^-1 coincide", profiles[0] == profiles[1]);
    Ok(())
}

fn c4_fourier(out: &mut Outcome, p: u32) -> Result<()> {
    let m = Model::get(p)?;
    let (qn, g, s) = (m.qn(), m.generators()?, m.s_operator()?);
    let s_inv = s.inverse()?;
    let conj = |a: &Matrix| &(s * a) * &s_inv;
    out.check(p, "SXS^-1 = Y^-1", conj(&g.x) == g.y.inverse()?);
    out.check(p, "SYS^-1 = XT^2", conj(&g.y) == &(&g.x * &g.t) * &g.t);
    out.check(p, "STS^-1 = T", conj(&g.t) == g.t);
    out.check(p, "S^2 = qT^-1", s * s == g.t.inverse()?.scale(&qn.q()));
    Ok(())
}

/// C-basis coordinates of the closed-form expansion of the Gaussian element,
/// assembled from the scalars `ω_s` and the center vectors written out by label.
fn closed_form_expansion(qn: &QNumbers) -> Result<Vec<CycScalar>> {
    let p = qn.p() as i64;
    let pu = qn.p();
    let mut coords = vec![qn.zero(); 3 * pu as usize - 1];
    for s in 0..=p {
        coords[TqLabel::E(s).position(pu)] = qn.q_half_pow(-(s * s - 1)).scale_int(if s % 2 == 0 { -1 } else { 1 });
    }
    for s in 1..p {
        let pre = qn.q_half_pow(-(s * s - 1)).scale_int(if p % 2 == 0 { 1 } else { -1 })
            * (qn.q_pow(s) - qn.q_pow(-s))
            * qn.inv_sqrt_2p();
        // φ̂+(s) = ω_s ws+ and φ̂-(p-s) = ω_s ws-
        let omega = qn.omega(s)?;
        coords[TqLabel::WPlus(s).position(pu)] = &pre * &qn.ratio(p - s, p) * &omega;
        coords[TqLabel::WMinus(s).position(pu)] = -(&pre * &qn.ratio(s, p) * &omega);
    }
    Ok(coords)
}

fn c5_ribbon(out: &mut Outcome, p: u32) -> Result<()> {
    let m = Model::get(p)?;
    let (qn, g, s) = (m.qn(), m.generators()?, m.s_operator()?);
    let v = gaussian_element(qn)?;
    let v_op = mult_operator(&v)?;
    let v_inv = v_op.inverse()?;
    let s_inv = s.inverse()?;
    let tau_plus = |a: &Matrix| &(&v_inv * a) * &v_op;
    let sigma_inv = |a: &Matrix| &(&s_inv * a) * s;
    out.check(p, "tau+(X) = X", tau_plus(&g.x) == g.x);
    out.check(p, "tau+(Y) = q^-1/2 XY", tau_plus(&g.y) == (&g.x * &g.y).scale(&qn.q_half_pow(-1)));
    out.check(p, "tau+(T) = T", tau_plus(&g.t) == g.t);
    // sigma = tau+ tau-^-1 tau+ gives tau- = tau+ sigma^-1 tau+.
    let tau_minus = |a: &Matrix| tau_plus(&sigma_inv(&tau_plus(a)));
    out.check(p, "tau-(X) = q^1/2 YX", tau_minus(&g.x) == (&g.y * &g.x).scale(&qn.q_half_pow(1)));
    out.check(p, "tau-(Y) = Y", tau_minus(&g.y) == g.y);
    out.check(p, "tau-(T) = T", tau_minus(&g.t) == g.t);
    out.check(p, "T v = q v", v.apply(&g.t)? == v.scale(&qn.q()));

    let cb = c_basis(qn)?;
    let cmat = Matrix::from_columns(qn.ring(), v.coeffs().len(), &cb.columns())?;
    let vcol = Matrix::from_columns(qn.ring(), v.coeffs().len(), &[v.coeffs().to_vec()])?;
    let coords = cmat.solve(&vcol)?.column(0);
    let closed = closed_form_expansion(qn)?;
    let equal = coords == closed;
    out.check(p, "C-basis expansion of v equals the closed form", equal);
    if !equal {
        let lead = TqLabel::E(0).position(p);
        let ratio = coords[lead].checked_div(&closed[lead])?;
        let uniform = closed.iter().zip(&coords).all(|(d, c)| &(d * &ratio) == c);
        let expected = -qn.q_half_pow(-(p as i64 * p as i64));
        out.notes.push(format!(
            "p={p}: v = ({ratio}) x closed form; uniform: {uniform}; equals -q^(-p^2/2): {}",
            ratio == expected
        ));
    }
    Ok(())
}

fn c6_identities(out: &mut Outcome, p: u32) -> Result<()> {
    let m = Model::get(p)?;
    let (qn, g, s) = (m.qn(), m.generators()?, m.s_operator()?);
    let e = tally_family(qn, Family::ESum);
    let w = tally_family(qn, Family::WSum);
    out.check(p, "14 identities (8 + 6)", e.len() == 8 && w.len() == 6);
    for t in e.iter().chain(&w) {
        out.check(p, &format!("{} holds on its range ({:?})", t.name, &t.failures[..t.failures.len().min(4)]), t.failures.is_empty());
        out.check(p, &format!("{} is checked on some (s, j)", t.name), t.checked > 0);
    }
    let assembly = verify_s_squared_assembly(qn, g, s)?;
    for c in assembly.failures() {
        out.failures.push(format!("p={p}: {}", c.relation));
    }
    let ts2 = &(&g.t * s) * s;
    let b = ZBasis::new(p)?;
    for s_idx in 1..=2 * p as i64 {
        let col = ts2.column(b.e(s_idx));
        let expected = ZVector::basis_vector(qn, b.e(s_idx)).scale(&qn.q());
        out.check(p, &format!("T S^2 e{s_idx} = q e{s_idx}"), col == expected.coeffs());
    }
    Ok(())
}

fn c7_oracle(out: &mut Outcome, p: u32) -> Result<()> {
    let m = Model::get(p)?;
    let (qn, g) = (m.qn(), m.generators()?);
    let oracle = oracle_matrices(qn, HeckeParam::QSquared)?;
    out.check(p, "oracle X = X on span{w, e}", oracle.x == we_block(&g.x)?);
    out.check(p, "oracle Y = Y on span{w, e}", oracle.y == we_block(&g.y)?);
    out.check(p, "oracle T = T on span{w, e}", oracle.t == we_block(&g.t)?);
    let mut total = e_poly(qn, 1);
    for s in 2..=2 * p as i64 {
        total = total.add(&e_poly(qn, s));
    }
    let one = reduce(p, &LaurentPoly::constant(qn.ring(), qn.one()));
    out.check(p, "sum e_s = 1 in the quotient", total == one);
    Ok(())
}

fn c8_symmetric(out: &mut Outcome, p: u32) -> Result<()> {
    let m = Model::get(p)?;
    let (qn, g, s) = (m.qn(), m.generators()?, m.s_operator()?);
    let model = m.symmetric()?;
    let tq = &model.tq;
    let k = tq.dim();
    let units: Vec<Vec<CycScalar>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { qn.one() } else { qn.zero() }).collect())
        .collect();
    let embedded: Vec<ZVector> = units.iter().map(|u| tq.embed(u)).collect::<Result<_>>()?;
    let mut products = Vec::with_capacity(k * k);
    for a in &embedded {
        for b in &embedded {
            products.push(multiply(a, b)?.into_coeffs());
        }
    }
    let coords = tq.embedding.solve(&Matrix::from_columns(qn.ring(), tq.embedding.rows(), &products)?)?;
    let mut bad = 0;
    for i in 0..k {
        for j in 0..k {
            bad += usize::from(coords.column(i * k + j) != rules_product(p, &units[i], &units[j]));
        }
    }
    out.check(p, &format!("induced product = basis rules on all pairs ({bad} differ)"), bad == 0);
    let rs = restrict(s, tq)?;
    out.check(p, "restrict(S)^2 = I", &rs * &rs == identity(qn, k));
    let rc = restrict(&c_operator(g), tq)?;
    let rh = restrict(&h_operator(g), tq)?;
    out.check(p, "S C S^-1 = H on T_q", &(&rs * &rc) * &rs.inverse()? == rh);
    for (idx, (pm, s_lab)) in model.center.index.iter().enumerate() {
        let image = rs.mul_vec(&model.center.chi[idx])?;
        out.check(p, &format!("S chi{}{s_lab} = phi{}{s_lab}", pm.symbol(), pm.symbol()), image == model.center.phi[idx]);
    }
    Ok(())
}

/// Classes of tensor products in the Grothendieck ring of the `(1,p)` model:
/// `[P(s)] = 2χ(s) + 2χ'(p-s)` for `s < p` and `[P(p)] = χ(p)`.
fn grothendieck_table(p: u32) -> Vec<Vec<Vec<i64>>> {
    let p = p as i64;
    let pos = |plus: bool, s: i64| (if plus { 0 } else { p } + s - 1) as usize;
    let k = 2 * p as usize;
    let mut n = vec![vec![vec![0i64; k]; k]; k];
    for (a_plus, s1) in [true, false].into_iter().flat_map(|x| (1..=p).map(move |s| (x, s))) {
        for (b_plus, s2) in [true, false].into_iter().flat_map(|x| (1..=p).map(move |s| (x, s))) {
            let plus = a_plus == b_plus;
            let cell = &mut n[pos(a_plus, s1)][pos(b_plus, s2)];
            let mut r = (s1 - s2).abs() + 1;
            while r < p - (p - s1 - s2).abs() {
                cell[pos(plus, r)] += 1;
                r += 2;
            }
            let mut r = 2 * p - s1 - s2 + 1;
            while r <= p {
                if r == p {
                    cell[pos(plus, p)] += 1;
                } else {
                    cell[pos(plus, r)] += 2;
                    cell[pos(!plus, p - r)] += 2;
                }
                r += 2;
            }
        }
    }
    n
}

fn c9_fusion(out: &mut Outcome, p: u32) -> Result<()> {
    let m = Model::get(p)?;
    let qn = m.qn();
    let model = m.symmetric()?;
    let via_z = fusion_constants(qn, model, ProductPath::Z);
    let via_rules = fusion_constants(qn, model, ProductPath::Rules);
    out.check(p, "chi products decompose uniquely (product in Z)", via_z.is_ok());
    out.check(p, "chi products decompose uniquely (basis rules)", via_rules.is_ok());
    let (Ok(tz), Ok(tr)) = (via_z, via_rules) else { return Ok(()) };
    out.check(p, "both product paths give the same tensor", tz == tr);
    let integral = tz.as_integers();
    out.notes.push(format!("p={p}: coefficients integral: {}", integral.is_some()));
    if let Some(ints) = integral {
        out.check(p, "tensor matches the Grothendieck ring of the (1,p) model", ints == grothendieck_table(p));
    }
    if p == 3 {
        c9_emit_p3(out, &tr)?;
    }
    Ok(())
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON value serializes") + "\n"
}

/// Emits the p = 3 table, checks it is reproducible, matches the stored copy,
/// and is unchanged when `N` is replaced by the rules-path tensor.
fn c9_emit_p3(out: &mut Outcome, rules: &daha_core::symmetric::FusionTensor) -> Result<()> {
    let first = pretty(&emit(3, EmitTarget::Fusion, None)?.json);
    let second = pretty(&emit(3, EmitTarget::Fusion, None)?.json);
    out.check(3, "emitted fusion table is byte-stable", first == second);
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("fusion_p3.json");
    std::fs::write(&path, &first).map_err(|e| daha_core::Error::Verification(e.to_string()))?;
    out.notes.push(format!("p=3 fusion table written to {}", path.display()));

    let stored = include_str!("data/fusion_p3.json");
    out.check(3, "emitted fusion table equals the stored copy", first == stored);

    let mut alt = emit(3, EmitTarget::Fusion, None)?.json;
    alt["N"] = serde_json::to_value(&rules.n).expect("tensor serializes");
    out.check(3, "table recomputed through the basis rules is byte-identical", pretty(&alt) == first);
    Ok(())
}

type Criterion = fn(&mut Outcome, u32) -> Result<()>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("DAHA relations", c1_daha),
        ("dimensions of Z, T-eigenspaces, radical and quotient", c2_dimensions),
        ("Jordan structure of X and Y^-1", c3_jordan),
        ("Fourier operator relations", c4_fourier),
        ("Gaussian element, tau+ and tau-", c5_ribbon),
        ("summation identities and S^2 assembly", c6_identities),
        ("polynomial oracle equals rep_z", c7_oracle),
        ("symmetrized algebra on T_q", c8_symmetric),
        ("fusion closure and the p=3 table", c9_fusion),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let mut out = Outcome::default();
        for p in P_RANGE {
            let r = run(&mut out, p);
            out.absorb(p, r);
        }
        let tag = if out.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{tag} criterion {}: {name} (p = 3..8)", i + 1);
        for f in &out.failures {
            println!("    failed: {f}");
        }
        for n in &out.notes {
            println!("    note: {n}");
        }
        failed += usize::from(!out.failures.is_empty());
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
