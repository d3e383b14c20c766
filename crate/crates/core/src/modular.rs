//! The modular group acting on `Z` by conjugation.
//!
//! An automorphism is stored as a pair `(G, G^{-1})` acting by `A -> G^{-1} A G`.
//! With this convention `c_G ∘ c_H = c_{HG}`. The Fourier automorphism
//! `σ(A) = S A S^{-1}` is `c_{S^{-1}}`, `τ+` is `c_V` with `V` the multiplication
//! operator of the Gaussian element, and `τ-` is defined by `τ-^{-1} = τ+^{-1} σ τ+^{-1}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::qnum::QNumbers;
use crate::rep_z::{gaussian_element, invert_algebra_element, mult_operator, Generators, ZOperator};
use crate::report::Report;

/// The three generators an automorphism is evaluated on.
#[derive(Clone, Debug)]
pub struct GeneratorTriple {
    pub x: ZOperator,
    pub y: ZOperator,
    pub t: ZOperator,
}

impl GeneratorTriple {
    pub fn from_generators(g: &Generators) -> Self {
        GeneratorTriple { x: g.x.clone(), y: g.y.clone(), t: g.t.clone() }
    }

    fn named(&self) -> [(&'static str, &ZOperator); 3] {
        [("X", &self.x), ("Y", &self.y), ("T", &self.t)]
    }
}

/// `G^{-1} A G`.
pub fn conjugate(a: &ZOperator, g: &ZOperator) -> Result<ZOperator> {
    let g_inv = g.inverse()?;
    Ok(&(&g_inv * a) * g)
}

/// Conjugation `A -> G^{-1} A G` with a certified inverse.
#[derive(Clone, Debug)]
pub struct Conjugation {
    g: ZOperator,
    g_inv: ZOperator,
}

impl Conjugation {
    /// Accepts `g_inv` only if `G G^{-1} = I` holds exactly.
    pub fn new(g: ZOperator, g_inv: ZOperator) -> Result<Self> {
        let id = Matrix::identity(g.ring(), g.rows());
        if &g * &g_inv != id {
            return Err(Error::Verification("claimed inverse does not invert".into()));
        }
        Ok(Conjugation { g, g_inv })
    }

    pub fn apply(&self, a: &ZOperator) -> ZOperator {
        &(&self.g_inv * a) * &self.g
    }

    /// The opposite convention `A -> G A G^{-1}`.
    pub fn apply_opposite(&self, a: &ZOperator) -> ZOperator {
        &(&self.g * a) * &self.g_inv
    }

    pub fn inverse(&self) -> Conjugation {
        Conjugation { g: self.g_inv.clone(), g_inv: self.g.clone() }
    }

    /// `self ∘ inner`, i.e. apply `inner` first.
    pub fn after(&self, inner: &Conjugation) -> Conjugation {
        Conjugation { g: &inner.g * &self.g, g_inv: &self.g_inv * &inner.g_inv }
    }

    pub fn matrix(&self) -> &ZOperator {
        &self.g
    }

    pub fn matrix_inverse(&self) -> &ZOperator {
        &self.g_inv
    }
}

/// `S^{-1}`, certified. The candidate `q^{-1} T S` is accepted only when
/// `S` times it is the identity; otherwise Gauss-Jordan elimination is used.
pub fn s_inverse(qn: &QNumbers, g: &Generators, s_op: &ZOperator) -> Result<ZOperator> {
    let candidate = (&g.t * s_op).scale(&qn.q_pow(-1));
    if s_op * &candidate == Matrix::identity(qn.ring(), s_op.rows()) {
        Ok(candidate)
    } else {
        s_op.inverse()
    }
}

/// The automorphisms `σ`, `τ+` and the derived `τ-`.
#[derive(Clone, Debug)]
pub struct ModularAction {
    pub sigma: Conjugation,
    pub tau_plus: Conjugation,
    pub tau_minus: Conjugation,
}

impl ModularAction {
    pub fn new(qn: &QNumbers, g: &Generators, s_op: &ZOperator) -> Result<Self> {
        let s_inv = s_inverse(qn, g, s_op)?;
        let sigma = Conjugation::new(s_inv, s_op.clone())?;
        let v = gaussian_element(qn)?;
        let v_op = mult_operator(&v)?;
        let v_inv = mult_operator(&invert_algebra_element(&v)?)?;
        let tau_plus = Conjugation::new(v_op, v_inv)?;
        let tau_minus_inv = tau_plus.inverse().after(&sigma).after(&tau_plus.inverse());
        Ok(ModularAction { sigma, tau_plus, tau_minus: tau_minus_inv.inverse() })
    }
}

/// `V^{-1} Y V = q^{-1/2} X Y`, `V^{-1} X V = X`, `V^{-1} T V = T`.
pub fn verify_tau_plus(qn: &QNumbers, g: &Generators, action: &ModularAction) -> Report {
    let mut r = Report::new("tau+", qn.p());
    let tp = &action.tau_plus;
    r.matrix_eq("tau+(Y) = q^-1/2 XY", &tp.apply(&g.y), &(&g.x * &g.y).scale(&qn.q_half_pow(-1)));
    r.matrix_eq("tau+(X) = X", &tp.apply(&g.x), &g.x);
    r.matrix_eq("tau+(T) = T", &tp.apply(&g.t), &g.t);
    r
}

/// Which conjugation convention made the `τ-` targets hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Convention {
    /// `A -> G^{-1} A G`
    Right,
    /// `A -> G A G^{-1}`
    Left,
}

/// Images of the generators under `τ-`.
#[derive(Clone, Debug)]
pub struct TauMinusImages {
    pub convention: Convention,
    pub images: GeneratorTriple,
}

/// Evaluates `τ-` on the generators; switches to the opposite convention once
/// if the targets `X -> q^{1/2} Y X`, `Y -> Y`, `T -> T` fail.
pub fn tau_minus(qn: &QNumbers, g: &Generators, action: &ModularAction) -> TauMinusImages {
    let gens = GeneratorTriple::from_generators(g);
    let target_x = (&g.y * &g.x).scale(&qn.q_half_pow(1));
    let eval = |f: &dyn Fn(&ZOperator) -> ZOperator| GeneratorTriple { x: f(&gens.x), y: f(&gens.y), t: f(&gens.t) };
    let right = eval(&|a| action.tau_minus.apply(a));
    if right.x == target_x && right.y == g.y && right.t == g.t {
        return TauMinusImages { convention: Convention::Right, images: right };
    }
    let left = eval(&|a| action.tau_minus.apply_opposite(a));
    if left.x == target_x && left.y == g.y && left.t == g.t {
        TauMinusImages { convention: Convention::Left, images: left }
    } else {
        TauMinusImages { convention: Convention::Right, images: right }
    }
}

/// `τ-` targets, both braid forms, and `σ` on the generators.
pub fn verify_psl2z(qn: &QNumbers, g: &Generators, action: &ModularAction) -> Report {
    let mut r = Report::new("modular", qn.p());
    r.absorb(verify_tau_plus(qn, g, action));
    let tm = tau_minus(qn, g, action);
    let tag = format!("convention {:?}", tm.convention);
    let target_x = (&g.y * &g.x).scale(&qn.q_half_pow(1));
    r.matrix_eq(&format!("tau-(X) = q^1/2 YX ({tag})"), &tm.images.x, &target_x);
    r.matrix_eq(&format!("tau-(Y) = Y ({tag})"), &tm.images.y, &g.y);
    r.matrix_eq(&format!("tau-(T) = T ({tag})"), &tm.images.t, &g.t);

    let sigma = &action.sigma;
    let tp = &action.tau_plus;
    let tm_inv = action.tau_minus.inverse();
    let gens = GeneratorTriple::from_generators(g);
    for (name, a) in gens.named() {
        let s_a = sigma.apply(a);
        let braid1 = tp.apply(&tm_inv.apply(&tp.apply(a)));
        r.matrix_eq(&format!("sigma = tau+ tau-^-1 tau+ on {name}"), &braid1, &s_a);
        let braid2 = tm_inv.apply(&tp.apply(&tm_inv.apply(a)));
        r.matrix_eq(&format!("sigma = tau-^-1 tau+ tau-^-1 on {name}"), &braid2, &s_a);
    }
    r.matrix_eq("sigma(X) = Y^-1", &sigma.apply(&g.x), &g.y_inv);
    r.matrix_eq("sigma(Y) = XT^2", &sigma.apply(&g.y), &(&(&g.x * &g.t) * &g.t));
    r.matrix_eq("sigma(T) = T", &sigma.apply(&g.t), &g.t);
    let twice = sigma.apply(&sigma.apply(&g.x));
    r.matrix_eq("S^2 X S^-2 = T^-1 X T", &twice, &(&(&g.t_inv * &g.x) * &g.t));
    r
}
