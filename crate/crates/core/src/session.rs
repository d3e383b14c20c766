//! Per-`p` model with lazily built, shared components, and the named suites.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::identities::{verify_e_sums, verify_w_sums, verify_s_squared_assembly};
use crate::modular::{verify_psl2z, ModularAction};
use crate::polyoracle::crosscheck_matrices;
use crate::qnum::QNumbers;
use crate::rep_z::{mult_operator, submodule_checks, verify_daha, Generators, ZBasis, ZOperator, ZVector};
use crate::report::Report;
use crate::symmetric::{ribbon_checks, verify_fusion, verify_symmetric, FusionTensor, SymmetricModel};
use crate::ybasis::{build_change_of_basis, build_s, verify_jordan_forms, verify_s_relations, verify_y_jordan, YBasis};

/// Components for one `p`, each built on first use.
pub struct Model {
    qn: QNumbers,
    generators: OnceLock<Result<Generators>>,
    ybasis: OnceLock<Result<YBasis>>,
    s_op: OnceLock<Result<ZOperator>>,
    modular: OnceLock<Result<ModularAction>>,
    symmetric: OnceLock<Result<SymmetricModel>>,
    fusion: OnceLock<Result<(Report, Option<FusionTensor>)>>,
}

fn cached<T>(cell: &OnceLock<Result<T>>, build: impl FnOnce() -> Result<T>) -> Result<&T> {
    cell.get_or_init(build).as_ref().map_err(Clone::clone)
}

static MODELS: OnceLock<Mutex<HashMap<u32, Arc<Model>>>> = OnceLock::new();

impl Model {
    /// Shared model for `p`.
    pub fn get(p: u32) -> Result<Arc<Model>> {
        let qn = QNumbers::new(p)?;
        let mut map = MODELS.get_or_init(Default::default).lock().expect("model cache poisoned");
        Ok(map
            .entry(p)
            .or_insert_with(|| {
                Arc::new(Model {
                    qn,
                    generators: OnceLock::new(),
                    ybasis: OnceLock::new(),
                    s_op: OnceLock::new(),
                    modular: OnceLock::new(),
                    symmetric: OnceLock::new(),
                    fusion: OnceLock::new(),
                })
            })
            .clone())
    }

    pub fn p(&self) -> u32 {
        self.qn.p()
    }

    pub fn qn(&self) -> &QNumbers {
        &self.qn
    }

    pub fn generators(&self) -> Result<&Generators> {
        cached(&self.generators, || Generators::new(&self.qn))
    }

    pub fn ybasis(&self) -> Result<&YBasis> {
        cached(&self.ybasis, || build_change_of_basis(&self.qn))
    }

    pub fn s_operator(&self) -> Result<&ZOperator> {
        cached(&self.s_op, || build_s(&self.qn, self.ybasis()?))
    }

    pub fn modular(&self) -> Result<&ModularAction> {
        cached(&self.modular, || ModularAction::new(&self.qn, self.generators()?, self.s_operator()?))
    }

    pub fn symmetric(&self) -> Result<&SymmetricModel> {
        cached(&self.symmetric, || {
            SymmetricModel::new(&self.qn, self.generators()?, self.ybasis()?, self.s_operator()?)
        })
    }

    /// Fusion report and tensor (the tensor is absent when closure fails).
    pub fn fusion(&self) -> Result<&(Report, Option<FusionTensor>)> {
        cached(&self.fusion, || verify_fusion(&self.qn, self.symmetric()?))
    }
}

/// Named verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Daha,
    Ybasis,
    Modular,
    Symmetric,
    Oracle,
    Identities,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Daha, Suite::Ybasis, Suite::Modular, Suite::Symmetric, Suite::Oracle, Suite::Identities];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Daha => "daha",
            Suite::Ybasis => "ybasis",
            Suite::Modular => "modular",
            Suite::Symmetric => "symmetric",
            Suite::Oracle => "oracle",
            Suite::Identities => "identities",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// `Σ q^s (e_s + w_s)`, whose multiplication operator is `X`.
pub fn x_as_algebra_element(qn: &QNumbers) -> Result<ZVector> {
    let b = ZBasis::new(qn.p())?;
    let mut v = ZVector::zero(qn);
    for s in 1..=2 * qn.p() as i64 {
        v.set(b.e(s), qn.q_pow(s));
        v.set(b.w(s), qn.q_pow(s));
    }
    Ok(v)
}

fn daha(m: &Model) -> Result<Report> {
    let g = m.generators()?;
    let mut r = verify_daha(m.qn(), g);
    r.absorb(submodule_checks(m.qn(), g)?);
    let x_mult = mult_operator(&x_as_algebra_element(m.qn())?)?;
    r.matrix_eq("X = multiplication by sum q^s (e_s + w_s)", &x_mult, &g.x);
    Ok(r)
}

fn ybasis(m: &Model) -> Result<Report> {
    let g = m.generators()?;
    let mut r = verify_y_jordan(m.qn(), g, m.ybasis()?)?;
    r.absorb(verify_jordan_forms(m.qn(), g)?);
    r.absorb(verify_s_relations(m.qn(), g, m.s_operator()?)?);
    Ok(r)
}

fn symmetric(m: &Model) -> Result<Report> {
    let g = m.generators()?;
    let model = m.symmetric()?;
    let mut r = verify_symmetric(m.qn(), g, m.s_operator()?, model)?;
    r.absorb(ribbon_checks(m.qn(), g, model)?);
    r.absorb(m.fusion()?.0.clone());
    Ok(r)
}

fn identities(m: &Model) -> Result<Report> {
    let mut r = verify_e_sums(m.qn()).0;
    r.absorb(verify_w_sums(m.qn()).0);
    r.absorb(verify_s_squared_assembly(m.qn(), m.generators()?, m.s_operator()?)?);
    Ok(r)
}

/// Runs one suite; a construction error becomes a single failed check.
pub fn run_suite(p: u32, suite: Suite) -> Result<Report> {
    let m = Model::get(p)?;
    let outcome = match suite {
        Suite::Daha => daha(&m),
        Suite::Ybasis => ybasis(&m),
        Suite::Modular => Ok(verify_psl2z(m.qn(), m.generators()?, m.modular()?)),
        Suite::Symmetric => symmetric(&m),
        Suite::Oracle => crosscheck_matrices(m.qn(), m.generators()?),
        Suite::Identities => identities(&m),
    };
    let mut report = Report::new(suite.name(), p);
    match outcome {
        Ok(r) => report.checks = r.checks,
        Err(e) => report.assert_result("construction", Err(e)),
    }
    Ok(report)
}
