//! Named claims dispatched from a flat parameter set, shared by the command
//! line and the acceptance target.

use crate::classical::{self, ClassicalError};
use crate::gf::{make_field_with_cap, FieldError, FieldSpec, DEFAULT_FIELD_CAP};
use crate::groups::{FieldMatrix, FormKind, FormMatrix, Group, GroupError};
use crate::invariants::{self, InvariantError, Rearrangement, SteinbergFamily};
use crate::mpoly::PolyError;
use crate::ratexpr::RatExpr;
use crate::report::{Method, VerdictReport};
use crate::verify::{self, InvarianceMode, VerifyError, DEFAULT_JACOBIAN_RETRIES};

/// Every claim id accepted by [`run_claim`].
pub const CLAIMS: &[&str] = &[
    "dickson",
    "lemma_27",
    "cramer_21",
    "chain_24",
    "prop32_membership",
    "cor25_n1",
    "thm33_rearrange",
    "cor34_rearrange",
    "pi_specialize",
    "m_lt_n_constant",
    "invariance",
    "det_invariance",
    "classical_invariance",
    "orth_42",
    "orth_43",
    "unit_44",
    "sp_row",
    "transfer_quotient",
    "chu_converse",
    "stabilizer",
    "jacobian",
    "eta",
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SuiteError {
    #[error("unknown claim {0:?}")]
    UnknownClaim(String),
    #[error("{0}")]
    BadParams(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

type Result<T> = std::result::Result<T, SuiteError>;

/// Group families selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupName {
    GL,
    SL,
    Sp,
    U,
    O,
}

impl std::str::FromStr for GroupName {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "GL" => GroupName::GL,
            "SL" => GroupName::SL,
            "Sp" => GroupName::Sp,
            "U" => GroupName::U,
            "O" => GroupName::O,
            other => return Err(SuiteError::BadParams(format!("unknown group {other:?}"))),
        })
    }
}

/// Flat parameters for one claim. Unset optional values take claim-specific defaults.
#[derive(Debug, Clone)]
pub struct SuiteParams {
    pub p: u64,
    pub e: u32,
    pub m: usize,
    pub n: usize,
    pub group: GroupName,
    /// Form matrix text `a,b;c,d`; `None` for the standard form.
    pub form: Option<String>,
    pub k: Option<u32>,
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub s: Option<usize>,
    pub removed: Option<(usize, usize)>,
    pub trials: Option<u32>,
    pub samples: Option<usize>,
    pub field_cap: u64,
    pub enumeration_cap: u64,
    /// Cross-multiplied term estimate above which equality turns probabilistic.
    pub term_cap: usize,
    pub seed: u64,
}

impl SuiteParams {
    pub fn new(p: u64, e: u32, m: usize, n: usize) -> Self {
        SuiteParams {
            p,
            e,
            m,
            n,
            group: GroupName::GL,
            form: None,
            k: None,
            i: None,
            j: None,
            s: None,
            removed: None,
            trials: None,
            samples: None,
            field_cap: DEFAULT_FIELD_CAP,
            enumeration_cap: crate::groups::DEFAULT_ENUMERATION_CAP,
            term_cap: crate::ratexpr::EXACT_TERM_THRESHOLD,
            seed: 0,
        }
    }

    pub fn spec(&self) -> Result<FieldSpec> {
        Ok(make_field_with_cap(self.p, self.e, self.field_cap)?)
    }

    fn family(&self) -> Result<SteinbergFamily> {
        Ok(SteinbergFamily::build(&self.spec()?, self.m, self.n)?)
    }

    /// The form for `Sp`, `U` or `O` at matrix size `n`.
    pub fn form_matrix(&self) -> Result<FormMatrix> {
        let spec = self.spec()?;
        let kind = match self.group {
            GroupName::Sp => FormKind::Alternate,
            GroupName::U => FormKind::Hermitian,
            GroupName::O => FormKind::Symmetric,
            _ => return Err(SuiteError::BadParams("a form group (Sp, U or O) is required".into())),
        };
        Ok(match &self.form {
            None => FormMatrix::standard(kind, self.n, &spec)?,
            Some(text) => {
                let m = FieldMatrix::parse(&spec, text)?;
                if m.size() != self.n {
                    return Err(SuiteError::BadParams(format!("form has size {}, expected {}", m.size(), self.n)));
                }
                FormMatrix::new(kind, m)?
            }
        })
    }

    pub fn group(&self) -> Result<Group> {
        let spec = self.spec()?;
        Ok(match self.group {
            GroupName::GL => Group::general(&spec, self.n),
            GroupName::SL => Group::special(&spec, self.n),
            _ => Group::with_form(self.form_matrix()?),
        })
    }

    /// `samples` sampled elements when set, else the full enumeration.
    pub fn elements(&self) -> Result<(Vec<FieldMatrix>, Method)> {
        let group = self.group()?;
        Ok(match self.samples {
            Some(count) => (group.sample(count, self.seed)?, Method::Exact),
            None => (group.enumerate(self.enumeration_cap)?, Method::Enumeration),
        })
    }
}

fn need<T>(value: Option<T>, name: &str, default: Option<T>) -> Result<T> {
    value.or(default).ok_or_else(|| SuiteError::BadParams(format!("parameter {name} is required")))
}

/// Runs one claim. Parameters a claim does not read are ignored.
pub fn run_claim(claim: &str, params: &SuiteParams) -> Result<VerdictReport> {
    let p = params;
    Ok(match claim {
        "dickson" => dickson(p)?,
        "lemma_27" => invariants::lemma_27(&p.family()?)?,
        "cramer_21" => invariants::cramer_21(&p.family()?, need(p.k, "k", Some(1))?)?,
        "chain_24" => {
            let fam = p.family()?;
            let k = need(p.k, "k", Some(1))?;
            match p.trials {
                Some(t) => invariants::chain_24_probabilistic(&fam, k, t, p.seed)?,
                None => invariants::chain_24(&fam, k)?,
            }
        }
        "prop32_membership" => invariants::prop32_membership(&p.family()?)?,
        "cor25_n1" => invariants::cor25_n1(&p.family()?)?,
        "thm33_rearrange" | "cor34_rearrange" => {
            let variant = if claim == "thm33_rearrange" { Rearrangement::Quotients } else { Rearrangement::Polynomials };
            invariants::rearrangement(&p.family()?, need(p.removed, "removed", Some((1, 1)))?, variant)?
        }
        "pi_specialize" => invariants::pi_check(&p.spec()?, p.m, p.n)?,
        "m_lt_n_constant" => invariants::m_lt_n_constants(&p.family()?)?,
        "invariance" | "det_invariance" => steinberg_invariance(claim, p)?,
        "classical_invariance" => {
            let fam = classical::theorem41_generators(&p.form_matrix()?, p.m)?;
            let (elements, method) = p.elements()?;
            classical::family_invariance(&fam, &elements, method)?
        }
        "orth_42" => classical::orth_42(&p.form_matrix()?, need(p.j, "j", Some(2))?)?,
        "orth_43" => classical::orth_43(&p.form_matrix()?, need(p.j, "j", Some(2))?)?,
        "unit_44" => classical::unit_44(&p.form_matrix()?, need(p.j, "j", Some(2))?)?,
        "sp_row" => classical::sp_row(&p.form_matrix()?, need(p.i, "i", Some(1))?)?,
        "transfer_quotient" => classical::transfer_quotient(
            &p.form_matrix()?,
            p.m,
            need(p.i, "i", Some(2))?,
            need(p.j, "j", Some(1))?,
        )?,
        "chu_converse" => classical::chu_converse(&p.form_matrix()?, p.enumeration_cap)?,
        "stabilizer" => verify::stabilizer_enumeration(&p.family()?, p.enumeration_cap, p.term_cap, p.seed)?,
        "jacobian" => jacobian(p)?,
        "eta" => {
            let fam = p.family()?;
            let (elements, _) = p.elements()?;
            verify::eta_membership_check(&fam, need(p.s, "s", Some(2))?, &elements, false)?
        }
        other => return Err(SuiteError::UnknownClaim(other.to_string())),
    })
}

fn dickson(p: &SuiteParams) -> Result<VerdictReport> {
    let spec = p.spec()?;
    let grid = crate::mpoly::VarGrid::new(1, p.n)?;
    let mut rep = VerdictReport::new("dickson", Method::Exact).param("p", p.p).param("e", p.e).param("n", p.n as u64);
    for s in 0..p.n {
        let c = invariants::dickson_c(&spec, grid, s, 1)?;
        rep.note(format!("c[{},{s}] = {}", p.n, c.to_canonical_string()));
    }
    let c = (0..p.n)
        .map(|s| Ok((format!("c[{},{s}]", p.n), RatExpr::from_poly(invariants::dickson_c(&spec, grid, s, 1)?))))
        .collect::<Result<Vec<_>>>()?;
    let elements = match p.samples {
        Some(count) => Group::general(&spec, p.n).sample(count, p.seed)?,
        None => Group::general(&spec, p.n).enumerate(p.enumeration_cap)?,
    };
    let inv = verify::invariance_report("dickson", &c, &elements, InvarianceMode::Invariant, Method::Exact)?;
    if let Some(w) = inv.witness {
        rep.fail(w);
    }
    Ok(rep)
}

fn steinberg_invariance(claim: &str, p: &SuiteParams) -> Result<VerdictReport> {
    let fam = p.family()?;
    let (elements, method) = p.elements()?;
    let (gens, mode) = if claim == "invariance" {
        let g = fam.generators()?.into_iter().map(|((i, j), r)| (format!("l[{i},{j}]/l_0"), r)).collect::<Vec<_>>();
        (g, InvarianceMode::Invariant)
    } else {
        let kmax = need(p.k, "k", Some(2))?;
        let mut g = vec![("l_0".to_string(), RatExpr::from_poly(fam.ell0().clone()))];
        for k in 0..=kmax {
            for i in 1..=fam.m() {
                for j in 1..=fam.n() {
                    g.push((format!("l[{i},{j}]^({k})"), RatExpr::from_poly(fam.lijk(i, j, k)?)));
                }
            }
        }
        (g, InvarianceMode::DetInvariant)
    };
    let mut rep = verify::invariance_report(claim, &gens, &elements, mode, method)?;
    for (key, value) in [("p", p.p), ("e", p.e as u64), ("m", p.m as u64), ("n", p.n as u64)] {
        rep.params.insert(key.into(), value.into());
    }
    if p.samples.is_some() {
        rep = rep.with_seed(p.seed);
    }
    Ok(rep)
}

fn jacobian(p: &SuiteParams) -> Result<VerdictReport> {
    let gens: Vec<RatExpr> = match p.group {
        GroupName::GL | GroupName::SL => p.family()?.generators()?.into_iter().map(|(_, r)| r).collect(),
        _ => classical::theorem41_generators(&p.form_matrix()?, p.m)?
            .generators
            .into_iter()
            .map(|(_, g)| RatExpr::from_poly(g))
            .collect(),
    };
    let mut rep = verify::jacobian_independence(&gens, p.seed, p.trials.unwrap_or(DEFAULT_JACOBIAN_RETRIES))?;
    rep.params.insert("group".into(), format!("{:?}", p.group).into());
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_claim_dispatches_or_reports_bad_params() {
        for claim in CLAIMS {
            let mut p = SuiteParams::new(2, 1, 2, 2);
            if ["orth_42", "orth_43", "chu_converse"].contains(claim) {
                p = SuiteParams::new(3, 1, 2, 2);
                p.group = GroupName::O;
            }
            if *claim == "unit_44" {
                p = SuiteParams::new(3, 2, 2, 2);
                p.group = GroupName::U;
            }
            if ["sp_row", "transfer_quotient", "classical_invariance"].contains(claim) {
                p.group = GroupName::Sp;
            }
            if *claim == "m_lt_n_constant" || *claim == "pi_specialize" {
                p = SuiteParams::new(2, 1, 1, 2);
            }
            if *claim == "cor25_n1" {
                p = SuiteParams::new(3, 1, 3, 1);
            }
            let rep = run_claim(claim, &p).unwrap_or_else(|e| panic!("{claim}: {e}"));
            assert!(rep.passed(), "{claim}: {:?}", rep.witness);
        }
        assert!(matches!(run_claim("nope", &SuiteParams::new(2, 1, 2, 2)), Err(SuiteError::UnknownClaim(_))));
    }

    #[test]
    fn form_parsing() {
        let mut p = SuiteParams::new(3, 1, 2, 2);
        p.group = GroupName::O;
        p.form = Some("1,0;0,2".into());
        assert_eq!(p.form_matrix().unwrap().matrix().to_string(), "1,0;0,2");
        p.form = Some("1,0,0;0,1,0;0,0,1".into());
        assert!(matches!(p.form_matrix(), Err(SuiteError::BadParams(_))));
        p.group = GroupName::GL;
        assert!(p.form_matrix().is_err());
    }
}
