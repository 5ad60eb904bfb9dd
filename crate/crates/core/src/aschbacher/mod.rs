//! Case analysis for finite subgroups of `GSp(4, F_q)` along the Aschbacher
//! classes, with re-checkable witnesses for every matched case.

pub mod cubic;
pub mod dickson;
pub mod orthogonal;
pub mod semilinear;
pub mod subspace;
pub mod suzuki;

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith;
use crate::ff::FfError;
use crate::gsp4core::{psp4_order, similitude_factor, sp4_order, GspError, SubgroupClosure};
use crate::linalg::{Mat4, Subspace};

pub use cubic::{symm3_residual, test_twisted_cubic, TwistedCubicData};
pub use dickson::{classify_gl2, Gl2Class, Gl2Label};
pub use orthogonal::{test_orthogonal, OrthogonalType};
pub use semilinear::find_semilinear_structure;
pub use subspace::{find_imprimitivity, find_invariant_subspace, DEFAULT_SUBSPACE_CAP};
pub use suzuki::{suzuki_divisibility, suzuki_order};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AschError {
    #[error("{count} subspaces exceed the enumeration cap {cap}")]
    TooManySubspaces { count: u128, cap: u128 },
    #[error("centralizer of dimension {dim} over F_{q} is too large to enumerate")]
    CentralizerTooLarge { dim: usize, q: u64 },
    #[error("test not defined in characteristic {0}")]
    WrongCharacteristic(u64),
    #[error("subspace dimension must be 1, 2 or 3, got {0}")]
    BadDimension(usize),
    #[error("projective order {projective_order} matches no class of the Dickson list")]
    Unclassified { projective_order: usize },
    #[error(transparent)]
    Gsp(#[from] GspError),
    #[error(transparent)]
    Field(#[from] FfError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Case {
    Reducible,
    Imprimitive,
    Semilinear,
    SmallExceptional { listed: bool },
    TwistedCubic,
    OrthogonalPlus,
    OrthogonalMinus,
    Suzuki,
    ContainsSp(u32),
    FullGSp(u32),
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::SmallExceptional { listed: true } => write!(f, "SmallExceptional"),
            Case::SmallExceptional { listed: false } => write!(f, "SmallExceptional (unlisted)"),
            Case::ContainsSp(s) => write!(f, "ContainsSp({s})"),
            Case::FullGSp(s) => write!(f, "FullGSp({s})"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    InvariantSubspace(subspace::InvariantSubspace),
    Decomposition(subspace::Decomposition),
    FieldGenerator(semilinear::SemilinearStructure),
    TwistedCubic(TwistedCubicData),
    QuadraticForm(orthogonal::QuadraticForm),
    /// Order certificate: the group's (projective) order against a target.
    Orders {
        measured: u128,
        target: u128,
        exponent: Option<u64>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseMatch {
    pub case: Case,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AschbacherReport {
    pub matches: Vec<CaseMatch>,
    pub large_image: bool,
    pub group_order: usize,
    pub projective_order: usize,
    pub notes: Vec<String>,
}

impl AschbacherReport {
    pub fn cases(&self) -> Vec<Case> {
        self.matches.iter().map(|m| m.case).collect()
    }

    pub fn has(&self, pred: impl Fn(&Case) -> bool) -> bool {
        self.matches.iter().any(|m| pred(&m.case))
    }

    pub fn to_json(&self) -> Value {
        let witnesses: serde_json::Map<String, Value> =
            self.matches.iter().map(|m| (m.case.to_string(), serde_json::to_value(&m.witness).unwrap())).collect();
        json!({
            "cases": self.matches.iter().map(|m| m.case.to_string()).collect::<Vec<_>>(),
            "witnesses": witnesses,
            "large_image": self.large_image,
            "group_order": self.group_order,
            "projective_order": self.projective_order,
            "notes": self.notes,
        })
    }
}

/// Orders of the cross-characteristic small groups for odd `l`.
pub const SMALL_ORDERS_ODD: [u128; 5] = [520, 1440, 1920, 3840, 5040];

/// Characteristic-2 small groups: `S5`, `A6` and `3²:D8`, as
/// `(projective order, exponent)`.
pub const SMALL_GROUPS_CHAR2: [(u128, u64); 3] = [(120, 60), (360, 60), (72, 12)];

#[derive(Clone, Copy, Debug)]
pub struct ClassifyConfig {
    pub subspace_cap: u128,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { subspace_cap: DEFAULT_SUBSPACE_CAP }
    }
}

/// Projective order of `G ∩ Sp(4)`.
fn symplectic_part_projective_order(g: &SubgroupClosure) -> Result<u128, AschError> {
    let f = g.field();
    let mut count = 0u128;
    let mut scalars = 0u128;
    for m in g.elements() {
        if similitude_factor(f, m)? == 1 {
            count += 1;
            if m.as_scalar().is_some() {
                scalars += 1;
            }
        }
    }
    Ok(count / scalars)
}

fn projective_exponent(g: &SubgroupClosure) -> u64 {
    let f = g.field();
    let limit = g.order() as u64;
    g.elements().iter().map(|m| m.projective_order(f, limit).expect("finite group")).fold(1, arith::lcm)
}

/// Runs every case test applicable in the field's characteristic.
pub fn classify(g: &SubgroupClosure, cfg: &ClassifyConfig) -> Result<AschbacherReport, AschError> {
    g.inner.require_complete()?;
    let f = g.field();
    let l = f.characteristic();
    let r = f.degree();
    let group_order = g.order();
    let projective_order = g.inner.projective_order()?;
    let po = projective_order as u128;
    let mut matches = Vec::new();
    let mut notes = Vec::new();

    if g.generators.iter().all(|x| x.matrix.as_scalar().is_some()) {
        notes.push("scalar group: classified Reducible by convention".to_string());
    }

    let mut reducible = false;
    for dim in 1..=3 {
        if let Some(w) = find_invariant_subspace(g, dim, cfg.subspace_cap)? {
            matches.push(CaseMatch { case: Case::Reducible, witness: Witness::InvariantSubspace(w) });
            reducible = true;
            break;
        }
    }
    if let Some(d) = find_imprimitivity(g, cfg.subspace_cap)? {
        matches.push(CaseMatch { case: Case::Imprimitive, witness: Witness::Decomposition(d) });
    }
    match find_semilinear_structure(g) {
        Ok(Some(s)) => matches.push(CaseMatch { case: Case::Semilinear, witness: Witness::FieldGenerator(s) }),
        Ok(None) => {}
        Err(e @ AschError::CentralizerTooLarge { .. }) if reducible => {
            notes.push(format!("semilinear test skipped: {e}"));
        }
        Err(e) => return Err(e),
    }

    // Large image: G ∩ Sp(4) has order divisible by |PSp(4, l^s)| for the
    // largest such s | r.
    let mut large_image = false;
    if !reducible {
        let sym_po = symplectic_part_projective_order(g)?;
        let subfields = arith::divisors(r as u64);
        if let Some(&s) = subfields.iter().rev().find(|&&s| sym_po % psp4_order(l.pow(s as u32)).unwrap() == 0) {
            let target = psp4_order(l.pow(s as u32))?;
            matches.push(CaseMatch {
                case: Case::ContainsSp(s as u32),
                witness: Witness::Orders { measured: sym_po, target, exponent: None },
            });
            large_image = true;
            let full = sp4_order(l.pow(s as u32))?;
            if l != 2 && po == full && po > sym_po {
                matches.push(CaseMatch {
                    case: Case::FullGSp(s as u32),
                    witness: Witness::Orders { measured: po, target: full, exponent: None },
                });
            }
        }
    }

    if l >= 5 && !large_image {
        if let Some(data) = test_twisted_cubic(g)? {
            matches.push(CaseMatch { case: Case::TwistedCubic, witness: Witness::TwistedCubic(data) });
        }
    } else if l < 5 {
        notes.push(format!("twisted cubic test not applicable in characteristic {l}"));
    }

    if l == 2 {
        let o = orthogonal::test_orthogonal(g)?;
        if let Some(form) = o.form {
            let case = match o.kind {
                OrthogonalType::Plus => Some(Case::OrthogonalPlus),
                OrthogonalType::Minus => Some(Case::OrthogonalMinus),
                OrthogonalType::None => None,
            };
            if let Some(case) = case {
                matches.push(CaseMatch { case, witness: Witness::QuadraticForm(form) });
            }
        }
        if !reducible {
            let sz = arith::divisors(r as u64)
                .into_iter()
                .filter(|s| s % 2 == 1)
                .map(|s| suzuki_order(s as u32))
                .find(|o| *o == po.into());
            if let Some(o) = sz {
                let target: u128 = o.try_into().expect("small Suzuki order");
                matches.push(CaseMatch {
                    case: Case::Suzuki,
                    witness: Witness::Orders { measured: po, target, exponent: None },
                });
            }
        }
    }

    if !reducible && !large_image {
        let exponent = projective_exponent(g);
        let listed = if l == 2 {
            SMALL_GROUPS_CHAR2.iter().find(|&&(o, e)| o == po && e == exponent).map(|&(o, _)| o)
        } else {
            SMALL_ORDERS_ODD.iter().find(|&&o| o == po).copied()
        };
        if let Some(target) = listed {
            matches.push(CaseMatch {
                case: Case::SmallExceptional { listed: true },
                witness: Witness::Orders { measured: po, target, exponent: Some(exponent) },
            });
        } else if matches.is_empty() && po < 5040 {
            matches.push(CaseMatch {
                case: Case::SmallExceptional { listed: false },
                witness: Witness::Orders { measured: po, target: 5040, exponent: Some(exponent) },
            });
        }
    }

    if matches.is_empty() {
        notes.push("no case matched".to_string());
    }
    Ok(AschbacherReport { matches, large_image, group_order, projective_order, notes })
}

/// Re-checks every witness of `report` directly against `g`.
pub fn verify_report(g: &SubgroupClosure, report: &AschbacherReport) -> Result<bool, AschError> {
    let f = g.field();
    let gens: Vec<Mat4> = g.generator_matrices();
    let po = g.inner.projective_order()? as u128;
    for m in &report.matches {
        let ok = match (&m.case, &m.witness) {
            (Case::Reducible, Witness::InvariantSubspace(w)) => {
                subspace::is_invariant(f, &gens, &Subspace::span(f, &w.basis))
                    && subspace::singularity(f, &w.basis) == w.kind
            }
            (Case::Imprimitive, Witness::Decomposition(d)) => {
                subspace::permutes_pair(f, &gens, &Subspace::span(f, &d.v1), &Subspace::span(f, &d.v2))
            }
            (Case::Semilinear, Witness::FieldGenerator(s)) => semilinear::verify_structure(f, &gens, s),
            (Case::TwistedCubic, Witness::TwistedCubic(d)) => cubic::verify_twisted_cubic(f, &gens, d),
            (Case::OrthogonalPlus | Case::OrthogonalMinus, Witness::QuadraticForm(q)) => {
                let want = if m.case == Case::OrthogonalPlus { OrthogonalType::Plus } else { OrthogonalType::Minus };
                gens.iter().all(|x| q.is_invariant(f, x))
                    && q.polar(f).det(f) != 0
                    && orthogonal::form_type(f, q) == want
            }
            (Case::ContainsSp(s), Witness::Orders { measured, target, .. }) => {
                let l = f.characteristic();
                *measured == symplectic_part_projective_order(g)?
                    && *target == psp4_order(l.pow(*s))?
                    && measured % target == 0
            }
            (Case::FullGSp(s), Witness::Orders { measured, target, .. }) => {
                *measured == po && *target == sp4_order(f.characteristic().pow(*s))? && po == *target
            }
            (Case::Suzuki, Witness::Orders { measured, target, .. }) => *measured == po && po == *target,
            (Case::SmallExceptional { listed }, Witness::Orders { measured, target, exponent }) => {
                *measured == po
                    && *exponent == Some(projective_exponent(g))
                    && if *listed { po == *target } else { po < *target }
            }
            _ => false,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
