//! Screening of compatible-system Frobenius data for exceptional primes `ℓ`.
//!
//! Raised flags are candidates only. A cleared flag always carries a witness
//! prime or an inertia computation that proves the corresponding image type
//! cannot occur.

mod checks;
mod inertia;
mod systems;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

pub use checks::{
    candidate_discriminants, induced_test, irreducibility_witness, symm3_test, InducedOutcome, IrreducibilityOutcome,
    Symm3Outcome,
};
pub use inertia::{
    frobenius_projective_order, inertia_patterns, small_group_exclusion, CharacterKind, DiagonalEntry, InertiaPattern,
    PatternKind, SmallGroupOutcome,
};
pub use systems::{
    elliptic_ap, make_generic_system, make_symm3_system, symm3_coefficients, trivial_system, CONDUCTOR_15_CURVE,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScreenError {
    #[error("quartic at p = {0} violates the symplectic shape")]
    ShapeViolation(u64),
    #[error("weights must satisfy m1 >= m2 >= 0, got ({0}, {1})")]
    WeightViolation(u32, u32),
    #[error("central character: {0}")]
    CharacterViolation(String),
    #[error("malformed system: {0}")]
    Malformed(String),
    #[error("no sampled primes")]
    NoData,
    #[error("no inert samples for D = {0}")]
    NoInertSamples(i64),
    #[error("inertia hypothesis fails: l - 1 = {l_minus_1} <= m1 + m2 + 3 = {w}")]
    HypothesisViolated { l_minus_1: u64, w: u64 },
}

/// On-disk schema. Frobenius entries are `[c4, c3, c2, c1, c0]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemFile {
    #[serde(rename = "S")]
    pub s: Vec<u64>,
    pub conductor: u64,
    pub weights: [u32; 2],
    pub central_character: CentralCharacterFile,
    pub frobenius: BTreeMap<String, Vec<i128>>,
    /// Reserved; only `"Q"` is supported.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff_field: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CentralCharacterFile {
    Label(String),
    Values(BTreeMap<String, i64>),
}

/// Validated compatible-system data with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibleSystem {
    pub s: BTreeSet<u64>,
    pub conductor: u64,
    pub m1: u32,
    pub m2: u32,
    /// `ω(p)`; 1 everywhere for the trivial character.
    pub omega: BTreeMap<u64, i64>,
    pub trivial_character: bool,
    /// `P_p` as `[c4, c3, c2, c1, c0]`.
    pub frobenius: BTreeMap<u64, [i128; 5]>,
}

impl CompatibleSystem {
    pub fn similitude_weight(&self) -> u32 {
        self.m1 + self.m2 + 3
    }

    pub fn hodge_tate_weights(&self) -> [u32; 4] {
        [0, self.m2 + 1, self.m1 + 2, self.similitude_weight()]
    }

    /// `a_p = -c3`.
    pub fn trace(&self, p: u64) -> Option<i128> {
        self.frobenius.get(&p).map(|c| -c[1])
    }

    /// `e_p = ω(p) p^w`.
    pub fn similitude(&self, p: u64) -> Option<i128> {
        let w = self.similitude_weight();
        let pw = (p as i128).checked_pow(w)?;
        Some(self.omega.get(&p).copied().unwrap_or(1) as i128 * pw)
    }

    /// `P_p mod l`, coefficients low-to-high.
    pub fn reduce(&self, p: u64, l: u64) -> Option<Vec<u64>> {
        let c = self.frobenius.get(&p)?;
        let low: Vec<i128> = c.iter().rev().copied().collect();
        Some(low.iter().map(|&x| arith::rem_euclid(x, l)).collect())
    }

    /// Sampled primes outside `S ∪ {l}`, up to `bound`.
    pub fn sample(&self, l: u64, bound: Option<u64>) -> Vec<u64> {
        self.frobenius
            .keys()
            .copied()
            .filter(|&p| p != l && !self.s.contains(&p) && bound.is_none_or(|b| p <= b))
            .collect()
    }

    pub fn to_file(&self) -> SystemFile {
        let central_character = if self.trivial_character {
            CentralCharacterFile::Label("trivial".into())
        } else {
            CentralCharacterFile::Values(self.omega.iter().map(|(p, v)| (p.to_string(), *v)).collect())
        };
        SystemFile {
            s: self.s.iter().copied().collect(),
            conductor: self.conductor,
            weights: [self.m1, self.m2],
            central_character,
            frobenius: self.frobenius.iter().map(|(p, c)| (p.to_string(), c.to_vec())).collect(),
            coeff_field: None,
        }
    }
}

fn parse_prime(key: &str) -> Result<u64, ScreenError> {
    let p: u64 = key.trim().parse().map_err(|_| ScreenError::Malformed(format!("prime key {key:?}")))?;
    if !arith::is_prime(p) {
        return Err(ScreenError::Malformed(format!("{p} is not prime")));
    }
    Ok(p)
}

/// Validates the file: weights, conductor support, the central character and
/// the shape `(1, -a, b, -a e, e²)` with `e = ω(p) p^(m1+m2+3)` at every `p`.
pub fn ingest(file: &SystemFile) -> Result<CompatibleSystem, ScreenError> {
    let [m1, m2] = file.weights;
    if m1 < m2 {
        return Err(ScreenError::WeightViolation(m1, m2));
    }
    if let Some(cf) = &file.coeff_field {
        if cf != "Q" {
            return Err(ScreenError::Malformed(format!("unsupported coefficient field {cf}")));
        }
    }
    let s: BTreeSet<u64> = file.s.iter().copied().collect();
    if file.conductor == 0 || !arith::prime_divisors(file.conductor).iter().all(|p| s.contains(p)) {
        return Err(ScreenError::Malformed(format!("conductor {} not supported on S", file.conductor)));
    }
    let (trivial, omega_raw) = match &file.central_character {
        CentralCharacterFile::Label(l) if l == "trivial" => (true, BTreeMap::new()),
        CentralCharacterFile::Label(l) => return Err(ScreenError::CharacterViolation(format!("unknown label {l:?}"))),
        CentralCharacterFile::Values(m) => {
            let mut out = BTreeMap::new();
            for (k, v) in m {
                out.insert(parse_prime(k)?, *v);
            }
            (false, out)
        }
    };
    if !trivial {
        let values: BTreeSet<i64> = omega_raw.values().copied().collect();
        let sign_valued = values.iter().all(|v| v.abs() == 1);
        if !(sign_valued || values.len() <= 1) {
            return Err(ScreenError::CharacterViolation("values are neither ±1 nor constant".into()));
        }
    }
    let mut sys = CompatibleSystem {
        s,
        conductor: file.conductor,
        m1,
        m2,
        omega: omega_raw,
        trivial_character: trivial,
        frobenius: BTreeMap::new(),
    };
    for (key, coeffs) in &file.frobenius {
        let p = parse_prime(key)?;
        if sys.s.contains(&p) {
            return Err(ScreenError::Malformed(format!("Frobenius data at bad prime {p}")));
        }
        if !trivial && !sys.omega.contains_key(&p) {
            return Err(ScreenError::CharacterViolation(format!("missing value at {p}")));
        }
        let c: [i128; 5] = coeffs.as_slice().try_into().map_err(|_| ScreenError::ShapeViolation(p))?;
        let e = sys.similitude(p).ok_or(ScreenError::ShapeViolation(p))?;
        let ok = c[0] == 1 && c[1].checked_mul(e) == Some(c[3]) && e.checked_mul(e) == Some(c[4]);
        if !ok {
            return Err(ScreenError::ShapeViolation(p));
        }
        sys.frobenius.insert(p, c);
    }
    Ok(sys)
}

pub fn load_system(path: &std::path::Path) -> Result<CompatibleSystem, ScreenError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScreenError::Malformed(e.to_string()))?;
    let file: SystemFile = serde_json::from_str(&text).map_err(|e| ScreenError::Malformed(e.to_string()))?;
    ingest(&file)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Flag {
    PossiblyReducible,
    PossiblyInduced(i64),
    PossiblySymm3,
    PossiblySmallGroup,
    WeightDegenerate,
}

impl std::fmt::Display for Flag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Flag::PossiblyInduced(d) => write!(f, "PossiblyInduced({d})"),
            other => write!(f, "{other:?}"),
        }
    }
}

impl Serialize for Flag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    /// Use supplied primes up to this bound (all when `None`).
    pub prime_bound: Option<u64>,
    /// Largest `|D|` for candidate quadratic fields.
    pub disc_bound: i64,
    /// Allow `l | D`.
    pub ramified_at_ell: bool,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { prime_bound: None, disc_bound: 1000, ramified_at_ell: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Evidence {
    pub sampled: usize,
    pub irreducibility: IrreducibilityOutcome,
    pub induced: Vec<InducedOutcome>,
    pub symm3: Symm3Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub small_group: Option<SmallGroupOutcome>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScreenEntry {
    pub ell: u64,
    pub flags: Vec<Flag>,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScreeningReport {
    pub ell_min: u64,
    pub ell_max: u64,
    pub skipped: Vec<u64>,
    pub entries: Vec<ScreenEntry>,
}

impl ScreeningReport {
    pub fn entry(&self, ell: u64) -> Option<&ScreenEntry> {
        self.entries.iter().find(|e| e.ell == ell)
    }

    pub fn table(&self) -> String {
        let mut out = String::from("ell   flags\n");
        for e in &self.entries {
            let flags: Vec<String> = e.flags.iter().map(|f| f.to_string()).collect();
            let shown = if flags.is_empty() { "-".to_string() } else { flags.join(", ") };
            out.push_str(&format!("{:<5} {}\n", e.ell, shown));
        }
        if !self.skipped.is_empty() {
            out.push_str(&format!("skipped (in S): {:?}\n", self.skipped));
        }
        out
    }
}

/// Screens one prime `l ∉ S`.
pub fn screen_prime(sys: &CompatibleSystem, l: u64, cfg: &SampleConfig) -> Result<ScreenEntry, ScreenError> {
    let sample = sys.sample(l, cfg.prime_bound);
    if sample.is_empty() {
        return Err(ScreenError::NoData);
    }
    let mut flags = Vec::new();
    let irreducibility = irreducibility_witness(sys, l, &sample)?;
    if irreducibility.witness.is_none() {
        flags.push(Flag::PossiblyReducible);
    }
    let induced = induced_test(sys, l, &sample, cfg);
    flags.extend(induced.iter().filter(|o| o.flagged).map(|o| Flag::PossiblyInduced(o.d)));
    let symm3 = symm3_test(sys, l, &sample);
    if symm3.flagged {
        flags.push(Flag::PossiblySymm3);
    }
    let small_group = match small_group_exclusion(sys, l, &sample) {
        Ok(outcome) => {
            if outcome.flagged {
                flags.push(Flag::PossiblySmallGroup);
            }
            Some(outcome)
        }
        Err(ScreenError::HypothesisViolated { .. }) => {
            flags.push(Flag::WeightDegenerate);
            None
        }
        Err(e) => return Err(e),
    };
    Ok(ScreenEntry {
        ell: l,
        flags,
        evidence: Evidence { sampled: sample.len(), irreducibility, induced, symm3, small_group },
    })
}

/// Runs every test at each prime `l` in `[ell_min, ell_max]` outside `S`.
pub fn screen(
    sys: &CompatibleSystem,
    ell_min: u64,
    ell_max: u64,
    cfg: &SampleConfig,
) -> Result<ScreeningReport, ScreenError> {
    let mut report = ScreeningReport { ell_min, ell_max, skipped: Vec::new(), entries: Vec::new() };
    for l in (ell_min.max(3)..=ell_max).filter(|&l| arith::is_prime(l)) {
        if sys.s.contains(&l) {
            report.skipped.push(l);
            continue;
        }
        report.entries.push(screen_prime(sys, l, cfg)?);
    }
    Ok(report)
}
