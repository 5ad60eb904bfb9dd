//! Mod-`l` image of a maximally induced local representation at `q`.
//!
//! The image is presented by two matrices: `t`, the image of a generator of
//! tame inertia, and `F`, the image of Frobenius. In the model basis
//!
//! ```text
//!     t = diag(ζ, ζ^{q³}, ζ^{q²}, ζ^q),    F: e1 → e2 → e3 → e4 → -e1
//! ```
//!
//! with `ζ` of exact order `p`, so that `F t F⁻¹ = t^q`, `F⁴ = -I` and the
//! group has order `8p`. An unramified twist replaces `F` by `αF`.

use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::aschbacher::subspace::{invariant_subspaces, DEFAULT_SUBSPACE_CAP};
use crate::aschbacher::AschError;
use crate::ff::{make_field, FfError, Field};
use crate::gsp4core::{
    close_subgroup, recover_invariant_form, symplectic_basis, GroupElement, GspError, SubgroupClosure, SymplecticForm,
};
use crate::linalg::{Mat2, Mat4, SqMat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InducedError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("bad congruence: {0}")]
    BadCongruence(String),
    #[error("residual characteristic {ell} coincides with p or q")]
    PrimeClash { ell: u64 },
    #[error("p = {0} is too small (p > 7 required)")]
    TooSmall(u64),
    #[error("no alternating nondegenerate invariant form")]
    NoSymplecticForm,
    #[error(transparent)]
    Field(#[from] FfError),
    #[error(transparent)]
    Gsp(#[from] GspError),
    #[error(transparent)]
    Classify(#[from] AschError),
}

#[derive(Clone, Debug)]
pub struct InducedParams {
    pub p: u64,
    pub q: u64,
    pub ell: u64,
    /// Degree of the smallest field `F_{l^m}` holding the `2p`-th roots of unity.
    pub m: u32,
    pub field: Field,
}

/// Checks the congruence conditions and builds the coefficient field.
///
/// For `l = 2` the sign `-1 = 1` needs no extra room, so `m` is the order of
/// 2 modulo `p`; otherwise it is the order of `l` modulo `2p`.
pub fn validate_params(p: u64, q: u64, ell: u64, strict: bool) -> Result<InducedParams, InducedError> {
    for n in [p, q, ell] {
        if !arith::is_prime(n) {
            return Err(InducedError::NotPrime(n));
        }
    }
    if p % 4 != 1 || p < 5 {
        return Err(InducedError::BadCongruence(format!("p = {p} must be ≡ 1 mod 4 and at least 5")));
    }
    if q < 5 || p == q {
        return Err(InducedError::BadCongruence(format!("q = {q} must be at least 5 and differ from p")));
    }
    let ord = arith::multiplicative_order(q, p).unwrap_or(0);
    if ord != 4 {
        return Err(InducedError::BadCongruence(format!("q = {q} has order {ord} mod {p}, not 4")));
    }
    if ell == p || ell == q {
        return Err(InducedError::PrimeClash { ell });
    }
    if strict && p <= 7 {
        return Err(InducedError::TooSmall(p));
    }
    let modulus = if ell == 2 { p } else { 2 * p };
    let m = arith::multiplicative_order(ell % modulus, modulus).expect("l is prime to 2p") as u32;
    let field = make_field(ell, m, None)?;
    Ok(InducedParams { p, q, ell, m, field })
}

/// The `q`-power orbit of exponents of `ζ` on the order-`p` part; the four
/// conjugate characters are distinct exactly when the orbit has size 4.
pub fn mackey_orbit(p: u64, q: u64) -> Vec<u64> {
    let mut orbit = vec![1 % p];
    let mut x = q % p;
    while x != orbit[0] && orbit.len() < 4 {
        orbit.push(x);
        x = x * q % p;
    }
    orbit
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MackeyWitness {
    pub irreducible: bool,
    pub orbit: Vec<u64>,
}

pub fn check_mackey_irreducible(params: &InducedParams) -> MackeyWitness {
    let orbit = mackey_orbit(params.p, params.q);
    let mut sorted = orbit.clone();
    sorted.sort_unstable();
    sorted.dedup();
    MackeyWitness { irreducible: orbit.len() == 4 && sorted.len() == 4, orbit }
}

#[derive(Clone, Debug)]
pub struct InducedRep {
    pub params: InducedParams,
    pub zeta: u64,
    pub alpha: u64,
    /// Generators in the model basis.
    pub t_model: Mat4,
    pub f_model: Mat4,
    /// Invariant form in the model basis, first nonzero entry 1.
    pub form: SymplecticForm,
    /// `P` with `P^T form P` the fixed form; `t = P^-1 t_model P`.
    pub basis_change: Mat4,
    /// Generators in fixed-form coordinates.
    pub t: GroupElement,
    pub frob: GroupElement,
}

pub fn model_generators(params: &InducedParams, zeta: u64, alpha: u64) -> (Mat4, Mat4) {
    let f = &params.field;
    let q = params.q;
    let z = |e: u64| f.pow(zeta, e);
    let q2 = q * q % params.p;
    let q3 = q2 * q % params.p;
    let t = Mat4::diag([z(1), z(q3), z(q2), z(q)]);
    let mut fr = Mat4::zero();
    fr.0[1][0] = alpha;
    fr.0[2][1] = alpha;
    fr.0[3][2] = alpha;
    fr.0[0][3] = f.neg(alpha);
    (t, fr)
}

pub fn build_induced(params: &InducedParams, alpha: u64) -> Result<InducedRep, InducedError> {
    let f = &params.field;
    if alpha == 0 {
        return Err(InducedError::Field(FfError::ZeroElement));
    }
    let zeta = f.nth_root_of_unity(params.p)?;
    let (t_model, f_model) = model_generators(params, zeta, alpha);
    let (form, _) = recover_invariant_form(f, &[t_model, f_model]).ok_or(InducedError::NoSymplecticForm)?;
    let basis_change = symplectic_basis(f, &form)?;
    let pinv = basis_change.inverse(f).expect("basis change is invertible");
    let t = GroupElement::new(f, pinv.mul(f, &t_model).mul(f, &basis_change))?;
    let frob = GroupElement::new(f, pinv.mul(f, &f_model).mul(f, &basis_change))?;
    Ok(InducedRep {
        params: params.clone(),
        zeta,
        alpha,
        t_model,
        f_model,
        form: SymplecticForm::new(f, form)?,
        basis_change,
        t,
        frob,
    })
}

impl InducedRep {
    pub fn field(&self) -> &Field {
        &self.params.field
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        vec![self.t.clone(), self.frob.clone()]
    }

    pub fn closure(&self, cap: usize) -> SubgroupClosure {
        close_subgroup(self.field(), &self.generators(), cap)
    }

    /// `F t F⁻¹ = t^q`.
    pub fn frobenius_relation_holds(&self) -> bool {
        let f = self.field();
        let lhs = self.f_model.mul(f, &self.t_model).mul(f, &self.f_model.inverse(f).unwrap());
        lhs == self.t_model.pow(f, self.params.q)
    }

    /// Similitude factors of `t` and `F` with respect to the recovered form.
    pub fn similitudes(&self) -> (Option<u64>, Option<u64>) {
        let f = self.field();
        let x = &self.form.matrix;
        (
            crate::gsp4core::similitude_for_form(f, &self.t_model, x),
            crate::gsp4core::similitude_for_form(f, &self.f_model, x),
        )
    }
}

/// No invariant line, plane or 3-space, by the exhaustive scan.
pub fn is_irreducible(f: &Field, gens: &[Mat4], sample: &[Mat4]) -> Result<bool, InducedError> {
    for dim in 1..=3 {
        if !invariant_subspaces(f, gens, sample, dim, DEFAULT_SUBSPACE_CAP, true)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistEntry {
    pub alpha: u64,
    pub group_order: usize,
    pub irreducible: bool,
}

/// The unramified twists `{t, αF}` for every nonzero `α` of the field,
/// each closed and scanned for invariant subspaces.
pub fn local_euler_data(rep: &InducedRep, cap: usize) -> Result<Vec<TwistEntry>, InducedError> {
    let f = rep.field();
    let mut out = Vec::new();
    for alpha in f.elements().skip(1) {
        let (t, fr) = model_generators(&rep.params, rep.zeta, alpha);
        let g = crate::gsp4core::MatrixClosure::new(f, &[t, fr], cap);
        g.require_complete()?;
        let irreducible = is_irreducible(f, &[t, fr], &g.elements)?;
        out.push(TwistEntry { alpha, group_order: g.order(), irreducible });
    }
    Ok(out)
}

/// `⟨diag(ζ, ζ⁻¹), [[0, -1], [1, 0]]⟩`, a monomial group of order `4p`.
pub fn monomial_gl2(params: &InducedParams) -> Result<Vec<Mat2>, InducedError> {
    let f = &params.field;
    let zeta = f.nth_root_of_unity(params.p)?;
    Ok(vec![SqMat([[zeta, 0], [0, f.inv(zeta).unwrap()]]), SqMat([[0, f.neg(1)], [1, 0]])])
}
