use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::formpoly::{star_component, Family, FunctionSpec, Polynomial, Signature, Var};
use crate::scalar::Coefficient;

fn single_grade(f: &FunctionSpec) -> Result<usize> {
    match f.signature() {
        Signature::Single(k) => Ok(k),
        other => Err(Error::SignatureMismatch(format!("expected a single-form function, got {other:?}"))),
    }
}

fn pair_grade(f: &FunctionSpec) -> Result<usize> {
    match f.signature() {
        Signature::Pair(k) => Ok(k),
        other => Err(Error::SignatureMismatch(format!("expected a pair function, got {other:?}"))),
    }
}

/// `f_∗(φ) = f(∗φ)` on `Λ^{n-k}`.
pub fn hodge_transform(f: &FunctionSpec) -> Result<FunctionSpec> {
    let k = single_grade(f)?;
    let n = f.n();
    let body = f.body().substitute(|v| {
        let (sign, src) = star_component(n, v.index);
        Some(Polynomial::var(Var::new(Family::Omega, src)).with_sign(sign))
    });
    FunctionSpec::single(n, n - k, body)
}

/// Replaces every variable of `fixed` by the matching component of `value`
/// and renames `free` to the single-form family.
fn freeze(f: &FunctionSpec, fixed: Family, value: &Form, free: Family) -> Polynomial {
    f.body().substitute(|v| {
        if v.family == fixed {
            Some(Polynomial::constant(value.coeff(v.index)))
        } else if v.family == free {
            Some(Polynomial::var(Var::new(Family::Omega, v.index)))
        } else {
            None
        }
    })
}

fn check_argument(f: &FunctionSpec, value: &Form, grade: usize, name: &str) -> Result<()> {
    if value.n() != f.n() {
        return Err(Error::DimensionMismatch(f.n(), value.n()));
    }
    if value.k() != grade {
        return Err(Error::GradeMismatch(format!(
            "{name} must have grade {grade}, got {}",
            value.k()
        )));
    }
    Ok(())
}

/// `f_η(ξ) = f(ξ, η)` as a function on `Λ^{k+1}`.
pub fn fix_eta(f: &FunctionSpec, eta: &Form) -> Result<FunctionSpec> {
    let k = pair_grade(f)?;
    check_argument(f, eta, k - 1, "eta")?;
    FunctionSpec::single(f.n(), k + 1, freeze(f, Family::Eta, eta, Family::Xi))
}

/// `f^ξ(η) = f(ξ, η)` as a function on `Λ^{k-1}`.
pub fn fix_xi(f: &FunctionSpec, xi: &Form) -> Result<FunctionSpec> {
    let k = pair_grade(f)?;
    check_argument(f, xi, k + 1, "xi")?;
    FunctionSpec::single(f.n(), k - 1, freeze(f, Family::Xi, xi, Family::Eta))
}
