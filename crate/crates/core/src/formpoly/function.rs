use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::multiindex::{MultiIndex, MAX_DIMENSION};
use crate::scalar::{self, Scalar};

use super::polynomial::{Family, Monomial, Polynomial, Var};

/// Domain of a function: `Λ^k → ℝ` or `Λ^{k+1} × Λ^{k-1} → ℝ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Signature {
    Single(usize),
    Pair(usize),
}

impl Signature {
    pub fn k(self) -> usize {
        match self {
            Signature::Single(k) | Signature::Pair(k) => k,
        }
    }

    /// Argument families with their grades, in argument order.
    pub fn arguments(self) -> Vec<(Family, usize)> {
        match self {
            Signature::Single(k) => vec![(Family::Omega, k)],
            Signature::Pair(k) => vec![(Family::Xi, k + 1), (Family::Eta, k - 1)],
        }
    }

    pub fn grade_of(self, family: Family) -> Option<usize> {
        self.arguments().into_iter().find(|(f, _)| *f == family).map(|(_, g)| g)
    }
}

/// A polynomial function of the components of its form arguments.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionSpec {
    n: usize,
    signature: Signature,
    body: Polynomial,
}

impl FunctionSpec {
    pub fn new(n: usize, signature: Signature, body: Polynomial) -> Result<Self> {
        if n == 0 || n > MAX_DIMENSION {
            return Err(Error::Validation(format!("dimension {n} outside 1..={MAX_DIMENSION}")));
        }
        match signature {
            Signature::Single(k) if k > n => {
                return Err(Error::Validation(format!("grade {k} exceeds dimension {n}")));
            }
            Signature::Pair(k) if k == 0 || k >= n => {
                return Err(Error::Validation(format!(
                    "pair signature needs 1 <= k <= n-1, got k={k}, n={n}"
                )));
            }
            _ => {}
        }
        for v in body.variables() {
            let grade = signature.grade_of(v.family).ok_or_else(|| {
                Error::Validation(format!("variable {v} is not an argument of {signature:?}"))
            })?;
            if v.index.len() != grade || !v.index.fits(n) {
                return Err(Error::Validation(format!(
                    "variable {v} must carry a grade-{grade} index within 1..={n}"
                )));
            }
        }
        Ok(FunctionSpec { n, signature, body })
    }

    pub fn single(n: usize, k: usize, body: Polynomial) -> Result<Self> {
        FunctionSpec::new(n, Signature::Single(k), body)
    }

    pub fn pair(n: usize, k: usize, body: Polynomial) -> Result<Self> {
        FunctionSpec::new(n, Signature::Pair(k), body)
    }

    pub fn constant(n: usize, signature: Signature, value: Scalar) -> Result<Self> {
        FunctionSpec::new(n, signature, Polynomial::constant(value))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.signature.k()
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn body(&self) -> &Polynomial {
        &self.body
    }

    /// Total degree, 0 for the zero function.
    pub fn degree(&self) -> u32 {
        self.body.degree().unwrap_or(0)
    }

    /// Variable assignment placing the components of `args` on the
    /// signature's families.
    pub fn assignment(&self, args: &[&Form]) -> Result<BTreeMap<Var, Scalar>> {
        let expected = self.signature.arguments();
        if args.len() != expected.len() {
            return Err(Error::SignatureMismatch(format!(
                "{:?} takes {} argument(s), got {}",
                self.signature,
                expected.len(),
                args.len()
            )));
        }
        let mut values = BTreeMap::new();
        for ((family, grade), form) in expected.into_iter().zip(args) {
            if form.n() != self.n || form.k() != grade {
                return Err(Error::SignatureMismatch(format!(
                    "argument {} expects Λ^{grade}(R^{}), got Λ^{}(R^{})",
                    family.name(),
                    self.n,
                    form.k(),
                    form.n()
                )));
            }
            for (index, value) in form.iter() {
                values.insert(Var::new(family, index), value.clone());
            }
        }
        Ok(values)
    }

    /// Exact value at the given arguments.
    pub fn evaluate(&self, args: &[&Form]) -> Result<Scalar> {
        Ok(self.body.evaluate(&self.assignment(args)?))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&FunctionRepr::from(self)).expect("serializable")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&FunctionRepr::from(self)).expect("serializable")
    }

    /// Parses the JSON function format; reports the failing field path on
    /// malformed input and a validation error for inconsistent grades.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let repr: FunctionRepr = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Parse(format!("at `{path}`: {}", e.into_inner()))
        })?;
        repr.try_into()
    }
}

/// The message of an error without its category prefix.
fn detail(e: Error) -> String {
    match e {
        Error::Parse(m) | Error::Validation(m) => m,
        other => other.to_string(),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VarRepr {
    family: String,
    index: Vec<usize>,
    power: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRepr {
    coeff: String,
    vars: Vec<VarRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionRepr {
    n: usize,
    k: usize,
    signature: String,
    terms: Vec<TermRepr>,
}

impl From<&FunctionSpec> for FunctionRepr {
    fn from(f: &FunctionSpec) -> Self {
        let (signature, k) = match f.signature {
            Signature::Single(k) => ("single", k),
            Signature::Pair(k) => ("pair", k),
        };
        FunctionRepr {
            n: f.n,
            k,
            signature: signature.to_string(),
            terms: f
                .body
                .terms()
                .map(|(m, c)| TermRepr {
                    coeff: scalar::format_scalar(c),
                    vars: m
                        .factors()
                        .iter()
                        .map(|(v, e)| VarRepr {
                            family: v.family.name().to_string(),
                            index: v.index.to_vec(),
                            power: *e,
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<FunctionRepr> for FunctionSpec {
    type Error = Error;

    fn try_from(repr: FunctionRepr) -> Result<Self> {
        let signature = match repr.signature.as_str() {
            "single" => Signature::Single(repr.k),
            "pair" => Signature::Pair(repr.k),
            other => {
                return Err(Error::Parse(format!(
                    "at `signature`: expected \"single\" or \"pair\", got {other:?}"
                )))
            }
        };
        let mut body = Polynomial::zero();
        for (t, term) in repr.terms.into_iter().enumerate() {
            let coeff = scalar::parse_scalar(&term.coeff)
                .map_err(|e| Error::Parse(format!("at `terms[{t}].coeff`: {}", detail(e))))?;
            let mut factors = Vec::with_capacity(term.vars.len());
            for (j, v) in term.vars.into_iter().enumerate() {
                let family = match v.family.as_str() {
                    "xi" => Family::Xi,
                    "eta" => Family::Eta,
                    "omega" => Family::Omega,
                    other => {
                        return Err(Error::Parse(format!(
                            "at `terms[{t}].vars[{j}].family`: unknown family {other:?}"
                        )))
                    }
                };
                let index = MultiIndex::new(&v.index).map_err(|e| {
                    Error::Validation(format!("at `terms[{t}].vars[{j}].index`: {}", detail(e)))
                })?;
                if v.power == 0 {
                    return Err(Error::Validation(format!(
                        "at `terms[{t}].vars[{j}].power`: power must be positive"
                    )));
                }
                factors.push((Var::new(family, index), v.power));
            }
            body.add_term(Monomial::from_factors(factors), coeff);
        }
        FunctionSpec::new(repr.n, signature, body)
    }
}
