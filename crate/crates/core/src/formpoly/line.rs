use std::cell::RefCell;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::multiindex::{self, MultiIndex};
use crate::scalar::Coefficient;

use super::function::{FunctionSpec, Signature};
use super::polynomial::{Family, Polynomial, Var};

/// Which family of rank-one-type lines a function is restricted to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LineMode {
    /// `ω + t a∧b` on `Λ^k`.
    Ext,
    /// `ω + t a⌟b` on `Λ^k`.
    Int,
    /// `(ξ + t a∧b, η + t a⌟b)` on `Λ^{k+1} × Λ^{k-1}`.
    ExtInt,
}

impl LineMode {
    /// Grade of the second direction factor `b`.
    pub fn b_grade(self, k: usize) -> usize {
        match self {
            LineMode::Ext => k - 1,
            LineMode::Int => k + 1,
            LineMode::ExtInt => k,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LineMode::Ext => "ext",
            LineMode::Int => "int",
            LineMode::ExtInt => "ext-int",
        }
    }

    /// Checks the mode against a signature.
    pub fn check(self, n: usize, signature: Signature) -> Result<()> {
        match (self, signature) {
            (LineMode::Ext, Signature::Single(k)) if k >= 1 => Ok(()),
            (LineMode::Int, Signature::Single(k)) if k < n => Ok(()),
            (LineMode::ExtInt, Signature::Pair(_)) => Ok(()),
            _ => Err(Error::SignatureMismatch(format!(
                "mode {} does not apply to {signature:?} in dimension {n}",
                self.name()
            ))),
        }
    }
}

/// Fully symbolic form whose `I` component is the variable `family_I`.
pub fn symbolic_form(n: usize, k: usize, family: Family) -> Form<Polynomial> {
    Form::from_terms(
        n,
        k,
        multiindex::enumerate(n, k).into_iter().map(|i| (i, Polynomial::var(Var::new(family, i)))),
    )
    .expect("enumerated indices are valid")
}

/// Symbolic directions `a ∧ b` or `a ⌟ b` with `a`, `b` fully symbolic.
pub fn symbolic_direction(n: usize, k: usize, mode: LineMode) -> Vec<(Family, Form<Polynomial>)> {
    let a = symbolic_form(n, 1, Family::A);
    let b = symbolic_form(n, mode.b_grade(k), Family::B);
    let wedge = || a.wedge(&b).expect("same dimension");
    let inner = || a.interior(&b).expect("grades checked by mode");
    match mode {
        LineMode::Ext => vec![(Family::Omega, wedge())],
        LineMode::Int => vec![(Family::Omega, inner())],
        LineMode::ExtInt => vec![(Family::Xi, wedge()), (Family::Eta, inner())],
    }
}

/// `g(t)` as coefficients of `t^0, t^1, ...`, each a polynomial in the base
/// and direction variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LinePolynomial {
    pub coefficients: Vec<Polynomial>,
}

impl LinePolynomial {
    /// Degree in `t`; 0 for the zero line.
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn coefficient(&self, m: usize) -> Polynomial {
        self.coefficients.get(m).cloned().unwrap_or_else(Polynomial::zero)
    }

    /// Lowest power `>= 2` with a nonzero coefficient.
    pub fn first_nonaffine_power(&self) -> Option<usize> {
        (2..self.coefficients.len()).find(|&m| !self.coefficients[m].is_zero())
    }
}

/// Substitutes the symbolic line into `f` and collects powers of `t`.
pub fn restrict_line(f: &FunctionSpec, mode: LineMode) -> Result<LinePolynomial> {
    mode.check(f.n(), f.signature())?;
    let t = Polynomial::var(Var::T);
    let dirs = symbolic_direction(f.n(), f.k(), mode);
    let image = |v: Var| {
        let (_, dir) = dirs.iter().find(|(fam, _)| *fam == v.family)?;
        let shift = dir.get(v.index).map(|c| c.mul(&t)).unwrap_or_else(Polynomial::zero);
        Some(Polynomial::var(v).add(&shift))
    };
    let line = f.body().substitute(image);
    Ok(LinePolynomial { coefficients: line.collect_powers(Var::T) })
}

/// The symbolic object whose powers are paired against coefficient forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PowerBase {
    /// The symbolic form of the given grade in the family (e.g. `ξ`).
    Plain(Family, usize),
    /// Hodge star of that symbolic form (e.g. `∗η`).
    Star(Family, usize),
}

impl PowerBase {
    pub fn grade(self, n: usize) -> usize {
        match self {
            PowerBase::Plain(_, g) => g,
            PowerBase::Star(_, g) => n - g,
        }
    }

    fn form(self, n: usize) -> Form<Polynomial> {
        match self {
            PowerBase::Plain(fam, g) => symbolic_form(n, g, fam),
            PowerBase::Star(fam, g) => symbolic_form(n, g, fam).hodge().expect("grade <= n"),
        }
    }
}

thread_local! {
    static POWER_CACHE: RefCell<HashMap<(usize, PowerBase, usize), Form<Polynomial>>> =
        RefCell::new(HashMap::new());
}

/// `base^s` for a symbolic base, memoized per thread.
pub fn symbolic_power(n: usize, base: PowerBase, s: usize) -> Form<Polynomial> {
    if let Some(hit) = POWER_CACHE.with(|c| c.borrow().get(&(n, base, s)).cloned()) {
        return hit;
    }
    let power = if s == 0 {
        Form::scalar(n, Polynomial::one())
    } else {
        symbolic_power(n, base, s - 1).wedge(&base.form(n)).expect("same dimension")
    };
    POWER_CACHE.with(|c| c.borrow_mut().insert((n, base, s), power.clone()));
    power
}

/// Expands `⟨c; base^s⟩` into a polynomial in the base variables.
pub fn symbolic_pairing(c: &Form, base: PowerBase, s: usize) -> Result<Polynomial> {
    let n = c.n();
    let g = match base {
        PowerBase::Plain(_, g) | PowerBase::Star(_, g) => g,
    };
    if g > n {
        return Err(Error::GradeMismatch(format!("base grade {g} exceeds dimension {n}")));
    }
    let expected = base.grade(n) * s;
    if c.k() != expected {
        return Err(Error::GradeMismatch(format!(
            "coefficient has grade {}, pairing with power {s} needs {expected}",
            c.k()
        )));
    }
    if c.is_zero() || expected > n {
        return Ok(Polynomial::zero());
    }
    let power = symbolic_power(n, base, s);
    let mut out = Polynomial::zero();
    for (i, value) in c.iter() {
        if let Some(p) = power.get(i) {
            out.add_assign_ref(&p.scale(value));
        }
    }
    Ok(out)
}

/// Components of `(∗φ)` written through the components of `φ`:
/// `(∗φ)_I = sgn(Iᶜ, I) φ_{Iᶜ}`.
pub fn star_component(n: usize, index: MultiIndex) -> (i32, MultiIndex) {
    let ic = multiindex::complement(index, n);
    (multiindex::sign(ic, index), ic)
}
