use std::collections::BTreeMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::formpoly::{restrict_line, Family, FunctionSpec, LineMode, Monomial, Polynomial, Signature, Var};
use crate::linalg::{self, SparseRow};
use crate::multiindex::{self, MultiIndex};
use crate::scalar::Scalar;

/// A finite-dimensional space of polynomials on `Λ^k(ℝ^n)`, given by a basis
/// expressed in the monomials of degree at most `max_degree`.
#[derive(Clone, Debug)]
pub struct PolynomialSpace {
    pub n: usize,
    pub k: usize,
    pub max_degree: u32,
    monomials: Vec<Monomial>,
    basis: Vec<SparseRow>,
}

impl PolynomialSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> Vec<Polynomial> {
        self.basis.iter().map(|row| self.polynomial(row)).collect()
    }

    fn polynomial(&self, row: &SparseRow) -> Polynomial {
        Polynomial::from_terms(row.iter().map(|(&c, v)| (self.monomials[c].clone(), v.clone())))
    }

    /// Highest degree reached by some element of the space.
    pub fn top_degree(&self) -> Option<u32> {
        self.basis.iter().filter_map(|row| self.polynomial(row).degree()).max()
    }

    /// Does the space contain `p`?
    pub fn contains(&self, p: &Polynomial) -> bool {
        let index: BTreeMap<&Monomial, usize> = self.monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut target = SparseRow::new();
        for (m, c) in p.terms() {
            match index.get(m) {
                Some(&i) => {
                    target.insert(i, c.clone());
                }
                None => return false,
            }
        }
        let mut ech = linalg::Echelon::new(self.monomials.len());
        for row in &self.basis {
            ech.insert(row.clone());
        }
        !ech.insert(target)
    }
}

/// All monomials of degree `<= degree` in the components of `ω ∈ Λ^k(ℝ^n)`.
fn monomials_up_to(n: usize, k: usize, degree: u32) -> Vec<Monomial> {
    let vars: Vec<Var> = multiindex::enumerate(n, k).into_iter().map(|i| Var::new(Family::Omega, i)).collect();
    let mut out = vec![Monomial::one()];
    let mut layer = vec![(Monomial::one(), 0usize)];
    for _ in 0..degree {
        let mut next = Vec::new();
        for (m, first) in &layer {
            for (j, v) in vars.iter().enumerate().skip(*first) {
                next.push((m.mul(&Monomial::var(*v)), j));
            }
        }
        out.extend(next.iter().map(|(m, _)| m.clone()));
        layer = next;
    }
    out
}

/// The space of polynomials of degree `<= degree` on `Λ^k(ℝ^n)` that are
/// affine along every line of the given mode (`Ext` or `Int`).
pub fn affine_function_space(n: usize, k: usize, mode: LineMode, degree: u32) -> Result<PolynomialSpace> {
    if mode == LineMode::ExtInt {
        return Err(Error::InvalidArgument("function spaces are built for single-form modes".into()));
    }
    mode.check(n, Signature::Single(k))?;
    let monomials = monomials_up_to(n, k, degree);
    let mut rows: BTreeMap<(usize, Monomial), SparseRow> = BTreeMap::new();
    for (col, m) in monomials.iter().enumerate() {
        if m.degree() < 2 {
            continue;
        }
        let f = FunctionSpec::single(n, k, Polynomial::from_terms([(m.clone(), Scalar::from_integer(1.into()))]))?;
        let line = restrict_line(&f, mode)?;
        for power in 2..=line.degree() {
            for (mono, c) in line.coefficient(power).terms() {
                rows.entry((power, mono.clone())).or_default().insert(col, c.clone());
            }
        }
    }
    let basis = linalg::kernel(rows.into_values(), monomials.len())
        .into_iter()
        .map(|x| x.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect())
        .collect();
    Ok(PolynomialSpace { n, k, max_degree: degree, monomials, basis })
}

/// Polynomials of degree `<= degree` that are both ext. and int. one affine.
pub fn common_affine_space(n: usize, k: usize, degree: u32) -> Result<PolynomialSpace> {
    let ext = affine_function_space(n, k, LineMode::Ext, degree)?;
    let int = affine_function_space(n, k, LineMode::Int, degree)?;
    let basis = linalg::span_intersection(&ext.basis, &int.basis);
    Ok(PolynomialSpace { basis, ..ext })
}

/// Checks `f(ω) = f(ω_N) + Σ_J ω_{1J} (f(ω_N + e^{1J}) - f(ω_N))`, where
/// `ω_N` drops every component containing the index 1.
pub fn normal_splitting_holds(f: &FunctionSpec) -> Result<bool> {
    let k = match f.signature() {
        Signature::Single(k) if k >= 1 => k,
        other => {
            return Err(Error::SignatureMismatch(format!("expected a single form of grade >= 1, got {other:?}")))
        }
    };
    let n = f.n();
    let tangential = |v: Var| v.family == Family::Omega && v.index.contains(1);
    let at = |unit: Option<MultiIndex>| {
        f.body().substitute(|v| {
            if !tangential(v) {
                None
            } else if Some(v.index) == unit {
                Some(Polynomial::constant(Scalar::from_integer(1.into())))
            } else {
                Some(Polynomial::zero())
            }
        })
    };
    let normal = at(None);
    let mut rhs = normal.clone();
    let one = MultiIndex::single(1);
    for j in multiindex::enumerate_excluding(n, k - 1, 1) {
        let idx = one.union(j);
        let jump = at(Some(idx)).sub(&normal);
        rhs = rhs.add(&Polynomial::var(Var::new(Family::Omega, idx)).mul(&jump));
    }
    Ok(&rhs == f.body())
}
