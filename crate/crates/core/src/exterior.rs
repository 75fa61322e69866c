//! Sparse exterior algebra `Λ(ℝⁿ)` with exact coefficients.
//!
//! [`Form`] is generic over its coefficient ring so the same wedge, interior,
//! scalar product and Hodge star serve concrete rational forms and forms whose
//! components are polynomials (symbolic bases and directions).
//!
//! Conventions:
//! * the interior product is the adjoint of left exterior multiplication,
//!   `⟨f ⌟ u; β⟩ = ⟨u; f ∧ β⟩`, so `e^S ⌟ e^I = sgn(S, I∖S) e^{I∖S}` when `S ⊆ I`;
//! * the Hodge star is `∗e^I = sgn(I, Iᶜ) e^{Iᶜ}`, giving `u ∧ ∗u = |u|² e^{1..n}`
//!   and `∗∗ = (-1)^{k(n-k)}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, SparseRow};
use crate::multiindex::{self, binomial, complement, sign, MultiIndex, MAX_DIMENSION};
use crate::scalar::{self, Coefficient, Scalar};

/// A homogeneous element of `Λ^k(ℝⁿ)`; absent components are zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form<C = Scalar> {
    n: usize,
    k: usize,
    coeffs: BTreeMap<MultiIndex, C>,
}

impl<C: Coefficient> Form<C> {
    pub fn zero(n: usize, k: usize) -> Self {
        assert!(n <= MAX_DIMENSION, "dimension {n} exceeds {MAX_DIMENSION}");
        Form { n, k, coeffs: BTreeMap::new() }
    }

    /// Grade-0 form holding `value`.
    pub fn scalar(n: usize, value: C) -> Self {
        let mut f = Form::zero(n, 0);
        f.add_term(MultiIndex::EMPTY, value);
        f
    }

    /// The basis form `e^I`.
    pub fn basis(n: usize, index: MultiIndex) -> Self {
        assert!(index.fits(n), "index {index} exceeds dimension {n}");
        let mut f = Form::zero(n, index.len());
        f.add_term(index, C::one());
        f
    }

    /// Builds a form from components, summing repeated indices.
    pub fn from_terms(
        n: usize,
        k: usize,
        terms: impl IntoIterator<Item = (MultiIndex, C)>,
    ) -> Result<Self> {
        if n > MAX_DIMENSION {
            return Err(Error::Validation(format!("dimension {n} exceeds {MAX_DIMENSION}")));
        }
        let mut f = Form::zero(n, k);
        for (index, value) in terms {
            if index.len() != k {
                return Err(Error::GradeMismatch(format!(
                    "component {index} in a form of grade {k}"
                )));
            }
            if !index.fits(n) {
                return Err(Error::Validation(format!(
                    "component {index} exceeds dimension {n}"
                )));
            }
            f.add_term(index, value);
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of nonzero components.
    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn get(&self, index: MultiIndex) -> Option<&C> {
        self.coeffs.get(&index)
    }

    pub fn coeff(&self, index: MultiIndex) -> C {
        self.coeffs.get(&index).cloned().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, &C)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    /// Accumulates `value` into component `index`, dropping it if it cancels.
    pub(crate) fn add_term(&mut self, index: MultiIndex, value: C) {
        if value.is_zero() {
            return;
        }
        match self.coeffs.entry(index) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(&value);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_same_space(&self, other: &Form<C>) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        if self.k != other.k {
            return Err(Error::GradeMismatch(format!("grades {} and {}", self.k, other.k)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Form<C>) -> Result<Form<C>> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (i, c) in other.iter() {
            out.add_term(i, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Form<C>) -> Result<Form<C>> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form<C> {
        self.map(|c| c.clone().negate())
    }

    pub fn scale(&self, factor: &C) -> Form<C> {
        self.map(|c| c.mul_ref(factor))
    }

    /// Applies `f` componentwise, dropping components that become zero.
    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        let mut out = Form::zero(self.n, self.k);
        for (i, c) in self.iter() {
            out.add_term(i, f(c));
        }
        out
    }

    /// Exterior product `self ∧ other`.
    pub fn wedge(&self, other: &Form<C>) -> Result<Form<C>> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut out = Form::zero(self.n, self.k + other.k);
        if self.k + other.k > self.n {
            return Ok(out);
        }
        for (i, u) in self.iter() {
            for (j, v) in other.iter() {
                if i.is_disjoint(j) {
                    out.add_term(i.union(j), u.mul_ref(v).with_sign(sign(i, j)));
                }
            }
        }
        Ok(out)
    }

    /// `self^s`: the unit of `Λ^0` for `s = 0`, otherwise the `s`-fold wedge.
    pub fn wedge_power(&self, s: usize) -> Form<C> {
        let mut acc = Form::scalar(self.n, C::one());
        for _ in 0..s {
            if acc.is_zero() {
                return Form::zero(self.n, self.k * s);
            }
            acc = acc.wedge(self).expect("same dimension");
        }
        acc
    }

    /// Interior product `self ⌟ u`, of grade `u.k - self.k`.
    pub fn interior(&self, u: &Form<C>) -> Result<Form<C>> {
        if self.n != u.n {
            return Err(Error::DimensionMismatch(self.n, u.n));
        }
        if self.k > u.k {
            return Err(Error::GradeMismatch(format!(
                "cannot contract a {}-form into a {}-form",
                self.k, u.k
            )));
        }
        let mut out = Form::zero(self.n, u.k - self.k);
        for (s, f) in self.iter() {
            for (i, v) in u.iter() {
                if s.is_subset(i) {
                    let rest = i.without(s);
                    out.add_term(rest, f.mul_ref(v).with_sign(sign(s, rest)));
                }
            }
        }
        Ok(out)
    }

    /// Scalar product `⟨self; other⟩ = Σ_I self_I other_I`.
    pub fn inner(&self, other: &Form<C>) -> Result<C> {
        self.check_same_space(other)?;
        let mut acc = C::zero();
        let (small, large) = if self.coeffs.len() <= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (i, c) in small.iter() {
            if let Some(d) = large.get(i) {
                acc.add_assign_ref(&c.mul_ref(d));
            }
        }
        Ok(acc)
    }

    /// Hodge star `Λ^k → Λ^{n-k}`.
    pub fn hodge(&self) -> Result<Form<C>> {
        if self.k > self.n {
            return Err(Error::GradeMismatch(format!(
                "Hodge star of a {}-form in dimension {}",
                self.k, self.n
            )));
        }
        let mut out = Form::zero(self.n, self.n - self.k);
        for (i, c) in self.iter() {
            let ic = complement(i, self.n);
            out.add_term(ic, c.clone().with_sign(sign(i, ic)));
        }
        Ok(out)
    }
}

impl Form<Scalar> {
    /// Convenience constructor from integer components.
    pub fn from_ints(n: usize, k: usize, terms: &[(&[usize], i64)]) -> Result<Self> {
        let mut parsed = Vec::with_capacity(terms.len());
        for (idx, v) in terms {
            parsed.push((MultiIndex::new(idx)?, scalar::int(*v)));
        }
        Form::from_terms(n, k, parsed)
    }

    pub fn norm_squared(&self) -> Scalar {
        self.coeffs.values().map(|c| c * c).sum()
    }

    /// Lift to any coefficient ring.
    pub fn lift<D: Coefficient>(&self) -> Form<D> {
        self.map(|c| D::from_scalar(c.clone()))
    }

    /// Tangential/normal splitting `u = x ∧ u_T + u_N` with `x ⌟ u_T = 0` and
    /// `x ⌟ u_N = 0`, where `u_T = (x ⌟ u) / |x|²`.
    pub fn decompose(&self, axis: &Form) -> Result<Decomposition> {
        if axis.k != 1 {
            return Err(Error::GradeMismatch(format!("axis has grade {}, expected 1", axis.k)));
        }
        if self.k == 0 {
            return Err(Error::GradeMismatch("cannot decompose a 0-form".into()));
        }
        let norm = axis.norm_squared();
        if norm.is_zero() {
            return Err(Error::ZeroAxis);
        }
        let tangential = axis.interior(self)?.scale(&(Scalar::one() / norm));
        let normal = self.sub(&axis.wedge(&tangential)?)?;
        Ok(Decomposition { tangential, normal, axis: axis.clone() })
    }

    /// Replaces `(a, b)` by `(a, d)` with `a ∧ d = a ∧ b` and `a ⌟ d = 0`.
    pub fn orthogonalize_direction(a: &Form, b: &Form) -> Result<(Form, Form)> {
        if a.k != 1 {
            return Err(Error::GradeMismatch(format!("first factor has grade {}", a.k)));
        }
        if a.n != b.n {
            return Err(Error::DimensionMismatch(a.n, b.n));
        }
        let norm = a.norm_squared();
        if norm.is_zero() {
            return Err(Error::ZeroAxis);
        }
        if b.k == 0 {
            return Ok((a.clone(), b.clone()));
        }
        let along = a.interior(b)?.scale(&(Scalar::one() / norm));
        let d = b.sub(&a.wedge(&along)?)?;
        Ok((a.clone(), d))
    }

    /// Matrix of `f ↦ f ⌟ self` on `Λ^s`, one sparse row per target component.
    fn contraction_rows(&self, s: usize) -> (Vec<MultiIndex>, Vec<SparseRow>) {
        let sources = multiindex::enumerate(self.n, s);
        let mut rows: BTreeMap<MultiIndex, SparseRow> = BTreeMap::new();
        for (col, &src) in sources.iter().enumerate() {
            for (i, v) in self.iter() {
                if src.is_subset(i) {
                    let rest = i.without(src);
                    rows.entry(rest)
                        .or_default()
                        .insert(col, v * scalar::sign_scalar(sign(src, rest)));
                }
            }
        }
        (sources, rows.into_values().collect())
    }

    /// Basis of `Ann(self, s) = { f ∈ Λ^s : f ⌟ self = 0 }`.
    pub fn annihilator(&self, s: usize) -> Result<Vec<Form>> {
        if s > self.k {
            return Err(Error::GradeMismatch(format!("order {s} exceeds grade {}", self.k)));
        }
        let (sources, rows) = self.contraction_rows(s);
        let basis = linalg::kernel(rows, sources.len());
        basis
            .into_iter()
            .map(|v| Form::from_terms(self.n, s, sources.iter().copied().zip(v)))
            .collect()
    }

    /// `rank_s(self) = C(n, s) - dim Ann(self, s)`.
    pub fn rank(&self, s: usize) -> Result<usize> {
        if s > self.k {
            return Err(Error::GradeMismatch(format!("order {s} exceeds grade {}", self.k)));
        }
        let (sources, rows) = self.contraction_rows(s);
        let r = linalg::rank(rows, sources.len());
        debug_assert!(r <= binomial(self.n, s));
        Ok(r)
    }
}

/// Result of [`Form::decompose`].
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub tangential: Form,
    pub normal: Form,
    pub axis: Form,
}

impl<C: Coefficient + fmt::Display> fmt::Display for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (pos, (i, c)) in self.iter().enumerate() {
            if pos > 0 {
                write!(f, " + ")?;
            }
            if i.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})e{i}")?;
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Form")
            .field("n", &self.n)
            .field("k", &self.k)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct ComponentRepr {
    index: MultiIndex,
    #[serde(with = "scalar::serde_scalar")]
    value: Scalar,
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    n: usize,
    k: usize,
    coeffs: Vec<ComponentRepr>,
}

impl Serialize for Form<Scalar> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormRepr {
            n: self.n,
            k: self.k,
            coeffs: self
                .iter()
                .map(|(index, value)| ComponentRepr { index, value: value.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Form<Scalar> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FormRepr::deserialize(d)?;
        Form::from_terms(repr.n, repr.k, repr.coeffs.into_iter().map(|c| (c.index, c.value)))
            .map_err(serde::de::Error::custom)
    }
}
