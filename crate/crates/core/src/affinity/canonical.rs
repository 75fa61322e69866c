use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::formpoly::{
    restrict_line, symbolic_pairing, symbolic_power, Family, FunctionSpec, LineMode, Monomial,
    Polynomial, PowerBase, Signature, Var,
};
use crate::linalg::{self, SparseRow};
use crate::multiindex::{self, MultiIndex};
use crate::scalar::{self, Coefficient, Scalar};

use super::classify::witness_from_line;
use super::kernel::block_sum;

/// Largest power `r` with `base^r` not identically zero for a base of grade `g`.
fn max_power(n: usize, g: usize) -> usize {
    match g {
        0 => 0,
        g if g % 2 == 1 => (n / g).min(1),
        g => n / g,
    }
}

fn check_coefficients(n: usize, g: usize, name: &str, forms: &[Form]) -> Result<Vec<Form>> {
    let top = n.checked_div(g).unwrap_or(0);
    if forms.len() > top + 1 {
        return Err(Error::Validation(format!(
            "{name} has {} coefficients, at most {} allowed",
            forms.len(),
            top + 1
        )));
    }
    let live = max_power(n, g);
    let mut out = Vec::with_capacity(top + 1);
    for r in 0..=top {
        let form = forms.get(r).cloned().unwrap_or_else(|| Form::zero(n, g * r));
        if form.n() != n || form.k() != g * r {
            return Err(Error::Validation(format!(
                "{name}_{r} must lie in Λ^{}(R^{n}), got Λ^{}(R^{})",
                g * r,
                form.k(),
                form.n()
            )));
        }
        if r > live && !form.is_zero() {
            return Err(Error::Validation(format!(
                "{name}_{r} must vanish: powers of an odd-grade form beyond the first are zero"
            )));
        }
        out.push(form);
    }
    Ok(out)
}

/// `f(ω) = Σ_r ⟨a_r; ω^r⟩`, or `Σ_r ⟨a_r; (∗ω)^r⟩` when `star` is set.
///
/// Coefficients are stored for every `r ≤ ⌊n/g⌋` with `g` the grade of the
/// power base (`k`, or `n-k` with `star`); when `g` is odd the entries from
/// `r = 2` on are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalExt {
    n: usize,
    k: usize,
    star: bool,
    a: Vec<Form>,
}

impl CanonicalExt {
    pub fn new(n: usize, k: usize, star: bool, a: Vec<Form>) -> Result<Self> {
        let g = if star { n.checked_sub(k) } else { Some(k) };
        match g {
            Some(g) if g >= 1 && k <= n => {
                let a = check_coefficients(n, g, "a", &a)?;
                Ok(CanonicalExt { n, k, star, a })
            }
            _ => Err(Error::Validation(format!(
                "no canonical form for grade {k} in dimension {n} (star = {star})"
            ))),
        }
    }

    pub fn zero(n: usize, k: usize, star: bool) -> Result<Self> {
        CanonicalExt::new(n, k, star, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn star(&self) -> bool {
        self.star
    }

    /// Grade of the power base: `k`, or `n - k` over `∗ω`.
    pub fn base_grade(&self) -> usize {
        if self.star {
            self.n - self.k
        } else {
            self.k
        }
    }

    pub fn coefficients(&self) -> &[Form] {
        &self.a
    }

    pub fn a(&self, r: usize) -> Form {
        self.a.get(r).cloned().unwrap_or_else(|| Form::zero(self.n, self.base_grade() * r))
    }

    fn power_base(&self) -> PowerBase {
        if self.star {
            PowerBase::Star(Family::Omega, self.k)
        } else {
            PowerBase::Plain(Family::Omega, self.k)
        }
    }
}

/// `f(ξ, η) = Σ_s ⟨c_s; ξ^s⟩ + Σ_r ⟨d_r; (∗η)^r⟩` with `d_0 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalExtInt {
    n: usize,
    k: usize,
    c: Vec<Form>,
    d: Vec<Form>,
}

impl CanonicalExtInt {
    pub fn new(n: usize, k: usize, c: Vec<Form>, d: Vec<Form>) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::Validation(format!("pair grade needs 1 <= k <= n-1, got k={k}, n={n}")));
        }
        let c = check_coefficients(n, k + 1, "c", &c)?;
        let d = check_coefficients(n, n - k + 1, "d", &d)?;
        if !d[0].is_zero() {
            return Err(Error::Validation("d_0 must be zero; the constant belongs to c_0".into()));
        }
        Ok(CanonicalExtInt { n, k, c, d })
    }

    pub fn zero(n: usize, k: usize) -> Result<Self> {
        CanonicalExtInt::new(n, k, Vec::new(), Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn c(&self) -> &[Form] {
        &self.c
    }

    pub fn d(&self) -> &[Form] {
        &self.d
    }

    /// True when some `c_s` with `s >= 2` is nonzero.
    pub fn nonlinear_in_xi(&self) -> bool {
        self.c.iter().skip(2).any(|f| !f.is_zero())
    }

    /// True when some `d_r` with `r >= 2` is nonzero.
    pub fn nonlinear_in_eta(&self) -> bool {
        self.d.iter().skip(2).any(|f| !f.is_zero())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PowerTerm {
    r: usize,
    form: Form,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct XiTerm {
    s: usize,
    form: Form,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CanonicalExtRepr {
    n: usize,
    k: usize,
    star: bool,
    a: Vec<PowerTerm>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CanonicalExtIntRepr {
    n: usize,
    k: usize,
    c: Vec<XiTerm>,
    d: Vec<PowerTerm>,
}

/// Orders `(power, form)` terms by power, filling gaps with zero forms of
/// grade `g r`.
fn place<T>(n: usize, g: usize, terms: Vec<T>, split: impl Fn(T) -> (usize, Form)) -> Result<Vec<Form>> {
    let mut out: Vec<Option<Form>> = Vec::new();
    for term in terms {
        let (r, form) = split(term);
        if r > n {
            return Err(Error::Validation(format!("power {r} exceeds dimension {n}")));
        }
        if out.len() <= r {
            out.resize(r + 1, None);
        }
        if out[r].replace(form).is_some() {
            return Err(Error::Validation(format!("power {r} listed twice")));
        }
    }
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(r, f)| f.unwrap_or_else(|| Form::zero(n, g * r)))
        .collect())
}

impl Serialize for CanonicalExt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CanonicalExtRepr {
            n: self.n,
            k: self.k,
            star: self.star,
            a: self.a.iter().enumerate().map(|(r, f)| PowerTerm { r, form: f.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CanonicalExt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CanonicalExtRepr::deserialize(d)?;
        let g = if repr.star { repr.n.saturating_sub(repr.k) } else { repr.k };
        let a = place(repr.n, g, repr.a, |t| (t.r, t.form)).map_err(serde::de::Error::custom)?;
        CanonicalExt::new(repr.n, repr.k, repr.star, a).map_err(serde::de::Error::custom)
    }
}

impl Serialize for CanonicalExtInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CanonicalExtIntRepr {
            n: self.n,
            k: self.k,
            c: self.c.iter().enumerate().map(|(s, f)| XiTerm { s, form: f.clone() }).collect(),
            d: self.d.iter().enumerate().map(|(r, f)| PowerTerm { r, form: f.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CanonicalExtInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CanonicalExtIntRepr::deserialize(d)?;
        let n = repr.n;
        let c = place(n, repr.k + 1, repr.c, |t| (t.s, t.form)).map_err(serde::de::Error::custom)?;
        let d = place(n, (n + 1).saturating_sub(repr.k), repr.d, |t| (t.r, t.form))
            .map_err(serde::de::Error::custom)?;
        CanonicalExtInt::new(n, repr.k, c, d).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for CanonicalExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = if self.star { "(*w)" } else { "w" };
        let mut first = true;
        for (r, a) in self.a.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "<{a}; {base}^{r}>")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Display for CanonicalExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let terms = self
            .c
            .iter()
            .enumerate()
            .map(|(s, c)| (c, "xi", s))
            .chain(self.d.iter().enumerate().map(|(r, d)| (d, "(*eta)", r)));
        for (form, base, p) in terms {
            if form.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "<{form}; {base}^{p}>")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Assembles `Σ_r ⟨a_r; ω^r⟩` (or over `∗ω`).
pub fn build_ext(rep: &CanonicalExt) -> FunctionSpec {
    let base = rep.power_base();
    let mut body = Polynomial::zero();
    for (r, a) in rep.a.iter().enumerate() {
        body.add_assign_ref(&symbolic_pairing(a, base, r).expect("grades validated"));
    }
    FunctionSpec::single(rep.n, rep.k, body).expect("variables of the signature")
}

/// Assembles `Σ_s ⟨c_s; ξ^s⟩ + Σ_r ⟨d_r; (∗η)^r⟩`.
pub fn build_ext_int(rep: &CanonicalExtInt) -> FunctionSpec {
    let (g, h) = split_bodies(rep, Family::Xi, Family::Eta);
    FunctionSpec::pair(rep.n, rep.k, g.add(&h)).expect("variables of the signature")
}

fn split_bodies(rep: &CanonicalExtInt, xi: Family, eta: Family) -> (Polynomial, Polynomial) {
    let mut g = Polynomial::zero();
    for (s, c) in rep.c.iter().enumerate() {
        g.add_assign_ref(&symbolic_pairing(c, PowerBase::Plain(xi, rep.k + 1), s).expect("grades validated"));
    }
    let mut h = Polynomial::zero();
    for (r, d) in rep.d.iter().enumerate().skip(1) {
        h.add_assign_ref(&symbolic_pairing(d, PowerBase::Star(eta, rep.k - 1), r).expect("grades validated"));
    }
    (g, h)
}

/// Solves `target = Σ_j x_j columns[j]` exactly by matching monomials.
fn solve_in_basis(target: &Polynomial, columns: &[Polynomial]) -> Result<Vec<Scalar>> {
    let mut rows: BTreeMap<&Monomial, SparseRow> = BTreeMap::new();
    for (j, col) in columns.iter().enumerate() {
        for (m, c) in col.terms() {
            rows.entry(m).or_default().insert(j, c.clone());
        }
    }
    for (m, _) in target.terms() {
        rows.entry(m).or_default();
    }
    let equations: Vec<(SparseRow, Scalar)> =
        rows.into_iter().map(|(m, row)| (row, target.coefficient(m))).collect();
    let sol = linalg::solve(equations, columns.len()).ok_or_else(|| {
        Error::Inconsistent("the polynomial is not in the span of the canonical basis".into())
    })?;
    if !sol.unique {
        return Err(Error::Internal("canonical basis polynomials are linearly dependent".into()));
    }
    Ok(sol.values)
}

fn single_grade(f: &FunctionSpec, mode: LineMode) -> Result<usize> {
    mode.check(f.n(), f.signature())?;
    Ok(f.k())
}

/// Basis columns `(base^r)_I` with their `(r, I)` labels.
fn power_columns(n: usize, base: PowerBase, top: usize) -> (Vec<(usize, MultiIndex)>, Vec<Polynomial>) {
    let g = base.grade(n);
    let mut labels = Vec::new();
    let mut cols = Vec::new();
    for r in 0..=top {
        let power = symbolic_power(n, base, r);
        for i in multiindex::enumerate(n, g * r) {
            labels.push((r, i));
            cols.push(power.coeff(i));
        }
    }
    (labels, cols)
}

fn assert_affine(f: &FunctionSpec, mode: LineMode, class: &'static str) -> Result<()> {
    let line = restrict_line(f, mode)?;
    match witness_from_line(f, mode, &line) {
        Some(witness) => Err(Error::NotAffine { class, witness: Box::new(witness) }),
        None => Ok(()),
    }
}

/// Coefficients `a_r` with `f(ω) = Σ_r ⟨a_r; ω^r⟩`.
pub fn extract_ext_coeffs(f: &FunctionSpec, check_affine: bool) -> Result<CanonicalExt> {
    let k = single_grade(f, LineMode::Ext)?;
    if check_affine {
        assert_affine(f, LineMode::Ext, "ext. one affine")?;
    }
    let n = f.n();
    let base = PowerBase::Plain(Family::Omega, k);
    let (labels, cols) = power_columns(n, base, max_power(n, k));
    let x = solve_in_basis(f.body(), &cols)?;
    let mut a: Vec<Form> = (0..=n / k).map(|r| Form::zero(n, k * r)).collect();
    for ((r, i), v) in labels.into_iter().zip(x) {
        a[r] = a[r].add(&Form::from_terms(n, k * r, [(i, v)])?)?;
    }
    CanonicalExt::new(n, k, false, a)
}

/// Coefficients `a_r` with `f(ω) = Σ_r ⟨a_r; (∗ω)^r⟩`, read off the Hodge
/// transform: `f_∗(φ) = Σ ⟨a'_r; φ^r⟩` gives `a_r = (-1)^{k(n-k) r} a'_r`.
pub fn extract_int_coeffs(f: &FunctionSpec, check_affine: bool) -> Result<CanonicalExt> {
    let k = single_grade(f, LineMode::Int)?;
    if check_affine {
        assert_affine(f, LineMode::Int, "int. one affine")?;
    }
    let n = f.n();
    let transformed = extract_ext_coeffs(&super::hodge_transform(f)?, false)?;
    let flip = (k * (n - k)) % 2 == 1;
    let a = transformed
        .a
        .into_iter()
        .enumerate()
        .map(|(r, a)| if flip && r % 2 == 1 { a.neg() } else { a })
        .collect();
    CanonicalExt::new(n, k, true, a)
}

/// One coefficient `d^{I,J}_{r,s}` of `((∗η)^r)_J (ξ^s)_I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedTerm {
    pub r: usize,
    pub s: usize,
    pub i: MultiIndex,
    pub j: MultiIndex,
    pub value: Scalar,
}

/// Expansion of a pair function over all products `((∗η)^r)_J (ξ^s)_I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtIntCoefficients {
    /// The pure terms (`r = 0` or `s = 0`).
    pub canonical: CanonicalExtInt,
    /// Nonzero coefficients with `r, s >= 1`.
    pub mixed: Vec<MixedTerm>,
}

/// Expresses `f` over the products `((∗η)^r)_J (ξ^s)_I` for all admissible
/// `r, s`, including the mixed ones.
pub fn ext_int_coefficients(f: &FunctionSpec) -> Result<ExtIntCoefficients> {
    let Signature::Pair(k) = f.signature() else {
        return Err(Error::SignatureMismatch(format!("expected a pair function, got {:?}", f.signature())));
    };
    let n = f.n();
    let (xi_labels, xi_cols) = power_columns(n, PowerBase::Plain(Family::Xi, k + 1), max_power(n, k + 1));
    let (eta_labels, eta_cols) =
        power_columns(n, PowerBase::Star(Family::Eta, k - 1), max_power(n, n - k + 1));
    let mut labels = Vec::with_capacity(xi_cols.len() * eta_cols.len());
    let mut cols = Vec::with_capacity(labels.capacity());
    for (el, ec) in eta_labels.iter().zip(&eta_cols) {
        for (xl, xc) in xi_labels.iter().zip(&xi_cols) {
            labels.push((*el, *xl));
            cols.push(ec.mul(xc));
        }
    }
    let x = solve_in_basis(f.body(), &cols)?;
    let mut c: Vec<Form> = (0..=n / (k + 1)).map(|s| Form::zero(n, (k + 1) * s)).collect();
    let mut d: Vec<Form> = (0..=n / (n - k + 1)).map(|r| Form::zero(n, (n - k + 1) * r)).collect();
    let mut mixed = Vec::new();
    for (((r, j), (s, i)), v) in labels.into_iter().zip(x) {
        if v.is_zero() {
            continue;
        }
        if r == 0 {
            c[s] = c[s].add(&Form::from_terms(n, (k + 1) * s, [(i, v)])?)?;
        } else if s == 0 {
            d[r] = d[r].add(&Form::from_terms(n, (n - k + 1) * r, [(j, v)])?)?;
        } else {
            mixed.push(MixedTerm { r, s, i, j, value: v });
        }
    }
    Ok(ExtIntCoefficients { canonical: CanonicalExtInt::new(n, k, c, d)?, mixed })
}

/// Canonical representation of an ext-int. one affine pair function. Fails
/// with an internal error if a mixed coefficient survives.
pub fn extract_ext_int_canonical(f: &FunctionSpec, check_affine: bool) -> Result<CanonicalExtInt> {
    if check_affine {
        assert_affine(f, LineMode::ExtInt, "ext-int. one affine")?;
    }
    let all = ext_int_coefficients(f)?;
    if let Some(m) = all.mixed.first() {
        return Err(Error::Internal(format!(
            "mixed coefficient d^{{{},{}}}_{{{},{}}} = {} does not vanish",
            m.i, m.j, m.r, m.s, m.value
        )));
    }
    Ok(all.canonical)
}

/// `f_s(ξ₁, η)` for the block sum `ξ₁` of `I`, where `f_s` is the part of `f`
/// homogeneous of degree `s` in `ξ`. For an ext-int. one affine `f` this is
/// `s! c_s^I`, constant in `η`.
pub fn probe_c_s(f: &FunctionSpec, s: usize, index: MultiIndex) -> Result<Polynomial> {
    let Signature::Pair(k) = f.signature() else {
        return Err(Error::SignatureMismatch(format!("expected a pair function, got {:?}", f.signature())));
    };
    if s == 0 || index.len() != (k + 1) * s || !index.fits(f.n()) {
        return Err(Error::GradeMismatch(format!(
            "probe index {index} must have grade (k+1)s = {}",
            (k + 1) * s
        )));
    }
    let xi1 = block_sum(f.n(), index, k + 1);
    let part = f.body().homogeneous_part(|v| v.family == Family::Xi, s as u32);
    let values: BTreeMap<Var, Scalar> = multiindex::enumerate(f.n(), k + 1)
        .into_iter()
        .map(|i| (Var::new(Family::Xi, i), xi1.coeff(i)))
        .collect();
    Ok(part.substitute_values(&values))
}

/// Which clause of the splitting statement applies at `(n, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitCase {
    /// `n <= 2k-2`: `g` affine, `h` int. one affine.
    I,
    /// `n ∈ {2k-1, 2k, 2k+1}` or `k`, `n` both even: `g`, `h` affine.
    II,
    /// `n >= 2k+2`: `g` ext. one affine, `h` affine.
    III,
}

impl SplitCase {
    /// Case II takes precedence where it overlaps case I or III (`k`, `n` even).
    pub fn of(n: usize, k: usize) -> SplitCase {
        if (2 * k).abs_diff(n) <= 1 || (k.is_multiple_of(2) && n.is_multiple_of(2)) {
            SplitCase::II
        } else if n + 2 <= 2 * k {
            SplitCase::I
        } else {
            SplitCase::III
        }
    }
}

impl fmt::Display for SplitCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SplitCase::I => "I",
            SplitCase::II => "II",
            SplitCase::III => "III",
        };
        f.write_str(name)
    }
}

/// `f = g(ξ) + h(η)` with `g` on `Λ^{k+1}` and `h` on `Λ^{k-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitGH {
    pub g: FunctionSpec,
    pub h: FunctionSpec,
    pub case: SplitCase,
}

/// Splits a canonical representation and checks the degree bounds of its case.
pub fn split_g_h(rep: &CanonicalExtInt) -> Result<SplitGH> {
    let (g, h) = split_bodies(rep, Family::Omega, Family::Omega);
    let g = FunctionSpec::single(rep.n, rep.k + 1, g)?;
    let h = FunctionSpec::single(rep.n, rep.k - 1, h)?;
    let case = SplitCase::of(rep.n, rep.k);
    let check = |name: &str, f: &FunctionSpec| {
        if f.degree() > 1 {
            Err(Error::DegreeViolation(format!(
                "case {case} at (n, k) = ({}, {}) needs {name} affine, got degree {}",
                rep.n,
                rep.k,
                f.degree()
            )))
        } else {
            Ok(())
        }
    };
    match case {
        SplitCase::I => check("g", &g)?,
        SplitCase::II => {
            check("g", &g)?;
            check("h", &h)?;
        }
        SplitCase::III => check("h", &h)?,
    }
    Ok(SplitGH { g, h, case })
}

fn random_form(rng: &mut ChaCha8Rng, n: usize, k: usize, bound: i64) -> Form {
    let terms: Vec<(MultiIndex, Scalar)> = multiindex::enumerate(n, k)
        .into_iter()
        .filter_map(|i| {
            let v = rng.gen_range(-bound..=bound);
            (v != 0).then(|| (i, scalar::int(v)))
        })
        .collect();
    Form::from_terms(n, k, terms).expect("enumerated indices")
}

/// Seeded random canonical pair representation with integer coefficients in
/// `[-bound, bound]`, respecting all conventions of [`CanonicalExtInt`].
pub fn random_canonical(n: usize, k: usize, seed: u64, bound: i64) -> Result<CanonicalExtInt> {
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("pair grade needs 1 <= k <= n-1, got k={k}, n={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = (0..=max_power(n, k + 1)).map(|s| random_form(&mut rng, n, (k + 1) * s, bound)).collect();
    let mut d = vec![Form::zero(n, 0)];
    d.extend((1..=max_power(n, n - k + 1)).map(|r| random_form(&mut rng, n, (n - k + 1) * r, bound)));
    CanonicalExtInt::new(n, k, c, d)
}

/// Seeded random canonical single-form representation over `ω` or `∗ω`.
pub fn random_canonical_ext(n: usize, k: usize, star: bool, seed: u64, bound: i64) -> Result<CanonicalExt> {
    let g = if star { n.saturating_sub(k) } else { k };
    if g == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "no canonical form for grade {k} in dimension {n} (star = {star})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = (0..=max_power(n, g)).map(|r| random_form(&mut rng, n, g * r, bound)).collect();
    CanonicalExt::new(n, k, star, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn e(n: usize, idx: &[usize]) -> Form {
        Form::basis(n, MultiIndex::new(idx).unwrap())
    }

    fn omega(idx: &[usize]) -> Polynomial {
        Polynomial::var(Var::new(Family::Omega, MultiIndex::new(idx).unwrap()))
    }

    #[test]
    fn extract_examples() {
        let f = FunctionSpec::single(4, 2, omega(&[1, 2]).mul(&omega(&[3, 4]))
            .sub(&omega(&[1, 3]).mul(&omega(&[2, 4])))
            .add(&omega(&[1, 4]).mul(&omega(&[2, 3])))
            .scale(&int(2)))
        .unwrap();
        let rep = extract_ext_coeffs(&f, true).unwrap();
        assert!(rep.a(0).is_zero());
        assert!(rep.a(1).is_zero());
        assert_eq!(rep.a(2), e(4, &[1, 2, 3, 4]));
        assert_eq!(build_ext(&rep), f);

        let c = FunctionSpec::single(4, 2, Polynomial::constant(int(7))).unwrap();
        let rep = extract_ext_coeffs(&c, true).unwrap();
        assert_eq!(rep.a(0), Form::scalar(4, int(7)));
        assert!(rep.a(1).is_zero() && rep.a(2).is_zero());

        let lin = omega(&[1, 2]).scale(&int(3)).sub(&omega(&[3, 4])).add(&Polynomial::constant(int(1)));
        let rep = extract_ext_coeffs(&FunctionSpec::single(4, 2, lin).unwrap(), true).unwrap();
        assert_eq!(rep.a(0), Form::scalar(4, int(1)));
        assert_eq!(rep.a(1), Form::from_ints(4, 2, &[(&[1, 2], 3), (&[3, 4], -1)]).unwrap());
    }

    #[test]
    fn extract_rejects_non_affine() {
        let f = FunctionSpec::single(4, 2, omega(&[1, 2]).pow(2)).unwrap();
        match extract_ext_coeffs(&f, true) {
            Err(Error::NotAffine { witness, .. }) => {
                assert_eq!(witness.t_power, 2);
                assert_eq!(witness.value, int(1));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(extract_ext_coeffs(&f, false), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn extract_int_examples() {
        // ⟨e^{1234}; (∗ω)^2⟩ on Λ^2(R^4)
        let rep = CanonicalExt::new(4, 2, true, vec![Form::zero(4, 0), Form::zero(4, 2), e(4, &[1, 2, 3, 4])])
            .unwrap();
        let f = build_ext(&rep);
        assert_eq!(extract_int_coeffs(&f, true).unwrap(), rep);
        // (∗ω)_1 on Λ^2(R^3): ∗ω = ω_23 e^1 - ω_13 e^2 + ω_12 e^3
        let f = FunctionSpec::single(3, 2, omega(&[2, 3])).unwrap();
        let rep = extract_int_coeffs(&f, true).unwrap();
        assert_eq!(rep.a(1), e(3, &[1]));
        assert!(rep.a(0).is_zero());
    }

    #[test]
    fn ext_int_examples() {
        let xi = |idx: &[usize]| Polynomial::var(Var::new(Family::Xi, MultiIndex::new(idx).unwrap()));
        let eta = Polynomial::var(Var::new(Family::Eta, MultiIndex::EMPTY));
        let pf = xi(&[1, 2]).mul(&xi(&[3, 4]))
            .sub(&xi(&[1, 3]).mul(&xi(&[2, 4])))
            .add(&xi(&[1, 4]).mul(&xi(&[2, 3])))
            .scale(&int(2));
        let f = FunctionSpec::pair(4, 1, pf.add(&eta.scale(&int(3)))).unwrap();
        let rep = extract_ext_int_canonical(&f, true).unwrap();
        assert_eq!(rep.c()[2], e(4, &[1, 2, 3, 4]));
        assert_eq!(rep.d()[1], e(4, &[1, 2, 3, 4]).scale(&int(3)));
        assert!(rep.c()[0].is_zero() && rep.c()[1].is_zero());

        // ⟨e^{1234}; (∗η)^2⟩ with k = 3, n = 4
        let rep = CanonicalExtInt::new(4, 3, vec![], vec![Form::zero(4, 0), Form::zero(4, 2), e(4, &[1, 2, 3, 4])])
            .unwrap();
        let f = build_ext_int(&rep);
        let back = extract_ext_int_canonical(&f, true).unwrap();
        assert_eq!(back, rep);
        assert!(back.c().iter().skip(1).all(Form::is_zero));
    }

    #[test]
    fn build_pair_small() {
        let rep = CanonicalExtInt::new(2, 1, vec![Form::zero(2, 0), e(2, &[1, 2])], vec![Form::zero(2, 0), e(2, &[1, 2])])
            .unwrap();
        let f = build_ext_int(&rep);
        let xi = Polynomial::var(Var::new(Family::Xi, MultiIndex::new(&[1, 2]).unwrap()));
        let eta = Polynomial::var(Var::new(Family::Eta, MultiIndex::EMPTY));
        assert_eq!(f.body(), &xi.add(&eta));
        assert!(build_ext_int(&CanonicalExtInt::zero(2, 1).unwrap()).body().is_zero());
    }

    #[test]
    fn mixed_terms_are_reported() {
        // ξ_12 η is representable over products but is not of canonical shape
        let xi = Polynomial::var(Var::new(Family::Xi, MultiIndex::new(&[1, 2]).unwrap()));
        let eta = Polynomial::var(Var::new(Family::Eta, MultiIndex::EMPTY));
        let f = FunctionSpec::pair(2, 1, xi.mul(&eta)).unwrap();
        let all = ext_int_coefficients(&f).unwrap();
        assert_eq!(all.mixed.len(), 1);
        assert_eq!((all.mixed[0].r, all.mixed[0].s), (1, 1));
        assert!(matches!(extract_ext_int_canonical(&f, false), Err(Error::Internal(_))));
        assert!(matches!(extract_ext_int_canonical(&f, true), Err(Error::NotAffine { .. })));
    }

    #[test]
    fn probe_recovers_c_s() {
        for (n, k, seed) in [(4, 1, 3), (6, 1, 5), (5, 2, 1)] {
            let rep = random_canonical(n, k, seed, 3).unwrap();
            let f = build_ext_int(&rep);
            for (s, c) in rep.c().iter().enumerate().skip(1) {
                for i in multiindex::enumerate(n, (k + 1) * s) {
                    let probe = probe_c_s(&f, s, i).unwrap();
                    let expected = c.coeff(i) * scalar::factorial(s);
                    assert_eq!(probe, Polynomial::constant(expected), "n={n} k={k} s={s} I={i}");
                }
            }
        }
    }

    #[test]
    fn split_cases() {
        assert_eq!(SplitCase::of(4, 1), SplitCase::III);
        assert_eq!(SplitCase::of(4, 3), SplitCase::I);
        assert_eq!(SplitCase::of(2, 1), SplitCase::II);
        assert_eq!(SplitCase::of(6, 2), SplitCase::II);
        assert_eq!(SplitCase::of(6, 4), SplitCase::II);
        assert_eq!(SplitCase::of(7, 5), SplitCase::I);
        assert_eq!(SplitCase::of(7, 2), SplitCase::III);
        let rep = random_canonical(4, 1, 0, 2).unwrap();
        let split = split_g_h(&rep).unwrap();
        assert_eq!(split.case, SplitCase::III);
        assert!(split.h.degree() <= 1);
    }

    #[test]
    fn random_shapes() {
        let rep = random_canonical(2, 1, 1, 3).unwrap();
        assert_eq!(rep.c().len(), 2);
        assert_eq!(rep.d().len(), 2);
        let rep = random_canonical(6, 1, 2, 3).unwrap();
        assert_eq!(rep.c().len(), 4);
        assert_eq!(rep.c()[3].k(), 6);
        assert_eq!(random_canonical(4, 1, 7, 3).unwrap(), random_canonical(4, 1, 7, 3).unwrap());
        let ext = random_canonical_ext(5, 3, false, 0, 2).unwrap();
        assert!(ext.coefficients().iter().skip(2).all(Form::is_zero));
    }

    #[test]
    fn json_round_trip() {
        let rep = random_canonical(4, 1, 11, 3).unwrap();
        let text = serde_json::to_string(&rep).unwrap();
        let back: CanonicalExtInt = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rep);
        let ext = random_canonical_ext(4, 2, true, 3, 2).unwrap();
        let text = serde_json::to_string(&ext).unwrap();
        let back: CanonicalExt = serde_json::from_str(&text).unwrap();
        assert_eq!(back, ext);
        let sparse = r#"{"n":4,"k":1,"c":[{"s":2,"form":{"n":4,"k":4,"coeffs":[{"index":[1,2,3,4],"value":"1"}]}}],"d":[]}"#;
        let rep: CanonicalExtInt = serde_json::from_str(sparse).unwrap();
        assert_eq!(rep.c()[2], e(4, &[1, 2, 3, 4]));
        assert!(rep.c()[1].is_zero() && rep.c()[1].k() == 2);
    }
}
