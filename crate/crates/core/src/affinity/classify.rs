use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::formpoly::{
    find_nonvanishing_point, restrict_line, search_order, Family, FunctionSpec, LineMode,
    LinePolynomial, Signature, Var,
};
use crate::linalg::{self, SparseRow};
use crate::scalar::{self, Scalar};

use super::canonical::{
    extract_ext_coeffs, extract_ext_int_canonical, extract_int_coeffs, CanonicalExt, CanonicalExtInt,
};
use super::transform::hodge_transform;

/// A point `(base, a, b)` at which the coefficient of `t^{t_power}` in
/// `t ↦ f(base + t·dir(a, b))` equals the nonzero `value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub base: Vec<Form>,
    pub a: Form,
    pub b: Form,
    pub t_power: usize,
    #[serde(with = "scalar::serde_scalar")]
    pub value: Scalar,
}

/// A point at which `g''(0) < 0` for `g(t) = f(base + t·dir(a, b))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonConvexityWitness {
    pub base: Vec<Form>,
    pub a: Form,
    pub b: Form,
    #[serde(with = "scalar::serde_scalar")]
    pub second_derivative: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Canonical {
    Ext(CanonicalExt),
    ExtInt(CanonicalExtInt),
}

/// Outcome of a membership test: the canonical representation for members,
/// a witness for non-members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub is_member: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<Canonical>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    fn member(canonical: Canonical) -> Self {
        Verdict { is_member: true, canonical: Some(canonical), witness: None }
    }

    fn refuted(witness: Witness) -> Self {
        Verdict { is_member: false, canonical: None, witness: Some(witness) }
    }
}

fn form_of(n: usize, k: usize, family: Family, point: &BTreeMap<Var, Scalar>) -> Form {
    let terms = point
        .iter()
        .filter(|(v, value)| v.family == family && !value.is_zero())
        .map(|(v, value)| (v.index, value.clone()));
    Form::from_terms(n, k, terms).expect("indices come from symbolic forms")
}

fn assemble(
    f: &FunctionSpec,
    mode: LineMode,
    point: &BTreeMap<Var, Scalar>,
) -> (Vec<Form>, Form, Form) {
    let n = f.n();
    let base = f
        .signature()
        .arguments()
        .into_iter()
        .map(|(family, grade)| form_of(n, grade, family, point))
        .collect();
    let a = form_of(n, 1, Family::A, point);
    let b = form_of(n, mode.b_grade(f.k()), Family::B, point);
    (base, a, b)
}

/// Witness for the first non-affine power of `line`, if any.
pub(crate) fn witness_from_line(f: &FunctionSpec, mode: LineMode, line: &LinePolynomial) -> Option<Witness> {
    let m = line.first_nonaffine_power()?;
    let coefficient = line.coefficient(m);
    let point = find_nonvanishing_point(&coefficient).expect("coefficient is nonzero");
    let value = coefficient.evaluate(&point);
    let (base, a, b) = assemble(f, mode, &point);
    Some(Witness { base, a, b, t_power: m, value })
}

fn directions(mode: LineMode, a: &Form, b: &Form) -> Result<Vec<Form>> {
    Ok(match mode {
        LineMode::Ext => vec![a.wedge(b)?],
        LineMode::Int => vec![a.interior(b)?],
        LineMode::ExtInt => vec![a.wedge(b)?, a.interior(b)?],
    })
}

/// Coefficients of `g(t) = f(base + t·dir)` recovered from exact values at
/// `t = 0..=deg f` by solving the Vandermonde system.
fn interpolate_line(f: &FunctionSpec, base: &[Form], dirs: &[Form]) -> Result<Vec<Scalar>> {
    let deg = f.degree() as usize;
    let mut equations = Vec::with_capacity(deg + 1);
    for t in 0..=deg {
        let t = scalar::int(t as i64);
        let args: Vec<Form> = base
            .iter()
            .zip(dirs)
            .map(|(x, d)| x.add(&d.scale(&t)))
            .collect::<Result<_>>()?;
        let refs: Vec<&Form> = args.iter().collect();
        let value = f.evaluate(&refs)?;
        let mut row = SparseRow::new();
        let mut power = Scalar::one();
        for j in 0..=deg {
            if !power.is_zero() {
                row.insert(j, power.clone());
            }
            power *= &t;
        }
        equations.push((row, value));
    }
    let sol = linalg::solve(equations, deg + 1).ok_or_else(|| Error::Internal("singular interpolation".into()))?;
    Ok(sol.values)
}

/// Recomputes the witnessed `t`-power coefficient by evaluating `f` along the
/// witness line and interpolating.
pub fn replay_witness(f: &FunctionSpec, mode: LineMode, w: &Witness) -> Result<Scalar> {
    mode.check(f.n(), f.signature())?;
    let coeffs = interpolate_line(f, &w.base, &directions(mode, &w.a, &w.b)?)?;
    Ok(coeffs.get(w.t_power).cloned().unwrap_or_else(Scalar::zero))
}

/// Recomputes `g''(0)` along the witness line.
pub fn replay_convexity_witness(f: &FunctionSpec, mode: LineMode, w: &NonConvexityWitness) -> Result<Scalar> {
    mode.check(f.n(), f.signature())?;
    let coeffs = interpolate_line(f, &w.base, &directions(mode, &w.a, &w.b)?)?;
    Ok(coeffs.get(2).cloned().unwrap_or_else(Scalar::zero) * scalar::int(2))
}

fn expect_single(f: &FunctionSpec) -> Result<()> {
    match f.signature() {
        Signature::Single(_) => Ok(()),
        other => Err(Error::SignatureMismatch(format!("expected a single-form function, got {other:?}"))),
    }
}

/// Is `f` affine along every line `ω + t a∧b`?
pub fn is_ext_one_affine(f: &FunctionSpec) -> Result<Verdict> {
    expect_single(f)?;
    let line = restrict_line(f, LineMode::Ext)?;
    match witness_from_line(f, LineMode::Ext, &line) {
        Some(w) => Ok(Verdict::refuted(w)),
        None => Ok(Verdict::member(Canonical::Ext(extract_ext_coeffs(f, false)?))),
    }
}

/// Is `f` affine along every line `ω + t a⌟b`? Decided on the direct
/// restriction and on the Hodge transform, which must agree.
pub fn is_int_one_affine(f: &FunctionSpec) -> Result<Verdict> {
    expect_single(f)?;
    let line = restrict_line(f, LineMode::Int)?;
    let direct = witness_from_line(f, LineMode::Int, &line);
    let via_star = restrict_line(&hodge_transform(f)?, LineMode::Ext)?.first_nonaffine_power().is_none();
    if direct.is_none() != via_star {
        return Err(Error::Internal(
            "int. restriction and ext. restriction of the Hodge transform disagree".into(),
        ));
    }
    match direct {
        Some(w) => Ok(Verdict::refuted(w)),
        None => Ok(Verdict::member(Canonical::Ext(extract_int_coeffs(f, false)?))),
    }
}

/// Is `f` affine along every line `(ξ + t a∧b, η + t a⌟b)`?
pub fn is_ext_int_one_affine(f: &FunctionSpec) -> Result<Verdict> {
    let line = restrict_line(f, LineMode::ExtInt)?;
    match witness_from_line(f, LineMode::ExtInt, &line) {
        Some(w) => Ok(Verdict::refuted(w)),
        None => Ok(Verdict::member(Canonical::ExtInt(extract_ext_int_canonical(f, false)?))),
    }
}

const SPARSE_BUDGET: usize = 50_000;
const RANDOM_SAMPLES: usize = 2_000;

/// Searches for a point where `g''(0) = 2 c_2 < 0`; `None` means no
/// counterexample was found, never that `f` is convex.
///
/// Candidates are tried in a fixed order: points with one to three nonzero
/// coordinates equal to `±1`, then seeded random points in `[-2, 2]`.
pub fn falsify_convexity(f: &FunctionSpec, mode: LineMode) -> Result<Option<NonConvexityWitness>> {
    let line = restrict_line(f, mode)?;
    let c2 = line.coefficient(2);
    if c2.is_zero() {
        return Ok(None);
    }
    let vars = search_order(&c2);
    let found = sparse_points(&vars)
        .take(SPARSE_BUDGET)
        .chain(random_points(&vars))
        .find(|p| c2.evaluate(p).is_negative());
    Ok(found.map(|point| {
        let second_derivative = c2.evaluate(&point) * scalar::int(2);
        let (base, a, b) = assemble(f, mode, &point);
        NonConvexityWitness { base, a, b, second_derivative }
    }))
}

fn sparse_points(vars: &[Var]) -> impl Iterator<Item = BTreeMap<Var, Scalar>> + '_ {
    (1..=3usize.min(vars.len())).flat_map(move |size| {
        combinations(vars.len(), size).flat_map(move |support| {
            (0..1u32 << size).map(move |signs| {
                support
                    .iter()
                    .enumerate()
                    .map(|(bit, &v)| {
                        let value = if signs >> bit & 1 == 0 { 1 } else { -1 };
                        (vars[v], scalar::int(value))
                    })
                    .collect()
            })
        })
    })
}

fn random_points(vars: &[Var]) -> impl Iterator<Item = BTreeMap<Var, Scalar>> + '_ {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    (0..RANDOM_SAMPLES).map(move |_| vars.iter().map(|&v| (v, scalar::int(rng.gen_range(-2..=2)))).collect())
}

/// Index sets of the given size in lexicographic order.
fn combinations(len: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next = Some((0..size).collect::<Vec<_>>());
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut c = current.clone();
        let mut i = size;
        while i > 0 {
            i -= 1;
            if c[i] < len - size + i {
                c[i] += 1;
                for j in i + 1..size {
                    c[j] = c[j - 1] + 1;
                }
                next = Some(c);
                break;
            }
        }
        Some(current)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formpoly::Polynomial;
    use crate::multiindex::MultiIndex;
    use crate::scalar::int;

    fn var(f: Family, idx: &[usize]) -> Polynomial {
        Polynomial::var(Var::new(f, MultiIndex::new(idx).unwrap()))
    }

    fn e(n: usize, idx: &[usize]) -> Form {
        Form::basis(n, MultiIndex::new(idx).unwrap())
    }

    fn pfaffian_square() -> FunctionSpec {
        let w = |i: &[usize]| var(Family::Omega, i);
        let body = w(&[1, 2]).mul(&w(&[3, 4]))
            .sub(&w(&[1, 3]).mul(&w(&[2, 4])))
            .add(&w(&[1, 4]).mul(&w(&[2, 3])))
            .scale(&int(2));
        FunctionSpec::single(4, 2, body).unwrap()
    }

    fn remark_function() -> FunctionSpec {
        FunctionSpec::pair(2, 1, var(Family::Xi, &[1, 2]).mul(&var(Family::Eta, &[]))).unwrap()
    }

    #[test]
    fn combinations_enumerate() {
        let all: Vec<_> = combinations(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(3, 3).count(), 1);
    }

    #[test]
    fn ext_examples() {
        assert!(is_ext_one_affine(&pfaffian_square()).unwrap().is_member);

        let sq = FunctionSpec::single(4, 2, var(Family::Omega, &[1, 2]).pow(2)).unwrap();
        let v = is_ext_one_affine(&sq).unwrap();
        let w = v.witness.unwrap();
        assert!(w.base[0].is_zero());
        assert_eq!(w.a, e(4, &[1]));
        assert_eq!(w.b, e(4, &[2]));
        assert_eq!((w.t_power, w.value.clone()), (2, int(1)));
        assert_eq!(replay_witness(&sq, LineMode::Ext, &w).unwrap(), w.value);

        let lin = FunctionSpec::single(4, 2, var(Family::Omega, &[1, 3]).add(&Polynomial::constant(int(2)))).unwrap();
        assert!(is_ext_one_affine(&lin).unwrap().is_member);
    }

    #[test]
    fn int_examples() {
        let sq = FunctionSpec::single(3, 1, var(Family::Omega, &[1]).pow(2)).unwrap();
        let v = is_int_one_affine(&sq).unwrap();
        assert!(!v.is_member);
        let w = v.witness.unwrap();
        assert_eq!(w.a, e(3, &[2]));
        assert_eq!(w.b, e(3, &[1, 2]));
        assert_eq!(replay_witness(&sq, LineMode::Int, &w).unwrap(), int(1));

        let lin = FunctionSpec::single(3, 1, var(Family::Omega, &[2])).unwrap();
        assert!(is_int_one_affine(&lin).unwrap().is_member);

        // ⟨e^{1234}; (∗ω)^2⟩ coincides with ⟨e^{1234}; ω^2⟩ on Λ^2(R^4)
        let star = crate::affinity::hodge_transform(&pfaffian_square()).unwrap();
        assert_eq!(star, pfaffian_square());
        assert!(is_int_one_affine(&star).unwrap().is_member);
    }

    #[test]
    fn remark_function_is_refuted() {
        let f = remark_function();
        let v = is_ext_int_one_affine(&f).unwrap();
        let w = v.witness.unwrap();
        assert_eq!(w.t_power, 2);
        assert_eq!(w.a, e(2, &[1]));
        assert_eq!(w.b, Form::from_ints(2, 1, &[(&[1], 1), (&[2], 1)]).unwrap());
        assert_eq!(w.value, int(1));
        assert_eq!(replay_witness(&f, LineMode::ExtInt, &w).unwrap(), int(1));
    }

    #[test]
    fn pair_examples() {
        let xi = |i: &[usize]| var(Family::Xi, i);
        let body = xi(&[1, 2]).mul(&xi(&[3, 4]))
            .sub(&xi(&[1, 3]).mul(&xi(&[2, 4])))
            .add(&xi(&[1, 4]).mul(&xi(&[2, 3])))
            .scale(&int(2))
            .add(&var(Family::Eta, &[]).scale(&int(5)));
        assert!(is_ext_int_one_affine(&FunctionSpec::pair(4, 1, body).unwrap()).unwrap().is_member);
        let c = FunctionSpec::constant(4, Signature::Pair(2), int(3)).unwrap();
        assert!(is_ext_int_one_affine(&c).unwrap().is_member);
        assert!(matches!(is_ext_int_one_affine(&pfaffian_square()), Err(Error::SignatureMismatch(_))));
        assert!(matches!(is_ext_one_affine(&c), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn convexity_falsifier() {
        let f = remark_function();
        let w = falsify_convexity(&f, LineMode::ExtInt).unwrap().unwrap();
        assert!(w.second_derivative.is_negative());
        assert_eq!(replay_convexity_witness(&f, LineMode::ExtInt, &w).unwrap(), w.second_derivative);

        let convex = FunctionSpec::pair(3, 1, var(Family::Xi, &[1, 2]).pow(2)).unwrap();
        assert!(falsify_convexity(&convex, LineMode::ExtInt).unwrap().is_none());
        assert!(falsify_convexity(&pfaffian_square(), LineMode::Ext).unwrap().is_none());
    }

    #[test]
    fn verdict_json_shape() {
        let sq = FunctionSpec::single(4, 2, var(Family::Omega, &[1, 2]).pow(2)).unwrap();
        let text = serde_json::to_string(&is_ext_one_affine(&sq).unwrap()).unwrap();
        assert!(text.starts_with(r#"{"is_member":false,"witness":{"base":["#), "{text}");
        assert!(text.contains(r#""t_power":2,"value":"1""#), "{text}");
        let back: Verdict = serde_json::from_str(&text).unwrap();
        assert!(!back.is_member);
    }
}
