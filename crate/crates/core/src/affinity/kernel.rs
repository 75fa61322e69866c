use std::collections::BTreeMap;


use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::formpoly::{
    symbolic_direction, symbolic_form, symbolic_pairing, Family, LineMode, Monomial, Polynomial,
    PowerBase,
};
use crate::linalg::{self, SparseRow};
use crate::multiindex::{self, sign, MultiIndex};
use crate::scalar::{self, Coefficient, Scalar};

/// Integer components `(index, value)` of one form.
pub type IntTerms<'a> = &'a [(&'a [usize], i64)];

/// Forms `D^A ∈ Λ^{kp}` indexed by `A ∈ T^1_{k-1}`, each with `e^1 ⌟ D^A = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffFamilyD {
    n: usize,
    k: usize,
    p: usize,
    members: BTreeMap<MultiIndex, Form>,
}

fn check_params(n: usize, k: usize, p: usize) -> Result<()> {
    if k == 0 || k > n || p == 0 {
        return Err(Error::InvalidArgument(format!(
            "coefficient families need 1 <= k <= n and p >= 1, got n={n}, k={k}, p={p}"
        )));
    }
    Ok(())
}

impl CoeffFamilyD {
    pub fn new(n: usize, k: usize, p: usize, members: BTreeMap<MultiIndex, Form>) -> Result<Self> {
        check_params(n, k, p)?;
        let mut kept = BTreeMap::new();
        for (a, d) in members {
            if a.len() != k - 1 || a.contains(1) || !a.fits(n) {
                return Err(Error::Validation(format!("{a} is not in T^1_{} for n = {n}", k - 1)));
            }
            if d.n() != n || d.k() != k * p {
                return Err(Error::Validation(format!(
                    "D^{a} must lie in Λ^{}(R^{n}), got Λ^{}(R^{})",
                    k * p,
                    d.k(),
                    d.n()
                )));
            }
            if d.iter().any(|(i, _)| i.contains(1)) {
                return Err(Error::Validation(format!("D^{a} is not annihilated by e^1")));
            }
            if !d.is_zero() {
                kept.insert(a, d);
            }
        }
        Ok(CoeffFamilyD { n, k, p, members: kept })
    }

    /// Convenience constructor from integer components.
    pub fn from_ints(n: usize, k: usize, p: usize, members: &[(&[usize], IntTerms)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (a, terms) in members {
            map.insert(MultiIndex::new(a)?, Form::from_ints(n, k * p, terms)?);
        }
        CoeffFamilyD::new(n, k, p, map)
    }

    pub fn zero(n: usize, k: usize, p: usize) -> Result<Self> {
        CoeffFamilyD::new(n, k, p, BTreeMap::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, a: MultiIndex) -> Form {
        self.members.get(&a).cloned().unwrap_or_else(|| Form::zero(self.n, self.k * self.p))
    }

    /// Nonzero members in index order.
    pub fn members(&self) -> impl Iterator<Item = (MultiIndex, &Form)> {
        self.members.iter().map(|(a, d)| (*a, d))
    }

    pub fn indices(&self) -> Vec<MultiIndex> {
        multiindex::enumerate_excluding(self.n, self.k - 1, 1)
    }

    /// `F_p(ω, α) = Σ_A ⟨D^A; ω^{p-1} ∧ α⟩ ⟨α; e^1 ∧ e^A⟩` over any
    /// coefficient ring.
    fn apply<C: Coefficient>(&self, omega: &Form<C>, alpha: &Form<C>) -> C {
        let wedge = omega.wedge_power(self.p - 1).wedge(alpha).expect("same dimension");
        let mut acc = C::zero();
        for (a, d) in self.members() {
            let Some(alpha_1a) = alpha.get(a.union(MultiIndex::single(1))) else {
                continue;
            };
            let mut pairing = C::zero();
            for (s, v) in d.iter() {
                if let Some(w) = wedge.get(s) {
                    pairing.add_assign_ref(&w.mul_ref(&C::from_scalar(v.clone())));
                }
            }
            acc.add_assign_ref(&pairing.mul_ref(alpha_1a));
        }
        acc
    }
}

/// Exact value of `F_p(ω, α)`.
pub fn eval_f_p(d: &CoeffFamilyD, omega: &Form, alpha: &Form) -> Result<Scalar> {
    for (name, x) in [("omega", omega), ("alpha", alpha)] {
        if x.n() != d.n || x.k() != d.k {
            return Err(Error::GradeMismatch(format!(
                "{name} must lie in Λ^{}(R^{}), got Λ^{}(R^{})",
                d.k,
                d.n,
                x.k(),
                x.n()
            )));
        }
    }
    Ok(d.apply(omega, alpha))
}

/// `F_p(ω, ω)` (diagonal) or `F_p(ω, a∧b)` as a polynomial in symbolic
/// `ω`, `a`, `b`.
pub fn f_p_symbolic(d: &CoeffFamilyD, diagonal: bool) -> Polynomial {
    let omega = symbolic_form(d.n, d.k, Family::Omega);
    if diagonal {
        d.apply(&omega, &omega)
    } else {
        let (_, ab) = symbolic_direction(d.n, d.k, LineMode::Ext).remove(0);
        d.apply(&omega, &ab)
    }
}

/// Basis of all families `{D^A}` in `Λ^{kp}` with `e^1 ⌟ D^A = 0` and
/// `F_p(ω, a∧b) = 0` identically.
pub fn solve_d_kernel(n: usize, k: usize, p: usize) -> Result<Vec<CoeffFamilyD>> {
    check_params(n, k, p)?;
    let heads = multiindex::enumerate_excluding(n, k - 1, 1);
    let tails = multiindex::enumerate_excluding(n, k * p, 1);
    let omega = symbolic_form(n, k, Family::Omega);
    let (_, ab) = symbolic_direction(n, k, LineMode::Ext).remove(0);
    let wedge = omega.wedge_power(p - 1).wedge(&ab)?;
    // unknown (A, S) ↦ column A * |tails| + S; its polynomial is (ω^{p-1}∧ab)_S (ab)_{1A}
    let mut rows: BTreeMap<Monomial, SparseRow> = BTreeMap::new();
    for (ai, a) in heads.iter().enumerate() {
        let Some(q) = ab.get(a.union(MultiIndex::single(1))) else { continue };
        for (si, s) in tails.iter().enumerate() {
            let Some(w) = wedge.get(*s) else { continue };
            let col = ai * tails.len() + si;
            for (m, c) in w.mul(q).terms() {
                rows.entry(m.clone()).or_default().insert(col, c.clone());
            }
        }
    }
    let ncols = heads.len() * tails.len();
    let basis = linalg::kernel(rows.into_values(), ncols);
    basis
        .into_iter()
        .map(|x| {
            let mut members = BTreeMap::new();
            for (ai, a) in heads.iter().enumerate() {
                let terms = tails
                    .iter()
                    .enumerate()
                    .map(|(si, s)| (*s, x[ai * tails.len() + si].clone()))
                    .filter(|(_, v)| !v.is_zero());
                members.insert(*a, Form::from_terms(n, k * p, terms)?);
            }
            CoeffFamilyD::new(n, k, p, members)
        })
        .collect()
}

/// Outcome of one family of relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: &'static str,
    pub cases: usize,
    pub first_failure: Option<String>,
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalityReport {
    pub relations: Vec<RelationCheck>,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(RelationCheck::passed)
    }
}

/// Checks, over every admissible index tuple, the relations satisfied by a
/// degree-one kernel family:
/// * `e^R ⌟ D^S + e^S ⌟ D^R = 0` for `R, S ∈ T^1_{k-1}`;
/// * `e^j ⌟ D^J = 0` for `j ∈ {1} ∪ J`;
/// * `sgn(I, J)⟨D^I; e^J⟩ = (-1)^k sgn(R, S)⟨D^R; e^S⟩` whenever
///   `I ∪ J = R ∪ S` with both unions disjoint.
pub fn check_orthogonality(d: &CoeffFamilyD) -> Result<OrthogonalityReport> {
    if d.p != 1 {
        return Err(Error::InvalidArgument(format!("orthogonality relations need p = 1, got p = {}", d.p)));
    }
    let (n, k) = (d.n, d.k);
    let heads = d.indices();

    let mut symmetric = RelationCheck { name: "e^R _| D^S + e^S _| D^R = 0", cases: 0, first_failure: None };
    for (x, r) in heads.iter().enumerate() {
        for s in &heads[x..] {
            symmetric.cases += 1;
            let er = Form::basis(n, *r);
            let es = Form::basis(n, *s);
            let sum = er.interior(&d.member(*s))?.add(&es.interior(&d.member(*r))?)?;
            if !sum.is_zero() && symmetric.first_failure.is_none() {
                symmetric.first_failure = Some(format!("R={r}, S={s}: sum is {sum}"));
            }
        }
    }

    let mut own = RelationCheck { name: "e^j _| D^J = 0 for j in {1} u J", cases: 0, first_failure: None };
    for j_index in &heads {
        let dj = d.member(*j_index);
        for j in std::iter::once(1).chain(j_index.iter()) {
            own.cases += 1;
            let c = Form::basis(n, MultiIndex::single(j)).interior(&dj)?;
            if !c.is_zero() && own.first_failure.is_none() {
                own.first_failure = Some(format!("J={j_index}, j={j}: contraction is {c}"));
            }
        }
    }

    let mut exchange = RelationCheck {
        name: "sgn(I,J)<D^I;e^J> = (-1)^k sgn(R,S)<D^R;e^S>",
        cases: 0,
        first_failure: None,
    };
    let parity = if k % 2 == 0 { 1 } else { -1 };
    for u in multiindex::enumerate(n, 2 * k - 1) {
        let splits: Vec<(MultiIndex, Scalar)> = u
            .subsets(k - 1)
            .into_iter()
            .filter(|i| !i.contains(1))
            .map(|i| {
                let j = u.without(i);
                let v = d.member(i).coeff(j) * scalar::sign_scalar(sign(i, j));
                (i, v)
            })
            .collect();
        for (i, vi) in &splits {
            for (r, vr) in &splits {
                exchange.cases += 1;
                if *vi != vr * scalar::sign_scalar(parity) && exchange.first_failure.is_none() {
                    exchange.first_failure = Some(format!(
                        "I={i}, J={}, R={r}, S={}: {vi} vs {}",
                        u.without(*i),
                        u.without(*r),
                        vr * scalar::sign_scalar(parity)
                    ));
                }
            }
        }
    }

    Ok(OrthogonalityReport { relations: vec![symmetric, own, exchange] })
}

/// `H_p = (1/(p+1)) Σ_I α_I e^I` with `α_{R∪S} = sgn(R, S)⟨D^R; e^S⟩`; zero for
/// odd `k`. Fails if two splittings of one index disagree.
pub fn construct_h_p(d: &CoeffFamilyD) -> Result<Form> {
    let (n, k, p) = (d.n, d.k, d.p);
    let grade = k * p + k - 1;
    if k % 2 == 1 || grade > n {
        return Ok(Form::zero(n, grade));
    }
    let mut alpha: BTreeMap<MultiIndex, (Scalar, MultiIndex, MultiIndex)> = BTreeMap::new();
    for r in d.indices() {
        let dr = d.member(r);
        for s in multiindex::enumerate_excluding(n, k * p, 1) {
            if !r.is_disjoint(s) {
                continue;
            }
            let value = dr.coeff(s) * scalar::sign_scalar(sign(r, s));
            let i = r.union(s);
            match alpha.get(&i) {
                Some((seen, r0, s0)) if *seen != value => {
                    return Err(Error::IllDefinedAlpha(format!(
                        "alpha_{i} is {seen} from (R, S) = ({r0}, {s0}) but {value} from ({r}, {s})"
                    )));
                }
                Some(_) => {}
                None => {
                    alpha.insert(i, (value, r, s));
                }
            }
        }
    }
    let scale = Scalar::new(1.into(), ((p + 1) as i64).into());
    Form::from_terms(n, grade, alpha.into_iter().map(|(i, (v, _, _))| (i, v * &scale)))
}

/// Does `F_p(ω, ω) = ⟨e^1 ∧ H; ω^{p+1}⟩` hold as a polynomial identity?
pub fn h_p_identity_holds(d: &CoeffFamilyD, h: &Form) -> Result<bool> {
    let lhs = f_p_symbolic(d, true);
    let e1h = Form::basis(d.n, MultiIndex::single(1)).wedge(h)?;
    let rhs = symbolic_pairing(&e1h, PowerBase::Plain(Family::Omega, d.k), d.p + 1)?;
    Ok(lhs == rhs)
}

/// `Σ e^{block}` over consecutive blocks of `g` indices of `q`.
pub(crate) fn block_sum(n: usize, q: MultiIndex, g: usize) -> Form {
    let indices = q.to_vec();
    let terms = indices
        .chunks(g)
        .map(|block| (MultiIndex::new(block).expect("sub-block of a multi-index"), Scalar::from_integer(1.into())));
    Form::from_terms(n, g, terms).expect("blocks fit the dimension")
}

/// A `k`-form `ω` with `ω^{p-1} = (p-1)! e^Q`: the sum of the consecutive
/// `k`-blocks of `Q`.
pub fn power_preimage(n: usize, q: MultiIndex, k: usize, p: usize) -> Result<Form> {
    if p < 2 || k == 0 || q.len() != (p - 1) * k || !q.fits(n) {
        return Err(Error::GradeMismatch(format!(
            "need p >= 2 and |Q| = (p-1)k within R^{n}; got |Q| = {}, k = {k}, p = {p}",
            q.len()
        )));
    }
    if p >= 3 && k % 2 == 1 {
        return Err(Error::GradeMismatch(format!("powers beyond the first of odd {k}-forms vanish")));
    }
    Ok(block_sum(n, q, k))
}
