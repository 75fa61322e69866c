//! Named verification suites. Each suite checks one family of identities
//! exactly over enumerated or seeded random cases and reports every failing
//! case; a suite passes iff its failure list is empty.

use std::fmt::Display;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::affinity::{
    self, build_ext, build_ext_int, check_orthogonality, common_affine_space, construct_h_p,
    ext_int_coefficients, extract_ext_coeffs, extract_int_coeffs, fix_eta, fix_xi, h_p_identity_holds,
    hodge_transform, is_ext_int_one_affine, is_ext_one_affine, is_int_one_affine, normal_splitting_holds,
    power_preimage, random_canonical, random_canonical_ext, replay_witness, solve_d_kernel, split_g_h,
    Canonical, SplitCase, Verdict,
};
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::formpoly::{Family, FunctionSpec, LineMode, Polynomial, Var};
use crate::multiindex::{self, merge_sign, remove_at, sign, MultiIndex};
use crate::scalar::{self, Coefficient, Scalar};

pub const SUITES: &[&str] = &[
    "prop21", "lemma41", "lemma44", "lemma45", "thm51", "cor52", "thm53", "thm54", "cor55", "remark36", "lemma35",
];

const BOUND: i64 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteParams {
    pub n: usize,
    pub k: Option<usize>,
    pub p: Option<usize>,
    pub seed: u64,
    pub cases: usize,
}

impl SuiteParams {
    pub fn new(n: usize) -> Self {
        SuiteParams { n, k: None, p: None, seed: 0, cases: 100 }
    }

    pub fn k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn p(mut self, p: usize) -> Self {
        self.p = Some(p);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn cases(mut self, cases: usize) -> Self {
        self.cases = cases;
        self
    }

    fn need_k(&self, suite: &str) -> Result<usize> {
        self.k.ok_or_else(|| Error::InvalidArgument(format!("suite {suite} needs k")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub cases_run: usize,
    pub failures: Vec<Failure>,
    /// Not serialized: reports are byte-identical across runs.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

type Outcome = std::result::Result<(), String>;

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("error: {e}"))
}

fn expect_eq<T: PartialEq + Display>(got: T, expected: T) -> Outcome {
    if got == expected {
        Ok(())
    } else {
        Err(got.to_string())
    }
}

struct Collector {
    cases_run: usize,
    failures: Vec<Failure>,
}

impl Collector {
    fn new() -> Self {
        Collector { cases_run: 0, failures: Vec::new() }
    }

    fn case(&mut self, id: impl Into<String>, expected: impl Into<String>, outcome: Outcome) {
        self.cases_run += 1;
        if let Err(got) = outcome {
            self.failures.push(Failure { case: id.into(), expected: expected.into(), got });
        }
    }
}

/// Runs a suite by name.
pub fn run_suite(name: &str, params: &SuiteParams) -> Result<Report> {
    if params.n == 0 || params.n > 12 {
        return Err(Error::InvalidArgument(format!("n must lie in 1..=12, got {}", params.n)));
    }
    let start = Instant::now();
    let mut c = Collector::new();
    match name {
        "prop21" => prop21(params, &mut c),
        "lemma41" => lemma41(params, &mut c)?,
        "lemma44" => lemma44(params, &mut c)?,
        "lemma45" => lemma45(params, &mut c)?,
        "thm51" => thm51(params, &mut c)?,
        "cor52" => cor52(params, &mut c)?,
        "thm53" => thm53(params, &mut c)?,
        "thm54" => thm54(params, &mut c)?,
        "cor55" => cor55(params, &mut c)?,
        "remark36" => remark36(&mut c),
        "lemma35" => lemma35(params, &mut c)?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown suite {other:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    }
    c.failures.sort_by(|a, b| a.case.cmp(&b.case));
    Ok(Report { suite: name.to_string(), cases_run: c.cases_run, failures: c.failures, wall_time: start.elapsed() })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_form(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Form {
    let terms = multiindex::enumerate(n, k)
        .into_iter()
        .filter_map(|i| {
            let v = rng.gen_range(-BOUND..=BOUND);
            (v != 0).then(|| (i, scalar::int(v)))
        })
        .collect::<Vec<_>>();
    Form::from_terms(n, k, terms).expect("enumerated indices")
}

fn random_index(rng: &mut ChaCha8Rng, n: usize, k: usize) -> MultiIndex {
    let mut pool: Vec<usize> = (1..=n).collect();
    pool.shuffle(rng);
    MultiIndex::new(&{
        let mut v = pool[..k].to_vec();
        v.sort_unstable();
        v
    })
    .expect("distinct indices")
}

/// Parity of the permutation sorting `seq`, by counting inversions pairwise.
fn inversion_parity(seq: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn prop21(params: &SuiteParams, c: &mut Collector) {
    let n = params.n;
    let mut rng = rng(params.seed);
    for case in 0..params.cases {
        let id = |what: &str| format!("n={n}/{case:04}/{what}");
        // three disjoint parts
        let mut pool: Vec<usize> = (1..=n).collect();
        pool.shuffle(&mut rng);
        let cut1 = rng.gen_range(0..=n);
        let cut2 = rng.gen_range(cut1..=n);
        let cut3 = rng.gen_range(cut2..=n);
        let parts: Vec<Vec<usize>> = vec![pool[..cut1].to_vec(), pool[cut1..cut2].to_vec(), pool[cut2..cut3].to_vec()];
        let idx: Vec<MultiIndex> = parts
            .iter()
            .map(|p| {
                let mut v = p.clone();
                v.sort_unstable();
                MultiIndex::new(&v).expect("distinct")
            })
            .collect();
        let (i1, i2, i3) = (idx[0], idx[1], idx[2]);
        let concat: Vec<usize> = [i1, i2, i3].iter().flat_map(|i| i.to_vec()).collect();
        let oracle = inversion_parity(&concat);
        let merged = merge_sign(&idx).expect("disjoint parts");
        c.case(id("merge"), format!("sign {oracle}"), expect_eq(merged.sign, oracle));
        let right = sign(i2, i3) * sign(i1, i2.union(i3));
        let left = sign(i1, i2) * sign(i1.union(i2), i3);
        c.case(id("assoc-right"), format!("sign {oracle}"), expect_eq(right, oracle));
        c.case(id("assoc-left"), format!("sign {oracle}"), expect_eq(left, oracle));
        let swap = if (i1.len() * i2.len()) % 2 == 0 { 1 } else { -1 };
        c.case(id("swap"), format!("{}", swap * sign(i2, i1)), expect_eq(sign(i1, i2), swap * sign(i2, i1)));

        // positional signs on a random index
        let k = rng.gen_range(1..=n);
        let full = random_index(&mut rng, n, k);
        for mu in 1..=k {
            let single = MultiIndex::single(full.at(mu).expect("position in range"));
            let rest = remove_at(full, mu).expect("position in range");
            let back = if (k - mu) % 2 == 0 { 1 } else { -1 };
            let front = if (mu - 1) % 2 == 0 { 1 } else { -1 };
            c.case(id(&format!("pos-back-{mu}")), back.to_string(), expect_eq(sign(rest, single), back));
            c.case(id(&format!("pos-front-{mu}")), front.to_string(), expect_eq(sign(single, rest), front));
        }

        // expansion of the wedge product
        let ku = rng.gen_range(0..=n);
        let kv = rng.gen_range(0..=n - ku);
        let u = random_form(&mut rng, n, ku);
        let v = random_form(&mut rng, n, kv);
        let w = u.wedge(&v).expect("same dimension");
        let mut bad = None;
        for i in multiindex::enumerate(n, ku + kv) {
            let mut expected = Scalar::zero();
            for r in i.subsets(ku) {
                let s = i.without(r);
                let ordered: Vec<usize> = r.iter().chain(s.iter()).collect();
                expected += u.coeff(r) * v.coeff(s) * scalar::sign_scalar(inversion_parity(&ordered));
            }
            if w.coeff(i) != expected {
                bad = Some(format!("component {i}: {} vs {expected}", w.coeff(i)));
                break;
            }
        }
        c.case(id("expansion"), "componentwise expansion", bad.map_or(Ok(()), Err));
    }
}

fn lemma41(params: &SuiteParams, c: &mut Collector) -> Result<()> {
    let n = params.n;
    let mut rng = rng(params.seed);
    for case in 0..params.cases {
        let k = params.k.unwrap_or_else(|| rng.gen_range(1..=n));
        if k == 0 || k > n {
            return Err(Error::InvalidArgument(format!("need 1 <= k <= n, got k={k}")));
        }
        let omega = random_form(&mut rng, n, k);
        let mut x = random_form(&mut rng, n, 1);
        if x.is_zero() {
            x = Form::basis(n, MultiIndex::single(rng.gen_range(1..=n)));
        }
        let id = format!("n={n}/k={k}/{case:04}");
        let outcome = (|| {
            let d = lib(omega.decompose(&x))?;
            let rebuilt = lib(x.wedge(&d.tangential).and_then(|w| w.add(&d.normal)))?;
            if rebuilt != omega {
                return Err(format!("x^T + N = {rebuilt}"));
            }
            // for k = 1 the tangential part is a scalar and the condition is vacuous
            if d.tangential.k() >= 1 {
                let xt = lib(x.interior(&d.tangential))?;
                if !xt.is_zero() {
                    return Err(format!("x _| T = {xt}"));
                }
            }
            let xn = lib(x.interior(&d.normal))?;
            if !xn.is_zero() {
                return Err(format!("x _| N = {xn}"));
            }
            // with a unit axis the tangential part is the plain contraction
            let e = Form::basis(n, MultiIndex::single(1));
            let de = lib(omega.decompose(&e))?;
            let contraction = lib(e.interior(&omega))?;
            if de.tangential != contraction {
                return Err(format!("T(e1) = {} but e1 _| omega = {contraction}", de.tangential));
            }
            Ok(())
        })();
        c.case(id, "omega = x^T + N, x _| T = 0, x _| N = 0", outcome);
    }
    Ok(())
}

fn kernel_expected_trivial(n: usize, k: usize) -> bool {
    k % 2 == 1 || 2 * k > n
}

fn lemma44(params: &SuiteParams, c: &mut Collector) -> Result<()> {
    let n = params.n;
    let ks: Vec<usize> = match params.k {
        Some(k) => vec![k],
        None => (1..=n).collect(),
    };
    for k in ks {
        let basis = solve_d_kernel(n, k, 1)?;
        let id = format!("n={n}/k={k}");
        if kernel_expected_trivial(n, k) {
            c.case(format!("{id}/trivial"), "dim 0", expect_eq(basis.len(), 0));
        }
        for (b, d) in basis.iter().enumerate() {
            let report = check_orthogonality(d)?;
            for (r, rel) in report.relations.iter().enumerate() {
                c.case(
                    format!("{id}/basis{b:03}/relation{r}"),
                    format!("{} ({} cases)", rel.name, rel.cases),
                    rel.first_failure.clone().map_or(Ok(()), Err),
                );
            }
        }
    }
    Ok(())
}

fn lemma45(params: &SuiteParams, c: &mut Collector) -> Result<()> {
    let n = params.n;
    let k = params.need_k("lemma45")?;
    let p = params.p.unwrap_or(1);
    let basis = solve_d_kernel(n, k, p)?;
    let id = format!("n={n}/k={k}/p={p}");
    for (b, d) in basis.iter().enumerate() {
        let outcome = (|| {
            let h = lib(construct_h_p(d))?;
            if h.iter().any(|(i, _)| i.contains(1)) {
                return Err(format!("e1 _| H nonzero: H = {h}"));
            }
            if !lib(h_p_identity_holds(d, &h))? {
                return Err(format!("identity fails for H = {h}"));
            }
            Ok(())
        })();
        c.case(format!("{id}/basis{b:03}"), "F_p(w,w) = <e1^H; w^(p+1)>", outcome);
    }
    if p >= 2 && (p == 2 || k % 2 == 0) && (p - 1) * k <= n {
        let factor = scalar::factorial(p - 1);
        for q in multiindex::enumerate(n, (p - 1) * k) {
            let outcome = lib(power_preimage(n, q, k, p)).and_then(|w| {
                let expected = Form::basis(n, q).scale(&factor);
                let got = w.wedge_power(p - 1);
                if got == expected {
                    Ok(())
                } else {
                    Err(got.to_string())
                }
            });
            c.case(format!("{id}/preimage{q}"), format!("{factor} e^{q}"), outcome);
        }
    }
    Ok(())
}

fn coordinate(family: Family, index: MultiIndex) -> Polynomial {
    Polynomial::var(Var::new(family, index))
}

/// `f + c x_I^2` for a random coordinate `x_I` of the given family and grade.
fn perturb(f: &FunctionSpec, rng: &mut ChaCha8Rng, family: Family, grade: usize) -> Result<FunctionSpec> {
    let i = random_index(rng, f.n(), grade);
    let mut cf = 0;
    while cf == 0 {
        cf = rng.gen_range(-BOUND..=BOUND);
    }
    let x = coordinate(family, i);
    let body = f.body().add(&x.mul(&x).scale(&scalar::int(cf)));
    FunctionSpec::new(f.n(), f.signature(), body)
}

fn check_refuted(f: &FunctionSpec, mode: LineMode, verdict: &Verdict) -> Outcome {
    if verdict.is_member {
        return Err("classified as member".into());
    }
    let w = verdict.witness.as_ref().ok_or("no witness")?;
    if w.t_power < 2 || w.value.is_zero() {
        return Err(format!("degenerate witness t^{} value {}", w.t_power, w.value));
    }
    let replayed = lib(replay_witness(f, mode, w))?;
    expect_eq(replayed, w.value.clone())
}

fn single_round_trip(params: &SuiteParams, c: &mut Collector, star: bool) -> Result<()> {
    let n = params.n;
    let suite = if star { "cor52" } else { "thm51" };
    let k = params.need_k(suite)?;
    let mode = if star { LineMode::Int } else { LineMode::Ext };
    let mut rng = rng(params.seed);
    for case in 0..params.cases {
        let rep = random_canonical_ext(n, k, star, params.seed.wrapping_add(case as u64), BOUND)?;
        let f = build_ext(&rep);
        let id = format!("n={n}/k={k}/{case:04}");
        let outcome = (|| {
            let verdict = lib(if star { is_int_one_affine(&f) } else { is_ext_one_affine(&f) })?;
            if verdict.canonical != Some(Canonical::Ext(rep.clone())) {
                return Err(format!("verdict {}", serde_json::to_string(&verdict).unwrap_or_default()));
            }
            let again = lib(if star { extract_int_coeffs(&f, true) } else { extract_ext_coeffs(&f, true) })?;
            if again != rep {
                return Err(format!("extracted {again}"));
            }
            if star {
                let g = lib(hodge_transform(&f))?;
                if !lib(is_ext_one_affine(&g))?.is_member {
                    return Err("Hodge transform is not ext. one affine".into());
                }
                let gg = lib(hodge_transform(&g))?;
                let s = if (k * (n - k)).is_multiple_of(2) { 1 } else { -1 };
                let expected = f.body().substitute(|v| Some(Polynomial::var(v).with_sign(s)));
                if gg.body() != &expected {
                    return Err(format!("double transform {}", gg.body()));
                }
            } else if k >= 1 && !lib(normal_splitting_holds(&f))? {
                return Err("normal splitting identity fails".into());
            }
            Ok(())
        })();
        c.case(format!("{id}/round-trip"), format!("member with canonical {rep}"), outcome);

        let perturbed = perturb(&f, &mut rng, Family::Omega, k)?;
        let outcome = lib(if star { is_int_one_affine(&perturbed) } else { is_ext_one_affine(&perturbed) })
            .and_then(|v| check_refuted(&perturbed, mode, &v));
        c.case(format!("{id}/perturbed"), "non-member with replayable witness", outcome);
    }
    Ok(())
}

fn thm51(params: &SuiteParams, c: &mut Collector) -> Result<()> {
    single_round_trip(params, c, false)
}

fn cor52(params: &SuiteParams, c: &mut Collector) -> Result<()> {
    single_round_trip(params, c, true)
}

/// `⟨e^{1..2k}; ω∧ω⟩` on `Λ^k(ℝ^{2k})`.
pub fn middle_grade_square(k: usize) -> FunctionSpec {
    let n = 2 * k;
    let rep = affinity::CanonicalExt::new(
        n,
        k,
        false,
        vec![Form::zero(n, 0), Form::zero(n, k), Form::basis(n, MultiIndex::full(n))],
    )
    .expect("valid grades for even k");
    build_ext(&rep)
}

fn thm53(params: &SuiteParams, c: &mut Collector) -> Result<()> {
    let n = params.n;
    let k = params.need_k("thm53")?;
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= n-1, got k={k}")));
    }
    let degree = (n / k).max(n / (n - k)) as u32;
    let space = common_affine_space(n, k, degree)?;
    let id = format!("n={n}/k={k}/degree<={degree}");
    if 2 * k == n && k % 2 == 0 {
        let f = middle_grade_square(k);
        let outcome = (|| {
            if !lib(is_ext_one_affine(&f))?.is_member || !lib(is_int_one_affine(&f))?.is_member {
                return Err("fails a tester".into());
            }
            if !space.contains(f.body()) {
                return Err("not in the common space".into());
            }
            expect_eq(f.degree(), 2)
        })();
        c.case(format!("{id}/middle-square"), "passes both testers with degree 2", outcome);
    } else {
        let top = space.top_degree().unwrap_or(0);
        c.case(format!("{id}/common"), "degree <= 1", if top <= 1 { Ok(()) } else { Err(format!("degree {top}")) });
    }
    Ok(())
}

fn thm54(params: &SuiteParams, c: &mut Collector) -> Result<()> {
    let n = params.n;
    let k = params.need_k("thm54")?;
    let mut rng = rng(params.seed);
    for case in 0..params.cases {
        let rep = random_canonical(n, k, params.seed.wrapping_add(case as u64), BOUND)?;
        let f = build_ext_int(&rep);
        let id = format!("n={n}/k={k}/{case:04}");
        let outcome = (|| {
            let verdict = lib(is_ext_int_one_affine(&f))?;
            if verdict.canonical != Some(Canonical::ExtInt(rep.clone())) {
                return Err(format!("verdict {}", serde_json::to_string(&verdict).unwrap_or_default()));
            }
            let coeffs = lib(ext_int_coefficients(&f))?;
            if let Some(m) = coeffs.mixed.first() {
                return Err(format!("mixed term r={} s={} I={} J={} value {}", m.r, m.s, m.i, m.j, m.value));
            }
            Ok(())
        })();
        c.case(format!("{id}/round-trip"), format!("member with canonical {rep}"), outcome);

        let perturbed = perturb(&f, &mut rng, Family::Xi, k + 1)?;
        let outcome = lib(is_ext_int_one_affine(&perturbed)).and_then(|v| check_refuted(&perturbed, LineMode::ExtInt, &v));
        c.case(format!("{id}/perturbed"), "non-member with replayable witness", outcome);
    }
    Ok(())
}

fn cor55(params: &SuiteParams, c: &mut Collector) -> Result<()> {
    let n = params.n;
    let k = params.need_k("cor55")?;
    let expected_case = SplitCase::of(n, k);
    for case in 0..params.cases {
        let rep = random_canonical(n, k, params.seed.wrapping_add(case as u64), BOUND)?;
        let f = build_ext_int(&rep);
        let id = format!("n={n}/k={k}/{case:04}");
        let outcome = (|| {
            let got = lib(affinity::extract_ext_int_canonical(&f, true))?;
            if got.nonlinear_in_xi() && got.nonlinear_in_eta() {
                return Err("nonlinear in both arguments".into());
            }
            let split = lib(split_g_h(&got))?;
            expect_eq(split.case, expected_case)?;
            let rebuilt = split.g.body().substitute(|v| Some(coordinate(Family::Xi, v.index)));
            let rebuilt = rebuilt.add(&split.h.body().substitute(|v| Some(coordinate(Family::Eta, v.index))));
            if &rebuilt != f.body() {
                return Err("g + h differs from f".into());
            }
            Ok(())
        })();
        c.case(id, format!("case {expected_case}, degree bounds, g + h = f"), outcome);
    }
    Ok(())
}

/// `(∗ξ)η` on `Λ^2(ℝ^2) × Λ^0(ℝ^2)`.
pub fn remark_function() -> FunctionSpec {
    let body = coordinate(Family::Xi, MultiIndex::full(2)).mul(&coordinate(Family::Eta, MultiIndex::EMPTY));
    FunctionSpec::pair(2, 1, body).expect("variables of the signature")
}

fn remark36(c: &mut Collector) {
    let f = remark_function();
    let outcome = (|| {
        let v = lib(is_ext_int_one_affine(&f))?;
        check_refuted(&f, LineMode::ExtInt, &v)?;
        let w = v.witness.expect("checked");
        let a = Form::basis(2, MultiIndex::single(1));
        let b = lib(Form::from_ints(2, 1, &[(&[1], 1), (&[2], 1)]))?;
        if w.a != a || w.b != b || w.t_power != 2 || w.value != scalar::int(1) {
            return Err(format!("witness a={} b={} t^{} value {}", w.a, w.b, w.t_power, w.value));
        }
        Ok(())
    })();
    c.case("refuted", "witness a=e1, b=e1+e2, t^2 coefficient 1", outcome);

    let mut rng = rng(36);
    for case in 0..20 {
        let xi = random_form(&mut rng, 2, 2);
        let eta = random_form(&mut rng, 2, 0);
        let outcome = (|| {
            if !lib(is_ext_one_affine(&lib(fix_eta(&f, &eta))?))?.is_member {
                return Err("f(., eta) not ext. one affine".into());
            }
            if !lib(is_int_one_affine(&lib(fix_xi(&f, &xi))?))?.is_member {
                return Err("f(xi, .) not int. one affine".into());
            }
            Ok(())
        })();
        c.case(format!("restrictions/{case:04}"), "both partial functions affine in their class", outcome);
    }
    let outcome = lib(affinity::falsify_convexity(&f, LineMode::ExtInt)).and_then(|w| {
        let w = w.ok_or("no non-convexity witness")?;
        let got = lib(affinity::replay_convexity_witness(&f, LineMode::ExtInt, &w))?;
        if got == w.second_derivative && scalar::is_negative(&got) {
            Ok(())
        } else {
            Err(format!("second derivative {got}"))
        }
    });
    c.case("non-convex", "negative second derivative along a witness line", outcome);
}

fn lemma35(params: &SuiteParams, c: &mut Collector) -> Result<()> {
    let n = params.n;
    let k = params.need_k("lemma35")?;
    let mut rng = rng(params.seed);
    for case in 0..params.cases {
        let rep = random_canonical(n, k, params.seed.wrapping_add(case as u64), BOUND)?;
        let f = build_ext_int(&rep);
        let xi = random_form(&mut rng, n, k + 1);
        let eta = random_form(&mut rng, n, k - 1);
        let id = format!("n={n}/k={k}/{case:04}");
        let outcome = (|| {
            if !lib(is_ext_one_affine(&lib(fix_eta(&f, &eta))?))?.is_member {
                return Err(format!("f(., {eta}) not ext. one affine"));
            }
            if !lib(is_int_one_affine(&lib(fix_xi(&f, &xi))?))?.is_member {
                return Err(format!("f({xi}, .) not int. one affine"));
            }
            Ok(())
        })();
        c.case(id, "restrictions stay in their affine classes", outcome);
    }
    Ok(())
}
