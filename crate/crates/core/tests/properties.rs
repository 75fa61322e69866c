use proptest::prelude::*;

use formaffine::affinity::{
    build_ext, build_ext_int, extract_ext_int_canonical, fix_eta, fix_xi, is_ext_int_one_affine, is_ext_one_affine,
    is_int_one_affine, normal_splitting_holds, random_canonical, random_canonical_ext, replay_witness, Canonical,
};
use formaffine::formpoly::{Family, Var};
use formaffine::multiindex;
use formaffine::scalar::int;
use formaffine::{Form, FunctionSpec, LineMode, MultiIndex, Polynomial};

fn form_from(n: usize, k: usize, values: &[i8]) -> Form {
    let terms = multiindex::enumerate(n, k)
        .into_iter()
        .zip(values.iter().cycle())
        .filter(|(_, v)| **v != 0)
        .map(|(i, v)| (i, int(*v as i64)))
        .collect::<Vec<_>>();
    Form::from_terms(n, k, terms).unwrap()
}

fn values() -> impl Strategy<Value = Vec<i8>> {
    prop::collection::vec(-3i8..=3, 1..80)
}

/// `(n, k, l)` with `k + l <= n`.
fn grades() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..=6).prop_flat_map(|n| (Just(n), 0..=n)).prop_flat_map(|(n, k)| (Just(n), Just(k), 0..=n - k))
}

const PAIR_GRID: [(usize, usize); 8] = [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3), (5, 2), (6, 1)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_is_graded_commutative((n, k, l) in grades(), a in values(), b in values()) {
        let u = form_from(n, k, &a);
        let v = form_from(n, l, &b);
        let uv = u.wedge(&v).unwrap();
        let vu = v.wedge(&u).unwrap();
        let expected = if (k * l) % 2 == 0 { vu } else { vu.neg() };
        prop_assert_eq!(uv, expected);
    }

    #[test]
    fn interior_is_adjoint_to_wedge((n, s, l) in grades(), a in values(), b in values(), c in values()) {
        let f = form_from(n, s, &a);
        let beta = form_from(n, l, &b);
        let u = form_from(n, s + l, &c);
        let lhs = f.interior(&u).unwrap().inner(&beta).unwrap();
        let rhs = u.inner(&f.wedge(&beta).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn star_is_an_isometric_involution((n, k, _) in grades(), a in values(), b in values()) {
        let u = form_from(n, k, &a);
        let v = form_from(n, k, &b);
        let ss = u.hodge().unwrap().hodge().unwrap();
        let expected = if (k * (n - k)) % 2 == 0 { u.clone() } else { u.neg() };
        prop_assert_eq!(ss, expected);
        prop_assert_eq!(u.hodge().unwrap().inner(&v.hodge().unwrap()).unwrap(), u.inner(&v).unwrap());
    }

    #[test]
    fn decomposition_identities((n, k, _) in grades(), a in values(), x in values()) {
        prop_assume!(k >= 1);
        let omega = form_from(n, k, &a);
        let axis = form_from(n, 1, &x);
        prop_assume!(!axis.is_zero());
        let d = omega.decompose(&axis).unwrap();
        prop_assert_eq!(axis.wedge(&d.tangential).unwrap().add(&d.normal).unwrap(), omega);
        prop_assert!(axis.interior(&d.normal).unwrap().is_zero());
        if k >= 2 {
            prop_assert!(axis.interior(&d.tangential).unwrap().is_zero());
        }
    }

    #[test]
    fn first_rank_bounds_grade((n, k, _) in grades(), a in values()) {
        let u = form_from(n, k, &a);
        prop_assume!(!u.is_zero() && k >= 1);
        prop_assert!(u.rank(1).unwrap() >= k);
    }

    #[test]
    fn pair_round_trip(grid in 0..PAIR_GRID.len(), seed in any::<u64>()) {
        let (n, k) = PAIR_GRID[grid];
        let rep = random_canonical(n, k, seed, 3).unwrap();
        let f = build_ext_int(&rep);
        let verdict = is_ext_int_one_affine(&f).unwrap();
        prop_assert_eq!(verdict.canonical, Some(Canonical::ExtInt(rep.clone())));
        let got = extract_ext_int_canonical(&f, true).unwrap();
        prop_assert!(!(got.nonlinear_in_xi() && got.nonlinear_in_eta()));
        prop_assert_eq!(got, rep);
    }

    #[test]
    fn restrictions_stay_affine(grid in 0..PAIR_GRID.len(), seed in any::<u64>(), a in values(), b in values()) {
        let (n, k) = PAIR_GRID[grid];
        let f = build_ext_int(&random_canonical(n, k, seed, 3).unwrap());
        let xi = form_from(n, k + 1, &a);
        let eta = form_from(n, k - 1, &b);
        prop_assert!(is_ext_one_affine(&fix_eta(&f, &eta).unwrap()).unwrap().is_member);
        prop_assert!(is_int_one_affine(&fix_xi(&f, &xi).unwrap()).unwrap().is_member);
    }

    #[test]
    fn ext_members_split_along_the_first_axis(grid in 0..4usize, seed in any::<u64>()) {
        let (n, k) = [(3, 1), (4, 2), (5, 2), (5, 3)][grid];
        let f = build_ext(&random_canonical_ext(n, k, false, seed, 3).unwrap());
        prop_assert!(normal_splitting_holds(&f).unwrap());
    }

    #[test]
    fn refutations_replay(coeffs in prop::collection::vec(-2i8..=2, 21)) {
        // a random quadratic on Λ^2(R^4)
        let vars: Vec<Polynomial> = multiindex::enumerate(4, 2)
            .into_iter()
            .map(|i| Polynomial::var(Var::new(Family::Omega, i)))
            .collect();
        let mut body = Polynomial::zero();
        let mut c = coeffs.iter();
        for i in 0..vars.len() {
            for j in i..vars.len() {
                body = body.add(&vars[i].mul(&vars[j]).scale(&int(*c.next().unwrap() as i64)));
            }
        }
        let f = FunctionSpec::single(4, 2, body).unwrap();
        for (mode, verdict) in [(LineMode::Ext, is_ext_one_affine(&f).unwrap()), (LineMode::Int, is_int_one_affine(&f).unwrap())] {
            prop_assert!(verdict.canonical.is_some() != verdict.witness.is_some());
            if let Some(w) = verdict.witness {
                prop_assert!(w.t_power >= 2);
                prop_assert_eq!(replay_witness(&f, mode, &w).unwrap(), w.value);
            }
        }
    }

    #[test]
    fn function_json_round_trip(coeffs in prop::collection::vec((-5i64..=5, 1i64..=4), 6)) {
        let mut body = Polynomial::zero();
        for (i, (p, q)) in multiindex::enumerate(4, 2).into_iter().zip(&coeffs) {
            let v = Polynomial::var(Var::new(Family::Omega, i));
            body = body.add(&v.mul(&v).scale(&formaffine::scalar::ratio(*p, *q)));
        }
        let f = FunctionSpec::single(4, 2, body).unwrap();
        let text = f.to_json();
        let back = FunctionSpec::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back, f);
    }
}

#[test]
fn remark_function_restrictions_affine_but_pair_is_not() {
    let body = Polynomial::var(Var::new(Family::Xi, MultiIndex::full(2)))
        .mul(&Polynomial::var(Var::new(Family::Eta, MultiIndex::EMPTY)));
    let f = FunctionSpec::pair(2, 1, body).unwrap();
    for v in -3..=3 {
        let eta = Form::scalar(2, int(v));
        let xi = Form::basis(2, MultiIndex::full(2)).scale(&int(v));
        assert!(is_ext_one_affine(&fix_eta(&f, &eta).unwrap()).unwrap().is_member);
        assert!(is_int_one_affine(&fix_xi(&f, &xi).unwrap()).unwrap().is_member);
    }
    assert!(!is_ext_int_one_affine(&f).unwrap().is_member);
}
