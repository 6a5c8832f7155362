//! Property suite for the kernel and the calculus above it. The
//! multiplication oracle here is independent of the kernel's sort-based
//! normalizer: it flattens monomials into factor sequences and bubble-sorts
//! with explicit transposition signs.

use darboux_core::cdga::{RationalPoint, StandardFormCdga};
use darboux_core::darboux::{DarbouxSpec, Family};
use darboux_core::derham::{contract, de_rham, lie_derivative};
use darboux_core::derivation::{euler, partial_apply, Derivation};
use darboux_core::element::Element;
use darboux_core::forms::{mixed_differential, pairing_matrices, Cochain, CochainKind};
use darboux_core::hamilton::{hamiltonian_vector_field, poisson_bracket};
use darboux_core::monomial::Monomial;
use darboux_core::sample::{
    monomial_pool, random_element, random_homogeneous, random_spec, random_vector_field, rng,
};
use darboux_core::scalar::Scalar;
use darboux_core::sig::{FieldKind, GenId, SigRef, Signature};
use proptest::prelude::*;
use std::collections::BTreeMap;
use std::sync::OnceLock;

fn table() -> &'static SigRef {
    static SIG: OnceLock<SigRef> = OnceLock::new();
    SIG.get_or_init(|| {
        Signature::builder(FieldKind::Rational)
            .base_vars(["x1", "x2"])
            .generator("y1", -1)
            .generator("y2", -1)
            .generator("u", -2)
            .generator("v", -3)
            .build()
            .expect("fixed test table")
    })
}

fn pool() -> &'static Vec<Monomial> {
    static POOL: OnceLock<Vec<Monomial>> = OnceLock::new();
    POOL.get_or_init(|| {
        let sig = table();
        let mut all = Vec::new();
        for deg in -6..=0 {
            for wt in 0..=2 {
                all.extend(monomial_pool(sig, deg, wt, 2));
            }
        }
        all
    })
}

prop_compose! {
    fn arb_element()(terms in prop::collection::vec((any::<prop::sample::Index>(), -4i64..=4), 1..5))
        -> Element
    {
        let sig = table();
        let pool = pool();
        let mut acc = Element::zero(sig);
        for (idx, c) in terms {
            if c == 0 {
                continue;
            }
            let m = pool[idx.index(pool.len())].clone();
            acc = acc.add(&Element::monomial(sig, m, Scalar::from_int(c))).unwrap();
        }
        acc
    }
}

/// Oracle: multiply by flattening into factor sequences and bubble-sorting
/// with one sign flip per transposition of odd factors.
fn naive_mul(a: &Element, b: &Element) -> Element {
    let sig = table();
    let flatten = |m: &Monomial| -> Vec<GenId> {
        let mut v = Vec::new();
        for (g, e) in m.factors() {
            for _ in 0..*e {
                v.push(*g);
            }
        }
        v
    };
    let mut acc = Element::zero(sig);
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let mut seq = flatten(ma);
            seq.extend(flatten(mb));
            let mut sign = 1i64;
            let mut dead = false;
            // bubble sort, counting transpositions of odd pairs
            for i in 0..seq.len() {
                for j in 0..seq.len().saturating_sub(i + 1) {
                    if seq[j] > seq[j + 1] {
                        if sig.is_odd(seq[j]) && sig.is_odd(seq[j + 1]) {
                            sign = -sign;
                        }
                        seq.swap(j, j + 1);
                    }
                }
            }
            for w in seq.windows(2) {
                if w[0] == w[1] && sig.is_odd(w[0]) {
                    dead = true;
                }
            }
            if dead {
                continue;
            }
            let factors: Vec<(GenId, u32)> = seq.into_iter().map(|g| (g, 1)).collect();
            let mono = Monomial::from_factors(sig, &factors).expect("no odd repeats left");
            let coeff = &(ca * cb) * &Scalar::from_int(sign);
            acc = acc.add(&Element::monomial(sig, mono, coeff)).unwrap();
        }
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mul_matches_the_transposition_oracle(a in arb_element(), b in arb_element()) {
        let got = a.mul(&b).unwrap();
        let want = naive_mul(&a, &b);
        prop_assert!(got.equals(&want).unwrap());
    }

    #[test]
    fn mul_is_associative(a in arb_element(), b in arb_element(), c in arb_element()) {
        let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
        let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs).unwrap());
    }

    #[test]
    fn mul_is_graded_commutative(a in arb_element(), b in arb_element()) {
        // per homogeneous component: ab = (-1)^{|a||b|} ba
        let sig = table();
        for (da, wa) in a.bidegrees() {
            for (db, wb) in b.bidegrees() {
                let ca = a.component(da, wa);
                let cb = b.component(db, wb);
                let mut rhs = cb.mul(&ca).unwrap();
                if (da * db).rem_euclid(2) == 1 {
                    rhs = rhs.neg();
                }
                prop_assert!(ca.mul(&cb).unwrap().equals(&rhs).unwrap());
            }
        }
        let _ = sig;
    }

    #[test]
    fn addition_and_multiplication_distribute(a in arb_element(), b in arb_element(), c in arb_element()) {
        let lhs = a.add(&b).unwrap().mul(&c).unwrap();
        let rhs = a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs).unwrap());
    }

    #[test]
    fn de_rham_squares_to_zero(a in arb_element()) {
        let ddr = de_rham(table());
        prop_assert!(ddr.apply(&ddr.apply(&a).unwrap()).unwrap().is_zero());
    }
}

#[test]
fn odd_generators_square_to_zero() {
    let sig = table();
    for g in sig.all_gens() {
        if sig.is_odd(g) {
            let e = Element::generator(sig, g);
            assert!(e.mul(&e).unwrap().is_zero(), "{}", sig.name(g));
        }
    }
}

#[test]
fn derivations_satisfy_the_leibniz_rule() {
    let sig = table();
    let mut r = rng(101);
    for _ in 0..40 {
        let deg = if r.gen_bool(0.5) { 1 } else { -1 };
        let x = random_vector_field(sig, deg, &mut r).unwrap();
        let da = -(r.gen_range(0..4) as i64);
        let db = -(r.gen_range(0..4) as i64);
        let a = random_homogeneous(sig, da, 0, &mut r, 2);
        let b = random_homogeneous(sig, db, 0, &mut r, 2);
        let lhs = x.apply(&a.mul(&b).unwrap()).unwrap();
        let mut second = a.mul(&x.apply(&b).unwrap()).unwrap();
        if (x.degree() * da).rem_euclid(2) == 1 {
            second = second.neg();
        }
        let rhs = x.apply(&a).unwrap().mul(&b).unwrap().add(&second).unwrap();
        assert!(lhs.equals(&rhs).unwrap());
    }
}

#[test]
fn derivations_match_the_partial_chain_rule() {
    // an independent route: D(f) = sum_g D(g) . (left partial of f along g)
    let sig = table();
    let mut r = rng(102);
    for _ in 0..30 {
        let x = random_vector_field(sig, r.gen_range(-1..=1), &mut r).unwrap();
        let f = random_homogeneous(sig, -(r.gen_range(0..5) as i64), 0, &mut r, 3);
        let direct = x.apply(&f).unwrap();
        let mut via_partials = Element::zero(sig);
        for g in sig.algebra_gens() {
            let dg = x.value_on(g);
            if dg.is_zero() {
                continue;
            }
            let part = partial_apply(sig, g, &f).unwrap();
            via_partials = via_partials.add(&dg.mul(&part).unwrap()).unwrap();
        }
        assert!(direct.equals(&via_partials).unwrap());
    }
}

#[test]
fn lie_bracket_is_graded_antisymmetric_and_jacobi() {
    let sig = table();
    let mut r = rng(103);
    for _ in 0..12 {
        let x = random_vector_field(sig, r.gen_range(-1..=1), &mut r).unwrap();
        let y = random_vector_field(sig, r.gen_range(-1..=1), &mut r).unwrap();
        let z = random_vector_field(sig, r.gen_range(-1..=1), &mut r).unwrap();

        // [X,Y] = -(-1)^{|X||Y|} [Y,X]
        let xy = x.lie_bracket(&y).unwrap();
        let yx = y.lie_bracket(&x).unwrap();
        for g in sig.all_gens() {
            let mut rhs = yx.value_on(g).neg();
            if (x.degree() * y.degree()).rem_euclid(2) == 1 {
                rhs = rhs.neg();
            }
            assert!(xy.value_on(g).equals(&rhs).unwrap());
        }

        // [X,[Y,Z]] = [[X,Y],Z] + (-1)^{|X||Y|} [Y,[X,Z]]
        let lhs = x.lie_bracket(&y.lie_bracket(&z).unwrap()).unwrap();
        let first = x.lie_bracket(&y).unwrap().lie_bracket(&z).unwrap();
        let second = y.lie_bracket(&x.lie_bracket(&z).unwrap()).unwrap();
        for g in sig.all_gens() {
            let mut s = second.value_on(g);
            if (x.degree() * y.degree()).rem_euclid(2) == 1 {
                s = s.neg();
            }
            let rhs = first.value_on(g).add(&s).unwrap();
            assert!(lhs.value_on(g).equals(&rhs).unwrap());
        }
    }
}

#[test]
fn euler_field_multiplies_by_degree_and_kills_the_base() {
    let sig = table();
    let e = euler(sig);
    let mut r = rng(104);
    for _ in 0..25 {
        let deg = -(r.gen_range(0..5) as i64);
        let f = random_homogeneous(sig, deg, 0, &mut r, 3);
        let want = f.scale(&Scalar::from_int(deg));
        assert!(e.apply(&f).unwrap().equals(&want).unwrap());
    }
    let base = random_homogeneous(sig, 0, 0, &mut r, 3);
    assert!(e.apply(&base).unwrap().is_zero());
}

#[test]
fn contraction_and_lie_derivative_shift_bidegrees() {
    let sig = table();
    let mut r = rng(105);
    for _ in 0..10 {
        let x = random_vector_field(sig, r.gen_range(-1..=1), &mut r).unwrap();
        let ix = contract(&x).unwrap();
        assert_eq!(ix.degree(), x.degree() + 1);
        assert_eq!(ix.weight(), -1);
        let lx = lie_derivative(&x).unwrap();
        assert_eq!(lx.degree(), x.degree());
        assert_eq!(lx.weight(), 0);
        let a = random_element(sig, &mut r);
        for (d, w) in a.bidegrees() {
            let part = a.component(d, w);
            let out = ix.apply(&part).unwrap();
            assert!(out.is_homogeneous(d + ix.degree(), w - 1));
            let out = lx.apply(&part).unwrap();
            assert!(out.is_homogeneous(d + lx.degree(), w));
        }
    }
}

fn weak_model() -> darboux_core::darboux::GeneratedModel {
    DarbouxSpec {
        family: Family::WeakTwo { d: 0 },
        field: FieldKind::Rational,
        base: vec!["x".to_string()],
        ranks: vec![1, 2],
        q: vec!["x^2 + 1".to_string(), "-x^2 - 1".to_string()],
        extra_invertibles: Vec::new(),
        hamiltonian: "z1_1*(x^3) + z1_2*(x^3)".to_string(),
    }
    .generate()
    .unwrap()
}

#[test]
fn total_differential_squares_to_zero_and_anticommutes() {
    let model = weak_model();
    let sig = &model.sig;
    let d = model.cdga.total_differential().unwrap();
    let ddr = de_rham(sig);
    let mut r = rng(106);
    for _ in 0..20 {
        let a = random_element(sig, &mut r);
        assert!(d.apply(&d.apply(&a).unwrap()).unwrap().is_zero());
        let anti = d
            .apply(&ddr.apply(&a).unwrap())
            .unwrap()
            .add(&ddr.apply(&d.apply(&a).unwrap()).unwrap())
            .unwrap();
        assert!(anti.is_zero());
    }
}

#[test]
fn mixed_differential_squares_to_zero_on_random_cochains() {
    let model = weak_model();
    let sig = &model.sig;
    let mut r = rng(107);
    for kind in [
        CochainKind::Cyclic,
        CochainKind::Negative,
        CochainKind::Periodic,
    ] {
        for p in [1i64, 2] {
            for _ in 0..8 {
                let n = -(r.gen_range(0..4) as i64);
                let mut components = BTreeMap::new();
                for slot in -2..=2i64 {
                    if r.gen_bool(0.5) {
                        continue;
                    }
                    if p + slot < 0 {
                        continue;
                    }
                    let e = random_homogeneous(sig, n - 2 * slot, p + slot, &mut r, 2);
                    if !e.is_zero() {
                        components.insert(slot, e);
                    }
                }
                let c = match Cochain::new(sig, n, p, kind, components) {
                    Ok(c) => c,
                    Err(_) => continue,
                };
                let dc = mixed_differential(&model.cdga, &c).unwrap();
                let ddc = mixed_differential(&model.cdga, &dc).unwrap();
                assert!(ddc.is_zero());
            }
        }
    }
}

#[test]
fn pairing_parity_law_for_middle_blocks() {
    // k = -2 (2 mod 4): the middle block is symmetric
    let strong2 = DarbouxSpec {
        family: Family::StrongTwo { d: 0 },
        field: FieldKind::Gaussian,
        base: vec!["x".to_string()],
        ranks: vec![1, 2],
        q: Vec::new(),
        extra_invertibles: Vec::new(),
        hamiltonian: "z1_1*(x^2) + z1_2*(i*x^2)".to_string(),
    }
    .generate()
    .unwrap();
    let pm = pairing_matrices(&strong2.cdga, strong2.omega0()).unwrap();
    let middle = pm.blocks.iter().find(|b| b.a == -1).unwrap();
    for i in 0..middle.rows.len() {
        for j in 0..middle.cols.len() {
            assert!(middle.entries[i][j].equals(&middle.entries[j][i]).unwrap());
        }
    }

    // k = -4 (0 mod 4): the middle block is antisymmetric
    let div4 = DarbouxSpec {
        family: Family::DivFour { d: 1 },
        field: FieldKind::Rational,
        base: vec!["x".to_string()],
        ranks: vec![1, 1, 1],
        q: Vec::new(),
        extra_invertibles: Vec::new(),
        hamiltonian: "y3_1*(x^2)".to_string(),
    }
    .generate()
    .unwrap();
    let pm = pairing_matrices(&div4.cdga, div4.omega0()).unwrap();
    let middle = pm.blocks.iter().find(|b| b.a == -2).unwrap();
    assert_eq!(middle.rows.len(), 2); // x2_1 and y2_1
    for i in 0..middle.rows.len() {
        for j in 0..middle.cols.len() {
            assert!(middle.entries[i][j]
                .equals(&middle.entries[j][i].neg())
                .unwrap());
        }
    }
}

#[test]
fn pointwise_nondegeneracy_on_the_localized_weak_model() {
    let model = weak_model();
    let sig = &model.sig;
    let mut named = BTreeMap::new();
    named.insert("x".to_string(), Scalar::zero());
    let p = RationalPoint::new(sig, &named).unwrap();
    assert!(
        darboux_core::forms::is_nondegenerate_at(&model.cdga, model.omega0(), &p).unwrap()
    );
}

#[test]
fn points_where_a_designated_invertible_vanishes_are_rejected() {
    let sig = Signature::builder(FieldKind::Rational)
        .base_var("x")
        .generator("y", -1)
        .invertible("x")
        .build()
        .unwrap();
    let cdga = StandardFormCdga::build(&sig, BTreeMap::new()).unwrap();
    let mut named = BTreeMap::new();
    named.insert("x".to_string(), Scalar::zero());
    let p = RationalPoint::new(&sig, &named).unwrap();
    assert!(matches!(
        p.validate(&cdga),
        Err(darboux_core::Error::InvertibleVanishes { .. })
    ));
}

#[test]
fn h0_of_the_derived_critical_locus_is_the_jacobian_ring() {
    let mut r = rng(108);
    for _ in 0..5 {
        let spec = random_spec(Family::Odd { d: 0 }, &mut r);
        let model = spec.generate().unwrap();
        let sig = &model.sig;
        let ideal = model.cdga.h0_presentation();
        let h = &model.hamiltonian;
        let partials: Vec<Element> = sig
            .base_gens()
            .map(|g| partial_apply(sig, g, h).unwrap())
            .collect();
        assert_eq!(ideal.len(), partials.len());
        for (a, b) in ideal.iter().zip(&partials) {
            assert!(a.equals(b).unwrap());
        }
    }
}

#[test]
fn hamiltonian_map_intertwines_the_brackets() {
    // with the sign convention fixed by {f,g} = (-1)^{|f|-k-1} X_f(g), the
    // map f -> -X_f carries the Poisson bracket to the field bracket:
    // X_{{f,g}} = -[X_f, X_g] on the values at every generator
    let model = weak_model();
    let sig = &model.sig;
    let mut r = rng(109);
    let k = model.spec.k();
    let mut nontrivial = 0;
    for _ in 0..10 {
        let f = darboux_core::sample::random_poisson_arg(sig, k, &mut r);
        let g = darboux_core::sample::random_poisson_arg(sig, k, &mut r);
        let fg = poisson_bracket(&model.cdga, model.omega0(), &f, &g).unwrap();
        if fg.is_zero() {
            continue;
        }
        let xfg = hamiltonian_vector_field(&model.cdga, model.omega0(), &fg).unwrap();
        let xf = hamiltonian_vector_field(&model.cdga, model.omega0(), &f).unwrap();
        let xg = hamiltonian_vector_field(&model.cdga, model.omega0(), &g).unwrap();
        let br = xf.lie_bracket(&xg).unwrap();
        for gen in sig.algebra_gens() {
            assert!(xfg.value_on(gen).equals(&br.value_on(gen).neg()).unwrap());
            if !br.value_on(gen).is_zero() {
                nontrivial += 1;
            }
        }
    }
    assert!(
        nontrivial > 0,
        "the sampled brackets never exercised the identity"
    );
}

#[test]
fn bracket_degree_law() {
    let model = weak_model();
    let sig = &model.sig;
    let k = model.spec.k();
    let mut r = rng(110);
    for _ in 0..10 {
        let f = darboux_core::sample::random_poisson_arg(sig, k, &mut r);
        let g = darboux_core::sample::random_poisson_arg(sig, k, &mut r);
        let fg = poisson_bracket(&model.cdga, model.omega0(), &f, &g).unwrap();
        if fg.is_zero() {
            continue;
        }
        let (fd, _) = f.homogeneous_bidegree().unwrap();
        let (gd, _) = g.homogeneous_bidegree().unwrap();
        assert!(fg.is_homogeneous(fd + gd - k, 0));
    }
}

#[test]
fn cotangent_composites_vanish_at_accepted_points() {
    // the k = -3 model has two nontrivial cotangent blocks to compose
    let spec = DarbouxSpec {
        family: Family::Odd { d: 1 },
        field: FieldKind::Rational,
        base: vec!["x".to_string()],
        ranks: vec![1, 2],
        q: Vec::new(),
        extra_invertibles: Vec::new(),
        hamiltonian: "y2_1*(x^2) + y2_2*(x^3 - x^2)".to_string(),
    };
    let model = spec.generate().unwrap();
    let restriction = model.cdga.cotangent_restriction().unwrap();
    let mut named = BTreeMap::new();
    named.insert("x".to_string(), Scalar::zero());
    let p = RationalPoint::new(&model.sig, &named).unwrap();
    p.validate(&model.cdga).unwrap();
    assert!(restriction.composites_vanish_at(&p.values).unwrap());
}

#[test]
fn build_reports_the_offending_generator() {
    let sig = Signature::builder(FieldKind::Rational)
        .base_var("x")
        .generator("a", -1)
        .generator("b", -2)
        .build()
        .unwrap();
    let mut assign = BTreeMap::new();
    assign.insert("a".to_string(), Element::parse(&sig, "x^2").unwrap());
    assign.insert("b".to_string(), Element::parse(&sig, "x*a").unwrap());
    // d(d b) = d(x a) = x * x^2 != 0
    match StandardFormCdga::build(&sig, assign) {
        Err(darboux_core::Error::SquareNotZero { name, residue }) => {
            assert_eq!(name, "b");
            assert_eq!(residue, "x^3");
        }
        other => panic!("expected SquareNotZero, got {other:?}"),
    }
}

use rand::Rng;
