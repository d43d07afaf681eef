use invforge::classical::{bilinear_value, family_invariance, theorem41_generators};
use invforge::gf::make_field;
use invforge::groups::{gl_order, FieldMatrix, FormKind, FormMatrix, Group};
use invforge::invariants::{self, dickson_c, dickson_d, Rearrangement, SteinbergFamily};
use invforge::mpoly::VarGrid;
use invforge::ratexpr::{Extension, RatExpr};
use invforge::report::Method;
use invforge::rng::SplitMix64;
use invforge::verify::{invariance_report, InvarianceMode};

fn product_formula(q: u128, n: u32) -> u128 {
    (0..n).map(|i| q.pow(n) - q.pow(i)).product()
}

#[test]
fn enumerated_orders_match_formulas() {
    for (p, e, n) in [(2, 1, 2), (3, 1, 2), (2, 1, 3), (2, 2, 2)] {
        let spec = make_field(p, e).unwrap();
        let q = spec.q() as u128;
        let gl = Group::general(&spec, n).enumerate(1_000_000).unwrap();
        assert_eq!(gl.len() as u128, product_formula(q, n as u32));
        assert_eq!(gl_order(q, n as u32), product_formula(q, n as u32));
        let sl = Group::special(&spec, n).enumerate(1_000_000).unwrap();
        assert_eq!(sl.len() as u128, product_formula(q, n as u32) / (q - 1));
        if n == 2 {
            let sp = Group::with_form(FormMatrix::standard(FormKind::Alternate, 2, &spec).unwrap());
            assert_eq!(sp.enumerate(1_000_000).unwrap().len(), sl.len());
        }
    }
}

#[test]
fn small_classical_orders() {
    let f2 = make_field(2, 1).unwrap();
    let f3 = make_field(3, 1).unwrap();
    let f9 = make_field(3, 2).unwrap();
    let order = |kind, size, spec| Group::with_form(FormMatrix::standard(kind, size, spec).unwrap()).enumerate(1_000_000).unwrap().len();
    assert_eq!(order(FormKind::Symmetric, 2, &f3), 8);
    assert_eq!(order(FormKind::Alternate, 4, &f2), 720);
    assert_eq!(order(FormKind::Hermitian, 2, &f9), 96);
}

#[test]
fn groups_closed_under_inverse() {
    let f3 = make_field(3, 1).unwrap();
    for g in [
        Group::general(&f3, 2),
        Group::special(&f3, 2),
        Group::with_form(FormMatrix::standard(FormKind::Symmetric, 2, &f3).unwrap()),
        Group::with_form(FormMatrix::standard(FormKind::Alternate, 2, &f3).unwrap()),
    ] {
        for t in g.enumerate(1000).unwrap() {
            assert!(g.is_member(&t.inverse().unwrap()).unwrap());
        }
    }
}

#[test]
fn dickson_divisibility_and_invariance() {
    for p in [2, 3] {
        let spec = make_field(p, 1).unwrap();
        for n in 1..=3 {
            let g = VarGrid::new(1, n).unwrap();
            let dnn = dickson_d(&spec, g, n, 1).unwrap();
            for s in 0..n {
                assert!(dickson_d(&spec, g, s, 1).unwrap().exact_div(&dnn).is_ok(), "q={p} n={n} s={s}");
            }
        }
        let g = VarGrid::new(1, 2).unwrap();
        let cs: Vec<_> = (0..2).map(|s| (format!("c{s}"), RatExpr::from_poly(dickson_c(&spec, g, s, 1).unwrap()))).collect();
        let all = Group::general(&spec, 2).enumerate(1000).unwrap();
        assert!(invariance_report("dickson", &cs, &all, InvarianceMode::Invariant, Method::Enumeration).unwrap().passed());
    }
}

#[test]
fn steinberg_identities_at_listed_sizes() {
    for (p, n) in [(2, 2), (3, 2), (2, 3)] {
        let fam = SteinbergFamily::build(&make_field(p, 1).unwrap(), n, n).unwrap();
        assert!(invariants::lemma_27(&fam).unwrap().passed());
    }
    let fam = SteinbergFamily::build(&make_field(2, 1).unwrap(), 2, 2).unwrap();
    for k in [2, 3] {
        assert!(invariants::chain_24(&fam, k).unwrap().passed());
    }
    for removed in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        assert!(invariants::rearrangement(&fam, removed, Rearrangement::Quotients).unwrap().passed());
        assert!(invariants::rearrangement(&fam, removed, Rearrangement::Polynomials).unwrap().passed());
    }
    let fam3 = SteinbergFamily::build(&make_field(3, 1).unwrap(), 2, 2).unwrap();
    for k in [2, 3] {
        assert!(invariants::chain_24_probabilistic(&fam3, k, 20, 7).unwrap().passed());
    }
    let small = SteinbergFamily::build(&make_field(2, 1).unwrap(), 2, 3).unwrap();
    assert!(invariants::m_lt_n_constants(&small).unwrap().passed());
}

#[test]
fn larger_rearrangement_and_specialization() {
    let f2 = make_field(2, 1).unwrap();
    let fam = SteinbergFamily::build(&f2, 3, 3).unwrap();
    assert!(invariants::rearrangement(&fam, (2, 3), Rearrangement::Polynomials).unwrap().passed());
    assert!(invariants::prop32_membership(&fam).unwrap().passed());
    assert!(invariants::pi_check(&f2, 1, 3).unwrap().passed());
    assert!(invariants::pi_check(&make_field(3, 1).unwrap(), 1, 2).unwrap().passed());
}

#[test]
fn classical_generators_fixed_by_their_groups() {
    let f2 = make_field(2, 1).unwrap();
    let f3 = make_field(3, 1).unwrap();
    let f9 = make_field(3, 2).unwrap();
    let cases = [
        (FormMatrix::standard(FormKind::Alternate, 2, &f2).unwrap(), None),
        (FormMatrix::standard(FormKind::Symmetric, 2, &f3).unwrap(), None),
        (FormMatrix::standard(FormKind::Alternate, 4, &f2).unwrap(), Some(50)),
        (FormMatrix::standard(FormKind::Hermitian, 2, &f9).unwrap(), Some(50)),
    ];
    for (form, samples) in cases {
        let fam = theorem41_generators(&form, 2).unwrap();
        let group = fam.group();
        let elements = match samples {
            Some(c) => group.sample(c, 11).unwrap(),
            None => group.enumerate(1000).unwrap(),
        };
        if samples.is_none() {
            assert!(elements.len() == 6 || elements.len() == 8);
        }
        assert!(family_invariance(&fam, &elements, Method::Exact).unwrap().passed(), "{}", group);
    }
}

#[test]
fn alternate_self_pairing_vanishes() {
    let f3 = make_field(3, 1).unwrap();
    for size in [2, 4, 6] {
        let k = FormMatrix::standard(FormKind::Alternate, size, &f3).unwrap();
        let g = VarGrid::new(2, size).unwrap();
        assert!(bilinear_value(&k, g, 2, 2, 0).unwrap().is_zero());
    }
    let k = FormMatrix::new(FormKind::Alternate, FieldMatrix::from_rows(&f3, &[vec![0, 2], vec![1, 0]]).unwrap()).unwrap();
    assert!(bilinear_value(&k, VarGrid::new(1, 2).unwrap(), 1, 1, 0).unwrap().is_zero());
}

#[test]
fn hermitian_pairing_is_conjugate_symmetric_at_points() {
    let f9 = make_field(3, 2).unwrap();
    let h = FormMatrix::new(FormKind::Hermitian, FieldMatrix::parse(&f9, "1,t;2*t,2").unwrap()).unwrap();
    let g = VarGrid::new(2, 2).unwrap();
    let h12 = bilinear_value(&h, g, 1, 2, 0).unwrap();
    let h21 = bilinear_value(&h, g, 2, 1, 0).unwrap();
    let ext = Extension::with_degree(&f9, 1).unwrap();
    for t in 0..100 {
        let mut rng = SplitMix64::for_trial(3, t);
        let point = ext.random_point(&mut rng, g.nvars());
        assert_eq!(h12.evaluate_raw(&point).unwrap(), f9.conj(h21.evaluate_raw(&point).unwrap()));
    }
}
