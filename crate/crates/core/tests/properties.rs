use proptest::prelude::*;

use invforge::gf::{make_field, FieldSpec};
use invforge::groups::{act, FieldMatrix, Group};
use invforge::mpoly::{PolyMatrix, SparsePoly, VarGrid};
use invforge::ratexpr::{equal_probabilistic, RatExpr};

fn field(idx: usize) -> FieldSpec {
    let (p, e) = [(2, 1), (3, 1), (2, 2), (5, 1)][idx];
    make_field(p, e).unwrap()
}

fn poly_from(spec: &FieldSpec, grid: VarGrid, terms: &[(u32, Vec<u64>)]) -> SparsePoly {
    let terms: Vec<_> = terms.iter().map(|(c, exps)| (spec.element(c % spec.q()), exps.clone())).collect();
    SparsePoly::build(spec, grid, &terms).unwrap()
}

/// Up to `max_terms` terms with exponents below `max_exp` on a grid with `nvars` variables.
fn terms(nvars: usize, max_terms: usize, max_exp: u64) -> impl Strategy<Value = Vec<(u32, Vec<u64>)>> {
    prop::collection::vec((any::<u32>(), prop::collection::vec(0..max_exp, nvars)), 0..=max_terms)
}

fn grid22() -> VarGrid {
    VarGrid::new(2, 2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_axioms(fi in 0..4usize, a in terms(4, 5, 4), b in terms(4, 5, 4), c in terms(4, 5, 4)) {
        let spec = field(fi);
        let g = grid22();
        let (f, h, k) = (poly_from(&spec, g, &a), poly_from(&spec, g, &b), poly_from(&spec, g, &c));
        prop_assert_eq!(&f + &h, &h + &f);
        prop_assert_eq!(&(&f + &h) + &k, &f + &(&h + &k));
        prop_assert_eq!(&f * &h, &h * &f);
        prop_assert_eq!(&(&f * &h) * &k, &f * &(&h * &k));
        prop_assert_eq!(&f * &(&h + &k), &(&f * &h) + &(&f * &k));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn text_round_trip(fi in 0..4usize, a in terms(4, 6, 5)) {
        let spec = field(fi);
        let f = poly_from(&spec, grid22(), &a);
        let text = f.to_canonical_string();
        prop_assert_eq!(SparsePoly::parse(&spec, grid22(), &text).unwrap(), f);
    }

    #[test]
    fn determinant_is_multiplicative(
        fi in 0..2usize,
        size in 2..=3usize,
        a in prop::collection::vec(terms(2, 2, 3), 9),
        b in prop::collection::vec(terms(2, 2, 3), 9),
    ) {
        let spec = field(fi);
        let g = VarGrid::new(1, 2).unwrap();
        let mat = |src: &[Vec<(u32, Vec<u64>)>]| {
            PolyMatrix::new(size, size, src[..size * size].iter().map(|t| poly_from(&spec, g, t)).collect()).unwrap()
        };
        let (ma, mb) = (mat(&a), mat(&b));
        let lhs = ma.mul(&mb).unwrap().determinant().unwrap();
        prop_assert_eq!(lhs, &ma.determinant().unwrap() * &mb.determinant().unwrap());
    }

    #[test]
    fn cofactor_matches_bareiss(fi in 0..3usize, size in 1..=4usize, a in prop::collection::vec(terms(2, 3, 3), 16)) {
        let spec = field(fi);
        let g = VarGrid::new(1, 2).unwrap();
        let m = PolyMatrix::new(size, size, a[..size * size].iter().map(|t| poly_from(&spec, g, t)).collect()).unwrap();
        prop_assert_eq!(m.det_cofactor().unwrap(), m.det_bareiss().unwrap());
    }

    #[test]
    fn frobenius_is_substitution_of_powers(fi in 0..4usize, a in terms(4, 5, 3)) {
        let spec = field(fi);
        let g = grid22();
        let f = poly_from(&spec, g, &a);
        let powers: Vec<SparsePoly> = (0..4)
            .map(|v| {
                let (i, j) = g.var_of(v);
                SparsePoly::var_pow(&spec, g, i, j, spec.q() as u64).unwrap()
            })
            .collect();
        prop_assert_eq!(f.frobenius_power_poly(1), f.substitute(&powers).unwrap());
    }

    #[test]
    fn exact_and_probabilistic_equality_agree(
        fi in 0..3usize,
        n in terms(4, 4, 3),
        d in terms(4, 3, 3),
        h in terms(4, 3, 2),
        perturb in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let spec = field(fi);
        let g = grid22();
        let num = poly_from(&spec, g, &n);
        let den = &poly_from(&spec, g, &d) + &SparsePoly::var(&spec, g, 1, 1).unwrap();
        let h = &poly_from(&spec, g, &h) + &SparsePoly::one(&spec, g);
        prop_assume!(!den.is_zero() && !h.is_zero());
        let a = RatExpr::new(num.clone(), den.clone()).unwrap();
        let mut b_num = &num * &h;
        if perturb {
            b_num = &b_num + &SparsePoly::var(&spec, g, 2, 2).unwrap();
        }
        let b = RatExpr::new(b_num, &den * &h).unwrap();
        prop_assert!(a.equal_exact(&a).unwrap());
        let exact = a.equal_exact(&b).unwrap();
        prop_assert_eq!(exact, b.equal_exact(&a).unwrap());
        let prob = equal_probabilistic(&a, &b, 20, seed).unwrap();
        prop_assert_eq!(prob.equal, exact);
        prop_assert_eq!(prob, equal_probabilistic(&a, &b, 20, seed).unwrap());
    }

    #[test]
    fn action_composes_and_is_a_homomorphism(ia in 0..6usize, ib in 0..6usize, a in terms(4, 4, 3), b in terms(4, 4, 3)) {
        let spec = field(0);
        let gl = Group::general(&spec, 2).enumerate(100).unwrap();
        let g = grid22();
        let (f, h) = (poly_from(&spec, g, &a), poly_from(&spec, g, &b));
        let (s, t) = (&gl[ia], &gl[ib]);
        let lhs = act(s, &act(t, &f).unwrap()).unwrap();
        prop_assert_eq!(lhs, act(&t.mul(s).unwrap(), &f).unwrap());
        prop_assert_eq!(act(s, &(&f * &h)).unwrap(), &act(s, &f).unwrap() * &act(s, &h).unwrap());
        prop_assert_eq!(act(s, &(&f + &h)).unwrap(), &act(s, &f).unwrap() + &act(s, &h).unwrap());
        prop_assert_eq!(act(s, &f).unwrap().total_degree(), f.total_degree());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn evaluation_is_a_homomorphism(fi in 0..4usize, a in terms(4, 5, 4), b in terms(4, 5, 4), pt in prop::collection::vec(any::<u32>(), 4)) {
        let spec = field(fi);
        let g = grid22();
        let (f, h) = (poly_from(&spec, g, &a), poly_from(&spec, g, &b));
        let point: Vec<u32> = pt.iter().map(|v| v % spec.q()).collect();
        let (vf, vh) = (f.evaluate_raw(&point).unwrap(), h.evaluate_raw(&point).unwrap());
        prop_assert_eq!((&f + &h).evaluate_raw(&point).unwrap(), spec.add(vf, vh));
        prop_assert_eq!((&f * &h).evaluate_raw(&point).unwrap(), spec.mul(vf, vh));
    }

    #[test]
    fn field_matrix_determinant_is_multiplicative(fi in 0..4usize, size in 1..=3usize, a in prop::collection::vec(any::<u32>(), 9), b in prop::collection::vec(any::<u32>(), 9)) {
        let spec = field(fi);
        let mk = |v: &[u32]| FieldMatrix::new(&spec, size, v[..size * size].iter().map(|x| x % spec.q()).collect()).unwrap();
        let (x, y) = (mk(&a), mk(&b));
        prop_assert_eq!(x.mul(&y).unwrap().det(), spec.mul(x.det(), y.det()));
    }
}
