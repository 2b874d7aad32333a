use gwpower::astructure::{a_n, torsion_term, AStructure};
use gwpower::etale::{etale_sym, total_degree, EtaleField, EtaleSum};
use gwpower::expr::{parse_expression, Expr, Kind};
use gwpower::field::{BaseField, SquareClass};
use gwpower::goettsche::{classical_series, goettsche_series, real_macdonald};
use gwpower::gram::{diagonalize_gram, trace_form, trace_gram_matrix};
use gwpower::gw::{gw_equal, GwElement};
use gwpower::hilbert::{hilbert_symbol, relevant_places, Place};
use gwpower::power::{
    convert_lambda_power, euler_factorize, gen_binomial, power_pow, reconstruct, Binomial, Conversion,
    PowerStructure,
};
use gwpower::ring::{Integers, Ring};
use gwpower::series::{self, Series};
use gwpower::variety::{chi_c, sym_chi, sym_class, SymmetricPowers, VarietyClass, VarietyRing};
use gwpower::witt::{witt_product, witt_unit};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const Q: BaseField = BaseField::Rationals;
const R: BaseField = BaseField::Reals;

fn nonzero(bound: i64) -> impl Strategy<Value = i64> {
    (-bound..=bound).prop_filter("nonzero", |a| *a != 0)
}

fn gw_q() -> impl Strategy<Value = GwElement> {
    prop::collection::vec((nonzero(30), -3i64..=3), 0..4)
        .prop_map(|terms| GwElement::from_int_terms(Q, terms).unwrap())
}

fn int_series(order: usize) -> impl Strategy<Value = Series<i64>> {
    prop::collection::vec(-3i64..=3, order).prop_map(|mut c| {
        c.insert(0, 1);
        Series::from_coeffs(c)
    })
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hilbert_symbol_laws(a in nonzero(200), b in nonzero(200), c in nonzero(200)) {
        let places = relevant_places([a, b, c]);
        let mut product = 1;
        for &v in &places {
            let ab = hilbert_symbol(a, b, v).unwrap();
            prop_assert_eq!(ab, hilbert_symbol(b, a, v).unwrap());
            let ac = hilbert_symbol(a, c, v).unwrap();
            prop_assert_eq!(hilbert_symbol(a, b * c, v).unwrap(), ab * ac);
            product *= ab as i64;
        }
        prop_assert!(places.contains(&Place::Infinity));
        prop_assert_eq!(product, 1);
    }

    #[test]
    fn gw_equal_is_an_equivalence(x in gw_q(), y in gw_q(), z in gw_q()) {
        prop_assert!(gw_equal(&x, &x).unwrap());
        let xy = gw_equal(&x, &y).unwrap();
        prop_assert_eq!(xy, gw_equal(&y, &x).unwrap());
        if xy && gw_equal(&y, &z).unwrap() {
            prop_assert!(gw_equal(&x, &z).unwrap());
        }
        // equality is compatible with the ring operations
        let shifted = x.try_add(&z).unwrap().try_sub(&z).unwrap();
        prop_assert!(gw_equal(&shifted, &x).unwrap());
    }

    #[test]
    fn congruent_gram_matrices(d in prop::collection::vec(nonzero(20), 1..4), p in prop::collection::vec(-3i64..=3, 9)) {
        let n = d.len();
        let mut m = vec![vec![rat(0); n]; n];
        for (i, &x) in d.iter().enumerate() {
            m[i][i] = rat(x);
        }
        // P is unit lower triangular with random entries below the diagonal
        let pm: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { rat(1) } else if j < i { rat(p[i * 3 + j]) } else { rat(0) }).collect())
            .collect();
        let mut c = vec![vec![rat(0); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = rat(0);
                for k in 0..n {
                    for l in 0..n {
                        s += &pm[k][i] * &m[k][l] * &pm[l][j];
                    }
                }
                c[i][j] = s;
            }
        }
        let a = diagonalize_gram(Q, &m).unwrap();
        let b = diagonalize_gram(Q, &c).unwrap();
        prop_assert!(gw_equal(&a, &b).unwrap());
    }

    #[test]
    fn rank_and_discriminant_are_homomorphisms(x in gw_q(), y in gw_q()) {
        let s = x.try_add(&y).unwrap();
        prop_assert_eq!(s.rank(), x.rank() + y.rank());
        prop_assert_eq!(s.discriminant(), Q.mul_classes(x.discriminant(), y.discriminant()));
        prop_assert_eq!(x.try_mul(&y).unwrap().rank(), x.rank() * y.rank());
    }

    #[test]
    fn trace_form_matches_gram_diagonalization(gens in prop::collection::vec(nonzero(15), 1..=3)) {
        let classes: Vec<SquareClass> = gens.iter().map(|&a| Q.class_of_int(a).unwrap()).collect();
        if let Ok(l) = EtaleField::from_generators(Q, &classes) {
            let reps: Vec<BigRational> = l.generators().iter().map(|c| rat(c.0)).collect();
            let gram = diagonalize_gram(Q, &trace_gram_matrix(&reps)).unwrap();
            prop_assert!(gw_equal(&l.trace_form(), &gram).unwrap());
            prop_assert!(gw_equal(&trace_form(Q, &classes).unwrap(), &gram).unwrap());
        }
    }

    #[test]
    fn chain_relation(a in nonzero(50), b in nonzero(50)) {
        prop_assume!(a + b != 0);
        let lhs = GwElement::from_int_terms(Q, [(a, 1), (b, 1)]).unwrap();
        let rhs = GwElement::from_int_terms(Q, [(a + b, 1), (a * b * (a + b), 1)]).unwrap();
        prop_assert!(gw_equal(&lhs, &rhs).unwrap());
        for n in 0..=5 {
            prop_assert!(gw_equal(&a_n(&lhs, n).unwrap(), &a_n(&rhs, n).unwrap()).unwrap());
        }
    }

    #[test]
    fn euler_factorization_round_trips(f in int_series(7)) {
        let cs = euler_factorize(&Binomial, &f).unwrap();
        let back = reconstruct(&Binomial, &cs, 7).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn power_laws_over_gw(f in prop::collection::vec(gw_q(), 4), r in gw_q(), s in gw_q()) {
        let ps = AStructure::new(Q);
        let ring = ps.ring();
        let mut c = vec![GwElement::one(Q)];
        c.extend(f);
        let f = Series::from_coeffs(c);
        let fr = power_pow(&ps, &f, &r).unwrap();
        let fs = power_pow(&ps, &f, &s).unwrap();
        let sum = power_pow(&ps, &f, &ring.add(&r, &s)).unwrap();
        let prod = series::mul(ring, &fr, &fs);
        for n in 0..=4 {
            prop_assert!(gw_equal(sum.coeff(n), prod.coeff(n)).unwrap());
        }
        let rs = power_pow(&ps, &f, &ring.mul(&r, &s)).unwrap();
        let nested = power_pow(&ps, &fr, &s).unwrap();
        for n in 0..=4 {
            prop_assert!(gw_equal(rs.coeff(n), nested.coeff(n)).unwrap());
        }
    }

    #[test]
    fn lambda_conversion_round_trips(c in prop::collection::vec(-4i64..=4, 6)) {
        let mut coeffs = vec![1];
        coeffs.extend(c);
        let data = Series::from_coeffs(coeffs);
        let b = convert_lambda_power(&Integers, &data, Conversion::LambdaToB).unwrap();
        prop_assert_eq!(&convert_lambda_power(&Integers, &b, Conversion::BToLambda).unwrap(), &data);
        let l = convert_lambda_power(&Integers, &data, Conversion::BToLambda).unwrap();
        prop_assert_eq!(&convert_lambda_power(&Integers, &l, Conversion::LambdaToB).unwrap(), &data);
    }

    #[test]
    fn witt_product_ring_laws(f in int_series(5), g in int_series(5), h in int_series(5)) {
        let z = Integers;
        let fg = witt_product(&z, &f, &g).unwrap();
        prop_assert_eq!(&fg, &witt_product(&z, &g, &f).unwrap());
        let left = witt_product(&z, &fg, &h).unwrap();
        let right = witt_product(&z, &f, &witt_product(&z, &g, &h).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(&witt_product(&z, &f, &witt_unit(&z, 5)).unwrap(), &f);
        // Witt addition is series multiplication
        let dist = witt_product(&z, &f, &series::mul(&z, &g, &h)).unwrap();
        prop_assert_eq!(&dist, &series::mul(&z, &fg, &witt_product(&z, &f, &h).unwrap()));
    }

    #[test]
    fn rank_law_for_virtual_forms(q in gw_q(), n in 0usize..=8) {
        let a = a_n(&q, n as i64).unwrap();
        prop_assert_eq!(a.rank(), gen_binomial(q.rank() + n as i64 - 1, n as i64));
        prop_assert_eq!(a.rank(), Binomial.b(&q.rank(), n).unwrap());
    }

    #[test]
    fn torsion_term_is_two_torsion(a in nonzero(60)) {
        for field in [Q, R, BaseField::finite(5).unwrap(), BaseField::QuadraticallyClosed] {
            let Ok(c) = field.class_of_int(a) else { continue };
            let t = torsion_term(field, c);
            prop_assert!(gw_equal(&t.scale(2), &GwElement::zero(field)).unwrap());
            if field != Q {
                prop_assert!(gw_equal(&t, &GwElement::zero(field)).unwrap());
            }
        }
    }

    #[test]
    fn real_signature_law(a in -6i64..=6, b in -6i64..=6) {
        let q = GwElement::from_int_terms(R, [(1, a), (-1, b)]).unwrap();
        let s = AStructure::new(R).expand(&q, 10).unwrap();
        let rm = real_macdonald(a + b, a - b, 10).unwrap();
        for n in 0..=10 {
            prop_assert_eq!(s.coeff(n).signature().unwrap(), rm[n]);
        }
    }

    #[test]
    fn goettsche_rank_specialization(q in gw_q()) {
        let g = goettsche_series(&q, 6).unwrap();
        let classical = classical_series(q.rank(), 6);
        for n in 0..=6 {
            prop_assert_eq!(g.coeff(n).rank(), classical[n]);
        }
    }
}

fn variety_class() -> impl Strategy<Value = VarietyClass> {
    let atom = prop_oneof![
        Just(VarietyClass::point(Q)),
        (0u32..=2).prop_map(|n| VarietyClass::affine(Q, n)),
        (0u32..=2).prop_map(|n| VarietyClass::projective(Q, n)),
        Just(VarietyClass::torus(Q)),
        prop::sample::select(vec![2i64, 3, -1, 5]).prop_map(|a| VarietyClass::etale(Q, &[Q.class_of_int(a).unwrap()]).unwrap()),
        Just(VarietyClass::etale(Q, &[SquareClass(2), SquareClass(3)]).unwrap()),
    ];
    prop::collection::vec((atom, -2i64..=2), 1..3).prop_map(|parts| {
        parts.into_iter().fold(VarietyClass::zero(Q), |acc, (c, k)| acc.try_add(&c.scale(k)).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn chi_is_a_ring_homomorphism(x in variety_class(), y in variety_class()) {
        let cx = chi_c(&x).unwrap();
        let cy = chi_c(&y).unwrap();
        prop_assert!(gw_equal(&chi_c(&x.try_add(&y).unwrap()).unwrap(), &cx.try_add(&cy).unwrap()).unwrap());
        prop_assert!(gw_equal(&chi_c(&x.try_mul(&y).unwrap()).unwrap(), &cx.try_mul(&cy).unwrap()).unwrap());
    }

    #[test]
    fn sym_class_convolution(x in variety_class(), y in variety_class(), n in 0usize..=3) {
        let ring = VarietyRing { field: Q };
        let lhs = sym_class(&x.try_add(&y).unwrap(), n).unwrap();
        let mut rhs = VarietyClass::zero(Q);
        for i in 0..=n {
            let term = sym_class(&x, i).unwrap().try_mul(&sym_class(&y, n - i).unwrap()).unwrap();
            rhs = ring.add(&rhs, &term);
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sym_chi_rank_law_and_conjecture(x in variety_class(), n in 0usize..=4) {
        let chi = chi_c(&x).unwrap();
        let s = sym_chi(&x, n).unwrap();
        prop_assert_eq!(s.rank(), gen_binomial(chi.rank() + n as i64 - 1, n as i64));
        prop_assert!(gw_equal(&s, &a_n(&chi, n as i64).unwrap()).unwrap());
        prop_assert!(gw_equal(&s, &chi_c(&sym_class(&x, n).unwrap()).unwrap()).unwrap());
    }

    #[test]
    fn real_sym_chi_signatures(a in -2i64..=2, b in -2i64..=2, m in 0u32..=2, g in 0u32..=3) {
        let c = VarietyClass::etale(R, &[R.minus_one()]).unwrap().scale(a)
            .try_add(&VarietyClass::affine(R, m).scale(b)).unwrap()
            .try_add(&VarietyClass::curve(R, g)).unwrap();
        let chi = chi_c(&c).unwrap();
        let rm = real_macdonald(chi.rank(), chi.signature().unwrap(), 6).unwrap();
        for n in 0..=6 {
            prop_assert_eq!(sym_chi(&c, n).unwrap().signature().unwrap(), rm[n]);
        }
    }

    #[test]
    fn etale_sym_total_degree(gens in prop::collection::vec(prop::sample::select(vec![-1i64, 2, 3, 5, 7]), 1..=3), k in 1i64..=2, n in 0usize..=4) {
        let classes: Vec<SquareClass> = gens.iter().map(|&a| Q.class_of_int(a).unwrap()).collect();
        prop_assume!(EtaleField::from_generators(Q, &classes).is_ok());
        let l = EtaleField::from_generators(Q, &classes).unwrap();
        let parts: EtaleSum = [(l.clone(), k)].into_iter().collect();
        let deg = l.degree() as i64 * k;
        let sym = etale_sym(Q, &parts, n).unwrap();
        prop_assert_eq!(total_degree(&sym), gen_binomial(deg + n as i64 - 1, n as i64));
    }
}

fn gw_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..20).prop_map(Expr::Int),
        (nonzero(30), 1i64..5).prop_map(|(num, den)| Expr::Class { num, den }),
        Just(Expr::Hyperbolic),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
        ]
    })
}

fn variety_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..9).prop_map(Expr::Int),
        Just(Expr::Point),
        (0u32..4).prop_map(Expr::Affine),
        (0u32..4).prop_map(Expr::Projective),
        Just(Expr::Torus),
        (0u32..4).prop_map(Expr::Curve),
        prop::collection::vec(nonzero(12), 1..3).prop_map(Expr::Etale),
        (0u32..3).prop_map(Expr::Abelian),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (0u32..4, inner.clone()).prop_map(|(n, e)| Expr::Sym(n, Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
        ]
    })
}

proptest! {
    #[test]
    fn gw_printing_round_trips(e in gw_expr()) {
        prop_assert_eq!(parse_expression(&e.to_string(), Kind::Gw).unwrap(), e);
    }

    #[test]
    fn variety_printing_round_trips(e in variety_expr()) {
        prop_assert_eq!(parse_expression(&e.to_string(), Kind::Variety).unwrap(), e);
    }

    #[test]
    fn symmetric_powers_structure_matches_sym_class(n in 0usize..=3) {
        let c = VarietyClass::projective(Q, 1).try_add(&VarietyClass::torus(Q)).unwrap();
        prop_assert_eq!(SymmetricPowers::new(Q).b(&c, n).unwrap(), sym_class(&c, n).unwrap());
    }
}
