use num_complex::Complex64;
use proptest::prelude::*;

use watt_hopf::linalg::ComplexVec;
use watt_hopf::multilinear::multilinear;
use watt_hopf::{watt, WattModel};

fn cvec() -> impl Strategy<Value = ComplexVec> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3)
        .prop_map(|v| ComplexVec(v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()))
}

fn params() -> impl Strategy<Value = (f64, f64)> {
    (0.05f64..0.95, 0.1f64..2.5)
}

fn close(a: &ComplexVec, b: &ComplexVec, tol: f64) -> bool {
    a.distance(b) <= tol * b.norm().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jet_forms_match_closed_forms(order in 2usize..=7, (b, a) in params(), args in prop::collection::vec(cvec(), 7)) {
        let model = WattModel::critical(b, a).unwrap();
        let refs: Vec<&ComplexVec> = args[..order].iter().collect();
        let jet = multilinear(&model, order, &refs).unwrap();
        let exact = watt::exact_multilinear(order, &refs, b, a).unwrap();
        prop_assert!(close(&jet, &exact, 1e-9), "order {order}: {jet:?} vs {exact:?}");
    }

    #[test]
    fn forms_are_symmetric_bit_for_bit(order in 2usize..=5, (b, a) in params(), args in prop::collection::vec(cvec(), 5), rot in 1usize..5) {
        let model = WattModel::critical(b, a).unwrap();
        let mut refs: Vec<&ComplexVec> = args[..order].iter().collect();
        let first = multilinear(&model, order, &refs).unwrap();
        refs.rotate_left(rot % order);
        refs.swap(0, order - 1);
        prop_assert_eq!(first, multilinear(&model, order, &refs).unwrap());
    }

    #[test]
    fn forms_are_linear_in_each_argument(order in 2usize..=4, (b, a) in params(), args in prop::collection::vec(cvec(), 4), extra in cvec(), k in (-2.0f64..2.0, -2.0f64..2.0)) {
        let model = WattModel::critical(b, a).unwrap();
        let k = Complex64::new(k.0, k.1);
        let combo = ComplexVec(args[0].iter().zip(extra.iter()).map(|(u, v)| u * k + v).collect());
        let mut lhs_args: Vec<&ComplexVec> = args[..order].iter().collect();
        lhs_args[0] = &combo;
        let lhs = multilinear(&model, order, &lhs_args).unwrap();
        let base = multilinear(&model, order, &args[..order].iter().collect::<Vec<_>>()).unwrap();
        lhs_args[0] = &extra;
        let other = multilinear(&model, order, &lhs_args).unwrap();
        let rhs = ComplexVec(base.iter().zip(other.iter()).map(|(u, v)| u * k + v).collect());
        prop_assert!(close(&lhs, &rhs, 1e-10));
    }
}

#[test]
fn forms_do_not_depend_on_epsilon() {
    let args: Vec<ComplexVec> = (0..3)
        .map(|k| ComplexVec(vec![Complex64::new(0.1 * k as f64, 0.3), Complex64::new(-0.2, 0.5), Complex64::new(0.7, -0.1)]))
        .collect();
    let refs: Vec<&ComplexVec> = args.iter().collect();
    let at_c = multilinear(&WattModel::critical(0.6, 1.1).unwrap(), 3, &refs).unwrap();
    let off = multilinear(&WattModel::new(watt::Params::new(0.6, 1.1, 2.5).unwrap()), 3, &refs).unwrap();
    assert!(close(&at_c, &off, 1e-14));
}
