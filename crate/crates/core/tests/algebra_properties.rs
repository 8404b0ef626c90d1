use hyperam_core::algebra::{AlgebraSpec, BilinearForm, HNumber, Involution};
use proptest::prelude::*;

fn number(dim: usize) -> impl Strategy<Value = HNumber<f64>> {
    prop::collection::vec(-5.0..5.0f64, dim).prop_map(HNumber::new)
}

fn close(a: &HNumber<f64>, b: &HNumber<f64>, tol: f64) -> bool {
    a.max_abs_diff(b) <= tol
}

/// Hamilton product written out by hand.
fn hamilton(p: &[f64], q: &[f64]) -> [f64; 4] {
    let (a1, b1, c1, d1) = (p[0], p[1], p[2], p[3]);
    let (a2, b2, c2, d2) = (q[0], q[1], q[2], q[3]);
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

proptest! {
    #[test]
    fn quaternion_product_matches_hamilton(p in number(4), q in number(4)) {
        let spec = AlgebraSpec::<f64>::quaternion();
        let got = spec.mul(&p, &q).unwrap();
        let want = HNumber::new(hamilton(p.coeffs(), q.coeffs()).to_vec());
        prop_assert!(close(&got, &want, 1e-12));
    }

    #[test]
    fn complex_product_matches_std_formula(p in number(2), q in number(2)) {
        let got = AlgebraSpec::<f64>::complex().mul(&p, &q).unwrap();
        let (a, b, c, d) = (p.coeffs()[0], p.coeffs()[1], q.coeffs()[0], q.coeffs()[1]);
        prop_assert!(close(&got, &HNumber::new(vec![a * c - b * d, a * d + b * c]), 1e-12));
    }

    #[test]
    fn composition_algebras_multiply_norms(
        p in number(8),
        q in number(8),
        which in prop::sample::select(vec![2usize, 4, 8]),
    ) {
        let spec = match which {
            2 => AlgebraSpec::<f64>::complex(),
            4 => AlgebraSpec::quaternion(),
            _ => AlgebraSpec::octonion(),
        };
        let (p, q) = (HNumber::new(p.coeffs()[..which].to_vec()), HNumber::new(q.coeffs()[..which].to_vec()));
        let pq = spec.mul(&p, &q).unwrap();
        prop_assert!((pq.norm() - p.norm() * q.norm()).abs() <= 1e-10 * (1.0 + pq.norm()));
    }

    #[test]
    fn octonions_are_alternative(x in number(8), y in number(8)) {
        let o = AlgebraSpec::<f64>::octonion();
        let xx = o.mul(&x, &x).unwrap();
        let left = o.mul(&x, &o.mul(&x, &y).unwrap()).unwrap();
        prop_assert!(close(&left, &o.mul(&xx, &y).unwrap(), 1e-9));
        let yy = o.mul(&y, &y).unwrap();
        let right = o.mul(&o.mul(&x, &y).unwrap(), &y).unwrap();
        prop_assert!(close(&right, &o.mul(&x, &yy).unwrap(), 1e-9));
    }

    #[test]
    fn conjugation_reverses_products(x in number(8), y in number(8)) {
        let o = AlgebraSpec::<f64>::octonion();
        let inv = Involution::Natural;
        let lhs = inv.apply(&o.mul(&x, &y).unwrap());
        let rhs = o.mul(&inv.apply(&y), &inv.apply(&x)).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-10));
    }

    #[test]
    fn natural_form_is_the_euclidean_inner_product(
        p in number(8),
        q in number(8),
        which in prop::sample::select(vec![2usize, 4, 8]),
    ) {
        let spec = match which {
            2 => AlgebraSpec::<f64>::complex(),
            4 => AlgebraSpec::quaternion(),
            _ => AlgebraSpec::octonion(),
        };
        let form = BilinearForm::new(&spec, Involution::Natural);
        let (p, q) = (&p.coeffs()[..which], &q.coeffs()[..which]);
        let dot: f64 = p.iter().zip(q).map(|(a, b)| a * b).sum();
        prop_assert!((form.eval(p, q) - dot).abs() < 1e-10);
        prop_assert!(form.diagonal().is_some());
    }

    #[test]
    fn hyperbolic_form_is_indefinite(p in number(2), q in number(2)) {
        let spec = AlgebraSpec::<f64>::hyperbolic();
        let form = BilinearForm::new(&spec, Involution::Natural);
        let (a, b) = (p.coeffs(), q.coeffs());
        prop_assert!((form.eval(a, b) - (a[0] * b[0] - a[1] * b[1])).abs() < 1e-12);
    }

    #[test]
    fn products_are_bilinear(x in number(4), y in number(4), z in number(4), s in -3.0..3.0f64) {
        for spec in [AlgebraSpec::<f64>::quaternion(), AlgebraSpec::tessarine()] {
            let lhs = spec.mul(&x.checked_add(&y.scale(s)).unwrap(), &z).unwrap();
            let rhs = spec
                .mul(&x, &z)
                .unwrap()
                .checked_add(&spec.mul(&y, &z).unwrap().scale(s))
                .unwrap();
            prop_assert!(close(&lhs, &rhs, 1e-10));
        }
    }

    #[test]
    fn tessarines_commute(x in number(4), y in number(4)) {
        let t = AlgebraSpec::<f64>::tessarine();
        prop_assert!(close(&t.mul(&x, &y).unwrap(), &t.mul(&y, &x).unwrap(), 1e-12));
    }
}

#[test]
fn config_blocks_round_trip_for_doubled_algebras() {
    let sedenion = AlgebraSpec::<f64>::octonion()
        .cayley_dickson_double()
        .unwrap();
    assert_eq!(sedenion.dim(), 16);
    let back = AlgebraSpec::<f64>::from_config_block(&sedenion.to_config_block()).unwrap();
    assert_eq!(back.table(), sedenion.table());
}

#[test]
fn f32_algebra_agrees_with_f64() {
    let o64 = AlgebraSpec::<f64>::octonion();
    let o32 = AlgebraSpec::<f32>::octonion();
    let x: Vec<f64> = (0..8).map(|k| (k as f64 * 0.37).sin()).collect();
    let y: Vec<f64> = (0..8).map(|k| (k as f64 * 0.91).cos()).collect();
    let a = o64
        .mul(&HNumber::new(x.clone()), &HNumber::new(y.clone()))
        .unwrap();
    let b = o32
        .mul(
            &HNumber::new(x.iter().map(|&v| v as f32).collect()),
            &HNumber::new(y.iter().map(|&v| v as f32).collect()),
        )
        .unwrap();
    for (p, q) in a.coeffs().iter().zip(b.coeffs()) {
        assert!((p - f64::from(*q)).abs() < 1e-5);
    }
}
