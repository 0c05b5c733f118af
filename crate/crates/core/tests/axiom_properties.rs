//! Property-based invariants across the algebraic stack: field axioms,
//! Galois action, and composition identities on arbitrary sampled inputs.

use proptest::prelude::*;
use trialab_core::cyclic::{basis_vec, induce, DIM};
use trialab_core::extension::make_extension;
use trialab_core::field::{FieldElement, FiniteField};
use trialab_core::symmetric::{okubo, para_cayley_split};

fn small_field() -> impl Strategy<Value = FiniteField> {
    prop_oneof![
        Just(FiniteField::new(3, 1).unwrap()),
        Just(FiniteField::new(5, 1).unwrap()),
        Just(FiniteField::new(7, 1).unwrap()),
        Just(FiniteField::new(2, 2).unwrap()),
        Just(FiniteField::new(3, 2).unwrap()),
    ]
}

fn element_of(field: &FiniteField) -> impl Strategy<Value = FieldElement> {
    let f = field.clone();
    (0..field.order_u64()).prop_map(move |i| f.element_from_index(i))
}

proptest! {
    #[test]
    fn field_axioms((f, idx) in small_field().prop_flat_map(|f| {
        let q = f.order_u64();
        (Just(f), prop::collection::vec(0..q, 3))
    })) {
        let a = f.element_from_index(idx[0]);
        let b = f.element_from_index(idx[1]);
        let c = f.element_from_index(idx[2]);
        prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(
            f.mul(&f.add(&a, &b), &c),
            f.add(&f.mul(&a, &c), &f.mul(&b, &c))
        );
        if !a.is_zero() {
            let inv = f.inv(&a).unwrap();
            prop_assert_eq!(f.mul(&a, &inv), f.one());
        }
    }

    #[test]
    fn frobenius_is_an_automorphism_and_norm_is_invariant(
        (f, idx) in prop_oneof![
            Just(FiniteField::new(3, 1).unwrap()),
            Just(FiniteField::new(7, 1).unwrap()),
            Just(FiniteField::new(2, 2).unwrap()),
        ].prop_flat_map(|f| {
            let q3 = f.order_u64().pow(3);
            (Just(f), prop::collection::vec(0..q3, 2))
        })
    ) {
        let ext = make_extension(&f).unwrap();
        let x = ext.top().element_from_index(idx[0]);
        let y = ext.top().element_from_index(idx[1]);
        prop_assert_eq!(
            ext.rho(&ext.top().mul(&x, &y)),
            ext.top().mul(&ext.rho(&x), &ext.rho(&y))
        );
        prop_assert_eq!(
            ext.rho(&ext.top().add(&x, &y)),
            ext.top().add(&ext.rho(&x), &ext.rho(&y))
        );
        prop_assert_eq!(ext.norm(&ext.rho(&x)), ext.norm(&x));
        prop_assert_eq!(ext.trace(&ext.rho(&x)), ext.trace(&x));
        prop_assert_eq!(ext.rho(&ext.theta(&x)), x);
    }

    #[test]
    fn hilbert90_round_trip_gf343(i in 0u64..342) {
        let f = FiniteField::new(7, 1).unwrap();
        let ext = make_extension(&f).unwrap();
        let x = ext.top().element_from_index(i + 1);
        // mu = x theta(x)^{-1} always has norm 1; hilbert90 must solve it
        let mu = ext
            .top()
            .mul(&x, &ext.top().inv(&ext.theta(&x)).unwrap());
        let zeta = ext.hilbert90(&mu, trialab_core::Aut::Theta).unwrap();
        let back = ext
            .top()
            .mul(&zeta, &ext.top().inv(&ext.theta(&zeta)).unwrap());
        prop_assert_eq!(back, mu);
    }

    #[test]
    fn symmetric_norm_multiplicativity(
        xs in prop::collection::vec(0u64..7, DIM),
        ys in prop::collection::vec(0u64..7, DIM),
        okubo_side in any::<bool>(),
    ) {
        let f = FiniteField::new(7, 1).unwrap();
        let sigma = if okubo_side {
            okubo(&f).unwrap()
        } else {
            para_cayley_split(&f)
        };
        let x: Vec<FieldElement> = xs.iter().map(|&i| f.from_int(i)).collect();
        let y: Vec<FieldElement> = ys.iter().map(|&i| f.from_int(i)).collect();
        prop_assert_eq!(
            sigma.norm(&sigma.star(&x, &y)),
            f.mul(&sigma.norm(&x), &sigma.norm(&y))
        );
        // polar associativity on the sampled pair against a basis vector
        let e0 = basis_vec(&f, 0);
        prop_assert_eq!(
            sigma.bilinear(&sigma.star(&x, &y), &e0),
            sigma.bilinear(&x, &sigma.star(&y, &e0))
        );
    }

    #[test]
    fn cyclic_flex_identities(
        xs in prop::collection::vec(0u64..64, DIM),
        ys in prop::collection::vec(0u64..64, DIM),
    ) {
        let f = FiniteField::new(2, 2).unwrap();
        let ext = make_extension(&f).unwrap();
        let gamma = induce(&para_cayley_split(&f), &ext).unwrap();
        let top = gamma.top();
        let x: Vec<FieldElement> = xs.iter().map(|&i| top.element_from_index(i)).collect();
        let y: Vec<FieldElement> = ys.iter().map(|&i| top.element_from_index(i)).collect();
        let qx = gamma.qform(&x);
        let lhs = gamma.star(&gamma.star(&x, &y), &x);
        let want: Vec<FieldElement> = y.iter().map(|c| top.mul(&ext.theta(&qx), c)).collect();
        prop_assert_eq!(lhs, want);
        let lhs2 = gamma.star(&x, &gamma.star(&y, &x));
        let want2: Vec<FieldElement> = y.iter().map(|c| top.mul(&ext.rho(&qx), c)).collect();
        prop_assert_eq!(lhs2, want2);
    }
}
