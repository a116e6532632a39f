//! Property-based invariants over randomly generated inputs.

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use wavegroup_core::{
    apply_duflo, field_norm, hs_norm, operator_norm_bound, DufloMooreOperator, DufloPower,
    DufloSide, FieldEntry, GridFunction, GroupModel, GroupPoint, HaarGrid, HsMatrix,
    OperatorField, PlancherelModel, SigmaLabel,
};

fn complex_strategy() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn matrix_strategy(n: usize) -> impl Strategy<Value = HsMatrix> {
    proptest::collection::vec(complex_strategy(), n * n).prop_map(move |data| {
        let mut m = HsMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, data[i * n + j]);
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Submultiplicativity of the Hilbert-Schmidt norm against the
    /// operator norm: ||A B||_2 <= ||A||_inf ||B||_2.
    #[test]
    fn hs_norm_submultiplicative(a in matrix_strategy(5), b in matrix_strategy(5)) {
        let ab = a.mul(&b).unwrap();
        let bound = operator_norm_bound(&a) * hs_norm(&b);
        prop_assert!(ab.hs_norm() <= bound * (1.0 + 1e-12) + 1e-12);
    }

    /// The direct-integral norm satisfies the triangle inequality.
    #[test]
    fn field_norm_triangle(
        a1 in matrix_strategy(3),
        a2 in matrix_strategy(3),
        b1 in matrix_strategy(3),
        b2 in matrix_strategy(3),
        w1 in 0.01f64..2.0,
        w2 in 0.01f64..2.0,
    ) {
        let mk = |m1: &HsMatrix, m2: &HsMatrix| {
            OperatorField::new(vec![
                FieldEntry {
                    label: SigmaLabel::Character(0),
                    matrix: m1.clone(),
                    duflo: DufloMooreOperator::identity(3),
                    weight: w1,
                },
                FieldEntry {
                    label: SigmaLabel::Character(1),
                    matrix: m2.clone(),
                    duflo: DufloMooreOperator::identity(3),
                    weight: w2,
                },
            ])
            .unwrap()
        };
        let fa = mk(&a1, &a2);
        let fb = mk(&b1, &b2);
        let sum = fa.axpy(Complex64::new(1.0, 0.0), &fb).unwrap();
        let lhs = field_norm(&sum).unwrap();
        let rhs = field_norm(&fa).unwrap() + field_norm(&fb).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-12);
    }

    /// Duflo-Moore scaling by +1 then -1 returns the original matrix when
    /// the diagonal is representably invertible.
    #[test]
    fn duflo_power_roundtrip(
        a in matrix_strategy(4),
        diag in proptest::collection::vec(1e-6f64..1e6, 4),
    ) {
        let c = DufloMooreOperator::new(diag).unwrap();
        for side in [DufloSide::LeftOfMatrix, DufloSide::RightOfMatrix] {
            let up = apply_duflo(&c, &a, side, DufloPower::One).unwrap();
            let back = apply_duflo(&c, &up, side, DufloPower::MinusOne).unwrap();
            prop_assert!(back.sub(&a).unwrap().hs_norm() <= 1e-9 * a.hs_norm().max(1.0));
        }
    }

    /// Group axioms hold on random affine triples.
    #[test]
    fn affine_group_axioms(
        b1 in -5.0f64..5.0, a1 in 0.1f64..10.0,
        b2 in -5.0f64..5.0, a2 in 0.1f64..10.0,
        b3 in -5.0f64..5.0, a3 in 0.1f64..10.0,
    ) {
        let m = GroupModel::Affine;
        let g = GroupPoint::Affine { b: b1, a: a1 };
        let h = GroupPoint::Affine { b: b2, a: a2 };
        let k = GroupPoint::Affine { b: b3, a: a3 };
        let lhs = m.multiply(&m.multiply(&g, &h).unwrap(), &k).unwrap();
        let rhs = m.multiply(&g, &m.multiply(&h, &k).unwrap()).unwrap();
        let (GroupPoint::Affine { b: lb, a: la }, GroupPoint::Affine { b: rb, a: ra }) = (lhs, rhs)
        else { unreachable!() };
        prop_assert!((lb - rb).abs() <= 1e-9 * (1.0 + lb.abs()));
        prop_assert!((la - ra).abs() <= 1e-9 * (1.0 + la.abs()));
        // Modular homomorphism.
        let gh = m.multiply(&g, &h).unwrap();
        let delta = m.modular(&gh).unwrap();
        let product = m.modular(&g).unwrap() * m.modular(&h).unwrap();
        prop_assert!((delta - product).abs() <= 1e-12 * product.abs().max(1.0));
        // Inverse law.
        let ginv = m.inverse(&g).unwrap();
        let e = m.multiply(&g, &ginv).unwrap();
        let GroupPoint::Affine { b: eb, a: ea } = e else { unreachable!() };
        prop_assert!(eb.abs() < 1e-10 && (ea - 1.0).abs() < 1e-12);
    }

    /// Cyclic Plancherel is exactly unitary on random vectors.
    #[test]
    fn cyclic_parseval_exact(values in proptest::collection::vec(complex_strategy(), 16)) {
        let pm = PlancherelModel::cyclic(16);
        let f = GridFunction::new(Arc::clone(pm.group_grid()), values).unwrap();
        if f.norm_sq() > 1e-12 {
            prop_assert!(pm.parseval_defect(&f).unwrap() < 1e-12);
            let back = pm.inverse(&pm.forward(&f).unwrap()).unwrap();
            prop_assert!(back.sub(&f).unwrap().norm() <= 1e-10 * f.norm());
        }
    }

    /// Norms and inner products obey Cauchy-Schwarz on random grid pairs.
    #[test]
    fn grid_cauchy_schwarz(
        va in proptest::collection::vec(complex_strategy(), 12),
        vb in proptest::collection::vec(complex_strategy(), 12),
    ) {
        let grid = HaarGrid::cyclic(12);
        let f = GridFunction::new(Arc::clone(&grid), va).unwrap();
        let g = GridFunction::new(grid, vb).unwrap();
        let inner = f.inner(&g).unwrap().norm();
        prop_assert!(inner <= f.norm() * g.norm() * (1.0 + 1e-12) + 1e-12);
    }
}
