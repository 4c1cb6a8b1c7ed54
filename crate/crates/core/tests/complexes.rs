use std::collections::BTreeMap;

use maclab::chevalley::{build_deformed, build_truncated, GradedLie, TwistedAlgebra};
use maclab::cohomology::{build_complex, cohomology_dims, Bounds, Coefficients, CohomologyTable, WeightMode};
use maclab::folding::DiagramAutomorphism;
use maclab::lie::LieAlgebra;
use maclab::qseries::BiPoly;
use maclab::rootdata::CartanType;
use maclab::{Field, Q};
use serde_json::json;

fn dims(g: &GradedLie<Q>, relative: bool) -> CohomologyTable {
    let c = build_complex(g, Coefficients::Trivial, relative).unwrap();
    cohomology_dims(&c, &Bounds::default()).unwrap()
}

fn swap_a2() -> TwistedAlgebra<Q> {
    TwistedAlgebra::new(&DiagramAutomorphism::standard(CartanType::of("A2")).unwrap()).unwrap()
}

#[test]
fn absolute_is_g0_times_relative() {
    let a1 = TwistedAlgebra::<Q>::untwisted(CartanType::of("A1")).unwrap();
    let a2 = TwistedAlgebra::<Q>::untwisted(CartanType::of("A2")).unwrap();
    let cases: Vec<(GradedLie<Q>, &str)> = vec![
        (build_truncated(&a1, &[0], 2).unwrap(), "1 + t^3"),
        (build_truncated(&a1, &[], 2).unwrap(), "1 + t"),
        (build_truncated(&swap_a2(), &[0], 2).unwrap(), "1 + t^3"),
        (build_truncated(&a2, &[0], 1).unwrap(), "1 + t + t^3 + t^4"),
    ];
    for (g, h_g0) in cases {
        let abs = dims(&g, false).to_bipoly();
        let rel = dims(&g, true).to_bipoly();
        assert_eq!(abs, rel.mul(&h_g0.parse::<BiPoly>().unwrap()), "{}", g.descriptor);
    }
}

#[test]
fn chain_and_cohomology_euler_agree() {
    let a1 = TwistedAlgebra::<Q>::untwisted(CartanType::of("A1")).unwrap();
    for (g, rel) in [
        (build_truncated(&a1, &[0], 3).unwrap(), false),
        (build_truncated(&a1, &[], 2).unwrap(), true),
        (build_truncated(&swap_a2(), &[], 2).unwrap(), true),
    ] {
        let c = build_complex(&g, Coefficients::Trivial, rel).unwrap();
        let d = c.compute(&Bounds::default()).unwrap();
        assert_eq!(d.chains.weighted_euler(), d.cohomology.weighted_euler(), "{}", g.descriptor);
    }
}

#[test]
fn weight_zero_slices_suffice() {
    let a1 = TwistedAlgebra::<Q>::untwisted(CartanType::of("A1")).unwrap();
    let g = build_truncated(&a1, &[], 2).unwrap();
    let c = build_complex(&g, Coefficients::Trivial, false).unwrap();
    let all = cohomology_dims(&c, &Bounds::default()).unwrap();
    let zero = cohomology_dims(&c, &Bounds { weights: WeightMode::ZeroOnly, ..Bounds::default() }).unwrap();
    assert_eq!(all, zero);
}

#[test]
fn twisted_deformation_is_tensor_power() {
    let tw = swap_a2();
    let g = build_deformed(&tw, &[0], 2, Q::from_i64(1)).unwrap();
    let c = build_complex(&g, Coefficients::Trivial, false).unwrap();
    let t = cohomology_dims(&c, &Bounds { weights: WeightMode::ZeroOnly, ..Bounds::default() }).unwrap();
    let h: BiPoly = "1 + t^3 + t^5 + t^8".parse().unwrap();
    let want: BTreeMap<usize, usize> = h
        .terms()
        .map(|((d, _), c)| (d as usize, usize::try_from(c.clone()).unwrap()))
        .collect();
    assert_eq!(t.forget_z(), want);
    let t0 = build_truncated(&tw, &[0], 2).unwrap();
    let c0 = build_complex(&t0, Coefficients::Trivial, false).unwrap();
    let z0 = cohomology_dims(&c0, &Bounds { weights: WeightMode::ZeroOnly, ..Bounds::default() }).unwrap();
    assert_eq!(z0.forget_z(), want);
}

#[test]
fn slice_cap_reports_slice() {
    let a1 = TwistedAlgebra::<Q>::untwisted(CartanType::of("A1")).unwrap();
    let g = build_truncated(&a1, &[0], 2).unwrap();
    let c = build_complex(&g, Coefficients::Trivial, false).unwrap();
    let err = cohomology_dims(&c, &Bounds { slice_cap: 2, ..Bounds::default() }).unwrap_err();
    assert!(err.to_string().contains("slice dimension"), "{err}");
    assert!(err.to_string().contains("z="), "{err}");
}

#[test]
fn relative_to_whole_algebra_is_trivial() {
    let a2 = TwistedAlgebra::<Q>::untwisted(CartanType::of("A2")).unwrap();
    let g = build_truncated(&a2, &[0, 1], 1).unwrap();
    assert_eq!(dims(&g, true).to_bipoly(), BiPoly::one());
}

#[test]
fn table_json_round_trip() {
    let a1 = TwistedAlgebra::<Q>::untwisted(CartanType::of("A1")).unwrap();
    let t = dims(&build_truncated(&a1, &[0], 2).unwrap(), false);
    let v = serde_json::to_value(&t).unwrap();
    assert_eq!(
        v,
        json!([
            {"coh": 0, "z": 0, "dim": 1},
            {"coh": 3, "z": 0, "dim": 1},
            {"coh": 3, "z": 3, "dim": 1},
            {"coh": 6, "z": 3, "dim": 1}
        ])
    );
    let back: CohomologyTable = serde_json::from_value(v).unwrap();
    assert_eq!(back, t);
}

#[test]
fn symmetric_coefficients_on_abelian() {
    let lie: LieAlgebra<Q> = LieAlgebra::abelian(vec!["a".into()]);
    let g = GradedLie::from_parts(lie, vec![1], vec![vec![]], vec![]).unwrap();
    let c = build_complex(&g, Coefficients::SymmetricPower(2), false).unwrap();
    let t = cohomology_dims(&c, &Bounds::default()).unwrap();
    assert_eq!(t.get_s(0, 2, 2), 1);
    assert_eq!(t.get_s(1, 3, 2), 1);
    assert_eq!(t.total(), 2);
}
