//! Cross-module pipelines through the library API.

use k3nl::chern::{net_counts, unigonal_counts, SurfaceChernData, UnigonalTable};
use k3nl::discriminant::discriminant_group;
use k3nl::divisor::{triangular_decomposition, MuVariant, NLKey};
use k3nl::lattice::{build_standard, divisibility, k3_lattice, lambda_g, orthogonal_complement, IntegralLattice, StandardLattice};
use k3nl::orbit::{nl_components, ComponentOptions, Locus};
use k3nl::siegel::{
    chi10, e4e6, e4e6_with, fit_weight10, independence_check, predict_nl, CoeffTable, GenusTwoIndex,
    HalfIntegralTable, NlQuantity,
};
use k3nl::Strategy;
use num_bigint::BigInt;
use num_rational::BigRational;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[test]
fn complement_of_polarization_matches_lambda_g() {
    let k3 = k3_lattice();
    for g in [3u64, 6, 11] {
        let h = k3.vector(&[(1, "e1"), (g as i64 - 1, "f1")]).unwrap();
        let perp = orthogonal_complement(&k3, &[h]).unwrap();
        let direct = lambda_g(g).unwrap();
        let a = discriminant_group(&perp.lattice).unwrap();
        let b = discriminant_group(&direct.lattice).unwrap();
        assert_eq!(a.invariant_factors(), b.invariant_factors(), "g={g}");
        assert_eq!(a.q(&a.generator(0)), b.q(&b.generator(0)), "g={g}");
    }
}

#[test]
fn lattice_text_round_trip() {
    let l = build_standard(StandardLattice::LambdaA1, Some(8)).unwrap();
    let back = IntegralLattice::from_text(&l.to_text()).unwrap();
    assert_eq!(back.gram(), l.gram());
    assert_eq!(back.labels(), l.labels());
}

#[test]
fn nodal_orbits_agree_with_decomposition() {
    for g in 3..20u64 {
        let report = nl_components(g, Locus::Nodal, ComponentOptions::default()).unwrap();
        let key = NLKey::new(g as i64, 0, -2).unwrap();
        let terms = triangular_decomposition(&key, MuVariant::DCorrected).unwrap();
        assert_eq!(report.count(), terms.len(), "g={g}");
    }
}

#[test]
fn witnesses_realize_their_components() {
    for locus in [Locus::A11, Locus::A2] {
        let opts = ComponentOptions { witnesses: true, ..ComponentOptions::default() };
        let report = nl_components(13, locus, opts).unwrap();
        let sub = &report.reduction;
        for c in &report.components {
            let w = c.witness.as_ref().expect("witness found");
            assert_eq!(divisibility(&sub.lattice, w).unwrap(), c.divisibility, "{}", c.label);
            assert_eq!(Some(sub.embed(w)), c.witness_ambient, "{}", c.label);
        }
    }
}

#[test]
fn enumerative_and_modular_sides_agree() {
    let (a2, a11) = unigonal_counts(&UnigonalTable::shipped()).unwrap();
    let obs = [(GenusTwoIndex::new(1, 1, 1), rat(1632)), (GenusTwoIndex::new(1, 0, 1), rat(66960))];
    let fit = fit_weight10(&obs, Strategy::Parallel).unwrap();
    assert_eq!(predict_nl(&fit, NlQuantity::Cuspidal, Strategy::Parallel).unwrap(), BigRational::from_integer(a2));
    assert_eq!(predict_nl(&fit, NlQuantity::Binodal, Strategy::Parallel).unwrap(), BigRational::from_integer(a11));
    assert!(independence_check(&fit, Strategy::Parallel).unwrap());
    let (h2, h11) = net_counts(&SurfaceChernData::ANTICANONICAL_DOUBLE, 4).unwrap();
    assert_eq!((h2, h11), (BigInt::from(864), BigInt::from(7656)));
}

#[test]
fn unigonal_table_round_trip() {
    let t = UnigonalTable::shipped();
    let back = UnigonalTable::parse(&t.to_text()).unwrap();
    assert_eq!(unigonal_counts(&back).unwrap(), unigonal_counts(&t).unwrap());
}

#[test]
fn coefficient_tables_round_trip() {
    let e4 = CoeffTable::parse(&CoeffTable::e4().to_text()).unwrap();
    let e6 = CoeffTable::parse(&CoeffTable::e6().to_text()).unwrap();
    let a = e4e6_with(&e4, &e6, 1, 1, Strategy::Sequential).unwrap();
    let b = e4e6(1, 1, Strategy::Sequential).unwrap();
    assert_eq!(a, b);
}

#[test]
fn strategies_agree_on_chi10() {
    let t = HalfIntegralTable::shipped();
    let seq = chi10(&t, 2, 2, Strategy::Sequential).unwrap();
    let par = chi10(&t, 2, 2, Strategy::Parallel).unwrap();
    assert_eq!(seq, par);
}
