//! The reproduction checklist: nine criteria, each a list of exact checks
//! with expected and actual values. `k3nl verify` and the acceptance test
//! target both run this.

use std::fmt::Display;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use serde::Serialize;

use crate::chern::{net_counts, unigonal_a2, unigonal_counts, unigonal_double_point, SurfaceChernData, UnigonalTable};
use crate::discriminant::discriminant_group;
use crate::divisor::{triangular_decomposition, MuVariant, NLKey};
use crate::lattice::{divisibility, e7_neg, lambda_a1, lambda_g};
use crate::matrix::IntMatrix;
use crate::orbit::{component_count_sweep, nl_components, ComponentOptions, Locus};
use crate::par::Strategy;
use crate::siegel::{
    binomial_pow, chi10, e4e6, fit_weight10, predict_nl, series_mul, GenusTwoIndex, GenusTwoSeries,
    HalfIntegralTable, NlQuantity, Truncation,
};
use crate::snf::smith_normal_form;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

impl Check {
    fn eq<T: PartialEq + Display>(name: impl Into<String>, expected: T, actual: T) -> Self {
        Check { name: name.into(), passed: expected == actual, expected: expected.to_string(), actual: actual.to_string() }
    }

    fn failed(name: impl Into<String>, expected: impl Display, err: impl Display) -> Self {
        Check { name: name.into(), expected: expected.to_string(), actual: format!("error: {err}"), passed: false }
    }

    fn holds(name: impl Into<String>, ok: bool, detail: impl Display) -> Self {
        Check {
            name: name.into(),
            expected: "holds".into(),
            actual: if ok { "holds".into() } else { detail.to_string() },
            passed: ok,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    fn new(id: u8, title: &str, checks: Vec<Check>) -> Self {
        CriterionReport { id, title: title.into(), passed: checks.iter().all(|c| c.passed), checks }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub criteria: Vec<CriterionReport>,
}

pub const CRITERIA: [(u8, &str); 9] = [
    (1, "net formulas"),
    (2, "unigonal pipeline"),
    (3, "Igusa cusp form product"),
    (4, "Eisenstein product"),
    (5, "weight-10 fit and cross-pipeline agreement"),
    (6, "component counts"),
    (7, "discriminant groups"),
    (8, "triangular decomposition consistency"),
    (9, "property suites"),
];

fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

fn pair<A: Display, B: Display>((a, b): (A, B)) -> String {
    format!("({a}, {b})")
}

fn net() -> Vec<Check> {
    let data = SurfaceChernData::ANTICANONICAL_DOUBLE;
    [(1, (216, 1914)), (4, (864, 7656))]
        .into_iter()
        .map(|(deg, want)| {
            let name = format!("net counts, degree {deg}");
            match net_counts(&data, deg) {
                Ok(got) => Check::eq(name, pair(want), pair(got)),
                Err(e) => Check::failed(name, pair(want), e),
            }
        })
        .collect()
}

fn unigonal() -> Vec<Check> {
    let t = UnigonalTable::shipped();
    let mut out = Vec::new();
    match unigonal_a2(&t) {
        Ok(v) => out.push(Check::eq("a2(h)", int(816), v)),
        Err(e) => out.push(Check::failed("a2(h)", 816, e)),
    }
    match unigonal_double_point(&t) {
        Ok(v) => out.push(Check::eq("deg D(f)", int(68592), v)),
        Err(e) => out.push(Check::failed("deg D(f)", 68592, e)),
    }
    match unigonal_counts(&t) {
        Ok((_, a11)) => out.push(Check::eq("a11(h)", int(33480), a11)),
        Err(e) => out.push(Check::failed("a11(h)", 33480, e)),
    }
    out
}

fn coefficient_checks(
    series: Result<GenusTwoSeries, impl Display>,
    wanted: &[((i64, i64, i64), i64)],
) -> Vec<Check> {
    match series {
        Ok(s) => wanted
            .iter()
            .map(|&((k, l, m), v)| Check::eq(format!("coefficient at ({k},{l},{m})"), rat(v), s.coeff(&GenusTwoIndex::new(k, l, m))))
            .collect(),
        Err(e) => vec![Check::failed("series", "computed", e)],
    }
}

fn chi10_coefficients(strategy: Strategy) -> Vec<Check> {
    let s = chi10(&HalfIntegralTable::shipped(), 2, 2, strategy);
    coefficient_checks(s, &[((1, 1, 1), 1), ((1, 0, 1), -2), ((1, 1, 2), -16)])
}

fn eisenstein(strategy: Strategy) -> Vec<Check> {
    coefficient_checks(
        e4e6(1, 1, strategy),
        &[((0, 0, 0), 1), ((1, 0, 0), -264), ((0, 0, 1), -264), ((1, 1, 1), 57792), ((1, 0, 1), -45360)],
    )
}

fn fit(strategy: Strategy) -> Vec<Check> {
    let obs = [(GenusTwoIndex::new(1, 1, 1), rat(1632)), (GenusTwoIndex::new(1, 0, 1), rat(66960))];
    let fit = match fit_weight10(&obs, strategy) {
        Ok(f) => f,
        Err(e) => return vec![Check::failed("fit (a, b)", "(1, -56160)", e)],
    };
    let mut out = vec![Check::eq("fit (a, b)", pair((1, -56160)), pair((&fit.a, &fit.b)))];
    let predicted = predict_nl(&fit, NlQuantity::Cuspidal, strategy)
        .and_then(|c| Ok((c, predict_nl(&fit, NlQuantity::Binodal, strategy)?)));
    match predicted {
        Ok((c, b)) => {
            out.push(Check::eq("predicted (cuspidal, binodal)", pair((816, 33480)), pair((&c, &b))));
            match unigonal_counts(&UnigonalTable::shipped()) {
                Ok((a2, a11)) => out.push(Check::eq(
                    "prediction equals unigonal pipeline",
                    pair((BigRational::from_integer(a2), BigRational::from_integer(a11))),
                    pair((c, b)),
                )),
                Err(e) => out.push(Check::failed("prediction equals unigonal pipeline", "(816, 33480)", e)),
            }
        }
        Err(e) => out.push(Check::failed("predicted (cuspidal, binodal)", "(816, 33480)", e)),
    }
    out
}

fn expected_count(locus: Locus, g: u64) -> usize {
    match locus {
        Locus::Nodal => if g % 4 == 2 { 2 } else { 1 },
        Locus::A11 => if g % 4 == 2 || g % 4 == 3 { 2 } else { 1 },
        Locus::A2 => 1,
    }
}

fn component_counts(strategy: Strategy) -> Vec<Check> {
    let gs: Vec<u64> = (3..=100).collect();
    let mut out = Vec::new();
    for locus in [Locus::Nodal, Locus::A11, Locus::A2] {
        let name = format!("{locus} count for g in 3..100");
        match component_count_sweep(gs.clone(), locus, strategy) {
            Ok(counts) => {
                let bad: Vec<String> = counts
                    .iter()
                    .filter(|(g, c)| *c != expected_count(locus, *g))
                    .map(|(g, c)| format!("g={g}: {c} (expected {})", expected_count(locus, *g)))
                    .collect();
                let rule = match locus {
                    Locus::Nodal => "2 iff g = 2 mod 4, else 1",
                    Locus::A11 => "2 iff g = 2,3 mod 4, else 1",
                    Locus::A2 => "always 1",
                };
                let actual = if bad.is_empty() { rule.to_string() } else { bad.join("; ") };
                out.push(Check { name, expected: rule.into(), passed: bad.is_empty(), actual });
            }
            Err(e) => out.push(Check::failed(name, "counts", e)),
        }
    }
    out.extend(witnesses(6, &[(1, "e1"), (-5, "f1"), (2, "e2"), (2, "f2")], strategy));
    out.extend(witnesses(7, &[(1, "e1"), (-6, "f1"), (1, "t1"), (2, "t2"), (2, "e2"), (4, "f2")], strategy));
    out
}

/// The A11 witnesses in genus `g`: `e2 - f2` for the divisibility-1 orbit
/// and `expected` for the divisibility-2 orbit.
fn witnesses(g: u64, expected: &[(i64, &str)], strategy: Strategy) -> Vec<Check> {
    let opts = ComponentOptions { witnesses: true, bound: None, strategy };
    let report = match nl_components(g, Locus::A11, opts) {
        Ok(r) => r,
        Err(e) => return vec![Check::failed(format!("g={g} witnesses"), "found", e)],
    };
    let sub = &report.reduction;
    let disc = match discriminant_group(&sub.lattice) {
        Ok(d) => d,
        Err(e) => return vec![Check::failed(format!("g={g} witnesses"), "found", e)],
    };
    let targets = [sub.ambient.vector(&[(1, "e2"), (-1, "f2")]), sub.ambient.vector(expected)];
    report
        .components
        .iter()
        .zip(targets)
        .map(|(c, target)| {
            let name = format!("g={g} {} witness", c.label);
            let (Some(w), Some(wa), Ok(target)) = (&c.witness, &c.witness_ambient, target) else {
                return Check::failed(name, "witness", "not found");
            };
            let div = divisibility(&sub.lattice, w).ok();
            let class = disc.class_of_fraction(w, &c.divisibility).ok();
            let valid = wa == &target
                && sub.lattice.norm(w) == int(-2)
                && div.as_ref() == Some(&c.divisibility)
                && class.as_ref() == Some(&c.dual_class);
            Check {
                name,
                expected: format!("{target}, div {}, class {}", c.divisibility, c.dual_class),
                actual: format!(
                    "{wa}, div {}, class {}",
                    div.map_or("?".into(), |d| d.to_string()),
                    class.map_or("?".into(), |x| x.to_string())
                ),
                passed: valid,
            }
        })
        .collect()
}

fn discriminants() -> Vec<Check> {
    let mut out = Vec::new();
    for g in [4u64, 5, 6, 7, 11] {
        let m = int(2 * g as i64 - 2);
        let lg = lambda_g(g).and_then(|s| discriminant_group(&s.lattice));
        match lg {
            Ok(d) => out.push(Check::eq(format!("Lambda_{g} invariant factors"), format!("{:?}", [&m]), format!("{:?}", d.invariant_factors()))),
            Err(e) => out.push(Check::failed(format!("Lambda_{g}"), &m, e)),
        }
        let la = lambda_a1(g).and_then(|s| discriminant_group(&s.lattice));
        match la {
            Ok(d) => out.push(Check::eq(
                format!("Lambda_A1 (g={g}) invariant factors"),
                format!("{:?}", [&int(2), &m]),
                format!("{:?}", d.invariant_factors()),
            )),
            Err(e) => out.push(Check::failed(format!("Lambda_A1 (g={g})"), &m, e)),
        }
    }
    let e7 = e7_neg();
    let q = e7.lattice.vector(&[(1, "t1+2t2")]).and_then(|w| {
        let d = discriminant_group(&e7.lattice)?;
        let x = d.class_of_fraction(&w, &int(2))?;
        Ok(d.q(&x))
    });
    match q {
        Ok(q) => out.push(Check::eq("q of [(t1+2t2)/2] in E7(-1)", BigRational::new(int(-3), int(2)), q)),
        Err(e) => out.push(Check::failed("q of [(t1+2t2)/2] in E7(-1)", "-3/2", e)),
    }
    out
}

fn triangular(strategy: Strategy) -> Vec<Check> {
    let mut bad = Vec::new();
    for g in 3..=40u64 {
        let key = match NLKey::new(g as i64, 0, -2) {
            Ok(k) => k,
            Err(e) => {
                bad.push(format!("g={g}: {e}"));
                continue;
            }
        };
        let terms = triangular_decomposition(&key, MuVariant::DCorrected);
        let comps = nl_components(g, Locus::Nodal, ComponentOptions { strategy, ..Default::default() });
        match (terms, comps) {
            (Ok(terms), Ok(comps)) => {
                let mut from_terms: Vec<i64> = terms
                    .iter()
                    .map(|t| if t.d == 0 { 1 } else if t.d == g as i64 - 1 && 2 * t.n == g as i64 - 2 { 2 } else { 0 })
                    .collect();
                let mut from_orbits: Vec<i64> =
                    comps.components.iter().map(|c| i64::try_from(&c.divisibility).unwrap_or(-1)).collect();
                from_terms.sort();
                from_orbits.sort();
                if from_terms != from_orbits {
                    bad.push(format!("g={g}: classes {from_terms:?} vs orbits {from_orbits:?}"));
                }
            }
            (Err(e), _) => bad.push(format!("g={g}: {e}")),
            (_, Err(e)) => bad.push(format!("g={g}: {e}")),
        }
    }
    vec![Check {
        name: "mu > 0 classes of (0,-2) match nodal orbits, g in 3..40".into(),
        expected: "(0,-2) <-> div 1, (g-1,(g-2)/2) <-> div 2".into(),
        passed: bad.is_empty(),
        actual: if bad.is_empty() { "(0,-2) <-> div 1, (g-1,(g-2)/2) <-> div 2".into() } else { bad.join("; ") },
    }]
}

fn symmetric_and_supported(s: &GenusTwoSeries) -> Result<(), String> {
    let t = s.truncation();
    for (i, v) in s.iter() {
        if i.disc() < 0 {
            return Err(format!("nonzero coefficient at {i} with 4km - l^2 < 0"));
        }
        for j in [GenusTwoIndex::new(i.k, -i.l, i.m), GenusTwoIndex::new(i.m, i.l, i.k)] {
            if t.contains(&j) && s.coeff(&j) != *v {
                return Err(format!("coefficient at {i} is {v}, at {j} is {}", s.coeff(&j)));
            }
        }
    }
    Ok(())
}

fn properties(strategy: Strategy) -> Vec<Check> {
    let mut out = Vec::new();
    let table = HalfIntegralTable::shipped();

    for (name, series) in [
        ("chi10 to (2,2)", chi10(&table, 2, 2, strategy)),
        ("chi10 to (1,4)", chi10(&table, 1, 4, strategy)),
        ("E4 E6 to (1,1)", e4e6(1, 1, strategy)),
    ] {
        let name = format!("{name}: index symmetry and support");
        match series {
            Ok(s) => {
                let r = symmetric_and_supported(&s);
                out.push(Check::holds(name, r.is_ok(), r.err().unwrap_or_default()));
            }
            Err(e) => out.push(Check::failed(name, "holds", e)),
        }
    }

    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut snf_bad = None;
    for trial in 0..60 {
        let rows = rng.random_range(1..=10usize);
        let cols = rng.random_range(1..=10usize);
        let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.random_range(-50..=50i64)).collect()).collect();
        let m = IntMatrix::from_rows(&data);
        let s = smith_normal_form(&m);
        let diag = s.diagonal();
        let divides = diag.windows(2).all(|w| if w[0] == int(0) { w[1] == int(0) } else { (&w[1] % &w[0]) == int(0) });
        let ok = s.u.mul(&m).mul(&s.v) == s.d
            && s.d.is_diagonal()
            && s.u.det().abs() == int(1)
            && s.v.det().abs() == int(1)
            && diag.iter().all(|x| !x.is_negative())
            && divides;
        if !ok {
            snf_bad = Some(format!("trial {trial}: {m:?}"));
            break;
        }
    }
    out.push(Check::holds(
        "Smith form of 60 random matrices up to 10x10, entries in [-50, 50]",
        snf_bad.is_none(),
        snf_bad.clone().unwrap_or_default(),
    ));

    let t = Truncation::standard(4, 4);
    let mut binom_bad = None;
    'outer: for c in [-200i64, -128, -17, -2, -1, 1, 2, 20, 199, 200] {
        for u in [GenusTwoIndex::new(1, 0, 0), GenusTwoIndex::new(0, -1, 0), GenusTwoIndex::new(1, 2, 1), GenusTwoIndex::new(2, -1, 1)] {
            let prod = binomial_pow(u, c, t).and_then(|a| Ok(series_mul(&a, &binomial_pow(u, -c, t)?, strategy)));
            if prod.as_ref().ok() != Some(&GenusTwoSeries::one(t)) {
                binom_bad = Some(format!("c={c}, u={u}"));
                break 'outer;
            }
        }
    }
    out.push(Check::holds("(1-u)^c (1-u)^-c = 1 for |c| <= 200", binom_bad.is_none(), binom_bad.unwrap_or_default()));

    let seq = Strategy::Sequential;
    let gs: Vec<u64> = (3..=30).collect();
    let det_components = [Locus::Nodal, Locus::A11, Locus::A2].iter().all(|&l| {
        let a = component_count_sweep(gs.clone(), l, seq).ok();
        a.is_some() && a == component_count_sweep(gs.clone(), l, strategy).ok()
    });
    let det_witness = [6u64, 7, 10].iter().all(|&g| {
        let run = |s| nl_components(g, Locus::A11, ComponentOptions { witnesses: true, bound: None, strategy: s }).ok().map(|r| r.components);
        let a = run(seq);
        a.is_some() && a == run(strategy)
    });
    let det_series = chi10(&table, 2, 2, seq).ok().is_some_and(|a| Some(a) == chi10(&table, 2, 2, strategy).ok());
    let det_decomp = (3..=20i64).all(|g| {
        let k = NLKey::new(g, 1, -4).expect("g >= 3");
        let a = triangular_decomposition(&k, MuVariant::DCorrected).ok();
        a.is_some() && a == triangular_decomposition(&k, MuVariant::DCorrected).ok()
    });
    out.push(Check::holds("enumerations deterministic across runs and strategies", det_components && det_witness && det_series && det_decomp,
        format!("components {det_components}, witnesses {det_witness}, series {det_series}, decomposition {det_decomp}")));
    out
}

/// Runs one criterion, `1..=9`.
pub fn run_criterion(id: u8, strategy: Strategy) -> Option<CriterionReport> {
    let title = CRITERIA.iter().find(|(i, _)| *i == id)?.1;
    let checks = match id {
        1 => net(),
        2 => unigonal(),
        3 => chi10_coefficients(strategy),
        4 => eisenstein(strategy),
        5 => fit(strategy),
        6 => component_counts(strategy),
        7 => discriminants(),
        8 => triangular(strategy),
        9 => properties(strategy),
        _ => return None,
    };
    Some(CriterionReport::new(id, title, checks))
}

pub fn run_all(strategy: Strategy) -> VerifyReport {
    let criteria: Vec<CriterionReport> =
        CRITERIA.iter().filter_map(|(id, _)| run_criterion(*id, strategy)).collect();
    VerifyReport { passed: criteria.iter().all(|c| c.passed), criteria }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass() {
        for id in [1, 2, 3, 4, 5, 7] {
            let r = run_criterion(id, Strategy::Sequential).unwrap();
            assert!(r.passed, "{r:?}");
        }
        assert!(run_criterion(10, Strategy::Sequential).is_none());
    }
}
