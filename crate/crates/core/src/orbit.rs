//! Orbit classification of primitive vectors by Eichler's criterion, and the
//! resulting irreducible-component counts of the nodal, binodal (A11) and
//! cuspidal (A2) Noether-Lefschetz loci in genus `g`.
//!
//! In a lattice containing two orthogonal hyperbolic planes, primitive
//! vectors `x`, `y` lie in one orbit of the stable orthogonal group iff
//! `x^2 = y^2` and `x* = y*` in the discriminant group. An orbit is therefore
//! pinned down by a pair `(div, class)` where `class` has exact order `div`
//! and `q(class) = norm / div^2 mod 2`.
//!
//! The loci reduce to orbit questions in two lattices:
//!
//! * nodal: roots of `Lambda_g = L^perp`;
//! * A11: roots `v` of `Lambda_A1 = <L, t1>^perp`;
//! * A2: vectors `w = t1 + 2v` of norm -6 in `Lambda_A1` with `v.t1 = 1`.
//!   Then `w/2` is the projection of `v`, so the class of `w/2` must be the
//!   one glued to `t1/2`, namely `[(t1+2t2)/2]`, and `div(w)` is even.
//!
//! A component is a lattice `span(L, t1, v)` up to the group action; the
//! sign change `(t1, v) -> (-t1, -v)` identifies a candidate with the one of
//! opposite class, so components are candidate classes modulo `x ~ -x`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::discriminant::{discriminant_group, reduce_mod2, DiscElement, DiscriminantGroup};
use crate::lattice::{divisibility, lambda_a1, lambda_g, IntegralLattice, LatticeError, LatticeVector, Sublattice};
use crate::par::{map_collect, Strategy};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("lattice does not split off two orthogonal hyperbolic planes; Eichler's criterion does not apply")]
    NoHyperbolicPlanes,
    #[error("genus must be at least 3, got {0}")]
    InvalidGenus(u64),
    #[error("norm must be a nonzero even integer, got {0}")]
    InvalidNorm(BigInt),
}

pub type Result<T> = std::result::Result<T, OrbitError>;

/// A possible orbit of primitive vectors: divisibility, dual class, norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCandidate {
    pub divisibility: BigInt,
    pub dual_class: DiscElement,
    pub norm: BigInt,
    pub witness: Option<LatticeVector>,
}

/// An even lattice together with its discriminant group and two split
/// hyperbolic planes, i.e. a lattice to which Eichler's criterion applies.
#[derive(Clone, Debug)]
pub struct EichlerLattice {
    lattice: IntegralLattice,
    disc: DiscriminantGroup,
    planes: Vec<(usize, usize)>,
}

/// Pairs `(e, f)` of basis indices spanning an orthogonal summand `U`
/// (`e^2 = f^2 = 0`, `e.f = 1`, both orthogonal to every other basis vector).
pub fn split_hyperbolic_planes(l: &IntegralLattice) -> Vec<(usize, usize)> {
    let g = l.gram();
    let n = l.rank();
    let mut used = vec![false; n];
    let mut planes = Vec::new();
    for i in 0..n {
        if used[i] || !g.get(i, i).is_zero() {
            continue;
        }
        let partner = (i + 1..n).find(|&j| {
            !used[j]
                && g.get(j, j).is_zero()
                && g.get(i, j).is_one()
                && (0..n).all(|k| k == i || k == j || (g.get(i, k).is_zero() && g.get(j, k).is_zero()))
        });
        if let Some(j) = partner {
            used[i] = true;
            used[j] = true;
            planes.push((i, j));
        }
    }
    planes
}

impl EichlerLattice {
    pub fn new(lattice: IntegralLattice) -> Result<Self> {
        let planes = split_hyperbolic_planes(&lattice);
        if planes.len() < 2 {
            return Err(OrbitError::NoHyperbolicPlanes);
        }
        let disc = discriminant_group(&lattice)?;
        Ok(EichlerLattice { lattice, disc, planes })
    }

    pub fn lattice(&self) -> &IntegralLattice {
        &self.lattice
    }

    pub fn disc(&self) -> &DiscriminantGroup {
        &self.disc
    }

    /// All `(div, class)` pairs compatible with primitive vectors of the
    /// given norm, ordered by divisibility then class coordinates.
    pub fn candidates(&self, norm: &BigInt) -> Result<Vec<OrbitCandidate>> {
        if norm.is_zero() || norm.is_odd() {
            return Err(OrbitError::InvalidNorm(norm.clone()));
        }
        let mut out: Vec<OrbitCandidate> = self
            .disc
            .elements()
            .into_iter()
            .filter_map(|x| {
                let d = self.disc.element_order(&x);
                if !norm.is_multiple_of(&d) {
                    return None;
                }
                let target = reduce_mod2(&BigRational::new(norm.clone(), &d * &d));
                (self.disc.q(&x) == target).then(|| OrbitCandidate {
                    divisibility: d,
                    dual_class: x,
                    norm: norm.clone(),
                    witness: None,
                })
            })
            .collect();
        out.sort_by(|a, b| (&a.divisibility, &a.dual_class).cmp(&(&b.divisibility, &b.dual_class)));
        Ok(out)
    }

    /// True when `v` realizes the candidate: primitive, right norm,
    /// divisibility and dual class.
    pub fn realizes(&self, cand: &OrbitCandidate, v: &LatticeVector) -> bool {
        if v.len() != self.lattice.rank() || v.is_zero() || !v.is_primitive() {
            return false;
        }
        if self.lattice.norm(v) != cand.norm {
            return false;
        }
        match divisibility(&self.lattice, v) {
            Ok(d) if d == cand.divisibility => {}
            _ => return false,
        }
        self.disc.class_of_fraction(v, &cand.divisibility).is_ok_and(|c| c == cand.dual_class)
    }

    /// Finds a vector realizing `cand`. The `recipes` are tried first, in
    /// order; otherwise vectors `div * (y + a e + b f)` are searched, with `y`
    /// the reduced lift of the class, `(e, f)` the first split hyperbolic
    /// plane, `a` in `[-bound, bound]` and `b` solved exactly from the norm
    /// equation. Returns the lexicographically least vector found.
    pub fn find_witness(
        &self,
        cand: &OrbitCandidate,
        bound: u64,
        recipes: &[LatticeVector],
        strategy: Strategy,
    ) -> Option<LatticeVector> {
        if let Some(v) = recipes.iter().find(|v| self.realizes(cand, v)) {
            return Some(v.clone());
        }
        let d = &cand.divisibility;
        if self.disc.element_order(&cand.dual_class) != *d {
            return None;
        }
        let target = BigRational::new(cand.norm.clone(), d * d);
        let y: Vec<BigRational> = self.disc.lift(&cand.dual_class).iter().map(|c| c - c.floor()).collect();
        let gy = self.lattice.gram().mul_rat_vec(&y);
        let y2: BigRational = gy.iter().zip(&y).fold(BigRational::zero(), |acc, (a, b)| acc + a * b);
        let (ei, fi) = self.planes[0];
        let (ye, yf) = (gy[ei].clone(), gy[fi].clone());

        let build = |a: &BigInt, b: &BigInt| -> Option<LatticeVector> {
            let mut coords = y.clone();
            coords[ei] += BigRational::from_integer(a.clone());
            coords[fi] += BigRational::from_integer(b.clone());
            let dr = BigRational::from_integer(d.clone());
            let v: Option<Vec<BigInt>> =
                coords.iter().map(|c| c * &dr).map(|c| c.is_integer().then(|| c.to_integer())).collect();
            let v = LatticeVector(v?);
            self.realizes(cand, &v).then_some(v)
        };

        let bound_i = BigInt::from(bound);
        let a_values: Vec<BigInt> = (-(bound as i64)..=bound as i64).map(BigInt::from).collect();
        let found = map_collect(strategy, a_values, |a| {
            let ar = BigRational::from_integer(a.clone());
            let two = BigRational::from_integer(BigInt::from(2));
            let denom = &two * (&yf + &ar);
            let rest = &target - &y2 - &two * &ar * &ye;
            if denom.is_zero() {
                if !rest.is_zero() {
                    return None;
                }
                // every b solves the norm equation
                let mut b = -bound_i.clone();
                while b <= bound_i {
                    if let Some(v) = build(&a, &b) {
                        return Some(v);
                    }
                    b += 1;
                }
                return None;
            }
            let b = rest / denom;
            if !b.is_integer() {
                return None;
            }
            build(&a, &b.to_integer())
        });
        found.into_iter().flatten().min()
    }
}

/// Eichler candidates for primitive vectors of the given norm in `l`.
pub fn eichler_candidates(l: &IntegralLattice, norm: i64) -> Result<Vec<OrbitCandidate>> {
    EichlerLattice::new(l.clone())?.candidates(&BigInt::from(norm))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Locus {
    Nodal,
    A11,
    A2,
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Locus::Nodal => "nodal",
            Locus::A11 => "a11",
            Locus::A2 => "a2",
        })
    }
}

impl std::str::FromStr for Locus {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "nodal" => Ok(Locus::Nodal),
            "a11" => Ok(Locus::A11),
            "a2" => Ok(Locus::A2),
            other => Err(format!("unknown locus `{other}` (expected nodal, a11 or a2)")),
        }
    }
}

/// One irreducible component, described by the orbit data of its vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub label: String,
    pub divisibility: BigInt,
    pub dual_class: DiscElement,
    pub q: BigRational,
    /// Witness in the coordinates of the reduction lattice.
    pub witness: Option<LatticeVector>,
    /// The same witness in K3-lattice coordinates.
    pub witness_ambient: Option<LatticeVector>,
}

#[derive(Clone, Debug)]
pub struct ComponentReport {
    pub g: u64,
    pub locus: Locus,
    pub components: Vec<Component>,
    /// The reduction lattice (`Lambda_g` or `Lambda_A1`) with its embedding.
    pub reduction: Sublattice,
}

impl ComponentReport {
    pub fn count(&self) -> usize {
        self.components.len()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ComponentOptions {
    pub witnesses: bool,
    /// Search bound for witnesses; `None` means `2g`.
    pub bound: Option<u64>,
    pub strategy: Strategy,
}

fn ambient(sub: &Sublattice, terms: &[(i64, &str)]) -> LatticeVector {
    sub.ambient.vector(terms).expect("K3 labels exist")
}

/// Closed-form witnesses from the classification argument, in reduction
/// lattice coordinates; only those valid for this genus are returned.
fn recipes(sub: &Sublattice, g: u64, locus: Locus) -> Vec<LatticeVector> {
    let gm1 = g as i64 - 1;
    let mut out = vec![ambient(sub, &[(1, "e2"), (-1, "f2")])];
    if (g as i64 - 2).rem_euclid(4) == 0 {
        let k = (g as i64 - 2) / 4;
        out.push(ambient(sub, &[(1, "e1"), (-gm1, "f1"), (2, "e2"), (2 * k, "f2")]));
    }
    if locus != Locus::Nodal && (g as i64 + 1).rem_euclid(4) == 0 {
        let k = (g as i64 + 1) / 4;
        out.push(ambient(sub, &[(1, "e1"), (-gm1, "f1"), (1, "t1"), (2, "t2"), (2, "e2"), (2 * k, "f2")]));
    }
    if locus == Locus::A2 {
        out.push(ambient(sub, &[(1, "t1"), (2, "t2")]));
    }
    out.into_iter().filter_map(|v| sub.coords_of(&v).ok()).collect()
}

/// Number and description of irreducible components of the nodal, binodal
/// or cuspidal locus in genus `g`.
pub fn nl_components(g: u64, locus: Locus, opts: ComponentOptions) -> Result<ComponentReport> {
    if g < 3 {
        return Err(OrbitError::InvalidGenus(g));
    }
    let sub = match locus {
        Locus::Nodal => lambda_g(g)?,
        Locus::A11 | Locus::A2 => lambda_a1(g)?,
    };
    let el = EichlerLattice::new(sub.lattice.clone())?;
    let disc = el.disc();
    let norm = BigInt::from(if locus == Locus::A2 { -6 } else { -2 });
    let mut cands = el.candidates(&norm)?;

    let two = BigInt::from(2);
    let lvec = sub.lattice.vector(&[(1, "l")])?;
    let half_l = disc.class_of_fraction(&lvec, &two)?;
    let t_half = match locus {
        Locus::Nodal => None,
        _ => {
            let w0 = sub.lattice.vector(&[(1, "t1+2t2")])?;
            Some(disc.class_of_fraction(&w0, &two)?)
        }
    };

    if locus == Locus::A2 {
        let t_half = t_half.clone().expect("A2 uses Lambda_A1");
        cands.retain(|c| {
            c.divisibility.is_even() && disc.scale(&c.dual_class, &(&c.divisibility / &two)) == t_half
        });
    }
    // merge x with -x
    cands.retain(|c| c.dual_class <= disc.neg(&c.dual_class));

    let half_l_t = t_half.as_ref().map(|t| disc.add(&half_l, t));
    let recipe_list = recipes(&sub, g, locus);
    let bound = opts.bound.unwrap_or(2 * g);

    let components = cands
        .into_iter()
        .map(|c| {
            let d = c.divisibility.to_u64().unwrap_or(0);
            let label = match (locus, d) {
                (Locus::Nodal, 1) => "P_{0,-2}".to_string(),
                (Locus::Nodal, 2) => "P_{g-1,(g-2)/2}".to_string(),
                (Locus::A11, 1) => "H'".to_string(),
                (Locus::A11, 2) if c.dual_class == half_l => "H''".to_string(),
                (Locus::A11, 2) if Some(&c.dual_class) == half_l_t.as_ref() => "H'''".to_string(),
                (Locus::A2, 2) => "H_{A2}".to_string(),
                (Locus::A2, _) => format!("H_{{A2}}[div={d}]"),
                _ => format!("{locus}[div={d},class={}]", c.dual_class),
            };
            let witness = if opts.witnesses { el.find_witness(&c, bound, &recipe_list, opts.strategy) } else { None };
            let witness_ambient = witness.as_ref().map(|w| sub.embed(w));
            Component {
                label,
                q: disc.q(&c.dual_class),
                divisibility: c.divisibility,
                dual_class: c.dual_class,
                witness,
                witness_ambient,
            }
        })
        .collect();
    Ok(ComponentReport { g, locus, components, reduction: sub })
}

/// Just the component count.
pub fn nl_component_count(g: u64, locus: Locus) -> Result<usize> {
    Ok(nl_components(g, locus, ComponentOptions::default())?.count())
}

/// Component counts for every genus in `gs`, computed with the given strategy.
pub fn component_count_sweep(gs: Vec<u64>, locus: Locus, strategy: Strategy) -> Result<Vec<(u64, usize)>> {
    map_collect(strategy, gs, |g| nl_component_count(g, locus).map(|c| (g, c))).into_iter().collect()
}

/// Helper for callers holding an A2 witness `w = t1 + 2v` in K3 coordinates:
/// returns `v`, or `None` when `w - t1` is not divisible by 2.
pub fn a2_root_from_witness(sub: &Sublattice, w_ambient: &LatticeVector) -> Option<LatticeVector> {
    let t1 = sub.ambient.vector(&[(1, "t1")]).ok()?;
    let diff = w_ambient.add(&t1.scale(&BigInt::from(-1)));
    let two = BigInt::from(2);
    diff.0
        .iter()
        .map(|x| x.is_multiple_of(&two).then(|| x / &two))
        .collect::<Option<Vec<_>>>()
        .map(LatticeVector)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_standard, StandardLattice};

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn planes_detected() {
        let la = lambda_a1(6).unwrap().lattice;
        assert_eq!(split_hyperbolic_planes(&la).len(), 2);
        let k3 = build_standard(StandardLattice::K3, None).unwrap();
        assert_eq!(split_hyperbolic_planes(&k3).len(), 3);
        let e8 = build_standard(StandardLattice::E8Neg, None).unwrap();
        assert!(matches!(EichlerLattice::new(e8), Err(OrbitError::NoHyperbolicPlanes)));
    }

    #[test]
    fn a11_candidates_g5() {
        let la = lambda_a1(5).unwrap().lattice;
        let cands = eichler_candidates(&la, -2).unwrap();
        assert_eq!(cands.len(), 1);
        assert_eq!(cands[0].divisibility, big(1));
    }

    #[test]
    fn a11_candidates_g6() {
        let sub = lambda_a1(6).unwrap();
        let el = EichlerLattice::new(sub.lattice.clone()).unwrap();
        let cands = el.candidates(&big(-2)).unwrap();
        assert_eq!(cands.len(), 2);
        assert_eq!(cands[0].divisibility, big(1));
        assert_eq!(cands[0].dual_class, el.disc().zero());
        let l = sub.lattice.vector(&[(1, "l")]).unwrap();
        assert_eq!(cands[1].divisibility, big(2));
        assert_eq!(cands[1].dual_class, el.disc().class_of_fraction(&l, &big(2)).unwrap());
        // (t1+2t2)/2 has q = -3/2, not -1/2, so it is excluded
        let w0 = sub.lattice.vector(&[(1, "t1+2t2")]).unwrap();
        let t_half = el.disc().class_of_fraction(&w0, &big(2)).unwrap();
        assert_eq!(el.disc().q(&t_half), rat(-3, 2));
        assert!(cands.iter().all(|c| c.dual_class != t_half));
    }

    #[test]
    fn explicit_a11_witnesses() {
        let sub = lambda_a1(6).unwrap();
        let el = EichlerLattice::new(sub.lattice.clone()).unwrap();
        let cands = el.candidates(&big(-2)).unwrap();
        let rec = recipes(&sub, 6, Locus::A11);
        let w = el.find_witness(&cands[1], 12, &rec, Strategy::Sequential).unwrap();
        let expect = sub.ambient.vector(&[(1, "e1"), (-5, "f1"), (2, "e2"), (2, "f2")]).unwrap();
        assert_eq!(sub.embed(&w), expect);

        let sub = lambda_a1(7).unwrap();
        let el = EichlerLattice::new(sub.lattice.clone()).unwrap();
        let cands = el.candidates(&big(-2)).unwrap();
        assert_eq!(cands.len(), 2);
        let rec = recipes(&sub, 7, Locus::A11);
        let w = el.find_witness(&cands[1], 14, &rec, Strategy::Sequential).unwrap();
        let expect =
            sub.ambient.vector(&[(1, "e1"), (-6, "f1"), (1, "t1"), (2, "t2"), (2, "e2"), (4, "f2")]).unwrap();
        assert_eq!(sub.embed(&w), expect);
    }

    #[test]
    fn search_without_recipes_round_trips() {
        for g in [6u64, 7, 10, 11] {
            let sub = lambda_a1(g).unwrap();
            let el = EichlerLattice::new(sub.lattice.clone()).unwrap();
            for c in el.candidates(&big(-2)).unwrap() {
                let seq = el.find_witness(&c, 2 * g, &[], Strategy::Sequential).expect("witness exists");
                let par = el.find_witness(&c, 2 * g, &[], Strategy::Parallel).unwrap();
                assert_eq!(seq, par);
                assert!(el.realizes(&c, &seq));
                assert_eq!(sub.lattice.norm(&seq), big(-2));
                assert_eq!(divisibility(&sub.lattice, &seq).unwrap(), c.divisibility);
            }
        }
    }

    #[test]
    fn infeasible_candidate_has_no_witness() {
        let sub = lambda_a1(6).unwrap();
        let el = EichlerLattice::new(sub.lattice.clone()).unwrap();
        let w0 = sub.lattice.vector(&[(1, "t1+2t2")]).unwrap();
        let bad = OrbitCandidate {
            divisibility: big(2),
            dual_class: el.disc().class_of_fraction(&w0, &big(2)).unwrap(),
            norm: big(-2),
            witness: None,
        };
        assert_eq!(el.find_witness(&bad, 12, &recipes(&sub, 6, Locus::A11), Strategy::Sequential), None);
    }

    #[test]
    fn counts_small_g() {
        assert_eq!(nl_component_count(6, Locus::Nodal).unwrap(), 2);
        assert_eq!(nl_component_count(5, Locus::Nodal).unwrap(), 1);
        assert_eq!(nl_component_count(8, Locus::A11).unwrap(), 1);
        assert_eq!(nl_component_count(6, Locus::A11).unwrap(), 2);
        assert_eq!(nl_component_count(7, Locus::A11).unwrap(), 2);
        assert_eq!(nl_component_count(5, Locus::A2).unwrap(), 1);
        assert!(matches!(nl_component_count(2, Locus::A2), Err(OrbitError::InvalidGenus(2))));
    }

    #[test]
    fn labels() {
        let r = nl_components(6, Locus::A11, ComponentOptions::default()).unwrap();
        let labels: Vec<&str> = r.components.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["H'", "H''"]);
        let r = nl_components(7, Locus::A11, ComponentOptions::default()).unwrap();
        let labels: Vec<&str> = r.components.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["H'", "H'''"]);
        let r = nl_components(10, Locus::Nodal, ComponentOptions::default()).unwrap();
        let labels: Vec<&str> = r.components.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["P_{0,-2}", "P_{g-1,(g-2)/2}"]);
    }

    #[test]
    fn a2_divisibility_six_at_g4() {
        let r = nl_components(4, Locus::A2, ComponentOptions { witnesses: true, ..Default::default() }).unwrap();
        let divs: Vec<BigInt> = r.components.iter().map(|c| c.divisibility.clone()).collect();
        assert_eq!(divs, vec![big(2), big(6)]);
        for c in &r.components {
            let w = c.witness_ambient.as_ref().expect("witness found");
            let v = a2_root_from_witness(&r.reduction, w).expect("w - t1 even");
            let k3 = &r.reduction.ambient;
            let t1 = k3.vector(&[(1, "t1")]).unwrap();
            let pol = k3.vector(&[(1, "e1"), (3, "f1")]).unwrap();
            assert_eq!(k3.norm(&v), big(-2));
            assert_eq!(k3.pair(&v, &t1), big(1));
            assert_eq!(k3.pair(&v, &pol), big(0));
        }
    }
}
