//! Noether-Lefschetz divisor bookkeeping for degree `2g-2` quasi-polarized
//! K3 surfaces.
//!
//! A key `(g, d, n)` stands for the rank-two lattice spanned by the
//! polarization `L` and a class `a` with `L.a = d` and `a^2 = n`, so its Gram
//! matrix is `[[2g-2, d], [d, n]]` with determinant `delta = (2g-2) n - d^2`.
//!
//! Keys are equivalent when they describe the same divisor: `d = d' mod 2g-2`
//! and `d^2 - 2n(g-1) = d'^2 - 2n'(g-1)`. The triangular relation expresses
//! the divisor of a key as a sum over primitive classes with multiplicity
//! `mu` in `{0, 1, 2}`.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivisorError {
    #[error("genus must be at least 3, got {0}")]
    InvalidGenus(i64),
    #[error("key (g={g}, d={d}, n={n}) has delta = {delta} >= 0 and is not a Noether-Lefschetz divisor")]
    NotNoetherLefschetz { g: i64, d: i64, n: i64, delta: i128 },
    #[error("class representative (d={d}, n={n}) must have d^2 - 2n(g-1) > 0")]
    NonPositiveRepresentative { d: i64, n: i64 },
    #[error("multiplicity {0} outside {{0, 1, 2}}")]
    MultiplicityOutOfRange(usize),
    #[error("integer overflow for key (g={g}, d={d}, n={n})")]
    Overflow { g: i64, d: i64, n: i64 },
}

pub type Result<T> = std::result::Result<T, DivisorError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NLKey {
    pub g: i64,
    pub d: i64,
    pub n: i64,
}

impl NLKey {
    pub fn new(g: i64, d: i64, n: i64) -> Result<Self> {
        if g < 3 {
            return Err(DivisorError::InvalidGenus(g));
        }
        Ok(NLKey { g, d, n })
    }

    /// `d^2 - 2n(g-1)`, i.e. `-delta`.
    pub fn disc(&self) -> i128 {
        -delta(self)
    }

    fn overflow(&self) -> DivisorError {
        DivisorError::Overflow { g: self.g, d: self.d, n: self.n }
    }
}

impl fmt::Display for NLKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g={}, d={}, n={})", self.g, self.d, self.n)
    }
}

/// `delta = (2g-2) n - d^2`. Exact in `i128` for all `i64` inputs.
pub fn delta(key: &NLKey) -> i128 {
    let (g, d, n) = (key.g as i128, key.d as i128, key.n as i128);
    (2 * g - 2) * n - d * d
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NLVectorData {
    /// Half the norm of the projection of the class to `L^perp`.
    #[serde(serialize_with = "ser_ratio")]
    pub half_norm: Ratio<i128>,
    /// Discriminant class as the multiple `d` of the generator of `Z/(2g-2)`.
    pub disc_class: i64,
    pub multiplicity_two: bool,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<i128>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

pub fn nl_vector_data(key: &NLKey) -> Result<NLVectorData> {
    let dl = delta(key);
    if dl >= 0 {
        return Err(DivisorError::NotNoetherLefschetz { g: key.g, d: key.d, n: key.n, delta: dl });
    }
    let m = 2 * key.g - 2;
    let cls = key.d.rem_euclid(m);
    Ok(NLVectorData {
        half_norm: Ratio::new(dl, 4 * key.g as i128 - 4),
        disc_class: cls,
        multiplicity_two: (2 * cls) % m == 0,
    })
}

/// Whether `(d, n)` and `(d2, n2)` define the same divisor in genus `g`.
pub fn prim_equiv(g: i64, (d, n): (i64, i64), (d2, n2): (i64, i64)) -> bool {
    let m = 2 * g as i128 - 2;
    let (d, n, d2, n2) = (d as i128, n as i128, d2 as i128, n2 as i128);
    (d - d2).rem_euclid(m) == 0 && d * d - n * m == d2 * d2 - n2 * m
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MuVariant {
    /// `(2g-2) y = d - x n_i`.
    AsWritten,
    /// `(2g-2) y = d - x d_i`.
    #[default]
    DCorrected,
}

impl std::str::FromStr for MuVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "as-written" => Ok(MuVariant::AsWritten),
            "d-corrected" => Ok(MuVariant::DCorrected),
            other => Err(format!("unknown variant `{other}` (expected as-written or d-corrected)")),
        }
    }
}

fn isqrt(x: i128) -> Option<i128> {
    if x < 0 {
        return None;
    }
    let mut r = (x as f64).sqrt() as i128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    (r * r == x).then_some(r)
}

/// Number of integer pairs `(x, y)` with `D_i x^2 = D` and
/// `(2g-2) y = d - x c`, where `D = d^2 - 2n(g-1)` for the target,
/// `D_i` likewise for the representative and `c` is `d_i` or `n_i`.
pub fn mu_coefficient(g: i64, target: (i64, i64), rep: (i64, i64), variant: MuVariant) -> Result<u8> {
    let key = NLKey::new(g, target.0, target.1)?;
    let rkey = NLKey::new(g, rep.0, rep.1)?;
    let di_disc = rkey.disc();
    if di_disc <= 0 {
        return Err(DivisorError::NonPositiveRepresentative { d: rep.0, n: rep.1 });
    }
    let dd = key.disc();
    if dd % di_disc != 0 {
        return Ok(0);
    }
    let Some(x) = isqrt(dd / di_disc) else {
        return Ok(0);
    };
    let c = match variant {
        MuVariant::AsWritten => rep.1 as i128,
        MuVariant::DCorrected => rep.0 as i128,
    };
    let m = 2 * g as i128 - 2;
    let xs: &[i128] = if x == 0 { &[0] } else { &[x, -x] };
    let count = xs
        .iter()
        .map(|&x| x.checked_mul(c).and_then(|xc| (target.0 as i128).checked_sub(xc)))
        .collect::<Option<Vec<_>>>()
        .ok_or(key.overflow())?
        .into_iter()
        .filter(|r| r % m == 0)
        .count();
    if count > 2 {
        return Err(DivisorError::MultiplicityOutOfRange(count));
    }
    Ok(count as u8)
}

/// One summand of the triangular relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionTerm {
    pub d: i64,
    pub n: i64,
    pub mu: u8,
}

/// Primitive classes `(d_i, n_i)` with `mu > 0` in the triangular relation
/// for `key`. Representatives have `d_i` in `[0, 2g-3]` and even `n_i`
/// (odd `n_i` would need a class of odd square in an even lattice), and are
/// sorted by `d_i^2 - 2n_i(g-1)`, then `d_i`.
pub fn triangular_decomposition(key: &NLKey, variant: MuVariant) -> Result<Vec<DecompositionTerm>> {
    let dl = delta(key);
    if dl >= 0 {
        return Err(DivisorError::NotNoetherLefschetz { g: key.g, d: key.d, n: key.n, delta: dl });
    }
    let dd = -dl;
    let m = 2 * key.g as i128 - 2;
    let mut out = Vec::new();
    let mut x: i128 = 1;
    while x * x <= dd {
        if dd % (x * x) == 0 {
            let di_disc = dd / (x * x);
            for di in 0..m {
                let num = di * di - di_disc;
                if num % m != 0 {
                    continue;
                }
                let ni = num / m;
                if ni % 2 != 0 {
                    continue;
                }
                let (Ok(di64), Ok(ni64)) = (i64::try_from(di), i64::try_from(ni)) else {
                    return Err(key.overflow());
                };
                let mu = mu_coefficient(key.g, (key.d, key.n), (di64, ni64), variant)?;
                if mu > 0 {
                    out.push((di_disc, DecompositionTerm { d: di64, n: ni64, mu }));
                }
            }
        }
        x += 1;
    }
    out.sort_by_key(|(disc, t)| (*disc, t.d));
    Ok(out.into_iter().map(|(_, t)| t).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::{nl_component_count, Locus};
    use proptest::prelude::*;

    fn key(g: i64, d: i64, n: i64) -> NLKey {
        NLKey::new(g, d, n).unwrap()
    }

    fn terms(g: i64, d: i64, n: i64) -> Vec<(i64, i64, u8)> {
        triangular_decomposition(&key(g, d, n), MuVariant::DCorrected)
            .unwrap()
            .into_iter()
            .map(|t| (t.d, t.n, t.mu))
            .collect()
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta(&key(6, 0, 0)), 0);
        assert_eq!(delta(&key(6, 0, -2)), -20);
        assert_eq!(delta(&key(6, 5, 2)), -5);
        assert!(NLKey::new(2, 0, 0).is_err());
    }

    #[test]
    fn vector_data() {
        let v = nl_vector_data(&key(6, 0, -2)).unwrap();
        assert_eq!(v.half_norm, Ratio::from_integer(-1));
        assert_eq!(v.disc_class, 0);
        assert!(v.multiplicity_two);
        let v = nl_vector_data(&key(6, 5, 2)).unwrap();
        assert_eq!(v.half_norm, Ratio::new(-1, 4));
        assert_eq!(v.disc_class, 5);
        assert!(v.multiplicity_two);
        let v = nl_vector_data(&key(6, 1, 0)).unwrap();
        assert_eq!(v.disc_class, 1);
        assert!(!v.multiplicity_two);
        assert!(matches!(nl_vector_data(&key(6, 0, 0)), Err(DivisorError::NotNoetherLefschetz { .. })));
    }

    #[test]
    fn equivalence() {
        assert!(prim_equiv(6, (3, 1), (3, 1)));
        assert!(prim_equiv(6, (3, 1), (3 + 10, 1 + 6 + 10)));
        assert!(!prim_equiv(6, (0, -2), (5, 2)));
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_coefficient(6, (0, -2), (5, 2), MuVariant::DCorrected).unwrap(), 2);
        assert_eq!(mu_coefficient(6, (0, -2), (0, -2), MuVariant::DCorrected).unwrap(), 2);
        // 20 / 3 is not a square ratio
        assert_eq!(mu_coefficient(6, (0, -2), (7, 4), MuVariant::DCorrected).unwrap(), 0);
        // with n_i the x = +-2 branch needs 10 | 4
        assert_eq!(mu_coefficient(6, (0, -2), (5, 2), MuVariant::AsWritten).unwrap(), 0);
        assert!(mu_coefficient(6, (0, -2), (0, 0), MuVariant::DCorrected).is_err());
    }

    #[test]
    fn decomposition_examples() {
        assert_eq!(terms(6, 0, -2), vec![(5, 2, 2), (0, -2, 2)]);
        assert_eq!(terms(5, 0, -2), vec![(0, -2, 2)]);
        assert!(triangular_decomposition(&key(6, 0, 0), MuVariant::DCorrected).is_err());
    }

    #[test]
    fn nodal_classes_match_orbit_count() {
        for g in 3..40i64 {
            let t = terms(g, 0, -2);
            let expected = if g % 4 == 2 { 2 } else { 1 };
            assert_eq!(t.len(), expected, "g = {g}");
            if g % 4 == 2 {
                assert_eq!((t[0].0, t[0].1), (g - 1, (g - 2) / 2));
            }
            assert_eq!(t.len(), nl_component_count(g as u64, Locus::Nodal).unwrap(), "g = {g}");
        }
    }

    proptest! {
        #[test]
        fn mu_in_range(g in 3i64..30, d in -120i64..120, n in -120i64..120, di in 0i64..60, ni in -60i64..20) {
            let (d, n) = (d % (4 * g + 1), n % (4 * g + 1));
            let di = di % (2 * g - 2);
            prop_assume!(di * di - 2 * ni * (g - 1) > 0);
            for v in [MuVariant::DCorrected, MuVariant::AsWritten] {
                let mu = mu_coefficient(g, (d, n), (di, ni), v).unwrap();
                prop_assert!(mu <= 2);
            }
            let mu = mu_coefficient(g, (d, n), (di, ni), MuVariant::DCorrected).unwrap();
            prop_assert_eq!(mu, mu_coefficient(g, (-d, n), (di, ni), MuVariant::DCorrected).unwrap());
        }

        #[test]
        fn delta_symmetric(g in 3i64..100, d in -500i64..500, n in -500i64..500) {
            prop_assert_eq!(delta(&key(g, d, n)), delta(&key(g, -d, n)));
        }

        #[test]
        fn decomposition_invariant(g in 3i64..20, d in -40i64..40, n in -40i64..0) {
            let k = key(g, d, n);
            prop_assume!(delta(&k) < 0);
            let base = triangular_decomposition(&k, MuVariant::DCorrected).unwrap();
            let neg = triangular_decomposition(&key(g, -d, n), MuVariant::DCorrected).unwrap();
            prop_assert_eq!(&base, &neg);
            let m = 2 * g - 2;
            let shifted = triangular_decomposition(&key(g, d + m, n + 2 * d + m), MuVariant::DCorrected).unwrap();
            prop_assert_eq!(&base, &shifted);
            prop_assert!(base.iter().all(|t| t.mu > 0 && t.mu <= 2 && (0..m).contains(&t.d)));
        }
    }
}
