//! Cuspidal and binodal fiber counts of one-parameter and two-parameter
//! families of curves on K3 surfaces.
//!
//! Two sources of numbers live here. For a net of curves in `|a|` on a smooth
//! surface `S`, the counts follow from `a^2`, `a.c1`, `c1^2`, `c2`. For the
//! unigonal family the counts are read off from pushforwards of Chern
//! monomials to the base `P^2`, evaluated in `Q[z]/(z^3)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChernError {
    #[error("9a^2 + 9a.c1 + 2c1^2 = {0} is odd, so the arithmetic genus is not an integer")]
    ParityViolation(BigInt),
    #[error("binodal count {0} is not an integer")]
    NonIntegral(BigRational),
    #[error("family degree must be positive, got {0}")]
    NonPositiveDegree(i64),
    #[error("pushforward table is missing `{0}`")]
    MissingEntry(String),
    #[error("table line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("double point class has odd degree {0}")]
    OddDoublePoint(BigRational),
    #[error("{what} has non-integral degree {value}")]
    NonIntegralDegree { what: &'static str, value: BigRational },
}

pub type Result<T> = std::result::Result<T, ChernError>;

/// Intersection numbers on a smooth projective surface, for a curve class `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurfaceChernData {
    pub alpha2: i64,
    pub alpha_c1: i64,
    pub c1sq: i64,
    pub c2: i64,
}

impl SurfaceChernData {
    /// Anticanonical double data on `P1 x P1` and on `F1`: `a = -2K`.
    pub const ANTICANONICAL_DOUBLE: SurfaceChernData = SurfaceChernData { alpha2: 32, alpha_c1: -16, c1sq: 8, c2: 4 };
}

/// `(g, d, e)`: genus of curves in the net, the number `3a^2 + a.c1`, and
/// `3a^2 + 2a.c1 + c2`.
pub fn net_invariants(data: &SurfaceChernData) -> Result<(BigInt, BigInt, BigInt)> {
    let a = BigInt::from(data.alpha2);
    let ac = BigInt::from(data.alpha_c1);
    let c1sq = BigInt::from(data.c1sq);
    let c2 = BigInt::from(data.c2);
    let twice = BigInt::from(9) * &a + BigInt::from(9) * &ac + BigInt::from(2) * &c1sq;
    if twice.is_odd() {
        return Err(ChernError::ParityViolation(twice));
    }
    let g = twice / 2 + 1;
    let d = BigInt::from(3) * &a + &ac;
    let e = BigInt::from(3) * &a + BigInt::from(2) * &ac + c2;
    Ok((g, d, e))
}

/// `(a2, a11)` for the net scaled by the degree of the family inside it.
pub fn net_counts(data: &SurfaceChernData, degree: i64) -> Result<(BigInt, BigInt)> {
    if degree <= 0 {
        return Err(ChernError::NonPositiveDegree(degree));
    }
    let (g, d, e) = net_invariants(data)?;
    let one = BigInt::one();
    let two = BigInt::from(2);
    let a2 = &two * &g - &d + &two * (&e - &one);
    let head = BigRational::from_integer(&d - BigInt::from(3) * &g - &e * (&e - &one));
    let tail = BigRational::new(BigInt::from(3), two.clone())
        * BigRational::from_integer((&e - &one) * (&e - &two));
    let a11 = head + tail;
    if !a11.is_integer() {
        return Err(ChernError::NonIntegral(a11));
    }
    let k = BigInt::from(degree);
    Ok((a2 * &k, a11.to_integer() * k))
}

/// An element `c0 + c1 z + c2 z^2` of the Chow ring of `P^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P2Class {
    pub c: [BigRational; 3],
}

impl P2Class {
    pub fn new(c0: BigRational, c1: BigRational, c2: BigRational) -> Self {
        P2Class { c: [c0, c1, c2] }
    }

    pub fn from_ints(c0: i64, c1: i64, c2: i64) -> Self {
        let r = |x: i64| BigRational::from_integer(x.into());
        P2Class::new(r(c0), r(c1), r(c2))
    }

    pub fn zero() -> Self {
        P2Class::from_ints(0, 0, 0)
    }

    /// The hyperplane class `z`.
    pub fn zeta() -> Self {
        P2Class::from_ints(0, 1, 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = BigRational::from_integer(k.into());
        P2Class { c: self.c.clone().map(|x| x * &k) }
    }

    /// Integral over `P^2`: the `z^2` coefficient.
    pub fn degree(&self) -> &BigRational {
        &self.c[2]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }
}

impl Add for &P2Class {
    type Output = P2Class;

    fn add(self, o: &P2Class) -> P2Class {
        P2Class::new(&self.c[0] + &o.c[0], &self.c[1] + &o.c[1], &self.c[2] + &o.c[2])
    }
}

impl Sub for &P2Class {
    type Output = P2Class;

    fn sub(self, o: &P2Class) -> P2Class {
        P2Class::new(&self.c[0] - &o.c[0], &self.c[1] - &o.c[1], &self.c[2] - &o.c[2])
    }
}

impl Neg for &P2Class {
    type Output = P2Class;

    fn neg(self) -> P2Class {
        P2Class { c: self.c.clone().map(|x| -x) }
    }
}

impl Mul for &P2Class {
    type Output = P2Class;

    fn mul(self, o: &P2Class) -> P2Class {
        let (a, b) = (&self.c, &o.c);
        P2Class::new(&a[0] * &b[0], &a[0] * &b[1] + &a[1] * &b[0], &a[0] * &b[2] + &a[1] * &b[1] + &a[2] * &b[0])
    }
}

impl fmt::Display for P2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {} z + {} z^2", self.c[0], self.c[1], self.c[2])
    }
}

/// Chern classes of the base: `beta1 = c1(T)`, `beta2 = c2(T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseClasses {
    pub beta1: P2Class,
    pub beta2: P2Class,
}

impl Default for BaseClasses {
    /// The projective plane: `c1 = 3z`, `c2 = 3z^2`.
    fn default() -> Self {
        BaseClasses { beta1: P2Class::from_ints(0, 3, 0), beta2: P2Class::from_ints(0, 0, 3) }
    }
}

pub const TABLE_NAMES: [&str; 6] = ["h_a1", "h_a2", "h_a3", "h_a1sq", "h_a1a2", "delta"];

const SHIPPED_TABLE: &str = include_str!("../data/unigonal.tbl");

/// Pushforwards `h(a1), h(a2), h(a3), h(a1^2), h(a1 a2)` and the class `delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnigonalTable {
    pub h_a1: P2Class,
    pub h_a2: P2Class,
    pub h_a3: P2Class,
    pub h_a1sq: P2Class,
    pub h_a1a2: P2Class,
    pub delta: P2Class,
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl UnigonalTable {
    /// The table shipped with the crate.
    pub fn shipped() -> Self {
        Self::parse(SHIPPED_TABLE).expect("shipped table is well formed")
    }

    pub fn zero() -> Self {
        let z = P2Class::zero();
        UnigonalTable {
            h_a1: z.clone(),
            h_a2: z.clone(),
            h_a3: z.clone(),
            h_a1sq: z.clone(),
            h_a1a2: z.clone(),
            delta: z,
        }
    }

    /// Parses lines `name c0 c1 c2`; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<String, P2Class> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| ChernError::Parse { line: i + 1, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(err(format!("expected `name c0 c1 c2`, got {} fields", fields.len())));
            }
            let name = fields[0];
            if !TABLE_NAMES.contains(&name) {
                return Err(err(format!("unknown entry `{name}`")));
            }
            let mut cs = Vec::with_capacity(3);
            for f in &fields[1..] {
                cs.push(parse_rational(f).ok_or_else(|| err(format!("bad rational `{f}`")))?);
            }
            let [c0, c1, c2]: [BigRational; 3] = cs.try_into().expect("three coefficients");
            if entries.insert(name.to_string(), P2Class::new(c0, c1, c2)).is_some() {
                return Err(err(format!("duplicate entry `{name}`")));
            }
        }
        let mut take = |name: &str| entries.remove(name).ok_or_else(|| ChernError::MissingEntry(name.to_string()));
        Ok(UnigonalTable {
            h_a1: take("h_a1")?,
            h_a2: take("h_a2")?,
            h_a3: take("h_a3")?,
            h_a1sq: take("h_a1sq")?,
            h_a1a2: take("h_a1a2")?,
            delta: take("delta")?,
        })
    }

    pub fn to_text(&self) -> String {
        let rows = [
            ("h_a1", &self.h_a1),
            ("h_a2", &self.h_a2),
            ("h_a3", &self.h_a3),
            ("h_a1sq", &self.h_a1sq),
            ("h_a1a2", &self.h_a1a2),
            ("delta", &self.delta),
        ];
        rows.iter().map(|(n, c)| format!("{n} {} {} {}\n", c.c[0], c.c[1], c.c[2])).collect()
    }

    /// `h(a1) beta1 + h(a2) - delta`; zero for a consistent table.
    pub fn delta_defect(&self, base: &BaseClasses) -> P2Class {
        &(&(&self.h_a1 * &base.beta1) + &self.h_a2) - &self.delta
    }
}

fn integral_degree(what: &'static str, c: &P2Class) -> Result<BigInt> {
    let v = c.degree();
    if !v.is_integer() {
        return Err(ChernError::NonIntegralDegree { what, value: v.clone() });
    }
    Ok(v.to_integer())
}

/// The four summands of the cuspidal count, as classes on the base:
/// `4 h(a1) b1^2`, `2 h(a1^2 + a2) b1`, `-2 h(a1) b2`, `2 h(a1 a2)`.
pub fn unigonal_a2_terms(t: &UnigonalTable, base: &BaseClasses) -> [P2Class; 4] {
    let b1 = &base.beta1;
    let sq_plus = &t.h_a1sq + &t.h_a2;
    [
        (&t.h_a1 * &(b1 * b1)).scale(4),
        (&sq_plus * b1).scale(2),
        (&t.h_a1 * &base.beta2).scale(-2),
        t.h_a1a2.scale(2),
    ]
}

pub fn unigonal_a2_with(t: &UnigonalTable, base: &BaseClasses) -> Result<BigInt> {
    let total = unigonal_a2_terms(t, base).iter().fold(P2Class::zero(), |acc, x| &acc + x);
    integral_degree("cuspidal class", &total)
}

pub fn unigonal_a2(t: &UnigonalTable) -> Result<BigInt> {
    unigonal_a2_with(t, &BaseClasses::default())
}

/// Degree of the double point class:
/// `delta^2 - b1 delta - 2h(a1 a2) - h(a3) - 2h(a1^2 + a2) b1 + h(a1)(3 b2 - 4 b1^2)`.
pub fn unigonal_double_point_with(t: &UnigonalTable, base: &BaseClasses) -> Result<BigInt> {
    let (b1, b2) = (&base.beta1, &base.beta2);
    let sq_plus = &t.h_a1sq + &t.h_a2;
    let chern_part = &b2.scale(3) - &(b1 * b1).scale(4);
    let terms = [
        &t.delta * &t.delta,
        -&(b1 * &t.delta),
        t.h_a1a2.scale(-2),
        -&t.h_a3,
        (&sq_plus * b1).scale(-2),
        &t.h_a1 * &chern_part,
    ];
    let total = terms.iter().fold(P2Class::zero(), |acc, x| &acc + x);
    integral_degree("double point class", &total)
}

pub fn unigonal_double_point(t: &UnigonalTable) -> Result<BigInt> {
    unigonal_double_point_with(t, &BaseClasses::default())
}

/// `(a2, a11)` with `2 (a2 + a11) = deg D`.
pub fn unigonal_counts(t: &UnigonalTable) -> Result<(BigInt, BigInt)> {
    let a2 = unigonal_a2(t)?;
    let dp = unigonal_double_point(t)?;
    if dp.is_odd() {
        return Err(ChernError::OddDoublePoint(BigRational::from_integer(dp)));
    }
    let a11 = dp / 2 - &a2;
    Ok((a2, a11))
}
