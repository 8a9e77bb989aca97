//! Truncated Fourier expansions of genus-2 Siegel modular forms.
//!
//! A series is a sparse map from indices `(k, l, m)`, standing for the
//! monomial `qt^k p^l q^m`, to exact rationals. Truncation keeps `k <= K`,
//! `m <= M` and `|l| <= L`. The Fourier index of a holomorphic form is the
//! half-integral matrix `[[k, l/2], [l/2, m]]`, so coefficients vanish unless
//! `4km - l^2 >= 0`, and they depend only on its `GL2(Z)` class.
//!
//! The Igusa cusp form is built from its product expansion
//!
//! ```text
//! chi10 = qt p q * prod_{(r,s,t) > 0} (1 - qt^r p^s q^t)^{c(4rt - s^2)}
//! ```
//!
//! with `c` the coefficients of a weight 1/2 form. The Eisenstein product
//! `E4 E6` comes from coefficient tables. Any weight-10 form is a combination
//! `a E4 E6 + b chi10`, which is what [`fit_weight10`] solves for.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::chern::{net_counts, ChernError, SurfaceChernData};
use crate::par::{map_collect, Strategy};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SiegelError {
    #[error("coefficient table exhausted: c({0}) is needed but not provided")]
    TableExhausted(i64),
    #[error("index {0} is beyond table support")]
    BeyondSupport(GenusTwoIndex),
    #[error("binomial power of the constant monomial")]
    ConstantMonomial,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("conflicting values for index {0}")]
    Conflict(GenusTwoIndex),
    #[error("need at least two observations, got {0}")]
    TooFewObservations(usize),
    #[error("the first two observations give a singular system")]
    Singular,
    #[error("observation at {index} is {observed}, but the fit predicts {predicted}")]
    Inconsistent { index: GenusTwoIndex, observed: Box<BigRational>, predicted: Box<BigRational> },
    #[error("the zero form has no NL vector")]
    ZeroForm,
    #[error("truncation bounds must be non-negative")]
    NegativeTruncation,
    #[error(transparent)]
    Chern(#[from] ChernError),
}

pub type Result<T> = std::result::Result<T, SiegelError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GenusTwoIndex {
    pub k: i64,
    pub l: i64,
    pub m: i64,
}

impl GenusTwoIndex {
    pub const fn new(k: i64, l: i64, m: i64) -> Self {
        GenusTwoIndex { k, l, m }
    }

    /// `4km - l^2`, four times the determinant of the index matrix.
    pub fn disc(&self) -> i128 {
        4 * self.k as i128 * self.m as i128 - (self.l as i128) * (self.l as i128)
    }

    pub fn is_psd(&self) -> bool {
        self.k >= 0 && self.m >= 0 && self.disc() >= 0
    }

    fn add(&self, o: &GenusTwoIndex) -> GenusTwoIndex {
        GenusTwoIndex::new(self.k + o.k, self.l + o.l, self.m + o.m)
    }

    fn times(&self, j: i64) -> GenusTwoIndex {
        GenusTwoIndex::new(self.k * j, self.l * j, self.m * j)
    }

    /// Reduced representative of the `GL2(Z)` class of a positive
    /// semidefinite index: `0 <= l <= k <= m`, or `(0, 0, m)` in rank one.
    pub fn reduced(&self) -> Option<GenusTwoIndex> {
        if !self.is_psd() {
            return None;
        }
        let (mut a, mut b, mut c) = (self.k as i128, self.l as i128, self.m as i128);
        loop {
            if a > c {
                std::mem::swap(&mut a, &mut c);
            }
            if a == 0 {
                // psd forces b = 0
                break;
            }
            if b.abs() <= a {
                break;
            }
            // x -> x - n y brings |b| into [-a, a]
            let n = Integer::div_floor(&(b + a), &(2 * a));
            let nb = b - 2 * a * n;
            c = c - b * n + a * n * n;
            b = nb;
        }
        Some(GenusTwoIndex::new(a as i64, b.abs() as i64, c as i64))
    }
}

impl fmt::Display for GenusTwoIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.k, self.l, self.m)
    }
}

impl std::str::FromStr for GenusTwoIndex {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [k, l, m] = parts.as_slice() else {
            return Err(format!("expected `k,l,m`, got `{s}`"));
        };
        let p = |x: &str| x.parse::<i64>().map_err(|e| format!("bad index component `{x}`: {e}"));
        Ok(GenusTwoIndex::new(p(k)?, p(l)?, p(m)?))
    }
}

/// Truncation bounds: `k <= k_max`, `m <= m_max`, `|l| <= l_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub k_max: i64,
    pub m_max: i64,
    pub l_max: i64,
}

impl Truncation {
    /// The standard bounds: `|l| <= 2 max(K, M) + 2`.
    pub fn standard(k_max: i64, m_max: i64) -> Self {
        Truncation { k_max, m_max, l_max: 2 * k_max.max(m_max) + 2 }
    }

    pub fn contains(&self, i: &GenusTwoIndex) -> bool {
        (0..=self.k_max).contains(&i.k) && (0..=self.m_max).contains(&i.m) && i.l.abs() <= self.l_max
    }

    pub fn min(&self, o: &Truncation) -> Truncation {
        Truncation { k_max: self.k_max.min(o.k_max), m_max: self.m_max.min(o.m_max), l_max: self.l_max.min(o.l_max) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusTwoSeries {
    coeffs: BTreeMap<GenusTwoIndex, BigRational>,
    trunc: Truncation,
}

impl GenusTwoSeries {
    pub fn zero(trunc: Truncation) -> Self {
        GenusTwoSeries { coeffs: BTreeMap::new(), trunc }
    }

    pub fn one(trunc: Truncation) -> Self {
        let mut s = Self::zero(trunc);
        s.add_term(GenusTwoIndex::new(0, 0, 0), BigRational::one());
        s
    }

    pub fn monomial(trunc: Truncation, idx: GenusTwoIndex, c: BigRational) -> Self {
        let mut s = Self::zero(trunc);
        s.add_term(idx, c);
        s
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    /// Adds `c` to the coefficient at `idx`; terms outside the bounds are
    /// dropped and zero results are removed.
    pub fn add_term(&mut self, idx: GenusTwoIndex, c: BigRational) {
        if c.is_zero() || !self.trunc.contains(&idx) {
            return;
        }
        let e = self.coeffs.entry(idx).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&idx);
        }
    }

    pub fn coeff(&self, idx: &GenusTwoIndex) -> BigRational {
        self.coeffs.get(idx).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GenusTwoIndex, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.trunc);
        for (i, v) in &self.coeffs {
            out.add_term(*i, v * c);
        }
        out
    }

    pub fn add(&self, o: &GenusTwoSeries) -> Self {
        let mut out = Self::zero(self.trunc.min(&o.trunc));
        for (i, v) in self.coeffs.iter().chain(&o.coeffs) {
            out.add_term(*i, v.clone());
        }
        out
    }

    /// Multiplies every index by `qt^k p^l q^m`.
    pub fn shift(&self, by: GenusTwoIndex, trunc: Truncation) -> Self {
        let mut out = Self::zero(trunc);
        for (i, v) in &self.coeffs {
            out.add_term(i.add(&by), v.clone());
        }
        out
    }

    pub fn with_truncation(&self, trunc: Truncation) -> Self {
        let mut out = Self::zero(trunc);
        for (i, v) in &self.coeffs {
            out.add_term(*i, v.clone());
        }
        out
    }
}

const MUL_CHUNK: usize = 64;

/// Product truncated to the smaller of the two bounds.
pub fn series_mul(x: &GenusTwoSeries, y: &GenusTwoSeries, strategy: Strategy) -> GenusTwoSeries {
    let trunc = x.trunc.min(&y.trunc);
    let xs: Vec<(&GenusTwoIndex, &BigRational)> = x.coeffs.iter().collect();
    let chunks: Vec<&[(&GenusTwoIndex, &BigRational)]> = xs.chunks(MUL_CHUNK).collect();
    let partials = map_collect(strategy, chunks, |chunk| {
        let mut acc = GenusTwoSeries::zero(trunc);
        for (i, a) in chunk {
            for (j, b) in &y.coeffs {
                let idx = i.add(j);
                if trunc.contains(&idx) {
                    acc.add_term(idx, *a * b);
                }
            }
        }
        acc
    });
    let mut out = GenusTwoSeries::zero(trunc);
    for p in partials {
        for (i, v) in p.coeffs {
            out.add_term(i, v);
        }
    }
    out
}

/// `(1 - u)^c` for the monomial `u`, via generalized binomial coefficients.
pub fn binomial_pow(u: GenusTwoIndex, c: i64, trunc: Truncation) -> Result<GenusTwoSeries> {
    if u == GenusTwoIndex::new(0, 0, 0) {
        return Err(SiegelError::ConstantMonomial);
    }
    let mut out = GenusTwoSeries::one(trunc);
    let c = BigInt::from(c);
    // running value of (-1)^j C(c, j)
    let mut coef = BigRational::one();
    let mut j: i64 = 1;
    loop {
        let idx = u.times(j);
        if !trunc.contains(&idx) {
            break;
        }
        coef = -coef * BigRational::new(&c - BigInt::from(j - 1), BigInt::from(j));
        if coef.is_zero() {
            break;
        }
        out.add_term(idx, coef.clone());
        j += 1;
    }
    Ok(out)
}

const SHIPPED_C: &str = include_str!("../data/c_half_integral.tbl");
const SHIPPED_E4: &str = include_str!("../data/e4.tbl");
const SHIPPED_E6: &str = include_str!("../data/e6.tbl");

fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then(|| (i + 1, line.split_whitespace().collect()))
    })
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

/// Coefficients `c(m)` of the weight 1/2 input form; `c(m) = 0` for `m < -1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfIntegralTable {
    values: BTreeMap<i64, BigInt>,
    support_max: i64,
}

impl HalfIntegralTable {
    pub fn shipped() -> Self {
        Self::parse(SHIPPED_C).expect("shipped table is well formed")
    }

    /// Parses lines `m value`. Indices not listed up to the largest one are 0.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (line, fields) in data_lines(text) {
            let err = |msg: String| SiegelError::Parse { line, msg };
            let [m, v] = fields.as_slice() else {
                return Err(err(format!("expected `m value`, got {} fields", fields.len())));
            };
            let m: i64 = m.parse().map_err(|_| err(format!("bad index `{m}`")))?;
            let v: BigInt = v.parse().map_err(|_| err(format!("bad value `{v}`")))?;
            if m < -1 && !v.is_zero() {
                return Err(err(format!("c({m}) must vanish")));
            }
            if values.insert(m, v).is_some() {
                return Err(err(format!("duplicate index {m}")));
            }
        }
        let support_max = values.keys().next_back().copied().unwrap_or(-2);
        Ok(HalfIntegralTable { values, support_max })
    }

    pub fn support_max(&self) -> i64 {
        self.support_max
    }

    pub fn get(&self, m: i64) -> Result<BigInt> {
        if m < -1 {
            return Ok(BigInt::zero());
        }
        if m > self.support_max {
            return Err(SiegelError::TableExhausted(m));
        }
        Ok(self.values.get(&m).cloned().unwrap_or_default())
    }
}

/// The Igusa cusp form truncated to `k <= k_max`, `m <= m_max`.
pub fn chi10(table: &HalfIntegralTable, k_max: i64, m_max: i64, strategy: Strategy) -> Result<GenusTwoSeries> {
    if k_max < 0 || m_max < 0 {
        return Err(SiegelError::NegativeTruncation);
    }
    let out_trunc = Truncation::standard(k_max, m_max);
    if k_max == 0 || m_max == 0 {
        return Ok(GenusTwoSeries::zero(out_trunc));
    }
    // the prefactor uses one power of qt and of q
    let (rk, rm) = (k_max - 1, m_max - 1);
    let inner = Truncation { k_max: rk, m_max: rm, l_max: 2 + 2 * (k_max + m_max) };

    let mut factors = Vec::new();
    for r in 0..=rk {
        for t in 0..=rm {
            let smax = ((4 * r * t + 1) as f64).sqrt() as i64 + 1;
            for s in -smax..=smax {
                if s * s > 4 * r * t + 1 {
                    continue;
                }
                let positive = r > 0 || t > 0 || s < 0;
                if !positive {
                    continue;
                }
                let c = table.get(4 * r * t - s * s)?;
                if c.is_zero() {
                    continue;
                }
                factors.push((GenusTwoIndex::new(r, s, t), c));
            }
        }
    }

    let mut prod = GenusTwoSeries::one(inner);
    for (u, c) in factors {
        let c = i64::try_from(&c).map_err(|_| SiegelError::TableExhausted(4 * u.k * u.m - u.l * u.l))?;
        prod = series_mul(&prod, &binomial_pow(u, c, inner)?, strategy);
    }
    Ok(prod.shift(GenusTwoIndex::new(1, 1, 1), out_trunc))
}

/// Fourier coefficients stored by `GL2(Z)` class of the index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoeffTable {
    entries: BTreeMap<GenusTwoIndex, BigRational>,
}

impl CoeffTable {
    pub fn e4() -> Self {
        Self::parse(SHIPPED_E4).expect("shipped table is well formed")
    }

    pub fn e6() -> Self {
        Self::parse(SHIPPED_E6).expect("shipped table is well formed")
    }

    /// Parses lines `k l m value`; each index is stored under its reduced
    /// class, and two lines for one class must agree.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (line, fields) in data_lines(text) {
            let err = |msg: String| SiegelError::Parse { line, msg };
            let [k, l, m, v] = fields.as_slice() else {
                return Err(err(format!("expected `k l m value`, got {} fields", fields.len())));
            };
            let p = |x: &str| x.parse::<i64>().map_err(|_| err(format!("bad index component `{x}`")));
            let idx = GenusTwoIndex::new(p(k)?, p(l)?, p(m)?);
            let v = parse_rational(v).ok_or_else(|| err(format!("bad value `{v}`")))?;
            let red = idx.reduced().ok_or_else(|| err(format!("index {idx} is not positive semidefinite")))?;
            match entries.get(&red) {
                Some(old) if *old != v => return Err(SiegelError::Conflict(red)),
                _ => {
                    entries.insert(red, v);
                }
            }
        }
        Ok(CoeffTable { entries })
    }

    pub fn to_text(&self) -> String {
        self.entries.iter().map(|(i, v)| format!("{} {} {} {}\n", i.k, i.l, i.m, v)).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Coefficient at any index: zero off the semidefinite cone, an error
    /// for classes the table does not list.
    pub fn coeff(&self, idx: &GenusTwoIndex) -> Result<BigRational> {
        match idx.reduced() {
            None => Ok(BigRational::zero()),
            Some(r) => self.entries.get(&r).cloned().ok_or(SiegelError::BeyondSupport(*idx)),
        }
    }

    /// The full truncated series, every index filled in from its class.
    pub fn expand(&self, trunc: Truncation) -> Result<GenusTwoSeries> {
        let mut out = GenusTwoSeries::zero(trunc);
        for k in 0..=trunc.k_max {
            for m in 0..=trunc.m_max {
                for l in -trunc.l_max..=trunc.l_max {
                    let idx = GenusTwoIndex::new(k, l, m);
                    if idx.is_psd() {
                        out.add_term(idx, self.coeff(&idx)?);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `E4 E6` from the shipped tables, truncated to `k <= k_max`, `m <= m_max`.
pub fn e4e6(k_max: i64, m_max: i64, strategy: Strategy) -> Result<GenusTwoSeries> {
    e4e6_with(&CoeffTable::e4(), &CoeffTable::e6(), k_max, m_max, strategy)
}

/// Product of two tabulated forms.
pub fn e4e6_with(e4: &CoeffTable, e6: &CoeffTable, k_max: i64, m_max: i64, strategy: Strategy) -> Result<GenusTwoSeries> {
    if k_max < 0 || m_max < 0 {
        return Err(SiegelError::NegativeTruncation);
    }
    let trunc = Truncation::standard(k_max, m_max);
    Ok(series_mul(&e4.expand(trunc)?, &e6.expand(trunc)?, strategy))
}

/// `Theta = a E4 E6 + b chi10`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaFit {
    pub a: BigRational,
    pub b: BigRational,
}

impl ThetaFit {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        ThetaFit { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        ThetaFit::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

/// Both basis forms evaluated at the given indices.
fn basis_at(indices: &[GenusTwoIndex], strategy: Strategy) -> Result<Vec<(BigRational, BigRational)>> {
    let k_max = indices.iter().map(|i| i.k).max().unwrap_or(0).max(0);
    let m_max = indices.iter().map(|i| i.m).max().unwrap_or(0).max(0);
    let e = e4e6(k_max, m_max, strategy)?;
    let x = chi10(&HalfIntegralTable::shipped(), k_max, m_max, strategy)?;
    indices
        .iter()
        .map(|i| {
            if i.k < 0 || i.m < 0 {
                return Ok((BigRational::zero(), BigRational::zero()));
            }
            if !e.trunc.contains(i) {
                return Err(SiegelError::BeyondSupport(*i));
            }
            Ok((e.coeff(i), x.coeff(i)))
        })
        .collect()
}

/// Solves `Theta = a E4 E6 + b chi10` from the first two observations in the
/// given order and checks the remaining ones.
pub fn fit_weight10(observations: &[(GenusTwoIndex, BigRational)], strategy: Strategy) -> Result<ThetaFit> {
    if observations.len() < 2 {
        return Err(SiegelError::TooFewObservations(observations.len()));
    }
    let indices: Vec<GenusTwoIndex> = observations.iter().map(|(i, _)| *i).collect();
    let basis = basis_at(&indices, strategy)?;
    let ((e0, x0), (e1, x1)) = (&basis[0], &basis[1]);
    let (y0, y1) = (&observations[0].1, &observations[1].1);
    let det = e0 * x1 - e1 * x0;
    if det.is_zero() {
        return Err(SiegelError::Singular);
    }
    let a = (y0 * x1 - y1 * x0) / &det;
    let b = (e0 * y1 - e1 * y0) / &det;
    for ((idx, obs), (e, x)) in observations.iter().zip(&basis).skip(2) {
        let predicted = &a * e + &b * x;
        if predicted != *obs {
            return Err(SiegelError::Inconsistent {
                index: *idx,
                observed: Box::new(obs.clone()),
                predicted: Box::new(predicted),
            });
        }
    }
    Ok(ThetaFit { a, b })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NlQuantity {
    /// Half the coefficient at `(1,1,1)`.
    Cuspidal,
    /// Half the coefficient at `(1,0,1)`.
    Binodal,
    /// Absolute value of the coefficient at `(0,0,1)`.
    HodgeDisc,
    /// The constant coefficient.
    HodgeSq,
}

impl std::str::FromStr for NlQuantity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "cuspidal" => Ok(NlQuantity::Cuspidal),
            "binodal" => Ok(NlQuantity::Binodal),
            "hodge-disc" => Ok(NlQuantity::HodgeDisc),
            "hodge-sq" => Ok(NlQuantity::HodgeSq),
            other => Err(format!("unknown quantity `{other}` (expected cuspidal, binodal, hodge-disc or hodge-sq)")),
        }
    }
}

impl NlQuantity {
    pub fn index(self) -> GenusTwoIndex {
        match self {
            NlQuantity::Cuspidal => GenusTwoIndex::new(1, 1, 1),
            NlQuantity::Binodal => GenusTwoIndex::new(1, 0, 1),
            NlQuantity::HodgeDisc => GenusTwoIndex::new(0, 0, 1),
            NlQuantity::HodgeSq => GenusTwoIndex::new(0, 0, 0),
        }
    }
}

/// Coefficient of the fitted form at `idx`.
pub fn theta_coeff(fit: &ThetaFit, idx: GenusTwoIndex, strategy: Strategy) -> Result<BigRational> {
    let (e, x) = basis_at(&[idx], strategy)?.remove(0);
    Ok(&fit.a * e + &fit.b * x)
}

pub fn predict_nl(fit: &ThetaFit, which: NlQuantity, strategy: Strategy) -> Result<BigRational> {
    let c = theta_coeff(fit, which.index(), strategy)?;
    let half = BigRational::new(1.into(), 2.into());
    Ok(match which {
        NlQuantity::Cuspidal | NlQuantity::Binodal => c * half,
        NlQuantity::HodgeDisc => c.abs(),
        NlQuantity::HodgeSq => c,
    })
}

/// True iff the fitted cusp/binode NL vector is not proportional to
/// `reference = (a2, a11)`.
pub fn independence_check_against(fit: &ThetaFit, reference: (&BigInt, &BigInt), strategy: Strategy) -> Result<bool> {
    if fit.is_zero() {
        return Err(SiegelError::ZeroForm);
    }
    let cusp = theta_coeff(fit, NlQuantity::Cuspidal.index(), strategy)?;
    let bin = theta_coeff(fit, NlQuantity::Binodal.index(), strategy)?;
    let (ra, rb) = (BigRational::from_integer(reference.0.clone()), BigRational::from_integer(reference.1.clone()));
    Ok(cusp * rb != bin * ra)
}

/// Independence from the hyperelliptic family: degree 4 in the net of
/// anticanonical double curves.
pub fn independence_check(fit: &ThetaFit, strategy: Strategy) -> Result<bool> {
    let (a2, a11) = net_counts(&SurfaceChernData::ANTICANONICAL_DOUBLE, 4)?;
    independence_check_against(fit, (&a2, &a11), strategy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop_assert_eq, prop_assume, proptest};
    use proptest::strategy::Strategy as _;

    fn idx(k: i64, l: i64, m: i64) -> GenusTwoIndex {
        GenusTwoIndex::new(k, l, m)
    }

    fn r(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    const S: Strategy = Strategy::Sequential;

    #[test]
    fn reduction() {
        assert_eq!(idx(1, 2, 1).reduced(), Some(idx(0, 0, 1)));
        assert_eq!(idx(1, -2, 1).reduced(), Some(idx(0, 0, 1)));
        assert_eq!(idx(1, 0, 0).reduced(), Some(idx(0, 0, 1)));
        assert_eq!(idx(1, -1, 1).reduced(), Some(idx(1, 1, 1)));
        assert_eq!(idx(2, 1, 1).reduced(), Some(idx(1, 1, 2)));
        assert_eq!(idx(1, 3, 3).reduced(), Some(idx(1, 1, 1)));
        assert_eq!(idx(1, 3, 1).reduced(), None);
        assert_eq!(idx(2, 4, 2).reduced(), Some(idx(0, 0, 2)));
    }

    #[test]
    fn product_basics() {
        let t = Truncation::standard(2, 2);
        let x = GenusTwoSeries::one(t).add(&GenusTwoSeries::monomial(t, idx(1, 0, 0), r(1)));
        let y = GenusTwoSeries::one(t).add(&GenusTwoSeries::monomial(t, idx(0, 0, 1), r(1)));
        let p = series_mul(&x, &y, S);
        assert_eq!(p.len(), 4);
        for i in [idx(0, 0, 0), idx(1, 0, 0), idx(0, 0, 1), idx(1, 0, 1)] {
            assert_eq!(p.coeff(&i), r(1));
        }
        assert_eq!(series_mul(&x, &GenusTwoSeries::one(t), S), x);
        assert_eq!(series_mul(&x, &y, Strategy::Parallel), p);
    }

    #[test]
    fn binomials() {
        let t = Truncation::standard(6, 6);
        let u = idx(1, 0, 0);
        let sq = binomial_pow(u, 2, t).unwrap();
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff(&idx(1, 0, 0)), r(-2));
        assert_eq!(sq.coeff(&idx(2, 0, 0)), r(1));
        let geo = binomial_pow(u, -1, t).unwrap();
        assert!((0..=6).all(|j| geo.coeff(&idx(j, 0, 0)) == r(1)));
        let big = binomial_pow(u, -128, t).unwrap();
        assert_eq!(big.coeff(&idx(2, 0, 0)), r(8256));
        assert!(matches!(binomial_pow(idx(0, 0, 0), 3, t), Err(SiegelError::ConstantMonomial)));
    }

    #[test]
    fn chi10_leading_coefficients() {
        let x = chi10(&HalfIntegralTable::shipped(), 1, 2, S).unwrap();
        assert_eq!(x.coeff(&idx(1, 1, 1)), r(1));
        assert_eq!(x.coeff(&idx(1, -1, 1)), r(1));
        assert_eq!(x.coeff(&idx(1, 0, 1)), r(-2));
        assert_eq!(x.coeff(&idx(1, 1, 2)), r(-16));
        assert_eq!(x.coeff(&idx(1, 0, 2)), r(36));
    }

    #[test]
    fn chi10_first_jacobi_coefficient() {
        // qt^1 part is the weight-10 index-1 Jacobi cusp form: c(11) = 99, c(12) = -272
        let x = chi10(&HalfIntegralTable::shipped(), 1, 3, S).unwrap();
        assert_eq!(x.coeff(&idx(1, 1, 3)), r(99));
        assert_eq!(x.coeff(&idx(1, 0, 3)), r(-272));
        assert_eq!(x.coeff(&idx(1, 2, 3)), r(36));
    }

    #[test]
    fn chi10_is_a_maass_lift() {
        // a(2,l,2) = sum over d | (2,l,2) of d^9 c((16 - l^2) / d^2)
        let t = HalfIntegralTable::shipped();
        let x2 = chi10(&t, 2, 2, S).unwrap();
        let x1 = chi10(&t, 1, 4, S).unwrap();
        let c = |d: i64| -> BigRational {
            // the index-1 coefficient of discriminant d, read off at qt^1
            let l = d.rem_euclid(2);
            x1.coeff(&idx(1, l, (d + l * l) / 4))
        };
        assert_eq!(x2.coeff(&idx(2, 1, 2)), c(15));
        assert_eq!(x2.coeff(&idx(2, 0, 2)), c(16) + r(512) * c(4));
        assert_eq!(x2.coeff(&idx(2, 2, 2)), c(12) + r(512) * c(3));
        assert_eq!(x2.coeff(&idx(2, 3, 2)), c(7));
    }

    #[test]
    fn chi10_table_exhaustion() {
        let err = chi10(&HalfIntegralTable::shipped(), 3, 3, S).unwrap_err();
        assert!(matches!(err, SiegelError::TableExhausted(m) if m > 8));
        assert!(err.to_string().contains("coefficient table exhausted"));
    }

    #[test]
    fn chi10_strategies_agree() {
        let t = HalfIntegralTable::shipped();
        assert_eq!(chi10(&t, 2, 2, S).unwrap(), chi10(&t, 2, 2, Strategy::Parallel).unwrap());
    }

    fn assert_symmetric(s: &GenusTwoSeries) {
        let t = s.truncation();
        for (i, v) in s.iter() {
            assert!(i.disc() >= 0, "support violated at {i}");
            let mirrors = [idx(i.k, -i.l, i.m), idx(i.m, i.l, i.k), idx(i.m, -i.l, i.k)];
            for j in mirrors.iter().filter(|j| t.contains(j)) {
                assert_eq!(s.coeff(j), *v, "{i} vs {j}");
            }
        }
    }

    #[test]
    fn computed_forms_symmetric_and_supported() {
        let t = HalfIntegralTable::shipped();
        assert_symmetric(&chi10(&t, 2, 2, S).unwrap());
        assert_symmetric(&chi10(&t, 1, 4, S).unwrap());
        assert_symmetric(&chi10(&t, 2, 3, S).unwrap());
        assert_symmetric(&e4e6(1, 1, S).unwrap());
    }

    #[test]
    fn eisenstein_product() {
        let e = e4e6(1, 1, S).unwrap();
        assert_eq!(e.coeff(&idx(0, 0, 0)), r(1));
        assert_eq!(e.coeff(&idx(1, 0, 0)), r(-264));
        assert_eq!(e.coeff(&idx(0, 0, 1)), r(-264));
        assert_eq!(e.coeff(&idx(1, 1, 1)), r(57792));
        assert_eq!(e.coeff(&idx(1, 0, 1)), r(-45360));
        assert!(matches!(e4e6(1, 2, S), Err(SiegelError::BeyondSupport(_))));
    }

    #[test]
    fn tables() {
        let e4 = CoeffTable::e4();
        assert_eq!(e4.len(), 4);
        assert_eq!(e4.coeff(&idx(1, -1, 1)).unwrap(), r(13440));
        assert_eq!(e4.coeff(&idx(1, 0, 0)).unwrap(), r(240));
        assert_eq!(e4.coeff(&idx(1, 3, 1)).unwrap(), r(0));
        assert!(CoeffTable::parse("").unwrap().is_empty());
        let one = CoeffTable::parse("1 1 1 13440").unwrap();
        assert_eq!(CoeffTable::parse(&one.to_text()).unwrap(), one);
        assert_eq!(one.to_text(), "1 1 1 13440\n");
        assert!(matches!(CoeffTable::parse("1 1 1"), Err(SiegelError::Parse { line: 1, .. })));
        assert!(matches!(CoeffTable::parse("0 0 1 3\n1 0 0 4"), Err(SiegelError::Conflict(_))));
        let h = HalfIntegralTable::shipped();
        assert_eq!(h.support_max(), 8);
        assert_eq!(h.get(-5).unwrap(), BigInt::zero());
        assert_eq!(h.get(-1).unwrap(), BigInt::from(2));
        assert!(matches!(h.get(9), Err(SiegelError::TableExhausted(9))));
    }

    #[test]
    fn fits() {
        let fit = fit_weight10(&[(idx(1, 1, 1), r(1632)), (idx(1, 0, 1), r(66960))], S).unwrap();
        assert_eq!(fit, ThetaFit::from_ints(1, -56160));
        assert!(fit.is_integral());
        let zero = fit_weight10(&[(idx(0, 0, 0), r(0)), (idx(1, 1, 1), r(0))], S).unwrap();
        assert_eq!(zero, ThetaFit::from_ints(0, 0));
        let eis = fit_weight10(&[(idx(1, 1, 1), r(57792)), (idx(1, 0, 1), r(-45360))], S).unwrap();
        assert_eq!(eis, ThetaFit::from_ints(1, 0));
        // consistent and inconsistent third observations
        let obs = [(idx(1, 1, 1), r(1632)), (idx(1, 0, 1), r(66960)), (idx(0, 0, 1), r(-264))];
        assert!(fit_weight10(&obs, S).is_ok());
        let bad = [(idx(1, 1, 1), r(1632)), (idx(1, 0, 1), r(66960)), (idx(0, 0, 1), r(264))];
        assert!(matches!(fit_weight10(&bad, S), Err(SiegelError::Inconsistent { .. })));
        let sing = [(idx(0, 0, 1), r(1)), (idx(1, 0, 0), r(1))];
        assert!(matches!(fit_weight10(&sing, S), Err(SiegelError::Singular)));
        assert!(matches!(fit_weight10(&obs[..1], S), Err(SiegelError::TooFewObservations(1))));
    }

    #[test]
    fn predictions() {
        let fit = ThetaFit::from_ints(1, -56160);
        assert_eq!(predict_nl(&fit, NlQuantity::Cuspidal, S).unwrap(), r(816));
        assert_eq!(predict_nl(&fit, NlQuantity::Binodal, S).unwrap(), r(33480));
        assert_eq!(predict_nl(&fit, NlQuantity::HodgeDisc, S).unwrap(), r(264));
        assert_eq!(predict_nl(&fit, NlQuantity::HodgeSq, S).unwrap(), r(1));
    }

    #[test]
    fn independence() {
        assert!(independence_check(&ThetaFit::from_ints(1, -56160), S).unwrap());
        let dependent = ThetaFit::new(r(1), BigRational::new((-481646592).into(), 9384.into()));
        assert!(!independence_check(&dependent, S).unwrap());
        assert!(matches!(independence_check(&ThetaFit::from_ints(0, 0), S), Err(SiegelError::ZeroForm)));
    }

    fn small_series() -> impl proptest::strategy::Strategy<Value = GenusTwoSeries> {
        proptest::collection::vec(((0i64..=2, -3i64..=3, 0i64..=2), -20i64..20), 0..8).prop_map(|terms| {
            let mut s = GenusTwoSeries::zero(Truncation::standard(2, 2));
            for ((k, l, m), c) in terms {
                s.add_term(idx(k, l, m), r(c));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn mul_commutative(x in small_series(), y in small_series()) {
            prop_assert_eq!(series_mul(&x, &y, S), series_mul(&y, &x, S));
        }

        #[test]
        fn mul_associative(x in small_series(), y in small_series(), z in small_series()) {
            let left = series_mul(&series_mul(&x, &y, S), &z, S);
            let right = series_mul(&x, &series_mul(&y, &z, Strategy::Parallel), S);
            prop_assert_eq!(left, right);
        }

        #[test]
        fn binomial_inverse(c in -200i64..=200, k in 0i64..=2, l in -2i64..=2, m in 0i64..=2) {
            prop_assume!((k, l, m) != (0, 0, 0));
            let t = Truncation::standard(4, 4);
            let u = idx(k, l, m);
            let p = series_mul(&binomial_pow(u, c, t).unwrap(), &binomial_pow(u, -c, t).unwrap(), S);
            prop_assert_eq!(p, GenusTwoSeries::one(t));
        }

        #[test]
        fn reduction_is_class_invariant(k in 0i64..6, l in -8i64..8, m in 0i64..6, n in -3i64..3) {
            let i = idx(k, l, m);
            // x -> x + n y
            let j = idx(k, l + 2 * k * n, m + l * n + k * n * n);
            prop_assert_eq!(i.reduced(), j.reduced());
            prop_assert_eq!(i.reduced(), idx(m, l, k).reduced());
            prop_assert_eq!(i.reduced(), idx(k, -l, m).reduced());
        }
    }
}
