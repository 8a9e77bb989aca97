//! Integral lattices given by Gram matrices, the standard K3-related
//! lattices, sublattices with embeddings, and orthogonal complements.
//!
//! All root lattices are negative definite: `E8neg` is the negated Cartan
//! matrix of E8 on the basis `t1..t8`, where `t1..t7` form a chain and `t8`
//! hangs off `t5`:
//!
//! ```text
//!        t1  t2  t3  t4  t5  t6  t7  t8
//!  t1  [ -2   1   0   0   0   0   0   0 ]
//!  t2  [  1  -2   1   0   0   0   0   0 ]
//!  t3  [  0   1  -2   1   0   0   0   0 ]
//!  t4  [  0   0   1  -2   1   0   0   0 ]
//!  t5  [  0   0   0   1  -2   1   0   1 ]
//!  t6  [  0   0   0   0   1  -2   1   0 ]
//!  t7  [  0   0   0   0   0   1  -2   0 ]
//!  t8  [  0   0   0   0   1   0   0  -2 ]
//! ```
//!
//! so `t1.t2 = 1` and `t1.t3 = 0`. The K3 lattice is `U^3 + E8(-1)^2` on
//! `e1 f1 e2 f2 e3 f3 s1..s8 t1..t8`, with the polarization `L = e1 + (g-1) f1`
//! and `t1` taken in the second E8 copy.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::matrix::{gcd_all, IntMatrix};
use crate::snf::smith_normal_form;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Gram matrix is not square")]
    NotSquare,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("odd diagonal entry {value} at position {index}; lattice is not even")]
    OddDiagonal { index: usize, value: BigInt },
    #[error("expected {expected} basis labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("unknown standard lattice `{0}`")]
    UnknownName(String),
    #[error("lattice `{0}` needs a genus g")]
    MissingGenus(String),
    #[error("genus must be at least {min}, got {got}")]
    InvalidGenus { min: u64, got: u64 },
    #[error("rescaling factor must be nonzero")]
    ZeroScale,
    #[error("lattice is degenerate (determinant 0)")]
    Degenerate,
    #[error("vector has length {got}, lattice rank is {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("zero vector")]
    ZeroVector,
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("vector does not lie in the sublattice")]
    NotInSublattice,
    #[error("dual vector does not lie in the dual lattice")]
    NotInDual,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, LatticeError>;

/// Coordinates of a lattice vector in the lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(pub Vec<BigInt>);

impl LatticeVector {
    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); rank])
    }

    pub fn from_i64(xs: &[i64]) -> Self {
        LatticeVector(xs.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// gcd of the coordinates.
    pub fn content(&self) -> BigInt {
        gcd_all(&self.0)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.0.iter().map(|x| BigRational::from_integer(x.clone())).collect()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A lattice given by a symmetric integer Gram matrix on a labeled basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralLattice {
    gram: IntMatrix,
    labels: Vec<String>,
}

impl IntegralLattice {
    /// Creates an even lattice. Odd diagonal entries are rejected.
    pub fn new(gram: IntMatrix, labels: Vec<String>) -> Result<Self> {
        let l = Self::new_odd(gram, labels)?;
        for i in 0..l.rank() {
            let d = l.gram.get(i, i);
            if d.is_odd() {
                return Err(LatticeError::OddDiagonal { index: i, value: d.clone() });
            }
        }
        Ok(l)
    }

    /// Creates a lattice without the evenness check.
    pub fn new_odd(gram: IntMatrix, labels: Vec<String>) -> Result<Self> {
        if !gram.is_square() {
            return Err(LatticeError::NotSquare);
        }
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        if labels.len() != gram.rows() {
            return Err(LatticeError::LabelCount { expected: gram.rows(), got: labels.len() });
        }
        Ok(IntegralLattice { gram, labels })
    }

    /// Rank-0 lattice.
    pub fn empty() -> Self {
        IntegralLattice { gram: IntMatrix::zeros(0, 0), labels: Vec::new() }
    }

    /// Lattice whose labels are `prefix1..prefixN`.
    pub fn with_prefix(gram: IntMatrix, prefix: &str) -> Result<Self> {
        let labels = (1..=gram.rows()).map(|i| format!("{prefix}{i}")).collect();
        Self::new(gram, labels)
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram.get(i, i).is_even())
    }

    pub fn det(&self) -> BigInt {
        self.gram.det()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| LatticeError::UnknownLabel(label.to_string()))
    }

    /// Vector from `(coefficient, label)` pairs, e.g. `[(1, "e1"), (-5, "f1")]`.
    pub fn vector(&self, terms: &[(i64, &str)]) -> Result<LatticeVector> {
        let mut v = LatticeVector::zero(self.rank());
        for &(c, name) in terms {
            let i = self.label_index(name)?;
            v.0[i] += c;
        }
        Ok(v)
    }

    pub fn check_len(&self, v: &LatticeVector) -> Result<()> {
        if v.len() != self.rank() {
            return Err(LatticeError::WrongLength { expected: self.rank(), got: v.len() });
        }
        Ok(())
    }

    /// The Gram matrix applied to `v`: pairings of `v` with each basis vector.
    pub fn pairings(&self, v: &LatticeVector) -> Vec<BigInt> {
        self.gram.mul_vec(&v.0)
    }

    pub fn pair(&self, v: &LatticeVector, w: &LatticeVector) -> BigInt {
        self.pairings(v).iter().zip(&w.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self, v: &LatticeVector) -> BigInt {
        self.pair(v, v)
    }

    pub fn pair_rational(&self, v: &[BigRational], w: &[BigRational]) -> BigRational {
        self.gram
            .mul_rat_vec(v)
            .iter()
            .zip(w)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Serializes to the text format: `rank N`, N rows of N integers, one line of labels.
    pub fn to_text(&self) -> String {
        let mut s = format!("rank {}\n", self.rank());
        for i in 0..self.rank() {
            let row: Vec<String> = self.gram.row(i).iter().map(|x| x.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s.push_str(&self.labels.join(" "));
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let parse_err = |line: usize, msg: &str| LatticeError::Parse { line, msg: msg.to_string() };

        let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "missing `rank N` header"))?;
        let n: usize = header
            .strip_prefix("rank")
            .and_then(|r| r.trim().parse().ok())
            .ok_or_else(|| parse_err(ln, "expected `rank N`"))?;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, line) = lines.next().ok_or_else(|| parse_err(ln, "missing Gram row"))?;
            let row: Vec<BigInt> = line
                .split_whitespace()
                .map(|t| t.parse::<BigInt>().map_err(|_| parse_err(ln, &format!("bad integer `{t}`"))))
                .collect::<Result<_>>()?;
            if row.len() != n {
                return Err(parse_err(ln, &format!("expected {n} entries, got {}", row.len())));
            }
            rows.push(row);
        }
        let labels: Vec<String> = match lines.next() {
            Some((_, l)) => l.split_whitespace().map(str::to_string).collect(),
            None if n == 0 => Vec::new(),
            None => return Err(parse_err(ln + n, "missing label line")),
        };
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "trailing content"));
        }
        let gram = IntMatrix::from_big_rows(rows, n).expect("row lengths checked");
        Self::new_odd(gram, labels)
    }
}

pub fn direct_sum(a: &IntegralLattice, b: &IntegralLattice) -> IntegralLattice {
    let gram = IntMatrix::block_diag(&a.gram, &b.gram);
    let labels = a.labels.iter().chain(&b.labels).cloned().collect();
    IntegralLattice { gram, labels }
}

pub fn rescale(a: &IntegralLattice, t: i64) -> Result<IntegralLattice> {
    if t == 0 {
        return Err(LatticeError::ZeroScale);
    }
    Ok(IntegralLattice { gram: a.gram.scale(&BigInt::from(t)), labels: a.labels.clone() })
}

/// The positive definite E8 Cartan matrix in the ordering documented above.
pub fn e8_cartan() -> IntMatrix {
    let mut m = IntMatrix::zeros(8, 8);
    for i in 0..8 {
        m.set(i, i, BigInt::from(2));
    }
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    for (i, j) in edges {
        m.set(i, j, BigInt::from(-1));
        m.set(j, i, BigInt::from(-1));
    }
    m
}

/// Names accepted by [`build_standard`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardLattice {
    U,
    E8Neg,
    K3,
    LambdaG,
    LambdaA1,
    E7Neg,
    UPerp,
}

impl StandardLattice {
    pub fn needs_genus(self) -> bool {
        matches!(self, StandardLattice::LambdaG | StandardLattice::LambdaA1)
    }

    pub fn name(self) -> &'static str {
        match self {
            StandardLattice::U => "U",
            StandardLattice::E8Neg => "E8neg",
            StandardLattice::K3 => "K3",
            StandardLattice::LambdaG => "LambdaG",
            StandardLattice::LambdaA1 => "LambdaA1",
            StandardLattice::E7Neg => "E7neg",
            StandardLattice::UPerp => "Uperp",
        }
    }
}

impl FromStr for StandardLattice {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "U" => StandardLattice::U,
            "E8neg" => StandardLattice::E8Neg,
            "K3" => StandardLattice::K3,
            "LambdaG" => StandardLattice::LambdaG,
            "LambdaA1" => StandardLattice::LambdaA1,
            "E7neg" => StandardLattice::E7Neg,
            "Uperp" => StandardLattice::UPerp,
            other => return Err(LatticeError::UnknownName(other.to_string())),
        })
    }
}

fn hyperbolic(e: &str, f: &str) -> IntegralLattice {
    IntegralLattice { gram: IntMatrix::from_rows(&[[0, 1], [1, 0]]), labels: vec![e.into(), f.into()] }
}

fn e8_neg(prefix: &str) -> IntegralLattice {
    IntegralLattice::with_prefix(e8_cartan().scale(&BigInt::from(-1)), prefix).expect("E8 is even")
}

/// `U^3 + E8(-1)^2` on `e1 f1 e2 f2 e3 f3 s1..s8 t1..t8`.
pub fn k3_lattice() -> IntegralLattice {
    let mut l = hyperbolic("e1", "f1");
    l = direct_sum(&l, &hyperbolic("e2", "f2"));
    l = direct_sum(&l, &hyperbolic("e3", "f3"));
    l = direct_sum(&l, &e8_neg("s"));
    direct_sum(&l, &e8_neg("t"))
}

fn check_genus(g: u64) -> Result<()> {
    if g < 2 {
        return Err(LatticeError::InvalidGenus { min: 2, got: g });
    }
    Ok(())
}

/// A sublattice of an ambient lattice: rows of `basis` are ambient coordinates.
#[derive(Clone, Debug)]
pub struct Sublattice {
    pub ambient: IntegralLattice,
    pub basis: IntMatrix,
    pub lattice: IntegralLattice,
}

impl Sublattice {
    fn from_basis(ambient: &IntegralLattice, basis: IntMatrix, labels: Vec<String>) -> Self {
        let gram = basis.mul(ambient.gram()).mul(&basis.transpose());
        Sublattice {
            ambient: ambient.clone(),
            basis,
            lattice: IntegralLattice::new_odd(gram, labels).expect("B G B^T is symmetric"),
        }
    }

    /// Ambient coordinates of a sublattice vector.
    pub fn embed(&self, v: &LatticeVector) -> LatticeVector {
        LatticeVector(self.basis.transpose().mul_vec(&v.0))
    }

    /// Sublattice coordinates of an ambient vector, if it lies in the sublattice.
    pub fn coords_of(&self, v: &LatticeVector) -> Result<LatticeVector> {
        self.ambient.check_len(v)?;
        // Solve B^T c = v via the Smith form of B^T.
        let bt = self.basis.transpose();
        let s = smith_normal_form(&bt);
        let uv = s.u.mul_vec(&v.0);
        let r = self.basis.rows();
        let mut y = Vec::with_capacity(r);
        for (i, x) in uv.iter().enumerate() {
            let di = if i < r { s.d.get(i, i).clone() } else { BigInt::zero() };
            if di.is_zero() {
                if !x.is_zero() {
                    return Err(LatticeError::NotInSublattice);
                }
                if i < r {
                    y.push(BigInt::zero());
                }
            } else {
                let (q, rem) = x.div_rem(&di);
                if !rem.is_zero() {
                    return Err(LatticeError::NotInSublattice);
                }
                y.push(q);
            }
        }
        if s.rank() < r {
            return Err(LatticeError::Dependent);
        }
        Ok(LatticeVector(s.v.mul_vec(&y)))
    }

    /// True when the sublattice is saturated in the ambient lattice.
    pub fn is_primitive(&self) -> bool {
        smith_normal_form(&self.basis).diagonal().iter().all(One::is_one)
    }
}

/// `<e1-(g-1)f1> + U^2 + E8(-1)^2` inside the K3 lattice, the orthogonal
/// complement of `L = e1 + (g-1) f1`.
pub fn lambda_g(g: u64) -> Result<Sublattice> {
    check_genus(g)?;
    let k3 = k3_lattice();
    let gm1 = g as i64 - 1;
    let mut rows = vec![k3.vector(&[(1, "e1"), (-gm1, "f1")])?];
    let mut labels = vec!["l".to_string()];
    for name in k3.labels()[2..].iter() {
        rows.push(k3.vector(&[(1, name.as_str())])?);
        labels.push(name.clone());
    }
    Ok(Sublattice::from_basis(&k3, basis_matrix(&rows, k3.rank()), labels))
}

/// Orthogonal complement of `L = e1 + (g-1) f1` and `t1` inside the K3 lattice:
/// `<e1-(g-1)f1> + U^2 + E8(-1) + W7(-1)` where `W7 = t1^perp` has basis
/// `t1+2t2, t3, ..., t8`.
pub fn lambda_a1(g: u64) -> Result<Sublattice> {
    check_genus(g)?;
    let k3 = k3_lattice();
    let gm1 = g as i64 - 1;
    let mut rows = vec![k3.vector(&[(1, "e1"), (-gm1, "f1")])?];
    let mut labels = vec!["l".to_string()];
    for name in ["e2", "f2", "e3", "f3", "s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8"] {
        rows.push(k3.vector(&[(1, name)])?);
        labels.push(name.to_string());
    }
    rows.push(k3.vector(&[(1, "t1"), (2, "t2")])?);
    labels.push("t1+2t2".to_string());
    for i in 3..=8 {
        let name = format!("t{i}");
        rows.push(k3.vector(&[(1, name.as_str())])?);
        labels.push(name);
    }
    Ok(Sublattice::from_basis(&k3, basis_matrix(&rows, k3.rank()), labels))
}

/// `W7(-1) = t1^perp` inside `E8(-1)` on the basis `t1+2t2, t3, ..., t8`.
pub fn e7_neg() -> Sublattice {
    let e8 = e8_neg("t");
    let mut rows = vec![e8.vector(&[(1, "t1"), (2, "t2")]).expect("labels exist")];
    let mut labels = vec!["t1+2t2".to_string()];
    for i in 3..=8 {
        let name = format!("t{i}");
        rows.push(e8.vector(&[(1, name.as_str())]).expect("labels exist"));
        labels.push(name);
    }
    Sublattice::from_basis(&e8, basis_matrix(&rows, 8), labels)
}

fn basis_matrix(rows: &[LatticeVector], n: usize) -> IntMatrix {
    IntMatrix::from_big_rows(rows.iter().map(|r| r.0.clone()).collect(), n).expect("uniform rank")
}

pub fn build_standard(name: StandardLattice, g: Option<u64>) -> Result<IntegralLattice> {
    let genus = || g.ok_or_else(|| LatticeError::MissingGenus(name.name().to_string()));
    Ok(match name {
        StandardLattice::U => hyperbolic("e", "f"),
        StandardLattice::E8Neg => e8_neg("t"),
        StandardLattice::K3 => k3_lattice(),
        StandardLattice::LambdaG => lambda_g(genus()?)?.lattice,
        StandardLattice::LambdaA1 => lambda_a1(genus()?)?.lattice,
        StandardLattice::E7Neg => e7_neg().lattice,
        StandardLattice::UPerp => {
            let mut l = hyperbolic("e2", "f2");
            l = direct_sum(&l, &hyperbolic("e3", "f3"));
            l = direct_sum(&l, &e8_neg("s"));
            direct_sum(&l, &e8_neg("t"))
        }
    })
}

/// gcd of the pairings of `v` with all basis vectors.
pub fn divisibility(l: &IntegralLattice, v: &LatticeVector) -> Result<BigInt> {
    l.check_len(v)?;
    if v.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    let d = gcd_all(&l.pairings(v));
    if d.is_zero() {
        // only possible for a degenerate lattice
        return Err(LatticeError::Degenerate);
    }
    Ok(d)
}

/// Saturated orthogonal complement of `vs` in `l`, with its embedding.
pub fn orthogonal_complement(l: &IntegralLattice, vs: &[LatticeVector]) -> Result<Sublattice> {
    for v in vs {
        l.check_len(v)?;
    }
    let n = l.rank();
    let rows: Vec<Vec<BigInt>> = vs.iter().map(|v| l.pairings(v)).collect();
    let a = IntMatrix::from_big_rows(rows, n).expect("uniform rank");
    let s = smith_normal_form(&a);
    let r = s.rank();
    // independence of vs: the vectors themselves must have full rank
    let coords = IntMatrix::from_big_rows(vs.iter().map(|v| v.0.clone()).collect(), n).expect("uniform rank");
    if smith_normal_form(&coords).rank() < vs.len() {
        return Err(LatticeError::Dependent);
    }
    // kernel of A: columns r.. of V
    let kernel: Vec<LatticeVector> = (r..n).map(|j| LatticeVector(s.v.col(j))).collect();
    let labels = (1..=kernel.len()).map(|i| format!("b{i}")).collect();
    Ok(Sublattice::from_basis(l, basis_matrix(&kernel, n), labels))
}

/// Converts small big-integers to i64 for display helpers.
pub fn to_i64_vec(v: &LatticeVector) -> Option<Vec<i64>> {
    v.0.iter().map(ToPrimitive::to_i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn u_gram() {
        let u = build_standard(StandardLattice::U, None).unwrap();
        assert_eq!(u.gram(), &IntMatrix::from_rows(&[[0, 1], [1, 0]]));
    }

    #[test]
    fn k3_rank_and_det() {
        let k3 = build_standard(StandardLattice::K3, None).unwrap();
        assert_eq!(k3.rank(), 22);
        assert_eq!(k3.det(), big(-1));
        assert!(k3.is_even());
    }

    #[test]
    fn e8_conventions() {
        let e8 = build_standard(StandardLattice::E8Neg, None).unwrap();
        assert_eq!(e8.det(), big(1));
        let t1 = e8.vector(&[(1, "t1")]).unwrap();
        let t2 = e8.vector(&[(1, "t2")]).unwrap();
        let t3 = e8.vector(&[(1, "t3")]).unwrap();
        assert_eq!(e8.norm(&t1), big(-2));
        assert_eq!(e8.pair(&t1, &t2), big(1));
        assert_eq!(e8.pair(&t1, &t3), big(0));
    }

    #[test]
    fn lambda_lattices() {
        let lg = build_standard(StandardLattice::LambdaG, Some(6)).unwrap();
        assert_eq!(lg.rank(), 21);
        assert_eq!(lg.det().abs(), big(10));
        let la = build_standard(StandardLattice::LambdaA1, Some(6)).unwrap();
        assert_eq!(la.rank(), 20);
        assert_eq!(la.det().abs(), big(20));
        assert!(matches!(
            build_standard(StandardLattice::LambdaG, None),
            Err(LatticeError::MissingGenus(_))
        ));
        assert!(matches!(lambda_g(1), Err(LatticeError::InvalidGenus { .. })));
    }

    #[test]
    fn e7_and_uperp() {
        let e7 = build_standard(StandardLattice::E7Neg, None).unwrap();
        assert_eq!(e7.rank(), 7);
        assert_eq!(e7.det().abs(), big(2));
        let up = build_standard(StandardLattice::UPerp, None).unwrap();
        assert_eq!(up.rank(), 20);
        assert!(up.is_unimodular());
    }

    #[test]
    fn unknown_name() {
        assert!(matches!("E9".parse::<StandardLattice>(), Err(LatticeError::UnknownName(_))));
    }

    #[test]
    fn direct_sums() {
        let u = build_standard(StandardLattice::U, None).unwrap();
        let uu = direct_sum(&u, &u);
        assert_eq!(uu.rank(), 4);
        assert_eq!(uu.det(), big(1));
        assert_eq!(direct_sum(&u, &IntegralLattice::empty()), u);
        let e8 = build_standard(StandardLattice::E8Neg, None).unwrap();
        let ue = direct_sum(&u, &e8);
        assert_eq!(ue.rank(), 10);
        assert_eq!(ue.det(), big(-1));
    }

    #[test]
    fn rescaling() {
        let u = build_standard(StandardLattice::U, None).unwrap();
        assert_eq!(rescale(&u, 1).unwrap(), u);
        assert_eq!(rescale(&u, 2).unwrap().det(), big(-4));
        let e8 = IntegralLattice::with_prefix(e8_cartan(), "t").unwrap();
        assert_eq!(rescale(&e8, -1).unwrap(), build_standard(StandardLattice::E8Neg, None).unwrap());
        assert_eq!(rescale(&u, 0), Err(LatticeError::ZeroScale));
    }

    #[test]
    fn constructor_validation() {
        let odd = IntMatrix::from_rows(&[[1, 0], [0, 2]]);
        assert!(matches!(
            IntegralLattice::new(odd.clone(), vec!["a".into(), "b".into()]),
            Err(LatticeError::OddDiagonal { .. })
        ));
        assert!(IntegralLattice::new_odd(odd, vec!["a".into(), "b".into()]).is_ok());
        let asym = IntMatrix::from_rows(&[[2, 1], [0, 2]]);
        assert_eq!(IntegralLattice::new(asym, vec!["a".into(), "b".into()]), Err(LatticeError::NotSymmetric));
        let g = IntMatrix::from_rows(&[[2, 1], [1, 2]]);
        assert!(matches!(IntegralLattice::new(g, vec!["a".into()]), Err(LatticeError::LabelCount { .. })));
    }

    #[test]
    fn divisibility_cases() {
        let u = build_standard(StandardLattice::U, None).unwrap();
        assert_eq!(divisibility(&u, &LatticeVector::from_i64(&[1, 0])).unwrap(), big(1));
        assert_eq!(divisibility(&u, &LatticeVector::from_i64(&[0, 0])), Err(LatticeError::ZeroVector));
        let e8 = build_standard(StandardLattice::E8Neg, None).unwrap();
        let root = e8.vector(&[(1, "t4"), (1, "t5"), (1, "t8")]).unwrap();
        assert_eq!(e8.norm(&root), big(-2));
        assert_eq!(divisibility(&e8, &root).unwrap(), big(1));
    }

    #[test]
    fn complement_of_polarization_matches_lambda_g() {
        for g in [2u64, 5, 6, 11] {
            let k3 = k3_lattice();
            let l = k3.vector(&[(1, "e1"), (g as i64 - 1, "f1")]).unwrap();
            let c = orthogonal_complement(&k3, &[l]).unwrap();
            assert_eq!(c.lattice.rank(), 21);
            assert_eq!(c.lattice.det(), lambda_g(g).unwrap().lattice.det());
            assert!(c.is_primitive());
        }
    }

    #[test]
    fn complement_of_root_in_e8() {
        let e8 = build_standard(StandardLattice::E8Neg, None).unwrap();
        let t1 = e8.vector(&[(1, "t1")]).unwrap();
        let c = orthogonal_complement(&e8, &[t1]).unwrap();
        assert_eq!(c.lattice.rank(), 7);
        assert_eq!(c.lattice.det().abs(), big(2));
    }

    #[test]
    fn complement_rejects_dependent() {
        let e8 = build_standard(StandardLattice::E8Neg, None).unwrap();
        let t1 = e8.vector(&[(1, "t1")]).unwrap();
        let t1x2 = e8.vector(&[(2, "t1")]).unwrap();
        assert!(matches!(orthogonal_complement(&e8, &[t1, t1x2]), Err(LatticeError::Dependent)));
    }

    #[test]
    fn coords_round_trip() {
        let la = lambda_a1(7).unwrap();
        let k3 = &la.ambient;
        let w = k3.vector(&[(1, "e1"), (-6, "f1"), (1, "t1"), (2, "t2"), (2, "e2"), (4, "f2")]).unwrap();
        let c = la.coords_of(&w).unwrap();
        assert_eq!(la.embed(&c), w);
        assert_eq!(la.lattice.norm(&c), k3.norm(&w));
        let t1 = k3.vector(&[(1, "t1")]).unwrap();
        assert_eq!(la.coords_of(&t1), Err(LatticeError::NotInSublattice));
    }

    #[test]
    fn text_format_round_trip() {
        let e7 = build_standard(StandardLattice::E7Neg, None).unwrap();
        let text = e7.to_text();
        assert!(text.starts_with("rank 7\n"));
        assert_eq!(IntegralLattice::from_text(&text).unwrap(), e7);
        assert!(matches!(
            IntegralLattice::from_text("rank 2\n0 1\n1\ne f\n"),
            Err(LatticeError::Parse { line: 3, .. })
        ));
    }
}
