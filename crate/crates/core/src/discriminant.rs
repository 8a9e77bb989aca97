//! Discriminant groups `L^v / L` of nondegenerate even lattices with their
//! Q/2Z-valued quadratic forms.
//!
//! For a Gram matrix `G` with Smith form `U G V = D`, the class of a dual
//! vector with rational coordinates `c` (so `G c` is integral) has group
//! coordinates `U G c` reduced modulo the invariant factors, and the `i`-th
//! cyclic generator lifts to `V e_i / d_i`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::{divisibility, IntegralLattice, LatticeError, LatticeVector, Result};
use crate::matrix::IntMatrix;
use crate::snf::smith_normal_form;

/// Residue of `r` modulo 2Z, represented in `(-2, 0]`.
pub fn reduce_mod2(r: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    // floor(r/2) gives r - 2 floor(r/2) in [0, 2)
    let q = (r / &two).floor();
    let x = r - &two * q;
    if x.is_zero() {
        x
    } else {
        x - two
    }
}

/// Residue modulo Z in `[0, 1)`.
pub fn reduce_mod1(r: &BigRational) -> BigRational {
    r - r.floor()
}

/// An element of a discriminant group, as coordinates modulo the invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiscElement(pub Vec<BigInt>);

impl fmt::Display for DiscElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    gram: IntMatrix,
    factors: Vec<BigInt>,
    lifts: Vec<Vec<BigRational>>,
    /// Rows of the left Smith transform for the nontrivial factors.
    projection: IntMatrix,
}

pub fn discriminant_group(l: &IntegralLattice) -> Result<DiscriminantGroup> {
    let gram = l.gram().clone();
    let n = gram.rows();
    if gram.det().is_zero() {
        return Err(LatticeError::Degenerate);
    }
    let s = smith_normal_form(&gram);
    let mut factors = Vec::new();
    let mut lifts = Vec::new();
    let mut proj_rows = Vec::new();
    for i in 0..n {
        let d = s.d.get(i, i).clone();
        if d.is_one() {
            continue;
        }
        let lift = s.v.col(i).into_iter().map(|x| BigRational::new(x, d.clone())).collect();
        lifts.push(lift);
        proj_rows.push(s.u.row(i).to_vec());
        factors.push(d);
    }
    let projection = IntMatrix::from_big_rows(proj_rows, n).expect("uniform rows");
    Ok(DiscriminantGroup { gram, factors, lifts, projection })
}

impl DiscriminantGroup {
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Exponent of the group (largest invariant factor).
    pub fn exponent(&self) -> BigInt {
        self.factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn zero(&self) -> DiscElement {
        DiscElement(vec![BigInt::zero(); self.factors.len()])
    }

    /// The `i`-th cyclic generator.
    pub fn generator(&self, i: usize) -> DiscElement {
        let mut e = self.zero();
        e.0[i] = BigInt::one();
        e
    }

    pub fn generator_lift(&self, i: usize) -> &[BigRational] {
        &self.lifts[i]
    }

    fn normalize(&self, coords: Vec<BigInt>) -> DiscElement {
        DiscElement(coords.into_iter().zip(&self.factors).map(|(a, d)| a.mod_floor(d)).collect())
    }

    pub fn add(&self, x: &DiscElement, y: &DiscElement) -> DiscElement {
        self.normalize(x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self, x: &DiscElement) -> DiscElement {
        self.normalize(x.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, x: &DiscElement, k: &BigInt) -> DiscElement {
        self.normalize(x.0.iter().map(|a| a * k).collect())
    }

    /// Order of an element.
    pub fn element_order(&self, x: &DiscElement) -> BigInt {
        x.0.iter().zip(&self.factors).fold(BigInt::one(), |acc, (a, d)| acc.lcm(&(d / a.gcd(d))))
    }

    /// All elements in lexicographic order of their coordinates.
    pub fn elements(&self) -> Vec<DiscElement> {
        let mut out = vec![self.zero()];
        for (i, d) in self.factors.iter().enumerate() {
            let mut next = Vec::new();
            for e in &out {
                let mut k = BigInt::zero();
                while &k < d {
                    let mut c = e.clone();
                    c.0[i] = k.clone();
                    next.push(c);
                    k += 1;
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// A dual-lattice representative of `x`, in lattice-basis coordinates.
    pub fn lift(&self, x: &DiscElement) -> Vec<BigRational> {
        let n = self.gram.rows();
        let mut c = vec![BigRational::zero(); n];
        for (a, lift) in x.0.iter().zip(&self.lifts) {
            if a.is_zero() {
                continue;
            }
            let a = BigRational::from_integer(a.clone());
            for (ci, li) in c.iter_mut().zip(lift) {
                *ci += &a * li;
            }
        }
        c
    }

    fn rational_pair(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        self.gram
            .mul_rat_vec(x)
            .iter()
            .zip(y)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Discriminant quadratic form, reduced into `(-2, 0]`.
    pub fn q(&self, x: &DiscElement) -> BigRational {
        let c = self.lift(x);
        reduce_mod2(&self.rational_pair(&c, &c))
    }

    /// Induced Q/Z-valued bilinear form, reduced into `[0, 1)`.
    pub fn bilinear(&self, x: &DiscElement, y: &DiscElement) -> BigRational {
        reduce_mod1(&self.rational_pair(&self.lift(x), &self.lift(y)))
    }

    /// Class of a dual vector given by rational lattice coordinates.
    pub fn class_of(&self, c: &[BigRational]) -> Result<DiscElement> {
        let gc = self.gram.mul_rat_vec(c);
        let mut ints = Vec::with_capacity(gc.len());
        for x in gc {
            if !x.is_integer() {
                return Err(LatticeError::NotInDual);
            }
            ints.push(x.to_integer());
        }
        Ok(self.normalize(self.projection.mul_vec(&ints)))
    }

    /// Class of `v / k` for an integral vector `v`.
    pub fn class_of_fraction(&self, v: &LatticeVector, k: &BigInt) -> Result<DiscElement> {
        let c: Vec<BigRational> = v.0.iter().map(|x| BigRational::new(x.clone(), k.clone())).collect();
        self.class_of(&c)
    }
}

/// Value of the discriminant quadratic form on `x`, in `(-2, 0]`.
pub fn disc_quadratic(group: &DiscriminantGroup, x: &DiscElement) -> BigRational {
    group.q(x)
}

/// Class of `v / div(v)` in the discriminant group; `v` must be primitive.
pub fn dual_class(l: &IntegralLattice, group: &DiscriminantGroup, v: &LatticeVector) -> Result<DiscElement> {
    l.check_len(v)?;
    if v.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    if !v.content().abs().is_one() {
        return Err(LatticeError::NotPrimitive);
    }
    let d = divisibility(l, v)?;
    group.class_of_fraction(v, &d)
}
