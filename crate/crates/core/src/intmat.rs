//! Exact integer arithmetic on 2×2 (and 4×4) matrices.
//!
//! Everything here is `i64` with checked operations. Products that would
//! overflow either return [`Error::Overflow`] (the `checked_*` methods) or
//! panic (the operator impls); nothing wraps.

use std::fmt;
use std::ops::{Mul, Neg};

use nalgebra::Matrix2;

use crate::error::{Error, Result};

/// Integer 2-vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Vec2Z {
    pub x: i64,
    pub y: i64,
}

impl Vec2Z {
    pub const ZERO: Vec2Z = Vec2Z { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn checked_add(self, rhs: Vec2Z) -> Result<Vec2Z> {
        Ok(Vec2Z {
            x: self
                .x
                .checked_add(rhs.x)
                .ok_or(Error::Overflow("vector add"))?,
            y: self
                .y
                .checked_add(rhs.y)
                .ok_or(Error::Overflow("vector add"))?,
        })
    }

    pub fn checked_scale(self, s: i64) -> Result<Vec2Z> {
        Ok(Vec2Z {
            x: self
                .x
                .checked_mul(s)
                .ok_or(Error::Overflow("vector scale"))?,
            y: self
                .y
                .checked_mul(s)
                .ok_or(Error::Overflow("vector scale"))?,
        })
    }

    /// The scalar `x₁y₂ − y₁x₂`.
    pub fn wedge(self, other: Vec2Z) -> Result<i64> {
        let p = self
            .x
            .checked_mul(other.y)
            .ok_or(Error::Overflow("wedge"))?;
        let q = self
            .y
            .checked_mul(other.x)
            .ok_or(Error::Overflow("wedge"))?;
        p.checked_sub(q).ok_or(Error::Overflow("wedge"))
    }
}

impl std::ops::Add for Vec2Z {
    type Output = Vec2Z;
    fn add(self, rhs: Vec2Z) -> Vec2Z {
        self.checked_add(rhs)
            .expect("integer overflow in Vec2Z addition")
    }
}

impl Neg for Vec2Z {
    type Output = Vec2Z;
    fn neg(self) -> Vec2Z {
        self.checked_scale(-1)
            .expect("integer overflow in Vec2Z negation")
    }
}

impl fmt::Display for Vec2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Integer 2×2 matrix `[[a, b], [c, d]]`, row major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2Z {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2Z {
    pub const IDENTITY: Mat2Z = Mat2Z::new(1, 0, 0, 1);
    pub const NEG_IDENTITY: Mat2Z = Mat2Z::new(-1, 0, 0, -1);

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self { a, b, c, d }
    }

    /// Builds a matrix from its columns.
    pub const fn from_columns(c1: Vec2Z, c2: Vec2Z) -> Self {
        Self::new(c1.x, c2.x, c1.y, c2.y)
    }

    pub fn column(&self, j: usize) -> Vec2Z {
        match j {
            0 => Vec2Z::new(self.a, self.c),
            1 => Vec2Z::new(self.b, self.d),
            _ => panic!("column index {j} out of range for a 2x2 matrix"),
        }
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> Result<i64> {
        let p = self
            .a
            .checked_mul(self.d)
            .ok_or(Error::Overflow("determinant"))?;
        let q = self
            .b
            .checked_mul(self.c)
            .ok_or(Error::Overflow("determinant"))?;
        p.checked_sub(q).ok_or(Error::Overflow("determinant"))
    }

    pub fn trace(&self) -> Result<i64> {
        self.a.checked_add(self.d).ok_or(Error::Overflow("trace"))
    }

    /// `|det| = 1`, i.e. membership in GL₂(ℤ).
    pub fn is_unimodular(&self) -> bool {
        matches!(self.det(), Ok(1) | Ok(-1))
    }

    /// `det = 1`, i.e. membership in SL₂(ℤ).
    pub fn is_special(&self) -> bool {
        self.det() == Ok(1)
    }

    pub fn transpose(&self) -> Mat2Z {
        Mat2Z::new(self.a, self.c, self.b, self.d)
    }

    pub fn checked_mul(&self, rhs: &Mat2Z) -> Result<Mat2Z> {
        let dot = |x1: i64, x2: i64, y1: i64, y2: i64| -> Result<i64> {
            let p = x1
                .checked_mul(y1)
                .ok_or(Error::Overflow("matrix product"))?;
            let q = x2
                .checked_mul(y2)
                .ok_or(Error::Overflow("matrix product"))?;
            p.checked_add(q).ok_or(Error::Overflow("matrix product"))
        };
        Ok(Mat2Z::new(
            dot(self.a, self.b, rhs.a, rhs.c)?,
            dot(self.a, self.b, rhs.b, rhs.d)?,
            dot(self.c, self.d, rhs.a, rhs.c)?,
            dot(self.c, self.d, rhs.b, rhs.d)?,
        ))
    }

    pub fn checked_apply(&self, v: Vec2Z) -> Result<Vec2Z> {
        let col = self.checked_mul(&Mat2Z::new(v.x, 0, v.y, 0))?;
        Ok(Vec2Z::new(col.a, col.c))
    }

    pub fn checked_add(&self, rhs: &Mat2Z) -> Result<Mat2Z> {
        let add = |x: i64, y: i64| x.checked_add(y).ok_or(Error::Overflow("matrix sum"));
        Ok(Mat2Z::new(
            add(self.a, rhs.a)?,
            add(self.b, rhs.b)?,
            add(self.c, rhs.c)?,
            add(self.d, rhs.d)?,
        ))
    }

    /// Exact inverse of a unimodular matrix (the adjugate divided by ±1).
    pub fn inverse(&self) -> Result<Mat2Z> {
        let det = self.det()?;
        let adj = Mat2Z::new(self.d, -self.b, -self.c, self.a);
        match det {
            1 => Ok(adj),
            -1 => Ok(-adj),
            _ => Err(Error::NonInvertible { det }),
        }
    }

    pub fn to_real(&self) -> Matrix2<f64> {
        Matrix2::new(self.a as f64, self.b as f64, self.c as f64, self.d as f64)
    }
}

impl Mul for Mat2Z {
    type Output = Mat2Z;
    fn mul(self, rhs: Mat2Z) -> Mat2Z {
        self.checked_mul(&rhs)
            .expect("integer overflow in Mat2Z product")
    }
}

impl Mul<Vec2Z> for Mat2Z {
    type Output = Vec2Z;
    fn mul(self, rhs: Vec2Z) -> Vec2Z {
        self.checked_apply(rhs)
            .expect("integer overflow in Mat2Z * Vec2Z")
    }
}

impl Neg for Mat2Z {
    type Output = Mat2Z;
    fn neg(self) -> Mat2Z {
        let n = |x: i64| x.checked_neg().expect("integer overflow in Mat2Z negation");
        Mat2Z::new(n(self.a), n(self.b), n(self.c), n(self.d))
    }
}

impl fmt::Display for Mat2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Greatest common divisor of two integers, always nonnegative.
pub fn hcf(a: i64, b: i64) -> u64 {
    let (mut x, mut y) = (a.unsigned_abs(), b.unsigned_abs());
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// Greatest common divisor of a nonempty list; `0` when every entry is zero.
pub fn hcf_all(values: &[i64]) -> Result<u64> {
    if values.is_empty() {
        return Err(Error::Usage("hcf of an empty list".into()));
    }
    let mut g = 0u64;
    for &v in values {
        let (mut x, mut y) = (g, v.unsigned_abs());
        while y != 0 {
            (x, y) = (y, x % y);
        }
        g = x;
        if g == 1 {
            break;
        }
    }
    Ok(g)
}

/// Exact integer power of a unimodular matrix. Negative exponents go through
/// the exact inverse.
pub fn mat2z_pow(m: &Mat2Z, e: i64) -> Result<Mat2Z> {
    let base = if e < 0 { m.inverse()? } else { *m };
    let mut exp = e.unsigned_abs();
    let mut acc = Mat2Z::IDENTITY;
    let mut sq = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc.checked_mul(&sq)?;
        }
        exp >>= 1;
        if exp > 0 {
            sq = sq.checked_mul(&sq)?;
        }
    }
    Ok(acc)
}

/// Order of θ in SL₂(ℤ) for the four elliptic trace classes: 2, 3, 4, 6 for
/// trace −2, −1, 0, 1. The result is checked by computing θ^p.
pub fn theta_order(theta: &Mat2Z) -> Result<u32> {
    let tr = theta.trace()?;
    let p = match tr {
        -2 => 2,
        -1 => 3,
        0 => 4,
        1 => 6,
        _ => {
            return Err(Error::InvalidTheta(format!(
                "trace {tr} is outside {{-2, -1, 0, 1}}"
            )))
        }
    };
    if !theta.is_special() {
        return Err(Error::InvalidTheta(format!(
            "determinant {} is not 1",
            theta.det()?
        )));
    }
    if mat2z_pow(theta, p as i64)? != Mat2Z::IDENTITY {
        return Err(Error::InvalidTheta(format!(
            "{theta} has trace {tr} but θ^{p} ≠ I"
        )));
    }
    Ok(p)
}

/// Trace class of an admissible θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceClass {
    MinusTwo,
    MinusOne,
    Zero,
    One,
}

impl TraceClass {
    pub fn trace(self) -> i64 {
        match self {
            TraceClass::MinusTwo => -2,
            TraceClass::MinusOne => -1,
            TraceClass::Zero => 0,
            TraceClass::One => 1,
        }
    }
}

/// A matrix θ ∈ SL₂(ℤ) with trace in {−2, −1, 0, 1} that lies on a
/// one-parameter subgroup of SL₂(ℝ). For trace −2 this forces θ = −I.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Theta {
    mat: Mat2Z,
    order: u32,
}

impl Theta {
    pub fn new(mat: Mat2Z) -> Result<Self> {
        if !mat.is_special() {
            return Err(Error::InvalidTheta(format!(
                "{mat} has determinant {}, not 1",
                mat.det()?
            )));
        }
        let tr = mat.trace()?;
        if !(-2..=1).contains(&tr) {
            let why = if tr >= 3 {
                "the hyperbolic class S1, not S2"
            } else if tr == 2 {
                "the nilpotent class, not S2"
            } else {
                "no one-parameter subgroup"
            };
            return Err(Error::InvalidTheta(format!(
                "trace {tr} outside S2 class ({why})"
            )));
        }
        if tr == -2 && mat != Mat2Z::NEG_IDENTITY {
            return Err(Error::InvalidTheta(format!(
                "{mat} has trace -2 but is not -I, so it lies on no one-parameter subgroup"
            )));
        }
        let order = theta_order(&mat)?;
        Ok(Self { mat, order })
    }

    pub fn from_entries(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(Mat2Z::new(a, b, c, d))
    }

    pub fn matrix(&self) -> Mat2Z {
        self.mat
    }

    /// The order p with θ^p = I.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn trace(&self) -> i64 {
        self.mat.a + self.mat.d
    }

    pub fn class(&self) -> TraceClass {
        match self.trace() {
            -2 => TraceClass::MinusTwo,
            -1 => TraceClass::MinusOne,
            0 => TraceClass::Zero,
            _ => TraceClass::One,
        }
    }

    pub fn is_scalar(&self) -> bool {
        self.mat == Mat2Z::NEG_IDENTITY
    }

    /// θ^e for any integer e. The exponent is reduced modulo the order, so
    /// this never overflows.
    pub fn pow(&self, e: i64) -> Mat2Z {
        let r = e.rem_euclid(self.order as i64);
        mat2z_pow(&self.mat, r).expect("powers of a finite-order theta are bounded")
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.mat.fmt(f)
    }
}

/// A unit of ℤ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_unit(x: i64) -> Option<Sign> {
        match x {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.value() as f64
    }

    /// `(−1)^ε ↦ ε`.
    pub fn exponent(self) -> u8 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn from_exponent(eps: u8) -> Option<Sign> {
        match eps {
            0 => Some(Sign::Plus),
            1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Integer 4×4 matrix, row major. Used for the matrix representation of
/// words in D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat4Z(pub [[i64; 4]; 4]);

impl Mat4Z {
    pub fn identity() -> Self {
        let mut m = [[0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        Mat4Z(m)
    }

    #[allow(clippy::needless_range_loop)]
    pub fn checked_mul(&self, rhs: &Mat4Z) -> Result<Mat4Z> {
        let mut out = [[0i64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0i64;
                for k in 0..4 {
                    let t = self.0[i][k]
                        .checked_mul(rhs.0[k][j])
                        .ok_or(Error::Overflow("4x4 product"))?;
                    acc = acc.checked_add(t).ok_or(Error::Overflow("4x4 product"))?;
                }
                out[i][j] = acc;
            }
        }
        Ok(Mat4Z(out))
    }
}

impl Mul for Mat4Z {
    type Output = Mat4Z;
    fn mul(self, rhs: Mat4Z) -> Mat4Z {
        self.checked_mul(&rhs)
            .expect("integer overflow in Mat4Z product")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const QUARTER: Mat2Z = Mat2Z::new(0, 1, -1, 0);
    const SIXTH: Mat2Z = Mat2Z::new(1, 1, -1, 0);
    const THIRD: Mat2Z = Mat2Z::new(0, 1, -1, -1);

    #[test]
    fn hcf_examples() {
        assert_eq!(hcf_all(&[6, -4, 10]).unwrap(), 2);
        assert_eq!(hcf_all(&[0, 0]).unwrap(), 0);
        assert_eq!(hcf_all(&[1, 0, 7, -7]).unwrap(), 1);
        assert_eq!(hcf_all(&[i64::MIN, 0]).unwrap(), 1u64 << 63);
        assert!(matches!(hcf_all(&[]), Err(Error::Usage(_))));
    }

    #[test]
    fn pow_examples() {
        assert_eq!(mat2z_pow(&QUARTER, 2).unwrap(), Mat2Z::NEG_IDENTITY);
        assert_eq!(mat2z_pow(&QUARTER, -1).unwrap(), Mat2Z::new(0, -1, 1, 0));
        assert_eq!(mat2z_pow(&SIXTH, 6).unwrap(), Mat2Z::IDENTITY);
        assert_eq!(mat2z_pow(&SIXTH, 0).unwrap(), Mat2Z::IDENTITY);
    }

    #[test]
    fn pow_rejects_singular_inverse() {
        let m = Mat2Z::new(2, 0, 0, 1);
        assert_eq!(mat2z_pow(&m, 3).unwrap(), Mat2Z::new(8, 0, 0, 1));
        assert_eq!(mat2z_pow(&m, -1), Err(Error::NonInvertible { det: 2 }));
    }

    #[test]
    fn pow_reports_overflow() {
        let hyperbolic = Mat2Z::new(2, 1, 1, 1);
        assert_eq!(
            mat2z_pow(&hyperbolic, 200),
            Err(Error::Overflow("matrix product"))
        );
    }

    #[test]
    fn order_examples() {
        assert_eq!(theta_order(&Mat2Z::NEG_IDENTITY).unwrap(), 2);
        assert_eq!(theta_order(&QUARTER).unwrap(), 4);
        assert_eq!(theta_order(&THIRD).unwrap(), 3);
        assert_eq!(theta_order(&SIXTH).unwrap(), 6);
        assert!(matches!(
            theta_order(&Mat2Z::new(2, 1, 1, 1)),
            Err(Error::InvalidTheta(_))
        ));
        // trace -2 but parabolic
        assert!(matches!(
            theta_order(&Mat2Z::new(-1, 1, 0, -1)),
            Err(Error::InvalidTheta(_))
        ));
    }

    #[test]
    fn theta_rejects_non_s2() {
        assert!(Theta::new(Mat2Z::new(2, 1, 1, 1)).is_err());
        assert!(Theta::new(Mat2Z::IDENTITY).is_err());
        assert!(Theta::new(Mat2Z::new(-1, 1, 0, -1)).is_err());
        assert!(Theta::new(Mat2Z::new(0, 1, 1, 0)).is_err());
        let t = Theta::new(QUARTER).unwrap();
        assert_eq!(t.pow(-1), Mat2Z::new(0, -1, 1, 0));
        assert_eq!(t.pow(4001), QUARTER);
    }

    #[test]
    fn inverse_and_wedge() {
        let m = Mat2Z::new(2, 1, 1, 0);
        assert_eq!(m.det().unwrap(), -1);
        assert_eq!(m * m.inverse().unwrap(), Mat2Z::IDENTITY);
        assert_eq!(Vec2Z::new(1, 0).wedge(Vec2Z::new(0, 1)).unwrap(), 1);
        assert_eq!(QUARTER * Vec2Z::new(1, 0), Vec2Z::new(0, -1));
    }

    fn unimodular() -> impl Strategy<Value = Mat2Z> {
        // products of elementary generators stay small enough for i64
        proptest::collection::vec(0u8..4, 0..8).prop_map(|word| {
            let gens = [
                Mat2Z::new(1, 1, 0, 1),
                Mat2Z::new(1, 0, 1, 1),
                Mat2Z::new(0, 1, 1, 0),
                Mat2Z::new(-1, 0, 0, 1),
            ];
            word.into_iter()
                .fold(Mat2Z::IDENTITY, |acc, g| acc * gens[g as usize])
        })
    }

    proptest! {
        #[test]
        fn pow_adds_exponents(m in unimodular(), e1 in -4i64..5, e2 in -4i64..5) {
            let lhs = mat2z_pow(&m, e1).unwrap() * mat2z_pow(&m, e2).unwrap();
            prop_assert_eq!(lhs, mat2z_pow(&m, e1 + e2).unwrap());
        }

        #[test]
        fn hcf_ignores_sign_and_order(mut v in proptest::collection::vec(-1000i64..1000, 1..8), flips in proptest::collection::vec(any::<bool>(), 8)) {
            let g = hcf_all(&v).unwrap();
            for (x, f) in v.iter_mut().zip(flips) {
                if f { *x = -*x; }
            }
            v.reverse();
            prop_assert_eq!(hcf_all(&v).unwrap(), g);
        }
    }

    #[test]
    fn admissible_thetas_have_finite_order() {
        // every SL2(Z) matrix with small entries and admissible trace
        for a in -3..=3 {
            for b in -3..=3 {
                for c in -3..=3 {
                    for d in -3..=3 {
                        let m = Mat2Z::new(a, b, c, d);
                        if m.det() != Ok(1) || !(-1..=1).contains(&(a + d)) {
                            continue;
                        }
                        let p = theta_order(&m).unwrap();
                        assert_eq!(mat2z_pow(&m, p as i64).unwrap(), Mat2Z::IDENTITY);
                    }
                }
            }
        }
    }
}
