//! Automorphisms of the Lie algebra 𝔰₂ and of the group S₂.
//!
//! Both are stored by their five parameters (ε, α, β, γ, δ), written in the
//! F-basis. With `P = [[0,1,0],[1,0,0],[0,0,−1]]` the algebra automorphism
//! is the matrix `P^ε [[α, β, γ], [−β, α, δ], [0, 0, 1]]`, and the group
//! automorphism is the unique one whose differential at the identity is that
//! matrix.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::intmat::Sign;
use crate::liegroup::{Basis, GroupPoint, S2Group, FD_STEP};

/// Entrywise tolerance used when recognising an automorphism matrix.
pub const SHAPE_TOLERANCE: f64 = 1e-10;
/// Lower bound on α² + β².
pub const NONDEGENERACY: f64 = 1e-12;

/// The flip `P`.
#[rustfmt::skip]
pub fn flip_matrix() -> Matrix3<f64> {
    Matrix3::new(
        0.0, 1.0, 0.0,
        1.0, 0.0, 0.0,
        0.0, 0.0, -1.0,
    )
}

/// An automorphism of 𝔰₂ in the F-basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LieAlgebraAuto {
    /// `(−1)^ε`.
    pub xi: Sign,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl LieAlgebraAuto {
    pub fn new(epsilon: u8, alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let xi = Sign::from_exponent(epsilon).ok_or_else(|| {
            Error::InvalidParameters(format!("epsilon = {epsilon} is not 0 or 1"))
        })?;
        // written this way so NaN is rejected too
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(alpha * alpha + beta * beta > NONDEGENERACY) {
            return Err(Error::InvalidParameters(format!(
                "alpha^2 + beta^2 = {} is degenerate",
                alpha * alpha + beta * beta
            )));
        }
        if ![alpha, beta, gamma, delta].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameters("non-finite parameter".into()));
        }
        Ok(Self {
            xi,
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    pub fn identity() -> Self {
        Self {
            xi: Sign::Plus,
            alpha: 1.0,
            beta: 0.0,
            gamma: 0.0,
            delta: 0.0,
        }
    }

    pub fn epsilon(&self) -> u8 {
        self.xi.exponent()
    }

    /// `[[α, β, γ], [−β, α, δ], [0, 0, 1]]`.
    #[rustfmt::skip]
    pub fn unflipped_matrix(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.alpha, self.beta, self.gamma,
            -self.beta, self.alpha, self.delta,
            0.0, 0.0, 1.0,
        )
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        match self.xi {
            Sign::Plus => self.unflipped_matrix(),
            Sign::Minus => flip_matrix() * self.unflipped_matrix(),
        }
    }

    /// The parameters as `[ε, α, β, γ, δ]`.
    pub fn as_array(&self) -> [f64; 5] {
        [
            self.epsilon() as f64,
            self.alpha,
            self.beta,
            self.gamma,
            self.delta,
        ]
    }

    /// Largest absolute parameter difference. Differing ε counts as infinite.
    pub fn max_param_diff(&self, other: &LieAlgebraAuto) -> f64 {
        if self.xi != other.xi {
            return f64::INFINITY;
        }
        [
            self.alpha - other.alpha,
            self.beta - other.beta,
            self.gamma - other.gamma,
            self.delta - other.delta,
        ]
        .iter()
        .fold(0.0f64, |m, d| m.max(d.abs()))
    }
}

/// Recognises `l` as an automorphism of 𝔰₂ and extracts its parameters.
///
/// The shape test is entrywise within [`SHAPE_TOLERANCE`]. The defining
/// identity `C_ijk L_jp L_kq = L_ir C_rpq` is then checked against the
/// F-basis structure constants (with k = 1; the identity is homogeneous in k).
pub fn is_algebra_auto(l: &Matrix3<f64>) -> Option<LieAlgebraAuto> {
    let tol = SHAPE_TOLERANCE;
    let (xi, r) = if (l[(2, 2)] - 1.0).abs() <= tol {
        (Sign::Plus, *l)
    } else if (l[(2, 2)] + 1.0).abs() <= tol {
        (Sign::Minus, flip_matrix() * l)
    } else {
        return None;
    };
    if r[(2, 0)].abs() > tol || r[(2, 1)].abs() > tol {
        return None;
    }
    if (r[(0, 0)] - r[(1, 1)]).abs() > tol || (r[(0, 1)] + r[(1, 0)]).abs() > tol {
        return None;
    }
    let alpha = 0.5 * (r[(0, 0)] + r[(1, 1)]);
    let beta = 0.5 * (r[(0, 1)] - r[(1, 0)]);
    let auto = LieAlgebraAuto::new(xi.exponent(), alpha, beta, r[(0, 2)], r[(1, 2)]).ok()?;
    if algebra_condition_residual(l) > tol * (1.0 + l.amax() * l.amax()) {
        return None;
    }
    Some(auto)
}

/// Max residual of `C_ijk L_jp L_kq − L_ir C_rpq` for the unit-k F-basis
/// constants `C_ijk = δ₃ⱼε₃ᵢₖ − δ₃ₖε₃ᵢⱼ`.
pub fn algebra_condition_residual(l: &Matrix3<f64>) -> f64 {
    use crate::liegroup::levi_civita;
    let c = |i: usize, j: usize, k: usize| -> f64 {
        let dj = if j == 2 { 1.0 } else { 0.0 };
        let dk = if k == 2 { 1.0 } else { 0.0 };
        dj * levi_civita(2, i, k) - dk * levi_civita(2, i, j)
    };
    let mut worst = 0.0f64;
    for i in 0..3 {
        for p in 0..3 {
            for q in 0..3 {
                let mut lhs = 0.0;
                for j in 0..3 {
                    for k in 0..3 {
                        lhs += c(i, j, k) * l[(j, p)] * l[(k, q)];
                    }
                }
                let rhs: f64 = (0..3).map(|r| l[(i, r)] * c(r, p, q)).sum();
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    worst
}

/// The unique factorisation `L = p · t · s` with `p` a power of the flip,
/// `t` a pure translation part and `s` a rotation-scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtsFactors {
    pub p: Matrix3<f64>,
    pub t: Matrix3<f64>,
    pub s: Matrix3<f64>,
}

impl PtsFactors {
    pub fn recompose(&self) -> Matrix3<f64> {
        self.p * self.t * self.s
    }
}

pub fn pts_factor(l: &LieAlgebraAuto) -> PtsFactors {
    let p = match l.xi {
        Sign::Plus => Matrix3::identity(),
        Sign::Minus => flip_matrix(),
    };
    let mut t = Matrix3::identity();
    t[(0, 2)] = l.gamma;
    t[(1, 2)] = l.delta;
    #[rustfmt::skip]
    let s = Matrix3::new(
        l.alpha, l.beta, 0.0,
        -l.beta, l.alpha, 0.0,
        0.0, 0.0, 1.0,
    );
    PtsFactors { p, t, s }
}

/// Parameters of an automorphism of a particular S₂(θ, k).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupAutoParams {
    pub algebra: LieAlgebraAuto,
    pub k: f64,
}

impl GroupAutoParams {
    pub fn new(g: &S2Group, algebra: LieAlgebraAuto) -> Self {
        Self { algebra, k: g.k() }
    }

    pub fn identity(g: &S2Group) -> Self {
        Self::new(g, LieAlgebraAuto::identity())
    }

    pub fn epsilon(&self) -> u8 {
        self.algebra.epsilon()
    }

    /// ζ := (−1)^ε.
    pub fn xi(&self) -> Sign {
        self.algebra.xi
    }

    /// Applies the automorphism to F-basis coordinates.
    pub fn apply_f(&self, v: &Vector3<f64>) -> Vector3<f64> {
        let LieAlgebraAuto {
            alpha,
            beta,
            gamma,
            delta,
            xi,
        } = self.algebra;
        let k = self.k;
        let (s, c) = (k * v[2]).sin_cos();
        let first = alpha * v[0] + beta * v[1] + gamma / k * s + delta / k * (1.0 - c);
        let second = -beta * v[0] + alpha * v[1] - gamma / k * (1.0 - c) + delta / k * s;
        match xi {
            Sign::Plus => Vector3::new(first, second, v[2]),
            Sign::Minus => Vector3::new(second, first, -v[2]),
        }
    }

    /// The composition `self ∘ other`.
    pub fn compose(&self, other: &GroupAutoParams) -> Result<GroupAutoParams> {
        let l = self.algebra.matrix() * other.algebra.matrix();
        let algebra = is_algebra_auto(&l)
            .ok_or_else(|| Error::Inconsistent("product of automorphisms lost its shape".into()))?;
        Ok(GroupAutoParams { algebra, k: self.k })
    }
}

/// Applies a group automorphism to a point in either basis. The map itself
/// lives in the F-basis; E-basis points are converted there and back.
pub fn apply_group_auto(g: &S2Group, phi: &GroupAutoParams, v: &GroupPoint) -> Result<GroupPoint> {
    if (phi.k - g.k()).abs() > 1e-12 * g.k().abs().max(1.0) {
        return Err(Error::InvalidParameters(format!(
            "automorphism was built for k = {}, group has k = {}",
            phi.k,
            g.k()
        )));
    }
    let f = g.to_basis(v, Basis::F);
    let image = GroupPoint {
        coords: phi.apply_f(&f.coords),
        basis: Basis::F,
    };
    Ok(g.to_basis(&image, v.basis))
}

/// ∇φ(0) in the F-basis, by central differences.
pub fn gradient_at_identity(phi: &GroupAutoParams) -> Matrix3<f64> {
    let h = FD_STEP;
    let mut grad = Matrix3::zeros();
    for j in 0..3 {
        let mut e = Vector3::zeros();
        e[j] = h;
        let col = (phi.apply_f(&e) - phi.apply_f(&-e)) / (2.0 * h);
        grad.set_column(j, &col);
    }
    grad
}
