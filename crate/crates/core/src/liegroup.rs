//! The continuous solvable group S₂(θ, k).
//!
//! Points are stored as three real coordinates tagged with the basis they are
//! written in. The *E*-basis is the one in which θ = φ(1) has integer
//! entries; the *F*-basis (f_i = M_ij e_j) is the one in which φ becomes a
//! plain rotation and the automorphisms have a closed form.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::intmat::{Theta, TraceClass};

/// Central-difference step for first derivatives.
pub const FD_STEP: f64 = 1e-5;
/// Central-difference step for second mixed partials.
pub const FD_STEP_MIXED: f64 = 1e-4;
/// Below this value of |k·u₃| the F matrix is evaluated by its series.
pub const F_SERIES_CUTOFF: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    E,
    F,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Basis::E => "E",
            Basis::F => "F",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A group element (or Lie algebra vector) with the basis it is written in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupPoint {
    pub coords: Vector3<f64>,
    pub basis: Basis,
}

impl GroupPoint {
    pub fn new(basis: Basis, x1: f64, x2: f64, x3: f64) -> Self {
        Self {
            coords: Vector3::new(x1, x2, x3),
            basis,
        }
    }

    pub fn e(x1: f64, x2: f64, x3: f64) -> Self {
        Self::new(Basis::E, x1, x2, x3)
    }

    pub fn f(x1: f64, x2: f64, x3: f64) -> Self {
        Self::new(Basis::F, x1, x2, x3)
    }

    pub fn origin(basis: Basis) -> Self {
        Self::new(basis, 0.0, 0.0, 0.0)
    }

    pub fn planar(&self) -> Vector2<f64> {
        Vector2::new(self.coords[0], self.coords[1])
    }

    pub fn height(&self) -> f64 {
        self.coords[2]
    }

    fn expect(&self, basis: Basis) -> Result<()> {
        if self.basis == basis {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                expected: basis.name(),
                got: self.basis.name(),
            })
        }
    }

    /// Max-norm distance between two points in the same basis.
    pub fn distance(&self, other: &GroupPoint) -> Result<f64> {
        other.expect(self.basis)?;
        Ok((self.coords - other.coords).amax())
    }
}

/// Structure constants `C[i][j][k]`, with `[x_j, x_k] = C_ijk x_i`
/// (zero-based indices).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureConstants(pub [[[f64; 3]; 3]; 3]);

impl StructureConstants {
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.0[i][j][k]
    }

    pub fn bracket(&self, x: &Vector3<f64>, y: &Vector3<f64>) -> Vector3<f64> {
        let mut out = Vector3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[i] += self.0[i][j][k] * x[j] * y[k];
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &StructureConstants) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    worst = worst.max((self.0[i][j][k] - other.0[i][j][k]).abs());
                }
            }
        }
        worst
    }
}

/// Levi-Civita symbol on zero-based indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Whether `n` is an admissible branch index for the trace class of θ:
/// `n ≡ ±1 (mod p)`.
pub fn is_admissible_branch(theta: &Theta, n: i64) -> bool {
    let p = theta.order() as i64;
    let r = n.rem_euclid(p);
    n != 0 && (r == 1 || r == p - 1)
}

/// The first `count` positive admissible branch indices.
pub fn admissible_branches(theta: &Theta, count: usize) -> Vec<i64> {
    (1..)
        .filter(|&n| is_admissible_branch(theta, n))
        .take(count)
        .collect()
}

/// The rotation-form one-parameter subgroup in the F-basis, `exp(𝓑x)`.
pub fn rotation(k: f64, x: f64) -> Matrix2<f64> {
    let (s, c) = (k * x).sin_cos();
    Matrix2::new(c, s, -s, c)
}

/// `F(𝓑u₃) = Σ (𝓑u₃)^j / (j+1)!` with `𝓑 = [[0, k], [−k, 0]]`.
pub fn f_matrix(k: f64, u3: f64) -> Matrix2<f64> {
    let t = k * u3;
    if t.abs() < F_SERIES_CUTOFF {
        return Matrix2::new(1.0, t / 2.0, -t / 2.0, 1.0);
    }
    let (s, c) = t.sin_cos();
    Matrix2::new(s, 1.0 - c, -(1.0 - c), s) / t
}

/// A concrete group S₂(θ, k) together with the derived quantities.
#[derive(Debug, Clone)]
pub struct S2Group {
    theta: Theta,
    branch: i64,
    k: f64,
    generator: Matrix2<f64>,
    change_of_basis: Matrix3<f64>,
    /// M^{-T}: E-coordinates → F-coordinates.
    to_f: Matrix3<f64>,
    dislocation_density: Matrix3<f64>,
}

/// Builds S₂ for θ and branch index `n`.
pub fn make_group(theta: &Theta, n: i64) -> Result<S2Group> {
    S2Group::new(theta, n)
}

impl S2Group {
    pub fn new(theta: &Theta, n: i64) -> Result<Self> {
        if !is_admissible_branch(theta, n) {
            return Err(Error::InvalidParameters(format!(
                "branch n = {n} is not ±1 mod {} for trace {}",
                theta.order(),
                theta.trace()
            )));
        }
        let nf = n as f64;
        let k = match theta.class() {
            TraceClass::MinusTwo => PI * nf,
            TraceClass::MinusOne => 2.0 * PI * nf / 3.0,
            TraceClass::Zero => PI * nf / 2.0,
            TraceClass::One => PI * nf / 3.0,
        };
        let generator = if theta.is_scalar() {
            Matrix2::new(0.0, k, -k, 0.0)
        } else {
            let m = theta.matrix();
            let scale = k / k.sin();
            let half = 0.5 * (m.a - m.d) as f64;
            Matrix2::new(half, m.b as f64, m.c as f64, -half) * scale
        };
        let (ap, bp, cp) = (generator[(0, 0)], generator[(0, 1)], generator[(1, 0)]);
        if bp.abs() < 1e-12 {
            return Err(Error::InvalidParameters(
                "b'(0) vanishes, change of basis is singular".into(),
            ));
        }
        #[rustfmt::skip]
        let change_of_basis = Matrix3::new(
            -bp, ap + k, 0.0,
            -bp, ap - k, 0.0,
            0.0, 0.0,    1.0,
        );
        let to_f = change_of_basis
            .transpose()
            .try_inverse()
            .ok_or_else(|| Error::Inconsistent("change of basis is singular".into()))?;
        #[rustfmt::skip]
        let dislocation_density = Matrix3::new(
            -bp, ap,  0.0,
            ap,  cp,  0.0,
            0.0, 0.0, 0.0,
        );
        Ok(Self {
            theta: *theta,
            branch: n,
            k,
            generator,
            change_of_basis,
            to_f,
            dislocation_density,
        })
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    pub fn branch(&self) -> i64 {
        self.branch
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// 𝒜 = φ′(0).
    pub fn generator(&self) -> Matrix2<f64> {
        self.generator
    }

    /// M, with f_i = M_ij e_j.
    pub fn change_of_basis(&self) -> Matrix3<f64> {
        self.change_of_basis
    }

    /// The top-left 2×2 block of M.
    pub fn change_of_basis_planar(&self) -> Matrix2<f64> {
        self.change_of_basis.fixed_view::<2, 2>(0, 0).into_owned()
    }

    /// M̄^{-T}, mapping planar E-coordinates to planar F-coordinates.
    pub fn planar_to_f(&self) -> Matrix2<f64> {
        self.to_f.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn dislocation_density(&self) -> Matrix3<f64> {
        self.dislocation_density
    }

    /// φ(x₃) = cos(k x₃) I + (sin(k x₃)/k) 𝒜.
    pub fn phi_of(&self, x3: f64) -> Matrix2<f64> {
        let (s, c) = (self.k * x3).sin_cos();
        Matrix2::identity() * c + self.generator * (s / self.k)
    }

    fn planar_action(&self, basis: Basis, x3: f64) -> Matrix2<f64> {
        match basis {
            Basis::E => self.phi_of(x3),
            Basis::F => rotation(self.k, x3),
        }
    }

    /// Group composition ψ(x, y).
    pub fn compose(&self, x: &GroupPoint, y: &GroupPoint) -> Result<GroupPoint> {
        y.expect(x.basis)?;
        let planar = x.planar() + self.planar_action(x.basis, x.height()) * y.planar();
        Ok(GroupPoint::new(
            x.basis,
            planar[0],
            planar[1],
            x.height() + y.height(),
        ))
    }

    pub fn inverse(&self, x: &GroupPoint) -> GroupPoint {
        let planar = -(self.planar_action(x.basis, -x.height()) * x.planar());
        GroupPoint::new(x.basis, planar[0], planar[1], -x.height())
    }

    /// The right-invariant lattice vector fields ℓ₁, ℓ₂, ℓ₃ at an E-basis point.
    pub fn lattice_fields(&self, x: &GroupPoint) -> Result<[Vector3<f64>; 3]> {
        x.expect(Basis::E)?;
        let (ap, bp, cp) = (
            self.generator[(0, 0)],
            self.generator[(0, 1)],
            self.generator[(1, 0)],
        );
        let (x1, x2) = (x.coords[0], x.coords[1]);
        Ok([
            Vector3::x(),
            Vector3::y(),
            Vector3::new(ap * x1 + bp * x2, cp * x1 - ap * x2, 1.0),
        ])
    }

    /// Analytic structure constants in the given basis.
    pub fn structure_constants(&self, basis: Basis) -> StructureConstants {
        let mut c = [[[0.0; 3]; 3]; 3];
        match basis {
            Basis::E => {
                // C_irs = ε_prs S_ip, since ℓ(0) is the identity
                for (i, plane) in c.iter_mut().enumerate() {
                    for (r, row) in plane.iter_mut().enumerate() {
                        for (s, entry) in row.iter_mut().enumerate() {
                            *entry = (0..3)
                                .map(|p| levi_civita(p, r, s) * self.dislocation_density[(i, p)])
                                .sum();
                        }
                    }
                }
            }
            Basis::F => {
                for (i, plane) in c.iter_mut().enumerate() {
                    for (j, row) in plane.iter_mut().enumerate() {
                        for (kk, entry) in row.iter_mut().enumerate() {
                            let dj = if j == 2 { 1.0 } else { 0.0 };
                            let dk = if kk == 2 { 1.0 } else { 0.0 };
                            *entry =
                                self.k * (dj * levi_civita(2, i, kk) - dk * levi_civita(2, i, j));
                        }
                    }
                }
            }
        }
        StructureConstants(c)
    }

    /// Lie bracket of two algebra vectors written in `basis`.
    pub fn bracket(&self, x: &Vector3<f64>, y: &Vector3<f64>, basis: Basis) -> Vector3<f64> {
        match basis {
            Basis::E => {
                let w = x.cross(y);
                let (ap, bp, cp) = (
                    self.generator[(0, 0)],
                    self.generator[(0, 1)],
                    self.generator[(1, 0)],
                );
                Vector3::new(ap * w[1] - bp * w[0], cp * w[1] + ap * w[0], 0.0)
            }
            Basis::F => self.structure_constants(Basis::F).bracket(x, y),
        }
    }

    /// The exponential map 𝔰₂ → S₂. E-basis input is converted to the
    /// F-basis and the result converted back.
    pub fn exp_map(&self, u: &GroupPoint) -> GroupPoint {
        if u.basis == Basis::E {
            return self.convert_basis(&self.exp_map(&self.convert_basis(u)));
        }
        let planar = f_matrix(self.k, u.height()) * u.planar();
        GroupPoint::f(planar[0], planar[1], u.height())
    }

    /// Writes `v` (F-basis) as ψ(e^(s), e^(t)) and returns the algebra vectors
    /// `(s, t)`.
    pub fn two_exp_decompose(&self, v: &GroupPoint) -> Result<(GroupPoint, GroupPoint)> {
        v.expect(Basis::F)?;
        Ok((
            GroupPoint::f(v.coords[0], v.coords[1], 0.0),
            GroupPoint::f(0.0, 0.0, v.coords[2]),
        ))
    }

    /// Switches the coordinates of `p` to the other basis.
    pub fn convert_basis(&self, p: &GroupPoint) -> GroupPoint {
        match p.basis {
            Basis::E => GroupPoint {
                coords: self.to_f * p.coords,
                basis: Basis::F,
            },
            Basis::F => GroupPoint {
                coords: self.change_of_basis.transpose() * p.coords,
                basis: Basis::E,
            },
        }
    }

    pub fn to_basis(&self, p: &GroupPoint, basis: Basis) -> GroupPoint {
        if p.basis == basis {
            *p
        } else {
            self.convert_basis(p)
        }
    }

    /// Structure constants from central second differences of ψ at (0, 0).
    pub fn structure_constants_fd(&self, basis: Basis) -> StructureConstants {
        let h = FD_STEP_MIXED;
        let psi = |x: Vector3<f64>, y: Vector3<f64>| -> Vector3<f64> {
            self.compose(
                &GroupPoint { coords: x, basis },
                &GroupPoint { coords: y, basis },
            )
            .expect("same basis")
            .coords
        };
        let unit = |j: usize, s: f64| {
            let mut v = Vector3::zeros();
            v[j] = s;
            v
        };
        // mixed[j][k] = ∂²ψ/∂x_j∂y_k
        let mut mixed = [[Vector3::zeros(); 3]; 3];
        for (j, row) in mixed.iter_mut().enumerate() {
            for (k, entry) in row.iter_mut().enumerate() {
                let pp = psi(unit(j, h), unit(k, h));
                let pm = psi(unit(j, h), unit(k, -h));
                let mp = psi(unit(j, -h), unit(k, h));
                let mm = psi(unit(j, -h), unit(k, -h));
                *entry = (pp - pm - mp + mm) / (4.0 * h * h);
            }
        }
        let mut c = [[[0.0; 3]; 3]; 3];
        for (i, plane) in c.iter_mut().enumerate() {
            for (j, row) in plane.iter_mut().enumerate() {
                for (k, entry) in row.iter_mut().enumerate() {
                    *entry = mixed[j][k][i] - mixed[k][j][i];
                }
            }
        }
        StructureConstants(c)
    }
}
