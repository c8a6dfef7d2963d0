//! Lifting automorphisms of `D(θ)` to automorphisms of S₂.
//!
//! In the F-basis an automorphism of S₂ acts by
//! `v ↦ W(ε) (X v̄ + v₃ F(v₃) (γ, δ)ᵀ, ±v₃)` with `X = [[α, β], [−β, α]]` and
//! `W(1)` the coordinate swap. Matching it with `φ_D` on words `B^M C^N`
//! forces `X = W M̄^{−T} χ M̄^{T}`; matching on `A^q` forces
//! `(γ, δ)ᵀ = R(ε) (β₁, γ₁)ᵀ`.

use nalgebra::{DMatrix, Matrix2, Vector2};

use crate::autos::{apply_group_auto, GroupAutoParams, LieAlgebraAuto};
use crate::discrete::{embed, DElement};
use crate::error::{Error, Result};
use crate::intmat::{Mat2Z, Sign};
use crate::liegroup::{f_matrix, Basis, S2Group};
use crate::symmetry::{apply_d_automorphism, DAutomorphism};

/// Entrywise tolerance on the rotation-scaling shape of `X`.
pub const FORM_TOLERANCE: f64 = 1e-9;
/// Absolute floor of the lattice comparison tolerance.
pub const ABS_TOLERANCE: f64 = 1e-9;
/// Relative part of the lattice comparison tolerance.
pub const REL_TOLERANCE: f64 = 1e-12;

/// `W(ε)`: the identity for ε = 0, the coordinate swap for ε = 1.
pub fn w_matrix(xi: Sign) -> Matrix2<f64> {
    match xi {
        Sign::Plus => Matrix2::identity(),
        Sign::Minus => Matrix2::new(0.0, 1.0, 1.0, 0.0),
    }
}

fn sign_of_epsilon(epsilon: u8) -> Result<Sign> {
    Sign::from_exponent(epsilon)
        .ok_or_else(|| Error::Usage(format!("epsilon = {epsilon} is not 0 or 1")))
}

/// `W M̄^{−T} χ M̄^{T}`, which must be a rotation-scaling for an extension
/// to exist.
pub fn planar_block(g: &S2Group, zeta: Sign, chi: &Mat2Z) -> Matrix2<f64> {
    let to_f = g.planar_to_f();
    w_matrix(zeta) * to_f * chi.to_real() * g.change_of_basis_planar().transpose()
}

/// `Σ_{j=1}^{q} θ^{jξ}` for `q > 0`.
fn theta_sum(g: &S2Group, xi: Sign, q: i64) -> Matrix2<f64> {
    (1..=q).fold(Matrix2::zeros(), |acc, j| {
        acc + g.theta().pow(j * xi.value()).to_real()
    })
}

/// `R(ε) = (1/q) W (F(𝓑ξq))⁻¹ M̄^{−T} Σ_{j=1}^{q} θ^{jξ}`, with ξ = (−1)^ε.
///
/// Independent of `q` as long as `q` is not a multiple of the order of θ,
/// where `F` vanishes.
pub fn r_eps(g: &S2Group, epsilon: u8, q: i64) -> Result<Matrix2<f64>> {
    let xi = sign_of_epsilon(epsilon)?;
    let order = g.theta().order();
    if q <= 0 {
        return Err(Error::Usage(format!("q = {q} must be positive")));
    }
    if q % order as i64 == 0 {
        return Err(Error::SingularF { q, order });
    }
    let f = f_matrix(g.k(), xi.as_f64() * q as f64);
    let f_inv = f.try_inverse().ok_or(Error::SingularF { q, order })?;
    Ok(w_matrix(xi) * f_inv * g.planar_to_f() * theta_sum(g, xi, q) / q as f64)
}

/// The q-free form `W (F(𝓑ξ))^{−T} M̄^{−T}`.
pub fn r_eps_closed_form(g: &S2Group, epsilon: u8) -> Result<Matrix2<f64>> {
    let xi = sign_of_epsilon(epsilon)?;
    let f = f_matrix(g.k(), xi.as_f64());
    let f_inv_t = f
        .try_inverse()
        .ok_or(Error::SingularF {
            q: 1,
            order: g.theta().order(),
        })?
        .transpose();
    Ok(w_matrix(xi) * f_inv_t * g.planar_to_f())
}

/// Computes the automorphism of S₂ extending `φ_D`.
///
/// Fails with [`Error::NoExtension`] when `W M̄^{−T} χ M̄^{T}` is not a
/// rotation-scaling. That never happens for θ ≠ −I; for θ = −I it happens
/// exactly when χ is not a signed permutation matching ζ.
pub fn extend(g: &S2Group, phi: &DAutomorphism) -> Result<GroupAutoParams> {
    phi.validate(g.theta())?;
    let x = planar_block(g, phi.zeta, &phi.chi);
    let scale = x.amax().max(1.0);
    if (x[(0, 0)] - x[(1, 1)]).abs() > FORM_TOLERANCE * scale
        || (x[(0, 1)] + x[(1, 0)]).abs() > FORM_TOLERANCE * scale
    {
        return Err(Error::NoExtension(format!(
            "W M^-T chi M^T = [[{:.6}, {:.6}], [{:.6}, {:.6}]] is not a rotation-scaling",
            x[(0, 0)],
            x[(0, 1)],
            x[(1, 0)],
            x[(1, 1)]
        )));
    }
    let alpha = 0.5 * (x[(0, 0)] + x[(1, 1)]);
    let beta = 0.5 * (x[(0, 1)] - x[(1, 0)]);
    let r = r_eps(g, phi.zeta.exponent(), 1)?;
    let gd = r * Vector2::new(phi.beta1 as f64, phi.gamma1 as f64);
    let algebra = LieAlgebraAuto::new(phi.zeta.exponent(), alpha, beta, gd[0], gd[1])?;
    Ok(GroupAutoParams::new(g, algebra))
}

/// Words `(Q, M, N)` with all exponents in `[−radius, radius]`.
pub fn word_box(radius: i64) -> impl Iterator<Item = DElement> {
    let r = -radius..=radius;
    r.clone().flat_map(move |q| {
        let r = r.clone();
        r.clone()
            .flat_map(move |m| r.clone().map(move |n| DElement::new(q, m, n)))
    })
}

/// Result of comparing `φ_D` with its lift on a box of lattice points.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionReport {
    pub automorphism: DAutomorphism,
    pub params: GroupAutoParams,
    /// Largest max-norm distance (F-basis) between the two images.
    pub max_discrepancy: f64,
    /// Largest discrepancy divided by its per-point tolerance
    /// `max(1e−9, 1e−12 ‖point‖)`. Below 1 means every point agreed.
    pub max_scaled: f64,
    /// The word attaining `max_scaled`.
    pub worst_word: DElement,
    pub box_radius: i64,
    pub branch: i64,
    pub points: usize,
}

impl ExtensionReport {
    pub fn passed(&self) -> bool {
        self.max_scaled < 1.0
    }
}

/// Compares `φ_D` (exact, then embedded) with `φ̃` applied to the embedded
/// word, for every word in the box.
pub fn verify_extension(
    g: &S2Group,
    phi: &DAutomorphism,
    params: &GroupAutoParams,
    radius: i64,
) -> Result<ExtensionReport> {
    let mut report = ExtensionReport {
        automorphism: *phi,
        params: *params,
        max_discrepancy: 0.0,
        max_scaled: 0.0,
        worst_word: DElement::IDENTITY,
        box_radius: radius,
        branch: g.branch(),
        points: 0,
    };
    for d in word_box(radius) {
        let exact = apply_d_automorphism(g.theta(), phi, &d)?;
        let expected = g.to_basis(&embed(g, &exact), Basis::F);
        let source = g.to_basis(&embed(g, &d), Basis::F);
        let got = apply_group_auto(g, params, &source)?;
        let err = got.distance(&expected)?;
        let tol = ABS_TOLERANCE.max(REL_TOLERANCE * expected.coords.amax());
        report.points += 1;
        report.max_discrepancy = report.max_discrepancy.max(err);
        // NaN must count as a failure
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(err / tol <= report.max_scaled) {
            report.max_scaled = if err.is_nan() {
                f64::INFINITY
            } else {
                err / tol
            };
            report.worst_word = d;
        }
    }
    Ok(report)
}

/// Parameters re-derived from lattice data alone.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub epsilon: u8,
    pub alpha: f64,
    pub beta: f64,
    /// `None` when every probed `q` is a multiple of the order of θ.
    pub gamma_delta: Option<(f64, f64)>,
    /// Set when part of the parameters could not be recovered.
    pub flag: Option<&'static str>,
    /// Largest parameter difference from [`extend`], over the recovered ones.
    pub max_abs_diff: f64,
}

pub const NO_GAMMA_DELTA: &str = "no information about γ and δ";

/// [`uniqueness_probe_with`] using the words `B^M C^N` with `|M|, |N| ≤ 2`
/// and the heights `q = 1..=p`.
pub fn uniqueness_probe(g: &S2Group, phi: &DAutomorphism) -> Result<ProbeReport> {
    let p = g.theta().order() as i64;
    let qs: Vec<i64> = (1..=p).collect();
    uniqueness_probe_with(g, phi, 2, &qs)
}

/// Solves for `(ε, α, β, γ, δ)` from the F-coordinates of lattice images.
///
/// `ε` is read from the height of `φ_D(A)`. `X` is the least-squares solution
/// of `W ȳ = X ū` over the words `B^M C^N` in the box. `(γ, δ)` comes from
/// `W ȳ = q F(𝓑q) (γ, δ)ᵀ` for the image of `A^q` (F at the source height,
/// not the image height), at every listed `q` that is not a multiple of the
/// order; the answers are averaged.
pub fn uniqueness_probe_with(
    g: &S2Group,
    phi: &DAutomorphism,
    radius: i64,
    qs: &[i64],
) -> Result<ProbeReport> {
    let theta = g.theta();
    let image_f = |d: &DElement| -> Result<nalgebra::Vector3<f64>> {
        let exact = apply_d_automorphism(theta, phi, d)?;
        Ok(g.to_basis(&embed(g, &exact), Basis::F).coords)
    };
    let height = image_f(&DElement::A)?[2];
    let xi = if height > 0.0 {
        Sign::Plus
    } else {
        Sign::Minus
    };
    let w = w_matrix(xi);

    let words: Vec<DElement> = word_box(radius).filter(|d| d.q == 0).collect();
    let mut u = DMatrix::<f64>::zeros(2, words.len());
    let mut y = DMatrix::<f64>::zeros(2, words.len());
    for (j, d) in words.iter().enumerate() {
        let src = g.to_basis(&embed(g, d), Basis::F).planar();
        let img = w * image_f(d)?.xy();
        u.set_column(j, &src);
        y.set_column(j, &img);
    }
    // X = Y Uᵀ (U Uᵀ)⁻¹
    let gram: Matrix2<f64> = (&u * u.transpose()).fixed_view::<2, 2>(0, 0).into_owned();
    let cross: Matrix2<f64> = (&y * u.transpose()).fixed_view::<2, 2>(0, 0).into_owned();
    let x = cross
        * gram
            .try_inverse()
            .ok_or_else(|| Error::Usage("probe box too small to determine X".into()))?;
    let alpha = 0.5 * (x[(0, 0)] + x[(1, 1)]);
    let beta = 0.5 * (x[(0, 1)] - x[(1, 0)]);

    let order = theta.order() as i64;
    let mut solutions = Vec::new();
    for &q in qs.iter().filter(|&&q| q % order != 0) {
        let img = w * image_f(&DElement::new(q, 0, 0))?.xy();
        let f = f_matrix(g.k(), q as f64) * q as f64;
        if let Some(finv) = f.try_inverse() {
            solutions.push(finv * img);
        }
    }
    let gamma_delta = if solutions.is_empty() {
        None
    } else {
        let mean = solutions.iter().fold(Vector2::zeros(), |a, s| a + s) / solutions.len() as f64;
        Some((mean[0], mean[1]))
    };

    let ext = extend(g, phi)?.algebra;
    let mut diff = (alpha - ext.alpha).abs().max((beta - ext.beta).abs());
    if xi != ext.xi {
        diff = f64::INFINITY;
    }
    if let Some((gm, dl)) = gamma_delta {
        diff = diff.max((gm - ext.gamma).abs()).max((dl - ext.delta).abs());
    }
    Ok(ProbeReport {
        epsilon: xi.exponent(),
        alpha,
        beta,
        gamma_delta,
        flag: gamma_delta.is_none().then_some(NO_GAMMA_DELTA),
        max_abs_diff: diff,
    })
}
