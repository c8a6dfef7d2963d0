//! The centralizer and reversing symmetry groups of θ in GL₂(ℤ), automorphisms
//! of `D(θ)`, and the elastic/inelastic classification of changes of
//! generators.

use std::fmt;
use std::ops::RangeInclusive;

use crate::discrete::{
    generates_d, try_dmul, try_dpow, DElement, Generation, GeneratorTriple, Violation,
};
use crate::error::{Error, Result};
use crate::extension::extend;
use crate::intmat::{hcf, Mat2Z, Sign, Theta, TraceClass, Vec2Z};
use crate::liegroup::make_group;

/// Half-width of the coefficient box searched for a reversing symmetry.
pub const LAMBDA_SEARCH_BOUND: i64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupLabel {
    C4,
    C6,
    D4,
    D6,
    GL2Z,
}

impl GroupLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupLabel::C4 => "C4",
            GroupLabel::C6 => "C6",
            GroupLabel::D4 => "D4",
            GroupLabel::D6 => "D6",
            GroupLabel::GL2Z => "GL2Z",
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Finite(Vec<Mat2Z>),
    /// All of GL₂(ℤ); only happens for θ = −I.
    AllGL2Z,
}

/// A subgroup of GL₂(ℤ): either an explicit finite list or all of GL₂(ℤ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryGroup {
    pub kind: GroupKind,
    pub label: GroupLabel,
}

impl SymmetryGroup {
    fn finite(elements: Vec<Mat2Z>, label: GroupLabel) -> Self {
        Self {
            kind: GroupKind::Finite(elements),
            label,
        }
    }

    fn all() -> Self {
        Self {
            kind: GroupKind::AllGL2Z,
            label: GroupLabel::GL2Z,
        }
    }

    /// The elements, or `None` for GL₂(ℤ).
    pub fn elements(&self) -> Option<&[Mat2Z]> {
        match &self.kind {
            GroupKind::Finite(v) => Some(v),
            GroupKind::AllGL2Z => None,
        }
    }

    pub fn order(&self) -> Option<usize> {
        self.elements().map(<[Mat2Z]>::len)
    }

    pub fn is_all(&self) -> bool {
        self.kind == GroupKind::AllGL2Z
    }

    /// Exact membership.
    pub fn contains(&self, m: &Mat2Z) -> bool {
        match &self.kind {
            GroupKind::Finite(v) => v.contains(m),
            GroupKind::AllGL2Z => m.is_unimodular(),
        }
    }

    /// Identity, products and inverses all stay inside. Always true for
    /// GL₂(ℤ).
    pub fn is_closed(&self) -> bool {
        let Some(els) = self.elements() else {
            return true;
        };
        if !els.contains(&Mat2Z::IDENTITY) {
            return false;
        }
        els.iter().all(|x| {
            x.inverse().map(|i| els.contains(&i)).unwrap_or(false)
                && els
                    .iter()
                    .all(|y| x.checked_mul(y).map(|p| els.contains(&p)).unwrap_or(false))
        })
    }

    /// The finite elements, or the unimodular matrices with entries bounded
    /// by `bound` when the group is GL₂(ℤ).
    pub fn sample(&self, bound: i64) -> Vec<Mat2Z> {
        match &self.kind {
            GroupKind::Finite(v) => v.clone(),
            GroupKind::AllGL2Z => unimodular_in_box(bound),
        }
    }
}

/// All matrices in GL₂(ℤ) with entries in `[−bound, bound]`, in
/// lexicographic order of `(a, b, c, d)`.
pub fn unimodular_in_box(bound: i64) -> Vec<Mat2Z> {
    let r = -bound..=bound;
    let mut out = Vec::new();
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    let m = Mat2Z::new(a, b, c, d);
                    if m.is_unimodular() {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// S(θ), the centralizer of θ in GL₂(ℤ).
pub fn centralizer(theta: &Theta) -> SymmetryGroup {
    let powers = match theta.class() {
        TraceClass::MinusTwo => return SymmetryGroup::all(),
        TraceClass::Zero => 2,
        TraceClass::MinusOne | TraceClass::One => 3,
    };
    let mut els = Vec::with_capacity(2 * powers);
    for m in 0..powers as i64 {
        let t = theta.pow(m);
        els.push(t);
        els.push(-t);
    }
    let label = if powers == 2 {
        GroupLabel::C4
    } else {
        GroupLabel::C6
    };
    SymmetryGroup::finite(els, label)
}

/// A matrix Λ ∈ GL₂(ℤ) with ΛθΛ⁻¹ = θ⁻¹.
///
/// The solutions of `Λθ = θ⁻¹Λ` form a rank-2 lattice. The two free
/// coordinates are searched over `[−10, 10]²`; among unimodular solutions the
/// one with smallest ℓ¹ norm wins, ties going to the lexicographically
/// largest `(a, b, c, d)`. For the quarter turn this is `diag(1, −1)`.
pub fn reversing_symmetry(theta: &Theta) -> Result<Mat2Z> {
    let flip = Mat2Z::new(1, 0, 0, -1);
    if theta.is_scalar() {
        return Ok(flip);
    }
    let t = theta.matrix();
    let ti = t.inverse()?;
    // column j is the image of the j-th unit matrix under Λ ↦ Λθ − θ⁻¹Λ
    let mut sys = [[0i128; 4]; 4];
    for j in 0..4 {
        let mut e = [0i64; 4];
        e[j] = 1;
        let unit = Mat2Z::new(e[0], e[1], e[2], e[3]);
        let img = unit
            .checked_mul(&t)?
            .checked_add(&-(ti.checked_mul(&unit)?))?;
        for (i, v) in img.entries().into_iter().enumerate() {
            sys[i][j] = v as i128;
        }
    }
    let (rows, pivots) = integer_rref(sys);
    let free: Vec<usize> = (0..4).filter(|c| !pivots.contains(c)).collect();
    if free.len() != 2 {
        return Err(Error::Inconsistent(format!(
            "reversing-symmetry system has {} free coordinates, expected 2",
            free.len()
        )));
    }
    let mut best: Option<(i64, Mat2Z)> = None;
    let r = -LAMBDA_SEARCH_BOUND..=LAMBDA_SEARCH_BOUND;
    for f0 in r.clone() {
        'cand: for f1 in r.clone() {
            let mut x = [0i128; 4];
            x[free[0]] = f0 as i128;
            x[free[1]] = f1 as i128;
            for (row, &p) in rows.iter().zip(&pivots) {
                let rest: i128 = free.iter().map(|&c| row[c] * x[c]).sum();
                if rest % row[p] != 0 {
                    continue 'cand;
                }
                x[p] = -rest / row[p];
            }
            let Ok(e) = x
                .map(i64::try_from)
                .into_iter()
                .collect::<std::result::Result<Vec<_>, _>>()
            else {
                continue;
            };
            let m = Mat2Z::new(e[0], e[1], e[2], e[3]);
            if !m.is_unimodular() {
                continue;
            }
            let norm: i64 = e.iter().map(|v| v.abs()).sum();
            let better = match &best {
                None => true,
                Some((bn, bm)) => norm < *bn || (norm == *bn && m > *bm),
            };
            if better {
                best = Some((norm, m));
            }
        }
    }
    let (_, lambda) = best.ok_or_else(|| {
        Error::Inconsistent("no unimodular reversing symmetry in the search box".into())
    })?;
    debug_assert_eq!(lambda * t * lambda.inverse()?, ti);
    Ok(lambda)
}

/// Gauss–Jordan over the integers. Returns the nonzero rows and their pivot
/// columns; every pivot column is zero outside its own row.
#[allow(clippy::needless_range_loop)]
fn integer_rref(mut m: [[i128; 4]; 4]) -> (Vec<[i128; 4]>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..4 {
        let Some(p) = (r..4).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..4 {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for j in 0..4 {
                    m[i][j] = a * m[i][j] - b * m[r][j];
                }
                let g = m[i].iter().fold(0u64, |g, &v| hcf(g as i64, v as i64));
                if g > 1 {
                    for v in m[i].iter_mut() {
                        *v /= g as i128;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == 4 {
            break;
        }
    }
    (m[..r].to_vec(), pivots)
}

/// R(θ), the reversing symmetry group: `S(θ) ∪ Λ S(θ)`.
pub fn reversing_group(theta: &Theta) -> Result<SymmetryGroup> {
    let s = centralizer(theta);
    let Some(els) = s.elements() else {
        return Ok(SymmetryGroup::all());
    };
    let lambda = reversing_symmetry(theta)?;
    let mut all = els.to_vec();
    for x in els {
        all.push(lambda.checked_mul(x)?);
    }
    let label = if els.len() == 4 {
        GroupLabel::D4
    } else {
        GroupLabel::D6
    };
    Ok(SymmetryGroup::finite(all, label))
}

/// Parameters of an automorphism of `D(θ)`:
/// `A ↦ A^ζ B^{β₁} C^{γ₁}`, `B ↦ B^{χ₁₁} C^{χ₂₁}`, `C ↦ B^{χ₁₂} C^{χ₂₂}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DAutomorphism {
    pub zeta: Sign,
    pub chi: Mat2Z,
    pub beta1: i64,
    pub gamma1: i64,
}

impl DAutomorphism {
    /// Validated constructor.
    pub fn new(theta: &Theta, zeta: Sign, chi: Mat2Z, beta1: i64, gamma1: i64) -> Result<Self> {
        let phi = Self {
            zeta,
            chi,
            beta1,
            gamma1,
        };
        phi.validate(theta)?;
        Ok(phi)
    }

    pub fn identity() -> Self {
        Self {
            zeta: Sign::Plus,
            chi: Mat2Z::IDENTITY,
            beta1: 0,
            gamma1: 0,
        }
    }

    /// Checks `det χ = ±1` and `θ^ζ χ = χ θ`.
    pub fn validate(&self, theta: &Theta) -> Result<()> {
        if !self.chi.is_unimodular() {
            return Err(Error::NotAutomorphism(format!(
                "det chi = {} is not ±1",
                self.chi.det()?
            )));
        }
        let lhs = theta.pow(self.zeta.value()).checked_mul(&self.chi)?;
        let rhs = self.chi.checked_mul(&theta.matrix())?;
        if lhs != rhs {
            return Err(Error::NotAutomorphism(format!(
                "theta^zeta chi != chi theta (zeta = {})",
                self.zeta.value()
            )));
        }
        Ok(())
    }

    /// `(β₁, γ₁)`.
    pub fn shift(&self) -> Vec2Z {
        Vec2Z::new(self.beta1, self.gamma1)
    }

    /// The images of `A`, `B`, `C`.
    pub fn images(&self) -> [DElement; 3] {
        [
            DElement::new(self.zeta.value(), self.beta1, self.gamma1),
            DElement::translation(self.chi.column(0)),
            DElement::translation(self.chi.column(1)),
        ]
    }

    pub fn to_triple(&self) -> GeneratorTriple {
        GeneratorTriple::new(self.images())
    }

    /// The inverse automorphism: `ζ` is kept, `χ` is inverted and
    /// `A ↦ A^ζ B^{t′}` with `t′ = −χ⁻¹ v` where `φ(A^ζ) = A B^{v₁} C^{v₂}`.
    pub fn inverse(&self, theta: &Theta) -> Result<DAutomorphism> {
        let w = try_dpow(theta, &self.images()[0], self.zeta.value())?;
        debug_assert_eq!(w.q, 1);
        let chi_inv = self.chi.inverse()?;
        let t = chi_inv.checked_apply(w.planar())?.checked_scale(-1)?;
        DAutomorphism::new(theta, self.zeta, chi_inv, t.x, t.y)
    }
}

impl fmt::Display for DAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "zeta={} chi={} beta1={} gamma1={}",
            self.zeta.value(),
            self.chi,
            self.beta1,
            self.gamma1
        )
    }
}

/// Reads a triple as the images of `A, B, C` and checks the automorphism
/// conditions, returning the failed condition on rejection.
pub fn d_automorphism_check(
    theta: &Theta,
    t: &GeneratorTriple,
) -> std::result::Result<DAutomorphism, String> {
    let [a1, a2, a3] = t.alphas();
    if a2 != 0 || a3 != 0 {
        return Err("φ(B), φ(C) do not commute".into());
    }
    let zeta = Sign::from_unit(a1).ok_or_else(|| format!("A-exponent of φ(A) is {a1}, not ±1"))?;
    let [g1, g2, g3] = t.gens;
    let phi = DAutomorphism {
        zeta,
        chi: Mat2Z::from_columns(g2.planar(), g3.planar()),
        beta1: g1.m,
        gamma1: g1.n,
    };
    phi.validate(theta).map_err(|e| match e {
        Error::NotAutomorphism(s) => s,
        other => other.to_string(),
    })?;
    Ok(phi)
}

/// The automorphism parameters of a triple, if it defines one.
pub fn as_d_automorphism(theta: &Theta, t: &GeneratorTriple) -> Option<DAutomorphism> {
    d_automorphism_check(theta, t).ok()
}

/// `φ(A)^Q φ(B)^M φ(C)^N`, by word expansion.
pub fn apply_d_automorphism(theta: &Theta, phi: &DAutomorphism, d: &DElement) -> Result<DElement> {
    phi.validate(theta)?;
    let [ia, ib, ic] = phi.images();
    let x = try_dpow(theta, &ia, d.q)?;
    let y = try_dpow(theta, &ib, d.m)?;
    let z = try_dpow(theta, &ic, d.n)?;
    try_dmul(theta, &try_dmul(theta, &x, &y)?, &z)
}

/// The closed form `A^{Qζ} B^{s + Mβ₂ + Nβ₃} C^{t + Mγ₂ + Nγ₃}` with
/// `(s, t) = Σ_{j=0}^{Q−1} θ^{−jζ} (β₁, γ₁)`. Only defined for `Q ≥ 0`.
pub fn apply_d_automorphism_closed_form(
    theta: &Theta,
    phi: &DAutomorphism,
    d: &DElement,
) -> Result<DElement> {
    if d.q < 0 {
        return Err(Error::Usage("closed form needs Q >= 0".into()));
    }
    let mut st = Vec2Z::ZERO;
    for j in 0..d.q {
        let step = theta
            .pow(-j * phi.zeta.value())
            .checked_apply(phi.shift())?;
        st = st.checked_add(step)?;
    }
    let v = st.checked_add(phi.chi.checked_apply(d.planar())?)?;
    let q =
        d.q.checked_mul(phi.zeta.value())
            .ok_or(Error::Overflow("closed form"))?;
    Ok(DElement::new(q, v.x, v.y))
}

/// Why a symmetry is inelastic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InelasticReason {
    /// The change of generators is not an automorphism of `D`.
    NotDAutomorphism(String),
    /// An automorphism of `D` with no extension to S₂.
    NoExtension {
        automorphism: DAutomorphism,
        reason: String,
    },
}

impl InelasticReason {
    /// `"2(a)"` or `"2(b)"`.
    pub fn class_code(&self) -> &'static str {
        match self {
            InelasticReason::NotDAutomorphism(_) => "2(a)",
            InelasticReason::NoExtension { .. } => "2(b)",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            InelasticReason::NotDAutomorphism(s) => s,
            InelasticReason::NoExtension { reason, .. } => reason,
        }
    }
}

impl fmt::Display for InelasticReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.message(), self.class_code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// The triple does not generate `D`, so it is not a symmetry at all.
    NotASymmetry(Violation),
    Elastic(DAutomorphism),
    Inelastic(InelasticReason),
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::NotASymmetry(_) => "not_a_symmetry",
            Classification::Elastic(_) => "elastic",
            Classification::Inelastic(_) => "inelastic",
        }
    }
}

/// Classifies a change of generators.
///
/// Non-generating triples are reported separately. An automorphism of `D` is
/// only called elastic after its extension to S₂ (on the first branch) has
/// actually been computed.
pub fn classify_symmetry(theta: &Theta, t: &GeneratorTriple) -> Result<Classification> {
    if let Generation::No { violation, .. } = generates_d(theta, t)? {
        return Ok(Classification::NotASymmetry(violation));
    }
    let phi = match d_automorphism_check(theta, t) {
        Ok(phi) => phi,
        Err(reason) => {
            return Ok(Classification::Inelastic(
                InelasticReason::NotDAutomorphism(reason),
            ))
        }
    };
    let g = make_group(theta, 1)?;
    match extend(&g, &phi) {
        Ok(_) => Ok(Classification::Elastic(phi)),
        Err(Error::NoExtension(reason)) => {
            Ok(Classification::Inelastic(InelasticReason::NoExtension {
                automorphism: phi,
                reason,
            }))
        }
        Err(e) => Err(e),
    }
}

/// Signed permutation matrices: the orthogonal part of GL₂(ℤ).
pub fn orthogonal_gl2z() -> Vec<Mat2Z> {
    let mut out = Vec::with_capacity(8);
    for s in [1, -1] {
        for t in [1, -1] {
            out.push(Mat2Z::new(s, 0, 0, t));
            out.push(Mat2Z::new(0, s, t, 0));
        }
    }
    out
}

fn cross_shifts(
    pairs: Vec<(Sign, Mat2Z)>,
    beta1: RangeInclusive<i64>,
    gamma1: RangeInclusive<i64>,
) -> Vec<DAutomorphism> {
    let mut out = Vec::new();
    for (zeta, chi) in pairs {
        for b in beta1.clone() {
            for c in gamma1.clone() {
                out.push(DAutomorphism {
                    zeta,
                    chi,
                    beta1: b,
                    gamma1: c,
                });
            }
        }
    }
    out
}

/// Every elastic automorphism with `(β₁, γ₁)` in the given box.
///
/// For θ ≠ −I this is `R(θ)` with `ζ = +1` on `S(θ)` and `ζ = −1` on the
/// reversing coset. For θ = −I only the eight signed permutations extend,
/// with `ζ = det χ`.
pub fn enumerate_elastic(
    theta: &Theta,
    beta1: RangeInclusive<i64>,
    gamma1: RangeInclusive<i64>,
) -> Result<Vec<DAutomorphism>> {
    let pairs: Vec<(Sign, Mat2Z)> = if theta.is_scalar() {
        orthogonal_gl2z()
            .into_iter()
            .map(|chi| Ok((Sign::from_unit(chi.det()?).expect("unimodular"), chi)))
            .collect::<Result<_>>()?
    } else {
        let s = centralizer(theta);
        let r = reversing_group(theta)?;
        r.elements()
            .expect("finite for non-scalar theta")
            .iter()
            .map(|chi| {
                let zeta = if s.contains(chi) {
                    Sign::Plus
                } else {
                    Sign::Minus
                };
                (zeta, *chi)
            })
            .collect()
    };
    Ok(cross_shifts(pairs, beta1, gamma1))
}

/// Every automorphism of `D` with `(β₁, γ₁)` in the given box, elastic or
/// not. `entry_bound` limits the entries of χ when θ = −I and is ignored
/// otherwise.
pub fn enumerate_d_automorphisms(
    theta: &Theta,
    entry_bound: i64,
    beta1: RangeInclusive<i64>,
    gamma1: RangeInclusive<i64>,
) -> Result<Vec<DAutomorphism>> {
    if !theta.is_scalar() {
        return enumerate_elastic(theta, beta1, gamma1);
    }
    let pairs = unimodular_in_box(entry_bound)
        .into_iter()
        .flat_map(|chi| [(Sign::Plus, chi), (Sign::Minus, chi)])
        .collect();
    Ok(cross_shifts(pairs, beta1, gamma1))
}
