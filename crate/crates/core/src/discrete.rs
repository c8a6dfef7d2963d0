//! Word arithmetic in the discrete subgroup `D(θ)`.
//!
//! Every element of `D` has a unique normal form `A^Q B^M C^N` and is stored
//! as the integer triple `(Q, M, N)`. Multiplication follows from the 4×4
//! representation
//!
//! ```text
//! A^Q B^M C^N  ↦  [ θ^Q   0   θ^Q (M, N)ᵀ ]
//!                 [ 0 0   1   Q           ]
//!                 [ 0 0   0   1           ]
//! ```
//!
//! which gives `(Q₁, v₁)(Q₂, v₂) = (Q₁ + Q₂, θ^{−Q₂} v₁ + v₂)`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::intmat::{hcf_all, Mat2Z, Mat4Z, Theta, Vec2Z};
use crate::liegroup::{GroupPoint, S2Group};

/// The normal form `A^q B^m C^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct DElement {
    pub q: i64,
    pub m: i64,
    pub n: i64,
}

impl DElement {
    pub const IDENTITY: DElement = DElement::new(0, 0, 0);
    pub const A: DElement = DElement::new(1, 0, 0);
    pub const B: DElement = DElement::new(0, 1, 0);
    pub const C: DElement = DElement::new(0, 0, 1);

    pub const fn new(q: i64, m: i64, n: i64) -> Self {
        Self { q, m, n }
    }

    /// `B^v.x C^v.y`.
    pub const fn translation(v: Vec2Z) -> Self {
        Self::new(0, v.x, v.y)
    }

    /// The `(M, N)` exponents.
    pub fn planar(&self) -> Vec2Z {
        Vec2Z::new(self.m, self.n)
    }
}

impl fmt::Display for DElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A^{} B^{} C^{}", self.q, self.m, self.n)
    }
}

pub fn try_dmul(theta: &Theta, x: &DElement, y: &DElement) -> Result<DElement> {
    let q =
        x.q.checked_add(y.q)
            .ok_or(Error::Overflow("word product"))?;
    let v = theta
        .pow(-y.q)
        .checked_apply(x.planar())?
        .checked_add(y.planar())?;
    Ok(DElement::new(q, v.x, v.y))
}

/// Product of two words. Panics only if a coordinate leaves the `i64` range.
pub fn dmul(theta: &Theta, x: &DElement, y: &DElement) -> DElement {
    try_dmul(theta, x, y).expect("integer overflow in word product")
}

pub fn try_dinv(theta: &Theta, x: &DElement) -> Result<DElement> {
    let q = x.q.checked_neg().ok_or(Error::Overflow("word inverse"))?;
    let v = theta
        .pow(x.q)
        .checked_apply(x.planar())?
        .checked_scale(-1)?;
    Ok(DElement::new(q, v.x, v.y))
}

pub fn dinv(theta: &Theta, x: &DElement) -> DElement {
    try_dinv(theta, x).expect("integer overflow in word inverse")
}

/// `x^e` by repeated squaring.
pub fn try_dpow(theta: &Theta, x: &DElement, e: i64) -> Result<DElement> {
    let base = if e < 0 { try_dinv(theta, x)? } else { *x };
    let mut exp = e.unsigned_abs();
    let mut acc = DElement::IDENTITY;
    let mut sq = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = try_dmul(theta, &acc, &sq)?;
        }
        exp >>= 1;
        if exp > 0 {
            sq = try_dmul(theta, &sq, &sq)?;
        }
    }
    Ok(acc)
}

pub fn dpow(theta: &Theta, x: &DElement, e: i64) -> DElement {
    try_dpow(theta, x, e).expect("integer overflow in word power")
}

/// The commutator `x⁻¹ y⁻¹ x y`.
pub fn dcommutator(theta: &Theta, x: &DElement, y: &DElement) -> DElement {
    let xi = dinv(theta, x);
    let yi = dinv(theta, y);
    let lhs = dmul(theta, &xi, &yi);
    dmul(theta, &dmul(theta, &lhs, x), y)
}

/// The 4×4 integer matrix representing a word.
pub fn rmat(theta: &Theta, d: &DElement) -> Mat4Z {
    let t = theta.pow(d.q);
    let v = t * d.planar();
    Mat4Z([
        [t.a, t.b, 0, v.x],
        [t.c, t.d, 0, v.y],
        [0, 0, 1, d.q],
        [0, 0, 0, 1],
    ])
}

/// E-basis coordinates `(θ^Q (M, N)ᵀ, Q)` of a word.
pub fn embed(g: &S2Group, d: &DElement) -> GroupPoint {
    let v = g.theta().pow(d.q) * d.planar();
    GroupPoint::e(v.x as f64, v.y as f64, d.q as f64)
}

/// Three elements of `D` proposed as new generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorTriple {
    pub gens: [DElement; 3],
}

impl GeneratorTriple {
    pub const STANDARD: GeneratorTriple = GeneratorTriple {
        gens: [DElement::A, DElement::B, DElement::C],
    };

    pub const fn new(gens: [DElement; 3]) -> Self {
        Self { gens }
    }

    /// The A-exponents `(α₁, α₂, α₃)`.
    pub fn alphas(&self) -> [i64; 3] {
        self.gens.map(|g| g.q)
    }

    /// The B-exponents `(β₁, β₂, β₃)`.
    pub fn betas(&self) -> [i64; 3] {
        self.gens.map(|g| g.m)
    }

    /// The C-exponents `(γ₁, γ₂, γ₃)`.
    pub fn gammas(&self) -> [i64; 3] {
        self.gens.map(|g| g.n)
    }
}

/// A triple of the form `A B^{β₁} C^{γ₁}, B^{β₂} C^{γ₂}, B^{β₃} C^{γ₃}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReducedTriple {
    pub beta1: i64,
    pub gamma1: i64,
    /// `[[β₂, β₃], [γ₂, γ₃]]`; its columns are the B/C exponents of the
    /// second and third generators.
    pub exponents: Mat2Z,
}

impl ReducedTriple {
    pub fn to_triple(&self) -> GeneratorTriple {
        GeneratorTriple::new([
            DElement::new(1, self.beta1, self.gamma1),
            DElement::translation(self.exponents.column(0)),
            DElement::translation(self.exponents.column(1)),
        ])
    }
}

/// Nielsen-reduces a triple so that its first element has A-exponent 1 and
/// the other two have A-exponent 0.
///
/// Each step replaces `g_j` by `g_j g_i^{−q}` where `g_i` has the smallest
/// nonzero A-exponent, which is Euclid's algorithm on the A-exponents. The
/// generated subgroup is unchanged.
pub fn reduce_generators(theta: &Theta, t: &GeneratorTriple) -> Result<ReducedTriple> {
    let alphas = t.alphas();
    let h = hcf_all(&alphas)?;
    if h != 1 {
        return Err(Error::NotGenerating(format!(
            "hcf of the A-exponents {alphas:?} is {h}"
        )));
    }
    let mut gens = t.gens;
    loop {
        let pivot = (0..3)
            .filter(|&i| gens[i].q != 0)
            .min_by_key(|&i| gens[i].q.unsigned_abs())
            .expect("hcf 1 means some exponent is nonzero");
        let mut changed = false;
        for j in 0..3 {
            if j == pivot || gens[j].q == 0 {
                continue;
            }
            let quot = gens[j].q / gens[pivot].q;
            let step = try_dpow(theta, &gens[pivot], -quot)?;
            gens[j] = try_dmul(theta, &gens[j], &step)?;
            changed = true;
        }
        if !changed {
            break;
        }
    }
    let pivot = (0..3).find(|&i| gens[i].q != 0).expect("one exponent left");
    let mut first = gens[pivot];
    if first.q == -1 {
        first = try_dinv(theta, &first)?;
    }
    debug_assert_eq!(first.q, 1);
    let rest: Vec<DElement> = (0..3).filter(|&i| i != pivot).map(|i| gens[i]).collect();
    Ok(ReducedTriple {
        beta1: first.m,
        gamma1: first.n,
        exponents: Mat2Z::from_columns(rest[0].planar(), rest[1].planar()),
    })
}

/// `τ₁, τ₂` are the B/C exponents of the A-free generators; `τ₃ = θτ₁`,
/// `τ₄ = θτ₂`.
pub fn tau_vectors(theta: &Theta, r: &ReducedTriple) -> Result<[Vec2Z; 4]> {
    let t1 = r.exponents.column(0);
    let t2 = r.exponents.column(1);
    let th = theta.matrix();
    Ok([t1, t2, th.checked_apply(t1)?, th.checked_apply(t2)?])
}

/// Which generating condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// The A-exponents have a common factor, so A is not reachable.
    AlphaHcf { hcf: u64 },
    /// The first or second components of the τ vectors share a factor.
    TauComponents { first: u64, second: u64 },
    /// The 2×2 minors `τᵢ ∧ τⱼ` share a factor.
    TauWedges { hcf: u64 },
}

impl Violation {
    /// Short machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            Violation::AlphaHcf { .. } => "hcf(alpha)",
            Violation::TauComponents { .. } => "5.11",
            Violation::TauWedges { .. } => "5.12",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AlphaHcf { hcf } => write!(f, "hcf of the A-exponents is {hcf}"),
            Violation::TauComponents { first, second } => write!(
                f,
                "hcf of tau components is ({first}, {second}), expected (1, 1)"
            ),
            Violation::TauWedges { hcf } => write!(f, "hcf of tau wedges is {hcf}"),
        }
    }
}

/// Outcome of the generating-set test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generation {
    Yes {
        reduced: ReducedTriple,
        taus: [Vec2Z; 4],
    },
    No {
        violation: Violation,
        reduced: Option<ReducedTriple>,
        taus: Option<[Vec2Z; 4]>,
    },
}

impl Generation {
    pub fn generates(&self) -> bool {
        matches!(self, Generation::Yes { .. })
    }

    pub fn violation(&self) -> Option<Violation> {
        match self {
            Generation::Yes { .. } => None,
            Generation::No { violation, .. } => Some(*violation),
        }
    }
}

/// Decides whether a triple generates all of `D(θ)`.
pub fn generates_d(theta: &Theta, t: &GeneratorTriple) -> Result<Generation> {
    let alpha_hcf = hcf_all(&t.alphas())?;
    if alpha_hcf != 1 {
        return Ok(Generation::No {
            violation: Violation::AlphaHcf { hcf: alpha_hcf },
            reduced: None,
            taus: None,
        });
    }
    let reduced = reduce_generators(theta, t)?;
    let taus = tau_vectors(theta, &reduced)?;
    let first = hcf_all(&taus.map(|v| v.x))?;
    let second = hcf_all(&taus.map(|v| v.y))?;
    if first != 1 || second != 1 {
        return Ok(Generation::No {
            violation: Violation::TauComponents { first, second },
            reduced: Some(reduced),
            taus: Some(taus),
        });
    }
    let mut wedges = Vec::with_capacity(6);
    for i in 0..4 {
        for j in i + 1..4 {
            wedges.push(taus[i].wedge(taus[j])?);
        }
    }
    let w = hcf_all(&wedges)?;
    if w != 1 {
        return Ok(Generation::No {
            violation: Violation::TauWedges { hcf: w },
            reduced: Some(reduced),
            taus: Some(taus),
        });
    }
    Ok(Generation::Yes { reduced, taus })
}

/// All elements expressible as words of length at most `radius` in `gens`
/// and their inverses. This can confirm membership in the generated
/// subgroup but never refute it.
pub fn word_ball(theta: &Theta, gens: &[DElement], radius: usize) -> HashSet<DElement> {
    let mut letters: Vec<DElement> = Vec::with_capacity(2 * gens.len());
    for g in gens {
        letters.push(*g);
        letters.push(dinv(theta, g));
    }
    let mut seen = HashSet::from([DElement::IDENTITY]);
    let mut frontier = VecDeque::from([(DElement::IDENTITY, 0usize)]);
    while let Some((x, depth)) = frontier.pop_front() {
        if depth == radius {
            continue;
        }
        for l in &letters {
            let y = dmul(theta, &x, l);
            if seen.insert(y) {
                frontier.push_back((y, depth + 1));
            }
        }
    }
    seen
}
