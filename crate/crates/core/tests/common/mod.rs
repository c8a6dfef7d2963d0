//! Independent oracles shared by the integration tests and the acceptance
//! harness. Nothing here calls the closed forms it is used to check.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use nalgebra::Vector3;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use s2sym::discrete::{dinv, dmul, rmat, DElement, GeneratorTriple};
use s2sym::intmat::{Mat2Z, Mat4Z, Theta};
use s2sym::liegroup::{Basis, GroupPoint, S2Group};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The three non-scalar test matrices, traces 0, −1, 1.
pub fn nonscalar_thetas() -> Vec<Theta> {
    [
        Mat2Z::new(0, 1, -1, 0),
        Mat2Z::new(0, 1, -1, -1),
        Mat2Z::new(1, 1, -1, 0),
    ]
    .into_iter()
    .map(|m| Theta::new(m).unwrap())
    .collect()
}

/// The non-scalar matrices plus −I.
pub fn all_thetas() -> Vec<Theta> {
    let mut v = nonscalar_thetas();
    v.push(Theta::new(Mat2Z::NEG_IDENTITY).unwrap());
    v
}

/// Plain repeated multiplication, without the library's exponent reduction.
pub fn naive_pow(m: &Mat2Z, e: u32) -> Mat2Z {
    (0..e).fold(Mat2Z::IDENTITY, |acc, _| acc * *m)
}

/// Every χ with entries in `[−bound, bound]`, det ±1, and `θχ = χθ`.
pub fn brute_centralizer(theta: &Mat2Z, bound: i64) -> HashSet<Mat2Z> {
    brute(bound, |chi| *theta * *chi == *chi * *theta)
}

/// Every χ with entries in `[−bound, bound]`, det ±1, and
/// `χθχ⁻¹ = θ^{±1}`, checked as `χθ = θ^{±1}χ`.
pub fn brute_reversing(theta: &Mat2Z, bound: i64) -> HashSet<Mat2Z> {
    let inv = Mat2Z::new(theta.d, -theta.b, -theta.c, theta.a);
    brute(bound, |chi| {
        *chi * *theta == *theta * *chi || *chi * *theta == inv * *chi
    })
}

fn brute(bound: i64, keep: impl Fn(&Mat2Z) -> bool) -> HashSet<Mat2Z> {
    let mut out = HashSet::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                for d in -bound..=bound {
                    let m = Mat2Z::new(a, b, c, d);
                    let det = a * d - b * c;
                    if (det == 1 || det == -1) && keep(&m) {
                        out.insert(m);
                    }
                }
            }
        }
    }
    out
}

/// `t ↦ e^{tu}` integrated as a flow with classical RK4. The velocity
/// field `x ↦ ψ(x, u) − x` is the left-invariant field through `u`; it is
/// exact because ψ is affine in its second argument.
pub fn rk4_exp(g: &S2Group, u: &GroupPoint, steps: usize) -> GroupPoint {
    let field = |x: Vector3<f64>| -> Vector3<f64> {
        let p = GroupPoint {
            coords: x,
            basis: u.basis,
        };
        g.compose(&p, u).unwrap().coords - x
    };
    let h = 1.0 / steps as f64;
    let mut x = Vector3::zeros();
    for _ in 0..steps {
        let k1 = field(x);
        let k2 = field(x + k1 * (h / 2.0));
        let k3 = field(x + k2 * (h / 2.0));
        let k4 = field(x + k3 * h);
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    GroupPoint {
        coords: x,
        basis: u.basis,
    }
}

pub fn random_point(rng: &mut impl Rng, basis: Basis, scale: f64) -> GroupPoint {
    GroupPoint::new(
        basis,
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

pub fn random_word(rng: &mut impl Rng, bound: i64) -> DElement {
    DElement::new(
        rng.gen_range(-bound..=bound),
        rng.gen_range(-bound..=bound),
        rng.gen_range(-bound..=bound),
    )
}

/// A generating triple obtained from `(A, B, C)` by random Nielsen moves.
/// Each move keeps the generated subgroup.
pub fn random_nielsen_triple(rng: &mut impl Rng, theta: &Theta, moves: usize) -> GeneratorTriple {
    let mut g = [DElement::A, DElement::B, DElement::C];
    for _ in 0..moves {
        let i = rng.gen_range(0..3);
        let j = (i + rng.gen_range(1..3)) % 3;
        match rng.gen_range(0..4) {
            0 => g[i] = dmul(theta, &g[i], &g[j]),
            1 => g[i] = dmul(theta, &g[i], &dinv(theta, &g[j])),
            2 => g[i] = dmul(theta, &g[j], &g[i]),
            _ => g[i] = dinv(theta, &g[i]),
        }
    }
    GeneratorTriple::new(g)
}

/// Breadth-first search over the 4×4 matrix images of words of length at
/// most `radius`, returning which of `targets` were reached. Uses only
/// `rmat` and integer matrix products, not the word product.
pub fn bfs_reaches(
    theta: &Theta,
    gens: &[DElement],
    targets: &[DElement],
    radius: usize,
) -> Vec<bool> {
    let mut letters: Vec<Mat4Z> = Vec::new();
    for g in gens {
        let m = rmat(theta, g);
        letters.push(m);
        letters.push(rmat(theta, &dinv(theta, g)));
    }
    let wanted: Vec<Mat4Z> = targets.iter().map(|t| rmat(theta, t)).collect();
    let mut found = vec![false; targets.len()];
    let mut seen = HashSet::from([Mat4Z::identity()]);
    let mut queue = VecDeque::from([(Mat4Z::identity(), 0usize)]);
    while let Some((m, depth)) = queue.pop_front() {
        for (f, w) in found.iter_mut().zip(&wanted) {
            if m == *w {
                *f = true;
            }
        }
        if found.iter().all(|&f| f) || depth == radius {
            if found.iter().all(|&f| f) {
                break;
            }
            continue;
        }
        for l in &letters {
            let next = m * *l;
            if seen.insert(next) {
                queue.push_back((next, depth + 1));
            }
        }
    }
    found
}
