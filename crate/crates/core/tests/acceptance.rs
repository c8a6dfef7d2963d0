//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the output reads as a checklist; exits nonzero on any failure.

mod common;

use std::collections::HashSet;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use common::*;
use s2sym::autos::apply_group_auto;
use s2sym::discrete::{dmul, generates_d, DElement, GeneratorTriple, Violation};
use s2sym::extension::{extend, r_eps, uniqueness_probe, verify_extension};
use s2sym::intmat::{Mat2Z, Theta};
use s2sym::liegroup::{admissible_branches, levi_civita, make_group, Basis, GroupPoint};
use s2sym::symmetry::{
    apply_d_automorphism, centralizer, enumerate_elastic, reversing_group, GroupLabel,
};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn quarter() -> Theta {
    Theta::from_entries(0, 1, -1, 0).unwrap()
}

fn centralizer_c4() -> Outcome {
    let t = quarter();
    let s = centralizer(&t);
    let m = t.matrix();
    let expected: HashSet<Mat2Z> = [Mat2Z::IDENTITY, -Mat2Z::IDENTITY, m, -m].into();
    let got: HashSet<Mat2Z> = s
        .elements()
        .ok_or("centralizer is infinite")?
        .iter()
        .copied()
        .collect();
    ensure(got == expected, || format!("S(θ) = {got:?}"))?;
    ensure(s.label == GroupLabel::C4, || format!("label {}", s.label))?;
    let brute = brute_centralizer(&m, 5);
    ensure(brute == expected, || {
        format!("brute force found {} elements", brute.len())
    })?;
    Ok(format!(
        "|S(θ)| = {}, brute force over [-5,5]^4 agrees",
        got.len()
    ))
}

fn centralizer_c6() -> Outcome {
    let mut notes = Vec::new();
    for t in &nonscalar_thetas()[1..] {
        let m = t.matrix();
        let m2 = m * m;
        let expected: HashSet<Mat2Z> = [Mat2Z::IDENTITY, -Mat2Z::IDENTITY, m, -m, m2, -m2].into();
        let s = centralizer(t);
        let got: HashSet<Mat2Z> = s.elements().ok_or("infinite")?.iter().copied().collect();
        ensure(got == expected && s.order() == Some(6), || {
            format!("{t}: S(θ) = {got:?}")
        })?;
        ensure(s.label == GroupLabel::C6, || format!("label {}", s.label))?;
        ensure(brute_centralizer(&m, 5) == expected, || {
            format!("{t}: brute force disagrees")
        })?;
        notes.push(format!("tr {}: 6", t.trace()));
    }
    Ok(format!("{}; brute force agrees", notes.join(", ")))
}

fn reversing_groups() -> Outcome {
    let mut notes = Vec::new();
    for t in nonscalar_thetas() {
        let r = reversing_group(&t).map_err(|e| e.to_string())?;
        let s = centralizer(&t);
        let want = if t.trace() == 0 { 8 } else { 12 };
        ensure(r.order() == Some(want), || {
            format!("{t}: |R| = {:?}", r.order())
        })?;
        ensure(r.is_closed(), || format!("{t}: R not closed"))?;
        let rs: HashSet<Mat2Z> = r.elements().unwrap().iter().copied().collect();
        ensure(rs == brute_reversing(&t.matrix(), 5), || {
            format!("{t}: brute force disagrees")
        })?;
        let ss = s.elements().unwrap();
        ensure(ss.iter().all(|x| rs.contains(x)), || "S ⊄ R".into())?;
        // normality: x s x⁻¹ ∈ S for all x ∈ R, s ∈ S
        for x in &rs {
            let xi = x.inverse().unwrap();
            ensure(ss.iter().all(|y| s.contains(&(*x * *y * xi))), || {
                format!("{t}: S not normal")
            })?;
        }
        ensure(rs.len() == 2 * ss.len(), || "index is not 2".into())?;
        notes.push(format!("tr {}: {} ({})", t.trace(), want, r.label));
    }
    Ok(format!("{}; closed, S normal of index 2", notes.join(", ")))
}

fn finite_order() -> Outcome {
    let mut notes = Vec::new();
    for t in all_thetas() {
        let p = match t.trace() {
            -2 => 2,
            -1 => 3,
            0 => 4,
            1 => 6,
            tr => return Err(format!("unexpected trace {tr}")),
        };
        let m = t.matrix();
        ensure(naive_pow(&m, p) == Mat2Z::IDENTITY, || {
            format!("{t}^{p} != I")
        })?;
        ensure((1..p).all(|j| naive_pow(&m, j) != Mat2Z::IDENTITY), || {
            format!("{t}: smaller order")
        })?;
        ensure(t.order() == p, || {
            format!("{t}: library order {}", t.order())
        })?;
        notes.push(format!("tr {} → p = {p}", t.trace()));
    }
    Ok(notes.join(", "))
}

fn extension_theorem() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for t in nonscalar_thetas() {
        for n in admissible_branches(&t, 2) {
            let g = make_group(&t, n).map_err(|e| e.to_string())?;
            for phi in enumerate_elastic(&t, -3..=3, -3..=3).map_err(|e| e.to_string())? {
                let ext = extend(&g, &phi).map_err(|e| format!("{phi}: {e}"))?;
                let rep = verify_extension(&g, &phi, &ext, 3).map_err(|e| e.to_string())?;
                ensure(rep.max_discrepancy < 1e-9, || {
                    format!("{t} n={n} {phi}: discrepancy {:e}", rep.max_discrepancy)
                })?;
                worst = worst.max(rep.max_discrepancy);
                count += 1;
            }
        }
    }
    Ok(format!(
        "{count} automorphisms × 343 words, max discrepancy {worst:.2e}"
    ))
}

fn uniqueness() -> Outcome {
    let mut rng = rng(6);
    let mut worst = 0.0f64;
    let thetas = nonscalar_thetas();
    for _ in 0..100 {
        let t = thetas.choose(&mut rng).unwrap();
        let branches = admissible_branches(t, 2);
        let g = make_group(t, *branches.choose(&mut rng).unwrap()).map_err(|e| e.to_string())?;
        let autos = enumerate_elastic(t, 0..=0, 0..=0).map_err(|e| e.to_string())?;
        let mut phi = *autos.choose(&mut rng).unwrap();
        phi.beta1 = rng.gen_range(-5..=5);
        phi.gamma1 = rng.gen_range(-5..=5);
        let probe = uniqueness_probe(&g, &phi).map_err(|e| e.to_string())?;
        ensure(probe.flag.is_none(), || format!("{phi}: {:?}", probe.flag))?;
        ensure(probe.max_abs_diff < 1e-9, || {
            format!("{phi}: |Δ| = {:e}", probe.max_abs_diff)
        })?;
        worst = worst.max(probe.max_abs_diff);
    }
    Ok(format!("100 random automorphisms, max |Δ| {worst:.2e}"))
}

fn homomorphisms() -> Outcome {
    let mut rng = rng(7);
    let thetas = nonscalar_thetas();
    let (mut assoc, mut hom) = (0.0f64, 0.0f64);
    for i in 0..1000 {
        let t = &thetas[i % 3];
        let n = admissible_branches(t, 2)[i % 2];
        let g = make_group(t, n).unwrap();
        let basis = if i % 2 == 0 { Basis::E } else { Basis::F };
        let [x, y, z] = [0, 1, 2].map(|_| random_point(&mut rng, basis, 3.0));
        let l = g.compose(&g.compose(&x, &y).unwrap(), &z).unwrap();
        let r = g.compose(&x, &g.compose(&y, &z).unwrap()).unwrap();
        assoc = assoc.max(l.distance(&r).unwrap());

        let autos = enumerate_elastic(t, -2..=2, -2..=2).unwrap();
        let phi = autos.choose(&mut rng).unwrap();
        let ext = extend(&g, phi).unwrap();
        let fx = apply_group_auto(&g, &ext, &x).unwrap();
        let fy = apply_group_auto(&g, &ext, &y).unwrap();
        let lhs = apply_group_auto(&g, &ext, &g.compose(&x, &y).unwrap()).unwrap();
        let rhs = g.compose(&fx, &fy).unwrap();
        hom = hom.max(lhs.distance(&rhs).unwrap() / (1.0 + lhs.coords.amax()));

        let (d1, d2) = (random_word(&mut rng, 6), random_word(&mut rng, 6));
        let img = |d: &DElement| apply_d_automorphism(t, phi, d).unwrap();
        ensure(
            img(&dmul(t, &d1, &d2)) == dmul(t, &img(&d1), &img(&d2)),
            || format!("{t} {phi}: φ(d1 d2) != φ(d1) φ(d2) for {d1}, {d2}"),
        )?;
    }
    ensure(assoc < 1e-9, || format!("associativity error {assoc:e}"))?;
    ensure(hom < 1e-9, || format!("homomorphism error {hom:e}"))?;
    Ok(format!(
        "1000 cases each: assoc {assoc:.1e}, φ̃ hom {hom:.1e}, φ_D exact"
    ))
}

fn exponential() -> Outcome {
    let mut rng = rng(8);
    let mut worst = 0.0f64;
    let thetas = all_thetas();
    for i in 0..200 {
        let t = &thetas[i % 4];
        let g = make_group(t, admissible_branches(t, 2)[i % 2]).unwrap();
        let basis = if i % 2 == 0 { Basis::F } else { Basis::E };
        let u = random_point(&mut rng, basis, 1.5);
        let closed = g.exp_map(&u);
        let flow = rk4_exp(&g, &u, 2000);
        worst = worst.max(closed.distance(&flow).unwrap());
    }
    ensure(worst < 1e-8, || format!("max RK4 error {worst:e}"))?;
    // ku₃ = 2π: the planar part collapses
    let g = make_group(&quarter(), 1).unwrap();
    let u3 = 2.0 * PI / g.k();
    let deg = g.exp_map(&GroupPoint::f(0.7, -1.3, u3));
    ensure(
        deg.planar().amax() < 1e-12 && (deg.height() - u3).abs() < 1e-12,
        || format!("degenerate exp gave {:?}", deg.coords),
    )?;
    Ok(format!(
        "200 vectors, max |closed − RK4| {worst:.2e}; ku₃ = 2π → (0, 0, u₃)"
    ))
}

fn structure_constants() -> Outcome {
    let mut worst_f = 0.0f64;
    let mut worst_e = 0.0f64;
    for t in all_thetas() {
        for n in admissible_branches(&t, 2) {
            let g = make_group(&t, n).unwrap();
            let fd_f = g.structure_constants_fd(Basis::F);
            let fd_e = g.structure_constants_fd(Basis::E);
            let s = g.dislocation_density();
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        let d = |a: usize| if a == 2 { 1.0 } else { 0.0 };
                        let want_f =
                            g.k() * (d(j) * levi_civita(2, i, k) - d(k) * levi_civita(2, i, j));
                        let want_e: f64 = (0..3).map(|p| levi_civita(p, j, k) * s[(i, p)]).sum();
                        let scale = g.k().abs().max(1.0);
                        worst_f = worst_f.max((fd_f.get(i, j, k) - want_f).abs() / scale);
                        worst_e = worst_e.max((fd_e.get(i, j, k) - want_e).abs() / scale);
                    }
                }
            }
        }
    }
    ensure(worst_f < 1e-6 && worst_e < 1e-6, || {
        format!("F error {worst_f:e}, E error {worst_e:e}")
    })?;
    Ok(format!(
        "F-basis {worst_f:.1e}, E-basis {worst_e:.1e} (relative to max(k, 1))"
    ))
}

fn r_eps_independence() -> Outcome {
    let mut worst = 0.0f64;
    for t in all_thetas() {
        let p = t.order() as i64;
        for n in admissible_branches(&t, 2) {
            let g = make_group(&t, n).unwrap();
            for eps in [0u8, 1] {
                let base = r_eps(&g, eps, 1).map_err(|e| e.to_string())?;
                for q in (2..=2 * p).filter(|q| q % p != 0) {
                    let r = r_eps(&g, eps, q).map_err(|e| e.to_string())?;
                    worst = worst.max((r - base).amax());
                }
            }
        }
    }
    ensure(worst < 1e-10, || format!("max spread {worst:e}"))?;
    Ok(format!(
        "all θ, both ε, both branches: max spread {worst:.1e}"
    ))
}

fn generator_conditions() -> Outcome {
    let t = quarter();
    ensure(
        generates_d(&t, &GeneratorTriple::STANDARD)
            .unwrap()
            .generates(),
        || "(A, B, C) rejected".into(),
    )?;
    let squares =
        GeneratorTriple::new([DElement::A, DElement::new(0, 2, 0), DElement::new(0, 0, 2)]);
    let v = generates_d(&t, &squares).unwrap().violation();
    ensure(matches!(v, Some(Violation::TauComponents { .. })), || {
        format!("(A, B², C²): {v:?}")
    })?;
    for triple in [
        GeneratorTriple::new([DElement::new(2, 0, 0), DElement::B, DElement::C]),
        GeneratorTriple::new([DElement::new(2, 0, 0), DElement::new(4, 1, 0), DElement::C]),
    ] {
        let v = generates_d(&t, &triple).unwrap().violation();
        ensure(v == Some(Violation::AlphaHcf { hcf: 2 }), || {
            format!("{triple:?}: {v:?}")
        })?;
    }
    let mut rng = rng(11);
    let thetas = all_thetas();
    let mut accepted = 0;
    while accepted < 20 {
        let t = &thetas[accepted % 4];
        let moves = rng.gen_range(2..=4);
        let triple = random_nielsen_triple(&mut rng, t, moves);
        ensure(generates_d(t, &triple).unwrap().generates(), || {
            format!("{t}: Nielsen image {triple:?} rejected")
        })?;
        let reached = bfs_reaches(
            t,
            &triple.gens,
            &[DElement::A, DElement::B, DElement::C],
            12,
        );
        ensure(reached.iter().all(|&r| r), || {
            format!("{t}: {triple:?} reached {reached:?} within 12 letters")
        })?;
        accepted += 1;
    }
    Ok("(A,B,C) accepted; (A,B²,C²) → 5.11; hcf 2 → hcf(alpha); 20 random triples reach A, B, C in ≤ 12 letters".into())
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "centralizer C4",
            budget: Some(Duration::from_secs(1)),
            run: centralizer_c4,
        },
        Criterion {
            id: 2,
            name: "centralizer C6",
            budget: Some(Duration::from_secs(2)),
            run: centralizer_c6,
        },
        Criterion {
            id: 3,
            name: "reversing groups",
            budget: Some(Duration::from_secs(1)),
            run: reversing_groups,
        },
        Criterion {
            id: 4,
            name: "finite order",
            budget: None,
            run: finite_order,
        },
        Criterion {
            id: 5,
            name: "extension theorem",
            budget: Some(Duration::from_secs(60)),
            run: extension_theorem,
        },
        Criterion {
            id: 6,
            name: "uniqueness",
            budget: None,
            run: uniqueness,
        },
        Criterion {
            id: 7,
            name: "homomorphisms",
            budget: Some(Duration::from_secs(10)),
            run: homomorphisms,
        },
        Criterion {
            id: 8,
            name: "exponential map",
            budget: None,
            run: exponential,
        },
        Criterion {
            id: 9,
            name: "structure constants",
            budget: None,
            run: structure_constants,
        },
        Criterion {
            id: 10,
            name: "R(eps) independence",
            budget: None,
            run: r_eps_independence,
        },
        Criterion {
            id: 11,
            name: "generator conditions",
            budget: None,
            run: generator_conditions,
        },
    ];
    let mut failed = 0;
    for c in criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let over = c.budget.is_some_and(|b| took > b);
        let (tag, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d} — over budget {:?}", c.budget.unwrap())),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("{tag} [{:>2}] {:<22} {detail} ({:.2?})", c.id, c.name, took);
    }
    if failed == 0 {
        println!("acceptance: all 11 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
