//! `s2sym`: classify θ, test generating triples, lift automorphisms and dump
//! lattice points.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 domain
//! rejection.

mod num;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use s2sym::discrete::{embed, generates_d, DElement, Generation, GeneratorTriple};
use s2sym::extension::{extend, uniqueness_probe, verify_extension, word_box};
use s2sym::intmat::{Mat2Z, Sign, Theta};
use s2sym::liegroup::{admissible_branches, make_group};
use s2sym::symmetry::{
    apply_d_automorphism, centralizer, classify_symmetry, reversing_group, reversing_symmetry,
    Classification, DAutomorphism, SymmetryGroup,
};
use s2sym::Error;

const EXIT_VERIFY: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_DOMAIN: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "s2sym",
    version,
    about = "Symmetries of discrete subgroups of S2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Text,
}

#[derive(clap::Args, Debug)]
struct ThetaArgs {
    /// θ as four comma-separated integers, row-major.
    #[arg(long, value_parser = parse_theta, allow_hyphen_values = true)]
    theta: Theta,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(clap::Args, Debug)]
struct AutoArgs {
    /// Branch index n; defaults to 1.
    #[arg(long, allow_hyphen_values = true)]
    branch: Option<i64>,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    zeta: i64,
    /// χ as four comma-separated integers, row-major.
    #[arg(long, value_parser = parse_mat, allow_hyphen_values = true)]
    chi: Option<Mat2Z>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    beta1: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    gamma1: i64,
    /// Half-width of the word box.
    #[arg(long = "box", default_value_t = 3)]
    radius: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order, branches, symmetry groups and dislocation density of θ.
    ClassifyTheta {
        #[command(flatten)]
        theta: ThetaArgs,
    },
    /// Decide whether three words generate D and classify the change of
    /// generators.
    CheckGenerators {
        #[command(flatten)]
        theta: ThetaArgs,
        #[arg(long, value_parser = parse_word, allow_hyphen_values = true)]
        g1: DElement,
        #[arg(long, value_parser = parse_word, allow_hyphen_values = true)]
        g2: DElement,
        #[arg(long, value_parser = parse_word, allow_hyphen_values = true)]
        g3: DElement,
    },
    /// Lift an automorphism of D to S2 and verify it on a word box.
    Extend {
        #[command(flatten)]
        theta: ThetaArgs,
        #[command(flatten)]
        auto: AutoArgs,
    },
    /// Emit the embedded words of a box as JSON lines.
    LatticePoints {
        #[command(flatten)]
        theta: ThetaArgs,
        #[command(flatten)]
        auto: AutoArgs,
        /// Also emit each word's image under the automorphism given by
        /// --zeta/--chi/--beta1/--gamma1.
        #[arg(long)]
        apply: bool,
    },
}

fn parse_ints<const N: usize>(s: &str) -> Result<[i64; N], String> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<i64>| format!("expected {N} comma-separated integers, got {}", v.len()))
}

fn parse_mat(s: &str) -> Result<Mat2Z, String> {
    let [a, b, c, d] = parse_ints::<4>(s)?;
    Ok(Mat2Z::new(a, b, c, d))
}

fn parse_theta(s: &str) -> Result<Theta, String> {
    Theta::new(parse_mat(s)?).map_err(|e| e.to_string())
}

fn parse_word(s: &str) -> Result<DElement, String> {
    let [q, m, n] = parse_ints::<3>(s)?;
    Ok(DElement::new(q, m, n))
}

/// A failure carrying its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotAutomorphism(_) | Error::NoExtension(_) | Error::NotGenerating(_) => {
                EXIT_DOMAIN
            }
            Error::Inconsistent(_) => EXIT_VERIFY,
            _ => EXIT_INPUT,
        };
        Fail(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let result = match cli.command {
        Command::ClassifyTheta { theta } => classify_theta(&theta, &mut out),
        Command::CheckGenerators { theta, g1, g2, g3 } => {
            check_generators(&theta, GeneratorTriple::new([g1, g2, g3]), &mut out)
        }
        Command::Extend { theta, auto } => cmd_extend(&theta, &auto, &mut out),
        Command::LatticePoints { theta, auto, apply } => {
            lattice_points(&theta, &auto, apply, &mut out)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // the reader went away (`| head`); not our failure
        Err(Fail(0, _)) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            let _ = out.flush();
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn emit<T: Serialize>(out: &mut impl Write, value: &T) -> Result<(), Fail> {
    let s = serde_json::to_string(value).map_err(|e| Fail(EXIT_VERIFY, e.to_string()))?;
    writeln!(out, "{s}").map_err(write_failure)
}

fn text(out: &mut impl Write, s: impl AsRef<str>) -> Result<(), Fail> {
    writeln!(out, "{}", s.as_ref()).map_err(write_failure)
}

fn write_failure(e: io::Error) -> Fail {
    if e.kind() == io::ErrorKind::BrokenPipe {
        Fail(0, String::new())
    } else {
        Fail(EXIT_VERIFY, e.to_string())
    }
}

fn group_elements(g: &SymmetryGroup) -> Option<Vec<[i64; 4]>> {
    g.elements().map(|e| e.iter().map(Mat2Z::entries).collect())
}

#[derive(Serialize)]
struct ThetaReport {
    theta: [i64; 4],
    trace: i64,
    order: u32,
    branches: Vec<i64>,
    #[serde(serialize_with = "num::ser_vec")]
    k: Vec<f64>,
    #[serde(rename = "S_label")]
    s_label: &'static str,
    #[serde(rename = "S")]
    s: Option<Vec<[i64; 4]>>,
    #[serde(rename = "R_label")]
    r_label: &'static str,
    #[serde(rename = "R")]
    r: Option<Vec<[i64; 4]>>,
    reversing_symmetry: [i64; 4],
    #[serde(serialize_with = "num::ser_rows")]
    dislocation_density: Vec<Vec<f64>>,
}

fn classify_theta(args: &ThetaArgs, out: &mut impl Write) -> Result<(), Fail> {
    let theta = &args.theta;
    let branches = admissible_branches(theta, 2);
    let groups = branches
        .iter()
        .map(|&n| make_group(theta, n))
        .collect::<Result<Vec<_>, _>>()?;
    let s = centralizer(theta);
    let r = reversing_group(theta)?;
    let report = ThetaReport {
        theta: theta.matrix().entries(),
        trace: theta.trace(),
        order: theta.order(),
        branches: branches.clone(),
        k: groups.iter().map(|g| g.k()).collect(),
        s_label: s.label.as_str(),
        s: group_elements(&s),
        r_label: r.label.as_str(),
        r: group_elements(&r),
        reversing_symmetry: reversing_symmetry(theta)?.entries(),
        dislocation_density: {
            let dd = groups[0].dislocation_density();
            (0..3)
                .map(|i| (0..3).map(|j| dd[(i, j)]).collect())
                .collect()
        },
    };
    match args.format {
        Format::Json => emit(out, &report),
        Format::Text => {
            text(out, format!("theta        {}", theta.matrix()))?;
            text(out, format!("trace        {}", report.trace))?;
            text(out, format!("order        {}", report.order))?;
            for (n, k) in report.branches.iter().zip(&report.k) {
                text(out, format!("branch       n = {n}, k = {}", num::g12(*k)))?;
            }
            text(out, format!("S(theta)     {} ({})", s.label, size(&s)))?;
            text(out, format!("R(theta)     {} ({})", r.label, size(&r)))?;
            text(out, format!("Lambda       {}", reversing_symmetry(theta)?))?;
            let dd = &report.dislocation_density;
            for (i, row) in dd.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|x| num::g12(*x)).collect();
                let head = if i == 0 {
                    "S (n first)  "
                } else {
                    "             "
                };
                text(out, format!("{head}[{}]", cells.join(", ")))?;
            }
            Ok(())
        }
    }
}

fn size(g: &SymmetryGroup) -> String {
    g.order()
        .map(|n| format!("{n} elements"))
        .unwrap_or_else(|| "infinite".into())
}

#[derive(Serialize)]
struct Reduced {
    beta1: i64,
    gamma1: i64,
    chi: [i64; 4],
}

#[derive(Serialize)]
struct GeneratorReport {
    theta: [i64; 4],
    triple: [[i64; 3]; 3],
    generates: bool,
    violated: Option<&'static str>,
    detail: Option<String>,
    reduced: Option<Reduced>,
    taus: Option<[[i64; 2]; 4]>,
    class: &'static str,
    inelastic_class: Option<&'static str>,
    reason: Option<String>,
}

fn check_generators(
    args: &ThetaArgs,
    triple: GeneratorTriple,
    out: &mut impl Write,
) -> Result<(), Fail> {
    let theta = &args.theta;
    let generation = generates_d(theta, &triple)?;
    let (reduced, taus) = match &generation {
        Generation::Yes { reduced, taus } => (Some(*reduced), Some(*taus)),
        Generation::No { reduced, taus, .. } => (*reduced, *taus),
    };
    let class = classify_symmetry(theta, &triple)?;
    let (inelastic_class, reason) = match &class {
        Classification::Inelastic(r) => (Some(r.class_code()), Some(r.message().to_string())),
        _ => (None, None),
    };
    let report = GeneratorReport {
        theta: theta.matrix().entries(),
        triple: triple.gens.map(|g| [g.q, g.m, g.n]),
        generates: generation.generates(),
        violated: generation.violation().map(|v| v.code()),
        detail: generation.violation().map(|v| v.to_string()),
        reduced: reduced.map(|r| Reduced {
            beta1: r.beta1,
            gamma1: r.gamma1,
            chi: r.exponents.entries(),
        }),
        taus: taus.map(|t| t.map(|v| [v.x, v.y])),
        class: class.as_str(),
        inelastic_class,
        reason,
    };
    match args.format {
        Format::Json => emit(out, &report),
        Format::Text => {
            let yes = if report.generates { "YES" } else { "NO" };
            text(out, format!("generates    {yes}"))?;
            if let (Some(code), Some(detail)) = (report.violated, &report.detail) {
                text(out, format!("violated     {code}: {detail}"))?;
            }
            if let Some(r) = &report.reduced {
                text(
                    out,
                    format!(
                        "reduced      A B^{} C^{}, chi = {}",
                        r.beta1,
                        r.gamma1,
                        Mat2Z::new(r.chi[0], r.chi[1], r.chi[2], r.chi[3])
                    ),
                )?;
            }
            if let Some(t) = report.taus {
                text(out, format!("taus         {t:?}"))?;
            }
            text(out, format!("class        {}", report.class))?;
            if let (Some(c), Some(r)) = (report.inelastic_class, &report.reason) {
                text(out, format!("reason       {r} ({c})"))?;
            }
            Ok(())
        }
    }
}

fn automorphism(theta: &Theta, auto: &AutoArgs) -> Result<DAutomorphism, Fail> {
    let zeta = Sign::from_unit(auto.zeta).ok_or_else(|| {
        Fail(
            EXIT_INPUT,
            format!("--zeta must be 1 or -1, got {}", auto.zeta),
        )
    })?;
    let chi = auto.chi.unwrap_or(Mat2Z::IDENTITY);
    Ok(DAutomorphism::new(
        theta,
        zeta,
        chi,
        auto.beta1,
        auto.gamma1,
    )?)
}

#[derive(Serialize)]
struct AutoJson {
    zeta: i64,
    chi: [i64; 4],
    beta1: i64,
    gamma1: i64,
}

impl From<&DAutomorphism> for AutoJson {
    fn from(p: &DAutomorphism) -> Self {
        Self {
            zeta: p.zeta.value(),
            chi: p.chi.entries(),
            beta1: p.beta1,
            gamma1: p.gamma1,
        }
    }
}

#[derive(Serialize)]
struct ParamsJson {
    epsilon: u8,
    #[serde(serialize_with = "num::ser")]
    alpha: f64,
    #[serde(serialize_with = "num::ser")]
    beta: f64,
    #[serde(serialize_with = "num::ser")]
    gamma: f64,
    #[serde(serialize_with = "num::ser")]
    delta: f64,
}

#[derive(Serialize)]
struct ProbeJson {
    #[serde(serialize_with = "num::ser")]
    max_abs_diff: f64,
    flag: Option<&'static str>,
}

#[derive(Serialize)]
struct ExtendReport {
    theta: [i64; 4],
    branch: i64,
    #[serde(serialize_with = "num::ser")]
    k: f64,
    automorphism: AutoJson,
    params: ParamsJson,
    #[serde(rename = "box")]
    radius: i64,
    points: usize,
    #[serde(serialize_with = "num::ser")]
    max_discrepancy: f64,
    status: &'static str,
    probe: ProbeJson,
}

fn cmd_extend(args: &ThetaArgs, auto: &AutoArgs, out: &mut impl Write) -> Result<(), Fail> {
    let theta = &args.theta;
    let g = make_group(theta, auto.branch.unwrap_or(1))?;
    let phi = automorphism(theta, auto)?;
    let params = extend(&g, &phi)?;
    let radius = i64::from(auto.radius);
    let rep = verify_extension(&g, &phi, &params, radius)?;
    let probe = uniqueness_probe(&g, &phi)?;
    let a = params.algebra;
    let report = ExtendReport {
        theta: theta.matrix().entries(),
        branch: g.branch(),
        k: g.k(),
        automorphism: (&phi).into(),
        params: ParamsJson {
            epsilon: a.epsilon(),
            alpha: a.alpha,
            beta: a.beta,
            gamma: a.gamma,
            delta: a.delta,
        },
        radius,
        points: rep.points,
        max_discrepancy: rep.max_discrepancy,
        status: if rep.passed() { "PASS" } else { "FAIL" },
        probe: ProbeJson {
            max_abs_diff: probe.max_abs_diff,
            flag: probe.flag,
        },
    };
    match args.format {
        Format::Json => emit(out, &report)?,
        Format::Text => {
            text(out, format!("automorphism {phi}"))?;
            text(
                out,
                format!("branch       n = {}, k = {}", g.branch(), num::g12(g.k())),
            )?;
            text(
                out,
                format!(
                    "extension    epsilon={} alpha={} beta={} gamma={} delta={}",
                    a.epsilon(),
                    num::g12(a.alpha),
                    num::g12(a.beta),
                    num::g12(a.gamma),
                    num::g12(a.delta)
                ),
            )?;
            text(
                out,
                format!(
                    "verified     {} words, max discrepancy {} -> {}",
                    rep.points,
                    num::g12(rep.max_discrepancy),
                    report.status
                ),
            )?;
        }
    }
    if rep.passed() {
        Ok(())
    } else {
        Err(Fail(
            EXIT_VERIFY,
            format!("extension disagrees with phi_D at {}", rep.worst_word),
        ))
    }
}

#[derive(Serialize)]
struct Point {
    #[serde(rename = "Q")]
    q: i64,
    #[serde(rename = "M")]
    m: i64,
    #[serde(rename = "N")]
    n: i64,
    #[serde(serialize_with = "num::ser")]
    x1: f64,
    #[serde(serialize_with = "num::ser")]
    x2: f64,
    #[serde(serialize_with = "num::ser")]
    x3: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    image: Option<Box<Point>>,
}

fn point(g: &s2sym::S2Group, d: &DElement) -> Point {
    let x = embed(g, d).coords;
    Point {
        q: d.q,
        m: d.m,
        n: d.n,
        x1: x[0],
        x2: x[1],
        x3: x[2],
        image: None,
    }
}

fn lattice_points(
    args: &ThetaArgs,
    auto: &AutoArgs,
    apply: bool,
    out: &mut impl Write,
) -> Result<(), Fail> {
    let theta = &args.theta;
    let g = make_group(theta, auto.branch.unwrap_or(1))?;
    let phi = if apply {
        Some(automorphism(theta, auto)?)
    } else {
        None
    };
    for d in word_box(i64::from(auto.radius)) {
        let mut p = point(&g, &d);
        if let Some(phi) = &phi {
            let img = apply_d_automorphism(theta, phi, &d)?;
            p.image = Some(Box::new(point(&g, &img)));
        }
        match args.format {
            Format::Json => emit(out, &p)?,
            Format::Text => {
                let mut line = format!(
                    "{} {} {} {} {} {}",
                    p.q,
                    p.m,
                    p.n,
                    num::g12(p.x1),
                    num::g12(p.x2),
                    num::g12(p.x3)
                );
                if let Some(i) = &p.image {
                    line += &format!(
                        "  {} {} {} {} {} {}",
                        i.q,
                        i.m,
                        i.n,
                        num::g12(i.x1),
                        num::g12(i.x2),
                        num::g12(i.x3)
                    );
                }
                text(out, line)?;
            }
        }
    }
    Ok(())
}
