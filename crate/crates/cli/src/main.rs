//! `jbundle`: Jordan types, constant rank checks and kernel bundles from the command line.
//!
//! Exit status: 0 on success, 1 on input or engine errors, 2 when the computation succeeds
//! but contradicts an assertion (a failed `--assert-constant` or a preset mismatch).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use jbundle::bundle::{
    endotrivial_test, global_sections, k0_class, kernel_graded, projectivity_test, restrict_p1, splitting_type,
    subquotient,
};
use jbundle::field::{Field, FieldRef, Fq};
use jbundle::group::{GroupRef, GroupScheme};
use jbundle::presets::{run_preset, PresetOptions, PRESETS};
use jbundle::rep::{
    adjoint, duals_example, duals_example_dual, gl_polynomial_module, principal_indecomposable_sl2, regular_module,
    sl2_height2_natural, syzygy_e2, weyl_sl2, zigzag, GlPolynomial, ModuleRep,
};
use jbundle::theta::{constant_jrank_report, jordan_type, theta_global, ThetaMatrix};

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Engine(#[from] jbundle::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Engine(e) => e.code(),
            CliError::Io { .. } => "E_IO",
            CliError::Usage(_) => "E_USAGE",
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "jbundle", version, about = "Local Jordan types and kernel bundles of p-nilpotent operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse one module.
    Analyze(AnalyzeArgs),
    /// Run a scripted reproduction and print a pass/fail table.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Op {
    Jtype,
    ConstantRank,
    Bundle,
    Sections,
    Subquotient,
    Projective,
    Endotrivial,
    Ktheory,
}

impl Op {
    fn name(self) -> &'static str {
        match self {
            Op::Jtype => "jtype",
            Op::ConstantRank => "constant-rank",
            Op::Bundle => "bundle",
            Op::Sections => "sections",
            Op::Subquotient => "subquotient",
            Op::Projective => "projective",
            Op::Endotrivial => "endotrivial",
            Op::Ktheory => "ktheory",
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Group name: u_sl2, ga<r>, ga1xga1, ga1x<r>, sl2_2, gl<n>_2.
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    p: Option<u32>,
    /// Built-in module as name:params, e.g. weyl:4, zigzag:2, trivial:1.
    #[arg(long, conflicts_with = "input")]
    builtin: Option<String>,
    /// Module in JSON form.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    op: Op,
    #[arg(long, default_value_t = 1)]
    j: u32,
    /// Exponent of Θ in the image for `subquotient` (default p − j).
    #[arg(long)]
    image_power: Option<u32>,
    /// Comma-separated point coordinates (integer codes in the point field).
    #[arg(long)]
    point: Option<String>,
    /// Degree over F_p of the field containing --point.
    #[arg(long, default_value_t = 1)]
    point_ext: u32,
    /// Largest extension degree used by point scans.
    #[arg(long, default_value_t = 2)]
    max_ext: u32,
    #[arg(long, env = "JB_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Exit with status 2 when the j-rank is not constant.
    #[arg(long)]
    assert_constant: bool,
}

#[derive(Args)]
struct ReproduceArgs {
    /// One of sl2-kernels, pim, zigzag, syzygy, duals-sections, rho-kappa, twist, ext-prod.
    preset: String,
    #[arg(long, default_value_t = 3)]
    p: u32,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, env = "JB_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "md")]
    format: Format,
}

struct Outcome {
    json: Value,
    markdown: String,
    counterexample: bool,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_params(s: Option<&str>) -> CliResult<Vec<usize>> {
    match s {
        None | Some("") => Ok(Vec::new()),
        Some(s) => s
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| usage(format!("bad built-in parameter '{x}'"))))
            .collect(),
    }
}

fn builtin_module(g: &GroupRef, spec: &str, seed: u64) -> CliResult<ModuleRep> {
    let (name, params) = match spec.split_once(':') {
        Some((n, rest)) => (n, parse_params(Some(rest))?),
        None => (spec, Vec::new()),
    };
    let arg = |i: usize| params.get(i).copied().ok_or_else(|| usage(format!("built-in '{name}' needs a parameter")));
    let m = match name {
        "trivial" => ModuleRep::trivial(g.clone(), params.first().copied().unwrap_or(1)),
        "regular" => regular_module(g)?,
        "zigzag" => zigzag(g, arg(0)?)?,
        "zigzag-dual" => zigzag(g, arg(0)?)?.dual()?,
        "syzygy" => syzygy_e2(g, arg(0)?)?,
        "weyl" => weyl_sl2(g, arg(0)?)?,
        "steinberg" => weyl_sl2(g, g.p() as usize - 1)?,
        "adjoint" => adjoint(g)?,
        "pim" => principal_indecomposable_sl2(g, arg(0)? as u32, seed)?,
        "duals" => duals_example(g)?,
        "duals-dual" => duals_example_dual(g)?,
        "natural" => match g.family {
            jbundle::group::Family::Sl2Height2 => sl2_height2_natural(g)?,
            _ => gl_polynomial_module(g, GlPolynomial::Natural)?,
        },
        "gl-tensor" => gl_polynomial_module(g, GlPolynomial::Tensor(arg(0)? as u32))?,
        "gl-sym" => gl_polynomial_module(g, GlPolynomial::Symmetric(arg(0)? as u32))?,
        other => return Err(usage(format!("unknown built-in module '{other}'"))),
    };
    Ok(m)
}

fn load_module(a: &AnalyzeArgs) -> CliResult<ModuleRep> {
    if let Some(path) = &a.input {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        let v: Value = serde_json::from_str(&text).map_err(jbundle::Error::from)?;
        let m = ModuleRep::from_json(&v, a.p)?;
        if let Some(name) = &a.group {
            if *name != m.group.name() {
                return Err(usage(format!("--group {name} disagrees with the file's {}", m.group.name())));
            }
        }
        return Ok(m);
    }
    let name = a.group.as_deref().ok_or_else(|| usage("--group is required with --builtin"))?;
    let p = a.p.ok_or_else(|| usage("--p is required with --builtin"))?;
    let g = GroupScheme::from_name(name, p)?;
    let spec = a.builtin.as_deref().ok_or_else(|| usage("give --builtin or --input"))?;
    builtin_module(&g, spec, a.seed)
}

fn parse_point(t: &ThetaMatrix, s: &str, ext: u32) -> CliResult<jbundle::group::Point> {
    let field: FieldRef = Field::new(t.p(), ext)?;
    let coords = s
        .split(',')
        .map(|x| {
            let v: i64 = x.trim().parse().map_err(|_| usage(format!("bad coordinate '{x}'")))?;
            if ext == 1 {
                Ok(field.from_int(v))
            } else if (0..field.order() as i64).contains(&v) {
                Ok(Fq(v as u32))
            } else {
                Err(usage(format!("coordinate {v} is not an element code of {}", field.describe())))
            }
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(t.group.validate_point(&field, &coords)?)
}

fn analyze(a: &AnalyzeArgs) -> CliResult<Outcome> {
    let m = load_module(a)?;
    let t = theta_global(&m)?;
    let p = t.p();
    let j = a.j;
    let jp = |lo: u32, hi: u32| {
        if (lo..=hi).contains(&j) {
            Ok(())
        } else {
            Err(usage(format!("--j {j} must lie in {lo}..={hi} for this operation")))
        }
    };
    let mut counterexample = false;
    let (result, md) = match a.op {
        Op::Jtype => match &a.point {
            Some(s) => {
                let v = parse_point(&t, s, a.point_ext)?;
                let ty = jordan_type(&t.local(&v)?)?;
                (json!({"point": v.to_json(), "jordan_type": ty.to_string(), "counts": ty.to_json()}), format!("Jordan type at {v}: {ty}"))
            }
            None => {
                let pts = t.scan_points(a.max_ext)?;
                let types = t.jordan_types_at(&pts)?;
                let mut tally: Vec<(String, usize)> = Vec::new();
                for ty in &types {
                    let s = ty.to_string();
                    match tally.iter_mut().find(|(x, _)| *x == s) {
                        Some(e) => e.1 += 1,
                        None => tally.push((s, 1)),
                    }
                }
                let md = tally.iter().map(|(s, c)| format!("- {s}: {c} points")).collect::<Vec<_>>().join("\n");
                (json!({"points_scanned": pts.len(), "types": tally.iter().map(|(s, c)| json!({"type": s, "points": c})).collect::<Vec<_>>()}), md)
            }
        },
        Op::ConstantRank => {
            jp(1, p.saturating_sub(1).max(1))?;
            let r = constant_jrank_report(&t, j, a.max_ext)?;
            counterexample = a.assert_constant && !r.verdict.is_constant();
            let md = match r.verdict.rank() {
                Some(rank) if r.verdict.is_constant() => format!("{}: rank {rank} ({} points scanned)", r.verdict.label(), r.points_scanned),
                _ => match &r.verdict {
                    jbundle::theta::Verdict::NonConstant { witnesses: [(v, a), (w, b)] } => {
                        format!("{}: rank {a} at {v}, rank {b} at {w} ({} points scanned)", r.verdict.label(), r.points_scanned)
                    }
                    _ => format!("{} ({} points scanned)", r.verdict.label(), r.points_scanned),
                },
            };
            (r.to_json(), md)
        }
        Op::Bundle | Op::Ktheory => {
            jp(1, p)?;
            let b = restrict_p1(&t, None)?;
            let k = kernel_graded(&b, j)?;
            let s = splitting_type(&k)?;
            if a.op == Op::Bundle {
                (json!({"j": j, "splitting": s.to_json(), "kernel": k.to_json()}), format!("Ker Θ^{j} ≅ {s}"))
            } else {
                let c = k0_class(&s);
                (json!({"j": j, "splitting": s.to_json(), "k0": c.to_json()}), format!("[Ker Θ^{j}] = {}·a_0 + {}·a_1 (rank {}, degree {})", c.c0, c.c1, c.rank, c.degree))
            }
        }
        Op::Sections => {
            jp(1, p)?;
            let s = global_sections(&t, j)?;
            let k: &Field = &t.field;
            let basis: Vec<Value> = s.basis.iter().map(|v| json!(v.iter().map(|&x| k.to_json(x)).collect::<Vec<_>>())).collect();
            let mut md = format!("dim Γ = {} ({})", s.dim(), s.method);
            if let Some(w) = &s.warning {
                md.push_str(&format!("\nwarning: {w}"));
            }
            (json!({"j": j, "dim": s.dim(), "basis": basis, "method": s.method, "warning": s.warning}), md)
        }
        Op::Subquotient => {
            jp(1, p)?;
            let b_pow = a.image_power.unwrap_or(p.saturating_sub(j));
            let b = restrict_p1(&t, None)?;
            let sq = subquotient(&b, j, b_pow, a.max_ext)?;
            (sq.to_json(), format!("Ker Θ^{j} / Im Θ^{b_pow} ≅ {} (fiber rank {})", sq.splitting, sq.fiber_rank))
        }
        Op::Projective => {
            let r = projectivity_test(&m, a.max_ext)?;
            (
                json!({"projective": r.projective, "constant_rank_1": r.constant_rank_1, "constant_rank_p_minus_1": r.constant_rank_p_minus_1,
                       "subquotient_fibers_zero": r.subquotient_fibers_zero, "chart_check": r.chart_check, "points_scanned": r.points_scanned}),
                format!("projective: {}", r.projective),
            )
        }
        Op::Endotrivial => {
            let r = endotrivial_test(&m, a.max_ext)?;
            (
                json!({"endotrivial": r.endotrivial, "constant_jordan_type": r.constant_jordan_type, "subquotient_fiber_dims": r.subquotient_fiber_dims}),
                format!("endotrivial: {}", r.endotrivial),
            )
        }
    };
    let json = json!({
        "engine": {"name": "jbundle", "version": env!("CARGO_PKG_VERSION")},
        "request": {
            "group": m.group.name(), "p": p, "builtin": a.builtin, "input": a.input.as_ref().map(|x| x.display().to_string()),
            "op": a.op.name(), "j": j, "point": a.point, "point_ext": a.point_ext,
        },
        "result": result,
        "provenance": {
            "field": m.field.descriptor_json(), "group": m.group.to_json(), "seed": a.seed, "max_ext": a.max_ext,
            "module_dim": m.dim(),
        },
    });
    let markdown = format!("## {} on {} (p = {p}, dim {})\n\n{md}\n", a.op.name(), m.group.name(), m.dim());
    Ok(Outcome {
        json,
        markdown,
        counterexample,
    })
}

fn reproduce(a: &ReproduceArgs) -> CliResult<Outcome> {
    if !PRESETS.contains(&a.preset.as_str()) {
        return Err(usage(format!("unknown preset '{}'; expected one of {}", a.preset, PRESETS.join(", "))));
    }
    let opts = PresetOptions {
        n_max: a.n_max,
        seed: a.seed,
        samples: a.samples,
    };
    let r = run_preset(&a.preset, a.p, &opts)?;
    let json = json!({
        "engine": {"name": "jbundle", "version": env!("CARGO_PKG_VERSION")},
        "request": {"preset": a.preset, "p": a.p, "n_max": a.n_max, "samples": a.samples},
        "result": r.to_json(),
        "provenance": {"seed": a.seed},
    });
    Ok(Outcome {
        json,
        markdown: r.to_markdown(),
        counterexample: !r.passed(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (outcome, format) = match &cli.command {
        Command::Analyze(a) => (analyze(a), a.format),
        Command::Reproduce(a) => (reproduce(a), a.format),
    };
    match outcome {
        Ok(o) => {
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&o.json).expect("serializable") + "\n",
                Format::Md => o.markdown,
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if o.counterexample {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(1)
        }
    }
}
