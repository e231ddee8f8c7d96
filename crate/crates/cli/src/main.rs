//! `linkflux` command-line front end.
//!
//! Every command prints one JSON document `{command, config, result}` on
//! stdout (or a text table with `--pretty`). Errors go to stderr as JSON;
//! the exit code is 0 on success, 2 when the requested quantity is
//! mathematically undefined or unsupported, and 1 otherwise.

use clap::{Args, Parser, Subcommand, ValueEnum};
use linkflux::bessel::{bessel_norm_constant, bessel_norm_sum};
use linkflux::config::Config;
use linkflux::curves::{
    self, gen_circle, gen_hopf_fiber, gen_torus_knot, gen_twisted, parallel_framing,
    radial_framing, FramedLoop, SampledLoop, TwistFamilyParams, TwistSign,
};
use linkflux::effective_spectrum::effective_spectrum;
use linkflux::flux_torus::{critical_set, hopf_tiling, FluxPoint};
use linkflux::hopf::{hopf_decompose, hopf_kernel_dim, hopf_z_spectrum};
use linkflux::invariants::{
    calugareanu_residual, integrated_relative_torsion, writhe, LinkOptions, MagneticLink,
};
use linkflux::io::{parse_json, pretty_table, to_json_string, CurveJson, LinkJson, LoopJson};
use linkflux::spectral_flow::{sf_crossing_oracle, sf_loop, zero_mode_lower_bound};
use linkflux::LinkError;
use serde::Serialize;
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "linkflux",
    version,
    about = "Invariants, effective spectra and spectral flow of magnetic links"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Samples per curve (overrides the config).
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Tolerance for distances to ℤ and to the critical set.
    #[arg(long, global = true)]
    tol_critical: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Human-readable table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON config file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Curve generators.
    Curve {
        #[command(subcommand)]
        action: CurveAction,
    },
    /// Writhe, integrated relative torsion and linking matrix of a link or curve.
    Invariants(InputArgs),
    /// Closed-form effective spectrum of one component.
    EffectiveSpectrum {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0)]
        component: usize,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "-10,10"
        )]
        window: Vec<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        extra_flux: f64,
    },
    /// Critical set on the torus of fluxes.
    Critical {
        #[command(flatten)]
        link: LinkSource,
        /// Point whose distance is reported (defaults to the link's fluxes).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<f64>>,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
    },
    /// Spectral flow of a flux loop, cross-checked by the crossing oracle.
    Sf {
        #[command(flatten)]
        link: LinkSource,
        /// Loop JSON file.
        #[arg(long = "loop")]
        loop_path: PathBuf,
    },
    /// Z_k spectrum and kernel dimension of a magnetic Hopf link.
    HopfSpectrum {
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = -20, allow_hyphen_values = true)]
        kmin: i64,
        #[arg(long, default_value_t = 20, allow_hyphen_values = true)]
        kmax: i64,
    },
    /// Kernel-dimension tiling of the flux torus of a Hopf link.
    Tile {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// CSV of the section α1 + α2 + α3 = 1/2 (K = 3 only).
        #[arg(long)]
        section_csv: Option<PathBuf>,
    },
    /// Călugăreanu identity Lk = Tw + Wr for a framed curve.
    Calugareanu {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
    },
    /// Singular-profile norm constants C_α.
    ModelNorm {
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
    },
    /// Integrated relative torsion of the twisted family against its asymptotic slope.
    DeformSweep {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        n: Vec<u32>,
        #[arg(long, value_enum, default_value_t = SignArg::Minus)]
        sign: SignArg,
        /// Radius of the base circle.
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
}

#[derive(Subcommand, Debug)]
enum CurveAction {
    Gen {
        #[command(subcommand)]
        kind: CurveKind,
    },
}

#[derive(Subcommand, Debug)]
enum CurveKind {
    /// Round circle; `--framed` adds the radial framing.
    Circle {
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "0,0,0"
        )]
        center: Vec<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "0,0,1"
        )]
        axis: Vec<f64>,
        #[arg(long)]
        framed: bool,
    },
    /// (p,q) torus knot in R³.
    TorusKnot {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
        #[arg(long, default_value_t = 2.0)]
        big_r: f64,
        #[arg(long, default_value_t = 0.7)]
        minor_r: f64,
    },
    /// Hopf fiber in S³ over a point of S².
    HopfFiber {
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "1,0,0"
        )]
        base: Vec<f64>,
    },
    /// Twisted deformation of a framed curve (default: unit circle, radial framing).
    Twisted {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = SignArg::Minus)]
        sign: SignArg,
        /// Framed base curve JSON.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Add the parallel framing.
        #[arg(long)]
        framed: bool,
    },
    /// Twisted unknot whose edge loop has spectral flow m.
    ZeroMode {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SignArg {
    Minus,
    Plus,
}

impl From<SignArg> for TwistSign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Minus => TwistSign::Minus,
            SignArg::Plus => TwistSign::Plus,
        }
    }
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Input JSON file, `-` for stdin.
    #[arg(long, default_value = "-")]
    input: PathBuf,
}

#[derive(Args, Debug)]
struct LinkSource {
    /// Link JSON file, `-` for stdin.
    #[arg(long, conflicts_with = "hopf")]
    link: Option<PathBuf>,
    /// Use the magnetic Hopf link with this many fibers.
    #[arg(long)]
    hopf: Option<usize>,
    /// Fluxes overriding those of the link.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    fluxes: Option<Vec<f64>>,
}

struct Failure {
    kind: String,
    message: String,
    code: u8,
}

impl From<LinkError> for Failure {
    fn from(e: LinkError) -> Self {
        Failure {
            kind: e.kind().to_string(),
            message: e.to_string(),
            code: if e.is_undefined() { 2 } else { 1 },
        }
    }
}

impl Failure {
    fn io(message: String) -> Self {
        Failure {
            kind: "Io".into(),
            message,
            code: 1,
        }
    }

    fn usage(message: String) -> Self {
        Failure {
            kind: "Usage".into(),
            message,
            code: 1,
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read_text(path: &Path) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
    }
}

/// Parse a JSON input, unwrapping the `result` of a previous command's output.
fn read_json(path: &Path) -> CliResult<Value> {
    let v: Value = parse_json(&read_text(path)?, &path.display().to_string())?;
    Ok(match v {
        Value::Object(mut m) if m.contains_key("result") && m.contains_key("command") => {
            m.remove("result").unwrap_or(Value::Null)
        }
        v => v,
    })
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> CliResult<T> {
    Ok(serde_json::from_value(v).map_err(|e| LinkError::InvalidParams(format!("{what}: {e}")))?)
}

fn link_options(config: &Config) -> LinkOptions {
    LinkOptions {
        pole_grid: config.pole_grid,
        tol_round: config.tol_round,
    }
}

/// A link JSON, or a single curve JSON as a one-component link without flux.
fn link_from_value(v: Value, config: &Config, resample: bool) -> CliResult<MagneticLink> {
    let spec: LinkJson = if v.get("components").is_some() {
        from_value(v, "link")?
    } else {
        LinkJson {
            components: vec![from_value(v, "curve")?],
            fluxes: vec![0.0],
        }
    };
    let mut loops = spec.to_loops()?;
    if resample {
        loops = loops
            .iter()
            .map(|l| curves::arclength_resample(l, config.samples))
            .collect::<Result<_, _>>()?;
    }
    Ok(MagneticLink::with_options(
        loops,
        spec.fluxes,
        &link_options(config),
    )?)
}

fn load_link(src: &LinkSource, config: &Config) -> CliResult<MagneticLink> {
    let link = match (&src.link, src.hopf) {
        (_, Some(k)) => MagneticLink::hopf(k, vec![0.0; k], config.samples)?,
        (Some(path), None) => link_from_value(read_json(path)?, config, false)?,
        (None, None) => return Err(Failure::usage("either --link or --hopf is required".into())),
    };
    match &src.fluxes {
        Some(f) => Ok(link.with_fluxes(f.clone())?),
        None => Ok(link),
    }
}

fn to_value<T: Serialize>(v: &T) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| Failure::io(format!("serialization: {e}")))
}

fn unit_circle(samples: usize) -> CliResult<FramedLoop> {
    let c = gen_circle(1.0, [0.0; 3], [0.0, 0.0, 1.0], samples)?;
    Ok(radial_framing(&c)?)
}

fn vec3_arg(v: &[f64], name: &str) -> CliResult<[f64; 3]> {
    <[f64; 3]>::try_from(v)
        .map_err(|_| Failure::usage(format!("--{name} needs three comma-separated numbers")))
}

fn framed_or_plain(l: &SampledLoop, framed: bool) -> CliResult<CurveJson> {
    if framed {
        Ok(CurveJson::from_framed(&parallel_framing(l)?.0))
    } else {
        Ok(CurveJson::from_loop(l))
    }
}

/// Samples for an `n`-turn twisted curve: the explicit `--samples`, or
/// enough to keep 64 samples per turn.
fn twisted_samples(config: &Config, explicit_samples: bool, turns: u32) -> usize {
    if explicit_samples {
        config.samples
    } else {
        config.deformed_samples.max(64 * turns as usize)
    }
}

fn curve_gen(kind: &CurveKind, config: &Config, explicit_samples: bool) -> CliResult<Value> {
    let n = config.samples;
    match kind {
        CurveKind::Circle {
            radius,
            center,
            axis,
            framed,
        } => {
            let c = gen_circle(
                *radius,
                vec3_arg(center, "center")?,
                vec3_arg(axis, "axis")?,
                n,
            )?;
            let j = if *framed {
                CurveJson::from_framed(&radial_framing(&c)?)
            } else {
                CurveJson::from_loop(&c)
            };
            to_value(&j)
        }
        CurveKind::TorusKnot {
            p,
            q,
            big_r,
            minor_r,
        } => to_value(&CurveJson::from_loop(&gen_torus_knot(
            *p, *q, *big_r, *minor_r, n,
        )?)),
        CurveKind::HopfFiber { base } => to_value(&CurveJson::from_loop(&gen_hopf_fiber(
            vec3_arg(base, "base")?,
            n,
        )?)),
        CurveKind::Twisted {
            r,
            n: turns,
            sign,
            input,
            framed,
        } => {
            let deformed_n = twisted_samples(config, explicit_samples, *turns);
            let base = match input {
                Some(path) => {
                    from_value::<CurveJson>(read_json(path)?, "framed curve")?.to_framed()?
                }
                None => unit_circle(deformed_n)?,
            };
            let params = TwistFamilyParams {
                r: *r,
                n: *turns,
                sign: (*sign).into(),
            };
            to_value(&framed_or_plain(
                &gen_twisted(&base, params, deformed_n)?,
                *framed,
            )?)
        }
        CurveKind::ZeroMode { m } => {
            let recipe = zero_mode_lower_bound(*m, config.tol_critical)?;
            let curve = match recipe.params {
                Some(params) => gen_twisted(&unit_circle(recipe.samples)?, params, recipe.samples)?,
                None => gen_circle(1.0, [0.0; 3], [0.0, 0.0, 1.0], recipe.samples)?,
            };
            let mut v = to_value(&CurveJson::from_loop(&curve))?;
            v["recipe"] = to_value(&recipe)?;
            Ok(v)
        }
    }
}

fn run(cli: &Cli, config: &Config) -> CliResult<Value> {
    let explicit_samples = cli.global.samples.is_some();
    match &cli.command {
        Command::Curve {
            action: CurveAction::Gen { kind },
        } => curve_gen(kind, config, explicit_samples),
        Command::Invariants(input) => {
            let link = link_from_value(read_json(&input.input)?, config, true)?;
            let mut v = to_value(&link.report(0.0))?;
            v["writhe_error"] = to_value(&link.writhe_errors())?;
            v["samples"] = json!(config.samples);
            Ok(v)
        }
        Command::EffectiveSpectrum {
            input,
            component,
            window,
            extra_flux,
        } => {
            let [lo, hi] = <[f64; 2]>::try_from(window.as_slice())
                .map_err(|_| Failure::usage("--window needs two numbers lo,hi".into()))?;
            let link = link_from_value(read_json(&input.input)?, config, true)?;
            let s = effective_spectrum(&link, *component, (lo, hi), *extra_flux)?;
            let eigenvalues: Vec<Value> = s
                .eigenvalues
                .iter()
                .map(|(n, l)| json!({"n": n, "lambda": l}))
                .collect();
            Ok(json!({
                "ell": s.lattice.ell,
                "phi0": s.lattice.phi0,
                "eigenvalues": eigenvalues,
                "writhe": s.writhe,
                "flux": s.flux,
            }))
        }
        Command::Critical {
            link,
            point,
            resolution,
        } => {
            let link = load_link(link, config)?;
            let set = critical_set(&link);
            let p = FluxPoint::new(point.clone().unwrap_or_else(|| link.fluxes().to_vec()))?;
            let distance = set.distance(&p)?;
            let mut v = json!({
                "conditions": to_value(&set.conditions())?,
                "point": p.alphas(),
                "distance": if distance.is_finite() { json!(distance) } else { Value::Null },
                "critical_components": set.critical_components(&p, config.tol_critical),
            });
            if link.len() <= 3 {
                v["pieces"] = to_value(&set.enumerate(*resolution)?)?;
            }
            Ok(v)
        }
        Command::Sf { link, loop_path } => {
            let spec: LoopJson = from_value(read_json(loop_path)?, "loop")?;
            let l = spec.to_loop()?;
            let link = load_link(link, config)?.with_unknot_flags(spec.unknot_flags.clone())?;
            let direct = sf_loop(&link, &l, config.tol_critical)?;
            let oracle = sf_crossing_oracle(&link, &l, config.oracle_steps, config.tol_critical)?;
            if oracle.value != direct.value {
                return Err(Failure {
                    kind: "OracleMismatch".into(),
                    message: format!(
                        "decomposition gives {} but the crossing oracle gives {}",
                        direct.value, oracle.value
                    ),
                    code: 1,
                });
            }
            let mut v = to_value(&direct)?;
            v["oracle"] = to_value(&oracle)?;
            Ok(v)
        }
        Command::HopfSpectrum { alphas, kmin, kmax } => {
            let d = hopf_decompose(alphas)?;
            let branches = hopf_z_spectrum(alphas, (*kmin, *kmax))?;
            Ok(json!({
                "alphas": alphas,
                "c": d.c,
                "m": d.m,
                "branches": to_value(&branches)?,
                "kernel_dim": hopf_kernel_dim(alphas)?,
            }))
        }
        Command::Tile {
            k,
            resolution,
            csv,
            svg,
            section_csv,
        } => {
            let t = hopf_tiling(*k, *resolution)?;
            let write = |path: &Option<PathBuf>, text: String| -> CliResult<()> {
                if let Some(p) = path {
                    std::fs::write(p, text)
                        .map_err(|e| Failure::io(format!("{}: {e}", p.display())))?;
                }
                Ok(())
            };
            write(csv, t.to_csv())?;
            write(svg, t.to_svg())?;
            if let Some(section) = t.section_csv() {
                write(section_csv, section)?;
            }
            let mut counts = std::collections::BTreeMap::new();
            for c in &t.cells {
                *counts.entry(c.label.to_string()).or_insert(0u64) += 1;
            }
            Ok(json!({
                "k": t.k,
                "resolution": t.resolution,
                "cells": t.cells.len(),
                "label_counts": counts,
                "critical_pieces": t.critical.len(),
                "csv": csv,
                "svg": svg,
                "section_csv": section_csv,
            }))
        }
        Command::Calugareanu { input, epsilon } => {
            let curve: CurveJson = from_value(read_json(&input.input)?, "framed curve")?;
            let framed = curve.to_framed()?;
            let c = calugareanu_residual(&framed, *epsilon)?;
            let mut v = to_value(&c)?;
            v["epsilon"] = json!(epsilon);
            v["samples"] = json!(framed.base().len());
            Ok(v)
        }
        Command::ModelNorm { alpha } => {
            let rows = alpha
                .iter()
                .map(|&a| -> CliResult<Value> {
                    let sum = bessel_norm_sum(a)?;
                    Ok(json!({
                        "alpha": a,
                        "c_alpha": bessel_norm_constant(a)?,
                        "c_one_minus_alpha": bessel_norm_constant(1.0 - a)?,
                        "sum": sum,
                        "scaled_sum": (1.0 - a) * sum,
                    }))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(json!({ "rows": rows }))
        }
        Command::DeformSweep { a, n, sign, radius } => {
            let limit = 1.0 - 1.0 / (1.0 + a * a).sqrt();
            let s = match sign {
                SignArg::Minus => 1.0,
                SignArg::Plus => -1.0,
            };
            let mut rows = Vec::new();
            for &turns in n {
                if turns == 0 {
                    return Err(Failure::usage("--n values must be positive".into()));
                }
                // j = n/ρ on a circle of radius ρ, and a = r j
                let r = a * radius / turns as f64;
                let samples = twisted_samples(config, explicit_samples, turns);
                let base =
                    radial_framing(&gen_circle(*radius, [0.0; 3], [0.0, 0.0, 1.0], samples)?)?;
                let curve = gen_twisted(
                    &base,
                    TwistFamilyParams {
                        r,
                        n: turns,
                        sign: (*sign).into(),
                    },
                    samples,
                )?;
                let w = writhe(&curve)?;
                let i_tau = integrated_relative_torsion(&curve)?;
                let ratio = i_tau / (s * 2.0 * PI * turns as f64);
                rows.push(json!({
                    "n": turns,
                    "r": r,
                    "samples": samples,
                    "writhe": w.value,
                    "writhe_error": w.error,
                    "i_tau": i_tau,
                    "ratio": ratio,
                    "error": ratio - limit,
                }));
            }
            let errors: Vec<f64> = rows
                .iter()
                .map(|r| r["error"].as_f64().unwrap_or(f64::NAN))
                .collect();
            let c_fit = rows
                .iter()
                .zip(&errors)
                .map(|(r, e)| e.abs() * r["n"].as_f64().unwrap_or(0.0))
                .fold(0.0, f64::max);
            Ok(json!({
                "a": a,
                "sign": format!("{sign:?}").to_lowercase(),
                "limit": limit,
                "rows": rows,
                "c_fit": c_fit,
            }))
        }
    }
}

fn build_config(g: &GlobalOpts) -> CliResult<Config> {
    let mut config = match &g.config {
        Some(path) => Config::from_json(&read_text(path)?)?,
        None => Config::default(),
    };
    if let Some(n) = g.samples {
        config.samples = n;
    }
    if let Some(t) = g.tol_critical {
        config.tol_critical = t;
    }
    if let Some(s) = g.seed {
        config.seed = s;
    }
    config.validate()?;
    Ok(config)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Curve { .. } => "curve gen",
        Command::Invariants(_) => "invariants",
        Command::EffectiveSpectrum { .. } => "effective-spectrum",
        Command::Critical { .. } => "critical",
        Command::Sf { .. } => "sf",
        Command::HopfSpectrum { .. } => "hopf-spectrum",
        Command::Tile { .. } => "tile",
        Command::Calugareanu { .. } => "calugareanu",
        Command::ModelNorm { .. } => "model-norm",
        Command::DeformSweep { .. } => "deform-sweep",
    }
}

fn emit(cli: &Cli, config: &Config, result: Value) -> CliResult<()> {
    let doc = json!({ "command": command_name(&cli.command), "config": to_value(config)?, "result": result });
    let text = if cli.global.pretty {
        pretty_table(&doc)?
    } else {
        to_json_string(&doc)?
    };
    match &cli.global.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::io(format!("stdout: {e}"))),
    }
}

fn report(f: &Failure) -> ExitCode {
    let doc = json!({ "error": { "kind": f.kind, "message": f.message }, "exit_code": f.code });
    eprint!(
        "{}",
        to_json_string(&doc).unwrap_or_else(|_| format!("{doc}\n"))
    );
    ExitCode::from(f.code)
}

fn configure_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("LINKFLUX_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| {
            Failure::usage(format!(
                "LINKFLUX_THREADS must be a positive integer, got {v:?}"
            ))
        })?;
        if n == 0 {
            return Err(Failure::usage("LINKFLUX_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return report(&Failure::usage(e.to_string().trim().to_string()));
        }
    };
    let outcome = configure_threads()
        .and_then(|_| build_config(&cli.global))
        .and_then(|config| {
            let result = run(&cli, &config)?;
            emit(&cli, &config, result)
        });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => report(&f),
    }
}
