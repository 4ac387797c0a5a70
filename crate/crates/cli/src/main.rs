use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sga_pdm::algebra::AlgebraSignature;
use sga_pdm::catalog::{catalog_listing, make_potential, parse_params, Params, PotentialId};
use sga_pdm::mass::{read_mass_table, MassProfile, ProfileKind};
use sga_pdm::sga::YSolution;
use sga_pdm::solver::{parse_list, refine, Grid, OrderingParams};
use sga_pdm::verify::algebra_check::cmd_algebra_check;
use sga_pdm::verify::export::{cmd_export, curve_csv, potential_curve, read_json, to_json_string, ExportFormat};
use sga_pdm::verify::{cmd_verify, grid_for_window, total_potential, VerificationReport, VerifyRequest};
use sga_pdm::{Result, SgaError};

#[derive(Parser)]
#[command(name = "sga", version, about = "Position-dependent-mass spectra from the so(2,2) algebra")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the potential catalog.
    List {
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Evaluate a catalog potential at μ values.
    Eval {
        #[arg(long)]
        potential: PotentialId,
        #[arg(long, default_value = "")]
        params: String,
        /// Comma-separated μ values.
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
    },
    /// Refined spectrum of V(μ(x)) + U_eff on an x grid.
    Spectrum(RunArgs),
    /// Spectrum, formula inversion and invariance checks.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        /// Also rerun under the other two standard orderings.
        #[arg(long)]
        check_orderings: bool,
        /// Skip the half-line cutoff sensitivity rerun.
        #[arg(long)]
        no_boundary_check: bool,
        #[arg(long, default_value = "json")]
        format: ExportFormat,
    },
    /// Residuals of the structure equations, brackets and Casimirs.
    AlgebraCheck {
        #[arg(long, default_value_t = 0.0)]
        q: f64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        a: i8,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        b: i8,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        delta: f64,
        #[command(flatten)]
        profile: ProfileArgs,
        /// exponential:α, quadratic:α, linear:α or tanh:α:p
        #[arg(long, default_value = "exponential:1")]
        y: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0.2,2")]
        window: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert a JSON report, or write a potential curve.
    Export {
        /// JSON report written by `sga verify`.
        #[arg(long, conflicts_with = "potential")]
        report: Option<PathBuf>,
        #[arg(long)]
        potential: Option<PotentialId>,
        #[arg(long, default_value = "")]
        params: String,
        #[command(flatten)]
        profile: ProfileArgs,
        /// x grid of the curve, lo,hi,N.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<Grid>,
        #[arg(long, default_value = "csv")]
        format: ExportFormat,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ProfileArgs {
    /// constant[:m0], exponential:β, rational-arctan[:w] or tabulated
    #[arg(long, default_value = "constant")]
    profile: String,
    /// x0,μ0 with μ(x0) = μ0
    #[arg(long, allow_hyphen_values = true)]
    anchor: Option<String>,
    /// Two-column x,m CSV for the tabulated profile.
    #[arg(long)]
    mass_table: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    potential: PotentialId,
    #[arg(long, default_value = "")]
    params: String,
    #[command(flatten)]
    profile: ProfileArgs,
    /// eta,eps,rho or one of bdd, zk, gw
    #[arg(long, default_value = "bdd", allow_hyphen_values = true)]
    ordering: OrderingParams,
    /// x grid lo,hi,N (N even)
    #[arg(long, allow_hyphen_values = true, conflicts_with = "mu_window")]
    grid: Option<Grid>,
    /// μ window lo,hi; the x grid is its preimage
    #[arg(long, allow_hyphen_values = true)]
    mu_window: Option<String>,
    /// Interior points when the grid comes from a μ window.
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ProfileArgs {
    fn build(&self) -> Result<MassProfile> {
        let mut parts = self.profile.split(':');
        let kind = ProfileKind::parse(parts.next().unwrap_or_default())?;
        let params = parts
            .map(|t| t.parse::<f64>().map_err(|_| SgaError::validation(format!("bad profile parameter '{t}'"))))
            .collect::<Result<Vec<f64>>>()?;
        let anchor = match &self.anchor {
            Some(s) => {
                let v = parse_list(s, 2, "anchor")?;
                Some((v[0], v[1]))
            }
            None => None,
        };
        match kind {
            ProfileKind::UserTabulated => {
                let path = self
                    .mass_table
                    .as_ref()
                    .ok_or_else(|| SgaError::validation("the tabulated profile needs --mass-table"))?;
                let (x, m) = read_mass_table(path)?;
                let anchor = anchor.unwrap_or((x[0], 0.0));
                MassProfile::from_table(x, m, anchor)
            }
            // default anchor gives μ = e^{βx}/β
            ProfileKind::Exponential if anchor.is_none() => match params[..] {
                [beta] => MassProfile::exponential(beta, 0.0),
                _ => MassProfile::new(kind, &params, (0.0, 0.0)),
            },
            _ => MassProfile::new(kind, &params, anchor.unwrap_or((0.0, 0.0))),
        }
    }
}

fn window(s: &str, what: &str) -> Result<(f64, f64)> {
    let v = parse_list(s, 2, what)?;
    Ok((v[0], v[1]))
}

fn params_of(s: &str) -> Result<Params> {
    if s.trim().is_empty() {
        Ok(Params::new())
    } else {
        parse_params(s)
    }
}

fn y_solution(s: &str) -> Result<YSolution> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |i: usize| -> Result<f64> {
        parts
            .get(i)
            .ok_or_else(|| SgaError::validation(format!("--y '{s}' is missing a value")))?
            .parse::<f64>()
            .map_err(|_| SgaError::validation(format!("--y '{s}' has a non-numeric value")))
    };
    match parts[0] {
        "exponential" => Ok(YSolution::exponential(num(1)?)),
        "quadratic" => Ok(YSolution::quadratic(num(1)?)),
        "linear" => Ok(YSolution::linear(num(1)?)),
        "tanh" => {
            let p = num(2)?;
            if p < 1.0 || p.fract() != 0.0 {
                return Err(SgaError::validation("tanh power p must be a positive integer"));
            }
            Ok(YSolution::tanh_p(num(1)?, p as u32))
        }
        other => Err(SgaError::validation(format!("unknown y form '{other}'"))),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn request(run: &RunArgs) -> Result<VerifyRequest> {
    let mut req = VerifyRequest::new(run.potential, params_of(&run.params)?, run.profile.build()?)
        .with_ordering(run.ordering)
        .with_n(run.n)
        .with_k(run.k);
    req.grid = run.grid;
    if let Some(w) = &run.mu_window {
        let (lo, hi) = window(w, "mu-window")?;
        req = req.with_mu_window(lo, hi);
    }
    Ok(req)
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::List { format } => {
            let list = catalog_listing();
            if format == "json" {
                print!("{}", to_json_string(&list)?);
            } else {
                for e in list {
                    println!("{:<14} {:<8} mu in {:<14} V = {}", e.id.name(), format!("{:?}", e.value_type).to_lowercase(), e.mu_domain, e.potential);
                    println!("{:<14} params: {}; E = {}", "", e.params.join(", "), e.energy);
                }
            }
        }
        Cmd::Eval { potential, params, mu } => {
            let model = make_potential(potential, &params_of(&params)?)?;
            for t in mu.split(',') {
                let m: f64 = t.trim().parse().map_err(|_| SgaError::validation(format!("bad mu value '{t}'")))?;
                let v = model.eval_v(m)?;
                if v.im == 0.0 {
                    println!("{m:.16e} {:.16e}", v.re);
                } else {
                    println!("{m:.16e} {:.16e} {:.16e}", v.re, v.im);
                }
            }
        }
        Cmd::Spectrum(args) => {
            let req = request(&args)?;
            let model = make_potential(req.id, &req.params)?;
            let grid = match req.grid {
                Some(g) => g,
                None => grid_for_window(&req.profile, &model, req.mu_window.unwrap_or_else(|| model.default_mu_window()), req.n)?,
            };
            let v = |g: &Grid| total_potential(&model, &req.profile, req.ordering, g);
            let report = refine(&req.profile, &v, req.ordering, &grid, req.k, model.bound_threshold())?;
            emit(&to_json_string(&report)?, args.out.as_deref())?;
        }
        Cmd::Verify { run, check_orderings, no_boundary_check, format } => {
            let mut req = request(&run)?;
            req.check_orderings = check_orderings;
            req.boundary_check = !no_boundary_check;
            let report = cmd_verify(&req)?;
            match &run.out {
                Some(p) => cmd_export(&report, format, p)?,
                None => match format {
                    ExportFormat::Json => print!("{}", to_json_string(&report)?),
                    ExportFormat::Csv => print!("{}", sga_pdm::verify::export::report_csv(&report)?),
                },
            }
        }
        Cmd::AlgebraCheck { q, a, b, delta, profile, y, window: w, out } => {
            let sig = AlgebraSignature::new(a, b)?;
            let table = cmd_algebra_check(sig, q, delta, &profile.build()?, y_solution(&y)?, window(&w, "window")?)?;
            emit(&to_json_string(&table)?, out.as_deref())?;
        }
        Cmd::Export { report, potential, params, profile, grid, format, out } => match (report, potential) {
            (Some(path), _) => {
                let r: VerificationReport = read_json(&path)?;
                cmd_export(&r, format, &out)?;
            }
            (None, Some(id)) => {
                let model = make_potential(id, &params_of(&params)?)?;
                let grid = grid.ok_or_else(|| SgaError::validation("curve export needs --grid lo,hi,N"))?;
                let pts = potential_curve(&model, &profile.build()?, &grid)?;
                std::fs::write(&out, curve_csv(&model, &pts)?)?;
            }
            (None, None) => return Err(SgaError::validation("export needs --report or --potential")),
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
