//! Command-line front end: identity suites, bases, integrals, approximation
//! certificates, numeric cross-checks and grid samples.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cubemean::approx::{certify_best_approx, weighted_l1_error, OnesidedStrategy, Optimality};
use cubemean::harmonic::{graded_basis, BasisRequest};
use cubemean::integrate::{integrate, CubeDomain, Region, Weight};
use cubemean::limits::Limits;
use cubemean::oracle::{numeric_integrate, QuadratureSpec};
use cubemean::parse::{parse_poly, parse_unipoly, ExprSource};
use cubemean::report::{self, float17};
use cubemean::scalar::{parse_rational, rational_string, Scalar};
use cubemean::verify::{
    corollary1_profiles, pizzetti_profiles, run_inputs, run_suite, IdentityKind, IdentityReport, IdentitySpec,
    LabeledPoly, DEFAULT_MAX_DEGREE,
};
use cubemean::{Cube, Poly, Rational, UniPoly};

#[derive(Parser, Debug)]
#[command(
    name = "cubemean",
    version,
    about = "Exact hypercube integrals and mean-value identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
struct DomainArgs {
    /// Dimension (at least 2).
    #[arg(long)]
    n: usize,
    /// Half side length, as "p/q" or an integer.
    #[arg(long, default_value = "1")]
    r: String,
}

#[derive(clap::Args, Debug, Clone)]
struct LimitArgs {
    /// Override the dimension limit.
    #[arg(long)]
    max_n: Option<usize>,
    /// Override the degree limit.
    #[arg(long)]
    max_degree: Option<u32>,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        let d = Limits::default();
        Limits {
            max_dim: self.max_n.unwrap_or(d.max_dim),
            max_degree: self.max_degree.unwrap_or(d.max_degree),
        }
    }
}

#[derive(clap::Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file (atomically) instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run identity suites over a basis or over given polynomials.
    Verify {
        #[command(flatten)]
        domain: DomainArgs,
        /// Maximum basis degree.
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        deg: u32,
        /// Weight indices for the volume identity.
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
        k: Vec<u32>,
        /// Polyharmonic orders for the Pizzetti identity.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        m: Vec<u32>,
        /// Identities to run: surface, volume, corollary1, pizzetti.
        #[arg(long, value_delimiter = ',', default_value = "surface,volume")]
        identities: Vec<String>,
        /// Profiles for corollary1/pizzetti, in `t` (defaults to the standard families).
        #[arg(long, allow_hyphen_values = true, value_delimiter = ';')]
        phi: Vec<String>,
        /// Verify these polynomials instead of a generated basis (repeatable).
        #[arg(long, allow_hyphen_values = true)]
        poly: Vec<String>,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Print a basis of (poly)harmonic polynomials.
    Basis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        deg: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Exact integral over the cube, its boundary or its diagonal set.
    Integrate {
        #[arg(long, default_value = "cube")]
        region: Region,
        #[command(flatten)]
        domain: DomainArgs,
        /// Weight `(r - M)^k / k!`.
        #[arg(long, default_value_t = 0, conflicts_with = "phi")]
        k: u32,
        /// General weight profile in `t`.
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Certificate for `h` as a best approximant from below to `f`.
    Approx {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        /// Also report the weighted error `∫ (f - h) φ''(r - M)`.
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
        /// Grid points per axis for the heuristic one-sidedness check.
        #[arg(long, default_value_t = 41)]
        grid: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Maximum relative deviation between exact and numeric integrals.
    Crosscheck {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Regions to check (default: all three).
        #[arg(long, value_delimiter = ',', default_value = "cube,boundary,diagonal")]
        region: Vec<Region>,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        k: Vec<u32>,
        /// Gauss–Legendre points per axis.
        #[arg(long, default_value_t = 24)]
        points: usize,
        /// Deviation above which the check fails.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// CSV samples `x1,x2,f,h,f_minus_h` on a uniform square grid.
    Grid {
        #[arg(long, default_value = "1")]
        r: String,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        h: String,
        /// Points per axis.
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<cubemean::Error> for Failure {
    fn from(e: cubemean::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(2),
    }
}

fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Verify {
            domain,
            deg,
            k,
            m,
            identities,
            phi,
            poly,
            out,
            limits,
        } => cmd_verify(&domain, deg, &k, &m, &identities, &phi, &poly, &out, &limits.limits()),
        Command::Basis {
            n,
            deg,
            m,
            format,
            output,
            limits,
        } => cmd_basis(n, deg, m, format, output.as_deref(), &limits.limits()),
        Command::Integrate {
            region,
            domain,
            k,
            phi,
            poly,
            limits,
        } => cmd_integrate(region, &domain, k, phi.as_deref(), &poly, &limits.limits()),
        Command::Approx {
            domain,
            f,
            h,
            phi,
            grid,
            output,
            limits,
        } => cmd_approx(
            &domain,
            &f,
            &h,
            phi.as_deref(),
            grid,
            output.as_deref(),
            &limits.limits(),
        ),
        Command::Crosscheck {
            domain,
            poly,
            region,
            k,
            points,
            tol,
            limits,
        } => cmd_crosscheck(&domain, &poly, &region, &k, points, tol, &limits.limits()),
        Command::Grid {
            r,
            f,
            h,
            points,
            output,
        } => cmd_grid(&r, &f, &h, points, output.as_deref()),
    }
}

fn parse_r(s: &str) -> Result<Rational, Failure> {
    parse_rational(s).ok_or_else(|| Failure::Usage(format!("invalid rational '{}'", s)))
}

fn build_domain(args: &DomainArgs, limits: &Limits) -> Result<Cube, Failure> {
    limits.check_dim(args.n)?;
    Ok(CubeDomain::new(args.n, parse_r(&args.r)?)?)
}

fn read_poly(text: &str, n: usize, limits: &Limits) -> Result<Poly, Failure> {
    let p = parse_poly(ExprSource::with_dim(text, n)).map_err(|e| Failure::Usage(format!("'{}': {}", text, e)))?;
    limits.check_degree(p.degree().unwrap_or(0))?;
    Ok(p)
}

fn read_profile(text: &str) -> Result<UniPoly, Failure> {
    parse_unipoly(ExprSource::new(text)).map_err(|e| Failure::Usage(format!("'{}': {}", text, e)))
}

/// Writes to `path` via a temporary file in the same directory, or to stdout.
fn emit(output: Option<&Path>, contents: &str) -> CmdResult {
    let io_err = |e: std::io::Error| Failure::Usage(format!("write failed: {}", e));
    match output {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes()).map_err(io_err)?;
            stdout.flush().map_err(io_err)
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
                _ => PathBuf::from("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
            tmp.write_all(contents.as_bytes()).map_err(io_err)?;
            tmp.persist(path).map_err(|e| io_err(e.error))?;
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    domain: &DomainArgs,
    deg: u32,
    ks: &[u32],
    ms: &[u32],
    identities: &[String],
    phis: &[String],
    polys: &[String],
    out: &OutputArgs,
    limits: &Limits,
) -> CmdResult {
    let d = build_domain(domain, limits)?;
    limits.check_degree(deg)?;
    let kinds = identities
        .iter()
        .map(|s| s.parse::<IdentityKind>())
        .collect::<Result<Vec<_>, _>>()?;
    let profiles = phis.iter().map(|s| read_profile(s)).collect::<Result<Vec<_>, _>>()?;

    let mut harmonic_specs = Vec::new();
    let mut pizzetti_specs: Vec<(u32, Vec<IdentitySpec>)> = Vec::new();
    for kind in kinds {
        match kind {
            IdentityKind::SurfaceMean => harmonic_specs.push(IdentitySpec::SurfaceMean),
            IdentityKind::VolumeMean => harmonic_specs.extend(ks.iter().map(|&k| IdentitySpec::VolumeMean { k })),
            IdentityKind::Corollary1 => {
                let family = if profiles.is_empty() {
                    corollary1_profiles()
                } else {
                    profiles.clone()
                };
                harmonic_specs.extend(family.into_iter().map(|phi| IdentitySpec::Corollary1 { phi }));
            }
            IdentityKind::Pizzetti => {
                for &m in ms {
                    let family = if profiles.is_empty() {
                        pizzetti_profiles(m)
                    } else {
                        profiles.clone()
                    };
                    pizzetti_specs.push((
                        m,
                        family
                            .into_iter()
                            .map(|phi| IdentitySpec::Pizzetti { m, phi })
                            .collect(),
                    ));
                }
            }
        }
    }

    let mut reports: Vec<IdentityReport> = Vec::new();
    if polys.is_empty() {
        let req = |m| BasisRequest {
            n: d.n(),
            max_degree: deg,
            m,
        };
        if !harmonic_specs.is_empty() {
            reports.extend(run_suite(req(1), &d, &harmonic_specs)?);
        }
        for (m, specs) in &pizzetti_specs {
            reports.extend(run_suite(req(*m), &d, specs)?);
        }
    } else {
        let inputs = polys
            .iter()
            .map(|s| {
                Ok(LabeledPoly {
                    label: s.clone(),
                    poly: read_poly(s, d.n(), limits)?,
                })
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        let mut specs = harmonic_specs;
        specs.extend(pizzetti_specs.into_iter().flat_map(|(_, s)| s));
        reports.extend(run_inputs(&inputs, &d, &specs)?);
    }

    let text = match out.format {
        Format::Json => report::to_json(&reports)?,
        Format::Csv => report::to_csv(&reports)?,
        Format::Text => return Err(Failure::Usage("verify supports --format json or csv".into())),
    };
    emit(out.output.as_deref(), &text)?;
    if report::all_pass(&reports) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

#[derive(Serialize)]
struct BasisRow {
    label: String,
    degree: u32,
    poly: String,
}

fn cmd_basis(n: usize, deg: u32, m: u32, format: Format, output: Option<&Path>, limits: &Limits) -> CmdResult {
    limits.check_dim(n)?;
    limits.check_degree(deg)?;
    if n == 0 || m == 0 {
        return Err(Failure::Usage("basis needs n >= 1 and m >= 1".into()));
    }
    let basis = graded_basis::<Rational>(BasisRequest { n, max_degree: deg, m });
    let text = match format {
        Format::Text => basis.elements.iter().map(|p| format!("{}\n", p)).collect::<String>(),
        Format::Json => {
            let rows: Vec<BasisRow> = (0..basis.len())
                .map(|i| BasisRow {
                    label: basis.label(i),
                    degree: basis.degrees[i],
                    poly: basis.elements[i].to_string(),
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&rows).map_err(|e| Failure::Usage(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("label,degree,poly\n");
            for i in 0..basis.len() {
                s.push_str(&format!(
                    "{},{},\"{}\"\n",
                    basis.label(i),
                    basis.degrees[i],
                    basis.elements[i]
                ));
            }
            s
        }
    };
    emit(output, &text)
}

fn cmd_integrate(
    region: Region,
    domain: &DomainArgs,
    k: u32,
    phi: Option<&str>,
    poly: &str,
    limits: &Limits,
) -> CmdResult {
    let d = build_domain(domain, limits)?;
    let p = read_poly(poly, d.n(), limits)?;
    let w = match phi {
        Some(s) => Weight::Profile(read_profile(s)?),
        None => Weight::OmegaK(k),
    };
    let value = integrate(&p, &d, region, &w)?;
    emit(None, &format!("{}\n", rational_string(&value)))
}

fn cmd_approx(
    domain: &DomainArgs,
    f: &str,
    h: &str,
    phi: Option<&str>,
    grid: usize,
    output: Option<&Path>,
    limits: &Limits,
) -> CmdResult {
    let d = build_domain(domain, limits)?;
    let (fp, hp) = (read_poly(f, d.n(), limits)?, read_poly(h, d.n(), limits)?);
    let strategy = OnesidedStrategy {
        grid_per_axis: grid,
        ..OnesidedStrategy::default()
    };
    let cert = certify_best_approx(&fp, &hp, &d, &strategy)?;
    let mut json = cert.to_json();
    if let Some(s) = phi {
        let profile = read_profile(s)?;
        json.weighted_l1_error = Some(weighted_l1_error(&fp, &hp, &d, &profile)?.to_json(&profile));
    }
    let mut text = serde_json::to_string_pretty(&json).map_err(|e| Failure::Usage(e.to_string()))?;
    text.push('\n');
    emit(output, &text)?;
    match cert.optimality() {
        Optimality::NotEstablished => Err(Failure::Verification),
        _ => Ok(()),
    }
}

fn cmd_crosscheck(
    domain: &DomainArgs,
    poly: &str,
    regions: &[Region],
    ks: &[u32],
    points: usize,
    tol: f64,
    limits: &Limits,
) -> CmdResult {
    let d = build_domain(domain, limits)?;
    let p = read_poly(poly, d.n(), limits)?;
    let q = QuadratureSpec::new(points)?;
    let mut worst = 0.0f64;
    for &region in regions {
        for &k in ks {
            let w = Weight::OmegaK(k);
            let exact = integrate(&p, &d, region, &w)?.to_f64();
            let numeric = numeric_integrate(&p, &d, region, &w, &q)?;
            worst = worst.max((numeric - exact).abs() / exact.abs().max(1.0));
        }
    }
    emit(None, &format!("{}\n", float17(worst)))?;
    if worst <= tol {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_grid(r: &str, f: &str, h: &str, points: usize, output: Option<&Path>) -> CmdResult {
    let d = CubeDomain::new(2, parse_r(r)?)?;
    let parse2 =
        |s: &str| parse_poly(ExprSource::with_dim(s, 2)).map_err(|e| Failure::Usage(format!("'{}': {}", s, e)));
    let (fp, hp) = (parse2(f)?, parse2(h)?);
    if points == 0 {
        return Err(Failure::Usage("grid needs at least one point per axis".into()));
    }
    let axis = cubemean::approx::grid_axis(points, d.r());
    let mut text = String::from("x1,x2,f,h,f_minus_h\n");
    for x1 in &axis {
        for x2 in &axis {
            let pt = [x1.clone(), x2.clone()];
            let fv = fp.evaluate(&pt)?;
            let hv = hp.evaluate(&pt)?;
            let diff = fv.clone() - hv.clone();
            text.push_str(&format!(
                "{},{},{},{},{}\n",
                float17(x1.to_f64()),
                float17(x2.to_f64()),
                float17(fv.to_f64()),
                float17(hv.to_f64()),
                float17(diff.to_f64())
            ));
        }
    }
    emit(output, &text)
}
