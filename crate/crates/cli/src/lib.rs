//! Command-line front end: one subcommand per solver operation, file-based
//! CSV/JSON inputs and outputs, deterministic formatting.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 domain
//! outcome promoted by `--strict` (a Violated verdict or a diverged branch
//! point).

mod output;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use clamp4::assemble::{assemble_1d, assemble_radial, green_matrix, solve};
use clamp4::cone::{project_cone, EnergyInnerProduct};
use clamp4::grid::{Grid, Profile};
use clamp4::operator::{
    compose, factor_anti_diffusive, trivial_factor, FactorPair, FourthOrderCoeffs,
    SecondOrderCoeffs,
};
use clamp4::semilinear::{
    branch_sweep_with, lambda_star_bound, lambda_star_bracket, Nonlinearity, SemilinearProblem,
};
use clamp4::sign::{check_sign_preserving, gamma_structure, region_map, RegionMapConfig, Verdict};
use clamp4::spectral::principal_eigenpair;
use clamp4::willmore::{willmore_solve, WillmoreProblem};

use output::{g17, json_object, sink, write_csv, write_profile_csv};

/// Run the CLI on the given argument list and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version to stdout with success, everything else is usage
            // text on stderr
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

#[derive(Debug)]
enum AppError {
    Core(clamp4::Error),
    Io(std::io::Error),
    Input(String),
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Core(e) => write!(f, "{e}"),
            AppError::Io(e) => write!(f, "{e}"),
            AppError::Input(s) => write!(f, "{s}"),
        }
    }
}

impl AppError {
    fn exit_code(&self) -> i32 {
        match self {
            AppError::Core(e) => match e {
                clamp4::Error::InvalidInput(_)
                | clamp4::Error::OutOfRange(_)
                | clamp4::Error::DegenerateInput(_) => 2,
                _ => 3,
            },
            AppError::Io(_) | AppError::Input(_) => 2,
        }
    }
}

impl From<clamp4::Error> for AppError {
    fn from(e: clamp4::Error) -> Self {
        AppError::Core(e)
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}

type AppResult<T> = Result<T, AppError>;

#[derive(Parser)]
#[command(
    name = "clamp4",
    version,
    about = "Fourth-order clamped boundary-value solvers"
)]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum Factorization {
    /// Trivial split for lambda <= 0, weighted split for lambda > 0.
    #[default]
    Auto,
    Trivial,
    AntiDiffusive,
}

#[derive(Subcommand)]
enum Command {
    /// Compose a factor pair for u'''' + a u''' + lambda u'' and dump the
    /// fourth-order coefficients as CSV
    #[command(allow_negative_numbers = true)]
    Compose {
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t)]
        factorization: Factorization,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Build a factor pair and dump its second-order coefficients as CSV
    #[command(allow_negative_numbers = true)]
    Factor {
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t)]
        factorization: Factorization,
        /// Output CSV path (stdout when omitted); with a file, the
        /// ellipticity constant is reported as JSON on stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve u'''' + a u''' + lambda u'' = f clamped on the interval
    #[command(allow_negative_numbers = true)]
    Solve1d {
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        #[arg(long)]
        n: usize,
        /// Right-hand side: const:<value> or a CSV file with header x,f
        #[arg(long)]
        rhs: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve B lap^2 u - T lap u = f for radial u on a ball or annulus
    #[command(allow_negative_numbers = true)]
    Solveradial {
        #[arg(long = "B", default_value_t = 1.0)]
        big_b: f64,
        #[arg(long = "T", default_value_t = 0.0)]
        big_t: f64,
        #[arg(long, default_value_t = 1)]
        dim: u32,
        /// Inner radius: selects the annulus instead of the ball
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rhs: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the dense Green matrix with node coordinates in the first
    /// row and column
    #[command(allow_negative_numbers = true)]
    Green {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the strong sign-preserving property of a discrete operator
    #[command(allow_negative_numbers = true)]
    Check {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long)]
        n: usize,
        /// Relative positivity tolerance on Green-matrix entries
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Also report the sign structure of gamma = L1 u for the f = -1
        /// solution (interval operator only)
        #[arg(long)]
        gamma: bool,
        /// Exit 4 on a Violated verdict
        #[arg(long)]
        strict: bool,
    },
    /// Map sign-preservation verdicts over an (a, lambda) lattice
    #[command(allow_negative_numbers = true)]
    Regionmap {
        #[arg(long = "a-min")]
        a_min: f64,
        #[arg(long = "a-max")]
        a_max: f64,
        #[arg(long = "l-min")]
        l_min: f64,
        #[arg(long = "l-max")]
        l_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit 4 when any cell is Violated
        #[arg(long)]
        strict: bool,
    },
    /// Principal eigenpair of B lap^2 - T lap with clamped conditions
    #[command(allow_negative_numbers = true)]
    Eigen {
        #[arg(long = "B", default_value_t = 1.0)]
        big_b: f64,
        #[arg(long = "T", default_value_t = 0.0)]
        big_t: f64,
        #[arg(long, default_value_t = 1)]
        dim: u32,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        maxit: usize,
        /// Also write the eigenfunction as x,phi CSV
        #[arg(long)]
        phi: Option<PathBuf>,
    },
    /// Monotone iteration for B lap^2 u - T lap u = -lambda/(1+u)^2
    #[command(allow_negative_numbers = true)]
    Mems {
        #[arg(long = "B", default_value_t = 1.0)]
        big_b: f64,
        #[arg(long = "T", default_value_t = 0.0)]
        big_t: f64,
        #[arg(long, default_value_t = 1)]
        dim: u32,
        #[arg(long)]
        n: usize,
        /// Branch points, ascending (repeatable)
        #[arg(long = "lambda")]
        lambdas: Vec<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        maxit: usize,
        /// Bracket the pull-in threshold instead of sweeping a branch
        #[arg(long)]
        find_lambda_star: bool,
        /// Starting upper probe for the bracket (default: the eigenvalue
        /// bound when finite)
        #[arg(long)]
        lambda_hi0: Option<f64>,
        #[arg(long, default_value_t = 1e-6)]
        tol_lambda: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit 4 when any branch point diverged
        #[arg(long)]
        strict: bool,
    },
    /// Damped Newton for the quasi-linear clamped problem
    #[command(allow_negative_numbers = true)]
    Willmore {
        #[arg(long, default_value_t = 2.5)]
        alpha: f64,
        #[arg(long = "B", default_value_t = 1.0)]
        big_b: f64,
        #[arg(long = "T", default_value_t = 0.0)]
        big_t: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rhs: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        maxit: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Moreau decomposition u = v + w in the clamped energy inner product
    #[command(allow_negative_numbers = true)]
    Moreau {
        #[arg(long = "B", default_value_t = 1.0)]
        big_b: f64,
        #[arg(long = "T", default_value_t = 0.0)]
        big_t: f64,
        #[arg(long)]
        n: usize,
        /// Input profile as CSV with header x,u
        #[arg(long)]
        input: PathBuf,
        /// Output CSV x,u,v,w; the gap is reported as JSON on stdout
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Print the package version
    Version,
}

/// Operator selection shared by `green` and `check`: either the interval
/// family u'''' + a u''' + lambda u'' or the radial B lap^2 - T lap.
#[derive(Debug, clap::Args)]
struct OperatorArgs {
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long = "B")]
    big_b: Option<f64>,
    #[arg(long = "T")]
    big_t: Option<f64>,
    #[arg(long)]
    dim: Option<u32>,
    #[arg(long)]
    rho: Option<f64>,
}

impl OperatorArgs {
    fn is_radial(&self) -> bool {
        self.big_b.is_some() || self.big_t.is_some() || self.dim.is_some() || self.rho.is_some()
    }

    fn build(&self, n: usize) -> AppResult<(clamp4::banded::BandedMatrix, Grid)> {
        if self.is_radial() {
            if self.a.is_some() || self.lambda.is_some() {
                return Err(AppError::Input(
                    "--a/--lambda select the interval operator; they cannot be \
                     combined with --B/--T/--dim/--rho"
                        .into(),
                ));
            }
            let g = radial_grid(self.dim.unwrap_or(1), self.rho, n)?;
            let m = assemble_radial(self.big_b.unwrap_or(1.0), self.big_t.unwrap_or(0.0), &g)?;
            Ok((m, g))
        } else {
            let g = Grid::interval(n)?;
            let coeffs = FourthOrderCoeffs::constant(
                n,
                1.0,
                self.a.unwrap_or(0.0),
                self.lambda.unwrap_or(0.0),
                0.0,
                0.0,
            );
            let m = assemble_1d(&coeffs, &g)?;
            Ok((m, g))
        }
    }
}

/// Factor pair whose L1 defines gamma for the interval operator: the
/// factorization covering (a, lambda) when one exists, gamma = u''
/// otherwise.
fn gamma_factor_pair(a: f64, lambda: f64, g: &Grid) -> AppResult<FactorPair> {
    let fp = if lambda <= 0.0 {
        trivial_factor(a, lambda, g)?
    } else if lambda < (a * a + std::f64::consts::PI * std::f64::consts::PI) / 4.0 {
        factor_anti_diffusive(a, lambda, g)?
    } else {
        let identity = SecondOrderCoeffs::constant(g.n(), 1.0, 0.0, 0.0);
        FactorPair::new(identity.clone(), identity, 1.0)?
    };
    Ok(fp)
}

fn radial_grid(dim: u32, rho: Option<f64>, n: usize) -> AppResult<Grid> {
    Ok(match rho {
        Some(r) => Grid::annulus(r, dim, n)?,
        None => Grid::ball(dim, n)?,
    })
}

fn build_factor_pair(a: f64, lambda: f64, kind: Factorization, g: &Grid) -> AppResult<FactorPair> {
    let fp = match kind {
        Factorization::Trivial => trivial_factor(a, lambda, g)?,
        Factorization::AntiDiffusive => factor_anti_diffusive(a, lambda, g)?,
        Factorization::Auto => {
            if lambda <= 0.0 {
                trivial_factor(a, lambda, g)?
            } else {
                factor_anti_diffusive(a, lambda, g)?
            }
        }
    };
    Ok(fp)
}

/// Parse `const:<value>` or read a two-column CSV (header line skipped) into
/// a profile on `grid`.
fn parse_profile(spec: &str, grid: &Grid) -> AppResult<Profile> {
    if let Some(v) = spec.strip_prefix("const:") {
        let c: f64 = v
            .parse()
            .map_err(|_| AppError::Input(format!("bad constant value {v:?}")))?;
        return Ok(Profile::constant(grid.clone(), c)?);
    }
    read_profile_csv(Path::new(spec), grid)
}

fn read_profile_csv(path: &Path, grid: &Grid) -> AppResult<Profile> {
    let text = std::fs::read_to_string(path)?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            continue; // header
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut cols = line.split(',');
        let (x, v) = (cols.next(), cols.next());
        let v = v.or(x).ok_or_else(|| {
            AppError::Input(format!("{}: malformed line {}", path.display(), i + 1))
        })?;
        let v: f64 = v.trim().parse().map_err(|_| {
            AppError::Input(format!("{}: bad value on line {}", path.display(), i + 1))
        })?;
        values.push(v);
    }
    if values.len() != grid.n() {
        return Err(AppError::Input(format!(
            "{}: {} data rows but the grid has {} nodes",
            path.display(),
            values.len(),
            grid.n()
        )));
    }
    Ok(Profile::new(grid.clone(), values)?)
}

/// Non-finite values have no JSON literal; render them as null.
fn json_num(x: f64) -> String {
    if x.is_finite() {
        g17(x)
    } else {
        "null".into()
    }
}

fn execute(cmd: Command) -> AppResult<i32> {
    match cmd {
        Command::Compose {
            a,
            lambda,
            n,
            factorization,
            dump,
        } => {
            let g = Grid::interval(n)?;
            let fp = build_factor_pair(a, lambda, factorization, &g)?;
            let c = compose(&fp, &g)?;
            let mut out = sink(dump.as_deref())?;
            write_csv(
                &mut out,
                "x,a4,a3,a2,a1,a0",
                g.nodes().iter().enumerate().map(|(j, &x)| {
                    vec![
                        g17(x),
                        g17(c.a4[j]),
                        g17(c.a3[j]),
                        g17(c.a2[j]),
                        g17(c.a1[j]),
                        g17(c.a0[j]),
                    ]
                }),
            )?;
            Ok(0)
        }
        Command::Factor {
            a,
            lambda,
            n,
            factorization,
            out,
        } => {
            let g = Grid::interval(n)?;
            let fp = build_factor_pair(a, lambda, factorization, &g)?;
            let to_file = out.is_some();
            let mut w = sink(out.as_deref())?;
            write_csv(
                &mut w,
                "x,a1,b1,c1,a2,b2,c2",
                g.nodes().iter().enumerate().map(|(j, &x)| {
                    vec![
                        g17(x),
                        g17(fp.l1.a[j]),
                        g17(fp.l1.b[j]),
                        g17(fp.l1.c[j]),
                        g17(fp.l2.a[j]),
                        g17(fp.l2.b[j]),
                        g17(fp.l2.c[j]),
                    ]
                }),
            )?;
            drop(w);
            if to_file {
                println!("{}", json_object(&[("eta", g17(fp.eta))]));
            }
            Ok(0)
        }
        Command::Solve1d {
            a,
            lambda,
            n,
            rhs,
            out,
        } => {
            let g = Grid::interval(n)?;
            let coeffs = FourthOrderCoeffs::constant(n, 1.0, a, lambda, 0.0, 0.0);
            let m = assemble_1d(&coeffs, &g)?;
            let f = parse_profile(&rhs, &g)?;
            let u = solve(&m, &f)?;
            let mut w = sink(out.as_deref())?;
            write_profile_csv(&mut w, "u", g.nodes(), u.values())?;
            Ok(0)
        }
        Command::Solveradial {
            big_b,
            big_t,
            dim,
            rho,
            n,
            rhs,
            out,
        } => {
            let g = radial_grid(dim, rho, n)?;
            let m = assemble_radial(big_b, big_t, &g)?;
            let f = parse_profile(&rhs, &g)?;
            let u = solve(&m, &f)?;
            let mut w = sink(out.as_deref())?;
            write_profile_csv(&mut w, "u", g.nodes(), u.values())?;
            Ok(0)
        }
        Command::Green { op, n, out } => {
            let (m, g) = op.build(n)?;
            let green = green_matrix(&m, &g)?;
            let mut w = sink(out.as_deref())?;
            // coordinates frame the matrix; the corner is zero padding
            let header = std::iter::once(g17(0.0))
                .chain(g.nodes().iter().map(|&x| g17(x)))
                .collect::<Vec<_>>()
                .join(",");
            writeln!(w, "{header}")?;
            for i in 0..n {
                let row = std::iter::once(g17(g.nodes()[i]))
                    .chain((0..n).map(|j| g17(green.get(i, j))))
                    .collect::<Vec<_>>()
                    .join(",");
                writeln!(w, "{row}")?;
            }
            Ok(0)
        }
        Command::Check {
            op,
            n,
            tol,
            gamma,
            strict,
        } => {
            let (m, g) = op.build(n)?;
            let report = check_sign_preserving(&m, &g, tol)?;
            let location = match report.violation_location {
                Some((i, j)) => format!("[{i}, {j}]"),
                None => "null".into(),
            };
            let mut fields = vec![
                ("verdict", format!("\"{}\"", report.verdict)),
                (
                    "min_green_normalized",
                    json_num(report.min_green_normalized),
                ),
                ("violation_location", location),
                (
                    "boundary_second_derivatives",
                    format!(
                        "[{}, {}]",
                        json_num(report.boundary_second_derivatives.0),
                        json_num(report.boundary_second_derivatives.1)
                    ),
                ),
            ];
            if gamma {
                if op.is_radial() {
                    return Err(AppError::Input(
                        "--gamma applies to the interval operator".into(),
                    ));
                }
                let (a, lambda) = (op.a.unwrap_or(0.0), op.lambda.unwrap_or(0.0));
                let u = solve(&m, &Profile::constant(g.clone(), -1.0)?)?;
                let fp = gamma_factor_pair(a, lambda, &g)?;
                let rep = gamma_structure(&u, &fp)?;
                let opt = |v: Option<f64>| v.map_or("null".into(), json_num);
                fields.push((
                    "gamma",
                    json_object(&[
                        ("y0", opt(rep.y0)),
                        ("y1", opt(rep.y1)),
                        (
                            "gamma_boundary",
                            format!(
                                "[{}, {}]",
                                json_num(rep.gamma_boundary.0),
                                json_num(rep.gamma_boundary.1)
                            ),
                        ),
                        ("pattern_valid", rep.pattern_valid.to_string()),
                    ]),
                ));
            }
            println!("{}", json_object(&fields));
            Ok(if strict && report.verdict == Verdict::Violated {
                4
            } else {
                0
            })
        }
        Command::Regionmap {
            a_min,
            a_max,
            l_min,
            l_max,
            steps,
            n,
            tol,
            out,
            strict,
        } => {
            let cfg = RegionMapConfig {
                a_range: (a_min, a_max),
                lambda_range: (l_min, l_max),
                steps,
                n,
                tol,
            };
            let cells = region_map(&cfg)?;
            let mut w = sink(out.as_deref())?;
            write_csv(
                &mut w,
                "a,lambda,min_green,in_theorem_region,verdict",
                cells.iter().map(|c| {
                    vec![
                        g17(c.a),
                        g17(c.lambda),
                        g17(c.min_green_normalized),
                        c.in_theorem_region.to_string(),
                        c.verdict.to_string(),
                    ]
                }),
            )?;
            let any_violated = cells.iter().any(|c| c.verdict == Verdict::Violated);
            Ok(if strict && any_violated { 4 } else { 0 })
        }
        Command::Eigen {
            big_b,
            big_t,
            dim,
            rho,
            n,
            tol,
            maxit,
            phi,
        } => {
            let g = radial_grid(dim, rho, n)?;
            let m = assemble_radial(big_b, big_t, &g)?;
            let pair = principal_eigenpair(&m, &g, tol, maxit)?;
            println!(
                "{}",
                json_object(&[
                    ("mu1", json_num(pair.mu1)),
                    ("iterations", pair.iterations.to_string()),
                    ("residual", json_num(pair.residual)),
                ])
            );
            if let Some(path) = phi {
                let mut w = sink(Some(&path))?;
                write_profile_csv(&mut w, "phi", g.nodes(), pair.phi1.values())?;
            }
            Ok(0)
        }
        Command::Mems {
            big_b,
            big_t,
            dim,
            n,
            lambdas,
            tol,
            maxit,
            find_lambda_star,
            lambda_hi0,
            tol_lambda,
            out,
            strict,
        } => {
            let g = Grid::ball(dim, n)?;
            let template = SemilinearProblem::new(big_b, big_t, g, Nonlinearity::mems(), 0.0)?;
            if find_lambda_star {
                let bound = lambda_star_bound(&template)?;
                let hi0 = lambda_hi0.unwrap_or(if bound.is_finite() { bound } else { 1.0 });
                let (lo, hi) = lambda_star_bracket(&template, hi0, tol_lambda)?;
                println!(
                    "{}",
                    json_object(&[
                        ("lo", json_num(lo)),
                        ("hi", json_num(hi)),
                        ("bound", json_num(bound)),
                    ])
                );
                return Ok(0);
            }
            if lambdas.is_empty() {
                return Err(AppError::Input(
                    "pass at least one --lambda or use --find-lambda-star".into(),
                ));
            }
            let sweep = branch_sweep_with(
                &template,
                &lambdas,
                tol,
                maxit,
                clamp4::exec::Exec::default(),
            )?;
            let mut w = sink(out.as_deref())?;
            write_csv(
                &mut w,
                "lambda,converged,iterations,min_u",
                sweep.points.iter().map(|p| {
                    vec![
                        g17(p.lambda),
                        p.converged.to_string(),
                        p.iterations.to_string(),
                        g17(p.min_u),
                    ]
                }),
            )?;
            let any_diverged = sweep.points.iter().any(|p| !p.converged);
            Ok(if strict && any_diverged { 4 } else { 0 })
        }
        Command::Willmore {
            alpha,
            big_b,
            big_t,
            n,
            rhs,
            tol,
            maxit,
            out,
        } => {
            let g = Grid::interval(n)?;
            let f = parse_profile(&rhs, &g)?;
            let p = WillmoreProblem::new(big_b, big_t, alpha, f)?;
            let u = willmore_solve(&p, tol, maxit)?;
            let mut w = sink(out.as_deref())?;
            write_profile_csv(&mut w, "u", g.nodes(), u.values())?;
            Ok(0)
        }
        Command::Moreau {
            big_b,
            big_t,
            n,
            input,
            out,
            tol,
        } => {
            let g = Grid::interval(n)?;
            let u = read_profile_csv(&input, &g)?;
            let ip = EnergyInnerProduct::new(big_b, big_t, g.clone())?;
            let split = project_cone(&u, &ip, tol)?;
            let mut w = sink(Some(&out))?;
            write_csv(
                &mut w,
                "x,u,v,w",
                (0..n).map(|j| {
                    vec![
                        g17(g.nodes()[j]),
                        g17(u.values()[j]),
                        g17(split.v.values()[j]),
                        g17(split.w.values()[j]),
                    ]
                }),
            )?;
            println!("{}", json_object(&[("gap", json_num(split.gap))]));
            Ok(0)
        }
        Command::Version => {
            println!("clamp4 {}", env!("CARGO_PKG_VERSION"));
            Ok(0)
        }
    }
}
