//! Command-line front end: coefficients, closed forms, moment solves,
//! extrapolants and table reproduction.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Float;

use fpresum::extrapolant::{convergence_report, extrapolate_electric, extrapolate_magnetic, ExtrapolantResult};
use fpresum::heisenberg_euler::{exact_electric, exact_magnetic, weak_field_coeffs, ContinuationBranch};
use fpresum::moment_solver::{check_precision_rule, solve_moments, MomentSolution, SCHEMA_VERSION};
use fpresum::precision::{format_sci, DEFAULT_GUARD_DIGITS};
use fpresum::tables::{estimate_seconds, reference_table, CellOutcome, Field, RowMethod, Scale, TableRunner};
use fpresum::{Context, Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "fpresum",
    version,
    about = "Finite-part resummation of the weak-field Heisenberg-Euler series"
)]
struct RunConfig {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Csv)]
    format: Format,

    /// Significant digits printed per value (default: the working digits
    /// for coeffs and exact, 15 otherwise).
    #[arg(long, global = true)]
    sig: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ScaleArg {
    Desk,
    Full,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    Below,
    Above,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weak-field coefficients a_2..a_{n_max}.
    Coeffs {
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 40)]
        digits: u32,
    },
    /// Closed-form values.
    Exact {
        #[command(flatten)]
        fields: FieldValues,
        #[arg(long, default_value_t = 40)]
        digits: u32,
    },
    /// Solve the moment system and write the solution file.
    Solve {
        /// number of moments, d + 1
        #[arg(long)]
        moments: usize,
        /// working digits (default: moments + 20)
        #[arg(long)]
        digits: Option<u32>,
        /// cache directory, keyed by (d, digits, generator version)
        #[arg(long)]
        cache: Option<PathBuf>,
        /// solution file to write (default: standard output unless --cache)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the finite-part extrapolant.
    Extrapolate {
        #[command(flatten)]
        fields: FieldValues,
        /// solution file from `solve`
        #[arg(long, conflicts_with_all = ["moments", "digits"])]
        solution: Option<PathBuf>,
        /// number of moments to solve for when no solution file is given
        #[arg(long)]
        moments: Option<usize>,
        #[arg(long)]
        digits: Option<u32>,
        #[arg(long)]
        cache: Option<PathBuf>,
        /// summands of the finite-part tail (default 2d)
        #[arg(long)]
        terms: Option<usize>,
        /// side of the cut the electric values are taken on
        #[arg(long, value_enum, default_value_t = BranchArg::Below)]
        branch: BranchArg,
    },
    /// Recompute a reference table.
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        id: u8,
        #[arg(long, value_enum, default_value_t = ScaleArg::Desk)]
        scale: ScaleArg,
        /// permit the full-scale rows (thousands of moments)
        #[arg(long)]
        allow_long: bool,
        #[arg(long)]
        cache: Option<PathBuf>,
        /// file to write instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct FieldValues {
    /// magnetic field strength (repeatable)
    #[arg(long, allow_hyphen_values = true)]
    beta: Vec<String>,
    /// electric field strength (repeatable)
    #[arg(long, allow_hyphen_values = true)]
    kappa: Vec<String>,
}

impl FieldValues {
    /// (field, original text, value) for every requested strength.
    fn parse(&self, ctx: &Context) -> Result<Vec<(Field, String, Float)>> {
        if self.beta.is_empty() && self.kappa.is_empty() {
            return Err(Error::Config("give at least one --beta or --kappa".into()));
        }
        let tagged = self
            .beta
            .iter()
            .map(|s| (Field::Magnetic, s))
            .chain(self.kappa.iter().map(|s| (Field::Electric, s)));
        tagged
            .map(|(field, s)| {
                let x = ctx
                    .parse(s)
                    .map_err(|_| Error::Config(format!("{s:?} is not a decimal number")))?;
                if x <= 0 {
                    return Err(Error::Config(format!("field strength must be positive, got {s}")));
                }
                Ok((field, s.clone(), x))
            })
            .collect()
    }
}

/// Rows of strings under named columns, rendered in any output format.
struct Report {
    command: &'static str,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Report {
    fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Report {
            command,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Error::Io(e.to_string());
                w.write_record(&self.columns).map_err(io)?;
                for row in &self.rows {
                    w.write_record(row).map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
            }
            Format::Json => {
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
                            .collect();
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                let doc = serde_json::json!({
                    "schema": SCHEMA_VERSION,
                    "command": self.command,
                    "columns": self.columns,
                    "rows": rows,
                });
                Ok(serde_json::to_string_pretty(&doc)? + "\n")
            }
            Format::Pretty => {
                let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
                for row in &self.rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                let line = |cells: Vec<&str>| {
                    let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                    padded.join("  ").trim_end().to_string() + "\n"
                };
                let mut out = line(self.columns.clone());
                for row in &self.rows {
                    out += &line(row.iter().map(String::as_str).collect());
                }
                Ok(out)
            }
        }
    }
}

fn field_name(field: Field) -> &'static str {
    match field {
        Field::Magnetic => "magnetic",
        Field::Electric => "electric",
    }
}

fn cmd_coeffs(n_max: usize, digits: u32, sig: usize) -> Result<Report> {
    if n_max < 2 {
        return Err(Error::Config(format!("n_max must be at least 2, got {n_max}")));
    }
    let ctx = Context::with_precision(digits)?;
    let coeffs = weak_field_coeffs(n_max, &ctx)?;
    let mut report = Report::new("coeffs", &["n", "a_n", "a_n_exact"]);
    for n in 2..=n_max {
        report.rows.push(vec![
            n.to_string(),
            format_sci(coeffs.a(n), sig),
            coeffs.a_exact(n).to_string(),
        ]);
    }
    Ok(report)
}

fn cmd_exact(fields: &FieldValues, digits: u32, sig: usize) -> Result<Report> {
    let ctx = Context::with_precision(digits)?;
    let mut report = Report::new("exact", &["field", "strength", "re", "im"]);
    for (field, text, x) in fields.parse(&ctx)? {
        let (re, im) = match field {
            Field::Magnetic => (exact_magnetic(&x, &ctx)?, ctx.zero()),
            Field::Electric => {
                let v = exact_electric(&x, &ctx)?;
                (v.re, v.im)
            }
        };
        report.rows.push(vec![
            field_name(field).into(),
            text,
            format_sci(&re, sig),
            format_sci(&im, sig),
        ]);
    }
    Ok(report)
}

fn moments_to_d(moments: usize) -> Result<usize> {
    moments
        .checked_sub(1)
        .ok_or_else(|| Error::Config("at least one moment is required".into()))
}

/// Context for a solve, checking the precision rule before any work.
fn solve_context(d: usize, digits: Option<u32>) -> Result<Context> {
    let digits = digits.unwrap_or(d as u32 + 1 + DEFAULT_GUARD_DIGITS);
    if digits < d as u32 + 1 {
        return Err(Error::PrecisionRule {
            digits,
            moments: d + 1,
            required: d as u32 + 1,
        });
    }
    let ctx = Context::with_precision(digits)?;
    check_precision_rule(d, &ctx)?;
    Ok(ctx)
}

fn obtain_solution(d: usize, ctx: &Context, cache: Option<&Path>) -> Result<MomentSolution> {
    match cache {
        Some(dir) => MomentSolution::cached(d, ctx, dir),
        None => solve_moments(d, ctx),
    }
}

fn solution_summary(command: &'static str, sol: &MomentSolution, file: &str) -> Report {
    let mut report = Report::new(
        command,
        &[
            "d",
            "digits",
            "guard_digits",
            "relative_residual",
            "backward_error",
            "file",
        ],
    );
    report.rows.push(vec![
        sol.d.to_string(),
        sol.digits_used.to_string(),
        sol.guard_digits.to_string(),
        format_sci(&sol.relative_residual, 6),
        format_sci(&sol.backward_error, 6),
        file.to_string(),
    ]);
    report
}

enum Output {
    Report(Report),
    Raw(String),
}

fn cmd_solve(moments: usize, digits: Option<u32>, cache: Option<&Path>, output: Option<&Path>) -> Result<Output> {
    let d = moments_to_d(moments)?;
    let ctx = solve_context(d, digits)?;
    let sol = obtain_solution(d, &ctx, cache)?;
    let file = match (output, cache) {
        (Some(path), _) => {
            sol.save(path)?;
            path.display().to_string()
        }
        (None, Some(dir)) => dir
            .join(MomentSolution::cache_file_name(d, ctx.digits()))
            .display()
            .to_string(),
        (None, None) => return Ok(Output::Raw(sol.to_json()?)),
    };
    Ok(Output::Report(solution_summary("solve", &sol, &file)))
}

struct ExtrapolateArgs<'a> {
    fields: &'a FieldValues,
    solution: Option<&'a Path>,
    moments: Option<usize>,
    digits: Option<u32>,
    cache: Option<&'a Path>,
    terms: Option<usize>,
    branch: ContinuationBranch,
}

fn cmd_extrapolate(args: ExtrapolateArgs, sig: usize) -> Result<Report> {
    let (ctx, sol) = match (args.solution, args.moments) {
        (Some(path), _) => {
            let sol = MomentSolution::load(path)?;
            (sol.context()?, sol)
        }
        (None, Some(moments)) => {
            let d = moments_to_d(moments)?;
            let ctx = solve_context(d, args.digits)?;
            let sol = obtain_solution(d, &ctx, args.cache)?;
            (ctx, sol)
        }
        (None, None) => return Err(Error::Config("give --solution or --moments".into())),
    };
    let mut report = Report::new(
        "extrapolate",
        &[
            "field",
            "strength",
            "re",
            "im",
            "terms",
            "monotone_from",
            "truncation_estimate",
        ],
    );
    for (field, text, x) in args.fields.parse(&ctx)? {
        let r: ExtrapolantResult = match field {
            Field::Magnetic => extrapolate_magnetic(&x, &sol, args.terms, &ctx)?,
            Field::Electric => extrapolate_electric(&x, &sol, args.terms, args.branch, &ctx)?,
        };
        let conv = convergence_report(&r);
        report.rows.push(vec![
            field_name(field).into(),
            text,
            format_sci(&r.value.re, sig),
            format_sci(&r.value.im, sig),
            r.terms_used.to_string(),
            conv.monotone_from.to_string(),
            format_sci(&conv.truncation_estimate, 3),
        ]);
    }
    Ok(report)
}

fn cell_row(c: &CellOutcome, sig: usize) -> Vec<String> {
    let opt = |s: Option<&str>| s.unwrap_or("").to_string();
    let (computed_re, computed_im) = match &c.computed {
        Some(v) => (format_sci(&v.re, sig), format_sci(&v.im, sig)),
        None => (String::new(), String::new()),
    };
    let digits = |d: Option<u32>| match d {
        Some(u32::MAX) => "all".to_string(),
        Some(n) => n.to_string(),
        None => String::new(),
    };
    let (exact_re, exact_im) = match c.exact_digits {
        Some((re, im)) => (digits(Some(re)), digits(im)),
        None => (String::new(), String::new()),
    };
    vec![
        c.table.to_string(),
        c.block.to_string(),
        field_name(c.field).into(),
        c.row.label(),
        c.column.to_string(),
        opt(c.printed.map(|p| p.re)),
        opt(c.printed.and_then(|p| p.im)),
        computed_re,
        computed_im,
        c.matches.map_or(String::new(), |m| m.to_string()),
        exact_re,
        exact_im,
        opt(c.error.as_deref()),
    ]
}

fn cmd_table(id: u8, scale: Scale, allow_long: bool, cache: Option<&Path>, sig: usize) -> Result<Report> {
    let table = reference_table(id)?;
    if scale == Scale::Full {
        let estimate = estimate_seconds(table, scale);
        if !allow_long {
            return Err(Error::Config(format!(
                "full scale of table {id} is estimated at {:.0} s; rerun with --allow-long",
                estimate
            )));
        }
        eprintln!("table {id} full scale: estimated {estimate:.0} s");
    }
    let mut runner = TableRunner::new();
    if let Some(dir) = cache {
        for block in table.blocks {
            for row in block.rows {
                if let RowMethod::Extrapolant { moments } = row.method {
                    if scale == Scale::Desk && !row.method.is_desk() {
                        continue;
                    }
                    let ctx = Context::with_precision(row.method.digits())?;
                    let sol = MomentSolution::cached(moments - 1, &ctx, dir)?;
                    runner.insert_solution(ctx, sol);
                }
            }
        }
    }
    let cells = runner.run(table, scale);
    let mut report = Report::new(
        "table",
        &[
            "table",
            "block",
            "field",
            "row",
            "strength",
            "printed_re",
            "printed_im",
            "computed_re",
            "computed_im",
            "matches_printed",
            "exact_digits_re",
            "exact_digits_im",
            "error",
        ],
    );
    let printed = cells.iter().filter(|c| c.printed.is_some()).count();
    let matched = cells.iter().filter(|c| c.matches == Some(true)).count();
    for c in &cells {
        report.rows.push(cell_row(c, sig));
    }
    eprintln!("table {id}: {matched} of {printed} printed cells reproduced");
    Ok(report)
}

fn run(cfg: &RunConfig) -> Result<(Output, Option<PathBuf>)> {
    let sig = |default: usize| cfg.sig.unwrap_or(default).max(1);
    let out = match &cfg.command {
        Command::Coeffs { n_max, digits } => (
            Output::Report(cmd_coeffs(*n_max, *digits, sig(*digits as usize))?),
            None,
        ),
        Command::Exact { fields, digits } => (Output::Report(cmd_exact(fields, *digits, sig(*digits as usize))?), None),
        Command::Solve {
            moments,
            digits,
            cache,
            output,
        } => (cmd_solve(*moments, *digits, cache.as_deref(), output.as_deref())?, None),
        Command::Extrapolate {
            fields,
            solution,
            moments,
            digits,
            cache,
            terms,
            branch,
        } => {
            let args = ExtrapolateArgs {
                fields,
                solution: solution.as_deref(),
                moments: *moments,
                digits: *digits,
                cache: cache.as_deref(),
                terms: *terms,
                branch: match branch {
                    BranchArg::Below => ContinuationBranch::Below,
                    BranchArg::Above => ContinuationBranch::Above,
                },
            };
            (Output::Report(cmd_extrapolate(args, sig(15))?), None)
        }
        Command::Table {
            id,
            scale,
            allow_long,
            cache,
            output,
        } => {
            let scale = match scale {
                ScaleArg::Desk => Scale::Desk,
                ScaleArg::Full => Scale::Full,
            };
            let report = cmd_table(*id, scale, *allow_long, cache.as_deref(), sig(15))?;
            (Output::Report(report), output.clone())
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = run(&cfg).and_then(|(out, path)| {
        let text = match out {
            Output::Report(r) => r.render(cfg.format)?,
            Output::Raw(s) => s,
        };
        match path {
            Some(p) => std::fs::write(p, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
