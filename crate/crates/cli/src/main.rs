//! `tcline`: classification, representatives, censuses and table checks
//! for binary quartics and lines of `PG(3,q)`.
//!
//! Field elements are read and printed as canonical integer encodings; a
//! negative integer `-n` is read as the field element `-n`. Quartics are
//! given by `z0..z4` in the binomial convention
//! `z0 X^4 + 4 z1 X^3 Y + 6 z2 X^2 Y^2 + 4 z3 X Y^3 + z4 Y^4`, so the plain
//! coefficients are `a0 = z0, a1 = 4 z1, a2 = 6 z2, a3 = 4 z3, a4 = z4`.
//! `--plain` accepts `a0..a4` instead.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tcline::census::{self, CensusRecords, FieldHeader, OrbitCensus, VerifyOptions};
use tcline::klein::{line_representative, table_generators, Line, LineLabel};
use tcline::quartic::{representative, QuarticForm, QuarticLabel};
use tcline::rep_theory::{rep_check_grid, RepCheckResult};
use tcline::{make_field, Error, FieldCtx, Fq};

#[derive(Parser)]
#[command(name = "tcline", version, about = "Binary quartics and lines relative to the twisted cubic")]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Structured,
}

#[derive(Args, Clone, Copy)]
struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    p: u64,
    /// Degree over the prime field.
    #[arg(long, default_value_t = 1)]
    k: u32,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field parameters and extension moduli.
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// Binary quartic forms.
    Form {
        #[command(subcommand)]
        cmd: FormCmd,
    },
    /// Lines of PG(3,q).
    Line {
        #[command(subcommand)]
        cmd: LineCmd,
    },
    /// Run every census and table check at one field; exit 0 iff all pass.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        /// Write the full report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest q for which the line census runs.
        #[arg(long, default_value_t = census::LINE_CENSUS_BOUND)]
        line_bound: u64,
    },
    /// Check the binomial equivalences over a grid of (m, q).
    RepCheck {
        #[arg(long, default_value_t = 8)]
        m_max: u32,
        /// Field sizes, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "5,7,13,25")]
        q_list: Vec<u64>,
        /// Largest m for which intertwiner spaces are solved.
        #[arg(long, default_value_t = 6)]
        hom_max: u32,
    },
    /// Verify several fields and write one report file per q.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        q_list: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = census::LINE_CENSUS_BOUND)]
        line_bound: u64,
    },
}

#[derive(Subcommand)]
enum FieldCmd {
    Info {
        #[command(flatten)]
        field: FieldArgs,
    },
}

#[derive(Subcommand)]
enum FormCmd {
    /// Classify one quartic.
    Classify {
        #[command(flatten)]
        field: FieldArgs,
        /// Binomial-convention coefficients z0..z4.
        #[arg(long, conflicts_with = "plain", required_unless_present = "plain")]
        z: Option<String>,
        /// Plain coefficients a0..a4.
        #[arg(long)]
        plain: Option<String>,
    },
    /// Canonical representative of an orbit label.
    Rep {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        label: String,
    },
    /// Exhaustive orbit census of all quartics.
    Census {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LineCmd {
    /// Classify one line, given by two points or by Plucker coordinates.
    Classify {
        #[command(flatten)]
        field: FieldArgs,
        /// Two points as "a,b,c,d;e,f,g,h".
        #[arg(long, conflicts_with = "plucker", required_unless_present = "plucker")]
        points: Option<String>,
        /// Plucker coordinates p01,p02,p03,p12,p13,p23.
        #[arg(long)]
        plucker: Option<String>,
    },
    /// Generator matrix of a line orbit.
    Rep {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        label: String,
    },
    /// Exhaustive orbit census of all lines.
    Census {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure modes of a command, mapped onto exit codes.
enum Failure {
    Lib(Error),
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Out = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = String::new();
    let result = run(&cli, &mut out);
    print!("{out}");
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error code=usage message={msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error code={} message={e}", e.code());
            ExitCode::from(match e {
                e if e.is_unsupported_field() => 3,
                Error::Io(_) => 1,
                _ => 2,
            })
        }
    }
}

fn run(cli: &Cli, out: &mut String) -> Result<(), Failure> {
    let fmt = cli.format;
    match &cli.cmd {
        Cmd::Field { cmd: FieldCmd::Info { field } } => {
            out.push_str(&field_info(&field_ctx(*field)?, fmt)?);
        }
        Cmd::Form { cmd } => match cmd {
            FormCmd::Classify { field, z, plain } => {
                let f = classifiable(*field)?;
                let (text, is_plain) = match (z, plain) {
                    (Some(z), _) => (z, false),
                    (_, Some(a)) => (a, true),
                    _ => return Err(Failure::Usage("need --z or --plain".into())),
                };
                let v = parse_vec::<5>(&f, text)?;
                let form = if is_plain { QuarticForm::from_plain(v)? } else { QuarticForm::new(v)? };
                out.push_str(&form_classify(&form, fmt)?);
            }
            FormCmd::Rep { field, label } => {
                let f = classifiable(*field)?;
                let label: QuarticLabel = label.parse()?;
                let rep = representative(&f, label)?;
                out.push_str(&record(
                    fmt,
                    &[("label", label.to_string()), ("z", join(&rep.z())), ("plain", join(&rep.plain()))],
                ));
            }
            FormCmd::Census { field, out: path } => {
                let f = classifiable(*field)?;
                let c = census::census_quartics(&f)?;
                emit_census(&f, &c, path.as_ref(), fmt, out)?;
            }
        },
        Cmd::Line { cmd } => match cmd {
            LineCmd::Classify { field, points, plucker } => {
                let f = classifiable(*field)?;
                let line = match (points, plucker) {
                    (Some(pts), _) => {
                        let (a, b) = pts
                            .split_once(';')
                            .ok_or_else(|| Failure::Usage("points must be \"a,b,c,d;e,f,g,h\"".into()))?;
                        Line::from_points(parse_vec::<4>(&f, a)?, parse_vec::<4>(&f, b)?)?
                    }
                    (_, Some(p)) => Line::from_plucker(parse_vec::<6>(&f, p)?)?,
                    _ => return Err(Failure::Usage("need --points or --plucker".into())),
                };
                out.push_str(&line_classify(&line, fmt)?);
            }
            LineCmd::Rep { field, label } => {
                let f = classifiable(*field)?;
                let label: LineLabel = label.parse()?;
                out.push_str(&line_rep(&f, label, fmt)?);
            }
            LineCmd::Census { field, out: path } => {
                let f = classifiable(*field)?;
                let c = census::census_lines(&f)?;
                emit_census(&f, &c, path.as_ref(), fmt, out)?;
            }
        },
        Cmd::Verify { field, out: path, line_bound } => {
            let f = field_ctx(*field)?;
            let opts = VerifyOptions { line_bound: *line_bound, records: true };
            let report = census::verify_tables(&f, opts);
            if let Some(p) = path {
                std::fs::write(p, report.to_string()).map_err(|e| Error::Io(e.to_string()))?;
            }
            if let Some(e) = &report.error {
                return Err(Failure::Lib(e.clone()));
            }
            match fmt {
                Format::Structured => out.push_str(&report.to_string()),
                Format::Table => out.push_str(&verify_summary(&report)),
            }
            if !report.pass() {
                return Err(Failure::Verification);
            }
        }
        Cmd::RepCheck { m_max, q_list, hom_max } => {
            let fields = q_list
                .iter()
                .map(|&q| {
                    let (p, k) = census::prime_power(q).ok_or(Error::NotPrimePower(q))?;
                    make_field(p, k)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let grid = rep_check_grid(*m_max, &fields, *hom_max)?;
            out.push_str(&rep_grid(&grid, fmt));
            if !grid.iter().all(|r| r.consistent()) {
                return Err(Failure::Verification);
            }
        }
        Cmd::Sweep { q_list, jobs, out: dir, line_bound } => {
            let opts = VerifyOptions { line_bound: *line_bound, records: true };
            let reports = census::sweep(q_list, *jobs, dir, opts)?;
            let mut all = true;
            for (path, r) in &reports {
                let status = match &r.error {
                    Some(e) => format!("error code={}", e.code()),
                    None if r.pass() => "pass".to_string(),
                    None => "fail".to_string(),
                };
                all &= r.pass();
                writeln!(out, "q={} status={} file={}", r.q, status, path.display()).unwrap();
            }
            if !all {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn field_ctx(a: FieldArgs) -> Result<FieldCtx, Failure> {
    Ok(make_field(a.p, a.k)?)
}

fn classifiable(a: FieldArgs) -> Result<FieldCtx, Failure> {
    let f = field_ctx(a)?;
    f.require_classifiable()?;
    Ok(f)
}

fn parse_elem<'a>(f: &'a FieldCtx, s: &str) -> Result<Fq<'a>, Failure> {
    let s = s.trim();
    if let Some(n) = s.strip_prefix('-') {
        let n: u64 = n.parse().map_err(|_| Failure::Usage(format!("bad field element {s:?}")))?;
        return Ok(f.int(-(n as i64)));
    }
    let n: u64 = s.parse().map_err(|_| Failure::Usage(format!("bad field element {s:?}")))?;
    Ok(f.elem(n)?)
}

fn parse_vec<'a, const N: usize>(f: &'a FieldCtx, s: &str) -> Result<[Fq<'a>; N], Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(Failure::Usage(format!("expected {N} comma-separated values, got {:?}", s)));
    }
    let mut out = [f.zero(); N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = parse_elem(f, p)?;
    }
    Ok(out)
}

fn join(v: &[Fq<'_>]) -> String {
    v.iter().map(|x| x.value().to_string()).collect::<Vec<_>>().join(",")
}

/// One record: aligned `key  value` rows, or `key=value` pairs on one line.
fn record(fmt: Format, fields: &[(&str, String)]) -> String {
    match fmt {
        Format::Structured => {
            let mut s = fields.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
            s.push('\n');
            s
        }
        Format::Table => {
            let w = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            fields.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
        }
    }
}

fn opt(x: Option<Fq<'_>>) -> String {
    x.map_or("none".into(), |v| v.value().to_string())
}

fn field_info(f: &FieldCtx, fmt: Format) -> Out {
    let h = FieldHeader::of(f);
    let mut fields = vec![
        ("p", h.p.to_string()),
        ("k", h.k.to_string()),
        ("q", h.q.to_string()),
        ("modulus", h.modulus),
        ("gamma", h.gamma.to_string()),
        ("epsilon", opt(f.epsilon())),
        ("omega", opt(f.omega())),
    ];
    if f.p() > 3 {
        fields.push(("mu", f.mu().to_string()));
    }
    let moduli: Vec<String> = (2..=4).map(|d| f.tower(d).modulus_string()).collect();
    fields.push(("tower", moduli.join(";")));
    Ok(record(fmt, &fields))
}

fn form_classify(form: &QuarticForm<'_>, fmt: Format) -> Out {
    let c = form.classify()?;
    Ok(record(
        fmt,
        &[
            ("z", join(&form.z())),
            ("type", c.kind.to_string()),
            ("label", c.label.to_string()),
            ("j", c.j.map_or("none".into(), |j| j.to_string())),
            ("I", form.invariant_i().value().to_string()),
            ("J", form.invariant_j().value().to_string()),
            ("I-square", c.i_square.to_string()),
            ("discriminant", c.discriminant.to_string()),
            ("stabilizer", c.stabilizer.map_or("-".into(), |s| s.to_string())),
            ("stabilizer-order", c.stabilizer_order.to_string()),
            ("orbit-size", c.orbit_size.to_string()),
        ],
    ))
}

fn line_classify(line: &Line<'_>, fmt: Format) -> Out {
    let c = line.classify()?;
    let pi = line.pi();
    let j = pi.j_invariant().map(|j| j.value().to_string()).unwrap_or_else(|_| "none".into());
    Ok(record(
        fmt,
        &[
            ("plucker", join(&line.plucker())),
            ("label", c.label.to_string()),
            ("generic", line.is_generic().to_string()),
            ("f_L", join(&pi.z())),
            ("I", pi.invariant_i().value().to_string()),
            ("j", j),
            ("dual", join(&line.hodge_star().plucker())),
            ("self-dual", line.is_self_dual().to_string()),
            ("orbit-size", c.orbit_size.to_string()),
            ("stabilizer-order", c.stabilizer_order.to_string()),
        ],
    ))
}

fn line_rep(f: &FieldCtx, label: LineLabel, fmt: Format) -> Out {
    let mut gens = None;
    if let LineLabel::Generic(ql, _) = label {
        for m in table_generators(f, ql)? {
            if let Ok(l) = Line::from_points(m[0], m[1]) {
                if l.is_generic() && l.classify()?.label == label {
                    gens = Some((m, "closed-form"));
                    break;
                }
            }
        }
    }
    let (m, source) = match gens {
        Some(g) => g,
        None => (line_representative(f, label)?.generators(), "computed"),
    };
    let line = Line::from_points(m[0], m[1])?;
    let c = line.classify()?;
    Ok(record(
        fmt,
        &[
            ("label", c.label.to_string()),
            ("row0", join(&m[0])),
            ("row1", join(&m[1])),
            ("source", source.into()),
            ("plucker", join(&line.plucker())),
            ("stabilizer-order", c.stabilizer_order.to_string()),
            ("orbit-size", c.orbit_size.to_string()),
        ],
    ))
}

fn emit_census(f: &FieldCtx, c: &OrbitCensus, path: Option<&PathBuf>, fmt: Format, out: &mut String) -> Result<(), Failure> {
    let h = FieldHeader::of(f);
    let mut full = format!(
        "field p={} k={} q={} modulus={} gamma={}\n",
        h.p, h.k, h.q, h.modulus, h.gamma
    );
    write!(full, "{}", CensusRecords(c)).unwrap();
    if let Some(p) = path {
        std::fs::write(p, &full).map_err(|e| Error::Io(e.to_string()))?;
    }
    match fmt {
        Format::Structured => out.push_str(&full),
        Format::Table => {
            writeln!(out, "{} census q={}: {} orbits, total {}", c.ground, c.q, c.orbits.len(), c.total).unwrap();
            writeln!(out, "{:<16} {:>12} {:>6} {:>6}", "label", "size", "stab", "j").unwrap();
            for o in &c.orbits {
                let j = o.j.map_or("-".into(), |j| j.to_string());
                writeln!(out, "{:<16} {:>12} {:>6} {:>6}", o.label.to_string(), o.size, o.stabilizer_order, j).unwrap();
            }
        }
    }
    if c.label_mismatches + c.stabilizer_mismatches + c.polarity_mismatches > 0 {
        return Err(Failure::Verification);
    }
    Ok(())
}

fn verify_summary(r: &census::VerificationReport) -> String {
    let mut s = String::new();
    let cells_ok = r.cells.iter().filter(|c| c.pass()).count();
    let checks_ok = r.checks.iter().filter(|c| c.pass).count();
    writeln!(s, "q={} status={}", r.q, if r.pass() { "pass" } else { "fail" }).unwrap();
    writeln!(s, "cells   {cells_ok}/{} pass", r.cells.len()).unwrap();
    writeln!(s, "checks  {checks_ok}/{} pass", r.checks.len()).unwrap();
    for c in &r.censuses {
        let extra = match c.ground {
            census::GroundSet::Lines => {
                let generic = c.orbits.iter().filter(|o| matches!(o.label, census::OrbitLabel::Line(LineLabel::Generic(..)))).count();
                format!(" ({generic} generic)")
            }
            census::GroundSet::Quartics => {
                let nondeg = c.orbits.iter().filter(|o| o.j.is_some()).count();
                format!(" ({nondeg} with nonzero discriminant)")
            }
            _ => String::new(),
        };
        writeln!(s, "{:<10}{} orbits{extra}", c.ground.to_string(), c.orbits.len()).unwrap();
    }
    for f in r.failures() {
        writeln!(s, "FAIL {f}").unwrap();
    }
    s
}

fn rep_grid(grid: &[RepCheckResult], fmt: Format) -> String {
    let b = |x: bool| if x { "1" } else { "0" };
    let d = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
    let mut s = String::new();
    if fmt == Format::Table {
        writeln!(s, "{:>3} {:>4}  c1 c2 c3 c4 c5  dimA dimT  ok", "m", "q").unwrap();
    }
    for r in grid {
        match fmt {
            Format::Table => writeln!(
                s,
                "{:>3} {:>4}  {:>2} {:>2} {:>2} {:>2} {:>2}  {:>4} {:>4}  {}",
                r.m,
                r.q,
                b(r.cond1),
                b(r.cond2),
                b(r.cond3),
                b(r.cond4),
                b(r.cond5),
                d(r.dim_a),
                d(r.dim_t),
                if r.consistent() { "yes" } else { "NO" }
            ),
            Format::Structured => writeln!(
                s,
                "m={} q={} cond1={} cond2={} cond3={} cond4={} cond5={} dimA={} dimT={} consistent={}",
                r.m,
                r.q,
                r.cond1,
                r.cond2,
                r.cond3,
                r.cond4,
                r.cond5,
                d(r.dim_a),
                d(r.dim_t),
                r.consistent()
            ),
        }
        .unwrap();
    }
    s
}
