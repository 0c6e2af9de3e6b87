//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed expectation or I/O error, 2 invalid
//! parameters, 3 scale bound exceeded, 4 complex not thin, 5 no oriented
//! hypermap for another reason.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use trigeom_core::group::search::DEFAULT_MAX_ELEMENTS;
use trigeom_core::harness::{
    build_space, hypermap_export, report_space, HarnessError, HypermapError, InstanceReport, ReportOptions,
};
use trigeom_core::incidence::PairLabel;
use trigeom_core::space::{LinearSpace, SpaceError};
use trigeom_core::triangle::TriangleComplex;

use crate::descriptor::parse_space;
use crate::dot::to_dot;
use crate::expect::{compare, table1, Selection};
use crate::format::{GeometryFile, HypermapFile};
use crate::suite::{render_table, run_suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SCALE: i32 = 3;
pub const EXIT_NOT_THIN: i32 = 4;
pub const EXIT_NO_HYPERMAP: i32 = 5;

pub const MAX_ELEMENTS_ENV: &str = "TRIGEOM_MAX_ELEMENTS";

#[derive(Debug, Parser)]
#[command(name = "trigeom", version, about = "Triangle complexes of finite linear spaces")]
pub struct Cli {
    /// Largest complex (in elements) to analyse; overrides TRIGEOM_MAX_ELEMENTS.
    #[arg(long, global = true)]
    pub max_elements: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    /// Space family: pg, ag, kv or uh.
    pub family: String,
    /// Family parameters: `pg n q`, `ag n q`, `kv v`, `uh q`.
    #[arg(required = true)]
    pub params: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expectation {
    Table1,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the JSON geometry of a space or of its triangle complex.
    Build {
        #[command(flatten)]
        space: SpaceArgs,
        /// Build the triangle complex instead of the space.
        #[arg(long)]
        delta: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report properties of the triangle complex.
    Check {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        rc: bool,
        #[arg(long)]
        ft: bool,
        #[arg(long)]
        duality: bool,
        #[arg(long)]
        triality: bool,
        #[arg(long)]
        diagram: bool,
        /// Compare with a bundled expectations table; exit 1 on mismatch.
        #[arg(long, value_enum)]
        expect: Option<Expectation>,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Export the incidence graph as DOT or the complex as a hypermap.
    Export {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, conflicts_with = "hypermap", required_unless_present = "hypermap")]
        dot: bool,
        #[arg(long)]
        hypermap: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every table instance, the characterization cases and the gonality control.
    Suite {
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
}

/// An error with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn space_failure(e: SpaceError) -> Failure {
    match e {
        SpaceError::TooLarge { .. } => Failure::new(EXIT_SCALE, e.to_string()),
        _ => Failure::new(EXIT_INVALID, e.to_string()),
    }
}

fn harness_failure(e: HarnessError) -> Failure {
    match e {
        HarnessError::Space(e) => space_failure(e),
        HarnessError::Scale { .. } | HarnessError::Search(_) => Failure::new(EXIT_SCALE, e.to_string()),
        other => Failure::new(EXIT_FAILED, other.to_string()),
    }
}

/// The scale bound: the flag, then the environment, then the default.
pub fn max_elements(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(m) = flag {
        return Ok(m);
    }
    match std::env::var(MAX_ELEMENTS_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::new(EXIT_INVALID, format!("{MAX_ELEMENTS_ENV} must be a number, got {s:?}"))),
        Err(_) => Ok(DEFAULT_MAX_ELEMENTS),
    }
}

fn load_space(args: &SpaceArgs) -> Result<LinearSpace, Failure> {
    let kind = parse_space(&args.family, &args.params).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    build_space(kind).map_err(space_failure)
}

fn check_scale(space: &LinearSpace, bound: usize) -> Result<(), Failure> {
    let elements = 3 * space.num_flags();
    if elements > bound {
        Err(Failure::new(
            EXIT_SCALE,
            format!("the complex of {} has {elements} elements, above the bound of {bound}", space.kind()),
        ))
    } else {
        Ok(())
    }
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::new(EXIT_FAILED, format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(EXIT_FAILED, e.to_string())),
    }
}

fn yes(b: Option<bool>) -> String {
    b.map_or("omitted".to_string(), |b| b.to_string())
}

/// Human-readable lines for the selected report fields.
pub fn render_report(rep: &InstanceReport, sel: &Selection) -> String {
    let mut lines = vec![format!("space: {} ({} elements)", rep.space, rep.elements)];
    if sel.connected {
        let comps = rep.components.map_or(String::new(), |c| {
            format!(" ({c} component{})", if c == 1 { "" } else { "s" })
        });
        lines.push(format!("connected: {}{comps}", yes(rep.connected)));
    }
    if sel.rc {
        lines.push(format!("RC: {}", yes(rep.residually_connected)));
    }
    if sel.thin {
        let firmness = rep.firmness.map_or("omitted".to_string(), |f| format!("{f:?}"));
        lines.push(format!("thin: {} (firmness {firmness})", yes(rep.thin)));
    }
    if sel.ft {
        let orbit = rep.chamber_orbit.map_or(String::new(), |o| format!(" (orbit {o})"));
        lines.push(format!("flag-transitive: {}{orbit}", yes(rep.flag_transitive)));
    }
    if sel.duality {
        lines.push(format!("duality: {}", yes(rep.has_duality)));
    }
    if sel.triality {
        lines.push(format!("triality: {}", yes(rep.has_triality)));
    }
    if sel.orders {
        let source = rep.aut_source.map_or(String::new(), |s| format!(" ({s:?})").to_lowercase());
        lines.push(format!(
            "|Aut|: {}{source}",
            rep.aut_order.map_or("omitted".to_string(), |o| o.to_string())
        ));
        lines.push(format!(
            "|Cor|: {}",
            rep.cor_order.map_or("omitted".to_string(), |o| o.to_string())
        ));
    }
    if sel.diagram {
        match &rep.diagram {
            None => lines.push("diagram: omitted".to_string()),
            Some(d) => {
                for node in &d.nodes {
                    let s = node.order.map_or("varies".to_string(), |s| s.to_string());
                    lines.push(format!("diagram node {}: n={} s={s}", node.type_label, node.count));
                }
                for e in &d.edges {
                    let label = match e.label {
                        PairLabel::Uniform(p) => format!(
                            "({},{},{})",
                            p.point_diameter,
                            p.gonality.map_or("∞".to_string(), |g| g.to_string()),
                            p.line_diameter
                        ),
                        PairLabel::Nonuniform => "nonuniform".to_string(),
                        PairLabel::Disconnected => "disconnected".to_string(),
                    };
                    lines.push(format!("diagram edge {}-{}: {label}", e.i + 1, e.j + 1));
                }
            }
        }
    }
    lines.join("\n") + "\n"
}

fn run_command(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let bound = max_elements(cli.max_elements)?;
    match cli.command {
        Command::Build { space, delta, out: path } => {
            let space = load_space(&space)?;
            let file = if delta {
                check_scale(&space, bound)?;
                let tc = TriangleComplex::new(&space);
                let sys = tc.incidence_system();
                let mut file = GeometryFile::from_system(sys, Some(format!("Δ({})", space.kind())));
                let comps = sys.connected_components().len();
                if comps > 1 {
                    eprintln!("note: {comps} connected components");
                    file.components = Some(comps);
                }
                file
            } else {
                GeometryFile::from_system(space.incidence_system(), Some(format!("{}", space.kind())))
            };
            emit(out, path.as_ref(), &(file.to_json() + "\n"))?;
            Ok(EXIT_OK)
        }
        Command::Check {
            space,
            all,
            rc,
            ft,
            duality,
            triality,
            diagram,
            expect,
            format,
        } => {
            let space = load_space(&space)?;
            check_scale(&space, bound)?;
            let opts = ReportOptions {
                max_elements: bound,
                ..ReportOptions::default()
            };
            let rep = report_space(&space, &opts).map_err(harness_failure)?;
            let any = rc || ft || duality || triality || diagram;
            let sel = if all || !any {
                Selection::all()
            } else {
                Selection {
                    rc,
                    ft,
                    duality,
                    triality,
                    diagram,
                    ..Selection::default()
                }
            };
            let checks = expect.map(|Expectation::Table1| compare(&rep, &table1(), &sel));
            match format {
                OutputFormat::Table => {
                    let mut text = render_report(&rep, &sel);
                    if let Some(checks) = &checks {
                        match checks {
                            None => text.push_str("expect: no table entry for this space\n"),
                            Some(list) => {
                                for c in list {
                                    let mark = if c.passed { "ok" } else { "MISMATCH" };
                                    text.push_str(&format!(
                                        "expect {}: {mark} (expected {}, got {})\n",
                                        c.field, c.expected, c.actual
                                    ));
                                }
                            }
                        }
                    }
                    emit(out, None, &text)?;
                }
                OutputFormat::Json => {
                    let value = serde_json::json!({ "report": rep, "checks": checks.clone().flatten() });
                    emit(out, None, &(serde_json::to_string_pretty(&value).expect("json") + "\n"))?;
                }
            }
            Ok(match checks {
                None => EXIT_OK,
                Some(Some(list)) if list.iter().all(|c| c.passed) => EXIT_OK,
                Some(_) => EXIT_FAILED,
            })
        }
        Command::Export {
            space,
            dot,
            hypermap,
            out: path,
        } => {
            let space = load_space(&space)?;
            check_scale(&space, bound)?;
            let tc = TriangleComplex::new(&space);
            if dot && !hypermap {
                let text = to_dot(tc.incidence_system(), &format!("Δ({})", space.kind()));
                emit(out, path.as_ref(), &text)?;
                return Ok(EXIT_OK);
            }
            let h = hypermap_export(&tc).map_err(|e| match e {
                HypermapError::NotThin { .. } => Failure::new(EXIT_NOT_THIN, e.to_string()),
                other => Failure::new(EXIT_NO_HYPERMAP, other.to_string()),
            })?;
            let file = HypermapFile::new(h);
            match path {
                Some(p) => {
                    emit(out, Some(&p), &(file.to_json() + "\n"))?;
                    emit(out, None, &(file.summary.clone() + "\n"))?;
                }
                None => emit(out, None, &(file.to_json() + "\n" + &file.summary + "\n"))?,
            }
            Ok(EXIT_OK)
        }
        Command::Suite { format } => {
            let opts = ReportOptions {
                max_elements: bound,
                ..ReportOptions::default()
            };
            let report = run_suite(&table1(), &opts);
            let text = match format {
                OutputFormat::Table => render_table(&report),
                OutputFormat::Json => serde_json::to_string_pretty(&report).expect("json") + "\n",
            };
            emit(out, None, &text)?;
            Ok(if report.passed { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

/// Parses arguments and runs one command, writing results to `out` and
/// diagnostics to stderr. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run_command(cli, out) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

