//! The `tpc` command-line driver: check library files, flatten theories,
//! export the theory graph and report on semantic compatibility.

use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use tpc_core::combinators::{compatibility_reports, flatten, flatten_base, load, Diagnostic, Loaded, Verdict};

pub mod graph;

pub use graph::{GraphExport, GraphFormat};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("TPC_COLOR must be `never` or `auto`, not `{0}`")]
    BadColor(String),
    #[error("{0}")]
    Write(#[from] io::Error),
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Semantic = 1,
    Usage = 2,
}

impl Status {
    fn worst(self, other: Status) -> Status {
        if (other as u8) > (self as u8) {
            other
        } else {
            self
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Color {
    Never,
    Auto,
}

impl Color {
    pub fn from_env() -> Result<Color, CliError> {
        match std::env::var("TPC_COLOR") {
            Err(_) => Ok(Color::Auto),
            Ok(v) => match v.as_str() {
                "never" => Ok(Color::Never),
                "auto" | "" => Ok(Color::Auto),
                other => Err(CliError::BadColor(other.to_string())),
            },
        }
    }

    fn enabled(self) -> bool {
        self == Color::Auto && io::stderr().is_terminal()
    }
}

/// Where output goes, and how diagnostics are styled.
pub struct Output<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
    pub color: bool,
}

impl<'a> Output<'a> {
    pub fn new(out: &'a mut dyn Write, err: &'a mut dyn Write, color: Color) -> Self {
        Output { out, err, color: color.enabled() }
    }

    fn report(&mut self, level: Level, location: &str, message: &str) -> io::Result<()> {
        let tag = if self.color {
            format!("\x1b[1;{}m{}\x1b[0m", level.ansi(), level.name())
        } else {
            level.name().to_string()
        };
        writeln!(self.err, "{location}: {tag}: {message}")
    }
}

#[derive(Clone, Copy)]
enum Level {
    Error,
    Warning,
    Note,
}

impl Level {
    fn name(self) -> &'static str {
        match self {
            Level::Error => "error",
            Level::Warning => "warning",
            Level::Note => "note",
        }
    }

    fn ansi(self) -> u8 {
        match self {
            Level::Error => 31,
            Level::Warning => 33,
            Level::Note => 36,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn diagnostic_message(d: &Diagnostic) -> String {
    match &d.definition {
        Some(name) => format!("in `{name}`: {}", d.error),
        None => d.error.to_string(),
    }
}

/// Load a file and print its diagnostics. Returns the loaded library and
/// whether it had errors.
fn load_file(path: &Path, o: &mut Output<'_>) -> Result<(Loaded, bool), CliError> {
    let src = read(path)?;
    let loaded = load(&src);
    let file = path.display();
    for d in &loaded.diagnostics {
        let at = format!("{file}:{}:{}", d.span.start.line, d.span.start.col);
        o.report(Level::Error, &at, &diagnostic_message(d))?;
    }
    for name in &loaded.skipped {
        o.report(Level::Note, &file.to_string(), &format!("`{name}` not checked: it depends on a failed definition"))?;
    }
    let failed = !loaded.diagnostics.is_empty();
    Ok((loaded, failed))
}

pub fn run_check(files: &[PathBuf], o: &mut Output<'_>) -> Result<Status, CliError> {
    let mut status = Status::Ok;
    for path in files {
        let (loaded, failed) = match load_file(path, o) {
            Ok(r) => r,
            Err(e @ CliError::Io { .. }) => {
                writeln!(o.err, "error: {e}")?;
                status = status.worst(Status::Usage);
                continue;
            }
            Err(e) => return Err(e),
        };
        for (name, d) in loaded.env.iter() {
            if let Err(e) = &d.sem.arrow {
                let s = d.def.span;
                let at = format!("{}:{}:{}", path.display(), s.start.line, s.start.col);
                o.report(Level::Warning, &at, &format!("`{name}` has no arrow semantics: {e}"))?;
            }
        }
        let n = loaded.env.len();
        writeln!(o.out, "{}: {n} {}{}", path.display(), if n == 1 { "theory" } else { "theories" }, if failed {
            format!(", {} error{}", loaded.diagnostics.len(), if loaded.diagnostics.len() == 1 { "" } else { "s" })
        } else {
            String::new()
        })?;
        if failed {
            status = status.worst(Status::Semantic);
        }
    }
    Ok(status)
}

pub fn run_flatten(file: &Path, name: &str, base: bool, o: &mut Output<'_>) -> Result<Status, CliError> {
    let (loaded, failed) = load_file(file, o)?;
    let text = if base { flatten_base(&loaded.env, name) } else { flatten(&loaded.env, name) };
    match text {
        Ok(t) => {
            o.out.write_all(t.as_bytes())?;
            Ok(if failed { Status::Semantic } else { Status::Ok })
        }
        Err(e) => {
            o.report(Level::Error, &file.display().to_string(), &e.to_string())?;
            Ok(Status::Semantic)
        }
    }
}

pub fn run_graph(file: &Path, format: GraphFormat, o: &mut Output<'_>) -> Result<Status, CliError> {
    let (loaded, failed) = load_file(file, o)?;
    if failed {
        return Ok(Status::Semantic);
    }
    let export = GraphExport::from_env(&loaded.env);
    let text = match format {
        GraphFormat::Json => export.to_json(),
        GraphFormat::Dot => export.to_dot(),
    };
    o.out.write_all(text.as_bytes())?;
    Ok(Status::Ok)
}

/// Print one report per definition. A definition whose hypotheses hold but
/// whose semantics disagree is a counterexample and fails the run.
pub fn run_compat(file: &Path, o: &mut Output<'_>) -> Result<Status, CliError> {
    let (loaded, failed) = load_file(file, o)?;
    let mut status = if failed { Status::Semantic } else { Status::Ok };
    let reports = compatibility_reports(&loaded.env);
    let mut flagged = 0;
    for r in &reports {
        writeln!(o.out, "{r}")?;
        if r.flagged() {
            flagged += 1;
        }
        if r.hypotheses_hold() && r.verdict == Verdict::Divergent {
            o.report(
                Level::Error,
                &file.display().to_string(),
                &format!("`{}` satisfies the compatibility hypotheses but its semantics disagree", r.name),
            )?;
            status = status.worst(Status::Semantic);
        }
    }
    writeln!(o.out, "{} definitions, {flagged} flagged", reports.len())?;
    Ok(status)
}
