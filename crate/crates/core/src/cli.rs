//! Command-line front end.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::semantics::eval::{clear_globals, global, global_names, with_mode, Mode};
use crate::semantics::quote::quote;
use crate::syntax::parser::parse_file_recovering;
use crate::syntax::printer::print;
use crate::typechecker::{check_and_define, DeclReport, ErrorKind};

const BUNDLED_PRELUDE: &str = include_str!("../../../corpus/prelude.cctt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    PrimitiveFill,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::PrimitiveFill => Mode::PrimitiveFill,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "cctt", version, about = "Check and run cubical type theory files")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Common {
    /// Kan regime: computing comp, or fill as a constant.
    #[arg(long, value_enum, default_value = "strict")]
    pub mode: ModeArg,
    /// Emit one JSON object per line.
    #[arg(long)]
    pub json: bool,
    /// Do not load the prelude first.
    #[arg(long)]
    pub no_prelude: bool,
    /// Print timings for every declaration.
    #[arg(short, long)]
    pub verbose: bool,
    pub files: Vec<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Typecheck files in order.
    Check(Common),
    /// Typecheck, then print normal forms of definitions.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Only print this definition.
        #[arg(long)]
        name: Option<String>,
    },
    /// Typecheck, then verify every `#canon name = k` pragma.
    Canon(Common),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_IO: i32 = 2;

struct Out {
    json: bool,
    lines: Vec<String>,
    errors: Vec<String>,
}

impl Out {
    fn line(&mut self, text: String, obj: serde_json::Value) {
        if self.json {
            self.lines.push(obj.to_string());
        } else {
            self.lines.push(text);
        }
    }

    fn error(&mut self, text: String, obj: serde_json::Value) {
        if self.json {
            self.lines.push(obj.to_string());
        } else {
            self.errors.push(text);
        }
    }
}

/// `#canon name = k` pragmas in comments.
pub fn canon_pragmas(src: &str) -> Vec<(String, u64, usize)> {
    let mut out = Vec::new();
    for (n, line) in src.lines().enumerate() {
        let Some(pos) = line.find("--") else { continue };
        let rest = line[pos + 2..].trim_start();
        let Some(rest) = rest.strip_prefix("#canon") else { continue };
        let mut parts = rest.splitn(2, '=');
        let name = parts.next().unwrap_or("").trim();
        let k = parts.next().and_then(|k| k.trim().parse::<u64>().ok());
        if let (false, Some(k)) = (name.is_empty(), k) {
            out.push((name.to_string(), k, n + 1));
        }
    }
    out
}

/// Per-file outcome.
#[derive(Default)]
struct Status {
    failed: bool,
    mode_violation: bool,
}

fn report(out: &mut Out, file: &str, reports: &[DeclReport], verbose: bool) -> Status {
    let mut st = Status::default();
    for r in reports {
        match &r.result {
            Ok(_) => {
                let ms = r.elapsed.as_secs_f64() * 1000.0;
                let text = if verbose {
                    format!("{file}: ok {} ({ms:.1} ms)", r.name)
                } else {
                    format!("{file}: ok {}", r.name)
                };
                out.line(text, json!({"file": file, "decl": r.name, "ok": true, "ms": ms}));
            }
            Err(e) => {
                st.failed = true;
                st.mode_violation |= e.kind == ErrorKind::ModeViolation;
                out.error(
                    format!("{file}:{}:{}: [{}] in `{}`: {}", r.line, r.col, e.kind, r.name, e.message),
                    json!({
                        "file": file, "decl": r.name, "ok": false, "line": r.line, "col": r.col,
                        "kind": e.kind.as_str(), "message": e.message,
                        "expected": e.expected, "actual": e.actual,
                    }),
                );
            }
        }
    }
    st
}

/// Parse and check one source.
fn load(out: &mut Out, file: &str, src: &str, verbose: bool) -> Status {
    let globals: HashSet<String> = global_names().into_iter().collect();
    let parsed = match parse_file_recovering(src, &globals) {
        Ok(p) => p,
        Err(e) => vec![Err(e)],
    };
    let mut st = Status::default();
    for d in parsed {
        match d {
            Ok(d) => {
                let r = report(out, file, &[check_and_define(&d)], verbose);
                st.failed |= r.failed;
                st.mode_violation |= r.mode_violation;
            }
            Err(e) => {
                let kind = if e.unbound { "unbound" } else { "syntax" };
                out.error(
                    format!("{file}:{}:{}: [{kind}] {}", e.line, e.col, e.message),
                    json!({"file": file, "ok": false, "line": e.line, "col": e.col, "kind": kind, "message": e.message}),
                );
                st.failed = true;
            }
        }
    }
    st
}

fn prelude_source() -> Result<(String, String), String> {
    match std::env::var_os("CCTT_PRELUDE") {
        Some(p) => {
            let path = Path::new(&p);
            std::fs::read_to_string(path)
                .map(|s| (path.display().to_string(), s))
                .map_err(|e| format!("{}: {e}", path.display()))
        }
        None => Ok(("<prelude>".to_string(), BUNDLED_PRELUDE.to_string())),
    }
}

/// Run a command; returns the exit code and the text to print on stdout and
/// stderr.
pub fn run(cli: &Cli) -> (i32, String, String) {
    let (common, name, canon) = match &cli.command {
        Command::Check(c) => (c, None, false),
        Command::Eval { common, name } => (common, Some(name.clone()), false),
        Command::Canon(c) => (c, None, true),
    };
    let mut out = Out { json: common.json, lines: Vec::new(), errors: Vec::new() };
    let mode: Mode = common.mode.into();
    let code = with_mode(mode, || {
        clear_globals();
        if canon && mode != Mode::Strict {
            out.error(
                "[mode-violation] canonicity is only checked in strict mode".to_string(),
                json!({"ok": false, "kind": "mode-violation", "message": "canonicity is only checked in strict mode"}),
            );
            return EXIT_IO;
        }
        let mut sources = Vec::new();
        for f in &common.files {
            match std::fs::read_to_string(f) {
                Ok(s) => sources.push((f.display().to_string(), s)),
                Err(e) => {
                    let msg = format!("{}: {e}", f.display());
                    out.error(msg.clone(), json!({"file": f.display().to_string(), "ok": false, "kind": "io", "message": msg}));
                    return EXIT_IO;
                }
            }
        }
        let mut ok = true;
        if !common.no_prelude {
            match prelude_source() {
                Ok((file, src)) => {
                    let mut quiet = Out { json: common.json, lines: Vec::new(), errors: Vec::new() };
                    if load(&mut quiet, &file, &src, false).failed {
                        out.lines.extend(quiet.lines);
                        out.errors.extend(quiet.errors);
                        return EXIT_CHECK;
                    }
                }
                Err(msg) => {
                    out.error(msg.clone(), json!({"ok": false, "kind": "io", "message": msg}));
                    return EXIT_IO;
                }
            }
        }
        let mut mode_violation = false;
        for (file, src) in &sources {
            let st = load(&mut out, file, src, common.verbose);
            ok &= !st.failed;
            mode_violation |= st.mode_violation;
            if let Some(target) = &name {
                print_normal_forms(&mut out, file, src, target.as_deref());
            }
            if canon {
                ok &= check_canon(&mut out, file, src);
            }
        }
        if mode_violation {
            EXIT_IO
        } else if ok {
            EXIT_OK
        } else {
            EXIT_CHECK
        }
    });
    let mut stdout = out.lines.join("\n");
    if !stdout.is_empty() {
        stdout.push('\n');
    }
    let mut stderr = out.errors.join("\n");
    if !stderr.is_empty() {
        stderr.push('\n');
    }
    (code, stdout, stderr)
}

fn decl_names(src: &str) -> Vec<String> {
    let mut names = Vec::new();
    for line in src.lines() {
        let t = line.trim_start();
        if let Some(rest) = t.strip_prefix("def ") {
            if let Some(n) = rest.split(|c: char| c.is_whitespace() || c == ':' || c == '=').next() {
                if !n.is_empty() {
                    names.push(n.to_string());
                }
            }
        }
    }
    names
}

fn print_normal_forms(out: &mut Out, file: &str, src: &str, only: Option<&str>) {
    for n in decl_names(src) {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        match global(&n) {
            Some((_, v)) => {
                let nf = print(&quote(0, &v));
                out.line(format!("{n} = {nf}"), json!({"file": file, "decl": n, "normal_form": nf}));
            }
            None if only.is_some() => {
                let msg = format!("{file}: [unbound] no checked definition named `{n}`");
                out.error(msg.clone(), json!({"file": file, "decl": n, "ok": false, "kind": "unbound", "message": msg}));
            }
            None => {}
        }
    }
    if let Some(o) = only {
        if !decl_names(src).iter().any(|n| n == o) {
            let msg = format!("{file}: [unbound] no definition named `{o}`");
            out.error(msg.clone(), json!({"file": file, "decl": o, "ok": false, "kind": "unbound", "message": msg}));
        }
    }
}

fn check_canon(out: &mut Out, file: &str, src: &str) -> bool {
    let mut ok = true;
    for (n, k, line) in canon_pragmas(src) {
        let Some((_, v)) = global(&n) else {
            ok = false;
            let msg = format!("{file}:{line}: [unbound] `#canon` names unknown definition `{n}`");
            out.error(msg.clone(), json!({"file": file, "decl": n, "ok": false, "kind": "unbound", "message": msg}));
            continue;
        };
        let nf = quote(0, &v);
        match nf.as_numeral() {
            Some(m) if m == k => {
                out.line(format!("{file}: canon {n} = {k}"), json!({"file": file, "decl": n, "ok": true, "numeral": k}));
            }
            Some(m) => {
                ok = false;
                let msg = format!("{file}:{line}: [canon] `{n}` evaluates to {m}, expected {k}");
                out.error(msg.clone(), json!({"file": file, "decl": n, "ok": false, "kind": "canon", "numeral": m, "expected": k}));
            }
            None => {
                ok = false;
                let msg = format!(
                    "{file}:{line}: [canon] `{n}` is not a numeral in strict mode (kernel bug): {}",
                    print(&nf)
                );
                out.error(msg.clone(), json!({"file": file, "decl": n, "ok": false, "kind": "canon", "message": msg}));
            }
        }
    }
    ok
}
