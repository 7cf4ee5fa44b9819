//! Command-line front end. Exit codes: 0 success, 1 domain error (unknown
//! target, INSUFFICIENT, caps), 2 usage or parse error.

use std::ffi::OsString;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use phax_core::af::Semantics;
use phax_core::aspic::defeat_graph_dot;
use phax_core::pipeline::Analysis;
use phax_core::render::render_af_dot;
use phax_core::theory::Diagnostic;

use crate::api::{self, ApiError, ExplainRequest, ProfileRef, WeightOverrides};
use crate::service::{self, AppState};

#[derive(Debug, Parser)]
#[command(name = "phax", version, about = "Argumentation-based explanations for defeasible theories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ListFormat {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a theory file.
    Check { file: PathBuf },
    /// List the arguments of a theory and the attacks between them.
    Args {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: ListFormat,
    },
    /// Labellings of the argument graph under a semantics.
    Extensions {
        file: PathBuf,
        #[arg(long, default_value = "grounded")]
        semantics: Semantics,
        #[arg(long, value_enum, default_value = "text")]
        format: ListFormat,
    },
    /// Explain a conclusion or argument to a given audience.
    Explain {
        file: PathBuf,
        /// Literal, argument label or argument id.
        #[arg(long)]
        target: String,
        /// Built-in profile name or a profile JSON file.
        #[arg(long)]
        profile: String,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value = "grounded")]
        semantics: Semantics,
        /// text, markdown, dot, or json for the full service response.
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "PHAX_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Persist sessions as theory text plus metadata in this directory.
        #[arg(long)]
        state_dir: Option<PathBuf>,
    },
}

/// Failure of one subcommand, already mapped to an exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<ApiError> for Failure {
    fn from(e: ApiError) -> Self {
        let mut message = e.to_string();
        for d in &e.diagnostics {
            message.push_str(&format!("\n  {d}"));
        }
        Failure {
            code: if e.is_domain() { 1 } else { 2 },
            message,
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn read_source(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn diagnostics_text(path: &Path, diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| match d.pos {
            Some(p) => format!("{}:{}:{}: {}", path.display(), p.line, p.col, d.message),
            None => format!("{}: {}", path.display(), d.message),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn analyse(path: &Path) -> Result<Analysis, Failure> {
    let source = read_source(path)?;
    let theory = match api::load_theory(&source) {
        Ok(t) => t,
        Err(e) if !e.diagnostics.is_empty() => return Err(usage(diagnostics_text(path, &e.diagnostics))),
        Err(e) => return Err(e.into()),
    };
    Analysis::new(&theory).map_err(|e| ApiError::from(e).into())
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("response serializes");
    s.push('\n');
    s
}

fn profile_ref(arg: &str) -> Result<ProfileRef, Failure> {
    if arg.ends_with(".json") || Path::new(arg).is_file() {
        let text = read_source(Path::new(arg))?;
        let u = phax_core::adapt::UserProfile::from_json(&text).map_err(|e| usage(e.to_string()))?;
        Ok(ProfileRef::Inline(u))
    } else {
        Ok(ProfileRef::Name(arg.to_string()))
    }
}

fn run(cmd: Command, out: &mut dyn Write) -> Result<(), Failure> {
    let write = |out: &mut dyn Write, s: &str| out.write_all(s.as_bytes()).map_err(|e| usage(e.to_string()));
    match cmd {
        Command::Check { file } => {
            let an = analyse(&file)?;
            let t = &an.theory;
            write(
                out,
                &format!(
                    "ok: theory {} ({} premises, {} rules, {} preferences, {} arguments)\n",
                    t.name,
                    t.premises.len(),
                    t.rules.len(),
                    t.preferences.len(),
                    an.defeats.arguments.len()
                ),
            )
        }
        Command::Args { file, format } => {
            let an = analyse(&file)?;
            match format {
                ListFormat::Json => write(out, &json(&api::arguments_view(&an))),
                ListFormat::Dot => write(out, &defeat_graph_dot(&an.defeats)),
                ListFormat::Text => {
                    let view = api::arguments_view(&an);
                    let width = view.arguments.iter().map(|a| a.label.len()).max().unwrap_or(0);
                    let mut s = String::new();
                    for a in &view.arguments {
                        s.push_str(&format!(
                            "{:width$}  {:5}  {:.2}  {}\n",
                            a.label,
                            a.grounded.to_string(),
                            a.weight,
                            a.conclusion
                        ));
                    }
                    for at in &view.attacks {
                        let kind = serde_json::to_value(at.kind).unwrap();
                        s.push_str(&format!(
                            "{} -> {} ({} on {}){}\n",
                            at.attacker,
                            at.attacked,
                            kind.as_str().unwrap_or_default(),
                            at.target,
                            if at.defeat { "" } else { ", fails" }
                        ));
                    }
                    write(out, &s)
                }
            }
        }
        Command::Extensions { file, semantics, format } => {
            let an = analyse(&file)?;
            let view = api::extensions_view(&an, semantics).map_err(Failure::from)?;
            match format {
                ListFormat::Json => write(out, &json(&view)),
                ListFormat::Dot => {
                    let labellings = an.labellings(semantics).map_err(|e| Failure::from(ApiError::from(e)))?;
                    let mut s = String::new();
                    for l in &labellings {
                        s.push_str(&render_af_dot(&an.af, l));
                    }
                    write(out, &s)
                }
                ListFormat::Text => {
                    if view.labellings.is_empty() {
                        return write(out, &format!("no {semantics} labellings\n"));
                    }
                    let s: String = view.labellings.iter().map(|l| format!("{}\n", l.summary)).collect();
                    write(out, &s)
                }
            }
        }
        Command::Explain {
            file,
            target,
            profile,
            tau,
            epsilon,
            alpha,
            beta,
            gamma,
            semantics,
            format,
        } => {
            let an = analyse(&file)?;
            let as_json = format == "json";
            let req = ExplainRequest {
                target,
                profile: profile_ref(&profile)?,
                weights: WeightOverrides {
                    alpha,
                    beta,
                    gamma,
                    tau,
                    epsilon,
                },
                semantics: Some(semantics),
                format: Some(if as_json { "text".into() } else { format }),
            };
            let resp = api::explain(&an, &req)?;
            if as_json {
                write(out, &json(&resp))
            } else {
                write(out, &resp.rendered.body)
            }
        }
        Command::Serve { port, host, state_dir } => {
            let state = match &state_dir {
                Some(dir) => AppState::with_state_dir(dir).map_err(|e| usage(format!("state dir: {e}")))?,
                None => AppState::new(),
            };
            let rt = tokio::runtime::Runtime::new().map_err(|e| usage(e.to_string()))?;
            rt.block_on(service::serve(SocketAddr::new(host, port), state)).map_err(|e| Failure {
                code: 1,
                message: format!("serve: {e}"),
            })
        }
    }
}

/// Parses `args` (program name first) and runs the subcommand, writing
/// results to `out` and errors to `err`. Returns the exit code.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    match run(cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
