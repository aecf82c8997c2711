use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use childnet::config::Config;
use childnet::export::{emit, Format};
use childnet::pipeline::{self, RunOptions};
use childnet::series::{CorpusSeries, SeriesEntry};
use childnet::service::{router, Workspace, WorkspaceOptions};
use childnet_core::metrics::{MetricsReport, PoissonN};
use clap::{Parser, Subcommand, ValueEnum};
use log::{error, info, warn};

/// Syntactic networks from annotated child speech.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// key = value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract child utterances and write utterance JSON plus skeleton XML.
    Extract {
        /// Series manifest (TOML); alternatively list transcripts.
        #[arg(long, conflicts_with = "transcripts")]
        series: Option<PathBuf>,
        /// CHAT transcripts; the file stem is the corpus id.
        transcripts: Vec<PathBuf>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Build graphs and metrics for every corpus of a series.
    Analyze {
        #[arg(long)]
        series: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        /// Node count used by the Poisson baseline.
        #[arg(long, value_enum)]
        poisson_n: Option<PoissonArg>,
    },
    /// Convert a reports.json to CSV or JSON.
    Report {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// Output file; stdout when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Serve a workspace of DGA files to the annotation UI.
    Serve {
        workspace: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Directory with the UI's static files.
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PoissonArg {
    Gcc,
    Words,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Bad configuration or input that stops the whole run.
struct Fatal(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.into())
    }
}

enum Outcome {
    Complete,
    Partial,
}

fn load_config(path: Option<&Path>) -> Result<Config, Fatal> {
    Ok(match path {
        Some(p) => Config::load(p).with_context(|| format!("config {}", p.display()))?,
        None => Config::default(),
    })
}

fn extract(
    cfg: &Config,
    series: Option<PathBuf>,
    transcripts: Vec<PathBuf>,
    out: &Path,
) -> Result<Outcome, Fatal> {
    let entries = match series {
        Some(p) => CorpusSeries::load(&p)?.entries,
        None => {
            let entries: Vec<SeriesEntry> = transcripts
                .into_iter()
                .map(|t| SeriesEntry {
                    corpus_id: t
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_default(),
                    transcript: t,
                    annotation: None,
                    age: None,
                })
                .collect();
            let s = CorpusSeries { entries };
            s.check()?;
            s.entries
        }
    };
    // extraction never reads annotations
    let entries = entries
        .into_iter()
        .map(|e| SeriesEntry {
            annotation: None,
            ..e
        })
        .collect();
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let result = pipeline::run(&CorpusSeries { entries }, &RunOptions::from(cfg));
    let mut outcome = Outcome::Complete;
    for (id, r) in &result.outcomes {
        match r {
            Ok(o) => {
                for d in &o.diagnostics {
                    warn!("{id}: {d}");
                }
                pipeline::write_corpus_outputs(o, out)?;
                info!("{id}: {} utterances", o.utterances.len());
            }
            Err(e) => {
                error!("{id}: {e}");
                outcome = Outcome::Partial;
            }
        }
    }
    Ok(outcome)
}

fn analyze(cfg: &Config, series: &Path, out: &Path) -> Result<Outcome, Fatal> {
    let series = CorpusSeries::load(series)?;
    let result = pipeline::run(&series, &RunOptions::from(cfg));
    for (id, e) in result.failures() {
        error!("{id}: {e}");
    }
    pipeline::write_run(&result, out)?;
    Ok(if result.is_complete() {
        Outcome::Complete
    } else {
        Outcome::Partial
    })
}

fn report(input: &Path, format: FormatArg, output: Option<&Path>) -> Result<Outcome, Fatal> {
    let bytes = std::fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let reports: Vec<MetricsReport> =
        serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", input.display()))?;
    let format = match format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    let data = emit(&reports, format);
    match output {
        Some(p) => std::fs::write(p, data).with_context(|| format!("writing {}", p.display()))?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&data)?;
        }
    }
    Ok(Outcome::Complete)
}

fn serve(
    cfg: &Config,
    workspace: PathBuf,
    addr: SocketAddr,
    static_dir: Option<PathBuf>,
) -> Result<Outcome, Fatal> {
    let opts = WorkspaceOptions {
        extract: cfg.extract_options(),
        criteria: cfg.criteria_config()?,
        metrics: cfg.metrics_config(),
    };
    let ws = Workspace::open(&workspace, opts)
        .with_context(|| format!("workspace {}", workspace.display()))?;
    let app = router(Arc::new(ws), static_dir.as_deref());
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr).await?;
        info!("listening on http://{addr}");
        axum::serve(listener, app).await
    })?;
    Ok(Outcome::Complete)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = load_config(cli.config.as_deref()).and_then(|mut cfg| match cli.command {
        Command::Extract {
            series,
            transcripts,
            out,
        } => extract(&cfg, series, transcripts, &out),
        Command::Analyze {
            series,
            out,
            poisson_n,
        } => {
            if let Some(p) = poisson_n {
                cfg.poisson_n = match p {
                    PoissonArg::Gcc => PoissonN::Gcc,
                    PoissonArg::Words => PoissonN::Words,
                };
            }
            analyze(&cfg, &series, &out)
        }
        Command::Report {
            input,
            format,
            output,
        } => report(&input, format, output.as_deref()),
        Command::Serve {
            workspace,
            addr,
            static_dir,
        } => serve(&cfg, workspace, addr, static_dir),
    });
    match result {
        Ok(Outcome::Complete) => ExitCode::SUCCESS,
        Ok(Outcome::Partial) => ExitCode::from(1),
        Err(Fatal(e)) => {
            error!("{e:#}");
            ExitCode::from(2)
        }
    }
}
