use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use regfam::cli::{execute, Mode, Options};

/// Regular families, ordinal indices, Tsirelson-type norms and coloring witnesses.
///
/// With no COMMAND, reads one command per line from --file or standard input.
#[derive(Parser)]
#[command(name = "regfam", version)]
struct Args {
    /// Output format: `table` or `records` (one JSON object per line).
    #[arg(long, default_value = "table")]
    mode: Mode,
    /// Search bound B for witness searches.
    #[arg(long)]
    bound: Option<u64>,
    /// Largest support the norm evaluator accepts.
    #[arg(long)]
    support_limit: Option<usize>,
    /// Ground set size for searcher source families.
    #[arg(long)]
    src_ground: Option<u64>,
    /// Batch file with one command per line.
    #[arg(long)]
    file: Option<PathBuf>,
    /// A verb followed by its arguments, e.g. `iota S[2]`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    command: Vec<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut opts = Options { mode: args.mode, ..Options::default() };
    if let Some(b) = args.bound {
        opts.bound = b;
    }
    if let Some(l) = args.support_limit {
        opts.support_limit = l;
    }
    if let Some(g) = args.src_ground {
        opts.src_ground = g;
    }

    let lines: Vec<(usize, String)> = if !args.command.is_empty() {
        vec![(1, args.command.join(" "))]
    } else {
        let text = match &args.file {
            Some(path) => match fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("cannot read {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            },
            None => io::stdin().lock().lines().map_while(Result::ok).collect::<Vec<_>>().join("\n"),
        };
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(i, l)| (i + 1, l.to_string()))
            .collect()
    };

    let mut status = 0;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for (lineno, line) in lines {
        let (rendered, res) = execute(&line, lineno, &opts);
        for r in rendered {
            let _ = writeln!(out, "{r}");
        }
        if let Err(e) = res {
            eprintln!("{e}");
            status = status.max(e.exit_code());
        }
    }
    ExitCode::from(status as u8)
}
