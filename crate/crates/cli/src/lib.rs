//! Command-line front end for the `smoothsum` library.

pub mod columns;
pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use smoothsum::{par, verify};

use crate::columns::*;
use crate::commands::Cmd;
use crate::config::{expand_config, RunConfig};
use crate::output::{emit, render, Meta};

pub const EXIT_ACCEPTANCE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "smoothsum", version, about = "Smooth k-free weighted sums: tables, checks and acceptance runs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CmdArgs {
    /// File of `key = value` lines using the long flag names; flags given
    /// on the command line override it
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunConfig,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dickman rho(u), or rho_hat(ix) with its continuous logarithm
    #[command(args_override_self = true, after_help = help_text(&[DICKMAN_RHO, DICKMAN_RHO_HAT]))]
    DickmanTable(CmdArgs),
    /// zeta(sigma + i tau) over the tau grid
    #[command(args_override_self = true, after_help = help_text(&[ZETA]))]
    ZetaTable(CmdArgs),
    /// Partial Euler products g, zeta_N^alpha and h at s = sigma + i tau
    #[command(args_override_self = true, after_help = help_text(&[PRODUCTS]))]
    ProductsTable(CmdArgs),
    /// The sum by direct enumeration of smooth k-free integers
    #[command(args_override_self = true, after_help = help_text(&[BRUTE]))]
    Brute(CmdArgs),
    /// The sum as a Fourier integral over the Euler product g
    #[command(args_override_self = true, after_help = help_text(&[EXACT]))]
    Exact(CmdArgs),
    /// The main-term constant C_f
    #[command(args_override_self = true, after_help = help_text(&[CFACTOR]))]
    Cfactor(CmdArgs),
    /// The sum against its main term C_f (log N)^alpha
    #[command(args_override_self = true, after_help = help_text(&[THEOREM2]))]
    Theorem2(CmdArgs),
    /// Accuracy of zeta_N(s) ~ zeta(s)(s-1) log N rho_hat((s-1) log N) on Re s = 1
    #[command(args_override_self = true, after_help = help_text(&[TENENBAUM]))]
    Tenenbaum(CmdArgs),
    /// Convergence of the finite correction product h_N to h
    #[command(args_override_self = true, after_help = help_text(&[LEMMA1]))]
    Lemma1(CmdArgs),
    /// The two error pieces: the integral beyond 3 log N and the h_N - h term
    #[command(args_override_self = true, after_help = help_text(&[ERRORDECOMP]))]
    Errordecomp(CmdArgs),
    /// Run the acceptance suite; exits 1 if any criterion fails
    #[command(args_override_self = true, after_help = VERIFY_HELP)]
    VerifyAll(CmdArgs),
}

impl Command {
    fn split(self) -> (Option<Cmd>, RunConfig) {
        use Command::*;
        match self {
            DickmanTable(a) => (Some(Cmd::DickmanTable), a.run),
            ZetaTable(a) => (Some(Cmd::ZetaTable), a.run),
            ProductsTable(a) => (Some(Cmd::ProductsTable), a.run),
            Brute(a) => (Some(Cmd::Brute), a.run),
            Exact(a) => (Some(Cmd::Exact), a.run),
            Cfactor(a) => (Some(Cmd::Cfactor), a.run),
            Theorem2(a) => (Some(Cmd::Theorem2), a.run),
            Tenenbaum(a) => (Some(Cmd::Tenenbaum), a.run),
            Lemma1(a) => (Some(Cmd::Lemma1), a.run),
            Errordecomp(a) => (Some(Cmd::Errordecomp), a.run),
            VerifyAll(a) => (None, a.run),
        }
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let argv = match expand_config(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (cmd, cfg) = cli.command.split();
    match cmd {
        Some(cmd) => run_table(cmd, &cfg),
        None => run_verify(&cfg),
    }
}

fn run_table(cmd: Cmd, cfg: &RunConfig) -> i32 {
    let prep = match commands::validate(cmd, cfg) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {}: {e}", e.kind());
            return EXIT_CONFIG;
        }
    };
    let table = match par::with_threads(cfg.threads, || commands::compute(cmd, cfg, &prep)) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", e.kind());
            return EXIT_COMPUTE;
        }
    };
    let text = render(&Meta::new(cmd.name(), cfg), &[table], cfg.format);
    write_out(&text, cfg)
}

fn run_verify(cfg: &RunConfig) -> i32 {
    let reports = verify::run_all(cfg.level, cfg.threads);
    let tables: Vec<_> = reports.iter().flat_map(|r| r.tables.iter().cloned()).collect();
    let text = render(&Meta::new("verify-all", cfg), &tables, cfg.format);
    let code = write_out(&text, cfg);
    for r in &reports {
        eprintln!("{}", r.line());
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    eprintln!("{} passed, {failed} failed", reports.len() - failed);
    if code != 0 {
        code
    } else if failed > 0 {
        EXIT_ACCEPTANCE
    } else {
        0
    }
}

fn write_out(text: &str, cfg: &RunConfig) -> i32 {
    match emit(text, cfg) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            EXIT_CONFIG
        }
    }
}
