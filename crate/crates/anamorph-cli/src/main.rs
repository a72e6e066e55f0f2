//! `anamorph` — drive the anamorphic encryption pipeline from the shell.
//!
//! Every command reads and writes JSON state files, prints a single
//! machine-readable run report on standard output, and derives all of its
//! randomness from one seed (`--seed`, else `ANAMORPH_SEED`, else 0) through
//! labeled substreams, so identical invocations produce byte-identical
//! output files.
//!
//! Exit codes: 0 success; 2 malformed input or flags; 3 infeasible coupling
//! or violated positivity condition; 4 reconstruction or built-in check
//! failure. Errors print one parsable line on standard error.

mod exec;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{Run, RunReport};

#[derive(Parser)]
#[command(name = "anamorph", version, about = "Anamorphic encryption, covert extraction, and secret-sharing experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key and encrypt an original message with a covert payload.
    Encrypt(EncryptArgs),
    /// Encrypt the original message alone under an existing key.
    EncryptOriginal(EncryptOriginalArgs),
    /// Decrypt the original message from a ciphertext.
    Dom(DomArgs),
    /// Extract the covert message, exactly or by measurement simulation.
    Dcm(DcmArgs),
    /// Map an anamorphic ciphertext onto its honest-looking counterpart.
    Eoc(EocArgs),
    /// Distance and fidelity report for a ciphertext pair.
    Analyze(AnalyzeArgs),
    /// Entropy accounting for an encrypted message pair.
    Entropy(EntropyArgs),
    /// Check permutation-twirl formulas against brute force and closed forms.
    TwirlCheck(TwirlCheckArgs),
    /// Check that coin-averaged encryption is a constant channel.
    QcpaCheck(QcpaCheckArgs),
    /// Split an encrypted message pair into three shares.
    Share(ShareArgs),
    /// Rebuild the messages from two share bundles.
    Reconstruct(ReconstructArgs),
    /// Estimate the forged-covert-share success rate.
    CheatSim(CheatSimArgs),
    /// Run the supervised-transmission consistency check end to end.
    Tpds(TpdsArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Encrypt(_) => "encrypt",
            Command::EncryptOriginal(_) => "encrypt-original",
            Command::Dom(_) => "dom",
            Command::Dcm(_) => "dcm",
            Command::Eoc(_) => "eoc",
            Command::Analyze(_) => "analyze",
            Command::Entropy(_) => "entropy",
            Command::TwirlCheck(_) => "twirl-check",
            Command::QcpaCheck(_) => "qcpa-check",
            Command::Share(_) => "share",
            Command::Reconstruct(_) => "reconstruct",
            Command::CheatSim(_) => "cheat-sim",
            Command::Tpds(_) => "tpds",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EtaModeArg {
    /// Positivity via the Schur-complement condition.
    Strict,
    /// The simpler sufficient norm condition.
    Weak,
}

impl From<EtaModeArg> for anamorph_core::EtaMode {
    fn from(arg: EtaModeArg) -> Self {
        match arg {
            EtaModeArg::Strict => anamorph_core::EtaMode::Strict,
            EtaModeArg::Weak => anamorph_core::EtaMode::Weak,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    /// Assemble the block matrix directly.
    Direct,
    /// Realize the off-diagonal block through the unitary dilation.
    Dilation,
}

#[derive(Clone, Copy, ValueEnum)]
enum DcmModeArg {
    /// Read the covert block off the ciphertext matrix.
    Exact,
    /// Simulate probe measurements and invert them.
    Sampled,
}

#[derive(Args)]
struct EncryptArgs {
    /// Original message density matrix (JSON).
    #[arg(long)]
    original: PathBuf,
    /// Covert message density matrix (JSON).
    #[arg(long)]
    covert: PathBuf,
    /// Where to write the ciphertext.
    #[arg(long)]
    out: PathBuf,
    /// Where to write the generated key.
    #[arg(long)]
    key_out: PathBuf,
    /// RNG seed; falls back to ANAMORPH_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Require the coupling to beat 2^-bits.
    #[arg(long, default_value_t = 1)]
    security_bits: u32,
    /// Feasibility rule used to pick the coupling.
    #[arg(long, value_enum, default_value_t = EtaModeArg::Weak)]
    eta_mode: EtaModeArg,
    /// How the ciphertext is assembled.
    #[arg(long, value_enum, default_value_t = RouteArg::Direct)]
    route: RouteArg,
}

#[derive(Args)]
struct EncryptOriginalArgs {
    /// Original message density matrix (JSON).
    #[arg(long)]
    original: PathBuf,
    /// Existing key file.
    #[arg(long)]
    key: PathBuf,
    /// Where to write the ciphertext.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DomArgs {
    /// Ciphertext file.
    #[arg(long)]
    ct: PathBuf,
    /// Key file.
    #[arg(long)]
    key: PathBuf,
    /// Optional output path for the recovered message.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DcmArgs {
    /// Ciphertext file.
    #[arg(long)]
    ct: PathBuf,
    /// Key file.
    #[arg(long)]
    key: PathBuf,
    /// Extraction mode.
    #[arg(long, value_enum)]
    mode: DcmModeArg,
    /// Target estimation error (sampled mode).
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
    /// Admitted failure probability (sampled mode).
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Number of independent extraction trials (sampled mode).
    #[arg(long, default_value_t = 1)]
    trials: u64,
    /// RNG seed; falls back to ANAMORPH_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Optional output path for the recovered covert message. In sampled
    /// mode this is the raw Hermitian estimate from the first trial.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional CSV log of every simulated shot.
    #[arg(long)]
    shot_log: Option<PathBuf>,
}

#[derive(Args)]
struct EocArgs {
    /// Ciphertext file.
    #[arg(long)]
    ct: PathBuf,
    /// Key file.
    #[arg(long)]
    key: PathBuf,
    /// Where to write the honest-looking ciphertext.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// First ciphertext.
    #[arg(long)]
    ct0: PathBuf,
    /// Second ciphertext.
    #[arg(long)]
    ct1: PathBuf,
    /// Coupling strength the pair was produced under.
    #[arg(long)]
    eta: u64,
}

#[derive(Args)]
struct EntropyArgs {
    /// Original message density matrix (JSON).
    #[arg(long)]
    original: PathBuf,
    /// Covert message density matrix (JSON).
    #[arg(long)]
    covert: PathBuf,
    /// Key file.
    #[arg(long)]
    key: PathBuf,
}

#[derive(Args)]
struct TwirlCheckArgs {
    /// Original-message qubit count.
    #[arg(long, default_value_t = 1)]
    d1: u32,
    /// Covert-message qubit count.
    #[arg(long, default_value_t = 1)]
    d2: u32,
    /// Coupling strength.
    #[arg(long, default_value_t = 4)]
    eta: u64,
    /// Also average over every permutation explicitly and compare.
    #[arg(long)]
    brute_force: bool,
}

#[derive(Args)]
struct QcpaCheckArgs {
    /// Original-message qubit count.
    #[arg(long, default_value_t = 1)]
    d1: u32,
    /// Covert-message qubit count.
    #[arg(long, default_value_t = 1)]
    d2: u32,
    /// Coupling strength.
    #[arg(long, default_value_t = 4)]
    eta: u64,
    /// Monte Carlo sample count (used when exact enumeration is off scale).
    #[arg(long, default_value_t = 600)]
    samples: usize,
    /// RNG seed; falls back to ANAMORPH_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ShareArgs {
    /// Original message density matrix (JSON).
    #[arg(long)]
    original: PathBuf,
    /// Covert message density matrix (JSON).
    #[arg(long)]
    covert: PathBuf,
    /// Public list of admissible couplings, comma separated.
    #[arg(long, default_value = "4,8,16,32")]
    eta_domain: String,
    /// Directory receiving bundle-{1,2,3}.json, encoded.json, dictator.json.
    #[arg(long)]
    out_dir: PathBuf,
    /// RNG seed; falls back to ANAMORPH_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Require the coupling to beat 2^-bits.
    #[arg(long, default_value_t = 1)]
    security_bits: u32,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Directory written by `share`.
    #[arg(long)]
    dir: PathBuf,
    /// The two participating players, e.g. "1,3".
    #[arg(long)]
    players: String,
    /// Public list of admissible couplings, comma separated.
    #[arg(long, default_value = "4,8,16,32")]
    eta_domain: String,
    /// Withhold the covert components, as for an original-only authorization.
    #[arg(long)]
    original_only: bool,
    /// Optional output path for the reconstructed original message.
    #[arg(long)]
    out_original: Option<PathBuf>,
    /// Optional output path for the reconstructed covert message.
    #[arg(long)]
    out_covert: Option<PathBuf>,
}

#[derive(Args)]
struct CheatSimArgs {
    /// Number of forgery trials.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Original-message qubit count.
    #[arg(long, default_value_t = 1)]
    d1: u32,
    /// Covert-message qubit count.
    #[arg(long, default_value_t = 1)]
    d2: u32,
    /// Size of the public coupling list.
    #[arg(long, default_value_t = 4)]
    domain_size: u64,
    /// RNG seed; falls back to ANAMORPH_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct TpdsArgs {
    /// Original message density matrix (JSON).
    #[arg(long)]
    original: PathBuf,
    /// Covert message density matrix (JSON).
    #[arg(long)]
    covert: PathBuf,
    /// RNG seed; falls back to ANAMORPH_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Require the coupling to beat 2^-bits.
    #[arg(long, default_value_t = 1)]
    security_bits: u32,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let command = cli.command.name().to_string();
    let mut run = Run::default();
    match exec::dispatch(cli.command, &mut run) {
        Ok(metrics) => {
            let report = RunReport {
                command,
                inputs: run.inputs,
                outputs: run.outputs,
                metrics,
                wall_time_ms: started.elapsed().as_millis() as u64,
            };
            println!("{}", mat_core::json::to_json_string(&report));
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", err.stderr_line());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
