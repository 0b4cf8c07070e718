use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use charsum_cli::{run, CampaignConfig};

/// Exact multiplicative character sums over affine subspaces: identity
/// suites, L-polynomial reconstruction, classifier censuses, and
/// parametrized sums.
#[derive(Parser)]
#[command(name = "charsum", version, about)]
struct Cli {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// verify-classic | lfunction | scan | census | param
    #[arg(long)]
    mode: Option<String>,
    /// Field characteristic.
    #[arg(long)]
    p: Option<u64>,
    /// Field extension degree (default 1).
    #[arg(long)]
    a: Option<u32>,
    /// Ambient dimension.
    #[arg(long)]
    n: Option<usize>,
    /// Subspace dimension.
    #[arg(long)]
    d: Option<usize>,
    /// "all-nontrivial" or a comma list of exponents, e.g. "1,2,3".
    #[arg(long)]
    chars: Option<String>,
    /// "random:COUNT", "exhaustive", or a JSON instance file.
    #[arg(long)]
    instances: Option<String>,
    /// RNG seed for random instance draws.
    #[arg(long)]
    seed: Option<u64>,
    /// Point enumeration cap.
    #[arg(long)]
    cap: Option<u64>,
    /// Surplus power sums checked beyond the predicted degree.
    #[arg(long)]
    extra: Option<usize>,
    /// Report file; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_parser = ["json", "csv"])]
    format: Option<String>,
    /// Worker threads (default: rayon's choice).
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags = CampaignConfig {
        mode: cli.mode,
        p: cli.p,
        a: cli.a,
        n: cli.n,
        d: cli.d,
        chars: cli.chars,
        instances: cli.instances,
        seed: cli.seed,
        cap: cli.cap,
        extra: cli.extra,
        out: cli.out,
        format: cli.format,
        threads: cli.threads,
    };
    let config = match cli.config {
        Some(path) => match CampaignConfig::from_file(&path) {
            Ok(file) => flags.overlaid(file),
            Err(e) => {
                eprintln!("charsum: {e}");
                return ExitCode::from(2);
            }
        },
        None => flags,
    };
    match run(&config) {
        Ok(outcome) => {
            eprintln!("{}", outcome.summary);
            if config.out.is_none() {
                println!("{}", outcome.rendered);
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("charsum: {e}");
            ExitCode::from(2)
        }
    }
}
