use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;

use trackbench::corpus::{save_manifest, write_results};
use trackbench::{generate, Scenario, SynthSpec};

#[derive(Args, Debug)]
pub(crate) struct SynthArgs {
    /// Output directory; receives manifest.json, gt/ and results/.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    sequences: usize,
    #[arg(long, default_value_t = 50)]
    min_frames: usize,
    #[arg(long, default_value_t = 200)]
    max_frames: usize,
    /// Per-tracker jitter in pixels, comma separated; one tracker per entry.
    #[arg(long, value_delimiter = ',', default_value = "0,4,8,12,16")]
    noise: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    absence_rate: f64,
    #[arg(long, default_value_t = 3)]
    passes: usize,
    #[arg(long, default_value_t = 4)]
    sub_scenarios: usize,
    /// Scenario weights such as `animal=2,uav=1`; defaults to all nine equally.
    #[arg(long, value_delimiter = ',')]
    scenario_mix: Vec<String>,
}

fn parse_mix(items: &[String]) -> Result<Vec<(Scenario, f64)>> {
    if items.is_empty() {
        return Ok(Scenario::ALL.iter().map(|&s| (s, 1.0)).collect());
    }
    items
        .iter()
        .map(|item| {
            let Some((name, weight)) = item.split_once('=') else {
                bail!("--scenario-mix entry {item:?} is not of the form scenario=weight");
            };
            let weight: f64 = weight
                .parse()
                .with_context(|| format!("--scenario-mix weight in {item:?}"))?;
            Ok((name.parse::<Scenario>()?, weight))
        })
        .collect()
}

pub(crate) fn run(args: SynthArgs) -> Result<()> {
    let spec = SynthSpec {
        seed: args.seed,
        n_sequences: args.sequences,
        frames_range: (args.min_frames, args.max_frames),
        tracker_noise: args.noise,
        absence_rate: args.absence_rate,
        scenario_mix: parse_mix(&args.scenario_mix)?,
        passes: args.passes,
        sub_scenarios_per_scenario: args.sub_scenarios,
    };
    let corpus = generate(&spec)?;
    let manifest = save_manifest(&args.out, &corpus)?;
    write_results(&args.out.join("results"), corpus.results())?;
    println!(
        "wrote {} sequences, {} trackers x {} passes: {}",
        corpus.len(),
        spec.tracker_noise.len(),
        spec.passes,
        manifest.display()
    );
    Ok(())
}
