// SPDX-License-Identifier: Apache-2.0

//! Argument parsing and dispatch for the `mergesam` binary.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{cmd_cva, cmd_cva_sam, cmd_eval, cmd_run, CvaArgs, CvaSamArgs, EvalArgs, RunArgs};
use crate::config::{ConfigOverrides, RunConfig};
use crate::error::{Result, EXIT_OK, EXIT_VALIDATION};

#[derive(Debug, Parser)]
#[command(name = "mergesam", version, about = "Unsupervised change detection from bitemporal segmentation masks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Match and split masks, score units by embedding MSE, threshold with Otsu.
    Run(RunCmd),
    /// Pixelwise change vector analysis.
    Cva(CvaCmd),
    /// Change vector analysis averaged over segmentation regions.
    CvaSam(CvaSamCmd),
    /// Compare a change map with a reference map.
    Eval(EvalCmd),
}

/// Parameters shared by the detection commands. Unset flags fall back to
/// the config file, then to built-in defaults.
#[derive(Debug, Args)]
pub struct ConfigFlags {
    /// TOML file with default parameters.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// IoU threshold for cross-epoch mask matching.
    #[arg(long)]
    pub t_iou: Option<f64>,
    /// Smallest split unit kept, in pixels.
    #[arg(long)]
    pub min_area: Option<u64>,
    #[arg(long)]
    pub otsu_bins: Option<usize>,
    /// Treat matched pairs as unchanged.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub matched_unchanged: Option<bool>,
    /// Weight unit scores by area in the Otsu histogram.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub area_weighted: Option<bool>,
    /// Longest image side after rescaling.
    #[arg(long)]
    pub resize_long_side: Option<usize>,
    /// Standardize each band before CVA.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub normalize: Option<bool>,
}

impl ConfigFlags {
    pub fn resolve(&self) -> Result<RunConfig> {
        let flags = ConfigOverrides {
            t_iou: self.t_iou,
            min_area: self.min_area,
            otsu_bins: self.otsu_bins,
            matched_unchanged: self.matched_unchanged,
            area_weighted: self.area_weighted,
            resize_long_side: self.resize_long_side,
            normalize: self.normalize,
        };
        RunConfig::resolve(self.config.as_deref(), &flags)
    }
}

#[derive(Debug, Args)]
pub struct RunCmd {
    #[arg(long)]
    pub masks_t1: PathBuf,
    #[arg(long)]
    pub masks_t2: PathBuf,
    #[arg(long)]
    pub emb_t1: PathBuf,
    #[arg(long)]
    pub emb_t2: PathBuf,
    /// Output change map (PNG).
    #[arg(long)]
    pub out: PathBuf,
    /// Score table path; defaults to `<out stem>.scores.csv`.
    #[arg(long)]
    pub scores: Option<PathBuf>,
    /// Provenance sidecar; defaults to `<out stem>.provenance.json`.
    #[arg(long)]
    pub provenance: Option<PathBuf>,
    #[command(flatten)]
    pub params: ConfigFlags,
}

#[derive(Debug, Args)]
pub struct CvaCmd {
    #[arg(long)]
    pub img_t1: PathBuf,
    #[arg(long)]
    pub img_t2: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub provenance: Option<PathBuf>,
    #[command(flatten)]
    pub params: ConfigFlags,
}

#[derive(Debug, Args)]
pub struct CvaSamCmd {
    #[arg(long)]
    pub img_t1: PathBuf,
    #[arg(long)]
    pub img_t2: PathBuf,
    #[arg(long)]
    pub masks_t1: PathBuf,
    #[arg(long)]
    pub masks_t2: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub provenance: Option<PathBuf>,
    #[command(flatten)]
    pub params: ConfigFlags,
}

#[derive(Debug, Args)]
pub struct EvalCmd {
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long = "ref")]
    pub reference: PathBuf,
    /// Nonzero pixels are excluded from the counts.
    #[arg(long)]
    pub ignore: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Row label in the printed table.
    #[arg(long, default_value = "prediction")]
    pub label: String,
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(c) => cmd_run(&RunArgs {
            config: c.params.resolve()?,
            masks_t1: c.masks_t1,
            masks_t2: c.masks_t2,
            emb_t1: c.emb_t1,
            emb_t2: c.emb_t2,
            out: c.out,
            scores: c.scores,
            provenance: c.provenance,
        }),
        Command::Cva(c) => cmd_cva(&CvaArgs {
            config: c.params.resolve()?,
            img_t1: c.img_t1,
            img_t2: c.img_t2,
            out: c.out,
            provenance: c.provenance,
        }),
        Command::CvaSam(c) => cmd_cva_sam(&CvaSamArgs {
            config: c.params.resolve()?,
            img_t1: c.img_t1,
            img_t2: c.img_t2,
            masks_t1: c.masks_t1,
            masks_t2: c.masks_t2,
            out: c.out,
            provenance: c.provenance,
        }),
        Command::Eval(c) => {
            let (_, table) = cmd_eval(&EvalArgs {
                pred: c.pred,
                reference: c.reference,
                ignore: c.ignore,
                out: c.out,
                label: c.label,
            })?;
            print!("{table}");
            Ok(())
        }
    }
}

/// Parse `args`, run the command and map the outcome to an exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
