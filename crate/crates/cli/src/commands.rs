// SPDX-License-Identifier: Apache-2.0

//! The four subcommands, as plain functions over resolved arguments.

use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use mergesam_core::baselines::{cva_magnitude, cva_map, cva_sam};
use mergesam_core::raster::{long_side_dims, resize_bilinear, resize_image, resize_nearest};
use mergesam_core::{confusion, metrics, run_pipeline, ChangeMap, GridDims, MetricsReport, MultiBandImage};
use serde_json::json;

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::interchange::{self, MaskSet};
use crate::report::{metrics_json, metrics_table, score_table, Provenance};

fn load_masks(stage: &'static str, path: &Path) -> Result<MaskSet> {
    let (set, warnings) = interchange::read_mask_set(path).map_err(CliError::file(stage, path))?;
    for w in warnings {
        warn!("{}: {w}", path.display());
    }
    Ok(set)
}

fn load_image(stage: &'static str, path: &Path) -> Result<MultiBandImage> {
    interchange::read_image(path).map_err(CliError::file(stage, path))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(CliError::io(path))
}

fn write_map(path: &Path, map: &ChangeMap) -> Result<()> {
    interchange::write_change_map(path, map).map_err(CliError::file("output", path))
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

/// `<out>.<suffix>` next to the change map, e.g. `change.png` -> `change.scores.csv`.
pub fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}"))
}

#[derive(Debug, Clone)]
pub struct RunArgs {
    pub masks_t1: PathBuf,
    pub masks_t2: PathBuf,
    pub emb_t1: PathBuf,
    pub emb_t2: PathBuf,
    pub out: PathBuf,
    pub scores: Option<PathBuf>,
    pub provenance: Option<PathBuf>,
    pub config: RunConfig,
}

pub fn cmd_run(args: &RunArgs) -> Result<()> {
    let m1 = load_masks("masks_t1", &args.masks_t1)?;
    let m2 = load_masks("masks_t2", &args.masks_t2)?;
    let e1 = interchange::read_embedding(&args.emb_t1).map_err(CliError::file("emb_t1", &args.emb_t1))?;
    let e2 = interchange::read_embedding(&args.emb_t2).map_err(CliError::file("emb_t2", &args.emb_t2))?;
    if m1.dims != m2.dims {
        return Err(CliError::Validation {
            stage: "inputs",
            message: format!("mask sets differ in size: t1 {} vs t2 {}", m1.dims, m2.dims),
        });
    }
    for (name, e) in [("emb_t1", &e1), ("emb_t2", &e2)] {
        if e.image_dims() != m1.dims {
            return Err(CliError::Validation {
                stage: "inputs",
                message: format!("{name} is aligned to {} but masks are {}", e.image_dims(), m1.dims),
            });
        }
    }

    let out = run_pipeline(
        m1.dims,
        &m1.object_masks(),
        &m2.object_masks(),
        &e1,
        &e2,
        &args.config.pipeline(),
    )
    .map_err(CliError::core("pipeline"))?;
    if out.change_map.dims() != m1.dims || out.scores.len() != out.units.len() {
        return Err(CliError::Internal("pipeline output does not match the working grid".into()));
    }
    info!(
        "{} units ({} matched pairs), threshold {:?}, {} changed pixels",
        out.units.len(),
        out.pairs.len(),
        out.threshold.map(|t| t.value),
        out.change_map.changed_count()
    );

    let scores_path = args.scores.clone().unwrap_or_else(|| sibling(&args.out, "scores.csv"));
    let prov_path = args.provenance.clone().unwrap_or_else(|| sibling(&args.out, "provenance.json"));
    write_map(&args.out, &out.change_map)?;
    write_text(&scores_path, &score_table(&out.scores))?;

    let mut prov = Provenance::new("run", args.config);
    prov.inputs.insert("masks_t1", path_str(&args.masks_t1));
    prov.inputs.insert("masks_t2", path_str(&args.masks_t2));
    prov.inputs.insert("emb_t1", path_str(&args.emb_t1));
    prov.inputs.insert("emb_t2", path_str(&args.emb_t2));
    prov.outputs.insert("change_map", path_str(&args.out));
    prov.outputs.insert("scores", path_str(&scores_path));
    prov.summary.insert("width", json!(m1.dims.width()));
    prov.summary.insert("height", json!(m1.dims.height()));
    prov.summary.insert("units", json!(out.units.len()));
    prov.summary.insert("matched_pairs", json!(out.pairs.len()));
    prov.summary.insert("threshold", json!(out.threshold.map(|t| t.value)));
    prov.summary.insert("changed_pixels", json!(out.change_map.changed_count()));
    write_text(&prov_path, &prov.to_json())
}

#[derive(Debug, Clone)]
pub struct CvaArgs {
    pub img_t1: PathBuf,
    pub img_t2: PathBuf,
    pub out: PathBuf,
    pub provenance: Option<PathBuf>,
    pub config: RunConfig,
}

fn load_pair(a: &Path, b: &Path) -> Result<(MultiBandImage, MultiBandImage)> {
    let i1 = load_image("img_t1", a)?;
    let i2 = load_image("img_t2", b)?;
    if i1.dims() != i2.dims() {
        return Err(CliError::Validation {
            stage: "inputs",
            message: format!("image sizes differ: t1 {} vs t2 {}", i1.dims(), i2.dims()),
        });
    }
    Ok((i1, i2))
}

/// Pixelwise CVA. Images larger than the configured long side are scaled
/// down first; smaller images are used as they are.
pub fn cmd_cva(args: &CvaArgs) -> Result<()> {
    let (mut i1, mut i2) = load_pair(&args.img_t1, &args.img_t2)?;
    let long = i1.dims().width().max(i1.dims().height());
    if long > args.config.resize_long_side {
        i1 = resize_image(&i1, args.config.resize_long_side).map_err(CliError::core("resize"))?;
        i2 = resize_image(&i2, args.config.resize_long_side).map_err(CliError::core("resize"))?;
        info!("resized images to {}", i1.dims());
    }
    let mag = cva_magnitude(&i1, &i2, args.config.normalize).map_err(CliError::core("cva"))?;
    let map = cva_map(&mag, args.config.otsu_bins);
    write_map(&args.out, &map)?;

    let mut prov = Provenance::new("cva", args.config);
    prov.inputs.insert("img_t1", path_str(&args.img_t1));
    prov.inputs.insert("img_t2", path_str(&args.img_t2));
    prov.outputs.insert("change_map", path_str(&args.out));
    prov.summary.insert("changed_pixels", json!(map.changed_count()));
    let prov_path = args.provenance.clone().unwrap_or_else(|| sibling(&args.out, "provenance.json"));
    write_text(&prov_path, &prov.to_json())
}

#[derive(Debug, Clone)]
pub struct CvaSamArgs {
    pub img_t1: PathBuf,
    pub img_t2: PathBuf,
    pub masks_t1: PathBuf,
    pub masks_t2: PathBuf,
    pub out: PathBuf,
    pub provenance: Option<PathBuf>,
    pub config: RunConfig,
}

/// Bring an image onto the mask grid. Masks are generated on an image whose
/// long side was rescaled, so the only accepted mismatch is one that the
/// long-side rule explains.
fn align_to_masks(img: MultiBandImage, dims: GridDims) -> Result<MultiBandImage> {
    if img.dims() == dims {
        return Ok(img);
    }
    let expected = long_side_dims(img.dims(), dims.width().max(dims.height())).map_err(CliError::core("resize"))?;
    if expected != dims {
        return Err(CliError::Validation {
            stage: "inputs",
            message: format!("image size {} cannot be rescaled onto mask grid {}", img.dims(), dims),
        });
    }
    info!("resizing image {} to mask grid {}", img.dims(), dims);
    Ok(resize_bilinear(&img, dims))
}

pub fn cmd_cva_sam(args: &CvaSamArgs) -> Result<()> {
    let (i1, i2) = load_pair(&args.img_t1, &args.img_t2)?;
    let m1 = load_masks("masks_t1", &args.masks_t1)?;
    let m2 = load_masks("masks_t2", &args.masks_t2)?;
    if m1.dims != m2.dims {
        return Err(CliError::Validation {
            stage: "inputs",
            message: format!("mask sets differ in size: t1 {} vs t2 {}", m1.dims, m2.dims),
        });
    }
    let i1 = align_to_masks(i1, m1.dims)?;
    let i2 = align_to_masks(i2, m1.dims)?;
    let mag = cva_magnitude(&i1, &i2, args.config.normalize).map_err(CliError::core("cva"))?;
    let map = cva_sam(
        &mag,
        &m1.binary_masks(),
        &m2.binary_masks(),
        args.config.min_area,
        args.config.otsu_bins,
    )
    .map_err(CliError::core("cva_sam"))?;
    write_map(&args.out, &map)?;

    let mut prov = Provenance::new("cva-sam", args.config);
    prov.inputs.insert("img_t1", path_str(&args.img_t1));
    prov.inputs.insert("img_t2", path_str(&args.img_t2));
    prov.inputs.insert("masks_t1", path_str(&args.masks_t1));
    prov.inputs.insert("masks_t2", path_str(&args.masks_t2));
    prov.outputs.insert("change_map", path_str(&args.out));
    prov.summary.insert("changed_pixels", json!(map.changed_count()));
    let prov_path = args.provenance.clone().unwrap_or_else(|| sibling(&args.out, "provenance.json"));
    write_text(&prov_path, &prov.to_json())
}

#[derive(Debug, Clone)]
pub struct EvalArgs {
    pub pred: PathBuf,
    pub reference: PathBuf,
    pub ignore: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub label: String,
}

/// Evaluate a change map against a reference; returns the report and the
/// rendered table.
pub fn cmd_eval(args: &EvalArgs) -> Result<(MetricsReport, String)> {
    let pred = interchange::read_change_map(&args.pred).map_err(CliError::file("pred", &args.pred))?;
    let mut reference =
        interchange::read_change_map(&args.reference).map_err(CliError::file("reference", &args.reference))?;
    if reference.dims() != pred.dims() {
        info!(
            "reference {} resized to prediction grid {} (nearest neighbor)",
            reference.dims(),
            pred.dims()
        );
        reference = resize_nearest(&reference, pred.dims());
    }
    let ignore = match &args.ignore {
        Some(p) => {
            let m = interchange::read_ignore_mask(p).map_err(CliError::file("ignore", p))?;
            Some(if m.dims() != pred.dims() {
                info!("ignore mask {} resized to prediction grid {}", m.dims(), pred.dims());
                resize_nearest(&ChangeMap::from_mask(&m), pred.dims()).to_mask()
            } else {
                m
            })
        }
        None => None,
    };
    let counts = confusion(&pred, &reference, ignore.as_ref()).map_err(CliError::core("confusion"))?;
    let report = metrics(&counts).map_err(CliError::core("metrics"))?;
    if report.undefined.any() {
        warn!("some metrics have zero denominators and are reported as 0");
    }
    let table = metrics_table(&[(args.label.as_str(), &report)]);
    if let Some(out) = &args.out {
        write_text(out, &metrics_json(&args.label, &report))?;
    }
    Ok((report, table))
}
