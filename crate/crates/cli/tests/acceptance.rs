// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Each test checks one exit criterion against an
//! independent oracle and prints a single PASS/FAIL line.
//!
//! Run with `cargo test -p mergesam --test acceptance -- --nocapture`.

use std::collections::VecDeque;
use std::fs;
use std::time::{Duration, Instant};

use mergesam::commands::{cmd_run, RunArgs};
use mergesam::config::RunConfig;
use mergesam::interchange::{write_embedding, write_mask_set, MaskEntry, MaskSet};
use mergesam_core::baselines::{cva_magnitude, cva_map};
use mergesam_core::matching::{match_masks, split_masks};
use mergesam_core::raster::{iou, rle_encode};
use mergesam_core::scoring::{bin_edge, otsu_threshold};
use mergesam_core::{
    confusion, metrics, run_pipeline, BinaryMask, ChangeMap, EmbeddingGrid, GridDims, MultiBandImage, ObjectMask,
    PipelineConfig, UnitKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(name: &str, ok: bool, started: Instant, budget: Duration, detail: &str) {
    let elapsed = started.elapsed();
    let in_time = elapsed <= budget;
    let pass = ok && in_time;
    println!(
        "ACCEPTANCE [{}] {name}: {detail} ({:.3}s / budget {:.0}s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    assert!(ok, "{name}: {detail}");
    assert!(in_time, "{name}: took {elapsed:?}, budget {budget:?}");
}

fn dims(w: usize, h: usize) -> GridDims {
    GridDims::new(w, h).unwrap()
}

fn random_bitmap(rng: &mut ChaCha8Rng, n: usize) -> Vec<bool> {
    let density: f64 = rng.gen();
    (0..n).map(|_| rng.gen_bool(density)).collect()
}

fn random_rect_bits(rng: &mut ChaCha8Rng, w: usize, h: usize) -> Vec<bool> {
    let x0 = rng.gen_range(0..w);
    let y0 = rng.gen_range(0..h);
    let x1 = rng.gen_range(x0 + 1..=w);
    let y1 = rng.gen_range(y0 + 1..=h);
    (0..w * h)
        .map(|i| {
            let (r, c) = (i / w, i % w);
            r >= y0 && r < y1 && c >= x0 && c < x1
        })
        .collect()
}

/// Shift a bitmap by up to one pixel and randomly flip a few edge pixels,
/// giving a near-duplicate mask with high but imperfect IoU.
fn jitter(rng: &mut ChaCha8Rng, bits: &[bool], w: usize, h: usize) -> Vec<bool> {
    let dx: isize = rng.gen_range(-1..=1);
    let dy: isize = rng.gen_range(-1..=1);
    let mut out = vec![false; w * h];
    for r in 0..h as isize {
        for c in 0..w as isize {
            let (sr, sc) = (r - dy, c - dx);
            if sr >= 0 && sc >= 0 && sr < h as isize && sc < w as isize {
                out[(r * w as isize + c) as usize] = bits[(sr * w as isize + sc) as usize];
            }
        }
    }
    for _ in 0..rng.gen_range(0..4) {
        let p = rng.gen_range(0..w * h);
        out[p] = !out[p];
    }
    out
}

fn brute_counts(a: &[bool], b: &[bool]) -> (usize, usize) {
    let inter = a.iter().zip(b).filter(|(x, y)| **x && **y).count();
    let union = a.iter().zip(b).filter(|(x, y)| **x || **y).count();
    (inter, union)
}

#[test]
fn rle_roundtrip() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = 0;
    for _ in 0..1000 {
        let (w, h) = (rng.gen_range(1..=64), rng.gen_range(1..=64));
        let bits = random_bitmap(&mut rng, w * h);
        let m = rle_encode(dims(w, h), &bits).unwrap();
        let popcount = bits.iter().filter(|b| **b).count() as u64;
        if m.to_bitmap() != bits || m.area() != popcount {
            failures += 1;
        }
    }
    verdict(
        "rle_roundtrip",
        failures == 0,
        start,
        Duration::from_secs(5),
        &format!("1000 bitmaps up to 64x64, {failures} mismatches"),
    );
}

#[test]
fn iou_matches_pixel_counting() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0f64;
    for trial in 0..500 {
        let (w, h) = (rng.gen_range(1..=48), rng.gen_range(1..=48));
        let d = dims(w, h);
        let a = if trial % 2 == 0 { random_bitmap(&mut rng, w * h) } else { random_rect_bits(&mut rng, w, h) };
        let b = if trial % 3 == 0 { jitter(&mut rng, &a, w, h) } else { random_bitmap(&mut rng, w * h) };
        let got = iou(&rle_encode(d, &a).unwrap(), &rle_encode(d, &b).unwrap()).unwrap();
        let (inter, union) = brute_counts(&a, &b);
        let expected = if union == 0 { 0.0 } else { inter as f64 / union as f64 };
        worst = worst.max((got - expected).abs());
    }
    verdict(
        "iou_oracle",
        worst <= 1e-12,
        start,
        Duration::from_secs(5),
        &format!("500 pairs, max |iou - brute force| = {worst:e}"),
    );
}

/// Random epoch pair on a 16x16 grid: up to six masks each, with t2 masks
/// often near-copies of t1 masks.
fn random_epochs(rng: &mut ChaCha8Rng) -> (Vec<Vec<bool>>, Vec<Vec<bool>>) {
    let (w, h) = (16, 16);
    let n1 = rng.gen_range(0..=6);
    let t1: Vec<Vec<bool>> = (0..n1).map(|_| random_rect_bits(rng, w, h)).collect();
    let mut t2 = Vec::new();
    let n2 = rng.gen_range(0..=6);
    for i in 0..n2 {
        if i < t1.len() && rng.gen_bool(0.7) {
            t2.push(jitter(rng, &t1[i], w, h));
        } else {
            t2.push(random_rect_bits(rng, w, h));
        }
    }
    (t1, t2)
}

fn objects(d: GridDims, bits: &[Vec<bool>], id_base: u64) -> Vec<ObjectMask> {
    bits.iter()
        .enumerate()
        .map(|(i, b)| ObjectMask::new(id_base + i as u64, rle_encode(d, b).unwrap()))
        .collect()
}

/// Independent greedy simulation: all pairs by brute-force IoU, sorted by
/// IoU descending then ids, accepted first come first served.
fn oracle_greedy(t1: &[Vec<bool>], t2: &[Vec<bool>], id1: u64, id2: u64, t: f64) -> Vec<(u64, u64)> {
    let mut cands = Vec::new();
    for (i, a) in t1.iter().enumerate() {
        for (j, b) in t2.iter().enumerate() {
            let (inter, union) = brute_counts(a, b);
            let v = if union == 0 { 0.0 } else { inter as f64 / union as f64 };
            if v >= t {
                cands.push((v, id1 + i as u64, id2 + j as u64));
            }
        }
    }
    cands.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut used1 = Vec::new();
    let mut used2 = Vec::new();
    let mut out = Vec::new();
    for (_, a, b) in cands {
        if !used1.contains(&a) && !used2.contains(&b) {
            used1.push(a);
            used2.push(b);
            out.push((a, b));
        }
    }
    out
}

#[test]
fn matching_equals_greedy_simulation() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d = dims(16, 16);
    let thresholds = [0.5, 0.6, 0.7, 0.75, 0.8, 0.9];
    let (mut mismatches, mut non_monotone, mut total_pairs) = (0, 0, 0);
    for _ in 0..200 {
        let (b1, b2) = random_epochs(&mut rng);
        let (o1, o2) = (objects(d, &b1, 1), objects(d, &b2, 101));
        let mut last = usize::MAX;
        for &t in &thresholds {
            let got = match_masks(d, &o1, &o2, t).unwrap();
            let pairs: Vec<(u64, u64)> = got.pairs.iter().map(|p| (p.id_t1, p.id_t2)).collect();
            if pairs != oracle_greedy(&b1, &b2, 1, 101, t) {
                mismatches += 1;
            }
            if pairs.len() > last {
                non_monotone += 1;
            }
            last = pairs.len();
            total_pairs += pairs.len();
        }
    }
    verdict(
        "matching_oracle",
        mismatches == 0 && non_monotone == 0 && total_pairs > 0,
        start,
        Duration::from_secs(10),
        &format!("200 trials x 6 thresholds, {total_pairs} pairs, {mismatches} mismatches, {non_monotone} monotonicity breaks"),
    );
}

/// Independent overlay: per-pixel paint simulation, key grid, BFS.
fn oracle_overlay(t1: &[Vec<bool>], t2: &[Vec<bool>], w: usize, h: usize, min_area: usize) -> Vec<(Vec<usize>, UnitKind)> {
    let paint = |set: &[Vec<bool>]| -> Vec<usize> {
        let mut order: Vec<usize> = (0..set.len()).collect();
        let area = |i: usize| set[i].iter().filter(|b| **b).count();
        order.sort_by_key(|&i| std::cmp::Reverse(area(i)));
        let mut lab = vec![0usize; w * h];
        for i in order {
            for p in 0..w * h {
                if set[i][p] {
                    lab[p] = i + 1;
                }
            }
        }
        lab
    };
    let (l1, l2) = (paint(t1), paint(t2));
    let mut seen = vec![false; w * h];
    let mut out = Vec::new();
    for s in 0..w * h {
        let key = (l1[s], l2[s]);
        if key == (0, 0) || seen[s] {
            continue;
        }
        let mut comp = Vec::new();
        let mut q = VecDeque::from([s]);
        seen[s] = true;
        while let Some(p) = q.pop_front() {
            comp.push(p);
            let (r, c) = (p / w, p % w);
            let mut nb = Vec::new();
            if r > 0 { nb.push(p - w); }
            if r + 1 < h { nb.push(p + w); }
            if c > 0 { nb.push(p - 1); }
            if c + 1 < w { nb.push(p + 1); }
            for n in nb {
                if !seen[n] && (l1[n], l2[n]) == key {
                    seen[n] = true;
                    q.push_back(n);
                }
            }
        }
        if comp.len() < min_area {
            continue;
        }
        comp.sort_unstable();
        let kind = match key {
            (0, _) => UnitKind::OnlyT2,
            (_, 0) => UnitKind::OnlyT1,
            _ => UnitKind::SplitBoth,
        };
        out.push((comp, kind));
    }
    out
}

#[test]
fn overlay_partition() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (w, h) = (16, 16);
    let d = dims(w, h);
    let (mut bad_partition, mut bad_oracle, mut bad_swap, mut units_seen) = (0, 0, 0, 0);
    for _ in 0..200 {
        let (b1, b2) = random_epochs(&mut rng);
        let min_area = rng.gen_range(1..=8);
        let (o1, o2) = (objects(d, &b1, 1), objects(d, &b2, 1));
        let units = split_masks(d, &o1, &o2, min_area as u64).unwrap();
        units_seen += units.len();

        let mut cover = vec![0u8; w * h];
        for u in &units {
            for p in u.region.indices() {
                cover[p] += 1;
            }
        }
        // covered pixels minus dropped components, from the oracle
        let expected = oracle_overlay(&b1, &b2, w, h, min_area);
        let mut expected_cover = vec![0u8; w * h];
        for (px, _) in &expected {
            for &p in px {
                expected_cover[p] += 1;
            }
        }
        if cover.iter().any(|&c| c > 1) || cover != expected_cover {
            bad_partition += 1;
        }
        let mut got: Vec<(Vec<usize>, UnitKind)> =
            units.iter().map(|u| (u.region.indices().collect(), u.kind)).collect();
        let mut want = expected.clone();
        got.sort_by(|a, b| a.0.cmp(&b.0));
        want.sort_by(|a, b| a.0.cmp(&b.0));
        if got != want {
            bad_oracle += 1;
        }

        let swapped = split_masks(d, &o2, &o1, min_area as u64).unwrap();
        let a: Vec<(Vec<usize>, UnitKind)> = units.iter().map(|u| (u.region.indices().collect(), u.kind)).collect();
        let b: Vec<(Vec<usize>, UnitKind)> =
            swapped.iter().map(|u| (u.region.indices().collect(), u.kind.swapped())).collect();
        if a != b {
            bad_swap += 1;
        }
    }
    verdict(
        "overlay_partition",
        bad_partition == 0 && bad_oracle == 0 && bad_swap == 0 && units_seen > 0,
        start,
        Duration::from_secs(10),
        &format!(
            "200 leftover sets, {units_seen} units; partition errors {bad_partition}, oracle mismatches {bad_oracle}, swap asymmetries {bad_swap}"
        ),
    );
}

/// Between-class variance of the partition at edge `k`, computed directly
/// from the two classes. `None` when a class is empty.
fn oracle_variance(scores: &[f64], edge: f64) -> Option<f64> {
    let lo: Vec<f64> = scores.iter().copied().filter(|&s| s <= edge).collect();
    let hi: Vec<f64> = scores.iter().copied().filter(|&s| s > edge).collect();
    if lo.is_empty() || hi.is_empty() {
        return None;
    }
    let n = scores.len() as f64;
    let (n0, n1) = (lo.len() as f64, hi.len() as f64);
    let mu0 = lo.iter().sum::<f64>() / n0;
    let mu1 = hi.iter().sum::<f64>() / n1;
    Some((n0 / n) * (n1 / n) * (mu0 - mu1) * (mu0 - mu1))
}

#[test]
fn otsu_matches_exhaustive_search() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let bins = 256;
    let (mut exact_checked, mut failures, mut degenerate) = (0, 0, 0);
    for trial in 0..500 {
        let n = rng.gen_range(1..=200);
        let dyadic = trial % 2 == 0;
        let scores: Vec<f64> = (0..n)
            .map(|_| {
                if dyadic {
                    // exactly representable sums: both sides compute identical bits
                    rng.gen_range(0..4096u32) as f64 / 64.0
                } else if rng.gen_bool(0.5) {
                    rng.gen_range(0.0..1.0)
                } else {
                    rng.gen_range(2.0..5.0)
                }
            })
            .collect();
        let (min, max) = scores.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &s| (a.min(s), b.max(s)));
        let got = otsu_threshold(&scores, bins);
        if max - min < 1e-12 {
            degenerate += 1;
            if got.is_some() {
                failures += 1;
            }
            continue;
        }
        let vars: Vec<Option<f64>> = (1..bins).map(|k| oracle_variance(&scores, bin_edge(min, max, k, bins))).collect();
        let best = vars.iter().flatten().cloned().fold(f64::NEG_INFINITY, f64::max);
        let Some(t) = got else {
            failures += 1;
            continue;
        };
        if dyadic {
            let want = 1 + vars.iter().position(|v| *v == Some(best)).unwrap();
            exact_checked += 1;
            if t.edge != want {
                failures += 1;
            }
        } else {
            let tol = best * 1e-12;
            let chosen = vars[t.edge - 1].unwrap_or(f64::NEG_INFINITY);
            let lower_better = vars[..t.edge - 1].iter().flatten().any(|&v| v > chosen + tol);
            if chosen < best - tol || lower_better {
                failures += 1;
            }
        }
    }
    verdict(
        "otsu_exhaustive",
        failures == 0,
        start,
        Duration::from_secs(5),
        &format!("500 lists ({exact_checked} bit-exact, {degenerate} degenerate), {failures} disagreements"),
    );
}

#[test]
fn metrics_match_direct_formulas() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst, mut perfect_ok, mut constant_ok) = (0f64, true, true);
    for _ in 0..100 {
        let (w, h) = (rng.gen_range(1..=32), rng.gen_range(2..=32));
        let d = dims(w, h);
        let mut r = random_bitmap(&mut rng, w * h);
        r[0] = true;
        r[1] = false;
        let p = random_bitmap(&mut rng, w * h);
        let (pred, reference) = (ChangeMap::new(d, p.clone()).unwrap(), ChangeMap::new(d, r.clone()).unwrap());
        let got = metrics(&confusion(&pred, &reference, None).unwrap()).unwrap();

        let count = |fp: bool, fr: bool| p.iter().zip(&r).filter(|(a, b)| **a == fp && **b == fr).count() as f64;
        let (tp, fp, fn_, tn) = (count(true, true), count(true, false), count(false, true), count(false, false));
        let n = tp + fp + fn_ + tn;
        let div = |a: f64, b: f64| if b == 0.0 { 0.0 } else { a / b };
        let prec = div(tp, tp + fp);
        let rec = div(tp, tp + fn_);
        let f1 = div(2.0 * prec * rec, prec + rec);
        let oa = (tp + tn) / n;
        let pe = ((tp + fp) * (tp + fn_) + (fn_ + tn) * (fp + tn)) / (n * n);
        let kappa = div(oa - pe, 1.0 - pe);
        for (a, b) in [(got.precision, prec), (got.recall, rec), (got.f1, f1), (got.oa, oa), (got.kappa, kappa)] {
            worst = worst.max((a - b).abs());
        }

        let perfect = metrics(&confusion(&reference, &reference, None).unwrap()).unwrap();
        perfect_ok &= perfect.f1 == 1.0 && perfect.kappa == 1.0 && perfect.oa == 1.0;
        for value in [false, true] {
            let constant = ChangeMap::new(d, vec![value; w * h]).unwrap();
            constant_ok &= metrics(&confusion(&constant, &reference, None).unwrap()).unwrap().kappa == 0.0;
        }
    }
    verdict(
        "metrics_formulas",
        worst <= 1e-9 && perfect_ok && constant_ok,
        start,
        Duration::from_secs(5),
        &format!("100 map pairs, max deviation {worst:e}, perfect f1=kappa=1: {perfect_ok}, constant kappa=0: {constant_ok}"),
    );
}

/// Synthetic scene on a 32x32 grid with 4-pixel embedding cells.
///
/// * object O (rows 8..24, cols 4..20) is one mask at t1 and splits into a
///   left (cols 4..12) and right (cols 12..20) mask at t2
/// * only the right fragment's embedding cells change
/// * a field (rows 24..32) is segmented identically in both epochs and its
///   embeddings are unchanged, but the t2 image is brighter there
struct SplitScene {
    dims: GridDims,
    t1: Vec<ObjectMask>,
    t2: Vec<ObjectMask>,
    e1: EmbeddingGrid,
    e2: EmbeddingGrid,
    img1: MultiBandImage,
    img2: MultiBandImage,
    fragment: BinaryMask,
}

fn rect_mask(d: GridDims, x0: usize, y0: usize, x1: usize, y1: usize) -> BinaryMask {
    let idx = (y0..y1).flat_map(move |r| (x0..x1).map(move |c| r * d.width() + c));
    BinaryMask::from_sorted_indices(d, idx).unwrap()
}

fn split_scene() -> SplitScene {
    let d = dims(32, 32);
    let object = rect_mask(d, 4, 8, 20, 24);
    let left = rect_mask(d, 4, 8, 12, 24);
    let right = rect_mask(d, 12, 8, 20, 24);
    let field = rect_mask(d, 0, 24, 32, 32);
    let t1 = vec![ObjectMask::new(1, object.clone()), ObjectMask::new(2, field.clone())];
    let t2 = vec![
        ObjectMask::new(1, left.clone()),
        ObjectMask::new(2, right.clone()),
        ObjectMask::new(3, field.clone()),
    ];

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (gh, gw, dim) = (8, 8, 16);
    let base: Vec<f32> = (0..gh * gw * dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let e1 = EmbeddingGrid::new(gh, gw, dim, d, base).unwrap();
    let mut e2 = e1.clone();
    for r in 2..6 {
        for c in 3..5 {
            for v in e2.cell_mut(r, c) {
                *v += 0.8;
            }
        }
    }

    let mut px1 = Vec::with_capacity(d.len() * 3);
    let mut px2 = Vec::with_capacity(d.len() * 3);
    for i in 0..d.len() {
        let (r, c) = d.coords(i);
        let noise = |rng: &mut ChaCha8Rng| rng.gen_range(-6.0..6.0f32);
        let (a, b): ([f32; 3], [f32; 3]) = if right.contains(r, c) {
            ([90.0, 110.0, 70.0], [200.0, 190.0, 180.0])
        } else if object.contains(r, c) {
            ([90.0, 110.0, 70.0], [90.0, 110.0, 70.0])
        } else if field.contains(r, c) {
            // seasonal brightening: spectrally different, semantically unchanged
            ([60.0, 120.0, 50.0], [130.0, 190.0, 120.0])
        } else {
            ([40.0, 40.0, 40.0], [40.0, 40.0, 40.0])
        };
        for k in 0..3 {
            px1.push(a[k] + noise(&mut rng));
            px2.push(b[k] + noise(&mut rng));
        }
    }
    SplitScene {
        dims: d,
        t1,
        t2,
        e1,
        e2,
        img1: MultiBandImage::new(d, 3, px1).unwrap(),
        img2: MultiBandImage::new(d, 3, px2).unwrap(),
        fragment: right,
    }
}

#[test]
fn synthetic_split_scene() {
    let start = Instant::now();
    let s = split_scene();
    let out = run_pipeline(s.dims, &s.t1, &s.t2, &s.e1, &s.e2, &PipelineConfig::default()).unwrap();
    let reference = ChangeMap::from_mask(&s.fragment);
    let exact = out.change_map == reference;
    let ours = metrics(&confusion(&out.change_map, &reference, None).unwrap()).unwrap();

    let cva = cva_map(&cva_magnitude(&s.img1, &s.img2, false).unwrap(), 256);
    let theirs = metrics(&confusion(&cva, &reference, None).unwrap()).unwrap();
    let again = run_pipeline(s.dims, &s.t1, &s.t2, &s.e1, &s.e2, &PipelineConfig::default()).unwrap();

    verdict(
        "synthetic_split",
        exact && theirs.f1 < ours.f1 && again == out,
        start,
        Duration::from_secs(5),
        &format!(
            "change map equals fragment: {exact}; F1 mergesam {:.4} vs pixel CVA {:.4}",
            ours.f1, theirs.f1
        ),
    );
}

#[test]
fn identity_inputs_give_empty_map() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let d = dims(64, 64);
    let bits: Vec<Vec<bool>> = (0..12).map(|_| random_rect_bits(&mut rng, 64, 64)).collect();
    let masks = objects(d, &bits, 1);
    let data: Vec<f32> = (0..16 * 16 * 8).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let emb = EmbeddingGrid::new(16, 16, 8, d, data).unwrap();
    let out = run_pipeline(d, &masks, &masks, &emb, &emb, &PipelineConfig::default()).unwrap();
    let empty = out.change_map.changed_count() == 0 && out.scores.iter().all(|s| s.score == 0.0);
    verdict(
        "identity",
        empty,
        start,
        Duration::from_secs(1),
        &format!("{} units, {} changed pixels", out.units.len(), out.change_map.changed_count()),
    );
}

#[test]
fn cmd_run_is_byte_deterministic() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let s = split_scene();
    let to_set = |objs: &[ObjectMask]| {
        let mut set = MaskSet::new(s.dims);
        set.masks = objs.iter().map(|o| MaskEntry::new(o.id, o.mask.clone())).collect();
        set
    };
    let p = |name: &str| dir.path().join(name);
    write_mask_set(p("m1.json"), &to_set(&s.t1)).unwrap();
    write_mask_set(p("m2.json"), &to_set(&s.t2)).unwrap();
    write_embedding(p("e1.msem"), &s.e1).unwrap();
    write_embedding(p("e2.msem"), &s.e2).unwrap();

    let run = |tag: &str| {
        let args = RunArgs {
            masks_t1: p("m1.json"),
            masks_t2: p("m2.json"),
            emb_t1: p("e1.msem"),
            emb_t2: p("e2.msem"),
            out: p(&format!("{tag}.png")),
            scores: None,
            provenance: None,
            config: RunConfig::default(),
        };
        cmd_run(&args).unwrap();
        (
            fs::read(p(&format!("{tag}.png"))).unwrap(),
            fs::read(p(&format!("{tag}.scores.csv"))).unwrap(),
        )
    };
    let (map_a, csv_a) = run("a");
    let (map_b, csv_b) = run("b");
    let same = map_a == map_b && csv_a == csv_b;
    verdict(
        "determinism",
        same,
        start,
        Duration::from_secs(10),
        &format!("change map {} bytes, score table {} bytes, identical: {same}", map_a.len(), csv_a.len()),
    );
}

/// Optional full-dataset check. Needs exported inputs under
/// `$MERGESAM_GZCD_DIR/<pair>/` (masks_t1.json, masks_t2.json, emb_t1.msem,
/// emb_t2.msem, img_t1.png, img_t2.png, ref.png). Not part of CI.
#[test]
#[ignore = "requires GZ_CD_data exports and model weights"]
fn gzcd_table_reproduction() {
    use mergesam::interchange::{read_change_map, read_embedding, read_image, read_mask_set};
    use mergesam_core::raster::{resize_bilinear, resize_nearest};
    use mergesam_core::ConfusionCounts;

    let Ok(root) = std::env::var("MERGESAM_GZCD_DIR") else {
        println!("ACCEPTANCE [SKIP] gzcd_table: MERGESAM_GZCD_DIR not set");
        return;
    };
    let start = Instant::now();
    let add = |acc: &mut ConfusionCounts, c: ConfusionCounts| {
        acc.tp += c.tp;
        acc.fp += c.fp;
        acc.fn_ += c.fn_;
        acc.tn += c.tn;
    };
    let (mut ours, mut cva) = (ConfusionCounts::default(), ConfusionCounts::default());
    let mut pairs = 0;
    let mut entries: Vec<_> = fs::read_dir(&root).unwrap().flatten().filter(|e| e.path().is_dir()).collect();
    entries.sort_by_key(|e| e.path());
    for entry in entries {
        let dir = entry.path();
        let (m1, _) = read_mask_set(dir.join("masks_t1.json")).unwrap();
        let (m2, _) = read_mask_set(dir.join("masks_t2.json")).unwrap();
        let e1 = read_embedding(dir.join("emb_t1.msem")).unwrap();
        let e2 = read_embedding(dir.join("emb_t2.msem")).unwrap();
        let out = run_pipeline(m1.dims, &m1.object_masks(), &m2.object_masks(), &e1, &e2, &PipelineConfig::default()).unwrap();
        let reference = resize_nearest(&read_change_map(dir.join("ref.png")).unwrap(), m1.dims);
        add(&mut ours, confusion(&out.change_map, &reference, None).unwrap());
        let i1 = resize_bilinear(&read_image(dir.join("img_t1.png")).unwrap(), m1.dims);
        let i2 = resize_bilinear(&read_image(dir.join("img_t2.png")).unwrap(), m1.dims);
        let c = cva_map(&cva_magnitude(&i1, &i2, false).unwrap(), 256);
        add(&mut cva, confusion(&c, &reference, None).unwrap());
        pairs += 1;
    }
    let f_ours = metrics(&ours).unwrap().f1 * 100.0;
    let f_cva = metrics(&cva).unwrap().f1 * 100.0;
    verdict(
        "gzcd_table",
        (f_ours - 31.65).abs() <= 5.0 && (f_cva - 16.30).abs() <= 5.0,
        start,
        Duration::from_secs(3600),
        &format!("{pairs} pairs, F1 mergesam {f_ours:.2} (target 31.65), CVA {f_cva:.2} (target 16.30)"),
    );
}
