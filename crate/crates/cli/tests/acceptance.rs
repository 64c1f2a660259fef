//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use arb_core::arb::{
    compute_accumulative_arb, compute_overlapping_arb, compute_simple_arb, fourier_magnitude_descriptor, ArbConfig,
    ArbDescriptor, ArbVariant, OrientationMode, WeightMode,
};
use arb_core::baselines::{
    fd_centroid_distance, fd_complex_coordinates, hausdorff, Complex64, FourierDescriptor, PointSet, SignatureKind,
};
use arb_core::bench::{
    projection_rows, read_projection_csv, read_timing_csv, run_accuracy, run_timing, write_projection_csv,
    write_timing_csv,
};
use arb_core::deform::{apply, dilate, erode, level_suite, DeformKind, DeformationSpec, Variant};
use arb_core::geometry::trace_contour;
use arb_core::imgio::generate_synthetic_dataset;
use arb_core::matching::DescriptorIndex;
use arb_core::method::Method;
use arb_core::{BinaryImage, Dataset, Error};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 2024;

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Synthetic shapes drawn in a smaller frame and centred in a 120x120 one,
/// leaving room for translations up to 5 pixels.
fn padded_dataset(n: usize, seed: u64) -> Dataset {
    let inner = generate_synthetic_dataset(n, 108, 108, seed).unwrap();
    let entries = inner
        .entries()
        .iter()
        .map(|(id, img)| {
            let padded = BinaryImage::from_fn(120, 120, |x, y| img.get_or_bg(x as i64 - 6, y as i64 - 6)).unwrap();
            (id.clone(), padded)
        })
        .collect();
    Dataset::new(entries).unwrap()
}

/// Union of random rectangles and discs.
fn random_blob(r: &mut ChaCha8Rng, size: usize) -> BinaryImage {
    let s = size as f64;
    let parts: Vec<(bool, f64, f64, f64, f64)> = (0..r.gen_range(1..5))
        .map(|_| {
            (
                r.gen_bool(0.5),
                r.gen_range(0.35 * s..0.65 * s),
                r.gen_range(0.35 * s..0.65 * s),
                r.gen_range(1.0..0.25 * s),
                r.gen_range(1.0..0.25 * s),
            )
        })
        .collect();
    BinaryImage::from_fn(size, size, |x, y| {
        let (x, y) = (x as f64, y as f64);
        parts.iter().any(|&(disc, cx, cy, a, b)| {
            if disc {
                (x - cx).powi(2) + (y - cy).powi(2) <= a * a
            } else {
                (x - cx).abs() <= a && (y - cy).abs() <= b
            }
        })
    })
    .unwrap()
}

fn mixed_shapes(n: usize, stream: u64) -> Vec<BinaryImage> {
    let mut r = rng(stream);
    let synth = generate_synthetic_dataset(n / 2, 96, 96, SEED + stream).unwrap();
    let mut out: Vec<BinaryImage> = synth.entries().iter().map(|(_, i)| i.clone()).collect();
    while out.len() < n {
        out.push(random_blob(&mut r, 64));
    }
    out
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let ds = padded_dataset(50, SEED);
    let mut queries = 0;
    for variant in [ArbVariant::Simple, ArbVariant::Overlapping, ArbVariant::Accumulative] {
        let m = Method::arb(variant, ArbConfig::default());
        let index = DescriptorIndex::build(&ds, &m).map_err(|e| e.to_string())?;
        for (id, img) in ds.entries() {
            for spec in level_suite(DeformKind::Translation, 5) {
                let moved = apply(img, &spec).map_err(|e| format!("{id} {spec}: {e}"))?;
                let best = index.nearest(&m.describe(&moved).unwrap(), 1).unwrap();
                check(best[0].0 == *id && best[0].1 == 0.0, || {
                    format!("{} {id} {spec}: got {:?}", m.tag(), best[0])
                })?;
                queries += 1;
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    check(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("{queries} translated queries matched their source at distance 0 in {secs:.1}s"))
}

/// Per-point classification with a full-circle atan2 bearing and linear
/// scans over the ring and sector boundaries.
fn oracle_simple(img: &BinaryImage, rings: usize, width: u32, mode: WeightMode) -> Vec<f64> {
    let contour = trace_contour(img).unwrap();
    let (mut n, mut sx, mut sy) = (0i64, 0i64, 0i64);
    for (x, y) in img.foreground() {
        n += 1;
        sx += x as i64;
        sy += y as i64;
    }
    let polar: Vec<(f64, f64)> = contour
        .points()
        .iter()
        .map(|&(x, y)| {
            let (nx, ny) = (x * n - sx, y * n - sy);
            let (dx, dy) = (nx as f64 / n as f64, ny as f64 / n as f64);
            let (east, north) = (nx, -ny);
            let bearing = if east == 0 && north == 0 {
                0.0
            } else if east == 0 || north == 0 || east.abs() == north.abs() {
                let octants = [(0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)];
                45.0 * octants.iter().position(|&o| o == (east.signum(), north.signum())).unwrap() as f64
            } else {
                (east as f64).atan2(north as f64).to_degrees().rem_euclid(360.0)
            };
            ((dx * dx + dy * dy).sqrt(), bearing)
        })
        .collect();
    let rho = polar.iter().map(|p| p.0).fold(0.0, f64::max);
    let bins = (360 / width) as usize;
    let mut sums = vec![0.0; rings * bins];
    let mut counts = vec![0usize; rings * bins];
    for &(r, bearing) in &polar {
        let k = if r == 0.0 {
            0
        } else {
            let ring = (0..rings).rev().find(|&i| r >= rho * i as f64 / rings as f64).unwrap();
            let sector = (0..bins).rev().find(|&j| bearing >= (j as u32 * width) as f64).unwrap();
            ring * bins + sector
        };
        sums[k] += r;
        counts[k] += 1;
    }
    (0..rings * bins)
        .map(|k| match mode {
            WeightMode::CountPoints => counts[k] as f64 / n as f64,
            WeightMode::TotalDistance => sums[k] / n as f64,
            WeightMode::AverageDistance if counts[k] == 0 => 0.0,
            WeightMode::AverageDistance => sums[k] / counts[k] as f64,
        })
        .collect()
}

const MODES: [WeightMode; 3] = [WeightMode::CountPoints, WeightMode::TotalDistance, WeightMode::AverageDistance];

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for (i, img) in mixed_shapes(100, 2).iter().enumerate() {
        let rings = *[1, 2, 4, 12].choose(&mut r).unwrap();
        let width = *[5, 10, 15, 20, 30].choose(&mut r).unwrap();
        let mode = MODES[i % 3];
        let got = compute_simple_arb(img, &ArbConfig::simple(rings, width, mode), 0.0).map_err(|e| e.to_string())?;
        for (a, b) in got.values().iter().zip(oracle_simple(img, rings, width, mode)) {
            worst = worst.max((a - b).abs());
        }
    }
    check(worst <= 1e-12, || format!("max elementwise difference {worst:e}"))?;
    let secs = t.elapsed().as_secs_f64();
    check(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("100 cases, max elementwise difference {worst:e}"))
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for (i, img) in mixed_shapes(100, 3).iter().enumerate() {
        let width = *[10u32, 15, 20, 30].choose(&mut r).unwrap();
        let delta = *[1.0, 2.5, 3.0, 5.0].choose(&mut r).unwrap();
        let cfg = ArbConfig {
            rings: r.gen_range(1..5),
            angular_width_deg: width,
            weight_mode: MODES[i % 3],
            tilt_delta_deg: delta,
            instances: r.gen_range(1..=((width as f64 / delta) as usize)),
            orientation_mode: OrientationMode::None,
        };
        let over = compute_overlapping_arb(img, &cfg).unwrap();
        let acc = compute_accumulative_arb(img, &cfg).unwrap();
        for ring in 0..cfg.rings {
            for bin in 0..cfg.angular_bins() {
                let sum: f64 = (0..cfg.instances).map(|n| over.get(ring, bin, n)).sum();
                worst = worst.max((acc.get(ring, bin) - sum).abs());
            }
        }
    }
    check(worst <= 1e-12, || format!("max difference {worst:e}"))?;
    Ok(format!("100 cases, max difference {worst:e}"))
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let (mut dft_err, mut shift_err) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let rings = r.gen_range(1..6);
        let width = *[5u32, 10, 15, 20, 30, 45].choose(&mut r).unwrap();
        let cfg = ArbConfig::simple(rings, width, WeightMode::TotalDistance);
        let bins = cfg.angular_bins();
        let values: Vec<f64> = (0..rings * bins).map(|_| r.gen_range(0.0..3.0)).collect();
        let d = ArbDescriptor::from_values(values, rings, bins, cfg).unwrap();
        let f = fourier_magnitude_descriptor(&d);
        for u in 0..rings {
            for v in 0..bins {
                let (mut re, mut im) = (0.0, 0.0);
                for i in 0..rings {
                    for j in 0..bins {
                        let ang = -2.0
                            * std::f64::consts::PI
                            * (((u * i) % rings) as f64 / rings as f64 + ((v * j) % bins) as f64 / bins as f64);
                        re += d.get(i, j) * ang.cos();
                        im += d.get(i, j) * ang.sin();
                    }
                }
                let naive = (re * re + im * im).sqrt() / (rings * bins) as f64;
                dft_err = dft_err.max((f.get(u, v) - naive).abs());
            }
        }
        let k = r.gen_range(1..bins as isize + 1);
        let g = fourier_magnitude_descriptor(&d.shift_angular(k));
        for (a, b) in f.values().iter().zip(g.values()) {
            shift_err = shift_err.max((a - b).abs());
        }
    }
    check(dft_err <= 1e-9, || format!("DFT differs from double sum by {dft_err:e}"))?;
    check(shift_err <= 1e-9, || format!("circular shift changes magnitudes by {shift_err:e}"))?;
    Ok(format!("100 grids, DFT error {dft_err:e}, shift error {shift_err:e}"))
}

fn level_one(report: &arb_core::bench::AccuracyReport, kind: DeformKind) -> Result<f64, String> {
    report
        .row(kind, 1)
        .and_then(|r| r.error_percent)
        .ok_or_else(|| format!("{kind} level 1 has no scored queries"))
}

fn best_config() -> ArbConfig {
    ArbConfig {
        rings: 2,
        angular_width_deg: 15,
        weight_mode: WeightMode::TotalDistance,
        tilt_delta_deg: 3.0,
        instances: 5,
        orientation_mode: OrientationMode::None,
    }
}

fn criterion_5(ds: &Dataset) -> Outcome {
    let t = Instant::now();
    let cfg = ArbConfig { orientation_mode: OrientationMode::Moments, ..best_config() };
    let m = Method::arb(ArbVariant::Accumulative, cfg);
    let report = run_accuracy(ds, &m, &[DeformKind::Rotation], 1).map_err(|e| e.to_string())?;
    let e = level_one(&report, DeformKind::Rotation)?;
    check(e <= 5.0, || format!("level-1 rotation error {e:.2}%"))?;
    let secs = t.elapsed().as_secs_f64();
    check(secs < 600.0, || format!("took {secs:.1}s"))?;
    Ok(format!("level-1 rotation error {e:.2}% over {} queries", report.rows[0].scored()))
}

const SHAPE_CHANGES: [DeformKind; 4] =
    [DeformKind::Scaling, DeformKind::Dilation, DeformKind::Erosion, DeformKind::Perspective];

fn criterion_6(ds: &Dataset) -> Outcome {
    let level_one_errors = |m: &Method| -> Result<Vec<f64>, String> {
        let report = run_accuracy(ds, m, &SHAPE_CHANGES, 1).map_err(|e| e.to_string())?;
        SHAPE_CHANGES.iter().map(|&k| level_one(&report, k)).collect()
    };
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let arb = level_one_errors(&Method::arb(ArbVariant::Accumulative, best_config()))?;
    for (k, e) in SHAPE_CHANGES.iter().zip(&arb) {
        check(*e <= 5.0, || format!("accumulative ARB level-1 {k} error {e:.2}%"))?;
    }
    let arb_avg = mean(&arb);
    let mut summary = format!("ARB level-1 avg {arb_avg:.2}%");
    for fd in [Method::fd_complex(), Method::fd_centroid()] {
        let avg = mean(&level_one_errors(&fd)?);
        check(arb_avg < avg, || format!("ARB avg {arb_avg:.2}% is not below {} avg {avg:.2}%", fd.tag()))?;
        summary += &format!(", {} {avg:.2}%", fd.tag());
    }
    Ok(summary)
}

fn criterion_7_8(ds: &Dataset, dir: &Path) -> (Outcome, Outcome) {
    let timed = (|| -> Result<_, String> {
        let over = run_timing(ds, &Method::arb(ArbVariant::Overlapping, best_config()), 100, 10000)
            .map_err(|e| e.to_string())?;
        let acc = run_timing(ds, &Method::arb(ArbVariant::Accumulative, best_config()), 100, 10000)
            .map_err(|e| e.to_string())?;
        Ok((over, acc))
    })();
    let (over, acc) = match timed {
        Ok(t) => t,
        Err(e) => return (Err(e.clone()), Err(e)),
    };
    let c7 = (|| {
        check(over.match_mean_s > acc.match_mean_s, || {
            format!(
                "overlapping match {:.3} us is not above accumulative {:.3} us",
                over.match_mean_s * 1e6,
                acc.match_mean_s * 1e6
            )
        })?;
        check(acc.match_mean_s < 10e-6, || format!("match {:.3} us/pair", acc.match_mean_s * 1e6))?;
        check(acc.train_mean_s < 5e-3, || format!("train {:.3} ms/image", acc.train_mean_s * 1e3))?;
        Ok(format!(
            "match overlap {:.3} us > accum {:.3} us; accum train {:.3} ms",
            over.match_mean_s * 1e6,
            acc.match_mean_s * 1e6,
            acc.train_mean_s * 1e3
        ))
    })();
    let c8 = (|| {
        let timing = dir.join("timing.csv");
        let projection = dir.join("projection.csv");
        write_timing_csv(&timing, &[over.clone(), acc.clone()]).map_err(|e| e.to_string())?;
        let stored = read_timing_csv(&timing).map_err(|e| e.to_string())?;
        write_projection_csv(&projection, &projection_rows(&stored, &[2000])).map_err(|e| e.to_string())?;
        let rows = read_projection_csv(&projection).map_err(|e| e.to_string())?;
        check(rows.len() == 2, || format!("{} projection rows", rows.len()))?;
        for (row, t) in rows.iter().zip(&stored) {
            let expected = (t.train_mean_s + 2000.0 * t.match_mean_s) * 1000.0;
            check(row.method == t.method && row.total_ms == expected, || {
                format!("{}: {} ms vs {expected} ms", row.method, row.total_ms)
            })?;
        }
        Ok(format!("n=2000 projection reproduced exactly from timing.csv ({:.3} ms accum)", rows[1].total_ms))
    })();
    (c7, c8)
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    for case in 0..1000 {
        let (na, nb) = (r.gen_range(1..=30), r.gen_range(1..=30));
        let mut set = |n: usize| -> Vec<(f64, f64)> {
            (0..n).map(|_| (r.gen_range(-10..=10) as f64 * 0.5, r.gen_range(-10..=10) as f64 * 0.5)).collect()
        };
        let (a, b) = (set(na), set(nb));
        let h = |p: &[(f64, f64)], q: &[(f64, f64)]| {
            p.iter()
                .map(|x| {
                    q.iter()
                        .map(|y| ((x.0 - y.0).powi(2) + (x.1 - y.1).powi(2)).sqrt())
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        let want = h(&a, &b).max(h(&b, &a));
        let got = hausdorff(&PointSet::new(a).unwrap(), &PointSet::new(b).unwrap());
        check(got == want, || format!("pair {case}: {got} vs {want}"))?;
    }

    let mut worst = 0.0f64;
    let mut track = |a: &FourierDescriptor, b: &FourierDescriptor| {
        for (x, y) in a.magnitudes().iter().zip(b.magnitudes()) {
            worst = worst.max((x - y).abs());
        }
    };
    // A 33x33 square has 128 unit steps: contour start shifts are exact
    // circular shifts of the resampled signature.
    let square = BinaryImage::from_fn(40, 40, |x, y| (3..36).contains(&x) && (3..36).contains(&y)).unwrap();
    let c = trace_contour(&square).unwrap();
    for k in [1, 7, 64, 100] {
        track(&fd_complex_coordinates(&c, 32).unwrap(), &fd_complex_coordinates(&c.rotated(k), 32).unwrap());
        track(
            &fd_centroid_distance(&c, (19.0, 19.0), 32).unwrap(),
            &fd_centroid_distance(&c.rotated(k), (19.0, 19.0), 32).unwrap(),
        );
    }
    for kind in [SignatureKind::ComplexCoordinates, SignatureKind::CentroidDistance] {
        for _ in 0..50 {
            let signal: Vec<Complex64> = (0..128)
                .map(|_| Complex64::new(r.gen_range(1.0..5.0), if kind == SignatureKind::ComplexCoordinates { r.gen_range(-5.0..5.0) } else { 0.0 }))
                .collect();
            let mut turned = signal.clone();
            turned.rotate_left(r.gen_range(1..128));
            track(
                &FourierDescriptor::from_signature(kind, &signal, 32).unwrap(),
                &FourierDescriptor::from_signature(kind, &turned, 32).unwrap(),
            );
        }
    }
    for img in mixed_shapes(50, 9) {
        let moved = BinaryImage::from_fn(img.width(), img.height(), |x, y| img.get_or_bg(x as i64 - 2, y as i64 + 1)).unwrap();
        if moved.foreground_count() != img.foreground_count() {
            continue;
        }
        track(
            &fd_complex_coordinates(&trace_contour(&img).unwrap(), 32).unwrap(),
            &fd_complex_coordinates(&trace_contour(&moved).unwrap(), 32).unwrap(),
        );
    }
    check(worst <= 1e-6, || format!("FD magnitudes moved by {worst:e}"))?;
    Ok(format!("1000 Hausdorff pairs exact; FD start/translation max change {worst:e}"))
}

fn criterion_10() -> Outcome {
    let subset = |a: &BinaryImage, b: &BinaryImage| a.pixels().iter().zip(b.pixels()).all(|(&x, &y)| !x || y);
    let mut r = rng(10);
    let synth = generate_synthetic_dataset(50, 96, 96, SEED + 10).unwrap();
    let shapes: Vec<BinaryImage> = synth
        .entries()
        .iter()
        .map(|(_, i)| i.clone())
        .chain((0..50).map(|_| random_blob(&mut r, 64)))
        .collect();
    for (i, img) in shapes.iter().enumerate() {
        let closing = erode(&dilate(img).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        check(subset(img, &closing), || format!("shape {i}: original not inside closing"))?;
        match erode(img) {
            Ok(e) => {
                let opening = dilate(&e).map_err(|e| e.to_string())?;
                check(subset(&opening, img), || format!("shape {i}: opening not inside original"))?;
            }
            Err(Error::VanishedShape) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    let block = BinaryImage::from_fn(12, 12, |x, y| (4..=6).contains(&x) && (4..=6).contains(&y)).unwrap();
    let one = apply(&block, &DeformationSpec::new(DeformKind::Erosion, 1, Variant::Single).unwrap()).unwrap();
    check(one.foreground().collect::<Vec<_>>() == [(5, 5)], || "block erosion level 1 is not the centre pixel".into())?;
    let two = apply(&block, &DeformationSpec::new(DeformKind::Erosion, 2, Variant::Single).unwrap());
    check(matches!(two, Err(Error::VanishedShape)), || "block erosion level 2 did not vanish".into())?;
    Ok(format!("{} shapes bracketed; 3x3 erosion chain exact", shapes.len()))
}

fn criterion_11(dir: &Path) -> Outcome {
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let out = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_arb"))
            .args(["bench", "--synthetic", "40", "--seed", "11", "--levels", "2", "--out"])
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        check(status.status.success(), || String::from_utf8_lossy(&status.stderr).into_owned())?;
        std::fs::read(out.join("accuracy.csv")).map_err(|e| e.to_string())
    };
    let (a, b) = (run("first")?, run("second")?);
    check(a == b, || "accuracy CSVs differ".into())?;
    Ok(format!("two bench runs wrote identical {}-byte accuracy CSVs", a.len()))
}

fn main() -> ExitCode {
    let tmp = tempfile::tempdir().expect("temporary directory");
    let ds = generate_synthetic_dataset(200, 120, 120, SEED).expect("synthetic dataset");
    let timing_ds = generate_synthetic_dataset(50, 120, 120, SEED + 7).expect("synthetic dataset");
    let (c7, c8) = criterion_7_8(&timing_ds, tmp.path());

    let results: Vec<(&str, Outcome)> = vec![
        ("1 translation invariance", criterion_1()),
        ("2 binning oracle", criterion_2()),
        ("3 accumulative = sum of overlapping", criterion_3()),
        ("4 grid DFT", criterion_4()),
        ("5 rotation level 1", criterion_5(&ds)),
        ("6 deformation level 1", criterion_6(&ds)),
        ("7 timing orderings", c7),
        ("8 retrieval projection", c8),
        ("9 baseline correctness", criterion_9()),
        ("10 morphology", criterion_10()),
        ("11 bench determinism", criterion_11(tmp.path())),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
