//! Acceptance checks. Each criterion prints one `PASS` or `FAIL` line;
//! the test fails if any line is `FAIL`.

use std::collections::{HashSet, VecDeque};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seedmask::augment::{apply_orientation, augment_pair, orbit, Orientation, Transform};
use seedmask::io;
use seedmask::metrics::{auroc_from_rates, grade, kappa, AgreementScale, ConfusionMatrix};
use seedmask::raster::{close, dilate, flood_fill, BinaryMask, DiskSE, GrayImage, SeedPoint};
use seedmask::synthetic::two_ring_fixture;
use seedmask::weaklabel::{
    floodfill_pipeline, floodfill_stages, region_grow, FloodFillParams, RegionGrowParams, SeedStatus,
};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

/// (fnr, fpr, auroc) as published, six decimals each.
const PUBLISHED: [(&str, &str, &str); 6] = [
    ("0.319044", "0.010224", "0.835366"),
    ("0.446302", "0.003077", "0.775311"),
    ("0.334855", "0.028521", "0.818312"),
    ("0.322915", "0.043478", "0.816803"),
    ("0.171410", "0.034758", "0.896916"),
    ("0.032981", "0.036248", "0.965385"),
];

fn micros(s: &str) -> i64 {
    let (int, frac) = s.split_once('.').unwrap();
    int.parse::<i64>().unwrap() * 1_000_000 + frac.parse::<i64>().unwrap()
}

fn auroc_consistency() -> Check {
    let mut worst = 0i64;
    for (fnr, fpr, auroc) in PUBLISHED {
        // in half-millionths: 2·auroc = 2 − fnr − fpr exactly; 5e-7 is one unit
        let twice = 2_000_000 - micros(fnr) - micros(fpr);
        let off = (twice - 2 * micros(auroc)).abs();
        ensure!(off <= 1, "({fnr}, {fpr}) gives {} vs {auroc}", twice as f64 / 2e6);
        let got = auroc_from_rates(fnr.parse().unwrap(), fpr.parse().unwrap());
        ensure!((got - twice as f64 / 2e6).abs() < 1e-15, "f64 evaluation {got} drifts from exact value");
        worst = worst.max(off);
    }
    Ok(format!("6 models, max |diff| = {}e-7", worst * 5))
}

fn grading() -> Check {
    use AgreementScale::*;
    let g = |v: f64, s| grade(v, s).map_err(|e| e.to_string());
    ensure!(g(0.674656, LandisKoch)? == "substantial agreement", "0.674656 on Landis-Koch");
    ensure!(g(0.674656, Fleiss)? == "fair to good agreement", "0.674656 on Fleiss");
    ensure!(g(0.965385, TraditionalAuroc)? == "excellent agreement (A)", "0.965385 on AUROC scale");
    // each band: its lower bound maps to it (or the previous band when the
    // bound is exclusive); just under the bound maps to the previous band
    let mut checked = 0;
    for scale in AgreementScale::ALL {
        let bands = scale.bands();
        for (i, band) in bands.iter().enumerate() {
            let at = g(band.lower, scale)?;
            let want_at = if band.lower_inclusive { band.label } else { bands[i - 1].label };
            ensure!(at == want_at, "{} at {}: {at}", scale.name(), band.lower);
            let above = g(band.lower + 1e-9, scale)?;
            ensure!(above == band.label, "{} just above {}: {above}", scale.name(), band.lower);
            if i > 0 {
                let under = g(band.lower - 1e-9, scale)?;
                ensure!(under == bands[i - 1].label, "{} just below {}: {under}", scale.name(), band.lower);
            } else {
                ensure!(grade(band.lower - 1e-9, scale).is_err(), "{} accepts values below its domain", scale.name());
            }
            checked += 1;
        }
        ensure!(g(1.0, scale)? == bands.last().unwrap().label, "{} at 1", scale.name());
        ensure!(grade(1.0 + 1e-9, scale).is_err(), "{} accepts values above 1", scale.name());
    }
    // printed gaps such as 0.20 .. 0.21 belong to the lower band
    ensure!(g(0.205, LandisKoch)? == "slight agreement", "Landis-Koch gap 0.20..0.21");
    ensure!(g(0.75, Fleiss)? == "fair to good agreement", "Fleiss 0.75 is not excellent");
    Ok(format!("3 fixtures, {checked} band boundaries"))
}

fn kappa_properties() -> Check {
    let cm = |tp, tn, fp, fn_| ConfusionMatrix::from_fractions(tp, tn, fp, fn_).map_err(|e| e.to_string());
    let k = |m: &ConfusionMatrix| kappa(m).map_err(|e| e.to_string());
    ensure!(k(&cm(0.5, 0.5, 0.0, 0.0)?)? == 1.0, "perfect agreement");
    ensure!(k(&cm(0.2, 0.8, 0.0, 0.0)?)? == 1.0, "perfect agreement, skewed classes");
    let fixture = k(&cm(0.4, 0.4, 0.1, 0.1)?)?;
    // 0.6 has no exact f64; the same fixture in whole counts is exactly 3/5
    ensure!((fixture - 0.6).abs() < 1e-15, "fixture gives {fixture}");
    let (tp, tn, fp, fn_) = (40i64, 40, 10, 10);
    let n = tp + tn + fp + fn_;
    let chance = (tp + fp) * (tp + fn_) + (tn + fn_) * (tn + fp);
    ensure!(((tp + tn) * n - chance) * 5 == (n * n - chance) * 3, "integer fixture is not 3/5");

    let mut rng = ChaCha8Rng::seed_from_u64(0xca9a);
    let mut worst = 0f64;
    for _ in 0..1000 {
        let (p, q): (f64, f64) = (rng.random_range(0.001..0.999), rng.random_range(0.001..0.999));
        let m = cm(p * q, (1.0 - p) * (1.0 - q), (1.0 - p) * q, p * (1.0 - q))?;
        let v = k(&m)?.abs();
        ensure!(v < 1e-12, "independent p={p} q={q} gives {v}");
        worst = worst.max(v);

        let w: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.0..1.0));
        let s: f64 = w.iter().sum();
        let m = cm(w[0] / s, w[1] / s, w[2] / s, w[3] / s)?;
        let swapped = cm(w[0] / s, w[1] / s, w[3] / s, w[2] / s)?;
        if let (Ok(a), Ok(b)) = (kappa(&m), kappa(&swapped)) {
            ensure!((a - b).abs() < 1e-12, "fp/fn swap changes kappa: {a} vs {b}");
        }
    }
    Ok(format!("1000 independent pairs, max |kappa| = {worst:.1e}"))
}

/// Rescans every pixel on each step; no queue, no incremental state.
fn naive_grow(image: &GrayImage, seed: SeedPoint, t: f64) -> BinaryMask {
    let (w, h) = (image.width(), image.height());
    let px = image.data();
    let mut region = vec![false; w * h];
    region[seed.row * w + seed.col] = true;
    let (mut sum, mut n) = (px[seed.row * w + seed.col] as i64, 1i64);
    loop {
        let mut best: Option<(i64, usize)> = None;
        for i in 0..w * h {
            let (r, c) = (i / w, i % w);
            let touches = (r > 0 && region[i - w])
                || (r + 1 < h && region[i + w])
                || (c > 0 && region[i - 1])
                || (c + 1 < w && region[i + 1]);
            if region[i] || !touches {
                continue;
            }
            let d = (px[i] as i64 * n - sum).abs();
            if best.is_none_or(|b| (d, i) < b) {
                best = Some((d, i));
            }
        }
        let Some((d, i)) = best else { break };
        if d as f64 / n as f64 > t {
            break;
        }
        region[i] = true;
        sum += px[i] as i64;
        n += 1;
    }
    BinaryMask::new(w, h, region).unwrap()
}

fn region_grow_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa11ce);
    let start = Instant::now();
    let mut grown = 0;
    for case in 0..100 {
        // half the images use few grey levels so ties occur
        let levels: u8 = if case % 2 == 0 { 255 } else { 4 };
        let img = GrayImage::from_fn(8, 8, |_, _| rng.random_range(0..=levels) * (255 / levels)).unwrap();
        let seed = SeedPoint::new(rng.random_range(0..8), rng.random_range(0..8));
        let t = rng.random_range(0.0..80.0);
        let got = region_grow(&img, seed, &RegionGrowParams { stop_threshold: t }).map_err(|e| e.to_string())?;
        ensure!(got == naive_grow(&img, seed, t), "case {case}: seed {seed:?}, t {t}");
        grown += got.count_foreground();
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("100 images bit-identical, {grown} pixels grown, {elapsed:.0?}"))
}

fn bfs(barrier: &BinaryMask, seed: SeedPoint) -> BinaryMask {
    let (w, h) = (barrier.width(), barrier.height());
    let mut out = vec![false; w * h];
    out[seed.row * w + seed.col] = true;
    let mut queue = VecDeque::from([(seed.row, seed.col)]);
    while let Some((r, c)) = queue.pop_front() {
        let next = [
            (r.wrapping_sub(1), c),
            (r + 1, c),
            (r, c.wrapping_sub(1)),
            (r, c + 1),
        ];
        for (nr, nc) in next {
            if nr < h && nc < w && !out[nr * w + nc] && !barrier.get(nr, nc) {
                out[nr * w + nc] = true;
                queue.push_back((nr, nc));
            }
        }
    }
    BinaryMask::new(w, h, out).unwrap()
}

fn flood_fill_pipeline() -> Check {
    let p = FloodFillParams::default();
    let (img, seeds) = two_ring_fixture(None);
    let st = floodfill_stages(&img, &seeds, &p, None).map_err(|e| e.to_string())?;
    let mut union = BinaryMask::filled(img.width(), img.height(), false).unwrap();
    for (seed, outcome) in seeds.iter().zip(&st.result.per_seed) {
        ensure!(outcome.status == SeedStatus::FilledOk, "closed ring {seed:?}: {:?}", outcome.status);
        let interior = bfs(&st.barrier, *seed);
        // the enclosed region never reaches the image border
        let touches_border = (0..32).any(|i| interior.get(0, i) || interior.get(31, i) || interior.get(i, 0) || interior.get(i, 31));
        ensure!(!touches_border, "closed ring {seed:?} is not enclosed");
        // every pixel strictly inside the drawn ring is filled
        for r in 0..32 {
            for c in 0..32 {
                let d = ((r as f64 - seed.row as f64).powi(2) + (c as f64 - seed.col as f64).powi(2)).sqrt();
                ensure!(d > 4.5 || interior.get(r, c), "({r},{c}) inside ring {seed:?} not filled");
                ensure!(d < 6.5 || !interior.get(r, c), "({r},{c}) outside ring {seed:?} filled");
            }
        }
        ensure!(outcome.pixels == interior.count_foreground(), "pixel count for {seed:?}");
        union = union.union(&interior);
    }
    ensure!(st.result.mask == union, "closed-ring mask is not the union of the two interiors");

    let (gap, gap_seeds) = two_ring_fixture(Some(5));
    let leaked = floodfill_pipeline(&gap, &gap_seeds, &p).map_err(|e| e.to_string())?;
    ensure!(leaked.per_seed[0].status == SeedStatus::SuspectLeak, "gap ring: {:?}", leaked.per_seed[0].status);
    ensure!(leaked.per_seed[1].status == SeedStatus::FilledOk, "intact ring beside the gap: {:?}", leaked.per_seed[1].status);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f111);
    for case in 0..100 {
        let density = rng.random_range(0.1..0.5);
        let barrier = BinaryMask::from_fn(10, 10, |_, _| rng.random_bool(density)).unwrap();
        let seed = SeedPoint::new(rng.random_range(0..10), rng.random_range(0..10));
        if barrier.get(seed.row, seed.col) {
            ensure!(flood_fill(&barrier, seed).is_err(), "random barrier {case}: seed {seed:?} on the barrier accepted");
            continue;
        }
        let got = flood_fill(&barrier, seed).map_err(|e| e.to_string())?;
        ensure!(got == bfs(&barrier, seed), "random barrier {case}, seed {seed:?}");
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let image = dir.path().join("rings.pgm");
    let out = dir.path().join("rings.png");
    io::save_gray(&image, &img).map_err(|e| e.to_string())?;
    let args = ["seedmask", "fill", "--image", image.to_str().unwrap(), "--seed", "9,9", "--seed", "22,22"];
    let args: Vec<&str> = args.into_iter().chain(["--out", out.to_str().unwrap(), "--debug-steps"]).collect();
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let code = seedmask_cli::run_with(args, &mut stdout, &mut stderr);
    ensure!(code == 0, "fill --debug-steps exited {code}: {}", String::from_utf8_lossy(&stderr));
    let steps = [("binary", &st.binary), ("skeleton", &st.skeleton), ("closed", &st.barrier), ("filled", &st.result.mask)];
    for (step, want) in steps {
        let path = dir.path().join(format!("rings.{step}.png"));
        let got = io::load_mask(&path).map_err(|e| format!("{step}: {e}"))?;
        ensure!(&got == want, "--debug-steps {step} differs from the pipeline stage");
    }
    Ok("ring interiors exact, gap flagged, 100 random barriers, 4 debug rasters".into())
}

fn morphology() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3a9);
    let mut cases = 0;
    for _ in 0..300 {
        let density = rng.random_range(0.05..0.7);
        let a = BinaryMask::from_fn(8, 8, |_, _| rng.random_bool(density)).unwrap();
        let b = a.union(&BinaryMask::from_fn(8, 8, |_, _| rng.random_bool(0.2)).unwrap());
        for radius in 0..=2 {
            let se = DiskSE::new(radius);
            let closed = close(&a, se);
            ensure!(close(&closed, se) == closed, "closing not idempotent at radius {radius}");
            ensure!(a.is_subset_of(&closed), "closing not extensive at radius {radius}");
            ensure!(dilate(&a, se).is_subset_of(&dilate(&b, se)), "dilation not monotone at radius {radius}");
            if radius == 0 {
                ensure!(closed == a && dilate(&a, se) == a, "radius 0 is not the identity");
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} mask/radius cases"))
}

/// Orientation applied by explicit index arithmetic on an n×n grid.
fn by_hand(data: &[u8], n: usize, o: Orientation) -> Vec<u8> {
    let mut g = data.to_vec();
    for _ in 0..o.rotation.quarter_turns() {
        // clockwise: new[r][c] = old[n-1-c][r]
        g = (0..n * n).map(|i| g[(n - 1 - i % n) * n + i / n]).collect();
    }
    if o.flipped {
        g = (0..n * n).map(|i| g[(i / n) * n + (n - 1 - i % n)]).collect();
    }
    g
}

fn augmentation() -> Check {
    let small = GrayImage::new(2, 2, vec![1, 2, 3, 4]).unwrap();
    let members = orbit(&small).map_err(|e| e.to_string())?;
    let distinct: HashSet<Vec<u8>> = members.iter().map(|(_, g)| g.data().to_vec()).collect();
    ensure!(members.len() == 8 && distinct.len() == 8, "2x2 orbit has {} distinct members", distinct.len());

    let img = GrayImage::new(3, 3, (1..=9).collect()).unwrap();
    for a in Orientation::ALL {
        let ga = apply_orientation(&img, a).map_err(|e| e.to_string())?;
        ensure!(ga.data() == by_hand(img.data(), 3, a), "{a} disagrees with index arithmetic");
        let mut row = HashSet::new();
        for b in Orientation::ALL {
            let seq = by_hand(&by_hand(img.data(), 3, a), 3, b);
            let ab = a.then(b);
            ensure!(by_hand(img.data(), 3, ab) == seq, "{a} then {b} is not {ab}");
            row.insert(ab);
        }
        ensure!(row.len() == 8, "row {a} of the composition table is not a permutation");
        ensure!(a.then(a.inverse()) == Orientation::IDENTITY, "{a} inverse");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xd1e);
    for _ in 0..20 {
        let n = rng.random_range(2..9);
        let image = GrayImage::from_fn(n, n, |_, _| rng.random()).unwrap();
        let label = BinaryMask::from_fn(n, n, |_, _| rng.random_bool(0.3)).unwrap();
        let plan: Vec<Transform> = Orientation::ALL.iter().map(|&o| Transform::Orient(o)).collect();
        for (im, lb) in augment_pair(&image, &label, &plan).map_err(|e| e.to_string())? {
            ensure!(lb.count_foreground() == label.count_foreground(), "label foreground count changed");
            ensure!(im.width() == n && lb.width() == n, "shape changed");
        }
    }
    Ok("8 distinct 2x2 members, 64-entry table, label counts preserved".into())
}

#[test]
fn acceptance() {
    let mut results: Vec<(&str, Check)> = vec![
        ("auroc from published rates", auroc_consistency()),
        ("grading fixtures and band boundaries", grading()),
        ("kappa properties", kappa_properties()),
        ("region growing equals full-rescan oracle", region_grow_oracle()),
        ("flood-fill pipeline fixtures and oracle", flood_fill_pipeline()),
        ("morphology properties", morphology()),
        ("augmentation orbit and composition", augmentation()),
    ];
    let metric_checks_pass = results[..3].iter().all(|(_, r)| r.is_ok());
    results.push((
        "published kappa values and figures",
        if metric_checks_pass {
            Ok("excluded: need trained networks and the original image stack; metric checks above stand in".into())
        } else {
            Err("excluded, and the metric checks standing in for them failed".into())
        },
    ));

    let mut failed = 0;
    for (name, result) in &results {
        match result {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
