//! Acceptance suite: one test per release criterion, each printing a
//! `acceptance: <criterion>: PASS` line on success (visible with
//! `cargo test --test acceptance -- --nocapture`).
//!
//! Oracles used here (brute-force slope evaluation, stack flood fill) are
//! written against the definitions, independently of the production
//! kernels they check.

use std::collections::HashMap;
use std::time::Instant;

use landscan_core::rng::Rng;
use landscan_core::{
    baseline_detect, connected_components, detect, evaluate, fill_dsm_from_dtm, generate,
    min_pixels, obstacle_mask, parse_asc, slope_degrees, sweep_var_thresh, timed_run, write_asc,
    BaselineParams, BitMask, DemGrid, DetectionParams, GridHeader, LandingClass, SynthParams,
};

fn header(ncols: usize, nrows: usize, cellsize: f64) -> GridHeader {
    GridHeader {
        ncols,
        nrows,
        xllcorner: 0.0,
        yllcorner: 0.0,
        cellsize,
        nodata_value: -9999.0,
    }
}

/// Terrain family used by the synthetic criteria: mostly mountainous with
/// genuine flat pockets and a tenth of the map under canopy.
fn terrain_params(seed: u64, size: usize) -> SynthParams {
    SynthParams {
        seed,
        size,
        relief_amplitude: 12.0,
        roughness: 0.35,
        vegetation_density: 0.1,
        ..SynthParams::default()
    }
}

/// Per-pixel evaluation of the rate-of-change formulas with replicate-edge
/// clamping; returns `None` where the neighborhood touches nodata.
fn slope_oracle(dem: &DemGrid) -> Vec<Option<f64>> {
    let (nrows, ncols) = (dem.nrows() as isize, dem.ncols() as isize);
    let cs = dem.header().cellsize;
    let cell = |r: isize, c: isize| {
        let r = r.clamp(0, nrows - 1) as usize;
        let c = c.clamp(0, ncols - 1) as usize;
        (!dem.is_nodata(r, c)).then(|| dem.value(r, c))
    };
    let mut out = Vec::with_capacity((nrows * ncols) as usize);
    for r in 0..nrows {
        for c in 0..ncols {
            let mut n = [0.0f64; 9];
            let mut hole = false;
            for dr in 0..3isize {
                for dc in 0..3isize {
                    match cell(r + dr - 1, c + dc - 1) {
                        Some(v) => n[(dr * 3 + dc) as usize] = v,
                        None => hole = true,
                    }
                }
            }
            if hole {
                out.push(None);
                continue;
            }
            let [a, b, cc, d, _, f, g, h, i] = n;
            let dzdx = ((cc + 2.0 * f + i) - (a + 2.0 * d + g)) / (8.0 * cs);
            let dzdy = ((g + 2.0 * h + i) - (a + 2.0 * b + cc)) / (8.0 * cs);
            out.push(Some((dzdx.hypot(dzdy)).atan().to_degrees()));
        }
    }
    out
}

#[test]
fn slope_oracle_agreement_on_50_seeded_grids() {
    let started = Instant::now();
    for seed in 0..50u64 {
        let mut rng = Rng::new(seed);
        let h = header(64, 64, 0.5 + 2.0 * rng.next_f64());
        let mut values = Vec::with_capacity(64 * 64);
        let mut nodata = Vec::with_capacity(64 * 64);
        for _ in 0..64 * 64 {
            if rng.next_f64() < 0.02 {
                values.push(-9999.0);
                nodata.push(true);
            } else {
                values.push(rng.range(-100.0, 100.0));
                nodata.push(false);
            }
        }
        let dem = DemGrid::new(h, values, nodata).unwrap();
        let slope = slope_degrees(&dem).unwrap();
        let oracle = slope_oracle(&dem);
        for (i, expected) in oracle.iter().enumerate() {
            match expected {
                None => assert!(slope.undefined_flags()[i], "seed {seed} cell {i}"),
                Some(deg) => {
                    assert!(!slope.undefined_flags()[i], "seed {seed} cell {i}");
                    let got = slope.degrees()[i];
                    assert!(
                        (got - deg).abs() <= 1e-9,
                        "seed {seed} cell {i}: {got} vs {deg}"
                    );
                }
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "oracle comparison took {elapsed} s");
    println!("acceptance: slope oracle (50 x 64x64, 1e-9 deg, {elapsed:.2} s): PASS");
}

#[test]
fn worked_slope_values() {
    // constant grid: exactly zero everywhere
    let flat = DemGrid::constant(header(5, 5, 1.0), 10.0).unwrap();
    let s = slope_degrees(&flat).unwrap();
    assert!(s.degrees().iter().all(|&d| d == 0.0));

    // unit ramp along the columns: interior cells exactly 45 degrees
    let vals: Vec<f64> = (0..5).flat_map(|_| (0..5).map(|c| c as f64)).collect();
    let ramp = DemGrid::from_values(header(5, 5, 1.0), vals).unwrap();
    let s = slope_degrees(&ramp).unwrap();
    for r in 1..4 {
        for c in 1..4 {
            assert_eq!(s.degree(r, c), 45.0);
        }
    }

    // worked 3x3 neighborhood at cellsize 5: dz/dx = 0.05, dz/dy = -3.8
    let vals = vec![50.0, 45.0, 50.0, 30.0, 30.0, 30.0, 8.0, 10.0, 10.0];
    let g: DemGrid = DemGrid::from_values(header(3, 3, 5.0), vals).unwrap();
    let s = slope_degrees(&g).unwrap();
    assert!(
        (s.degree(1, 1) - 75.2576).abs() < 1e-3,
        "got {}",
        s.degree(1, 1)
    );
    println!("acceptance: worked slope values (0, 45, 75.2576 deg): PASS");
}

/// Stack-based flood fill over 8-neighborhoods.
fn flood_fill(mask: &BitMask) -> Vec<u32> {
    let (nrows, ncols) = (mask.header().nrows as isize, mask.header().ncols as isize);
    let mut labels = vec![0u32; (nrows * ncols) as usize];
    let mut next = 0;
    for start in 0..labels.len() {
        if labels[start] != 0 || !mask.get(start / ncols as usize, start % ncols as usize) {
            continue;
        }
        next += 1;
        labels[start] = next;
        let mut stack = vec![(start as isize / ncols, start as isize % ncols)];
        while let Some((r, c)) = stack.pop() {
            for dr in -1..=1 {
                for dc in -1..=1 {
                    let (nr, nc) = (r + dr, c + dc);
                    if nr < 0 || nc < 0 || nr >= nrows || nc >= ncols {
                        continue;
                    }
                    let ni = (nr * ncols + nc) as usize;
                    if labels[ni] == 0 && mask.get(nr as usize, nc as usize) {
                        labels[ni] = next;
                        stack.push((nr, nc));
                    }
                }
            }
        }
    }
    labels
}

#[test]
fn connected_components_match_flood_fill_on_100_seeded_masks() {
    for seed in 0..100u64 {
        let mut rng = Rng::new(0xC0C0 + seed);
        let density = 0.2 + 0.6 * (seed as f64 / 100.0);
        let bits: Vec<bool> = (0..128 * 128).map(|_| rng.next_f64() < density).collect();
        let mask = BitMask::new(header(128, 128, 1.0), bits).unwrap();

        let labels = connected_components(&mask);
        let oracle = flood_fill(&mask);

        // same partition: a bijection between label sets must exist
        let mut fwd: HashMap<u32, u32> = HashMap::new();
        let mut bwd: HashMap<u32, u32> = HashMap::new();
        for (&x, &y) in labels.labels().iter().zip(&oracle) {
            assert_eq!(x == 0, y == 0, "foreground disagreement, seed {seed}");
            if x == 0 {
                continue;
            }
            assert_eq!(
                *fwd.entry(x).or_insert(y),
                y,
                "split component, seed {seed}"
            );
            assert_eq!(
                *bwd.entry(y).or_insert(x),
                x,
                "merged component, seed {seed}"
            );
        }

        // same size multiset
        let mut oracle_sizes: HashMap<u32, usize> = HashMap::new();
        for &y in &oracle {
            if y != 0 {
                *oracle_sizes.entry(y).or_insert(0) += 1;
            }
        }
        let mut got: Vec<usize> = labels.component_sizes()[1..].to_vec();
        let mut want: Vec<usize> = oracle_sizes.into_values().collect();
        got.sort_unstable();
        want.sort_unstable();
        assert_eq!(got, want, "size multiset, seed {seed}");
    }
    println!("acceptance: connected-components oracle (100 x 128x128): PASS");
}

#[test]
fn pipeline_invariants_on_20_seeded_terrains() {
    let params = DetectionParams::default();
    for seed in 1..=20u64 {
        let synth = terrain_params(seed, 65);
        let (dtm, dsm, _) = generate::<f64>(&synth).unwrap();
        let map = detect(&dsm, &dtm, &params).unwrap();
        let cells = 65 * 65;

        // tri-partition exactness
        let landing = map.count(LandingClass::Landing);
        let terrain = map.count(LandingClass::NoLandingTerrain);
        let obstacle = map.count(LandingClass::NoLandingObstacle);
        assert_eq!(landing + terrain + obstacle, cells, "seed {seed}");

        // no landing pixel is obstacle-masked, has undefined slope, or
        // exceeds the slope threshold (checked against the module ops)
        let repaired = fill_dsm_from_dtm(&dsm, &dtm).unwrap();
        let obstacles = obstacle_mask(&repaired, &dtm, params.height_thresh).unwrap();
        let slope = slope_degrees(&repaired).unwrap();
        for (i, &class) in map.classes().iter().enumerate() {
            if class == LandingClass::Landing {
                assert!(!obstacles.bits()[i], "seed {seed} cell {i} obstacle");
                assert!(
                    !slope.undefined_flags()[i],
                    "seed {seed} cell {i} undefined"
                );
                assert!(
                    slope.degrees()[i] <= params.slope_thresh,
                    "seed {seed} cell {i} steep"
                );
            }
        }

        // strict area: every 8-connected landing region meets the floor
        let floor = min_pixels(params.min_area, synth.cellsize);
        let regions = connected_components(&map.mask_of(LandingClass::Landing));
        for id in 1..=regions.num_components() as u32 {
            assert!(regions.size_of(id) >= floor, "seed {seed} region {id}");
        }

        // monotonicity over an increasing slope-threshold sweep
        let mut previous: Option<BitMask> = None;
        for slope_thresh in [1.0, 3.0, 5.0, 10.0, 20.0] {
            let swept = detect(
                &dsm,
                &dtm,
                &DetectionParams {
                    slope_thresh,
                    ..params.clone()
                },
            )
            .unwrap();
            let mask = swept.mask_of(LandingClass::Landing);
            if let Some(prev) = &previous {
                assert!(
                    prev.is_subset_of(&mask),
                    "seed {seed}: landing shrank when threshold rose to {slope_thresh}"
                );
            }
            previous = Some(mask);
        }

        // translation invariance: +100 m on both inputs, bit-identical map
        let dsm_up = dsm.map_values(|v| v + 100.0).unwrap();
        let dtm_up = dtm.map_values(|v| v + 100.0).unwrap();
        let map_up = detect(&dsm_up, &dtm_up, &params).unwrap();
        assert_eq!(map, map_up, "seed {seed}: +100 m offset changed the map");
    }
    println!("acceptance: pipeline invariants (20 seeded terrains): PASS");
}

#[test]
fn detector_outperforms_quadtree_baseline_on_vegetated_terrain() {
    // The baseline's variance threshold is chosen per terrain by sweeping
    // a realistic three-decade candidate range and keeping the
    // best-precision run.
    const CANDIDATES: [f64; 9] = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0];
    let base = BaselineParams::default();
    let detect_params = DetectionParams::default();

    let mut detect_sum = 0.0;
    let mut baseline_sum = 0.0;
    let runs = 10;
    for seed in 1..=runs as u64 {
        let synth = terrain_params(seed, 129);
        assert!(synth.vegetation_density >= 0.05);
        let (dtm, dsm, gt) = generate::<f64>(&synth).unwrap();

        let map = detect(&dsm, &dtm, &detect_params).unwrap();
        let report = evaluate(&map, &gt).unwrap();
        let p_detect = report
            .precision
            .expect("detector must predict something on these terrains");

        let sweep = sweep_var_thresh(&dsm, &gt, &CANDIDATES, &base).unwrap();
        let p_baseline = sweep
            .reports
            .iter()
            .find(|(v, _)| *v == sweep.chosen)
            .and_then(|(_, r)| r.precision)
            .expect("swept baseline must predict something on these terrains");

        println!(
            "  seed {seed}: detect precision {p_detect:.4}, baseline precision {p_baseline:.4} (var_thresh {})",
            sweep.chosen
        );
        detect_sum += p_detect;
        baseline_sum += p_baseline;
    }
    let detect_mean = detect_sum / runs as f64;
    let baseline_mean = baseline_sum / runs as f64;
    assert!(
        detect_mean >= baseline_mean,
        "detect mean {detect_mean} < baseline mean {baseline_mean}"
    );
    assert!(
        detect_mean >= 0.85,
        "detect mean precision {detect_mean} below 0.85"
    );
    println!(
        "acceptance: directional claim (detect mean {detect_mean:.4} >= baseline mean {baseline_mean:.4}, detect >= 0.85): PASS"
    );
}

#[test]
fn vegetation_is_fully_excluded_on_flat_terrain() {
    let synth = SynthParams {
        seed: 11,
        size: 65,
        relief_amplitude: 0.0,
        vegetation_density: 0.15,
        ..SynthParams::default()
    };
    let (dtm, dsm, _) = generate::<f64>(&synth).unwrap();
    let map = detect(&dsm, &dtm, &DetectionParams::default()).unwrap();

    let mut veg_cells = 0;
    for (i, (&s, &t)) in dsm.values().iter().zip(dtm.values()).enumerate() {
        if s > t {
            veg_cells += 1;
            assert_eq!(
                map.classes()[i],
                LandingClass::NoLandingObstacle,
                "vegetated cell {i} not classed as obstacle"
            );
        }
    }
    assert!(veg_cells > 0, "fixture must contain vegetation");
    println!("acceptance: vegetation exclusion ({veg_cells} canopy cells, 100% obstacle, 0% landing): PASS");
}

#[test]
fn detect_completes_a_1024_square_pair_within_budget() {
    let synth = terrain_params(3, 1024);
    let (dtm, dsm, _) = generate::<f64>(&synth).unwrap();
    let (map, seconds) = timed_run(|| detect(&dsm, &dtm, &DetectionParams::default())).unwrap();
    assert_eq!(map.classes().len(), 1024 * 1024);
    assert!(seconds < 5.0, "detect took {seconds} s, budget is 5 s");

    // repeated runs on identical input give identical maps
    let (map2, _) = timed_run(|| detect(&dsm, &dtm, &DetectionParams::default())).unwrap();
    assert_eq!(map, map2);
    println!("acceptance: timing (1024x1024 detect in {seconds:.3} s < 5 s): PASS");
}

#[test]
fn formats_round_trip_and_synthesis_is_deterministic() {
    let synth = terrain_params(42, 65);
    let (dtm, dsm, gt) = generate::<f64>(&synth).unwrap();
    let map = detect(&dsm, &dtm, &DetectionParams::default()).unwrap();
    let slope = slope_degrees(&dsm).unwrap();

    // parse(write(g)) is the identity for every artifact the tool emits
    let grids = [
        ("dtm", dtm.clone()),
        ("dsm", dsm.clone()),
        ("gt", gt.to_grid()),
        ("map", map.to_grid()),
        ("slope", slope.to_grid()),
    ];
    for (what, grid) in &grids {
        let text = write_asc(grid);
        let back: DemGrid = parse_asc(&text).unwrap();
        assert_eq!(&back, grid, "{what} does not round-trip");
    }

    // byte-for-byte determinism under a fixed seed
    let (dtm2, dsm2, gt2) = generate::<f64>(&synth).unwrap();
    assert_eq!(write_asc(&dtm), write_asc(&dtm2));
    assert_eq!(write_asc(&dsm), write_asc(&dsm2));
    assert_eq!(write_asc(&gt.to_grid()), write_asc(&gt2.to_grid()));
    println!("acceptance: format round-trip and seeded determinism: PASS");
}

#[test]
fn baseline_never_emits_the_obstacle_class() {
    for seed in 1..=5u64 {
        let synth = terrain_params(seed, 65);
        let (_, dsm, _) = generate::<f64>(&synth).unwrap();
        let map = baseline_detect(&dsm, &BaselineParams::default()).unwrap();
        assert_eq!(map.count(LandingClass::NoLandingObstacle), 0, "seed {seed}");
        assert_eq!(
            map.count(LandingClass::Landing) + map.count(LandingClass::NoLandingTerrain),
            65 * 65
        );
    }
    println!("acceptance: baseline tri-class restriction (no obstacle class): PASS");
}
