//! Batch verification driver: every structural identity the library promises
//! is rechecked over enumerated populations, with one result row per check.
//!
//! All checks are exact except the floating hyperbolic-distance comparison,
//! which runs at the configured tolerance. Checks are independent and may run
//! concurrently (`K3STAB_THREADS` caps the pool); the report is sorted by
//! check name so output never depends on scheduling.

use anyhow::Result;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use k3stab_core::deckgroup::{cohomology_action, halfplane_action, monodromy, LoopGen, LoopWord};
use k3stab_core::halfplane::{
    cross_ratio, hyp_distance, induced_map_oracle, isotropic_pair_map, twist_moebius, HPoint,
    LatticeMap,
};
use k3stab_core::lattice::{K3Context, MukaiVector};
use k3stab_core::spherical::{enumerate_spherical, SphericalClass};
use k3stab_core::walls::{
    self, classify, diameter_and_bound, disk_d, disk_d_printed, n_ae_at,
    scan_spherical_against_disk, wall, wall_containment_check, wall_pair, RegionDiameter,
    WallType,
};
use k3stab_core::{rat, rat_int, Rat};

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub d: i64,
    pub rmax: i64,
    pub seed: u64,
    pub tolerance: f64,
    pub printed_b: bool,
    pub printed_disk: bool,
    pub v0_override: Option<MukaiVector>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            d: 1,
            rmax: 10,
            seed: 7,
            tolerance: 1e-12,
            printed_b: false,
            printed_disk: false,
            v0_override: None,
        }
    }
}

impl VerifyConfig {
    /// Distinct, reproducible seed per randomized check.
    fn salted_seed(&self, salt: u64) -> u64 {
        self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt)
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub check: String,
    pub population: usize,
    pub failures: usize,
    pub note: String,
}

impl CheckResult {
    fn new(check: &str, population: usize, failures: usize, note: impl Into<String>) -> Self {
        CheckResult { check: check.into(), population, failures, note: note.into() }
    }
}

/// All primitive isotropic classes with `1 <= r <= r_max`, `|n| <= n_max`.
pub fn enumerate_isotropic(ctx: &K3Context, r_max: i64, n_max: i64) -> Vec<MukaiVector> {
    let d = ctx.d();
    let mut out = Vec::new();
    for r in 1..=r_max {
        let rb = BigInt::from(r);
        for n in -n_max..=n_max {
            let num = d * n * n;
            if (&num % &rb).is_zero() {
                let v = MukaiVector { r: rb.clone(), n: BigInt::from(n), s: &num / &rb };
                if v.is_primitive() {
                    out.push(v);
                }
            }
        }
    }
    out
}

fn spherical_population(ctx: &K3Context, r_max: i64, slope_bound: i64) -> Vec<SphericalClass> {
    enumerate_spherical(ctx, r_max, (&rat_int(-slope_bound), &rat_int(slope_bound)))
        .expect("nonempty window")
}

fn rand_rat(rng: &mut ChaCha8Rng, lo: i64, hi: i64, qmax: i64) -> Rat {
    rat(rng.gen_range(lo..=hi), rng.gen_range(1..=qmax))
}

fn rand_point(rng: &mut ChaCha8Rng) -> HPoint {
    let x = rand_rat(rng, -30, 30, 10);
    let t = rand_rat(rng, 1, 40, 10);
    HPoint::new(x, t).expect("t > 0 by construction")
}

/// Reflection involution and pairing preservation over a vector grid.
pub fn check_lattice_reflections(ctx: &K3Context, r_max: i64, n_bound: i64) -> CheckResult {
    let mut population = 0usize;
    let mut failures = 0usize;
    let d = ctx.d();
    for r in 1..=r_max {
        let rb = BigInt::from(r);
        for n in -n_bound..=n_bound {
            let num = d * n * n + 1i64;
            if !(&num % &rb).is_zero() {
                continue;
            }
            let delta = MukaiVector { r: rb.clone(), n: BigInt::from(n), s: &num / &rb };
            for a in -2i64..=2 {
                for b in -2i64..=2 {
                    for c in -2i64..=2 {
                        population += 1;
                        let u = MukaiVector::new(a, b, c);
                        let w = MukaiVector::new(b, c, a);
                        let ru = ctx.reflect(&u, &delta).unwrap();
                        let rw = ctx.reflect(&w, &delta).unwrap();
                        let ok = ctx.reflect(&ru, &delta).unwrap() == u
                            && ctx.pairing(&ru, &rw) == ctx.pairing(&u, &w);
                        if !ok {
                            failures += 1;
                        }
                    }
                }
            }
        }
    }
    CheckResult::new("lattice_reflect_involution", population, failures, "")
}

/// The rewritten central charge equals the defining pairing exactly on
/// seeded random rational-model inputs.
pub fn check_central_charge_identity(ctx: &K3Context, samples: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    for _ in 0..samples {
        let p = rand_point(&mut rng);
        let mut r = 0i64;
        while r == 0 {
            r = rng.gen_range(-9..=9);
        }
        let v = MukaiVector::new(r, rng.gen_range(-9..=9), rng.gen_range(-9..=9));
        if ctx.central_charge_key_form(&p, &v).unwrap() != ctx.central_charge(&p, &v) {
            failures += 1;
        }
    }
    CheckResult::new("central_charge_key_identity", samples, failures, "")
}

/// Oracle, twist matrix and isotropic-pair closed form agree per class.
pub fn check_map_agreement(ctx: &K3Context, classes: &[SphericalClass]) -> CheckResult {
    let mut failures = 0usize;
    for class in classes {
        let twist = twist_moebius(class, ctx);
        let oracle = LatticeMap::reflection(class.delta(), ctx)
            .and_then(|m| induced_map_oracle(&m, ctx))
            .map(|m| m.to_moebius());
        let closed = ctx
            .twist_on_skyscraper(class.delta())
            .and_then(|v| isotropic_pair_map(&v, &v, ctx));
        let ok = oracle.as_ref() == Ok(&twist) && closed.as_ref() == Ok(&twist);
        if !ok {
            failures += 1;
        }
    }
    CheckResult::new(
        "moebius_oracle_agreement",
        classes.len(),
        failures,
        "twist coefficient confirmed as 1/(d r^2)",
    )
}

/// Squared twists are the identity and fixed points sit at spherical points.
pub fn check_involution_fixed_points(ctx: &K3Context, classes: &[SphericalClass]) -> CheckResult {
    let mut failures = 0usize;
    for class in classes {
        let m = twist_moebius(class, ctx);
        let ok = m.compose(&m).is_identity()
            && m.fixed_point(ctx).as_ref() == Some(class.point());
        if !ok {
            failures += 1;
        }
    }
    CheckResult::new("twist_involution_fixed_point", classes.len(), failures, "")
}

/// Exact cross-ratio invariance plus floating distance invariance per map.
pub fn check_isometry(
    ctx: &K3Context,
    classes: &[SphericalClass],
    tuples_per_map: usize,
    seed: u64,
    tolerance: f64,
) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut population = 0usize;
    let mut failures = 0usize;
    let maps: Vec<_> = classes.iter().map(|c| twist_moebius(c, ctx)).collect();
    for m in &maps {
        let mut done = 0usize;
        while done < tuples_per_map {
            let ps = [
                rand_point(&mut rng),
                rand_point(&mut rng),
                rand_point(&mut rng),
                rand_point(&mut rng),
            ];
            let zs = ps.each_ref().map(HPoint::to_qcomplex);
            let Some(before) = cross_ratio(&zs[0], &zs[1], &zs[2], &zs[3], ctx) else {
                continue; // coincident points, resample
            };
            done += 1;
            population += 1;
            let imgs = ps.each_ref().map(|p| m.apply(p, ctx));
            let ws = imgs.each_ref().map(HPoint::to_qcomplex);
            let after = cross_ratio(&ws[0], &ws[1], &ws[2], &ws[3], ctx);
            let d0 = hyp_distance(&ps[0], &ps[1], ctx);
            let d1 = hyp_distance(&imgs[0], &imgs[1], ctx);
            let ok = after.as_ref() == Some(&before)
                && (d0 - d1).abs() <= tolerance * d0.max(1.0);
            if !ok {
                failures += 1;
            }
        }
    }
    CheckResult::new("isometry_cross_ratio_distance", population, failures, "")
}

/// Walls: four marked points vanish exactly and the zero locus matches the
/// geodesic built from the quadratic's coefficients.
pub fn check_wall_four_points(
    ctx: &K3Context,
    classes: &[SphericalClass],
    isotropic: &[MukaiVector],
) -> CheckResult {
    let mut population = 0usize;
    let mut failures = 0usize;
    for class in classes {
        let a = class.delta();
        for e in isotropic {
            population += 1;
            let w = wall(ctx, a, e).expect("valid wall inputs");
            let mut ok = wall_pair(ctx, e, a).as_ref() == Ok(&w.geodesic);
            if let Some(m) = &w.marked {
                for (x, t) in [
                    (m.alpha_e.clone(), Rat::zero()),
                    (m.x_e.clone(), Rat::zero()),
                    (m.p_a.x().clone(), m.p_a.t().clone()),
                    (m.q.x().clone(), m.q.t().clone()),
                ] {
                    ok &= n_ae_at(ctx, a, e, &x, &t).unwrap().is_zero();
                }
                ok &= w.geodesic.contains(&m.p_a, ctx) && w.geodesic.contains(&m.q, ctx);
            } else {
                ok &= matches!(w.wall_type, WallType::Vertical);
            }
            if !ok {
                failures += 1;
            }
        }
    }
    CheckResult::new("wall_four_points_geodesic", population, failures, "")
}

/// Type classification agrees with the direct ordering of the four abscissae.
pub fn check_wall_ordering(
    ctx: &K3Context,
    classes: &[SphericalClass],
    isotropic: &[MukaiVector],
) -> CheckResult {
    let mut population = 0usize;
    let mut failures = 0usize;
    for class in classes {
        let a = class.delta();
        let slope_a = class.slope();
        for e in isotropic {
            population += 1;
            let ty = classify(ctx, a, e).expect("valid wall inputs");
            let w = wall(ctx, a, e).expect("valid wall inputs");
            let ok = match (ty, &w.marked) {
                (WallType::Vertical, None) => e.slope().unwrap() == slope_a,
                (WallType::TypeI, Some(m)) => {
                    if m.x_e > slope_a {
                        m.alpha_e < slope_a && slope_a <= m.alpha_a && m.alpha_a < m.x_e
                    } else {
                        m.alpha_e > slope_a && slope_a >= m.alpha_a && m.alpha_a > m.x_e
                    }
                }
                (WallType::TypeII, Some(m)) => {
                    if m.x_e > slope_a {
                        m.alpha_e < m.alpha_a && m.alpha_a < slope_a && slope_a < m.x_e
                    } else {
                        m.alpha_e > m.alpha_a && m.alpha_a > slope_a && slope_a > m.x_e
                    }
                }
                _ => false,
            };
            if !ok {
                failures += 1;
            }
        }
    }
    CheckResult::new("wall_type_ordering", population, failures, "")
}

/// Diameter bound on every type II pair.
pub fn check_diameter_bound(
    ctx: &K3Context,
    classes: &[SphericalClass],
    isotropic: &[MukaiVector],
) -> CheckResult {
    let mut population = 0usize;
    let mut failures = 0usize;
    for class in classes {
        for e in isotropic {
            if classify(ctx, class.delta(), e) != Ok(WallType::TypeII) {
                continue;
            }
            population += 1;
            match diameter_and_bound(ctx, class.delta(), e) {
                Ok(rep) if rep.holds => {}
                _ => failures += 1,
            }
        }
    }
    CheckResult::new("wall_diameter_bound", population, failures, "")
}

/// Region containment for the configured targets, sampling each segment.
pub fn check_region_containment(
    ctx: &K3Context,
    targets: &[MukaiVector],
    r_a_max: i64,
    samples: usize,
    which: RegionDiameter,
) -> CheckResult {
    let mut population = 0usize;
    let mut failures = 0usize;
    let mut notes = Vec::new();
    for v0 in targets {
        let rep = wall_containment_check(ctx, v0, r_a_max, samples, which)
            .expect("valid isotropic target");
        population += rep.walls_checked;
        failures += rep.violations.len();
        notes.push(format!(
            "v0={v0}: B_derived={}, B_printed={}, printed_lt_derived={}, violations={}",
            rep.b_derived,
            rep.b_printed,
            rep.printed_lt_derived,
            rep.violations.len()
        ));
    }
    let name = match which {
        RegionDiameter::Derived => "region_containment",
        RegionDiameter::Printed => "region_containment_printed_b",
    };
    CheckResult::new(name, population, failures, notes.join("; "))
}

/// Large-volume certificates for every enumerated primitive isotropic class.
pub fn check_large_volume(ctx: &K3Context, r_max: i64, n_max: i64) -> CheckResult {
    let targets = enumerate_isotropic(ctx, r_max, n_max);
    let mut failures = 0usize;
    for v0 in &targets {
        match walls::large_volume_path(ctx, v0) {
            Ok(p) if p.certificate => {}
            _ => failures += 1,
        }
    }
    CheckResult::new("large_volume_certificates", targets.len(), failures, "")
}

/// Spherical-point scan of the twist-image disks; interior hits are failures.
/// The larger printed disk is scanned as a reported experiment: its interior
/// hits only count when `count_printed` is set.
pub fn check_disk_scan(
    ctx: &K3Context,
    classes: &[SphericalClass],
    scan_rank_bound: i64,
    count_printed: bool,
) -> (CheckResult, CheckResult) {
    let mut corrected_failures = 0usize;
    let mut boundary_touches = 0usize;
    let mut printed_inside = 0usize;
    for class in classes {
        let scan = scan_spherical_against_disk(ctx, &disk_d(class), scan_rank_bound)
            .expect("window never empty");
        corrected_failures += scan.inside.len();
        boundary_touches += scan.on_boundary.len();
        let printed = scan_spherical_against_disk(ctx, &disk_d_printed(class), scan_rank_bound)
            .expect("window never empty");
        printed_inside += printed.inside.len();
    }
    let corrected = CheckResult::new(
        "disk_no_spherical_inside",
        classes.len(),
        corrected_failures,
        format!("boundary tangencies: {boundary_touches}"),
    );
    let printed = CheckResult::new(
        "disk_printed_scan",
        classes.len(),
        if count_printed { printed_inside } else { 0 },
        format!("interior spherical points in printed disks: {printed_inside}"),
    );
    (corrected, printed)
}

/// Group laws, monodromy homomorphism and both trivial actions on seeded
/// random words over a five-letter alphabet.
pub fn check_deck_laws(ctx: &K3Context, words: usize, seed: u64) -> CheckResult {
    let d = ctx.d().to_i64().expect("desk-scale degree");
    let alphabet: Vec<MukaiVector> =
        (0..5).map(|n| MukaiVector::new(1, n, d * n * n + 1)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rand_word = |max_len: usize| {
        let len = rng.gen_range(0..=max_len);
        let letters = (0..len)
            .map(|_| {
                let which = rng.gen_range(0..=5usize);
                let exp = loop {
                    let e = rng.gen_range(-3i64..=3);
                    if e != 0 {
                        break e;
                    }
                };
                if which == 5 {
                    (LoopGen::Central, exp)
                } else {
                    (LoopGen::spherical(&alphabet[which]), exp)
                }
            })
            .collect();
        LoopWord { letters }
    };
    let mut failures = 0usize;
    let probe = MukaiVector::new(1, 2, 3);
    for _ in 0..words {
        let u = rand_word(8);
        let v = rand_word(8);
        let w = rand_word(8);
        let mut ok = u.concat(&v).concat(&w).reduce() == u.concat(&v.concat(&w)).reduce();
        ok &= u.concat(&u.inverse()).is_empty_word();
        ok &= u.reduce().reduce() == u.reduce();
        ok &= monodromy(&u.concat(&v)) == monodromy(&u).concat(&monodromy(&v));
        let dw = monodromy(&u);
        ok &= cohomology_action(ctx, &dw, &probe).expect("alphabet is spherical") == probe;
        ok &= halfplane_action(ctx, &dw).expect("alphabet is spherical").is_identity();
        if !ok {
            failures += 1;
        }
    }
    CheckResult::new("deck_group_laws", words, failures, "")
}

/// Runs the whole battery for one configuration.
pub fn run_verify(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let ctx = K3Context::new(cfg.d)?;
    let r_small = cfg.rmax.min(15);
    let classes = spherical_population(&ctx, r_small, 2);
    let isotropic = enumerate_isotropic(&ctx, r_small, 2 * r_small);
    let default_targets = vec![
        MukaiVector::new(1, 0, 0),
        MukaiVector::new(1, 1, cfg.d),
    ];
    let targets = match &cfg.v0_override {
        Some(v0) => vec![v0.clone()],
        None => default_targets,
    };
    let which = if cfg.printed_b { RegionDiameter::Printed } else { RegionDiameter::Derived };

    let jobs: Vec<Box<dyn FnOnce() -> Vec<CheckResult> + Send>> = vec![
        {
            let ctx = ctx.clone();
            let rmax = cfg.rmax;
            Box::new(move || vec![check_lattice_reflections(&ctx, rmax, 2 * rmax)])
        },
        {
            let ctx = ctx.clone();
            let seed = cfg.seed;
            Box::new(move || vec![check_central_charge_identity(&ctx, 2000, seed)])
        },
        {
            let ctx = ctx.clone();
            let classes = classes.clone();
            Box::new(move || {
                vec![
                    check_map_agreement(&ctx, &classes),
                    check_involution_fixed_points(&ctx, &classes),
                ]
            })
        },
        {
            let ctx = ctx.clone();
            let classes = classes.clone();
            let (seed, tol) = (cfg.salted_seed(1), cfg.tolerance);
            Box::new(move || {
                let capped = &classes[..classes.len().min(24)];
                vec![check_isometry(&ctx, capped, 50, seed, tol)]
            })
        },
        {
            let ctx = ctx.clone();
            let classes = classes.clone();
            let isotropic = isotropic.clone();
            Box::new(move || {
                vec![
                    check_wall_four_points(&ctx, &classes, &isotropic),
                    check_wall_ordering(&ctx, &classes, &isotropic),
                    check_diameter_bound(&ctx, &classes, &isotropic),
                ]
            })
        },
        {
            let ctx = ctx.clone();
            let r_a_max = cfg.rmax.min(15);
            Box::new(move || {
                vec![check_region_containment(&ctx, &targets, r_a_max, 64, which)]
            })
        },
        {
            let ctx = ctx.clone();
            Box::new(move || vec![check_large_volume(&ctx, 10, 20)])
        },
        {
            let ctx = ctx.clone();
            let classes = classes.clone();
            let (bound, count_printed) = (cfg.rmax.max(30), cfg.printed_disk);
            Box::new(move || {
                let small: Vec<_> = classes
                    .iter()
                    .filter(|c| c.rank() <= &BigInt::from(10))
                    .cloned()
                    .collect();
                let (a, b) = check_disk_scan(&ctx, &small, bound, count_printed);
                vec![a, b]
            })
        },
        {
            let ctx = ctx.clone();
            let seed = cfg.salted_seed(2);
            Box::new(move || vec![check_deck_laws(&ctx, 2000, seed)])
        },
    ];

    let pool = thread_pool()?;
    let mut results: Vec<CheckResult> = pool.install(|| {
        use rayon::prelude::*;
        jobs.into_par_iter().flat_map_iter(|job| job()).collect()
    });
    results.sort_by(|a, b| a.check.cmp(&b.check));
    Ok(results)
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var("K3STAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?)
}

pub fn total_failures(results: &[CheckResult]) -> usize {
    results.iter().map(|r| r.failures).sum()
}

pub fn report_json(cfg: &VerifyConfig, results: &[CheckResult]) -> Value {
    json!({
        "d": cfg.d,
        "rmax": cfg.rmax,
        "seed": cfg.seed,
        "paper_printed_b": cfg.printed_b,
        "paper_printed_disk": cfg.printed_disk,
        "checks": results.iter().map(|r| json!({
            "check": r.check,
            "population": r.population,
            "failures": r.failures,
            "note": r.note,
        })).collect::<Vec<_>>(),
        "failures_total": total_failures(results),
        "ok": total_failures(results) == 0,
    })
}
