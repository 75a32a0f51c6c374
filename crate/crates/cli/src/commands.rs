//! Subcommand implementations. Each returns the process exit code: 0 on
//! success, 1 when a verification ran and failed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use serde_json::{json, Value};

use k3stab_core::deckgroup::{halfplane_action, monodromy, LoopGen, LoopWord};
use k3stab_core::halfplane::twist_moebius;
use k3stab_core::lattice::{K3Context, MukaiVector};
use k3stab_core::spherical::enumerate_spherical;
use k3stab_core::walls::{
    disk_d, disk_d_printed, disk_membership, large_volume_path, region_diameter, region_r_with,
    scan_spherical_against_disk, wall, wall_containment_check, DiskMembership, RegionDiameter,
};

use crate::cli::*;
use crate::parse::*;
use crate::plot::{render, PlotConfig, PlotKind};
use crate::verify::{report_json, run_verify, total_failures, VerifyConfig};

/// Writes to `--out` or stdout.
fn emit(global: &GlobalArgs, content: &str) -> Result<()> {
    match &global.out {
        Some(path) => std::fs::write(path, content).with_context(|| format!("writing {path}")),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn emit_json(global: &GlobalArgs, value: &Value) -> Result<()> {
    emit(global, &format!("{}\n", serde_json::to_string_pretty(value)?))
}

fn ctx_of(global: &GlobalArgs) -> Result<K3Context> {
    K3Context::new(global.d).map_err(|e| anyhow!("{e}"))
}

fn which_b(global: &GlobalArgs) -> RegionDiameter {
    if global.paper_printed_b {
        RegionDiameter::Printed
    } else {
        RegionDiameter::Derived
    }
}

pub fn spherical_enum(global: &GlobalArgs, args: &SphericalEnumArgs) -> Result<i32> {
    let ctx = ctx_of(global)?;
    let lo = parse_rational(&args.xmin)?;
    let hi = parse_rational(&args.xmax)?;
    let classes = enumerate_spherical(&ctx, global.rmax, (&lo, &hi))?;
    if global.format == "csv" {
        let mut csv = String::from("r,n,s,x,t\n");
        for c in &classes {
            let v = c.delta();
            let _ = writeln!(csv, "{},{},{},{},{}", v.r, v.n, v.s, c.point().x(), c.point().t());
        }
        emit(global, &csv)?;
    } else {
        let rows: Vec<Value> = classes
            .iter()
            .map(|c| {
                json!({
                    "delta": vector_json(c.delta()),
                    "x": rat_json(c.point().x()),
                    "t": rat_json(c.point().t()),
                })
            })
            .collect();
        emit_json(
            global,
            &json!({ "d": global.d, "rmax": global.rmax, "count": rows.len(), "classes": rows }),
        )?;
    }
    Ok(0)
}

pub fn map_twist(global: &GlobalArgs, args: &MapTwistArgs) -> Result<i32> {
    let ctx = ctx_of(global)?;
    let delta = parse_vector(&args.delta)?;
    let class = k3stab_core::spherical::SphericalClass::new(delta, &ctx)?;
    let m = twist_moebius(&class, &ctx);
    let mut out = moebius_json(&m);
    let obj = out.as_object_mut().expect("moebius_json returns an object");
    obj.insert("d".into(), json!(global.d));
    obj.insert("delta".into(), vector_json(class.delta()));
    obj.insert(
        "fixed_point".into(),
        m.fixed_point(&ctx).map(|p| point_json(&p)).unwrap_or(Value::Null),
    );
    if let Some(xt) = &args.apply {
        let p = parse_point(&xt[0], &xt[1])?;
        obj.insert("applied".into(), point_json(&m.apply(&p, &ctx)));
    }
    emit_json(global, &out)?;
    Ok(0)
}

fn wall_json(ctx: &K3Context, a: &MukaiVector, e: &MukaiVector) -> Result<Value> {
    let w = wall(ctx, a, e)?;
    Ok(json!({
        "A": vector_json(a),
        "E": vector_json(e),
        "wall_type": format!("{:?}", w.wall_type),
        "geodesic": geodesic_json(&w.geodesic),
        "marked": w.marked.as_ref().map(|m| json!({
            "alpha_e": rat_json(&m.alpha_e),
            "x_e": rat_json(&m.x_e),
            "alpha_a": rat_json(&m.alpha_a),
            "p_a": point_json(&m.p_a),
            "q": point_json(&m.q),
        })).unwrap_or(Value::Null),
    }))
}

pub fn walls_show(global: &GlobalArgs, args: &WallsShowArgs) -> Result<i32> {
    let ctx = ctx_of(global)?;
    let a = parse_vector(&args.a)?;
    let e = parse_vector(&args.e)?;
    let mut v = wall_json(&ctx, &a, &e)?;
    v.as_object_mut().unwrap().insert("d".into(), json!(global.d));
    emit_json(global, &v)?;
    Ok(0)
}

pub fn walls_scan(global: &GlobalArgs, args: &WallsScanArgs) -> Result<i32> {
    let ctx = ctx_of(global)?;
    let e = parse_vector(&args.e)?;
    let e_slope = e.slope().ok_or_else(|| anyhow!("scan target needs positive rank"))?;
    let lo = &e_slope - k3stab_core::rat_int(2);
    let hi = &e_slope + k3stab_core::rat_int(2);
    let classes = enumerate_spherical(&ctx, global.rmax, (&lo, &hi))?;
    let walls: Vec<Value> = classes
        .iter()
        .map(|c| wall_json(&ctx, c.delta(), &e))
        .collect::<Result<_>>()?;
    emit_json(
        global,
        &json!({ "d": global.d, "E": vector_json(&e), "count": walls.len(), "walls": walls }),
    )?;
    if let Some(svg_path) = &args.svg {
        let cfg = PlotConfig {
            d: global.d,
            rmax: global.rmax,
            xmin: lo,
            xmax: hi,
            kind: PlotKind::Walls,
            a: None,
            e: Some(e),
            v0: None,
            printed_b: global.paper_printed_b,
            printed_disk: global.paper_printed_disk,
        };
        let (svg, csv) = render(&cfg)?;
        std::fs::write(svg_path, svg).with_context(|| format!("writing {svg_path}"))?;
        std::fs::write(csv_twin_path(svg_path), csv)?;
    }
    Ok(0)
}

/// The CSV twin lands next to the SVG with the extension swapped.
pub fn csv_twin_path(svg_path: &str) -> String {
    match svg_path.strip_suffix(".svg") {
        Some(stem) => format!("{stem}.csv"),
        None => format!("{svg_path}.csv"),
    }
}

pub fn region(global: &GlobalArgs, args: &RegionArgs) -> Result<i32> {
    let ctx = ctx_of(global)?;
    let v0 = parse_vector(&args.v0)?;
    let which = which_b(global);
    let region = region_r_with(&ctx, &v0, which)?;
    let mut out = json!({
        "d": global.d,
        "v0": vector_json(&v0),
        "b_used": rat_json(&region_diameter(&ctx, &v0, which)),
        "b_derived": rat_json(&region_diameter(&ctx, &v0, RegionDiameter::Derived)),
        "b_printed": rat_json(&region_diameter(&ctx, &v0, RegionDiameter::Printed)),
        "center_x": rat_json(&region.center_x),
        "half_diameter": rat_json(&region.half_diameter),
        "strip_top_t": rat_json(&region.strip_top_t),
    });
    let mut exit = 0;
    if args.check {
        let rep = wall_containment_check(&ctx, &v0, global.rmax, args.samples, which)?;
        if !rep.violations.is_empty() {
            exit = 1;
        }
        out.as_object_mut().unwrap().insert(
            "check".into(),
            json!({
                "walls_checked": rep.walls_checked,
                "samples_per_wall": rep.samples_per_wall,
                "printed_lt_derived": rep.printed_lt_derived,
                "violations": rep.violations.iter().map(|v| json!({
                    "A": vector_json(&v.a),
                    "witness": point_json(&v.witness),
                })).collect::<Vec<_>>(),
            }),
        );
    }
    emit_json(global, &out)?;
    Ok(exit)
}

pub fn path(global: &GlobalArgs, args: &PathArgs) -> Result<i32> {
    let ctx = ctx_of(global)?;
    let v0 = parse_vector(&args.v0)?;
    let p = large_volume_path(&ctx, &v0)?;
    let b = region_diameter(&ctx, &v0, RegionDiameter::Derived);
    let cutoff = v0.slope().expect("positive rank") - &b;
    emit_json(
        global,
        &json!({
            "d": global.d,
            "v0": vector_json(&v0),
            "cutoff": rat_json(&cutoff),
            "base": point_json(&p.base),
            "ray": { "x": rat_json(&p.ray_x), "t_min": rat_json(&p.ray_t_min) },
            "certificate": p.certificate,
        }),
    )?;
    Ok(if p.certificate { 0 } else { 1 })
}

pub fn disk(global: &GlobalArgs, args: &DiskArgs) -> Result<i32> {
    let ctx = ctx_of(global)?;
    let a = parse_vector(&args.a)?;
    let class = k3stab_core::spherical::SphericalClass::new(a, &ctx)?;
    let exact = disk_d(&class);
    let printed = disk_d_printed(&class);
    let active = if global.paper_printed_disk { &printed } else { &exact };
    let mut out = json!({
        "d": global.d,
        "A": vector_json(class.delta()),
        "tangent_x": rat_json(&active.tangent_x),
        "top_t": rat_json(&active.top_t),
        "exact_top_t": rat_json(&exact.top_t),
        "printed_top_t": rat_json(&printed.top_t),
        "p_a_membership": membership_name(disk_membership(&class, class.point(), &ctx)),
    });
    let mut exit = 0;
    if let Some(bound) = args.scan_spherical {
        let scan_exact = scan_spherical_against_disk(&ctx, &exact, bound)?;
        let scan_printed = scan_spherical_against_disk(&ctx, &printed, bound)?;
        let counts_fail = if global.paper_printed_disk {
            !scan_printed.inside.is_empty()
        } else {
            !scan_exact.inside.is_empty()
        };
        if counts_fail {
            exit = 1;
        }
        out.as_object_mut().unwrap().insert(
            "scan".into(),
            json!({
                "rank_bound": bound,
                "exact": scan_json(&scan_exact),
                "printed": scan_json(&scan_printed),
            }),
        );
    }
    emit_json(global, &out)?;
    Ok(exit)
}

fn scan_json(scan: &k3stab_core::walls::DiskScanReport) -> Value {
    json!({
        "scanned": scan.scanned,
        "inside": scan.inside.iter().map(vector_json).collect::<Vec<_>>(),
        "on_boundary": scan.on_boundary.iter().map(vector_json).collect::<Vec<_>>(),
        "ok": scan.ok(),
    })
}

fn membership_name(m: DiskMembership) -> &'static str {
    match m {
        DiskMembership::InDPlus => "in_D_plus",
        DiskMembership::InD => "in_D",
        DiskMembership::InDPlusDual => "in_D_plus_dual",
        DiskMembership::Outside => "outside",
    }
}

pub fn deck_reduce(global: &GlobalArgs, args: &DeckReduceArgs) -> Result<i32> {
    let text = std::fs::read_to_string(&args.alphabet)
        .with_context(|| format!("reading {}", args.alphabet))?;
    let table: Value = serde_json::from_str(&text).context("alphabet must be JSON")?;
    let obj = table.as_object().ok_or_else(|| anyhow!("alphabet must be a JSON object"))?;
    let mut alphabet: BTreeMap<String, MukaiVector> = BTreeMap::new();
    let mut degree: Option<BigInt> = None;
    for (label, entry) in obj {
        if label == "g" {
            bail!("the label `g` is reserved for the central generator");
        }
        let (d, v) = alphabet_entry(entry)?;
        match &degree {
            Some(existing) if *existing != d => {
                bail!("alphabet mixes degrees {existing} and {d}")
            }
            None => degree = Some(d),
            _ => {}
        }
        alphabet.insert(label.clone(), v);
    }
    let degree = degree.ok_or_else(|| anyhow!("alphabet is empty"))?;
    let ctx = K3Context::new(degree)?;
    for (label, v) in &alphabet {
        if !ctx.is_spherical(v) {
            bail!("alphabet letter `{label}` = {v} is not spherical for d = {}", ctx.d());
        }
    }

    let mut letters = Vec::new();
    for (label, exp) in parse_word_tokens(&args.word)? {
        if label == "g" {
            letters.push((LoopGen::Central, exp));
        } else {
            let v = alphabet
                .get(&label)
                .ok_or_else(|| anyhow!("label `{label}` not in the alphabet"))?;
            letters.push((LoopGen::spherical(v), exp));
        }
    }
    let word = LoopWord { letters };
    let reduced = word.reduce();
    let deck = monodromy(&word);
    let reversed: BTreeMap<&MukaiVector, &String> =
        alphabet.iter().map(|(k, v)| (v, k)).collect();
    let letter_json = |gen: &LoopGen, exp: i64| -> Value {
        match gen {
            LoopGen::Central => json!(["g", exp]),
            LoopGen::Spherical(v) => {
                let label = reversed.get(v).map(|s| s.as_str()).unwrap_or("?");
                json!([label, exp])
            }
        }
    };
    let out = json!({
        "d": bigint_json(ctx.d()),
        "reduced": reduced.letters.iter().map(|(g, e)| letter_json(g, *e)).collect::<Vec<_>>(),
        "monodromy": {
            "letters": deck.letters.iter().map(|(v, e)| json!([vector_json(v), e])).collect::<Vec<_>>(),
            "shift2": deck.shift2,
        },
        "halfplane_action_identity": halfplane_action(&ctx, &deck)?.is_identity(),
    });
    emit_json(global, &out)?;
    Ok(0)
}

pub fn verify(global: &GlobalArgs, args: &VerifyArgs) -> Result<i32> {
    let cfg = VerifyConfig {
        d: global.d,
        rmax: global.rmax,
        seed: global.seed,
        tolerance: global.tolerance,
        printed_b: global.paper_printed_b,
        printed_disk: global.paper_printed_disk,
        v0_override: args.v0.as_deref().map(parse_vector).transpose()?,
    };
    let results = run_verify(&cfg)?;
    emit_json(global, &report_json(&cfg, &results))?;
    Ok(if total_failures(&results) == 0 { 0 } else { 1 })
}

pub fn plot(global: &GlobalArgs, args: &PlotArgs) -> Result<i32> {
    let cfg = PlotConfig {
        d: global.d,
        rmax: global.rmax,
        xmin: parse_rational(&args.xmin)?,
        xmax: parse_rational(&args.xmax)?,
        kind: PlotKind::parse(&args.what)?,
        a: args.a.as_deref().map(parse_vector).transpose()?,
        e: args.e.as_deref().map(parse_vector).transpose()?,
        v0: args.v0.as_deref().map(parse_vector).transpose()?,
        printed_b: global.paper_printed_b,
        printed_disk: global.paper_printed_disk,
    };
    let (svg, csv) = render(&cfg)?;
    let out = global
        .out
        .clone()
        .ok_or_else(|| anyhow!("plot needs --out <file.svg> for the figure and its CSV twin"))?;
    std::fs::write(&out, svg).with_context(|| format!("writing {out}"))?;
    std::fs::write(csv_twin_path(&out), csv)?;
    Ok(0)
}
