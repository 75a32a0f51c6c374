//! Deterministic figure emission.
//!
//! Every plot renders on a fixed 1000x600 canvas with an aspect-true linear
//! map from the configured x-window; heights come from `y = t/sqrt(d)`.
//! Exact values are converted to floats only inside the SVG writer, always
//! through the same fixed-precision formatter, so identical configurations
//! produce byte-identical files. Each figure has a CSV twin carrying the
//! exact rationals, and the CSV is what tests consume.

use anyhow::{bail, Result};
use num_traits::ToPrimitive;
use std::fmt::Write as _;

use k3stab_core::halfplane::Geodesic;
use k3stab_core::lattice::{K3Context, MukaiVector};
use k3stab_core::spherical::{enumerate_spherical, SphericalClass};
use k3stab_core::walls::{
    boundary_component, disk_d, disk_d_printed, region_r_with, wall, RegionDiameter,
};
use k3stab_core::Rat;

pub const CANVAS_W: f64 = 1000.0;
pub const CANVAS_H: f64 = 600.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Spherical,
    Boundary,
    Walls,
    Region,
    Disk,
}

impl PlotKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "spherical" => PlotKind::Spherical,
            "boundary" => PlotKind::Boundary,
            "walls" => PlotKind::Walls,
            "region" => PlotKind::Region,
            "disk" => PlotKind::Disk,
            _ => bail!("unknown plot kind `{s}` (spherical|boundary|walls|region|disk)"),
        })
    }
}

#[derive(Debug, Clone)]
pub struct PlotConfig {
    pub d: i64,
    pub rmax: i64,
    pub xmin: Rat,
    pub xmax: Rat,
    pub kind: PlotKind,
    pub a: Option<MukaiVector>,
    pub e: Option<MukaiVector>,
    pub v0: Option<MukaiVector>,
    pub printed_b: bool,
    pub printed_disk: bool,
}

struct Canvas {
    x0: f64,
    scale: f64,
    svg: String,
}

fn fmt(v: f64) -> String {
    format!("{v:.4}")
}

impl Canvas {
    fn new(xmin: &Rat, xmax: &Rat) -> Result<Self> {
        let x0 = xmin.to_f64().unwrap_or(f64::NAN);
        let x1 = xmax.to_f64().unwrap_or(f64::NAN);
        if x1.partial_cmp(&x0) != Some(std::cmp::Ordering::Greater) {
            bail!("empty x-window");
        }
        let scale = CANVAS_W / (x1 - x0);
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS_W}" height="{CANVAS_H}" viewBox="0 0 {CANVAS_W} {CANVAS_H}">"#
        );
        let _ = writeln!(svg, r#"<rect width="{CANVAS_W}" height="{CANVAS_H}" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<line x1="0" y1="{h}" x2="{CANVAS_W}" y2="{h}" stroke="black" stroke-width="1"/>"#,
            h = fmt(CANVAS_H)
        );
        Ok(Canvas { x0, scale, svg })
    }

    fn px(&self, x: f64) -> f64 {
        (x - self.x0) * self.scale
    }

    fn py(&self, y: f64) -> f64 {
        CANVAS_H - y * self.scale
    }

    fn dot(&mut self, x: f64, y: f64, fill: &str) {
        let _ = writeln!(
            self.svg,
            r#"<circle cx="{}" cy="{}" r="3" fill="{fill}"/>"#,
            fmt(self.px(x)),
            fmt(self.py(y))
        );
    }

    fn stroke(&mut self, x: f64, y_lo: f64, y_hi: f64, color: &str) {
        let _ = writeln!(
            self.svg,
            r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="{color}" stroke-width="2"/>"#,
            x0 = fmt(self.px(x)),
            y0 = fmt(self.py(y_lo)),
            y1 = fmt(self.py(y_hi))
        );
    }

    /// Upper half of the circle with feet `x - r` and `x + r`.
    fn arc(&mut self, center: f64, radius: f64, color: &str) {
        let r = radius * self.scale;
        let _ = writeln!(
            self.svg,
            r#"<path d="M {x0} {y} A {r} {r} 0 0 1 {x1} {y}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            x0 = fmt(self.px(center - radius)),
            x1 = fmt(self.px(center + radius)),
            y = fmt(self.py(0.0)),
            r = fmt(r),
        );
    }

    fn half_disk(&mut self, center: f64, radius: f64, fill: &str) {
        let r = radius * self.scale;
        let _ = writeln!(
            self.svg,
            r#"<path d="M {x0} {y} A {r} {r} 0 0 1 {x1} {y} Z" fill="{fill}" stroke="none"/>"#,
            x0 = fmt(self.px(center - radius)),
            x1 = fmt(self.px(center + radius)),
            y = fmt(self.py(0.0)),
            r = fmt(r),
        );
    }

    fn band(&mut self, y_top: f64, fill: &str) {
        let _ = writeln!(
            self.svg,
            r#"<rect x="0" y="{y}" width="{CANVAS_W}" height="{h}" fill="{fill}"/>"#,
            y = fmt(self.py(y_top)),
            h = fmt(y_top * self.scale),
        );
    }

    fn circle_outline(&mut self, cx: f64, cy: f64, radius: f64, color: &str) {
        let _ = writeln!(
            self.svg,
            r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            fmt(self.px(cx)),
            fmt(self.py(cy)),
            fmt(radius * self.scale)
        );
    }

    fn finish(mut self) -> String {
        self.svg.push_str("</svg>\n");
        self.svg
    }
}

fn xy(ctx: &K3Context, x: &Rat, t: &Rat) -> (f64, f64) {
    (
        x.to_f64().unwrap_or(f64::NAN),
        t.to_f64().unwrap_or(f64::NAN) / ctx.sqrt_d_f64(),
    )
}

fn spherical_rows(classes: &[SphericalClass]) -> String {
    let mut csv = String::from("r,n,s,x,t\n");
    for c in classes {
        let v = c.delta();
        let _ = writeln!(csv, "{},{},{},{},{}", v.r, v.n, v.s, c.point().x(), c.point().t());
    }
    csv
}

/// Renders one figure; returns `(svg, csv)`.
pub fn render(cfg: &PlotConfig) -> Result<(String, String)> {
    let ctx = K3Context::new(cfg.d)?;
    let mut canvas = Canvas::new(&cfg.xmin, &cfg.xmax)?;
    let classes = enumerate_spherical(&ctx, cfg.rmax.max(1), (&cfg.xmin, &cfg.xmax))?;

    let csv = match cfg.kind {
        PlotKind::Spherical => {
            for c in &classes {
                let (x, y) = xy(&ctx, c.point().x(), c.point().t());
                canvas.dot(x, y, "crimson");
            }
            spherical_rows(&classes)
        }
        PlotKind::Boundary => {
            for c in &classes {
                let b = boundary_component(c, &ctx);
                let (x, y_top) = xy(&ctx, &b.segment.x, &b.segment.top_t);
                canvas.stroke(x, 0.0, y_top, "steelblue");
                canvas.dot(x, y_top, "crimson");
            }
            spherical_rows(&classes)
        }
        PlotKind::Walls => {
            let e = cfg.e.clone().ok_or_else(|| anyhow::anyhow!("walls plot needs --E"))?;
            let mut csv = String::from("r_A,n_A,s_A,type,kind,center_or_x,radius_sq,alpha_e,x_e\n");
            for c in &classes {
                let w = wall(&ctx, c.delta(), &e)?;
                let v = c.delta();
                match (&w.geodesic, &w.marked) {
                    (Geodesic::Vertical { x }, _) => {
                        let xf = x.to_f64().unwrap_or(f64::NAN);
                        canvas.stroke(xf, 0.0, CANVAS_H / canvas.scale, "darkorange");
                        let _ = writeln!(
                            csv,
                            "{},{},{},{:?},vertical,{x},,,",
                            v.r, v.n, v.s, w.wall_type
                        );
                    }
                    (Geodesic::Semicircle { center, radius_sq }, Some(m)) => {
                        let cf = center.to_f64().unwrap_or(f64::NAN);
                        let rf = radius_sq.to_f64().unwrap_or(f64::NAN).sqrt();
                        canvas.arc(cf, rf, "darkorange");
                        let _ = writeln!(
                            csv,
                            "{},{},{},{:?},semicircle,{center},{radius_sq},{},{}",
                            v.r, v.n, v.s, w.wall_type, m.alpha_e, m.x_e
                        );
                    }
                    _ => {}
                }
            }
            csv
        }
        PlotKind::Region => {
            let v0 = cfg.v0.clone().ok_or_else(|| anyhow::anyhow!("region plot needs --v0"))?;
            let which = if cfg.printed_b { RegionDiameter::Printed } else { RegionDiameter::Derived };
            let region = region_r_with(&ctx, &v0, which)?;
            let strip_y = region.strip_top_t.to_f64().unwrap_or(f64::NAN) / ctx.sqrt_d_f64();
            canvas.band(strip_y, "lightsteelblue");
            let cx = region.center_x.to_f64().unwrap_or(f64::NAN);
            let h = region.half_diameter.to_f64().unwrap_or(f64::NAN);
            canvas.half_disk(cx - h, h, "lightsteelblue");
            canvas.half_disk(cx + h, h, "lightsteelblue");
            format!(
                "r,n,s,center_x,half_diameter,strip_top_t\n{},{},{},{},{},{}\n",
                v0.r, v0.n, v0.s, region.center_x, region.half_diameter, region.strip_top_t
            )
        }
        PlotKind::Disk => {
            let a = cfg.a.clone().ok_or_else(|| anyhow::anyhow!("disk plot needs --A"))?;
            let class = SphericalClass::new(a, &ctx)?;
            let disk = if cfg.printed_disk { disk_d_printed(&class) } else { disk_d(&class) };
            let tx = disk.tangent_x.to_f64().unwrap_or(f64::NAN);
            let top_y = disk.top_t.to_f64().unwrap_or(f64::NAN) / ctx.sqrt_d_f64();
            canvas.circle_outline(tx, top_y / 2.0, top_y / 2.0, "seagreen");
            for c in &classes {
                let (x, y) = xy(&ctx, c.point().x(), c.point().t());
                canvas.dot(x, y, "crimson");
            }
            let mut csv = format!(
                "tangent_x,top_t\n{},{}\n",
                disk.tangent_x, disk.top_t
            );
            csv.push_str(&spherical_rows(&classes));
            csv
        }
    };
    Ok((canvas.finish(), csv))
}
