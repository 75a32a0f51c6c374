//! Wall geodesics, their marked points and type, the diameter bound, the
//! bounded region that contains every boundary segment, large-volume rays,
//! and the tangent disks where twisted skyscrapers stay stable.
//!
//! For a spherical class `A` and a positive-rank isotropic class `E`, the
//! wall is the vanishing locus of
//!
//! ```text
//! N(x, y) = d (r_A n_E - r_E n_A) y^2
//!           + d lam_E lam_A (n_E/r_E - n_A/r_A) - lam_E / r_A
//! ```
//!
//! with `lam_E = n_E - r_E x`, `lam_A = n_A - r_A x`, `y^2 = t^2/d`. The
//! quadratic has equal `x^2` and `y^2` coefficients and no cross term, so the
//! locus is a half-plane geodesic: the semicircle with feet `alpha_E` and
//! `n_E/r_E` (or the vertical line `x = n_E/r_E` when the slopes agree).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::halfplane::{Geodesic, HPoint};
use crate::lattice::{K3Context, MukaiVector};
use crate::ratio::{rat, rat_int, Rat};
use crate::spherical::{enumerate_spherical, SphericalClass};
use crate::Result;

/// Configuration type of the four marked points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WallType {
    /// `|slope gap|^2 >= 1/(d r_A^2)`; the segment stays below the strip top.
    TypeI,
    /// `0 < |slope gap|^2 < 1/(d r_A^2)`; the segment can leave the strip.
    TypeII,
    /// Equal slopes: the wall is the vertical line `x = n_E/r_E`.
    Vertical,
    /// Proportional central charges (only reachable through the generic
    /// pair interface).
    Degenerate,
}

/// The four marked points of a semicircular wall. `p_a` and `q` share the
/// height `t = 1/r_A`; `alpha_e` and `x_e` are the feet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedPoints {
    pub alpha_e: Rat,
    pub x_e: Rat,
    pub alpha_a: Rat,
    pub p_a: HPoint,
    pub q: HPoint,
}

/// A wall geodesic with its classification and, in the semicircle case, the
/// marked points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallDescriptor {
    pub geodesic: Geodesic,
    pub wall_type: WallType,
    pub marked: Option<MarkedPoints>,
}

fn check_wall_input(ctx: &K3Context, a: &MukaiVector, e: &MukaiVector) -> Result<MukaiVector> {
    if !ctx.is_isotropic(e) || !e.r.is_positive() || !e.is_primitive() {
        return Err(Error::BadVectors);
    }
    if !ctx.is_spherical(a) {
        return Err(Error::BadVectors);
    }
    Ok(crate::lattice::normalize_spherical_sign(a))
}

/// The defining quadratic at a half-plane point, exactly.
pub fn n_ae(ctx: &K3Context, a: &MukaiVector, e: &MukaiVector, p: &HPoint) -> Result<Rat> {
    n_ae_at(ctx, a, e, p.x(), p.t())
}

/// Same polynomial at an arbitrary `(x, t)`, boundary included.
pub fn n_ae_at(ctx: &K3Context, a: &MukaiVector, e: &MukaiVector, x: &Rat, t: &Rat) -> Result<Rat> {
    let a = check_wall_input(ctx, a, e)?;
    let d = ctx.d_rat();
    let ra = Rat::from_integer(a.r.clone());
    let na = Rat::from_integer(a.n.clone());
    let re = Rat::from_integer(e.r.clone());
    let ne = Rat::from_integer(e.n.clone());
    let lam_e = &ne - &re * x;
    let lam_a = &na - &ra * x;
    let y_sq = t * t / &d;
    let gap = &ne / &re - &na / &ra;
    Ok(&d * (&ra * &ne - &re * &na) * &y_sq + &d * &lam_e * &lam_a * &gap - &lam_e / &ra)
}

/// Classification by the exact slope-gap threshold `1/(d r_A^2)`; the
/// equality case counts as type I.
pub fn classify(ctx: &K3Context, a: &MukaiVector, e: &MukaiVector) -> Result<WallType> {
    let a = check_wall_input(ctx, a, e)?;
    let gap = e.slope().expect("rank checked positive") - a.slope().expect("spherical rank");
    if gap.is_zero() {
        return Ok(WallType::Vertical);
    }
    let d_ra_sq = Rat::from_integer(ctx.d() * &a.r * &a.r);
    if &gap * &gap >= d_ra_sq.recip() {
        Ok(WallType::TypeI)
    } else {
        Ok(WallType::TypeII)
    }
}

/// The wall of a (spherical, isotropic) pair with its marked points.
pub fn wall(ctx: &K3Context, a: &MukaiVector, e: &MukaiVector) -> Result<WallDescriptor> {
    let wall_type = classify(ctx, a, e)?;
    let a = check_wall_input(ctx, a, e)?;
    let slope_a = a.slope().expect("spherical rank");
    let x_e = e.slope().expect("rank checked positive");
    let t_a = Rat::new(BigInt::one(), a.r.clone());
    let p_a = HPoint::new(slope_a.clone(), t_a.clone())?;

    if wall_type == WallType::Vertical {
        return Ok(WallDescriptor {
            geodesic: Geodesic::Vertical { x: x_e },
            wall_type,
            marked: None,
        });
    }
    let gap = &x_e - &slope_a;
    let d_ra_sq = Rat::from_integer(ctx.d() * &a.r * &a.r);
    let shift = (d_ra_sq * &gap).recip();
    let alpha_e = &slope_a - &shift;
    let alpha_a = &x_e - &shift;
    let q = HPoint::new(alpha_a.clone(), t_a)?;

    let center = (&alpha_e + &x_e) / rat_int(2);
    let half = (&x_e - &alpha_e) / rat_int(2);
    let geodesic = Geodesic::Semicircle { center, radius_sq: &half * &half };
    debug_assert!(geodesic.contains(&p_a, ctx) && geodesic.contains(&q, ctx));
    Ok(WallDescriptor {
        geodesic,
        wall_type,
        marked: Some(MarkedPoints { alpha_e, x_e, alpha_a, p_a, q }),
    })
}

/// Diameter of a type-II wall against the bound `1/r_E + r_E/d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiameterReport {
    pub diameter: Rat,
    pub bound: Rat,
    pub holds: bool,
}

pub fn diameter_and_bound(
    ctx: &K3Context,
    a: &MukaiVector,
    e: &MukaiVector,
) -> Result<DiameterReport> {
    if classify(ctx, a, e)? != WallType::TypeII {
        return Err(Error::NotTypeII);
    }
    let w = wall(ctx, a, e)?;
    let m = w.marked.expect("type II walls are semicircles");
    let diameter = (&m.x_e - &m.alpha_e).abs();
    let re = Rat::from_integer(e.r.clone());
    let bound = re.recip() + &re / ctx.d_rat();
    let holds = diameter <= bound;
    Ok(DiameterReport { diameter, bound, holds })
}

/// A boundary component: the open-top slit under a spherical point, with the
/// abscissa of the isotropic class the twisted skyscraper lands on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundarySegment {
    pub segment: crate::spherical::ExcludedSegment,
    /// Abscissa of the lower endpoint, which is the associated point of the
    /// twisted skyscraper class; it coincides with the slit abscissa.
    pub base_x: Rat,
    /// Upper (excluded) endpoint, the spherical point itself.
    pub top: HPoint,
}

pub fn boundary_component(a: &SphericalClass, ctx: &K3Context) -> BoundarySegment {
    let twisted = ctx
        .twist_on_skyscraper(a.delta())
        .expect("spherical by construction");
    let base_x = twisted.slope().expect("twisted skyscraper has rank -r^2");
    debug_assert_eq!(base_x, a.slope());
    BoundarySegment {
        segment: crate::spherical::ExcludedSegment {
            x: a.slope(),
            top_t: a.point().t().clone(),
            top_closed: false,
        },
        base_x,
        top: a.point().clone(),
    }
}

/// The closed region that traps every boundary segment: the strip `t <= 1`
/// plus two disks of diameter `B` whose feet meet at `n/r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionR {
    pub strip_top_t: Rat,
    pub center_x: Rat,
    pub half_diameter: Rat,
}

/// Which diameter to use: the one the containment argument proves
/// (`1/r + r/d`), or the printed variant `1/d + r/d` kept for comparison
/// runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionDiameter {
    Derived,
    Printed,
}

pub fn region_diameter(ctx: &K3Context, v0: &MukaiVector, which: RegionDiameter) -> Rat {
    let r = Rat::from_integer(v0.r.clone());
    let d = ctx.d_rat();
    match which {
        RegionDiameter::Derived => r.recip() + &r / &d,
        RegionDiameter::Printed => d.recip() + &r / &d,
    }
}

pub fn region_r(ctx: &K3Context, v0: &MukaiVector) -> Result<RegionR> {
    region_r_with(ctx, v0, RegionDiameter::Derived)
}

pub fn region_r_with(
    ctx: &K3Context,
    v0: &MukaiVector,
    which: RegionDiameter,
) -> Result<RegionR> {
    if !ctx.is_isotropic(v0) || !v0.is_primitive() || !v0.r.is_positive() {
        return Err(Error::BadVector);
    }
    let b = region_diameter(ctx, v0, which);
    Ok(RegionR {
        strip_top_t: rat_int(1),
        center_x: v0.slope().expect("positive rank"),
        half_diameter: b / rat_int(2),
    })
}

impl RegionR {
    /// Exact membership: in the strip, or in one of the two tangent disks
    /// `(x - center_x -+ B/2)^2 + t^2/d <= (B/2)^2`.
    pub fn contains(&self, p: &HPoint, ctx: &K3Context) -> bool {
        if p.t() <= &self.strip_top_t {
            return true;
        }
        let rr = &self.half_diameter * &self.half_diameter;
        let t_part = p.t() * p.t() / ctx.d_rat();
        for sign in [1i64, -1] {
            let cx = &self.center_x + rat_int(sign) * &self.half_diameter;
            let dx = p.x() - &cx;
            if &dx * &dx + &t_part <= rr {
                return true;
            }
        }
        false
    }
}

/// Exact rational samples of the boundary segment carried by a wall: the arc
/// from `p(A)` down to the foot `alpha_E`, swept by chords through the other
/// foot. The samples include `p(A)` and exclude the feet.
pub fn sample_wall_segment(
    ctx: &K3Context,
    w: &WallDescriptor,
    a: &SphericalClass,
    samples: usize,
) -> Vec<HPoint> {
    let mut out = Vec::with_capacity(samples + 1);
    match (&w.geodesic, &w.marked) {
        (Geodesic::Vertical { x }, _) => {
            let top = a.point().t();
            for j in 1..=samples {
                let t = top * rat(j as i64, samples as i64 + 1);
                out.push(HPoint::new(x.clone(), t).expect("t > 0"));
            }
            out.push(a.point().clone());
        }
        (Geodesic::Semicircle { center, .. }, Some(m)) => {
            let d = ctx.d_rat();
            // chord through the foot (x_e, 0) with slope s hits the wall at
            // x = x_e - 2 d w / (d + s^2), t = -2 d w s / (d + s^2), w = x_e - center
            let wfoot = &m.x_e - center;
            let slope_pa = m.p_a.t() / (m.p_a.x() - &m.x_e);
            for j in 1..=samples {
                let s = &slope_pa * rat(j as i64, samples as i64 + 1);
                let den = &d + &s * &s;
                let x = &m.x_e - rat_int(2) * &d * &wfoot / &den;
                let t = -(rat_int(2) * &d * &wfoot * &s) / &den;
                out.push(HPoint::new(x, t).expect("interior of the upper arc"));
            }
            out.push(m.p_a.clone());
        }
        _ => {}
    }
    debug_assert!(out.iter().all(|p| w.geodesic.contains(p, ctx)));
    out
}

/// One wall that failed the containment check, with a witness sample.
#[derive(Debug, Clone)]
pub struct ContainmentViolation {
    pub a: MukaiVector,
    pub witness: HPoint,
}

/// Result of sweeping the boundary segments of every enumerated spherical
/// class against the region of `v0`.
#[derive(Debug, Clone)]
pub struct ContainmentReport {
    pub walls_checked: usize,
    pub samples_per_wall: usize,
    pub b_derived: Rat,
    pub b_printed: Rat,
    pub b_used: Rat,
    /// Set when the printed diameter is strictly smaller than the derived
    /// one (`r < d`), the regime where the printed region can fail.
    pub printed_lt_derived: bool,
    pub violations: Vec<ContainmentViolation>,
}

/// Samples every wall `W(A, v0)` with `r_A <= r_a_max` whose slit abscissa
/// lies within `|n_A/r_A - n/r| <= B + 1` (walls farther out are type I and
/// never leave the strip), and verifies each sample lies in the region.
pub fn wall_containment_check(
    ctx: &K3Context,
    v0: &MukaiVector,
    r_a_max: i64,
    samples: usize,
    which: RegionDiameter,
) -> Result<ContainmentReport> {
    let region = region_r_with(ctx, v0, which)?;
    let b_derived = region_diameter(ctx, v0, RegionDiameter::Derived);
    let b_printed = region_diameter(ctx, v0, RegionDiameter::Printed);
    let center = v0.slope().expect("positive rank");
    let margin = &b_derived + rat_int(1);
    let lo = &center - &margin;
    let hi = &center + &margin;
    let classes = enumerate_spherical(ctx, r_a_max, (&lo, &hi))?;
    let mut violations = Vec::new();
    for class in &classes {
        let w = wall(ctx, class.delta(), v0)?;
        for p in sample_wall_segment(ctx, &w, class, samples) {
            if !region.contains(&p, ctx) {
                violations.push(ContainmentViolation {
                    a: class.delta().clone(),
                    witness: p,
                });
            }
        }
    }
    Ok(ContainmentReport {
        walls_checked: classes.len(),
        samples_per_wall: samples,
        b_used: region_diameter(ctx, v0, which),
        printed_lt_derived: b_printed < b_derived,
        b_derived,
        b_printed,
        violations,
    })
}

/// A vertical large-volume ray to the left of the region, with its exact
/// disjointness certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LargeVolumePath {
    /// Base point `(a, 2)`: the integer abscissa just left of the cutoff
    /// `n/r - B`, at `t = 2` (so the squared volume form exceeds 2).
    pub base: HPoint,
    pub ray_x: Rat,
    pub ray_t_min: Rat,
    pub certificate: bool,
}

pub fn large_volume_path(ctx: &K3Context, v0: &MukaiVector) -> Result<LargeVolumePath> {
    let region = region_r(ctx, v0)?;
    let b = region_diameter(ctx, v0, RegionDiameter::Derived);
    let cutoff = &region.center_x - &b;
    let a = if cutoff.is_integer() {
        cutoff - rat_int(1)
    } else {
        cutoff.floor()
    };
    let t = rat_int(2);
    let base = HPoint::new(a.clone(), t.clone())?;
    // the whole ray {(a, t'): t' >= 2} misses the region: it sits above the
    // strip and left of both disks
    let above_strip = t > region.strip_top_t;
    let left_of_disks = a < &region.center_x - &b;
    let certificate = above_strip && left_of_disks;
    Ok(LargeVolumePath { base, ray_x: a, ray_t_min: t, certificate })
}

/// An open disk tangent to the boundary at `tangent_x` with top `(tangent_x,
/// top_t)`; membership is `d (x - tangent_x)^2 + t^2 < t * top_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiskD {
    pub tangent_x: Rat,
    pub top_t: Rat,
}

impl DiskD {
    pub fn contains(&self, p: &HPoint, ctx: &K3Context) -> bool {
        self.eval(p, ctx).is_negative()
    }

    pub fn on_boundary(&self, p: &HPoint, ctx: &K3Context) -> bool {
        self.eval(p, ctx).is_zero()
    }

    /// Negative inside, zero on the circle, positive outside.
    fn eval(&self, p: &HPoint, ctx: &K3Context) -> Rat {
        let dx = p.x() - &self.tangent_x;
        ctx.d_rat() * &dx * &dx + p.t() * p.t() - p.t() * &self.top_t
    }
}

/// The exact image of the `t > 1` half-strip under the twist map of `A`: the
/// open disk tangent at `n_A/r_A` with top `t = 1/r_A^2`. The top height is
/// degree-independent in `t`-coordinates; `d` only enters the membership
/// equation.
pub fn disk_d(a: &SphericalClass) -> DiskD {
    let r_sq = a.rank() * a.rank();
    DiskD {
        tangent_x: a.slope(),
        top_t: Rat::new(BigInt::one(), r_sq),
    }
}

/// The larger variant with top `t = 1/r_A`, kept for comparison scans; it
/// strictly contains the exact image disk once `r_A > 1`.
pub fn disk_d_printed(a: &SphericalClass) -> DiskD {
    DiskD {
        tangent_x: a.slope(),
        top_t: Rat::new(BigInt::one(), a.rank().clone()),
    }
}

/// Position of a point relative to the disk of `A` and the dual cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiskMembership {
    /// In the disk, left of the tangent abscissa.
    InDPlus,
    /// In the disk, on or right of the tangent abscissa.
    InD,
    /// Above the strip (`t > 1`) and right of the tangent abscissa.
    InDPlusDual,
    Outside,
}

pub fn disk_membership(a: &SphericalClass, p: &HPoint, ctx: &K3Context) -> DiskMembership {
    let disk = disk_d(a);
    if disk.contains(p, ctx) {
        if p.x() < &disk.tangent_x {
            DiskMembership::InDPlus
        } else {
            DiskMembership::InD
        }
    } else if p.t() > &rat_int(1) && p.x() > &disk.tangent_x {
        DiskMembership::InDPlusDual
    } else {
        DiskMembership::Outside
    }
}

/// Scan of enumerated spherical points against a disk: interior hits are
/// violations, exact boundary tangencies are reported separately.
#[derive(Debug, Clone)]
pub struct DiskScanReport {
    pub scanned: usize,
    pub inside: Vec<MukaiVector>,
    pub on_boundary: Vec<MukaiVector>,
}

impl DiskScanReport {
    pub fn ok(&self) -> bool {
        self.inside.is_empty()
    }
}

pub fn scan_spherical_against_disk(
    ctx: &K3Context,
    disk: &DiskD,
    r_bound: i64,
) -> Result<DiskScanReport> {
    // the disk spans less than one x-unit in either direction
    let lo = &disk.tangent_x - rat_int(1);
    let hi = &disk.tangent_x + rat_int(1);
    let classes = enumerate_spherical(ctx, r_bound, (&lo, &hi))?;
    let mut inside = Vec::new();
    let mut on_boundary = Vec::new();
    for c in &classes {
        if disk.contains(c.point(), ctx) {
            inside.push(c.delta().clone());
        } else if disk.on_boundary(c.point(), ctx) {
            on_boundary.push(c.delta().clone());
        }
    }
    Ok(DiskScanReport { scanned: classes.len(), inside, on_boundary })
}

/// No spherical point of rank at most `r_bound` lies in the open exact disk
/// of `A`.
pub fn no_spherical_inside(ctx: &K3Context, a: &SphericalClass, r_bound: i64) -> Result<bool> {
    Ok(scan_spherical_against_disk(ctx, &disk_d(a), r_bound)?.ok())
}

/// Wall of an arbitrary pair of classes: the locus where the central charges
/// have real ratio. Requires non-proportional charges and at least one
/// nonzero rank; the four-point structure only exists for the
/// (spherical, isotropic) case handled by [`wall`].
pub fn wall_pair(ctx: &K3Context, u: &MukaiVector, v: &MukaiVector) -> Result<Geodesic> {
    // Im Z(u) conj(Z(v)) = 2 d t (lam_u Re Z(v) - lam_v Re Z(u)); for t > 0
    // the zero locus is the quadratic
    //   g(x, t) = k x^2 + (k/d) t^2 + c1 x + c0,
    // with k = d (n_u r_v - n_v r_u), c1 = r_u s_v - r_v s_u and
    // c0 = n_v s_u - n_u s_v (the x^3 and cross terms cancel).
    let d = ctx.d_rat();
    let (ru, nu, su) = (
        Rat::from_integer(u.r.clone()),
        Rat::from_integer(u.n.clone()),
        Rat::from_integer(u.s.clone()),
    );
    let (rv, nv, sv) = (
        Rat::from_integer(v.r.clone()),
        Rat::from_integer(v.n.clone()),
        Rat::from_integer(v.s.clone()),
    );
    let k = &d * (&nu * &rv - &nv * &ru);
    let c1 = &ru * &sv - &rv * &su;
    let c0 = &nv * &su - &nu * &sv;
    if k.is_zero() {
        if c1.is_zero() {
            return Err(Error::DegenerateProportional);
        }
        return Ok(Geodesic::Vertical { x: -c0 / c1 });
    }
    // k (x^2 + t^2/d) + c1 x + c0 = 0
    let center = -&c1 / (rat_int(2) * &k);
    let radius_sq = &center * &center - &c0 / &k;
    if !radius_sq.is_positive() {
        return Err(Error::DegenerateProportional);
    }
    Ok(Geodesic::Semicircle { center, radius_sq })
}
