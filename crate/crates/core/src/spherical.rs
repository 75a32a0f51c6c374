//! Enumeration of (-2)-classes and the exact membership tests for the open
//! region they cut out of the half plane.
//!
//! A spherical class `(r, n, s)` with `r > 0` has `rs = d n^2 + 1`, which
//! forces `gcd(r, n) = 1`. Its spherical point is `(n/r, 1/r)` in
//! rational-model coordinates, and its excluded segment is the vertical slit
//! `x = n/r`, `0 < t <= 1/r`. Because the slit abscissa `n/r` is always in
//! lowest terms, a rational `x = a/q` can only be excluded by the single
//! candidate rank `q`, so membership needs no enumeration bound at all.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::halfplane::HPoint;
use crate::lattice::{normalize_spherical_sign, K3Context, MukaiVector};
use crate::ratio::Rat;
use crate::Result;

/// A spherical class normalized to positive rank, with its point of the half
/// plane attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphericalClass {
    delta: MukaiVector,
    point: HPoint,
}

impl SphericalClass {
    /// Validates sphericity and normalizes the sign so `r > 0` (the point
    /// only depends on the class up to sign).
    pub fn new(delta: MukaiVector, ctx: &K3Context) -> Result<Self> {
        if !ctx.is_spherical(&delta) {
            return Err(Error::NonSpherical(delta));
        }
        let delta = normalize_spherical_sign(&delta);
        let point = HPoint::new(
            Rat::new(delta.n.clone(), delta.r.clone()),
            Rat::new(BigInt::one(), delta.r.clone()),
        )?;
        Ok(SphericalClass { delta, point })
    }

    pub fn delta(&self) -> &MukaiVector {
        &self.delta
    }

    /// `p(delta) = (n/r, 1/r)`.
    pub fn point(&self) -> &HPoint {
        &self.point
    }

    pub fn rank(&self) -> &BigInt {
        &self.delta.r
    }

    /// Slope `n/r`, the abscissa of the excluded segment.
    pub fn slope(&self) -> Rat {
        self.point.x().clone()
    }
}

/// A vertical slit `x` fixed, `0 < t <= top_t` (or `t < top_t` when the top
/// is open).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcludedSegment {
    pub x: Rat,
    pub top_t: Rat,
    pub top_closed: bool,
}

impl ExcludedSegment {
    pub fn contains(&self, p: &HPoint) -> bool {
        if p.x() != &self.x {
            return false;
        }
        if self.top_closed {
            p.t() <= &self.top_t
        } else {
            p.t() < &self.top_t
        }
    }
}

/// The closed-top excluded segment of a spherical class.
pub fn segment(class: &SphericalClass) -> ExcludedSegment {
    ExcludedSegment {
        x: class.slope(),
        top_t: class.point().t().clone(),
        top_closed: true,
    }
}

/// All spherical classes with `1 <= r <= r_max` and slope inside the closed
/// window, sorted by `(r, n)`.
///
/// For each rank the residues `n mod r` with `d n^2 + 1 = 0 (mod r)` are
/// precomputed, so the walk over the window touches solutions only.
pub fn enumerate_spherical(
    ctx: &K3Context,
    r_max: i64,
    window: (&Rat, &Rat),
) -> Result<Vec<SphericalClass>> {
    let (lo, hi) = window;
    if lo > hi || r_max < 1 {
        return Err(Error::WindowEmpty);
    }
    let d = ctx.d();
    let mut out = Vec::new();
    for r in 1..=r_max {
        let rb = BigInt::from(r);
        let residues: Vec<i64> = (0..r)
            .filter(|&m| ((d * m * m + 1i64) % &rb).is_zero())
            .collect();
        if residues.is_empty() {
            continue;
        }
        // n/r in [lo, hi]  <=>  n in [ceil(lo*r), floor(hi*r)]
        let n_min = (lo * Rat::from_integer(rb.clone())).ceil().to_integer();
        let n_max = (hi * Rat::from_integer(rb.clone())).floor().to_integer();
        let mut ns: Vec<BigInt> = Vec::new();
        for m in &residues {
            // first n >= n_min with n = m (mod r)
            let mb = BigInt::from(*m);
            let mut n = &n_min + (&mb - &n_min).mod_floor(&rb);
            while n <= n_max {
                ns.push(n.clone());
                n += &rb;
            }
        }
        ns.sort();
        for n in ns {
            let s = (d * &n * &n + 1i64) / &rb;
            let delta = MukaiVector { r: rb.clone(), n, s };
            debug_assert!(ctx.is_spherical(&delta));
            out.push(SphericalClass::new(delta, ctx)?);
        }
    }
    Ok(out)
}

/// `p(delta) = (n/r, 1/r)`, accepting either sign of the rank.
pub fn spherical_point(delta: &MukaiVector, ctx: &K3Context) -> Result<HPoint> {
    Ok(SphericalClass::new(delta.clone(), ctx)?.point().clone())
}

/// Associated boundary point of a primitive isotropic class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssociatedPoint {
    Finite(Rat),
    Infinity,
}

/// `n/r` for positive-rank classes; the skyscraper classes `(0,0,+-1)` sit at
/// infinity.
pub fn associated_point_isotropic(v: &MukaiVector, ctx: &K3Context) -> Result<AssociatedPoint> {
    if !ctx.is_isotropic(v) {
        return Err(Error::NotIsotropic(v.clone()));
    }
    if !v.is_primitive() {
        return Err(Error::NotPrimitive(v.clone()));
    }
    match v.slope() {
        Some(x) => Ok(AssociatedPoint::Finite(x)),
        // rank zero + isotropic + primitive forces (0, 0, +-1)
        None => Ok(AssociatedPoint::Infinity),
    }
}

/// Whether some spherical class of rank `r` exists, i.e. `d n^2 + 1 = 0
/// (mod r)` is solvable.
fn rank_admits_spherical(ctx: &K3Context, r: i64) -> bool {
    let rb = BigInt::from(r);
    (0..r).any(|m| ((ctx.d() * m * m + 1i64) % &rb).is_zero())
}

/// The first `i_max` ranks that carry spherical classes, ascending. The first
/// entry is always 1 (line-bundle classes exist for every degree).
pub fn rank_levels(ctx: &K3Context, i_max: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(i_max);
    let mut r = 1i64;
    while out.len() < i_max {
        if rank_admits_spherical(ctx, r) {
            out.push(r);
        }
        r += 1;
    }
    out
}

/// Where a point sits relative to the union of closed-top excluded segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VMembership {
    /// Strictly outside every segment.
    In,
    /// Exactly the top of a segment, i.e. a spherical point.
    OnSphericalPoint,
    /// Strictly inside a segment.
    OnSegmentInterior,
}

/// Exact classification of a rational-model point against the excluded
/// segments. Writing `x = a/q` in lowest terms, only rank `q` can exclude the
/// point, and it does iff `q | d a^2 + 1` and `t <= 1/q`.
pub fn v_membership(ctx: &K3Context, p: &HPoint) -> VMembership {
    let a = p.x().numer();
    let q = p.x().denom(); // positive by normalization
    if !((ctx.d() * a * a + 1i64) % q).is_zero() {
        return VMembership::In;
    }
    let top = Rat::new(BigInt::one(), q.clone());
    match p.t().cmp(&top) {
        std::cmp::Ordering::Greater => VMembership::In,
        std::cmp::Ordering::Equal => VMembership::OnSphericalPoint,
        std::cmp::Ordering::Less => VMembership::OnSegmentInterior,
    }
}

/// Membership in the open region (closed segment tops excluded).
pub fn in_v(ctx: &K3Context, p: &HPoint) -> bool {
    v_membership(ctx, p) == VMembership::In
}

/// Membership in the `i`-th level (`i >= 1`): `t > 1/r_i` minus the segments
/// of the first `i - 1` ranks.
pub fn in_v_level(ctx: &K3Context, p: &HPoint, i: usize) -> bool {
    assert!(i >= 1, "levels are 1-indexed");
    let levels = rank_levels(ctx, i);
    let r_i = levels[i - 1];
    if *p.t() <= Rat::new(BigInt::one(), BigInt::from(r_i)) {
        return false;
    }
    let a = p.x().numer();
    let q = p.x().denom();
    let q_small = levels[..i - 1].iter().any(|r| BigInt::from(*r) == *q);
    if q_small
        && ((ctx.d() * a * a + 1i64) % q).is_zero()
        && *p.t() <= Rat::new(BigInt::one(), q.clone())
    {
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rat_int};

    fn ctx(d: i64) -> K3Context {
        K3Context::new(d).unwrap()
    }

    fn hp(x: Rat, t: Rat) -> HPoint {
        HPoint::new(x, t).unwrap()
    }

    fn deltas(classes: &[SphericalClass]) -> Vec<(i64, i64, i64)> {
        use num_traits::ToPrimitive;
        classes
            .iter()
            .map(|c| {
                let v = c.delta();
                (
                    v.r.to_i64().unwrap(),
                    v.n.to_i64().unwrap(),
                    v.s.to_i64().unwrap(),
                )
            })
            .collect()
    }

    #[test]
    fn enumerate_examples() {
        let c = ctx(1);
        let got = enumerate_spherical(&c, 2, (&rat_int(0), &rat_int(1))).unwrap();
        assert_eq!(deltas(&got), vec![(1, 0, 1), (1, 1, 2), (2, 1, 1)]);

        let got = enumerate_spherical(&c, 5, (&rat(2, 5), &rat(2, 5))).unwrap();
        assert!(deltas(&got).contains(&(5, 2, 1)));

        let c2 = ctx(2);
        let got = enumerate_spherical(&c2, 3, (&rat_int(0), &rat_int(1))).unwrap();
        let ds = deltas(&got);
        assert!(ds.contains(&(3, 1, 1)));
        assert!(ds.iter().all(|&(r, _, _)| r != 2));

        assert!(matches!(
            enumerate_spherical(&c, 3, (&rat_int(1), &rat_int(0))),
            Err(Error::WindowEmpty)
        ));
    }

    #[test]
    fn enumeration_is_complete_within_bounds() {
        // brute force oracle over all (r, n) in the box
        for d in 1..=3i64 {
            let c = ctx(d);
            let (lo, hi) = (rat_int(-2), rat_int(2));
            let got = deltas(&enumerate_spherical(&c, 8, (&lo, &hi)).unwrap());
            let mut brute = Vec::new();
            for r in 1..=8i64 {
                for n in -2 * r..=2 * r {
                    if (d * n * n + 1) % r == 0 {
                        brute.push((r, n, (d * n * n + 1) / r));
                    }
                }
            }
            assert_eq!(got, brute);
        }
    }

    #[test]
    fn spherical_point_examples() {
        let c = ctx(1);
        assert_eq!(
            spherical_point(&MukaiVector::new(1, 0, 1), &c).unwrap(),
            hp(rat_int(0), rat_int(1))
        );
        assert_eq!(
            spherical_point(&MukaiVector::new(2, 1, 1), &c).unwrap(),
            hp(rat(1, 2), rat(1, 2))
        );
        // p(delta) = p(-delta)
        for d in 1..=3i64 {
            let c = ctx(d);
            let delta = MukaiVector::new(1, 2, 4 * d + 1);
            assert_eq!(
                spherical_point(&delta, &c).unwrap(),
                spherical_point(&delta.neg(), &c).unwrap()
            );
        }
        assert!(spherical_point(&MukaiVector::new(1, 1, 1), &ctx(1)).is_err());
    }

    #[test]
    fn associated_point_examples() {
        let c = ctx(1);
        assert_eq!(
            associated_point_isotropic(&MukaiVector::skyscraper(), &c).unwrap(),
            AssociatedPoint::Infinity
        );
        assert_eq!(
            associated_point_isotropic(&MukaiVector::new(1, 1, 1), &c).unwrap(),
            AssociatedPoint::Finite(rat_int(1))
        );
        assert_eq!(
            associated_point_isotropic(&MukaiVector::new(9, 3, 1), &c).unwrap(),
            AssociatedPoint::Finite(rat(1, 3))
        );
        assert!(matches!(
            associated_point_isotropic(&MukaiVector::new(1, 1, 2), &c),
            Err(Error::NotIsotropic(_))
        ));
        assert!(matches!(
            associated_point_isotropic(&MukaiVector::new(2, 2, 2), &c),
            Err(Error::NotPrimitive(_))
        ));
    }

    #[test]
    fn rank_level_examples() {
        assert_eq!(rank_levels(&ctx(1), 5), vec![1, 2, 5, 10, 13]);
        let lv2 = rank_levels(&ctx(2), 6);
        assert_eq!(&lv2[..2], &[1, 3]);
        assert!(lv2.iter().all(|r| r % 2 == 1)); // d n^2 + 1 is odd for d = 2
        for d in 1..=6 {
            assert_eq!(rank_levels(&ctx(d), 1), vec![1]);
        }
    }

    #[test]
    fn membership_examples() {
        let c = ctx(1);
        assert!(!in_v(&c, &hp(rat(1, 2), rat(2, 5))));
        assert!(in_v(&c, &hp(rat(1, 2), rat(3, 5))));
        for t in [rat(1, 10), rat_int(1), rat_int(7)] {
            assert!(in_v(&c, &hp(rat(1, 3), t))); // 3 does not divide 1 + 1
        }
        assert_eq!(
            v_membership(&c, &hp(rat(1, 2), rat(1, 2))),
            VMembership::OnSphericalPoint
        );
        assert_eq!(
            v_membership(&c, &hp(rat(1, 2), rat(1, 3))),
            VMembership::OnSegmentInterior
        );
    }

    #[test]
    fn level_membership_examples() {
        let c = ctx(1);
        assert!(in_v_level(&c, &hp(rat_int(0), rat_int(2)), 1));
        assert!(!in_v_level(&c, &hp(rat_int(0), rat(1, 2)), 1));
        assert!(!in_v_level(&c, &hp(rat_int(0), rat(3, 4)), 2));
        // and the same point is excluded from the full region as well
        assert!(!in_v(&c, &hp(rat_int(0), rat(3, 4))));
    }

    #[test]
    fn levels_filter_and_exhaust_membership() {
        let c = ctx(1);
        let pts = [
            hp(rat_int(0), rat(3, 4)),
            hp(rat(1, 2), rat(2, 5)),
            hp(rat(1, 2), rat(3, 5)),
            hp(rat(1, 3), rat(1, 7)),
            hp(rat(2, 5), rat(1, 4)),
        ];
        for p in &pts {
            for i in 1..6 {
                // filtration: level membership is monotone in i
                if in_v_level(&c, p, i) {
                    assert!(in_v_level(&c, p, i + 1));
                }
            }
            // the union of the levels recovers the region at desk scale
            let any_level = (1..=12).any(|i| in_v_level(&c, p, i));
            assert_eq!(any_level, in_v(&c, p));
        }
    }

    #[test]
    fn discreteness_in_rational_rectangles() {
        // inside [x0,x1] x [t0,t1] only ranks r <= 1/t0 contribute, so the
        // enumeration with that bound is already complete
        for d in 1..=3i64 {
            let c = ctx(d);
            let (t0, t1) = (rat(1, 7), rat_int(2));
            let in_rect = |cl: &SphericalClass| *cl.point().t() >= t0 && *cl.point().t() <= t1;
            let r_bound = 7;
            let base: Vec<_> = enumerate_spherical(&c, r_bound, (&rat_int(-1), &rat_int(1)))
                .unwrap()
                .into_iter()
                .filter(in_rect)
                .collect();
            let more: Vec<_> = enumerate_spherical(&c, r_bound + 9, (&rat_int(-1), &rat_int(1)))
                .unwrap()
                .into_iter()
                .filter(in_rect)
                .collect();
            assert!(!base.is_empty());
            assert_eq!(deltas(&base), deltas(&more));
        }
    }

    #[test]
    fn separation_of_spherical_points() {
        // squared Euclidean gap >= (1/d) * (1/(r(r+1)))^2 around a rank-r point
        for d in 1..=2i64 {
            let c = ctx(d);
            let all = enumerate_spherical(&c, 6, (&rat_int(-1), &rat_int(1))).unwrap();
            for a in &all {
                let bound = {
                    use num_traits::ToPrimitive;
                    let r = a.rank().to_i64().unwrap();
                    rat(1, d) * rat(1, r * (r + 1)) * rat(1, r * (r + 1))
                };
                for b in &all {
                    if a.delta() == b.delta() {
                        continue;
                    }
                    let dx = a.point().x() - b.point().x();
                    let dt = a.point().t() - b.point().t();
                    let dist_sq = &dx * &dx + &dt * &dt / c.d_rat();
                    assert!(dist_sq >= bound);
                }
            }
        }
    }

    #[test]
    fn membership_monotone_in_t() {
        let c = ctx(2);
        let xs = [rat_int(0), rat(1, 2), rat(1, 3), rat(3, 7)];
        for x in xs {
            let mut prev = false;
            for k in 1..=30 {
                let now = in_v(&c, &hp(x.clone(), rat(k, 10)));
                assert!(!prev || now);
                prev = now;
            }
        }
    }

    #[test]
    fn segment_membership() {
        let c = ctx(1);
        let cl = SphericalClass::new(MukaiVector::new(2, 1, 1), &c).unwrap();
        let seg = segment(&cl);
        assert!(seg.contains(&hp(rat(1, 2), rat(1, 2))));
        assert!(seg.contains(&hp(rat(1, 2), rat(1, 5))));
        assert!(!seg.contains(&hp(rat(1, 2), rat(3, 5))));
        let open = ExcludedSegment { top_closed: false, ..seg };
        assert!(!open.contains(&hp(rat(1, 2), rat(1, 2))));
    }
}
