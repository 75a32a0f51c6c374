//! Upper half-plane geometry in the rational model, and the Moebius maps
//! induced by lattice isometries.
//!
//! A point `(x, t)` denotes `x + i*t/sqrt(d)`. Moebius maps are stored as
//! primitive integer matrices with positive determinant and positive leading
//! entry, so map equality is plain matrix equality. The induced map of a
//! lattice isometry is derived symbolically: apply the isometry to the
//! section-map image of an indeterminate `z`, normalize by the rank
//! component, and solve for the unique fractional linear `z'` — the closed
//! forms elsewhere in the crate are checked against this oracle rather than
//! trusted.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::lattice::{K3Context, MukaiVector};
use crate::qcomplex::QComplex;
use crate::ratio::{rat_int, Rat};
use crate::spherical::SphericalClass;
use crate::Result;

/// Exact upper-half-plane point `(x, t)`, standing for `x + i*t/sqrt(d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HPoint {
    x: Rat,
    t: Rat,
}

impl HPoint {
    pub fn new(x: Rat, t: Rat) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::NotInUpperHalfPlane);
        }
        Ok(HPoint { x, t })
    }

    pub fn from_ints(x: i64, t: i64) -> Result<Self> {
        HPoint::new(rat_int(x), rat_int(t))
    }

    pub fn x(&self) -> &Rat {
        &self.x
    }

    pub fn t(&self) -> &Rat {
        &self.t
    }

    pub fn to_qcomplex(&self) -> QComplex {
        QComplex::new(self.x.clone(), self.t.clone())
    }

    /// `y^2 = t^2/d`, the squared imaginary part, still rational.
    pub fn y_squared(&self, ctx: &K3Context) -> Rat {
        &self.t * &self.t / ctx.d_rat()
    }

    /// Euclidean `(x, y)` coordinates as floats, for rendering only.
    pub fn to_xy_f64(&self, ctx: &K3Context) -> (f64, f64) {
        let x = self.x.to_f64().unwrap_or(f64::NAN);
        let t = self.t.to_f64().unwrap_or(f64::NAN);
        (x, t / ctx.sqrt_d_f64())
    }
}

/// Hyperbolic distance between two rational-model points.
///
/// The `cosh` of the distance is exactly rational (see
/// [`hyp_cosh_distance_exact`]); only the final `acosh` is floating.
pub fn hyp_distance(p: &HPoint, q: &HPoint, ctx: &K3Context) -> f64 {
    let c = hyp_cosh_distance_exact(p, q, ctx);
    c.to_f64().unwrap_or(f64::NAN).acosh()
}

/// `cosh dist = 1 + ((x1-x2)^2 + (y1-y2)^2) / (2 y1 y2)`, exact.
///
/// `(y1 - y2)^2 = (t1 - t2)^2 / d` and `y1 y2 = t1 t2 / d`, so the whole
/// expression is rational. Moebius maps with positive determinant preserve it
/// exactly, which the test suites exploit.
pub fn hyp_cosh_distance_exact(p: &HPoint, q: &HPoint, ctx: &K3Context) -> Rat {
    let d = ctx.d_rat();
    let dx = p.x() - q.x();
    let dt = p.t() - q.t();
    let num = &dx * &dx + &dt * &dt / &d;
    let den = rat_int(2) * p.t() * q.t() / &d;
    rat_int(1) + num / den
}

/// A complete geodesic of the half plane in rational-model coordinates.
///
/// A point `(x, t)` lies on `Semicircle { center, radius_sq }` iff
/// `(x - center)^2 + t^2/d = radius_sq`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Geodesic {
    Vertical { x: Rat },
    Semicircle { center: Rat, radius_sq: Rat },
}

impl Geodesic {
    /// The unique geodesic through two distinct points.
    pub fn through(p: &HPoint, q: &HPoint, ctx: &K3Context) -> Result<Geodesic> {
        if p == q {
            return Err(Error::CoincidentPoints);
        }
        if p.x() == q.x() {
            return Ok(Geodesic::Vertical { x: p.x().clone() });
        }
        let d = ctx.d_rat();
        // (x1 - c)^2 + t1^2/d = (x2 - c)^2 + t2^2/d, linear in c
        let x1 = p.x();
        let x2 = q.x();
        let t1 = p.t();
        let t2 = q.t();
        let num = x1 * x1 - x2 * x2 + (t1 * t1 - t2 * t2) / &d;
        let den = rat_int(2) * (x1 - x2);
        let center = num / den;
        let dx = x1 - &center;
        let radius_sq = &dx * &dx + t1 * t1 / &d;
        Ok(Geodesic::Semicircle { center, radius_sq })
    }

    /// Exact incidence test.
    pub fn contains(&self, p: &HPoint, ctx: &K3Context) -> bool {
        match self {
            Geodesic::Vertical { x } => p.x() == x,
            Geodesic::Semicircle { center, radius_sq } => {
                let dx = p.x() - center;
                &dx * &dx + p.t() * p.t() / ctx.d_rat() == *radius_sq
            }
        }
    }

    /// Coefficients `(A, B, C)` of `A*z*conj(z) + B*(z + conj(z)) + C = 0`.
    fn coeffs(&self) -> (Rat, Rat, Rat) {
        match self {
            Geodesic::Vertical { x } => (Rat::zero(), rat_int(1), rat_int(-2) * x),
            Geodesic::Semicircle { center, radius_sq } => (
                rat_int(1),
                -center.clone(),
                center * center - radius_sq,
            ),
        }
    }

    fn from_coeffs(a: Rat, b: Rat, c: Rat) -> Option<Geodesic> {
        if a.is_zero() {
            if b.is_zero() {
                return None;
            }
            return Some(Geodesic::Vertical { x: -c / (rat_int(2) * b) });
        }
        let center = -&b / &a;
        let radius_sq = &center * &center - &c / &a;
        if !radius_sq.is_positive() {
            return None;
        }
        Some(Geodesic::Semicircle { center, radius_sq })
    }

    /// Image under a Moebius map, computed on the defining equation so no
    /// square roots ever appear (feet of a semicircle need not be rational).
    pub fn transform(&self, m: &MoebiusMap, _ctx: &K3Context) -> Geodesic {
        let (a, b, c) = self.coeffs();
        // substitute z = m^{-1}(w) = (e w - b)/(-c w + a) into the equation
        let [ma, mb, mc, me] = m.entries_rat();
        let (p, q, r, s) = (me, -mb, -mc, ma);
        let a2 = &a * &p * &p + rat_int(2) * &b * &p * &r + &c * &r * &r;
        let b2 = &a * &p * &q + &b * (&p * &s + &q * &r) + &c * &r * &s;
        let c2 = &a * &q * &q + rat_int(2) * &b * &q * &s + &c * &s * &s;
        // a real Moebius map with positive determinant sends geodesics to
        // geodesics, so the degenerate branch is unreachable
        Geodesic::from_coeffs(a2, b2, c2).expect("image of a geodesic is a geodesic")
    }
}

/// A fractional linear map `z -> (a z + b)/(c z + e)`, `ae - bc > 0`, stored
/// as the canonical primitive integer matrix with positive leading entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MoebiusMap {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    e: BigInt,
}

impl MoebiusMap {
    pub fn from_rationals(a: &Rat, b: &Rat, c: &Rat, e: &Rat) -> Result<Self> {
        let det = a * e - b * c;
        if !det.is_positive() {
            return Err(Error::NonPositiveDeterminant);
        }
        // clear denominators, divide by content, fix the sign of the first
        // nonzero entry
        let lcm = a
            .denom()
            .lcm(b.denom())
            .lcm(c.denom())
            .lcm(e.denom());
        let scale = Rat::from_integer(lcm);
        let mut v = [
            (a * &scale).to_integer(),
            (b * &scale).to_integer(),
            (c * &scale).to_integer(),
            (e * &scale).to_integer(),
        ];
        let mut g = BigInt::zero();
        for x in &v {
            g = g.gcd(x);
        }
        for x in &mut v {
            *x /= &g;
        }
        if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            for x in &mut v {
                *x = -&*x;
            }
        }
        let [a, b, c, e] = v;
        Ok(MoebiusMap { a, b, c, e })
    }

    pub fn from_ints(a: i64, b: i64, c: i64, e: i64) -> Result<Self> {
        MoebiusMap::from_rationals(&rat_int(a), &rat_int(b), &rat_int(c), &rat_int(e))
    }

    pub fn identity() -> Self {
        MoebiusMap {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            e: BigInt::one(),
        }
    }

    /// `z -> z + k`.
    pub fn translation(k: &Rat) -> Self {
        MoebiusMap::from_rationals(&rat_int(1), k, &rat_int(0), &rat_int(1))
            .expect("translation has determinant 1")
    }

    pub fn is_identity(&self) -> bool {
        *self == MoebiusMap::identity()
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.e]
    }

    fn entries_rat(&self) -> [Rat; 4] {
        [
            Rat::from_integer(self.a.clone()),
            Rat::from_integer(self.b.clone()),
            Rat::from_integer(self.c.clone()),
            Rat::from_integer(self.e.clone()),
        ]
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.e - &self.b * &self.c
    }

    /// Exact image of a half-plane point; positive determinant keeps the
    /// image in the upper half plane.
    pub fn apply(&self, p: &HPoint, ctx: &K3Context) -> HPoint {
        let z = self.apply_q(&p.to_qcomplex(), ctx);
        HPoint::new(z.re, z.im_t).expect("det > 0 preserves the upper half plane")
    }

    /// The same map on rational-model coordinates.
    pub fn apply_q(&self, z: &QComplex, ctx: &K3Context) -> QComplex {
        let [a, b, c, e] = self.entries_rat();
        let num = z.scale(&a).add(&QComplex::from_rat(b));
        let den = z.scale(&c).add(&QComplex::from_rat(e));
        num.div(&den, ctx)
            .expect("denominator vanishes only at a real point")
    }

    /// Action on boundary points of the real axis (`None` means infinity).
    pub fn apply_boundary(&self, x: Option<&Rat>) -> Option<Rat> {
        let [a, b, c, e] = self.entries_rat();
        match x {
            Some(x) => {
                let den = &c * x + &e;
                if den.is_zero() {
                    None
                } else {
                    Some((&a * x + &b) / den)
                }
            }
            None => {
                if c.is_zero() {
                    None
                } else {
                    Some(a / c)
                }
            }
        }
    }

    /// `self . other`, acting as `z -> self(other(z))`.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        let a = &self.a * &other.a + &self.b * &other.c;
        let b = &self.a * &other.b + &self.b * &other.e;
        let c = &self.c * &other.a + &self.e * &other.c;
        let e = &self.c * &other.b + &self.e * &other.e;
        MoebiusMap::from_rationals(
            &Rat::from_integer(a),
            &Rat::from_integer(b),
            &Rat::from_integer(c),
            &Rat::from_integer(e),
        )
        .expect("composition of positive determinants")
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap::from_rationals(
            &Rat::from_integer(self.e.clone()),
            &Rat::from_integer(-&self.b),
            &Rat::from_integer(-&self.c),
            &Rat::from_integer(self.a.clone()),
        )
        .expect("inverse of positive determinant")
    }

    pub fn pow(&self, k: i64) -> MoebiusMap {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = MoebiusMap::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.compose(&base);
        }
        out
    }

    /// The fixed point in the open half plane, when the map is elliptic and
    /// the fixed point lies in the rational model.
    pub fn fixed_point(&self, ctx: &K3Context) -> Option<HPoint> {
        if self.c.is_zero() {
            return None;
        }
        // c z^2 + (e - a) z - b = 0; z = (a - e)/(2c) + i sqrt(-disc)/(2|c|)
        let tr = Rat::from_integer(&self.a + &self.e);
        let det = Rat::from_integer(self.det());
        let disc = &tr * &tr - rat_int(4) * det;
        if !(-&disc).is_positive() {
            return None;
        }
        // t = sqrt(-disc * d) / (2|c|) must be rational
        let inner = -&disc * ctx.d_rat();
        let t = rational_sqrt(&inner)?;
        let c2 = rat_int(2) * Rat::from_integer(self.c.abs());
        let x = Rat::from_integer(&self.a - &self.e)
            / (rat_int(2) * Rat::from_integer(self.c.clone()));
        HPoint::new(x, t / c2).ok()
    }
}

/// Exact square root of a nonnegative rational, if one exists.
fn rational_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let pn = r.numer().sqrt();
    let pd = r.denom().sqrt();
    if &pn * &pn == *r.numer() && &pd * &pd == *r.denom() {
        Some(Rat::new(pn, pd))
    } else {
        None
    }
}

/// A lattice self-map, given by the images of the three basis vectors
/// `(1,0,0)`, `(0,1,0)`, `(0,0,1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeMap {
    cols: [MukaiVector; 3],
}

impl LatticeMap {
    pub fn from_images(e1: MukaiVector, e2: MukaiVector, e3: MukaiVector) -> Self {
        LatticeMap { cols: [e1, e2, e3] }
    }

    pub fn identity() -> Self {
        LatticeMap::from_images(
            MukaiVector::new(1, 0, 0),
            MukaiVector::new(0, 1, 0),
            MukaiVector::new(0, 0, 1),
        )
    }

    /// The reflection `v -> v + <v, delta> delta` in a spherical class.
    pub fn reflection(delta: &MukaiVector, ctx: &K3Context) -> Result<Self> {
        let id = LatticeMap::identity();
        Ok(LatticeMap {
            cols: [
                ctx.reflect(&id.cols[0], delta)?,
                ctx.reflect(&id.cols[1], delta)?,
                ctx.reflect(&id.cols[2], delta)?,
            ],
        })
    }

    /// Cup product with `exp(kL)`: `(1,0,0) -> (1, k, d k^2)`,
    /// `(0,1,0) -> (0, 1, 2dk)`, `(0,0,1) -> (0,0,1)`.
    pub fn tensor_line_bundle(k: i64, ctx: &K3Context) -> Self {
        let d = ctx.d();
        LatticeMap::from_images(
            MukaiVector::new(1, k, d * k * k),
            MukaiVector::new(0, 1, 2 * d * k),
            MukaiVector::new(0, 0, 1),
        )
    }

    pub fn apply(&self, v: &MukaiVector) -> MukaiVector {
        let scaled = |col: &MukaiVector, k: &BigInt| MukaiVector {
            r: &col.r * k,
            n: &col.n * k,
            s: &col.s * k,
        };
        let a = scaled(&self.cols[0], &v.r);
        let b = scaled(&self.cols[1], &v.n);
        let c = scaled(&self.cols[2], &v.s);
        &(&a + &b) + &c
    }

    /// Composition acting as `self(other(v))`.
    pub fn compose(&self, other: &LatticeMap) -> LatticeMap {
        LatticeMap {
            cols: [
                self.apply(&other.cols[0]),
                self.apply(&other.cols[1]),
                self.apply(&other.cols[2]),
            ],
        }
    }

    /// Checks `<Mu, Mv> = <u, v>` on the basis.
    pub fn is_isometry(&self, ctx: &K3Context) -> bool {
        let id = LatticeMap::identity();
        for i in 0..3 {
            for j in i..3 {
                if ctx.pairing(&self.cols[i], &self.cols[j])
                    != ctx.pairing(&id.cols[i], &id.cols[j])
                {
                    return false;
                }
            }
        }
        true
    }

    pub fn image_of_skyscraper(&self) -> &MukaiVector {
        &self.cols[2]
    }
}

/// The induced action on the half plane: either a genuine fractional linear
/// map or, when the skyscraper class is fixed up to sign, a translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InducedMap {
    Moebius(MoebiusMap),
    Translation(Rat),
}

impl InducedMap {
    pub fn to_moebius(&self) -> MoebiusMap {
        match self {
            InducedMap::Moebius(m) => m.clone(),
            InducedMap::Translation(k) => MoebiusMap::translation(k),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.to_moebius().is_identity()
    }

    pub fn apply(&self, p: &HPoint, ctx: &K3Context) -> HPoint {
        self.to_moebius().apply(p, ctx)
    }
}

/// Derives the half-plane map induced by a lattice isometry, symbolically.
///
/// Write `psi(exp z) = (u(z), v(z), w(z))` with `u, v` quadratic polynomials
/// in `z`. Normalizing by the rank gives `z' = v(z)/u(z)`, and `z'` is a
/// fractional linear map `(az+b)/(cz+e)` precisely when the cubic
/// `v(z)(cz+e) - u(z)(az+b)` vanishes identically. That is a homogeneous
/// linear system in `(a,b,c,e)` whose kernel is computed exactly.
pub fn induced_map_oracle(psi: &LatticeMap, ctx: &K3Context) -> Result<InducedMap> {
    if !psi.is_isometry(ctx) {
        return Err(Error::NotAnIsometry);
    }
    let d = Rat::from_integer(ctx.d().clone());
    let col = |i: usize| &psi.cols[i];
    // u(z) = r0 + r1 z + r2 d z^2, v(z) = n0 + n1 z + n2 d z^2
    let u = [
        Rat::from_integer(col(0).r.clone()),
        Rat::from_integer(col(1).r.clone()),
        Rat::from_integer(col(2).r.clone()) * &d,
    ];
    let v = [
        Rat::from_integer(col(0).n.clone()),
        Rat::from_integer(col(1).n.clone()),
        Rat::from_integer(col(2).n.clone()) * &d,
    ];
    // rows: coefficients of z^3, z^2, z^1, z^0 in v(z)(cz+e) - u(z)(az+b),
    // unknowns ordered (a, b, c, e)
    let z = Rat::zero;
    let rows = [
        [-u[2].clone(), z(), v[2].clone(), z()],
        [-u[1].clone(), -u[2].clone(), v[1].clone(), v[2].clone()],
        [-u[0].clone(), -u[1].clone(), v[0].clone(), v[1].clone()],
        [z(), -u[0].clone(), z(), v[0].clone()],
    ];
    let kernel = kernel_vector(rows).ok_or(Error::NotAnIsometry)?;
    let [a, b, c, e] = kernel;
    let det = &a * &e - &b * &c;
    if det.is_zero() {
        return Err(Error::NotAnIsometry);
    }
    if det.is_negative() {
        return Err(Error::OrientationReversed);
    }
    let m = MoebiusMap::from_rationals(&a, &b, &c, &e)?;
    let sky = psi.image_of_skyscraper();
    let fixes_infinity = sky == &MukaiVector::skyscraper()
        || sky == &MukaiVector::skyscraper().neg();
    if fixes_infinity {
        // the only orientation-preserving maps fixing infinity arising here
        // are translations z -> z + k
        let [ma, mb, mc, me] = m.entries_rat();
        debug_assert!(mc.is_zero() && ma == me);
        return Ok(InducedMap::Translation(mb / me));
    }
    Ok(InducedMap::Moebius(m))
}

/// One kernel vector of a 4x4 rational system, or `None` when the kernel is
/// not one-dimensional.
fn kernel_vector(mut rows: [[Rat; 4]; 4]) -> Option<[Rat; 4]> {
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..4 {
        let Some(pr) = (rank..4).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = rows[rank][col].recip();
        for entry in rows[rank].iter_mut() {
            *entry = &*entry * &inv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (entry, p) in row.iter_mut().zip(&pivot_row) {
                    *entry = &*entry - &f * p;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    if rank != 3 {
        return None;
    }
    let free = (0..4).find(|c| !pivot_cols.contains(c))?;
    let mut sol = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
    sol[free] = rat_int(1);
    for (i, &pc) in pivot_cols.iter().enumerate() {
        sol[pc] = -rows[i][free].clone();
    }
    Some(sol)
}

/// The map induced by the twist in a spherical class, in closed form:
/// `z -> a - 1/(d r^2 (z - a))` with `a = n/r`. As an integer matrix this is
/// `[[dn, -s], [dr, -dn]]`, determinant `d`.
pub fn twist_moebius(delta: &SphericalClass, ctx: &K3Context) -> MoebiusMap {
    let v = delta.delta();
    let d = ctx.d();
    MoebiusMap::from_rationals(
        &Rat::from_integer(d * &v.n),
        &Rat::from_integer(-&v.s),
        &Rat::from_integer(d * &v.r),
        &Rat::from_integer(-(d * &v.n)),
    )
    .expect("twist matrix has determinant d > 0")
}

/// The fractional linear map attached to a pair of isotropic classes of
/// nonzero rank: `z -> (1/(d sqrt(r1 r2))) * (-1/(z - n2/r2)) + n1/r1`.
///
/// `v_fwd` plays the role of the image of a point class under the
/// equivalence, `v_bwd` under its inverse. The rank product must be a
/// positive perfect square for the map to have rational coefficients.
pub fn isotropic_pair_map(
    v_fwd: &MukaiVector,
    v_bwd: &MukaiVector,
    ctx: &K3Context,
) -> Result<MoebiusMap> {
    if !ctx.is_isotropic(v_fwd) {
        return Err(Error::NotIsotropic(v_fwd.clone()));
    }
    if !ctx.is_isotropic(v_bwd) {
        return Err(Error::NotIsotropic(v_bwd.clone()));
    }
    if v_fwd.r.is_zero() || v_bwd.r.is_zero() {
        return Err(Error::RankZero);
    }
    let prod = &v_fwd.r * &v_bwd.r;
    if prod.is_negative() {
        return Err(Error::NegativeRankProduct);
    }
    let q = prod.sqrt();
    if &q * &q != prod {
        return Err(Error::NotPerfectSquare);
    }
    let dq = Rat::from_integer(ctx.d() * q);
    let a1 = v_fwd.slope().expect("rank checked nonzero");
    let a2 = v_bwd.slope().expect("rank checked nonzero");
    // z -> (dq a1 z - dq a1 a2 - 1) / (dq z - dq a2)
    MoebiusMap::from_rationals(
        &(&dq * &a1),
        &(-(&dq * &a1 * &a2) - rat_int(1)),
        &dq,
        &(-(&dq * &a2)),
    )
}

/// Cross-ratio `(z1 - z3)(z2 - z4) / ((z1 - z4)(z2 - z3))`, exact; `None`
/// when the denominator vanishes.
pub fn cross_ratio(
    z1: &QComplex,
    z2: &QComplex,
    z3: &QComplex,
    z4: &QComplex,
    ctx: &K3Context,
) -> Option<QComplex> {
    let num = z1.sub(z3).mul(&z2.sub(z4), ctx);
    let den = z1.sub(z4).mul(&z2.sub(z3), ctx);
    num.div(&den, ctx)
}
