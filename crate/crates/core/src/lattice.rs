//! The rank-3 numerical lattice of a degree-2d K3 surface with cyclic
//! Picard group, together with its pairing, reflections and central charges.
//!
//! A vector `(r, n, s)` stands for `r + nL + s` with `L^2 = 2d`, so the
//! pairing specializes to `<u, v> = 2d*n_u*n_v - r_u*s_v - r_v*s_u`. All
//! integers are arbitrary precision; a [`MukaiVector`] carries no degree of
//! its own, and every pairing-dependent operation takes the [`K3Context`]
//! explicitly so values from different degrees cannot be mixed by accident.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::halfplane::HPoint;
use crate::qcomplex::{ExactComplex, QComplex};
use crate::ratio::{Rat, rat_int};
use crate::Result;

/// The single ambient parameter: `d >= 1`, half of `L^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K3Context {
    d: BigInt,
    // cached exact square root when d is a perfect square
    sqrt_d: Option<BigInt>,
}

impl K3Context {
    pub fn new(d: impl Into<BigInt>) -> Result<Self> {
        let d: BigInt = d.into();
        if d < BigInt::one() {
            return Err(Error::InvalidDegree(d));
        }
        let root = d.sqrt();
        let sqrt_d = if &root * &root == d { Some(root) } else { None };
        Ok(K3Context { d, sqrt_d })
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn d_rat(&self) -> Rat {
        Rat::from_integer(self.d.clone())
    }

    /// `sqrt(d)` as a rational when `d` is a perfect square.
    pub fn sqrt_d_exact(&self) -> Option<Rat> {
        self.sqrt_d.clone().map(Rat::from_integer)
    }

    /// `sqrt(d)` as a float, for distance and rendering boundaries only.
    pub fn sqrt_d_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.d.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    /// The Mukai pairing `2d*n_u*n_v - r_u*s_v - r_v*s_u`.
    pub fn pairing(&self, u: &MukaiVector, v: &MukaiVector) -> BigInt {
        2 * &self.d * &u.n * &v.n - &u.r * &v.s - &v.r * &u.s
    }

    /// `<v, v> = 2d*n^2 - 2rs`.
    pub fn square(&self, v: &MukaiVector) -> BigInt {
        self.pairing(v, v)
    }

    /// `v^2 = -2`, equivalently `rs = d*n^2 + 1`.
    pub fn is_spherical(&self, v: &MukaiVector) -> bool {
        &v.r * &v.s == &self.d * &v.n * &v.n + 1
    }

    /// `v^2 = 0`, equivalently `rs = d*n^2`.
    pub fn is_isotropic(&self, v: &MukaiVector) -> bool {
        &v.r * &v.s == &self.d * &v.n * &v.n
    }

    /// Reflection in a spherical class: `v -> v + <v, delta> * delta`.
    ///
    /// This is the lattice shadow of the twist by an object of class `delta`;
    /// applying it twice gives `v` back because `delta^2 = -2`.
    pub fn reflect(&self, v: &MukaiVector, delta: &MukaiVector) -> Result<MukaiVector> {
        if !self.is_spherical(delta) {
            return Err(Error::NonSpherical(delta.clone()));
        }
        let k = self.pairing(v, delta);
        Ok(MukaiVector {
            r: &v.r + &k * &delta.r,
            n: &v.n + &k * &delta.n,
            s: &v.s + &k * &delta.s,
        })
    }

    /// The class of the twisted skyscraper: `(0,0,1) + <(0,0,1), delta> delta
    /// = (-r^2, -rn, 1-rs)`. The result is always isotropic.
    pub fn twist_on_skyscraper(&self, delta: &MukaiVector) -> Result<MukaiVector> {
        let v = self.reflect(&MukaiVector::skyscraper(), delta)?;
        debug_assert!(self.is_isotropic(&v));
        Ok(v)
    }

    /// Section map `z -> (1, z, d z^2)` at a half-plane point.
    pub fn exp_class(&self, p: &HPoint) -> ComplexClass {
        self.exp_class_complex(&ExactComplex::from_qcomplex(&p.to_qcomplex(), self))
    }

    /// Section map at an arbitrary exact complex number.
    pub fn exp_class_complex(&self, z: &ExactComplex) -> ComplexClass {
        let dz2 = z.mul(z, self).scale_int(&self.d);
        ComplexClass { r: ExactComplex::one(), n: z.clone(), s: dz2 }
    }

    /// Central charge `Z_z(v) = 2d*n*z - s - d*r*z^2` at a half-plane point,
    /// exact in the rational model.
    pub fn central_charge(&self, p: &HPoint, v: &MukaiVector) -> QComplex {
        self.central_charge_at(&p.to_qcomplex(), v)
    }

    /// Central charge at an arbitrary rational-model coordinate.
    pub fn central_charge_at(&self, z: &QComplex, v: &MukaiVector) -> QComplex {
        let two_dn = Rat::from_integer(2 * &self.d * &v.n);
        let dr = Rat::from_integer(&self.d * &v.r);
        let s = Rat::from_integer(v.s.clone());
        z.scale(&two_dn)
            .sub(&QComplex::from_rat(s))
            .sub(&z.square(self).scale(&dr))
    }

    /// The rewritten form `v^2/(2r) + r*d*(y + i(n/r - x))^2`, defined for
    /// `r != 0`. Agrees with [`Self::central_charge`] exactly.
    pub fn central_charge_key_form(&self, p: &HPoint, v: &MukaiVector) -> Result<QComplex> {
        if v.r.is_zero() {
            return Err(Error::RankZero);
        }
        let r = Rat::from_integer(v.r.clone());
        let d = self.d_rat();
        let mu = Rat::from_integer(v.n.clone()) / &r - p.x(); // n/r - x
        // (y + i*mu)^2 = (t^2/d - mu^2) + (2*mu*t) * i/sqrt(d)
        let t = p.t();
        let w = QComplex::new(t * t / &d - &mu * &mu, rat_int(2) * &mu * t);
        let lead = Rat::from_integer(self.square(v)) / (rat_int(2) * &r);
        Ok(QComplex::from_rat(lead).add(&w.scale(&(&r * &d))))
    }
}

/// A class `(r, n, s)` in the numerical lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MukaiVector {
    pub r: BigInt,
    pub n: BigInt,
    pub s: BigInt,
}

impl MukaiVector {
    pub fn new(r: impl Into<BigInt>, n: impl Into<BigInt>, s: impl Into<BigInt>) -> Self {
        MukaiVector { r: r.into(), n: n.into(), s: s.into() }
    }

    /// The class of a point: `(0, 0, 1)`.
    pub fn skyscraper() -> Self {
        MukaiVector::new(0, 0, 1)
    }

    /// `gcd(r, n, s) = 1`.
    pub fn is_primitive(&self) -> bool {
        self.r.gcd(&self.n).gcd(&self.s).is_one()
    }

    pub fn neg(&self) -> Self {
        MukaiVector { r: -&self.r, n: -&self.n, s: -&self.s }
    }

    /// Slope `n/r` of a positive-rank class.
    pub fn slope(&self) -> Option<Rat> {
        if self.r.is_zero() {
            None
        } else {
            Some(Rat::new(self.n.clone(), self.r.clone()))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.n.is_zero() && self.s.is_zero()
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.n, self.s)
    }
}

impl std::ops::Add for &MukaiVector {
    type Output = MukaiVector;
    fn add(self, rhs: &MukaiVector) -> MukaiVector {
        MukaiVector { r: &self.r + &rhs.r, n: &self.n + &rhs.n, s: &self.s + &rhs.s }
    }
}

impl std::ops::Sub for &MukaiVector {
    type Output = MukaiVector;
    fn sub(self, rhs: &MukaiVector) -> MukaiVector {
        MukaiVector { r: &self.r - &rhs.r, n: &self.n - &rhs.n, s: &self.s - &rhs.s }
    }
}

/// A complexified lattice vector, produced by the section map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexClass {
    pub r: ExactComplex,
    pub n: ExactComplex,
    pub s: ExactComplex,
}

impl ComplexClass {
    /// Complexified pairing `2d*n*n' - r*s' - r'*s`.
    pub fn pairing(&self, other: &ComplexClass, ctx: &K3Context) -> ExactComplex {
        let two_d = BigInt::from(2) * ctx.d();
        self.n
            .mul(&other.n, ctx)
            .scale_int(&two_d)
            .sub(&self.r.mul(&other.s, ctx))
            .sub(&other.r.mul(&self.s, ctx))
    }

    pub fn is_isotropic(&self, ctx: &K3Context) -> bool {
        self.pairing(self, ctx).is_zero()
    }

    pub fn conj(&self) -> ComplexClass {
        ComplexClass { r: self.r.conj(), n: self.n.conj(), s: self.s.conj() }
    }

    /// Sign of `<self, conj(self)>`, which is real. Positive exactly when the
    /// class spans a positive 2-plane, e.g. for the section map on the upper
    /// half plane.
    pub fn self_conj_pairing_sign(&self, ctx: &K3Context) -> i32 {
        let p = self.pairing(&self.conj(), ctx);
        debug_assert!(p.is_real());
        p.re.sign(ctx)
    }
}

/// Normalizes a spherical class to positive rank; spherical classes always
/// have `r != 0`.
pub fn normalize_spherical_sign(delta: &MukaiVector) -> MukaiVector {
    if delta.r.is_negative() {
        delta.neg()
    } else {
        delta.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn ctx(d: i64) -> K3Context {
        K3Context::new(d).unwrap()
    }

    fn v(r: i64, n: i64, s: i64) -> MukaiVector {
        MukaiVector::new(r, n, s)
    }

    fn hp(x: Rat, t: Rat) -> HPoint {
        HPoint::new(x, t).unwrap()
    }

    #[test]
    fn context_rejects_nonpositive_degree() {
        assert!(K3Context::new(0).is_err());
        assert!(K3Context::new(-3).is_err());
        assert!(K3Context::new(1).is_ok());
    }

    #[test]
    fn pairing_examples() {
        let c1 = ctx(1);
        assert_eq!(c1.pairing(&v(0, 0, 1), &v(0, 0, 1)), BigInt::from(0));
        assert_eq!(c1.pairing(&v(1, 0, 1), &v(1, 0, 1)), BigInt::from(-2));
        // <(0,0,1), (r,n,s)> = -r
        for (r, n, s) in [(3, 1, 4), (-2, 5, 7), (0, 0, 1)] {
            assert_eq!(c1.pairing(&v(0, 0, 1), &v(r, n, s)), BigInt::from(-r));
        }
        let c2 = ctx(2);
        assert_eq!(c2.pairing(&v(1, 1, 1), &v(1, 1, 1)), BigInt::from(2));
    }

    #[test]
    fn pairing_symmetric_bilinear_small_range() {
        let c = ctx(2);
        let range = -3i64..=3;
        for a in range.clone() {
            for b in range.clone() {
                for e in range.clone() {
                    let u = v(a, b, e);
                    let w = v(b, e, a);
                    let z = v(e, a, b);
                    assert_eq!(c.pairing(&u, &w), c.pairing(&w, &u));
                    // bilinearity in the first slot
                    assert_eq!(
                        c.pairing(&(&u + &w), &z),
                        c.pairing(&u, &z) + c.pairing(&w, &z)
                    );
                }
            }
        }
    }

    #[test]
    fn predicate_examples() {
        let c1 = ctx(1);
        assert!(c1.is_spherical(&v(2, 1, 1)));
        assert!(c1.is_isotropic(&v(1, 1, 1)));
        for d in 1..=5 {
            let c = ctx(d);
            assert!(c.is_isotropic(&v(0, 0, 1)));
            assert!(v(0, 0, 1).is_primitive());
        }
        assert!(!v(2, 4, 6).is_primitive());
    }

    #[test]
    fn reflect_examples() {
        let c = ctx(1);
        let delta = v(1, 0, 1);
        assert_eq!(c.reflect(&v(0, 0, 1), &delta).unwrap(), v(-1, 0, 0));
        assert_eq!(c.reflect(&v(-1, 0, 0), &delta).unwrap(), v(0, 0, 1));
        for d in 1..=4 {
            let c = ctx(d);
            let delta = v(1, 0, 1); // spherical for every d
            assert!(c.is_spherical(&delta));
            assert_eq!(c.reflect(&delta, &delta).unwrap(), delta.neg());
        }
        // non-spherical mirror rejected
        assert!(matches!(
            c.reflect(&v(1, 2, 3), &v(1, 1, 1)),
            Err(Error::NonSpherical(_))
        ));
    }

    #[test]
    fn reflect_is_involution_and_isometry() {
        let c = ctx(1);
        // all spherical (r, n) with |r|, |n| <= 20, s forced; both signs of
        // the mirror act identically
        for r in 1i64..=20 {
            for n in -20i64..=20 {
                let num = n * n + 1;
                if num % r != 0 {
                    continue;
                }
                let delta = v(r, n, num / r);
                assert!(c.is_spherical(&delta));
                for a in -2i64..=2 {
                    for b in -2i64..=2 {
                        for e in -2i64..=2 {
                            let u = v(a, b, e);
                            let ru = c.reflect(&u, &delta).unwrap();
                            assert_eq!(c.reflect(&ru, &delta).unwrap(), u);
                            assert_eq!(c.reflect(&u, &delta.neg()).unwrap(), ru);
                            let w = v(b, a, e);
                            let rw = c.reflect(&w, &delta).unwrap();
                            assert_eq!(c.pairing(&ru, &rw), c.pairing(&u, &w));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn twist_on_skyscraper_examples() {
        let c = ctx(1);
        assert_eq!(c.twist_on_skyscraper(&v(1, 0, 1)).unwrap(), v(-1, 0, 0));
        let img = c.twist_on_skyscraper(&v(2, 1, 1)).unwrap();
        assert_eq!(img, v(-4, -2, -1));
        assert!(c.is_isotropic(&img));
        // definitional identity with reflect
        for d in 1..=3 {
            let c = ctx(d);
            for (r, n) in [(1i64, 0i64), (1, 1), (1, -2)] {
                let s = (d * n * n + 1) / r;
                let delta = v(r, n, s);
                assert_eq!(
                    c.twist_on_skyscraper(&delta).unwrap(),
                    c.reflect(&MukaiVector::skyscraper(), &delta).unwrap()
                );
            }
        }
    }

    #[test]
    fn exp_class_examples() {
        let c = ctx(1);
        let e = c.exp_class(&hp(rat_int(0), rat_int(1))); // z = i
        assert_eq!(e.r, ExactComplex::one());
        assert_eq!(e.n, ExactComplex::from_gaussian(rat_int(0), rat_int(1)));
        assert_eq!(e.s, ExactComplex::from_rat(rat_int(-1)));
        assert!(e.is_isotropic(&c));

        let c2 = ctx(2);
        let z = ExactComplex::from_gaussian(rat_int(1), rat_int(1)); // 1 + i
        let e2 = c2.exp_class_complex(&z);
        assert_eq!(e2.s, ExactComplex::from_gaussian(rat_int(0), rat_int(4))); // 2(1+i)^2 = 4i
        assert!(e2.is_isotropic(&c2));

        // boundary excluded for half-plane input
        assert!(HPoint::new(rat_int(0), rat_int(0)).is_err());
    }

    #[test]
    fn exp_class_pairs_positively_with_conjugate() {
        for d in 1..=4 {
            let c = ctx(d);
            for (x, t) in [(rat_int(0), rat_int(1)), (rat(1, 2), rat(2, 5)), (rat(-7, 3), rat(5, 1))] {
                let e = c.exp_class(&hp(x, t));
                assert!(e.is_isotropic(&c));
                assert_eq!(e.self_conj_pairing_sign(&c), 1);
            }
        }
    }

    #[test]
    fn central_charge_examples() {
        // Z(skyscraper) = -1 for every d and z
        for d in 1..=3 {
            let c = ctx(d);
            let z = hp(rat(3, 7), rat(2, 5));
            let got = c.central_charge(&z, &MukaiVector::skyscraper());
            assert_eq!(got, QComplex::from_rat(rat_int(-1)));
        }
        let c = ctx(1);
        assert!(c
            .central_charge(&hp(rat_int(0), rat_int(1)), &v(1, 0, 1))
            .is_zero());
        assert_eq!(
            c.central_charge(&hp(rat_int(0), rat_int(2)), &v(1, 0, 1)),
            QComplex::from_rat(rat_int(3))
        );
    }

    #[test]
    fn central_charge_matches_complexified_pairing() {
        for d in 1..=3 {
            let c = ctx(d);
            let p = hp(rat(1, 3), rat(4, 5));
            for (r, n, s) in [(1i64, 2i64, 3i64), (0, 1, -2), (-3, 0, 7)] {
                let w = v(r, n, s);
                let z = c.central_charge(&p, &w);
                let via_pairing = c.exp_class(&p).pairing(
                    &ComplexClass {
                        r: ExactComplex::from_rat(rat_int(r)),
                        n: ExactComplex::from_rat(rat_int(n)),
                        s: ExactComplex::from_rat(rat_int(s)),
                    },
                    &c,
                );
                assert_eq!(ExactComplex::from_qcomplex(&z, &c), via_pairing);
            }
        }
    }

    #[test]
    fn key_form_matches_definition() {
        for d in 1..=3 {
            let c = ctx(d);
            for (x, t) in [(rat_int(0), rat_int(1)), (rat(1, 2), rat(2, 3)), (rat(-5, 4), rat(7, 2))] {
                let p = hp(x, t);
                for (r, n, s) in [(1i64, 0i64, 1i64), (2, 1, 1), (-3, 5, 2), (7, -2, 0)] {
                    let w = v(r, n, s);
                    assert_eq!(
                        c.central_charge_key_form(&p, &w).unwrap(),
                        c.central_charge(&p, &w)
                    );
                }
            }
        }
        let c = ctx(1);
        assert!(matches!(
            c.central_charge_key_form(&hp(rat_int(0), rat_int(1)), &v(0, 1, 1)),
            Err(Error::RankZero)
        ));
    }
}
