//! Exact complex coordinates for the rational model.
//!
//! Two number types live here. [`QComplex`] is the thin one: `a + b*i/sqrt(d)`
//! with `a, b` rational, which is exactly the field the half-plane coordinates
//! `(x, t)` generate. Central charges, Moebius images and cross-ratios all stay
//! inside it. [`ExactComplex`] is the general quadratic type
//! `(a + b*sqrt(d)) + (c + e*sqrt(d))*i`; it is only needed where a caller
//! hands in a complex number outside the rational model (the section map
//! accepts Gaussian rationals, for instance).

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::lattice::K3Context;
use crate::ratio::{rat_int, Rat};

/// `re + im_t * i / sqrt(d)` with rational `re`, `im_t`.
///
/// The imaginary slot stores the *t-coordinate*, i.e. `Im z * sqrt(d)`. A
/// half-plane point `(x, t)` is exactly `QComplex { re: x, im_t: t }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QComplex {
    pub re: Rat,
    pub im_t: Rat,
}

impl QComplex {
    pub fn new(re: Rat, im_t: Rat) -> Self {
        QComplex { re, im_t }
    }

    pub fn from_rat(re: Rat) -> Self {
        QComplex { re, im_t: Rat::zero() }
    }

    pub fn zero() -> Self {
        QComplex { re: Rat::zero(), im_t: Rat::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im_t.is_zero()
    }

    pub fn conj(&self) -> Self {
        QComplex { re: self.re.clone(), im_t: -self.im_t.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        QComplex { re: &self.re + &other.re, im_t: &self.im_t + &other.im_t }
    }

    pub fn sub(&self, other: &Self) -> Self {
        QComplex { re: &self.re - &other.re, im_t: &self.im_t - &other.im_t }
    }

    pub fn neg(&self) -> Self {
        QComplex { re: -self.re.clone(), im_t: -self.im_t.clone() }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        QComplex { re: &self.re * k, im_t: &self.im_t * k }
    }

    // (a + b i/sqrt(d))(a' + b' i/sqrt(d)) = (aa' - bb'/d) + (ab' + a'b) i/sqrt(d)
    pub fn mul(&self, other: &Self, ctx: &K3Context) -> Self {
        let d = ctx.d_rat();
        QComplex {
            re: &self.re * &other.re - &self.im_t * &other.im_t / &d,
            im_t: &self.re * &other.im_t + &self.im_t * &other.re,
        }
    }

    /// `|z|^2 = re^2 + im_t^2/d`, a rational.
    pub fn norm_sq(&self, ctx: &K3Context) -> Rat {
        &self.re * &self.re + &self.im_t * &self.im_t / ctx.d_rat()
    }

    pub fn inv(&self, ctx: &K3Context) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sq(ctx);
        Some(QComplex { re: &self.re / &n, im_t: -(&self.im_t) / &n })
    }

    pub fn div(&self, other: &Self, ctx: &K3Context) -> Option<Self> {
        other.inv(ctx).map(|i| self.mul(&i, ctx))
    }

    /// The square, kept explicit because it is the only nonlinear step the
    /// section map needs.
    pub fn square(&self, ctx: &K3Context) -> Self {
        self.mul(self, ctx)
    }
}

/// An element of `Q(sqrt(d))`: `a + b*sqrt(d)`.
///
/// When `d` is a perfect square the `sqrt(d)` part is folded into the rational
/// part at construction time, so `b == 0` is an invariant in that case and the
/// type stays a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadRat {
    pub a: Rat,
    pub b: Rat,
}

impl QuadRat {
    pub fn new(a: Rat, b: Rat, ctx: &K3Context) -> Self {
        if let Some(k) = ctx.sqrt_d_exact() {
            QuadRat { a: a + b * k, b: Rat::zero() }
        } else {
            QuadRat { a, b }
        }
    }

    pub fn from_rat(a: Rat) -> Self {
        QuadRat { a, b: Rat::zero() }
    }

    pub fn zero() -> Self {
        QuadRat::from_rat(Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadRat { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadRat { a: &self.a - &o.a, b: &self.b - &o.b }
    }

    pub fn neg(&self) -> Self {
        QuadRat { a: -self.a.clone(), b: -self.b.clone() }
    }

    pub fn mul(&self, o: &Self, ctx: &K3Context) -> Self {
        let d = ctx.d_rat();
        QuadRat {
            a: &self.a * &o.a + &d * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }

    pub fn inv(&self, ctx: &K3Context) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // a^2 - d b^2 = 0 with (a,b) != 0 would force sqrt(d) rational, and
        // square d is folded away at construction.
        let d = ctx.d_rat();
        let n = &self.a * &self.a - &d * &self.b * &self.b;
        Some(QuadRat { a: &self.a / &n, b: -(&self.b) / &n })
    }

    /// Sign of `a + b*sqrt(d)` as a real number: -1, 0 or 1.
    pub fn sign(&self, ctx: &K3Context) -> i32 {
        let (sa, sb) = (sign(&self.a), sign(&self.b));
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // Opposite signs: compare a^2 against d b^2.
        let d = ctx.d_rat();
        let lhs = &self.a * &self.a;
        let rhs = &d * &self.b * &self.b;
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }
}

fn sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// A complex number with real and imaginary parts in `Q(sqrt(d))`.
///
/// Contains both the rational model (`re` rational, `im` a rational multiple
/// of `sqrt(d)`) and the Gaussian rationals (`im` rational) as exact special
/// cases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactComplex {
    pub re: QuadRat,
    pub im: QuadRat,
}

impl ExactComplex {
    pub fn new(re: QuadRat, im: QuadRat) -> Self {
        ExactComplex { re, im }
    }

    pub fn from_rat(a: Rat) -> Self {
        ExactComplex { re: QuadRat::from_rat(a), im: QuadRat::zero() }
    }

    pub fn one() -> Self {
        ExactComplex::from_rat(rat_int(1))
    }

    /// `x + i*y` with both parts rational (a Gaussian rational).
    pub fn from_gaussian(x: Rat, y: Rat) -> Self {
        ExactComplex { re: QuadRat::from_rat(x), im: QuadRat::from_rat(y) }
    }

    /// Embeds `a + b*i/sqrt(d)`; the imaginary part becomes `(b/d)*sqrt(d)`.
    pub fn from_qcomplex(z: &QComplex, ctx: &K3Context) -> Self {
        ExactComplex {
            re: QuadRat::new(z.re.clone(), Rat::zero(), ctx),
            im: QuadRat::new(Rat::zero(), &z.im_t / ctx.d_rat(), ctx),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ExactComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn add(&self, o: &Self) -> Self {
        ExactComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ExactComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &Self, ctx: &K3Context) -> Self {
        ExactComplex {
            re: self.re.mul(&o.re, ctx).sub(&self.im.mul(&o.im, ctx)),
            im: self.re.mul(&o.im, ctx).add(&self.im.mul(&o.re, ctx)),
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        let k = Rat::from_integer(k.clone());
        let s = |q: &QuadRat| QuadRat { a: &q.a * &k, b: &q.b * &k };
        ExactComplex { re: s(&self.re), im: s(&self.im) }
    }

    /// True when imaginary part vanishes.
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn ctx(d: i64) -> K3Context {
        K3Context::new(d).unwrap()
    }

    #[test]
    fn qcomplex_field_ops() {
        let c = ctx(2);
        // (1 + 3 i/sqrt2)(2 - 1 i/sqrt2) = (2 + 3/2) + (-1 + 6) i/sqrt2
        let z = QComplex::new(rat_int(1), rat_int(3));
        let w = QComplex::new(rat_int(2), rat_int(-1));
        let p = z.mul(&w, &c);
        assert_eq!(p, QComplex::new(rat(7, 2), rat_int(5)));
        // division undoes multiplication
        let back = p.div(&w, &c).unwrap();
        assert_eq!(back, z);
        assert_eq!(z.mul(&z.conj(), &c).re, z.norm_sq(&c));
    }

    #[test]
    fn quadrat_sign_and_inverse() {
        let c = ctx(2);
        // 3 - 2*sqrt(2) > 0, 2 - 2*sqrt(2) < 0
        assert_eq!(QuadRat::new(rat_int(3), rat_int(-2), &c).sign(&c), 1);
        assert_eq!(QuadRat::new(rat_int(2), rat_int(-2), &c).sign(&c), -1);
        let q = QuadRat::new(rat_int(1), rat(1, 2), &c);
        let i = q.inv(&c).unwrap();
        assert_eq!(q.mul(&i, &c), QuadRat::from_rat(rat_int(1)));
    }

    #[test]
    fn square_degree_folds_radical() {
        let c = ctx(4);
        let q = QuadRat::new(rat_int(1), rat(1, 2), &c); // 1 + sqrt(4)/2 = 2
        assert_eq!(q, QuadRat::from_rat(rat_int(2)));
        // and the folded type still inverts cleanly
        assert_eq!(q.inv(&c).unwrap(), QuadRat::from_rat(rat(1, 2)));
    }

    #[test]
    fn exact_complex_embeds_both_models() {
        let c = ctx(2);
        let z = QComplex::new(rat(1, 2), rat_int(3)); // 1/2 + 3 i/sqrt2
        let e = ExactComplex::from_qcomplex(&z, &c);
        // (3/2) sqrt(2) = 3/sqrt(2)
        assert_eq!(e.im, QuadRat::new(Rat::zero(), rat(3, 2), &c));
        let g = ExactComplex::from_gaussian(rat_int(1), rat_int(1));
        let sq = g.mul(&g, &c); // (1+i)^2 = 2i
        assert_eq!(sq, ExactComplex::from_gaussian(rat_int(0), rat_int(2)));
    }
}
