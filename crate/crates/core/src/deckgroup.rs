//! Word calculus in the free product of loop generators (one infinite cyclic
//! factor per spherical point) with a central generator, and its image under
//! the monodromy substitution: each loop letter becomes a squared twist, the
//! central letter a double shift.
//!
//! The squared twists act trivially both on the lattice and on the half
//! plane; the action operations compute that honestly, one reflection or one
//! matrix factor at a time, rather than short-circuiting to the identity.
//!
//! The free product is a model: words in distinct generators never collapse
//! here, and no search for relations between squared twists is performed.

use crate::halfplane::{twist_moebius, MoebiusMap};
use crate::lattice::{normalize_spherical_sign, K3Context, MukaiVector};
use crate::spherical::SphericalClass;
use crate::Result;

/// A generator of the loop group: a loop around one spherical point, or the
/// central rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LoopGen {
    /// Loop around the point of a spherical class; the class is stored with
    /// positive rank since opposite classes share the point.
    Spherical(MukaiVector),
    /// The central generator (a full rotation of the frame).
    Central,
}

impl LoopGen {
    pub fn spherical(delta: &MukaiVector) -> Self {
        LoopGen::Spherical(normalize_spherical_sign(delta))
    }
}

/// A word in the loop generators; not necessarily reduced.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LoopWord {
    pub letters: Vec<(LoopGen, i64)>,
}

impl LoopWord {
    pub fn empty() -> Self {
        LoopWord::default()
    }

    pub fn letter(gen: LoopGen, exp: i64) -> Self {
        LoopWord { letters: vec![(gen, exp)] }
    }

    pub fn concat(&self, other: &LoopWord) -> LoopWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        LoopWord { letters }
    }

    pub fn inverse(&self) -> LoopWord {
        LoopWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|(g, e)| (g.clone(), -e))
                .collect(),
        }
    }

    /// Canonical normal form: central letters are summed into one trailing
    /// exponent, adjacent equal spherical letters are merged, and vanishing
    /// exponents cancel (iteratively, so `a b b^-1 a^-1` collapses).
    pub fn reduce(&self) -> LoopWord {
        let mut central = 0i64;
        let mut stack: Vec<(MukaiVector, i64)> = Vec::new();
        for (gen, exp) in &self.letters {
            if *exp == 0 {
                continue;
            }
            match gen {
                LoopGen::Central => central += exp,
                LoopGen::Spherical(delta) => match stack.last_mut() {
                    Some((top, e)) if top == delta => {
                        *e += exp;
                        if *e == 0 {
                            stack.pop();
                        }
                    }
                    _ => stack.push((delta.clone(), *exp)),
                },
            }
        }
        let mut letters: Vec<(LoopGen, i64)> = stack
            .into_iter()
            .map(|(d, e)| (LoopGen::Spherical(d), e))
            .collect();
        if central != 0 {
            letters.push((LoopGen::Central, central));
        }
        LoopWord { letters }
    }

    pub fn is_empty_word(&self) -> bool {
        self.reduce().letters.is_empty()
    }
}

/// A reduced word in squared twists together with a count of double shifts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DeckWord {
    /// Letters `(delta, k)` standing for the `k`-th power of the squared
    /// twist in `delta`; adjacent letters carry distinct classes.
    pub letters: Vec<(MukaiVector, i64)>,
    /// Number of double shifts (the central direct factor).
    pub shift2: i64,
}

/// Letterwise monodromy substitution: loop letters become squared twists,
/// central letters accumulate as double shifts. Reduction commutes with the
/// substitution, so this is a homomorphism.
pub fn monodromy(w: &LoopWord) -> DeckWord {
    let reduced = w.reduce();
    let mut letters = Vec::new();
    let mut shift2 = 0i64;
    for (gen, exp) in reduced.letters {
        match gen {
            LoopGen::Spherical(delta) => letters.push((delta, exp)),
            LoopGen::Central => shift2 += exp,
        }
    }
    DeckWord { letters, shift2 }
}

impl DeckWord {
    pub fn concat(&self, other: &DeckWord) -> DeckWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        let merged = LoopWord {
            letters: letters
                .into_iter()
                .map(|(d, e)| (LoopGen::Spherical(d), e))
                .collect(),
        }
        .reduce();
        let mut out = monodromy(&merged);
        out.shift2 = self.shift2 + other.shift2;
        out
    }
}

/// Applies a deck word to a lattice vector, one reflection at a time: each
/// unit of a letter exponent contributes two reflections in its class, each
/// double shift two sign flips. The outcome is always `v` itself, but that is
/// asserted by the callers, not assumed here.
pub fn cohomology_action(ctx: &K3Context, w: &DeckWord, v: &MukaiVector) -> Result<MukaiVector> {
    let mut out = v.clone();
    for (delta, exp) in &w.letters {
        for _ in 0..(2 * exp.unsigned_abs()) {
            out = ctx.reflect(&out, delta)?;
        }
    }
    for _ in 0..(2 * w.shift2.unsigned_abs()) {
        out = out.neg();
    }
    Ok(out)
}

/// Composes the half-plane maps of a deck word: each letter contributes the
/// twist map raised to twice its exponent; shifts act trivially. Deck words
/// always compose to the identity since each twist map is an involution.
pub fn halfplane_action(ctx: &K3Context, w: &DeckWord) -> Result<MoebiusMap> {
    let mut out = MoebiusMap::identity();
    for (delta, exp) in &w.letters {
        let class = SphericalClass::new(delta.clone(), ctx)?;
        let m = twist_moebius(&class, ctx);
        out = out.compose(&m.pow(2 * exp));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: i64) -> K3Context {
        K3Context::new(d).unwrap()
    }

    fn v(r: i64, n: i64, s: i64) -> MukaiVector {
        MukaiVector::new(r, n, s)
    }

    fn la(delta: &MukaiVector, e: i64) -> LoopWord {
        LoopWord::letter(LoopGen::spherical(delta), e)
    }

    fn g(e: i64) -> LoopWord {
        LoopWord::letter(LoopGen::Central, e)
    }

    #[test]
    fn reduce_examples() {
        let a = v(1, 0, 1);
        let b = v(2, 1, 1);

        assert!(la(&a, 1).concat(&la(&a, -1)).is_empty_word());

        let w = la(&a, 1).concat(&g(1)).concat(&la(&a, -1)).reduce();
        assert_eq!(w.letters, vec![(LoopGen::Central, 1)]);

        let w = la(&a, 1).concat(&la(&b, 1)).concat(&la(&b, 2)).reduce();
        assert_eq!(
            w.letters,
            vec![
                (LoopGen::spherical(&a), 1),
                (LoopGen::spherical(&b), 3),
            ]
        );

        // cascading cancellation
        let w = la(&a, 1)
            .concat(&la(&b, 1))
            .concat(&la(&b, -1))
            .concat(&la(&a, -1));
        assert!(w.is_empty_word());

        // opposite spherical classes name the same generator
        assert_eq!(LoopGen::spherical(&a), LoopGen::spherical(&a.neg()));
    }

    #[test]
    fn reduce_is_idempotent() {
        let a = v(1, 0, 1);
        let b = v(2, 1, 1);
        let w = la(&a, 2)
            .concat(&g(-1))
            .concat(&la(&b, 1))
            .concat(&la(&b, -1))
            .concat(&la(&a, 1));
        let r1 = w.reduce();
        assert_eq!(r1.reduce(), r1);
    }

    #[test]
    fn monodromy_examples() {
        let a = v(1, 0, 1);
        let b = v(2, 1, 1);

        let dw = monodromy(&la(&a, 1));
        assert_eq!(dw.letters, vec![(a.clone(), 1)]);
        assert_eq!(dw.shift2, 0);

        let dw = monodromy(&g(3));
        assert!(dw.letters.is_empty());
        assert_eq!(dw.shift2, 3);

        let w = la(&a, 1).concat(&la(&b, 1)).concat(&la(&a, -1));
        let dw = monodromy(&w);
        assert_eq!(
            dw.letters,
            vec![(a.clone(), 1), (b.clone(), 1), (a.clone(), -1)]
        );
    }

    #[test]
    fn monodromy_is_a_homomorphism() {
        let a = v(1, 0, 1);
        let b = v(2, 1, 1);
        let u = la(&a, 1).concat(&g(1)).concat(&la(&b, -2));
        let w = la(&b, 2).concat(&la(&a, 1)).concat(&g(-1));
        assert_eq!(
            monodromy(&u.concat(&w)),
            monodromy(&u).concat(&monodromy(&w))
        );
    }

    #[test]
    fn cohomology_action_is_trivial() {
        let c = ctx(1);
        let a = v(1, 0, 1);
        let b = v(2, 1, 1);
        let test_vectors = [v(1, 2, 3), v(0, 0, 1), v(-4, 1, 0)];

        let words = [
            monodromy(&la(&a, 1)),
            monodromy(&LoopWord::empty()),
            monodromy(&la(&a, 1).concat(&la(&b, 1))),
            monodromy(&la(&a, -2).concat(&g(3)).concat(&la(&b, 1))),
        ];
        for w in &words {
            for tv in &test_vectors {
                assert_eq!(cohomology_action(&c, w, tv).unwrap(), *tv);
            }
        }
    }

    #[test]
    fn halfplane_action_is_trivial() {
        let c = ctx(1);
        let a = v(1, 0, 1);
        let b = v(2, 1, 1);
        for w in [
            monodromy(&la(&a, 1)),
            monodromy(&la(&a, 1).concat(&la(&b, -3)).concat(&g(2))),
            monodromy(&LoopWord::empty()),
        ] {
            assert!(halfplane_action(&c, &w).unwrap().is_identity());
        }
        // a single (odd) twist is genuinely nontrivial, in contrast
        let class = SphericalClass::new(a, &c).unwrap();
        assert!(!twist_moebius(&class, &c).is_identity());
    }
}
