use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{base_star, concat_words, push_letter, AlgebraSpec, Coeff, Generator, Letter, Symbol, Word};
use crate::error::{Error, Result};
use crate::scalars::{specialize_q, QValue, Scalar};

/// An element in canonical form: a finite sum of `coefficient * word` with
/// reduced words and nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgElement {
    spec: AlgebraSpec,
    terms: BTreeMap<Word, Coeff>,
}

impl AlgElement {
    pub fn zero(spec: AlgebraSpec) -> Self {
        AlgElement {
            spec,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(spec: AlgebraSpec) -> Self {
        Self::from_central_unchecked(spec, Coeff::one())
    }

    pub fn scalar(spec: AlgebraSpec, s: Scalar) -> Self {
        Self::from_central_unchecked(spec, Coeff::constant(s))
    }

    /// A central element; fails if `c` does not belong to the algebra
    /// (non-constant on the torus, non-polynomial on the plain sphere).
    pub fn central(spec: AlgebraSpec, c: Coeff) -> Result<Self> {
        if !spec.admits_coeff(&c) {
            return Err(Error::UnsupportedInversion(format!(
                "{} is not an element of {spec}",
                super::render_coeff(&c).into_string()
            )));
        }
        Ok(Self::from_central_unchecked(spec, c))
    }

    pub(crate) fn from_central_unchecked(spec: AlgebraSpec, c: Coeff) -> Self {
        Self::term_unchecked(spec, Vec::new(), c)
    }

    /// `t = Z Z^*` on a sphere.
    pub fn t(spec: AlgebraSpec) -> Result<Self> {
        if spec.is_torus() {
            return Err(Error::UnknownGenerator("t".into(), spec.to_string()));
        }
        Ok(Self::from_central_unchecked(spec, Coeff::t()))
    }

    pub fn generator(spec: AlgebraSpec, g: Generator) -> Result<Self> {
        if g.is_torus() != spec.is_torus() {
            return Err(Error::UnknownGenerator(g.name().into(), spec.to_string()));
        }
        Ok(Self::term_unchecked(spec, vec![g.letter()], Coeff::one()))
    }

    pub fn symbol(spec: AlgebraSpec, s: Symbol) -> Result<Self> {
        if !spec.is_formal() {
            return Err(Error::UnknownGenerator(s.name(), spec.to_string()));
        }
        let ok = match s {
            Symbol::K | Symbol::KInv => true,
            Symbol::D(a) => (1..=super::FORMAL_INDICES).contains(&a),
            Symbol::DD(a, b) => a >= 1 && a <= b && b <= super::FORMAL_INDICES,
        };
        if !ok {
            return Err(Error::UnknownGenerator(s.name(), spec.to_string()));
        }
        Ok(Self::term_unchecked(spec, vec![Letter::Sym(s)], Coeff::one()))
    }

    /// `c * word`, reducing the word first.
    pub fn monomial(spec: AlgebraSpec, word: &[Letter], c: Coeff) -> Self {
        let (k, w) = concat_words(spec, &[], word);
        Self::term_unchecked(spec, w, &k * &c)
    }

    fn term_unchecked(spec: AlgebraSpec, word: Word, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(word, c);
        }
        AlgElement { spec, terms }
    }

    pub fn spec(&self) -> AlgebraSpec {
        self.spec
    }

    pub fn terms(&self) -> &BTreeMap<Word, Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_central().is_some_and(|c| c.is_one())
    }

    /// The coefficient if `self` is central (no word letters).
    pub fn as_central(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// The scalar if `self` is a constant multiple of the identity.
    pub fn as_scalar(&self) -> Option<Scalar> {
        self.as_central()?.as_constant()
    }

    /// Re-tags an element into a larger algebra (plain sphere into the
    /// localized sphere, or any algebra into its formal extension).
    pub fn embed_into(&self, spec: AlgebraSpec) -> Result<Self> {
        let compatible = self.spec == spec
            || (self.spec.is_torus() == spec.is_torus()
                && (!self.spec.is_formal() || spec.is_formal())
                && (!self.spec.is_localized() || spec.is_localized()));
        if !compatible {
            return Err(Error::MixedAlgebras(self.spec.to_string(), spec.to_string()));
        }
        Ok(AlgElement {
            spec,
            terms: self.terms.clone(),
        })
    }

    fn same_spec(&self, other: &Self) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::MixedAlgebras(self.spec.to_string(), other.spec.to_string()))
        }
    }

    fn add_term(&mut self, word: Word, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_spec(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_spec(other)?;
        let mut out = Self::zero(self.spec);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let (k, w) = concat_words(self.spec, w1, w2);
                out.add_term(w, &(&k * c1) * c2);
            }
        }
        Ok(out)
    }

    /// Multiplies by a central coefficient.
    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero(self.spec);
        }
        AlgElement {
            spec: self.spec,
            terms: self
                .terms
                .iter()
                .map(|(w, x)| (w.clone(), x * c))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    pub fn scale_scalar(&self, s: &Scalar) -> Self {
        self.scale(&Coeff::constant(s.clone()))
    }

    /// The adjoint: reverses words, stars letters and conjugates
    /// coefficients. Formal symbols are self-adjoint.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(self.spec);
        for (w, c) in &self.terms {
            let mut coeff = c.conjugate();
            let mut word = Vec::with_capacity(w.len());
            for l in w.iter().rev() {
                let starred = match *l {
                    Letter::Base(a, b) => {
                        let (k, m) = base_star((a, b));
                        coeff = &coeff * &k;
                        Letter::Base(m.0, m.1)
                    }
                    Letter::Sym(s) => Letter::Sym(s),
                };
                push_letter(self.spec, &mut word, &mut coeff, starred);
            }
            out.add_term(word, coeff);
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        self.star() == *self
    }

    /// Exact two-sided inverse of a single invertible monomial: an
    /// invertible central coefficient times a word of invertible letters.
    pub fn invert(&self) -> Result<Self> {
        let unsupported = || Error::UnsupportedInversion(super::render_element(self));
        if self.terms.len() != 1 {
            return Err(unsupported());
        }
        let (w, c) = self.terms.iter().next().unwrap();
        let c_inv = c.inverse().ok_or_else(unsupported)?;
        if !self.spec.admits_coeff(&c_inv) {
            return Err(unsupported());
        }
        let mut inv = Self::from_central_unchecked(self.spec, c_inv);
        for l in w {
            let li = self.letter_inverse(*l).ok_or_else(unsupported)?;
            inv = li.checked_mul(&inv)?;
        }
        Ok(inv)
    }

    fn letter_inverse(&self, l: Letter) -> Option<Self> {
        let spec = self.spec;
        match l {
            Letter::Sym(Symbol::K) => Some(Self::term_unchecked(spec, vec![Letter::Sym(Symbol::KInv)], Coeff::one())),
            Letter::Sym(Symbol::KInv) => Some(Self::term_unchecked(spec, vec![Letter::Sym(Symbol::K)], Coeff::one())),
            Letter::Sym(_) => None,
            Letter::Base(a, b) => {
                if spec.is_torus() {
                    // U^a V^b (V^{-b} U^{-a}) = 1 and V^{-b} U^{-a} = q^{ab} U^{-a} V^{-b}
                    let (k, m) = base_star((a, b));
                    return Some(Self::term_unchecked(spec, vec![Letter::Base(m.0, m.1)], k));
                }
                if !spec.is_localized() {
                    return None;
                }
                // (Z^a W^b)^{-1} = (Z^a W^b)^* |Z|^{-2|a|} |W|^{-2|b|}
                let (k, m) = base_star((a, b));
                let c = &k * &Coeff::t_w_power(-a.abs(), -b.abs());
                Some(Self::term_unchecked(spec, vec![Letter::Base(m.0, m.1)], c))
            }
        }
    }

    /// Nonnegative or negative integer power (negative powers invert).
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut out = Self::one(self.spec);
        for _ in 0..e.unsigned_abs() {
            out = out.checked_mul(&base)?;
        }
        Ok(out)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Coeff) -> Result<Coeff>) -> Result<Self> {
        let mut out = Self::zero(self.spec);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Specializes the deformation parameter in every coefficient.
    pub fn specialize_q(&self, value: &QValue) -> Result<Self> {
        self.map_coeffs(|c| {
            let num = c.numer().coeffs().iter().map(|s| specialize_q(s, value)).collect::<Result<Vec<_>>>()?;
            Ok(Coeff::new(crate::poly::Poly::from_coeffs(num), c.t_exp(), c.w_exp()))
        })
    }

    /// Whether any word contains the given symbol.
    pub fn contains_symbol(&self, pred: impl Fn(Symbol) -> bool) -> bool {
        self.terms
            .keys()
            .any(|w| w.iter().any(|l| matches!(l, Letter::Sym(s) if pred(*s))))
    }
}

impl fmt::Display for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render_element(self))
    }
}

impl Add for &AlgElement {
    type Output = AlgElement;
    /// Panics on mixed algebras; see [`AlgElement::checked_add`].
    fn add(self, rhs: &AlgElement) -> AlgElement {
        self.checked_add(rhs).expect("mixed algebras in sum")
    }
}

impl Sub for &AlgElement {
    type Output = AlgElement;
    fn sub(self, rhs: &AlgElement) -> AlgElement {
        self.checked_sub(rhs).expect("mixed algebras in difference")
    }
}

impl Mul for &AlgElement {
    type Output = AlgElement;
    /// Panics on mixed algebras; see [`AlgElement::checked_mul`].
    fn mul(self, rhs: &AlgElement) -> AlgElement {
        self.checked_mul(rhs).expect("mixed algebras in product")
    }
}

impl Neg for &AlgElement {
    type Output = AlgElement;
    fn neg(self) -> AlgElement {
        AlgElement {
            spec: self.spec,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for AlgElement {
            type Output = AlgElement;
            fn $m(self, rhs: AlgElement) -> AlgElement {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for AlgElement {
    type Output = AlgElement;
    fn neg(self) -> AlgElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::BaseAlgebra;
    use crate::scalars::{q_pow, scalar_int};

    fn gen(spec: AlgebraSpec, g: Generator) -> AlgElement {
        AlgElement::generator(spec, g).unwrap()
    }

    /// Rewrites a generator word one adjacent swap at a time using only
    /// `VU = qUV`, `UU^* = U^*U = 1`, `VV^* = V^*V = 1`.
    fn brute_force_torus(word: &[Generator]) -> (i64, i64, i64) {
        use Generator::*;
        let mut w = word.to_vec();
        let mut q_exp = 0;
        loop {
            let mut changed = false;
            for k in 0..w.len().saturating_sub(1) {
                let (x, y) = (w[k], w[k + 1]);
                let is_v = |g| matches!(g, V | VStar);
                let is_u = |g| matches!(g, U | UStar);
                if (x == U && y == UStar) || (x == UStar && y == U) || (x == V && y == VStar) || (x == VStar && y == V) {
                    w.drain(k..k + 2);
                    changed = true;
                    break;
                }
                if is_v(x) && is_u(y) {
                    // V^s U^r = q^{rs} U^r V^s for signs r, s
                    let s = if x == V { 1 } else { -1 };
                    let r = if y == U { 1 } else { -1 };
                    q_exp += r * s;
                    w.swap(k, k + 1);
                    changed = true;
                    break;
                }
            }
            if !changed {
                break;
            }
        }
        let m = w.iter().map(|g| match g { U => 1, UStar => -1, _ => 0 }).sum();
        let n = w.iter().map(|g| match g { V => 1, VStar => -1, _ => 0 }).sum();
        (q_exp, m, n)
    }

    #[test]
    fn vu_is_q_uv() {
        let s = AlgebraSpec::torus();
        let vu = &gen(s, Generator::V) * &gen(s, Generator::U);
        let uv = &gen(s, Generator::U) * &gen(s, Generator::V);
        assert_eq!(vu, uv.scale_scalar(&q_pow(1)));
    }

    #[test]
    fn w_wstar_is_one_minus_t() {
        let s = AlgebraSpec::sphere3();
        let x = &gen(s, Generator::W) * &gen(s, Generator::WStar);
        assert_eq!(x.as_central().unwrap(), Coeff::one_minus_t());
    }

    #[test]
    fn word_product_matches_brute_force() {
        use Generator::*;
        let s = AlgebraSpec::torus();
        // (U V^2)(U^{-1} V)
        let word = [U, V, V, UStar, V];
        let (e, m, n) = brute_force_torus(&word);
        assert_eq!((e, m, n), (-2, 0, 3));
        let prod = word.iter().fold(AlgElement::one(s), |acc, g| &acc * &gen(s, *g));
        let v3 = gen(s, V).pow(3).unwrap();
        assert_eq!(prod, v3.scale_scalar(&q_pow(-2)));
    }

    #[test]
    fn star_of_uv() {
        use Generator::*;
        let s = AlgebraSpec::torus();
        let uv = &gen(s, U) * &gen(s, V);
        let expected = &gen(s, VStar) * &gen(s, UStar);
        assert_eq!(uv.star(), expected);
        let (e, m, n) = brute_force_torus(&[VStar, UStar]);
        assert_eq!((e, m, n), (1, -1, -1));
        assert_eq!(uv.star(), (&gen(s, UStar) * &gen(s, VStar)).scale_scalar(&q_pow(1)));
    }

    #[test]
    fn t_is_central() {
        let s = AlgebraSpec::sphere3();
        let t = AlgElement::t(s).unwrap();
        let z = gen(s, Generator::Z);
        assert_eq!(&t * &z, &z * &t);
    }

    #[test]
    fn inversions() {
        let s = AlgebraSpec::sphere3_loc();
        let x = AlgElement::central(s, &Coeff::t() * &Coeff::one_minus_t()).unwrap();
        let inv = x.invert().unwrap();
        assert_eq!(inv.as_central().unwrap(), Coeff::t_w_power(-1, -1));

        let f = AlgebraSpec::formal_factor_ext(BaseAlgebra::Sphere3Loc).unwrap();
        let k = AlgElement::symbol(f, Symbol::K).unwrap();
        let kinv = k.invert().unwrap();
        assert_eq!(kinv, AlgElement::symbol(f, Symbol::KInv).unwrap());
        assert!((&k * &kinv).is_one());

        let plain = AlgebraSpec::sphere3();
        assert!(matches!(gen(plain, Generator::Z).invert(), Err(Error::UnsupportedInversion(_))));
        let z = gen(s, Generator::Z);
        assert!((&z * &z.invert().unwrap()).is_one());
        assert!(matches!(
            AlgElement::symbol(f, Symbol::D(1)).unwrap().invert(),
            Err(Error::UnsupportedInversion(_))
        ));
    }

    #[test]
    fn mixed_algebras_are_rejected() {
        let a = AlgElement::one(AlgebraSpec::torus());
        let b = AlgElement::one(AlgebraSpec::sphere3());
        assert!(matches!(a.checked_mul(&b), Err(Error::MixedAlgebras(..))));
    }

    #[test]
    fn torus_coefficients_are_constants() {
        assert!(AlgElement::central(AlgebraSpec::torus(), Coeff::t()).is_err());
        assert!(AlgElement::central(AlgebraSpec::torus(), Coeff::constant(scalar_int(2))).is_ok());
    }
}
