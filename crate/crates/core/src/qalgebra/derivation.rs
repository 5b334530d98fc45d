use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{AlgElement, AlgebraSpec, Coeff, Generator, Letter, Symbol, FORMAL_INDICES};
use crate::error::{Error, Result};
use crate::scalars::{q_pow, scalar_int, scalar_rational, Scalar};

/// A derivation given by its values on the four generators, extended by the
/// Leibniz rule. Coefficients are differentiated through `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    spec: AlgebraSpec,
    /// Images in `all_generators` order: `g1, g1*, g2, g2*`.
    images: [AlgElement; 4],
    /// `d(K) = sum_a formal[a] K_a`.
    formal: [Scalar; 3],
    /// `d(q^e) = e * q_log * q^e`; zero for honest derivations.
    q_log: Scalar,
    /// `d(t)`, always central.
    t_image: Coeff,
    /// `d(g) = diag[i] * g` for every generator, when that holds.
    diag: Option<[Coeff; 4]>,
}

impl Derivation {
    /// Builds the derivation with images `images[g]` for `g` in
    /// `all_generators` order.
    pub fn new(spec: AlgebraSpec, images: [AlgElement; 4], formal: [Scalar; 3]) -> Result<Self> {
        Self::with_q_log(spec, images, formal, Scalar::zero())
    }

    /// Hermitian derivation from the images of the two non-adjoint
    /// generators; the adjoint images are `d(g)^*`.
    pub fn hermitian(spec: AlgebraSpec, g1: AlgElement, g2: AlgElement, formal: [Scalar; 3]) -> Result<Self> {
        let images = [g1.clone(), g1.star(), g2.clone(), g2.star()];
        Self::new(spec, images, formal)
    }

    /// Like [`Derivation::new`] but also acting on the deformation
    /// parameter. Used to exhibit ill-defined maps.
    pub fn with_q_log(spec: AlgebraSpec, images: [AlgElement; 4], formal: [Scalar; 3], q_log: Scalar) -> Result<Self> {
        for im in &images {
            if im.spec() != spec {
                return Err(Error::MixedAlgebras(im.spec().to_string(), spec.to_string()));
            }
        }
        if !spec.is_formal() && formal.iter().any(|f| !f.is_zero()) {
            return Err(Error::Invalid(format!("{spec} has no formal symbols to differentiate")));
        }
        let t_image = if spec.is_torus() {
            Coeff::zero()
        } else {
            let z = AlgElement::generator(spec, Generator::Z)?;
            let zs = AlgElement::generator(spec, Generator::ZStar)?;
            let dt = &(&images[0] * &zs) + &(&z * &images[1]);
            dt.as_central().ok_or_else(|| {
                Error::RelationViolation(format!("d(Z Z*) = {dt} is not central"))
            })?
        };
        let diag = diagonal_part(spec, &images);
        Ok(Derivation {
            spec,
            images,
            formal,
            q_log,
            t_image,
            diag,
        })
    }

    pub fn spec(&self) -> AlgebraSpec {
        self.spec
    }

    pub fn image(&self, g: Generator) -> &AlgElement {
        &self.images[g.table_index()]
    }

    pub fn images(&self) -> &[AlgElement; 4] {
        &self.images
    }

    pub fn formal_coefficients(&self) -> &[Scalar; 3] {
        &self.formal
    }

    /// `d(t)` (zero on the torus).
    pub fn t_image(&self) -> &Coeff {
        &self.t_image
    }

    /// `sum_k c_k d_k` for real rational `c_k`.
    pub fn combination(spec: AlgebraSpec, terms: &[(BigRational, &Derivation)]) -> Result<Self> {
        let mut images: [AlgElement; 4] = std::array::from_fn(|_| AlgElement::zero(spec));
        let mut formal: [Scalar; 3] = std::array::from_fn(|_| Scalar::zero());
        let mut q_log = Scalar::zero();
        for (c, d) in terms {
            if d.spec != spec {
                return Err(Error::MixedAlgebras(d.spec.to_string(), spec.to_string()));
            }
            if c.is_zero() {
                continue;
            }
            let s = scalar_rational(c.clone());
            for k in 0..4 {
                images[k] = &images[k] + &d.images[k].scale_scalar(&s);
            }
            for k in 0..3 {
                formal[k] = &formal[k] + &(&s * &d.formal[k]);
            }
            q_log = &q_log + &(&s * &d.q_log);
        }
        Self::with_q_log(spec, images, formal, q_log)
    }

    /// `d(c)` for a central coefficient.
    pub fn apply_coeff(&self, c: &Coeff) -> Coeff {
        let mut out = if self.t_image.is_zero() || c.is_constant() {
            Coeff::zero()
        } else {
            &c.d_dt() * &self.t_image
        };
        if !self.q_log.is_zero() {
            let half = &self.q_log * &scalar_rational(BigRational::new(1.into(), 2.into()));
            let dq = c.map_coeffs(|s| &s.euler_derivative() * &half);
            out = &out + &dq;
        }
        out
    }

    /// `d` of a single formal symbol.
    fn apply_symbol(&self, s: Symbol) -> Result<AlgElement> {
        let spec = self.spec;
        let mut out = AlgElement::zero(spec);
        if self.formal.iter().all(|f| f.is_zero()) {
            return Ok(out);
        }
        let first = || -> Result<AlgElement> {
            let mut acc = AlgElement::zero(spec);
            for a in 1..=FORMAL_INDICES {
                let f = &self.formal[(a - 1) as usize];
                if !f.is_zero() {
                    acc = &acc + &AlgElement::symbol(spec, Symbol::D(a))?.scale_scalar(f);
                }
            }
            Ok(acc)
        };
        match s {
            Symbol::K => out = first()?,
            Symbol::KInv => {
                let kinv = AlgElement::symbol(spec, Symbol::KInv)?;
                out = -&(&(&kinv * &first()?) * &kinv);
            }
            Symbol::D(b) => {
                for a in 1..=FORMAL_INDICES {
                    let f = &self.formal[(a - 1) as usize];
                    if !f.is_zero() {
                        out = &out + &AlgElement::symbol(spec, Symbol::second(a, b))?.scale_scalar(f);
                    }
                }
            }
            Symbol::DD(..) => return Err(Error::DerivationOrderExceeded(s.name())),
        }
        Ok(out)
    }

    /// `d` of a single word letter, as a sum of words.
    fn apply_letter(&self, l: Letter) -> Result<AlgElement> {
        match l {
            Letter::Sym(s) => self.apply_symbol(s),
            Letter::Base(a, b) => {
                let spec = self.spec;
                if let Some(diag) = &self.diag {
                    // every generator is an eigenvector with a central eigenvalue
                    let (ia, ib) = (if a >= 0 { 0 } else { 1 }, if b >= 0 { 2 } else { 3 });
                    let ev = &diag[ia].scale(&scalar_int(a.abs())) + &diag[ib].scale(&scalar_int(b.abs()));
                    return Ok(AlgElement::monomial(spec, &[l], ev));
                }
                let g1 = if a >= 0 { 0 } else { 1 };
                let g2 = if b >= 0 { 2 } else { 3 };
                let mut factors = Vec::new();
                factors.extend(std::iter::repeat(g1).take(a.unsigned_abs() as usize));
                factors.extend(std::iter::repeat(g2).take(b.unsigned_abs() as usize));
                let gens = spec.all_generators();
                let elems: Vec<AlgElement> = factors
                    .iter()
                    .map(|&k| AlgElement::generator(spec, gens[k]))
                    .collect::<Result<_>>()?;
                let images: Vec<AlgElement> = factors.iter().map(|&k| self.images[k].clone()).collect();
                Ok(leibniz_product(spec, &elems, &images))
            }
        }
    }

    /// Applies the derivation to an arbitrary element.
    pub fn apply(&self, x: &AlgElement) -> Result<AlgElement> {
        if x.spec() != self.spec {
            return Err(Error::MixedAlgebras(x.spec().to_string(), self.spec.to_string()));
        }
        let spec = self.spec;
        let mut out = AlgElement::zero(spec);
        for (w, c) in x.terms() {
            let dc = self.apply_coeff(c);
            if !dc.is_zero() {
                out = &out + &AlgElement::monomial(spec, w, dc);
            }
            for k in 0..w.len() {
                let dl = self.apply_letter(w[k])?;
                if dl.is_zero() {
                    continue;
                }
                let left = AlgElement::monomial(spec, &w[..k], c.clone());
                let right = AlgElement::monomial(spec, &w[k + 1..], Coeff::one());
                out = &out + &(&(&left * &dl) * &right);
            }
        }
        Ok(out)
    }

    /// `d(g^*) = d(g)^*` on every generator and `d` commutes with the star
    /// on the formal symbols.
    pub fn is_hermitian(&self) -> bool {
        let gens_ok = (0..4).all(|k| self.images[k ^ 1] == self.images[k].star());
        let formal_ok = self.formal.iter().all(|f| {
            use crate::field::Conjugate;
            f.conjugate() == *f
        });
        gens_ok && formal_ok && self.q_log.is_zero()
    }

    /// `d(q^e) = e * q_log * q^e`, as used by relation checks.
    fn apply_scalar(&self, s: &Scalar) -> Scalar {
        if self.q_log.is_zero() {
            return Scalar::zero();
        }
        let half = &self.q_log * &scalar_rational(BigRational::new(1.into(), 2.into()));
        &s.euler_derivative() * &half
    }
}

fn diagonal_part(spec: AlgebraSpec, images: &[AlgElement; 4]) -> Option<[Coeff; 4]> {
    let gens = spec.all_generators();
    let mut out: [Coeff; 4] = std::array::from_fn(|_| Coeff::zero());
    for k in 0..4 {
        let im = &images[k];
        if im.is_zero() {
            continue;
        }
        let letter = gens[k].letter();
        if im.terms().len() != 1 {
            return None;
        }
        let (w, c) = im.terms().iter().next().unwrap();
        if w.as_slice() != [letter] {
            return None;
        }
        out[k] = c.clone();
    }
    Some(out)
}

/// `d(x_1 ... x_n) = sum_k x_1 .. d(x_k) .. x_n`.
fn leibniz_product(spec: AlgebraSpec, factors: &[AlgElement], images: &[AlgElement]) -> AlgElement {
    let n = factors.len();
    // prefix[k] = x_1 .. x_k, suffix[k] = x_{k+1} .. x_n
    let mut prefix = vec![AlgElement::one(spec)];
    for f in factors {
        let p = prefix.last().unwrap() * f;
        prefix.push(p);
    }
    let mut suffix = vec![AlgElement::one(spec); n + 1];
    for k in (0..n).rev() {
        suffix[k] = &factors[k] * &suffix[k + 1];
    }
    let mut out = AlgElement::zero(spec);
    for k in 0..n {
        if images[k].is_zero() {
            continue;
        }
        out = &out + &(&(&prefix[k] * &images[k]) * &suffix[k + 1]);
    }
    out
}

/// One side of a defining relation: a sum of `scalar * x_1 ... x_n`.
type RelationSide = Vec<(Scalar, Vec<AlgElement>)>;

fn side_value(spec: AlgebraSpec, side: &RelationSide) -> AlgElement {
    let mut out = AlgElement::zero(spec);
    for (c, fs) in side {
        let p = fs.iter().fold(AlgElement::one(spec), |acc, f| &acc * f);
        out = &out + &p.scale_scalar(c);
    }
    out
}

fn side_derivative(d: &Derivation, side: &RelationSide, images: &dyn Fn(&AlgElement) -> Result<AlgElement>) -> Result<AlgElement> {
    let spec = d.spec;
    let mut out = AlgElement::zero(spec);
    for (c, fs) in side {
        let p = fs.iter().fold(AlgElement::one(spec), |acc, f| &acc * f);
        out = &out + &p.scale_scalar(&d.apply_scalar(c));
        let ims = fs.iter().map(images).collect::<Result<Vec<_>>>()?;
        out = &out + &leibniz_product(spec, fs, &ims).scale_scalar(c);
    }
    Ok(out)
}

/// The defining relations of an algebra as `(name, lhs, rhs)`.
pub(crate) fn defining_relations(spec: AlgebraSpec) -> Result<Vec<(String, RelationSide, RelationSide)>> {
    let one = Scalar::one();
    let g = |x: Generator| AlgElement::generator(spec, x);
    let mut rels = Vec::new();
    let prod = |a: AlgElement, b: AlgElement| vec![(one.clone(), vec![a, b])];
    let unit = || vec![(one.clone(), Vec::new())];
    if spec.is_torus() {
        use Generator::*;
        rels.push(("V U = q U V".to_string(), prod(g(V)?, g(U)?), vec![(q_pow(1), vec![g(U)?, g(V)?])]));
        rels.push(("U U* = 1".into(), prod(g(U)?, g(UStar)?), unit()));
        rels.push(("U* U = 1".into(), prod(g(UStar)?, g(U)?), unit()));
        rels.push(("V V* = 1".into(), prod(g(V)?, g(VStar)?), unit()));
        rels.push(("V* V = 1".into(), prod(g(VStar)?, g(V)?), unit()));
    } else {
        use Generator::*;
        let qr = |e: i64, a: AlgElement, b: AlgElement| vec![(q_pow(e), vec![a, b])];
        rels.push(("W Z = q Z W".to_string(), prod(g(W)?, g(Z)?), qr(1, g(Z)?, g(W)?)));
        rels.push(("W* Z = q^(-1) Z W*".into(), prod(g(WStar)?, g(Z)?), qr(-1, g(Z)?, g(WStar)?)));
        rels.push(("W Z* = q^(-1) Z* W".into(), prod(g(W)?, g(ZStar)?), qr(-1, g(ZStar)?, g(W)?)));
        rels.push(("W* Z* = q Z* W*".into(), prod(g(WStar)?, g(ZStar)?), qr(1, g(ZStar)?, g(WStar)?)));
        rels.push(("Z* Z = Z Z*".into(), prod(g(ZStar)?, g(Z)?), prod(g(Z)?, g(ZStar)?)));
        rels.push(("W* W = W W*".into(), prod(g(WStar)?, g(W)?), prod(g(W)?, g(WStar)?)));
        let mut rhs = unit();
        rhs.push((-&one, vec![g(Z)?, g(ZStar)?]));
        rels.push(("W W* = 1 - Z Z*".into(), prod(g(W)?, g(WStar)?), rhs));
    }
    if spec.is_formal() {
        let k = AlgElement::symbol(spec, Symbol::K)?;
        let kinv = AlgElement::symbol(spec, Symbol::KInv)?;
        rels.push(("K Kinv = 1".into(), prod(k.clone(), kinv.clone()), unit()));
        rels.push(("Kinv K = 1".into(), prod(kinv, k), unit()));
    }
    Ok(rels)
}

/// `f(lhs) - f(rhs)` for every defining relation of `spec`, where `f` is
/// applied to each generator factor and products are taken in `target`.
pub(crate) fn relation_images(
    spec: AlgebraSpec,
    target: AlgebraSpec,
    f: &dyn Fn(&AlgElement) -> Result<AlgElement>,
) -> Result<Vec<(String, AlgElement)>> {
    let eval = |side: &RelationSide| -> Result<AlgElement> {
        let mut out = AlgElement::zero(target);
        for (c, fs) in side {
            let mut p = AlgElement::one(target);
            for x in fs {
                p = p.checked_mul(&f(x)?)?;
            }
            out = out.checked_add(&p.scale_scalar(c))?;
        }
        Ok(out)
    };
    defining_relations(spec)?
        .into_iter()
        .map(|(name, lhs, rhs)| Ok((name, eval(&lhs)?.checked_sub(&eval(&rhs)?)?)))
        .collect()
}

/// `d(lhs) - d(rhs)` for every defining relation, computed by the Leibniz
/// rule on the unreduced factorizations.
pub fn relation_residuals(d: &Derivation) -> Result<Vec<(String, AlgElement)>> {
    let spec = d.spec;
    let images = |x: &AlgElement| d.apply(x);
    let mut out = Vec::new();
    for (name, lhs, rhs) in defining_relations(spec)? {
        debug_assert_eq!(side_value(spec, &lhs), side_value(spec, &rhs), "{name}");
        let r = &side_derivative(d, &lhs, &images)? - &side_derivative(d, &rhs, &images)?;
        out.push((name, r));
    }
    Ok(out)
}

/// Fails with [`Error::RelationViolation`] naming the first relation whose
/// two sides differentiate differently.
pub fn check_derivation_well_defined(d: &Derivation) -> Result<()> {
    let bad: Vec<String> = relation_residuals(d)?
        .into_iter()
        .filter(|(_, r)| !r.is_zero())
        .map(|(name, r)| format!("{name} (residual {r})"))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::RelationViolation(bad.join("; ")))
    }
}
