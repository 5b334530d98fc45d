//! Built-in algebras, derivations, calculi and embeddings.

use num_traits::{One, Zero};

use crate::calculus::{HermitianMetric, LieAlgebra, ModVec, RealCalculus};
use crate::connection::{levi_civita, Connection};
use crate::matrix::RationalMatrix;
use crate::morphism::{
    construct_hom, induced_metric, iso_psi_from_phi, make_embedding, torus_automorphism, torus_automorphism_inverse, AlgebraMap,
    CalculusHomomorphism, Embedding,
};
use crate::error::{Error, Result};
use crate::qalgebra::{AlgElement, AlgebraSpec, BaseAlgebra, Coeff, Derivation, Generator, Symbol};
use crate::scalars::{imaginary_unit, Scalar};

/// The localized 3-sphere with the formal conformal factor.
pub fn formal_sphere_spec() -> AlgebraSpec {
    AlgebraSpec::formal_factor_ext(BaseAlgebra::Sphere3Loc).expect("valid base")
}

/// The torus with the transported formal conformal factor.
pub fn formal_torus_spec() -> AlgebraSpec {
    AlgebraSpec::formal_factor_ext(BaseAlgebra::Torus).expect("valid base")
}

fn unit_vector(spec: AlgebraSpec, a: usize) -> [Scalar; 3] {
    std::array::from_fn(|k| if spec.is_formal() && k == a { Scalar::one() } else { Scalar::zero() })
}

/// `delta_1 U = iU, delta_1 V = 0` and `delta_2 U = 0, delta_2 V = iV`.
pub fn torus_derivations(spec: AlgebraSpec) -> Result<Vec<Derivation>> {
    let u = AlgElement::generator(spec, Generator::U)?;
    let v = AlgElement::generator(spec, Generator::V)?;
    let i = imaginary_unit();
    let zero = AlgElement::zero(spec);
    Ok(vec![
        Derivation::hermitian(spec, u.scale_scalar(&i), zero.clone(), unit_vector(spec, 0))?,
        Derivation::hermitian(spec, zero, v.scale_scalar(&i), unit_vector(spec, 1))?,
    ])
}

/// `d_1 Z = iZ`, `d_2 W = iW`, `d_3 Z = Z |W|^2`, `d_3 W = -W |Z|^2`.
pub fn sphere_derivations(spec: AlgebraSpec) -> Result<Vec<Derivation>> {
    let z = AlgElement::generator(spec, Generator::Z)?;
    let w = AlgElement::generator(spec, Generator::W)?;
    let i = imaginary_unit();
    let zero = AlgElement::zero(spec);
    Ok(vec![
        Derivation::hermitian(spec, z.scale_scalar(&i), zero.clone(), unit_vector(spec, 0))?,
        Derivation::hermitian(spec, zero, w.scale_scalar(&i), unit_vector(spec, 1))?,
        Derivation::hermitian(
            spec,
            z.scale(&Coeff::one_minus_t()),
            -&w.scale(&Coeff::t()),
            unit_vector(spec, 2),
        )?,
    ])
}

/// The conformal factor `K = H H^*` multiplying the round metric.
#[derive(Clone, Debug, PartialEq)]
pub enum ConformalFactor {
    One,
    /// The formal symbol `K` with inverse `Kinv`.
    FormalK,
    /// A concrete hermitian element with a registered inverse.
    Element { k: AlgElement, k_inv: AlgElement },
}

impl ConformalFactor {
    /// `K = t(1 - t)`, i.e. `H = ZW`.
    pub fn zw() -> Result<Self> {
        let spec = AlgebraSpec::sphere3_loc();
        let k = AlgElement::central(spec, &Coeff::t() * &Coeff::one_minus_t())?;
        let k_inv = k.invert()?;
        Ok(ConformalFactor::Element { k, k_inv })
    }

    /// `(K, K^{-1})` as elements of `spec`.
    pub fn elements(&self, spec: AlgebraSpec) -> Result<(AlgElement, AlgElement)> {
        match self {
            ConformalFactor::One => Ok((AlgElement::one(spec), AlgElement::one(spec))),
            ConformalFactor::FormalK => Ok((AlgElement::symbol(spec, Symbol::K)?, AlgElement::symbol(spec, Symbol::KInv)?)),
            ConformalFactor::Element { k, k_inv } => Ok((k.embed_into(spec)?, k_inv.embed_into(spec)?)),
        }
    }

    /// The algebra the metric lives in.
    pub fn sphere_spec(&self) -> AlgebraSpec {
        match self {
            ConformalFactor::FormalK => formal_sphere_spec(),
            _ => AlgebraSpec::sphere3_loc(),
        }
    }
}

/// The flat calculus on the torus with `E_a = phi(delta_a)`.
pub fn torus_calculus(spec: AlgebraSpec) -> Result<RealCalculus> {
    if !spec.is_torus() {
        return Err(Error::UnknownGenerator("U".into(), spec.to_string()));
    }
    Ok(RealCalculus::free(LieAlgebra::abelian(torus_derivations(spec)?)?))
}

/// The calculus on the 3-sphere generated by `d_1, d_2, d_3`.
pub fn sphere_calculus(spec: AlgebraSpec) -> Result<RealCalculus> {
    if !spec.is_sphere() {
        return Err(Error::UnknownGenerator("Z".into(), spec.to_string()));
    }
    Ok(RealCalculus::free(LieAlgebra::abelian(sphere_derivations(spec)?)?))
}

/// `diag(c_1, c_2)` with scalar entries.
pub fn constant_torus_metric(spec: AlgebraSpec, c1: Scalar, c2: Scalar) -> Result<HermitianMetric> {
    HermitianMetric::diagonal(vec![AlgElement::scalar(spec, c1), AlgElement::scalar(spec, c2)])
}

/// Diagonal metric `c_a K` with inverse `K^{-1} c_a^{-1}` for central `c_a`.
pub fn conformal_diagonal_metric(spec: AlgebraSpec, coeffs: &[Coeff], factor: &ConformalFactor) -> Result<HermitianMetric> {
    let (k, k_inv) = factor.elements(spec)?;
    let n = coeffs.len();
    let zero = AlgElement::zero(spec);
    let mut h = vec![vec![zero.clone(); n]; n];
    let mut inv = h.clone();
    for (a, c) in coeffs.iter().enumerate() {
        let c_inv = c
            .inverse()
            .ok_or_else(|| Error::UnsupportedInversion(crate::qalgebra::render_coeff(c).into_string()))?;
        h[a][a] = k.scale(c);
        inv[a][a] = k_inv.scale(&c_inv);
        if !spec.admits_coeff(&c_inv) {
            return Err(Error::UnsupportedInversion(format!("{} in {spec}", crate::qalgebra::render_coeff(c).into_string())));
        }
    }
    HermitianMetric::new(h, inv)
}

/// The metric `H diag(t, 1 - t, t(1 - t)) H^*` on the localized sphere.
pub fn sphere_metric(factor: &ConformalFactor) -> Result<HermitianMetric> {
    let coeffs = [Coeff::t(), Coeff::one_minus_t(), &Coeff::t() * &Coeff::one_minus_t()];
    conformal_diagonal_metric(factor.sphere_spec(), &coeffs, factor)
}

/// The torus in the localized 3-sphere via `Z -> lambda U`, `W -> mu V`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusInSphere {
    pub sphere: RealCalculus,
    pub h: HermitianMetric,
    pub nabla: Connection,
    pub torus: RealCalculus,
    pub embedding: Embedding,
}

impl TorusInSphere {
    pub fn hom(&self) -> &CalculusHomomorphism {
        self.embedding.hom()
    }

    pub fn h_target(&self) -> &HermitianMetric {
        self.embedding.target_metric()
    }
}

/// `(phi, psi)` with `phi(Z) = lambda U`, `phi(W) = mu V`,
/// `psi(delta_i) = d_i`.
pub fn torus_in_sphere_hom(lambda: &Scalar, mu: &Scalar, factor: &ConformalFactor) -> Result<CalculusHomomorphism> {
    let sspec = factor.sphere_spec();
    let tspec = if sspec.is_formal() { formal_torus_spec() } else { AlgebraSpec::torus() };
    let sphere = sphere_calculus(sspec)?;
    let torus = torus_calculus(tspec)?;
    let u = AlgElement::generator(tspec, Generator::U)?;
    let v = AlgElement::generator(tspec, Generator::V)?;
    let phi = AlgebraMap::new(sspec, tspec, u.scale_scalar(lambda), v.scale_scalar(mu))?;
    let psi = RationalMatrix::from_ints(&[&[1, 0, 0], &[0, 1, 0]])?;
    construct_hom(&sphere, &torus, phi, psi)
}

/// The full isometric embedding with complement `E_3` and induced `h'`.
pub fn torus_in_sphere(lambda: &Scalar, mu: &Scalar, factor: &ConformalFactor) -> Result<TorusInSphere> {
    let hom = torus_in_sphere_hom(lambda, mu, factor)?;
    let h = sphere_metric(factor)?;
    let nabla = levi_civita(hom.source(), &h)?;
    let h_target = induced_metric(&hom, &h)?;
    let sphere = hom.source().clone();
    let torus = hom.target().clone();
    let e3 = ModVec::basis(sphere.spec(), 3, 2);
    let embedding = make_embedding(hom, vec![e3], h.clone(), h_target, true, None)?;
    Ok(TorusInSphere {
        sphere,
        h,
        nabla,
        torus,
        embedding,
    })
}

/// The calculus automorphism of the torus attached to `(a, b; c, d)`:
/// `phi` is the inverse automorphism and `psi(delta) = alpha . delta . alpha^{-1}`.
pub fn sl2_hom(spec: AlgebraSpec, m: [i64; 4]) -> Result<CalculusHomomorphism> {
    let calc = torus_calculus(spec)?;
    let alpha = torus_automorphism(spec, m)?;
    let phi = torus_automorphism_inverse(spec, m)?;
    let psi = iso_psi_from_phi(&calc, &calc, &phi, &alpha)?;
    construct_hom(&calc, &calc, phi, psi)
}
