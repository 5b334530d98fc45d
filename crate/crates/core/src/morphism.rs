//! Real calculus homomorphisms, embeddings and orthogonal projections.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::calculus::{HermitianMetric, ModVec, RealCalculus};
use crate::error::{Error, Result};
use crate::field::Conjugate;
use crate::matrix::{Matrix, RationalMatrix, Solution};
use crate::qalgebra::relation_images;
use crate::qalgebra::{render_element, AlgElement, AlgebraSpec, Coeff, Generator, Letter, Symbol, FORMAL_INDICES};
use crate::scalars::{q_half_pow, scalar_rational, Scalar};

const NF: usize = FORMAL_INDICES as usize;

/// Images of the formal symbols under an algebra map.
#[derive(Clone, Debug, PartialEq)]
struct FormalImages {
    k: AlgElement,
    k_inv: AlgElement,
    first: [AlgElement; NF],
    second: [[AlgElement; NF]; NF],
}

/// A unital `*`-algebra map given on generators and formal symbols,
/// acting as the identity on scalars.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraMap {
    source: AlgebraSpec,
    target: AlgebraSpec,
    /// Images in `all_generators` order.
    gens: [AlgElement; 4],
    formal: Option<FormalImages>,
}

fn symbol_images(target: AlgebraSpec, s: &RationalMatrix) -> Result<FormalImages> {
    let sym = |x: Symbol| AlgElement::symbol(target, x);
    let rat = |r: &BigRational| scalar_rational(r.clone());
    let mut first: [AlgElement; NF] = std::array::from_fn(|_| AlgElement::zero(target));
    for (a, f) in first.iter_mut().enumerate() {
        for b in 0..NF {
            if !s.get(a, b).is_zero() {
                *f = &*f + &sym(Symbol::D(b as u8 + 1))?.scale_scalar(&rat(s.get(a, b)));
            }
        }
    }
    let mut second: [[AlgElement; NF]; NF] = std::array::from_fn(|_| std::array::from_fn(|_| AlgElement::zero(target)));
    for a in 0..NF {
        for b in 0..NF {
            for c in 0..NF {
                for d in 0..NF {
                    let w = s.get(a, c) * s.get(b, d);
                    if !w.is_zero() {
                        let k = sym(Symbol::second(c as u8 + 1, d as u8 + 1))?;
                        second[a][b] = &second[a][b] + &k.scale_scalar(&rat(&w));
                    }
                }
            }
        }
    }
    Ok(FormalImages {
        k: sym(Symbol::K)?,
        k_inv: sym(Symbol::KInv)?,
        first,
        second,
    })
}

impl AlgebraMap {
    /// The map with `g1 -> g1_image`, `g2 -> g2_image` (adjoints follow by
    /// the star). Formal symbols go to the same-named target symbols.
    pub fn new(source: AlgebraSpec, target: AlgebraSpec, g1_image: AlgElement, g2_image: AlgElement) -> Result<Self> {
        for im in [&g1_image, &g2_image] {
            if im.spec() != target {
                return Err(Error::MixedAlgebras(im.spec().to_string(), target.to_string()));
            }
        }
        let gens = [g1_image.clone(), g1_image.star(), g2_image.clone(), g2_image.star()];
        let formal = if source.is_formal() {
            if !target.is_formal() {
                return Err(Error::DomainMismatch(format!("formal symbols of {source} need images in {target}")));
            }
            Some(symbol_images(target, &RationalMatrix::identity(NF))?)
        } else {
            None
        };
        Ok(AlgebraMap { source, target, gens, formal })
    }

    /// Replaces the symbol images by `K_a -> sum_b s_ab K_b` and
    /// `K_ab -> sum s_ac s_bd K_cd`.
    pub fn with_formal_matrix(mut self, s: &RationalMatrix) -> Result<Self> {
        if s.rows() != NF || s.cols() != NF {
            return Err(Error::RankMismatch { expected: NF, found: s.rows() });
        }
        if self.formal.is_some() {
            self.formal = Some(symbol_images(self.target, s)?);
        }
        Ok(self)
    }

    /// Replaces the symbol images by explicit elements.
    pub fn with_formal_images(
        mut self,
        k: AlgElement,
        k_inv: AlgElement,
        first: [AlgElement; NF],
        second: [[AlgElement; NF]; NF],
    ) -> Result<Self> {
        if !self.source.is_formal() {
            return Err(Error::DomainMismatch(format!("{} has no formal symbols", self.source)));
        }
        self.formal = Some(FormalImages { k, k_inv, first, second });
        Ok(self)
    }

    pub fn identity(spec: AlgebraSpec) -> Result<Self> {
        let [g1, _, g2, _] = spec.all_generators();
        Self::new(spec, spec, AlgElement::generator(spec, g1)?, AlgElement::generator(spec, g2)?)
    }

    pub fn source(&self) -> AlgebraSpec {
        self.source
    }

    pub fn target(&self) -> AlgebraSpec {
        self.target
    }

    pub fn image(&self, g: Generator) -> &AlgElement {
        &self.gens[g.table_index()]
    }

    fn gen_power(&self, k: usize, e: i64) -> Result<AlgElement> {
        let base = if e >= 0 { &self.gens[k] } else { &self.gens[k + 1] };
        let mut out = AlgElement::one(self.target);
        for _ in 0..e.unsigned_abs() {
            out = out.checked_mul(base)?;
        }
        Ok(out)
    }

    fn letter_image(&self, l: &Letter) -> Result<AlgElement> {
        match *l {
            Letter::Base(a, b) => self.gen_power(0, a)?.checked_mul(&self.gen_power(2, b)?),
            Letter::Sym(s) => {
                let f = self
                    .formal
                    .as_ref()
                    .ok_or_else(|| Error::UnknownGenerator(s.name(), self.source.to_string()))?;
                Ok(match s {
                    Symbol::K => f.k.clone(),
                    Symbol::KInv => f.k_inv.clone(),
                    Symbol::D(a) => f.first[a as usize - 1].clone(),
                    Symbol::DD(a, b) => f.second[a as usize - 1][b as usize - 1].clone(),
                })
            }
        }
    }

    /// `phi(t)` where `t = Z Z^*`, which must be central.
    fn t_image(&self) -> Result<Coeff> {
        let tau = self.gens[0].checked_mul(&self.gens[1])?;
        tau.as_central()
            .ok_or_else(|| Error::RelationViolation(format!("phi(Z Z*) = {} is not central", render_element(&tau))))
    }

    /// Image of a central coefficient: `c(phi(t))`.
    pub fn apply_coeff(&self, c: &Coeff) -> Result<AlgElement> {
        if let Some(s) = c.as_constant() {
            return Ok(AlgElement::scalar(self.target, s));
        }
        let tau = self.t_image()?;
        let one_minus = &Coeff::one() - &tau;
        let not_inv = |x: &Coeff| Error::UnsupportedInversion(format!("{} under {}", crate::qalgebra::render_coeff(x).into_string(), self.target));
        let mut num = Coeff::zero();
        for s in c.numer().coeffs().iter().rev() {
            num = &(&num * &tau) + &Coeff::constant(s.clone());
        }
        let mut out = num;
        if c.t_exp() > 0 {
            let inv = tau.inverse().ok_or_else(|| not_inv(&tau))?;
            for _ in 0..c.t_exp() {
                out = &out * &inv;
            }
        }
        if c.w_exp() > 0 {
            let inv = one_minus.inverse().ok_or_else(|| not_inv(&one_minus))?;
            for _ in 0..c.w_exp() {
                out = &out * &inv;
            }
        }
        AlgElement::central(self.target, out)
    }

    pub fn apply(&self, x: &AlgElement) -> Result<AlgElement> {
        if x.spec() != self.source {
            return Err(Error::MixedAlgebras(x.spec().to_string(), self.source.to_string()));
        }
        let mut out = AlgElement::zero(self.target);
        for (w, c) in x.terms() {
            let mut term = self.apply_coeff(c)?;
            for l in w {
                term = term.checked_mul(&self.letter_image(l)?)?;
            }
            out = out.checked_add(&term)?;
        }
        Ok(out)
    }

    /// Applies the map to every coordinate.
    pub fn apply_vec(&self, m: &ModVec) -> Result<ModVec> {
        m.map(|x| self.apply(x))
    }

    /// Nonzero residuals of the defining relations and of star
    /// compatibility on the formal symbols.
    pub fn relation_violations(&self) -> Result<Vec<(String, AlgElement)>> {
        let f = |x: &AlgElement| self.apply(x);
        let mut out: Vec<_> = relation_images(self.source, self.target, &f)?
            .into_iter()
            .filter(|(_, r)| !r.is_zero())
            .collect();
        if let Some(fi) = &self.formal {
            let mut herm = vec![("phi(K)".to_string(), &fi.k)];
            herm.extend(fi.first.iter().enumerate().map(|(a, x)| (format!("phi(K_{})", a + 1), x)));
            for (name, x) in herm {
                let r = x - &x.star();
                if !r.is_zero() {
                    out.push((format!("{name} hermitian"), r));
                }
            }
        }
        Ok(out)
    }

    /// Fails with [`Error::RelationViolation`] unless every relation holds.
    pub fn check_relations(&self) -> Result<()> {
        let bad = self.relation_violations()?;
        if bad.is_empty() {
            return Ok(());
        }
        Err(Error::RelationViolation(
            bad.iter()
                .map(|(n, r)| format!("{n} (residual {})", render_element(r)))
                .collect::<Vec<_>>()
                .join("; "),
        ))
    }

    /// `next . self`.
    pub fn then(&self, next: &AlgebraMap) -> Result<AlgebraMap> {
        if self.target != next.source {
            return Err(Error::DomainMismatch(format!("{} vs {}", self.target, next.source)));
        }
        let gens = self.gens.clone().map(|g| next.apply(&g));
        let gens = [gens[0].clone()?, gens[1].clone()?, gens[2].clone()?, gens[3].clone()?];
        let formal = match &self.formal {
            None => None,
            Some(f) => {
                let first = f.first.clone().map(|x| next.apply(&x));
                let mut first_ok: [AlgElement; NF] = std::array::from_fn(|_| AlgElement::zero(next.target));
                for (a, x) in first.into_iter().enumerate() {
                    first_ok[a] = x?;
                }
                let mut second: [[AlgElement; NF]; NF] = std::array::from_fn(|_| std::array::from_fn(|_| AlgElement::zero(next.target)));
                for a in 0..NF {
                    for b in 0..NF {
                        second[a][b] = next.apply(&f.second[a][b])?;
                    }
                }
                Some(FormalImages {
                    k: next.apply(&f.k)?,
                    k_inv: next.apply(&f.k_inv)?,
                    first: first_ok,
                    second,
                })
            }
        };
        Ok(AlgebraMap {
            source: self.source,
            target: next.target,
            gens,
            formal,
        })
    }

    /// Elements of the source on which maps are compared: generators and
    /// the formal symbols up to first order.
    fn probe_elements(spec: AlgebraSpec) -> Result<Vec<AlgElement>> {
        let mut out = spec
            .all_generators()
            .iter()
            .map(|&g| AlgElement::generator(spec, g))
            .collect::<Result<Vec<_>>>()?;
        if spec.is_formal() {
            out.push(AlgElement::symbol(spec, Symbol::K)?);
            out.push(AlgElement::symbol(spec, Symbol::KInv)?);
            for a in 1..=FORMAL_INDICES {
                out.push(AlgElement::symbol(spec, Symbol::D(a))?);
            }
        }
        Ok(out)
    }

    /// Whether `self` and `other` agree on generators and formal symbols.
    pub fn agrees_with(&self, other: &AlgebraMap) -> Result<bool> {
        if self.source != other.source || self.target != other.target {
            return Ok(false);
        }
        for x in Self::probe_elements(self.source)? {
            if self.apply(&x)? != other.apply(&x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The torus automorphism `U -> U^a V^b`, `V -> U^c V^d` for
/// `ad - bc = 1`.
pub fn torus_automorphism(spec: AlgebraSpec, m: [i64; 4]) -> Result<AlgebraMap> {
    let [a, b, c, d] = m;
    if !spec.is_torus() || a * d - b * c != 1 {
        return Err(Error::Invalid(format!("({a},{b};{c},{d}) is not in SL(2,Z) over {spec}")));
    }
    let mono = |x: i64, y: i64| AlgElement::monomial(spec, &[Letter::Base(x, y)], Coeff::one());
    let map = AlgebraMap::new(spec, spec, mono(a, b), mono(c, d))?;
    // inverse of the symbol matrix of `torus_automorphism_inverse`
    let s = RationalMatrix::from_ints(&[&[d, -c, 0], &[-b, a, 0], &[0, 0, 1]])?;
    map.with_formal_matrix(&s)
}

/// The inverse automorphism `U -> q^{bd(a-c-1)/2} U^d V^{-b}`,
/// `V -> q^{ac(d-b-1)/2} U^{-c} V^a`.
pub fn torus_automorphism_inverse(spec: AlgebraSpec, m: [i64; 4]) -> Result<AlgebraMap> {
    let [a, b, c, d] = m;
    if !spec.is_torus() || a * d - b * c != 1 {
        return Err(Error::Invalid(format!("({a},{b};{c},{d}) is not in SL(2,Z) over {spec}")));
    }
    let mono = |x: i64, y: i64, k: i64| AlgElement::monomial(spec, &[Letter::Base(x, y)], Coeff::constant(q_half_pow(k)));
    let map = AlgebraMap::new(spec, spec, mono(d, -b, b * d * (a - c - 1)), mono(-c, a, a * c * (d - b - 1)))?;
    let s = RationalMatrix::from_ints(&[&[a, c, 0], &[b, d, 0], &[0, 0, 1]])?;
    map.with_formal_matrix(&s)
}

/// A real calculus homomorphism `(phi, psi, psi_hat)` from `C_A` to
/// `C_A'`. `psi` maps the target Lie algebra into the source one:
/// `psi(delta_i) = sum_a psi[i][a] d_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct CalculusHomomorphism {
    source: RealCalculus,
    target: RealCalculus,
    phi: AlgebraMap,
    psi: RationalMatrix,
    /// Rows are the coordinates of `Psi(delta_i)` in the source basis.
    tangent: RationalMatrix,
    /// Left inverse of `tangent^T`.
    coords: RationalMatrix,
}

fn unit(n: usize, a: usize) -> Vec<BigRational> {
    (0..n).map(|k| if k == a { BigRational::one() } else { BigRational::zero() }).collect()
}

/// Validates `(phi, psi)` and synthesizes `psi_hat`.
pub fn construct_hom(source: &RealCalculus, target: &RealCalculus, phi: AlgebraMap, psi: RationalMatrix) -> Result<CalculusHomomorphism> {
    if phi.source() != source.spec() || phi.target() != target.spec() {
        return Err(Error::DomainMismatch(format!(
            "phi: {} -> {} but calculi over {} and {}",
            phi.source(),
            phi.target(),
            source.spec(),
            target.spec()
        )));
    }
    let (n, n2) = (source.rank(), target.rank());
    if psi.rows() != n2 || psi.cols() != n {
        return Err(Error::RankMismatch { expected: n2, found: psi.rows() });
    }
    phi.check_relations()?;

    for i in 0..n2 {
        for j in 0..n2 {
            let lhs = source.lie().bracket(psi.row(i), psi.row(j));
            let br = target.lie().bracket(&unit(n2, i), &unit(n2, j));
            let rhs: Vec<BigRational> = (0..n)
                .map(|a| (0..n2).fold(BigRational::zero(), |s, k| s + &br[k] * psi.get(k, a)))
                .collect();
            if lhs != rhs {
                return Err(Error::NotLieHom(format!("[psi(delta_{}), psi(delta_{})] != psi([delta_{0}, delta_{1}])", i + 1, j + 1)));
            }
        }
    }

    let probes = AlgebraMap::probe_elements(source.spec())?;
    for i in 0..n2 {
        let delta = target.derivation(i);
        let pd = source.lie().combination(psi.row(i))?;
        for x in &probes {
            let lhs = delta.apply(&phi.apply(x)?)?;
            let rhs = phi.apply(&pd.apply(x)?)?;
            if lhs != rhs {
                return Err(Error::NotCompatible(format!(
                    "delta_{}(phi({})) = {} but phi(psi(delta_{0})({1})) = {}",
                    i + 1,
                    render_element(x),
                    render_element(&lhs),
                    render_element(&rhs)
                )));
            }
        }
    }

    // Psi(delta_i) = phi_source(psi(delta_i)) in source coordinates
    let tangent = psi.mul(source.anchor())?;
    if tangent.rank() < n2 {
        return Err(Error::AmbiguousModuleMap(format!("Psi(delta_i) span rank {} < {n2}", tangent.rank())));
    }
    let coords = tangent.transpose().left_inverse()?;
    Ok(CalculusHomomorphism {
        source: source.clone(),
        target: target.clone(),
        phi,
        psi,
        tangent,
        coords,
    })
}

impl CalculusHomomorphism {
    pub fn source(&self) -> &RealCalculus {
        &self.source
    }

    pub fn target(&self) -> &RealCalculus {
        &self.target
    }

    pub fn phi(&self) -> &AlgebraMap {
        &self.phi
    }

    pub fn psi(&self) -> &RationalMatrix {
        &self.psi
    }

    /// `Psi(delta_i)` in the source module.
    pub fn tangent(&self, i: usize) -> ModVec {
        ModVec::from_rational(self.source.spec(), self.tangent.row(i))
    }

    /// `Psi(X)` for `X = x^i delta_i`.
    pub fn tangent_along(&self, x: &[BigRational]) -> ModVec {
        let n = self.source.rank();
        let coords: Vec<BigRational> = (0..n)
            .map(|a| x.iter().enumerate().fold(BigRational::zero(), |s, (i, xi)| s + xi * self.tangent.get(i, a)))
            .collect();
        ModVec::from_rational(self.source.spec(), &coords)
    }

    /// The derivation `psi(X)` for `X = x^i delta_i`, as source coordinates.
    pub fn psi_coords(&self, x: &[BigRational]) -> Vec<BigRational> {
        (0..self.source.rank())
            .map(|a| x.iter().enumerate().fold(BigRational::zero(), |s, (i, xi)| s + xi * self.psi.get(i, a)))
            .collect()
    }

    /// Coordinates `c` with `m = Psi(delta_i) c^i`, or
    /// [`Error::NotTangential`].
    pub fn tangent_coords(&self, m: &ModVec) -> Result<Vec<AlgElement>> {
        let n = self.source.rank();
        if m.rank() != n {
            return Err(Error::RankMismatch { expected: n, found: m.rank() });
        }
        let spec = self.source.spec();
        let comb = |row: &[BigRational], v: &[AlgElement]| -> AlgElement {
            row.iter()
                .zip(v)
                .filter(|(r, x)| !r.is_zero() && !x.is_zero())
                .fold(AlgElement::zero(spec), |acc, (r, x)| &acc + &x.scale_scalar(&scalar_rational(r.clone())))
        };
        let c: Vec<AlgElement> = (0..self.target.rank()).map(|i| comb(self.coords.row(i), m.coords())).collect();
        let back = self.tangent.transpose();
        for a in 0..n {
            if comb(back.row(a), &c) != *m.coord(a) {
                return Err(Error::NotTangential(m.render("E")));
            }
        }
        Ok(c)
    }

    /// `psi_hat(Psi(delta_i) c^i) = phi'(delta_i) phi(c^i)`.
    pub fn psi_hat(&self, m: &ModVec) -> Result<ModVec> {
        let c = self.tangent_coords(m)?;
        let n2 = self.target.rank();
        let mut out = ModVec::zero(self.target.spec(), n2);
        for (i, ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let e = self.target.anchor_vector(&unit(n2, i));
            out = out.checked_add(&e.right_mul(&self.phi.apply(ci)?)?)?;
        }
        Ok(out)
    }

    /// `(g . f)`: `phi = phi_g . phi_f`, `psi = psi_f . psi_g`.
    pub fn then(&self, next: &CalculusHomomorphism) -> Result<CalculusHomomorphism> {
        if self.target != next.source {
            return Err(Error::DomainMismatch(format!(
                "target {} of rank {} vs source {} of rank {}",
                self.target.spec(),
                self.target.rank(),
                next.source.spec(),
                next.source.rank()
            )));
        }
        let phi = self.phi.then(&next.phi)?;
        let psi = next.psi.mul(&self.psi)?;
        construct_hom(&self.source, &next.target, phi, psi)
    }
}

/// `g . f` for `f: C_A -> C_A'` and `g: C_A' -> C_A''`.
pub fn compose(f: &CalculusHomomorphism, g: &CalculusHomomorphism) -> Result<CalculusHomomorphism> {
    f.then(g)
}

/// Flattens `elems` to scalar coordinates over a common denominator.
fn flatten(elems: &[AlgElement], keys: &mut Vec<(usize, Vec<Letter>, usize)>, tag: usize, out: &mut Vec<Vec<(usize, Scalar)>>) {
    let (mut ti, mut wi) = (0u32, 0u32);
    for x in elems {
        for c in x.terms().values() {
            ti = ti.max(c.t_exp());
            wi = wi.max(c.w_exp());
        }
    }
    let clear = Coeff::t_w_power(ti as i64, wi as i64);
    for x in elems {
        let mut row = Vec::new();
        for (w, c) in x.terms() {
            let p = &clear * c;
            for (k, s) in p.numer().coeffs().iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                let key = (tag, w.clone(), k);
                let idx = keys.iter().position(|kk| *kk == key).unwrap_or_else(|| {
                    keys.push(key);
                    keys.len() - 1
                });
                row.push((idx, s.clone()));
            }
        }
        out.push(row);
    }
}

/// `psi(delta) = phi^{-1} . delta . phi` for an isomorphism `phi` with
/// inverse `phi_inv`, expressed in the source derivation basis.
pub fn iso_psi_from_phi(source: &RealCalculus, target: &RealCalculus, phi: &AlgebraMap, phi_inv: &AlgebraMap) -> Result<RationalMatrix> {
    if phi.source() != source.spec() || phi.target() != target.spec() || phi_inv.source() != target.spec() || phi_inv.target() != source.spec() {
        return Err(Error::DomainMismatch("phi and its inverse do not match the calculi".into()));
    }
    phi.check_relations()?;
    phi_inv.check_relations()?;
    if !phi.then(phi_inv)?.agrees_with(&AlgebraMap::identity(source.spec())?)? || !phi_inv.then(phi)?.agrees_with(&AlgebraMap::identity(target.spec())?)? {
        return Err(Error::NotInvertible("phi^{-1} . phi or phi . phi^{-1} is not the identity on generators".into()));
    }
    let probes = AlgebraMap::probe_elements(source.spec())?;
    let n = source.rank();
    let mut rows = Vec::new();
    for i in 0..target.rank() {
        let delta = target.derivation(i);
        // columns: d_1(x), .., d_n(x), then the value
        let mut keys = Vec::new();
        let mut cols: Vec<Vec<Vec<(usize, Scalar)>>> = vec![Vec::new(); n + 1];
        for (tag, x) in probes.iter().enumerate() {
            let mut elems = (0..n).map(|a| source.derivation(a).apply(x)).collect::<Result<Vec<_>>>()?;
            elems.push(phi_inv.apply(&delta.apply(&phi.apply(x)?)?)?);
            let mut flat = Vec::new();
            flatten(&elems, &mut keys, tag, &mut flat);
            for (col, f) in cols.iter_mut().zip(flat) {
                col.push(f);
            }
        }
        let mut a = vec![vec![Scalar::zero(); n]; keys.len()];
        let mut b = vec![Scalar::zero(); keys.len()];
        for (col, entries) in cols.iter().enumerate() {
            for (k, s) in entries.iter().flatten() {
                if col < n {
                    a[*k][col] = s.clone();
                } else {
                    b[*k] = s.clone();
                }
            }
        }
        let a = Matrix::new(a)?;
        let x = match a.solve(&b) {
            Solution::Unique(x) => x,
            Solution::Inconsistent => return Err(Error::NotInBasisSpan(format!("phi^{{-1}} delta_{} phi", i + 1))),
            Solution::Underdetermined => return Err(Error::NotInBasisSpan(format!("derivation basis is degenerate on generators (delta_{})", i + 1))),
        };
        let row = x
            .iter()
            .map(|s| {
                s.as_constant()
                    .filter(|g| g.im.is_zero() && g.conjugate() == *g)
                    .map(|g| g.re)
                    .ok_or_else(|| Error::NotInBasisSpan(format!("coefficient {s} is not real rational")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    RationalMatrix::new(rows)
}

/// Inverts a matrix of algebra elements when it is diagonal with
/// invertible entries or has scalar entries.
pub(crate) fn invert_element_matrix(m: &[Vec<AlgElement>]) -> Option<Vec<Vec<AlgElement>>> {
    let n = m.len();
    let spec = m[0][0].spec();
    let diagonal = (0..n).all(|a| (0..n).all(|b| a == b || m[a][b].is_zero()));
    if diagonal {
        let mut out = vec![vec![AlgElement::zero(spec); n]; n];
        for a in 0..n {
            out[a][a] = m[a][a].invert().ok()?;
        }
        return Some(out);
    }
    let scalars: Option<Vec<Vec<Scalar>>> = m.iter().map(|r| r.iter().map(AlgElement::as_scalar).collect()).collect();
    let inv = Matrix::new(scalars?).ok()?.inverse().ok()?;
    Some(inv.data().iter().map(|r| r.iter().map(|s| AlgElement::scalar(spec, s.clone())).collect()).collect())
}

/// The induced metric `h'_ij = phi(h(Psi(delta_i), Psi(delta_j)))`.
pub fn induced_metric(f: &CalculusHomomorphism, h: &HermitianMetric) -> Result<HermitianMetric> {
    let n2 = f.target.rank();
    let mut entries = Vec::with_capacity(n2);
    for i in 0..n2 {
        let mut row = Vec::with_capacity(n2);
        for j in 0..n2 {
            let v = f.phi.apply(&h.eval(&f.tangent(i), &f.tangent(j))?)?;
            if !v.is_hermitian() {
                return Err(Error::NotHermitian(format!("h'(e_{}, e_{}) = {}", i + 1, j + 1, render_element(&v))));
            }
            row.push(v);
        }
        entries.push(row);
    }
    let inverse = invert_element_matrix(&entries)
        .ok_or_else(|| Error::UnsupportedInversion("induced metric matrix".into()))?;
    HermitianMetric::new(entries, inverse)
}

/// An embedding of real metric calculi with a chosen complement.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    hom: CalculusHomomorphism,
    complement: Vec<ModVec>,
    h: HermitianMetric,
    h_target: HermitianMetric,
    isometric: bool,
    /// `G_ij = h(Psi(delta_i), Psi(delta_j))`.
    gram_entries: Vec<Vec<AlgElement>>,
    /// `G` with a verified inverse.
    gram: Option<HermitianMetric>,
    /// Inverse of the matrix with columns `Psi(delta_i)`, then `xi_k`.
    combined_inv: Vec<Vec<AlgElement>>,
    /// `(target generator, preimage)` pairs certifying surjectivity.
    preimages: Vec<(String, AlgElement)>,
}

/// Exhibits a preimage of every target generator and formal symbol.
fn surjectivity_certificate(phi: &AlgebraMap) -> Result<Vec<(String, AlgElement)>> {
    let (src, tgt) = (phi.source(), phi.target());
    let mut candidates = Vec::new();
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            if (a, b) != (0, 0) {
                candidates.push(AlgElement::monomial(src, &[Letter::Base(a, b)], Coeff::one()));
            }
        }
    }
    let mut targets: Vec<(String, AlgElement)> = tgt
        .generators()
        .iter()
        .map(|&g| Ok((g.name().to_string(), AlgElement::generator(tgt, g)?)))
        .collect::<Result<_>>()?;
    if src.is_formal() {
        let mut syms = vec![Symbol::K, Symbol::KInv];
        for a in 1..=FORMAL_INDICES {
            syms.push(Symbol::D(a));
            candidates.push(AlgElement::symbol(src, Symbol::D(a))?);
            for b in a..=FORMAL_INDICES {
                syms.push(Symbol::second(a, b));
                candidates.push(AlgElement::symbol(src, Symbol::second(a, b))?);
            }
        }
        candidates.push(AlgElement::symbol(src, Symbol::K)?);
        candidates.push(AlgElement::symbol(src, Symbol::KInv)?);
        if tgt.is_formal() {
            for s in syms {
                targets.push((s.name(), AlgElement::symbol(tgt, s)?));
            }
        }
    }
    let images: Vec<AlgElement> = candidates.iter().map(|x| phi.apply(x)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    'targets: for (name, g) in targets {
        let (word, _) = g.terms().iter().next().expect("generator is a monomial");
        for (x, im) in candidates.iter().zip(&images) {
            if im.terms().len() != 1 {
                continue;
            }
            let (w, c) = im.terms().iter().next().unwrap();
            if w != word {
                continue;
            }
            let Some(s) = c.as_constant() else { continue };
            if s.is_zero() {
                continue;
            }
            let pre = x.scale_scalar(&(&Scalar::one() / &s));
            if phi.apply(&pre)? == g {
                out.push((name, pre));
                continue 'targets;
            }
        }
        return Err(Error::NotSurjective(format!("no preimage found for {name}")));
    }
    Ok(out)
}

/// Builds and validates an embedding. `combined_inverse` registers the
/// inverse of `[Psi(delta_1) .. | xi_1 ..]` when it is not rational.
pub fn make_embedding(
    hom: CalculusHomomorphism,
    complement: Vec<ModVec>,
    h: HermitianMetric,
    h_target: HermitianMetric,
    isometric: bool,
    combined_inverse: Option<Vec<Vec<AlgElement>>>,
) -> Result<Embedding> {
    let n = hom.source.rank();
    let n2 = hom.target.rank();
    let spec = hom.source.spec();
    if n2 + complement.len() != n || complement.iter().any(|v| v.rank() != n) {
        return Err(Error::NotComplement(format!("{n2} tangent and {} complement vectors in rank {n}", complement.len())));
    }
    let columns: Vec<ModVec> = (0..n2).map(|i| hom.tangent(i)).chain(complement.iter().cloned()).collect();
    let combined: Vec<Vec<AlgElement>> = (0..n).map(|a| columns.iter().map(|c| c.coord(a).clone()).collect()).collect();
    let combined_inv = match combined_inverse {
        Some(inv) => {
            let id = |l: &[Vec<AlgElement>], r: &[Vec<AlgElement>]| -> Result<bool> {
                for a in 0..n {
                    for c in 0..n {
                        let mut s = AlgElement::zero(spec);
                        for b in 0..n {
                            s = s.checked_add(&l[a][b].checked_mul(&r[b][c])?)?;
                        }
                        if s != if a == c { AlgElement::one(spec) } else { AlgElement::zero(spec) } {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            };
            if inv.len() != n || inv.iter().any(|r| r.len() != n) || !id(&combined, &inv)? || !id(&inv, &combined)? {
                return Err(Error::NotComplement("registered inverse of the combined basis is wrong".into()));
            }
            inv
        }
        None => {
            let rat: Option<Vec<Vec<BigRational>>> = combined
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| x.as_scalar().and_then(|s| s.as_constant()).filter(|g| g.im.is_zero()).map(|g| g.re))
                        .collect()
                })
                .collect();
            let rat = rat.ok_or_else(|| Error::NotComplement("combined basis is not rational; register its inverse".into()))?;
            let inv = RationalMatrix::new(rat)?
                .inverse()
                .map_err(|_| Error::NotComplement("M_Psi + complement is not direct".into()))?;
            inv.data()
                .iter()
                .map(|r| r.iter().map(|x| AlgElement::scalar(spec, scalar_rational(x.clone()))).collect())
                .collect()
        }
    };
    let gram_entries: Vec<Vec<AlgElement>> = (0..n2)
        .map(|i| (0..n2).map(|j| h.eval(&hom.tangent(i), &hom.tangent(j))).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut gram = None;
    if isometric {
        for i in 0..n2 {
            for (k, xi) in complement.iter().enumerate() {
                let v = h.eval(&hom.tangent(i), xi)?;
                if !v.is_zero() {
                    return Err(Error::NotOrthogonal(format!("h(Psi(delta_{}), xi_{}) = {}", i + 1, k + 1, render_element(&v))));
                }
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                if hom.phi.apply(&gram_entries[i][j])? != *h_target.entry(i, j) {
                    return Err(Error::Invalid(format!("h'(e_{}, e_{}) is not the induced value", i + 1, j + 1)));
                }
            }
        }
        if let Some(inv) = invert_element_matrix(&gram_entries) {
            gram = Some(HermitianMetric::new(gram_entries.clone(), inv)?);
        }
    }
    let preimages = surjectivity_certificate(&hom.phi)?;
    Ok(Embedding {
        hom,
        complement,
        h,
        h_target,
        isometric,
        gram_entries,
        gram,
        combined_inv,
        preimages,
    })
}

impl Embedding {
    pub fn hom(&self) -> &CalculusHomomorphism {
        &self.hom
    }

    pub fn complement(&self) -> &[ModVec] {
        &self.complement
    }

    pub fn metric(&self) -> &HermitianMetric {
        &self.h
    }

    pub fn target_metric(&self) -> &HermitianMetric {
        &self.h_target
    }

    pub fn is_isometric(&self) -> bool {
        self.isometric
    }

    /// Registers an inverse of the Gram matrix after checking both
    /// inverse identities.
    pub fn with_gram_inverse(mut self, inverse: Vec<Vec<AlgElement>>) -> Result<Self> {
        let g = HermitianMetric::new(self.gram_entries.clone(), inverse)?;
        if let Some((name, r)) = g.inverse_residuals().into_iter().find(|(_, r)| !r.is_zero()) {
            return Err(Error::GramSingular(format!("{name} residual {}", render_element(&r))));
        }
        self.gram = Some(g);
        Ok(self)
    }

    /// The Gram matrix with its inverse, when one is known.
    pub fn gram(&self) -> Option<&HermitianMetric> {
        self.gram.as_ref()
    }

    pub fn preimages(&self) -> &[(String, AlgElement)] {
        &self.preimages
    }

    /// Coefficients `c` with `P(m) = Psi(delta_i) c^i`.
    pub fn tangential_coeffs(&self, m: &ModVec) -> Result<Vec<AlgElement>> {
        let n = self.hom.source.rank();
        let n2 = self.hom.target.rank();
        let spec = self.hom.source.spec();
        if m.rank() != n {
            return Err(Error::RankMismatch { expected: n, found: m.rank() });
        }
        let mut c = vec![AlgElement::zero(spec); n2];
        if self.isometric {
            let g = self
                .gram
                .as_ref()
                .ok_or_else(|| Error::GramSingular("Gram matrix has no in-engine inverse".into()))?;
            let b: Vec<AlgElement> = (0..n2).map(|j| self.h.eval(&self.hom.tangent(j), m)).collect::<Result<_>>()?;
            for (i, ci) in c.iter_mut().enumerate() {
                for (j, bj) in b.iter().enumerate() {
                    *ci = ci.checked_add(&g.inverse_entry(i, j).checked_mul(bj)?)?;
                }
            }
        } else {
            for (i, ci) in c.iter_mut().enumerate() {
                for a in 0..n {
                    *ci = ci.checked_add(&self.combined_inv[i][a].checked_mul(m.coord(a))?)?;
                }
            }
        }
        Ok(c)
    }

    /// `(P(m), Pi(m))`.
    pub fn project(&self, m: &ModVec) -> Result<(ModVec, ModVec)> {
        let c = self.tangential_coeffs(m)?;
        let spec = self.hom.source.spec();
        let mut p = ModVec::zero(spec, m.rank());
        for (i, ci) in c.iter().enumerate() {
            if !ci.is_zero() {
                p = p.checked_add(&self.hom.tangent(i).right_mul(ci)?)?;
            }
        }
        let normal = m.checked_sub(&p)?;
        Ok((p, normal))
    }

    /// Whether the tangential `m` extends `m2`.
    pub fn is_extension(&self, m: &ModVec, m2: &ModVec) -> Result<bool> {
        let (_, normal) = self.project(m)?;
        if !normal.is_zero() {
            return Err(Error::NotTangential(m.render("E")));
        }
        Ok(self.hom.psi_hat(m)? == *m2)
    }
}
