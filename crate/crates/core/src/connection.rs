//! Affine connections on free real metric calculi: the Levi-Civita
//! connection, its verification, curvature and the Laplace operator.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::calculus::{HermitianMetric, ModVec, RealCalculus};
use crate::error::{Error, Result};
use crate::qalgebra::{render_element, AlgElement, AlgebraSpec};
use crate::report::Report;
use crate::scalars::{scalar_rational, Scalar};

/// Christoffel symbols `nabla_b E_c = E_a Gamma^a_bc`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    /// `gamma[a][b][c] = Gamma^a_bc`.
    gamma: Vec<Vec<Vec<AlgElement>>>,
}

fn half() -> Scalar {
    scalar_rational(BigRational::new(1.into(), 2.into()))
}

fn rat_scalar(r: &BigRational) -> Scalar {
    scalar_rational(r.clone())
}

impl Connection {
    pub fn new(gamma: Vec<Vec<Vec<AlgElement>>>) -> Result<Self> {
        let n = gamma.len();
        if n == 0 || gamma.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
            return Err(Error::RankMismatch { expected: n, found: 0 });
        }
        Ok(Connection { gamma })
    }

    pub fn zero(spec: AlgebraSpec, n: usize) -> Self {
        Connection {
            gamma: vec![vec![vec![AlgElement::zero(spec); n]; n]; n],
        }
    }

    pub fn rank(&self) -> usize {
        self.gamma.len()
    }

    pub fn spec(&self) -> AlgebraSpec {
        self.gamma[0][0][0].spec()
    }

    /// `Gamma^a_bc` (zero-based indices).
    pub fn gamma(&self, a: usize, b: usize, c: usize) -> &AlgElement {
        &self.gamma[a][b][c]
    }

    /// Copy with one symbol replaced.
    pub fn with_gamma(&self, a: usize, b: usize, c: usize, value: AlgElement) -> Self {
        let mut out = self.clone();
        out.gamma[a][b][c] = value;
        out
    }

    /// `nabla_b E_c`.
    pub fn nabla_basis(&self, b: usize, c: usize) -> ModVec {
        ModVec((0..self.rank()).map(|a| self.gamma[a][b][c].clone()).collect())
    }

    /// `nabla_{d_b} m = E_a (Gamma^a_bc m^c + d_b(m^a))`.
    pub fn covariant(&self, calc: &RealCalculus, b: usize, m: &ModVec) -> Result<ModVec> {
        let n = self.rank();
        if m.rank() != n || calc.rank() != n {
            return Err(Error::RankMismatch { expected: n, found: m.rank() });
        }
        let d = calc.derivation(b);
        let mut out = Vec::with_capacity(n);
        for a in 0..n {
            let mut acc = d.apply(m.coord(a))?;
            for c in 0..n {
                let g = &self.gamma[a][b][c];
                if g.is_zero() || m.coord(c).is_zero() {
                    continue;
                }
                acc = acc.checked_add(&g.checked_mul(m.coord(c))?)?;
            }
            out.push(acc);
        }
        Ok(ModVec(out))
    }

    /// `nabla_X m` for `X = x^b d_b`.
    pub fn covariant_along(&self, calc: &RealCalculus, x: &[BigRational], m: &ModVec) -> Result<ModVec> {
        if x.len() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: x.len(),
            });
        }
        let mut out = ModVec::zero(self.spec(), self.rank());
        for (b, xb) in x.iter().enumerate() {
            if xb.is_zero() {
                continue;
            }
            let v = self.covariant(calc, b, m)?;
            out = out.checked_add(&v.map(|e| Ok(e.scale_scalar(&rat_scalar(xb))))?)?;
        }
        Ok(out)
    }

    /// Entrywise map, used for `q` specialization.
    pub fn map(&self, f: impl Fn(&AlgElement) -> Result<AlgElement>) -> Result<Self> {
        let gamma = self
            .gamma
            .iter()
            .map(|m| m.iter().map(|r| r.iter().map(&f).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Connection { gamma })
    }
}

fn unit(n: usize, a: usize) -> Vec<BigRational> {
    (0..n).map(|k| if k == a { BigRational::one() } else { BigRational::zero() }).collect()
}

/// Right-hand side of the Koszul formula for `2 h(nabla_b phi(d_c), phi(d_d))`.
fn koszul_rhs(calc: &RealCalculus, h: &HermitianMetric, b: usize, c: usize, d: usize) -> Result<AlgElement> {
    let n = calc.rank();
    let lie = calc.lie();
    let e = |a: usize| calc.anchor_vector(&unit(n, a));
    let br = |x: usize, y: usize| calc.anchor_vector(&lie.bracket(&unit(n, x), &unit(n, y)));
    let deriv = |x: usize, y: usize, z: usize| calc.derivation(x).apply(&h.eval(&e(y), &e(z))?);
    let mut out = deriv(b, c, d)?;
    out = out.checked_add(&deriv(c, b, d)?)?;
    out = out.checked_sub(&deriv(d, b, c)?)?;
    if !lie.is_abelian() {
        out = out.checked_sub(&h.eval(&e(b), &br(c, d))?)?;
        out = out.checked_add(&h.eval(&e(c), &br(d, b))?)?;
        out = out.checked_add(&h.eval(&e(d), &br(b, c))?)?;
    }
    Ok(out)
}

/// The Levi-Civita connection of a free real metric calculus:
/// `Gamma^p_bc = h^pd (1/2) K_bcd` where `K_bcd` is the Koszul right-hand
/// side for `(b, c, d)`, contracted from the left.
pub fn levi_civita(calc: &RealCalculus, h: &HermitianMetric) -> Result<Connection> {
    if !calc.is_free() {
        return Err(Error::NotFree("Christoffel symbols need E_a = phi(d_a)".into()));
    }
    let n = calc.rank();
    if h.rank() != n {
        return Err(Error::RankMismatch { expected: n, found: h.rank() });
    }
    let spec = calc.spec();
    let half = half();
    let mut gamma = vec![vec![vec![AlgElement::zero(spec); n]; n]; n];
    for b in 0..n {
        for c in 0..n {
            let rhs: Vec<AlgElement> = (0..n)
                .map(|d| koszul_rhs(calc, h, b, c, d).map(|k| k.scale_scalar(&half)))
                .collect::<Result<_>>()?;
            for (p, row) in gamma.iter_mut().enumerate() {
                let mut acc = AlgElement::zero(spec);
                for (d, r) in rhs.iter().enumerate() {
                    let hinv = h.inverse_entry(p, d);
                    if hinv.is_zero() || r.is_zero() {
                        continue;
                    }
                    acc = acc.checked_add(&hinv.checked_mul(r)?)?;
                }
                row[b][c] = acc;
            }
        }
    }
    Ok(Connection { gamma })
}

fn record(report: &mut Report, name: String, res: Result<AlgElement>) {
    match res {
        Ok(r) if r.is_zero() => report.pass(name),
        Ok(r) => report.fail(name, render_element(&r)),
        Err(e) => report.fail(name, e.to_string()),
    }
}

fn record_vec(report: &mut Report, name: String, res: Result<ModVec>) {
    match res {
        Ok(v) if v.is_zero() => report.pass(name),
        Ok(v) => report.fail(name, v.render("E")),
        Err(e) => report.fail(name, e.to_string()),
    }
}

/// Checks metric compatibility, torsion-freeness, the Koszul formula and
/// the reality condition on all basis triples.
pub fn verify_pseudo_riemannian(calc: &RealCalculus, h: &HermitianMetric, nabla: &Connection) -> Report {
    let mut report = Report::new();
    let n = calc.rank();
    if h.rank() != n || nabla.rank() != n {
        report.fail("ranks agree", format!("calculus {n}, metric {}, connection {}", h.rank(), nabla.rank()));
        return report;
    }
    let e = |a: usize| calc.anchor_vector(&unit(n, a));
    let two = Scalar::from_int(2);
    let mut compat = Report::new();
    let mut torsion = Report::new();
    let mut koszul = Report::new();
    let mut reality = Report::new();
    for a in 0..n {
        for b in 0..n {
            let nab = nabla.covariant(calc, a, &e(b));
            for c in 0..n {
                let res = (|| {
                    let lhs = calc.derivation(a).apply(&h.eval(&e(b), &e(c))?)?;
                    let nab = nab.clone()?;
                    let nac = nabla.covariant(calc, a, &e(c))?;
                    lhs.checked_sub(&h.eval(&nab, &e(c))?)?.checked_sub(&h.eval(&e(b), &nac)?)
                })();
                record(&mut compat, format!("d_{0} h(E_{1}, E_{2}) = h(nabla_{0} E_{1}, E_{2}) + h(E_{1}, nabla_{0} E_{2})", a + 1, b + 1, c + 1), res);

                let res = (|| {
                    let lhs = h.eval(&nab.clone()?, &e(c))?.scale_scalar(&two);
                    lhs.checked_sub(&koszul_rhs(calc, h, a, b, c)?)
                })();
                record(&mut koszul, format!("Koszul ({}, {}, {})", a + 1, b + 1, c + 1), res);

                let res = (|| {
                    let v = h.eval(&nab.clone()?, &e(c))?;
                    Ok(&v - &v.star())
                })();
                record(&mut reality, format!("h(nabla_{} E_{}, E_{}) hermitian", a + 1, b + 1, c + 1), res);
            }
            if a < b {
                let res = (|| {
                    let lhs = nab.clone()?.checked_sub(&nabla.covariant(calc, b, &e(a))?)?;
                    let br = calc.anchor_vector(&calc.lie().bracket(&unit(n, a), &unit(n, b)));
                    lhs.checked_sub(&br)
                })();
                record_vec(&mut torsion, format!("torsion (d_{}, d_{})", a + 1, b + 1), res);
            }
        }
    }
    report.extend("metric: ", compat);
    report.extend("torsion: ", torsion);
    report.extend("koszul: ", koszul);
    report.extend("reality: ", reality);
    report
}

/// `R(d_a, d_b) E_c` for all index triples.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor {
    /// `r[a][b][c] = R(d_a, d_b) E_c`.
    r: Vec<Vec<Vec<ModVec>>>,
}

impl CurvatureTensor {
    pub fn get(&self, a: usize, b: usize, c: usize) -> &ModVec {
        &self.r[a][b][c]
    }

    pub fn rank(&self) -> usize {
        self.r.len()
    }

    pub fn is_zero(&self) -> bool {
        self.r.iter().flatten().flatten().all(ModVec::is_zero)
    }
}

/// `R(X, Y) m = nabla_X nabla_Y m - nabla_Y nabla_X m - nabla_[X,Y] m`.
pub fn curvature_along(nabla: &Connection, calc: &RealCalculus, x: &[BigRational], y: &[BigRational], m: &ModVec) -> Result<ModVec> {
    let xy = nabla.covariant_along(calc, x, &nabla.covariant_along(calc, y, m)?)?;
    let yx = nabla.covariant_along(calc, y, &nabla.covariant_along(calc, x, m)?)?;
    let br = nabla.covariant_along(calc, &calc.lie().bracket(x, y), m)?;
    xy.checked_sub(&yx)?.checked_sub(&br)
}

pub fn curvature(nabla: &Connection, calc: &RealCalculus) -> Result<CurvatureTensor> {
    let n = nabla.rank();
    let spec = nabla.spec();
    let mut r = vec![vec![vec![ModVec::zero(spec, n); n]; n]; n];
    for a in 0..n {
        for b in (a + 1)..n {
            for c in 0..n {
                let v = curvature_along(nabla, calc, &unit(n, a), &unit(n, b), &ModVec::basis(spec, n, c))?;
                r[b][a][c] = -&v;
                r[a][b][c] = v;
            }
        }
    }
    Ok(CurvatureTensor { r })
}

/// `grad(x) = E_a h^ab d_b(x)`.
pub fn grad(calc: &RealCalculus, h: &HermitianMetric, x: &AlgElement) -> Result<ModVec> {
    let n = calc.rank();
    let dx: Vec<AlgElement> = (0..n).map(|b| calc.derivation(b).apply(x)).collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(n);
    for a in 0..n {
        let mut acc = AlgElement::zero(x.spec());
        for (b, db) in dx.iter().enumerate() {
            if db.is_zero() || h.inverse_entry(a, b).is_zero() {
                continue;
            }
            acc = acc.checked_add(&h.inverse_entry(a, b).checked_mul(db)?)?;
        }
        out.push(acc);
    }
    Ok(ModVec(out))
}

/// `div(m) = sum_a (nabla_a m)^a`.
pub fn div(calc: &RealCalculus, nabla: &Connection, m: &ModVec) -> Result<AlgElement> {
    let mut acc = AlgElement::zero(calc.spec());
    for a in 0..calc.rank() {
        acc = acc.checked_add(nabla.covariant(calc, a, m)?.coord(a))?;
    }
    Ok(acc)
}

/// `Delta(x) = div(grad(x))`.
pub fn laplace(calc: &RealCalculus, h: &HermitianMetric, nabla: &Connection, x: &AlgElement) -> Result<AlgElement> {
    div(calc, nabla, &grad(calc, h, x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{self, ConformalFactor};
    use crate::qalgebra::parse_element;

    fn h_sub(s: &str) -> String {
        s.replace("H1", "(1/2*Kinv*K_1)").replace("H2", "(1/2*Kinv*K_2)").replace("H3", "(1/2*Kinv*K_3)")
    }

    fn formal_setup() -> (RealCalculus, HermitianMetric, Connection) {
        let spec = models::formal_sphere_spec();
        let calc = models::sphere_calculus(spec).unwrap();
        let h = models::sphere_metric(&ConformalFactor::FormalK).unwrap();
        let nabla = levi_civita(&calc, &h).unwrap();
        (calc, h, nabla)
    }

    #[test]
    fn sphere_nabla_11_and_33() {
        let (calc, _, nabla) = formal_setup();
        let spec = calc.spec();
        let p = |s: &str| parse_element(&h_sub(s), spec).unwrap();
        let e11 = ModVec(vec![p("H1"), p("-t*(1 - t)^(-1)*H2"), p("-(1 - t)^(-1)*H3 - 1")]);
        assert_eq!(nabla.nabla_basis(0, 0), e11);
        let e33 = ModVec(vec![p("-(1 - t)*H1"), p("-t*H2"), p("H3 + (1 - t) - t")]);
        assert_eq!(nabla.nabla_basis(2, 2), e33);
    }

    #[test]
    fn levi_civita_verifies() {
        let (calc, h, nabla) = formal_setup();
        let report = verify_pseudo_riemannian(&calc, &h, &nabla);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn perturbed_gamma_breaks_compatibility() {
        let (calc, h, nabla) = formal_setup();
        let bumped = &nabla.gamma(0, 0, 0).clone() + &AlgElement::one(calc.spec());
        let report = verify_pseudo_riemannian(&calc, &h, &nabla.with_gamma(0, 0, 0, bumped));
        assert!(report.failed_on("metric"));
    }

    #[test]
    fn flat_torus() {
        let spec = AlgebraSpec::torus();
        let calc = models::torus_calculus(spec).unwrap();
        let h = models::constant_torus_metric(spec, Scalar::one(), Scalar::one()).unwrap();
        let nabla = levi_civita(&calc, &h).unwrap();
        assert_eq!(nabla, Connection::zero(spec, 2));
        assert!(curvature(&nabla, &calc).unwrap().is_zero());
        let u = parse_element("U", spec).unwrap();
        assert_eq!(laplace(&calc, &h, &nabla, &u).unwrap(), -&u);
        let u2 = parse_element("U^2", spec).unwrap();
        assert_eq!(laplace(&calc, &h, &nabla, &u2).unwrap(), parse_element("-4*U^2", spec).unwrap());
        assert!(grad(&calc, &h, &AlgElement::one(spec)).unwrap().is_zero());
    }

    #[test]
    fn round_sphere_curvature() {
        let spec = AlgebraSpec::sphere3_loc();
        let calc = models::sphere_calculus(spec).unwrap();
        let h = models::sphere_metric(&ConformalFactor::One).unwrap();
        let nabla = levi_civita(&calc, &h).unwrap();
        let r = curvature(&nabla, &calc).unwrap();
        let r122 = r.get(0, 1, 1);
        let expected = ModVec(vec![parse_element("1 - t", spec).unwrap(), AlgElement::zero(spec), AlgElement::zero(spec)]);
        assert_eq!(r122, &expected);
        let e1 = ModVec::basis(spec, 3, 0);
        assert_eq!(h.eval(&e1, r122).unwrap(), parse_element("t*(1 - t)", spec).unwrap());
        assert_eq!(r.get(1, 0, 1), &-&expected);
    }

    #[test]
    fn non_free_calculus_rejected() {
        let spec = AlgebraSpec::torus();
        let calc = models::torus_calculus(spec).unwrap();
        let a = crate::matrix::RationalMatrix::from_ints(&[&[1, 1], &[0, 1]]).unwrap();
        let skew = RealCalculus::with_anchor(calc.lie().clone(), a).unwrap();
        let h = models::constant_torus_metric(spec, Scalar::one(), Scalar::one()).unwrap();
        assert!(matches!(levi_civita(&skew, &h), Err(Error::NotFree(_))));
    }
}
