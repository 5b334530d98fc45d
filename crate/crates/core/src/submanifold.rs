//! Gauss and Weingarten decompositions, the induced connection, Gauss'
//! equation and mean curvature of an isometric embedding.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::calculus::ModVec;
use crate::connection::{curvature_along, Connection};
use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::morphism::{construct_hom, make_embedding, Embedding};
use crate::qalgebra::{render_element, AlgElement, Letter, Symbol};
use crate::report::Report;

fn unit(n: usize, a: usize) -> Vec<BigRational> {
    (0..n).map(|k| if k == a { BigRational::one() } else { BigRational::zero() }).collect()
}

/// `nabla_{psi(X)} m` for `X = x^i delta_i`.
fn ambient(e: &Embedding, nabla: &Connection, x: &[BigRational], m: &ModVec) -> Result<ModVec> {
    let hom = e.hom();
    nabla.covariant_along(hom.source(), &hom.psi_coords(x), m)
}

/// `alpha(X, m) = Pi(nabla_{psi(X)} m)`.
pub fn second_fundamental_form(e: &Embedding, nabla: &Connection, x: &[BigRational], m: &ModVec) -> Result<ModVec> {
    Ok(e.project(&ambient(e, nabla, x, m)?)?.1)
}

/// `L(X, m) = P(nabla_{psi(X)} m)`.
pub fn tangential_part(e: &Embedding, nabla: &Connection, x: &[BigRational], m: &ModVec) -> Result<ModVec> {
    Ok(e.project(&ambient(e, nabla, x, m)?)?.0)
}

/// `A_xi(X) = -P(nabla_{psi(X)} xi)`.
pub fn weingarten(e: &Embedding, nabla: &Connection, xi: &ModVec, x: &[BigRational]) -> Result<ModVec> {
    Ok(-&e.project(&ambient(e, nabla, x, xi)?)?.0)
}

/// `D_X xi = Pi(nabla_{psi(X)} xi)`.
pub fn normal_connection(e: &Embedding, nabla: &Connection, x: &[BigRational], xi: &ModVec) -> Result<ModVec> {
    Ok(e.project(&ambient(e, nabla, x, xi)?)?.1)
}

/// The decomposition tabulated on the target basis and the complement
/// basis.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussWeingarten {
    /// `l[i][j] = L(delta_i, Psi(delta_j))`.
    pub l: Vec<Vec<ModVec>>,
    /// `alpha[i][j] = alpha(delta_i, Psi(delta_j))`.
    pub alpha: Vec<Vec<ModVec>>,
    /// `shape[k][i] = A_{xi_k}(delta_i)`.
    pub shape: Vec<Vec<ModVec>>,
    /// `normal[k][i] = D_{delta_i} xi_k`.
    pub normal: Vec<Vec<ModVec>>,
}

pub fn gauss_weingarten(e: &Embedding, nabla: &Connection) -> Result<GaussWeingarten> {
    let hom = e.hom();
    let n2 = hom.target().rank();
    let mut l = Vec::with_capacity(n2);
    let mut alpha = Vec::with_capacity(n2);
    for i in 0..n2 {
        let (mut lr, mut ar) = (Vec::new(), Vec::new());
        for j in 0..n2 {
            let (p, q) = e.project(&ambient(e, nabla, &unit(n2, i), &hom.tangent(j))?)?;
            lr.push(p);
            ar.push(q);
        }
        l.push(lr);
        alpha.push(ar);
    }
    let mut shape = Vec::new();
    let mut normal = Vec::new();
    for xi in e.complement() {
        let (mut sr, mut nr) = (Vec::new(), Vec::new());
        for i in 0..n2 {
            let (p, q) = e.project(&ambient(e, nabla, &unit(n2, i), xi)?)?;
            sr.push(-&p);
            nr.push(q);
        }
        shape.push(sr);
        normal.push(nr);
    }
    Ok(GaussWeingarten { l, alpha, shape, normal })
}

/// `nabla'_i e_j = psi_hat(L(delta_i, Psi(delta_j)))`.
pub fn induced_connection(e: &Embedding, nabla: &Connection) -> Result<Connection> {
    let hom = e.hom();
    let n2 = hom.target().rank();
    if !hom.target().is_free() {
        return Err(Error::NotFree("target basis must be e_i = phi'(delta_i)".into()));
    }
    let spec = hom.target().spec();
    let mut gamma = vec![vec![vec![AlgElement::zero(spec); n2]; n2]; n2];
    for i in 0..n2 {
        for j in 0..n2 {
            let l = tangential_part(e, nabla, &unit(n2, i), &hom.tangent(j))?;
            let v = hom.psi_hat(&l)?;
            for (a, g) in gamma.iter_mut().enumerate() {
                g[i][j] = v.coord(a).clone();
            }
        }
    }
    Connection::new(gamma)
}

/// Checks
/// `phi(h(Psi_i, R(psi delta_k, psi delta_l) Psi_j)) = h'(e_i, R'(delta_k, delta_l) e_j)
///   + phi(h(alpha(delta_l, Psi_i), alpha(delta_k, Psi_j)))
///   - phi(h(alpha(delta_k, Psi_i), alpha(delta_l, Psi_j)))`
/// for every index tuple.
pub fn gauss_equation_check(e: &Embedding, nabla: &Connection, nabla_target: &Connection) -> Report {
    let mut report = Report::new();
    let hom = e.hom();
    let n2 = hom.target().rank();
    let alpha = match gauss_weingarten(e, nabla) {
        Ok(gw) => gw.alpha,
        Err(err) => {
            report.fail("second fundamental form", err.to_string());
            return report;
        }
    };
    for k in 0..n2 {
        for l in 0..n2 {
            if k == l {
                continue;
            }
            for i in 0..n2 {
                for j in 0..n2 {
                    let name = format!("Gauss ({}, {}; {}, {})", i + 1, j + 1, k + 1, l + 1);
                    let res = gauss_sides(e, nabla, nabla_target, &alpha, i, j, k, l);
                    match res {
                        Ok((lhs, rhs)) if lhs == rhs => report.pass(name),
                        Ok((lhs, rhs)) => report.fail(name, format!("{} != {}", render_element(&lhs), render_element(&rhs))),
                        Err(err) => report.fail(name, err.to_string()),
                    }
                }
            }
        }
    }
    report
}

/// Both sides of Gauss' equation at `(i, j; k, l)`.
#[allow(clippy::too_many_arguments)]
pub fn gauss_sides(
    e: &Embedding,
    nabla: &Connection,
    nabla_target: &Connection,
    alpha: &[Vec<ModVec>],
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> Result<(AlgElement, AlgElement)> {
    let hom = e.hom();
    let n2 = hom.target().rank();
    let (h, h2, phi) = (e.metric(), e.target_metric(), hom.phi());
    let (dk, dl) = (unit(n2, k), unit(n2, l));
    let r = curvature_along(nabla, hom.source(), &hom.psi_coords(&dk), &hom.psi_coords(&dl), &hom.tangent(j))?;
    let lhs = phi.apply(&h.eval(&hom.tangent(i), &r)?)?;
    let tspec = hom.target().spec();
    let r2 = curvature_along(nabla_target, hom.target(), &dk, &dl, &ModVec::basis(tspec, n2, j))?;
    let mut rhs = h2.eval(&ModVec::basis(tspec, n2, i), &r2)?;
    rhs = rhs.checked_add(&phi.apply(&h.eval(&alpha[l][i], &alpha[k][j])?)?)?;
    rhs = rhs.checked_sub(&phi.apply(&h.eval(&alpha[k][i], &alpha[l][j])?)?)?;
    Ok((lhs, rhs))
}

/// `H(m) = sum_ij phi(h(m, alpha(delta_i, Psi(delta_j)))) h'^ij`.
pub fn mean_curvature_at(e: &Embedding, alpha: &[Vec<ModVec>], m: &ModVec) -> Result<AlgElement> {
    let hom = e.hom();
    let n2 = hom.target().rank();
    let h2 = e.target_metric();
    let mut out = AlgElement::zero(hom.target().spec());
    for i in 0..n2 {
        for j in 0..n2 {
            let hinv = h2.inverse_entry(i, j);
            if hinv.is_zero() || alpha[i][j].is_zero() {
                continue;
            }
            let v = hom.phi().apply(&e.metric().eval(m, &alpha[i][j])?)?;
            out = out.checked_add(&v.checked_mul(hinv)?)?;
        }
    }
    Ok(out)
}

/// Mean curvature evaluated on the complement basis.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanCurvature {
    pub values: Vec<AlgElement>,
}

pub fn mean_curvature(e: &Embedding, nabla: &Connection) -> Result<MeanCurvature> {
    let alpha = gauss_weingarten(e, nabla)?.alpha;
    let values = e
        .complement()
        .iter()
        .map(|xi| mean_curvature_at(e, &alpha, xi))
        .collect::<Result<_>>()?;
    Ok(MeanCurvature { values })
}

/// Strips a trailing `Kinv` by right multiplication with `K`; the result
/// vanishes iff the input does.
pub fn strip_invertible_right_factor(x: &AlgElement) -> Result<AlgElement> {
    let ends_in_kinv = |y: &AlgElement| y.terms().keys().any(|w| w.last() == Some(&Letter::Sym(Symbol::KInv)));
    let mut y = x.clone();
    if y.spec().is_formal() && ends_in_kinv(&y) {
        y = y.checked_mul(&AlgElement::symbol(y.spec(), Symbol::K)?)?;
    }
    Ok(y)
}

/// Minimality verdict with the nonzero obstructions per complement vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Minimality {
    pub minimal: bool,
    pub obstructions: Vec<(usize, AlgElement)>,
}

pub fn is_minimal(h: &MeanCurvature) -> Result<Minimality> {
    let mut obstructions = Vec::new();
    for (k, v) in h.values.iter().enumerate() {
        let s = strip_invertible_right_factor(v)?;
        if !s.is_zero() {
            obstructions.push((k, s));
        }
    }
    Ok(Minimality {
        minimal: obstructions.is_empty(),
        obstructions,
    })
}

/// The same embedding with target derivation basis `delta~ = A delta`.
pub fn change_target_basis(e: &Embedding, a: &RationalMatrix) -> Result<Embedding> {
    let hom = e.hom();
    let target = hom.target().change_basis(a)?;
    let psi = a.mul(hom.psi())?;
    let new_hom = construct_hom(hom.source(), &target, hom.phi().clone(), psi)?;
    let h2 = e.target_metric().transform(a)?;
    let moved = make_embedding(new_hom, e.complement().to_vec(), e.metric().clone(), h2, e.is_isometric(), None)?;
    match (e.gram(), moved.gram()) {
        (Some(g), None) => moved.with_gram_inverse(g.transform(a)?.inverse_matrix()),
        _ => Ok(moved),
    }
}

/// Recomputes `H` on the complement after `delta~ = A delta` and compares.
pub fn mean_curvature_basis_independence_check(e: &Embedding, nabla: &Connection, a: &RationalMatrix) -> Result<Report> {
    a.inverse()?;
    let before = mean_curvature(e, nabla)?;
    let after = mean_curvature(&change_target_basis(e, a)?, nabla)?;
    let mut report = Report::new();
    for (k, (x, y)) in before.values.iter().zip(&after.values).enumerate() {
        let name = format!("H(xi_{}) basis independent", k + 1);
        if x == y {
            report.pass(name);
        } else {
            report.fail(name, format!("{} vs {}", render_element(x), render_element(y)));
        }
    }
    Ok(report)
}
