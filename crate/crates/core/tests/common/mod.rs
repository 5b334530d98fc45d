//! Shared fixtures, oracles and checks for the integration tests and the
//! acceptance harness.
#![allow(dead_code)]

pub mod props;

use std::sync::OnceLock;

use ncgeom::calculus::ModVec;
use ncgeom::connection::{curvature, grad, laplace, levi_civita, verify_pseudo_riemannian, Connection};
use ncgeom::matrix::RationalMatrix;
use ncgeom::models::{self, ConformalFactor, TorusInSphere};
use ncgeom::morphism::{compose, induced_metric, iso_psi_from_phi, torus_automorphism, torus_automorphism_inverse};
use ncgeom::qalgebra::{parse_element, render_element};
use ncgeom::scalars::{abs_sq, scalar_gaussian, scalar_ratio};
use ncgeom::submanifold::{
    gauss_equation_check, gauss_sides, gauss_weingarten, induced_connection, is_minimal, mean_curvature,
};
use ncgeom::{AlgElement, AlgebraSpec, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;

pub type Check = Result<(), String>;

/// Published notation to engine syntax. Longer keys first.
const SPHERE_ALIASES: &[(&str, &str)] = &[
    ("|Z|^{-2}", "t^(-1)"),
    ("|W|^{-2}", "(1 - t)^(-1)"),
    ("|Z|^2", "t"),
    ("|W|^2", "(1 - t)"),
    ("H_1", "(1/2*Kinv*K_1)"),
    ("H_2", "(1/2*Kinv*K_2)"),
    ("H_3", "(1/2*Kinv*K_3)"),
];

/// Published symbols on the torus side: `Ht_a` is the pushed-forward `H_a`,
/// `(HtHt^*)` the pushed-forward conformal factor.
fn torus_aliases(l2: &Scalar, m2: &Scalar) -> Vec<(String, String)> {
    let s = |x: &Scalar| format!("({})", render_element(&AlgElement::scalar(models::formal_torus_spec(), x.clone())));
    let inv = |x: &Scalar| ncgeom::scalars::checked_div(&scalar_ratio(1, 1), x).unwrap();
    vec![
        ("|λ|^{-2}".into(), s(&inv(l2))),
        ("|μ|^{-2}".into(), s(&inv(m2))),
        ("|λ|^2".into(), s(l2)),
        ("|μ|^2".into(), s(m2)),
        ("(HtHt^*)^{-1}".into(), "Kinv".into()),
        ("(HtHt^*)".into(), "K".into()),
        ("φ(∂_3(HH^*))".into(), "K_3".into()),
        ("Ht_1".into(), "(1/2*Kinv*K_1)".into()),
        ("Ht_2".into(), "(1/2*Kinv*K_2)".into()),
        ("Ht_3".into(), "(1/2*Kinv*K_3)".into()),
    ]
}

fn translate(s: &str, aliases: &[(String, String)]) -> String {
    let mut out = s.to_string();
    for (k, v) in aliases {
        out = out.replace(k.as_str(), v);
    }
    out
}

fn sphere_aliases() -> Vec<(String, String)> {
    SPHERE_ALIASES.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

/// Parses `E_a * coefficient` sums (basis letter `E` or `e`) into a module
/// vector of rank `n`.
pub fn module_vector(src: &str, spec: AlgebraSpec, n: usize, aliases: &[(String, String)]) -> Result<ModVec, String> {
    let src = translate(src, aliases);
    let mut coords = vec![AlgElement::zero(spec); n];
    if src.trim() == "0" {
        return Ok(ModVec(coords));
    }
    let bytes = src.as_bytes();
    let mut cuts = vec![0];
    let mut depth = 0i32;
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > 0 => {
                let rest = src[i + 1..].trim_start();
                if rest.starts_with("E_") || rest.starts_with("e_") {
                    cuts.push(i);
                }
            }
            _ => {}
        }
    }
    cuts.push(src.len());
    for w in cuts.windows(2) {
        let mut term = src[w[0]..w[1]].trim();
        let mut negative = false;
        if let Some(r) = term.strip_prefix('-') {
            negative = true;
            term = r.trim_start();
        } else if let Some(r) = term.strip_prefix('+') {
            term = r.trim_start();
        }
        let body = term
            .strip_prefix("E_")
            .or_else(|| term.strip_prefix("e_"))
            .ok_or_else(|| format!("term without basis vector: {term}"))?;
        let idx: usize = body[..1].parse().map_err(|_| format!("bad index in {term}"))?;
        let coeff = match body[1..].trim_start().strip_prefix('*') {
            Some(c) => parse_element(c, spec).map_err(|e| format!("{c}: {e}"))?,
            None if body[1..].trim().is_empty() => AlgElement::one(spec),
            None => return Err(format!("expected '*' after basis vector in {term}")),
        };
        let coeff = if negative { -&coeff } else { coeff };
        coords[idx - 1] = &coords[idx - 1] + &coeff;
    }
    Ok(ModVec(coords))
}

pub fn scalar_element(spec: AlgebraSpec, src: &str, aliases: &[(String, String)]) -> Result<AlgElement, String> {
    let s = translate(src, aliases);
    parse_element(&s, spec).map_err(|e| format!("{s}: {e}"))
}

fn expect_eq(name: &str, got: &AlgElement, want: &AlgElement) -> Check {
    if got == want {
        Ok(())
    } else {
        Err(format!("{name}: got {} expected {}", render_element(got), render_element(want)))
    }
}

fn expect_vec(name: &str, got: &ModVec, want: &ModVec) -> Check {
    if got == want {
        Ok(())
    } else {
        Err(format!("{name}: got {} expected {}", got.render("E"), want.render("E")))
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---------------------------------------------------------------- fixtures

pub struct FormalSphere {
    pub calc: ncgeom::calculus::RealCalculus,
    pub h: ncgeom::calculus::HermitianMetric,
    pub nabla: Connection,
}

pub fn formal_sphere() -> &'static FormalSphere {
    static CELL: OnceLock<FormalSphere> = OnceLock::new();
    CELL.get_or_init(|| {
        let calc = models::sphere_calculus(models::formal_sphere_spec()).unwrap();
        let h = models::sphere_metric(&ConformalFactor::FormalK).unwrap();
        let nabla = levi_civita(&calc, &h).unwrap();
        FormalSphere { calc, h, nabla }
    })
}

/// `(lambda, mu)` pairs on the unit circle `|lambda|^2 + |mu|^2 = 1`.
pub fn parameter_pairs() -> Vec<(Scalar, Scalar)> {
    vec![
        (scalar_ratio(3, 5), scalar_ratio(4, 5)),
        (scalar_ratio(4, 5), scalar_gaussian((0, 1), (3, 5))),
    ]
}

pub fn formal_embedding() -> &'static TorusInSphere {
    static CELL: OnceLock<TorusInSphere> = OnceLock::new();
    CELL.get_or_init(|| {
        models::torus_in_sphere(&scalar_ratio(3, 5), &scalar_ratio(4, 5), &ConformalFactor::FormalK).unwrap()
    })
}

pub fn flat_embedding() -> &'static TorusInSphere {
    static CELL: OnceLock<TorusInSphere> = OnceLock::new();
    CELL.get_or_init(|| models::torus_in_sphere(&scalar_ratio(3, 5), &scalar_ratio(4, 5), &ConformalFactor::One).unwrap())
}

// ------------------------------------------------------------- oracles

/// `(b, c, line)` with `line` the published `nabla_b E_c`.
pub const SPHERE_NABLA: &[(usize, usize, &str)] = &[
    (1, 1, "E_1*H_1 - E_2*|Z|^2*|W|^{-2}*H_2 - E_3*(|W|^{-2}*H_3 + 1)"),
    (1, 2, "E_1*H_2 + E_2*H_1"),
    (2, 1, "E_1*H_2 + E_2*H_1"),
    (1, 3, "E_1*(H_3 + |W|^2) + E_3*H_1"),
    (3, 1, "E_1*(H_3 + |W|^2) + E_3*H_1"),
    (2, 2, "-E_1*|W|^2*|Z|^{-2}*H_1 + E_2*H_2 + E_3*(1 - |Z|^{-2}*H_3)"),
    (2, 3, "E_2*(H_3 - |Z|^2) + E_3*H_2"),
    (3, 2, "E_2*(H_3 - |Z|^2) + E_3*H_2"),
    (3, 3, "-E_1*|W|^2*H_1 - E_2*|Z|^2*H_2 + E_3*(H_3 + |W|^2 - |Z|^2)"),
];

pub const TORUS_NABLA: &[(usize, usize, &str)] = &[
    (1, 1, "e_1*Ht_1 - e_2*Ht_2*|λ|^2*|μ|^{-2}"),
    (1, 2, "e_1*Ht_2 + e_2*Ht_1"),
    (2, 1, "e_1*Ht_2 + e_2*Ht_1"),
    (2, 2, "-e_1*Ht_1*|λ|^{-2}*|μ|^2 + e_2*Ht_2"),
];

pub const ALPHA: &[(usize, usize, &str)] = &[
    (1, 1, "-E_3*(|W|^{-2}*H_3 + 1)"),
    (1, 2, "0"),
    (2, 1, "0"),
    (2, 2, "E_3*(1 - |Z|^{-2}*H_3)"),
];

pub const INDUCED_METRIC: [[&str; 2]; 2] = [["|λ|^2*(HtHt^*)", "0"], ["0", "|μ|^2*(HtHt^*)"]];

pub const MEAN_CURVATURE: &str = "(|λ|^2 - |μ|^2) - φ(∂_3(HH^*))*(HtHt^*)^{-1}";

// ------------------------------------------------------------ criteria

pub fn criterion_1() -> Check {
    let fs = formal_sphere();
    let spec = fs.calc.spec();
    let aliases = sphere_aliases();
    for &(b, c, line) in SPHERE_NABLA {
        let want = module_vector(line, spec, 3, &aliases)?;
        expect_vec(&format!("nabla_{b} E_{c}"), &fs.nabla.nabla_basis(b - 1, c - 1), &want)?;
    }
    Ok(())
}

pub fn criterion_2() -> Check {
    let fs = formal_sphere();
    let report = verify_pseudo_riemannian(&fs.calc, &fs.h, &fs.nabla);
    if !report.passed() {
        return Err(format!("sphere: {report}"));
    }
    let ts = formal_embedding();
    let induced = induced_connection(&ts.embedding, &ts.nabla).map_err(err)?;
    let report = verify_pseudo_riemannian(&ts.torus, ts.h_target(), &induced);
    if !report.passed() {
        return Err(format!("torus: {report}"));
    }
    Ok(())
}

pub fn criterion_3() -> Check {
    for (l, m) in parameter_pairs() {
        let hom = models::torus_in_sphere_hom(&l, &m, &ConformalFactor::FormalK).map_err(err)?;
        let h = models::sphere_metric(&ConformalFactor::FormalK).map_err(err)?;
        let h2 = induced_metric(&hom, &h).map_err(err)?;
        let aliases = torus_aliases(&abs_sq(&l), &abs_sq(&m));
        let spec = hom.target().spec();
        for (i, row) in INDUCED_METRIC.iter().enumerate() {
            for (j, src) in row.iter().enumerate() {
                let want = scalar_element(spec, src, &aliases)?;
                expect_eq(&format!("h'(e_{}, e_{})", i + 1, j + 1), h2.entry(i, j), &want)?;
            }
        }
    }
    Ok(())
}

pub fn criterion_4() -> Check {
    for (l, m) in parameter_pairs() {
        let ts = models::torus_in_sphere(&l, &m, &ConformalFactor::FormalK).map_err(err)?;
        let induced = induced_connection(&ts.embedding, &ts.nabla).map_err(err)?;
        let aliases = torus_aliases(&abs_sq(&l), &abs_sq(&m));
        let spec = ts.torus.spec();
        for &(b, c, line) in TORUS_NABLA {
            let want = module_vector(line, spec, 2, &aliases)?;
            expect_vec(&format!("nabla'_{b} e_{c}"), &induced.nabla_basis(b - 1, c - 1), &want)?;
        }
        let direct = levi_civita(&ts.torus, ts.h_target()).map_err(err)?;
        if direct != induced {
            return Err("induced connection differs from the Levi-Civita connection of h'".into());
        }
    }
    Ok(())
}

pub fn criterion_5() -> Check {
    for (l, m) in parameter_pairs() {
        let ts = models::torus_in_sphere(&l, &m, &ConformalFactor::FormalK).map_err(err)?;
        let gw = gauss_weingarten(&ts.embedding, &ts.nabla).map_err(err)?;
        let sspec = ts.sphere.spec();
        for &(i, j, line) in ALPHA {
            let want = module_vector(line, sspec, 3, &sphere_aliases())?;
            expect_vec(&format!("alpha(delta_{i}, Psi(delta_{j}))"), &gw.alpha[i - 1][j - 1], &want)?;
        }
        let h = mean_curvature(&ts.embedding, &ts.nabla).map_err(err)?;
        let aliases = torus_aliases(&abs_sq(&l), &abs_sq(&m));
        let want = scalar_element(ts.torus.spec(), MEAN_CURVATURE, &aliases)?;
        expect_eq("H(E_3)", &h.values[0], &want)?;
    }
    let half = scalar_gaussian((1, 2), (1, 2));
    for factor in [ConformalFactor::One, ConformalFactor::zw().map_err(err)?] {
        let ts = models::torus_in_sphere(&half, &half, &factor).map_err(err)?;
        let h = mean_curvature(&ts.embedding, &ts.nabla).map_err(err)?;
        let verdict = is_minimal(&h).map_err(err)?;
        if !verdict.minimal {
            return Err(format!("{factor:?} with |lambda|^2 = 1/2 is not minimal"));
        }
    }
    // phi(d_3 K) = 2 |lambda|^2 |mu|^2 (|mu|^2 - |lambda|^2) for K = t(1 - t)
    let pairs = [(half.clone(), half), (scalar_ratio(3, 5), scalar_ratio(4, 5))];
    for (l, m) in pairs {
        let hom = models::torus_in_sphere_hom(&l, &m, &ConformalFactor::zw().map_err(err)?).map_err(err)?;
        let sspec = hom.source().spec();
        let k = parse_element("t*(1 - t)", sspec).map_err(err)?;
        let dk = hom.source().derivation(2).apply(&k).map_err(err)?;
        let got = hom.phi().apply(&dk).map_err(err)?;
        let (l2, m2) = (abs_sq(&l), abs_sq(&m));
        let want = scalar_ratio(2, 1) * l2.clone() * m2.clone() * (m2 - l2);
        expect_eq("phi(d_3 K)", &got, &AlgElement::scalar(hom.target().spec(), want))?;
    }
    Ok(())
}

pub fn criterion_6() -> Check {
    for ts in [flat_embedding(), formal_embedding()] {
        let induced = induced_connection(&ts.embedding, &ts.nabla).map_err(err)?;
        let report = gauss_equation_check(&ts.embedding, &ts.nabla, &induced);
        if !report.passed() || report.checks().is_empty() {
            return Err(format!("Gauss' equation: {report}"));
        }
    }
    let ts = flat_embedding();
    let induced = induced_connection(&ts.embedding, &ts.nabla).map_err(err)?;
    let alpha = gauss_weingarten(&ts.embedding, &ts.nabla).map_err(err)?.alpha;
    let (lhs, rhs) = gauss_sides(&ts.embedding, &ts.nabla, &induced, &alpha, 0, 1, 0, 1).map_err(err)?;
    // |lambda|^2 |mu|^2 = 9/25 * 16/25
    let want = AlgElement::scalar(ts.torus.spec(), scalar_ratio(144, 625));
    expect_eq("Gauss LHS (1,2;1,2)", &lhs, &want)?;
    expect_eq("Gauss RHS (1,2;1,2)", &rhs, &want)
}

pub const SL2_MATRICES: [[i64; 4]; 3] = [[1, 1, 0, 1], [2, 1, 1, 1], [0, -1, 1, 0]];

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mat_mul(x: [i64; 4], y: [i64; 4]) -> [i64; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

pub fn criterion_7() -> Check {
    let spec = AlgebraSpec::torus();
    let calc = models::torus_calculus(spec).map_err(err)?;
    for m in SL2_MATRICES {
        let [a, b, c, d] = m;
        let alpha = torus_automorphism(spec, m).map_err(err)?;
        let alpha_inv = torus_automorphism_inverse(spec, m).map_err(err)?;
        let psi = iso_psi_from_phi(&calc, &calc, &alpha_inv, &alpha).map_err(err)?;
        let want = RationalMatrix::from_ints(&[&[d, -c], &[-b, a]]).map_err(err)?;
        if psi != want {
            return Err(format!("psi for {m:?}: got {psi:?}"));
        }
        let hom = models::sl2_hom(spec, m).map_err(err)?;
        let e = |k| ModVec::basis(spec, 2, k);
        for (k, coords) in [(0, [a, c]), (1, [b, d])] {
            let got = hom.psi_hat(&e(k)).map_err(err)?;
            let want = ModVec::from_rational(spec, &[rat(coords[0]), rat(coords[1])]);
            expect_vec(&format!("psi_hat(e_{}) for {m:?}", k + 1), &got, &want)?;
        }
    }
    for x in SL2_MATRICES {
        for y in SL2_MATRICES {
            let f = models::sl2_hom(spec, x).map_err(err)?;
            let g = models::sl2_hom(spec, y).map_err(err)?;
            let both = compose(&f, &g).map_err(err)?;
            let product = models::sl2_hom(spec, mat_mul(y, x)).map_err(err)?;
            if both.psi() != product.psi() {
                return Err(format!("compose {x:?} then {y:?} does not match the matrix product"));
            }
        }
    }
    Ok(())
}

pub fn criterion_8(cases: u32) -> Check {
    let mut failures = Vec::new();
    for suite in props::suites() {
        if let Err(e) = (suite.run)(props::deterministic_runner(cases)) {
            failures.push(format!("{}: {e}", suite.name));
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures.join("; "))
    }
}

pub fn criterion_9() -> Check {
    let spec = AlgebraSpec::torus();
    let calc = models::torus_calculus(spec).map_err(err)?;
    let one = scalar_ratio(1, 1);
    let h = models::constant_torus_metric(spec, one.clone(), one).map_err(err)?;
    let nabla = levi_civita(&calc, &h).map_err(err)?;
    if nabla != Connection::zero(spec, 2) {
        return Err("Gamma != 0".into());
    }
    if !curvature(&nabla, &calc).map_err(err)?.is_zero() {
        return Err("R != 0".into());
    }
    let u = parse_element("U", spec).map_err(err)?;
    expect_eq("Delta(U)", &laplace(&calc, &h, &nabla, &u).map_err(err)?, &-&u)?;
    let u2 = parse_element("U^2", spec).map_err(err)?;
    let want = parse_element("-4*U^2", spec).map_err(err)?;
    expect_eq("Delta(U^2)", &laplace(&calc, &h, &nabla, &u2).map_err(err)?, &want)?;
    if !grad(&calc, &h, &AlgElement::one(spec)).map_err(err)?.is_zero() {
        return Err("grad(1) != 0".into());
    }
    Ok(())
}
