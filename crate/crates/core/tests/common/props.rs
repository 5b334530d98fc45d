//! Randomized property suites shared by `properties.rs` and the
//! acceptance harness.

use std::sync::OnceLock;

use ncgeom::calculus::{HermitianMetric, ModVec, RealCalculus};
use ncgeom::connection::levi_civita;
use ncgeom::matrix::RationalMatrix;
use ncgeom::models;
use ncgeom::qalgebra::{normalize, parse_element, parse_expr, render_element};
use ncgeom::scalars::scalar_rational;
use ncgeom::submanifold::{
    gauss_weingarten, mean_curvature_at, mean_curvature_basis_independence_check, normal_connection,
    second_fundamental_form, weingarten,
};
use ncgeom::{AlgElement, AlgebraSpec, QValue};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRng, TestRunner};

use super::formal_embedding;

pub struct Suite {
    pub name: &'static str,
    pub run: fn(TestRunner) -> Result<(), String>,
}

pub fn suites() -> Vec<Suite> {
    vec![
        Suite { name: "normalize laws", run: normalize_laws },
        Suite { name: "star laws", run: star_laws },
        Suite { name: "Leibniz and hermitian derivations", run: derivation_laws },
        Suite { name: "metric axioms h1-h3", run: metric_axioms },
        Suite { name: "alpha symmetry and bilinearity", run: alpha_laws },
        Suite { name: "Weingarten adjointness", run: weingarten_adjoint },
        Suite { name: "projection idempotent and self-adjoint", run: projection_laws },
        Suite { name: "normal connection laws", run: normal_connection_laws },
        Suite { name: "mean curvature basis independence", run: basis_independence },
        Suite { name: "q -> 1 commutes with each stage", run: q_one_commutes },
    ]
}

fn config(cases: u32) -> Config {
    Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn deterministic_runner(cases: u32) -> TestRunner {
    let config = config(cases);
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    TestRunner::new_with_rng(config, rng)
}

pub fn random_runner(cases: u32) -> TestRunner {
    TestRunner::new(config(cases))
}

fn ok<T>(r: ncgeom::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(e.to_string()))
}

#[derive(Clone, Copy, Debug)]
pub enum Kind {
    Torus,
    Sphere,
    FormalTorus,
    FormalSphere,
}

impl Kind {
    pub fn spec(self) -> AlgebraSpec {
        match self {
            Kind::Torus => AlgebraSpec::torus(),
            Kind::Sphere => AlgebraSpec::sphere3_loc(),
            Kind::FormalTorus => models::formal_torus_spec(),
            Kind::FormalSphere => models::formal_sphere_spec(),
        }
    }

    fn letters(self) -> &'static [&'static str] {
        const T: &[&str] = &["U", "U^(-1)", "V", "V^(-1)"];
        const S: &[&str] = &["Z", "Z*", "W", "W*"];
        const FT: &[&str] = &["U", "U^(-1)", "V", "V^(-1)", "K", "Kinv", "K_1", "K_2"];
        const FS: &[&str] = &["Z", "Z*", "W", "W*", "K", "Kinv", "K_1", "K_2", "K_3"];
        match self {
            Kind::Torus => T,
            Kind::Sphere => S,
            Kind::FormalTorus => FT,
            Kind::FormalSphere => FS,
        }
    }

    fn central(self) -> bool {
        matches!(self, Kind::Sphere | Kind::FormalSphere)
    }
}

fn term(kind: Kind) -> impl Strategy<Value = String> {
    let n = kind.letters().len();
    (-3i32..=3, -3i32..=3, -2i32..=2, -1i32..=1, -1i32..=1, vec(0..n, 0..=3)).prop_map(
        move |(re, im, qk, ti, tj, word)| {
            let mut s = format!("({re} + {im}*i)*q^({qk}/2)");
            if kind.central() {
                s.push_str(&format!("*t^({ti})*(1 - t)^({tj})"));
            }
            for l in word {
                s.push_str(&format!("*({})", kind.letters()[l]));
            }
            s
        },
    )
}

/// Random elements with up to `max_terms` terms.
pub fn element(kind: Kind, max_terms: usize) -> BoxedStrategy<AlgElement> {
    vec(term(kind), 1..=max_terms)
        .prop_map(move |ts| parse_element(&ts.join(" + "), kind.spec()).expect("generated element parses"))
        .boxed()
}

pub fn module_vec(kind: Kind, n: usize) -> BoxedStrategy<ModVec> {
    vec(element(kind, 2), n).prop_map(ModVec).boxed()
}

fn any_kind() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::Torus), Just(Kind::Sphere), Just(Kind::FormalTorus), Just(Kind::FormalSphere)]
}

fn kind_with_elements(n: usize) -> BoxedStrategy<(Kind, Vec<AlgElement>)> {
    any_kind().prop_flat_map(move |k| (Just(k), vec(element(k, 3), n))).boxed()
}

fn rat(n: i32) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rats(v: &[i32]) -> Vec<BigRational> {
    v.iter().map(|&n| rat(n)).collect()
}

fn scale(m: &ModVec, r: i32) -> Result<ModVec, TestCaseError> {
    let spec = m.coords()[0].spec();
    ok(m.right_mul(&AlgElement::scalar(spec, scalar_rational(rat(r)))))
}

fn small_vec(n: usize) -> impl Strategy<Value = Vec<i32>> {
    vec(-3i32..=3, n)
}

fn normalize_laws(mut runner: TestRunner) -> Result<(), String> {
    runner
        .run(&kind_with_elements(3), |(kind, xs)| {
            let spec = kind.spec();
            let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
            let again = ok(normalize(&ok(parse_expr(&render_element(x)))?, spec))?;
            prop_assert_eq!(&again, x);
            prop_assert_eq!(&(&(x * y) * z), &(x * &(y * z)));
            prop_assert_eq!(&(x * &(y + z)), &(&(x * y) + &(x * z)));
            prop_assert_eq!(&(x - x), &AlgElement::zero(spec));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn star_laws(mut runner: TestRunner) -> Result<(), String> {
    runner
        .run(&kind_with_elements(2), |(_, xs)| {
            let (x, y) = (&xs[0], &xs[1]);
            prop_assert_eq!(&x.star().star(), x);
            prop_assert_eq!(&(x * y).star(), &(&y.star() * &x.star()));
            prop_assert_eq!(&(x + y).star(), &(&x.star() + &y.star()));
            prop_assert!((x * &x.star()).is_hermitian());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn calculus_for(kind: Kind) -> &'static RealCalculus {
    static CELLS: OnceLock<Vec<RealCalculus>> = OnceLock::new();
    let cells = CELLS.get_or_init(|| {
        vec![
            models::torus_calculus(Kind::Torus.spec()).unwrap(),
            models::sphere_calculus(Kind::Sphere.spec()).unwrap(),
            models::torus_calculus(Kind::FormalTorus.spec()).unwrap(),
            models::sphere_calculus(Kind::FormalSphere.spec()).unwrap(),
        ]
    });
    &cells[kind as usize]
}

fn derivation_laws(mut runner: TestRunner) -> Result<(), String> {
    runner
        .run(&(kind_with_elements(2), 0usize..3), |((kind, xs), a)| {
            let calc = calculus_for(kind);
            let d = calc.derivation(a % calc.rank());
            let (x, y) = (&xs[0], &xs[1]);
            let lhs = ok(d.apply(&(x * y)))?;
            let rhs = &(&ok(d.apply(x))? * y) + &(x * &ok(d.apply(y))?);
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(ok(d.apply(&x.star()))?, ok(d.apply(x))?.star());
            prop_assert!(ok(d.apply(&AlgElement::one(kind.spec())))?.is_zero());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn metric_axioms(mut runner: TestRunner) -> Result<(), String> {
    let h = &super::formal_sphere().h;
    let k = Kind::FormalSphere;
    let strat = (module_vec(k, 3), module_vec(k, 3), module_vec(k, 3), element(k, 2));
    runner
        .run(&strat, |(m, n, p, a)| {
            let hmn = ok(h.eval(&m, &n))?;
            prop_assert_eq!(ok(h.eval(&m, &(&n + &p)))?, &hmn + &ok(h.eval(&m, &p))?);
            prop_assert_eq!(ok(h.eval(&m, &ok(n.right_mul(&a))?))?, &hmn * &a);
            prop_assert_eq!(hmn.star(), ok(h.eval(&n, &m))?);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn tangential(b: &[AlgElement]) -> ModVec {
    let spec = b[0].spec();
    ModVec(vec![b[0].clone(), b[1].clone(), AlgElement::zero(spec)])
}

fn normal(c: &AlgElement) -> ModVec {
    let spec = c.spec();
    ModVec(vec![AlgElement::zero(spec), AlgElement::zero(spec), c.clone()])
}

fn alpha_laws(mut runner: TestRunner) -> Result<(), String> {
    let ts = formal_embedding();
    let (e, nabla, hom) = (&ts.embedding, &ts.nabla, ts.hom());
    let k = Kind::FormalSphere;
    let strat = (small_vec(2), small_vec(2), -3i32..=3, -3i32..=3, vec(element(k, 2), 2), element(k, 2));
    runner
        .run(&strat, |(x, y, r, s, b, a)| {
            let (xr, yr) = (rats(&x), rats(&y));
            let ax_py = ok(second_fundamental_form(e, nabla, &xr, &hom.tangent_along(&yr)))?;
            let ay_px = ok(second_fundamental_form(e, nabla, &yr, &hom.tangent_along(&xr)))?;
            prop_assert_eq!(ax_py, ay_px);
            let m = tangential(&b);
            let axm = ok(second_fundamental_form(e, nabla, &xr, &m))?;
            let lhs = ok(second_fundamental_form(e, nabla, &xr, &ok(m.right_mul(&a))?))?;
            prop_assert_eq!(lhs, ok(axm.right_mul(&a))?);
            let comb: Vec<i32> = (0..2).map(|i| r * x[i] + s * y[i]).collect();
            let lhs = ok(second_fundamental_form(e, nabla, &rats(&comb), &m))?;
            let aym = ok(second_fundamental_form(e, nabla, &yr, &m))?;
            prop_assert_eq!(lhs, &scale(&axm, r)? + &scale(&aym, s)?);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn weingarten_adjoint(mut runner: TestRunner) -> Result<(), String> {
    let ts = formal_embedding();
    let (e, nabla) = (&ts.embedding, &ts.nabla);
    let k = Kind::FormalSphere;
    let strat = (small_vec(2), element(k, 2), vec(element(k, 2), 2));
    runner
        .run(&strat, |(x, c, b)| {
            let x = rats(&x);
            let xi = normal(&c);
            let m = tangential(&b);
            let lhs = ok(ts.h.eval(&ok(weingarten(e, nabla, &xi, &x))?, &m))?;
            let rhs = ok(ts.h.eval(&xi, &ok(second_fundamental_form(e, nabla, &x, &m))?))?;
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn projection_laws(mut runner: TestRunner) -> Result<(), String> {
    let ts = formal_embedding();
    let e = &ts.embedding;
    let k = Kind::FormalSphere;
    runner
        .run(&(module_vec(k, 3), module_vec(k, 3)), |(m, n)| {
            let (pm, qm) = ok(e.project(&m))?;
            prop_assert_eq!(&(&pm + &qm), &m);
            let (ppm, qpm) = ok(e.project(&pm))?;
            prop_assert_eq!(&ppm, &pm);
            prop_assert!(qpm.is_zero());
            let pn = ok(e.project(&n))?.0;
            prop_assert_eq!(ok(ts.h.eval(&pm, &n))?, ok(ts.h.eval(&m, &pn))?);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn normal_connection_laws(mut runner: TestRunner) -> Result<(), String> {
    let ts = formal_embedding();
    let (e, nabla, hom) = (&ts.embedding, &ts.nabla, ts.hom());
    let k = Kind::FormalSphere;
    let strat = (small_vec(2), small_vec(2), -3i32..=3, -3i32..=3, element(k, 2), element(k, 2), element(k, 2));
    runner
        .run(&strat, |(x, y, r, s, c1, c2, a)| {
            let (xr, yr) = (rats(&x), rats(&y));
            let (xi1, xi2) = (normal(&c1), normal(&c2));
            let d_xi1 = ok(normal_connection(e, nabla, &xr, &xi1))?;
            let d_xi2 = ok(normal_connection(e, nabla, &xr, &xi2))?;
            prop_assert_eq!(ok(normal_connection(e, nabla, &xr, &(&xi1 + &xi2)))?, &d_xi1 + &d_xi2);
            let comb: Vec<i32> = (0..2).map(|i| r * x[i] + s * y[i]).collect();
            let lhs = ok(normal_connection(e, nabla, &rats(&comb), &xi1))?;
            let d_y = ok(normal_connection(e, nabla, &yr, &xi1))?;
            prop_assert_eq!(lhs, &scale(&d_xi1, r)? + &scale(&d_y, s)?);
            let psi_x = ok(hom.source().lie().combination(&hom.psi_coords(&xr)))?;
            let lhs = ok(normal_connection(e, nabla, &xr, &ok(xi1.right_mul(&a))?))?;
            let rhs = &ok(d_xi1.right_mul(&a))? + &ok(xi1.right_mul(&ok(psi_x.apply(&a))?))?;
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn invertible_2x2() -> impl Strategy<Value = [i32; 4]> {
    [-3i32..=3, -3i32..=3, -3i32..=3, -3i32..=3].prop_filter("invertible", |m| m[0] * m[3] - m[1] * m[2] != 0)
}

fn basis_independence(mut runner: TestRunner) -> Result<(), String> {
    let ts = formal_embedding();
    runner
        .run(&invertible_2x2(), |m| {
            let a = ok(RationalMatrix::from_ints(&[&[m[0] as i64, m[1] as i64], &[m[2] as i64, m[3] as i64]]))?;
            let report = ok(mean_curvature_basis_independence_check(&ts.embedding, &ts.nabla, &a))?;
            prop_assert!(report.passed(), "{}", report);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn q_one(x: &AlgElement) -> Result<AlgElement, TestCaseError> {
    ok(x.specialize_q(&QValue::One))
}

fn q_one_vec(m: &ModVec) -> Result<ModVec, TestCaseError> {
    Ok(ModVec(m.coords().iter().map(q_one).collect::<Result<_, _>>()?))
}

/// Round sphere metric `diag(c_1 t, c_2 (1 - t), c_3 t (1 - t))` with
/// `c_a = r_a + s_a (q + q^{-1})`.
fn q_metric(rs: &[(i32, i32)]) -> Result<HermitianMetric, TestCaseError> {
    let spec = Kind::Sphere.spec();
    let base = ["t", "(1 - t)", "t*(1 - t)"];
    let entries = rs
        .iter()
        .zip(base)
        .map(|(&(r, s), b)| parse_element(&format!("({r} + {s}*(q + q^(-1)))*{b}"), spec))
        .collect::<ncgeom::Result<Vec<_>>>();
    ok(HermitianMetric::diagonal(ok(entries)?))
}

fn q_one_commutes(mut runner: TestRunner) -> Result<(), String> {
    let ts = formal_embedding();
    let (e, nabla) = (&ts.embedding, &ts.nabla);
    let alpha = gauss_weingarten(e, nabla).map_err(|e| e.to_string())?.alpha;
    let k = Kind::FormalSphere;
    let strat = (
        kind_with_elements(2),
        0usize..3,
        module_vec(k, 3),
        small_vec(2),
        vec((1i32..=3, 0i32..=2), 3),
    );
    let round = models::sphere_calculus(Kind::Sphere.spec()).map_err(|e| e.to_string())?;
    runner
        .run(&strat, |((kind, xs), a, m, x, rs)| {
            let (u, v) = (&xs[0], &xs[1]);
            let (su, sv) = (q_one(u)?, q_one(v)?);
            prop_assert_eq!(q_one(&(u * v))?, q_one(&(&su * &sv))?);
            prop_assert_eq!(q_one(&u.star())?, q_one(&su.star())?);
            let calc = calculus_for(kind);
            let d = calc.derivation(a % calc.rank());
            prop_assert_eq!(q_one(&ok(d.apply(u))?)?, q_one(&ok(d.apply(&su))?)?);
            let sm = q_one_vec(&m)?;
            prop_assert_eq!(q_one(&ok(ts.h.eval(&m, &m))?)?, q_one(&ok(ts.h.eval(&sm, &sm))?)?);
            let (pm, _) = ok(e.project(&m))?;
            prop_assert_eq!(q_one_vec(&pm)?, q_one_vec(&ok(e.project(&sm))?.0)?);
            let x = rats(&x);
            let am = ok(second_fundamental_form(e, nabla, &x, &pm))?;
            let sam = ok(second_fundamental_form(e, nabla, &x, &q_one_vec(&pm)?))?;
            prop_assert_eq!(q_one_vec(&am)?, q_one_vec(&sam)?);
            prop_assert_eq!(
                q_one(&ok(mean_curvature_at(e, &alpha, &m))?)?,
                q_one(&ok(mean_curvature_at(e, &alpha, &sm))?)?
            );
            let h = q_metric(&rs)?;
            let sh = q_metric(&rs.iter().map(|&(r, s)| (r + 2 * s, 0)).collect::<Vec<_>>())?;
            let g = ok(ok(levi_civita(&round, &h))?.map(|x| x.specialize_q(&QValue::One)))?;
            let sg = ok(levi_civita(&round, &sh))?;
            prop_assert_eq!(g, sg);
            Ok(())
        })
        .map_err(|e| e.to_string())
}
