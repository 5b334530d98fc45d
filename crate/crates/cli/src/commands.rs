//! The workbench commands. Each returns result items; engine failures
//! become `error` items rather than aborting.

use ncgeom::calculus::{validate_real_metric_calculus, ModVec};
use ncgeom::connection::{curvature, grad, laplace, levi_civita, verify_pseudo_riemannian, Connection};
use ncgeom::morphism::{construct_hom, induced_metric, make_embedding, AlgebraMap, CalculusHomomorphism, Embedding};
use ncgeom::qalgebra::parse_element;
use ncgeom::submanifold::{gauss_equation_check, gauss_weingarten, induced_connection, is_minimal, mean_curvature};

use crate::config::Setup;
use crate::output::{Item, Status, Value};
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, clap::Subcommand)]
pub enum Command {
    /// Checks the real metric calculus, and the hom and embedding when configured.
    Validate,
    /// The Levi-Civita connection on the basis.
    LeviCivita,
    /// The curvature R(d_a, d_b) E_c for a < b.
    Curvature,
    /// Gradient and Laplacian of an algebra element.
    Laplacian { expr: String },
    /// Builds the configured calculus homomorphism.
    HomCheck,
    /// Induced metric, complement and projections.
    Embed,
    /// Second fundamental form, Weingarten map, normal and induced connections.
    Alpha,
    /// Gauss' equation over all index tuples.
    GaussCheck,
    /// Mean curvature on the complement basis.
    MeanCurvature,
    /// Minimality verdict with obstructions.
    Minimal,
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Validate => "validate".into(),
            Command::LeviCivita => "levi-civita".into(),
            Command::Curvature => "curvature".into(),
            Command::Laplacian { expr } => format!("laplacian {expr}"),
            Command::HomCheck => "hom-check".into(),
            Command::Embed => "embed".into(),
            Command::Alpha => "alpha".into(),
            Command::GaussCheck => "gauss-check".into(),
            Command::MeanCurvature => "mean-curvature".into(),
            Command::Minimal => "minimal".into(),
        }
    }
}

/// Why a command stopped early.
enum Stop {
    Config(CliError),
    Violation(Item),
}

type Step<T> = Result<T, Stop>;

fn engine<T>(what: &str, r: ncgeom::Result<T>) -> Step<T> {
    r.map_err(|e| Stop::Violation(Item::error(what, e)))
}

fn hom(s: &Setup) -> Step<CalculusHomomorphism> {
    let hs = s.hom.as_ref().ok_or_else(|| {
        Stop::Config(CliError::Config {
            location: "hom".into(),
            message: "this command needs a [hom] section".into(),
        })
    })?;
    let [g1, g2] = hs.images.clone();
    let phi = engine("hom", AlgebraMap::new(s.spec, hs.target.spec(), g1, g2))?;
    engine("hom", construct_hom(&s.calc, &hs.target, phi, hs.psi.clone()))
}

fn embedding(s: &Setup) -> Step<Embedding> {
    let f = hom(s)?;
    let (complement, isometric) = s.complement.clone().ok_or_else(|| {
        Stop::Config(CliError::Config {
            location: "embedding".into(),
            message: "this command needs an [embedding] section".into(),
        })
    })?;
    let h2 = engine("induced metric", induced_metric(&f, &s.h))?;
    engine("embedding", make_embedding(f, complement, s.h.clone(), h2, isometric, None))
}

fn nabla(s: &Setup) -> Step<Connection> {
    engine("levi-civita", levi_civita(&s.calc, &s.h))
}

fn validate(s: &Setup, out: &mut Vec<Item>) -> Step<()> {
    out.extend(Item::from_report("", &validate_real_metric_calculus(&s.calc, &s.h)));
    if s.hom.is_some() {
        hom(s)?;
        out.push(Item::check("homomorphism", true, ""));
    }
    if s.complement.is_some() {
        let e = embedding(s)?;
        out.push(Item::check("embedding", true, ""));
        let report = validate_real_metric_calculus(e.hom().target(), e.target_metric());
        out.extend(Item::from_report("target: ", &report));
    }
    Ok(())
}

fn levi_civita_items(s: &Setup, out: &mut Vec<Item>) -> Step<()> {
    let nabla = nabla(s)?;
    let n = s.calc.rank();
    for b in 0..n {
        for c in 0..n {
            out.push(Item::vector(
                format!("nabla_{} E_{}", b + 1, c + 1),
                format!("\\nabla_{} E_{}", b + 1, c + 1),
                nabla.nabla_basis(b, c),
                "E",
            ));
        }
    }
    Ok(())
}

fn check_all(s: &Setup, cmd: &Command, out: &mut Vec<Item>) -> Step<()> {
    if *cmd != Command::Validate {
        validate(s, out)?;
    }
    let nabla = nabla(s)?;
    out.extend(Item::from_report("levi-civita: ", &verify_pseudo_riemannian(&s.calc, &s.h, &nabla)));
    if s.complement.is_some() && *cmd != Command::GaussCheck {
        let e = embedding(s)?;
        let induced = engine("induced connection", induced_connection(&e, &nabla))?;
        out.extend(Item::from_report("gauss: ", &gauss_equation_check(&e, &nabla, &induced)));
    }
    Ok(())
}

fn body(cmd: &Command, s: &Setup, out: &mut Vec<Item>) -> Step<()> {
    let n = s.calc.rank();
    match cmd {
        Command::Validate => validate(s, out)?,
        Command::LeviCivita => levi_civita_items(s, out)?,
        Command::Curvature => {
            let nabla = nabla(s)?;
            let r = engine("curvature", curvature(&nabla, &s.calc))?;
            for a in 0..n {
                for b in a + 1..n {
                    for c in 0..n {
                        out.push(Item::vector(
                            format!("R(d_{}, d_{}) E_{}", a + 1, b + 1, c + 1),
                            format!("R(\\partial_{},\\partial_{})E_{}", a + 1, b + 1, c + 1),
                            r.get(a, b, c).clone(),
                            "E",
                        ));
                    }
                }
            }
        }
        Command::Laplacian { expr } => {
            let x = parse_element(expr, s.spec).map_err(|e| {
                Stop::Config(CliError::Config {
                    location: "laplacian <expr>".into(),
                    message: e.to_string(),
                })
            })?;
            let nabla = nabla(s)?;
            let g = engine("grad", grad(&s.calc, &s.h, &x))?;
            out.push(Item::vector("grad(x)", "\\operatorname{grad}(x)", g, "E"));
            let d = engine("laplace", laplace(&s.calc, &s.h, &nabla, &x))?;
            out.push(Item::element("laplace(x)", "\\Delta(x)", d));
        }
        Command::HomCheck => {
            let f = hom(s)?;
            out.push(Item::check("homomorphism", true, ""));
            for g in s.spec.all_generators() {
                let name = g.name();
                let latex = name.replace('*', "^*");
                out.push(Item::element(format!("phi({name})"), format!("\\phi({latex})"), f.phi().image(g).clone()));
            }
            let n2 = f.target().rank();
            for i in 0..n2 {
                let t = f.tangent(i);
                out.push(Item::vector(
                    format!("Psi(delta_{})", i + 1),
                    format!("\\Psi(\\delta_{})", i + 1),
                    t.clone(),
                    "E",
                ));
            }
            for a in 0..n {
                let e = ModVec::basis(s.spec, n, a);
                match f.psi_hat(&e) {
                    Ok(v) => out.push(Item::vector(
                        format!("psi_hat(E_{})", a + 1),
                        format!("\\hat\\psi(E_{})", a + 1),
                        v,
                        "e",
                    )),
                    Err(ncgeom::Error::NotTangential(_)) => {}
                    Err(e) => return Err(Stop::Violation(Item::error("psi_hat", e))),
                }
            }
        }
        Command::Embed => {
            let e = embedding(s)?;
            let n2 = e.hom().target().rank();
            for i in 0..n2 {
                for j in 0..n2 {
                    out.push(Item::element(
                        format!("h'(e_{}, e_{})", i + 1, j + 1),
                        format!("h'(e_{},e_{})", i + 1, j + 1),
                        e.target_metric().entry(i, j).clone(),
                    ));
                }
            }
            for (k, xi) in e.complement().iter().enumerate() {
                out.push(Item::vector(format!("xi_{}", k + 1), format!("\\xi_{}", k + 1), xi.clone(), "E"));
            }
            for a in 0..n {
                let (p, q) = engine("project", e.project(&ModVec::basis(s.spec, n, a)))?;
                out.push(Item::vector(format!("P(E_{})", a + 1), format!("P(E_{})", a + 1), p, "E"));
                out.push(Item::vector(format!("Pi(E_{})", a + 1), format!("\\Pi(E_{})", a + 1), q, "E"));
            }
        }
        Command::Alpha => {
            let e = embedding(s)?;
            let nabla = nabla(s)?;
            let gw = engine("gauss-weingarten", gauss_weingarten(&e, &nabla))?;
            let n2 = e.hom().target().rank();
            for i in 0..n2 {
                for j in 0..n2 {
                    out.push(Item::vector(
                        format!("alpha(delta_{}, Psi(delta_{}))", i + 1, j + 1),
                        format!("\\alpha(\\delta_{},\\Psi(\\delta_{}))", i + 1, j + 1),
                        gw.alpha[i][j].clone(),
                        "E",
                    ));
                }
            }
            for (k, row) in gw.shape.iter().enumerate() {
                for (i, v) in row.iter().enumerate() {
                    out.push(Item::vector(
                        format!("A_xi_{}(delta_{})", k + 1, i + 1),
                        format!("A_{{\\xi_{}}}(\\delta_{})", k + 1, i + 1),
                        v.clone(),
                        "E",
                    ));
                }
            }
            for (k, row) in gw.normal.iter().enumerate() {
                for (i, v) in row.iter().enumerate() {
                    out.push(Item::vector(
                        format!("D_delta_{} xi_{}", i + 1, k + 1),
                        format!("D_{{\\delta_{}}}\\xi_{}", i + 1, k + 1),
                        v.clone(),
                        "E",
                    ));
                }
            }
            let induced = engine("induced connection", induced_connection(&e, &nabla))?;
            for i in 0..n2 {
                for j in 0..n2 {
                    out.push(Item::vector(
                        format!("nabla'_{} e_{}", i + 1, j + 1),
                        format!("\\nabla'_{} e_{}", i + 1, j + 1),
                        induced.nabla_basis(i, j),
                        "e",
                    ));
                }
            }
        }
        Command::GaussCheck => {
            let e = embedding(s)?;
            let nabla = nabla(s)?;
            let induced = engine("induced connection", induced_connection(&e, &nabla))?;
            out.extend(Item::from_report("", &gauss_equation_check(&e, &nabla, &induced)));
        }
        Command::MeanCurvature => {
            let e = embedding(s)?;
            let nabla = nabla(s)?;
            let h = engine("mean curvature", mean_curvature(&e, &nabla))?;
            for (k, v) in h.values.into_iter().enumerate() {
                out.push(Item::element(format!("H(xi_{})", k + 1), format!("H(\\xi_{})", k + 1), v));
            }
        }
        Command::Minimal => {
            let e = embedding(s)?;
            let nabla = nabla(s)?;
            let h = engine("mean curvature", mean_curvature(&e, &nabla))?;
            let verdict = engine("minimal", is_minimal(&h))?;
            out.push(Item::check("minimal", verdict.minimal, "not minimal"));
            for (k, x) in verdict.obstructions {
                out.push(Item {
                    name: format!("obstruction(xi_{})", k + 1),
                    latex_name: format!("\\text{{obstruction}}(\\xi_{})", k + 1),
                    value: Value::Element(x),
                    status: Status::Fail,
                });
            }
        }
    }
    Ok(())
}

/// Runs `cmd`; configuration problems are returned as errors, violations
/// as items.
pub fn run(cmd: &Command, s: &Setup, with_checks: bool) -> Result<Vec<Item>, CliError> {
    let mut out = Vec::new();
    let mut step = body(cmd, s, &mut out);
    if step.is_ok() && with_checks {
        step = check_all(s, cmd, &mut out);
    }
    match step {
        Ok(()) => Ok(out),
        Err(Stop::Violation(item)) => {
            out.push(item);
            Ok(out)
        }
        Err(Stop::Config(e)) => Err(e),
    }
}
