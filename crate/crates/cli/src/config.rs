//! Workbench configuration files.

use num_rational::BigRational;
use serde::Deserialize;

use ncgeom::calculus::{HermitianMetric, ModVec, RealCalculus};
use ncgeom::models::{self, ConformalFactor};
use ncgeom::qalgebra::{parse_coeff, parse_element, BaseAlgebra};
use ncgeom::{AlgElement, AlgebraSpec, RationalMatrix};

use crate::CliError;

/// Configurations shipped with the binary, addressable by name.
pub const BUILTIN: &[(&str, &str)] = &[
    ("flat_torus", include_str!("../configs/flat_torus.toml")),
    ("s3_round", include_str!("../configs/s3_round.toml")),
    ("s3_formalK", include_str!("../configs/s3_formalK.toml")),
    ("torus_in_s3_K1", include_str!("../configs/torus_in_s3_K1.toml")),
    ("torus_in_s3_K1_lambda_half", include_str!("../configs/torus_in_s3_K1.toml")),
    ("torus_in_s3_KZW", include_str!("../configs/torus_in_s3_KZW.toml")),
    ("torus_in_s3_formalK", include_str!("../configs/torus_in_s3_formalK.toml")),
];

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum QMode {
    #[default]
    Formal,
    One,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Latex,
    Json,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    Torus,
    Sphere3,
    Sphere3Loc,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Conformal {
    #[default]
    One,
    Formal,
    Element,
}

/// A rational matrix entry: an integer or a string such as `"3/5"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSection {
    pub base: Base,
    #[serde(default)]
    pub q: QMode,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSection {
    /// Central coefficients of the diagonal entries in the standard basis.
    pub diagonal: Vec<String>,
    #[serde(default)]
    pub conformal: Conformal,
    pub k: Option<String>,
    pub k_inv: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationSection {
    /// Rows give the new derivations in terms of the standard ones.
    pub matrix: Option<Vec<Vec<Num>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomSection {
    pub target: Base,
    /// Images of the two generators (`Z, W` or `U, V`) of the source.
    pub images: [String; 2],
    /// `psi(delta'_i) = sum_a psi[i][a] d_a`.
    pub psi: Vec<Vec<Num>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingSection {
    /// Complement basis vectors written as `E_3`, `E_1*(t) + E_2`, ...
    pub complement: Vec<String>,
    #[serde(default = "yes")]
    pub isometric: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub format: Format,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkbenchConfig {
    pub algebra: AlgebraSection,
    pub metric: MetricSection,
    #[serde(default)]
    pub derivations: DerivationSection,
    pub hom: Option<HomSection>,
    pub embedding: Option<EmbeddingSection>,
    #[serde(default)]
    pub output: OutputSection,
}

/// A loaded configuration: its text (for the digest) and the parsed form.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub name: String,
    pub text: String,
    pub config: WorkbenchConfig,
}

fn cfg(location: impl Into<String>, message: impl std::fmt::Display) -> CliError {
    CliError::Config {
        location: location.into(),
        message: message.to_string(),
    }
}

/// Reads a file path, falling back to a builtin name.
pub fn load(path_or_name: &str) -> Result<Loaded, CliError> {
    let (name, text) = match std::fs::read_to_string(path_or_name) {
        Ok(text) => (path_or_name.to_string(), text),
        Err(io) => match BUILTIN.iter().find(|(n, _)| *n == path_or_name) {
            Some((n, text)) => (n.to_string(), text.to_string()),
            None => return Err(cfg(path_or_name, format!("{io}; builtin configs: {}", builtin_names()))),
        },
    };
    let config = parse(&text)
        .map_err(|CliError::Config { location, message }| cfg(format!("{name}: {location}"), message))?;
    Ok(Loaded { name, text, config })
}

pub fn builtin_names() -> String {
    BUILTIN.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
}

pub fn parse(text: &str) -> Result<WorkbenchConfig, CliError> {
    toml::from_str(text).map_err(|e| {
        let location = match e.span() {
            Some(span) => {
                let line = text[..span.start].matches('\n').count() + 1;
                format!("line {line}")
            }
            None => "toml".into(),
        };
        cfg(location, e.message())
    })
}

fn rational(location: &str, n: &Num) -> Result<BigRational, CliError> {
    match n {
        Num::Int(i) => Ok(BigRational::from_integer((*i).into())),
        Num::Text(s) => s.trim().parse().map_err(|e| cfg(location, format!("{s:?}: {e}"))),
    }
}

fn matrix(location: &str, rows: &[Vec<Num>]) -> Result<RationalMatrix, CliError> {
    let entries = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| rational(&format!("{location}[{i}][{j}]"), x))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    RationalMatrix::new(entries).map_err(|e| cfg(location, e))
}

fn base_spec(base: Base, formal: bool, location: &str) -> Result<AlgebraSpec, CliError> {
    let b = match base {
        Base::Torus => BaseAlgebra::Torus,
        Base::Sphere3 => BaseAlgebra::Sphere3,
        Base::Sphere3Loc => BaseAlgebra::Sphere3Loc,
    };
    if formal {
        AlgebraSpec::formal_factor_ext(b).map_err(|e| cfg(location, e))
    } else {
        Ok(match base {
            Base::Torus => AlgebraSpec::torus(),
            Base::Sphere3 => AlgebraSpec::sphere3(),
            Base::Sphere3Loc => AlgebraSpec::sphere3_loc(),
        })
    }
}

fn standard_calculus(spec: AlgebraSpec, location: &str) -> Result<RealCalculus, CliError> {
    let c = if spec.is_torus() {
        models::torus_calculus(spec)
    } else {
        models::sphere_calculus(spec)
    };
    c.map_err(|e| cfg(location, e))
}

fn element(location: &str, text: &str, spec: AlgebraSpec) -> Result<AlgElement, CliError> {
    parse_element(text, spec).map_err(|e| cfg(location, e))
}

/// The source calculus and metric; everything downstream is validated by
/// the individual commands.
#[derive(Clone, Debug)]
pub struct Setup {
    pub spec: AlgebraSpec,
    pub calc: RealCalculus,
    pub h: HermitianMetric,
    pub q: QMode,
    pub hom: Option<HomSetup>,
    pub complement: Option<(Vec<ModVec>, bool)>,
}

#[derive(Clone, Debug)]
pub struct HomSetup {
    pub target: RealCalculus,
    pub images: [AlgElement; 2],
    pub psi: RationalMatrix,
}

impl WorkbenchConfig {
    pub fn setup(&self) -> Result<Setup, CliError> {
        let m = &self.metric;
        let formal = m.conformal == Conformal::Formal;
        let spec = base_spec(self.algebra.base, formal, "algebra.base")?;
        let mut calc = standard_calculus(spec, "algebra.base")?;
        if m.diagonal.len() != calc.rank() {
            return Err(cfg(
                "metric.diagonal",
                format!("{} entries for {} derivations", m.diagonal.len(), calc.rank()),
            ));
        }
        let coeffs = m
            .diagonal
            .iter()
            .enumerate()
            .map(|(i, s)| parse_coeff(s).map_err(|e| cfg(format!("metric.diagonal[{i}]"), e)))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(i) = coeffs.iter().position(|c| !spec.admits_coeff(c)) {
            return Err(cfg(format!("metric.diagonal[{i}]"), format!("not a coefficient of {spec}")));
        }
        let factor = match m.conformal {
            Conformal::One => ConformalFactor::One,
            Conformal::Formal => ConformalFactor::FormalK,
            Conformal::Element => {
                let k = m.k.as_deref().ok_or_else(|| cfg("metric.k", "required when conformal = \"element\""))?;
                let k_inv = m
                    .k_inv
                    .as_deref()
                    .ok_or_else(|| cfg("metric.k_inv", "required when conformal = \"element\""))?;
                ConformalFactor::Element {
                    k: element("metric.k", k, spec)?,
                    k_inv: element("metric.k_inv", k_inv, spec)?,
                }
            }
        };
        let mut h = models::conformal_diagonal_metric(spec, &coeffs, &factor).map_err(|e| cfg("metric", e))?;
        if let Some(rows) = &self.derivations.matrix {
            let a = matrix("derivations.matrix", rows)?;
            calc = calc.change_basis(&a).map_err(|e| cfg("derivations.matrix", e))?;
            h = h.transform(&a).map_err(|e| cfg("derivations.matrix", e))?;
        }
        let hom = match &self.hom {
            None => None,
            Some(hs) => {
                let tspec = base_spec(hs.target, formal, "hom.target")?;
                let target = standard_calculus(tspec, "hom.target")?;
                let images = [
                    element("hom.images[0]", &hs.images[0], tspec)?,
                    element("hom.images[1]", &hs.images[1], tspec)?,
                ];
                let psi = matrix("hom.psi", &hs.psi)?;
                Some(HomSetup { target, images, psi })
            }
        };
        let complement = match &self.embedding {
            None => None,
            Some(es) => {
                if hom.is_none() {
                    return Err(cfg("embedding", "requires a [hom] section"));
                }
                let vs = es
                    .complement
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        ModVec::parse(s, "E", spec, calc.rank()).map_err(|e| cfg(format!("embedding.complement[{i}]"), e))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Some((vs, es.isometric))
            }
        };
        Ok(Setup {
            spec,
            calc,
            h,
            q: self.algebra.q,
            hom,
            complement,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_parse_and_set_up() {
        for (name, text) in BUILTIN {
            let c = parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            c.setup().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn errors_carry_locations() {
        let text = "[algebra]\nbase = \"torus\"\n[metric]\ndiagonal = [\"1\", \"1 +\"]\n";
        let err = parse(text).unwrap().setup().unwrap_err();
        assert!(err.to_string().contains("metric.diagonal[1]"), "{err}");
        let err = parse("[algebra]\nbase = \"klein\"\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn element_factor_needs_inverse() {
        let text = "[algebra]\nbase = \"sphere3_loc\"\n[metric]\ndiagonal = [\"t\", \"1 - t\", \"t*(1 - t)\"]\nconformal = \"element\"\nk = \"t\"\n";
        let err = parse(text).unwrap().setup().unwrap_err();
        assert!(err.to_string().contains("metric.k_inv"), "{err}");
    }
}
