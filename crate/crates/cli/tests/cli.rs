use std::process::{Command, Output};

use ncgeom::calculus::ModVec;
use ncgeom::qalgebra::parse_element;
use ncgeom_cli::commands::Command as Cmd;
use ncgeom_cli::config::Format;
use ncgeom_cli::output::{JsonReport, Status, Value};
use ncgeom_cli::{execute, Options};

fn ncgeom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncgeom")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn flat_torus_connection_vanishes() {
    let o = ncgeom(&["levi-civita", "--config", "flat_torus"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<_> = stdout(&o).lines().skip(1).map(String::from).collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l.ends_with(" = 0")), "{lines:?}");
}

#[test]
fn flat_torus_laplacian() {
    let o = ncgeom(&["laplacian", "U^2", "--config", "flat_torus"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("laplace(x) = -4*U^2\n"));
}

// The six lines of the sphere connection in canonical term order. Against
// the printed display, `H_3 + |W|^2 - |Z|^2` reads `1 - 2|Z|^2 + H_3`
// since |Z|^2 + |W|^2 = 1.
const SPHERE_LATEX: [&str; 6] = [
    r"\nabla_1 E_1 &= E_1H_1 - E_2|Z|^2|W|^{-2}H_2 - E_3(1 + |W|^{-2}H_3)",
    r"\nabla_1 E_2 &= E_1H_2 + E_2H_1",
    r"\nabla_1 E_3 &= E_1(|W|^2 + H_3) + E_3H_1",
    r"\nabla_2 E_2 &= -E_1|Z|^{-2}|W|^2H_1 + E_2H_2 + E_3(1 - |Z|^{-2}H_3)",
    r"\nabla_2 E_3 &= E_2(-|Z|^2 + H_3) + E_3H_2",
    r"\nabla_3 E_3 &= -E_1|W|^2H_1 - E_2|Z|^2H_2 + E_3(1 - 2|Z|^2 + H_3)",
];

#[test]
fn sphere_connection_in_latex() {
    let o = ncgeom(&["levi-civita", "--config", "s3_formalK", "--format", "latex"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in SPHERE_LATEX {
        assert!(out.contains(line), "missing {line}\n{out}");
    }
    assert!(out.contains(r"\nabla_2 E_1 &= E_1H_2 + E_2H_1"));
}

#[test]
fn minimality_verdicts() {
    for config in ["torus_in_s3_K1_lambda_half", "torus_in_s3_KZW"] {
        let o = ncgeom(&["minimal", "--config", config]);
        assert_eq!(o.status.code(), Some(0), "{config}");
        assert!(stdout(&o).contains("PASS minimal\n"), "{config}");
    }
    let o = ncgeom(&["minimal", "--config", "torus_in_s3_formalK"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL minimal"));
    assert!(out.contains("FAIL obstruction(xi_1): -7/25*K - K_3\n"), "{out}");
}

#[test]
fn check_all_passes_on_shipped_embeddings() {
    for config in ["torus_in_s3_K1", "torus_in_s3_KZW", "torus_in_s3_formalK"] {
        let o = ncgeom(&["embed", "--config", config, "--check-all"]);
        assert_eq!(o.status.code(), Some(0), "{config}");
        let out = stdout(&o);
        assert!(!out.contains("FAIL") && !out.contains("ERROR"), "{out}");
        assert!(out.contains("PASS gauss: Gauss (1, 2; 1, 2)"));
    }
}

#[test]
fn config_and_usage_errors_exit_2() {
    let dir = std::env::temp_dir().join(format!("ncgeom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "[algebra]\nbase = \"torus\"\n[metric]\ndiagonal = [\"1\"]\n").unwrap();
    let o = ncgeom(&["validate", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("metric.diagonal"));

    for args in [
        &["validate", "--config", "no_such_config"][..],
        &["validate"],
        &["frobnicate", "--config", "flat_torus"],
        &["laplacian", "U +", "--config", "flat_torus"],
        &["hom-check", "--config", "s3_round"],
        &["validate", "--config", "flat_torus", "--format", "yaml"],
    ] {
        assert_eq!(ncgeom(args).status.code(), Some(2), "{args:?}");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_is_reproducible() {
    for args in [
        &["alpha", "--config", "torus_in_s3_formalK", "--format", "json"][..],
        &["curvature", "--config", "s3_round", "--format", "latex"],
        &["gauss-check", "--config", "torus_in_s3_K1"],
    ] {
        let a = ncgeom(args);
        let b = ncgeom(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), Some(0));
    }
}

#[test]
fn q_one_specializes() {
    let formal = stdout(&ncgeom(&["laplacian", "V*U", "--config", "flat_torus"]));
    let one = stdout(&ncgeom(&["laplacian", "V*U", "--config", "flat_torus", "--q", "one"]));
    assert!(formal.contains("laplace(x) = -2*q*U*V"), "{formal}");
    assert!(one.contains("laplace(x) = -2*U*V"), "{one}");
}

#[test]
fn json_expressions_round_trip() {
    let runs = [
        (Cmd::LeviCivita, "s3_formalK"),
        (Cmd::Curvature, "s3_round"),
        (Cmd::HomCheck, "torus_in_s3_formalK"),
        (Cmd::Embed, "torus_in_s3_KZW"),
        (Cmd::Alpha, "torus_in_s3_formalK"),
        (Cmd::MeanCurvature, "torus_in_s3_formalK"),
        (Cmd::Laplacian { expr: "Z*W^2 + q*t".into() }, "s3_round"),
    ];
    for (cmd, config) in runs {
        let opts = Options {
            format: Some(Format::Json),
            ..Options::default()
        };
        let (outcome, text) = execute(&cmd, config, opts).unwrap();
        let report: JsonReport = serde_json::from_str(&text).unwrap();
        assert_eq!(report.command, cmd.name());
        assert_eq!(report.inputs_digest.len(), 64);
        assert_eq!(report.results.len(), outcome.items.len());
        for (r, item) in report.results.iter().zip(&outcome.items) {
            assert_eq!(r.name, item.name);
            assert!(matches!(r.status, Status::Ok | Status::Pass), "{config}: {}", r.name);
            match &item.value {
                Value::Element(x) => {
                    assert_eq!(&parse_element(&r.expression, x.spec()).unwrap(), x, "{}", r.expression)
                }
                Value::Vector(m, basis) => {
                    let back = ModVec::parse(&r.expression, basis, m.coord(0).spec(), m.rank()).unwrap();
                    assert_eq!(&back, m, "{}", r.expression);
                }
                Value::Text(_) => {}
            }
        }
    }
}
