use std::process::{Command, Output};

const SEXTIC: &str = "axes x,y,z; Dx^2*Dy^2*Dz^2 + Dx^2*Dy^2 + Dz^2";
const BIHARMONIC: &str = "axes x,y,z; Dx^4 + Dy^4 + Dz^4 + 2*Dx^2*Dy^2 + 2*Dx^2*Dz^2 + 2*Dy^2*Dz^2";

fn kform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kform")).args(args).env_remove("KFORM_ENUM_CEILING").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_prints_n_first() {
    let o = kform(&["count", "--op", SEXTIC]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("12"));

    let o = kform(&["count", "--op", BIHARMONIC]);
    assert_eq!(stdout(&o).lines().next(), Some("8"));
}

#[test]
fn count_json() {
    let o = kform(&["count", "--op", SEXTIC, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], "12");
    assert_eq!(v["terms"].as_array().unwrap().len(), 3);
}

#[test]
fn decompose_wave_latex() {
    let o = kform(&["decompose", "--op", "axes x,t; Dt^2 - Dx^2", "--format", "latex"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("verified: true"), "{s}");
    assert!(s.contains("\\wedge"));
}

#[test]
fn explicit_plan_flags() {
    let o = kform(&["decompose", "--op", "axes x,y,z; Dx*Dy*Dz", "--transfer", "0=y", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["plan"][0]["odd"]["transfer"], serde_json::json!(["y"]));

    let o = kform(&["decompose", "--op", "axes x,y,z; Dx*Dy*Dz", "--transfer", "x,y"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_summary_and_ceiling() {
    let o = kform(&["enumerate", "--op", SEXTIC]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("equivalent pairs: 66 of 66"));

    let o = kform(&["enumerate", "--op", SEXTIC, "--ceiling", "5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("exceed the ceiling"));
}

#[test]
fn parameterization_failure_exits_one() {
    let good = "s_x = 2/(lambda - 1/lambda), s_y = 1, s_z = 2/(lambda + 1/lambda)";
    let o = kform(&["constraint", "--op", SEXTIC, "--param", good]);
    assert!(o.status.success());
    let bad = "s_x = 2/(lambda - 1/lambda), s_y = 1, s_z = 2/(lambda + 1/lambda) + 1";
    let o = kform(&["constraint", "--op", SEXTIC, "--param", bad]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    let o = kform(&["decompose", "--op", "axes x,y; Dx^2 +"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(kform(&["verify", "--case", "kdv"]).status.code(), Some(2));
    assert_eq!(kform(&["count"]).status.code(), Some(2));
}

#[test]
fn verify_catalog_and_wrong_solution() {
    for tag in ["wave", "heat", "biharmonic", "stokes"] {
        let o = kform(&["verify", "--case", tag, "--quad", "12"]);
        assert!(o.status.success(), "{tag}: {}", stdout(&o));
    }
    let o = kform(&["verify", "--case", "wave", "--solution", "x^4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_custom_operator() {
    let o = kform(&[
        "verify",
        "--op",
        "axes t,x; Dt - Dx^2",
        "--solution",
        "exp(x + t)",
        "--spectral",
        "s_t=-i*a^2, s_x=a",
        "--point",
        "a=1.3",
        "--box",
        "t=0:0.5, x=-1:1",
        "--sequential",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn global_relation_and_represent() {
    let o = kform(&["global-relation", "--op", "axes t,x; Dt^2 - Dx^2", "--spectral", "s_t=-k, s_x=k", "--box", "t=0:T, x=0:l"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("q|x=l"));

    let o = kform(&["represent", "--op", "axes x,y; Dx^2 + Dy^2", "--fokas-zyskin", "--format", "latex"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\\mathfrak{p}"));
}

#[test]
fn stokes_checks() {
    let o = kform(&["stokes"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("adjoint rows vanish: true"));
    assert!(s.contains("u3_z"));
}

#[test]
fn output_is_deterministic() {
    let args = ["enumerate", "--op", SEXTIC, "--format", "json"];
    assert_eq!(kform(&args).stdout, kform(&args).stdout);
    let args = ["verify", "--case", "stokes", "--format", "json", "--quad", "10"];
    assert_eq!(kform(&args).stdout, kform(&args).stdout);
}
