use std::process::{Command, Output};

fn kunzcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kunzcone"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = kunzcone(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

#[test]
fn groupcone_rays_z6_lists_eleven_vectors() {
    let out = stdout(&["groupcone", "rays", "Z6"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("11 5"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.contains(&"1 2 3 4 5"));
    assert!(rows.contains(&"1 0 1 0 1"));
    // sorted output
    let mut sorted = rows.clone();
    sorted.sort();
    assert_eq!(rows, sorted);
}

#[test]
fn leading_gamma_4_prints_exact_fraction() {
    let out = stdout(&["leading", "gamma", "4"]);
    assert!(out.contains("1/12"));
    let out = stdout(&["--format", "json", "leading", "gamma", "6"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["gamma"], "71/81648");
    assert_eq!(v["factored"], "71/(2^4*3^6*7)");
}

#[test]
fn apery_example() {
    let out = stdout(&["sgp", "apery", "5", "5", "7"]);
    assert_eq!(out.trim(), "[0, 21, 7, 28, 14]");
    let naive = stdout(&["sgp", "apery-naive", "5", "5", "7"]);
    assert_eq!(out, naive);
}

#[test]
fn json_witness_census() {
    let out = stdout(&["--format", "json", "kunz", "witness", "6", "--all-rays"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 11);
    let witnesses = arr
        .iter()
        .filter(|r| r["witness"]["witness_status"] == "witness")
        .count();
    assert_eq!(witnesses, 2);
}

#[test]
fn count_subcommands_accept_uppercase_alias() {
    assert_eq!(stdout(&["count", "L", "3", "3"]).trim(), "L_3(3) = 2");
    assert_eq!(stdout(&["count", "l", "3", "3"]).trim(), "L_3(3) = 2");
    assert_eq!(stdout(&["count", "N", "3", "4"]).trim(), "N_3(4) = 2");
}

#[test]
fn domain_errors_exit_one_guard_errors_exit_two() {
    let out = kunzcone(&["sgp", "apery", "4", "4", "6"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gcd"));

    // oversemigroup gap guard
    let out = kunzcone(&["sgp", "oversemigroups", "6", "25", "--count"]);
    assert_eq!(out.status.code(), Some(2));

    // guard override through the environment
    let out = Command::new(env!("CARGO_BIN_EXE_kunzcone"))
        .env("KUNZCONE_GUARD", "100")
        .args(["sgp", "oversemigroups", "6", "25", "--count"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "4746");

    let out = kunzcone(&["groupcone", "rays", "Z1"]);
    assert_eq!(out.status.code(), Some(1));

    let out = kunzcone(&["groupcone", "--bogus-flag"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fit_round_trip_through_file() {
    let dir = std::env::temp_dir().join("kunzcone-fit-test");
    std::fs::create_dir_all(&dir).unwrap();
    let series = dir.join("l3.txt");
    // L_3(g) = floor(2g/3) - ceil(g/3) + 1
    let mut content = String::from("# L_3 samples\n");
    for g in 0i64..30 {
        let v = (2 * g).div_euclid(3) + (-g).div_euclid(3) + 1;
        content.push_str(&format!("{g} {v}\n"));
    }
    std::fs::write(&series, content).unwrap();
    let out = stdout(&[
        "--format",
        "json",
        "fit",
        "--degree",
        "1",
        "--period",
        "3",
        "--series",
        series.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["leading_constant"], "1/3");
    assert_eq!(v["minimal_period"], 3);
}

#[test]
fn repro_is_byte_identical_across_runs() {
    let base = std::env::temp_dir().join("kunzcone-repro-test");
    let _ = std::fs::remove_dir_all(&base);
    let run1 = base.join("run1");
    let run2 = base.join("run2");
    for dir in [&run1, &run2] {
        let out = kunzcone(&["repro", "--out", dir.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let names = [
        "rays_z4.txt",
        "rays_z6.txt",
        "leading.csv",
        "triangulation_z4.json",
        "posets_z6.json",
        "witness_p6.json",
        "summary.txt",
    ];
    for name in names {
        let a = std::fs::read(run1.join(name)).unwrap_or_else(|_| panic!("{name} missing"));
        let b = std::fs::read(run2.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
    // spot-check artifact contents
    let leading = std::fs::read_to_string(run1.join("leading.csv")).unwrap();
    assert!(leading.contains("4,1/12,1/(2^2*3),1/72,1/(2^3*3^2)"));
    assert!(leading.contains("6,71/81648,71/(2^4*3^6*7),59/345600,59/(2^9*3^3*5^2)"));
    let tri = std::fs::read_to_string(run1.join("triangulation_z4.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&tri).unwrap();
    assert_eq!(v["gamma"], "1/12");
    assert_eq!(v["lambda"], "1/72");
    assert_eq!(v["simplices"].as_array().unwrap().len(), 2);
    assert_eq!(v["simplices"][0]["cross_section_volume"], "1/24");
}

#[test]
fn matrix_export_of_build() {
    let out = stdout(&["groupcone", "build", "Z4"]);
    let mut lines = out.lines();
    // 4 subadditivity rows + 3 non-negativity rows in R^3
    assert_eq!(lines.next(), Some("7 3"));
    assert_eq!(lines.clone().count(), 7);
    assert!(out.contains("2 -1 0"));
}
