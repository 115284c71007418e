mod support;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn wnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wnet"))
        .args(args)
        .env("WNET_LOG", "error")
        .output()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (flows, gdp) = support::toy();
    let out = dir.path().join("out");

    let ok = wnet(&["all", "--flows", p(&flows), "--gdp", p(&gdp), "--out", p(&out)]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));

    // Validation: unknown flag, inverted range, GDP scheme without --gdp, bad analysis.
    assert_eq!(wnet(&["all", "--bogus"]).status.code(), Some(1));
    assert_eq!(
        wnet(&["stats", "--flows", p(&flows), "--gdp", p(&gdp), "--out", p(&out), "--years", "2005:2000"]).status.code(),
        Some(1)
    );
    assert_eq!(wnet(&["stats", "--flows", p(&flows), "--out", p(&out)]).status.code(), Some(1));
    assert_eq!(
        wnet(&["analyze", "--flows", p(&flows), "--gdp", p(&gdp), "--out", p(&out), "--analyses", "plots"]).status.code(),
        Some(1)
    );

    // Data: unreadable input, year absent from the data, malformed rows.
    let missing = dir.path().join("nope.csv");
    assert_eq!(wnet(&["stats", "--flows", p(&missing), "--gdp", p(&gdp), "--out", p(&out)]).status.code(), Some(2));
    assert_eq!(
        wnet(&["stats", "--flows", p(&flows), "--gdp", p(&gdp), "--out", p(&out), "--years", "1990"]).status.code(),
        Some(2)
    );
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "year,exporter,importer,value\n2000,AAA,BBB,-4\n").unwrap();
    let res = wnet(&["stats", "--flows", p(&bad), "--scheme", "raw", "--out", p(&out)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line"));

    // A foreign non-empty directory is never overwritten.
    let foreign = dir.path().join("foreign");
    fs::create_dir(&foreign).unwrap();
    fs::write(foreign.join("notes.txt"), "keep").unwrap();
    let res = wnet(&["stats", "--flows", p(&flows), "--gdp", p(&gdp), "--out", p(&foreign)]);
    assert_eq!(res.status.code(), Some(1));
    assert_eq!(fs::read_to_string(foreign.join("notes.txt")).unwrap(), "keep");
}

#[test]
fn help_exits_zero() {
    let out = wnet(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in ["build", "stats", "analyze", "report", "all"] {
        assert!(text.contains(sub), "{sub}");
    }
}

#[test]
fn subcommand_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let (flows, gdp) = support::toy();
    let run = |sub: &str, out: &Path| {
        let res = wnet(&[sub, "--flows", p(&flows), "--gdp", p(&gdp), "--out", p(out)]);
        assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
        support::snapshot(out)
    };
    let build = run("build", &dir.path().join("build"));
    assert!(build.contains_key("symmetry.csv") && build.contains_key("networks/2000.txt"));
    assert!(!build.contains_key("moments.csv"));

    let stats = run("stats", &dir.path().join("stats"));
    assert!(stats.contains_key("stats/2000.csv") && stats.contains_key("moments.csv"));
    assert!(!stats.keys().any(|k| k.starts_with("correlations/")));

    let analyze = run("analyze", &dir.path().join("analyze"));
    assert!(analyze.contains_key("correlations/ND-NS.csv") && analyze.contains_key("tailfit.csv"));
    assert!(!analyze.contains_key("moments.csv"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let (flows, gdp) = support::toy();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        format!(
            "flows = {:?}\ngdp = {:?}\nout = {:?}\nanalyses = [\"stats\"]\nyears = \"2000\"\n",
            p(&flows),
            p(&gdp),
            p(&dir.path().join("from-file"))
        ),
    )
    .unwrap();
    let flag_out = dir.path().join("from-flag");
    let res = wnet(&["stats", "--config", p(&cfg), "--out", p(&flag_out)]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(!dir.path().join("from-file").exists());
    let files = support::snapshot(&flag_out);
    assert!(files.contains_key("stats/2000.csv"));
    assert!(!files.contains_key("moments.csv"));

    fs::write(&cfg, "flows = \"x\"\ncolour = \"red\"\n").unwrap();
    assert_eq!(wnet(&["stats", "--config", p(&cfg)]).status.code(), Some(1));
}

#[test]
fn report_adds_comparison_to_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let flows = dir.path().join("flows.csv");
    support::write_weight_flows(&flows, &support::disassortative_family());
    let out = dir.path().join("out");
    let res = wnet(&["analyze", "--flows", p(&flows), "--scheme", "raw", "--analyses", "correlations", "--out", p(&out)]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(!out.join("comparison.csv").exists());

    let res = wnet(&["report", "--out", p(&out)]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let table = String::from_utf8_lossy(&res.stdout);
    assert!(table.contains("BNA") && table.contains("strong negative"), "{table}");
    assert!(table.contains("WNA") && table.contains("moderate negative"), "{table}");

    let bundle = wnet_cli::ReportBundle::load(&out).unwrap();
    assert!(bundle.manifest.files.iter().any(|f| f.path == "comparison.csv"));

    // The toy bundle lacks clustering series, so report fails with a data error.
    let (tf, tg) = support::toy();
    let toy_out = dir.path().join("toy");
    wnet(&["all", "--flows", p(&tf), "--gdp", p(&tg), "--out", p(&toy_out)]);
    let res = wnet(&["report", "--out", p(&toy_out)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("BCC-ND"));
    assert_eq!(wnet(&["report", "--out", p(&dir.path().join("missing"))]).status.code(), Some(2));
}
