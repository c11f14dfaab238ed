use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use mahler_cli::output::Report;

fn mahler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mahler"))
        .args(args)
        .env_remove("MAHLER_PREC")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table1_csv_rows() {
    let o = mahler(&["table1", "--kmin", "20", "--kmax", "24", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,t,mu,e1,ratio");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[1], "20,9.5367e-7,2.6180306,1.1708e-8,2.6790");
    assert!(!text.contains('\r'));
}

#[test]
fn exit_codes() {
    assert_eq!(
        mahler(&["eval-mu", "--t", "not-a-number"]).status.code(),
        Some(2)
    );
    assert_eq!(mahler(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        mahler(&["verify-bz", "--prec", "32"]).status.code(),
        Some(2)
    );
    // t0 outside (0, 1e-2] is a domain error.
    assert_eq!(
        mahler(&[
            "product-exponent",
            "--alpha",
            "0.5",
            "--k",
            "2",
            "--t0",
            "0.5"
        ])
        .status
        .code(),
        Some(1)
    );
    let help = mahler(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("reproduce-all"));
}

#[test]
fn json_round_trips() {
    for args in [
        vec!["charpoly", "--n", "7", "--json"],
        vec!["coeffs", "--n", "16", "--format", "json"],
        vec!["omega", "--degree", "1", "--json"],
    ] {
        let o = mahler(&args);
        assert!(o.status.success(), "{args:?}");
        let text = stdout(&o);
        let r = Report::from_json(&text).unwrap();
        assert_eq!(r.to_json(), text);
    }
}

fn run_constants(cache: &Path, prec: &str) -> (Output, f64) {
    let start = Instant::now();
    let o = mahler(&[
        "constants",
        "--prec",
        prec,
        "--k-osc",
        "4",
        "--cache",
        cache.to_str().unwrap(),
    ]);
    (o, start.elapsed().as_secs_f64())
}

#[test]
fn constants_cache() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("constants.json");
    let (fresh, t_fresh) = run_constants(&path, "192");
    assert!(fresh.status.success());
    let (cached, t_cached) = run_constants(&path, "192");
    assert_eq!(stdout(&fresh), stdout(&cached));
    assert!(
        t_fresh >= 10.0 * t_cached,
        "fresh {t_fresh} s, cached {t_cached} s"
    );

    let stored: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(stored["prec_bits"], 192);
    assert!(stored["entries"]["c0"].is_string());
    assert!(stored["entries"]["A_1"].is_string());
    assert!(stored["entries"]["Mtilde0"].is_string());

    // A higher request than the cache holds recomputes and upgrades the file.
    let (higher, _) = run_constants(&path, "256");
    assert!(higher.status.success());
    let stored: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(stored["prec_bits"], 256);

    std::fs::write(&path, "{ not json").unwrap();
    let (tampered, _) = run_constants(&path, "192");
    assert!(tampered.status.success());
    assert!(String::from_utf8_lossy(&tampered.stderr).contains("WARN"));
    assert_eq!(stdout(&tampered), stdout(&fresh));
}

#[test]
fn config_and_environment_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# settings\nprec = 96\nformat = json\n").unwrap();
    let prec_of = |o: Output| Report::from_json(&stdout(&o)).unwrap().prec_bits;

    let from_file = mahler(&["coeffs", "--n", "4", "--config", cfg.to_str().unwrap()]);
    assert_eq!(prec_of(from_file), 96);

    let flag = mahler(&[
        "coeffs",
        "--n",
        "4",
        "--config",
        cfg.to_str().unwrap(),
        "--prec",
        "80",
    ]);
    assert_eq!(prec_of(flag), 80);

    let env = Command::new(env!("CARGO_BIN_EXE_mahler"))
        .args(["coeffs", "--n", "4", "--json"])
        .env("MAHLER_PREC", "72")
        .output()
        .unwrap();
    assert_eq!(prec_of(env), 72);

    let env_under_file = Command::new(env!("CARGO_BIN_EXE_mahler"))
        .args(["coeffs", "--n", "4", "--config", cfg.to_str().unwrap()])
        .env("MAHLER_PREC", "72")
        .output()
        .unwrap();
    assert_eq!(prec_of(env_under_file), 96);
}

#[test]
fn reproduce_all_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for threads in ["1", "4"] {
        let path = dir.path().join(format!("report-{threads}.csv"));
        let o = Command::new(env!("CARGO_BIN_EXE_mahler"))
            .args([
                "reproduce-all",
                "--format",
                "csv",
                "--output",
                path.to_str().unwrap(),
            ])
            .env_remove("MAHLER_PREC")
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        reports.push(std::fs::read_to_string(&path).unwrap());
    }
    assert_eq!(
        reports[0].lines().filter(|l| l.contains(",PASS,")).count(),
        14
    );
    assert_eq!(reports[0], reports[1]);
}
