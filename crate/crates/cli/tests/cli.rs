use std::process::{Command, Output};

fn ringmaj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringmaj"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn run_text_footnote_example() {
    let o = ringmaj(&[
        "run",
        "--rule",
        "maj",
        "-r",
        "3",
        "--pattern",
        "001",
        "--copies",
        "6",
        "--steps",
        "3",
        "--format",
        "text",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0], "..#".repeat(6));
    assert!(rows[1..].iter().all(|r| *r == ".".repeat(18)));
}

#[test]
fn run_overlay_letters_agree_between_rules() {
    let letters = |rule: &str| {
        let o = ringmaj(&[
            "run",
            "--rule",
            rule,
            "-r",
            "2",
            "--init",
            "0010110111",
            "--steps",
            "4",
            "--overlay",
        ]);
        assert!(o.status.success());
        stdout(&o)
            .lines()
            .map(|l| l.split_once(' ').expect("overlay column").1.to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(letters("maj"), letters("min"));
}

#[test]
fn run_pgm_dimensions() {
    let o = ringmaj(&[
        "run", "-r", "1", "--init", "0110100", "--steps", "2", "--format", "pgm",
    ]);
    assert!(o.status.success());
    let header = b"P5\n56 24\n255\n";
    assert_eq!(&o.stdout[..header.len()], header);
    assert_eq!(o.stdout.len(), header.len() + 56 * 24);
}

#[test]
fn run_pgm_overlay_is_a_usage_error() {
    let o = ringmaj(&[
        "run",
        "-r",
        "1",
        "--init",
        "0110",
        "--steps",
        "1",
        "--format",
        "pgm",
        "--overlay",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("overlay"));
}

#[test]
fn run_svg_is_well_formed() {
    let o = ringmaj(&[
        "run",
        "-r",
        "1",
        "--init",
        "0011",
        "--steps",
        "1",
        "--format",
        "svg",
        "--overlay",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.matches("<rect").count(), 8);
    assert!(out.trim_end().ends_with("</svg>"));
}

#[test]
fn classify_json_transient() {
    let o = ringmaj(&["classify", "-r", "1", "--init", "0001", "--format", "json"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).expect("json document");
    assert_eq!(doc["case"], "Transient");
    assert_eq!(doc["max_unstable_run"], 1);
    assert!(doc.get("spatial_period").is_none());
}

#[test]
fn classify_text_keys_are_stable() {
    let o = ringmaj(&["classify", "--rule", "min", "-r", "1", "--init", "01010101"]);
    assert!(o.status.success());
    let keys: Vec<String> = stdout(&o)
        .lines()
        .map(|l| l.split_once(": ").expect("key: value").0.to_string())
        .collect();
    assert_eq!(
        keys,
        [
            "configuration",
            "rule",
            "radius",
            "n",
            "temporal_class",
            "case",
            "spatial_period",
            "labels"
        ]
    );
    assert!(stdout(&o).contains("temporal_class: FixedPoint"));
}

#[test]
fn enumerate_both_methods_match() {
    let o = ringmaj(&["enumerate", "-r", "2", "-n", "12", "--method", "both"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.last(), Some(&"MATCH"));
    let split = lines
        .iter()
        .position(|l| l.starts_with("pattern "))
        .expect("second header");
    assert_eq!(lines[1..split], lines[split + 1..lines.len() - 1]);
}

#[test]
fn enumerate_brute_small_list() {
    let o = ringmaj(&["enumerate", "-r", "1", "-n", "4"]);
    assert_eq!(
        stdout(&o),
        "0000\n0011\n0101\n0110\n1001\n1010\n1100\n1111\n"
    );
    let o = ringmaj(&[
        "enumerate",
        "-r",
        "1",
        "-n",
        "4",
        "--canonical",
        "--method",
        "pattern",
    ]);
    assert_eq!(stdout(&o), "0000\n0011\n0101\n");
}

#[test]
fn enumerate_budget_is_a_usage_error() {
    let o = ringmaj(&["enumerate", "-r", "1", "-n", "40"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_small_instance_passes() {
    // below n = 7 every property holds at r = 1
    let o = ringmaj(&["verify", "-r", "1", "--n-max", "6", "--samples", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().last(), Some("PASS"));
}

#[test]
fn verify_reports_failing_property_with_exit_one() {
    // at r = 1 the unstable count stays level on 0010101 (n = 7)
    let o = ringmaj(&["verify", "-r", "1", "--n-max", "8", "--samples", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out
        .lines()
        .any(|l| l.contains("unstable-count-decrease") && l.contains("FAIL")));
    assert_eq!(out.lines().last(), Some("FAIL"));
}

#[test]
fn output_is_byte_deterministic() {
    let args = ["enumerate", "-r", "3", "-n", "16", "--method", "both"];
    assert_eq!(ringmaj(&args).stdout, ringmaj(&args).stdout);
}

#[test]
fn bad_input_is_a_usage_error() {
    assert_eq!(
        ringmaj(&["run", "-r", "1", "--init", "01x", "--steps", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ringmaj(&["run", "-r", "0", "--init", "01", "--steps", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(ringmaj(&["bogus"]).status.code(), Some(2));
}
