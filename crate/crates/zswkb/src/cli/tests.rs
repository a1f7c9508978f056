use super::*;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("zswkb-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

fn parse(args: &[&str]) -> Cli {
    Cli::try_parse_from(std::iter::once("zswkb").chain(args.iter().copied())).unwrap()
}

#[test]
fn flags_parse_into_a_run_config() {
    let sech = configs().join("sech.toml");
    let cli = parse(&["sweep", "--potential", sech.to_str().unwrap(), "--hbars", "0.2,0.1", "--mu-window", "0.1,0.9"]);
    let rc = RunConfig::resolve(&cli.common, &cli.command).unwrap();
    assert_eq!(rc.hbar, vec![0.2, 0.1]);
    assert_eq!(rc.mu_window, Some((0.1, 0.9)));
    assert_eq!(rc.command, "sweep");
}

#[test]
fn bad_configs_name_the_field() {
    let sech = configs().join("sech.toml");
    let p = sech.to_str().unwrap();
    let cases: [(&[&str], &str); 4] = [
        (&["wkb"], "potential"),
        (&["wkb", "--potential", p], "hbar"),
        (&["wkb", "--potential", p, "--hbar", "0.1,-0.2"], "hbar[1]"),
        (&["sweep", "--potential", p, "--hbar", "0.1,0.2"], "hbar"),
    ];
    for (args, field) in cases {
        let cli = parse(args);
        match RunConfig::resolve(&cli.common, &cli.command) {
            Err(Error::Config { path, .. }) => assert_eq!(path, field, "{args:?}"),
            other => panic!("{args:?}: {other:?}"),
        }
    }
}

#[test]
fn config_hash_tracks_inputs() {
    let sech = configs().join("sech.toml");
    let spec = PotentialSpec::from_path(&sech).unwrap();
    let rc = |h: &str| {
        let cli = parse(&["wkb", "--potential", sech.to_str().unwrap(), "--hbar", h]);
        RunConfig::resolve(&cli.common, &cli.command).unwrap()
    };
    assert_eq!(rc("0.1").hash(&spec), rc("0.1").hash(&spec));
    assert_ne!(rc("0.1").hash(&spec), rc("0.2").hash(&spec));
    assert_eq!(rc("0.1").hash(&spec).len(), 16);
}

#[test]
fn wkb_run_writes_ten_sech_rows_deterministically() {
    let out = scratch("wkb");
    let sech = configs().join("sech.toml");
    let args = ["wkb", "--potential", sech.to_str().unwrap(), "--hbar", "0.1", "--out", out.to_str().unwrap()];
    let first = run(&parse(&args)).unwrap();
    let text = std::fs::read_to_string(&first.files[0]).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 10);
    let mu: f64 = rows[0].split(',').nth(2).unwrap().parse().unwrap();
    assert!((mu - 0.95).abs() < 1e-10);
    assert!(text.starts_with("# zswkb wkb config="));
    run(&parse(&args)).unwrap();
    assert_eq!(std::fs::read_to_string(&first.files[0]).unwrap(), text);
    let _ = std::fs::remove_dir_all(out);
}

#[test]
fn validate_passes_on_sech() {
    let out = scratch("validate");
    let sech = configs().join("sech.toml");
    let o = run(&parse(&["validate", "--potential", sech.to_str().unwrap(), "--hbar", "0.2", "--out", out.to_str().unwrap()]))
        .unwrap();
    assert!(o.passed, "{}", o.summary);
    assert!(o.summary.contains("quantization residual"));
    let _ = std::fs::remove_dir_all(out);
}

#[test]
fn parallel_map_keeps_order() {
    let v: Vec<usize> = (0..17).collect();
    assert_eq!(parallel_map(&v, 4, |x| x * x), v.iter().map(|x| x * x).collect::<Vec<_>>());
    assert!(parallel_map(&Vec::<usize>::new(), 3, |x| *x).is_empty());
}
