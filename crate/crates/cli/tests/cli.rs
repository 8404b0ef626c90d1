use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn hyperam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperam"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_config(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        cmd,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    hyperam(&args)
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("test.conf");
    fs::write(&path, text).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn example_presets_reproduce_the_stated_graphs() {
    let out = tempfile::tempdir().unwrap();
    let expect = [
        ("example1", "fixed points [4, 5, 13], spurious []"),
        ("example2", "fixed points [1, 4, 5, 13], spurious [1]"),
        ("example3", "sync cycles [[5, 13]]"),
    ];
    for (preset, needle) in expect {
        let o = run_config(
            "dynamics",
            &configs().join(format!("{preset}.conf")),
            out.path(),
            &[],
        );
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        for reading in ["text", "caption"] {
            let line = text
                .lines()
                .find(|l| l.starts_with(&format!("{preset}_{reading}:")))
                .unwrap();
            assert!(line.contains(needle), "{line}");
        }
    }
    let dot = fs::read_to_string(out.path().join("example1_text_sync.dot")).unwrap();
    assert!(dot.contains("digraph sync {"));
    assert_eq!(dot.matches("fillcolor=gray").count(), 3);
    assert!(dot.contains("// preset = example1"));
    let csv = fs::read_to_string(out.path().join("example2_caption_attractors.csv")).unwrap();
    assert_eq!(
        csv.lines().next(),
        Some("state_index,kind,attractor_id,basin_size")
    );
    assert_eq!(csv.lines().count(), 17);
}

#[test]
fn custom_memories_match_the_complex_preset() {
    let out = tempfile::tempdir().unwrap();
    let o = run_config(
        "dynamics",
        &configs().join("custom_complex.conf"),
        out.path(),
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let custom = fs::read_to_string(out.path().join("custom_complex_sync.dot")).unwrap();
    run_config(
        "dynamics",
        &configs().join("example2.conf"),
        out.path(),
        &[],
    );
    let preset = fs::read_to_string(out.path().join("example2_text_sync.dot")).unwrap();
    let body = |s: &str| {
        s.lines()
            .filter(|l| !l.starts_with("//"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(body(&custom), body(&preset));
}

#[test]
fn energy_trace_is_deterministic_and_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[experiment]\nkind = energy_trace\npreset = quaternion\nseed = 3\nseeds = 2\n[network]\nn = 40\np = 30\n",
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let oa = run_config("energy-trace", &cfg, &a, &[]);
    let ob = run_config("energy-trace", &cfg, &b, &[]);
    assert_eq!(oa.status.code(), Some(0), "{}", stdout(&oa));
    assert_eq!(ob.status.code(), Some(0));
    for file in [
        "quaternion_seed3.csv",
        "quaternion_seed4.csv",
        "quaternion_summary.csv",
    ] {
        let x = fs::read_to_string(a.join(file)).unwrap();
        assert_eq!(x, fs::read_to_string(b.join(file)).unwrap(), "{file}");
    }
    let trace = fs::read_to_string(a.join("quaternion_seed3.csv")).unwrap();
    assert_eq!(trace.lines().next(), Some("time,energy,mode"));
    for mode in ["sync", "async"] {
        let e: Vec<f64> = trace
            .lines()
            .skip(1)
            .filter(|l| l.split(',').nth(2) == Some(mode))
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        assert!(e.len() >= 2);
        assert!(e.windows(2).all(|w| w[1] < w[0] + 1e-10), "{mode}: {e:?}");
    }
    let meta = fs::read_to_string(a.join("quaternion.meta.txt")).unwrap();
    assert!(meta.contains("seed = 3"));
    assert!(meta.contains("activation = twin_multistate(K=16)"));
    assert!(meta.contains("preset = quaternion"));

    let other = run_config("energy-trace", &cfg, &b, &["--seed", "9"]);
    assert_eq!(other.status.code(), Some(0));
    assert!(b.join("quaternion_seed9.csv").exists());
}

#[test]
fn hyperbolic_energy_preset_is_not_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[experiment]\npreset = hyperbolic\nseeds = 2\n[network]\nn = 60\np = 80\nmax_sweeps = 50\n",
    );
    let o = run_config("energy-trace", &cfg, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    let summary = fs::read_to_string(dir.path().join("hyperbolic_summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 5);
}

#[test]
fn image_recall_without_noise_always_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[experiment]\nname = r\n[image]\ncount = 4\nwidth = 8\nheight = 8\ncodecs = all\nnoise = 0, 40\ntrials = 3\n",
    );
    let o = run_config("image-recall", &cfg, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 4 * 2 * 2);
    for row in rows.iter().filter(|r| r.split(',').nth(2) == Some("0")) {
        assert!(row.ends_with(",3,3,1"), "{row}");
    }
}

#[test]
fn image_recall_reads_a_pgm_directory() {
    let dir = tempfile::tempdir().unwrap();
    let images = dir.path().join("images");
    fs::create_dir(&images).unwrap();
    for (k, img) in hyperam_core::imaging::synthetic_images(3, 6, 5, 11)
        .unwrap()
        .iter()
        .enumerate()
    {
        img.write_pgm(images.join(format!("{k}.pgm"))).unwrap();
    }
    let cfg = write_config(
        dir.path(),
        &format!(
            "[experiment]\nname = d\n[image]\nsource = directory\ndir = {}\ncodecs = quaternion_twin\nnoise = 0\ntrials = 2\nmodes = async\n",
            images.display()
        ),
    );
    let o = run_config("image-recall", &cfg, dir.path(), &[]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("d.csv")).unwrap();
    assert_eq!(csv.lines().nth(1), Some("quaternion_twin,async,0,2,2,1"));
    let meta = fs::read_to_string(dir.path().join("d.meta.txt")).unwrap();
    assert!(meta.contains("images = 3"));
}

#[test]
fn verify_default_suite_and_selection() {
    let out = tempfile::tempdir().unwrap();
    let o = run_config("verify", &configs().join("verify.conf"), out.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("XFAIL b_csgn4_hyperbolic"));
    assert!(!text
        .lines()
        .any(|l| l.starts_with("FAIL") || l.starts_with("XPASS")));

    let out_dir = out.path().to_str().unwrap();
    let one = hyperam(&["verify", "--out", out_dir, "--check", "b_split_octonion"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one).lines().count(), 2);

    let xfail = hyperam(&["verify", "--out", out_dir, "--check", "b_csgn4_hyperbolic"]);
    assert_eq!(xfail.status.code(), Some(0));

    let unknown = hyperam(&["verify", "--out", out_dir, "--check", "no_such_check"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn usage_and_config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(hyperam(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hyperam(&["dynamics"]).status.code(), Some(2));
    let missing = hyperam(&["dynamics", "--config", "/nonexistent.conf", "--out", out]);
    assert_eq!(missing.status.code(), Some(2));

    let cfg = write_config(dir.path(), "[experiment]\npreset = example1\nbogus = 1\n");
    let o = run_config("dynamics", &cfg, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");

    let cfg = write_config(dir.path(), "[experiment]\nkind = verify\n");
    assert_eq!(
        run_config("dynamics", &cfg, dir.path(), &[]).status.code(),
        Some(2)
    );
}

#[test]
fn shipped_configs_resolve() {
    for entry in fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let file = hyperam_cli::ConfigFile::read(&path).unwrap();
        let kind = file
            .get("experiment", "kind")
            .unwrap()
            .unwrap()
            .value
            .clone();
        let command = hyperam_cli::Command::parse(&kind).unwrap();
        hyperam_cli::Experiment::resolve(command, &file, None)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}
