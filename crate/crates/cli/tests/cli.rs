use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn kitten(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kitten"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn table(csv: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

fn stdout_table(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    assert_eq!(code(out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    table(&String::from_utf8(out.stdout.clone()).unwrap())
}

fn field(out: &Output, name: &str) -> f64 {
    let (h, rows) = stdout_table(out);
    let i = h
        .iter()
        .position(|c| c == name)
        .unwrap_or_else(|| panic!("no column {name} in {h:?}"));
    rows[0][i].parse().unwrap()
}

#[test]
fn ideal_kitten_at_the_matched_lo() {
    let out = kitten(&["negativity", "--k", "1"]);
    assert!((field(&out, "negativity") - 0.213_06).abs() < 5e-4);
    assert!((field(&out, "lo_fwhm_nm") - 2f64.sqrt()).abs() < 1e-6);
    let fid = kitten(&["fidelity", "--k", "1"]);
    assert!((field(&fid, "fidelity") - 1.0).abs() < 1e-9);
}

#[test]
fn design_point() {
    let out = kitten(&["design", "--k", "9", "--target-f", "0.95"]);
    let filter = field(&out, "filter_fwhm_nm");
    let lo = field(&out, "lo_fwhm_nm");
    assert!((filter - 1.15).abs() <= 0.15, "{filter}");
    assert!((lo - 2.15).abs() <= 0.25, "{lo}");
    assert!(field(&out, "fidelity") >= 0.95);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&kitten(&["negativity", "--filter", "rect"])), 2);
    assert_eq!(code(&kitten(&["negativity", "--rs2", "0.3"])), 2);
    assert_eq!(code(&kitten(&["negativity", "--filter", "triangle"])), 2);
    assert_eq!(code(&kitten(&["negativity", "--k", "0.5"])), 2);
    assert_eq!(code(&kitten(&["negativity", "--grid-points", "301"])), 3);
    assert_eq!(
        code(&kitten(&["negativity", "--k", "1", "--lo-fwhm-nm", "0.05"])),
        3
    );
    let unreachable = kitten(&["design", "--k", "9", "--target-f", "0.99999"]);
    assert_eq!(code(&unreachable), 4);
    assert!(String::from_utf8_lossy(&unreachable.stderr).contains("unreachable"));
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        "k = 1.0\nfilter = \"rect\"\nfilter_fwhm_nm = 2.0\nlo_fwhm_nm = 1.5\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let (h, rows) = stdout_table(&kitten(&["negativity", "--config", c]));
    let col = |name: &str| h.iter().position(|x| x == name).unwrap();
    assert_eq!(rows[0][col("k")], "1");
    assert_eq!(rows[0][col("filter")], "rect");
    assert_eq!(rows[0][col("filter_fwhm_nm")], "2");
    assert_eq!(rows[0][col("lo_fwhm_nm")], "1.5");
    let (_, rows) = stdout_table(&kitten(&[
        "negativity",
        "--config",
        c,
        "--k",
        "3",
        "--filter",
        "gauss",
    ]));
    assert_eq!(rows[0][col("k")], "3");
    assert_eq!(rows[0][col("filter")], "gauss");

    fs::write(&cfg, "k = 1.0\nunknown_key = 3\n").unwrap();
    assert_eq!(code(&kitten(&["negativity", "--config", c])), 2);
    assert_eq!(
        code(&kitten(&[
            "negativity",
            "--config",
            "/nonexistent/run.toml"
        ])),
        2
    );
}

#[test]
fn sweep_writes_deterministic_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let csv = dir.path().join(format!("{name}.csv"));
        let svg = dir.path().join(format!("{name}.svg"));
        let out = kitten(&[
            "sweep",
            "--k-values",
            "1,2,4",
            "--lo-min-nm",
            "1",
            "--lo-max-nm",
            "5",
            "--lo-points",
            "9",
            "--filter",
            "rect",
            "--filter-fwhm-nm",
            "2",
            "--out",
            csv.to_str().unwrap(),
            "--plot",
            svg.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
        (fs::read(csv).unwrap(), fs::read_to_string(svg).unwrap())
    };
    let (a, svg) = run("a");
    let (b, _) = run("b");
    assert_eq!(a, b);
    let (h, rows) = table(std::str::from_utf8(&a).unwrap());
    assert_eq!(
        h,
        [
            "k",
            "lo_fwhm_nm",
            "negativity",
            "success_probability",
            "error"
        ]
    );
    assert_eq!(rows.len(), 27);
    assert_eq!(rows[0][..2], ["1", "1"]);
    assert_eq!(rows[26][..2], ["4", "5"]);
    assert!(svg.starts_with("<svg") && svg.contains("</svg>"));
}

#[test]
fn basis_dump_has_all_families() {
    let out = kitten(&[
        "basis",
        "--k",
        "4",
        "--filter",
        "rect",
        "--filter-fwhm-nm",
        "5",
        "--count",
        "3",
    ]);
    let (h, rows) = stdout_table(&out);
    assert_eq!(
        h,
        [
            "detuning_rad_per_s",
            "psi_0",
            "psi_1",
            "psi_2",
            "par_0",
            "par_1",
            "par_2",
            "perp_0",
            "perp_1",
            "perp_2"
        ]
    );
    assert_eq!(rows.len(), 4097);
    // ψ⊥ vanishes at the centre of the passband
    let mid = &rows[2048];
    assert_eq!(mid[0].parse::<f64>().unwrap(), 0.0);
    assert_eq!(mid[7].parse::<f64>().unwrap(), 0.0);
    let (h, _) = stdout_table(&kitten(&["basis", "--count", "2"]));
    assert_eq!(
        h,
        ["detuning_rad_per_s", "psi_0", "psi_1", "par_0", "par_1"]
    );
}

#[test]
fn gamma_matrix_is_square_and_symmetric() {
    let out = kitten(&[
        "gamma",
        "--modes",
        "10",
        "--filter",
        "gauss",
        "--filter-fwhm-nm",
        "2",
    ]);
    let (h, rows) = stdout_table(&out);
    assert_eq!(h.len(), 11);
    assert_eq!(rows.len(), 10);
    for k in 0..10 {
        for j in 0..10 {
            assert_eq!(rows[k][j + 1], rows[j][k + 1]);
        }
        let d: f64 = rows[k][k + 1].parse().unwrap();
        assert!(d > 0.0 && d <= 1.0);
    }
}

#[test]
fn wigner_grid_is_normalized_and_negative() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("w.csv");
    let svg = dir.path().join("w.svg");
    let out = kitten(&[
        "wigner",
        "--k",
        "1",
        "--phase-points",
        "101",
        "--out",
        csv.to_str().unwrap(),
        "--plot",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&csv).unwrap();
    let (h, rows) = table(&text);
    assert_eq!(h, ["x", "y", "w"]);
    assert_eq!(rows.len(), 101 * 101);
    let xs: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    let step = xs[101] - xs[0];
    let w: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    let total: f64 = w.iter().sum::<f64>() * step * step;
    assert!((total - 1.0).abs() < 1e-4, "{total}");
    assert!(w.iter().cloned().fold(f64::INFINITY, f64::min) < 0.0);
    assert!(Path::new(&svg).exists());
}

#[test]
fn optimizer_and_purity() {
    let out = kitten(&["optimize-lo", "--k", "1"]);
    assert!((field(&out, "lo_fwhm_nm") - 2f64.sqrt()).abs() < 0.02);
    let fid = kitten(&[
        "optimize-lo",
        "--k",
        "9",
        "--objective",
        "fidelity",
        "--filter",
        "rect",
        "--filter-fwhm-nm",
        "1",
    ]);
    assert!(field(&fid, "fidelity") > 0.95);
    let narrow = kitten(&[
        "purity",
        "--k",
        "9",
        "--filter",
        "rect",
        "--filter-fwhm-nm",
        "0.05",
    ]);
    assert!(field(&narrow, "purity") > 0.99);
    let open = kitten(&["purity", "--k", "9"]);
    assert!((field(&open, "purity") - 1.0 / 9.0).abs() < 1e-6);
}

#[test]
fn commands_without_figures_warn_on_plot() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("p.svg");
    let out = kitten(&["purity", "--plot", svg.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--plot ignored"));
    assert!(!svg.exists());
}

#[test]
fn committed_configs_reproduce_expected_tables() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let dir = tempfile::tempdir().unwrap();
    let mut checked = 0;
    for entry in fs::read_dir(&root).unwrap() {
        let cfg = entry.unwrap().path();
        if cfg.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        let name = cfg.file_stem().unwrap().to_str().unwrap().to_string();
        let sub = if name.starts_with("design") {
            "design"
        } else {
            "sweep"
        };
        let out_path = dir.path().join(format!("{name}.csv"));
        let out = kitten(&[
            sub,
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(
            code(&out),
            0,
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let expected =
            fs::read_to_string(root.join("expected").join(format!("{name}.csv"))).unwrap();
        let (eh, erows) = table(&expected);
        let (h, rows) = table(&fs::read_to_string(&out_path).unwrap());
        assert_eq!(h, eh, "{name}");
        assert_eq!(rows.len(), erows.len(), "{name}");
        for (r, e) in rows.iter().zip(&erows) {
            for (a, b) in r.iter().zip(e) {
                match (a.parse::<f64>(), b.parse::<f64>()) {
                    (Ok(x), Ok(y)) => assert!(
                        (x - y).abs() <= 1e-9 * (1.0 + y.abs()),
                        "{name}: {x} vs {y}"
                    ),
                    _ => assert_eq!(a, b, "{name}"),
                }
            }
        }
        checked += 1;
    }
    assert_eq!(checked, 6);
}
