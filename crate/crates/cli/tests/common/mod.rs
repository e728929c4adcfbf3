//! Example inputs for the `ttstar` binary, three exit-code classes per command.
#![allow(dead_code)]

use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;
use ttstar_core::{d_matrix, model_b_normalization, su11_element, CMatrix64, Complex64, PlaneGrid};

pub const BIN: &str = env!("CARGO_BIN_EXE_ttstar");

pub struct Run {
    pub code: i32,
    pub out: PathBuf,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn read(&self, name: &str) -> String {
        fs::read_to_string(self.out.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
    }

    /// Data rows of an output CSV, comment lines and header dropped.
    pub fn rows(&self, name: &str) -> Vec<Vec<String>> {
        self.read(name)
            .lines()
            .filter(|l| !l.starts_with('#'))
            .skip(1)
            .map(|l| l.split(',').map(str::to_string).collect())
            .collect()
    }
}

/// A config file plus input tables in a scratch directory.
pub struct Case {
    pub dir: TempDir,
    pub command: &'static str,
    pub args: Vec<String>,
}

impl Case {
    pub fn new(command: &'static str, config: &str) -> Self {
        let case = Self {
            dir: tempfile::tempdir().unwrap(),
            command,
            args: Vec::new(),
        };
        case.file("config.toml", config);
        case
    }

    pub fn file(&self, name: &str, contents: &str) -> &Self {
        fs::write(self.dir.path().join(name), contents).unwrap();
        self
    }

    pub fn arg(mut self, a: &str) -> Self {
        self.args.push(a.to_string());
        self
    }

    pub fn path(&self) -> &Path {
        self.dir.path()
    }

    pub fn run(&self, out: &str) -> Run {
        let out = self.dir.path().join(out);
        let o = Command::new(BIN)
            .arg(self.command)
            .arg("--config")
            .arg(self.dir.path().join("config.toml"))
            .arg("--out")
            .arg(&out)
            .args(&self.args)
            .env("TTSTAR_THREADS", "2")
            .output()
            .unwrap();
        Run {
            code: o.status.code().expect("exited normally"),
            out,
            stdout: String::from_utf8_lossy(&o.stdout).into_owned(),
            stderr: String::from_utf8_lossy(&o.stderr).into_owned(),
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// `i,j,m,...` table of `R x R` symbols over `plane`.
pub fn symbol_table(plane: PlaneGrid<f64>, m: usize, f: impl Fn(f64, f64, f64) -> CMatrix64) -> String {
    let r = f(plane.origin.0, plane.origin.1, 0.0).rows();
    let mut s = String::from("i,j,m");
    for a in 0..r {
        for b in 0..r {
            s += &format!(",g{a}{b}_re,g{a}{b}_im");
        }
    }
    s.push('\n');
    for i in 0..plane.n1 {
        for j in 0..plane.n2 {
            let (t1, t2) = plane.point(i, j);
            for k in 0..m {
                s += &format!("{i},{j},{k}");
                for z in f(t1, t2, k as f64 / m as f64).as_slice() {
                    s += &format!(",{},{}", num(z.re), num(z.im));
                }
                s.push('\n');
            }
        }
    }
    s
}

/// `e^{iφ}/|t|` scaled by `scale` in `|f|`.
pub fn model_a_symbol(t1: f64, t2: f64, phi: f64, scale: f64) -> CMatrix64 {
    CMatrix64::from_diag(&[Complex64::from_polar(scale / t1.hypot(t2), phi)])
}

/// `D (|κ| ĝ) D` with `ĝ ∈ SU(1,1)` real for model B at coupling `t`.
pub fn model_b_symbol(t: Complex64, gamma: f64, th: f64) -> CMatrix64 {
    let (c, s) = ((TAU * th).cos(), (TAU * th).sin());
    let d = d_matrix(gamma);
    let g = su11_element(0.4 + 0.2 * c, 1.1 - 0.3 * c, 0.8 * s).scale_real(model_b_normalization(t, gamma));
    &(&d * &g) * &d
}

/// Smooth non-diagonal SU(1,1) field in the Laplace frame `x = 2t`.
pub fn su11_test_field(x1: f64, _x2: f64, th: f64) -> CMatrix64 {
    let (c, s) = ((TAU * th).cos(), (TAU * th).sin());
    su11_element(0.4 + 0.2 * x1 + 0.1 * c, 0.5 * x1 + 0.2 * c, 0.3 * s)
}

pub fn boundary_table(angles: usize, m: usize, f: impl Fn(f64, f64) -> f64) -> String {
    let mut s = String::from("a,m,value\n");
    for a in 0..angles {
        for k in 0..m {
            s += &format!(
                "{a},{k},{}\n",
                num(f(TAU * a as f64 / angles as f64, k as f64 / m as f64))
            );
        }
    }
    s
}

pub const VERIFY_CONFIG: &str = r#"
model = "model_a"
truncation = 8
theta_samples = 64

[plane]
origin = [1.9999, 0.9999]
spacing = 1e-4
n1 = 3
n2 = 3

[inputs]
symbols = "symbols.csv"
"#;

pub fn verify_plane() -> PlaneGrid<f64> {
    PlaneGrid::new((1.9999, 0.9999), 1e-4, 3, 3).unwrap()
}

/// Model A symbols `e^{iφ}/|t|` over the verify plane.
pub fn verify_symbols(scale: f64, phi: impl Fn(f64, f64, f64) -> f64) -> String {
    symbol_table(verify_plane(), 64, |t1, t2, th| {
        model_a_symbol(t1, t2, phi(t1, t2, th), scale)
    })
}

/// `ε e^{2π x₁} cos 2πθ` with `x = 2t`, an exact solution of the reduced equation.
pub fn harmonic_phase(t1: f64, _t2: f64, th: f64) -> f64 {
    0.3 * (TAU * 2.0 * (t1 - 2.0)).exp() * (TAU * th).cos()
}

fn flat(_: f64, _: f64, _: f64) -> f64 {
    0.0
}

fn reduce_config(model: &str) -> String {
    format!("{model}\nt = [1.0, 0.5]\ntruncation = 8\ntheta_samples = 64\n\n[inputs]\nsymbols = \"symbols.csv\"\n")
}

fn reduce_symbols(scale: f64) -> String {
    let t = Complex64::new(1.0, 0.5);
    let single = PlaneGrid::new((1.0, 0.5), 1.0, 3, 3).unwrap();
    let table = symbol_table(single, 64, |_, _, th| model_b_symbol(t, 0.7, th).scale_real(scale));
    // keep only node (0, 0)
    table
        .lines()
        .filter(|l| l.starts_with('i') || l.starts_with("0,0,"))
        .map(|l| format!("{l}\n"))
        .collect()
}

const MODES_CONFIG: &str = r#"
model = "model_a"
theta_samples = 8

[modes]
r0 = 0.5
r1 = 2.0
radial_nodes = 61
grid_spacing = 0.05
grid_nodes = 81

[tolerances]
laplace = 0.5

[inputs]
boundary = "boundary.csv"
"#;

fn modes_boundary() -> String {
    boundary_table(16, 8, |vt, th| {
        0.7 + 0.4 * (TAU * th).cos() + 0.1 * (TAU * th + 2.0 * vt).sin()
    })
}

pub fn pcf_config(model: &str) -> String {
    format!(
        "{model}\ntheta_samples = 32\n\n[plane]\norigin = [0.05, -0.05]\nspacing = 0.025\nn1 = 5\nn2 = 5\n\n[inputs]\nfield = \"field.csv\"\n"
    )
}

pub fn pcf_field(f: impl Fn(f64, f64, f64) -> CMatrix64) -> String {
    // the table lives on the coupling plane; the field is a function of x = 2t
    let plane = PlaneGrid::new((0.05, -0.05), 0.025, 5, 5).unwrap();
    symbol_table(plane, 32, |t1, t2, th| f(2.0 * t1, 2.0 * t2, th))
}

/// `(label, expected exit code, case)` for each command.
pub fn examples(command: &str) -> Vec<(&'static str, i32, Case)> {
    match command {
        "ring" => vec![
            ("model_a", 0, Case::new("ring", "model = \"model_a\"\ntruncation = 2\n")),
            (
                "custom without exponentials",
                2,
                Case::new("ring", "model = \"custom\"\n\n[custom]\nexp_terms = []\n"),
            ),
            ("model_b c = 1", 3, Case::new("ring", "model = \"model_b\"\nc = 1.0\n")),
        ],
        "verify" => {
            let pass = Case::new("verify", VERIFY_CONFIG);
            pass.file("symbols.csv", &verify_symbols(1.0, flat));
            let bumped = Case::new("verify", VERIFY_CONFIG).arg("--tol").arg("1e-6");
            bumped.file("symbols.csv", &verify_symbols(1.0 + 1e-3, flat));
            let short = Case::new(
                "verify",
                &VERIFY_CONFIG.replace("theta_samples = 64", "theta_samples = 32"),
            );
            short.file("symbols.csv", &verify_symbols(1.0, flat));
            vec![
                ("phase 0", 0, pass),
                ("|f| off by 1e-3", 1, bumped),
                ("theta_samples mismatch", 2, short),
            ]
        }
        "reduce" => {
            let b = "model = \"model_b\"\ngamma = 0.7";
            let pass = Case::new("reduce", &reduce_config(b));
            pass.file("symbols.csv", &reduce_symbols(1.0));
            let bumped = Case::new("reduce", &reduce_config(b));
            bumped.file("symbols.csv", &reduce_symbols(1.0 + 1e-3));
            let wrong = Case::new("reduce", &reduce_config("model = \"model_a\""));
            wrong.file("symbols.csv", &reduce_symbols(1.0));
            vec![
                ("model_b family", 0, pass),
                ("scaled off SU(1,1)", 1, bumped),
                ("chain count mismatch", 2, wrong),
            ]
        }
        "solve-modes" => {
            let pass = Case::new("solve-modes", MODES_CONFIG);
            pass.file("boundary.csv", &modes_boundary());
            let strict = Case::new("solve-modes", MODES_CONFIG).arg("--tol").arg("1e-9");
            strict.file("boundary.csv", &modes_boundary());
            let empty = Case::new("solve-modes", MODES_CONFIG);
            empty.file("boundary.csv", "a,m,value\n");
            vec![
                ("smooth boundary", 0, pass),
                ("laplace gate 1e-9", 1, strict),
                ("empty boundary", 2, empty),
            ]
        }
        "pcf-check" => {
            let b = "model = \"model_b\"\ngamma = 0.5";
            let pass = Case::new("pcf-check", &pcf_config(b));
            pass.file("field.csv", &pcf_field(|_, _, _| CMatrix64::identity(2)));
            let rough = Case::new("pcf-check", &pcf_config(b));
            rough.file("field.csv", &pcf_field(su11_test_field));
            let degenerate = Case::new("pcf-check", &pcf_config("model = \"model_b\"\nc = 1.0"));
            degenerate.file("field.csv", &pcf_field(|_, _, _| CMatrix64::identity(2)));
            vec![
                ("identity field", 0, pass),
                ("non-solution", 1, rough),
                ("c = 1", 3, degenerate),
            ]
        }
        other => panic!("no examples for {other}"),
    }
}

pub const COMMANDS: [&str; 5] = ["ring", "verify", "reduce", "solve-modes", "pcf-check"];
