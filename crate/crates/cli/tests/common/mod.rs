#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tensor_woodbury::io::{read_tensor, write_tensor};
use tensor_woodbury::EinsteinTensor;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn tsmw(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tsmw"));
    for a in args {
        cmd.arg(a);
    }
    cmd.output().expect("tsmw runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

pub fn read(path: impl AsRef<Path>) -> EinsteinTensor {
    read_tensor(path).unwrap()
}

pub fn write(dir: &Path, name: &str, t: &EinsteinTensor) -> PathBuf {
    let p = dir.join(name);
    write_tensor(&p, t).unwrap();
    p
}

/// Entries rounded to 12 decimals relative to the largest magnitude, with
/// negative zero folded into zero.
pub fn canonical(t: &EinsteinTensor) -> Vec<String> {
    let scale = t
        .entries()
        .iter()
        .map(|z| z.re.abs().max(z.im.abs()))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let fmt = |x: f64| {
        let q = (x / scale * 1e12).round();
        format!("{}", if q == 0.0 { 0.0 } else { q })
    };
    let mut out = vec![format!("{} {scale:.11e}", t.shape())];
    out.extend(
        t.entries()
            .iter()
            .map(|z| format!("{} {}", fmt(z.re), fmt(z.im))),
    );
    out
}

pub fn max_diff(a: &EinsteinTensor, b: &EinsteinTensor) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}
