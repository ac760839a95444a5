//! The `fixtures emit` subcommand: canonical coefficient files in the wire
//! format the library and the hartree config share.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use dispersia_core::field::FourierState;
use dispersia_core::lattice::enumerate_shell;
use dispersia_core::Complex64;

/// Name and contents of every canonical fixture, in emission order.
pub fn fixtures() -> Vec<(&'static str, String)> {
    let mut single = FourierState::new(1).unwrap();
    single.set(vec![3], Complex64::new(1.0, 0.0)).unwrap();

    let mut two_mode = FourierState::new(1).unwrap();
    two_mode.set(vec![0], Complex64::new(1.0, 0.0)).unwrap();
    two_mode.set(vec![1], Complex64::new(1.0, 0.0)).unwrap();

    // cos(2 pi x): a conjugate-symmetric kernel usable as an explicit
    // potential.
    let mut cosine = FourierState::new(1).unwrap();
    cosine.set(vec![1], Complex64::new(0.5, 0.0)).unwrap();
    cosine.set(vec![-1], Complex64::new(0.5, 0.0)).unwrap();

    let mut shell = FourierState::new(2).unwrap();
    for k in enumerate_shell(2, 5).unwrap().points() {
        shell.set(k.clone(), Complex64::new(1.0, 0.0)).unwrap();
    }

    vec![
        ("single_mode_1d.json", single.to_fixture_json()),
        ("two_mode_1d.json", two_mode.to_fixture_json()),
        ("kernel_cos_1d.json", cosine.to_fixture_json()),
        ("shell_radius5_2d.json", shell.to_fixture_json()),
    ]
}

pub fn emit(dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, contents) in fixtures() {
        let path = dir.join(name);
        fs::write(&path, contents + "\n")?;
        written.push(path);
    }
    Ok(written)
}
