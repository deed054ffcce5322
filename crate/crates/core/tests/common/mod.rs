#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gfusion::frame::{FrameKind, GFusionSystem, DEFAULT_CLASS_TOL};
use gfusion::random::{random_system_from, RandomSystemParams, Rng64};
use rand::Rng;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Run the `gff` binary inside `dir`.
pub fn gff(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gff"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("gff runs")
}

/// Random system with dimensions drawn from the stream: ambient `1..=max_dim`,
/// between `n` and `n + 2` components, local dims `1..=3`.
pub fn any_system(rng: &mut Rng64, max_dim: usize) -> GFusionSystem {
    let n = rng.random_range(1..=max_dim);
    let m = rng.random_range(1..=n + 2);
    let dims = (0..m).map(|_| rng.random_range(1..=3)).collect();
    random_system_from(rng, &RandomSystemParams::new(n, m, dims)).unwrap()
}

/// Random frame whose condition number is at most `1 / min_ratio`.
pub fn frame(rng: &mut Rng64, n: usize, min_ratio: f64) -> GFusionSystem {
    loop {
        let m = rng.random_range(n.max(2)..=n + 3);
        let dims = (0..m).map(|_| rng.random_range(1..=3)).collect();
        let sys = random_system_from(rng, &RandomSystemParams::new(n, m, dims)).unwrap();
        let b = sys.optimal_bounds(DEFAULT_CLASS_TOL);
        if b.kind != FrameKind::BesselOnly && b.lower >= min_ratio * b.upper {
            return sys;
        }
    }
}

/// System with the same shape (dimension, count, local dims) as `like`.
pub fn conformable(rng: &mut Rng64, like: &GFusionSystem) -> GFusionSystem {
    random_system_from(
        rng,
        &RandomSystemParams::new(like.ambient_dim(), like.len(), like.local_dims()),
    )
    .unwrap()
}

/// Prints one line per criterion so `--nocapture` gives a summary.
pub fn report(id: u32, title: &str, ok: bool, detail: impl std::fmt::Display) {
    println!(
        "[{}] criterion {id:>2}: {title} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
}
