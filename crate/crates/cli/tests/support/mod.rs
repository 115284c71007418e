//! Fixture writers shared by the CLI integration tests and the acceptance suite.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};

pub type Weights = Vec<Vec<f64>>;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn toy() -> (PathBuf, PathBuf) {
    (fixture("toy_flows.csv"), fixture("toy_gdp.csv"))
}

/// Core-periphery graph: a fully connected core of `hubs` nodes, core-periphery
/// links with probability `p_hl` and weight scale `s_hl`, sparse periphery
/// links with probability `p_ll`.
pub fn core_periphery(seed: u64, n: usize, hubs: usize, p_hl: f64, p_ll: f64, s_hl: f64) -> Weights {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let (p, s) = if j < hubs {
                (1.0, 1.0)
            } else if i < hubs {
                (p_hl, s_hl)
            } else {
                (p_ll, 1.0)
            };
            if rng.random::<f64>() < p {
                let x = s * rng.random_range(0.05..1.0);
                w[i][j] = x;
                w[j][i] = x;
            }
        }
    }
    w
}

/// Three yearly core-periphery graphs tuned so that the period-mean
/// r(ND, ANND) is about −0.9 and r(NS, ANNS) about −0.3.
pub fn disassortative_family() -> BTreeMap<i32, Weights> {
    (0..3)
        .map(|y| (2000 + y as i32, core_periphery(71_990 + y, 30, 5, 0.9, 0.14, 0.05)))
        .collect()
}

fn code(i: usize) -> String {
    format!("C{i:03}")
}

/// Writes symmetric weights as a flow file (both directions, value = 1000·w).
pub fn write_weight_flows(path: &Path, years: &BTreeMap<i32, Weights>) {
    let mut s = String::from("year,exporter,importer,value\n");
    for (year, w) in years {
        for (i, row) in w.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if x > 0.0 {
                    writeln!(s, "{year},{},{},{}", code(i), code(j), 1000.0 * x).unwrap();
                }
            }
        }
    }
    fs::write(path, s).unwrap();
}

/// Random directed panel with log-normal flows and GDPs; every country has
/// at least one partner in every year.
pub fn write_random_panel(dir: &Path, seed: u64, n: usize, years: std::ops::RangeInclusive<i32>, p: f64) -> (PathBuf, PathBuf) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flow_dist = LogNormal::new(3.0, 1.5).unwrap();
    let gdp_dist = LogNormal::new(8.0, 1.0).unwrap();
    let mut flows = String::from("year,exporter,importer,value\n");
    let mut gdp = String::from("year,country,gdp\n");
    for year in years {
        for i in 0..n {
            writeln!(gdp, "{year},{},{}", code(i), gdp_dist.sample(&mut rng)).unwrap();
            for j in 0..n {
                let ring = j == (i + 1) % n;
                if i != j && (ring || rng.random::<f64>() < p) {
                    writeln!(flows, "{year},{},{},{}", code(i), code(j), flow_dist.sample(&mut rng)).unwrap();
                }
            }
        }
    }
    let (f, g) = (dir.join("flows.csv"), dir.join("gdp.csv"));
    fs::write(&f, flows).unwrap();
    fs::write(&g, gdp).unwrap();
    (f, g)
}

/// Every file under `root` with its contents, keyed by relative path.
pub fn snapshot(root: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(base: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(base, &path, out);
            } else {
                let rel = path.strip_prefix(base).unwrap().to_string_lossy().replace('\\', "/");
                out.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}
