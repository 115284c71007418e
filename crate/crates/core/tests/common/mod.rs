//! Brute-force reference implementations used as test oracles.
//!
//! Everything here walks neighbour lists and triangles explicitly and never
//! touches the matrix code in the library.

#![allow(dead_code)]

use rand::Rng;

/// Symmetric weight matrix as nested vectors; zero means "no link".
pub type Weights = Vec<Vec<f64>>;

pub fn neighbours(w: &Weights, i: usize) -> Vec<usize> {
    (0..w.len()).filter(|&j| j != i && w[i][j] > 0.0).collect()
}

pub fn degree(w: &Weights) -> Vec<usize> {
    (0..w.len()).map(|i| neighbours(w, i).len()).collect()
}

pub fn strength(w: &Weights) -> Vec<f64> {
    (0..w.len())
        .map(|i| neighbours(w, i).iter().map(|&j| w[i][j]).sum())
        .collect()
}

pub fn annd(w: &Weights) -> Vec<Option<f64>> {
    let nd = degree(w);
    (0..w.len())
        .map(|i| {
            let nb = neighbours(w, i);
            (!nb.is_empty()).then(|| nb.iter().map(|&j| nd[j] as f64).sum::<f64>() / nb.len() as f64)
        })
        .collect()
}

pub fn anns(w: &Weights) -> Vec<Option<f64>> {
    let ns = strength(w);
    (0..w.len())
        .map(|i| {
            let nb = neighbours(w, i);
            (!nb.is_empty()).then(|| nb.iter().map(|&j| ns[j]).sum::<f64>() / nb.len() as f64)
        })
        .collect()
}

/// Linked neighbour pairs over all neighbour pairs, by exhaustive triple loop.
pub fn bcc(w: &Weights) -> Vec<Option<f64>> {
    let n = w.len();
    (0..n)
        .map(|i| {
            let nb = neighbours(w, i);
            let k = nb.len();
            if k < 2 {
                return None;
            }
            let mut closed = 0usize;
            for a in 0..n {
                for b in (a + 1)..n {
                    if a != i && b != i && w[i][a] > 0.0 && w[i][b] > 0.0 && w[a][b] > 0.0 {
                        closed += 1;
                    }
                }
            }
            Some(closed as f64 / (k * (k - 1) / 2) as f64)
        })
        .collect()
}

/// `Σ_{j,k} (w_ij w_jk w_ki)^{1/3} / (ND_i (ND_i − 1))` over ordered pairs.
pub fn wcc(w: &Weights) -> Vec<Option<f64>> {
    let n = w.len();
    let nd = degree(w);
    (0..n)
        .map(|i| {
            if nd[i] < 2 {
                return None;
            }
            let mut total = 0.0;
            for j in 0..n {
                for k in 0..n {
                    if j != i && k != i && j != k {
                        total += (w[i][j] * w[j][k] * w[k][i]).cbrt();
                    }
                }
            }
            Some(total / (nd[i] * (nd[i] - 1)) as f64)
        })
        .collect()
}

/// Random symmetric graph: each pair linked with probability `p`, weight
/// uniform in (0, 1] (or exactly 1 when `binary`).
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64, binary: bool) -> Weights {
    let mut w = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                let v = if binary { 1.0 } else { 1.0 - rng.random::<f64>() };
                w[i][j] = v;
                w[j][i] = v;
            }
        }
    }
    w
}

pub fn close(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => (x - y).abs() <= tol,
        _ => false,
    }
}

/// Two-pass Pearson correlation by direct summation.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx.sqrt() * vy.sqrt())
}
