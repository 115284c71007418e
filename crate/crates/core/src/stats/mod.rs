//! Node-level statistics on an undirected network.
//!
//! All six statistics are written as matrix expressions over the binary
//! adjacency `A` and the normalized weights `W`:
//!
//! | statistic | definition                               |
//! |-----------|------------------------------------------|
//! | ND        | `A_(i) 1`                                |
//! | NS        | `W_(i) 1`                                |
//! | ANND      | `A_(i) A 1 / A_(i) 1`                    |
//! | ANNS      | `A_(i) W 1 / A_(i) 1`                    |
//! | BCC       | `(A³)_ii / (ND_i (ND_i − 1))`            |
//! | WCC       | `((W^[1/3])³)_ii / (ND_i (ND_i − 1))`    |
//!
//! where `W^[1/3]` takes the cube root of every entry. Binary products are
//! carried out in integers so BCC and ANND are exact. ANND/ANNS are
//! undefined at isolated nodes and BCC/WCC at nodes with fewer than two
//! partners; undefined entries are `None` and are never coerced to zero.

mod moments;

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::UndirectedNetwork;
use crate::ingest::{CountryRegistry, Year};
use crate::matrix::SquareMatrix;
use crate::scalar::Scalar;

pub use moments::{moments, MomentSummary, Moments};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("need at least {needed} defined values, got {got}")]
    TooFewValues { needed: usize, got: usize },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistic {
    Nd,
    Ns,
    Annd,
    Anns,
    Bcc,
    Wcc,
}

impl Statistic {
    pub const ALL: [Statistic; 6] = [Self::Nd, Self::Ns, Self::Annd, Self::Anns, Self::Bcc, Self::Wcc];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Nd => "ND",
            Self::Ns => "NS",
            Self::Annd => "ANND",
            Self::Anns => "ANNS",
            Self::Bcc => "BCC",
            Self::Wcc => "WCC",
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Statistic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|st| st.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown statistic `{s}`"))
    }
}

fn binary_u32(net: &UndirectedNetwork<impl Scalar>) -> SquareMatrix<u32> {
    net.adjacency.map(u32::from)
}

fn degrees_from(a: &SquareMatrix<u32>) -> Vec<usize> {
    a.row_sums().into_iter().map(|d| d as usize).collect()
}

/// `ND_i`: number of partners of node `i`.
pub fn node_degree<S: Scalar>(net: &UndirectedNetwork<S>) -> Vec<usize> {
    degrees_from(&binary_u32(net))
}

/// `NS_i`: total link weight of node `i`.
pub fn node_strength<S: Scalar>(net: &UndirectedNetwork<S>) -> Vec<S> {
    net.weights.row_sums()
}

fn annd_with(a: &SquareMatrix<u32>, nd: &[usize]) -> Vec<Option<f64>> {
    let nd_u32: Vec<u32> = nd.iter().map(|&d| d as u32).collect();
    a.mul_vec(&nd_u32)
        .into_iter()
        .zip(nd)
        .map(|(num, &d)| (d > 0).then(|| num as f64 / d as f64))
        .collect()
}

fn convert<S: Scalar>(v: Vec<Option<f64>>) -> Vec<Option<S>> {
    v.into_iter().map(|x| x.map(S::from_f64_lossy)).collect()
}

/// `ANND_i`: mean degree of `i`'s neighbours.
pub fn annd<S: Scalar>(net: &UndirectedNetwork<S>) -> Vec<Option<S>> {
    let a = binary_u32(net);
    let nd = degrees_from(&a);
    convert(annd_with(&a, &nd))
}

fn anns_with<S: Scalar>(net: &UndirectedNetwork<S>, nd: &[usize], ns: &[S]) -> Vec<Option<S>> {
    let a = net.adjacency.map(|x| if x != 0 { S::one() } else { S::zero() });
    a.mul_vec(ns)
        .into_iter()
        .zip(nd)
        .map(|(num, &d)| (d > 0).then(|| num / S::from_count(d)))
        .collect()
}

/// `ANNS_i`: mean strength of `i`'s neighbours.
pub fn anns<S: Scalar>(net: &UndirectedNetwork<S>) -> Vec<Option<S>> {
    let nd = node_degree(net);
    let ns = node_strength(net);
    anns_with(net, &nd, &ns)
}

fn pair_count(d: usize) -> Option<usize> {
    (d >= 2).then(|| d * (d - 1))
}

fn bcc_with(a: &SquareMatrix<u32>, nd: &[usize]) -> Vec<Option<f64>> {
    a.map(u64::from)
        .cube_diagonal()
        .into_iter()
        .zip(nd)
        .map(|(closed, &d)| pair_count(d).map(|p| closed as f64 / p as f64))
        .collect()
}

/// `BCC_i`: fraction of `i`'s neighbour pairs that are themselves linked.
pub fn bcc<S: Scalar>(net: &UndirectedNetwork<S>) -> Vec<Option<S>> {
    let a = binary_u32(net);
    let nd = degrees_from(&a);
    convert(bcc_with(&a, &nd))
}

fn wcc_with<S: Scalar>(net: &UndirectedNetwork<S>, nd: &[usize]) -> Vec<Option<S>> {
    let roots = net.weights.map(S::cbrt);
    roots
        .cube_diagonal()
        .into_iter()
        .zip(nd)
        .map(|(closed, &d)| pair_count(d).map(|p| closed / S::from_count(p)))
        .collect()
}

/// `WCC_i`: sum over ordered neighbour pairs of `(w_ij w_jk w_ki)^(1/3)`,
/// divided by `ND_i (ND_i − 1)`.
pub fn wcc<S: Scalar>(net: &UndirectedNetwork<S>) -> Vec<Option<S>> {
    let nd = node_degree(net);
    wcc_with(net, &nd)
}

/// The six statistics for every node of one year's network.
#[derive(Clone, Debug)]
pub struct NodeStatsTable<S> {
    pub year: Year,
    pub registry: Arc<CountryRegistry>,
    pub nd: Vec<usize>,
    pub ns: Vec<S>,
    pub annd: Vec<Option<S>>,
    pub anns: Vec<Option<S>>,
    pub bcc: Vec<Option<S>>,
    pub wcc: Vec<Option<S>>,
}

pub fn node_stats<S: Scalar>(net: &UndirectedNetwork<S>) -> NodeStatsTable<S> {
    let a = binary_u32(net);
    let nd = degrees_from(&a);
    let ns = node_strength(net);
    NodeStatsTable {
        year: net.year,
        registry: Arc::clone(&net.registry),
        annd: convert(annd_with(&a, &nd)),
        anns: anns_with(net, &nd, &ns),
        bcc: convert(bcc_with(&a, &nd)),
        wcc: wcc_with(net, &nd),
        nd,
        ns,
    }
}

impl<S: Scalar> NodeStatsTable<S> {
    pub fn len(&self) -> usize {
        self.nd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nd.is_empty()
    }

    /// One statistic as a column, with `None` where it is undefined.
    pub fn column(&self, stat: Statistic) -> Vec<Option<S>> {
        match stat {
            Statistic::Nd => self.nd.iter().map(|&d| Some(S::from_count(d))).collect(),
            Statistic::Ns => self.ns.iter().copied().map(Some).collect(),
            Statistic::Annd => self.annd.clone(),
            Statistic::Anns => self.anns.clone(),
            Statistic::Bcc => self.bcc.clone(),
            Statistic::Wcc => self.wcc.clone(),
        }
    }

    pub fn undefined_count(&self, stat: Statistic) -> usize {
        self.column(stat).iter().filter(|v| v.is_none()).count()
    }

    pub fn moment_summary(&self, stat: Statistic) -> Result<MomentSummary<S>, StatsError> {
        Ok(MomentSummary {
            statistic: stat,
            year: self.year,
            moments: moments(&self.column(stat))?,
        })
    }

    /// `country,nd,ns,annd,anns,bcc,wcc`; undefined cells are left empty.
    pub fn write_csv<W: Write>(&self, mut sink: W) -> Result<(), StatsError> {
        fn cell<S: Scalar>(v: Option<S>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        writeln!(sink, "country,nd,ns,annd,anns,bcc,wcc")?;
        for i in 0..self.len() {
            writeln!(
                sink,
                "{},{},{},{},{},{},{}",
                self.registry.code(i),
                self.nd[i],
                self.ns[i],
                cell(self.annd[i]),
                cell(self.anns[i]),
                cell(self.bcc[i]),
                cell(self.wcc[i]),
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn net(n: usize, edges: &[(usize, usize, f64)]) -> UndirectedNetwork<f64> {
        let mut w = SquareMatrix::zeros(n);
        for &(i, j, v) in edges {
            w.set(i, j, v);
            w.set(j, i, v);
        }
        UndirectedNetwork::from_weights(2000, Arc::new(CountryRegistry::numbered(n)), w, 1.0).unwrap()
    }

    fn triangle(w: f64) -> UndirectedNetwork<f64> {
        net(3, &[(0, 1, w), (1, 2, w), (0, 2, w)])
    }

    fn star(k: usize) -> UndirectedNetwork<f64> {
        let edges: Vec<_> = (1..=k).map(|l| (0, l, 1.0)).collect();
        net(k + 1, &edges)
    }

    #[test]
    fn triangle_unit_weights() {
        let t = node_stats(&triangle(1.0));
        assert_eq!(t.nd, vec![2, 2, 2]);
        assert_eq!(t.ns, vec![2.0; 3]);
        assert_eq!(t.annd, vec![Some(2.0); 3]);
        assert_eq!(t.anns, vec![Some(2.0); 3]);
        assert_eq!(t.bcc, vec![Some(1.0); 3]);
        assert_eq!(t.wcc, vec![Some(1.0); 3]);
    }

    #[test]
    fn triangle_eighth_weights() {
        let w = wcc(&triangle(0.125));
        for v in w {
            assert!((v.unwrap() - 0.125).abs() < 1e-15);
        }
    }

    #[test]
    fn star_fixture() {
        let s = star(4);
        assert_eq!(node_degree(&s), vec![4, 1, 1, 1, 1]);
        assert_eq!(node_strength(&s)[0], 4.0);
        let a = annd(&s);
        assert_eq!(a[0], Some(1.0));
        assert!(a[1..].iter().all(|&v| v == Some(4.0)));
        let b = bcc(&s);
        assert_eq!(b[0], Some(0.0));
        assert!(b[1..].iter().all(Option::is_none));
    }

    #[test]
    fn path_middle_has_no_clustering() {
        let p = net(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        assert_eq!(bcc(&p)[1], Some(0.0));
        assert_eq!(wcc(&p)[1], Some(0.0));
    }

    #[test]
    fn isolated_node_is_undefined() {
        let g = net(4, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]);
        let t = node_stats(&g);
        assert_eq!(t.nd[3], 0);
        assert_eq!(t.ns[3], 0.0);
        assert!(t.annd[3].is_none() && t.anns[3].is_none());
        assert!(t.bcc[3].is_none() && t.wcc[3].is_none());
        assert_eq!(t.undefined_count(Statistic::Bcc), 1);
    }

    #[test]
    fn two_node_anns() {
        let g = net(2, &[(0, 1, 1.0)]);
        assert_eq!(anns(&g), vec![Some(1.0), Some(1.0)]);
    }

    #[test]
    fn uniform_weights_scale_strength() {
        let w = 0.3;
        let g = net(5, &[(0, 1, w), (1, 2, w), (2, 3, w), (0, 2, w), (3, 4, w)]);
        let (nd, ns) = (node_degree(&g), node_strength(&g));
        for (d, s) in nd.iter().zip(&ns) {
            assert!((s - w * *d as f64).abs() < 1e-15);
        }
        for (a, b) in anns(&g).iter().zip(annd(&g)) {
            assert!((a.unwrap() - w * b.unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn csv_leaves_undefined_cells_empty() {
        let mut buf = Vec::new();
        node_stats(&star(2)).write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "country,nd,ns,annd,anns,bcc,wcc");
        assert_eq!(lines[1], "000,2,2,1,1,0,0");
        assert_eq!(lines[2], "001,1,1,2,2,,");
    }

    #[test]
    fn statistic_names() {
        for s in Statistic::ALL {
            assert_eq!(s.as_str().parse::<Statistic>().unwrap(), s);
        }
    }

    #[test]
    fn works_in_f32() {
        let mut w = SquareMatrix::<f32>::zeros(3);
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            w.set(i, j, 0.125);
            w.set(j, i, 0.125);
        }
        let g = UndirectedNetwork::from_weights(0, Arc::new(CountryRegistry::numbered(3)), w, 1.0).unwrap();
        let t = node_stats(&g);
        assert_eq!(t.bcc, vec![Some(1.0f32); 3]);
        assert!((t.wcc[0].unwrap() - 0.125).abs() < 1e-6);
    }
}
