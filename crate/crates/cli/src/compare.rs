//! Side-by-side summary of binary (BNA) and weighted (WNA) correlation patterns.

use std::fmt;

use wnet::distributions::StatPair;

use crate::bundle::ReportBundle;
use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabelThresholds {
    pub strong: f64,
    pub moderate: f64,
}

impl Default for LabelThresholds {
    fn default() -> Self {
        Self {
            strong: 0.7,
            moderate: 0.3,
        }
    }
}

/// `"<strength> <sign>"`, e.g. `"strong negative"`.
pub fn label(r: f64, t: LabelThresholds) -> String {
    let strength = if r.abs() >= t.strong {
        "strong"
    } else if r.abs() >= t.moderate {
        "moderate"
    } else {
        "weak"
    };
    let sign = if r < 0.0 { "negative" } else { "positive" };
    format!("{strength} {sign}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct ViewSummary {
    pub pair: StatPair,
    pub mean_r: f64,
    pub label: String,
    pub years: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ViewRow {
    pub view: &'static str,
    pub assortativity: ViewSummary,
    pub clustering: ViewSummary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonTable {
    pub rows: [ViewRow; 2],
}

impl ComparisonTable {
    pub fn to_csv(&self) -> Vec<u8> {
        let mut s = String::from(
            "view,assortativity_pair,assortativity_mean_r,assortativity_label,clustering_pair,clustering_mean_r,clustering_label\n",
        );
        for row in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                row.view,
                row.assortativity.pair,
                row.assortativity.mean_r,
                row.assortativity.label,
                row.clustering.pair,
                row.clustering.mean_r,
                row.clustering.label,
            ));
        }
        s.into_bytes()
    }
}

impl fmt::Display for ComparisonTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<5} {:<34} {:<34}", "view", "assortativity", "clustering")?;
        for row in &self.rows {
            let cell = |v: &ViewSummary| format!("{} {:+.3} ({})", v.pair, v.mean_r, v.label);
            writeln!(f, "{:<5} {:<34} {:<34}", row.view, cell(&row.assortativity), cell(&row.clustering))?;
        }
        Ok(())
    }
}

fn summarize(bundle: &ReportBundle, pair: StatPair, t: LabelThresholds) -> Result<ViewSummary, CliError> {
    let points = bundle
        .series
        .get(&pair)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| CliError::Data(format!("bundle has no {pair} correlation series")))?;
    let mean_r = points.iter().map(|p| p.correlation.r).sum::<f64>() / points.len() as f64;
    Ok(ViewSummary {
        pair,
        mean_r,
        label: label(mean_r, t),
        years: points.len(),
    })
}

/// BNA row: ND-ANND and BCC-ND. WNA row: NS-ANNS and WCC-NS. Each cell is
/// the mean correlation over the bundle's years.
pub fn compare_views(bundle: &ReportBundle, t: LabelThresholds) -> Result<ComparisonTable, CliError> {
    Ok(ComparisonTable {
        rows: [
            ViewRow {
                view: "BNA",
                assortativity: summarize(bundle, StatPair::NdAnnd, t)?,
                clustering: summarize(bundle, StatPair::BccNd, t)?,
            },
            ViewRow {
                view: "WNA",
                assortativity: summarize(bundle, StatPair::NsAnns, t)?,
                clustering: summarize(bundle, StatPair::WccNs, t)?,
            },
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn buckets() {
        let t = LabelThresholds::default();
        assert_eq!(label(-0.95, t), "strong negative");
        assert_eq!(label(-0.7, t), "strong negative");
        assert_eq!(label(-0.4, t), "moderate negative");
        assert_eq!(label(0.3, t), "moderate positive");
        assert_eq!(label(0.29, t), "weak positive");
        assert_eq!(label(-0.05, t), "weak negative");
    }
}
