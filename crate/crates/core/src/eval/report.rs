use std::io::Write;

use super::TrialSummary;
use crate::Result;

pub const TRIAL_COLUMNS: [&str; 8] = [
    "experiment",
    "corpus",
    "attribute",
    "k",
    "trial",
    "P",
    "R",
    "F1",
];

/// One row per trial.
pub fn write_trials_csv<W: Write>(out: W, summaries: &[TrialSummary]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRIAL_COLUMNS)?;
    for s in summaries {
        for r in &s.rows {
            w.write_record([
                r.tag.experiment.clone(),
                r.tag.corpus.clone(),
                r.tag.attribute.clone(),
                r.k.to_string(),
                r.trial.to_string(),
                r.prf.precision.to_string(),
                r.prf.recall.to_string(),
                r.prf.f1.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotPoint {
    pub series: String,
    pub x: f64,
    pub y: f64,
}

pub fn write_plot_data<W: Write>(out: W, points: &[PlotPoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["series", "x", "y"])?;
    for p in points {
        w.write_record([p.series.clone(), p.x.to_string(), p.y.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
