//! Plot-ready CSV tables.

use std::io::Write;

use anyhow::Result;
use scoredyn_core::predict::Predictability;
use scoredyn_core::simulate::LeadSpread;

fn writer(w: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

/// Generic numeric table. `rows` must match `header` in width.
pub fn write_table(w: &mut dyn Write, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut out = writer(w);
    out.write_record(header)?;
    for row in rows {
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// Lead spread over clock time, observed next to simulated.
pub fn write_spread(w: &mut dyn Write, empirical: &[LeadSpread], model: &[LeadSpread]) -> Result<()> {
    anyhow::ensure!(
        empirical.len() == model.len() && empirical.iter().zip(model).all(|(a, b)| a.t == b.t),
        "curves are sampled at different seconds"
    );
    write_table(
        w,
        &["t", "sd_empirical", "sd_model", "mean_abs_empirical", "mean_abs_model"],
        empirical.iter().zip(model).map(|(e, m)| {
            vec![
                e.t.to_string(),
                e.sd.to_string(),
                m.sd.to_string(),
                e.mean_abs.to_string(),
                m.mean_abs.to_string(),
            ]
        }),
    )
}

pub fn write_auc(w: &mut dyn Write, result: &Predictability) -> Result<()> {
    write_table(
        w,
        &["event_index", "auc_chain", "auc_leader", "n_games_scored"],
        result.rows.iter().map(|r| {
            vec![
                r.event_index.to_string(),
                r.auc_chain.to_string(),
                r.auc_leader.to_string(),
                r.n_games_scored.to_string(),
            ]
        }),
    )
}
