//! CSV emitters. Rationals are written exactly: either as separate
//! numerator/denominator integer columns (convergence traces) or as `p/q`.

use std::path::Path;

use extgini::equity::{Prop1Row, Prop2Row};
use extgini::gini::LiminfTrace;

pub const TRACE_HEADER: [&str; 6] =
    ["N", "H_N", "W_N_num", "W_N_den", "running_liminf_num", "running_liminf_den"];
pub const PROP1_HEADER: [&str; 6] = ["N", "raw_x", "raw_y", "D", "bound", "slack"];
pub const PROP2_HEADER: [&str; 5] = ["k", "epsilon", "W_unequal", "W_equal", "gap"];

pub fn write_trace(path: &Path, trace: &LiminfTrace) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(TRACE_HEADER)?;
    for r in &trace.rows {
        w.write_record([
            r.big_n.to_string(),
            r.horizon.to_string(),
            r.w_n.numer().to_string(),
            r.w_n.denom().to_string(),
            r.running_liminf.numer().to_string(),
            r.running_liminf.denom().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_prop1(path: &Path, rows: &[Prop1Row]) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(PROP1_HEADER)?;
    for r in rows {
        w.write_record([
            r.big_n.to_string(),
            r.raw_x.to_string(),
            r.raw_y.to_string(),
            r.domain_count.to_string(),
            r.bound.to_string(),
            r.slack.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_prop2(path: &Path, rows: &[Prop2Row]) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(PROP2_HEADER)?;
    for r in rows {
        w.write_record([
            r.k.to_string(),
            r.epsilon.to_string(),
            r.w_unequal.to_string(),
            r.w_equal.to_string(),
            r.gap.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
