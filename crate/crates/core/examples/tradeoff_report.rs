//! Producing the photon/mode tradeoff table.

use std::sync::Arc;

use optical_smp::bounds::{build_report, equality_references, ReportPoint};
use optical_smp::smp::{coherent_fingerprint_protocol, RepetitionCode};

fn main() -> optical_smp::Result<()> {
    let mut points: Vec<ReportPoint> = (2..=6).map(|m| ReportPoint::new(Some(3), m, 1.0, 1e-4)).collect();
    let qfp = coherent_fingerprint_protocol(Arc::new(RepetitionCode::new(3, 3)?), 2.0, 1e-14)?;
    points.push(ReportPoint::from_protocol(&qfp, 1e-4)?);
    let report = build_report(&points, &equality_references(3)?)?;
    print!("{}", report.to_csv());
    Ok(())
}
