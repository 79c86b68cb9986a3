//! Truncating every message of a protocol and checking the error budget.

use std::sync::Arc;

use optical_smp::smp::{coherent_fingerprint_protocol, evaluate_error, PairSelection, RepetitionCode};
use optical_smp::truncation::transform_protocol;

fn main() -> optical_smp::Result<()> {
    let p = coherent_fingerprint_protocol(Arc::new(RepetitionCode::new(2, 2)?), 6.0, 1e-14)?;
    for delta in [0.95, 0.9, 0.8, 0.75] {
        let t = transform_protocol(&p, delta)?;
        let after = evaluate_error(&t.protocol, &PairSelection::All)?.worst_error;
        println!(
            "delta {delta:<6} a={:<6} error {:.6} -> {:.6}  max distance {:.4}  bound {:.4}",
            t.spec.cutoff, t.original_error, after, t.max_trace_distance, t.error_bound
        );
    }
    Ok(())
}
