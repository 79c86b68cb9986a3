//! Equality testing with coherent-state fingerprints and a beamsplitter referee.

use std::sync::Arc;

use optical_smp::smp::{
    code_12_4_6, coherent_fingerprint_protocol, evaluate_error, fingerprint_accept_closed_form, BinaryCode,
    PairSelection, RepetitionCode, DEFAULT_COHERENT_TAIL,
};

fn main() -> optical_smp::Result<()> {
    let codes: Vec<Arc<dyn BinaryCode>> = vec![Arc::new(RepetitionCode::new(4, 3)?), Arc::new(code_12_4_6())];
    for code in codes {
        let p = coherent_fingerprint_protocol(code.clone(), 2.0, DEFAULT_COHERENT_TAIL)?;
        let report = evaluate_error(&p, &PairSelection::All)?;
        println!("{}", p.label());
        println!(
            "  worst error {:.6} at {:?}; closed form at min distance {:.6}",
            report.worst_error,
            report.worst_pair,
            fingerprint_accept_closed_form(2.0, code.length(), code.min_distance())
        );
    }

    let large = coherent_fingerprint_protocol(Arc::new(RepetitionCode::new(32, 3)?), 2.0, DEFAULT_COHERENT_TAIL)?;
    let sampled = evaluate_error(&large, &PairSelection::Sample { pairs: 20, shots: 500, seed: 1 })?;
    print!("{}", sampled.to_csv());
    Ok(())
}
