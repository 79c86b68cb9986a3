//! Truncating an energy-bounded state to a finite photon-number cutoff.

use num_complex::Complex64;
use optical_smp::fock::{PhotonStatistics, PureState};
use optical_smp::truncation::{check_gentle_measurement, markov_cutoff, project_below_cutoff, Truncatable};

fn main() -> optical_smp::Result<()> {
    let state = PureState::coherent(Complex64::new(1.5, 0.0), 40).state;
    let mu = state.mean_photon_number();
    for delta in [0.5, 0.2, 0.05, 0.01] {
        let spec = markov_cutoff(mu, delta, 1)?;
        let kept = project_below_cutoff(&state, &spec)?;
        let distance = state.distance_to(&kept.state)?;
        println!(
            "delta {delta:<5} cutoff {:>4}  weight {:.6} (>= {:.6})  distance {:.6} (<= {:.6})",
            spec.cutoff,
            kept.weight,
            1.0 - delta,
            distance,
            delta.sqrt()
        );
    }

    let small = PureState::coherent(Complex64::new(0.9, 0.0), 8).state.to_dense()?;
    for cutoff in 0..4 {
        println!("gentle measurement slack at cutoff {cutoff}: {:.3e}", check_gentle_measurement(&small, cutoff)?);
    }
    Ok(())
}
