//! Building Fock-space states and comparing them.

use num_complex::Complex64;
use optical_smp::fock::{AnyState, FockDiagonalState, FockIndex, PhotonStatistics, PureState};

fn main() -> optical_smp::Result<()> {
    let noon = PureState::normalized(
        2,
        [
            (FockIndex::new(vec![2, 0])?, Complex64::new(1.0, 0.0)),
            (FockIndex::new(vec![0, 2])?, Complex64::new(1.0, 0.0)),
        ],
    )?;
    let coherent = PureState::coherent(Complex64::new(0.8, 0.3), 12);
    let thermal_like = FockDiagonalState::normalized(
        1,
        (0..10u32).map(|k| (FockIndex::new(vec![k]).unwrap(), 0.5f64.powi(k as i32))),
    )?;

    println!("NOON state mean photons   {:.6}", noon.mean_photon_number());
    println!(
        "coherent |0.8+0.3i>       mean {:.6}, cutoff {}, tail {:.3e}",
        coherent.state.mean_photon_number(),
        coherent.cutoff,
        coherent.tail_mass
    );
    println!("diagonal state mean        {:.6}", thermal_like.mean_photon_number());
    println!("P[N >= 3] for diagonal     {:.6}", thermal_like.prob_at_least(3.0));

    let pair = noon.tensor(&PureState::vacuum(1))?;
    let other = PureState::fock(&[1, 1, 0])?;
    println!("T(NOON x vac, |1,1,0>)     {:.6}", pair.trace_distance(&other)?);
    println!("F(NOON x vac, |1,1,0>)     {:.6}", pair.fidelity(&other)?);

    let dense = thermal_like.to_dense()?;
    println!("dense eigenvalues          {:?}", &dense.eigenvalues()[..3]);
    println!("json                       {}", AnyState::Pure(noon).to_json()?);
    Ok(())
}
