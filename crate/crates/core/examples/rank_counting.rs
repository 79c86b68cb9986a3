//! Counting truncated Fock dimensions and comparing them with their bounds.

use optical_smp::combinatorics::{binomial_power_bound, count_rank, entropy_bound, log_rank_bounds, tightness_sweep};
use optical_smp::truncation::markov_cutoff;

fn main() -> optical_smp::Result<()> {
    for (m, a) in [(2, 3), (4, 10), (16, 16), (100, 100)] {
        let r = count_rank(m, a);
        let e = entropy_bound(a, m)?;
        println!("m={m:<4} a={a:<4} rank={:<20} log2={:<10.4} entropy bound={:.4}", r.rank.to_string(), r.log2_rank, e.bound);
    }

    let b = binomial_power_bound(6, 9)?;
    println!("C(15,9) power bounds hold: {}", b.holds());

    let spec = markov_cutoff(2.0, 1e-4, 64)?;
    let lr = log_rank_bounds(&spec);
    println!(
        "m=64 mu=2 delta=1e-4: a={} log2 rank {:.3}, photon bound {:.3}, mode bound {:.3}",
        spec.cutoff, lr.actual, lr.bound_photon, lr.bound_mode
    );

    for row in tightness_sweep(1000)?.iter().step_by(200) {
        println!("{}", row.csv_line());
    }
    Ok(())
}
