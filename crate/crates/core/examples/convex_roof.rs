//! The pure-state ensemble whose average QFI equals the QFI of the mixture,
//! and its split across coherence-closed level partitions.

use std::f64::consts::TAU;

use ti_coherence::numkit::random_density;
use ti_coherence::qfi::qfi;
use ti_coherence::roof::{ensemble_avg_qfi, period_partitions, refine_ensemble_periods, yu_ensemble};
use ti_coherence::spectral::PeriodicHamiltonian;

fn main() -> ti_coherence::Result<()> {
    let h = PeriodicHamiltonian::from_levels(TAU, vec![0, 1, 2, 4])?;
    let rho = random_density(4, 3, 11)?;
    let hm = h.matrix();

    let y = yu_ensemble(&rho, &hm)?;
    println!("QFI {:.10}", qfi(&rho, &hm)?.value);
    println!("ensemble average {:.10} over {} members", ensemble_avg_qfi(&y.ensemble, &hm)?, y.ensemble.len());
    for ((w, _), v) in y.ensemble.members().iter().zip(y.ensemble.variances(&hm)?) {
        println!("  weight {w:.4}  variance {v:.6}");
    }

    let parts = period_partitions(&rho, &h)?;
    println!("level partitions {:?} (leak {:.1e})", parts.classes, parts.leak);
    let refined = refine_ensemble_periods(&y.ensemble, &parts)?;
    println!("refined average {:.10} over {} members", ensemble_avg_qfi(&refined, &hm)?, refined.len());
    Ok(())
}
