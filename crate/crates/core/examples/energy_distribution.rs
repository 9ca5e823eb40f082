//! Energy distributions on a six-level ladder: convolution powers, state
//! periods, and the number of copies needed for adjacent support.

use std::f64::consts::TAU;

use ti_coherence::numkit::PureState;
use ti_coherence::spectral::{energy_distribution, minimal_adjacent_l, state_period, PeriodicHamiltonian};

fn main() -> ti_coherence::Result<()> {
    let h = PeriodicHamiltonian::from_levels(TAU, (0..6).collect())?;
    let gamma = PureState::from_real(&[1.0, 0.0, 1.0, 0.0, 0.0, 1.0])?;
    let eta = PureState::from_real(&[1.0, 0.0, 1.0, 0.0, 0.0, 0.0])?;

    for (name, psi) in [("gamma", &gamma), ("eta", &eta)] {
        let p = energy_distribution(psi, &h)?;
        println!("{name}: support {:?}", p.support());
        println!("  period {:?}", state_period(psi, &h)?);
        println!("  adjacent support after {:?}", minimal_adjacent_l(&p));
        let p2 = p.convolve_power(2)?;
        let cells: Vec<String> = p2.iter().filter(|(_, w)| *w > 0.0).map(|(n, w)| format!("{n}:{:.0}/9", w * 9.0)).collect();
        println!("  two copies {}", cells.join(" "));
    }
    Ok(())
}
