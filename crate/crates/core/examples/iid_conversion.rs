//! Converting c-bits into uniform qutrits at rates below, at and above the
//! QFI ratio 3/8, printed as CSV.

use std::f64::consts::TAU;

use ti_coherence::convert::{sweep, ConversionReport};
use ti_coherence::cost::CBit;
use ti_coherence::numkit::PureState;
use ti_coherence::spectral::PeriodicHamiltonian;

fn main() -> ti_coherence::Result<()> {
    let cbit = CBit::new(TAU);
    let qutrit = PureState::from_real(&[1.0, 1.0, 1.0])?;
    let hq = PeriodicHamiltonian::from_levels(TAU, vec![0, 1, 2])?;
    let rows = sweep(&cbit.state, &cbit.hamiltonian, &qutrit, &hq, &[0.3, 0.375, 0.5], &[100, 200, 400, 800])?;
    println!("{}", ConversionReport::CSV_HEADER);
    for r in rows {
        println!("{}", r.csv_row());
    }
    Ok(())
}
