//! Coherence cost of a dephased qubit and a simulated preparation from c-bits.

use std::f64::consts::TAU;

use ti_coherence::cost::{coherence_cost, cost_converse, protocol_sweep, ProtocolReport};
use ti_coherence::numkit::{ComplexMatrix, DensityOperator};
use ti_coherence::spectral::PeriodicHamiltonian;

fn main() -> ti_coherence::Result<()> {
    let h = PeriodicHamiltonian::new(TAU, vec![0, 1], -0.5, None)?;
    let rho = DensityOperator::new(ComplexMatrix::from_real_rows(&[&[0.5, 0.4], &[0.4, 0.5]]))?;
    let cost = coherence_cost(&rho, &h)?;
    println!("cost {cost:.6} c-bits per copy");
    for (rate, err) in [(0.7, 0.0), (0.3, 1e-4), (0.3, 0.2)] {
        println!("  claim {rate} c-bits at error {err}: {:?}", cost_converse(&rho, &h, rate, err)?);
    }

    println!("\n{}", ProtocolReport::CSV_HEADER);
    for r in protocol_sweep(&rho, &h, &[50, 100, 200, 400], &[0.05, 0.1], 2000, 1)? {
        println!("{}", r.csv_row());
    }
    Ok(())
}
