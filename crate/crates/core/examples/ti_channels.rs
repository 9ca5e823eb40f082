//! Random covariant channels never raise the QFI.

use std::f64::consts::TAU;

use ti_coherence::convert::{make_ti_channel, TiChannel};
use ti_coherence::numkit::{random_density, random_unitary};
use ti_coherence::qfi::qfi;
use ti_coherence::spectral::PeriodicHamiltonian;

fn main() -> ti_coherence::Result<()> {
    let h = PeriodicHamiltonian::new(TAU, vec![0, 1, 3], 0.0, Some(random_unitary(3, 2)))?;
    let hm = h.matrix();
    let rho = random_density(3, 3, 5)?;
    let before = qfi(&rho, &hm)?.value;
    println!("input QFI {before:.6}");
    for seed in 0..5 {
        let ch = make_ti_channel(&h, &[0, 1, 2], seed)?;
        let after = qfi(&ch.apply(&rho)?, &hm)?.value;
        println!(
            "  channel {seed}: {} Kraus ops, covariance residual {:.1e}, QFI {after:.6}",
            ch.kraus.len(),
            ch.covariance_residual(seed + 100)?
        );
    }
    let dephased = TiChannel::dephasing(&h).apply(&rho)?;
    println!("dephasing: QFI {:.1e}", qfi(&dephased, &hm)?.value);
    Ok(())
}
