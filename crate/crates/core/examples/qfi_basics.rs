//! QFI of a dephased qubit, compared with its variance, skew information and
//! a finite-difference estimate.

use ti_coherence::numkit::{ComplexMatrix, DensityOperator};
use ti_coherence::qfi::{qfi, qfi_fd_oracle, sld, variance, wigner_yanase, FD_STEP};

fn main() -> ti_coherence::Result<()> {
    let h = ComplexMatrix::from_real_diag(&[0.5, -0.5]);
    println!("{:>5} {:>10} {:>10} {:>10} {:>10}", "p", "variance", "qfi", "4*skew", "fd");
    for p in [0.5, 0.6, 0.75, 0.9, 1.0] {
        let c = p - 0.5;
        let rho = DensityOperator::new(ComplexMatrix::from_real_rows(&[&[0.5, c], &[c, 0.5]]))?;
        let f = qfi(&rho, &h)?;
        println!(
            "{p:>5} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            variance(&rho, &h)?,
            f.value,
            4.0 * wigner_yanase(&rho, &h)?,
            qfi_fd_oracle(&rho, &h, FD_STEP)?,
        );
    }
    let rho = DensityOperator::new(ComplexMatrix::from_real_rows(&[&[0.5, 0.4], &[0.4, 0.5]]))?;
    println!("SLD at p = 0.9: {:?}", sld(&rho, &h)?);
    Ok(())
}
