//! Purifications of a random qutrit state: the standard one, the optimal
//! auxiliary Hamiltonian, and the conjugate one.

use ti_coherence::numkit::{random_density, random_hermitian, ComplexMatrix};
use ti_coherence::purify::{
    aux_qfi, conjugate_aux_hamiltonian, numeric_min_oracle, optimal_purification, purification_variance,
};
use ti_coherence::qfi::{qfi, wigner_yanase};

fn main() -> ti_coherence::Result<()> {
    let rho = random_density(3, 3, 7)?;
    let h = random_hermitian(3, 8);
    let f = qfi(&rho, &h)?.value;

    let p = optimal_purification(&rho, &h)?;
    let plain = purification_variance(&rho, &h, &ComplexMatrix::zeros(3, 3))?;
    let conj = purification_variance(&rho, &h, &conjugate_aux_hamiltonian(&rho, &h)?)?;
    let search = numeric_min_oracle(&rho, &h, 1, 400)?;

    println!("QFI / 4                 {:.10}", f / 4.0);
    println!("optimal H_A variance    {:.10}", p.variance());
    println!("gradient search         {:.10}", search.best_variance);
    println!("conjugate H_A variance  {:.10}  (2 W = {:.10})", conj, 2.0 * wigner_yanase(&rho, &h)?);
    println!("no auxiliary Hamiltonian {:.10}", plain);
    println!("QFI left on the ancilla {:.10}", aux_qfi(&rho, &h)?);
    Ok(())
}
