//! How close iid sums of a lattice distribution get to a translated Poisson,
//! next to the analytic bounds.

use ti_coherence::approx::{adell_bound, bc_bound, poisson_pmf, tp_distance, tv_distance, BcBound};
use ti_coherence::spectral::IntDist;

fn main() -> ti_coherence::Result<()> {
    let gamma = IntDist::from_pairs(&[(0, 1.0 / 3.0), (2, 1.0 / 3.0), (5, 1.0 / 3.0)])?;
    let p = gamma.convolve(&gamma);
    println!("{:>5} {:>12} {:>12}", "m", "exact TV", "bound");
    for m in [4, 16, 64, 256] {
        let exact = tp_distance(&p, m)?;
        let bound = match bc_bound(&p, m)? {
            BcBound::Bound { value, .. } => format!("{value:.6}"),
            BcBound::Inapplicable(why) => format!("n/a ({why})"),
        };
        println!("{m:>5} {exact:>12.6e} {bound:>12}");
    }

    println!("\nPoisson shift sensitivity at rate 20");
    for x in [0.1, 0.5, 1.0, 2.0] {
        let tv = tv_distance(&poisson_pmf(20.0)?, &poisson_pmf(20.0 + x)?);
        println!("  x = {x:<4} TV {tv:.6}  bound {:.6}", adell_bound(20.0, x)?);
    }
    Ok(())
}
