//! Limit moments of the shape functional and of X_n(it) from the κ recursions.

use gwm::limits::{
    kappa_imag_closed, kappa_imag_recursive, kappa_shape_closed, kappa_shape_recursive, limit_moment,
    limit_moment_from_kappa, LimitKind,
};
use gwm::OffspringLaw;

fn main() -> gwm::Result<()> {
    let rec = kappa_shape_recursive(8)?;
    for k in 1..=8 {
        println!("κ_{k}: recursion {:.15e}  closed {:.15e}", rec[k - 1], kappa_shape_closed(k)?);
    }
    let rec = kappa_imag_recursive(1.0, 6)?;
    for l in 1..=6 {
        println!("κ̄_{l}(t = 1): recursion {:.15e}  closed {:.15e}", rec[l - 1], kappa_imag_closed(1.0, l)?);
    }

    let law = OffspringLaw::binary();
    for k in 1..=4 {
        println!(
            "binary shape moment of order {}: from κ {:.12}, Gaussian {:.12}",
            2 * k,
            limit_moment_from_kappa(&law, LimitKind::Shape, k)?,
            limit_moment(&law, LimitKind::Shape, 2 * k, 0)?
        );
    }
    Ok(())
}
