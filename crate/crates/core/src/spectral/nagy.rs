use crate::error::{AdptError, Result};
use crate::linalg::{herm_fn, op_norm, r, CMat};

/// Nagy unitary w = [1 − (a − b)²]^{−1/2}[ab + (1 − a)(1 − b)], which carries
/// Ran b onto Ran a: w b w* = a.
pub fn nagy_transport(pi_a: &CMat, pi_b: &CMat) -> Result<CMat> {
    let n = pi_a.nrows();
    let diff = pi_a - pi_b;
    let dist = op_norm(&diff);
    if dist >= 1.0 {
        return Err(AdptError::Transport(dist));
    }
    let id = CMat::identity(n, n);
    let m = &id - &diff * &diff;
    let inv_sqrt = herm_fn(&m, |x| r(1.0 / x.sqrt()));
    Ok(inv_sqrt * (pi_a * pi_b + (&id - pi_a) * (&id - pi_b)))
}
