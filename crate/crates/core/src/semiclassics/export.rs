//! CSV export of trajectories, spin frames and spin vectors.

use std::io::Write;

use super::bmt::SpinVector;
use super::flow::Trajectory;
use super::spin::SpinFrame;
use crate::error::{AdptError, Result};

/// Columns t, q…, p…, E_r, then Re/Im of D entries (row-major) and s
/// components when given.
pub fn write_trajectory_csv<W: Write>(
    out: &mut W,
    traj: &Trajectory,
    spin: Option<&SpinFrame>,
    bmt: Option<&SpinVector>,
) -> Result<()> {
    let d = traj.points[0].d();
    let n = traj.times.len();
    if spin.is_some_and(|s| s.d.len() != n) || bmt.is_some_and(|b| b.s.len() != n) {
        return Err(AdptError::Dimension("spin data must share the trajectory grid".into()));
    }
    let mut head = vec!["t".to_string()];
    head.extend((0..d).map(|i| format!("q{i}")));
    head.extend((0..d).map(|i| format!("p{i}")));
    head.push("E_r".into());
    if let Some(s) = spin {
        let l = s.d[0].nrows();
        for i in 0..l {
            for j in 0..l {
                head.push(format!("re_D{i}{j}"));
                head.push(format!("im_D{i}{j}"));
            }
        }
    }
    if bmt.is_some() {
        head.extend(["s0", "s1", "s2"].map(String::from));
    }
    writeln!(out, "{}", head.join(","))?;
    for k in 0..n {
        let mut row = vec![traj.times[k]];
        row.extend(traj.points[k].coords());
        row.push(traj.energy[k]);
        if let Some(s) = spin {
            let m = &s.d[k];
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    row.push(m[(i, j)].re);
                    row.push(m[(i, j)].im);
                }
            }
        }
        if let Some(b) = bmt {
            row.extend(b.s[k]);
        }
        let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}
