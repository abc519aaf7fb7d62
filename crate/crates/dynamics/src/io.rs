//! CSV output for trajectories, sections and Lyapunov histories, plus the
//! JSON sidecar that records how a run was produced.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::lyapunov::LyapunovEstimate;
use crate::section::PoincareSection;
use crate::trajectory::Trajectory;

/// Header `t,x1,x2,x3`.
pub fn write_trajectory_csv<W: Write>(tr: &Trajectory, mut out: W) -> std::io::Result<()> {
    writeln!(out, "t,x1,x2,x3")?;
    for s in &tr.samples {
        writeln!(out, "{},{},{},{}", s.t, s.x[0], s.x[1], s.x[2])?;
    }
    Ok(())
}

/// Header `s1,s2`: the two kept coordinates in increasing axis order.
pub fn write_section_csv<W: Write>(sec: &PoincareSection, mut out: W) -> std::io::Result<()> {
    writeln!(out, "s1,s2")?;
    for p in sec.points() {
        writeln!(out, "{},{}", p[0], p[1])?;
    }
    Ok(())
}

/// Header `t,estimate`.
pub fn write_lyapunov_csv<W: Write>(est: &LyapunovEstimate, mut out: W) -> std::io::Result<()> {
    writeln!(out, "t,estimate")?;
    for h in &est.history {
        writeln!(out, "{},{}", h.t, h.estimate)?;
    }
    Ok(())
}

/// Reproducibility record stored next to every CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSidecar {
    pub field_hash: String,
    pub seed: Option<u64>,
    pub x0: [f64; 3],
    pub tol: f64,
    pub t_final: f64,
}

impl RunSidecar {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sidecar is always serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::integrate;
    use beltrami_core::{field_hash, make_abc, AbcParams};

    #[test]
    fn trajectory_csv_layout() {
        let v = make_abc(AbcParams::new(1.0, 0.5, 0.0));
        let tr = integrate(&v, [0.1, 0.2, 0.3], 2.0, 1e-9).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&tr, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,x1,x2,x3\n0,"));
        assert_eq!(text.lines().count(), tr.samples.len() + 1);
    }

    #[test]
    fn sidecar_round_trip() {
        let s = RunSidecar {
            field_hash: field_hash(&make_abc(AbcParams::new(1.0, 0.5, 0.1))),
            seed: Some(3),
            x0: [0.0, 1.0, 2.0],
            tol: 1e-10,
            t_final: 100.0,
        };
        let back: RunSidecar = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(s, back);
    }
}
