//! Finite-size scans of the Ising energy relation `E(J) = J E(1/J)`.

use alloc::vec::Vec;

use crate::dense::DenseBackend;
use crate::error::{Error, Result};
use crate::models::{self, ModelSpec};

/// One `(J, L)` point of the scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRow {
    pub j: f64,
    pub len: usize,
    /// Ground energy of `H(J)`.
    pub e0: f64,
    /// Ground energy of `H(1/J)`.
    pub e0_dual: f64,
    pub e_per_site: f64,
    /// `|E0(H(J)) - J E0(H(1/J))| / L`.
    pub delta: f64,
    pub gap: Option<f64>,
    /// `2 |1 - 1/J|`, for comparison with `gap` only.
    pub gap_formula: f64,
}

fn check_coupling(j: f64) -> Result<()> {
    if j == 0.0 || !j.is_finite() || !(1.0 / j).is_finite() {
        return Err(Error::DegenerateParameters(alloc::format!(
            "J = {j}: the relation pairs J with 1/J, so the extreme cases J = 0 and J = inf are excluded"
        )));
    }
    Ok(())
}

pub fn energy_point(j: f64, len: usize, backend: &DenseBackend) -> Result<EnergyRow> {
    check_coupling(j)?;
    let h = models::build(&ModelSpec::ising(len, j))?;
    let hd = models::build(&ModelSpec::ising(len, 1.0 / j))?;
    let s = backend.spectrum(&h)?;
    let e0_dual = if j == 1.0 { s.ground_energy } else { backend.spectrum(&hd)?.ground_energy };
    let n = len as f64;
    Ok(EnergyRow {
        j,
        len,
        e0: s.ground_energy,
        e0_dual,
        e_per_site: s.ground_energy / n,
        delta: (s.ground_energy - j * e0_dual).abs() / n,
        gap: s.gap,
        gap_formula: 2.0 * (1.0 - 1.0 / j).abs(),
    })
}

/// Every `(J, L)` combination, sorted by `L` then by grid order of `J`.
pub fn duality_energy_scan(js: &[f64], lens: &[usize], backend: &DenseBackend) -> Result<Vec<EnergyRow>> {
    for &j in js {
        check_coupling(j)?;
    }
    let mut lens = lens.to_vec();
    lens.sort_unstable();
    let mut rows = Vec::with_capacity(js.len() * lens.len());
    for &len in &lens {
        for &j in js {
            rows.push(energy_point(j, len, backend)?);
        }
    }
    Ok(rows)
}

/// True if `delta` does not increase with `L` for every `J` in `rows`. Rows must be
/// sorted by `L`; `slack` absorbs round-off between numerically zero values.
pub fn delta_non_increasing(rows: &[EnergyRow], slack: f64) -> bool {
    let mut js: Vec<f64> = Vec::new();
    for r in rows {
        if !js.contains(&r.j) {
            js.push(r.j);
        }
    }
    js.iter().all(|&j| {
        let d: Vec<f64> = rows.iter().filter(|r| r.j == j).map(|r| r.delta).collect();
        d.windows(2).all(|w| w[1] <= w[0] + slack)
    })
}

pub use crate::gen_stabilizer::lemma1_entropy as entropy_point;

/// Default grid for entropy sweeps: `0` followed by 49 log-spaced ratios in `[1e-2, 1e2]`.
pub fn default_entropy_grid() -> Vec<f64> {
    let mut g = alloc::vec![0.0];
    g.extend((0..49).map(|i| crate::math::pow(10.0, -2.0 + 4.0 * i as f64 / 48.0)));
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_dual_point() {
        let be = DenseBackend::default();
        let r = energy_point(1.0, 6, &be).unwrap();
        assert_eq!(r.delta, 0.0);
        assert_eq!(r.gap_formula, 0.0);
    }

    #[test]
    fn rejects_zero_coupling() {
        let be = DenseBackend::default();
        let e = duality_energy_scan(&[1.0, 0.0], &[4], &be).unwrap_err();
        assert!(matches!(e, Error::DegenerateParameters(_)));
        assert!(energy_point(f64::INFINITY, 4, &be).is_err());
    }

    #[test]
    fn rows_sorted_by_length() {
        let be = DenseBackend::default();
        let rows = duality_energy_scan(&[2.0], &[6, 4], &be).unwrap();
        assert_eq!(rows.iter().map(|r| r.len).collect::<Vec<_>>(), [4, 6]);
    }

    #[test]
    fn grid_shape() {
        let g = default_entropy_grid();
        assert_eq!(g.len(), 50);
        assert!((g[1] - 0.01).abs() < 1e-15 && (g[49] - 100.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
