//! Spin-chain Hamiltonian builders and the duality identities between them.
//!
//! Doc comments quote index ranges 1-based to match the usual notation; the
//! builders index sites from 0.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::circuits::{self, Boundary, Circuit};
use crate::error::{Error, Result};
use crate::pauli::{PauliOp, PauliString, PauliSum};

/// Exact identities are asserted at this coefficient tolerance.
pub const DUALITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `sum J X_k X_{k+1} + sum B Z_k`
    Ising,
    /// `sum_{k=2}^{L-1} J X_{k-1} Z_k X_{k+1} + sum B Z_k`
    Cluster,
    /// cluster term with `J1`, Ising term with `J2`, field `B`
    ClusterIsing,
    /// `sum [-J Z_{k-1} X_k Z_{k+1} + B Z_k]`
    Zxz,
    /// `B X_L - sum_{k=1}^{L-2} J1 Y_k Y_{k+1} + sum_{k=1}^{L-1} B X_k X_{k+1} + sum_{k=2}^{L} J2 Z_k`
    XyField,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Ising => "ising",
            Family::Cluster => "cluster",
            Family::ClusterIsing => "cluster_ising",
            Family::Zxz => "zxz",
            Family::XyField => "xy_field",
        }
    }

    fn min_len(self) -> usize {
        match self {
            Family::Ising => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "ising" => Ok(Family::Ising),
            "cluster" => Ok(Family::Cluster),
            "cluster_ising" => Ok(Family::ClusterIsing),
            "zxz" => Ok(Family::Zxz),
            "xy_field" | "xy" => Ok(Family::XyField),
            other => Err(Error::InvalidModel(alloc::format!("unknown family {other:?}"))),
        }
    }
}

/// Model family, size, couplings and boundary. Unused couplings are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub family: Family,
    pub len: usize,
    pub j: f64,
    pub j1: f64,
    pub j2: f64,
    pub b: f64,
    pub boundary: Boundary,
}

impl ModelSpec {
    pub fn new(family: Family, len: usize) -> Self {
        ModelSpec { family, len, j: 1.0, j1: 1.0, j2: 1.0, b: 1.0, boundary: Boundary::Open }
    }

    /// Open transverse Ising chain with unit field.
    pub fn ising(len: usize, j: f64) -> Self {
        ModelSpec { j, ..Self::new(Family::Ising, len) }
    }

    pub fn cluster(len: usize, j: f64, b: f64) -> Self {
        ModelSpec { j, b, ..Self::new(Family::Cluster, len) }
    }

    pub fn cluster_ising(len: usize, j1: f64, j2: f64, b: f64) -> Self {
        ModelSpec { j1, j2, b, ..Self::new(Family::ClusterIsing, len) }
    }

    /// Periodic ZXZ chain.
    pub fn zxz(len: usize, j: f64, b: f64) -> Self {
        ModelSpec { j, b, boundary: Boundary::Periodic, ..Self::new(Family::Zxz, len) }
    }

    pub fn xy_field(len: usize, j1: f64, j2: f64, b: f64) -> Self {
        ModelSpec { j1, j2, b, ..Self::new(Family::XyField, len) }
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_field(mut self, b: f64) -> Self {
        self.b = b;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let min = self.family.min_len().max(if self.boundary == Boundary::Periodic { 3 } else { 0 });
        if self.len < min || self.len > crate::pauli::MAX_SITES {
            return Err(Error::InvalidModel(alloc::format!(
                "{} needs between {min} and {} sites, got {}",
                self.family,
                crate::pauli::MAX_SITES,
                self.len
            )));
        }
        if ![self.j, self.j1, self.j2, self.b].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidModel("couplings must be finite".to_string()));
        }
        if self.family == Family::XyField && self.boundary == Boundary::Periodic {
            return Err(Error::InvalidModel("xy_field is defined with open boundaries only".to_string()));
        }
        Ok(())
    }
}

struct Builder {
    sum: PauliSum,
    len: usize,
}

impl Builder {
    fn new(len: usize) -> Result<Self> {
        Ok(Builder { sum: PauliSum::zero(len)?, len })
    }

    fn term(&mut self, coeff: f64, ops: &[(usize, PauliOp)]) -> Result<()> {
        let p = PauliString::from_ops(self.len, ops)?;
        self.sum.add_term(&p, Complex64::new(coeff, 0.0))
    }

    fn field(&mut self, coeff: f64, op: PauliOp, sites: impl Iterator<Item = usize>) -> Result<()> {
        for k in sites {
            self.term(coeff, &[(k, op)])?;
        }
        Ok(())
    }

    /// `coeff * A_k B_{k+1}` over bonds.
    fn bonds(&mut self, coeff: f64, a: PauliOp, b: PauliOp, bonds: impl Iterator<Item = (usize, usize)>) -> Result<()> {
        for (k, n) in bonds {
            self.term(coeff, &[(k, a), (n, b)])?;
        }
        Ok(())
    }

    /// `coeff * A_{k-1} B_k A_{k+1}` over centres.
    fn triples(&mut self, coeff: f64, outer: PauliOp, mid: PauliOp, centres: &[(usize, usize, usize)]) -> Result<()> {
        for &(p, k, n) in centres {
            self.term(coeff, &[(p, outer), (k, mid), (n, outer)])?;
        }
        Ok(())
    }
}

fn bonds(len: usize, boundary: Boundary) -> impl Iterator<Item = (usize, usize)> {
    (0..len).filter_map(move |k| boundary.next(k, len).map(|n| (k, n)))
}

fn centres(len: usize, boundary: Boundary) -> Vec<(usize, usize, usize)> {
    (0..len).filter_map(|k| Some((boundary.prev(k, len)?, k, boundary.next(k, len)?))).collect()
}

/// Build the Hamiltonian described by `spec` as a canonical Pauli sum.
pub fn build(spec: &ModelSpec) -> Result<PauliSum> {
    use PauliOp::{X, Y, Z};
    spec.validate()?;
    let (l, bc) = (spec.len, spec.boundary);
    let mut h = Builder::new(l)?;
    match spec.family {
        Family::Ising => {
            h.bonds(spec.j, X, X, bonds(l, bc))?;
            h.field(spec.b, Z, 0..l)?;
        }
        Family::Cluster => {
            h.triples(spec.j, X, Z, &centres(l, bc))?;
            h.field(spec.b, Z, 0..l)?;
        }
        Family::ClusterIsing => {
            h.triples(spec.j1, X, Z, &centres(l, bc))?;
            h.bonds(spec.j2, X, X, bonds(l, bc))?;
            h.field(spec.b, Z, 0..l)?;
        }
        Family::Zxz => {
            h.triples(-spec.j, Z, X, &centres(l, bc))?;
            h.field(spec.b, Z, 0..l)?;
        }
        Family::XyField => {
            h.term(spec.b, &[(l - 1, X)])?;
            h.bonds(-spec.j1, Y, Y, (0..l - 2).map(|k| (k, k + 1)))?;
            h.bonds(spec.b, X, X, bonds(l, Boundary::Open))?;
            h.field(spec.j2, Z, 1..l)?;
        }
    }
    Ok(h.sum)
}

/// Right-hand side of the open Ising duality, `B X_L - J Z_1 + B sum X_k X_{k+1} + J sum Z_k`;
/// at `B = 1` this is `X_L - J Z_1 + J H(1/J)` written without dividing by `J`.
pub fn ising_dual_target(len: usize, j: f64, b: f64) -> Result<PauliSum> {
    use PauliOp::{X, Z};
    let mut h = Builder::new(len)?;
    h.term(b, &[(len - 1, X)])?;
    h.term(-j, &[(0, Z)])?;
    h.bonds(b, X, X, bonds(len, Boundary::Open))?;
    h.field(j, Z, 0..len)?;
    Ok(h.sum)
}

/// Anisotropic XY image of the open cluster Hamiltonian,
/// `B X_L - sum_{k=2}^{L-1} J Y_k Y_{k+1} + sum_{k=1}^{L-1} B X_k X_{k+1}`.
/// The `B X_L` term is omitted when `boundary_field` is false.
pub fn cluster_dual_target(len: usize, j: f64, b: f64, boundary_field: bool) -> Result<PauliSum> {
    use PauliOp::{X, Y};
    if len < 3 {
        return Err(Error::InvalidModel("cluster dual needs at least 3 sites".to_string()));
    }
    let mut h = Builder::new(len)?;
    if boundary_field {
        h.term(b, &[(len - 1, X)])?;
    }
    h.bonds(-j, Y, Y, (1..len - 1).map(|k| (k, k + 1)))?;
    h.bonds(b, X, X, bonds(len, Boundary::Open))?;
    Ok(h.sum)
}

/// Outcome of comparing a conjugated Hamiltonian with a directly built target.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityReport {
    pub len: usize,
    pub conjugated: PauliSum,
    pub target: PauliSum,
    /// `conjugated - target`.
    pub residual: PauliSum,
    /// Largest residual coefficient.
    pub max_residual: f64,
    /// Largest residual coefficient over terms not confined to the boundary sites.
    pub bulk_mismatch: f64,
    /// Every residual term is supported within the first two and last two sites.
    pub boundary_only: bool,
}

impl DualityReport {
    pub fn compare(conjugated: PauliSum, target: PauliSum, tol: f64) -> Result<Self> {
        let len = conjugated.len();
        let residual = conjugated.sub(&target)?;
        let edge = boundary_mask(len);
        let mut bulk_mismatch = 0.0f64;
        let mut boundary_only = true;
        let mut max_residual = 0.0f64;
        let mut kept = PauliSum::zero(len)?;
        for (p, c) in residual.iter() {
            let m = c.norm();
            if m <= tol {
                continue;
            }
            kept.add_term(&p, c)?;
            max_residual = max_residual.max(m);
            if p.support() & !edge != 0 {
                boundary_only = false;
                bulk_mismatch = bulk_mismatch.max(m);
            }
        }
        Ok(DualityReport { len, conjugated, target, residual: kept, max_residual, bulk_mismatch, boundary_only })
    }

    pub fn is_exact(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn residual_terms(&self) -> usize {
        self.residual.num_terms()
    }
}

/// Sites `{1, 2, L-1, L}` (1-based) as a mask.
pub fn boundary_mask(len: usize) -> u128 {
    let mut m = 0u128;
    for s in [0, 1, len.saturating_sub(2), len - 1] {
        if s < len {
            m |= 1u128 << s;
        }
    }
    m
}

/// Directly built right-hand side of the stated duality for `spec`.
pub fn dual_target(spec: &ModelSpec) -> Result<PauliSum> {
    if spec.boundary != Boundary::Open {
        return Err(Error::InvalidModel("duality identities are stated for open chains".to_string()));
    }
    match spec.family {
        Family::Ising => ising_dual_target(spec.len, spec.j, spec.b),
        Family::Cluster => cluster_dual_target(spec.len, spec.j, spec.b, true),
        Family::ClusterIsing => build(&ModelSpec::xy_field(spec.len, spec.j1, spec.j2, spec.b)),
        f => Err(Error::InvalidModel(alloc::format!("no stated dual for family {f}"))),
    }
}

/// Conjugate `build(spec)` by the CNOT+Hadamard staircase and compare with the stated dual.
pub fn duality_residual(spec: &ModelSpec) -> Result<DualityReport> {
    let circuit = circuits::fig2_staircase(spec.len)?;
    duality_residual_with(spec, &circuit)
}

/// As [`duality_residual`], with a caller-supplied circuit.
pub fn duality_residual_with(spec: &ModelSpec, circuit: &Circuit) -> Result<DualityReport> {
    spec.validate()?;
    let target = dual_target(spec)?;
    let conjugated = circuits::conjugate(circuit, &build(spec)?)?;
    DualityReport::compare(conjugated, target, DUALITY_TOL)
}

/// Hadamard-CZ-Hadamard image of the open cluster chain compared with the same chain
/// with `J` and `B` exchanged.
pub fn cluster_self_duality(len: usize, j: f64, b: f64) -> Result<DualityReport> {
    let spec = ModelSpec::cluster(len, j, b);
    spec.validate()?;
    let c = circuits::cluster_self_dual(len, Boundary::Open)?;
    let conjugated = circuits::conjugate(&c, &build(&spec)?)?;
    let target = build(&ModelSpec::cluster(len, b, j))?;
    DualityReport::compare(conjugated, target, DUALITY_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letters(h: &PauliSum) -> Vec<(alloc::string::String, f64)> {
        h.iter().map(|(p, c)| (p.letters(), c.re)).collect()
    }

    #[test]
    fn ising_two_sites() {
        let h = build(&ModelSpec::ising(2, 1.0)).unwrap();
        let mut t = letters(&h);
        t.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(t, [("IZ".into(), 1.0), ("XX".into(), 1.0), ("ZI".into(), 1.0)]);
    }

    #[test]
    fn zxz_without_coupling_is_the_field() {
        let h = build(&ModelSpec::zxz(3, 0.0, 1.0)).unwrap();
        let mut t = letters(&h);
        t.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(t, [("IIZ".into(), 1.0), ("IZI".into(), 1.0), ("ZII".into(), 1.0)]);
    }

    #[test]
    fn cluster_term_count() {
        let h = build(&ModelSpec::cluster(4, 1.0, 1.0)).unwrap();
        assert_eq!(h.num_terms(), 6);
        let p = build(&ModelSpec::cluster(4, 1.0, 1.0).with_boundary(Boundary::Periodic)).unwrap();
        assert_eq!(p.num_terms(), 8);
    }

    #[test]
    fn zxz_sign_convention() {
        let h = build(&ModelSpec::zxz(4, 0.5, 0.0)).unwrap();
        assert_eq!(h.coeff(&PauliString::from_letters("ZXZI").unwrap()), Complex64::new(-0.5, 0.0));
        assert_eq!(h.coeff(&PauliString::from_letters("XZIZ").unwrap()), Complex64::new(-0.5, 0.0));
    }

    #[test]
    fn invalid_models() {
        assert!(build(&ModelSpec::cluster(2, 1.0, 1.0)).is_err());
        assert!(build(&ModelSpec::ising(1, 1.0)).is_err());
        assert!(build(&ModelSpec::ising(4, f64::NAN)).is_err());
        assert!(build(&ModelSpec::xy_field(4, 1.0, 1.0, 1.0).with_boundary(Boundary::Periodic)).is_err());
        assert!("heisenberg".parse::<Family>().is_err());
        assert_eq!("cluster-ising".parse::<Family>().unwrap(), Family::ClusterIsing);
    }

    #[test]
    fn ising_duality_small() {
        let r = duality_residual(&ModelSpec::ising(6, 2.0)).unwrap();
        assert!(r.is_exact(), "{:?}", r.residual);
        let r = duality_residual(&ModelSpec::ising(4, 1.0)).unwrap();
        assert!(r.is_exact());
    }

    #[test]
    fn zxz_has_no_dual() {
        assert!(duality_residual(&ModelSpec::zxz(4, 1.0, 1.0).with_boundary(Boundary::Open)).is_err());
    }

    #[test]
    fn cluster_dual_is_exact() {
        let r = duality_residual(&ModelSpec::cluster(6, 0.7, 1.3)).unwrap();
        assert!(r.is_exact(), "{}", r.residual);
    }

    #[test]
    fn cluster_ising_residual_is_the_shifted_yy_range() {
        let (j1, j2, b) = (0.8, 0.3, 1.1);
        let r = duality_residual(&ModelSpec::cluster_ising(7, j1, j2, b)).unwrap();
        assert_eq!(r.residual_terms(), 2);
        assert!(r.boundary_only);
        assert_eq!(r.bulk_mismatch, 0.0);
        let yy_first = PauliString::from_letters("YYIIIII").unwrap();
        let yy_last = PauliString::from_letters("IIIIIYY").unwrap();
        assert!((r.residual.coeff(&yy_first) - Complex64::new(j1, 0.0)).norm() < 1e-14);
        assert!((r.residual.coeff(&yy_last) + Complex64::new(j1, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cluster_self_duality_swaps_couplings_in_bulk() {
        let r = cluster_self_duality(8, 0.4, 1.7).unwrap();
        assert!(r.boundary_only);
        assert_eq!(r.bulk_mismatch, 0.0);
        assert_eq!(r.residual_terms(), 4);
    }

    #[test]
    fn boundary_mask_sites() {
        assert_eq!(boundary_mask(6), 0b110011);
        assert_eq!(boundary_mask(3), 0b111);
    }
}
