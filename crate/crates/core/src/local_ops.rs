//! Arbitrary complex 2x2 site operators and their tensor-product strings.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Mul;

use num_complex::Complex64;

use crate::dense::DenseBackend;
use crate::error::{Error, Result};
use crate::pauli::{PauliKey, PauliOp, PauliString, PauliSum};

/// Default tolerance for commutator checks.
pub const COMMUTATOR_TOL: f64 = 1e-10;

/// Tolerance for `M * M^-1 = I` when a local gate carries an explicit inverse.
pub const INVERSE_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Row-major complex 2x2 matrix acting on one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalOp(pub [[Complex64; 2]; 2]);

impl LocalOp {
    pub const IDENTITY: LocalOp = LocalOp([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        LocalOp([[a, b], [c, d]])
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        Self::new(a, ZERO, ZERO, d)
    }

    pub fn pauli(op: PauliOp) -> Self {
        LocalOp(op.matrix())
    }

    /// The deformed flip `(0, lambda; 1/lambda, 0)`.
    pub fn deformed_x(lambda: Complex64) -> Self {
        Self::new(ZERO, lambda, lambda.inv(), ZERO)
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Inverse; singular when `|det|` is below `1e-300` relative to the entry scale.
    pub fn inverse(&self) -> Result<LocalOp> {
        let d = self.det();
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        if d.norm() <= 1e-300 * scale * scale || !d.norm().is_finite() {
            return Err(Error::Singular);
        }
        let m = &self.0;
        let inv = d.inv();
        Ok(LocalOp([[m[1][1] * inv, -m[0][1] * inv], [-m[1][0] * inv, m[0][0] * inv]]))
    }

    pub fn adjoint(&self) -> LocalOp {
        let m = &self.0;
        LocalOp([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn scale(&self, s: Complex64) -> LocalOp {
        let m = &self.0;
        LocalOp([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &LocalOp) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_diff(&self.adjoint()) <= tol
    }

    /// Coefficients `(c_I, c_X, c_Y, c_Z)` with `M = c_I I + c_X X + c_Y Y + c_Z Z`.
    pub fn pauli_coeffs(&self) -> [Complex64; 4] {
        let [[a, b], [c, d]] = self.0;
        let half = Complex64::new(0.5, 0.0);
        [(a + d) * half, (b + c) * half, I * (b - c) * half, (a - d) * half]
    }

    /// Rebuild from Pauli coefficients.
    pub fn from_pauli_coeffs(coeffs: [Complex64; 4]) -> LocalOp {
        let mut m = [[ZERO; 2]; 2];
        for (op, c) in PauliOp::ALL.iter().zip(coeffs) {
            let p = op.matrix();
            for r in 0..2 {
                for col in 0..2 {
                    m[r][col] += c * p[r][col];
                }
            }
        }
        LocalOp(m)
    }
}

impl Mul for LocalOp {
    type Output = LocalOp;
    fn mul(self, rhs: LocalOp) -> LocalOp {
        let (a, b) = (&self.0, &rhs.0);
        let mut m = [[ZERO; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        LocalOp(m)
    }
}

impl From<PauliOp> for LocalOp {
    fn from(op: PauliOp) -> Self {
        LocalOp::pauli(op)
    }
}

/// Tensor product of local operators over `L` sites times a global scale.
/// Unlisted sites carry the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorString {
    len: usize,
    sites: BTreeMap<usize, LocalOp>,
    scale: Complex64,
}

impl OperatorString {
    pub fn identity(len: usize) -> Result<Self> {
        if len == 0 || len > crate::pauli::MAX_SITES {
            return Err(Error::InvalidArgument(alloc::format!("invalid string length {len}")));
        }
        Ok(OperatorString { len, sites: BTreeMap::new(), scale: ONE })
    }

    pub fn from_sites<I>(len: usize, sites: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, LocalOp)>,
    {
        let mut s = Self::identity(len)?;
        for (site, op) in sites {
            s = s.with_site(site, op)?;
        }
        Ok(s)
    }

    /// Phase-carrying Pauli string as an operator string.
    pub fn from_pauli(p: &PauliString) -> OperatorString {
        let sites = (0..p.len()).filter(|&j| p.op(j) != PauliOp::I).map(|j| (j, LocalOp::pauli(p.op(j)))).collect();
        OperatorString { len: p.len(), sites, scale: p.phase().to_complex() }
    }

    /// Set (replace) the operator on `site`. Identity entries are not stored.
    pub fn with_site(mut self, site: usize, op: LocalOp) -> Result<Self> {
        if site >= self.len {
            return Err(Error::SiteOutOfRange { site, len: self.len });
        }
        if op.is_identity() {
            self.sites.remove(&site);
        } else {
            self.sites.insert(site, op);
        }
        Ok(self)
    }

    pub fn with_scale(mut self, scale: Complex64) -> Self {
        self.scale = scale;
        self
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    pub fn op(&self, site: usize) -> LocalOp {
        self.sites.get(&site).copied().unwrap_or(LocalOp::IDENTITY)
    }

    /// Non-identity sites in increasing order.
    pub fn sites(&self) -> impl Iterator<Item = (usize, &LocalOp)> {
        self.sites.iter().map(|(s, o)| (*s, o))
    }

    /// Site-wise product `self * other`.
    pub fn mul(&self, other: &OperatorString) -> Result<OperatorString> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { left: self.len, right: other.len });
        }
        let mut out = OperatorString { len: self.len, sites: BTreeMap::new(), scale: self.scale * other.scale };
        let all: Vec<usize> = self.sites.keys().chain(other.sites.keys()).copied().collect();
        for site in all {
            let p = self.op(site) * other.op(site);
            out = out.with_site(site, p)?;
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> OperatorString {
        OperatorString {
            len: self.len,
            sites: self.sites.iter().map(|(s, o)| (*s, o.adjoint())).collect(),
            scale: self.scale.conj(),
        }
    }

    pub fn inverse(&self) -> Result<OperatorString> {
        if self.scale.norm() == 0.0 {
            return Err(Error::Singular);
        }
        let mut sites = BTreeMap::new();
        for (s, o) in &self.sites {
            sites.insert(*s, o.inverse()?);
        }
        Ok(OperatorString { len: self.len, sites, scale: self.scale.inv() })
    }

    /// `m * self * m^-1`.
    pub fn conjugated_by(&self, m: &OperatorString) -> Result<OperatorString> {
        m.mul(self)?.mul(&m.inverse()?)
    }

    /// Pauli-basis expansion; at most `4^k` terms for `k` non-identity sites.
    pub fn expand(&self) -> PauliSum {
        let mut partial: Vec<(PauliKey, Complex64)> = vec![(PauliKey { z: 0, x: 0 }, self.scale)];
        for (&site, op) in &self.sites {
            let coeffs = op.pauli_coeffs();
            let mut next = Vec::with_capacity(partial.len() * 4);
            for (key, c) in &partial {
                for (p, pc) in PauliOp::ALL.iter().zip(coeffs) {
                    if pc == ZERO {
                        continue;
                    }
                    let (bx, bz) = p.bits();
                    let k = PauliKey { x: key.x | ((bx as u128) << site), z: key.z | ((bz as u128) << site) };
                    next.push((k, *c * pc));
                }
            }
            partial = next;
        }
        let len = self.len;
        PauliSum::from_terms(
            len,
            partial.into_iter().map(|(k, c)| {
                (PauliString::from_masks(len, k.x, k.z, crate::pauli::Phase::ONE).expect("in-range masks"), c)
            }),
        )
        .expect("length checked at construction")
    }
}

/// True iff `[a, b]` vanishes, judged on the Pauli expansion of the commutator.
pub fn commutator_is_zero(a: &OperatorString, b: &OperatorString, tol: f64) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    let (ea, eb) = (a.expand(), b.expand());
    let comm = ea.commutator(&eb)?;
    Ok(comm.max_abs_coeff() <= tol)
}

/// Pairwise commutation over a generator list.
pub fn all_commute(gens: &[OperatorString], tol: f64) -> Result<bool> {
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            if !commutator_is_zero(a, b, tol)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Operational independence: removing any one generator strictly enlarges the joint
/// `+1` eigenspace. Since fixed spaces only grow as generators are removed, checking
/// every leave-one-out subset covers all proper subsets.
///
/// Non-Hermitian generators have no group-theoretic notion of independence, so this
/// fixed-space criterion is the working definition.
pub fn independence_check(gens: &[OperatorString], tol: f64, backend: &DenseBackend) -> Result<bool> {
    let Some(first) = gens.first() else {
        return Ok(true);
    };
    let len = first.len();
    if let Some(g) = gens.iter().find(|g| g.len() != len) {
        return Err(Error::LengthMismatch { left: len, right: g.len() });
    }
    if gens.len() > len {
        return Err(Error::InvalidArgument(alloc::format!("{} generators on {len} sites", gens.len())));
    }
    backend.check_matrix_size(len)?;
    let full = backend.fixed_space_dim(gens, tol)?;
    for skip in 0..gens.len() {
        let subset: Vec<OperatorString> =
            gens.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, g)| g.clone()).collect();
        let dim = if subset.is_empty() { 1usize << len } else { backend.fixed_space_dim(&subset, tol)? };
        if dim <= full {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn deformed_flip_expansion() {
        // Solved by hand from M = c_X X + c_Y Y: b = c_X - i c_Y, c = c_X + i c_Y.
        let lam = 0.37;
        let m = LocalOp::deformed_x(c(lam, 0.0));
        let k = m.pauli_coeffs();
        assert!((k[0]).norm() < 1e-15 && k[3].norm() < 1e-15);
        assert!((k[1] - c((lam + 1.0 / lam) / 2.0, 0.0)).norm() < 1e-14);
        assert!((k[2] - c(0.0, (lam - 1.0 / lam) / 2.0)).norm() < 1e-14);
        assert!(LocalOp::from_pauli_coeffs(k).max_diff(&m) < 1e-14);
    }

    #[test]
    fn lambda_one_gives_cluster_stabilizer() {
        let g = OperatorString::from_sites(
            3,
            [(0, PauliOp::Z.into()), (1, LocalOp::deformed_x(c(1.0, 0.0))), (2, PauliOp::Z.into())],
        )
        .unwrap();
        let expected = PauliSum::from_string(PauliString::from_letters("ZXZ").unwrap(), c(1.0, 0.0)).unwrap();
        assert!(g.expand().approx_eq(&expected, 1e-15));
    }

    #[test]
    fn identity_expands_to_identity() {
        let g = OperatorString::identity(4).unwrap();
        assert_eq!(g.expand(), PauliSum::identity(4).unwrap());
    }

    #[test]
    fn inverse_and_singular() {
        let m = LocalOp::new(c(1.0, 0.5), c(2.0, 0.0), c(0.0, -1.0), c(3.0, 0.0));
        let inv = m.inverse().unwrap();
        assert!((m * inv).max_diff(&LocalOp::IDENTITY) < 1e-14);
        assert_eq!(LocalOp::real(1.0, 2.0, 2.0, 4.0).inverse(), Err(Error::Singular));
    }

    #[test]
    fn x_and_z_anticommute() {
        let x = OperatorString::from_sites(1, [(0, PauliOp::X.into())]).unwrap();
        let z = OperatorString::from_sites(1, [(0, PauliOp::Z.into())]).unwrap();
        assert!(!commutator_is_zero(&x, &z, COMMUTATOR_TOL).unwrap());
        let id = OperatorString::identity(1).unwrap();
        assert!(commutator_is_zero(&x, &id, COMMUTATOR_TOL).unwrap());
    }

    #[test]
    fn independence_of_z_generators() {
        let be = DenseBackend::default();
        let z1 = OperatorString::from_sites(2, [(0, PauliOp::Z.into())]).unwrap();
        let z2 = OperatorString::from_sites(2, [(1, PauliOp::Z.into())]).unwrap();
        assert!(independence_check(&[z1.clone(), z2], 1e-10, &be).unwrap());
        assert!(!independence_check(&[z1.clone(), z1], 1e-10, &be).unwrap());
    }

    #[test]
    fn from_pauli_keeps_phase() {
        let p: PauliString = "-iXZ".parse().unwrap();
        let o = OperatorString::from_pauli(&p);
        assert!(o.expand().approx_eq(&PauliSum::from_string(p, c(1.0, 0.0)).unwrap(), 0.0));
    }
}
