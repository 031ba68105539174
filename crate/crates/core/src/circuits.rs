//! Gate sequences and their conjugation action on Pauli sums.
//!
//! A [`Circuit`] lists gates in the order they are applied to states, so the
//! circuit operator is `T = G_m ... G_1`. [`conjugate`] returns `T^-1 h T`; for a
//! unitary circuit this is `T^dagger h T`, the Heisenberg-picture image of `h`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::local_ops::{LocalOp, INVERSE_TOL};
use crate::math;
use crate::pauli::{PauliKey, PauliOp, PauliString, PauliSum, Phase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

impl Boundary {
    /// Right neighbour of `site`, if there is one.
    pub fn next(self, site: usize, len: usize) -> Option<usize> {
        match self {
            _ if site + 1 < len => Some(site + 1),
            Boundary::Periodic => Some(0),
            Boundary::Open => None,
        }
    }

    /// Left neighbour of `site`, if there is one.
    pub fn prev(self, site: usize, len: usize) -> Option<usize> {
        match self {
            _ if site > 0 => Some(site - 1),
            Boundary::Periodic => Some(len - 1),
            Boundary::Open => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    Cnot {
        control: usize,
        target: usize,
    },
    Hadamard {
        site: usize,
    },
    /// Controlled phase; symmetric in `a` and `b`.
    Cz {
        a: usize,
        b: usize,
    },
    Local {
        site: usize,
        op: LocalOp,
        inverse: LocalOp,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    kind: GateKind,
    unitary: bool,
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Result<Gate> {
        if control == target {
            return Err(Error::InvalidArgument("CNOT control equals target".into()));
        }
        Ok(Gate { kind: GateKind::Cnot { control, target }, unitary: true })
    }

    pub fn hadamard(site: usize) -> Gate {
        Gate { kind: GateKind::Hadamard { site }, unitary: true }
    }

    pub fn cz(a: usize, b: usize) -> Result<Gate> {
        if a == b {
            return Err(Error::InvalidArgument("CZ on a single site".into()));
        }
        Ok(Gate { kind: GateKind::Cz { a: a.min(b), b: a.max(b) }, unitary: true })
    }

    /// Local gate with an explicit inverse; `op * inverse` must be the identity to `1e-12`
    /// relative to the entry scale.
    pub fn local(site: usize, op: LocalOp, inverse: LocalOp) -> Result<Gate> {
        let scale = (op.max_abs() * inverse.max_abs()).max(1.0);
        if (op * inverse).max_diff(&LocalOp::IDENTITY) > INVERSE_TOL * scale
            || (inverse * op).max_diff(&LocalOp::IDENTITY) > INVERSE_TOL * scale
        {
            return Err(Error::Singular);
        }
        let unitary = (op.adjoint() * op).max_diff(&LocalOp::IDENTITY) <= INVERSE_TOL;
        Ok(Gate { kind: GateKind::Local { site, op, inverse }, unitary })
    }

    /// Local gate whose inverse is computed here.
    pub fn local_auto(site: usize, op: LocalOp) -> Result<Gate> {
        let inv = op.inverse()?;
        Self::local(site, op, inv)
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn sites(&self) -> (usize, Option<usize>) {
        match self.kind {
            GateKind::Cnot { control, target } => (control, Some(target)),
            GateKind::Hadamard { site } | GateKind::Local { site, .. } => (site, None),
            GateKind::Cz { a, b } => (a, Some(b)),
        }
    }

    pub fn inverse(&self) -> Gate {
        match self.kind {
            GateKind::Local { site, op, inverse } => {
                Gate { kind: GateKind::Local { site, op: inverse, inverse: op }, unitary: self.unitary }
            }
            _ => *self,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    len: usize,
    gates: Vec<Gate>,
    boundary: Boundary,
}

impl Circuit {
    pub fn new(len: usize, boundary: Boundary) -> Result<Circuit> {
        if len == 0 || len > crate::pauli::MAX_SITES {
            return Err(Error::InvalidArgument(alloc::format!("invalid circuit length {len}")));
        }
        Ok(Circuit { len, gates: Vec::new(), boundary })
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let (a, b) = gate.sites();
        for s in core::iter::once(a).chain(b) {
            if s >= self.len {
                return Err(Error::SiteOutOfRange { site: s, len: self.len });
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn with(mut self, gate: Gate) -> Result<Circuit> {
        self.push(gate)?;
        Ok(self)
    }

    /// `other` applied after `self`.
    pub fn then(mut self, other: &Circuit) -> Result<Circuit> {
        if other.len != self.len {
            return Err(Error::LengthMismatch { left: self.len, right: other.len });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn is_unitary(&self) -> bool {
        self.gates.iter().all(Gate::is_unitary)
    }

    /// Circuit for `T^-1`: reversed order, each gate inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit { len: self.len, gates: self.gates.iter().rev().map(Gate::inverse).collect(), boundary: self.boundary }
    }
}

/// `T^-1 h T` for the circuit operator `T = G_m ... G_1`.
pub fn conjugate(c: &Circuit, h: &PauliSum) -> Result<PauliSum> {
    if c.len() != h.len() {
        return Err(Error::LengthMismatch { left: c.len(), right: h.len() });
    }
    let mut cur = h.clone();
    for g in c.gates().iter().rev() {
        cur = conjugate_gate(g, &cur)?;
    }
    Ok(cur)
}

/// `G^-1 h G` for a single gate.
pub fn conjugate_gate(g: &Gate, h: &PauliSum) -> Result<PauliSum> {
    let len = h.len();
    match g.kind {
        GateKind::Local { site, op, inverse } => {
            // images of I, X, Y, Z under M^-1 (.) M, in Pauli coefficients
            let images: Vec<[Complex64; 4]> =
                PauliOp::ALL.iter().map(|p| (inverse * LocalOp::pauli(*p) * op).pauli_coeffs()).collect();
            let bit = 1u128 << site;
            let mut out = PauliSum::zero(len)?;
            for (p, c) in h.iter() {
                let local = p.op(site) as usize;
                let rest = PauliKey { x: p.x_mask() & !bit, z: p.z_mask() & !bit };
                for (q, k) in PauliOp::ALL.iter().zip(images[local]) {
                    if k == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let (bx, bz) = q.bits();
                    let s = PauliString::from_masks(
                        len,
                        rest.x | ((bx as u128) << site),
                        rest.z | ((bz as u128) << site),
                        Phase::ONE,
                    )?;
                    out.add_term(&s, c * k)?;
                }
            }
            Ok(out)
        }
        _ => {
            let mut out = PauliSum::zero(len)?;
            for (p, c) in h.iter() {
                out.add_term(&clifford_image(g, &p)?, c)?;
            }
            Ok(out)
        }
    }
}

/// `G^dagger p G` for a Clifford gate, exact in the phase.
fn clifford_image(g: &Gate, p: &PauliString) -> Result<PauliString> {
    let len = p.len();
    let (a, b) = g.sites();
    let touched: Vec<usize> = core::iter::once(a).chain(b).collect();
    let mut mask = 0u128;
    for s in &touched {
        mask |= 1u128 << s;
    }
    let mut out = PauliString::from_masks(len, p.x_mask() & !mask, p.z_mask() & !mask, p.phase())?;
    for &s in &touched {
        let op = p.op(s);
        let (x, z) = op.bits();
        // sigma = i^(xz) X^x Z^z on site s
        let mut factor = PauliString::identity(len)?.with_phase(if x && z { Phase::I } else { Phase::ONE });
        if x {
            factor = factor.mul(&generator_image(g, len, s, PauliOp::X)?)?;
        }
        if z {
            factor = factor.mul(&generator_image(g, len, s, PauliOp::Z)?)?;
        }
        out = out.mul(&factor)?;
    }
    Ok(out)
}

fn generator_image(g: &Gate, len: usize, site: usize, op: PauliOp) -> Result<PauliString> {
    use PauliOp::{X, Z};
    let one = |s: usize, o: PauliOp| PauliString::single(len, s, o);
    let two = |s: usize, o: PauliOp, t: usize, q: PauliOp| PauliString::from_ops(len, &[(s, o), (t, q)]);
    match (g.kind, op) {
        (GateKind::Hadamard { .. }, X) => one(site, Z),
        (GateKind::Hadamard { .. }, _) => one(site, X),
        (GateKind::Cnot { control, target }, X) if site == control => two(control, X, target, X),
        (GateKind::Cnot { control, target }, Z) if site == target => two(control, Z, target, Z),
        (GateKind::Cnot { .. }, o) => one(site, o),
        (GateKind::Cz { a, b }, X) => {
            let other = if site == a { b } else { a };
            two(site, X, other, Z)
        }
        (GateKind::Cz { .. }, o) => one(site, o),
        (GateKind::Local { .. }, _) => unreachable!("local gates are expanded, not rewritten"),
    }
}

/// CNOT staircase `CNOT(1,2), CNOT(2,3), ..., CNOT(L-1,L)` followed by Hadamards on
/// every site. Conjugation maps `X_n -> Z_1 ... Z_n` and `Z_n -> X_n X_{n+1}` with
/// `X_{L+1} = 1` (1-based sites).
pub fn fig2_staircase(len: usize) -> Result<Circuit> {
    if len < 2 {
        return Err(Error::InvalidArgument("staircase needs at least 2 sites".into()));
    }
    let mut c = Circuit::new(len, Boundary::Open)?;
    for k in 0..len - 1 {
        c.push(Gate::cnot(k, k + 1)?)?;
    }
    for k in 0..len {
        c.push(Gate::hadamard(k))?;
    }
    Ok(c)
}

pub fn hadamard_layer(len: usize, boundary: Boundary) -> Result<Circuit> {
    let mut c = Circuit::new(len, boundary)?;
    for k in 0..len {
        c.push(Gate::hadamard(k))?;
    }
    Ok(c)
}

/// CZ on every neighbouring pair, wrapping when periodic. Conjugation fixes `Z_k` and
/// sends `X_k -> Z_{k-1} X_k Z_{k+1}`. For `L = 2` the wrapped pair coincides with the
/// open one and is not repeated.
pub fn cz_layer(len: usize, boundary: Boundary) -> Result<Circuit> {
    if len < 2 {
        return Err(Error::InvalidArgument("CZ layer needs at least 2 sites".into()));
    }
    let mut c = Circuit::new(len, boundary)?;
    for k in 0..len {
        if let Some(n) = boundary.next(k, len) {
            if len == 2 && n == 0 {
                continue;
            }
            c.push(Gate::cz(k, n)?)?;
        }
    }
    Ok(c)
}

/// Hadamard, CZ and Hadamard layers. In the bulk this swaps the three-body and field
/// terms of the cluster Hamiltonian, `X_{k-1} Z_k X_{k+1} <-> Z_k`.
pub fn cluster_self_dual(len: usize, boundary: Boundary) -> Result<Circuit> {
    hadamard_layer(len, boundary)?.then(&cz_layer(len, boundary)?)?.then(&hadamard_layer(len, boundary)?)
}

/// `diag(lambda^{1/2}, lambda^{-1/2})` with the principal complex square root.
pub fn lambda_scaling(lambda: f64) -> Result<(LocalOp, LocalOp)> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::Singular);
    }
    let r = Complex64::new(lambda, 0.0).sqrt();
    Ok((LocalOp::diag(r, r.inv()), LocalOp::diag(r.inv(), r)))
}

/// `T = prod_j diag(lambda^{1/2}, lambda^{-1/2})_j prod_k U_{k,k+1}`: periodic CZ layer
/// first, then the non-unitary scaling on every site.
pub fn lemma1_t(len: usize, lambda: f64) -> Result<Circuit> {
    let (d, dinv) = lambda_scaling(lambda)?;
    let mut c = cz_layer(len, Boundary::Periodic)?;
    if !d.is_identity() {
        for j in 0..len {
            c.push(Gate::local(j, d, dinv)?)?;
        }
    }
    Ok(c)
}

/// Unitary `U` with `U^dagger (B, -J; -J, -B) U = diag(r, -r)`, `r = sqrt(B^2 + J^2)`, so
/// the lower eigenvalue sits on `|1>`. Returns `(U, U^dagger)`.
pub fn remark1_rotation(j: f64, b: f64) -> Result<(LocalOp, LocalOp)> {
    if j == 0.0 && b == 0.0 {
        return Err(Error::DegenerateParameters("J = B = 0 has no preferred eigenbasis".into()));
    }
    // (B, -J; -J, -B) = r (cos t Z + sin t X) with t = atan2(-J, B)
    let t = libm::atan2(-j, b);
    let (c, s) = (libm::cos(t / 2.0), libm::sin(t / 2.0));
    let u = LocalOp::real(c, -s, s, c);
    Ok((u, u.adjoint()))
}

/// `R = prod_k U_{k,k+1} prod_j U_j`: unitary rotations first, then the periodic CZ layer.
pub fn remark1_r(len: usize, j: f64, b: f64) -> Result<Circuit> {
    let (u, udag) = remark1_rotation(j, b)?;
    let mut c = Circuit::new(len, Boundary::Periodic)?;
    for site in 0..len {
        c.push(Gate::local(site, u, udag)?)?;
    }
    c.then(&cz_layer(len, Boundary::Periodic)?)
}

/// Single-site block `(B, -J/lambda; -J lambda, -B)` of the transformed ZXZ Hamiltonian.
pub fn lemma1_block(j: f64, b: f64, lambda: f64) -> LocalOp {
    LocalOp::real(b, -j / lambda, -j * lambda, -b)
}

/// `sqrt(B^2 + J^2)`.
pub(crate) fn block_radius(j: f64, b: f64) -> f64 {
    math::sqrt(b * b + j * j)
}
