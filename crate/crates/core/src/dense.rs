//! Desk-scale dense realization of operators and states.
//!
//! Basis convention: site `k` of an `L`-site system is bit `L-1-k` of the basis
//! index, so site 0 is the leftmost Kronecker factor and `|b_0 b_1 ... b_{L-1}>`
//! reads left to right. Amplitudes use `|0>` for Z = +1.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::circuits::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::local_ops::{LocalOp, OperatorString};
use crate::math;
use crate::pauli::{PauliString, PauliSum};

/// Largest `L` for which full `2^L x 2^L` matrices are built.
pub const DEFAULT_MAX_FULL_SITES: usize = 12;
/// Largest `L` for state vectors and the iterative extremal solver.
pub const DEFAULT_MAX_STATE_SITES: usize = 14;
/// Eigenvalues closer than this to the ground energy count as degenerate with it.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Reduced-density-matrix eigenvalues below this are treated as zero in `p log p`.
pub const ENTROPY_CLAMP: f64 = 1e-12;
/// Null-space tolerance for fixed-space extraction, relative to `max(1, ||Q||)`.
pub const NULL_SPACE_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Size limits for the dense oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenseBackend {
    pub max_full_sites: usize,
    pub max_state_sites: usize,
}

impl Default for DenseBackend {
    fn default() -> Self {
        DenseBackend { max_full_sites: DEFAULT_MAX_FULL_SITES, max_state_sites: DEFAULT_MAX_STATE_SITES }
    }
}

/// `2^L x 2^L` complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    sites: usize,
    matrix: DMatrix<Complex64>,
}

/// `2^L` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    sites: usize,
    amps: DVector<Complex64>,
    normalized: bool,
}

/// Sorted spectrum with degeneracy-aware gap.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Ascending. The iterative path reports only the low Ritz values it converged.
    pub eigenvalues: Vec<f64>,
    pub ground_energy: f64,
    /// Distance to the first eigenvalue above `E0 + DEGENERACY_TOL`.
    pub gap: Option<f64>,
    pub ground_degeneracy: usize,
}

impl SpectrumResult {
    pub fn from_sorted(eigenvalues: Vec<f64>) -> Self {
        let e0 = eigenvalues[0];
        let ground_degeneracy = eigenvalues.iter().take_while(|e| **e <= e0 + DEGENERACY_TOL).count();
        let gap = eigenvalues.get(ground_degeneracy).map(|e| e - e0);
        SpectrumResult { eigenvalues, ground_energy: e0, gap, ground_degeneracy }
    }
}

#[inline]
fn index_bit(len: usize, site: usize) -> usize {
    1usize << (len - 1 - site)
}

/// Site mask (bit j = site j) to basis-index mask (bit L-1-j = site j).
#[inline]
fn index_mask(mask: u128, len: usize) -> usize {
    (mask.reverse_bits() >> (128 - len)) as usize
}

fn phase_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => ONE,
        1 => Complex64::new(0.0, 1.0),
        2 => -ONE,
        _ => Complex64::new(0.0, -1.0),
    }
}

impl DenseBackend {
    pub fn with_limits(max_full_sites: usize, max_state_sites: usize) -> Self {
        DenseBackend { max_full_sites, max_state_sites }
    }

    pub fn check_matrix_size(&self, sites: usize) -> Result<()> {
        if sites > self.max_full_sites || sites >= usize::BITS as usize / 2 {
            return Err(Error::SizeOverflow { sites, limit: self.max_full_sites });
        }
        Ok(())
    }

    pub fn check_state_size(&self, sites: usize) -> Result<()> {
        if sites > self.max_state_sites || sites >= usize::BITS as usize - 2 {
            return Err(Error::SizeOverflow { sites, limit: self.max_state_sites });
        }
        Ok(())
    }

    pub fn pauli_sum(&self, h: &PauliSum) -> Result<DenseOperator> {
        let l = h.len();
        self.check_matrix_size(l)?;
        let dim = 1usize << l;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (p, c) in h.iter() {
            let xm = index_mask(p.x_mask(), l);
            let zm = index_mask(p.z_mask(), l);
            let base = c * phase_pow((p.x_mask() & p.z_mask()).count_ones());
            for col in 0..dim {
                let v = if (zm & col).count_ones() % 2 == 1 { -base } else { base };
                m[(col ^ xm, col)] += v;
            }
        }
        Ok(DenseOperator { sites: l, matrix: m })
    }

    pub fn pauli_string(&self, p: &PauliString) -> Result<DenseOperator> {
        let h = PauliSum::from_string(*p, ONE)?;
        self.pauli_sum(&h)
    }

    /// Kronecker product of the local factors.
    pub fn operator_string(&self, op: &OperatorString) -> Result<DenseOperator> {
        let l = op.len();
        self.check_matrix_size(l)?;
        let dim = 1usize << l;
        let factors: Vec<(usize, LocalOp)> = op.sites().map(|(s, o)| (index_bit(l, s), *o)).collect();
        let mut support = 0usize;
        for (b, _) in &factors {
            support |= *b;
        }
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for col in 0..dim {
            // only rows agreeing with col outside the support are reachable
            let rest = col & !support;
            let mut sub = support;
            loop {
                let row = rest | sub;
                let mut v = op.scale();
                for (bit, o) in &factors {
                    let r = (row & bit != 0) as usize;
                    let c = (col & bit != 0) as usize;
                    v *= o.0[r][c];
                    if v == ZERO {
                        break;
                    }
                }
                if v != ZERO {
                    m[(row, col)] = v;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & support;
            }
        }
        Ok(DenseOperator { sites: l, matrix: m })
    }

    /// Matrix of the circuit as applied to states (`G_m ... G_1`).
    pub fn circuit(&self, c: &Circuit) -> Result<DenseOperator> {
        let l = c.len();
        self.check_matrix_size(l)?;
        let dim = 1usize << l;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for col in 0..dim {
            let s = self.apply(c, &DenseState::basis(l, col)?)?;
            m.set_column(col, &s.amps);
        }
        Ok(DenseOperator { sites: l, matrix: m })
    }

    /// Apply the circuit gate by gate. The result is not renormalized.
    pub fn apply(&self, c: &Circuit, s: &DenseState) -> Result<DenseState> {
        if c.len() != s.sites {
            return Err(Error::LengthMismatch { left: c.len(), right: s.sites });
        }
        self.check_state_size(s.sites)?;
        let mut amps = s.amps.clone();
        for g in c.gates() {
            apply_gate(g, s.sites, amps.as_mut_slice());
        }
        let unitary = c.is_unitary();
        Ok(DenseState { sites: s.sites, amps, normalized: s.normalized && unitary })
    }

    pub fn apply_pauli_sum(&self, h: &PauliSum, s: &DenseState) -> Result<DenseState> {
        if h.len() != s.sites {
            return Err(Error::LengthMismatch { left: h.len(), right: s.sites });
        }
        self.check_state_size(s.sites)?;
        let mut out = DVector::<Complex64>::zeros(s.amps.len());
        apply_pauli_sum_into(h, s.amps.as_slice(), out.as_mut_slice());
        Ok(DenseState { sites: s.sites, amps: out, normalized: false })
    }

    pub fn apply_operator_string(&self, op: &OperatorString, s: &DenseState) -> Result<DenseState> {
        if op.len() != s.sites {
            return Err(Error::LengthMismatch { left: op.len(), right: s.sites });
        }
        self.check_state_size(s.sites)?;
        let mut amps = s.amps.clone();
        for (site, o) in op.sites() {
            apply_local(o, index_bit(s.sites, site), amps.as_mut_slice());
        }
        amps *= op.scale();
        Ok(DenseState { sites: s.sites, amps, normalized: false })
    }

    /// Full sorted spectrum of a Hermitian sum.
    pub fn spectrum(&self, h: &PauliSum) -> Result<SpectrumResult> {
        if !h.is_hermitian(1e-12) {
            return Err(Error::NotHermitian);
        }
        let m = self.pauli_sum(h)?;
        Ok(SpectrumResult::from_sorted(hermitian_eigenvalues(&m.matrix)))
    }

    /// Ground energy, spectrum and a normalized ground state (arbitrary global phase).
    ///
    /// Full diagonalization up to `max_full_sites`, Lanczos above that up to
    /// `max_state_sites`.
    pub fn ground(&self, h: &PauliSum) -> Result<(SpectrumResult, DenseState)> {
        if !h.is_hermitian(1e-12) {
            return Err(Error::NotHermitian);
        }
        let l = h.len();
        if l <= self.max_full_sites {
            let m = self.pauli_sum(h)?;
            let (vals, amps) = lowest_eigenpair(&m.matrix);
            let state = DenseState { sites: l, amps, normalized: true };
            return Ok((SpectrumResult::from_sorted(vals), state));
        }
        self.check_state_size(l)?;
        self.ground_iterative(h)
    }

    /// Lanczos with full reorthogonalization, matrix-free on the Pauli sum.
    pub fn ground_iterative(&self, h: &PauliSum) -> Result<(SpectrumResult, DenseState)> {
        if !h.is_hermitian(1e-12) {
            return Err(Error::NotHermitian);
        }
        let l = h.len();
        self.check_state_size(l)?;
        let (vals, v) = lanczos_lowest(h)?;
        Ok((SpectrumResult::from_sorted(vals), DenseState { sites: l, amps: v, normalized: true }))
    }

    /// Positive semidefinite `Q = sum_k (g_k - 1)^dagger (g_k - 1)` whose null space is the
    /// joint `+1` fixed space.
    pub fn fixed_space_operator(&self, gens: &[OperatorString]) -> Result<DMatrix<Complex64>> {
        let l = gens.first().map(|g| g.len()).ok_or_else(|| Error::InvalidArgument("no generators".into()))?;
        self.check_matrix_size(l)?;
        let dim = 1usize << l;
        let mut q = DMatrix::<Complex64>::zeros(dim, dim);
        for g in gens {
            if g.len() != l {
                return Err(Error::LengthMismatch { left: l, right: g.len() });
            }
            let gg = self.operator_string(&g.adjoint().mul(g)?)?.matrix;
            let gm = self.operator_string(g)?.matrix;
            q += gg - &gm - gm.adjoint();
            for i in 0..dim {
                q[(i, i)] += ONE;
            }
        }
        Ok(q)
    }

    /// Dimension of the joint `+1` eigenspace and the lowest eigenvector of `Q`.
    pub fn fixed_space(&self, gens: &[OperatorString], tol: f64) -> Result<(usize, DenseState)> {
        let q = self.fixed_space_operator(gens)?;
        let l = gens[0].len();
        let (vals, amps) = lowest_eigenpair(&q);
        let top = vals.last().copied().unwrap_or(0.0).max(1.0);
        let dim = vals.iter().filter(|v| **v <= tol * top).count();
        Ok((dim, DenseState { sites: l, amps, normalized: true }))
    }

    pub fn fixed_space_dim(&self, gens: &[OperatorString], tol: f64) -> Result<usize> {
        Ok(self.fixed_space(gens, tol)?.0)
    }

    /// Von Neumann entropy (bits) of the reduced state on `sites`.
    pub fn local_entropy(&self, s: &DenseState, sites: &[usize]) -> Result<f64> {
        let rho = self.reduced_density_matrix(s, sites)?;
        let vals = hermitian_eigenvalues(&rho);
        Ok(vals.iter().filter(|p| **p > ENTROPY_CLAMP).map(|p| -p * math::log2(*p)).sum::<f64>().max(0.0))
    }

    /// `rho_A = Tr_B |psi><psi|` for the (sorted, distinct) subset `A = sites`.
    pub fn reduced_density_matrix(&self, s: &DenseState, sites: &[usize]) -> Result<DMatrix<Complex64>> {
        let l = s.sites;
        let mut sub: Vec<usize> = sites.to_vec();
        sub.sort_unstable();
        sub.dedup();
        if sub.is_empty() || sub.len() >= l {
            return Err(Error::InvalidArgument("subsystem must be proper and nonempty".into()));
        }
        if let Some(&bad) = sub.iter().find(|&&j| j >= l) {
            return Err(Error::SiteOutOfRange { site: bad, len: l });
        }
        let norm2 = s.norm_sqr();
        if norm2 == 0.0 {
            return Err(Error::Unnormalized(0.0));
        }
        let env: Vec<usize> = (0..l).filter(|j| !sub.contains(j)).collect();
        let da = 1usize << sub.len();
        let de = 1usize << env.len();
        let mut psi = DMatrix::<Complex64>::zeros(da, de);
        for idx in 0..s.amps.len() {
            let a = gather(idx, l, &sub);
            let e = gather(idx, l, &env);
            psi[(a, e)] = s.amps[idx];
        }
        let rho = &psi * psi.adjoint() / Complex64::new(norm2, 0.0);
        Ok(rho)
    }
}

/// Extract the bits of `idx` belonging to `sites` (in order, first site most significant).
fn gather(idx: usize, len: usize, sites: &[usize]) -> usize {
    sites.iter().fold(0usize, |acc, &j| (acc << 1) | ((idx & index_bit(len, j) != 0) as usize))
}

/// Sorted eigenpairs of a Hermitian matrix; uses the real solver when the matrix is real.
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let n = m.nrows();
    let is_real = m.iter().all(|c| c.im == 0.0);
    let (vals, vecs): (Vec<f64>, DMatrix<Complex64>) = if is_real {
        let mr = DMatrix::<f64>::from_fn(n, n, |i, j| 0.5 * (m[(i, j)].re + m[(j, i)].re));
        let e = SymmetricEigen::new(mr);
        (e.eigenvalues.iter().copied().collect(), e.eigenvectors.map(|x| Complex64::new(x, 0.0)))
    } else {
        let mh = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let e = SymmetricEigen::new(mh);
        (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| vals[*a].total_cmp(&vals[*b]));
    let sorted_vals = order.iter().map(|i| vals[*i]).collect();
    let sorted_vecs = DMatrix::from_fn(n, n, |r, c| vecs[(r, order[c])]);
    (sorted_vals, sorted_vecs)
}

/// Sorted eigenvalues only.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let n = m.nrows();
    let mut vals: Vec<f64> = if m.iter().all(|c| c.im == 0.0) {
        let mr = DMatrix::<f64>::from_fn(n, n, |i, j| 0.5 * (m[(i, j)].re + m[(j, i)].re));
        mr.symmetric_eigenvalues().iter().copied().collect()
    } else {
        let mh = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
        mh.symmetric_eigenvalues().iter().copied().collect()
    };
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// Sorted eigenvalues and a normalized eigenvector of the lowest one. The vector comes
/// from shifted inverse iteration, which is much cheaper than accumulating all
/// eigenvectors; falls back to the full decomposition if it stalls.
pub(crate) fn lowest_eigenpair(m: &DMatrix<Complex64>) -> (Vec<f64>, DVector<Complex64>) {
    let n = m.nrows();
    let vals = hermitian_eigenvalues(m);
    let scale = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let e0 = vals[0];
    let shift = e0 - 1e-9 * scale;
    let mut shifted = m.clone();
    for i in 0..n {
        shifted[(i, i)] -= Complex64::new(shift, 0.0);
    }
    let lu = shifted.lu();
    let mut v =
        DVector::<Complex64>::from_fn(n, |i, _| Complex64::new(1.0 + 0.37 * libm::sin(1.3 * i as f64 + 0.1), 0.0));
    for _ in 0..30 {
        let Some(next) = lu.solve(&v) else { break };
        let norm = next.norm();
        if !norm.is_finite() || norm == 0.0 {
            break;
        }
        v = next / Complex64::new(norm, 0.0);
        let residual = (m * &v - &v * Complex64::new(e0, 0.0)).norm();
        if residual <= 1e-12 * scale {
            return (vals, v);
        }
    }
    let (vals, vecs) = hermitian_eigen(m);
    (vals, vecs.column(0).into_owned())
}

fn apply_pauli_sum_into(h: &PauliSum, input: &[Complex64], out: &mut [Complex64]) {
    let l = h.len();
    for (p, c) in h.iter() {
        let xm = index_mask(p.x_mask(), l);
        let zm = index_mask(p.z_mask(), l);
        let base = c * phase_pow((p.x_mask() & p.z_mask()).count_ones());
        for (col, a) in input.iter().enumerate() {
            let v = if (zm & col).count_ones() % 2 == 1 { -base } else { base };
            out[col ^ xm] += v * a;
        }
    }
}

fn apply_local(o: &LocalOp, bit: usize, amps: &mut [Complex64]) {
    for i in 0..amps.len() {
        if i & bit == 0 {
            let j = i | bit;
            let [a, b] = o.apply([amps[i], amps[j]]);
            amps[i] = a;
            amps[j] = b;
        }
    }
}

pub(crate) fn apply_gate(g: &Gate, len: usize, amps: &mut [Complex64]) {
    match *g.kind() {
        GateKind::Cnot { control, target } => {
            let (cb, tb) = (index_bit(len, control), index_bit(len, target));
            for i in 0..amps.len() {
                if i & cb != 0 && i & tb == 0 {
                    amps.swap(i, i | tb);
                }
            }
        }
        GateKind::Hadamard { site } => {
            let b = index_bit(len, site);
            let h = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
            for i in 0..amps.len() {
                if i & b == 0 {
                    let (x, y) = (amps[i], amps[i | b]);
                    amps[i] = (x + y) * h;
                    amps[i | b] = (x - y) * h;
                }
            }
        }
        GateKind::Cz { a, b } => {
            let m = index_bit(len, a) | index_bit(len, b);
            for (i, v) in amps.iter_mut().enumerate() {
                if i & m == m {
                    *v = -*v;
                }
            }
        }
        GateKind::Local { site, ref op, .. } => apply_local(op, index_bit(len, site), amps),
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn lanczos_lowest(h: &PauliSum) -> Result<(Vec<f64>, DVector<Complex64>)> {
    let dim = 1usize << h.len();
    let max_iter = dim.min(400);
    // deterministic, generic start vector
    let mut v0: Vec<Complex64> =
        (0..dim).map(|i| Complex64::new(1.0 + 0.37 * libm::sin(1.3 * i as f64 + 0.1), 0.0)).collect();
    let n0 = math::sqrt(dot(&v0, &v0).re);
    v0.iter_mut().for_each(|x| *x /= n0);

    let mut basis: Vec<Vec<Complex64>> = vec![v0];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut prev: Option<(Vec<f64>, DMatrix<f64>)> = None;
    for it in 0..max_iter {
        let mut w = vec![ZERO; dim];
        apply_pauli_sum_into(h, &basis[it], &mut w);
        let alpha = dot(&basis[it], &w).re;
        alphas.push(alpha);
        // two passes of full reorthogonalization
        for _ in 0..2 {
            for q in &basis {
                let proj = dot(q, &w);
                w.iter_mut().zip(q).for_each(|(x, y)| *x -= proj * y);
            }
        }
        let beta = math::sqrt(dot(&w, &w).re);
        let k = alphas.len();
        let check = k.is_multiple_of(5) || beta < 1e-12 || it + 1 == max_iter;
        if check {
            let t = DMatrix::<f64>::from_fn(k, k, |i, j| {
                if i == j {
                    alphas[i]
                } else if i + 1 == j || j + 1 == i {
                    betas[i.min(j)]
                } else {
                    0.0
                }
            });
            let e = SymmetricEigen::new(t);
            let mut order: Vec<usize> = (0..k).collect();
            order.sort_by(|a, b| e.eigenvalues[*a].total_cmp(&e.eigenvalues[*b]));
            let vals: Vec<f64> = order.iter().map(|i| e.eigenvalues[*i]).collect();
            let vecs = DMatrix::from_fn(k, k, |r, c| e.eigenvectors[(r, order[c])]);
            let resid = (beta * vecs[(k - 1, 0)]).abs();
            let scale = vals.iter().map(|x| x.abs()).fold(1.0, f64::max);
            if resid <= 1e-11 * scale || beta < 1e-12 {
                prev = Some((vals, vecs));
                break;
            }
            prev = Some((vals, vecs));
            if it + 1 == max_iter {
                return Err(Error::NoConvergence(max_iter));
            }
        }
        if beta < 1e-12 {
            break;
        }
        betas.push(beta);
        w.iter_mut().for_each(|x| *x /= beta);
        basis.push(w);
    }
    let (vals, vecs) = prev.ok_or(Error::NoConvergence(0))?;
    let k = vals.len();
    let mut ground = vec![ZERO; dim];
    for (j, q) in basis.iter().take(k).enumerate() {
        let y = vecs[(j, 0)];
        ground.iter_mut().zip(q).for_each(|(g, x)| *g += x * y);
    }
    let n = math::sqrt(dot(&ground, &ground).re);
    ground.iter_mut().for_each(|x| *x /= n);
    let low: Vec<f64> = vals.into_iter().take(4).collect();
    Ok((low, DVector::from_vec(ground)))
}

impl DenseOperator {
    pub fn from_matrix(sites: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = 1usize << sites;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidArgument("matrix dimension is not 2^L".into()));
        }
        Ok(DenseOperator { sites, matrix })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn max_diff(&self, other: &DenseOperator) -> f64 {
        (&self.matrix - &other.matrix).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.matrix - self.matrix.adjoint()).iter().all(|c| c.norm() <= tol)
    }

    pub fn apply(&self, s: &DenseState) -> Result<DenseState> {
        if s.sites != self.sites {
            return Err(Error::LengthMismatch { left: self.sites, right: s.sites });
        }
        Ok(DenseState { sites: s.sites, amps: &self.matrix * &s.amps, normalized: false })
    }
}

impl DenseState {
    pub fn from_amplitudes(sites: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << sites {
            return Err(Error::InvalidArgument("amplitude count is not 2^L".into()));
        }
        let mut s = DenseState { sites, amps: DVector::from_vec(amps), normalized: false };
        s.normalized = crate::math::abs(s.norm() - 1.0) <= 1e-12;
        Ok(s)
    }

    /// Computational basis vector `|index>`.
    pub fn basis(sites: usize, index: usize) -> Result<Self> {
        let dim = 1usize << sites;
        if index >= dim {
            return Err(Error::InvalidArgument("basis index out of range".into()));
        }
        let mut amps = DVector::zeros(dim);
        amps[index] = ONE;
        Ok(DenseState { sites, amps, normalized: true })
    }

    /// `|+>^{⊗L}`.
    pub fn plus(sites: usize) -> Self {
        let dim = 1usize << sites;
        let a = Complex64::new(1.0 / math::sqrt(dim as f64), 0.0);
        DenseState { sites, amps: DVector::from_element(dim, a), normalized: true }
    }

    /// `|1>^{⊗L}`.
    pub fn all_ones(sites: usize) -> Self {
        Self::basis(sites, (1usize << sites) - 1).expect("in range")
    }

    /// Product state from per-site amplitude pairs.
    pub fn product(factors: &[[Complex64; 2]]) -> Self {
        let l = factors.len();
        let dim = 1usize << l;
        let amps = DVector::from_fn(dim, |idx, _| {
            factors.iter().enumerate().fold(ONE, |acc, (k, f)| acc * f[(idx & index_bit(l, k) != 0) as usize])
        });
        let mut s = DenseState { sites: l, amps, normalized: false };
        s.normalized = crate::math::abs(s.norm() - 1.0) <= 1e-12;
        s
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.amps.as_slice()
    }

    pub fn as_vector(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.norm_sqr())
    }

    pub fn normalized(&self) -> Result<DenseState> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Unnormalized(n));
        }
        Ok(DenseState { sites: self.sites, amps: &self.amps / Complex64::new(n, 0.0), normalized: true })
    }

    pub fn inner(&self, other: &DenseState) -> Complex64 {
        dot(self.amps.as_slice(), other.amps.as_slice())
    }

    /// `|<a|b>|^2 / (|a|^2 |b|^2)`, insensitive to global phase and norm.
    pub fn fidelity(&self, other: &DenseState) -> f64 {
        let ip = self.inner(other).norm_sqr();
        ip / (self.norm_sqr() * other.norm_sqr())
    }

    /// Euclidean distance `||a - b||`.
    pub fn distance(&self, other: &DenseState) -> f64 {
        math::sqrt(self.amps.iter().zip(other.amps.iter()).map(|(a, b)| (a - b).norm_sqr()).sum())
    }

    pub fn expectation(&self, h: &PauliSum, backend: &DenseBackend) -> Result<Complex64> {
        let hs = backend.apply_pauli_sum(h, self)?;
        Ok(self.inner(&hs) / Complex64::new(self.norm_sqr(), 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliOp;

    fn ps(letters: &str) -> PauliSum {
        PauliSum::from_string(PauliString::from_letters(letters).unwrap(), ONE).unwrap()
    }

    #[test]
    fn z_is_diag() {
        let be = DenseBackend::default();
        let m = be.pauli_sum(&ps("Z")).unwrap();
        assert_eq!(m.matrix()[(0, 0)], ONE);
        assert_eq!(m.matrix()[(1, 1)], -ONE);
        assert_eq!(m.matrix()[(0, 1)], ZERO);
    }

    #[test]
    fn xx_is_antidiagonal() {
        let be = DenseBackend::default();
        let m = be.pauli_sum(&ps("XX")).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let want = if r + c == 3 { ONE } else { ZERO };
                assert_eq!(m.matrix()[(r, c)], want);
            }
        }
    }

    #[test]
    fn y_matches_eq1() {
        let be = DenseBackend::default();
        let m = be.pauli_sum(&ps("Y")).unwrap();
        assert_eq!(m.matrix()[(0, 1)], Complex64::new(0.0, -1.0));
        assert_eq!(m.matrix()[(1, 0)], Complex64::new(0.0, 1.0));
    }

    #[test]
    fn size_overflow() {
        let be = DenseBackend::with_limits(3, 4);
        assert_eq!(be.pauli_sum(&ps("ZZZZ")), Err(Error::SizeOverflow { sites: 4, limit: 3 }));
    }

    #[test]
    fn non_hermitian_rejected() {
        let be = DenseBackend::default();
        let h = ps("XZ").scale(Complex64::new(0.0, 1.0));
        assert_eq!(be.ground(&h).unwrap_err(), Error::NotHermitian);
    }

    #[test]
    fn operator_string_matches_pauli_sum() {
        let be = DenseBackend::default();
        let o = OperatorString::from_sites(3, [(0, PauliOp::X.into()), (2, PauliOp::Y.into())]).unwrap();
        let a = be.operator_string(&o).unwrap();
        let b = be.pauli_sum(&ps("XIY")).unwrap();
        assert!(a.max_diff(&b) < 1e-15);
    }

    #[test]
    fn spectrum_degeneracy() {
        let s = SpectrumResult::from_sorted(vec![-2.0, -2.0 + 1e-10, -1.0, 0.5]);
        assert_eq!(s.ground_degeneracy, 2);
        assert!((s.gap.unwrap() - 1.0).abs() < 1e-15);
        let s = SpectrumResult::from_sorted(vec![1.0, 1.0]);
        assert_eq!(s.gap, None);
    }

    #[test]
    fn bell_pair_entropy_is_one_bit() {
        let be = DenseBackend::default();
        let r = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        let s = DenseState::from_amplitudes(2, vec![r, ZERO, ZERO, r]).unwrap();
        assert!((be.local_entropy(&s, &[0]).unwrap() - 1.0).abs() < 1e-12);
        assert!(be.local_entropy(&s, &[0, 1]).is_err());
        assert!(be.local_entropy(&s, &[]).is_err());
    }

    #[test]
    fn product_state_layout() {
        let s = DenseState::product(&[[ZERO, ONE], [ONE, ZERO]]);
        // |10> has index 2 with site 0 most significant
        assert_eq!(s.amplitudes()[2], ONE);
    }
}
