//! Generalized stabilizer states: unique joint `+1` eigenvectors of commuting tensor
//! products of arbitrary (possibly non-Hermitian) local operators.

use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::{Matrix2, SVD};
use num_complex::Complex64;

use crate::circuits::{self, lemma1_block};
use crate::dense::{DenseBackend, DenseState, NULL_SPACE_TOL};
use crate::error::{Error, Result};
use crate::local_ops::{all_commute, independence_check, LocalOp, OperatorString, COMMUTATOR_TOL};
use crate::math;
use crate::models::{self, ModelSpec};
use crate::pauli::{PauliOp, PauliSum};

/// Tolerance for the checks in [`verify_lemma1`].
pub const LEMMA1_TOL: f64 = 1e-9;

/// `g_1 ... g_L` on `L` sites.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    len: usize,
    gens: Vec<OperatorString>,
}

/// Result of checking the generator-set invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorCheck {
    pub commuting: bool,
    pub independent: bool,
    pub fixed_dim: usize,
}

impl GeneratorCheck {
    pub fn is_valid(&self) -> bool {
        self.commuting && self.independent && self.fixed_dim == 1
    }
}

impl GeneratorSet {
    /// Structural checks only: exactly `L` generators of length `L`.
    pub fn new(gens: Vec<OperatorString>) -> Result<Self> {
        let len = gens.first().map(|g| g.len()).ok_or_else(|| Error::InvalidArgument("empty generator set".into()))?;
        if let Some(g) = gens.iter().find(|g| g.len() != len) {
            return Err(Error::LengthMismatch { left: len, right: g.len() });
        }
        if gens.len() != len {
            return Err(Error::InvalidArgument(alloc::format!("{} generators for {len} sites", gens.len())));
        }
        Ok(GeneratorSet { len, gens })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn generators(&self) -> &[OperatorString] {
        &self.gens
    }

    pub fn check(&self, backend: &DenseBackend) -> Result<GeneratorCheck> {
        let commuting = all_commute(&self.gens, COMMUTATOR_TOL)?;
        let independent = independence_check(&self.gens, NULL_SPACE_TOL, backend)?;
        let fixed_dim = backend.fixed_space_dim(&self.gens, NULL_SPACE_TOL)?;
        Ok(GeneratorCheck { commuting, independent, fixed_dim })
    }

    /// `M g_k M^-1` for every generator.
    pub fn conjugated_by(&self, m: &OperatorString) -> Result<GeneratorSet> {
        let gens = self.gens.iter().map(|g| g.conjugated_by(m)).collect::<Result<Vec<_>>>()?;
        GeneratorSet::new(gens)
    }

    /// Largest `||g_k psi - psi||` over the generators.
    pub fn max_residual(&self, psi: &DenseState, backend: &DenseBackend) -> Result<f64> {
        let mut worst = 0.0f64;
        for g in &self.gens {
            let gp = backend.apply_operator_string(g, psi)?;
            worst = worst.max(gp.distance(psi));
        }
        Ok(worst)
    }
}

/// The unique normalized `psi` with `g_k psi = psi` for all `k`, from the null space of
/// `sum_k (g_k - 1)^dagger (g_k - 1)`.
pub fn fixed_state(g: &GeneratorSet, backend: &DenseBackend) -> Result<DenseState> {
    let (dim, state) = backend.fixed_space(g.generators(), NULL_SPACE_TOL)?;
    match dim {
        0 => Err(Error::NoFixedPoint),
        1 => state.normalized(),
        d => Err(Error::NonUniqueFixedPoint(d)),
    }
}

/// Periodic ZXZ chain parameters with the derived deformation `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Params {
    pub n: usize,
    pub j: f64,
    pub b: f64,
}

impl Lemma1Params {
    pub fn new(n: usize, j: f64, b: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(alloc::format!("periodic chain needs N >= 3, got {n}")));
        }
        if !j.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument("couplings must be finite".into()));
        }
        if j == 0.0 {
            return Err(Error::DegenerateParameters(
                "J = 0 makes the deformation singular; the ground state is the field product state".into(),
            ));
        }
        Ok(Lemma1Params { n, j, b })
    }

    /// `lambda = -B/J + sign(J) sqrt((B/J)^2 + 1)`.
    pub fn lambda(&self) -> f64 {
        let r = self.b / self.j;
        let s = math::sqrt(r * r + 1.0);
        // the two forms are equal; pick the one without cancellation
        if self.j > 0.0 {
            if r >= 0.0 {
                1.0 / (r + s)
            } else {
                s - r
            }
        } else if r <= 0.0 {
            -1.0 / (s - r)
        } else {
            -(r + s)
        }
    }

    /// The other root of `lambda^2 + (2B/J) lambda - 1 = 0`. Diagnostic only.
    pub fn other_root(&self) -> f64 {
        -1.0 / self.lambda()
    }

    /// `-N sqrt(B^2 + J^2)`.
    pub fn ground_energy(&self) -> f64 {
        -(self.n as f64) * circuits::block_radius(self.j, self.b)
    }

    pub fn hamiltonian(&self) -> Result<PauliSum> {
        models::build(&ModelSpec::zxz(self.n, self.j, self.b))
    }
}

/// `Z_{k-1} (0, lambda; 1/lambda, 0)_k Z_{k+1}` for every `k`, periodic.
pub fn lemma1_generators(p: &Lemma1Params) -> Result<GeneratorSet> {
    let m = LocalOp::deformed_x(Complex64::new(p.lambda(), 0.0));
    let n = p.n;
    let gens = (0..n)
        .map(|k| {
            OperatorString::from_sites(
                n,
                [((k + n - 1) % n, PauliOp::Z.into()), (k, m), ((k + 1) % n, PauliOp::Z.into())],
            )
        })
        .collect::<Result<Vec<_>>>()?;
    GeneratorSet::new(gens)
}

/// Normalized `T |+>^N`.
pub fn lemma1_state(p: &Lemma1Params, backend: &DenseBackend) -> Result<DenseState> {
    let t = circuits::lemma1_t(p.n, p.lambda())?;
    backend.apply(&t, &DenseState::plus(p.n))?.normalized()
}

/// Normalized `R |1>^N`.
pub fn remark1_state(p: &Lemma1Params, backend: &DenseBackend) -> Result<DenseState> {
    let r = circuits::remark1_r(p.n, p.j, p.b)?;
    backend.apply(&r, &DenseState::all_ones(p.n))?.normalized()
}

/// One named check with its measured value.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Full verification chain for one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Report {
    pub params: Lemma1Params,
    pub lambda: f64,
    pub analytic_energy: f64,
    pub numeric_energy: f64,
    /// `N <+|A|+>` for the single-site block `A`.
    pub block_energy_sum: f64,
    pub ground_degeneracy: usize,
    pub checks: Vec<Check>,
}

impl Lemma1Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.passed).map(|c| String::from(c.name)).collect()
    }
}

fn upper(name: &'static str, value: f64, threshold: f64) -> Check {
    Check { name, value, threshold, passed: value <= threshold }
}

/// Check the exact solution of the periodic ZXZ chain at one parameter point:
///
/// * `block_sum`: `T^-1 H T` equals the sum of single-site blocks `(B, -J/l; -J l, -B)`
/// * `plus_eigen`: `|+>` is an eigenvector of every block with eigenvalue `-sqrt(B^2+J^2)`
/// * `energy`: `N <+|A|+>` and the diagonalized ground energy match `-N sqrt(B^2+J^2)`
/// * `eigen_equations`: normalized `T|+>^N` is fixed by every generator
/// * `fixed_vs_ground`: the generator fixed state is the diagonalized ground state
/// * `remark1_vs_ground`: `R|1>^N` is the same state
///
/// Infidelities and residuals are compared against `tol`; energies relative to `|E0|`.
pub fn verify_lemma1(p: &Lemma1Params, backend: &DenseBackend, tol: f64) -> Result<Lemma1Report> {
    let n = p.n;
    backend.check_matrix_size(n)?;
    let lambda = p.lambda();
    let h = p.hamiltonian()?;
    let t = circuits::lemma1_t(n, lambda)?;
    let block = lemma1_block(p.j, p.b, lambda);

    let conjugated = circuits::conjugate(&t, &h)?;
    let mut blocks = PauliSum::zero(n)?;
    for k in 0..n {
        blocks = blocks.add(&OperatorString::from_sites(n, [(k, block)])?.expand())?;
    }
    let scale = blocks.max_abs_coeff().max(1.0);
    let block_residual = conjugated.max_diff(&blocks) / scale;

    let r = circuits::block_radius(p.j, p.b);
    let plus = [Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0); 2];
    let ap = block.apply(plus);
    let plus_residual = math::sqrt((ap[0] + plus[0] * r).norm_sqr() + (ap[1] + plus[1] * r).norm_sqr()) / r.max(1.0);
    let block_energy = (plus[0].conj() * ap[0] + plus[1].conj() * ap[1]).re;
    let block_energy_sum = n as f64 * block_energy;

    let analytic = p.ground_energy();
    let (spec, ground) = backend.ground(&h)?;
    let e_scale = analytic.abs().max(1e-300);
    let energy_err = ((block_energy_sum - analytic).abs()).max((spec.ground_energy - analytic).abs()) / e_scale;

    let gens = lemma1_generators(p)?;
    let psi = lemma1_state(p, backend)?;
    let eigen_residual = gens.max_residual(&psi, backend)?;

    let fixed = fixed_state(&gens, backend)?;
    let fixed_infidelity = 1.0 - fixed.fidelity(&ground);
    let remark = remark1_state(p, backend)?;
    let remark_infidelity = 1.0 - remark.fidelity(&ground);
    let t_infidelity = 1.0 - psi.fidelity(&ground);

    let checks = alloc::vec![
        upper("block_sum", block_residual, tol),
        upper("plus_eigen", plus_residual, tol),
        upper("energy", energy_err, tol),
        upper("eigen_equations", eigen_residual, tol),
        upper("fixed_vs_ground", fixed_infidelity, tol),
        upper("remark1_vs_ground", remark_infidelity, tol),
        upper("t_state_vs_ground", t_infidelity, tol),
        upper("unique_ground", spec.ground_degeneracy as f64, 1.0),
    ];
    Ok(Lemma1Report {
        params: *p,
        lambda,
        analytic_energy: analytic,
        numeric_energy: spec.ground_energy,
        block_energy_sum,
        ground_degeneracy: spec.ground_degeneracy,
        checks,
    })
}

/// Single-site entropy (bits) of the Lemma I state at `J = 1`, `B = ratio`.
pub fn lemma1_entropy(n: usize, b_over_j: f64, backend: &DenseBackend) -> Result<(f64, f64)> {
    let p = Lemma1Params::new(n, 1.0, b_over_j)?;
    let psi = lemma1_state(&p, backend)?;
    Ok((p.lambda(), backend.local_entropy(&psi, &[0])?))
}

/// Which maximally entangled reference a two-qubit description was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoQubitReference {
    /// `(|00> + |11>)/sqrt 2`, generators `(A⊗B) XX (A⊗B)^-1` and `(A⊗B) ZZ (A⊗B)^-1`.
    PhiPlus,
    /// Schmidt rank 1: `{2|a><a| - 1, 2|b><b| - 1}`.
    Product,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitGenStab {
    pub generators: GeneratorSet,
    pub reference: TwoQubitReference,
    pub schmidt: [f64; 2],
    /// Local maps with `psi = (A ⊗ B)|Phi+>` (identity in the product case).
    pub local_maps: [LocalOp; 2],
}

/// Schmidt coefficient ratio below which a two-qubit state is treated as a product.
pub const PRODUCT_RATIO: f64 = 1e-8;

fn reflection(v: [Complex64; 2]) -> LocalOp {
    // 2|v><v| - 1
    let two = Complex64::new(2.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    LocalOp::new(
        two * v[0] * v[0].conj() - one,
        two * v[0] * v[1].conj(),
        two * v[1] * v[0].conj(),
        two * v[1] * v[1].conj() - one,
    )
}

/// Generalized stabilizer description of a normalized two-qubit pure state, obtained by
/// local linear maps on `|Phi+>` from the Schmidt decomposition.
pub fn two_qubit_genstab(state: &DenseState) -> Result<TwoQubitGenStab> {
    if state.sites() != 2 {
        return Err(Error::InvalidArgument("two-qubit state expected".into()));
    }
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized(norm));
    }
    let a = state.amplitudes();
    let c = Matrix2::new(a[0], a[1], a[2], a[3]);
    let svd = SVD::new(c, true, true);
    let u = svd.u.ok_or(Error::NoConvergence(0))?;
    let v_t = svd.v_t.ok_or(Error::NoConvergence(0))?;
    let mut s = [svd.singular_values[0], svd.singular_values[1]];
    let (mut u, mut v_t) = (u, v_t);
    if s[0] < s[1] {
        s.swap(0, 1);
        u.swap_columns(0, 1);
        v_t.swap_rows(0, 1);
    }
    // C = U S V^dagger, psi = sum_i s_i |u_i> |conj(v_i)>, and row i of V^dagger is conj(v_i)^T
    if s[1] <= PRODUCT_RATIO * s[0] {
        let first = [u[(0, 0)], u[(1, 0)]];
        let second = [v_t[(0, 0)], v_t[(0, 1)]];
        let gens = alloc::vec![
            OperatorString::from_sites(2, [(0, reflection(first))])?,
            OperatorString::from_sites(2, [(1, reflection(second))])?,
        ];
        return Ok(TwoQubitGenStab {
            generators: GeneratorSet::new(gens)?,
            reference: TwoQubitReference::Product,
            schmidt: s,
            local_maps: [LocalOp::IDENTITY, LocalOp::IDENTITY],
        });
    }
    let r2 = core::f64::consts::SQRT_2;
    let amap = LocalOp::new(u[(0, 0)] * s[0] * r2, u[(0, 1)] * s[1] * r2, u[(1, 0)] * s[0] * r2, u[(1, 1)] * s[1] * r2);
    // B = conj(V) = (V^dagger)^T
    let bmap = LocalOp::new(v_t[(0, 0)], v_t[(1, 0)], v_t[(0, 1)], v_t[(1, 1)]);
    let m = OperatorString::from_sites(2, [(0, amap), (1, bmap)])?;
    let xx = OperatorString::from_sites(2, [(0, PauliOp::X.into()), (1, PauliOp::X.into())])?;
    let zz = OperatorString::from_sites(2, [(0, PauliOp::Z.into()), (1, PauliOp::Z.into())])?;
    let generators = GeneratorSet::new(alloc::vec![xx, zz])?.conjugated_by(&m)?;
    Ok(TwoQubitGenStab { generators, reference: TwoQubitReference::PhiPlus, schmidt: s, local_maps: [amap, bmap] })
}

/// GHZ-class state `(A ⊗ B ⊗ C)(|000> + |111>)/sqrt 2` as generators conjugated from
/// `{XXX, ZZI, IZZ}`.
pub fn ghz_class_generators(maps: [LocalOp; 3]) -> Result<GeneratorSet> {
    use PauliOp::{X, Z};
    let m = OperatorString::from_sites(3, [(0, maps[0]), (1, maps[1]), (2, maps[2])])?;
    let g = |ops: &[(usize, PauliOp)]| OperatorString::from_sites(3, ops.iter().map(|(s, o)| (*s, LocalOp::pauli(*o))));
    let base =
        GeneratorSet::new(alloc::vec![g(&[(0, X), (1, X), (2, X)])?, g(&[(0, Z), (1, Z)])?, g(&[(1, Z), (2, Z)])?])?;
    base.conjugated_by(&m)
}
