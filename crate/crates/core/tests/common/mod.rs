//! Independent dense reference implementations: explicit Kronecker products of 2x2
//! matrices and LU inversion. Nothing here calls into the crate's own dense backend.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use pauli_duality_core::{Circuit, GateKind, LocalOp, OperatorString, PauliOp, PauliString, PauliSum};
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

pub type M = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn two(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> M {
    M::from_row_slice(2, 2, &[a, b, cc, d])
}

pub fn pauli(op: PauliOp) -> M {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match op {
        PauliOp::I => two(o, z, z, o),
        PauliOp::X => two(z, o, o, z),
        PauliOp::Y => two(z, -i, i, z),
        PauliOp::Z => two(o, z, z, -o),
    }
}

pub fn local(op: &LocalOp) -> M {
    two(op.0[0][0], op.0[0][1], op.0[1][0], op.0[1][1])
}

/// Site 0 is the leftmost factor.
pub fn kron_all(factors: &[M]) -> M {
    let mut out = M::from_element(1, 1, c(1.0, 0.0));
    for f in factors {
        out = out.kronecker(f);
    }
    out
}

pub fn string(p: &PauliString) -> M {
    let f: Vec<M> = (0..p.len()).map(|k| pauli(p.op(k))).collect();
    kron_all(&f) * p.phase().to_complex()
}

pub fn sum(h: &PauliSum) -> M {
    let d = 1usize << h.len();
    let mut m = M::zeros(d, d);
    for (p, coeff) in h.iter() {
        m += string(&p) * coeff;
    }
    m
}

pub fn operator_string(o: &OperatorString) -> M {
    let f: Vec<M> = (0..o.len()).map(|k| local(&o.op(k))).collect();
    kron_all(&f) * o.scale()
}

fn embed(len: usize, ops: &[(usize, M)]) -> M {
    let f: Vec<M> = (0..len)
        .map(|k| ops.iter().find(|(s, _)| *s == k).map(|(_, m)| m.clone()).unwrap_or_else(|| pauli(PauliOp::I)))
        .collect();
    kron_all(&f)
}

fn projectors() -> (M, M) {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    (two(o, z, z, z), two(z, z, z, o))
}

pub fn gate(kind: &GateKind, len: usize) -> M {
    let (p0, p1) = projectors();
    let h = {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        two(c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0))
    };
    match *kind {
        GateKind::Hadamard { site } => embed(len, &[(site, h)]),
        GateKind::Local { site, op, .. } => embed(len, &[(site, local(&op))]),
        GateKind::Cnot { control, target } => {
            embed(len, &[(control, p0)]) + embed(len, &[(control, p1), (target, pauli(PauliOp::X))])
        }
        GateKind::Cz { a, b } => {
            let d = 1usize << len;
            M::identity(d, d) - embed(len, &[(a, p1.clone()), (b, p1)]) * c(2.0, 0.0)
        }
    }
}

/// `T = G_m ... G_1` for a circuit listed in application order.
pub fn circuit(cir: &Circuit) -> M {
    let d = 1usize << cir.len();
    let mut t = M::identity(d, d);
    for g in cir.gates() {
        t = gate(g.kind(), cir.len()) * t;
    }
    t
}

pub fn inverse(m: &M) -> M {
    m.clone().lu().try_inverse().expect("oracle inverse")
}

/// `T^-1 H T`.
pub fn conjugate(cir: &Circuit, h: &PauliSum) -> M {
    let t = circuit(cir);
    inverse(&t) * sum(h) * t
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Smallest eigenvalue of a Hermitian matrix through the real `2d x 2d` embedding,
/// which keeps the oracle off the complex eigen path used by the crate.
pub fn lowest_eigenvalue(h: &M) -> f64 {
    let d = h.nrows();
    let mut r = DMatrix::<f64>::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            let z = h[(i, j)];
            r[(i, j)] = z.re;
            r[(i + d, j + d)] = z.re;
            r[(i, j + d)] = -z.im;
            r[(i + d, j)] = z.im;
        }
    }
    r.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn rng(seed: u64) -> rand::rngs::StdRng {
    rand::rngs::StdRng::seed_from_u64(seed)
}

pub fn gaussian(r: &mut impl Rng) -> Complex64 {
    c(r.sample(StandardNormal), r.sample(StandardNormal))
}

/// Random invertible local op, kept away from singular by rejecting small determinants.
pub fn random_local(r: &mut impl Rng) -> LocalOp {
    loop {
        let m = LocalOp::new(gaussian(r), gaussian(r), gaussian(r), gaussian(r));
        let cond = m.det().norm() / (m.max_abs() * m.max_abs());
        if cond > 0.1 {
            return m;
        }
    }
}

pub fn random_pauli_sum(r: &mut impl Rng, len: usize, terms: usize) -> PauliSum {
    let mut h = PauliSum::zero(len).unwrap();
    for _ in 0..terms {
        let ops: Vec<(usize, PauliOp)> = (0..len).map(|k| (k, PauliOp::ALL[r.random_range(0..4)])).collect();
        let p = PauliString::from_ops(len, &ops).unwrap();
        h.add_term(&p, gaussian(r)).unwrap();
    }
    h
}

pub fn random_hermitian_sum(r: &mut impl Rng, len: usize, terms: usize) -> PauliSum {
    let mut h = PauliSum::zero(len).unwrap();
    for _ in 0..terms {
        let ops: Vec<(usize, PauliOp)> = (0..len).map(|k| (k, PauliOp::ALL[r.random_range(0..4)])).collect();
        let p = PauliString::from_ops(len, &ops).unwrap();
        h.add_term(&p, c(r.sample(StandardNormal), 0.0)).unwrap();
    }
    h
}

pub fn random_circuit(r: &mut impl Rng, len: usize, gates: usize, with_local: bool) -> Circuit {
    use pauli_duality_core::{Boundary, Gate};
    let mut cir = Circuit::new(len, Boundary::Open).unwrap();
    for _ in 0..gates {
        let kinds = if with_local { 4 } else { 3 };
        let g = match r.random_range(0..kinds) {
            0 => Gate::hadamard(r.random_range(0..len)),
            1 | 2 if len >= 2 => {
                let a = r.random_range(0..len);
                let mut b = r.random_range(0..len - 1);
                if b >= a {
                    b += 1;
                }
                if r.random_bool(0.5) {
                    Gate::cnot(a, b).unwrap()
                } else {
                    Gate::cz(a, b).unwrap()
                }
            }
            1 | 2 => Gate::hadamard(0),
            _ => Gate::local_auto(r.random_range(0..len), random_local(r)).unwrap(),
        };
        cir.push(g).unwrap();
    }
    cir
}

pub fn random_state(r: &mut impl Rng, len: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..1usize << len).map(|_| gaussian(r)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}
