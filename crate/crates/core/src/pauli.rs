//! Pauli strings with exact phases and complex-weighted Pauli sums.
//!
//! A string over `L` sites is stored as two bitmasks (x-part and z-part) and a
//! discrete phase `i^k`. Site `j` carries the operator
//! `sigma(x_j, z_j) = i^(x_j z_j) X^(x_j) Z^(z_j)`, i.e. `(0,0) = I`, `(1,0) = X`,
//! `(0,1) = Z`, `(1,1) = Y`. Sites are 0-based; bit `j` of each mask is site `j`.

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest number of sites a [`PauliString`] can address.
pub const MAX_SITES: usize = 128;

/// Coefficients with modulus at or below this are dropped from a [`PauliSum`].
pub const EPS_ZERO: f64 = 1e-14;

/// Single-site Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    pub const ALL: [PauliOp; 4] = [PauliOp::I, PauliOp::X, PauliOp::Y, PauliOp::Z];

    /// `(x, z)` symplectic bits.
    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliOp::I => (false, false),
            PauliOp::X => (true, false),
            PauliOp::Y => (true, true),
            PauliOp::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliOp::I,
            (true, false) => PauliOp::X,
            (true, true) => PauliOp::Y,
            (false, true) => PauliOp::Z,
        }
    }

    /// Row-major 2x2 matrix.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            PauliOp::I => [[one, o], [o, one]],
            PauliOp::X => [[o, one], [one, o]],
            PauliOp::Y => [[o, -i], [i, o]],
            PauliOp::Z => [[one, o], [o, -one]],
        }
    }

    pub fn letter(self) -> char {
        match self {
            PauliOp::I => 'I',
            PauliOp::X => 'X',
            PauliOp::Y => 'Y',
            PauliOp::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'I' | 'i' | '1' => Some(PauliOp::I),
            'X' | 'x' => Some(PauliOp::X),
            'Y' | 'y' => Some(PauliOp::Y),
            'Z' | 'z' => Some(PauliOp::Z),
            _ => None,
        }
    }
}

/// A fourth root of unity `i^k`, stored as `k mod 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u32) -> Self {
        Phase((k % 4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn conj(self) -> Self {
        Phase((4 - self.0) % 4)
    }
}

impl core::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// Phase-free key of a Pauli string. Orders lexicographically on `(z, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliKey {
    pub z: u128,
    pub x: u128,
}

impl PauliKey {
    pub fn support(self) -> u128 {
        self.x | self.z
    }
}

fn site_mask(len: usize) -> u128 {
    if len >= 128 {
        u128::MAX
    } else {
        (1u128 << len) - 1
    }
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 || len > MAX_SITES {
        return Err(Error::InvalidArgument(alloc::format!("string length must be in 1..={MAX_SITES}, got {len}")));
    }
    Ok(())
}

/// Phase times a tensor product of single-site Paulis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    len: usize,
    x: u128,
    z: u128,
    phase: Phase,
}

impl PauliString {
    pub fn identity(len: usize) -> Result<Self> {
        check_len(len)?;
        Ok(PauliString { len, x: 0, z: 0, phase: Phase::ONE })
    }

    pub fn from_masks(len: usize, x: u128, z: u128, phase: Phase) -> Result<Self> {
        check_len(len)?;
        let m = site_mask(len);
        if (x | z) & !m != 0 {
            return Err(Error::SiteOutOfRange { site: 127 - ((x | z).leading_zeros() as usize), len });
        }
        Ok(PauliString { len, x, z, phase })
    }

    /// `op` on `site`, identity elsewhere.
    pub fn single(len: usize, site: usize, op: PauliOp) -> Result<Self> {
        Self::from_ops(len, &[(site, op)])
    }

    /// Product of single-site operators on distinct or repeated sites, in the given order.
    pub fn from_ops(len: usize, ops: &[(usize, PauliOp)]) -> Result<Self> {
        let mut acc = Self::identity(len)?;
        for &(site, op) in ops {
            if site >= len {
                return Err(Error::SiteOutOfRange { site, len });
            }
            let (x, z) = op.bits();
            let s = PauliString { len, x: (x as u128) << site, z: (z as u128) << site, phase: Phase::ONE };
            acc = acc.mul(&s)?;
        }
        Ok(acc)
    }

    /// Parse a letter string such as `IXZY` (leftmost letter is site 0).
    pub fn from_letters(letters: &str) -> Result<Self> {
        let chars: Vec<char> = letters.chars().collect();
        let len = chars.len();
        check_len(len)?;
        let (mut x, mut z) = (0u128, 0u128);
        for (site, c) in chars.into_iter().enumerate() {
            let op = PauliOp::from_letter(c)
                .ok_or_else(|| Error::InvalidArgument(alloc::format!("not a Pauli letter: {c:?}")))?;
            let (bx, bz) = op.bits();
            x |= (bx as u128) << site;
            z |= (bz as u128) << site;
        }
        Ok(PauliString { len, x, z, phase: Phase::ONE })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x_mask(&self) -> u128 {
        self.x
    }

    pub fn z_mask(&self) -> u128 {
        self.z
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn key(&self) -> PauliKey {
        PauliKey { z: self.z, x: self.x }
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// Same string with phase `+1`.
    pub fn phase_free(self) -> Self {
        self.with_phase(Phase::ONE)
    }

    pub fn op(&self, site: usize) -> PauliOp {
        PauliOp::from_bits((self.x >> site) & 1 == 1, (self.z >> site) & 1 == 1)
    }

    pub fn support(&self) -> u128 {
        self.x | self.z
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// Group product `self * other` with exact phase.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { left: self.len, right: other.len });
        }
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // sigma_a sigma_b = i^(x1z1 + x2z2) (-1)^(z1.x2) X^x Z^z, then refold i^(-x3z3)
        let k = self.phase.0 as u32
            + other.phase.0 as u32
            + (self.x & self.z).count_ones()
            + (other.x & other.z).count_ones()
            + 2 * (self.z & other.x).count_ones()
            + 3 * (x & z).count_ones();
        Ok(PauliString { len: self.len, x, z, phase: Phase::from_exponent(k) })
    }

    /// True iff the two strings commute (the symplectic product vanishes).
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    pub fn adjoint(&self) -> PauliString {
        PauliString { phase: self.phase.conj(), ..*self }
    }

    /// Site permutation `j -> (j + shift) mod L`.
    pub fn cyclic_shift(&self, shift: usize) -> PauliString {
        let l = self.len;
        let s = shift % l;
        let rot = |m: u128| {
            if s == 0 {
                m
            } else {
                ((m << s) | (m >> (l - s))) & site_mask(l)
            }
        };
        PauliString { x: rot(self.x), z: rot(self.z), ..*self }
    }

    /// Letters only, leftmost is site 0.
    pub fn letters(&self) -> String {
        (0..self.len).map(|j| self.op(j).letter()).collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.phase.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{p}{}", self.letters())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Accepts an optional phase prefix `+`, `-`, `+i`, `-i`, `i` before the letters.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, rest) = if let Some(r) = s.strip_prefix("+i").or_else(|| s.strip_prefix("i")) {
            (Phase::I, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (Phase::MINUS_I, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::ONE, r)
        } else {
            (Phase::ONE, s)
        };
        Ok(Self::from_letters(rest)?.with_phase(phase))
    }
}

/// Finite complex-weighted sum of phase-free Pauli strings in canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    len: usize,
    terms: BTreeMap<PauliKey, Complex64>,
}

#[allow(clippy::len_without_is_empty)]
impl PauliSum {
    pub fn zero(len: usize) -> Result<Self> {
        check_len(len)?;
        Ok(PauliSum { len, terms: BTreeMap::new() })
    }

    pub fn identity(len: usize) -> Result<Self> {
        Self::from_string(PauliString::identity(len)?, Complex64::new(1.0, 0.0))
    }

    /// `coeff * string`, with the string phase folded into the coefficient.
    pub fn from_string(string: PauliString, coeff: Complex64) -> Result<Self> {
        let mut s = Self::zero(string.len)?;
        s.add_term(&string, coeff)?;
        Ok(s)
    }

    pub fn from_terms<I>(len: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, Complex64)>,
    {
        let mut s = Self::zero(len)?;
        for (p, c) in terms {
            s.add_term(&p, c)?;
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Accumulate `coeff * string` and prune the entry if it cancels.
    pub fn add_term(&mut self, string: &PauliString, coeff: Complex64) -> Result<()> {
        if string.len != self.len {
            return Err(Error::LengthMismatch { left: self.len, right: string.len });
        }
        self.accumulate(string.key(), coeff * string.phase.to_complex());
        Ok(())
    }

    fn accumulate(&mut self, key: PauliKey, c: Complex64) {
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(v) => {
                if c.norm() > EPS_ZERO {
                    v.insert(c);
                }
            }
            btree_map::Entry::Occupied(mut o) => {
                let v = *o.get() + c;
                if v.norm() > EPS_ZERO {
                    *o.get_mut() = v;
                } else {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, string: &PauliString) -> Complex64 {
        self.terms.get(&string.key()).map(|c| *c * string.phase.conj().to_complex()).unwrap_or_default()
    }

    pub fn coeff_of_key(&self, key: PauliKey) -> Complex64 {
        self.terms.get(&key).copied().unwrap_or_default()
    }

    /// Terms in canonical order as `(phase-free string, coefficient)`.
    pub fn iter(&self) -> impl Iterator<Item = (PauliString, Complex64)> + '_ {
        let len = self.len;
        self.terms.iter().map(move |(k, c)| (PauliString { len, x: k.x, z: k.z, phase: Phase::ONE }, *c))
    }

    pub fn keys(&self) -> impl Iterator<Item = PauliKey> + '_ {
        self.terms.keys().copied()
    }

    fn same_len(&self, other: &PauliSum) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { left: self.len, right: other.len });
        }
        Ok(())
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        self.same_len(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(*k, *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PauliSum) -> Result<PauliSum> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> PauliSum {
        let mut out = PauliSum { len: self.len, terms: BTreeMap::new() };
        for (k, c) in &self.terms {
            out.accumulate(*k, *c * s);
        }
        out
    }

    /// Full expansion of all cross terms.
    pub fn mul(&self, other: &PauliSum) -> Result<PauliSum> {
        self.same_len(other)?;
        let mut out = PauliSum { len: self.len, terms: BTreeMap::new() };
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                let p = a.mul(&b)?;
                out.accumulate(p.key(), ca * cb * p.phase.to_complex());
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &PauliSum) -> Result<PauliSum> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn adjoint(&self) -> PauliSum {
        PauliSum { len: self.len, terms: self.terms.iter().map(|(k, c)| (*k, c.conj())).collect() }
    }

    /// Largest `|a(s) - b(s)|` over the union of strings; infinite on length mismatch.
    pub fn max_diff(&self, other: &PauliSum) -> f64 {
        if self.len != other.len {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for (k, c) in &self.terms {
            worst = worst.max((*c - other.coeff_of_key(*k)).norm());
        }
        for (k, c) in &other.terms {
            if !self.terms.contains_key(k) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &PauliSum, tol: f64) -> bool {
        self.max_diff(other) <= tol
    }

    /// Largest coefficient modulus (0 for the empty sum).
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// All coefficients real to `tol`. Phase-free Pauli strings are Hermitian, so this is
    /// Hermiticity of the operator.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| crate::math::abs(c.im) <= tol)
    }

    /// Union of the supports of all terms.
    pub fn support(&self) -> u128 {
        self.terms.keys().fold(0, |m, k| m | k.support())
    }

    pub fn cyclic_shift(&self, shift: usize) -> PauliSum {
        let mut out = PauliSum { len: self.len, terms: BTreeMap::new() };
        for (p, c) in self.iter() {
            out.accumulate(p.cyclic_shift(shift).key(), c);
        }
        out
    }

    /// Keep only the terms for which `keep` holds.
    pub fn filter<F: Fn(&PauliString) -> bool>(&self, keep: F) -> PauliSum {
        let mut out = PauliSum { len: self.len, terms: BTreeMap::new() };
        for (p, c) in self.iter() {
            if keep(&p) {
                out.terms.insert(p.key(), c);
            }
        }
        out
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i) {}", c.re, c.im, p.letters())?;
        }
        Ok(())
    }
}
