//! Pauli operators, stabilizer groups, Clifford tableaus and circuits.
//!
//! A [`PauliOp`] is `i^phase · X^x · Z^z` where `X^x` is the product of `X_q`
//! over set bits of `x` (all X factors written before all Z factors). Qubit
//! `q` of an `n`-qubit register is bit `n-1-q` of a mask and of a
//! computational-basis index.
//!
//! Circuits are gate lists in application order, so `[g1, g2]` evaluates to
//! the matrix `g2 · g1`.

use std::collections::VecDeque;
use std::fmt;

use rand::Rng;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::cyclo::{lcm, CycNum, Rational};
use crate::error::{Error, Result};
use crate::linalg::FieldMatrix;
use crate::linalg::FieldVector;

#[inline]
fn bit(n: usize, q: usize) -> u64 {
    1u64 << (n - 1 - q)
}

#[inline]
fn parity(v: u64) -> u8 {
    (v.count_ones() & 1) as u8
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliOp {
    pub n: usize,
    pub x: u64,
    pub z: u64,
    /// Exponent of `i`, kept in `0..4`.
    pub phase: u8,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        PauliOp { n, x: 0, z: 0, phase: 0 }
    }

    pub fn new(n: usize, x: u64, z: u64, phase: u8) -> Self {
        PauliOp { n, x, z, phase: phase % 4 }
    }

    /// The Hermitian Pauli `±X^x Z^z` with the `i` needed for Y factors folded in.
    pub fn hermitian(n: usize, x: u64, z: u64, negative: bool) -> Self {
        let p = parity(x & z) + if negative { 2 } else { 0 };
        PauliOp::new(n, x, z, p)
    }

    pub fn single(n: usize, q: usize, kind: char) -> Self {
        let b = bit(n, q);
        match kind {
            'I' => Self::identity(n),
            'X' => PauliOp::new(n, b, 0, 0),
            'Z' => PauliOp::new(n, 0, b, 0),
            'Y' => PauliOp::new(n, b, b, 1),
            _ => panic!("unknown Pauli letter {kind}"),
        }
    }

    pub fn x_on(n: usize, q: usize) -> Self {
        Self::single(n, q, 'X')
    }

    pub fn z_on(n: usize, q: usize) -> Self {
        Self::single(n, q, 'Z')
    }

    /// Parses labels such as `"XZ"`, `"-YI"`, `"+iZ"`.
    pub fn parse(label: &str) -> Result<Self> {
        let mut s = label.trim();
        let mut phase = 0u8;
        if let Some(r) = s.strip_prefix('-') {
            phase += 2;
            s = r;
        } else if let Some(r) = s.strip_prefix('+') {
            s = r;
        }
        if let Some(r) = s.strip_prefix('i') {
            phase += 1;
            s = r;
        }
        let n = s.chars().count();
        if n == 0 || n > 63 {
            return Err(Error::Parse(format!("Pauli label `{label}` has bad length")));
        }
        let mut p = PauliOp::new(n, 0, 0, phase);
        for (q, ch) in s.chars().enumerate() {
            if !"IXYZ".contains(ch) {
                return Err(Error::Parse(format!("Pauli label `{label}`: bad letter `{ch}` at {q}")));
            }
            p = p.mul(&PauliOp::single(n, q, ch));
        }
        Ok(p)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase & 1 == parity(self.x & self.z)
    }

    /// For a Hermitian Pauli: whether it is `-1` times the letter product.
    pub fn is_negative(&self) -> bool {
        (self.phase + 4 - parity(self.x & self.z)) % 4 == 2
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let phase = self.phase + other.phase + 2 * parity(self.z & other.x);
        PauliOp::new(self.n, self.x ^ other.x, self.z ^ other.z, phase)
    }

    pub fn neg(&self) -> Self {
        PauliOp::new(self.n, self.x, self.z, self.phase + 2)
    }

    /// Entry-wise complex conjugate.
    pub fn conj(&self) -> Self {
        PauliOp::new(self.n, self.x, self.z, (4 - self.phase) % 4)
    }

    pub fn commutes(&self, other: &Self) -> bool {
        parity((self.x & other.z) ^ (self.z & other.x)) == 0
    }

    /// Letter on qubit `q` as `(x, z)` bits.
    pub fn bits_on(&self, q: usize) -> (bool, bool) {
        let b = bit(self.n, q);
        (self.x & b != 0, self.z & b != 0)
    }

    /// Restriction of the letters to the qubits `start..start+len`, renumbered from 0 (phase dropped).
    pub fn letters_on(&self, start: usize, len: usize) -> (u64, u64) {
        let shift = self.n - start - len;
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        ((self.x >> shift) & mask, (self.z >> shift) & mask)
    }

    /// Symplectic vector `x‖z` for GF(2) elimination.
    pub fn symplectic_bits(&self) -> u128 {
        ((self.x as u128) << 64) | self.z as u128
    }

    /// `self |v⟩`, exact.
    pub fn apply(&self, v: &FieldVector) -> Result<FieldVector> {
        if v.len() != 1usize << self.n {
            return Err(Error::ShapeMismatch(format!(
                "{}-qubit Pauli on a vector of length {}",
                self.n,
                v.len()
            )));
        }
        let k = if self.phase & 1 == 1 { lcm(v.conductor(), 4) } else { v.conductor() };
        let v = v.lift(k)?;
        let mut out = vec![CycNum::zero(k); v.len()];
        for (idx, c) in v.entries().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = (self.phase + 2 * parity(self.z & idx as u64)) % 4;
            out[idx ^ self.x as usize] = times_i_pow(c, t);
        }
        Ok(FieldVector::new(k, out))
    }

    pub fn to_matrix(&self) -> FieldMatrix {
        let dim = 1usize << self.n;
        let k = if self.phase & 1 == 1 { 4 } else { 1 };
        let mut m = FieldMatrix::zeros(k, dim, dim);
        for col in 0..dim {
            let t = (self.phase + 2 * parity(self.z & col as u64)) % 4;
            m.set(col ^ self.x as usize, col, times_i_pow(&CycNum::one(4), t));
        }
        m
    }

    /// `g P g†` for a single gate.
    pub fn conjugate_by(&self, g: &Gate) -> PauliOp {
        let n = self.n;
        let mut p = *self;
        match *g {
            Gate::Htilde(q) => {
                let b = bit(n, q);
                let (a, c) = (p.x & b != 0, p.z & b != 0);
                if a != c {
                    p.x ^= b;
                    p.z ^= b;
                }
                if a && c {
                    p.phase = (p.phase + 2) % 4;
                }
            }
            Gate::S(q) => {
                let b = bit(n, q);
                if p.x & b != 0 {
                    p.phase = (p.phase + 1) % 4;
                    p.z ^= b;
                }
            }
            Gate::X(q) => {
                if p.z & bit(n, q) != 0 {
                    p.phase = (p.phase + 2) % 4;
                }
            }
            Gate::Z(q) => {
                if p.x & bit(n, q) != 0 {
                    p.phase = (p.phase + 2) % 4;
                }
            }
            Gate::Cnot(c, t) => {
                let (bc, bt) = (bit(n, c), bit(n, t));
                if p.x & bc != 0 {
                    p.x ^= bt;
                }
                if p.z & bt != 0 {
                    p.z ^= bc;
                }
            }
            Gate::Cz(a, b) => {
                // X_a -> X_a Z_b and X_b -> Z_a X_b; reordering both picks up a sign
                let (ba, bb) = (bit(n, a), bit(n, b));
                let (xa, xb) = (p.x & ba != 0, p.x & bb != 0);
                if xa {
                    p.z ^= bb;
                }
                if xb {
                    p.z ^= ba;
                }
                if xa && xb {
                    p.phase = (p.phase + 2) % 4;
                }
            }
            Gate::Transvection(t) => {
                if !p.commutes(&t) {
                    let pt = p.mul(&t);
                    p = PauliOp::new(n, pt.x, pt.z, pt.phase + 1);
                }
            }
            Gate::GlobalPhase { .. } => {}
        }
        p
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Display as ±(i)·letters with Y absorbing one i each
        let ys = (self.x & self.z).count_ones() as u8;
        let rest = (self.phase + 4 * 16 - ys) % 4;
        let prefix = ["+", "+i", "-", "-i"][rest as usize];
        write!(f, "{prefix}")?;
        for q in 0..self.n {
            let ch = match self.bits_on(q) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

/// `i^t · c`, lifting to a conductor divisible by 4 when needed.
pub fn times_i_pow(c: &CycNum, t: u8) -> CycNum {
    match t % 4 {
        0 => c.clone(),
        2 => -c,
        1 => c.mul_i(),
        _ => -c.mul_i(),
    }
}

/// `(1 - i)/2 · c`, the scalar of `H̃`.
fn times_htilde_scalar(c: &CycNum) -> CycNum {
    let half = Rational::new(1.into(), 2.into());
    (c - c.mul_i()).scale(&half)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabGroup {
    pub n: usize,
    pub generators: Vec<PauliOp>,
}

impl StabGroup {
    /// Validates that the generators are Hermitian, pairwise commuting and independent.
    pub fn new(n: usize, generators: Vec<PauliOp>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.n != n || !g.is_hermitian() {
                return Err(Error::InvalidInput(format!("generator {i} ({g}) is not a Hermitian {n}-qubit Pauli")));
            }
            for h in &generators[..i] {
                if !g.commutes(h) {
                    return Err(Error::InvalidInput(format!("generators {g} and {h} anticommute")));
                }
            }
        }
        if independent_indices(&generators).len() != generators.len() {
            return Err(Error::InvalidInput("generators are not independent".into()));
        }
        Ok(StabGroup { n, generators })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.n
    }
}

impl fmt::Display for StabGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.generators.iter().map(|p| p.to_string()).collect();
        write!(f, "<{}>", g.join(", "))
    }
}

/// Indices of a maximal independent subset, scanning in order.
pub fn independent_indices(ps: &[PauliOp]) -> Vec<usize> {
    let mut basis: Vec<u128> = Vec::new();
    let mut keep = Vec::new();
    for (i, p) in ps.iter().enumerate() {
        let mut v = p.symplectic_bits();
        for &b in &basis {
            let top = 127 - b.leading_zeros();
            if v >> top & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            let top = 127 - v.leading_zeros();
            for b in basis.iter_mut() {
                if *b >> top & 1 == 1 {
                    *b ^= v;
                }
            }
            basis.push(v);
            keep.push(i);
        }
    }
    keep
}

fn qubits_of(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::ShapeMismatch(format!("length {len} is not a power of two")));
    }
    Ok(len.trailing_zeros() as usize)
}

pub fn stabilizes(p: &PauliOp, psi: &FieldVector) -> Result<bool> {
    if psi.is_zero() {
        return Err(Error::InvalidInput("zero vector".into()));
    }
    Ok(p.apply(psi)? == *psi)
}

/// Solves `A z = b` over GF(2), rows given as `(mask, rhs)`. Returns a particular
/// solution and a nullspace basis, or `None` if inconsistent.
fn gf2_solve(n: usize, rows: &[(u64, bool)]) -> Option<(u64, Vec<u64>)> {
    let mut piv: Vec<(u64, bool, u32)> = Vec::new();
    for &(mut m, mut r) in rows {
        for &(pm, pr, pb) in &piv {
            if m >> pb & 1 == 1 {
                m ^= pm;
                r ^= pr;
            }
        }
        if m == 0 {
            if r {
                return None;
            }
            continue;
        }
        let b = 63 - m.leading_zeros();
        for p in piv.iter_mut() {
            if p.0 >> b & 1 == 1 {
                p.0 ^= m;
                p.1 ^= r;
            }
        }
        piv.push((m, r, b));
    }
    let pivot_bits: u64 = piv.iter().fold(0, |acc, p| acc | 1 << p.2);
    let mut particular = 0u64;
    for &(_, r, b) in &piv {
        if r {
            particular |= 1 << b;
        }
    }
    let mut null = Vec::new();
    for f in 0..n as u32 {
        if pivot_bits >> f & 1 == 1 {
            continue;
        }
        let mut v = 1u64 << f;
        for &(m, _, b) in &piv {
            if m >> f & 1 == 1 {
                v |= 1 << b;
            }
        }
        null.push(v);
    }
    Some((particular, null))
}

/// Independent generators of `{P : P ψ = ψ}`.
///
/// For each X-mask the amplitude ratios `ψ[k⊕x]/ψ[k]` must be fourth roots of unity
/// whose signs are a linear function of `k`; solving that GF(2) system gives `z`.
pub fn stabilizer_group(psi: &FieldVector) -> Result<StabGroup> {
    let n = qubits_of(psi.len())?;
    if psi.is_zero() {
        return Err(Error::InvalidInput("zero vector".into()));
    }
    let k = lcm(psi.conductor(), 4);
    let psi = psi.lift(k)?;
    let amp = psi.entries();
    let support: Vec<usize> = (0..amp.len()).filter(|&i| !amp[i].is_zero()).collect();
    let in_support: Vec<bool> = amp.iter().map(|c| !c.is_zero()).collect();
    let k0 = support[0];
    let rot: Vec<[CycNum; 4]> = amp
        .iter()
        .map(|c| {
            if c.is_zero() {
                std::array::from_fn(|_| CycNum::zero(k))
            } else {
                let ic = c.mul_i();
                [c.clone(), ic.clone(), -c, -ic]
            }
        })
        .collect();
    let unit_ratio = |from: usize, to: usize| -> Option<u8> { (0..4u8).find(|&t| rot[from][t as usize] == amp[to]) };

    let mut candidates = Vec::new();
    'xs: for x in 0..(1u64 << n) {
        if support.iter().any(|&i| !in_support[i ^ x as usize]) {
            continue;
        }
        let Some(t0) = unit_ratio(k0, k0 ^ x as usize) else { continue };
        let mut rows = Vec::with_capacity(support.len());
        for &i in &support[1..] {
            let Some(t) = unit_ratio(i, i ^ x as usize) else { continue 'xs };
            let d = (t + 4 - t0) % 4;
            if d & 1 == 1 {
                continue 'xs;
            }
            rows.push(((i ^ k0) as u64, d == 2));
        }
        let Some((z0, null)) = gf2_solve(n, &rows) else { continue };
        let phase_for = |z: u64| (t0 + 4 - 2 * parity(z & k0 as u64)) % 4;
        candidates.push(PauliOp::new(n, x, z0, phase_for(z0)));
        if x == 0 {
            for z in null {
                candidates.push(PauliOp::new(n, 0, z, phase_for(z)));
            }
        }
    }
    let keep = independent_indices(&candidates);
    let generators = keep.into_iter().map(|i| candidates[i]).collect();
    Ok(StabGroup { n, generators })
}

/// Every Hermitian Pauli stabilizing `psi`, by exhaustive search (test oracle, `n ≤ 4`).
pub fn brute_force_stabilizers(psi: &FieldVector) -> Result<Vec<PauliOp>> {
    let n = qubits_of(psi.len())?;
    if n > 4 {
        return Err(Error::CapExceeded { cap: 4 });
    }
    let mut out = Vec::new();
    for x in 0..1u64 << n {
        for z in 0..1u64 << n {
            for neg in [false, true] {
                let p = PauliOp::hermitian(n, x, z, neg);
                if stabilizes(&p, psi)? {
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}

pub fn is_stabilizer_state(psi: &FieldVector) -> bool {
    stabilizer_group(psi).is_ok_and(|g| g.is_full())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    /// Control first, target second.
    Cnot(usize, usize),
    Cz(usize, usize),
    S(usize),
    Htilde(usize),
    X(usize),
    Z(usize),
    Transvection(#[serde(with = "pauli_label")] PauliOp),
    /// `ζ_order^exponent · I`.
    GlobalPhase { exponent: u32, order: u32 },
}

mod pauli_label {
    use super::PauliOp;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &PauliOp, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&p.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<PauliOp, D::Error> {
        let s = String::deserialize(d)?;
        PauliOp::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl Gate {
    fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Cnot(a, b) | Gate::Cz(a, b) => vec![a, b],
            Gate::S(q) | Gate::Htilde(q) | Gate::X(q) | Gate::Z(q) => vec![q],
            Gate::Transvection(_) | Gate::GlobalPhase { .. } => vec![],
        }
    }

    /// Conductor needed to hold the gate's matrix entries.
    fn conductor(&self) -> u32 {
        match *self {
            Gate::GlobalPhase { order, .. } => lcm(order.max(1), 4),
            _ => 4,
        }
    }

    /// Exact inverse as a gate sequence.
    pub fn inverse(&self) -> Vec<Gate> {
        match *self {
            Gate::Htilde(q) => vec![Gate::Htilde(q), Gate::GlobalPhase { exponent: 1, order: 4 }],
            Gate::S(q) => vec![Gate::S(q), Gate::Z(q)],
            Gate::Transvection(p) => vec![Gate::Transvection(p.neg()), Gate::GlobalPhase { exponent: 3, order: 4 }],
            Gate::GlobalPhase { exponent, order } => vec![Gate::GlobalPhase {
                exponent: (order - exponent % order) % order,
                order,
            }],
            g => vec![g],
        }
    }

    /// Entry-wise complex conjugate as a gate sequence.
    pub fn conjugate(&self) -> Vec<Gate> {
        match *self {
            Gate::Htilde(q) => vec![Gate::Htilde(q), Gate::GlobalPhase { exponent: 1, order: 4 }],
            Gate::S(q) => vec![Gate::S(q), Gate::Z(q)],
            Gate::Transvection(p) => vec![
                Gate::Transvection(p.conj().neg()),
                Gate::GlobalPhase { exponent: 3, order: 4 },
            ],
            Gate::GlobalPhase { exponent, order } => vec![Gate::GlobalPhase {
                exponent: (order - exponent % order) % order,
                order,
            }],
            g => vec![g],
        }
    }

    /// Applies the gate in place to a state of `n` qubits.
    pub fn apply_in_place(&self, n: usize, v: &mut [CycNum]) {
        let len = v.len();
        match *self {
            Gate::X(q) => {
                let b = bit(n, q) as usize;
                for i in 0..len {
                    if i & b == 0 {
                        v.swap(i, i | b);
                    }
                }
            }
            Gate::Z(q) => {
                let b = bit(n, q) as usize;
                for (i, c) in v.iter_mut().enumerate() {
                    if i & b != 0 && !c.is_zero() {
                        *c = -std::mem::replace(c, CycNum::zero(1));
                    }
                }
            }
            Gate::S(q) => {
                let b = bit(n, q) as usize;
                for (i, c) in v.iter_mut().enumerate() {
                    if i & b != 0 && !c.is_zero() {
                        *c = c.mul_i();
                    }
                }
            }
            Gate::Cnot(c, t) => {
                let (bc, bt) = (bit(n, c) as usize, bit(n, t) as usize);
                for i in 0..len {
                    if i & bc != 0 && i & bt == 0 {
                        v.swap(i, i | bt);
                    }
                }
            }
            Gate::Cz(a, b) => {
                let m = (bit(n, a) | bit(n, b)) as usize;
                for (i, c) in v.iter_mut().enumerate() {
                    if i & m == m && !c.is_zero() {
                        *c = -std::mem::replace(c, CycNum::zero(1));
                    }
                }
            }
            Gate::Htilde(q) => {
                let b = bit(n, q) as usize;
                for i in 0..len {
                    if i & b == 0 {
                        let (x, y) = (&v[i], &v[i | b]);
                        if x.is_zero() && y.is_zero() {
                            continue;
                        }
                        let s = times_htilde_scalar(&(x + y));
                        let d = times_htilde_scalar(&(x - y));
                        v[i] = s;
                        v[i | b] = d;
                    }
                }
            }
            Gate::Transvection(p) => {
                let old = FieldVector::new(4, v.to_vec());
                let pv = p.apply(&old).expect("length checked by caller");
                let half = Rational::new(1.into(), 2.into());
                let a = CycNum::one_plus_i().scale(&half);
                let b = a.conj();
                for (i, c) in v.iter_mut().enumerate() {
                    *c = &(&a * old.get(i)) + &(&b * pv.get(i));
                }
            }
            Gate::GlobalPhase { exponent, order } => {
                let z = CycNum::zeta_pow(order, exponent as i64);
                for c in v.iter_mut() {
                    if !c.is_zero() {
                        *c = &*c * &z;
                    }
                }
            }
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Cnot(a, b) => write!(f, "CNOT({a},{b})"),
            Gate::Cz(a, b) => write!(f, "CZ({a},{b})"),
            Gate::S(q) => write!(f, "S({q})"),
            Gate::Htilde(q) => write!(f, "Ht({q})"),
            Gate::X(q) => write!(f, "X({q})"),
            Gate::Z(q) => write!(f, "Z({q})"),
            Gate::Transvection(p) => write!(f, "T[{p}]"),
            Gate::GlobalPhase { exponent, order } => write!(f, "zeta_{order}^{exponent}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordCircuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl CliffordCircuit {
    pub fn new(n: usize) -> Self {
        CliffordCircuit { n, gates: Vec::new() }
    }

    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self> {
        let c = CliffordCircuit { n, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gates.iter().enumerate() {
            let qs = g.qubits();
            if qs.iter().any(|&q| q >= self.n) {
                return Err(Error::InvalidInput(format!("gate {i} ({g}) addresses a qubit outside 0..{}", self.n)));
            }
            if qs.len() == 2 && qs[0] == qs[1] {
                return Err(Error::InvalidInput(format!("gate {i} ({g}) repeats a qubit")));
            }
            if let Gate::Transvection(p) = g {
                if p.n != self.n || !p.is_hermitian() {
                    return Err(Error::InvalidInput(format!("gate {i}: transvection Pauli must be Hermitian on {} qubits", self.n)));
                }
            }
            if let Gate::GlobalPhase { order: 0, .. } = g {
                return Err(Error::InvalidInput(format!("gate {i}: phase order must be positive")));
            }
        }
        Ok(())
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    fn conductor(&self) -> u32 {
        self.gates.iter().fold(4, |k, g| lcm(k, g.conductor()))
    }

    /// `C |v⟩`.
    pub fn apply(&self, v: &FieldVector) -> Result<FieldVector> {
        if v.len() != 1 << self.n {
            return Err(Error::ShapeMismatch(format!("{}-qubit circuit on length {}", self.n, v.len())));
        }
        let k = lcm(v.conductor(), self.conductor());
        let mut e = v.lift(k)?.into_entries();
        for g in &self.gates {
            g.apply_in_place(self.n, &mut e);
        }
        Ok(FieldVector::new(k, e))
    }

    /// `C · a`, column by column.
    pub fn apply_left(&self, a: &FieldMatrix) -> Result<FieldMatrix> {
        let cols = a.columns().iter().map(|c| self.apply(c)).collect::<Result<Vec<_>>>()?;
        FieldMatrix::from_columns(&cols)
    }

    pub fn evaluate(&self) -> FieldMatrix {
        let dim = 1usize << self.n;
        self.apply_left(&FieldMatrix::identity(self.conductor(), dim)).expect("square identity")
    }

    pub fn inverse(&self) -> Self {
        CliffordCircuit {
            n: self.n,
            gates: self.gates.iter().rev().flat_map(Gate::inverse).collect(),
        }
    }

    pub fn conjugate(&self) -> Self {
        CliffordCircuit {
            n: self.n,
            gates: self.gates.iter().flat_map(Gate::conjugate).collect(),
        }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Self) -> Self {
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&other.gates);
        CliffordCircuit { n: self.n, gates }
    }

    /// Relabels qubit `q` as `offset + q` inside a register of `n` qubits.
    pub fn embed(&self, n: usize, offset: usize) -> Self {
        let m = |q: usize| q + offset;
        let gates = self
            .gates
            .iter()
            .map(|g| match *g {
                Gate::Cnot(a, b) => Gate::Cnot(m(a), m(b)),
                Gate::Cz(a, b) => Gate::Cz(m(a), m(b)),
                Gate::S(q) => Gate::S(m(q)),
                Gate::Htilde(q) => Gate::Htilde(m(q)),
                Gate::X(q) => Gate::X(m(q)),
                Gate::Z(q) => Gate::Z(m(q)),
                Gate::Transvection(p) => {
                    let shift = n - offset - self.n;
                    Gate::Transvection(PauliOp::new(n, p.x << shift, p.z << shift, p.phase))
                }
                g @ Gate::GlobalPhase { .. } => g,
            })
            .collect();
        CliffordCircuit { n, gates }
    }

    pub fn tableau(&self) -> CliffordTableau {
        let mut t = CliffordTableau::identity(self.n);
        for g in &self.gates {
            t.apply_gate(g);
        }
        t
    }

    pub fn random(n: usize, len: usize, rng: &mut impl Rng) -> Self {
        let mut c = CliffordCircuit::new(n);
        if n == 0 {
            return c;
        }
        for _ in 0..len {
            let choice = if n >= 2 { rng.gen_range(0..5) } else { rng.gen_range(0..4) };
            let q = rng.gen_range(0..n);
            c.push(match choice {
                0 => Gate::S(q),
                1 => Gate::Htilde(q),
                2 => Gate::X(q),
                3 => Gate::Z(q),
                _ => {
                    let mut t = rng.gen_range(0..n - 1);
                    if t >= q {
                        t += 1;
                    }
                    Gate::Cnot(q, t)
                }
            });
        }
        c
    }
}

impl fmt::Display for CliffordCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gates.iter().map(|g| g.to_string()).collect();
        write!(f, "[{}]", g.join(" "))
    }
}

/// Images of `X_0..X_{n-1}, Z_0..Z_{n-1}` under conjugation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordTableau {
    pub n: usize,
    pub images: Vec<PauliOp>,
}

impl CliffordTableau {
    pub fn identity(n: usize) -> Self {
        let images = (0..n).map(|q| PauliOp::x_on(n, q)).chain((0..n).map(|q| PauliOp::z_on(n, q))).collect();
        CliffordTableau { n, images }
    }

    pub fn x_image(&self, q: usize) -> &PauliOp {
        &self.images[q]
    }

    pub fn z_image(&self, q: usize) -> &PauliOp {
        &self.images[self.n + q]
    }

    /// The 2n x 2n binary matrix whose row `r` is the symplectic vector of image `r`.
    pub fn symplectic_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.n;
        self.images
            .iter()
            .map(|p| (0..n).map(|q| p.bits_on(q).0).chain((0..n).map(|q| p.bits_on(q).1)).collect())
            .collect()
    }

    /// Hermitian images with the canonical commutation relations.
    pub fn is_valid(&self) -> bool {
        let n = self.n;
        if self.images.len() != 2 * n || self.images.iter().any(|p| p.n != n || !p.is_hermitian()) {
            return false;
        }
        for a in 0..2 * n {
            for b in 0..2 * n {
                let expect_anti = a != b && a % n == b % n;
                if self.images[a].commutes(&self.images[b]) == expect_anti {
                    return false;
                }
            }
        }
        true
    }

    /// Left-composes a gate: the tableau of `g · U`.
    pub fn apply_gate(&mut self, g: &Gate) {
        for p in &mut self.images {
            *p = p.conjugate_by(g);
        }
    }

    /// `U P U†` for an arbitrary Pauli `P`.
    pub fn conjugate(&self, p: &PauliOp) -> PauliOp {
        let n = self.n;
        let mut out = PauliOp::new(n, 0, 0, p.phase);
        for q in 0..n {
            if p.x & bit(n, q) != 0 {
                out = out.mul(&self.images[q]);
            }
        }
        for q in 0..n {
            if p.z & bit(n, q) != 0 {
                out = out.mul(&self.images[n + q]);
            }
        }
        out
    }

    /// Packs the tableau into a `u64` (requires `n ≤ 3`).
    pub fn key(&self) -> u64 {
        pack(self.n, &self.images)
    }
}

fn pack(n: usize, images: &[PauliOp]) -> u64 {
    let mut k = 0u64;
    for p in images {
        k = (k << n) | p.x;
        k = (k << n) | p.z;
        k = (k << 1) | p.is_negative() as u64;
    }
    k
}

/// Synthesizes a circuit over `{CNOT, S, H̃, X, Z}` with the given tableau.
pub fn tableau_to_circuit(t: &CliffordTableau) -> Result<CliffordCircuit> {
    if !t.is_valid() {
        return Err(Error::InvalidInput("tableau does not preserve commutation relations".into()));
    }
    let n = t.n;
    let mut w = t.clone();
    let mut ops: Vec<Gate> = Vec::new();
    let mut emit = |w: &mut CliffordTableau, g: Gate| {
        w.apply_gate(&g);
        ops.push(g);
    };
    for q in 0..n {
        // X image -> ±X_q
        let p = *w.x_image(q);
        for j in q..n {
            match p.bits_on(j) {
                (true, true) => emit(&mut w, Gate::S(j)),
                (false, true) => emit(&mut w, Gate::Htilde(j)),
                _ => {}
            }
        }
        let p = *w.x_image(q);
        if !p.bits_on(q).0 {
            let j = (q + 1..n).find(|&j| p.bits_on(j).0).ok_or_else(|| Error::Internal("empty X image".into()))?;
            emit(&mut w, Gate::Cnot(j, q));
        }
        let p = *w.x_image(q);
        for j in q + 1..n {
            if p.bits_on(j).0 {
                emit(&mut w, Gate::Cnot(q, j));
            }
        }
        // Z image -> ±Z_q, keeping X_q
        if w.z_image(q).bits_on(q) == (true, true) {
            emit(&mut w, Gate::Htilde(q));
            emit(&mut w, Gate::S(q));
            emit(&mut w, Gate::Htilde(q));
        }
        let p = *w.z_image(q);
        for j in q + 1..n {
            match p.bits_on(j) {
                (false, false) => continue,
                (true, false) => emit(&mut w, Gate::Htilde(j)),
                (true, true) => {
                    emit(&mut w, Gate::S(j));
                    emit(&mut w, Gate::Htilde(j));
                }
                (false, true) => {}
            }
            emit(&mut w, Gate::Cnot(j, q));
        }
        if w.x_image(q).is_negative() {
            emit(&mut w, Gate::Z(q));
        }
        if w.z_image(q).is_negative() {
            emit(&mut w, Gate::X(q));
        }
    }
    if w != CliffordTableau::identity(n) {
        return Err(Error::Internal("tableau reduction did not reach the identity".into()));
    }
    // tableau-level inverses: H̃ and the Paulis/CNOT are involutions, S^{-1} = S·Z
    let mut gates = Vec::with_capacity(ops.len());
    for g in ops.iter().rev() {
        match *g {
            Gate::S(q) => {
                gates.push(Gate::S(q));
                gates.push(Gate::Z(q));
            }
            g => gates.push(g),
        }
    }
    Ok(CliffordCircuit { n, gates })
}

/// A Clifford matrix split into a gate circuit and a residual global phase.
#[derive(Clone, Debug)]
pub struct CliffordDecomposition {
    pub tableau: CliffordTableau,
    pub circuit: CliffordCircuit,
    /// `u = phase · evaluate(circuit)`.
    pub phase: CycNum,
}

/// Matches `m` against `i^p X^x Z^z` exactly.
fn match_pauli(n: usize, m: &FieldMatrix) -> Option<PauliOp> {
    let x = (0..m.rows()).find(|&r| !m.get(r, 0).is_zero())? as u64;
    let e = m.get(x as usize, 0);
    let p = (0..4u8).find(|&t| times_i_pow(&CycNum::one(4), t) == *e)?;
    let mut z = 0u64;
    for q in 0..n {
        let col = bit(n, q) as usize;
        let f = m.get(col ^ x as usize, col);
        if *f == times_i_pow(&CycNum::one(4), (p + 2) % 4) {
            z |= bit(n, q);
        }
    }
    let cand = PauliOp::new(n, x, z, p);
    (cand.to_matrix() == *m).then_some(cand)
}

pub fn clifford_from_matrix(u: &FieldMatrix) -> Result<CliffordDecomposition> {
    if !u.is_square() {
        return Err(Error::ShapeMismatch("Clifford matrix must be square".into()));
    }
    let n = qubits_of(u.rows())?;
    if !u.is_unitary() {
        return Err(Error::NotUnitary);
    }
    let ud = u.dagger();
    let mut images = Vec::with_capacity(2 * n);
    let gens: Vec<PauliOp> = (0..n).map(|q| PauliOp::x_on(n, q)).chain((0..n).map(|q| PauliOp::z_on(n, q))).collect();
    for g in &gens {
        let m = u.mul(&g.to_matrix())?.mul(&ud)?;
        let img = match_pauli(n, &m).ok_or_else(|| Error::NotClifford(format!("image of {g} is not a Pauli")))?;
        images.push(img);
    }
    let tableau = CliffordTableau { n, images };
    let circuit = tableau_to_circuit(&tableau)?;
    let v = circuit.evaluate();
    let idx = u.first_nonzero().ok_or(Error::NotUnitary)?;
    let (r, c) = (idx / u.cols(), idx % u.cols());
    let phase = u.get(r, c).div(v.get(r, c))?;
    if v.scalar_mul(&phase) != *u {
        return Err(Error::Internal("residual phase does not reconcile".into()));
    }
    Ok(CliffordDecomposition { tableau, circuit, phase })
}

/// Solves `⟨d, rows_j⟩ = rhs_j` over GF(2) for a 2n-bit symplectic vector `d`.
fn gf2_solve_u128(rows: &[(u128, bool)]) -> Option<u128> {
    let mut piv: Vec<(u128, bool, u32)> = Vec::new();
    for &(mut m, mut r) in rows {
        for &(pm, pr, pb) in &piv {
            if m >> pb & 1 == 1 {
                m ^= pm;
                r ^= pr;
            }
        }
        if m == 0 {
            if r {
                return None;
            }
            continue;
        }
        let b = 127 - m.leading_zeros();
        for p in piv.iter_mut() {
            if p.0 >> b & 1 == 1 {
                p.0 ^= m;
                p.1 ^= r;
            }
        }
        piv.push((m, r, b));
    }
    Some(piv.iter().filter(|p| p.1).fold(0, |acc, p| acc | 1 << p.2))
}

/// Completes a full stabilizer group to a tableau with `Z_q ↦ generators[q]`.
pub fn stabilizer_tableau(g: &StabGroup) -> Result<CliffordTableau> {
    let n = g.n;
    if !g.is_full() {
        return Err(Error::NotFullStabilizerGroup { found: g.rank(), expected: n });
    }
    // a vector d with ⟨d, g⟩ = [x_d·z_g + z_d·x_g] is found from rows (z_g ‖ x_g)
    let rows_for = |i: usize| -> Vec<(u128, bool)> {
        g.generators
            .iter()
            .enumerate()
            .map(|(j, p)| ((((p.z as u128) << 64) | p.x as u128), i == j))
            .collect()
    };
    let mut destab = Vec::with_capacity(n);
    for i in 0..n {
        let d = gf2_solve_u128(&rows_for(i)).ok_or_else(|| Error::Internal("no destabilizer".into()))?;
        destab.push(PauliOp::hermitian(n, (d >> 64) as u64, d as u64, false));
    }
    for j in 0..n {
        for i in 0..j {
            if !destab[j].commutes(&destab[i]) {
                let fixed = destab[j].mul(&g.generators[i]);
                destab[j] = PauliOp::hermitian(n, fixed.x, fixed.z, false);
            }
        }
    }
    let mut images = destab;
    images.extend_from_slice(&g.generators);
    let t = CliffordTableau { n, images };
    if !t.is_valid() {
        return Err(Error::Internal("completed tableau is not symplectic".into()));
    }
    Ok(t)
}

/// Finds a circuit `C` and scalar `α` with `ψ = α · C|0…0⟩`.
pub fn state_circuit(psi: &FieldVector) -> Result<(CliffordCircuit, CycNum)> {
    let g = stabilizer_group(psi)?;
    if !g.is_full() {
        return Err(Error::NotFullStabilizerGroup { found: g.rank(), expected: g.n });
    }
    let circuit = tableau_to_circuit(&stabilizer_tableau(&g)?)?;
    let prepared = circuit.apply(&FieldVector::basis(4, psi.len(), 0))?;
    let idx = psi.first_nonzero().expect("nonzero");
    let alpha = psi.get(idx).div(prepared.get(idx))?;
    if prepared.scale(&alpha) != *psi {
        return Err(Error::Internal("prepared state is not proportional".into()));
    }
    Ok((circuit, alpha))
}

/// Counts distinct tableaus reachable from the identity under the given gate words.
pub fn tableau_bfs(n: usize, generators: &[Vec<Gate>], cap: usize) -> Result<u64> {
    if n == 0 || n > 3 {
        return Err(Error::Unsupported(format!("tableau BFS supports 1..=3 qubits, got {n}")));
    }
    let start = CliffordTableau::identity(n);
    let mut seen: FxHashSet<u64> = FxHashSet::default();
    let mut queue: VecDeque<[PauliOp; 6]> = VecDeque::new();
    let mut arr = [PauliOp::identity(n); 6];
    arr[..2 * n].copy_from_slice(&start.images);
    seen.insert(pack(n, &arr[..2 * n]));
    queue.push_back(arr);
    while let Some(cur) = queue.pop_front() {
        for word in generators {
            let mut next = cur;
            for p in next[..2 * n].iter_mut() {
                for g in word {
                    *p = p.conjugate_by(g);
                }
            }
            if seen.insert(pack(n, &next[..2 * n])) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(seen.len() as u64)
}

/// Generator words `{S_q, H̃_q, CNOT(a,b)}` of the n-qubit Clifford group.
pub fn clifford_generators(n: usize) -> Vec<Vec<Gate>> {
    let mut gens = Vec::new();
    for q in 0..n {
        gens.push(vec![Gate::S(q)]);
        gens.push(vec![Gate::Htilde(q)]);
    }
    for a in 0..n {
        for b in 0..n {
            if a != b {
                gens.push(vec![Gate::Cnot(a, b)]);
            }
        }
    }
    gens
}

/// Default limit on visited tableaus, about 1.2 GB of hash set at the cap.
pub const DEFAULT_BFS_CAP: usize = 20_000_000;

/// Order of the n-qubit Clifford group modulo phases.
pub fn clifford_order(n: usize, cap: usize) -> Result<u64> {
    tableau_bfs(n, &clifford_generators(n), cap)
}
