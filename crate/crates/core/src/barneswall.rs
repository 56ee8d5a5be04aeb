//! Barnes-Wall lattices `B^{⊗n} O_E^{2^n}` over `E = Q(ζ_{2^m})`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::cyclo::{euler_phi, CycNum, Rational};
use crate::error::{Error, Result};
use crate::linalg::{kron_apply, kron_apply_columns, kron_apply_rows, FieldMatrix, FieldVector};
use crate::qmat::QMatrix;
use crate::stab::{is_stabilizer_state, state_circuit, CliffordCircuit};
use crate::zlattice::{flatten_module, power_basis, ZLattice};

/// Largest qubit count accepted by [`enumerate_minimal_vectors`] unless overridden.
pub const DEFAULT_ENUM_QUBITS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BwLattice {
    pub n: usize,
    pub m: u32,
}

/// `B = [[1+i, 1], [0, 1]]`.
pub fn b_matrix() -> FieldMatrix {
    FieldMatrix::from_rows(
        4,
        vec![vec![CycNum::one_plus_i(), CycNum::one(4)], vec![CycNum::zero(4), CycNum::one(4)]],
    )
    .expect("2x2")
}

/// `B^{-1} = [[(1-i)/2, -(1-i)/2], [0, 1]]`.
pub fn b_inverse() -> FieldMatrix {
    let half = Rational::new(1.into(), 2.into());
    let a = CycNum::one_plus_i().conj().scale(&half);
    FieldMatrix::from_rows(4, vec![vec![a.clone(), -&a], vec![CycNum::zero(4), CycNum::one(4)]]).expect("2x2")
}

impl BwLattice {
    pub fn new(n: usize, m: u32) -> Result<Self> {
        if !(2..=12).contains(&m) {
            return Err(Error::Unsupported(format!("m = {m}; need 2 <= m <= 12")));
        }
        if n > 20 {
            return Err(Error::Unsupported(format!("{n} qubits")));
        }
        Ok(BwLattice { n, m })
    }

    pub fn conductor(&self) -> u32 {
        1 << self.m
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    fn prepare(&self, v: &FieldVector) -> Result<FieldVector> {
        if v.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!("vector of length {} for {} qubits", v.len(), self.n)));
        }
        v.lift(self.conductor())
    }

    pub fn to_bw_coords(&self, v: &FieldVector) -> Result<FieldVector> {
        kron_apply(&b_inverse(), self.n, &self.prepare(v)?)
    }

    pub fn from_bw_coords(&self, c: &FieldVector) -> Result<FieldVector> {
        kron_apply(&b_matrix(), self.n, &self.prepare(c)?)
    }

    pub fn in_lattice(&self, v: &FieldVector) -> Result<bool> {
        Ok(self.to_bw_coords(v)?.is_integral())
    }

    /// Membership in the dual lattice `B^{⊗n} O_E / (1+i)^n`.
    pub fn in_dual(&self, v: &FieldVector) -> Result<bool> {
        let c = self.to_bw_coords(v)?;
        let s = one_plus_i_pow(self.n);
        Ok(c.scale(&s).is_integral())
    }

    pub fn basis_matrix(&self) -> FieldMatrix {
        b_matrix().tensor_power(self.n).lift(self.conductor()).expect("4 | 2^m")
    }

    pub fn dual_basis_matrix(&self) -> Result<FieldMatrix> {
        Ok(self.basis_matrix().scalar_mul(&one_plus_i_pow(self.n).inv()?))
    }

    /// The least trace norm of a nonzero vector, `2^{m-2} · 2^n`.
    pub fn minimum(&self) -> Rational {
        Rational::from_integer(BigInt::from(1u64) << (self.m as usize - 2 + self.n))
    }

    /// Z-flattening of the lattice spanned by the columns of `basis` over `O_E`.
    pub fn flatten_basis(&self, basis: &FieldMatrix) -> Result<ZLattice> {
        let k = self.conductor();
        flatten_module(&basis.columns(), &power_basis(k), k)
    }
}

pub fn one_plus_i_pow(n: usize) -> CycNum {
    let mut s = CycNum::one(4);
    for _ in 0..n {
        s = &s * &CycNum::one_plus_i();
    }
    s
}

pub fn lattice_minimum(lat: &BwLattice) -> Rational {
    lat.minimum()
}

/// Tests `(B^{-1})^{⊗n_out} A B^{⊗n_in}` for integrality; returns the verdict and the matrix.
pub fn operator_in_bw(a: &FieldMatrix, n_out: usize, n_in: usize) -> Result<(bool, FieldMatrix)> {
    if a.rows() != 1 << n_out || a.cols() != 1 << n_in {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} matrix for {n_in} input and {n_out} output qubits",
            a.rows(),
            a.cols()
        )));
    }
    let left = kron_apply_columns(&b_inverse(), n_out, a)?;
    let t = kron_apply_rows(&left, &b_matrix(), n_in)?;
    Ok((t.is_integral(), t))
}

/// Dual basis `(M†)^{-1}` of the lattice spanned by the columns of `m`.
pub fn dual_basis(m: &FieldMatrix) -> Result<FieldMatrix> {
    m.dagger().inverse()
}

/// A set of vectors keyed by their canonical coefficient strings.
pub type VectorSet = BTreeMap<Vec<Vec<String>>, FieldVector>;

fn insert(set: &mut VectorSet, v: FieldVector) {
    set.insert(v.key(), v);
}

fn one_qubit_minimal(m: u32) -> VectorSet {
    let k = 1u32 << m;
    let opi = CycNum::one_plus_i().lift(k).expect("4 | 2^m");
    let zero = CycNum::zero(k);
    let one = CycNum::one(k);
    let mut shapes = vec![
        FieldVector::new(k, vec![opi.clone(), zero.clone()]),
        FieldVector::new(k, vec![zero, opi]),
    ];
    for j in 0..4 {
        shapes.push(FieldVector::new(k, vec![one.clone(), CycNum::zeta_pow(4, j).lift(k).unwrap()]));
    }
    let mut out = VectorSet::new();
    for s in &shapes {
        for t in 0..k as i64 {
            insert(&mut out, s.scale(&CycNum::zeta_pow(k, t)));
        }
    }
    out
}

/// Minimal vectors by the recursion `(1+i)|0⟩v`, `(1+i)|1⟩v`, `|0⟩v₀ + |1⟩v₁`.
pub fn enumerate_minimal_vectors(lat: &BwLattice, max_qubits: usize) -> Result<VectorSet> {
    if lat.n > max_qubits {
        return Err(Error::CapExceeded { cap: max_qubits });
    }
    if lat.n == 0 {
        return Err(Error::Unsupported("zero qubits".into()));
    }
    let k = lat.conductor();
    let mut cur = one_qubit_minimal(lat.m);
    for level in 2..=lat.n {
        let sub = BwLattice::new(level, lat.m)?;
        let min = sub.minimum();
        let opi = CycNum::one_plus_i().lift(k)?;
        let zero_half = FieldVector::zeros(k, 1 << (level - 1));
        let prev: Vec<&FieldVector> = cur.values().collect();
        let mut next = VectorSet::new();
        for v in &prev {
            let w = v.scale(&opi);
            insert(&mut next, concat(&w, &zero_half));
            insert(&mut next, concat(&zero_half, &w));
        }
        for v0 in &prev {
            for v1 in &prev {
                let cand = concat(v0, v1);
                if sub.in_lattice(&cand)? {
                    debug_assert_eq!(cand.trace_norm(), min);
                    insert(&mut next, cand);
                }
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// `|0⟩⊗a + |1⟩⊗b`.
fn concat(a: &FieldVector, b: &FieldVector) -> FieldVector {
    let mut e = a.entries().to_vec();
    e.extend_from_slice(b.entries());
    FieldVector::new(a.conductor(), e)
}

/// Exact Gram matrix `½ Tr_{E/Q}⟨w_s, w_t⟩` of the Z-basis `ζ^t · (column s of B^{⊗n})`.
pub fn flattened_gram(lat: &BwLattice) -> (Vec<FieldVector>, QMatrix) {
    let k = lat.conductor();
    let basis = lat.basis_matrix();
    let mut zb = Vec::new();
    for col in basis.columns() {
        for t in 0..euler_phi(k) {
            zb.push(col.scale(&CycNum::zeta_pow(k, t as i64)));
        }
    }
    let d = zb.len();
    let mut g = QMatrix::zeros(d, d);
    let two = Rational::from_integer(2.into());
    for s in 0..d {
        for t in s..d {
            let v = zb[s].inner_product(&zb[t]).expect("same length").trace_e_over_q() / &two;
            g.set(s, t, v.clone());
            g.set(t, s, v);
        }
    }
    (zb, g)
}

fn isqrt_floor(r: &Rational) -> i64 {
    if r.is_negative() {
        return 0;
    }
    let f = r.floor().to_integer();
    let mut s = f.sqrt();
    while Rational::from_integer(&s * &s) > *r {
        s -= 1;
    }
    while Rational::from_integer((&s + 1) * (&s + 1)) <= *r {
        s += 1;
    }
    s.to_i64().unwrap_or(i64::MAX)
}

/// All nonzero lattice vectors with trace norm at most `bound`, by an exhaustive
/// integer box search. The box radius in coordinate `i` is `⌊√(bound · (G⁻¹)_ii)⌋`,
/// which bounds every coordinate of a vector of norm `≤ bound`.
pub fn brute_force_short_vectors(lat: &BwLattice, bound: &Rational, cap: u64) -> Result<VectorSet> {
    if lat.n > 2 || lat.m > 3 {
        return Err(Error::Unsupported(format!("brute force limited to n <= 2, m <= 3 (got n={}, m={})", lat.n, lat.m)));
    }
    let (zb, g) = flattened_gram(lat);
    let d = zb.len();
    let ginv = g.inverse().ok_or_else(|| Error::Internal("singular Gram matrix".into()))?;
    let radii: Vec<i64> = (0..d).map(|i| isqrt_floor(&(bound * ginv.get(i, i)))).collect();
    let total = radii.iter().try_fold(1u64, |acc, &r| acc.checked_mul(2 * r as u64 + 1));
    match total {
        Some(t) if t <= cap => {}
        _ => return Err(Error::CapExceeded { cap: cap as usize }),
    }
    // integer Gram matrix scaled by the common denominator
    let mut den = BigInt::one();
    for x in &g.data {
        den = num_integer::Integer::lcm(&den, x.denom());
    }
    let denr = Rational::from_integer(den.clone());
    let gi: Vec<i64> = g.data.iter().map(|x| (x * &denr).to_integer().to_i64().expect("small Gram entries")).collect();
    let limit = (bound * &denr).floor().to_integer().to_i64().expect("small bound");
    let mut out = VectorSet::new();
    if limit <= 0 {
        return Ok(out);
    }
    let mut a: Vec<i64> = radii.iter().map(|r| -r).collect();
    loop {
        let mut norm = 0i64;
        for s in 0..d {
            if a[s] == 0 {
                continue;
            }
            let row = &gi[s * d..(s + 1) * d];
            let dot: i64 = row.iter().zip(&a).map(|(x, y)| x * y).sum();
            norm += a[s] * dot;
        }
        if norm > 0 && norm <= limit {
            let mut v = FieldVector::zeros(lat.conductor(), lat.dim());
            for (s, &c) in a.iter().enumerate() {
                if c != 0 {
                    let w = zb[s].scale(&CycNum::from_i64(lat.conductor(), c));
                    v = v.add(&w)?;
                }
            }
            insert(&mut out, v);
        }
        let mut i = 0;
        loop {
            if i == d {
                return Ok(out);
            }
            if a[i] < radii[i] {
                a[i] += 1;
                break;
            }
            a[i] = -radii[i];
            i += 1;
        }
    }
}

/// Expresses a minimal vector as `ζ_{2^m}^k (1+i)^n C|0…0⟩`; returns `(C, k)`.
pub fn certify_minimal_vector(lat: &BwLattice, v: &FieldVector) -> Result<(CliffordCircuit, u32)> {
    if !is_stabilizer_state(v) {
        return Err(Error::InvalidInput("not a stabilizer state".into()));
    }
    let (c, alpha) = state_circuit(v)?;
    let unit = alpha.div(&one_plus_i_pow(lat.n))?;
    let root = unit
        .lift(lcm_conductor(&unit, lat.conductor()))?
        .root_of_unity()
        .and_then(|r| r.exponent_mod(lat.conductor()))
        .ok_or_else(|| Error::InvalidInput("scalar is not a 2^m-th root of unity".into()))?;
    Ok((c, root))
}

fn lcm_conductor(c: &CycNum, k: u32) -> u32 {
    crate::cyclo::lcm(c.conductor(), k)
}
