//! Recognition and synthesis of stabilizer operators
//!
//! `A = ζ_{2^m}^j (1+i)^{n'-k} R (|0⟩^{⊗(n'-k)} ⊗ I)(⟨0|^{⊗(n-k)} ⊗ I) L†`
//!
//! from their matrices, through the Choi state `(1+i)^n Σ_j |j⟩ ⊗ A|j⟩`.

use rand::Rng;
use serde::Serialize;

use crate::barneswall::{one_plus_i_pow, operator_in_bw, BwLattice};
use crate::cyclo::{lcm, CycNum};
use crate::error::{Error, Result};
use crate::linalg::{frobenius_sq, FieldMatrix, FieldVector};
use crate::stab::{
    independent_indices, stabilizer_group, state_circuit, CliffordCircuit, Gate, PauliOp, StabGroup,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiState {
    pub n_in: usize,
    pub n_out: usize,
    pub vector: FieldVector,
}

fn check_shape(a: &FieldMatrix, n_in: usize, n_out: usize) -> Result<()> {
    if a.rows() != 1 << n_out || a.cols() != 1 << n_in {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} matrix does not map {n_in} qubits to {n_out} qubits",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

/// Qubit counts `(n_in, n_out)` from a matrix shape.
pub fn qubit_counts(a: &FieldMatrix) -> Result<(usize, usize)> {
    let q = |d: usize| {
        if d.is_power_of_two() {
            Ok(d.trailing_zeros() as usize)
        } else {
            Err(Error::ShapeMismatch(format!("dimension {d} is not a power of two")))
        }
    };
    Ok((q(a.cols())?, q(a.rows())?))
}

/// Entry `j·2^{n_out} + r` is `(1+i)^{n_in} A[r][j]`.
pub fn choi_state(a: &FieldMatrix, n_in: usize, n_out: usize) -> Result<ChoiState> {
    check_shape(a, n_in, n_out)?;
    let s = one_plus_i_pow(n_in);
    let k = lcm(a.conductor(), 4);
    let mut e = Vec::with_capacity(a.rows() * a.cols());
    for j in 0..a.cols() {
        for r in 0..a.rows() {
            e.push(a.get(r, j) * &s);
        }
    }
    Ok(ChoiState {
        n_in,
        n_out,
        vector: FieldVector::new(k, e),
    })
}

/// Whether every coefficient at an odd power of `ζ_{2^M}` vanishes.
fn in_half_field(c: &CycNum) -> bool {
    c.coeffs().iter().skip(1).step_by(2).all(num_traits::Zero::is_zero)
}

/// Moves `a` to `Q(ζ_{2^m})` with the least `m ≥ 2` (or `m_override` if larger).
pub fn to_dyadic(a: &FieldMatrix, m_override: Option<u32>) -> Result<(u32, FieldMatrix)> {
    let k = a.conductor();
    let mut a = if k.is_power_of_two() {
        a.clone()
    } else {
        let mut target = 1u32;
        for e in a.entries() {
            target = lcm(target, e.normalize().conductor());
        }
        if !target.is_power_of_two() {
            return Err(Error::NotDyadic);
        }
        let entries = a
            .entries()
            .iter()
            .map(|e| e.normalize().lift(target))
            .collect::<Result<Vec<_>>>()?;
        FieldMatrix::new(target, a.rows(), a.cols(), entries)?
    };
    if a.conductor() < 4 {
        a = a.lift(4)?;
    }
    let mut m = a.conductor().trailing_zeros();
    while m > 2 && a.entries().iter().all(in_half_field) {
        let half = 1u32 << (m - 1);
        let entries = a
            .entries()
            .iter()
            .map(|e| e.restrict(half).ok_or_else(|| Error::Internal("subfield restriction".into())))
            .collect::<Result<Vec<_>>>()?;
        a = FieldMatrix::new(half, a.rows(), a.cols(), entries)?;
        m -= 1;
    }
    if let Some(mo) = m_override {
        if mo < m {
            return Err(Error::InvalidInput(format!("entries need m >= {m}, got --m {mo}")));
        }
        if mo > 12 {
            return Err(Error::Unsupported(format!("m = {mo}")));
        }
        a = a.lift(1 << mo)?;
        m = mo;
    }
    Ok((m, a))
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Verdict {
    pub m: u32,
    pub trace_ok: bool,
    pub integral_ok: bool,
    /// Both conditions hold, so the Choi state is a minimal lattice vector.
    pub choi_minimal: bool,
    pub failure_reason: Option<String>,
    #[serde(skip)]
    pub transformed: FieldMatrix,
}

/// Evaluates the trace condition `Tr(A†A) = 2^{n_out}` and the integrality of
/// `(B^{-1})^{⊗n_out} A B^{⊗n_in}`.
pub fn check_theorem1(a: &FieldMatrix, n_in: usize, n_out: usize, m_override: Option<u32>) -> Result<Theorem1Verdict> {
    check_shape(a, n_in, n_out)?;
    let (m, a) = to_dyadic(a, m_override)?;
    let tr = frobenius_sq(&a);
    let trace_ok = tr == CycNum::from_i64(1, 1i64 << n_out);
    let (integral_ok, transformed) = operator_in_bw(&a, n_out, n_in)?;
    let failure_reason = match (trace_ok, integral_ok) {
        (true, true) => None,
        (false, true) => Some(format!("trace: Tr(A^dagger A) = {tr}, expected {}", 1u64 << n_out)),
        (true, false) => Some("integrality".to_string()),
        (false, false) => Some(format!("trace and integrality: Tr(A^dagger A) = {tr}")),
    };
    Ok(Theorem1Verdict {
        m,
        trace_ok,
        integral_ok,
        choi_minimal: trace_ok && integral_ok,
        failure_reason,
        transformed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabOpForm {
    pub n_in: usize,
    pub n_out: usize,
    pub k: usize,
    pub m: u32,
    /// Phase `ζ_{2^m}^j`.
    pub j: u32,
    #[serde(rename = "L")]
    pub l: CliffordCircuit,
    #[serde(rename = "R")]
    pub r: CliffordCircuit,
}

impl StabOpForm {
    /// A random form with circuits of `depth` gates.
    pub fn random(n_in: usize, n_out: usize, m: u32, depth: usize, rng: &mut impl Rng) -> Self {
        let k = rng.gen_range(0..=n_in.min(n_out));
        StabOpForm {
            n_in,
            n_out,
            k,
            m,
            j: rng.gen_range(0..1u32 << m),
            l: CliffordCircuit::random(n_in, depth, rng),
            r: CliffordCircuit::random(n_out, depth, rng),
        }
    }
}

pub fn reconstruct(f: &StabOpForm) -> Result<FieldMatrix> {
    if f.k > f.n_in.min(f.n_out) || f.l.n != f.n_in || f.r.n != f.n_out {
        return Err(Error::InvalidInput("inconsistent stabilizer operator form".into()));
    }
    let kk = 1u32 << f.m;
    let ldag = f.l.inverse().evaluate();
    let (din, dout, dk) = (1usize << f.n_in, 1usize << f.n_out, 1usize << f.k);
    // (|0..0⟩ ⊗ I)(⟨0..0| ⊗ I) keeps the first 2^k rows and pads to 2^{n_out}
    let mut mid = FieldMatrix::zeros(ldag.conductor(), dout, din);
    for r in 0..dk {
        for c in 0..din {
            mid.set(r, c, ldag.get(r, c).clone());
        }
    }
    let out = f.r.apply_left(&mid)?;
    let scale = &one_plus_i_pow(f.n_out - f.k) * &CycNum::zeta_pow(kk, f.j as i64);
    out.scalar_mul(&scale).lift(lcm(out.conductor(), kk))
}

/// Local circuits bringing a stabilizer group of a bipartite state to the canonical form.
#[derive(Clone, Debug)]
pub struct BipartiteForm {
    /// Acts on the first `n_in` qubits.
    pub c_in: CliffordCircuit,
    /// Acts on the last `n_out` qubits, numbered from 0.
    pub c_out: CliffordCircuit,
    pub k: usize,
}

struct Work {
    n: usize,
    gens: Vec<PauliOp>,
    gates: Vec<Gate>,
}

impl Work {
    fn apply(&mut self, g: Gate) {
        for p in &mut self.gens {
            *p = p.conjugate_by(&g);
        }
        self.gates.push(g);
    }

    fn letter(&self, i: usize, q: usize) -> (bool, bool) {
        self.gens[i].bits_on(q)
    }

    fn mul_into(&mut self, target: usize, by: usize) {
        self.gens[target] = self.gens[target].mul(&self.gens[by]);
    }

    /// Makes the part of generator `i` on qubits `q..hi` equal to `±Z_q`.
    fn reduce_to_z(&mut self, i: usize, q: usize, hi: usize) -> Result<()> {
        for j in q..hi {
            match self.letter(i, j) {
                (true, false) => self.apply(Gate::Htilde(j)),
                (true, true) => {
                    self.apply(Gate::S(j));
                    self.apply(Gate::Htilde(j));
                }
                _ => {}
            }
        }
        if !self.letter(i, q).1 {
            let j = (q + 1..hi)
                .find(|&j| self.letter(i, j).1)
                .ok_or_else(|| Error::Internal("local generator has no support".into()))?;
            self.apply(Gate::Cnot(q, j));
        }
        for j in q + 1..hi {
            if self.letter(i, j).1 {
                self.apply(Gate::Cnot(j, q));
            }
        }
        Ok(())
    }

    /// Makes the part of generator `i` on qubits `q..hi` equal to `±X_q`.
    fn reduce_to_x(&mut self, i: usize, q: usize, hi: usize) -> Result<()> {
        for j in q..hi {
            match self.letter(i, j) {
                (true, true) => self.apply(Gate::S(j)),
                (false, true) => self.apply(Gate::Htilde(j)),
                _ => {}
            }
        }
        if !self.letter(i, q).0 {
            let j = (q + 1..hi)
                .find(|&j| self.letter(i, j).0)
                .ok_or_else(|| Error::Internal("paired generator has no support".into()))?;
            self.apply(Gate::Cnot(j, q));
        }
        for j in q + 1..hi {
            if self.letter(i, j).0 {
                self.apply(Gate::Cnot(q, j));
            }
        }
        Ok(())
    }

    /// Makes generator `i` equal to `±Z_q` on `q..hi` while fixing `X_q`.
    fn reduce_partner_to_z(&mut self, i: usize, q: usize, hi: usize) -> Result<()> {
        match self.letter(i, q) {
            (true, true) => {
                self.apply(Gate::Htilde(q));
                self.apply(Gate::S(q));
                self.apply(Gate::Htilde(q));
            }
            (false, true) => {}
            _ => return Err(Error::Internal("partner does not anticommute on the pivot".into())),
        }
        for j in q + 1..hi {
            match self.letter(i, j) {
                (false, false) => continue,
                (true, false) => self.apply(Gate::Htilde(j)),
                (true, true) => {
                    self.apply(Gate::S(j));
                    self.apply(Gate::Htilde(j));
                }
                (false, true) => {}
            }
            self.apply(Gate::Cnot(j, q));
        }
        Ok(())
    }
}

/// Basis of the elements whose letters vanish on `other` (x and z masks).
fn local_subgroup(gens: &[PauliOp], other: u64) -> Vec<PauliOp> {
    let mut rows = gens.to_vec();
    let mut used = vec![false; rows.len()];
    for b in 0..64 {
        let bit = 1u64 << b;
        if other & bit == 0 {
            continue;
        }
        for is_x in [true, false] {
            let has = |p: &PauliOp| if is_x { p.x & bit != 0 } else { p.z & bit != 0 };
            let Some(piv) = (0..rows.len()).find(|&i| !used[i] && has(&rows[i])) else { continue };
            used[piv] = true;
            let pr = rows[piv];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != piv && has(r) {
                    *r = r.mul(&pr);
                }
            }
        }
    }
    rows.into_iter().zip(used).filter(|(_, u)| !u).map(|(r, _)| r).collect()
}

pub fn bipartite_normal_form(g: &StabGroup, n_in: usize, n_out: usize) -> Result<BipartiteForm> {
    let n = n_in + n_out;
    if g.n != n {
        return Err(Error::ShapeMismatch(format!("{}-qubit group for {n_in}+{n_out} qubits", g.n)));
    }
    if !g.is_full() {
        return Err(Error::NotFullStabilizerGroup { found: g.rank(), expected: n });
    }
    let b_mask = if n_out == 0 { 0 } else { (1u64 << n_out) - 1 };
    let a_mask = ((1u64 << n) - 1) & !b_mask;
    let s_a = local_subgroup(&g.generators, b_mask);
    let s_b = local_subgroup(&g.generators, a_mask);
    let (p, q) = (s_a.len(), s_b.len());
    if n_in < p || n_in - p != n_out - q.min(n_out) || n_out < q {
        return Err(Error::Internal("local subgroup ranks are inconsistent".into()));
    }
    let k = n_in - p;
    let mut cand = s_a.clone();
    cand.extend_from_slice(&s_b);
    cand.extend_from_slice(&g.generators);
    let keep = independent_indices(&cand);
    if keep.len() != n || keep[..p + q] != (0..p + q).collect::<Vec<_>>()[..] {
        return Err(Error::Internal("generator completion failed".into()));
    }
    let paired: Vec<PauliOp> = keep[p + q..].iter().map(|&i| cand[i]).collect();
    debug_assert_eq!(paired.len(), 2 * k);

    let mut w = Work {
        n,
        gens: s_a.into_iter().chain(s_b).chain(paired).collect(),
        gates: Vec::new(),
    };
    // input-local generators -> Z_0..Z_{p-1}
    for i in 0..p {
        for j in 0..i {
            if w.letter(i, j).1 {
                w.mul_into(i, j);
            }
        }
        w.reduce_to_z(i, i, n_in)?;
        if w.gens[i].is_negative() {
            w.apply(Gate::X(i));
        }
    }
    // output-local generators -> Z_{n_in}..Z_{n_in+q-1}
    for i in 0..q {
        let gi = p + i;
        for j in 0..i {
            if w.letter(gi, n_in + j).1 {
                w.mul_into(gi, p + j);
            }
        }
        w.reduce_to_z(gi, n_in + i, n)?;
        if w.gens[gi].is_negative() {
            w.apply(Gate::X(n_in + i));
        }
    }
    // clear local Z letters from the paired generators
    let first_pair = p + q;
    for r in first_pair..n {
        for i in 0..p {
            if w.letter(r, i).1 {
                w.mul_into(r, i);
            }
        }
        for i in 0..q {
            if w.letter(r, n_in + i).1 {
                w.mul_into(r, p + i);
            }
        }
    }
    // input side of the pairs
    let mut remaining: Vec<usize> = (first_pair..n).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(k);
    let a_part = |p: &PauliOp| PauliOp::new(n, p.x & a_mask, p.z & a_mask, 0);
    for t in 0..k {
        let qa = p + t;
        // prefer a pair already showing X and Z on the pivot, to avoid needless gates
        let mut best: Option<(usize, usize, u8)> = None;
        for &x in &remaining {
            for &y in &remaining {
                if a_part(&w.gens[x]).commutes(&a_part(&w.gens[y])) {
                    continue;
                }
                let score = (w.letter(x, qa) == (true, false)) as u8 + (w.letter(y, qa) == (false, true)) as u8;
                if best.is_none_or(|b| score > b.2) {
                    best = Some((x, y, score));
                }
            }
        }
        let (gi, hi, _) = best.ok_or_else(|| Error::Internal("no anticommuting pair across the cut".into()))?;
        w.reduce_to_x(gi, qa, n_in)?;
        w.reduce_partner_to_z(hi, qa, n_in)?;
        remaining.retain(|&r| r != gi && r != hi);
        for &r in &remaining.clone() {
            let (x, z) = w.letter(r, qa);
            if x {
                w.mul_into(r, gi);
            }
            if z {
                w.mul_into(r, hi);
            }
        }
        pairs.push((gi, hi));
    }
    // output side of the pairs
    for (t, &(gi, hi)) in pairs.iter().enumerate() {
        let qb = n_in + q + t;
        w.reduce_to_x(gi, qb, n)?;
        w.reduce_partner_to_z(hi, qb, n)?;
    }
    for (t, &(gi, hi)) in pairs.iter().enumerate() {
        let qa = p + t;
        if w.gens[gi].is_negative() {
            w.apply(Gate::Z(qa));
        }
        if w.gens[hi].is_negative() {
            w.apply(Gate::X(qa));
        }
    }
    // verify the canonical form
    let mut expected: Vec<PauliOp> = (0..p).map(|i| PauliOp::z_on(n, i)).collect();
    expected.extend((0..q).map(|i| PauliOp::z_on(n, n_in + i)));
    for t in 0..k {
        let (a, b) = (p + t, n_in + q + t);
        let xx = PauliOp::x_on(n, a).mul(&PauliOp::x_on(n, b));
        let zz = PauliOp::z_on(n, a).mul(&PauliOp::z_on(n, b));
        expected.push(xx);
        expected.push(zz);
    }
    let mut got: Vec<PauliOp> = w.gens[..first_pair].to_vec();
    for &(gi, hi) in &pairs {
        got.push(w.gens[gi]);
        got.push(w.gens[hi]);
    }
    if got != expected {
        return Err(Error::Internal("bipartite reduction did not reach the canonical form".into()));
    }
    let mut c_in = CliffordCircuit::new(n_in);
    let mut c_out = CliffordCircuit::new(n_out);
    for g in w.gates {
        match g {
            Gate::Cnot(a, b) if a >= n_in => c_out.push(Gate::Cnot(a - n_in, b - n_in)),
            Gate::Cnot(..) => c_in.push(g),
            Gate::S(x) | Gate::Htilde(x) | Gate::X(x) | Gate::Z(x) if x >= n_in => c_out.push(shift(g, n_in)),
            _ => c_in.push(g),
        }
    }
    let _ = w.n;
    Ok(BipartiteForm { c_in, c_out, k })
}

fn shift(g: Gate, by: usize) -> Gate {
    match g {
        Gate::S(x) => Gate::S(x - by),
        Gate::Htilde(x) => Gate::Htilde(x - by),
        Gate::X(x) => Gate::X(x - by),
        Gate::Z(x) => Gate::Z(x - by),
        g => g,
    }
}

/// Recovers `(L, R, k, j)` with [`reconstruct`] giving back `a` exactly.
pub fn recognize(a: &FieldMatrix, n_in: usize, n_out: usize, m_override: Option<u32>) -> Result<StabOpForm> {
    let v = check_theorem1(a, n_in, n_out, m_override)?;
    if !v.choi_minimal {
        return Err(Error::NotStabilizerOperator(v.failure_reason.unwrap_or_default()));
    }
    let m = v.m;
    let a = a.lift(lcm(a.conductor(), 1 << m))?;
    let choi = choi_state(&a, n_in, n_out)?;
    let g = stabilizer_group(&choi.vector)?;
    let bf = bipartite_normal_form(&g, n_in, n_out)?;
    let r = bf.c_out.inverse();
    let l = bf.c_in.inverse().conjugate();
    let mut form = StabOpForm {
        n_in,
        n_out,
        k: bf.k,
        m,
        j: 0,
        l,
        r,
    };
    let base = reconstruct(&form)?;
    let idx = a
        .first_nonzero()
        .ok_or_else(|| Error::NotStabilizerOperator("zero matrix".into()))?;
    let (row, col) = (idx / a.cols(), idx % a.cols());
    let ratio = a.get(row, col).div(base.get(row, col))?;
    let kk = 1u32 << m;
    let j = ratio
        .lift(lcm(ratio.conductor(), kk))?
        .root_of_unity()
        .and_then(|r| r.exponent_mod(kk))
        .ok_or_else(|| Error::Internal(format!("phase {ratio} is not a root of unity")))?;
    form.j = j;
    if reconstruct(&form)? != a {
        return Err(Error::Internal("reconstruction mismatch".into()));
    }
    Ok(form)
}

/// `ψ = ζ_{2^m}^j C|0…0⟩` for a unit-norm vector whose scaled lattice coordinates
/// `((1+i) B^{-1})^{⊗n} ψ` are integral; `None` when either condition fails.
pub fn recognize_state(psi: &FieldVector, m: u32) -> Result<Option<(CliffordCircuit, u32)>> {
    if psi.is_zero() {
        return Err(Error::InvalidInput("zero vector".into()));
    }
    if !psi.len().is_power_of_two() {
        return Err(Error::ShapeMismatch(format!("length {} is not a power of two", psi.len())));
    }
    let kk = 1u32 << m;
    let psi = psi.lift(lcm(psi.conductor(), kk)).map_err(|_| Error::NotDyadic)?;
    if psi.conductor() != kk {
        return Err(Error::NotInField { found: psi.conductor(), expected: kk });
    }
    let n = psi.len().trailing_zeros() as usize;
    let lat = BwLattice::new(n, m)?;
    if !psi.norm_sq().is_one() || !lat.in_dual(&psi)? {
        return Ok(None);
    }
    let (c, alpha) = state_circuit(&psi)?;
    let j = alpha
        .lift(lcm(alpha.conductor(), kk))?
        .root_of_unity()
        .and_then(|r| r.exponent_mod(kk))
        .ok_or_else(|| Error::Internal("state phase is not a root of unity".into()))?;
    Ok(Some((c, j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stab::Gate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn htilde() -> FieldMatrix {
        CliffordCircuit::from_gates(1, vec![Gate::Htilde(0)]).unwrap().evaluate()
    }

    #[test]
    fn choi_examples() {
        let c = choi_state(&FieldMatrix::identity(4, 2), 1, 1).unwrap();
        assert_eq!(c.vector, FieldVector::from_i64(4, &[1, 0, 0, 1]).scale(&CycNum::one_plus_i()));
        let p = FieldMatrix::from_rows(4, vec![vec![CycNum::one_plus_i(), CycNum::zero(4)], vec![CycNum::zero(4), CycNum::zero(4)]]).unwrap();
        let c = choi_state(&p, 1, 1).unwrap();
        assert_eq!(c.vector.get(0), &(CycNum::i() * CycNum::from_i64(4, 2)));
        assert!(choi_state(&FieldMatrix::zeros(4, 2, 2), 1, 1).unwrap().vector.is_zero());
    }

    #[test]
    fn check_examples() {
        let v = check_theorem1(&htilde(), 1, 1, None).unwrap();
        assert!(v.trace_ok && v.integral_ok);
        let proj = FieldMatrix::from_i64(4, 2, 2, &[1, 0, 0, 0]).unwrap();
        let v = check_theorem1(&proj, 1, 1, None).unwrap();
        assert!(!v.trace_ok);
        let v = check_theorem1(&proj.scalar_mul(&CycNum::one_plus_i()), 1, 1, None).unwrap();
        assert!(v.trace_ok && v.integral_ok);
        let t = FieldMatrix::diagonal(vec![CycNum::one(8), CycNum::zeta(8)]);
        let v = check_theorem1(&t, 1, 1, None).unwrap();
        assert!(v.trace_ok && !v.integral_ok);
        assert_eq!(v.m, 3);
    }

    #[test]
    fn dyadic_inference() {
        let (m, a) = to_dyadic(&FieldMatrix::identity(8, 2), None).unwrap();
        assert_eq!((m, a.conductor()), (2, 4));
        let w = FieldMatrix::diagonal(vec![CycNum::one(3), CycNum::zeta(3)]);
        assert_eq!(to_dyadic(&w, None).unwrap_err(), Error::NotDyadic);
        let (m, _) = to_dyadic(&FieldMatrix::identity(4, 2), Some(4)).unwrap();
        assert_eq!(m, 4);
    }

    #[test]
    fn normal_form_examples() {
        let bell = StabGroup::new(2, vec![PauliOp::parse("XX").unwrap(), PauliOp::parse("ZZ").unwrap()]).unwrap();
        let f = bipartite_normal_form(&bell, 1, 1).unwrap();
        assert_eq!(f.k, 1);
        let prod = StabGroup::new(2, vec![PauliOp::parse("ZI").unwrap(), PauliOp::parse("IZ").unwrap()]).unwrap();
        let f = bipartite_normal_form(&prod, 1, 1).unwrap();
        assert_eq!(f.k, 0);
        assert!(f.c_in.is_empty() && f.c_out.is_empty());
        let partial = StabGroup::new(2, vec![PauliOp::parse("ZI").unwrap()]).unwrap();
        assert!(matches!(bipartite_normal_form(&partial, 1, 1), Err(Error::NotFullStabilizerGroup { .. })));
    }

    #[test]
    fn recognize_examples() {
        let f = recognize(&FieldMatrix::identity(4, 2), 1, 1, None).unwrap();
        assert_eq!((f.k, f.j), (1, 0));
        let proj = FieldMatrix::from_i64(4, 2, 2, &[1, 0, 0, 0]).unwrap().scalar_mul(&CycNum::one_plus_i());
        let f = recognize(&proj, 1, 1, None).unwrap();
        assert_eq!(f.k, 0);
        assert_eq!(reconstruct(&f).unwrap(), proj);
        let f = recognize(&htilde(), 1, 1, None).unwrap();
        assert_eq!(reconstruct(&f).unwrap(), htilde());
        let trivial = StabOpForm {
            n_in: 2,
            n_out: 2,
            k: 2,
            m: 2,
            j: 0,
            l: CliffordCircuit::new(2),
            r: CliffordCircuit::new(2),
        };
        assert_eq!(reconstruct(&trivial).unwrap(), FieldMatrix::identity(4, 4));
    }

    #[test]
    fn random_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..120 {
            let (ni, no) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
            let m = rng.gen_range(2..=3);
            let f = StabOpForm::random(ni, no, m, 12, &mut rng);
            let a = reconstruct(&f).unwrap();
            let g = recognize(&a, ni, no, Some(m)).unwrap();
            assert_eq!(reconstruct(&g).unwrap(), a);
            assert_eq!(g.k, f.k);
        }
    }

    #[test]
    fn unitaries_have_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 1..=3 {
            for _ in 0..10 {
                let c = CliffordCircuit::random(n, 20, &mut rng);
                let u = c.evaluate();
                let f = recognize(&u, n, n, None).unwrap();
                assert_eq!(f.k, n);
                assert_eq!(reconstruct(&f).unwrap(), u.lift(1 << f.m).unwrap());
            }
        }
        let cnot = CliffordCircuit::from_gates(2, vec![Gate::Cnot(0, 1)]).unwrap().evaluate();
        assert_eq!(recognize(&cnot, 2, 2, None).unwrap().k, 2);
    }

    #[test]
    fn scalar_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = StabOpForm::random(2, 1, 3, 10, &mut rng);
        let a = reconstruct(&f).unwrap();
        let g = recognize(&a.scalar_mul(&CycNum::zeta(8)), 2, 1, None).unwrap();
        let h = recognize(&a, 2, 1, Some(3)).unwrap();
        assert_eq!((g.l.clone(), g.r.clone(), g.k), (h.l.clone(), h.r.clone(), h.k));
        assert_eq!(g.j, (h.j + 1) % 8);
    }

    #[test]
    fn states() {
        let e0 = FieldVector::basis(8, 2, 0).scale(&CycNum::zeta(8));
        let (c, j) = recognize_state(&e0, 3).unwrap().unwrap();
        assert!(c.is_empty());
        assert_eq!(j, 1);
        let plus = FieldVector::from_i64(4, &[1, 1]);
        assert!(recognize_state(&plus, 2).unwrap().is_none());
        let unit_plus = plus.scale(&CycNum::one_plus_i().inv().unwrap());
        let (c, j) = recognize_state(&unit_plus, 2).unwrap().unwrap();
        let rebuilt = c.apply(&FieldVector::basis(4, 2, 0)).unwrap().scale(&CycNum::zeta_pow(4, j as i64));
        assert_eq!(rebuilt, unit_plus);
        let magic = FieldVector::new(8, vec![CycNum::one(8), CycNum::zeta(8)]);
        assert!(recognize_state(&magic, 3).unwrap().is_none());
    }
}
