//! Clifford groups beyond qubits over `Q(i)`: tabulated basis changes,
//! membership certificates, orbit lattices and group orders.
//!
//! A basis change `B̃` certifies a unitary `U` when `B̃⁻¹ U B̃` is integral and
//! a state `ψ` when `B̃⁻¹ ψ` is integral. Modules over `O_E` are compared as
//! Z-lattices after flattening every entry into its power-basis coefficients.

use std::collections::VecDeque;

use num_integer::Integer;
use rand::Rng;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::cyclo::{lcm, CycNum, Rational};
use crate::error::{Error, Result};
use crate::io::MatrixFile;
use crate::linalg::{FieldMatrix, FieldVector};
use crate::stab::{tableau_bfs, CliffordCircuit, Gate};
pub use crate::zlattice::{flatten_module, power_basis, ZLattice};

/// Tabulated basis changes, stored as JSON in the shared matrix encoding.
pub const FIXTURES: &[(&str, &str)] = &[
    ("clifford-1", include_str!("../fixtures/clifford-1.json")),
    ("real-clifford-1", include_str!("../fixtures/real-clifford-1.json")),
    ("rational-1", include_str!("../fixtures/rational-1.json")),
    ("rational-2", include_str!("../fixtures/rational-2.json")),
    ("rational-3", include_str!("../fixtures/rational-3.json")),
    ("rational-4", include_str!("../fixtures/rational-4.json")),
    ("rational-3-tilde", include_str!("../fixtures/rational-3-tilde.json")),
    ("qutrit-1", include_str!("../fixtures/qutrit-1.json")),
    ("qutrit-2", include_str!("../fixtures/qutrit-2.json")),
    ("qupant-1", include_str!("../fixtures/qupant-1.json")),
];

pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

pub fn fixture_matrix(name: &str) -> Result<FieldMatrix> {
    let text = FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::UnknownName(name.to_string()))?;
    MatrixFile::parse(text)?.to_matrix()
}

#[derive(Clone, Debug)]
pub struct BasisChange {
    pub name: String,
    pub matrix: FieldMatrix,
    pub conductor: u32,
    pub real_subfield: bool,
    /// Conductors `k` of the admissible fields `Q(ζ_k)` (or their real subfields).
    pub field_conductors: Vec<u32>,
    inverse: FieldMatrix,
}

impl BasisChange {
    pub fn new(name: &str, matrix: FieldMatrix, real_subfield: bool, field_conductors: Vec<u32>) -> Result<Self> {
        let inverse = matrix.inverse()?;
        Ok(BasisChange {
            name: name.to_string(),
            conductor: matrix.conductor(),
            matrix,
            real_subfield,
            field_conductors,
            inverse,
        })
    }

    pub fn inverse(&self) -> &FieldMatrix {
        &self.inverse
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Z-basis of the ring the lattice is a module over.
    pub fn ring_basis(&self) -> Vec<CycNum> {
        ring_basis(self.conductor, self.real_subfield)
    }

    /// The lattice `B̃ · O^N`, flattened.
    pub fn z_lattice(&self) -> Result<ZLattice> {
        flatten_module(&self.matrix.columns(), &self.ring_basis(), self.conductor)
    }

    /// Conductor to compute in when the entries generate `Q(ζ_c)`, if that field is admissible.
    fn field_for<'a>(&self, entries: impl IntoIterator<Item = &'a CycNum>) -> Option<u32> {
        let mut c = 1;
        for e in entries {
            if self.real_subfield && !e.is_real() {
                return None;
            }
            if !e.is_rational() {
                c = lcm(c, e.normalize().conductor());
            }
        }
        self.field_conductors
            .iter()
            .any(|k| k % c == 0)
            .then(|| lcm(c, self.conductor))
    }
}

fn ring_basis(conductor: u32, real: bool) -> Vec<CycNum> {
    if real && conductor == 8 {
        vec![CycNum::one(8), CycNum::sqrt2()]
    } else {
        power_basis(conductor)
    }
}

#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub name: String,
    pub conductor: u32,
    pub dim: usize,
    pub generators: Vec<FieldMatrix>,
    /// Scalar matrices generating the declared center.
    pub center_generators: Vec<FieldMatrix>,
    pub real_subfield: bool,
    /// Qubit count and gate words for subgroups of the qubit Clifford group.
    pub tableau: Option<(usize, Vec<Vec<Gate>>)>,
}

impl GroupSpec {
    pub fn ring_basis(&self) -> Vec<CycNum> {
        ring_basis(self.conductor, self.real_subfield)
    }

    /// Product of `len` uniformly chosen generators.
    pub fn random_word(&self, len: usize, rng: &mut impl Rng) -> FieldMatrix {
        let mut m = FieldMatrix::identity(self.conductor, self.dim);
        for _ in 0..len {
            let g = &self.generators[rng.gen_range(0..self.generators.len())];
            m = g.mul(&m).expect("square generators");
        }
        m
    }

    pub fn declared_center_order(&self) -> u64 {
        self.center_generators
            .iter()
            .map(|c| root_order(c.get(0, 0)).expect("center generators are roots of unity"))
            .fold(1, |a, b| a.lcm(&b))
    }
}

#[derive(Clone, Debug)]
pub struct Builtin {
    pub group: GroupSpec,
    pub basis: BasisChange,
}

pub fn builtin_names() -> Vec<&'static str> {
    vec![
        "clifford-1",
        "clifford-2",
        "clifford-3",
        "real-clifford-1",
        "real-clifford-2",
        "real-clifford-3",
        "rational-1",
        "rational-2",
        "rational-3",
        "rational-4",
        "rational-3-tilde",
        "qutrit-1",
        "qutrit-2",
        "qupant-1",
    ]
}

pub fn builtin(name: &str) -> Result<Builtin> {
    let unknown = || Error::UnknownName(name.to_string());
    if !builtin_names().contains(&name) {
        return Err(unknown());
    }
    let (family, n) = match name {
        "rational-3-tilde" => ("rational", 3),
        _ => {
            let (f, n) = name.rsplit_once('-').ok_or_else(unknown)?;
            (f, n.parse::<usize>().map_err(|_| unknown())?)
        }
    };
    let dyadic = |m: u32| (1..=m).map(|j| 4 * j).collect::<Vec<_>>();
    match family {
        "clifford" => {
            let b = fixture_matrix("clifford-1")?.tensor_power(n);
            Ok(Builtin {
                group: qubit_group(name, n, QubitFamily::Complex)?,
                basis: BasisChange::new(name, b, false, dyadic(8))?,
            })
        }
        "real-clifford" => {
            let b = fixture_matrix("real-clifford-1")?.tensor_power(n);
            Ok(Builtin {
                group: qubit_group(name, n, QubitFamily::Real)?,
                basis: BasisChange::new(name, b, true, vec![8, 16, 24, 32])?,
            })
        }
        "rational" => Ok(Builtin {
            group: qubit_group(name, n, QubitFamily::Rational)?,
            basis: BasisChange::new(name, fixture_matrix(name)?, false, vec![1])?,
        }),
        "qutrit" => Ok(Builtin {
            group: qudit_clifford_group(3, n)?,
            basis: BasisChange::new(name, fixture_matrix(name)?, false, (1..=9).map(|j| 3 * j).collect())?,
        }),
        "qupant" => Ok(Builtin {
            group: qudit_clifford_group(5, n)?,
            basis: BasisChange::new(name, fixture_matrix(name)?, false, vec![5, 10, 15])?,
        }),
        _ => Err(unknown()),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum QubitFamily {
    Complex,
    Real,
    Rational,
}

fn qubit_group(name: &str, n: usize, family: QubitFamily) -> Result<GroupSpec> {
    let mut words: Vec<Vec<Gate>> = Vec::new();
    for q in 0..n {
        words.push(vec![Gate::X(q)]);
        words.push(vec![Gate::Z(q)]);
        match family {
            QubitFamily::Complex => {
                words.push(vec![Gate::Htilde(q)]);
                words.push(vec![Gate::S(q)]);
            }
            // H = ζ_8 H̃
            QubitFamily::Real => words.push(vec![Gate::Htilde(q), Gate::GlobalPhase { exponent: 1, order: 8 }]),
            QubitFamily::Rational => {}
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a != b {
                words.push(vec![Gate::Cnot(a, b)]);
            }
            if a < b {
                words.push(vec![Gate::Cz(a, b)]);
                if family == QubitFamily::Rational {
                    // H ⊗ H = i · H̃ ⊗ H̃
                    words.push(vec![Gate::Htilde(a), Gate::Htilde(b), Gate::GlobalPhase { exponent: 1, order: 4 }]);
                }
            }
        }
    }
    let (conductor, center) = match family {
        QubitFamily::Complex => (4, CycNum::i()),
        QubitFamily::Real => (8, CycNum::from_i64(1, -1)),
        QubitFamily::Rational => (1, CycNum::from_i64(1, -1)),
    };
    let dim = 1usize << n;
    let generators = words
        .iter()
        .map(|w| restrict_matrix(&CliffordCircuit::from_gates(n, w.clone())?.evaluate(), conductor))
        .collect::<Result<Vec<_>>>()?;
    let center_generators = vec![FieldMatrix::identity(conductor, dim).scalar_mul(&center).lift(conductor)?];
    Ok(GroupSpec {
        name: name.to_string(),
        conductor,
        dim,
        generators,
        center_generators,
        real_subfield: family == QubitFamily::Real,
        tableau: (n <= 3).then_some((n, words)),
    })
}

/// The matrix with every entry moved into `Q(ζ_k)`.
pub fn restrict_matrix(m: &FieldMatrix, k: u32) -> Result<FieldMatrix> {
    let entries = m
        .entries()
        .iter()
        .map(|e| {
            let small = e.normalize();
            if k.is_multiple_of(small.conductor()) {
                small.lift(k)
            } else {
                Err(Error::NotInField {
                    found: small.conductor(),
                    expected: k,
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    FieldMatrix::new(k, m.rows(), m.cols(), entries)
}

/// Single-qudit Clifford group on `Q(ζ_d)`.
pub fn qudit_clifford_spec(d: u32) -> Result<GroupSpec> {
    qudit_clifford_group(d, 1)
}

/// Gauss sum `Σ_x ω^{x²}` with `ω = ζ_d`.
pub fn gauss_sum(d: u32) -> CycNum {
    (0..d as i64).fold(CycNum::zero(d), |acc, x| acc + CycNum::zeta_pow(d, x * x))
}

/// Generators `X, Z, H̃, S` on each qudit and the sum gate on each ordered pair.
///
/// `H̃ = (g/d) [ω^{xy}]` with `g` the Gauss sum and `S = diag(ω^{x(x-1)/2})`.
pub fn qudit_clifford_group(d: u32, n: usize) -> Result<GroupSpec> {
    if d != 3 && d != 5 {
        return Err(Error::Unsupported(format!("qudit dimension {d}; supported are 3 and 5")));
    }
    if n == 0 || n > 2 {
        return Err(Error::Unsupported(format!("{n} qudits; supported are 1 and 2")));
    }
    let du = d as usize;
    let w = |e: i64| CycNum::zeta_pow(d, e);
    let mut x = FieldMatrix::zeros(d, du, du);
    let mut z = FieldMatrix::zeros(d, du, du);
    let mut s = FieldMatrix::zeros(d, du, du);
    let mut h = FieldMatrix::zeros(d, du, du);
    let scale = gauss_sum(d).scale(&Rational::new(1.into(), (d as i64).into()));
    for a in 0..du {
        x.set((a + 1) % du, a, CycNum::one(d));
        let ai = a as i64;
        z.set(a, a, w(ai));
        s.set(a, a, w(ai * (ai - 1) / 2));
        for b in 0..du {
            h.set(a, b, &w(ai * b as i64) * &scale);
        }
    }
    let dim = du.pow(n as u32);
    let embed = |m: &FieldMatrix, q: usize| {
        let left = FieldMatrix::identity(d, du.pow(q as u32));
        let right = FieldMatrix::identity(d, du.pow((n - 1 - q) as u32));
        left.tensor(m).tensor(&right)
    };
    let mut generators = Vec::new();
    for q in 0..n {
        for m in [&x, &z, &h, &s] {
            generators.push(embed(m, q));
        }
    }
    let digits = |idx: usize| (0..n).map(|q| (idx / du.pow((n - 1 - q) as u32)) % du).collect::<Vec<_>>();
    let index = |ds: &[usize]| ds.iter().fold(0, |acc, &v| acc * du + v);
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let mut sum = FieldMatrix::zeros(d, dim, dim);
            for col in 0..dim {
                let mut ds = digits(col);
                ds[b] = (ds[b] + ds[a]) % du;
                sum.set(index(&ds), col, CycNum::one(d));
            }
            generators.push(sum);
        }
    }
    let center = -CycNum::zeta(d);
    let prefix = if d == 3 { "qutrit" } else { "qupant" };
    Ok(GroupSpec {
        name: format!("{prefix}-{n}"),
        conductor: d,
        dim,
        generators,
        center_generators: vec![FieldMatrix::identity(d, dim).scalar_mul(&center)],
        real_subfield: false,
        tableau: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub reason: Option<String>,
}

impl Membership {
    fn yes() -> Self {
        Membership { member: true, reason: None }
    }

    fn no(reason: &str) -> Self {
        Membership {
            member: false,
            reason: Some(reason.to_string()),
        }
    }
}

fn integral(m: &FieldMatrix, real: bool) -> bool {
    if real {
        m.is_real_integral()
    } else {
        m.is_integral()
    }
}

/// Whether `B̃⁻¹ U B̃` is integral for a unitary `U`, certifying `U ∈ G` up to the center.
pub fn membership_unitary(u: &FieldMatrix, bc: &BasisChange) -> Membership {
    let n = bc.dim();
    if u.rows() != n || u.cols() != n {
        return Membership::no("shape");
    }
    let Some(k) = bc.field_for(u.entries()) else {
        return Membership::no("not in field");
    };
    let lifted = |m: &FieldMatrix| m.lift(k).expect("k is a multiple of both conductors");
    let w = lifted(&bc.inverse)
        .mul(&lifted(u))
        .and_then(|m| m.mul(&lifted(&bc.matrix)))
        .expect("square shapes agree");
    if !integral(&w, bc.real_subfield) {
        return Membership::no("integrality");
    }
    if !u.is_unitary() {
        return Membership::no("not unitary");
    }
    Membership::yes()
}

/// Whether `B̃⁻¹ ψ` is integral for a unit vector `ψ`, certifying that `ψ` is `g|0⟩` up to a central phase.
pub fn membership_state(psi: &FieldVector, bc: &BasisChange) -> Membership {
    if psi.len() != bc.dim() {
        return Membership::no("shape");
    }
    let Some(k) = bc.field_for(psi.entries()) else {
        return Membership::no("not in field");
    };
    let coords = bc
        .inverse
        .lift(k)
        .and_then(|m| m.mul_vec(&psi.lift(k)?))
        .expect("lengths agree");
    let ok = if bc.real_subfield {
        coords.entries().iter().all(CycNum::is_real_integral)
    } else {
        coords.is_integral()
    };
    if !ok {
        return Membership::no("integrality");
    }
    if !psi.norm_sq().is_one() {
        return Membership::no("not a unit vector");
    }
    Membership::yes()
}

fn coeff_key<'a>(entries: impl IntoIterator<Item = &'a CycNum>) -> Vec<Rational> {
    entries.into_iter().flat_map(|c| c.coeffs().iter().cloned()).collect()
}

/// The orbit `{g · seed}` under the group generated by `g.generators`.
pub fn orbit(g: &GroupSpec, seed: &FieldVector, cap: usize) -> Result<Vec<FieldVector>> {
    if seed.len() != g.dim {
        return Err(Error::ShapeMismatch(format!("seed of length {} for dimension {}", seed.len(), g.dim)));
    }
    let k = lcm(g.conductor, seed.conductor());
    let start = seed.lift(k)?;
    let mut seen: FxHashSet<Vec<Rational>> = FxHashSet::default();
    seen.insert(coeff_key(start.entries()));
    let mut out = vec![start];
    let mut next = 0;
    while next < out.len() {
        for gen in &g.generators {
            let v = gen.mul_vec(&out[next])?;
            if seen.insert(coeff_key(v.entries())) {
                if out.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                out.push(v);
            }
        }
        next += 1;
    }
    Ok(out)
}

/// The Z-flattening of `Σ_{v ∈ orbit} v · O`.
pub fn orbit_z_lattice(g: &GroupSpec, seed: &FieldVector, cap: usize) -> Result<ZLattice> {
    let vs = orbit(g, seed, cap)?;
    let k = vs[0].conductor();
    flatten_module(&vs, &ring_basis(k, g.real_subfield), k)
}

/// Multiplicative order of a root of unity.
pub fn root_order(c: &CycNum) -> Option<u64> {
    let r = c.root_of_unity()?;
    let two_k = 2 * r.conductor as u64;
    let e = (2 * r.exponent as u64 + if r.negated { r.conductor as u64 } else { 0 }) % two_k;
    Some(two_k / e.gcd(&two_k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixGroupOrder {
    /// Order modulo the scalar subgroup.
    pub order: u64,
    /// Order of the scalar subgroup found in the group.
    pub center_order: u64,
}

/// BFS over projective classes, each stored with the representative first reached.
///
/// Products that land in a known class differ from its representative by a
/// scalar in the group; these scalars generate the center.
pub fn matrix_group_order(g: &GroupSpec, cap: usize) -> Result<MatrixGroupOrder> {
    let k = g.conductor;
    let gens = g.generators.iter().map(|m| m.lift(k)).collect::<Result<Vec<_>>>()?;
    let mut index: FxHashMap<Vec<Rational>, usize> = FxHashMap::default();
    let mut reps: Vec<(FieldMatrix, CycNum)> = Vec::new();
    let normalize = |m: &FieldMatrix| -> Result<(Vec<Rational>, CycNum)> {
        let f = m.first_nonzero().ok_or_else(|| Error::InvalidInput("singular generator".into()))?;
        let inv = m.entries()[f].inv()?;
        let key = coeff_key(m.entries().iter().map(|e| e * &inv).collect::<Vec<_>>().iter());
        Ok((key, inv))
    };
    let id = FieldMatrix::identity(k, g.dim);
    let (key, inv) = normalize(&id)?;
    index.insert(key, 0);
    reps.push((id, inv));
    let mut scalars: FxHashSet<Vec<Rational>> = FxHashSet::default();
    let mut center_order = 1u64;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for gen in &gens {
            let p = gen.mul(&reps[i].0)?;
            let (key, inv) = normalize(&p)?;
            if let Some(&j) = index.get(&key) {
                let f = p.first_nonzero().expect("nonzero");
                let s = &p.entries()[f] * &reps[j].1;
                if scalars.insert(s.coeffs().to_vec()) {
                    let o = root_order(&s).ok_or_else(|| Error::Internal(format!("scalar {s} is not a root of unity")))?;
                    center_order = center_order.lcm(&o);
                }
            } else {
                if reps.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                index.insert(key, reps.len());
                queue.push_back(reps.len());
                reps.push((p, inv));
            }
        }
    }
    Ok(MatrixGroupOrder {
        order: reps.len() as u64,
        center_order,
    })
}

/// Group order modulo the center: tableau BFS for qubit subgroups, matrix BFS otherwise.
pub fn group_order_mod_center(g: &GroupSpec, cap: usize) -> Result<u64> {
    Ok(group_order(g, cap)?.mod_center)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupOrder {
    pub mod_center: u64,
    pub center_order: u64,
    /// Order of the matrix group itself.
    pub full: u64,
}

/// Orders of `G/Z` and `Z = G ∩ scalars`.
///
/// For qubit subgroups `Z` is the declared center: `-I = (XZ)²` lies in every
/// family and `iI = (H̃²)⁻¹` in the complex one, and the entries admit no other roots of unity.
pub fn group_order(g: &GroupSpec, cap: usize) -> Result<GroupOrder> {
    let (mod_center, center_order) = match &g.tableau {
        Some((n, words)) => (tableau_bfs(*n, words, cap)?, g.declared_center_order()),
        None => {
            let m = matrix_group_order(g, cap)?;
            (m.order, m.center_order)
        }
    };
    Ok(GroupOrder {
        mod_center,
        center_order,
        full: mod_center * center_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(k: u32, coeffs: &[(i64, i64)]) -> CycNum {
        CycNum::from_coeffs(k, coeffs.iter().map(|&(p, q)| Rational::new(p.into(), q.into())).collect()).unwrap()
    }

    #[test]
    fn tabulated_bases() {
        let b = builtin("clifford-1").unwrap().basis.matrix;
        let h = c(4, &[(1, 2), (1, 2)]);
        let want = FieldMatrix::from_rows(4, vec![vec![h.clone(), CycNum::zero(4)], vec![h, CycNum::one(4)]]).unwrap();
        assert_eq!(b, want);
        let r = builtin("real-clifford-1").unwrap().basis.matrix;
        let s = CycNum::sqrt2().scale(&Rational::new(1.into(), 2.into()));
        let want = FieldMatrix::from_rows(8, vec![vec![s.clone(), CycNum::zero(8)], vec![s, CycNum::one(8)]]).unwrap();
        assert_eq!(r, want);
        assert_eq!(builtin("rational-1").unwrap().basis.matrix, FieldMatrix::identity(1, 2));
        let b2 = builtin("clifford-2").unwrap().basis.matrix;
        assert_eq!(b2, want_tensor(&fixture_matrix("clifford-1").unwrap(), 2));
        assert!(matches!(builtin("clifford-9"), Err(Error::UnknownName(_))));
        assert!(matches!(builtin("octonion-1"), Err(Error::UnknownName(_))));
    }

    fn want_tensor(m: &FieldMatrix, n: usize) -> FieldMatrix {
        (1..n).fold(m.clone(), |acc, _| acc.tensor(m))
    }

    #[test]
    fn generators_are_unitary_and_in_field() {
        for name in builtin_names() {
            if name == "rational-4" || name == "clifford-3" || name == "real-clifford-3" {
                continue;
            }
            let b = builtin(name).unwrap();
            for (i, g) in b.group.generators.iter().enumerate() {
                assert!(g.is_unitary(), "{name} generator {i}");
                assert_eq!(g.conductor(), b.group.conductor);
            }
        }
    }

    #[test]
    fn membership_examples() {
        let real = builtin("real-clifford-1").unwrap().basis;
        let cl = builtin("clifford-1").unwrap().basis;
        let half_sqrt2 = CycNum::sqrt2().scale(&Rational::new(1.into(), 2.into()));
        let h = FieldMatrix::from_rows(8, vec![vec![half_sqrt2.clone(), half_sqrt2.clone()], vec![half_sqrt2.clone(), -&half_sqrt2]]).unwrap();
        assert!(membership_unitary(&h, &real).member);
        let s = FieldMatrix::diagonal(vec![CycNum::one(4), CycNum::i()]);
        assert_eq!(membership_unitary(&s, &real), Membership::no("not in field"));
        assert!(membership_unitary(&s, &cl).member);
        // the conjugate [[1, 0], [1+i, 3]] is integral, so only unitarity rejects it
        let d = FieldMatrix::from_i64(4, 2, 2, &[1, 0, 0, 3]).unwrap();
        assert_eq!(membership_unitary(&d, &cl), Membership::no("not unitary"));
        let d = FieldMatrix::from_i64(4, 2, 2, &[1, 0, 0, 2]).unwrap();
        assert_eq!(membership_unitary(&d, &cl), Membership::no("integrality"));
        let t = FieldMatrix::diagonal(vec![CycNum::one(8), CycNum::zeta(8)]);
        assert!(!membership_unitary(&t, &cl).member);

        for name in builtin_names() {
            let b = builtin(name).unwrap().basis;
            let zero = FieldVector::basis(1, b.dim(), 0);
            if name != "rational-3-tilde" {
                assert!(membership_state(&zero, &b).member, "{name}");
            }
        }
        let h0 = h.column(0);
        assert!(membership_state(&h0, &real).member);
        assert_eq!(membership_state(&FieldVector::from_i64(4, &[1, 2]), &cl), Membership::no("not a unit vector"));
        let odd = FieldVector::new(4, vec![CycNum::from_frac(4, 3, 5), CycNum::i().scale(&Rational::new(4.into(), 5.into()))]);
        assert_eq!(membership_state(&odd, &cl), Membership::no("integrality"));
    }

    #[test]
    fn qudit_generators() {
        let g = qudit_clifford_spec(3).unwrap();
        let (x, z, h) = (&g.generators[0], &g.generators[1], &g.generators[2]);
        assert_eq!(h.mul(&h.dagger()).unwrap(), FieldMatrix::identity(3, 3));
        let zx = z.mul(x).unwrap();
        let xz = x.mul(z).unwrap().scalar_mul(&CycNum::zeta(3));
        assert_eq!(zx, xz);
        let g5 = qudit_clifford_spec(5).unwrap();
        assert!(g5.generators.iter().all(|m| m.conductor() == 5 && m.is_unitary()));
        assert!(qudit_clifford_spec(7).is_err());
        assert_eq!(gauss_sum(3).norm_sq(), CycNum::from_i64(3, 3));
    }

    #[test]
    fn small_orders_and_centers() {
        let q3 = qudit_clifford_spec(3).unwrap();
        let o = matrix_group_order(&q3, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(o, MatrixGroupOrder { order: 216, center_order: 6 });
        assert_eq!(q3.declared_center_order(), 6);
        let c1 = builtin("clifford-1").unwrap().group;
        let o = matrix_group_order(&c1, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(o, MatrixGroupOrder { order: 24, center_order: 4 });
        assert_eq!(group_order_mod_center(&c1, DEFAULT_GROUP_CAP).unwrap(), 24);
        for name in ["real-clifford-1", "real-clifford-2", "rational-2"] {
            let g = builtin(name).unwrap().group;
            let m = matrix_group_order(&g, DEFAULT_GROUP_CAP).unwrap();
            assert_eq!(m.center_order, g.declared_center_order(), "{name}");
            assert_eq!(m.order, group_order_mod_center(&g, DEFAULT_GROUP_CAP).unwrap(), "{name}");
        }
        assert!(matches!(matrix_group_order(&q3, 100), Err(Error::CapExceeded { cap: 100 })));
    }

    #[test]
    fn orbit_lattices_match_tables() {
        for (name, seed) in [
            ("clifford-1", vec![1, 0]),
            ("clifford-2", vec![1, 0, 0, 0]),
            ("real-clifford-1", vec![1, 0]),
            ("real-clifford-2", vec![1, 0, 0, 0]),
            ("rational-2", vec![1, 0, 0, 0]),
            ("rational-3", vec![1, 0, 0, 0, 0, 0, 0, 0]),
            ("rational-3-tilde", vec![1, 0, 0, 0, 1, 0, 0, 0]),
            ("qutrit-1", vec![1, 0, 0]),
            ("qupant-1", vec![1, 0, 0, 0, 0]),
            ("qutrit-2", vec![1, 0, 0, 0, 0, 0, 0, 0, 0]),
            ("rational-4", [1].into_iter().chain([0; 15]).collect()),
        ] {
            let b = builtin(name).unwrap();
            let seed = FieldVector::from_i64(1, &seed);
            let l = orbit_z_lattice(&b.group, &seed, DEFAULT_ORBIT_CAP).unwrap();
            assert_eq!(l, b.basis.z_lattice().unwrap(), "{name}");
        }
    }

    #[test]
    fn rational_three_qubits() {
        let b = builtin("rational-3").unwrap();
        let t = builtin("rational-3-tilde").unwrap();
        for g in &b.group.generators {
            assert!(membership_unitary(g, &b.basis).member);
            assert!(membership_unitary(g, &t.basis).member);
        }
        let o = group_order(&b.group, 20_000_000).unwrap();
        assert_eq!(o, GroupOrder { mod_center: 1_290_240, center_order: 2, full: 2_580_480 });
    }

    #[test]
    fn orbit_lattices_are_invariant() {
        for (name, seed) in [("clifford-1", vec![1, 0]), ("qutrit-1", vec![1, 0, 0]), ("rational-3-tilde", vec![1, 0, 0, 0, 1, 0, 0, 0])] {
            let g = builtin(name).unwrap().group;
            let l = orbit_z_lattice(&g, &FieldVector::from_i64(1, &seed), DEFAULT_ORBIT_CAP).unwrap();
            let k = g.conductor;
            for v in l.basis_vectors() {
                let v = crate::zlattice::unflatten_vector(&v, k).unwrap();
                for m in &g.generators {
                    let w = m.mul_vec(&v).unwrap();
                    assert!(l.contains(&crate::zlattice::flatten_vector(&w, k).unwrap()), "{name}");
                }
            }
        }
    }

    #[test]
    fn random_words_are_certified() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for name in ["clifford-2", "real-clifford-2", "rational-3", "rational-3-tilde", "qutrit-1", "qupant-1"] {
            let b = builtin(name).unwrap();
            for _ in 0..5 {
                let len = rng.gen_range(0..=20);
                let u = b.group.random_word(len, &mut rng);
                assert!(membership_unitary(&u, &b.basis).member, "{name}");
                assert!(membership_state(&u.column(0), &b.basis).member || name == "rational-3-tilde", "{name}");
                let mut bad = u.clone();
                let r = rng.gen_range(0..u.rows());
                let cc = rng.gen_range(0..u.cols());
                bad.set(r, cc, u.get(r, cc) + &CycNum::from_frac(1, 1, 3));
                assert!(!membership_unitary(&bad, &b.basis).member, "{name}");
            }
        }
    }
}
