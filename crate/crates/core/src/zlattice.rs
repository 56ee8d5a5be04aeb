//! Integer lattices in Hermite normal form, used to compare modules over
//! rings of integers after flattening them to Z-modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cyclo::{CycNum, Rational};
use crate::error::{Error, Result};
use crate::linalg::FieldVector;

/// The Z-span of `basis / denominator`, with `basis` in row Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZLattice {
    pub dim: usize,
    pub denominator: BigInt,
    pub basis: Vec<Vec<BigInt>>,
}

#[derive(Serialize)]
pub struct ZLatticeSummary {
    pub dim: usize,
    pub rank: usize,
    pub denominator: String,
    pub basis: Vec<Vec<String>>,
}

/// Incremental row-HNF builder over the integers.
struct Hnf {
    dim: usize,
    /// Pivot row by pivot column; pivots are positive.
    rows: Vec<Option<Vec<BigInt>>>,
}

impl Hnf {
    fn new(dim: usize) -> Self {
        Hnf {
            dim,
            rows: vec![None; dim],
        }
    }

    fn insert(&mut self, mut v: Vec<BigInt>) {
        for col in 0..self.dim {
            if v[col].is_zero() {
                continue;
            }
            match self.rows[col].take() {
                None => {
                    if v[col].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                    }
                    self.rows[col] = Some(v);
                    return;
                }
                Some(p) => {
                    let e = p[col].extended_gcd(&v[col]);
                    let (g, s, t) = (e.gcd, e.x, e.y);
                    let pa = &p[col] / &g;
                    let va = &v[col] / &g;
                    let new_p: Vec<BigInt> = p.iter().zip(&v).map(|(a, b)| &s * a + &t * b).collect();
                    let new_v: Vec<BigInt> = p.iter().zip(&v).map(|(a, b)| &pa * b - &va * a).collect();
                    self.rows[col] = Some(new_p);
                    v = new_v;
                    self.reduce_row(col);
                }
            }
        }
    }

    /// Reduces entries of pivot row `r`'s later columns modulo those pivots.
    fn reduce_row(&mut self, r: usize) {
        let Some(mut row) = self.rows[r].take() else { return };
        for col in r + 1..self.dim {
            if let Some(p) = &self.rows[col] {
                let q = row[col].div_floor(&p[col]);
                if !q.is_zero() {
                    for (a, b) in row.iter_mut().zip(p) {
                        *a -= &q * b;
                    }
                }
            }
        }
        self.rows[r] = Some(row);
    }

    fn finish(mut self) -> Vec<Vec<BigInt>> {
        for r in (0..self.dim).rev() {
            self.reduce_row(r);
        }
        self.rows.into_iter().flatten().collect()
    }
}

impl ZLattice {
    /// The lattice spanned by rational generator vectors of length `dim`.
    pub fn from_rational_generators(dim: usize, gens: &[Vec<Rational>]) -> Result<Self> {
        let mut den = BigInt::one();
        for g in gens {
            if g.len() != dim {
                return Err(Error::ShapeMismatch(format!("generator of length {} in dimension {dim}", g.len())));
            }
            for c in g {
                den = den.lcm(c.denom());
            }
        }
        let mut hnf = Hnf::new(dim);
        for g in gens {
            hnf.insert(g.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect());
        }
        Ok(Self::normalized(dim, den, hnf.finish()))
    }

    fn normalized(dim: usize, den: BigInt, basis: Vec<Vec<BigInt>>) -> Self {
        let mut g = den.clone();
        for row in &basis {
            for x in row {
                g = g.gcd(x);
            }
        }
        if g.is_one() || g.is_zero() {
            return ZLattice { dim, denominator: den, basis };
        }
        ZLattice {
            dim,
            denominator: &den / &g,
            basis: basis.into_iter().map(|r| r.into_iter().map(|x| x / &g).collect()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Whether the rational vector lies in the lattice.
    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        let d = Rational::from_integer(self.denominator.clone());
        let mut w = Vec::with_capacity(self.dim);
        for c in v {
            let s = c * &d;
            if !s.is_integer() {
                return false;
            }
            w.push(s.to_integer());
        }
        for row in &self.basis {
            let col = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            let (q, r) = w[col].div_rem(&row[col]);
            if !r.is_zero() {
                return false;
            }
            for (a, b) in w.iter_mut().zip(row) {
                *a -= &q * b;
            }
        }
        w.iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, other: &ZLattice) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    /// The basis rows divided by the denominator.
    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        let d = Rational::from_integer(self.denominator.clone());
        self.basis
            .iter()
            .map(|row| row.iter().map(|x| Rational::from_integer(x.clone()) / &d).collect())
            .collect()
    }

    pub fn summary(&self) -> ZLatticeSummary {
        ZLatticeSummary {
            dim: self.dim,
            rank: self.rank(),
            denominator: self.denominator.to_string(),
            basis: self.basis.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
        }
    }
}

/// Coefficients of a vector over `Q(ζ_k)` laid out entry by entry.
pub fn flatten_vector(v: &FieldVector, conductor: u32) -> Result<Vec<Rational>> {
    let v = v.lift(conductor)?;
    Ok(v.entries().iter().flat_map(|c| c.coeffs().iter().cloned()).collect())
}

/// Inverse of [`flatten_vector`].
pub fn unflatten_vector(coeffs: &[Rational], conductor: u32) -> Result<FieldVector> {
    let phi = crate::cyclo::euler_phi(conductor);
    if !coeffs.len().is_multiple_of(phi) {
        return Err(Error::ShapeMismatch(format!("{} coefficients for degree {phi}", coeffs.len())));
    }
    let entries = coeffs
        .chunks(phi)
        .map(|c| CycNum::from_coeffs(conductor, c.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldVector::new(conductor, entries))
}

/// Flattens the module `Σ_v v·R` to a Z-lattice, where `ring_basis` is a Z-basis of `R`.
pub fn flatten_module(vectors: &[FieldVector], ring_basis: &[CycNum], conductor: u32) -> Result<ZLattice> {
    let len = vectors.first().map_or(0, FieldVector::len);
    let dim = len * crate::cyclo::euler_phi(conductor);
    let mut gens = Vec::with_capacity(vectors.len() * ring_basis.len());
    for v in vectors {
        for r in ring_basis {
            gens.push(flatten_vector(&v.scale(r), conductor)?);
        }
    }
    ZLattice::from_rational_generators(dim, &gens)
}

/// `ζ_k^t` for `t < φ(k)`, the power Z-basis of `Z[ζ_k]`.
pub fn power_basis(conductor: u32) -> Vec<CycNum> {
    (0..crate::cyclo::euler_phi(conductor))
        .map(|t| CycNum::zeta_pow(conductor, t as i64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x.into())).collect()
    }

    #[test]
    fn hnf_of_small_lattice() {
        let l = ZLattice::from_rational_generators(2, &[q(&[2, 0]), q(&[0, 3]), q(&[1, 1])]).unwrap();
        // span is all of Z^2 since (1,1), (2,0), (0,3) generate it
        assert_eq!(l.basis, vec![vec![BigInt::from(1), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(1)]]);
        let m = ZLattice::from_rational_generators(2, &[q(&[2, 0]), q(&[0, 2])]).unwrap();
        assert!(l.contains_lattice(&m));
        assert!(!m.contains_lattice(&l));
        assert!(m.contains(&q(&[4, -2])));
        assert!(!m.contains(&q(&[1, 0])));
    }

    #[test]
    fn denominators_are_normalized() {
        let half = Rational::new(1.into(), 2.into());
        let a = ZLattice::from_rational_generators(1, &[vec![half.clone()]]).unwrap();
        let b = ZLattice::from_rational_generators(1, &[vec![Rational::new(3.into(), 2.into())], vec![Rational::from_integer(1.into())]]).unwrap();
        assert_eq!(a, b);
        assert!(a.contains(&[half]));
    }
}
