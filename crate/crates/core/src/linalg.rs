//! Dense exact vectors and matrices over cyclotomic fields.
//!
//! Tensor products use the row-major convention: the first factor indexes the
//! most significant part of the combined index, so qubit 0 is the most
//! significant bit of a computational-basis index.

use std::fmt;

use crate::cyclo::{lcm, CycNum, Rational};
use crate::error::{Error, Result};

fn common_conductor<'a>(it: impl IntoIterator<Item = &'a CycNum>, start: u32) -> u32 {
    it.into_iter().fold(start, |k, c| lcm(k, c.conductor()))
}

fn lift_all(entries: Vec<CycNum>, k: u32) -> Vec<CycNum> {
    entries
        .into_iter()
        .map(|c| if c.conductor() == k { c } else { c.lift(k).expect("k is a common multiple") })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldVector {
    conductor: u32,
    entries: Vec<CycNum>,
}

impl FieldVector {
    /// Builds a vector, lifting every entry to the least common conductor (at least `conductor`).
    pub fn new(conductor: u32, entries: Vec<CycNum>) -> Self {
        let k = common_conductor(&entries, conductor);
        FieldVector {
            conductor: k,
            entries: lift_all(entries, k),
        }
    }

    pub fn from_entries(entries: Vec<CycNum>) -> Self {
        Self::new(1, entries)
    }

    pub fn zeros(conductor: u32, len: usize) -> Self {
        FieldVector {
            conductor,
            entries: vec![CycNum::zero(conductor); len],
        }
    }

    /// The computational basis vector `|index⟩`.
    pub fn basis(conductor: u32, len: usize, index: usize) -> Self {
        let mut v = Self::zeros(conductor, len);
        v.entries[index] = CycNum::one(conductor);
        v
    }

    pub fn from_i64(conductor: u32, values: &[i64]) -> Self {
        FieldVector {
            conductor,
            entries: values.iter().map(|&x| CycNum::from_i64(conductor, x)).collect(),
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<CycNum> {
        self.entries
    }

    pub fn get(&self, i: usize) -> &CycNum {
        &self.entries[i]
    }

    pub fn set(&mut self, i: usize, v: CycNum) {
        let k = lcm(self.conductor, v.conductor());
        if k != self.conductor {
            *self = self.lift(k).expect("lcm");
        }
        self.entries[i] = v.lift(k).expect("lcm");
    }

    pub fn lift(&self, k: u32) -> Result<Self> {
        Ok(FieldVector {
            conductor: k,
            entries: self.entries.iter().map(|c| c.lift(k)).collect::<Result<_>>()?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CycNum::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(CycNum::is_integral)
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.entries.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, s: &CycNum) -> Self {
        Self::new(self.conductor, self.entries.iter().map(|c| c * s).collect())
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        FieldVector {
            conductor: self.conductor,
            entries: self.entries.iter().map(|c| c.scale(r)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        FieldVector {
            conductor: self.conductor,
            entries: self.entries.iter().map(CycNum::conj).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CycNum, &CycNum) -> CycNum) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(Self::new(
            lcm(self.conductor, other.conductor),
            self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        ))
    }

    /// `⟨a|b⟩ = Σ conj(a_j) b_j`, conjugate-linear in the first argument.
    pub fn inner_product(&self, other: &Self) -> Result<CycNum> {
        check_len(self.len(), other.len())?;
        let k = lcm(self.conductor, other.conductor);
        let mut acc = CycNum::zero(k);
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            acc += &(a.conj() * b);
        }
        Ok(acc)
    }

    pub fn norm_sq(&self) -> CycNum {
        self.inner_product(self).expect("same length")
    }

    /// Lattice norm `Tr_{K/Q}⟨v|v⟩ = ½ Tr_{E/Q}⟨v|v⟩`.
    pub fn trace_norm(&self) -> Rational {
        self.norm_sq().trace_e_over_q() / Rational::from_integer(2.into())
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in &self.entries {
            for b in &other.entries {
                out.push(a * b);
            }
        }
        Self::new(lcm(self.conductor, other.conductor), out)
    }

    /// Canonical string form for exact set membership and sorting.
    pub fn key(&self) -> Vec<Vec<String>> {
        self.entries.iter().map(CycNum::to_strings).collect()
    }
}

impl fmt::Display for FieldVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn check_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::ShapeMismatch(format!("length {a} vs {b}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    conductor: u32,
    rows: usize,
    cols: usize,
    entries: Vec<CycNum>,
}

impl FieldMatrix {
    pub fn new(conductor: u32, rows: usize, cols: usize, entries: Vec<CycNum>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let k = common_conductor(&entries, conductor);
        Ok(FieldMatrix {
            conductor: k,
            rows,
            cols,
            entries: lift_all(entries, k),
        })
    }

    pub fn from_rows(conductor: u32, rows: Vec<Vec<CycNum>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::new(conductor, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64(conductor: u32, rows: usize, cols: usize, values: &[i64]) -> Result<Self> {
        Self::new(
            conductor,
            rows,
            cols,
            values.iter().map(|&x| CycNum::from_i64(conductor, x)).collect(),
        )
    }

    pub fn zeros(conductor: u32, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            conductor,
            rows,
            cols,
            entries: vec![CycNum::zero(conductor); rows * cols],
        }
    }

    pub fn identity(conductor: u32, n: usize) -> Self {
        let mut m = Self::zeros(conductor, n, n);
        for i in 0..n {
            m.entries[i * n + i] = CycNum::one(conductor);
        }
        m
    }

    pub fn diagonal(entries: Vec<CycNum>) -> Self {
        let n = entries.len();
        let k = common_conductor(&entries, 1);
        let mut m = Self::zeros(k, n, n);
        for (i, e) in lift_all(entries, k).into_iter().enumerate() {
            m.entries[i * n + i] = e;
        }
        m
    }

    pub fn from_columns(cols: &[FieldVector]) -> Result<Self> {
        let rows = cols.first().map_or(0, FieldVector::len);
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::ShapeMismatch("columns of unequal length".into()));
        }
        let mut entries = Vec::with_capacity(rows * cols.len());
        for r in 0..rows {
            for c in cols {
                entries.push(c.get(r).clone());
            }
        }
        Self::new(1, rows, cols.len(), entries)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &CycNum {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: CycNum) {
        let k = lcm(self.conductor, v.conductor());
        if k != self.conductor {
            *self = self.lift(k).expect("lcm");
        }
        self.entries[r * self.cols + c] = v.lift(k).expect("lcm");
    }

    pub fn column(&self, c: usize) -> FieldVector {
        FieldVector {
            conductor: self.conductor,
            entries: (0..self.rows).map(|r| self.get(r, c).clone()).collect(),
        }
    }

    pub fn columns(&self) -> Vec<FieldVector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn row(&self, r: usize) -> FieldVector {
        FieldVector {
            conductor: self.conductor,
            entries: self.entries[r * self.cols..(r + 1) * self.cols].to_vec(),
        }
    }

    pub fn lift(&self, k: u32) -> Result<Self> {
        Ok(FieldMatrix {
            conductor: k,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|c| c.lift(k)).collect::<Result<_>>()?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CycNum::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(CycNum::is_integral)
    }

    pub fn is_real_integral(&self) -> bool {
        self.entries.iter().all(CycNum::is_real_integral)
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.entries.iter().position(|c| !c.is_zero())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let k = lcm(self.conductor, other.conductor);
        let a = self.lift(k)?;
        let b = other.lift(k)?;
        let mut out = Self::zeros(k, self.rows, other.cols);
        for r in 0..self.rows {
            for t in 0..self.cols {
                let x = a.get(r, t);
                if x.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let y = b.get(t, c);
                    if !y.is_zero() {
                        out.entries[r * other.cols + c] += &(x * y);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &FieldVector) -> Result<FieldVector> {
        if self.cols != v.len() {
            return Err(Error::ShapeMismatch(format!(
                "cannot apply {}x{} matrix to length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let k = lcm(self.conductor, v.conductor());
        let mut out = FieldVector::zeros(k, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let (x, y) = (self.get(r, c), v.get(c));
                if !x.is_zero() && !y.is_zero() {
                    out.entries[r] += &(x * y);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CycNum, &CycNum) -> CycNum) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Self::new(
            lcm(self.conductor, other.conductor),
            self.rows,
            self.cols,
            self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        )
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        FieldMatrix {
            conductor: self.conductor,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn conj(&self) -> Self {
        FieldMatrix {
            conductor: self.conductor,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(CycNum::conj).collect(),
        }
    }

    pub fn dagger(&self) -> Self {
        self.transpose().conj()
    }

    pub fn scalar_mul(&self, s: &CycNum) -> Self {
        FieldMatrix::new(
            self.conductor,
            self.rows,
            self.cols,
            self.entries.iter().map(|c| c * s).collect(),
        )
        .expect("shape unchanged")
    }

    pub fn neg(&self) -> Self {
        FieldMatrix {
            conductor: self.conductor,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|c| -c).collect(),
        }
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut entries = Vec::with_capacity(rows * cols);
        for r1 in 0..self.rows {
            for r2 in 0..other.rows {
                for c1 in 0..self.cols {
                    let a = self.get(r1, c1);
                    for c2 in 0..other.cols {
                        entries.push(a * other.get(r2, c2));
                    }
                }
            }
        }
        FieldMatrix::new(lcm(self.conductor, other.conductor), rows, cols, entries).expect("shape")
    }

    /// `self^{⊗n}`, with the `n = 0` case giving the 1x1 identity.
    pub fn tensor_power(&self, n: usize) -> Self {
        let mut out = FieldMatrix::identity(self.conductor, 1);
        for _ in 0..n {
            out = out.tensor(self);
        }
        out
    }

    pub fn trace(&self) -> Result<CycNum> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("trace of a non-square matrix".into()));
        }
        let mut acc = CycNum::zero(self.conductor);
        for i in 0..self.rows {
            acc += self.get(i, i);
        }
        Ok(acc)
    }

    /// Inverse by Gauss-Jordan elimination over the field.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = FieldMatrix::identity(self.conductor, n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(Error::DivisionByZero)?;
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let p = a.get(col, col).inv()?;
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r != col && !a.get(r, col).is_zero() {
                    let f = a.get(r, col).clone();
                    a.sub_row_multiple(r, col, &f);
                    inv.sub_row_multiple(r, col, &f);
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.entries.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: &CycNum) {
        for c in 0..self.cols {
            let i = r * self.cols + c;
            self.entries[i] = &self.entries[i] * s;
        }
    }

    fn sub_row_multiple(&mut self, target: usize, source: usize, f: &CycNum) {
        for c in 0..self.cols {
            let s = &self.entries[source * self.cols + c];
            if !s.is_zero() {
                let d = s * f;
                self.entries[target * self.cols + c] -= &d;
            }
        }
    }

    /// Whether `self · self† = s·I` for some scalar `s`; returns `s`.
    pub fn gram_scalar(&self) -> Option<CycNum> {
        let g = self.mul(&self.dagger()).ok()?;
        let s = g.get(0, 0).clone();
        let expected = FieldMatrix::identity(g.conductor, g.rows).scalar_mul(&s);
        (g == expected).then_some(s)
    }

    pub fn is_unitary(&self) -> bool {
        self.is_square() && self.gram_scalar().is_some_and(|s| s.is_one())
    }
}

impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// `(m^{⊗n}) v` by `n` butterfly passes over the tensor factors.
pub fn kron_apply(m: &FieldMatrix, n: usize, v: &FieldVector) -> Result<FieldVector> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("kron_apply needs a square factor".into()));
    }
    let s = m.rows();
    let len = s.checked_pow(n as u32).ok_or_else(|| Error::ShapeMismatch("dimension overflow".into()))?;
    if v.len() != len {
        return Err(Error::ShapeMismatch(format!("vector length {} is not {s}^{n}", v.len())));
    }
    let k = lcm(m.conductor(), v.conductor());
    let m = m.lift(k)?;
    let mut cur = v.lift(k)?.entries;
    let mut next = vec![CycNum::zero(k); len];
    // pass `p` acts on tensor factor `p`; stride is the weight of that digit
    for p in 0..n {
        let stride = s.pow((n - 1 - p) as u32);
        for idx in 0..len {
            let digit = (idx / stride) % s;
            let base = idx - digit * stride;
            let mut acc = CycNum::zero(k);
            for t in 0..s {
                let coef = m.get(digit, t);
                let x = &cur[base + t * stride];
                if !coef.is_zero() && !x.is_zero() {
                    acc += &(coef * x);
                }
            }
            next[idx] = acc;
        }
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(FieldVector { conductor: k, entries: cur })
}

/// `(m^{⊗n}) a`, applying [`kron_apply`] to each column.
pub fn kron_apply_columns(m: &FieldMatrix, n: usize, a: &FieldMatrix) -> Result<FieldMatrix> {
    let cols = a
        .columns()
        .iter()
        .map(|c| kron_apply(m, n, c))
        .collect::<Result<Vec<_>>>()?;
    if cols.is_empty() {
        return Ok(FieldMatrix::zeros(a.conductor(), m.rows().pow(n as u32), 0));
    }
    FieldMatrix::from_columns(&cols)
}

/// `a (m^{⊗n})`, computed as `((m^T)^{⊗n} a^T)^T`.
pub fn kron_apply_rows(a: &FieldMatrix, m: &FieldMatrix, n: usize) -> Result<FieldMatrix> {
    Ok(kron_apply_columns(&m.transpose(), n, &a.transpose())?.transpose())
}

/// Squared Frobenius norm `Tr(A†A)`, computed entry-wise.
pub fn frobenius_sq(a: &FieldMatrix) -> CycNum {
    let mut acc = CycNum::zero(a.conductor());
    for e in a.entries() {
        if !e.is_zero() {
            acc += &e.norm_sq();
        }
    }
    acc
}
