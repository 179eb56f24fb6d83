//! Exact scalars and dense matrices over `Q` or a prime field `F_p`.
//!
//! Every equality test downstream (sheaf laws, morphism equations, kernel
//! checks) bottoms out here, so nothing in this module ever rounds.
//! Rationals are kept in lowest terms with a positive denominator, and
//! residues always lie in `[0, p)`, which makes structural equality the
//! same as mathematical equality.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },
    #[error("matrix is singular (rank {rank} < {size})")]
    SingularMatrix { rank: usize, size: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse scalar {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("division by zero")]
    DivisionByZero,
}

/// The coefficient field of every matrix in a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, LinError> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(LinError::NotPrime(p));
        }
        Ok(Field::Prime(p as u32))
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = LinError;

    /// Accepts `Q` or `Fp:p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rational);
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            let p: u64 = p.parse().map_err(|_| LinError::Parse {
                text: s.to_string(),
                reason: "expected Fp:<prime>".into(),
            })?;
            return Field::prime(p);
        }
        Err(LinError::Parse {
            text: s.to_string(),
            reason: "field must be Q or Fp:<prime>".into(),
        })
    }
}

/// A single exact field element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rational(BigRational),
    Prime { residue: u32, modulus: u32 },
}

impl FieldScalar {
    pub fn zero(field: Field) -> Self {
        Self::from_i64(field, 0)
    }

    pub fn one(field: Field) -> Self {
        Self::from_i64(field, 1)
    }

    pub fn from_i64(field: Field, v: i64) -> Self {
        match field {
            Field::Rational => FieldScalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => FieldScalar::Prime {
                residue: v.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    pub fn from_ratio(field: Field, numer: i64, denom: i64) -> Result<Self, LinError> {
        if denom == 0 {
            return Err(LinError::DivisionByZero);
        }
        match field {
            Field::Rational => Ok(FieldScalar::Rational(BigRational::new(
                BigInt::from(numer),
                BigInt::from(denom),
            ))),
            Field::Prime(p) => {
                let d = (denom.rem_euclid(p as i64)) as u32;
                if d == 0 {
                    return Err(LinError::DivisionByZero);
                }
                let n = numer.rem_euclid(p as i64) as u32;
                Ok(FieldScalar::Prime {
                    residue: mul_mod(n, inv_mod(d, p), p),
                    modulus: p,
                })
            }
        }
    }

    /// Parses `"p/q"`, `"n"` (rationals) or a decimal residue (prime fields).
    pub fn parse(field: Field, text: &str) -> Result<Self, LinError> {
        let bad = |reason: &str| LinError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let t = text.trim();
        match field {
            Field::Rational => {
                let (n, d) = match t.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (t, "1"),
                };
                let n = BigInt::from_str(n).map_err(|_| bad("bad numerator"))?;
                let d = BigInt::from_str(d).map_err(|_| bad("bad denominator"))?;
                if d.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Ok(FieldScalar::Rational(BigRational::new(n, d)))
            }
            Field::Prime(p) => {
                let v = BigInt::from_str(t).map_err(|_| bad("bad residue"))?;
                let r = v.mod_floor(&BigInt::from(p));
                let r: u32 = r.try_into().map_err(|_| bad("bad residue"))?;
                Ok(FieldScalar::Prime { residue: r, modulus: p })
            }
        }
    }

    pub fn field(&self) -> Field {
        match self {
            FieldScalar::Rational(_) => Field::Rational,
            FieldScalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_zero(),
            FieldScalar::Prime { residue, .. } => *residue == 0,
        }
    }

    fn same_field(&self, other: &Self) -> Result<(), LinError> {
        if self.field() != other.field() {
            return Err(LinError::FieldMismatch {
                left: self.field(),
                right: other.field(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a + b),
            (FieldScalar::Prime { residue: a, modulus }, FieldScalar::Prime { residue: b, .. }) => {
                FieldScalar::Prime { residue: add_mod(*a, *b, *modulus), modulus: *modulus }
            }
            _ => unreachable!(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a * b),
            (FieldScalar::Prime { residue: a, modulus }, FieldScalar::Prime { residue: b, .. }) => {
                FieldScalar::Prime { residue: mul_mod(*a, *b, *modulus), modulus: *modulus }
            }
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> Self {
        match self {
            FieldScalar::Rational(a) => FieldScalar::Rational(-a),
            FieldScalar::Prime { residue, modulus } => FieldScalar::Prime {
                residue: (*modulus - *residue) % *modulus,
                modulus: *modulus,
            },
        }
    }

    pub fn inv(&self) -> Result<Self, LinError> {
        if self.is_zero() {
            return Err(LinError::DivisionByZero);
        }
        Ok(match self {
            FieldScalar::Rational(a) => FieldScalar::Rational(a.recip()),
            FieldScalar::Prime { residue, modulus } => FieldScalar::Prime {
                residue: inv_mod(*residue, *modulus),
                modulus: *modulus,
            },
        })
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(r) => write!(f, "{r}"),
            FieldScalar::Prime { residue, .. } => write!(f, "{residue}"),
        }
    }
}

fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + p as u64 - b as u64) % p as u64) as u32
}

fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat: a^(p-2)
    let mut base = a as u64 % p as u64;
    let mut exp = p as u64 - 2;
    let mut acc = 1u64;
    let m = p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc as u32
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Entries {
    Rational(Vec<BigRational>),
    Prime { modulus: u32, values: Vec<u32> },
}

/// Dense row-major matrix over a single exact field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Entries,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        let entries = match field {
            Field::Rational => Entries::Rational(vec![BigRational::zero(); rows * cols]),
            Field::Prime(p) => Entries::Prime { modulus: p, values: vec![0; rows * cols] },
        };
        Matrix { rows, cols, entries }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for k in 0..n {
            m.set_one(k, k);
        }
        m
    }

    /// Permutation matrix sending basis vector `e_j` to `e_{perm[j]}`.
    pub fn permutation(field: Field, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Matrix::zeros(field, n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.set_one(i, j);
        }
        m
    }

    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<FieldScalar>) -> Result<Self, LinError> {
        if entries.len() != rows * cols {
            return Err(LinError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let mut m = Matrix::zeros(field, rows, cols);
        for (k, e) in entries.into_iter().enumerate() {
            m.set(k / cols.max(1), k % cols.max(1), e)?;
        }
        Ok(m)
    }

    pub fn from_i64(field: Field, rows: usize, cols: usize, values: &[i64]) -> Result<Self, LinError> {
        Matrix::new(
            field,
            rows,
            cols,
            values.iter().map(|&v| FieldScalar::from_i64(field, v)).collect(),
        )
    }

    /// Builds a matrix from integer rows; all rows must share one length.
    pub fn from_rows_i64(field: Field, rows: &[Vec<i64>]) -> Result<Self, LinError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinError::DimensionMismatch("ragged rows".into()));
        }
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Matrix::from_i64(field, rows.len(), cols, &flat)
    }

    /// Parses rows of scalar strings with a known shape.
    pub fn from_strings(field: Field, rows: usize, cols: usize, text: &[Vec<String>]) -> Result<Self, LinError> {
        if text.len() != rows || text.iter().any(|r| r.len() != cols) {
            return Err(LinError::DimensionMismatch(format!(
                "expected a {rows}x{cols} matrix"
            )));
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for row in text {
            for s in row {
                entries.push(FieldScalar::parse(field, s)?);
            }
        }
        Matrix::new(field, rows, cols, entries)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).to_string()).collect())
            .collect()
    }

    pub fn field(&self) -> Field {
        match &self.entries {
            Entries::Rational(_) => Field::Rational,
            Entries::Prime { modulus, .. } => Field::Prime(*modulus),
        }
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

    pub fn get(&self, r: usize, c: usize) -> FieldScalar {
        let k = r * self.cols + c;
        match &self.entries {
            Entries::Rational(v) => FieldScalar::Rational(v[k].clone()),
            Entries::Prime { modulus, values } => FieldScalar::Prime {
                residue: values[k],
                modulus: *modulus,
            },
        }
    }

    pub fn set(&mut self, r: usize, c: usize, value: FieldScalar) -> Result<(), LinError> {
        if value.field() != self.field() {
            return Err(LinError::FieldMismatch { left: self.field(), right: value.field() });
        }
        let k = r * self.cols + c;
        match (&mut self.entries, value) {
            (Entries::Rational(v), FieldScalar::Rational(x)) => v[k] = x,
            (Entries::Prime { values, .. }, FieldScalar::Prime { residue, .. }) => values[k] = residue,
            _ => unreachable!(),
        }
        Ok(())
    }

    fn set_one(&mut self, r: usize, c: usize) {
        let k = r * self.cols + c;
        match &mut self.entries {
            Entries::Rational(v) => v[k] = BigRational::one(),
            Entries::Prime { values, .. } => values[k] = 1,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.field(), self.rows)
    }

    /// Copies `self` into the top-left corner of a zero matrix of the given shape.
    pub fn embed(&self, rows: usize, cols: usize) -> Result<Matrix, LinError> {
        if rows < self.rows || cols < self.cols {
            return Err(LinError::DimensionMismatch("embedding target is smaller".into()));
        }
        let mut out = Matrix::zeros(self.field(), rows, cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c))?;
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinError> {
        if self.field() != other.field() {
            return Err(LinError::FieldMismatch { left: self.field(), right: other.field() });
        }
        if self.cols != other.rows {
            return Err(LinError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let entries = match (&self.entries, &other.entries) {
            (Entries::Rational(a), Entries::Rational(b)) => {
                let mut c = vec![BigRational::zero(); n * p];
                for i in 0..n {
                    for k in 0..m {
                        let aik = &a[i * m + k];
                        if aik.is_zero() {
                            continue;
                        }
                        for j in 0..p {
                            let bkj = &b[k * p + j];
                            if bkj.is_zero() {
                                continue;
                            }
                            c[i * p + j] += aik * bkj;
                        }
                    }
                }
                Entries::Rational(c)
            }
            (Entries::Prime { modulus, values: a }, Entries::Prime { values: b, .. }) => {
                let q = *modulus as u64;
                let mut c = vec![0u64; n * p];
                for i in 0..n {
                    for k in 0..m {
                        let aik = a[i * m + k] as u64;
                        if aik == 0 {
                            continue;
                        }
                        for j in 0..p {
                            c[i * p + j] = (c[i * p + j] + aik * b[k * p + j] as u64) % q;
                        }
                    }
                }
                Entries::Prime { modulus: *modulus, values: c.into_iter().map(|x| x as u32).collect() }
            }
            _ => unreachable!(),
        };
        Ok(Matrix { rows: n, cols: p, entries })
    }

    pub fn inverse(&self) -> Result<Matrix, LinError> {
        if !self.is_square() {
            return Err(LinError::DimensionMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        match &self.entries {
            Entries::Rational(v) => rational_inverse(self.rows, v),
            Entries::Prime { modulus, values } => prime_inverse(self.rows, *modulus, values),
        }
    }

    pub fn rank(&self) -> usize {
        match &self.entries {
            Entries::Rational(v) => {
                let rows: Vec<Vec<BigInt>> = (0..self.rows)
                    .map(|r| integer_row(&v[r * self.cols..(r + 1) * self.cols]))
                    .collect();
                fraction_free_reduce(rows, self.cols).1
            }
            Entries::Prime { modulus, values } => {
                let mut rows: Vec<Vec<u32>> = values.chunks(self.cols.max(1)).map(|c| c.to_vec()).collect();
                if self.cols == 0 {
                    return 0;
                }
                prime_reduce(&mut rows, self.cols, *modulus)
            }
        }
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Matrix) -> Result<Matrix, LinError> {
        let field = self.field();
        if field != other.field() {
            return Err(LinError::FieldMismatch { left: field, right: other.field() });
        }
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Matrix::zeros(field, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a.mul(&other.get(k, l))?)?;
                    }
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix, LinError> {
    a.mul(b)
}

pub fn mat_inverse(a: &Matrix) -> Result<Matrix, LinError> {
    a.inverse()
}

/// Clears denominators of a rational row (scaling by the lcm).
fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

fn normalize_row(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Fraction-free Gauss-Jordan over the integers. Each elimination step is
/// `row_i <- p * row_i - a_ik * row_pivot` followed by dividing the row by
/// the gcd of its entries. Returns the reduced rows and the rank found in
/// the first `pivot_cols` columns.
fn fraction_free_reduce(mut rows: Vec<Vec<BigInt>>, pivot_cols: usize) -> (Vec<Vec<BigInt>>, usize, Vec<usize>) {
    let n = rows.len();
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..pivot_cols {
        let Some(p) = (rank..n).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let pv = pivot_row[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                if y.is_zero() {
                    *x = &*x * &pv;
                } else {
                    *x = &*x * &pv - &f * y;
                }
            }
            normalize_row(row);
        }
        pivots.push(col);
        rank += 1;
    }
    (rows, rank, pivots)
}

fn rational_inverse(n: usize, v: &[BigRational]) -> Result<Matrix, LinError> {
    // Augment the integer-scaled matrix D*A with D, so the right block of the
    // reduced system is a scaled copy of A^{-1}.
    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let row = &v[r * n..(r + 1) * n];
        let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        out.extend((0..n).map(|c| if c == r { lcm.clone() } else { BigInt::zero() }));
        rows.push(out);
    }
    let (rows, rank, _) = fraction_free_reduce(rows, n);
    if rank < n {
        return Err(LinError::SingularMatrix { rank, size: n });
    }
    let mut out = Vec::with_capacity(n * n);
    for (r, row) in rows.iter().enumerate() {
        let d = &row[r];
        for x in &row[n..] {
            out.push(BigRational::new(x.clone(), d.clone()));
        }
    }
    Ok(Matrix { rows: n, cols: n, entries: Entries::Rational(out) })
}

fn prime_reduce(rows: &mut [Vec<u32>], pivot_cols: usize, p: u32) -> usize {
    let n = rows.len();
    let mut rank = 0;
    for col in 0..pivot_cols {
        let Some(piv) = (rank..n).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                *x = sub_mod(*x, mul_mod(f, *y, p), p);
            }
        }
        rank += 1;
    }
    rank
}

fn prime_inverse(n: usize, p: u32, values: &[u32]) -> Result<Matrix, LinError> {
    let mut rows: Vec<Vec<u32>> = (0..n)
        .map(|r| {
            let mut row = values[r * n..(r + 1) * n].to_vec();
            row.extend((0..n).map(|c| u32::from(c == r)));
            row
        })
        .collect();
    let rank = prime_reduce(&mut rows, n, p);
    if rank < n {
        return Err(LinError::SingularMatrix { rank, size: n });
    }
    let out = rows.iter().flat_map(|row| row[n..].iter().copied()).collect();
    Ok(Matrix { rows: n, cols: n, entries: Entries::Prime { modulus: p, values: out } })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn m(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_rows_i64(Q, rows).unwrap()
    }

    #[test]
    fn identity_squared() {
        let i2 = Matrix::identity(Q, 2);
        assert_eq!(mat_mul(&i2, &i2).unwrap(), i2);
    }

    #[test]
    fn shear_times_inverse_shear() {
        let a = m(&[vec![1, 1], vec![0, 1]]);
        let b = m(&[vec![1, -1], vec![0, 1]]);
        assert_eq!(mat_mul(&a, &b).unwrap(), Matrix::identity(Q, 2));
        assert_eq!(mat_mul(&b, &a).unwrap(), Matrix::identity(Q, 2));
    }

    #[test]
    fn ones_over_f5() {
        let f5 = Field::prime(5).unwrap();
        let a = Matrix::from_i64(f5, 2, 3, &[1; 6]).unwrap();
        let b = Matrix::from_i64(f5, 3, 1, &[1; 3]).unwrap();
        assert_eq!(mat_mul(&a, &b).unwrap(), Matrix::from_i64(f5, 2, 1, &[3, 3]).unwrap());
    }

    #[test]
    fn dimension_and_field_mismatch() {
        let a = Matrix::identity(Q, 2);
        let b = Matrix::identity(Q, 3);
        assert!(matches!(mat_mul(&a, &b), Err(LinError::DimensionMismatch(_))));
        let c = Matrix::identity(Field::prime(3).unwrap(), 2);
        assert!(matches!(mat_mul(&a, &c), Err(LinError::FieldMismatch { .. })));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mat_inverse(&Matrix::identity(Q, 3)).unwrap(), Matrix::identity(Q, 3));
        let a = m(&[vec![1, 1], vec![0, 1]]);
        let inv = mat_inverse(&a).unwrap();
        assert_eq!(inv, m(&[vec![1, -1], vec![0, 1]]));
        assert_eq!(mat_mul(&a, &inv).unwrap(), Matrix::identity(Q, 2));
        assert!(matches!(
            mat_inverse(&m(&[vec![1, 1], vec![1, 1]])),
            Err(LinError::SingularMatrix { rank: 1, size: 2 })
        ));
    }

    #[test]
    fn rational_inverse_with_fractions() {
        let half = FieldScalar::from_ratio(Q, 1, 2).unwrap();
        let mut a = Matrix::identity(Q, 2);
        a.set(0, 1, half).unwrap();
        a.set(1, 0, FieldScalar::from_ratio(Q, -3, 4).unwrap()).unwrap();
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        assert!(inv.mul(&a).unwrap().is_identity());
    }

    #[test]
    fn prime_field_inverse() {
        let f7 = Field::prime(7).unwrap();
        let a = Matrix::from_i64(f7, 2, 2, &[2, 3, 1, 4]).unwrap();
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        // det = 5 != 0 mod 7, singular only when det vanishes
        let s = Matrix::from_i64(f7, 2, 2, &[1, 2, 4, 1]).unwrap(); // det = 1 - 8 = -7
        assert!(matches!(s.inverse(), Err(LinError::SingularMatrix { .. })));
    }

    #[test]
    fn parse_and_normalize() {
        let s = FieldScalar::parse(Q, "6/-4").unwrap();
        assert_eq!(s.to_string(), "-3/2");
        assert_eq!(FieldScalar::parse(Q, "4/2").unwrap().to_string(), "2");
        let f5 = Field::prime(5).unwrap();
        assert_eq!(FieldScalar::parse(f5, "-1").unwrap().to_string(), "4");
        assert!(FieldScalar::parse(Q, "1/0").is_err());
        assert!(FieldScalar::parse(Q, "x").is_err());
    }

    #[test]
    fn field_spec_round_trip() {
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("Fp:13".parse::<Field>().unwrap(), Field::Prime(13));
        assert!("Fp:12".parse::<Field>().is_err());
        assert_eq!(Field::Prime(13).to_string(), "Fp:13");
    }

    #[test]
    fn rank_and_kron() {
        assert_eq!(m(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        assert_eq!(m(&[vec![1, 2, 3], vec![0, 1, 1]]).rank(), 2);
        let k = m(&[vec![0, 1], vec![1, 0]]).kron(&Matrix::identity(Q, 2)).unwrap();
        assert_eq!(k.rows(), 4);
        assert!(k.mul(&k).unwrap().is_identity());
    }
}
