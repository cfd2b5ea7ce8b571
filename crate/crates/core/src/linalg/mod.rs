//! Exact rational linear algebra and integer lattice operations.
//!
//! Everything here works over `BigRational` / `BigInt`; there is no floating
//! point anywhere in the crate.

mod lp;
mod snf;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use lp::{LinearSystem, LpOutcome};
pub use snf::{smith_normal_form, SmithForm};

pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("zero vector has no primitive direction")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimMismatch { expected: usize, found: usize },
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rat::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

/// An element of the lattice `N = Z^n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(pub Vec<i64>);

impl IntVector {
    pub fn zeros(dim: usize) -> Self {
        IntVector(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// gcd of the entries; zero for the zero vector.
    pub fn content(&self) -> u64 {
        self.0.iter().fold(0u64, |g, &x| g.gcd(&x.unsigned_abs()))
    }

    pub fn to_rat(&self) -> RatVector {
        RatVector(self.0.iter().map(|&x| rat(x)).collect())
    }

    pub fn scale(&self, k: i64) -> IntVector {
        IntVector(self.0.iter().map(|&x| x * k).collect())
    }

    pub fn l1_norm(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).sum()
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector(v)
    }
}

impl Add for &IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVector {
    type Output = IntVector;
    fn neg(self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Divides `v` by the gcd of its entries.
pub fn primitive_vector(v: &IntVector) -> Result<IntVector, LinalgError> {
    let c = v.content();
    if c == 0 {
        return Err(LinalgError::ZeroVector);
    }
    let c = c as i64;
    Ok(IntVector(v.0.iter().map(|x| x / c).collect()))
}

/// A point or direction in `N_R` with exact rational coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RatVector(pub Vec<Rat>);

impl RatVector {
    pub fn zeros(dim: usize) -> Self {
        RatVector(vec![Rat::zero(); dim])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        RatVector(v.iter().map(|&x| rat(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &Rat) -> RatVector {
        RatVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn dot(&self, other: &[Rat]) -> Rat {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    /// Adds `k * v` in place.
    pub fn add_scaled(&mut self, k: &Rat, v: &RatVector) {
        for (a, b) in self.0.iter_mut().zip(&v.0) {
            *a += k * b;
        }
    }

    pub fn add_scaled_int(&mut self, k: &Rat, v: &IntVector) {
        for (a, &b) in self.0.iter_mut().zip(&v.0) {
            *a += k * rat(b);
        }
    }

    /// Clears denominators and divides by the content. Zero stays zero.
    pub fn to_primitive_integral(&self) -> Vec<BigInt> {
        let lcm = self.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|x| (x * Rat::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|x| x / &g).collect()
    }
}

impl Add for &RatVector {
    type Output = RatVector;
    fn add(self, rhs: &RatVector) -> RatVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        RatVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RatVector {
    type Output = RatVector;
    fn sub(self, rhs: &RatVector) -> RatVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        RatVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RatVector {
    type Output = RatVector;
    fn neg(self) -> RatVector {
        RatVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        IntMatrix { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            entries.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix::new(rows.len(), cols, entries)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[IntVector]) -> Self {
        let mut m = IntMatrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.dim(), rows);
            for (i, &x) in c.0.iter().enumerate() {
                m.set(i, j, BigInt::from(x));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.entries[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn apply(&self, v: &RatVector) -> RatVector {
        assert_eq!(v.dim(), self.cols, "matrix-vector shape mismatch");
        RatVector(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(&v.0)
                        .filter(|(a, _)| !a.is_zero())
                        .map(|(a, x)| Rat::from_integer(a.clone()) * x)
                        .sum()
                })
                .collect(),
        )
    }

    pub fn apply_int(&self, v: &IntVector) -> RatVector {
        self.apply(&v.to_rat())
    }

    /// Entries as i64, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn to_rat_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect()
    }

    /// Column `j` as a rational vector.
    pub fn column_rat(&self, j: usize) -> RatVector {
        RatVector(
            (0..self.rows)
                .map(|i| Rat::from_integer(self.get(i, j).clone()))
                .collect(),
        )
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Reduces `rows` to reduced row echelon form in place and returns the
/// pivot columns. Zero rows are dropped.
pub fn rref(rows: &mut Vec<Vec<Rat>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<RatVector> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(RatVector(v));
    }
    basis
}

/// Some solution of `rows · x = rhs`, if one exists.
pub fn solve(rows: &[Vec<Rat>], rhs: &[Rat], ncols: usize) -> Option<Vec<Rat>> {
    let mut aug: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &p) in aug.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// A linear subspace of `Q^ambient_dim` with an independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<RatVector>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace::span(
            ambient_dim,
            (0..ambient_dim).map(|i| {
                let mut v = RatVector::zeros(ambient_dim);
                v.0[i] = Rat::one();
                v
            }),
        )
        .expect("unit vectors have the ambient dimension")
    }

    /// Span of arbitrary (possibly dependent) vectors; the stored basis is
    /// the reduced echelon form.
    pub fn span<I>(ambient_dim: usize, vectors: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = RatVector>,
    {
        let mut rows = Vec::new();
        for v in vectors {
            if v.dim() != ambient_dim {
                return Err(LinalgError::DimMismatch {
                    expected: ambient_dim,
                    found: v.dim(),
                });
            }
            rows.push(v.0);
        }
        rref(&mut rows, ambient_dim);
        Ok(Subspace {
            ambient_dim,
            basis: rows.into_iter().map(RatVector).collect(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RatVector] {
        &self.basis
    }

    /// Basis of the linear functionals vanishing on the subspace.
    pub fn annihilator(&self) -> Vec<RatVector> {
        let rows: Vec<Vec<Rat>> = self.basis.iter().map(|v| v.0.clone()).collect();
        nullspace(&rows, self.ambient_dim)
    }

    pub fn contains(&self, v: &RatVector) -> Result<bool, LinalgError> {
        span_membership(v, self)
    }
}

/// Whether `v` lies in the rational span of `s`.
pub fn span_membership(v: &RatVector, s: &Subspace) -> Result<bool, LinalgError> {
    if v.dim() != s.ambient_dim {
        return Err(LinalgError::DimMismatch {
            expected: s.ambient_dim,
            found: v.dim(),
        });
    }
    let mut rows: Vec<Vec<Rat>> = s.basis.iter().map(|b| b.0.clone()).collect();
    rows.push(v.0.clone());
    Ok(rank(&rows, s.ambient_dim) == s.dim())
}

/// Whether the lattice spanned by `sub_basis` equals its rational span
/// intersected with `Z^ambient_dim`: all elementary divisors equal 1.
pub fn is_saturated(sub_basis: &[IntVector], ambient_dim: usize) -> Result<bool, LinalgError> {
    for v in sub_basis {
        if v.dim() != ambient_dim {
            return Err(LinalgError::DimMismatch {
                expected: ambient_dim,
                found: v.dim(),
            });
        }
    }
    if sub_basis.is_empty() {
        return Ok(true);
    }
    let rows: Vec<Vec<i64>> = sub_basis.iter().map(|v| v.0.clone()).collect();
    let m = IntMatrix::from_rows(ambient_dim, &rows);
    let snf = smith_normal_form(&m);
    let divisors = snf.elementary_divisors();
    if divisors.len() < sub_basis.len() {
        return Err(LinalgError::DependentGenerators);
    }
    Ok(divisors.iter().all(One::is_one))
}

/// Finds integers `a_i >= 1` with `sum a_i * v_i` in `target`, or `None` if
/// no strictly positive combination exists.
///
/// The constraint system is homogeneous, so `a_i > 0` is feasible iff
/// `a_i >= 1` is; the returned certificate has its denominators cleared and
/// is divided by its content.
pub fn strict_positive_combination(
    vectors: &[RatVector],
    target: &Subspace,
) -> Result<Option<Vec<BigInt>>, LinalgError> {
    let dim = target.ambient_dim();
    for v in vectors {
        if v.dim() != dim {
            return Err(LinalgError::DimMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
    }
    if vectors.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let normals = target.annihilator();
    let m = vectors.len();
    let mut system = LinearSystem::new(m);
    for n in &normals {
        let row: Vec<Rat> = vectors.iter().map(|v| v.dot(&n.0)).collect();
        system.add_eq(row, Rat::zero());
    }
    for i in 0..m {
        let mut row = vec![Rat::zero(); m];
        row[i] = Rat::one();
        system.add_ge(row, Rat::one());
    }
    let Some(point) = system.feasible_point() else {
        return Ok(None);
    };
    let certificate = RatVector(point).to_primitive_integral();
    debug_assert!(certificate.iter().all(|a| a.is_positive()));
    Ok(Some(certificate))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(v: &[i64]) -> RatVector {
        RatVector::from_ints(v)
    }

    fn iv(v: &[i64]) -> IntVector {
        IntVector(v.to_vec())
    }

    #[test]
    fn primitive_vector_examples() {
        assert_eq!(primitive_vector(&iv(&[4, 6])).unwrap(), iv(&[2, 3]));
        assert_eq!(primitive_vector(&iv(&[0, -5])).unwrap(), iv(&[0, -1]));
        assert_eq!(primitive_vector(&iv(&[7])).unwrap(), iv(&[1]));
        assert_eq!(primitive_vector(&iv(&[0, 0])), Err(LinalgError::ZeroVector));
    }

    #[test]
    fn saturation_examples() {
        assert!(is_saturated(&[iv(&[1, 0])], 2).unwrap());
        assert!(!is_saturated(&[iv(&[2, 0])], 2).unwrap());
        assert!(is_saturated(&[iv(&[1, 1]), iv(&[0, 1])], 2).unwrap());
        assert_eq!(
            is_saturated(&[iv(&[1, 2]), iv(&[2, 4])], 2),
            Err(LinalgError::DependentGenerators)
        );
        assert!(matches!(
            is_saturated(&[iv(&[1, 2, 3])], 2),
            Err(LinalgError::DimMismatch { .. })
        ));
    }

    #[test]
    fn span_membership_examples() {
        let s = Subspace::span(2, [rv(&[1, 1])]).unwrap();
        assert!(span_membership(&rv(&[1, 1]), &s).unwrap());
        assert!(!span_membership(&rv(&[1, 0]), &Subspace::zero(2)).unwrap());
        let s = Subspace::span(3, [rv(&[1, 2, 3])]).unwrap();
        assert!(span_membership(&rv(&[2, 4, 6]), &s).unwrap());
        assert!(span_membership(&rv(&[1, 0]), &s).is_err());
    }

    #[test]
    fn strict_positive_combination_examples() {
        let zero = Subspace::zero(2);
        let c = strict_positive_combination(&[rv(&[1, 0]), rv(&[-1, 0])], &zero)
            .unwrap()
            .unwrap();
        assert_eq!(c, vec![BigInt::from(1), BigInt::from(1)]);

        assert_eq!(
            strict_positive_combination(&[rv(&[1, 0]), rv(&[0, 1])], &zero).unwrap(),
            None
        );

        let x_axis = Subspace::span(2, [rv(&[1, 0])]).unwrap();
        let vs = [rv(&[1, 1]), rv(&[1, -2])];
        let c = strict_positive_combination(&vs, &x_axis).unwrap().unwrap();
        // a1*(1,1) + a2*(1,-2) has zero second coordinate iff a1 = 2*a2.
        assert_eq!(c, vec![BigInt::from(2), BigInt::from(1)]);
    }

    #[test]
    fn nullspace_and_solve() {
        let rows = vec![vec![rat(1), rat(1), rat(0)], vec![rat(0), rat(1), rat(1)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        assert!(rows.iter().all(|r| ns[0].dot(r).is_zero()));
        let x = solve(&rows, &[rat(2), rat(3)], 3).unwrap();
        assert_eq!(RatVector(x.clone()).dot(&rows[0]), rat(2));
        assert_eq!(RatVector(x).dot(&rows[1]), rat(3));
        assert!(solve(&[vec![rat(0)]], &[rat(1)], 1).is_none());
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rat(&ratio(6, 4)), "3/2");
        assert_eq!(format_rat(&rat(3)), "3/1");
        assert_eq!(parse_rat("3/2"), Some(ratio(3, 2)));
        assert_eq!(parse_rat("-4"), Some(rat(-4)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("x"), None);
    }

    #[test]
    fn determinant() {
        let m = IntMatrix::from_rows(3, &[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]);
        assert_eq!(m.det(), BigInt::from(6));
        let m = IntMatrix::from_rows(2, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.det(), BigInt::from(-1));
    }
}
