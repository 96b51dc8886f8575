//! Exact integer linear algebra: Smith normal form, kernels, cokernels and
//! finitely generated abelian groups in invariant-factor form.
//!
//! All arithmetic is done with [`BigInt`]; intermediate entries of a Smith
//! reduction can grow far beyond the size of the input entries.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ragged matrix: row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("image is not contained in the kernel (column {column} of the image map is not a cycle)")]
    ContainmentViolation { column: usize },
}

/// Dense integer matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. `cols` is needed so that
    /// `0 x n` matrices can be expressed.
    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries: data.iter().map(|&x| BigInt::from(x)).collect(),
        })
    }

    /// Builds a matrix from a list of rows. An empty list gives the `0 x 0` matrix.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Ragged {
                    row: i,
                    len: row.len(),
                    expected: cols,
                });
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Builds a `rows x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(LinalgError::DimensionMismatch(format!(
                    "column {j} has length {}, expected {rows}",
                    col.len()
                )));
            }
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone().into());
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

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &IntMatrix,
        f: impl Fn(&BigInt, &BigInt) -> BigInt,
    ) -> Result<IntMatrix, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * k).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Result<IntMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch(
                "power of a non-square matrix".into(),
            ));
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..exp {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Absolute value of the determinant, via the Smith form. Non-square
    /// matrices are rejected.
    pub fn abs_det(&self) -> Result<BigInt, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let diag = smith_normal_form(self);
        if diag.len() < self.rows {
            return Ok(BigInt::zero());
        }
        Ok(diag.iter().product())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let delta = factor * &self.entries[source * self.cols + j];
            self.entries[target * self.cols + j] += delta;
        }
    }

    /// col[target] += factor * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let delta = factor * &self.entries[i * self.cols + source];
            self.entries[i * self.cols + target] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.entries[i * self.cols + j];
            self.entries[i * self.cols + j] = v;
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Smith decomposition `U * M * V = D` with unimodular `U`, `V`.
///
/// `diagonal` holds the nonzero diagonal entries of `D` in divisor-chain order,
/// so its length is the rank of `M`. `right_inverse` is `V^{-1}`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub right_inverse: IntMatrix,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

/// Smallest nonzero absolute value in the lower-right block starting at `t`,
/// ties broken by (row, column).
fn find_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a.get(bi, bj).abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Computes the full Smith decomposition with transforms.
///
/// Pivoting is deterministic: the entry of smallest absolute value is chosen,
/// ties resolved lexicographically by position.
pub fn smith_decomposition(m: &IntMatrix) -> SmithDecomposition {
    let mut a = m.clone();
    let mut left = IntMatrix::identity(m.rows);
    let mut right = IntMatrix::identity(m.cols);
    let mut right_inv = IntMatrix::identity(m.cols);

    // Column operations act on `right` by the same column operation and on
    // `right_inv` by the inverse row operation.
    let col_swap = |a: &mut IntMatrix, r: &mut IntMatrix, ri: &mut IntMatrix, x: usize, y: usize| {
        a.swap_cols(x, y);
        r.swap_cols(x, y);
        ri.swap_rows(x, y);
    };
    let col_add = |a: &mut IntMatrix,
                   r: &mut IntMatrix,
                   ri: &mut IntMatrix,
                   target: usize,
                   source: usize,
                   q: &BigInt| {
        a.add_col_multiple(target, source, q);
        r.add_col_multiple(target, source, q);
        ri.add_row_multiple(source, target, &-q);
    };

    let limit = m.rows.min(m.cols);
    let mut t = 0;
    while t < limit {
        let Some((pi, pj)) = find_pivot(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        col_swap(&mut a, &mut right, &mut right_inv, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..a.rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -(a.get(i, t) / a.get(t, t));
                a.add_row_multiple(i, t, &q);
                left.add_row_multiple(i, t, &q);
                if !a.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..a.cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -(a.get(t, j) / a.get(t, t));
                col_add(&mut a, &mut right, &mut right_inv, j, t, &q);
                if !a.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // Move the smallest remaining entry of the pivot cross to (t, t).
                let mut best = (t, t);
                for i in t..a.rows {
                    let x = a.get(i, t);
                    if !x.is_zero() && x.abs() < a.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..a.cols {
                    let x = a.get(t, j);
                    if !x.is_zero() && x.abs() < a.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                a.swap_rows(t, best.0);
                left.swap_rows(t, best.0);
                col_swap(&mut a, &mut right, &mut right_inv, t, best.1);
                continue;
            }
            // Pivot cross is clear; enforce divisibility of the remaining block.
            let pivot = a.get(t, t).clone();
            let offender = (t + 1..a.rows)
                .find(|&i| (t + 1..a.cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    left.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }

    let diagonal = (0..t).map(|i| a.get(i, i).clone()).collect();
    SmithDecomposition {
        diagonal,
        left,
        right,
        right_inverse: right_inv,
    }
}

/// Nonzero Smith invariants `d1 | d2 | ...` of `m`; the length is the rank.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    smith_decomposition(m).diagonal
}

/// `Z^rows / image(m)` in canonical form.
pub fn cokernel(m: &IntMatrix) -> FgAbGroup {
    let diag = smith_normal_form(m);
    FgAbGroup::from_parts(m.rows - diag.len(), diag)
}

/// Columns form a Z-basis of the kernel of `m`.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let dec = smith_decomposition(m);
    let r = dec.rank();
    let cols: Vec<Vec<BigInt>> = (r..m.cols).map(|j| dec.right.column(j)).collect();
    IntMatrix::from_columns(m.cols, &cols).expect("kernel columns have matching length")
}

/// `ker(ker_of) / im(im_of)`, where `im_of` must land inside the kernel.
pub fn subquotient(ker_of: &IntMatrix, im_of: &IntMatrix) -> Result<FgAbGroup, LinalgError> {
    if ker_of.cols != im_of.rows {
        return Err(LinalgError::DimensionMismatch(format!(
            "kernel map has source rank {}, image map has target rank {}",
            ker_of.cols, im_of.rows
        )));
    }
    let composite = ker_of.mul(im_of)?;
    if let Some(column) = (0..composite.cols).find(|&j| (0..composite.rows).any(|i| !composite.get(i, j).is_zero())) {
        return Err(LinalgError::ContainmentViolation { column });
    }
    let dec = smith_decomposition(ker_of);
    let r = dec.rank();
    // In the coordinates given by V^{-1}, the kernel is spanned by the last
    // cols - r basis vectors.
    let coords = dec.right_inverse.mul(im_of)?;
    let k = ker_of.cols - r;
    let mut sub = IntMatrix::zeros(k, im_of.cols);
    for i in 0..k {
        for j in 0..im_of.cols {
            sub.set(i, j, coords.get(r + i, j).clone());
        }
    }
    Ok(cokernel(&sub))
}

/// Finitely generated abelian group `Z^free_rank ⊕ Z/d1 ⊕ ... ⊕ Z/dk` with
/// `d1 | d2 | ... | dk` and every `di >= 2`.
///
/// The representation is canonical, so structural equality is isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgAbGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn trivial() -> Self {
        FgAbGroup {
            free_rank: 0,
            invariant_factors: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    /// `Z/n`; `n = 0` gives `Z` and `n = 1` the trivial group.
    pub fn cyclic(n: u64) -> Self {
        Self::from_parts(0, [BigInt::from(n)])
    }

    /// `(Z/n)^k`.
    pub fn elementary(n: u64, k: usize) -> Self {
        Self::from_parts(0, vec![BigInt::from(n); k])
    }

    /// Canonicalizes `Z^free_rank ⊕ ⊕ Z/c` for an arbitrary list of cyclic
    /// orders `c`. Zeros contribute free rank, units vanish, signs are ignored.
    pub fn from_parts<I: IntoIterator<Item = BigInt>>(free_rank: usize, cyclic_orders: I) -> Self {
        let orders: Vec<BigInt> = cyclic_orders.into_iter().map(|c| c.abs()).collect();
        let mut free = free_rank + orders.iter().filter(|c| c.is_zero()).count();
        let torsion: Vec<BigInt> = orders.into_iter().filter(|c| !c.is_zero() && !c.is_one()).collect();
        let chain_ok = torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
        let invariant_factors = if chain_ok {
            torsion
        } else {
            let diag = smith_normal_form(&IntMatrix::diagonal(&torsion));
            free += torsion.len() - diag.len();
            diag.into_iter().filter(|d| !d.is_one()).collect()
        };
        FgAbGroup {
            free_rank: free,
            invariant_factors,
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Number of elements, or `None` for infinite groups.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.invariant_factors.iter().product())
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        Self::from_parts(
            self.free_rank + other.free_rank,
            self.invariant_factors
                .iter()
                .chain(&other.invariant_factors)
                .cloned(),
        )
    }

    /// Number of cyclic 2-primary summands, i.e. the dimension of the 2-torsion
    /// subgroup over the field with two elements.
    pub fn two_rank(&self) -> usize {
        self.invariant_factors.iter().filter(|d| d.is_even()).count()
    }

    /// Decomposition into indecomposable cyclic groups: one `0` entry per free
    /// summand followed by prime powers `p^k`, sorted.
    pub fn indecomposables(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.free_rank];
        let mut primary = Vec::new();
        for d in &self.invariant_factors {
            primary.extend(prime_power_parts(d));
        }
        primary.sort();
        out.extend(primary);
        out
    }
}

/// Splits `n >= 2` into its prime-power factors by trial division.
fn prime_power_parts(n: &BigInt) -> Vec<BigInt> {
    let mut rest = n.clone();
    let mut parts = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        if rest.is_multiple_of(&p) {
            let mut q = BigInt::one();
            while rest.is_multiple_of(&p) {
                rest /= &p;
                q *= &p;
            }
            parts.push(q);
        }
        p += 1;
    }
    if !rest.is_one() {
        parts.push(rest);
    }
    parts
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("ℤ".to_string()),
            r => parts.push(format!("ℤ^{r}")),
        }
        let mut i = 0;
        while i < self.invariant_factors.len() {
            let d = &self.invariant_factors[i];
            let run = self.invariant_factors[i..].iter().take_while(|x| *x == d).count();
            if run == 1 {
                parts.push(format!("ℤ/{d}"));
            } else {
                parts.push(format!("(ℤ/{d})^{run}"));
            }
            i += run;
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// JSON integers that may exceed machine width: written as numbers when they
/// fit in 64 bits, as decimal strings otherwise.
pub(crate) mod bigint_json {
    use super::*;

    pub fn to_value(x: &BigInt) -> serde_json::Value {
        match x.to_i64() {
            Some(v) => serde_json::Value::from(v),
            None => serde_json::Value::from(x.to_string()),
        }
    }

    pub fn from_value(v: &serde_json::Value) -> Option<BigInt> {
        match v {
            serde_json::Value::Number(n) => n.as_i64().map(BigInt::from).or_else(|| n.as_u64().map(BigInt::from)),
            serde_json::Value::String(s) => s.parse().ok(),
            _ => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FgAbGroupRepr {
    free_rank: usize,
    invariant_factors: Vec<serde_json::Value>,
}

impl Serialize for FgAbGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FgAbGroupRepr {
            free_rank: self.free_rank,
            invariant_factors: self.invariant_factors.iter().map(bigint_json::to_value).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FgAbGroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = FgAbGroupRepr::deserialize(deserializer)?;
        let factors = repr
            .invariant_factors
            .iter()
            .map(|v| bigint_json::from_value(v).ok_or_else(|| serde::de::Error::custom("invalid integer")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FgAbGroup::from_parts(repr.free_rank, factors))
    }
}
