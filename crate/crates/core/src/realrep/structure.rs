//! Exact decomposition of a semisimple real algebra given by rational
//! structure constants.
//!
//! The center `Z` carries a weight element `W` with `Tr_Z(W y) = Tr_A(y)` for
//! central `y`. On a real place of a block `M_s(D)` it acts by `dim_ℝ` of the
//! block, on a complex place `M_n(ℂ)` by `n²`. Eigenspaces of `W` split `A`
//! into isotypic pieces; signatures of trace forms then count real places and
//! separate `M_s(ℝ)` from `M_{s/2}(ℍ)`.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use super::{DivisionRing, RealAlgebra, RealRepError, Summand};
use crate::groups::FiniteGroup;
use crate::ratlinalg::{inertia, q, QMatrix, Q};

/// Basis products `e_a e_b = Σ_k c[a][b][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    pub name: String,
    dim: usize,
    data: Vec<Q>,
}

impl StructureConstants {
    pub fn zeros(name: impl Into<String>, dim: usize) -> Self {
        StructureConstants {
            name: name.into(),
            dim,
            data: vec![Q::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize, k: usize) -> &Q {
        &self.data[(a * self.dim + b) * self.dim + k]
    }

    pub fn set(&mut self, a: usize, b: usize, k: usize, v: Q) {
        let n = self.dim;
        self.data[(a * n + b) * n + k] = v;
    }

    /// Product of two coordinate vectors.
    pub fn product(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = self.dim;
        let mut out = vec![Q::zero(); n];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let coef = xa * yb;
                for (k, slot) in out.iter_mut().enumerate() {
                    let c = self.get(a, b, k);
                    if !c.is_zero() {
                        *slot += &coef * c;
                    }
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by `x`.
    pub fn left_mul(&self, x: &[Q]) -> QMatrix {
        let n = self.dim;
        let mut m = QMatrix::zeros(n, n);
        for b in 0..n {
            let mut e = vec![Q::zero(); n];
            e[b] = Q::one();
            for (k, v) in self.product(x, &e).into_iter().enumerate() {
                *m.get_mut(k, b) = v;
            }
        }
        m
    }

    /// `ℝ`, `ℂ` (basis `1, i`) or `ℍ` (basis `1, i, j, k`).
    pub fn division_ring(ring: DivisionRing) -> Self {
        match ring {
            DivisionRing::R => {
                let mut s = Self::zeros("R", 1);
                s.set(0, 0, 0, q(1));
                s
            }
            DivisionRing::C => {
                let mut s = Self::zeros("C", 2);
                s.set(0, 0, 0, q(1));
                s.set(0, 1, 1, q(1));
                s.set(1, 0, 1, q(1));
                s.set(1, 1, 0, q(-1));
                s
            }
            DivisionRing::H => {
                // (sign, index) of e_a e_b for the basis 1, i, j, k.
                const TABLE: [[(i64, usize); 4]; 4] = [
                    [(1, 0), (1, 1), (1, 2), (1, 3)],
                    [(1, 1), (-1, 0), (1, 3), (-1, 2)],
                    [(1, 2), (-1, 3), (-1, 0), (1, 1)],
                    [(1, 3), (1, 2), (-1, 1), (-1, 0)],
                ];
                let mut s = Self::zeros("H", 4);
                for (a, row) in TABLE.iter().enumerate() {
                    for (b, &(sign, k)) in row.iter().enumerate() {
                        s.set(a, b, k, q(sign));
                    }
                }
                s
            }
        }
    }

    /// `M_n(ℝ)` on matrix units `E_ij`, index `i*n + j`.
    pub fn matrix_units(n: usize) -> Self {
        let mut s = Self::zeros(format!("M{n}(R)"), n * n);
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    s.set(i * n + j, j * n + l, i * n + l, q(1));
                }
            }
        }
        s
    }

    /// `A ⊗_ℝ B` on the basis `e_a ⊗ f_b`, index `a * dim B + b`.
    pub fn tensor(&self, other: &StructureConstants) -> Self {
        let (na, nb) = (self.dim, other.dim);
        let mut s = Self::zeros(format!("{}⊗{}", self.name, other.name), na * nb);
        for a in 0..na {
            for c in 0..na {
                for k in 0..na {
                    let x = self.get(a, c, k);
                    if x.is_zero() {
                        continue;
                    }
                    for b in 0..nb {
                        for d in 0..nb {
                            for l in 0..nb {
                                let y = other.get(b, d, l);
                                if !y.is_zero() {
                                    s.set(a * nb + b, c * nb + d, k * nb + l, x * y);
                                }
                            }
                        }
                    }
                }
            }
        }
        s
    }

    /// `ℝG` on the group basis.
    pub fn group_algebra(g: &FiniteGroup) -> Self {
        let n = g.order();
        let mut s = Self::zeros(format!("ℝ[{}]", g.name()), n);
        for a in 0..n {
            for b in 0..n {
                s.set(a, b, g.mul(a, b), q(1));
            }
        }
        s
    }

    /// Parses `{"name"?, "dim", "constants": [[[c_ab0, ...], ...], ...]}` with
    /// entries given as integers or `"p/q"` strings.
    pub fn from_json(value: &Value) -> Result<Self, RealRepError> {
        let bad = |m: &str| RealRepError::Format(m.to_string());
        let dim = value.get("dim").and_then(Value::as_u64).ok_or_else(|| bad("missing `dim`"))? as usize;
        let name = value.get("name").and_then(Value::as_str).unwrap_or("A");
        let cube = value.get("constants").and_then(Value::as_array).ok_or_else(|| bad("missing `constants`"))?;
        let mut s = Self::zeros(name, dim);
        if cube.len() != dim {
            return Err(bad("`constants` must have `dim` rows"));
        }
        for (a, plane) in cube.iter().enumerate() {
            let plane = plane.as_array().filter(|p| p.len() == dim).ok_or_else(|| bad("ragged constants"))?;
            for (b, line) in plane.iter().enumerate() {
                let line = line.as_array().filter(|l| l.len() == dim).ok_or_else(|| bad("ragged constants"))?;
                for (k, v) in line.iter().enumerate() {
                    s.set(a, b, k, parse_rational(v)?);
                }
            }
        }
        Ok(s)
    }
}

fn parse_rational(v: &Value) -> Result<Q, RealRepError> {
    let bad = || RealRepError::Format(format!("not a rational number: {v}"));
    if let Some(i) = v.as_i64() {
        return Ok(q(i));
    }
    let s = v.as_str().ok_or_else(bad)?;
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(num, den))
}

fn unit_vector(n: usize, i: usize) -> Vec<Q> {
    let mut e = vec![Q::zero(); n];
    e[i] = Q::one();
    e
}

fn check_associative(s: &StructureConstants) -> Result<(), RealRepError> {
    let n = s.dim;
    let basis: Vec<Vec<Q>> = (0..n).map(|i| unit_vector(n, i)).collect();
    let products: Vec<Vec<Vec<Q>>> = (0..n)
        .map(|a| (0..n).map(|b| s.product(&basis[a], &basis[b])).collect())
        .collect();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = s.product(&products[a][b], &basis[c]);
                let rhs = s.product(&basis[a], &products[b][c]);
                if lhs != rhs {
                    return Err(RealRepError::NotAssociative(a, b, c));
                }
            }
        }
    }
    Ok(())
}

fn find_unit(s: &StructureConstants) -> Result<Vec<Q>, RealRepError> {
    let n = s.dim;
    // Σ_a u_a c[a][b][k] = δ_bk and Σ_a u_a c[b][a][k] = δ_bk.
    let mut m = QMatrix::zeros(2 * n * n, n);
    let mut rhs = vec![Q::zero(); 2 * n * n];
    for b in 0..n {
        for k in 0..n {
            let r = b * n + k;
            for a in 0..n {
                *m.get_mut(r, a) = s.get(a, b, k).clone();
                *m.get_mut(n * n + r, a) = s.get(b, a, k).clone();
            }
            if b == k {
                rhs[r] = Q::one();
                rhs[n * n + r] = Q::one();
            }
        }
    }
    m.solve(&rhs).ok_or(RealRepError::NotUnital)
}

/// Symmetric form `(x, y) ↦ f(x y)` on the given basis vectors.
fn trace_form(s: &StructureConstants, basis: &[Vec<Q>], functional: &[Q]) -> QMatrix {
    let m = basis.len();
    let mut g = QMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let p = s.product(&basis[i], &basis[j]);
            let v = p.iter().zip(functional).fold(Q::zero(), |acc, (x, f)| acc + x * f);
            *g.get_mut(i, j) = v.clone();
            *g.get_mut(j, i) = v;
        }
    }
    g
}

fn integer_sqrt(n: u64) -> Option<u64> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

fn to_count(x: &Q, what: &str) -> Result<u64, RealRepError> {
    if !x.is_integer() || x.is_negative() {
        return Err(RealRepError::Decomposition(format!("{what} is {x}, not a natural number")));
    }
    x.to_integer()
        .to_u64()
        .ok_or_else(|| RealRepError::Decomposition(format!("{what} out of range")))
}

/// Decomposes a finite-dimensional real algebra, given exactly, into matrix
/// blocks over ℝ, ℂ and ℍ.
pub fn decompose_by_structure_constants(s: &StructureConstants) -> Result<RealAlgebra, RealRepError> {
    let n = s.dim;
    if n == 0 {
        return Err(RealRepError::Format("zero-dimensional algebra".into()));
    }
    check_associative(s)?;
    let unit = find_unit(s)?;

    // Regular trace functional t(x) = Tr(L_x) on basis vectors.
    let basis: Vec<Vec<Q>> = (0..n).map(|i| unit_vector(n, i)).collect();
    let tr_a: Vec<Q> = basis.iter().map(|e| s.left_mul(e).trace()).collect();
    let rank = trace_form(s, &basis, &tr_a).rank();
    if rank < n {
        return Err(RealRepError::NotSemisimple { rank, dim: n });
    }

    // Center: Σ_a z_a (c[a][b][k] - c[b][a][k]) = 0.
    let mut comm = QMatrix::zeros(n * n, n);
    for b in 0..n {
        for k in 0..n {
            for a in 0..n {
                *comm.get_mut(b * n + k, a) = s.get(a, b, k) - s.get(b, a, k);
            }
        }
    }
    let z = comm.nullspace();
    let m = z.len();
    let mut z_mat = QMatrix::zeros(n, m);
    for (j, v) in z.iter().enumerate() {
        for i in 0..n {
            *z_mat.get_mut(i, j) = v[i].clone();
        }
    }
    let coords = |v: &[Q]| -> Result<Vec<Q>, RealRepError> {
        z_mat
            .solve(v)
            .ok_or_else(|| RealRepError::Decomposition("center is not closed under products".into()))
    };

    // Left multiplication on Z in the z-basis.
    let mut lz: Vec<QMatrix> = Vec::with_capacity(m);
    for zi in &z {
        let mut mat = QMatrix::zeros(m, m);
        for (j, zj) in z.iter().enumerate() {
            for (r, v) in coords(&s.product(zi, zj))?.into_iter().enumerate() {
                *mat.get_mut(r, j) = v;
            }
        }
        lz.push(mat);
    }
    let combine = |w: &[Q]| -> QMatrix {
        let mut out = QMatrix::zeros(m, m);
        for (wi, li) in w.iter().zip(&lz) {
            if wi.is_zero() {
                continue;
            }
            for (o, x) in out.data.iter_mut().zip(&li.data) {
                *o += wi * x;
            }
        }
        out
    };

    // Weight element: Tr_Z(L_{z_i} L_W) = Tr_A(z_i).
    let mut gram = QMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            *gram.get_mut(i, j) = lz[i].mul(&lz[j]).trace();
        }
    }
    let t_z: Vec<Q> = z
        .iter()
        .map(|v| v.iter().zip(&tr_a).fold(Q::zero(), |acc, (x, t)| acc + x * t))
        .collect();
    let w = gram.solve(&t_z).ok_or(RealRepError::NotSemisimple { rank: gram.rank(), dim: m })?;
    let lw = combine(&w);

    let mut weights: Vec<(u64, usize)> = Vec::new();
    for cand in 1..=n as u64 {
        let mut shifted = lw.clone();
        for i in 0..m {
            *shifted.get_mut(i, i) -= q(cand as i64);
        }
        let k = m - shifted.rank();
        if k > 0 {
            weights.push((cand, k));
        }
    }
    if weights.iter().map(|&(_, k)| k).sum::<usize>() != m {
        return Err(RealRepError::Decomposition("weight element has non-integral eigenvalues".into()));
    }

    let unit_z = coords(&unit)?;
    let mut summands = Vec::new();
    for &(wt, k) in &weights {
        // Spectral idempotent of W for eigenvalue wt, as a polynomial in W.
        let mut e_z = unit_z.clone();
        for &(other, _) in weights.iter().filter(|&&(o, _)| o != wt) {
            let mut factor = lw.clone();
            for i in 0..m {
                *factor.get_mut(i, i) -= q(other as i64);
            }
            let scale = Q::one() / q(wt as i64 - other as i64);
            e_z = factor.mul_vec(&e_z).into_iter().map(|x| x * &scale).collect();
        }
        let e = z_mat.mul_vec(&e_z);
        let block_dim = s.left_mul(&e).rank() as u64;

        let ez_basis: Vec<Vec<Q>> = z.iter().map(|zi| s.product(&e, zi)).collect();
        // Trace form of the center block E·Z, written on the spanning set E·z_i.
        let mut form = QMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let p = coords(&s.product(&ez_basis[i], &ez_basis[j]))?;
                let v = combine(&p).trace();
                *form.get_mut(i, j) = v.clone();
                *form.get_mut(j, i) = v;
            }
        }
        let (pos, neg, zero) = inertia(&form);
        if zero != m - k || pos < neg {
            return Err(RealRepError::Decomposition("center block has degenerate trace form".into()));
        }
        let real_places = (pos - neg) as u64;
        let complex_places = to_count(&((q(k as i64) - q(real_places as i64)) / q(2)), "number of complex places")?;
        if block_dim != (real_places + 2 * complex_places) * wt {
            return Err(RealRepError::Decomposition(format!(
                "isotypic block of weight {wt} has dimension {block_dim}"
            )));
        }
        if real_places > 0 {
            let side = integer_sqrt(wt)
                .ok_or_else(|| RealRepError::Decomposition(format!("real weight {wt} is not a square")))?;
            let a_basis: Vec<Vec<Q>> = basis.iter().map(|b| s.product(&e, b)).collect();
            let (pos, neg, _) = inertia(&trace_form(s, &a_basis, &tr_a));
            let sig = q(pos as i64 - neg as i64);
            let (real, quat) = if side % 2 == 1 {
                (real_places, 0)
            } else {
                let diff = sig.clone() / q(side as i64);
                let real = to_count(&((q(real_places as i64) + &diff) / q(2)), "number of real blocks")?;
                (real, real_places - real)
            };
            if sig != q(side as i64) * q(real as i64 - quat as i64) {
                return Err(RealRepError::Decomposition("trace signature inconsistent with block types".into()));
            }
            summands.push(Summand::new(DivisionRing::R, side, real));
            summands.push(Summand::new(DivisionRing::H, side / 2, quat));
        }
        if complex_places > 0 {
            let side = integer_sqrt(wt)
                .ok_or_else(|| RealRepError::Decomposition(format!("complex weight {wt} is not a square")))?;
            summands.push(Summand::new(DivisionRing::C, side, complex_places));
        }
    }
    let algebra = RealAlgebra::new(s.name.clone(), summands);
    let found = algebra.real_dimension()?;
    if found != n as u64 {
        return Err(RealRepError::DimensionMismatch { expected: n as u64, found });
    }
    Ok(algebra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::builtin;
    use DivisionRing::*;

    fn decompose(s: &StructureConstants) -> String {
        decompose_by_structure_constants(s).unwrap().to_string()
    }

    #[test]
    fn division_rings() {
        assert_eq!(decompose(&StructureConstants::division_ring(R)), "M1(R)");
        assert_eq!(decompose(&StructureConstants::division_ring(C)), "M1(C)");
        assert_eq!(decompose(&StructureConstants::division_ring(H)), "M1(H)");
    }

    #[test]
    fn matrix_algebras() {
        assert_eq!(decompose(&StructureConstants::matrix_units(2)), "M2(R)");
        let m2h = StructureConstants::matrix_units(2).tensor(&StructureConstants::division_ring(H));
        assert_eq!(decompose(&m2h), "M2(H)");
    }

    #[test]
    fn quaternion_squares() {
        let h = StructureConstants::division_ring(H);
        assert_eq!(decompose(&h.tensor(&h)), "M4(R)");
        let c = StructureConstants::division_ring(C);
        assert_eq!(decompose(&c.tensor(&h)), "M2(C)");
        assert_eq!(decompose(&c.tensor(&c)), "2·M1(C)");
    }

    #[test]
    fn group_algebras() {
        let g = |n: &str| StructureConstants::group_algebra(&builtin::by_name(n).unwrap());
        assert_eq!(decompose(&g("Z3")), "M1(R) ⊕ M1(C)");
        assert_eq!(decompose(&g("Z4")), "2·M1(R) ⊕ M1(C)");
        assert_eq!(decompose(&g("Q8")), "4·M1(R) ⊕ M1(H)");
        assert_eq!(decompose(&g("D8")), "4·M1(R) ⊕ M2(R)");
        assert_eq!(decompose(&g("S3")), "2·M1(R) ⊕ M2(R)");
    }

    #[test]
    fn failures() {
        let mut nil = StructureConstants::zeros("nil", 2);
        nil.set(0, 0, 0, q(1));
        nil.set(0, 1, 1, q(1));
        nil.set(1, 0, 1, q(1));
        assert!(matches!(
            decompose_by_structure_constants(&nil),
            Err(RealRepError::NotSemisimple { .. })
        ));
        let zero = StructureConstants::zeros("zero", 1);
        assert_eq!(decompose_by_structure_constants(&zero), Err(RealRepError::NotUnital));
        let mut bad = StructureConstants::division_ring(C);
        bad.set(1, 1, 1, q(1));
        bad.set(0, 1, 0, q(1));
        assert!(matches!(
            decompose_by_structure_constants(&bad),
            Err(RealRepError::NotAssociative(..))
        ));
    }

    #[test]
    fn json_input() {
        let v = serde_json::json!({"dim": 2, "constants": [[[1, 0], [0, 1]], [[0, 1], ["-1/1", 0]]]});
        let s = StructureConstants::from_json(&v).unwrap();
        assert_eq!(s, { let mut c = StructureConstants::division_ring(C); c.name = "A".into(); c });
        assert!(StructureConstants::from_json(&serde_json::json!({"dim": 2, "constants": []})).is_err());
    }
}
