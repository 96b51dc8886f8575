//! Finite simplicial complexes with a simplicial involution.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlinalg::{subquotient, FgAbGroup, IntMatrix};

/// Sign-choice listings stop at this many entries; the count stays exact.
pub const SIGN_LISTING_CAP: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("empty simplex in the maximal simplex list")]
    EmptySimplex,
    #[error("involution is not a permutation of order at most 2 on {0} vertices")]
    NotAnInvolution(usize),
    #[error("involution maps simplex {simplex:?} outside the complex")]
    NotSimplicial { simplex: Vec<usize> },
    #[error("involution fixes simplex {simplex:?}; subdivide barycentrically first")]
    NotFree { simplex: Vec<usize> },
    #[error("space has {0} connected components; a connected space is required")]
    NotConnected(usize),
    #[error("involution is neither trivial nor free; only those two regimes are supported")]
    MixedInvolutionUnsupported,
    #[error("unknown built-in space `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid complex: {0}")]
    Format(String),
}

/// Complex file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub vertices: usize,
    pub maximal_simplices: Vec<Vec<usize>>,
    pub involution: Vec<usize>,
}

/// A simplicial complex on vertices `0..n` with a simplicial involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialRealSpace {
    name: String,
    involution: Vec<usize>,
    /// Sorted simplices of each dimension, each as a sorted vertex list.
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl SimplicialRealSpace {
    /// Builds the face closure of `maximal` on `vertices` vertices; every
    /// vertex is a 0-simplex even if it lies in no listed simplex.
    pub fn new(
        name: impl Into<String>,
        vertices: usize,
        maximal: &[Vec<usize>],
        involution: Vec<usize>,
    ) -> Result<Self, SpaceError> {
        if involution.len() != vertices
            || involution.iter().any(|&v| v >= vertices)
            || (0..vertices).any(|v| involution[involution[v]] != v)
        {
            return Err(SpaceError::NotAnInvolution(vertices));
        }
        let mut by_dim: Vec<std::collections::BTreeSet<Vec<usize>>> = vec![Default::default()];
        for v in 0..vertices {
            by_dim[0].insert(vec![v]);
        }
        for s in maximal {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(SpaceError::EmptySimplex);
            }
            if let Some(&vertex) = s.iter().find(|&&v| v >= vertices) {
                return Err(SpaceError::VertexOutOfRange { vertex, count: vertices });
            }
            if s.len() > 20 {
                return Err(SpaceError::Format(format!("simplex of dimension {} too large", s.len() - 1)));
            }
            for mask in 1u32..(1 << s.len()) {
                let face: Vec<usize> = (0..s.len()).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                let d = face.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize_with(d + 1, Default::default);
                }
                by_dim[d].insert(face);
            }
        }
        let simplices: Vec<Vec<Vec<usize>>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let space = SimplicialRealSpace {
            name: name.into(),
            involution,
            simplices,
            index,
        };
        for level in &space.simplices {
            for s in level {
                if space.image_index(s).is_none() {
                    return Err(SpaceError::NotSimplicial { simplex: s.clone() });
                }
            }
        }
        Ok(space)
    }

    pub fn from_file(name: impl Into<String>, file: &ComplexFile) -> Result<Self, SpaceError> {
        Self::new(name, file.vertices, &file.maximal_simplices, file.involution.clone())
    }

    pub fn from_json(name: impl Into<String>, value: &serde_json::Value) -> Result<Self, SpaceError> {
        let file: ComplexFile = serde_json::from_value(value.clone()).map_err(|e| SpaceError::Format(e.to_string()))?;
        Self::from_file(name, &file)
    }

    pub fn to_file(&self) -> ComplexFile {
        let mut maximal = Vec::new();
        for (d, level) in self.simplices.iter().enumerate() {
            for s in level {
                let covered = self.simplices.get(d + 1).is_some_and(|up| {
                    up.iter().any(|t| s.iter().all(|v| t.binary_search(v).is_ok()))
                });
                if !covered {
                    maximal.push(s.clone());
                }
            }
        }
        ComplexFile {
            vertices: self.num_vertices(),
            maximal_simplices: maximal,
            involution: self.involution.clone(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_vertices(&self) -> usize {
        self.involution.len()
    }

    pub fn dimension(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn involution(&self) -> &[usize] {
        &self.involution
    }

    pub fn simplices(&self, dim: usize) -> &[Vec<usize>] {
        self.simplices.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.simplices(dim).len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    pub fn is_trivial_involution(&self) -> bool {
        self.involution.iter().enumerate().all(|(v, &w)| v == w)
    }

    /// True when no simplex is mapped to itself.
    pub fn is_free(&self) -> bool {
        self.first_invariant_simplex().is_none()
    }

    fn first_invariant_simplex(&self) -> Option<&Vec<usize>> {
        self.simplices.iter().flatten().find(|s| self.image(s) == **s)
    }

    fn image(&self, s: &[usize]) -> Vec<usize> {
        let mut t: Vec<usize> = s.iter().map(|&v| self.involution[v]).collect();
        t.sort_unstable();
        t
    }

    fn image_index(&self, s: &[usize]) -> Option<usize> {
        self.index[s.len() - 1].get(&self.image(s)).copied()
    }

    /// Sign of the vertex permutation carrying the ordered simplex `ι(s)` to
    /// its sorted form.
    fn orientation_sign(&self, s: &[usize]) -> i64 {
        let t: Vec<usize> = s.iter().map(|&v| self.involution[v]).collect();
        let inversions = (0..t.len())
            .flat_map(|i| (i + 1..t.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| t[i] > t[j])
            .count();
        if inversions % 2 == 0 { 1 } else { -1 }
    }

    /// Coboundary `δ: C^d → C^{d+1}` as a `#(d+1) × #d` matrix.
    pub fn coboundary(&self, d: usize) -> IntMatrix {
        let rows = self.count(d + 1);
        let cols = self.count(d);
        let mut m = IntMatrix::zeros(rows, cols);
        for (r, t) in self.simplices(d + 1).iter().enumerate() {
            for i in 0..t.len() {
                let mut face = t.clone();
                face.remove(i);
                let c = self.index[d][&face];
                m.set(r, c, if i % 2 == 0 { 1.into() } else { (-1).into() });
            }
        }
        m
    }

    /// Number of connected components of the whole complex.
    pub fn num_components(&self) -> usize {
        let mut uf = UnionFind::new(self.num_vertices());
        for e in self.simplices(1) {
            uf.union(e[0], e[1]);
        }
        uf.count()
    }

    /// Components of the fixed-point set.
    ///
    /// The fixed set meets a simplex exactly when the simplex is invariant (it
    /// contains the barycenter), and two such pieces meet along a common
    /// invariant face, so components are classes of invariant simplices under
    /// the face relation.
    pub fn fixed_components(&self) -> Vec<FixedComponent> {
        let invariant: Vec<(usize, &Vec<usize>)> = self
            .simplices
            .iter()
            .enumerate()
            .flat_map(|(d, l)| l.iter().map(move |s| (d, s)))
            .filter(|(_, s)| self.image(s) == **s)
            .collect();
        let id: HashMap<&Vec<usize>, usize> = invariant.iter().enumerate().map(|(i, (_, s))| (*s, i)).collect();
        let mut uf = UnionFind::new(invariant.len());
        for (i, (_, s)) in invariant.iter().enumerate() {
            for mask in 1u32..(1 << s.len()) - 1 {
                let face: Vec<usize> = (0..s.len()).filter(|b| mask >> b & 1 == 1).map(|b| s[b]).collect();
                if let Some(&j) = id.get(&face) {
                    uf.union(i, j);
                }
            }
        }
        let mut groups: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for (i, (_, s)) in invariant.iter().enumerate() {
            let root = uf.find(i);
            let k = *slot.entry(root).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[k].push((*s).clone());
        }
        let mut out: Vec<FixedComponent> = groups
            .into_iter()
            .map(|mut simplices| {
                simplices.sort();
                FixedComponent { simplices }
            })
            .collect();
        out.sort();
        out
    }

    /// `H^n(X; ℤ)`.
    pub fn cohomology(&self, n: usize) -> FgAbGroup {
        let before = if n == 0 {
            IntMatrix::zeros(self.count(0), 0)
        } else {
            self.coboundary(n - 1)
        };
        subquotient(&self.coboundary(n), &before).expect("δδ = 0")
    }

    /// `H^n(X; ℤ/2)`, as a group `(ℤ/2)^b`.
    pub fn z2_cohomology(&self, n: usize) -> FgAbGroup {
        FgAbGroup::elementary(2, self.z2_betti(n))
    }

    pub fn z2_betti(&self, n: usize) -> usize {
        let c = self.count(n);
        if c == 0 {
            return 0;
        }
        let after = f2_rank(&self.coboundary(n));
        let before = if n == 0 { 0 } else { f2_rank(&self.coboundary(n - 1)) };
        c - after - before
    }

    /// Cochains `c` with `ι*c = -c`, one basis vector per orbit pair
    /// `{σ, ισ}`: value `1` on the smaller simplex `σ` and `-s(σ)` on `ισ`.
    fn anti_invariant_basis(&self, d: usize) -> Vec<(usize, usize, i64)> {
        self.simplices(d)
            .iter()
            .enumerate()
            .filter_map(|(i, s)| {
                let j = self.image_index(s).expect("checked at construction");
                (i < j).then(|| (i, j, -self.orientation_sign(s)))
            })
            .collect()
    }

    fn anti_invariant_coboundary(&self, d: usize) -> IntMatrix {
        let src = self.anti_invariant_basis(d);
        let dst = self.anti_invariant_basis(d + 1);
        let delta = self.coboundary(d);
        let mut m = IntMatrix::zeros(dst.len(), src.len());
        for (c, &(i, j, s)) in src.iter().enumerate() {
            for (r, &(rep, _, _)) in dst.iter().enumerate() {
                let v = delta.get(rep, i) + delta.get(rep, j) * s;
                m.set(r, c, v);
            }
        }
        m
    }

    /// `H^n(X/ι; ℤ_w)` with the orientation local system of the double
    /// cover, from the anti-invariant cochains on `X`.
    pub fn twisted_cohomology_quotient(&self, n: usize) -> Result<FgAbGroup, SpaceError> {
        if let Some(s) = self.first_invariant_simplex() {
            return Err(SpaceError::NotFree { simplex: s.clone() });
        }
        let components = self.num_components();
        if components != 1 {
            return Err(SpaceError::NotConnected(components));
        }
        let before = if n == 0 {
            IntMatrix::zeros(self.anti_invariant_basis(0).len(), 0)
        } else {
            self.anti_invariant_coboundary(n - 1)
        };
        Ok(subquotient(&self.anti_invariant_coboundary(n), &before).expect("δδ = 0"))
    }

    pub fn barycentric_subdivision(&self) -> SimplicialRealSpace {
        let all: Vec<&Vec<usize>> = self.simplices.iter().flatten().collect();
        let id: HashMap<&Vec<usize>, usize> = all.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let involution: Vec<usize> = all.iter().map(|s| id[&self.image(s)]).collect();
        let mut maximal = Vec::new();
        for s in self.to_file().maximal_simplices {
            for order in permutations(&s) {
                let chain: Vec<usize> = (1..=order.len())
                    .map(|k| {
                        let mut prefix = order[..k].to_vec();
                        prefix.sort_unstable();
                        id[&prefix]
                    })
                    .collect();
                maximal.push(chain);
            }
        }
        SimplicialRealSpace::new(format!("sd({})", self.name), all.len(), &maximal, involution)
            .expect("subdivision of a valid complex is valid")
    }
}

impl fmt::Display for SimplicialRealSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: Vec<String> = self.simplices.iter().map(|l| l.len().to_string()).collect();
        write!(f, "{} (f-vector {})", self.name, counts.join(", "))
    }
}

/// Invariant simplices forming one component of the fixed-point set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FixedComponent {
    pub simplices: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// One sign per fixed component, in the order of `fixed_components`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignChoice(pub Vec<Sign>);

impl fmt::Display for SignChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignChoices {
    pub components: usize,
    #[serde(serialize_with = "serialize_biguint", deserialize_with = "deserialize_biguint")]
    pub count: BigUint,
    pub listing: Vec<SignChoice>,
    pub truncated: bool,
}

fn serialize_biguint<S: serde::Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match u64::try_from(n) {
        Ok(v) => s.serialize_u64(v),
        Err(_) => s.serialize_str(&n.to_string()),
    }
}

fn deserialize_biguint<'de, D: serde::Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
    match serde_json::Value::deserialize(d)? {
        serde_json::Value::Number(n) => n
            .as_u64()
            .map(BigUint::from)
            .ok_or_else(|| serde::de::Error::custom("count must be a nonnegative integer")),
        serde_json::Value::String(text) => text.parse().map_err(serde::de::Error::custom),
        _ => Err(serde::de::Error::custom("count must be a number or a decimal string")),
    }
}

impl fmt::Display for SignChoices {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fixed components: {}", self.components)?;
        writeln!(f, "sign choices: {}", self.count)?;
        for c in &self.listing {
            writeln!(f, "  {c}")?;
        }
        if self.truncated {
            writeln!(f, "  ... (listing truncated)")?;
        }
        Ok(())
    }
}

/// All `2^c` sign choices on the `c` fixed components; the listing holds
/// the first `SIGN_LISTING_CAP` in binary order, all-plus first.
pub fn enumerate_sign_choices(x: &SimplicialRealSpace) -> SignChoices {
    let c = x.fixed_components().len();
    let count = BigUint::one() << c;
    let listed = if c < 64 { (1u64 << c).min(SIGN_LISTING_CAP as u64) } else { SIGN_LISTING_CAP as u64 };
    let listing = (0..listed)
        .map(|k| {
            SignChoice(
                (0..c)
                    .map(|i| if i < 64 && k >> i & 1 == 1 { Sign::Minus } else { Sign::Plus })
                    .collect(),
            )
        })
        .collect::<Vec<_>>();
    let truncated = BigUint::from(listing.len()) < count;
    SignChoices {
        components: c,
        count,
        listing,
        truncated,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    Trivial,
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrauerData {
    pub space: String,
    pub regime: Regime,
    pub sign_group: FgAbGroup,
    pub dd_group: FgAbGroup,
}

impl BrauerData {
    pub fn total(&self) -> FgAbGroup {
        self.sign_group.direct_sum(&self.dd_group)
    }
}

impl fmt::Display for BrauerData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let regime = match self.regime {
            Regime::Trivial => "trivial involution",
            Regime::Free => "free involution",
        };
        write!(
            f,
            "{} ({regime}): signs {} ⊕ Dixmier-Douady {} = {}",
            self.space,
            self.sign_group,
            self.dd_group,
            self.total()
        )
    }
}

/// Brauer group data in the trivial-involution and free-involution regimes.
pub fn brauer_group(x: &SimplicialRealSpace) -> Result<BrauerData, SpaceError> {
    if x.is_trivial_involution() {
        return Ok(BrauerData {
            space: x.name.clone(),
            regime: Regime::Trivial,
            sign_group: FgAbGroup::elementary(2, x.fixed_components().len()),
            dd_group: x.z2_cohomology(2),
        });
    }
    if x.is_free() {
        return Ok(BrauerData {
            space: x.name.clone(),
            regime: Regime::Free,
            sign_group: FgAbGroup::trivial(),
            dd_group: x.twisted_cohomology_quotient(3)?,
        });
    }
    Err(SpaceError::MixedInvolutionUnsupported)
}

fn f2_rank(m: &IntMatrix) -> usize {
    let words = m.cols().div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..m.rows())
        .map(|i| {
            let mut bits = vec![0u64; words];
            for (j, x) in m.row(i).iter().enumerate() {
                if x.bit(0) {
                    bits[j / 64] |= 1 << (j % 64);
                }
            }
            bits
        })
        .collect();
    let mut rank = 0;
    for col in 0..m.cols() {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & b != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}

/// Small named complexes.
pub mod builtin {
    use super::*;

    pub const NAMES: &[&str] = &[
        "circle",
        "circle-antipodal",
        "sphere2-antipodal",
        "sphere3-antipodal",
        "torus",
        "point",
        "points8",
    ];

    fn identity(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    /// Boundary of a triangle, trivial involution.
    pub fn circle() -> SimplicialRealSpace {
        SimplicialRealSpace::new("circle", 3, &[vec![0, 1], vec![1, 2], vec![0, 2]], identity(3)).expect("valid")
    }

    /// Hexagon with the antipodal map `i ↦ i + 3`.
    pub fn circle_antipodal() -> SimplicialRealSpace {
        let edges: Vec<Vec<usize>> = (0..6).map(|i| vec![i, (i + 1) % 6]).collect();
        SimplicialRealSpace::new("circle-antipodal", 6, &edges, (0..6).map(|i| (i + 3) % 6).collect()).expect("valid")
    }

    /// Boundary of the cross-polytope in `ℝ^d` with `x ↦ -x`; vertex `2i` is
    /// `+e_i`, vertex `2i+1` is `-e_i`.
    fn cross_polytope(name: &str, d: usize) -> SimplicialRealSpace {
        let facets: Vec<Vec<usize>> = (0..1usize << d)
            .map(|signs| (0..d).map(|i| 2 * i + (signs >> i & 1)).collect())
            .collect();
        let involution = (0..2 * d).map(|v| v ^ 1).collect();
        SimplicialRealSpace::new(name, 2 * d, &facets, involution).expect("valid")
    }

    /// Octahedral 2-sphere, antipodal.
    pub fn sphere2_antipodal() -> SimplicialRealSpace {
        cross_polytope("sphere2-antipodal", 3)
    }

    /// Boundary of the 16-cell, antipodal.
    pub fn sphere3_antipodal() -> SimplicialRealSpace {
        cross_polytope("sphere3-antipodal", 4)
    }

    /// 3×3 grid torus, trivial involution.
    pub fn torus() -> SimplicialRealSpace {
        let v = |i: usize, j: usize| 3 * (i % 3) + (j % 3);
        let mut triangles = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                triangles.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
                triangles.push(vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)]);
            }
        }
        SimplicialRealSpace::new("torus", 9, &triangles, identity(9)).expect("valid")
    }

    pub fn point() -> SimplicialRealSpace {
        SimplicialRealSpace::new("point", 1, &[vec![0]], identity(1)).expect("valid")
    }

    /// `n` isolated points, trivial involution.
    pub fn points(n: usize) -> SimplicialRealSpace {
        let singletons: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        SimplicialRealSpace::new(format!("points{n}"), n, &singletons, identity(n)).expect("valid")
    }

    pub fn by_name(name: &str) -> Result<SimplicialRealSpace, SpaceError> {
        match name {
            "circle" => Ok(circle()),
            "circle-antipodal" => Ok(circle_antipodal()),
            "sphere2-antipodal" => Ok(sphere2_antipodal()),
            "sphere3-antipodal" => Ok(sphere3_antipodal()),
            "torus" => Ok(torus()),
            "point" => Ok(point()),
            "points8" => Ok(points(8)),
            other => Err(SpaceError::UnknownBuiltin(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::builtin::*;
    use super::*;

    #[test]
    fn validation() {
        assert_eq!(
            SimplicialRealSpace::new("x", 2, &[vec![0, 1]], vec![1, 1]),
            Err(SpaceError::NotAnInvolution(2))
        );
        assert!(matches!(
            SimplicialRealSpace::new("x", 3, &[vec![0, 1]], vec![0, 2, 1]),
            Err(SpaceError::NotSimplicial { .. })
        ));
        assert!(matches!(
            SimplicialRealSpace::new("x", 2, &[vec![0, 2]], vec![0, 1]),
            Err(SpaceError::VertexOutOfRange { vertex: 2, .. })
        ));
    }

    #[test]
    fn fixed_sets() {
        assert_eq!(circle().fixed_components().len(), 1);
        assert_eq!(circle_antipodal().fixed_components().len(), 0);
        assert_eq!(points(2).fixed_components().len(), 2);
        // Reflection of a square across a diagonal: fixed set is the
        // diagonal through vertices 0 and 2, meeting edges only at barycenters.
        let sq = SimplicialRealSpace::new("sq", 4, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]], vec![0, 3, 2, 1]).unwrap();
        assert_eq!(sq.fixed_components().len(), 2);
        // Swapping the two vertices of an edge fixes its midpoint only.
        let e = SimplicialRealSpace::new("e", 2, &[vec![0, 1]], vec![1, 0]).unwrap();
        assert_eq!(e.fixed_components().len(), 1);
        assert!(!e.is_free());
    }

    #[test]
    fn mod_two_cohomology() {
        assert_eq!(circle().z2_cohomology(1), FgAbGroup::cyclic(2));
        assert_eq!(sphere2_antipodal().z2_cohomology(2), FgAbGroup::cyclic(2));
        assert_eq!(sphere2_antipodal().z2_cohomology(1), FgAbGroup::trivial());
        assert!(point().z2_cohomology(1).is_trivial());
        assert_eq!(torus().z2_betti(1), 2);
        assert_eq!(torus().z2_betti(2), 1);
    }

    #[test]
    fn integer_cohomology() {
        assert_eq!(torus().cohomology(1), FgAbGroup::free(2));
        assert_eq!(torus().cohomology(2), FgAbGroup::free(1));
        assert_eq!(sphere3_antipodal().cohomology(3), FgAbGroup::free(1));
        assert_eq!(sphere3_antipodal().cohomology(2), FgAbGroup::trivial());
    }

    #[test]
    fn twisted_cohomology() {
        assert_eq!(circle_antipodal().twisted_cohomology_quotient(1).unwrap(), FgAbGroup::cyclic(2));
        assert_eq!(circle_antipodal().twisted_cohomology_quotient(0).unwrap(), FgAbGroup::trivial());
        assert_eq!(sphere2_antipodal().twisted_cohomology_quotient(2).unwrap(), FgAbGroup::free(1));
        assert_eq!(sphere2_antipodal().twisted_cohomology_quotient(1).unwrap(), FgAbGroup::cyclic(2));
        assert_eq!(sphere3_antipodal().twisted_cohomology_quotient(3).unwrap(), FgAbGroup::cyclic(2));
        assert!(matches!(circle().twisted_cohomology_quotient(1), Err(SpaceError::NotFree { .. })));
    }

    #[test]
    fn brauer() {
        let t = brauer_group(&torus()).unwrap();
        assert_eq!(t.regime, Regime::Trivial);
        assert_eq!(t.sign_group, FgAbGroup::cyclic(2));
        assert_eq!(t.dd_group, FgAbGroup::cyclic(2));
        let s2 = brauer_group(&sphere2_antipodal()).unwrap();
        assert_eq!((s2.sign_group.clone(), s2.dd_group.clone()), (FgAbGroup::trivial(), FgAbGroup::trivial()));
        let s3 = brauer_group(&sphere3_antipodal()).unwrap();
        assert_eq!(s3.regime, Regime::Free);
        assert_eq!(s3.dd_group, FgAbGroup::cyclic(2));
        let e = SimplicialRealSpace::new("e", 3, &[vec![0, 1], vec![1, 2]], vec![2, 1, 0]).unwrap();
        assert_eq!(brauer_group(&e), Err(SpaceError::MixedInvolutionUnsupported));
    }

    #[test]
    fn sign_choices() {
        let c = enumerate_sign_choices(&points(8));
        assert_eq!(c.count, BigUint::from(256u32));
        assert_eq!(c.listing.len(), 256);
        assert!(!c.truncated);
        assert_eq!(c.listing[0].to_string(), "(+,+,+,+,+,+,+,+)");
        let free = enumerate_sign_choices(&circle_antipodal());
        assert_eq!(free.count, BigUint::one());
        assert_eq!(free.listing, vec![SignChoice(vec![])]);
        assert_eq!(enumerate_sign_choices(&circle()).count, BigUint::from(2u32));
        let many = enumerate_sign_choices(&points(10));
        assert_eq!(many.count, BigUint::from(1024u32));
        assert_eq!(many.listing.len(), SIGN_LISTING_CAP);
        assert!(many.truncated);
    }

    #[test]
    fn subdivision() {
        let sd = circle_antipodal().barycentric_subdivision();
        assert_eq!(sd.count(0), 12);
        assert!(sd.is_free());
        assert_eq!(sd.twisted_cohomology_quotient(1).unwrap(), FgAbGroup::cyclic(2));
        let t = torus();
        assert_eq!(brauer_group(&t.barycentric_subdivision()).unwrap().total(), brauer_group(&t).unwrap().total());
        assert_eq!(t.barycentric_subdivision().euler_characteristic(), 0);
        // Subdividing the swapped edge makes its midpoint a fixed vertex.
        let e = SimplicialRealSpace::new("e", 2, &[vec![0, 1]], vec![1, 0]).unwrap();
        let sd = e.barycentric_subdivision();
        assert_eq!(sd.fixed_components().len(), 1);
        assert_eq!(sd.fixed_components()[0].simplices.len(), 1);
    }

    #[test]
    fn file_round_trip() {
        let s = sphere2_antipodal();
        let f = s.to_file();
        assert_eq!(f.maximal_simplices.len(), 8);
        let back = SimplicialRealSpace::from_file("sphere2-antipodal", &f).unwrap();
        assert_eq!(back, s);
    }
}
