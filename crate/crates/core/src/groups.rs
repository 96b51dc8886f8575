//! Finite groups as full multiplication tables, conjugacy classes, class
//! multiplication coefficients and the squaring class map.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlinalg::IntMatrix;

pub const DEFAULT_MAX_ORDER: usize = 5000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("generator {index} is not a permutation of 0..{degree}")]
    NotAPermutation { index: usize, degree: usize },
    #[error("generators act on different numbers of points")]
    MixedDegrees,
    #[error("group closure exceeds the bound of {bound} elements")]
    TooLarge { bound: usize },
    #[error("multiplication table is not a group law: {0}")]
    NotAGroup(String),
    #[error("unknown builtin group `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid group file: {0}")]
    Format(String),
}

/// A finite group given by its multiplication table on element indices `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a multiplication table: closure, identity, inverses, and
    /// associativity (Light's test against a generating set, which is
    /// equivalent to checking every triple).
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::NotAGroup("empty table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotAGroup(format!("row {i} has {} entries", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(GroupError::NotAGroup(format!("entry {bad} out of range")));
            }
            flat.extend_from_slice(row);
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| flat[e * n + x] == x && flat[x * n + e] == x))
            .ok_or_else(|| GroupError::NotAGroup("no identity element".into()))?;
        let mut inverses = vec![usize::MAX; n];
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| flat[x * n + y] == identity && flat[y * n + x] == identity)
                .ok_or_else(|| GroupError::NotAGroup(format!("element {x} has no inverse")))?;
            inverses[x] = inv;
        }
        let group = FiniteGroup {
            name: name.into(),
            order: n,
            table: flat,
            identity,
            inverses,
        };
        let gens = group.greedy_generators();
        group.check_associative(&gens)?;
        Ok(group)
    }

    /// Closure of a list of permutations of `0..m`, elements numbered in BFS
    /// order from the identity. Each BFS layer is sorted lexicographically.
    /// The product is composition `(a*b)(x) = a(b(x))`.
    pub fn from_permutations(
        name: impl Into<String>,
        generators: &[Vec<usize>],
        max_order: usize,
    ) -> Result<Self, GroupError> {
        let degree = generators.first().map_or(0, Vec::len);
        for (index, g) in generators.iter().enumerate() {
            if g.len() != degree {
                return Err(GroupError::MixedDegrees);
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || std::mem::replace(&mut seen[x], true) {
                    return Err(GroupError::NotAPermutation { index, degree });
                }
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut layer = vec![0usize];
        while !layer.is_empty() {
            let mut next = BTreeSet::new();
            for &e in &layer {
                for g in generators {
                    let p = compose(g, &elements[e]);
                    if !index.contains_key(&p) {
                        next.insert(p);
                    }
                }
            }
            layer.clear();
            for p in next {
                if elements.len() >= max_order {
                    return Err(GroupError::TooLarge { bound: max_order });
                }
                index.insert(p.clone(), elements.len());
                layer.push(elements.len());
                elements.push(p);
            }
        }
        let n = elements.len();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&compose(&elements[a], &elements[b])];
            }
        }
        let mut inverses = vec![0; n];
        for a in 0..n {
            let mut inv = vec![0; degree];
            for (x, &y) in elements[a].iter().enumerate() {
                inv[y] = x;
            }
            inverses[a] = index[&inv];
        }
        let group = FiniteGroup {
            name: name.into(),
            order: n,
            table,
            identity: 0,
            inverses,
        };
        // Composition of permutations is associative, but the table is still
        // checked so that a bad index map cannot slip through.
        let gens: Vec<usize> = generators.iter().map(|g| index[g]).collect();
        group.check_associative(&gens)?;
        Ok(group)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    /// The same group with elements renamed by `perm` (old index `i` becomes
    /// `perm[i]`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, GroupError> {
        let n = self.order;
        if perm.len() != n {
            return Err(GroupError::NotAGroup("relabeling has wrong length".into()));
        }
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a]][perm[b]] = perm[self.mul(a, b)];
            }
        }
        FiniteGroup::from_table(self.name.clone(), table)
    }

    fn subgroup_closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    stack.push(y);
                }
            }
        }
        inside
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut inside = self.subgroup_closure(&gens);
        for x in 0..self.order {
            if !inside[x] {
                gens.push(x);
                inside = self.subgroup_closure(&gens);
            }
        }
        gens
    }

    fn check_associative(&self, gens: &[usize]) -> Result<(), GroupError> {
        for &g in gens {
            for x in 0..self.order {
                let xg = self.mul(x, g);
                for y in 0..self.order {
                    if self.mul(xg, y) != self.mul(x, self.mul(g, y)) {
                        return Err(GroupError::NotAGroup(format!(
                            "associativity fails for ({x}, {g}, {y})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

/// Conjugacy classes with the squaring and inversion maps on classes.
///
/// Classes are ordered by their smallest element index, so the identity class
/// comes first whenever the identity has index 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassData {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub class_sizes: Vec<usize>,
    pub representatives: Vec<usize>,
    pub squaring_map: Vec<usize>,
    pub inverse_map: Vec<usize>,
}

impl ClassData {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }
}

pub fn conjugacy_data(g: &FiniteGroup) -> ClassData {
    let n = g.order();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let order = std::iter::once(g.identity()).chain((0..n).filter(|&x| x != g.identity()));
    for x in order {
        if class_of[x] != usize::MAX {
            continue;
        }
        let c = classes.len();
        let mut members = BTreeSet::new();
        for h in 0..n {
            members.insert(g.mul(g.mul(h, x), g.inverse(h)));
        }
        for &m in &members {
            class_of[m] = c;
        }
        classes.push(members.into_iter().collect());
    }
    // Identity class first, then by smallest member.
    let representatives: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let class_sizes = classes.iter().map(Vec::len).collect();
    let squaring_map: Vec<usize> = representatives.iter().map(|&r| class_of[g.mul(r, r)]).collect();
    let inverse_map: Vec<usize> = representatives.iter().map(|&r| class_of[g.inverse(r)]).collect();
    for x in 0..n {
        assert_eq!(
            class_of[g.mul(x, x)],
            squaring_map[class_of[x]],
            "squaring is not a class function"
        );
        assert_eq!(class_of[g.inverse(x)], inverse_map[class_of[x]], "inversion is not a class function");
    }
    ClassData {
        classes,
        class_of,
        class_sizes,
        representatives,
        squaring_map,
        inverse_map,
    }
}

/// Class multiplication coefficients: entry `(j, k)` counts pairs
/// `(x, y) ∈ C_i × C_j` with `x y = z_k` for the fixed representative `z_k`.
///
/// The central characters `ω(C_k) = |C_k| χ(z_k) / χ(1)` form a right
/// eigenvector of this matrix with eigenvalue `ω(C_i)`.
pub fn class_matrix(g: &FiniteGroup, d: &ClassData, i: usize) -> IntMatrix {
    let r = d.num_classes();
    let mut counts = vec![0i64; r * r];
    for k in 0..r {
        let z = d.representatives[k];
        for &x in &d.classes[i] {
            let y = g.mul(g.inverse(x), z);
            counts[d.class_of[y] * r + k] += 1;
        }
    }
    IntMatrix::from_i64(r, r, &counts).expect("square class matrix")
}

/// Group input file: either generating permutations or a full table.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Permutations {
        permutations: Vec<Vec<usize>>,
        #[serde(default)]
        name: Option<String>,
    },
    Table {
        table: Vec<Vec<usize>>,
        #[serde(default)]
        name: Option<String>,
    },
}

impl GroupSpec {
    pub fn build(&self, max_order: usize) -> Result<FiniteGroup, GroupError> {
        match self {
            GroupSpec::Permutations { permutations, name } => FiniteGroup::from_permutations(
                name.clone().unwrap_or_else(|| "G".into()),
                permutations,
                max_order,
            ),
            GroupSpec::Table { table, name } => {
                if table.len() > max_order {
                    return Err(GroupError::TooLarge { bound: max_order });
                }
                FiniteGroup::from_table(name.clone().unwrap_or_else(|| "G".into()), table.clone())
            }
        }
    }
}

pub fn parse_group_json(text: &str, max_order: usize) -> Result<FiniteGroup, GroupError> {
    let spec: GroupSpec = serde_json::from_str(text).map_err(|e| GroupError::Format(e.to_string()))?;
    spec.build(max_order)
}

pub mod builtin {
    //! Small groups used throughout the test suite and the command line.

    use super::*;

    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(format!("Z{n}"), table).expect("cyclic group table")
    }

    /// Dihedral group of order `2m`, as symmetries of an `m`-gon.
    pub fn dihedral(order: usize) -> FiniteGroup {
        assert!(order >= 4 && order.is_multiple_of(2));
        let m = order / 2;
        let rotation: Vec<usize> = (0..m).map(|x| (x + 1) % m).collect();
        let reflection: Vec<usize> = (0..m).map(|x| (m - x) % m).collect();
        FiniteGroup::from_permutations(format!("D{order}"), &[rotation, reflection], DEFAULT_MAX_ORDER)
            .expect("dihedral group")
    }

    /// Quaternion units in the order 1, -1, i, -i, j, -j, k, -k.
    pub fn quaternion() -> FiniteGroup {
        // unit index u in 0..4 for 1,i,j,k; sign bit s. Element = 2*u + s.
        fn unit_mul(a: usize, b: usize) -> (usize, bool) {
            // returns (unit, negative)
            match (a, b) {
                (0, x) | (x, 0) => (x, false),
                (x, y) if x == y => (0, true),
                (1, 2) => (3, false),
                (2, 3) => (1, false),
                (3, 1) => (2, false),
                (2, 1) => (3, true),
                (3, 2) => (1, true),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        }
        let table = (0..8)
            .map(|a: usize| {
                (0..8)
                    .map(|b: usize| {
                        let (u, neg) = unit_mul(a / 2, b / 2);
                        let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
                        2 * u + usize::from(sign)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table("Q8", table).expect("quaternion group table")
    }

    /// Q8 as left-regular permutations on its 8 elements.
    pub fn quaternion_permutations() -> Vec<Vec<usize>> {
        let q = quaternion();
        [2usize, 4]
            .iter()
            .map(|&g| (0..8).map(|x| q.mul(g, x)).collect())
            .collect()
    }

    pub fn symmetric(n: usize) -> FiniteGroup {
        assert!((1..=6).contains(&n), "symmetric groups are provided for n <= 6");
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<usize> = (0..n).collect();
            t.swap(0, 1);
            gens.push(t);
        }
        if n >= 3 {
            gens.push((0..n).map(|x| (x + 1) % n).collect());
        }
        FiniteGroup::from_permutations(format!("S{n}"), &gens, DEFAULT_MAX_ORDER).expect("symmetric group")
    }

    /// Looks up `Q8`, `D8` (any even order `D2m`), `Zn` / `Z/n` / `Cn`, `S1`..`S6`.
    pub fn by_name(name: &str) -> Result<FiniteGroup, GroupError> {
        let unknown = || GroupError::UnknownBuiltin(name.to_string());
        let upper = name.trim().to_ascii_uppercase();
        if upper == "Q8" {
            return Ok(quaternion());
        }
        let parse = |s: &str| s.parse::<usize>().map_err(|_| unknown());
        if let Some(rest) = upper.strip_prefix("Z/").or_else(|| upper.strip_prefix('Z')).or_else(|| upper.strip_prefix('C')) {
            let n = parse(rest)?;
            if n == 0 || n > DEFAULT_MAX_ORDER {
                return Err(unknown());
            }
            return Ok(cyclic(n));
        }
        if let Some(rest) = upper.strip_prefix('D') {
            let n = parse(rest)?;
            if n < 4 || n % 2 == 1 || n > DEFAULT_MAX_ORDER {
                return Err(unknown());
            }
            return Ok(dihedral(n));
        }
        if let Some(rest) = upper.strip_prefix('S') {
            let n = parse(rest)?;
            if !(1..=6).contains(&n) {
                return Err(unknown());
            }
            return Ok(symmetric(n));
        }
        Err(unknown())
    }

    pub const NAMES: &[&str] = &["Q8", "D8", "Z2", "Z3", "Z4", "Z5", "Z6", "S3", "S4", "S5", "S6"];
}

#[cfg(test)]
mod tests {
    use super::builtin::*;
    use super::*;

    #[test]
    fn q8_from_permutations_has_order_8() {
        let g = FiniteGroup::from_permutations("Q8", &quaternion_permutations(), DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(g.order(), 8);
        assert!(!g.is_abelian());
    }

    #[test]
    fn three_cycle_and_trivial() {
        let g = FiniteGroup::from_permutations("C3", &[vec![1, 2, 0]], DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(g.order(), 3);
        assert!(g.is_abelian());
        let t = FiniteGroup::from_permutations("1", &[], DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(t.order(), 1);
    }

    #[test]
    fn closure_bound_and_bad_generators() {
        let s5 = [vec![1, 0, 2, 3, 4], vec![1, 2, 3, 4, 0]];
        assert_eq!(
            FiniteGroup::from_permutations("S5", &s5, 100).unwrap_err(),
            GroupError::TooLarge { bound: 100 }
        );
        assert!(matches!(
            FiniteGroup::from_permutations("x", &[vec![0, 0]], 10),
            Err(GroupError::NotAPermutation { .. })
        ));
        assert_eq!(
            FiniteGroup::from_permutations("x", &[vec![0, 1], vec![0]], 10).unwrap_err(),
            GroupError::MixedDegrees
        );
    }

    #[test]
    fn table_validation() {
        // x*y = x - y mod 3 has a right identity only
        let bad: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (a + 3 - b) % 3).collect()).collect();
        assert!(FiniteGroup::from_table("bad", bad).is_err());
        // a Latin square with identity that is not associative
        let latin = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table("loop", latin), Err(GroupError::NotAGroup(_))));
    }

    #[test]
    fn class_sizes() {
        let q8 = conjugacy_data(&quaternion());
        assert_eq!(q8.class_sizes, vec![1, 1, 2, 2, 2]);
        let s3 = conjugacy_data(&symmetric(3));
        assert_eq!(s3.class_sizes, vec![1, 3, 2]);
        let z5 = conjugacy_data(&cyclic(5));
        assert_eq!(z5.class_sizes, vec![1; 5]);
        assert_eq!(q8.class_sizes.iter().sum::<usize>(), 8);
    }

    #[test]
    fn squaring_and_inverse_maps() {
        let q8 = conjugacy_data(&quaternion());
        // every non-central element squares to -1
        assert_eq!(q8.squaring_map, vec![0, 0, 1, 1, 1]);
        for c in 0..5 {
            assert_eq!(q8.inverse_map[q8.inverse_map[c]], c);
        }
        let z4 = conjugacy_data(&cyclic(4));
        assert_eq!(z4.inverse_map, vec![0, 3, 2, 1]);
    }

    #[test]
    fn class_matrix_examples() {
        let c3 = cyclic(3);
        let d = conjugacy_data(&c3);
        assert_eq!(class_matrix(&c3, &d, 0), IntMatrix::identity(3));
        let m1 = class_matrix(&c3, &d, 1);
        // C_1 * C_j = C_{j+1}
        for j in 0..3 {
            for k in 0..3 {
                let expected = i64::from((j + 1) % 3 == k);
                assert_eq!(m1.get(j, k), &expected.into());
            }
        }
    }

    #[test]
    fn class_matrices_commute_and_count() {
        for g in [symmetric(4), quaternion(), dihedral(10)] {
            let d = conjugacy_data(&g);
            let ms: Vec<IntMatrix> = (0..d.num_classes()).map(|i| class_matrix(&g, &d, i)).collect();
            for (i, a) in ms.iter().enumerate() {
                // summing over j for fixed k counts every x in C_i once
                for k in 0..d.num_classes() {
                    let total: num_bigint::BigInt = (0..d.num_classes()).map(|j| a.get(j, k).clone()).sum();
                    assert_eq!(total, d.class_sizes[i].into());
                }
                for b in &ms {
                    assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
                }
            }
        }
    }

    #[test]
    fn builtin_lookup() {
        assert_eq!(by_name("Q8").unwrap().order(), 8);
        assert_eq!(by_name("D8").unwrap().order(), 8);
        assert_eq!(by_name("Z/6").unwrap().order(), 6);
        assert_eq!(by_name("S4").unwrap().order(), 24);
        assert_eq!(by_name("s6").unwrap().order(), 720);
        assert!(by_name("S7").is_err());
        assert!(by_name("D7").is_err());
    }

    #[test]
    fn group_file_formats() {
        let g = parse_group_json(r#"{"permutations": [[1,2,0]]}"#, 100).unwrap();
        assert_eq!(g.order(), 3);
        let t = parse_group_json(r#"{"table": [[0,1],[1,0]], "name": "Z2"}"#, 100).unwrap();
        assert_eq!(t.order(), 2);
        assert_eq!(t.name(), "Z2");
        assert!(parse_group_json(r#"{"bogus": 1}"#, 100).is_err());
    }
}
