//! Periodic graded abelian groups: KO, KU, KSp and KSC of a point, degree
//! shifts, sums, mapping tori and shift-equivalence.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::intlinalg::{bigint_json, cokernel, kernel_basis, FgAbGroup, IntMatrix};
use crate::multiplicity::Multiplicity;
use crate::realrep::{DivisionRing, RealAlgebra};

/// Bott period of real K-theory.
pub const PERIOD: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KError {
    #[error("period mismatch: {left} vs {right}")]
    PeriodMismatch { left: usize, right: usize },
    #[error("degree {degree} has torsion; mapping torus needs a free base")]
    TorsionUnsupported { degree: usize },
    #[error("degree {degree}: infinite rank not supported here")]
    InfiniteUnsupported { degree: usize },
    #[error("degree {degree}: action matrix is {found}x{found}, base rank is {expected}")]
    RankMismatch { degree: usize, expected: usize, found: usize },
    #[error("degree {degree}: action matrix is not invertible over ℤ")]
    NotInvertible { degree: usize },
    #[error("invalid graded group: {0}")]
    Format(String),
}

/// An indecomposable finitely generated abelian group: `ℤ` or `ℤ/p^k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Indecomposable {
    Free,
    Torsion(BigInt),
}

impl Indecomposable {
    fn from_order(order: BigInt) -> Self {
        if order.is_zero() {
            Indecomposable::Free
        } else {
            Indecomposable::Torsion(order)
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Indecomposable::Free)
    }

    pub fn as_group(&self) -> FgAbGroup {
        match self {
            Indecomposable::Free => FgAbGroup::free(1),
            Indecomposable::Torsion(q) => FgAbGroup::from_parts(0, [q.clone()]),
        }
    }
}

impl fmt::Display for Indecomposable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Indecomposable::Free => write!(f, "ℤ"),
            Indecomposable::Torsion(q) => write!(f, "ℤ/{q}"),
        }
    }
}

/// One degree: indecomposable summands with multiplicities in `ℕ ∪ {ω}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Degree(BTreeMap<Indecomposable, Multiplicity>);

impl Degree {
    pub fn zero() -> Self {
        Degree::default()
    }

    pub fn from_group(g: &FgAbGroup) -> Self {
        let mut d = Degree::zero();
        for order in g.indecomposables() {
            d.add(Indecomposable::from_order(order), Multiplicity::ONE);
        }
        d
    }

    pub fn add(&mut self, summand: Indecomposable, m: Multiplicity) {
        if m.is_zero() {
            return;
        }
        let slot = self.0.entry(summand).or_insert(Multiplicity::ZERO);
        *slot = *slot + m;
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn summands(&self) -> impl Iterator<Item = (&Indecomposable, Multiplicity)> {
        self.0.iter().map(|(k, &m)| (k, m))
    }

    pub fn rank(&self) -> Multiplicity {
        self.0.get(&Indecomposable::Free).copied().unwrap_or(Multiplicity::ZERO)
    }

    /// Number of indecomposable torsion summands.
    pub fn torsion_count(&self) -> Multiplicity {
        self.summands()
            .filter(|(k, _)| !k.is_free())
            .fold(Multiplicity::ZERO, |acc, (_, m)| acc + m)
    }

    /// Number of 2-primary cyclic summands.
    pub fn two_rank(&self) -> Multiplicity {
        self.summands()
            .filter(|(k, _)| matches!(k, Indecomposable::Torsion(q) if q.is_even()))
            .fold(Multiplicity::ZERO, |acc, (_, m)| acc + m)
    }

    /// The group itself, when every multiplicity is finite.
    pub fn group(&self) -> Option<FgAbGroup> {
        let mut free = 0usize;
        let mut orders = Vec::new();
        for (k, m) in self.summands() {
            let m = m.finite()? as usize;
            match k {
                Indecomposable::Free => free += m,
                Indecomposable::Torsion(q) => orders.extend(std::iter::repeat_n(q.clone(), m)),
            }
        }
        Some(FgAbGroup::from_parts(free, orders))
    }

    fn scaled(&self, m: Multiplicity) -> Degree {
        let mut d = Degree::zero();
        for (k, n) in self.summands() {
            d.add(k.clone(), n * m);
        }
        d
    }

    fn merge(&mut self, other: &Degree) {
        for (k, m) in other.summands() {
            self.add(k.clone(), m);
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .summands()
            .map(|(k, m)| match (k, m) {
                (_, Multiplicity::Finite(1)) => k.to_string(),
                (Indecomposable::Free, Multiplicity::Finite(n)) => format!("ℤ^{n}"),
                (_, Multiplicity::Finite(n)) => format!("({k})^{n}"),
                (_, Multiplicity::Omega) => format!("ω·{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// A graded abelian group with periodic grading.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedGroup {
    degrees: Vec<Degree>,
}

impl GradedGroup {
    pub fn zero(period: usize) -> Self {
        assert!(period > 0, "period must be positive");
        GradedGroup {
            degrees: vec![Degree::zero(); period],
        }
    }

    /// From one group per degree `0..period`.
    pub fn from_groups(groups: &[FgAbGroup]) -> Self {
        assert!(!groups.is_empty(), "period must be positive");
        GradedGroup {
            degrees: groups.iter().map(Degree::from_group).collect(),
        }
    }

    pub fn from_degrees(degrees: Vec<Degree>) -> Self {
        assert!(!degrees.is_empty(), "period must be positive");
        GradedGroup { degrees }
    }

    pub fn period(&self) -> usize {
        self.degrees.len()
    }

    /// Degree `n`, read modulo the period.
    pub fn degree(&self, n: i64) -> &Degree {
        &self.degrees[n.rem_euclid(self.period() as i64) as usize]
    }

    pub fn degrees(&self) -> &[Degree] {
        &self.degrees
    }

    /// Same values on a period that is a multiple of the current one.
    pub fn with_period(&self, period: usize) -> Result<Self, KError> {
        if period == 0 || !period.is_multiple_of(self.period()) {
            return Err(KError::PeriodMismatch {
                left: self.period(),
                right: period,
            });
        }
        Ok(GradedGroup {
            degrees: (0..period as i64).map(|n| self.degree(n).clone()).collect(),
        })
    }

    /// `result_n = self_{n-s}`.
    pub fn shift(&self, s: i64) -> Self {
        GradedGroup {
            degrees: (0..self.period() as i64).map(|n| self.degree(n - s).clone()).collect(),
        }
    }

    /// Every multiplicity multiplied by `m`.
    pub fn scale(&self, m: impl Into<Multiplicity>) -> Self {
        let m = m.into();
        GradedGroup {
            degrees: self.degrees.iter().map(|d| d.scaled(m)).collect(),
        }
    }

    pub fn rank_sequence(&self) -> Vec<Multiplicity> {
        self.degrees.iter().map(Degree::rank).collect()
    }

    pub fn torsion_sequence(&self) -> Vec<Multiplicity> {
        self.degrees.iter().map(Degree::torsion_count).collect()
    }

    pub fn two_rank_sequence(&self) -> Vec<Multiplicity> {
        self.degrees.iter().map(Degree::two_rank).collect()
    }

    /// Smallest `p` dividing the period with `shift(self, p) = self`.
    pub fn minimal_period(&self) -> usize {
        let n = self.period();
        (1..=n)
            .find(|&p| n.is_multiple_of(p) && self.shift(p as i64) == *self)
            .unwrap_or(n)
    }

    /// JSON object mapping each degree to a list of
    /// `[free_rank, invariant_factors, multiplicity]`.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (n, d) in self.degrees.iter().enumerate() {
            let items: Vec<Value> = d
                .summands()
                .map(|(k, m)| match k {
                    Indecomposable::Free => json!([1, [], m]),
                    Indecomposable::Torsion(q) => json!([0, [bigint_json::to_value(q)], m]),
                })
                .collect();
            map.insert(n.to_string(), Value::Array(items));
        }
        Value::Object(map)
    }

    pub fn from_json(value: &Value) -> Result<Self, KError> {
        let bad = |m: String| KError::Format(m);
        let map = value.as_object().ok_or_else(|| bad("expected an object of degrees".into()))?;
        let period = map.len();
        if period == 0 {
            return Err(bad("no degrees".into()));
        }
        let mut degrees = vec![Degree::zero(); period];
        for (key, items) in map {
            let n: usize = key
                .parse()
                .ok()
                .filter(|&n| n < period)
                .ok_or_else(|| bad(format!("degree key `{key}` outside 0..{period}")))?;
            let items = items.as_array().ok_or_else(|| bad(format!("degree {n}: expected a list")))?;
            for item in items {
                let t = item
                    .as_array()
                    .filter(|t| t.len() == 3)
                    .ok_or_else(|| bad(format!("degree {n}: summand must be [free_rank, invariant_factors, multiplicity]")))?;
                let free = t[0].as_u64().ok_or_else(|| bad(format!("degree {n}: bad free rank")))? as usize;
                let factors = t[1]
                    .as_array()
                    .ok_or_else(|| bad(format!("degree {n}: bad invariant factors")))?
                    .iter()
                    .map(|v| bigint_json::from_value(v).filter(|d| d > &BigInt::one()))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| bad(format!("degree {n}: invariant factors must exceed 1")))?;
                let m: Multiplicity = serde_json::from_value(t[2].clone()).map_err(|e| bad(format!("degree {n}: {e}")))?;
                let summand = Degree::from_group(&FgAbGroup::from_parts(free, factors));
                degrees[n].merge(&summand.scaled(m));
            }
        }
        Ok(GradedGroup { degrees })
    }
}

impl fmt::Display for GradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, d) in self.degrees.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            write!(f, "{n}: {d}")?;
        }
        Ok(())
    }
}

pub fn ko_point() -> GradedGroup {
    let z = FgAbGroup::free(1);
    let z2 = FgAbGroup::cyclic(2);
    let o = FgAbGroup::trivial();
    GradedGroup::from_groups(&[z.clone(), z2.clone(), z2, o.clone(), z, o.clone(), o.clone(), o])
}

pub fn ku_point() -> GradedGroup {
    GradedGroup::from_groups(&[FgAbGroup::free(1), FgAbGroup::trivial()])
        .with_period(PERIOD)
        .expect("2 divides 8")
}

/// `KSp_n = KO_{n+4}`.
pub fn ksp_point() -> GradedGroup {
    ko_point().shift(4)
}

/// Degree-wise automorphisms of the free parts of a graded group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAction {
    matrices: Vec<IntMatrix>,
}

impl GradedAction {
    pub fn new(matrices: Vec<IntMatrix>) -> Result<Self, KError> {
        for (degree, m) in matrices.iter().enumerate() {
            if !m.is_square() {
                return Err(KError::RankMismatch {
                    degree,
                    expected: m.rows(),
                    found: m.cols(),
                });
            }
            if m.rows() > 0 && !m.abs_det().expect("square").is_one() {
                return Err(KError::NotInvertible { degree });
            }
        }
        Ok(GradedAction { matrices })
    }

    pub fn identity(ranks: &[usize]) -> Self {
        GradedAction {
            matrices: ranks.iter().map(|&r| IntMatrix::identity(r)).collect(),
        }
    }

    pub fn matrix(&self, n: usize) -> &IntMatrix {
        &self.matrices[n]
    }

    /// Complex conjugation on `KU`: `(-1)^k` on degree `2k`.
    pub fn ku_conjugation(period: usize) -> Self {
        let matrices = (0..period)
            .map(|n| {
                if n % 2 == 1 {
                    IntMatrix::zeros(0, 0)
                } else if (n / 2) % 2 == 0 {
                    IntMatrix::identity(1)
                } else {
                    IntMatrix::identity(1).neg()
                }
            })
            .collect();
        GradedAction { matrices }
    }
}

/// K-theory of the mapping torus of `φ` on a torsion-free base:
/// `result_n = coker(I - A_{n+1}) ⊕ ker(I - A_n)`.
pub fn mapping_torus_k(base: &GradedGroup, phi: &GradedAction) -> Result<GradedGroup, KError> {
    let p = base.period();
    if phi.matrices.len() != p {
        return Err(KError::PeriodMismatch {
            left: p,
            right: phi.matrices.len(),
        });
    }
    let mut ranks = Vec::with_capacity(p);
    for (degree, d) in base.degrees.iter().enumerate() {
        if d.torsion_count() != Multiplicity::ZERO {
            return Err(KError::TorsionUnsupported { degree });
        }
        let r = d.rank().finite().ok_or(KError::InfiniteUnsupported { degree })? as usize;
        let found = phi.matrices[degree].rows();
        if found != r {
            return Err(KError::RankMismatch {
                degree,
                expected: r,
                found,
            });
        }
        ranks.push(r);
    }
    let one_minus: Vec<IntMatrix> = (0..p)
        .map(|n| IntMatrix::identity(ranks[n]).sub(&phi.matrices[n]).expect("square"))
        .collect();
    let degrees = (0..p)
        .map(|n| {
            let coker = cokernel(&one_minus[(n + 1) % p]);
            let ker = FgAbGroup::free(kernel_basis(&one_minus[n]).cols());
            Degree::from_group(&coker.direct_sum(&ker))
        })
        .collect();
    Ok(GradedGroup { degrees })
}

/// `KSC` of a point, computed as the mapping torus of conjugation on `KU`.
pub fn ksc_point() -> GradedGroup {
    mapping_torus_k(&ku_point(), &GradedAction::ku_conjugation(PERIOD)).expect("KU is free")
}

pub fn direct_sum(groups: &[GradedGroup]) -> Result<GradedGroup, KError> {
    let Some(first) = groups.first() else {
        return Err(KError::Format("empty direct sum".into()));
    };
    let mut out = GradedGroup::zero(first.period());
    for g in groups {
        if g.period() != out.period() {
            return Err(KError::PeriodMismatch {
                left: out.period(),
                right: g.period(),
            });
        }
        for (acc, d) in out.degrees.iter_mut().zip(&g.degrees) {
            acc.merge(d);
        }
    }
    Ok(out)
}

/// Degree-wise `KO_n ⊕ 2·KO_{n-1} ⊕ KO_{n-2}`.
pub fn ko_torus2() -> GradedGroup {
    let ko = ko_point();
    direct_sum(&[ko.clone(), ko.shift(1).scale(2), ko.shift(2)]).expect("equal periods")
}

/// All `s` in `0..period` with `g1_n ≅ g2_{n+s}` for every `n`.
pub fn equal_up_to_shift(g1: &GradedGroup, g2: &GradedGroup) -> Result<Vec<usize>, KError> {
    if g1.period() != g2.period() {
        return Err(KError::PeriodMismatch {
            left: g1.period(),
            right: g2.period(),
        });
    }
    let p = g1.period();
    Ok((0..p).filter(|&s| g2.shift(-(s as i64)) == *g1).collect())
}

/// K-theory of a real algebra by Morita invariance: `M_n(ℝ) ↦ KO`,
/// `M_n(ℂ) ↦ KU`, `M_n(ℍ) ↦ KSp`, with multiplicities.
pub fn ko_of_algebra(a: &RealAlgebra) -> GradedGroup {
    let parts: Vec<GradedGroup> = a
        .summands()
        .iter()
        .map(|s| {
            let base = match s.ring {
                DivisionRing::R => ko_point(),
                DivisionRing::C => ku_point(),
                DivisionRing::H => ksp_point(),
            };
            base.scale(s.multiplicity)
        })
        .collect();
    if parts.is_empty() {
        return GradedGroup::zero(PERIOD);
    }
    direct_sum(&parts).expect("all of period 8")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbGroup {
        match s {
            "0" => FgAbGroup::trivial(),
            "Z" => FgAbGroup::free(1),
            "Z2" => FgAbGroup::cyclic(2),
            _ => unreachable!(),
        }
    }

    #[test]
    fn point_tables() {
        let ko = ko_point();
        assert_eq!(ko.degree(1).group().unwrap(), g("Z2"));
        assert_eq!(ko.degree(4).group().unwrap(), g("Z"));
        assert_eq!(ksp_point().degree(4).group().unwrap(), g("Z"));
        assert_eq!(ksp_point().degree(5).group().unwrap(), g("Z2"));
        assert_eq!(ku_point().degree(3).group().unwrap(), g("0"));
        assert_eq!(ku_point().period(), 8);
    }

    #[test]
    fn shifts() {
        let ko = ko_point();
        assert_eq!(ko.shift(0), ko);
        assert_eq!(ko.shift(4), ksp_point());
        assert_eq!(ko.shift(3).shift(7), ko.shift(2));
        assert_eq!(ko.shift(8), ko);
        assert_eq!(ko.shift(-1).degree(0), ko.degree(1));
    }

    #[test]
    fn quaternionic_line_is_ko_plus_five() {
        // C₀(ℝ) ⊗ ℍ: suspension moves KSp down by one, landing on KO_{n+5}.
        let kh = ksp_point().shift(-1);
        for n in 0..8 {
            assert_eq!(kh.degree(n), ko_point().degree(n + 5));
        }
        assert_eq!(kh, ko_point().shift(3));
    }

    #[test]
    fn sums_and_omega() {
        let ko = ko_point();
        assert_eq!(direct_sum(&[ko.clone(), GradedGroup::zero(8)]).unwrap(), ko);
        let w = ko.scale(Multiplicity::Omega);
        assert_eq!(direct_sum(&[w.clone(), ko.clone()]).unwrap(), w);
        let s = direct_sum(&[ko.clone(), ksp_point()]).unwrap();
        assert_eq!(s.degree(1).group().unwrap(), g("Z2"));
        assert_eq!(
            direct_sum(&[ko, GradedGroup::zero(4)]),
            Err(KError::PeriodMismatch { left: 8, right: 4 })
        );
    }

    #[test]
    fn ksc_from_mapping_torus() {
        let ksc = ksc_point();
        let expect = [g("Z"), g("Z2"), g("0"), g("Z")];
        for n in 0..8 {
            assert_eq!(ksc.degree(n).group().unwrap(), expect[n as usize % 4], "degree {n}");
        }
        assert_eq!(ksc.minimal_period(), 4);
        assert_eq!(ksc.shift(4), ksc);
    }

    #[test]
    fn trivial_and_negated_mapping_tori() {
        let ku = ku_point();
        let id = GradedAction::identity(&[1, 0, 1, 0, 1, 0, 1, 0]);
        let t = mapping_torus_k(&ku, &id).unwrap();
        for n in 0..8 {
            assert_eq!(t.degree(n).rank(), Multiplicity::ONE);
        }
        let base = GradedGroup::from_groups(&[g("Z"), g("0")]);
        let neg = GradedAction::new(vec![IntMatrix::identity(1).neg(), IntMatrix::zeros(0, 0)]).unwrap();
        let t = mapping_torus_k(&base, &neg).unwrap();
        assert!(t.degree(0).is_zero());
        assert_eq!(t.degree(1).group().unwrap(), g("Z2"));
        assert_eq!(
            mapping_torus_k(&ko_point(), &GradedAction::identity(&[1, 0, 0, 0, 1, 0, 0, 0])),
            Err(KError::TorsionUnsupported { degree: 1 })
        );
        let two = IntMatrix::diagonal(&[2]);
        assert_eq!(
            GradedAction::new(vec![two, IntMatrix::zeros(0, 0)]),
            Err(KError::NotInvertible { degree: 0 })
        );
    }

    #[test]
    fn torus() {
        let t = ko_torus2();
        assert_eq!(t.degree(0).group().unwrap(), g("Z"));
        let ranks: Vec<_> = t.rank_sequence().iter().map(|m| m.finite().unwrap()).collect();
        assert_eq!(ranks, vec![1, 2, 1, 0, 1, 2, 1, 0]);
        assert_eq!(t.degree(2).group().unwrap(), FgAbGroup::elementary(2, 3).direct_sum(&g("Z")));
        assert_eq!(t.degree(2).torsion_count(), Multiplicity::Finite(3));
    }

    #[test]
    fn shift_equivalence() {
        assert_eq!(equal_up_to_shift(&ko_point(), &ksp_point()).unwrap(), vec![4]);
        assert_eq!(equal_up_to_shift(&ko_point(), &ko_point()).unwrap(), vec![0]);
        assert!(equal_up_to_shift(&ko_point(), &ku_point()).unwrap().is_empty());
        assert_eq!(equal_up_to_shift(&ksp_point(), &ko_point()).unwrap(), vec![4]);
    }

    #[test]
    fn json_round_trip() {
        let x = direct_sum(&[ko_point().scale(Multiplicity::Omega), ksc_point()]).unwrap();
        let v = x.to_json();
        assert_eq!(v["1"], json!([[0, [2], "omega"]]));
        assert_eq!(GradedGroup::from_json(&v).unwrap(), x);
        assert!(GradedGroup::from_json(&json!({"0": [[0, [1], 1]]})).is_err());
    }

    #[test]
    fn display() {
        let x = ko_point().scale(3);
        assert_eq!(x.degree(0).to_string(), "ℤ^3");
        assert_eq!(x.degree(1).to_string(), "(ℤ/2)^3");
        assert_eq!(ko_point().scale(Multiplicity::Omega).degree(2).to_string(), "ω·ℤ/2");
        assert_eq!(x.degree(3).to_string(), "0");
    }

    #[test]
    fn algebra_k_theory() {
        use crate::realrep::Summand;
        let q8 = RealAlgebra::new("q8", [Summand::new(DivisionRing::R, 1, 4), Summand::new(DivisionRing::H, 1, 1)]);
        let k = ko_of_algebra(&q8);
        assert_eq!(k, direct_sum(&[ko_point().scale(4), ksp_point()]).unwrap());
        assert_eq!(k.degree(4).rank(), Multiplicity::Finite(5));
    }
}
