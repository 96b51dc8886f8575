//! Orientifold theories on an elliptic curve, their KR-groups and duality
//! classes, plus the continuous-trace model of `C*_ℝ,r(SL(2,ℂ))` and its
//! degree-shift comparison with `C*_ℝ(SU(2))`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kcalc::{
    direct_sum, equal_up_to_shift, ko_of_algebra, ko_point, ko_torus2, ksc_point, ku_point, GradedGroup, KError,
};
use crate::multiplicity::Multiplicity;
use crate::realrep::{DivisionRing, RealAlgebra, Summand};
use crate::realspace::Sign;
use crate::weyl::{fs_su2, ko_su2_group_algebra, Spin};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("partition violated between `{left}` and `{right}`: {detail}")]
    PartitionViolation { left: String, right: String, detail: String },
    #[error("degree-shift check failed at degree {degree}: {lhs} vs {rhs}")]
    MismatchReport { degree: usize, lhs: String, rhs: String },
    #[error(transparent)]
    K(#[from] KError),
    #[error("invalid catalog: {0}")]
    Format(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InvolutionKind {
    Identity,
    HolomorphicFree,
    AntiholomorphicFree,
    HolomorphicFixed4,
    AntiholomorphicFixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassId {
    A,
    B,
    C,
}

impl ClassId {
    pub const ALL: [ClassId; 3] = [ClassId::A, ClassId::B, ClassId::C];

    /// Representative KR-grading of the class.
    pub fn representative(self) -> GradedGroup {
        match self {
            ClassId::A => ko_torus2(),
            ClassId::B => {
                let ksc = ksc_point();
                direct_sum(&[ksc.clone(), ksc.shift(-1)]).expect("equal periods")
            }
            ClassId::C => {
                let ko = ko_point();
                direct_sum(&[ko.clone(), ko, ku_point().shift(-1)]).expect("equal periods")
            }
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientifoldTheory {
    pub name: String,
    pub involution_kind: InvolutionKind,
    pub sign_choice: Vec<Sign>,
    pub b_field_nontrivial: bool,
    /// Whether the sign choice is stated in the listing or filled in.
    pub sign_choice_stated: bool,
    #[serde(with = "graded_json")]
    pub kr: GradedGroup,
    pub class_id: ClassId,
    /// Absolute degree shift relative to the class representative; `None`
    /// when the listing does not fix it.
    pub degree_shift: Option<i64>,
}

mod graded_json {
    use super::GradedGroup;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(g: &GradedGroup, s: S) -> Result<S::Ok, S::Error> {
        g.to_json().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<GradedGroup, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        GradedGroup::from_json(&v).map_err(serde::de::Error::custom)
    }
}

fn theory(
    name: &str,
    involution_kind: InvolutionKind,
    signs: &str,
    sign_choice_stated: bool,
    b_field_nontrivial: bool,
    class_id: ClassId,
) -> OrientifoldTheory {
    let sign_choice = signs
        .chars()
        .map(|c| if c == '+' { Sign::Plus } else { Sign::Minus })
        .collect();
    OrientifoldTheory {
        name: name.to_string(),
        involution_kind,
        sign_choice,
        b_field_nontrivial,
        sign_choice_stated,
        kr: class_id.representative(),
        class_id,
        degree_shift: None,
    }
}

/// The ten theories with an elliptic curve and a holomorphic or
/// antiholomorphic involution.
pub fn build_catalog() -> Vec<OrientifoldTheory> {
    use ClassId::*;
    use InvolutionKind::*;
    vec![
        theory("identity", Identity, "", true, false, A),
        theory("antiholomorphic, two fixed circles, trivial signs", AntiholomorphicFixed, "++", true, false, A),
        theory("holomorphic, four fixed points", HolomorphicFixed4, "++++", false, false, A),
        theory("holomorphic free", HolomorphicFree, "", true, false, B),
        theory("antiholomorphic free", AntiholomorphicFree, "", true, false, B),
        theory("holomorphic, four fixed points, signs (+,+,-,-)", HolomorphicFixed4, "++--", true, false, B),
        theory("antiholomorphic, two fixed circles, signs (+,-)", AntiholomorphicFixed, "+-", true, false, B),
        theory("identity, nontrivial B-field", Identity, "", true, true, C),
        theory("holomorphic, four fixed points, signs (+,+,+,-)", HolomorphicFixed4, "+++-", true, false, C),
        theory("antiholomorphic, one fixed circle", AntiholomorphicFixed, "+", false, false, C),
    ]
}

pub fn catalog_to_json(catalog: &[OrientifoldTheory]) -> serde_json::Value {
    serde_json::to_value(catalog).expect("catalog serializes")
}

pub fn catalog_from_json(value: &serde_json::Value) -> Result<Vec<OrientifoldTheory>, CatalogError> {
    serde_json::from_value(value.clone()).map_err(|e| CatalogError::Format(e.to_string()))
}

/// Degree-wise invariants of one class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub class_id: ClassId,
    pub members: Vec<String>,
    pub groups: Vec<String>,
    pub rank_sequence: Vec<Multiplicity>,
    pub torsion_sequence: Vec<Multiplicity>,
    pub two_rank_sequence: Vec<Multiplicity>,
    pub minimal_period: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairComparison {
    pub left: String,
    pub right: String,
    pub shifts: Vec<usize>,
}

/// Why two classes differ: the first invariant, in the order rank sequence,
/// torsion-count sequence, 2-rank sequence, full groups, whose cyclic
/// rotation classes are disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distinguisher {
    pub left: ClassId,
    pub right: ClassId,
    pub ranks_rotation_equivalent: bool,
    pub torsion_rotation_equivalent: bool,
    pub two_rank_rotation_equivalent: bool,
    pub separated_by: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub class_sizes: Vec<usize>,
    pub classes: Vec<ClassSummary>,
    pub intra_class: Vec<PairComparison>,
    pub inter_class: Vec<PairComparison>,
    pub distinguishers: Vec<Distinguisher>,
}

fn rotation_equivalent<T: PartialEq>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len() && (0..a.len()).any(|s| (0..a.len()).all(|n| a[n] == b[(n + s) % b.len()]))
}

fn seq(v: &[Multiplicity]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// Checks that theories are shift-equivalent exactly when they share a class.
pub fn verify_duality_partition(catalog: &[OrientifoldTheory]) -> Result<PartitionReport, CatalogError> {
    let mut intra_class = Vec::new();
    let mut inter_class = Vec::new();
    for (i, a) in catalog.iter().enumerate() {
        for b in &catalog[i + 1..] {
            let shifts = equal_up_to_shift(&a.kr, &b.kr)?;
            let same = a.class_id == b.class_id;
            if same == shifts.is_empty() {
                return Err(CatalogError::PartitionViolation {
                    left: a.name.clone(),
                    right: b.name.clone(),
                    detail: if same {
                        "same class but no degree shift identifies the KR-groups".into()
                    } else {
                        format!("different classes but KR-groups agree after shifts {shifts:?}")
                    },
                });
            }
            let cmp = PairComparison {
                left: a.name.clone(),
                right: b.name.clone(),
                shifts,
            };
            if same {
                intra_class.push(cmp);
            } else {
                inter_class.push(cmp);
            }
        }
    }
    let classes: Vec<ClassSummary> = ClassId::ALL
        .iter()
        .filter_map(|&c| {
            let members: Vec<&OrientifoldTheory> = catalog.iter().filter(|t| t.class_id == c).collect();
            let kr = &members.first()?.kr;
            Some(ClassSummary {
                class_id: c,
                members: members.iter().map(|t| t.name.clone()).collect(),
                groups: kr.degrees().iter().map(ToString::to_string).collect(),
                rank_sequence: kr.rank_sequence(),
                torsion_sequence: kr.torsion_sequence(),
                two_rank_sequence: kr.two_rank_sequence(),
                minimal_period: kr.minimal_period(),
            })
        })
        .collect();
    let mut distinguishers = Vec::new();
    for (i, x) in classes.iter().enumerate() {
        for y in &classes[i + 1..] {
            let r = rotation_equivalent(&x.rank_sequence, &y.rank_sequence);
            let t = rotation_equivalent(&x.torsion_sequence, &y.torsion_sequence);
            let w = rotation_equivalent(&x.two_rank_sequence, &y.two_rank_sequence);
            let separated_by = if !r {
                format!("rank sequences {} vs {}", seq(&x.rank_sequence), seq(&y.rank_sequence))
            } else if !t {
                format!(
                    "torsion-count sequences {} vs {} (rank sequences are rotations of each other)",
                    seq(&x.torsion_sequence),
                    seq(&y.torsion_sequence)
                )
            } else if !w {
                format!(
                    "2-rank sequences {} vs {}",
                    seq(&x.two_rank_sequence),
                    seq(&y.two_rank_sequence)
                )
            } else {
                "full degree-wise groups".to_string()
            };
            distinguishers.push(Distinguisher {
                left: x.class_id,
                right: y.class_id,
                ranks_rotation_equivalent: r,
                torsion_rotation_equivalent: t,
                two_rank_rotation_equivalent: w,
                separated_by,
            });
        }
    }
    Ok(PartitionReport {
        class_sizes: classes.iter().map(|c| c.members.len()).collect(),
        classes,
        intra_class,
        inter_class,
        distinguishers,
    })
}

impl fmt::Display for PartitionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} classes, sizes {:?}", self.classes.len(), self.class_sizes)?;
        for c in &self.classes {
            writeln!(f, "class {}: {}", c.class_id, c.members.join("; "))?;
            writeln!(f, "  KR by degree: {}", c.groups.join(" | "))?;
            writeln!(
                f,
                "  ranks {}  torsion {}  2-ranks {}  minimal period {}",
                seq(&c.rank_sequence),
                seq(&c.torsion_sequence),
                seq(&c.two_rank_sequence),
                c.minimal_period
            )?;
        }
        let ok = self.intra_class.iter().filter(|p| !p.shifts.is_empty()).count();
        writeln!(f, "intra-class pairs shift-equivalent: {ok}/{}", self.intra_class.len())?;
        let none = self.inter_class.iter().filter(|p| p.shifts.is_empty()).count();
        writeln!(f, "inter-class pairs inequivalent under all shifts: {none}/{}", self.inter_class.len())?;
        for d in &self.distinguishers {
            writeln!(f, "{} vs {}: separated by {}", d.left, d.right, d.separated_by)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CTBase {
    HalfLine,
    Line,
}

/// `multiplicity` copies of `C₀(base)` with coefficients in `ring`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CTSummand {
    pub base: CTBase,
    pub coefficient_ring: DivisionRing,
    pub multiplicity: Multiplicity,
}

impl fmt::Display for CTSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.base {
            CTBase::HalfLine => "[0,∞)",
            CTBase::Line => "ℝ",
        };
        match self.multiplicity {
            Multiplicity::Finite(1) => write!(f, "C0^{}({base})", self.coefficient_ring),
            m => write!(f, "{m}·C0^{}({base})", self.coefficient_ring),
        }
    }
}

/// Type of the principal series with parameter `n`, read from the parity of
/// its minimal `K`-type (spin `n/2`).
pub fn principal_series_ring(n: u32) -> DivisionRing {
    match fs_su2(Spin::from_twice(n)) {
        1 => DivisionRing::R,
        _ => DivisionRing::H,
    }
}

/// Continuous-trace model of the reduced real group algebra of `SL(2,ℂ)`:
/// the `n = 0` series over a half-line, then the even and odd families over
/// lines.
pub fn sl2c_reduced_algebra() -> Vec<CTSummand> {
    let mut out = vec![CTSummand {
        base: CTBase::HalfLine,
        coefficient_ring: principal_series_ring(0),
        multiplicity: Multiplicity::ONE,
    }];
    // Representatives n = 2 (even) and n = 1 (odd); each parity class is infinite.
    for n in [2, 1] {
        out.push(CTSummand {
            base: CTBase::Line,
            coefficient_ring: principal_series_ring(n),
            multiplicity: Multiplicity::Omega,
        });
    }
    out.sort();
    out
}

/// Half-lines are properly contractible and contribute nothing;
/// `C₀(ℝ) ⊗ D` is the suspension of `D`, so its degree-`n` group is
/// `K(D)_{n+1}`: `KO_{n+1}` for ℝ, `KSp_{n+1} = KO_{n+5}` for ℍ.
pub fn ko_of_ct_summands(summands: &[CTSummand]) -> GradedGroup {
    let mut parts = vec![GradedGroup::zero(crate::kcalc::PERIOD)];
    for s in summands {
        if s.base == CTBase::HalfLine {
            continue;
        }
        let point = ko_of_algebra(&RealAlgebra::new("", [Summand::new(s.coefficient_ring, 1, 1)]));
        parts.push(point.shift(-1).scale(s.multiplicity));
    }
    direct_sum(&parts).expect("equal periods")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMatch {
    pub compact_side: String,
    pub reduced_side: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaumConnesReport {
    pub degree_shift: i64,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
    pub equal: bool,
    pub torsion_free_degrees: Vec<usize>,
    pub family_matches: Vec<FamilyMatch>,
}

impl fmt::Display for BaumConnesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "KO of C*(SU(2)) shifted by {} vs KO of the reduced SL(2,C) algebra", self.degree_shift)?;
        for (n, (l, r)) in self.lhs.iter().zip(&self.rhs).enumerate() {
            writeln!(f, "  degree {n}: {l}  |  {r}")?;
        }
        writeln!(f, "equal in all degrees: {}", self.equal)?;
        writeln!(f, "degrees with free summands: {:?}", self.torsion_free_degrees)?;
        for m in &self.family_matches {
            writeln!(f, "  {} ↔ {}", m.compact_side, m.reduced_side)?;
        }
        Ok(())
    }
}

/// Compares `shift(KO(C*_ℝ(SU(2))), 3)` with the KO-theory of the reduced
/// `SL(2,ℂ)` algebra, degree by degree, and matches summand families.
pub fn baum_connes_shift_check() -> Result<BaumConnesReport, CatalogError> {
    const SHIFT: i64 = 3;
    let lhs = ko_su2_group_algebra().shift(SHIFT);
    let summands = sl2c_reduced_algebra();
    let rhs = ko_of_ct_summands(&summands);
    for n in 0..lhs.period() {
        if lhs.degrees()[n] != rhs.degrees()[n] {
            return Err(CatalogError::MismatchReport {
                degree: n,
                lhs: lhs.degrees()[n].to_string(),
                rhs: rhs.degrees()[n].to_string(),
            });
        }
    }
    let mut family_matches = Vec::new();
    for (twice, label) in [(0u32, "integral spin"), (1, "half-integral spin")] {
        let k = Spin::from_twice(twice);
        let ring = if fs_su2(k) == 1 { DivisionRing::R } else { DivisionRing::H };
        let family = ko_of_algebra(&RealAlgebra::new("", [Summand::new(ring, 1, Multiplicity::Omega)])).shift(SHIFT);
        for s in summands.iter().filter(|s| s.base == CTBase::Line) {
            if ko_of_ct_summands(&[*s]) == family {
                family_matches.push(FamilyMatch {
                    compact_side: format!("{label} K-types ({ring} type)"),
                    reduced_side: format!("{s}"),
                });
            }
        }
    }
    Ok(BaumConnesReport {
        degree_shift: SHIFT,
        lhs: lhs.degrees().iter().map(ToString::to_string).collect(),
        rhs: rhs.degrees().iter().map(ToString::to_string).collect(),
        equal: true,
        torsion_free_degrees: (0..rhs.period()).filter(|&n| !rhs.degrees()[n].rank().is_zero()).collect(),
        family_matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kcalc::ksp_point;

    fn finite(v: &[Multiplicity]) -> Vec<u64> {
        v.iter().map(|m| m.finite().unwrap()).collect()
    }

    #[test]
    fn catalog_shape() {
        let c = build_catalog();
        assert_eq!(c.len(), 10);
        let sizes: Vec<usize> = ClassId::ALL.iter().map(|&k| c.iter().filter(|t| t.class_id == k).count()).collect();
        assert_eq!(sizes, vec![3, 4, 3]);
        assert!(c.iter().any(|t| t.class_id == ClassId::B && t.involution_kind == InvolutionKind::HolomorphicFree));
        assert!(c.iter().any(|t| t.class_id == ClassId::C && t.b_field_nontrivial));
        assert!(c.iter().all(|t| t.kr.period() == 8 && t.degree_shift.is_none()));
    }

    #[test]
    fn class_invariants() {
        let a = ClassId::A.representative();
        let b = ClassId::B.representative();
        let c = ClassId::C.representative();
        assert_eq!(finite(&a.rank_sequence()), vec![1, 2, 1, 0, 1, 2, 1, 0]);
        assert_eq!(finite(&b.rank_sequence()), vec![1, 0, 1, 2, 1, 0, 1, 2]);
        assert_eq!(finite(&c.rank_sequence()), vec![2, 1, 0, 1, 2, 1, 0, 1]);
        assert_eq!(finite(&a.torsion_sequence()), vec![0, 1, 3, 3, 1, 0, 0, 0]);
        assert_eq!(finite(&b.torsion_sequence()), vec![1, 1, 0, 0, 1, 1, 0, 0]);
        assert_eq!(finite(&c.torsion_sequence()), vec![0, 2, 2, 0, 0, 0, 0, 0]);
        assert_eq!(b.minimal_period(), 4);
    }

    #[test]
    fn partition() {
        let report = verify_duality_partition(&build_catalog()).unwrap();
        assert_eq!(report.class_sizes, vec![3, 4, 3]);
        assert_eq!(report.intra_class.len(), 3 + 6 + 3);
        assert_eq!(report.inter_class.len(), 45 - 12);
        assert!(report.inter_class.iter().all(|p| p.shifts.is_empty()));
        assert!(report.distinguishers.iter().all(|d| d.ranks_rotation_equivalent && !d.torsion_rotation_equivalent));
    }

    #[test]
    fn partition_violation_detected() {
        let mut c = build_catalog();
        c[0].kr = ClassId::B.representative();
        assert!(matches!(
            verify_duality_partition(&c),
            Err(CatalogError::PartitionViolation { .. })
        ));
    }

    #[test]
    fn reduced_algebra() {
        let s = sl2c_reduced_algebra();
        assert_eq!(s.iter().filter(|x| x.base == CTBase::HalfLine).count(), 1);
        assert_eq!(principal_series_ring(4), DivisionRing::R);
        assert_eq!(principal_series_ring(3), DivisionRing::H);
        assert!(s.contains(&CTSummand {
            base: CTBase::Line,
            coefficient_ring: DivisionRing::H,
            multiplicity: Multiplicity::Omega
        }));
    }

    #[test]
    fn ct_k_theory() {
        let line_r = CTSummand {
            base: CTBase::Line,
            coefficient_ring: DivisionRing::R,
            multiplicity: Multiplicity::ONE,
        };
        let k = ko_of_ct_summands(&[line_r]);
        for n in 0..8 {
            assert_eq!(k.degree(n), ko_point().degree(n + 1));
        }
        assert_eq!(k.degree(3).to_string(), "ℤ");
        assert!(k.degree(5).is_zero());
        assert_eq!(ko_of_ct_summands(&[]), GradedGroup::zero(8));
        let half = CTSummand {
            base: CTBase::HalfLine,
            ..line_r
        };
        assert_eq!(ko_of_ct_summands(&[half]), GradedGroup::zero(8));
    }

    #[test]
    fn baum_connes() {
        let r = baum_connes_shift_check().unwrap();
        assert!(r.equal);
        assert_eq!(r.torsion_free_degrees, vec![3, 7]);
        // Degree n is ω·KO_{n+1} ⊕ ω·KO_{n+5}, tabulated by hand.
        let expected = ["ω·ℤ/2", "ω·ℤ/2", "0", "ω·ℤ", "ω·ℤ/2", "ω·ℤ/2", "0", "ω·ℤ"];
        assert_eq!(r.lhs, expected);
        assert_eq!(r.rhs, expected);
        assert_eq!(r.family_matches.len(), 2);
        assert!(r.family_matches[0].compact_side.starts_with("integral"));
        assert!(r.family_matches[0].reduced_side.contains("^H"));
        let lhs = direct_sum(&[ko_point().scale(Multiplicity::Omega), ksp_point().scale(Multiplicity::Omega)])
            .unwrap()
            .shift(3);
        assert_eq!(lhs, ko_of_ct_summands(&sl2c_reduced_algebra()));
    }

    #[test]
    fn json_round_trip() {
        let c = build_catalog();
        let v = catalog_to_json(&c);
        let back = catalog_from_json(&v).unwrap();
        assert_eq!(back, c);
        assert_eq!(serde_json::to_string(&catalog_to_json(&back)).unwrap(), serde_json::to_string(&v).unwrap());
    }
}
