use num_complex::Complex64;

use realcstar::chartab::{compute_character_table, ORTHOGONALITY_TOL};
use realcstar::cyccoh::CyclicModule;
use realcstar::groups::builtin;
use realcstar::intlinalg::{subquotient, FgAbGroup, IntMatrix};
use realcstar::kcalc::{ksc_point, GradedGroup};
use realcstar::realrep::{
    complexify, decompose_by_structure_constants, fs_indicators, tensor_real, wedderburn_complex, wedderburn_real,
    DivisionRing, RealAlgebra, StructureConstants,
};
use realcstar::realspace::{brauer_group, builtin as spaces};
use realcstar::Multiplicity;

const SMALL_GROUPS: [&str; 10] = ["Q8", "D8", "Z2", "Z3", "Z4", "Z5", "Z6", "S3", "S4", "S5"];

#[test]
fn orthogonality_on_builtins() {
    for name in builtin::NAMES {
        let g = builtin::by_name(name).unwrap();
        let t = compute_character_table(&g).unwrap();
        let n = g.order() as f64;
        let r = t.class_sizes.len();
        for a in 0..r {
            for b in 0..r {
                let s: Complex64 = (0..r)
                    .map(|k| t.values[a][k] * t.values[b][k].conj() * t.class_sizes[k] as f64)
                    .sum::<Complex64>()
                    / n;
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((s - expect).norm() < ORTHOGONALITY_TOL, "{name}: <{a},{b}> = {s}");
            }
        }
    }
}

/// Frobenius-Schur counting: `Σ ν(χ) χ(1)` is the number of square roots of 1.
#[test]
fn indicators_count_involutions() {
    for name in builtin::NAMES {
        let g = builtin::by_name(name).unwrap();
        let t = compute_character_table(&g).unwrap();
        let nu = fs_indicators(&t).unwrap();
        let weighted: i64 = nu.iter().zip(&t.dims).map(|(&v, &d)| v as i64 * d as i64).sum();
        let roots = (0..g.order()).filter(|&x| g.mul(x, x) == g.identity()).count() as i64;
        assert_eq!(weighted, roots, "{name}");
    }
}

/// Indicators of `ℤ/m` computed directly from `χ_k(g) = ζ^{kg}`.
fn cyclic_indicator_oracle(m: usize) -> Vec<i32> {
    let mut out: Vec<i32> = (0..m)
        .map(|k| {
            let s: Complex64 = (0..m)
                .map(|g| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (2 * k * g) as f64 / m as f64))
                .sum();
            (s.re / m as f64).round() as i32
        })
        .collect();
    out.sort();
    out
}

#[test]
fn cyclic_indicators_match_oracle() {
    assert_eq!(cyclic_indicator_oracle(4), vec![0, 0, 1, 1]);
    for m in 2..=6 {
        let t = compute_character_table(&builtin::cyclic(m)).unwrap();
        let mut nu = fs_indicators(&t).unwrap();
        nu.sort();
        assert_eq!(nu, cyclic_indicator_oracle(m), "Z{m}");
    }
}

#[test]
fn wedderburn_dimension_and_complexification() {
    for name in builtin::NAMES {
        let g = builtin::by_name(name).unwrap();
        let t = compute_character_table(&g).unwrap();
        let real = wedderburn_real(&t).unwrap();
        assert_eq!(real.real_dimension().unwrap(), g.order() as u64, "{name}");
        assert!(complexify(&real).same_blocks(&wedderburn_complex(&t)), "{name}");
    }
}

#[test]
fn wedderburn_agrees_with_structure_constants() {
    for name in SMALL_GROUPS.iter().filter(|n| **n != "S5") {
        let g = builtin::by_name(name).unwrap();
        let t = compute_character_table(&g).unwrap();
        let exact = decompose_by_structure_constants(&StructureConstants::group_algebra(&g)).unwrap();
        assert!(wedderburn_real(&t).unwrap().same_blocks(&exact), "{name}");
    }
}

#[test]
fn division_ring_tensor_table_agrees_with_structure_constants() {
    for a in DivisionRing::ALL {
        for b in DivisionRing::ALL {
            let table = tensor_real(&RealAlgebra::simple(a, 1), &RealAlgebra::simple(b, 1)).unwrap();
            let sc = StructureConstants::division_ring(a).tensor(&StructureConstants::division_ring(b));
            let exact = decompose_by_structure_constants(&sc).unwrap();
            assert!(table.same_blocks(&exact), "{a:?} ⊗ {b:?}: {table} vs {exact}");
        }
    }
}

#[test]
fn tensor_with_matrix_algebra_scales_size() {
    let m2 = StructureConstants::matrix_units(2);
    let h = StructureConstants::division_ring(DivisionRing::H);
    let exact = decompose_by_structure_constants(&m2.tensor(&h)).unwrap();
    assert!(exact.same_blocks(&RealAlgebra::simple(DivisionRing::H, 2)));
}

/// Cellular cochains of `ℝP^n` with coefficients twisted by the deck sign:
/// `d^k = 1 + (-1)^k` on each `ℤ`.
fn twisted_rp_oracle(n: usize, k: usize) -> FgAbGroup {
    let d = |j: usize| -> IntMatrix {
        if j > n {
            return IntMatrix::zeros(1, 0);
        }
        let v = if j.is_multiple_of(2) { 2 } else { 0 };
        IntMatrix::from_i64(1, 1, &[v]).unwrap()
    };
    if k > n {
        return FgAbGroup::trivial();
    }
    let outgoing = if k == n { IntMatrix::zeros(0, 1) } else { d(k) };
    let incoming = if k == 0 { IntMatrix::zeros(1, 0) } else { d(k - 1) };
    subquotient(&outgoing, &incoming).unwrap()
}

#[test]
fn twisted_cohomology_of_projective_spaces() {
    let cases = [
        (spaces::circle_antipodal(), 1),
        (spaces::sphere2_antipodal(), 2),
        (spaces::sphere3_antipodal(), 3),
    ];
    for (x, n) in cases {
        for k in 0..=4 {
            assert_eq!(
                x.twisted_cohomology_quotient(k).unwrap(),
                twisted_rp_oracle(n, k),
                "RP^{n}, degree {k}"
            );
        }
        let data = brauer_group(&x).unwrap();
        assert_eq!(data.dd_group, twisted_rp_oracle(n, 3));
        assert!(data.sign_group.is_trivial());
    }
}

#[test]
fn trivial_involution_brauer_data() {
    let torus = brauer_group(&spaces::torus()).unwrap();
    assert_eq!(torus.sign_group, FgAbGroup::cyclic(2));
    assert_eq!(torus.dd_group, FgAbGroup::cyclic(2));
    let pts = brauer_group(&spaces::points(3)).unwrap();
    assert_eq!(pts.sign_group, FgAbGroup::elementary(2, 3));
    assert!(pts.dd_group.is_trivial());
}

/// `KSC` from the long exact sequence of the mapping torus of conjugation on
/// `KU`, written out by hand over one period.
#[test]
fn ksc_matches_hand_les() {
    let hand = GradedGroup::from_groups(&[
        FgAbGroup::free(1),
        FgAbGroup::cyclic(2),
        FgAbGroup::trivial(),
        FgAbGroup::free(1),
        FgAbGroup::free(1),
        FgAbGroup::cyclic(2),
        FgAbGroup::trivial(),
        FgAbGroup::free(1),
    ]);
    assert_eq!(ksc_point(), hand);
    assert_eq!(ksc_point().minimal_period(), 4);
    assert!(ksc_point().rank_sequence().iter().all(|m| *m != Multiplicity::Omega));
}

#[test]
fn cyclic_cohomology_of_sign_module_against_formula() {
    for m in [2u32, 4, 6] {
        let s = CyclicModule::sign(m).unwrap();
        for n in 1..6u32 {
            let expect = if n % 2 == 1 { FgAbGroup::cyclic(2) } else { FgAbGroup::trivial() };
            assert_eq!(s.cohomology(n), expect, "m={m} n={n}");
        }
    }
}
