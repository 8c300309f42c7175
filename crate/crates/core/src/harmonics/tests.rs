use std::f64::consts::{PI, TAU};

use num_traits::Zero;
use proptest::prelude::*;

use super::rational::{rank_of, rat, ratio, RatMatrix, Rational};
use super::*;
use crate::fields::{
    check_scalar_symmetry, check_vector_symmetry, FnScalar, FnVector, ScalarField, SymmetryCheck,
    VectorField,
};
use crate::rng;
use crate::space::{KleinSpec, Point};

fn k11() -> KleinSpace {
    KleinSpec::standard_klein().validate().unwrap()
}

fn transpose_flip() -> KleinSpace {
    KleinSpec::matrices(
        2,
        &[vec![vec![-1, 0], vec![0, -1]], vec![vec![0, 1], vec![1, 0]]],
    )
    .unwrap()
    .validate()
    .unwrap()
}

fn double_flip() -> KleinSpace {
    KleinSpec::matrices(
        2,
        &[vec![vec![-1, 0], vec![0, 1]], vec![vec![1, 0], vec![0, -1]]],
    )
    .unwrap()
    .validate()
    .unwrap()
}

fn sample_spaces() -> Vec<KleinSpace> {
    vec![
        k11(),
        KleinSpec::diagonal(&[vec![1, 1]]).unwrap().validate().unwrap(),
        KleinSpec::diagonal(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap().validate().unwrap(),
        KleinSpec::diagonal(&[vec![1], vec![1]]).unwrap().validate().unwrap(),
        transpose_flip(),
        double_flip(),
    ]
}

fn block<'a>(blocks: &'a [FourierBlock], zeta: &[i64], lambda: &[i64]) -> &'a FourierBlock {
    blocks
        .iter()
        .find(|b| b.zeta == zeta && b.orbit.iter().any(|l| l == lambda))
        .unwrap()
}

/// `L*` entry by entry from the `Z_2^{k2}` formula, without the general
/// affine machinery.
fn direct_operator(space: &KleinSpace, b: &FourierBlock, frame: Frame) -> RatMatrix {
    let d = match frame {
        Frame::Scalar => 1,
        Frame::Toroidal => space.k1(),
    };
    let m = b.orbit.len() * d;
    let mut op = RatMatrix::identity(m);
    let weight = ratio(1, 1 << space.k2());
    for beta in space.flip_group() {
        let phi = space.holonomy(&beta);
        let zb: i64 = b.zeta.iter().zip(&beta).map(|(z, b)| z * b).sum();
        let s = if zb.rem_euclid(2) == 0 { 1 } else { -1 };
        for (r, lambda) in b.orbit.iter().enumerate() {
            let target = phi.transpose().mul_vec(lambda);
            let c = b.orbit.iter().position(|l| *l == target).unwrap();
            for i in 0..d {
                for j in 0..d {
                    let chi = match frame {
                        Frame::Scalar => 1,
                        Frame::Toroidal => phi[(i, j)],
                    };
                    op[(r * d + i, c * d + j)] -= &weight * rat(s * chi);
                }
            }
        }
    }
    op
}

#[test]
fn standard_klein_orbits() {
    let blocks = orbit_blocks(&k11(), 2, &[vec![0]]);
    let orbits: Vec<_> = blocks.iter().map(|b| b.orbit.clone()).collect();
    assert_eq!(orbits, vec![vec![vec![-2], vec![2]], vec![vec![-1], vec![1]], vec![vec![0]]]);
    assert!(blocks.iter().all(|b| b.complete));
}

#[test]
fn transpose_flip_orbits() {
    let blocks = orbit_blocks(&transpose_flip(), 1, &[vec![1, 1]]);
    let orbits: Vec<_> = blocks.iter().map(|b| b.orbit.clone()).collect();
    assert_eq!(
        orbits,
        vec![
            vec![vec![-1, -1], vec![1, 1]],
            vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]],
            vec![vec![-1, 1], vec![1, -1]],
            vec![vec![0, 0]],
        ]
    );
}

#[test]
fn identity_automorphism_gives_singletons() {
    let s = KleinSpec::matrices(2, &[vec![vec![1, 0], vec![0, 1]]])
        .unwrap()
        .validate()
        .unwrap();
    let blocks = orbit_blocks(&s, 1, &[vec![0], vec![1]]);
    assert_eq!(blocks.len(), 18);
    assert!(blocks.iter().all(|b| b.orbit.len() == 1));
}

#[test]
fn truncated_orbits_are_flagged_and_refused() {
    // A unimodular involution that shears frequencies out of the box.
    let s = KleinSpec::matrices(2, &[vec![vec![1, 0], vec![1, -1]]])
        .unwrap()
        .validate()
        .unwrap();
    let blocks = orbit_blocks(&s, 1, &[vec![0]]);
    let bad = blocks.iter().find(|b| !b.complete).expect("some orbit leaves the box");
    assert!(matches!(
        scalar_kernel_basis(bad.clone(), &s),
        Err(HarmonicsError::IncompleteOrbit { .. })
    ));
    let basis = compute_basis(&s, BasisKind::Scalar, 1, 1).unwrap();
    assert!(basis.incomplete_blocks > 0);
}

#[test]
fn torus_kernel_is_whole_block() {
    let act = TorusAction::trivial(3, 1);
    let modes = vec![vec![1, 2, 3]];
    let op = act.dual_operator(&modes).unwrap();
    assert_eq!(op.nullspace().len(), 1);
    let act = TorusAction::trivial(2, 2);
    let op = act.dual_operator(&[vec![0, 1], vec![1, 0]]).unwrap();
    assert_eq!(op.nullspace().len(), 4);
}

#[test]
fn standard_klein_kernel_parity() {
    let s = k11();
    let zetas = zeta_box(1, 3);
    for b in orbit_blocks(&s, 3, &zetas) {
        let b = scalar_kernel_basis(b, &s).unwrap();
        let z = b.zeta[0];
        if b.orbit.len() == 1 {
            let expected = usize::from(z.rem_euclid(2) == 0);
            assert_eq!(b.kernel_basis.len(), expected, "λ = 0, ζ = {z}");
        } else {
            assert_eq!(b.kernel_basis.len(), 1);
            let v = &b.kernel_basis[0];
            // orbit = [−λ, λ]
            let sign = if z.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
            assert_eq!(v[0], &v[1] * &sign);
        }
    }
}

#[test]
fn standard_klein_operator_closed_form() {
    let s = k11();
    for z in -3..=3 {
        let b = &orbit_blocks(&s, 1, &[vec![z]])[0];
        let b = scalar_kernel_basis(b.clone(), &s).unwrap();
        let sgn = if z.rem_euclid(2) == 0 { 1 } else { -1 };
        let expected = RatMatrix::from_rows(&[
            vec![ratio(1, 2), ratio(-sgn, 2)],
            vec![ratio(-sgn, 2), ratio(1, 2)],
        ]);
        assert_eq!(b.operator_matrix.unwrap(), expected);
    }
}

#[test]
fn transpose_flip_matrix_in_reference_order() {
    let s = transpose_flip();
    let order: Vec<Vec<i64>> = vec![
        vec![0, 0],
        vec![-1, -1],
        vec![1, 1],
        vec![-1, 1],
        vec![1, -1],
        vec![-1, 0],
        vec![0, -1],
        vec![0, 1],
        vec![1, 0],
    ];
    let modes: Vec<Vec<i64>> = order.iter().map(|l| vec![l[0], l[1], 1, 1]).collect();
    let op = klein_action(&s, Frame::Scalar).dual_operator(&modes).unwrap();
    let quarter = |rows: [[i64; 9]; 9]| {
        RatMatrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&v| ratio(v, 4)).collect())
                .collect::<Vec<_>>(),
        )
    };
    let expected = quarter([
        [4, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 4, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 4, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 2, 2, 0, 0, 0, 0],
        [0, 0, 0, 2, 2, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 3, 1, -1, 1],
        [0, 0, 0, 0, 0, 1, 3, 1, -1],
        [0, 0, 0, 0, 0, -1, 1, 3, 1],
        [0, 0, 0, 0, 0, 1, -1, 1, 3],
    ]);
    assert_eq!(op, expected);
    assert_eq!(op.nullspace().len(), 2);
}

#[test]
fn transpose_flip_kernel_vectors() {
    let s = transpose_flip();
    let blocks: Vec<FourierBlock> = orbit_blocks(&s, 1, &[vec![1, 1]])
        .into_iter()
        .map(|b| scalar_kernel_basis(b, &s).unwrap())
        .collect();
    let dims: usize = blocks.iter().map(|b| b.kernel_basis.len()).sum();
    assert_eq!(dims, 2);
    let anti = block(&blocks, &[1, 1], &[1, -1]);
    // orbit [(-1, 1), (1, -1)]
    assert_eq!(anti.kernel_basis, vec![vec![rat(-1), rat(1)]]);
    let four = block(&blocks, &[1, 1], &[1, 0]);
    // orbit [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert_eq!(four.kernel_basis, vec![vec![rat(-1), rat(1), rat(-1), rat(1)]]);
}

#[test]
fn double_flip_kernel_is_sin_sin() {
    let s = double_flip();
    let blocks: Vec<FourierBlock> = orbit_blocks(&s, 1, &[vec![1, 1]])
        .into_iter()
        .map(|b| scalar_kernel_basis(b, &s).unwrap())
        .collect();
    let nonzero: Vec<_> = blocks.iter().filter(|b| !b.kernel_basis.is_empty()).collect();
    assert_eq!(nonzero.len(), 1);
    let b = nonzero[0];
    assert_eq!(b.orbit, vec![vec![-1, -1], vec![-1, 1], vec![1, -1], vec![1, 1]]);
    // sin(2πx1) sin(2πx2) = −¼ Σ ε1 ε2 e^{2πi(ε1 x1 + ε2 x2)}
    assert_eq!(b.kernel_basis, vec![vec![rat(1), rat(-1), rat(-1), rat(1)]]);
}

#[test]
fn vector_kernel_on_standard_klein() {
    let s = k11();
    for z in -3..=3 {
        for b in orbit_blocks(&s, 3, &[vec![z]]) {
            let b = vector_kernel_basis(b, &s).unwrap();
            let even = z.rem_euclid(2) == 0;
            if b.orbit.len() == 1 {
                // X = c·e^{iπζy} needs ζ odd.
                assert_eq!(b.kernel_basis.len(), usize::from(!even));
            } else {
                assert_eq!(b.kernel_basis.len(), 1);
                let v = &b.kernel_basis[0];
                let sign = if even { rat(-1) } else { rat(1) };
                assert_eq!(v[0], &v[1] * &sign, "ζ = {z}");
            }
            let y = scalar_kernel_basis(b.clone(), &s).unwrap();
            let expected = if b.orbit.len() == 1 { usize::from(even) } else { 1 };
            assert_eq!(y.kernel_basis.len(), expected);
        }
    }
}

#[test]
fn general_operator_matches_direct_formula() {
    for s in sample_spaces() {
        for frame in [Frame::Scalar, Frame::Toroidal] {
            for b in orbit_blocks(&s, 2, &zeta_box(s.k2(), 2)) {
                if !b.complete {
                    continue;
                }
                let solved = solve_block(b.clone(), &s, frame).unwrap();
                assert_eq!(solved.operator_matrix.unwrap(), direct_operator(&s, &b, frame));
            }
        }
    }
}

#[test]
fn projection_and_kernel_identities() {
    for s in sample_spaces() {
        for frame in [Frame::Scalar, Frame::Toroidal] {
            for b in orbit_blocks(&s, 2, &zeta_box(s.k2(), 2)) {
                if !b.complete {
                    continue;
                }
                let b = solve_block(b, &s, frame).unwrap();
                let l = b.operator_matrix.as_ref().unwrap();
                let p = RatMatrix::identity(l.rows()).sub(l);
                assert_eq!(p.mul(&p), p);
                for v in &b.kernel_basis {
                    assert!(l.mul_vec(v).iter().all(Zero::is_zero));
                }
                for (i, u) in b.kernel_basis.iter().enumerate() {
                    for w in &b.kernel_basis[i + 1..] {
                        assert!(rational::dot(u, w).is_zero());
                    }
                }
                assert_eq!(b.kernel_basis.len(), l.rows() - l.rank());
            }
        }
    }
}

fn scalar_fn(f: &RealBasisFunction) -> impl ScalarField + '_ {
    FnScalar(move |p: &Point| f.eval_scalar(p))
}

fn toroidal_fn<'a>(f: &'a RealBasisFunction, k2: usize) -> impl VectorField + 'a {
    FnVector(move |p: &Point| (f.eval(p), vec![0.0; k2]))
}

#[test]
fn realized_functions_are_symmetric_and_counted() {
    let cfg = SymmetryCheck::new(100, 1e-10);
    for s in sample_spaces() {
        let lmax = if s.k1() > 1 { 1 } else { 3 };
        let basis = compute_basis(&s, BasisKind::Vector, lmax, 2).unwrap();
        for section in &basis.sections {
            let kernel_dim: usize = section.blocks.iter().map(|b| b.kernel_basis.len()).sum();
            // A conjugation-closed box: complex kernel dimension equals the real
            // dimension of the realized span.
            assert_eq!(section.functions.len(), kernel_dim);
            for f in &section.functions {
                let r = match section.frame {
                    Frame::Scalar => check_scalar_symmetry(&scalar_fn(f), &s, &cfg),
                    Frame::Toroidal => check_vector_symmetry(&toroidal_fn(f, s.k2()), &s, &cfg),
                };
                assert!(r.passed, "{} on {:?}: {}", f.expression(), s.spec(), r.max_residual);
            }
        }
    }
}

#[test]
fn realized_functions_are_independent() {
    let mut r = rng::seeded(17);
    for s in sample_spaces() {
        let basis = compute_basis(&s, BasisKind::Scalar, 1, 1).unwrap();
        let fs = &basis.sections[0].functions;
        let pts: Vec<Point> = (0..fs.len() + 8)
            .map(|_| {
                Point::new(
                    (0..s.k1()).map(|_| rng::unit(&mut r)).collect(),
                    (0..s.k2()).map(|_| 2.0 * rng::unit(&mut r)).collect(),
                )
            })
            .collect();
        // Sampled values, rounded to rationals, have full column rank.
        let rows: Vec<Vec<Rational>> = pts
            .iter()
            .map(|p| {
                fs.iter()
                    .map(|f| {
                        let v = (f.eval_scalar(p) * 1e9).round() as i64;
                        ratio(v, 1_000_000_000)
                    })
                    .collect()
            })
            .collect();
        assert_eq!(rank_of(&rows), fs.len());
    }
}

#[test]
fn standard_klein_realizations() {
    let s = k11();
    let blocks: Vec<FourierBlock> = orbit_blocks(&s, 1, &zeta_box(1, 2))
        .into_iter()
        .map(|b| scalar_kernel_basis(b, &s).unwrap())
        .collect();
    let fs = realize(&blocks, &s).unwrap();
    let find = |z: i64, part: Part, lam: i64| {
        fs.iter()
            .find(|f| f.zeta == vec![z] && f.part == part && f.terms.iter().any(|t| t.lambda == vec![lam]))
            .unwrap()
    };
    let p = Point::new(vec![0.17], vec![0.61]);
    let (x, y) = (p.x[0], p.y[0]);
    // ζ = 2: cos(2πx)·{cos, sin}(2πy)
    let c = find(2, Part::Cos, 1);
    let ratio_c = c.eval_scalar(&p) / ((TAU * x).cos() * (TAU * y).cos());
    let q = Point::new(vec![0.41], vec![1.3]);
    assert!((c.eval_scalar(&q) - ratio_c * (TAU * 0.41).cos() * (TAU * 1.3).cos()).abs() < 1e-12);
    // ζ = 1: sin(2πx)·{cos, sin}(πy)
    let f = find(1, Part::Cos, 1);
    let k = f.eval_scalar(&p) / ((TAU * x).sin() * (PI * y).sin());
    assert!((f.eval_scalar(&q) - k * (TAU * 0.41).sin() * (PI * 1.3).sin()).abs() < 1e-12);
    // λ = 0, ζ = 0: the constant.
    let one = fs.iter().find(|f| f.zeta == vec![0] && f.terms.iter().all(|t| t.lambda == vec![0])).unwrap();
    assert_eq!(one.expression(), "1");
}

#[test]
fn missing_conjugate_is_reported() {
    let s = k11();
    let blocks: Vec<FourierBlock> = orbit_blocks(&s, 1, &[vec![1]])
        .into_iter()
        .map(|b| scalar_kernel_basis(b, &s).unwrap())
        .collect();
    assert!(matches!(
        realize(&blocks, &s),
        Err(HarmonicsError::ConjugateNotInBox { .. })
    ));
}

#[test]
fn symmetrize_kills_odd_mode_and_fixes_symmetric() {
    let s = k11();
    let odd = symmetrize_scalar(FnScalar(|p: &Point| (TAU * p.x[0]).sin()), &s);
    let sym = FnScalar(|p: &Point| (TAU * p.x[0]).cos() * (TAU * p.y[0]).cos() + (TAU * p.x[0]).sin() * (PI * p.y[0]).sin());
    let fixed = symmetrize_scalar(&sym, &s);
    let mut r = rng::seeded(4);
    for _ in 0..200 {
        let p = Point::new(vec![rng::uniform(&mut r, -2.0, 2.0)], vec![rng::uniform(&mut r, -2.0, 2.0)]);
        assert!(odd.eval(&p).abs() <= 1e-12);
        assert!((fixed.eval(&p) - sym.eval(&p)).abs() <= 1e-12);
    }
}

#[test]
fn symmetrize_is_idempotent_and_symmetric() {
    let cfg = SymmetryCheck::new(100, 1e-10);
    for s in sample_spaces() {
        let raw = FnScalar(|p: &Point| {
            (TAU * (p.x[0] + 0.3)).sin() * (PI * p.y[0] + 0.2).cos() + p.x.iter().map(|x| (TAU * 2.0 * x).cos()).sum::<f64>()
        });
        let once = symmetrize_scalar(&raw, &s);
        let twice = symmetrize_scalar(&once, &s);
        assert!(check_scalar_symmetry(&once, &s, &cfg).passed);
        let mut r = rng::seeded(8);
        for _ in 0..100 {
            let p = Point::new(
                (0..s.k1()).map(|_| rng::uniform(&mut r, -1.0, 1.0)).collect(),
                (0..s.k2()).map(|_| rng::uniform(&mut r, -1.0, 1.0)).collect(),
            );
            assert!((once.eval(&p) - twice.eval(&p)).abs() <= 1e-12);
        }

        let k1 = s.k1();
        let k2 = s.k2();
        let raw_v = FnVector(move |p: &Point| {
            (
                (0..k1).map(|i| (TAU * p.x[i]).sin() + (PI * p.y[0] + i as f64).cos()).collect(),
                (0..k2).map(|j| (TAU * p.x[0]).cos() * (PI * p.y[j]).sin()).collect(),
            )
        });
        let v1 = symmetrize_vector(&raw_v, &s);
        let v2 = symmetrize_vector(&v1, &s);
        assert!(check_vector_symmetry(&v1, &s, &cfg).passed);
        for _ in 0..100 {
            let p = Point::new(
                (0..k1).map(|_| rng::uniform(&mut r, -1.0, 1.0)).collect(),
                (0..k2).map(|_| rng::uniform(&mut r, -1.0, 1.0)).collect(),
            );
            let (a, b) = (v1.eval_flat(&p), v2.eval_flat(&p));
            assert!(a.iter().zip(&b).all(|(u, v)| (u - v).abs() <= 1e-12));
        }
    }
}

#[test]
fn figure_field_is_a_fixed_point() {
    let s = k11();
    let f = FnVector(|p: &Point| {
        let (x, y) = (p.x[0], p.y[0]);
        (
            vec![(TAU * x).cos() * (PI * y).cos() + (TAU * x).sin() * (TAU * y).sin()],
            vec![(TAU * x).sin() * (PI * y).sin() + (TAU * x).cos() * (TAU * y).cos()],
        )
    });
    let sym = symmetrize_vector(&f, &s);
    let mut r = rng::seeded(12);
    for _ in 0..200 {
        let p = Point::new(vec![rng::uniform(&mut r, -2.0, 2.0)], vec![rng::uniform(&mut r, -2.0, 2.0)]);
        let (a, b) = (f.eval_flat(&p), sym.eval_flat(&p));
        assert!(a.iter().zip(&b).all(|(u, v)| (u - v).abs() <= 1e-12));
    }
}

/// Symmetrizing `cos θ_λ` pointwise agrees with `Re Σ (P* e_λ)(μ) e^{iθ_μ}`,
/// and `P* e_λ` lies in the span of the block's kernel basis.
#[test]
fn symmetrized_mode_lies_in_kernel_span() {
    for s in sample_spaces() {
        for b in orbit_blocks(&s, 1, &zeta_box(s.k2(), 1)) {
            if !b.complete {
                continue;
            }
            let b = scalar_kernel_basis(b, &s).unwrap();
            let l = b.operator_matrix.clone().unwrap();
            let p = RatMatrix::identity(l.rows()).sub(&l);
            for (i, lambda) in b.orbit.iter().enumerate() {
                let mut e = vec![Rational::zero(); b.orbit.len()];
                e[i] = rat(1);
                let pe = p.mul_vec(&e);
                let mut span = b.kernel_basis.clone();
                let before = rank_of(&span);
                span.push(pe.clone());
                assert_eq!(rank_of(&span), before, "P*e escapes the kernel span");

                let zeta = b.zeta.clone();
                let lam = lambda.clone();
                let mode = move |p: &Point| {
                    let t: f64 = TAU * lam.iter().zip(&p.x).map(|(&l, x)| l as f64 * x).sum::<f64>()
                        + PI * zeta.iter().zip(&p.y).map(|(&z, y)| z as f64 * y).sum::<f64>();
                    t.cos()
                };
                let sym = symmetrize_scalar(FnScalar(mode), &s);
                let pt = Point::new(vec![0.123; s.k1()], (0..s.k2()).map(|j| 0.37 + 0.2 * j as f64).collect());
                let expected: f64 = b
                    .orbit
                    .iter()
                    .zip(&pe)
                    .map(|(mu, c)| {
                        let t: f64 = TAU * mu.iter().zip(&pt.x).map(|(&l, x)| l as f64 * x).sum::<f64>()
                            + PI * b.zeta.iter().zip(&pt.y).map(|(&z, y)| z as f64 * y).sum::<f64>();
                        rational::rat_to_f64(c) * t.cos()
                    })
                    .sum();
                assert!((sym.eval(&pt) - expected).abs() <= 1e-10);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_diagonal_spaces_satisfy_identities(
        bits in prop::collection::vec(prop::bool::ANY, 4),
        zeta in prop::collection::vec(-2i64..=2, 2),
    ) {
        let b = vec![
            vec![i64::from(bits[0]) | 1, i64::from(bits[1])],
            vec![i64::from(bits[2]), i64::from(bits[3]) | 1],
        ];
        let Ok(s) = KleinSpec::diagonal(&b).unwrap().validate() else {
            return Ok(());
        };
        for frame in [Frame::Scalar, Frame::Toroidal] {
            for blk in orbit_blocks(&s, 2, &[zeta.clone()]) {
                let blk = solve_block(blk, &s, frame).unwrap();
                let l = blk.operator_matrix.as_ref().unwrap();
                let p = RatMatrix::identity(l.rows()).sub(l);
                prop_assert_eq!(p.mul(&p), p);
                for v in &blk.kernel_basis {
                    prop_assert!(l.mul_vec(v).iter().all(Zero::is_zero));
                }
            }
        }
    }
}
