use serde::Serialize;

use super::{Automorphism, GroupElement, KleinSpace, SpaceError};
use crate::gf2::{independent, rank_kernel_image, BitVec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum RelationKind {
    /// `(x, y) ~ (x + e_i, y)`
    ToroidalTranslation { i: usize },
    /// `(x, y) ~ (x, y + 2e_j)`
    DoubleKleinTranslation { j: usize },
    /// `(x, y) ~ (x, y + c)` for `c` in a basis of the GF(2) kernel of `B`
    /// (see [`KleinSpace::reduced_generators`] for which basis).
    KernelTranslation { c: Vec<i64> },
    /// `(x, y) ~ ((-1)^{B_j} ⊙ x, y + e_j)` for an independent column `j`.
    Flip { j: usize },
}

/// One generating relation `(x, y) ~ element · (x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub kind: RelationKind,
    pub element: GroupElement,
}

impl Relation {
    pub fn describe(&self, space: &KleinSpace) -> String {
        let unit = |i: usize| format!("e{}", i + 1);
        match &self.kind {
            RelationKind::ToroidalTranslation { i } => {
                format!("(x, y) ~ (x + {}, y)", unit(*i))
            }
            RelationKind::DoubleKleinTranslation { j } => {
                format!("(x, y) ~ (x, y + 2{})", unit(*j))
            }
            RelationKind::KernelTranslation { c } => {
                let terms: Vec<String> = c
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(j, _)| unit(j))
                    .collect();
                format!("(x, y) ~ (x, y + {})", terms.join(" + "))
            }
            RelationKind::Flip { j } => {
                let h = space.flip(*j);
                let signs: Vec<&str> = (0..space.k1())
                    .map(|i| if h[(i, i)] < 0 { "-" } else { "+" })
                    .collect();
                format!("(x, y) ~ (({}) ⊙ x, y + {})", signs.join(","), unit(*j))
            }
        }
    }
}

/// Klein coordinates whose `B`-columns coincide, plus the GF(2) rank deficiency.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HiddenTori {
    /// Each class lists ≥ 2 Klein indices with identical columns, ascending.
    pub duplicate_column_classes: Vec<Vec<usize>>,
    /// `k2 − rank(B)` over GF(2).
    pub gf2_rank_deficiency: usize,
}

impl KleinSpace {
    fn diagonal_matrix(&self) -> Result<&crate::gf2::BitMatrix, SpaceError> {
        match &self.spec.automorphism {
            Automorphism::Diagonal(b) => Ok(b),
            Automorphism::Matrices(_) => Err(SpaceError::ModeUnsupported),
        }
    }

    /// `(e_i, 0)` and `(0, e_j)`: the standard generators of the group.
    pub fn unit_generators(&self) -> Vec<GroupElement> {
        let (k1, k2) = (self.k1(), self.k2());
        let mut out = Vec::with_capacity(k1 + k2);
        for i in 0..k1 {
            let mut a = vec![0; k1];
            a[i] = 1;
            out.push(GroupElement::new(a, vec![0; k2]));
        }
        for j in 0..k2 {
            let mut b = vec![0; k2];
            b[j] = 1;
            out.push(GroupElement::new(vec![0; k1], b));
        }
        out
    }

    /// Generators adapted to the kernel and image of `B` over GF(2): `k1`
    /// toroidal translations, `k2` double Klein translations, one translation
    /// per kernel basis vector and one flip per independent column.
    ///
    /// The kernel basis is the greedy minimum-weight one, preferring vectors
    /// whose support is narrow and starts early; for an all-ones `B` this is
    /// the chain `e_1 + e_2, e_2 + e_3, …`.
    pub fn reduced_generators(&self) -> Result<Vec<Relation>, SpaceError> {
        let b = self.diagonal_matrix()?;
        let (k1, k2) = (self.k1(), self.k2());
        let mut rki = rank_kernel_image(b);
        rki.kernel_basis = local_kernel_basis(rki.kernel_basis);
        let mut out = Vec::with_capacity(k1 + k2 + rki.kernel_basis.len() + rki.rank);
        for i in 0..k1 {
            let mut a = vec![0; k1];
            a[i] = 1;
            out.push(Relation {
                kind: RelationKind::ToroidalTranslation { i },
                element: GroupElement::new(a, vec![0; k2]),
            });
        }
        for j in 0..k2 {
            let mut bb = vec![0; k2];
            bb[j] = 2;
            out.push(Relation {
                kind: RelationKind::DoubleKleinTranslation { j },
                element: GroupElement::new(vec![0; k1], bb),
            });
        }
        for c in &rki.kernel_basis {
            let c = c.to_ints();
            out.push(Relation {
                element: GroupElement::new(vec![0; k1], c.clone()),
                kind: RelationKind::KernelTranslation { c },
            });
        }
        for &j in &rki.image_basis_columns {
            let mut bb = vec![0; k2];
            bb[j] = 1;
            out.push(Relation {
                kind: RelationKind::Flip { j },
                element: GroupElement::new(vec![0; k1], bb),
            });
        }
        Ok(out)
    }

    pub fn hidden_tori(&self) -> Result<HiddenTori, SpaceError> {
        let b = self.diagonal_matrix()?;
        let columns: Vec<BitVec> = (0..b.cols()).map(|j| b.column(j)).collect();
        let mut seen = vec![false; columns.len()];
        let mut classes = Vec::new();
        for j in 0..columns.len() {
            if seen[j] {
                continue;
            }
            let class: Vec<usize> = (j..columns.len())
                .filter(|&k| columns[k] == columns[j])
                .collect();
            for &k in &class {
                seen[k] = true;
            }
            if class.len() > 1 {
                classes.push(class);
            }
        }
        Ok(HiddenTori {
            duplicate_column_classes: classes,
            gf2_rank_deficiency: b.cols() - rank_kernel_image(b).rank,
        })
    }
}

/// Above this kernel dimension the row-reduced basis is kept as is.
const MAX_ENUMERATED_KERNEL: usize = 16;

/// Matroid greedy over all nonzero kernel vectors ordered by
/// `(weight, last − first support index, first support index, bits)`.
fn local_kernel_basis(basis: Vec<BitVec>) -> Vec<BitVec> {
    let d = basis.len();
    if d <= 1 || d > MAX_ENUMERATED_KERNEL {
        return basis;
    }
    let mut all: Vec<(usize, usize, usize, Vec<i64>, BitVec)> = (1u32..(1 << d))
        .map(|mask| {
            let mut v = BitVec::zeros(basis[0].len());
            for (i, b) in basis.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v.xor_assign(b);
                }
            }
            let ones: Vec<usize> = v.ones().collect();
            let (first, last) = (ones[0], ones[ones.len() - 1]);
            let bits: Vec<i64> = v.to_ints().iter().map(|x| 1 - x).collect();
            (ones.len(), last - first, first, bits, v)
        })
        .collect();
    all.sort_by(|a, b| (a.0, a.1, a.2, &a.3).cmp(&(b.0, b.1, b.2, &b.3)));
    let mut chosen: Vec<BitVec> = Vec::with_capacity(d);
    for (.., v) in all {
        chosen.push(v);
        if !independent(&chosen) {
            chosen.pop();
        } else if chosen.len() == d {
            break;
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::super::{KleinSpec, Point};
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::Xoshiro256StarStar;

    fn space(b: &[Vec<i64>]) -> KleinSpace {
        KleinSpec::diagonal(b).unwrap().validate().unwrap()
    }

    fn random_point(s: &KleinSpace, rng: &mut impl Rng) -> Point {
        Point::new(
            (0..s.k1()).map(|_| rng.random_range(-2.0..2.0)).collect(),
            (0..s.k2()).map(|_| rng.random_range(-2.0..2.0)).collect(),
        )
    }

    #[test]
    fn identity_b_has_no_kernel_family() {
        // B = I is rejected as a product space for k2 > 1; the k2 = 1 case
        // still exercises an injective B.
        let s = space(&[vec![1]]);
        let rels = s.reduced_generators().unwrap();
        assert!(!rels
            .iter()
            .any(|r| matches!(r.kind, RelationKind::KernelTranslation { .. })));
        assert_eq!(
            rels.iter()
                .filter(|r| matches!(r.kind, RelationKind::Flip { .. }))
                .count(),
            1
        );
        let s = space(&[vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]);
        let rels = s.reduced_generators().unwrap();
        assert_eq!(
            rels.iter()
                .filter(|r| matches!(r.kind, RelationKind::Flip { .. }))
                .count(),
            3
        );
        assert!(!rels
            .iter()
            .any(|r| matches!(r.kind, RelationKind::KernelTranslation { .. })));
    }

    #[test]
    fn kernel_generator_for_two_by_three() {
        let s = space(&[vec![1, 0, 1], vec![0, 1, 1]]);
        let kernels: Vec<_> = s
            .reduced_generators()
            .unwrap()
            .into_iter()
            .filter_map(|r| match r.kind {
                RelationKind::KernelTranslation { c } => Some(c),
                _ => None,
            })
            .collect();
        assert_eq!(kernels, vec![vec![1, 1, 1]]);
    }

    #[test]
    fn relation_counts() {
        let s = space(&[vec![1, 1, 1], vec![1, 1, 1]]);
        let rels = s.reduced_generators().unwrap();
        // k1 + k2 + dim ker + rank = 2 + 3 + 2 + 1
        assert_eq!(rels.len(), 8);
    }

    #[test]
    fn full_coupling_kernel_is_a_chain() {
        let s = space(&[vec![1; 5], vec![1; 5]]);
        let kernels: Vec<_> = s
            .reduced_generators()
            .unwrap()
            .into_iter()
            .filter_map(|r| match r.kind {
                RelationKind::KernelTranslation { c } => Some(c),
                _ => None,
            })
            .collect();
        assert_eq!(
            kernels,
            vec![
                vec![1, 1, 0, 0, 0],
                vec![0, 1, 1, 0, 0],
                vec![0, 0, 1, 1, 0],
                vec![0, 0, 0, 1, 1],
            ]
        );
    }

    #[test]
    fn relations_hold_at_random_points() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(11);
        for b in [
            vec![vec![1]],
            vec![vec![1, 1, 1]],
            vec![vec![1, 0, 1], vec![0, 1, 1]],
            vec![vec![1, 1], vec![1, 0], vec![0, 1]],
        ] {
            let s = space(&b);
            for rel in s.reduced_generators().unwrap() {
                for _ in 0..50 {
                    let p = random_point(&s, &mut rng);
                    let q = s.act(&rel.element, &p);
                    assert!(s.equivalent(&p, &q, 1e-12), "{}", rel.describe(&s));
                    // Kernel translations leave x untouched, as stated.
                    if let RelationKind::KernelTranslation { .. } = rel.kind {
                        assert_eq!(q.x, p.x);
                    }
                }
            }
        }
    }

    #[test]
    fn hidden_tori_examples() {
        let s = space(&[vec![1, 1, 1, 1]]);
        let h = s.hidden_tori().unwrap();
        assert_eq!(h.duplicate_column_classes, vec![vec![0, 1, 2, 3]]);
        assert_eq!(h.gf2_rank_deficiency, 3);

        let s = space(&[vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]);
        let h = s.hidden_tori().unwrap();
        assert!(h.duplicate_column_classes.is_empty());
        assert_eq!(h.gf2_rank_deficiency, 0);

        let s = space(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(s.hidden_tori().unwrap().gf2_rank_deficiency, 1);
    }

    #[test]
    fn hidden_torus_translations_are_symmetries() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(5);
        let s = space(&[vec![1, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]);
        let h = s.hidden_tori().unwrap();
        assert_eq!(h.duplicate_column_classes, vec![vec![0, 1]]);
        for class in &h.duplicate_column_classes {
            for (ii, &i) in class.iter().enumerate() {
                for &j in &class[ii + 1..] {
                    let mut b = vec![0; s.k2()];
                    b[i] = 1;
                    b[j] = 1;
                    for _ in 0..100 {
                        let p = random_point(&s, &mut rng);
                        let shifted = Point::new(
                            p.x.clone(),
                            p.y.iter().zip(&b).map(|(v, &d)| v + d as f64).collect(),
                        );
                        assert!(s.equivalent(&p, &shifted, 1e-12));
                    }
                }
            }
        }
    }

    #[test]
    fn matrices_mode_is_unsupported() {
        let s = KleinSpec::matrices(2, &[vec![vec![0, 1], vec![1, 0]]])
            .unwrap()
            .validate()
            .unwrap();
        assert_eq!(s.reduced_generators().unwrap_err(), SpaceError::ModeUnsupported);
        assert_eq!(s.hidden_tori().unwrap_err(), SpaceError::ModeUnsupported);
    }
}
