//! Affine subspaces `L = {x : Ax = b}` of affine n-space over a finite
//! field, their position relative to the coordinate hyperplanes, and point
//! enumeration.
//!
//! Throughout, `A` is an `m x n` matrix of full rank `m`, the subspace has
//! dimension `d = n - m`, and `H_I` denotes the intersection of the
//! coordinate hyperplanes `{x_i = 0}` for `i` in `I` (indices 0-based).
//! The empty set has dimension -1 by convention.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{FpMat, Rref};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PositionClass {
    /// `dim(L cap H_I) = d - |I|` for every `I` with `|I| <= d + 1`.
    GeneralPosition,
    /// `dim(L cap H_I) <= d - |I|` for every `I` with `|I| <= d + 1`.
    GeneralAmongTranslates,
    Neither,
}

impl PositionClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PositionClass::GeneralPosition => "general-position",
            PositionClass::GeneralAmongTranslates => "general-among-translates",
            PositionClass::Neither => "neither",
        }
    }
}

/// Outcome of classifying a subspace against the coordinate hyperplanes.
#[derive(Clone, Debug)]
pub struct PositionReport {
    pub class: PositionClass,
    /// `a_counts[j-1]` is the number of `I` with `|I| = j` and
    /// `L cap H_I` nonempty, for `j = 1..=d`.
    pub a_counts: Vec<u64>,
    /// Predicted polynomial degree
    /// `D_L = (-1)^d + sum_j (-1)^(d+j) a_j`.
    pub d_l: i64,
    /// A violating index set (dim too large), present only when `Neither`.
    pub witness: Option<Vec<usize>>,
}

#[derive(Clone)]
pub struct AffineSubspace {
    field: Arc<Field>,
    a_mat: FpMat,
    b_vec: Vec<Elem>,
}

impl std::fmt::Debug for AffineSubspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "AffineSubspace(n={}, m={}, q={})",
            self.n(),
            self.m(),
            self.field.order()
        )
    }
}

impl AffineSubspace {
    /// Wraps a full-rank system `Ax = b`.
    pub fn new(a_mat: FpMat, b_vec: Vec<Elem>) -> Result<AffineSubspace> {
        let m = a_mat.rows();
        let n = a_mat.cols();
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument(
                "subspace needs at least one equation and one variable".into(),
            ));
        }
        if b_vec.len() != m {
            return Err(Error::InvalidArgument(format!(
                "right-hand side has {} entries, expected {m}",
                b_vec.len()
            )));
        }
        let rank = a_mat.rank();
        if rank < m {
            return Err(Error::RankDeficient { rank, required: m });
        }
        let field = Arc::clone(a_mat.field());
        Ok(AffineSubspace {
            field,
            a_mat,
            b_vec,
        })
    }

    /// Convenience constructor from raw element codes.
    pub fn from_codes(field: Arc<Field>, rows: &[Vec<u64>], b: &[u64]) -> Result<AffineSubspace> {
        let a_mat = FpMat::from_rows(Arc::clone(&field), rows)?;
        let b_vec = b
            .iter()
            .map(|&c| field.elem(c))
            .collect::<Result<Vec<Elem>>>()?;
        AffineSubspace::new(a_mat, b_vec)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn matrix(&self) -> &FpMat {
        &self.a_mat
    }

    pub fn rhs(&self) -> &[Elem] {
        &self.b_vec
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.a_mat.cols()
    }

    /// Codimension (number of equations).
    pub fn m(&self) -> usize {
        self.a_mat.rows()
    }

    /// Dimension `d = n - m`.
    pub fn dim(&self) -> usize {
        self.n() - self.m()
    }

    pub fn contains(&self, x: &[Elem]) -> bool {
        self.a_mat.mat_vec(x) == self.b_vec
    }

    /// Dimension of `L cap H_I` where `H_I = {x_i = 0 : i in I}`; -1 when the
    /// intersection is empty. Indices are 0-based and must be distinct.
    pub fn dim_intersection(&self, zero_set: &[usize]) -> i64 {
        let n = self.n();
        debug_assert!(zero_set.iter().all(|&i| i < n));
        let mut stacked = self.a_mat.clone();
        let mut rhs = self.b_vec.clone();
        for &i in zero_set {
            let mut unit = FpMat::zeros(Arc::clone(&self.field), 1, n);
            unit.set(0, i, Elem::ONE);
            stacked = stacked.vstack(&unit);
            rhs.push(Elem::ZERO);
        }
        let aug = stacked.augment_col(&rhs);
        let Rref { rank, pivots, .. } = aug.rref();
        // A pivot in the last column marks an inconsistent system.
        if pivots.last() == Some(&n) {
            return -1;
        }
        // Consistent: solution set dimension is n minus the coefficient rank.
        let coeff_rank = rank;
        n as i64 - coeff_rank as i64
    }

    /// Classifies the position of `L` by brute-force intersection with all
    /// coordinate sets of size up to `d + 1`, and computes the degree
    /// invariant `D_L` from the nonempty-intersection counts.
    pub fn classify_position(&self) -> PositionReport {
        let n = self.n();
        let d = self.dim();
        let mut a_counts = vec![0u64; d];
        let mut all_eq = true;
        let mut all_le = true;
        let mut witness: Option<Vec<usize>> = None;
        let max_j = (d + 1).min(n);
        for j in 1..=max_j {
            for subset in Combinations::new(n, j) {
                let dim = self.dim_intersection(&subset);
                let expected = d as i64 - j as i64;
                if dim != expected {
                    all_eq = false;
                }
                if dim > expected {
                    all_le = false;
                    if witness.is_none() {
                        witness = Some(subset.clone());
                    }
                }
                if j <= d && dim >= 0 {
                    a_counts[j - 1] += 1;
                }
            }
        }
        let class = if all_eq {
            PositionClass::GeneralPosition
        } else if all_le {
            PositionClass::GeneralAmongTranslates
        } else {
            PositionClass::Neither
        };
        let mut d_l = if d % 2 == 0 { 1i64 } else { -1i64 };
        for (jm1, &aj) in a_counts.iter().enumerate() {
            let j = jm1 + 1;
            let sign = if (d + j) % 2 == 0 { 1i64 } else { -1i64 };
            d_l += sign * aj as i64;
        }
        PositionReport {
            class,
            a_counts,
            d_l,
            witness,
        }
    }

    /// Determinant test: `L` is in general position exactly when every
    /// `m x m` minor of the augmented matrix `(A|b)` is nonzero.
    pub fn minors_criterion(&self) -> bool {
        let m = self.m();
        let aug = self.a_mat.augment_col(&self.b_vec);
        for cols in Combinations::new(self.n() + 1, m) {
            let sq = aug.select_cols(&cols);
            if sq.det().expect("selected minor is square").is_zero() {
                return false;
            }
        }
        true
    }

    /// Span test: `L` is in general position among its translates exactly
    /// when `b` lies in no proper subspace spanned by a subset of the
    /// columns of `A`. It suffices to test subsets of size below `m`.
    pub fn translates_criterion(&self) -> bool {
        let m = self.m();
        for j in 0..m {
            for cols in Combinations::new(self.n(), j) {
                let sub = self.a_mat.select_cols(&cols);
                let rank_plain = sub.rank();
                let rank_aug = sub.augment_col(&self.b_vec).rank();
                if rank_plain == rank_aug {
                    // b is in the span, which has dimension < m.
                    return false;
                }
            }
        }
        true
    }

    /// Prepares point enumeration; points are indexed `0..q^d` in
    /// lexicographic order of the free coordinates.
    pub fn enumerate_points(&self) -> PointEnumerator {
        let aug = self.a_mat.augment_col(&self.b_vec);
        let Rref { mat, pivots, .. } = aug.rref();
        let n = self.n();
        debug_assert!(pivots.last() != Some(&n), "full-rank system is consistent");
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..n).filter(|c| !pivot_set.contains(c)).collect();
        PointEnumerator {
            field: Arc::clone(&self.field),
            rmat: mat,
            pivots,
            free,
            n,
        }
    }
}

/// Solved form of a subspace, for random access to its points.
pub struct PointEnumerator {
    field: Arc<Field>,
    /// RREF of `(A|b)`, `m x (n+1)`.
    rmat: FpMat,
    pivots: Vec<usize>,
    free: Vec<usize>,
    n: usize,
}

impl PointEnumerator {
    pub fn count(&self) -> u64 {
        let q = self.field.order();
        let mut c = 1u64;
        for _ in 0..self.free.len() {
            c = c.saturating_mul(q);
        }
        c
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// The point with the given index. Index digits in base `q`, most
    /// significant first, assign values to the free coordinates in
    /// ascending column order; pivot coordinates follow by back
    /// substitution.
    pub fn point(&self, idx: u64) -> Vec<Elem> {
        let mut x = Vec::new();
        self.point_into(idx, &mut x);
        x
    }

    /// Allocation-free variant of `point` for hot loops.
    pub fn point_into(&self, idx: u64, x: &mut Vec<Elem>) {
        debug_assert!(idx < self.count());
        let q = self.field.order();
        x.clear();
        x.resize(self.n, Elem::ZERO);
        let mut rem = idx;
        for &col in self.free.iter().rev() {
            x[col] = Elem((rem % q) as u32);
            rem /= q;
        }
        for (row, &pc) in self.pivots.iter().enumerate() {
            // x_pc = rhs - sum over free columns.
            let mut acc = self.rmat.at(row, self.n);
            for &fc in &self.free {
                let c = self.rmat.at(row, fc);
                if !c.is_zero() && !x[fc].is_zero() {
                    acc = self.field.sub(acc, self.field.mul(c, x[fc]));
                }
            }
            x[pc] = acc;
        }
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        (0..self.count()).map(move |i| self.point(i))
    }
}

/// Lexicographic k-subsets of `{0, ..., n-1}`.
pub(crate) struct Combinations {
    n: usize,
    k: usize,
    cur: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Combinations {
        let cur = if k <= n {
            Some((0..k).collect())
        } else {
            None
        };
        Combinations { n, k, cur }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.cur.as_mut()?;
        let out = cur.clone();
        // Advance: find the rightmost index that can still move right.
        let mut i = self.k;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if cur[i] + (self.k - i) < self.n {
                cur[i] += 1;
                for j in i + 1..self.k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::numutil::binomial;

    fn subspace(p: u64, a: u32, rows: &[Vec<u64>], b: &[u64]) -> AffineSubspace {
        let f = make_field(p, a).unwrap();
        AffineSubspace::from_codes(f, rows, b).unwrap()
    }

    #[test]
    fn combinations_enumerate_lexicographically() {
        let all: Vec<Vec<usize>> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(Combinations::new(5, 0).count(), 1);
        assert_eq!(Combinations::new(3, 5).count(), 0);
        for n in 0..7usize {
            for k in 0..=n {
                assert_eq!(
                    Combinations::new(n, k).count() as u64,
                    binomial(n as i64, k as i64)
                );
            }
        }
    }

    #[test]
    fn rejects_rank_deficient_systems() {
        let f = make_field(3, 1).unwrap();
        let ok = AffineSubspace::from_codes(
            Arc::clone(&f),
            &[vec![1, 2, 0], vec![0, 1, 1]],
            &[1, 2],
        );
        assert!(ok.is_ok());
        // Second row is twice the first mod 3.
        let err = AffineSubspace::from_codes(
            Arc::clone(&f),
            &[vec![1, 2, 0], vec![2, 1, 0]],
            &[1, 2],
        );
        assert!(matches!(
            err,
            Err(Error::RankDeficient { rank: 1, required: 2 })
        ));
    }

    #[test]
    fn dim_intersection_conventions() {
        // x1 = 1 inside A^2(F_3): a line (d = 1).
        let l = subspace(3, 1, &[vec![1, 0]], &[1]);
        assert_eq!(l.dim_intersection(&[]), 1);
        assert_eq!(l.dim_intersection(&[0]), -1); // x1 = 0 contradicts x1 = 1
        assert_eq!(l.dim_intersection(&[1]), 0); // the point (1, 0)
        assert_eq!(l.dim_intersection(&[0, 1]), -1);
    }

    #[test]
    fn classify_line_x1_equals_1() {
        let l = subspace(3, 1, &[vec![1, 0]], &[1]);
        let rep = l.classify_position();
        assert_eq!(rep.class, PositionClass::GeneralAmongTranslates);
        assert_eq!(rep.a_counts, vec![1]);
        assert_eq!(rep.d_l, 0);
        assert!(rep.witness.is_none());
    }

    #[test]
    fn classify_skew_line_in_a3() {
        // {(t, t+1, 1)}: equations x2 - x1 = 1, x3 = 1 over F_5.
        let l = subspace(5, 1, &[vec![4, 1, 0], vec![0, 0, 1]], &[1, 1]);
        assert_eq!(l.dim(), 1);
        let rep = l.classify_position();
        assert_eq!(rep.class, PositionClass::GeneralAmongTranslates);
        assert_eq!(rep.a_counts, vec![2]);
        assert_eq!(rep.d_l, 1);
        assert!(!l.minors_criterion());
        assert!(l.translates_criterion());
    }

    #[test]
    fn classify_general_position_hyperplane() {
        // x1 + x2 = 1 over F_3.
        let l = subspace(3, 1, &[vec![1, 1]], &[1]);
        let rep = l.classify_position();
        assert_eq!(rep.class, PositionClass::GeneralPosition);
        assert_eq!(rep.a_counts, vec![2]);
        assert_eq!(rep.d_l, 1);
        assert_eq!(rep.d_l, binomial(1, 1) as i64);
        assert!(l.minors_criterion());
        assert!(l.translates_criterion());
    }

    #[test]
    fn classify_through_origin_is_neither() {
        // x1 + x2 = 0 over F_3 passes through the origin.
        let l = subspace(3, 1, &[vec![1, 1]], &[0]);
        let rep = l.classify_position();
        assert_eq!(rep.class, PositionClass::Neither);
        assert_eq!(rep.witness, Some(vec![0, 1]));
        assert!(!l.minors_criterion());
        assert!(!l.translates_criterion());
    }

    #[test]
    fn single_point_position() {
        // d = 0: the point (2, 3) over F_5 (all coordinates nonzero -> GP).
        let l = subspace(5, 1, &[vec![1, 0], vec![0, 1]], &[2, 3]);
        assert_eq!(l.dim(), 0);
        let rep = l.classify_position();
        assert_eq!(rep.class, PositionClass::GeneralPosition);
        assert_eq!(rep.d_l, 1); // (-1)^0, no a_j terms
        // A point with a zero coordinate is not even GAT.
        let l0 = subspace(5, 1, &[vec![1, 0], vec![0, 1]], &[2, 0]);
        assert_eq!(l0.classify_position().class, PositionClass::Neither);
    }

    #[test]
    fn criteria_match_classification_exhaustively() {
        // All hyperplanes a1 x1 + a2 x2 = b over F_3 with (a1, a2) != 0,
        // and all 2 x 3 full-rank systems over F_3 with small sampling.
        let f = make_field(3, 1).unwrap();
        for a1 in 0..3u64 {
            for a2 in 0..3u64 {
                if a1 == 0 && a2 == 0 {
                    continue;
                }
                for b in 0..3u64 {
                    let l =
                        AffineSubspace::from_codes(Arc::clone(&f), &[vec![a1, a2]], &[b]).unwrap();
                    let rep = l.classify_position();
                    assert_eq!(
                        l.minors_criterion(),
                        rep.class == PositionClass::GeneralPosition,
                        "minors a=({a1},{a2}) b={b}"
                    );
                    assert_eq!(
                        l.translates_criterion(),
                        rep.class != PositionClass::Neither,
                        "translates a=({a1},{a2}) b={b}"
                    );
                }
            }
        }
        // 1 x 3 systems over F_3 (planes in A^3).
        for a1 in 0..3u64 {
            for a2 in 0..3u64 {
                for a3 in 0..3u64 {
                    if a1 == 0 && a2 == 0 && a3 == 0 {
                        continue;
                    }
                    for b in 0..3u64 {
                        let l = AffineSubspace::from_codes(
                            Arc::clone(&f),
                            &[vec![a1, a2, a3]],
                            &[b],
                        )
                        .unwrap();
                        let rep = l.classify_position();
                        assert_eq!(
                            l.minors_criterion(),
                            rep.class == PositionClass::GeneralPosition
                        );
                        assert_eq!(
                            l.translates_criterion(),
                            rep.class != PositionClass::Neither
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn criteria_match_on_codim2_systems() {
        let f = make_field(3, 1).unwrap();
        let mut checked = 0u32;
        // Sweep all 2x3 matrices with rows indexed by codes, skipping rank
        // deficient ones, paired with every b.
        for r0 in 0..27u64 {
            for r1 in 0..27u64 {
                let row0 = vec![r0 % 3, (r0 / 3) % 3, r0 / 9];
                let row1 = vec![r1 % 3, (r1 / 3) % 3, r1 / 9];
                let Ok(mat) =
                    FpMat::from_rows(Arc::clone(&f), &[row0.clone(), row1.clone()])
                else {
                    continue;
                };
                if mat.rank() < 2 {
                    continue;
                }
                for bc in 0..9u64 {
                    let b = vec![bc % 3, bc / 3];
                    let l = AffineSubspace::from_codes(
                        Arc::clone(&f),
                        &[row0.clone(), row1.clone()],
                        &b,
                    )
                    .unwrap();
                    let rep = l.classify_position();
                    assert_eq!(
                        l.minors_criterion(),
                        rep.class == PositionClass::GeneralPosition
                    );
                    assert_eq!(
                        l.translates_criterion(),
                        rep.class != PositionClass::Neither
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn point_enumeration_is_exact() {
        let l = subspace(5, 1, &[vec![4, 1, 0], vec![0, 0, 1]], &[1, 1]);
        let en = l.enumerate_points();
        assert_eq!(en.count(), 5);
        let pts: Vec<Vec<Elem>> = en.points().collect();
        assert_eq!(pts.len(), 5);
        for x in &pts {
            assert!(l.contains(x));
        }
        // All distinct.
        let set: std::collections::HashSet<Vec<u32>> = pts
            .iter()
            .map(|x| x.iter().map(|e| e.0).collect())
            .collect();
        assert_eq!(set.len(), 5);
    }

    #[test]
    fn point_enumeration_over_extension_field() {
        // Plane x1 + x2 + x3 = 1 over F_4: 16 points.
        let l = subspace(2, 2, &[vec![1, 1, 1]], &[1]);
        let en = l.enumerate_points();
        assert_eq!(en.count(), 16);
        let mut seen = std::collections::HashSet::new();
        for x in en.points() {
            assert!(l.contains(&x));
            seen.insert(x.iter().map(|e| e.0).collect::<Vec<u32>>());
        }
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn a_counts_in_general_position_are_binomials() {
        // GP implies a_j = C(n, j) for j = 1..=d.
        let l = subspace(5, 1, &[vec![1, 1, 1]], &[1]);
        let rep = l.classify_position();
        assert_eq!(rep.class, PositionClass::GeneralPosition);
        assert_eq!(rep.a_counts, vec![3, 3]);
        assert_eq!(rep.d_l, binomial(2, 2) as i64);
    }
}
