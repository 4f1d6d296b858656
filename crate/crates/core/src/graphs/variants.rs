//! 16-vertex graphs with the distance-partition shape (1, 4, 6, 4, 1) of Q₄.
//!
//! Vertex 1 is joined to the class {2..5}, vertex 16 to {12..15}, and the
//! middle class {6..11} is joined to the two size-4 classes through 4×6 0/1
//! blocks with three ones per row and two per column. Any such graph is
//! 4-regular and has the divisor of Q₄ for the distance partition from vertex 1.

use std::collections::HashSet;

use super::{canonical_form, distance_partition, is_equitable, Equitability};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ratfun::Scalar;
use crate::reduction::LabeledMatrix;

const ROWS: usize = 4;
const COLS: usize = 6;

/// 4×6 0/1 block with row sums 3 and column sums 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockPattern {
    rows: [[u8; COLS]; ROWS],
}

impl BlockPattern {
    pub fn new(rows: [[u8; COLS]; ROWS]) -> Result<Self> {
        if rows.iter().flatten().any(|&x| x > 1) {
            return Err(Error::InvalidPattern("entries must be 0 or 1".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            let s: u8 = r.iter().sum();
            if s != 3 {
                return Err(Error::InvalidPattern(format!("row {} has {s} ones, expected 3", i + 1)));
            }
        }
        for j in 0..COLS {
            let s: u8 = rows.iter().map(|r| r[j]).sum();
            if s != 2 {
                return Err(Error::InvalidPattern(format!("column {} has {s} ones, expected 2", j + 1)));
            }
        }
        Ok(BlockPattern { rows })
    }

    /// Parses a 4×6 list of rows.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        if rows.len() != ROWS || rows.iter().any(|r| r.len() != COLS) {
            return Err(Error::InvalidPattern("pattern must be 4 rows of 6 entries".into()));
        }
        let mut a = [[0u8; COLS]; ROWS];
        for (dst, src) in a.iter_mut().zip(rows) {
            dst.copy_from_slice(src);
        }
        Self::new(a)
    }

    /// The block shown in the worked 16-vertex example.
    pub fn displayed() -> Self {
        BlockPattern {
            rows: [[1, 1, 1, 0, 0, 0], [0, 0, 0, 1, 1, 1], [1, 1, 0, 1, 0, 0], [0, 0, 1, 0, 1, 1]],
        }
    }

    pub fn rows(&self) -> &[[u8; COLS]; ROWS] {
        &self.rows
    }

    /// All valid patterns in lexicographic order of their rows.
    pub fn all() -> Vec<Self> {
        let mut choices: Vec<[u8; COLS]> = (0u32..1 << COLS)
            .filter(|m| m.count_ones() == 3)
            .map(|m| std::array::from_fn(|j| ((m >> j) & 1) as u8))
            .collect();
        choices.sort();
        let mut out = Vec::new();
        let mut rows = [[0u8; COLS]; ROWS];
        fn fill(k: usize, rows: &mut [[u8; COLS]; ROWS], choices: &[[u8; COLS]], out: &mut Vec<BlockPattern>) {
            if k == ROWS {
                if let Ok(p) = BlockPattern::new(*rows) {
                    out.push(p);
                }
                return;
            }
            for c in choices {
                rows[k] = *c;
                let over = (0..COLS).any(|j| rows[..=k].iter().map(|r| r[j]).sum::<u8>() > 2);
                if !over {
                    fill(k + 1, rows, choices, out);
                }
            }
        }
        fill(0, &mut rows, &choices, &mut out);
        out
    }

    /// Patterns whose rows are in nondecreasing order. Reordering rows only
    /// relabels vertices, so these represent every graph of the family.
    pub fn row_sorted() -> Vec<Self> {
        Self::all().into_iter().filter(|p| p.rows.windows(2).all(|w| w[0] <= w[1])).collect()
    }
}

/// The (n+1)×(n+1) divisor of the distance partition of Qₙ:
/// d_{k,k+1} = n - k and d_{k,k-1} = k.
pub fn hypercube_divisor<T: Scalar>(n: usize) -> Matrix<T> {
    Matrix::from_fn(n + 1, n + 1, |i, j| {
        if j == i + 1 {
            T::from_i64((n - i) as i64)
        } else if i == j + 1 {
            T::from_i64(i as i64)
        } else {
            T::zero()
        }
    })
}

/// The variant with the same pattern in both 4×6 blocks, as in the worked example.
pub fn q4_variant<T: Scalar>(pattern: &BlockPattern) -> Result<LabeledMatrix<T>> {
    q4_variant_pair(pattern, pattern)
}

/// The variant with `upper` joining {2..5} to {6..11} and `lower` joining {12..15} to {6..11}.
pub fn q4_variant_pair<T: Scalar>(upper: &BlockPattern, lower: &BlockPattern) -> Result<LabeledMatrix<T>> {
    let upper = BlockPattern::new(upper.rows)?;
    let lower = BlockPattern::new(lower.rows)?;
    let mut adj = [[false; 16]; 16];
    let mut join = |i: usize, j: usize| {
        adj[i][j] = true;
        adj[j][i] = true;
    };
    for k in 0..ROWS {
        join(0, 1 + k);
        join(15, 11 + k);
        for j in 0..COLS {
            if upper.rows[k][j] == 1 {
                join(1 + k, 5 + j);
            }
            if lower.rows[k][j] == 1 {
                join(11 + k, 5 + j);
            }
        }
    }
    let labels = (1..=16).map(|i| i.to_string()).collect();
    let m = Matrix::from_fn(16, 16, |i, j| if adj[i][j] { T::one() } else { T::zero() });
    let g = LabeledMatrix::new(labels, m)?;
    validate(&g)?;
    Ok(g)
}

fn validate<T: Scalar>(g: &LabeledMatrix<T>) -> Result<()> {
    let pi = distance_partition(g, "1")?;
    match is_equitable(g, &pi)? {
        Equitability::Equitable(d) if d == hypercube_divisor(4) => Ok(()),
        _ => Err(Error::DivisorMismatch),
    }
}

/// Up to `limit` pairwise non-isomorphic variants, scanning pattern pairs in
/// lexicographic order.
pub fn enumerate_q4_variants<T: Scalar>(limit: usize) -> Result<Vec<LabeledMatrix<T>>> {
    let patterns = BlockPattern::row_sorted();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for upper in &patterns {
        for lower in &patterns {
            if out.len() >= limit {
                return Ok(out);
            }
            let g = q4_variant_pair::<T>(upper, lower)?;
            if seen.insert(canonical_form(&adjacency_of(&g))) {
                out.push(g);
            }
        }
    }
    Ok(out)
}

pub(super) fn adjacency_of<T: Scalar>(g: &LabeledMatrix<T>) -> Vec<Vec<bool>> {
    let m = g.matrix();
    (0..g.size()).map(|i| (0..g.size()).map(|j| !m[(i, j)].is_zero()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{hypercube, VertexPartition};
    use crate::ratfun::ExactRational as Q;

    #[test]
    fn displayed_pattern_is_valid() {
        let p = BlockPattern::displayed();
        assert_eq!(BlockPattern::new(*p.rows()), Ok(p));
        let g = q4_variant::<Q>(&p).unwrap();
        for i in 0..16 {
            assert!(g.matrix()[(i, i)].is_zero());
            assert_eq!(g.matrix().row(i).iter().filter(|x| !x.is_zero()).count(), 4);
        }
        assert_eq!(g.matrix(), &g.matrix().transpose());
        assert_eq!(distance_partition(&g, "1").unwrap().sizes(), vec![1, 4, 6, 4, 1]);
    }

    #[test]
    fn bad_patterns_rejected() {
        let mut rows = *BlockPattern::displayed().rows();
        rows[0][0] = 0;
        assert!(matches!(BlockPattern::new(rows), Err(Error::InvalidPattern(_))));
        rows[0][0] = 2;
        assert!(matches!(BlockPattern::new(rows), Err(Error::InvalidPattern(_))));
        assert!(BlockPattern::from_rows(&[vec![1, 1, 1]]).is_err());
    }

    #[test]
    fn pattern_enumeration_is_sorted_and_complete() {
        let all = BlockPattern::all();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.contains(&BlockPattern::displayed()));
        // Columns are 2-subsets of the 4 rows forming a 3-regular multigraph:
        // brute force over all 2^24 matrices would agree; count by columns instead.
        let pairs: Vec<[u8; 4]> = (0u8..16).filter(|m| m.count_ones() == 2).map(|m| std::array::from_fn(|i| (m >> i) & 1)).collect();
        let mut count = 0;
        let mut cols = [0usize; COLS];
        fn rec(k: usize, cols: &mut [usize; COLS], pairs: &[[u8; 4]], count: &mut usize) {
            if k == COLS {
                if (0..4).all(|i| cols.iter().map(|&c| pairs[c][i]).sum::<u8>() == 3) {
                    *count += 1;
                }
                return;
            }
            for c in 0..pairs.len() {
                cols[k] = c;
                rec(k + 1, cols, pairs, count);
            }
        }
        rec(0, &mut cols, &pairs, &mut count);
        assert_eq!(all.len(), count);
    }

    #[test]
    fn hypercube_divisor_matches_distance_partition() {
        for n in 1..=4 {
            let q = hypercube::<Q>(n);
            let pi: VertexPartition = distance_partition(&q, &"0".repeat(n)).unwrap();
            assert_eq!(is_equitable(&q, &pi).unwrap().divisor().unwrap(), &hypercube_divisor(n));
        }
    }

    #[test]
    fn at_least_four_variants() {
        let v = enumerate_q4_variants::<Q>(4).unwrap();
        assert_eq!(v.len(), 4);
    }
}
