use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rat;

/// Exact rank by fraction-free (Bareiss) elimination.
///
/// Each row is first scaled to integers by the lcm of its denominators, which
/// leaves the rank unchanged. Every intermediate entry is then a minor of the
/// scaled matrix, so the division by the previous pivot is exact.
pub fn ffge_rank(matrix: &[Vec<Rat>]) -> usize {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut a: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| {
            assert_eq!(row.len(), cols, "ragged matrix");
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();

    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[col]);
            for j in col + 1..cols {
                let v = &pivot_row[col] * &row[j] - &lead * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn identity_and_dependent_rows() {
        assert_eq!(ffge_rank(&m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), 3);
        assert_eq!(ffge_rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(ffge_rank(&m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(ffge_rank(&[]), 0);
    }

    #[test]
    fn explicit_dependency_five_by_five() {
        let r1 = [3, -1, 4, 1, -5];
        let r2 = [9, 2, -6, 5, 3];
        let r3: Vec<i64> = r1.iter().zip(&r2).map(|(a, b)| a + b).collect();
        let r4 = [5, 8, 9, -7, 9];
        let r5 = [3, 2, 3, 8, -4];
        assert_eq!(ffge_rank(&m(&[&r1, &r2, &r3, &r4, &r5])), 4);
    }

    #[test]
    fn fractional_entries() {
        let a = vec![vec![rat(1, 2), rat(1, 3)], vec![rat(3, 2), int(1)]];
        assert_eq!(ffge_rank(&a), 1);
        let b = vec![vec![rat(1, 2), rat(1, 3)], vec![rat(3, 2), int(2)]];
        assert_eq!(ffge_rank(&b), 2);
    }

    #[test]
    fn wide_and_tall() {
        assert_eq!(ffge_rank(&m(&[&[0, 1, 2, 3]])), 1);
        assert_eq!(ffge_rank(&m(&[&[0, 0, 1, 1], &[0, 0, 2, 3]])), 2);
        assert_eq!(ffge_rank(&m(&[&[1], &[2], &[0]])), 1);
    }
}
