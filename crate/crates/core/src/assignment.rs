//! Maximum-weight one-to-one assignment (Kuhn-Munkres with potentials),
//! used to match predicted clusters to truth clusters when scoring.

/// Optimal one-to-one assignment maximizing total weight over a rectangular
/// matrix (`rows x cols`, row-major). Returns the total matched weight and,
/// per row, the assigned column. With more rows than columns some rows stay
/// unassigned (`None`).
pub fn max_weight_assignment(weights: &[Vec<u64>]) -> (u64, Vec<Option<usize>>) {
    let rows = weights.len();
    if rows == 0 {
        return (0, Vec::new());
    }
    let cols = weights[0].len();
    debug_assert!(weights.iter().all(|r| r.len() == cols));
    if cols == 0 {
        return (0, vec![None; rows]);
    }

    // The solver needs rows <= cols; transpose when necessary.
    if rows > cols {
        let transposed: Vec<Vec<u64>> = (0..cols)
            .map(|j| (0..rows).map(|i| weights[i][j]).collect())
            .collect();
        let (total, col_to_row) = max_weight_assignment(&transposed);
        let mut row_to_col = vec![None; rows];
        for (j, assigned) in col_to_row.iter().enumerate() {
            if let Some(i) = assigned {
                row_to_col[*i] = Some(j);
            }
        }
        return (total, row_to_col);
    }

    // Maximizing weight == minimizing (w_max - w).
    let w_max = weights
        .iter()
        .flat_map(|r| r.iter())
        .copied()
        .max()
        .unwrap_or(0);
    let cost = |i: usize, j: usize| (w_max - weights[i][j]) as i64;

    let n = rows;
    let m = cols;
    let inf = i64::MAX / 2;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; m + 1];
    let mut assigned_row = vec![0usize; m + 1]; // column -> row (1-based, 0 = free)
    let mut way = vec![0usize; m + 1];

    for i in 1..=n {
        assigned_row[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = assigned_row[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[assigned_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if assigned_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            assigned_row[j0] = assigned_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![None; rows];
    let mut total = 0u64;
    for j in 1..=m {
        let i = assigned_row[j];
        if i >= 1 {
            row_to_col[i - 1] = Some(j - 1);
            total += weights[i - 1][j - 1];
        }
    }
    (total, row_to_col)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over all injections rows -> cols.
    fn brute_force(weights: &[Vec<u64>]) -> u64 {
        fn go(weights: &[Vec<u64>], row: usize, used: &mut Vec<bool>) -> u64 {
            if row == weights.len() {
                return 0;
            }
            // Leaving the row unmatched is allowed when rows > cols.
            let mut best = go(weights, row + 1, used);
            for j in 0..weights[row].len() {
                if !used[j] {
                    used[j] = true;
                    best = best.max(weights[row][j] + go(weights, row + 1, used));
                    used[j] = false;
                }
            }
            best
        }
        let cols = weights.first().map_or(0, |r| r.len());
        go(weights, 0, &mut vec![false; cols])
    }

    #[test]
    fn square_case() {
        let w = vec![vec![7, 5, 11], vec![5, 4, 1], vec![9, 3, 2]];
        let (total, assign) = max_weight_assignment(&w);
        assert_eq!(total, 24); // 11 + 4 + 9
        assert_eq!(assign, vec![Some(2), Some(1), Some(0)]);
    }

    #[test]
    fn rectangular_cases_match_brute_force() {
        let cases = vec![
            vec![vec![3, 1], vec![2, 4], vec![9, 9]],
            vec![vec![1, 2, 3, 4]],
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![5, 0, 0], vec![0, 5, 0]],
        ];
        for w in cases {
            let (total, assign) = max_weight_assignment(&w);
            assert_eq!(total, brute_force(&w), "matrix {w:?}");
            // Assignment must be injective.
            let mut seen = std::collections::HashSet::new();
            for a in assign.into_iter().flatten() {
                assert!(seen.insert(a));
            }
        }
    }

    #[test]
    fn random_cases_match_brute_force() {
        use rand::Rng;
        let mut rng = crate::rng::seeded_rng(5);
        for _ in 0..200 {
            let rows = rng.random_range(1..=5);
            let cols = rng.random_range(1..=5);
            let w: Vec<Vec<u64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.random_range(0..40)).collect())
                .collect();
            let (total, _) = max_weight_assignment(&w);
            assert_eq!(total, brute_force(&w), "matrix {w:?}");
        }
    }
}
