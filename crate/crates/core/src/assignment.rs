//! Rectangular linear sum assignment (Hungarian algorithm with potentials).

/// Minimum-cost assignment of every row to a distinct column.
///
/// `costs` is row-major with `rows <= cols`. Returns the column chosen for
/// each row. Runs in O(rows² · cols).
pub fn min_cost_rows(costs: &[f64], rows: usize, cols: usize) -> Vec<usize> {
    assert!(rows <= cols, "rows must not exceed columns");
    assert_eq!(costs.len(), rows * cols);
    if rows == 0 {
        return Vec::new();
    }
    let cost = |i: usize, j: usize| costs[(i - 1) * cols + (j - 1)];

    // 1-based; column 0 is a virtual source.
    let mut u = vec![0.0f64; rows + 1];
    let mut v = vec![0.0f64; cols + 1];
    let mut owner = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];

    for i in 1..=rows {
        owner[0] = i;
        let mut j0 = 0usize;
        let mut min_slack = vec![f64::INFINITY; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                let reduced = cost(i0, j) - u[i0] - v[j];
                if reduced < min_slack[j] {
                    min_slack[j] = reduced;
                    way[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; rows];
    for j in 1..=cols {
        if owner[j] > 0 {
            assignment[owner[j] - 1] = j - 1;
        }
    }
    assignment
}

/// Maximum total weight over matchings of size `min(rows, cols)`.
/// Returns `(row, col)` pairs sorted by row.
pub fn max_weight_pairs(weights: &[f64], rows: usize, cols: usize) -> Vec<(usize, usize)> {
    assert_eq!(weights.len(), rows * cols);
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    if rows <= cols {
        let costs: Vec<f64> = weights.iter().map(|w| -w).collect();
        min_cost_rows(&costs, rows, cols)
            .into_iter()
            .enumerate()
            .collect()
    } else {
        let mut costs = vec![0.0; rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                costs[j * rows + i] = -weights[i * cols + j];
            }
        }
        let mut pairs: Vec<(usize, usize)> = min_cost_rows(&costs, cols, rows)
            .into_iter()
            .enumerate()
            .map(|(j, i)| (i, j))
            .collect();
        pairs.sort_unstable();
        pairs
    }
}

/// Best achievable total over matchings of size `min(rows, cols)`.
pub fn max_weight_total(weights: &[f64], rows: usize, cols: usize) -> f64 {
    max_weight_pairs(weights, rows, cols)
        .into_iter()
        .map(|(i, j)| weights[i * cols + j])
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_min_cost() {
        let costs = [4.0, 1.0, 3.0, 2.0, 0.0, 5.0, 3.0, 2.0, 2.0];
        let a = min_cost_rows(&costs, 3, 3);
        let total: f64 = a.iter().enumerate().map(|(i, &j)| costs[i * 3 + j]).sum();
        assert_eq!(total, 5.0);
    }

    #[test]
    fn rectangular_both_orientations() {
        // 2 x 3
        let w = [0.9, 0.8, 0.1, 0.85, 0.1, 0.2];
        let pairs = max_weight_pairs(&w, 2, 3);
        assert_eq!(pairs, vec![(0, 1), (1, 0)]);
        // 3 x 2 (transpose)
        let wt = [0.9, 0.85, 0.8, 0.1, 0.1, 0.2];
        let pairs = max_weight_pairs(&wt, 3, 2);
        assert_eq!(pairs, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn empty_sides() {
        assert!(max_weight_pairs(&[], 0, 3).is_empty());
        assert!(max_weight_pairs(&[], 2, 0).is_empty());
    }
}
