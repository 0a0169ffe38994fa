//! Small dense solvers.

/// Gaussian elimination with partial pivoting on an augmented `k × (k+1)` matrix.
pub(crate) fn solve_dense(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let k = a.len();
    for col in 0..k {
        let pivot = (col..k).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        for row in (col + 1)..k {
            let factor = a[row][col] / a[col][col];
            for c in col..=k {
                a[row][c] -= factor * a[col][c];
            }
        }
    }
    let mut x = vec![0.0; k];
    for row in (0..k).rev() {
        let tail: f64 = ((row + 1)..k).map(|c| a[row][c] * x[c]).sum();
        x[row] = (a[row][k] - tail) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Least-squares solution of `A x ≈ y` for column-major `A` by modified
/// Gram-Schmidt on unit-scaled columns.
pub(crate) fn least_squares(mut columns: Vec<Vec<f64>>, y: &[f64]) -> Option<Vec<f64>> {
    let k = columns.len();
    let mut scale = vec![0.0; k];
    for (col, s) in columns.iter_mut().zip(&mut scale) {
        *s = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(*s > 0.0) {
            return None;
        }
        col.iter_mut().for_each(|v| *v /= *s);
    }
    let mut r = vec![vec![0.0; k]; k];
    for j in 0..k {
        let (done, rest) = columns.split_at_mut(j);
        let qj = &mut rest[0];
        for (i, qi) in done.iter().enumerate() {
            let dot: f64 = qi.iter().zip(qj.iter()).map(|(a, b)| a * b).sum();
            r[i][j] = dot;
            qj.iter_mut().zip(qi).for_each(|(b, a)| *b -= dot * a);
        }
        let norm = columns[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-13 {
            return None;
        }
        r[j][j] = norm;
        columns[j].iter_mut().for_each(|v| *v /= norm);
    }
    let qty: Vec<f64> = columns
        .iter()
        .map(|q| q.iter().zip(y).map(|(a, b)| a * b).sum())
        .collect();
    let mut x = vec![0.0; k];
    for row in (0..k).rev() {
        let tail: f64 = ((row + 1)..k).map(|c| r[row][c] * x[c]).sum();
        x[row] = (qty[row] - tail) / r[row][row];
    }
    x.iter_mut().zip(&scale).for_each(|(v, s)| *v /= s);
    x.iter().all(|v| v.is_finite()).then_some(x)
}
