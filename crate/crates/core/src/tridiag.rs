//! Thomas algorithm for tridiagonal systems.
//!
//! Every implicit step in this crate produces strictly diagonally dominant
//! systems, so no pivoting is needed.

/// Solves a tridiagonal system in place.
///
/// `lower[i]` multiplies `x[i-1]` in row `i` (so `lower[0]` is unused),
/// `upper[i]` multiplies `x[i+1]` (so `upper[n-1]` is unused). `rhs` is
/// overwritten with the solution. Returns `None` when a pivot vanishes.
pub fn solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) -> Option<()> {
    let n = rhs.len();
    debug_assert!(lower.len() == n && diag.len() == n && upper.len() == n);
    if n == 0 {
        return Some(());
    }
    let mut scratch = vec![0.0; n];
    let mut piv = diag[0];
    if piv == 0.0 || !piv.is_finite() {
        return None;
    }
    rhs[0] /= piv;
    for i in 1..n {
        scratch[i] = upper[i - 1] / piv;
        piv = diag[i] - lower[i] * scratch[i];
        if piv == 0.0 || !piv.is_finite() {
            return None;
        }
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / piv;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i + 1] * rhs[i + 1];
    }
    Some(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_known_system() {
        // [2 1 0; 1 3 1; 0 1 2] x = [3; 10; 9] -> x = [0.5, 2, 3.5]
        let lower = [0.0, 1.0, 1.0];
        let diag = [2.0, 3.0, 2.0];
        let upper = [1.0, 1.0, 0.0];
        let mut rhs = [3.0, 10.0, 9.0];
        solve(&lower, &diag, &upper, &mut rhs).unwrap();
        for (got, want) in rhs.iter().zip([0.5, 2.0, 3.5]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn recovers_random_solution() {
        // Diagonally dominant random system; verify A x = b round trip.
        let n = 64;
        let mut state = 0x9e3779b97f4a7c15_u64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 1000) as f64 / 1000.0 - 0.5
        };
        let lower: Vec<f64> = (0..n).map(|_| rng()).collect();
        let upper: Vec<f64> = (0..n).map(|_| rng()).collect();
        let diag: Vec<f64> = (0..n)
            .map(|i| 2.0 + lower[i].abs() + upper[i].abs() + rng().abs())
            .collect();
        let x_true: Vec<f64> = (0..n).map(|_| rng()).collect();
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            rhs[i] = diag[i] * x_true[i];
            if i > 0 {
                rhs[i] += lower[i] * x_true[i - 1];
            }
            if i + 1 < n {
                rhs[i] += upper[i] * x_true[i + 1];
            }
        }
        solve(&lower, &diag, &upper, &mut rhs).unwrap();
        for i in 0..n {
            assert!((rhs[i] - x_true[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_zero_pivot() {
        let lower = [0.0, 1.0];
        let diag = [0.0, 1.0];
        let upper = [1.0, 0.0];
        let mut rhs = [1.0, 1.0];
        assert!(solve(&lower, &diag, &upper, &mut rhs).is_none());
    }
}
