use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::TransitionMatrix;
use crate::error::{Error, Result};
use crate::rational::to_f64;

/// Dense eigendecomposition up to this many states; power iteration above.
pub const DENSE_LIMIT: usize = 1024;

/// Eigenvalues are reported with this tolerance.
pub const GAP_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    /// 1 - λ₂.
    pub gap: f64,
    pub lambda2: f64,
    /// Smallest eigenvalue, when the full spectrum was computed.
    pub min_eigenvalue: Option<f64>,
}

impl Spectrum {
    /// No eigenvalue below -tolerance.
    pub fn nonnegative(&self) -> bool {
        self.min_eigenvalue.is_none_or(|l| l >= -GAP_TOLERANCE)
    }
}

/// The spectral gap of a reversible matrix, through its symmetrization
/// D^{1/2} P D^{-1/2} with D = diag(π).
pub fn spectral_gap(mat: &TransitionMatrix) -> Result<Spectrum> {
    let n = mat.len();
    let sqrt_pi: Vec<f64> = mat.stationary().iter().map(|p| to_f64(p).sqrt()).collect();
    if sqrt_pi.contains(&0.0) {
        return Err(Error::Parameter {
            name: "stationary",
            value: "0".into(),
            expected: "a stationary vector with full support",
        });
    }
    let entries: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|i| {
            let sqrt_pi = &sqrt_pi;
            mat.row(i)
                .iter()
                .map(move |(j, p)| (i, *j, sqrt_pi[i] * to_f64(p) / sqrt_pi[*j]))
        })
        .collect();
    if n == 1 {
        return Ok(Spectrum {
            gap: 1.0,
            lambda2: 0.0,
            min_eigenvalue: Some(1.0),
        });
    }
    if n <= DENSE_LIMIT {
        let mut s = DMatrix::<f64>::zeros(n, n);
        for &(i, j, v) in &entries {
            s[(i, j)] += v / 2.0;
            s[(j, i)] += v / 2.0;
        }
        let mut values: Vec<f64> = SymmetricEigen::new(s).eigenvalues.iter().copied().collect();
        values.sort_by(|a, b| b.total_cmp(a));
        return Ok(Spectrum {
            gap: 1.0 - values[1],
            lambda2: values[1],
            min_eigenvalue: values.last().copied(),
        });
    }
    // Power iteration orthogonal to the top eigenvector √π. Lazy chains have
    // a nonnegative spectrum, so the dominant remaining eigenvalue is λ₂.
    let top = DVector::from_vec(sqrt_pi.clone());
    let apply = |x: &DVector<f64>| {
        let mut y = DVector::zeros(n);
        for &(i, j, v) in &entries {
            y[j] += x[i] * v;
        }
        y
    };
    let mut x = DVector::from_fn(n, |i, _| ((i * 7919 % 104729) as f64 + 1.0).sin());
    x -= &top * top.dot(&x);
    x /= x.norm();
    let mut lambda = 0.0;
    for _ in 0..100_000 {
        let mut y = apply(&x);
        y -= &top * top.dot(&y);
        let next = x.dot(&y);
        let norm = y.norm();
        if norm == 0.0 {
            lambda = 0.0;
            break;
        }
        x = y / norm;
        if (next - lambda).abs() < 1e-14 {
            lambda = next;
            break;
        }
        lambda = next;
    }
    Ok(Spectrum {
        gap: 1.0 - lambda,
        lambda2: lambda,
        min_eigenvalue: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Measure;
    use crate::rational::{int, rat};

    #[test]
    fn identity_has_no_gap() {
        let pi = Measure::from_weights([(0, int(1)), (1, int(1))]);
        let mat = TransitionMatrix::from_rows(vec![0, 1], vec![vec![(0, int(1))], vec![(1, int(1))]], &pi).unwrap();
        let s = spectral_gap(&mat).unwrap();
        assert!(s.gap.abs() < GAP_TOLERANCE);
    }

    #[test]
    fn two_state_gap_is_sum_of_off_diagonals() {
        let pi = Measure::from_weights([(0, rat(2, 3)), (1, rat(1, 3))]);
        let rows = vec![
            vec![(0, rat(3, 4)), (1, rat(1, 4))],
            vec![(0, rat(1, 2)), (1, rat(1, 2))],
        ];
        let mat = TransitionMatrix::from_rows(vec![0, 1], rows, &pi).unwrap();
        let s = spectral_gap(&mat).unwrap();
        assert!((s.gap - 0.75).abs() < GAP_TOLERANCE);
        assert!(s.nonnegative());
    }
}
