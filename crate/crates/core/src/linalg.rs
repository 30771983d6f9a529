//! Dense complex linear algebra helpers backed by nalgebra.

use nalgebra::DMatrix;

use crate::scalar::ApproxComplex;

pub(crate) type CMatrix = DMatrix<ApproxComplex>;

/// Eigenvalues of a square complex matrix via the complex Schur form.
pub(crate) fn eigenvalues(m: &CMatrix) -> Option<Vec<ApproxComplex>> {
    let n = m.nrows();
    let schur = nalgebra::Schur::try_new(m.clone(), 1e-15, 10_000 * n.max(1))?;
    let (_, t) = schur.unpack();
    Some((0..n).map(|i| t[(i, i)]).collect())
}

/// Unit vector spanning the (numerical) kernel of `m - lambda I`.
///
/// Returns the right singular vector of the smallest singular value together
/// with the ratio of the two smallest singular values, which is small when
/// the kernel is one dimensional.
pub(crate) fn kernel_vector(m: &CMatrix, lambda: ApproxComplex) -> (Vec<ApproxComplex>, f64) {
    let n = m.nrows();
    let shifted = m - CMatrix::identity(n, n) * lambda;
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let sv = &svd.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[a].total_cmp(&sv[b]));
    let smallest = order[0];
    let gap = if n > 1 {
        sv[order[0]] / sv[order[1]].max(f64::MIN_POSITIVE)
    } else {
        0.0
    };
    let v = (0..n).map(|j| v_t[(smallest, j)].conj()).collect();
    (v, gap)
}

/// Solves `a x = b` by LU decomposition.
pub(crate) fn solve(a: &CMatrix, b: &[ApproxComplex]) -> Option<Vec<ApproxComplex>> {
    let rhs = nalgebra::DVector::from_column_slice(b);
    let x = a.clone().lu().solve(&rhs)?;
    Some(x.iter().copied().collect())
}

/// Ratio of the largest to the smallest singular value of a real matrix.
pub(crate) fn condition_number(a: &DMatrix<f64>) -> f64 {
    let sv = a.singular_values();
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::complex::Complex64;

    #[test]
    fn eigen_of_diagonalizable_matrix() {
        // [[0,1],[1,0]] has eigenvalues +1, -1
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let mut ev: Vec<f64> = eigenvalues(&m).unwrap().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
        let (v, gap) = kernel_vector(&m, Complex64::new(1.0, 0.0));
        assert!(gap < 1e-12);
        assert!((v[0] - v[1]).norm() < 1e-12);
    }

    #[test]
    fn complex_eigenvalues_of_rotation() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let ev = eigenvalues(&m).unwrap();
        for z in ev {
            assert!((z.norm() - 1.0).abs() < 1e-12 && z.re.abs() < 1e-12);
        }
    }
}
