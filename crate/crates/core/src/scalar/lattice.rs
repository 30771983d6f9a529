use nalgebra::DMatrix;

use super::ApproxComplex;
use crate::{Error, Result};

/// Enumeration budget for the integer search over free coordinates.
const SEARCH_BUDGET: f64 = 4.0e6;
/// Condition estimate above which a directly solvable basis is rejected.
const MAX_CONDITION: f64 = 1e8;

/// The additive span of a finite list of complex numbers with integer
/// coefficients, e.g. `{1, (1+sqrt(5))/2}` for the integers of Q(sqrt 5).
///
/// Membership is decided numerically. The real and imaginary parts give two
/// linear equations; when the basis has more elements than the real rank of
/// those equations, the extra coordinates are searched over the box
/// `[-bound, bound]`. Construction fails unless every nonzero lattice vector
/// with coordinates in the doubled box has modulus above `2 * tolerance`,
/// so an accepted answer is never ambiguous.
#[derive(Debug, Clone)]
pub struct Lattice {
    basis: Vec<ApproxComplex>,
    tolerance: f64,
    bound: i64,
    /// Columns solved for directly (at most two).
    pivots: Vec<usize>,
    /// Columns enumerated over the search box.
    free: Vec<usize>,
}

impl Lattice {
    pub fn new(basis: Vec<ApproxComplex>, tolerance: f64) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::Malformed("lattice basis is empty".into()));
        }
        if !(tolerance > 0.0) {
            return Err(Error::Malformed("lattice tolerance must be positive".into()));
        }
        let pivots = choose_pivots(&basis);
        if pivots.is_empty() {
            return Err(Error::IllConditioned("basis is numerically zero".into()));
        }
        let free: Vec<usize> = (0..basis.len()).filter(|i| !pivots.contains(i)).collect();
        let bound = if free.is_empty() {
            0
        } else {
            let per_axis = SEARCH_BUDGET.powf(1.0 / free.len() as f64);
            (((per_axis - 1.0) / 4.0).floor() as i64).min(1000)
        };
        if !free.is_empty() && bound < 1 {
            return Err(Error::IllConditioned(format!(
                "{} basis elements are real-dependent; search box too small",
                free.len()
            )));
        }
        let lattice = Lattice {
            basis,
            tolerance,
            bound,
            pivots,
            free,
        };
        lattice.check_conditioning()?;
        Ok(lattice)
    }

    pub fn basis(&self) -> &[ApproxComplex] {
        &self.basis
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Coordinate bound for the enumerated part of the basis.
    pub fn search_bound(&self) -> i64 {
        self.bound
    }

    /// Integer coordinates of `x` in this lattice, or `None` when `x` is not a
    /// member within the tolerance.
    pub fn in_lattice(&self, x: ApproxComplex) -> Result<Option<Vec<i64>>> {
        let mut found: Option<Vec<i64>> = None;
        let mut err = None;
        self.for_each_free(self.bound, |free_coords| {
            let shifted = x - self.combine_free(free_coords);
            let coords = self.solve_pivots(shifted);
            let full = self.assemble(free_coords, &coords);
            let residual = (x - self.combine(&full)).norm();
            if residual <= self.tolerance {
                match &found {
                    Some(prev) if *prev != full => {
                        err = Some(Error::IllConditioned(format!(
                            "ambiguous coordinates {prev:?} and {full:?}"
                        )));
                    }
                    _ => found = Some(full),
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(found),
        }
    }

    fn check_conditioning(&self) -> Result<()> {
        let a = self.pivot_matrix();
        let cond = crate::linalg::condition_number(&a);
        if cond > MAX_CONDITION {
            return Err(Error::IllConditioned(format!(
                "condition estimate {cond:.3e} of the solved part exceeds {MAX_CONDITION:.0e}"
            )));
        }
        if self.free.is_empty() {
            return Ok(());
        }
        // shortest nonzero vector reachable from differences of two candidates
        let mut shortest = f64::INFINITY;
        self.for_each_free(2 * self.bound, |free_coords| {
            let y = self.combine_free(free_coords);
            let coords = self.solve_pivots(-y);
            let full = self.assemble(free_coords, &coords);
            if full.iter().any(|&m| m != 0) {
                shortest = shortest.min(self.combine(&full).norm());
            }
        });
        let scale = self.basis.iter().map(|b| b.norm()).fold(0.0, f64::max);
        if shortest <= 2.0 * self.tolerance || scale / shortest > MAX_CONDITION {
            return Err(Error::IllConditioned(format!(
                "nonzero lattice vector of modulus {shortest:.3e} within the search box \
                 (condition estimate {:.3e})",
                scale / shortest.max(f64::MIN_POSITIVE)
            )));
        }
        Ok(())
    }

    fn pivot_matrix(&self) -> DMatrix<f64> {
        let k = self.pivots.len();
        DMatrix::from_fn(2, k, |r, c| {
            let b = self.basis[self.pivots[c]];
            if r == 0 {
                b.re
            } else {
                b.im
            }
        })
    }

    /// Least-squares solve for the pivot coordinates, rounded to integers.
    fn solve_pivots(&self, y: ApproxComplex) -> Vec<i64> {
        match self.pivots.as_slice() {
            [p] => {
                let b = self.basis[*p];
                let t = (y * b.conj()).re / b.norm_sqr();
                vec![t.round() as i64]
            }
            [p, q] => {
                let (b1, b2) = (self.basis[*p], self.basis[*q]);
                let det = b1.re * b2.im - b2.re * b1.im;
                let m1 = (y.re * b2.im - b2.re * y.im) / det;
                let m2 = (b1.re * y.im - y.re * b1.im) / det;
                vec![m1.round() as i64, m2.round() as i64]
            }
            _ => unreachable!("pivot set has one or two columns"),
        }
    }

    fn assemble(&self, free_coords: &[i64], pivot_coords: &[i64]) -> Vec<i64> {
        let mut full = vec![0i64; self.basis.len()];
        for (&i, &m) in self.free.iter().zip(free_coords) {
            full[i] = m;
        }
        for (&i, &m) in self.pivots.iter().zip(pivot_coords) {
            full[i] = m;
        }
        full
    }

    fn combine(&self, coords: &[i64]) -> ApproxComplex {
        coords.iter().zip(&self.basis).map(|(&m, &b)| b * m as f64).sum()
    }

    fn combine_free(&self, free_coords: &[i64]) -> ApproxComplex {
        self.free
            .iter()
            .zip(free_coords)
            .map(|(&i, &m)| self.basis[i] * m as f64)
            .sum()
    }

    fn for_each_free(&self, bound: i64, mut f: impl FnMut(&[i64])) {
        let k = self.free.len();
        let mut coords = vec![-bound; k];
        if k == 0 {
            f(&coords);
            return;
        }
        loop {
            f(&coords);
            let mut axis = 0;
            loop {
                if axis == k {
                    return;
                }
                if coords[axis] < bound {
                    coords[axis] += 1;
                    break;
                }
                coords[axis] = -bound;
                axis += 1;
            }
        }
    }
}

/// Picks up to two basis columns whose real 2-vectors are best conditioned.
fn choose_pivots(basis: &[ApproxComplex]) -> Vec<usize> {
    let scale = basis.iter().map(|b| b.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut best: Option<(f64, usize, usize)> = None;
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let det = (basis[i].re * basis[j].im - basis[j].re * basis[i].im).abs();
            if best.is_none_or(|(d, _, _)| det > d) {
                best = Some((det, i, j));
            }
        }
    }
    match best {
        Some((det, i, j)) if det > 1e-9 * scale * scale => vec![i, j],
        _ => {
            let first = (0..basis.len())
                .max_by(|&a, &b| basis[a].norm().total_cmp(&basis[b].norm()))
                .unwrap_or(0);
            vec![first]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, eval_str};
    use proptest::prelude::*;

    fn phi() -> ApproxComplex {
        eval_str("(1+sqrt(5))/2").unwrap()
    }

    fn golden() -> Lattice {
        Lattice::new(vec![c(1.0, 0.0), phi()], 1e-6).unwrap()
    }

    #[test]
    fn golden_member() {
        let l = golden();
        assert_eq!(l.in_lattice(c(1.0, 0.0) + phi()).unwrap(), Some(vec![1, 1]));
        assert_eq!(l.in_lattice(c(0.0, 0.0)).unwrap(), Some(vec![0, 0]));
    }

    #[test]
    fn sqrt2_not_in_golden_lattice() {
        // brute-force oracle: smallest residual |m1 + m2 phi - sqrt 2| over the box
        let l = golden();
        let x = 2f64.sqrt();
        let p = (1.0 + 5f64.sqrt()) / 2.0;
        let mut best = f64::INFINITY;
        for m2 in -l.search_bound()..=l.search_bound() {
            let r = x - m2 as f64 * p;
            best = best.min((r - r.round()).abs());
        }
        assert!(best > 1e-6, "oracle residual {best}");
        assert_eq!(l.in_lattice(c(x, 0.0)).unwrap(), None);
    }

    #[test]
    fn gaussian_integers_solved_directly() {
        let l = Lattice::new(vec![c(1.0, 0.0), c(0.0, 1.0)], 1e-9).unwrap();
        assert_eq!(l.in_lattice(c(3.0, -7.0)).unwrap(), Some(vec![3, -7]));
        assert_eq!(l.in_lattice(c(3.5, 0.0)).unwrap(), None);
    }

    #[test]
    fn dependent_basis_is_rejected() {
        // 1 and 2 are Q-dependent; 2*1 - 1*2 = 0 lies in the box
        let e = Lattice::new(vec![c(1.0, 0.0), c(2.0, 0.0)], 1e-6).unwrap_err();
        assert!(matches!(e, Error::IllConditioned(_)));
        // a basis that is nearly dependent over the reals is ill-conditioned too
        let e = Lattice::new(vec![c(1.0, 0.0), c(1.0, 1e-10)], 1e-12).unwrap_err();
        assert!(matches!(e, Error::IllConditioned(_)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn integer_combinations_are_recovered(m1 in -10i64..=10, m2 in -10i64..=10) {
            let l = golden();
            let x = c(m1 as f64, 0.0) + phi() * m2 as f64;
            prop_assert_eq!(l.in_lattice(x).unwrap(), Some(vec![m1, m2]));
        }

        #[test]
        fn eisenstein_combinations(m1 in -10i64..=10, m2 in -10i64..=10) {
            let w = eval_str("zeta(3,1)").unwrap();
            let l = Lattice::new(vec![c(1.0, 0.0), w], 1e-9).unwrap();
            let x = c(m1 as f64, 0.0) + w * m2 as f64;
            prop_assert_eq!(l.in_lattice(x).unwrap(), Some(vec![m1, m2]));
        }
    }
}
