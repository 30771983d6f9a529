//! Characters of a commutative probability group by simultaneous
//! diagonalization of the left-multiplication matrices.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{basis_vector, ensure_valid, haar_idempotent, multiply, ProbabilityGroup};
use crate::linalg::{eigenvalues, kernel_vector, CMatrix};
use crate::report::{Deviation, ValidationReport};
use crate::scalar::{c, real, ApproxComplex};
use crate::{Error, Result, Tolerances};

/// Number of reseedings before a degenerate random combination is fatal.
pub const MAX_ATTEMPTS: usize = 8;

/// Two eigenvalues closer than this (relative to the spectral scale) make a
/// random combination non-separating.
const SEPARATION: f64 = 1e-7;

/// Values are compared at this resolution when sorting characters.
const SORT_RESOLUTION: f64 = 1e-6;

/// Character table of a commutative probability group.
///
/// Row `j` of `values` is the character `mu_j` evaluated on the basis;
/// row 0 is the augmentation.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub values: Vec<Vec<ApproxComplex>>,
    pub codegrees: Vec<f64>,
    /// Row `j` holds the coefficients of the primitive idempotent `F_j`.
    pub idempotents: Vec<Vec<ApproxComplex>>,
    /// `j -> j*` with `mu_{j*} = conj(mu_j)`.
    pub star: Vec<usize>,
    /// `1 / phat_0(j, j*)`.
    pub dual_weights: Vec<f64>,
}

impl CharacterTable {
    pub fn rank(&self) -> usize {
        self.values.len()
    }

    /// `mu_j(x)` for a coefficient vector `x`.
    pub fn evaluate(&self, j: usize, x: &[ApproxComplex]) -> ApproxComplex {
        self.values[j].iter().zip(x).map(|(m, v)| m * v).sum()
    }
}

pub fn character_table(pg: &ProbabilityGroup, seed: u64, tol: &Tolerances) -> Result<CharacterTable> {
    character_table_with_attempts(pg, seed, tol, MAX_ATTEMPTS)
}

/// As [`character_table`] with an explicit reseeding budget.
pub fn character_table_with_attempts(
    pg: &ProbabilityGroup,
    seed: u64,
    tol: &Tolerances,
    attempts: usize,
) -> Result<CharacterTable> {
    ensure_valid(pg, tol)?;
    if let Some(w) = pg.commutativity_witness(tol.eq) {
        return Err(Error::NonCommutative(w));
    }
    let r = pg.rank();
    let lefts: Vec<CMatrix> = (0..r)
        .map(|a| nalgebra::DMatrix::from_row_slice(r, r, &pg.left_matrix(a)).map(real))
        .collect();

    let mut values = None;
    for attempt in 0..attempts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        let mut x = CMatrix::zeros(r, r);
        for l in &lefts {
            let w = rng.random_range(-1000i64..=1000) as f64 / rng.random_range(1i64..=97) as f64;
            x += l * real(w);
        }
        match separate(&x, &lefts) {
            Some(v) => {
                values = Some(v);
                break;
            }
            None => log::debug!("combination {attempt} is not separating; reseeding"),
        }
    }
    let values = values.ok_or(Error::DegenerateCombination { attempts })?;
    check_homomorphisms(pg, &values, tol)?;
    let values = canonical_order(pg, values)?;

    let codegrees = values
        .iter()
        .enumerate()
        .map(|(j, row)| {
            let n: ApproxComplex = (0..r).map(|a| row[a] * row[pg.dual()[a]] * pg.h()[a]).sum();
            if n.im.abs() > tol.eq * n.norm().max(1.0) || n.re <= 0.0 {
                Err(Error::Consistency(format!("codegree of character {j} is {n}")))
            } else {
                Ok(n.re)
            }
        })
        .collect::<Result<Vec<f64>>>()?;

    let star = star_involution(&values, tol)?;
    let dual_weights = (0..r)
        .map(|j| {
            let s: f64 = (0..r).map(|a| pg.h()[a] * values[j][a].norm_sqr()).sum();
            pg.n_a() / s
        })
        .collect();

    let mut table = CharacterTable {
        values,
        codegrees,
        idempotents: Vec::new(),
        star,
        dual_weights,
    };
    table.idempotents = primitive_idempotents(pg, &table, tol)?;
    Ok(table)
}

/// Diagonalizes `x` and reads each simultaneous eigenvector's character
/// values off the left-multiplication matrices. `None` when `x` has a
/// repeated eigenvalue.
fn separate(x: &CMatrix, lefts: &[CMatrix]) -> Option<Vec<Vec<ApproxComplex>>> {
    let r = x.nrows();
    let ev = eigenvalues(x)?;
    let scale = ev.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for i in 0..r {
        for j in i + 1..r {
            if (ev[i] - ev[j]).norm() < SEPARATION * scale {
                return None;
            }
        }
    }
    let mut rows = Vec::with_capacity(r);
    for &lambda in &ev {
        let (v, gap) = kernel_vector(x, lambda);
        if gap > 1e-6 {
            return None;
        }
        let vv = nalgebra::DVector::from_vec(v);
        let norm = vv.dotc(&vv);
        let row = lefts.iter().map(|l| vv.dotc(&(l * &vv)) / norm).collect();
        rows.push(row);
    }
    Some(rows)
}

fn check_homomorphisms(pg: &ProbabilityGroup, values: &[Vec<ApproxComplex>], tol: &Tolerances) -> Result<()> {
    let r = pg.rank();
    for (j, mu) in values.iter().enumerate() {
        for a in 0..r {
            for b in 0..r {
                let lhs: ApproxComplex = (0..r).map(|x| mu[x] * pg.p(a, b, x)).sum();
                let dev = (lhs - mu[a] * mu[b]).norm();
                if !(dev <= tol.eq) {
                    return Err(Error::HomomorphismCheckFailed(format!(
                        "character {j} at ({a}, {b}) deviates by {dev:.3e}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Places the augmentation first and sorts the rest lexicographically by
/// their values, real part before imaginary part, in basis order.
fn canonical_order(pg: &ProbabilityGroup, values: Vec<Vec<ApproxComplex>>) -> Result<Vec<Vec<ApproxComplex>>> {
    let aug = values
        .iter()
        .position(|row| row.iter().all(|z| (z - c(1.0, 0.0)).norm() < SORT_RESOLUTION))
        .ok_or_else(|| Error::Consistency("no character is the augmentation".into()))?;
    let mut rest: Vec<Vec<ApproxComplex>> = values
        .into_iter()
        .enumerate()
        .filter(|(j, _)| *j != aug)
        .map(|(_, row)| row)
        .collect();
    let mut ordered = vec![vec![c(1.0, 0.0); pg.rank()]];
    // selection sort: the tolerant comparison is not a total order
    while !rest.is_empty() {
        let mut best = 0;
        for k in 1..rest.len() {
            if compare_rows(&rest[k], &rest[best]) == Ordering::Less {
                best = k;
            }
        }
        ordered.push(rest.remove(best));
    }
    Ok(ordered)
}

fn compare_rows(x: &[ApproxComplex], y: &[ApproxComplex]) -> Ordering {
    for (a, b) in x.iter().zip(y) {
        for (p, q) in [(a.re, b.re), (a.im, b.im)] {
            if (p - q).abs() > SORT_RESOLUTION {
                return p.total_cmp(&q);
            }
        }
    }
    Ordering::Equal
}

fn star_involution(values: &[Vec<ApproxComplex>], tol: &Tolerances) -> Result<Vec<usize>> {
    let limit = tol.eq.sqrt().max(1e-6);
    (0..values.len())
        .map(|j| {
            values
                .iter()
                .position(|row| row.iter().zip(&values[j]).all(|(a, b)| (a - b.conj()).norm() < limit))
                .ok_or_else(|| Error::Consistency(format!("conjugate of character {j} is not a character")))
        })
        .collect()
}

/// `F_j = (1/n_j) sum_a h_a mu_j(a*) a`, verified to be orthogonal idempotents
/// summing to the unit with `F_0` equal to the Haar idempotent.
pub fn primitive_idempotents(
    pg: &ProbabilityGroup,
    table: &CharacterTable,
    tol: &Tolerances,
) -> Result<Vec<Vec<ApproxComplex>>> {
    let r = pg.rank();
    let f: Vec<Vec<ApproxComplex>> = (0..r)
        .map(|j| {
            (0..r)
                .map(|a| table.values[j][pg.dual()[a]] * (pg.h()[a] / table.codegrees[j]))
                .collect()
        })
        .collect();

    let scale = tol.eq * pg.n_a();
    let mut dev = Deviation::new(scale);
    for j in 0..r {
        for k in 0..r {
            let prod = multiply(pg, &f[j], &f[k]);
            for x in 0..r {
                let want = if j == k { f[j][x] } else { c(0.0, 0.0) };
                dev.record((prod[x] - want).norm(), &[j, k, x]);
            }
        }
    }
    let unit = basis_vector(r, pg.unit());
    for x in 0..r {
        let s: ApproxComplex = f.iter().map(|row| row[x]).sum();
        dev.record((s - unit[x]).norm(), &[r, x]);
    }
    let haar = haar_idempotent(pg, tol)?;
    for x in 0..r {
        dev.record((f[0][x] - haar[x]).norm(), &[0, x]);
    }
    if let Some(w) = dev.witness {
        return Err(Error::Consistency(format!(
            "primitive idempotents fail at {w:?} (max deviation {:.3e})",
            dev.max
        )));
    }
    Ok(f)
}

pub const FIRST_ORTHOGONALITY: &str = "first orthogonality";
pub const SECOND_ORTHOGONALITY: &str = "second orthogonality";

/// Row and column orthogonality of the character table:
/// `sum_a h_a mu_i(a) mu_j(a*) = delta_ij n_j` and
/// `sum_j mu_j(a) mu_j(b*) / n_j = delta_ab / h_a`.
/// Both pass when the maximal deviation is at most `tol.eq * n(A)`.
pub fn check_orthogonality(pg: &ProbabilityGroup, table: &CharacterTable, tol: &Tolerances) -> ValidationReport {
    let r = pg.rank();
    let limit = tol.eq * pg.n_a();
    let d = pg.dual();
    let mut first = Deviation::new(limit);
    for i in 0..r {
        for j in 0..r {
            let s: ApproxComplex = (0..r)
                .map(|a| table.values[i][a] * table.values[j][d[a]] * pg.h()[a])
                .sum();
            let want = if i == j { table.codegrees[j] } else { 0.0 };
            first.record((s - want).norm(), &[i, j]);
        }
    }
    let mut second = Deviation::new(limit);
    for a in 0..r {
        for b in 0..r {
            let s: ApproxComplex = (0..r)
                .map(|j| table.values[j][a] * table.values[j][d[b]] / table.codegrees[j])
                .sum();
            let want = if a == b { 1.0 / pg.h()[a] } else { 0.0 };
            second.record((s - want).norm(), &[a, b]);
        }
    }
    ValidationReport {
        checks: vec![
            first.into_check(FIRST_ORTHOGONALITY),
            second.into_check(SECOND_ORTHOGONALITY),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn table(pg: &ProbabilityGroup) -> CharacterTable {
        character_table(pg, 7, &Tolerances::default()).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn z2_table() {
        let t = table(&cyclic(2));
        assert!(close(t.values[1][1].re, -1.0));
        assert!(close(t.codegrees[0], 2.0) && close(t.codegrees[1], 2.0));
        assert!(close(t.idempotents[1][0].re, 0.5) && close(t.idempotents[1][1].re, -0.5));
    }

    #[test]
    fn fib_table() {
        let t = table(&fib());
        let phi = phi();
        assert!(close(t.values[1][1].re, (1.0 - phi) / phi));
        assert!(close(t.codegrees[0], (5.0 + 5f64.sqrt()) / 2.0));
        assert!(close(t.codegrees[1], (5.0 - 5f64.sqrt()) / 2.0));
        let inv: f64 = t.codegrees.iter().map(|n| 1.0 / n).sum();
        assert!(close(inv, 1.0));
        assert!(close(t.idempotents[1][0].re, 0.7236067977499789));
        assert!(close(t.idempotents[1][1].re, -0.7236067977499789));
    }

    #[test]
    fn s3rep_codegrees_follow_class_sizes() {
        let t = table(&s3rep());
        let want = [6.0, 2.0, 3.0];
        for (n, w) in t.codegrees.iter().zip(want) {
            assert!(close(*n, w), "{:?}", t.codegrees);
        }
        // transposition column: sgn -> -1, V' -> 0
        assert!(close(t.values[1][1].re, -1.0) && close(t.values[1][2].re, 0.0));
        assert!(close(t.values[2][2].re, -0.5));
    }

    #[test]
    fn cyclic_z4_has_conjugate_pairs() {
        let t = table(&cyclic(4));
        assert_eq!(t.rank(), 4);
        for j in 0..4 {
            let s = t.star[j];
            assert_eq!(t.star[s], j);
            for a in 0..4 {
                assert!((t.values[s][a] - t.values[j][a].conj()).norm() < 1e-9);
            }
        }
        assert!(t.star.iter().enumerate().any(|(j, &s)| s != j));
    }

    #[test]
    fn orthogonality_passes() {
        let tol = Tolerances::default();
        for pg in [cyclic(2), cyclic(3), fib(), s3rep(), s3class()] {
            let t = table(&pg);
            let rep = check_orthogonality(&pg, &t, &tol);
            assert!(rep.all_passed(), "{rep:?}");
            assert!(rep.max_deviation() <= 1e-10);
        }
    }

    #[test]
    fn non_commutative_input_rejected() {
        // S3 group ring is non-commutative
        let g = crate::groups::examples::s3();
        let names = ["0", "1", "2", "3", "4", "5"];
        let inv: Vec<usize> = (0..6).map(|a| g.inv(a)).collect();
        let pg = from_fn(&names, inv, |a, b, c| (g.mul(a, b) == c) as u8 as f64);
        let e = character_table(&pg, 1, &Tolerances::default()).unwrap_err();
        assert!(matches!(e, Error::NonCommutative(_)));
    }

    #[test]
    fn zero_attempts_is_degenerate() {
        let e = character_table_with_attempts(&fib(), 1, &Tolerances::default(), 0).unwrap_err();
        assert!(matches!(e, Error::DegenerateCombination { attempts: 0 }));
    }

    #[test]
    fn seeds_agree() {
        let pg = s3class();
        let a = character_table(&pg, 1, &Tolerances::default()).unwrap();
        let b = character_table(&pg, 99, &Tolerances::default()).unwrap();
        for (x, y) in a.values.iter().flatten().zip(b.values.iter().flatten()) {
            assert!((x - y).norm() < 1e-9);
        }
    }
}
