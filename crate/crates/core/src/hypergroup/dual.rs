//! Dual structure constants and the dual hypergroup.

use super::characters::{character_table, CharacterTable};
use super::ProbabilityGroup;
use crate::report::{Check, Deviation, ValidationReport};
use crate::scalar::ApproxComplex;
use crate::{Error, Result, Tolerances};

pub const DUAL_NORMALIZATION: &str = "dual row sums";
pub const DUAL_UNIT_LAW: &str = "dual unit law";
pub const DUAL_INVOLUTION: &str = "dual involution";
pub const DUAL_TOTAL_WEIGHT: &str = "dual total weight";

/// Structure constants of the character set under pointwise product:
/// `mu_i mu_j = sum_k phat_k(i, j) mu_k`.
#[derive(Debug, Clone)]
pub struct DualHypergroup {
    rank: usize,
    phat: Vec<ApproxComplex>,
    pub star: Vec<usize>,
    /// `hhat_j = 1 / phat_0(j, j*)`.
    pub weights: Vec<f64>,
    pub total_weight: f64,
    /// Every constant is real and at least `-tol.eq`.
    pub dualizable: bool,
    pub checks: ValidationReport,
}

impl DualHypergroup {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `phat_k(i, j)`
    pub fn phat(&self, i: usize, j: usize, k: usize) -> ApproxComplex {
        self.phat[(i * self.rank + j) * self.rank + k]
    }

    /// The dual as a probability group on the character indices.
    pub fn to_probability_group(&self, labels: Vec<String>, tol: &Tolerances) -> Result<ProbabilityGroup> {
        if !self.dualizable {
            return Err(Error::InvalidStructure {
                what: "dualizable probability group",
                detail: "some dual structure constant is negative or non-real".into(),
            });
        }
        let p = self.phat.iter().map(|z| z.re).collect();
        ProbabilityGroup::new(labels, 0, self.star.clone(), p, tol)
    }
}

/// `phat_k(i, j) = (1/n_k) sum_a h_a mu_i(a) mu_j(a) mu_k(a*)`, with the row
/// sums, the unit law `phat_0(i, j) = (n_i/n(A)) delta_{i, j*}` and
/// `n(Ahat) = n(A)` checked.
pub fn dual_constants(pg: &ProbabilityGroup, table: &CharacterTable, tol: &Tolerances) -> DualHypergroup {
    let r = pg.rank();
    let mu = &table.values;
    let h = pg.h();
    let d = pg.dual();
    let mut phat = vec![ApproxComplex::new(0.0, 0.0); r * r * r];
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let s: ApproxComplex = (0..r).map(|a| mu[i][a] * mu[j][a] * mu[k][d[a]] * h[a]).sum();
                phat[(i * r + j) * r + k] = s / table.codegrees[k];
            }
        }
    }
    let at = |i: usize, j: usize, k: usize| phat[(i * r + j) * r + k];

    let mut dualizable = true;
    for z in &phat {
        if z.im.abs() > tol.eq || z.re < -tol.eq {
            dualizable = false;
        }
    }

    let mut rows = Deviation::new(tol.eq);
    for i in 0..r {
        for j in 0..r {
            let s: ApproxComplex = (0..r).map(|k| at(i, j, k)).sum();
            rows.record((s - 1.0).norm(), &[i, j]);
        }
    }

    let mut unit = Deviation::new(tol.eq);
    for i in 0..r {
        for j in 0..r {
            let want = if i == table.star[j] {
                table.codegrees[i] / pg.n_a()
            } else {
                0.0
            };
            unit.record((at(i, j, 0) - want).norm(), &[i, j]);
        }
    }

    // involution read off the unit coefficients must match the conjugate rows
    let mut involution = Check::new(DUAL_INVOLUTION, true);
    for j in 0..r {
        let hits: Vec<usize> = (0..r).filter(|&x| at(j, x, 0).norm() > tol.eq).collect();
        if hits != [table.star[j]] {
            involution = Check::new(DUAL_INVOLUTION, false)
                .with_witness(Some(vec![j]))
                .with_detail(format!("unit support {hits:?}, conjugate row {}", table.star[j]));
            break;
        }
    }

    let weights: Vec<f64> = (0..r).map(|j| 1.0 / at(j, table.star[j], 0).re).collect();
    let total_weight: f64 = weights.iter().sum();
    let total = Check::within(DUAL_TOTAL_WEIGHT, (total_weight - pg.n_a()).abs() / pg.n_a(), tol.eq);

    DualHypergroup {
        rank: r,
        phat,
        star: table.star.clone(),
        weights,
        total_weight,
        dualizable,
        checks: ValidationReport {
            checks: vec![
                rows.into_check(DUAL_NORMALIZATION),
                unit.into_check(DUAL_UNIT_LAW),
                involution,
                total,
            ],
        },
    }
}

/// `sum_j n_j F_j (x) F_j = sum_a h_a a (x) a*`, compared entrywise.
pub fn dual_basis_identity(pg: &ProbabilityGroup, table: &CharacterTable, tol: &Tolerances) -> Check {
    let r = pg.rank();
    let mut dev = Deviation::new(tol.eq);
    for x in 0..r {
        for y in 0..r {
            let s: ApproxComplex = (0..r)
                .map(|j| table.idempotents[j][x] * table.idempotents[j][y] * table.codegrees[j])
                .sum();
            let want = if y == pg.dual()[x] { pg.h()[x] } else { 0.0 };
            dev.record((s - want).norm(), &[x, y]);
        }
    }
    dev.into_check("dual basis identity")
}

/// Rebuilds the dual of the dual and compares it with `pg`.
///
/// Each character of the dual is matched to the basis element `a` at which
/// it evaluates the original characters; the structure constants must then
/// agree under that relabeling.
pub fn double_dual_check(pg: &ProbabilityGroup, table: &CharacterTable, tol: &Tolerances, seed: u64) -> Result<Check> {
    let r = pg.rank();
    let dual = dual_constants(pg, table, tol);
    let labels = (0..r).map(|j| format!("chi{j}")).collect();
    let dual_pg = dual.to_probability_group(labels, tol)?;
    let dual_table = character_table(&dual_pg, seed, tol)?;
    let limit = tol.eq.sqrt().max(1e-6);
    let mut to_basis = vec![usize::MAX; r];
    for (k, slot) in to_basis.iter_mut().enumerate() {
        let hits: Vec<usize> = (0..r)
            .filter(|&a| (0..r).all(|j| (dual_table.values[k][j] - table.values[j][a]).norm() < limit))
            .collect();
        match hits.as_slice() {
            [a] => *slot = *a,
            _ => {
                return Err(Error::IsomorphismFailure(format!(
                    "character {k} of the dual matches basis elements {hits:?}"
                )))
            }
        }
    }
    let double = dual_constants(&dual_pg, &dual_table, tol);
    let mut dev = Deviation::new(tol.eq);
    for x in 0..r {
        for y in 0..r {
            for z in 0..r {
                let q = double.phat(x, y, z);
                let p = pg.p(to_basis[x], to_basis[y], to_basis[z]);
                dev.record((q - p).norm(), &[x, y, z]);
            }
        }
    }
    Ok(dev.into_check("double dual"))
}
