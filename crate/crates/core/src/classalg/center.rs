use super::{build_class_algebra, ClassAlgebra, ModularData};
use crate::fusion::{fp_dimensions, to_probability_group_with, FusionRing};
use crate::hypergroup::character_table;
use crate::report::{Check, Deviation, ValidationReport};
use crate::scalar::ApproxComplex;
use crate::{Error, Result, Tolerances};

pub const BRANCHING_DIMS: &str = "branching preserves dimensions";
pub const BRANCHING_IOTA: &str = "embedding restricts to the identity";

pub const RESTRICTIONS: &str = "restrictions are base characters";
pub const CENTER_FP: &str = "center dimensions are FP dimensions";
pub const SIGMA_IN_CLASS: &str = "sigma(j) lies in A_j";
pub const SIGMA_DIMS: &str = "sigma(j) has the class dimension";
pub const PUSHED_CONSTANTS: &str = "dual constants from the center";
pub const DIVISIBILITY: &str = "class dimensions divide squared dimensions";
pub const INVERTIBLE_CLASSES: &str = "invertible simples lie over unit-dimension classes";
pub const UNIT_COEFFICIENT: &str = "dual unit coefficient is the inverse class dimension";

/// A based ring together with modular data for its center, the branching
/// matrix `B[s][i]` (multiplicity of base simple `i` in the image of center
/// simple `s`) and the embedding `i -> iota[i]` of base simples.
#[derive(Debug, Clone)]
pub struct CenterPair {
    pub base: FusionRing,
    pub center: ModularData,
    pub branching: Vec<Vec<i64>>,
    pub iota: Vec<usize>,
}

impl CenterPair {
    pub fn new(base: FusionRing, center: ModularData, branching: Vec<Vec<i64>>, iota: Vec<usize>) -> Result<Self> {
        let (r, m) = (base.rank(), center.rank());
        if branching.len() != m || branching.iter().any(|row| row.len() != r) {
            return Err(Error::Malformed(format!("branching matrix must be {m}x{r}")));
        }
        if branching.iter().flatten().any(|&b| b < 0) {
            return Err(Error::Malformed("branching multiplicities must be non-negative".into()));
        }
        if iota.len() != r || iota.iter().any(|&s| s >= m) {
            return Err(Error::Malformed("embedding has the wrong length or range".into()));
        }
        Ok(CenterPair {
            base,
            center,
            branching,
            iota,
        })
    }

    /// `sum_i B[s][i] d_i = dhat_s` and `B[iota(i)]` is the indicator of `i`.
    pub fn invariants(&self, tol: &Tolerances) -> Result<ValidationReport> {
        let d = fp_dimensions(&self.base, tol)?.fpdim;
        let dhat = self.center.dims();
        let mut dims = Deviation::new(tol.eq);
        for (s, row) in self.branching.iter().enumerate() {
            let sum: f64 = row.iter().zip(&d).map(|(&b, x)| b as f64 * x).sum();
            dims.record((dhat[s] - sum).norm(), &[s]);
        }
        let mut iota = Check::new(BRANCHING_IOTA, true);
        for (i, &s) in self.iota.iter().enumerate() {
            if let Some(k) = (0..d.len()).find(|&k| self.branching[s][k] != (k == i) as i64) {
                iota = Check::new(BRANCHING_IOTA, false).with_witness(Some(vec![i, k]));
                break;
            }
        }
        Ok(ValidationReport {
            checks: vec![dims.into_check(BRANCHING_DIMS), iota],
        })
    }
}

#[derive(Debug, Clone)]
pub struct CenterPairReport {
    /// `A_j`: center simples whose restriction along the embedding is `mu_j`.
    pub classes: Vec<Vec<usize>>,
    /// Center simples whose idempotent is killed by the forgetful map.
    pub residual: Vec<usize>,
    pub sigma: Vec<usize>,
    pub center_dims: Vec<f64>,
    pub class_dims: Vec<f64>,
    pub restriction: ValidationReport,
    pub matching: ValidationReport,
    pub constants: ValidationReport,
    pub divisibility: ValidationReport,
}

impl CenterPairReport {
    pub fn phases(&self) -> [(&'static str, &ValidationReport); 4] {
        [
            ("restriction", &self.restriction),
            ("matching", &self.matching),
            ("constants", &self.constants),
            ("divisibility", &self.divisibility),
        ]
    }

    pub fn all_passed(&self) -> bool {
        self.phases().iter().all(|(_, r)| r.all_passed())
    }
}

pub fn center_pair_check(cp: &CenterPair, tol: &Tolerances, seed: u64) -> Result<CenterPairReport> {
    let inv = cp.invariants(tol)?;
    if let Some(f) = inv.first_failure() {
        return Err(Error::CenterPair(format!("{} fails at {:?}", f.name, f.witness)));
    }
    let ca = build_class_algebra(&cp.base, tol, seed)?;
    let r = ca.rank();
    let m = cp.center.rank();
    let s = cp.center.normalized();
    let limit = tol.eq.sqrt().max(1e-6);

    let dhat_c = cp.center.dims();
    if let Some(v) = (0..m).find(|&v| dhat_c[v].im.abs() > tol.eq || dhat_c[v].re <= 0.0) {
        return Err(Error::CenterPair(format!(
            "center dimension {v} is not positive: {}",
            dhat_c[v]
        )));
    }
    let dhat: Vec<f64> = dhat_c.iter().map(|z| z.re).collect();

    // center characters and idempotents from the hypergroup engine
    let center_ring = cp.center.verlinde_ring(tol)?;
    let cfp = fp_dimensions(&center_ring, tol)?;
    let center_pg = to_probability_group_with(&center_ring, &cfp, tol)?;
    let ct = character_table(&center_pg, seed, tol)?;
    let mut idempotent_of = vec![None; m];
    for e in 0..m {
        let v = (0..m)
            .filter(|&v| (0..m).all(|t| (ct.values[e][t] - s[t][v] / (s[0][v] * dhat[t])).norm() < limit))
            .collect::<Vec<_>>();
        match v.as_slice() {
            [v] if idempotent_of[*v].is_none() => idempotent_of[*v] = Some(e),
            _ => {
                return Err(Error::CenterPair(format!(
                    "center character {e} matches S columns {v:?}"
                )))
            }
        }
    }

    // (a) restriction along the embedding
    let mut classes = vec![Vec::new(); r];
    let mut unmatched = None;
    for v in 0..m {
        let restricted: Vec<ApproxComplex> = (0..r).map(|i| s[cp.iota[i]][v] / (s[0][v] * ca.dims[i])).collect();
        let hits: Vec<usize> = (0..r)
            .filter(|&j| (0..r).all(|i| (ca.table.values[j][i] - restricted[i]).norm() < limit))
            .collect();
        match hits.as_slice() {
            [j] => classes[*j].push(v),
            _ => {
                unmatched.get_or_insert(v);
            }
        }
    }
    let mut fp_dev = Deviation::new(tol.eq);
    for v in 0..m {
        fp_dev.record((cfp.fpdim[v] - dhat[v]).abs(), &[v]);
    }
    let restriction = ValidationReport {
        checks: vec![
            Check::new(RESTRICTIONS, unmatched.is_none()).with_witness(unmatched.map(|v| vec![v])),
            fp_dev.into_check(CENTER_FP),
        ],
    };

    // (b) push each center idempotent forward to the base
    let pushed: Vec<Vec<ApproxComplex>> = (0..m)
        .map(|v| {
            let e = idempotent_of[v].expect("every simple has an idempotent");
            (0..r)
                .map(|i| {
                    let g: ApproxComplex = (0..m)
                        .map(|t| ct.idempotents[e][t] / dhat[t] * cp.branching[t][i] as f64)
                        .sum();
                    g * ca.dims[i]
                })
                .collect()
        })
        .collect();
    let residual: Vec<usize> = (0..m).filter(|&v| pushed[v].iter().all(|z| z.norm() < limit)).collect();
    let mut sigma = Vec::with_capacity(r);
    for j in 0..r {
        let hits: Vec<usize> = (0..m)
            .filter(|&v| (0..r).all(|i| (pushed[v][i] - ca.table.idempotents[j][i]).norm() < limit))
            .collect();
        match hits.as_slice() {
            [v] => sigma.push(*v),
            _ => {
                return Err(Error::CenterPair(format!(
                    "idempotent {j} is the image of center idempotents {hits:?}"
                )))
            }
        }
    }
    let outside = (0..r).find(|&j| !classes[j].contains(&sigma[j]));
    let mut dims = Deviation::new(tol.eq);
    for j in 0..r {
        dims.record((dhat[sigma[j]] - ca.class_dims[j]).abs(), &[j]);
    }
    let matching = ValidationReport {
        checks: vec![
            Check::new(SIGMA_IN_CLASS, outside.is_none()).with_witness(outside.map(|j| vec![j])),
            dims.into_check(SIGMA_DIMS),
        ],
    };

    // (c) dual constants of the base from center fusion
    let mut pushed_dev = Deviation::new(10.0 * tol.eq);
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let (a, b) = (sigma[i], sigma[j]);
                let sum: f64 = classes[k]
                    .iter()
                    .map(|&v| center_ring.n_f64(a, b, v) * dhat[v] / (dhat[a] * dhat[b]))
                    .sum();
                pushed_dev.record((ca.dual.phat(i, j, k) - sum).norm(), &[i, j, k]);
            }
        }
    }
    let constants = ValidationReport {
        checks: vec![pushed_dev.into_check(PUSHED_CONSTANTS)],
    };

    let divisibility = divisibility_checks(&ca, &classes, &dhat, tol);
    Ok(CenterPairReport {
        classes,
        residual,
        sigma,
        center_dims: dhat,
        class_dims: ca.class_dims.clone(),
        restriction,
        matching,
        constants,
        divisibility,
    })
}

fn divisibility_checks(ca: &ClassAlgebra, classes: &[Vec<usize>], dhat: &[f64], tol: &Tolerances) -> ValidationReport {
    let r = ca.rank();
    let mut unit = Deviation::new(tol.eq);
    for i in 0..r {
        let star = ca.table.star[i];
        unit.record((ca.dual.phat(i, star, 0).re - 1.0 / ca.class_dims[i]).abs(), &[i]);
    }
    let mut checks = vec![unit.into_check(UNIT_COEFFICIENT)];

    let int = |x: f64| ((x - x.round()).abs() <= tol.int).then_some(x.round() as i64);
    let class_ints: Option<Vec<i64>> = ca.class_dims.iter().map(|&x| int(x)).collect();
    let square_ints: Option<Vec<i64>> = dhat.iter().map(|&x| int(x * x)).collect();
    match (class_ints, square_ints) {
        (Some(cd), Some(sq)) => {
            let mut w = None;
            'outer: for (i, cls) in classes.iter().enumerate() {
                for &s in cls {
                    if cd[i] == 0 || sq[s] % cd[i] != 0 {
                        w = Some(vec![i, s]);
                        break 'outer;
                    }
                }
            }
            checks.push(Check::new(DIVISIBILITY, w.is_none()).with_witness(w));
            let mut w = None;
            for (j, cls) in classes.iter().enumerate() {
                if let Some(&s) = cls.iter().find(|&&s| (dhat[s] - 1.0).abs() <= tol.eq) {
                    if cd[j] != 1 {
                        w = Some(vec![j, s]);
                        break;
                    }
                }
            }
            checks.push(Check::new(INVERTIBLE_CLASSES, w.is_none()).with_witness(w));
        }
        _ => checks.push(Check::new(DIVISIBILITY, true).with_detail("skipped: dimensions are not integral")),
    }
    ValidationReport { checks }
}
