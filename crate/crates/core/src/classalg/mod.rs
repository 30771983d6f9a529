//! Class algebra of a commutative fusion ring: class dimensions, class sums
//! as scaled characters, Burnside-type structure constants, integrality,
//! and the modular and center-pair checks.

mod center;
mod modular;

pub use center::{center_pair_check, CenterPair, CenterPairReport};
pub use modular::{verify_self_dual, ModularData};

use crate::fusion::{fp_dimensions, to_probability_group_with, validate_fusion_ring, FusionRing};
use crate::hypergroup::{character_table, dual_constants, multiply, CharacterTable, DualHypergroup, ProbabilityGroup};
use crate::linalg::{solve, CMatrix};
use crate::report::{Check, Deviation, ValidationReport};
use crate::scalar::{is_nonneg_integer, ApproxComplex, Lattice};
use crate::{Error, Result, Tolerances};

pub const UNIT_CLASS: &str = "unit class dimension";
pub const CLASS_DIM_SUM: &str = "class dimensions sum";
pub const COINTEGRAL: &str = "cointegral";
pub const CLASS_EVALUATION: &str = "class-sum evaluation";
pub const CLASS_ROW_ORTHOGONALITY: &str = "class row orthogonality";
pub const CLASS_COLUMN_ORTHOGONALITY: &str = "class column orthogonality";
pub const CENTRAL_LEMMA: &str = "central lemma";

/// The class algebra attached to a commutative based ring with dimension
/// function `d = FPdim`.
#[derive(Debug, Clone)]
pub struct ClassAlgebra {
    pub ring: FusionRing,
    /// `d_i`
    pub dims: Vec<f64>,
    /// `dim C = sum_i d_i d_i*`
    pub dim: f64,
    pub group: ProbabilityGroup,
    pub table: CharacterTable,
    pub dual: DualHypergroup,
    /// `dim(C^j) = dim C / n_j`
    pub class_dims: Vec<f64>,
    /// `class_sums[j][i] = chi_i(C_j) = dim(C^j) d_i mu_j(b'_i)`.
    pub class_sums: Vec<Vec<ApproxComplex>>,
    /// Flat `c_{ij}^k`, indexed `(i * rank + j) * rank + k`.
    pub constants: Vec<ApproxComplex>,
    /// Coefficients of `lambda = (1/dim C) sum_i d_i chi_i` on the simple basis.
    pub cointegral: Vec<f64>,
    pub checks: ValidationReport,
}

impl ClassAlgebra {
    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    /// `chi_i(C_j)`
    pub fn class_value(&self, i: usize, j: usize) -> ApproxComplex {
        self.class_sums[j][i]
    }

    /// `c_{ij}^k`
    pub fn constant(&self, i: usize, j: usize, k: usize) -> ApproxComplex {
        let r = self.rank();
        self.constants[(i * r + j) * r + k]
    }
}

pub fn build_class_algebra(ring: &FusionRing, tol: &Tolerances, seed: u64) -> Result<ClassAlgebra> {
    let report = validate_fusion_ring(ring);
    if let Some(f) = report.first_failure() {
        return Err(Error::InvalidStructure {
            what: "fusion ring",
            detail: format!("{} fails at {:?}", f.name, f.witness),
        });
    }
    if !ring.is_based() {
        return Err(Error::InvalidStructure {
            what: "based ring",
            detail: "the unit coefficient is not a Kronecker delta".into(),
        });
    }
    if let Some(w) = ring.commutativity_witness() {
        return Err(Error::NonCommutative(w));
    }
    let fp = fp_dimensions(ring, tol)?;
    let group = to_probability_group_with(ring, &fp, tol)?;
    let table = character_table(&group, seed, tol)?;
    let dual = dual_constants(&group, &table, tol);
    let r = ring.rank();
    let dims = fp.fpdim.clone();
    let dim = fp.total;
    let class_dims: Vec<f64> = table.codegrees.iter().map(|n| dim / n).collect();
    let class_sums: Vec<Vec<ApproxComplex>> = (0..r)
        .map(|j| (0..r).map(|i| table.values[j][i] * (class_dims[j] * dims[i])).collect())
        .collect();
    let cointegral: Vec<f64> = dims.iter().map(|d| d / dim).collect();

    let mut ca = ClassAlgebra {
        ring: ring.clone(),
        dims,
        dim,
        group,
        table,
        dual,
        class_dims,
        class_sums,
        constants: Vec::new(),
        cointegral,
        checks: ValidationReport::default(),
    };
    ca.checks = class_checks(&ca, tol)?;
    ca.constants = burnside_constants(&ca, tol)?;
    Ok(ca)
}

fn class_checks(ca: &ClassAlgebra, tol: &Tolerances) -> Result<ValidationReport> {
    let r = ca.rank();
    let mut checks = vec![Check::within(UNIT_CLASS, (ca.class_dims[0] - 1.0).abs(), tol.eq)];
    let total: f64 = ca.class_dims.iter().sum();
    checks.push(Check::within(CLASS_DIM_SUM, (total - ca.dim).abs(), tol.eq * ca.dim));

    // lambda chi = chi(1) lambda, computed in the normalized basis where
    // chi_i = d_i b'_i and lambda = (1/dim C) sum_i d_i^2 b'_i
    let lambda: Vec<f64> = (0..r).map(|i| ca.cointegral[i] * ca.dims[i]).collect();
    let mut dev = Deviation::new(tol.eq);
    for i in 0..r {
        let mut chi = vec![0.0; r];
        chi[i] = ca.dims[i];
        let prod = multiply(&ca.group, &chi, &lambda);
        for x in 0..r {
            dev.record((prod[x] - ca.dims[i] * lambda[x]).abs(), &[i, x]);
        }
    }
    checks.push(dev.into_check(COINTEGRAL));

    // expand chi_i over the primitive idempotents; the coefficient of F_j
    // must be chi_i(C_j) / dim(C^j)
    let f = CMatrix::from_fn(r, r, |x, j| ca.table.idempotents[j][x]);
    let mut dev = Deviation::new(tol.eq);
    for i in 0..r {
        let mut chi = vec![ApproxComplex::new(0.0, 0.0); r];
        chi[i] = ApproxComplex::new(ca.dims[i], 0.0);
        let coeffs = solve(&f, &chi).ok_or_else(|| Error::Consistency("idempotents are linearly dependent".into()))?;
        for j in 0..r {
            let want = ca.class_value(i, j) / ca.class_dims[j];
            dev.record((coeffs[j] - want).norm(), &[j, i]);
        }
    }
    checks.push(dev.into_check(CLASS_EVALUATION));

    let star = ca.ring.dual();
    let limit = tol.eq * ca.dim;
    let mut rows = Deviation::new(limit);
    for i in 0..r {
        for j in 0..r {
            let s: ApproxComplex = (0..r)
                .map(|k| ca.class_value(i, k) * ca.class_value(star[j], k) / ca.class_dims[k])
                .sum();
            let want = if i == j { ca.dim } else { 0.0 };
            rows.record((s - want).norm(), &[i, j]);
        }
    }
    checks.push(rows.into_check(CLASS_ROW_ORTHOGONALITY));
    let mut cols = Deviation::new(limit);
    for l in 0..r {
        for k in 0..r {
            let s: ApproxComplex = (0..r).map(|i| ca.class_value(i, l) * ca.class_value(star[i], k)).sum();
            let want = if l == k { ca.class_dims[k] * ca.dim } else { 0.0 };
            cols.record((s - want).norm(), &[l, k]);
        }
    }
    checks.push(cols.into_check(CLASS_COLUMN_ORTHOGONALITY));
    Ok(ValidationReport { checks })
}

/// Structure constants of the class sums, computed twice: from the character
/// sum `sum_s chi_s(C_i) chi_s(C_j) chi_s*(C_k) / (dim C dim(C^k) d_s)` and by
/// rescaling the dual constants, `dim(C^i) dim(C^j) / dim(C^k) phat_k(i, j)`.
/// Disagreement beyond `10 tol.eq` is an internal error.
pub fn burnside_constants(ca: &ClassAlgebra, tol: &Tolerances) -> Result<Vec<ApproxComplex>> {
    let r = ca.rank();
    let star = ca.ring.dual();
    let mut out = Vec::with_capacity(r * r * r);
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let by_characters: ApproxComplex = (0..r)
                    .map(|s| {
                        ca.class_value(s, i) * ca.class_value(s, j) * ca.class_value(star[s], k)
                            / (ca.dim * ca.class_dims[k] * ca.dims[s])
                    })
                    .sum();
                let by_dual = ca.dual.phat(i, j, k) * (ca.class_dims[i] * ca.class_dims[j] / ca.class_dims[k]);
                if !((by_characters - by_dual).norm() <= 10.0 * tol.eq) {
                    return Err(Error::FormulaMismatch {
                        witness: (i, j, k),
                        a: by_characters.to_string(),
                        b: by_dual.to_string(),
                    });
                }
                out.push(by_characters);
            }
        }
    }
    Ok(out)
}

/// `d_i chi_i(z z') = chi_i(z) chi_i(z')` for all class sums `z, z'`, with
/// the product `z z'` expanded through the structure constants.
pub fn verify_central_lemma(ca: &ClassAlgebra, tol: &Tolerances) -> Check {
    let r = ca.rank();
    let mut dev = Deviation::new(tol.eq * ca.dim * ca.dim);
    for i in 0..r {
        for a in 0..r {
            for b in 0..r {
                let prod: ApproxComplex = (0..r).map(|k| ca.constant(a, b, k) * ca.class_value(i, k)).sum();
                let lhs = prod * ca.dims[i];
                let rhs = ca.class_value(i, a) * ca.class_value(i, b);
                dev.record((lhs - rhs).norm(), &[i, a, b]);
            }
        }
    }
    dev.into_check(CENTRAL_LEMMA)
}

/// How a value was recognized as an algebraic integer.
#[derive(Debug, Clone, PartialEq)]
pub enum Integrality {
    NonNegativeInteger(i64),
    LatticeMember(Vec<i64>),
    Unresolved,
}

impl Integrality {
    pub fn is_resolved(&self) -> bool {
        !matches!(self, Integrality::Unresolved)
    }

    pub fn label(&self) -> String {
        match self {
            Integrality::NonNegativeInteger(n) => format!("integer {n}"),
            Integrality::LatticeMember(m) => format!("lattice {m:?}"),
            Integrality::Unresolved => "unresolved".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IntegralityReport {
    /// `dim C` is an integer within `tol.int`.
    pub weakly_integral: bool,
    /// `(i, j, k, dim C * c_ij^k, verdict)`
    pub constants: Vec<(usize, usize, usize, ApproxComplex, Integrality)>,
    /// `(j, n_j, verdict)`
    pub codegrees: Vec<(usize, f64, Integrality)>,
    pub lattice_given: bool,
}

pub const CONSTANTS_INTEGRAL: &str = "scaled constants are non-negative integers";
pub const CONSTANTS_ALGEBRAIC: &str = "scaled constants are lattice members";
pub const CODEGREES_INTEGRAL: &str = "codegrees are non-negative integers";
pub const CODEGREES_ALGEBRAIC: &str = "codegrees are lattice members";

impl IntegralityReport {
    /// Assertions that apply to this input: the integer verdicts under the
    /// weakly integral hypothesis, the lattice verdicts when a lattice was
    /// supplied. Otherwise values are only reported.
    pub fn checks(&self) -> ValidationReport {
        let mut checks = Vec::new();
        let constants = |ok: &dyn Fn(&Integrality) -> bool| {
            self.constants
                .iter()
                .find(|(.., v)| !ok(v))
                .map(|(i, j, k, ..)| vec![*i, *j, *k])
        };
        let codegrees =
            |ok: &dyn Fn(&Integrality) -> bool| self.codegrees.iter().find(|(.., v)| !ok(v)).map(|(j, ..)| vec![*j]);
        let integer = |v: &Integrality| matches!(v, Integrality::NonNegativeInteger(_));
        let resolved = |v: &Integrality| v.is_resolved();
        if self.weakly_integral {
            let w = constants(&integer);
            checks.push(Check::new(CONSTANTS_INTEGRAL, w.is_none()).with_witness(w));
            let w = codegrees(&integer);
            checks.push(Check::new(CODEGREES_INTEGRAL, w.is_none()).with_witness(w));
        }
        if self.lattice_given {
            let w = constants(&resolved);
            checks.push(Check::new(CONSTANTS_ALGEBRAIC, w.is_none()).with_witness(w));
            let w = codegrees(&resolved);
            checks.push(Check::new(CODEGREES_ALGEBRAIC, w.is_none()).with_witness(w));
        }
        ValidationReport { checks }
    }
}

fn classify(x: ApproxComplex, lattice: Option<&Lattice>, tol: &Tolerances) -> Result<Integrality> {
    if let Some(n) = is_nonneg_integer(x, tol.int) {
        return Ok(Integrality::NonNegativeInteger(n));
    }
    if let Some(l) = lattice {
        if let Some(m) = l.in_lattice(x)? {
            return Ok(Integrality::LatticeMember(m));
        }
    }
    Ok(Integrality::Unresolved)
}

/// Classifies every `dim C * c_ij^k` and every codegree `n_j`.
pub fn integrality_report(ca: &ClassAlgebra, lattice: Option<&Lattice>, tol: &Tolerances) -> Result<IntegralityReport> {
    let r = ca.rank();
    let mut constants = Vec::with_capacity(r * r * r);
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let v = ca.constant(i, j, k) * ca.dim;
                constants.push((i, j, k, v, classify(v, lattice, tol)?));
            }
        }
    }
    let codegrees = ca
        .table
        .codegrees
        .iter()
        .enumerate()
        .map(|(j, &n)| Ok((j, n, classify(ApproxComplex::new(n, 0.0), lattice, tol)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntegralityReport {
        weakly_integral: (ca.dim - ca.dim.round()).abs() <= tol.int,
        constants,
        codegrees,
        lattice_given: lattice.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::fixtures::*;
    use crate::scalar::c;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn build(ring: &FusionRing) -> ClassAlgebra {
        build_class_algebra(ring, &tol(), 17).unwrap()
    }

    fn near(v: &[f64], w: &[f64]) -> bool {
        v.len() == w.len() && v.iter().zip(w).all(|(a, b)| (a - b).abs() < 1e-9)
    }

    #[test]
    fn class_dimensions() {
        assert!(near(&build(&cyclic(2)).class_dims, &[1.0, 1.0]));
        let s3 = build(&s3rep());
        assert!(near(&s3.class_dims, &[1.0, 3.0, 2.0]));
        assert!((s3.dim - 6.0).abs() < 1e-12);
        // ordered (1, sigma class, eps class)
        let is = build(&ising(vec![0, 1, 2]));
        assert!(near(&is.class_dims, &[1.0, 2.0, 1.0]), "{:?}", is.class_dims);
        for ca in [s3, is] {
            assert!(ca.checks.all_passed(), "{:?}", ca.checks);
        }
    }

    #[test]
    fn z2_sign_functional() {
        let ca = build(&cyclic(2));
        assert!((ca.class_value(1, 1) - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((ca.class_value(0, 1) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn s3_constants() {
        let ca = build(&s3rep());
        let tt: Vec<f64> = (0..3).map(|k| ca.constant(1, 1, k).re).collect();
        assert!(near(&tt, &[3.0, 0.0, 3.0]), "{tt:?}");
        let tr: Vec<f64> = (0..3).map(|k| ca.constant(1, 2, k).re).collect();
        assert!(near(&tr, &[0.0, 2.0, 0.0]), "{tr:?}");
    }

    #[test]
    fn ising_constants() {
        let ca = build(&ising(vec![0, 1, 2]));
        // sigma class is index 1 here
        let ss: Vec<f64> = (0..3).map(|k| ca.constant(1, 1, k).re).collect();
        assert!(near(&ss, &[2.0, 0.0, 2.0]), "{ss:?}");
        let rep = integrality_report(&ca, None, &tol()).unwrap();
        assert!(rep.weakly_integral);
        assert!(rep.checks().all_passed());
        for (_, _, _, v, _) in &rep.constants {
            let n = v.re.round();
            assert!([0.0, 4.0, 8.0].contains(&n));
        }
    }

    #[test]
    fn fib_needs_a_lattice() {
        let ca = build(&fib());
        let rep = integrality_report(&ca, None, &tol()).unwrap();
        assert!(!rep.weakly_integral);
        assert!(rep.checks().checks.is_empty());
        assert!(rep.codegrees.iter().any(|(_, _, v)| !v.is_resolved()));
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let l = Lattice::new(vec![c(1.0, 0.0), c(phi, 0.0)], tol().int).unwrap();
        let rep = integrality_report(&ca, Some(&l), &tol()).unwrap();
        assert!(rep.checks().all_passed(), "{:?}", rep.checks());
    }

    #[test]
    fn central_lemma_holds() {
        for ring in [cyclic(2), s3rep(), fib(), ising(vec![0, 1, 2])] {
            let c = verify_central_lemma(&build(&ring), &tol());
            assert!(c.passed && c.max_deviation.unwrap() <= 1e-9, "{c:?}");
        }
    }

    #[test]
    fn inputs_that_are_rejected() {
        assert!(matches!(
            build_class_algebra(&s3class(), &tol(), 1),
            Err(Error::InvalidStructure { .. })
        ));
        assert!(matches!(
            build_class_algebra(&ising(vec![0, 2, 1]), &tol(), 1),
            Err(Error::InvalidStructure { .. })
        ));
    }
}
