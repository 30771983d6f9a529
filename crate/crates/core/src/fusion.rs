//! Based rings (fusion rings): a distinguished basis with nonnegative
//! integer structure constants, a unit and a duality involution.

use crate::hypergroup::ProbabilityGroup;
use crate::report::{Check, Deviation, ValidationReport};
use crate::scalar::{rational_to_f64, Rational};
use crate::{Error, Result, Tolerances};

pub const AXIOM_UNIT: &str = "unit law";
pub const AXIOM_ASSOCIATIVITY: &str = "associativity";
pub const AXIOM_INVOLUTION: &str = "dual involution";
pub const AXIOM_TAU: &str = "tau condition";
pub const AXIOM_CYCLIC: &str = "cyclic symmetry";
pub const AXIOM_ANTI_INVOLUTION: &str = "anti-involution";

/// A fusion ring of rank `r`, stored densely: `n(i, j, k)` is the
/// coefficient of `b_k` in `b_i b_j`.
///
/// Rings with `based == false` are unital rings with involution whose unit
/// coefficient only detects duality (`N_ij^unit > 0` iff `j = i*`) instead of
/// being exactly `delta`. Class algebras of finite groups are of this kind.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionRing {
    labels: Vec<String>,
    unit: usize,
    dual: Vec<usize>,
    n: Vec<Rational>,
    based: bool,
}

impl FusionRing {
    /// Builds a ring from a dense `rank x rank x rank` tensor.
    pub fn new(labels: Vec<String>, unit: usize, dual: Vec<usize>, tensor: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let rank = labels.len();
        check_header(rank, unit, &dual)?;
        if tensor.len() != rank
            || tensor
                .iter()
                .any(|row| row.len() != rank || row.iter().any(|v| v.len() != rank))
        {
            return Err(Error::Malformed(format!(
                "fusion tensor must have shape {rank}x{rank}x{rank}"
            )));
        }
        let n: Vec<Rational> = tensor.into_iter().flatten().flatten().collect();
        Self::from_flat(labels, unit, dual, n)
    }

    /// Builds a ring from `[i, j, k, value]` triples; absent entries are zero.
    pub fn from_sparse(
        labels: Vec<String>,
        unit: usize,
        dual: Vec<usize>,
        entries: &[(usize, usize, usize, Rational)],
    ) -> Result<Self> {
        let rank = labels.len();
        check_header(rank, unit, &dual)?;
        let mut n = vec![Rational::from_integer(0); rank * rank * rank];
        for &(i, j, k, v) in entries {
            if i >= rank || j >= rank || k >= rank {
                return Err(Error::Malformed(format!(
                    "sparse entry [{i},{j},{k}] out of range for rank {rank}"
                )));
            }
            n[(i * rank + j) * rank + k] += v;
        }
        Self::from_flat(labels, unit, dual, n)
    }

    fn from_flat(labels: Vec<String>, unit: usize, dual: Vec<usize>, n: Vec<Rational>) -> Result<Self> {
        let rank = labels.len();
        if let Some(pos) = n.iter().position(|v| *v < Rational::from_integer(0)) {
            let (i, j, k) = (pos / (rank * rank), (pos / rank) % rank, pos % rank);
            return Err(Error::Malformed(format!(
                "negative fusion coefficient N[{i}][{j}][{k}] = {}",
                n[pos]
            )));
        }
        Ok(FusionRing {
            labels,
            unit,
            dual,
            n,
            based: true,
        })
    }

    /// Marks the ring as based (`N_ij^unit = delta`) or merely unital.
    pub fn with_based(mut self, based: bool) -> Self {
        self.based = based;
        self
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn dual(&self) -> &[usize] {
        &self.dual
    }

    pub fn is_based(&self) -> bool {
        self.based
    }

    pub fn n(&self, i: usize, j: usize, k: usize) -> Rational {
        let r = self.rank();
        self.n[(i * r + j) * r + k]
    }

    pub fn n_f64(&self, i: usize, j: usize, k: usize) -> f64 {
        rational_to_f64(&self.n(i, j, k))
    }

    /// Dense nested copy of the tensor.
    pub fn tensor(&self) -> Vec<Vec<Vec<Rational>>> {
        let r = self.rank();
        (0..r)
            .map(|i| (0..r).map(|j| (0..r).map(|k| self.n(i, j, k)).collect()).collect())
            .collect()
    }

    /// First `(i, j, k)` with `N_ij^k != N_ji^k`, if any.
    pub fn commutativity_witness(&self) -> Option<(usize, usize, usize)> {
        let r = self.rank();
        for i in 0..r {
            for j in i + 1..r {
                for k in 0..r {
                    if self.n(i, j, k) != self.n(j, i, k) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn is_commutative(&self) -> bool {
        self.commutativity_witness().is_none()
    }

    /// Checks every based-ring axiom; exact rational arithmetic, so no
    /// tolerance is involved.
    pub fn validate(&self) -> ValidationReport {
        validate_fusion_ring(self)
    }
}

fn check_header(rank: usize, unit: usize, dual: &[usize]) -> Result<()> {
    if rank == 0 {
        return Err(Error::Malformed("rank must be positive".into()));
    }
    if unit >= rank {
        return Err(Error::Malformed(format!("unit index {unit} out of range")));
    }
    if dual.len() != rank {
        return Err(Error::Malformed(format!(
            "dual list has length {} but rank is {rank}",
            dual.len()
        )));
    }
    if let Some(&d) = dual.iter().find(|&&d| d >= rank) {
        return Err(Error::Malformed(format!("dual index {d} out of range")));
    }
    Ok(())
}

/// Exact check of the based-ring axioms, reporting the first violating
/// index tuple of each.
pub fn validate_fusion_ring(ring: &FusionRing) -> ValidationReport {
    let r = ring.rank();
    let u = ring.unit;
    let d = &ring.dual;
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    let mut checks = Vec::new();

    let mut w = None;
    'unit: for j in 0..r {
        for k in 0..r {
            let delta = if j == k { one } else { zero };
            if ring.n(u, j, k) != delta || ring.n(j, u, k) != delta {
                w = Some(vec![j, k]);
                break 'unit;
            }
        }
    }
    checks.push(Check::new(AXIOM_UNIT, w.is_none()).with_witness(w));

    let mut w = None;
    'assoc: for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                for t in 0..r {
                    let lhs: Rational = (0..r).map(|x| ring.n(i, j, x) * ring.n(x, k, t)).sum();
                    let rhs: Rational = (0..r).map(|y| ring.n(i, y, t) * ring.n(j, k, y)).sum();
                    if lhs != rhs {
                        w = Some(vec![i, j, k, t]);
                        break 'assoc;
                    }
                }
            }
        }
    }
    checks.push(Check::new(AXIOM_ASSOCIATIVITY, w.is_none()).with_witness(w));

    let w = if d[u] != u {
        Some(vec![u])
    } else {
        (0..r).find(|&i| d[d[i]] != i).map(|i| vec![i])
    };
    checks.push(Check::new(AXIOM_INVOLUTION, w.is_none()).with_witness(w));

    let mut w = None;
    'tau: for i in 0..r {
        for j in 0..r {
            let coeff = ring.n(i, j, u);
            let ok = if ring.based {
                coeff == if i == d[j] { one } else { zero }
            } else {
                (coeff > zero) == (i == d[j])
            };
            if !ok {
                w = Some(vec![i, j]);
                break 'tau;
            }
        }
    }
    let mut tau = Check::new(AXIOM_TAU, w.is_none()).with_witness(w);
    if !ring.based {
        tau = tau.with_detail("unit coefficient only required to detect duality");
    }
    checks.push(tau);

    // class-sum style rings are only rotation invariant after weighting by
    // dimensions, which the probability-group axioms check instead
    let mut w = None;
    'cyc: for i in (0..r).filter(|_| ring.based) {
        for j in 0..r {
            for k in 0..r {
                let a = ring.n(i, j, d[k]);
                if a != ring.n(j, k, d[i]) || a != ring.n(k, i, d[j]) {
                    w = Some(vec![i, j, k]);
                    break 'cyc;
                }
            }
        }
    }
    let mut cyclic = Check::new(AXIOM_CYCLIC, w.is_none()).with_witness(w);
    if !ring.based {
        cyclic = cyclic.with_detail("not required without a based basis");
    }
    checks.push(cyclic);

    let mut w = None;
    'anti: for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                if ring.n(i, j, k) != ring.n(d[j], d[i], d[k]) {
                    w = Some(vec![i, j, k]);
                    break 'anti;
                }
            }
        }
    }
    checks.push(Check::new(AXIOM_ANTI_INVOLUTION, w.is_none()).with_witness(w));

    ValidationReport { checks }
}

/// Frobenius-Perron dimensions of the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FPDimData {
    pub fpdim: Vec<f64>,
    /// `sum_i fpdim(b_i) fpdim(b_i*)`
    pub total: f64,
    /// Largest deviation of `fpdim(i) fpdim(j) = sum_k N_ij^k fpdim(k)`.
    pub homomorphism_deviation: f64,
}

pub const DEFAULT_POWER_ITERATIONS: usize = 200_000;

pub fn fp_dimensions(ring: &FusionRing, tol: &Tolerances) -> Result<FPDimData> {
    fp_dimensions_with_cap(ring, tol, DEFAULT_POWER_ITERATIONS)
}

/// Each `fpdim(b_i)` is the Perron-Frobenius eigenvalue of the matrix
/// `(N_i)_{jk} = N_ij^k`, found by power iteration on `N_i + I`. The shift
/// makes the Perron root strictly dominant in modulus. The homomorphism
/// property is then checked as an independent cross-validation.
pub fn fp_dimensions_with_cap(ring: &FusionRing, tol: &Tolerances, max_iter: usize) -> Result<FPDimData> {
    let r = ring.rank();
    let mut fpdim = Vec::with_capacity(r);
    for i in 0..r {
        let m: Vec<f64> = (0..r * r).map(|jk| ring.n_f64(i, jk / r, jk % r)).collect();
        fpdim.push(perron_root(&m, r, max_iter).ok_or(Error::NonConvergence {
            index: i,
            iterations: max_iter,
        })?);
    }

    let mut dev = Deviation::new(tol.eq);
    for i in 0..r {
        for j in 0..r {
            let rhs: f64 = (0..r).map(|k| ring.n_f64(i, j, k) * fpdim[k]).sum();
            let lhs = fpdim[i] * fpdim[j];
            dev.record((lhs - rhs).abs() / lhs.max(1.0), &[i, j]);
        }
    }
    if let Some(w) = &dev.witness {
        return Err(Error::Consistency(format!(
            "FP dimensions are not multiplicative at {w:?} (deviation {:.3e})",
            dev.max
        )));
    }
    for i in 0..r {
        if (fpdim[i] - fpdim[ring.dual[i]]).abs() > tol.eq * fpdim[i] {
            return Err(Error::Consistency(format!("fpdim({i}) != fpdim({i}*)")));
        }
    }
    let total = (0..r).map(|i| fpdim[i] * fpdim[ring.dual[i]]).sum();
    Ok(FPDimData {
        fpdim,
        total,
        homomorphism_deviation: dev.max,
    })
}

fn perron_root(m: &[f64], r: usize, max_iter: usize) -> Option<f64> {
    let mut x = vec![1.0 / r as f64; r];
    let mut y = vec![0.0; r];
    for _ in 0..max_iter {
        for (row, yj) in y.iter_mut().enumerate() {
            *yj = x[row] + (0..r).map(|k| m[row * r + k] * x[k]).sum::<f64>();
        }
        let s: f64 = y.iter().sum();
        if !(s > 0.0) || !s.is_finite() {
            return None;
        }
        let mut change = 0.0f64;
        for (xj, yj) in x.iter_mut().zip(&y) {
            let v = yj / s;
            change = change.max((v - *xj).abs());
            *xj = v;
        }
        if change < 1e-15 {
            // x sums to one, so the eigenvalue of the shifted matrix is s
            return Some(s - 1.0);
        }
    }
    None
}

/// Normalizes the basis to `b' = b / fpdim(b)` and returns the resulting
/// probability group with `p(a'b' = c') = N_ab^c fpdim(c) / (fpdim(a) fpdim(b))`.
pub fn to_probability_group(ring: &FusionRing, tol: &Tolerances) -> Result<ProbabilityGroup> {
    let report = validate_fusion_ring(ring);
    if let Some(fail) = report.first_failure() {
        return Err(Error::InvalidStructure {
            what: "fusion ring",
            detail: format!("{} fails at {:?}", fail.name, fail.witness),
        });
    }
    let fp = fp_dimensions(ring, tol)?;
    to_probability_group_with(ring, &fp, tol)
}

pub(crate) fn to_probability_group_with(
    ring: &FusionRing,
    fp: &FPDimData,
    tol: &Tolerances,
) -> Result<ProbabilityGroup> {
    let r = ring.rank();
    let mut p = vec![0.0; r * r * r];
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                p[(a * r + b) * r + c] = ring.n_f64(a, b, c) * fp.fpdim[c] / (fp.fpdim[a] * fp.fpdim[b]);
            }
        }
    }
    ProbabilityGroup::new(ring.labels.clone(), ring.unit, ring.dual.clone(), p, tol)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn ri(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    pub fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    /// Dense ring from a product function `f(i, j, k) = N_ij^k`.
    pub fn ring_from_fn(names: &[&str], dual: Vec<usize>, f: impl Fn(usize, usize, usize) -> i64) -> FusionRing {
        let r = names.len();
        let t = (0..r)
            .map(|i| (0..r).map(|j| (0..r).map(|k| ri(f(i, j, k))).collect()).collect())
            .collect();
        FusionRing::new(labels(names), 0, dual, t).unwrap()
    }

    pub fn cyclic(n: usize) -> FusionRing {
        let names: Vec<String> = (0..n).map(|i| format!("g{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        ring_from_fn(&refs, (0..n).map(|i| (n - i) % n).collect(), |i, j, k| {
            ((i + j) % n == k) as i64
        })
    }

    pub fn fib() -> FusionRing {
        ring_from_fn(&["1", "tau"], vec![0, 1], |i, j, k| match (i, j, k) {
            (0, x, y) | (x, 0, y) => (x == y) as i64,
            _ => 1,
        })
    }

    /// Basis (1, eps, sigma).
    pub fn ising(dual: Vec<usize>) -> FusionRing {
        ring_from_fn(&["1", "eps", "sigma"], dual, |i, j, k| match (i, j, k) {
            (0, x, y) | (x, 0, y) => (x == y) as i64,
            (1, 1, 0) | (1, 2, 2) | (2, 1, 2) | (2, 2, 0) | (2, 2, 1) => 1,
            _ => 0,
        })
    }

    /// Basis (1, sgn, V).
    pub fn s3rep() -> FusionRing {
        ring_from_fn(&["1", "sgn", "V"], vec![0, 1, 2], |i, j, k| match (i, j, k) {
            (0, x, y) | (x, 0, y) => (x == y) as i64,
            (1, 1, 0) | (1, 2, 2) | (2, 1, 2) | (2, 2, 0) | (2, 2, 1) | (2, 2, 2) => 1,
            _ => 0,
        })
    }

    /// Class sums of S3 over ([e], [t], [r]); not a based ring.
    pub fn s3class() -> FusionRing {
        ring_from_fn(&["e", "t", "r"], vec![0, 1, 2], |i, j, k| match (i, j, k) {
            (0, x, y) | (x, 0, y) => (x == y) as i64,
            (1, 1, 0) | (1, 1, 2) => 3,
            (1, 2, 1) | (2, 1, 1) => 2,
            (2, 2, 0) => 2,
            (2, 2, 2) => 1,
            _ => 0,
        })
        .with_based(false)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;

    #[test]
    fn class_sum_ring_normalizes() {
        let ring = s3class();
        assert!(ring.validate().all_passed());
        let pg = to_probability_group(&ring, &Tolerances::default()).unwrap();
        assert_eq!(pg.h(), &[1.0, 3.0, 2.0]);
        assert!(crate::hypergroup::validate_axioms(&pg, &Tolerances::default()).all_passed());
        // the same tensor declared as based fails the rotation symmetry
        assert!(!ring.with_based(true).validate().all_passed());
    }
    use super::*;

    fn z2_entries() -> Vec<(usize, usize, usize, Rational)> {
        vec![(0, 0, 0, ri(1)), (0, 1, 1, ri(1)), (1, 0, 1, ri(1)), (1, 1, 0, ri(1))]
    }

    #[test]
    fn fib_passes_all_axioms() {
        let rep = validate_fusion_ring(&fib());
        assert!(rep.all_passed(), "{rep:?}");
        assert_eq!(rep.checks.len(), 6);
    }

    #[test]
    fn z2_without_unit_coefficient_fails_tau() {
        let mut e = z2_entries();
        e.retain(|t| !(t.0 == 1 && t.1 == 1 && t.2 == 0));
        let ring = FusionRing::from_sparse(labels(&["1", "g"]), 0, vec![0, 1], &e).unwrap();
        let rep = validate_fusion_ring(&ring);
        let tau = rep.get(AXIOM_TAU).unwrap();
        assert!(!tau.passed);
        assert_eq!(tau.witness, Some(vec![1, 1]));
    }

    #[test]
    fn ising_with_swapped_dual_fails_anti_involution() {
        let rep = validate_fusion_ring(&ising(vec![0, 2, 1]));
        assert!(!rep.get(AXIOM_ANTI_INVOLUTION).unwrap().passed);
        assert!(validate_fusion_ring(&ising(vec![0, 1, 2])).all_passed());
    }

    #[test]
    fn malformed_inputs_are_errors() {
        let e = FusionRing::new(labels(&["1"]), 0, vec![0], vec![vec![vec![ri(1), ri(0)]]]);
        assert!(matches!(e, Err(Error::Malformed(_))));
        let e = FusionRing::from_sparse(labels(&["1"]), 0, vec![0], &[(0, 0, 0, ri(-1))]);
        assert!(matches!(e, Err(Error::Malformed(_))));
        let e = FusionRing::from_sparse(labels(&["1"]), 1, vec![0], &[]);
        assert!(matches!(e, Err(Error::Malformed(_))));
    }

    #[test]
    fn fib_dimensions() {
        let fp = fp_dimensions(&fib(), &Tolerances::default()).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((fp.fpdim[1] - 1.6180339887).abs() < 1e-10);
        assert!((fp.fpdim[1] - phi).abs() < 1e-12);
        assert!((fp.total - (1.0 + phi * phi)).abs() < 1e-12);
        assert!((fp.total - 3.6180339887).abs() < 1e-10);
    }

    #[test]
    fn ising_dimensions() {
        let fp = fp_dimensions(&ising(vec![0, 1, 2]), &Tolerances::default()).unwrap();
        assert!((fp.fpdim[0] - 1.0).abs() < 1e-12);
        assert!((fp.fpdim[1] - 1.0).abs() < 1e-12);
        assert!((fp.fpdim[2] - std::f64::consts::SQRT_2).abs() < 1e-10);
        assert!((fp.total - 4.0).abs() < 1e-12);
    }

    #[test]
    fn group_ring_dimensions_are_one() {
        let ring = FusionRing::from_sparse(labels(&["1", "g"]), 0, vec![0, 1], &z2_entries()).unwrap();
        let fp = fp_dimensions(&ring, &Tolerances::default()).unwrap();
        assert_eq!(fp.fpdim, vec![1.0, 1.0]);
        assert_eq!(fp.total, 2.0);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let e = fp_dimensions_with_cap(&fib(), &Tolerances::default(), 2).unwrap_err();
        assert!(matches!(e, Error::NonConvergence { index: 1, .. }));
    }

    #[test]
    fn z2_probability_group() {
        let ring = FusionRing::from_sparse(labels(&["1", "g"]), 0, vec![0, 1], &z2_entries()).unwrap();
        let pg = to_probability_group(&ring, &Tolerances::default()).unwrap();
        assert_eq!(pg.p(1, 1, 0), 1.0);
        assert_eq!(pg.h(), &[1.0, 1.0]);
        assert_eq!(pg.n_a(), 2.0);
    }

    #[test]
    fn fib_probability_group() {
        let pg = to_probability_group(&fib(), &Tolerances::default()).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((pg.p(1, 1, 0) - 1.0 / (phi * phi)).abs() < 1e-12);
        assert!((pg.p(1, 1, 0) - 0.3819660113).abs() < 1e-10);
        assert!((pg.p(1, 1, 1) - 0.6180339887).abs() < 1e-10);
        assert!((pg.h()[1] - phi * phi).abs() < 1e-12);
    }

    #[test]
    fn invalid_ring_is_rejected() {
        let e = to_probability_group(&ising(vec![0, 2, 1]), &Tolerances::default()).unwrap_err();
        assert!(matches!(e, Error::InvalidStructure { .. }));
    }
}
