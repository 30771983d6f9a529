//! Finite probability groups: axioms, the Haar idempotent, the algebra
//! product, characters and the dual hypergroup.

mod characters;
mod dual;

pub use characters::{
    character_table, character_table_with_attempts, check_orthogonality, primitive_idempotents, CharacterTable,
    FIRST_ORTHOGONALITY, MAX_ATTEMPTS, SECOND_ORTHOGONALITY,
};
pub use dual::{double_dual_check, dual_basis_identity, dual_constants, DualHypergroup};

use crate::report::{Check, Deviation, ValidationReport};
use crate::{Error, Result, Tolerances};

pub const AXIOM_ROW_SUMS: &str = "nonnegativity and row sums";
pub const AXIOM_ASSOCIATIVITY: &str = "associativity";
pub const AXIOM_UNIT: &str = "unit law";
pub const AXIOM_UNIQUE_DUAL: &str = "unique dual";
pub const AXIOM_DUAL_SYMMETRY: &str = "dual symmetry";
pub const AXIOM_UNIT_SYMMETRY: &str = "unit symmetry";

/// A finite probability group: `p(a, b, c)` is the probability that `a.b = c`.
///
/// Weights `h_a = 1 / p(a.a* = 1)` are derived from the tensor and
/// `n(A) = sum_a h_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityGroup {
    labels: Vec<String>,
    unit: usize,
    dual: Vec<usize>,
    p: Vec<f64>,
    h: Vec<f64>,
    n_a: f64,
}

impl ProbabilityGroup {
    /// Builds a probability group from a flat `rank^3` tensor indexed as
    /// `(a * rank + b) * rank + c`.
    ///
    /// Entries in `[-tol.eq, 0)` are clamped to zero. Axioms are not checked
    /// here; see [`validate_axioms`].
    pub fn new(labels: Vec<String>, unit: usize, dual: Vec<usize>, mut p: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        let r = labels.len();
        if r == 0 {
            return Err(Error::Malformed("rank must be positive".into()));
        }
        if p.len() != r * r * r {
            return Err(Error::Malformed(format!(
                "probability tensor has {} entries, expected {}",
                p.len(),
                r * r * r
            )));
        }
        if unit >= r || dual.len() != r || dual.iter().any(|&d| d >= r) {
            return Err(Error::Malformed("unit or dual index out of range".into()));
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::Malformed("probability tensor has non-finite entries".into()));
        }
        let mut clamped = 0;
        for v in p.iter_mut() {
            if *v < 0.0 && *v >= -tol.eq {
                *v = 0.0;
                clamped += 1;
            }
        }
        if clamped > 0 {
            log::warn!("clamped {clamped} slightly negative probabilities to zero");
        }
        let h: Vec<f64> = (0..r)
            .map(|a| {
                let q = p[(a * r + dual[a]) * r + unit];
                if q > 0.0 {
                    1.0 / q
                } else {
                    0.0
                }
            })
            .collect();
        let n_a = h.iter().sum();
        Ok(ProbabilityGroup {
            labels,
            unit,
            dual,
            p,
            h,
            n_a,
        })
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

    /// `p(a.b = c)`
    pub fn p(&self, a: usize, b: usize, c: usize) -> f64 {
        let r = self.rank();
        self.p[(a * r + b) * r + c]
    }

    pub fn tensor(&self) -> &[f64] {
        &self.p
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn n_a(&self) -> f64 {
        self.n_a
    }

    /// Compares declared weights against the derived ones.
    pub fn check_declared_weights(&self, declared: &[f64], tol: &Tolerances) -> Check {
        let mut dev = Deviation::new(tol.eq);
        if declared.len() != self.rank() {
            return Check::new("declared weights", false).with_detail("length mismatch");
        }
        for (a, (&d, &h)) in declared.iter().zip(&self.h).enumerate() {
            dev.record((d - h).abs() / h.abs().max(1.0), &[a]);
        }
        dev.into_check("declared weights")
    }

    /// First `(a, b, c)` with `p_c(a,b) != p_c(b,a)` beyond `tol`.
    pub fn commutativity_witness(&self, tol: f64) -> Option<(usize, usize, usize)> {
        let r = self.rank();
        for a in 0..r {
            for b in a + 1..r {
                for c in 0..r {
                    if (self.p(a, b, c) - self.p(b, a, c)).abs() > tol {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_abelian(&self, tol: f64) -> bool {
        self.commutativity_witness(tol).is_none()
    }

    /// Left multiplication matrix of basis element `a`: column `b` holds the
    /// coefficients of `a.b`.
    pub(crate) fn left_matrix(&self, a: usize) -> Vec<f64> {
        let r = self.rank();
        let mut m = vec![0.0; r * r];
        for b in 0..r {
            for c in 0..r {
                m[c * r + b] = self.p(a, b, c);
            }
        }
        m
    }
}

/// Checks the six probability-group axioms. The dual involution is
/// recomputed from the unit coefficients and compared with the declared one.
pub fn validate_axioms(pg: &ProbabilityGroup, tol: &Tolerances) -> ValidationReport {
    let r = pg.rank();
    let u = pg.unit;
    let eps = tol.eq;
    let mut checks = Vec::new();

    let mut dev = Deviation::new(eps);
    for a in 0..r {
        for b in 0..r {
            let mut sum = 0.0;
            let mut neg = 0.0f64;
            for c in 0..r {
                let v = pg.p(a, b, c);
                sum += v;
                neg = neg.max(-v);
            }
            dev.record((sum - 1.0).abs().max(neg), &[a, b]);
        }
    }
    checks.push(dev.into_check(AXIOM_ROW_SUMS));

    let mut dev = Deviation::new(eps);
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                for d in 0..r {
                    let lhs: f64 = (0..r).map(|x| pg.p(a, b, x) * pg.p(x, c, d)).sum();
                    let rhs: f64 = (0..r).map(|y| pg.p(a, y, d) * pg.p(b, c, y)).sum();
                    dev.record((lhs - rhs).abs(), &[a, b, c, d]);
                }
            }
        }
    }
    checks.push(dev.into_check(AXIOM_ASSOCIATIVITY));

    let mut dev = Deviation::new(eps);
    for a in 0..r {
        dev.record((pg.p(u, a, a) - 1.0).abs().max((pg.p(a, u, a) - 1.0).abs()), &[a]);
    }
    checks.push(dev.into_check(AXIOM_UNIT));

    // axiom 4: exactly one b* with p(b.b* = 1) > eps, equal to the declared dual
    let mut witness = None;
    let mut detail = None;
    for b in 0..r {
        let hits: Vec<usize> = (0..r).filter(|&x| pg.p(b, x, u) > eps).collect();
        if hits.len() != 1 || hits[0] != pg.dual[b] {
            witness = Some(vec![b]);
            detail = Some(format!("candidates for {}* are {hits:?}, declared {}", b, pg.dual[b]));
            break;
        }
    }
    let mut c4 = Check::new(AXIOM_UNIQUE_DUAL, witness.is_none()).with_witness(witness);
    c4.detail = detail;
    checks.push(c4);

    let d = &pg.dual;
    let mut dev = Deviation::new(eps);
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                dev.record((pg.p(a, b, c) - pg.p(d[b], d[a], d[c])).abs(), &[a, b, c]);
            }
        }
    }
    checks.push(dev.into_check(AXIOM_DUAL_SYMMETRY));

    let mut dev = Deviation::new(eps);
    for a in 0..r {
        dev.record((pg.p(a, d[a], u) - pg.p(d[a], a, u)).abs(), &[a]);
    }
    checks.push(dev.into_check(AXIOM_UNIT_SYMMETRY));

    ValidationReport { checks }
}

pub(crate) fn ensure_valid(pg: &ProbabilityGroup, tol: &Tolerances) -> Result<()> {
    let rep = validate_axioms(pg, tol);
    match rep.first_failure() {
        None => Ok(()),
        Some(f) => Err(Error::InvalidStructure {
            what: "probability group",
            detail: format!("{} fails at {:?}", f.name, f.witness),
        }),
    }
}

/// Product of two elements given by coefficient vectors.
pub fn multiply<T>(pg: &ProbabilityGroup, x: &[T], y: &[T]) -> Vec<T>
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Mul<Output = T> + std::ops::AddAssign + Default,
{
    let r = pg.rank();
    let mut out = vec![T::default(); r];
    for a in 0..r {
        for b in 0..r {
            let xy = x[a] * y[b];
            for (c, o) in out.iter_mut().enumerate() {
                let p = pg.p(a, b, c);
                if p != 0.0 {
                    *o += xy * p;
                }
            }
        }
    }
    out
}

/// The coefficient pairing `m(x, y) = sum_a x_a y_a`; `m(a, y)` is the
/// coefficient of basis element `a` in `y`.
pub fn coefficient_form<T>(x: &[T], y: &[T]) -> T
where
    T: Copy + std::ops::Mul<Output = T> + std::iter::Sum<T>,
{
    x.iter().zip(y).map(|(&a, &b)| a * b).sum()
}

pub fn basis_vector(rank: usize, a: usize) -> Vec<f64> {
    let mut v = vec![0.0; rank];
    v[a] = 1.0;
    v
}

/// `u_A = (1/n(A)) sum_a h_a a`, verified idempotent and absorbing.
pub fn haar_idempotent(pg: &ProbabilityGroup, tol: &Tolerances) -> Result<Vec<f64>> {
    let r = pg.rank();
    let u: Vec<f64> = pg.h.iter().map(|h| h / pg.n_a).collect();
    let uu = multiply(pg, &u, &u);
    let mut dev = Deviation::new(tol.eq);
    for c in 0..r {
        dev.record((uu[c] - u[c]).abs(), &[c]);
    }
    for a in 0..r {
        let e = basis_vector(r, a);
        let au = multiply(pg, &e, &u);
        let ua = multiply(pg, &u, &e);
        for c in 0..r {
            dev.record((au[c] - u[c]).abs().max((ua[c] - u[c]).abs()), &[a, c]);
        }
    }
    if let Some(w) = dev.witness {
        return Err(Error::Consistency(format!(
            "Haar element is not an absorbing idempotent at {w:?}"
        )));
    }
    Ok(u)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Probability group given by a `p` function on indices.
    pub fn from_fn(names: &[&str], dual: Vec<usize>, f: impl Fn(usize, usize, usize) -> f64) -> ProbabilityGroup {
        let r = names.len();
        let mut p = vec![0.0; r * r * r];
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    p[(a * r + b) * r + c] = f(a, b, c);
                }
            }
        }
        ProbabilityGroup::new(
            names.iter().map(|s| s.to_string()).collect(),
            0,
            dual,
            p,
            &Tolerances::default(),
        )
        .unwrap()
    }

    pub fn cyclic(n: usize) -> ProbabilityGroup {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        from_fn(&refs, (0..n).map(|i| (n - i) % n).collect(), |a, b, c| {
            if (a + b) % n == c {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn phi() -> f64 {
        (1.0 + 5f64.sqrt()) / 2.0
    }

    /// Normalized Fibonacci ring {1, tau'}.
    pub fn fib() -> ProbabilityGroup {
        let phi = phi();
        from_fn(&["1", "tau"], vec![0, 1], move |a, b, c| match (a, b, c) {
            (0, x, y) | (x, 0, y) => (x == y) as u8 as f64,
            (1, 1, 0) => 1.0 / (phi * phi),
            (1, 1, 1) => 1.0 / phi,
            _ => 0.0,
        })
    }

    /// Normalized representation ring of S3 over {1, sgn, V'}.
    pub fn s3rep() -> ProbabilityGroup {
        from_fn(&["1", "sgn", "V"], vec![0, 1, 2], |a, b, c| match (a, b, c) {
            (0, x, y) | (x, 0, y) => (x == y) as u8 as f64,
            (1, 1, 0) => 1.0,
            (1, 2, 2) | (2, 1, 2) => 1.0,
            (2, 2, 0) | (2, 2, 1) => 0.25,
            (2, 2, 2) => 0.5,
            _ => 0.0,
        })
    }

    /// Normalized class sums of S3 over {[e], [t], [r]}.
    pub fn s3class() -> ProbabilityGroup {
        from_fn(&["e", "t", "r"], vec![0, 1, 2], |a, b, c| match (a, b, c) {
            (0, x, y) | (x, 0, y) => (x == y) as u8 as f64,
            (1, 1, 0) => 1.0 / 3.0,
            (1, 1, 2) => 2.0 / 3.0,
            (1, 2, 1) | (2, 1, 1) => 1.0,
            (2, 2, 0) | (2, 2, 2) => 0.5,
            _ => 0.0,
        })
    }
}
