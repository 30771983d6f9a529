use super::build_class_algebra;
use crate::fusion::FusionRing;
use crate::report::{Check, Deviation, ValidationReport};
use crate::scalar::ApproxComplex;
use crate::{Error, Result, Tolerances};

pub const S_SYMMETRIC: &str = "S symmetric";
pub const S_UNITARY: &str = "S unitary up to scale";
pub const S_CHARGE_CONJUGATION: &str = "S squared is the duality permutation";
pub const VERLINDE: &str = "Verlinde reproduces fusion";
pub const SELF_DUAL_ISOMORPHISM: &str = "isomorphism onto the dual";
pub const SELF_DUAL_DUALIZABLE: &str = "dualizable";
pub const SELF_DUAL_CLASS_DIMS: &str = "class dimensions are squared dimensions";

/// An S-matrix with its simple labels and duality.
#[derive(Debug, Clone)]
pub struct ModularData {
    labels: Vec<String>,
    dual: Vec<usize>,
    s: Vec<Vec<ApproxComplex>>,
}

impl ModularData {
    pub fn new(labels: Vec<String>, dual: Vec<usize>, s: Vec<Vec<ApproxComplex>>) -> Result<Self> {
        let r = labels.len();
        if r == 0 || dual.len() != r || s.len() != r || s.iter().any(|row| row.len() != r) {
            return Err(Error::Malformed(format!(
                "S-matrix must be {r}x{r} with {r} dual entries"
            )));
        }
        if dual.iter().any(|&d| d >= r) {
            return Err(Error::Malformed("dual index out of range".into()));
        }
        if s.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Malformed("S-matrix has non-finite entries".into()));
        }
        if s[0].iter().any(|z| z.norm() == 0.0) {
            return Err(Error::Malformed("first row of S has a zero entry".into()));
        }
        Ok(ModularData { labels, dual, s })
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dual(&self) -> &[usize] {
        &self.dual
    }

    pub fn s(&self) -> &[Vec<ApproxComplex>] {
        &self.s
    }

    /// Quantum dimensions `S_0i / S_00`.
    pub fn dims(&self) -> Vec<ApproxComplex> {
        (0..self.rank()).map(|i| self.s[0][i] / self.s[0][0]).collect()
    }

    /// `(S conj(S))_00`, the square of the factor separating `S` from a
    /// unitary matrix.
    fn scale(&self) -> f64 {
        self.s[0].iter().map(|z| z.norm_sqr()).sum()
    }

    /// `S` rescaled so that `(S S^dagger)_00 = 1`.
    pub fn normalized(&self) -> Vec<Vec<ApproxComplex>> {
        let f = 1.0 / self.scale().sqrt();
        self.s.iter().map(|row| row.iter().map(|z| z * f).collect()).collect()
    }

    pub fn validate(&self, tol: &Tolerances) -> ValidationReport {
        let r = self.rank();
        let s = self.normalized();
        let mut sym = Deviation::new(tol.eq);
        let mut unitary = Deviation::new(tol.eq);
        let mut square = Deviation::new(tol.eq);
        for i in 0..r {
            for j in 0..r {
                sym.record((s[i][j] - s[j][i]).norm(), &[i, j]);
                let sc: ApproxComplex = (0..r).map(|k| s[i][k] * s[k][j].conj()).sum();
                let ss: ApproxComplex = (0..r).map(|k| s[i][k] * s[k][j]).sum();
                unitary.record((sc - if i == j { 1.0 } else { 0.0 }).norm(), &[i, j]);
                square.record((ss - if j == self.dual[i] { 1.0 } else { 0.0 }).norm(), &[i, j]);
            }
        }
        ValidationReport {
            checks: vec![
                sym.into_check(S_SYMMETRIC),
                unitary.into_check(S_UNITARY),
                square.into_check(S_CHARGE_CONJUGATION),
            ],
        }
    }

    /// `N_ij^k = sum_s S_is S_js conj(S_ks) / S_0s` on the normalized matrix.
    pub fn verlinde(&self) -> Vec<ApproxComplex> {
        let r = self.rank();
        let s = self.normalized();
        let mut n = Vec::with_capacity(r * r * r);
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    n.push((0..r).map(|t| s[i][t] * s[j][t] * s[k][t].conj() / s[0][t]).sum());
                }
            }
        }
        n
    }

    /// The Verlinde coefficients rounded to a fusion ring, when they are
    /// non-negative integers within `tol.int`.
    pub fn verlinde_ring(&self, tol: &Tolerances) -> Result<FusionRing> {
        let r = self.rank();
        let n = self.verlinde();
        let mut entries = Vec::new();
        for (idx, v) in n.iter().enumerate() {
            let m = crate::scalar::is_nonneg_integer(*v, tol.int).ok_or_else(|| {
                Error::VerlindeMismatch(format!(
                    "coefficient at {:?} is {v}, not a non-negative integer",
                    (idx / (r * r), (idx / r) % r, idx % r)
                ))
            })?;
            if m != 0 {
                entries.push((idx / (r * r), (idx / r) % r, idx % r, m.into()));
            }
        }
        FusionRing::from_sparse(self.labels.clone(), 0, self.dual.clone(), &entries)
    }
}

/// Checks that the S-matrix categorifies `ring` and that the character ring
/// is isomorphic to its dual through `chi_i / d_i -> C_i / dim(C^i)`.
pub fn verify_self_dual(ring: &FusionRing, md: &ModularData, tol: &Tolerances, seed: u64) -> Result<ValidationReport> {
    let r = ring.rank();
    if md.rank() != r {
        return Err(Error::VerlindeMismatch(format!(
            "rank {} against ring rank {r}",
            md.rank()
        )));
    }
    let n = md.verlinde();
    let mut verlinde = Deviation::new(tol.int);
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let want = ring.n_f64(i, j, k);
                verlinde.record((n[(i * r + j) * r + k] - want).norm(), &[i, j, k]);
            }
        }
    }
    if let Some(w) = &verlinde.witness {
        return Err(Error::VerlindeMismatch(format!(
            "coefficient at {w:?} is {} but the ring has {}",
            n[(w[0] * r + w[1]) * r + w[2]],
            ring.n(w[0], w[1], w[2])
        )));
    }
    let mut checks = vec![verlinde.into_check(VERLINDE)];
    checks.extend(md.validate(tol).checks);

    let ca = build_class_algebra(ring, tol, seed)?;
    let s = md.normalized();
    let limit = tol.eq.sqrt().max(1e-6);
    // simple i corresponds to the character b'_t -> S_ti / (S_0i d_t)
    let mut to_char = Vec::with_capacity(r);
    for i in 0..r {
        let target: Vec<ApproxComplex> = (0..r).map(|t| s[t][i] / (s[0][i] * ca.dims[t])).collect();
        let hits: Vec<usize> = (0..r)
            .filter(|&j| (0..r).all(|t| (ca.table.values[j][t] - target[t]).norm() < limit))
            .collect();
        match hits.as_slice() {
            [j] => to_char.push(*j),
            _ => {
                return Err(Error::IsomorphismFailure(format!(
                    "column {i} of S matches characters {hits:?}"
                )))
            }
        }
    }

    let mut iso = Deviation::new(tol.eq);
    for i in 0..r {
        for k in 0..r {
            for l in 0..r {
                let p = ca.group.p(i, k, l);
                let q = ca.dual.phat(to_char[i], to_char[k], to_char[l]);
                iso.record((q - p).norm(), &[i, k, l]);
            }
        }
    }
    if let Some(w) = &iso.witness {
        return Err(Error::IsomorphismFailure(format!(
            "probability of {w:?} differs from the dual constant (max deviation {:.3e})",
            iso.max
        )));
    }
    checks.push(iso.into_check(SELF_DUAL_ISOMORPHISM));
    checks.push(Check::new(SELF_DUAL_DUALIZABLE, ca.dual.dualizable));
    let mut dims = Deviation::new(tol.eq);
    for i in 0..r {
        dims.record((ca.class_dims[to_char[i]] - ca.dims[i] * ca.dims[i]).abs(), &[i]);
    }
    checks.push(dims.into_check(SELF_DUAL_CLASS_DIMS));
    Ok(ValidationReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::fixtures::*;
    use crate::scalar::real;

    fn md(rows: &[&[f64]], dual: Vec<usize>) -> ModularData {
        let labels = (0..rows.len()).map(|i| i.to_string()).collect();
        ModularData::new(
            labels,
            dual,
            rows.iter().map(|r| r.iter().map(|&x| real(x)).collect()).collect(),
        )
        .unwrap()
    }

    fn ising_md() -> ModularData {
        let q = 2f64.sqrt();
        md(
            &[&[0.5, 0.5, q / 2.0], &[0.5, 0.5, -q / 2.0], &[q / 2.0, -q / 2.0, 0.0]],
            vec![0, 1, 2],
        )
    }

    fn fib_md() -> ModularData {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let f = 1.0 / (phi + 2.0).sqrt();
        md(&[&[f, f * phi], &[f * phi, -f]], vec![0, 1])
    }

    #[test]
    fn ising_and_fib_are_self_dual() {
        let tol = Tolerances::default();
        let rep = verify_self_dual(&ising(vec![0, 1, 2]), &ising_md(), &tol, 3).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
        let rep = verify_self_dual(&fib(), &fib_md(), &tol, 3).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
    }

    #[test]
    fn verlinde_ring_of_ising() {
        let ring = ising_md().verlinde_ring(&Tolerances::default()).unwrap();
        assert_eq!(ring.tensor(), ising(vec![0, 1, 2]).tensor());
    }

    #[test]
    fn degenerate_s_matrix() {
        let ones = md(&[&[1.0, 1.0], &[1.0, 1.0]], vec![0, 1]);
        let e = verify_self_dual(&cyclic(2), &ones, &Tolerances::default(), 1).unwrap_err();
        assert!(matches!(e, Error::VerlindeMismatch(_)));
        assert!(!ones.validate(&Tolerances::default()).all_passed());
    }

    #[test]
    fn unnormalized_s_is_accepted() {
        // a global rescaling of S does not change the fusion rules
        let q = 2f64.sqrt();
        let scaled = md(&[&[1.0, 1.0, q], &[1.0, 1.0, -q], &[q, -q, 0.0]], vec![0, 1, 2]);
        assert!(scaled.validate(&Tolerances::default()).all_passed());
        let d = scaled.dims();
        assert!((d[2].re - q).abs() < 1e-12);
    }
}
