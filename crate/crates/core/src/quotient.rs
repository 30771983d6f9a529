//! Sub-hypergroups, double-coset quotients `A//S` and the duality between
//! characters trivial on `S` and characters of the quotient.

use std::collections::BTreeSet;

use crate::hypergroup::{
    character_table, dual_constants, ensure_valid, multiply, validate_axioms, CharacterTable, ProbabilityGroup,
};
use crate::report::{Check, Deviation, ValidationReport};
use crate::scalar::ApproxComplex;
use crate::{Error, Result, Tolerances};

/// Largest rank accepted by [`find_subhypergroups`].
pub const RANK_GUARD: usize = 24;

/// A set of basis indices containing the unit and closed under the dual
/// and under the support of products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubHypergroup {
    members: Vec<usize>,
}

impl SubHypergroup {
    /// Checks closure and returns the sorted member set.
    pub fn new(pg: &ProbabilityGroup, members: &[usize], tol: &Tolerances) -> Result<Self> {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        let invalid = |detail: String| Error::InvalidStructure {
            what: "sub-hypergroup",
            detail,
        };
        if let Some(&m) = set.iter().find(|&&m| m >= pg.rank()) {
            return Err(Error::Malformed(format!("index {m} out of range")));
        }
        if !set.contains(&pg.unit()) {
            return Err(invalid("does not contain the unit".into()));
        }
        for &a in &set {
            if !set.contains(&pg.dual()[a]) {
                return Err(invalid(format!("not closed under the dual at {a}")));
            }
            for &b in &set {
                if let Some(c) = (0..pg.rank()).find(|&c| pg.p(a, b, c) > tol.eq && !set.contains(&c)) {
                    return Err(invalid(format!("product of {a} and {b} reaches {c}")));
                }
            }
        }
        Ok(SubHypergroup {
            members: set.into_iter().collect(),
        })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }
}

fn closure(pg: &ProbabilityGroup, seed: &BTreeSet<usize>, tol: &Tolerances) -> BTreeSet<usize> {
    let mut set = seed.clone();
    set.insert(pg.unit());
    loop {
        let mut next = set.clone();
        for &a in &set {
            next.insert(pg.dual()[a]);
            for &b in &set {
                next.extend((0..pg.rank()).filter(|&c| pg.p(a, b, c) > tol.eq));
            }
        }
        if next.len() == set.len() {
            return set;
        }
        set = next;
    }
}

/// All sub-hypergroups, sorted by size and then by members.
///
/// Every closed set is reached from `{unit}` by repeatedly adjoining one
/// element and closing, so the search visits closed sets only.
pub fn find_subhypergroups(pg: &ProbabilityGroup, tol: &Tolerances) -> Result<Vec<SubHypergroup>> {
    if pg.rank() > RANK_GUARD {
        return Err(Error::RankGuard {
            rank: pg.rank(),
            limit: RANK_GUARD,
        });
    }
    let start = closure(pg, &BTreeSet::new(), tol);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = vec![start];
    while let Some(s) = queue.pop() {
        for a in 0..pg.rank() {
            if s.contains(&a) {
                continue;
            }
            let mut t = s.clone();
            t.insert(a);
            let t = closure(pg, &t, tol);
            if seen.insert(t.clone()) {
                queue.push(t);
            }
        }
    }
    let mut out: Vec<SubHypergroup> = seen
        .into_iter()
        .map(|s| SubHypergroup {
            members: s.into_iter().collect(),
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.members.cmp(&b.members)));
    Ok(out)
}

/// The quotient `A//S` as a probability group on the classes.
#[derive(Debug, Clone)]
pub struct QuotientHypergroup {
    /// Classes of basis indices; class 0 is `S` itself.
    pub classes: Vec<Vec<usize>>,
    pub group: ProbabilityGroup,
}

impl QuotientHypergroup {
    pub fn rank(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.contains(&a))
            .expect("classes partition the basis")
    }
}

/// Haar idempotent of `S` computed inside `A`.
fn sub_haar(pg: &ProbabilityGroup, s: &SubHypergroup) -> Vec<f64> {
    let n: f64 = s.members.iter().map(|&m| pg.h()[m]).sum();
    let mut u = vec![0.0; pg.rank()];
    for &m in &s.members {
        u[m] = pg.h()[m] / n;
    }
    u
}

/// Classes `[a] = [b]` iff `u_S a u_S = u_S b u_S`, and
/// `pbar_[c]([a],[b]) = sum_{v in [c]} p_v(x, y)` for representatives `x, y`.
/// Every choice of representatives is tried and must agree.
pub fn quotient(pg: &ProbabilityGroup, s: &SubHypergroup, tol: &Tolerances) -> Result<QuotientHypergroup> {
    ensure_valid(pg, tol)?;
    if let Some(w) = pg.commutativity_witness(tol.eq) {
        return Err(Error::NonCommutative(w));
    }
    let r = pg.rank();
    let u = sub_haar(pg, s);
    let collision = 10.0 * tol.eq;
    let sandwich: Vec<Vec<f64>> = (0..r)
        .map(|a| {
            let mut e = vec![0.0; r];
            e[a] = 1.0;
            multiply(pg, &multiply(pg, &u, &e), &u)
        })
        .collect();

    let mut order: Vec<usize> = vec![pg.unit()];
    order.extend((0..r).filter(|&a| a != pg.unit()));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for a in order {
        let found = classes.iter().position(|cls| {
            sandwich[cls[0]]
                .iter()
                .zip(&sandwich[a])
                .all(|(x, y)| (x - y).abs() <= collision)
        });
        match found {
            Some(k) => classes[k].push(a),
            None => classes.push(vec![a]),
        }
    }
    for cls in classes.iter_mut() {
        cls.sort_unstable();
    }
    if classes[0] != s.members {
        return Err(Error::Consistency(format!(
            "class of the unit is {:?}, expected {:?}",
            classes[0], s.members
        )));
    }

    let q = classes.len();
    let class_of: Vec<usize> = (0..r)
        .map(|a| classes.iter().position(|cls| cls.contains(&a)).unwrap())
        .collect();
    let bar = |x: usize, y: usize, k: usize| -> f64 { classes[k].iter().map(|&v| pg.p(x, y, v)).sum() };
    let mut p = vec![0.0; q * q * q];
    for i in 0..q {
        for j in 0..q {
            for k in 0..q {
                let first = bar(classes[i][0], classes[j][0], k);
                for &x in &classes[i] {
                    for &y in &classes[j] {
                        let other = bar(x, y, k);
                        if (other - first).abs() > collision {
                            return Err(Error::RepresentativeMismatch(format!(
                                "classes ({i}, {j}) -> {k}: representatives ({}, {}) give {first}, ({x}, {y}) give {other}",
                                classes[i][0], classes[j][0]
                            )));
                        }
                    }
                }
                p[(i * q + j) * q + k] = first;
            }
        }
    }
    let labels = classes.iter().map(|cls| format!("[{}]", pg.labels()[cls[0]])).collect();
    let dual = classes.iter().map(|cls| class_of[pg.dual()[cls[0]]]).collect();
    let group = ProbabilityGroup::new(labels, 0, dual, p, tol)?;
    Ok(QuotientHypergroup { classes, group })
}

/// Characters trivial on `S`.
pub fn annihilator(table: &CharacterTable, s: &SubHypergroup, tol: &Tolerances) -> Vec<usize> {
    (0..table.rank())
        .filter(|&j| s.members.iter().all(|&m| (table.values[j][m] - 1.0).norm() <= tol.eq))
        .collect()
}

pub const ANNIHILATOR_SIZE: &str = "annihilator size";
pub const QUOTIENT_AXIOMS: &str = "quotient axioms";
pub const RESTRICTED_CHARACTERS: &str = "characters of the quotient";
pub const INDUCED_DUAL: &str = "induced dual constants";

/// Checks that `chi -> ([a] -> chi(a))` identifies the annihilator of `S`
/// with the dual of `A//S`, structure constants included.
pub fn verify_quotient_duality(
    pg: &ProbabilityGroup,
    table: &CharacterTable,
    s: &SubHypergroup,
    tol: &Tolerances,
    seed: u64,
) -> Result<ValidationReport> {
    let q = quotient(pg, s, tol)?;
    let ann = annihilator(table, s, tol);
    let mut checks = Vec::new();

    let axioms = validate_axioms(&q.group, tol);
    let mut c = Check::new(QUOTIENT_AXIOMS, axioms.all_passed());
    if let Some(f) = axioms.first_failure() {
        c = c.with_witness(f.witness.clone()).with_detail(f.name.clone());
    }
    checks.push(c);
    checks.push(Check::new(ANNIHILATOR_SIZE, ann.len() == q.rank()).with_detail(format!(
        "{} characters, quotient rank {}",
        ann.len(),
        q.rank()
    )));

    let n = q.rank();
    let alpha: Vec<Vec<ApproxComplex>> = ann
        .iter()
        .map(|&j| q.classes.iter().map(|cls| table.values[j][cls[0]]).collect())
        .collect();
    let mut hom = Deviation::new(tol.eq);
    for (t, row) in alpha.iter().enumerate() {
        for a in 0..n {
            for b in 0..n {
                let lhs: ApproxComplex = (0..n).map(|x| row[x] * q.group.p(a, b, x)).sum();
                hom.record((lhs - row[a] * row[b]).norm(), &[ann[t], a, b]);
            }
        }
    }
    checks.push(hom.into_check(RESTRICTED_CHARACTERS));

    if ann.len() != n || !checks.iter().all(|c| c.passed) {
        checks.push(Check::new(INDUCED_DUAL, false).with_detail("skipped: earlier check failed"));
        return Ok(ValidationReport { checks });
    }

    let qt = character_table(&q.group, seed, tol)?;
    let limit = tol.eq.sqrt().max(1e-6);
    let mut to_quotient = Vec::with_capacity(n);
    for (t, row) in alpha.iter().enumerate() {
        let hits: Vec<usize> = (0..n)
            .filter(|&k| (0..n).all(|x| (qt.values[k][x] - row[x]).norm() < limit))
            .collect();
        match hits.as_slice() {
            [k] => to_quotient.push(*k),
            _ => {
                checks.push(
                    Check::new(INDUCED_DUAL, false)
                        .with_witness(Some(vec![ann[t]]))
                        .with_detail(format!("matches quotient characters {hits:?}")),
                );
                return Ok(ValidationReport { checks });
            }
        }
    }
    let full = dual_constants(pg, table, tol);
    let part = dual_constants(&q.group, &qt, tol);
    let mut dev = Deviation::new(tol.eq);
    for (x, &i) in ann.iter().enumerate() {
        for (y, &j) in ann.iter().enumerate() {
            for (z, &k) in ann.iter().enumerate() {
                let a = full.phat(i, j, k);
                let b = part.phat(to_quotient[x], to_quotient[y], to_quotient[z]);
                dev.record((a - b).norm(), &[i, j, k]);
            }
        }
    }
    checks.push(dev.into_check(INDUCED_DUAL));
    Ok(ValidationReport { checks })
}
