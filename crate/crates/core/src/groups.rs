//! Finite groups from multiplication tables: conjugacy classes, character
//! tables through the hypergroup engine, representation rings, class
//! hypergroups and Drinfeld-double modular data.

use crate::classalg::{CenterPair, ModularData};
use crate::fusion::{validate_fusion_ring, FusionRing};
use crate::hypergroup::{character_table, ProbabilityGroup};
use crate::report::Deviation;
use crate::scalar::{c, is_nonneg_integer, nearest_integer, ApproxComplex, Rational};
use crate::{Error, Result, Tolerances};

/// Largest group order accepted for character tables.
pub const CHARACTER_ORDER_GUARD: usize = 1024;
/// Largest group order accepted for Drinfeld doubles.
pub const DOUBLE_ORDER_GUARD: usize = 128;

/// A finite group given by its multiplication table: `mul(a, b) = table[a][b]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a square table: Latin square, identity, associativity.
    pub fn load(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n) {
            return Err(Error::Malformed(
                "multiplication table must be square and nonempty".into(),
            ));
        }
        if let Some((a, b)) = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| table[a][b] >= n)
        {
            return Err(Error::Malformed(format!("entry ({a}, {b}) is out of range")));
        }
        for a in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for b in 0..n {
                if std::mem::replace(&mut seen_row[table[a][b]], true) {
                    return Err(Error::NotAGroup(format!(
                        "row {a} repeats {} (Latin square)",
                        table[a][b]
                    )));
                }
                if std::mem::replace(&mut seen_col[table[b][a]], true) {
                    return Err(Error::NotAGroup(format!(
                        "column {a} repeats {} (Latin square)",
                        table[b][a]
                    )));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                for x in 0..n {
                    if table[table[a][b]][x] != table[a][table[b][x]] {
                        return Err(Error::NotAGroup(format!("associativity fails at ({a}, {b}, {x})")));
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a][b] == identity)
                    .expect("Latin square rows contain the identity")
            })
            .collect();
        Ok(FiniteGroup {
            table,
            identity,
            inverse,
        })
    }

    /// Group from a flat row-major table.
    pub fn from_flat(order: usize, flat: &[usize]) -> Result<Self> {
        if flat.len() != order * order {
            return Err(Error::Malformed(format!(
                "flat table has {} entries, expected {}",
                flat.len(),
                order * order
            )));
        }
        Self::load(flat.chunks(order.max(1)).map(|r| r.to_vec()).collect())
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Conjugacy classes: the identity class first, the rest ordered by
    /// smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut order = vec![self.identity];
        order.extend((0..n).filter(|&x| x != self.identity));
        for x in order {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut cls: Vec<usize> = (0..n).map(|g| self.conjugate(g, x)).collect();
            cls.sort_unstable();
            cls.dedup();
            for &y in &cls {
                class_of[y] = classes.len();
            }
            classes.push(cls);
        }
        classes
    }

    pub fn centralizer(&self, a: usize) -> Vec<usize> {
        (0..self.order())
            .filter(|&g| self.mul(g, a) == self.mul(a, g))
            .collect()
    }

    /// The subgroup on `elements` (which must be closed), reindexed in the
    /// given order.
    pub fn subgroup(&self, elements: &[usize]) -> Result<FiniteGroup> {
        let pos = |x: usize| elements.iter().position(|&e| e == x);
        let table = elements
            .iter()
            .map(|&a| {
                elements
                    .iter()
                    .map(|&b| pos(self.mul(a, b)).ok_or_else(|| Error::NotAGroup("subset is not closed".into())))
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteGroup::load(table)
    }
}

/// Irreducible characters of a finite group, one row per character and one
/// column per conjugacy class.
#[derive(Debug, Clone)]
pub struct GroupCharacterTable {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub values: Vec<Vec<ApproxComplex>>,
    pub degrees: Vec<i64>,
}

impl GroupCharacterTable {
    /// `chi_j(g)`
    pub fn value(&self, j: usize, g: usize) -> ApproxComplex {
        self.values[j][self.class_of[g]]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }
}

/// Number of pairs `(x, y)` in `C_i x C_j` with `xy = z` for a fixed `z` in
/// `C_k`.
fn class_constants(g: &FiniteGroup, classes: &[Vec<usize>]) -> Vec<i64> {
    let r = classes.len();
    let mut class_of = vec![0; g.order()];
    for (k, cls) in classes.iter().enumerate() {
        for &x in cls {
            class_of[x] = k;
        }
    }
    let mut out = vec![0i64; r * r * r];
    for i in 0..r {
        for j in 0..r {
            for &x in &classes[i] {
                for &y in &classes[j] {
                    let z = g.mul(x, y);
                    if classes[class_of[z]][0] == z {
                        out[(i * r + j) * r + class_of[z]] += 1;
                    }
                }
            }
        }
    }
    out
}

/// Normalized class sums `C_k / |C_k|` with
/// `p_k(i, j) = c_ij^k |C_k| / (|C_i| |C_j|)`; the weights are class sizes.
pub fn class_hypergroup(g: &FiniteGroup, tol: &Tolerances) -> Result<ProbabilityGroup> {
    let classes = g.conjugacy_classes();
    let r = classes.len();
    let cc = class_constants(g, &classes);
    let size: Vec<f64> = classes.iter().map(|c| c.len() as f64).collect();
    let p = (0..r * r * r)
        .map(|idx| {
            let (i, j, k) = (idx / (r * r), (idx / r) % r, idx % r);
            cc[idx] as f64 * size[k] / (size[i] * size[j])
        })
        .collect();
    let class_index = |x: usize| classes.iter().position(|c| c.contains(&x)).unwrap();
    let dual = classes.iter().map(|c| class_index(g.inv(c[0]))).collect();
    let labels = classes.iter().map(|c| format!("[{}]", c[0])).collect();
    ProbabilityGroup::new(labels, 0, dual, p, tol)
}

/// Characters from the class hypergroup: `d_j = sqrt(|G| / n_j)` and
/// `chi_j(g) = d_j mu_j([g])`.
pub fn group_character_table(g: &FiniteGroup, tol: &Tolerances, seed: u64) -> Result<GroupCharacterTable> {
    let n = g.order();
    if n > CHARACTER_ORDER_GUARD {
        return Err(Error::RankGuard {
            rank: n,
            limit: CHARACTER_ORDER_GUARD,
        });
    }
    let classes = g.conjugacy_classes();
    let mut class_of = vec![0; n];
    for (k, cls) in classes.iter().enumerate() {
        for &x in cls {
            class_of[x] = k;
        }
    }
    let pg = class_hypergroup(g, tol)?;
    let t = character_table(&pg, seed, tol)?;
    let r = classes.len();
    let mut degrees = Vec::with_capacity(r);
    for (j, &codegree) in t.codegrees.iter().enumerate() {
        let d = (n as f64 / codegree).sqrt();
        match nearest_integer(c(d, 0.0), tol.int) {
            Some(k) if k > 0 => degrees.push(k),
            _ => return Err(Error::DegreeNotIntegral(format!("character {j} has degree {d}"))),
        }
    }
    let values: Vec<Vec<ApproxComplex>> = (0..r)
        .map(|j| (0..r).map(|k| t.values[j][k] * degrees[j] as f64).collect())
        .collect();

    let size: Vec<f64> = classes.iter().map(|c| c.len() as f64).collect();
    let limit = tol.eq * n as f64;
    let mut orth = Deviation::new(limit);
    for i in 0..r {
        for j in 0..r {
            let s: ApproxComplex = (0..r).map(|k| values[i][k] * values[j][k].conj() * size[k]).sum();
            orth.record((s - if i == j { n as f64 } else { 0.0 }).norm(), &[0, i, j]);
            let s: ApproxComplex = (0..r).map(|x| values[x][i] * values[x][j].conj()).sum();
            let want = if i == j { n as f64 / size[i] } else { 0.0 };
            orth.record((s - want).norm(), &[1, i, j]);
        }
    }
    if let Some(w) = orth.witness {
        return Err(Error::Consistency(format!(
            "character table orthogonality fails at {w:?}"
        )));
    }
    let square_sum: i64 = degrees.iter().map(|d| d * d).sum();
    if square_sum != n as i64 {
        return Err(Error::Consistency(format!("degrees square to {square_sum}, not {n}")));
    }
    Ok(GroupCharacterTable {
        classes,
        class_of,
        values,
        degrees,
    })
}

/// `N_ij^k = (1/|G|) sum_g chi_i(g) chi_j(g) conj(chi_k(g))`.
pub fn rep_ring(g: &FiniteGroup, t: &GroupCharacterTable, tol: &Tolerances) -> Result<FusionRing> {
    let r = t.values.len();
    let size = t.class_sizes();
    let n = g.order() as f64;
    let mut tensor = vec![vec![vec![Rational::from_integer(0); r]; r]; r];
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let m: ApproxComplex = (0..size.len())
                    .map(|x| t.values[i][x] * t.values[j][x] * t.values[k][x].conj() * size[x] as f64)
                    .sum::<ApproxComplex>()
                    / n;
                let m = is_nonneg_integer(m, tol.int).ok_or_else(|| Error::InvalidStructure {
                    what: "representation ring",
                    detail: format!("multiplicity at ({i}, {j}, {k}) is {m}"),
                })?;
                tensor[i][j][k] = Rational::from_integer(m);
            }
        }
    }
    let dual = conjugate_rows(&t.values, tol)?;
    let labels = (0..r).map(|j| format!("chi{j}")).collect();
    let ring = FusionRing::new(labels, 0, dual, tensor)?;
    if let Some(f) = validate_fusion_ring(&ring).first_failure() {
        return Err(Error::Consistency(format!("representation ring fails {}", f.name)));
    }
    Ok(ring)
}

fn conjugate_rows(rows: &[Vec<ApproxComplex>], tol: &Tolerances) -> Result<Vec<usize>> {
    let limit = tol.eq.sqrt().max(1e-6);
    (0..rows.len())
        .map(|i| {
            rows.iter()
                .position(|row| row.iter().zip(&rows[i]).all(|(a, b)| (a - b.conj()).norm() < limit))
                .ok_or_else(|| Error::Consistency(format!("row {i} has no conjugate row")))
        })
        .collect()
}

/// Modular data of the Drinfeld double together with the branching of its
/// simples to the representation ring.
#[derive(Debug, Clone)]
pub struct DoubleData {
    /// `(class index, centralizer character index)` per simple.
    pub simples: Vec<(usize, usize)>,
    pub dims: Vec<i64>,
    pub modular: ModularData,
    pub rep_ring: FusionRing,
    /// `B[s][i]`: multiplicity of irreducible `i` in simple `s` restricted to `G`.
    pub branching: Vec<Vec<i64>>,
    /// Simple of the double restricting to irreducible `i`.
    pub iota: Vec<usize>,
}

impl DoubleData {
    pub fn center_pair(&self) -> Result<CenterPair> {
        CenterPair::new(
            self.rep_ring.clone(),
            self.modular.clone(),
            self.branching.clone(),
            self.iota.clone(),
        )
    }
}

/// Simples are pairs (class `a`, irreducible character `alpha` of the
/// centralizer of its representative) with dimension `|a| alpha(1)`, and
/// `S_{(a,alpha),(b,beta)} = 1/(|C(a)| |C(b)|) sum_g conj(alpha(g b g^-1)) conj(beta(g^-1 a g))`
/// over the `g` for which `a` and `g b g^-1` commute.
pub fn double_modular_data(g: &FiniteGroup, tol: &Tolerances, seed: u64) -> Result<DoubleData> {
    let n = g.order();
    if n > DOUBLE_ORDER_GUARD {
        return Err(Error::RankGuard {
            rank: n,
            limit: DOUBLE_ORDER_GUARD,
        });
    }
    let table = group_character_table(g, tol, seed)?;
    let ring = rep_ring(g, &table, tol)?;
    let classes = &table.classes;

    struct Centralizer {
        elements: Vec<usize>,
        table: GroupCharacterTable,
    }
    let centralizers = classes
        .iter()
        .map(|cls| {
            let elements = g.centralizer(cls[0]);
            let sub = g.subgroup(&elements)?;
            let table = group_character_table(&sub, tol, seed)?;
            Ok(Centralizer { elements, table })
        })
        .collect::<Result<Vec<_>>>()?;
    // alpha(x) for x in the centralizer, else None
    let value = |c: &Centralizer, alpha: usize, x: usize| -> Option<ApproxComplex> {
        c.elements.iter().position(|&e| e == x).map(|p| c.table.value(alpha, p))
    };

    let mut simples = Vec::new();
    let mut dims = Vec::new();
    for (a, c) in centralizers.iter().enumerate() {
        for alpha in 0..c.table.degrees.len() {
            simples.push((a, alpha));
            dims.push(classes[a].len() as i64 * c.table.degrees[alpha]);
        }
    }
    let m = simples.len();
    let mut s = vec![vec![c(0.0, 0.0); m]; m];
    for x in 0..m {
        let (a, alpha) = simples[x];
        let ra = classes[a][0];
        for y in 0..m {
            let (b, beta) = simples[y];
            let rb = classes[b][0];
            let mut sum = c(0.0, 0.0);
            for h in 0..n {
                let conj_b = g.conjugate(h, rb);
                if g.mul(ra, conj_b) != g.mul(conj_b, ra) {
                    continue;
                }
                let back = g.mul(g.mul(g.inv(h), ra), h);
                let va = value(&centralizers[a], alpha, conj_b).expect("commutes with the representative");
                let vb = value(&centralizers[b], beta, back).expect("commutes with the representative");
                sum += va.conj() * vb.conj();
            }
            s[x][y] = sum / (centralizers[a].elements.len() * centralizers[b].elements.len()) as f64;
        }
    }

    let dual = conjugate_rows(&s, tol)?;
    let labels = simples
        .iter()
        .map(|&(a, alpha)| format!("[{}]:chi{alpha}", classes[a][0]))
        .collect();
    let modular = ModularData::new(labels, dual, s)?;
    if let Some(f) = modular.validate(tol).first_failure() {
        return Err(Error::Consistency(format!(
            "double S-matrix fails {} at {:?}",
            f.name, f.witness
        )));
    }
    modular.verlinde_ring(tol)?;
    let square_sum: i64 = dims.iter().map(|d| d * d).sum();
    if square_sum != (n * n) as i64 {
        return Err(Error::Consistency(format!(
            "dimensions square to {square_sum}, not {}",
            n * n
        )));
    }

    // Frobenius reciprocity: <Ind alpha, psi> = (1/|C|) sum_{h in C} alpha(h) conj(psi(h))
    let r = table.degrees.len();
    let mut branching = vec![vec![0i64; r]; m];
    for (x, &(a, alpha)) in simples.iter().enumerate() {
        let cen = &centralizers[a];
        for (psi, slot) in branching[x].iter_mut().enumerate() {
            let v: ApproxComplex = cen
                .elements
                .iter()
                .enumerate()
                .map(|(p, &h)| cen.table.value(alpha, p) * table.value(psi, h).conj())
                .sum::<ApproxComplex>()
                / cen.elements.len() as f64;
            *slot = is_nonneg_integer(v, tol.int)
                .ok_or_else(|| Error::Consistency(format!("branching multiplicity {v} at ({x}, {psi})")))?;
        }
    }
    let iota = (0..r)
        .map(|i| {
            (0..m)
                .find(|&x| simples[x].0 == 0 && (0..r).all(|k| branching[x][k] == (k == i) as i64))
                .ok_or_else(|| Error::Consistency(format!("no simple of the double restricts to {i}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DoubleData {
        simples,
        dims,
        modular,
        rep_ring: ring,
        branching,
        iota,
    })
}

/// Multiplication tables used by the test suites.
pub mod examples {
    use super::FiniteGroup;

    pub fn cyclic(n: usize) -> FiniteGroup {
        FiniteGroup::load((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()).unwrap()
    }

    /// Permutations of three points ordered e, (01), (02), (12), (012), (021).
    pub fn s3() -> FiniteGroup {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        permutation_group(&perms)
    }

    /// Group of the given permutations, composed as `(p q)(x) = p(q(x))`.
    pub fn permutation_group<const K: usize>(perms: &[[usize; K]]) -> FiniteGroup {
        let idx = |p: [usize; K]| perms.iter().position(|q| *q == p).expect("closed under composition");
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let mut r = [0; K];
                        for x in 0..K {
                            r[x] = p[q[x]];
                        }
                        idx(r)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::load(table).unwrap()
    }

    /// Symmetries of a square acting on its vertices 0..4.
    pub fn d4() -> FiniteGroup {
        permutation_group(&[
            [0, 1, 2, 3],
            [1, 2, 3, 0],
            [2, 3, 0, 1],
            [3, 0, 1, 2],
            [1, 0, 3, 2],
            [3, 2, 1, 0],
            [0, 3, 2, 1],
            [2, 1, 0, 3],
        ])
    }

    /// Quaternion units ordered 1, -1, i, -i, j, -j, k, -k.
    pub fn q8() -> FiniteGroup {
        // unit u = (sign, axis) with axis 0 = 1, 1 = i, 2 = j, 3 = k
        let unit = |idx: usize| (if idx.is_multiple_of(2) { 1i32 } else { -1 }, idx / 2);
        let index = |sign: i32, axis: usize| axis * 2 + (sign < 0) as usize;
        let table = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let ((sa, xa), (sb, xb)) = (unit(a), unit(b));
                        let (s, x) = match (xa, xb) {
                            (0, y) | (y, 0) => (1, y),
                            (p, q) if p == q => (-1, 0),
                            (1, 2) => (1, 3),
                            (2, 3) => (1, 1),
                            (3, 1) => (1, 2),
                            (2, 1) => (-1, 3),
                            (3, 2) => (-1, 1),
                            (1, 3) => (-1, 2),
                            _ => unreachable!(),
                        };
                        index(sa * sb * s, x)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::load(table).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn loading_rejects_non_groups() {
        assert!(FiniteGroup::load(vec![vec![0, 1], vec![1, 0]]).is_ok());
        let e = FiniteGroup::load(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(matches!(e, Error::NotAGroup(ref m) if m.contains("Latin")));
        // a Latin square without associativity
        let e = FiniteGroup::load(vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ])
        .unwrap_err();
        assert!(matches!(e, Error::NotAGroup(ref m) if m.contains("associativity")));
    }

    #[test]
    fn s3_classes_and_degrees() {
        let g = s3();
        let t = group_character_table(&g, &tol(), 1).unwrap();
        assert_eq!(t.class_sizes(), vec![1, 3, 2]);
        assert_eq!(t.degrees, vec![1, 1, 2]);
        let sgn: Vec<f64> = t.values[1].iter().map(|z| z.re).collect();
        assert_eq!(sgn.iter().map(|x| x.round() as i64).collect::<Vec<_>>(), vec![1, -1, 1]);
    }

    #[test]
    fn z4_and_q8_tables() {
        let t = group_character_table(&cyclic(4), &tol(), 1).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 1, 1]);
        for z in t.values.iter().flatten() {
            let k = (0..4)
                .filter(|&k| (z - ApproxComplex::i().powu(k)).norm() < 1e-9)
                .count();
            assert_eq!(k, 1);
        }
        let t = group_character_table(&q8(), &tol(), 1).unwrap();
        let mut d = t.degrees.clone();
        d.sort_unstable();
        assert_eq!(d, vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn rep_rings() {
        let g = s3();
        let t = group_character_table(&g, &tol(), 1).unwrap();
        let ring = rep_ring(&g, &t, &tol()).unwrap();
        assert_eq!(ring.tensor(), crate::fusion::fixtures::s3rep().tensor());
        let q = q8();
        let t = group_character_table(&q, &tol(), 1).unwrap();
        let ring = rep_ring(&q, &t, &tol()).unwrap();
        let two = t.degrees.iter().position(|&d| d == 2).unwrap();
        for k in 0..5 {
            let want = if t.degrees[k] == 1 { 1 } else { 0 };
            assert_eq!(ring.n(two, two, k), Rational::from_integer(want));
        }
    }

    #[test]
    fn class_hypergroups() {
        let pg = class_hypergroup(&s3(), &tol()).unwrap();
        assert_eq!(pg.h(), &[1.0, 3.0, 2.0]);
        assert!((pg.p(1, 1, 0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((pg.p(1, 1, 2) - 2.0 / 3.0).abs() < 1e-15);
        let z3 = class_hypergroup(&cyclic(3), &tol()).unwrap();
        assert_eq!(z3.p(1, 2, 0), 1.0);
    }

    #[test]
    fn double_of_z2_and_s3() {
        let d = double_modular_data(&cyclic(2), &tol(), 1).unwrap();
        assert_eq!(d.dims, vec![1, 1, 1, 1]);
        for z in d.modular.s().iter().flatten() {
            assert!((z.norm() - 0.5).abs() < 1e-12);
        }
        let d = double_modular_data(&s3(), &tol(), 1).unwrap();
        assert_eq!(d.dims, vec![1, 1, 2, 3, 3, 2, 2, 2]);
        let ring = d.modular.verlinde_ring(&tol()).unwrap();
        let max = ring.tensor().into_iter().flatten().flatten().max().unwrap();
        // every fusion coefficient of D(S3) is 0 or 1
        assert_eq!(max, Rational::from_integer(1));
        assert_eq!(d.dims.iter().map(|x| x * x).sum::<i64>(), 36);
    }
}
