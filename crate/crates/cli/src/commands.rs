//! One function per subcommand. The `*_of` variants take parsed input and
//! are shared with the corpus runner.

use std::path::Path;

use serde_json::{json, Map, Value};

use fusion_classes::classalg::{
    build_class_algebra, burnside_constants, center_pair_check, integrality_report, verify_central_lemma,
    verify_self_dual, CenterPair, ModularData,
};
use fusion_classes::fusion::{fp_dimensions, to_probability_group, FusionRing};
use fusion_classes::groups::{class_hypergroup, double_modular_data, FiniteGroup};
use fusion_classes::hypergroup::{
    character_table, check_orthogonality, double_dual_check, dual_basis_identity, dual_constants, validate_axioms,
    ProbabilityGroup,
};
use fusion_classes::io::{self, Input};
use fusion_classes::quotient::{
    annihilator, find_subhypergroups, quotient as quotient_of, verify_quotient_duality, SubHypergroup,
};
use fusion_classes::report::{complex_matrix, complex_row, fmt_complex, fmt_real, real_row, Check, Report};
use fusion_classes::{Error, Result};

use crate::{display, RunConfig};

pub const VERLINDE_INTEGRAL: &str = "Verlinde coefficients are non-negative integers";
pub const VERLINDE_MATCHES_RING: &str = "Verlinde ring equals the referenced ring";
pub const BURNSIDE_AGREEMENT: &str = "Burnside formulas agree";
pub const DOUBLE_DIMENSIONS: &str = "squared dimensions sum to the squared order";

fn load(cfg: &RunConfig, path: &Path) -> Result<Input> {
    io::load(path, &cfg.tolerances)
}

fn expect_ring(input: Input) -> Result<FusionRing> {
    match input {
        Input::Fusion(ring) => Ok(ring),
        other => Err(Error::Malformed(format!(
            "expected a fusion file, found kind {}",
            other.kind()
        ))),
    }
}

/// The probability group a file describes: the normalized fusion ring, the
/// group itself, or the class hypergroup of a finite group.
pub fn hypergroup_of(cfg: &RunConfig, input: Input) -> Result<ProbabilityGroup> {
    let tol = &cfg.tolerances;
    match input {
        Input::Fusion(ring) => to_probability_group(&ring, tol),
        Input::ProbGroup { group, .. } => Ok(group),
        Input::Group(g) => class_hypergroup(&g, tol),
        other => Err(Error::Malformed(format!(
            "kind {} does not describe a probability group",
            other.kind()
        ))),
    }
}

fn keyed(pairs: impl IntoIterator<Item = (String, Value)>) -> Value {
    Value::Object(pairs.into_iter().collect::<Map<_, _>>())
}

fn char_label(j: usize) -> String {
    format!("mu{j}")
}

fn set_label(labels: &[String], members: &[usize]) -> String {
    let names: Vec<&str> = members.iter().map(|&m| labels[m].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

fn describe_group(rep: &mut Report, pg: &ProbabilityGroup) {
    rep.section(
        "probability group",
        json!({
            "labels": pg.labels(),
            "weights": real_row(pg.h()),
            "total weight": fmt_real(pg.n_a()),
        }),
    );
}

pub fn validate(cfg: &RunConfig, path: &Path) -> Result<Report> {
    validate_of(cfg, &display(path), load(cfg, path)?)
}

pub fn validate_of(cfg: &RunConfig, name: &str, input: Input) -> Result<Report> {
    let tol = &cfg.tolerances;
    let mut rep = Report::new("validate", name, *tol);
    rep.section("input", json!({ "kind": input.kind() }));
    match input {
        Input::Fusion(ring) => {
            rep.section(
                "ring",
                json!({
                    "labels": ring.labels(),
                    "unit": ring.unit(),
                    "dual": ring.dual(),
                    "based": ring.is_based(),
                    "commutative": ring.is_commutative(),
                }),
            );
            let axioms = ring.validate();
            rep.checks_from("fusion: ", &axioms);
            if axioms.all_passed() {
                let fp = fp_dimensions(&ring, tol)?;
                rep.section(
                    "dimensions",
                    json!({ "fpdim": real_row(&fp.fpdim), "total": fmt_real(fp.total) }),
                );
                let pg = to_probability_group(&ring, tol)?;
                describe_group(&mut rep, &pg);
                rep.checks_from("probability group: ", &validate_axioms(&pg, tol));
            }
        }
        Input::ProbGroup {
            group,
            declared_weights,
        } => {
            describe_group(&mut rep, &group);
            rep.checks_from("", &validate_axioms(&group, tol));
            if let Some(w) = declared_weights {
                rep.check(group.check_declared_weights(&w, tol));
            }
        }
        Input::Group(g) => {
            rep.section("group", json!({ "order": g.order(), "classes": g.conjugacy_classes() }));
            let pg = class_hypergroup(&g, tol)?;
            describe_group(&mut rep, &pg);
            rep.checks_from("class hypergroup: ", &validate_axioms(&pg, tol));
        }
        Input::Modular { data, ring } => {
            rep.section(
                "modular data",
                json!({ "labels": data.labels(), "dims": complex_row(&data.dims()) }),
            );
            rep.checks_from("", &data.validate(tol));
            verlinde_checks(&mut rep, &data, ring.as_ref(), cfg);
        }
        Input::CenterPair(cp) => {
            rep.checks_from("", &cp.invariants(tol)?);
        }
    }
    Ok(rep)
}

fn verlinde_checks(rep: &mut Report, md: &ModularData, ring: Option<&FusionRing>, cfg: &RunConfig) {
    match md.verlinde_ring(&cfg.tolerances) {
        Ok(v) => {
            rep.check(Check::new(VERLINDE_INTEGRAL, true));
            if let Some(r) = ring {
                rep.check(Check::new(VERLINDE_MATCHES_RING, v.tensor() == r.tensor()));
            }
        }
        Err(e) => rep.check(Check::new(VERLINDE_INTEGRAL, false).with_detail(e.to_string())),
    }
}

pub fn characters(cfg: &RunConfig, path: &Path) -> Result<Report> {
    let pg = hypergroup_of(cfg, load(cfg, path)?)?;
    characters_of(cfg, &display(path), &pg)
}

pub fn characters_of(cfg: &RunConfig, name: &str, pg: &ProbabilityGroup) -> Result<Report> {
    let tol = &cfg.tolerances;
    let mut rep = Report::new("characters", name, *tol);
    let table = character_table(pg, cfg.seed, tol)?;
    let r = pg.rank();
    rep.section("basis", json!({ "labels": pg.labels(), "weights": real_row(pg.h()) }));
    rep.section(
        "characters",
        keyed((0..r).map(|j| (char_label(j), complex_row(&table.values[j])))),
    );
    rep.section(
        "codegrees",
        json!({
            "codegrees": real_row(&table.codegrees),
            "dual weights": real_row(&table.dual_weights),
            "conjugate": table.star,
        }),
    );
    rep.section(
        "idempotents",
        keyed((0..r).map(|j| (format!("F{j}"), complex_row(&table.idempotents[j])))),
    );
    rep.checks_from("", &check_orthogonality(pg, &table, tol));

    let dual = dual_constants(pg, &table, tol);
    let mut rows = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in 0..r {
            let row: Vec<_> = (0..r).map(|k| dual.phat(i, j, k)).collect();
            rows.push((format!("{}*{}", char_label(i), char_label(j)), complex_row(&row)));
        }
    }
    rep.section("dual constants", keyed(rows));
    rep.section(
        "dual",
        json!({
            "weights": real_row(&dual.weights),
            "total weight": fmt_real(dual.total_weight),
            "dualizable": dual.dualizable,
        }),
    );
    rep.checks_from("", &dual.checks);
    rep.check(dual_basis_identity(pg, &table, tol));
    if dual.dualizable {
        rep.check(double_dual_check(pg, &table, tol, cfg.seed)?);
    }
    Ok(rep)
}

pub fn burnside(cfg: &RunConfig, path: &Path) -> Result<Report> {
    let ring = expect_ring(load(cfg, path)?)?;
    burnside_of(cfg, &display(path), &ring)
}

pub fn burnside_of(cfg: &RunConfig, name: &str, ring: &FusionRing) -> Result<Report> {
    let tol = &cfg.tolerances;
    let lattice = cfg.lattice()?;
    let mut rep = Report::new("burnside", name, *tol);
    let ca = build_class_algebra(ring, tol, cfg.seed)?;
    let r = ca.rank();
    rep.section(
        "dimensions",
        json!({
            "labels": ring.labels(),
            "d": real_row(&ca.dims),
            "dim C": fmt_real(ca.dim),
            "class dimensions": real_row(&ca.class_dims),
            "codegrees": real_row(&ca.table.codegrees),
        }),
    );
    rep.section(
        "class sums",
        keyed((0..r).map(|j| (format!("C{j}"), complex_row(&ca.class_sums[j])))),
    );
    let mut rows = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in 0..r {
            let row: Vec<_> = (0..r).map(|k| ca.constant(i, j, k)).collect();
            rows.push((format!("C{i}*C{j}"), complex_row(&row)));
        }
    }
    rep.section("structure constants", keyed(rows));
    rep.section("cointegral", real_row(&ca.cointegral));
    rep.checks_from("", &ca.checks);

    let direct = burnside_constants(&ca, tol)?;
    let gap = direct
        .iter()
        .zip(&ca.constants)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    rep.check(Check::within(BURNSIDE_AGREEMENT, gap, 10.0 * tol.eq));
    rep.check(verify_central_lemma(&ca, tol));

    let ir = integrality_report(&ca, lattice.as_ref(), tol)?;
    let constants = ir.constants.iter().map(|(i, j, k, v, verdict)| {
        (
            format!("C{i}*C{j}:C{k}"),
            json!(format!("{} {}", fmt_complex(*v), verdict.label())),
        )
    });
    let codegrees = ir
        .codegrees
        .iter()
        .map(|(j, v, verdict)| (char_label(*j), json!(format!("{} {}", fmt_real(*v), verdict.label()))));
    rep.section(
        "integrality",
        json!({
            "weakly integral": ir.weakly_integral,
            "lattice": lattice.as_ref().map(|l| complex_row(l.basis())),
            "scaled constants": keyed(constants),
            "codegrees": keyed(codegrees),
        }),
    );
    rep.checks_from("", &ir.checks());
    Ok(rep)
}

/// Subhypergroups and quotients. Without `members` every proper nontrivial
/// subhypergroup is used.
pub fn quotient(cfg: &RunConfig, path: &Path, members: Option<&[usize]>) -> Result<Report> {
    let pg = hypergroup_of(cfg, load(cfg, path)?)?;
    quotient_with(cfg, &display(path), &pg, members)
}

pub fn quotient_with(cfg: &RunConfig, name: &str, pg: &ProbabilityGroup, members: Option<&[usize]>) -> Result<Report> {
    let tol = &cfg.tolerances;
    let mut rep = Report::new("quotient", name, *tol);
    let labels = pg.labels();
    let subs = find_subhypergroups(pg, tol)?;
    rep.section(
        "subhypergroups",
        Value::Array(subs.iter().map(|s| json!(set_label(labels, s.members()))).collect()),
    );
    let targets = match members {
        Some(m) => vec![SubHypergroup::new(pg, m, tol)?],
        None => subs
            .into_iter()
            .filter(|s| s.len() > 1 && s.len() < pg.rank())
            .collect(),
    };
    let table = character_table(pg, cfg.seed, tol)?;
    for s in &targets {
        let sname = format!("S={}", set_label(labels, s.members()));
        let q = quotient_of(pg, s, tol)?;
        let class_names: Vec<String> = q
            .classes
            .iter()
            .map(|c| format!("[{}]", set_label(labels, c)))
            .collect();
        let qr = q.rank();
        let mut rows = Vec::with_capacity(qr * qr);
        for a in 0..qr {
            for b in 0..qr {
                let row: Vec<f64> = (0..qr).map(|c| q.group.p(a, b, c)).collect();
                rows.push((format!("{}*{}", class_names[a], class_names[b]), real_row(&row)));
            }
        }
        let ann: Vec<String> = annihilator(&table, s, tol).into_iter().map(char_label).collect();
        rep.section(
            &sname,
            json!({
                "classes": class_names,
                "weights": real_row(q.group.h()),
                "table": keyed(rows),
                "annihilator": ann,
            }),
        );
        rep.checks_from(
            &format!("{sname}: "),
            &verify_quotient_duality(pg, &table, s, tol, cfg.seed)?,
        );
    }
    Ok(rep)
}

/// `paths` is either `[modular]` with a ring reference inside the modular
/// file, or `[ring, modular]`.
pub fn selfdual(cfg: &RunConfig, paths: &[&Path]) -> Result<Report> {
    let (ring_path, modular_path) = match paths {
        [m] => (None, *m),
        [r, m] => (Some(*r), *m),
        _ => {
            return Err(Error::Malformed(
                "selfdual takes a modular file and an optional ring file".into(),
            ))
        }
    };
    let (md, embedded) = match load(cfg, modular_path)? {
        Input::Modular { data, ring } => (data, ring),
        other => {
            return Err(Error::Malformed(format!(
                "expected a modular file, found kind {}",
                other.kind()
            )))
        }
    };
    let ring = match ring_path {
        Some(p) => expect_ring(load(cfg, p)?)?,
        None => embedded.ok_or_else(|| Error::Malformed("modular file names no ring; pass one explicitly".into()))?,
    };
    selfdual_of(cfg, &display(modular_path), &ring, &md)
}

pub fn selfdual_of(cfg: &RunConfig, name: &str, ring: &FusionRing, md: &ModularData) -> Result<Report> {
    let tol = &cfg.tolerances;
    let mut rep = Report::new("selfdual", name, *tol);
    rep.section(
        "modular data",
        json!({
            "labels": md.labels(),
            "dims": complex_row(&md.dims()),
            "S": complex_matrix(&md.normalized()),
        }),
    );
    rep.checks_from("", &verify_self_dual(ring, md, tol, cfg.seed)?);
    Ok(rep)
}

pub fn center(cfg: &RunConfig, path: &Path) -> Result<Report> {
    match load(cfg, path)? {
        Input::CenterPair(cp) => center_of(cfg, &display(path), &cp),
        other => Err(Error::Malformed(format!(
            "expected a centerpair file, found kind {}",
            other.kind()
        ))),
    }
}

pub fn center_of(cfg: &RunConfig, name: &str, cp: &CenterPair) -> Result<Report> {
    let tol = &cfg.tolerances;
    let mut rep = Report::new("center", name, *tol);
    rep.checks_from("invariants: ", &cp.invariants(tol)?);
    let out = center_pair_check(cp, tol, cfg.seed)?;
    let names = cp.center.labels();
    let pick = |ix: &[usize]| -> Vec<String> { ix.iter().map(|&s| names[s].clone()).collect() };
    let r = out.sigma.len();
    rep.section(
        "classes",
        keyed((0..r).map(|j| (char_label(j), json!(pick(&out.classes[j]))))),
    );
    rep.section(
        "sigma",
        json!({
            "targets": pick(&out.sigma),
            "target dimensions": real_row(&out.sigma.iter().map(|&v| out.center_dims[v]).collect::<Vec<_>>()),
            "class dimensions": real_row(&out.class_dims),
            "residual": pick(&out.residual),
        }),
    );
    for (phase, report) in out.phases() {
        rep.checks_from(&format!("{phase}: "), report);
    }
    Ok(rep)
}

/// Builds the Drinfeld double of a group and writes four files into `dir`:
/// the representation ring, the fusion ring of the double, its modular
/// data and the center pair joining the first and third.
pub fn double(cfg: &RunConfig, path: &Path, dir: &Path) -> Result<Report> {
    let g = match load(cfg, path)? {
        Input::Group(g) => g,
        other => {
            return Err(Error::Malformed(format!(
                "expected a group file, found kind {}",
                other.kind()
            )))
        }
    };
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("group");
    double_of(cfg, &display(path), &g, dir, stem)
}

pub fn double_of(cfg: &RunConfig, name: &str, g: &FiniteGroup, dir: &Path, stem: &str) -> Result<Report> {
    let tol = &cfg.tolerances;
    let mut rep = Report::new("double", name, *tol);
    let dd = double_modular_data(g, tol, cfg.seed)?;
    let order = g.order() as i64;
    rep.section(
        "double",
        json!({
            "simples": dd.modular.labels(),
            "dims": dd.dims,
            "S": complex_matrix(dd.modular.s()),
            "branching": dd.branching,
            "iota": dd.iota,
        }),
    );
    rep.checks_from("", &dd.modular.validate(tol));
    let sum: i64 = dd.dims.iter().map(|d| d * d).sum();
    rep.check(Check::new(DOUBLE_DIMENSIONS, sum == order * order).with_detail(format!("{sum}")));
    verlinde_checks(&mut rep, &dd.modular, None, cfg);
    rep.checks_from("representation ring: ", &dd.rep_ring.validate());

    let verlinde = dd.modular.verlinde_ring(tol)?;
    let ring_file = format!("{stem}-rep.json");
    let center_ring_file = format!("{stem}-double-ring.json");
    let modular_file = format!("{stem}-double.json");
    let pair_file = format!("{stem}-center.json");
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: display(dir),
        source,
    })?;
    io::write_json(&dir.join(&ring_file), &io::fusion_document(&dd.rep_ring))?;
    io::write_json(&dir.join(&center_ring_file), &io::fusion_document(&verlinde))?;
    io::write_json(
        &dir.join(&modular_file),
        &io::modular_document(&dd.modular, Some(&center_ring_file)),
    )?;
    io::write_json(
        &dir.join(&pair_file),
        &io::centerpair_document(&ring_file, &modular_file, &dd.branching, &dd.iota),
    )?;
    rep.section("files", json!([ring_file, center_ring_file, modular_file, pair_file]));
    Ok(rep)
}
