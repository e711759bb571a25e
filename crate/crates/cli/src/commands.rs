use std::path::PathBuf;

use anyhow::{bail, Context as _, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use starlab_core::crossed::{random_crossed, verify_crossed_associativity, verify_crossed_structure};
use starlab_core::fgroupoid::{transformation_groupoid, verify_sector_decomposition, FiniteGroupoid, GroupoidTables};
use starlab_core::homology::{
    hc_dimensions, hh_dimensions, invariant_cohomology_compare, verify_cyclic_identities, verify_multiplication_is_b,
    verify_operation_identity, FiniteDimAlgebra, PermutationAction,
};
use starlab_core::koszul::{verify_group_koszul, verify_koszul};
use starlab_core::poisson::{verify_b_d_pi_anticommute, verify_brylinski_compat, verify_delta_identities, verify_hkr_maps};
use starlab_core::polyalg::Polynomial;
use starlab_core::report::Check;
use starlab_core::star::{
    random_polynomial, verify_associativity, verify_canonical_commutators, verify_inv_sqrt, verify_low_orders, ConstantBivector,
};
use starlab_core::symgroup::MatrixGroup;
use starlab_core::traces::{
    monomial_traces, trace_space_dimension, verify_conjugation_axiom, verify_independence, verify_twisted_trace_axioms, TraceTable,
};

use crate::report::Report;
use crate::scenario::{build_algebra, parse_action_shorthand, parse_algebra_shorthand, Scenario};

/// Scenario values with command-line overrides applied.
pub struct Context {
    pub scenario: Scenario,
    pub seed: u64,
    pub samples: Option<usize>,
    pub degree_cap: Option<u32>,
    pub hbar_order: Option<u32>,
}

impl Context {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn samples(&self, default: usize) -> usize {
        self.samples.or(self.scenario.samples).unwrap_or(default)
    }

    fn degree_cap(&self, default: u32) -> u32 {
        self.degree_cap.or(self.scenario.caps.degree).unwrap_or(default)
    }

    fn hbar_order(&self, default: u32) -> u32 {
        self.hbar_order.or(self.scenario.caps.hbar).unwrap_or(default)
    }

    fn k_max(&self, flag: Option<usize>, default: usize) -> usize {
        flag.or(self.scenario.caps.k_max).unwrap_or(default)
    }

    fn report(&self, command: &str) -> Report {
        Report::new(command, &self.scenario.name, self.seed)
    }

    fn group_and_bivector(&self) -> Result<(MatrixGroup, ConstantBivector)> {
        let group = self.scenario.matrix_group()?;
        let pi = self.scenario.bivector(group.dimension(), group.field_order())?;
        if pi.dimension() != group.dimension() {
            bail!("bivector dimension {} differs from group dimension {}", pi.dimension(), group.dimension());
        }
        Ok((group, pi))
    }

    fn algebra(&self, shorthand: Option<&str>, default: &str) -> Result<FiniteDimAlgebra> {
        match shorthand {
            Some(s) => build_algebra(&parse_algebra_shorthand(s)?),
            None if self.scenario.algebra.is_some() => self.scenario.algebra(),
            None => build_algebra(&parse_algebra_shorthand(default)?),
        }
    }
}

fn trace_header(report: &mut Report) {
    report.set_header("moyal_constant", "i hbar / 2");
    report.set_header("trace_normalization", "1 / det_C(1 - g_perp^{-1})");
    report.set_header("perpendicular_space", "im(1 - g)");
}

#[derive(Serialize)]
struct ClassRow {
    class: usize,
    representative: usize,
    size: usize,
    fixed_dim: usize,
    det_one_minus_inverse: String,
    admissible: bool,
    traces: Vec<(String, String)>,
}

pub fn trace_table(ctx: &Context) -> Result<Report> {
    let (group, pi) = ctx.group_and_bivector()?;
    let table = TraceTable::new(&group, &pi)?;
    let cap = ctx.degree_cap(2);
    let n = group.dimension();
    let order = group.field_order();
    let mut rows = Vec::new();
    for (c, class) in table.classes.iter().enumerate() {
        let spec = &table.specs[class.representative];
        rows.push(ClassRow {
            class: c,
            representative: class.representative,
            size: class.size(),
            fixed_dim: spec.fixed_dim(),
            det_one_minus_inverse: spec.det.to_string(),
            admissible: spec.is_admissible(),
            traces: monomial_traces(spec, n, order, cap).into_iter().map(|(m, t)| (m.to_string(), t.to_string())).collect(),
        });
    }
    let mut rng = ctx.rng();
    let samples: Vec<Polynomial> = (0..ctx.samples(4)).map(|_| random_polynomial(&mut rng, n, order, cap, 3)).collect();
    let mut report = ctx.report("trace-table");
    trace_header(&mut report);
    report.push(verify_conjugation_axiom(&group, &table, &samples));
    report.set_data("group_order", group.len());
    report.set_data("admissible_classes", table.admissible_classes());
    report.set_data("classes", rows);
    Ok(report)
}

pub fn verify_traces(ctx: &Context) -> Result<Report> {
    let (group, pi) = ctx.group_and_bivector()?;
    let table = TraceTable::new(&group, &pi)?;
    let n = group.dimension();
    let order = group.field_order();
    let degree = ctx.degree_cap(3);
    let mut rng = ctx.rng();
    let count = ctx.samples(20);
    let pairs: Vec<(Polynomial, Polynomial)> = (0..count)
        .map(|_| (random_polynomial(&mut rng, n, order, degree, 3), random_polynomial(&mut rng, n, order, degree, 3)))
        .collect();
    let singles: Vec<Polynomial> = pairs.iter().take(4).map(|p| p.0.clone()).collect();
    let mut report = ctx.report("verify-traces");
    trace_header(&mut report);
    report.push(verify_twisted_trace_axioms(&group, &pi, &table, &pairs)?);
    report.push(verify_conjugation_axiom(&group, &table, &singles));
    report.push(verify_independence(&table, n, order)?);
    let crossed: Vec<_> = (0..count.min(10))
        .map(|_| (random_crossed(&mut rng, &group, 2, 2, 2), random_crossed(&mut rng, &group, 2, 2, 2)))
        .collect();
    report.push(verify_crossed_structure(&group, &pi, &crossed)?);

    let window = ctx.degree_cap.or(ctx.scenario.caps.degree).unwrap_or(2);
    let dim = trace_space_dimension(&group, &pi, window, ctx.hbar_order(2))?;
    let mut check = Check::new("trace-space-dimension", "dimension of the space of traces, stable under window growth");
    check.record(dim.dimension == Some(dim.polynomial_prediction), || {
        vec![
            ("window", dim.window.to_string()),
            ("enlarged_window", dim.enlarged_window.to_string()),
            ("polynomial_prediction", dim.polynomial_prediction.to_string()),
        ]
    });
    check.set("compact_support_prediction", dim.compact_support_prediction);
    report.push(check);
    report.set_data("trace_space", dim);
    Ok(report)
}

pub fn koszul_cohomology(ctx: &Context, element: Option<usize>) -> Result<Report> {
    let group = ctx.scenario.matrix_group()?;
    let cap = ctx.degree_cap.or(ctx.scenario.caps.total_degree).unwrap_or(6);
    let mut report = ctx.report("koszul-cohomology");
    report.set_header("kappa", "sum_i (x_i o g^{-1} - x_i) d_i in coordinates adapted to V^g + im(1 - g)");
    report.set_header("total_degree_cap", cap);
    match element {
        Some(e) => {
            if e >= group.len() {
                bail!("element {e} is out of range for a group of order {}", group.len());
            }
            let (check, entries) = verify_koszul(group.element(e), cap);
            report.push(check);
            report.set_data("element", e);
            report.set_data("entries", entries);
        }
        None => {
            let (check, classes) = verify_group_koszul(&group, cap)?;
            report.push(check);
            let mut plain = Vec::new();
            for c in &classes {
                let (mut check, entries) = verify_koszul(group.element(c.representative), cap);
                check.name = format!("koszul-cohomology-class-{}", c.representative);
                report.push(check);
                plain.push(json!({ "representative": c.representative, "entries": entries }));
            }
            report.set_data("invariant", classes);
            report.set_data("per_class", plain);
        }
    }
    Ok(report)
}

pub fn hochschild(ctx: &Context, algebra: Option<&str>, k_max: Option<usize>, action: Option<&str>) -> Result<Report> {
    let a = ctx.algebra(algebra, "matrix 2")?;
    let k_max = ctx.k_max(k_max, 3);
    let mut rng = ctx.rng();
    let mut report = ctx.report("hochschild");
    report.set_header("boundary", "b = sum_i (-1)^i d_i, last face uses alpha(a_k) a_0");
    report.set_data("algebra", a.labels());
    report.set_data("automorphism_order", a.automorphism_order());
    report.set_data("hh", hh_dimensions(&a, k_max));
    report.set_data("hc", hc_dimensions(&a, k_max));
    let trials = ctx.samples(5);
    report.push(verify_cyclic_identities(&mut rng, &a, k_max.min(3), trials));
    report.push(verify_multiplication_is_b(&mut rng, &a, k_max.min(3), trials)?);
    let action = match action {
        Some(s) => Some(parse_action_shorthand(s)?),
        None if ctx.scenario.action.is_some() => Some(ctx.scenario.permutation_action()?),
        None => None,
    };
    if let Some(action) = action {
        let cmp = invariant_cohomology_compare(&action, k_max.min(2), 1)?;
        let mut check = Check::new("invariant-cohomology", "HH^k(C[S] x| G) = HH^k(C[S], C[S] x| G)^G");
        check.record(cmp.crossed == cmp.invariant, || {
            vec![("crossed", format!("{:?}", cmp.crossed)), ("invariant", format!("{:?}", cmp.invariant))]
        });
        report.push(check);
        report.set_data("invariant_comparison", cmp);
    }
    Ok(report)
}

pub fn groupoid_hh(ctx: &Context, tables: Option<&PathBuf>, action: Option<&str>, k_max: Option<usize>) -> Result<Report> {
    let g: FiniteGroupoid = match (tables, action) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            let t: GroupoidTables = serde_json::from_str(&text).with_context(|| format!("invalid groupoid file {}", path.display()))?;
            FiniteGroupoid::from_tables(t)?
        }
        (None, Some(s)) => transformation_groupoid(&parse_action_shorthand(s)?)?,
        (None, None) => {
            let a: PermutationAction = ctx.scenario.permutation_action().context("groupoid-hh needs --tables, --action or an [action] section")?;
            transformation_groupoid(&a)?
        }
    };
    let (checks, summary) = verify_sector_decomposition(&g, ctx.k_max(k_max, 1));
    let mut report = ctx.report("groupoid-hh");
    report.set_header("sectors", "conjugation orbits of loops");
    report.extend(checks);
    report.set_data("groupoid", summary);
    Ok(report)
}

pub fn poisson_check(ctx: &Context, dim: usize, k: usize) -> Result<Report> {
    if dim == 0 || dim % 2 == 1 {
        bail!("--dim must be a positive even number, got {dim}");
    }
    if k == 0 || k > dim {
        bail!("--k must lie in 1..={dim}, got {k}");
    }
    let pi = ConstantBivector::standard(dim / 2, 1);
    let degree = ctx.degree_cap(3);
    let samples = ctx.samples(20);
    let mut rng = ctx.rng();
    let mut report = ctx.report("poisson-check");
    report.set_header("delta", "i_Pi d - d i_Pi");
    report.set_header("dimension", dim);
    report.push(verify_delta_identities(&mut rng, &pi, samples, degree));
    report.push(verify_hkr_maps(&mut rng, dim, 1, samples, degree.min(2)));
    report.push(verify_b_d_pi_anticommute(&mut rng, &pi, samples.min(10), 3, 2)?);
    let (check, fit) = verify_brylinski_compat(&mut rng, &pi, k, samples, degree)?;
    report.push(check);
    report.set_data("compatibility", fit);
    Ok(report)
}

pub fn operation_identity(ctx: &Context, algebra: Option<&str>, max_arity: usize) -> Result<Report> {
    if max_arity == 0 {
        bail!("--max-arity must be positive");
    }
    let a = ctx.algebra(algebra, "matrix 2")?;
    let mut rng = ctx.rng();
    let trials = ctx.samples(4);
    let mut report = ctx.report("operation-identity");
    report.set_header("bracket", "[phi, psi] = phi o psi - (-1)^{(k-1)(l-1)} psi o phi");
    report.set_header("circle", "sum_i (-1)^{i(l-1)} phi(.., psi(a_{i+1} .. a_{i+l}), ..)");
    report.push(verify_operation_identity(&mut rng, &a, max_arity, 2, trials)?);
    report.push(verify_multiplication_is_b(&mut rng, &a, 3, trials)?);
    Ok(report)
}

pub fn star_check(ctx: &Context, dim: Option<usize>) -> Result<Report> {
    let group = ctx.scenario.group.as_ref().map(|_| ctx.scenario.matrix_group()).transpose()?;
    let n = dim.or(group.as_ref().map(MatrixGroup::dimension)).unwrap_or(2);
    let order = group.as_ref().map_or(4, MatrixGroup::field_order);
    let pi = ctx.scenario.bivector(n, order)?;
    let degree = ctx.degree_cap(4);
    let count = ctx.samples(20);
    let mut rng = ctx.rng();
    let mut report = ctx.report("star-check");
    report.set_header("moyal_constant", "i hbar / 2");
    let triples: Vec<_> = (0..count)
        .map(|_| {
            (
                random_polynomial(&mut rng, n, order, degree, 3),
                random_polynomial(&mut rng, n, order, degree, 3),
                random_polynomial(&mut rng, n, order, degree, 3),
            )
        })
        .collect();
    report.push(verify_associativity(&triples, &pi)?);
    let pairs: Vec<_> = triples.iter().map(|(f, g, _)| (f.clone(), g.clone())).collect();
    report.push(verify_low_orders(&pairs, &pi)?);
    report.push(verify_canonical_commutators(&pi)?);
    let k = ctx.hbar_order(5);
    let units: Vec<Polynomial> = (0..count)
        .map(|_| &Polynomial::one(n, order) + &random_polynomial(&mut rng, n, order, 2, 3).shift_hbar(1))
        .collect();
    report.push(verify_inv_sqrt(&units, &pi, k)?);
    if let Some(group) = &group {
        let samples: Vec<_> = (0..count.min(10))
            .map(|_| {
                (
                    random_crossed(&mut rng, group, 2, 2, 2),
                    random_crossed(&mut rng, group, 2, 2, 2),
                    random_crossed(&mut rng, group, 2, 2, 2),
                )
            })
            .collect();
        report.push(verify_crossed_associativity(group, Some(&pi), &samples)?);
    }
    Ok(report)
}
