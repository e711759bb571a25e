//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
//! Every comparison is exact.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use starlab_core::fgroupoid::{
    cyclic_action, group_groupoid, symmetric_group_action, transformation_groupoid, verify_reduction_commutes,
    verify_sector_decomposition, convolution_algebra, FiniteGroupoid,
};
use starlab_core::homology::{
    hc_dimensions, invariant_cohomology_compare, verify_cyclic_identities, verify_multiplication_is_b, verify_operation_identity,
    FiniteDimAlgebra, PermutationAction,
};
use starlab_core::koszul::{verify_group_koszul, verify_koszul};
use starlab_core::linalg::Matrix;
use starlab_core::poisson::{verify_brylinski_compat, verify_delta_identities};
use starlab_core::polyalg::Polynomial;
use starlab_core::report::Check;
use starlab_core::star::{
    random_polynomial, verify_associativity, verify_canonical_commutators, verify_inv_sqrt, verify_low_orders, ConstantBivector,
};
use starlab_core::symgroup::{generate_group, MatrixGroup};
use starlab_core::traces::{trace_space_dimension, verify_twisted_trace_axioms, TraceTable};

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn require(check: &Check) -> Result<usize, String> {
    if check.passed() {
        Ok(check.samples)
    } else {
        Err(format!("{} failed: {:?}", check.name, check.witness))
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn minus_one_plane() -> MatrixGroup {
    generate_group(4, 2, &[Matrix::from_ints(4, &[&[-1, 0], &[0, -1]])], 8).unwrap()
}

fn quarter_turn() -> MatrixGroup {
    generate_group(4, 2, &[Matrix::from_ints(4, &[&[0, 1], &[-1, 0]])], 8).unwrap()
}

fn minus_one_c2() -> MatrixGroup {
    let m = Matrix::from_ints(4, &[&[-1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]]);
    generate_group(4, 4, &[m], 8).unwrap()
}

fn trivial_plane() -> MatrixGroup {
    generate_group(4, 2, &[], 1).unwrap()
}

fn moyal_associativity() -> Outcome {
    let mut total = 0;
    for (n, seed) in [(1, 11), (2, 12)] {
        let pi = ConstantBivector::standard(n, 4);
        let mut r = rng(seed);
        let triples: Vec<_> = (0..50)
            .map(|_| {
                (
                    random_polynomial(&mut r, 2 * n, 4, 5, 3),
                    random_polynomial(&mut r, 2 * n, 4, 5, 3),
                    random_polynomial(&mut r, 2 * n, 4, 5, 3),
                )
            })
            .collect();
        total += require(&verify_associativity(&triples, &pi).map_err(|e| e.to_string())?)?;
    }
    Ok(format!("{total} triples, n = 1, 2, degree <= 5"))
}

fn moyal_low_orders() -> Outcome {
    let pi = ConstantBivector::standard(1, 4);
    let mut r = rng(21);
    let pairs: Vec<_> = (0..50).map(|_| (random_polynomial(&mut r, 2, 4, 4, 3), random_polynomial(&mut r, 2, 4, 4, 3))).collect();
    let n = require(&verify_low_orders(&pairs, &pi).map_err(|e| e.to_string())?)?;
    require(&verify_canonical_commutators(&pi).map_err(|e| e.to_string())?)?;
    Ok(format!("[x, p] = i hbar, order-0 and order-1 terms on {n} pairs"))
}

fn twisted_trace_axiom() -> Outcome {
    let mut total = 0;
    for (label, group, seed) in [("-1 on C", minus_one_plane(), 31), ("i on C", quarter_turn(), 32), ("-I on C^2", minus_one_c2(), 33)] {
        let n = group.dimension();
        let pi = ConstantBivector::standard(n / 2, 4);
        let table = TraceTable::new(&group, &pi).map_err(|e| format!("{label}: {e}"))?;
        let mut r = rng(seed);
        let pairs: Vec<(Polynomial, Polynomial)> =
            (0..100).map(|_| (random_polynomial(&mut r, n, 4, 5, 3), random_polynomial(&mut r, n, 4, 5, 3))).collect();
        let check = verify_twisted_trace_axioms(&group, &pi, &table, &pairs).map_err(|e| format!("{label}: {e}"))?;
        total += require(&check).map_err(|e| format!("{label}: {e}"))?;
    }
    Ok(format!("{total} instances over three groups"))
}

fn trace_dimensions() -> Outcome {
    let pi = ConstantBivector::standard(1, 4);
    let mut seen = Vec::new();
    for (label, group, dim, compact) in [("Z/2", minus_one_plane(), 1, 2), ("Z/4", quarter_turn(), 3, 4), ("trivial", trivial_plane(), 0, 1)] {
        let t = trace_space_dimension(&group, &pi, 2, 2).map_err(|e| format!("{label}: {e}"))?;
        ensure(t.dimension == Some(dim), || format!("{label}: dimension {:?}, expected {dim}", t.dimension))?;
        ensure(t.polynomial_prediction == dim, || format!("{label}: prediction {}", t.polynomial_prediction))?;
        ensure(t.compact_support_prediction == compact, || format!("{label}: compact prediction {}", t.compact_support_prediction))?;
        let wider = trace_space_dimension(&group, &pi, 3, 2).map_err(|e| format!("{label}: {e}"))?;
        ensure(wider.dimension == Some(dim), || format!("{label}: unstable, {:?} at degree cap 3", wider.dimension))?;
        seen.push(format!("{label}={dim}"));
    }
    Ok(format!("{} (compact 2/4/1)", seen.join(" ")))
}

fn operation_identity() -> Outcome {
    let mut total = 0;
    for (label, a, seed) in [("M_2", FiniteDimAlgebra::matrix(2, 1), 51), ("Q[x]/(x^3)", FiniteDimAlgebra::truncated_polynomial(1, 2, 1), 52)] {
        let check = verify_operation_identity(&mut rng(seed), &a, 3, 2, 6).map_err(|e| e.to_string())?;
        total += require(&check).map_err(|e| format!("{label}: {e}"))?;
    }
    ensure(total >= 100, || format!("only {total} instances"))?;
    Ok(format!("{total} instances, arities (k, l) in {{1, 2, 3}}^2"))
}

fn multiplication_is_b() -> Outcome {
    let mut total = 0;
    for (label, a, seed) in [
        ("M_2", FiniteDimAlgebra::matrix(2, 1), 61),
        ("Q[x]/(x^3)", FiniteDimAlgebra::truncated_polynomial(1, 2, 1), 62),
        ("C[Z/2]", FiniteDimAlgebra::cyclic_group_algebra(2, 1), 63),
    ] {
        let check = verify_multiplication_is_b(&mut rng(seed), &a, 3, 10).map_err(|e| e.to_string())?;
        total += require(&check).map_err(|e| format!("{label}: {e}"))?;
    }
    Ok(format!("{total} chains"))
}

fn brylinski() -> Outcome {
    let mut total = 0;
    for (n, k, seed) in [(1, 1, 71), (2, 2, 72)] {
        let pi = ConstantBivector::standard(n, 1);
        total += require(&verify_delta_identities(&mut rng(seed), &pi, 100, 3))?;
        let (check, fit) = verify_brylinski_compat(&mut rng(seed + 10), &pi, k, 40, 3).map_err(|e| e.to_string())?;
        require(&check)?;
        ensure(fit.consistent && fit.fitted.as_deref() == Some(fit.expected.as_str()), || {
            format!("k = {k}: fitted {:?}, expected {}", fit.fitted, fit.expected)
        })?;
        ensure(fit.expected == "2", || format!("k = {k}: expected constant {}", fit.expected))?;
    }
    Ok(format!("delta^2 = 0, d delta + delta d = 0 on {total} forms, c = 2 for k = 1, 2"))
}

fn koszul() -> Outcome {
    let minus = Matrix::from_ints(2, &[&[-1, 0], &[0, -1]]);
    let reflection = Matrix::from_ints(2, &[&[1, 0], &[0, -1]]);
    let mut entries = 0;
    for (label, m) in [("-I", &minus), ("diag(1,-1)", &reflection)] {
        let (check, e) = verify_koszul(m, 8);
        require(&check).map_err(|err| format!("{label}: {err}"))?;
        entries += e.len();
        let group = generate_group(2, 2, &[m.clone()], 4).map_err(|e| e.to_string())?;
        let (check, _) = verify_group_koszul(&group, 8).map_err(|e| e.to_string())?;
        require(&check).map_err(|err| format!("{label} invariants: {err}"))?;
    }
    Ok(format!("{entries} bidegrees up to total degree 8"))
}

fn groupoids() -> Outcome {
    let z2 = vec![vec![0, 1], vec![1, 0]];
    let cases: [(&str, FiniteGroupoid, usize); 3] = [
        ("Z/2 on a point", group_groupoid(&z2, 0).map_err(|e| e.to_string())?, 2),
        ("Z/2 swapping two points", transformation_groupoid(&cyclic_action(2, &[1, 0])).map_err(|e| e.to_string())?, 1),
        ("S_3 on three points", transformation_groupoid(&symmetric_group_action(3)).map_err(|e| e.to_string())?, 2),
    ];
    let mut dims = Vec::new();
    for (label, g, expect) in cases {
        let (checks, report) = verify_sector_decomposition(&g, 1);
        for c in &checks {
            require(c).map_err(|e| format!("{label}: {e}"))?;
        }
        ensure(report.hh_convolution[0] == expect, || format!("{label}: HH_0 = {}", report.hh_convolution[0]))?;
        ensure(report.hh_loops[0] == expect, || format!("{label}: loop HH_0 = {}", report.hh_loops[0]))?;
        require(&verify_reduction_commutes(&g, &convolution_algebra(&g), 2)).map_err(|e| format!("{label}: {e}"))?;
        dims.push(expect.to_string());
    }
    Ok(format!("HH_0 = {}, reduction commutes for k <= 2", dims.join("/")))
}

fn cyclic_identities() -> Outcome {
    let group_alg = FiniteDimAlgebra::cyclic_group_algebra(2, 1);
    let twisted_group_alg = group_alg.clone().with_automorphism(Matrix::from_ints(1, &[&[1, 0], &[0, -1]])).map_err(|e| e.to_string())?;
    let m2 = FiniteDimAlgebra::matrix(2, 1);
    let swap = Matrix::from_ints(1, &[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0]]);
    let twisted_m2 = m2.clone().with_automorphism(swap).map_err(|e| e.to_string())?;
    let mut total = 0;
    for (label, a, order, seed) in [
        ("C[Z/2]", &group_alg, 1, 81),
        ("C[Z/2], g -> -g", &twisted_group_alg, 2, 82),
        ("M_2", &m2, 1, 83),
        ("M_2, swap conjugation", &twisted_m2, 2, 84),
    ] {
        ensure(a.automorphism_order() == order, || format!("{label}: automorphism order {}", a.automorphism_order()))?;
        total += require(&verify_cyclic_identities(&mut rng(seed), a, 3, 4)).map_err(|e| format!("{label}: {e}"))?;
    }
    let hc = hc_dimensions(&FiniteDimAlgebra::ground_field(1), 4);
    ensure(hc == vec![1, 0, 1, 0, 1], || format!("HC(C) = {hc:?}"))?;
    Ok(format!("{total} identities, HC(C) = (1, 0, 1, 0, 1)"))
}

fn invariant_cohomology() -> Outcome {
    let z2 = vec![vec![0, 1], vec![1, 0]];
    let cases = [
        ("Z/2 on a point", PermutationAction { npoints: 1, group_table: z2.clone(), identity: 0, action: vec![vec![0], vec![0]] }),
        ("Z/2 swapping two points", PermutationAction { npoints: 2, group_table: z2.clone(), identity: 0, action: z2.clone() }),
        ("Z/2 fixing two points", PermutationAction { npoints: 2, group_table: z2, identity: 0, action: vec![vec![0, 1], vec![0, 1]] }),
        ("S_3 on three points", symmetric_group_action(3)),
    ];
    let mut out = Vec::new();
    for (label, action) in cases {
        let cmp = invariant_cohomology_compare(&action, 2, 1).map_err(|e| format!("{label}: {e}"))?;
        ensure(cmp.crossed == cmp.invariant, || format!("{label}: {:?} vs {:?}", cmp.crossed, cmp.invariant))?;
        out.push(format!("{:?}", cmp.crossed));
    }
    Ok(format!("crossed = invariant: {}", out.join(" ")))
}

fn inverse_square_root() -> Outcome {
    let pi = ConstantBivector::standard(1, 4);
    let mut r = rng(91);
    let samples: Vec<Polynomial> =
        (0..20).map(|_| &Polynomial::one(2, 4) + &random_polynomial(&mut r, 2, 4, 2, 3).shift_hbar(1)).collect();
    let n = require(&verify_inv_sqrt(&samples, &pi, 5).map_err(|e| e.to_string())?)?;
    Ok(format!("{n} samples, hbar order 5"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("moyal-associativity", moyal_associativity),
        ("moyal-low-orders", moyal_low_orders),
        ("twisted-trace-axiom", twisted_trace_axiom),
        ("trace-space-dimensions", trace_dimensions),
        ("operation-identity", operation_identity),
        ("multiplication-is-b", multiplication_is_b),
        ("brylinski", brylinski),
        ("koszul-cohomology", koszul),
        ("groupoid-sectors", groupoids),
        ("cyclic-identities", cyclic_identities),
        ("invariant-cohomology", invariant_cohomology),
        ("star-inverse-square-root", inverse_square_root),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
