use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use starlab_core::crossed::{random_crossed, verify_crossed_associativity, verify_crossed_structure};
use starlab_core::linalg::Matrix;
use starlab_core::polyalg::Polynomial;
use starlab_core::star::{random_polynomial, verify_associativity, ConstantBivector};
use starlab_core::symgroup::{generate_group, symplectic_double, MatrixGroup};
use starlab_core::traces::{verify_conjugation_axiom, verify_independence, verify_twisted_trace_axioms, TraceTable};

const ORDER: u32 = 12;

/// S_3 acting on its reflection representation, doubled to a symplectic action on C^4.
fn s3_doubled() -> MatrixGroup {
    let swap = Matrix::from_ints(ORDER, &[&[0, 1], &[1, 0]]);
    let rotate = Matrix::from_ints(ORDER, &[&[0, -1], &[1, -1]]);
    generate_group(ORDER, 4, &[symplectic_double(&swap), symplectic_double(&rotate)], 12).unwrap()
}

#[test]
fn s3_trace_table() {
    let group = s3_doubled();
    assert_eq!(group.len(), 6);
    let pi = ConstantBivector::standard(2, ORDER);
    let table = TraceTable::new(&group, &pi).unwrap();
    assert_eq!(table.classes.len(), 3);
    // only the 3-cycles act without fixed vectors
    assert_eq!(table.admissible_classes().len(), 1);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let samples: Vec<Polynomial> = (0..6).map(|_| random_polynomial(&mut rng, 4, ORDER, 3, 3)).collect();
    assert!(verify_conjugation_axiom(&group, &table, &samples).passed());
    let pairs: Vec<_> = samples.chunks(2).map(|p| (p[0].clone(), p[1].clone())).collect();
    assert!(verify_twisted_trace_axioms(&group, &pi, &table, &pairs).unwrap().passed());
    assert!(verify_independence(&table, 4, ORDER).unwrap().passed());
}

#[test]
fn s3_crossed_product() {
    let group = s3_doubled();
    let pi = ConstantBivector::standard(2, ORDER);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let triples: Vec<_> = (0..3)
        .map(|_| {
            (
                random_crossed(&mut rng, &group, 2, 2, 2),
                random_crossed(&mut rng, &group, 2, 2, 2),
                random_crossed(&mut rng, &group, 2, 2, 2),
            )
        })
        .collect();
    assert!(verify_crossed_associativity(&group, Some(&pi), &triples).unwrap().passed());
    let pairs: Vec<_> = triples.iter().map(|(a, b, _)| (a.clone(), b.clone())).collect();
    assert!(verify_crossed_structure(&group, &pi, &pairs).unwrap().passed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn moyal_product_is_associative(seed in any::<u64>(), n in 1usize..=2) {
        let pi = ConstantBivector::standard(n, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let triple = (
            random_polynomial(&mut rng, 2 * n, 4, 3, 3),
            random_polynomial(&mut rng, 2 * n, 4, 3, 3),
            random_polynomial(&mut rng, 2 * n, 4, 3, 3),
        );
        prop_assert!(verify_associativity(&[triple], &pi).unwrap().passed());
    }
}
