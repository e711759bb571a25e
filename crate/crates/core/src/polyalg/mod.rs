//! Sparse multivariate polynomials, linear substitutions, and polynomial
//! differential forms and multivector fields.

mod exterior;
mod parse;
mod poly;

pub use exterior::{merge_indices, DiffForm, Exterior, ExteriorKind, Forms, MultiVector, Vectors};
pub use parse::{parse_polynomial, parse_scalar};
pub use poly::{
    exponents_of_degree, exponents_up_to, random_poly, CPoly, Exponent, Poly, Polynomial,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable counts differ: {0} vs {1}")]
    VariableCount(usize, usize),
    #[error("coefficient fields differ: Q(zeta_{0}) vs Q(zeta_{1})")]
    FieldOrder(u32, u32),
    #[error("substitution matrix is singular")]
    Singular,
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::scalar::CyclotomicScalar;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn form(seed: u64, nvars: usize, degree: usize) -> DiffForm {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w = DiffForm::zero(nvars, 4, degree);
        let idx: Vec<Vec<usize>> = subsets(nvars, degree);
        for (k, i) in idx.iter().enumerate() {
            if (seed as usize + k) % 2 == 0 {
                let f: CPoly = random_poly(&mut rng, nvars, 4, 3, 3);
                w = w.add(&DiffForm::basis(nvars, i, f));
            }
        }
        w
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..(1 << n))
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn d_squared_vanishes(seed in 0u64..10_000, k in 0usize..3) {
            let w = form(seed, 3, k);
            prop_assert!(w.de_rham_d().de_rham_d().is_zero());
        }

        #[test]
        fn wedge_associative_and_graded(seed in 0u64..10_000, p in 0usize..3, q in 0usize..3) {
            let a = form(seed, 4, p);
            let b = form(seed + 1, 4, q);
            let c = form(seed + 2, 4, 1);
            prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
            let ba = b.wedge(&a);
            let sign = if (p * q) % 2 == 1 { ba.neg() } else { ba };
            prop_assert_eq!(a.wedge(&b), sign);
        }

        #[test]
        fn substitution_is_ring_homomorphism(seed in 0u64..10_000, e in proptest::collection::vec(-2i64..=2, 4)) {
            let a = Matrix::from_ints(4, &[&[e[0], e[1]], &[e[2], e[3]]]);
            prop_assume!(!a.det().is_zero());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f: CPoly = random_poly(&mut rng, 2, 4, 3, 4);
            let g: CPoly = random_poly(&mut rng, 2, 4, 3, 4);
            let lhs = (&f * &g).linear_substitute(&a).unwrap();
            let rhs = &f.linear_substitute(&a).unwrap() * &g.linear_substitute(&a).unwrap();
            prop_assert_eq!(lhs, rhs);
            let back = f.linear_substitute(&a).unwrap().linear_substitute(&a.inverse().unwrap()).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn contraction_obeys_leibniz(seed in 0u64..10_000) {
            let a = form(seed, 3, 1);
            let b = form(seed + 7, 3, 2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let comps: Vec<CPoly> = (0..3).map(|_| random_poly(&mut rng, 3, 4, 2, 2)).collect();
            let x = MultiVector::vector_field(&comps);
            let lhs = a.wedge(&b).contract(&x);
            let rhs = a.contract(&x).wedge(&b).sub(&a.wedge(&b.contract(&x)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn degree_overflow_is_zero() {
        let one = CPoly::one(2, 4);
        let w = DiffForm::basis(2, &[0, 1], one.clone());
        assert!(w.wedge(&DiffForm::basis(2, &[0], one)).is_zero());
        let _ = CyclotomicScalar::one(4);
    }
}
