//! Exact coefficient arithmetic: arbitrary-precision rationals, the
//! cyclotomic fields Q(zeta_N), and truncated Laurent series in hbar over them.

mod coeff;
mod cyclotomic;
mod hbar;

pub use coeff::Coeff;
pub use cyclotomic::{context, cyclotomic_polynomial, CycloContext, CyclotomicScalar};
pub use hbar::HbarScalar;

use num_bigint::BigInt;
use rand::Rng;
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic orders differ: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("{what} is not representable in Q(zeta_{order})")]
    NotRepresentable { what: String, order: u32 },
    #[error("series has no invertible leading coefficient")]
    NotAUnit,
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A random element of Q(zeta_N) with small integer/half-integer power-basis
/// coefficients. Used by the randomized verification suites.
pub fn random_cyclotomic<R: Rng + ?Sized>(rng: &mut R, order: u32, bound: i64) -> CyclotomicScalar {
    let d = context(order).degree();
    let coeffs: Vec<Rational> = (0..d)
        .map(|_| rational(rng.gen_range(-bound..=bound), rng.gen_range(1..=2)))
        .collect();
    CyclotomicScalar::from_coeffs(order, &coeffs)
}

/// A random rational-valued element of Q(zeta_N).
pub fn random_rational_scalar<R: Rng + ?Sized>(
    rng: &mut R,
    order: u32,
    bound: i64,
) -> CyclotomicScalar {
    CyclotomicScalar::from_rational(order, rational(rng.gen_range(-bound..=bound), 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_scalar(order: u32) -> impl Strategy<Value = CyclotomicScalar> {
        let d = context(order).degree();
        proptest::collection::vec((-6i64..=6, 1i64..=4), d).prop_map(move |v| {
            let coeffs: Vec<Rational> = v.into_iter().map(|(n, m)| rational(n, m)).collect();
            CyclotomicScalar::from_coeffs(order, &coeffs)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn field_axioms_q_zeta12(a in arb_scalar(12), b in arb_scalar(12), c in arb_scalar(12)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &CyclotomicScalar::one(12), a.clone());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn field_axioms_q_zeta5(a in arb_scalar(5), b in arb_scalar(5)) {
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(a.checked_div(&b).unwrap().checked_mul(&b).unwrap(), a.clone());
            }
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        }

        #[test]
        fn hbar_inverse_agrees_with_one(v in proptest::collection::vec(arb_scalar(4), 1..5), k in 1usize..7) {
            prop_assume!(!v[0].is_zero());
            let a = HbarScalar::from_parts(4, 0, v, None);
            let inv = a.invert(k).unwrap();
            let prod = &a * &inv;
            let p = prod.precision().unwrap();
            prop_assert_eq!(p, k as i64);
            for e in 0..p {
                let expect = if e == 0 { CyclotomicScalar::one(4) } else { CyclotomicScalar::zero(4) };
                prop_assert_eq!(prod.coeff(e), expect);
            }
        }
    }
}
