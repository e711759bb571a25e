//! Brute-force Hochschild and cyclic homology of finite-dimensional
//! algebras: the `(b, B)`-bicomplex with twisted cyclic operators, the
//! action of cochains on chains with the Gerstenhaber bracket, the matrix
//! stability maps, and invariant Hochschild cohomology of crossed products.

mod algebra;
mod chains;
mod cochains;

pub use algebra::FiniteDimAlgebra;
pub use chains::{
    apply, b_terms, connes_b, connes_terms, cyclic_t, face, hc_dimensions, hh_dimensions, hochschild_b, norm_terms,
    s_terms, t_terms, verify_cyclic_identities, Chain, Terms,
};
pub use cochains::{
    basis_cochain, circle, coboundary_with_values, cochain_action, cochain_vector, d_phi_terms, gerstenhaber_bracket,
    hochschild_coboundary, operation_defect, verify_multiplication_is_b, verify_operation_identity, Cochain,
};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{sparse_from_terms, Eliminator, SparseVec};
use crate::report::Check;
use crate::scalar::{rational, CyclotomicScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("structure constants are not associative at basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("the unit vector is not a two-sided unit")]
    NotUnital,
    #[error("map is not an algebra automorphism of finite order")]
    NotAutomorphism,
    #[error("cochain of arity {arity} cannot act on chains of degree {degree}")]
    ArityUnderflow { arity: usize, degree: usize },
    #[error("invalid action: {0}")]
    Action(String),
}

/// `sigma(a_0 .. a_k) = a_0 E_00 (x) .. (x) a_k E_00`, into `M_n(A)`.
pub fn matrix_inclusion(a: &FiniteDimAlgebra, big: &FiniteDimAlgebra, c: &Chain) -> Chain {
    // E_00 (x) e_m has index m, so basis tensors keep their indices.
    apply(big, c, c.degree(), |j| vec![(j.to_vec(), CyclotomicScalar::one(a.order()))])
}

/// `tr(m_0 .. m_k) = sum m_0[i0,i1] (x) m_1[i1,i2] (x) .. (x) m_k[ik,i0]`.
pub fn generalized_trace(a: &FiniteDimAlgebra, n: usize, c: &Chain) -> Chain {
    let d = a.dim();
    apply(a, c, c.degree(), |j| {
        let parts: Vec<(usize, usize, usize)> = j.iter().map(|&x| (x / d / n, (x / d) % n, x % d)).collect();
        let k = parts.len();
        let closed = (0..k).all(|t| parts[t].1 == parts[(t + 1) % k].0);
        if closed {
            vec![(parts.iter().map(|p| p.2).collect(), CyclotomicScalar::one(a.order()))]
        } else {
            Vec::new()
        }
    })
}

/// `tr o sigma = id`, `b sigma = sigma b`, `b tr = tr b` on random chains.
pub fn verify_matrix_stability<R: Rng + ?Sized>(rng: &mut R, a: &FiniteDimAlgebra, n: usize, k_max: usize, trials: usize) -> Check {
    let big = FiniteDimAlgebra::matrices_over(a, n);
    let mut check = Check::new("matrix-stability", "tr sigma = id and both maps commute with b").with("n", n);
    for k in 0..=k_max {
        for _ in 0..trials {
            let c = Chain::random(rng, a, k, 5);
            let s = matrix_inclusion(a, &big, &c);
            check.record(generalized_trace(a, n, &s) == c, || vec![("identity", "tr sigma = id".to_string()), ("degree", k.to_string())]);
            check.record(hochschild_b(&big, &s) == matrix_inclusion(a, &big, &hochschild_b(a, &c)), || {
                vec![("identity", "b sigma = sigma b".to_string()), ("degree", k.to_string())]
            });
            let m = Chain::random(rng, &big, k, 5);
            check.record(hochschild_b(a, &generalized_trace(a, n, &m)) == generalized_trace(a, n, &hochschild_b(&big, &m)), || {
                vec![("identity", "b tr = tr b".to_string()), ("degree", k.to_string())]
            });
        }
    }
    check
}

/// A finite group acting on a finite set by permutations.
#[derive(Clone, Debug)]
pub struct PermutationAction {
    pub npoints: usize,
    pub group_table: Vec<Vec<usize>>,
    pub identity: usize,
    /// `action[g][s] = g s`.
    pub action: Vec<Vec<usize>>,
}

impl PermutationAction {
    pub fn validate(&self) -> Result<(), HomologyError> {
        let g = self.group_table.len();
        if g == 0 || self.identity >= g || self.action.len() != g {
            return Err(HomologyError::Action("table sizes disagree".into()));
        }
        for (x, row) in self.action.iter().enumerate() {
            let mut sorted = row.clone();
            sorted.sort_unstable();
            if sorted != (0..self.npoints).collect::<Vec<_>>() {
                return Err(HomologyError::Action(format!("element {x} does not permute the points")));
            }
        }
        for x in 0..g {
            for y in 0..g {
                let xy = self.group_table[x][y];
                if xy >= g || (0..self.npoints).any(|s| self.action[xy][s] != self.action[x][self.action[y][s]]) {
                    return Err(HomologyError::Action(format!("action of {x}*{y} is not compatible")));
                }
            }
        }
        Ok(())
    }

    fn inverse(&self, g: usize) -> usize {
        (0..self.group_table.len()).find(|&h| self.group_table[g][h] == self.identity).expect("group")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantComparison {
    /// `dim HH^k(C[S] x| G, C[S] x| G)`.
    pub crossed: Vec<usize>,
    /// `dim HH^k(C[S], C[S] x| G)^G`.
    pub invariant: Vec<usize>,
}

fn cohomology_dims(
    order: u32,
    dim_in: usize,
    dim_out: usize,
    k_max: usize,
    project: &(dyn Fn(&Cochain) -> Cochain + Sync),
    delta: &(dyn Fn(&Cochain) -> Cochain + Sync),
) -> Vec<usize> {
    let mut rank_p = Vec::new();
    let mut rank_dp = Vec::new();
    for k in 0..=k_max {
        let size = dim_in.pow(k as u32) * dim_out;
        let pairs: Vec<(SparseVec, SparseVec)> = (0..size)
            .into_par_iter()
            .map(|i| {
                let p = project(&basis_cochain(order, k, dim_in, dim_out, i));
                let dp = delta(&p);
                (cochain_vector(&p), cochain_vector(&dp))
            })
            .collect();
        let mut ep = Eliminator::new(order);
        let mut edp = Eliminator::new(order);
        for (p, dp) in pairs {
            ep.insert(p);
            edp.insert(dp);
        }
        rank_p.push(ep.rank());
        rank_dp.push(edp.rank());
    }
    (0..=k_max)
        .map(|k| rank_p[k] - rank_dp[k] - if k > 0 { rank_dp[k - 1] } else { 0 })
        .collect()
}

/// Compares `HH^k(C[S] x| G)` with the `G`-invariant part of
/// `HH^k(C[S], C[S] x| G)` for `k <= k_max`, where `g` acts on cochains by
/// `(g f)(a_1..) = d_g f(d_g^{-1} a_1 d_g, ..) d_g^{-1}`.
pub fn invariant_cohomology_compare(action: &PermutationAction, k_max: usize, order: u32) -> Result<InvariantComparison, HomologyError> {
    action.validate()?;
    let ng = action.group_table.len();
    let np = action.npoints;
    let b = FiniteDimAlgebra::crossed_product_functions(np, &action.group_table, action.identity, &action.action, order);
    let a = diagonal_functions(np, order);
    let embed: Vec<usize> = (0..np).map(|s| s * ng + action.identity).collect();
    let identity_b: Vec<usize> = (0..b.dim()).collect();

    let crossed = cohomology_dims(order, b.dim(), b.dim(), k_max, &|c: &Cochain| c.clone(), &|c: &Cochain| {
        coboundary_with_values(&b, &b, &identity_b, c)
    });

    let delta_elem = |g: usize| -> SparseVec {
        sparse_from_terms((0..np).map(|s| (s * ng + g, CyclotomicScalar::one(order))))
    };
    let back: std::collections::HashMap<usize, usize> = embed.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    // Conjugation e_i -> d_g^{-1} e_i d_g, as a map on the basis of A.
    let conj: Vec<Vec<SparseVec>> = (0..ng)
        .map(|g| {
            let gi = action.inverse(g);
            (0..np)
                .map(|i| {
                    let v = b.mul_sparse(&b.mul_sparse(&delta_elem(gi), &vec![(embed[i], CyclotomicScalar::one(order))]), &delta_elem(g));
                    v.into_iter().map(|(x, c)| (back[&x], c)).collect()
                })
                .collect()
        })
        .collect();
    let scale = CyclotomicScalar::from_rational(order, rational(1, ng as i64));
    let project = |f: &Cochain| -> Cochain {
        let k = f.arity();
        let mut acc = Cochain::zero(order, k, np, b.dim());
        for g in 0..ng {
            let gi = action.inverse(g);
            let moved = Cochain::from_fn(order, k, np, b.dim(), |t| {
                let args: Vec<SparseVec> = t.iter().map(|&x| conj[g][x].clone()).collect();
                let inner = f.evaluate(&args);
                b.mul_sparse(&b.mul_sparse(&delta_elem(g), &inner), &delta_elem(gi))
            });
            acc = acc.add(&moved);
        }
        acc.scale(&scale)
    };
    let invariant = cohomology_dims(order, np, b.dim(), k_max, &project, &|c: &Cochain| coboundary_with_values(&a, &b, &embed, c));
    Ok(InvariantComparison { crossed, invariant })
}

/// Functions on `n` points with pointwise product.
fn diagonal_functions(n: usize, order: u32) -> FiniteDimAlgebra {
    let labels = (0..n).map(|s| format!("e{s}")).collect();
    let constants = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|k| CyclotomicScalar::from_int(order, (i == j && j == k) as i64))
                        .collect()
                })
                .collect()
        })
        .collect();
    let unit = vec![CyclotomicScalar::one(order); n];
    FiniteDimAlgebra::from_structure(order, labels, constants, unit).expect("commutative semisimple")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn b_on_degree_one() {
        let a = FiniteDimAlgebra::matrix(2, 1);
        let c = Chain::basis(&a, &[1, 2]);
        let got = hochschild_b(&a, &c);
        let expected = Chain::basis(&a, &[0]).sub(&Chain::basis(&a, &[3]));
        assert_eq!(got, expected);
    }

    #[test]
    fn hochschild_dimensions() {
        let z2 = FiniteDimAlgebra::cyclic_group_algebra(2, 1);
        assert_eq!(hh_dimensions(&z2, 2), vec![2, 0, 0]);
        let m2 = FiniteDimAlgebra::matrix(2, 1);
        assert_eq!(hh_dimensions(&m2, 3), vec![1, 0, 0, 0]);
        let field = FiniteDimAlgebra::ground_field(1);
        assert_eq!(hc_dimensions(&field, 4), vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn cyclic_identities_untwisted_and_twisted() {
        let mut r = rng();
        let m2 = FiniteDimAlgebra::matrix(2, 1);
        assert!(verify_cyclic_identities(&mut r, &m2, 3, 3).passed());
        let twisted = FiniteDimAlgebra::cyclic_group_algebra(2, 1)
            .with_automorphism(Matrix::from_ints(1, &[&[1, 0], &[0, -1]]))
            .unwrap();
        let check = verify_cyclic_identities(&mut r, &twisted, 3, 3);
        assert!(check.passed(), "{check:?}");
    }

    #[test]
    fn multiplication_acts_as_b() {
        let mut r = rng();
        let m2 = FiniteDimAlgebra::matrix(2, 1);
        assert!(verify_multiplication_is_b(&mut r, &m2, 3, 3).unwrap().passed());
    }

    #[test]
    fn derivation_action_in_degree_one() {
        let a = FiniteDimAlgebra::matrix(2, 1);
        let mut r = rng();
        let d = Cochain::random(&mut r, &a, 1, 6);
        let c = Chain::basis(&a, &[1, 2]);
        let got = cochain_action(&a, &d, &c).unwrap();
        let mut expected = Chain::zero(&a, 1);
        for (m, x) in d.evaluate_basis(&[1]) {
            expected = expected.add(&Chain::basis(&a, &[m, 2]).scale(&x));
        }
        for (m, x) in d.evaluate_basis(&[2]) {
            expected = expected.add(&Chain::basis(&a, &[1, m]).scale(&x));
        }
        assert_eq!(got, expected);
        assert!(cochain_action(&a, &Cochain::endo_zero(&a, 2), &c).unwrap().is_zero());
        assert!(cochain_action(&a, &Cochain::endo_zero(&a, 3), &c).is_err());
    }

    #[test]
    fn bracket_of_product() {
        let m2 = FiniteDimAlgebra::matrix(2, 1);
        let m = Cochain::multiplication(&m2);
        assert!(gerstenhaber_bracket(&m, &m).is_zero());
        let mut r = rng();
        let eta = Cochain::random(&mut r, &m2, 1, 5);
        let bracket = gerstenhaber_bracket(&m, &eta);
        let delta = hochschild_coboundary(&m2, &eta);
        assert!(bracket == delta || bracket == delta.scale(&CyclotomicScalar::from_int(1, -1)));
    }

    #[test]
    fn operation_identity_small() {
        let mut r = rng();
        let m2 = FiniteDimAlgebra::matrix(2, 1);
        let check = verify_operation_identity(&mut r, &m2, 3, 3, 2).unwrap();
        assert!(check.passed(), "{check:?}");
    }

    #[test]
    fn morita_maps() {
        let mut r = rng();
        let field = FiniteDimAlgebra::ground_field(1);
        assert!(verify_matrix_stability(&mut r, &field, 2, 2, 3).passed());
        assert!(verify_matrix_stability(&mut r, &field, 1, 2, 2).passed());
        let z2 = FiniteDimAlgebra::cyclic_group_algebra(2, 1);
        assert!(verify_matrix_stability(&mut r, &z2, 2, 1, 2).passed());
    }

    #[test]
    fn invariant_cohomology() {
        let swap = PermutationAction {
            npoints: 2,
            group_table: vec![vec![0, 1], vec![1, 0]],
            identity: 0,
            action: vec![vec![0, 1], vec![1, 0]],
        };
        let cmp = invariant_cohomology_compare(&swap, 2, 1).unwrap();
        assert_eq!(cmp.crossed, cmp.invariant);
        let point = PermutationAction {
            npoints: 1,
            group_table: vec![vec![0, 1], vec![1, 0]],
            identity: 0,
            action: vec![vec![0], vec![0]],
        };
        let cmp = invariant_cohomology_compare(&point, 2, 1).unwrap();
        assert_eq!(cmp.crossed, vec![2, 0, 0]);
        assert_eq!(cmp.crossed, cmp.invariant);
    }
}
