use rand::Rng;
use rayon::prelude::*;

use crate::linalg::{sparse_from_terms, Eliminator};
use crate::report::Check;
use crate::scalar::{random_cyclotomic, CyclotomicScalar};

use super::algebra::FiniteDimAlgebra;

/// A linear combination of basis tensors `e_{j0} (x) ... (x) e_{jk}`.
pub type Terms = Vec<(Vec<usize>, CyclotomicScalar)>;

/// A Hochschild chain of degree `k`: a dense tensor in `A^{(x)(k+1)}`,
/// indexed in mixed radix with the first factor most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    degree: usize,
    dim: usize,
    data: Vec<CyclotomicScalar>,
}

pub(crate) fn encode(dim: usize, j: &[usize]) -> usize {
    j.iter().fold(0, |acc, &x| acc * dim + x)
}

pub(crate) fn decode(dim: usize, len: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = idx % dim;
        idx /= dim;
    }
    out
}

impl Chain {
    pub fn zero(a: &FiniteDimAlgebra, degree: usize) -> Self {
        Chain {
            degree,
            dim: a.dim(),
            data: vec![CyclotomicScalar::zero(a.order()); a.dim().pow(degree as u32 + 1)],
        }
    }

    pub fn basis(a: &FiniteDimAlgebra, j: &[usize]) -> Self {
        let mut c = Self::zero(a, j.len() - 1);
        c.data[encode(a.dim(), j)] = CyclotomicScalar::one(a.order());
        c
    }

    pub fn from_terms(a: &FiniteDimAlgebra, degree: usize, terms: Terms) -> Self {
        let mut c = Self::zero(a, degree);
        for (j, x) in terms {
            debug_assert_eq!(j.len(), degree + 1);
            let i = encode(c.dim, &j);
            c.data[i] = &c.data[i] + &x;
        }
        c
    }

    /// Random chain with about `nonzero` nonzero entries.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, a: &FiniteDimAlgebra, degree: usize, nonzero: usize) -> Self {
        let mut c = Self::zero(a, degree);
        let len = c.data.len();
        for _ in 0..nonzero {
            let i = rng.gen_range(0..len);
            c.data[i] = random_cyclotomic(rng, a.order(), 3);
        }
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CyclotomicScalar::is_zero)
    }

    pub fn coefficient(&self, j: &[usize]) -> &CyclotomicScalar {
        &self.data[encode(self.dim, j)]
    }

    pub fn terms(&self) -> Terms {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (decode(self.dim, self.degree + 1, i), x.clone()))
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        Chain {
            degree: self.degree,
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        Chain {
            degree: self.degree,
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &CyclotomicScalar) -> Self {
        Chain {
            degree: self.degree,
            dim: self.dim,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }
}

/// Applies a basis-level operator linearly to a chain.
pub fn apply(a: &FiniteDimAlgebra, c: &Chain, out_degree: usize, op: impl Fn(&[usize]) -> Terms) -> Chain {
    let mut terms = Vec::new();
    for (j, x) in c.terms() {
        for (k, y) in op(&j) {
            terms.push((k, &x * &y));
        }
    }
    Chain::from_terms(a, out_degree, terms)
}

fn lift(terms: &Terms, op: impl Fn(&[usize]) -> Terms) -> Terms {
    let mut out = Vec::new();
    for (j, x) in terms {
        for (k, y) in op(j) {
            out.push((k, x * &y));
        }
    }
    out
}

fn negate(terms: Terms) -> Terms {
    terms.into_iter().map(|(j, x)| (j, -x)).collect()
}

/// Face `d_i`: multiplies factors `i, i+1`; the last face multiplies
/// `alpha(a_k) a_0`.
pub fn face(a: &FiniteDimAlgebra, i: usize, j: &[usize]) -> Terms {
    let k = j.len() - 1;
    assert!(k >= 1 && i <= k);
    if i < k {
        a.product(j[i], j[i + 1])
            .iter()
            .map(|(m, c)| {
                let mut out = j[..i].to_vec();
                out.push(*m);
                out.extend_from_slice(&j[i + 2..]);
                (out, c.clone())
            })
            .collect()
    } else {
        let first = vec![(j[0], CyclotomicScalar::one(a.order()))];
        a.mul_sparse(&a.alpha_basis(j[k]), &first)
            .into_iter()
            .map(|(m, c)| {
                let mut out = vec![m];
                out.extend_from_slice(&j[1..k]);
                (out, c)
            })
            .collect()
    }
}

/// `b = sum_i (-1)^i d_i`, twisted by the algebra's automorphism if any.
pub fn b_terms(a: &FiniteDimAlgebra, j: &[usize]) -> Terms {
    let k = j.len() - 1;
    if k == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for i in 0..=k {
        let f = face(a, i, j);
        out.extend(if i % 2 == 1 { negate(f) } else { f });
    }
    out
}

/// `t(a_0 .. a_k) = alpha(a_k) (x) a_0 .. a_{k-1}`.
pub fn t_terms(a: &FiniteDimAlgebra, j: &[usize]) -> Terms {
    let k = j.len() - 1;
    a.alpha_basis(j[k])
        .into_iter()
        .map(|(m, c)| {
            let mut out = vec![m];
            out.extend_from_slice(&j[..k]);
            (out, c)
        })
        .collect()
}

/// Extra degeneracy `s(a_0 .. a_k) = 1 (x) a_0 .. a_k`.
pub fn s_terms(a: &FiniteDimAlgebra, j: &[usize]) -> Terms {
    a.unit()
        .iter()
        .map(|(m, c)| {
            let mut out = vec![*m];
            out.extend_from_slice(j);
            (out, c.clone())
        })
        .collect()
}

/// `N = sum_{i < r(k+1)} (-1)^{ik} t^i`.
pub fn norm_terms(a: &FiniteDimAlgebra, j: &[usize]) -> Terms {
    let k = j.len() - 1;
    let r = a.automorphism_order();
    let mut current: Terms = vec![(j.to_vec(), CyclotomicScalar::one(a.order()))];
    let mut out = Vec::new();
    for i in 0..r * (k + 1) {
        if (i * k) % 2 == 1 {
            out.extend(negate(current.clone()));
        } else {
            out.extend(current.clone());
        }
        current = lift(&current, |x| t_terms(a, x));
    }
    out
}

/// Connes' operator `B = (1 + (-1)^k t) s N` from degree `k` to `k + 1`.
pub fn connes_terms(a: &FiniteDimAlgebra, j: &[usize]) -> Terms {
    let k = j.len() - 1;
    let sn = lift(&norm_terms(a, j), |x| s_terms(a, x));
    let tsn = lift(&sn, |x| t_terms(a, x));
    let mut out = sn;
    out.extend(if k % 2 == 1 { negate(tsn) } else { tsn });
    out
}

pub fn hochschild_b(a: &FiniteDimAlgebra, c: &Chain) -> Chain {
    if c.degree == 0 {
        return Chain::zero(a, 0);
    }
    apply(a, c, c.degree - 1, |j| b_terms(a, j))
}

pub fn cyclic_t(a: &FiniteDimAlgebra, c: &Chain) -> Chain {
    apply(a, c, c.degree, |j| t_terms(a, j))
}

pub fn connes_b(a: &FiniteDimAlgebra, c: &Chain) -> Chain {
    apply(a, c, c.degree + 1, |j| connes_terms(a, j))
}

/// Rank of a basis-level operator on `C_k` with values in a space indexed
/// by `index`.
fn operator_rank(
    a: &FiniteDimAlgebra,
    k: usize,
    images: impl Fn(&[usize]) -> Vec<(usize, CyclotomicScalar)> + Sync,
) -> usize {
    let d = a.dim();
    let n = d.pow(k as u32 + 1);
    let vectors: Vec<_> = (0..n)
        .into_par_iter()
        .map(|i| sparse_from_terms(images(&decode(d, k + 1, i))))
        .collect();
    let mut e = Eliminator::new(a.order());
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

fn encoded(a: &FiniteDimAlgebra, terms: Terms, offset: usize) -> Vec<(usize, CyclotomicScalar)> {
    terms.into_iter().map(|(j, x)| (offset + encode(a.dim(), &j), x)).collect()
}

/// `dim HH_k` for `k = 0..=k_max`, from ranks of `b`.
pub fn hh_dimensions(a: &FiniteDimAlgebra, k_max: usize) -> Vec<usize> {
    let d = a.dim();
    let ranks: Vec<usize> = (0..=k_max + 1)
        .map(|k| if k == 0 { 0 } else { operator_rank(a, k, |j| encoded(a, b_terms(a, j), 0)) })
        .collect();
    (0..=k_max).map(|k| d.pow(k as u32 + 1) - ranks[k] - ranks[k + 1]).collect()
}

/// Rank of `b + B` on `Tot_n = C_n + C_{n-2} + ...`.
fn total_rank(a: &FiniteDimAlgebra, n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let d = a.dim();
    // Offsets of C_{n-1}, C_{n-3}, ... inside Tot_{n-1}.
    let mut offsets = Vec::new();
    let mut acc = 0;
    let mut m = n as i64 - 1;
    while m >= 0 {
        offsets.push(acc);
        acc += d.pow(m as u32 + 1);
        m -= 2;
    }
    let mut vectors = Vec::new();
    for j in 0..=n / 2 {
        let deg = n - 2 * j;
        let images: Vec<_> = (0..d.pow(deg as u32 + 1))
            .into_par_iter()
            .map(|i| {
                let x = decode(d, deg + 1, i);
                let mut terms = Vec::new();
                if deg >= 1 {
                    terms.extend(encoded(a, b_terms(a, &x), offsets[j]));
                }
                if j >= 1 {
                    terms.extend(encoded(a, connes_terms(a, &x), offsets[j - 1]));
                }
                sparse_from_terms(terms)
            })
            .collect();
        vectors.extend(images);
    }
    let mut e = Eliminator::new(a.order());
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// `dim HC_n` for `n = 0..=k_max`, from the total complex of the
/// `(b, B)`-bicomplex.
pub fn hc_dimensions(a: &FiniteDimAlgebra, k_max: usize) -> Vec<usize> {
    let d = a.dim();
    let tot = |n: usize| (0..=n / 2).map(|j| d.pow((n - 2 * j) as u32 + 1)).sum::<usize>();
    let ranks: Vec<usize> = (0..=k_max + 1).map(|n| total_rank(a, n)).collect();
    (0..=k_max).map(|n| tot(n) - ranks[n] - ranks[n + 1]).collect()
}

/// Simplicial and cyclic identities on random chains up to degree `k_max`.
pub fn verify_cyclic_identities<R: Rng + ?Sized>(rng: &mut R, a: &FiniteDimAlgebra, k_max: usize, trials: usize) -> Check {
    let r = a.automorphism_order();
    let mut check = Check::new("cyclic-identities", "face/cyclic relations, b^2 = B^2 = bB + Bb = 0").with("automorphism_order", r);
    for k in 0..=k_max {
        for _ in 0..trials {
            let c = Chain::random(rng, a, k, 6);
            let mut t = c.clone();
            for _ in 0..r * (k + 1) {
                t = cyclic_t(a, &t);
            }
            check.record(t == c, || vec![("identity", "t^{r(k+1)} = 1".to_string()), ("degree", k.to_string())]);
            if k >= 1 {
                let tc = cyclic_t(a, &c);
                let d0t = apply(a, &tc, k - 1, |j| face(a, 0, j));
                let dk = apply(a, &c, k - 1, |j| face(a, k, j));
                check.record(d0t == dk, || vec![("identity", "d_0 t = d_k".to_string()), ("degree", k.to_string())]);
                for i in 1..=k {
                    let lhs = apply(a, &tc, k - 1, |j| face(a, i, j));
                    let dc = apply(a, &c, k - 1, |j| face(a, i - 1, j));
                    let rhs = cyclic_t(a, &dc);
                    check.record(lhs == rhs, || vec![("identity", format!("d_{i} t = t d_{}", i - 1)), ("degree", k.to_string())]);
                }
                let bb = hochschild_b(a, &hochschild_b(a, &c));
                check.record(k < 2 || bb.is_zero(), || vec![("identity", "b^2 = 0".to_string()), ("degree", k.to_string())]);
            }
            let big_b = connes_b(a, &c);
            check.record(connes_b(a, &big_b).is_zero(), || vec![("identity", "B^2 = 0".to_string()), ("degree", k.to_string())]);
            let mixed = hochschild_b(a, &big_b);
            let mixed = if k >= 1 { mixed.add(&connes_b(a, &hochschild_b(a, &c))) } else { mixed };
            check.record(mixed.is_zero(), || vec![("identity", "bB + Bb = 0".to_string()), ("degree", k.to_string())]);
        }
    }
    check
}
