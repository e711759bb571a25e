//! Dual Koszul complexes `(Poly (x) Lambda^. V, kappa ^ -)` computing twisted
//! Hochschild cohomology of polynomial functions, cut into finite slices of
//! fixed polynomial and exterior degree.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{sparse_from_terms, sparse_rank, Matrix, SparseVec};
use crate::polyalg::{exponents_of_degree, merge_indices, Exponent, MultiVector, Poly};
use crate::report::Check;
use crate::scalar::CyclotomicScalar;
use crate::symgroup::{conjugacy_classes, fixed_subspace_decomposition, molien_dims, FixedSpaceData, GroupError, MatrixGroup};

/// The complex attached to one linear map `g`, in coordinates adapted to
/// `V^g + V_perp` (fixed coordinates first).
#[derive(Clone, Debug)]
pub struct KoszulComplexSpec {
    pub gamma: Matrix,
    pub fixed: FixedSpaceData,
    /// `g` in the adapted frame.
    pub adapted: Matrix,
    /// `K = g^{-1} - 1` in the adapted frame; `kappa = sum K_ij y_j d_i`.
    pub coefficients: Matrix,
}

impl KoszulComplexSpec {
    pub fn new(gamma: &Matrix) -> Self {
        let fixed = fixed_subspace_decomposition(gamma);
        let adapted = fixed.frame_inverse.mul(gamma).mul(&fixed.frame);
        let inv = adapted.inverse().expect("group elements are invertible");
        let coefficients = inv.sub(&Matrix::identity(gamma.order(), gamma.rows()));
        KoszulComplexSpec {
            gamma: gamma.clone(),
            fixed,
            adapted,
            coefficients,
        }
    }

    pub fn dimension(&self) -> usize {
        self.gamma.rows()
    }

    pub fn order(&self) -> u32 {
        self.gamma.order()
    }

    pub fn fixed_dim(&self) -> usize {
        self.fixed.fixed_dim()
    }

    pub fn codimension(&self) -> usize {
        self.fixed.codimension()
    }

    /// An element of the centralizer, moved to the adapted frame.
    pub fn adapt(&self, h: &Matrix) -> Matrix {
        self.fixed.frame_inverse.mul(h).mul(&self.fixed.frame)
    }
}

/// `kappa = sum_i (x_i o g^{-1} - x_i) d_i` in adapted coordinates.
pub fn koszul_field(spec: &KoszulComplexSpec) -> MultiVector {
    let n = spec.dimension();
    let order = spec.order();
    let comps: Vec<Poly<CyclotomicScalar>> = (0..n)
        .map(|i| {
            let mut p = Poly::zero(n, order);
            for j in 0..n {
                let c = spec.coefficients.get(i, j);
                if !c.is_zero() {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    p = &p + &Poly::monomial(n, &e, c.clone());
                }
            }
            p
        })
        .collect();
    MultiVector::vector_field(&comps)
}

/// Monomial basis `y^a d_I` of `Poly_d (x) Lambda^k`.
struct ChainSpace {
    basis: Vec<(Exponent, Vec<usize>)>,
    index: HashMap<(Exponent, Vec<usize>), usize>,
}

impl ChainSpace {
    fn new(n: usize, k: usize, d: u32) -> Self {
        let subsets: Vec<Vec<usize>> = (0u64..(1 << n))
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect();
        let mut basis = Vec::new();
        for e in exponents_of_degree(n, d) {
            for s in &subsets {
                basis.push((e.clone(), s.clone()));
            }
        }
        let index = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        ChainSpace { basis, index }
    }

    fn len(&self) -> usize {
        self.basis.len()
    }

    fn coordinates(&self, x: &MultiVector) -> SparseVec {
        let mut terms = Vec::new();
        for (idx, f) in x.components() {
            for (e, c) in f.terms() {
                terms.push((self.index[&(e.clone(), idx.clone())], c.clone()));
            }
        }
        sparse_from_terms(terms)
    }
}

fn kappa_wedge_basis(spec: &KoszulComplexSpec, e: &Exponent, idx: &[usize], target: &ChainSpace) -> SparseVec {
    let n = spec.dimension();
    let mut terms = Vec::new();
    for i in 0..n {
        let Some((neg, merged)) = merge_indices(&[i], idx) else {
            continue;
        };
        for j in 0..n {
            let c = spec.coefficients.get(i, j);
            if c.is_zero() {
                continue;
            }
            let mut f = e.clone();
            f[j] += 1;
            terms.push((target.index[&(f, merged.clone())], if neg { -c.clone() } else { c.clone() }));
        }
    }
    sparse_from_terms(terms)
}

fn apply_kappa(spec: &KoszulComplexSpec, source: &ChainSpace, target: &ChainSpace, v: &SparseVec) -> SparseVec {
    let mut terms = Vec::new();
    for (i, x) in v {
        let (e, idx) = &source.basis[*i];
        for (j, y) in kappa_wedge_basis(spec, e, idx, target) {
            terms.push((j, x * &y));
        }
    }
    sparse_from_terms(terms)
}

/// `h . (f d_I) = (f o h^{-1}) (h d_{i_1}) ^ .. ^ (h d_{i_k})` for `h` in the adapted frame.
fn act(h: &Matrix, h_inv: &Matrix, e: &Exponent, idx: &[usize], order: u32) -> MultiVector {
    let n = h.rows();
    let f = Poly::monomial(n, e, CyclotomicScalar::one(order))
        .linear_substitute(h_inv)
        .expect("invertible");
    let mut out = MultiVector::function(f);
    for &i in idx {
        let comps: Vec<Poly<CyclotomicScalar>> = (0..n).map(|j| Poly::constant(n, h.get(j, i).clone())).collect();
        out = out.wedge(&MultiVector::vector_field(&comps));
    }
    out
}

/// Spanning set of the subspace whose cohomology is computed: the full
/// chain space, or the image of the averaging projector over `group`.
fn spanning_set(spec: &KoszulComplexSpec, space: &ChainSpace, group: Option<&[(Matrix, Matrix)]>) -> Vec<SparseVec> {
    let order = spec.order();
    match group {
        None => (0..space.len()).map(|i| vec![(i, CyclotomicScalar::one(order))]).collect(),
        Some(hs) => space
            .basis
            .par_iter()
            .map(|(e, idx)| {
                let mut terms = Vec::new();
                for (h, h_inv) in hs {
                    terms.extend(space.coordinates(&act(h, h_inv, e, idx, order)));
                }
                sparse_from_terms(terms)
            })
            .filter(|v| !v.is_empty())
            .collect(),
    }
}

/// Computed and predicted dimension of `H^k` in polynomial degree `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulEntry {
    pub exterior_degree: usize,
    pub polynomial_degree: u32,
    /// `polynomial_degree - exterior_degree`, constant along the differential.
    pub slice: i64,
    pub chain_dim: usize,
    pub computed: usize,
    pub predicted: usize,
}

fn entry(spec: &KoszulComplexSpec, k: usize, d: u32, group: Option<&[(Matrix, Matrix)]>, predicted: usize) -> KoszulEntry {
    let n = spec.dimension();
    let order = spec.order();
    let here = ChainSpace::new(n, k, d);
    let span = spanning_set(spec, &here, group);
    let dim = sparse_rank(order, span.iter().cloned());
    let out_rank = if k < n {
        let next = ChainSpace::new(n, k + 1, d + 1);
        sparse_rank(order, span.iter().map(|v| apply_kappa(spec, &here, &next, v)))
    } else {
        0
    };
    let in_rank = if k > 0 && d > 0 {
        let prev = ChainSpace::new(n, k - 1, d - 1);
        let pspan = spanning_set(spec, &prev, group);
        sparse_rank(order, pspan.iter().map(|v| apply_kappa(spec, &prev, &here, v)))
    } else {
        0
    };
    KoszulEntry {
        exterior_degree: k,
        polynomial_degree: d,
        slice: d as i64 - k as i64,
        chain_dim: dim,
        computed: dim - out_rank - in_rank,
        predicted,
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim Poly_d(V^g) (x) Lambda^{k-c} V^g`, with `c` the codimension of `V^g`.
pub fn predicted_dims(spec: &KoszulComplexSpec, k: usize, d: u32) -> usize {
    let (l, c) = (spec.fixed_dim() as u64, spec.codimension());
    if k < c {
        return 0;
    }
    let poly = if l == 0 { u64::from(d == 0) } else { binomial(d as u64 + l - 1, l - 1) };
    (poly * binomial(l, (k - c) as u64)) as usize
}

/// The invariant part of [`predicted_dims`] under the centralizer of `g`,
/// with the centralizer acting on the normal top power by its determinant.
pub fn invariant_predicted_dims(group: &MatrixGroup, g: usize, k: usize, d: u32) -> Result<usize, GroupError> {
    let data = fixed_subspace_decomposition(group.element(g));
    let c = data.codimension();
    if k < c || k - c > data.fixed_dim() {
        return Ok(0);
    }
    molien_dims(group, &group.centralizer(g), g, k - c, d as usize, true)
}

fn degrees(n: usize, total_cap: u32) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    for k in 0..=n {
        for d in 0..=total_cap.saturating_sub(k as u32) {
            out.push((k, d));
        }
    }
    out
}

/// `dim H^k` in every polynomial degree `d` with `d + k <= total_cap`.
pub fn cohomology_dims(spec: &KoszulComplexSpec, total_cap: u32) -> Vec<KoszulEntry> {
    degrees(spec.dimension(), total_cap)
        .into_par_iter()
        .map(|(k, d)| entry(spec, k, d, None, predicted_dims(spec, k, d)))
        .collect()
}

/// Centralizer-invariant cohomology of the complex of `g`, computed on the
/// invariant subcomplex.
pub fn invariant_cohomology_dims(group: &MatrixGroup, g: usize, total_cap: u32) -> Result<Vec<KoszulEntry>, GroupError> {
    let spec = KoszulComplexSpec::new(group.element(g));
    let hs: Vec<(Matrix, Matrix)> = group
        .centralizer(g)
        .iter()
        .map(|&h| (spec.adapt(group.element(h)), spec.adapt(group.element(group.inverse(h)))))
        .collect();
    degrees(spec.dimension(), total_cap)
        .into_par_iter()
        .map(|(k, d)| Ok(entry(&spec, k, d, Some(&hs), invariant_predicted_dims(group, g, k, d)?)))
        .collect()
}

fn compare_entries(check: &mut Check, entries: &[KoszulEntry], label: &str) {
    for e in entries {
        check.record(e.computed == e.predicted, || {
            vec![
                ("element", label.to_string()),
                ("k", e.exterior_degree.to_string()),
                ("degree", e.polynomial_degree.to_string()),
                ("computed", e.computed.to_string()),
                ("predicted", e.predicted.to_string()),
            ]
        });
    }
}

/// Complete slices in the table satisfy the Euler characteristic identity.
fn euler_consistent(entries: &[KoszulEntry], n: usize) -> bool {
    let mut slices: HashMap<i64, Vec<&KoszulEntry>> = HashMap::new();
    for e in entries {
        slices.entry(e.slice).or_default().push(e);
    }
    slices.values().filter(|v| v.len() == n + 1).all(|v| {
        let chi_c: i64 = v.iter().map(|e| if e.exterior_degree % 2 == 0 { e.chain_dim as i64 } else { -(e.chain_dim as i64) }).sum();
        let chi_h: i64 = v.iter().map(|e| if e.exterior_degree % 2 == 0 { e.computed as i64 } else { -(e.computed as i64) }).sum();
        chi_c == chi_h
    })
}

/// Compares computed and predicted dimensions for one element, and checks
/// `kappa ^ kappa = 0` and the slice Euler characteristics.
pub fn verify_koszul(gamma: &Matrix, total_cap: u32) -> (Check, Vec<KoszulEntry>) {
    let spec = KoszulComplexSpec::new(gamma);
    let mut check = Check::new("koszul-cohomology", "H^k(A, A_g) = Poly(V^g) (x) Lambda^{k-codim} V^g");
    let kappa = koszul_field(&spec);
    check.record(kappa.wedge(&kappa).is_zero(), || vec![("kappa", kappa.to_string())]);
    let entries = cohomology_dims(&spec, total_cap);
    compare_entries(&mut check, &entries, &format!("{gamma:?}"));
    check.record(euler_consistent(&entries, spec.dimension()), || vec![("euler", "slice mismatch".to_string())]);
    check.set("fixed_dim", spec.fixed_dim());
    check.set("total_degree_cap", total_cap);
    (check, entries)
}

/// Per conjugacy class: invariant cohomology of the class representative
/// under its centralizer, against the Molien prediction.
#[derive(Clone, Debug, Serialize)]
pub struct ClassCohomology {
    pub representative: usize,
    pub class_size: usize,
    pub fixed_dim: usize,
    pub entries: Vec<KoszulEntry>,
}

pub fn verify_group_koszul(group: &MatrixGroup, total_cap: u32) -> Result<(Check, Vec<ClassCohomology>), GroupError> {
    let mut check = Check::new("koszul-invariant", "H^k(A x| G) = sum over classes of Z(g)-invariant multivector fields on V^g");
    let mut out = Vec::new();
    for class in conjugacy_classes(group) {
        let g = class.representative;
        let entries = invariant_cohomology_dims(group, g, total_cap)?;
        compare_entries(&mut check, &entries, &g.to_string());
        out.push(ClassCohomology {
            representative: g,
            class_size: class.size(),
            fixed_dim: fixed_subspace_decomposition(group.element(g)).fixed_dim(),
            entries,
        });
    }
    check.set("classes", out.len());
    Ok((check, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symgroup::generate_group;

    fn find(entries: &[KoszulEntry], k: usize, d: u32) -> usize {
        entries.iter().find(|e| e.exterior_degree == k && e.polynomial_degree == d).unwrap().computed
    }

    #[test]
    fn field_examples() {
        let minus = Matrix::from_ints(1, &[&[-1, 0], &[0, -1]]);
        let spec = KoszulComplexSpec::new(&minus);
        assert_eq!(spec.coefficients, Matrix::from_ints(1, &[&[-2, 0], &[0, -2]]));
        let refl = Matrix::from_ints(1, &[&[1, 0], &[0, -1]]);
        let spec = KoszulComplexSpec::new(&refl);
        assert_eq!(spec.coefficients, Matrix::from_ints(1, &[&[0, 0], &[0, -2]]));
        assert!(koszul_field(&KoszulComplexSpec::new(&Matrix::identity(1, 3))).is_zero());
    }

    #[test]
    fn minus_identity_concentrated_in_top_degree() {
        let (check, entries) = verify_koszul(&Matrix::from_ints(1, &[&[-1, 0], &[0, -1]]), 6);
        assert!(check.passed(), "{check:?}");
        for e in &entries {
            let expect = usize::from(e.exterior_degree == 2 && e.polynomial_degree == 0);
            assert_eq!(e.computed, expect, "{e:?}");
        }
    }

    #[test]
    fn reflection_and_identity() {
        let (check, entries) = verify_koszul(&Matrix::from_ints(1, &[&[1, 0], &[0, -1]]), 6);
        assert!(check.passed(), "{check:?}");
        for d in 0..4 {
            assert_eq!(find(&entries, 1, d), 1);
            assert_eq!(find(&entries, 2, d), 1);
            assert_eq!(find(&entries, 0, d), 0);
        }
        let (check, entries) = verify_koszul(&Matrix::identity(1, 2), 4);
        assert!(check.passed());
        assert_eq!(find(&entries, 1, 2), 6);
    }

    #[test]
    fn invariant_versions() {
        let z2 = generate_group(2, 2, &[Matrix::from_ints(2, &[&[-1, 0], &[0, -1]])], 8).unwrap();
        let (check, classes) = verify_group_koszul(&z2, 4).unwrap();
        assert!(check.passed(), "{check:?}");
        assert_eq!(find(&classes[1].entries, 2, 0), 1);
        let s3 = generate_group(
            6,
            3,
            &[Matrix::from_ints(6, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]), Matrix::from_ints(6, &[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]])],
            8,
        )
        .unwrap();
        let (check, classes) = verify_group_koszul(&s3, 3).unwrap();
        assert!(check.passed(), "{check:?}");
        assert_eq!(find(&classes[0].entries, 0, 1), 1);
    }

    #[test]
    fn rotation_of_order_four() {
        let z4 = generate_group(4, 2, &[Matrix::from_ints(4, &[&[0, -1], &[1, 0]])], 8).unwrap();
        let (check, classes) = verify_group_koszul(&z4, 4).unwrap();
        assert!(check.passed(), "{check:?}");
        let twisted: usize = classes.iter().filter(|c| c.fixed_dim == 0).map(|c| find(&c.entries, 2, 0)).sum();
        assert_eq!(twisted, 3);
    }
}
