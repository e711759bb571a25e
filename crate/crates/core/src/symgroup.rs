//! Finite matrix groups: closure from generators, conjugacy classes,
//! centralizers, fixed-subspace splittings `V = V^g + im(1 - g)`, and
//! character averages for graded invariant dimensions.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::linalg::Matrix;
use crate::polyalg::{exponents_of_degree, CPoly};
use crate::scalar::{rational_int, CyclotomicScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("generator {0} is not an invertible {1}x{1} matrix")]
    BadGenerator(usize, usize),
    #[error("closure exceeded {0} elements")]
    TooLarge(usize),
    #[error("element of order {0} does not fit in Q(zeta_{1})")]
    OrderNotDividing(usize, u32),
    #[error("element {0} is not in the group")]
    NoSuchElement(usize),
    #[error("character average {0} is not a non-negative integer")]
    NonIntegralAverage(String),
    #[error("averaging element {0} does not commute with the twist")]
    NotCentralizing(usize),
}

#[derive(Clone, Debug)]
pub struct MatrixGroup {
    dimension: usize,
    order: u32,
    elements: Vec<Matrix>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    identity: usize,
}

impl MatrixGroup {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Order `N` of the coefficient field `Q(zeta_N)`.
    pub fn field_order(&self) -> u32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn element(&self, g: usize) -> &Matrix {
        &self.elements[g]
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn multiply(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    /// `g h g^{-1}`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.multiply(self.multiply(g, h), self.inverse(g))
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.elements.iter().position(|e| e == m)
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != self.identity {
            x = self.multiply(x, g);
            k += 1;
        }
        k
    }

    /// Elements commuting with `g`.
    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&h| self.multiply(g, h) == self.multiply(h, g))
            .collect()
    }
}

/// Breadth-first closure of the generators under multiplication.
pub fn generate_group(order: u32, dimension: usize, generators: &[Matrix], max_order: usize) -> Result<MatrixGroup, GroupError> {
    for (k, g) in generators.iter().enumerate() {
        if g.rows() != dimension || g.cols() != dimension || g.det().is_zero() {
            return Err(GroupError::BadGenerator(k, dimension));
        }
    }
    let id = Matrix::identity(order, dimension);
    let mut elements = vec![id.clone()];
    let mut index: HashMap<Matrix, usize> = HashMap::from([(id, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = elements[x].mul(g);
            if !index.contains_key(&y) {
                if elements.len() == max_order {
                    return Err(GroupError::TooLarge(max_order));
                }
                index.insert(y.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(y);
            }
        }
    }
    let table: Vec<Vec<usize>> = elements
        .iter()
        .map(|a| elements.iter().map(|b| index[&a.mul(b)]).collect())
        .collect();
    let inverses = (0..elements.len())
        .map(|g| table[g].iter().position(|&p| p == 0).expect("finite group"))
        .collect();
    let group = MatrixGroup {
        dimension,
        order,
        elements,
        table,
        inverses,
        identity: 0,
    };
    for g in 0..group.len() {
        let k = group.element_order(g);
        if order as usize % k != 0 {
            return Err(GroupError::OrderNotDividing(k, order));
        }
    }
    Ok(group)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjClassData {
    pub representative: usize,
    pub members: Vec<usize>,
    pub centralizer: Vec<usize>,
}

impl ConjClassData {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Classes in order of their smallest member, so the identity class is first.
pub fn conjugacy_classes(group: &MatrixGroup) -> Vec<ConjClassData> {
    let mut seen = vec![false; group.len()];
    let mut out = Vec::new();
    for g in 0..group.len() {
        if seen[g] {
            continue;
        }
        let mut members: Vec<usize> = (0..group.len()).map(|h| group.conjugate(h, g)).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            seen[m] = true;
        }
        out.push(ConjClassData {
            representative: g,
            members,
            centralizer: group.centralizer(g),
        });
    }
    out
}

/// Index of the class containing each element.
pub fn class_index(group: &MatrixGroup, classes: &[ConjClassData]) -> Vec<usize> {
    let mut out = vec![0; group.len()];
    for (c, class) in classes.iter().enumerate() {
        for &m in &class.members {
            out[m] = c;
        }
    }
    out
}

/// The splitting `V = V^g + V_perp` with `V_perp = im(1 - g)`.
#[derive(Clone, Debug)]
pub struct FixedSpaceData {
    pub fixed_basis: Vec<Vec<CyclotomicScalar>>,
    pub perp_basis: Vec<Vec<CyclotomicScalar>>,
    pub gamma_perp: Matrix,
    /// Columns: fixed basis followed by perpendicular basis.
    pub frame: Matrix,
    pub frame_inverse: Matrix,
    /// Projector onto `V^g` along `V_perp`.
    pub projector: Matrix,
}

impl FixedSpaceData {
    pub fn fixed_dim(&self) -> usize {
        self.fixed_basis.len()
    }

    pub fn codimension(&self) -> usize {
        self.perp_basis.len()
    }

    /// Blocks of a matrix commuting with `g` on `V^g` and on `V_perp`.
    pub fn restrict(&self, h: &Matrix) -> (Matrix, Matrix) {
        let l = self.fixed_dim();
        let n = l + self.codimension();
        let b = self.frame_inverse.mul(h).mul(&self.frame);
        (b.submatrix(0, l, 0, l), b.submatrix(l, n, l, n))
    }

    /// `det(1 - g_perp)`, nonzero by construction.
    pub fn det_one_minus(&self) -> CyclotomicScalar {
        let m = self.gamma_perp.rows();
        Matrix::identity(self.gamma_perp.order(), m).sub(&self.gamma_perp).det()
    }
}

pub fn fixed_subspace_decomposition(g: &Matrix) -> FixedSpaceData {
    let order = g.order();
    let n = g.rows();
    let one_minus = Matrix::identity(order, n).sub(g);
    let fixed_basis = one_minus.kernel();
    let perp_basis = one_minus.column_space();
    let mut columns = fixed_basis.clone();
    columns.extend(perp_basis.iter().cloned());
    let frame = Matrix::from_columns(order, n, &columns);
    let frame_inverse = frame.inverse().expect("V^g and im(1-g) are complementary");
    let l = fixed_basis.len();
    let block = frame_inverse.mul(g).mul(&frame);
    let gamma_perp = block.submatrix(l, n, l, n);
    let mut diag = Matrix::zeros(order, n, n);
    for i in 0..l {
        diag.set(i, i, CyclotomicScalar::one(order));
    }
    let projector = frame.mul(&diag).mul(&frame_inverse);
    FixedSpaceData {
        fixed_basis,
        perp_basis,
        gamma_perp,
        frame,
        frame_inverse,
        projector,
    }
}

/// `A + A^{-T}` acting on `(x, p)`; preserves the standard symplectic form.
pub fn symplectic_double(a: &Matrix) -> Matrix {
    let n = a.rows();
    let inv_t = a.inverse().expect("invertible block").transpose();
    let mut m = Matrix::zeros(a.order(), 2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, a.get(i, j).clone());
            m.set(n + i, n + j, inv_t.get(i, j).clone());
        }
    }
    m
}

/// Elementary symmetric polynomials `e_0..e_q` of the eigenvalues of `m`,
/// from the power sums `tr(m^k)` via Newton's identities.
fn elementary_from_traces(power_sums: &[CyclotomicScalar], q: usize) -> Vec<CyclotomicScalar> {
    let order = power_sums[0].order();
    let mut e = vec![CyclotomicScalar::one(order)];
    for k in 1..=q {
        let mut acc = CyclotomicScalar::zero(order);
        for i in 1..=k {
            let t = &e[k - i] * &power_sums[i];
            acc = if i % 2 == 1 { &acc + &t } else { &acc - &t };
        }
        e.push(acc.scale(&crate::scalar::rational(1, k as i64)));
    }
    e
}

/// Complete homogeneous symmetric polynomials `h_0..h_d`.
fn complete_from_traces(power_sums: &[CyclotomicScalar], d: usize) -> Vec<CyclotomicScalar> {
    let order = power_sums[0].order();
    let mut h = vec![CyclotomicScalar::one(order)];
    for k in 1..=d {
        let mut acc = CyclotomicScalar::zero(order);
        for i in 1..=k {
            acc = &acc + &(&h[k - i] * &power_sums[i]);
        }
        h.push(acc.scale(&crate::scalar::rational(1, k as i64)));
    }
    h
}

/// Dimension of the `H`-invariants in `Poly_d(V^g) (x) Lambda^q V^g`, where
/// `H` is a subgroup of the centralizer of `g`. With `det_twist` the
/// character is multiplied by `det(h | V_perp)`.
pub fn molien_dims(
    group: &MatrixGroup,
    subgroup: &[usize],
    twist: usize,
    q: usize,
    d: usize,
    det_twist: bool,
) -> Result<usize, GroupError> {
    let order = group.field_order();
    if twist >= group.len() {
        return Err(GroupError::NoSuchElement(twist));
    }
    let data = fixed_subspace_decomposition(group.element(twist));
    let mut total = CyclotomicScalar::zero(order);
    for &h in subgroup {
        if h >= group.len() {
            return Err(GroupError::NoSuchElement(h));
        }
        if group.multiply(h, twist) != group.multiply(twist, h) {
            return Err(GroupError::NotCentralizing(h));
        }
        let (fix, perp) = data.restrict(group.element(h));
        let (fix_inv, _) = data.restrict(group.element(group.inverse(h)));
        let sums = |m: &Matrix, k: usize| -> Vec<CyclotomicScalar> {
            let mut out = vec![CyclotomicScalar::from_int(order, m.rows() as i64)];
            let mut p = Matrix::identity(order, m.rows());
            for _ in 0..k {
                p = p.mul(m);
                out.push(p.trace());
            }
            out
        };
        let e = elementary_from_traces(&sums(&fix, q), q);
        let hd = complete_from_traces(&sums(&fix_inv, d), d);
        let mut chi = &e[q] * &hd[d];
        if det_twist && perp.rows() > 0 {
            chi = &chi * &perp.det();
        }
        total = &total + &chi;
    }
    let avg = total.scale(&crate::scalar::rational(1, subgroup.len() as i64));
    match avg.to_integer() {
        Some(v) if v >= 0 => Ok(v as usize),
        _ => Err(GroupError::NonIntegralAverage(avg.to_string())),
    }
}

/// Dimension of the invariant degree-`d` polynomials on the whole space,
/// as the rank of the averaging projector on the monomial basis.
pub fn invariant_polynomial_dim(group: &MatrixGroup, d: u32) -> usize {
    let order = group.field_order();
    let n = group.dimension();
    let basis = exponents_of_degree(n, d);
    let position: HashMap<_, _> = basis.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    let scale = rational_int(group.len() as i64).recip();
    let mut rows = Vec::new();
    for e in &basis {
        let m = CPoly::monomial(n, e, CyclotomicScalar::one(order));
        let mut avg = CPoly::zero(n, order);
        for g in group.elements() {
            avg = &avg + &m.linear_substitute(&g.inverse().expect("group element")).expect("invertible");
        }
        let mut row = vec![CyclotomicScalar::zero(order); basis.len()];
        for (exp, c) in avg.scale_rational(&scale).terms() {
            row[position[exp]] = c.clone();
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(order, rows).expect("square").rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rot4() -> MatrixGroup {
        generate_group(4, 2, &[Matrix::from_ints(4, &[&[0, -1], &[1, 0]])], 64).unwrap()
    }

    fn s3_perm() -> MatrixGroup {
        let t = Matrix::from_ints(12, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        let c = Matrix::from_ints(12, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        generate_group(12, 3, &[t, c], 64).unwrap()
    }

    fn minus_one() -> MatrixGroup {
        generate_group(4, 2, &[Matrix::from_ints(4, &[&[-1, 0], &[0, -1]])], 64).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(rot4().len(), 4);
        assert_eq!(s3_perm().len(), 6);
        assert_eq!(minus_one().len(), 2);
        let big = Matrix::from_ints(4, &[&[1, 1], &[0, 1]]);
        assert_eq!(generate_group(4, 2, &[big], 10).unwrap_err(), GroupError::TooLarge(10));
    }

    #[test]
    fn class_structure() {
        let g = s3_perm();
        let classes = conjugacy_classes(&g);
        let mut sizes: Vec<usize> = classes.iter().map(ConjClassData::size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        for c in &classes {
            assert_eq!(c.size() * c.centralizer.len(), 6);
        }
        let transposition = classes.iter().find(|c| c.size() == 3).unwrap();
        assert_eq!(transposition.centralizer.len(), 2);
        assert_eq!(conjugacy_classes(&rot4()).len(), 4);
    }

    #[test]
    fn fixed_spaces() {
        let d = fixed_subspace_decomposition(&Matrix::from_ints(4, &[&[-1, 0], &[0, -1]]));
        assert_eq!((d.fixed_dim(), d.codimension()), (0, 2));
        let d = fixed_subspace_decomposition(&Matrix::from_ints(4, &[&[1, 0], &[0, -1]]));
        assert_eq!(d.fixed_dim(), 1);
        assert_eq!(d.det_one_minus(), CyclotomicScalar::from_int(4, 2));
        let d = fixed_subspace_decomposition(&Matrix::identity(4, 2));
        assert_eq!((d.fixed_dim(), d.codimension()), (2, 0));
    }

    #[test]
    fn molien_examples() {
        let g = minus_one();
        let all: Vec<usize> = (0..g.len()).collect();
        let dims: Vec<usize> = (0..5).map(|d| molien_dims(&g, &all, 0, 0, d, false).unwrap()).collect();
        assert_eq!(dims, vec![1, 0, 3, 0, 5]);
        let s3 = s3_perm();
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(molien_dims(&s3, &all, 0, 0, 1, false).unwrap(), 1);
        let trivial = generate_group(4, 3, &[], 4).unwrap();
        assert_eq!(molien_dims(&trivial, &[0], 0, 2, 2, false).unwrap(), 18);
    }

    #[test]
    fn molien_matches_projector_rank() {
        for g in [minus_one(), rot4(), s3_perm()] {
            let all: Vec<usize> = (0..g.len()).collect();
            for d in 0..4 {
                assert_eq!(molien_dims(&g, &all, 0, 0, d as usize, false).unwrap(), invariant_polynomial_dim(&g, d));
            }
        }
    }

    #[test]
    fn doubled_representation_is_symplectic() {
        let a = Matrix::from_ints(12, &[&[-1, 1], &[0, 1]]);
        let m = symplectic_double(&a);
        let pi = crate::star::ConstantBivector::standard(2, 12);
        assert!(pi.is_preserved_by(&m));
    }
}
