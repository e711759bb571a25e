use rand::Rng;

use crate::linalg::{sparse_from_terms, SparseVec};
use crate::report::Check;
use crate::scalar::{random_cyclotomic, CyclotomicScalar};

use super::algebra::FiniteDimAlgebra;
use super::chains::{apply, decode, encode, hochschild_b, Chain, Terms};
use super::HomologyError;

/// A multilinear map `A^{(x)k} -> M` stored by its values on basis tuples:
/// entry `encode(J) * dim M + m` is the `e_m`-coordinate of `phi(e_J)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    arity: usize,
    dim_in: usize,
    dim_out: usize,
    order: u32,
    data: Vec<CyclotomicScalar>,
}

impl Cochain {
    pub fn zero(order: u32, arity: usize, dim_in: usize, dim_out: usize) -> Self {
        Cochain {
            arity,
            dim_in,
            dim_out,
            order,
            data: vec![CyclotomicScalar::zero(order); dim_in.pow(arity as u32) * dim_out],
        }
    }

    /// Cochain with values in the algebra itself.
    pub fn endo_zero(a: &FiniteDimAlgebra, arity: usize) -> Self {
        Self::zero(a.order(), arity, a.dim(), a.dim())
    }

    pub fn from_fn(order: u32, arity: usize, dim_in: usize, dim_out: usize, f: impl Fn(&[usize]) -> SparseVec) -> Self {
        let mut c = Self::zero(order, arity, dim_in, dim_out);
        for i in 0..dim_in.pow(arity as u32) {
            for (m, x) in f(&decode(dim_in, arity, i)) {
                c.data[i * dim_out + m] = x;
            }
        }
        c
    }

    /// The product `m(a, b) = ab` as a 2-cochain.
    pub fn multiplication(a: &FiniteDimAlgebra) -> Self {
        Self::from_fn(a.order(), 2, a.dim(), a.dim(), |j| a.product(j[0], j[1]).clone())
    }

    /// An element of the algebra as a 0-cochain.
    pub fn element(a: &FiniteDimAlgebra, v: &SparseVec) -> Self {
        Self::from_fn(a.order(), 0, a.dim(), a.dim(), |_| v.clone())
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, a: &FiniteDimAlgebra, arity: usize, nonzero: usize) -> Self {
        let mut c = Self::endo_zero(a, arity);
        let len = c.data.len();
        for _ in 0..nonzero {
            let i = rng.gen_range(0..len);
            c.data[i] = random_cyclotomic(rng, a.order(), 3);
        }
        c
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn data(&self) -> &[CyclotomicScalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CyclotomicScalar::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x += y;
        }
        out
    }

    pub fn scale(&self, c: &CyclotomicScalar) -> Self {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x = &*x * c;
        }
        out
    }

    pub fn evaluate_basis(&self, j: &[usize]) -> SparseVec {
        let base = encode(self.dim_in, j) * self.dim_out;
        (0..self.dim_out)
            .filter(|m| !self.data[base + m].is_zero())
            .map(|m| (m, self.data[base + m].clone()))
            .collect()
    }

    /// Multilinear extension to arbitrary arguments.
    pub fn evaluate(&self, args: &[SparseVec]) -> SparseVec {
        assert_eq!(args.len(), self.arity);
        let mut terms = Vec::new();
        let mut idx = Vec::with_capacity(self.arity);
        self.expand(args, &mut idx, CyclotomicScalar::one(self.order), &mut terms);
        sparse_from_terms(terms)
    }

    fn expand(&self, args: &[SparseVec], idx: &mut Vec<usize>, coeff: CyclotomicScalar, out: &mut Vec<(usize, CyclotomicScalar)>) {
        if idx.len() == args.len() {
            for (m, x) in self.evaluate_basis(idx) {
                out.push((m, &x * &coeff));
            }
            return;
        }
        for (i, x) in &args[idx.len()] {
            idx.push(*i);
            self.expand(args, idx, &coeff * x, out);
            idx.pop();
        }
    }
}

fn unit_arg(i: usize, order: u32) -> SparseVec {
    vec![(i, CyclotomicScalar::one(order))]
}

/// `d_phi` on a basis tensor of degree `n`, for `phi` of arity `k`.
pub fn d_phi_terms(phi: &Cochain, j: &[usize]) -> Terms {
    let n = j.len() - 1;
    let k = phi.arity;
    let mut out = Vec::new();
    for i in 0..=(n + 1 - k) {
        let sign_neg = (i * (k + 1)) % 2 == 1;
        for (m, x) in phi.evaluate_basis(&j[i..i + k]) {
            let mut t = j[..i].to_vec();
            t.push(m);
            t.extend_from_slice(&j[i + k..]);
            out.push((t, if sign_neg { -x } else { x }));
        }
    }
    for i in 2..=k {
        let sign_neg = ((n + i - k) * (k - i + 1)) % 2 == 1;
        let mut args = j[n + i - k..].to_vec();
        args.extend_from_slice(&j[..i - 1]);
        for (m, x) in phi.evaluate_basis(&args) {
            let mut t = vec![m];
            t.extend_from_slice(&j[i - 1..n + i - k]);
            out.push((t, if sign_neg { -x } else { x }));
        }
    }
    out
}

/// `d_phi: C_n -> C_{n-k+1}`.
pub fn cochain_action(a: &FiniteDimAlgebra, phi: &Cochain, c: &Chain) -> Result<Chain, HomologyError> {
    let n = c.degree();
    let k = phi.arity;
    if n + 1 < k {
        return Err(HomologyError::ArityUnderflow { arity: k, degree: n });
    }
    Ok(apply(a, c, n + 1 - k, |j| d_phi_terms(phi, j)))
}

/// `(phi o psi)(a_1 ..) = sum_i (-1)^{i(l-1)} phi(a_1 .. a_i, psi(a_{i+1} .. a_{i+l}), ..)`.
pub fn circle(phi: &Cochain, psi: &Cochain) -> Cochain {
    let (k, l) = (phi.arity, psi.arity);
    let d = phi.dim_in;
    let arity = (k + l).saturating_sub(1);
    if k == 0 {
        return Cochain::zero(phi.order, arity, d, d);
    }
    Cochain::from_fn(phi.order, arity, d, d, |t| {
        let mut terms = Vec::new();
        for i in 0..k {
            let sign_neg = (i * (l + 1)) % 2 == 1;
            let inner = psi.evaluate_basis(&t[i..i + l]);
            let mut args: Vec<SparseVec> = t[..i].iter().map(|&x| unit_arg(x, phi.order)).collect();
            args.push(inner);
            args.extend(t[i + l..].iter().map(|&x| unit_arg(x, phi.order)));
            for (m, x) in phi.evaluate(&args) {
                terms.push((m, if sign_neg { -x } else { x }));
            }
        }
        sparse_from_terms(terms)
    })
}

/// `[phi, psi] = phi o psi - (-1)^{(k-1)(l-1)} psi o phi`.
pub fn gerstenhaber_bracket(phi: &Cochain, psi: &Cochain) -> Cochain {
    let (k, l) = (phi.arity as i64, psi.arity as i64);
    let sign = if ((k - 1) * (l - 1)).rem_euclid(2) == 1 { 1 } else { -1 };
    circle(phi, psi).add(&circle(psi, phi).scale(&CyclotomicScalar::from_int(phi.order, sign)))
}

/// Hochschild coboundary on `C^k(A, A)`.
pub fn hochschild_coboundary(a: &FiniteDimAlgebra, f: &Cochain) -> Cochain {
    let identity: Vec<usize> = (0..a.dim()).collect();
    coboundary_with_values(a, a, &identity, f)
}

/// Coboundary on `C^k(A, B)` for a subalgebra `A` of `B` whose basis maps
/// to basis elements `embed[i]`:
/// `(delta f)(a_1..a_{k+1}) = a_1 f(a_2..) + sum_i (-1)^i f(.. a_i a_{i+1} ..) + (-1)^{k+1} f(a_1..a_k) a_{k+1}`.
pub fn coboundary_with_values(a: &FiniteDimAlgebra, b: &FiniteDimAlgebra, embed: &[usize], f: &Cochain) -> Cochain {
    let k = f.arity;
    let order = a.order();
    Cochain::from_fn(order, k + 1, a.dim(), b.dim(), |t| {
        let mut terms = Vec::new();
        terms.extend(b.mul_sparse(&unit_arg(embed[t[0]], order), &f.evaluate_basis(&t[1..])));
        for i in 1..=k {
            let mut args: Vec<SparseVec> = t[..i - 1].iter().map(|&x| unit_arg(x, order)).collect();
            args.push(a.product(t[i - 1], t[i]).clone());
            args.extend(t[i + 1..].iter().map(|&x| unit_arg(x, order)));
            for (m, x) in f.evaluate(&args) {
                terms.push((m, if i % 2 == 1 { -x } else { x }));
            }
        }
        for (m, x) in b.mul_sparse(&f.evaluate_basis(&t[..k]), &unit_arg(embed[t[k]], order)) {
            terms.push((m, if (k + 1) % 2 == 1 { -x } else { x }));
        }
        sparse_from_terms(terms)
    })
}

/// Basis cochain sending `e_J` to `e_m` and every other basis tuple to zero.
pub fn basis_cochain(order: u32, arity: usize, dim_in: usize, dim_out: usize, index: usize) -> Cochain {
    let mut c = Cochain::zero(order, arity, dim_in, dim_out);
    c.data[index] = CyclotomicScalar::one(order);
    c
}

/// Sparse coordinates of a cochain.
pub fn cochain_vector(c: &Cochain) -> SparseVec {
    crate::linalg::dense_to_sparse(&c.data)
}

/// Checks `d_phi d_psi - (-1)^{(k-1)(l-1)} d_psi d_phi = d_[phi, psi]` on
/// random cochains and chains, for all arity pairs in `1..=max_arity`.
pub fn verify_operation_identity<R: Rng + ?Sized>(
    rng: &mut R,
    a: &FiniteDimAlgebra,
    max_arity: usize,
    chain_degree: usize,
    trials: usize,
) -> Result<Check, HomologyError> {
    let mut check = Check::new("operation-identity", "d_phi d_psi - (-1)^{(k-1)(l-1)} d_psi d_phi = d_[phi,psi]");
    let mut failing = Vec::new();
    for k in 1..=max_arity {
        for l in 1..=max_arity {
            let n = chain_degree.max(k + l);
            let mut ok_pair = true;
            for _ in 0..trials {
                let phi = Cochain::random(rng, a, k, 4);
                let psi = Cochain::random(rng, a, l, 4);
                let c = Chain::random(rng, a, n, 5);
                let defect = operation_defect(a, &phi, &psi, &c)?;
                ok_pair &= defect.is_zero();
                check.record(defect.is_zero(), || vec![("k", k.to_string()), ("l", l.to_string()), ("degree", n.to_string())]);
            }
            if !ok_pair {
                failing.push(format!("({k},{l})"));
            }
        }
    }
    if !failing.is_empty() {
        check.set("failing_arity_pairs", failing.join(" "));
    }
    Ok(check)
}

/// Left side minus right side of the operation identity on one chain.
pub fn operation_defect(a: &FiniteDimAlgebra, phi: &Cochain, psi: &Cochain, c: &Chain) -> Result<Chain, HomologyError> {
    let (k, l) = (phi.arity as i64, psi.arity as i64);
    let lhs1 = cochain_action(a, phi, &cochain_action(a, psi, c)?)?;
    let lhs2 = cochain_action(a, psi, &cochain_action(a, phi, c)?)?;
    let lhs = if ((k - 1) * (l - 1)).rem_euclid(2) == 1 { lhs1.add(&lhs2) } else { lhs1.sub(&lhs2) };
    if k + l == 0 {
        // The bracket of two 0-cochains has arity -1 and acts by zero.
        return Ok(lhs);
    }
    let rhs = cochain_action(a, &gerstenhaber_bracket(phi, psi), c)?;
    Ok(lhs.sub(&rhs))
}

/// `d_m = b` on random chains.
pub fn verify_multiplication_is_b<R: Rng + ?Sized>(rng: &mut R, a: &FiniteDimAlgebra, k_max: usize, trials: usize) -> Result<Check, HomologyError> {
    let a = &a.untwisted();
    let m = Cochain::multiplication(a);
    let mut check = Check::new("d_m-equals-b", "d_m is the Hochschild boundary");
    for k in 1..=k_max {
        for _ in 0..trials {
            let c = Chain::random(rng, a, k, 6);
            let ok = cochain_action(a, &m, &c)? == hochschild_b(a, &c);
            check.record(ok, || vec![("degree", k.to_string())]);
        }
    }
    Ok(check)
}
