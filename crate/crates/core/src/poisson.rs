//! Poisson homology of polynomial forms for a constant bivector, the HKR
//! maps between Hochschild chains and forms, and the noncommutative Poisson
//! differential on symbolic chains.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::polyalg::{random_poly, CPoly, DiffForm, Exponent, Poly};
use crate::report::Check;
use crate::scalar::CyclotomicScalar;
use crate::star::{poisson_bracket, ConstantBivector, StarError};

/// Hochschild chain of the polynomial algebra, expanded on tensors of
/// monomials `x^{a_0} (x) .. (x) x^{a_k}`.
#[derive(Clone, PartialEq, Eq)]
pub struct SymbolicChain {
    nvars: usize,
    order: u32,
    degree: usize,
    terms: BTreeMap<Vec<Exponent>, CyclotomicScalar>,
}

impl SymbolicChain {
    pub fn zero(nvars: usize, order: u32, degree: usize) -> Self {
        SymbolicChain {
            nvars,
            order,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `c f_0 (x) .. (x) f_k`, expanded multilinearly.
    pub fn tensor(c: &CyclotomicScalar, factors: &[CPoly]) -> Self {
        assert!(!factors.is_empty(), "a chain has at least one factor");
        let nvars = factors[0].nvars();
        let order = factors[0].order();
        let mut out = Self::zero(nvars, order, factors.len() - 1);
        let mut partial: Vec<(Vec<Exponent>, CyclotomicScalar)> = vec![(Vec::new(), c.clone())];
        for f in factors {
            assert_eq!(f.nvars(), nvars);
            let mut next = Vec::new();
            for (key, x) in &partial {
                for (e, y) in f.terms() {
                    let mut k = key.clone();
                    k.push(e.clone());
                    next.push((k, x * y));
                }
            }
            partial = next;
        }
        for (k, x) in partial {
            out.add_term(k, x);
        }
        out
    }

    fn add_term(&mut self, key: Vec<Exponent>, x: CyclotomicScalar) {
        if x.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(|| CyclotomicScalar::zero(self.order));
        *slot = &*slot + &x;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Exponent>, &CyclotomicScalar)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "chain degrees differ");
        let mut out = self.clone();
        for (k, x) in &other.terms {
            out.add_term(k.clone(), x.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&CyclotomicScalar::from_int(self.order, -1)))
    }

    pub fn scale(&self, c: &CyclotomicScalar) -> Self {
        let mut out = Self::zero(self.nvars, self.order, self.degree);
        for (k, x) in &self.terms {
            out.add_term(k.clone(), x * c);
        }
        out
    }

    fn factor(&self, e: &Exponent) -> CPoly {
        Poly::monomial(self.nvars, e, CyclotomicScalar::one(self.order))
    }

    /// `sum_i (-1)^i (.. op(a_i, a_{i+1}) ..) + (-1)^k op(a_k, a_0) (x) a_1 .. a_{k-1}`.
    fn bilinear_boundary(&self, op: impl Fn(&CPoly, &CPoly) -> CPoly) -> Self {
        assert!(self.degree >= 1, "boundary needs degree at least 1");
        let k = self.degree;
        let mut out = Self::zero(self.nvars, self.order, k - 1);
        for (key, x) in &self.terms {
            let f: Vec<CPoly> = key.iter().map(|e| self.factor(e)).collect();
            for i in 0..k {
                let mut t: Vec<CPoly> = f[..i].to_vec();
                t.push(op(&f[i], &f[i + 1]));
                t.extend_from_slice(&f[i + 2..]);
                let c = if i % 2 == 1 { -x.clone() } else { x.clone() };
                out = out.add(&Self::tensor(&c, &t));
            }
            let mut t = vec![op(&f[k], &f[0])];
            t.extend_from_slice(&f[1..k]);
            let c = if k % 2 == 1 { -x.clone() } else { x.clone() };
            out = out.add(&Self::tensor(&c, &t));
        }
        out
    }
}

impl fmt::Debug for SymbolicChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SymbolicChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (key, x) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let parts: Vec<String> = key.iter().map(|e| self.factor(e).to_string()).collect();
            write!(f, "({x}) {}", parts.join(" (x) "))?;
        }
        Ok(())
    }
}

/// Hochschild boundary with pointwise products.
pub fn symbolic_b(c: &SymbolicChain) -> SymbolicChain {
    c.bilinear_boundary(|f, g| f * g)
}

/// `d_Pi = sum_i (-1)^i d^i_Pi`, with `Pi` inserted in adjacent slots and
/// in the wrap-around slot `(a_k, a_0)`.
pub fn symbolic_d_pi(c: &SymbolicChain, pi: &ConstantBivector) -> Result<SymbolicChain, StarError> {
    if c.nvars != pi.dimension() {
        return Err(StarError::Dimension(c.nvars, pi.dimension()));
    }
    Ok(c.bilinear_boundary(|f, g| poisson_bracket(f, g, pi).expect("dimension checked")))
}

/// Brylinski's boundary `delta = i_Pi d - d i_Pi`, of degree -1.
pub fn brylinski_delta(w: &DiffForm, pi: &ConstantBivector) -> DiffForm {
    let m = pi.matrix();
    let k = w.degree();
    if k == 0 {
        return DiffForm::zero(w.nvars(), w.order(), 0);
    }
    let first = w.de_rham_d().contract_bivector(m);
    if k == 1 {
        return first;
    }
    first.sub(&w.contract_bivector(m).de_rham_d())
}

fn signed_permutations(items: &[usize]) -> Vec<(bool, Vec<usize>)> {
    if items.len() <= 1 {
        return vec![(false, items.to_vec())];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for (neg, tail) in signed_permutations(&rest) {
            let mut p = vec![head];
            p.extend(tail);
            out.push((neg ^ (i % 2 == 1), p));
        }
    }
    out
}

/// `epsilon_k(f dx_{i_1} ^ .. ^ dx_{i_k}) = sum_sigma sgn(sigma) f (x) x_{i_sigma(1)} (x) .. (x) x_{i_sigma(k)}`.
pub fn epsilon_k(w: &DiffForm) -> SymbolicChain {
    let (n, order) = (w.nvars(), w.order());
    let mut out = SymbolicChain::zero(n, order, w.degree());
    let one = CyclotomicScalar::one(order);
    for (idx, f) in w.components() {
        for (neg, perm) in signed_permutations(idx) {
            let mut factors = vec![f.clone()];
            factors.extend(perm.iter().map(|&i| Poly::var(n, order, i)));
            let c = if neg { -one.clone() } else { one.clone() };
            out = out.add(&SymbolicChain::tensor(&c, &factors));
        }
    }
    out
}

/// `pi_k(f_0 (x) .. (x) f_k) = f_0 df_1 ^ .. ^ df_k`.
pub fn pi_k(c: &SymbolicChain) -> DiffForm {
    let mut out = DiffForm::zero(c.nvars, c.order, c.degree);
    for (key, x) in &c.terms {
        let mut w = DiffForm::function(c.factor(&key[0]).scale(x));
        for e in &key[1..] {
            w = w.wedge(&DiffForm::function(c.factor(e)).de_rham_d());
        }
        out = out.add(&w);
    }
    out
}

fn index_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u64..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Random `k`-form with small random polynomial coefficients.
pub fn random_form<R: Rng + ?Sized>(rng: &mut R, nvars: usize, order: u32, k: usize, max_degree: u32) -> DiffForm {
    let mut w = DiffForm::zero(nvars, order, k);
    let sets = index_sets(nvars, k);
    let picks = rng.gen_range(1..=sets.len().clamp(1, 3));
    for _ in 0..picks {
        let idx = &sets[rng.gen_range(0..sets.len())];
        let f: CPoly = random_poly(rng, nvars, order, max_degree, 3);
        w = w.add(&DiffForm::basis(nvars, idx, f));
    }
    w
}

/// Random chain of degree `k` made of a few tensors of random polynomials.
pub fn random_chain<R: Rng + ?Sized>(rng: &mut R, nvars: usize, order: u32, k: usize, max_degree: u32) -> SymbolicChain {
    let mut c = SymbolicChain::zero(nvars, order, k);
    for _ in 0..rng.gen_range(1..=2) {
        let factors: Vec<CPoly> = (0..=k).map(|_| random_poly(rng, nvars, order, max_degree, 2)).collect();
        c = c.add(&SymbolicChain::tensor(&CyclotomicScalar::from_int(order, rng.gen_range(-3..=3)), &factors));
    }
    c
}

/// `delta^2 = 0` and `d delta + delta d = 0` on random forms of every degree.
pub fn verify_delta_identities<R: Rng + ?Sized>(rng: &mut R, pi: &ConstantBivector, samples: usize, max_degree: u32) -> Check {
    let n = pi.dimension();
    let mut check = Check::new("brylinski-delta", "delta^2 = 0 and d delta + delta d = 0");
    for s in 0..samples {
        let k = s % (n + 1);
        let w = random_form(rng, n, pi.order(), k, max_degree);
        let dw = brylinski_delta(&w, pi);
        let square = brylinski_delta(&dw, pi);
        let anti = if k == 0 {
            brylinski_delta(&w.de_rham_d(), pi)
        } else {
            dw.de_rham_d().add(&brylinski_delta(&w.de_rham_d(), pi))
        };
        let ok = square.is_zero() && anti.is_zero();
        check.record(ok, || vec![("form", w.to_string()), ("delta_squared", square.to_string()), ("anticommutator", anti.to_string())]);
    }
    check
}

/// `pi_k epsilon_k = k!` and `pi_{k-1} b = 0` on random inputs.
pub fn verify_hkr_maps<R: Rng + ?Sized>(rng: &mut R, nvars: usize, order: u32, samples: usize, max_degree: u32) -> Check {
    let mut check = Check::new("hkr-maps", "pi_k epsilon_k = k! and pi_{k-1} b = 0");
    for s in 0..samples {
        let k = 1 + s % nvars.max(1);
        let w = random_form(rng, nvars, order, k, max_degree);
        let fact: i64 = (1..=k as i64).product();
        let round = pi_k(&epsilon_k(&w));
        let ok1 = round == w.scale_cyclotomic(&CyclotomicScalar::from_int(order, fact));
        let c = random_chain(rng, nvars, order, k, max_degree);
        let projected = pi_k(&symbolic_b(&c));
        let ok2 = projected.is_zero();
        check.record(ok1 && ok2, || vec![("form", w.to_string()), ("chain", c.to_string()), ("pi_b", projected.to_string())]);
    }
    check
}

/// `b d_Pi + d_Pi b = 0` on random chains of degree `2..=max_chain`.
pub fn verify_b_d_pi_anticommute<R: Rng + ?Sized>(
    rng: &mut R,
    pi: &ConstantBivector,
    samples: usize,
    max_chain: usize,
    max_degree: u32,
) -> Result<Check, StarError> {
    let mut check = Check::new("b-d_pi-anticommute", "b d_Pi + d_Pi b = d_[m,Pi] = 0");
    let n = pi.dimension();
    for s in 0..samples {
        let k = 2 + s % max_chain.saturating_sub(1).max(1);
        let c = random_chain(rng, n, pi.order(), k, max_degree);
        let lhs = symbolic_b(&symbolic_d_pi(&c, pi)?).add(&symbolic_d_pi(&symbolic_b(&c), pi)?);
        check.record(lhs.is_zero(), || vec![("chain", c.to_string()), ("defect", lhs.to_string())]);
    }
    Ok(check)
}

/// Constant relating the two routes around the HKR square in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityFit {
    pub degree: usize,
    pub fitted: Option<String>,
    pub expected: String,
    pub constrained_samples: usize,
    pub consistent: bool,
}

/// Compares `pi_{k-1}(d_Pi(epsilon_k w))` with `c delta(w)` on random
/// `k`-forms, fitting `c`; expects `2 (k-1)!`.
pub fn verify_brylinski_compat<R: Rng + ?Sized>(
    rng: &mut R,
    pi: &ConstantBivector,
    k: usize,
    samples: usize,
    max_degree: u32,
) -> Result<(Check, CompatibilityFit), StarError> {
    assert!(k >= 1, "compatibility needs k >= 1");
    let n = pi.dimension();
    let order = pi.order();
    let expected = CyclotomicScalar::from_int(order, 2 * (1..k as i64).product::<i64>());
    let mut check = Check::new("brylinski-compatibility", "pi_{k-1} d_Pi epsilon_k = 2(k-1)! delta");
    let mut fitted: Option<CyclotomicScalar> = None;
    let mut consistent = true;
    let mut constrained = 0;
    for _ in 0..samples {
        let w = random_form(rng, n, order, k, max_degree);
        let lhs = pi_k(&symbolic_d_pi(&epsilon_k(&w), pi)?);
        let rhs = brylinski_delta(&w, pi);
        let ok = match rhs.components().next() {
            None => lhs.is_zero(),
            Some((idx, p)) => {
                constrained += 1;
                let (e, r) = p.terms().next().expect("nonzero component");
                let c = &lhs.component(idx).coeff(e) * &r.inv().expect("nonzero coefficient");
                let fits = lhs == rhs.scale_cyclotomic(&c);
                if fits && fitted.is_none() {
                    fitted = Some(c.clone());
                }
                fits && fitted.as_ref() == Some(&c)
            }
        };
        consistent &= ok;
        check.record(ok, || vec![("form", w.to_string()), ("lhs", lhs.to_string()), ("delta", rhs.to_string())]);
    }
    let matches = fitted.as_ref() == Some(&expected) || (constrained == 0 && consistent);
    if consistent && !matches {
        check.fail("fitted_constant", fitted.as_ref().map_or("none".into(), |c| c.to_string()));
    }
    let fit = CompatibilityFit {
        degree: k,
        fitted: fitted.as_ref().map(|c| c.to_string()),
        expected: expected.to_string(),
        constrained_samples: constrained,
        consistent,
    };
    check.set("degree", k);
    check.set("expected_constant", &fit.expected);
    check.set("fitted_constant", fit.fitted.clone().unwrap_or_else(|| "none".into()));
    Ok((check, fit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::parse_polynomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str, n: usize) -> CPoly {
        parse_polynomial(s, n, 4).unwrap().hbar_coefficient(0)
    }

    fn one() -> CyclotomicScalar {
        CyclotomicScalar::one(4)
    }

    #[test]
    fn delta_examples() {
        let pi = ConstantBivector::standard(1, 4);
        let x_dy = DiffForm::basis(2, &[1], p("x0", 2));
        assert_eq!(brylinski_delta(&x_dy, &pi), DiffForm::function(p("1", 2)));
        let vol = DiffForm::basis(2, &[0, 1], p("1", 2));
        assert!(brylinski_delta(&vol, &pi).is_zero());
        assert!(brylinski_delta(&DiffForm::function(p("x0^2*x1", 2)), &pi).is_zero());
    }

    #[test]
    fn symbolic_examples() {
        let pi = ConstantBivector::standard(1, 4);
        let c = SymbolicChain::tensor(&one(), &[p("x0", 2), p("x1", 2)]);
        assert!(symbolic_b(&c).is_zero());
        let d = symbolic_d_pi(&c, &pi).unwrap();
        assert_eq!(d, SymbolicChain::tensor(&CyclotomicScalar::from_int(4, 2), &[p("1", 2)]));
        assert_eq!(epsilon_k(&DiffForm::basis(2, &[1], p("x0", 2))), c);
        assert_eq!(pi_k(&c), DiffForm::basis(2, &[1], p("x0", 2)));
    }

    #[test]
    fn epsilon_then_pi() {
        let w = DiffForm::basis(3, &[1, 2], p("x0", 3));
        assert_eq!(pi_k(&epsilon_k(&w)), w.scale_cyclotomic(&CyclotomicScalar::from_int(4, 2)));
    }

    #[test]
    fn identities_on_random_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 2] {
            let pi = ConstantBivector::standard(n, 4);
            assert!(verify_delta_identities(&mut rng, &pi, 20, 3).passed());
            assert!(verify_hkr_maps(&mut rng, 2 * n, 4, 10, 2).passed());
            assert!(verify_b_d_pi_anticommute(&mut rng, &pi, 6, 3, 2).unwrap().passed());
        }
    }

    #[test]
    fn compatibility_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (check, fit) = verify_brylinski_compat(&mut rng, &ConstantBivector::standard(1, 4), 1, 10, 3).unwrap();
        assert!(check.passed(), "{check:?}");
        assert_eq!(fit.fitted.as_deref(), Some("2"));
        let (check, fit) = verify_brylinski_compat(&mut rng, &ConstantBivector::standard(2, 4), 2, 10, 2).unwrap();
        assert!(check.passed(), "{check:?} {fit:?}");
    }
}
