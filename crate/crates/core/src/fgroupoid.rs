//! Finite discrete groupoids: structure tables, Burghelea spaces, loops and
//! sectors, the inertia groupoid, convolution algebras, and the sector
//! decomposition of their Hochschild homology.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homology::{hh_dimensions, hochschild_b, Chain, FiniteDimAlgebra, PermutationAction};
use crate::linalg::{sparse_from_terms, sparse_rank};
use crate::report::Check;
use crate::scalar::CyclotomicScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("malformed tables: {0}")]
    Table(String),
    #[error("{axiom} fails at {location}")]
    Axiom { axiom: String, location: String },
}

fn axiom(axiom: &str, location: String) -> GroupoidError {
    GroupoidError::Axiom {
        axiom: axiom.into(),
        location,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// Serializable description of a groupoid. `composition` lists triples
/// `[g1, g2, g]` meaning `g1 g2 = g` (first `g2`, then `g1`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidTables {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    pub units: Vec<usize>,
    pub inverse: Vec<usize>,
    pub composition: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    tables: GroupoidTables,
    compose: Vec<Vec<Option<usize>>>,
}

impl FiniteGroupoid {
    /// Checks the category and inverse axioms; a violation names the cell.
    pub fn from_tables(tables: GroupoidTables) -> Result<Self, GroupoidError> {
        let (n0, n1) = (tables.objects.len(), tables.arrows.len());
        if tables.units.len() != n0 || tables.inverse.len() != n1 {
            return Err(GroupoidError::Table("unit or inverse table has the wrong length".into()));
        }
        if let Some(a) = tables.arrows.iter().find(|a| a.source >= n0 || a.target >= n0) {
            return Err(GroupoidError::Table(format!("arrow {} has an unknown endpoint", a.name)));
        }
        if tables.units.iter().chain(&tables.inverse).any(|&g| g >= n1) {
            return Err(GroupoidError::Table("unit or inverse refers to an unknown arrow".into()));
        }
        let mut compose = vec![vec![None; n1]; n1];
        for &[g1, g2, g] in &tables.composition {
            if g1 >= n1 || g2 >= n1 || g >= n1 {
                return Err(GroupoidError::Table(format!("composition entry [{g1}, {g2}, {g}] is out of range")));
            }
            if compose[g1][g2].replace(g).is_some() {
                return Err(GroupoidError::Table(format!("composition of ({g1}, {g2}) is given twice")));
            }
        }
        let out = FiniteGroupoid { tables, compose };
        out.check_axioms()?;
        Ok(out)
    }

    fn check_axioms(&self) -> Result<(), GroupoidError> {
        let n1 = self.num_arrows();
        for g1 in 0..n1 {
            for g2 in 0..n1 {
                let composable = self.source(g1) == self.target(g2);
                match (composable, self.compose[g1][g2]) {
                    (true, None) => return Err(axiom("totality", format!("({g1}, {g2})"))),
                    (false, Some(_)) => return Err(axiom("composability", format!("({g1}, {g2})"))),
                    (true, Some(g)) if self.source(g) != self.source(g2) || self.target(g) != self.target(g1) => {
                        return Err(axiom("endpoints of a composite", format!("({g1}, {g2})")))
                    }
                    _ => {}
                }
            }
        }
        for g1 in 0..n1 {
            for g2 in 0..n1 {
                let Some(a) = self.compose(g1, g2) else { continue };
                for g3 in 0..n1 {
                    let Some(b) = self.compose(g2, g3) else { continue };
                    if self.compose(a, g3) != self.compose(g1, b) {
                        return Err(axiom("associativity", format!("({g1}, {g2}, {g3})")));
                    }
                }
            }
        }
        for (x, &u) in self.tables.units.iter().enumerate() {
            if self.source(u) != x || self.target(u) != x {
                return Err(axiom("unit endpoints", format!("object {x}")));
            }
        }
        for g in 0..n1 {
            if self.compose(self.unit(self.target(g)), g) != Some(g) || self.compose(g, self.unit(self.source(g))) != Some(g) {
                return Err(axiom("unit law", format!("arrow {g}")));
            }
            let h = self.inverse(g);
            if self.compose(g, h) != Some(self.unit(self.target(g))) || self.compose(h, g) != Some(self.unit(self.source(g))) {
                return Err(axiom("inverse law", format!("arrow {g}")));
            }
        }
        Ok(())
    }

    pub fn tables(&self) -> &GroupoidTables {
        &self.tables
    }

    pub fn num_objects(&self) -> usize {
        self.tables.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.tables.arrows.len()
    }

    pub fn source(&self, g: usize) -> usize {
        self.tables.arrows[g].source
    }

    pub fn target(&self, g: usize) -> usize {
        self.tables.arrows[g].target
    }

    pub fn unit(&self, x: usize) -> usize {
        self.tables.units[x]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.tables.inverse[g]
    }

    pub fn name(&self, g: usize) -> &str {
        &self.tables.arrows[g].name
    }

    /// `g1 g2`, defined when `s(g1) = t(g2)`.
    pub fn compose(&self, g1: usize, g2: usize) -> Option<usize> {
        self.compose[g1][g2]
    }

    pub fn is_loop(&self, g: usize) -> bool {
        self.source(g) == self.target(g)
    }

    /// `g l g^{-1}` for a loop `l` at `s(g)`.
    pub fn conjugate(&self, g: usize, l: usize) -> Option<usize> {
        self.compose(g, l).and_then(|gl| self.compose(gl, self.inverse(g)))
    }
}

/// One-object groupoid of a group given by its multiplication table.
pub fn group_groupoid(table: &[Vec<usize>], identity: usize) -> Result<FiniteGroupoid, GroupoidError> {
    let action = PermutationAction {
        npoints: 1,
        group_table: table.to_vec(),
        identity,
        action: vec![vec![0]; table.len()],
    };
    transformation_groupoid(&action)
}

/// `G x| S` with arrows `(g, s): s -> g s`, at index `s |G| + g`.
pub fn transformation_groupoid(action: &PermutationAction) -> Result<FiniteGroupoid, GroupoidError> {
    action.validate().map_err(|e| GroupoidError::Table(e.to_string()))?;
    let ng = action.group_table.len();
    let idx = |s: usize, g: usize| s * ng + g;
    let inv = |g: usize| (0..ng).find(|&h| action.group_table[g][h] == action.identity).expect("group");
    let mut arrows = Vec::new();
    let mut inverse = Vec::new();
    for s in 0..action.npoints {
        for g in 0..ng {
            let t = action.action[g][s];
            arrows.push(ArrowSpec {
                name: format!("({g},{s})"),
                source: s,
                target: t,
            });
            inverse.push(idx(t, inv(g)));
        }
    }
    let mut composition = Vec::new();
    for s in 0..action.npoints {
        for g in 0..ng {
            let t = action.action[g][s];
            for h in 0..ng {
                composition.push([idx(t, h), idx(s, g), idx(s, action.group_table[h][g])]);
            }
        }
    }
    FiniteGroupoid::from_tables(GroupoidTables {
        objects: (0..action.npoints).map(|s| s.to_string()).collect(),
        arrows,
        units: (0..action.npoints).map(|s| idx(s, action.identity)).collect(),
        inverse,
        composition,
    })
}

pub fn disjoint_union(a: &FiniteGroupoid, b: &FiniteGroupoid) -> FiniteGroupoid {
    let (o, m) = (a.num_objects(), a.num_arrows());
    let mut t = a.tables.clone();
    t.objects.extend(b.tables.objects.iter().map(|x| format!("{x}'")));
    t.arrows.extend(b.tables.arrows.iter().map(|x| ArrowSpec {
        name: format!("{}'", x.name),
        source: x.source + o,
        target: x.target + o,
    }));
    t.units.extend(b.tables.units.iter().map(|u| u + m));
    t.inverse.extend(b.tables.inverse.iter().map(|u| u + m));
    t.composition.extend(b.tables.composition.iter().map(|[x, y, z]| [x + m, y + m, z + m]));
    FiniteGroupoid::from_tables(t).expect("disjoint union of groupoids")
}

/// `B^(k) = {(g_0, .., g_k) : s(g_i) = t(g_{i+1}), t(g_0) = s(g_k)}`.
pub fn burghelea_space(g: &FiniteGroupoid, k: usize) -> Vec<Vec<usize>> {
    fn extend(g: &FiniteGroupoid, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *cur.last().expect("nonempty");
        if cur.len() == k + 1 {
            if g.target(cur[0]) == g.source(last) {
                out.push(cur.clone());
            }
            return;
        }
        for h in 0..g.num_arrows() {
            if g.target(h) == g.source(last) {
                cur.push(h);
                extend(g, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    for g0 in 0..g.num_arrows() {
        extend(g, k, &mut vec![g0], &mut out);
    }
    out
}

pub fn loops(g: &FiniteGroupoid) -> Vec<usize> {
    (0..g.num_arrows()).filter(|&l| g.is_loop(l)).collect()
}

/// A conjugation orbit of loops.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sector {
    pub loops: Vec<usize>,
    pub representative: usize,
}

pub fn sectors(g: &FiniteGroupoid) -> Vec<Sector> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for l in loops(g) {
        if seen.contains(&l) {
            continue;
        }
        let orbit: BTreeSet<usize> = (0..g.num_arrows()).filter_map(|h| g.conjugate(h, l)).collect();
        seen.extend(orbit.iter().copied());
        out.push(Sector {
            loops: orbit.into_iter().collect(),
            representative: l,
        });
    }
    out
}

/// `B^(0) x| G`: objects are loops, arrows `(l, g)` with `s(g)` the base
/// of `l`, going to `g l g^{-1}`; `theta_l = (l, l)`.
#[derive(Clone, Debug)]
pub struct InertiaGroupoid {
    pub groupoid: FiniteGroupoid,
    pub loops: Vec<usize>,
    pub arrows: Vec<(usize, usize)>,
    pub theta: Vec<usize>,
}

pub fn inertia_groupoid(g: &FiniteGroupoid) -> InertiaGroupoid {
    let ls = loops(g);
    let obj: HashMap<usize, usize> = ls.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut arrows = Vec::new();
    for &l in &ls {
        for h in 0..g.num_arrows() {
            if g.source(h) == g.source(l) {
                arrows.push((l, h));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let target_loop = |(l, h): (usize, usize)| g.conjugate(h, l).expect("composable");
    let specs = arrows
        .iter()
        .map(|&(l, h)| ArrowSpec {
            name: format!("({},{})", g.name(l), g.name(h)),
            source: obj[&l],
            target: obj[&target_loop((l, h))],
        })
        .collect();
    let units = ls.iter().map(|&l| index[&(l, g.unit(g.source(l)))]).collect();
    let inverse = arrows.iter().map(|&(l, h)| index[&(target_loop((l, h)), g.inverse(h))]).collect();
    let mut composition = Vec::new();
    for &(l, h) in &arrows {
        let m = target_loop((l, h));
        for &(l2, k) in arrows.iter().filter(|a| a.0 == m) {
            let hk = g.compose(k, h).expect("composable");
            composition.push([index[&(l2, k)], index[&(l, h)], index[&(l, hk)]]);
        }
    }
    let groupoid = FiniteGroupoid::from_tables(GroupoidTables {
        objects: ls.iter().map(|&l| g.name(l).to_string()).collect(),
        arrows: specs,
        units,
        inverse,
        composition,
    })
    .expect("inertia groupoid satisfies the axioms");
    let theta = ls.iter().map(|&l| index[&(l, l)]).collect();
    InertiaGroupoid {
        groupoid,
        loops: ls,
        arrows,
        theta,
    }
}

impl InertiaGroupoid {
    /// `g theta_x = theta_y g` for every arrow `g: x -> y`, and every
    /// `theta_x` is a loop of finite order.
    pub fn theta_is_central(&self) -> bool {
        let g = &self.groupoid;
        (0..g.num_arrows()).all(|a| {
            let (x, y) = (g.source(a), g.target(a));
            g.is_loop(self.theta[x]) && g.compose(a, self.theta[x]) == g.compose(self.theta[y], a)
        }) && self.theta.iter().all(|&t| {
            let u = g.unit(g.source(t));
            let mut p = t;
            (0..=g.num_arrows()).any(|_| {
                p = g.compose(p, t).expect("loop");
                p == u || t == u
            })
        })
    }
}

/// Orbits of the objects under the arrows.
pub fn object_orbits(g: &FiniteGroupoid) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.num_objects()];
    let mut out = Vec::new();
    for x in 0..g.num_objects() {
        if seen[x] {
            continue;
        }
        let orbit: BTreeSet<usize> = (0..g.num_arrows()).filter(|&h| g.source(h) == x).map(|h| g.target(h)).collect();
        for &y in &orbit {
            seen[y] = true;
        }
        out.push(orbit.into_iter().collect());
    }
    out
}

/// Number of conjugacy classes of the isotropy group at `x`.
pub fn isotropy_class_count(g: &FiniteGroupoid, x: usize) -> usize {
    let iso: Vec<usize> = (0..g.num_arrows()).filter(|&h| g.source(h) == x && g.target(h) == x).collect();
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for &l in &iso {
        if seen.insert(l) {
            count += 1;
            seen.extend(iso.iter().filter_map(|&h| g.conjugate(h, l)));
        }
    }
    count
}

/// Functions on arrows with `e_{g1} e_{g2} = e_{g1 g2}` when composable.
pub fn convolution_algebra(g: &FiniteGroupoid) -> FiniteDimAlgebra {
    let n = g.num_arrows();
    let zero = CyclotomicScalar::zero(1);
    let one = CyclotomicScalar::one(1);
    let mut constants = vec![vec![vec![zero.clone(); n]; n]; n];
    for g1 in 0..n {
        for g2 in 0..n {
            if let Some(h) = g.compose(g1, g2) {
                constants[g1][g2][h] = one.clone();
            }
        }
    }
    let mut unit = vec![zero; n];
    for x in 0..g.num_objects() {
        unit[g.unit(x)] = one.clone();
    }
    let labels = (0..n).map(|a| g.name(a).to_string()).collect();
    FiniteDimAlgebra::from_structure(1, labels, constants, unit).expect("convolution algebras are associative and unital")
}

fn in_burghelea(g: &FiniteGroupoid, t: &[usize]) -> bool {
    t.windows(2).all(|w| g.source(w[0]) == g.target(w[1])) && g.target(t[0]) == g.source(t[t.len() - 1])
}

/// Restriction of a chain on the convolution algebra to `B^(k)`.
pub fn reduction_to_loops(g: &FiniteGroupoid, a: &FiniteDimAlgebra, c: &Chain) -> Chain {
    let terms = c.terms().into_iter().filter(|(t, _)| in_burghelea(g, t)).collect();
    Chain::from_terms(a, c.degree(), terms)
}

fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n.pow(k as u32 + 1))
        .map(|mut i| {
            let mut t = vec![0; k + 1];
            for slot in t.iter_mut().rev() {
                *slot = i % n;
                i /= n;
            }
            t
        })
        .collect()
}

/// `p b = b p` on every basis chain of degree `1..=k_max`.
pub fn verify_reduction_commutes(g: &FiniteGroupoid, a: &FiniteDimAlgebra, k_max: usize) -> Check {
    let mut check = Check::new("reduction-to-loops", "restriction to B^(k) commutes with b");
    for k in 1..=k_max {
        let bad: Vec<Vec<usize>> = all_tuples(g.num_arrows(), k)
            .into_par_iter()
            .filter(|t| {
                let c = Chain::basis(a, t);
                reduction_to_loops(g, a, &hochschild_b(a, &c)) != hochschild_b(a, &reduction_to_loops(g, a, &c))
            })
            .collect();
        check.samples += g.num_arrows().pow(k as u32 + 1);
        if let Some(t) = bad.first() {
            check.fail("tuple", format!("{t:?}"));
        }
    }
    check
}

/// Hochschild boundary on the loop complex `C(B^(.))`, restricted to chains
/// whose total product lies in `sector` when given.
fn loop_homology(g: &FiniteGroupoid, k_max: usize, sector: Option<&BTreeSet<usize>>) -> Vec<usize> {
    let product = |t: &[usize]| t.iter().skip(1).fold(t[0], |acc, &h| g.compose(acc, h).expect("composable"));
    let spaces: Vec<Vec<Vec<usize>>> = (0..=k_max + 1)
        .map(|k| {
            burghelea_space(g, k)
                .into_iter()
                .filter(|t| sector.is_none_or(|s| s.contains(&product(t))))
                .collect()
        })
        .collect();
    let ranks: Vec<usize> = (0..=k_max + 1)
        .map(|k| {
            if k == 0 {
                return 0;
            }
            let index: HashMap<&Vec<usize>, usize> = spaces[k - 1].iter().enumerate().map(|(i, t)| (t, i)).collect();
            let images = spaces[k].par_iter().map(|t| {
                let mut terms = Vec::new();
                for i in 0..=k {
                    let face: Vec<usize> = if i < k {
                        let mut f = t[..i].to_vec();
                        f.push(g.compose(t[i], t[i + 1]).expect("composable"));
                        f.extend_from_slice(&t[i + 2..]);
                        f
                    } else {
                        let mut f = vec![g.compose(t[k], t[0]).expect("composable")];
                        f.extend_from_slice(&t[1..k]);
                        f
                    };
                    terms.push((index[&face], CyclotomicScalar::from_int(1, if i % 2 == 1 { -1 } else { 1 })));
                }
                sparse_from_terms(terms)
            });
            sparse_rank(1, images.collect::<Vec<_>>())
        })
        .collect();
    (0..=k_max).map(|k| spaces[k].len() - ranks[k] - ranks[k + 1]).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SectorHomology {
    pub representative: String,
    pub loops: usize,
    pub hh: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SectorReport {
    pub objects: usize,
    pub arrows: usize,
    pub sectors: Vec<SectorHomology>,
    pub hh_convolution: Vec<usize>,
    pub hh_loops: Vec<usize>,
    pub isotropy_class_sum: usize,
}

/// Compares brute-force `HH_*` of the convolution algebra with the loop
/// complex split by sector and with the isotropy class count.
pub fn verify_sector_decomposition(g: &FiniteGroupoid, k_max: usize) -> (Vec<Check>, SectorReport) {
    let a = convolution_algebra(g);
    let secs = sectors(g);
    let hh_convolution = hh_dimensions(&a, k_max);
    let hh_loops = loop_homology(g, k_max, None);
    let sector_hh: Vec<SectorHomology> = secs
        .iter()
        .map(|s| SectorHomology {
            representative: g.name(s.representative).to_string(),
            loops: s.loops.len(),
            hh: loop_homology(g, k_max, Some(&s.loops.iter().copied().collect())),
        })
        .collect();
    let isotropy_class_sum: usize = object_orbits(g).iter().map(|o| isotropy_class_count(g, o[0])).sum();

    let mut count = Check::new("sector-count", "dim HH_0 = #sectors = sum over orbits of #Conj(isotropy)");
    let ok = hh_convolution[0] == secs.len() && secs.len() == isotropy_class_sum;
    count.record(ok, || {
        vec![
            ("hh0", hh_convolution[0].to_string()),
            ("sectors", secs.len().to_string()),
            ("isotropy_classes", isotropy_class_sum.to_string()),
        ]
    });
    count.set("hh0", hh_convolution[0]);
    count.set("sectors", secs.len());

    let mut split = Check::new("sector-decomposition", "HH_* of the loop complex splits over sectors");
    for k in 0..=k_max {
        let sum: usize = sector_hh.iter().map(|s| s.hh[k]).sum();
        let ok = sum == hh_loops[k] && hh_loops[k] == hh_convolution[k];
        split.record(ok, || {
            vec![
                ("degree", k.to_string()),
                ("sector_sum", sum.to_string()),
                ("loops", hh_loops[k].to_string()),
                ("convolution", hh_convolution[k].to_string()),
            ]
        });
    }

    let mut theta = Check::new("inertia-theta", "theta is central and elliptic on the inertia groupoid");
    theta.record(inertia_groupoid(g).theta_is_central(), Vec::<(String, String)>::new);

    let mut reduction = verify_reduction_commutes(g, &a, k_max.clamp(1, 2));
    reduction.set("hh0_isomorphism", hh_loops[0] == hh_convolution[0]);
    if hh_loops[0] != hh_convolution[0] {
        reduction.fail("hh0", format!("{} vs {}", hh_loops[0], hh_convolution[0]));
    }

    let report = SectorReport {
        objects: g.num_objects(),
        arrows: g.num_arrows(),
        sectors: sector_hh,
        hh_convolution,
        hh_loops,
        isotropy_class_sum,
    };
    (vec![count, split, theta, reduction], report)
}

/// The symmetric group acting on `{0, .., n-1}`, elements in lexicographic order.
pub fn symmetric_group_action(n: usize) -> PermutationAction {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    let mut elems = perms(n);
    elems.sort();
    let index: HashMap<Vec<usize>, usize> = elems.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let table = elems
        .iter()
        .map(|p| elems.iter().map(|q| index[&q.iter().map(|&i| p[i]).collect::<Vec<_>>()]).collect())
        .collect();
    PermutationAction {
        npoints: n,
        group_table: table,
        identity: 0,
        action: elems,
    }
}

/// `Z/m` acting on `npoints` points through the given permutation of a generator.
pub fn cyclic_action(m: usize, generator: &[usize]) -> PermutationAction {
    let n = generator.len();
    let mut action = vec![(0..n).collect::<Vec<_>>()];
    for k in 1..m {
        let prev: &Vec<usize> = &action[k - 1];
        action.push(prev.iter().map(|&s| generator[s]).collect());
    }
    PermutationAction {
        npoints: n,
        group_table: (0..m).map(|i| (0..m).map(|j| (i + j) % m).collect()).collect(),
        identity: 0,
        action,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_point() -> FiniteGroupoid {
        transformation_groupoid(&cyclic_action(2, &[0])).unwrap()
    }

    fn z2_swap() -> FiniteGroupoid {
        transformation_groupoid(&cyclic_action(2, &[1, 0])).unwrap()
    }

    fn s3() -> FiniteGroupoid {
        transformation_groupoid(&symmetric_group_action(3)).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(z2_swap().num_arrows(), 4);
        let mut t = z2_point().tables().clone();
        t.composition[3][2] = 1;
        assert!(matches!(FiniteGroupoid::from_tables(t), Err(GroupoidError::Axiom { .. })));
        let mut t = z2_point().tables().clone();
        t.inverse[1] = 0;
        assert!(FiniteGroupoid::from_tables(t).is_err());
    }

    #[test]
    fn loops_and_sectors() {
        assert_eq!(loops(&z2_point()).len(), 2);
        assert_eq!(sectors(&z2_point()).len(), 2);
        assert_eq!(loops(&z2_swap()).len(), 2);
        assert_eq!(sectors(&z2_swap()).len(), 1);
        assert_eq!(sectors(&s3()).len(), 2);
        assert_eq!(burghelea_space(&z2_swap(), 1).len(), 4);
    }

    #[test]
    fn inertia() {
        let ig = inertia_groupoid(&z2_point());
        assert_eq!(ig.groupoid.num_objects(), 2);
        assert_eq!(ig.groupoid.num_arrows(), 4);
        assert!(ig.theta_is_central());
        assert!(inertia_groupoid(&s3()).theta_is_central());
        let trivial = transformation_groupoid(&cyclic_action(1, &[0, 1, 2])).unwrap();
        assert_eq!(inertia_groupoid(&trivial).groupoid.num_arrows(), 3);
    }

    #[test]
    fn convolution_algebras() {
        let a = convolution_algebra(&z2_swap());
        assert_eq!(hh_dimensions(&a, 1), vec![1, 0]);
        assert_eq!(hh_dimensions(&convolution_algebra(&z2_point()), 0), vec![2]);
        let u = disjoint_union(&z2_point(), &z2_swap());
        assert_eq!(convolution_algebra(&u).dim(), 6);
        assert_eq!(hh_dimensions(&convolution_algebra(&u), 0), vec![3]);
    }

    #[test]
    fn sector_decomposition() {
        for (g, expect) in [(z2_point(), 2), (z2_swap(), 1), (s3(), 2)] {
            let (checks, report) = verify_sector_decomposition(&g, 1);
            for c in &checks {
                assert!(c.passed(), "{c:?}");
            }
            assert_eq!(report.hh_convolution[0], expect);
        }
    }
}
