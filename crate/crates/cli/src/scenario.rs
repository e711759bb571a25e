//! Scenario files: TOML with sections for the group, bivector, algebra,
//! permutation action and truncation caps.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use starlab_core::fgroupoid::{cyclic_action, symmetric_group_action};
use starlab_core::homology::{FiniteDimAlgebra, PermutationAction};
use starlab_core::linalg::Matrix;
use starlab_core::polyalg::parse_scalar;
use starlab_core::star::ConstantBivector;
use starlab_core::symgroup::{generate_group, MatrixGroup};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub group: Option<GroupSpec>,
    pub bivector: Option<BivectorSpec>,
    pub algebra: Option<AlgebraSpec>,
    pub action: Option<ActionSpec>,
    #[serde(default)]
    pub caps: Caps,
}

/// A matrix group over `Q(zeta_order)` given by generators; entries use
/// the scalar syntax, e.g. `"-1"`, `"1/2"`, `"i"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub order: u32,
    pub dimension: usize,
    pub generators: Vec<Vec<Vec<String>>>,
    #[serde(default = "default_max_order")]
    pub max_order: usize,
}

fn default_max_order() -> usize {
    512
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BivectorSpec {
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    /// `matrix`, `group-algebra`, `truncated`, `ground-field` or `structure`.
    pub kind: String,
    #[serde(default = "one")]
    pub order: u32,
    pub n: Option<usize>,
    pub cyclic: Option<usize>,
    pub nvars: Option<usize>,
    pub cap: Option<u32>,
    pub labels: Option<Vec<String>>,
    pub constants: Option<Vec<Vec<Vec<String>>>>,
    pub unit: Option<Vec<String>>,
    pub automorphism: Option<Vec<Vec<String>>>,
}

fn one() -> u32 {
    1
}

/// Permutation action: `group` is `z<m>` or `s<n>`, `perm` the cycles of
/// the generator for cyclic groups.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub group: String,
    pub set: usize,
    #[serde(default)]
    pub perm: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    pub degree: Option<u32>,
    pub hbar: Option<u32>,
    pub k_max: Option<usize>,
    pub total_degree: Option<u32>,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("invalid scenario {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn matrix_group(&self) -> Result<MatrixGroup> {
        let Some(g) = &self.group else {
            bail!("the scenario has no [group] section");
        };
        let gens = g
            .generators
            .iter()
            .map(|rows| parse_matrix(rows, g.order))
            .collect::<Result<Vec<_>>>()?;
        if let Some(m) = gens.iter().find(|m| m.rows() != g.dimension || m.cols() != g.dimension) {
            bail!("generator of size {}x{} in dimension {}", m.rows(), m.cols(), g.dimension);
        }
        Ok(generate_group(g.order, g.dimension, &gens, g.max_order)?)
    }

    /// The configured bivector, or the standard one on `(x, p)`.
    pub fn bivector(&self, dimension: usize, order: u32) -> Result<ConstantBivector> {
        match &self.bivector {
            Some(b) => Ok(ConstantBivector::new(parse_matrix(&b.matrix, order)?)?),
            None if dimension % 2 == 0 => Ok(ConstantBivector::standard(dimension / 2, order)),
            None => bail!("odd dimension {dimension} needs an explicit [bivector]"),
        }
    }

    pub fn algebra(&self) -> Result<FiniteDimAlgebra> {
        let Some(spec) = &self.algebra else {
            bail!("the scenario has no [algebra] section");
        };
        build_algebra(spec)
    }

    pub fn permutation_action(&self) -> Result<PermutationAction> {
        let Some(a) = &self.action else {
            bail!("the scenario has no [action] section");
        };
        action_from_parts(&a.group, a.set, &a.perm)
    }
}

pub fn parse_matrix(rows: &[Vec<String>], order: u32) -> Result<Matrix> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_scalar(s, order)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(order, parsed)?)
}

fn need<T: Copy>(x: Option<T>, what: &str, kind: &str) -> Result<T> {
    x.with_context(|| format!("algebra kind {kind} needs `{what}`"))
}

pub fn build_algebra(spec: &AlgebraSpec) -> Result<FiniteDimAlgebra> {
    let order = spec.order;
    let kind = spec.kind.as_str();
    let a = match kind {
        "ground-field" => FiniteDimAlgebra::ground_field(order),
        "matrix" => FiniteDimAlgebra::matrix(need(spec.n, "n", kind)?, order),
        "group-algebra" => FiniteDimAlgebra::cyclic_group_algebra(need(spec.cyclic, "cyclic", kind)?, order),
        "truncated" => FiniteDimAlgebra::truncated_polynomial(need(spec.nvars, "nvars", kind)?, need(spec.cap, "cap", kind)?, order),
        "structure" => {
            let labels = spec.labels.clone().context("structure algebra needs `labels`")?;
            let constants = spec
                .constants
                .as_ref()
                .context("structure algebra needs `constants`")?
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|v| v.iter().map(|s| parse_scalar(s, order)).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let unit = spec
                .unit
                .as_ref()
                .context("structure algebra needs `unit`")?
                .iter()
                .map(|s| parse_scalar(s, order))
                .collect::<Result<Vec<_>, _>>()?;
            FiniteDimAlgebra::from_structure(order, labels, constants, unit)?
        }
        other => bail!("unknown algebra kind `{other}`"),
    };
    match &spec.automorphism {
        Some(rows) => Ok(a.with_automorphism(parse_matrix(rows, order)?)?),
        None => Ok(a),
    }
}

/// Short algebra descriptions: `matrix 2`, `group-algebra z2`,
/// `truncated 1 2`, `ground-field`.
pub fn parse_algebra_shorthand(text: &str) -> Result<AlgebraSpec> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let num = |i: usize| -> Result<usize> {
        words
            .get(i)
            .with_context(|| format!("`{text}` is missing an argument"))?
            .parse::<usize>()
            .with_context(|| format!("`{text}`: argument {i} is not a number"))
    };
    let mut spec = AlgebraSpec {
        kind: words.first().copied().unwrap_or("").to_string(),
        order: 1,
        n: None,
        cyclic: None,
        nvars: None,
        cap: None,
        labels: None,
        constants: None,
        unit: None,
        automorphism: None,
    };
    match spec.kind.as_str() {
        "ground-field" => {}
        "matrix" => spec.n = Some(num(1)?),
        "group-algebra" => {
            let g = words.get(1).context("group-algebra needs a group such as z2")?;
            spec.cyclic = Some(g.trim_start_matches('z').parse().with_context(|| format!("unknown group `{g}`"))?);
        }
        "truncated" => {
            spec.nvars = Some(num(1)?);
            spec.cap = Some(num(2)? as u32);
        }
        other => bail!("unknown algebra `{other}`"),
    }
    Ok(spec)
}

/// Parses `group=z2 set=2 perm=(0 1)`.
pub fn parse_action_shorthand(text: &str) -> Result<PermutationAction> {
    let mut group = None;
    let mut set = None;
    let mut perm = String::new();
    let mut current: Option<(String, String)> = None;
    let mut fields = Vec::new();
    for token in text.split_whitespace() {
        match token.split_once('=') {
            Some((key, value)) if !key.contains('(') => {
                fields.extend(current.take());
                current = Some((key.to_string(), value.to_string()));
            }
            _ => match &mut current {
                Some((_, value)) => {
                    value.push(' ');
                    value.push_str(token);
                }
                None => bail!("expected key=value at `{token}`"),
            },
        }
    }
    fields.extend(current);
    for (key, value) in fields {
        match key.as_str() {
            "group" => group = Some(value),
            "set" => set = Some(value.parse::<usize>().with_context(|| format!("set size `{value}` is not a number"))?),
            "perm" => perm = value,
            other => bail!("unknown action key `{other}`"),
        }
    }
    action_from_parts(&group.context("action needs group=")?, set.context("action needs set=")?, &perm)
}

/// Cycle notation `(0 1)(2 3)` on `n` points.
pub fn parse_cycles(text: &str, n: usize) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('(') else {
            bail!("expected `(` in cycle notation at `{rest}`");
        };
        let end = body.find(')').context("unclosed cycle")?;
        let points = body[..end]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().with_context(|| format!("bad point `{s}`")))
            .collect::<Result<Vec<_>>>()?;
        if let Some(&p) = points.iter().find(|&&p| p >= n) {
            bail!("point {p} is outside the set of size {n}");
        }
        for (i, &p) in points.iter().enumerate() {
            perm[p] = points[(i + 1) % points.len()];
        }
        rest = body[end + 1..].trim_start();
    }
    let mut sorted = perm.clone();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        bail!("`{text}` is not a permutation");
    }
    Ok(perm)
}

pub fn action_from_parts(group: &str, set: usize, perm: &str) -> Result<PermutationAction> {
    let group = group.trim().to_lowercase();
    if let Some(m) = group.strip_prefix('z') {
        let m: usize = m.parse().with_context(|| format!("unknown group `{group}`"))?;
        if m == 0 {
            bail!("cyclic group order must be positive");
        }
        let generator = parse_cycles(perm, set)?;
        let action = cyclic_action(m, &generator);
        action.validate().map_err(|_| anyhow::anyhow!("generator order does not divide {m}"))?;
        Ok(action)
    } else if let Some(n) = group.strip_prefix('s') {
        let n: usize = n.parse().with_context(|| format!("unknown group `{group}`"))?;
        if n != set {
            bail!("s{n} acts on a set of size {n}, not {set}");
        }
        Ok(symmetric_group_action(n))
    } else {
        bail!("unknown group `{group}`; use z<m> or s<n>")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_and_actions() {
        assert_eq!(parse_cycles("(0 1)", 3).unwrap(), vec![1, 0, 2]);
        assert_eq!(parse_cycles("(0 1 2)", 3).unwrap(), vec![1, 2, 0]);
        assert!(parse_cycles("(0 3)", 3).is_err());
        let a = parse_action_shorthand("group=z2 set=2 perm=(0 1)").unwrap();
        assert_eq!(a.action, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(parse_action_shorthand("group=s3 set=3").unwrap().group_table.len(), 6);
        assert!(parse_action_shorthand("group=z2 set=3 perm=(0 1 2)").is_err());
    }

    #[test]
    fn scenario_parsing() {
        let s = Scenario::parse(
            r#"
            name = "z2"
            [group]
            order = 4
            dimension = 2
            generators = [[["-1", "0"], ["0", "-1"]]]
            "#,
        )
        .unwrap();
        assert_eq!(s.matrix_group().unwrap().len(), 2);
        assert!(Scenario::parse("[group]\norder = ").is_err());
        assert!(Scenario::parse("bogus = 1").is_err());
    }

    #[test]
    fn algebra_shorthand() {
        assert_eq!(build_algebra(&parse_algebra_shorthand("matrix 2").unwrap()).unwrap().dim(), 4);
        assert_eq!(build_algebra(&parse_algebra_shorthand("truncated 1 2").unwrap()).unwrap().dim(), 3);
        assert_eq!(build_algebra(&parse_algebra_shorthand("group-algebra z3").unwrap()).unwrap().dim(), 3);
        assert!(parse_algebra_shorthand("tensor 2").is_err());
    }
}
