//! The JSON problem formats and their conversion into validated library
//! types.
//!
//! Integers may exceed 64 bits; they are carried as JSON numbers when they
//! fit in an `i64` and as decimal strings otherwise, in both directions.
//! Matrices are row-major 2D arrays except for `relations`, which is a
//! list of relation columns (one vector per relation).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use glocsur_core::group::DEFAULT_ORDER_CAP;
use glocsur_core::localization::{PlaceKind, PlaceSpec, Side, TailSpec};
use glocsur_core::presets::RadicalData;
use glocsur_core::{
    FgAbGroup, FiniteGroup, GModule, Homomorphism, IntMatrix, LocalizationProblem,
    ShortExactSequence, SubgroupOfG,
};

/// An exact integer that serializes as a number when it fits and as a
/// decimal string beyond 64 bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Big(pub BigInt);

impl Serialize for Big {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct BigVisitor;

impl Visitor<'_> for BigVisitor {
    type Value = Big;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Big, E> {
        Ok(Big(BigInt::from(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Big, E> {
        Ok(Big(BigInt::from(v)))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Big, E> {
        v.parse::<BigInt>()
            .map(Big)
            .map_err(|_| E::custom(format!("`{}` is not a decimal integer", v)))
    }
}

impl<'de> Deserialize<'de> for Big {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Big, D::Error> {
        d.deserialize_any(BigVisitor)
    }
}

pub type JsonVector = Vec<Big>;
pub type JsonMatrix = Vec<JsonVector>;

pub fn to_bigint_vec(v: &[Big]) -> Vec<BigInt> {
    v.iter().map(|b| b.0.clone()).collect()
}

pub fn from_bigint_vec(v: &[BigInt]) -> JsonVector {
    v.iter().map(|b| Big(b.clone())).collect()
}

/// Row-major 2D array -> matrix, with a schema path for diagnostics.
pub fn matrix_from_rows(rows: &JsonMatrix, path: &str) -> Result<IntMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    if rows.iter().any(|row| row.len() != c) {
        bail!("{}: ragged matrix rows", path);
    }
    Ok(IntMatrix::from_fn(r, c, |i, j| rows[i][j].0.clone()))
}

pub fn matrix_to_rows(m: &IntMatrix) -> JsonMatrix {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| Big(m[(i, j)].clone())).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cayley: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perm_generators: Option<Vec<Vec<usize>>>,
}

/// Outcome of reading a group: the group itself plus, for a permutation
/// presentation, the generator words needed to expand generator-indexed
/// actions.
pub struct LoadedGroup {
    pub group: Arc<FiniteGroup>,
    pub words: Option<Vec<Vec<usize>>>,
}

impl GroupSpec {
    pub fn load(&self, order_cap: usize) -> Result<LoadedGroup> {
        match (&self.cayley, &self.perm_generators) {
            (Some(rows), None) => Ok(LoadedGroup {
                group: FiniteGroup::from_table(rows).map_err(|e| anyhow!("group.cayley: {}", e))?,
                words: None,
            }),
            (None, Some(gens)) => {
                let (group, words) = FiniteGroup::from_permutations(gens, order_cap)
                    .map_err(|e| anyhow!("group.perm_generators: {}", e))?;
                Ok(LoadedGroup {
                    group,
                    words: Some(words),
                })
            }
            _ => bail!("group: provide exactly one of `cayley` or `perm_generators`"),
        }
    }

    pub fn from_group(group: &FiniteGroup) -> Self {
        GroupSpec {
            cayley: Some(group.table_rows()),
            perm_generators: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub ambient_rank: usize,
    /// One column per relation.
    pub relations: JsonMatrix,
    pub action: ActionSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionSpec {
    /// Map from element index (as a string key) to a row-major matrix.
    PerElement(BTreeMap<String, JsonMatrix>),
    /// Matrices for the permutation generators, expanded via the closure
    /// words; only valid together with `perm_generators`.
    Generators { generators: Vec<JsonMatrix> },
}

impl ModuleSpec {
    pub fn load(&self, loaded: &LoadedGroup, path: &str) -> Result<GModule> {
        let n = self.ambient_rank;
        for (k, col) in self.relations.iter().enumerate() {
            if col.len() != n {
                bail!(
                    "{}.relations[{}]: column has length {}, expected {}",
                    path,
                    k,
                    col.len(),
                    n
                );
            }
        }
        let cols: Vec<Vec<BigInt>> = self.relations.iter().map(|c| to_bigint_vec(c)).collect();
        let carrier = FgAbGroup::new(n, IntMatrix::from_columns(n, &cols));
        match &self.action {
            ActionSpec::PerElement(map) => {
                let order = loaded.group.order();
                let mut action = Vec::with_capacity(order);
                for g in 0..order {
                    let key = g.to_string();
                    let rows = map.get(&key).ok_or_else(|| {
                        anyhow!("{}.action: missing matrix for element {}", path, g)
                    })?;
                    let m = matrix_from_rows(rows, &format!("{}.action.{}", path, g))?;
                    action.push(m);
                }
                if map.len() != order {
                    bail!(
                        "{}.action: {} matrices given, the group has order {}",
                        path,
                        map.len(),
                        order
                    );
                }
                GModule::new(loaded.group.clone(), carrier, action)
                    .map_err(|e| anyhow!("{}.action: {}", path, e))
            }
            ActionSpec::Generators { generators } => {
                let words = loaded.words.as_ref().ok_or_else(|| {
                    anyhow!(
                        "{}.action: generator-indexed actions need `perm_generators`",
                        path
                    )
                })?;
                let mats: Result<Vec<IntMatrix>> = generators
                    .iter()
                    .enumerate()
                    .map(|(k, rows)| {
                        matrix_from_rows(rows, &format!("{}.action.generators[{}]", path, k))
                    })
                    .collect();
                GModule::from_generator_actions(loaded.group.clone(), words, carrier, &mats?)
                    .map_err(|e| anyhow!("{}.action: {}", path, e))
            }
        }
    }

    pub fn from_module(m: &GModule) -> Self {
        let mut map = BTreeMap::new();
        for g in m.group().elements() {
            map.insert(g.to_string(), matrix_to_rows(m.action(g)));
        }
        let rel = m.carrier().relations();
        let relations = (0..rel.cols())
            .map(|j| from_bigint_vec(&rel.column(j)))
            .collect();
        ModuleSpec {
            ambient_rank: m.carrier().ambient_rank(),
            relations,
            action: ActionSpec::PerElement(map),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaceFileSpec {
    pub id: String,
    pub kind: String,
    pub decomp: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaceSetSpec {
    pub explicit: Vec<String>,
    #[serde(default)]
    pub symbolic_tail: Option<serde_json::Value>,
    /// Which side the tail models; defaults to S (the tail then stands for
    /// all unlisted places of S).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_side: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub group: GroupSpec,
    pub module: ModuleSpec,
    pub places: Vec<PlaceFileSpec>,
    #[serde(rename = "S")]
    pub s: PlaceSetSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radical: Option<RadicalSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadicalSpec {
    pub generators: JsonMatrix,
}

pub struct LoadedProblem {
    pub problem: LocalizationProblem,
    pub radical: Option<RadicalData>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("problem file does not match the schema")
    }

    pub fn load(&self, order_cap: usize) -> Result<LoadedProblem> {
        let loaded = self.group.load(order_cap)?;
        let module = self.module.load(&loaded, "module")?;
        let mut places = Vec::new();
        for (k, p) in self.places.iter().enumerate() {
            let kind = match p.kind.as_str() {
                "finite" => PlaceKind::Finite,
                "real" => PlaceKind::Real,
                "complex" => PlaceKind::Complex,
                other => bail!(
                    "places[{}].kind: `{}` is not one of finite/real/complex",
                    k,
                    other
                ),
            };
            let decomp = SubgroupOfG::new(loaded.group.clone(), p.decomp.clone())
                .map_err(|e| anyhow!("places[{}].decomp: {}", k, e))?;
            places.push(
                PlaceSpec::new(p.id.clone(), kind, decomp)
                    .map_err(|e| anyhow!("places[{}]: {}", k, e))?,
            );
        }
        let side = match self.s.tail_side.as_deref() {
            None | Some("S") => Side::S,
            Some("complement") => Side::Complement,
            Some(other) => bail!("S.tail_side: `{}` is not `S` or `complement`", other),
        };
        let tail = match &self.s.symbolic_tail {
            None | Some(serde_json::Value::Null) => None,
            Some(serde_json::Value::String(s)) if s == "all_cyclic" => {
                Some(TailSpec::all_cyclic(&loaded.group, side))
            }
            Some(serde_json::Value::Array(classes)) => {
                let mut list = Vec::new();
                for (k, c) in classes.iter().enumerate() {
                    let elements: Vec<usize> = serde_json::from_value(c.clone())
                        .with_context(|| format!("S.symbolic_tail[{}]", k))?;
                    list.push(
                        SubgroupOfG::new(loaded.group.clone(), elements)
                            .map_err(|e| anyhow!("S.symbolic_tail[{}]: {}", k, e))?,
                    );
                }
                Some(TailSpec { side, classes: list })
            }
            Some(other) => bail!(
                "S.symbolic_tail: expected \"all_cyclic\", a list of subgroups, or null, got {}",
                other
            ),
        };
        let radical = match &self.radical {
            None => None,
            Some(spec) => {
                let vectors: Vec<Vec<BigInt>> =
                    spec.generators.iter().map(|v| to_bigint_vec(v)).collect();
                Some(
                    RadicalData::new(module.clone(), &vectors)
                        .map_err(|e| anyhow!("radical: {}", e))?,
                )
            }
        };
        let problem = LocalizationProblem::new(
            module,
            places,
            self.s.explicit.clone(),
            tail,
        )
        .map_err(|e| anyhow!("S: {}", e))?;
        Ok(LoadedProblem { problem, radical })
    }
}

/// Input for the six-term command: a short exact sequence of modules.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceFile {
    pub group: GroupSpec,
    pub b1: ModuleSpec,
    pub b2: ModuleSpec,
    pub b3: ModuleSpec,
    /// Row-major matrix of the injection, `b2.ambient x b1.ambient`.
    pub i: JsonMatrix,
    /// Row-major matrix of the surjection, `b3.ambient x b2.ambient`.
    pub j: JsonMatrix,
}

impl SequenceFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("sequence file does not match the schema")
    }

    pub fn load(&self, order_cap: usize) -> Result<ShortExactSequence> {
        let loaded = self.group.load(order_cap)?;
        let b1 = self.b1.load(&loaded, "b1")?;
        let b2 = self.b2.load(&loaded, "b2")?;
        let b3 = self.b3.load(&loaded, "b3")?;
        let i_mat = matrix_from_rows(&self.i, "i")?;
        let j_mat = matrix_from_rows(&self.j, "j")?;
        let i = Homomorphism::new(b1.carrier().clone(), b2.carrier().clone(), i_mat)
            .map_err(|e| anyhow!("i: {}", e))?;
        let j = Homomorphism::new(b2.carrier().clone(), b3.carrier().clone(), j_mat)
            .map_err(|e| anyhow!("j: {}", e))?;
        ShortExactSequence::new(b1, b2, b3, i, j).map_err(|e| anyhow!("sequence: {}", e))
    }
}

pub fn default_order_cap() -> usize {
    DEFAULT_ORDER_CAP
}
