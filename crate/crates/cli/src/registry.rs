//! The preset registry: named module constructors with JSON parameter
//! schemas, each emitting a ready-to-run problem file.
//!
//! Emitted files share one layout: the preset's group and module, a single
//! declared finite place `v_split` with trivial decomposition group, and
//! `S` carrying the all-cyclic symbolic tail — so `S` stands for every
//! place except `v_split`, and the complement is exactly that split place.
//! This is the worked norm-one configuration when the preset is
//! `norm_one_torus`.

use std::sync::Arc;

use anyhow::{anyhow, bail, Result};
use serde::Deserialize;
use serde_json::Value;

use glocsur_core::group::GroupHom;
use glocsur_core::presets as core_presets;
use glocsur_core::{FiniteGroup, GModule};

use crate::problem::{
    from_bigint_vec, GroupSpec, ModuleSpec, PlaceFileSpec, PlaceSetSpec, ProblemFile, RadicalSpec,
};

pub struct PresetInfo {
    pub name: &'static str,
    pub description: &'static str,
    pub params: &'static str,
}

pub fn list() -> Vec<PresetInfo> {
    vec![
        PresetInfo {
            name: "trivial_Z",
            description: "M = Z with trivial action over a cyclic group",
            params: r#"{"group_order": 2}"#,
        },
        PresetInfo {
            name: "zero",
            description: "M = 0 (every localization is surjective)",
            params: r#"{"group_order": 2}"#,
        },
        PresetInfo {
            name: "Z_mod_n_trivial",
            description: "M = Z/n with trivial action over a cyclic group",
            params: r#"{"n": 3, "group_order": 2}"#,
        },
        PresetInfo {
            name: "norm_one_torus",
            description: "augmentation lattice of a cyclic group (Z with negation for order 2)",
            params: r#"{"order": 2}"#,
        },
        PresetInfo {
            name: "induced_lattice",
            description: "regular representation Z[G] over a cyclic group",
            params: r#"{"group_order": 2}"#,
        },
        PresetInfo {
            name: "direct_sum",
            description: "direct sum of presets over one shared group",
            params: r#"{"parts": [{"name": "norm_one_torus", "params": {"order": 2}}, {"name": "trivial_Z", "params": {"group_order": 2}}]}"#,
        },
        PresetInfo {
            name: "twist_by_subgroup_action",
            description: "pull a cyclic-group preset back along a product projection",
            params: r#"{"base": {"name": "norm_one_torus", "params": {"order": 2}}, "factor_orders": [2, 2], "acting_factor": 0}"#,
        },
    ]
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CyclicParams {
    #[serde(default = "default_two")]
    group_order: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ZModNParams {
    n: u64,
    #[serde(default = "default_two")]
    group_order: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NormOneParams {
    #[serde(default = "default_two")]
    order: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PartSpec {
    name: String,
    #[serde(default)]
    params: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DirectSumParams {
    parts: Vec<PartSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TwistParams {
    base: PartSpec,
    factor_orders: [usize; 2],
    #[serde(default)]
    acting_factor: usize,
}

fn default_two() -> usize {
    2
}

fn parse_params<T: serde::de::DeserializeOwned>(params: &Value) -> Result<T> {
    let v = if params.is_null() {
        Value::Object(Default::default())
    } else {
        params.clone()
    };
    serde_json::from_value(v).map_err(|e| anyhow!("params: {}", e))
}

fn parse_params_required<T: serde::de::DeserializeOwned>(params: &Value) -> Result<T> {
    serde_json::from_value(params.clone()).map_err(|e| anyhow!("params: {}", e))
}

/// Builds the module for a preset name. The returned flag says whether the
/// emitted file should carry radical data spanning the full lattice (the
/// torus-like presets).
fn build_module(name: &str, params: &Value) -> Result<(GModule, bool)> {
    match name {
        "trivial_Z" => {
            let p: CyclicParams = parse_params(params)?;
            Ok((
                core_presets::trivial_z(cyclic(p.group_order)?),
                true,
            ))
        }
        "zero" => {
            let p: CyclicParams = parse_params(params)?;
            Ok((core_presets::zero_module(cyclic(p.group_order)?), false))
        }
        "Z_mod_n_trivial" => {
            let p: ZModNParams = parse_params_required(params)?;
            Ok((
                core_presets::z_mod_n_trivial(cyclic(p.group_order)?, p.n)
                    .map_err(|e| anyhow!("params: {}", e))?,
                false,
            ))
        }
        "norm_one_torus" => {
            let p: NormOneParams = parse_params(params)?;
            Ok((
                core_presets::norm_one_torus(p.order).map_err(|e| anyhow!("params: {}", e))?,
                true,
            ))
        }
        "induced_lattice" => {
            let p: CyclicParams = parse_params(params)?;
            Ok((
                core_presets::induced_lattice(cyclic(p.group_order)?)
                    .map_err(|e| anyhow!("params: {}", e))?,
                true,
            ))
        }
        "direct_sum" => {
            let p: DirectSumParams = parse_params_required(params)?;
            if p.parts.is_empty() {
                bail!("params.parts: need at least one part");
            }
            let mut acc: Option<GModule> = None;
            for part in &p.parts {
                let (m, _) = build_module(&part.name, &part.params)?;
                acc = Some(match acc {
                    None => m,
                    Some(prev) => prev
                        .direct_sum(&m)
                        .map_err(|_| anyhow!("params.parts: parts live over different groups"))?,
                });
            }
            Ok((acc.expect("nonempty"), false))
        }
        "twist_by_subgroup_action" => {
            let p: TwistParams = parse_params_required(params)?;
            if p.acting_factor > 1 {
                bail!("params.acting_factor: must be 0 or 1");
            }
            let (base, torus_like) = build_module(&p.base.name, &p.base.params)?;
            let a = cyclic(p.factor_orders[0])?;
            let b = cyclic(p.factor_orders[1])?;
            let product = FiniteGroup::direct_product(&a, &b);
            let acting = if p.acting_factor == 0 { &a } else { &b };
            if base.group().order() != acting.order() {
                bail!(
                    "params: the base preset's group has order {}, the acting factor {}",
                    base.group().order(),
                    acting.order()
                );
            }
            let phi = GroupHom::product_projection(product, &a, &b, p.acting_factor == 0)
                .map_err(|e| anyhow!("params: {}", e))?;
            Ok((
                core_presets::twist_by_subgroup_action(&base, &phi)
                    .map_err(|e| anyhow!("params: {}", e))?,
                torus_like,
            ))
        }
        other => bail!("unknown preset `{}`", other),
    }
}

fn cyclic(order: usize) -> Result<Arc<FiniteGroup>> {
    if order == 0 {
        bail!("params: group order must be positive");
    }
    Ok(FiniteGroup::cyclic(order))
}

/// Emits the demo problem file for a preset. Without parameters, the
/// documented example parameters apply.
pub fn emit(name: &str, params: &Value) -> Result<ProblemFile> {
    let example;
    let params = if params.is_null() {
        let info = list()
            .into_iter()
            .find(|p| p.name == name)
            .ok_or_else(|| anyhow!("unknown preset `{}`", name))?;
        example = serde_json::from_str(info.params).expect("schema snippets are valid json");
        &example
    } else {
        params
    };
    let (module, torus_like) = build_module(name, params)?;
    let radical = if torus_like {
        let n = module.carrier().ambient_rank();
        let basis = glocsur_core::IntMatrix::identity(n);
        Some(RadicalSpec {
            generators: (0..n).map(|j| from_bigint_vec(&basis.column(j))).collect(),
        })
    } else {
        None
    };
    Ok(ProblemFile {
        group: GroupSpec::from_group(module.group()),
        module: ModuleSpec::from_module(&module),
        places: vec![PlaceFileSpec {
            id: "v_split".into(),
            kind: "finite".into(),
            decomp: vec![0],
        }],
        s: PlaceSetSpec {
            explicit: vec![],
            symbolic_tail: Some(Value::String("all_cyclic".into())),
            tail_side: None,
        },
        radical,
    })
}
