//! Machine- and human-readable reports. The machine form is JSON that
//! parses back into the same value (round-trip tested); identical inputs
//! and flags produce byte-identical documents, so wall-clock time appears
//! only in the text rendering.

use serde::{Deserialize, Serialize};

use glocsur_core::selftest::SelftestReport;
use glocsur_core::sixterm::{ExactnessReport, SixTermSequence};
use glocsur_core::{Subgroup, Verdict};

use crate::problem::{from_bigint_vec, matrix_to_rows, Big, JsonMatrix, JsonVector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case", deny_unknown_fields)]
pub enum Report {
    Check(CheckReport),
    Sixterm(SixtermReport),
    Selftest(SelftestOut),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupOut {
    /// Canonical form of the subgroup as an abstract group, e.g. "Z/2".
    pub canonical: String,
    /// Columns of the saturated Hermite basis (ambient coordinates).
    pub basis: Vec<JsonVector>,
}

impl SubgroupOut {
    pub fn from_subgroup(s: &Subgroup) -> Self {
        let h = &s.saturated().h;
        SubgroupOut {
            canonical: s.canonical_form().to_string(),
            basis: (0..h.cols())
                .map(|j| from_bigint_vec(&h.column(j)))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstructionOut {
    pub canonical: String,
    pub invariant_factors: Vec<Big>,
    pub generator_lifts: Vec<JsonVector>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaceImageOut {
    pub id: String,
    pub image: SubgroupOut,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadicalPredictionOut {
    pub place: String,
    pub condition_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub surjective: bool,
    pub obstruction: ObstructionOut,
    pub im_sigma_s: SubgroupOut,
    pub im_sigma_complement: SubgroupOut,
    pub per_place: Vec<PlaceImageOut>,
    /// Present when the problem file carried radical data: the
    /// automorphism-image condition per finite place outside S.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radical_predictions: Option<Vec<RadicalPredictionOut>>,
}

impl CheckReport {
    pub fn from_verdict(verdict: &Verdict) -> Self {
        CheckReport {
            surjective: verdict.surjective,
            obstruction: ObstructionOut {
                canonical: verdict.obstruction.canonical.to_string(),
                invariant_factors: verdict
                    .obstruction
                    .canonical
                    .invariant_factors
                    .iter()
                    .map(|d| Big(d.clone()))
                    .collect(),
                generator_lifts: verdict
                    .obstruction
                    .generator_lifts
                    .iter()
                    .map(|v| from_bigint_vec(v))
                    .collect(),
            },
            im_sigma_s: SubgroupOut::from_subgroup(&verdict.im_sigma_s),
            im_sigma_complement: SubgroupOut::from_subgroup(&verdict.im_sigma_comp),
            per_place: verdict
                .per_place
                .iter()
                .map(|(id, s)| PlaceImageOut {
                    id: id.clone(),
                    image: SubgroupOut::from_subgroup(s),
                })
                .collect(),
            radical_predictions: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeOut {
    pub node: String,
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<JsonVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactnessOut {
    pub all_exact: bool,
    pub torsion_bound: Big,
    pub nodes: Vec<NodeOut>,
}

impl ExactnessOut {
    pub fn from_report(r: &ExactnessReport) -> Self {
        ExactnessOut {
            all_exact: r.all_exact(),
            torsion_bound: Big(r.torsion_bound.clone()),
            nodes: r
                .nodes
                .iter()
                .map(|n| NodeOut {
                    node: n.node.to_string(),
                    exact: n.exact,
                    witness_kind: n.witness.as_ref().map(|(k, _)| format!("{:?}", k)),
                    witness: n.witness.as_ref().map(|(_, v)| from_bigint_vec(v)),
                    note: n.note.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SixtermReport {
    /// Invariant factors of the three torsion parts.
    pub torsion_orders: Vec<Vec<Big>>,
    /// Ranks of the three divisible pieces.
    pub tensor_ranks: Vec<usize>,
    /// The map on torsion parts induced by the injection, in canonical
    /// torsion coordinates.
    pub map_i_torsion: JsonMatrix,
    pub map_j_torsion: JsonMatrix,
    /// Connecting values, one row of `p/q` strings per torsion generator
    /// of the third module's coinvariants.
    pub delta: Vec<Vec<String>>,
    pub map_i_tensor: JsonMatrix,
    pub map_j_tensor: JsonMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exactness: Option<ExactnessOut>,
}

impl SixtermReport {
    pub fn from_six_term(st: &SixTermSequence, exactness: Option<&ExactnessReport>) -> Self {
        SixtermReport {
            torsion_orders: st
                .torsion_orders
                .iter()
                .map(|o| o.iter().map(|d| Big(d.clone())).collect())
                .collect(),
            tensor_ranks: st.tensors.iter().map(|t| t.rank()).collect(),
            map_i_torsion: matrix_to_rows(&st.map_i_torsion),
            map_j_torsion: matrix_to_rows(&st.map_j_torsion),
            delta: st
                .delta
                .iter()
                .map(|v| v.coords.iter().map(|c| c.to_string()).collect())
                .collect(),
            map_i_tensor: matrix_to_rows(&st.map_i_tensor),
            map_j_tensor: matrix_to_rows(&st.map_j_tensor),
            exactness: exactness.map(ExactnessOut::from_report),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteOut {
    pub name: String,
    pub passed: u32,
    pub failed: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelftestOut {
    pub seed: u64,
    pub scale: u32,
    pub all_passed: bool,
    pub suites: Vec<SuiteOut>,
}

impl SelftestOut {
    pub fn from_report(seed: u64, scale: u32, r: &SelftestReport) -> Self {
        SelftestOut {
            seed,
            scale,
            all_passed: r.all_passed(),
            suites: r
                .suites
                .iter()
                .map(|s| SuiteOut {
                    name: s.name.to_string(),
                    passed: s.passed,
                    failed: s.failed,
                    failures: s.failures.clone(),
                })
                .collect(),
        }
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> anyhow::Result<Report> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_text(&self, wall_ms: u128) -> String {
        let mut out = String::new();
        match self {
            Report::Check(r) => {
                out.push_str(&format!(
                    "verdict: {}\n",
                    if r.surjective {
                        "surjective"
                    } else {
                        "NOT surjective"
                    }
                ));
                out.push_str(&format!("obstruction: {}\n", r.obstruction.canonical));
                if !r.obstruction.generator_lifts.is_empty() {
                    out.push_str(&format!(
                        "obstruction generator lifts: {}\n",
                        vectors_to_text(&r.obstruction.generator_lifts)
                    ));
                }
                out.push_str(&format!("im Sigma_S: {}\n", r.im_sigma_s.canonical));
                out.push_str(&format!(
                    "im Sigma_S^c: {}\n",
                    r.im_sigma_complement.canonical
                ));
                out.push_str("per-place images:\n");
                for p in &r.per_place {
                    out.push_str(&format!("  {:<12} {}\n", p.id, p.image.canonical));
                }
                if let Some(preds) = &r.radical_predictions {
                    out.push_str("radical condition at finite complement places:\n");
                    for p in preds {
                        out.push_str(&format!("  {:<12} {}\n", p.place, p.condition_holds));
                    }
                }
            }
            Report::Sixterm(r) => {
                out.push_str(&format!(
                    "torsion parts: {}\n",
                    r.torsion_orders
                        .iter()
                        .map(|o| orders_to_text(o))
                        .collect::<Vec<_>>()
                        .join("  ->  ")
                ));
                out.push_str(&format!(
                    "tensor ranks: {:?}\n",
                    r.tensor_ranks
                ));
                out.push_str(&format!("delta:\n{}", delta_to_text(&r.delta)));
                if let Some(e) = &r.exactness {
                    out.push_str(&format!(
                        "exactness: {} (torsion bound {})\n",
                        if e.all_exact { "exact at all four interior nodes" } else { "INEXACT" },
                        e.torsion_bound.0
                    ));
                    for n in &e.nodes {
                        out.push_str(&format!(
                            "  {:<12} {}{}\n",
                            n.node,
                            if n.exact { "exact" } else { "INEXACT" },
                            match (&n.witness, &n.note) {
                                (Some(w), _) => format!(
                                    " witness {:?} ({})",
                                    w.iter().map(|b| b.0.to_string()).collect::<Vec<_>>(),
                                    n.witness_kind.as_deref().unwrap_or("")
                                ),
                                (None, Some(note)) => format!(" ({})", note),
                                _ => String::new(),
                            }
                        ));
                    }
                }
            }
            Report::Selftest(r) => {
                out.push_str(&format!(
                    "selftest seed={} scale={}: {}\n",
                    r.seed,
                    r.scale,
                    if r.all_passed { "all suites passed" } else { "FAILURES" }
                ));
                for s in &r.suites {
                    out.push_str(&format!(
                        "  {:<26} passed={:<6} failed={}\n",
                        s.name, s.passed, s.failed
                    ));
                    for f in &s.failures {
                        out.push_str(&format!("    failure: {}\n", f));
                    }
                }
            }
        }
        out.push_str(&format!("wall time: {} ms\n", wall_ms));
        out
    }
}

fn vectors_to_text(vs: &[JsonVector]) -> String {
    vs.iter()
        .map(|v| {
            format!(
                "({})",
                v.iter()
                    .map(|b| b.0.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn orders_to_text(orders: &[Big]) -> String {
    if orders.is_empty() {
        "0".to_string()
    } else {
        orders
            .iter()
            .map(|d| format!("Z/{}", d.0))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn delta_to_text(delta: &[Vec<String>]) -> String {
    if delta.is_empty() {
        return "  (no torsion generators)\n".to_string();
    }
    delta
        .iter()
        .enumerate()
        .map(|(k, row)| format!("  generator {} -> [{}]\n", k, row.join(", ")))
        .collect()
}
