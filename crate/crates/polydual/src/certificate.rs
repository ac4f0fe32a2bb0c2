//! JSON certificate files.
//!
//! A certificate embeds the searched coordinates as exact `p/q` strings, so
//! `check-cert` can re-verify it from the file alone. Everything except the
//! `timing` object is a deterministic function of the inputs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use polydual_core::search::{check_certificate, PruneReason, Realization};
use polydual_core::theorem::{
    incidence_bound, pigeonhole_min, BipyramidCheck, BoundReport, PartitionCheck, SearchOutcome,
    TheoremReport,
};
use polydual_core::{IsoWitness, QVector, Rational, SearchCertificate, SearchMode, VPolytope};

pub const TOOL: &str = "polydual";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// The polytope the search ran on.
    pub polytope: PolytopeData,
    pub realization_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<TheoremRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notices: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeData {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
}

impl PolytopeData {
    pub fn from_polytope(p: &VPolytope) -> Self {
        PolytopeData {
            dim: p.dim(),
            vertices: p.vertices().iter().map(|v| v.iter().map(ToString::to_string).collect()).collect(),
        }
    }

    pub fn to_polytope(&self) -> Result<VPolytope, CertError> {
        let points = self
            .vertices
            .iter()
            .map(|v| {
                if v.len() != self.dim {
                    return Err(CertError::Malformed(format!("vertex with {} coordinates", v.len())));
                }
                v.iter()
                    .map(|c| c.parse::<Rational>().map_err(|e| CertError::Malformed(e.to_string())))
                    .collect::<Result<Vec<_>, _>>()
                    .map(QVector::new)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let p = VPolytope::new(points).map_err(|e| CertError::Malformed(e.to_string()))?;
        if p.num_vertices() != self.vertices.len() {
            return Err(CertError::Malformed("listed points are not all vertices".into()));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub mode: String,
    pub realization: RealizationRecord,
    pub vertex_count: usize,
    pub subset_size: usize,
    pub total_subsets: u128,
    pub target_fvector: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iso: Option<IsoRecord>,
    pub subsets_examined: u64,
    pub pruned_by: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RealizationRecord {
    Original,
    Perturbed { seed: u64, denominator_bound: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoRecord {
    pub vertex_map: Vec<usize>,
    pub facet_map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremRecord {
    pub ngon: usize,
    pub cube_dim: usize,
    pub bounds: BoundRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bipyramid: Option<BipyramidRecord>,
    /// `confirmed`, `no_claim`, `budget_exceeded` or `contradicted`.
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub n: u64,
    pub d: u32,
    pub d_prime: u64,
    pub ceiling_term: u64,
    pub bound: i64,
    pub max_incidence: u64,
    pub hypothesis_ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionRecord {
    pub ok: bool,
    pub parts: usize,
    pub separating_planes: Vec<Option<PlaneRecord>>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneRecord {
    pub normal: Vec<String>,
    pub offset: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BipyramidRecord {
    pub equivalent: bool,
    pub dual_vertices: usize,
    pub expected_vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
    pub jobs: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum CertError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("certificate rejected: {0}")]
    Rejected(String),
}

impl SearchRecord {
    pub fn from_certificate(c: &SearchCertificate) -> Self {
        SearchRecord {
            mode: match c.mode {
                SearchMode::Witness => "witness",
                SearchMode::Exhausted => "exhausted",
            }
            .into(),
            realization: match c.realization {
                Realization::Original => RealizationRecord::Original,
                Realization::Perturbed { seed, denominator_bound } => {
                    RealizationRecord::Perturbed { seed, denominator_bound }
                }
            },
            vertex_count: c.vertex_count,
            subset_size: c.subset_size,
            total_subsets: c.total_subsets,
            target_fvector: c.target_fvector.clone(),
            subset: c.subset.clone(),
            iso: c.iso.as_ref().map(|w| IsoRecord { vertex_map: w.vertex_map.clone(), facet_map: w.facet_map.clone() }),
            subsets_examined: c.subsets_examined,
            pruned_by: c.pruned_by.iter().map(|(r, &n)| (r.as_str().to_string(), n)).collect(),
        }
    }

    pub fn to_certificate(&self, hash: [u8; 32]) -> Result<SearchCertificate, CertError> {
        let mode = match self.mode.as_str() {
            "witness" => SearchMode::Witness,
            "exhausted" => SearchMode::Exhausted,
            other => return Err(CertError::Malformed(format!("unknown mode {other:?}"))),
        };
        let pruned_by = self
            .pruned_by
            .iter()
            .map(|(k, &n)| {
                PruneReason::from_name(k)
                    .map(|r| (r, n))
                    .ok_or_else(|| CertError::Malformed(format!("unknown prune reason {k:?}")))
            })
            .collect::<Result<_, _>>()?;
        Ok(SearchCertificate {
            mode,
            vertex_count: self.vertex_count,
            subset_size: self.subset_size,
            total_subsets: self.total_subsets,
            target_fvector: self.target_fvector.clone(),
            subset: self.subset.clone(),
            iso: self
                .iso
                .as_ref()
                .map(|w| IsoWitness { vertex_map: w.vertex_map.clone(), facet_map: w.facet_map.clone() }),
            subsets_examined: self.subsets_examined,
            pruned_by,
            realization_hash: hash,
            realization: match self.realization {
                RealizationRecord::Original => Realization::Original,
                RealizationRecord::Perturbed { seed, denominator_bound } => {
                    Realization::Perturbed { seed, denominator_bound }
                }
            },
        })
    }
}

impl BoundRecord {
    pub fn from_report(r: &BoundReport) -> Self {
        BoundRecord {
            n: r.n,
            d: r.d,
            d_prime: r.d_prime,
            ceiling_term: r.ceiling_term,
            bound: r.bound,
            max_incidence: r.max_incidence,
            hypothesis_ok: r.hypothesis_ok,
            reason: r.reason.map(str::to_string),
        }
    }
}

impl PartitionRecord {
    pub fn from_check(c: &PartitionCheck) -> Self {
        PartitionRecord {
            ok: c.ok,
            parts: c.parts,
            separating_planes: c
                .separating_planes
                .iter()
                .map(|p| {
                    p.as_ref().map(|h| PlaneRecord {
                        normal: h.normal().iter().map(ToString::to_string).collect(),
                        offset: h.offset().to_string(),
                    })
                })
                .collect(),
            diagnostics: c.diagnostics.clone(),
        }
    }
}

impl BipyramidRecord {
    pub fn from_check(c: &BipyramidCheck) -> Self {
        BipyramidRecord {
            equivalent: c.equivalent,
            dual_vertices: c.dual_vertices,
            expected_vertices: c.expected_vertices,
        }
    }
}

pub fn hash_hex(hash: &[u8; 32]) -> String {
    hex::encode(hash)
}

fn parse_hash(s: &str) -> Result<[u8; 32], CertError> {
    let bytes = hex::decode(s).map_err(|e| CertError::Malformed(format!("realization hash: {e}")))?;
    bytes
        .try_into()
        .map_err(|_| CertError::Malformed("realization hash must be 32 bytes".into()))
}

impl CertificateFile {
    fn new(command: &str, polytope: &VPolytope, hash: [u8; 32]) -> Self {
        CertificateFile {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            polytope: PolytopeData::from_polytope(polytope),
            realization_hash: hash_hex(&hash),
            search: None,
            theorem: None,
            notices: Vec::new(),
            timing: None,
        }
    }

    pub fn for_search(polytope: &VPolytope, cert: &SearchCertificate) -> Self {
        let mut file = CertificateFile::new("find-dual-subset", polytope, cert.realization_hash);
        file.search = Some(SearchRecord::from_certificate(cert));
        file
    }

    /// `polytope` is the product `Q` when the hypothesis holds, else the
    /// base polygon.
    pub fn for_theorem(ngon: usize, polytope: &VPolytope, report: &TheoremReport) -> Self {
        let hash = polydual_core::search::realization_hash(polytope.vertices());
        let mut file = CertificateFile::new("verify-theorem", polytope, hash);
        let verdict = if !report.instance.hypothesis_ok() {
            file.notices.push("hypothesis fails; the theorem makes no claim".into());
            "no_claim"
        } else {
            match &report.search {
                SearchOutcome::BudgetExceeded { needed, budget } => {
                    file.notices.push(format!("search skipped: {needed} subsets exceed budget {budget}"));
                    "budget_exceeded"
                }
                _ if report.prediction_confirmed() => "confirmed",
                _ => "contradicted",
            }
        };
        if let SearchOutcome::Completed(c) = &report.search {
            file.search = Some(SearchRecord::from_certificate(c));
        }
        file.theorem = Some(TheoremRecord {
            ngon,
            cube_dim: report.instance.d,
            bounds: BoundRecord::from_report(&report.instance.bounds),
            partition: report.partition.as_ref().map(PartitionRecord::from_check),
            bipyramid: report.bipyramid.as_ref().map(BipyramidRecord::from_check),
            verdict: verdict.into(),
        });
        file
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CertError> {
        serde_json::from_str(text).map_err(|e| CertError::Malformed(e.to_string()))
    }

    /// Re-verifies the file without searching: the coordinates hash to the
    /// recorded value, the search record passes the core certificate check,
    /// and any recorded bound arithmetic is recomputed.
    pub fn check(&self) -> Result<(), CertError> {
        let polytope = self.polytope.to_polytope()?;
        let hash = parse_hash(&self.realization_hash)?;
        if polydual_core::search::realization_hash(polytope.vertices()) != hash {
            return Err(CertError::Rejected("realization hash does not match the coordinates".into()));
        }
        if let Some(search) = &self.search {
            let cert = search.to_certificate(hash)?;
            check_certificate(&polytope, &cert).map_err(|e| CertError::Rejected(e.to_string()))?;
        }
        if let Some(t) = &self.theorem {
            let b = &t.bounds;
            let bound = incidence_bound(b.n, b.d, b.d_prime).map_err(|e| CertError::Rejected(e.to_string()))?;
            let ceiling = pigeonhole_min(b.n + 2 * u64::from(b.d), 1u64 << b.d)
                .map_err(|e| CertError::Rejected(e.to_string()))?;
            if bound != b.bound || ceiling != b.ceiling_term {
                return Err(CertError::Rejected("bound arithmetic does not recompute".into()));
            }
            let ok = bound >= 0 && b.max_incidence <= bound as u64;
            if ok != b.hypothesis_ok {
                return Err(CertError::Rejected("hypothesis flag inconsistent with bound".into()));
            }
            if t.verdict == "confirmed"
                && !matches!(&self.search, Some(s) if s.mode == "exhausted")
            {
                return Err(CertError::Rejected("confirmed verdict without exhaustion".into()));
            }
        }
        Ok(())
    }

    /// The JSON with the `timing` object removed.
    pub fn without_timing(&self) -> CertificateFile {
        CertificateFile { timing: None, ..self.clone() }
    }
}
