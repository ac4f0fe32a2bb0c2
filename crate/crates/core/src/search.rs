//! Exhaustive search for a vertex subset whose convex hull is combinatorially
//! equivalent to the dual polytope.
//!
//! A hull equivalent to the dual of `q` has exactly as many vertices as `q`
//! has facets, and those vertices are themselves a qualifying subset, so only
//! subsets of that size are enumerated. They are visited in lexicographic
//! order and the first witness is reported; otherwise an exhaustion
//! certificate accounts for every subset.
//!
//! The rank range `0..C(v, f)` can be cut into contiguous blocks searched
//! independently ([`SearchPlan::run_block`]) and merged
//! ([`SearchPlan::certificate`]); the merged certificate is identical to the
//! one from a single block.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use sha2::{Digest, Sha256};

use crate::arith::QVector;
use crate::construct::{perturb, polar_dual};
use crate::equivalence::{are_equivalent, signature, IsoWitness, Signature};
use crate::error::{Error, Result};
use crate::hull::{hull_in_span, IncidenceStructure, VPolytope};
use crate::subsets::{advance, binomial, unrank};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest number of subsets the search may enumerate.
    pub budget: u64,
    /// Apply the cheap rejection tests before the full equivalence test.
    pub prune: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_BUDGET, prune: true }
    }
}

/// Why a subset was rejected before the full equivalence test, in the order
/// the tests are applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PruneReason {
    /// Some chosen point is not a vertex of the subset's hull.
    ConvexPosition,
    /// The hull is lower-dimensional.
    AffineDimension,
    /// The hull has the wrong number of facets.
    FacetCount,
    /// Incidence signatures differ.
    Signature,
}

impl PruneReason {
    pub const ALL: [PruneReason; 4] = [
        PruneReason::ConvexPosition,
        PruneReason::AffineDimension,
        PruneReason::FacetCount,
        PruneReason::Signature,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PruneReason::ConvexPosition => "convex_position",
            PruneReason::AffineDimension => "affine_dimension",
            PruneReason::FacetCount => "facet_count",
            PruneReason::Signature => "signature",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        PruneReason::ALL.into_iter().find(|r| r.as_str() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Witness,
    Exhausted,
}

/// Which coordinates were searched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Realization {
    /// The polytope exactly as given.
    Original,
    /// A seeded perturbation of it. The combinatorial type is preserved but
    /// any Cartesian-product geometry of the original generally is not.
    Perturbed { seed: u64, denominator_bound: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchCertificate {
    pub mode: SearchMode,
    pub vertex_count: usize,
    /// Subset size searched: the facet count of the polytope.
    pub subset_size: usize,
    /// `C(vertex_count, subset_size)`.
    pub total_subsets: u128,
    pub target_fvector: Vec<usize>,
    /// Witness vertex indices, ascending.
    pub subset: Option<Vec<usize>>,
    /// Maps hull vertex `i` (the `i`-th subset entry) and hull facet `j` to
    /// vertices and facets of the polar dual.
    pub iso: Option<IsoWitness>,
    /// Subsets that reached the full equivalence test.
    pub subsets_examined: u64,
    pub pruned_by: BTreeMap<PruneReason, u64>,
    /// SHA-256 of [`realization_text`] of the searched polytope.
    pub realization_hash: [u8; 32],
    pub realization: Realization,
}

impl SearchCertificate {
    pub fn pruned_total(&self) -> u64 {
        self.pruned_by.values().sum()
    }

    /// Subsets accounted for, examined or pruned.
    pub fn accounted(&self) -> u128 {
        self.subsets_examined as u128 + self.pruned_total() as u128
    }
}

/// Canonical text of a vertex list: a `POLY m v` header, then one line per
/// vertex with coordinates in `p/q` form separated by single spaces.
pub fn realization_text(vertices: &[QVector]) -> String {
    let m = vertices.first().map_or(0, QVector::len);
    let mut out = String::new();
    let _ = writeln!(out, "POLY {} {}", m, vertices.len());
    for v in vertices {
        for (i, c) in v.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{c}");
        }
        out.push('\n');
    }
    out
}

pub fn realization_hash(vertices: &[QVector]) -> [u8; 32] {
    Sha256::digest(realization_text(vertices).as_bytes()).into()
}

/// Outcome of searching one contiguous range of subset ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockResult {
    pub start: u128,
    pub end: u128,
    pub examined: u64,
    pub pruned_by: BTreeMap<PruneReason, u64>,
    /// First witness in the block; counts stop there.
    pub witness: Option<(Vec<usize>, IsoWitness)>,
}

/// Everything a search needs that does not depend on the subset: the target
/// dual incidence and its signature. Shareable across threads.
pub struct SearchPlan<'a> {
    polytope: &'a VPolytope,
    target: IncidenceStructure,
    target_signature: Signature,
    subset_size: usize,
    total: u128,
    options: SearchOptions,
}

enum Verdict {
    Pruned(PruneReason),
    Rejected,
    Witness(IsoWitness),
}

impl<'a> SearchPlan<'a> {
    /// Fails with [`Error::BudgetExceeded`] when `C(v, f)` exceeds the budget.
    pub fn new(q: &'a VPolytope, options: SearchOptions) -> Result<Self> {
        let target = polar_dual(q)?.incidence();
        let subset_size = q.num_facets();
        let total = binomial(q.num_vertices(), subset_size);
        if total > options.budget as u128 {
            return Err(Error::BudgetExceeded { needed: total, budget: options.budget });
        }
        Ok(SearchPlan {
            polytope: q,
            target_signature: signature(&target),
            target,
            subset_size,
            total,
            options,
        })
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn target(&self) -> &IncidenceStructure {
        &self.target
    }

    pub fn target_fvector(&self) -> &[usize] {
        &self.target_signature.f_vector
    }

    fn judge(&self, subset: &[usize]) -> Verdict {
        let points: Vec<QVector> = subset.iter().map(|&i| self.polytope.vertex(i).clone()).collect();
        if !self.options.prune {
            return match VPolytope::in_span(&points) {
                Ok((hull, _)) => match are_equivalent(&hull.incidence(), &self.target) {
                    Some(w) if hull.num_vertices() == points.len() => Verdict::Witness(w),
                    _ => Verdict::Rejected,
                },
                Err(_) => Verdict::Rejected,
            };
        }
        let Ok(hull) = hull_in_span(&points) else {
            return Verdict::Pruned(PruneReason::AffineDimension);
        };
        if hull.vertices.len() != points.len() {
            return Verdict::Pruned(PruneReason::ConvexPosition);
        }
        if hull.dim() != self.polytope.dim() {
            return Verdict::Pruned(PruneReason::AffineDimension);
        }
        if hull.facets.len() != self.target.num_facets() {
            return Verdict::Pruned(PruneReason::FacetCount);
        }
        let sets: Vec<Vec<usize>> = hull.facets.iter().map(|f| f.incident.clone()).collect();
        let inc = IncidenceStructure::from_facet_sets(points.len(), &sets);
        if signature(&inc) != self.target_signature {
            return Verdict::Pruned(PruneReason::Signature);
        }
        match are_equivalent(&inc, &self.target) {
            Some(w) => Verdict::Witness(w),
            None => Verdict::Rejected,
        }
    }

    /// Searches subsets with lexicographic ranks in `start..end`.
    pub fn run_block(&self, start: u128, end: u128) -> BlockResult {
        let end = end.min(self.total);
        let mut out = BlockResult { start, end, examined: 0, pruned_by: BTreeMap::new(), witness: None };
        let Some(mut subset) = unrank(self.polytope.num_vertices(), self.subset_size, start) else {
            return out;
        };
        let mut rank = start;
        while rank < end {
            match self.judge(&subset) {
                Verdict::Pruned(r) => *out.pruned_by.entry(r).or_insert(0) += 1,
                Verdict::Rejected => out.examined += 1,
                Verdict::Witness(w) => {
                    out.examined += 1;
                    out.witness = Some((subset, w));
                    return out;
                }
            }
            rank += 1;
            if !advance(&mut subset, self.polytope.num_vertices()) {
                break;
            }
        }
        out
    }

    /// Merges block results covering `0..total`. Blocks after the first one
    /// holding a witness are ignored, which makes the result independent of
    /// how the range was split.
    pub fn certificate(&self, blocks: &[BlockResult]) -> SearchCertificate {
        let mut sorted: Vec<&BlockResult> = blocks.iter().collect();
        sorted.sort_by_key(|b| b.start);
        let mut examined = 0;
        let mut pruned_by = BTreeMap::new();
        let mut witness = None;
        for b in sorted {
            examined += b.examined;
            for (&r, &c) in &b.pruned_by {
                *pruned_by.entry(r).or_insert(0) += c;
            }
            if let Some(w) = &b.witness {
                witness = Some(w.clone());
                break;
            }
        }
        let (mode, subset, iso) = match witness {
            Some((s, w)) => (SearchMode::Witness, Some(s), Some(w)),
            None => (SearchMode::Exhausted, None, None),
        };
        SearchCertificate {
            mode,
            vertex_count: self.polytope.num_vertices(),
            subset_size: self.subset_size,
            total_subsets: self.total,
            target_fvector: self.target_signature.f_vector.clone(),
            subset,
            iso,
            subsets_examined: examined,
            pruned_by,
            realization_hash: realization_hash(self.polytope.vertices()),
            realization: Realization::Original,
        }
    }
}

/// Single-threaded search over all subsets.
pub fn find_dual_subset(q: &VPolytope, options: SearchOptions) -> Result<SearchCertificate> {
    let plan = SearchPlan::new(q, options)?;
    let block = plan.run_block(0, plan.total());
    Ok(plan.certificate(&[block]))
}

/// Why a certificate failed re-verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("realization hash does not match the coordinates")]
    HashMismatch,
    #[error("vertex or subset counts do not match the polytope")]
    CountMismatch,
    #[error("examined plus pruned subsets differ from the binomial total")]
    Accounting,
    #[error("witness fields missing or present in the wrong mode")]
    MalformedWitness,
    #[error("witness subset is not in convex position")]
    NotConvexPosition,
    #[error("witness hull is not full-dimensional")]
    Degenerate,
    #[error("isomorphism fails the entrywise incidence check")]
    IsoMismatch,
}

/// Re-checks a certificate against the polytope without searching: hash and
/// counts always; for witnesses, convex position, recomputed hull facets and
/// the entrywise incidence check against the recomputed dual; for
/// exhaustion, that every subset is accounted for.
pub fn check_certificate(q: &VPolytope, cert: &SearchCertificate) -> Result<(), CertificateError> {
    if realization_hash(q.vertices()) != cert.realization_hash {
        return Err(CertificateError::HashMismatch);
    }
    if cert.vertex_count != q.num_vertices()
        || cert.subset_size != q.num_facets()
        || cert.total_subsets != binomial(q.num_vertices(), q.num_facets())
    {
        return Err(CertificateError::CountMismatch);
    }
    match (cert.mode, &cert.subset, &cert.iso) {
        (SearchMode::Exhausted, None, None) => {
            if cert.accounted() != cert.total_subsets {
                return Err(CertificateError::Accounting);
            }
            Ok(())
        }
        (SearchMode::Witness, Some(subset), Some(iso)) => {
            if cert.accounted() > cert.total_subsets {
                return Err(CertificateError::Accounting);
            }
            if subset.len() != cert.subset_size
                || subset.windows(2).any(|w| w[0] >= w[1])
                || subset.iter().any(|&i| i >= q.num_vertices())
            {
                return Err(CertificateError::MalformedWitness);
            }
            let points: Vec<QVector> = subset.iter().map(|&i| q.vertex(i).clone()).collect();
            let hull = hull_in_span(&points).map_err(|_| CertificateError::Degenerate)?;
            if hull.vertices.len() != points.len() {
                return Err(CertificateError::NotConvexPosition);
            }
            if hull.dim() != q.dim() {
                return Err(CertificateError::Degenerate);
            }
            let sets: Vec<Vec<usize>> = hull.facets.iter().map(|f| f.incident.clone()).collect();
            let inc = IncidenceStructure::from_facet_sets(points.len(), &sets);
            let target = polar_dual(q).map_err(|_| CertificateError::Degenerate)?.incidence();
            if !iso.verify(&inc, &target) {
                return Err(CertificateError::IsoMismatch);
            }
            Ok(())
        }
        _ => Err(CertificateError::MalformedWitness),
    }
}

/// A realization of `p` admitting a dual subset.
#[derive(Clone, Debug)]
pub struct RealizationWitness {
    pub polytope: VPolytope,
    pub certificate: SearchCertificate,
}

/// Searches `p` itself, then up to `trials` type-preserving perturbations
/// (seeds `seed, seed + 1, ...`), returning the first realization with a
/// witness. Seeds whose perturbation fails count as spent trials.
pub fn realization_search(
    p: &VPolytope,
    trials: u64,
    denominator_bound: u64,
    seed: u64,
    options: SearchOptions,
) -> Result<Option<RealizationWitness>> {
    if trials < 1 {
        return Err(Error::InvalidParameter(String::from("trials must be >= 1")));
    }
    let cert = find_dual_subset(p, options)?;
    if cert.mode == SearchMode::Witness {
        return Ok(Some(RealizationWitness { polytope: p.clone(), certificate: cert }));
    }
    for trial in 0..trials {
        let trial_seed = seed.wrapping_add(trial);
        let candidate = match perturb(p, denominator_bound, trial_seed) {
            Ok(c) => c,
            Err(Error::PerturbationFailed { .. }) => continue,
            Err(e) => return Err(e),
        };
        let mut cert = find_dual_subset(&candidate, options)?;
        if cert.mode == SearchMode::Witness {
            cert.realization = Realization::Perturbed { seed: trial_seed, denominator_bound };
            return Ok(Some(RealizationWitness { polytope: candidate, certificate: cert }));
        }
    }
    Ok(None)
}
