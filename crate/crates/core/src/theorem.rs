//! Bound arithmetic and structural checks for products of a polytope with a
//! cube.
//!
//! For `Q = P x [0,1]^d` with `P` of dimension `d'` and `n` facets, no vertex
//! subset of `Q` spans a hull combinatorially equivalent to the dual `Q*`
//! whenever every vertex of `P` lies on at most `ceil((n + 2d) / 2^d) - d'`
//! facets. The functions here compute that bound, check it for a concrete
//! `P`, verify the two structural facts the argument rests on (the `2^d`
//! separable copies of `P` inside `Q`, and `Q*` being the `d`-fold
//! bipyramid over `P*` with `n + 2d` vertices), and run the search.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::arith::{Hyperplane, QVector, Rational};
use crate::construct::{iterated_bipyramid, polar_dual, ProductStructure};
use crate::equivalence::are_equivalent;
use crate::error::{Error, Result};
use crate::hull::VPolytope;
use crate::search::{SearchCertificate, SearchMode, SearchOptions, SearchPlan};

fn invalid(msg: String) -> Error {
    Error::InvalidParameter(msg)
}

/// `ceil(a / b)` for `a >= 0`, `b > 0`.
fn ceil_div(a: u64, b: u64) -> u64 {
    a / b + u64::from(!a.is_multiple_of(b))
}

fn two_pow(d: u32) -> Result<u64> {
    1u64.checked_shl(d)
        .filter(|_| d < 63)
        .ok_or_else(|| invalid(format!("cube dimension {d} too large")))
}

/// `ceil((n + 2d) / 2^d) - d'`. May be zero or negative, in which case no
/// polytope satisfies the hypothesis.
pub fn incidence_bound(n: u64, d: u32, d_prime: u64) -> Result<i64> {
    if d < 1 || d_prime < 2 || n < d_prime + 1 {
        return Err(invalid(format!(
            "need d >= 1, d' >= 2, n >= d' + 1; got n={n}, d={d}, d'={d_prime}"
        )));
    }
    let parts = two_pow(d)?;
    let total = n
        .checked_add(2 * u64::from(d))
        .ok_or_else(|| invalid(String::from("n too large")))?;
    Ok(ceil_div(total, parts) as i64 - d_prime as i64)
}

/// Least polygon size `3 * 2^d - 2d + 1` for which the bound reaches 2.
pub fn corollary_threshold(d: u32) -> Result<u64> {
    if d < 1 {
        return Err(invalid(format!("need d >= 1, got {d}")));
    }
    Ok(3 * two_pow(d)? - 2 * u64::from(d) + 1)
}

/// `ceil(total / parts)`: some part receives at least this many items.
pub fn pigeonhole_min(total: u64, parts: u64) -> Result<u64> {
    if parts < 1 {
        return Err(invalid(String::from("need at least one part")));
    }
    Ok(ceil_div(total, parts))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    /// Facets of `P`.
    pub n: u64,
    pub d: u32,
    /// Dimension of `P`.
    pub d_prime: u64,
    pub ceiling_term: u64,
    pub bound: i64,
    /// Largest number of facets through one vertex of `P`.
    pub max_incidence: u64,
    pub hypothesis_ok: bool,
    /// Why the hypothesis fails, when it does.
    pub reason: Option<&'static str>,
}

impl BoundReport {
    pub fn new(p: &VPolytope, d: u32) -> Result<Self> {
        let n = p.num_facets() as u64;
        let d_prime = p.dim() as u64;
        let bound = incidence_bound(n, d, d_prime)?;
        let ceiling_term = pigeonhole_min(n + 2 * u64::from(d), two_pow(d)?)?;
        let max_incidence = p.incidence().row_sums().into_iter().max().unwrap_or(0) as u64;
        let hypothesis_ok = bound >= 0 && max_incidence <= bound as u64;
        let reason = if hypothesis_ok {
            None
        } else if bound < d_prime as i64 {
            Some("bound is below d', but every vertex lies on at least d' facets")
        } else {
            Some("some vertex lies on more facets than the bound allows")
        };
        Ok(BoundReport { n, d, d_prime, ceiling_term, bound, max_incidence, hypothesis_ok, reason })
    }
}

/// Result of [`product_partition_check`].
#[derive(Clone, Debug)]
pub struct PartitionCheck {
    pub ok: bool,
    pub parts: usize,
    /// For each part, a supporting hyperplane of `Q` meeting `Q` in exactly
    /// that part's vertices, when one exists.
    pub separating_planes: Vec<Option<Hyperplane>>,
    pub diagnostics: Vec<String>,
}

/// Checks that the copy partition of `Q` has `2^d` disjoint parts covering
/// every vertex, that each part's hull is combinatorially `P`, and that each
/// part is cut out of `Q` by a supporting hyperplane containing no other
/// vertex. The hyperplane is the sum of the facets of `Q` through the part;
/// it meets `Q` exactly in the smallest face containing the part.
pub fn product_partition_check(ps: &ProductStructure) -> PartitionCheck {
    let q = &ps.product;
    let nv = q.num_vertices();
    let mut diagnostics = Vec::new();

    let expected_parts = 1usize.checked_shl(ps.cube_dim as u32).unwrap_or(0);
    if ps.copy_partition.len() != expected_parts {
        diagnostics.push(format!("{} parts, expected {expected_parts}", ps.copy_partition.len()));
    }
    let mut owner = alloc::vec![None; nv];
    for (k, part) in ps.copy_partition.iter().enumerate() {
        for &v in part {
            match owner.get(v) {
                None => diagnostics.push(format!("part {k}: index {v} out of range")),
                Some(Some(j)) => diagnostics.push(format!("vertex {v} in parts {j} and {k}")),
                Some(None) => owner[v] = Some(k),
            }
        }
    }
    if let Some(v) = owner.iter().position(Option::is_none) {
        diagnostics.push(format!("vertex {v} is in no part"));
    }

    let base_inc = ps.base.incidence();
    let mut separating_planes = Vec::with_capacity(ps.copy_partition.len());
    for (k, part) in ps.copy_partition.iter().enumerate() {
        if part.iter().any(|&v| v >= nv) || part.is_empty() {
            separating_planes.push(None);
            continue;
        }
        let points: Vec<QVector> = part.iter().map(|&v| q.vertex(v).clone()).collect();
        let same_type = match VPolytope::in_span(&points) {
            Ok((hull, _)) => {
                hull.num_vertices() == points.len()
                    && are_equivalent(&hull.incidence(), &base_inc).is_some()
            }
            Err(_) => false,
        };
        if !same_type {
            diagnostics.push(format!("part {k}: hull is not combinatorially the base polytope"));
        }
        let plane = separating_plane(q, part);
        if plane.is_none() {
            diagnostics.push(format!("part {k}: no supporting hyperplane isolates it"));
        }
        separating_planes.push(plane);
    }
    PartitionCheck {
        ok: diagnostics.is_empty(),
        parts: ps.copy_partition.len(),
        separating_planes,
        diagnostics,
    }
}

fn separating_plane(q: &VPolytope, part: &[usize]) -> Option<Hyperplane> {
    let through: Vec<_> = q
        .facets()
        .iter()
        .filter(|f| part.iter().all(|v| f.incident.binary_search(v).is_ok()))
        .collect();
    if through.is_empty() {
        return None;
    }
    let mut normal = QVector::zeros(q.dim());
    let mut offset = Rational::zero();
    for f in &through {
        normal = &normal + f.plane.normal();
        offset = offset + f.plane.offset();
    }
    let plane = Hyperplane::new(normal, offset).ok()?;
    for (v, x) in q.vertices().iter().enumerate() {
        let side = plane.eval(x).ok()?.signum();
        let inside = part.contains(&v);
        if side == Ordering::Greater || (side == Ordering::Equal) != inside {
            return None;
        }
    }
    Some(plane)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipyramidCheck {
    /// `Q*` is combinatorially the `d`-fold bipyramid over `P*`.
    pub equivalent: bool,
    /// Vertex count of `Q*`.
    pub dual_vertices: usize,
    /// `n + 2d`.
    pub expected_vertices: usize,
}

impl BipyramidCheck {
    pub fn ok(&self) -> bool {
        self.equivalent && self.dual_vertices == self.expected_vertices
    }
}

pub fn bipyramid_structure_check(p: &VPolytope, d: usize) -> Result<BipyramidCheck> {
    bipyramid_check_for(&ProductStructure::new(p, d)?)
}

/// [`bipyramid_structure_check`] for an already built product.
pub fn bipyramid_check_for(ps: &ProductStructure) -> Result<BipyramidCheck> {
    if ps.base.dim() < 2 {
        return Err(invalid(format!("base must have dimension >= 2, got {}", ps.base.dim())));
    }
    let dual = polar_dual(&ps.product)?;
    let tower = iterated_bipyramid(&polar_dual(&ps.base)?, ps.cube_dim)?;
    Ok(BipyramidCheck {
        equivalent: are_equivalent(&dual.incidence(), &tower.result.incidence()).is_some(),
        dual_vertices: dual.num_vertices(),
        expected_vertices: ps.base.num_facets() + 2 * ps.cube_dim,
    })
}

/// A polytope `P` and cube dimension `d` with the bound evaluated.
#[derive(Clone, Debug)]
pub struct TheoremInstance {
    pub base: VPolytope,
    pub d: usize,
    pub bounds: BoundReport,
}

impl TheoremInstance {
    pub fn hypothesis_ok(&self) -> bool {
        self.bounds.hypothesis_ok
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    /// The hypothesis fails, so there is no prediction to test.
    NotRun,
    BudgetExceeded { needed: u128, budget: u64 },
    Completed(SearchCertificate),
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub instance: TheoremInstance,
    pub partition: Option<PartitionCheck>,
    pub bipyramid: Option<BipyramidCheck>,
    pub search: SearchOutcome,
}

impl TheoremReport {
    pub fn structure_ok(&self) -> bool {
        self.partition.as_ref().is_some_and(|p| p.ok) && self.bipyramid.as_ref().is_some_and(BipyramidCheck::ok)
    }

    /// Hypothesis holds, structure checks pass and the search exhausted.
    pub fn prediction_confirmed(&self) -> bool {
        self.instance.hypothesis_ok()
            && self.structure_ok()
            && matches!(&self.search, SearchOutcome::Completed(c) if c.mode == SearchMode::Exhausted)
    }
}

/// Evaluates the bound for `P` and, when the hypothesis holds, builds
/// `Q = P x [0,1]^d`, runs both structural checks and searches `Q` for a dual
/// subset. The search is skipped (reported as [`SearchOutcome::BudgetExceeded`])
/// when it would exceed the budget; the structural checks are still run.
pub fn verify_theorem_instance(p: &VPolytope, d: usize, options: SearchOptions) -> Result<TheoremReport> {
    verify_theorem_instance_with(p, d, options, |plan| {
        plan.certificate(&[plan.run_block(0, plan.total())])
    })
}

/// [`verify_theorem_instance`] with a caller-supplied way of running the
/// search plan (e.g. split across threads).
pub fn verify_theorem_instance_with(
    p: &VPolytope,
    d: usize,
    options: SearchOptions,
    run: impl FnOnce(&SearchPlan<'_>) -> SearchCertificate,
) -> Result<TheoremReport> {
    if p.dim() < 2 {
        return Err(invalid(format!("base must have dimension >= 2, got {}", p.dim())));
    }
    let d32 = u32::try_from(d).map_err(|_| invalid(format!("cube dimension {d} too large")))?;
    let bounds = BoundReport::new(p, d32)?;
    let instance = TheoremInstance { base: p.clone(), d, bounds };
    if !instance.hypothesis_ok() {
        return Ok(TheoremReport { instance, partition: None, bipyramid: None, search: SearchOutcome::NotRun });
    }
    let ps = ProductStructure::new(p, d)?;
    let partition = product_partition_check(&ps);
    let bipyramid = bipyramid_check_for(&ps)?;
    let search = match SearchPlan::new(&ps.product, options) {
        Ok(plan) => SearchOutcome::Completed(run(&plan)),
        Err(Error::BudgetExceeded { needed, budget }) => SearchOutcome::BudgetExceeded { needed, budget },
        Err(e) => return Err(e),
    };
    Ok(TheoremReport { instance, partition: Some(partition), bipyramid: Some(bipyramid), search })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{ngon, ProductStructure};

    #[test]
    fn bound_examples() {
        assert_eq!(incidence_bound(5, 1, 2).unwrap(), 2);
        assert_eq!(incidence_bound(9, 2, 2).unwrap(), 2);
        assert_eq!(incidence_bound(3, 1, 2).unwrap(), 1);
        assert!(incidence_bound(2, 1, 2).is_err());
        assert!(incidence_bound(5, 0, 2).is_err());
        assert!(incidence_bound(5, 1, 1).is_err());
    }

    #[test]
    fn thresholds_and_pigeonhole() {
        assert_eq!(corollary_threshold(1).unwrap(), 5);
        assert_eq!(corollary_threshold(2).unwrap(), 9);
        assert_eq!(corollary_threshold(3).unwrap(), 19);
        assert!(corollary_threshold(0).is_err());
        assert_eq!(pigeonhole_min(7, 2).unwrap(), 4);
        assert_eq!(pigeonhole_min(13, 4).unwrap(), 4);
        assert_eq!(pigeonhole_min(8, 4).unwrap(), 2);
        assert_eq!(pigeonhole_min(0, 3).unwrap(), 0);
        assert!(pigeonhole_min(3, 0).is_err());
    }

    #[test]
    fn bound_reports() {
        let r = BoundReport::new(&ngon(5).unwrap(), 1).unwrap();
        assert_eq!((r.ceiling_term, r.bound, r.max_incidence), (4, 2, 2));
        assert!(r.hypothesis_ok);
        let r = BoundReport::new(&ngon(4).unwrap(), 1).unwrap();
        assert_eq!(r.bound, 1);
        assert!(!r.hypothesis_ok);
        assert!(r.reason.is_some());
    }

    #[test]
    fn corrupted_partition_fails() {
        let mut ps = ProductStructure::new(&ngon(5).unwrap(), 1).unwrap();
        assert!(product_partition_check(&ps).ok);
        let a = ps.copy_partition[0][0];
        let b = ps.copy_partition[1][0];
        ps.copy_partition[0][0] = b;
        ps.copy_partition[1][0] = a;
        let check = product_partition_check(&ps);
        assert!(!check.ok);
        assert!(check.separating_planes.iter().all(Option::is_none));
    }

    #[test]
    fn hypothesis_failure_skips_everything() {
        let report = verify_theorem_instance(&ngon(4).unwrap(), 1, SearchOptions::default()).unwrap();
        assert!(report.partition.is_none());
        assert!(matches!(report.search, SearchOutcome::NotRun));
        assert!(!report.prediction_confirmed());
    }
}
