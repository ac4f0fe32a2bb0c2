//! Polytope families and operations: polygons, cubes, simplices,
//! cross-polytopes, Cartesian products, (iterated) bipyramids, duals,
//! vertex truncation and type-preserving perturbation.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{centroid, solve, QVector, Rational};
use crate::equivalence::are_equivalent;
use crate::error::{Error, Result};
use crate::hull::{edges, IncidenceStructure, VPolytope};

/// Largest dimension accepted by the 2^d-vertex constructors.
pub const MAX_CUBE_DIM: usize = 16;

fn param_error(msg: alloc::string::String) -> Error {
    Error::InvalidParameter(msg)
}

/// Convex `n`-gon with rational vertices on the unit circle, from the
/// parametrisation `t -> ((1 - t^2) / (1 + t^2), 2t / (1 + t^2))` at
/// `t = 0, 1, -1, 2, -2, ...` (the first `n` of these, sorted ascending, so
/// vertices run counter-clockwise).
pub fn ngon(n: usize) -> Result<VPolytope> {
    if n < 3 {
        return Err(param_error(format!("ngon needs n >= 3, got {n}")));
    }
    let mut params: Vec<i64> = (0..n as i64).map(|k| if k % 2 == 1 { (k + 1) / 2 } else { -k / 2 }).collect();
    params.sort_unstable();
    let points = params
        .iter()
        .map(|&t| {
            let den = Rational::integer(1 + t * t);
            let x = Rational::integer(1 - t * t).div_nonzero(&den);
            let y = Rational::integer(2 * t).div_nonzero(&den);
            QVector::new(alloc::vec![x, y])
        })
        .collect();
    VPolytope::new(points)
}

fn check_dim(d: usize, max: usize) -> Result<()> {
    if d < 1 || d > max {
        return Err(param_error(format!("dimension must be in 1..={max}, got {d}")));
    }
    Ok(())
}

/// The 0/1 cube. Vertex `i` has coordinate `j` equal to bit `d - 1 - j` of
/// `i`, so vertices are in lexicographic order.
pub fn cube(d: usize) -> Result<VPolytope> {
    check_dim(d, MAX_CUBE_DIM)?;
    VPolytope::new(cube_points(d))
}

fn cube_points(d: usize) -> Vec<QVector> {
    (0..1i64 << d)
        .map(|i| QVector::from_ints(&(0..d).map(|j| (i >> (d - 1 - j)) & 1).collect::<Vec<_>>()))
        .collect()
}

/// Origin plus the unit basis vectors.
pub fn simplex(d: usize) -> Result<VPolytope> {
    check_dim(d, 64)?;
    let mut points = alloc::vec![QVector::zeros(d)];
    points.extend((0..d).map(|i| unit(d, i, 1)));
    VPolytope::new(points)
}

/// `+e_1, -e_1, +e_2, -e_2, ...`
pub fn cross_polytope(d: usize) -> Result<VPolytope> {
    check_dim(d, 64)?;
    VPolytope::new((0..d).flat_map(|i| [unit(d, i, 1), unit(d, i, -1)]).collect())
}

fn unit(d: usize, i: usize, sign: i64) -> QVector {
    let mut coords = alloc::vec![0; d];
    coords[i] = sign;
    QVector::from_ints(&coords)
}

/// Product vertex `(a_i, b_j)` gets index `i * |b| + j`.
pub fn cartesian_product(a: &VPolytope, b: &VPolytope) -> Result<VPolytope> {
    let points = a
        .vertices()
        .iter()
        .flat_map(|x| b.vertices().iter().map(move |y| x.concat(y)))
        .collect();
    VPolytope::new(points)
}

/// `p` times a segment.
pub fn prism(p: &VPolytope) -> Result<VPolytope> {
    cartesian_product(p, &cube(1)?)
}

/// `Q = P x [0,1]^d` together with its decomposition into the `2^d` copies of
/// `P` sitting over the cube vertices.
#[derive(Clone, Debug)]
pub struct ProductStructure {
    pub base: VPolytope,
    pub cube_dim: usize,
    pub product: VPolytope,
    /// Part `j` holds the vertices of `Q` over cube vertex `j`.
    pub copy_partition: Vec<Vec<usize>>,
}

impl ProductStructure {
    pub fn new(base: &VPolytope, cube_dim: usize) -> Result<Self> {
        let c = cube(cube_dim)?;
        let product = cartesian_product(base, &c)?;
        let k = c.num_vertices();
        let copy_partition = (0..k)
            .map(|j| (0..base.num_vertices()).map(|i| i * k + j).collect())
            .collect();
        Ok(ProductStructure { base: base.clone(), cube_dim, product, copy_partition })
    }
}

/// Bipyramid over `p`: `p` is translated so its vertex centroid is the
/// origin, lifted into the hyperplane `x_{m+1} = 0`, and the apexes
/// `(0, ..., 0, 1)` and `(0, ..., 0, -1)` are appended.
pub fn bipyramid(p: &VPolytope) -> Result<VPolytope> {
    let c = centroid(p.vertices())?;
    let m = p.dim();
    let mut points: Vec<QVector> = p
        .vertices()
        .iter()
        .map(|v| {
            let mut w = v - &c;
            w.push(Rational::zero());
            w
        })
        .collect();
    for sign in [1, -1] {
        points.push(unit(m + 1, m, sign));
    }
    VPolytope::new(points)
}

/// A `levels`-fold iterated bipyramid, remembering which vertices are apexes.
#[derive(Clone, Debug)]
pub struct BipyramidTower {
    pub core: VPolytope,
    pub levels: usize,
    /// Two apex indices per level, in the order added.
    pub apex_indices: Vec<usize>,
    pub result: VPolytope,
}

pub fn iterated_bipyramid(p: &VPolytope, levels: usize) -> Result<BipyramidTower> {
    if levels < 1 {
        return Err(param_error(format!("bipyramid levels must be >= 1, got {levels}")));
    }
    let mut result = p.clone();
    let mut apex_indices = Vec::with_capacity(2 * levels);
    for _ in 0..levels {
        result = bipyramid(&result)?;
        let n = result.num_vertices();
        apex_indices.extend([n - 2, n - 1]);
    }
    Ok(BipyramidTower { core: p.clone(), levels, apex_indices, result })
}

/// Polar of `p` about its vertex centroid. Dual vertex `i` is the polar of
/// facet `i` of `p`: the outward normal scaled so the facet reads
/// `<a, x - c> = 1`.
pub fn polar_dual(p: &VPolytope) -> Result<VPolytope> {
    let c = centroid(p.vertices())?;
    let points = p
        .facets()
        .iter()
        .map(|f| {
            let normal = f.plane.normal();
            let height = f.plane.offset() - &normal.dot_unchecked(&c);
            if height.signum() != Ordering::Greater {
                return Err(Error::CentroidNotInterior);
            }
            Ok(normal.scale(&height.recip()?))
        })
        .collect::<Result<Vec<_>>>()?;
    VPolytope::new(points)
}

/// Swaps vertices and facets.
pub fn combinatorial_dual(inc: &IncidenceStructure) -> IncidenceStructure {
    inc.transpose()
}

/// Cuts every vertex `v` off at the points `v + t (u - v)` along each edge
/// `(v, u)`. New vertices are ordered by `v`, then by `u`.
pub fn truncate_vertices(p: &VPolytope, t: &Rational) -> Result<VPolytope> {
    let half = Rational::new(1, 2)?;
    if t.signum() != Ordering::Greater || *t >= half {
        return Err(param_error(format!("truncation depth must lie in (0, 1/2), got {t}")));
    }
    let lattice = p.face_lattice()?;
    let mut neighbours: Vec<Vec<usize>> = alloc::vec![Vec::new(); p.num_vertices()];
    for (a, b) in edges(&lattice) {
        neighbours[a].push(b);
        neighbours[b].push(a);
    }
    let mut points = Vec::new();
    for (v, ns) in neighbours.iter_mut().enumerate() {
        ns.sort_unstable();
        let x = p.vertex(v);
        for &u in ns.iter() {
            points.push(x + &(p.vertex(u) - x).scale(t));
        }
    }
    VPolytope::new(points)
}

/// Perturbation attempts before [`perturb`] gives up.
pub const PERTURB_ATTEMPTS: u32 = 32;

/// A nearby realization of the same combinatorial type.
///
/// Offsets are independent rationals `k / (16 * denominator_bound)` with
/// `|k| <= 16`, drawn from a ChaCha stream seeded with `seed`. Simplicial
/// polytopes get their vertex coordinates moved; simple ones get their facet
/// hyperplanes (normal coordinates and offset) moved, with each vertex
/// recomputed as the meet of its facets, since moving vertices of a
/// non-triangular facet independently destroys it. Every candidate is checked
/// by recomputing its hull and testing equivalence with `p`; failures are
/// retried up to [`PERTURB_ATTEMPTS`] times.
pub fn perturb(p: &VPolytope, denominator_bound: u64, seed: u64) -> Result<VPolytope> {
    if denominator_bound < 2 {
        return Err(param_error(format!("denominator bound must be >= 2, got {denominator_bound}")));
    }
    let inc = p.incidence();
    let dim = p.dim();
    let move_facets = !inc.is_simplicial(dim) && inc.is_simple(dim);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = Rational::integer(16 * i64::try_from(denominator_bound).map_err(|_| {
        param_error(format!("denominator bound too large: {denominator_bound}"))
    })?);
    let offset = |rng: &mut ChaCha8Rng| Rational::integer(rng.random_range(-16..=16)).div_nonzero(&scale);

    for _ in 0..PERTURB_ATTEMPTS {
        let points = if move_facets {
            let planes: Vec<(QVector, Rational)> = p
                .facets()
                .iter()
                .map(|f| {
                    let n = QVector::new(f.plane.normal().iter().map(|c| c + &offset(&mut rng)).collect());
                    (n, f.plane.offset() + &offset(&mut rng))
                })
                .collect();
            (0..p.num_vertices())
                .map(|v| {
                    let through: Vec<usize> = inc.vertex_facets(v).ones().collect();
                    let a: Vec<QVector> = through.iter().map(|&f| planes[f].0.clone()).collect();
                    let b: Vec<Rational> = through.iter().map(|&f| planes[f].1.clone()).collect();
                    solve(&a, &b)
                })
                .collect::<Option<Vec<_>>>()
        } else {
            Some(
                p.vertices()
                    .iter()
                    .map(|v| QVector::new(v.iter().map(|c| c + &offset(&mut rng)).collect()))
                    .collect(),
            )
        };
        let Some(points) = points else { continue };
        let Ok(candidate) = VPolytope::new(points) else { continue };
        if candidate.num_vertices() == p.num_vertices()
            && are_equivalent(&inc, &candidate.incidence()).is_some()
        {
            return Ok(candidate);
        }
    }
    Err(Error::PerturbationFailed { attempts: PERTURB_ATTEMPTS })
}
