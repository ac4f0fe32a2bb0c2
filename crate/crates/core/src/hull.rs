//! Facets, vertex-facet incidences and face lattices of V-polytopes.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;

use fixedbitset::FixedBitSet;

use crate::arith::{affine_dim, echelon, hyperplane_through, span_axes, Hyperplane, QVector};
use crate::error::{Error, Result};
use crate::subsets::{advance, Combinations};

/// A facet: an outward-oriented supporting hyperplane (every point satisfies
/// `<normal, x> <= offset`) and the sorted indices of the points on it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Facet {
    pub plane: Hyperplane,
    pub incident: Vec<usize>,
}

/// All facets of the convex hull of `points`, which must affinely span their
/// ambient space.
///
/// Every affinely independent choice of `m` points (ambient dimension `m`)
/// spans a candidate hyperplane, kept when all points lie weakly on one side.
/// Candidates entirely inside an already found facet are skipped, so each
/// facet is produced once, in the lexicographic order of its first spanning
/// subset. Duplicate input points are allowed.
pub fn facets_of_points(points: &[QVector]) -> Result<Vec<Facet>> {
    let m = points.first().ok_or(Error::NoPoints)?.len();
    let dim = affine_dim(points)?;
    if dim != m {
        return Err(Error::NotFullDimensional { dim, ambient: m });
    }
    let n = points.len();
    let mut facets: Vec<Facet> = Vec::new();
    let mut facet_sets: Vec<FixedBitSet> = Vec::new();
    if m == 0 {
        return Ok(facets);
    }

    let mut subset: Vec<usize> = (0..m).collect();
    let mut chosen = Vec::with_capacity(m);
    loop {
        let covered = facet_sets
            .iter()
            .any(|s| subset.iter().all(|&i| s.contains(i)));
        if !covered {
            chosen.clear();
            chosen.extend(subset.iter().map(|&i| points[i].clone()));
            if let Ok(plane) = hyperplane_through(&chosen) {
                if let Some(facet) = supporting(plane, points) {
                    let mut set = FixedBitSet::with_capacity(n);
                    set.extend(facet.incident.iter().copied());
                    facet_sets.push(set);
                    facets.push(facet);
                }
            }
        }
        if !advance(&mut subset, n) {
            break;
        }
    }
    Ok(facets)
}

/// Orients `plane` so all points are below it, or returns `None` when points
/// lie strictly on both sides.
fn supporting(plane: Hyperplane, points: &[QVector]) -> Option<Facet> {
    let mut side = Ordering::Equal;
    let mut incident = Vec::new();
    for (i, p) in points.iter().enumerate() {
        match plane.eval_unchecked(p).signum() {
            Ordering::Equal => incident.push(i),
            s if side == Ordering::Equal => side = s,
            s if s != side => return None,
            _ => {}
        }
    }
    let plane = match side {
        Ordering::Greater => plane.flipped(),
        _ => plane,
    };
    Some(Facet { plane, incident })
}

/// Marks the points that are vertices of the hull: a point is a vertex iff
/// the normals of the facets through it span the whole space.
fn vertex_flags(points: &[QVector], facets: &[Facet]) -> Vec<bool> {
    let m = points.first().map_or(0, QVector::len);
    let mut through: Vec<Vec<usize>> = alloc::vec![Vec::new(); points.len()];
    for (f, facet) in facets.iter().enumerate() {
        for &i in &facet.incident {
            through[i].push(f);
        }
    }
    through
        .iter()
        .map(|fs| {
            if fs.len() < m {
                return false;
            }
            let normals = fs
                .iter()
                .map(|&f| facets[f].plane.normal().coords().to_vec())
                .collect();
            echelon(normals, m).pivots.len() == m
        })
        .collect()
}

fn first_occurrences(points: &[QVector]) -> Vec<usize> {
    let mut seen = BTreeSet::new();
    (0..points.len()).filter(|&i| seen.insert(&points[i])).collect()
}

/// The hull of a point set computed inside its own affine span.
#[derive(Clone, Debug)]
pub struct SpanHull {
    /// Indices (into the input) of the distinct points, first occurrence kept.
    pub distinct: Vec<usize>,
    /// Coordinate axes the span projects onto bijectively.
    pub axes: Vec<usize>,
    /// Facets in projected coordinates; incident indices refer to `distinct`.
    pub facets: Vec<Facet>,
    /// Input indices of hull vertices, ascending.
    pub vertices: Vec<usize>,
}

impl SpanHull {
    pub fn dim(&self) -> usize {
        self.axes.len()
    }
}

/// Hull of arbitrary (possibly lower-dimensional) points, computed after an
/// exact coordinate projection onto their affine span.
pub fn hull_in_span(points: &[QVector]) -> Result<SpanHull> {
    let distinct = first_occurrences(points);
    let pts: Vec<QVector> = distinct.iter().map(|&i| points[i].clone()).collect();
    let axes = span_axes(&pts)?;
    if axes.is_empty() {
        return Ok(SpanHull { vertices: alloc::vec![distinct[0]], distinct, axes, facets: Vec::new() });
    }
    let projected: Vec<QVector> = pts.iter().map(|p| p.select(&axes)).collect();
    let facets = facets_of_points(&projected)?;
    let flags = vertex_flags(&projected, &facets);
    let vertices = distinct
        .iter()
        .zip(flags)
        .filter_map(|(&i, v)| v.then_some(i))
        .collect();
    Ok(SpanHull { distinct, axes, facets, vertices })
}

/// Indices of the points that are vertices of their convex hull.
pub fn hull_vertex_set(points: &[QVector]) -> Result<Vec<usize>> {
    Ok(hull_in_span(points)?.vertices)
}

/// True iff every point is a vertex of the hull (no point repeats or lies in
/// the hull of the others).
pub fn is_convex_position(points: &[QVector]) -> Result<bool> {
    Ok(hull_vertex_set(points)?.len() == points.len())
}

/// A full-dimensional polytope given by its vertices, with its facets
/// computed on construction.
#[derive(Clone, Debug)]
pub struct VPolytope {
    vertices: Vec<QVector>,
    facets: Vec<Facet>,
}

impl VPolytope {
    /// Builds the hull of `points`, dropping repeated and non-vertex points
    /// while keeping the order of the rest. The points must affinely span
    /// their ambient space.
    pub fn new(points: Vec<QVector>) -> Result<Self> {
        let facets = facets_of_points(&points)?;
        let flags = vertex_flags(&points, &facets);
        let distinct = first_occurrences(&points);
        let keep: Vec<usize> = distinct.into_iter().filter(|&i| flags[i]).collect();
        if keep.len() == points.len() {
            return Ok(VPolytope { vertices: points, facets });
        }
        let mut new_index = alloc::vec![usize::MAX; points.len()];
        for (k, &i) in keep.iter().enumerate() {
            new_index[i] = k;
        }
        let facets = facets
            .into_iter()
            .map(|f| Facet {
                incident: f
                    .incident
                    .iter()
                    .map(|&i| new_index[i])
                    .filter(|&k| k != usize::MAX)
                    .collect(),
                plane: f.plane,
            })
            .collect();
        let vertices = keep.into_iter().map(|i| points[i].clone()).collect();
        Ok(VPolytope { vertices, facets })
    }

    /// Hull of points that may be lower-dimensional, re-expressed in
    /// coordinates of their affine span. Also returns, for each vertex of the
    /// result, the index of the input point it came from.
    pub fn in_span(points: &[QVector]) -> Result<(Self, Vec<usize>)> {
        let hull = hull_in_span(points)?;
        let verts: Vec<QVector> = hull.vertices.iter().map(|&i| points[i].select(&hull.axes)).collect();
        Ok((VPolytope::new(verts)?, hull.vertices))
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &QVector {
        &self.vertices[i]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Dimension, equal to the ambient dimension.
    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn incidence(&self) -> IncidenceStructure {
        incidence_of(self)
    }

    pub fn face_lattice(&self) -> Result<FaceLattice> {
        face_lattice(&self.incidence(), self.dim())
    }

    pub fn f_vector(&self) -> Result<Vec<usize>> {
        Ok(self.face_lattice()?.f_vector().to_vec())
    }
}

/// Facet list of a polytope.
pub fn facets_of(p: &VPolytope) -> &[Facet] {
    p.facets()
}

pub fn incidence_of(p: &VPolytope) -> IncidenceStructure {
    let sets: Vec<Vec<usize>> = p.facets.iter().map(|f| f.incident.clone()).collect();
    IncidenceStructure::from_facet_sets(p.num_vertices(), &sets)
}

/// Vertex-facet incidence: entry `(v, f)` is set iff vertex `v` lies on
/// facet `f`. Both orientations are stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IncidenceStructure {
    rows: Vec<FixedBitSet>,
    cols: Vec<FixedBitSet>,
}

impl IncidenceStructure {
    pub fn from_facet_sets(num_vertices: usize, facets: &[Vec<usize>]) -> Self {
        let mut rows = alloc::vec![FixedBitSet::with_capacity(facets.len()); num_vertices];
        let mut cols = Vec::with_capacity(facets.len());
        for (f, set) in facets.iter().enumerate() {
            let mut col = FixedBitSet::with_capacity(num_vertices);
            for &v in set {
                col.insert(v);
                rows[v].insert(f);
            }
            cols.push(col);
        }
        IncidenceStructure { rows, cols }
    }

    pub fn num_vertices(&self) -> usize {
        self.rows.len()
    }

    pub fn num_facets(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, v: usize, f: usize) -> bool {
        self.rows[v].contains(f)
    }

    /// Facets through vertex `v`.
    pub fn vertex_facets(&self, v: usize) -> &FixedBitSet {
        &self.rows[v]
    }

    /// Vertices on facet `f`.
    pub fn facet_vertices(&self, f: usize) -> &FixedBitSet {
        &self.cols[f]
    }

    pub fn vertex_degree(&self, v: usize) -> usize {
        self.rows[v].count_ones(..)
    }

    pub fn facet_size(&self, f: usize) -> usize {
        self.cols[f].count_ones(..)
    }

    /// Facet-incidence count of every vertex.
    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.num_vertices()).map(|v| self.vertex_degree(v)).collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        (0..self.num_facets()).map(|f| self.facet_size(f)).collect()
    }

    /// Swaps the roles of vertices and facets.
    pub fn transpose(&self) -> IncidenceStructure {
        IncidenceStructure { rows: self.cols.clone(), cols: self.rows.clone() }
    }

    /// No repeated rows, no repeated columns, and every vertex on at least
    /// `dim` facets.
    pub fn validate(&self, dim: usize) -> Result<()> {
        let distinct_rows: BTreeSet<_> = self.rows.iter().collect();
        if distinct_rows.len() != self.rows.len() {
            return Err(Error::NotPolytopal("repeated vertex row"));
        }
        let distinct_cols: BTreeSet<_> = self.cols.iter().collect();
        if distinct_cols.len() != self.cols.len() {
            return Err(Error::NotPolytopal("repeated facet column"));
        }
        if self.rows.iter().any(|r| r.count_ones(..) < dim) {
            return Err(Error::NotPolytopal("vertex on fewer than dim facets"));
        }
        Ok(())
    }

    /// True iff every vertex lies on exactly `dim` facets.
    pub fn is_simple(&self, dim: usize) -> bool {
        self.rows.iter().all(|r| r.count_ones(..) == dim)
    }

    /// True iff every facet has exactly `dim` vertices.
    pub fn is_simplicial(&self, dim: usize) -> bool {
        self.cols.iter().all(|c| c.count_ones(..) == dim)
    }
}

/// The lattice of faces ordered by inclusion. Faces are vertex sets sorted
/// by dimension; the empty face comes first and the whole polytope last.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    faces: Vec<FixedBitSet>,
    dims: Vec<isize>,
    covers: Vec<Vec<usize>>,
    f_vector: Vec<usize>,
    dim: usize,
}

impl FaceLattice {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn face(&self, i: usize) -> &FixedBitSet {
        &self.faces[i]
    }

    /// Vertex indices of face `i`.
    pub fn face_vertices(&self, i: usize) -> Vec<usize> {
        self.faces[i].ones().collect()
    }

    /// Dimension of face `i` (`-1` for the empty face).
    pub fn face_dim(&self, i: usize) -> isize {
        self.dims[i]
    }

    /// Faces covering face `i`, i.e. one dimension up.
    pub fn covers(&self, i: usize) -> &[usize] {
        &self.covers[i]
    }

    /// Is face `a` contained in face `b`?
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.faces[a].is_subset(&self.faces[b])
    }

    pub fn faces_of_dim(&self, k: isize) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(move |&i| self.dims[i] == k)
    }

    /// Face counts for dimensions `0..dim`.
    pub fn f_vector(&self) -> &[usize] {
        &self.f_vector
    }

    pub fn euler_holds(&self) -> bool {
        euler_relation_holds(&self.f_vector, self.dim)
    }
}

/// `sum (-1)^i f_i == 1 - (-1)^dim`.
pub fn euler_relation_holds(f_vector: &[usize], dim: usize) -> bool {
    let alternating: i128 = f_vector
        .iter()
        .enumerate()
        .map(|(i, &f)| if i % 2 == 0 { f as i128 } else { -(f as i128) })
        .sum();
    let expected = if dim.is_multiple_of(2) { 0 } else { 2 };
    alternating == expected
}

/// Face lattice of a polytope from its incidence structure, by closing the
/// facet vertex sets under intersection. Dimensions are lattice ranks and
/// must agree with `dim`.
pub fn face_lattice(inc: &IncidenceStructure, dim: usize) -> Result<FaceLattice> {
    let lattice = lattice_from_incidence(inc)?;
    if lattice.dim != dim {
        return Err(Error::NotPolytopal("lattice rank differs from dimension"));
    }
    Ok(lattice)
}

/// Like [`face_lattice`] with the dimension read off the lattice rank.
pub fn lattice_from_incidence(inc: &IncidenceStructure) -> Result<FaceLattice> {
    let n = inc.num_vertices();
    if n == 0 {
        return Err(Error::NotPolytopal("no vertices"));
    }
    let mut full = FixedBitSet::with_capacity(n);
    full.insert_range(..);
    let mut seen: BTreeSet<FixedBitSet> = BTreeSet::new();
    seen.insert(FixedBitSet::with_capacity(n));
    seen.insert(full.clone());
    let mut queue: Vec<FixedBitSet> = Vec::new();
    for f in 0..inc.num_facets() {
        let col = inc.facet_vertices(f);
        if *col == full {
            return Err(Error::NotPolytopal("facet contains every vertex"));
        }
        if seen.insert(col.clone()) {
            queue.push(col.clone());
        }
    }
    while let Some(face) = queue.pop() {
        for f in 0..inc.num_facets() {
            let mut meet = face.clone();
            meet.intersect_with(inc.facet_vertices(f));
            if !seen.contains(&meet) {
                seen.insert(meet.clone());
                queue.push(meet);
            }
        }
    }

    let mut faces: Vec<FixedBitSet> = seen.into_iter().collect();
    faces.sort_by(|a, b| a.count_ones(..).cmp(&b.count_ones(..)).then_with(|| a.cmp(b)));

    // Maximal proper subfaces of each face, found largest-first.
    let mut down: Vec<Vec<usize>> = Vec::with_capacity(faces.len());
    for (g, big) in faces.iter().enumerate() {
        let mut maximal: Vec<usize> = Vec::new();
        for f in (0..g).rev() {
            let small = &faces[f];
            if small.count_ones(..) == big.count_ones(..) || !small.is_subset(big) {
                continue;
            }
            if maximal.iter().all(|&k| !small.is_subset(&faces[k])) {
                maximal.push(f);
            }
        }
        down.push(maximal);
    }

    let mut dims: Vec<isize> = alloc::vec![-1; faces.len()];
    for g in 1..faces.len() {
        let below: Vec<isize> = down[g].iter().map(|&f| dims[f]).collect();
        let rank = below[0] + 1;
        if below.iter().any(|&r| r + 1 != rank) {
            return Err(Error::NotPolytopal("lattice is not graded"));
        }
        dims[g] = rank;
    }
    let top = faces.len() - 1;
    let dim = dims[top] as usize;

    for v in 0..n {
        let atom = faces.iter().position(|f| f.count_ones(..) == 1 && f.contains(v));
        match atom {
            Some(i) if dims[i] == 0 => {}
            _ => return Err(Error::NotPolytopal("vertex is not an atom")),
        }
    }
    if (0..inc.num_facets()).any(|f| {
        let i = faces.binary_search_by(|x| {
            x.count_ones(..)
                .cmp(&inc.facet_size(f))
                .then_with(|| x.cmp(inc.facet_vertices(f)))
        });
        i.map_or(true, |i| dims[i] + 1 != dim as isize)
    }) {
        return Err(Error::NotPolytopal("facet is not a coatom"));
    }

    let mut covers: Vec<Vec<usize>> = alloc::vec![Vec::new(); faces.len()];
    for (g, below) in down.iter().enumerate() {
        for &f in below {
            covers[f].push(g);
        }
    }
    let mut f_vector = alloc::vec![0; dim];
    for &d in &dims {
        if d >= 0 && (d as usize) < dim {
            f_vector[d as usize] += 1;
        }
    }
    Ok(FaceLattice { faces, dims, covers, f_vector, dim })
}

/// Vertex pairs spanning an edge, lexicographically ordered.
pub fn edges(lattice: &FaceLattice) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = lattice
        .faces_of_dim(1)
        .map(|i| {
            let vs = lattice.face_vertices(i);
            (vs[0], vs[1])
        })
        .collect();
    out.sort_unstable();
    out
}

/// Facets by exhaustive enumeration of every affinely independent
/// dim-subset, without the covered-subset shortcut. Quadratically slower
/// than [`facets_of_points`]; kept as an independent cross-check.
pub fn facets_brute_force(points: &[QVector]) -> Result<Vec<Facet>> {
    let m = points.first().ok_or(Error::NoPoints)?.len();
    let dim = affine_dim(points)?;
    if dim != m {
        return Err(Error::NotFullDimensional { dim, ambient: m });
    }
    let mut out: Vec<Facet> = Vec::new();
    for subset in Combinations::new(points.len(), m) {
        let chosen: Vec<QVector> = subset.iter().map(|&i| points[i].clone()).collect();
        let Ok(plane) = hyperplane_through(&chosen) else {
            continue;
        };
        let above = points.iter().any(|p| plane.eval_unchecked(p).signum() == Ordering::Greater);
        let below = points.iter().any(|p| plane.eval_unchecked(p).signum() == Ordering::Less);
        if above && below {
            continue;
        }
        let plane = if above { plane.flipped() } else { plane };
        if out.iter().any(|f| f.plane == plane) {
            continue;
        }
        let incident = (0..points.len())
            .filter(|&i| plane.eval_unchecked(&points[i]).is_zero())
            .collect();
        out.push(Facet { plane, incident });
    }
    Ok(out)
}
