//! Combinatorial equivalence of polytopes, decided on vertex-facet
//! incidence structures.
//!
//! For polytopes the incidence structure determines the whole face lattice,
//! so two polytopes are combinatorially equivalent exactly when there are
//! bijections of vertices and of facets preserving incidence.

use alloc::vec::Vec;

use fixedbitset::FixedBitSet;

use crate::hull::{lattice_from_incidence, IncidenceStructure};

/// Vertex and facet bijections preserving incidence:
/// `a(v, f) == b(vertex_map[v], facet_map[f])`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IsoWitness {
    pub vertex_map: Vec<usize>,
    pub facet_map: Vec<usize>,
}

impl IsoWitness {
    /// Checks both maps are bijections and every matrix entry agrees.
    pub fn verify(&self, a: &IncidenceStructure, b: &IncidenceStructure) -> bool {
        let (nv, nf) = (a.num_vertices(), a.num_facets());
        if nv != b.num_vertices() || nf != b.num_facets() {
            return false;
        }
        if !is_permutation(&self.vertex_map, nv) || !is_permutation(&self.facet_map, nf) {
            return false;
        }
        (0..nv).all(|v| {
            (0..nf).all(|f| a.get(v, f) == b.get(self.vertex_map[v], self.facet_map[f]))
        })
    }

    /// The witness for `(b, a)`.
    pub fn inverse(&self) -> IsoWitness {
        IsoWitness { vertex_map: invert(&self.vertex_map), facet_map: invert(&self.facet_map) }
    }
}

fn is_permutation(map: &[usize], n: usize) -> bool {
    if map.len() != n {
        return false;
    }
    let mut seen = alloc::vec![false; n];
    map.iter().all(|&i| i < n && !core::mem::replace(&mut seen[i], true))
}

fn invert(map: &[usize]) -> Vec<usize> {
    let mut out = alloc::vec![0; map.len()];
    for (i, &j) in map.iter().enumerate() {
        out[j] = i;
    }
    out
}

/// One colour-refinement class: `[side, previous colour, sorted neighbour
/// colours...]` where side is 0 for vertices and 1 for facets.
pub type ClassKey = Vec<u32>;

/// Isomorphism invariant of an incidence structure. Equal for isomorphic
/// structures; unequal signatures prove non-isomorphism.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Signature {
    pub f_vector: Vec<usize>,
    pub vertex_degrees: Vec<usize>,
    pub facet_sizes: Vec<usize>,
    /// Per refinement round, the sorted histogram of class keys.
    pub refinement: Vec<Vec<(ClassKey, usize)>>,
}

struct Refinement {
    vertex_colors: Vec<u32>,
    facet_colors: Vec<u32>,
    history: Vec<Vec<(ClassKey, usize)>>,
}

/// Colour refinement on the bipartite vertex-facet graph. Colours are ranks
/// of class keys in sorted order, so they are canonical: isomorphic inputs
/// receive identical colourings up to the isomorphism.
fn refine(inc: &IncidenceStructure) -> Refinement {
    let (nv, nf) = (inc.num_vertices(), inc.num_facets());
    let mut keys: Vec<ClassKey> = (0..nv)
        .map(|v| alloc::vec![0, inc.vertex_degree(v) as u32])
        .chain((0..nf).map(|f| alloc::vec![1, inc.facet_size(f) as u32]))
        .collect();
    let mut history = Vec::new();
    let mut classes = 0;
    let colors = loop {
        let mut distinct: Vec<&ClassKey> = keys.iter().collect();
        distinct.sort();
        distinct.dedup();
        let mut histogram: Vec<(ClassKey, usize)> =
            distinct.iter().map(|&k| (k.clone(), 0)).collect();
        let colors: Vec<u32> = keys
            .iter()
            .map(|k| {
                let c = distinct.binary_search(&k).expect("key present");
                histogram[c].1 += 1;
                c as u32
            })
            .collect();
        history.push(histogram);
        if distinct.len() == classes {
            break colors;
        }
        classes = distinct.len();
        keys = (0..nv)
            .map(|v| {
                let mut k = alloc::vec![0, colors[v]];
                let mut nb: Vec<u32> = inc.vertex_facets(v).ones().map(|f| colors[nv + f]).collect();
                nb.sort_unstable();
                k.extend(nb);
                k
            })
            .chain((0..nf).map(|f| {
                let mut k = alloc::vec![1, colors[nv + f]];
                let mut nb: Vec<u32> = inc.facet_vertices(f).ones().map(|v| colors[v]).collect();
                nb.sort_unstable();
                k.extend(nb);
                k
            }))
            .collect();
    };
    Refinement {
        vertex_colors: colors[..nv].to_vec(),
        facet_colors: colors[nv..].to_vec(),
        history,
    }
}

pub fn signature(inc: &IncidenceStructure) -> Signature {
    let f_vector = lattice_from_incidence(inc)
        .map(|l| l.f_vector().to_vec())
        .unwrap_or_default();
    let mut vertex_degrees = inc.row_sums();
    vertex_degrees.sort_unstable();
    let mut facet_sizes = inc.col_sums();
    facet_sizes.sort_unstable();
    Signature { f_vector, vertex_degrees, facet_sizes, refinement: refine(inc).history }
}

/// Finds an incidence-preserving pair of bijections from `a` to `b`, if any.
///
/// Facets of `a` are matched in order of rarest colour class first, each to
/// an unused facet of `b` of the same colour (lowest index first). After
/// every assignment the multisets of vertex patterns (colour plus incidence
/// with the facets matched so far) must agree on both sides; once all facets
/// are matched the vertex map is read off those patterns. The result is
/// re-verified entrywise before it is returned.
pub fn are_equivalent(a: &IncidenceStructure, b: &IncidenceStructure) -> Option<IsoWitness> {
    if a.num_vertices() != b.num_vertices() || a.num_facets() != b.num_facets() {
        return None;
    }
    let ra = refine(a);
    let rb = refine(b);
    if ra.history != rb.history {
        return None;
    }
    let nf = a.num_facets();
    let mut class_size = alloc::vec![0usize; ra.history.last().map_or(0, Vec::len)];
    for &c in &ra.facet_colors {
        class_size[c as usize] += 1;
    }
    let mut order: Vec<usize> = (0..nf).collect();
    order.sort_by_key(|&f| (class_size[ra.facet_colors[f] as usize], ra.facet_colors[f], f));

    let mut search = Backtrack {
        a,
        b,
        ra: &ra,
        rb: &rb,
        order,
        facet_map: alloc::vec![usize::MAX; nf],
        used: alloc::vec![false; nf],
        pattern_a: alloc::vec![FixedBitSet::with_capacity(nf); a.num_vertices()],
        pattern_b: alloc::vec![FixedBitSet::with_capacity(nf); b.num_vertices()],
    };
    let witness = search.extend(0)?;
    debug_assert!(witness.verify(a, b));
    Some(witness)
}

struct Backtrack<'a> {
    a: &'a IncidenceStructure,
    b: &'a IncidenceStructure,
    ra: &'a Refinement,
    rb: &'a Refinement,
    order: Vec<usize>,
    facet_map: Vec<usize>,
    used: Vec<bool>,
    pattern_a: Vec<FixedBitSet>,
    pattern_b: Vec<FixedBitSet>,
}

impl Backtrack<'_> {
    fn extend(&mut self, depth: usize) -> Option<IsoWitness> {
        if depth == self.order.len() {
            return self.finish();
        }
        let f = self.order[depth];
        let color = self.ra.facet_colors[f];
        self.set_bits(depth, f, true, usize::MAX);
        for g in 0..self.b.num_facets() {
            if self.used[g] || self.rb.facet_colors[g] != color {
                continue;
            }
            self.used[g] = true;
            self.facet_map[f] = g;
            self.set_bits(depth, usize::MAX, true, g);
            if self.consistent() {
                if let Some(w) = self.extend(depth + 1) {
                    return Some(w);
                }
            }
            self.set_bits(depth, usize::MAX, false, g);
            self.used[g] = false;
            self.facet_map[f] = usize::MAX;
        }
        self.set_bits(depth, f, false, usize::MAX);
        None
    }

    /// Records (or clears) incidence with facet `fa` of `a` / `gb` of `b` at
    /// pattern position `depth`.
    fn set_bits(&mut self, depth: usize, fa: usize, on: bool, gb: usize) {
        if fa != usize::MAX {
            for v in self.a.facet_vertices(fa).ones() {
                self.pattern_a[v].set(depth, on);
            }
        }
        if gb != usize::MAX {
            for v in self.b.facet_vertices(gb).ones() {
                self.pattern_b[v].set(depth, on);
            }
        }
    }

    fn keyed(&self, colors: &[u32], patterns: &[FixedBitSet]) -> Vec<(u32, FixedBitSet, usize)> {
        let mut keys: Vec<_> = colors
            .iter()
            .zip(patterns)
            .enumerate()
            .map(|(v, (&c, p))| (c, p.clone(), v))
            .collect();
        keys.sort();
        keys
    }

    fn consistent(&self) -> bool {
        let ka = self.keyed(&self.ra.vertex_colors, &self.pattern_a);
        let kb = self.keyed(&self.rb.vertex_colors, &self.pattern_b);
        ka.iter().zip(&kb).all(|(x, y)| x.0 == y.0 && x.1 == y.1)
    }

    fn finish(&self) -> Option<IsoWitness> {
        let ka = self.keyed(&self.ra.vertex_colors, &self.pattern_a);
        let kb = self.keyed(&self.rb.vertex_colors, &self.pattern_b);
        let mut vertex_map = alloc::vec![0; ka.len()];
        for (x, y) in ka.iter().zip(&kb) {
            vertex_map[x.2] = y.2;
        }
        let w = IsoWitness { vertex_map, facet_map: self.facet_map.clone() };
        w.verify(self.a, self.b).then_some(w)
    }
}
