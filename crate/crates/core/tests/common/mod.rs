//! Oracles and fixtures shared by the integration tests.
//!
//! The oracles deliberately avoid the production algorithms: facet normals
//! come from cofactor expansion and isomorphism from plain backtracking over
//! vertex bijections.

#![allow(dead_code)]

use std::collections::BTreeSet;

use polydual_core::construct::{
    bipyramid, cartesian_product, cross_polytope, cube, iterated_bipyramid, ngon, perturb, polar_dual,
    prism, simplex, truncate_vertices,
};
use polydual_core::hull::IncidenceStructure;
use polydual_core::{QVector, Rational, VPolytope};

fn det(m: &[Vec<Rational>]) -> Rational {
    match m.len() {
        0 => Rational::one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Rational::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Rational>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][j] * &det(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Normal of the hyperplane through `m` points in `R^m` via the generalized
/// cross product of the difference vectors; zero when they are dependent.
fn cofactor_normal(points: &[&QVector]) -> Vec<Rational> {
    let m = points[0].len();
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.coords().iter().zip(points[0].coords()).map(|(a, b)| a - b).collect())
        .collect();
    (0..m)
        .map(|i| {
            let minor: Vec<Vec<Rational>> = diffs
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != i).map(|(_, x)| x.clone()).collect())
                .collect();
            let d = det(&minor);
            if i % 2 == 0 { d } else { -d }
        })
        .collect()
}

fn dot(a: &[Rational], b: &QVector) -> Rational {
    a.iter().zip(b.coords()).fold(Rational::zero(), |acc, (x, y)| &acc + &(x * y))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Vertex sets of all facets of a full-dimensional point set, found by
/// testing every hyperplane through `m` of the points.
pub fn oracle_facet_sets(points: &[QVector]) -> BTreeSet<Vec<usize>> {
    let m = points[0].len();
    let mut found = BTreeSet::new();
    for s in subsets(points.len(), m) {
        let chosen: Vec<&QVector> = s.iter().map(|&i| &points[i]).collect();
        let normal = cofactor_normal(&chosen);
        if normal.iter().all(Rational::is_zero) {
            continue;
        }
        let offset = dot(&normal, chosen[0]);
        let sides: Vec<_> = points.iter().map(|p| (&dot(&normal, p) - &offset).signum()).collect();
        let pos = sides.iter().any(|o| o.is_gt());
        let neg = sides.iter().any(|o| o.is_lt());
        if pos && neg {
            continue;
        }
        let on: Vec<usize> = (0..points.len()).filter(|&i| sides[i].is_eq()).collect();
        // The plane must meet the point set in a set of affine dimension m - 1.
        let on_pts: Vec<QVector> = on.iter().map(|&i| points[i].clone()).collect();
        if polydual_core::affine_dim(&on_pts).unwrap() + 1 == m {
            found.insert(on);
        }
    }
    found
}

pub fn facet_sets(inc: &IncidenceStructure) -> BTreeSet<Vec<usize>> {
    (0..inc.num_facets()).map(|f| inc.facet_vertices(f).ones().collect()).collect()
}

/// Incidence-preserving vertex bijection by exhaustive backtracking: a map
/// is accepted when it carries the family of facet vertex-sets of `a` onto
/// that of `b`.
pub fn oracle_isomorphic(a: &IncidenceStructure, b: &IncidenceStructure) -> bool {
    if a.num_vertices() != b.num_vertices() || a.num_facets() != b.num_facets() {
        return false;
    }
    let fa: Vec<Vec<usize>> = facet_sets(a).into_iter().collect();
    let fb = facet_sets(b);
    let n = a.num_vertices();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        v: usize,
        a: &IncidenceStructure,
        b: &IncidenceStructure,
        fa: &[Vec<usize>],
        fb: &BTreeSet<Vec<usize>>,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if v == map.len() {
            return fa.iter().all(|f| {
                let mut img: Vec<usize> = f.iter().map(|&x| map[x]).collect();
                img.sort_unstable();
                fb.contains(&img)
            });
        }
        for w in 0..map.len() {
            if used[w] || a.vertex_degree(v) != b.vertex_degree(w) {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if go(v + 1, a, b, fa, fb, map, used) {
                return true;
            }
            used[w] = false;
        }
        map[v] = usize::MAX;
        false
    }
    go(0, a, b, &fa, &fb, &mut map, &mut used)
}

/// Built-in polytopes with at most 12 vertices and dimension at most 4.
pub fn catalogue() -> Vec<(String, VPolytope)> {
    let mut out: Vec<(String, VPolytope)> = Vec::new();
    for n in 3..=12 {
        out.push((format!("ngon({n})"), ngon(n).unwrap()));
    }
    for d in 1..=3 {
        out.push((format!("cube({d})"), cube(d).unwrap()));
    }
    for d in 1..=4 {
        out.push((format!("simplex({d})"), simplex(d).unwrap()));
        out.push((format!("cross_polytope({d})"), cross_polytope(d).unwrap()));
    }
    for n in 3..=6 {
        out.push((format!("prism(ngon({n}))"), prism(&ngon(n).unwrap()).unwrap()));
    }
    for n in 3..=8 {
        out.push((format!("bipyramid(ngon({n}))"), bipyramid(&ngon(n).unwrap()).unwrap()));
    }
    out.push(("ngon(3) x cube(2)".into(), cartesian_product(&ngon(3).unwrap(), &cube(2).unwrap()).unwrap()));
    out.push(("ngon(4) x ngon(3)".into(), cartesian_product(&ngon(4).unwrap(), &ngon(3).unwrap()).unwrap()));
    out.push(("iterated_bipyramid(ngon(5), 2)".into(), iterated_bipyramid(&ngon(5).unwrap(), 2).unwrap().result));
    out.push(("polar_dual(prism(ngon(5)))".into(), polar_dual(&prism(&ngon(5).unwrap()).unwrap()).unwrap()));
    out.push(("polar_dual(cube(3))".into(), polar_dual(&cube(3).unwrap()).unwrap()));
    let third = Rational::new(1, 3).unwrap();
    out.push(("truncate(simplex(3))".into(), truncate_vertices(&simplex(3).unwrap(), &third).unwrap()));
    out.push(("truncate(ngon(5))".into(), truncate_vertices(&ngon(5).unwrap(), &third).unwrap()));
    out.push(("perturb(cube(3))".into(), perturb(&cube(3).unwrap(), 100, 1).unwrap()));
    out.push(("perturb(cross_polytope(3))".into(), perturb(&cross_polytope(3).unwrap(), 100, 1).unwrap()));
    out.retain(|(_, p)| p.num_vertices() <= 12 && p.dim() <= 4);
    out
}
