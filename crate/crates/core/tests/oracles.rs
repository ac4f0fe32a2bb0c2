mod common;

use polydual_core::construct::{combinatorial_dual, cube, ngon, polar_dual, prism, simplex};
use polydual_core::hull::{euler_relation_holds, facets_brute_force, facets_of_points, incidence_of};
use polydual_core::search::find_dual_subset;
use polydual_core::{are_equivalent, SearchOptions};

use common::{catalogue, facet_sets, oracle_facet_sets, oracle_isomorphic};

#[test]
fn facet_enumeration_matches_oracle() {
    for (name, p) in catalogue() {
        let expected = oracle_facet_sets(p.vertices());
        let got: std::collections::BTreeSet<Vec<usize>> =
            facets_of_points(p.vertices()).unwrap().into_iter().map(|f| f.incident).collect();
        assert_eq!(got, expected, "{name}");
        assert_eq!(facet_sets(&p.incidence()), expected, "{name}");
        let brute: std::collections::BTreeSet<Vec<usize>> =
            facets_brute_force(p.vertices()).unwrap().into_iter().map(|f| f.incident).collect();
        assert_eq!(brute, expected, "{name}");
    }
}

#[test]
fn equivalence_matches_oracle() {
    let small: Vec<_> = catalogue().into_iter().filter(|(_, p)| p.num_vertices() <= 10).collect();
    for (na, a) in &small {
        for (nb, b) in &small {
            let (ia, ib) = (a.incidence(), b.incidence());
            let fast = are_equivalent(&ia, &ib);
            if let Some(w) = &fast {
                assert!(w.verify(&ia, &ib), "{na} vs {nb}");
            }
            assert_eq!(fast.is_some(), oracle_isomorphic(&ia, &ib), "{na} vs {nb}");
        }
    }
}

#[test]
fn pruned_search_matches_prune_free_search() {
    let cases = [
        simplex(2).unwrap(),
        simplex(3).unwrap(),
        cube(2).unwrap(),
        cube(3).unwrap(),
        ngon(6).unwrap(),
        prism(&ngon(3).unwrap()).unwrap(),
        prism(&ngon(5).unwrap()).unwrap(),
    ];
    for q in cases {
        let pruned = find_dual_subset(&q, SearchOptions::default()).unwrap();
        let full = find_dual_subset(&q, SearchOptions { prune: false, ..SearchOptions::default() }).unwrap();
        assert_eq!(pruned.mode, full.mode);
        assert_eq!(pruned.subset, full.subset);
        assert_eq!(full.pruned_total(), 0);
    }
}

#[test]
fn euler_relation_on_every_catalogue_entry() {
    for (name, p) in catalogue() {
        let f = p.f_vector().unwrap();
        assert_eq!(f.len(), p.dim(), "{name}");
        assert!(euler_relation_holds(&f, p.dim()), "{name}: {f:?}");
        assert!(p.face_lattice().unwrap().euler_holds(), "{name}");
    }
}

#[test]
fn ridges_lie_in_two_facets() {
    for (name, p) in catalogue() {
        if p.dim() < 2 {
            continue;
        }
        let lattice = p.face_lattice().unwrap();
        let ridge_dim = p.dim() as isize - 2;
        let facets: Vec<_> = lattice.faces_of_dim(ridge_dim + 1).collect();
        for r in lattice.faces_of_dim(ridge_dim) {
            let containing = facets.iter().filter(|&&f| lattice.le(r, f)).count();
            assert_eq!(containing, 2, "{name}");
        }
    }
}

#[test]
fn double_polar_dual_is_equivalent() {
    for (name, p) in catalogue() {
        if p.dim() < 2 {
            continue;
        }
        let dd = polar_dual(&polar_dual(&p).unwrap()).unwrap();
        assert!(are_equivalent(&p.incidence(), &dd.incidence()).is_some(), "{name}");
    }
}

#[test]
fn polar_dual_matches_transpose() {
    for (name, p) in catalogue() {
        if p.dim() < 2 {
            continue;
        }
        let d = polar_dual(&p).unwrap();
        let t = combinatorial_dual(&incidence_of(&p));
        assert!(are_equivalent(&incidence_of(&d), &t).is_some(), "{name}");
        assert_eq!(t.transpose(), incidence_of(&p), "{name}");
    }
}

#[test]
fn lattice_atoms_and_coatoms_reproduce_incidence() {
    for (name, p) in catalogue() {
        let lattice = p.face_lattice().unwrap();
        let atoms: Vec<Vec<usize>> = lattice.faces_of_dim(0).map(|i| lattice.face_vertices(i)).collect();
        let mut expected_atoms: Vec<Vec<usize>> = (0..p.num_vertices()).map(|v| vec![v]).collect();
        let mut atoms_sorted = atoms.clone();
        atoms_sorted.sort();
        expected_atoms.sort();
        assert_eq!(atoms_sorted, expected_atoms, "{name}");
        let coatoms: std::collections::BTreeSet<Vec<usize>> =
            lattice.faces_of_dim(p.dim() as isize - 1).map(|i| lattice.face_vertices(i)).collect();
        assert_eq!(coatoms, facet_sets(&p.incidence()), "{name}");
    }
}
