mod common;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use surface_lab::decoder::{matching_weight, mwpm, DefectGraph, SurfaceCode};
use surface_lab::stabilizer::{chain_boundary, dual_chain_boundary, ErrorType};
use surface_lab::{Lattice, LatticeKind};

use common::{brute_force_matching, dual_distances, primal_distances};

#[test]
fn defect_distances_match_floyd_warshall_on_hexagonal() {
    let lat = Lattice::build(LatticeKind::Hexagonal, 6).unwrap();
    let code = SurfaceCode::new(lat.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (ty, oracle) in [
        (ErrorType::Z, primal_distances(&lat)),
        (ErrorType::X, dual_distances(&lat)),
    ] {
        let n = oracle.len();
        for _ in 0..20 {
            let mut defects = sample(&mut rng, n, 6).into_vec();
            defects.sort_unstable();
            let g = DefectGraph::build(code.graph(ty), &defects);
            for i in 0..6 {
                for j in 0..6 {
                    assert_eq!(
                        g.dist(i, j) as u64,
                        oracle[defects[i]][defects[j]],
                        "{ty} defects {defects:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn paths_have_shortest_length_and_right_endpoints() {
    let lat = Lattice::build(LatticeKind::Kagome, 4).unwrap();
    let code = SurfaceCode::new(lat.clone());
    let d = primal_distances(&lat);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let mut defects = sample(&mut rng, lat.num_vertices(), 4).into_vec();
        defects.sort_unstable();
        let g = DefectGraph::build(code.graph(ErrorType::Z), &defects);
        for i in 0..4 {
            for j in (i + 1)..4 {
                let path = g.path(i, j);
                assert_eq!(path.len() as u64, d[defects[i]][defects[j]]);
                let mut ends = vec![defects[i], defects[j]];
                ends.sort_unstable();
                assert_eq!(chain_boundary(&lat, &path), ends);
            }
        }
    }
}

#[test]
fn matching_weight_matches_brute_force() {
    let lattices: Vec<Lattice> = [
        (LatticeKind::Square, 5),
        (LatticeKind::Kagome, 3),
        (LatticeKind::Hexagonal, 4),
        (LatticeKind::Trihexa, 3),
        (LatticeKind::Hexagonal.dual(), 4),
    ]
    .into_iter()
    .map(|(k, l)| Lattice::build(k, l).unwrap())
    .collect();
    let oracles: Vec<_> = lattices.iter().map(primal_distances).collect();
    let codes: Vec<_> = lattices.iter().cloned().map(SurfaceCode::new).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for instance in 0..500 {
        let which = instance % lattices.len();
        let n = lattices[which].num_vertices();
        let count = 2 * rng.random_range(1..=5usize);
        let mut defects = sample(&mut rng, n, count.min(n & !1)).into_vec();
        defects.sort_unstable();
        let g = DefectGraph::build(codes[which].graph(ErrorType::Z), &defects);
        let pairs = mwpm(&g).unwrap();
        let mut seen: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..defects.len()).collect::<Vec<_>>());
        assert_eq!(
            matching_weight(&g, &pairs),
            brute_force_matching(&oracles[which], &defects),
            "instance {instance}: {defects:?}"
        );
    }
}

#[test]
fn residual_is_a_cycle_and_failure_tracks_its_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for kind in LatticeKind::BASE {
        let lat = Lattice::build(kind.clone(), 4).unwrap();
        let code = SurfaceCode::new(lat.clone());
        for ty in [ErrorType::X, ErrorType::Z] {
            for _ in 0..40 {
                let errors: Vec<usize> =
                    (0..lat.num_edges()).filter(|_| rng.random_bool(0.12)).collect();
                let out = code.decode(&errors, ty).unwrap();
                let boundary = match ty {
                    ErrorType::Z => chain_boundary(&lat, &out.residual),
                    ErrorType::X => dual_chain_boundary(&lat, &out.residual),
                };
                assert!(boundary.is_empty(), "{kind} {ty}");
                assert_eq!(out.failed, out.failure_class != [0, 0]);
                assert!(!out.logical_lost);
            }
        }
    }
}

#[test]
fn low_weight_errors_are_corrected() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for kind in LatticeKind::BASE {
        let lat = Lattice::build(kind.clone(), 6).unwrap();
        let dual = lat.dual();
        let code = SurfaceCode::new(lat.clone());
        for (ty, d) in [(ErrorType::Z, lat.distance()), (ErrorType::X, dual.distance())] {
            let t = (d - 1) / 2;
            for _ in 0..30 {
                let errors = sample(&mut rng, lat.num_edges(), t).into_vec();
                let out = code.decode(&errors, ty).unwrap();
                assert!(!out.failed, "{kind} {ty} d={d} errors {errors:?}");
            }
        }
    }
}

#[test]
fn logical_operators_are_undetected_failures() {
    for kind in LatticeKind::BASE {
        let lat = Lattice::build(kind.clone(), 4).unwrap();
        let code = SurfaceCode::new(lat.clone());
        for class in [[1, 0], [0, 1], [1, 1]] {
            let cycle = lat.noncontractible_cycle(class);
            assert!(chain_boundary(&lat, &cycle).is_empty());
            let out = code.decode(&cycle, ErrorType::Z).unwrap();
            assert!(out.correction.is_empty());
            assert!(out.failed);
            assert_eq!(out.failure_class, class);
        }
    }
}
