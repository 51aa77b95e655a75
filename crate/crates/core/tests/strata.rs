//! Cross-module checks through the public API: matrices, their Grassmannian
//! images, the graphs of those images, and the point counts.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pmideal::census::{count_y_bruteforce, verify_bundle_count, GraphCensus, RankSpec, StratumSpec};
use pmideal::graphs::{graph_of_point, is_permissible, minimal_cover_pairs, minimize_pair};
use pmideal::grassmannian::{componentwise_product_vanishes, enumerate_grassmannian, factor, theta};
use pmideal::{Budget, ExactMatrix, PrimeModulus, SymmetryAction};

fn fq(q: u64) -> PrimeModulus {
    PrimeModulus::new(q).unwrap()
}

/// Random members of `Y(n, n-2, n-2)`: rank `n - 2` with vanishing principal
/// `(n-2)`-minors, found by rejection from random rank-`(n-2)` products.
fn sample_y(n: usize, q: PrimeModulus, want: usize, rng: &mut ChaCha8Rng) -> Vec<ExactMatrix> {
    let r = n - 2;
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < want && tries < 2_000_000 {
        tries += 1;
        let b = ExactMatrix::random(n, r, q, rng);
        let c = ExactMatrix::random(r, n, q, rng);
        let a = b.mul(&c).unwrap();
        if a.rank() == r && a.principal_minors_vanish(r).unwrap() {
            out.push(a);
        }
    }
    out
}

#[test]
fn theta_images_of_y_have_covering_permissible_graphs() {
    let q = fq(3);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let samples = sample_y(4, q, 40, &mut rng);
    assert!(samples.len() >= 20);
    for a in &samples {
        let (g, h) = theta(a, 2).unwrap();
        assert!(componentwise_product_vanishes(&g, &h).unwrap());
        let (gg, hg) = (graph_of_point(&g).unwrap(), graph_of_point(&h).unwrap());
        assert!(is_permissible(&gg) && is_permissible(&hg));
        // every coordinate vanishes on one side, so the edge sets cover K_n
        assert!(gg.union(&hg).is_complete());
        assert_eq!(factor(a, 2).unwrap().reconstruct(), *a);
    }
}

#[test]
fn minimized_pairs_of_sampled_points_are_minimal_pairs() {
    let q = fq(5);
    let pairs: HashSet<_> = minimal_cover_pairs(5).unwrap().into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let samples = sample_y(5, q, 10, &mut rng);
    assert_eq!(samples.len(), 10);
    for a in samples {
        let (g, _) = theta(&a, 3).unwrap();
        for p in minimize_pair(&graph_of_point(&g).unwrap()).unwrap() {
            assert!(pairs.contains(&p));
        }
    }
}

#[test]
fn relabeling_a_matrix_relabels_its_graphs() {
    let q = fq(7);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sigma = [3, 1, 4, 2];
    let samples = sample_y(4, q, 10, &mut rng);
    assert_eq!(samples.len(), 10);
    for a in samples {
        let b = a.apply_symmetry(&SymmetryAction::Permute(sigma.to_vec())).unwrap();
        assert!(b.principal_minors_vanish(2).unwrap());
        let (ga, _) = theta(&a, 2).unwrap();
        let (gb, _) = theta(&b, 2).unwrap();
        assert_eq!(
            graph_of_point(&ga).unwrap().relabel(&sigma),
            graph_of_point(&gb).unwrap()
        );
    }
}

#[test]
fn symmetries_preserve_stratum_membership() {
    let q = fq(5);
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for a in sample_y(4, q, 10, &mut rng) {
        let k = rng.gen_range(1..5);
        for act in [
            SymmetryAction::Transpose,
            SymmetryAction::ScaleRow { row: k, factor: 2 },
            SymmetryAction::ScaleCol { col: k, factor: 3 },
        ] {
            let b = a.apply_symmetry(&act).unwrap();
            assert_eq!(b.rank(), 2);
            assert!(b.principal_minors_vanish(2).unwrap(), "{act:?}");
        }
    }
}

#[test]
fn graph_census_agrees_with_point_enumeration() {
    let b = Budget::default();
    let q = fq(3);
    let census = GraphCensus::new(5, q, &b).unwrap();
    let points = enumerate_grassmannian(5, 3, q, &b).unwrap();
    assert_eq!(census.total() as usize, points.len());
    let mut tally = std::collections::HashMap::new();
    for p in &points {
        *tally.entry(graph_of_point(p).unwrap()).or_insert(0u64) += 1;
    }
    for (g, c) in census.graphs() {
        assert_eq!(tally.get(&g), Some(&c), "{g}");
    }
}

#[test]
fn bundle_identity_for_full_rank() {
    // Grass(3, 3) is one point with a nonzero coordinate, so H is empty and
    // the identity reads 0 = 0 * |GL|
    let c = verify_bundle_count(3, 3, fq(2), &Budget::default()).unwrap();
    assert_eq!(c.matrices.count, 0);
    assert!(c.holds);
    let any = count_y_bruteforce(
        &StratumSpec::new(3, RankSpec::Any, 3, fq(3)).unwrap(),
        &Budget::default(),
    )
    .unwrap();
    // singular 3x3 over F_3
    assert_eq!(any.count, 3u64.pow(9) - 11_232);
}
