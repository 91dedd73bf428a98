mod common;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use polyclust_core::canonical::{
    dominance_certificate, exact_xi, ik_from_xi, truncated_log_xi, ClusterTable, PolymerWeights, Verdict,
};
use polyclust_core::catalog::SmallGraphCatalog;
use polyclust_core::corpus::{connected_regular, connected_regular_with_girth, regular};
use polyclust_core::counting::{independence_profile, union_profile, ProfileKind};
use polyclust_core::verifier::{optimality_scan, verify_dominance, Comparison, Direction, VerifyOptions};
use polyclust_core::{Error, GraphUnion};

use common::spec;

#[test]
fn heawood_dominates_girth_five_cubic_graphs() {
    let corpus = connected_regular_with_girth(14, 3, 5).unwrap();
    assert_eq!(corpus.len(), 9);
    let mut opts = VerifyOptions::new(ProfileKind::IndependentSets, Direction::Max);
    opts.girth_min = Some(5);
    let report = verify_dominance(&corpus, &spec("heawood"), &opts).unwrap();
    assert_eq!(report.summary.checked, 9);
    assert_eq!(report.summary.alarms, 0, "{:?}", report.summary);
    for g in report.graphs.iter().filter(|g| !g.isomorphic_to_reference) {
        assert_eq!(g.results[6].comparison, Comparison::Lt);
        assert_eq!(g.results[7].comparison, Comparison::Lt);
    }
}

#[test]
fn triangle_free_graphs_tie_below_four() {
    let corpus: Vec<_> = regular(12, 3)
        .unwrap()
        .into_iter()
        .filter(|g| g.girth().at_least(4))
        .collect();
    assert!(!corpus.is_empty());
    let mut opts = VerifyOptions::new(ProfileKind::IndependentSets, Direction::Max);
    opts.k_max = Some(3);
    let report = verify_dominance(&corpus, &spec("kdd(3)"), &opts).unwrap();
    assert_eq!(report.summary.alarms, 0);
    assert_eq!(report.summary.eq, 4 * corpus.len());
}

#[test]
fn kdd_unions_dominate_cubic_graphs_on_twelve_vertices() {
    let corpus = regular(12, 3).unwrap();
    let opts = VerifyOptions::new(ProfileKind::IndependentSets, Direction::Max);
    let report = verify_dominance(&corpus, &spec("kdd(3)"), &opts).unwrap();
    assert_eq!(report.summary.gt, 0);
    let opts = VerifyOptions::new(ProfileKind::Matchings, Direction::Max);
    let report = verify_dominance(&corpus, &spec("kdd(3)"), &opts).unwrap();
    assert_eq!(report.summary.gt, 0);
}

#[test]
fn clique_unions_minimise_matchings() {
    let corpus = regular(12, 3).unwrap();
    let mut opts = VerifyOptions::new(ProfileKind::Matchings, Direction::Min);
    opts.k_max = Some(4);
    let report = verify_dominance(&corpus, &spec("clique(4)"), &opts).unwrap();
    assert_eq!(report.summary.alarms, 0);
}

#[test]
fn kdd_is_four_optimal_up_to_twelve_vertices() {
    let h = spec("kdd(3)");
    let corpus: Vec<_> = (4..=12).step_by(2).flat_map(|n| connected_regular(n, 3).unwrap()).collect();
    let gaps = optimality_scan(&corpus, &h, 4).unwrap();
    assert!(gaps.iter().filter(|g| !g.equal_to_reference).all(|g| g.vertex_bound == Some(true)));
    assert_eq!(gaps.iter().filter(|g| g.equal_to_reference).count(), 1);
}

#[test]
fn worked_examples() {
    let catalog = SmallGraphCatalog::build(6).unwrap();
    let table = ClusterTable::new(5).unwrap();
    // Petersen, k = 4
    let petersen = spec("petersen");
    let w = PolymerWeights::for_graph(&catalog, &petersen, 4).unwrap();
    let xi = exact_xi(&w, 4).unwrap();
    let p = independence_profile(&petersen).unwrap();
    assert_eq!(
        ik_from_xi(&xi, &BigUint::from(10u32), 4),
        BigRational::from_integer(BigInt::from(p.get(4)))
    );
    // Two 4-cycles are far outside the convergent regime.
    let h = spec("copies(cycle(4),2)");
    let wh = PolymerWeights::for_graph(&catalog, &h, 3).unwrap();
    assert!(matches!(
        truncated_log_xi(&wh, &table, 2, 3, 128),
        Err(Error::DivergentRegime(_))
    ));
    assert_eq!(
        ik_from_xi(&exact_xi(&wh, 2).unwrap(), &BigUint::from(8u32), 2),
        BigRational::from_integer(20.into())
    );
}

#[test]
fn even_cycles_help_and_odd_cycles_hurt() {
    let catalog = SmallGraphCatalog::build(6).unwrap();
    let table = ClusterTable::new(5).unwrap();
    let n = BigUint::from(30u32) * BigUint::from(10u64).pow(12);
    let union = |s: &str, size: u32| GraphUnion::copies(&spec(s), &n / BigUint::from(size));
    let kdd = union("kdd(3)", 6);
    let petersen = union("petersen", 10);
    let clique = union("clique(4)", 4);
    let exact = |u: &GraphUnion, k: usize| union_profile(u, ProfileKind::IndependentSets, k).unwrap().get(k);
    // 4-cycles raise i_k: K_{3,3} unions beat the girth-5 Petersen unions
    let cert = dominance_certificate(&catalog, &petersen, &kdd, &table, 4, 5, 128).unwrap();
    assert_eq!(cert.verdict, Verdict::CertifiedStrict);
    assert!(exact(&kdd, 4) > exact(&petersen, 4));
    // triangles lower i_k: K_4 unions fall below Petersen unions at k = 3
    let cert = dominance_certificate(&catalog, &clique, &petersen, &table, 3, 4, 128).unwrap();
    assert_eq!(cert.verdict, Verdict::CertifiedStrict);
    assert!(exact(&petersen, 3) > exact(&clique, 3));
    let same = dominance_certificate(&catalog, &kdd, &kdd, &table, 4, 4, 128).unwrap();
    assert_eq!(same.verdict, Verdict::CertifiedNonstrict);
}
