use gnlset_core::constructions::{gen_bipartite, gen_type1_npartite, gen_type1_tripartite, gen_type2_npartite, gen_type2_tripartite};
use gnlset_core::states::{LocalFactor, ProductState, StateSet};
use gnlset_core::verdicts::*;

fn labels(range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|k| format!("phi_{k}")).collect()
}

fn product_basis(d: usize) -> StateSet {
    let mut states = Vec::new();
    for a in 0..d {
        for b in 0..d {
            states.push(ProductState::new(
                format!("e{a}{b}"),
                vec![LocalFactor::basis(d, a, 2).unwrap(), LocalFactor::basis(d, b, 2).unwrap()],
            ));
        }
    }
    StateSet::new(vec![d, d], 2, states, None).unwrap()
}

fn certificates(c: &Classification) -> Vec<&RuleCertificate> {
    c.per_bipartition.iter().filter_map(|v| v.outcome.certificate()).collect()
}

#[test]
fn type1_tripartite_4_4_6() {
    let set = gen_type1_tripartite(4, 4, 6).unwrap();
    let c = classify(&set, &SearchOptions::default()).unwrap();
    assert_eq!(c.genuine, Genuineness::ProvenGenuine);
    assert_eq!(c.irreducible, Irreducibility::ReducibleWithWitness);
    assert_eq!(c.gnl_type, GnlType::TypeI);
    let w = c.reduction.as_ref().unwrap();
    assert_eq!((w.party, w.index_subset.clone()), (0, vec![3]));
    assert_eq!((w.inside.len(), w.outside.len()), (11, 7));
    assert!(verify_reduction(&set, w).is_ok());
    let subsets: std::collections::BTreeSet<Vec<String>> =
        certificates(&c).iter().map(|c| c.subset.clone()).collect();
    assert_eq!(subsets, [labels(1..=7), labels(8..=18)].into_iter().collect());
    for cert in certificates(&c) {
        assert_eq!(cert.rule, Rule::StripIdentical);
        verify_certificate(&set, cert).unwrap();
    }
}

#[test]
fn type2_tripartite_3_4_5() {
    let set = gen_type2_tripartite(3, 4, 5).unwrap();
    let c = classify(&set, &SearchOptions::default()).unwrap();
    assert_eq!(c.party_solution_dims, vec![1, 1, 1]);
    assert_eq!(c.gnl_type, GnlType::TypeII);
    let certs = certificates(&c);
    // C|AB is certified by the block with core (A, C) and rider B
    let cab = certs.iter().find(|c| c.bipartition.side_y == vec![2]).unwrap();
    let mut want = vec!["phi_4".to_string()];
    want.extend(labels(7..=14));
    assert_eq!(cab.subset, want);
    assert_eq!(cab.core_pair, (0, 2));
    assert_eq!(cab.rule, Rule::NonorthogonalRider);
    let bac = certs.iter().find(|c| c.bipartition.side_y == vec![1]).unwrap();
    assert_eq!(bac.subset, labels(1..=7));
    assert_eq!(bac.rule, Rule::NonorthogonalRider);
    for cert in certs {
        verify_certificate(&set, cert).unwrap();
    }
}

#[test]
fn npartite_at_four_parties() {
    let t1 = gen_type1_npartite(&[4, 3, 3, 3]).unwrap();
    assert_eq!(t1.len(), 15);
    let c1 = classify(&t1, &SearchOptions::default()).unwrap();
    assert_eq!(c1.gnl_type, GnlType::TypeI);
    let w = c1.reduction.unwrap();
    assert_eq!((w.party, w.index_subset), (0, vec![3]));

    let t2 = gen_type2_npartite(&[3, 3, 3, 3]).unwrap();
    let c2 = classify(&t2, &SearchOptions::default()).unwrap();
    assert_eq!(c2.per_bipartition.len(), 7);
    assert_eq!(c2.gnl_type, GnlType::TypeII);
    for cert in certificates(&c2) {
        verify_certificate(&t2, cert).unwrap();
    }
}

#[test]
fn product_bases_stay_unknown() {
    for d in [2, 3] {
        let set = product_basis(d);
        let c = classify(&set, &SearchOptions::default()).unwrap();
        assert_eq!(c.genuine, Genuineness::Unknown);
        assert_eq!(c.gnl_type, GnlType::Unknown);
        assert_eq!(c.party_solution_dims, vec![d, d]);
        assert!(certificates(&c).is_empty());
    }
}

#[test]
fn search_without_proof_blocks() {
    let opts = SearchOptions { use_provenance: false, ..SearchOptions::default() };
    let bip = gen_bipartite(3, 4).unwrap();
    let c = classify(&bip, &opts).unwrap();
    assert_eq!(c.gnl_type, GnlType::TypeII);
    assert_eq!(certificates(&c)[0].rule, Rule::TwoPartyTrivialCore);
    let t2 = gen_type2_tripartite(3, 3, 3).unwrap();
    let c = classify(&t2, &opts).unwrap();
    assert_eq!(c.gnl_type, GnlType::TypeII);
    for cert in certificates(&c) {
        verify_certificate(&t2, cert).unwrap();
    }
}

#[test]
fn zero_budget_is_reported_as_budget() {
    let opts = SearchOptions {
        use_provenance: false,
        budget: Some(std::time::Duration::ZERO),
        ..SearchOptions::default()
    };
    let set = gen_bipartite(3, 3).unwrap();
    let bp = &Bipartition::all(2)[0];
    assert_eq!(
        certify_bipartition(&set, bp, &opts).unwrap(),
        BipartitionOutcome::Unknown { reason: UnknownReason::BudgetExhausted }
    );
}

#[test]
fn certificates_hold_on_supersets_and_reject_mutations() {
    let set = gen_type1_tripartite(4, 4, 5).unwrap();
    let block = set.subset(&labels(1..=7)).unwrap();
    let bp = Bipartition::all(3).pop().unwrap();
    let BipartitionOutcome::Certified { certificate } =
        certify_bipartition(&block, &bp, &SearchOptions { use_provenance: false, ..Default::default() }).unwrap()
    else {
        panic!("block should certify");
    };
    verify_certificate(&block, &certificate).unwrap();
    verify_certificate(&set, &certificate).unwrap();

    let mut m = (*certificate).clone();
    m.subset[0].push('x');
    assert!(verify_certificate(&set, &m).is_err());
    let mut m = (*certificate).clone();
    m.core_reports[0].solution_dim = 2;
    assert!(verify_certificate(&set, &m).is_err());
    let mut m = (*certificate).clone();
    m.rule = Rule::NonorthogonalRider;
    assert!(verify_certificate(&set, &m).is_err());
}

#[test]
fn grouped_rule_is_off_by_default() {
    let set = gen_bipartite(3, 3).unwrap();
    let opts = SearchOptions { use_provenance: false, grouped_rule: true, ..Default::default() };
    let c = classify(&set, &opts).unwrap();
    assert_eq!(c.gnl_type, GnlType::TypeII);
    assert!(!SearchOptions::default().grouped_rule);
}

#[test]
fn table1_small_grid_passes() {
    let t = std::time::Instant::now();
    let report = gnlset_core::table1::run_table1(gnlset_core::table1::Grid::Small, &SearchOptions::default());
    let failures: Vec<String> = report.failures().iter().map(|c| c.name()).collect();
    assert!(failures.is_empty(), "{failures:?}\n{}", report.render());
    eprintln!("{} cells in {:?}\n{}", report.cells.len(), t.elapsed(), report.render());
}

type Mutation = Box<dyn Fn(&mut RuleCertificate)>;

#[test]
fn resealed_mutations_fail_on_substance() {
    let set = gen_type2_tripartite(3, 4, 5).unwrap();
    let c = classify(&set, &SearchOptions::default()).unwrap();
    let cert = certificates(&c)[0].clone();
    let cases: Vec<(&str, Mutation)> = vec![
        ("subset label", Box::new(|m| m.subset[0] = "phi_99".into())),
        ("dropped state", Box::new(|m| {
            m.subset.pop();
        })),
        ("core report", Box::new(|m| m.core_reports[1].support.pop().map(|_| ()).unwrap())),
        ("rule", Box::new(|m| m.rule = Rule::StripIdentical)),
        ("core side", Box::new(|m| {
            m.bipartition = Bipartition { side_x: vec![0, 1], side_y: vec![2] };
        })),
        ("overlap", Box::new(|m| {
            if let RiderEvidence::Overlaps { entries, .. } = &mut m.riders[0] {
                entries[0].inner = "7".into();
            }
        })),
    ];
    for (name, f) in cases {
        let mut m = cert.clone();
        f(&mut m);
        let m = m.resealed();
        assert!(verify_certificate(&set, &m).is_err(), "{name} accepted");
    }
    // moving a rider across the cut is a different but still valid claim
    let mut m = cert.clone();
    m.bipartition = Bipartition { side_x: vec![0], side_y: vec![1, 2] };
    if m.bipartition.separates(m.core_pair.0, m.core_pair.1) && m.bipartition != cert.bipartition {
        assert!(verify_certificate(&set, &m.clone().resealed()).is_ok());
        assert!(verify_certificate(&set, &m).is_err(), "stale seal accepted");
    }
}

#[test]
fn relabeling_parties_permutes_verdicts() {
    let set = gen_type2_tripartite(3, 3, 4).unwrap();
    // move party C to the front: new order (C, A, B)
    let permuted = {
        let states = set
            .states()
            .iter()
            .map(|s| ProductState::new(s.label.clone(), vec![s.factors[2].clone(), s.factors[0].clone(), s.factors[1].clone()]))
            .collect();
        StateSet::new(vec![set.dims()[2], set.dims()[0], set.dims()[1]], set.ambient_order(), states, None).unwrap()
    };
    let opts = SearchOptions::default();
    let a = classify(&set, &opts).unwrap();
    let b = classify(&permuted, &opts).unwrap();
    assert_eq!(a.gnl_type, b.gnl_type);
    assert_eq!(b.party_solution_dims, vec![a.party_solution_dims[2], a.party_solution_dims[0], a.party_solution_dims[1]]);
    for cert in certificates(&b) {
        verify_certificate(&permuted, cert).unwrap();
    }
}
