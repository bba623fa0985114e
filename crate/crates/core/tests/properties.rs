use gnlset_core::constructions::{gen_bipartite, gen_type1_tripartite, gen_type2_tripartite};
use gnlset_core::cyclotomic::{Cyclotomic, Rational};
use gnlset_core::document::{set_from_json, set_to_json};
use gnlset_core::oplm::{assemble, float_solution_dim, solution_space, CycloMatrix};
use gnlset_core::states::{LocalFactor, ProductState, StateSet};
use gnlset_core::verdicts::{check_irreducible, find_reduction};
use proptest::prelude::*;

const ORDERS: [u32; 6] = [1, 3, 4, 5, 6, 12];

fn element(order: u32) -> impl Strategy<Value = Cyclotomic> {
    prop::collection::vec((-5i64..=5, 1i64..=4), order as usize).prop_map(move |cs| {
        let coeffs: Vec<Rational> = cs.into_iter().map(|(n, d)| Rational::new(n.into(), d.into())).collect();
        Cyclotomic::from_coeffs(order, &coeffs)
    })
}

fn triple() -> impl Strategy<Value = (Cyclotomic, Cyclotomic, Cyclotomic)> {
    prop::sample::select(ORDERS.to_vec()).prop_flat_map(|o| (element(o), element(o), element(o)))
}

fn close(a: num_complex::Complex64, b: num_complex::Complex64) -> bool {
    (a - b).norm() <= 1e-9 * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #[test]
    fn field_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Cyclotomic::one(a.order()), a.clone());
    }

    #[test]
    fn conjugation_is_an_involutive_homomorphism((a, b, _c) in triple()) {
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert!(close(a.conj().to_complex(), a.to_complex().conj()));
    }

    #[test]
    fn evaluation_is_a_homomorphism((a, b, _c) in triple()) {
        prop_assert!(close((&a * &b).to_complex(), a.to_complex() * b.to_complex()));
        prop_assert!(close((&a + &b).to_complex(), a.to_complex() + b.to_complex()));
    }

    #[test]
    fn canonical_form_is_unique((a, b, _c) in triple()) {
        // equal values ⇔ equal canonical representations ⇔ equal literals
        prop_assert_eq!(a == b, (&a - &b).is_zero());
        prop_assert_eq!(Cyclotomic::parse_literal(&a.to_literal(), a.order()).unwrap(), a.clone());
        let lifted = a.lift(a.order() * 2).unwrap();
        prop_assert!(close(lifted.to_complex(), a.to_complex()));
    }

    #[test]
    fn inner_product_conjugate_symmetry(
        (u, v) in (2usize..5).prop_flat_map(|d| (
            prop::collection::vec(element(6), d),
            prop::collection::vec(element(6), d),
        ))
    ) {
        prop_assume!(u.iter().any(|x| !x.is_zero()) && v.iter().any(|x| !x.is_zero()));
        let (fu, fv) = (LocalFactor::new(u).unwrap(), LocalFactor::new(v).unwrap());
        prop_assert_eq!(fu.inner(&fv).unwrap(), fv.inner(&fu).unwrap().conj());
        prop_assert!(!fu.inner(&fu).unwrap().is_zero());
    }
}

fn generated_sets() -> Vec<StateSet> {
    vec![
        gen_bipartite(3, 3).unwrap(),
        gen_bipartite(3, 5).unwrap(),
        gen_bipartite(4, 6).unwrap(),
        gen_type1_tripartite(4, 4, 4).unwrap(),
        gen_type2_tripartite(3, 3, 4).unwrap(),
    ]
}

fn set_strategy() -> impl Strategy<Value = StateSet> {
    prop::sample::select(generated_sets())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn grouping_preserves_inner_products(set in set_strategy(), i in 0usize..5, j in 0usize..5) {
        let n = set.parties();
        let grouped = set.group_parties(&[(0..n).collect()]).unwrap();
        let (a, b) = (i % set.len(), j % set.len());
        prop_assert_eq!(
            set.states()[a].inner(&set.states()[b]).unwrap(),
            grouped.states()[a].inner(&grouped.states()[b]).unwrap()
        );
    }

    #[test]
    fn identity_and_adjoint_closure(set in set_strategy(), party in 0usize..3) {
        let p = party % set.parties();
        let cs = assemble(&set, &[p]).unwrap();
        let id = CycloMatrix::identity(cs.unknown_dim, cs.order);
        prop_assert!(cs.satisfied_by(&id).unwrap());
        let r = solution_space(&cs).unwrap();
        prop_assert!(r.solution_dim >= 1);
        prop_assert_eq!(r.trivial, r.solution_dim == 1);
        prop_assert_eq!(r.witness.is_some(), !r.trivial);
        for b in &r.basis {
            prop_assert!(cs.satisfied_by(b).unwrap());
            prop_assert!(cs.satisfied_by(&b.adjoint()).unwrap());
        }
        prop_assert_eq!(float_solution_dim(&cs, 1e-9), r.solution_dim);
    }

    #[test]
    fn rows_come_in_adjoint_pairs(set in set_strategy(), party in 0usize..3) {
        let cs = assemble(&set, &[party % set.parties()]).unwrap();
        let d = cs.unknown_dim;
        for row in &cs.rows {
            let (i, j) = row.pair;
            let mirror = cs.rows.iter().find(|r| r.pair == (j, i)).unwrap();
            for r in 0..d {
                for c in 0..d {
                    prop_assert_eq!(&mirror.coefficients[r * d + c], &row.coefficients[c * d + r].conj());
                }
            }
        }
    }

    #[test]
    fn scaling_a_factor_keeps_the_dimension(
        set in set_strategy(), which in 0usize..40, party in 0usize..3, k in 0u32..12, m in 1i64..4,
    ) {
        let p = party % set.parties();
        let before = solution_space(&assemble(&set, &[p]).unwrap()).unwrap().solution_dim;
        let order = set.ambient_order();
        let s = &set.states()[which % set.len()];
        let scale = Cyclotomic::zeta_power(k % order, order).scale(&Rational::from_integer(m.into()));
        let mut states = set.states().to_vec();
        let target = which % set.len();
        let q = (p + 1) % set.parties();
        states[target] = ProductState::new(s.label.clone(), {
            let mut f = s.factors.clone();
            f[q] = f[q].scaled(&scale).unwrap();
            f[p] = f[p].scaled(&scale).unwrap();
            f
        });
        let scaled = StateSet::new(set.dims().to_vec(), order, states, None).unwrap();
        let after = solution_space(&assemble(&scaled, &[p]).unwrap()).unwrap().solution_dim;
        prop_assert_eq!(before, after);
    }

    #[test]
    fn relabeling_a_basis_keeps_the_dimension(set in set_strategy(), party in 0usize..3, seed in any::<u64>()) {
        let p = party % set.parties();
        let d = set.dims()[p];
        let mut perm: Vec<usize> = (0..d).collect();
        let mut x = seed;
        for i in (1..d).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (x >> 33) as usize % (i + 1));
        }
        let states = set.states().iter().map(|s| {
            let mut f = s.factors.clone();
            let amps = s.factors[p].amplitudes();
            f[p] = LocalFactor::new((0..d).map(|k| amps[perm[k]].clone()).collect()).unwrap();
            ProductState::new(s.label.clone(), f)
        }).collect();
        let permuted = StateSet::new(set.dims().to_vec(), set.ambient_order(), states, None).unwrap();
        for q in 0..set.parties() {
            let a = solution_space(&assemble(&set, &[q]).unwrap()).unwrap().solution_dim;
            let b = solution_space(&assemble(&permuted, &[q]).unwrap()).unwrap().solution_dim;
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn documents_round_trip(set in set_strategy()) {
        let text = set_to_json(&set);
        prop_assert_eq!(set_from_json(&text).unwrap(), set.clone());
    }

    #[test]
    fn reducible_and_irreducible_are_exclusive(set in set_strategy()) {
        let irr = check_irreducible(&set).unwrap();
        if let Some(w) = find_reduction(&set) {
            prop_assert!(!irr.proven_irreducible);
            // the projector onto T is itself an admissible element
            let cs = assemble(&set, &[w.party]).unwrap();
            let proj = CycloMatrix::projector(set.dims()[w.party], &w.index_subset, set.ambient_order());
            prop_assert!(cs.satisfied_by(&proj).unwrap());
        }
    }
}

/// Trivial party reports admit no PSD non-scalar solution: random Hermitian
/// samples projected onto the float nullspace always come out ∝ I.
#[test]
fn trivial_reports_have_only_scalar_float_solutions() {
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    let set = gen_bipartite(3, 5).unwrap();
    for p in 0..2 {
        let cs = assemble(&set, &[p]).unwrap();
        let a = gnlset_core::oplm::float_rows(&cs);
        let d = cs.unknown_dim;
        let svd = a.clone().svd(false, true);
        let vt = svd.v_t.unwrap();
        let smax = svd.singular_values.max();
        let mut state = 12345u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for _ in 0..20 {
            let x = DMatrix::<Complex64>::from_fn(d * d, 1, |_, _| Complex64::new(rnd(), rnd()));
            // remove every row-space component
            let mut y = x.clone();
            for (k, s) in svd.singular_values.iter().enumerate() {
                if *s > 1e-9 * smax {
                    let v = vt.row(k).transpose().map(|c| c.conj());
                    let coef = v.dotc(&y);
                    y -= v * coef;
                }
            }
            let e = DMatrix::<Complex64>::from_fn(d, d, |r, c| y[(r * d + c, 0)]);
            let lambda = e[(0, 0)];
            let off = (0..d)
                .flat_map(|r| (0..d).map(move |c| (r, c)))
                .map(|(r, c)| (e[(r, c)] - if r == c { lambda } else { Complex64::new(0.0, 0.0) }).norm())
                .fold(0.0, f64::max);
            assert!(off < 1e-8, "party {p}: non-scalar feasible point");
        }
    }
}
