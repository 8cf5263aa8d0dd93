mod common;

use entmon::invariants::{
    builtin_invariants_of_state, eval_contraction, local_unitary_invariance_check,
    multiplicativity_check, parse_contraction, tangle, tangle_squared_expanded, BuiltinName,
    ContractionExpr, Factor, FactorKind, InvariantTarget,
};
use entmon::locc::{compare_dlocc, copy_ratio_feasibility, slocc_bound, NamedInvariant, RankSpec};
use entmon::monotones::{bipartite_e, e_ensemble, nielsen_e, solve_e, RankVector, SolverConfig};
use entmon::oracle::sample_e;
use entmon::rng::stream;
use entmon::tensor::{haar_local_unitaries, haar_random_state};
use entmon::PartyGrouping;
use proptest::prelude::*;

use common::{random_instrument, random_ranks};

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn small_dims() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2..=3usize, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solver_is_local_unitary_invariant(dims in small_dims(), seed in any::<u64>()) {
        let mut rng = stream(seed, 1);
        let ks = random_ranks(&mut rng, &dims);
        let s = haar_random_state(&dims, seed).unwrap();
        let moved = s.apply_local_unitaries(&haar_local_unitaries(&dims, &mut rng)).unwrap();
        let a = solve_e(&s, &ks, &cfg()).unwrap().value;
        let b = solve_e(&moved, &ks, &cfg()).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-7, "{} vs {}", a, b);
    }

    #[test]
    fn invariants_are_local_unitary_invariant(dims in small_dims(), seed in any::<u64>()) {
        let s = haar_random_state(&dims, seed).unwrap();
        for b in BuiltinName::ALL {
            let r = local_unitary_invariance_check(&InvariantTarget::Builtin(b), &s, 2, seed).unwrap();
            prop_assert!(r.pass, "{} deviates by {}", b, r.max_deviation);
        }
    }

    #[test]
    fn tangle_is_local_unitary_invariant(seed in any::<u64>()) {
        let s = haar_random_state(&[2, 2, 2], seed).unwrap();
        let r = local_unitary_invariance_check(&InvariantTarget::Tangle, &s, 2, seed).unwrap();
        prop_assert!(r.pass);
    }

    #[test]
    fn builtins_are_real_and_normalized(dims in small_dims(), seed in any::<u64>()) {
        let s = haar_random_state(&dims, seed).unwrap();
        let inv = builtin_invariants_of_state(&s).unwrap();
        prop_assert!(!inv.imag_warning);
        prop_assert!((inv.i2 - 1.0).abs() <= 1e-12);
        prop_assert!((inv.i4_4 - inv.i2 * inv.i2).abs() <= 1e-12);
        for (b, v) in inv.entries() {
            let c = eval_contraction(&b.expr(), &s).unwrap().value;
            prop_assert!((c.re - v).abs() <= 1e-12 && c.im.abs() <= 1e-9, "{}", b);
        }
    }

    #[test]
    fn tangle_expansion_matches_square(seed in any::<u64>()) {
        let s = haar_random_state(&[2, 2, 2], seed).unwrap();
        let t = tangle(&s).unwrap();
        prop_assert!(t >= 0.0);
        prop_assert!((tangle_squared_expanded(&s).unwrap() - t * t).abs() <= 1e-9);
    }

    #[test]
    fn simple_invariants_multiply_under_odot(seed in any::<u64>(), dims in small_dims()) {
        let a = haar_random_state(&dims, seed).unwrap();
        let b = haar_random_state(&[2, 2, 2], seed ^ 0xabcd).unwrap();
        for name in [BuiltinName::I4_1, BuiltinName::I4_2, BuiltinName::I6] {
            let r = multiplicativity_check(&name.expr(), &a, &b).unwrap();
            prop_assert!(r.pass, "{} relative deviation {}", name, r.relative_deviation);
        }
    }

    #[test]
    fn supermultiplicative_under_odot(seed in any::<u64>(), ka in prop::collection::vec(1..=2usize, 3), kb in prop::collection::vec(1..=2usize, 3)) {
        let a = haar_random_state(&[2, 2, 2], seed).unwrap();
        let b = haar_random_state(&[2, 2, 2], seed.wrapping_add(1)).unwrap();
        let (ka, kb) = (RankVector::new(ka), RankVector::new(kb));
        let ea = solve_e(&a, &ka, &cfg()).unwrap().value;
        let eb = solve_e(&b, &kb, &cfg()).unwrap().value;
        let ej = solve_e(&a.odot(&b).unwrap(), &ka.product(&kb), &cfg()).unwrap().value;
        prop_assert!(ej - ea * eb >= -1e-7, "{} < {} * {}", ej, ea, eb);
    }

    #[test]
    fn monotone_in_each_rank(dims in small_dims(), seed in any::<u64>(), party in 0..3usize) {
        let mut rng = stream(seed, 2);
        let s = haar_random_state(&dims, seed).unwrap();
        let lo = random_ranks(&mut rng, &dims);
        prop_assume!(lo.ks()[party] < dims[party]);
        let mut hi = lo.ks().to_vec();
        hi[party] += 1;
        let a = solve_e(&s, &lo, &cfg()).unwrap().value;
        let b = solve_e(&s, &RankVector::new(hi), &cfg()).unwrap().value;
        prop_assert!(b >= a - 1e-9);
        prop_assert!(a <= s.squared_norm() + 1e-12);
    }

    #[test]
    fn sampling_never_beats_the_solver(dims in small_dims(), seed in any::<u64>()) {
        let ks = random_ranks(&mut stream(seed, 3), &dims);
        let s = haar_random_state(&dims, seed).unwrap();
        let lo = sample_e(&s, &ks, 64, seed).unwrap();
        prop_assert!(lo <= solve_e(&s, &ks, &cfg()).unwrap().value + 1e-9);
    }

    #[test]
    fn single_cut_matches_partial_sums(dims in small_dims(), seed in any::<u64>(), party in 0..3usize) {
        let s = haar_random_state(&dims, seed).unwrap();
        let cut = PartyGrouping::split(&[party], 3).unwrap();
        let sums = nielsen_e(&s, &cut).unwrap();
        for k in 1..=dims[party] {
            let mut ks = dims.clone();
            ks[party] = k;
            let v = solve_e(&s, &RankVector::new(ks), &cfg()).unwrap().value;
            prop_assert!((v - sums[k - 1]).abs() <= 1e-12);
            prop_assert!((v - bipartite_e(&s, &cut, k, k).unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn unilocal_instruments_do_not_decrease(dims in small_dims(), seed in any::<u64>(), party in 0..3usize) {
        let mut rng = stream(seed, 4);
        let ks = random_ranks(&mut rng, &dims);
        let s = haar_random_state(&dims, seed).unwrap();
        let kraus = random_instrument(dims[party], 2, &mut rng);
        let out = s.apply_unilocal_kraus(party, &kraus).unwrap();
        let before = solve_e(&s, &ks, &cfg()).unwrap().value;
        let after = e_ensemble(&out, &ks, &cfg()).unwrap();
        prop_assert!(after >= before - 1e-6, "{} < {}", after, before);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn dlocc_verdicts_mirror(sa in any::<u64>(), sb in any::<u64>()) {
        let a = haar_random_state(&[2, 2, 2], sa).unwrap();
        let b = haar_random_state(&[2, 2, 2], sb).unwrap();
        let ab = compare_dlocc(&a, &b, None, &cfg()).unwrap();
        let ba = compare_dlocc(&b, &a, None, &cfg()).unwrap();
        prop_assert_eq!(&ab.a_to_b_blocked, &ba.b_to_a_blocked);
        prop_assert_eq!(&ab.b_to_a_blocked, &ba.a_to_b_blocked);
        prop_assert_eq!(ab.incommensurable, ba.incommensurable);
    }

    #[test]
    fn slocc_bounds_are_probabilities(sa in any::<u64>(), sb in any::<u64>()) {
        let a = haar_random_state(&[2, 2, 2], sa).unwrap();
        let b = haar_random_state(&[2, 2, 2], sb).unwrap();
        let r = slocc_bound(&a, &b, None, &cfg()).unwrap();
        for row in &r.rows {
            if let Some(p) = row.bound {
                prop_assert!((0.0..=1.0).contains(&p));
            }
        }
        let own = slocc_bound(&a, &a, None, &cfg()).unwrap();
        prop_assert!(own.overall.is_none() || own.overall == Some(1.0));
    }

    #[test]
    fn copy_ratio_at_one_one_is_plain_equality(sa in any::<u64>(), sb in any::<u64>()) {
        let a = haar_random_state(&[2, 2, 2], sa).unwrap();
        let b = haar_random_state(&[2, 2, 2], sb).unwrap();
        let invs: Vec<NamedInvariant> = BuiltinName::ALL
            .iter()
            .map(|n| NamedInvariant::new(n.as_str(), n.expr()))
            .collect();
        let r = copy_ratio_feasibility(&a, &b, &invs, 2).unwrap();
        let equal = r.invariants.iter().all(|p| (p.value_a - p.value_b).norm() <= 1e-8 * p.value_a.norm().max(p.value_b.norm()));
        prop_assert_eq!(r.feasible.contains(&(1, 1)), equal);
        let same = copy_ratio_feasibility(&a, &a, &invs, 2).unwrap();
        prop_assert!(same.feasible.contains(&(1, 1)) && same.feasible.contains(&(2, 2)));
    }
}

/// Simple-form expression of degree `m` on `slots` parties: slot `s` of the
/// `j`-th `ψ*` is joined to slot `s` of `ψ_{perm_s(j)}`; a few joins go
/// through a `δ`.
fn simple_expr(slots: usize, m: usize, perms: &[Vec<usize>], deltas: &[bool]) -> ContractionExpr {
    let name = |s: usize, a: usize| format!("x{s}n{a}");
    let mut factors = Vec::new();
    let mut extra = Vec::new();
    for a in 0..m {
        let idx: Vec<String> = (0..slots).map(|s| name(s, a)).collect();
        factors.push(Factor {
            kind: FactorKind::Psi,
            indices: idx,
        });
        let conj: Vec<String> = (0..slots)
            .map(|s| {
                let partner = name(s, perms[s][a]);
                if deltas[(s * m + a) % deltas.len()] {
                    let fresh = format!("y{s}n{a}");
                    extra.push(Factor {
                        kind: FactorKind::Delta,
                        indices: vec![partner, fresh.clone()],
                    });
                    fresh
                } else {
                    partner
                }
            })
            .collect();
        factors.push(Factor {
            kind: FactorKind::PsiConj,
            indices: conj,
        });
    }
    factors.extend(extra);
    ContractionExpr::new(factors).unwrap()
}

fn expr_strategy() -> impl Strategy<Value = ContractionExpr> {
    (1..=3usize, 1..=3usize).prop_flat_map(|(slots, m)| {
        let perm = Just((0..m).collect::<Vec<usize>>()).prop_shuffle();
        (
            Just(slots),
            Just(m),
            prop::collection::vec(perm, slots),
            prop::collection::vec(any::<bool>(), 1..6),
        )
            .prop_map(|(slots, m, perms, deltas)| simple_expr(slots, m, &perms, &deltas))
    })
}

proptest! {
    #[test]
    fn printed_expressions_reparse(expr in expr_strategy()) {
        let text = expr.to_string();
        let back = parse_contraction(&text).unwrap();
        prop_assert_eq!(&back, &expr);
        prop_assert_eq!(back.to_string(), text.clone());
        let squeezed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        prop_assert_eq!(parse_contraction(&squeezed).unwrap(), expr.clone());
        prop_assert!(expr.simple_form().simple, "{}", text);
    }

    #[test]
    fn generated_simple_expressions_multiply(expr in expr_strategy(), seed in any::<u64>()) {
        let dims = vec![2; expr.slot_count()];
        let a = haar_random_state(&dims, seed).unwrap();
        let b = haar_random_state(&dims, seed.wrapping_mul(7)).unwrap();
        let r = multiplicativity_check(&expr, &a, &b).unwrap();
        prop_assert!(r.pass, "{}: {}", expr, r.relative_deviation);
    }

    #[test]
    fn parser_never_panics(text in "[a-z*\\[\\], 0-9]{0,40}") {
        let _ = parse_contraction(&text);
    }
}

#[test]
fn fine_rank_witness_rows_use_the_solver() {
    let spec = RankSpec::fine(&[1, 1, 1]);
    let a = haar_random_state(&[2, 2, 2], 1).unwrap();
    let r = compare_dlocc(&a, &a, Some(&[spec]), &cfg()).unwrap();
    assert_eq!(r.rows.len(), 1);
    assert!(r.rows[0].certified_a && r.rows[0].certified_b);
}
