use proptest::prelude::*;

use virasoro_confluence::combinatorics::enumerate_partitions;
use virasoro_confluence::heisenberg::{act_l_fock, delta_of_lambda, fock_basis, to_fock, to_verma, FockConfig, FockVector};
use virasoro_confluence::painleve::{barnes_shift, residual_budget, structure_constant_ratio, tau_series, TauParams, TauSeries, TauSpec};
use virasoro_confluence::scalars::bigcomplex::with_digits;
use virasoro_confluence::scalars::{rat, BigComplex, Field, Q};
use virasoro_confluence::vertexops::regular_vo_coeffs;
use virasoro_confluence::virasoro::{partition_word, shapovalov, Module, ModuleVector};

fn q() -> impl Strategy<Value = Q> {
    (-9i64..=9, 2i64..=13).prop_filter("nonzero", |(n, _)| *n != 0).prop_map(|(n, d)| rat(n, d))
}

/// Values with denominator 97 never make `2x` an integer.
fn generic() -> impl Strategy<Value = Q> {
    (-96i64..=96).prop_map(|n| rat(n, 97))
}

fn vi(sigma: Q, rho: Q, n_max: usize, order: usize) -> TauSpec {
    TauSpec {
        params: TauParams::VIAt0 { theta0: rat(13, 100), thetat: rat(27, 100), theta1: rat(31, 100), thetainf: rat(19, 100), sigma },
        rho,
        n_max,
        order,
    }
}

fn t0() -> BigComplex {
    BigComplex::from_rationals(&rat(1, 20), &rat(0, 1))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn fock_bracket_rank_one(rho in q(), l0 in q(), l1 in q(), level in 0usize..=3) {
        let cfg = FockConfig::new(rho.clone());
        let c = rat(1, 1) - rat(12, 1) * rho.square();
        for mono in fock_basis(level) {
            let v = FockVector::from_terms(vec![l0.clone(), l1.clone()], [(mono, rat(1, 1))]);
            for m in -2i64..=2 {
                for n in -2i64..=2 {
                    let lhs = act_l_fock(m, &act_l_fock(n, &v, &cfg), &cfg).sub(&act_l_fock(n, &act_l_fock(m, &v, &cfg), &cfg));
                    let mut rhs = act_l_fock(m + n, &v, &cfg).scale(&rat(m - n, 1));
                    if m + n == 0 {
                        rhs = rhs.add(&v.scale(&(c.clone() * rat(m * m * m - m, 12))));
                    }
                    prop_assert!(lhs.sub(&rhs).is_zero());
                }
            }
        }
    }

    #[test]
    fn gram_matrix_is_symmetric(delta in q(), c in q(), level in 1usize..=4) {
        let g = shapovalov(&delta, &c, level);
        prop_assert_eq!(g.len(), enumerate_partitions(level).len());
        for i in 0..g.len() {
            for j in 0..g.len() {
                prop_assert_eq!(&g[i][j], &g[j][i]);
            }
        }
    }

    #[test]
    fn dictionary_round_trip(rho in q(), lambda in generic(), coeffs in proptest::collection::vec(q(), 5)) {
        let cfg = FockConfig::new(rho.clone());
        let m = Module::verma(delta_of_lambda(&lambda, &rho), cfg.central_charge());
        let words: Vec<_> = (1..=3).flat_map(enumerate_partitions).map(|p| partition_word(&p)).collect();
        let v = ModuleVector::from_terms(&m, words.into_iter().zip(coeffs));
        let f = to_fock(&v, std::slice::from_ref(&lambda), &cfg).unwrap();
        let back = to_verma(&f, &cfg).unwrap();
        prop_assert!(back.sub(&v).is_zero());
    }

    #[test]
    fn regular_operator_satisfies_its_relations(d1 in q(), d2 in q(), d3 in q(), c in q()) {
        let vo = regular_vo_coeffs(&d1, &d2, &d3, &c, 3);
        prop_assume!(vo.is_ok());
        prop_assert!(vo.unwrap().check_recursion(4).is_ok());
    }

    #[test]
    fn barnes_shift_telescopes(x in (1i64..=96).prop_map(|n| rat(n, 97)), n in -4i64..=4, m in -4i64..=4) {
        let joined = barnes_shift(&x, n + m).unwrap();
        let split = barnes_shift(&x, n).unwrap().mul(&barnes_shift(&(x.clone() + rat(n, 1)), m).unwrap());
        prop_assert_eq!(joined, split);
    }

    #[test]
    fn structure_constant_ratios_telescope(sigma in generic(), n in -3i64..=3, m in -3i64..=3) {
        let p = vi(sigma.clone(), rat(0, 1), 0, 1).params;
        let shifted = vi(sigma + rat(n, 1), rat(0, 1), 0, 1).params;
        let whole = structure_constant_ratio(&p, n + m).unwrap();
        let parts = structure_constant_ratio(&p, n).unwrap().mul(&structure_constant_ratio(&shifted, m).unwrap());
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn integer_phase_shift_leaves_tau_unchanged(rho in q(), k in -2i64..=2) {
        let a = tau_series(&vi(rat(23, 100), rho.clone(), 1, 2)).unwrap();
        let b = tau_series(&vi(rat(23, 100), rho + rat(k, 1), 1, 2)).unwrap();
        let (ja, jb) = (a.jet(&t0(), false).unwrap(), b.jet(&t0(), false).unwrap());
        prop_assert_eq!(format!("{:?}", ja.d), format!("{:?}", jb.d));
    }
}

fn tau_value(s: &TauSeries) -> BigComplex {
    s.jet(&t0(), false).unwrap().d[0].clone()
}

#[test]
fn added_modes_shrink() {
    let taus: Vec<_> = (1..=3).map(|n| tau_value(&tau_series(&vi(rat(23, 100), rat(3, 10), n, 4)).unwrap())).collect();
    let first = (taus[1].clone() - taus[0].clone()).abs_f64();
    let second = (taus[2].clone() - taus[1].clone()).abs_f64();
    assert!(second < first, "{second:e} !< {first:e}");
}

#[test]
fn residual_drops_every_two_orders() {
    with_digits(80, || {
        let series = tau_series(&vi(rat(23, 100), rat(3, 10), 2, 7)).unwrap();
        let r: Vec<f64> = [2, 4, 6].iter().map(|&n| residual_budget(&series, n, &t0(), false).unwrap().residual.abs()).collect();
        assert!(r[1] < r[0] && r[2] < r[1], "{r:?}");
    });
}

#[test]
fn single_mode_is_the_bare_block() {
    let series = tau_series(&vi(rat(23, 100), rat(3, 10), 0, 3)).unwrap();
    assert_eq!(series.modes.len(), 1);
    let mode = &series.modes[0];
    assert_eq!(mode.n, 0);
    assert_eq!(mode.weight.phase, rat(0, 1));
    assert_eq!(mode.weight.ratio.as_rational(), Some(&rat(1, 1)));
}

#[test]
fn jet_independent_of_thread_count() {
    let series = tau_series(&vi(rat(23, 100), rat(3, 10), 2, 4)).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| with_digits(70, || format!("{:?}", series.jet(&t0(), false).unwrap().d)))
    };
    assert_eq!(run(1), run(4));
}
