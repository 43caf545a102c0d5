use mdpd_core::gof::{bethe_gof, co_observed, conditional_pairwise_mi, TiltedDistribution};
use mdpd_core::learners::{em_fit, em_fit_observed, EmConfig, EmInit, MdpdModel, Posterior};
use mdpd_core::one_coin::{generate, OneCoinModel};
use mdpd_core::pairwise::mi_matrix;
use mdpd_core::{LabelMatrix, Observation};
use proptest::prelude::*;

/// Conditional MI by a dense triple loop over (component, a, b), using only items both workers labelled.
fn brute_force_conditional_mi(m: &LabelMatrix, post: &Posterior, i: usize, j: usize) -> f64 {
    let (c, k) = (m.n_classes(), post.n_components());
    let items: Vec<(usize, usize, usize)> =
        (0..m.n_items()).filter_map(|n| Some((n, m.get(n, i)?, m.get(n, j)?))).collect();
    if items.is_empty() {
        return 0.0;
    }
    let total = items.len() as f64;
    let mut out = 0.0;
    for comp in 0..k {
        let pk: f64 = items.iter().map(|&(n, _, _)| post.row(n)[comp]).sum::<f64>() / total;
        for a in 0..c {
            for b in 0..c {
                let mass = |fa: Option<usize>, fb: Option<usize>| {
                    items
                        .iter()
                        .filter(|&&(_, x, y)| fa.is_none_or(|v| v == x) && fb.is_none_or(|v| v == y))
                        .map(|&(n, _, _)| post.row(n)[comp])
                        .sum::<f64>()
                        / total
                };
                let pab = mass(Some(a), Some(b));
                if pab > 0.0 {
                    out += pab * (pab * pk / (mass(Some(a), None) * mass(None, Some(b)))).ln();
                }
            }
        }
    }
    out
}

/// Plain MI of the C × C empirical joint over co-observed items.
fn restricted_mi(m: &LabelMatrix, i: usize, j: usize) -> f64 {
    brute_force_conditional_mi(m, &Posterior::single_component(m.n_items()), i, j)
}

fn arb_matrix(complete: bool) -> impl Strategy<Value = LabelMatrix> {
    (1usize..=50, 2usize..=8, 2usize..=4).prop_flat_map(move |(n, p, c)| {
        let cell = if complete { (0..c).prop_map(Some).boxed() } else { prop::option::weighted(0.7, 0..c).boxed() };
        prop::collection::vec(cell, n * p).prop_filter_map("need an observation", move |cells| {
            let obs = cells
                .iter()
                .enumerate()
                .filter_map(|(k, l)| l.map(|label| Observation { item: k / p, worker: k % p, label }));
            LabelMatrix::new(n, p, c, obs).ok()
        })
    })
}

fn arb_posterior(n: usize, k: usize) -> impl Strategy<Value = Posterior> {
    prop::collection::vec(0.01..1.0f64, n * k).prop_map(move |raw| {
        let probs: Vec<f64> = raw
            .chunks(k)
            .flat_map(|row| {
                let s: f64 = row.iter().sum();
                row.iter().map(move |v| v / s).collect::<Vec<_>>()
            })
            .collect();
        Posterior::new(k, probs).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn single_component_gof_is_total_pairwise_mi(m in arb_matrix(true)) {
        let p = m.n_workers();
        let subset: Vec<usize> = (0..p).collect();
        let gof = bethe_gof(&m, &Posterior::single_component(m.n_items()), &subset).unwrap();
        let stats = mi_matrix(&m).unwrap();
        let mut total = 0.0;
        for i in 0..p {
            for j in i + 1..p {
                total += stats.mi(i, j);
            }
        }
        prop_assert!((gof - total).abs() < 1e-12, "gof {gof} vs {total}");
    }

    #[test]
    fn single_component_gof_with_missing_uses_co_observed_items(m in arb_matrix(false)) {
        let p = m.n_workers();
        let subset: Vec<usize> = (0..p).collect();
        let gof = bethe_gof(&m, &Posterior::single_component(m.n_items()), &subset).unwrap();
        let mut total = 0.0;
        for i in 0..p {
            for j in i + 1..p {
                total += restricted_mi(&m, i, j);
            }
        }
        prop_assert!((gof - total).abs() < 1e-9, "gof {gof} vs {total}");
    }

    #[test]
    fn conditional_mi_matches_triple_loop(
        (m, post) in arb_matrix(false).prop_flat_map(|m| {
            let n = m.n_items();
            (Just(m), (1usize..=3).prop_flat_map(move |k| arb_posterior(n, k)))
        })
    ) {
        for i in 0..m.n_workers() {
            for j in 0..m.n_workers() {
                if i == j { continue; }
                let got = conditional_pairwise_mi(&m, &post, i, j).unwrap();
                let want = brute_force_conditional_mi(&m, &post, i, j);
                prop_assert!((got - want).abs() < 1e-12, "({i},{j}): {got} vs {want}");
                prop_assert!(got >= -1e-12);
            }
        }
    }

    #[test]
    fn tilted_distribution_is_normalised(post in (1usize..40, 1usize..4).prop_flat_map(|(n, k)| arb_posterior(n, k))) {
        let tilted = TiltedDistribution::new(&post);
        prop_assert!((tilted.total_weight() - 1.0).abs() < 1e-12);
        let w = tilted.component_weights();
        for (k, wk) in w.iter().enumerate() {
            let direct: f64 = (0..post.n_items()).map(|n| tilted.weight(n, k)).sum();
            prop_assert!((wk - direct).abs() < 1e-12);
        }
    }
}

#[test]
fn four_item_fixture() {
    // component 0 holds items 0 and 1, where the workers agree on different labels;
    // component 1 holds items 2 and 3, where both always answer 0
    let m = LabelMatrix::new(
        4,
        2,
        2,
        [(0, 0), (1, 1), (2, 0), (3, 0)]
            .into_iter()
            .flat_map(|(item, label)| [Observation { item, worker: 0, label }, Observation { item, worker: 1, label }]),
    )
    .unwrap();
    let post = Posterior::new(2, vec![1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0]).unwrap();
    let got = conditional_pairwise_mi(&m, &post, 0, 1).unwrap();
    assert!((got - 0.5 * 2f64.ln()).abs() < 1e-12);
    assert!((got - brute_force_conditional_mi(&m, &post, 0, 1)).abs() < 1e-12);
    assert!((bethe_gof(&m, &post, &[1, 0]).unwrap() - got).abs() < 1e-15);

    // without the split the pair looks strongly dependent
    let flat = bethe_gof(&m, &Posterior::single_component(4), &[0, 1]).unwrap();
    assert!(flat > got);
    assert_eq!(co_observed(&m, 0, 1), 4);
}

#[test]
fn independent_workers_have_small_gof() {
    let (n, p, c) = (50_000, 4, 2);
    let model = OneCoinModel::new(c, vec![0.5; p]).unwrap();
    let (m, _) = generate(&model, n, 0.0, 31).unwrap();
    let subset: Vec<usize> = (0..p).collect();
    let gof = bethe_gof(&m, &Posterior::single_component(n), &subset).unwrap();
    let bound = 3.0 * (c * c * p * p) as f64 / (2.0 * n as f64);
    assert!(gof < bound, "gof {gof} vs bound {bound}");
}

fn one_coin_as_mdpd(model: &OneCoinModel) -> MdpdModel {
    let (k, p) = (model.k(), model.abilities().len());
    let mut cond = vec![0.0; p * k * k];
    for i in 0..p {
        for r in 0..k {
            for comp in 0..k {
                cond[(i * k + r) * k + comp] = model.conditional(i, r, comp);
            }
        }
    }
    MdpdModel::new(k, k, p, vec![1.0 / k as f64; k], cond).unwrap()
}

#[test]
fn true_model_explains_dependence() {
    let model = OneCoinModel::new(2, vec![0.8; 5]).unwrap();
    let subset: Vec<usize> = (0..5).collect();
    let no_iters = EmConfig { max_iters: 0, ..EmConfig::default() };
    let mut wins = 0;
    for seed in 0..20 {
        let (m, _) = generate(&model, 2000, 0.0, 300 + seed).unwrap();
        let fit = em_fit(&m, &subset, 2, EmInit::Model(one_coin_as_mdpd(&model)), &no_iters).unwrap();
        assert_eq!(fit.iterations, 0);
        let under_truth = bethe_gof(&m, &fit.posterior, &subset).unwrap();
        let flat = bethe_gof(&m, &Posterior::single_component(2000), &subset).unwrap();
        if under_truth < flat {
            wins += 1;
        }
    }
    assert!(wins >= 18, "true posterior won in {wins}/20 seeds");
}

#[test]
fn gof_falls_along_em_iterations() {
    let model = OneCoinModel::new(2, vec![0.85, 0.8, 0.75, 0.7, 0.65, 0.6]).unwrap();
    let (m, _) = generate(&model, 3000, 0.1, 8).unwrap();
    let subset: Vec<usize> = (0..6).collect();
    // a weakly informative start so EM takes a number of steps
    let mut cond = vec![0.5; 6 * 4];
    for i in 0..6 {
        cond[(i * 2) * 2] = 0.52;
        cond[(i * 2 + 1) * 2] = 0.48;
    }
    let init = MdpdModel::new(2, 2, 6, vec![0.5, 0.5], cond).unwrap();
    let mut trace = Vec::new();
    em_fit_observed(&m, &subset, 2, EmInit::Model(init), &EmConfig::default(), |_, post| {
        trace.push(bethe_gof(&m, post, &subset).unwrap());
    })
    .unwrap();
    let steps = trace.len() - 1;
    assert!(steps >= 5, "only {steps} EM steps");
    let down = trace.windows(2).filter(|w| w[1] <= w[0]).count();
    assert!(down as f64 >= 0.8 * steps as f64, "{down}/{steps} steps nonincreasing: {trace:?}");
}

#[test]
fn gof_rejects_bad_input() {
    let m = LabelMatrix::new(2, 2, 2, [Observation { item: 0, worker: 0, label: 0 }]).unwrap();
    let post = Posterior::single_component(2);
    assert!(bethe_gof(&m, &post, &[0]).is_err());
    assert!(conditional_pairwise_mi(&m, &post, 1, 1).is_err());
    assert!(conditional_pairwise_mi(&m, &Posterior::single_component(3), 0, 1).is_err());
    assert_eq!(conditional_pairwise_mi(&m, &post, 0, 1).unwrap(), 0.0);
}
