use mdpd::parallel::{self, with_threads};
use mdpd_core::eval::{LearnerKind, SelectionMethod, SweepConfig};
use mdpd_core::one_coin::{generate, OneCoinModel};

#[test]
fn parallel_matches_sequential_exactly() {
    let model = OneCoinModel::new(3, vec![0.9, 0.7, 0.6, 0.5, 0.4, 0.8, 0.33, 0.75]).unwrap();
    let (m, t) = generate(&model, 700, 0.25, 19).unwrap();
    let seq_stats = mdpd_core::pairwise::mi_matrix(&m).unwrap();
    let config = SweepConfig {
        methods: vec![SelectionMethod::Score, SelectionMethod::Submatrix, SelectionMethod::Supervised],
        learners: vec![LearnerKind::Mv, LearnerKind::MvEm],
        report_gof: true,
        ..SweepConfig::default()
    };
    let seq = mdpd_core::eval::run_sweep(&m, &t, &config).unwrap();
    for threads in [1, 2, 5] {
        let stats = with_threads(threads, || parallel::mi_matrix(&m)).unwrap().unwrap();
        assert_eq!(stats, seq_stats);
        let report = with_threads(threads, || parallel::run_sweep(&m, &t, &config)).unwrap().unwrap();
        assert_eq!(report, seq);
    }
}

#[test]
fn too_few_workers() {
    let model = OneCoinModel::new(2, vec![0.9]).unwrap();
    let (m, _) = generate(&model, 10, 0.0, 0).unwrap();
    assert!(parallel::mi_matrix(&m).is_err());
}
