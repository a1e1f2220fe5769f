//! The library walkthrough from the README, kept compiling and correct.

use subdiff_core::*;

#[test]
fn readme_walkthrough() -> Result<()> {
    let model = FractionalModel::new(0.5, 0.3, 1.0, 0.8)?;
    let spectrum = Spectrum::dirichlet(8, std::f64::consts::PI)?;
    let phi = SpectralVector((0..8).map(|k| 0.8 / ((k + 1) * (k + 1)) as f64).collect());
    let source = SourceTerm::zero(8);
    let opts = SolverOptions::default();

    let solution = solve_forward(&model, &spectrum, &source, &phi, None, &opts)?;
    let observed = solution.eval(0.4)?;

    let input = SourceRecoveryInput {
        model,
        observation_time: 0.4,
        phi,
        observed,
    };
    let (recovered_f, recovered_u) = recover_source(&input, &spectrum, &opts)?;
    assert_eq!(recovered_f.len(), recovered_u.n_modes());

    // with a zero source the recovery must return zero and reproduce u
    for k in 0..8 {
        assert!(recovered_f[k].abs() < 1e-12);
        let a = solution.eval_mode(k, 0.9)?;
        let b = recovered_u.eval_mode(k, 0.9)?;
        assert!((a - b).abs() < 1e-10);
    }
    Ok(())
}
