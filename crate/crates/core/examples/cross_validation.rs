//! Six-fold cross-validation of every attraction-component subset against
//! the CPT baseline on one synthetic subject.
//!
//! ```bash
//! cargo run --release --example cross_validation
//! ```

use qdt_choice::estimator::{cross_validate, FitOptions};
use qdt_choice::evalsim::{
    fold_accuracies, full_model, generate_cohort, held_out_probabilities, mean_sd,
    ExperimentDescriptor,
};
use qdt_choice::model::{ComponentMask, ModelKind};
use qdt_choice::trial::{derive_features, DEFAULT_FOLDS};

fn main() -> qdt_choice::Result<()> {
    let cohort = generate_cohort(&ExperimentDescriptor::dataset2(), 1, full_model(), 3)?;
    let trials = derive_features(&cohort.trials)?;

    let mut models = vec![ModelKind::Cpt];
    for mask in ["time_frame", "memory", "need", "time_frame,memory", "time_frame,memory,need"] {
        models.push(ModelKind::Qdt(mask.parse::<ComponentMask>()?));
    }
    for model in models {
        let (plan, fits) = cross_validate(&trials, DEFAULT_FOLDS, 42, &FitOptions::new(model))?;
        let probs = held_out_probabilities(&trials, &plan, &fits)?;
        let all = fold_accuracies(&trials, &plan, &probs, false)?;
        let fair = fold_accuracies(&trials, &plan, &probs, true)?;
        let (m, sd) = mean_sd(&all);
        let (fm, fsd) = mean_sd(&fair);
        println!("{model:<30} accuracy {m:.3} ± {sd:.3}   fair trials {fm:.3} ± {fsd:.3}");
    }
    Ok(())
}
