use std::collections::BTreeMap;

use rayon::prelude::*;

use super::files::{
    load_params, load_run_record, load_subjects, params_path, write_atomic, write_csv,
    write_json, RunRecord,
};
use super::RunConfig;
use crate::error::{Error, Result};
use crate::estimator::{cross_validate, FitOptions, FitResult};
use crate::evalsim::{
    calibration_bins, catch_ablation, fold_accuracies, generate_cohort, held_out_probabilities,
    mean_sd, predict_choice, simulate_with_probabilities, FactorDistributions,
};
use crate::model::{ComponentMask, ModelKind, ProspectProbabilities};
use crate::trial::{kfold_split, write_features, write_trials, DerivedTrial, FoldPlan};

fn fit_options(config: &RunConfig) -> FitOptions {
    FitOptions {
        reg_weight: config.reg_weight,
        regularize_scale: config.regularize_scale,
        include_catch_in_training: config.include_catch_in_training,
        ..FitOptions::new(config.model)
    }
}

/// Cross-validated fits for every subject in `--data`.
pub fn cmd_fit(config: &RunConfig) -> Result<()> {
    let subjects = load_subjects(&config.data_path)?;
    let out = &config.output_dir;
    for (subject, _) in &subjects {
        params_path(out, subject)?;
    }
    let record = RunRecord {
        model: config.model.name().to_owned(),
        components: match config.model {
            ModelKind::Qdt(mask) => mask,
            ModelKind::Cpt => ComponentMask::NONE,
        },
        n_folds: config.n_folds,
        seed: config.seed,
        reg_weight: config.reg_weight,
        include_catch_in_training: config.include_catch_in_training,
        regularize_scale: config.regularize_scale,
        data: config.data_path.clone(),
    };
    write_json(&out.join(super::RUN_FILE), &record)?;

    let options = fit_options(config);
    let fitted: Vec<(String, Vec<FitResult>)> = subjects
        .par_iter()
        .map(|(subject, trials)| {
            let (_, fits) = cross_validate(trials, config.n_folds, config.seed, &options)?;
            write_json(&params_path(out, subject)?, &fits)?;
            Ok((subject.clone(), fits))
        })
        .collect::<Result<_>>()?;

    for (subject, fits) in &fitted {
        let objectives: Vec<f64> = fits.iter().map(|f| f.objective).collect();
        let converged = fits.iter().filter(|f| f.converged).count();
        println!(
            "{subject}\t{}\tfolds={}\tmean_objective={:.4}\tconverged={converged}/{}",
            config.model,
            fits.len(),
            mean_sd(&objectives).0,
            fits.len()
        );
    }
    Ok(())
}

struct Fitted {
    subject: String,
    trials: Vec<DerivedTrial>,
    plan: FoldPlan,
    probs: Vec<ProspectProbabilities>,
}

/// Held-out probabilities for every subject of a fitted run.
fn load_fitted(config: &RunConfig) -> Result<(RunRecord, Vec<Fitted>)> {
    let record = load_run_record(&config.output_dir)?;
    let subjects = load_subjects(&config.data_path)?;
    let fitted = subjects
        .into_iter()
        .map(|(subject, trials)| {
            let fits = load_params(&config.output_dir, &subject)?;
            let plan = kfold_split(&trials, record.n_folds, record.seed)?;
            let probs = held_out_probabilities(&trials, &plan, &fits)?;
            Ok(Fitted {
                subject,
                trials,
                plan,
                probs,
            })
        })
        .collect::<Result<_>>()?;
    Ok((record, fitted))
}

/// Held-out predictions, one row per trial.
pub fn cmd_predict(config: &RunConfig) -> Result<()> {
    let (_, fitted) = load_fitted(config)?;
    let mut rows = Vec::new();
    for f in &fitted {
        for (i, (t, p)) in f.trials.iter().zip(&f.probs).enumerate() {
            let raw = t.trial();
            rows.push([
                f.subject.clone(),
                raw.block_id.to_string(),
                raw.trial_index.to_string(),
                f.plan.fold_of(i).to_string(),
                u8::from(raw.is_catch).to_string(),
                p.f_gamble.to_string(),
                p.q_gamble.to_string(),
                p.p_gamble.to_string(),
                predict_choice(p).as_str().to_owned(),
                raw.response.as_str().to_owned(),
            ]);
        }
    }
    let path = config.output_dir.join("predictions.csv");
    write_csv(
        &path,
        &[
            "subject_id", "block_id", "trial_index", "fold", "is_catch", "f_gamble", "q_gamble",
            "p_gamble", "predicted", "response",
        ],
        rows,
    )?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Accuracy per subject and fold, calibration deciles and factor histograms.
pub fn cmd_evaluate(config: &RunConfig) -> Result<()> {
    let (record, fitted) = load_fitted(config)?;
    let model = record.model_kind()?.to_string();
    let out = &config.output_dir;

    let mut acc_rows = Vec::new();
    let mut summary_rows = Vec::new();
    let mut by_fold = vec![Vec::new(); record.n_folds];
    let mut pooled_p = Vec::new();
    let mut pooled_r = Vec::new();
    let mut factors = FactorDistributions::new();
    for f in &fitted {
        let accs = fold_accuracies(&f.trials, &f.plan, &f.probs, config.fair_only)?;
        for (k, a) in accs.iter().enumerate() {
            acc_rows.push([f.subject.clone(), model.clone(), k.to_string(), a.to_string()]);
            by_fold[k].push(*a);
        }
        let (mean, sd) = mean_sd(&accs);
        summary_rows.push([f.subject.clone(), model.clone(), mean.to_string(), sd.to_string()]);
        for (t, p) in f.trials.iter().zip(&f.probs) {
            if config.fair_only && t.is_catch() {
                continue;
            }
            if let Some(choice) = t.response().choice() {
                pooled_p.push(p.p_gamble);
                pooled_r.push(choice);
            }
            factors.add(p)?;
        }
    }
    let fold_means: Vec<f64> = by_fold.iter().map(|v| mean_sd(v).0).collect();
    let (mean, sd) = mean_sd(&fold_means);
    summary_rows.push(["all".into(), model.clone(), mean.to_string(), sd.to_string()]);

    write_csv(&out.join("accuracy.csv"), &["subject", "model", "fold", "accuracy"], acc_rows)?;
    write_csv(
        &out.join("accuracy_summary.csv"),
        &["subject", "model", "mean", "sd"],
        summary_rows,
    )?;

    let report = calibration_bins(&pooled_p, &pooled_r)?;
    write_csv(
        &out.join("calibration.csv"),
        &["bin_lower", "bin_upper", "midpoint", "n", "empirical_rate"],
        report.bins.iter().map(|b| {
            [
                b.lower.to_string(),
                b.upper.to_string(),
                b.midpoint.to_string(),
                b.n_trials.to_string(),
                b.empirical_rate.map(|r| r.to_string()).unwrap_or_default(),
            ]
        }),
    )?;

    let hist_rows = [("f", &factors.utility), ("q", &factors.attraction)]
        .into_iter()
        .flat_map(|(name, h)| {
            h.rows()
                .map(move |(lower, count)| [name.to_owned(), lower.to_string(), count.to_string()])
        });
    write_csv(&out.join("factor_hist.csv"), &["factor", "bin_lower", "count"], hist_rows)?;

    println!(
        "{model}: accuracy {mean:.3} ± {sd:.3} over {} subjects; calibration {}/{} bins in band",
        fitted.len(),
        report.in_band_count,
        report.non_empty()
    );
    Ok(())
}

/// Similarity between simulated and observed choices.
pub fn cmd_simulate(config: &RunConfig) -> Result<()> {
    let (record, fitted) = load_fitted(config)?;
    let model = record.model_kind()?.to_string();
    let trials: Vec<DerivedTrial> = fitted.iter().flat_map(|f| f.trials.clone()).collect();
    let p: Vec<f64> = fitted
        .iter()
        .flat_map(|f| f.probs.iter().map(|p| p.p_gamble))
        .collect();
    let report = simulate_with_probabilities(&trials, &p, config.n_sims, config.seed)?;
    let out = &config.output_dir;
    write_csv(
        &out.join("similarity_hist.csv"),
        &["bin_lower", "count"],
        report
            .histogram
            .rows()
            .map(|(lower, count)| [lower.to_string(), count.to_string()]),
    )?;
    write_csv(
        &out.join("similarity.csv"),
        &["subject", "model", "mean_similarity"],
        report
            .subjects
            .iter()
            .map(|s| [s.subject_id.clone(), model.clone(), s.mean().to_string()]),
    )?;
    println!(
        "{model}: mean similarity {:.4} over {} subjects x {} simulations",
        report.mean_similarity(),
        report.subjects.len(),
        report.n_sims
    );
    Ok(())
}

/// Catch-trial ablation per subject.
pub fn cmd_ablate(config: &RunConfig) -> Result<()> {
    let subjects = load_subjects(&config.data_path)?;
    let options = fit_options(config);
    let results = subjects
        .par_iter()
        .map(|(_, trials)| {
            let plan = kfold_split(trials, config.n_folds, config.seed)?;
            catch_ablation(trials, &plan, &options)
        })
        .collect::<Result<Vec<_>>>()?;
    let model = config.model.to_string();
    write_csv(
        &config.output_dir.join("ablation.csv"),
        &[
            "subject", "model", "with_catch", "without_catch", "n_train_with", "n_train_without",
            "n_test",
        ],
        results.iter().map(|r| {
            [
                r.subject_id.clone(),
                model.clone(),
                r.with_catch.to_string(),
                r.without_catch.to_string(),
                r.n_train_with.to_string(),
                r.n_train_without.to_string(),
                r.n_test.to_string(),
            ]
        }),
    )?;
    let gains: Vec<f64> = results.iter().map(|r| r.gain()).collect();
    let (mean, sd) = mean_sd(&gains);
    println!("{model}: catch trials in training change fair-trial accuracy by {mean:+.4} ± {sd:.4}");
    Ok(())
}

/// Synthetic cohort plus its ground truth.
pub fn cmd_synth(config: &RunConfig) -> Result<()> {
    let cohort = generate_cohort(
        &config.shape.descriptor(),
        config.n_subjects,
        config.model,
        config.seed,
    )?;
    let out = &config.output_dir;
    let data = out.join("synthetic.csv");
    write_atomic(&data, |w| write_trials(w, &cohort.trials))?;
    let truth: BTreeMap<&str, _> = cohort
        .subjects
        .iter()
        .map(|s| (s.subject_id.as_str(), s.true_params))
        .collect();
    write_json(&out.join("truth.json"), &truth)?;
    println!(
        "wrote {} rows for {} {} subjects to {}",
        cohort.trials.len(),
        cohort.subjects.len(),
        config.shape,
        data.display()
    );
    Ok(())
}

/// One feature row per trial.
pub fn cmd_export_features(config: &RunConfig) -> Result<()> {
    let subjects = load_subjects(&config.data_path)?;
    let trials: Vec<DerivedTrial> = subjects.into_iter().flat_map(|(_, t)| t).collect();
    if trials.is_empty() {
        return Err(Error::EmptyFile(config.data_path.clone()));
    }
    let path = config.output_dir.join("features.csv");
    write_atomic(&path, |w| write_features(w, &trials))?;
    println!("wrote {} feature rows to {}", trials.len(), path.display());
    Ok(())
}
