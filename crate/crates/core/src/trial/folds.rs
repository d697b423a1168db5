use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::DerivedTrial;
use crate::error::{Error, Result};
use crate::seeding::subject_rng;

/// Default number of cross-validation folds.
pub const DEFAULT_FOLDS: usize = 6;

/// Fold assignment for a list of trials; `assignments[i]` is the fold of the
/// i-th trial passed to [`kfold_split`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub seed: u64,
    pub n_folds: usize,
    pub assignments: Vec<usize>,
}

impl FoldPlan {
    pub fn fold_of(&self, trial: usize) -> usize {
        self.assignments[trial]
    }

    /// Indices held out in `fold`.
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        self.indices_where(|f| f == fold)
    }

    /// Indices used for training when `fold` is held out.
    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        self.indices_where(|f| f != fold)
    }

    /// Number of trials in each fold.
    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_folds];
        for &f in &self.assignments {
            sizes[f] += 1;
        }
        sizes
    }

    fn indices_where(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        self.assignments
            .iter()
            .enumerate()
            .filter(|(_, &f)| keep(f))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Shuffles each subject's trials independently and deals them round-robin
/// into `n_folds` folds, so per-subject fold sizes differ by at most one.
///
/// The shuffle for a subject depends only on `seed` and the subject id.
pub fn kfold_split(trials: &[DerivedTrial], n_folds: usize, seed: u64) -> Result<FoldPlan> {
    if n_folds < 2 {
        return Err(Error::Config(format!(
            "need at least 2 folds, got {n_folds}"
        )));
    }
    let mut subjects: Vec<&str> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (i, t) in trials.iter().enumerate() {
        match subjects.iter().position(|s| *s == t.subject_id()) {
            Some(k) => members[k].push(i),
            None => {
                subjects.push(t.subject_id());
                members.push(vec![i]);
            }
        }
    }

    let mut assignments = vec![0; trials.len()];
    for (subject, mut indices) in subjects.into_iter().zip(members) {
        if indices.len() < n_folds {
            return Err(Error::TooFewTrials {
                subject: subject.to_owned(),
                available: indices.len(),
                required: n_folds,
            });
        }
        indices.shuffle(&mut subject_rng(seed, subject, 0));
        for (pos, idx) in indices.into_iter().enumerate() {
            assignments[idx] = pos % n_folds;
        }
    }
    Ok(FoldPlan {
        seed,
        n_folds,
        assignments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trial::{derive_features, Framing, GameTrial, PreviousOutcome, Response};

    fn trials(subject: &str, n: usize) -> Vec<DerivedTrial> {
        let raw: Vec<GameTrial> = (0..n)
            .map(|i| GameTrial {
                subject_id: subject.into(),
                block_id: 1,
                trial_index: i as u32,
                initial_amount: 100.0,
                win_prob: 0.4,
                framing: Framing::Loss,
                time_limit: 3.0,
                need_level: 0.0,
                current_score: Some(40.0 * i as f64),
                sure_amount: 40.0,
                previous_outcome: Some(if i == 0 {
                    PreviousOutcome::Absent
                } else {
                    PreviousOutcome::Sure
                }),
                is_catch: false,
                response: Response::Sure,
            })
            .collect();
        derive_features(&raw).unwrap()
    }

    #[test]
    fn sizes_follow_pigeonhole() {
        let plan = kfold_split(&trials("s", 7), 6, 1).unwrap();
        let mut sizes = plan.fold_sizes();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(sizes, vec![2, 1, 1, 1, 1, 1]);

        let plan = kfold_split(&trials("s", 960), 6, 1).unwrap();
        assert_eq!(plan.fold_sizes(), vec![160; 6]);
    }

    #[test]
    fn partition_and_determinism() {
        let mut all = trials("a", 50);
        all.extend(trials("b", 31));
        let plan = kfold_split(&all, 6, 9).unwrap();
        assert_eq!(plan, kfold_split(&all, 6, 9).unwrap());
        assert_ne!(plan, kfold_split(&all, 6, 10).unwrap());
        for k in 0..6 {
            let test = plan.test_indices(k);
            let train = plan.train_indices(k);
            assert_eq!(test.len() + train.len(), all.len());
            assert!(test.iter().all(|i| !train.contains(i)));
        }
        // per-subject balance
        for subject in ["a", "b"] {
            let mut sizes = vec![0usize; 6];
            for (i, t) in all.iter().enumerate() {
                if t.subject_id() == subject {
                    sizes[plan.fold_of(i)] += 1;
                }
            }
            let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
            assert!(hi - lo <= 1, "{sizes:?}");
        }
    }

    #[test]
    fn subject_split_ignores_other_subjects() {
        let a = trials("a", 40);
        let mut both = a.clone();
        both.extend(trials("b", 40));
        let alone = kfold_split(&a, 6, 3).unwrap();
        let joint = kfold_split(&both, 6, 3).unwrap();
        assert_eq!(alone.assignments[..], joint.assignments[..40]);
    }

    #[test]
    fn too_few_trials() {
        assert!(matches!(
            kfold_split(&trials("s", 5), 6, 1),
            Err(Error::TooFewTrials { available: 5, required: 6, .. })
        ));
        assert!(matches!(kfold_split(&trials("s", 5), 1, 1), Err(Error::Config(_))));
    }
}
