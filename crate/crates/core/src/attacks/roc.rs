use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn split_classes<T: Scalar>(scores: &[(T, bool)]) -> Result<(Vec<T>, Vec<T>)> {
    let (members, non_members): (Vec<_>, Vec<_>) = scores.iter().partition(|(_, m)| *m);
    if members.is_empty() || non_members.is_empty() {
        return Err(Error::DegenerateLabels {
            members: members.len(),
            non_members: non_members.len(),
        });
    }
    Ok((
        members.into_iter().map(|(s, _)| s).collect(),
        non_members.into_iter().map(|(s, _)| s).collect(),
    ))
}

/// ROC AUC as the Mann–Whitney statistic with ties counted as one half.
pub fn roc_auc<T: Scalar>(scores: &[(T, bool)]) -> Result<f64> {
    let (members, mut non_members) = split_classes(scores)?;
    non_members.sort_by(|a, b| a.partial_cmp(b).expect("finite scores"));
    // Twice the numerator keeps the count integral.
    let mut doubled: u64 = 0;
    for s in &members {
        let below = non_members.partition_point(|x| x < s);
        let not_above = non_members.partition_point(|x| x <= s);
        doubled += 2 * below as u64 + (not_above - below) as u64;
    }
    Ok(doubled as f64 / (2 * members.len() as u64 * non_members.len() as u64) as f64)
}

/// Fraction of members scored strictly above every non-member.
pub fn tpr_at_fpr_zero<T: Scalar>(scores: &[(T, bool)]) -> Result<f64> {
    let (members, non_members) = split_classes(scores)?;
    let threshold = non_members.iter().copied().fold(T::neg_infinity(), T::max);
    let detected = members.iter().filter(|&&s| s > threshold).count();
    Ok(detected as f64 / members.len() as f64)
}
