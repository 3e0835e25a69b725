use std::collections::HashMap;

use crate::error::{Error, Result};

fn contingency(a: &[usize], b: &[usize]) -> Result<(HashMap<(usize, usize), usize>, HashMap<usize, usize>, HashMap<usize, usize>)> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "assignment has {} entries but labels have {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::InvalidArgument("metrics need at least one point".into()));
    }
    let mut joint = HashMap::new();
    let mut rows = HashMap::new();
    let mut cols = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_insert(0) += 1;
        *rows.entry(x).or_insert(0) += 1;
        *cols.entry(y).or_insert(0) += 1;
    }
    Ok((joint, rows, cols))
}

fn entropy(counts: &HashMap<usize, usize>, n: f64) -> f64 {
    counts
        .values()
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information with arithmetic-mean normalization.
///
/// Two single-cluster labelings are identical and score 1.
pub fn nmi(assignment: &[usize], labels: &[usize]) -> Result<f64> {
    let (joint, rows, cols) = contingency(assignment, labels)?;
    let n = assignment.len() as f64;
    let (hu, hv) = (entropy(&rows, n), entropy(&cols, n));
    if hu == 0.0 && hv == 0.0 {
        return Ok(1.0);
    }
    let mi: f64 = joint
        .iter()
        .map(|(&(x, y), &c)| {
            let c = c as f64;
            c / n * (n * c / (rows[&x] as f64 * cols[&y] as f64)).ln()
        })
        .sum();
    Ok((mi / (0.5 * (hu + hv))).clamp(0.0, 1.0))
}

fn pairs(c: usize) -> f64 {
    let c = c as f64;
    c * (c - 1.0) / 2.0
}

/// Adjusted Rand index.
pub fn ari(assignment: &[usize], labels: &[usize]) -> Result<f64> {
    let (joint, rows, cols) = contingency(assignment, labels)?;
    let index: f64 = joint.values().map(|&c| pairs(c)).sum();
    let sum_rows: f64 = rows.values().map(|&c| pairs(c)).sum();
    let sum_cols: f64 = cols.values().map(|&c| pairs(c)).sum();
    let expected = sum_rows * sum_cols / pairs(assignment.len());
    let max = 0.5 * (sum_rows + sum_cols);
    if max == expected {
        // Both labelings are trivial (one cluster, or all singletons).
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}
