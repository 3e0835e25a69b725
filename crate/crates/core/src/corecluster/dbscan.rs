use std::collections::VecDeque;

use rayon::prelude::*;

use super::CoreClusterSet;
use crate::error::{invalid_arg, Result};
use crate::ikernel::IsolationSpace;

/// DBSCAN on the subset where the neighbourhood of `x` is
/// `{y : kappa_I(x, y) >= eps_sim}`.
///
/// Clusters are ranked by size (ties by smallest member) and the largest
/// `k` are kept; members of the others join the noise. A run without any
/// core point returns no clusters.
pub fn ik_dbscan_cores(space: &IsolationSpace, subset: &[usize], eps_sim: f64, min_pts: usize, k: usize) -> Result<CoreClusterSet> {
    if !(eps_sim > 0.0 && eps_sim <= 1.0) {
        return invalid_arg(format!("similarity threshold must lie in (0, 1], got {eps_sim}"));
    }
    if min_pts == 0 || k == 0 {
        return invalid_arg("min_pts and k must be at least 1");
    }
    let mut rows = subset.to_vec();
    rows.sort_unstable();
    let s = rows.len();
    let t = space.model().t;
    let need = (eps_sim * t as f64 - 1e-9).ceil().max(1.0) as usize;

    // cell -> subset positions covered by it
    let mut cells: Vec<Vec<u32>> = vec![Vec::new(); space.model().feature_dim()];
    for (pos, &r) in rows.iter().enumerate() {
        for &c in space.feature(r).indices() {
            cells[c as usize].push(pos as u32);
        }
    }
    let neighbors: Vec<Vec<u32>> = (0..s)
        .into_par_iter()
        .map(|pos| {
            let mut shared = vec![0u32; s];
            for &c in space.feature(rows[pos]).indices() {
                for &o in &cells[c as usize] {
                    shared[o as usize] += 1;
                }
            }
            (0..s as u32).filter(|&o| shared[o as usize] as usize >= need).collect()
        })
        .collect();
    let is_core: Vec<bool> = neighbors.iter().map(|nb| nb.len() >= min_pts).collect();

    let mut label: Vec<Option<usize>> = vec![None; s];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for start in 0..s {
        if !is_core[start] || label[start].is_some() {
            continue;
        }
        let id = clusters.len();
        let mut members = Vec::new();
        let mut queue = VecDeque::from([start]);
        label[start] = Some(id);
        while let Some(p) = queue.pop_front() {
            members.push(p);
            if !is_core[p] {
                continue;
            }
            for &o in &neighbors[p] {
                let o = o as usize;
                if label[o].is_none() {
                    label[o] = Some(id);
                    queue.push_back(o);
                }
            }
        }
        members.sort_unstable();
        clusters.push(members);
    }

    clusters.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let dropped = clusters.split_off(clusters.len().min(k));
    let mut noise: Vec<usize> = (0..s).filter(|&p| label[p].is_none()).collect();
    noise.extend(dropped.into_iter().flatten());
    noise.sort_unstable();

    let to_rows = |v: Vec<usize>| v.into_iter().map(|p| rows[p]).collect::<Vec<_>>();
    Ok(CoreClusterSet {
        clusters: clusters.into_iter().map(to_rows).collect(),
        noise: to_rows(noise),
        subset_indices: rows.clone(),
        requested_k: k,
    })
}
