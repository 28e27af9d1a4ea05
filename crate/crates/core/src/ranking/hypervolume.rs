//! Exact hypervolume by dimension sweep over integer boxes.
//!
//! Every value `v` spans the box `[r, v]`. Coordinates are shifted by the
//! reference point so the sweep works on boxes `[0, v - r]` in unsigned
//! integer arithmetic and returns exact volumes.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::objective::ObjectiveVector;

type Point = Vec<u64>;

fn shifted(values: &[ObjectiveVector], r: &ObjectiveVector) -> Result<Vec<Point>> {
    values
        .iter()
        .map(|v| {
            if v.len() != r.len() {
                return Err(Error::usage(format!(
                    "value {v:?} and reference point {r:?} have different lengths"
                )));
            }
            v.values()
                .iter()
                .zip(r.values())
                .map(|(&a, &b)| {
                    if a > b {
                        Ok((a - b) as u64)
                    } else {
                        Err(Error::usage(format!(
                            "value {v:?} does not strictly exceed reference point {r:?}"
                        )))
                    }
                })
                .collect()
        })
        .collect()
}

/// `HV_r(values)`: Lebesgue measure of the union of boxes `[r, v]`.
///
/// Every value must exceed `r` in every coordinate.
pub fn hypervolume(values: &[ObjectiveVector], r: &ObjectiveVector) -> Result<u128> {
    let points = shifted(values, r)?;
    Ok(volume(points, r.len()))
}

/// `Δ_r(x, F) = HV_r(F) - HV_r(F \ {x})` for the member at `index`.
///
/// A member whose value also occurs elsewhere in `front` contributes 0.
pub fn hv_contribution(
    index: usize,
    front: &[ObjectiveVector],
    r: &ObjectiveVector,
) -> Result<u128> {
    if index >= front.len() {
        return Err(Error::usage(format!(
            "index {index} is not a member of a front of size {}",
            front.len()
        )));
    }
    let points = shifted(front, r)?;
    if points
        .iter()
        .enumerate()
        .any(|(j, p)| j != index && *p == points[index])
    {
        return Ok(0);
    }
    Ok(exclusive(&points, index))
}

/// Contributions of all members, duplicates short-circuited to 0.
pub fn contributions(front: &[ObjectiveVector], r: &ObjectiveVector) -> Result<Vec<u128>> {
    let points = shifted(front, r)?;
    let counts = multiplicities(front);
    Ok((0..points.len())
        .map(|i| {
            if counts[&front[i]] > 1 {
                0
            } else {
                exclusive(&points, i)
            }
        })
        .collect())
}

/// Positions of the members with the smallest contribution.
///
/// If some value occurs more than once, exactly the duplicated members are
/// returned without running the sweep: they contribute 0 while every unique
/// member of a front contributes at least 1, since with integer coordinates
/// the unit cube below its corner is covered by no other box.
pub fn min_contributors(front: &[ObjectiveVector], r: &ObjectiveVector) -> Result<Vec<usize>> {
    if front.is_empty() {
        return Ok(Vec::new());
    }
    let counts = multiplicities(front);
    let duplicated: Vec<usize> = (0..front.len())
        .filter(|&i| counts[&front[i]] > 1)
        .collect();
    if !duplicated.is_empty() {
        // Still validate against the reference point.
        shifted(front, r)?;
        return Ok(duplicated);
    }
    let contrib = contributions(front, r)?;
    let min = *contrib.iter().min().expect("non-empty");
    Ok((0..front.len()).filter(|&i| contrib[i] == min).collect())
}

fn multiplicities(values: &[ObjectiveVector]) -> HashMap<&ObjectiveVector, usize> {
    let mut counts = HashMap::with_capacity(values.len());
    for v in values {
        *counts.entry(v).or_insert(0) += 1;
    }
    counts
}

/// Volume of box `index` not covered by any other box.
fn exclusive(points: &[Point], index: usize) -> u128 {
    let own = &points[index];
    let own_volume = own.iter().map(|&c| c as u128).product::<u128>();
    let clipped: Vec<Point> = points
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != index)
        .map(|(_, p)| p.iter().zip(own).map(|(&a, &b)| a.min(b)).collect())
        .collect();
    own_volume - volume(clipped, own.len())
}

/// Volume of the union of boxes `[0, p]` using the first `dim` coordinates.
fn volume(mut points: Vec<Point>, dim: usize) -> u128 {
    points.retain(|p| p[..dim].iter().all(|&c| c > 0));
    match points.len() {
        0 => return 0,
        1 => return points[0][..dim].iter().map(|&c| c as u128).product(),
        _ => {}
    }
    match dim {
        0 => 0,
        1 => points.iter().map(|p| p[0] as u128).max().unwrap_or(0),
        2 => {
            points.sort_unstable_by(|a, b| b[0].cmp(&a[0]).then(b[1].cmp(&a[1])));
            let mut area = 0u128;
            let mut covered_y = 0u64;
            for p in &points {
                if p[1] > covered_y {
                    area += p[0] as u128 * (p[1] - covered_y) as u128;
                    covered_y = p[1];
                }
            }
            area
        }
        _ => {
            let last = dim - 1;
            points.sort_unstable_by(|a, b| b[last].cmp(&a[last]));
            let mut total = 0u128;
            // non-dominated projections of the points seen so far
            let mut slice: Vec<Point> = Vec::with_capacity(points.len());
            for (i, p) in points.iter().enumerate() {
                let proj = &p[..last];
                if !slice.iter().any(|q| weakly_covers(q, proj)) {
                    slice.retain(|q| !weakly_covers(proj, q));
                    slice.push(proj.to_vec());
                }
                let next_height = points.get(i + 1).map_or(0, |q| q[last]);
                let height = p[last] - next_height;
                if height > 0 {
                    total += height as u128 * volume(slice.clone(), last);
                }
            }
            total
        }
    }
}

fn weakly_covers(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}
