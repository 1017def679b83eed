//! Orbit counting for matrix groups acting on finite vector spaces over
//! prime fields, with the derived length of the acting group.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{derived_series, is_prime, Group};
use crate::perm::Permutation;

/// A linear action: invertible dim×dim matrices over GF(q), row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorAction {
    pub q: u64,
    pub dim: usize,
    pub generators: Vec<Vec<Vec<u64>>>,
}

/// Orbit census of the nonzero vectors plus the derived length of the group
/// generated by the matrices (as permutations of all vectors).
#[derive(Debug, Clone, Serialize)]
pub struct OrbitSummary {
    pub m: usize,
    pub group_order: usize,
    pub dl: usize,
    pub orbit_sizes: Vec<usize>,
}

fn matrix_determinant_nonzero(m: &[Vec<u64>], q: u64) -> bool {
    let dim = m.len();
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|&x| x % q).collect()).collect();
    for c in 0..dim {
        let Some(pivot) = (c..dim).find(|&r| a[r][c] != 0) else {
            return false;
        };
        a.swap(c, pivot);
        let inv = mod_inv(a[c][c], q);
        for r in 0..dim {
            if r != c && a[r][c] != 0 {
                let f = a[r][c] * inv % q;
                for j in 0..dim {
                    let sub = f * a[c][j] % q;
                    a[r][j] = (a[r][j] + q - sub % q) % q;
                }
            }
        }
    }
    true
}

fn mod_inv(a: u64, q: u64) -> u64 {
    // q prime
    let mut acc = 1u64;
    let mut base = a % q;
    let mut e = q - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    acc
}

/// Counts the orbits of the generated matrix group on the nonzero vectors.
/// `cap` bounds both the point count q^dim and the group order.
pub fn orbit_count(action: &VectorAction, cap: usize) -> Result<OrbitSummary> {
    let q = action.q;
    if !is_prime(q) {
        return Err(Error::InvalidInput(format!(
            "field size {q} is not prime (prime fields only)"
        )));
    }
    if action.dim == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    let points = (q as usize)
        .checked_pow(action.dim as u32)
        .ok_or_else(|| Error::InvalidInput("q^dim overflows".into()))?;
    if points > cap {
        return Err(Error::OrderCapExceeded { reached: points, cap });
    }
    for (i, m) in action.generators.iter().enumerate() {
        if m.len() != action.dim || m.iter().any(|row| row.len() != action.dim) {
            return Err(Error::InvalidInput(format!(
                "generator {i} is not a {d}×{d} matrix",
                d = action.dim
            )));
        }
        if !matrix_determinant_nonzero(m, q) {
            return Err(Error::InvalidInput(format!("generator {i} is singular")));
        }
    }

    // vector index: little-endian base-q digits
    let unpack = |mut v: usize| -> Vec<u64> {
        (0..action.dim)
            .map(|_| {
                let d = (v % q as usize) as u64;
                v /= q as usize;
                d
            })
            .collect()
    };
    let pack = |v: &[u64]| -> usize {
        v.iter()
            .rev()
            .fold(0usize, |acc, &d| acc * q as usize + d as usize)
    };
    let apply = |m: &[Vec<u64>], point: usize| -> usize {
        let v = unpack(point);
        let w: Vec<u64> = (0..action.dim)
            .map(|i| {
                v.iter()
                    .zip(&m[i])
                    .fold(0u64, |acc, (&vj, &mij)| (acc + vj * mij) % q)
            })
            .collect();
        pack(&w)
    };

    // Orbits of nonzero vectors under the generators.
    let mut seen = vec![false; points];
    seen[0] = true;
    let mut orbit_sizes = Vec::new();
    for start in 1..points {
        if seen[start] {
            continue;
        }
        let mut size = 0usize;
        let mut frontier = vec![start];
        seen[start] = true;
        while let Some(x) = frontier.pop() {
            size += 1;
            for m in &action.generators {
                let y = apply(m, x);
                if !seen[y] {
                    seen[y] = true;
                    frontier.push(y);
                }
            }
        }
        orbit_sizes.push(size);
    }

    // The acting group as permutations of all vectors.
    let perms: Result<Vec<Permutation>> = action
        .generators
        .iter()
        .map(|m| {
            let images: Vec<usize> = (0..points).map(|x| apply(m, x)).collect();
            Permutation::from_images(&images)
        })
        .collect();
    let group = Group::closure(points, perms?, cap)?;
    let series = derived_series(&group.whole_subgroup());
    if series.last().unwrap().order() != 1 {
        return Err(Error::NotSolvable(format!("matrix group of order {}", group.order())));
    }
    Ok(OrbitSummary {
        m: orbit_sizes.len(),
        group_order: group.order(),
        dl: series.len() - 1,
        orbit_sizes,
    })
}
