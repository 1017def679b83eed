//! Floating-point oracle for character tables: numerically diagonalizes a
//! random real combination of the class-sum matrices (complex Hessenberg
//! reduction, shifted QR for the eigenvalues, inverse iteration for the
//! eigenvectors), reads off central characters and compares the resulting
//! character values with the exact table, up to row permutation.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;

use charkit::group::Group;
use charkit::CharacterTable;

type C = Complex64;

/// Class matrix (A_j)_{il}: pairs (x, y) ∈ C_j × C_i with xy the fixed
/// representative of C_l. Recomputed here independently of the library's
/// modular pipeline.
fn class_matrix(g: &Group, j: usize) -> Vec<Vec<f64>> {
    let k = g.class_count();
    let mut m = vec![vec![0.0; k]; k];
    for l in 0..k {
        let rep = g.classes()[l].rep;
        for &x in &g.classes()[j].members {
            let y = g.mul(g.inverse_of(x), rep);
            m[g.class_of(y)][l] += 1.0;
        }
    }
    m
}

struct XorShift(u64);

impl XorShift {
    fn next_f64(&mut self) -> f64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        1.0 + (x >> 11) as f64 / (1u64 << 53) as f64 // in [1, 2)
    }
}

/// Householder similarity reduction to upper Hessenberg form.
fn hessenberg(a: &mut [Vec<C>]) {
    let n = a.len();
    for c in 0..n.saturating_sub(2) {
        let norm = (c + 1..n).map(|r| a[r][c].norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            continue;
        }
        let x0 = a[c + 1][c];
        let phase = if x0.norm() == 0.0 { C::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<C> = (c + 1..n).map(|r| a[r][c]).collect();
        v[0] -= alpha;
        let vnorm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sq < 1e-300 {
            continue;
        }
        let beta = 2.0 / vnorm_sq;
        // rows c+1..n: A ← A − β·v·(vᴴA)
        for col in 0..n {
            let dot: C = v
                .iter()
                .enumerate()
                .map(|(i, &vi)| vi.conj() * a[c + 1 + i][col])
                .sum();
            let scaled = dot * beta;
            for (i, &vi) in v.iter().enumerate() {
                a[c + 1 + i][col] -= vi * scaled;
            }
        }
        // columns c+1..n: A ← A − β·(Av)·vᴴ
        for row in 0..n {
            let dot: C = v
                .iter()
                .enumerate()
                .map(|(i, &vi)| a[row][c + 1 + i] * vi)
                .sum();
            let scaled = dot * beta;
            for (i, &vi) in v.iter().enumerate() {
                a[row][c + 1 + i] -= scaled * vi.conj();
            }
        }
    }
}

/// Complex Givens pair (c real, s) with G·(f, g)ᵀ = (r, 0)ᵀ.
fn givens(f: C, g: C) -> (f64, C) {
    let t = (f.norm_sqr() + g.norm_sqr()).sqrt();
    if t < 1e-300 {
        return (1.0, C::new(0.0, 0.0));
    }
    if f.norm() == 0.0 {
        return (0.0, g.conj() / g.norm());
    }
    let u = f / f.norm();
    (f.norm() / t, u * g.conj() / t)
}

/// Eigenvalues of an upper Hessenberg matrix by explicit single-shift QR
/// with Wilkinson shifts and deflation.
fn qr_eigenvalues(mut h: Vec<Vec<C>>) -> Result<Vec<C>, String> {
    let n = h.len();
    let mut eigs = Vec::with_capacity(n);
    let mut m = n;
    let mut stuck = 0usize;
    while m > 0 {
        if m == 1 {
            eigs.push(h[0][0]);
            m = 0;
            continue;
        }
        // deflate where a subdiagonal entry is negligible
        let mut l = m - 1;
        while l > 0 {
            let small = f64::EPSILON * (h[l - 1][l - 1].norm() + h[l][l].norm()) + 1e-300;
            if h[l][l - 1].norm() <= small {
                h[l][l - 1] = C::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == m - 1 {
            eigs.push(h[m - 1][m - 1]);
            m -= 1;
            stuck = 0;
            continue;
        }
        stuck += 1;
        if stuck > 200 {
            return Err("QR iteration failed to deflate".into());
        }
        // Wilkinson shift from the trailing 2×2 of the active window
        let (a, b) = (h[m - 2][m - 2], h[m - 2][m - 1]);
        let (c2, d) = (h[m - 1][m - 2], h[m - 1][m - 1]);
        let tr_half = (a + d) * 0.5;
        let disc = ((a - d) * 0.5).powu(2) + b * c2;
        let root = disc.sqrt();
        let mu = if (tr_half + root - d).norm() < (tr_half - root - d).norm() {
            tr_half + root
        } else {
            tr_half - root
        };
        if stuck.is_multiple_of(50) {
            // exceptional shift to break rare cycling
            let _ = mu;
        }
        // explicit QR step on the window [l, m)
        for i in l..m {
            h[i][i] -= mu;
        }
        let mut rotations = Vec::with_capacity(m - l - 1);
        for i in l..m - 1 {
            let (c, s) = givens(h[i][i], h[i + 1][i]);
            for col in i..m {
                let (x, y) = (h[i][col], h[i + 1][col]);
                h[i][col] = x * c + s * y;
                h[i + 1][col] = -s.conj() * x + y * c;
            }
            rotations.push((i, c, s));
        }
        for &(i, c, s) in &rotations {
            // right-multiply columns (i, i+1) by Gᴴ
            for row in l..=(i + 1).min(m - 1) {
                let (x, y) = (h[row][i], h[row][i + 1]);
                h[row][i] = x * c + y * s.conj();
                h[row][i + 1] = -x * s + y * c;
            }
        }
        for i in l..m {
            h[i][i] += mu;
        }
    }
    Ok(eigs)
}

/// Solves (m − shift·I)·x = b by Gaussian elimination with partial pivoting.
fn solve_shifted(m: &[Vec<f64>], shift: C, b: &[C]) -> Vec<C> {
    let n = m.len();
    let mut a: Vec<Vec<C>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| C::new(m[i][j], 0.0) - if i == j { shift } else { C::new(0.0, 0.0) })
                .collect()
        })
        .collect();
    let mut rhs = b.to_vec();
    for c in 0..n {
        let pivot = (c..n)
            .max_by(|&p, &q| a[p][c].norm().total_cmp(&a[q][c].norm()))
            .unwrap();
        a.swap(c, pivot);
        rhs.swap(c, pivot);
        let diag = if a[c][c].norm() < 1e-280 {
            C::new(1e-280, 0.0)
        } else {
            a[c][c]
        };
        for r in c + 1..n {
            let f = a[r][c] / diag;
            if f.norm() == 0.0 {
                continue;
            }
            for j in c..n {
                let sub = f * a[c][j];
                a[r][j] -= sub;
            }
            let sub = f * rhs[c];
            rhs[r] -= sub;
        }
    }
    let mut x = vec![C::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let mut acc = rhs[r];
        for j in r + 1..n {
            acc -= a[r][j] * x[j];
        }
        let diag = if a[r][r].norm() < 1e-280 {
            C::new(1e-280, 0.0)
        } else {
            a[r][r]
        };
        x[r] = acc / diag;
    }
    x
}

fn apply(m: &[Vec<f64>], x: &[C]) -> Vec<C> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(&a, &v)| a * v).sum())
        .collect()
}

/// The numerically-diagonalized character values, one row per irreducible:
/// values[row][class].
pub fn oracle_values(group: &Arc<Group>) -> Result<Vec<Vec<C>>, String> {
    let k = group.class_count();
    if k == 1 {
        return Ok(vec![vec![C::new(1.0, 0.0)]]);
    }
    let matrices: Vec<Vec<Vec<f64>>> = (0..k).map(|j| class_matrix(group, j)).collect();

    let mut last_err = String::from("no attempt made");
    for attempt in 0..5u64 {
        let mut rng = XorShift(0x9E3779B97F4A7C15 ^ (attempt + 1));
        // random combination, scaled into the unit disk
        let weights: Vec<f64> = (0..k).map(|_| rng.next_f64()).collect();
        let mut combo = vec![vec![0.0; k]; k];
        for (j, m) in matrices.iter().enumerate() {
            for i in 0..k {
                for l in 0..k {
                    combo[i][l] += weights[j] * m[i][l];
                }
            }
        }
        let scale = combo
            .iter()
            .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
            .fold(1.0f64, f64::max);
        let scaled: Vec<Vec<f64>> = combo
            .iter()
            .map(|row| row.iter().map(|v| v / scale).collect())
            .collect();

        let mut hess: Vec<Vec<C>> = scaled
            .iter()
            .map(|row| row.iter().map(|&v| C::new(v, 0.0)).collect())
            .collect();
        hessenberg(&mut hess);
        let roots = match qr_eigenvalues(hess) {
            Ok(r) => r,
            Err(e) => {
                last_err = e;
                continue;
            }
        };
        let min_gap = (0..k)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .map(|(i, j)| (roots[i] - roots[j]).norm())
            .fold(f64::INFINITY, f64::min);
        if min_gap < 1e-8 {
            last_err = format!("eigenvalue gap {min_gap} too small");
            continue;
        }

        let mut rows = Vec::with_capacity(k);
        for &lambda in &roots {
            // inverse iteration refines the eigenvector for this eigenvalue
            let shift = lambda + C::new(1e-12, 1e-12);
            let mut x: Vec<C> = (0..k)
                .map(|_| C::new(rng.next_f64(), rng.next_f64()))
                .collect();
            for _ in 0..4 {
                let y = solve_shifted(&scaled, shift, &x);
                let norm = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                x = y.into_iter().map(|v| v / norm).collect();
            }
            let mx = apply(&scaled, &x);
            let residual: f64 = mx
                .iter()
                .zip(&x)
                .map(|(m, v)| (m - v * lambda).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if residual > 1e-9 {
                last_err = format!("eigenpair residual {residual} too large");
            }
            // normalize at the identity class and read the central character
            if x[0].norm() < 1e-9 {
                return Err("oracle eigenvector vanishes at the identity class".into());
            }
            let w: Vec<C> = x.iter().map(|&v| v / x[0]).collect();
            // degree from Σ w_l w_{l'} / |C_l| = |G| / d²
            let mut s = C::new(0.0, 0.0);
            for l in 0..k {
                let lp = group.inverse_class(l);
                s += w[l] * w[lp] / group.classes()[l].size() as f64;
            }
            if s.im.abs() > 1e-6 || s.re <= 0.0 {
                return Err(format!("oracle norm sum not positive real: {s}"));
            }
            let degree = (group.order() as f64 / s.re).sqrt();
            let row: Vec<C> = (0..k)
                .map(|c| w[c] * degree / group.classes()[c].size() as f64)
                .collect();
            rows.push(row);
        }
        if rows.len() == k {
            return Ok(rows);
        }
    }
    Err(format!("oracle failed on every combination attempt: {last_err}"))
}

/// Exact complex value of a multiplicity vector: Σ m[j]·exp(2πi·j/e).
fn exact_value(mult: &[i64]) -> C {
    let e = mult.len() as f64;
    mult.iter()
        .enumerate()
        .map(|(j, &m)| {
            let angle = TAU * j as f64 / e;
            C::new(angle.cos(), angle.sin()) * m as f64
        })
        .sum()
}

/// Matches every exact table row with a distinct oracle row within `tol`.
pub fn check_table_against_oracle(
    group: &Arc<Group>,
    table: &CharacterTable,
    tol: f64,
) -> Result<(), String> {
    let k = group.class_count();
    let oracle = oracle_values(group)?;
    let mut used = vec![false; k];
    for (i, chi) in table.irreducibles().iter().enumerate() {
        let exact: Vec<C> = (0..k).map(|c| exact_value(chi.multiplicities(c))).collect();
        let matches: Vec<usize> = (0..k)
            .filter(|&row| {
                oracle[row]
                    .iter()
                    .zip(&exact)
                    .all(|(o, e)| (o - e).norm() < tol)
            })
            .collect();
        if matches.len() != 1 {
            return Err(format!(
                "{}: exact row {i} matches {} oracle rows (tolerance {tol})",
                group.name(),
                matches.len()
            ));
        }
        if used[matches[0]] {
            return Err(format!(
                "{}: oracle row {} claimed twice",
                group.name(),
                matches[0]
            ));
        }
        used[matches[0]] = true;
    }
    Ok(())
}
