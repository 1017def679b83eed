//! Dense linear algebra over a prime field GF(p), sized for class-matrix
//! work: p fits in u32 range, dimensions stay in the dozens.

use crate::error::{Error, Result};
use crate::group::is_prime;

/// A prime field GF(p) with p small enough that products fit in u64.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Fp {
        debug_assert!(is_prime(p));
        Fp { p }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    /// Reduces a signed integer into the field.
    pub fn from_i64(&self, a: i64) -> u64 {
        let p = self.p as i64;
        (((a % p) + p) % p) as u64
    }
}

/// Dense row-major matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatFp {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl MatFp {
    pub fn zero(rows: usize, cols: usize) -> MatFp {
        MatFp {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> MatFp {
        let mut m = MatFp::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[Vec<u64>]) -> MatFp {
        let mut m = MatFp::zero(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for i in 0..rows {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul(&self, other: &MatFp, fp: Fp) -> MatFp {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = MatFp::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = fp.add(out[(i, j)], fp.mul(a, other[(k, j)]));
                }
            }
        }
        out
    }

    pub fn trace(&self, fp: Fp) -> u64 {
        (0..self.rows).fold(0, |acc, i| fp.add(acc, self[(i, i)]))
    }
}

impl std::ops::Index<(usize, usize)> for MatFp {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatFp {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Characteristic polynomial by the Faddeev–LeVerrier recurrence; returns
/// coefficients `[c_0, …, c_n]` of `c_0 + c_1 λ + … + c_n λⁿ` with `c_n = 1`.
/// Needs p > n so the integer divisions are invertible.
pub fn char_poly(a: &MatFp, fp: Fp) -> Vec<u64> {
    let n = a.rows;
    debug_assert!(fp.p > n as u64);
    let mut coeffs = vec![0u64; n + 1];
    coeffs[n] = 1;
    let mut m = MatFp::zero(n, n);
    let mut c_prev = 1u64; // coefficient of λ^{n-k+1} as we go
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1}·I
        let mut am = a.mul(&m, fp);
        for i in 0..n {
            am[(i, i)] = fp.add(am[(i, i)], c_prev);
        }
        m = am;
        let am_full = a.mul(&m, fp);
        // c_{n-k} = -tr(A·M_k)/k
        let t = am_full.trace(fp);
        let c = fp.neg(fp.mul(t, fp.inv(k as u64)));
        coeffs[n - k] = c;
        c_prev = c;
    }
    coeffs
}

/// Evaluates a polynomial at x (coefficients low to high).
pub fn poly_eval(coeffs: &[u64], x: u64, fp: Fp) -> u64 {
    let mut acc = 0u64;
    for &c in coeffs.iter().rev() {
        acc = fp.add(fp.mul(acc, x), c);
    }
    acc
}

/// All roots of the polynomial in GF(p), ascending, by direct scan.
pub fn poly_roots(coeffs: &[u64], fp: Fp) -> Vec<u64> {
    (0..fp.p).filter(|&x| poly_eval(coeffs, x, fp) == 0).collect()
}

/// Basis of the null space of `m`, deterministic: free variables ascending,
/// each basis vector has a 1 in its free coordinate.
pub fn null_space(m: &MatFp, fp: Fp) -> Vec<Vec<u64>> {
    let rows = m.rows;
    let cols = m.cols;
    let mut a = m.clone();
    let mut pivot_col_of_row = Vec::new();
    let mut pivot_cols = vec![false; cols];
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| a[(i, c)] != 0) else {
            continue;
        };
        for j in 0..cols {
            let tmp = a[(r, j)];
            a[(r, j)] = a[(pr, j)];
            a[(pr, j)] = tmp;
        }
        let inv = fp.inv(a[(r, c)]);
        for j in 0..cols {
            a[(r, j)] = fp.mul(a[(r, j)], inv);
        }
        for i in 0..rows {
            if i != r && a[(i, c)] != 0 {
                let f = a[(i, c)];
                for j in 0..cols {
                    let sub = fp.mul(f, a[(r, j)]);
                    a[(i, j)] = fp.sub(a[(i, j)], sub);
                }
            }
        }
        pivot_col_of_row.push(c);
        pivot_cols[c] = true;
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols[free] {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (row, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = fp.neg(a[(row, free)]);
        }
        basis.push(v);
    }
    basis
}

/// Given a basis matrix B (k×d, full column rank) and C = A·B with the span
/// of B invariant under A, solves B·X = C for the restricted d×d matrix X.
pub fn restrict_to_span(basis: &MatFp, image: &MatFp, fp: Fp) -> Result<MatFp> {
    let k = basis.rows;
    let d = basis.cols;
    debug_assert_eq!(image.rows, k);
    debug_assert_eq!(image.cols, d);
    // Row-reduce [B | C]; pivot rows reconstruct X.
    let mut aug = MatFp::zero(k, 2 * d);
    for i in 0..k {
        for j in 0..d {
            aug[(i, j)] = basis[(i, j)];
            aug[(i, d + j)] = image[(i, j)];
        }
    }
    let mut r = 0usize;
    for c in 0..d {
        let Some(pr) = (r..k).find(|&i| aug[(i, c)] != 0) else {
            return Err(Error::Internal("basis matrix is column-rank deficient".into()));
        };
        for j in 0..2 * d {
            let tmp = aug[(r, j)];
            aug[(r, j)] = aug[(pr, j)];
            aug[(pr, j)] = tmp;
        }
        let inv = fp.inv(aug[(r, c)]);
        for j in 0..2 * d {
            aug[(r, j)] = fp.mul(aug[(r, j)], inv);
        }
        for i in 0..k {
            if i != r && aug[(i, c)] != 0 {
                let f = aug[(i, c)];
                for j in 0..2 * d {
                    let sub = fp.mul(f, aug[(r, j)]);
                    aug[(i, j)] = fp.sub(aug[(i, j)], sub);
                }
            }
        }
        r += 1;
    }
    // After full reduction the first d columns are the identity on the top
    // d rows, so the right half's top d rows are X.
    let mut x = MatFp::zero(d, d);
    for i in 0..d {
        for j in 0..d {
            x[(i, j)] = aug[(i, d + j)];
        }
    }
    // Consistency: rows below the pivots must have vanished.
    for i in d..k {
        for j in 0..2 * d {
            if aug[(i, j)] != 0 {
                return Err(Error::Internal(
                    "span is not invariant under the class matrix".into(),
                ));
            }
        }
    }
    Ok(x)
}

/// The smallest prime p ≡ 1 (mod modulus) with p > floor, and the least
/// residue of multiplicative order exactly `modulus` mod p.
pub fn find_field(modulus: usize, floor: u64) -> (u64, u64) {
    let m = modulus as u64;
    let mut p = (floor / m) * m + 1;
    if p <= floor {
        p += m;
    }
    while !is_prime(p) || !(p - 1).is_multiple_of(m) {
        p += m;
    }
    (p, primitive_root_of_order(m, p))
}

/// Least element of multiplicative order exactly `m` in GF(p); requires
/// m | p − 1.
pub fn primitive_root_of_order(m: u64, p: u64) -> u64 {
    let fp = Fp::new(p);
    if m == 1 {
        return 1;
    }
    let prime_divisors: Vec<u64> = {
        let mut n = m;
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                out.push(d);
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    };
    for z in 2..p {
        if fp.pow(z, m) != 1 {
            continue;
        }
        if prime_divisors.iter().all(|&q| fp.pow(z, m / q) != 1) {
            return z;
        }
    }
    unreachable!("GF(p)* is cyclic of order divisible by m");
}
