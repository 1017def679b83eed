//! Integer vectors m[0..e−1] standing for the cyclotomic integer
//! Σⱼ m\[j\]·ζₑʲ. Character values are carried in this form, with the exact
//! zero test done by reduction modulo the e-th cyclotomic polynomial.

use crate::modp::Fp;

/// Cyclic convolution of length-e vectors: the product of the two values.
pub fn convolve(a: &[i64], b: &[i64]) -> Vec<i64> {
    let e = a.len();
    debug_assert_eq!(e, b.len());
    let mut out = vec![0i64; e];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                out[(i + j) % e] += ai * bj;
            }
        }
    }
    out
}

/// Index reflection j ↦ −j mod e: complex conjugation of the value.
pub fn reflect(a: &[i64]) -> Vec<i64> {
    let e = a.len();
    let mut out = vec![0i64; e];
    for (j, &aj) in a.iter().enumerate() {
        out[(e - j) % e] += aj;
    }
    out
}

/// Evaluates the vector at ζₑ ↦ z in GF(p).
pub fn eval_mod(a: &[i64], z: u64, fp: Fp) -> u64 {
    let mut acc = 0u64;
    let mut zj = 1u64;
    for &aj in a {
        acc = fp.add(acc, fp.mul(fp.from_i64(aj), zj));
        zj = fp.mul(zj, z);
    }
    acc
}

/// The n-th cyclotomic polynomial, coefficients low to high, computed by
/// dividing xⁿ − 1 by the cyclotomic polynomials of the proper divisors.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials with monic divisor.
fn poly_div_exact(num: &[i64], div: &[i64]) -> Vec<i64> {
    assert_eq!(*div.last().unwrap(), 1, "divisor must be monic");
    let mut rem = num.to_vec();
    let dn = div.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![0i64; qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (i, &di) in div.iter().enumerate() {
                rem[k + i] -= c * di;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Exact test for Σ m\[j\]·ζₑʲ = 0: the polynomial must be divisible by Φₑ.
pub fn is_zero_value(a: &[i64]) -> bool {
    let e = a.len();
    if e == 1 {
        return a[0] == 0;
    }
    let phi = cyclotomic_polynomial(e);
    let dn = phi.len() - 1;
    let mut rem = a.to_vec();
    for k in (dn..rem.len()).rev() {
        let c = rem[k];
        if c != 0 {
            for (i, &di) in phi.iter().enumerate() {
                rem[k - dn + i] -= c * di;
            }
        }
    }
    rem.iter().all(|&r| r == 0)
}

/// Exact equality of two values given over the same root order.
pub fn values_equal(a: &[i64], b: &[i64]) -> bool {
    let diff: Vec<i64> = a.iter().zip(b).map(|(&x, &y)| x - y).collect();
    is_zero_value(&diff)
}
