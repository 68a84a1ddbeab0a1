//! Exact q-analog combinatorics over big integers.
//!
//! `q` is always a concrete integer `>= 2`. Nothing here touches floating
//! point; the only rationals appear inside [`vandermonde_solve`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

fn check_q(q: &BigInt) -> Result<()> {
    if *q < BigInt::from(2) {
        return Err(Error::InvalidArgument(format!(
            "q must be at least 2, got {q}"
        )));
    }
    Ok(())
}

/// `k choose 2` as an exponent.
#[inline]
pub fn binom2(k: u32) -> u32 {
    if k < 2 {
        0
    } else {
        k * (k - 1) / 2
    }
}

#[inline]
pub fn pow(q: &BigInt, e: u32) -> BigInt {
    num_traits::pow(q.clone(), e as usize)
}

/// `2^e` as a big integer.
#[inline]
pub fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

/// `(-1)^k`.
#[inline]
fn sign(k: u32) -> BigInt {
    if k.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Gaussian binomial `(u over i)_q`; zero when `i > u`.
///
/// Evaluated as the telescoping product `∏_{t<i} (q^{u-t} - 1)/(q^{t+1} - 1)`;
/// every prefix equals `(u over t+1)_q`, so each division is exact.
pub fn gaussian_binomial(u: u32, i: u32, q: &BigInt) -> Result<BigInt> {
    check_q(q)?;
    Ok(gaussian_binomial_unchecked(u, i, q))
}

pub(crate) fn gaussian_binomial_unchecked(u: u32, i: u32, q: &BigInt) -> BigInt {
    if i > u {
        return BigInt::zero();
    }
    let i = i.min(u - i);
    let mut acc = BigInt::one();
    for t in 0..i {
        acc *= pow(q, u - t) - 1u32;
        let (quot, rem) = acc.div_rem(&(pow(q, t + 1) - 1u32));
        debug_assert!(rem.is_zero());
        acc = quot;
    }
    acc
}

/// Both orthogonality relations of the q-binomial Möbius pair for `u > v`:
///
/// `Σ_{i=v}^{u} (i over v)_q (-1)^{u-i} q^{C(u-i,2)} (u over i)_q = 0` and
/// `Σ_{i=v}^{u} (u over i)_q (-1)^{i-v} q^{C(i-v,2)} (i over v)_q = 0`.
pub fn mobius_pair_check(u: u32, v: u32, q: &BigInt) -> Result<bool> {
    check_q(q)?;
    if u <= v {
        return Err(Error::InvalidArgument(format!(
            "Möbius pair needs u > v, got u = {u}, v = {v}"
        )));
    }
    let (first, second) = mobius_pair_sums(u, v, q);
    Ok(first.is_zero() && second.is_zero())
}

/// The two inner products of the Möbius pair (both zero when `u > v`).
pub fn mobius_pair_sums(u: u32, v: u32, q: &BigInt) -> (BigInt, BigInt) {
    let mut first = BigInt::zero();
    let mut second = BigInt::zero();
    for i in v..=u {
        let iv = gaussian_binomial_unchecked(i, v, q);
        let ui = gaussian_binomial_unchecked(u, i, q);
        first += &iv * sign(u - i) * pow(q, binom2(u - i)) * &ui;
        second += &ui * sign(i - v) * pow(q, binom2(i - v)) * &iv;
    }
    (first, second)
}

/// `y_i = Σ_j q^{ij} x_j` for `0 <= i <= u`.
pub fn vandermonde_apply(x: &[BigRational], q: &BigInt) -> Vec<BigRational> {
    let len = x.len() as u32;
    (0..len)
        .map(|i| {
            x.iter()
                .enumerate()
                .map(|(j, xj)| xj * BigRational::from_integer(pow(q, i * j as u32)))
                .fold(BigRational::zero(), |a, b| a + b)
        })
        .collect()
}

/// Solves the symmetric Vandermonde system `Σ_j q^{ij} x_j = y_i` in closed form:
///
/// `x_j = Σ_{v=j}^{u} (-1)^{v-j} q^{C(v-j,2)} (v over j)_q ∏_{i<v}(q^v - q^i)^{-1}
///        Σ_{i=0}^{v} (-1)^{v-i} q^{C(v-i,2)} (v over i)_q y_i`.
pub fn vandermonde_solve(y: &[BigInt], q: &BigInt) -> Result<Vec<BigRational>> {
    check_q(q)?;
    if y.is_empty() {
        return Err(Error::InvalidArgument(
            "Vandermonde system needs at least one equation".into(),
        ));
    }
    let u = (y.len() - 1) as u32;
    // inner[v] = ∏_{i<v}(q^v - q^i)^{-1} Σ_{i<=v} (-1)^{v-i} q^{C(v-i,2)} (v over i)_q y_i
    let inner: Vec<BigRational> = (0..=u)
        .map(|v| {
            let s: BigInt = (0..=v)
                .map(|i| {
                    sign(v - i)
                        * pow(q, binom2(v - i))
                        * gaussian_binomial_unchecked(v, i, q)
                        * &y[i as usize]
                })
                .sum();
            let denom: BigInt = (0..v).map(|i| pow(q, v) - pow(q, i)).product();
            BigRational::new(s, denom)
        })
        .collect();
    Ok((0..=u)
        .map(|j| {
            (j..=u)
                .map(|v| {
                    let coeff =
                        sign(v - j) * pow(q, binom2(v - j)) * gaussian_binomial_unchecked(v, j, q);
                    BigRational::from_integer(coeff) * &inner[v as usize]
                })
                .fold(BigRational::zero(), |a, b| a + b)
        })
        .collect())
}

/// Both sides of `Σ_{j=0}^{i} q^j (i over j)_{q^2} = ∏_{j=1}^{i} (1 + q^j)`.
pub fn product_formula_sides(i: u32, q: &BigInt) -> Result<(BigInt, BigInt)> {
    check_q(q)?;
    if i == 0 {
        return Err(Error::InvalidArgument(
            "product formula needs i >= 1".into(),
        ));
    }
    let q2 = q * q;
    let lhs = (0..=i)
        .map(|j| pow(q, j) * gaussian_binomial_unchecked(i, j, &q2))
        .sum();
    let rhs = (1..=i).map(|j| pow(q, j) + 1u32).product();
    Ok((lhs, rhs))
}

pub fn product_formula_check(i: u32, q: &BigInt) -> Result<bool> {
    let (lhs, rhs) = product_formula_sides(i, q)?;
    Ok(lhs == rhs)
}

/// Both sides of
/// `(u over i)_{q^2} Σ_{j=0}^{i} q^j (i over j)_{q^2} = (u over i)_q ∏_{j<i} (1 + q^{u-j})`.
pub fn twovsone_sides(u: u32, i: u32, q: &BigInt) -> Result<(BigInt, BigInt)> {
    check_q(q)?;
    if i == 0 || u < i {
        return Err(Error::InvalidArgument(format!(
            "two-versus-one formula needs u >= i >= 1, got u = {u}, i = {i}"
        )));
    }
    let q2 = q * q;
    let inner: BigInt = (0..=i)
        .map(|j| pow(q, j) * gaussian_binomial_unchecked(i, j, &q2))
        .sum();
    let lhs = gaussian_binomial_unchecked(u, i, &q2) * inner;
    let prod: BigInt = (0..i).map(|j| pow(q, u - j) + 1u32).product();
    let rhs = gaussian_binomial_unchecked(u, i, q) * prod;
    Ok((lhs, rhs))
}

pub fn twovsone_check(u: u32, i: u32, q: &BigInt) -> Result<bool> {
    let (lhs, rhs) = twovsone_sides(u, i, q)?;
    Ok(lhs == rhs)
}

/// Converts a rational that must be integral, failing loudly otherwise.
pub fn expect_integer(x: &BigRational, what: &str) -> Result<BigInt> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(Error::Inconsistency(format!("{what} is not integral: {x}")))
    }
}

/// Exact `num / 2^shift`, failing if the division leaves a remainder.
pub fn exact_shr(num: &BigInt, shift: u64, what: &str) -> Result<BigInt> {
    let d = pow2(shift);
    let (quot, rem) = num.div_rem(&d);
    if !rem.is_zero() {
        return Err(Error::Inconsistency(format!(
            "{what}: {num} is not divisible by 2^{shift}"
        )));
    }
    Ok(quot)
}
