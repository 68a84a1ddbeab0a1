//! DC-component spectrum of the code.
//!
//! A nonzero codeword with coefficient vector `a` has
//! `DC = Σ_{x≠0} (-1)^{Tr(Q_a(x))} ∈ {-1} ∪ {-1 ± 2^{m - e·r/2}}`, where `r` is the
//! `F_{2^e}`-rank of `B_a`. The formulas give the rank spectrum `β_r`, the signed
//! split `α_{r,±}` and the balanced count; the enumerator visits every codeword.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::combinatorics::{binom2, exact_shr, gaussian_binomial_unchecked as gauss, pow2};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::forms::{rank_from_trace_table, CodeParams};
use crate::parallel;
use crate::solutions::closed_form_count;

/// Enumeration visits at most `2^24` codewords.
pub const ENUMERATION_MAX_BITS: u32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "-",
            Sign::Plus => "+",
        })
    }
}

/// `β_r`: number of `a` with `rk(B_a) = r` and nonzero quadratic part, divided by `2^m`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankSpectrum {
    pub beta: BTreeMap<u32, BigInt>,
}

impl RankSpectrum {
    pub fn total(&self) -> BigInt {
        self.beta.values().sum()
    }
}

/// `α_{r,ε}` (nonzero codewords with `DC = -1 + ε 2^{m-er/2}`) and the balanced
/// count (`DC = -1`, zero codeword excluded).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DcSpectrum {
    pub alpha: BTreeMap<(u32, Sign), BigInt>,
    pub balanced: BigInt,
    /// Whether the weight distribution lists the zero codeword.
    pub zero_included: bool,
}

impl DcSpectrum {
    /// Number of nonzero codewords accounted for.
    pub fn nonzero_total(&self) -> BigInt {
        self.alpha.values().sum::<BigInt>() + &self.balanced
    }

    /// `DC value → count`, the balanced class included at `-1`.
    pub fn census(&self, p: &CodeParams) -> BTreeMap<i64, BigInt> {
        let mut out = BTreeMap::new();
        for (&(r, s), c) in &self.alpha {
            *out.entry(dc_value(p, r, s)).or_insert_with(BigInt::zero) += c;
        }
        *out.entry(-1).or_insert_with(BigInt::zero) += &self.balanced;
        out
    }
}

/// `-1 + ε 2^{m - e·r/2}`.
pub fn dc_value(p: &CodeParams, r: u32, s: Sign) -> i64 {
    -1 + s.value() * (1i64 << (p.m() - p.e() * r / 2))
}

/// Ranks that can occur for a nonzero quadratic part: even `r` from `m/e - 2(k-1)` to `m/e`.
pub fn admissible_ranks(p: &CodeParams) -> Vec<u32> {
    (0..p.k()).rev().map(|j| p.form_dim() - 2 * j).collect()
}

/// The value set of `DC` over nonzero codewords, ascending.
pub fn dc_value_set(p: &CodeParams) -> Vec<i64> {
    let mut v: Vec<i64> = admissible_ranks(p)
        .into_iter()
        .flat_map(|r| [dc_value(p, r, Sign::Minus), dc_value(p, r, Sign::Plus)])
        .chain(std::iter::once(-1))
        .collect();
    v.sort_unstable();
    v
}

fn signed(term: BigInt, negative: bool) -> BigInt {
    if negative {
        -term
    } else {
        term
    }
}

/// `β_{m/e-2j} = Σ_{v=j}^{k-1} (-1)^{v-j} 4^{eC(v-j,2)} (v over j)_{4^e} (m/2e over v)_{4^e} (2^{n(2k-1-2v)+ev} - 1)`.
pub fn rank_spectrum_formula(p: &CodeParams) -> Result<RankSpectrum> {
    let (n, e, k) = (p.n(), p.e(), p.k());
    let q = pow2(u64::from(2 * e));
    let half = p.form_dim() / 2;
    let mut beta = BTreeMap::new();
    for j in 0..k {
        let value: BigInt = (j..k)
            .map(|v| {
                let term = pow2(u64::from(2 * e * binom2(v - j)))
                    * gauss(v, j, &q)
                    * gauss(half, v, &q)
                    * (pow2(u64::from(n * (2 * k - 1 - 2 * v) + e * v)) - 1);
                signed(term, (v - j) % 2 == 1)
            })
            .sum();
        if value.is_negative() {
            return Err(Error::Inconsistency(format!(
                "rank count β_{} = {value} is negative",
                p.form_dim() - 2 * j
            )));
        }
        beta.insert(p.form_dim() - 2 * j, value);
    }
    Ok(RankSpectrum { beta })
}

/// `α_{r,ε} = ½(2^{er} + ε 2^{er/2}) β_r`, balanced count from the exact expression.
pub fn dc_spectrum_formula(p: &CodeParams) -> Result<DcSpectrum> {
    let ranks = rank_spectrum_formula(p)?;
    let e = p.e();
    let mut alpha = BTreeMap::new();
    for (&r, b) in &ranks.beta {
        for s in [Sign::Minus, Sign::Plus] {
            let twice = (pow2(u64::from(e * r)) + s.value() * pow2(u64::from(e * r / 2))) * b;
            alpha.insert((r, s), exact_shr(&twice, 1, "α")?);
        }
    }
    let balanced = balanced_count_formula(p)?;
    let total = pow2(u64::from(p.code_dim_bits())) - 1;
    let spectrum = DcSpectrum {
        alpha,
        balanced,
        zero_included: true,
    };
    if spectrum.nonzero_total() != total {
        return Err(Error::Inconsistency(format!(
            "signed split plus balanced count gives {} nonzero codewords, expected {total}",
            spectrum.nonzero_total()
        )));
    }
    Ok(spectrum)
}

/// `2^{n(2k+1)} - 1 - Σ_{v<k} (-1)^v (2^{n(2k-1-2v)+ev} - 1) 2^{m-ev(v+1)} ∏_{j<v}(2^m - 4^{ej})`.
pub fn balanced_count_formula(p: &CodeParams) -> Result<BigInt> {
    let (m, n, e, k) = (p.m(), p.n(), p.e(), p.k());
    let two_m = pow2(u64::from(m));
    let mut sum = BigInt::zero();
    for v in 0..k {
        let prod: BigInt = (0..v)
            .map(|j| &two_m - pow2(u64::from(2 * e * j)))
            .product();
        let num = (pow2(u64::from(n * (2 * k - 1 - 2 * v) + e * v)) - 1) * &two_m * prod;
        let term = exact_shr(&num, u64::from(e * v * (v + 1)), "balanced count term")?;
        sum += signed(term, v % 2 == 1);
    }
    Ok(pow2(u64::from(p.code_dim_bits())) - 1 - sum)
}

/// `2^{n(2k+1)} Σ_{v=1}^{k-1} (-1)^{v-1} 2^{-ev²}`, the leading-order estimate
/// of the unbalanced count. Diagnostic only.
pub fn unbalanced_estimate(p: &CodeParams) -> f64 {
    let e = f64::from(p.e());
    let s: f64 = (1..p.k())
        .map(|v| {
            let v = f64::from(v);
            (if v as u32 % 2 == 1 { 1.0 } else { -1.0 }) * (-e * v * v).exp2()
        })
        .fold(0.0, |a, b| a + b);
    f64::from(p.code_dim_bits()).exp2() * s
}

/// Both sides of `Σ_{i<k} β_{m/e-2i} 4^{eiu} = 2^{n(2k-1-2u)} |V_{k-1,u}| - 2^{mu}`.
pub fn moment_identity_sides(
    p: &CodeParams,
    beta: &RankSpectrum,
    u: u32,
) -> Result<(BigInt, BigInt)> {
    let (m, n, e, k) = (p.m(), p.n(), p.e(), p.k());
    if u >= k {
        return Err(Error::InvalidArgument(format!(
            "moment order u must satisfy u ≤ k − 1 = {} (u = {u})",
            k - 1
        )));
    }
    let lhs = (0..k)
        .map(|i| {
            let b = beta
                .beta
                .get(&(p.form_dim() - 2 * i))
                .cloned()
                .unwrap_or_default();
            b * pow2(u64::from(2 * e * i * u))
        })
        .sum();
    let rhs = pow2(u64::from(n * (2 * k - 1 - 2 * u))) * closed_form_count(m, e, u)
        - pow2(u64::from(m * u));
    Ok((lhs, rhs))
}

/// The power-moment identity with `β` from the formula.
pub fn moment_identity_check(p: &CodeParams, u: u32) -> Result<bool> {
    let (l, r) = moment_identity_sides(p, &rank_spectrum_formula(p)?, u)?;
    Ok(l == r)
}

/// `weight = (2^m - 1 - DC) / 2`.
pub fn weight_of_dc(p: &CodeParams, dc: i64) -> Result<u64> {
    let diff = (1i64 << p.m()) - 1 - dc;
    if diff % 2 != 0 || diff < 0 {
        return Err(Error::Inconsistency(format!(
            "DC value {dc} has no integral weight"
        )));
    }
    Ok((diff / 2) as u64)
}

pub fn weight_distribution(p: &CodeParams, spectrum: &DcSpectrum) -> Result<BTreeMap<u64, BigInt>> {
    let mut out = BTreeMap::new();
    if spectrum.zero_included {
        out.insert(0, BigInt::one());
    }
    for (dc, c) in spectrum.census(p) {
        if c.is_zero() {
            continue;
        }
        *out.entry(weight_of_dc(p, dc)?).or_insert_with(BigInt::zero) += c;
    }
    Ok(out)
}

/// Result of visiting every codeword.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub dc: DcSpectrum,
    pub rank: RankSpectrum,
    pub codewords: u64,
}

/// Per-chunk tallies, indexed by rank.
#[derive(Clone)]
struct Census {
    plus: Vec<u64>,
    minus: Vec<u64>,
    prefixes: Vec<u64>,
    balanced: u64,
}

impl Census {
    fn new(ranks: usize) -> Self {
        Census {
            plus: vec![0; ranks],
            minus: vec![0; ranks],
            prefixes: vec![0; ranks],
            balanced: 0,
        }
    }

    fn merge(mut self, other: Census) -> Census {
        for (a, b) in self.plus.iter_mut().zip(other.plus) {
            *a += b;
        }
        for (a, b) in self.minus.iter_mut().zip(other.minus) {
            *a += b;
        }
        for (a, b) in self.prefixes.iter_mut().zip(other.prefixes) {
            *a += b;
        }
        self.balanced += other.balanced;
        self
    }
}

/// In-place Walsh–Hadamard transform.
fn walsh_hadamard(v: &mut [i32]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Visits all `2^{n(2k+1)}` codewords. For each quadratic part the rank comes
/// from the polarization of `Tr(Q)`, and one Walsh–Hadamard transform yields
/// `Σ_x (-1)^{Tr(Q(x)) + Tr(a_k x)}` for every linear coefficient `a_k` at once
/// (`a_k ↦ (x ↦ Tr(a_k x))` runs over all linear functionals). Fails with
/// [`Error::Violation`] on a DC value outside [`dc_value_set`], an
/// exponential sum not of the form `0, ±2^{m-er/2}`, or a rank outside
/// [`admissible_ranks`].
pub fn spectrum_enumerate(p: &CodeParams, workers: usize) -> Result<Enumeration> {
    let bits = p.code_dim_bits();
    if bits > ENUMERATION_MAX_BITS {
        return Err(Error::Budget(format!(
            "enumeration over 2^{bits} codewords exceeds the 2^{ENUMERATION_MAX_BITS} limit"
        )));
    }
    let f = p.field();
    let (m, n, e, k) = (p.m(), p.n(), p.e(), p.k());
    let size = 1usize << m;
    let sub_n = f.subfield_elements(n)?;

    // Tr_{n→1}(z) = Tr_{m→1}(w z) for z ∈ F_{2^n} when Tr_{m→n}(w) = 1
    let w = f
        .elements()
        .find(|&w| f.rel_trace_unchecked(w, m, n) == FieldElement::ONE)
        .expect("relative trace is onto");
    let functional = |a: FieldElement| -> u32 {
        (0..m).fold(0u32, |mask, i| {
            mask | (f.abs_trace(f.mul(a, FieldElement(1 << i))) << i)
        })
    };
    let powers: Vec<Vec<u32>> = (0..k)
        .map(|j| {
            let t = i64::from(p.exponent(j));
            f.elements()
                .map(|x| f.mul(f.frobenius_pow(x, t), x).0)
                .collect()
        })
        .collect();
    let a0_masks: Vec<u32> = sub_n.iter().map(|&a| functional(f.mul(w, a))).collect();
    let full_masks: Vec<u32> = if k > 1 {
        f.elements().map(functional).collect()
    } else {
        Vec::new()
    };

    let allowed = dc_value_set(p);
    let form_dim = p.form_dim();
    let min_rank = form_dim - 2 * (k - 1);
    let prefix_count = 1u64 << (n + m * (k - 1));

    let visit = |range: std::ops::Range<u64>| -> Result<Census> {
        let mut census = Census::new(form_dim as usize + 1);
        let mut tr = vec![0u8; size];
        let mut wht = vec![0i32; size];
        let mut masks = vec![0u32; k as usize];
        for idx in range {
            masks[0] = a0_masks[(idx & ((1 << n) - 1)) as usize];
            for (j, mask) in masks.iter_mut().enumerate().skip(1) {
                let c = (idx >> (n + m * (j as u32 - 1))) & ((1 << m) - 1);
                *mask = full_masks[c as usize];
            }
            if idx == 0 {
                // every nonzero a_k gives a balanced word; a_k = 0 is the zero word
                census.balanced += size as u64 - 1;
                continue;
            }
            for x in 0..size {
                let bit = masks
                    .iter()
                    .zip(&powers)
                    .fold(0u32, |acc, (&mk, pw)| acc ^ (pw[x] & mk).count_ones());
                tr[x] = (bit & 1) as u8;
                wht[x] = 1 - 2 * i32::from(tr[x]);
            }
            let r = rank_from_trace_table(m, e, &tr);
            if !r.is_multiple_of(2) || r < min_rank || r > form_dim {
                return Err(Error::Violation(format!(
                    "rank {r} outside the admissible set {:?} (prefix index {idx})",
                    admissible_ranks(p)
                )));
            }
            census.prefixes[r as usize] += 1;
            walsh_hadamard(&mut wht);
            let peak = 1i32 << (m - e * r / 2);
            for &s in &wht {
                let dc = i64::from(s) - 1;
                if allowed.binary_search(&dc).is_err() {
                    return Err(Error::Violation(format!(
                        "DC value {dc} outside the admissible set {allowed:?} (prefix index {idx})"
                    )));
                }
                if s == 0 {
                    census.balanced += 1;
                } else if s == peak {
                    census.plus[r as usize] += 1;
                } else if s == -peak {
                    census.minus[r as usize] += 1;
                } else {
                    return Err(Error::Violation(format!(
                        "exponential sum {s} does not match rank {r} (prefix index {idx})"
                    )));
                }
            }
        }
        Ok(census)
    };

    let ranges = parallel::chunk_ranges(prefix_count, 256);
    let parts: Vec<Result<Census>> = parallel::install(workers, || {
        ranges.par_iter().map(|r| visit(r.clone())).collect()
    });
    let mut census = Census::new(form_dim as usize + 1);
    for part in parts {
        census = census.merge(part?);
    }

    let mut alpha = BTreeMap::new();
    let mut beta = BTreeMap::new();
    for r in admissible_ranks(p) {
        let ri = r as usize;
        alpha.insert((r, Sign::Plus), BigInt::from(census.plus[ri]));
        alpha.insert((r, Sign::Minus), BigInt::from(census.minus[ri]));
        // each quadratic part carries a free 2^m-fold fiber of linear coefficients
        let vectors = BigInt::from(census.prefixes[ri]) << m;
        beta.insert(r, exact_shr(&vectors, u64::from(m), "rank count")?);
    }
    Ok(Enumeration {
        dc: DcSpectrum {
            alpha,
            balanced: BigInt::from(census.balanced),
            zero_included: true,
        },
        rank: RankSpectrum { beta },
        codewords: 1u64 << bits,
    })
}

pub fn dc_spectrum_enumerate(p: &CodeParams, workers: usize) -> Result<DcSpectrum> {
    Ok(spectrum_enumerate(p, workers)?.dc)
}
