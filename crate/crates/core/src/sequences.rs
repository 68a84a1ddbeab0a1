//! The base m-sequence, its circular decimations and the codewords `c_a`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::forms::{f2_basis, quad_form, CodeParams, CoeffSpace, CoeffVector};

/// Phase of the base sequence: `s_i = Tr(π^{-(i + BASE_PHASE)})`.
///
/// The zero phase `Tr(π^{-i})` makes the decimation by `2^n + 1` vanish
/// identically (that decimation lands in `F_{2^n}`, where the absolute trace
/// of `F_{2^m}` is zero), so the base sequence is taken one step later.
pub const BASE_PHASE: i64 = 1;

/// Largest `m` accepted by [`span_equality_check`].
pub const SPAN_CHECK_MAX_M: u32 = 8;

/// A periodic binary sequence stored over one nominal period.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitSequence {
    bits: Vec<u8>,
}

impl fmt::Debug for BitSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitSequence({})", self.to_ascii())
    }
}

impl BitSequence {
    pub fn from_bits(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        BitSequence { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// Smallest `p` dividing the length with `bits[i] = bits[(i + p) mod len]`.
    pub fn period(&self) -> usize {
        let len = self.bits.len();
        (1..=len)
            .filter(|p| len.is_multiple_of(*p))
            .find(|&p| (0..len).all(|i| self.bits[i] == self.bits[(i + p) % len]))
            .unwrap_or(len)
    }

    /// `output_i = bits[(i + shift) mod len]`.
    pub fn shifted(&self, shift: usize) -> BitSequence {
        let len = self.bits.len();
        BitSequence {
            bits: (0..len).map(|i| self.bits[(i + shift) % len]).collect(),
        }
    }

    /// `Σ_i (-1)^{s_i + s_{i+shift}}`.
    pub fn autocorrelation(&self, shift: usize) -> i64 {
        let len = self.bits.len();
        (0..len)
            .map(|i| {
                if self.bits[i] == self.bits[(i + shift) % len] {
                    1
                } else {
                    -1
                }
            })
            .sum()
    }

    pub fn to_ascii(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b == 1 { '1' } else { '0' })
            .collect()
    }

    /// Packs into 64-bit words, bit `i` of the sequence in word `i / 64`.
    pub fn to_words(&self) -> Vec<u64> {
        let mut words = vec![0u64; self.bits.len().div_ceil(64)];
        for (i, &b) in self.bits.iter().enumerate() {
            words[i / 64] |= u64::from(b) << (i % 64);
        }
        words
    }
}

/// `s_i = Tr_{m→1}(π^{-(i + BASE_PHASE)})` for `0 <= i < 2^m - 1`.
pub fn m_sequence(f: &FieldSpec) -> BitSequence {
    let len = f.group_order() as i64;
    BitSequence {
        bits: (0..len)
            .map(|i| f.abs_trace(f.pi_pow(-(i + BASE_PHASE))) as u8)
            .collect(),
    }
}

pub fn base_sequence(p: &CodeParams) -> BitSequence {
    m_sequence(p.field())
}

/// `output_i = seq[(i·factor) mod len]`; the length is kept, the true period
/// is available from [`BitSequence::period`].
pub fn circular_decimate(seq: &BitSequence, factor: u64) -> Result<BitSequence> {
    if factor == 0 {
        return Err(Error::InvalidArgument(
            "decimation factor must be positive".into(),
        ));
    }
    let len = seq.len() as u64;
    let factor = factor % len.max(1);
    Ok(BitSequence {
        bits: (0..len)
            .map(|i| seq.bits[((i * factor) % len) as usize])
            .collect(),
    })
}

/// Decimation factor `2^{(n/e - j)d} + 1` reduced modulo `2^m - 1`.
pub fn decimation_factor(p: &CodeParams, j: u32) -> u64 {
    (1u64 << p.exponent(j)) + 1
}

/// `s, s_0, s_1, …, s_{k-1}` with their labels.
pub fn generator_sequences(p: &CodeParams) -> Vec<(String, BitSequence)> {
    let s = base_sequence(p);
    let mut out = vec![("s".to_string(), s.clone())];
    for j in 0..p.k() {
        let dec = circular_decimate(&s, decimation_factor(p, j)).expect("positive factor");
        out.push((format!("s_{j}"), dec));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    pub bits: BitSequence,
    pub dc: i64,
}

impl Codeword {
    pub fn weight(&self) -> usize {
        self.bits.weight()
    }
}

/// `Σ_i (-1)^{c_i}`.
pub fn dc_component(c: &Codeword) -> i64 {
    c.bits
        .bits()
        .iter()
        .map(|&b| if b == 0 { 1 } else { -1 })
        .sum()
}

/// `c_{a,i} = Tr_{e→1}(Q_a(π^{-i}))` for `0 <= i < 2^m - 1`.
pub fn codeword(p: &CodeParams, a: &CoeffVector) -> Codeword {
    let f = p.field();
    let len = f.group_order() as i64;
    let bits = BitSequence::from_bits(
        (0..len)
            .map(|i| {
                let q = quad_form(p, a, f.pi_pow(-i));
                f.rel_trace_unchecked(q, p.e(), 1).0 as u8
            })
            .collect(),
    );
    let mut c = Codeword { bits, dc: 0 };
    c.dc = dc_component(&c);
    c
}

/// Row space over `F_2` of multiword bit-vectors.
#[derive(Clone, Debug, Default)]
struct WordBasis {
    rows: Vec<(usize, Vec<u64>)>,
}

fn leading_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .rev()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
}

impl WordBasis {
    fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        // rows are kept sorted by decreasing pivot
        for (pivot, row) in &self.rows {
            if (v[pivot / 64] >> (pivot % 64)) & 1 == 1 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a ^= b;
                }
            }
        }
        v
    }

    fn insert(&mut self, v: &[u64]) -> bool {
        let r = self.reduce(v);
        match leading_bit(&r) {
            None => false,
            Some(p) => {
                let pos = self.rows.partition_point(|(q, _)| *q > p);
                self.rows.insert(pos, (p, r));
                true
            }
        }
    }

    fn contains(&self, v: &[u64]) -> bool {
        leading_bit(&self.reduce(v)).is_none()
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Every element of the span.
    fn elements(&self) -> Vec<Vec<u64>> {
        let words = self.rows.first().map_or(0, |r| r.1.len());
        let mut out = vec![vec![0u64; words]];
        for (_, row) in &self.rows {
            let extra: Vec<Vec<u64>> = out
                .iter()
                .map(|v| v.iter().zip(row).map(|(a, b)| a ^ b).collect())
                .collect();
            out.extend(extra);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanReport {
    /// `n(2k+1)`.
    pub expected_dim: usize,
    /// `F_2`-dimension of the span of all circular shifts of the generators.
    pub span_dim: usize,
    /// `F_2`-dimension of `{c_a}`.
    pub code_dim: usize,
    /// Whether the two sets were materialised and compared element by element.
    pub sets_compared: bool,
    pub sets_equal: bool,
    /// True period of each generator sequence.
    pub periods: Vec<(String, usize)>,
}

impl SpanReport {
    pub fn holds(&self) -> bool {
        self.sets_equal && self.span_dim == self.expected_dim && self.code_dim == self.expected_dim
    }
}

/// Largest code dimension for which both sets are listed and compared directly.
const SET_COMPARE_MAX_DIM: usize = 12;

/// Checks that `{c_a}` equals the `F_2`-span of all circular shifts of
/// `s, s_0, …, s_{k-1}` and that its dimension is `n(2k+1)`.
pub fn span_equality_check(p: &CodeParams) -> Result<SpanReport> {
    if p.m() > SPAN_CHECK_MAX_M {
        return Err(Error::Budget(format!(
            "span check limited to m <= {SPAN_CHECK_MAX_M}, got m = {}",
            p.m()
        )));
    }
    let gens = generator_sequences(p);
    let len = p.field().group_order() as usize;
    let mut span = WordBasis::default();
    for (_, g) in &gens {
        for shift in 0..len {
            span.insert(&g.shifted(shift).to_words());
        }
    }

    // a ↦ c_a is F_2-linear: the code is spanned by the images of an F_2-basis of the a-space
    let f = p.field();
    let sub_basis = f2_basis(&f.subfield_elements(p.n())?);
    let zero = CoeffVector::zero(p);
    let mut coeff_basis = Vec::new();
    for &b in &sub_basis {
        coeff_basis.push(CoeffVector {
            a0: b,
            ..zero.clone()
        });
    }
    for bit in 0..p.m() {
        let v = FieldElement(1 << bit);
        for j in 1..p.k() as usize {
            let mut a = zero.clone();
            a.middle[j - 1] = v;
            coeff_basis.push(a);
        }
        coeff_basis.push(CoeffVector {
            ak: v,
            ..zero.clone()
        });
    }
    let mut code = WordBasis::default();
    let mut contained = true;
    for a in &coeff_basis {
        let w = codeword(p, a).bits.to_words();
        code.insert(&w);
        contained &= span.contains(&w);
    }

    let expected_dim = p.code_dim_bits() as usize;
    let (sets_compared, sets_equal) = if expected_dim <= SET_COMPARE_MAX_DIM {
        let codewords: BTreeSet<Vec<u64>> = CoeffSpace::new(p)
            .iter()
            .map(|a| codeword(p, &a).bits.to_words())
            .collect();
        let spanned: BTreeSet<Vec<u64>> = span.elements().into_iter().collect();
        (true, codewords == spanned)
    } else {
        (false, contained && code.dim() == span.dim())
    };

    Ok(SpanReport {
        expected_dim,
        span_dim: span.dim(),
        code_dim: code.dim(),
        sets_compared,
        sets_equal,
        periods: gens.iter().map(|(l, g)| (l.clone(), g.period())).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(m: u32, n: u32, d: u32, k: u32) -> CodeParams {
        CodeParams::new(m, n, d, k).unwrap()
    }

    #[test]
    fn base_sequence_properties() {
        for (m, n) in [(2, 1), (4, 2), (6, 3), (8, 4)] {
            let p = params(m, n, 1, 1);
            let s = base_sequence(&p);
            assert_eq!(s.len(), (1 << m) - 1);
            assert_eq!(s.weight(), 1 << (m - 1));
            assert_eq!(s.period(), (1 << m) - 1);
            for shift in 1..s.len() {
                assert_eq!(s.autocorrelation(shift), -1);
            }
        }
    }

    #[test]
    fn zero_phase_decimation_vanishes() {
        let f = FieldSpec::new(4).unwrap();
        let literal =
            BitSequence::from_bits((0..15).map(|i| f.abs_trace(f.pi_pow(-i)) as u8).collect());
        let dec = circular_decimate(&literal, 5).unwrap();
        assert_eq!(dec.weight(), 0);
        // the shifted phase used for the base sequence does not
        let dec = circular_decimate(&m_sequence(&f), 5).unwrap();
        assert_eq!(dec.period(), 3);
        assert_eq!(dec.len(), 15);
    }

    #[test]
    fn decimation_examples() {
        let p = params(4, 2, 1, 2);
        let s = base_sequence(&p);
        assert_eq!(circular_decimate(&s, 1).unwrap(), s);
        assert!(circular_decimate(&s, 0).is_err());
        let gens = generator_sequences(&p);
        let periods: Vec<usize> = gens.iter().map(|(_, g)| g.period()).collect();
        // s, s_0 (factor 5), s_1 (factor 3 shares the factor 3 with 15)
        assert_eq!(periods, vec![15, 3, 5]);
        let p6 = params(6, 3, 1, 3);
        let periods: Vec<usize> = generator_sequences(&p6)
            .iter()
            .map(|(_, g)| g.period())
            .collect();
        assert_eq!(periods[0], 63);
        assert_eq!(periods[1], 7);
    }

    #[test]
    fn codeword_examples() {
        let p = params(4, 2, 1, 1);
        let zero = codeword(&p, &CoeffVector::zero(&p));
        assert_eq!(zero.dc, 15);
        assert_eq!(zero.weight(), 0);
        for ak in 1..16 {
            let a = CoeffVector {
                ak: FieldElement(ak),
                ..CoeffVector::zero(&p)
            };
            assert_eq!(codeword(&p, &a).dc, -1);
        }
        let a = CoeffVector {
            a0: FieldElement::ONE,
            ..CoeffVector::zero(&p)
        };
        let c = codeword(&p, &a);
        assert!([3, -5].contains(&c.dc), "dc = {}", c.dc);
        assert_eq!(c.dc, dc_component(&c));
        assert_eq!(c.weight() as i64, (15 - c.dc) / 2);
    }

    #[test]
    fn dc_values_exhaustive_m4() {
        for (k, allowed) in [(1, vec![-1, 3, -5]), (2, vec![-1, 3, -5, 7, -9])] {
            let p = params(4, 2, 1, k);
            let mut nonzero = 0;
            for a in CoeffSpace::new(&p).iter().filter(|a| !a.is_zero()) {
                let c = codeword(&p, &a);
                assert!(allowed.contains(&c.dc), "k={k} dc={}", c.dc);
                nonzero += 1;
            }
            assert_eq!(nonzero, if k == 1 { 63 } else { 1023 });
        }
    }

    #[test]
    fn character_sum_bridge() {
        // 1 + DC(c_a) = Σ_x (-1)^{Tr_{e→1}(Q_a(x))}
        for (m, n, d, k) in [(4, 2, 1, 2), (4, 2, 2, 1), (6, 3, 1, 2)] {
            let p = params(m, n, d, k);
            let f = p.field();
            let space = CoeffSpace::new(&p);
            let step = (space.len() / 700).max(1);
            for idx in (0..space.len()).step_by(step as usize) {
                let a = space.get(idx);
                let sum: i64 = f
                    .elements()
                    .map(|x| {
                        if f.rel_trace_unchecked(quad_form(&p, &a, x), p.e(), 1)
                            .is_zero()
                        {
                            1
                        } else {
                            -1
                        }
                    })
                    .sum();
                assert_eq!(1 + codeword(&p, &a).dc, sum);
            }
        }
    }

    #[test]
    fn codeword_map_is_linear() {
        let p = params(6, 3, 1, 2);
        let space = CoeffSpace::new(&p);
        for i in 0..40u64 {
            let a = space.get(i * 104_729 % space.len());
            let b = space.get(i * 7_919 % space.len());
            let ca = codeword(&p, &a).bits;
            let cb = codeword(&p, &b).bits;
            let cab = codeword(&p, &a.add(&b)).bits;
            let xor: Vec<u8> = ca
                .bits()
                .iter()
                .zip(cb.bits())
                .map(|(x, y)| x ^ y)
                .collect();
            assert_eq!(cab.bits(), &xor[..]);
        }
    }

    #[test]
    fn code_is_cyclic() {
        let p = params(4, 2, 1, 2);
        let words: BTreeSet<BitSequence> = CoeffSpace::new(&p)
            .iter()
            .map(|a| codeword(&p, &a).bits)
            .collect();
        assert_eq!(words.len(), 1024);
        for w in &words {
            assert!(words.contains(&w.shifted(1)));
        }
    }

    #[test]
    fn span_equality_small() {
        for ((m, n, d, k), dim) in [((4, 2, 1, 1), 6), ((4, 2, 1, 2), 10), ((6, 3, 1, 1), 9)] {
            let r = span_equality_check(&params(m, n, d, k)).unwrap();
            assert!(r.sets_compared);
            assert!(r.holds(), "{r:?}");
            assert_eq!(r.span_dim, dim);
        }
    }

    #[test]
    fn span_equality_without_listing() {
        let r = span_equality_check(&params(6, 3, 1, 3)).unwrap();
        assert!(!r.sets_compared);
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.span_dim, 21);
        let r = span_equality_check(&params(8, 4, 2, 2)).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.span_dim, 20);
    }

    #[test]
    fn span_check_budget() {
        let err = span_equality_check(&params(10, 5, 1, 1)).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
