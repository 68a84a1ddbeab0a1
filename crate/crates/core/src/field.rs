//! Arithmetic in GF(2^m) and its subfield tower.
//!
//! Elements are packed bit-vectors in the polynomial basis `1, π, …, π^{m-1}`
//! where `π` is a root of the defining primitive polynomial. A subfield
//! GF(2^deg) is not a separate object: it is the fixed-point set of
//! `x ↦ x^{2^deg}` inside the big field, so a single multiplication kernel
//! serves the whole tower.
//!
//! For `m <= 20` log/antilog tables are built once per field and
//! multiplication is a pair of lookups. Larger fields fall back to a
//! carry-less multiply followed by reduction.

use std::fmt;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 24;
/// Largest degree for which log/antilog tables are materialised.
pub const TABLE_DEGREE_LIMIT: u32 = 20;

#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({:#x})", self.0)
    }
}

// addition in characteristic 2 is XOR
impl Add for FieldElement {
    type Output = FieldElement;

    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl AddAssign for FieldElement {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

#[derive(Clone)]
struct LogTables {
    /// `exp[i] = π^i`, doubled so that `exp[log a + log b]` needs no reduction.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
}

/// The field GF(2^m) together with a fixed primitive element `π`.
#[derive(Clone)]
pub struct FieldSpec {
    m: u32,
    modulus: u64,
    /// `Tr_{GF(2^m)/GF(2)}(x) = parity(x & trace_mask)`.
    trace_mask: u32,
    tables: Option<LogTables>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("m", &self.m)
            .field("modulus", &format_args!("{:#b}", self.modulus))
            .field("tables", &self.tables.is_some())
            .finish()
    }
}

/// Carry-less product of `a` and `b` reduced modulo `modulus` (degree `m`).
#[inline]
fn clmul_reduce(a: u64, b: u64, m: u32, modulus: u64) -> u64 {
    let mut prod: u64 = 0;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            prod ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    let mut i = 2 * m;
    while i > m {
        i -= 1;
        if (prod >> i) & 1 == 1 {
            prod ^= modulus << (i - m);
        }
    }
    prod
}

fn poly_pow_x(exp: u64, m: u32, modulus: u64) -> u64 {
    // x^exp mod modulus by square-and-multiply
    let mut result: u64 = 1;
    let mut base: u64 = 2;
    if m == 1 {
        base = clmul_reduce(base, 1, m, modulus);
    }
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = clmul_reduce(result, base, m, modulus);
        }
        base = clmul_reduce(base, base, m, modulus);
        e >>= 1;
    }
    result
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// True iff `poly` (bit i = coefficient of x^i) has degree `m` and its root
/// has multiplicative order exactly `2^m - 1`.
pub fn is_primitive_polynomial(m: u32, poly: u64) -> bool {
    if m == 0 || m > 63 || poly >> m != 1 || poly & 1 == 0 {
        return false;
    }
    let order = (1u64 << m) - 1;
    if poly_pow_x(order, m, poly) != 1 {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|p| poly_pow_x(order / p, m, poly) != 1)
}

impl FieldSpec {
    /// GF(2^m) defined by the numerically smallest primitive polynomial of
    /// degree `m`.
    pub fn new(m: u32) -> Result<Self> {
        if !(2..=MAX_DEGREE).contains(&m) {
            return Err(Error::FieldDegree(m));
        }
        let top = 1u64 << m;
        let modulus = (top + 1..2 * top)
            .step_by(2)
            .find(|&p| is_primitive_polynomial(m, p))
            .expect("a primitive polynomial exists for every degree");
        Self::with_modulus(m, modulus)
    }

    /// GF(2^m) with an explicit defining polynomial, which must be primitive.
    pub fn with_modulus(m: u32, modulus: u64) -> Result<Self> {
        if !(2..=MAX_DEGREE).contains(&m) {
            return Err(Error::FieldDegree(m));
        }
        if !is_primitive_polynomial(m, modulus) {
            return Err(Error::NotPrimitive {
                poly: modulus,
                degree: m,
            });
        }
        let mut field = FieldSpec {
            m,
            modulus,
            trace_mask: 0,
            tables: None,
        };
        if m <= TABLE_DEGREE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        let mut mask = 0u32;
        for i in 0..m {
            let basis = FieldElement(1 << i);
            let t = field.trace_slow(basis);
            debug_assert!(t.0 <= 1);
            mask |= t.0 << i;
        }
        field.trace_mask = mask;
        Ok(field)
    }

    fn build_tables(&self) -> LogTables {
        let group = (1usize << self.m) - 1;
        let mut exp = vec![0u32; 2 * group + 2];
        let mut log = vec![0u32; group + 1];
        let mut x: u64 = 1;
        for (i, slot) in exp.iter_mut().take(group).enumerate() {
            *slot = x as u32;
            log[x as usize] = i as u32;
            x <<= 1;
            if x >> self.m == 1 {
                x ^= self.modulus;
            }
        }
        debug_assert_eq!(x, 1, "π must have order 2^m - 1");
        for i in group..exp.len() {
            exp[i] = exp[i - group];
        }
        LogTables { exp, log }
    }

    fn trace_slow(&self, x: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut y = x;
        for _ in 0..self.m {
            acc += y;
            y = self.square(y);
        }
        acc
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Defining polynomial, bit i = coefficient of x^i (bit m is set).
    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of field elements, `2^m`.
    #[inline]
    pub fn size(&self) -> u64 {
        1u64 << self.m
    }

    /// Order of the multiplicative group, `2^m - 1`.
    #[inline]
    pub fn group_order(&self) -> u64 {
        (1u64 << self.m) - 1
    }

    #[inline]
    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// All elements in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..(1u32 << self.m)).map(FieldElement)
    }

    /// Wraps raw bits, rejecting patterns wider than `m`.
    pub fn element(&self, bits: u32) -> Result<FieldElement> {
        if u64::from(bits) >= self.size() {
            return Err(Error::InvalidArgument(format!(
                "{bits:#x} is not an element of GF(2^{})",
                self.m
            )));
        }
        Ok(FieldElement(bits))
    }

    #[inline]
    pub fn pi(&self) -> FieldElement {
        FieldElement(2)
    }

    /// `π^i`; negative exponents are reduced modulo `2^m - 1`.
    pub fn pi_pow(&self, i: i64) -> FieldElement {
        let group = self.group_order() as i64;
        let e = i.rem_euclid(group) as u64;
        match &self.tables {
            Some(t) => FieldElement(t.exp[e as usize]),
            None => self.pow(self.pi(), e),
        }
    }

    /// Discrete logarithm to base `π`, `None` for zero.
    pub fn log(&self, x: FieldElement) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        match &self.tables {
            Some(t) => Some(u64::from(t.log[x.0 as usize])),
            None => {
                let mut y = FieldElement::ONE;
                for i in 0..self.group_order() {
                    if y == x {
                        return Some(i);
                    }
                    y = self.mul(y, self.pi());
                }
                unreachable!("π generates the multiplicative group")
            }
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    FieldElement::ZERO
                } else {
                    let la = t.log[a.0 as usize] as usize;
                    let lb = t.log[b.0 as usize] as usize;
                    FieldElement(t.exp[la + lb])
                }
            }
            None => FieldElement(
                clmul_reduce(u64::from(a.0), u64::from(b.0), self.m, self.modulus) as u32,
            ),
        }
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        if let (Some(t), false) = (&self.tables, a.is_zero()) {
            let l = u64::from(t.log[a.0 as usize]);
            let idx = ((u128::from(l) * u128::from(e)) % u128::from(self.group_order())) as usize;
            return FieldElement(t.exp[idx]);
        }
        let mut result = FieldElement::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        result
    }

    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        Some(match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize] as u64;
                let group = self.group_order();
                FieldElement(t.exp[((group - l) % group) as usize])
            }
            None => self.pow(a, self.group_order() - 1),
        })
    }

    /// `x^{2^t}`, with `t` taken modulo `m` (so `t = -d` means `x^{2^{m-d}}`).
    pub fn frobenius_pow(&self, x: FieldElement, t: i64) -> FieldElement {
        let t = t.rem_euclid(i64::from(self.m)) as u32;
        if t == 0 || x.is_zero() {
            return x;
        }
        match &self.tables {
            Some(tab) => {
                let l = u64::from(tab.log[x.0 as usize]);
                let idx = ((l << t) % self.group_order()) as usize;
                FieldElement(tab.exp[idx])
            }
            None => {
                let mut y = x;
                for _ in 0..t {
                    y = self.square(y);
                }
                y
            }
        }
    }

    /// Absolute trace `Tr_{GF(2^m)/GF(2)}(x)` as a bit.
    #[inline]
    pub fn abs_trace(&self, x: FieldElement) -> u32 {
        (x.0 & self.trace_mask).count_ones() & 1
    }

    /// Mask with `Tr(x) = parity(x & mask)`.
    #[inline]
    pub fn trace_mask(&self) -> u32 {
        self.trace_mask
    }

    fn check_divides(&self, deg: u32, of: u32) -> Result<()> {
        if deg == 0 || !of.is_multiple_of(deg) {
            return Err(Error::NotDivisor { deg, of });
        }
        Ok(())
    }

    pub fn in_subfield(&self, x: FieldElement, deg: u32) -> bool {
        self.frobenius_pow(x, i64::from(deg)) == x
    }

    /// `Tr_{GF(2^from)/GF(2^to)}(x) = Σ_{i < from/to} x^{2^{to·i}}`.
    ///
    /// Requires `to | from | m` and `x ∈ GF(2^from)`.
    pub fn rel_trace(&self, x: FieldElement, from: u32, to: u32) -> Result<FieldElement> {
        self.check_divides(from, self.m)?;
        self.check_divides(to, from)?;
        if !self.in_subfield(x, from) {
            return Err(Error::NotInSubfield {
                bits: x.0,
                deg: from,
            });
        }
        Ok(self.rel_trace_unchecked(x, from, to))
    }

    /// [`rel_trace`](Self::rel_trace) without the tower and membership checks.
    #[inline]
    pub fn rel_trace_unchecked(&self, x: FieldElement, from: u32, to: u32) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut y = x;
        for _ in 0..from / to {
            acc += y;
            y = self.frobenius_pow(y, i64::from(to));
        }
        acc
    }

    /// The `2^deg` elements of GF(2^deg) ⊆ GF(2^m), sorted by bit pattern.
    pub fn subfield_elements(&self, deg: u32) -> Result<Vec<FieldElement>> {
        self.check_divides(deg, self.m)?;
        if deg == self.m {
            return Ok(self.elements().collect());
        }
        // GF(2^deg)^* is generated by π^((2^m-1)/(2^deg-1)).
        let step = self.group_order() / ((1u64 << deg) - 1);
        let gen = self.pow(self.pi(), step);
        let mut out = Vec::with_capacity(1 << deg);
        out.push(FieldElement::ZERO);
        let mut y = FieldElement::ONE;
        for _ in 0..(1u64 << deg) - 1 {
            out.push(y);
            y = self.mul(y, gen);
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Lookup table `x ↦ x^exponent` over the whole field.
    pub fn power_table(&self, exponent: u64) -> Vec<FieldElement> {
        self.elements().map(|x| self.pow(x, exponent)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Naive order of x modulo `poly`: multiply by x until 1 reappears.
    fn naive_order(m: u32, poly: u64) -> u64 {
        let mut y = 2u64;
        if y >> m == 1 {
            y ^= poly;
        }
        let mut k = 1;
        while y != 1 {
            y <<= 1;
            if y >> m == 1 {
                y ^= poly;
            }
            k += 1;
            if k > 1 << m {
                return 0;
            }
        }
        k
    }

    fn smallest_primitive_naive(m: u32) -> u64 {
        ((1u64 << m) + 1..(2u64 << m))
            .step_by(2)
            .find(|&p| naive_order(m, p) == (1 << m) - 1)
            .unwrap()
    }

    #[test]
    fn moduli_match_exhaustive_order_search() {
        assert_eq!(FieldSpec::new(2).unwrap().modulus(), 0b111);
        assert_eq!(FieldSpec::new(4).unwrap().modulus(), 0b10011);
        assert_eq!(FieldSpec::new(6).unwrap().modulus(), 0b1000011);
        for m in 2..=12 {
            assert_eq!(
                FieldSpec::new(m).unwrap().modulus(),
                smallest_primitive_naive(m),
                "m = {m}"
            );
        }
    }

    #[test]
    fn rejects_out_of_range_degree() {
        assert_eq!(FieldSpec::new(1).unwrap_err(), Error::FieldDegree(1));
        assert_eq!(FieldSpec::new(25).unwrap_err(), Error::FieldDegree(25));
        // x^4 + x^3 + x^2 + x + 1 is irreducible but its root has order 5
        assert!(FieldSpec::with_modulus(4, 0b11111).is_err());
    }

    #[test]
    fn gf16_products() {
        let f = FieldSpec::new(4).unwrap();
        let pi = f.pi();
        let pi3 = f.pi_pow(3);
        assert_eq!(f.mul(pi, pi3), FieldElement(0b0011));
        for a in f.elements() {
            assert_eq!(f.mul(a, FieldElement::ONE), a);
            assert_eq!(f.mul(a, FieldElement::ZERO), FieldElement::ZERO);
        }
    }

    #[test]
    fn frobenius_examples() {
        let f = FieldSpec::new(4).unwrap();
        let pi = f.pi();
        assert_eq!(f.frobenius_pow(pi, 0), pi);
        // repeated squaring oracle
        let sq2 = f.square(f.square(pi));
        assert_eq!(f.frobenius_pow(pi, 2), sq2);
        assert_eq!(sq2, FieldElement(0b0011));
        assert_eq!(f.frobenius_pow(pi, 4), pi);
        for x in f.elements() {
            let y = f.frobenius_pow(x, -1);
            assert_eq!(f.frobenius_pow(y, 1), x);
        }
    }

    #[test]
    fn trace_examples() {
        let f = FieldSpec::new(4).unwrap();
        assert_eq!(
            f.rel_trace(FieldElement::ONE, 4, 1).unwrap(),
            FieldElement::ZERO
        );
        assert_eq!(f.rel_trace(f.pi(), 4, 1).unwrap(), FieldElement::ZERO);
        for x in f.elements() {
            let t = f.rel_trace(x, 4, 2).unwrap();
            assert_eq!(t, x + f.frobenius_pow(x, 2));
            assert!(f.in_subfield(t, 2));
            assert_eq!(f.rel_trace(x, 4, 1).unwrap().0, f.abs_trace(x));
        }
        let f4 = f.subfield_elements(2).unwrap();
        for &c in &f4 {
            for x in f.elements() {
                let lhs = f.rel_trace(f.mul(c, x), 4, 2).unwrap();
                let rhs = f.mul(c, f.rel_trace(x, 4, 2).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn trace_rejects_bad_tower() {
        let f = FieldSpec::new(6).unwrap();
        assert_eq!(
            f.rel_trace(FieldElement::ONE, 4, 2).unwrap_err(),
            Error::NotDivisor { deg: 4, of: 6 }
        );
        assert_eq!(
            f.rel_trace(FieldElement::ONE, 3, 2).unwrap_err(),
            Error::NotDivisor { deg: 2, of: 3 }
        );
        assert!(matches!(
            f.rel_trace(f.pi(), 3, 1),
            Err(Error::NotInSubfield { .. })
        ));
    }

    #[test]
    fn trace_is_transitive() {
        let f = FieldSpec::new(12).unwrap();
        for x in f.elements().step_by(7) {
            let direct = f.rel_trace(x, 12, 2).unwrap();
            let via = f.rel_trace(f.rel_trace(x, 12, 6).unwrap(), 6, 2).unwrap();
            assert_eq!(direct, via);
        }
    }

    #[test]
    fn subfield_listing() {
        let f = FieldSpec::new(4).unwrap();
        assert_eq!(
            f.subfield_elements(1).unwrap(),
            vec![FieldElement::ZERO, FieldElement::ONE]
        );
        let f4 = f.subfield_elements(2).unwrap();
        let mut expected = vec![
            FieldElement::ZERO,
            FieldElement::ONE,
            f.pi_pow(5),
            f.pi_pow(10),
        ];
        expected.sort();
        assert_eq!(f4, expected);
        assert_eq!(f.subfield_elements(4).unwrap().len(), 16);
        assert!(f.subfield_elements(3).is_err());
    }

    #[test]
    fn subfields_are_fields() {
        let f = FieldSpec::new(12).unwrap();
        for deg in [1, 2, 3, 4, 6] {
            let sub = f.subfield_elements(deg).unwrap();
            assert_eq!(sub.len(), 1 << deg);
            let fixed: Vec<_> = f.elements().filter(|&x| f.in_subfield(x, deg)).collect();
            assert_eq!(fixed, sub);
            for &a in &sub {
                if let Some(ai) = f.inv(a) {
                    assert!(sub.binary_search(&ai).is_ok());
                }
                for &b in &sub {
                    assert!(sub.binary_search(&f.mul(a, b)).is_ok());
                }
            }
        }
    }

    #[test]
    fn pi_has_full_order() {
        for m in [2, 4, 6, 8, 12, 21, 24] {
            let f = FieldSpec::new(m).unwrap();
            let order = f.group_order();
            assert_eq!(f.pow(f.pi(), order), FieldElement::ONE);
            for p in prime_factors(order) {
                assert_ne!(f.pow(f.pi(), order / p), FieldElement::ONE, "m={m} p={p}");
            }
        }
    }

    #[test]
    fn pi_powers_are_distinct() {
        let f = FieldSpec::new(10).unwrap();
        let mut seen = vec![false; f.size() as usize];
        for i in 0..f.group_order() as i64 {
            let y = f.pi_pow(i);
            assert!(!y.is_zero());
            assert!(!seen[y.0 as usize]);
            seen[y.0 as usize] = true;
        }
    }

    #[test]
    fn table_and_clmul_kernels_agree() {
        let f = FieldSpec::new(16).unwrap();
        assert!(f.has_tables());
        let mut x = 0x1234u32;
        for _ in 0..2000 {
            x = x.wrapping_mul(2_654_435_761).wrapping_add(12345) & 0xffff;
            let y = (x.rotate_left(7) ^ 0x5a5a) & 0xffff;
            let table = f.mul(FieldElement(x), FieldElement(y));
            let raw = clmul_reduce(u64::from(x), u64::from(y), 16, f.modulus()) as u32;
            assert_eq!(table.0, raw);
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = FieldSpec::new(22).unwrap();
        assert!(!f.has_tables());
        let a = f.pi_pow(123_456);
        let b = f.inv(a).unwrap();
        assert_eq!(f.mul(a, b), FieldElement::ONE);
        assert_eq!(f.frobenius_pow(a, 22), a);
        assert_eq!(f.abs_trace(a), f.trace_slow(a).0);
    }

    #[test]
    fn trace_character_is_balanced() {
        // Σ_x (-1)^{Tr_{e→1}(Tr_{m→e}(x))} = 0
        let f = FieldSpec::new(12).unwrap();
        let sum: i64 = f
            .elements()
            .map(|x| {
                let t = f.rel_trace(x, 12, 2).unwrap();
                let b = f.rel_trace(t, 2, 1).unwrap();
                if b.is_zero() {
                    1
                } else {
                    -1
                }
            })
            .sum();
        assert_eq!(sum, 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn ring_laws(a in 0u32..(1 << 12), b in 0u32..(1 << 12), c in 0u32..(1 << 12), t in -30i64..30) {
                let f = FieldSpec::new(12).unwrap();
                let (a, b, c) = (FieldElement(a), FieldElement(b), FieldElement(c));
                prop_assert_eq!(f.mul(a, b), f.mul(b, a));
                prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                prop_assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
                prop_assert_eq!(
                    f.frobenius_pow(f.mul(a, b), t),
                    f.mul(f.frobenius_pow(a, t), f.frobenius_pow(b, t))
                );
                prop_assert_eq!(f.frobenius_pow(a + b, t), f.frobenius_pow(a, t) + f.frobenius_pow(b, t));
            }
        }
    }
}
