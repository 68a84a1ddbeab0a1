//! Code parameters, the quadratic form `Q_a` and its polarization `B_a`.
//!
//! `Q_a(x) = Tr_{n→e}(a_0 x^{2^{nd/e}+1}) + Σ_{j=1}^{k-1} Tr_{m→e}(a_j x^{2^{(n/e-j)d}+1})
//!          + Tr_{m→e}(a_k x)`
//!
//! is an `F_{2^e}`-valued quadratic form on `F_{2^m}` viewed as an
//! `F_{2^e}`-space of dimension `m/e`. Its polarization is alternating, so
//! its rank is even; the rank fixes `|1 + DC(c_a)|`.

use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// Tower parameters `(m, n, d, e, k)` with `m = 2n`, `e = gcd(n,d) = gcd(m,d)`
/// and `1 <= k <= n/e`, plus the field `GF(2^m)`.
#[derive(Clone, Debug)]
pub struct CodeParams {
    m: u32,
    n: u32,
    d: u32,
    e: u32,
    k: u32,
    field: Arc<FieldSpec>,
    /// `exponents[j] = (n/e - j)·d mod m`, the Frobenius twist of the `a_j` term.
    exponents: Vec<u32>,
}

impl CodeParams {
    /// Validates the tower and derives `e = gcd(n, d)`.
    pub fn new(m: u32, n: u32, d: u32, k: u32) -> Result<Self> {
        Self::validate(m, n, d, k)?;
        let field = Arc::new(FieldSpec::new(m)?);
        Self::with_field(field, n, d, k)
    }

    /// Like [`new`](Self::new) but checks a caller-supplied `e` as well.
    pub fn with_e(m: u32, n: u32, d: u32, e: u32, k: u32) -> Result<Self> {
        let p = Self::new(m, n, d, k)?;
        if p.e != e {
            return Err(Error::InvalidParams(format!(
                "e = {e} but gcd(n,d) = {}",
                p.e
            )));
        }
        Ok(p)
    }

    /// Reuses an existing `GF(2^m)`.
    pub fn with_field(field: Arc<FieldSpec>, n: u32, d: u32, k: u32) -> Result<Self> {
        let m = field.m();
        Self::validate(m, n, d, k)?;
        let e = n.gcd(&d);
        let exponents = (0..k)
            .map(|j| (((n / e - j) as u64 * d as u64) % m as u64) as u32)
            .collect();
        Ok(CodeParams {
            m,
            n,
            d,
            e,
            k,
            field,
            exponents,
        })
    }

    fn validate(m: u32, n: u32, d: u32, k: u32) -> Result<()> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidParams(format!(
                "n and d must be positive (n = {n}, d = {d})"
            )));
        }
        if m != 2 * n {
            return Err(Error::InvalidParams(format!(
                "m = 2n violated (m = {m}, n = {n})"
            )));
        }
        let e = n.gcd(&d);
        let e_m = m.gcd(&d);
        if e != e_m {
            return Err(Error::InvalidParams(format!(
                "gcd(n,d) = {e} ≠ gcd(m,d) = {e_m}"
            )));
        }
        if k < 1 || k > n / e {
            return Err(Error::InvalidParams(format!(
                "k must satisfy 1 ≤ k ≤ n/e = {} (k = {k})",
                n / e
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }
    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }
    #[inline]
    pub fn d(&self) -> u32 {
        self.d
    }
    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }
    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }
    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }
    pub fn field_arc(&self) -> Arc<FieldSpec> {
        Arc::clone(&self.field)
    }

    /// Dimension of `F_{2^m}` over `F_{2^e}`.
    #[inline]
    pub fn form_dim(&self) -> u32 {
        self.m / self.e
    }

    /// Frobenius exponent `(n/e - j)·d mod m` of the `a_j` term, `0 <= j < k`.
    #[inline]
    pub fn exponent(&self, j: u32) -> u32 {
        self.exponents[j as usize]
    }

    /// `log2 |C| = n(2k+1)`.
    #[inline]
    pub fn code_dim_bits(&self) -> u32 {
        self.n * (2 * self.k + 1)
    }

    /// Smallest admissible rank `m/e - 2(k-1)` of `B_a` when the quadratic part is nonzero.
    #[inline]
    pub fn min_rank(&self) -> u32 {
        self.form_dim() - 2 * (self.k - 1)
    }
}

/// `a = (a_0, a_1, …, a_{k-1}, a_k) ∈ F_{2^n} × F_{2^m}^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoeffVector {
    pub a0: FieldElement,
    /// `a_1 … a_{k-1}`.
    pub middle: Vec<FieldElement>,
    /// The linear coefficient `a_k`.
    pub ak: FieldElement,
}

impl CoeffVector {
    pub fn new(
        p: &CodeParams,
        a0: FieldElement,
        middle: Vec<FieldElement>,
        ak: FieldElement,
    ) -> Result<Self> {
        let f = p.field();
        if middle.len() != (p.k - 1) as usize {
            return Err(Error::InvalidArgument(format!(
                "expected {} middle coefficients, got {}",
                p.k - 1,
                middle.len()
            )));
        }
        for x in std::iter::once(&a0)
            .chain(&middle)
            .chain(std::iter::once(&ak))
        {
            f.element(x.0)?;
        }
        if !f.in_subfield(a0, p.n) {
            return Err(Error::NotInSubfield {
                bits: a0.0,
                deg: p.n,
            });
        }
        Ok(CoeffVector { a0, middle, ak })
    }

    pub fn zero(p: &CodeParams) -> Self {
        CoeffVector {
            a0: FieldElement::ZERO,
            middle: vec![FieldElement::ZERO; (p.k - 1) as usize],
            ak: FieldElement::ZERO,
        }
    }

    /// `(a_0, …, a_{k-1}) = 0`.
    pub fn quadratic_part_is_zero(&self) -> bool {
        self.a0.is_zero() && self.middle.iter().all(|x| x.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.quadratic_part_is_zero() && self.ak.is_zero()
    }

    /// Coordinate-wise sum.
    pub fn add(&self, other: &CoeffVector) -> CoeffVector {
        CoeffVector {
            a0: self.a0 + other.a0,
            middle: self
                .middle
                .iter()
                .zip(&other.middle)
                .map(|(&x, &y)| x + y)
                .collect(),
            ak: self.ak + other.ak,
        }
    }

    /// The quadratic coefficient `a_j` for `0 <= j < k`.
    #[inline]
    pub fn quadratic(&self, j: u32) -> FieldElement {
        if j == 0 {
            self.a0
        } else {
            self.middle[(j - 1) as usize]
        }
    }
}

/// Indexes the whole coefficient space `F_{2^n} × F_{2^m}^k` by integers in
/// `[0, 2^{n(2k+1)})`: the low `n` bits pick `a_0`, then `m` bits per coefficient.
#[derive(Clone, Debug)]
pub struct CoeffSpace {
    subfield: Vec<FieldElement>,
    n: u32,
    m: u32,
    k: u32,
}

impl CoeffSpace {
    pub fn new(p: &CodeParams) -> Self {
        CoeffSpace {
            subfield: p.field().subfield_elements(p.n).expect("n divides m"),
            n: p.n,
            m: p.m,
            k: p.k,
        }
    }

    pub fn len(&self) -> u64 {
        1u64 << (self.n + self.m * self.k)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The `F_{2^n}` elements in the order used for `a_0`.
    pub fn subfield(&self) -> &[FieldElement] {
        &self.subfield
    }

    pub fn get(&self, idx: u64) -> CoeffVector {
        let mask = (1u64 << self.m) - 1;
        let a0 = self.subfield[(idx & ((1 << self.n) - 1)) as usize];
        let mut rest = idx >> self.n;
        let mut middle = Vec::with_capacity((self.k - 1) as usize);
        for _ in 1..self.k {
            middle.push(FieldElement((rest & mask) as u32));
            rest >>= self.m;
        }
        CoeffVector {
            a0,
            middle,
            ak: FieldElement((rest & mask) as u32),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = CoeffVector> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}

/// `Q_a(x) ∈ F_{2^e}`.
pub fn quad_form(p: &CodeParams, a: &CoeffVector, x: FieldElement) -> FieldElement {
    let f = p.field();
    let mut acc = FieldElement::ZERO;
    let t0 = p.exponent(0);
    let y = f.mul(a.a0, f.mul(f.frobenius_pow(x, i64::from(t0)), x));
    debug_assert!(
        f.in_subfield(y, p.n),
        "a_0·x^(2^(nd/e)+1) must lie in F_2^n"
    );
    acc += f.rel_trace_unchecked(y, p.n, p.e);
    for j in 1..p.k {
        let t = p.exponent(j);
        let y = f.mul(a.quadratic(j), f.mul(f.frobenius_pow(x, i64::from(t)), x));
        acc += f.rel_trace_unchecked(y, p.m, p.e);
    }
    acc += f.rel_trace_unchecked(f.mul(a.ak, x), p.m, p.e);
    acc
}

/// `B_a(x, y) = Q_a(x+y) - Q_a(x) - Q_a(y)`, evaluated from its own closed form.
pub fn bilinear_form(
    p: &CodeParams,
    a: &CoeffVector,
    x: FieldElement,
    y: FieldElement,
) -> FieldElement {
    let f = p.field();
    let twisted = |t: u32| {
        let t = i64::from(t);
        f.mul(x, f.frobenius_pow(y, t)) + f.mul(f.frobenius_pow(x, t), y)
    };
    let mut acc = f.rel_trace_unchecked(f.mul(a.a0, twisted(p.exponent(0))), p.n, p.e);
    for j in 1..p.k {
        acc += f.rel_trace_unchecked(f.mul(a.quadratic(j), twisted(p.exponent(j))), p.m, p.e);
    }
    acc
}

/// Greedy `F_{2^e}`-basis of `F_{2^m}` drawn from `1, π, π^2, …`.
pub fn form_basis(p: &CodeParams) -> Vec<FieldElement> {
    let f = p.field();
    let sub_basis = f2_basis(&f.subfield_elements(p.e).expect("e divides m"));
    let mut span = Gf2Basis::new();
    let mut basis = Vec::with_capacity(p.form_dim() as usize);
    let mut i = 0i64;
    while basis.len() < p.form_dim() as usize {
        let v = f.pi_pow(i);
        let scaled: Vec<u32> = sub_basis.iter().map(|&c| f.mul(c, v).0).collect();
        let mut trial = span.clone();
        if scaled.iter().all(|&w| trial.insert(w)) {
            span = trial;
            basis.push(v);
        }
        i += 1;
    }
    basis
}

/// A greedy `F_2`-basis of the given elements.
pub fn f2_basis(elements: &[FieldElement]) -> Vec<FieldElement> {
    let mut span = Gf2Basis::new();
    elements
        .iter()
        .copied()
        .filter(|x| span.insert(x.0))
        .collect()
}

/// Incremental `F_2` row space of 32-bit vectors.
#[derive(Clone, Debug, Default)]
pub struct Gf2Basis {
    /// `pivots[b]` holds the stored vector whose leading bit is `b`, or 0.
    pivots: [u32; 32],
    rank: u32,
}

impl Gf2Basis {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduces `v` against the basis; returns true if it was independent.
    pub fn insert(&mut self, v: u32) -> bool {
        let r = self.reduce(v);
        if r == 0 {
            return false;
        }
        self.pivots[31 - r.leading_zeros() as usize] = r;
        self.rank += 1;
        true
    }

    pub fn reduce(&self, mut v: u32) -> u32 {
        while v != 0 {
            let b = 31 - v.leading_zeros() as usize;
            if self.pivots[b] == 0 {
                break;
            }
            v ^= self.pivots[b];
        }
        v
    }

    pub fn contains(&self, v: u32) -> bool {
        self.reduce(v) == 0
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }
}

/// `F_2`-rank of a list of row bit-vectors.
pub fn gf2_rank(rows: &[u32]) -> u32 {
    let mut b = Gf2Basis::new();
    for &r in rows {
        b.insert(r);
    }
    b.rank()
}

/// Gram matrix of `B_a` over `F_{2^e}` in the basis of [`form_basis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    pub dim: usize,
    pub entries: Vec<Vec<FieldElement>>,
}

impl GramMatrix {
    pub fn is_alternating(&self) -> bool {
        (0..self.dim).all(|i| {
            self.entries[i][i].is_zero()
                && (0..self.dim).all(|j| self.entries[i][j] == self.entries[j][i])
        })
    }
}

pub fn gram_matrix(p: &CodeParams, a: &CoeffVector) -> GramMatrix {
    gram_in_basis(p, a, &form_basis(p))
}

fn gram_in_basis(p: &CodeParams, a: &CoeffVector, basis: &[FieldElement]) -> GramMatrix {
    let dim = basis.len();
    let mut entries = vec![vec![FieldElement::ZERO; dim]; dim];
    for i in 0..dim {
        for j in (i + 1)..dim {
            let v = bilinear_form(p, a, basis[i], basis[j]);
            entries[i][j] = v;
            entries[j][i] = v;
        }
    }
    GramMatrix { dim, entries }
}

/// Row-reduces `rows` in place over the subfield; returns pivot columns.
fn row_reduce(f: &FieldSpec, rows: &mut [Vec<FieldElement>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x += f.mul(factor, y);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Rank of `B_a` over `F_{2^e}` by elimination on the Gram matrix.
pub fn rank(p: &CodeParams, a: &CoeffVector) -> u32 {
    let mut g = gram_matrix(p, a).entries;
    row_reduce(p.field(), &mut g).len() as u32
}

/// An `F_{2^e}`-basis of `Rad(B_a) = {x : B_a(x, y) = 0 ∀y}`.
pub fn radical(p: &CodeParams, a: &CoeffVector) -> Vec<FieldElement> {
    let f = p.field();
    let basis = form_basis(p);
    let mut g = gram_in_basis(p, a, &basis).entries;
    let pivots = row_reduce(f, &mut g);
    let dim = basis.len();
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            // nullspace vector with coordinate fc = 1
            let mut coords = vec![FieldElement::ZERO; dim];
            coords[fc] = FieldElement::ONE;
            for (row, &pc) in pivots.iter().enumerate() {
                coords[pc] = g[row][fc];
            }
            coords
                .iter()
                .zip(&basis)
                .fold(FieldElement::ZERO, |acc, (&c, &b)| acc + f.mul(c, b))
        })
        .collect()
}

/// Rank of `B_a` over `F_{2^e}` obtained from the `F_2`-form `Tr_{e→1}∘B_a`:
/// both forms share a radical, so `rank_F2 = e · rank_{F_{2^e}}`.
///
/// `tr_q[x] = Tr_{e→1}(Q_a(x))` for every `x`, indexed by bit pattern.
pub fn rank_from_trace_table(m: u32, e: u32, tr_q: &[u8]) -> u32 {
    let rows: Vec<u32> = (0..m)
        .map(|i| {
            let bi = 1usize << i;
            (0..m).fold(0u32, |row, j| {
                let bj = 1usize << j;
                let v = tr_q[bi ^ bj] ^ tr_q[bi] ^ tr_q[bj];
                row | (u32::from(v & 1) << j)
            })
        })
        .collect();
    let r = gf2_rank(&rows);
    debug_assert_eq!(r % e, 0);
    r / e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(m: u32, n: u32, d: u32, k: u32) -> CodeParams {
        CodeParams::new(m, n, d, k).unwrap()
    }

    #[test]
    fn parameter_gate() {
        let p = params(4, 2, 1, 1);
        assert_eq!((p.m(), p.n(), p.d(), p.e(), p.k()), (4, 2, 1, 1, 1));
        let err = CodeParams::new(6, 3, 2, 1).unwrap_err();
        assert!(
            err.to_string().contains("gcd(n,d) = 1 ≠ gcd(m,d) = 2"),
            "{err}"
        );
        assert!(CodeParams::new(6, 4, 1, 1)
            .unwrap_err()
            .to_string()
            .contains("m = 2n"));
        assert!(CodeParams::new(4, 2, 1, 0).is_err());
        assert!(CodeParams::new(4, 2, 1, 3).is_err());
        // (4,2,2) is a valid tower with e = 2, but only k = 1 fits
        let p = params(4, 2, 2, 1);
        assert_eq!(p.e(), 2);
        assert!(CodeParams::new(4, 2, 2, 2).is_err());
        assert!(CodeParams::with_e(12, 6, 2, 2, 1).is_ok());
        assert!(CodeParams::with_e(12, 6, 2, 1, 1).is_err());
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn exponents_reduce_to_conjugation() {
        // d/e is odd, so the a_0 twist nd/e is always n modulo m
        for (m, n, d, k) in [
            (4, 2, 1, 2),
            (6, 3, 1, 3),
            (12, 6, 2, 3),
            (12, 6, 10, 1),
            (8, 4, 3, 4),
        ] {
            let p = params(m, n, d, k);
            assert_eq!(p.exponent(0), n);
        }
    }

    #[test]
    fn zero_and_linear_forms() {
        let p = params(6, 3, 1, 2);
        let f = p.field();
        let zero = CoeffVector::zero(&p);
        let mut lin = CoeffVector::zero(&p);
        lin.ak = FieldElement::ONE;
        for x in f.elements() {
            assert_eq!(quad_form(&p, &zero, x), FieldElement::ZERO);
            assert_eq!(quad_form(&p, &lin, x), f.rel_trace(x, 6, 1).unwrap());
        }
    }

    #[test]
    fn gf16_kasami_value() {
        let p = params(4, 2, 1, 1);
        let f = p.field();
        let a = CoeffVector::new(&p, FieldElement::ONE, vec![], FieldElement::ZERO).unwrap();
        let pi = f.pi();
        let pi5 = (0..4).fold(pi, |acc, _| f.mul(acc, pi));
        // π^5 ∈ F_4; its F_4 → F_2 trace is y + y^2
        let expected = pi5 + f.mul(pi5, pi5);
        assert_eq!(quad_form(&p, &a, pi), expected);
        assert_eq!(expected, FieldElement::ONE);
    }

    #[test]
    fn coeff_vector_validation() {
        let p = params(4, 2, 1, 2);
        let f = p.field();
        assert!(
            CoeffVector::new(&p, f.pi(), vec![FieldElement::ZERO], FieldElement::ZERO).is_err()
        );
        assert!(CoeffVector::new(&p, FieldElement::ONE, vec![], FieldElement::ZERO).is_err());
        assert!(CoeffVector::new(
            &p,
            FieldElement(16),
            vec![FieldElement::ZERO],
            FieldElement::ZERO
        )
        .is_err());
    }

    #[test]
    fn polarization_matches_closed_form_exhaustively_gf16() {
        for (n, d, k) in [(2, 1, 1), (2, 1, 2), (2, 2, 1)] {
            let p = params(4, n, d, k);
            let f = p.field();
            for a in CoeffSpace::new(&p).iter().step_by(3) {
                for x in f.elements() {
                    assert_eq!(bilinear_form(&p, &a, x, x), FieldElement::ZERO);
                    assert_eq!(
                        bilinear_form(&p, &a, x, FieldElement::ZERO),
                        FieldElement::ZERO
                    );
                    for y in f.elements() {
                        let polar =
                            quad_form(&p, &a, x + y) + quad_form(&p, &a, x) + quad_form(&p, &a, y);
                        assert_eq!(bilinear_form(&p, &a, x, y), polar);
                    }
                }
            }
        }
    }

    #[test]
    fn bilinear_over_subfield() {
        let p = params(12, 6, 2, 3);
        let f = p.field();
        let sub = f.subfield_elements(2).unwrap();
        let a = CoeffVector::new(
            &p,
            f.subfield_elements(6).unwrap()[17],
            vec![f.pi_pow(5), f.pi_pow(77)],
            f.pi_pow(3),
        )
        .unwrap();
        for (i, x) in f.elements().step_by(97).enumerate() {
            let y = f.pi_pow(i as i64 * 13 + 1);
            let z = f.pi_pow(i as i64 * 7 + 5);
            let c = sub[i % 4];
            assert_eq!(
                bilinear_form(&p, &a, f.mul(c, x), y + z),
                f.mul(c, bilinear_form(&p, &a, x, y)) + f.mul(c, bilinear_form(&p, &a, x, z))
            );
            assert!(f.in_subfield(quad_form(&p, &a, x), 2));
        }
    }

    #[test]
    fn gram_examples() {
        let p = params(4, 2, 1, 1);
        let g = gram_matrix(&p, &CoeffVector::zero(&p));
        assert!(g.entries.iter().flatten().all(|x| x.is_zero()));
        let space = CoeffSpace::new(&p);
        let mut full = 0;
        for a in space.iter() {
            let g = gram_matrix(&p, &a);
            assert!(g.is_alternating());
            if !a.a0.is_zero() {
                assert_eq!(rank(&p, &a), 4);
                full += 1;
            } else {
                assert_eq!(rank(&p, &a), 0);
            }
        }
        assert_eq!(full, 48);
    }

    #[test]
    fn form_basis_is_power_basis_prefix() {
        let p = params(12, 6, 2, 1);
        let b = form_basis(&p);
        let f = p.field();
        assert_eq!(b, (0..6).map(|i| f.pi_pow(i)).collect::<Vec<_>>());
    }

    fn rank_census(p: &CodeParams) -> std::collections::BTreeMap<u32, u64> {
        let mut census = std::collections::BTreeMap::new();
        let space = CoeffSpace::new(p);
        // a_k does not affect B_a; keep it zero
        let prefixes = space.len() >> p.m();
        for idx in 0..prefixes {
            let a = space.get(idx);
            let r = rank(p, &a);
            let rad = radical(p, &a);
            assert_eq!(r % 2, 0, "odd rank for {a:?}");
            assert_eq!(r as usize + rad.len(), p.form_dim() as usize);
            let basis = form_basis(p);
            for &z in &rad {
                assert!(!z.is_zero());
                for &b in &basis {
                    assert_eq!(bilinear_form(p, &a, z, b), FieldElement::ZERO);
                }
            }
            if !a.quadratic_part_is_zero() {
                assert!(r >= p.min_rank(), "rank bound violated by {a:?}");
            }
            *census.entry(r).or_insert(0) += 1;
        }
        census
    }

    #[test]
    fn rank_bound_and_radical_duality_m4() {
        let c1 = rank_census(&params(4, 2, 1, 1));
        assert_eq!(c1.get(&4), Some(&3));
        let c2 = rank_census(&params(4, 2, 1, 2));
        // both admissible ranks occur for k = 2
        assert!(c2.get(&2).copied().unwrap_or(0) > 0);
        assert!(c2.get(&4).copied().unwrap_or(0) > 0);
        assert_eq!(c2.keys().copied().collect::<Vec<_>>(), vec![0, 2, 4]);
    }

    #[test]
    fn rank_bound_and_radical_duality_m6() {
        for k in 1..=3 {
            let c = rank_census(&params(6, 3, 1, k));
            let min = 6 - 2 * (k - 1);
            assert!(c.keys().all(|&r| r == 0 || r >= min));
        }
    }

    #[test]
    fn trace_table_rank_agrees_with_gram_elimination() {
        for (m, n, d, k) in [(4, 2, 2, 1), (12, 6, 2, 2), (6, 3, 1, 3), (8, 4, 2, 2)] {
            let p = params(m, n, d, k);
            let f = p.field();
            let space = CoeffSpace::new(&p);
            let step = (space.len() >> m).max(64) / 64;
            for idx in (0..space.len() >> m).step_by(step as usize) {
                let a = space.get(idx * 7919 % (space.len() >> m));
                let table: Vec<u8> = f
                    .elements()
                    .map(|x| f.rel_trace_unchecked(quad_form(&p, &a, x), p.e(), 1).0 as u8)
                    .collect();
                assert_eq!(
                    rank_from_trace_table(m, p.e(), &table),
                    rank(&p, &a),
                    "{a:?}"
                );
            }
        }
    }

    #[test]
    fn gf2_basis_basics() {
        let mut b = Gf2Basis::new();
        assert!(b.insert(0b110));
        assert!(b.insert(0b011));
        assert!(!b.insert(0b101));
        assert!(b.contains(0b101));
        assert!(!b.contains(0b001));
        assert_eq!(b.rank(), 2);
        assert_eq!(gf2_rank(&[1, 2, 3, 4]), 3);
    }
}
