//! Solution counts of the coupled bilinear system
//!
//! `Σ_{i=1}^{u} (x_{2i-1} x_{2i}^{2^{t_j}} + x_{2i-1}^{2^{t_j}} x_{2i}) = 0`,
//! `t_j = (n/e - j)·d`, `j = 0, …, s`
//!
//! over `F_{2^m}^{2u}`. The solution set is written `V_{s,u}`. Counts are
//! produced both by exhaustive search and by the closed formula
//! `|V_{s,i}| = 2^{mi} Σ_{u=0}^{i} (i over u)_{2^e} 2^{eu(u+1)/2} ∏_{j<u} (1 - 2^{ej-m})`
//! (valid for `s >= i`), and the structural statements behind that formula
//! are exposed as checks.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinatorics::{binom2, gaussian_binomial_unchecked as gauss, pow2};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::forms::{f2_basis, CodeParams, Gf2Basis};
use crate::parallel;

/// Exhaustive searches are limited to `|F_{2^m}|^{2u} <= 2^26` tuples.
pub const BRUTE_FORCE_MAX_BITS: u32 = 26;

/// Pair-key tables are materialised up to `2m <= 20`.
const PAIR_TABLE_MAX_BITS: u32 = 20;

/// `(params, s, u)`: equations `j = 0..=s` in `u` coordinate pairs.
#[derive(Clone, Debug)]
pub struct SolutionSystemParams {
    params: CodeParams,
    s: u32,
    u: u32,
}

impl SolutionSystemParams {
    /// Requires `s < n/e` so that every twist `(n/e - j)d` is positive.
    pub fn new(params: CodeParams, s: u32, u: u32) -> Result<Self> {
        let top = params.n() / params.e();
        if s >= top {
            return Err(Error::InvalidParams(format!(
                "equation index s must satisfy s ≤ n/e − 1 = {} (s = {s})",
                top - 1
            )));
        }
        Ok(SolutionSystemParams { params, s, u })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }
    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn u(&self) -> u32 {
        self.u
    }

    /// Same system with a different number of coordinate pairs.
    pub fn with_u(&self, u: u32) -> Self {
        SolutionSystemParams { u, ..self.clone() }
    }

    /// Same coordinates, equations `j = 0..=s`.
    pub fn with_s(&self, s: u32) -> Result<Self> {
        Self::new(self.params.clone(), s, self.u)
    }

    /// `2u·m`, the log2 of the number of candidate tuples.
    pub fn search_bits(&self) -> u32 {
        2 * self.u * self.params.m()
    }

    fn check_budget(&self) -> Result<()> {
        if self.search_bits() > BRUTE_FORCE_MAX_BITS {
            return Err(Error::Budget(format!(
                "exhaustive search over 2^{} tuples exceeds the 2^{BRUTE_FORCE_MAX_BITS} limit",
                self.search_bits()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    BruteForce,
    ClosedForm,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMethod::BruteForce => "bruteforce",
            CountMethod::ClosedForm => "closed_form",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionCount {
    pub value: BigInt,
    pub method: CountMethod,
}

/// Twist exponents `t_j = (n/e - j)·d mod m` for `j = 0..=s`.
fn twists(p: &CodeParams, s: u32) -> Vec<u32> {
    (0..=s)
        .map(|j| (((p.n() / p.e() - j) as u64 * p.d() as u64) % p.m() as u64) as u32)
        .collect()
}

/// Evaluates all equations of one coordinate pair at once. The value of
/// equation `j` occupies bits `[j·m, (j+1)·m)` of the key, so a tuple solves
/// the system iff the XOR of its pair keys is zero.
struct PairKeys {
    m: u32,
    f: FieldSpec,
    frob: Vec<Vec<FieldElement>>,
    /// `frob_inv_d[x] = x^{2^{-d}}`.
    frob_inv_d: Vec<FieldElement>,
    table: Option<Vec<u128>>,
}

impl PairKeys {
    fn new(p: &CodeParams, s: u32) -> Self {
        let f = p.field().clone();
        let frob = twists(p, s)
            .into_iter()
            .map(|t| {
                f.elements()
                    .map(|x| f.frobenius_pow(x, i64::from(t)))
                    .collect()
            })
            .collect();
        let frob_inv_d = f
            .elements()
            .map(|x| f.frobenius_pow(x, -i64::from(p.d())))
            .collect();
        let mut keys = PairKeys {
            m: p.m(),
            f,
            frob,
            frob_inv_d,
            table: None,
        };
        if 2 * p.m() <= PAIR_TABLE_MAX_BITS {
            let table = (0..keys.pairs()).map(|pi| keys.compute(pi)).collect();
            keys.table = Some(table);
        }
        keys
    }

    #[inline]
    fn pairs(&self) -> u64 {
        1u64 << (2 * self.m)
    }

    #[inline]
    fn split(&self, pair: u64) -> (FieldElement, FieldElement) {
        let mask = (1u64 << self.m) - 1;
        (
            FieldElement((pair >> self.m) as u32),
            FieldElement((pair & mask) as u32),
        )
    }

    #[inline]
    fn join(&self, x: FieldElement, y: FieldElement) -> u64 {
        (u64::from(x.0) << self.m) | u64::from(y.0)
    }

    fn compute(&self, pair: u64) -> u128 {
        let (x, y) = self.split(pair);
        let f = &self.f;
        self.frob.iter().enumerate().fold(0u128, |key, (j, tab)| {
            let v = f.mul(x, tab[y.0 as usize]) + f.mul(tab[x.0 as usize], y);
            key | (u128::from(v.0) << (j as u32 * self.m))
        })
    }

    #[inline]
    fn get(&self, pair: u64) -> u128 {
        match &self.table {
            Some(t) => t[pair as usize],
            None => self.compute(pair),
        }
    }

    /// Key of the pair `(x + x^{2^{-d}}, y + y^{2^{-d}})`.
    fn tilde(&self, pair: u64) -> u128 {
        let (x, y) = self.split(pair);
        let xt = x + self.frob_inv_d[x.0 as usize];
        let yt = y + self.frob_inv_d[y.0 as usize];
        self.get(self.join(xt, yt))
    }

    /// Mask selecting equations `j < count`.
    fn mask(&self, count: u32) -> u128 {
        if count * self.m >= 128 {
            u128::MAX
        } else {
            (1u128 << (count * self.m)) - 1
        }
    }

    fn tuple_key(&self, tuple: &[FieldElement]) -> u128 {
        tuple
            .chunks(2)
            .fold(0, |acc, c| acc ^ self.get(self.join(c[0], c[1])))
    }
}

fn count_rec(keys: &PairKeys, depth: u32, acc: u128) -> u64 {
    if depth == 0 {
        return u64::from(acc == 0);
    }
    (0..keys.pairs())
        .map(|p| count_rec(keys, depth - 1, acc ^ keys.get(p)))
        .sum()
}

/// `|V_{s,u}|` by visiting every `2u`-tuple.
pub fn count_bruteforce(sp: &SolutionSystemParams, workers: usize) -> Result<SolutionCount> {
    sp.check_budget()?;
    if sp.u == 0 {
        return Ok(SolutionCount {
            value: BigInt::one(),
            method: CountMethod::BruteForce,
        });
    }
    let keys = PairKeys::new(&sp.params, sp.s);
    let ranges = parallel::chunk_ranges(keys.pairs(), 64);
    let total: u64 = parallel::install(workers, || {
        ranges
            .par_iter()
            .map(|r| {
                r.clone()
                    .map(|p| count_rec(&keys, sp.u - 1, keys.get(p)))
                    .sum::<u64>()
            })
            .sum()
    });
    Ok(SolutionCount {
        value: BigInt::from(total),
        method: CountMethod::BruteForce,
    })
}

/// Every tuple of `V_{s,u}` in lexicographic pair order.
pub fn solution_tuples(sp: &SolutionSystemParams) -> Result<Vec<Vec<FieldElement>>> {
    sp.check_budget()?;
    if sp.u == 0 {
        return Ok(vec![Vec::new()]);
    }
    let keys = PairKeys::new(&sp.params, sp.s);
    let mut buckets: HashMap<u128, Vec<u64>> = HashMap::new();
    for p in 0..keys.pairs() {
        buckets.entry(keys.get(p)).or_default().push(p);
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(sp.u as usize - 1);
    collect_rec(&keys, &buckets, sp.u - 1, 0, &mut prefix, &mut out);
    Ok(out)
}

fn collect_rec(
    keys: &PairKeys,
    buckets: &HashMap<u128, Vec<u64>>,
    depth: u32,
    acc: u128,
    prefix: &mut Vec<u64>,
    out: &mut Vec<Vec<FieldElement>>,
) {
    if depth == 0 {
        if let Some(last) = buckets.get(&acc) {
            for &p in last {
                let tuple = prefix
                    .iter()
                    .chain(std::iter::once(&p))
                    .flat_map(|&q| {
                        let (x, y) = keys.split(q);
                        [x, y]
                    })
                    .collect();
                out.push(tuple);
            }
        }
        return;
    }
    for p in 0..keys.pairs() {
        prefix.push(p);
        collect_rec(keys, buckets, depth - 1, acc ^ keys.get(p), prefix, out);
        prefix.pop();
    }
}

/// True iff `tuple` (of length `2u`) solves equations `j = 0..=s`.
pub fn is_solution(p: &CodeParams, s: u32, tuple: &[FieldElement]) -> bool {
    PairKeys::new_untabled(p, s).tuple_key(tuple) == 0
}

impl PairKeys {
    fn new_untabled(p: &CodeParams, s: u32) -> Self {
        let f = p.field().clone();
        let frob = twists(p, s)
            .into_iter()
            .map(|t| {
                f.elements()
                    .map(|x| f.frobenius_pow(x, i64::from(t)))
                    .collect()
            })
            .collect();
        PairKeys {
            m: p.m(),
            frob_inv_d: Vec::new(),
            f,
            frob,
            table: None,
        }
    }
}

/// `2^{mi} Σ_{u=0}^{i} (i over u)_{2^e} 2^{eu(u+1)/2} ∏_{j<u}(1 - 2^{ej-m})`,
/// expanded over the common denominator `2^{mu}` so that every term is an integer.
pub fn closed_form_count(m: u32, e: u32, i: u32) -> BigInt {
    let q = pow2(u64::from(e));
    let two_m = pow2(u64::from(m));
    (0..=i)
        .map(|u| {
            let prod: BigInt = (0..u).map(|j| &two_m - pow2(u64::from(e * j))).product();
            pow2(u64::from(m * (i - u)))
                * gauss(i, u, &q)
                * pow2(u64::from(e * u * (u + 1) / 2))
                * prod
        })
        .sum()
}

/// `|V_{s,u}|` from the closed formula; requires `s >= u`.
pub fn count_closed_form(sp: &SolutionSystemParams) -> Result<SolutionCount> {
    if sp.s < sp.u {
        return Err(Error::InvalidArgument(format!(
            "closed form needs s ≥ u (s = {}, u = {})",
            sp.s, sp.u
        )));
    }
    Ok(SolutionCount {
        value: closed_form_count(sp.params.m(), sp.params.e(), sp.u),
        method: CountMethod::ClosedForm,
    })
}

/// Both sides of the alternating-sum identity
/// `Σ_{i<=u} (-1)^{u-i} 2^{eC(u-i,2)} (u over i)_{2^e} 2^{-mi} |V_{s,i}|
///  = 2^{eu(u+1)/2} ∏_{i<u}(1 - 2^{ei-m})`,
/// both multiplied by `2^{mu}`. `counts[i] = |V_{s,i}|` for `i = 0..=u`.
pub fn recursion_sides(m: u32, e: u32, u: u32, counts: &[BigInt]) -> (BigInt, BigInt) {
    let q = pow2(u64::from(e));
    let lhs = (0..=u)
        .map(|i| {
            let term = pow2(u64::from(e * binom2(u - i)))
                * gauss(u, i, &q)
                * pow2(u64::from(m * (u - i)))
                * &counts[i as usize];
            if (u - i).is_multiple_of(2) {
                term
            } else {
                -term
            }
        })
        .sum();
    let two_m = pow2(u64::from(m));
    let rhs = pow2(u64::from(e * u * (u + 1) / 2))
        * (0..u)
            .map(|i| &two_m - pow2(u64::from(e * i)))
            .product::<BigInt>();
    (lhs, rhs)
}

/// The alternating-sum identity for every `1 <= u' <= u`, using closed-form counts.
pub fn recursion_check(sp: &SolutionSystemParams) -> Result<bool> {
    if sp.u < 1 || sp.s < sp.u {
        return Err(Error::InvalidArgument(format!(
            "recursion identity needs s ≥ u ≥ 1 (s = {}, u = {})",
            sp.s, sp.u
        )));
    }
    let (m, e) = (sp.params.m(), sp.params.e());
    let counts: Vec<BigInt> = (0..=sp.u).map(|i| closed_form_count(m, e, i)).collect();
    Ok((1..=sp.u).all(|u| {
        let (l, r) = recursion_sides(m, e, u, &counts);
        l == r
    }))
}

/// Exact dyadic rational `numerator / 2^log2_denominator` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    pub numerator: BigInt,
    pub log2_denominator: u64,
}

impl Dyadic {
    pub fn new(numerator: BigInt, log2_denominator: u64) -> Self {
        let mut d = Dyadic {
            numerator,
            log2_denominator,
        };
        while d.log2_denominator > 0
            && !d.numerator.is_zero()
            && (&d.numerator & BigInt::one()).is_zero()
        {
            d.numerator >>= 1;
            d.log2_denominator -= 1;
        }
        if d.numerator.is_zero() {
            d.log2_denominator = 0;
        }
        d
    }

    pub fn denominator(&self) -> BigInt {
        pow2(self.log2_denominator)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.log2_denominator == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator())
        }
    }
}

/// Both sides of
/// `Σ_{i<=v} (-1)^{v-i} 4^{eC(v-i,2)} (v over i)_{4^e} 2^{-mi}|V_{s,i}| = 2^{(e-m)v} ∏_{j<v}(2^m - 4^{ej})`
/// as dyadic rationals.
pub fn alternating_moment_sides(m: u32, e: u32, v: u32, counts: &[BigInt]) -> (Dyadic, Dyadic) {
    let q = pow2(u64::from(2 * e));
    let scale = u64::from(m * v);
    let lhs: BigInt = (0..=v)
        .map(|i| {
            let term = pow2(u64::from(2 * e * binom2(v - i)))
                * gauss(v, i, &q)
                * pow2(u64::from(m * (v - i)))
                * &counts[i as usize];
            if (v - i).is_multiple_of(2) {
                term
            } else {
                -term
            }
        })
        .sum();
    let two_m = pow2(u64::from(m));
    let rhs = pow2(u64::from(e * v))
        * (0..v)
            .map(|j| &two_m - pow2(u64::from(2 * e * j)))
            .product::<BigInt>();
    (Dyadic::new(lhs, scale), Dyadic::new(rhs, scale))
}

/// The alternating fourth-power moment, using closed-form counts; fails if
/// the two sides disagree.
pub fn alternating_moment(sp: &SolutionSystemParams, v: u32) -> Result<Dyadic> {
    if v > sp.s {
        return Err(Error::InvalidArgument(format!(
            "moment order v must satisfy v ≤ s (v = {v}, s = {})",
            sp.s
        )));
    }
    let (m, e) = (sp.params.m(), sp.params.e());
    let counts: Vec<BigInt> = (0..=v).map(|i| closed_form_count(m, e, i)).collect();
    let (lhs, rhs) = alternating_moment_sides(m, e, v, &counts);
    if lhs != rhs {
        return Err(Error::Inconsistency(format!(
            "alternating moment v = {v}: {lhs} ≠ {rhs}"
        )));
    }
    Ok(lhs)
}

/// Both sides of the expansion
/// `2^{-mi}|V_{s,i}| = Σ_{j<=i} (-1)^j 2^{ej²} 2^{-mj} (i over j)_{4^e} Σ_{u<=i-j} 2^{eu} (i-j over u)_{4^e}`,
/// multiplied by `2^{mi}`.
pub fn expansion_sides(m: u32, e: u32, i: u32) -> (BigInt, BigInt) {
    let q = pow2(u64::from(2 * e));
    let lhs = closed_form_count(m, e, i);
    let rhs = (0..=i)
        .map(|j| {
            let inner: BigInt = (0..=i - j)
                .map(|u| pow2(u64::from(e * u)) * gauss(i - j, u, &q))
                .sum();
            let term =
                pow2(u64::from(e * j * j)) * pow2(u64::from(m * (i - j))) * gauss(i, j, &q) * inner;
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum();
    (lhs, rhs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationReport {
    pub tuples_checked: u64,
    pub solutions: u64,
    /// Tuples of `V_{s,u}` that fail the eliminated system.
    pub forward_violations: u64,
    /// Tuples satisfying the eliminated system that are not in `V_{s,u}`.
    pub converse_violations: u64,
    pub first_converse_counterexample: Option<Vec<FieldElement>>,
}

impl EliminationReport {
    pub fn forward_holds(&self) -> bool {
        self.forward_violations == 0
    }

    pub fn holds(&self) -> bool {
        self.forward_violations == 0 && self.converse_violations == 0
    }
}

/// Compares `V_{s,u}` with the set of tuples satisfying the `j = 0` equation
/// and `(x_i + x_i^{2^{-d}})_i ∈ V_{s-1,u}`, in both directions.
pub fn elimination_check(sp: &SolutionSystemParams, workers: usize) -> Result<EliminationReport> {
    sp.check_budget()?;
    if sp.s < 1 {
        return Err(Error::InvalidArgument("elimination needs s ≥ 1".into()));
    }
    let keys = PairKeys::new(&sp.params, sp.s);
    let full = keys.mask(sp.s + 1);
    let lower = keys.mask(sp.s);
    let first = keys.mask(1);
    let (tkey, key): (Vec<u128>, Vec<u128>) = if keys.table.is_some() {
        (
            (0..keys.pairs()).map(|p| keys.tilde(p)).collect(),
            (0..keys.pairs()).map(|p| keys.get(p)).collect(),
        )
    } else {
        (Vec::new(), Vec::new())
    };
    let get = |p: u64| -> (u128, u128) {
        if key.is_empty() {
            (keys.get(p), keys.tilde(p))
        } else {
            (key[p as usize], tkey[p as usize])
        }
    };

    struct Acc {
        checked: u64,
        solutions: u64,
        forward: u64,
        converse: u64,
        first: Option<Vec<u64>>,
    }
    fn walk(
        get: &dyn Fn(u64) -> (u128, u128),
        pairs: u64,
        depth: u32,
        acc: (u128, u128),
        prefix: &mut Vec<u64>,
        masks: (u128, u128, u128),
        out: &mut Acc,
    ) {
        if depth == 0 {
            let (full, lower, first) = masks;
            let in_v = acc.0 & full == 0;
            let rhs = acc.0 & first == 0 && acc.1 & lower == 0;
            out.checked += 1;
            out.solutions += u64::from(in_v);
            if in_v && !rhs {
                out.forward += 1;
            }
            if rhs && !in_v {
                out.converse += 1;
                if out.first.is_none() {
                    out.first = Some(prefix.clone());
                }
            }
            return;
        }
        for p in 0..pairs {
            let (k, t) = get(p);
            prefix.push(p);
            walk(
                get,
                pairs,
                depth - 1,
                (acc.0 ^ k, acc.1 ^ t),
                prefix,
                masks,
                out,
            );
            prefix.pop();
        }
    }

    let u = sp.u;
    let pairs = keys.pairs();
    let ranges = parallel::chunk_ranges(pairs, 64);
    let parts: Vec<Acc> = parallel::install(workers, || {
        ranges
            .par_iter()
            .map(|r| {
                let mut out = Acc {
                    checked: 0,
                    solutions: 0,
                    forward: 0,
                    converse: 0,
                    first: None,
                };
                if u == 0 {
                    return out;
                }
                let mut prefix = Vec::with_capacity(u as usize);
                for p in r.clone() {
                    let (k, t) = get(p);
                    prefix.push(p);
                    walk(
                        &get,
                        pairs,
                        u - 1,
                        (k, t),
                        &mut prefix,
                        (full, lower, first),
                        &mut out,
                    );
                    prefix.pop();
                }
                out
            })
            .collect()
    });
    let mut report = EliminationReport {
        tuples_checked: 0,
        solutions: 0,
        forward_violations: 0,
        converse_violations: 0,
        first_converse_counterexample: None,
    };
    if u == 0 {
        // the empty tuple is the only candidate and satisfies both systems
        report.tuples_checked = 1;
        report.solutions = 1;
    }
    for part in parts {
        report.tuples_checked += part.checked;
        report.solutions += part.solutions;
        report.forward_violations += part.forward;
        report.converse_violations += part.converse;
        if report.first_converse_counterexample.is_none() {
            report.first_converse_counterexample = part.first.map(|ps| {
                ps.iter()
                    .flat_map(|&q| {
                        let (x, y) = keys.split(q);
                        [x, y]
                    })
                    .collect()
            });
        }
    }
    Ok(report)
}

/// `F_{2^e}`-rank of a set of elements of `F_{2^m}`.
fn subfield_rank(f: &FieldSpec, e: u32, sub_basis: &[FieldElement], xs: &[FieldElement]) -> u32 {
    let mut b = Gf2Basis::new();
    for &x in xs {
        for &c in sub_basis {
            b.insert(f.mul(c, x).0);
        }
    }
    b.rank() / e
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependenceReport {
    pub checked: u64,
    pub violations: u64,
}

impl DependenceReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Checks that `x_1, x_2, x_4, …, x_{2u}` are `F_{2^e}`-dependent for every
/// tuple of `V_{s,u}`; requires `s >= u`.
pub fn dependence_check(sp: &SolutionSystemParams) -> Result<DependenceReport> {
    if sp.s < sp.u {
        return Err(Error::InvalidArgument(format!(
            "dependence statement needs s ≥ u (s = {}, u = {})",
            sp.s, sp.u
        )));
    }
    if sp.u == 0 {
        return Ok(DependenceReport {
            checked: 0,
            violations: 0,
        });
    }
    let p = &sp.params;
    let f = p.field();
    let sub_basis = f2_basis(&f.subfield_elements(p.e())?);
    let mut report = DependenceReport {
        checked: 0,
        violations: 0,
    };
    for t in solution_tuples(sp)? {
        let mut xs = vec![t[0]];
        xs.extend((1..=sp.u as usize).map(|i| t[2 * i - 1]));
        report.checked += 1;
        if subfield_rank(f, p.e(), &sub_basis, &xs) == xs.len() as u32 {
            report.violations += 1;
        }
    }
    Ok(report)
}

/// One subspace `H ⊆ F_{2^e}^u` and the count of tuples annihilating it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceCount {
    /// Row-reduced basis of `H`.
    pub basis: Vec<Vec<FieldElement>>,
    pub bruteforce: u64,
    /// `2^{mi} |V_{s,u-i}|`.
    pub expected: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerReport {
    pub dim: u32,
    /// Number of `dim`-dimensional subspaces of `F_{2^e}^u`.
    pub subspace_total: usize,
    pub sampled: Vec<SubspaceCount>,
    /// Tuples whose even coordinates are `F_{2^e}`-independent, brute force vs product formula.
    pub independent: Option<(u64, BigInt)>,
}

impl StabilizerReport {
    pub fn subspaces_hold(&self) -> bool {
        self.sampled
            .iter()
            .all(|c| BigInt::from(c.bruteforce) == c.expected)
    }

    pub fn independent_holds(&self) -> bool {
        self.independent
            .as_ref()
            .is_none_or(|(b, e)| BigInt::from(*b) == *e)
    }

    pub fn holds(&self) -> bool {
        self.subspaces_hold() && self.independent_holds()
    }
}

/// All `dim`-dimensional subspaces of `scalars^u`, as reduced row-echelon bases.
pub fn subspaces(scalars: &[FieldElement], u: u32, dim: u32) -> Vec<Vec<Vec<FieldElement>>> {
    let u = u as usize;
    let dim = dim as usize;
    let mut out = Vec::new();
    if dim > u {
        return out;
    }
    let nonzero: Vec<FieldElement> = scalars.to_vec();
    // choose pivot columns, then fill free positions right of each pivot
    let mut pivots = Vec::with_capacity(dim);
    fn choose(
        start: usize,
        u: usize,
        dim: usize,
        pivots: &mut Vec<usize>,
        scalars: &[FieldElement],
        out: &mut Vec<Vec<Vec<FieldElement>>>,
    ) {
        if pivots.len() == dim {
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(r, &pc)| {
                    ((pc + 1)..u)
                        .filter(|c| !pivots.contains(c))
                        .map(move |c| (r, c))
                })
                .collect();
            let q = scalars.len();
            let combos = q.pow(free.len() as u32);
            for mut idx in 0..combos {
                let mut rows = vec![vec![FieldElement::ZERO; u]; dim];
                for (r, &pc) in pivots.iter().enumerate() {
                    rows[r][pc] = FieldElement::ONE;
                }
                for &(r, c) in &free {
                    rows[r][c] = scalars[idx % q];
                    idx /= q;
                }
                out.push(rows);
            }
            return;
        }
        for c in start..u {
            pivots.push(c);
            choose(c + 1, u, dim, pivots, scalars, out);
            pivots.pop();
        }
    }
    choose(0, u, dim, &mut pivots, &nonzero, &mut out);
    out
}

/// Subspace counts on `V_{s,u}`: for subspaces `H` of dimension `dim`,
/// `#{x ∈ V_{s,u} : Σ_l c_l x_{2l} = 0 ∀c ∈ H} = 2^{m·dim} |V_{s,u-dim}|`;
/// and, when `s >= u >= 1`, the number of tuples with independent even
/// coordinates equals `2^{eu(u+1)/2} ∏_{i<u}(2^m - 2^{ei})`.
///
/// All subspaces are checked when `e·u <= 4`; otherwise 10 are drawn with `seed`.
pub fn stabilizer_count_check(
    sp: &SolutionSystemParams,
    dim: u32,
    seed: u64,
    workers: usize,
) -> Result<StabilizerReport> {
    if dim > sp.u {
        return Err(Error::InvalidArgument(format!(
            "subspace dimension {dim} exceeds u = {}",
            sp.u
        )));
    }
    let p = &sp.params;
    let f = p.field();
    let (m, e, u) = (p.m(), p.e(), sp.u);
    let scalars = f.subfield_elements(e)?;
    let all = subspaces(&scalars, u, dim);
    let chosen: Vec<&Vec<Vec<FieldElement>>> = if e * u <= 4 || all.len() <= 10 {
        all.iter().collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut idx = sample(&mut rng, all.len(), 10).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| &all[i]).collect()
    };
    let tuples = solution_tuples(sp)?;
    let smaller = count_bruteforce(&sp.with_u(u - dim), workers)?.value;
    let expected = pow2(u64::from(m * dim)) * &smaller;
    let sampled = chosen
        .into_iter()
        .map(|basis| {
            let hits = tuples
                .iter()
                .filter(|t| {
                    basis.iter().all(|row| {
                        row.iter()
                            .enumerate()
                            .fold(FieldElement::ZERO, |acc, (l, &c)| {
                                acc + f.mul(c, t[2 * l + 1])
                            })
                            .is_zero()
                    })
                })
                .count() as u64;
            SubspaceCount {
                basis: basis.clone(),
                bruteforce: hits,
                expected: expected.clone(),
            }
        })
        .collect();

    let independent = if sp.s >= u && u >= 1 {
        let sub_basis = f2_basis(&scalars);
        let count = tuples
            .iter()
            .filter(|t| {
                let evens: Vec<FieldElement> = (0..u as usize).map(|l| t[2 * l + 1]).collect();
                subfield_rank(f, e, &sub_basis, &evens) == u
            })
            .count() as u64;
        Some((count, independent_count_formula(m, e, u)))
    } else {
        None
    };

    Ok(StabilizerReport {
        dim,
        subspace_total: all.len(),
        sampled,
        independent,
    })
}

/// `2^{eu(u+1)/2} ∏_{i<u}(2^m - 2^{ei})`.
pub fn independent_count_formula(m: u32, e: u32, u: u32) -> BigInt {
    let two_m = pow2(u64::from(m));
    pow2(u64::from(e * u * (u + 1) / 2))
        * (0..u)
            .map(|i| &two_m - pow2(u64::from(e * i)))
            .product::<BigInt>()
}
