//! Batch driver running every identity and property check.
//!
//! The rendered report depends only on the suite and the seed; timings are
//! left to the caller.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{
    mobius_pair_check, product_formula_check, twovsone_check, vandermonde_apply, vandermonde_solve,
};
use crate::error::{Error, Result};
use crate::forms::CodeParams;
use crate::sequences::{base_sequence, circular_decimate, span_equality_check};
use crate::solutions::{
    alternating_moment_sides, closed_form_count, count_bruteforce, count_closed_form,
    dependence_check, elimination_check, expansion_sides, recursion_sides, stabilizer_count_check,
    SolutionSystemParams,
};
use crate::spectrum::{
    balanced_count_formula, dc_spectrum_formula, moment_identity_sides, rank_spectrum_formula,
    spectrum_enumerate,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Solutions,
    Spectrum,
    Sequences,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Solutions => "solutions",
            Suite::Spectrum => "spectrum",
            Suite::Sequences => "sequences",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "identities" => Suite::Identities,
            "solutions" => Suite::Solutions,
            "spectrum" => Suite::Spectrum,
            "sequences" => Suite::Sequences,
            "all" => Suite::All,
            _ => return Err(Error::InvalidArgument(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "verify suite={} seed={}", self.suite.name(), self.seed);
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{status} {:<10} {}: {}", c.suite, c.name, c.detail);
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(s, "{} checks, {failed} failed", self.checks.len());
        s
    }
}

struct Recorder {
    suite: &'static str,
    checks: Vec<CheckResult>,
}

impl Recorder {
    fn record(&mut self, name: impl Into<String>, outcome: Result<(bool, String)>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(CheckResult {
            suite: self.suite,
            name: name.into(),
            passed,
            detail,
        });
    }
}

pub fn run(suite: Suite, seed: u64, workers: usize) -> VerifyReport {
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Identities {
        checks.extend(identities(seed));
    }
    if all || suite == Suite::Solutions {
        checks.extend(solutions(seed, workers));
    }
    if all || suite == Suite::Spectrum {
        checks.extend(spectrum(workers));
    }
    if all || suite == Suite::Sequences {
        checks.extend(sequences());
    }
    VerifyReport {
        suite,
        seed,
        checks,
    }
}

const MAX_INDEX: u32 = 8;
const ROUND_TRIPS: usize = 100;

fn identities(seed: u64) -> Vec<CheckResult> {
    let mut rec = Recorder {
        suite: "identities",
        checks: Vec::new(),
    };
    for q in 2..=5u32 {
        let qb = BigInt::from(q);
        rec.record(
            format!("möbius pair q={q}"),
            (|| {
                let mut pairs = 0;
                for u in 1..=MAX_INDEX {
                    for v in 0..u {
                        if !mobius_pair_check(u, v, &qb)? {
                            return Ok((false, format!("fails at u={u} v={v}")));
                        }
                        pairs += 1;
                    }
                }
                Ok((true, format!("{pairs} pairs with u,v ≤ {MAX_INDEX}")))
            })(),
        );
        rec.record(
            format!("product formula q={q}"),
            (|| {
                for i in 1..=MAX_INDEX {
                    if !product_formula_check(i, &qb)? {
                        return Ok((false, format!("fails at i={i}")));
                    }
                }
                Ok((true, format!("i = 1..{MAX_INDEX}")))
            })(),
        );
        rec.record(
            format!("two-versus-one q={q}"),
            (|| {
                let mut cases = 0;
                for u in 1..=MAX_INDEX {
                    for i in 1..=u {
                        if !twovsone_check(u, i, &qb)? {
                            return Ok((false, format!("fails at u={u} i={i}")));
                        }
                        cases += 1;
                    }
                }
                Ok((true, format!("{cases} cases with i ≤ u ≤ {MAX_INDEX}")))
            })(),
        );
    }
    rec.record(
        "vandermonde round trip",
        (|| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for t in 0..ROUND_TRIPS {
                let q = BigInt::from(rng.gen_range(2..=5u32));
                let len = rng.gen_range(1..=MAX_INDEX as usize + 1);
                let y: Vec<BigInt> = (0..len)
                    .map(|_| BigInt::from(rng.gen_range(-1000i64..=1000)))
                    .collect();
                let x = vandermonde_solve(&y, &q)?;
                let back = vandermonde_apply(&x, &q);
                let expect: Vec<BigRational> =
                    y.iter().cloned().map(BigRational::from_integer).collect();
                if back != expect {
                    return Ok((
                        false,
                        format!("vector {t} (q={q}, length {len}) does not round-trip"),
                    ));
                }
            }
            Ok((
                true,
                format!("{ROUND_TRIPS} random integer vectors, q ∈ 2..5"),
            ))
        })(),
    );
    rec.checks
}

fn system(m: u32, s: u32, u: u32) -> Result<SolutionSystemParams> {
    let n = m / 2;
    SolutionSystemParams::new(CodeParams::new(m, n, 1, n)?, s, u)
}

fn solutions(seed: u64, workers: usize) -> Vec<CheckResult> {
    let mut rec = Recorder {
        suite: "solutions",
        checks: Vec::new(),
    };
    for (m, s, u, expect) in [(4, 1, 1, 46u64), (6, 2, 2, 59536)] {
        rec.record(
            format!("|V_{{{s},{u}}}| at m={m}"),
            (|| {
                let sp = system(m, s, u)?;
                let bf = count_bruteforce(&sp, workers)?.value;
                let cf = count_closed_form(&sp)?.value;
                let ok = bf == BigInt::from(expect) && cf == bf;
                Ok((ok, format!("bruteforce {bf}, closed form {cf}")))
            })(),
        );
    }
    for m in [4u32, 6] {
        rec.record(
            format!("closed form vs bruteforce m={m}"),
            (|| {
                let mut cases = 0;
                for s in 0..m / 2 {
                    for u in 0..=s {
                        let sp = system(m, s, u)?;
                        if sp.search_bits() > crate::solutions::BRUTE_FORCE_MAX_BITS {
                            continue;
                        }
                        let bf = count_bruteforce(&sp, workers)?.value;
                        let cf = count_closed_form(&sp)?.value;
                        if bf != cf {
                            return Ok((false, format!("s={s} u={u}: {bf} ≠ {cf}")));
                        }
                        cases += 1;
                    }
                }
                Ok((true, format!("{cases} systems with s ≥ u")))
            })(),
        );
    }
    for e in [1u32, 2] {
        for m in [4u32, 6, 8, 12] {
            rec.record(
                format!("recursion and moments m={m} e={e}"),
                (|| {
                    let counts: Vec<BigInt> = (0..=4).map(|i| closed_form_count(m, e, i)).collect();
                    for i in 1..=4 {
                        let (l, r) = recursion_sides(m, e, i, &counts);
                        if l != r {
                            return Ok((false, format!("alternating sum u={i}: {l} ≠ {r}")));
                        }
                        let (l, r) = expansion_sides(m, e, i);
                        if l != r {
                            return Ok((false, format!("expansion i={i}: {l} ≠ {r}")));
                        }
                        let (l, r) = alternating_moment_sides(m, e, i, &counts);
                        if l != r {
                            return Ok((false, format!("fourth-power moment v={i}: {l} ≠ {r}")));
                        }
                    }
                    Ok((true, "i ≤ 4".to_string()))
                })(),
            );
        }
    }
    rec.record(
        "recursion with bruteforce counts m=6",
        (|| {
            let counts = (0..=2)
                .map(|u| Ok(count_bruteforce(&system(6, 2, u)?, workers)?.value))
                .collect::<Result<Vec<_>>>()?;
            let ok = (1..=2).all(|u| {
                let (l, r) = recursion_sides(6, 1, u, &counts);
                let (a, b) = alternating_moment_sides(6, 1, u, &counts);
                l == r && a == b
            });
            Ok((ok, "u ≤ 2".to_string()))
        })(),
    );

    let elim_sets = [(4, 1, 1), (6, 1, 1), (6, 2, 1), (6, 1, 2), (6, 2, 2)];
    let reports: Vec<_> = elim_sets
        .iter()
        .map(|&(m, s, u)| {
            (
                (m, s, u),
                system(m, s, u).and_then(|sp| elimination_check(&sp, workers)),
            )
        })
        .collect();
    rec.record(
        "elimination forward inclusion",
        (|| {
            let mut detail = Vec::new();
            let mut ok = true;
            for ((m, s, u), r) in &reports {
                let r = r.as_ref().map_err(Clone::clone)?;
                ok &= r.forward_holds();
                detail.push(format!(
                    "(m={m},s={s},u={u}) {} violations",
                    r.forward_violations
                ));
            }
            Ok((ok, detail.join("; ")))
        })(),
    );
    rec.record(
        "elimination converse inclusion",
        (|| {
            let mut detail = Vec::new();
            let mut ok = true;
            for ((m, s, u), r) in &reports {
                let r = r.as_ref().map_err(Clone::clone)?;
                ok &= r.converse_violations == 0;
                detail.push(format!(
                    "(m={m},s={s},u={u}) {} violations",
                    r.converse_violations
                ));
            }
            Ok((ok, detail.join("; ")))
        })(),
    );
    rec.record(
        "linear dependence",
        (|| {
            let mut checked = 0;
            for (m, s, u) in [(4, 1, 1), (6, 1, 1), (6, 2, 1), (6, 2, 2)] {
                let r = dependence_check(&system(m, s, u)?)?;
                if !r.holds() {
                    return Ok((
                        false,
                        format!("(m={m},s={s},u={u}) {} violations", r.violations),
                    ));
                }
                checked += r.checked;
            }
            Ok((true, format!("{checked} solution tuples")))
        })(),
    );
    rec.record(
        "subspace stabilizer counts",
        (|| {
            let mut subspaces = 0;
            for (m, s, u) in [(4, 1, 1), (6, 2, 2)] {
                let sp = system(m, s, u)?;
                for dim in 0..=u {
                    let r = stabilizer_count_check(&sp, dim, seed, workers)?;
                    if !r.holds() {
                        return Ok((false, format!("(m={m},s={s},u={u}) dim {dim} disagrees")));
                    }
                    subspaces += r.sampled.len();
                }
            }
            Ok((
                true,
                format!("{subspaces} subspaces, independent-coordinate counts agree"),
            ))
        })(),
    );
    rec.checks
}

/// Parameter sets enumerated exhaustively.
pub const ORACLE_PARAMS: [(u32, u32, u32, u32); 6] = [
    (4, 2, 1, 1),
    (4, 2, 1, 2),
    (6, 3, 1, 1),
    (6, 3, 1, 2),
    (6, 3, 1, 3),
    (12, 6, 2, 1),
];

fn spectrum(workers: usize) -> Vec<CheckResult> {
    let mut rec = Recorder {
        suite: "spectrum",
        checks: Vec::new(),
    };
    for (m, n, d, k) in ORACLE_PARAMS {
        rec.record(
            format!("formula vs enumeration ({m},{n},{d},k={k})"),
            (|| {
                let p = CodeParams::new(m, n, d, k)?;
                let formula = dc_spectrum_formula(&p)?;
                let en = spectrum_enumerate(&p, workers)?;
                let ok = en.dc == formula
                    && en.rank == rank_spectrum_formula(&p)?
                    && formula.balanced == balanced_count_formula(&p)?;
                let census = formula
                    .census(&p)
                    .iter()
                    .map(|(dc, c)| format!("{dc}:{c}"))
                    .collect::<Vec<_>>()
                    .join(" ");
                Ok((ok, format!("{} codewords, census {census}", en.codewords)))
            })(),
        );
        rec.record(
            format!("moment identities ({m},{n},{d},k={k})"),
            (|| {
                let p = CodeParams::new(m, n, d, k)?;
                let beta = rank_spectrum_formula(&p)?;
                for u in 0..k {
                    let (l, r) = moment_identity_sides(&p, &beta, u)?;
                    if l != r {
                        return Ok((false, format!("u={u}: {l} ≠ {r}")));
                    }
                }
                Ok((true, format!("u = 0..{}", k - 1)))
            })(),
        );
    }
    rec.checks
}

fn sequences() -> Vec<CheckResult> {
    let mut rec = Recorder {
        suite: "sequences",
        checks: Vec::new(),
    };
    rec.record(
        "decimated base sequence m=4",
        (|| {
            let p = CodeParams::new(4, 2, 1, 1)?;
            let s0 = circular_decimate(&base_sequence(&p), 5)?;
            Ok((
                s0.period() == 3,
                format!("{} period {}", s0.to_ascii(), s0.period()),
            ))
        })(),
    );
    for (m, k) in [(4u32, 1u32), (4, 2), (6, 1)] {
        rec.record(
            format!("span equality m={m} k={k}"),
            (|| {
                let p = CodeParams::new(m, m / 2, 1, k)?;
                let r = span_equality_check(&p)?;
                Ok((
                    r.holds() && r.span_dim == p.code_dim_bits() as usize,
                    format!("span dimension {}, expected {}", r.span_dim, r.expected_dim),
                ))
            })(),
        );
    }
    rec.checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        for s in ["identities", "solutions", "spectrum", "sequences", "all"] {
            assert_eq!(s.parse::<Suite>().unwrap().name(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn identities_pass_and_are_reproducible() {
        let a = run(Suite::Identities, 7, 1);
        assert!(a.all_passed(), "{}", a.render());
        assert_eq!(a.render(), run(Suite::Identities, 7, 3).render());
    }

    #[test]
    fn sequences_pass() {
        let r = run(Suite::Sequences, 0, 1);
        assert!(r.all_passed(), "{}", r.render());
        assert!(r.render().contains("period 3"), "{}", r.render());
    }
}
