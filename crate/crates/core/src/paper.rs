//! The builtin systems `R`, `S`, `T`, `U` over `{a, b, c, 0}` and the
//! constructive objects attached to them: the block-evaluation function
//! `f`, explicit congruence derivations for the `ACAC` family, the
//! zero-class reduction strategy with its linear step bound, the
//! left-cancellation check, and the irreducible pumping words.

use std::sync::LazyLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::expr::ExponentExpr;
use crate::rewrite::{Derivation, DerivationBuilder, Direction, Redex};
use crate::system::{RewritingSystem, Rule, RuleSchema};
use crate::word::{Alphabet, Symbol, Word};
use crate::{Error, Result};

pub const SYM_A: Symbol = Symbol('a');
pub const SYM_B: Symbol = Symbol('b');
pub const SYM_C: Symbol = Symbol('c');
pub const SYM_ZERO: Symbol = Symbol('0');

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SystemId {
    R,
    S,
    T,
    U,
}

impl std::str::FromStr for SystemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" => Ok(SystemId::R),
            "S" => Ok(SystemId::S),
            "T" => Ok(SystemId::T),
            "U" => Ok(SystemId::U),
            other => Err(Error::InvalidInput(format!("unknown builtin system '{other}'"))),
        }
    }
}

impl std::fmt::Display for SystemId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SystemId::R => "R",
            SystemId::S => "S",
            SystemId::T => "T",
            SystemId::U => "U",
        };
        write!(f, "{s}")
    }
}

fn w(s: &str) -> Word {
    Word::parse(s).expect("builtin word")
}

/// The eight zero-absorption rules `x0 -> 0`, `0x -> 0` for every symbol.
/// `00 -> 0` arises in both families; it is kept twice under distinct ids
/// so the rule list mirrors the family definition (`00R` is the
/// right-family copy).
fn z_rules() -> Vec<Rule> {
    let mut rules = Vec::new();
    for x in ['a', 'b', 'c', '0'] {
        let id = format!("{}0", x.to_ascii_uppercase());
        let lhs = Word::from_dense([Symbol(x), SYM_ZERO]);
        rules.push(Rule::new(id, lhs, w("0")).unwrap());
    }
    for x in ['a', 'b', 'c', '0'] {
        let id = if x == '0' { "00R".to_string() } else { format!("0{}", x.to_ascii_uppercase()) };
        let lhs = Word::from_dense([SYM_ZERO, Symbol(x)]);
        rules.push(Rule::new(id, lhs, w("0")).unwrap());
    }
    rules
}

fn full_alphabet() -> Alphabet {
    Alphabet::new(vec![SYM_A, SYM_B, SYM_C, SYM_ZERO]).unwrap()
}

fn abc_alphabet() -> Alphabet {
    Alphabet::new(vec![SYM_A, SYM_B, SYM_C]).unwrap()
}

fn acac_schema() -> RuleSchema {
    RuleSchema::new(
        "ACAC",
        vec![
            (SYM_A, ExponentExpr::parse("2^(n+1)-1").unwrap()),
            (SYM_C, ExponentExpr::constant(1)),
            (SYM_A, ExponentExpr::parse("n").unwrap()),
            (SYM_C, ExponentExpr::constant(1)),
        ],
        vec![(SYM_ZERO, ExponentExpr::constant(1))],
        0,
    )
    .unwrap()
}

fn bac_schema() -> RuleSchema {
    RuleSchema::new(
        "BAC",
        vec![
            (SYM_B, ExponentExpr::constant(1)),
            (SYM_A, ExponentExpr::parse("n").unwrap()),
            (SYM_C, ExponentExpr::constant(1)),
        ],
        vec![
            (SYM_A, ExponentExpr::parse("2n+1").unwrap()),
            (SYM_C, ExponentExpr::constant(1)),
            (SYM_A, ExponentExpr::constant(1)),
        ],
        0,
    )
    .unwrap()
}

fn build_builtin(id: SystemId) -> RewritingSystem {
    match id {
        SystemId::R => {
            let mut rules = vec![
                Rule::new("BA", w("ba"), w("aab")).unwrap(),
                Rule::new("BC", w("bc"), w("aca")).unwrap(),
                Rule::new("ACC", w("acc"), w("0")).unwrap(),
            ];
            rules.extend(z_rules());
            RewritingSystem::new(full_alphabet(), rules, vec![]).unwrap()
        }
        SystemId::S => {
            let mut rules = vec![
                Rule::new("BA", w("ba"), w("aab")).unwrap(),
                Rule::new("BC", w("bc"), w("aca")).unwrap(),
            ];
            rules.extend(z_rules());
            RewritingSystem::new(full_alphabet(), rules, vec![acac_schema()]).unwrap()
        }
        SystemId::T => {
            let rules = vec![
                Rule::new("BC", w("bc"), w("aca")).unwrap(),
                Rule::new("AAB", w("aab"), w("ba")).unwrap(),
            ];
            RewritingSystem::new(abc_alphabet(), rules, vec![]).unwrap()
        }
        SystemId::U => {
            let rules = vec![
                Rule::new("BC", w("bc"), w("aca")).unwrap(),
                Rule::new("AAB", w("aab"), w("ba")).unwrap(),
            ];
            RewritingSystem::new(abc_alphabet(), rules, vec![bac_schema()]).unwrap()
        }
    }
}

static SYSTEM_R: LazyLock<RewritingSystem> = LazyLock::new(|| build_builtin(SystemId::R));
static SYSTEM_S: LazyLock<RewritingSystem> = LazyLock::new(|| build_builtin(SystemId::S));
static SYSTEM_T: LazyLock<RewritingSystem> = LazyLock::new(|| build_builtin(SystemId::T));
static SYSTEM_U: LazyLock<RewritingSystem> = LazyLock::new(|| build_builtin(SystemId::U));

/// Shared reference to a builtin system.
pub fn builtin(id: SystemId) -> &'static RewritingSystem {
    match id {
        SystemId::R => &SYSTEM_R,
        SystemId::S => &SYSTEM_S,
        SystemId::T => &SYSTEM_T,
        SystemId::U => &SYSTEM_U,
    }
}

/// Owned copy of a builtin system.
pub fn builtin_system(id: SystemId) -> RewritingSystem {
    builtin(id).clone()
}

/// The complete system presenting the same monoid, used for exact
/// equivalence testing: `R` delegates to `S`, `T` to `U`; `S` and `U` are
/// already complete. Non-builtin systems get `None`.
pub fn congruence_delegate(sys: &RewritingSystem) -> Option<&'static RewritingSystem> {
    for (id, delegate) in [
        (SystemId::R, SystemId::S),
        (SystemId::S, SystemId::S),
        (SystemId::T, SystemId::U),
        (SystemId::U, SystemId::U),
    ] {
        if sys.same_rules_as(builtin(id)) {
            return Some(builtin(delegate));
        }
    }
    None
}

/// A nonempty tuple `(d_k, ..., d_1)` of block exponents, leftmost first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FTuple(pub Vec<u64>);

impl FTuple {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("f is defined on nonempty tuples".into()));
        }
        Ok(FTuple(entries))
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// The word `b a^(d_k) b a^(d_k-1) ... b a^(d_1) c`.
    pub fn word(&self) -> Word {
        let mut word = Word::empty();
        for d in &self.0 {
            word.push_run(SYM_B, BigUint::one());
            word.push_run(SYM_A, BigUint::from(*d));
        }
        word.push_run(SYM_C, BigUint::one());
        word
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FEvalMode {
    Closed,
    Recursive,
    Simulate,
}

/// Evaluates `f(d_k, ..., d_1)`: closed form
/// `2 d_k + 2^2 d_(k-1) + ... + 2^k d_1 + 2^k - 1`, the recursion
/// `f(d_k,...,d_1) = 2 f(d_(k-1),...,d_1) + 2 d_k + 1`, or simulation by
/// reducing the block word and reading the exponent off `a^f c a^k`.
pub fn f_eval(t: &FTuple, mode: FEvalMode, dense_cap: u64) -> Result<BigUint> {
    match mode {
        FEvalMode::Closed => {
            let k = t.arity();
            let mut total = (BigUint::one() << k) - BigUint::one();
            for (i, d) in t.0.iter().enumerate() {
                total += (BigUint::one() << (i + 1)) * BigUint::from(*d);
            }
            Ok(total)
        }
        FEvalMode::Recursive => {
            fn rec(entries: &[u64]) -> BigUint {
                match entries {
                    [d] => BigUint::from(2 * d + 1),
                    [d_k, rest @ ..] => {
                        rec(rest) * 2u32 + BigUint::from(2 * d_k) + BigUint::one()
                    }
                    [] => unreachable!("FTuple is nonempty"),
                }
            }
            Ok(rec(&t.0))
        }
        FEvalMode::Simulate => {
            let word = t.word();
            let len = word.dense_len_u64().filter(|l| *l <= dense_cap).ok_or_else(|| {
                Error::DenseCapExceeded { len: word.dense_len().to_string(), cap: dense_cap }
            })?;
            let budget = (len as usize) * 4 + 64;
            let u = builtin(SystemId::U);
            let (nf, _) = u.reduce_to_normal_form(&word, crate::Strategy::Leftmost, budget)?;
            let runs = nf.runs();
            let k = BigUint::from(t.arity());
            match runs {
                [(a1, f), (c, one_c), (a2, kk)]
                    if *a1 == SYM_A && *c == SYM_C && *a2 == SYM_A
                        && one_c.is_one() && *kk == k =>
                {
                    Ok(f.clone())
                }
                // d_i all zero at arity k gives a^(2^k-1) c a^k with the
                // same shape, so any other shape is a real failure.
                _ => Err(Error::InvalidInput(format!(
                    "simulation of {word} ended at unexpected normal form {nf}"
                ))),
            }
        }
    }
}

/// A congruence derivation over `R` from `a^(2^(n+1)-1) c a^n c` to `0`, of
/// length exactly `2^(n+1) + n - 1`: one reverse BC step, `2^n - 1` reverse
/// BA shifts, the derivation for `n-1` inside the context `b[...]c`, and a
/// final zero absorption.
pub fn acac_derivation(n: u64, dense_cap: u64) -> Result<Derivation> {
    let r = builtin(SystemId::R);
    let start_len = (BigUint::one() << (n as usize + 1)) + BigUint::from(n) + BigUint::one();
    if start_len.to_u64().map_or(true, |l| l > dense_cap) {
        return Err(Error::DenseCapExceeded { len: start_len.to_string(), cap: dense_cap });
    }

    fn start_word(n: u64) -> Word {
        Word::from_runs(vec![
            (SYM_A, (BigUint::one() << (n as usize + 1)) - BigUint::one()),
            (SYM_C, BigUint::one()),
            (SYM_A, BigUint::from(n)),
            (SYM_C, BigUint::one()),
        ])
    }

    fn emit(r: &RewritingSystem, builder: &mut DerivationBuilder, n: u64, offset: &BigUint) -> Result<()> {
        if n == 0 {
            return builder.apply(r, Redex::forward("ACC", None, offset.clone()));
        }
        let pow = BigUint::one() << (n as usize + 1); // 2^(n+1)
        // Reverse BC turns the final `a c a` of the leading block into `bc`.
        builder.apply(
            r,
            Redex {
                rule_id: "BC".into(),
                param: None,
                position: offset + &pow - 2u32,
                direction: Direction::Reverse,
            },
        )?;
        // Reverse BA walks the b to the front, two symbols at a time.
        let shifts = (BigUint::one() << n as usize) - BigUint::one(); // 2^n - 1
        let mut pos = offset + &pow - 4u32;
        let mut remaining = shifts;
        while !remaining.is_zero() {
            builder.apply(
                r,
                Redex {
                    rule_id: "BA".into(),
                    param: None,
                    position: pos.clone(),
                    direction: Direction::Reverse,
                },
            )?;
            remaining -= 1u32;
            if !remaining.is_zero() {
                pos -= 2u32;
            }
        }
        // Recurse inside the context `b [...]`.
        emit(r, builder, n - 1, &(offset + 1u32))?;
        // `b0 -> 0`.
        builder.apply(r, Redex::forward("B0", None, offset.clone()))
    }

    let mut builder = DerivationBuilder::new(start_word(n));
    emit(r, &mut builder, n, &BigUint::zero())?;
    let d = builder.finish();
    debug_assert_eq!(d.end, w("0"));
    Ok(d)
}

/// Zero-class reduction strategy over `S` plus reverse BA, mirroring the
/// linear-bound argument: exhaust `a^2 b -> ba` first, then repeatedly
/// either fire an `ACAC` redex and absorb into `0`, or shift the rightmost
/// `b` that precedes a `c` up to that `c` and remove it with `BC`. Words
/// already containing `0` are absorbed directly. The derivation ends at
/// the `S`-normal form; on the zero class its length is at most `6|w|`.
pub fn case1_reduce(word: &Word) -> Result<Derivation> {
    let s = builtin(SystemId::S);
    let len = word.dense_len_u64().ok_or_else(|| Error::DenseCapExceeded {
        len: word.dense_len().to_string(),
        cap: u64::MAX,
    })?;
    let budget = (8 * len + 16) as usize;
    let mut builder = DerivationBuilder::new(word.clone());

    let check_budget = |b: &DerivationBuilder| -> Result<()> {
        if b.len() > budget {
            Err(Error::StepBudgetExhausted { steps: b.len() })
        } else {
            Ok(())
        }
    };

    if word.contains_symbol(SYM_ZERO) {
        absorb_zero(s, &mut builder, budget)?;
        return Ok(builder.finish());
    }

    // Phase one: reverse BA wherever `aab` occurs, leftmost first.
    loop {
        check_budget(&builder)?;
        let occ = crate::rewrite::occurrences(&w("aab"), builder.current())?;
        match occ.into_iter().next() {
            Some(pos) => builder.apply(
                s,
                Redex { rule_id: "BA".into(), param: None, position: pos, direction: Direction::Reverse },
            )?,
            None => break,
        }
    }

    // Phase two, one application per iteration: the collapse check must
    // run after every step, or the word grows past the first opportunity
    // and the intermediate-length bound is lost.
    loop {
        check_budget(&builder)?;
        let redexes = s.find_redexes(builder.current(), false, 0)?;
        if redexes.is_empty() {
            break;
        }
        if let Some(acac) = redexes.iter().find(|r| r.rule_id == "ACAC") {
            builder.apply(s, acac.clone())?;
            absorb_zero(s, &mut builder, budget)?;
            break;
        }
        match rightmost_b_before_c(builder.current()) {
            Some((b_pos, a_count)) => {
                // The chosen b stays the rightmost one before a c while it
                // shifts, so single steps recompose into the full shift.
                let rule = if a_count == 0 { "BC" } else { "BA" };
                builder.apply(s, Redex::forward(rule, None, b_pos))?;
            }
            None => {
                // Only BA redexes can remain: b-blocks after the last c.
                let first = redexes.into_iter().next().unwrap();
                debug_assert_eq!(first.rule_id, "BA");
                builder.apply(s, first)?;
            }
        }
    }
    Ok(builder.finish())
}

/// Repeatedly applies zero-absorption steps until the word is `0`.
fn absorb_zero(s: &RewritingSystem, builder: &mut DerivationBuilder, budget: usize) -> Result<()> {
    let zero = w("0");
    while builder.current() != &zero {
        if builder.len() > budget {
            return Err(Error::StepBudgetExhausted { steps: builder.len() });
        }
        let redexes = s.find_redexes(builder.current(), false, 0)?;
        let z = redexes
            .into_iter()
            .find(|r| r.param.is_none() && r.rule_id != "BA" && r.rule_id != "BC")
            .ok_or_else(|| {
                Error::InvalidInput(format!("no absorption redex in {}", builder.current()))
            })?;
        builder.apply(s, z)?;
    }
    Ok(())
}

/// The rightmost `b` with some `c` to its right: returns its dense
/// position and the number of `a`s between it and the next `c`.
fn rightmost_b_before_c(word: &Word) -> Option<(BigUint, u64)> {
    let runs = word.runs();
    let last_c = runs.iter().rposition(|(s, _)| *s == SYM_C)?;
    let b_run = runs[..last_c].iter().rposition(|(s, _)| *s == SYM_B)?;
    let mut pos = BigUint::zero();
    for (_, e) in &runs[..b_run] {
        pos += e;
    }
    pos += &runs[b_run].1 - 1u32; // last b of the run
    let mut a_count: u64 = 0;
    for (s, e) in &runs[b_run + 1..] {
        match *s {
            SYM_A => a_count += e.to_u64().expect("a-run fits shift budget"),
            SYM_C => break,
            _ => unreachable!("only a-runs sit between the chosen b and the next c"),
        }
    }
    Some((pos, a_count))
}

/// Left cancellation under `U`: whenever `x u` and `x v` share a normal
/// form, so do `u` and `v`.
pub fn left_cancel_check(x: Symbol, u: &Word, v: &Word, max_steps: usize) -> Result<bool> {
    let sys = builtin(SystemId::U);
    let xu = Word::from_dense([x]).concat(u);
    let xv = Word::from_dense([x]).concat(v);
    let nf_xu = sys.normal_form(&xu, max_steps)?;
    let nf_xv = sys.normal_form(&xv, max_steps)?;
    if nf_xu != nf_xv {
        return Ok(true);
    }
    Ok(sys.normal_form(u, max_steps)? == sys.normal_form(v, max_steps)?)
}

/// The `S`-irreducible word `a^(2^(2^(Q+1)-1)-2) c a^(2^(Q+1)-2) c a^Q c`.
/// Each exponent sits one short of enabling an `ACAC` match, which is what
/// the pumping falsifier exploits.
pub fn noregcs_word(q: u32) -> Result<Word> {
    if !(1..=30).contains(&q) {
        return Err(Error::InvalidInput(format!(
            "pumping word defined for 1 <= Q <= 30, got {q}"
        )));
    }
    let inner = (1u64 << (q + 1)) - 1; // 2^(Q+1) - 1
    let e1 = (BigUint::one() << inner as usize) - BigUint::from(2u32);
    let e2 = BigUint::from(inner - 1); // 2^(Q+1) - 2
    Ok(Word::from_runs(vec![
        (SYM_A, e1),
        (SYM_C, BigUint::one()),
        (SYM_A, e2),
        (SYM_C, BigUint::one()),
        (SYM_A, BigUint::from(q)),
        (SYM_C, BigUint::one()),
    ]))
}

/// Increases the exponent of the addressed `a`-run by `delta`.
pub fn pump_word(word: &Word, run_index: usize, delta: &BigUint) -> Result<Word> {
    let runs = word.runs();
    match runs.get(run_index) {
        Some((sym, _)) if *sym == SYM_A => {
            let mut new_runs: Vec<(Symbol, BigUint)> = runs.to_vec();
            new_runs[run_index].1 += delta;
            Ok(Word::from_runs(new_runs))
        }
        _ => Err(Error::NotAnARun(run_index)),
    }
}

/// Rewrites a derivation over `S` into one over `R`: `ACAC` steps at
/// parameter 0 become `ACC`, larger parameters are expanded into their
/// explicit congruence derivations; all other rules are shared.
pub fn expand_to_r_derivation(d: &Derivation, dense_cap: u64) -> Result<Derivation> {
    let s = builtin(SystemId::S);
    let r = builtin(SystemId::R);
    let mut builder = DerivationBuilder::new(d.start.clone());
    let mut current = d.start.clone();
    for step in &d.steps {
        let next = s.apply_redex(&current, &step.redex)?;
        if step.redex.rule_id == "ACAC" {
            let n = step
                .redex
                .param
                .as_ref()
                .and_then(|n| n.to_u64())
                .ok_or_else(|| Error::InvalidInput("ACAC parameter too large to expand".into()))?;
            match (n, step.redex.direction) {
                (0, dir) => builder.apply(
                    r,
                    Redex { rule_id: "ACC".into(), param: None, position: step.redex.position.clone(), direction: dir },
                )?,
                (n, Direction::Forward) => {
                    let inner = acac_derivation(n, dense_cap)?;
                    builder.splice_shifted(r, &inner, &step.redex.position)?;
                }
                (n, Direction::Reverse) => {
                    let inner = acac_derivation(n, dense_cap)?.inverted(r)?;
                    builder.splice_shifted(r, &inner, &step.redex.position)?;
                }
            }
        } else {
            builder.apply(r, step.redex.clone())?;
        }
        if builder.current() != &next {
            return Err(Error::InvalidInput(format!(
                "expansion diverged at {next} vs {}",
                builder.current()
            )));
        }
        current = next;
    }
    Ok(builder.finish())
}

impl Derivation {
    /// The same congruence walked backwards: every step reversed, in
    /// reverse order.
    pub fn inverted(&self, sys: &RewritingSystem) -> Result<Derivation> {
        let mut builder = DerivationBuilder::new(self.end.clone());
        for step in self.steps.iter().rev() {
            builder.apply(sys, step.redex.reversed())?;
        }
        let d = builder.finish();
        if d.end != self.start {
            return Err(Error::InvalidInput("inversion did not return to the start".into()));
        }
        Ok(d)
    }
}

/// Convenience used across the verification suites.
pub fn nf_s(word: &Word, max_steps: usize) -> Result<Word> {
    builtin(SystemId::S).normal_form(word, max_steps)
}

pub fn is_zero_class(word: &Word, max_steps: usize) -> Result<bool> {
    Ok(nf_s(word, max_steps)? == w("0"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Strategy, DEFAULT_DENSE_CAP};

    #[test]
    fn builtin_rule_counts() {
        let r = builtin(SystemId::R);
        assert_eq!(r.finite_rules.len(), 11);
        assert!(r.schemas.is_empty());
        let s = builtin(SystemId::S);
        assert_eq!(s.finite_rules.len(), 10);
        assert_eq!(s.schemas.len(), 1);
        let t = builtin(SystemId::T);
        assert_eq!(t.finite_rules.len(), 2);
        let u = builtin(SystemId::U);
        assert_eq!(u.finite_rules.len(), 2);
        assert_eq!(u.schemas.len(), 1);
    }

    #[test]
    fn schema_base_instances_match_finite_rules() {
        let s = builtin(SystemId::S);
        let acc = s.schemas[0].instance(&BigUint::zero()).unwrap();
        assert_eq!(acc.rule.lhs, w("acc"));
        assert_eq!(acc.rule.rhs, w("0"));
        let u = builtin(SystemId::U);
        let bac0 = u.schemas[0].instance(&BigUint::zero()).unwrap();
        let bc = u.finite_rule("BC").unwrap();
        assert_eq!(bac0.rule.lhs, bc.lhs);
        assert_eq!(bac0.rule.rhs, bc.rhs);
    }

    #[test]
    fn delegate_recognition() {
        assert!(congruence_delegate(builtin(SystemId::R))
            .unwrap()
            .same_rules_as(builtin(SystemId::S)));
        assert!(congruence_delegate(builtin(SystemId::T))
            .unwrap()
            .same_rules_as(builtin(SystemId::U)));
        let custom = crate::system::parse_system("alphabet: a b\nab -> ba\n").unwrap();
        assert!(congruence_delegate(&custom).is_none());
    }

    #[test]
    fn f_closed_values() {
        let f1 = FTuple::new(vec![1]).unwrap();
        assert_eq!(f_eval(&f1, FEvalMode::Closed, 1000).unwrap(), BigUint::from(3u32));
        let f0 = FTuple::new(vec![0]).unwrap();
        assert_eq!(f_eval(&f0, FEvalMode::Closed, 1000).unwrap(), BigUint::one());
        let f11 = FTuple::new(vec![1, 1]).unwrap();
        for mode in [FEvalMode::Closed, FEvalMode::Recursive, FEvalMode::Simulate] {
            assert_eq!(f_eval(&f11, mode, 1000).unwrap(), BigUint::from(9u32));
        }
    }

    #[test]
    fn acac_derivation_structure() {
        for n in 0..=4u64 {
            let d = acac_derivation(n, DEFAULT_DENSE_CAP).unwrap();
            let expected = (1usize << (n + 1)) + n as usize - 1;
            assert_eq!(d.len(), expected, "length at n={n}");
            assert!(builtin(SystemId::R).verify_derivation(&d).valid, "verifies at n={n}");
            assert_eq!(d.end, w("0"));
        }
        let d1 = acac_derivation(1, DEFAULT_DENSE_CAP).unwrap();
        assert_eq!(d1.start, w("a^3 c a c"));
        assert_eq!(d1.len(), 4);
    }

    #[test]
    fn case1_examples() {
        let d = case1_reduce(&w("bacc")).unwrap();
        assert!(builtin(SystemId::S).verify_derivation(&d).valid);
        assert_eq!(d.end, w("0"));
        assert!(d.len() <= 6 * 4);

        let d = case1_reduce(&w("0b")).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.end, w("0"));

        let irreducible = w("a^2 c a c");
        let d = case1_reduce(&irreducible).unwrap();
        assert!(d.is_empty());
        assert_eq!(d.end, irreducible);
    }

    #[test]
    fn case1_matches_engine_normal_form() {
        let s = builtin(SystemId::S);
        for word in crate::word::dense_words_up_to(&s.alphabet, 5) {
            let d = case1_reduce(&word).unwrap();
            let nf = s.normal_form(&word, 4096).unwrap();
            assert_eq!(d.end, nf, "case1 nf for {word}");
            assert!(s.verify_derivation(&d).valid, "case1 verifies for {word}");
        }
    }

    #[test]
    fn noregcs_words() {
        assert_eq!(noregcs_word(1).unwrap(), w("a^6 c a^2 c a c"));
        assert_eq!(noregcs_word(2).unwrap(), w("a^126 c a^6 c a^2 c"));
        let s = builtin(SystemId::S);
        for q in 1..=6 {
            assert!(s.is_irreducible(&noregcs_word(q).unwrap()).unwrap(), "Q={q}");
        }
    }

    #[test]
    fn pump_word_behaviour() {
        let u = noregcs_word(1).unwrap();
        let pumped = pump_word(&u, 0, &BigUint::one()).unwrap();
        assert_eq!(pumped, w("a^7 c a^2 c a c"));
        assert!(is_zero_class(&pumped, 4096).unwrap());
        assert_eq!(pump_word(&u, 0, &BigUint::zero()).unwrap(), u);
        assert!(pump_word(&u, 1, &BigUint::one()).is_err());
        assert_eq!(
            pump_word(&w("bac"), 1, &BigUint::from(2u32)).unwrap(),
            w("b a^3 c")
        );
    }

    #[test]
    fn expansion_to_r() {
        let s = builtin(SystemId::S);
        let r = builtin(SystemId::R);
        let (_, d) = s
            .reduce_to_normal_form(&w("a^3 c a c c"), Strategy::Leftmost, 100)
            .unwrap();
        let expanded = expand_to_r_derivation(&d, DEFAULT_DENSE_CAP).unwrap();
        assert!(r.verify_derivation(&expanded).valid);
        assert_eq!(expanded.end, d.end);
    }

    #[test]
    fn random_strategy_is_reproducible() {
        let s = builtin(SystemId::S);
        let word = w("bbacc");
        let a = s.reduce_to_normal_form(&word, Strategy::Random { seed: 7 }, 4096).unwrap();
        let b = s.reduce_to_normal_form(&word, Strategy::Random { seed: 7 }, 4096).unwrap();
        assert_eq!(a.1, b.1);
    }
}
