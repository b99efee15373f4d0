//! Redex search, rule application, reduction strategies, and checkable
//! derivations.
//!
//! Redex positions are dense coordinates (symbol indices), stored as big
//! integers so that matches inside runs like `a^(2^70)` are addressable.
//! Schema matching is exact: instances inside the cache window are matched
//! like finite rules, and beyond it the parameter is recovered by solving
//! the interior run equations, never by enumeration.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::system::{RewritingSystem, Rule, RuleSchema, SCHEMA_CACHE_WINDOW};
use crate::word::{Symbol, Word};
use crate::{Error, Result};

/// Ceiling on the number of redexes a single search may enumerate; single-run
/// patterns inside huge runs would otherwise produce unbounded lists.
const MAX_REDEX_ENUM: usize = 1 << 20;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Direction {
    Forward,
    Reverse,
}

impl Direction {
    pub fn flipped(self) -> Direction {
        match self {
            Direction::Forward => Direction::Reverse,
            Direction::Reverse => Direction::Forward,
        }
    }
}

/// One rule occurrence: `rule_id` (with schema parameter when applicable)
/// whose source side occurs at `position`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Redex {
    pub rule_id: String,
    pub param: Option<BigUint>,
    pub position: BigUint,
    pub direction: Direction,
}

impl Redex {
    pub fn forward(rule_id: impl Into<String>, param: Option<BigUint>, position: BigUint) -> Self {
        Redex { rule_id: rule_id.into(), param, position, direction: Direction::Forward }
    }

    /// The inverse occurrence: applying it to the result restores the input.
    pub fn reversed(&self) -> Redex {
        Redex {
            rule_id: self.rule_id.clone(),
            param: self.param.clone(),
            position: self.position.clone(),
            direction: self.direction.flipped(),
        }
    }

    pub fn label(&self) -> String {
        let base = crate::system::instance_label(&self.rule_id, self.param.as_ref());
        match self.direction {
            Direction::Forward => base,
            Direction::Reverse => format!("{base}~"),
        }
    }

    fn order(&self, other: &Redex) -> std::cmp::Ordering {
        self.position
            .cmp(&other.position)
            .then_with(|| self.rule_id.cmp(&other.rule_id))
            .then_with(|| self.param.cmp(&other.param))
            .then_with(|| self.direction.cmp(&other.direction))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Random { seed: u64 },
}

/// A single recorded step: the redex applied plus the stable hash of the
/// resulting word, enough to re-verify without storing intermediates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RewriteStep {
    pub redex: Redex,
    pub result_hash: u64,
}

/// A checkable rewrite sequence; reverse steps are legal, so derivations
/// witness Thue congruence, not just reduction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    pub start: Word,
    pub steps: Vec<RewriteStep>,
    pub end: Word,
}

impl Derivation {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Replays every step, invoking `visit` on each word from `start`
    /// through `end`. Fails on the first illegal step or hash mismatch.
    pub fn replay<F>(&self, sys: &RewritingSystem, mut visit: F) -> Result<()>
    where
        F: FnMut(&Word),
    {
        let mut current = self.start.clone();
        visit(&current);
        for (i, step) in self.steps.iter().enumerate() {
            current = sys.apply_redex(&current, &step.redex).map_err(|e| {
                Error::InvalidInput(format!("step {i} does not apply: {e}"))
            })?;
            if current.stable_hash() != step.result_hash {
                return Err(Error::InvalidInput(format!("step {i} hash mismatch")));
            }
            visit(&current);
        }
        if current != self.end {
            return Err(Error::InvalidInput("final word differs from recorded end".into()));
        }
        Ok(())
    }

    /// Maximum dense length over start, intermediates, and end.
    pub fn max_width(&self, sys: &RewritingSystem) -> Result<BigUint> {
        let mut max = BigUint::zero();
        self.replay(sys, |w| {
            let l = w.dense_len();
            if l > max {
                max = l;
            }
        })?;
        Ok(max)
    }
}

/// Incrementally builds a derivation while tracking the current word.
pub struct DerivationBuilder {
    start: Word,
    current: Word,
    steps: Vec<RewriteStep>,
}

impl DerivationBuilder {
    pub fn new(start: Word) -> Self {
        DerivationBuilder { current: start.clone(), start, steps: Vec::new() }
    }

    pub fn current(&self) -> &Word {
        &self.current
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn apply(&mut self, sys: &RewritingSystem, redex: Redex) -> Result<()> {
        let next = sys.apply_redex(&self.current, &redex)?;
        self.steps.push(RewriteStep { redex, result_hash: next.stable_hash() });
        self.current = next;
        Ok(())
    }

    /// Appends another derivation whose steps are shifted `offset` symbols
    /// to the right (embedding into a context).
    pub fn splice_shifted(
        &mut self,
        sys: &RewritingSystem,
        inner: &Derivation,
        offset: &BigUint,
    ) -> Result<()> {
        for step in &inner.steps {
            let mut redex = step.redex.clone();
            redex.position = &redex.position + offset;
            self.apply(sys, redex)?;
        }
        Ok(())
    }

    pub fn finish(self) -> Derivation {
        Derivation { start: self.start, steps: self.steps, end: self.current }
    }
}

/// Verdict of derivation checking: valid, or the index of the first step
/// that fails (the step count itself when only the recorded end mismatches).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct VerifyReport {
    pub valid: bool,
    pub first_failure: Option<usize>,
}

impl RewritingSystem {
    /// All forward redexes of `w`, plus reverse redexes when
    /// `include_reverse` is set. Forward schema matching is exact for every
    /// parameter; `param_cap` bounds only reverse schema searches, whose
    /// right-hand sides may occur for infinitely many parameters.
    /// Result order is deterministic: position, rule id, parameter.
    pub fn find_redexes(
        &self,
        w: &Word,
        include_reverse: bool,
        param_cap: u64,
    ) -> Result<Vec<Redex>> {
        w.symbols_subset_of(&self.alphabet)?;
        let mut out: Vec<Redex> = Vec::new();

        let meta = WordMeta::build(w);
        for rule in &self.finite_rules {
            for pos in occurrences_via(&rule.lhs, w, &meta)? {
                out.push(Redex {
                    rule_id: rule.id.clone(),
                    param: None,
                    position: pos,
                    direction: Direction::Forward,
                });
            }
        }
        for schema in &self.schemas {
            for (n, pos) in schema_forward_occurrences(schema, w, &meta)? {
                out.push(Redex {
                    rule_id: schema.id.clone(),
                    param: Some(n),
                    position: pos,
                    direction: Direction::Forward,
                });
            }
        }

        if include_reverse {
            for rule in &self.finite_rules {
                for pos in reverse_positions(&rule.rhs, w, &meta)? {
                    out.push(Redex {
                        rule_id: rule.id.clone(),
                        param: None,
                        position: pos,
                        direction: Direction::Reverse,
                    });
                }
            }
            for schema in &self.schemas {
                for inst in schema.instances_up_to(param_cap)? {
                    for pos in reverse_positions(&inst.rule.rhs, w, &meta)? {
                        out.push(Redex {
                            rule_id: schema.id.clone(),
                            param: Some(inst.n.clone()),
                            position: pos,
                            direction: Direction::Reverse,
                        });
                    }
                }
            }
        }

        out.sort_by(|a, b| a.order(b));
        out.dedup();
        Ok(out)
    }

    /// The rule behind a redex: borrowed for finite rules and cached
    /// schema instances, materialized otherwise.
    fn redex_rule(&self, r: &Redex) -> Result<std::borrow::Cow<'_, Rule>> {
        use std::borrow::Cow;
        match &r.param {
            None => self
                .finite_rule(&r.rule_id)
                .map(Cow::Borrowed)
                .ok_or_else(|| Error::UnknownRule(r.rule_id.clone())),
            Some(n) => {
                let schema = self
                    .schema(&r.rule_id)
                    .ok_or_else(|| Error::UnknownRule(r.rule_id.clone()))?;
                match schema.cached_instance(n) {
                    Some(inst) => Ok(Cow::Borrowed(&inst.rule)),
                    None => Ok(Cow::Owned(schema.instance(n)?.rule)),
                }
            }
        }
    }

    /// The source and replacement words of a redex.
    pub fn redex_sides(&self, r: &Redex) -> Result<(Word, Word)> {
        let rule = self.redex_rule(r)?.into_owned();
        Ok(match r.direction {
            Direction::Forward => (rule.lhs, rule.rhs),
            Direction::Reverse => (rule.rhs, rule.lhs),
        })
    }

    /// Applies `r` to `w`, substituting the replacement side for the source
    /// side at the recorded position.
    pub fn apply_redex(&self, w: &Word, r: &Redex) -> Result<Word> {
        let rule = self.redex_rule(r)?;
        let (src, rep) = match r.direction {
            Direction::Forward => (&rule.lhs, &rule.rhs),
            Direction::Reverse => (&rule.rhs, &rule.lhs),
        };
        if !w.matches_at(&r.position, src) {
            return Err(Error::NotARedex(format!(
                "{} does not match '{w}' at position {} ({src} required)",
                r.label(),
                r.position,
            )));
        }
        Ok(w.splice(&r.position, &src.dense_len(), rep))
    }

    /// Forward-reduces `w` to an irreducible word under the given strategy.
    pub fn reduce_to_normal_form(
        &self,
        w: &Word,
        strategy: Strategy,
        max_steps: usize,
    ) -> Result<(Word, Derivation)> {
        let mut rng = match strategy {
            Strategy::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        let mut builder = DerivationBuilder::new(w.clone());
        loop {
            let redexes = self.find_redexes(builder.current(), false, 0)?;
            if redexes.is_empty() {
                break;
            }
            if builder.len() >= max_steps {
                return Err(Error::StepBudgetExhausted { steps: builder.len() });
            }
            let idx = match strategy {
                Strategy::Leftmost => 0,
                Strategy::Rightmost => redexes.len() - 1,
                Strategy::Random { .. } => {
                    rng.as_mut().unwrap().gen_range(0..redexes.len())
                }
            };
            let redex = redexes.into_iter().nth(idx).unwrap();
            builder.apply(self, redex)?;
        }
        let derivation = builder.finish();
        Ok((derivation.end.clone(), derivation))
    }

    /// Leftmost normal form, discarding the derivation.
    pub fn normal_form(&self, w: &Word, max_steps: usize) -> Result<Word> {
        Ok(self.reduce_to_normal_form(w, Strategy::Leftmost, max_steps)?.0)
    }

    pub fn is_irreducible(&self, w: &Word) -> Result<bool> {
        Ok(self.find_redexes(w, false, 0)?.is_empty())
    }

    /// Checks that every step is a legal forward or reverse application and
    /// that the intermediate words chain to the recorded end.
    pub fn verify_derivation(&self, d: &Derivation) -> VerifyReport {
        let mut current = d.start.clone();
        for (i, step) in d.steps.iter().enumerate() {
            match self.apply_redex(&current, &step.redex) {
                Ok(next) if next.stable_hash() == step.result_hash => current = next,
                _ => return VerifyReport { valid: false, first_failure: Some(i) },
            }
        }
        if current != d.end {
            return VerifyReport { valid: false, first_failure: Some(d.steps.len()) };
        }
        VerifyReport { valid: true, first_failure: None }
    }
}

/// Word run metadata with u64 arithmetic, available whenever every run
/// exponent fits: `(symbol, exponent, dense start)` per run, plus the
/// total length. Built once per redex search.
pub(crate) struct WordMeta {
    runs: Vec<(Symbol, u64, u64)>,
    len: u64,
    exact: bool,
}

impl WordMeta {
    pub(crate) fn build(w: &Word) -> WordMeta {
        let mut runs = Vec::with_capacity(w.runs().len());
        let mut pos: u64 = 0;
        for (sym, exp) in w.runs() {
            let Some(e) = exp.to_u64().filter(|e| pos.checked_add(*e).is_some()) else {
                return WordMeta { runs: Vec::new(), len: 0, exact: false };
            };
            runs.push((*sym, e, pos));
            pos += e;
        }
        WordMeta { runs, len: pos, exact: true }
    }
}

/// Run list of a pattern in u64, when it fits.
fn pattern_u64(pattern: &Word) -> Option<Vec<(Symbol, u64)>> {
    pattern
        .runs()
        .iter()
        .map(|(s, e)| e.to_u64().map(|e| (*s, e)))
        .collect()
}

/// All dense positions where `pattern` occurs in `w`. Patterns of two or
/// more runs have at most one occurrence per run alignment; single-run
/// patterns may occur at every offset inside a matching run.
pub(crate) fn occurrences(pattern: &Word, w: &Word) -> Result<Vec<BigUint>> {
    occurrences_via(pattern, w, &WordMeta::build(w))
}

fn occurrences_via(pattern: &Word, w: &Word, meta: &WordMeta) -> Result<Vec<BigUint>> {
    if meta.exact {
        if let Some(p) = pattern_u64(pattern) {
            let mut out = Vec::new();
            occurrences_u64(&p, &meta.runs, |pos| out.push(BigUint::from(pos)))?;
            return Ok(out);
        }
    }
    occurrences_big(pattern, w)
}

/// u64 fast path; `emit` receives match positions in increasing run order.
fn occurrences_u64(
    p: &[(Symbol, u64)],
    r: &[(Symbol, u64, u64)],
    mut emit: impl FnMut(u64),
) -> Result<()> {
    let k = p.len();
    if k == 0 || r.len() < k {
        return Ok(());
    }
    if k == 1 {
        let (sym, e) = p[0];
        let mut emitted = 0usize;
        for (rs, re, start) in r {
            if *rs == sym && *re >= e {
                let slots = *re - e + 1;
                if emitted + slots as usize > MAX_REDEX_ENUM {
                    return Err(Error::EnumerationOverflow(format!(
                        "more than {MAX_REDEX_ENUM} occurrences of a single-run pattern"
                    )));
                }
                emitted += slots as usize;
                for t in 0..slots {
                    emit(start + t);
                }
            }
        }
        return Ok(());
    }
    'align: for j in 0..=(r.len() - k) {
        if r[j].0 != p[0].0 || r[j].1 < p[0].1 {
            continue;
        }
        for i in 1..k - 1 {
            if r[j + i].0 != p[i].0 || r[j + i].1 != p[i].1 {
                continue 'align;
            }
        }
        let (last_sym, last_exp) = p[k - 1];
        if r[j + k - 1].0 != last_sym || r[j + k - 1].1 < last_exp {
            continue;
        }
        emit(r[j].2 + (r[j].1 - p[0].1));
    }
    Ok(())
}

/// Arbitrary-precision path for words or patterns with huge runs.
fn occurrences_big(pattern: &Word, w: &Word) -> Result<Vec<BigUint>> {
    let p = pattern.runs();
    let r = w.runs();
    let mut out = Vec::new();
    if p.is_empty() || r.len() < p.len() {
        return Ok(out);
    }
    let k = p.len();
    let mut start = BigUint::zero();
    for j in 0..r.len() {
        if j > 0 {
            start += &r[j - 1].1;
        }
        if j + k > r.len() {
            break;
        }
        if k == 1 {
            let (sym, e) = &p[0];
            if r[j].0 == *sym && &r[j].1 >= e {
                let slots = (&r[j].1 - e) + 1u32;
                let slots_u = slots.to_usize().filter(|s| out.len() + s <= MAX_REDEX_ENUM);
                let Some(slots_u) = slots_u else {
                    return Err(Error::EnumerationOverflow(format!(
                        "more than {MAX_REDEX_ENUM} occurrences of {pattern}"
                    )));
                };
                for t in 0..slots_u {
                    out.push(&start + BigUint::from(t));
                }
            }
            continue;
        }
        if r[j].0 != p[0].0 || r[j].1 < p[0].1 {
            continue;
        }
        if p[1..k - 1]
            .iter()
            .zip(&r[j + 1..j + k - 1])
            .any(|(pi, ri)| pi.0 != ri.0 || pi.1 != ri.1)
        {
            continue;
        }
        let (last_sym, last_exp) = &p[k - 1];
        if r[j + k - 1].0 != *last_sym || &r[j + k - 1].1 < last_exp {
            continue;
        }
        out.push(&start + (&r[j].1 - &p[0].1));
    }
    Ok(out)
}

/// Positions for a reverse application: occurrences of the rule's
/// right-hand side, or every insertion point when it is empty.
fn reverse_positions(rhs: &Word, w: &Word, meta: &WordMeta) -> Result<Vec<BigUint>> {
    if !rhs.is_empty() {
        return occurrences_via(rhs, w, meta);
    }
    let len = w.dense_len_u64().ok_or_else(|| {
        Error::EnumerationOverflow("insertion search over a huge word".into())
    })?;
    if len as usize + 1 > MAX_REDEX_ENUM {
        return Err(Error::EnumerationOverflow("insertion search over a huge word".into()));
    }
    Ok((0..=len).map(BigUint::from).collect())
}

/// Exact schema matching: every `(parameter, position)` pair whose
/// instantiated left-hand side occurs in `w`.
fn schema_forward_occurrences(
    schema: &RuleSchema,
    w: &Word,
    meta: &WordMeta,
) -> Result<Vec<(BigUint, BigUint)>> {
    let mut out: Vec<(BigUint, BigUint)> = Vec::new();

    // Instances inside the cache window behave like finite rules; the flat
    // length table skips the ones that cannot fit.
    let w_len_u64 = if meta.exact { Some(meta.len) } else { w.dense_len_u64() };
    for (idx, inst) in schema.cached_instances().iter().enumerate() {
        match w_len_u64 {
            Some(wl) if schema.cached_lhs_len(idx) > wl => continue,
            None if inst.lhs_len > w.dense_len() => continue,
            _ => {}
        }
        for pos in occurrences_via(&inst.rule.lhs, w, meta)? {
            out.push((inst.n.clone(), pos));
        }
    }

    // Beyond the window, solve the interior run equations for n. Words too
    // short for any such instance skip the scan.
    let skip_generic = match w_len_u64 {
        Some(wl) => wl < schema.generic_min_lhs_len(),
        None => false,
    };
    if schema.interior_pinned() && !skip_generic {
        let shape = schema.generic_shape();
        let k = shape.len();
        let r = w.runs();
        if k >= 2 && r.len() >= k {
            let starts: Vec<BigUint> = {
                let mut v = Vec::with_capacity(r.len());
                let mut pos = BigUint::zero();
                for (_, e) in r {
                    v.push(pos.clone());
                    pos += e;
                }
                v
            };
            let window_top = BigUint::from(schema.n_min + SCHEMA_CACHE_WINDOW);
            'align: for j in 0..=(r.len() - k) {
                for (i, (sym, _)) in shape.iter().enumerate() {
                    if r[j + i].0 != *sym {
                        continue 'align;
                    }
                }
                let mut candidate: Option<BigUint> = None;
                for i in 1..k - 1 {
                    let e = &shape[i].1;
                    if e.references_n() {
                        candidate = e.solve(&r[j + i].1, schema.n_min);
                        break;
                    }
                }
                let Some(n) = candidate else { continue };
                if n <= window_top {
                    continue; // already covered by the cache
                }
                let Ok(inst) = schema.instance(&n) else { continue };
                let li = inst.rule.lhs.runs();
                if li.len() != k {
                    continue;
                }
                if li[0].0 != r[j].0 || r[j].1 < li[0].1 {
                    continue;
                }
                if li[1..k - 1].iter().zip(&r[j + 1..j + k - 1]).any(|(a, b)| a != b) {
                    continue;
                }
                if li[k - 1].0 != r[j + k - 1].0 || r[j + k - 1].1 < li[k - 1].1 {
                    continue;
                }
                out.push((n, &starts[j] + (&r[j].1 - &li[0].1)));
            }
        }
    }

    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paper::{builtin_system, SystemId};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn finds_finite_redexes_in_order() {
        let r = builtin_system(SystemId::R);
        let redexes = r.find_redexes(&w("bac"), false, 0).unwrap();
        assert_eq!(redexes.len(), 1);
        assert_eq!(redexes[0].rule_id, "BA");
        assert_eq!(redexes[0].position, BigUint::zero());

        assert!(r.find_redexes(&w("ccc"), false, 0).unwrap().is_empty());
    }

    #[test]
    fn schema_match_is_exact_within_cache() {
        let s = builtin_system(SystemId::S);
        let redexes = s.find_redexes(&w("a^3 c a c"), false, 0).unwrap();
        assert_eq!(redexes.len(), 1);
        assert_eq!(redexes[0].rule_id, "ACAC");
        assert_eq!(redexes[0].param, Some(BigUint::from(1u32)));
        assert_eq!(redexes[0].position, BigUint::zero());

        // 2^(n+1)-1 = 6 has no integer solution, so no redex at all.
        assert!(s.find_redexes(&w("a^6 c a^2 c"), false, 0).unwrap().is_empty());
    }

    #[test]
    fn schema_match_beyond_cache_window() {
        let s = builtin_system(SystemId::S);
        // n = 300 is far outside the instance cache.
        let word = w("a^(2^301-1) c a^300 c");
        let redexes = s.find_redexes(&word, false, 0).unwrap();
        assert_eq!(redexes.len(), 1);
        assert_eq!(redexes[0].param, Some(BigUint::from(300u32)));
        // Off-by-one run lengths must not match.
        let off = w("a^(2^301-2) c a^300 c");
        assert!(s.find_redexes(&off, false, 0).unwrap().is_empty());
    }

    #[test]
    fn apply_and_reverse_roundtrip() {
        let r = builtin_system(SystemId::R);
        let bc = w("bc");
        let redex = Redex::forward("BC", None, BigUint::zero());
        let aca = r.apply_redex(&bc, &redex).unwrap();
        assert_eq!(aca, w("aca"));
        assert_eq!(r.apply_redex(&aca, &redex.reversed()).unwrap(), bc);
    }

    #[test]
    fn apply_rejects_non_redex() {
        let s = builtin_system(SystemId::S);
        let redex = Redex::forward("ACAC", Some(BigUint::from(2u32)), BigUint::zero());
        let err = s.apply_redex(&w("a^6 c a^2 c"), &redex).unwrap_err();
        assert!(matches!(err, Error::NotARedex(_)));
    }

    #[test]
    fn reduce_bbc_under_s() {
        let s = builtin_system(SystemId::S);
        let (nf, d) = s.reduce_to_normal_form(&w("bbc"), Strategy::Leftmost, 100).unwrap();
        assert_eq!(nf, w("a^3 c a^2"));
        assert_eq!(d.len(), 3);
        assert!(s.verify_derivation(&d).valid);
    }

    #[test]
    fn reduce_babac_under_u() {
        let u = builtin_system(SystemId::U);
        let (nf, d) = u.reduce_to_normal_form(&w("babac"), Strategy::Leftmost, 100).unwrap();
        assert_eq!(nf, w("a^9 c a^2"));
        assert!(u.verify_derivation(&d).valid);
    }

    #[test]
    fn reduce_zero_word_under_r() {
        let r = builtin_system(SystemId::R);
        let (nf, d) = r.reduce_to_normal_form(&w("0a0"), Strategy::Leftmost, 100).unwrap();
        assert_eq!(nf, w("0"));
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn budget_exhaustion_reported() {
        let s = builtin_system(SystemId::S);
        let err = s.reduce_to_normal_form(&w("bbc"), Strategy::Leftmost, 2).unwrap_err();
        assert!(matches!(err, Error::StepBudgetExhausted { steps: 2 }));
    }

    #[test]
    fn verify_rejects_reordered_steps() {
        let s = builtin_system(SystemId::S);
        let (_, mut d) = s.reduce_to_normal_form(&w("bbc"), Strategy::Leftmost, 100).unwrap();
        d.steps.swap(0, 2);
        let report = s.verify_derivation(&d);
        assert!(!report.valid);
        assert_eq!(report.first_failure, Some(0));
    }

    #[test]
    fn empty_derivation_is_reflexive() {
        let s = builtin_system(SystemId::S);
        let d = Derivation { start: w("abc"), steps: vec![], end: w("abc") };
        assert!(s.verify_derivation(&d).valid);
    }

    #[test]
    fn reverse_redexes_found() {
        let r = builtin_system(SystemId::R);
        let redexes = r.find_redexes(&w("aca"), true, 8).unwrap();
        // Reverse BC at position 0 restores bc.
        assert!(redexes
            .iter()
            .any(|x| x.rule_id == "BC" && x.direction == Direction::Reverse));
    }
}
