//! The named verification suites behind `verify-paper` and the acceptance
//! tests. Every tolerance, bound, and sweep size is pinned here.
//!
//! Exhaustive breadth-first search is infeasible on the zero class (its
//! capped components run to ~10^8 words), so the congruence sweeps verify
//! connectivity constructively: an explicit derivation whose intermediate
//! words stay within the length cap proves the capped search would find a
//! path, and one-time rule soundness (every rule of `R` preserves the
//! `S`-normal form) proves it can never connect words with distinct normal
//! forms. Sampled literal searches keep the BFS route itself exercised.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::confluence::{certify_termination_trace, enumerate_critical_pairs, resolve_critical_pair};
use crate::dehn::{capped_distance, check_context_monotonicity};
use crate::paper::{
    self, acac_derivation, builtin, case1_reduce, expand_to_r_derivation, f_eval, noregcs_word,
    pump_word, FEvalMode, FTuple, SystemId,
};
use crate::rewrite::Strategy;
use crate::word::{dense_words_up_to, Word};
use crate::xsection::{check_cross_section, pumping_falsifier, r_irreducibles_dfa, s_irreducibles_dfa, XsVerdict};
use crate::{Result, DEFAULT_DENSE_CAP};

// Pinned suite parameters.
const F_MAX_ARITY: usize = 4;
const F_MAX_ENTRY: u64 = 3;
const DISTACAC_MAX_K: u64 = 6;
const DISTACAC_BFS_K: u64 = 2;
const S_PAIR_PARAM_BOUND: u64 = 5;
const U_PAIR_PARAM_BOUND: u64 = 8;
const PAIR_RESOLVE_STEPS: usize = 200;
const CONFLUENCE_WORD_LEN: u32 = 8;
const RANDOM_RUNS: usize = 50;
const EQUIV_PAIR_SUM: u64 = 8;
const EQUIV_LENGTH_CAP: u64 = 14;
const EQUIV_BFS_SAMPLES: usize = 300;
const LDF_WORD_LEN: u32 = 8;
const LDF_BFS_EXHAUSTIVE_LEN: u64 = 4;
const LDF_BFS_SAMPLES: usize = 100;
const CASE2_PAIR_SUM: u64 = 8;
const LEFT_CANCEL_LEN: u32 = 6;
const NOREGCS_QS: [u32; 3] = [1, 2, 3];
const NOREGCS_DELTAS: std::ops::RangeInclusive<u64> = 1..=5;
const XSECTION_HORIZON: u64 = 8;
const CONTEXT_SAMPLES: usize = 1000;
const CONTEXT_PAIR_SUM: u64 = 6;
const CONTEXT_FRAME_LEN: u64 = 2;
const STEP_BUDGET: usize = 4096;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SuiteId {
    F,
    Equivalent,
    Distacac,
    CompleteS,
    CompleteU,
    LdfCase1,
    LdfCase2,
    LeftCancel,
    Noregcs,
    ContextMono,
}

impl SuiteId {
    pub const ALL: [SuiteId; 10] = [
        SuiteId::F,
        SuiteId::Equivalent,
        SuiteId::Distacac,
        SuiteId::CompleteS,
        SuiteId::CompleteU,
        SuiteId::LdfCase1,
        SuiteId::LdfCase2,
        SuiteId::LeftCancel,
        SuiteId::Noregcs,
        SuiteId::ContextMono,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SuiteId::F => "f",
            SuiteId::Equivalent => "equivalent",
            SuiteId::Distacac => "distacac",
            SuiteId::CompleteS => "complete-S",
            SuiteId::CompleteU => "complete-U",
            SuiteId::LdfCase1 => "ldf-case1",
            SuiteId::LdfCase2 => "ldf-case2",
            SuiteId::LeftCancel => "left-cancel",
            SuiteId::Noregcs => "noregcs",
            SuiteId::ContextMono => "context-mono",
        }
    }
}

impl std::str::FromStr for SuiteId {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| crate::Error::InvalidInput(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: SuiteId,
    pub passed: bool,
    pub summary: String,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn from_failures(suite: SuiteId, summary: String, mut failures: Vec<String>) -> Self {
        failures.sort();
        failures.truncate(16);
        SuiteReport { suite, passed: failures.is_empty(), summary, failures }
    }
}

pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    SuiteId::ALL.into_iter().map(|id| run_suite(id, seed)).collect()
}

pub fn run_suite(id: SuiteId, seed: u64) -> SuiteReport {
    let result = match id {
        SuiteId::F => suite_f(),
        SuiteId::Equivalent => suite_equivalent(seed),
        SuiteId::Distacac => suite_distacac(),
        SuiteId::CompleteS => suite_complete_s(seed),
        SuiteId::CompleteU => suite_complete_u(seed),
        SuiteId::LdfCase1 => suite_ldf_case1(seed),
        SuiteId::LdfCase2 => suite_ldf_case2(),
        SuiteId::LeftCancel => suite_left_cancel(),
        SuiteId::Noregcs => suite_noregcs(),
        SuiteId::ContextMono => suite_context_mono(seed),
    };
    match result {
        Ok(report) => report,
        Err(e) => SuiteReport {
            suite: id,
            passed: false,
            summary: "suite aborted".into(),
            failures: vec![format!("error: {e}")],
        },
    }
}

fn mix(seed: u64, salt: u64, item: u64) -> u64 {
    let mut x = seed ^ salt.wrapping_mul(0x9e3779b97f4a7c15) ^ item;
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58476d1ce4e5b9);
    x ^= x >> 27;
    x
}

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

/// Leftmost normal forms for all dense words up to `max_len`.
fn nf_table(sys: &crate::RewritingSystem, max_len: u32) -> Result<HashMap<Word, Word>> {
    let words = dense_words_up_to(&sys.alphabet, max_len);
    let pairs: Vec<Result<(Word, Word)>> = words
        .into_par_iter()
        .map(|word| {
            let nf = sys.normal_form(&word, STEP_BUDGET)?;
            Ok((word, nf))
        })
        .collect();
    let mut table = HashMap::new();
    for p in pairs {
        let (word, nf) = p?;
        table.insert(word, nf);
    }
    Ok(table)
}

// ---------------------------------------------------------------- suite: f

fn suite_f() -> Result<SuiteReport> {
    let mut failures = Vec::new();
    let mut count = 0usize;
    for arity in 1..=F_MAX_ARITY {
        let mut idx = vec![0u64; arity];
        loop {
            count += 1;
            let t = FTuple::new(idx.clone())?;
            let closed = f_eval(&t, FEvalMode::Closed, DEFAULT_DENSE_CAP)?;
            let recursive = f_eval(&t, FEvalMode::Recursive, DEFAULT_DENSE_CAP)?;
            let simulate = f_eval(&t, FEvalMode::Simulate, DEFAULT_DENSE_CAP)?;
            if closed != recursive || closed != simulate {
                failures.push(format!(
                    "f{idx:?}: closed={closed} recursive={recursive} simulate={simulate}"
                ));
            }
            if !advance(&mut idx, F_MAX_ENTRY) {
                break;
            }
        }
    }

    // Spot value: reducing babac under U ends at a^9 c a^2, so f(1,1) = 9.
    let u = builtin(SystemId::U);
    let (nf, d) = u.reduce_to_normal_form(&w("babac"), Strategy::Leftmost, STEP_BUDGET)?;
    if nf != w("a^9 c a^2") || !u.verify_derivation(&d).valid {
        failures.push(format!("babac reduced to {nf} instead of a^9 c a^2"));
    }
    if f_eval(&FTuple::new(vec![1, 1])?, FEvalMode::Closed, DEFAULT_DENSE_CAP)?
        != BigUint::from(9u32)
    {
        failures.push("f(1,1) != 9".into());
    }

    Ok(SuiteReport::from_failures(
        SuiteId::F,
        format!("{count} tuples agree across closed/recursive/simulate; f(1,1)=9 via babac"),
        failures,
    ))
}

fn advance(idx: &mut [u64], max: u64) -> bool {
    for slot in idx.iter_mut() {
        *slot += 1;
        if *slot <= max {
            return true;
        }
        *slot = 0;
    }
    false
}

// --------------------------------------------------------- suite: distacac

fn suite_distacac() -> Result<SuiteReport> {
    let r = builtin(SystemId::R);
    let mut failures = Vec::new();
    for k in 0..=DISTACAC_MAX_K {
        let bound = (1u64 << (k + 1)) + k - 1;
        let d = acac_derivation(k, DEFAULT_DENSE_CAP)?;
        if !r.verify_derivation(&d).valid {
            failures.push(format!("k={k}: derivation does not verify"));
        }
        if d.len() as u64 > bound {
            failures.push(format!("k={k}: length {} exceeds bound {bound}", d.len()));
        }
        if k == 0 && d.len() != 1 {
            failures.push(format!("k=0: length {} != 1", d.len()));
        }
        if k <= DISTACAC_BFS_K {
            let start = d.start.clone();
            let cap = start.dense_len_u64().unwrap() + 2;
            let res = capped_distance(r, &start, &w("0"), cap, bound as u32)?;
            match res.distance {
                Some(dist) if (dist as u64) <= bound => {}
                other => failures.push(format!(
                    "k={k}: search gave {other:?}, bound {bound} (cap {cap})"
                )),
            }
        }
    }
    Ok(SuiteReport::from_failures(
        SuiteId::Distacac,
        format!(
            "derivations verify over R with length <= 2^(k+1)+k-1 for k <= {DISTACAC_MAX_K}; \
             search confirms the bound for k <= {DISTACAC_BFS_K}"
        ),
        failures,
    ))
}

// ------------------------------------------- suites: complete-S, complete-U

fn confluence_sweep(
    sys: &'static crate::RewritingSystem,
    max_len: u32,
    seed: u64,
    salt: u64,
    certify: bool,
) -> Result<(usize, Vec<String>)> {
    let words = dense_words_up_to(&sys.alphabet, max_len);
    let count = words.len();
    let failures: Vec<String> = words
        .into_par_iter()
        .enumerate()
        .flat_map_iter(|(idx, word)| {
            let mut local = Vec::new();
            let (nf, d) = match sys.reduce_to_normal_form(&word, Strategy::Leftmost, STEP_BUDGET)
            {
                Ok(v) => v,
                Err(e) => {
                    local.push(format!("{word}: leftmost reduction failed: {e}"));
                    return local.into_iter();
                }
            };
            if certify && (word.dense_len_u64().unwrap() <= 6 || idx % 64 == 0) {
                match certify_termination_trace(sys, &d) {
                    Ok(true) => {}
                    Ok(false) => local.push(format!("{word}: trace fails its measures")),
                    Err(e) => local.push(format!("{word}: certify error: {e}")),
                }
            }
            for i in 0..RANDOM_RUNS {
                let s = mix(seed, salt, word.stable_hash() ^ i as u64);
                match sys.reduce_to_normal_form(&word, Strategy::Random { seed: s }, STEP_BUDGET)
                {
                    Ok((rnf, _)) if rnf == nf => {}
                    Ok((rnf, _)) => {
                        local.push(format!("{word}: random run {i} ended at {rnf}, not {nf}"));
                        break;
                    }
                    Err(e) => {
                        local.push(format!("{word}: random run {i} failed: {e}"));
                        break;
                    }
                }
            }
            local.into_iter()
        })
        .collect();
    Ok((count, failures))
}

fn resolve_all_pairs(
    sys: &crate::RewritingSystem,
    param_bound: u64,
    certify: bool,
) -> Result<(usize, Vec<String>)> {
    let pairs = enumerate_critical_pairs(sys, param_bound)?;
    let mut failures = Vec::new();
    for pair in &pairs {
        let label = format!(
            "{} [{} x {}]",
            pair.source,
            pair.rules.0.label(),
            pair.rules.1.label()
        );
        match resolve_critical_pair(sys, pair, PAIR_RESOLVE_STEPS) {
            Ok(report) if report.resolved => {
                for d in [&report.derivations.0, &report.derivations.1] {
                    if !sys.verify_derivation(d).valid {
                        failures.push(format!("{label}: resolution derivation invalid"));
                    } else if certify {
                        match certify_termination_trace(sys, d) {
                            Ok(true) => {}
                            Ok(false) => {
                                failures.push(format!("{label}: trace fails its measures"))
                            }
                            Err(e) => failures.push(format!("{label}: certify error: {e}")),
                        }
                    }
                }
            }
            Ok(_) => failures.push(format!("{label}: unresolved")),
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    Ok((pairs.len(), failures))
}

fn suite_complete_s(seed: u64) -> Result<SuiteReport> {
    let s = builtin(SystemId::S);
    let mut failures = Vec::new();
    let (pair_count, mut pf) = resolve_all_pairs(s, S_PAIR_PARAM_BOUND, true)?;
    failures.append(&mut pf);
    let (word_count, mut wf) = confluence_sweep(s, CONFLUENCE_WORD_LEN, seed, 3, true)?;
    failures.append(&mut wf);
    Ok(SuiteReport::from_failures(
        SuiteId::CompleteS,
        format!(
            "{pair_count} critical pairs (params <= {S_PAIR_PARAM_BOUND}) resolve within \
             {PAIR_RESOLVE_STEPS} steps; {word_count} words x {RANDOM_RUNS} random reductions \
             share one normal form"
        ),
        failures,
    ))
}

fn suite_complete_u(seed: u64) -> Result<SuiteReport> {
    let u = builtin(SystemId::U);
    let mut failures = Vec::new();
    let (_, mut pf) = resolve_all_pairs(u, U_PAIR_PARAM_BOUND, false)?;
    failures.append(&mut pf);
    // The overlap family a^2 b a^n c must be present for every n <= bound.
    let pairs = enumerate_critical_pairs(u, U_PAIR_PARAM_BOUND)?;
    for n in 0..=U_PAIR_PARAM_BOUND {
        let source = Word::from_runs(vec![
            (paper::SYM_A, BigUint::from(2u32)),
            (paper::SYM_B, BigUint::one()),
            (paper::SYM_A, BigUint::from(n)),
            (paper::SYM_C, BigUint::one()),
        ]);
        if !pairs.iter().any(|p| p.source == source) {
            failures.push(format!("missing overlap a^2 b a^{n} c"));
        }
    }
    let (word_count, mut wf) = confluence_sweep(u, CONFLUENCE_WORD_LEN, seed, 4, false)?;
    failures.append(&mut wf);
    Ok(SuiteReport::from_failures(
        SuiteId::CompleteU,
        format!(
            "{} critical pairs (params <= {U_PAIR_PARAM_BOUND}) resolve; {word_count} words x \
             {RANDOM_RUNS} random reductions share one normal form",
            pairs.len()
        ),
        failures,
    ))
}

// ------------------------------------------------------- suite: equivalent

fn suite_equivalent(seed: u64) -> Result<SuiteReport> {
    let r = builtin(SystemId::R);
    let s = builtin(SystemId::S);
    let zero = w("0");
    let mut failures = Vec::new();

    // Soundness: every rule of R preserves the S-normal form, so no capped
    // search can ever connect words with distinct normal forms.
    for rule in &r.finite_rules {
        let ln = s.normal_form(&rule.lhs, STEP_BUDGET)?;
        let rn = s.normal_form(&rule.rhs, STEP_BUDGET)?;
        if ln != rn {
            failures.push(format!("rule {} changes the S-normal form", rule.id));
        }
    }

    let table = nf_table(s, EQUIV_PAIR_SUM as u32)?;

    // Group words of length <= sum-1 by normal form; every member that can
    // be paired inside the sum bound needs a width-capped connection to
    // the class normal form.
    let mut groups: HashMap<&Word, Vec<&Word>> = HashMap::new();
    for (word, nf) in &table {
        if word.dense_len_u64().unwrap() < EQUIV_PAIR_SUM {
            groups.entry(nf).or_default().push(word);
        }
    }
    for members in groups.values_mut() {
        members.sort();
    }

    let mut evidence_words: Vec<&Word> = Vec::new();
    for members in groups.values() {
        if members.len() < 2 {
            continue;
        }
        let lens: Vec<u64> = members.iter().map(|m| m.dense_len_u64().unwrap()).collect();
        for (i, word) in members.iter().enumerate() {
            let min_other = lens
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, l)| *l)
                .min()
                .unwrap();
            if lens[i] + min_other <= EQUIV_PAIR_SUM {
                evidence_words.push(word);
            }
        }
    }

    let evidence_failures: Vec<String> = evidence_words
        .par_iter()
        .flat_map_iter(|word| {
            let mut local = Vec::new();
            let is_zero = table[*word] == zero;
            let path = if is_zero {
                case1_reduce(word).and_then(|d| expand_to_r_derivation(&d, DEFAULT_DENSE_CAP))
            } else {
                s.reduce_to_normal_form(word, Strategy::Leftmost, STEP_BUDGET)
                    .map(|(_, d)| d)
                    .and_then(|d| expand_to_r_derivation(&d, DEFAULT_DENSE_CAP))
            };
            match path {
                Ok(d) => {
                    if !r.verify_derivation(&d).valid {
                        local.push(format!("{word}: connection does not verify over R"));
                    }
                    match d.max_width(r) {
                        Ok(width) if width <= BigUint::from(EQUIV_LENGTH_CAP) => {}
                        Ok(width) => local.push(format!(
                            "{word}: connection width {width} exceeds cap {EQUIV_LENGTH_CAP}"
                        )),
                        Err(e) => local.push(format!("{word}: {e}")),
                    }
                }
                Err(e) => local.push(format!("{word}: no connection: {e}")),
            }
            local.into_iter()
        })
        .collect();
    failures.extend(evidence_failures);
    let evidence_count = evidence_words.len();

    // Sampled literal capped searches, both directions of the iff.
    // Same-class pairs are kept small so the bidirectional search stays
    // shallow; distinct-class pairs start from a word outside the zero
    // class, whose capped component is finite and exhaustible.
    let mut same_pool: Vec<(&Word, &Word)> = Vec::new();
    for members in groups.values() {
        for (i, u_w) in members.iter().enumerate() {
            for v_w in &members[i + 1..] {
                if u_w.dense_len_u64().unwrap() + v_w.dense_len_u64().unwrap() <= 7 {
                    same_pool.push((u_w, v_w));
                }
            }
        }
    }
    same_pool.sort();
    let mut nonzero_words: Vec<&Word> = table
        .iter()
        .filter(|(_, nf)| **nf != zero)
        .map(|(word, _)| word)
        .collect();
    nonzero_words.sort();
    let all_words: Vec<&Word> = {
        let mut v: Vec<&Word> = table.keys().collect();
        v.sort();
        v
    };

    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 5, 0));
    let mut same_checked = 0usize;
    let mut diff_checked = 0usize;
    while same_checked + diff_checked < EQUIV_BFS_SAMPLES {
        if same_checked <= diff_checked && !same_pool.is_empty() {
            let (u_w, v_w) = same_pool[rng.gen_range(0..same_pool.len())];
            same_checked += 1;
            let res = capped_distance(r, u_w, v_w, EQUIV_LENGTH_CAP, 64)?;
            if res.distance.is_none() {
                failures.push(format!(
                    "{u_w} ~ {v_w} share normal form {} but no capped path found",
                    table[u_w]
                ));
            }
        } else {
            let u_w = nonzero_words[rng.gen_range(0..nonzero_words.len())];
            let v_w = all_words[rng.gen_range(0..all_words.len())];
            if table[u_w] == table[v_w]
                || u_w.dense_len_u64().unwrap() + v_w.dense_len_u64().unwrap() > EQUIV_PAIR_SUM
            {
                continue;
            }
            diff_checked += 1;
            let res = capped_distance(r, u_w, v_w, EQUIV_LENGTH_CAP, 64)?;
            if res.distance.is_some() {
                failures.push(format!(
                    "{u_w} and {v_w} connected but normal forms differ: {} vs {}",
                    table[u_w], table[v_w]
                ));
            }
        }
    }

    Ok(SuiteReport::from_failures(
        SuiteId::Equivalent,
        format!(
            "{} words: R-rules preserve nf_S, {evidence_count} connections within width \
             {EQUIV_LENGTH_CAP}, {same_checked}+{diff_checked} sampled searches agree",
            table.len()
        ),
        failures,
    ))
}

// -------------------------------------------------------- suite: ldf-case1

fn suite_ldf_case1(seed: u64) -> Result<SuiteReport> {
    let r = builtin(SystemId::R);
    let s = builtin(SystemId::S);
    let zero = w("0");
    let table = nf_table(s, LDF_WORD_LEN)?;
    let mut zero_class: Vec<&Word> = table
        .iter()
        .filter(|(word, nf)| **nf == zero && !word.is_empty())
        .map(|(word, _)| word)
        .collect();
    zero_class.sort();

    let failures: Vec<String> = zero_class
        .par_iter()
        .flat_map_iter(|word| {
            let mut local = Vec::new();
            let len = word.dense_len_u64().unwrap();
            let bound = 6 * len;
            let cap = 3 * len + 4;
            match case1_reduce(word) {
                Ok(d) => {
                    if d.end != zero {
                        local.push(format!("{word}: strategy ended at {}", d.end));
                    }
                    if d.len() as u64 > bound {
                        local.push(format!("{word}: {} steps > 6|w| = {bound}", d.len()));
                    }
                    match expand_to_r_derivation(&d, DEFAULT_DENSE_CAP) {
                        Ok(rd) => {
                            if !r.verify_derivation(&rd).valid {
                                local.push(format!("{word}: expanded witness invalid"));
                            }
                            if rd.len() as u64 > bound {
                                local.push(format!(
                                    "{word}: witness length {} > {bound}",
                                    rd.len()
                                ));
                            }
                            match rd.max_width(r) {
                                Ok(width) if width <= BigUint::from(cap) => {}
                                Ok(width) => local.push(format!(
                                    "{word}: witness width {width} > cap {cap}"
                                )),
                                Err(e) => local.push(format!("{word}: {e}")),
                            }
                        }
                        Err(e) => local.push(format!("{word}: expansion failed: {e}")),
                    }
                }
                Err(e) => local.push(format!("{word}: strategy failed: {e}")),
            }
            local.into_iter()
        })
        .collect();
    let mut failures = failures;

    // Literal capped searches: exhaustive on short words, sampled beyond.
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 6, 0));
    let mut sampled: Vec<&Word> = Vec::new();
    for word in &zero_class {
        if word.dense_len_u64().unwrap() <= LDF_BFS_EXHAUSTIVE_LEN {
            sampled.push(word);
        }
    }
    let longer: Vec<&&Word> = zero_class
        .iter()
        .filter(|word| word.dense_len_u64().unwrap() > LDF_BFS_EXHAUSTIVE_LEN)
        .collect();
    for _ in 0..LDF_BFS_SAMPLES {
        if longer.is_empty() {
            break;
        }
        sampled.push(longer[rng.gen_range(0..longer.len())]);
    }
    sampled.sort();
    sampled.dedup();
    let bfs_count = sampled.len();
    let bfs_failures: Vec<String> = sampled
        .par_iter()
        .flat_map_iter(|word| {
            let mut local = Vec::new();
            let len = word.dense_len_u64().unwrap();
            let bound = (6 * len) as u32;
            let cap = 3 * len + 4;
            match capped_distance(r, word, &w("0"), cap, bound) {
                Ok(res) => match res.distance {
                    Some(d) if d <= bound => {}
                    other => local.push(format!(
                        "{word}: capped distance {other:?} not within 6|w| = {bound}"
                    )),
                },
                Err(e) => local.push(format!("{word}: {e}")),
            }
            local.into_iter()
        })
        .collect();
    failures.extend(bfs_failures);

    Ok(SuiteReport::from_failures(
        SuiteId::LdfCase1,
        format!(
            "{} zero-class words: strategy length <= 6|w|, witnesses within cap 3|w|+4; \
             {bfs_count} literal searches confirm",
            zero_class.len()
        ),
        failures,
    ))
}

// -------------------------------------------------------- suite: ldf-case2

fn suite_ldf_case2() -> Result<SuiteReport> {
    let t = builtin(SystemId::T);
    let u_sys = builtin(SystemId::U);
    let table = nf_table(u_sys, (CASE2_PAIR_SUM - 1) as u32)?;
    let mut groups: HashMap<&Word, Vec<&Word>> = HashMap::new();
    for (word, nf) in &table {
        groups.entry(nf).or_default().push(word);
    }
    let mut pairs: Vec<(&Word, &Word)> = Vec::new();
    for members in groups.values_mut() {
        members.sort();
        for (i, u_w) in members.iter().enumerate() {
            for v_w in &members[i + 1..] {
                let sum = u_w.dense_len_u64().unwrap() + v_w.dense_len_u64().unwrap();
                if sum <= CASE2_PAIR_SUM {
                    pairs.push((u_w, v_w));
                }
            }
        }
    }
    pairs.sort();
    let count = pairs.len();
    let failures: Vec<String> = pairs
        .into_par_iter()
        .flat_map_iter(|(u_w, v_w)| {
            let mut local = Vec::new();
            let lu = u_w.dense_len_u64().unwrap();
            let lv = v_w.dense_len_u64().unwrap();
            let bound = (lu + lv) as u32;
            let cap = 3 * lu.max(lv) + 4;
            match capped_distance(t, u_w, v_w, cap, bound) {
                Ok(res) => match res.distance {
                    Some(d) if d <= bound => {}
                    other => local.push(format!(
                        "d_T({u_w}, {v_w}) = {other:?} not within |u|+|v| = {bound}"
                    )),
                },
                Err(e) => local.push(format!("({u_w}, {v_w}): {e}")),
            }
            local.into_iter()
        })
        .collect();
    Ok(SuiteReport::from_failures(
        SuiteId::LdfCase2,
        format!("{count} equivalent pairs over {{a,b,c}} satisfy d_T(u,v) <= |u|+|v|"),
        failures,
    ))
}

// ------------------------------------------------------- suite: left-cancel

fn suite_left_cancel() -> Result<SuiteReport> {
    let u_sys = builtin(SystemId::U);
    let table = nf_table(u_sys, LEFT_CANCEL_LEN + 1)?;
    let words = dense_words_up_to(&u_sys.alphabet, LEFT_CANCEL_LEN);
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for x in u_sys.alphabet.symbols() {
        let prefix = Word::from_dense([*x]);
        for u_w in &words {
            let xu_nf = &table[&prefix.concat(u_w)];
            for v_w in &words {
                checked += 1;
                let xv_nf = &table[&prefix.concat(v_w)];
                if xu_nf == xv_nf && table[u_w] != table[v_w] {
                    failures.push(format!("x={x}, u={u_w}, v={v_w}: cancellation fails"));
                }
            }
        }
    }
    // Exercise the checking operation itself on a spread of triples.
    for (i, u_w) in words.iter().step_by(97).enumerate() {
        let v_w = &words[(i * 131) % words.len()];
        for x in u_sys.alphabet.symbols() {
            if !paper::left_cancel_check(*x, u_w, v_w, STEP_BUDGET)? {
                failures.push(format!("left_cancel_check(x={x}, {u_w}, {v_w}) = false"));
            }
        }
    }
    Ok(SuiteReport::from_failures(
        SuiteId::LeftCancel,
        format!("{checked} triples: nf_U(xu) = nf_U(xv) implies nf_U(u) = nf_U(v)"),
        failures,
    ))
}

// ---------------------------------------------------------- suite: noregcs

fn suite_noregcs() -> Result<SuiteReport> {
    let s = builtin(SystemId::S);
    let zero = w("0");
    let mut failures = Vec::new();

    for q in NOREGCS_QS {
        let word = noregcs_word(q)?;
        if !s.is_irreducible(&word)? {
            failures.push(format!("Q={q}: seed word is reducible"));
        }
        for site in [0usize, 2usize] {
            for delta in NOREGCS_DELTAS {
                let pumped = pump_word(&word, site, &BigUint::from(delta))?;
                let nf = s.normal_form(&pumped, 1 << 20)?;
                if nf != zero {
                    failures.push(format!(
                        "Q={q}: pumping run {site} by {delta} gave {nf}, not 0"
                    ));
                }
            }
        }
    }

    let report = check_cross_section(&r_irreducibles_dfa(), XSECTION_HORIZON)?;
    if report.verdict != XsVerdict::Refuted {
        failures.push("R-irreducibles automaton not refuted".into());
    }
    if !report
        .duplicates
        .iter()
        .any(|(a, b, _)| (*a == zero && *b == w("a^3 c a c")) || (*b == zero && *a == w("a^3 c a c")))
    {
        failures.push("expected duplicate pair (0, a^3 c a c) missing".into());
    }

    let finite = s_irreducibles_dfa(XSECTION_HORIZON)?;
    let finite_report = check_cross_section(&finite, XSECTION_HORIZON)?;
    if finite_report.verdict != XsVerdict::ConsistentWithinHorizon {
        failures.push("finite irreducible-language automaton wrongly refuted".into());
    }

    for q in NOREGCS_QS {
        match pumping_falsifier(&r_irreducibles_dfa(), q, 8)? {
            Some(v) => {
                if v.normal_form != zero {
                    failures.push(format!("Q={q}: violation outside the zero class"));
                }
            }
            None => failures.push(format!("Q={q}: falsifier found no violation")),
        }
    }

    Ok(SuiteReport::from_failures(
        SuiteId::Noregcs,
        format!(
            "seeds irreducible and pump-collapsing for Q in {NOREGCS_QS:?}; R-irreducibles \
             automaton refuted at horizon {XSECTION_HORIZON}"
        ),
        failures,
    ))
}

// ------------------------------------------------------ suite: context-mono

fn suite_context_mono(seed: u64) -> Result<SuiteReport> {
    let r = builtin(SystemId::R);
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 10, 0));
    let syms = r.alphabet.symbols().to_vec();
    let mut failures = Vec::new();
    let mut produced = 0usize;
    while produced < CONTEXT_SAMPLES {
        let lu = rng.gen_range(0..=3usize);
        let u: Word = Word::from_dense((0..lu).map(|_| syms[rng.gen_range(0..syms.len())]));
        let walk_cap = CONTEXT_PAIR_SUM - lu as u64;
        // Random congruence walk from u, keeping |v| <= walk_cap.
        let mut v = u.clone();
        for _ in 0..rng.gen_range(0..=3usize) {
            let ns = crate::dehn::thue_neighbors(r, &v, walk_cap)?;
            if ns.is_empty() {
                break;
            }
            v = ns[rng.gen_range(0..ns.len())].clone();
        }
        if u.dense_len_u64().unwrap() + v.dense_len_u64().unwrap() > CONTEXT_PAIR_SUM {
            continue;
        }
        let lp = rng.gen_range(0..=CONTEXT_FRAME_LEN as usize);
        let lq = rng.gen_range(0..=CONTEXT_FRAME_LEN as usize);
        let p: Word = Word::from_dense((0..lp).map(|_| syms[rng.gen_range(0..syms.len())]));
        let q: Word = Word::from_dense((0..lq).map(|_| syms[rng.gen_range(0..syms.len())]));
        produced += 1;
        let cap = crate::dehn::default_length_cap(&u, &v);
        match check_context_monotonicity(r, &u, &v, &p, &q, cap, 24) {
            Ok(true) => {}
            Ok(false) => failures.push(format!("u={u}, v={v}, p={p}, q={q}: inequality fails")),
            Err(e) => failures.push(format!("u={u}, v={v}, p={p}, q={q}: {e}")),
        }
    }
    Ok(SuiteReport::from_failures(
        SuiteId::ContextMono,
        format!("{CONTEXT_SAMPLES} framed pairs satisfy d(puq, pvq) <= d(u, v)"),
        failures,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    // The full suites run in the acceptance tests; here only the cheap
    // ones are smoke-checked.

    #[test]
    fn f_suite_passes() {
        let report = run_suite(SuiteId::F, 42);
        assert!(report.passed, "{:?}", report.failures);
    }

    #[test]
    fn distacac_suite_passes() {
        let report = run_suite(SuiteId::Distacac, 42);
        assert!(report.passed, "{:?}", report.failures);
    }

    #[test]
    fn suite_names_roundtrip() {
        for id in SuiteId::ALL {
            let parsed: SuiteId = id.name().parse().unwrap();
            assert_eq!(parsed, id);
        }
        assert!("nonsense".parse::<SuiteId>().is_err());
    }
}
