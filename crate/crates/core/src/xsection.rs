//! DFA-backed cross-section candidates and their falsification.
//!
//! A cross-section must pick exactly one word per congruence class. The
//! checker enumerates accepted words up to a horizon and groups them by
//! `S`-normal form: two accepted words in one class refute the candidate;
//! classes with no accepted representative are reported as unreached but
//! are inconclusive at a finite horizon. The pumping falsifier grows an
//! `a`-run of an irreducible seed word until rewriting collapses the word
//! into the zero class, manufacturing equivalent accepted pairs.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::paper::{builtin, noregcs_word, pump_word, SystemId, SYM_ZERO};
use crate::word::{dense_words_up_to, Alphabet, Symbol, Word};
use crate::{Error, Result};

const NF_BUDGET: usize = 1 << 20;

/// A complete deterministic automaton over a subset of `{a, b, c, 0}`.
#[derive(Clone, Debug)]
pub struct Dfa {
    num_states: usize,
    alphabet: Vec<Symbol>,
    start: usize,
    accepting: BTreeSet<usize>,
    /// `delta[state][symbol index]`
    delta: Vec<Vec<usize>>,
}

impl Dfa {
    pub fn new(
        num_states: usize,
        alphabet: Vec<Symbol>,
        start: usize,
        accepting: BTreeSet<usize>,
        delta: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if num_states == 0 {
            return Err(Error::InvalidDfa("at least one state required".into()));
        }
        for sym in &alphabet {
            if !"abc0".contains(sym.0) {
                return Err(Error::InvalidDfa(format!("symbol '{sym}' outside {{a,b,c,0}}")));
            }
        }
        if start >= num_states {
            return Err(Error::InvalidDfa(format!("start state {start} out of range")));
        }
        for s in &accepting {
            if *s >= num_states {
                return Err(Error::InvalidDfa(format!("accepting state {s} out of range")));
            }
        }
        if delta.len() != num_states {
            return Err(Error::InvalidDfa("transition table size mismatch".into()));
        }
        for (i, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::InvalidDfa(format!(
                    "state {i} lacks a transition on some symbol"
                )));
            }
            for t in row {
                if *t >= num_states {
                    return Err(Error::InvalidDfa(format!("transition target {t} out of range")));
                }
            }
        }
        Ok(Dfa { num_states, alphabet, start, accepting, delta })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    fn sym_index(&self, sym: Symbol) -> Option<usize> {
        self.alphabet.iter().position(|s| *s == sym)
    }

    /// Runs a whole run `sym^exp` from `state`, using the cycle structure
    /// of the per-symbol transition function so huge exponents cost only
    /// arithmetic.
    fn step_run(&self, state: usize, sym: Symbol, exp: &BigUint) -> Option<usize> {
        let si = self.sym_index(sym)?;
        if let Some(e) = exp.to_u64().filter(|e| *e <= self.num_states as u64) {
            let mut s = state;
            for _ in 0..e {
                s = self.delta[s][si];
            }
            return Some(s);
        }
        // Path into a cycle: record visit order until a state repeats.
        let mut order: Vec<usize> = vec![state];
        let mut seen: BTreeMap<usize, usize> = BTreeMap::from([(state, 0)]);
        let mut s = state;
        loop {
            s = self.delta[s][si];
            if let Some(&at) = seen.get(&s) {
                let cycle_start = at as u64;
                let cycle_len = (order.len() - at) as u64;
                let e = exp;
                let idx = if *e < BigUint::from(cycle_start) {
                    e.to_u64().unwrap()
                } else {
                    let rem = ((e - BigUint::from(cycle_start)) % BigUint::from(cycle_len))
                        .to_u64()
                        .unwrap();
                    cycle_start + rem
                };
                return Some(order[idx as usize]);
            }
            seen.insert(s, order.len());
            order.push(s);
        }
    }

    pub fn accepts(&self, word: &Word) -> bool {
        let mut state = self.start;
        for (sym, exp) in word.runs() {
            match self.step_run(state, *sym, exp) {
                Some(next) => state = next,
                None => return false, // symbol outside the DFA alphabet
            }
        }
        self.accepting.contains(&state)
    }

}

/// Parses the DFA file format:
///
/// ```text
/// states: 3
/// start: 0
/// accept: 0 1
/// 0 a 1
/// 0 b 2
/// ...
/// ```
///
/// The alphabet is inferred from the transition lines and every state must
/// be total over it.
pub fn load_dfa(text: &str) -> Result<Dfa> {
    let mut num_states: Option<usize> = None;
    let mut start: Option<usize> = None;
    let mut accepting: BTreeSet<usize> = BTreeSet::new();
    let mut transitions: Vec<(usize, Symbol, usize, usize)> = Vec::new(); // + line no

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let parse_usize = |s: &str| -> Result<usize> {
            s.trim().parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad state index '{s}'"),
            })
        };
        if let Some(rest) = line.strip_prefix("states:") {
            num_states = Some(parse_usize(rest)?);
        } else if let Some(rest) = line.strip_prefix("start:") {
            start = Some(parse_usize(rest)?);
        } else if let Some(rest) = line.strip_prefix("accept:") {
            for tok in rest.split_whitespace() {
                accepting.insert(parse_usize(tok)?);
            }
        } else {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected 'FROM SYMBOL TO', got '{line}'"),
                });
            }
            let from = parse_usize(parts[0])?;
            let sym: Vec<char> = parts[1].chars().collect();
            if sym.len() != 1 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("bad symbol '{}'", parts[1]),
                });
            }
            let to = parse_usize(parts[2])?;
            transitions.push((from, Symbol(sym[0]), to, line_no));
        }
    }

    let num_states = num_states.ok_or(Error::Parse { line: 0, msg: "missing 'states:'".into() })?;
    let start = start.ok_or(Error::Parse { line: 0, msg: "missing 'start:'".into() })?;

    let mut alphabet: Vec<Symbol> = transitions.iter().map(|(_, s, _, _)| *s).collect();
    alphabet.sort();
    alphabet.dedup();

    let mut delta = vec![vec![usize::MAX; alphabet.len()]; num_states];
    for (from, sym, to, line_no) in transitions {
        if from >= num_states || to >= num_states {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("state index out of range in '{from} {sym} {to}'"),
            });
        }
        let si = alphabet.iter().position(|s| *s == sym).unwrap();
        if delta[from][si] != usize::MAX {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("duplicate transition for state {from} on '{sym}'"),
            });
        }
        delta[from][si] = to;
    }
    for (i, row) in delta.iter().enumerate() {
        for (si, t) in row.iter().enumerate() {
            if *t == usize::MAX {
                return Err(Error::InvalidDfa(format!(
                    "state {i} has no transition on '{}'",
                    alphabet[si]
                )));
            }
        }
    }
    Dfa::new(num_states, alphabet, start, accepting, delta)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum XsVerdict {
    Refuted,
    ConsistentWithinHorizon,
}

impl std::fmt::Display for XsVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            XsVerdict::Refuted => write!(f, "refuted"),
            XsVerdict::ConsistentWithinHorizon => write!(f, "consistent-within-horizon"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CrossSectionReport {
    pub horizon: u64,
    /// One pair per offending class: two accepted words with the shared
    /// `S`-normal form.
    pub duplicates: Vec<(Word, Word, Word)>,
    /// `S`-normal forms of length `<= horizon - 2` with no accepted
    /// representative of length `<= horizon`. Inconclusive, not refuting.
    pub unreached: Vec<Word>,
    pub verdict: XsVerdict,
}

/// Groups accepted words of length `<= horizon` by `S`-normal form.
pub fn check_cross_section(dfa: &Dfa, horizon: u64) -> Result<CrossSectionReport> {
    let s = builtin(SystemId::S);
    let dfa_alphabet = Alphabet::new(dfa.alphabet().to_vec())
        .map_err(|_| Error::InvalidDfa("empty DFA alphabet".into()))?;

    let mut classes: BTreeMap<Word, Vec<Word>> = BTreeMap::new();
    for word in dense_words_up_to(&dfa_alphabet, horizon as u32) {
        if dfa.accepts(&word) {
            let nf = s.normal_form(&word, NF_BUDGET)?;
            classes.entry(nf).or_default().push(word);
        }
    }

    let mut duplicates = Vec::new();
    for (nf, members) in &classes {
        if members.len() >= 2 {
            let mut sorted = members.clone();
            sorted.sort();
            duplicates.push((sorted[0].clone(), sorted[1].clone(), nf.clone()));
        }
    }

    let mut unreached = Vec::new();
    if horizon >= 2 {
        for word in dense_words_up_to(&s.alphabet, (horizon - 2) as u32) {
            if s.is_irreducible(&word)? && !classes.contains_key(&word) {
                unreached.push(word);
            }
        }
    }
    unreached.sort();

    let verdict = if duplicates.is_empty() {
        XsVerdict::ConsistentWithinHorizon
    } else {
        XsVerdict::Refuted
    };
    Ok(CrossSectionReport { horizon, duplicates, unreached, verdict })
}

/// Two distinct accepted words in one congruence class.
#[derive(Clone, Debug)]
pub struct Violation {
    pub first: Word,
    pub second: Word,
    pub normal_form: Word,
}

/// Searches for two accepted, equivalent words. Primary attack: pump the
/// `a`-runs of the irreducible seed word for `Q`, whose pumped variants
/// all collapse to `0`; the scan covers per-site pump amounts up to the
/// DFA's cycle length so a cycle, if usable, is crossed. Fallback: group
/// short accepted words by normal form. Every returned pair is
/// re-verified before reporting.
pub fn pumping_falsifier(dfa: &Dfa, q: u32, samples: u32) -> Result<Option<Violation>> {
    if !(1..=3).contains(&q) {
        return Err(Error::InvalidInput(format!("pump parameter Q must be 1..=3, got {q}")));
    }
    let s = builtin(SystemId::S);
    let seed = noregcs_word(q)?;
    let zero = Word::parse("0").unwrap();

    let scan = samples.max(dfa.num_states() as u32 + 1) as u64;
    // Pump sites: the leading a-run and the middle a-run; either collapses
    // the word into the zero class as soon as delta >= 1.
    for site in [0usize, 2usize] {
        let mut found: Vec<Word> = Vec::new();
        for delta in 1..=scan {
            let pumped = pump_word(&seed, site, &BigUint::from(delta))?;
            if dfa.accepts(&pumped) && s.normal_form(&pumped, NF_BUDGET)? == zero {
                found.push(pumped);
                if found.len() == 2 {
                    break;
                }
            }
        }
        if found.len() == 2 {
            return finish_violation(dfa, s, found[0].clone(), found[1].clone());
        }
    }

    // Fallback: scan short accepted words grouped by normal form.
    let dfa_alphabet = Alphabet::new(dfa.alphabet().to_vec())
        .map_err(|_| Error::InvalidDfa("empty DFA alphabet".into()))?;
    let horizon = (8 + q as u64).min(12);
    let mut classes: BTreeMap<Word, Word> = BTreeMap::new();
    for word in dense_words_up_to(&dfa_alphabet, horizon as u32) {
        if !dfa.accepts(&word) {
            continue;
        }
        let nf = s.normal_form(&word, NF_BUDGET)?;
        match classes.get(&nf) {
            Some(first) if *first != word => {
                return finish_violation(dfa, s, first.clone(), word);
            }
            Some(_) => {}
            None => {
                classes.insert(nf, word);
            }
        }
    }
    Ok(None)
}

/// Independent re-check of a candidate violation before it is reported.
fn finish_violation(
    dfa: &Dfa,
    s: &crate::system::RewritingSystem,
    first: Word,
    second: Word,
) -> Result<Option<Violation>> {
    let nf1 = s.normal_form(&first, NF_BUDGET)?;
    let nf2 = s.normal_form(&second, NF_BUDGET)?;
    if first == second || nf1 != nf2 || !dfa.accepts(&first) || !dfa.accepts(&second) {
        return Err(Error::InvalidInput(
            "falsifier produced a pair that fails re-verification".into(),
        ));
    }
    Ok(Some(Violation { first, second, normal_form: nf1 }))
}

/// The quantitative side condition behind choosing the seed size: once
/// `(N+1) (2^(k+1) - 1) >= 2^(2^(Q+1)-1) - 2` forces `k > N`, a block
/// count exceeding the state count is unavoidable. Pure helper for tests
/// and documentation.
pub fn pumping_threshold_holds(n_states: u64, q: u32, k: u64) -> bool {
    let lhs = BigUint::from(n_states + 1)
        * ((BigUint::one() << (k as usize + 1)) - BigUint::one());
    let inner = (1u64 << (q + 1)) - 1;
    let rhs = (BigUint::one() << inner as usize) - BigUint::from(2u32);
    if lhs >= rhs {
        k > n_states
    } else {
        true // antecedent false
    }
}

/// The 7-state automaton of words irreducible under the finite system `R`:
/// words avoiding `ba`, `bc`, `acc`, and any symbol adjacent to `0`
/// (leaving the word `0` itself).
pub fn r_irreducibles_dfa() -> Dfa {
    // States: 0 start, 1 after-a, 2 after-b, 3 after-c, 4 after-ac,
    // 5 the word "0", 6 dead.
    let a = Symbol('a');
    let b = Symbol('b');
    let c = Symbol('c');
    let alphabet = vec![SYM_ZERO, a, b, c]; // sorted: '0' < 'a' < 'b' < 'c'
    let d = 6usize;
    let rows = vec![
        // [0, a, b, c]
        vec![5, 1, 2, 3], // 0: start
        vec![d, 1, 2, 4], // 1: after a
        vec![d, d, 2, d], // 2: after b (ba, bc forbidden)
        vec![d, 1, 2, 3], // 3: after c
        vec![d, 1, 2, d], // 4: after ac (acc forbidden)
        vec![d, d, d, d], // 5: exactly "0"
        vec![d, d, d, d], // 6: dead
    ];
    Dfa::new(7, alphabet, 0, BTreeSet::from([0, 1, 2, 3, 4, 5]), rows).unwrap()
}

/// Trie automaton accepting exactly the `S`-irreducible words of length
/// `<= max_len`: a finite language, so trivially one word per class.
pub fn s_irreducibles_dfa(max_len: u64) -> Result<Dfa> {
    let s = builtin(SystemId::S);
    let mut words: Vec<Word> = Vec::new();
    for word in dense_words_up_to(&s.alphabet, max_len as u32) {
        if s.is_irreducible(&word)? {
            words.push(word);
        }
    }
    // Irreducible words are subword-closed, so the accepted set is
    // prefix-closed and the trie states are exactly the words themselves.
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut dense: Vec<String> = Vec::new();
    for word in &words {
        let key = word.to_dense_string(max_len).unwrap();
        index.insert(key.clone(), dense.len());
        dense.push(key);
    }
    let alphabet: Vec<Symbol> = s.alphabet.symbols().to_vec();
    let dead = dense.len();
    let mut delta = vec![vec![dead; alphabet.len()]; dense.len() + 1];
    for (i, key) in dense.iter().enumerate() {
        for (si, sym) in alphabet.iter().enumerate() {
            let mut next = key.clone();
            next.push(sym.0);
            if let Some(&j) = index.get(&next) {
                delta[i][si] = j;
            }
        }
    }
    let accepting: BTreeSet<usize> = (0..dense.len()).collect();
    let start = index[""];
    Dfa::new(dense.len() + 1, alphabet, start, accepting, delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    const SMALL_DFA: &str = "\
# accepts words with an even number of a's
states: 2
start: 0
accept: 0
0 a 1
1 a 0
0 b 0
1 b 1
";

    #[test]
    fn load_and_run_small_dfa() {
        let dfa = load_dfa(SMALL_DFA).unwrap();
        assert!(dfa.accepts(&w("aa")));
        assert!(!dfa.accepts(&w("ab")));
        assert!(dfa.accepts(&w("a^100 b")));
        assert!(!dfa.accepts(&w("a^(2^70-1)")));
        assert!(dfa.accepts(&w("a^(2^70)")));
    }

    #[test]
    fn load_rejects_partial_transition_table() {
        let text = "states: 2\nstart: 0\naccept: 0\n0 a 1\n0 0 0\n1 a 0\n";
        let err = load_dfa(text).unwrap_err();
        assert!(err.to_string().contains("no transition on '0'"), "{err}");
    }

    #[test]
    fn load_rejects_bad_state_index() {
        let text = "states: 2\nstart: 0\naccept: 0\n0 a 5\n1 a 0\n";
        assert!(load_dfa(text).is_err());
    }

    #[test]
    fn trivial_all_accepting_dfa_is_valid() {
        let alphabet = vec![SYM_ZERO, Symbol('a'), Symbol('b'), Symbol('c')];
        let dfa = Dfa::new(1, alphabet, 0, BTreeSet::from([0]), vec![vec![0, 0, 0, 0]]).unwrap();
        assert!(dfa.accepts(&w("abc0")));
    }

    #[test]
    fn r_irreducibles_dfa_membership() {
        let dfa = r_irreducibles_dfa();
        for good in ["", "0", "a^3 c a c", "ab", "c^5", "a^4 c a c a"] {
            assert!(dfa.accepts(&w(good)), "{good} should be accepted");
        }
        for bad in ["ba", "bc", "acc", "a0", "00", "0a", "cba"] {
            assert!(!dfa.accepts(&w(bad)), "{bad} should be rejected");
        }
    }

    #[test]
    fn r_irreducibles_refuted_at_horizon_6() {
        let report = check_cross_section(&r_irreducibles_dfa(), 6).unwrap();
        assert_eq!(report.verdict, XsVerdict::Refuted);
        assert!(report
            .duplicates
            .iter()
            .any(|(a, b, nf)| *a == w("0") && *b == w("a^3 c a c") && *nf == w("0")));
    }

    #[test]
    fn s_irreducibles_consistent_at_horizon() {
        let dfa = s_irreducibles_dfa(6).unwrap();
        let report = check_cross_section(&dfa, 6).unwrap();
        assert_eq!(report.verdict, XsVerdict::ConsistentWithinHorizon);
        assert!(report.duplicates.is_empty());
    }

    #[test]
    fn empty_language_reports_unreached() {
        let alphabet = vec![SYM_ZERO, Symbol('a'), Symbol('b'), Symbol('c')];
        let dfa =
            Dfa::new(1, alphabet, 0, BTreeSet::new(), vec![vec![0, 0, 0, 0]]).unwrap();
        let report = check_cross_section(&dfa, 4).unwrap();
        assert_eq!(report.verdict, XsVerdict::ConsistentWithinHorizon);
        assert!(report.unreached.contains(&Word::empty()));
        assert!(report.unreached.contains(&w("a")));
    }

    #[test]
    fn falsifier_beats_r_irreducibles() {
        let violation = pumping_falsifier(&r_irreducibles_dfa(), 1, 8).unwrap().unwrap();
        let s = builtin(SystemId::S);
        assert_ne!(violation.first, violation.second);
        assert_eq!(violation.normal_form, w("0"));
        assert_eq!(s.normal_form(&violation.first, 4096).unwrap(), w("0"));
        assert_eq!(s.normal_form(&violation.second, 4096).unwrap(), w("0"));
    }

    #[test]
    fn falsifier_fallback_on_zero_only_language() {
        // Accepts exactly the words containing 0.
        let alphabet = vec![SYM_ZERO, Symbol('a'), Symbol('b'), Symbol('c')];
        let dfa = Dfa::new(
            2,
            alphabet,
            0,
            BTreeSet::from([1]),
            vec![vec![1, 0, 0, 0], vec![1, 1, 1, 1]],
        )
        .unwrap();
        let violation = pumping_falsifier(&dfa, 1, 8).unwrap().unwrap();
        assert_eq!(violation.first, w("0"));
        assert_eq!(violation.second, w("00"));
    }

    #[test]
    fn falsifier_none_on_singleton_zero_class() {
        // Accepts exactly {"0"}.
        let alphabet = vec![SYM_ZERO, Symbol('a'), Symbol('b'), Symbol('c')];
        let dfa = Dfa::new(
            3,
            alphabet,
            0,
            BTreeSet::from([1]),
            vec![vec![1, 2, 2, 2], vec![2, 2, 2, 2], vec![2, 2, 2, 2]],
        )
        .unwrap();
        assert!(pumping_falsifier(&dfa, 1, 8).unwrap().is_none());
    }

    #[test]
    fn threshold_helper() {
        // For the 7-state automaton, Q = 3 satisfies the implication for
        // every k up to a generous bound.
        for k in 0..=64 {
            assert!(pumping_threshold_holds(7, 3, k), "k={k}");
        }
        // At Q = 1 the antecedent holds already for small k <= N, so the
        // implication genuinely fails there.
        assert!(!pumping_threshold_holds(7, 1, 3));
    }
}
