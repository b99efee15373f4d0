//! Run-length encoded words over a finite alphabet.
//!
//! A [`Word`] is a sequence of runs `(symbol, exponent)` with adjacent runs
//! carrying distinct symbols and every exponent nonzero. Exponents are
//! arbitrary-precision, so words like `a^(2^70-2) c a^6 c` are first-class
//! values; dense expansion is only performed on demand and under a cap.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// A single alphabet symbol, one printable character.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Symbol(pub char);

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An ordered finite alphabet; symbol order fixes enumeration order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
}

impl Alphabet {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::InvalidInput(format!(
                    "duplicate symbol '{s}' in alphabet"
                )));
            }
        }
        if symbols.is_empty() {
            return Err(Error::InvalidInput("empty alphabet".into()));
        }
        Ok(Alphabet { symbols })
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.symbols.contains(&s)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// A run-length encoded word.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    runs: Vec<(Symbol, BigUint)>,
}

impl Word {
    pub fn empty() -> Self {
        Word { runs: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Builds a word from raw runs, merging adjacent equal symbols and
    /// dropping zero exponents.
    pub fn from_runs<I>(runs: I) -> Self
    where
        I: IntoIterator<Item = (Symbol, BigUint)>,
    {
        let mut w = Word::empty();
        for (s, e) in runs {
            w.push_run(s, e);
        }
        w
    }

    pub fn from_dense<I>(symbols: I) -> Self
    where
        I: IntoIterator<Item = Symbol>,
    {
        let mut w = Word::empty();
        for s in symbols {
            w.push_run(s, BigUint::one());
        }
        w
    }

    pub fn from_str_dense(s: &str) -> Self {
        Word::from_dense(s.chars().map(Symbol))
    }

    /// Appends a run, merging with the last run when symbols coincide.
    pub fn push_run(&mut self, sym: Symbol, exp: BigUint) {
        if exp.is_zero() {
            return;
        }
        if let Some((last, e)) = self.runs.last_mut() {
            if *last == sym {
                *e += exp;
                return;
            }
        }
        self.runs.push((sym, exp));
    }

    pub fn runs(&self) -> &[(Symbol, BigUint)] {
        &self.runs
    }

    pub fn dense_len(&self) -> BigUint {
        self.runs.iter().map(|(_, e)| e).sum()
    }

    pub fn dense_len_u64(&self) -> Option<u64> {
        let mut total: u64 = 0;
        for (_, e) in &self.runs {
            total = total.checked_add(e.to_u64()?)?;
        }
        Some(total)
    }

    pub fn count(&self, sym: Symbol) -> BigUint {
        self.runs
            .iter()
            .filter(|(s, _)| *s == sym)
            .map(|(_, e)| e)
            .sum()
    }

    pub fn contains_symbol(&self, sym: Symbol) -> bool {
        self.runs.iter().any(|(s, _)| *s == sym)
    }

    pub fn symbols_subset_of(&self, alphabet: &Alphabet) -> Result<()> {
        for (s, _) in &self.runs {
            if !alphabet.contains(*s) {
                return Err(Error::UnknownSymbol(s.0));
            }
        }
        Ok(())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for (s, e) in &other.runs {
            w.push_run(*s, e.clone());
        }
        w
    }

    /// The subword in dense coordinates `[from, to)`.
    pub fn slice(&self, from: &BigUint, to: &BigUint) -> Word {
        let mut out = Word::empty();
        if from >= to {
            return out;
        }
        let mut pos = BigUint::zero();
        for (sym, exp) in &self.runs {
            let run_end = &pos + exp;
            if &run_end > from && &pos < to {
                let lo = if &pos > from { pos.clone() } else { from.clone() };
                let hi = if &run_end < to { run_end.clone() } else { to.clone() };
                out.push_run(*sym, hi - lo);
            }
            pos = run_end;
            if &pos >= to {
                break;
            }
        }
        out
    }

    /// Replaces the dense range `[at, at+remove)` with `replacement`.
    pub fn splice(&self, at: &BigUint, remove: &BigUint, replacement: &Word) -> Word {
        let len = self.dense_len();
        let cut_end = at + remove;
        debug_assert!(cut_end <= len);
        let mut out = self.slice(&BigUint::zero(), at);
        for (s, e) in &replacement.runs {
            out.push_run(*s, e.clone());
        }
        let tail = self.slice(&cut_end, &len);
        for (s, e) in tail.runs {
            out.push_run(s, e);
        }
        out
    }

    /// True when `sub` occurs at dense position `at`.
    pub fn matches_at(&self, at: &BigUint, sub: &Word) -> bool {
        if sub.is_empty() {
            return at <= &self.dense_len();
        }
        // Walk to the run containing `at`, then consume `sub` run by run:
        // interior runs must match exactly, the first and last may sit
        // inside longer runs of `self`.
        let mut pos = BigUint::zero();
        let mut idx = 0usize;
        while idx < self.runs.len() {
            let end = &pos + &self.runs[idx].1;
            if &end > at {
                break;
            }
            pos = end;
            idx += 1;
        }
        if idx == self.runs.len() {
            return false;
        }
        let mut avail = (&pos + &self.runs[idx].1) - at; // room left in this run
        for (k, (sym, exp)) in sub.runs.iter().enumerate() {
            if idx >= self.runs.len() || self.runs[idx].0 != *sym {
                return false;
            }
            let last = k + 1 == sub.runs.len();
            if last {
                return *exp <= avail;
            }
            // Interior sub-run must consume the rest of the current run.
            if *exp != avail {
                return false;
            }
            idx += 1;
            if idx < self.runs.len() {
                avail = self.runs[idx].1.clone();
            }
        }
        true
    }

    /// Expands to one character per symbol; errors past `cap`.
    pub fn to_dense_string(&self, cap: u64) -> Result<String> {
        let len = self.dense_len_u64().filter(|l| *l <= cap).ok_or_else(|| {
            Error::DenseCapExceeded {
                len: self.dense_len().to_string(),
                cap,
            }
        })?;
        let mut s = String::with_capacity(len as usize);
        for (sym, e) in &self.runs {
            let e = e.to_u64().unwrap();
            for _ in 0..e {
                s.push(sym.0);
            }
        }
        Ok(s)
    }

    /// Deterministic 64-bit FNV-1a hash of the canonical run encoding.
    /// Stable across runs and platforms, unlike `std` hashers.
    pub fn stable_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |v: u64| {
            for b in v.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        for (sym, exp) in &self.runs {
            eat(sym.0 as u64);
            for digit in exp.iter_u64_digits() {
                eat(digit);
            }
            eat(u64::MAX);
        }
        h
    }

    /// Parses either dense (`aaacac`) or run (`a^3 c a c`) syntax; `ε`
    /// denotes the empty word. Exponents are decimal, or `(2^M)`,
    /// `(2^M+D)`, `(2^M-D)` for values too large to write out.
    pub fn parse(text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::empty());
        }
        let mut w = Word::empty();
        for token in text.split_whitespace() {
            parse_atom_into(token, &mut w, 0)?;
        }
        Ok(w)
    }

    /// Shortlex comparison key helper: walks two words' dense expansions
    /// without materializing them.
    fn lex_cmp(&self, other: &Word) -> Ordering {
        let (mut i, mut j) = (0usize, 0usize);
        let mut ri = BigUint::zero();
        let mut rj = BigUint::zero();
        loop {
            if ri.is_zero() {
                match self.runs.get(i) {
                    Some((_, e)) => {
                        ri = e.clone();
                        i += 1;
                    }
                    None => return if rj.is_zero() && j >= other.runs.len() {
                        Ordering::Equal
                    } else {
                        Ordering::Less
                    },
                }
            }
            if rj.is_zero() {
                match other.runs.get(j) {
                    Some((_, e)) => {
                        rj = e.clone();
                        j += 1;
                    }
                    None => return Ordering::Greater,
                }
            }
            let sa = self.runs[i - 1].0;
            let sb = other.runs[j - 1].0;
            if sa != sb {
                return sa.cmp(&sb);
            }
            let step = ri.clone().min(rj.clone());
            ri -= &step;
            rj -= &step;
        }
    }
}

/// Parses one whitespace-free atom like `ba^nc` minus schema forms: only
/// constant exponents are allowed here. Offsets feed error messages.
fn parse_atom_into(atom: &str, out: &mut Word, line: usize) -> Result<()> {
    let chars: Vec<char> = atom.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let sym = Symbol(chars[i]);
        if chars[i] == '^' || chars[i] == '(' || chars[i] == ')' {
            return Err(Error::Parse {
                line,
                msg: format!("unexpected '{}' in word '{atom}'", chars[i]),
            });
        }
        i += 1;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let (exp, used) = parse_exponent(&chars[i..]).ok_or_else(|| Error::Parse {
                line,
                msg: format!("bad exponent in '{atom}'"),
            })?;
            i += used;
            out.push_run(sym, exp);
        } else {
            out.push_run(sym, BigUint::one());
        }
    }
    Ok(())
}

/// Parses `DIGITS`, `(DIGITS)`, `(2^M)`, `(2^M+D)`, or `(2^M-D)`.
fn parse_exponent(chars: &[char]) -> Option<(BigUint, usize)> {
    if chars.first() == Some(&'(') {
        let close = chars.iter().position(|c| *c == ')')?;
        let inner: String = chars[1..close].iter().collect();
        let v = parse_exponent_inner(&inner)?;
        Some((v, close + 1))
    } else {
        let digits: String = chars.iter().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return None;
        }
        let v = digits.parse::<BigUint>().ok()?;
        Some((v, digits.len()))
    }
}

fn parse_exponent_inner(s: &str) -> Option<BigUint> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("2^") {
        let (m_str, delta) = match (rest.find('+'), rest.find('-')) {
            (Some(p), _) => (&rest[..p], Some(('+', &rest[p + 1..]))),
            (None, Some(p)) => (&rest[..p], Some(('-', &rest[p + 1..]))),
            (None, None) => (rest, None),
        };
        let m = m_str.trim().parse::<u64>().ok()?;
        if m >= crate::MAX_POW2_BITS {
            return None;
        }
        let base = BigUint::one() << (m as usize);
        match delta {
            None => Some(base),
            Some(('+', d)) => Some(base + d.trim().parse::<BigUint>().ok()?),
            Some(('-', d)) => {
                let d = d.trim().parse::<BigUint>().ok()?;
                if d > base {
                    None
                } else {
                    Some(base - d)
                }
            }
            _ => None,
        }
    } else {
        s.parse::<BigUint>().ok()
    }
}

/// Renders an exponent, falling back to `(2^M±D)` when the decimal form
/// would be unreasonably long.
fn format_exponent(e: &BigUint) -> String {
    if e.bits() <= 64 {
        return e.to_string();
    }
    let hi = e.bits(); // 2^(hi-1) <= e < 2^hi
    let pow_hi = BigUint::one() << (hi as usize);
    let down = &pow_hi - e;
    if down.bits() <= 32 {
        return if down.is_zero() {
            format!("(2^{hi})")
        } else {
            format!("(2^{hi}-{down})")
        };
    }
    let pow_lo = BigUint::one() << ((hi - 1) as usize);
    let up = e - &pow_lo;
    if up.bits() <= 32 {
        return if up.is_zero() {
            format!("(2^{})", hi - 1)
        } else {
            format!("(2^{}+{up})", hi - 1)
        };
    }
    e.to_string()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return write!(f, "ε");
        }
        let mut first = true;
        for (sym, exp) in &self.runs {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if exp.is_one() {
                write!(f, "{sym}")?;
            } else {
                write!(f, "{sym}^{}", format_exponent(exp))?;
            }
        }
        Ok(())
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex: shorter words first, ties broken by dense lexicographic order
/// on the symbols' character codes.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dense_len()
            .cmp(&other.dense_len())
            .then_with(|| self.lex_cmp(other))
    }
}

/// All dense words over `alphabet` of length `<= max_len`, in shortlex
/// order. Intended for exhaustive sweeps at desk scale.
pub fn dense_words_up_to(alphabet: &Alphabet, max_len: u32) -> Vec<Word> {
    let syms = alphabet.symbols();
    let mut out = vec![Word::empty()];
    let mut layer: Vec<Vec<Symbol>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * syms.len());
        for prefix in &layer {
            for s in syms {
                let mut v = prefix.clone();
                v.push(*s);
                next.push(v);
            }
        }
        for v in &next {
            out.push(Word::from_dense(v.iter().copied()));
        }
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn rle_normalization_merges_and_drops() {
        let word = Word::from_runs(vec![
            (Symbol('a'), 2u32.into()),
            (Symbol('a'), 1u32.into()),
            (Symbol('b'), 0u32.into()),
            (Symbol('c'), 1u32.into()),
        ]);
        assert_eq!(word.runs().len(), 2);
        assert_eq!(word.to_dense_string(10).unwrap(), "aaac");
    }

    #[test]
    fn parse_roundtrip_both_syntaxes() {
        assert_eq!(w("aaacac"), w("a^3 c a c"));
        assert_eq!(w("a^3 c a c").to_string(), "a^3 c a c");
        assert_eq!(w("").to_string(), "ε");
        assert_eq!(w("ε"), Word::empty());
        assert_eq!(w("ba^3c").to_dense_string(10).unwrap(), "baaac");
    }

    #[test]
    fn parse_huge_exponent_forms() {
        let v = w("a^(2^70-2)");
        assert_eq!(v.dense_len(), (BigUint::one() << 70usize) - 2u32);
        let shown = v.to_string();
        assert_eq!(Word::parse(&shown).unwrap(), v);
    }

    #[test]
    fn slice_and_splice() {
        let word = w("a^5 c a^2 c");
        assert_eq!(word.slice(&3u32.into(), &7u32.into()), w("a^2 c a"));
        let spliced = word.splice(&5u32.into(), &1u32.into(), &w("bb"));
        assert_eq!(spliced, w("a^5 b^2 a^2 c"));
    }

    #[test]
    fn shortlex_order() {
        let mut v = vec![w("b"), w("aa"), w("a"), w(""), w("ab")];
        v.sort();
        let shown: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(shown, vec!["ε", "a", "b", "a^2", "a b"]);
    }

    #[test]
    fn dense_enumeration_counts() {
        let ab = Alphabet::new(vec![Symbol('a'), Symbol('b')]).unwrap();
        assert_eq!(dense_words_up_to(&ab, 3).len(), 1 + 2 + 4 + 8);
    }

    #[test]
    fn stable_hash_is_stable() {
        // Frozen value: guards against accidental encoding changes that
        // would invalidate recorded derivation hashes.
        assert_eq!(w("acc").stable_hash(), w("a c^2").stable_hash());
        assert_ne!(w("acc").stable_hash(), w("cca").stable_hash());
    }
}
