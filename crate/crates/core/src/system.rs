//! Rewriting systems: finite rules plus parameterized rule schemas.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::expr::ExponentExpr;
use crate::word::{Alphabet, Symbol, Word};
use crate::{Error, Result};

/// How many schema instances are materialized eagerly. Matching for larger
/// parameters falls back to exact equation solving on run lengths; the
/// window is wide enough that every supported exponent expression is
/// nondecreasing beyond it.
pub const SCHEMA_CACHE_WINDOW: u64 = 192;

/// Default parameter bound for reverse-direction schema searches, where a
/// constant right-hand side (like `0`) would otherwise match infinitely
/// many instances.
pub const DEFAULT_REVERSE_PARAM_CAP: u64 = 64;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule {
    pub id: String,
    pub lhs: Word,
    pub rhs: Word,
}

impl Rule {
    pub fn new(id: impl Into<String>, lhs: Word, rhs: Word) -> Result<Self> {
        if lhs.is_empty() {
            return Err(Error::InvalidInput("rule with empty left-hand side".into()));
        }
        Ok(Rule { id: id.into(), lhs, rhs })
    }
}

/// One eagerly instantiated schema rule.
#[derive(Clone, Debug)]
pub struct SchemaInstance {
    pub n: BigUint,
    pub rule: Rule,
    pub lhs_len: BigUint,
    pub rhs_len: BigUint,
}

/// A rule family `lhs(n) -> rhs(n)` for `n >= n_min`, with run exponents
/// drawn from the supported expression grammar.
#[derive(Clone, Debug)]
pub struct RuleSchema {
    pub id: String,
    pub lhs_pattern: Vec<(Symbol, ExponentExpr)>,
    pub rhs_pattern: Vec<(Symbol, ExponentExpr)>,
    pub n_min: u64,
    cache: Vec<SchemaInstance>,
    /// Left-hand side lengths of the cached instances, saturated to u64;
    /// a flat table so redex searches can skip non-fitting instances fast.
    cache_lhs_lens: Vec<u64>,
    /// Smallest left-hand side length of any instance beyond the cache
    /// window (saturated): words shorter than this cannot host one.
    generic_min_lhs_len: u64,
    /// Left-hand pattern with constant-zero runs removed: the run structure
    /// every instance beyond the cache window has.
    generic_shape: Vec<(Symbol, ExponentExpr)>,
    /// Whether some interior run of the generic shape references `n`, which
    /// is what lets run arithmetic pin the parameter exactly for instances
    /// beyond the cache window.
    interior_pinned: bool,
}

impl RuleSchema {
    pub fn new(
        id: impl Into<String>,
        lhs_pattern: Vec<(Symbol, ExponentExpr)>,
        rhs_pattern: Vec<(Symbol, ExponentExpr)>,
        n_min: u64,
    ) -> Result<Self> {
        let id = id.into();
        if lhs_pattern.is_empty() {
            return Err(Error::InvalidInput(format!("schema {id}: empty lhs pattern")));
        }
        for (_, e) in lhs_pattern.iter().chain(rhs_pattern.iter()) {
            e.validate_domain(n_min)?;
        }
        if lhs_pattern.iter().all(|(_, e)| e.is_constant())
            && rhs_pattern.iter().all(|(_, e)| e.is_constant())
        {
            return Err(Error::InvalidInput(format!(
                "schema {id}: no exponent references n, distinct n would repeat the same rule"
            )));
        }
        // The generic shape drops runs that are identically zero; the rest
        // must be >= 1 at the top of the cache window and stay there
        // (expressions are nondecreasing beyond it by domain validation).
        let mut generic_shape: Vec<(Symbol, ExponentExpr)> = Vec::new();
        for (sym, e) in &lhs_pattern {
            let const_zero =
                e.is_constant() && e.eval(&BigUint::from(n_min))?.to_u64() == Some(0);
            if const_zero {
                continue;
            }
            for probe in [SCHEMA_CACHE_WINDOW - 64, SCHEMA_CACHE_WINDOW] {
                if e.eval(&BigUint::from(n_min + probe))? == BigUint::from(0u32) {
                    return Err(Error::InvalidInput(format!(
                        "schema {id}: run exponent {e} vanishes at large n; \
                         exact matching beyond the instance cache is unsupported"
                    )));
                }
            }
            if let Some((prev, _)) = generic_shape.last() {
                if *prev == *sym {
                    return Err(Error::InvalidInput(format!(
                        "schema {id}: adjacent runs merge once zero runs drop out"
                    )));
                }
            }
            generic_shape.push((*sym, *e));
        }
        let k = generic_shape.len();
        let interior_pinned =
            k >= 3 && generic_shape[1..k - 1].iter().any(|(_, e)| e.references_n());

        let mut schema = RuleSchema {
            id,
            lhs_pattern,
            rhs_pattern,
            n_min,
            cache: Vec::new(),
            cache_lhs_lens: Vec::new(),
            generic_min_lhs_len: u64::MAX,
            generic_shape,
            interior_pinned,
        };
        let mut cache = Vec::with_capacity(SCHEMA_CACHE_WINDOW as usize + 1);
        for off in 0..=SCHEMA_CACHE_WINDOW {
            let n = BigUint::from(schema.n_min + off);
            let inst = schema.instance(&n)?;
            if inst.rule.lhs.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "schema {}: lhs instantiates empty at n={n}",
                    schema.id
                )));
            }
            cache.push(inst);
        }
        // Distinct parameters must give distinct left-hand sides.
        for pair in cache.windows(2) {
            if pair[0].rule.lhs == pair[1].rule.lhs {
                return Err(Error::InvalidInput(format!(
                    "schema {}: n={} and n={} share a left-hand side",
                    schema.id, pair[0].n, pair[1].n
                )));
            }
        }
        schema.cache_lhs_lens = cache
            .iter()
            .map(|i| i.lhs_len.to_u64().unwrap_or(u64::MAX))
            .collect();
        // Exponents are nondecreasing beyond the window, so the first
        // instance past it has the smallest length of the rest.
        schema.generic_min_lhs_len = schema
            .instance(&BigUint::from(n_min + SCHEMA_CACHE_WINDOW + 1))
            .map(|i| i.lhs_len.to_u64().unwrap_or(u64::MAX))
            .unwrap_or(u64::MAX);
        schema.cache = cache;
        Ok(schema)
    }

    /// Length table aligned with [`cached_instances`](Self::cached_instances).
    pub fn cached_lhs_len(&self, idx: usize) -> u64 {
        self.cache_lhs_lens[idx]
    }

    /// Smallest left-hand side length past the cache window.
    pub fn generic_min_lhs_len(&self) -> u64 {
        self.generic_min_lhs_len
    }

    /// Cache lookup by parameter.
    pub fn cached_instance(&self, n: &BigUint) -> Option<&SchemaInstance> {
        let n = n.to_u64()?;
        let idx = n.checked_sub(self.n_min)?;
        self.cache.get(idx as usize)
    }

    pub fn generic_shape(&self) -> &[(Symbol, ExponentExpr)] {
        &self.generic_shape
    }

    pub fn interior_pinned(&self) -> bool {
        self.interior_pinned
    }

    pub fn instance(&self, n: &BigUint) -> Result<SchemaInstance> {
        let build = |pattern: &[(Symbol, ExponentExpr)]| -> Result<Word> {
            let mut w = Word::empty();
            for (sym, e) in pattern {
                w.push_run(*sym, e.eval(n)?);
            }
            Ok(w)
        };
        let lhs = build(&self.lhs_pattern)?;
        let rhs = build(&self.rhs_pattern)?;
        let (lhs_len, rhs_len) = (lhs.dense_len(), rhs.dense_len());
        Ok(SchemaInstance {
            n: n.clone(),
            rule: Rule { id: self.id.clone(), lhs, rhs },
            lhs_len,
            rhs_len,
        })
    }

    /// The cached instance window `n_min ..= n_min + SCHEMA_CACHE_WINDOW`.
    pub fn cached_instances(&self) -> &[SchemaInstance] {
        &self.cache
    }

    /// Instances with parameter `n_min <= n <= max_param`, extending past
    /// the cache when asked.
    pub fn instances_up_to(&self, max_param: u64) -> Result<Vec<SchemaInstance>> {
        let mut out: Vec<SchemaInstance> = self
            .cache
            .iter()
            .filter(|i| i.n <= BigUint::from(max_param))
            .cloned()
            .collect();
        let mut next = self.n_min + SCHEMA_CACHE_WINDOW + 1;
        while next <= max_param {
            out.push(self.instance(&BigUint::from(next))?);
            next += 1;
        }
        Ok(out)
    }

    /// Instances whose left-hand side fits in `len_bound` dense symbols.
    /// Exponent expressions are nondecreasing beyond the cache window, so
    /// the scan stops once the left-hand side outgrows the bound.
    pub fn instances_with_lhs_len_at_most(
        &self,
        len_bound: &BigUint,
        hard_cap: u64,
    ) -> Vec<SchemaInstance> {
        let mut out: Vec<SchemaInstance> = self
            .cache
            .iter()
            .filter(|i| &i.lhs_len <= len_bound)
            .cloned()
            .collect();
        let mut off = SCHEMA_CACHE_WINDOW + 1;
        while off <= hard_cap {
            match self.instance(&BigUint::from(self.n_min + off)) {
                Ok(inst) => {
                    if &inst.lhs_len > len_bound {
                        break;
                    }
                    out.push(inst);
                }
                Err(_) => break,
            }
            off += 1;
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct RewritingSystem {
    pub alphabet: Alphabet,
    pub finite_rules: Vec<Rule>,
    pub schemas: Vec<RuleSchema>,
}

impl RewritingSystem {
    pub fn new(
        alphabet: Alphabet,
        finite_rules: Vec<Rule>,
        schemas: Vec<RuleSchema>,
    ) -> Result<Self> {
        let mut ids: Vec<&str> = Vec::new();
        for id in finite_rules
            .iter()
            .map(|r| r.id.as_str())
            .chain(schemas.iter().map(|s| s.id.as_str()))
        {
            if ids.contains(&id) {
                return Err(Error::InvalidInput(format!("duplicate rule id '{id}'")));
            }
            ids.push(id);
        }
        for r in &finite_rules {
            r.lhs.symbols_subset_of(&alphabet)?;
            r.rhs.symbols_subset_of(&alphabet)?;
        }
        for s in &schemas {
            for (sym, _) in s.lhs_pattern.iter().chain(s.rhs_pattern.iter()) {
                if !alphabet.contains(*sym) {
                    return Err(Error::UnknownSymbol(sym.0));
                }
            }
        }
        Ok(RewritingSystem { alphabet, finite_rules, schemas })
    }

    pub fn finite_rule(&self, id: &str) -> Option<&Rule> {
        self.finite_rules.iter().find(|r| r.id == id)
    }

    pub fn schema(&self, id: &str) -> Option<&RuleSchema> {
        self.schemas.iter().find(|s| s.id == id)
    }

    pub fn rule_count(&self) -> usize {
        self.finite_rules.len()
    }

    /// Structural equality up to rule ids and ordering; used to recognize
    /// builtin systems behind user-supplied files.
    pub fn same_rules_as(&self, other: &RewritingSystem) -> bool {
        if self.alphabet != other.alphabet {
            return false;
        }
        let key = |sys: &RewritingSystem| {
            let mut finite: Vec<(Word, Word)> = sys
                .finite_rules
                .iter()
                .map(|r| (r.lhs.clone(), r.rhs.clone()))
                .collect();
            finite.sort();
            finite.dedup();
            let mut schemas: Vec<(Vec<(Symbol, ExponentExpr)>, Vec<(Symbol, ExponentExpr)>, u64)> =
                sys.schemas
                    .iter()
                    .map(|s| (s.lhs_pattern.clone(), s.rhs_pattern.clone(), s.n_min))
                    .collect();
            schemas.sort_by_key(|(l, _, _)| format!("{l:?}"));
            (finite, schemas)
        };
        key(self) == key(other)
    }
}

/// Parses the line-based system file format:
///
/// ```text
/// # comment
/// alphabet: a b c 0
/// ba -> aab
/// a^(2^(n+1)-1) c a^n c -> 0 for n>=0
/// ```
///
/// Rule ids are derived from the left-hand side: the dense uppercase string
/// for finite rules (`ba` becomes `BA`), one uppercase letter per run for
/// schemas (`ACAC`, `BAC`).
pub fn parse_system(text: &str) -> Result<RewritingSystem> {
    let mut alphabet: Option<Alphabet> = None;
    let mut finite_rules: Vec<Rule> = Vec::new();
    let mut schemas: Vec<RuleSchema> = Vec::new();

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
        if let Some(rest) = line.strip_prefix("alphabet:") {
            if alphabet.is_some() {
                return Err(Error::Parse { line: line_no, msg: "duplicate alphabet line".into() });
            }
            let mut syms = Vec::new();
            for tok in rest.split_whitespace() {
                let mut chars = tok.chars();
                let c = chars.next().ok_or(Error::Parse {
                    line: line_no,
                    msg: "empty alphabet entry".into(),
                })?;
                if chars.next().is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("alphabet symbol '{tok}' is not a single character"),
                    });
                }
                syms.push(Symbol(c));
            }
            alphabet = Some(Alphabet::new(syms).map_err(|e| Error::Parse {
                line: line_no,
                msg: e.to_string(),
            })?);
            continue;
        }
        let alphabet = alphabet.as_ref().ok_or(Error::Parse {
            line: line_no,
            msg: "rule before alphabet line".into(),
        })?;
        parse_rule_line(line, line_no, alphabet, &mut finite_rules, &mut schemas)?;
    }

    let alphabet = alphabet.ok_or(Error::Parse { line: 0, msg: "missing alphabet line".into() })?;
    RewritingSystem::new(alphabet, finite_rules, schemas)
}

fn parse_rule_line(
    line: &str,
    line_no: usize,
    alphabet: &Alphabet,
    finite_rules: &mut Vec<Rule>,
    schemas: &mut Vec<RuleSchema>,
) -> Result<()> {
    let (body, domain) = match line.rfind(" for ") {
        Some(p) => (&line[..p], Some(line[p + 5..].trim())),
        None => (line, None),
    };
    let (lhs_src, rhs_src) = body.split_once("->").ok_or(Error::Parse {
        line: line_no,
        msg: "missing '->'".into(),
    })?;
    let lhs = parse_pattern(lhs_src, alphabet, line_no)?;
    let rhs = parse_pattern(rhs_src, alphabet, line_no)?;
    if lhs.is_empty() {
        return Err(Error::Parse { line: line_no, msg: "empty left-hand side".into() });
    }

    match domain {
        None => {
            let uses_n = lhs.iter().chain(rhs.iter()).any(|(_, e)| e.references_n());
            if uses_n {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "exponent references n but the line has no 'for n>=K' clause".into(),
                });
            }
            let build = |pat: &[(Symbol, ExponentExpr)]| -> Result<Word> {
                let mut w = Word::empty();
                for (s, e) in pat {
                    w.push_run(*s, e.eval(&BigUint::from(0u32))?);
                }
                Ok(w)
            };
            let lhs = build(&lhs)?;
            let rhs = build(&rhs)?;
            let id = finite_rule_id(&lhs).map_err(|e| Error::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;
            if finite_rules.iter().any(|r| r.id == id) {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("duplicate rule id '{id}'"),
                });
            }
            finite_rules.push(Rule::new(id, lhs, rhs)?);
        }
        Some(dom) => {
            let n_min = parse_domain(dom).ok_or(Error::Parse {
                line: line_no,
                msg: format!("bad domain clause 'for {dom}' (expected 'for n>=K')"),
            })?;
            let id: String = lhs.iter().map(|(s, _)| s.0.to_ascii_uppercase()).collect();
            if schemas.iter().any(|s| s.id == id) {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("duplicate schema id '{id}'"),
                });
            }
            let schema = RuleSchema::new(id, lhs, rhs, n_min).map_err(|e| Error::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;
            schemas.push(schema);
        }
    }
    Ok(())
}

fn parse_domain(dom: &str) -> Option<u64> {
    let rest = dom.trim().strip_prefix("n>=").or_else(|| dom.trim().strip_prefix("n >="))?;
    rest.trim().parse::<u64>().ok()
}

fn finite_rule_id(lhs: &Word) -> Result<String> {
    match lhs.to_dense_string(12) {
        Ok(s) => Ok(s.to_ascii_uppercase()),
        Err(_) => Ok(lhs
            .runs()
            .iter()
            .map(|(s, _)| s.0.to_ascii_uppercase())
            .collect::<String>()),
    }
}

/// Parses one rule side into `(symbol, exponent expression)` runs.
fn parse_pattern(
    src: &str,
    alphabet: &Alphabet,
    line_no: usize,
) -> Result<Vec<(Symbol, ExponentExpr)>> {
    let mut out: Vec<(Symbol, ExponentExpr)> = Vec::new();
    for atom in src.split_whitespace() {
        let chars: Vec<char> = atom.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if !alphabet.contains(Symbol(c)) {
                return Err(Error::Parse {
                    line: line_no,
                    msg: Error::UnknownSymbol(c).to_string(),
                });
            }
            i += 1;
            let expr = if i < chars.len() && chars[i] == '^' {
                i += 1;
                let (src, used) = take_exponent_src(&chars[i..]).ok_or(Error::Parse {
                    line: line_no,
                    msg: format!("bad exponent in '{atom}'"),
                })?;
                i += used;
                ExponentExpr::parse(&src).map_err(|e| Error::Parse {
                    line: line_no,
                    msg: e.to_string(),
                })?
            } else {
                ExponentExpr::constant(1)
            };
            out.push((Symbol(c), expr));
        }
    }
    Ok(out)
}

/// Grabs the exponent source after `^`: digits, `n`, or a balanced
/// parenthesized expression.
fn take_exponent_src(chars: &[char]) -> Option<(String, usize)> {
    match chars.first()? {
        '(' => {
            let mut depth = 0usize;
            for (i, c) in chars.iter().enumerate() {
                match c {
                    '(' => depth += 1,
                    ')' => {
                        depth -= 1;
                        if depth == 0 {
                            let inner: String = chars[1..i].iter().collect();
                            return Some((inner, i + 1));
                        }
                    }
                    _ => {}
                }
            }
            None
        }
        'n' => Some(("n".into(), 1)),
        c if c.is_ascii_digit() => {
            let digits: String = chars.iter().take_while(|c| c.is_ascii_digit()).collect();
            let len = digits.len();
            Some((digits, len))
        }
        _ => None,
    }
}

/// Convenience for tests and builtins: instances of every schema with
/// parameter at most `max_param`, paired with the finite rules.
pub fn all_rule_instances(
    sys: &RewritingSystem,
    max_param: u64,
) -> Result<Vec<(Rule, Option<BigUint>)>> {
    let mut out: Vec<(Rule, Option<BigUint>)> = sys
        .finite_rules
        .iter()
        .map(|r| (r.clone(), None))
        .collect();
    for schema in &sys.schemas {
        for inst in schema.instances_up_to(max_param)? {
            out.push((inst.rule, Some(inst.n)));
        }
    }
    Ok(out)
}

/// Schema parameters may exceed `u64` in redexes found by exact matching;
/// this helper formats an instance label like `ACAC(3)`.
pub fn instance_label(rule_id: &str, param: Option<&BigUint>) -> String {
    match param {
        Some(n) if n.to_u64().is_some() => format!("{rule_id}({n})"),
        Some(n) => format!("{rule_id}(n={n})"),
        None => rule_id.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const S_TEXT: &str = "\
# system with one schema
alphabet: a b c 0
ba -> aab
bc -> aca
a^(2^(n+1)-1) c a^n c -> 0 for n>=0
";

    #[test]
    fn parses_rules_and_schema() {
        let sys = parse_system(S_TEXT).unwrap();
        assert_eq!(sys.finite_rules.len(), 2);
        assert_eq!(sys.finite_rules[0].id, "BA");
        assert_eq!(sys.finite_rules[0].rhs, Word::parse("a^2 b").unwrap());
        assert_eq!(sys.schemas.len(), 1);
        let acac = &sys.schemas[0];
        assert_eq!(acac.id, "ACAC");
        let inst0 = acac.instance(&BigUint::from(0u32)).unwrap();
        assert_eq!(inst0.rule.lhs, Word::parse("acc").unwrap());
        let inst2 = acac.instance(&BigUint::from(2u32)).unwrap();
        assert_eq!(inst2.rule.lhs, Word::parse("a^7 c a^2 c").unwrap());
    }

    #[test]
    fn empty_rule_body_allowed() {
        let sys = parse_system("alphabet: a b c 0\n").unwrap();
        assert!(sys.finite_rules.is_empty());
        assert!(sys.schemas.is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_system("alphabet: a b\nba => ab\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        let err = parse_system("alphabet: a b\nbx -> a\n").unwrap_err();
        assert!(err.to_string().contains('x'));
    }

    #[test]
    fn schema_requires_domain_clause() {
        let err = parse_system("alphabet: a b\na^n -> b\n").unwrap_err();
        assert!(err.to_string().contains("n>="), "{err}");
    }

    #[test]
    fn mixed_atom_syntax() {
        let sys = parse_system("alphabet: a b c\nba^nc -> a^(2n+1)ca for n>=0\n").unwrap();
        let bac = &sys.schemas[0];
        assert_eq!(bac.id, "BAC");
        let inst = bac.instance(&BigUint::from(0u32)).unwrap();
        assert_eq!(inst.rule.lhs, Word::parse("bc").unwrap());
        assert_eq!(inst.rule.rhs, Word::parse("aca").unwrap());
    }
}
