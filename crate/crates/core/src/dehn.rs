//! Capped Thue-distance search and Dehn-function profiling.
//!
//! The distance `d(u, v)` counts rule applications in either direction, so
//! the search graph is symmetric: words are nodes, one-step forward or
//! reverse applications are edges. Length caps keep the graph finite and
//! results carry an exactness-within-caps status instead of silently
//! truncating. Search is bidirectional; sweeps that query many words
//! against one fixed target share a precomputed ball around it.

use std::collections::HashMap;

use crate::paper::congruence_delegate;
use crate::rewrite::{Derivation, DerivationBuilder, Redex};
use crate::system::{RewritingSystem, DEFAULT_REVERSE_PARAM_CAP};
use crate::word::{dense_words_up_to, Word};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DistanceStatus {
    Exact,
    NotFoundWithinCaps,
}

impl std::fmt::Display for DistanceStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DistanceStatus::Exact => write!(f, "exact"),
            DistanceStatus::NotFoundWithinCaps => write!(f, "not-found-within-caps"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CappedDistanceResult {
    pub distance: Option<u32>,
    pub status: DistanceStatus,
    pub caps: (u64, u32),
    pub explored: usize,
}

impl CappedDistanceResult {
    fn exact(d: u32, caps: (u64, u32), explored: usize) -> Self {
        CappedDistanceResult {
            distance: Some(d),
            status: DistanceStatus::Exact,
            caps,
            explored,
        }
    }

    fn not_found(caps: (u64, u32), explored: usize) -> Self {
        CappedDistanceResult {
            distance: None,
            status: DistanceStatus::NotFoundWithinCaps,
            caps,
            explored,
        }
    }
}

/// Default length cap from the operand sizes: `3 * max(|u|, |v|) + 4`.
pub fn default_length_cap(u: &Word, v: &Word) -> u64 {
    let lu = u.dense_len_u64().unwrap_or(u64::MAX / 4);
    let lv = v.dense_len_u64().unwrap_or(u64::MAX / 4);
    3 * lu.max(lv) + 4
}

fn fits(word: &Word, length_cap: u64) -> bool {
    word.dense_len_u64().map_or(false, |l| l <= length_cap)
}

/// One-step forward and reverse images of `w`, with their redexes, kept
/// within the length cap. Reverse schema parameters are bounded by the
/// cap: a larger instance cannot produce a word that fits.
fn neighbor_edges(
    sys: &RewritingSystem,
    w: &Word,
    length_cap: u64,
) -> Result<Vec<(Redex, Word)>> {
    let param_cap = DEFAULT_REVERSE_PARAM_CAP.max(length_cap);
    let mut out = Vec::new();
    for redex in sys.find_redexes(w, true, param_cap)? {
        let image = sys.apply_redex(w, &redex)?;
        if fits(&image, length_cap) {
            out.push((redex, image));
        }
    }
    Ok(out)
}

/// All distinct one-step neighbors of `w` within the cap, sorted.
pub fn thue_neighbors(sys: &RewritingSystem, w: &Word, length_cap: u64) -> Result<Vec<Word>> {
    if !fits(w, length_cap) {
        return Err(Error::DenseCapExceeded {
            len: w.dense_len().to_string(),
            cap: length_cap,
        });
    }
    let mut words: Vec<Word> = neighbor_edges(sys, w, length_cap)?
        .into_iter()
        .map(|(_, w)| w)
        .collect();
    words.sort();
    words.dedup();
    Ok(words)
}

struct SearchSide {
    dist: HashMap<Word, u32>,
    frontier: Vec<Word>,
    depth: u32,
    parents: HashMap<Word, (Word, Redex)>,
}

impl SearchSide {
    fn new(seed: &Word) -> Self {
        SearchSide {
            dist: HashMap::from([(seed.clone(), 0)]),
            frontier: vec![seed.clone()],
            depth: 0,
            parents: HashMap::new(),
        }
    }
}

/// Exact-within-caps distance in the symmetric rewrite graph, by
/// bidirectional breadth-first search with the smaller frontier expanding.
pub fn capped_distance(
    sys: &RewritingSystem,
    u: &Word,
    v: &Word,
    length_cap: u64,
    dist_cap: u32,
) -> Result<CappedDistanceResult> {
    Ok(capped_distance_witness(sys, u, v, length_cap, dist_cap, false)?.0)
}

/// As [`capped_distance`], optionally reconstructing a shortest derivation
/// from `u` to `v`.
pub fn capped_distance_witness(
    sys: &RewritingSystem,
    u: &Word,
    v: &Word,
    length_cap: u64,
    dist_cap: u32,
    want_witness: bool,
) -> Result<(CappedDistanceResult, Option<Derivation>)> {
    let caps = (length_cap, dist_cap);
    for side in [u, v] {
        if !fits(side, length_cap) {
            return Err(Error::DenseCapExceeded {
                len: side.dense_len().to_string(),
                cap: length_cap,
            });
        }
    }
    if u == v {
        let d = CappedDistanceResult::exact(0, caps, 1);
        let witness = want_witness.then(|| Derivation {
            start: u.clone(),
            steps: vec![],
            end: v.clone(),
        });
        return Ok((d, witness));
    }

    let mut fwd = SearchSide::new(u);
    let mut bwd = SearchSide::new(v);
    let mut best: Option<(u32, Word)> = None;

    loop {
        if let Some((d, _)) = &best {
            if *d <= fwd.depth + bwd.depth {
                break;
            }
        }
        if fwd.depth + bwd.depth + 1 > dist_cap {
            break;
        }
        let expand_fwd = match (fwd.frontier.is_empty(), bwd.frontier.is_empty()) {
            (true, true) => break,
            (false, true) => true,
            (true, false) => false,
            (false, false) => fwd.frontier.len() <= bwd.frontier.len(),
        };
        let (this, other) = if expand_fwd {
            (&mut fwd, &mut bwd)
        } else {
            (&mut bwd, &mut fwd)
        };
        let depth = this.depth + 1;
        let mut next_frontier = Vec::new();
        for word in std::mem::take(&mut this.frontier) {
            for (redex, image) in neighbor_edges(sys, &word, length_cap)? {
                if this.dist.contains_key(&image) {
                    continue;
                }
                this.dist.insert(image.clone(), depth);
                if want_witness {
                    this.parents.insert(image.clone(), (word.clone(), redex));
                }
                if let Some(other_d) = other.dist.get(&image) {
                    let total = depth + other_d;
                    if best.as_ref().map_or(true, |(b, _)| total < *b) {
                        best = Some((total, image.clone()));
                    }
                }
                next_frontier.push(image);
            }
        }
        this.frontier = next_frontier;
        this.depth = depth;
    }

    let explored = fwd.dist.len() + bwd.dist.len();
    match best {
        Some((d, meet)) if d <= dist_cap => {
            let witness = if want_witness {
                Some(reconstruct(sys, u, v, &meet, &fwd.parents, &bwd.parents)?)
            } else {
                None
            };
            Ok((CappedDistanceResult::exact(d, caps, explored), witness))
        }
        _ => Ok((CappedDistanceResult::not_found(caps, explored), None)),
    }
}

fn reconstruct(
    sys: &RewritingSystem,
    u: &Word,
    v: &Word,
    meet: &Word,
    fwd_parents: &HashMap<Word, (Word, Redex)>,
    bwd_parents: &HashMap<Word, (Word, Redex)>,
) -> Result<Derivation> {
    // Walk meet -> u, then replay the collected redexes forward from u.
    let mut prefix: Vec<Redex> = Vec::new();
    let mut cursor = meet.clone();
    while &cursor != u {
        let (prev, redex) = fwd_parents
            .get(&cursor)
            .ok_or_else(|| Error::InvalidInput("broken parent chain".into()))?;
        prefix.push(redex.clone());
        cursor = prev.clone();
    }
    prefix.reverse();
    let mut builder = DerivationBuilder::new(u.clone());
    for redex in prefix {
        builder.apply(sys, redex)?;
    }
    // Walk meet -> v applying reversed parent edges.
    let mut cursor = meet.clone();
    while &cursor != v {
        let (prev, redex) = bwd_parents
            .get(&cursor)
            .ok_or_else(|| Error::InvalidInput("broken parent chain".into()))?;
        builder.apply(sys, redex.reversed())?;
        cursor = prev.clone();
    }
    Ok(builder.finish())
}

/// Breadth-first ball around a fixed target word, shared across many
/// distance queries against that target.
pub struct ClassBall<'a> {
    sys: &'a RewritingSystem,
    target: Word,
    dist: HashMap<Word, u32>,
    depth: u32,
    length_cap: u64,
}

impl<'a> ClassBall<'a> {
    /// Explores to `depth` layers, stopping early once `node_budget` nodes
    /// have been seen; the last fully expanded layer bounds lookups.
    pub fn build(
        sys: &'a RewritingSystem,
        target: Word,
        depth: u32,
        length_cap: u64,
        node_budget: usize,
    ) -> Result<Self> {
        let mut dist: HashMap<Word, u32> = HashMap::from([(target.clone(), 0)]);
        let mut frontier = vec![target.clone()];
        let mut complete_depth = 0;
        for layer in 1..=depth {
            let mut next = Vec::new();
            for word in &frontier {
                for (_, image) in neighbor_edges(sys, word, length_cap)? {
                    if !dist.contains_key(&image) {
                        dist.insert(image.clone(), layer);
                        next.push(image);
                    }
                }
            }
            if next.is_empty() {
                // Component exhausted: lookups are exact at any depth.
                complete_depth = depth;
                frontier.clear();
                break;
            }
            frontier = next;
            complete_depth = layer;
            if dist.len() > node_budget {
                break;
            }
        }
        Ok(ClassBall { sys, target, dist, depth: complete_depth, length_cap })
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn target(&self) -> &Word {
        &self.target
    }

    pub fn length_cap(&self) -> u64 {
        self.length_cap
    }

    /// Distance from `w` to the ball's target, exact within the ball's
    /// length cap. Cheap when `w` already lies inside the ball; otherwise
    /// a search from `w` runs until the best candidate is provably minimal
    /// (any shorter path would have entered the ball at an earlier layer).
    pub fn distance_from(&self, w: &Word, dist_cap: u32) -> Result<CappedDistanceResult> {
        let caps = (self.length_cap, dist_cap);
        if let Some(d) = self.dist.get(w) {
            return Ok(if *d <= dist_cap {
                CappedDistanceResult::exact(*d, caps, 1)
            } else {
                CappedDistanceResult::not_found(caps, 1)
            });
        }
        if !fits(w, self.length_cap) {
            return Err(Error::DenseCapExceeded {
                len: w.dense_len().to_string(),
                cap: self.length_cap,
            });
        }
        let mut seen: HashMap<Word, u32> = HashMap::from([(w.clone(), 0)]);
        let mut frontier = vec![w.clone()];
        let mut depth = 0u32;
        let mut best: Option<u32> = None;
        loop {
            if let Some(b) = best {
                if b <= depth + self.depth {
                    return Ok(CappedDistanceResult::exact(b, caps, seen.len()));
                }
            }
            if best.is_none() && depth + self.depth >= dist_cap {
                return Ok(CappedDistanceResult::not_found(caps, seen.len()));
            }
            if frontier.is_empty() {
                return Ok(match best {
                    Some(b) if b <= dist_cap => {
                        CappedDistanceResult::exact(b, caps, seen.len())
                    }
                    _ => CappedDistanceResult::not_found(caps, seen.len()),
                });
            }
            depth += 1;
            let mut next = Vec::new();
            for word in std::mem::take(&mut frontier) {
                for (_, image) in neighbor_edges(self.sys, &word, self.length_cap)? {
                    if seen.contains_key(&image) {
                        continue;
                    }
                    seen.insert(image.clone(), depth);
                    if let Some(d0) = self.dist.get(&image) {
                        let total = depth + d0;
                        if best.map_or(true, |b| total < b) {
                            best = Some(total);
                        }
                    }
                    next.push(image);
                }
            }
            frontier = next;
        }
    }
}

#[derive(Clone, Debug)]
pub struct DehnProfilePoint {
    pub n: u64,
    pub value: u32,
    pub witness: (Word, Word),
    pub exact: bool,
}

/// The Dehn profile `D(n)` for `n <= max_n`: the maximum capped distance
/// over equivalent pairs with `|u| + |v| <= n`, with a witness pair.
/// Equivalence uses the complete delegate system when the system is a
/// recognized builtin, and joint capped search otherwise.
pub fn dehn_profile(
    sys: &RewritingSystem,
    max_n: u64,
    length_cap: u64,
    dist_cap: u32,
) -> Result<Vec<DehnProfilePoint>> {
    let words = dense_words_up_to(&sys.alphabet, max_n as u32);
    let delegate = congruence_delegate(sys);

    // (|u| + |v|, distance, u, v) for candidate equivalent pairs.
    let mut samples: Vec<(u64, Option<u32>, Word, Word)> = Vec::new();
    match delegate {
        Some(complete) => {
            let mut classes: HashMap<Word, Vec<&Word>> = HashMap::new();
            for word in &words {
                let nf = complete.normal_form(word, 1 << 20)?;
                classes.entry(nf).or_default().push(word);
            }
            for members in classes.values() {
                for (i, u) in members.iter().enumerate() {
                    for v in &members[i + 1..] {
                        let total =
                            u.dense_len_u64().unwrap() + v.dense_len_u64().unwrap();
                        if total > max_n {
                            continue;
                        }
                        let res = capped_distance(sys, u, v, length_cap, dist_cap)?;
                        samples.push((total, res.distance, (*u).clone(), (*v).clone()));
                    }
                }
            }
        }
        None => {
            for (i, u) in words.iter().enumerate() {
                for v in &words[i + 1..] {
                    let total = u.dense_len_u64().unwrap() + v.dense_len_u64().unwrap();
                    if total > max_n {
                        continue;
                    }
                    let res = capped_distance(sys, u, v, length_cap, dist_cap)?;
                    if res.distance.is_some() {
                        samples.push((total, res.distance, u.clone(), v.clone()));
                    }
                }
            }
        }
    }
    samples.sort_by(|a, b| (a.0, &a.2, &a.3).cmp(&(b.0, &b.2, &b.3)));

    let mut points = Vec::new();
    for n in 0..=max_n {
        let mut value = 0u32;
        let mut witness = (Word::empty(), Word::empty());
        let mut exact = true;
        for (total, d, u, v) in &samples {
            if *total > n {
                continue;
            }
            match d {
                Some(d) if *d > value => {
                    value = *d;
                    witness = (u.clone(), v.clone());
                }
                Some(_) => {}
                None => exact = false,
            }
        }
        points.push(DehnProfilePoint { n, value, witness, exact });
    }
    Ok(points)
}

/// Checks `d(puq, pvq) <= d(u, v)` under caps enlarged by `|p| + |q|`.
/// Errors when `u` and `v` are not connected within the base caps.
pub fn check_context_monotonicity(
    sys: &RewritingSystem,
    u: &Word,
    v: &Word,
    p: &Word,
    q: &Word,
    length_cap: u64,
    dist_cap: u32,
) -> Result<bool> {
    let base = capped_distance(sys, u, v, length_cap, dist_cap)?;
    let Some(d_base) = base.distance else {
        return Err(Error::InvalidInput(format!(
            "{u} and {v} are not equivalent within caps ({length_cap}, {dist_cap})"
        )));
    };
    let extra = p.dense_len_u64().unwrap_or(0) + q.dense_len_u64().unwrap_or(0);
    let puq = p.concat(u).concat(q);
    let pvq = p.concat(v).concat(q);
    let framed = capped_distance(sys, &puq, &pvq, length_cap + extra, dist_cap)?;
    Ok(matches!(framed.distance, Some(d) if d <= d_base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paper::{builtin, SystemId};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn neighbors_of_zero_under_r() {
        let r = builtin(SystemId::R);
        let ns = thue_neighbors(r, &w("0"), 3).unwrap();
        let expected: Vec<Word> =
            ["a0", "b0", "c0", "00", "0a", "0b", "0c", "acc"].iter().map(|s| w(s)).collect();
        for e in &expected {
            assert!(ns.contains(e), "missing {e}");
        }
        assert_eq!(ns.len(), 8);
    }

    #[test]
    fn neighbors_respect_caps() {
        let r = builtin(SystemId::R);
        // "c" has no redex and no reverse image.
        assert!(thue_neighbors(r, &w("c"), 3).unwrap().is_empty());
        // The unique forward image of "bc" has length 3 > 2.
        assert!(thue_neighbors(r, &w("bc"), 2).unwrap().is_empty());
    }

    #[test]
    fn neighbors_include_schema_reverse_under_s() {
        let s = builtin(SystemId::S);
        let ns = thue_neighbors(s, &w("0"), 7).unwrap();
        assert!(ns.contains(&w("acc")));
        assert!(ns.contains(&w("a^3 c a c")));
        assert!(!ns.contains(&w("a^7 c a^2 c"))); // length 11 > 7
    }

    #[test]
    fn distance_examples() {
        let r = builtin(SystemId::R);
        let one = capped_distance(r, &w("acc"), &w("0"), 10, 10).unwrap();
        assert_eq!(one.distance, Some(1));
        assert_eq!(one.status, DistanceStatus::Exact);

        let zero = capped_distance(r, &w("bac"), &w("bac"), 10, 10).unwrap();
        assert_eq!(zero.distance, Some(0));

        // d_R(a^3 c a c, 0) is exactly 4 = 2^2 + 1 - 1.
        let acac = capped_distance(r, &w("a^3 c a c"), &w("0"), 12, 16).unwrap();
        assert_eq!(acac.distance, Some(4));
    }

    #[test]
    fn distance_witness_verifies() {
        let r = builtin(SystemId::R);
        let (res, witness) =
            capped_distance_witness(r, &w("a^3 c a c"), &w("0"), 12, 16, true).unwrap();
        let d = witness.unwrap();
        assert_eq!(d.len() as u32, res.distance.unwrap());
        assert!(r.verify_derivation(&d).valid);
        assert_eq!(d.start, w("a^3 c a c"));
        assert_eq!(d.end, w("0"));
    }

    #[test]
    fn not_found_within_caps() {
        let r = builtin(SystemId::R);
        let res = capped_distance(r, &w("b"), &w("a"), 2, 8).unwrap();
        assert_eq!(res.status, DistanceStatus::NotFoundWithinCaps);
    }

    #[test]
    fn class_ball_agrees_with_direct_search() {
        let r = builtin(SystemId::R);
        let ball = ClassBall::build(r, w("0"), 3, 12, 100_000).unwrap();
        for word in ["acc", "b0", "a^3 c a c", "bacc", "0a0"] {
            let word = w(word);
            let direct = capped_distance(r, &word, &w("0"), 12, 16).unwrap();
            let via_ball = ball.distance_from(&word, 16).unwrap();
            assert_eq!(direct.distance, via_ball.distance, "at {word}");
        }
    }

    #[test]
    fn dehn_profile_small_r() {
        let r = builtin(SystemId::R);
        let points = dehn_profile(r, 4, 10, 12).unwrap();
        assert_eq!(points[2].value, 0); // no distinct equivalent pair fits
        assert!(points[4].value >= 1); // (acc, 0) has distance 1
        // Frozen by the exhaustive scan: (000, 0) and (a00, 0) need 2 steps.
        assert_eq!(points[4].value, 2);
    }

    #[test]
    fn dehn_profile_no_rules() {
        let sys = crate::system::parse_system("alphabet: a b c 0\n").unwrap();
        let points = dehn_profile(&sys, 3, 10, 8).unwrap();
        assert!(points.iter().all(|p| p.value == 0));
    }

    #[test]
    fn context_monotonicity_examples() {
        let r = builtin(SystemId::R);
        assert!(check_context_monotonicity(
            r,
            &w("acc"),
            &w("0"),
            &w("b"),
            &Word::empty(),
            10,
            10
        )
        .unwrap());
        assert!(check_context_monotonicity(
            r,
            &w("bc"),
            &w("aca"),
            &w("a"),
            &w("c"),
            12,
            10
        )
        .unwrap());
        assert!(
            check_context_monotonicity(r, &w("ab"), &w("ab"), &w("c"), &w("c"), 10, 10).unwrap()
        );
    }
}
