//! Brute-force cylinder semantics for the chaos conditions.
//!
//! Admissible words of length at most `L` stand in for the nonempty open
//! sets; periodic words of period at most `P` stand in for the periodic
//! orbits. Everything is enumerated, so verdicts are exact at resolution
//! `(L, P)`. Enumeration is capped by a state budget; exceeding it yields
//! a verdict flagged partial rather than an error.

use super::{SymbolGraph, Word};
use std::collections::BTreeSet;

/// Enumeration budget shared across the checks of one experiment.
#[derive(Debug, Clone)]
pub struct Budget {
    max_states: usize,
    used: usize,
    exceeded: bool,
}

impl Budget {
    pub const DEFAULT_MAX_STATES: usize = 10_000_000;

    pub fn new(max_states: usize) -> Budget {
        Budget {
            max_states,
            used: 0,
            exceeded: false,
        }
    }

    pub fn standard() -> Budget {
        Budget::new(Self::DEFAULT_MAX_STATES)
    }

    fn charge(&mut self, n: usize) -> bool {
        self.used = self.used.saturating_add(n);
        if self.used > self.max_states {
            self.exceeded = true;
        }
        !self.exceeded
    }

    pub fn exceeded(&self) -> bool {
        self.exceeded
    }

    pub fn used(&self) -> usize {
        self.used
    }
}

/// True when consecutive symbols of `w` follow edges of `g`.
pub fn word_admissible(g: &SymbolGraph, w: &[usize]) -> bool {
    !w.is_empty()
        && w.iter().all(|&v| v < g.vertex_count())
        && w.windows(2).all(|pair| g.has_edge(pair[0], pair[1]))
}

/// True when `w` read cyclically (wrap edge included) follows edges of `g`.
pub fn cycle_admissible(g: &SymbolGraph, w: &[usize]) -> bool {
    word_admissible(g, w) && g.has_edge(w[w.len() - 1], w[0])
}

/// Does the orbit of the periodic point `q^infinity` meet the cylinder of
/// `u`, i.e. does `u` occur as a factor of the periodic sequence?
pub fn orbit_visits_cylinder(q: &[usize], u: &[usize]) -> bool {
    if q.is_empty() || u.is_empty() {
        return false;
    }
    // Factors of length |u| are determined by |q| + |u| - 1 symbols.
    let needed = q.len() + u.len() - 1;
    let unrolled: Vec<usize> = q.iter().cycle().take(needed).copied().collect();
    unrolled.windows(u.len()).any(|win| win == u)
}

/// Least period of the infinite sequence `w^infinity`: the smallest
/// divisor r of |w| such that w is a power of its r-prefix.
fn least_period(w: &[usize]) -> usize {
    let n = w.len();
    for r in 1..=n {
        if n % r == 0 && w.iter().enumerate().all(|(i, &v)| v == w[i % r]) {
            return r;
        }
    }
    n
}

/// Canonical representative of a cyclic word: the lexicographically least
/// rotation of its primitive root.
fn canonical_necklace(w: &[usize]) -> Word {
    let root = &w[..least_period(w)];
    let mut best: Option<Word> = None;
    for s in 0..root.len() {
        let rot: Word = root[s..].iter().chain(&root[..s]).copied().collect();
        if best.as_ref().is_none_or(|b| rot < *b) {
            best = Some(rot);
        }
    }
    best.expect("nonempty word has a rotation")
}

/// Everything the condition checks need, enumerated once.
struct CylinderData {
    /// Admissible words of length 1..=L, sorted by (length, lexicographic).
    words: Vec<Word>,
    /// Distinct cyclic words (canonical primitive rotations) of length
    /// 1..=P, sorted by (length, lexicographic).
    necklaces: Vec<Word>,
    /// Per word: bitmask over `necklaces` whose orbit visits the cylinder.
    word_bits: Vec<Vec<u64>>,
    /// counts[p-1] = number of distinct periodic points of period <= p.
    periodic_point_counts: Vec<usize>,
    partial: bool,
}

fn enumerate_words(g: &SymbolGraph, max_len: usize, budget: &mut Budget) -> (Vec<Word>, bool) {
    let mut words = Vec::new();
    let mut frontier: Vec<Word> = g.active_vertices().into_iter().map(|v| vec![v]).collect();
    let mut truncated = false;
    for _ in 0..max_len {
        let mut next = Vec::new();
        'outer: for w in frontier {
            if !budget.charge(1) {
                truncated = true;
                break 'outer;
            }
            for &succ in g.out(*w.last().expect("nonempty word")) {
                let mut ext = w.clone();
                ext.push(succ);
                next.push(ext);
            }
            words.push(w);
        }
        if truncated {
            break;
        }
        frontier = next;
    }
    words.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
    (words, truncated)
}

fn build_cylinder_data(
    g: &SymbolGraph,
    word_length: usize,
    period_bound: usize,
    budget: &mut Budget,
) -> CylinderData {
    let (words, words_truncated) = enumerate_words(g, word_length, budget);
    let mut partial = words_truncated;

    // Closed walks by length; collect distinct periodic points (primitive
    // root words) and distinct cyclic words (necklaces).
    let mut points: BTreeSet<Word> = BTreeSet::new();
    let mut necklace_set: BTreeSet<Word> = BTreeSet::new();
    let mut periodic_point_counts = Vec::with_capacity(period_bound);
    'periods: for p in 1..=period_bound {
        for start in g.active_vertices() {
            // DFS over walks of length p returning to start.
            let mut stack: Vec<Word> = vec![vec![start]];
            while let Some(walk) = stack.pop() {
                if !budget.charge(1) {
                    partial = true;
                    break 'periods;
                }
                if walk.len() == p {
                    if g.has_edge(walk[p - 1], start) {
                        points.insert(walk[..least_period(&walk)].to_vec());
                        necklace_set.insert(canonical_necklace(&walk));
                    }
                    continue;
                }
                for &succ in g.out(*walk.last().expect("nonempty walk")) {
                    let mut ext = walk.clone();
                    ext.push(succ);
                    stack.push(ext);
                }
            }
        }
        periodic_point_counts.push(points.len());
    }
    while periodic_point_counts.len() < period_bound {
        periodic_point_counts.push(points.len());
    }

    let mut necklaces: Vec<Word> = necklace_set.into_iter().collect();
    necklaces.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));

    let blocks = necklaces.len().div_ceil(64);
    let mut word_bits = vec![vec![0u64; blocks]; words.len()];
    for (c, q) in necklaces.iter().enumerate() {
        for (w, word) in words.iter().enumerate() {
            if orbit_visits_cylinder(q, word) {
                word_bits[w][c / 64] |= 1 << (c % 64);
            }
        }
    }

    CylinderData {
        words,
        necklaces,
        word_bits,
        periodic_point_counts,
        partial,
    }
}

fn first_common_bit(a: &[u64], b: &[u64]) -> Option<usize> {
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        let both = x & y;
        if both != 0 {
            return Some(i * 64 + both.trailing_zeros() as usize);
        }
    }
    None
}

fn first_bit(a: &[u64]) -> Option<usize> {
    first_common_bit(a, a)
}

/// Verdicts for the four chaos conditions at resolution `(L, P)`, with
/// replayable witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct DevaneyVerdict {
    pub word_length: usize,
    pub period_bound: usize,
    pub dense_periodic: bool,
    /// Per cylinder: the periodic word whose orbit meets it.
    pub dense_witnesses: Vec<(Word, Word)>,
    /// A cylinder not met by any enumerated periodic orbit.
    pub dense_failure: Option<Word>,
    pub transitive: bool,
    /// A finite walk meeting every cylinder, when transitive.
    pub transitive_walk: Option<Vec<usize>>,
    pub sensitive: bool,
    /// Per cylinder: two admissible extensions that disagree.
    pub sensitive_witnesses: Vec<(Word, Word, Word)>,
    /// A cylinder with a unique admissible extension.
    pub insensitive_cylinder: Option<Word>,
    pub nondiscrete: bool,
    /// counts[p-1] = distinct periodic points of period <= p.
    pub periodic_point_counts: Vec<usize>,
    pub partial: bool,
}

/// All four conditions hold.
pub fn chaotic(v: &DevaneyVerdict) -> bool {
    v.dense_periodic && v.transitive && v.sensitive && v.nondiscrete
}

/// Decides the four conditions by enumeration of cylinders (words of
/// length <= L) and periodic words (period <= P).
///
/// - dense periodic points: every cylinder is visited by some enumerated
///   periodic orbit;
/// - transitivity: a single walk, built by concatenating realizations
///   inside one strongly connected component, meets every cylinder;
/// - sensitivity: every cylinder admits two extensions that disagree by
///   position L + P (shift-metric separation 2^-L or larger after
///   shifting into the disagreement);
/// - nondiscreteness: the periodic-point count grows strictly at two
///   consecutive periods somewhere in the tested range.
pub fn devaney_check_bruteforce(
    g: &SymbolGraph,
    word_length: usize,
    period_bound: usize,
    budget: &mut Budget,
) -> DevaneyVerdict {
    assert!(word_length >= 1 && period_bound >= 1);
    let data = build_cylinder_data(g, word_length, period_bound, budget);
    let mut partial = data.partial;

    // Dense periodic points.
    let mut dense_witnesses = Vec::new();
    let mut dense_failure = None;
    for (w, word) in data.words.iter().enumerate() {
        match first_bit(&data.word_bits[w]) {
            Some(c) => dense_witnesses.push((word.clone(), data.necklaces[c].clone())),
            None => {
                dense_failure = Some(word.clone());
                break;
            }
        }
    }
    let dense_periodic = dense_failure.is_none();

    // Transitivity: one SCC must realize every cylinder.
    let (transitive, transitive_walk) = brute_transitive(g, &data.words);

    // Sensitivity: two diverging extensions per cylinder.
    let horizon = word_length + period_bound;
    let mut sensitive_witnesses = Vec::new();
    let mut insensitive_cylinder = None;
    let mut sensitivity_complete = true;
    for word in &data.words {
        match two_extensions(g, word, horizon, budget) {
            ExtensionOutcome::Two(a, b) => sensitive_witnesses.push((word.clone(), a, b)),
            ExtensionOutcome::One => {
                insensitive_cylinder = Some(word.clone());
                break;
            }
            ExtensionOutcome::Truncated => {
                partial = true;
                sensitivity_complete = false;
                break;
            }
        }
    }
    let sensitive = insensitive_cylinder.is_none() && sensitivity_complete;

    // Nondiscreteness: two consecutive strict increases of the count.
    let c = &data.periodic_point_counts;
    let nondiscrete = (2..c.len()).any(|i| c[i - 2] < c[i - 1] && c[i - 1] < c[i]);

    DevaneyVerdict {
        word_length,
        period_bound,
        dense_periodic,
        dense_witnesses,
        dense_failure,
        transitive,
        transitive_walk,
        sensitive,
        sensitive_witnesses,
        insensitive_cylinder,
        nondiscrete,
        periodic_point_counts: data.periodic_point_counts,
        partial,
    }
}

enum ExtensionOutcome {
    Two(Word, Word),
    One,
    Truncated,
}

/// Searches for two admissible extensions of `word` to total length
/// `horizon` that disagree somewhere; stops as soon as two are found.
fn two_extensions(
    g: &SymbolGraph,
    word: &[usize],
    horizon: usize,
    budget: &mut Budget,
) -> ExtensionOutcome {
    let mut found: Option<Word> = None;
    let mut stack: Vec<Word> = vec![word.to_vec()];
    while let Some(w) = stack.pop() {
        if !budget.charge(1) {
            return ExtensionOutcome::Truncated;
        }
        if w.len() == horizon {
            match &found {
                None => found = Some(w),
                Some(first) => {
                    if *first != w {
                        return ExtensionOutcome::Two(found.expect("just matched"), w);
                    }
                }
            }
            continue;
        }
        for &succ in g.out(*w.last().expect("nonempty word")) {
            let mut ext = w.clone();
            ext.push(succ);
            stack.push(ext);
        }
    }
    ExtensionOutcome::One
}

fn brute_transitive(g: &SymbolGraph, words: &[Word]) -> (bool, Option<Vec<usize>>) {
    for component in g.strongly_connected_components() {
        let inside: BTreeSet<usize> = component.iter().copied().collect();
        if !words
            .iter()
            .all(|w| w.iter().all(|v| inside.contains(v)))
        {
            continue;
        }
        // Concatenate every word through connecting paths inside the
        // component; the resulting finite walk meets every cylinder and
        // extends to an admissible infinite sequence.
        let mut walk: Vec<usize> = Vec::new();
        let mut ok = true;
        for w in words {
            if walk.is_empty() {
                walk.extend_from_slice(w);
                continue;
            }
            let from = *walk.last().expect("nonempty walk");
            match g.path_inside(from, w[0], &inside) {
                Some(path) => {
                    walk.extend(&path[1..]);
                    walk.extend_from_slice(&w[1..]);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return (true, Some(walk));
        }
    }
    (false, None)
}

/// Sharing of periodic orbits: every pair of cylinders is visited by a
/// common periodic orbit of period <= P.
#[derive(Debug, Clone, PartialEq)]
pub struct TouheyVerdict {
    pub word_length: usize,
    pub period_bound: usize,
    pub holds: bool,
    /// Per pair: the shared periodic word.
    pub shared_witnesses: Vec<(Word, Word, Word)>,
    pub failing_pair: Option<(Word, Word)>,
    pub partial: bool,
}

pub fn touhey_check(
    g: &SymbolGraph,
    word_length: usize,
    period_bound: usize,
    budget: &mut Budget,
) -> TouheyVerdict {
    assert!(word_length >= 1 && period_bound >= 1);
    let data = build_cylinder_data(g, word_length, period_bound, budget);
    let mut shared_witnesses = Vec::new();
    let mut failing_pair = None;
    'outer: for (i, u) in data.words.iter().enumerate() {
        for (j, w) in data.words.iter().enumerate().skip(i) {
            match first_common_bit(&data.word_bits[i], &data.word_bits[j]) {
                Some(c) => {
                    shared_witnesses.push((u.clone(), w.clone(), data.necklaces[c].clone()))
                }
                None => {
                    failing_pair = Some((u.clone(), w.clone()));
                    break 'outer;
                }
            }
        }
    }
    TouheyVerdict {
        word_length,
        period_bound,
        holds: failing_pair.is_none(),
        shared_witnesses,
        failing_pair,
        partial: data.partial,
    }
}

#[cfg(test)]
mod tests {
    use super::super::is_transitive;
    use super::*;

    fn full_two_shift() -> SymbolGraph {
        SymbolGraph::new(2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap()
    }

    fn three_cycle() -> SymbolGraph {
        SymbolGraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn full_shift_satisfies_all_four_conditions() {
        let g = full_two_shift();
        let v = devaney_check_bruteforce(&g, 3, 6, &mut Budget::standard());
        assert!(v.dense_periodic && v.transitive && v.sensitive && v.nondiscrete);
        assert!(chaotic(&v));
        assert!(!v.partial);
        // Independent count oracle: distinct periodic points of period <= p
        // over two symbols, from the standard divisor sum (2, 4, 10, 22,
        // 52, 106 cumulative).
        assert_eq!(v.periodic_point_counts, vec![2, 4, 10, 22, 52, 106]);
    }

    #[test]
    fn single_cycle_is_not_chaotic() {
        let v = devaney_check_bruteforce(&three_cycle(), 3, 6, &mut Budget::standard());
        assert!(v.transitive);
        assert!(v.dense_periodic);
        assert!(!v.sensitive);
        assert!(!v.nondiscrete);
        assert!(!chaotic(&v));
        assert_eq!(v.periodic_point_counts, vec![0, 0, 3, 3, 3, 3]);
        assert_eq!(v.insensitive_cylinder.as_deref(), Some(&[0][..]));
    }

    #[test]
    fn disjoint_loops_fail_transitivity() {
        let g = SymbolGraph::new(2, [(0, 0), (1, 1)]).unwrap();
        let v = devaney_check_bruteforce(&g, 3, 6, &mut Budget::standard());
        assert!(!v.transitive);
        assert!(v.dense_periodic); // each loop is itself periodic
        assert!(!v.nondiscrete);
    }

    #[test]
    fn dense_witnesses_replay() {
        let g = full_two_shift();
        let v = devaney_check_bruteforce(&g, 3, 6, &mut Budget::standard());
        for (cylinder, periodic) in &v.dense_witnesses {
            assert!(word_admissible(&g, cylinder));
            assert!(cycle_admissible(&g, periodic));
            assert!(orbit_visits_cylinder(periodic, cylinder));
            // The stored word generates a point of exactly its length as
            // least period.
            assert_eq!(least_period(periodic), periodic.len());
        }
    }

    #[test]
    fn sensitivity_witnesses_replay() {
        let g = full_two_shift();
        let v = devaney_check_bruteforce(&g, 2, 4, &mut Budget::standard());
        for (cylinder, a, b) in &v.sensitive_witnesses {
            assert!(word_admissible(&g, a) && word_admissible(&g, b));
            assert!(a.starts_with(cylinder) && b.starts_with(cylinder));
            assert_ne!(a, b);
            assert_eq!(a.len(), 2 + 4);
        }
    }

    #[test]
    fn transitive_walk_meets_every_cylinder() {
        let g = full_two_shift();
        let v = devaney_check_bruteforce(&g, 3, 6, &mut Budget::standard());
        let walk = v.transitive_walk.as_ref().unwrap();
        assert!(word_admissible(&g, walk));
        for (cylinder, _) in &v.dense_witnesses {
            assert!(
                walk.windows(cylinder.len()).any(|win| win == &cylinder[..]),
                "walk misses {cylinder:?}"
            );
        }
    }

    #[test]
    fn touhey_on_full_shift() {
        let g = full_two_shift();
        let v = touhey_check(&g, 2, 4, &mut Budget::standard());
        assert!(v.holds);
        // The pair (01, 10) shares the 2-cycle (01).
        let w = v
            .shared_witnesses
            .iter()
            .find(|(u, w, _)| u == &vec![0, 1] && w == &vec![1, 0])
            .expect("pair (01, 10) present");
        assert!(orbit_visits_cylinder(&w.2, &[0, 1]));
        assert!(orbit_visits_cylinder(&w.2, &[1, 0]));
        assert_eq!(w.2.len(), 2);
    }

    #[test]
    fn touhey_fails_across_disjoint_loops() {
        let g = SymbolGraph::new(2, [(0, 0), (1, 1)]).unwrap();
        let v = touhey_check(&g, 3, 6, &mut Budget::standard());
        assert!(!v.holds);
        let (u, w) = v.failing_pair.unwrap();
        // One word from each loop.
        assert_ne!(u[0], w[0]);
    }

    #[test]
    fn chorded_cycle_shares_orbits_at_sufficient_period() {
        // 3-cycle with a chord 1 -> 0: two distinct cycles, strongly
        // connected.
        let g = SymbolGraph::new(3, [(0, 1), (1, 2), (2, 0), (1, 0)]).unwrap();
        let v = touhey_check(&g, 3, 6, &mut Budget::standard());
        assert!(v.holds, "failing pair: {:?}", v.failing_pair);
        for (u, w, q) in &v.shared_witnesses {
            assert!(cycle_admissible(&g, q));
            assert!(orbit_visits_cylinder(q, u));
            assert!(orbit_visits_cylinder(q, w));
        }
    }

    #[test]
    fn brute_transitivity_agrees_with_graph_check() {
        let graphs = [
            SymbolGraph::new(2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap(),
            SymbolGraph::new(2, [(0, 0), (1, 1)]).unwrap(),
            SymbolGraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap(),
            SymbolGraph::new(2, [(0, 0), (0, 1), (1, 1)]).unwrap(),
            SymbolGraph::new(3, [(0, 0), (0, 1), (1, 2), (2, 0)]).unwrap(),
        ];
        for g in &graphs {
            let v = devaney_check_bruteforce(g, 3, 6, &mut Budget::standard());
            assert_eq!(v.transitive, is_transitive(g).transitive);
        }
    }

    #[test]
    fn budget_exhaustion_flags_partial() {
        let g = full_two_shift();
        let mut tiny = Budget::new(10);
        let v = devaney_check_bruteforce(&g, 3, 6, &mut tiny);
        assert!(v.partial);
        assert!(tiny.exceeded());
    }

    #[test]
    fn witnesses_survive_finer_resolution() {
        let g = full_two_shift();
        let coarse = devaney_check_bruteforce(&g, 3, 6, &mut Budget::standard());
        let fine = devaney_check_bruteforce(&g, 4, 8, &mut Budget::standard());
        assert!(chaotic(&coarse) && chaotic(&fine));
        for (cylinder, periodic) in &coarse.dense_witnesses {
            assert!(orbit_visits_cylinder(periodic, cylinder));
        }
    }
}
