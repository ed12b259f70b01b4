//! Knuth–Bendix completion for string rewriting under the shortlex order.
//!
//! Composability of a string of generators is a local condition on
//! adjacent letters and every equation has matching endpoints, so plain
//! string rewriting over the generator alphabet is sound for presented
//! categories: overlaps of composable words are composable.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use super::word::{shortlex, GenId};

/// Bounds on a completion run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompletionConfig {
    pub max_rules: usize,
    pub max_word_len: usize,
    pub max_steps: usize,
}

impl Default for CompletionConfig {
    fn default() -> Self {
        CompletionConfig {
            max_rules: 400,
            max_word_len: 48,
            max_steps: 50_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Vec<GenId>,
    pub rhs: Vec<GenId>,
}

/// A confluent, terminating string rewriting system.
#[derive(Clone, Debug, Default)]
pub struct RewriteSystem {
    rules: Vec<Rule>,
}

impl RewriteSystem {
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Rewrites to the unique irreducible form.
    pub fn reduce(&self, word: &[GenId]) -> Vec<GenId> {
        reduce_with(self.rules.iter(), word)
    }

    pub fn is_irreducible(&self, word: &[GenId]) -> bool {
        !self.rules.iter().any(|r| contains(word, &r.lhs))
    }

    /// True when some rule's left side is a prefix of `word`.
    pub(crate) fn has_prefix_redex(&self, word: &[GenId]) -> bool {
        self.rules.iter().any(|r| word.starts_with(&r.lhs))
    }
}

fn contains(hay: &[GenId], needle: &[GenId]) -> bool {
    find(hay, needle).is_some()
}

fn find(hay: &[GenId], needle: &[GenId]) -> Option<usize> {
    if needle.is_empty() || needle.len() > hay.len() {
        return None;
    }
    hay.windows(needle.len()).position(|w| w == needle)
}

fn reduce_with<'a>(rules: impl Iterator<Item = &'a Rule> + Clone, word: &[GenId]) -> Vec<GenId> {
    let mut w = word.to_vec();
    'outer: loop {
        for r in rules.clone() {
            if let Some(p) = find(&w, &r.lhs) {
                let mut next = Vec::with_capacity(w.len() + r.rhs.len() - r.lhs.len());
                next.extend_from_slice(&w[..p]);
                next.extend_from_slice(&r.rhs);
                next.extend_from_slice(&w[p + r.lhs.len()..]);
                w = next;
                continue 'outer;
            }
        }
        return w;
    }
}

/// Why completion stopped without a confluent system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompletionFailure {
    TooManyRules(usize),
    WordTooLong(usize),
    TooManySteps(usize),
}

impl std::fmt::Display for CompletionFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CompletionFailure::TooManyRules(n) => write!(f, "completion exceeded {n} rules"),
            CompletionFailure::WordTooLong(n) => {
                write!(f, "completion produced a rule of length {n}")
            }
            CompletionFailure::TooManySteps(n) => {
                write!(f, "completion did not settle in {n} steps")
            }
        }
    }
}

/// Pending equation, ordered so that the heap pops short equations first
/// and ties in insertion order.
#[derive(PartialEq, Eq)]
struct Pending {
    size: usize,
    seq: usize,
    a: Vec<GenId>,
    b: Vec<GenId>,
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.size, self.seq).cmp(&(other.size, other.seq))
    }
}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Runs completion on the given equations.
pub fn complete(
    equations: &[(Vec<GenId>, Vec<GenId>)],
    config: &CompletionConfig,
) -> Result<RewriteSystem, CompletionFailure> {
    let mut rules: Vec<Option<Rule>> = Vec::new();
    let mut heap: BinaryHeap<Reverse<Pending>> = BinaryHeap::new();
    let mut seq = 0usize;
    let mut seen: HashSet<(Vec<GenId>, Vec<GenId>)> = HashSet::new();

    let mut push = |heap: &mut BinaryHeap<Reverse<Pending>>, a: Vec<GenId>, b: Vec<GenId>| {
        seq += 1;
        heap.push(Reverse(Pending {
            size: a.len().max(b.len()),
            seq,
            a,
            b,
        }));
    };
    for (a, b) in equations {
        push(&mut heap, a.clone(), b.clone());
    }

    let mut steps = 0usize;
    while let Some(Reverse(p)) = heap.pop() {
        steps += 1;
        if steps > config.max_steps {
            return Err(CompletionFailure::TooManySteps(config.max_steps));
        }
        let live = || rules.iter().flatten();
        let a = reduce_with(live(), &p.a);
        let b = reduce_with(live(), &p.b);
        if a == b {
            continue;
        }
        let (lhs, rhs) = match shortlex(&a, &b) {
            Ordering::Greater => (a, b),
            _ => (b, a),
        };
        if lhs.len() > config.max_word_len {
            return Err(CompletionFailure::WordTooLong(lhs.len()));
        }
        if !seen.insert((lhs.clone(), rhs.clone())) {
            continue;
        }
        let new_rule = Rule { lhs, rhs };

        // Inter-reduce: rules whose left side contains the new left side go back to the queue.
        for slot in rules.iter_mut() {
            let Some(r) = slot else { continue };
            if contains(&r.lhs, &new_rule.lhs) {
                let old = slot.take().expect("slot checked above");
                seen.remove(&(old.lhs.clone(), old.rhs.clone()));
                push(&mut heap, old.lhs, old.rhs);
            }
        }
        rules.push(Some(new_rule));
        let snapshot: Vec<Rule> = rules.iter().flatten().cloned().collect();
        for slot in rules.iter_mut().flatten() {
            slot.rhs = reduce_with(snapshot.iter(), &slot.rhs);
        }

        let count = rules.iter().flatten().count();
        if count > config.max_rules {
            return Err(CompletionFailure::TooManyRules(config.max_rules));
        }

        let newest = rules
            .iter()
            .rev()
            .flatten()
            .next()
            .cloned()
            .expect("just pushed");
        let others: Vec<Rule> = rules.iter().flatten().cloned().collect();
        for other in &others {
            for (x, y) in critical_pairs(&newest, other) {
                push(&mut heap, x, y);
            }
            if other != &newest {
                for (x, y) in critical_pairs(other, &newest) {
                    push(&mut heap, x, y);
                }
            }
        }
    }

    let mut rules: Vec<Rule> = rules.into_iter().flatten().collect();
    rules.sort_by(|x, y| shortlex(&x.lhs, &y.lhs).then_with(|| shortlex(&x.rhs, &y.rhs)));
    rules.dedup();
    Ok(RewriteSystem { rules })
}

/// Overlaps where a proper suffix of `r1.lhs` is a proper prefix of `r2.lhs`.
fn critical_pairs(r1: &Rule, r2: &Rule) -> Vec<(Vec<GenId>, Vec<GenId>)> {
    let (l1, l2) = (&r1.lhs, &r2.lhs);
    let mut out = Vec::new();
    for k in 1..l1.len().min(l2.len()) {
        if l1[l1.len() - k..] == l2[..k] {
            let mut left = r1.rhs.clone();
            left.extend_from_slice(&l2[k..]);
            let mut right = l1[..l1.len() - k].to_vec();
            right.extend_from_slice(&r2.rhs);
            out.push((left, right));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[usize]) -> Vec<GenId> {
        s.iter().map(|&i| GenId(i)).collect()
    }

    #[test]
    fn cyclic_group_of_order_two_with_formal_inverse() {
        // t = 0, T = 1: tT = 1, Tt = 1, tt = 1.
        let eqs = vec![
            (w(&[0, 1]), w(&[])),
            (w(&[1, 0]), w(&[])),
            (w(&[0, 0]), w(&[])),
        ];
        let rs = complete(&eqs, &CompletionConfig::default()).unwrap();
        assert_eq!(rs.reduce(&w(&[1])), w(&[0]));
        assert_eq!(rs.reduce(&w(&[0, 0, 0])), w(&[0]));
        assert_eq!(rs.reduce(&w(&[1, 1, 0, 1])), w(&[]));
    }

    #[test]
    fn idempotent_generator() {
        let rs = complete(&[(w(&[0, 0]), w(&[0]))], &CompletionConfig::default()).unwrap();
        assert_eq!(rs.reduce(&w(&[0, 0, 0])), w(&[0]));
    }

    #[test]
    fn free_abelian_rank_two_completes() {
        // a=0, A=1, b=2, B=3 with aA=Aa=bB=Bb=1 and abAB = 1 (read as a string).
        let eqs = vec![
            (w(&[0, 1]), w(&[])),
            (w(&[1, 0]), w(&[])),
            (w(&[2, 3]), w(&[])),
            (w(&[3, 2]), w(&[])),
            (w(&[0, 2, 1, 3]), w(&[])),
        ];
        let rs = complete(&eqs, &CompletionConfig::default()).unwrap();
        assert_eq!(rs.reduce(&w(&[2, 0])), rs.reduce(&w(&[0, 2])));
        assert_eq!(rs.reduce(&w(&[0, 2, 1])), w(&[2]));
    }

    #[test]
    fn bounds_are_enforced() {
        let cfg = CompletionConfig {
            max_rules: 1,
            ..CompletionConfig::default()
        };
        let eqs = vec![
            (w(&[0, 1]), w(&[])),
            (w(&[1, 0]), w(&[])),
            (w(&[0, 0]), w(&[])),
        ];
        assert!(complete(&eqs, &cfg).is_err());
    }
}
