//! Permutations in one-line notation (0-based internally) and the finite
//! closure routines the permutation kernels are built on.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

pub(crate) type Perm = Vec<u8>;

pub(crate) fn identity(n: usize) -> Perm {
    (0..n as u8).collect()
}

/// `(p ∘ q)(i) = p(q(i))`: apply `q` first.
pub(crate) fn compose(p: &[u8], q: &[u8]) -> Perm {
    q.iter().map(|&i| p[i as usize]).collect()
}

pub(crate) fn inverse(p: &[u8]) -> Perm {
    let mut out = vec![0u8; p.len()];
    for (i, &pi) in p.iter().enumerate() {
        out[pi as usize] = i as u8;
    }
    out
}

pub(crate) fn is_bijection(p: &[u8]) -> bool {
    let mut seen = vec![false; p.len()];
    for &i in p {
        match seen.get_mut(i as usize) {
            Some(s) if !*s => *s = true,
            _ => return false,
        }
    }
    true
}

/// Builds a permutation of degree `n` from 1-based cycles.
pub(crate) fn from_cycles(n: usize, cycles: &[&[u8]]) -> Perm {
    let mut p = identity(n);
    for cycle in cycles {
        for (k, &from) in cycle.iter().enumerate() {
            let to = cycle[(k + 1) % cycle.len()];
            p[from as usize - 1] = to - 1;
        }
    }
    p
}

pub(crate) fn cycle_string(p: &[u8]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = p[i] as usize;
        }
        out.push('(');
        out.push_str(&cycle.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Parses cycle notation such as `"(1 2)(3 4)"` or `"(1,2,3)"`; `"()"` is the identity.
pub(crate) fn parse_cycles(n: usize, s: &str) -> Result<Perm, String> {
    let mut p = identity(n);
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body_end = rest
            .strip_prefix('(')
            .and_then(|r| r.find(')'))
            .ok_or_else(|| format!("malformed cycle notation {s:?}"))?;
        let body = &rest[1..body_end + 1];
        rest = rest[body_end + 2..].trim_start();
        let points = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .ok()
                    .filter(|&v| (1..=n).contains(&v))
                    .ok_or_else(|| format!("bad point {t:?} in {s:?} for degree {n}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let distinct: BTreeSet<_> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(format!("repeated point in cycle ({body})"));
        }
        // Cycles compose right to left like the permutations themselves.
        let cycle: Vec<u8> = points.iter().map(|&v| v as u8).collect();
        let c = from_cycles(n, &[&cycle]);
        p = compose(&p, &c);
    }
    Ok(p)
}

#[cfg(test)]
pub(crate) fn parity_is_even(p: &[u8]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0usize;
    for start in 0..p.len() {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 0
}

/// Breadth-first closure of `generators`; returns every element of the
/// generated group with a shortest positive word (generator indices).
pub(crate) fn enumerate_with_words(n: usize, generators: &[Perm]) -> BTreeMap<Perm, Vec<usize>> {
    let mut words = BTreeMap::new();
    let mut queue = VecDeque::new();
    words.insert(identity(n), Vec::new());
    queue.push_back(identity(n));
    while let Some(g) = queue.pop_front() {
        let word = words[&g].clone();
        for (idx, s) in generators.iter().enumerate() {
            let h = compose(&g, s);
            if !words.contains_key(&h) {
                let mut w = word.clone();
                w.push(idx);
                words.insert(h.clone(), w);
                queue.push_back(h);
            }
        }
    }
    words
}

pub(crate) fn closure(n: usize, generators: &[Perm]) -> BTreeSet<Perm> {
    let mut set = BTreeSet::new();
    let mut queue = VecDeque::new();
    set.insert(identity(n));
    queue.push_back(identity(n));
    while let Some(g) = queue.pop_front() {
        for s in generators {
            let h = compose(&g, s);
            if set.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    set
}

/// Subgroup generated by `candidates`, growing the generating set only when a
/// candidate is not yet covered.
pub(crate) fn subgroup_generated<'a, I>(n: usize, candidates: I) -> BTreeSet<Perm>
where
    I: IntoIterator<Item = &'a Perm>,
{
    let mut gens: Vec<Perm> = Vec::new();
    let mut group = closure(n, &gens);
    for c in candidates {
        if !group.contains(c) {
            gens.push(c.clone());
            group = closure(n, &gens);
        }
    }
    group
}
