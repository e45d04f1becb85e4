//! Folded core graphs for finitely generated subgroups of the constant
//! free group, supporting membership, subgroup equality, canonical
//! fingerprints, and the Nielsen-reduced pair predicate.
//!
//! A subgroup is represented by the folded wedge of generator loops: merge
//! same-labeled edges leaving a common vertex until no two remain, then
//! prune non-base leaves. Words trace deterministic label paths, so
//! membership and based-isomorphism checks are straightforward.

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::word::{Letter, Sign, Symbol, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubgroupError {
    #[error("generator contains variable symbol {0}")]
    VariableInGenerator(String),
    #[error("trivial word where a nontrivial one is required")]
    TrivialWord,
}

type EdgeKey = (Symbol, Sign);

/// A folded, cored, based labeled graph. Vertex 0 is the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldedGraph {
    adj: Vec<BTreeMap<EdgeKey, usize>>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }
}

/// Builds the folded core graph of the subgroup generated by `generators`.
pub fn folded_graph(generators: &[Word]) -> Result<FoldedGraph, SubgroupError> {
    for g in generators {
        if let Some(sym) = g.symbols().find(|s| s.is_variable()) {
            return Err(SubgroupError::VariableInGenerator(sym.name().to_string()));
        }
    }

    // Wedge of loops at the base, one subdivided loop per generator.
    let mut adj: Vec<BTreeMap<EdgeKey, Vec<usize>>> = vec![BTreeMap::new()];
    let add_edge = |adj: &mut Vec<BTreeMap<EdgeKey, Vec<usize>>>,
                        from: usize,
                        letter: &Letter,
                        to: usize| {
        // A letter s traversed from u to v is an s-edge u -> v; the letter
        // s^-1 traversed from u to v is an s-edge v -> u. Both directions
        // are stored.
        adj[from].entry((letter.symbol.clone(), letter.sign)).or_default().push(to);
        adj[to]
            .entry((letter.symbol.clone(), letter.sign.flip()))
            .or_default()
            .push(from);
    };
    for g in generators {
        if g.is_empty() {
            continue;
        }
        let mut current = 0;
        for (i, letter) in g.letters().iter().enumerate() {
            let next = if i + 1 == g.len() {
                0
            } else {
                adj.push(BTreeMap::new());
                adj.len() - 1
            };
            add_edge(&mut adj, current, letter, next);
            current = next;
        }
    }

    // Fold: whenever a vertex has two same-labeled edges, merge their
    // endpoints; merging can create new duplicates, so iterate to fixpoint.
    let mut uf = UnionFind::new(adj.len());
    loop {
        // Resolve targets through the union-find and drop exact duplicates.
        for v in 0..adj.len() {
            if uf.find(v) != v {
                continue;
            }
            let map = std::mem::take(&mut adj[v]);
            let mut fresh: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
            for (key, ts) in map {
                let entry = fresh.entry(key).or_default();
                for t in ts {
                    let t = uf.find(t);
                    if !entry.contains(&t) {
                        entry.push(t);
                    }
                }
            }
            adj[v] = fresh;
        }
        let mut pending: Vec<(usize, usize)> = Vec::new();
        for v in 0..adj.len() {
            if uf.find(v) != v {
                continue;
            }
            for targets in adj[v].values() {
                for pair in targets.windows(2) {
                    pending.push((pair[0], pair[1]));
                }
            }
        }
        if pending.is_empty() {
            break;
        }
        for (a, b) in pending {
            let ra = uf.find(a);
            let rb = uf.find(b);
            if ra == rb {
                continue;
            }
            let keep = ra.min(rb);
            let drop = ra.max(rb);
            uf.parent[drop] = keep;
            let dropped = std::mem::take(&mut adj[drop]);
            for (key, ts) in dropped {
                adj[keep].entry(key).or_default().extend(ts);
            }
        }
    }

    // Compact to live vertices, base first.
    let base_root = uf.find(0);
    let mut renumber: BTreeMap<usize, usize> = BTreeMap::new();
    renumber.insert(base_root, 0);
    for v in 0..adj.len() {
        if uf.find(v) == v && v != base_root {
            let id = renumber.len();
            renumber.insert(v, id);
        }
    }
    let mut compact: Vec<BTreeMap<EdgeKey, usize>> = vec![BTreeMap::new(); renumber.len()];
    for (&old, &new) in &renumber {
        for (key, ts) in &adj[old] {
            debug_assert_eq!(ts.len(), 1, "folded graph has unique labeled edges");
            compact[new].insert(key.clone(), renumber[&uf.find(ts[0])]);
        }
    }

    // Core: repeatedly remove non-base leaves (degree counts stored
    // directions, so a leaf has exactly one entry).
    loop {
        let Some(leaf) = (1..compact.len()).find(|&v| compact[v].len() <= 1) else {
            break;
        };
        if let Some(((sym, sign), &target)) = compact[leaf].iter().next().map(|(k, t)| (k.clone(), t))
        {
            compact[target].remove(&(sym, sign.flip()));
        }
        compact.remove(leaf);
        for map in &mut compact {
            for t in map.values_mut() {
                debug_assert_ne!(*t, leaf);
                if *t > leaf {
                    *t -= 1;
                }
            }
        }
    }

    Ok(FoldedGraph { adj: compact })
}

impl FoldedGraph {
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of geometric edges (each stored in both directions).
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.len()).sum::<usize>() / 2
    }

    /// True iff `w` labels a closed path at the base. Letters with no
    /// matching edge (including variables) leave the subgroup, so any
    /// failed step means non-membership.
    pub fn contains(&self, w: &Word) -> bool {
        let mut at = 0usize;
        for letter in w.letters() {
            match self.adj[at].get(&(letter.symbol.clone(), letter.sign)) {
                Some(&next) => at = next,
                None => return false,
            }
        }
        at == 0
    }

    /// Canonical relabeling: breadth-first from the base with edges taken
    /// in label order. Two graphs are based-isomorphic iff their canonical
    /// tables are equal, since folded graphs are deterministic.
    fn canonical_table(&self) -> Vec<Vec<(String, i8, usize)>> {
        let mut order: Vec<usize> = vec![0];
        let mut seen = vec![false; self.adj.len()];
        seen[0] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &t in self.adj[v].values() {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        let mut new_id = vec![usize::MAX; self.adj.len()];
        for (i, &v) in order.iter().enumerate() {
            new_id[v] = i;
        }
        let mut table = Vec::with_capacity(order.len());
        for &v in &order {
            let mut row = Vec::new();
            for ((sym, sign), &t) in &self.adj[v] {
                let s = match sign {
                    Sign::Plus => 1i8,
                    Sign::Minus => -1i8,
                };
                row.push((sym.name().to_string(), s, new_id[t]));
            }
            table.push(row);
        }
        table
    }

    pub fn same_graph(&self, other: &FoldedGraph) -> bool {
        self.canonical_table() == other.canonical_table()
    }

    /// SHA-256 of the canonical table; equal exactly when the based graphs
    /// are isomorphic, i.e. when the subgroups coincide.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for (i, row) in self.canonical_table().iter().enumerate() {
            hasher.update(format!("v{i}:"));
            for (name, sign, target) in row {
                hasher.update(format!("{name}^{sign}->{target};"));
            }
            hasher.update("\n");
        }
        format!("{:x}", hasher.finalize())
    }
}

pub fn same_subgroup(gens1: &[Word], gens2: &[Word]) -> Result<bool, SubgroupError> {
    Ok(folded_graph(gens1)?.same_graph(&folded_graph(gens2)?))
}

/// Classical Nielsen conditions for the pair {u, v}, over the symmetrized
/// list L = {u, u^-1, v, v^-1}:
///
/// * N0: u and v are nontrivial, and no product pq with p, q in L and q not
///   the formal inverse of p is trivial (this rejects v = u and v = u^-1).
/// * N1: |pq| >= max(|p|, |q|) for those products.
/// * N2: |pqr| > |p| - |q| + |r| whenever pq != 1 and qr != 1.
pub fn is_nielsen_reduced_pair(u: &Word, v: &Word) -> Result<bool, SubgroupError> {
    if u.is_empty() || v.is_empty() {
        return Err(SubgroupError::TrivialWord);
    }
    // Entries carry (word, mate index) so formal-inverse pairs are skipped.
    let l = [u.clone(), u.inverse(), v.clone(), v.inverse()];
    let mate = [1usize, 0, 3, 2];
    for (i, p) in l.iter().enumerate() {
        for (j, q) in l.iter().enumerate() {
            if mate[i] == j {
                continue;
            }
            let pq = p.concat(q);
            if pq.is_empty() || pq.len() < p.len().max(q.len()) {
                return Ok(false);
            }
        }
    }
    for (i, p) in l.iter().enumerate() {
        for (j, q) in l.iter().enumerate() {
            if mate[i] == j {
                continue;
            }
            for (k, r) in l.iter().enumerate() {
                if mate[j] == k {
                    continue;
                }
                let pqr = p.concat(q).concat(r);
                if (pqr.len() as i64) <= p.len() as i64 - q.len() as i64 + r.len() as i64 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(text: &str) -> Word {
        Word::parse_constant(text).unwrap()
    }

    fn graph(gens: &[&str]) -> FoldedGraph {
        let gens: Vec<Word> = gens.iter().map(|g| c(g)).collect();
        folded_graph(&gens).unwrap()
    }

    #[test]
    fn wedge_of_free_generators() {
        let g = graph(&["a", "b"]);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 2);
        assert!(g.contains(&c("a b a^-1 b^-1")));
    }

    #[test]
    fn squared_generator_gives_two_vertices() {
        let g = graph(&["a^2", "b"]);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 3);
        assert!(g.contains(&c("a^2")));
        assert!(!g.contains(&c("a")));
        assert!(g.contains(&c("b a^2 b^-1 a^-2")));
    }

    #[test]
    fn folding_recovers_whole_group() {
        assert!(same_subgroup(&[c("a b"), c("b")], &[c("a"), c("b")]).unwrap());
    }

    #[test]
    fn membership_examples() {
        let g = graph(&["a^2", "b^3"]);
        assert!(!g.contains(&c("a b")));
        assert!(!g.contains(&c("a b^3")));
        assert!(g.contains(&Word::empty()));

        let h = graph(&["a^2", "a^-1 b^3"]);
        assert!(h.contains(&c("a b^3")));
        assert!(!h.contains(&c("a^2") .concat(&c("b"))));
    }

    #[test]
    fn subgroup_inequality_witness() {
        assert!(!same_subgroup(&[c("a^2"), c("b^3")], &[c("a^2"), c("a^-1 b^3")]).unwrap());
        let g1 = graph(&["a^2", "b^3"]);
        let g2 = graph(&["a^2", "a^-1 b^3"]);
        assert_ne!(g1.fingerprint(), g2.fingerprint());
    }

    #[test]
    fn conjugated_loop_keeps_base_spur() {
        let g = graph(&["a b a^-1"]);
        assert!(g.contains(&c("a b a^-1")));
        assert!(!g.contains(&c("b")));
        assert!(!g.contains(&c("a")));
    }

    #[test]
    fn rejects_variable_generators() {
        let gens = vec![Word::parse_variable("x").unwrap()];
        assert!(matches!(folded_graph(&gens), Err(SubgroupError::VariableInGenerator(_))));
    }

    #[test]
    fn fold_order_does_not_matter() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5747);
        let alphabet = ["a", "b", "c"];
        for _ in 0..100 {
            let count = rng.gen_range(1..=3);
            let mut gens = Vec::new();
            for _ in 0..count {
                let len = rng.gen_range(1..=6);
                let mut letters = Vec::new();
                for _ in 0..len {
                    let sym = Symbol::constant(alphabet[rng.gen_range(0..alphabet.len())]);
                    let sign = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
                    letters.push(Letter::new(sym, sign));
                }
                let w = Word::from_letters(letters);
                if !w.is_empty() {
                    gens.push(w);
                }
            }
            if gens.is_empty() {
                continue;
            }
            let reference = folded_graph(&gens).unwrap();
            for _ in 0..3 {
                let mut shuffled = gens.clone();
                shuffled.shuffle(&mut rng);
                let other = folded_graph(&shuffled).unwrap();
                assert!(reference.same_graph(&other), "generators: {gens:?}");
                assert_eq!(reference.fingerprint(), other.fingerprint());
            }
        }
    }

    #[test]
    fn membership_agrees_with_generator_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1fd5);
        let alphabet = ["a", "b"];
        for _ in 0..40 {
            let mut gens = Vec::new();
            for _ in 0..2 {
                let len = rng.gen_range(1..=4);
                let mut letters = Vec::new();
                for _ in 0..len {
                    let sym = Symbol::constant(alphabet[rng.gen_range(0..alphabet.len())]);
                    let sign = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
                    letters.push(Letter::new(sym, sign));
                }
                let w = Word::from_letters(letters);
                if !w.is_empty() {
                    gens.push(w);
                }
            }
            if gens.is_empty() {
                continue;
            }
            let g = folded_graph(&gens).unwrap();
            // Every short product of generators must be a member.
            let mut products = vec![Word::empty()];
            for _ in 0..4 {
                let mut next = Vec::new();
                for p in &products {
                    for gen in &gens {
                        next.push(p.concat(gen));
                        next.push(p.concat(&gen.inverse()));
                    }
                }
                for w in &next {
                    assert!(g.contains(w), "product {w} of {gens:?} not recognized");
                }
                products = next;
            }
        }
    }

    #[test]
    fn same_subgroup_is_an_equivalence() {
        let families = [
            vec![c("a"), c("b")],
            vec![c("a b"), c("b")],
            vec![c("b"), c("a")],
            vec![c("a^2"), c("b")],
        ];
        for f in &families {
            assert!(same_subgroup(f, f).unwrap());
        }
        assert!(same_subgroup(&families[0], &families[1]).unwrap());
        assert!(same_subgroup(&families[1], &families[2]).unwrap());
        assert!(same_subgroup(&families[0], &families[2]).unwrap());
        assert!(!same_subgroup(&families[0], &families[3]).unwrap());
    }

    #[test]
    fn nielsen_pair_examples() {
        assert!(is_nielsen_reduced_pair(&c("a b"), &c("a c a^-1")).unwrap());
        assert!(!is_nielsen_reduced_pair(&c("a"), &c("a^-1")).unwrap());
        assert!(!is_nielsen_reduced_pair(&c("a b"), &c("b^-1")).unwrap());
        assert!(is_nielsen_reduced_pair(&c("a"), &c("b")).unwrap());
        assert!(matches!(
            is_nielsen_reduced_pair(&Word::empty(), &c("a")),
            Err(SubgroupError::TrivialWord)
        ));
    }
}
