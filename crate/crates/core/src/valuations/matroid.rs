//! Matroid rank evaluators and a generic independence-oracle rank.

use crate::error::{check_dim, Error, Result};
use crate::gf2::BitVector;

/// Largest ground set accepted by [`matroid_rank_bruteforce`].
pub const MAX_ORACLE_N: usize = 24;

/// Independence predicate over subsets of a ground set `[n]`.
///
/// Implementations must be downward closed and satisfy the exchange
/// property; [`matroid_rank_bruteforce`] spot-checks the former.
pub trait MatroidOracle {
    fn ground_size(&self) -> usize;
    fn is_independent(&self, set: &[usize]) -> bool;
}

/// `U_{r,n}`: every set of size at most `r` is independent.
#[derive(Clone, Copy, Debug)]
pub struct UniformMatroid {
    pub n: usize,
    pub rank: usize,
}

impl MatroidOracle for UniformMatroid {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        set.len() <= self.rank
    }
}

/// Rank-2 matroid given by a partition of `[n]` into cliques: a pair is
/// independent iff its elements lie in different cliques.
#[derive(Clone, Debug, PartialEq)]
pub struct Rank2Matroid {
    n: usize,
    cliques: Vec<Vec<usize>>,
    clique_of: Vec<usize>,
}

impl Rank2Matroid {
    pub fn new(n: usize, cliques: Vec<Vec<usize>>) -> Result<Self> {
        let mut clique_of = vec![usize::MAX; n];
        for (c, members) in cliques.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::invalid(format!("clique {c} is empty")));
            }
            for &i in members {
                if i >= n {
                    return Err(Error::invalid(format!("clique {c} lists element {i} >= n = {n}")));
                }
                if clique_of[i] != usize::MAX {
                    return Err(Error::invalid(format!("element {i} appears in more than one clique")));
                }
                clique_of[i] = c;
            }
        }
        if let Some(i) = clique_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::invalid(format!("element {i} is not covered by any clique")));
        }
        Ok(Rank2Matroid {
            n,
            cliques,
            clique_of,
        })
    }

    /// Every element in its own clique: the uniform matroid `U_{2,n}`.
    pub fn uniform(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| vec![i]).collect()).expect("singleton partition")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn clique_of(&self, i: usize) -> usize {
        self.clique_of[i]
    }

    /// Rank of the whole ground set.
    pub fn full_rank(&self) -> usize {
        self.cliques.len().min(2)
    }
}

impl MatroidOracle for Rank2Matroid {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        match set {
            [] | [_] => true,
            [a, b] => self.clique_of[*a] != self.clique_of[*b],
            _ => false,
        }
    }
}

/// 0 on the empty set, 2 if `x` touches two cliques, 1 otherwise.
pub fn rank2_eval(m: &Rank2Matroid, x: &BitVector) -> Result<u8> {
    check_dim(m.n, x.len())?;
    let mut first = None;
    for i in x.iter_ones() {
        match first {
            None => first = Some(m.clique_of[i]),
            Some(c) if c != m.clique_of[i] => return Ok(2),
            Some(_) => {}
        }
    }
    Ok(if first.is_some() { 1 } else { 0 })
}

/// Minimal union–find with path halving.
#[derive(Clone, Debug)]
pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    /// Returns false if `a` and `b` were already connected.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Graphic matroid: ground set = edges, independent sets = forests.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphicMatroid {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphicMatroid {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u >= vertices || v >= vertices {
                return Err(Error::invalid(format!(
                    "edge {e} = ({u}, {v}) uses a vertex >= {vertices}"
                )));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::invalid(format!("edge {e} = ({u}, {v}) is repeated")));
            }
        }
        Ok(GraphicMatroid { vertices, edges })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn n(&self) -> usize {
        self.edges.len()
    }

    pub fn full_rank(&self) -> usize {
        self.rank_of(0..self.edges.len())
    }

    fn rank_of(&self, selected: impl Iterator<Item = usize>) -> usize {
        let mut dsu = Dsu::new(self.vertices);
        selected
            .filter(|&e| {
                let (u, v) = self.edges[e];
                dsu.union(u, v)
            })
            .count()
    }

    /// Greedy decomposition into edge-disjoint forests: each round keeps a
    /// maximal spanning forest of the edges left over from earlier rounds.
    pub fn forest_decomposition(&self) -> Vec<Vec<usize>> {
        let mut remaining: Vec<usize> = (0..self.edges.len()).collect();
        let mut forests = Vec::new();
        while !remaining.is_empty() {
            let mut dsu = Dsu::new(self.vertices);
            let (forest, rest): (Vec<usize>, Vec<usize>) = remaining.iter().partition(|&&e| {
                let (u, v) = self.edges[e];
                dsu.union(u, v)
            });
            if forest.is_empty() {
                // only self-loops are left; they are never independent
                break;
            }
            forests.push(forest);
            remaining = rest;
        }
        forests
    }
}

impl MatroidOracle for GraphicMatroid {
    fn ground_size(&self) -> usize {
        self.edges.len()
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        self.rank_of(set.iter().copied()) == set.len()
    }
}

/// Vertices touched by the selected edges minus their connected components.
pub fn graphic_rank_eval(m: &GraphicMatroid, x: &BitVector) -> Result<usize> {
    check_dim(m.n(), x.len())?;
    Ok(m.rank_of(x.iter_ones()))
}

/// Rank through an independence oracle: greedy growth over the selected
/// elements, with a downward-closure check on every accepted set.
pub fn matroid_rank_bruteforce(oracle: &dyn MatroidOracle, x: &BitVector) -> Result<usize> {
    let n = oracle.ground_size();
    check_dim(n, x.len())?;
    if n > MAX_ORACLE_N {
        return Err(Error::capacity("oracle ground set size", n as u64, MAX_ORACLE_N as u64));
    }
    if !oracle.is_independent(&[]) {
        return Err(Error::invalid("oracle rejects the empty set"));
    }
    let mut current: Vec<usize> = Vec::new();
    for i in x.iter_ones() {
        current.push(i);
        if !oracle.is_independent(&current) {
            current.pop();
            continue;
        }
        for drop in 0..current.len() {
            let sub: Vec<usize> = current
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != drop)
                .map(|(_, &e)| e)
                .collect();
            if !oracle.is_independent(&sub) {
                return Err(Error::invalid(format!(
                    "oracle is not downward closed: {current:?} independent but {sub:?} is not"
                )));
            }
        }
    }
    Ok(current.len())
}
