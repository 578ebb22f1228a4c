//! Quivers with relations and their finite-dimensional path algebras.
//!
//! Paths are composed left to right: the path `a.b` first follows `a`, then
//! `b`. A representation assigns to an arrow `a: i -> j` a matrix of shape
//! `dim_j x dim_i`, so a path acts by the product of its arrow matrices in
//! reverse order.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{is_prime, neg, Matrix};

/// Upper bound on path length tried when looking for a truncation of the
/// ideal. Algebras needing longer paths are rejected.
pub const MAX_PATH_LENGTH: usize = 48;
const MAX_PATHS: usize = 20_000;

/// A linear combination of paths, each a list of arrow indices.
type Combination = Vec<(u32, Vec<usize>)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Arrows are given as `(name, source, target)` using vertex names.
    pub fn new(vertices: Vec<String>, arrows: &[(String, String, String)]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidQuiver("no vertices".into()));
        }
        let mut seen = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if seen.insert(v.clone(), i).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate vertex `{v}`")));
            }
        }
        let mut names = HashMap::new();
        let mut out = Vec::new();
        for (name, s, t) in arrows {
            if names.insert(name.clone(), ()).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate arrow `{name}`")));
            }
            let source = *seen.get(s).ok_or_else(|| Error::UnknownVertex(s.clone()))?;
            let target = *seen.get(t).ok_or_else(|| Error::UnknownVertex(t.clone()))?;
            out.push(Arrow { name: name.clone(), source, target });
        }
        Ok(Quiver { vertices, arrows: out })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }
    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }
    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Same vertices, every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow { name: a.name.clone(), source: a.target, target: a.source })
            .collect();
        Quiver { vertices: self.vertices.clone(), arrows }
    }
}

/// A path given by its start vertex and arrow sequence; the trivial path at
/// a vertex has no arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Path {
        Path { source: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn target(&self, q: &Quiver) -> usize {
        self.arrows.last().map_or(self.source, |&a| q.arrows[a].target)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Path) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Path { source: self.source, arrows }
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e{}", q.vertices[self.source])
        } else {
            let names: Vec<&str> = self.arrows.iter().map(|&a| q.arrows[a].name.as_str()).collect();
            names.join(".")
        }
    }
}

/// A linear combination of parallel paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(u32, Vec<usize>)>,
}

/// Basis of `e_s Λ e_t` together with a rewriting rule for arbitrary paths.
#[derive(Clone, Debug)]
struct PathSpace {
    columns: HashMap<Vec<usize>, usize>,
    /// Rewriting of each pivot column into free columns: `(pivot, row)`.
    rewrite: HashMap<usize, Vec<u32>>,
    free: Vec<usize>,
    basis: Vec<Path>,
    /// Free column index -> position in `basis`.
    order: HashMap<usize, usize>,
}

/// A bound quiver algebra `kQ/I` over `F_p`, with `I` admissible.
#[derive(Clone, Debug)]
pub struct Algebra {
    p: u32,
    quiver: Quiver,
    relations: Vec<Relation>,
    truncation: usize,
    spaces: Vec<Vec<PathSpace>>,
}

fn all_paths(q: &Quiver, max_len: usize) -> Vec<Path> {
    let mut out: Vec<Path> = (0..q.num_vertices()).map(Path::trivial).collect();
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for path in &frontier {
            let t = path.target(q);
            for (ai, a) in q.arrows.iter().enumerate() {
                if a.source == t {
                    let mut arrows = path.arrows.clone();
                    arrows.push(ai);
                    next.push(Path { source: path.source, arrows });
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    out
}

impl Algebra {
    pub fn new(p: u32, quiver: Quiver, relations: Vec<Relation>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let mut rels = Vec::new();
        for r in relations {
            let terms: Vec<(u32, Vec<usize>)> =
                r.terms.into_iter().map(|(c, w)| (c % p, w)).filter(|(c, _)| *c != 0).collect();
            if terms.is_empty() {
                continue;
            }
            let mut ends = None;
            for (_, w) in &terms {
                if w.len() < 2 {
                    return Err(Error::InadmissibleRelation(
                        "every term must have length at least 2".into(),
                    ));
                }
                for pair in w.windows(2) {
                    if quiver.arrows[pair[0]].target != quiver.arrows[pair[1]].source {
                        return Err(Error::InadmissibleRelation("term is not a path".into()));
                    }
                }
                let e = (quiver.arrows[w[0]].source, quiver.arrows[*w.last().unwrap()].target);
                if *ends.get_or_insert(e) != e {
                    return Err(Error::InadmissibleRelation(
                        "terms must share source and target".into(),
                    ));
                }
            }
            rels.push(Relation { terms });
        }
        let mut last_err = Error::NotFiniteDimensional(MAX_PATH_LENGTH);
        for t in 2..=MAX_PATH_LENGTH {
            if all_paths(&quiver, t - 1).len() > MAX_PATHS {
                return Err(Error::NotFiniteDimensional(t));
            }
            match Self::truncate(p, &quiver, &rels, t) {
                Ok(spaces) => {
                    return Ok(Algebra { p, quiver, relations: rels, truncation: t, spaces })
                }
                Err(e) => last_err = e,
            }
        }
        Err(last_err)
    }

    /// Attempts `Λ = V_t / I_t` where `V_t` holds paths shorter than `t`.
    /// Succeeds when every path of length `t - 1` already lies in `I_t`,
    /// which forces all longer paths into the ideal as well.
    fn truncate(p: u32, q: &Quiver, rels: &[Relation], t: usize) -> Result<Vec<Vec<PathSpace>>> {
        let n = q.num_vertices();
        let paths = all_paths(q, t - 1);
        let mut grouped: Vec<Vec<Vec<Path>>> = vec![vec![Vec::new(); n]; n];
        for path in &paths {
            grouped[path.source][path.target(q)].push(path.clone());
        }
        // generators u * r * w, truncated at length t
        let mut gens: Vec<Vec<Vec<Combination>>> = vec![vec![Vec::new(); n]; n];
        for r in rels {
            let rs = q.arrows[r.terms[0].1[0]].source;
            let rt = q.arrows[*r.terms[0].1.last().unwrap()].target;
            let min_len = r.terms.iter().map(|(_, w)| w.len()).min().unwrap();
            if min_len >= t {
                continue;
            }
            for u in paths.iter().filter(|u| u.target(q) == rs) {
                for w in paths.iter().filter(|w| w.source == rt) {
                    if u.len() + min_len + w.len() >= t {
                        continue;
                    }
                    let mut combo = Vec::new();
                    for (c, word) in &r.terms {
                        let len = u.len() + word.len() + w.len();
                        if len < t {
                            let mut arrows = u.arrows.clone();
                            arrows.extend_from_slice(word);
                            arrows.extend_from_slice(&w.arrows);
                            combo.push((*c, arrows));
                        }
                    }
                    gens[u.source][w.target(q)].push(combo);
                }
            }
        }
        let mut spaces = Vec::with_capacity(n);
        for s in 0..n {
            let mut row = Vec::with_capacity(n);
            for e in 0..n {
                let mut cols = grouped[s][e].clone();
                // longest first so pivots land on long paths
                cols.sort_by(|a, b| b.len().cmp(&a.len()).then(a.arrows.cmp(&b.arrows)));
                let columns: HashMap<Vec<usize>, usize> =
                    cols.iter().enumerate().map(|(i, path)| (path.arrows.clone(), i)).collect();
                let m = cols.len();
                let mut rows = Vec::new();
                for g in &gens[s][e] {
                    let mut v = vec![0u32; m];
                    for (c, word) in g {
                        let i = columns[word];
                        v[i] = crate::linalg::add(p, v[i], *c);
                    }
                    rows.push(v);
                }
                let mat = Matrix::from_rows(p, m, &rows);
                let (r, pivots) = mat.rref();
                for (i, path) in cols.iter().enumerate() {
                    if path.len() == t - 1 && !pivots.contains(&i) {
                        return Err(Error::NotFiniteDimensional(t));
                    }
                }
                let free: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
                let mut rewrite = HashMap::new();
                for (ri, &pc) in pivots.iter().enumerate() {
                    let v: Vec<u32> = free.iter().map(|&fc| neg(p, r.get(ri, fc))).collect();
                    rewrite.insert(pc, v);
                }
                let mut basis_cols = free.clone();
                basis_cols.sort_by(|&a, &b| {
                    cols[a].len().cmp(&cols[b].len()).then(cols[a].arrows.cmp(&cols[b].arrows))
                });
                let basis: Vec<Path> = basis_cols.iter().map(|&c| cols[c].clone()).collect();
                let order = basis_cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
                row.push(PathSpace { columns, rewrite, free, basis, order });
            }
            spaces.push(row);
        }
        Ok(spaces)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }
    pub fn num_vertices(&self) -> usize {
        self.quiver.num_vertices()
    }
    /// Smallest `t` with all paths of length `t - 1` in the ideal.
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Basis of `e_s Λ e_t` (paths from `s` to `t`).
    pub fn path_basis(&self, s: usize, t: usize) -> &[Path] {
        &self.spaces[s][t].basis
    }

    pub fn dim(&self) -> usize {
        self.spaces.iter().flatten().map(|sp| sp.basis.len()).sum()
    }

    /// Coordinates of the class of `path` in [`Algebra::path_basis`].
    pub fn reduce_path(&self, path: &Path) -> Vec<u32> {
        let t = path.target(&self.quiver);
        let sp = &self.spaces[path.source][t];
        let mut out = vec![0; sp.basis.len()];
        let Some(&col) = sp.columns.get(&path.arrows) else { return out };
        if let Some(&k) = sp.order.get(&col) {
            out[k] = 1;
        } else {
            let coeffs = &sp.rewrite[&col];
            for (j, &fc) in sp.free.iter().enumerate() {
                out[sp.order[&fc]] = coeffs[j];
            }
        }
        out
    }

    pub fn opposite(&self) -> Algebra {
        let quiver = self.quiver.opposite();
        let relations = self
            .relations
            .iter()
            .map(|r| Relation {
                terms: r
                    .terms
                    .iter()
                    .map(|(c, w)| (*c, w.iter().rev().copied().collect()))
                    .collect(),
            })
            .collect();
        Algebra::new(self.p, quiver, relations).expect("opposite of an admissible algebra")
    }
}
