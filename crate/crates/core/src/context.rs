//! An algebra together with a complete list of its indecomposable modules.
//!
//! Subcategories are additive closures of sets of atlas members, so they are
//! stored as index sets. Hom and Ext data between atlas members is cached.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::endo::{find_isomorphism, is_indecomposable};
use crate::error::{Error, Result};
use crate::homology::{kernel, ExtSpace};
use crate::rep::{direct_sum, injective, projective, simple, DirectSum, HomSpace, Rep, RepMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Bound on candidate objects examined by fallback searches.
    pub search_cap: usize,
    /// Bound on the total dimension of objects built by fallback searches;
    /// `None` means twice the largest atlas dimension.
    pub dim_cap: Option<usize>,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { search_cap: 4096, dim_cap: None, seed: 0x5eed }
    }
}

/// A set of atlas members; the subcategory is its additive closure.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subcat(pub BTreeSet<usize>);

impl Subcat {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Subcat {
        Subcat(members.into_iter().collect())
    }
    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn union(&self, other: &Subcat) -> Subcat {
        Subcat(self.0.union(&other.0).copied().collect())
    }
    pub fn intersection(&self, other: &Subcat) -> Subcat {
        Subcat(self.0.intersection(&other.0).copied().collect())
    }
    pub fn difference(&self, other: &Subcat) -> Subcat {
        Subcat(self.0.difference(&other.0).copied().collect())
    }
    pub fn is_subset(&self, other: &Subcat) -> bool {
        self.0.is_subset(&other.0)
    }
}

/// A module written as a sum of atlas members, with an isomorphism from the
/// sum to the module.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub parts: Vec<usize>,
    pub sum: DirectSum,
    pub iso: RepMap,
}

impl Decomposition {
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &i in &self.parts {
            *m.entry(i).or_insert(0) += 1;
        }
        m
    }

    pub fn lies_in(&self, s: &Subcat) -> bool {
        self.parts.iter().all(|&i| s.contains(i))
    }
}

pub struct Context {
    alg: Algebra,
    atlas: Vec<Arc<Rep>>,
    index: HashMap<String, usize>,
    projectives: Vec<usize>,
    injectives: Vec<usize>,
    config: Config,
    homs: Mutex<HashMap<(usize, usize), Arc<HomSpace>>>,
    exts: Mutex<HashMap<(usize, usize), Arc<ExtSpace>>>,
    rng: Mutex<ChaCha8Rng>,
    dual: OnceLock<Arc<Context>>,
}

impl std::fmt::Debug for Context {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Context").field("atlas", &self.names()).finish()
    }
}

impl Context {
    /// Members are ordered by name. Checks that every member is
    /// indecomposable, that members are pairwise non-isomorphic, and that all
    /// indecomposable projectives and injectives occur.
    pub fn new(alg: Algebra, mut atlas: Vec<Rep>, config: Config) -> Result<Context> {
        atlas.sort_by(|a, b| a.name.cmp(&b.name));
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut index = HashMap::new();
        let mut members = Vec::new();
        for rep in atlas {
            rep.validate(&alg)?;
            if index.insert(rep.name.clone(), members.len()).is_some() {
                return Err(Error::InvalidAtlas(format!("duplicate name `{}`", rep.name)));
            }
            let rep = Arc::new(rep);
            if !is_indecomposable(&alg, &rep, &mut rng) {
                return Err(Error::InvalidAtlas(format!("`{}` is not indecomposable", rep.name)));
            }
            members.push(rep);
        }
        for i in 0..members.len() {
            for j in 0..i {
                if members[i].dims == members[j].dims
                    && find_isomorphism(&alg, &members[j], &members[i], &mut rng).is_some()
                {
                    return Err(Error::InvalidAtlas(format!(
                        "`{}` and `{}` are isomorphic",
                        members[j].name, members[i].name
                    )));
                }
            }
        }
        let locate = |rep: Rep, rng: &mut ChaCha8Rng| -> Result<usize> {
            let rep = Arc::new(rep);
            members
                .iter()
                .position(|m| m.dims == rep.dims && find_isomorphism(&alg, m, &rep, rng).is_some())
                .ok_or_else(|| {
                    Error::InvalidAtlas(format!("no member isomorphic to {} {}", rep.name, rep.dim_vector()))
                })
        };
        let mut projectives = Vec::new();
        let mut injectives = Vec::new();
        for v in 0..alg.num_vertices() {
            projectives.push(locate(projective(&alg, v), &mut rng)?);
            injectives.push(locate(injective(&alg, v), &mut rng)?);
            locate(simple(&alg, v), &mut rng)?;
        }
        Ok(Context {
            alg,
            atlas: members,
            index,
            projectives,
            injectives,
            homs: Mutex::new(HashMap::new()),
            exts: Mutex::new(HashMap::new()),
            rng: Mutex::new(rng),
            dual: OnceLock::new(),
            config,
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }
    pub fn p(&self) -> u32 {
        self.alg.p()
    }
    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn dim_cap(&self) -> usize {
        self.config.dim_cap.unwrap_or_else(|| 2 * self.atlas.iter().map(|r| r.dim()).max().unwrap_or(0))
    }

    pub fn atlas(&self) -> &[Arc<Rep>] {
        &self.atlas
    }
    pub fn len(&self) -> usize {
        self.atlas.len()
    }
    pub fn is_empty(&self) -> bool {
        self.atlas.is_empty()
    }
    pub fn member(&self, i: usize) -> &Arc<Rep> {
        &self.atlas[i]
    }
    pub fn name(&self, i: usize) -> &str {
        &self.atlas[i].name
    }
    pub fn names(&self) -> Vec<&str> {
        self.atlas.iter().map(|r| r.name.as_str()).collect()
    }
    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::Undeclared(format!("`{name}`")))
    }
    pub fn all(&self) -> Subcat {
        Subcat::new(0..self.atlas.len())
    }
    pub fn projectives(&self) -> Subcat {
        Subcat::new(self.projectives.iter().copied())
    }
    pub fn injectives(&self) -> Subcat {
        Subcat::new(self.injectives.iter().copied())
    }
    pub fn projective_at(&self, v: usize) -> usize {
        self.projectives[v]
    }
    pub fn injective_at(&self, v: usize) -> usize {
        self.injectives[v]
    }

    pub fn subcat(&self, names: &[&str]) -> Result<Subcat> {
        names.iter().map(|n| self.lookup(n)).collect::<Result<BTreeSet<_>>>().map(Subcat)
    }

    pub fn subcat_names(&self, s: &Subcat) -> Vec<String> {
        s.iter().map(|i| self.name(i).to_string()).collect()
    }

    pub fn with_rng<T>(&self, f: impl FnOnce(&mut ChaCha8Rng) -> T) -> T {
        f(&mut self.rng.lock().expect("rng lock"))
    }

    pub fn hom(&self, i: usize, j: usize) -> Arc<HomSpace> {
        if let Some(h) = self.homs.lock().expect("cache lock").get(&(i, j)) {
            return h.clone();
        }
        let h = Arc::new(HomSpace::compute(&self.alg, &self.atlas[i], &self.atlas[j]));
        self.homs.lock().expect("cache lock").insert((i, j), h.clone());
        h
    }

    /// `Ext¹(atlas[i], atlas[j])`.
    pub fn ext(&self, i: usize, j: usize) -> Arc<ExtSpace> {
        if let Some(e) = self.exts.lock().expect("cache lock").get(&(i, j)) {
            return e.clone();
        }
        let e = Arc::new(ExtSpace::compute(&self.alg, &self.atlas[i], &self.atlas[j]));
        self.exts.lock().expect("cache lock").insert((i, j), e.clone());
        e
    }

    pub fn ext_dim(&self, i: usize, j: usize) -> usize {
        self.ext(i, j).dim()
    }

    /// Whether `Ext¹(A, B) = 0` for all `A ∈ a`, `B ∈ b`.
    pub fn ext_orthogonal(&self, a: &Subcat, b: &Subcat) -> bool {
        a.iter().all(|i| b.iter().all(|j| self.ext_dim(i, j) == 0))
    }

    pub fn is_rigid(&self, s: &Subcat) -> bool {
        self.ext_orthogonal(s, s)
    }

    /// `S^⊥1` restricted to the atlas.
    pub fn right_perp(&self, s: &Subcat) -> Subcat {
        Subcat::new((0..self.len()).filter(|&x| s.iter().all(|i| self.ext_dim(i, x) == 0)))
    }

    /// `⊥1S` restricted to the atlas.
    pub fn left_perp(&self, s: &Subcat) -> Subcat {
        Subcat::new((0..self.len()).filter(|&x| s.iter().all(|i| self.ext_dim(x, i) == 0)))
    }

    /// The direct sum of the given atlas members.
    pub fn object(&self, parts: &[usize]) -> DirectSum {
        let reps: Vec<Arc<Rep>> = parts.iter().map(|&i| self.atlas[i].clone()).collect();
        direct_sum(&self.alg, &reps)
    }

    /// Splits off atlas members one at a time. Fails with
    /// [`Error::AtlasIncomplete`] if some summand matches no member.
    pub fn decompose(&self, m: &Arc<Rep>) -> Result<Decomposition> {
        let alg = &self.alg;
        let mut cur = RepMap::identity(m);
        let mut parts = Vec::new();
        let mut comps = Vec::new();
        while !cur.source.is_zero() {
            let n = cur.source.clone();
            let mut split = None;
            'atlas: for (i, x) in self.atlas.iter().enumerate() {
                if x.dims.iter().zip(&n.dims).any(|(a, b)| a > b) {
                    continue;
                }
                let into = HomSpace::compute(alg, x, &n);
                if into.dim() == 0 {
                    continue;
                }
                let back = HomSpace::compute(alg, &n, x);
                for s in into.basis() {
                    for r in back.basis() {
                        let rs = r.after(s);
                        if let Some(inv) = rs.inverse() {
                            split = Some((i, s.clone(), inv.after(r)));
                            break 'atlas;
                        }
                    }
                }
            }
            let Some((i, s, retraction)) = split else {
                return Err(Error::AtlasIncomplete(format!(
                    "a summand of `{}` with dimension vector within {} matches no atlas member",
                    m.name,
                    n.dim_vector()
                )));
            };
            let k = kernel(alg, &retraction);
            parts.push(i);
            comps.push(cur.after(&s));
            cur = cur.after(&k);
        }
        let sum = self.object(&parts);
        let iso = sum.map_from(m, &comps);
        debug_assert!(iso.is_iso());
        Ok(Decomposition { parts, sum, iso })
    }

    pub fn in_add(&self, m: &Arc<Rep>, s: &Subcat) -> Result<bool> {
        Ok(self.decompose(m)?.lies_in(s))
    }

    /// Isomorphism test through decompositions, exact over any field.
    pub fn isomorphic(&self, a: &Arc<Rep>, b: &Arc<Rep>) -> Result<bool> {
        if a.dims != b.dims {
            return Ok(false);
        }
        let mut da = self.decompose(a)?.parts;
        let mut db = self.decompose(b)?.parts;
        da.sort_unstable();
        db.sort_unstable();
        Ok(da == db)
    }

    /// The same data over the opposite algebra via vector-space duality.
    /// Member names and indices are preserved, so subcategories carry over.
    pub fn dual(&self) -> Arc<Context> {
        self.dual
            .get_or_init(|| {
                let alg = self.alg.opposite();
                let atlas: Vec<Rep> = self.atlas.iter().map(|r| r.dual()).collect();
                Arc::new(Context::new(alg, atlas, self.config.clone()).expect("dual of a valid atlas"))
            })
            .clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Quiver;
    use crate::linalg::Matrix;

    pub(crate) fn a2_context() -> Context {
        let q = Quiver::new(vec!["1".into(), "2".into()], &[("a".into(), "1".into(), "2".into())]).unwrap();
        let alg = Algebra::new(101, q, vec![]).unwrap();
        let s1 = simple(&alg, 0).with_name("1");
        let s2 = simple(&alg, 1).with_name("2");
        let p1 = Rep::new(&alg, "12", vec![1, 1], vec![Matrix::identity(101, 1)]).unwrap();
        Context::new(alg, vec![s2, p1, s1], Config::default()).unwrap()
    }

    #[test]
    fn a2_atlas_and_perps() {
        let ctx = a2_context();
        assert_eq!(ctx.projectives(), ctx.subcat(&["2", "12"]).unwrap());
        assert_eq!(ctx.injectives(), ctx.subcat(&["12", "1"]).unwrap());
        assert_eq!(ctx.ext_dim(0, 2), 1);
        let s1 = ctx.subcat(&["1"]).unwrap();
        assert_eq!(ctx.right_perp(&s1), ctx.subcat(&["12", "1"]).unwrap());
        assert!(!ctx.is_rigid(&ctx.all()));
    }

    #[test]
    fn decomposition_of_a_sum() {
        let ctx = a2_context();
        let sum = ctx.object(&[2, 1, 0, 2]).rep;
        let d = ctx.decompose(&sum).unwrap();
        let mut parts = d.parts.clone();
        parts.sort();
        assert_eq!(parts, vec![0, 1, 2, 2]);
        assert_eq!(ctx.names(), vec!["1", "12", "2"]);
        assert!(d.iso.is_iso() && d.iso.is_homomorphism(ctx.algebra()));
    }

    #[test]
    fn incomplete_atlas_is_reported() {
        let q = Quiver::new(vec!["1".into(), "2".into()], &[("a".into(), "1".into(), "2".into())]).unwrap();
        let alg = Algebra::new(101, q, vec![]).unwrap();
        let s2 = simple(&alg, 1).with_name("2");
        let p1 = Rep::new(&alg, "12", vec![1, 1], vec![Matrix::identity(101, 1)]).unwrap();
        let s1 = Arc::new(simple(&alg, 0));
        // S1 is the injective at vertex 1, so the atlas is rejected outright
        assert!(Context::new(alg.clone(), vec![s2, p1], Config::default()).is_err());
        let ctx = a2_context();
        assert!(ctx.decompose(&s1).is_ok());
    }

    #[test]
    fn dual_context_keeps_names() {
        let ctx = a2_context();
        let d = ctx.dual();
        assert_eq!(d.names(), ctx.names());
        // projectives and injectives swap under duality
        assert_eq!(d.projectives(), ctx.injectives());
    }
}
