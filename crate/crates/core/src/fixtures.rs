//! Shipped example problems.

use crate::context::Config;
use crate::error::Result;
use crate::problem::{ModuleDecl, Problem, ProblemFile};

pub const EX61: &str = include_str!("../fixtures/ex61.txt");
pub const EX62: &str = include_str!("../fixtures/ex62.txt");

pub fn ex61(config: Config) -> Result<Problem> {
    ProblemFile::parse(EX61)?.build(None, config)
}

pub fn ex62(config: Config) -> Result<Problem> {
    ProblemFile::parse(EX62)?.build(None, config)
}

pub fn by_name(name: &str) -> Option<&'static str> {
    match name {
        "ex61" => Some(EX61),
        "ex62" => Some(EX62),
        _ => None,
    }
}

/// The path algebra of `1 -> 2 -> ... -> n` with all interval modules,
/// named by their support (`"23"` is supported on vertices 2 and 3).
pub fn linear_path_algebra(p: u32, n: usize) -> ProblemFile {
    assert!((1..=9).contains(&n), "vertex labels are single digits");
    let vertices: Vec<String> = (1..=n).map(|v| v.to_string()).collect();
    let arrows: Vec<(String, String, String)> = (1..n)
        .map(|v| (format!("a{v}"), v.to_string(), (v + 1).to_string()))
        .collect();
    let mut modules = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            let name: String = (i..=j).map(|v| v.to_string()).collect();
            let dims = (1..=n).map(|v| usize::from(i <= v && v <= j)).collect();
            let maps = (i..j).map(|v| (format!("a{v}"), vec![vec![1]])).collect();
            modules.push(ModuleDecl { name, dims, at: None, maps });
        }
    }
    ProblemFile { field: p, vertices, arrows, modules, ..ProblemFile::default() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_examples_build() {
        let p = ex61(Config::default()).unwrap();
        assert_eq!(p.ctx.len(), 17);
        assert_eq!(p.ctx.algebra().num_vertices(), 6);
        let c = p.subcat("C").unwrap();
        assert!(p.ctx.is_rigid(c));
        assert_eq!(p.ctx.right_perp(c), *p.subcat("Cperp").unwrap());
        assert!(ex62(Config::default()).is_ok());
    }

    #[test]
    fn linear_path_algebras_build() {
        for n in 1..=4 {
            let pf = linear_path_algebra(2, n);
            let prob = pf.build(None, Config::default()).unwrap();
            assert_eq!(prob.ctx.len(), n * (n + 1) / 2);
        }
    }

    #[test]
    fn atlas_must_hold_every_simple() {
        // the simple at the middle vertex of A3 is neither projective nor injective
        let mut pf = linear_path_algebra(2, 3);
        pf.modules.retain(|m| m.name != "2");
        let err = pf.build(None, Config::default()).unwrap_err();
        assert!(matches!(err, crate::error::Error::InvalidAtlas(_)), "{err:?}");
    }
}
