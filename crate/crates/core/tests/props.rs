use heartloc::context::{Config, Subcat};
use heartloc::fixtures;
use heartloc::linalg::Matrix;
use heartloc::problem::{ModuleDecl, ProblemFile};
use heartloc::rep::{HomSpace, RepMap};
use proptest::prelude::*;

fn problem_file() -> impl Strategy<Value = ProblemFile> {
    let field = prop::sample::select(vec![2u32, 3, 5, 7, 101]);
    let shape = (1usize..=4, prop::collection::vec((0usize..4, 0usize..4), 0..5));
    (field, shape).prop_flat_map(|(field, (n, raw_arrows))| {
        let vertices: Vec<String> = (1..=n).map(|v| format!("v{v}")).collect();
        let arrows: Vec<(String, String, String)> = raw_arrows
            .iter()
            .enumerate()
            .map(|(i, &(s, t))| (format!("a{i}"), vertices[s % n].clone(), vertices[t % n].clone()))
            .collect();
        let ends: Vec<(usize, usize)> = raw_arrows.iter().map(|&(s, t)| (s % n, t % n)).collect();
        let composable: Vec<Vec<String>> = (0..ends.len())
            .flat_map(|i| (0..ends.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| ends[i].1 == ends[j].0)
            .map(|(i, j)| vec![format!("a{i}"), format!("a{j}")])
            .collect();
        let relations = if composable.is_empty() {
            Just(Vec::new()).boxed()
        } else {
            let term = (prop::sample::select(composable), prop::sample::select(vec![-3i64, -1, 1, 2]));
            prop::collection::vec(prop::collection::vec(term.prop_map(|(w, c)| (c, w)), 1..3), 0..2).boxed()
        };
        let module = prop::collection::vec(0usize..3, n).prop_flat_map({
            let ends = ends.clone();
            move |dims| {
                let maps: Vec<_> = ends
                    .iter()
                    .map(|&(s, t)| prop::collection::vec(prop::collection::vec(0i64..(field as i64), dims[s]), dims[t]))
                    .collect();
                let at = prop::option::of((0usize..5, 0usize..12));
                (Just(dims), maps, at)
            }
        });
        let modules = prop::collection::vec(module, 0..4);
        (Just(field), Just(vertices), Just(arrows), relations, modules, 0usize..3)
    })
    .prop_map(|(field, vertices, arrows, relations, raw, nsub)| {
        let modules: Vec<ModuleDecl> = raw
            .into_iter()
            .enumerate()
            .map(|(i, (dims, maps, at))| ModuleDecl {
                name: format!("M{i}"),
                dims,
                at,
                maps: maps
                    .into_iter()
                    .enumerate()
                    .filter(|(_, rows)| rows.iter().any(|r| !r.is_empty()))
                    .map(|(k, rows)| (format!("a{k}"), rows))
                    .collect(),
            })
            .collect();
        let names: Vec<String> = modules.iter().map(|m| m.name.clone()).collect();
        let subcats: Vec<(String, Vec<String>)> = (0..nsub.min(names.len() + 1))
            .map(|s| (format!("S{s}"), names.iter().take(s).cloned().collect()))
            .collect();
        let tasks = subcats.first().map(|(s, _)| ("main".to_string(), vec!["perp".to_string(), s.clone()])).into_iter().collect();
        ProblemFile { field, vertices, arrows, relations, modules, subcats, tasks }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn parse_serialize_round_trip(pf in problem_file()) {
        let text = pf.serialize();
        let parsed = ProblemFile::parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&parsed, &pf);
        prop_assert_eq!(parsed.serialize(), text);
    }

    #[test]
    fn rank_nullity(rows in 1usize..6, cols in 1usize..6, seed in prop::collection::vec(0u32..7, 36)) {
        let m = Matrix::from_vec(7, rows, cols, seed[..rows * cols].to_vec());
        let null = m.nullspace();
        prop_assert_eq!(m.rank() + null.cols(), cols);
        prop_assert!(m.mul(&null).data().iter().all(|&x| x == 0));
    }
}

fn ex61() -> &'static heartloc::problem::Problem {
    use std::sync::OnceLock;
    static PROB: OnceLock<heartloc::problem::Problem> = OnceLock::new();
    PROB.get_or_init(|| fixtures::ex61(Config::default()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hom_and_ext_are_self_dual(i in 0usize..17, j in 0usize..17) {
        let ctx = &ex61().ctx;
        let dual = ctx.dual();
        prop_assert_eq!(ctx.hom(i, j).dim(), dual.hom(j, i).dim());
        prop_assert_eq!(ctx.ext_dim(i, j), dual.ext_dim(j, i));
    }

    #[test]
    fn hom_basis_composes_with_identity(i in 0usize..17, j in 0usize..17) {
        let ctx = &ex61().ctx;
        let (x, y) = (ctx.member(i), ctx.member(j));
        let hom = HomSpace::compute(ctx.algebra(), x, y);
        for f in hom.basis() {
            prop_assert!(f.is_homomorphism(ctx.algebra()));
            prop_assert_eq!(&RepMap::identity(y).after(f), f);
            prop_assert!(hom.coords(f).is_some());
        }
    }

    #[test]
    fn perpendicular_is_antitone(a in prop::collection::btree_set(0usize..17, 0..5), b in prop::collection::btree_set(0usize..17, 0..5)) {
        let ctx = &ex61().ctx;
        let (s, t) = (Subcat::new(a.iter().copied()), Subcat::new(a.union(&b).copied()));
        prop_assert!(ctx.right_perp(&t).is_subset(&ctx.right_perp(&s)));
        prop_assert!(ctx.left_perp(&t).is_subset(&ctx.left_perp(&s)));
        prop_assert_eq!(ctx.is_rigid(&t), t.is_subset(&ctx.right_perp(&t)));
    }
}
