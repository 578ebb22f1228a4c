mod common;

use heartloc::cotorsion::cocone_membership;
use heartloc::error::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{cocone_by_search, ext1_by_cocycles, linear, random_rigid};

#[test]
fn ext1_matches_cocycle_count_on_a2_a3() {
    for n in [2, 3] {
        let prob = linear(n);
        let ctx = &prob.ctx;
        for i in 0..ctx.len() {
            for j in 0..ctx.len() {
                let want = ext1_by_cocycles(ctx.algebra(), ctx.member(i), ctx.member(j));
                assert_eq!(ctx.ext_dim(i, j), want, "A{n}: Ext¹({}, {})", ctx.name(i), ctx.name(j));
            }
        }
    }
}

#[test]
fn ext1_on_a2_is_the_known_one() {
    // Only Ext¹(S1, S2) is nonzero for 1 -> 2.
    let prob = linear(2);
    let ctx = &prob.ctx;
    let (s1, s2) = (ctx.lookup("1").unwrap(), ctx.lookup("2").unwrap());
    for i in 0..ctx.len() {
        for j in 0..ctx.len() {
            let want = usize::from(i == s1 && j == s2);
            assert_eq!(ext1_by_cocycles(ctx.algebra(), ctx.member(i), ctx.member(j)), want);
        }
    }
}

#[test]
fn cocone_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen = [0usize; 2];
    for n in [2, 3] {
        let prob = linear(n);
        let ctx = &prob.ctx;
        let mut pool = vec![ctx.projectives(), ctx.injectives(), ctx.all()];
        pool.extend(random_rigid(ctx, &mut rng, 2));
        assert_eq!(pool.len(), 5);
        for bp in &pool {
            for bpp in &pool {
                for x in 0..ctx.len() {
                    let got = match cocone_membership(ctx, ctx.member(x), bp, bpp) {
                        Ok(w) => w.is_some(),
                        Err(Error::Inconclusive(_)) => false,
                        Err(e) => panic!("{e}"),
                    };
                    let want = cocone_by_search(ctx, ctx.member(x), bp, bpp, ctx.dim_cap());
                    assert_eq!(got, want, "A{n}: {} in CoCone({:?}, {:?})", ctx.name(x), bp, bpp);
                    seen[usize::from(want)] += 1;
                }
            }
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}
