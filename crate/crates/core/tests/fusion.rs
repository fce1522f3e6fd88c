use beltex::belief::MassFunction;
use beltex::decision::{decide_cardinality4_with_reject_mapping, pairwise_intersections_union};
use beltex::fusion::{
    fuse_hyper, fuse_power, pairs, pairwise_mass, BranchVariant, MassModelParams, PairParams,
    PairwiseScoreSet,
};
use beltex::lattice::{Element, Frame, HyperElement, PowerElement};
use proptest::prelude::*;

fn frame(n: usize) -> Frame {
    Frame::new((1..=n).map(|i| format!("C{i}"))).unwrap()
}

fn params(n: usize, alpha: f64, lp: f64, ln: f64, variant: BranchVariant) -> MassModelParams {
    MassModelParams {
        alpha,
        variant,
        pairs: pairs(n)
            .into_iter()
            .map(|(i, j)| PairParams {
                i,
                j,
                lambda_p: lp,
                lambda_n: ln,
                alpha: None,
                l: None,
            })
            .collect(),
    }
}

fn variant() -> impl Strategy<Value = BranchVariant> {
    prop_oneof![Just(BranchVariant::Verbatim), Just(BranchVariant::Swapped)]
}

proptest! {
    #[test]
    fn pairwise_masses_are_normal(
        f in -50.0f64..50.0, lp in 0.01f64..10.0, ln in -10.0f64..-0.01,
        alpha in 0.01f64..=1.0, v in variant()
    ) {
        let p = params(2, alpha, lp, ln, v);
        let m: MassFunction<PowerElement> = pairwise_mass(&frame(2), &p, &p.pairs[0], f).unwrap();
        prop_assert!((m.total() - 1.0).abs() <= 1e-12);
        prop_assert!((m.mass(&PowerElement::full(2)) - (1.0 - alpha)).abs() <= 1e-15);
    }

    #[test]
    fn verbatim_mass_on_first_class_grows_within_each_branch(
        a in 0.0f64..20.0, b in 0.0f64..20.0, lp in 0.1f64..5.0, ln in -5.0f64..-0.1
    ) {
        let p = params(2, 0.9, lp, ln, BranchVariant::Verbatim).pairs.remove(0);
        let (lo, hi) = (a.min(b), a.max(b));
        let mi = |f: f64| p.masses(f, 0.9, BranchVariant::Verbatim).0;
        prop_assert!(mi(lo) <= mi(hi) + 1e-15);
        // the negative branch, read from -hi up to just below 0
        prop_assert!(mi(-hi) <= mi(-lo.max(1e-9)) + 1e-15);
    }

    #[test]
    fn swapped_variant_is_continuous_and_even_in_the_score(
        f in 0.0f64..20.0, g in 0.0f64..20.0, lp in 0.1f64..5.0
    ) {
        let p = params(2, 0.9, lp, -lp, BranchVariant::Swapped).pairs.remove(0);
        let mi = |f: f64| p.masses(f, 0.9, BranchVariant::Swapped).0;
        prop_assert!((mi(-1e-12) - mi(0.0)).abs() < 1e-9);
        // with symmetric lambdas only |f| matters
        prop_assert!((mi(f) - mi(-f)).abs() < 1e-12);
        prop_assert!(mi(f.min(g)) <= mi(f.max(g)) + 1e-15);
    }

    #[test]
    fn fused_masses_are_normal_in_both_algebras(
        f in prop::collection::vec(-5.0f64..5.0, 3), alpha in 0.5f64..0.99
    ) {
        let p = params(3, alpha, 0.8, -1.2, BranchVariant::Verbatim);
        let s = PairwiseScoreSet::new(frame(3), f).unwrap();
        let pw = fuse_power(&s, &p).unwrap();
        let hy = fuse_hyper(&s, &p).unwrap();
        prop_assert!((pw.total() - 1.0).abs() <= 1e-12);
        prop_assert_eq!(pw.empty_mass(), 0.0);
        prop_assert!((hy.total() - 1.0).abs() <= 1e-12);
        // power focal elements: singletons and Θ only
        prop_assert!(pw.focal().iter().all(|(x, _)| x.len() == 1 || x.len() == 3));
    }

    #[test]
    fn embedded_power_fusion_agrees_with_the_reject_rule(
        f in prop::collection::vec(-5.0f64..5.0, 3), alpha in 0.5f64..0.99
    ) {
        let p = params(3, alpha, 0.8, -1.2, BranchVariant::Verbatim);
        let s = PairwiseScoreSet::new(frame(3), f).unwrap();
        let pw = fuse_power(&s, &p).unwrap();
        let out = decide_cardinality4_with_reject_mapping(&pw.embed().unwrap(), &pw).unwrap();
        let scores: Vec<f64> = out.hyper.scores.iter().map(|(_, v)| *v).collect();
        let mut sorted = scores.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if sorted[0] - sorted[1] > 1e-9 {
            prop_assert!(out.agrees);
        }
    }

    #[test]
    fn free_conjunctive_gap_between_singleton_and_pairwise_intersections(
        f in prop::collection::vec(-5.0f64..5.0, 3), alpha in 0.5f64..0.99
    ) {
        // GPT(Ck) - GPT(I2) = (m(Ck) - m(Ci) - m(Cj)) / 4 - m(Ci∩Cj) / 2
        let p = params(3, alpha, 0.8, -1.2, BranchVariant::Verbatim);
        let s = PairwiseScoreSet::new(frame(3), f).unwrap();
        let m = fuse_hyper(&s, &p).unwrap();
        let c = HyperElement::singletons(3);
        let i2 = pairwise_intersections_union(3).unwrap();
        for k in 0..3 {
            let (i, j) = match k { 0 => (1, 2), 1 => (0, 2), _ => (0, 1) };
            let want = (m.mass(&c[k]) - m.mass(&c[i]) - m.mass(&c[j])) / 4.0
                - m.mass(&c[i].meet(&c[j])) / 2.0;
            prop_assert!((m.gpt(&c[k]) - m.gpt(&i2) - want).abs() < 1e-12);
        }
    }
}

#[test]
fn pairwise_example_in_the_hyper_power_set() {
    // m12 = {C1: 0.5, Θ: 0.5} and m23 = {C2: 0.6, Θ: 0.4} combine without conflict
    let f = frame(3);
    let c = HyperElement::singletons(3);
    let m12 = MassFunction::new(f.clone(), [(c[0], 0.5), (HyperElement::full(3), 0.5)]).unwrap();
    let m23 = MassFunction::new(f.clone(), [(c[1], 0.6), (HyperElement::full(3), 0.4)]).unwrap();
    let r = beltex::belief::conjunctive_combine_hyper(&[m12, m23]).unwrap();
    for (x, want) in [
        (c[0].meet(&c[1]), 0.5 * 0.6),
        (c[0], 0.5 * 0.4),
        (c[1], 0.5 * 0.6),
        (HyperElement::full(3), 0.5 * 0.4),
    ] {
        assert!((r.mass(&x) - want).abs() < 1e-12);
    }
}
