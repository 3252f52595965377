use std::collections::BTreeMap;

use proptest::prelude::*;

use workbench::boolos::{self, ChoiceMap, Woset};
use workbench::carrier::{FiniteCarrier, Subset};
use workbench::inclosure::{self, Condition, InclosureCandidate, Verdict};
use workbench::schema::{self, DiagonalInstance};

/// Carrier size, table `f` and endomap `α` over values `0..d`.
fn instance() -> impl Strategy<Value = (usize, usize, Vec<usize>, Vec<usize>)> {
    (1usize..=4, 1usize..=3).prop_flat_map(|(b, d)| {
        (
            Just(b),
            Just(d),
            prop::collection::vec(0..d, b * b),
            prop::collection::vec(0..d, d),
        )
    })
}

fn choice_map() -> impl Strategy<Value = ChoiceMap> {
    (1usize..=5).prop_flat_map(|n| {
        prop::collection::vec(0..n, 1 << n)
            .prop_map(move |t| ChoiceMap::new(FiniteCarrier::numeric(n).unwrap(), t).unwrap())
    })
}

/// Every element is `h` of the elements listed before it.
fn woset_by_hand(h: &ChoiceMap, w: &Woset) -> bool {
    let mut below = Subset::default();
    for &b in w.order() {
        if h.apply(below) != b || below.contains(b) {
            return false;
        }
        below = below.with(b);
    }
    true
}

fn candidate() -> impl Strategy<Value = InclosureCandidate> {
    (1usize..=3).prop_flat_map(|n| {
        let subsets = 1u32 << n;
        (
            prop::collection::btree_set(0..subsets, 0..=subsets as usize),
            prop::collection::vec(0..n, subsets as usize),
        )
            .prop_map(move |(theta, delta)| {
                let theta: Vec<Subset> = theta.into_iter().map(Subset).collect();
                let delta: BTreeMap<Subset, usize> = theta.iter().map(|&x| (x, delta[x.0 as usize])).collect();
                InclosureCandidate::new(FiniteCarrier::numeric(n).unwrap(), theta, delta).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn diagonal_escapes_when_alpha_has_no_fixed_point((b, d, f, alpha) in instance()) {
        let inst = DiagonalInstance::new(
            FiniteCarrier::numeric(b).unwrap(),
            FiniteCarrier::numeric(d).unwrap(),
            f.clone(),
            alpha.clone(),
        ).unwrap();
        let r = schema::schema_report(&inst);
        let g: Vec<usize> = (0..b).map(|x| alpha[f[x * b + x]]).collect();
        prop_assert_eq!(&r.g, &g);
        let columns: Vec<usize> = (0..b).filter(|&c| (0..b).all(|x| f[x * b + c] == g[x])).collect();
        prop_assert_eq!(&r.representing_indices, &columns);
        let fixed: Vec<usize> = (0..d).filter(|&v| alpha[v] == v).collect();
        prop_assert_eq!(&r.alpha_fixed_points, &fixed);
        if fixed.is_empty() {
            prop_assert!(columns.is_empty());
        }
        prop_assert!(r.consistent);
    }

    #[test]
    fn instance_text_round_trip((b, d, f, alpha) in instance()) {
        let inst = DiagonalInstance::new(
            FiniteCarrier::numeric(b).unwrap(),
            FiniteCarrier::numeric(d).unwrap(),
            f,
            alpha,
        ).unwrap();
        prop_assert_eq!(DiagonalInstance::parse(&inst.to_text()).unwrap(), inst);
    }

    #[test]
    fn boolos_map_checks(h in choice_map()) {
        let c = boolos::check_map(&h);
        prop_assert!(c.all_pass(), "{:?} on {:?}", c, h.table());
        let w = boolos::build_max_woset(&h);
        prop_assert!(woset_by_hand(&h, &w));
        // the maximal woset cannot be extended
        prop_assert!(w.elements().contains(h.apply(w.elements())));
        let wit = boolos::boolos_witness(&h);
        prop_assert!(wit.v.is_proper_subset_of(wit.w));
        prop_assert_eq!(h.apply(wit.v), h.apply(wit.w));
        prop_assert!(wit.w.contains(h.apply(wit.w)) && !wit.v.contains(h.apply(wit.v)));
    }

    #[test]
    fn every_enumerated_woset_is_an_initial_segment(h in choice_map()) {
        prop_assume!(h.len() <= boolos::MAX_ENUMERATE);
        let max = boolos::build_max_woset(&h);
        for w in boolos::enumerate_wosets(&h).unwrap() {
            prop_assert!(woset_by_hand(&h, &w));
            prop_assert_eq!(&max.order()[..w.len()], w.order());
        }
    }

    #[test]
    fn choice_map_text_round_trip(h in choice_map()) {
        prop_assert_eq!(ChoiceMap::parse(&h.to_text()).unwrap(), h);
    }

    #[test]
    fn no_candidate_is_an_inclosure(c in candidate()) {
        match inclosure::validate(&c) {
            Verdict::Valid => prop_assert!(false, "valid inclosure {}", c.to_text()),
            Verdict::Violation(v) => {
                prop_assert!(v.recheck(&c));
                let full = c.omega().full();
                if c.theta().contains(&full) {
                    prop_assert_eq!(v.condition, Condition::DeltaEscapes);
                    let (inst, at) = inclosure::schema_embedding(&c).unwrap();
                    let r = schema::schema_report(&inst);
                    prop_assert!(r.consistent);
                    prop_assert!(!r.representing_indices.contains(&at));
                }
            }
        }
    }

    #[test]
    fn candidate_text_round_trip(c in candidate()) {
        prop_assert_eq!(InclosureCandidate::parse(&c.to_text()).unwrap(), c);
    }
}
