use super::*;
use crate::perm::{occurrences, tests_support::all_perms};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

fn p(text: &str) -> Perm {
    text.parse().unwrap()
}

fn pats(texts: &[&str]) -> Vec<Pattern> {
    texts.iter().map(|t| p(t)).collect()
}

fn all_len3() -> Vec<Perm> {
    all_perms(3)
}

#[test]
fn normalize_examples() {
    let d = Family::normalize(&pats(&["213", "231"])).unwrap();
    assert_eq!(d.kind(), FamilyKind::PairD);
    assert!(!d.symmetry().is_identity());

    let t = Family::normalize(&pats(&["123", "321"])).unwrap();
    assert_eq!(t.kind(), FamilyKind::Trivial);

    let d = Family::normalize(&pats(&["132", "312"])).unwrap();
    assert_eq!(d.kind(), FamilyKind::PairD);
    assert!(d.symmetry().is_identity());

    let u = Family::normalize(&[]).unwrap();
    assert_eq!(u.kind(), FamilyKind::Unrestricted);

    let s = Family::normalize(&pats(&["123"])).unwrap();
    assert_eq!(s.kind(), FamilyKind::Single321);

    let err = Family::normalize(&[p("1234")]).unwrap_err();
    assert!(matches!(err, FamilyError::PatternLength(_)));
}

#[test]
fn normalize_maps_user_set_onto_canonical() {
    for subset_bits in 1u32..64 {
        let set: Vec<Perm> = all_len3()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| subset_bits >> i & 1 == 1)
            .map(|(_, x)| x)
            .collect();
        let fam = Family::normalize(&set).unwrap();
        if fam.kind() == FamilyKind::Trivial {
            continue;
        }
        let image: BTreeSet<Perm> = fam.forbidden().iter().map(|q| fam.symmetry().apply(q)).collect();
        let canon: BTreeSet<Perm> = fam.kind().canonical_set().into_iter().collect();
        assert_eq!(image, canon);
        let back: BTreeSet<Perm> = canon.iter().map(|q| fam.symmetry().apply_inverse(q)).collect();
        let user: BTreeSet<Perm> = fam.forbidden().iter().cloned().collect();
        assert_eq!(back, user);
    }
}

#[test]
fn classification_counts_by_size() {
    let mut by_kind: BTreeMap<(usize, FamilyKind), u32> = BTreeMap::new();
    for subset_bits in 1u32..64 {
        let set: Vec<Perm> = all_len3()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| subset_bits >> i & 1 == 1)
            .map(|(_, x)| x)
            .collect();
        let fam = Family::normalize(&set).unwrap();

        let has_both = set.contains(&p("123")) && set.contains(&p("321"));
        let trivial = has_both || set.len() >= 4;
        assert_eq!(
            fam.kind() == FamilyKind::Trivial,
            trivial,
            "set {set:?} classified as {}",
            fam.name()
        );
        *by_kind.entry((set.len(), fam.kind())).or_insert(0) += 1;
    }
    assert_eq!(by_kind[&(1, FamilyKind::Single132)], 4);
    assert_eq!(by_kind[&(1, FamilyKind::Single321)], 2);
    assert_eq!(by_kind[&(2, FamilyKind::PairD)], 4);
    assert_eq!(by_kind[&(2, FamilyKind::PairB)], 2);
    assert_eq!(by_kind[&(2, FamilyKind::PairA)], 4);
    assert_eq!(by_kind[&(2, FamilyKind::PairE)], 4);
    assert_eq!(by_kind[&(2, FamilyKind::Trivial)], 1);
    assert_eq!(by_kind[&(3, FamilyKind::TripleAaa)], 2);
    assert_eq!(by_kind[&(3, FamilyKind::TripleCcc)], 4);
    assert_eq!(by_kind[&(3, FamilyKind::TripleBbb)], 8);
    assert_eq!(by_kind[&(3, FamilyKind::TripleEee)], 2);
    assert_eq!(by_kind[&(3, FamilyKind::Trivial)], 4);
}

#[test]
fn cardinality_examples() {
    let card = |kind: FamilyKind, n: u64| {
        Family::from_kind(kind).unwrap().cardinality(n).unwrap()
    };
    assert_eq!(card(FamilyKind::PairD, 4), BigUint::from(8u32));
    assert_eq!(card(FamilyKind::TripleAaa, 5), BigUint::from(8u32));
    assert_eq!(card(FamilyKind::PairE, 4), BigUint::from(7u32));
    assert_eq!(card(FamilyKind::Single132, 4), BigUint::from(14u32));
    assert_eq!(card(FamilyKind::TripleCcc, 9), BigUint::from(9u32));
    assert_eq!(card(FamilyKind::Unrestricted, 6), BigUint::from(720u32));
    assert_eq!(
        card(FamilyKind::PairB, 80),
        BigUint::from(1u32) << 79,
    );
}

#[test]
fn cardinality_matches_brute_force() {
    for kind in FamilyKind::STRUCTURED {
        let fam = Family::from_kind(kind).unwrap();
        for n in 1..=6u64 {
            let brute = all_perms(n as usize)
                .into_iter()
                .filter(|x| avoids(x, fam.forbidden()))
                .count();
            assert_eq!(
                fam.cardinality(n).unwrap(),
                BigUint::from(brute),
                "{} at n={n}",
                fam.name()
            );
        }
    }
}

#[test]
fn trivial_family_rejects_structured_operations() {
    let t = Family::normalize(&pats(&["123", "321"])).unwrap();
    assert!(matches!(t.cardinality(3), Err(FamilyError::Unsupported(_))));
    assert!(matches!(t.enumerate(3), Err(FamilyError::Unsupported(_))));
    assert!(matches!(t.sampler(3), Err(FamilyError::Unsupported(_))));
    assert!(matches!(t.encode(&p("213")), Err(FamilyError::NoCodedForm(_))));
    assert!(t.is_member(&p("213")));
    assert!(!t.is_member(&p("123")));
}

#[test]
fn encode_examples() {
    let d = Family::from_kind(FamilyKind::PairD).unwrap();
    assert_eq!(d.encode(&p("231")).unwrap(), Code::Signs { signs: vec![1, -1] });

    let b = Family::from_kind(FamilyKind::PairB).unwrap();
    assert_eq!(
        b.encode(&p("21435")).unwrap(),
        Code::Composition { parts: vec![2, 2, 1] }
    );

    let e = Family::from_kind(FamilyKind::PairE).unwrap();
    assert_eq!(e.encode(&p("2134")).unwrap(), Code::Grid { k: 1, l: 1, m: 2 });

    assert!(matches!(
        d.encode(&p("132")),
        Err(FamilyError::NotAMember(_, _))
    ));
}

#[test]
fn decode_examples() {
    let d = Family::from_kind(FamilyKind::PairD).unwrap();
    assert_eq!(d.decode(&Code::Signs { signs: vec![1, -1] }).unwrap(), p("231"));

    let aaa = Family::from_kind(FamilyKind::TripleAaa).unwrap();
    assert_eq!(
        aaa.decode(&Code::Composition { parts: vec![2, 1, 2] }).unwrap(),
        p("21354")
    );

    let eee = Family::from_kind(FamilyKind::TripleEee).unwrap();
    assert_eq!(eee.decode(&Code::Index { k: 2, n: 5 }).unwrap(), p("45123"));
}

#[test]
fn malformed_codes_are_rejected() {
    let d = Family::from_kind(FamilyKind::PairD).unwrap();
    assert!(d.decode(&Code::Signs { signs: vec![1, 0] }).is_err());
    assert!(d.decode(&Code::Composition { parts: vec![1] }).is_err());

    let b = Family::from_kind(FamilyKind::PairB).unwrap();
    assert!(b.decode(&Code::Composition { parts: vec![] }).is_err());
    assert!(b.decode(&Code::Composition { parts: vec![2, 0] }).is_err());

    let aaa = Family::from_kind(FamilyKind::TripleAaa).unwrap();
    assert!(aaa.decode(&Code::Composition { parts: vec![3] }).is_err());

    let e = Family::from_kind(FamilyKind::PairE).unwrap();
    assert!(e.decode(&Code::Grid { k: 0, l: 1, m: 1 }).is_err());

    let ccc = Family::from_kind(FamilyKind::TripleCcc).unwrap();
    assert!(ccc.decode(&Code::Index { k: 0, n: 4 }).is_err());
    assert!(ccc.decode(&Code::Index { k: 5, n: 4 }).is_err());
}

#[test]
fn code_json_shape() {
    let code = Code::Signs { signs: vec![1, -1] };
    let json = serde_json::to_value(&code).unwrap();
    assert_eq!(json, serde_json::json!({"form": "signs", "signs": [1, -1]}));
    let back: Code = serde_json::from_value(json).unwrap();
    assert_eq!(back, code);

    let code = Code::Grid { k: 2, l: 1, m: 0 };
    let json = serde_json::to_value(&code).unwrap();
    assert_eq!(json, serde_json::json!({"form": "grid", "k": 2, "l": 1, "m": 0}));

    let code = Code::Index { k: 3, n: 7 };
    let json = serde_json::to_value(&code).unwrap();
    assert_eq!(json, serde_json::json!({"form": "index", "k": 3, "n": 7}));
}

#[test]
fn enumerate_examples() {
    let d = Family::from_kind(FamilyKind::PairD).unwrap();
    let members: Vec<Perm> = d.enumerate(3).unwrap().collect();
    assert_eq!(members.len(), 4);

    let ccc = Family::from_kind(FamilyKind::TripleCcc).unwrap();
    let members: BTreeSet<Perm> = ccc.enumerate(3).unwrap().collect();
    let want: BTreeSet<Perm> = pats(&["123", "213", "321"]).into_iter().collect();
    assert_eq!(members, want);

    for kind in FamilyKind::STRUCTURED {
        let fam = Family::from_kind(kind).unwrap();
        let members: Vec<Perm> = fam.enumerate(1).unwrap().collect();
        assert_eq!(members, vec![p("1")], "{}", fam.name());
    }
}

#[test]
fn enumerate_yields_each_member_exactly_once() {
    for kind in FamilyKind::STRUCTURED {
        let fam = Family::from_kind(kind).unwrap();
        for n in 1..=6u64 {
            let members: Vec<Perm> = fam.enumerate(n).unwrap().collect();
            let distinct: BTreeSet<Perm> = members.iter().cloned().collect();
            assert_eq!(members.len(), distinct.len(), "{} n={n}", fam.name());
            assert_eq!(
                BigUint::from(members.len()),
                fam.cardinality(n).unwrap(),
                "{} n={n}",
                fam.name()
            );
            for x in &members {
                assert!(fam.is_member(x));
                assert!(avoids(x, fam.forbidden()));
            }
        }
    }
    let u = Family::unrestricted();
    let members: BTreeSet<Perm> = u.enumerate(5).unwrap().collect();
    assert_eq!(members.len(), 120);
}

#[test]
fn membership_agrees_with_avoidance_for_every_kind() {
    for kind in FamilyKind::STRUCTURED {
        let fam = Family::from_kind(kind).unwrap();
        for n in 1..=6usize {
            for x in all_perms(n) {
                assert_eq!(
                    fam.is_member(&x),
                    avoids(&x, fam.forbidden()),
                    "{} at {x}",
                    fam.name()
                );
            }
        }
    }
}

#[test]
fn encode_decode_round_trip_on_members() {
    for kind in FamilyKind::STRUCTURED {
        let fam = Family::from_kind(kind).unwrap();
        if !fam.kind().has_codes() {
            continue;
        }
        for n in 1..=6u64 {
            for x in fam.enumerate(n).unwrap() {
                let code = fam.encode(&x).unwrap();
                assert_eq!(fam.decode(&code).unwrap(), x, "{} n={n}", fam.name());
                assert_eq!(code.n() as u64, n);
            }
        }
    }
}

#[test]
fn fast_count_closed_forms() {
    let e = Family::from_kind(FamilyKind::PairE).unwrap();
    for (k, l, m) in [(1u32, 1u32, 0u32), (2, 3, 1), (4, 2, 3)] {
        let got = e.fast_count(&p("21"), &Code::Grid { k, l, m }).unwrap();
        assert_eq!(got, BigUint::from(k * l));
    }

    let bbb = Family::from_kind(FamilyKind::TripleBbb).unwrap();
    for k in 1..=6u32 {
        let got = bbb.fast_count(&p("21"), &Code::Index { k, n: 6 }).unwrap();
        assert_eq!(got, BigUint::from(k - 1));
    }
}

#[test]
fn fast_count_matches_brute_force_for_paird_and_paira() {
    let d = Family::from_kind(FamilyKind::PairD).unwrap();
    let sigma = p("21");
    for code in (0u16..256).map(|mask| Code::Signs {
        signs: (0..8).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect(),
    }) {
        let member = d.decode(&code).unwrap();
        assert_eq!(d.fast_count(&sigma, &code).unwrap(), occurrences(&sigma, &member));
    }

    let a = Family::from_kind(FamilyKind::PairA).unwrap();
    for sigma in pats(&["21", "312", "3124"]) {
        for code in CompositionIter::new(8).map(|parts| Code::Composition { parts }) {
            let member = a.decode(&code).unwrap();
            assert_eq!(
                a.fast_count(&sigma, &code).unwrap(),
                occurrences(&sigma, &member),
                "sigma {sigma} member {member}"
            );
        }
    }
}

#[test]
fn fast_count_matches_brute_force_everywhere_small() {
    let sigmas: Vec<Perm> = (1..=3usize).flat_map(all_perms).collect();
    for kind in FamilyKind::STRUCTURED {
        let fam = Family::from_kind(kind).unwrap();
        if !fam.kind().has_codes() {
            continue;
        }
        for n in 1..=6u64 {
            for x in fam.enumerate(n).unwrap() {
                let code = fam.encode(&x).unwrap();
                for sigma in &sigmas {
                    assert_eq!(
                        fam.fast_count(sigma, &code).unwrap(),
                        occurrences(sigma, &x),
                        "{} sigma {sigma} member {x}",
                        fam.name()
                    );
                }
            }
        }
    }
}

#[test]
fn fast_count_is_zero_for_non_member_patterns() {
    let d = Family::from_kind(FamilyKind::PairD).unwrap();
    let code = d.encode(&p("3214")).unwrap();
    assert_eq!(d.fast_count(&p("132"), &code).unwrap(), BigUint::ZERO);
    assert_eq!(d.fast_count(&p("2143"), &code).unwrap(), BigUint::ZERO);
}

#[test]
fn transported_family_behaves_like_canonical() {
    // {213, 231} maps onto the sign-coded class by reversal.
    let fam = Family::normalize(&pats(&["213", "231"])).unwrap();
    assert_eq!(fam.kind(), FamilyKind::PairD);
    for n in 1..=6u64 {
        let members: BTreeSet<Perm> = fam.enumerate(n).unwrap().collect();
        let brute: BTreeSet<Perm> = all_perms(n as usize)
            .into_iter()
            .filter(|x| avoids(x, fam.forbidden()))
            .collect();
        assert_eq!(members, brute);
        for x in &members {
            assert!(fam.is_member(x));
            let code = fam.encode(x).unwrap();
            assert_eq!(fam.decode(&code).unwrap(), *x);
            for sigma in all_perms(2).iter().chain(all_perms(3).iter()) {
                assert_eq!(
                    fam.fast_count(sigma, &code).unwrap(),
                    occurrences(sigma, x),
                    "sigma {sigma} member {x}"
                );
            }
        }
    }
}

#[test]
fn exact_count_distribution_is_symmetry_invariant() {
    // Multiset of pattern counts across members matches between a family
    // and its transported image.
    let base = Family::from_kind(FamilyKind::PairB).unwrap();
    let image = Family::normalize(&pats(&["132", "213"])).unwrap();
    assert_eq!(image.kind(), FamilyKind::PairB);
    let g = image.symmetry();
    let sigma = p("21");
    let sigma_moved = g.apply_inverse(&sigma);
    for n in 4..=7u64 {
        let mut counts_base: Vec<BigUint> = base
            .enumerate(n)
            .unwrap()
            .map(|x| occurrences(&sigma, &x))
            .collect();
        let mut counts_image: Vec<BigUint> = image
            .enumerate(n)
            .unwrap()
            .map(|x| occurrences(&sigma_moved, &x))
            .collect();
        counts_base.sort();
        counts_image.sort();
        assert_eq!(counts_base, counts_image);
    }
}

#[test]
fn sampler_two_member_families_are_fair() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for kind in [FamilyKind::PairE, FamilyKind::TripleAaa] {
        let fam = Family::from_kind(kind).unwrap();
        let sampler = fam.sampler(2).unwrap();
        let mut ones = 0u32;
        let reps = 40_000;
        for _ in 0..reps {
            if sampler.sample(&mut rng) == p("12") {
                ones += 1;
            }
        }
        // Three standard errors around 1/2.
        let se = 0.5 / (reps as f64).sqrt();
        let phat = ones as f64 / reps as f64;
        assert!((phat - 0.5).abs() < 3.0 * se, "{}: {phat}", fam.name());
    }
}

#[test]
fn samples_are_members_for_every_kind() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for kind in FamilyKind::STRUCTURED {
        let fam = Family::from_kind(kind).unwrap();
        let sampler = fam.sampler(9).unwrap();
        for _ in 0..200 {
            let x = sampler.sample(&mut rng);
            assert_eq!(x.len(), 9);
            assert!(fam.is_member(&x), "{} drew {x}", fam.name());
        }
    }
    let u = Family::unrestricted();
    let sampler = u.sampler(9).unwrap();
    for _ in 0..10 {
        assert_eq!(sampler.sample(&mut rng).len(), 9);
    }
}

#[test]
fn sample_codes_decode_to_sampled_members() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for kind in FamilyKind::STRUCTURED {
        let fam = Family::from_kind(kind).unwrap();
        if !kind.has_codes() {
            assert!(fam.sampler(5).unwrap().sample_code(&mut rng).is_none());
            continue;
        }
        let sampler = fam.sampler(12).unwrap();
        for _ in 0..100 {
            let code = sampler.sample_code(&mut rng).unwrap();
            assert_eq!(code.n(), 12);
            let member = fam.decode(&code).unwrap();
            assert!(fam.is_member(&member));
            assert_eq!(fam.encode(&member).unwrap(), code);
        }
    }
}

#[test]
fn family_kind_names_round_trip() {
    for kind in FamilyKind::ALL {
        let parsed: FamilyKind = kind.name().parse().unwrap();
        assert_eq!(parsed, kind);
    }
    assert!("PAIR-Z".parse::<FamilyKind>().is_err());
    let parsed: FamilyKind = "pair-d".parse().unwrap();
    assert_eq!(parsed, FamilyKind::PairD);
}
