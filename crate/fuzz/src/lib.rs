//! Bodies of the fuzz targets, shared so the checked-in corpus can also be
//! replayed under `cargo test`.

use permpat::families::{Code, Family, FamilyKind};
use permpat::perm::{occurrences_u128, Perm, Symmetry};

/// Permutation and symmetry text parsing: accepted inputs must round-trip.
pub fn check_parse_perm(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = text.parse::<Perm>() {
        let reparsed: Perm = p.to_string().parse().expect("display form parses");
        assert_eq!(reparsed, p);
        if let Some(compact) = p.compact() {
            let from_compact: Perm = compact.parse().expect("compact form parses");
            assert_eq!(from_compact, p);
        }
        assert!(Perm::new(p.values().to_vec()).is_ok());
    }
    if let Ok(sym) = text.parse::<Symmetry>() {
        let relabeled: Symmetry = sym.to_string().parse().expect("label parses");
        assert_eq!(relabeled, sym);
    }
}

/// Forbidden-set classification: accepted sets must agree with enumeration.
pub fn check_parse_family(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let mut patterns = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        match part.parse::<Perm>() {
            Ok(p) => patterns.push(p),
            Err(_) => return,
        }
    }
    let Ok(family) = Family::normalize(&patterns) else {
        return;
    };
    if family.kind() == FamilyKind::Trivial {
        return;
    }
    let n = 4u64;
    let mut members = 0u64;
    for member in family.enumerate(n).expect("structured families enumerate") {
        for forbidden in family.forbidden() {
            assert_eq!(
                occurrences_u128(forbidden, &member),
                Some(0),
                "{member} should avoid {forbidden}"
            );
        }
        members += 1;
    }
    let cardinality = family
        .cardinality(n)
        .expect("structured families have cardinalities");
    assert_eq!(members.to_string(), cardinality.to_string());
}

const CODED: [FamilyKind; 8] = [
    FamilyKind::PairD,
    FamilyKind::PairB,
    FamilyKind::PairA,
    FamilyKind::PairE,
    FamilyKind::TripleAaa,
    FamilyKind::TripleCcc,
    FamilyKind::TripleBbb,
    FamilyKind::TripleEee,
];

/// Coded-form JSON decoding: validated codes must decode to members and
/// encode back to themselves.
pub fn check_decode_code(data: &[u8]) {
    let Ok(code) = serde_json::from_slice::<Code>(data) else {
        return;
    };
    if code.n() > 64 {
        return;
    }
    for kind in CODED {
        let family = Family::from_kind(kind).expect("coded families are structured");
        if family.validate_code(&code).is_err() {
            continue;
        }
        let member = family.decode(&code).expect("validated codes decode");
        assert!(
            family.is_member(&member),
            "decoded {member} should belong to {}",
            family.name()
        );
        let reencoded = family.encode(&member).expect("members encode");
        assert_eq!(reencoded, code, "encode should invert decode");
    }
}
