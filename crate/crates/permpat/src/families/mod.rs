//! The catalog of avoidance families defined by sets of length-3 patterns:
//! normalization to canonical representatives under the symmetry group,
//! exact cardinalities, bijective codes, uniform samplers, enumerators,
//! structural membership tests, and polynomial-time occurrence counters.

mod aaa;
mod bigrand;
pub(crate) mod counting;
mod linefam;
mod paira;
mod pairb;
mod paird;
mod paire;
pub mod singles;

use crate::perm::{avoids, Pattern, Perm, Symmetry};
use linefam::Shape as LineShape;
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use singles::Shape as SingleShape;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("forbidden pattern {0} does not have length 3")]
    PatternLength(Perm),
    #[error("{0} is not a member of {1}")]
    NotAMember(Perm, &'static str),
    #[error("{0} has no coded form")]
    NoCodedForm(&'static str),
    #[error("malformed code for {family}: {reason}")]
    MalformedCode {
        family: &'static str,
        reason: String,
    },
    #[error("operation not supported for {0}")]
    Unsupported(&'static str),
    #[error("unknown family name {0:?}")]
    UnknownName(String),
}

/// The equivalence classes of forbidden sets, named by their canonical
/// representatives, plus the two catch-alls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    #[serde(rename = "SINGLE-132")]
    Single132,
    #[serde(rename = "SINGLE-321")]
    Single321,
    #[serde(rename = "PAIR-D")]
    PairD,
    #[serde(rename = "PAIR-B")]
    PairB,
    #[serde(rename = "PAIR-A")]
    PairA,
    #[serde(rename = "PAIR-E")]
    PairE,
    #[serde(rename = "TRIPLE-AAA")]
    TripleAaa,
    #[serde(rename = "TRIPLE-CCC")]
    TripleCcc,
    #[serde(rename = "TRIPLE-BBB")]
    TripleBbb,
    #[serde(rename = "TRIPLE-EEE")]
    TripleEee,
    #[serde(rename = "TRIVIAL")]
    Trivial,
    #[serde(rename = "UNRESTRICTED")]
    Unrestricted,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 12] = [
        FamilyKind::Single132,
        FamilyKind::Single321,
        FamilyKind::PairD,
        FamilyKind::PairB,
        FamilyKind::PairA,
        FamilyKind::PairE,
        FamilyKind::TripleAaa,
        FamilyKind::TripleCcc,
        FamilyKind::TripleBbb,
        FamilyKind::TripleEee,
        FamilyKind::Trivial,
        FamilyKind::Unrestricted,
    ];

    /// The ten kinds with structure: everything except TRIVIAL and
    /// UNRESTRICTED.
    pub const STRUCTURED: [FamilyKind; 10] = [
        FamilyKind::Single132,
        FamilyKind::Single321,
        FamilyKind::PairD,
        FamilyKind::PairB,
        FamilyKind::PairA,
        FamilyKind::PairE,
        FamilyKind::TripleAaa,
        FamilyKind::TripleCcc,
        FamilyKind::TripleBbb,
        FamilyKind::TripleEee,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Single132 => "SINGLE-132",
            FamilyKind::Single321 => "SINGLE-321",
            FamilyKind::PairD => "PAIR-D",
            FamilyKind::PairB => "PAIR-B",
            FamilyKind::PairA => "PAIR-A",
            FamilyKind::PairE => "PAIR-E",
            FamilyKind::TripleAaa => "TRIPLE-AAA",
            FamilyKind::TripleCcc => "TRIPLE-CCC",
            FamilyKind::TripleBbb => "TRIPLE-BBB",
            FamilyKind::TripleEee => "TRIPLE-EEE",
            FamilyKind::Trivial => "TRIVIAL",
            FamilyKind::Unrestricted => "UNRESTRICTED",
        }
    }

    fn canonical_strs(&self) -> &'static [&'static str] {
        match self {
            FamilyKind::Single132 => &["132"],
            FamilyKind::Single321 => &["321"],
            FamilyKind::PairD => &["132", "312"],
            FamilyKind::PairB => &["231", "312"],
            FamilyKind::PairA => &["231", "321"],
            FamilyKind::PairE => &["132", "321"],
            FamilyKind::TripleAaa => &["231", "312", "321"],
            FamilyKind::TripleCcc => &["132", "231", "312"],
            FamilyKind::TripleBbb => &["132", "231", "321"],
            FamilyKind::TripleEee => &["132", "213", "321"],
            FamilyKind::Trivial | FamilyKind::Unrestricted => &[],
        }
    }

    /// The canonical forbidden set, sorted. Empty for TRIVIAL and
    /// UNRESTRICTED.
    pub fn canonical_set(&self) -> Vec<Pattern> {
        self.canonical_strs()
            .iter()
            .map(|s| s.parse().expect("canonical pattern"))
            .collect()
    }

    fn line_shape(&self) -> Option<LineShape> {
        match self {
            FamilyKind::TripleCcc => Some(LineShape::RevHead),
            FamilyKind::TripleBbb => Some(LineShape::DropHead),
            FamilyKind::TripleEee => Some(LineShape::SplitRuns),
            _ => None,
        }
    }

    fn single_shape(&self) -> Option<SingleShape> {
        match self {
            FamilyKind::Single132 => Some(SingleShape::Mid132),
            FamilyKind::Single321 => Some(SingleShape::Dec321),
            _ => None,
        }
    }

    fn has_codes(&self) -> bool {
        !matches!(
            self,
            FamilyKind::Single132
                | FamilyKind::Single321
                | FamilyKind::Trivial
                | FamilyKind::Unrestricted
        )
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, FamilyError> {
        let norm = s.to_ascii_uppercase();
        FamilyKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == norm)
            .ok_or_else(|| FamilyError::UnknownName(s.to_string()))
    }
}

/// A normalized avoidance family: the equivalence class of the user's
/// forbidden set, the symmetry element carrying that set onto the class
/// representative, and the original set itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    kind: FamilyKind,
    symmetry: Symmetry,
    forbidden: Vec<Pattern>,
}

/// Coded form of a family member. The code determines the member via
/// `decode`; which variants are valid depends on the family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "camelCase")]
pub enum Code {
    /// PAIR-D: one sign per position `2..=n`; `+1` marks a running
    /// maximum, `-1` a running minimum.
    Signs { signs: Vec<i8> },
    /// PAIR-B and PAIR-A: block lengths summing to `n`. TRIPLE-AAA: the
    /// same with every part 1 or 2.
    Composition { parts: Vec<u32> },
    /// PAIR-E: run lengths of the three-run template, `k, l >= 1`.
    Grid { k: u32, l: u32, m: u32 },
    /// PAIR-E: the identity member.
    GridIdentity { n: u32 },
    /// TRIPLE-CCC/BBB/EEE: head parameter `1 <= k <= n`.
    Index { k: u32, n: u32 },
}

impl Code {
    /// Size of the permutation the code describes.
    pub fn n(&self) -> usize {
        match self {
            Code::Signs { signs } => signs.len() + 1,
            Code::Composition { parts } => parts.iter().map(|&l| l as usize).sum(),
            Code::Grid { k, l, m } => *k as usize + *l as usize + *m as usize,
            Code::GridIdentity { n } => *n as usize,
            Code::Index { n, .. } => *n as usize,
        }
    }
}

impl Family {
    /// Classifies a forbidden set by searching the symmetry group for a map
    /// onto one of the canonical representatives. Sets with no structured
    /// class (every case where `{123, 321}` is contained in the set, or
    /// the set has four or more patterns) come back as TRIVIAL; the empty
    /// set is UNRESTRICTED.
    pub fn normalize(forbidden: &[Pattern]) -> Result<Family, FamilyError> {
        for p in forbidden {
            if p.len() != 3 {
                return Err(FamilyError::PatternLength(p.clone()));
            }
        }
        let set: BTreeSet<Perm> = forbidden.iter().cloned().collect();
        let sorted: Vec<Perm> = set.iter().cloned().collect();
        if sorted.is_empty() {
            return Ok(Family {
                kind: FamilyKind::Unrestricted,
                symmetry: Symmetry::IDENTITY,
                forbidden: sorted,
            });
        }
        for g in Symmetry::all() {
            let image: BTreeSet<Perm> = set.iter().map(|p| g.apply(p)).collect();
            for kind in FamilyKind::STRUCTURED {
                let canon: BTreeSet<Perm> = kind.canonical_set().into_iter().collect();
                if image == canon {
                    return Ok(Family {
                        kind,
                        symmetry: g,
                        forbidden: sorted,
                    });
                }
            }
        }
        Ok(Family {
            kind: FamilyKind::Trivial,
            symmetry: Symmetry::IDENTITY,
            forbidden: sorted,
        })
    }

    /// The canonical representative of a structured kind, or the
    /// unrestricted family.
    pub fn from_kind(kind: FamilyKind) -> Result<Family, FamilyError> {
        if kind == FamilyKind::Trivial {
            return Err(FamilyError::Unsupported(kind.name()));
        }
        Ok(Family {
            kind,
            symmetry: Symmetry::IDENTITY,
            forbidden: kind.canonical_set(),
        })
    }

    pub fn unrestricted() -> Family {
        Family::from_kind(FamilyKind::Unrestricted).expect("unrestricted is supported")
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    /// The user's forbidden set, sorted and deduplicated.
    pub fn forbidden(&self) -> &[Pattern] {
        &self.forbidden
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// Comma-joined forbidden set, or "unrestricted".
    pub fn set_label(&self) -> String {
        if self.kind == FamilyKind::Unrestricted {
            return "unrestricted".to_string();
        }
        let parts: Vec<String> = self
            .forbidden
            .iter()
            .map(|p| p.compact().unwrap_or_else(|| p.to_string()))
            .collect();
        parts.join(",")
    }

    /// Carries a permutation to the canonical side.
    fn carry_to_canonical(&self, p: &Perm) -> Perm {
        if self.symmetry.is_identity() {
            p.clone()
        } else {
            self.symmetry.apply(p)
        }
    }

    /// Carries a canonical member back to the user's side.
    fn carry_from_canonical(&self, p: Perm) -> Perm {
        if self.symmetry.is_identity() {
            p
        } else {
            self.symmetry.apply_inverse(&p)
        }
    }

    /// `|S_n(T)|` exactly.
    pub fn cardinality(&self, n: u64) -> Result<BigUint, FamilyError> {
        assert!(n >= 1, "family size must be at least 1");
        match self.kind {
            FamilyKind::PairD | FamilyKind::PairB | FamilyKind::PairA => {
                Ok(BigUint::from(1u32) << (n - 1))
            }
            FamilyKind::PairE => Ok(BigUint::from(n) * (n - 1) / 2u32 + 1u32),
            FamilyKind::TripleAaa => {
                let mut prev = BigUint::ZERO;
                let mut cur = BigUint::from(1u32);
                for _ in 0..n {
                    let next = &prev + &cur;
                    prev = cur;
                    cur = next;
                }
                Ok(cur)
            }
            FamilyKind::TripleCcc | FamilyKind::TripleBbb | FamilyKind::TripleEee => {
                Ok(BigUint::from(n))
            }
            FamilyKind::Single132 | FamilyKind::Single321 => {
                Ok(counting::binomial_big(2 * n, n) / (n + 1))
            }
            FamilyKind::Unrestricted => {
                let mut acc = BigUint::from(1u32);
                for i in 2..=n {
                    acc *= i;
                }
                Ok(acc)
            }
            FamilyKind::Trivial => Err(FamilyError::Unsupported(self.name())),
        }
    }

    /// Structural membership test, equal to avoidance of the forbidden set.
    pub fn is_member(&self, p: &Perm) -> bool {
        match self.kind {
            FamilyKind::Unrestricted => true,
            FamilyKind::Trivial => avoids(p, &self.forbidden),
            _ => {
                let c = self.carry_to_canonical(p);
                match self.kind {
                    FamilyKind::PairD => paird::is_member(&c),
                    FamilyKind::PairB => pairb::is_member(&c),
                    FamilyKind::PairA => paira::is_member(&c),
                    FamilyKind::PairE => paire::is_member(&c),
                    FamilyKind::TripleAaa => aaa::is_member(&c),
                    _ => {
                        if let Some(shape) = self.kind.line_shape() {
                            linefam::is_member(shape, &c)
                        } else {
                            let shape = self.kind.single_shape().expect("remaining kinds");
                            singles::is_member(shape, &c)
                        }
                    }
                }
            }
        }
    }

    /// The unique coded form of a member.
    pub fn encode(&self, p: &Perm) -> Result<Code, FamilyError> {
        if !self.kind.has_codes() {
            return Err(FamilyError::NoCodedForm(self.name()));
        }
        let c = self.carry_to_canonical(p);
        let code = match self.kind {
            FamilyKind::PairD => paird::encode(&c).map(|signs| Code::Signs { signs }),
            FamilyKind::PairB => pairb::encode(&c).map(|parts| Code::Composition { parts }),
            FamilyKind::PairA => paira::encode(&c).map(|parts| Code::Composition { parts }),
            FamilyKind::TripleAaa => aaa::encode(&c).map(|parts| Code::Composition { parts }),
            FamilyKind::PairE => paire::encode(&c).map(|t| match t {
                paire::Template::Grid { k, l, m } => Code::Grid { k, l, m },
                paire::Template::Identity { n } => Code::GridIdentity { n },
            }),
            _ => {
                let shape = self.kind.line_shape().expect("line kinds remain");
                linefam::encode(shape, &c).map(|k| Code::Index {
                    k,
                    n: c.len() as u32,
                })
            }
        };
        code.ok_or_else(|| FamilyError::NotAMember(p.clone(), self.name()))
    }

    /// Validates a code against this family's invariants.
    pub fn validate_code(&self, code: &Code) -> Result<(), FamilyError> {
        let bad = |reason: String| FamilyError::MalformedCode {
            family: self.name(),
            reason,
        };
        if !self.kind.has_codes() {
            return Err(FamilyError::NoCodedForm(self.name()));
        }
        match (self.kind, code) {
            (FamilyKind::PairD, Code::Signs { signs }) => {
                if signs.iter().any(|&s| s != 1 && s != -1) {
                    return Err(bad("signs must be +1 or -1".to_string()));
                }
                Ok(())
            }
            (FamilyKind::PairB | FamilyKind::PairA, Code::Composition { parts }) => {
                if parts.is_empty() {
                    return Err(bad("composition must be nonempty".to_string()));
                }
                if parts.contains(&0) {
                    return Err(bad("parts must be at least 1".to_string()));
                }
                Ok(())
            }
            (FamilyKind::TripleAaa, Code::Composition { parts }) => {
                if parts.is_empty() {
                    return Err(bad("composition must be nonempty".to_string()));
                }
                if parts.iter().any(|&l| l != 1 && l != 2) {
                    return Err(bad("parts must be 1 or 2".to_string()));
                }
                Ok(())
            }
            (FamilyKind::PairE, Code::Grid { k, l, .. }) => {
                if *k == 0 || *l == 0 {
                    return Err(bad("grid runs k and l must be at least 1".to_string()));
                }
                Ok(())
            }
            (FamilyKind::PairE, Code::GridIdentity { n }) => {
                if *n == 0 {
                    return Err(bad("identity size must be at least 1".to_string()));
                }
                Ok(())
            }
            (
                FamilyKind::TripleCcc | FamilyKind::TripleBbb | FamilyKind::TripleEee,
                Code::Index { k, n },
            ) => {
                if *k == 0 || k > n {
                    return Err(bad(format!("index k={k} out of range 1..={n}")));
                }
                Ok(())
            }
            _ => Err(bad("code variant does not belong to this family".to_string())),
        }
    }

    /// The member with the given code, on the user's side of the symmetry.
    pub fn decode(&self, code: &Code) -> Result<Perm, FamilyError> {
        self.validate_code(code)?;
        let canonical = match (self.kind, code) {
            (FamilyKind::PairD, Code::Signs { signs }) => paird::decode(signs),
            (FamilyKind::PairB, Code::Composition { parts }) => pairb::decode(parts),
            (FamilyKind::PairA, Code::Composition { parts }) => paira::decode(parts),
            (FamilyKind::TripleAaa, Code::Composition { parts }) => aaa::decode(parts),
            (FamilyKind::PairE, Code::Grid { k, l, m }) => paire::decode(&paire::Template::Grid {
                k: *k,
                l: *l,
                m: *m,
            }),
            (FamilyKind::PairE, Code::GridIdentity { n }) => {
                paire::decode(&paire::Template::Identity { n: *n })
            }
            (_, Code::Index { k, n }) => {
                let shape = self.kind.line_shape().expect("validated above");
                linefam::decode(shape, *k, *n)
            }
            _ => unreachable!("validate_code admits only matching variants"),
        };
        Ok(self.carry_from_canonical(canonical))
    }

    /// Occurrences of `sigma` in the member with the given code, in time
    /// polynomial in the code size. Zero when `sigma` is not itself a
    /// member.
    pub fn fast_count(&self, sigma: &Perm, code: &Code) -> Result<BigUint, FamilyError> {
        self.validate_code(code)?;
        let counter = CodeCounter::new(self, sigma)?;
        Ok(counter.count_big(code))
    }

    /// Iterates all members at size `n`, in code order.
    pub fn enumerate(&self, n: u64) -> Result<Box<dyn Iterator<Item = Perm> + Send>, FamilyError> {
        assert!(n >= 1, "family size must be at least 1");
        let n = n as usize;
        let sym = self.symmetry;
        let canonical: Box<dyn Iterator<Item = Perm> + Send> = match self.kind {
            FamilyKind::PairD => Box::new(SignsIter::new(n).map(|s| paird::decode(&s))),
            FamilyKind::PairB => Box::new(CompositionIter::new(n).map(|p| pairb::decode(&p))),
            FamilyKind::PairA => Box::new(CompositionIter::new(n).map(|p| paira::decode(&p))),
            FamilyKind::TripleAaa => Box::new(AaaIter::new(n).map(|p| aaa::decode(&p))),
            FamilyKind::PairE => Box::new(GridIter::new(n).map(|t| paire::decode(&t))),
            FamilyKind::TripleCcc | FamilyKind::TripleBbb | FamilyKind::TripleEee => {
                let shape = self.kind.line_shape().expect("line kind");
                Box::new((1..=n as u32).map(move |k| linefam::decode(shape, k, n as u32)))
            }
            FamilyKind::Single132 | FamilyKind::Single321 => {
                let shape = self.kind.single_shape().expect("single kind");
                Box::new(DyckIter::new(n).map(move |w| singles::perm_from_dyck(shape, &w)))
            }
            FamilyKind::Unrestricted => Box::new(HeapIter::new(n)),
            FamilyKind::Trivial => return Err(FamilyError::Unsupported(self.name())),
        };
        if sym.is_identity() {
            Ok(canonical)
        } else {
            Ok(Box::new(canonical.map(move |p| sym.apply_inverse(&p))))
        }
    }

    /// Prepares a uniform sampler at size `n`.
    pub fn sampler(&self, n: u64) -> Result<Sampler, FamilyError> {
        assert!(n >= 1, "family size must be at least 1");
        if self.kind == FamilyKind::Trivial {
            return Err(FamilyError::Unsupported(self.name()));
        }
        let fib = if self.kind == FamilyKind::TripleAaa {
            Some(aaa::FibTable::new(n as usize))
        } else {
            None
        };
        Ok(Sampler {
            kind: self.kind,
            symmetry: self.symmetry,
            n: n as usize,
            fib,
        })
    }

    /// One uniform draw from `S_n(T)`.
    pub fn sample<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> Result<Perm, FamilyError> {
        Ok(self.sampler(n)?.sample(rng))
    }
}

/// Reusable uniform sampler for one family at one size.
pub struct Sampler {
    kind: FamilyKind,
    symmetry: Symmetry,
    n: usize,
    fib: Option<aaa::FibTable>,
}

impl Sampler {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Uniform code draw, for the coded kinds only.
    pub fn sample_code<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Code> {
        let n = self.n;
        match self.kind {
            FamilyKind::PairD => {
                let mut signs = vec![0i8; n - 1];
                fill_bits(rng, &mut signs);
                Some(Code::Signs { signs })
            }
            FamilyKind::PairB | FamilyKind::PairA => {
                let mut bits = vec![0i8; n - 1];
                fill_bits(rng, &mut bits);
                Some(Code::Composition {
                    parts: parts_from_boundaries(&bits),
                })
            }
            FamilyKind::TripleAaa => {
                let fib = self.fib.as_ref().expect("built with the sampler");
                Some(Code::Composition {
                    parts: fib.sample_parts(n, rng),
                })
            }
            FamilyKind::PairE => {
                let n = n as u128;
                let card = n * (n - 1) / 2 + 1;
                let r = rng.random_range(0..card);
                if r == 0 {
                    return Some(Code::GridIdentity { n: n as u32 });
                }
                let mut t = r - 1;
                let mut k = 1u128;
                while t >= n - k {
                    t -= n - k;
                    k += 1;
                }
                let l = t as u32 + 1;
                let k = k as u32;
                Some(Code::Grid {
                    k,
                    l,
                    m: n as u32 - k - l,
                })
            }
            FamilyKind::TripleCcc | FamilyKind::TripleBbb | FamilyKind::TripleEee => {
                Some(Code::Index {
                    k: rng.random_range(1..=n as u32),
                    n: n as u32,
                })
            }
            _ => None,
        }
    }

    /// One uniform member on the user's side.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        let canonical = match self.kind {
            FamilyKind::Single132 | FamilyKind::Single321 => {
                let shape = match self.kind {
                    FamilyKind::Single132 => SingleShape::Mid132,
                    _ => SingleShape::Dec321,
                };
                let path = singles::random_dyck(self.n, rng);
                singles::perm_from_dyck(shape, &path)
            }
            FamilyKind::Unrestricted => {
                let mut values: Vec<u32> = (1..=self.n as u32).collect();
                values.shuffle(rng);
                Perm::from_vec_unchecked(values)
            }
            _ => {
                let code = self.sample_code(rng).expect("coded kind");
                decode_canonical(self.kind, &code)
            }
        };
        if self.symmetry.is_identity() {
            canonical
        } else {
            self.symmetry.apply_inverse(&canonical)
        }
    }
}

/// Decodes on the canonical side without validation; for sampler output.
fn decode_canonical(kind: FamilyKind, code: &Code) -> Perm {
    match (kind, code) {
        (FamilyKind::PairD, Code::Signs { signs }) => paird::decode(signs),
        (FamilyKind::PairB, Code::Composition { parts }) => pairb::decode(parts),
        (FamilyKind::PairA, Code::Composition { parts }) => paira::decode(parts),
        (FamilyKind::TripleAaa, Code::Composition { parts }) => aaa::decode(parts),
        (FamilyKind::PairE, Code::Grid { k, l, m }) => paire::decode(&paire::Template::Grid {
            k: *k,
            l: *l,
            m: *m,
        }),
        (FamilyKind::PairE, Code::GridIdentity { n }) => {
            paire::decode(&paire::Template::Identity { n: *n })
        }
        (_, Code::Index { k, n }) => {
            let shape = kind.line_shape().expect("line kind");
            linefam::decode(shape, *k, *n)
        }
        _ => unreachable!("sampler emits matching code variants"),
    }
}

fn fill_bits<R: Rng + ?Sized>(rng: &mut R, out: &mut [i8]) {
    let mut i = 0;
    while i < out.len() {
        let mut word = rng.random::<u64>();
        let take = (out.len() - i).min(64);
        for slot in out[i..i + take].iter_mut() {
            *slot = if word & 1 == 1 { 1 } else { -1 };
            word >>= 1;
        }
        i += take;
    }
}

/// Turns boundary bits over positions `1..n` into block lengths: a part
/// ends after position `i` exactly when bit `i` is set.
fn parts_from_boundaries(bits: &[i8]) -> Vec<u32> {
    let mut parts = Vec::new();
    let mut len = 1u32;
    for &b in bits {
        if b == 1 {
            parts.push(len);
            len = 1;
        } else {
            len += 1;
        }
    }
    parts.push(len);
    parts
}

/// Prepared occurrence counter for one pattern against codes of one family.
pub struct CodeCounter {
    prep: Prep,
}

enum Prep {
    Zero,
    Signs(Vec<i8>),
    Blocks(Vec<u32>),
    HeadBlocks(Vec<u32>),
    Grid(paire::Template),
    Line(LineShape, u32, u32),
}

impl CodeCounter {
    /// Prepares `sigma` for counting against the coded family. `sigma` is
    /// taken on the user's side and transported across the symmetry.
    pub fn new(family: &Family, sigma: &Perm) -> Result<CodeCounter, FamilyError> {
        if !family.kind.has_codes() {
            return Err(FamilyError::NoCodedForm(family.name()));
        }
        let c = family.carry_to_canonical(sigma);
        let prep = match family.kind {
            FamilyKind::PairD => paird::encode(&c).map_or(Prep::Zero, Prep::Signs),
            FamilyKind::PairB => pairb::encode(&c).map_or(Prep::Zero, Prep::Blocks),
            FamilyKind::PairA => paira::encode(&c).map_or(Prep::Zero, Prep::HeadBlocks),
            FamilyKind::TripleAaa => aaa::encode(&c).map_or(Prep::Zero, Prep::Blocks),
            FamilyKind::PairE => paire::encode(&c).map_or(Prep::Zero, Prep::Grid),
            _ => {
                let shape = family.kind.line_shape().expect("line kinds remain");
                match linefam::encode(shape, &c) {
                    Some(k) => Prep::Line(shape, k, c.len() as u32),
                    None => Prep::Zero,
                }
            }
        };
        Ok(CodeCounter { prep })
    }

    /// Occurrence count if it fits in u128.
    pub fn count_u128(&self, code: &Code) -> Option<u128> {
        match (&self.prep, code) {
            (Prep::Zero, _) => Some(0),
            (Prep::Signs(eta), Code::Signs { signs }) => counting::count_signs(eta, signs),
            (Prep::Blocks(lens), Code::Composition { parts }) => {
                counting::count_block_tuples(lens, parts)
            }
            (Prep::HeadBlocks(lens), Code::Composition { parts }) => {
                counting::count_head_blocks(lens, parts)
            }
            (Prep::Grid(sig), code) => paire_count_u128(sig, code),
            (Prep::Line(shape, sk, sm), Code::Index { k, n }) => {
                linefam::count(*shape, *sk, *sm, *k, *n)
            }
            _ => unreachable!("code variant checked by the family"),
        }
    }

    /// Occurrence count, exact at any size.
    pub fn count_big(&self, code: &Code) -> BigUint {
        if let Some(c) = self.count_u128(code) {
            return BigUint::from(c);
        }
        match (&self.prep, code) {
            (Prep::Signs(eta), Code::Signs { signs }) => {
                counting::count_signs(eta, signs).expect("big counting does not overflow")
            }
            (Prep::Blocks(lens), Code::Composition { parts }) => {
                counting::count_block_tuples(lens, parts).expect("big counting does not overflow")
            }
            (Prep::HeadBlocks(lens), Code::Composition { parts }) => {
                counting::count_head_blocks(lens, parts).expect("big counting does not overflow")
            }
            (Prep::Grid(sig), code) => paire_count_big(sig, code),
            (Prep::Line(shape, sk, sm), Code::Index { k, n }) => {
                linefam::count(*shape, *sk, *sm, *k, *n).expect("big counting does not overflow")
            }
            _ => unreachable!("count_u128 covers the remaining variants"),
        }
    }

    /// Occurrence count as f64, for moment accumulation.
    pub fn count_f64(&self, code: &Code) -> f64 {
        use num_traits::ToPrimitive;
        match self.count_u128(code) {
            Some(c) => c as f64,
            None => self.count_big(code).to_f64().unwrap_or(f64::INFINITY),
        }
    }
}

fn paire_count_u128(sig: &paire::Template, code: &Code) -> Option<u128> {
    use counting::binomial_u128 as bin;
    match (sig, code) {
        (paire::Template::Grid { k: i, l: j, m: p }, Code::Grid { k, l, m }) => {
            let a = bin(*k as u64, *i as u64)?;
            let b = bin(*l as u64, *j as u64)?;
            let c = bin(*m as u64, *p as u64)?;
            a.checked_mul(b)?.checked_mul(c)
        }
        (paire::Template::Grid { .. }, Code::GridIdentity { .. }) => Some(0),
        (paire::Template::Identity { n: i }, Code::Grid { k, l, m }) => {
            let i = *i as u64;
            let a = bin(*k as u64 + *m as u64, i)?;
            let b = bin(*l as u64 + *m as u64, i)?;
            let c = bin(*m as u64, i)?;
            a.checked_add(b)?.checked_sub(c)
        }
        (paire::Template::Identity { n: i }, Code::GridIdentity { n }) => {
            bin(*n as u64, *i as u64)
        }
        _ => unreachable!("grid prep sees only grid codes"),
    }
}

fn paire_count_big(sig: &paire::Template, code: &Code) -> BigUint {
    use counting::binomial_big as bin;
    match (sig, code) {
        (paire::Template::Grid { k: i, l: j, m: p }, Code::Grid { k, l, m }) => {
            bin(*k as u64, *i as u64) * bin(*l as u64, *j as u64) * bin(*m as u64, *p as u64)
        }
        (paire::Template::Grid { .. }, Code::GridIdentity { .. }) => BigUint::ZERO,
        (paire::Template::Identity { n: i }, Code::Grid { k, l, m }) => {
            let i = *i as u64;
            bin(*k as u64 + *m as u64, i) + bin(*l as u64 + *m as u64, i) - bin(*m as u64, i)
        }
        (paire::Template::Identity { n: i }, Code::GridIdentity { n }) => {
            bin(*n as u64, *i as u64)
        }
        _ => unreachable!("grid prep sees only grid codes"),
    }
}

struct SignsIter {
    state: Option<Vec<i8>>,
}

impl SignsIter {
    fn new(n: usize) -> SignsIter {
        SignsIter {
            state: Some(vec![-1; n - 1]),
        }
    }
}

impl Iterator for SignsIter {
    type Item = Vec<i8>;

    fn next(&mut self) -> Option<Vec<i8>> {
        let mut s = self.state.take()?;
        let out = s.clone();
        let mut i = 0;
        while i < s.len() && s[i] == 1 {
            s[i] = -1;
            i += 1;
        }
        if i < s.len() {
            s[i] = 1;
            self.state = Some(s);
        }
        Some(out)
    }
}

struct CompositionIter {
    inner: SignsIter,
}

impl CompositionIter {
    fn new(n: usize) -> CompositionIter {
        CompositionIter {
            inner: SignsIter::new(n),
        }
    }
}

impl Iterator for CompositionIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        self.inner.next().map(|bits| parts_from_boundaries(&bits))
    }
}

/// `{1,2}`-compositions of `n`, grouped by the number of 2-parts, each
/// group in lexicographic order of the 2-part positions.
struct AaaIter {
    n: usize,
    twos: usize,
    comb: Option<Vec<usize>>,
}

impl AaaIter {
    fn new(n: usize) -> AaaIter {
        AaaIter {
            n,
            twos: 0,
            comb: Some(Vec::new()),
        }
    }
}

impl Iterator for AaaIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let comb = self.comb.as_ref()?;
        let b = self.n - self.twos;
        let mut parts = vec![1u32; b];
        for &idx in comb {
            parts[idx] = 2;
        }
        // Advance the combination, or move to the next count of 2-parts.
        let mut comb = self.comb.take().expect("checked above");
        let j = self.twos;
        let mut i = j;
        loop {
            if i == 0 {
                self.twos += 1;
                if 2 * self.twos > self.n {
                    self.comb = None;
                } else {
                    self.comb = Some((0..self.twos).collect());
                }
                break;
            }
            i -= 1;
            if comb[i] < b - (j - i) {
                comb[i] += 1;
                for t in i + 1..j {
                    comb[t] = comb[t - 1] + 1;
                }
                self.comb = Some(comb);
                break;
            }
        }
        Some(parts)
    }
}

struct GridIter {
    n: u32,
    k: u32,
    l: u32,
    identity_done: bool,
}

impl GridIter {
    fn new(n: usize) -> GridIter {
        GridIter {
            n: n as u32,
            k: 1,
            l: 1,
            identity_done: false,
        }
    }
}

impl Iterator for GridIter {
    type Item = paire::Template;

    fn next(&mut self) -> Option<paire::Template> {
        if !self.identity_done {
            self.identity_done = true;
            return Some(paire::Template::Identity { n: self.n });
        }
        if self.k + self.l > self.n {
            return None;
        }
        let t = paire::Template::Grid {
            k: self.k,
            l: self.l,
            m: self.n - self.k - self.l,
        };
        if self.k + self.l < self.n {
            self.l += 1;
        } else {
            self.k += 1;
            self.l = 1;
        }
        Some(t)
    }
}

struct DyckIter {
    path: Option<Vec<i8>>,
}

impl DyckIter {
    fn new(n: usize) -> DyckIter {
        DyckIter {
            path: Some(singles::first_dyck(n)),
        }
    }
}

impl Iterator for DyckIter {
    type Item = Vec<i8>;

    fn next(&mut self) -> Option<Vec<i8>> {
        let mut path = self.path.take()?;
        let out = path.clone();
        if singles::next_dyck(&mut path) {
            self.path = Some(path);
        }
        Some(out)
    }
}

struct HeapIter {
    values: Vec<u32>,
    counters: Vec<usize>,
    level: usize,
    first: bool,
}

impl HeapIter {
    fn new(n: usize) -> HeapIter {
        HeapIter {
            values: (1..=n as u32).collect(),
            counters: vec![0; n],
            level: 0,
            first: true,
        }
    }
}

impl Iterator for HeapIter {
    type Item = Perm;

    fn next(&mut self) -> Option<Perm> {
        if self.first {
            self.first = false;
            return Some(Perm::from_vec_unchecked(self.values.clone()));
        }
        while self.level < self.values.len() {
            if self.counters[self.level] < self.level {
                if self.level % 2 == 0 {
                    self.values.swap(0, self.level);
                } else {
                    self.values.swap(self.counters[self.level], self.level);
                }
                self.counters[self.level] += 1;
                self.level = 0;
                return Some(Perm::from_vec_unchecked(self.values.clone()));
            }
            self.counters[self.level] = 0;
            self.level += 1;
        }
        None
    }
}

#[cfg(test)]
mod tests;
