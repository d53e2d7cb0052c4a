use std::fmt;

use serde::Serialize;

/// The axiom or condition a [`Violation`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    // scwols
    NoLoops,
    CompositionMissing,
    CompositionSpurious,
    CompositionEndpoints,
    Associativity,
    // actions
    NotPermutation,
    IdentityActsNontrivially,
    ActionNotHomomorphism,
    NotEquivariant,
    Inversion,
    Rigidity,
    // homomorphisms
    IdentityNotPreserved,
    NotMultiplicative,
    NotInjective,
    // complexes of groups
    HomEndpoints,
    TwistMissing,
    TwistOutOfRange,
    CocycleConjugation,
    CocycleAssociativity,
    // coarse certificates and witnesses
    NotCovered,
    NotBounded,
    NotDisjoint,
    FamilyCount,
    ParameterMismatch,
    NotProbability,
    SupportTooLarge,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::NoLoops => "no-loops",
            ViolationKind::CompositionMissing => "composition-missing",
            ViolationKind::CompositionSpurious => "composition-spurious",
            ViolationKind::CompositionEndpoints => "composition-endpoints",
            ViolationKind::Associativity => "associativity",
            ViolationKind::NotPermutation => "not-permutation",
            ViolationKind::IdentityActsNontrivially => "identity-acts-nontrivially",
            ViolationKind::ActionNotHomomorphism => "action-not-homomorphism",
            ViolationKind::NotEquivariant => "not-equivariant",
            ViolationKind::Inversion => "inversion",
            ViolationKind::Rigidity => "rigidity",
            ViolationKind::IdentityNotPreserved => "identity-not-preserved",
            ViolationKind::NotMultiplicative => "not-multiplicative",
            ViolationKind::NotInjective => "not-injective",
            ViolationKind::HomEndpoints => "hom-endpoints",
            ViolationKind::TwistMissing => "twist-missing",
            ViolationKind::TwistOutOfRange => "twist-out-of-range",
            ViolationKind::CocycleConjugation => "cocycle-conjugation",
            ViolationKind::CocycleAssociativity => "cocycle-associativity",
            ViolationKind::NotCovered => "not-covered",
            ViolationKind::NotBounded => "not-bounded",
            ViolationKind::NotDisjoint => "not-disjoint",
            ViolationKind::FamilyCount => "family-count",
            ViolationKind::ParameterMismatch => "parameter-mismatch",
            ViolationKind::NotProbability => "not-probability",
            ViolationKind::SupportTooLarge => "support-too-large",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

/// Outcome of a validator: violations are data, an empty report means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, kind: ViolationKind, detail: impl Into<String>) {
        self.violations.push(Violation { kind, detail: detail.into() });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{}: {}", v.kind, v.detail)?;
        }
        Ok(())
    }
}
