//! Named experiments accepted by `murmur run`, and the invocation that
//! produces each standard plot.

use murmur_core::{DiscriminantClass, Family};
use num_rational::Ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataKind {
    None,
    Newforms,
    Curves,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Delta,
    NoRoot,
    Mobius,
    MobiusSlope,
    AlEigenspace,
    ClassSum(u8),
    LvalueD,
    LvalueP,
    Bqf(&'static [DiscriminantClass]),
    EcFixedRoot,
    EcNoRoot,
    MfFixedRoot,
}

#[derive(Debug, Clone, Copy)]
pub struct Entry {
    pub name: &'static str,
    pub kind: Kind,
    pub summary: &'static str,
}

use DiscriminantClass::*;

pub const EXPERIMENTS: &[Entry] = &[
    Entry { name: "delta", kind: Kind::Delta, summary: "root-number difference of a_p averages via tr W T_p" },
    Entry { name: "no-root", kind: Kind::NoRoot, summary: "a_p averages without root number via tr T_p" },
    Entry { name: "mobius", kind: Kind::Mobius, summary: "Möbius contribution to the no-root average, with class-number part and linear overlay" },
    Entry { name: "mobius-slope", kind: Kind::MobiusSlope, summary: "least-squares slope of the Möbius contribution across X" },
    Entry { name: "al-eigenspace", kind: Kind::AlEigenspace, summary: "a_ℓ averages on Atkin–Lehner eigenspaces at levels pq (needs --data)" },
    Entry { name: "class-sum-a0", kind: Kind::ClassSum(0), summary: "Σ H(s²N² − 4Np), s ≤ 1" },
    Entry { name: "class-sum-a1", kind: Kind::ClassSum(1), summary: "Σ H(s²p² − 4Np), s ≤ 4" },
    Entry { name: "class-sum-a2", kind: Kind::ClassSum(2), summary: "Σ H(s² + 1 − 3Np)" },
    Entry { name: "class-sum-a3", kind: Kind::ClassSum(3), summary: "Σ H(s²N³ − 4N²p)" },
    Entry { name: "class-sum-a4", kind: Kind::ClassSum(4), summary: "Σ H(s²N³ − tN − 4N²p)" },
    Entry { name: "lvalue-d", kind: Kind::LvalueD, summary: "twisted central L-value averages against D" },
    Entry { name: "lvalue-p", kind: Kind::LvalueP, summary: "a_p averages weighted by L-values, D = 3" },
    Entry { name: "bqf-odd1", kind: Kind::Bqf(&[Odd1Mod8]), summary: "form representation averages, −D ≡ 1 mod 8" },
    Entry { name: "bqf-odd5", kind: Kind::Bqf(&[Odd5Mod8]), summary: "form representation averages, −D ≡ 5 mod 8" },
    Entry { name: "bqf-even1", kind: Kind::Bqf(&[Even1Mod4]), summary: "form representation averages, D = 4d with d ≡ 1 mod 4" },
    Entry { name: "bqf-even3", kind: Kind::Bqf(&[Even3Mod4]), summary: "form representation averages, D = 4d with d ≡ 3 mod 4" },
    Entry { name: "bqf-odd", kind: Kind::Bqf(&[Odd1Mod8, Odd5Mod8]), summary: "both odd classes in one file" },
    Entry { name: "bqf-even", kind: Kind::Bqf(&[Even1Mod4, Even3Mod4]), summary: "both even classes in one file" },
    Entry { name: "ec-fixed-root", kind: Kind::EcFixedRoot, summary: "elliptic-curve a_p averages by root number (needs --data)" },
    Entry { name: "ec-no-root", kind: Kind::EcNoRoot, summary: "elliptic-curve √N·a_p averages (needs --data)" },
    Entry { name: "mf-fixed-root", kind: Kind::MfFixedRoot, summary: "newform a_p averages by root number (needs --data)" },
];

pub fn lookup(name: &str) -> Option<&'static Entry> {
    EXPERIMENTS.iter().find(|e| e.name == name)
}

impl Kind {
    pub fn family(self) -> Family {
        match self {
            Kind::Delta => Family::MfDelta,
            Kind::NoRoot => Family::MfNoRoot,
            Kind::Mobius | Kind::MobiusSlope => Family::MfMobiusPart,
            Kind::AlEigenspace => Family::AlEigenspace,
            Kind::ClassSum(v) => Family::ClassSum(v),
            Kind::LvalueD => Family::LvalueOverD,
            Kind::LvalueP => Family::LvalueOverP,
            Kind::Bqf(classes) => Family::Bqf(classes[0]),
            Kind::EcFixedRoot => Family::EcFixedRootData,
            Kind::EcNoRoot => Family::EcNoRootData,
            Kind::MfFixedRoot => Family::MfFixedRootData,
        }
    }

    pub fn data(self) -> DataKind {
        match self {
            Kind::AlEigenspace | Kind::MfFixedRoot => DataKind::Newforms,
            Kind::EcFixedRoot | Kind::EcNoRoot => DataKind::Curves,
            _ => DataKind::None,
        }
    }

    /// Prime-axis cutoff as a multiple of X when no ratio is given.
    pub fn default_xmax_ratio(self) -> Ratio<u64> {
        match self {
            Kind::EcNoRoot => Ratio::from_integer(2),
            Kind::ClassSum(_) | Kind::LvalueP => Ratio::from_integer(1),
            _ => Ratio::from_integer(4),
        }
    }
}

pub struct Figure {
    pub caption: &'static str,
    pub invocation: &'static str,
}

pub const FIGURES: &[Figure] = &[
    Figure { caption: "weight 2 murmurations, squarefree 1000 ≤ N ≤ 2000", invocation: "murmur run mf-fixed-root --x 1000 --data newforms.txt" },
    Figure { caption: "weight 2 murmurations, squarefree 2000 ≤ N ≤ 4000", invocation: "murmur run mf-fixed-root --x 2000 --data newforms.txt" },
    Figure { caption: "weight 2 without root number, X = 2000", invocation: "murmur run no-root --x 2000" },
    Figure { caption: "weight 2 without root number, X = 4000", invocation: "murmur run no-root --x 4000" },
    Figure { caption: "elliptic curve √N·a_p without root number, X = 2000", invocation: "murmur run ec-no-root --x 2000 --data curves.txt" },
    Figure { caption: "elliptic curve √N·a_p without root number, X = 4000", invocation: "murmur run ec-no-root --x 4000 --data curves.txt" },
    Figure { caption: "class number versus Möbius sums, X = 2000", invocation: "murmur run mobius --x 2000" },
    Figure { caption: "class number versus Möbius sums, X = 4000", invocation: "murmur run mobius --x 4000" },
    Figure { caption: "Möbius contribution slopes", invocation: "murmur run mobius-slope --x 1000 --x-end 4000 --x-step 100" },
    Figure { caption: "AL eigenspaces on S_2(2q)", invocation: "murmur run al-eigenspace --x 3000 --p0 2 --weight 2 --data newforms.txt" },
    Figure { caption: "AL eigenspaces on S_4(2q)", invocation: "murmur run al-eigenspace --x 3000 --p0 2 --weight 4 --data newforms.txt" },
    Figure { caption: "AL eigenspaces on S_4(pq)", invocation: "murmur run al-eigenspace --x 6000 --mode both --weight 4 --data newforms.txt" },
    Figure { caption: "class number sum for s²N² − 4Np", invocation: "murmur run class-sum-a0 --x 1000" },
    Figure { caption: "class number sum for s²p² − 4Np", invocation: "murmur run class-sum-a1 --x 1000" },
    Figure { caption: "class number sum for s² + 1 − 3Np", invocation: "murmur run class-sum-a2 --x 1000" },
    Figure { caption: "class number sum for s²N³ − 4N²p", invocation: "murmur run class-sum-a3 --x 1000" },
    Figure { caption: "class number sum for s²N³ − tN − 4N²p", invocation: "murmur run class-sum-a4 --x 1000" },
    Figure { caption: "twisted L-value averages, X = 4000", invocation: "murmur run lvalue-d --x 4000" },
    Figure { caption: "twisted L-value averages, X = 8000", invocation: "murmur run lvalue-d --x 8000" },
    Figure { caption: "a_p weighted by L-values, X = 2000", invocation: "murmur run lvalue-p --x 2000" },
    Figure { caption: "a_p weighted by L-values, X = 4000", invocation: "murmur run lvalue-p --x 4000" },
    Figure { caption: "binary quadratic forms, D odd, X = 5000", invocation: "murmur run bqf-odd --x 5000" },
    Figure { caption: "binary quadratic forms, D odd, X = 10000", invocation: "murmur run bqf-odd --x 10000" },
    Figure { caption: "binary quadratic forms, D even, X = 5000", invocation: "murmur run bqf-even --x 5000" },
    Figure { caption: "binary quadratic forms, D even, X = 10000", invocation: "murmur run bqf-even --x 10000" },
];

#[cfg(test)]
mod tests {
    use super::*;

    /// Every family the library knows about; the match keeps this list
    /// in step with the enum.
    fn all_families() -> Vec<Family> {
        let witness = |f: Family| match f {
            Family::MfDelta
            | Family::MfNoRoot
            | Family::MfMobiusPart
            | Family::MfFixedRootData
            | Family::EcFixedRootData
            | Family::EcNoRootData
            | Family::AlEigenspace
            | Family::ClassSum(_)
            | Family::LvalueOverD
            | Family::LvalueOverP
            | Family::Bqf(_) => f,
        };
        let mut out = vec![
            Family::MfDelta,
            Family::MfNoRoot,
            Family::MfMobiusPart,
            Family::MfFixedRootData,
            Family::EcFixedRootData,
            Family::EcNoRootData,
            Family::AlEigenspace,
            Family::LvalueOverD,
            Family::LvalueOverP,
        ];
        out.extend((0..=4).map(Family::ClassSum));
        out.extend([Odd1Mod8, Odd5Mod8, Even1Mod4, Even3Mod4].map(Family::Bqf));
        out.into_iter().map(witness).collect()
    }

    #[test]
    fn every_family_has_an_experiment() {
        for f in all_families() {
            assert!(EXPERIMENTS.iter().any(|e| e.kind.family() == f), "{f:?} has no experiment name");
        }
    }

    #[test]
    fn names_are_unique() {
        for (i, e) in EXPERIMENTS.iter().enumerate() {
            assert!(EXPERIMENTS[i + 1..].iter().all(|o| o.name != e.name), "{}", e.name);
        }
    }

    #[test]
    fn figure_invocations_name_known_experiments() {
        let mut seen = std::collections::BTreeSet::new();
        for fig in FIGURES {
            let words: Vec<&str> = fig.invocation.split_whitespace().collect();
            assert_eq!(&words[..2], ["murmur", "run"]);
            assert!(lookup(words[2]).is_some(), "{}", fig.invocation);
            assert!(seen.insert(fig.invocation), "duplicate invocation {}", fig.invocation);
            if lookup(words[2]).unwrap().kind.data() != DataKind::None {
                assert!(words.contains(&"--data"), "{}", fig.invocation);
            }
        }
        assert_eq!(FIGURES.len(), 25);
    }
}
