use serde::Serialize;

use crate::invariants::LatticePoint;

/// The two strip families that do contain spin complex surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PpxFamily {
    /// c = 2(χ − 3) = 8k with k odd.
    NoetherOddK,
    /// c = (8/3)(χ − 4) with 3 | χ.
    EightThirds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PpxVerdict {
    /// Outside 2χ − 6 ≤ c < 3(χ − 5).
    NotApplicable,
    Admissible { family: PpxFamily },
    NotAdmissible,
}

impl PpxVerdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, PpxVerdict::Admissible { .. })
    }
}

/// Spin minimal complex surfaces in the strip 2χ − 6 ≤ c < 3(χ − 5) occur
/// only on the two families of [`PpxFamily`].
pub fn ppx_admissible(p: LatticePoint) -> PpxVerdict {
    let (chi, c) = (p.chi, p.c);
    if !(2 * chi - 6 <= c && c < 3 * (chi - 5)) {
        return PpxVerdict::NotApplicable;
    }
    if c == 2 * (chi - 3) && c % 8 == 0 && (c / 8) % 2 != 0 {
        return PpxVerdict::Admissible {
            family: PpxFamily::NoetherOddK,
        };
    }
    if 3 * c == 8 * (chi - 4) && chi % 3 == 0 {
        return PpxVerdict::Admissible {
            family: PpxFamily::EightThirds,
        };
    }
    PpxVerdict::NotAdmissible
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(ppx_admissible(LatticePoint::new(13, 20)), PpxVerdict::NotAdmissible);
        assert_eq!(ppx_admissible(LatticePoint::new(7, 8)), PpxVerdict::NotApplicable);
        assert_eq!(
            ppx_admissible(LatticePoint::new(15, 24)),
            PpxVerdict::Admissible {
                family: PpxFamily::NoetherOddK
            }
        );
        // 3·32 = 8·(16−4) but 3 ∤ 16
        assert_eq!(ppx_admissible(LatticePoint::new(16, 32)), PpxVerdict::NotAdmissible);
    }

    #[test]
    fn eight_thirds_family_has_no_lattice_points() {
        // 3 | χ forces 8(χ − 4) ≡ 1 (mod 3), so 3c = 8(χ − 4) has no solution
        for chi in 1..600 {
            for c in 0..10 * chi {
                let v = ppx_admissible(LatticePoint::new(chi, c));
                assert_ne!(v, PpxVerdict::Admissible { family: PpxFamily::EightThirds });
            }
        }
    }
}
