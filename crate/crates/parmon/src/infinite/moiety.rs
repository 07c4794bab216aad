//! Concrete moieties of ℕ: deterministic decompositions into finitely many
//! or countably many parts, each infinite, with decidable membership and
//! injective enumerators.

/// A standard moiety of ℕ = {1, 2, 3, …}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Moiety {
    /// `k` parts by residue: part `i` is `{x : x ≡ i (mod k)}` with the
    /// residue 0 class labelled `k`.
    Residues(u64),
    /// Countably many parts by dyadic valuation: part `i ≥ 1` is
    /// `{2^(i-1) · (2m-1) : m ≥ 1}`.
    Dyadic,
}

/// The standard moiety with `k ≥ 2` parts.
pub fn standard_moiety(parts: u64) -> Moiety {
    assert!(parts >= 2, "a moiety needs at least two parts");
    Moiety::Residues(parts)
}

/// The standard moiety with countably many parts.
pub fn standard_moiety_countable() -> Moiety {
    Moiety::Dyadic
}

impl Moiety {
    /// 1-based index of the part containing `x ≥ 1`.
    pub fn part_of(&self, x: u64) -> u64 {
        debug_assert!(x >= 1);
        match self {
            Moiety::Residues(k) => (x - 1) % k + 1,
            Moiety::Dyadic => x.trailing_zeros() as u64 + 1,
        }
    }

    /// The `idx`-th smallest member of the given part (both 1-based).
    pub fn member(&self, part: u64, idx: u64) -> u64 {
        debug_assert!(part >= 1 && idx >= 1);
        match self {
            Moiety::Residues(k) => part + (idx - 1) * k,
            Moiety::Dyadic => (1u64 << (part - 1)) * (2 * idx - 1),
        }
    }

    /// 1-based position of `x` within its own part.
    pub fn rank_in_part(&self, x: u64) -> u64 {
        match self {
            Moiety::Residues(k) => (x - 1) / k + 1,
            Moiety::Dyadic => {
                let p = self.part_of(x);
                ((x >> (p - 1)) + 1) / 2
            }
        }
    }

    pub fn part_count(&self) -> Option<u64> {
        match self {
            Moiety::Residues(k) => Some(*k),
            Moiety::Dyadic => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_part_moiety_is_odds_and_evens() {
        let m = standard_moiety(2);
        assert_eq!(m.part_of(7), 1);
        assert_eq!(m.part_of(4), 2);
        assert_eq!(m.member(1, 3), 5);
        assert_eq!(m.member(2, 3), 6);
    }

    #[test]
    fn dyadic_part_of_12_is_3() {
        let m = standard_moiety_countable();
        assert_eq!(m.part_of(12), 3); // 12 = 2² · 3
        assert_eq!(m.member(3, 2), 12);
        assert_eq!(m.rank_in_part(12), 2);
    }

    #[test]
    fn parts_cover_a_window_exactly_once() {
        for m in [standard_moiety(2), standard_moiety(7), standard_moiety_countable()] {
            for x in 1..=10_000u64 {
                let p = m.part_of(x);
                let r = m.rank_in_part(x);
                assert_eq!(m.member(p, r), x, "moiety {m:?} at {x}");
            }
        }
    }

    #[test]
    fn enumerators_are_injective_and_land_in_their_part() {
        let m = standard_moiety_countable();
        for part in 1..=6u64 {
            let mut prev = 0;
            for idx in 1..=50u64 {
                let v = m.member(part, idx);
                assert!(v > prev);
                assert_eq!(m.part_of(v), part);
                prev = v;
            }
        }
    }
}
