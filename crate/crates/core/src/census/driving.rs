use crate::gap_cycle::Constellation;

/// The constellations one gap longer than `target` that become `target`
/// when one pair of adjacent gaps is added together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrivingTermSet {
    pub target: Constellation,
    /// Sorted and free of duplicates.
    pub members: Vec<Constellation>,
}

/// Splits each gap `c` of `s` as `(x, c - x)` for even `2 <= x <= c - 2`.
pub fn driving_terms(s: &Constellation) -> DrivingTermSet {
    let gaps = s.gaps();
    let mut members = Vec::new();
    for (i, &c) in gaps.iter().enumerate() {
        let mut x = 2;
        while x + 2 <= c {
            let mut v = Vec::with_capacity(gaps.len() + 1);
            v.extend_from_slice(&gaps[..i]);
            v.push(x);
            v.push(c - x);
            v.extend_from_slice(&gaps[i + 1..]);
            members.push(Constellation::from_valid(v));
            x += 2;
        }
    }
    members.sort();
    members.dedup();
    DrivingTermSet {
        target: s.clone(),
        members,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(v: &[u16]) -> Constellation {
        Constellation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn six_splits_two_ways() {
        let d = driving_terms(&c(&[6]));
        assert_eq!(d.members, vec![c(&[2, 4]), c(&[4, 2])]);
    }

    #[test]
    fn two_has_none() {
        assert!(driving_terms(&c(&[2])).members.is_empty());
    }

    #[test]
    fn four_two() {
        assert_eq!(driving_terms(&c(&[4, 2])).members, vec![c(&[2, 2, 2])]);
    }

    proptest! {
        #[test]
        fn members_close_back_to_target(v in proptest::collection::vec(1u16..8, 1..6)) {
            let s = Constellation::new(v.iter().map(|x| 2 * x).collect()).unwrap();
            let d = driving_terms(&s);
            let expected: usize = s.gaps().iter().map(|&c| (c / 2 - 1) as usize).sum();
            prop_assert_eq!(d.members.len(), expected);
            for m in &d.members {
                prop_assert_eq!(m.sum(), s.sum());
                prop_assert_eq!(m.len(), s.len() + 1);
                let closes = (0..m.len() - 1).any(|i| {
                    let mut g = m.gaps().to_vec();
                    let merged = g[i] + g[i + 1];
                    g.splice(i..=i + 1, [merged]);
                    g == s.gaps()
                });
                prop_assert!(closes);
            }
        }
    }
}
