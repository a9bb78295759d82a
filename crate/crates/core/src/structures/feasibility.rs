use serde::Serialize;

/// `⌈log₂ n⌉` for `n ≥ 1`, by bit length.
#[inline]
pub fn clog2(n: u64) -> u32 {
    assert!(n >= 1, "clog2 of zero");
    u64::BITS - (n - 1).leading_zeros()
}

/// A split sequence `x_1, ..., x_t` summing to `p - 1` that meets the size,
/// logarithm and star-prefix conditions at every step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilitySequence {
    pub p: u64,
    pub d: u64,
    pub t: u64,
    pub x: Vec<u64>,
    /// `s_i = x_1 + ... + x_{i-1}`.
    pub partial_sums: Vec<u64>,
}

impl FeasibilitySequence {
    /// Rechecks every condition from scratch.
    pub fn is_valid(&self) -> bool {
        if self.x.iter().sum::<u64>() != self.p.saturating_sub(1) {
            return false;
        }
        let mut s = 0;
        for (i, &x) in self.x.iter().enumerate() {
            if self.partial_sums.get(i) != Some(&s) || !step_ok(self.p, self.d, self.t, i as u64 + 1, s, x) {
                return false;
            }
            s += x;
        }
        self.partial_sums.len() == self.x.len()
    }
}

fn step_ok(p: u64, d: u64, t: u64, i: u64, s: u64, x: u64) -> bool {
    let rem = p - s;
    if x < 1 || x > rem / 2 {
        return false;
    }
    let big = clog2(rem - x) as i64;
    if clog2(x) as i64 + big > d as i64 - 1 {
        return false;
    }
    big <= d as i64 - i as i64 - t as i64
}

/// Depth-first search for a feasible sequence; the first one in lexicographic
/// order of `x` is returned. `None` when no sequence exists.
pub fn wildtime_feasible(p: u64, d: u64, t: u64) -> Option<FeasibilitySequence> {
    if p < 2 || d < 1 {
        return None;
    }
    let mut x = Vec::new();
    if extend(p, d, t, 0, &mut x) {
        let partial_sums = x
            .iter()
            .scan(0, |s, &v| {
                let before = *s;
                *s += v;
                Some(before)
            })
            .collect();
        Some(FeasibilitySequence { p, d, t, x, partial_sums })
    } else {
        None
    }
}

fn extend(p: u64, d: u64, t: u64, s: u64, x: &mut Vec<u64>) -> bool {
    if s == p - 1 {
        return true;
    }
    let i = x.len() as u64 + 1;
    for xi in 1..=(p - s) / 2 {
        if !step_ok(p, d, t, i, s, xi) {
            continue;
        }
        x.push(xi);
        if extend(p, d, t, s + xi, x) {
            return true;
        }
        x.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clog2_values() {
        let got: Vec<u32> = (1..=9).map(clog2).collect();
        assert_eq!(got, [0, 1, 2, 2, 3, 3, 3, 3, 4]);
        assert_eq!(clog2(1 << 40), 40);
        assert_eq!(clog2((1 << 40) + 1), 41);
    }

    #[test]
    fn known_verdicts() {
        assert_eq!(wildtime_feasible(6, 3, 0), None);
        assert_eq!(wildtime_feasible(8, 4, 0), None);
        let five = wildtime_feasible(5, 3, 0).expect("feasible");
        assert_eq!(five.x, [1, 2, 1]);
        assert_eq!(five.partial_sums, [0, 1, 3]);
        assert!(five.is_valid());
    }

    #[test]
    fn pairs_need_room_for_the_prefix() {
        assert!(wildtime_feasible(2, 1, 0).is_some());
        assert!(wildtime_feasible(2, 3, 2).is_some());
        assert!(wildtime_feasible(2, 3, 3).is_none());
    }

    /// Plain enumeration of all compositions of p - 1, for comparison.
    fn any_composition(p: u64, d: u64, t: u64) -> bool {
        fn rec(p: u64, d: u64, t: u64, s: u64, i: u64) -> bool {
            if s == p - 1 {
                return true;
            }
            (1..=p - 1 - s).any(|x| {
                let rem = p - s;
                let ok = x <= rem / 2
                    && clog2(x) + clog2(rem - x) < d as u32
                    && (clog2(rem - x) as i64) + (i + t) as i64 <= d as i64;
                ok && rec(p, d, t, s + x, i + 1)
            })
        }
        rec(p, d, t, 0, 1)
    }

    #[test]
    fn agrees_with_plain_enumeration() {
        for p in 2..=14 {
            for d in 1..=7 {
                for t in 0..=3 {
                    let found = wildtime_feasible(p, d, t);
                    assert_eq!(found.is_some(), any_composition(p, d, t), "{p} {d} {t}");
                    if let Some(seq) = found {
                        assert!(seq.is_valid());
                    }
                }
            }
        }
    }
}
