use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ColorId, EdgeColoring};
use crate::structures::leftover::check_subset;

/// Vertices `a, b, c, d` with `f(ab) = f(cd)`, `f(ac) = f(bd)`, `f(ad) = f(bc)`,
/// the three colors pairwise distinct (listed in that order).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StripedWitness {
    pub vertices: [usize; 4],
    pub colors: [ColorId; 3],
}

impl StripedWitness {
    pub fn is_valid_for(&self, c: &EdgeColoring) -> bool {
        let [a, b, x, d] = self.vertices;
        let [m1, m2, m3] = self.colors;
        check_subset(c, &self.vertices).is_ok()
            && c.color(a, b) == m1
            && c.color(x, d) == m1
            && c.color(a, x) == m2
            && c.color(b, d) == m2
            && c.color(a, d) == m3
            && c.color(b, x) == m3
            && m1 != m2
            && m2 != m3
            && m1 != m3
    }
}

/// A striped witness for the 4-clique `s`, if it is one.
pub fn is_striped_k4(c: &EdgeColoring, s: &[usize]) -> Result<Option<StripedWitness>> {
    if s.len() != 4 {
        return Err(Error::domain(format!(
            "striped K4 check needs 4 vertices, got {}",
            s.len()
        )));
    }
    check_subset(c, s)?;
    Ok(striped_unchecked(c, [s[0], s[1], s[2], s[3]]))
}

/// Every labeling of a 4-set induces the same three perfect matchings, so one
/// labeling decides the question.
#[inline]
pub(crate) fn striped_unchecked(c: &EdgeColoring, s: [usize; 4]) -> Option<StripedWitness> {
    let [a, b, x, d] = s;
    let m1 = c.color(a, b);
    if c.color(x, d) != m1 {
        return None;
    }
    let m2 = c.color(a, x);
    if m2 == m1 || c.color(b, d) != m2 {
        return None;
    }
    let m3 = c.color(a, d);
    if m3 == m1 || m3 == m2 || c.color(b, x) != m3 {
        return None;
    }
    Some(StripedWitness {
        vertices: s,
        colors: [m1, m2, m3],
    })
}

/// The first striped 4-subset of `s` in lexicographic order of positions.
pub fn find_striped_k4(c: &EdgeColoring, s: &[usize]) -> Result<Option<StripedWitness>> {
    check_subset(c, s)?;
    let k = s.len();
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                for m in l + 1..k {
                    if let Some(w) = striped_unchecked(c, [s[i], s[j], s[l], s[m]]) {
                        return Ok(Some(w));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4(m: [[u64; 4]; 4]) -> EdgeColoring {
        EdgeColoring::from_labels(&m.map(|r| r.to_vec()), "k4").unwrap()
    }

    #[test]
    fn matching_coloring_is_striped() {
        let c = k4([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]);
        for s in [[0, 1, 2, 3], [3, 1, 0, 2], [2, 0, 3, 1]] {
            let w = is_striped_k4(&c, &s).unwrap().expect("striped");
            assert!(w.is_valid_for(&c));
        }
    }

    #[test]
    fn non_examples() {
        let mono = EdgeColoring::monochromatic(4);
        assert_eq!(is_striped_k4(&mono, &[0, 1, 2, 3]).unwrap(), None);
        let rainbow = EdgeColoring::rainbow(4);
        assert_eq!(is_striped_k4(&rainbow, &[0, 1, 2, 3]).unwrap(), None);
        // two matchings share a color
        let c = k4([[0, 1, 1, 3], [1, 0, 3, 1], [1, 3, 0, 1], [3, 1, 1, 0]]);
        assert_eq!(is_striped_k4(&c, &[0, 1, 2, 3]).unwrap(), None);
    }

    #[test]
    fn wrong_size_is_an_error() {
        let c = EdgeColoring::rainbow(5);
        assert!(is_striped_k4(&c, &[0, 1, 2]).is_err());
        assert!(is_striped_k4(&c, &[0, 1, 2, 3, 4]).is_err());
        assert!(is_striped_k4(&c, &[0, 1, 2, 2]).is_err());
    }

    #[test]
    fn search_inside_larger_sets() {
        let m = vec![
            vec![0, 9, 1, 2, 3],
            vec![9, 0, 8, 8, 8],
            vec![1, 8, 0, 3, 2],
            vec![2, 8, 3, 0, 1],
            vec![3, 8, 2, 1, 0],
        ];
        let c = EdgeColoring::from_labels(&m, "x").unwrap();
        let w = find_striped_k4(&c, &[0, 1, 2, 3, 4]).unwrap().unwrap();
        assert_eq!(w.vertices, [0, 2, 3, 4]);
        assert_eq!(find_striped_k4(&c, &[0, 1, 2, 3]).unwrap(), None);
    }
}
