use crate::error::{Error, Result};
use crate::model::EdgeColoring;
use crate::structures::leftover::check_subset;

pub const DEFAULT_FALLING_STAR_CAP: usize = 12;

/// `FS(s)`: the size of the largest falling star inside `s`.
pub fn falling_star_number(c: &EdgeColoring, s: &[usize]) -> Result<usize> {
    Ok(max_falling_star(c, s, DEFAULT_FALLING_STAR_CAP)?.len())
}

/// A largest falling star `(s_1, ..., s_t)` inside `s`: each `s_i` joins all of
/// `s_1..s_{i-1}` in a single color.
///
/// Exact search over the subsets of `s`, so `|s|` may not exceed `cap`.
pub fn max_falling_star(c: &EdgeColoring, s: &[usize], cap: usize) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Err(Error::domain("falling star search needs a nonempty subset"));
    }
    if s.len() > cap {
        return Err(Error::Capacity {
            what: "falling star subset size",
            requested: s.len() as u128,
            cap: cap as u128,
        });
    }
    check_subset(c, s)?;
    let k = s.len();
    // A set M is a star iff some v in M joins M \ {v} in one color and M \ {v}
    // is a star; `top[m]` records such a v (plus one), 0 when M is not a star.
    let mut top = vec![0u8; 1 << k];
    for m in 1usize..1 << k {
        if m.count_ones() == 1 {
            top[m] = m.trailing_zeros() as u8 + 1;
            continue;
        }
        for v in 0..k {
            if m >> v & 1 == 0 {
                continue;
            }
            let rest = m & !(1 << v);
            if top[rest] == 0 || !joins_monochromatically(c, s, v, rest) {
                continue;
            }
            top[m] = v as u8 + 1;
            break;
        }
    }
    let star = (1usize..1 << k)
        .filter(|&m| top[m] != 0)
        .max_by_key(|&m| (m.count_ones(), std::cmp::Reverse(m)))
        .expect("singletons are stars");
    let mut order = Vec::with_capacity(star.count_ones() as usize);
    let mut m = star;
    while m != 0 {
        let v = top[m] as usize - 1;
        order.push(s[v]);
        m &= !(1 << v);
    }
    order.reverse();
    Ok(order)
}

fn joins_monochromatically(c: &EdgeColoring, s: &[usize], v: usize, rest: usize) -> bool {
    let mut color = None;
    for u in 0..s.len() {
        if rest >> u & 1 == 1 {
            let x = c.color(s[v], s[u]);
            match color {
                None => color = Some(x),
                Some(y) if y != x => return false,
                _ => {}
            }
        }
    }
    true
}

/// Checks the falling-star condition on an explicit ordering.
pub fn is_falling_star(c: &EdgeColoring, order: &[usize]) -> bool {
    if check_subset(c, order).is_err() {
        return false;
    }
    (1..order.len()).all(|i| {
        let x = c.color(order[i], order[0]);
        order[..i].iter().all(|&u| c.color(order[i], u) == x)
    })
}
