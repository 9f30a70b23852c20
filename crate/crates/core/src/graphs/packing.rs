use crate::error::{Error, Result};
use crate::query::CQ;

/// Variable limit for the exhaustive packing and cover searches.
pub const MAX_BRUTE_FORCE_VARS: usize = 30;

fn guard(q: &CQ) -> Result<Vec<String>> {
    let vars = q.vars();
    if vars.len() > MAX_BRUTE_FORCE_VARS {
        return Err(Error::Guard(format!(
            "exhaustive search is limited to {MAX_BRUTE_FORCE_VARS} variables (query has {})",
            vars.len()
        )));
    }
    Ok(vars)
}

fn atom_masks(q: &CQ, vars: &[String]) -> Vec<u32> {
    q.atoms
        .iter()
        .map(|a| {
            vars.iter()
                .enumerate()
                .filter(|(_, v)| a.contains_var(v))
                .fold(0u32, |m, (i, _)| m | (1 << i))
        })
        .filter(|&m| m != 0)
        .collect()
}

fn to_names(vars: &[String], set: u32) -> Vec<String> {
    (0..vars.len()).filter(|i| set & (1 << i) != 0).map(|i| vars[i].clone()).collect()
}

/// Largest set of variables no two of which share an atom. Ties resolve to
/// the lexicographically smallest set in variable order.
pub fn integer_vertex_packing_max(q: &CQ) -> Result<(usize, Vec<String>)> {
    let vars = guard(q)?;
    let n = vars.len();
    let masks = atom_masks(q, &vars);
    let conflict: Vec<u32> = (0..n)
        .map(|i| masks.iter().filter(|m| *m & (1 << i) != 0).fold(0, |acc, m| acc | m) & !(1 << i))
        .collect();
    fn go(i: usize, n: usize, chosen: u32, banned: u32, conflict: &[u32], best: &mut (u32, u32)) {
        let size = chosen.count_ones();
        if size + (n - i) as u32 <= best.0 {
            return;
        }
        if i == n {
            *best = (size, chosen);
            return;
        }
        if banned & (1 << i) == 0 {
            go(i + 1, n, chosen | (1 << i), banned | conflict[i], conflict, best);
        }
        go(i + 1, n, chosen, banned, conflict, best);
    }
    let mut best = (0u32, 0u32);
    go(0, n, 0, 0, &conflict, &mut best);
    Ok((best.0 as usize, to_names(&vars, best.1)))
}

/// Smallest set of variables meeting every atom that has variables. Ties
/// resolve to the lexicographically smallest set in variable order.
pub fn vertex_cover_min(q: &CQ) -> Result<(usize, Vec<String>)> {
    let vars = guard(q)?;
    let n = vars.len();
    let masks = atom_masks(q, &vars);
    fn go(i: usize, n: usize, chosen: u32, masks: &[u32], best: &mut Option<(u32, u32)>) {
        let size = chosen.count_ones();
        if matches!(best, Some((b, _)) if size >= *b) {
            return;
        }
        let decided = if i >= 32 { u32::MAX } else { (1u32 << i) - 1 };
        // Prune when some atom has all its variables decided and none chosen.
        if masks.iter().any(|&m| m & !decided == 0 && m & chosen == 0) {
            return;
        }
        if i == n {
            *best = Some((size, chosen));
            return;
        }
        go(i + 1, n, chosen | (1 << i), masks, best);
        go(i + 1, n, chosen, masks, best);
    }
    let mut best = None;
    go(0, n, 0, &masks, &mut best);
    let (size, set) = best.unwrap_or((0, 0));
    Ok((size as usize, to_names(&vars, set)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::parse_query;

    fn q(text: &str) -> CQ {
        parse_query(text).unwrap().0
    }

    #[test]
    fn packings() {
        assert_eq!(integer_vertex_packing_max(&q("s() :- R(a,b,c).")).unwrap().0, 1);
        assert_eq!(integer_vertex_packing_max(&q("f() :- R(a), S(b), T(c).")).unwrap().0, 3);
        let p3 = q("p() :- R(a,b), R(b,c), R(c,d).");
        assert_eq!(integer_vertex_packing_max(&p3).unwrap(), (2, vec!["a".into(), "c".into()]));
    }

    #[test]
    fn covers() {
        let star = q("z() :- R(y,a), R(y,b), R(y,c), R(y,d).");
        assert_eq!(vertex_cover_min(&star).unwrap(), (1, vec!["y".into()]));
        assert_eq!(vertex_cover_min(&q("f() :- R(a), S(b), T(c).")).unwrap().0, 3);
        let p3 = q("p() :- R(a,b), R(b,c), R(c,d).");
        assert_eq!(vertex_cover_min(&p3).unwrap(), (2, vec!["a".into(), "c".into()]));
    }
}
