use crate::bnmodel::Pdag;
use crate::citest::{CiError, CiTest, TestConfig};
use crate::discovery::{DiscoveryStats, SepsetMap};

/// Visits every `k`-subset of `items` in lexicographic order until `f`
/// returns `true`.
fn for_each_subset(items: &[usize], k: usize, mut f: impl FnMut(&[usize]) -> Result<bool, CiError>) -> Result<bool, CiError> {
    if k > items.len() {
        return Ok(false);
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut set = vec![0; k];
    loop {
        for (s, &i) in set.iter_mut().zip(&idx) {
            *s = items[i];
        }
        if f(&set)? {
            return Ok(true);
        }
        // Rightmost index that can still move.
        let mut i = k;
        while i > 0 && idx[i - 1] == items.len() - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return Ok(false);
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// PC-stable adjacency search.
///
/// At level `ℓ` each node's adjacency is frozen at the start of the level.
/// For each remaining edge `x − y` (x < y) the size-`ℓ` subsets of frozen
/// `adj(x) \ {y}` are tried in lexicographic order, then those of
/// `adj(y) \ {x}` not already tried. The first independence removes the
/// edge and records the separating set. Variables the test reports as
/// uninformative are isolated up front and never used for conditioning.
pub fn learn_skeleton<T: CiTest + ?Sized>(
    test: &T,
    config: &TestConfig,
) -> Result<(Pdag, SepsetMap, DiscoveryStats), CiError> {
    let n = test.n_vars();
    let informative: Vec<bool> = (0..n).map(|v| test.is_informative(v)).collect();
    let mut g = Pdag::empty(n);
    let mut sepsets = SepsetMap::default();
    for a in 0..n {
        for b in a + 1..n {
            if informative[a] && informative[b] {
                g.set_undirected(a, b);
            } else {
                sepsets.insert(a, b, Vec::new());
            }
        }
    }
    let mut stats = DiscoveryStats::default();
    let mut level = 0;
    loop {
        if level > config.max_cond_set {
            break;
        }
        let frozen: Vec<Vec<usize>> = (0..n).map(|v| g.adjacent(v)).collect();
        if !frozen.iter().any(|adj| adj.len() > level) {
            break;
        }
        for x in 0..n {
            for &y in &frozen[x] {
                if y <= x || !g.is_adjacent(x, y) {
                    continue;
                }
                let ax: Vec<usize> = frozen[x].iter().copied().filter(|&v| v != y).collect();
                let ay: Vec<usize> = frozen[y].iter().copied().filter(|&v| v != x).collect();
                let mut found = None;
                let mut try_set = |z: &[usize], stats: &mut DiscoveryStats| -> Result<bool, CiError> {
                    stats.record(z.len());
                    if test.test(x, y, z)?.independent {
                        found = Some(z.to_vec());
                        return Ok(true);
                    }
                    Ok(false)
                };
                let mut removed = for_each_subset(&ax, level, |z| try_set(z, &mut stats))?;
                if !removed {
                    removed = for_each_subset(&ay, level, |z| {
                        if z.iter().all(|v| ax.contains(v)) {
                            return Ok(false);
                        }
                        try_set(z, &mut stats)
                    })?;
                }
                if removed {
                    g.remove_edge(x, y);
                    sepsets.insert(x, y, found.take().expect("set recorded"));
                }
            }
        }
        level += 1;
    }
    Ok((g, sepsets, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_in_order() {
        let mut seen = Vec::new();
        for_each_subset(&[1, 4, 7, 9], 2, |s| {
            seen.push(s.to_vec());
            Ok(false)
        })
        .unwrap();
        assert_eq!(seen, vec![vec![1, 4], vec![1, 7], vec![1, 9], vec![4, 7], vec![4, 9], vec![7, 9]]);
        let mut count = 0;
        for_each_subset(&[1, 2, 3], 0, |s| {
            assert!(s.is_empty());
            count += 1;
            Ok(false)
        })
        .unwrap();
        assert_eq!(count, 1);
        assert!(!for_each_subset(&[1], 2, |_| Ok(true)).unwrap());
        let mut all = 0;
        for_each_subset(&[0, 1, 2, 3, 4], 5, |_| {
            all += 1;
            Ok(false)
        })
        .unwrap();
        assert_eq!(all, 1);
    }
}
