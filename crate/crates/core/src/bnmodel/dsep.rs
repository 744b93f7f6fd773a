//! d-separation by reachability (Bayes ball).

use crate::bnmodel::{BnError, Dag};

/// True iff every trail between `x` and `y` is blocked given `z`.
pub fn d_separated(dag: &Dag, x: usize, y: usize, z: &[usize]) -> Result<bool, BnError> {
    let n = dag.n();
    for &v in z.iter().chain([&x, &y]) {
        if v >= n {
            return Err(BnError::UnknownNode(v.to_string()));
        }
    }
    if x == y || z.contains(&x) || z.contains(&y) {
        return Err(BnError::Invalid("x, y and z must be disjoint".into()));
    }
    let mut in_z = vec![false; n];
    for &v in z {
        in_z[v] = true;
    }
    // Nodes with a descendant in z (z included): colliders there are open.
    let mut anc = in_z.clone();
    let mut stack: Vec<usize> = z.to_vec();
    while let Some(v) = stack.pop() {
        for &p in dag.parents(v) {
            if !anc[p] {
                anc[p] = true;
                stack.push(p);
            }
        }
    }

    // Visit states: (node, arrived from a child = "up").
    let mut seen_up = vec![false; n];
    let mut seen_down = vec![false; n];
    let mut stack = vec![(x, true)];
    while let Some((v, up)) = stack.pop() {
        let seen = if up { &mut seen_up } else { &mut seen_down };
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if v == y && !in_z[v] {
            return Ok(false);
        }
        if up {
            if !in_z[v] {
                stack.extend(dag.parents(v).iter().map(|&p| (p, true)));
                stack.extend(dag.children(v).iter().map(|&c| (c, false)));
            }
        } else {
            if !in_z[v] {
                stack.extend(dag.children(v).iter().map(|&c| (c, false)));
            }
            if anc[v] {
                stack.extend(dag.parents(v).iter().map(|&p| (p, true)));
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain() {
        let dag = Dag::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(d_separated(&dag, 0, 2, &[1]).unwrap());
        assert!(!d_separated(&dag, 0, 2, &[]).unwrap());
    }

    #[test]
    fn collider() {
        let dag = Dag::new(3, &[(0, 2), (1, 2)]).unwrap();
        assert!(d_separated(&dag, 0, 1, &[]).unwrap());
        assert!(!d_separated(&dag, 0, 1, &[2]).unwrap());
    }

    #[test]
    fn collider_descendant_opens() {
        let dag = Dag::new(4, &[(0, 2), (1, 2), (2, 3)]).unwrap();
        assert!(!d_separated(&dag, 0, 1, &[3]).unwrap());
    }

    #[test]
    fn disconnected() {
        let dag = Dag::new(3, &[(0, 1)]).unwrap();
        assert!(d_separated(&dag, 0, 2, &[]).unwrap());
        assert!(d_separated(&dag, 0, 2, &[1]).unwrap());
    }

    #[test]
    fn fork() {
        let dag = Dag::new(3, &[(1, 0), (1, 2)]).unwrap();
        assert!(!d_separated(&dag, 0, 2, &[]).unwrap());
        assert!(d_separated(&dag, 0, 2, &[1]).unwrap());
    }

    #[test]
    fn bad_arguments() {
        let dag = Dag::new(2, &[(0, 1)]).unwrap();
        assert!(matches!(d_separated(&dag, 0, 5, &[]), Err(BnError::UnknownNode(_))));
        assert!(d_separated(&dag, 0, 0, &[]).is_err());
        assert!(d_separated(&dag, 0, 1, &[1]).is_err());
    }
}
