use causalci_core::bnmodel::Cpdag;

use crate::BenchError;

/// Structural Hamming distance between two CPDAGs on the same nodes. Each
/// node pair whose edge differs (missing, extra, or a different mark)
/// costs 1.
pub fn shd(learned: &Cpdag, truth: &Cpdag) -> Result<usize, BenchError> {
    if learned.n() != truth.n() {
        return Err(BenchError::Invalid(format!(
            "node sets differ: {} vs {} nodes",
            learned.n(),
            truth.n()
        )));
    }
    let n = truth.n();
    let mut d = 0;
    for a in 0..n {
        for b in a + 1..n {
            if learned.edge(a, b) != truth.edge(a, b) {
                d += 1;
            }
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use causalci_core::bnmodel::Pdag;

    #[test]
    fn examples() {
        let truth = Pdag::undirected(3, &[(0, 1), (1, 2)]);
        assert_eq!(shd(&truth, &truth).unwrap(), 0);
        assert_eq!(shd(&Pdag::undirected(3, &[(0, 1)]), &truth).unwrap(), 1);

        let mut collider = Pdag::empty(3);
        collider.set_directed(0, 2);
        collider.set_directed(1, 2);
        let mut learned = Pdag::empty(3);
        learned.set_directed(0, 2);
        learned.set_undirected(1, 2);
        assert_eq!(shd(&learned, &collider).unwrap(), 1);

        let mut reversed = collider.clone();
        reversed.set_directed(2, 1);
        assert_eq!(shd(&reversed, &collider).unwrap(), 1);
    }

    #[test]
    fn node_mismatch() {
        assert!(shd(&Pdag::empty(2), &Pdag::empty(3)).is_err());
    }
}
