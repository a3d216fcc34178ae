//! Build diagrams as closures of braid words.
//!
//! Strand positions are numbered from 1. A positive generator at position
//! `i` crosses the strand at position `i` over the strand at `i+1`; the
//! closure of `sigma_1^3` on two strands is the positive trefoil.

use std::collections::BTreeMap;

use crate::diagram::{ArcId, Crossing, CrossingKind, DiagramError, PseudoDiagram};

/// One letter of a braid word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BraidGen {
    /// Classical crossing at the given 1-based position; `positive` picks
    /// the sign.
    Sigma { pos: usize, positive: bool },
    /// Pseudo crossing at the given position.
    PseudoSigma { pos: usize },
}

pub fn sigma(pos: usize) -> BraidGen {
    BraidGen::Sigma {
        pos,
        positive: true,
    }
}

pub fn sigma_inv(pos: usize) -> BraidGen {
    BraidGen::Sigma {
        pos,
        positive: false,
    }
}

pub fn pseudo_sigma(pos: usize) -> BraidGen {
    BraidGen::PseudoSigma { pos }
}

/// Close a braid word on `n_strands` strands into a diagram. Strands that
/// meet no crossing close into zero-crossing circle components.
pub fn braid_closure(n_strands: usize, word: &[BraidGen]) -> Result<PseudoDiagram, DiagramError> {
    if n_strands == 0 {
        return Err(DiagramError::Validation("braid needs at least one strand".into()));
    }
    for g in word {
        let pos = match g {
            BraidGen::Sigma { pos, .. } | BraidGen::PseudoSigma { pos } => *pos,
        };
        if pos == 0 || pos + 1 > n_strands {
            return Err(DiagramError::Validation(format!(
                "braid generator at position {pos} needs {} strands",
                pos + 1
            )));
        }
    }

    // current[p] = arc currently occupying position p (0-based index).
    let mut current: Vec<ArcId> = (1..=n_strands as ArcId).collect();
    let mut next_arc: ArcId = n_strands as ArcId + 1;
    let mut crossings: Vec<Crossing> = Vec::new();
    let mut successor: BTreeMap<ArcId, ArcId> = BTreeMap::new();

    for g in word {
        let (pos, kind, positive) = match g {
            BraidGen::Sigma { pos, positive } => (*pos - 1, CrossingKind::Classical, *positive),
            BraidGen::PseudoSigma { pos } => (*pos - 1, CrossingKind::Pseudo, true),
        };
        let left_in = current[pos];
        let right_in = current[pos + 1];
        let left_out = next_arc;
        let right_out = next_arc + 1;
        next_arc += 2;
        // Positive: left strand over, incoming under-arc is the right one;
        // tuple counterclockwise from the under-in slot.
        let arcs = if positive {
            successor.insert(right_in, left_out);
            successor.insert(left_in, right_out);
            [right_in, right_out, left_out, left_in]
        } else {
            successor.insert(left_in, right_out);
            successor.insert(right_in, left_out);
            [left_in, right_in, right_out, left_out]
        };
        crossings.push(Crossing { kind, arcs });
        // Strands swap positions.
        current[pos] = left_out;
        current[pos + 1] = right_out;
    }

    // Close up: the final arc at each position is the initial one.
    let mut rename: BTreeMap<ArcId, ArcId> = BTreeMap::new();
    for (p, &last) in current.iter().enumerate() {
        let first = (p + 1) as ArcId;
        if last == first {
            // Untouched strand closes into a free circle.
            successor.insert(first, first);
        } else {
            rename.insert(last, first);
        }
    }
    for c in crossings.iter_mut() {
        for a in c.arcs.iter_mut() {
            if let Some(&r) = rename.get(a) {
                *a = r;
            }
        }
    }
    let successor: BTreeMap<ArcId, ArcId> = successor
        .into_iter()
        .map(|(k, v)| {
            let k = rename.get(&k).copied().unwrap_or(k);
            let v = rename.get(&v).copied().unwrap_or(v);
            (k, v)
        })
        .collect();

    PseudoDiagram::new(crossings, successor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_closure() {
        let d = braid_closure(2, &[sigma(1), sigma(1), sigma(1)]).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.n_components(), 1);
        assert_eq!(d.writhe(), 3);
    }

    #[test]
    fn hopf_closure() {
        let d = braid_closure(2, &[sigma(1), sigma(1)]).unwrap();
        assert_eq!(d.n_components(), 2);
        assert_eq!(d.writhe(), 2);
        assert_eq!(d.faces().unwrap().len(), 4);
    }

    #[test]
    fn figure_eight_closure() {
        let d = braid_closure(3, &[sigma(1), sigma_inv(2), sigma(1), sigma_inv(2)]).unwrap();
        assert_eq!(d.crossing_count(), 4);
        assert_eq!(d.n_components(), 1);
        assert_eq!(d.writhe(), 0);
        d.faces().unwrap();
    }

    #[test]
    fn unused_strand_closes_to_circle() {
        let d = braid_closure(3, &[sigma(1)]).unwrap();
        assert_eq!(d.zero_crossing_components(), 1);
        assert_eq!(d.n_components(), 2);
    }

    #[test]
    fn pseudo_generator() {
        let d = braid_closure(2, &[sigma(1), sigma(1), pseudo_sigma(1)]).unwrap();
        assert_eq!(d.pseudo_count(), 1);
        assert_eq!(d.writhe(), 2);
    }

    #[test]
    fn negative_trefoil_closure() {
        let d = braid_closure(2, &[sigma_inv(1), sigma_inv(1), sigma_inv(1)]).unwrap();
        assert_eq!(d.writhe(), -3);
        assert_eq!(d.n_components(), 1);
    }
}
