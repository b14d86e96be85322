//! Persistence pairing by reducing the coboundary matrix (the anti-transpose
//! of the boundary matrix) with clearing. Pairs are identical to those of the
//! standard boundary reduction; working on coboundaries lets degrees above
//! `max_degree` be skipped entirely.

use crate::linalg::xor_sorted;

/// Cells of a chain complex over F2, listed in a filtration-compatible order:
/// every face precedes its cofaces.
#[derive(Debug, Clone, Default)]
pub(crate) struct CellComplex {
    pub dims: Vec<usize>,
    /// `boundary[j]` lists the faces of cell `j` by index.
    pub boundary: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Pairing {
    /// (creator, destroyer) cell indices.
    pub pairs: Vec<(usize, usize)>,
    /// Creators of classes that never die.
    pub essential: Vec<usize>,
}

const NONE: usize = usize::MAX;

/// Pairs every cell of degree at most `max_degree`.
pub(crate) fn reduce(cells: &CellComplex, max_degree: usize) -> Pairing {
    let n = cells.dims.len();
    let mut cofaces: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, faces) in cells.boundary.iter().enumerate() {
        if cells.dims[j] > max_degree + 1 {
            continue;
        }
        for &i in faces {
            debug_assert!(i < j, "face {i} listed after coface {j}");
            cofaces[i].push(j);
        }
    }
    let top = cells.dims.iter().copied().max().unwrap_or(0).min(max_degree);
    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    for (i, &d) in cells.dims.iter().enumerate() {
        if d <= top {
            by_dim[d].push(i);
        }
    }

    let mut cleared = vec![false; n];
    // reduced column owning each pivot row
    let mut owner = vec![NONE; n];
    let mut reduced: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut out = Pairing::default();
    for cols in &by_dim {
        for &i in cols.iter().rev() {
            if cleared[i] {
                continue;
            }
            let mut col = std::mem::take(&mut cofaces[i]);
            // pivot is the earliest coface
            while let Some(&piv) = col.first() {
                let o = owner[piv];
                if o == NONE {
                    break;
                }
                col = xor_sorted(&col, &reduced[o]);
            }
            match col.first() {
                Some(&piv) => {
                    owner[piv] = i;
                    cleared[piv] = true;
                    out.pairs.push((i, piv));
                    reduced[i] = col;
                }
                None => out.essential.push(i),
            }
        }
    }
    out
}
