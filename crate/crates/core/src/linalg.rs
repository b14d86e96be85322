//! Sparse linear algebra over the two-element field.

/// Symmetric difference of two sorted index lists, i.e. their sum over F2.
pub fn xor_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// A matrix over F2 stored column by column; each column is the sorted list
/// of rows holding a one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: Vec<Vec<usize>>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols: vec![Vec::new(); cols],
        }
    }

    /// Builds a matrix from column entry lists. Repeated entries cancel.
    pub fn from_columns(rows: usize, cols: Vec<Vec<usize>>) -> Self {
        let cols = cols
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                let mut out: Vec<usize> = Vec::with_capacity(c.len());
                for r in c {
                    assert!(r < rows, "row {r} out of range {rows}");
                    if out.last() == Some(&r) {
                        out.pop();
                    } else {
                        out.push(r);
                    }
                }
                out
            })
            .collect();
        Self { rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[usize] {
        &self.cols[j]
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// Toggles entry (i, j).
    pub fn flip(&mut self, i: usize, j: usize) {
        let col = &mut self.cols[j];
        match col.binary_search(&i) {
            Ok(pos) => {
                col.remove(pos);
            }
            Err(pos) => col.insert(pos, i),
        }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols(), rhs.rows, "inner dimensions differ");
        let cols = rhs
            .cols
            .iter()
            .map(|c| {
                c.iter()
                    .fold(Vec::new(), |acc, &k| xor_sorted(&acc, &self.cols[k]))
            })
            .collect();
        F2Matrix {
            rows: self.rows,
            cols,
        }
    }

    pub fn add(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!((self.rows, self.cols()), (rhs.rows, rhs.cols()));
        F2Matrix {
            rows: self.rows,
            cols: self
                .cols
                .iter()
                .zip(&rhs.cols)
                .map(|(a, b)| xor_sorted(a, b))
                .collect(),
        }
    }

    /// Rank by column reduction on the largest row index.
    pub fn rank(&self) -> usize {
        let mut pivot_owner: Vec<Option<Vec<usize>>> = vec![None; self.rows];
        let mut rank = 0;
        for c in &self.cols {
            let mut col = c.clone();
            while let Some(&low) = col.last() {
                match &pivot_owner[low] {
                    Some(other) => col = xor_sorted(&col, other),
                    None => {
                        pivot_owner[low] = Some(col);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        rank
    }
}
