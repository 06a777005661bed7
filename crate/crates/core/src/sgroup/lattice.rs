//! Index of an integer column lattice in Z^rows, by column reduction.

/// `|Z^rows / L|` where `L` is generated by the columns.  Returns `None`
/// when the lattice has infinite index (rank below `rows`).
pub fn lattice_index(rows: usize, mut cols: Vec<Vec<i128>>) -> Option<u128> {
    debug_assert!(cols.iter().all(|c| c.len() == rows));
    let mut used = vec![false; cols.len()];
    let mut index: u128 = 1;
    for r in 0..rows {
        // Euclid on the columns until a single one is nonzero in row r.
        loop {
            let mut nz: Vec<usize> =
                (0..cols.len()).filter(|&c| !used[c] && cols[c][r] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by_key(|&c| cols[c][r].unsigned_abs());
            let (small, big) = (nz[0], nz[1]);
            let q = cols[big][r] / cols[small][r];
            for rr in r..rows {
                let delta = q * cols[small][rr];
                cols[big][rr] -= delta;
            }
        }
        let pivot = (0..cols.len()).find(|&c| !used[c] && cols[c][r] != 0)?;
        index = index.checked_mul(cols[pivot][r].unsigned_abs())?;
        used[pivot] = true;
    }
    Some(index)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_lattice() {
        let cols = vec![vec![2, 0], vec![0, 3]];
        assert_eq!(lattice_index(2, cols), Some(6));
    }

    #[test]
    fn redundant_columns_do_not_change_the_index() {
        let cols = vec![vec![2, 0], vec![0, 3], vec![2, 3], vec![4, 6]];
        assert_eq!(lattice_index(2, cols), Some(6));
    }

    #[test]
    fn rank_deficiency_is_reported() {
        let cols = vec![vec![1, 1]];
        assert_eq!(lattice_index(2, cols), None);
    }

    #[test]
    fn empty_space() {
        assert_eq!(lattice_index(0, vec![]), Some(1));
    }

    #[test]
    fn unimodular_columns() {
        let cols = vec![vec![1, 0, 0], vec![5, 1, 0], vec![7, 9, 1]];
        assert_eq!(lattice_index(3, cols), Some(1));
    }
}
