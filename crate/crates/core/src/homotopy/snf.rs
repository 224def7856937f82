//! Integer Smith normal form, diagonal only.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

/// Nonzero invariant factors of an integer matrix (absolute values, in
/// divisibility order). Dense elimination with checked arithmetic.
pub fn invariant_factors(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> Result<Vec<i64>, Overflow> {
    let mut a = vec![vec![0i64; cols]; rows];
    for &(r, c, v) in entries {
        a[r][c] = a[r][c].checked_add(v).ok_or(Overflow)?;
    }
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize, i64)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &v) in row.iter().enumerate().skip(t) {
                if v != 0 && best.map_or(true, |b| v.abs() < b.2) {
                    best = Some((i, j, v.abs()));
                    if v.abs() == 1 {
                        break;
                    }
                }
            }
            if best.is_some_and(|b| b.2 == 1) {
                break;
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            // clear column t
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let q = a[i][t] / a[t][t];
                    for j in t..cols {
                        let sub = q.checked_mul(a[t][j]).ok_or(Overflow)?;
                        a[i][j] = a[i][j].checked_sub(sub).ok_or(Overflow)?;
                    }
                    if a[i][t] != 0 {
                        dirty = true;
                    }
                }
            }
            // clear row t
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let q = a[t][j] / a[t][t];
                    for row in a.iter_mut().skip(t) {
                        let sub = q.checked_mul(row[t]).ok_or(Overflow)?;
                        row[j] = row[j].checked_sub(sub).ok_or(Overflow)?;
                    }
                    if a[t][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // move the smallest remaining entry of row/column t to the pivot
                let mut best = (t, t, a[t][t].abs());
                for i in t + 1..rows {
                    if a[i][t] != 0 && a[i][t].abs() < best.2 {
                        best = (i, t, a[i][t].abs());
                    }
                }
                for j in t + 1..cols {
                    if a[t][j] != 0 && a[t][j].abs() < best.2 {
                        best = (t, j, a[t][j].abs());
                    }
                }
                a.swap(t, best.0);
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
                continue;
            }
            // divisibility of the trailing block
            let p = a[t][t];
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] = a[t][j].checked_add(a[i][j]).ok_or(Overflow)?;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    Ok(diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_of_small_matrices() {
        // [[2, 4], [6, 8]] ~ diag(2, 4)
        let e = [(0, 0, 2), (0, 1, 4), (1, 0, 6), (1, 1, 8)];
        assert_eq!(invariant_factors(2, 2, &e).unwrap(), vec![2, 4]);
        // [[2, 0], [0, 3]] ~ diag(1, 6)
        let e = [(0, 0, 2), (1, 1, 3)];
        assert_eq!(invariant_factors(2, 2, &e).unwrap(), vec![1, 6]);
        assert_eq!(invariant_factors(3, 2, &[]).unwrap(), Vec::<i64>::new());
    }
}
