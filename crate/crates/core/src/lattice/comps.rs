//! Component bookkeeping for (p,q)-forms.
//!
//! A basis (p,q)-form is `dz_{i1}∧…∧dz_{ip}∧dz̄_{j1}∧…∧dz̄_{jq}` with both
//! index groups strictly ascending; antisymmetry is implicit in the index
//! sets. A component is stored as a pair of bitmasks `(holo, anti)` over the
//! `n` complex directions. All wedge signs are computed by counting
//! transpositions of the letter words rather than by closed-form parity
//! expressions.

/// One basis component of a (p,q)-form: bitmask of dz indices, bitmask of dz̄
/// indices.
pub type Comp = (u8, u8);

/// `C(n, k)` for the small range used here.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Canonically ordered component list of the (p,q)-forms in complex
/// dimension `n` (lexicographic in `(holo, anti)` masks).
pub fn comp_table(n: usize, p: usize, q: usize) -> Vec<Comp> {
    let mut out = Vec::with_capacity(binomial(n, p) * binomial(n, q));
    for holo in 0u8..(1 << n) {
        if holo.count_ones() as usize != p {
            continue;
        }
        for anti in 0u8..(1 << n) {
            if anti.count_ones() as usize != q {
                continue;
            }
            out.push((holo, anti));
        }
    }
    out
}

pub fn comp_index(table: &[Comp], c: Comp) -> usize {
    table.iter().position(|&x| x == c).expect("component not in table")
}

/// Letters of a basis form in canonical order: unbarred ascending, then
/// barred ascending. A letter is `(barred, direction)`.
fn letters(c: Comp, n: usize) -> Vec<(bool, usize)> {
    let mut w = Vec::new();
    for i in 0..n {
        if c.0 >> i & 1 == 1 {
            w.push((false, i));
        }
    }
    for i in 0..n {
        if c.1 >> i & 1 == 1 {
            w.push((true, i));
        }
    }
    w
}

/// Wedge of two basis forms: `None` on repeated letters, otherwise the
/// canonical component together with the sign from sorting the concatenated
/// letter word.
pub fn wedge_basis(a: Comp, b: Comp, n: usize) -> Option<(Comp, f64)> {
    if a.0 & b.0 != 0 || a.1 & b.1 != 0 {
        return None;
    }
    let mut word = letters(a, n);
    word.extend(letters(b, n));
    // bubble sort counting transpositions; key orders unbarred before barred
    let mut sign = 1.0;
    let key = |l: &(bool, usize)| (l.0 as usize, l.1);
    let m = word.len();
    for i in 0..m {
        for j in 0..m - 1 - i.min(m - 1) {
            if key(&word[j]) > key(&word[j + 1]) {
                word.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    Some(((a.0 | b.0, a.1 | b.1), sign))
}

/// Pointwise Hermitian weight of any basis (p,q)-component in the frame with
/// `|dz_i|² = 2`: distinct orthogonal covectors wedge to norm² `2^{p+q}`.
pub fn frame_weight(p: usize, q: usize) -> f64 {
    2f64.powi((p + q) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_sizes_match_binomials() {
        assert_eq!(comp_table(1, 0, 0).len(), 1);
        assert_eq!(comp_table(1, 1, 1).len(), 1);
        assert_eq!(comp_table(2, 1, 1).len(), 4);
        assert_eq!(comp_table(2, 2, 0).len(), 1);
        assert_eq!(comp_table(2, 1, 2).len(), 2);
        assert_eq!(comp_table(2, 2, 2).len(), 1);
    }

    #[test]
    fn wedge_signs_by_hand() {
        // dz̄_1 ∧ dz_1 = -dz_1∧dz̄_1
        let (c, s) = wedge_basis((0, 1), (1, 0), 1).unwrap();
        assert_eq!(c, (1, 1));
        assert_eq!(s, -1.0);
        // dz_1 ∧ dz̄_1 canonical
        let (c, s) = wedge_basis((1, 0), (0, 1), 1).unwrap();
        assert_eq!(c, (1, 1));
        assert_eq!(s, 1.0);
        // dz_2 ∧ dz_1 = -dz_1∧dz_2 in n=2
        let (c, s) = wedge_basis((2, 0), (1, 0), 2).unwrap();
        assert_eq!(c, (3, 0));
        assert_eq!(s, -1.0);
        // (dz_1∧dz̄_1) ∧ (dz_2∧dz̄_2): one transposition moves dz_2 across
        // dz̄_1 into canonical order, so the sign is -1.
        let (c, s) = wedge_basis((1, 1), (2, 2), 2).unwrap();
        assert_eq!(c, (3, 3));
        assert_eq!(s, -1.0);
        // repeated letter dies
        assert!(wedge_basis((1, 0), (1, 0), 2).is_none());
    }

    #[test]
    fn wedge_is_graded_anticommutative() {
        // α∧β = (-1)^{deg α · deg β} β∧α on basis elements
        let n = 2;
        for p1 in 0..=n {
            for q1 in 0..=n {
                for p2 in 0..=n {
                    for q2 in 0..=n {
                        for &a in &comp_table(n, p1, q1) {
                            for &b in &comp_table(n, p2, q2) {
                                let ab = wedge_basis(a, b, n);
                                let ba = wedge_basis(b, a, n);
                                match (ab, ba) {
                                    (None, None) => {}
                                    (Some((ca, sa)), Some((cb, sb))) => {
                                        assert_eq!(ca, cb);
                                        let parity =
                                            ((p1 + q1) * (p2 + q2)) % 2 == 1;
                                        let expect = if parity { -sb } else { sb };
                                        assert_eq!(sa, expect);
                                    }
                                    _ => panic!("wedge asymmetry in vanishing"),
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
