//! Basis monomials stored as bitmasks over coordinate indices.

pub type Blade = u32;

pub fn grade(b: Blade) -> usize {
    b.count_ones() as usize
}

pub fn indices(b: Blade) -> Vec<usize> {
    (0..32).filter(|i| b & (1 << i) != 0).collect()
}

/// Sign and blade of e_a ∧ e_b, or `None` when they share an index.
pub fn wedge_blades(a: Blade, b: Blade) -> Option<(i32, Blade)> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some((if swaps.is_multiple_of(2) { 1 } else { -1 }, a | b))
}

/// Sign and blade of e_{i0} ∧ e_{i1} ∧ … for an arbitrary index list.
pub fn blade_of(idx: &[usize]) -> Option<(i32, Blade)> {
    let mut sign = 1;
    let mut acc: Blade = 0;
    for &i in idx {
        let (s, b) = wedge_blades(acc, 1 << i)?;
        sign *= s;
        acc = b;
    }
    Some((sign, acc))
}

/// All blades of grade `k` in dimension `n`, ordered lexicographically by index list.
pub fn blades_of_grade(n: usize, k: usize) -> Vec<Blade> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0, |acc, &i| acc | (1 << i)));
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grade_counts() {
        assert_eq!(blades_of_grade(7, 3).len(), 35);
        assert_eq!(blades_of_grade(8, 4).len(), 70);
        assert_eq!(blades_of_grade(4, 0), vec![0]);
        assert_eq!(blades_of_grade(3, 3), vec![0b111]);
        assert_eq!(blades_of_grade(3, 1), vec![1, 2, 4]);
    }

    #[test]
    fn signs() {
        assert_eq!(wedge_blades(0b10, 0b01), Some((-1, 0b11)));
        assert_eq!(blade_of(&[2, 0, 1]), Some((1, 0b111)));
        assert_eq!(blade_of(&[1, 1]), None);
    }
}
