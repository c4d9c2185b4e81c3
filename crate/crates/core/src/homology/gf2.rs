//! Dense bitset linear algebra over F2.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow { words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_indices(len: usize, idx: &[usize]) -> Self {
        let mut r = BitRow::zeros(len);
        for &i in idx {
            r.flip(i);
        }
        r
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn lowest(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Lowest set bit at or above `start`.
    fn lowest_from(&self, start: usize) -> Option<usize> {
        let mut wi = start / 64;
        if wi >= self.words.len() {
            return None;
        }
        let first = self.words[wi] & (!0u64 << (start % 64));
        if first != 0 {
            return Some(wi * 64 + first.trailing_zeros() as usize);
        }
        wi += 1;
        while wi < self.words.len() {
            if self.words[wi] != 0 {
                return Some(wi * 64 + self.words[wi].trailing_zeros() as usize);
            }
            wi += 1;
        }
        None
    }

    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut at = 0;
        while let Some(i) = self.lowest_from(at) {
            out.push(i);
            at = i + 1;
        }
        out
    }
}

/// Incremental echelon basis keyed by lowest set bit.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: std::collections::HashMap<usize, BitRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `row` against the basis; returns the remainder.
    pub fn reduce(&self, mut row: BitRow) -> BitRow {
        let mut at = 0;
        while let Some(p) = row.lowest_from(at) {
            match self.pivots.get(&p) {
                Some(b) => row.xor_assign(b),
                None => at = p + 1,
            }
        }
        row
    }

    /// Insert a row; returns whether it enlarged the span.
    pub fn insert(&mut self, row: BitRow) -> bool {
        let r = self.reduce_to_lead(row);
        match r.lowest() {
            Some(p) => {
                self.pivots.insert(p, r);
                true
            }
            None => false,
        }
    }

    fn reduce_to_lead(&self, mut row: BitRow) -> BitRow {
        while let Some(p) = row.lowest() {
            match self.pivots.get(&p) {
                Some(b) => row.xor_assign(b),
                None => break,
            }
        }
        row
    }
}

/// Rank of a set of rows.
pub fn rank(rows: impl IntoIterator<Item = BitRow>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Kernel of the map sending basis vector `i` to `images[i]` (a set of
/// target indices); returns the kernel basis as index sets in the source and
/// the rank of the map.
pub fn kernel(images: &[Vec<usize>], target_len: usize) -> (Vec<Vec<usize>>, usize) {
    let src = images.len();
    let width = target_len + src;
    let mut pivots: std::collections::HashMap<usize, BitRow> = std::collections::HashMap::new();
    let mut ker = Vec::new();
    for (i, img) in images.iter().enumerate() {
        let mut row = BitRow::from_indices(width, img);
        row.flip(target_len + i);
        loop {
            match row.lowest() {
                Some(p) if p < target_len => match pivots.get(&p) {
                    Some(b) => row.xor_assign(b),
                    None => {
                        pivots.insert(p, row);
                        break;
                    }
                },
                _ => {
                    ker.push(row.ones().into_iter().map(|j| j - target_len).collect());
                    break;
                }
            }
        }
    }
    let r = pivots.len();
    (ker, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_rank_of_small_map() {
        // e0 -> {0,1}, e1 -> {1,2}, e2 -> {0,2}: rank 2, kernel e0+e1+e2
        let (ker, r) = kernel(&[vec![0, 1], vec![1, 2], vec![0, 2]], 3);
        assert_eq!(r, 2);
        assert_eq!(ker, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn rank_across_word_boundary() {
        let rows = vec![BitRow::from_indices(130, &[3, 129]), BitRow::from_indices(130, &[129]), BitRow::from_indices(130, &[3])];
        assert_eq!(rank(rows), 2);
    }
}
