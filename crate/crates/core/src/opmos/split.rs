//! Neighbor-granular partition of a regular bag across workers.

/// A contiguous run of `(label, neighbor)` pairs in global neighbor order.
/// `start` is inclusive and `end` exclusive; each is a `(bag index, neighbor
/// offset)` position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkerSlice {
    pub s_l: usize,
    pub s_nbr: usize,
    pub e_l: usize,
    pub e_nbr: usize,
}

impl WorkerSlice {
    /// Every `(bag index, neighbor offset)` pair covered by the slice.
    pub fn pairs<'a>(&self, degrees: &'a [usize]) -> impl Iterator<Item = (usize, usize)> + 'a {
        let s = *self;
        (s.s_l..degrees.len().min(s.e_l + 1)).flat_map(move |l| {
            let lo = if l == s.s_l { s.s_nbr } else { 0 };
            let hi = if l == s.e_l { s.e_nbr } else { degrees[l] };
            (lo..hi.max(lo)).map(move |n| (l, n))
        })
    }

    pub fn is_empty(&self) -> bool {
        (self.s_l, self.s_nbr) >= (self.e_l, self.e_nbr)
    }
}

/// Position of global neighbor index `pos` given prefix sums of out-degrees.
fn locate(prefix: &[usize], pos: usize) -> (usize, usize) {
    let total = *prefix.last().unwrap();
    if pos >= total {
        return (prefix.len() - 1, 0);
    }
    // last label whose first neighbor index is <= pos; skips zero-degree labels
    let l = prefix.partition_point(|&p| p <= pos) - 1;
    (l, pos - prefix[l])
}

/// Worker `tid` of `num_workers` owns global neighbor indices
/// `[floor(tid * T / W), floor((tid + 1) * T / W))` where `T` is the total
/// out-degree of the bag.
pub fn nbr_splitting(degrees: &[usize], tid: usize, num_workers: usize) -> WorkerSlice {
    assert!(num_workers >= 1 && tid < num_workers);
    let mut prefix = Vec::with_capacity(degrees.len() + 1);
    prefix.push(0usize);
    for &d in degrees {
        prefix.push(prefix.last().unwrap() + d);
    }
    let total = *prefix.last().unwrap();
    let lo = tid * total / num_workers;
    let hi = if tid + 1 == num_workers { total } else { (tid + 1) * total / num_workers };
    let (s_l, s_nbr) = locate(&prefix, lo);
    let (e_l, e_nbr) = locate(&prefix, hi);
    WorkerSlice { s_l, s_nbr, e_l, e_nbr }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn covered(degrees: &[usize], workers: usize) -> Vec<Vec<(usize, usize)>> {
        (0..workers).map(|t| nbr_splitting(degrees, t, workers).pairs(degrees).collect()).collect()
    }

    #[test]
    fn worked_example() {
        let degrees = [4, 2, 6];
        let s = covered(&degrees, 3);
        assert_eq!(s[0], vec![(0, 0), (0, 1), (0, 2), (0, 3)]);
        assert_eq!(s[1], vec![(1, 0), (1, 1), (2, 0), (2, 1)]);
        assert_eq!(s[2], vec![(2, 2), (2, 3), (2, 4), (2, 5)]);
        assert_eq!(nbr_splitting(&degrees, 1, 3), WorkerSlice { s_l: 1, s_nbr: 0, e_l: 2, e_nbr: 2 });
    }

    #[test]
    fn single_worker_takes_everything() {
        let degrees = [3, 0, 1];
        let s = covered(&degrees, 1);
        assert_eq!(s[0], vec![(0, 0), (0, 1), (0, 2), (2, 0)]);
    }

    #[test]
    fn empty_bag_and_more_workers_than_neighbors() {
        assert!(nbr_splitting(&[], 0, 4).is_empty());
        let s = covered(&[1, 1], 4);
        assert_eq!(s.iter().map(Vec::len).sum::<usize>(), 2);
        assert_eq!(s.iter().filter(|v| v.is_empty()).count(), 2);
    }

    #[test]
    fn exhaustive_partition() {
        // every degree list of length <= 4 over 0..=3, every worker count up to 6
        let lists = (0..=4u32).flat_map(|len| {
            (0..4usize.pow(len)).map(move |code| (0..len).map(|i| code / 4usize.pow(i) % 4).collect::<Vec<_>>())
        });
        for degrees in &lists.collect::<Vec<_>>() {
            let expected: Vec<(usize, usize)> =
                degrees.iter().enumerate().flat_map(|(l, &d)| (0..d).map(move |n| (l, n))).collect();
            for w in 1..=6 {
                let got: Vec<_> = covered(degrees, w).concat();
                assert_eq!(got, expected, "degrees {degrees:?}, workers {w}");
            }
        }
    }

    proptest! {
        #[test]
        fn slices_partition_pairs(degrees in prop::collection::vec(0usize..12, 0..=32), workers in 1usize..=16) {
            let expected: Vec<(usize, usize)> =
                degrees.iter().enumerate().flat_map(|(l, &d)| (0..d).map(move |n| (l, n))).collect();
            let slices = covered(&degrees, workers);
            let total: usize = degrees.iter().sum();
            for s in &slices {
                // floor boundaries: sizes differ by at most one
                prop_assert!(s.len() + 1 >= total / workers && s.len() <= total / workers + 1);
            }
            prop_assert_eq!(slices.concat(), expected);
        }
    }
}
