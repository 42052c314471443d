//! Small enumeration helpers shared by the species constructions.

/// All set partitions of `elements`, each block sorted and blocks ordered by
/// their minimal element.
pub fn set_partitions(elements: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn rec(rest: &[usize], blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        let Some((&first, tail)) = rest.split_first() else {
            out.push(blocks.clone());
            return;
        };
        for i in 0..blocks.len() {
            blocks[i].push(first);
            rec(tail, blocks, out);
            blocks[i].pop();
        }
        blocks.push(vec![first]);
        rec(tail, blocks, out);
        blocks.pop();
    }
    let mut sorted = elements.to_vec();
    sorted.sort_unstable();
    rec(&sorted, &mut blocks, &mut out);
    out
}

/// All ordered set partitions (ballots) of `elements`.
pub fn ordered_set_partitions(elements: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fn rec(rest: &[usize], prefix: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        let m = rest.len();
        for mask in 1u32..(1 << m) {
            let (block, remaining): (Vec<usize>, Vec<usize>) = {
                let mut b = Vec::new();
                let mut r = Vec::new();
                for (i, &u) in rest.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        b.push(u);
                    } else {
                        r.push(u);
                    }
                }
                (b, r)
            };
            prefix.push(block);
            rec(&remaining, prefix, out);
            prefix.pop();
        }
    }
    let mut sorted = elements.to_vec();
    sorted.sort_unstable();
    rec(&sorted, &mut prefix, &mut out);
    out
}

/// Cartesian product of a list of choice lists.
pub fn cartesian_product<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for options in choices {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for o in options {
                let mut v = prefix.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
