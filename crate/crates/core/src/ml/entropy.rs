//! Binary-class entropy helpers (bits).

pub fn entropy(counts: [usize; 2]) -> f64 {
    let n = counts[0] + counts[1];
    if n == 0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n as f64;
            -p * p.log2()
        })
        .sum()
}

/// Entropy of the partition sizes themselves (C4.5 split information).
pub fn split_info(sizes: &[usize]) -> f64 {
    let n: usize = sizes.iter().sum();
    if n == 0 {
        return 0.0;
    }
    sizes
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| {
            let p = s as f64 / n as f64;
            -p * p.log2()
        })
        .sum()
}

/// Information gain of splitting `parent` into `parts`, clamped at 0.
pub fn information_gain(parent: [usize; 2], parts: &[[usize; 2]]) -> f64 {
    let n = (parent[0] + parent[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let children: f64 = parts
        .iter()
        .map(|c| (c[0] + c[1]) as f64 / n * entropy(*c))
        .sum();
    (entropy(parent) - children).max(0.0)
}
