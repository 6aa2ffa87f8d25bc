/// Jaro similarity in `[0, 1]`, computed over Unicode scalar values.
///
/// Characters match when equal and at most `max(|a|,|b|)/2 - 1` positions
/// apart; transpositions are half the matched characters that appear in a
/// different order. Two empty strings are identical (1.0).
pub fn jaro(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);

    let mut b_used = vec![false; b.len()];
    let mut a_matched = Vec::with_capacity(a.len());
    for (i, &ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_used[j] && b[j] == ca {
                b_used[j] = true;
                a_matched.push(ca);
                break;
            }
        }
    }
    let m = a_matched.len();
    if m == 0 {
        return 0.0;
    }
    let b_matched = b.iter().zip(&b_used).filter(|(_, &u)| u).map(|(c, _)| *c);
    let half_transpositions = a_matched
        .iter()
        .zip(b_matched)
        .filter(|(x, y)| **x != *y)
        .count();
    let m = m as f64;
    let t = half_transpositions as f64 / 2.0;
    (m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn martha() {
        assert!((jaro("MARTHA", "MARHTA") - 0.944_444_444_444_444_4).abs() < 1e-6);
        // m = 6, t = 1 → (1 + 1 + 5/6) / 3
        assert!((jaro("MARTHA", "MARHTA") - (2.0 + 5.0 / 6.0) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn textbook_pairs() {
        assert!((jaro("DIXON", "DICKSONX") - 0.766_666_666_666_666_7).abs() < 1e-12);
        assert!((jaro("DWAYNE", "DUANE") - 0.822_222_222_222_222_2).abs() < 1e-12);
        assert!((jaro("jellyfish", "smellyfish") - 0.896_296_296_296_296_3).abs() < 1e-12);
    }

    #[test]
    fn edges() {
        assert_eq!(jaro("", ""), 1.0);
        assert_eq!(jaro("abc", ""), 0.0);
        assert_eq!(jaro("abc", "xyz"), 0.0);
        assert_eq!(jaro("same", "same"), 1.0);
        assert_eq!(jaro("a", "a"), 1.0);
        // window 0 for length <= 3: only aligned chars match
        assert_eq!(jaro("ab", "ba"), 0.0);
    }
}
