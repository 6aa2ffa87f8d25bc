//! Agreement with Martin Porter's published voc.txt / output.txt pair.

use eventlens::textproc::porter_stem;

const VOC: &str = include_str!("data/porter_voc.txt");
const OUTPUT: &str = include_str!("data/porter_output.txt");

#[test]
fn reference_vocabulary_full_agreement() {
    let inputs: Vec<&str> = VOC.lines().collect();
    let expected: Vec<&str> = OUTPUT.lines().collect();
    assert_eq!(inputs.len(), 23_531);
    assert_eq!(inputs.len(), expected.len());
    let mismatches: Vec<_> = inputs
        .iter()
        .zip(&expected)
        .filter(|(w, s)| porter_stem(w) != **s)
        .map(|(w, s)| format!("{w}: got {}, want {s}", porter_stem(w)))
        .collect();
    assert!(mismatches.is_empty(), "{} mismatches, first: {:?}", mismatches.len(), &mismatches[..mismatches.len().min(10)]);
}

// Porter's algorithm is not idempotent: a second pass strips again from
// stems like "abus" (abuse) or "accident" (accidental). Pin how often that
// happens on the reference list so a change in behaviour is noticed.
#[test]
fn second_pass_changes_a_known_subset() {
    let changed: Vec<&str> = VOC
        .lines()
        .filter(|w| {
            let once = porter_stem(w);
            porter_stem(&once) != once
        })
        .collect();
    assert_eq!(changed.len(), 785);
    assert!(changed.contains(&"abuse"));
    assert!(changed.contains(&"accidental"));
    assert_eq!(porter_stem(&porter_stem("arguments")), "argument");
}
