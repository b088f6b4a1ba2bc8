use keytitle::textproc::stem;

const VOC: &str = include_str!("data/porter/voc.txt");
const OUTPUT: &str = include_str!("data/porter/output.txt");

#[test]
fn reference_vocabulary() {
    let mut mismatches = Vec::new();
    let mut n = 0;
    for (word, expected) in VOC.lines().zip(OUTPUT.lines()) {
        n += 1;
        let got = stem(word);
        if got != expected {
            mismatches.push(format!("{word}: got {got}, want {expected}"));
        }
    }
    assert_eq!(n, 23531);
    assert!(
        mismatches.is_empty(),
        "{} mismatches, first: {:?}",
        mismatches.len(),
        &mismatches[..mismatches.len().min(20)]
    );
}

// Porter is not idempotent in general: a stem can itself carry a strippable
// suffix (abuse -> abus -> abu). The count is pinned so any change shows up.
#[test]
fn stemming_idempotence_on_the_vocabulary() {
    let not_idempotent: Vec<&str> = VOC
        .lines()
        .filter(|w| {
            let once = stem(w);
            stem(&once) != once
        })
        .collect();
    assert_eq!(not_idempotent.len(), 785);
    assert!(not_idempotent.contains(&"abuse"));

    for w in ["running", "studies", "title", "keywords", "extraction", "semiautomatic"] {
        let once = stem(w);
        assert_eq!(stem(&once), once, "{w}");
    }
}
