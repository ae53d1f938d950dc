use tcline::quartic::{all_labels, expected_stabilizer, representative, QuarticForm};
use tcline::make_field;

#[test]
fn representatives_classify_to_their_label() {
    for p in [5u64, 7, 11, 13, 17, 19, 23] {
        let f = make_field(p, 1).unwrap();
        let q = f.q();
        let mut total = 0;
        let mut failures = Vec::new();
        for label in all_labels(&f).unwrap() {
            let rep = representative(&f, label).unwrap();
            let c = rep.classify().unwrap();
            if c.label != label {
                failures.push(format!("q={q} {label}: got {} ({})", c.label, rep));
            }
            if let Some(s) = c.stabilizer {
                if expected_stabilizer(c.kind, c.label, q) != Some(s) {
                    failures.push(format!("q={q} {label}: stabilizer {s}"));
                }
            }
            total += c.orbit_size;
        }
        assert!(failures.is_empty(), "{failures:#?}");
        assert_eq!(total, QuarticForm::count(q), "q={q}");
    }
}
