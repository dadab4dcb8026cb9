use gsig_core::class_number::{
    h_minus_bernoulli, h_minus_maillet, is_prime, relative_class_number,
};
use gsig_core::ErrorKind;
use num_bigint::BigInt;

// Published table of relative class numbers of Q(zeta_p).
const KNOWN: &[(u64, &str)] = &[
    (23, "3"),
    (29, "8"),
    (31, "9"),
    (37, "37"),
    (41, "121"),
    (43, "211"),
    (47, "695"),
    (53, "4889"),
    (59, "41241"),
    (61, "76301"),
    (67, "853513"),
    (71, "3882809"),
    (73, "11957417"),
    (79, "100146415"),
    (83, "838216959"),
    (89, "13379363737"),
    (97, "411322824001"),
];

#[test]
fn both_methods_agree_up_to_100() {
    for p in (3..=100).filter(|&p| is_prime(p)) {
        let m = h_minus_maillet(p).unwrap();
        let b = h_minus_bernoulli(p).unwrap();
        assert_eq!(m, b, "p = {p}");
        let expect = KNOWN
            .iter()
            .find(|k| k.0 == p)
            .map_or(BigInt::from(1), |k| k.1.parse().unwrap());
        assert_eq!(m, expect, "p = {p}");
    }
}

#[test]
fn report_round_trips_through_json() {
    let r = relative_class_number(59).unwrap();
    assert!(r.methods_agree);
    let j = serde_json::to_string(&r).unwrap();
    assert!(j.contains("\"41241\""));
    assert_eq!(
        serde_json::from_str::<gsig_core::class_number::ClassNumberReport>(&j).unwrap(),
        r
    );
}

#[test]
fn out_of_range_inputs() {
    for p in [2, 9, 1, 211] {
        assert_eq!(
            h_minus_maillet(p).unwrap_err().kind(),
            ErrorKind::Cap,
            "p = {p}"
        );
    }
}
