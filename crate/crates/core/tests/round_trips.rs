use std::sync::Arc;

use gsig_core::group::{parse_group, FiniteGroup, GroupJson};
use gsig_core::orbit::{bg_structure, format_data, parse_data, parse_data_json, DataJson};
use gsig_core::signature::{
    cp_report, index_report, RelationVariant, SignatureContext, SignatureReport,
};
use gsig_core::verify::CORPUS;

fn arc(spec: &str) -> Arc<FiniteGroup> {
    Arc::new(parse_group(spec).unwrap())
}

#[test]
fn groups_round_trip_through_cayley_json() {
    for spec in CORPUS {
        let g = arc(spec);
        let j: GroupJson =
            serde_json::from_str(&serde_json::to_string(&g.to_json()).unwrap()).unwrap();
        let h = FiniteGroup::from_json("copy".into(), &j).unwrap();
        assert!(g.same_as(&h), "{spec}");
    }
}

#[test]
fn basis_data_round_trips_through_text_and_json() {
    for spec in CORPUS {
        let g = arc(spec);
        for d in &bg_structure(&g).unwrap().basis {
            assert_eq!(&parse_data(&g, &format_data(d)).unwrap(), d, "{spec}");
            let j = serde_json::to_string(&DataJson::from_data(spec, d)).unwrap();
            let back = parse_data_json(&j).unwrap();
            assert_eq!(back.mult(), d.mult(), "{spec}");
        }
    }
}

#[test]
fn signature_reports_round_trip_and_repeat() {
    for spec in ["cyclic 7", "abelian 2 4", "perm 3; (1 2 3); (1 2)"] {
        let g = arc(spec);
        let ctx = SignatureContext::for_group(&g, RelationVariant::E).unwrap();
        let r = index_report(&ctx).unwrap();
        let j = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<SignatureReport>(&j).unwrap(), r);
        assert_eq!(
            serde_json::to_string(&index_report(&ctx).unwrap()).unwrap(),
            j
        );
    }
    let r = cp_report(11).unwrap();
    let back: SignatureReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.to_text(), r.to_text());
}
