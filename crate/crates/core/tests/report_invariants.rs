use proptest::prelude::*;

use bovdyn::bov::{superlevel_mask, GridMask};
use bovdyn::dynamics::classify_grid;
use bovdyn::geom::{Raster, Rect};
use bovdyn::report::json::emit_json;
use bovdyn::report::pnm::{emit_pbm, emit_ppm_grid, read_header};
use bovdyn::report::{Check, Status, VerificationReport};
use bovdyn::{MapSpec, Poly};

fn status(k: u8) -> Status {
    match k % 4 {
        0 => Status::Pass,
        1 => Status::Fail,
        2 => Status::Inconclusive,
        _ => Status::Skipped,
    }
}

fn report(rows: &[(String, u8, f64)]) -> VerificationReport {
    let mut r = VerificationReport::new("fixture");
    r.extend(rows.iter().map(|(id, s, res)| {
        Check::new(id.clone(), "anchor", status(*s)).with_residual(*res).with_details(format!("r={res}"))
    }));
    r
}

proptest! {
    #[test]
    fn json_is_byte_stable(rows in prop::collection::vec(("[a-z._@=0-9]{1,12}", any::<u8>(), prop::num::f64::ANY), 0..12)) {
        let a = emit_json(&report(&rows));
        let b = emit_json(&report(&rows));
        prop_assert_eq!(&a, &b);
        prop_assert!(a.ends_with(b"\n"));
        let parsed: serde_json::Value = serde_json::from_slice(&a).unwrap();
        prop_assert_eq!(parsed["checks"].as_array().unwrap().len(), rows.len());
    }

    #[test]
    fn pbm_header_matches_raster(nx in 8usize..70, ny in 8usize..70, r in 0.5..20.0f64) {
        let m = MapSpec::exp_plus(Poly::identity()).unwrap();
        let mask = superlevel_mask(&m, r, &Rect::square(10.0), nx, ny).unwrap();
        let bytes = emit_pbm(&mask).unwrap();
        let h = read_header(&bytes).unwrap();
        prop_assert_eq!((h.width, h.height), (nx, ny));
        prop_assert_eq!(bytes.len() - h.data_offset, nx.div_ceil(8) * ny);
    }

    #[test]
    fn ppm_header_matches_raster(nx in 1usize..40, ny in 1usize..40) {
        let g = classify_grid(&MapSpec::f_lambda(1.0).unwrap(), &Rect::new(-4.0, 2.0, -3.0, 3.0), nx, ny, 256).unwrap();
        let bytes = emit_ppm_grid(&g).unwrap();
        let h = read_header(&bytes).unwrap();
        prop_assert_eq!((h.width, h.height, h.maxval), (nx, ny, 255));
        prop_assert_eq!(bytes.len() - h.data_offset, 3 * nx * ny);
    }
}

#[test]
fn digest_and_timestamp_are_fixed() {
    let a = emit_json(&report(&[("x".into(), 0, 1.0)]));
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("\"suite_name\": \"fixture\""));
    assert!(text.contains("\"status\": \"pass\""));
    let mask = GridMask::from_fn(Raster::new(Rect::square(1.0), 9, 8), |i, _| i == 0).unwrap();
    let mut want = b"P4\n9 8\n".to_vec();
    want.extend([0x80u8, 0x00].repeat(8));
    assert_eq!(emit_pbm(&mask).unwrap(), want);
}
