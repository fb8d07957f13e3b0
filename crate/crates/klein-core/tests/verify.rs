use klein_core::model::line_through_points;
use klein_core::transforms::perp_at_point;
use klein_core::verify::{
    flag_transport, run_axiom_suite, run_metric_plane_suite, run_oval_sample_suite, run_theorem_suite, Mode,
    Report, Sabotage, Suite, TrialConfig,
};
use klein_core::Point;

fn assert_clean(r: &Report) {
    for c in &r.checks {
        assert_eq!(c.failures, 0, "{} failed: {:?}", c.name, c.witnesses);
    }
    assert!(r.overall);
}

#[test]
fn axioms_hold() {
    let r = run_axiom_suite(&TrialConfig::new(7, 8));
    assert_clean(&r);
    assert_eq!(r.check("A4").unwrap().mode, Mode::Sampled);
    assert_eq!(r.check("A1").unwrap().mode, Mode::Exact);
}

#[test]
fn theorems_hold() {
    let skip = ["flag_transport", "glide"];
    let names: Vec<&str> = Suite::Theorems.check_names().into_iter().filter(|n| !skip.contains(n)).collect();
    assert_clean(&run_theorem_suite(&TrialConfig::new(11, 6).only(&names)));
    assert_clean(&run_theorem_suite(&TrialConfig::new(11, 2).only(&skip)));
}

#[test]
fn metric_plane_holds() {
    assert_clean(&run_metric_plane_suite(&TrialConfig::new(5, 6)));
}

#[test]
fn oval_sample_holds() {
    assert_clean(&run_oval_sample_suite(&TrialConfig::new(9, 10)));
}

#[test]
fn reports_are_reproducible() {
    let cfg = TrialConfig::new(3, 4).only(&["A2", "A5", "A11"]);
    let a = run_axiom_suite(&cfg).to_json_string();
    let b = run_axiom_suite(&cfg).to_json_string();
    assert_eq!(a, b);
    let other = run_axiom_suite(&TrialConfig::new(4, 4).only(&["A2", "A5", "A11"]));
    assert!(other.overall);
}

#[test]
fn report_shape() {
    let r = run_axiom_suite(&TrialConfig::new(1, 2).only(&["A1"]));
    let v = r.to_json();
    assert_eq!(v["overall"], true);
    let c = &v["checks"][0];
    assert_eq!(c["name"], "A1");
    assert_eq!(c["mode"], "exact");
    assert_eq!(c["trials"], 2);
    assert_eq!(c["failures"], 0);
    assert!(c["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn unknown_names_are_rejected() {
    assert!("axiomz".parse::<Suite>().is_err());
    assert!("mirror".parse::<Sabotage>().is_err());
    assert_eq!("oval-sample".parse::<Suite>().unwrap(), Suite::OvalSample);
}

fn failing(r: &Report, name: &str) -> bool {
    r.check(name).is_some_and(|c| c.failures > 0)
}

#[test]
fn mirror_sabotage_is_caught() {
    let cfg = TrialConfig::new(42, 10).with_sabotage(Some(Sabotage::EuclideanMirror));
    let t = run_theorem_suite(&cfg.clone().only(&["productperp"]));
    assert!(failing(&t, "productperp"));
    let a = run_axiom_suite(&cfg.only(&["A11"]));
    assert!(failing(&a, "A11"));
    let w = &a.check("A11").unwrap().witnesses[0];
    assert!(w["trial"].is_u64() && w["reason"].is_string() && w["scene"].is_object());
}

#[test]
fn skewed_half_turn_is_caught() {
    let cfg =
        TrialConfig::new(42, 10).only(&["inv_then_collinear"]).with_sabotage(Some(Sabotage::SkewedHalfTurn));
    assert!(failing(&run_theorem_suite(&cfg), "inv_then_collinear"));
}

#[test]
fn dropped_bowtie_is_caught() {
    let cfg = TrialConfig::new(42, 10)
        .only(&["diagonalpointpolar"])
        .with_sabotage(Some(Sabotage::DroppedBowtieLabeling));
    assert!(failing(&run_theorem_suite(&cfg), "diagonalpointpolar"));
}

#[test]
fn sabotage_is_scoped_to_the_run() {
    let only = ["inv_then_collinear"];
    let bad = TrialConfig::new(2, 3).only(&only).with_sabotage(Some(Sabotage::SkewedHalfTurn));
    assert!(!run_theorem_suite(&bad).overall);
    assert!(run_theorem_suite(&TrialConfig::new(2, 3).only(&only)).overall);
}

#[test]
fn flags_are_carried() {
    let p = Point::rat(1, 4, 1, 5);
    let q = Point::rat(-1, 3, 1, 2);
    let l = line_through_points(&p, &Point::origin()).unwrap();
    let m = perp_at_point(&line_through_points(&q, &Point::origin()).unwrap(), &q).unwrap();
    let g = flag_transport(&p, &l, &q, &m).unwrap();
    assert!(g.word().len() <= 2);
    assert!(g.apply_point(&p).unwrap().eq_exact(&q));
    assert!(g.apply_line(&l).eq_exact(&m));
}
