use super::*;

fn data() -> InstanceData {
    InstanceData::bundled().unwrap()
}

fn std_el(s: &str) -> FieldElement {
    FieldElement::parse(&Tower::standard(), s).unwrap()
}

fn assert_ok(r: &Report) {
    let bad: Vec<_> = r.failures().map(|c| &c.check).collect();
    assert!(r.ok(), "failed checks: {bad:?}");
}

#[test]
fn rho_geom_checks() {
    let r = check_rho_geom(&data()).unwrap();
    assert_ok(&r);
    let errata: Vec<&str> = r.errata().map(|c| c.check.as_str()).collect();
    assert_eq!(errata.len(), 3, "{errata:?}");
    assert!(r.find("rho_geom(a l2 a^-1) = +-t2^-1 u^2").unwrap().pass);
    assert!(r.find("rho_geom(b^-1 a^3 b^-1 a^-1) = +-t2").unwrap().pass);
}

#[test]
fn rho0_checks() {
    let r = check_rho0(&data()).unwrap();
    assert_ok(&r);
    assert_eq!(r.errata().count(), 1);
    assert!(r.find("rho0(m1)^3 = rho0(l1)").unwrap().pass);
}

#[test]
fn bundled_t_differs_from_print_in_one_entry() {
    let d = data();
    let p = printed_t();
    let diff: Vec<(usize, usize)> =
        (0..3).flat_map(|r| (0..3).map(move |c| (r, c))).filter(|&(r, c)| p.get(r, c) != d.t.get(r, c)).collect();
    assert_eq!(diff, vec![(0, 1)]);
    assert_eq!(d.t.get(0, 1), &-p.get(0, 1));
}

#[test]
fn decoration_examples() {
    let d = data();
    let (f, r) = build_decoration(&d).unwrap();
    assert_ok(&r);
    assert_eq!(f.len(), 6);
    let e = |s: [&str; 3]| s.map(std_el);
    assert!(flags::parallel(f["inf"].point(), &e(["1", "0", "0"])));
    assert!(flags::parallel(f["inf"].form(), &e(["0", "0", "1"])));
    assert!(flags::parallel(f["(-1+i)/2"].point(), &e(["0", "0", "1"])));
    assert!(flags::parallel(f["(-1+i)/2"].form(), &e(["1", "0", "0"])));
    assert!(flags::parallel(f["-i"].point(), &e(["1", "(sqrt3 - i*sqrt5)/4", "-(1 + i*sqrt15)/4"])));
    assert!(flags::parallel(f["-i"].form(), &e(["(1 - i*sqrt15)/4", "-(sqrt3 + i*sqrt5)/4", "-1"])));
    assert_eq!(r.errata().count(), 1);
}

#[test]
fn defpoint_examples() {
    let (p, r) = build_defpoint(&data()).unwrap();
    assert_ok(&r);
    assert_eq!(p.z[1], std_el("(-3 + i*sqrt15)/6"));
    assert_eq!(p.z[0], std_el("(7 + i*sqrt15)/4"));
    assert_eq!(p.z[36 + 3], std_el("(7 + i*sqrt15)/4"));
    assert_eq!(r.errata().count(), 2);
    assert!(r.find("printed table values (transposed entries) leave the variety").unwrap().pass);
}

#[test]
fn x0_cross_check() {
    let r = check_x0(&data()).unwrap();
    assert_ok(&r);
    let z = r.find("z at rho0").unwrap();
    assert_eq!(z.got, "(3·1, 3·1, 3·1, 3·1)".replace("3·1", "(3)·1"));
    assert_eq!(r.find("Delta at rho0").unwrap().got, "(-135)·1");
}

#[test]
fn pipeline_and_stage_names() {
    let r = verify_main_theorem(&data(), &Stage::ALL).unwrap();
    assert_ok(&r);
    let t = r.find("Jacobian kernel dimension").unwrap();
    assert_eq!((t.expected.clone(), t.got.clone()), (serde_json::json!(4), serde_json::json!(4)));
    for s in Stage::ALL {
        assert_eq!(Stage::parse(s.name()), Some(s));
    }
    let only = verify_main_theorem(&data(), &[Stage::Tangent]).unwrap();
    assert!(only.checks.iter().all(|c| c.stage == Stage::Tangent));
}

#[test]
fn corrupt_data_is_rejected() {
    let broken = &FLAGS_JSON[..FLAGS_JSON.len() / 2];
    assert!(matches!(InstanceData::from_strs(MATRICES_JSON, broken, INSTANCE_JSON), Err(WhiteheadError::Data(_))));
    assert!(matches!(InstanceData::from_strs("{}", FLAGS_JSON, INSTANCE_JSON), Err(WhiteheadError::Data(_))));
}
