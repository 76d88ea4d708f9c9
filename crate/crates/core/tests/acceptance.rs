use coxcoh::verify::{self, CriterionResult};

fn run(check: fn() -> CriterionResult) {
    let r = check();
    println!("{r}");
    assert!(r.passed, "{r}");
}

#[test]
fn criterion_1_descent_bases() {
    run(verify::descent_bases);
}

#[test]
fn criterion_2_partition_counts() {
    run(verify::partition_counts);
}

#[test]
fn criterion_3_finite_formulas() {
    run(verify::finite_formulas);
}

#[test]
fn criterion_4_infinite_desk_checks() {
    run(verify::infinite_desk_checks);
}

#[test]
fn criterion_5_graded_pieces() {
    run(verify::graded_pieces);
}

#[test]
fn criterion_6_solomon() {
    run(verify::solomon);
}

#[test]
fn criterion_7_buildings() {
    run(verify::buildings);
}

#[test]
fn criterion_8_hecke() {
    run(verify::hecke);
}

#[test]
fn criterion_9_tripod_pairings() {
    run(verify::tripod_pairings);
}
