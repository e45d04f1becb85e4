//! Acceptance gate: one test per acceptance criterion, each printing a
//! single pass/fail line (run with `--nocapture` to see the lines on
//! success).

use std::path::PathBuf;

use wicks::verify::{self, ClaimResult, ClaimStatus};
use wicks::wicks::FormStore;

fn store() -> FormStore {
    let tables = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../tables");
    if tables.is_dir() {
        FormStore::with_dir(tables)
    } else {
        FormStore::in_memory()
    }
}

fn check(criterion: &str, claim: ClaimResult) {
    let status = match claim.status {
        ClaimStatus::Pass => "pass",
        ClaimStatus::Fail => "FAIL",
        ClaimStatus::Skipped => "skipped",
    };
    println!("{criterion}: {status} — {} ({})", claim.title, claim.detail);
    assert_eq!(
        claim.status,
        ClaimStatus::Pass,
        "{criterion} [{}]: {}",
        claim.id,
        claim.detail
    );
}

#[test]
fn criterion_01_short_census_counts() {
    check("criterion 1", verify::claim_census_small(&store()));
}

#[test]
fn criterion_02_maximal_genus_two_census() {
    check(
        "criterion 2",
        verify::claim_census_genus_two_maximal(&store(), false),
    );
}

#[test]
fn criterion_03_genus_table() {
    check("criterion 3", verify::claim_genus_table(&store()));
}

#[test]
fn criterion_04_commutator_power_classes() {
    check("criterion 4", verify::claim_power_classes(&store()));
}

#[test]
fn criterion_05_even_power_squares() {
    check("criterion 5", verify::claim_even_power_squares(&store()));
}

#[test]
fn criterion_06_fourteen_letter_commutator() {
    check("criterion 6", verify::claim_long_commutator(&store()));
}

#[test]
fn criterion_07_three_squares_identity() {
    check("criterion 7", verify::claim_three_squares_identity());
}

#[test]
fn criterion_08_sharp_witness_families() {
    check("criterion 8", verify::claim_sharp_witnesses(&store()));
}

#[test]
fn criterion_09_length_bound_properties() {
    check("criterion 9", verify::claim_bef_bounds(&store()));
}

#[test]
fn criterion_10_reduction_procedure() {
    check("criterion 10", verify::claim_reduction_procedure(&store()));
}

#[test]
fn criterion_11_matcher_candidate_bound() {
    check("criterion 11", verify::claim_matcher_bound(&store()));
}

#[test]
fn criterion_12_oracle_equivalence() {
    check("criterion 12", verify::claim_oracle_agreement(&store()));
}

#[test]
fn criterion_13_commutator_never_square() {
    check("criterion 13", verify::claim_commutator_never_square(&store()));
}

#[test]
fn instance_check_generator_is_not_a_proper_power() {
    check("instance check", verify::claim_witness_root_subgroup());
}
