// SPDX-License-Identifier: Apache-2.0

mod support;

#[test]
fn cup_final_coins() {
    support::worked::cup_final_coins();
}

#[test]
fn chip_final_multiset_and_comparison() {
    support::worked::chip_final_multiset_and_comparison();
}

#[test]
fn card_final_pile() {
    support::worked::card_final_pile();
}

#[test]
fn file_final_listing() {
    support::worked::file_final_listing();
}

#[test]
fn number_case_study_replay() {
    support::worked::number_case_study_replay();
}

#[test]
fn circle_layout() {
    support::worked::circle_layout();
}
