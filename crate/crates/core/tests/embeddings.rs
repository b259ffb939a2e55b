mod suites;

#[test]
fn lda_counts_conserved_every_sweep() {
    suites::lda_counts_conserved_every_sweep();
}

#[test]
fn lda_recovers_two_blocks() {
    suites::lda_recovers_two_blocks();
}

#[test]
fn nmf_objective_never_increases() {
    suites::nmf_objective_never_increases();
}

#[test]
fn lsa_truncation_error_matches_dense_oracle() {
    suites::lsa_truncation_error_matches_dense_oracle();
}
