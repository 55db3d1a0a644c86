mod common;

const N: usize = 100_000;

#[test]
fn trio_parser_survives_random_input() {
    if let Err(input) = common::fuzz::trio(N, 0x7410) {
        panic!("trio parser panicked on {input:?}");
    }
}

#[test]
fn turtle_parser_survives_random_input() {
    if let Err(input) = common::fuzz::turtle(N, 0x7e27) {
        panic!("turtle parser panicked on {input:?}");
    }
}
