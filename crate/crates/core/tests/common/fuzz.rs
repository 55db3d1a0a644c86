//! Random-input driver for the two parsers. Inputs are either noise over a
//! syntax-heavy alphabet or slices of the vendored files with a few edits.

use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TRIO_CHARS: &[char] = &[
    'a', 'b', 'z', 'A', 'Z', '0', '9', '^', ':', '-', '-', '-', '\n', '\n', ' ', ' ', '"', '\\', '[', ']', '{', '}', ',',
    '/', '`', '.', '+', 'e', '_', '%', '\t', '\r', 'é', 'τ', '\u{1F600}', '\0',
];

const TURTLE_CHARS: &[char] = &[
    'a', 'b', 'z', 'B', '0', '9', ':', '<', '>', '"', '\'', '\\', '@', '#', '.', ';', ',', '[', ']', '(', ')', '^', '_',
    '\n', ' ', ' ', 'u', 'x', 'é', '\u{1F600}', '\0', '\t', '/', 'p', 'r', 'e', 'f', 'i',
];

fn noise(rng: &mut ChaCha8Rng, alphabet: &[char]) -> Vec<char> {
    let n = rng.gen_range(0..120);
    (0..n).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
}

fn mutate(rng: &mut ChaCha8Rng, corpus: &[char], alphabet: &[char]) -> Vec<char> {
    let start = rng.gen_range(0..corpus.len());
    let len = rng.gen_range(1..400).min(corpus.len() - start);
    let mut s = corpus[start..start + len].to_vec();
    for _ in 0..rng.gen_range(0..6) {
        if s.is_empty() {
            s.push(alphabet[rng.gen_range(0..alphabet.len())]);
            continue;
        }
        let k = rng.gen_range(0..s.len());
        match rng.gen_range(0..4) {
            0 => s[k] = alphabet[rng.gen_range(0..alphabet.len())],
            1 => s.insert(k, alphabet[rng.gen_range(0..alphabet.len())]),
            2 => {
                s.remove(k);
            }
            _ => {
                let end = rng.gen_range(k..=s.len().min(k + 40));
                let dup: Vec<char> = s[k..end].to_vec();
                s.splice(k..k, dup);
            }
        }
    }
    s
}

/// Feed `n` inputs to `parse`; the first input that panics is returned.
pub fn run(n: usize, seed: u64, corpus: &str, alphabet: &[char], parse: impl Fn(&str)) -> Result<usize, String> {
    let corpus: Vec<char> = corpus.chars().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let mut outcome = Ok(n);
    for _ in 0..n {
        let input: String =
            if rng.gen_bool(0.3) { noise(&mut rng, alphabet) } else { mutate(&mut rng, &corpus, alphabet) }.into_iter().collect();
        if catch_unwind(AssertUnwindSafe(|| parse(&input))).is_err() {
            outcome = Err(input);
            break;
        }
    }
    std::panic::set_hook(hook);
    outcome
}

pub fn trio(n: usize, seed: u64) -> Result<usize, String> {
    let corpus = std::fs::read_to_string(super::data().join("haystack/phIoT.trio")).unwrap();
    run(n, seed, &corpus, TRIO_CHARS, |s| {
        let lenient = ontobench_core::trio::parse_trio_lenient(s, "fuzz");
        // every error is located
        for e in &lenient.errors {
            assert!(e.line().is_some_and(|l| l >= 1), "{e}");
        }
        let strict = ontobench_core::trio::parse_trio(s);
        assert_eq!(strict.is_ok(), lenient.errors.is_empty());
    })
}

pub fn turtle(n: usize, seed: u64) -> Result<usize, String> {
    let corpus = std::fs::read_to_string(super::data().join("brick/Brick-1.1.0.ttl")).unwrap();
    run(n, seed, &corpus, TURTLE_CHARS, |s| {
        let a = ontobench_core::turtle::parse_turtle(s);
        let b = ontobench_core::turtle::parse_turtle(s);
        match (a, b) {
            (Ok(x), Ok(y)) => assert!(x.iter().eq(y.iter())),
            (Err(x), Err(y)) => assert_eq!(x.to_string(), y.to_string()),
            _ => panic!("nondeterministic"),
        }
    })
}
