use std::sync::OnceLock;

use statrs::function::gamma::ln_gamma;

const TABLE_SIZE: usize = 41;

fn table() -> &'static [f64; TABLE_SIZE] {
    static TABLE: OnceLock<[f64; TABLE_SIZE]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; TABLE_SIZE];
        for n in 1..TABLE_SIZE {
            t[n] = t[n - 1] * n as f64;
        }
        t
    })
}

fn ln_table() -> &'static [f64; TABLE_SIZE] {
    static TABLE: OnceLock<[f64; TABLE_SIZE]> = OnceLock::new();
    TABLE.get_or_init(|| table().map(f64::ln))
}

/// n! from the cached table for n ≤ 40, log-gamma beyond.
pub fn factorial(n: u32) -> f64 {
    match table().get(n as usize) {
        Some(v) => *v,
        None => ln_gamma(n as f64 + 1.0).exp(),
    }
}

/// ln(n!).
pub fn ln_factorial(n: u32) -> f64 {
    match ln_table().get(n as usize) {
        Some(v) => *v,
        None => ln_gamma(n as f64 + 1.0),
    }
}
