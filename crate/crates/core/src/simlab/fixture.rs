//! Synthetic daily yield-curve panel shaped like a Treasury constant-maturity
//! table with a volatility index as the exogenous variable.

use std::fmt::Write as _;

use chrono::{Datelike, NaiveDate, Weekday};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::seed;

/// Maturity columns with their maturity in years.
pub const TREASURY_MATURITIES: [(&str, f64); 12] = [
    ("m1", 1.0 / 12.0),
    ("m2", 2.0 / 12.0),
    ("m3", 0.25),
    ("m6", 0.5),
    ("y1", 1.0),
    ("y2", 2.0),
    ("y3", 3.0),
    ("y5", 5.0),
    ("y7", 7.0),
    ("y10", 10.0),
    ("y20", 20.0),
    ("y30", 30.0),
];

/// Shape of the checked-in fixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreasuryFixture {
    pub rows: usize,
    pub incomplete_rows: usize,
    pub seed: u64,
}

impl Default for TreasuryFixture {
    fn default() -> Self {
        Self {
            rows: 1027,
            incomplete_rows: 8,
            seed: 20_190_102,
        }
    }
}

fn business_days(start: NaiveDate, count: usize) -> Vec<NaiveDate> {
    start
        .iter_days()
        .filter(|d| !matches!(d.weekday(), Weekday::Sat | Weekday::Sun))
        .take(count)
        .collect()
}

/// Nelson–Siegel slope and curvature loadings at maturity `tau`.
fn ns_loadings(tau: f64) -> (f64, f64) {
    const DECAY: f64 = 1.8;
    let x = tau / DECAY;
    let slope = (1.0 - (-x).exp()) / x;
    (slope, slope - (-x).exp())
}

impl TreasuryFixture {
    /// CSV text with columns `date,vix,m1,...,y30`. Values have two decimals;
    /// `incomplete_rows` rows carry one blank cell.
    pub fn to_csv(&self) -> String {
        let mut rng = seed::stream(self.seed, &[]);
        let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
        let dates = business_days(
            NaiveDate::from_ymd_opt(2019, 1, 2).expect("date"),
            self.rows,
        );

        let mean = 18f64.ln();
        let (phi, sd): (f64, f64) = (0.97, 0.08);
        let stationary = sd / (1.0 - phi * phi).sqrt();
        let mut x = mean;
        let mut level = 2.2;
        let mut cells: Vec<Vec<f64>> = Vec::with_capacity(self.rows);
        for _ in 0..self.rows {
            x = mean + phi * (x - mean) + sd * normal();
            level += 0.01 * normal();
            let z = (x - mean) / stationary;
            let slope = -1.0 - 0.9 * z;
            let curve = 0.6 * (z * z - 1.0);
            let mut row = vec![x.exp()];
            for &(_, tau) in &TREASURY_MATURITIES {
                let (a, b) = ns_loadings(tau);
                row.push((level + slope * a + curve * b + 0.03 * normal()).max(0.01));
            }
            cells.push(row);
        }

        let mut rng = seed::stream(self.seed, &[1]);
        let mut blanks = Vec::with_capacity(self.incomplete_rows);
        while blanks.len() < self.incomplete_rows {
            let row = rng.random_range(0..self.rows);
            if !blanks.iter().any(|&(r, _)| r == row) {
                blanks.push((row, rng.random_range(0..=TREASURY_MATURITIES.len())));
            }
        }

        let mut out = String::from("date,vix");
        for (name, _) in TREASURY_MATURITIES {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (i, (date, row)) in dates.iter().zip(&cells).enumerate() {
            out.push_str(&date.format("%Y-%m-%d").to_string());
            for (c, v) in row.iter().enumerate() {
                out.push(',');
                if !blanks.contains(&(i, c)) {
                    write!(out, "{v:.2}").expect("write to string");
                }
            }
            out.push('\n');
        }
        out
    }
}
