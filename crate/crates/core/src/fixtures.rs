//! Deterministic toy datasets for examples, tests and the bundled demo data.

use std::sync::Arc;

use rand::Rng;

use crate::rng;
use crate::tabular::{Dataset, FeatureSpec, Record, Role, Schema, Value};

const WORKCLASS: [&str; 4] = ["Government", "Other", "Private", "Self-emp"];
const WORKCLASS_W: [f64; 4] = [0.15, 0.10, 0.60, 0.15];
const EDUCATION: [&str; 4] = ["Bachelors", "HS-grad", "Masters", "Some-college"];
const EDUCATION_W: [f64; 4] = [0.25, 0.35, 0.15, 0.25];
const RICH_GIVEN_EDUCATION: [f64; 4] = [0.4, 0.1, 0.6, 0.2];
const SEX: [&str; 2] = ["Female", "Male"];
const INCOME: [&str; 2] = ["<=50K", ">50K"];
const COUNTRY: [&str; 5] = [
    "Canada",
    "Holland-Netherlands",
    "India",
    "Mexico",
    "United-States",
];
const COUNTRY_W: [f64; 5] = [0.06, 0.0, 0.06, 0.08, 0.80];
const HOURS: [f64; 7] = [20.0, 30.0, 35.0, 40.0, 45.0, 50.0, 60.0];
const HOURS_W: [f64; 7] = [0.05, 0.08, 0.07, 0.50, 0.10, 0.12, 0.08];

/// Country value carried only by the planted record.
pub const PLANTED_COUNTRY: &str = "Holland-Netherlands";

/// Schema of [`census_like`]: age, workclass, education, sex,
/// hours_per_week, income, native_country.
pub fn census_schema() -> Schema {
    Schema::new(vec![
        FeatureSpec::numeric("age", 17.0, 90.0),
        FeatureSpec::categorical("workclass", WORKCLASS),
        FeatureSpec::categorical("education", EDUCATION),
        FeatureSpec::categorical("sex", SEX),
        FeatureSpec::numeric("hours_per_week", 1.0, 99.0),
        FeatureSpec::categorical("income", INCOME),
        FeatureSpec::categorical("native_country", COUNTRY),
    ])
    .expect("static schema is valid")
}

fn pick<R: Rng>(weights: &[f64], rng: &mut R) -> u32 {
    let u: f64 = rng.gen();
    let total: f64 = weights.iter().sum();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w / total;
        if u < acc {
            return i as u32;
        }
    }
    (weights.len() - 1) as u32
}

/// The planted outlier: oldest age, maximum hours, and a country no other
/// record has.
pub fn planted_record() -> Record {
    Record::new(vec![
        Value::Num(90.0),
        Value::Cat(3),
        Value::Cat(2),
        Value::Cat(0),
        Value::Num(99.0),
        Value::Cat(1),
        Value::Cat(1),
    ])
}

/// `n` census-style records. Ages are integers in 18..=70 (triangular),
/// hours come from a few common values. With `planted`, row `n / 2` is
/// replaced by [`planted_record`], the only row with [`PLANTED_COUNTRY`].
pub fn census_like(n: usize, planted: bool, seed: u64) -> Dataset {
    let schema = Arc::new(census_schema());
    let mut r = rng::seeded(seed);
    let mut rows: Vec<Record> = (0..n)
        .map(|_| {
            let age = 18 + (r.gen_range(0..27) + r.gen_range(0..27));
            let education = pick(&EDUCATION_W, &mut r);
            let rich = r.gen::<f64>() < RICH_GIVEN_EDUCATION[education as usize];
            Record::new(vec![
                Value::Num(f64::from(age)),
                Value::Cat(pick(&WORKCLASS_W, &mut r)),
                Value::Cat(education),
                Value::Cat(pick(&[0.45, 0.55], &mut r)),
                Value::Num(HOURS[pick(&HOURS_W, &mut r) as usize]),
                Value::Cat(u32::from(rich)),
                Value::Cat(pick(&COUNTRY_W, &mut r)),
            ])
        })
        .collect();
    if planted && n > 0 {
        rows[n / 2] = planted_record();
    }
    Dataset::new(schema, rows, Role::Unlabeled).expect("generated rows match schema")
}

/// Two binary features `x`, `y` with exact counts: `x` alternates 0/1 and
/// `y` equals `x` except on the first `flips` rows of each `x` class.
pub fn correlated_binary(n_per_class: usize, flips: usize) -> Dataset {
    let schema = Arc::new(
        Schema::new(vec![
            FeatureSpec::categorical("x", ["0", "1"]),
            FeatureSpec::categorical("y", ["0", "1"]),
        ])
        .expect("static schema is valid"),
    );
    let flips = flips.min(n_per_class);
    let rows = (0..n_per_class)
        .flat_map(|i| {
            [0u32, 1].map(|x| {
                let y = if i < flips { 1 - x } else { x };
                Record::new(vec![Value::Cat(x), Value::Cat(y)])
            })
        })
        .collect();
    Dataset::new(schema, rows, Role::Unlabeled).expect("generated rows match schema")
}
