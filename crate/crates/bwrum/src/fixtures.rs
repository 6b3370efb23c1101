//! Machine-readable worked examples.

use bwrum_core::rankings::{count_pattern, enumerate_pattern, split_partition, Pattern};
use bwrum_core::rational::int;
use bwrum_core::{BwSystem, Subset};
use serde_json::{json, Value};

use crate::files::system_json;
use crate::labels::Labels;

pub const NAMES: [&str; 6] = ["example1", "example2", "example3", "table2", "uniform_n", "negk3"];

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("unknown fixture {0:?}; expected one of {names}", names = NAMES.join(", "))]
    UnknownFixture(String),
    #[error("uniform_n needs 2 <= n <= 12, got {0}")]
    BadSize(usize),
}

// p, q, r are the listed alternatives, u and v the free ones
fn letters() -> Labels {
    Labels::new(["p", "q", "r", "u", "v"].map(String::from).to_vec(), 5).expect("five distinct labels")
}

pub fn pattern_json(p: &Pattern, labels: &Labels) -> Value {
    json!({
        "prefix": p.prefix.iter().map(|&a| labels.alt(a)).collect::<Vec<_>>(),
        "ground": labels.subset(p.ground),
        "suffix": p.suffix.iter().map(|&a| labels.alt(a)).collect::<Vec<_>>(),
    })
}

fn pattern_fixture(name: &str, ground: Subset) -> Value {
    let labels = letters();
    let p = Pattern::new(vec![0], ground, vec![1]);
    let rankings = enumerate_pattern(&p, 5).expect("valid at n = 5");
    json!({
        "fixture": name,
        "n": 5,
        "labels": labels.names(),
        "pattern": pattern_json(&p, &labels),
        "count": rankings.len(),
        "rankings": rankings.iter().map(|r| labels.ranking(r)).collect::<Vec<_>>(),
    })
}

fn count(n: usize, m: usize, k: usize) -> u64 {
    u64::try_from(count_pattern(n, m, k).expect("small n")).expect("fits at n <= 8")
}

fn example3() -> Value {
    let rows: Vec<Value> = (5..=8)
        .map(|n| {
            let (whole, three, two) = (count(n, 1, 2), count(n, 0, 3), count(n, 0, 2));
            json!({ "n": n, "one_excluded_pair": whole, "listed_triple": three, "listed_pair": two, "holds": whole == 2 * three + two })
        })
        .collect();
    json!({ "fixture": "example3", "rows": rows })
}

fn table2() -> Value {
    let labels = letters();
    let (u, v) = (3, 4);
    let parts = split_partition(5, u, v, Subset::pair(0, 1)).expect("valid context");
    let components: Vec<Value> = parts
        .iter()
        .map(|p| {
            let members = enumerate_pattern(p, 5).expect("valid at n = 5");
            json!({
                "pattern": pattern_json(p, &labels),
                "moved": labels.subset(p.listed().difference(Subset::pair(u, v))),
                "rankings": members.iter().map(|r| labels.ranking(r)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "fixture": "table2", "n": 5, "labels": labels.names(), "components": components })
}

/// Uniform system except `BW_{01}(0, 1) = 0`, labelled 1, 2, 3.
pub fn negk3() -> BwSystem {
    let ab = Subset::pair(0, 1);
    BwSystem::uniform(3).with_cell(ab, 0, 1, int(0)).with_cell(ab, 1, 0, int(1))
}

pub fn negk3_labels() -> Labels {
    Labels::new(["1", "2", "3"].map(String::from).to_vec(), 3).expect("three distinct labels")
}

pub fn emit(name: &str, n: usize) -> Result<Value, FixtureError> {
    Ok(match name {
        "example1" => pattern_fixture(name, [0, 1, 2].into_iter().collect()),
        "example2" => pattern_fixture(name, Subset::pair(0, 1)),
        "example3" => example3(),
        "table2" => table2(),
        "uniform_n" => {
            if !(2..=12).contains(&n) {
                return Err(FixtureError::BadSize(n));
            }
            system_json(&BwSystem::uniform(n), &Labels::none())
        }
        "negk3" => system_json(&negk3(), &negk3_labels()),
        other => return Err(FixtureError::UnknownFixture(other.to_string())),
    })
}
