#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stylus::config::RunConfig;
use stylus_core::corpus::{Author, LabelTable};

const SHARED: [(&str, f64); 24] = [
    ("the", 60.0),
    ("of", 40.0),
    ("and", 25.0),
    ("to", 25.0),
    ("a", 12.0),
    ("in", 12.0),
    ("be", 10.0),
    ("that", 10.0),
    ("it", 8.0),
    ("is", 8.0),
    ("which", 6.0),
    ("would", 5.0),
    ("government", 6.0),
    ("union", 5.0),
    ("states", 6.0),
    ("power", 5.0),
    ("people", 5.0),
    ("liberty", 3.0),
    ("federal", 4.0),
    ("congress", 3.0),
    ("commerce", 2.0),
    ("treaty", 2.0),
    ("army", 2.0),
    ("taxes", 2.0),
];

/// Words each author leans on; the other author uses them rarely.
const HAMILTON: [(&str, f64); 5] = [("upon", 18.0), ("while", 9.0), ("enough", 6.0), ("kind", 6.0), ("there", 9.0)];
const MADISON: [(&str, f64); 5] =
    [("on", 18.0), ("whilst", 9.0), ("consequently", 6.0), ("also", 6.0), ("particularly", 6.0)];

/// Weight of Madison's habits in a paper by `label`; Hamilton's get `1 - w`.
fn madison_weight(id: u32, label: Author) -> f64 {
    match label {
        Author::Hamilton | Author::Jay => 0.05,
        Author::Madison | Author::Disputed => 0.95,
        Author::Joint if id == 20 => 0.55,
        Author::Joint => 0.8,
    }
}

fn body(rng: &mut ChaCha8Rng, id: u32, label: Author, len: usize) -> String {
    let w = madison_weight(id, label);
    let mut words: Vec<(&str, f64)> = SHARED.to_vec();
    words.extend(HAMILTON.iter().map(|&(s, x)| (s, x * (1.0 - w))));
    words.extend(MADISON.iter().map(|&(s, x)| (s, x * w)));
    if label == Author::Jay {
        words.push(("nations", 4.0));
    }
    let dist = WeightedIndex::new(words.iter().map(|p| p.1)).unwrap();
    let tokens: Vec<&str> = (0..len).map(|_| words[dist.sample(rng)].0).collect();
    tokens.chunks(12).map(|c| c.join(" ") + ".").collect::<Vec<_>>().join("\n")
}

/// An ebook with all 85 papers in the layout of the public-domain edition,
/// authored per the bundled label table.
pub fn ebook(seed: u64) -> String {
    let labels = LabelTable::bundled();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = String::from("The Project Gutenberg eBook\n\n*** START OF THE PROJECT ***\n\nTHE FEDERALIST PAPERS\n\n");
    for id in 1..=85u32 {
        let label = labels.get(id).expect("every paper is labeled");
        let len = 280 + (id as usize * 7) % 120;
        s += &format!(
            "FEDERALIST No. {id}\n\nPaper number {id}\n\nFrom the Daily Advertiser.\n\n\
             To the People of the State of New York:\n\n{}\n\nPUBLIUS.\n\n\n",
            body(&mut rng, id, label, len)
        );
    }
    s += "*** END OF THE PROJECT ***\n";
    s
}

pub const SMALL_CONFIG: &str = r#"
[corpus]
source = "federalist.txt"

[bow]
input_type = "type3"

[embedding]
method = "lda"
seed = 11
k_candidates = [2, 3]
lda_iters = 60
rank = 3
nmf_iters = 100

[classifier]
method = "bart"
seed = 5
trees = 8
burn_in = 30
draws = 40
path_size = 20

[output]
dir = "out"
"#;

/// Writes the ebook and `stylus.toml` into `dir`; returns the config path.
pub fn write_fixture(dir: &Path) -> PathBuf {
    fs::write(dir.join("federalist.txt"), ebook(7)).unwrap();
    let cfg = dir.join("stylus.toml");
    fs::write(&cfg, SMALL_CONFIG).unwrap();
    cfg
}

pub fn small_config(dir: &Path) -> RunConfig {
    let cfg = write_fixture(dir);
    RunConfig::load(&cfg).unwrap()
}
