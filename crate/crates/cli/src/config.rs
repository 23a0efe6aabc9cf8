//! Configuration files and seed files.

use std::path::Path;

use qcluster::rootsys::CartanMatrix;
use qcluster::seed::{QuantumSeed, SeedWire};
use qcluster::verify::{Suite, VerifyOptions};
use qcluster::{Error, Result};
use serde::Deserialize;
use serde_json::Value;

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum CartanInput {
    Matrix(Vec<Vec<i64>>),
    Name(String),
}

impl CartanInput {
    pub fn resolve(&self) -> Result<CartanMatrix> {
        match self {
            CartanInput::Matrix(m) => CartanMatrix::new(m.clone()),
            CartanInput::Name(s) => {
                let t = s.trim();
                match t {
                    "D4" => Ok(CartanMatrix::type_d4()),
                    "A1~" | "A1^(1)" | "affine A1" => Ok(CartanMatrix::affine_a1()),
                    _ => match t.strip_prefix('A').and_then(|n| n.parse::<usize>().ok()) {
                        Some(n) if n >= 1 => Ok(CartanMatrix::type_a(n)),
                        _ => Err(Error::Input(format!("unknown Cartan type {:?}", s))),
                    },
                }
            }
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub seed_rng: Option<u64>,
    pub sequences: Option<usize>,
    pub max_len: Option<usize>,
    pub qmatrix_max_len: Option<usize>,
    /// Mutation sequence for `mutate`.
    pub sequence: Option<Vec<usize>>,
    /// Load the seed from this file instead of building it.
    pub seed_file: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub cartan: CartanInput,
    pub word: Vec<usize>,
    #[serde(default)]
    pub tasks: Vec<String>,
    #[serde(default)]
    pub options: Options,
}

impl Config {
    pub fn verify_options(&self) -> VerifyOptions {
        let d = VerifyOptions::default();
        let o = &self.options;
        VerifyOptions {
            rng_seed: o.seed_rng.unwrap_or(d.rng_seed),
            sequences: o.sequences.unwrap_or(d.sequences),
            max_len: o.max_len.unwrap_or(d.max_len),
            qmatrix_max_len: o.qmatrix_max_len.unwrap_or(d.qmatrix_max_len),
        }
    }

    pub fn suites(&self) -> Result<Vec<Suite>> {
        if self.tasks.is_empty() {
            return Ok(Suite::ALL.to_vec());
        }
        Suite::parse_list(&self.tasks.join(","))
    }
}

/// What an `--input` file turned out to be.
pub enum Input {
    Config(Box<Config>, QuantumSeed),
    Seed(QuantumSeed),
}

impl Input {
    pub fn seed(&self) -> &QuantumSeed {
        match self {
            Input::Config(_, s) | Input::Seed(s) => s,
        }
    }

    pub fn config(&self) -> Option<&Config> {
        match self {
            Input::Config(c, _) => Some(c),
            Input::Seed(_) => None,
        }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {}", path.display(), e)))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {}", path.display(), e)))
}

fn load_seed(v: Value, checked: bool) -> Result<QuantumSeed> {
    let w: SeedWire = serde_json::from_value(v).map_err(|e| Error::Input(format!("seed file: {}", e)))?;
    if checked {
        QuantumSeed::from_wire(w)
    } else {
        QuantumSeed::from_wire_unchecked(w)
    }
}

/// Load a config (building its seed) or a seed file. With `checked = false`
/// a seed file is accepted even if its invariants fail, so that `verify`
/// can report them.
pub fn load(path: &Path, checked: bool) -> Result<Input> {
    let v = read_json(path)?;
    if v.get("cluster").is_some() {
        return Ok(Input::Seed(load_seed(v, checked)?));
    }
    let cfg: Config = serde_json::from_value(v).map_err(|e| Error::Input(format!("{}: {}", path.display(), e)))?;
    let cartan = cfg.cartan.resolve()?;
    let seed = match &cfg.options.seed_file {
        Some(f) => {
            let p = path.parent().unwrap_or(Path::new(".")).join(f);
            let s = load_seed(read_json(&p)?, checked)?;
            if s.word.cartan != cartan || s.word.word.letters() != cfg.word {
                return Err(Error::Input(format!("{} does not match the configured Cartan matrix and word", f)));
            }
            s
        }
        None => QuantumSeed::from_letters(cartan, &cfg.word)?,
    };
    cfg.suites()?;
    Ok(Input::Config(Box::new(cfg), seed))
}

/// Parse `1,3,2` into positions.
pub fn parse_sequence(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<usize>().map_err(|_| Error::Input(format!("bad position {:?} in sequence", x))))
        .collect()
}

/// Parse `b,d`.
pub fn parse_pair(s: &str) -> Result<(usize, usize)> {
    match parse_sequence(s)?.as_slice() {
        [b, d] => Ok((*b, *d)),
        _ => Err(Error::Input(format!("expected b,d but got {:?}", s))),
    }
}
