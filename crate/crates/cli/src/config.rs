//! Key=value preset files. Lines are `key = value`; `#` starts a comment.
//! Command-line flags always override file values.

use std::collections::HashMap;
use std::str::FromStr;

use anyhow::{bail, Context, Result};

#[derive(Default)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&str>) -> Result<Config> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {path}"))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("config line {} is not key=value: {raw:?}", lineno + 1);
            };
            values.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => match raw.parse() {
                Ok(v) => Ok(Some(v)),
                Err(e) => bail!("config key {key}={raw}: {e}"),
            },
        }
    }

    pub fn get_list(&self, key: &str) -> Result<Option<Vec<usize>>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => Ok(Some(parse_cells(raw)?)),
        }
    }
}

pub fn parse_cells(raw: &str) -> Result<Vec<usize>> {
    raw.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .with_context(|| format!("grid entry {p:?}"))
        })
        .collect()
}
