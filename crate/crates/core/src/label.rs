//! Provenance labels: `name(key=value,...)` or `name(key=value,...;inner)`.
//!
//! A label written by a generator names the generator and every parameter
//! (including seed and RNG), so [`regenerate`] rebuilds the graph bit for bit.
//! Lists inside a value are `/`-separated.

use crate::constructions::{rs_graph, ApFreeSet, ApMethod};
use crate::error::{Error, Result};
use crate::graph::{
    blowup, complete_multipartite, random_graph, random_tripartite, tensor_power_with_budget, uniform_blowup, Graph,
};
use crate::rng::RNG_ID;

#[derive(Clone, Debug, PartialEq)]
pub struct Label {
    name: String,
    args: Vec<(String, String)>,
    inner: Option<String>,
}

impl Label {
    pub fn new(name: &str) -> Self {
        Self { name: name.to_string(), args: Vec::new(), inner: None }
    }

    pub fn arg(mut self, key: &str, value: impl ToString) -> Self {
        self.args.push((key.to_string(), value.to_string()));
        self
    }

    pub fn inner(mut self, inner: &str) -> Self {
        self.inner = Some(inner.to_string());
        self
    }

    pub fn render(&self) -> String {
        let args: Vec<String> = self.args.iter().map(|(k, v)| format!("{k}={v}")).collect();
        match &self.inner {
            Some(inner) => format!("{}({};{})", self.name, args.join(","), inner),
            None => format!("{}({})", self.name, args.join(",")),
        }
    }

    pub fn parse(s: &str) -> Result<Label> {
        let bad = || Error::MalformedInput(format!("unrecognised label {s:?}"));
        let open = s.find('(').ok_or_else(bad)?;
        if !s.ends_with(')') {
            return Err(bad());
        }
        let name = &s[..open];
        let body = &s[open + 1..s.len() - 1];
        let (args, inner) = match body.find(';') {
            Some(i) => (&body[..i], Some(body[i + 1..].to_string())),
            None => (body, None),
        };
        let mut parsed = Vec::new();
        for kv in args.split(',').filter(|kv| !kv.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(bad)?;
            parsed.push((k.to_string(), v.to_string()));
        }
        Ok(Label { name: name.to_string(), args: parsed, inner })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn get(&self, key: &str) -> Result<&str> {
        self.args
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::MalformedInput(format!("label {} lacks `{key}`", self.name)))
    }

    fn num<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let v = self.get(key)?;
        v.parse().map_err(|_| Error::MalformedInput(format!("label value {key}={v} is not a number")))
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Vec<T>> {
        let v = self.get(key)?;
        if v.is_empty() {
            return Ok(Vec::new());
        }
        v.split('/')
            .map(|x| x.parse().map_err(|_| Error::MalformedInput(format!("label list {key}={v} is malformed"))))
            .collect()
    }
}

/// Rebuilds a graph from the label a generator attached to it.
pub fn regenerate(label: &str) -> Result<Graph> {
    let l = Label::parse(label)?;
    if let Ok(id) = l.get("rng") {
        if id != RNG_ID {
            return Err(Error::MalformedInput(format!("label uses unknown rng {id}")));
        }
    }
    let inner = || -> Result<Graph> {
        let s = l
            .inner
            .as_deref()
            .ok_or_else(|| Error::MalformedInput(format!("label {} needs an inner label", l.name)))?;
        regenerate(s)
    };
    match l.name() {
        "empty" => Ok(Graph::empty(l.num("n")?)),
        "complete" => Ok(Graph::complete(l.num("n")?)),
        "cycle" => Graph::cycle(l.num("n")?),
        "gnp" => random_graph(l.num("n")?, l.num("p")?, l.num("seed")?),
        "tripartite" => {
            let a: Vec<f64> = l.list("alpha")?;
            let alphas: [f64; 3] =
                a.try_into().map_err(|_| Error::MalformedInput("tripartite label needs three densities".into()))?;
            Ok(random_tripartite(l.num("m")?, alphas, l.num("seed")?)?.0)
        }
        "multipartite" => complete_multipartite(&l.list::<usize>("sizes")?),
        "blowup" => {
            let base = inner()?;
            let (g, _) = match l.get("q") {
                Ok(_) => uniform_blowup(&base, l.num("q")?)?,
                Err(_) => blowup(&base, &l.list::<usize>("sizes")?)?,
            };
            Ok(g)
        }
        "tensor" => tensor_power_with_budget(&inner()?, l.num("k")?, usize::MAX),
        "rs" => {
            let m: usize = l.num("m")?;
            let elements: Vec<u64> = match l.get("set")? {
                "" => Vec::new(),
                _ => l.list("set")?,
            };
            let set = ApFreeSet::new(m as u64, elements, ApMethod::Explicit)?;
            Ok(rs_graph(m, &set)?.0)
        }
        other => Err(Error::MalformedInput(format!("no generator named {other}"))),
    }
}
