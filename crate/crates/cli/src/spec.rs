//! Mini-grammar for channel, metric, sampler and sigma specs:
//! `name:key=value,key=value,...`. Parse errors cite the offending token.

use std::collections::BTreeMap;
use std::fmt;

use kslice_core::compress::Sampler;
use kslice_core::rng::random_density_matrix;
use kslice_core::zoo;
use kslice_core::{CMatrix, CVector, Channel, SplitMix64};

#[derive(Debug, Clone, PartialEq)]
pub struct SpecError {
    pub token: String,
    pub reason: String,
}

impl SpecError {
    fn new(token: impl Into<String>, reason: impl Into<String>) -> Self {
        SpecError { token: token.into(), reason: reason.into() }
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid spec token `{}`: {}", self.token, self.reason)
    }
}

impl std::error::Error for SpecError {}

struct Params {
    name: String,
    map: BTreeMap<String, String>,
}

fn split_spec(spec: &str) -> Result<Params, SpecError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(SpecError::new(spec, "empty spec"));
    }
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n, Some(r)),
        None => (spec, None),
    };
    let mut map = BTreeMap::new();
    if let Some(rest) = rest {
        for token in rest.split(',') {
            let (k, v) = token
                .split_once('=')
                .ok_or_else(|| SpecError::new(token, "expected key=value"))?;
            if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(SpecError::new(token, "duplicate key"));
            }
        }
    }
    Ok(Params { name: name.trim().to_string(), map })
}

impl Params {
    fn usize(&self, key: &str) -> Result<usize, SpecError> {
        let raw = self
            .map
            .get(key)
            .ok_or_else(|| SpecError::new(key, format!("missing for `{}`", self.name)))?;
        raw.parse::<usize>()
            .map_err(|_| SpecError::new(format!("{key}={raw}"), "expected a positive integer"))
    }

    fn u64(&self, key: &str) -> Result<u64, SpecError> {
        let raw = self
            .map
            .get(key)
            .ok_or_else(|| SpecError::new(key, format!("missing for `{}`", self.name)))?;
        raw.parse::<u64>()
            .map_err(|_| SpecError::new(format!("{key}={raw}"), "expected an unsigned integer"))
    }

    fn f64(&self, key: &str) -> Result<f64, SpecError> {
        let raw = self
            .map
            .get(key)
            .ok_or_else(|| SpecError::new(key, format!("missing for `{}`", self.name)))?;
        raw.parse::<f64>()
            .map_err(|_| SpecError::new(format!("{key}={raw}"), "expected a number"))
    }

    fn reject_unknown(&self, allowed: &[&str]) -> Result<(), SpecError> {
        for key in self.map.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(SpecError::new(key, format!("unknown key for `{}`", self.name)));
            }
        }
        Ok(())
    }
}

/// Parse a channel spec such as `randomizing:d=16`, `werner:d=4,lambda=0.75`,
/// `qc:a=8,b=16`, `cq:a=16,b=8`, `random:a=8,b=8,e=64,seed=7`.
pub fn parse_channel_spec(spec: &str) -> Result<Channel, SpecError> {
    let params = split_spec(spec)?;
    let build = |r: kslice_core::Result<Channel>| {
        r.map_err(|e| SpecError::new(spec, e.to_string()))
    };
    match params.name.as_str() {
        "randomizing" => {
            params.reject_unknown(&["d"])?;
            build(zoo::randomizing_channel(params.usize("d")?))
        }
        "werner" => {
            params.reject_unknown(&["d", "lambda"])?;
            build(zoo::werner_channel(params.usize("d")?, params.f64("lambda")?))
        }
        "qc" => {
            params.reject_unknown(&["a", "b"])?;
            build(zoo::qc_channel(params.usize("a")?, params.usize("b")?))
        }
        "cq" => {
            params.reject_unknown(&["a", "b"])?;
            build(zoo::cq_channel(params.usize("a")?, params.usize("b")?))
        }
        "random" => {
            params.reject_unknown(&["a", "b", "e", "seed"])?;
            build(zoo::random_channel(
                params.usize("a")?,
                params.usize("b")?,
                params.usize("e")?,
                params.u64("seed")?,
            ))
        }
        other => Err(SpecError::new(other, "unknown channel family")),
    }
}

/// Metric requested in a sweep row.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpec {
    /// (1→p) distance between the reference and the sliced map.
    OneToP(f64),
    /// Max output ∞-norm of the reference channel.
    MaxOutputInfnorm,
    /// Ordering margin between reference and sliced map at the given ε.
    OrderingMargin(f64),
    /// Measured ordering parameter ε̂ between reference and sliced map.
    OrderingEpsilon,
    /// Trace-preservation defect of the sliced map.
    TpDefect,
}

impl MetricSpec {
    pub fn label(&self) -> String {
        match self {
            MetricSpec::OneToP(p) => {
                if p.is_infinite() {
                    "one_to_p(p=inf)".to_string()
                } else if *p == p.floor() {
                    format!("one_to_p(p={})", *p as i64)
                } else {
                    format!("one_to_p(p={p})")
                }
            }
            MetricSpec::MaxOutputInfnorm => "max_output_infnorm".to_string(),
            MetricSpec::OrderingMargin(eps) => format!("ordering_margin(eps={eps})"),
            MetricSpec::OrderingEpsilon => "ordering_epsilon".to_string(),
            MetricSpec::TpDefect => "tp_defect".to_string(),
        }
    }
}

/// Parse a metric spec such as `one_to_p:p=1`, `ordering_margin:eps=0.3`,
/// `max_output_infnorm`, `ordering_epsilon`, `tp_defect`.
pub fn parse_metric_spec(spec: &str) -> Result<MetricSpec, SpecError> {
    let params = split_spec(spec)?;
    match params.name.as_str() {
        "one_to_p" => {
            params.reject_unknown(&["p"])?;
            let raw = params
                .map
                .get("p")
                .ok_or_else(|| SpecError::new("p", "missing for `one_to_p`"))?;
            let p = if raw == "inf" {
                f64::INFINITY
            } else {
                raw.parse::<f64>()
                    .map_err(|_| SpecError::new(format!("p={raw}"), "expected a number or inf"))?
            };
            Ok(MetricSpec::OneToP(p))
        }
        "max_output_infnorm" => {
            params.reject_unknown(&[])?;
            Ok(MetricSpec::MaxOutputInfnorm)
        }
        "ordering_margin" => {
            params.reject_unknown(&["eps"])?;
            Ok(MetricSpec::OrderingMargin(params.f64("eps")?))
        }
        "ordering_epsilon" => {
            params.reject_unknown(&[])?;
            Ok(MetricSpec::OrderingEpsilon)
        }
        "tp_defect" => {
            params.reject_unknown(&[])?;
            Ok(MetricSpec::TpDefect)
        }
        other => Err(SpecError::new(other, "unknown metric")),
    }
}

pub fn parse_sampler(spec: &str) -> Result<Sampler, SpecError> {
    match spec.trim() {
        "haar" => Ok(Sampler::Haar),
        "basis" => Ok(Sampler::Basis),
        "exhaustive" => Ok(Sampler::BasisExhaustive),
        other => Err(SpecError::new(other, "expected haar, basis or exhaustive")),
    }
}

/// Parse a target-state spec at the given dimension: `maxmixed`, `pure:k=K`,
/// or `random:seed=S`.
pub fn parse_sigma_spec(spec: &str, dim: usize) -> Result<CMatrix, SpecError> {
    let params = split_spec(spec)?;
    match params.name.as_str() {
        "maxmixed" => {
            params.reject_unknown(&[])?;
            Ok(CMatrix::identity(dim).scale_re(1.0 / dim as f64))
        }
        "pure" => {
            params.reject_unknown(&["k"])?;
            let k = params.usize("k")?;
            if k >= dim {
                return Err(SpecError::new(
                    format!("k={k}"),
                    format!("basis index out of range for dimension {dim}"),
                ));
            }
            Ok(CVector::basis(dim, k).projector())
        }
        "random" => {
            params.reject_unknown(&["seed"])?;
            let mut rng = SplitMix64::new(params.u64("seed")?);
            Ok(random_density_matrix(dim, &mut rng))
        }
        other => Err(SpecError::new(other, "expected maxmixed, pure or random")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_zoo_families() {
        for spec in [
            "randomizing:d=3",
            "werner:d=4,lambda=0.75",
            "qc:a=4,b=8",
            "cq:a=8,b=4",
            "random:a=3,b=3,e=5,seed=7",
        ] {
            let ch = parse_channel_spec(spec).unwrap();
            assert!(ch.tp_flag().is_exact(), "{spec}");
        }
    }

    #[test]
    fn errors_cite_the_offending_token() {
        let err = parse_channel_spec("werner:d=4,lambda=zebra").unwrap_err();
        assert!(err.token.contains("lambda=zebra"));
        let err = parse_channel_spec("sponge:d=4").unwrap_err();
        assert_eq!(err.token, "sponge");
        let err = parse_channel_spec("randomizing:d=4,extra=1").unwrap_err();
        assert_eq!(err.token, "extra");
        let err = parse_channel_spec("randomizing:d").unwrap_err();
        assert_eq!(err.token, "d");
    }

    #[test]
    fn metric_labels_round_trip() {
        let m = parse_metric_spec("one_to_p:p=1").unwrap();
        assert_eq!(m, MetricSpec::OneToP(1.0));
        assert_eq!(m.label(), "one_to_p(p=1)");
        assert_eq!(
            parse_metric_spec("ordering_margin:eps=0.3").unwrap(),
            MetricSpec::OrderingMargin(0.3)
        );
        assert!(parse_metric_spec("entropy_of_doom").is_err());
    }

    #[test]
    fn sampler_and_sigma_specs() {
        assert_eq!(parse_sampler("haar").unwrap(), Sampler::Haar);
        assert_eq!(parse_sampler("exhaustive").unwrap(), Sampler::BasisExhaustive);
        assert!(parse_sampler("fourier").is_err());
        let sigma = parse_sigma_spec("maxmixed", 4).unwrap();
        assert!((sigma.trace().re - 1.0).abs() < 1e-12);
        assert!(parse_sigma_spec("pure:k=9", 4).is_err());
        let sigma = parse_sigma_spec("random:seed=3", 4).unwrap();
        assert!((sigma.trace().re - 1.0).abs() < 1e-12);
    }
}
