use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// How the pairs of a sweep were chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

/// Outcome of a stretch sweep.
///
/// `max_ratio` is `(distance - additive_slack) / metric_distance` maximized
/// over the checked pairs and is attained by `argmax`.
#[derive(Debug, Clone, PartialEq)]
pub struct StretchReport {
    pub max_ratio: f64,
    pub argmax: Option<(usize, usize)>,
    pub additive_slack: f64,
    pub pairs_checked: u64,
    pub sampling: Sampling,
    pub bound: Option<f64>,
    pub tolerance: f64,
}

impl StretchReport {
    pub fn empty(additive_slack: f64, sampling: Sampling) -> Self {
        StretchReport {
            max_ratio: f64::NEG_INFINITY,
            argmax: None,
            additive_slack,
            pairs_checked: 0,
            sampling,
            bound: None,
            tolerance: 0.0,
        }
    }

    /// Records one pair; larger ratios win, ties keep the earlier pair.
    #[inline]
    pub fn observe(&mut self, ratio: f64, pair: (usize, usize)) {
        self.pairs_checked += 1;
        if ratio > self.max_ratio || self.argmax.is_none() {
            self.max_ratio = ratio;
            self.argmax = Some(pair);
        }
    }

    /// Max-reduction of two partial reports over disjoint pair ranges; `self`
    /// covers the earlier range.
    pub fn merge(mut self, other: StretchReport) -> StretchReport {
        self.pairs_checked += other.pairs_checked;
        if other.argmax.is_some() && (self.argmax.is_none() || other.max_ratio > self.max_ratio) {
            self.max_ratio = other.max_ratio;
            self.argmax = other.argmax;
        }
        self
    }

    pub fn with_bound(mut self, bound: f64, tolerance: f64) -> Self {
        self.bound = Some(bound);
        self.tolerance = tolerance;
        self
    }

    /// True when no bound is set or `max_ratio <= bound + tolerance`.
    pub fn pass(&self) -> bool {
        match self.bound {
            Some(b) => self.max_ratio <= b + self.tolerance,
            None => self.max_ratio.is_finite() || self.argmax.is_none(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ReportDoc {
    #[serde(serialize_with = "ser_ratio", deserialize_with = "de_ratio")]
    max_ratio: f64,
    argmax: Option<[usize; 2]>,
    pairs_checked: u64,
    mode: String,
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sample_size: Option<u64>,
    #[serde(default)]
    additive_slack: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bound: Option<f64>,
    #[serde(default)]
    tolerance: f64,
    pass: bool,
}

// JSON has no infinity; a disconnected pair is written as the string "inf".
fn ser_ratio<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*v)
    }
}

fn de_ratio<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Num(v) => Ok(v),
        Raw::Text(t) if t == "inf" => Ok(f64::INFINITY),
        Raw::Text(t) if t == "-inf" => Ok(f64::NEG_INFINITY),
        Raw::Text(t) => Err(serde::de::Error::custom(format!("bad ratio {t:?}"))),
    }
}

impl Serialize for StretchReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (mode, seed, sample_size) = match self.sampling {
            Sampling::Exhaustive => ("exhaustive", None, None),
            Sampling::Sample { count, seed } => ("sample", Some(seed), Some(count)),
        };
        ReportDoc {
            max_ratio: self.max_ratio,
            argmax: self.argmax.map(|(p, q)| [p, q]),
            pairs_checked: self.pairs_checked,
            mode: mode.to_string(),
            seed,
            sample_size,
            additive_slack: self.additive_slack,
            bound: self.bound,
            tolerance: self.tolerance,
            pass: self.pass(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StretchReport {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = ReportDoc::deserialize(d)?;
        let sampling = match doc.mode.as_str() {
            "exhaustive" => Sampling::Exhaustive,
            "sample" => Sampling::Sample {
                count: doc.sample_size.unwrap_or(doc.pairs_checked),
                seed: doc.seed.unwrap_or(0),
            },
            other => return Err(serde::de::Error::custom(format!("unknown mode {other:?}"))),
        };
        Ok(StretchReport {
            max_ratio: doc.max_ratio,
            argmax: doc.argmax.map(|[p, q]| (p, q)),
            additive_slack: doc.additive_slack,
            pairs_checked: doc.pairs_checked,
            sampling,
            bound: doc.bound,
            tolerance: doc.tolerance,
        })
    }
}
