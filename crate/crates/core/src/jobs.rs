//! JSON mirrors of the domain objects: the job-file schema the CLI consumes
//! and the serializable views it emits. Every conversion validates and maps
//! unknown tags to configuration errors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{Poly, ProductKind};
use crate::convolution::{PhiForm, PhiSpec};
use crate::densitysets::DensityFamily;
use crate::shifts::{Direction, WeightKind, WeightSeq};
use crate::spaces::{seq_from_complex, Gamma, Seq, SpaceSpec};
use crate::{Error, Result};

/// Weighting sequence for weighted sup-norm spaces: a named profile or an
/// explicit table.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GammaJson {
    Named(String),
    Explicit(Vec<f64>),
}

impl GammaJson {
    pub fn to_gamma(&self) -> Result<Gamma> {
        match self {
            GammaJson::Explicit(v) => Ok(Gamma::Explicit(v.clone())),
            GammaJson::Named(name) => match name.as_str() {
                "ones" => Ok(Gamma::Ones),
                "odd_doubling" => Ok(Gamma::OddDoubling),
                "abs_plus_one" => Ok(Gamma::AbsPlusOne),
                other => Err(Error::InvalidParameter(format!("unknown gamma profile '{other}'"))),
            },
        }
    }
}

/// Space description: {"kind": ..., "p": ..., "gamma": [...], "Q": ...}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<GammaJson>,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
}

impl SpaceJson {
    pub fn to_spec(&self) -> Result<SpaceSpec> {
        let need_p = || {
            self.p
                .ok_or_else(|| Error::InvalidParameter(format!("space '{}' needs p", self.kind)))
        };
        let need_gamma = || -> Result<Gamma> {
            self.gamma
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter(format!("space '{}' needs gamma", self.kind)))?
                .to_gamma()
        };
        let mut spec = match self.kind.as_str() {
            "lp" => SpaceSpec::lp(need_p()?),
            "c0" => SpaceSpec::c0(),
            "omega" => SpaceSpec::omega(self.q.unwrap_or(30)),
            "entire" => SpaceSpec::entire(self.q.unwrap_or(30)),
            "weighted_c0" => SpaceSpec::weighted_c0(need_gamma()?),
            "bilateral_lp" => SpaceSpec::bilateral_lp(need_p()?),
            "bilateral_c0" => SpaceSpec::bilateral_c0(),
            "bilateral_weighted_c0" => SpaceSpec::bilateral_weighted_c0(need_gamma()?),
            other => {
                return Err(Error::InvalidParameter(format!("unknown space kind '{other}'")));
            }
        };
        if let Some(q) = self.q {
            spec.q_count = q;
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// Weight catalog entry with its parameters and horizon.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<i64>>,
    pub horizon: i64,
}

impl WeightJson {
    pub fn to_weight(&self) -> Result<WeightSeq> {
        let need_param = || {
            self.param
                .ok_or_else(|| Error::InvalidParameter(format!("weight '{}' needs param", self.kind)))
        };
        let kind = match self.kind.as_str() {
            "rolewicz" => WeightKind::Rolewicz(need_param()?),
            "one_plus_lambda_over_n" => WeightKind::OnePlusLambdaOverN(need_param()?),
            "exp_n_alpha" => WeightKind::ExpNAlpha(need_param()?),
            "counterexample_odd" => WeightKind::CounterexampleOdd,
            "mk_weight" => WeightKind::MkWeight(self.blocks.clone().ok_or_else(|| {
                Error::InvalidParameter("mk_weight needs its block list".into())
            })?),
            "bilateral_inverse_example" => WeightKind::BilateralInverseExample,
            "explicit" => WeightKind::Explicit(self.values.clone().ok_or_else(|| {
                Error::InvalidParameter("explicit weight needs values".into())
            })?),
            other => {
                return Err(Error::InvalidParameter(format!("unknown weight kind '{other}'")));
            }
        };
        WeightSeq::new(kind, self.horizon)
    }
}

/// Complex scalar as a two-element [re, im] array.
pub type ComplexJson = [f64; 2];

pub fn complex_from_json(c: &ComplexJson) -> Complex64 {
    Complex64::new(c[0], c[1])
}

/// Dense coefficient list starting at index 0.
pub fn seq_from_json(values: &[ComplexJson], horizon: i64) -> Seq {
    let vals: Vec<Complex64> = values.iter().map(complex_from_json).collect();
    seq_from_complex(&vals, horizon)
}

/// Polynomial term {"alpha": [..], "re": .., "im": ..}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyTermJson {
    pub alpha: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

/// Polynomial {"d": 1, "terms": [...]}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyJson {
    pub d: usize,
    pub terms: Vec<PolyTermJson>,
}

impl PolyJson {
    pub fn to_poly(&self) -> Result<Poly> {
        Poly::new(
            self.d,
            self.terms
                .iter()
                .map(|t| (t.alpha.clone(), Complex64::new(t.re, t.im)))
                .collect(),
        )
    }
}

/// Symbol description {"closed_form": ..., "poly": [...], "taylor_len": K}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhiJson {
    pub closed_form: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<ComplexJson>>,
    pub taylor_len: usize,
}

impl PhiJson {
    pub fn to_phi(&self) -> Result<PhiSpec> {
        let poly = || -> Result<Vec<Complex64>> {
            Ok(self
                .poly
                .as_ref()
                .ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "closed form '{}' needs its polynomial part",
                        self.closed_form
                    ))
                })?
                .iter()
                .map(complex_from_json)
                .collect())
        };
        let form = match self.closed_form.as_str() {
            "half_exp_plus_exp_i_minus_quarter" => PhiForm::HalfExpPlusExpIMinusQuarter,
            "poly_times_exp" => PhiForm::PolyTimesExp(poly()?),
            "poly" => PhiForm::Poly(poly()?),
            other => {
                return Err(Error::InvalidParameter(format!("unknown closed form '{other}'")));
            }
        };
        PhiSpec::new(form, self.taylor_len)
    }
}

pub fn product_from_tag(tag: &str) -> Result<ProductKind> {
    match tag {
        "cauchy" => Ok(ProductKind::Cauchy),
        "coordinatewise" => Ok(ProductKind::Coordinatewise),
        other => Err(Error::InvalidParameter(format!("unknown product '{other}'"))),
    }
}

pub fn direction_from_tag(tag: &str) -> Result<Direction> {
    match tag {
        "backward" => Ok(Direction::Backward),
        "forward" => Ok(Direction::Forward),
        other => Err(Error::InvalidParameter(format!("unknown shift direction '{other}'"))),
    }
}

/// Serializable density family: separation sets, gap parameters, and the
/// C → κ threshold table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyJson {
    pub a: Vec<f64>,
    pub sets: Vec<Vec<i64>>,
    pub horizon: i64,
    pub burn_in: i64,
    /// C (as a decimal string key) → κ.
    pub kappa: std::collections::BTreeMap<String, i64>,
    /// C → whether the scan reached past κ (certificate has content).
    pub kappa_certified: std::collections::BTreeMap<String, bool>,
    pub densities: Vec<f64>,
}

impl FamilyJson {
    pub fn from_family(fam: &DensityFamily) -> FamilyJson {
        let mut kappa = std::collections::BTreeMap::new();
        let mut kappa_certified = std::collections::BTreeMap::new();
        for (c, entry) in &fam.kappa_table {
            kappa.insert(c.to_string(), entry.kappa);
            kappa_certified.insert(c.to_string(), entry.certified);
        }
        FamilyJson {
            a: fam.a.clone(),
            sets: fam.sets.clone(),
            horizon: fam.horizon,
            burn_in: fam.burn_in,
            kappa,
            kappa_certified,
            densities: fam.densities.clone(),
        }
    }

    pub fn to_family(&self) -> Result<DensityFamily> {
        let mut kappa_table = std::collections::BTreeMap::new();
        for (c, &kappa) in &self.kappa {
            let c: i64 = c
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad separation key '{c}'")))?;
            let certified = self.kappa_certified.get(&c.to_string()).copied().unwrap_or(false);
            kappa_table.insert(c, crate::densitysets::KappaEntry { kappa, certified });
        }
        Ok(DensityFamily {
            a: self.a.clone(),
            sets: self.sets.clone(),
            horizon: self.horizon,
            burn_in: self.burn_in,
            kappa_table,
            densities: self.densities.clone(),
        })
    }
}

/// Top-level job file: shared object specs plus subcommand-specific `task`
/// parameters, with the seed always explicit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JobConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<i64>,
    #[serde(default)]
    pub task: serde_json::Value,
}

impl JobConfig {
    pub fn from_path(path: &std::path::Path) -> Result<JobConfig> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(crate::DEFAULT_SEED)
    }

    pub fn space(&self) -> Result<SpaceSpec> {
        self.space
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("job needs a space".into()))?
            .to_spec()
    }

    pub fn weight(&self) -> Result<WeightSeq> {
        self.weight
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("job needs a weight".into()))?
            .to_weight()
    }

    pub fn product(&self) -> Result<ProductKind> {
        product_from_tag(self.product.as_deref().unwrap_or("cauchy"))
    }

    pub fn horizon(&self) -> Result<i64> {
        let h = self
            .horizon
            .or(self.weight.as_ref().map(|w| w.horizon))
            .ok_or_else(|| Error::InvalidParameter("job needs a horizon".into()))?;
        if h < 1 {
            return Err(Error::InvalidParameter("horizon must be ≥ 1".into()));
        }
        Ok(h)
    }

    /// Deserialize the task block into the subcommand's parameter struct.
    pub fn task<T: serde::de::DeserializeOwned>(&self) -> Result<T> {
        Ok(serde_json::from_value(self.task.clone())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn job_file_roundtrip_builds_objects() {
        let text = r#"{
            "seed": 11,
            "space": {"kind": "lp", "p": 1.0},
            "weight": {"kind": "rolewicz", "param": 2.0, "horizon": 64},
            "product": "cauchy",
            "task": {"n": 5}
        }"#;
        let job: JobConfig = serde_json::from_str(text).unwrap();
        assert_eq!(job.seed(), 11);
        let space = job.space().unwrap();
        assert!(!space.is_bilateral());
        let w = job.weight().unwrap();
        assert_eq!(w.horizon, 64);
        assert!(matches!(job.product().unwrap(), ProductKind::Cauchy));
        #[derive(Deserialize)]
        struct T {
            n: i64,
        }
        assert_eq!(job.task::<T>().unwrap().n, 5);
    }

    #[test]
    fn unknown_tags_are_configuration_errors() {
        let bad_space = SpaceJson { kind: "lq".into(), p: None, gamma: None, q: None };
        assert!(matches!(bad_space.to_spec(), Err(Error::InvalidParameter(_))));
        let bad_weight =
            WeightJson { kind: "mystery".into(), param: None, values: None, blocks: None, horizon: 8 };
        assert!(matches!(bad_weight.to_weight(), Err(Error::InvalidParameter(_))));
        assert!(product_from_tag("hadamard").is_err());
        assert!(direction_from_tag("sideways").is_err());
    }

    #[test]
    fn gamma_profiles_parse_by_name_or_table() {
        let named: GammaJson = serde_json::from_str("\"odd_doubling\"").unwrap();
        assert!(matches!(named.to_gamma().unwrap(), Gamma::OddDoubling));
        let table: GammaJson = serde_json::from_str("[1.0, 2.0, 4.0]").unwrap();
        assert!(matches!(table.to_gamma().unwrap(), Gamma::Explicit(v) if v.len() == 3));
    }

    #[test]
    fn phi_and_poly_mirrors_build() {
        let phi: PhiJson = serde_json::from_str(
            r#"{"closed_form": "poly_times_exp", "poly": [[2.0, 0.0], [1.0, 0.0]], "taylor_len": 12}"#,
        )
        .unwrap();
        let spec = phi.to_phi().unwrap();
        assert_eq!(spec.k_eff(), 12);
        let poly: PolyJson = serde_json::from_str(
            r#"{"d": 1, "terms": [{"alpha": [2], "re": 1.0, "im": 0.0}]}"#,
        )
        .unwrap();
        poly.to_poly().unwrap();
        let bad: PhiJson =
            serde_json::from_str(r#"{"closed_form": "exp", "taylor_len": 3}"#).unwrap();
        assert!(bad.to_phi().is_err());
    }

    #[test]
    fn family_mirror_preserves_kappa_table() {
        let fam = crate::densitysets::build_family_far(2, 2_000).unwrap();
        let json = FamilyJson::from_family(&fam);
        assert_eq!(json.sets.len(), 2);
        assert!(!json.kappa.is_empty());
        let back = json.to_family().unwrap();
        assert_eq!(back.sets, fam.sets);
        assert_eq!(back.kappa_table.len(), fam.kappa_table.len());
        for (c, e) in &fam.kappa_table {
            assert_eq!(back.kappa_table[c].kappa, e.kappa);
        }
    }
}
