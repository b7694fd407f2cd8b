//! One-parameter families of rational maps, energy sweeps over the parameter
//! and the smooth versus edge-singular classification of their minima.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conformal::{Orientation, RationalMap, RationalMapSpec, Sign};
use crate::energy::{conformal_energy, lower_bound_prism, scaled_energy, upper_bound_prism};
use crate::error::{Error, Result};
use crate::geometry::Prism;
use crate::invariants::{invariants_of, TopologicalInvariants};
use crate::numerics::{minimize_1d_with, MinimizeOptions, MinimizeResult};

pub const PLACEHOLDER: &str = "$s";

/// The search interval is clipped this far inside `(0, 1)`.
pub const CLIP: f64 = 1e-3;

/// A number or the `"$s"` placeholder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Slot {
    Value(f64),
    Param(Placeholder),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Placeholder;

impl TryFrom<String> for Placeholder {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        if s == PLACEHOLDER {
            Ok(Placeholder)
        } else {
            Err(format!("unknown placeholder '{s}', expected '{PLACEHOLDER}'"))
        }
    }
}

impl From<Placeholder> for String {
    fn from(_: Placeholder) -> String {
        PLACEHOLDER.to_string()
    }
}

impl Slot {
    fn resolve(self, s: f64) -> f64 {
        match self {
            Slot::Value(v) => v,
            Slot::Param(_) => s,
        }
    }

    fn is_param(self) -> bool {
        matches!(self, Slot::Param(_))
    }
}

/// A [`RationalMapSpec`] whose factor positions may be the family parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecTemplate {
    pub epsilon: Sign,
    pub n: i32,
    #[serde(default)]
    pub real: Vec<(Slot, Sign)>,
    #[serde(default)]
    pub imag: Vec<(Slot, Sign)>,
    #[serde(default)]
    pub complex: Vec<(Slot, Slot, Sign)>,
    #[serde(default)]
    pub orientation: Orientation,
}

impl SpecTemplate {
    pub fn instantiate(&self, s: f64) -> RationalMapSpec {
        let mut spec = RationalMapSpec::new(self.epsilon, self.n).with_orientation(self.orientation);
        for &(p, sign) in &self.real {
            spec = spec.with_real(p.resolve(s), sign);
        }
        for &(p, sign) in &self.imag {
            spec = spec.with_imag(p.resolve(s), sign);
        }
        for &(re, im, sign) in &self.complex {
            spec = spec.with_complex(re.resolve(s), im.resolve(s), sign);
        }
        spec
    }

    pub fn is_parametric(&self) -> bool {
        self.real.iter().any(|f| f.0.is_param())
            || self.imag.iter().any(|f| f.0.is_param())
            || self.complex.iter().any(|f| f.0.is_param() || f.1.is_param())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigFamily {
    pub name: String,
    pub template: SpecTemplate,
}

impl ConfigFamily {
    pub fn new(name: impl Into<String>, template: SpecTemplate) -> Result<Self> {
        let fam = ConfigFamily {
            name: name.into(),
            template,
        };
        // every parameter in (0, 1) must give a valid map
        for s in [CLIP, 0.5, 1.0 - CLIP] {
            fam.map_at(s)?;
        }
        Ok(fam)
    }

    pub fn is_parametric(&self) -> bool {
        self.template.is_parametric()
    }

    pub fn spec_at(&self, s: f64) -> RationalMapSpec {
        self.template.instantiate(s)
    }

    pub fn map_at(&self, s: f64) -> Result<RationalMap> {
        RationalMap::new(&self.spec_at(s))
    }
}

const UNWRAPPED_VARIANTS: [(&str, Sign, i32, Orientation); 8] = [
    ("unwrapped", Sign::Plus, 1, Orientation::Conformal),
    ("unwrapped-neg", Sign::Minus, 1, Orientation::Conformal),
    ("unwrapped-inv", Sign::Plus, -1, Orientation::Conformal),
    ("unwrapped-neginv", Sign::Minus, -1, Orientation::Conformal),
    ("unwrapped-conj", Sign::Plus, 1, Orientation::Anticonformal),
    ("unwrapped-neg-conj", Sign::Minus, 1, Orientation::Anticonformal),
    ("unwrapped-inv-conj", Sign::Plus, -1, Orientation::Anticonformal),
    ("unwrapped-neginv-conj", Sign::Minus, -1, Orientation::Anticonformal),
];

/// Names accepted by [`builtin_family`].
pub fn builtin_names() -> Vec<&'static str> {
    let mut names: Vec<&str> = UNWRAPPED_VARIANTS.iter().map(|v| v.0).collect();
    names.push("imag1");
    names
}

/// `imag1` is `w (w² + s²)/(s² w² + 1)`; the eight `unwrapped*` variants are
/// the images of `f(w) = w` under `w -> −w`, `1/w` and `w̄`.
pub fn builtin_family(name: &str) -> Result<ConfigFamily> {
    if name == "imag1" {
        return ConfigFamily::new(
            name,
            SpecTemplate {
                epsilon: Sign::Plus,
                n: 1,
                real: vec![],
                imag: vec![(Slot::Param(Placeholder), Sign::Plus)],
                complex: vec![],
                orientation: Orientation::Conformal,
            },
        );
    }
    let &(_, epsilon, n, orientation) = UNWRAPPED_VARIANTS
        .iter()
        .find(|v| v.0 == name)
        .ok_or_else(|| Error::UnknownFamily(name.to_string()))?;
    ConfigFamily::new(
        name,
        SpecTemplate {
            epsilon,
            n,
            real: vec![],
            imag: vec![],
            complex: vec![],
            orientation,
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Ok,
    /// Quadrature budget exhausted; the energy is the best estimate.
    Accuracy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// `None` for a family without a parameter.
    pub s: Option<f64>,
    pub energy: f64,
    pub energy_err: f64,
    pub scaled: f64,
    pub lower: f64,
    pub upper: f64,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub family: String,
    pub invariants: TopologicalInvariants,
    pub rows: Vec<SweepRow>,
}

fn energy_row(prism: &Prism, map: &RationalMap, k: f64, tol: f64, s: Option<f64>) -> Result<SweepRow> {
    let omega0 = invariants_of(map).omega0;
    let (energy, energy_err, status) = match conformal_energy(prism, map, k, tol) {
        Ok(r) => (r.value, r.error_estimate, RowStatus::Ok),
        Err(Error::Accuracy { value, error, .. }) => (value, error, RowStatus::Accuracy),
        Err(e) => return Err(e),
    };
    Ok(SweepRow {
        s,
        energy,
        energy_err,
        scaled: scaled_energy(energy, prism),
        lower: lower_bound_prism(prism, omega0, k),
        upper: upper_bound_prism(prism, omega0, k),
        status,
    })
}

/// Energies of `family` at each parameter value. A family without a
/// parameter yields a single row. Rows keep the order of `s_values`.
pub fn sweep_energy(
    family: &ConfigFamily,
    prism: &Prism,
    k: f64,
    s_values: &[f64],
    tol: f64,
) -> Result<Sweep> {
    if !family.is_parametric() {
        let map = family.map_at(0.5)?;
        return Ok(Sweep {
            family: family.name.clone(),
            invariants: invariants_of(&map),
            rows: vec![energy_row(prism, &map, k, tol, None)?],
        });
    }
    if let Some(&bad) = s_values.iter().find(|&&s| !(s > 0.0 && s < 1.0)) {
        return Err(Error::InvalidInput(format!(
            "family parameter must lie in (0, 1), got {bad}"
        )));
    }
    let Some(&first) = s_values.first() else {
        return Err(Error::InvalidInput("no parameter values given".into()));
    };
    let invariants = invariants_of(&family.map_at(first)?);
    let rows = s_values
        .par_iter()
        .map(|&s| energy_row(prism, &family.map_at(s)?, k, tol, Some(s)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep {
        family: family.name.clone(),
        invariants,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// Minimum at an interior parameter value.
    Smooth,
    /// Energy keeps decreasing into the coalescence limit `s -> 1`.
    EdgeSingular,
    /// Energy keeps decreasing as `s -> 0`, where the factor merges with the
    /// zero or pole at the origin.
    LowerLimit,
    /// The family has no parameter.
    Parameterless,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyMinimum {
    #[serde(flatten)]
    pub result: MinimizeResult,
    pub classification: Classification,
}

/// Minimizes the scaled energy over `s ∈ [10⁻³, 1 − 10⁻³]`; `tol` is the
/// width of the final parameter bracket.
pub fn minimize_family(
    family: &ConfigFamily,
    prism: &Prism,
    k: f64,
    tol: f64,
) -> Result<FamilyMinimum> {
    minimize_family_with(
        family,
        prism,
        k,
        &MinimizeOptions {
            tol,
            ..MinimizeOptions::default()
        },
    )
}

pub fn minimize_family_with(
    family: &ConfigFamily,
    prism: &Prism,
    k: f64,
    opts: &MinimizeOptions,
) -> Result<FamilyMinimum> {
    if !family.is_parametric() {
        let map = family.map_at(0.5)?;
        let e = conformal_energy(prism, &map, k, energy_tol(prism, &map, k))?;
        let v = scaled_energy(e.value, prism);
        return Ok(FamilyMinimum {
            result: MinimizeResult {
                argmin: 0.5,
                min_value: v,
                at_boundary: false,
                bracket: (0.5, 0.5),
                evaluations: 1,
            },
            classification: Classification::Parameterless,
        });
    }
    let (lo, hi) = (CLIP, 1.0 - CLIP);
    let objective = |s: f64| -> Result<f64> {
        let map = family.map_at(s)?;
        let e = conformal_energy(prism, &map, k, energy_tol(prism, &map, k))?;
        Ok(scaled_energy(e.value, prism))
    };
    let result = minimize_1d_with(objective, (lo, hi), opts)?;
    let classification = if !result.at_boundary {
        Classification::Smooth
    } else if result.argmin == hi {
        Classification::EdgeSingular
    } else {
        Classification::LowerLimit
    };
    Ok(FamilyMinimum {
        result,
        classification,
    })
}

/// Quadrature tolerance for energies compared against each other.
fn energy_tol(prism: &Prism, map: &RationalMap, k: f64) -> f64 {
    1e-9 * upper_bound_prism(prism, invariants_of(map).omega0, k)
}
