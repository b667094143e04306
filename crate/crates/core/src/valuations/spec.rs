use serde::{Deserialize, Serialize};

use super::matroid::{graphic_rank_eval, rank2_eval, GraphicMatroid, Rank2Matroid};
use crate::error::{check_dim, Error, Result};
use crate::gf2::BitVector;

/// Arity cap for any spec, so a hostile `n` cannot force huge allocations.
pub const MAX_SPEC_N: usize = 1 << 24;

/// Largest arity for which [`FunctionSpec::truth_table`] is produced.
pub const MAX_TABLE_N: usize = 24;

/// Linear threshold function `x ↦ [Σ w_i x_i ≥ θ]` with claimed margin `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ltf {
    pub theta: f64,
    pub margin: f64,
    pub weights: Vec<f64>,
}

impl Ltf {
    pub fn new(theta: f64, margin: f64, weights: Vec<f64>) -> Result<Self> {
        if !theta.is_finite() || !margin.is_finite() {
            return Err(Error::invalid("theta and m must be finite"));
        }
        check_weights("w", &weights)?;
        Ok(Ltf {
            theta,
            margin,
            weights,
        })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weighted_sum(&self, x: &BitVector) -> f64 {
        x.iter_ones().map(|i| self.weights[i]).sum()
    }

    /// Heaviside convention: a sum exactly at `θ` maps to 1.
    pub fn eval(&self, x: &BitVector) -> Result<bool> {
        check_dim(self.n(), x.len())?;
        Ok(self.weighted_sum(x) >= self.theta)
    }
}

/// One disjunction inside an [`LtfOr`]: `weight · OR(x_j : j ∈ indices)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrTerm {
    pub weight: f64,
    pub indices: Vec<usize>,
}

/// Threshold of weighted disjunctions.
#[derive(Clone, Debug, PartialEq)]
pub struct LtfOr {
    n: usize,
    pub theta: f64,
    pub margin: f64,
    terms: Vec<OrTerm>,
    masks: Vec<BitVector>,
}

impl LtfOr {
    pub fn new(n: usize, theta: f64, margin: f64, terms: Vec<OrTerm>) -> Result<Self> {
        if !theta.is_finite() || !margin.is_finite() {
            return Err(Error::invalid("theta and m must be finite"));
        }
        let weights: Vec<f64> = terms.iter().map(|t| t.weight).collect();
        check_weights("term weight", &weights)?;
        let masks = terms
            .iter()
            .map(|t| BitVector::from_indices(n, &t.indices))
            .collect::<Result<Vec<_>>>()?;
        Ok(LtfOr {
            n,
            theta,
            margin,
            terms,
            masks,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[OrTerm] {
        &self.terms
    }

    pub(crate) fn masks(&self) -> &[BitVector] {
        &self.masks
    }

    pub fn eval(&self, x: &BitVector) -> Result<bool> {
        check_dim(self.n, x.len())?;
        let sum: f64 = self
            .terms
            .iter()
            .zip(&self.masks)
            .filter(|(_, m)| m.intersects(x))
            .map(|(t, _)| t.weight)
            .sum();
        Ok(sum >= self.theta)
    }
}

/// Weighted coverage: `f(x) = Σ_i u_i · [∃ j : x_j = 1, i ∈ A_j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Coverage {
    universe_weights: Vec<f64>,
    sets: Vec<Vec<usize>>,
    // per universe element i, the mask T_i = {j : i ∈ A_j} over [n]
    element_masks: Vec<BitVector>,
}

impl Coverage {
    pub fn new(universe_weights: Vec<f64>, sets: Vec<Vec<usize>>) -> Result<Self> {
        check_weights("universe weight", &universe_weights)?;
        let m = universe_weights.len();
        let n = sets.len();
        let mut element_masks = vec![BitVector::zeros(n); m];
        for (j, set) in sets.iter().enumerate() {
            for &i in set {
                if i >= m {
                    return Err(Error::invalid(format!(
                        "set {j} lists universe element {i} >= {m}"
                    )));
                }
                element_masks[i].set(j, true);
            }
        }
        Ok(Coverage {
            universe_weights,
            sets,
            element_masks,
        })
    }

    pub fn n(&self) -> usize {
        self.sets.len()
    }

    pub fn universe_weights(&self) -> &[f64] {
        &self.universe_weights
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn element_masks(&self) -> &[BitVector] {
        &self.element_masks
    }

    /// Total universe weight at most 1, the regime where `‖f̂‖₁ ≤ 2`.
    pub fn unit_mass(&self) -> bool {
        self.universe_weights.iter().sum::<f64>() <= 1.0 + 1e-12
    }

    pub fn eval(&self, x: &BitVector) -> Result<f64> {
        check_dim(self.n(), x.len())?;
        Ok(self
            .universe_weights
            .iter()
            .zip(&self.element_masks)
            .filter(|(_, t)| t.intersects(x))
            .map(|(w, _)| w)
            .sum())
    }
}

/// Symbolic description of a set function on `F2^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecWire", into = "SpecWire")]
pub enum FunctionSpec {
    Additive { w: Vec<f64> },
    BudgetAdditive { b: f64, w: Vec<f64> },
    HockeyStick { n: usize, alpha: f64 },
    Coverage(Coverage),
    Ltf(Ltf),
    LtfOr(LtfOr),
    Rank2Matroid { matroid: Rank2Matroid, scaled: bool },
    GraphicMatroid { matroid: GraphicMatroid, scaled: bool },
    Table { n: usize, values: Vec<f64> },
}

impl FunctionSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn n(&self) -> usize {
        match self {
            FunctionSpec::Additive { w } | FunctionSpec::BudgetAdditive { w, .. } => w.len(),
            FunctionSpec::HockeyStick { n, .. } | FunctionSpec::Table { n, .. } => *n,
            FunctionSpec::Coverage(c) => c.n(),
            FunctionSpec::Ltf(l) => l.n(),
            FunctionSpec::LtfOr(l) => l.n(),
            FunctionSpec::Rank2Matroid { matroid, .. } => matroid.n(),
            FunctionSpec::GraphicMatroid { matroid, .. } => matroid.n(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            FunctionSpec::Additive { .. } => "additive",
            FunctionSpec::BudgetAdditive { .. } => "budget_additive",
            FunctionSpec::HockeyStick { .. } => "hockey_stick",
            FunctionSpec::Coverage(_) => "coverage",
            FunctionSpec::Ltf(_) => "ltf",
            FunctionSpec::LtfOr(_) => "ltf_or",
            FunctionSpec::Rank2Matroid { .. } => "rank2_matroid",
            FunctionSpec::GraphicMatroid { .. } => "graphic_matroid",
            FunctionSpec::Table { .. } => "table",
        }
    }

    /// Specs whose values form a finite set, so an error rate makes sense.
    /// Finitely valued with exact comparisons meaningful: the threshold and
    /// matroid kinds, and tables whose entries are all integers.
    pub fn is_discrete(&self) -> bool {
        match self {
            FunctionSpec::Ltf(_)
            | FunctionSpec::LtfOr(_)
            | FunctionSpec::Rank2Matroid { .. }
            | FunctionSpec::GraphicMatroid { .. } => true,
            FunctionSpec::Table { values, .. } => values.iter().all(|v| v.fract() == 0.0),
            _ => false,
        }
    }

    pub fn eval(&self, x: &BitVector) -> Result<f64> {
        check_dim(self.n(), x.len())?;
        let additive = |w: &[f64]| x.iter_ones().map(|i| w[i]).sum::<f64>();
        Ok(match self {
            FunctionSpec::Additive { w } => additive(w),
            FunctionSpec::BudgetAdditive { b, w } => b.min(additive(w)),
            FunctionSpec::HockeyStick { n, alpha } => {
                alpha.min(2.0 * alpha * x.count_ones() as f64 / *n as f64)
            }
            FunctionSpec::Coverage(c) => c.eval(x)?,
            FunctionSpec::Ltf(l) => l.eval(x)? as u8 as f64,
            FunctionSpec::LtfOr(l) => l.eval(x)? as u8 as f64,
            FunctionSpec::Rank2Matroid { matroid, scaled } => {
                scale(rank2_eval(matroid, x)? as usize, matroid.full_rank(), *scaled)
            }
            FunctionSpec::GraphicMatroid { matroid, scaled } => {
                scale(graphic_rank_eval(matroid, x)?, matroid.full_rank(), *scaled)
            }
            FunctionSpec::Table { values, .. } => values[x.to_u64() as usize],
        })
    }

    /// All `2^n` values, index bit `i` = coordinate `i`.
    pub fn truth_table(&self) -> Result<Vec<f64>> {
        let n = self.n();
        if n > MAX_TABLE_N {
            return Err(Error::capacity("truth table n", n as u64, MAX_TABLE_N as u64));
        }
        if let FunctionSpec::Table { values, .. } = self {
            return Ok(values.clone());
        }
        (0..1u64 << n)
            .map(|v| self.eval(&BitVector::from_u64(n, v)))
            .collect()
    }
}

fn scale(rank: usize, full: usize, scaled: bool) -> f64 {
    if scaled && full > 0 {
        rank as f64 / full as f64
    } else {
        rank as f64
    }
}

fn check_weights(what: &str, w: &[f64]) -> Result<()> {
    match w.iter().position(|v| !v.is_finite() || *v < 0.0) {
        Some(i) => Err(Error::invalid(format!(
            "{what}[{i}] = {} must be finite and nonnegative",
            w[i]
        ))),
        None => Ok(()),
    }
}

fn check_n(kind: &str, expected: usize, found: usize, what: &str) -> Result<()> {
    if expected != found {
        return Err(Error::invalid(format!(
            "{kind}: n = {expected} but {what} has length {found}"
        )));
    }
    Ok(())
}

// Wire representation: `{"kind": ..., "n": ..., params...}`.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum SpecWire {
    Additive {
        n: usize,
        w: Vec<f64>,
    },
    BudgetAdditive {
        n: usize,
        b: Option<f64>,
        w: Vec<f64>,
    },
    HockeyStick {
        n: usize,
        alpha: f64,
    },
    Coverage {
        n: usize,
        universe_weights: Vec<f64>,
        sets: Vec<Vec<usize>>,
    },
    Ltf {
        n: usize,
        theta: f64,
        m: f64,
        w: Vec<f64>,
    },
    LtfOr {
        n: usize,
        theta: f64,
        m: f64,
        terms: Vec<OrTerm>,
    },
    #[serde(rename = "rank2_matroid")]
    Rank2Matroid {
        n: usize,
        cliques: Vec<Vec<usize>>,
        #[serde(default)]
        scaled: bool,
    },
    GraphicMatroid {
        n: usize,
        vertices: usize,
        edges: Vec<(usize, usize)>,
        #[serde(default)]
        scaled: bool,
    },
    Table {
        n: usize,
        values: Vec<f64>,
    },
}

impl SpecWire {
    fn n(&self) -> usize {
        match self {
            SpecWire::Additive { n, .. }
            | SpecWire::BudgetAdditive { n, .. }
            | SpecWire::HockeyStick { n, .. }
            | SpecWire::Coverage { n, .. }
            | SpecWire::Ltf { n, .. }
            | SpecWire::LtfOr { n, .. }
            | SpecWire::Rank2Matroid { n, .. }
            | SpecWire::GraphicMatroid { n, .. }
            | SpecWire::Table { n, .. } => *n,
        }
    }
}

impl TryFrom<SpecWire> for FunctionSpec {
    type Error = Error;

    fn try_from(w: SpecWire) -> Result<Self> {
        let n = w.n();
        if n > MAX_SPEC_N {
            return Err(Error::capacity("spec n", n as u64, MAX_SPEC_N as u64));
        }
        Ok(match w {
            SpecWire::Additive { w, .. } => {
                check_n("additive", n, w.len(), "w")?;
                check_weights("w", &w)?;
                FunctionSpec::Additive { w }
            }
            SpecWire::BudgetAdditive { b, w, .. } => {
                check_n("budget_additive", n, w.len(), "w")?;
                check_weights("w", &w)?;
                // null budget = unbounded
                let b = b.unwrap_or(f64::INFINITY);
                if b.is_nan() {
                    return Err(Error::invalid("budget_additive: b is NaN"));
                }
                FunctionSpec::BudgetAdditive { b, w }
            }
            SpecWire::HockeyStick { alpha, .. } => {
                if n == 0 || !alpha.is_finite() {
                    return Err(Error::invalid("hockey_stick: needs n >= 1 and finite alpha"));
                }
                FunctionSpec::HockeyStick { n, alpha }
            }
            SpecWire::Coverage {
                universe_weights,
                sets,
                ..
            } => {
                check_n("coverage", n, sets.len(), "sets")?;
                FunctionSpec::Coverage(Coverage::new(universe_weights, sets)?)
            }
            SpecWire::Ltf { theta, m, w, .. } => {
                check_n("ltf", n, w.len(), "w")?;
                FunctionSpec::Ltf(Ltf::new(theta, m, w)?)
            }
            SpecWire::LtfOr { theta, m, terms, .. } => {
                FunctionSpec::LtfOr(LtfOr::new(n, theta, m, terms)?)
            }
            SpecWire::Rank2Matroid { cliques, scaled, .. } => FunctionSpec::Rank2Matroid {
                matroid: Rank2Matroid::new(n, cliques)?,
                scaled,
            },
            SpecWire::GraphicMatroid {
                vertices,
                edges,
                scaled,
                ..
            } => {
                check_n("graphic_matroid", n, edges.len(), "edges")?;
                if vertices > MAX_SPEC_N {
                    return Err(Error::capacity("graph vertices", vertices as u64, MAX_SPEC_N as u64));
                }
                FunctionSpec::GraphicMatroid {
                    matroid: GraphicMatroid::new(vertices, edges)?,
                    scaled,
                }
            }
            SpecWire::Table { values, .. } => {
                if n > MAX_TABLE_N {
                    return Err(Error::capacity("table n", n as u64, MAX_TABLE_N as u64));
                }
                check_n("table", 1 << n, values.len(), "values (expected 2^n)")?;
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::invalid("table: values must be finite"));
                }
                FunctionSpec::Table { n, values }
            }
        })
    }
}

impl From<FunctionSpec> for SpecWire {
    fn from(s: FunctionSpec) -> Self {
        let n = s.n();
        match s {
            FunctionSpec::Additive { w } => SpecWire::Additive { n, w },
            FunctionSpec::BudgetAdditive { b, w } => SpecWire::BudgetAdditive {
                n,
                b: b.is_finite().then_some(b),
                w,
            },
            FunctionSpec::HockeyStick { n, alpha } => SpecWire::HockeyStick { n, alpha },
            FunctionSpec::Coverage(c) => SpecWire::Coverage {
                n,
                universe_weights: c.universe_weights,
                sets: c.sets,
            },
            FunctionSpec::Ltf(l) => SpecWire::Ltf {
                n,
                theta: l.theta,
                m: l.margin,
                w: l.weights,
            },
            FunctionSpec::LtfOr(l) => SpecWire::LtfOr {
                n,
                theta: l.theta,
                m: l.margin,
                terms: l.terms,
            },
            FunctionSpec::Rank2Matroid { matroid, scaled } => SpecWire::Rank2Matroid {
                n,
                cliques: matroid.cliques().to_vec(),
                scaled,
            },
            FunctionSpec::GraphicMatroid { matroid, scaled } => SpecWire::GraphicMatroid {
                n,
                vertices: matroid.vertices(),
                edges: matroid.edges().to_vec(),
                scaled,
            },
            FunctionSpec::Table { n, values } => SpecWire::Table { n, values },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        BitVector::from_bit_string(s).unwrap()
    }

    #[test]
    fn eval_examples() {
        let add = FunctionSpec::Additive { w: vec![1.0, 2.0] };
        assert_eq!(add.eval(&bv("11")).unwrap(), 3.0);
        let hs = FunctionSpec::HockeyStick { n: 3, alpha: 1.0 };
        assert_eq!(hs.eval(&bv("110")).unwrap(), 1.0);
        assert!((hs.eval(&bv("100")).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let cov = FunctionSpec::Coverage(Coverage::new(vec![1.0, 1.0], vec![vec![0], vec![0, 1]]).unwrap());
        assert_eq!(cov.eval(&bv("10")).unwrap(), 1.0);
        assert_eq!(cov.eval(&bv("01")).unwrap(), 2.0);
        assert_eq!(cov.eval(&bv("11")).unwrap(), 2.0);
        assert!(add.eval(&bv("1")).is_err());
    }

    #[test]
    fn budget_and_hockey_agree() {
        let n = 7;
        let hs = FunctionSpec::HockeyStick { n, alpha: 2.0 };
        let ba = FunctionSpec::BudgetAdditive {
            b: 2.0,
            w: vec![4.0 / n as f64; n],
        };
        assert_eq!(hs.truth_table().unwrap(), ba.truth_table().unwrap());
    }

    #[test]
    fn json_round_trip_all_kinds() {
        let docs = [
            r#"{"kind":"additive","n":2,"w":[1,2]}"#,
            r#"{"kind":"budget_additive","n":2,"b":1.5,"w":[1,2]}"#,
            r#"{"kind":"budget_additive","n":1,"b":null,"w":[1]}"#,
            r#"{"kind":"hockey_stick","n":5,"alpha":1}"#,
            r#"{"kind":"coverage","n":2,"universe_weights":[0.5,0.5],"sets":[[0],[0,1]]}"#,
            r#"{"kind":"ltf","n":2,"theta":3,"m":1,"w":[4,4]}"#,
            r#"{"kind":"ltf_or","n":4,"theta":1.5,"m":0.5,"terms":[{"weight":1,"indices":[0,1]},{"weight":1,"indices":[2,3]}]}"#,
            r#"{"kind":"rank2_matroid","n":3,"cliques":[[0,1],[2]],"scaled":true}"#,
            r#"{"kind":"graphic_matroid","n":3,"vertices":3,"edges":[[0,1],[1,2],[0,2]]}"#,
            r#"{"kind":"table","n":1,"values":[0.5,-1]}"#,
        ];
        for doc in docs {
            let spec = FunctionSpec::from_json(doc).unwrap();
            let back = FunctionSpec::from_json(&spec.to_json()).unwrap();
            assert_eq!(spec, back, "{doc}");
            assert_eq!(spec.truth_table().unwrap(), back.truth_table().unwrap());
        }
    }

    #[test]
    fn json_rejects_bad_documents() {
        let bad = [
            r#"{"kind":"additive","n":3,"w":[1,2]}"#,
            r#"{"kind":"additive","n":1,"w":[-1]}"#,
            r#"{"kind":"additive","n":1,"w":[1],"extra":0}"#,
            r#"{"kind":"mystery","n":1}"#,
            r#"{"kind":"coverage","n":1,"universe_weights":[1],"sets":[[3]]}"#,
            r#"{"kind":"rank2_matroid","n":3,"cliques":[[0,1]]}"#,
            r#"{"kind":"graphic_matroid","n":2,"vertices":2,"edges":[[0,1],[1,0]]}"#,
            r#"{"kind":"table","n":2,"values":[1,2,3]}"#,
            r#"{"kind":"ltf_or","n":2,"theta":1,"m":0.5,"terms":[{"weight":1,"indices":[5]}]}"#,
            r#"{"kind":"hockey_stick","n":99999999999,"alpha":1}"#,
        ];
        for doc in bad {
            assert!(FunctionSpec::from_json(doc).is_err(), "{doc}");
        }
    }

    #[test]
    fn scaled_matroid_values() {
        let spec = FunctionSpec::from_json(
            r#"{"kind":"graphic_matroid","n":3,"vertices":4,"edges":[[0,1],[1,2],[2,3]],"scaled":true}"#,
        )
        .unwrap();
        assert_eq!(spec.eval(&bv("110")).unwrap(), 2.0 / 3.0);
        assert!(spec.is_discrete());
    }

    #[test]
    fn ltf_or_eval() {
        let l = LtfOr::new(
            4,
            1.5,
            0.5,
            vec![
                OrTerm { weight: 1.0, indices: vec![0, 1] },
                OrTerm { weight: 1.0, indices: vec![2, 3] },
            ],
        )
        .unwrap();
        assert!(!l.eval(&bv("1100")).unwrap());
        assert!(l.eval(&bv("0110")).unwrap());
    }
}
