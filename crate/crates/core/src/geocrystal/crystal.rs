use serde::{Deserialize, Serialize};

use crate::cartan::{CartanData, TorusData};
use crate::error::{Error, Result};
use crate::ratfun::{parse_ratfun, RatFun, Rational, VarContext};

/// A decorated geometric crystal presented in chart coordinates.
///
/// `e_action[i-1]` lists the chart coordinates of `e_i^d(x)` as functions
/// of the chart variables and one extra variable `d` (see [`Self::ext`]).
#[derive(Clone, Debug)]
pub struct GeometricCrystal {
    name: String,
    cartan: CartanData,
    torus: TorusData,
    chart: VarContext,
    ext: VarContext,
    gamma: Vec<RatFun>,
    f: RatFun,
    phi: Vec<RatFun>,
    eps: Vec<RatFun>,
    e_action: Vec<Vec<RatFun>>,
    trivial_action: Vec<bool>,
}

/// The action variable appended to a chart.
pub fn action_context(chart: &VarContext) -> VarContext {
    let d = chart.fresh_names("d", 1);
    chart.extend(&d).expect("fresh name")
}

impl GeometricCrystal {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        torus: TorusData,
        chart: VarContext,
        gamma: Vec<RatFun>,
        f: RatFun,
        phi: Vec<RatFun>,
        eps: Vec<RatFun>,
        e_action: Vec<Vec<RatFun>>,
        trivial_action: Vec<bool>,
    ) -> Result<Self> {
        let cartan = torus.cartan()?;
        let r = cartan.rank();
        let ext = action_context(&chart);
        if gamma.len() != torus.dim() {
            return Err(Error::InvalidArgument(format!(
                "γ has {} coordinates, torus has {}",
                gamma.len(),
                torus.dim()
            )));
        }
        if phi.len() != r || eps.len() != r || e_action.len() != r || trivial_action.len() != r {
            return Err(Error::InvalidArgument(format!(
                "expected data for {r} indices"
            )));
        }
        for g in gamma
            .iter()
            .chain(&phi)
            .chain(&eps)
            .chain(std::iter::once(&f))
        {
            chart.check_same(g.ctx())?;
        }
        for e in &e_action {
            if e.len() != chart.len() {
                return Err(Error::InvalidArgument(
                    "e-action must give every chart coordinate".into(),
                ));
            }
            for g in e {
                ext.check_same(g.ctx())?;
            }
        }
        Ok(GeometricCrystal {
            name: name.into(),
            cartan,
            torus,
            chart,
            ext,
            gamma,
            f,
            phi,
            eps,
            e_action,
            trivial_action,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    pub fn torus(&self) -> &TorusData {
        &self.torus
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn chart(&self) -> &VarContext {
        &self.chart
    }

    /// Chart variables followed by the action variable.
    pub fn ext(&self) -> &VarContext {
        &self.ext
    }

    pub fn gamma(&self) -> &[RatFun] {
        &self.gamma
    }

    pub fn f(&self) -> &RatFun {
        &self.f
    }

    pub fn phi(&self, i: usize) -> &RatFun {
        &self.phi[i - 1]
    }

    pub fn eps(&self, i: usize) -> &RatFun {
        &self.eps[i - 1]
    }

    pub fn e_action(&self, i: usize) -> &[RatFun] {
        &self.e_action[i - 1]
    }

    pub fn trivial_action(&self, i: usize) -> bool {
        self.trivial_action[i - 1]
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.rank() {
            return Err(Error::InvalidArgument(format!(
                "index {i} outside 1..={}",
                self.rank()
            )));
        }
        Ok(())
    }

    /// Chart variables as functions in `target`, which must start with the chart.
    pub fn chart_vars_in(&self, target: &VarContext) -> Vec<RatFun> {
        (0..self.chart.len())
            .map(|k| RatFun::var(target, k))
            .collect()
    }

    /// `f₀ = f − 1/φ_i − 1/ε_i`.
    pub fn f0(&self, i: usize) -> Result<RatFun> {
        Ok(self.f.sub(&self.phi(i).inv()?).sub(&self.eps(i).inv()?))
    }

    /// Replaces `φ_i`, e.g. to build a negative control.
    pub fn with_phi(mut self, i: usize, phi: RatFun) -> Self {
        self.phi[i - 1] = phi;
        self
    }

    pub fn with_eps(mut self, i: usize, eps: RatFun) -> Self {
        self.eps[i - 1] = eps;
        self
    }

    pub fn with_f(mut self, f: RatFun) -> Self {
        self.f = f;
        self
    }

    pub fn with_e_action(mut self, i: usize, e: Vec<RatFun>) -> Self {
        self.e_action[i - 1] = e;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// `e_i^c(x)` for a symbolic point `x` and parameter `c` in a common context.
    pub fn e_compose(&self, i: usize, c: &RatFun, x: &[RatFun]) -> Result<Vec<RatFun>> {
        self.check_index(i)?;
        if x.len() != self.chart.len() {
            return Err(Error::InvalidArgument(
                "point has the wrong dimension".into(),
            ));
        }
        if self.trivial_action(i) {
            return Ok(x.to_vec());
        }
        let mut images = x.to_vec();
        images.push(c.clone());
        self.e_action(i)
            .iter()
            .map(|g| g.substitute(&images))
            .collect()
    }

    /// `e_i^c(x)` at a rational point.
    pub fn e_compose_numeric(
        &self,
        i: usize,
        c: &Rational,
        x: &[Rational],
    ) -> Result<Vec<Rational>> {
        self.check_index(i)?;
        if self.trivial_action(i) {
            return Ok(x.to_vec());
        }
        let mut p = x.to_vec();
        p.push(c.clone());
        self.e_action(i).iter().map(|g| g.evaluate(&p)).collect()
    }

    /// Applies `e_{i_1}^{c_1} ⋯ e_{i_k}^{c_k}` to `x`, rightmost factor first.
    pub fn e_sequence(&self, seq: &[(usize, RatFun)], x: &[RatFun]) -> Result<Vec<RatFun>> {
        let mut y = x.to_vec();
        for (i, c) in seq.iter().rev() {
            y = self.e_compose(*i, c, &y)?;
        }
        Ok(y)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&CrystalJson::from(self))?)
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let doc: CrystalJson = serde_json::from_str(src)?;
        doc.into_crystal()
    }
}

pub const SCHEMA_VERSION: u32 = 1;

/// Serialized form; every function is a string in the shared expression syntax.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrystalJson {
    pub schema_version: u32,
    pub name: String,
    pub chart: Vec<String>,
    pub action_variable: String,
    pub torus: TorusData,
    pub cartan: Vec<Vec<i32>>,
    pub gamma: Vec<String>,
    pub f: String,
    pub phi: Vec<String>,
    pub eps: Vec<String>,
    pub e_action: Vec<Vec<String>>,
    #[serde(default)]
    pub trivial_action: Vec<bool>,
}

impl From<&GeometricCrystal> for CrystalJson {
    fn from(x: &GeometricCrystal) -> Self {
        let strs = |v: &[RatFun]| v.iter().map(|f| f.to_string()).collect::<Vec<_>>();
        CrystalJson {
            schema_version: SCHEMA_VERSION,
            name: x.name.clone(),
            chart: x.chart.names().to_vec(),
            action_variable: x.ext.name(x.chart.len()).to_string(),
            torus: x.torus.clone(),
            cartan: x.cartan.matrix().to_vec(),
            gamma: strs(&x.gamma),
            f: x.f.to_string(),
            phi: strs(&x.phi),
            eps: strs(&x.eps),
            e_action: x.e_action.iter().map(|e| strs(e)).collect(),
            trivial_action: x.trivial_action.clone(),
        }
    }
}

impl CrystalJson {
    pub fn into_crystal(self) -> Result<GeometricCrystal> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Serde(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        let chart = VarContext::new(&self.chart)?;
        let ext = chart.extend(&[self.action_variable.as_str()])?;
        let parse = |s: &String| parse_ratfun(s, &chart);
        let parse_all = |v: &[String]| v.iter().map(parse).collect::<Result<Vec<_>>>();
        // Rename the stored action variable to the canonical fresh one.
        let canonical = action_context(&chart);
        let e_action = self
            .e_action
            .iter()
            .map(|e| {
                e.iter()
                    .map(|s| {
                        let g = parse_ratfun(s, &ext)?;
                        let idx: Vec<usize> = (0..ext.len()).collect();
                        g.embed(&canonical, &idx)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let r = self.torus.rank();
        let trivial = if self.trivial_action.is_empty() {
            vec![false; r]
        } else {
            self.trivial_action
        };
        let x = GeometricCrystal::new(
            self.name,
            self.torus,
            chart.clone(),
            parse_all(&self.gamma)?,
            parse(&self.f)?,
            parse_all(&self.phi)?,
            parse_all(&self.eps)?,
            e_action,
            trivial,
        )?;
        if x.cartan.matrix() != self.cartan.as_slice() {
            return Err(Error::Serde(
                "cartan matrix disagrees with the torus data".into(),
            ));
        }
        Ok(x)
    }
}
