use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use sl2orbit::poly::{parse_complex, parse_element, parse_scalar, BoundaryPoint, InteriorPoint};
use sl2orbit::rep::RepDecomposition;
use sl2orbit::{rat, Element, Rational};

/// Element selection shared by `classify` and `plot`.
#[derive(Args, Debug, Clone)]
pub struct ElementArgs {
    /// Decomposition such as `4+2` or `rho = 4+2`.
    #[arg(long, required_unless_present = "element_file")]
    pub rep: Option<String>,
    /// Canonical elliptic point with interior root `z` (e.g. `i`, `1+2i`).
    #[arg(long, value_name = "Z", group = "kind")]
    pub elliptic: Option<String>,
    /// Canonical parabolic point with boundary root `t` (`inf` for X).
    #[arg(long, value_name = "T", group = "kind")]
    pub parabolic: Option<String>,
    /// `t1,t2[,alpha_1,...]`; alphas default to `ceil(n_q/2)`.
    #[arg(long, value_name = "T1,T2[,ALPHAS]", group = "kind", allow_hyphen_values = true)]
    pub hyperbolic: Option<String>,
    /// Block scalars, one per summand; defaults to all ones.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub u: Vec<String>,
    /// Factored element in the text format (`rho = ...` header, one block per line).
    #[arg(long, value_name = "PATH", group = "kind", conflicts_with_all = ["rep", "u"])]
    pub element_file: Option<PathBuf>,
}

pub fn boundary_point(s: &str) -> Result<BoundaryPoint<Rational>> {
    let t = s.trim();
    if matches!(t, "inf" | "infinity" | "oo" | "1/0") {
        return Ok(BoundaryPoint::Infinity);
    }
    parse_scalar::<Rational>(t).map(BoundaryPoint::Finite).ok_or_else(|| anyhow!("cannot read boundary point {t:?}"))
}

impl ElementArgs {
    pub fn rep(&self) -> Result<RepDecomposition> {
        let r = self.rep.as_deref().ok_or_else(|| anyhow!("--rep is required"))?;
        r.parse().map_err(|e| anyhow!("{e}"))
    }

    fn scalars(&self, rep: &RepDecomposition) -> Result<Vec<Rational>> {
        if self.u.is_empty() {
            return Ok(vec![rat(1); rep.len()]);
        }
        if self.u.len() != rep.len() {
            bail!("--u has {} entries but {rep} has {} summands", self.u.len(), rep.len());
        }
        self.u
            .iter()
            .map(|s| parse_scalar::<Rational>(s.trim()).ok_or_else(|| anyhow!("cannot read scalar {s:?}")))
            .collect()
    }

    /// Echo of the element flags for reports.
    pub fn describe(&self) -> String {
        if let Some(p) = &self.element_file {
            return format!("file {}", p.display());
        }
        let u = if self.u.is_empty() { String::new() } else { format!(" u={}", self.u.join(",")) };
        match (&self.elliptic, &self.parabolic, &self.hyperbolic) {
            (Some(z), _, _) => format!("elliptic {z}{u}"),
            (_, Some(t), _) => format!("parabolic {t}{u}"),
            (_, _, Some(h)) => format!("hyperbolic {h}{u}"),
            _ => format!("elliptic i{u}"),
        }
    }

    pub fn build(&self) -> Result<Element> {
        if let Some(path) = &self.element_file {
            let src = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            return parse_element::<Rational>(&src).map_err(|e| anyhow!("{}: {e}", path.display()));
        }
        let rep = self.rep()?;
        let u = self.scalars(&rep)?;
        let x = if let Some(t) = &self.parabolic {
            Element::parabolic(rep, u, boundary_point(t)?)
        } else if let Some(h) = &self.hyperbolic {
            let parts: Vec<&str> = h.split(',').map(str::trim).collect();
            if parts.len() < 2 {
                bail!("--hyperbolic needs t1,t2");
            }
            let (t1, t2) = (boundary_point(parts[0])?, boundary_point(parts[1])?);
            let alpha: Vec<u32> = if parts.len() == 2 {
                rep.dims().iter().map(|&n| n.div_ceil(2) as u32).collect()
            } else {
                parts[2..]
                    .iter()
                    .map(|a| a.parse::<u32>().map_err(|_| anyhow!("cannot read multiplicity {a:?}")))
                    .collect::<Result<_>>()?
            };
            if alpha.len() != rep.len() {
                bail!("{} multiplicities given for {} summands", alpha.len(), rep.len());
            }
            Element::hyperbolic(rep, u, t1, t2, &alpha)
        } else {
            let z = self.elliptic.as_deref().unwrap_or("i");
            let (re, im) = parse_complex::<Rational>(z).ok_or_else(|| anyhow!("cannot read interior point {z:?}"))?;
            let z = InteriorPoint::new(re, im).ok_or_else(|| anyhow!("interior point {z:?} is not in the upper half-plane"))?;
            Element::elliptic(rep, u, z)
        };
        x.map_err(|e| anyhow!("{e}"))
    }
}
