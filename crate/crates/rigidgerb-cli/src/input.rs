//! TOML input documents and their conversion to library values.

use std::str::FromStr;

use num_rational::Ratio;
use rigidgerb::gerb::LevelDatum;
use rigidgerb::realgerb::{RootOfUnity, StrongRealForm, TorusStrongForm};
use rigidgerb::rigidcoh::{ReductiveDatum, TorusDatum};
use rigidgerb::spectra::{GaussianScalar, Mat2, MatrixGroup};
use rigidgerb::{smith_normal_form, FinAb, FiniteGroup, GammaModule, IntMatrix, QZ};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// One input file. The `kind` key selects the variant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InputDocument {
    Group(GroupDoc),
    GammaModule(GammaModuleDoc),
    Torus(TorusSpec),
    Reductive(ReductiveDoc),
    Level(LevelDoc),
    StrongForm(StrongFormDoc),
    MatrixGroup(MatrixGroupDoc),
}

impl InputDocument {
    pub fn kind(&self) -> &'static str {
        match self {
            InputDocument::Group(_) => "group",
            InputDocument::GammaModule(_) => "gamma-module",
            InputDocument::Torus(_) => "torus",
            InputDocument::Reductive(_) => "reductive",
            InputDocument::Level(_) => "level",
            InputDocument::StrongForm(_) => "strong-form",
            InputDocument::MatrixGroup(_) => "matrix-group",
        }
    }

    pub fn parse(text: &str) -> Result<InputDocument, CliError> {
        toml::from_str(text).map_err(|e| CliError::Schema(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("input documents serialize")
    }
}

/// Exactly one of the fields must be set. Elements of a permutation group
/// are numbered in breadth-first order from the identity (element 0), so the
/// generators are elements `1..=k` when they are distinct and nontrivial.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub named: Option<String>,
    /// Multiplication table, one row per element; element 0 is the identity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutations: Option<Vec<Vec<usize>>>,
}

/// Row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<i64>,
}

/// Action of one group element (normally a generator).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub element: usize,
    pub matrix: MatrixSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub group: GroupSpec,
}

/// `invariants` lists the cyclic factors of the underlying group, `0` for a
/// copy of `Z`; action matrices are in those coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaModuleDoc {
    pub invariants: Vec<i64>,
    pub group: GroupSpec,
    #[serde(default)]
    pub actions: Vec<ActionSpec>,
}

/// The center, as an alternative to giving `Ybar`: the points
/// `exp(2πi y / den)` for the listed `y ∈ Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CenterSpec {
    pub den: i64,
    pub generators: Vec<Vec<i64>>,
}

/// `Y = Z^rank` with the given action. `Ybar` is spanned by the columns of
/// `basis_num / basis_den`, or generated by `Y` and the center. `lambda`, in
/// `Ybar` coordinates, is only read by `cocycle`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusSpec {
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_den: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<i64>>,
    pub group: GroupSpec,
    #[serde(default)]
    pub actions: Vec<ActionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_num: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<CenterSpec>,
}

/// Simple coroots as vectors in `Y`, simple roots as functionals on `Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductiveDoc {
    pub coroots: Vec<Vec<i64>>,
    pub roots: Vec<Vec<i64>>,
    pub torus: TorusSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitSpec {
    pub element: usize,
    pub unit: i64,
}

/// `Γ` acting on `μ_n` through a unit of `Z/n` per generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelDoc {
    pub n: i64,
    pub group: GroupSpec,
    pub units: Vec<UnitSpec>,
}

/// A Gaussian rational `[re, im]`, each part written `"a/b"` or `"a"`.
pub type GaussianSpec = [String; 2];

/// Either an element of `SL_2(C)` (entries `a, b, c, d`) defining a strong
/// real form, or a torus with the angles of `t` in `δ = t σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrongFormDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<[GaussianSpec; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus: Option<TorusSpec>,
}

fn default_bound() -> usize {
    200
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixGroupDoc {
    #[serde(default = "default_bound")]
    pub bound: usize,
    #[serde(default)]
    pub mod_center: bool,
    pub generators: Vec<[GaussianSpec; 4]>,
}

fn schema(msg: impl std::fmt::Display) -> CliError {
    CliError::Schema(msg.to_string())
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup, CliError> {
        let set = [
            self.cyclic.is_some(),
            self.named.is_some(),
            self.table.is_some(),
            self.permutations.is_some(),
        ];
        if set.iter().filter(|&&b| b).count() != 1 {
            return Err(schema("group needs exactly one of cyclic, named, table, permutations"));
        }
        if let Some(k) = self.cyclic {
            if k == 0 {
                return Err(schema("cyclic group of order 0"));
            }
            return Ok(FiniteGroup::cyclic(k));
        }
        if let Some(name) = &self.named {
            return match name.as_str() {
                "trivial" => Ok(FiniteGroup::trivial()),
                "klein" => Ok(FiniteGroup::klein()),
                "s3" => Ok(FiniteGroup::s3()),
                other => Err(schema(format!("unknown group name {:?}", other))),
            };
        }
        if let Some(rows) = &self.table {
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return Err(schema("multiplication table must be square"));
            }
            return FiniteGroup::from_table(n, rows.concat()).map_err(schema);
        }
        let perms = self.permutations.as_ref().expect("one field is set");
        Ok(FiniteGroup::from_permutations(perms).map_err(schema)?.0)
    }

    /// The multiplication table of `g`.
    pub fn from_group(g: &FiniteGroup) -> GroupSpec {
        let n = g.order();
        GroupSpec {
            table: Some(g.table().chunks(n).map(|r| r.to_vec()).collect()),
            ..GroupSpec::default()
        }
    }
}

impl MatrixSpec {
    pub fn build(&self) -> Result<IntMatrix, CliError> {
        IntMatrix::new(self.rows, self.cols, self.entries.clone()).map_err(schema)
    }

    pub fn from_matrix(m: &IntMatrix) -> MatrixSpec {
        MatrixSpec {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.data().to_vec(),
        }
    }
}

/// Elements of `group` outside the subgroup generated by `listed`, enough
/// to generate the rest; they are taken to act trivially.
fn unlisted_generators(group: &FiniteGroup, listed: &[usize]) -> Vec<usize> {
    let mut gens = listed.to_vec();
    let mut extra = Vec::new();
    for g in group.generators() {
        if !group.generated(&gens).contains(&g) {
            gens.push(g);
            extra.push(g);
        }
    }
    extra
}

fn build_actions(group: &FiniteGroup, rank: usize, actions: &[ActionSpec]) -> Result<Vec<(usize, IntMatrix)>, CliError> {
    let mut out = actions
        .iter()
        .map(|a| {
            if a.element >= group.order() {
                return Err(schema(format!("element {} is not in a group of order {}", a.element, group.order())));
            }
            Ok((a.element, a.matrix.build()?))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let listed: Vec<usize> = out.iter().map(|(g, _)| *g).collect();
    for g in unlisted_generators(group, &listed) {
        out.push((g, IntMatrix::identity(rank)));
    }
    Ok(out)
}

fn generator_actions<F>(group: &FiniteGroup, action: F) -> Vec<ActionSpec>
where
    F: Fn(usize) -> IntMatrix,
{
    group
        .generators()
        .into_iter()
        .map(|g| ActionSpec {
            element: g,
            matrix: MatrixSpec::from_matrix(&action(g)),
        })
        .collect()
}

impl GammaModuleDoc {
    pub fn build(&self) -> Result<GammaModule, CliError> {
        let group = self.group.build()?;
        let module = FinAb::from_invariants(&self.invariants);
        let gens = build_actions(&group, self.invariants.len(), &self.actions)?;
        GammaModule::from_generator_actions(group, &module, &gens).map_err(schema)
    }

    pub fn from_module(m: &GammaModule) -> GammaModuleDoc {
        GammaModuleDoc {
            invariants: m.moduli().to_vec(),
            group: GroupSpec::from_group(m.group()),
            actions: generator_actions(m.group(), |g| m.action(g).clone()),
        }
    }
}

/// A basis of `Y + Σ Z·(y_i / den)`, as numerator columns over `den`.
fn center_basis(rank: usize, center: &CenterSpec) -> Result<IntMatrix, CliError> {
    if center.den <= 0 {
        return Err(schema("center denominator must be positive"));
    }
    let mut cols: Vec<Vec<i64>> = (0..rank)
        .map(|i| {
            let mut e = vec![0; rank];
            e[i] = center.den;
            e
        })
        .collect();
    for y in &center.generators {
        if y.len() != rank {
            return Err(schema(format!("center generator {:?} does not have {} coordinates", y, rank)));
        }
        cols.push(y.clone());
    }
    let m = IntMatrix::from_cols(rank, &cols);
    let s = smith_normal_form(&m);
    let diag = s.diagonal();
    let scaled = IntMatrix::from_cols(
        rank,
        &(0..rank)
            .map(|j| s.u_inv.col(j).iter().map(|x| x * diag[j]).collect())
            .collect::<Vec<_>>(),
    );
    Ok(scaled)
}

impl TorusSpec {
    pub fn build(&self) -> Result<TorusDatum, CliError> {
        let group = self.group.build()?;
        let gens = build_actions(&group, self.rank, &self.actions)?;
        let (num, den) = match (&self.basis_num, self.basis_den, &self.center) {
            (Some(num), Some(den), None) => (num.build()?, den),
            (None, None, Some(center)) => (center_basis(self.rank, center)?, center.den),
            (None, None, None) => (IntMatrix::identity(self.rank), 1),
            _ => return Err(schema("give basis_num with basis_den, or center, or neither")),
        };
        if num.rows() != self.rank {
            return Err(schema(format!("basis has {} rows, rank is {}", num.rows(), self.rank)));
        }
        TorusDatum::from_generators(group, &gens, num, den).map_err(schema)
    }

    pub fn lambda(&self, t: &TorusDatum) -> Result<Vec<i64>, CliError> {
        match &self.lambda {
            None => Ok(vec![0; t.rank()]),
            Some(l) if l.len() == t.rank() => Ok(l.clone()),
            Some(l) => Err(schema(format!("lambda has {} coordinates, rank is {}", l.len(), t.rank()))),
        }
    }

    pub fn from_torus(t: &TorusDatum) -> TorusSpec {
        let (num, den) = t.basis();
        TorusSpec {
            rank: t.rank(),
            basis_den: Some(den),
            lambda: None,
            group: GroupSpec::from_group(t.group()),
            actions: generator_actions(t.group(), |g| t.rho(g).clone()),
            basis_num: Some(MatrixSpec::from_matrix(num)),
            center: None,
        }
    }
}

impl ReductiveDoc {
    pub fn build(&self) -> Result<ReductiveDatum, CliError> {
        let t = self.torus.build()?;
        ReductiveDatum::new(t, self.coroots.clone(), self.roots.clone()).map_err(schema)
    }

    pub fn from_datum(rd: &ReductiveDatum) -> ReductiveDoc {
        ReductiveDoc {
            coroots: rd.coroots().to_vec(),
            roots: rd.roots().to_vec(),
            torus: TorusSpec::from_torus(rd.torus()),
        }
    }
}

impl LevelDoc {
    pub fn build(&self) -> Result<LevelDatum, CliError> {
        if self.n <= 0 {
            return Err(schema("level must be positive"));
        }
        let group = self.group.build()?;
        let mut gens = Vec::with_capacity(self.units.len());
        for u in &self.units {
            if u.element >= group.order() {
                return Err(schema(format!("element {} is not in the group", u.element)));
            }
            gens.push((u.element, u.unit));
        }
        let listed: Vec<usize> = gens.iter().map(|(g, _)| *g).collect();
        for g in unlisted_generators(&group, &listed) {
            gens.push((g, 1));
        }
        LevelDatum::from_generators(group, self.n, &gens).map_err(schema)
    }

    pub fn from_level(l: &LevelDatum) -> LevelDoc {
        LevelDoc {
            n: l.n(),
            group: GroupSpec::from_group(l.group()),
            units: l
                .group()
                .generators()
                .into_iter()
                .map(|g| UnitSpec {
                    element: g,
                    unit: l.chi(g),
                })
                .collect(),
        }
    }
}

pub fn parse_fraction(s: &str) -> Result<Ratio<i64>, CliError> {
    Ratio::<i64>::from_str(s.trim()).map_err(|_| schema(format!("{:?} is not a fraction", s)))
}

pub fn format_fraction(r: &Ratio<i64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_gaussian(g: &GaussianSpec) -> Result<GaussianScalar, CliError> {
    Ok(GaussianScalar::new(parse_fraction(&g[0])?, parse_fraction(&g[1])?))
}

pub fn format_gaussian(g: &GaussianScalar) -> GaussianSpec {
    [format_fraction(&g.re), format_fraction(&g.im)]
}

pub fn parse_mat2(e: &[GaussianSpec; 4]) -> Result<Mat2, CliError> {
    Ok(Mat2::new(
        parse_gaussian(&e[0])?,
        parse_gaussian(&e[1])?,
        parse_gaussian(&e[2])?,
        parse_gaussian(&e[3])?,
    ))
}

pub fn format_mat2(m: &Mat2) -> [GaussianSpec; 4] {
    m.entries().map(|x| format_gaussian(&x))
}

/// `"a/b"` read as the root of unity `exp(2πi a/b)`.
pub fn parse_root(s: &str) -> Result<RootOfUnity, CliError> {
    let r = parse_fraction(s)?;
    Ok(RootOfUnity::new(QZ::from_ratio(r)))
}

pub fn format_root(r: &RootOfUnity) -> String {
    format_fraction(&r.angle().ratio())
}

/// What a strong-form document describes.
pub enum StrongForm {
    Sl2(StrongRealForm),
    Torus(TorusDatum, TorusStrongForm),
}

impl StrongFormDoc {
    pub fn build(&self) -> Result<StrongForm, CliError> {
        match (&self.matrix, &self.t, &self.torus) {
            (Some(m), None, None) => Ok(StrongForm::Sl2(StrongRealForm::new(parse_mat2(m)?).map_err(schema)?)),
            (None, Some(t), Some(spec)) => {
                let torus = spec.build()?;
                if torus.group().order() != 2 {
                    return Err(schema("a torus strong form needs a group of order 2"));
                }
                if t.len() != torus.rank() {
                    return Err(schema(format!("t has {} angles, rank is {}", t.len(), torus.rank())));
                }
                let t = t.iter().map(|s| parse_root(s).map(|r| r.angle())).collect::<Result<_, _>>()?;
                Ok(StrongForm::Torus(torus, TorusStrongForm { t }))
            }
            _ => Err(schema("strong-form needs either matrix, or t together with torus")),
        }
    }

    pub fn from_sl2(form: &StrongRealForm, level: Option<i64>) -> StrongFormDoc {
        StrongFormDoc {
            level,
            matrix: Some(format_mat2(form.matrix())),
            t: None,
            torus: None,
        }
    }

    pub fn from_torus(t: &TorusDatum, form: &TorusStrongForm, level: Option<i64>) -> StrongFormDoc {
        StrongFormDoc {
            level,
            matrix: None,
            t: Some(form.t.iter().map(|a| format_root(&RootOfUnity::new(*a))).collect()),
            torus: Some(TorusSpec::from_torus(t)),
        }
    }
}

impl MatrixGroupDoc {
    pub fn build(&self) -> Result<MatrixGroup, CliError> {
        let gens: Vec<Mat2> = self.generators.iter().map(parse_mat2).collect::<Result<_, _>>()?;
        MatrixGroup::generate(&gens, self.bound, self.mod_center).map_err(|e| CliError::Failure(e.to_string()))
    }

    pub fn from_generators(gens: &[Mat2], bound: usize, mod_center: bool) -> MatrixGroupDoc {
        MatrixGroupDoc {
            bound,
            mod_center,
            generators: gens.iter().map(format_mat2).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_needs_one_description() {
        assert!(GroupSpec::default().build().is_err());
        let both = GroupSpec {
            cyclic: Some(2),
            named: Some(String::from("klein")),
            ..GroupSpec::default()
        };
        assert!(matches!(both.build(), Err(CliError::Schema(_))));
        let s3 = GroupSpec {
            permutations: Some(vec![vec![1, 0, 2], vec![1, 2, 0]]),
            ..GroupSpec::default()
        };
        assert_eq!(s3.build().unwrap(), FiniteGroup::s3());
    }

    #[test]
    fn center_gives_ybar() {
        let c = CenterSpec {
            den: 2,
            generators: vec![vec![1, 1]],
        };
        let b = center_basis(2, &c).unwrap();
        assert_eq!(b.det().abs(), 2);
        // Y = Z^2 sits inside with index 2.
        let t = TorusDatum::from_generators(FiniteGroup::cyclic(2), &[(1, IntMatrix::identity(2))], b, 2).unwrap();
        assert_eq!(t.index(), 2);
    }

    #[test]
    fn fractions() {
        assert_eq!(parse_fraction(" -3/6 ").unwrap(), Ratio::new(-1, 2));
        assert!(parse_fraction("half").is_err());
        assert_eq!(format_fraction(&Ratio::new(4, 2)), "2");
    }
}
