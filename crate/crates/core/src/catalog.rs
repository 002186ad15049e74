//! Building blocks: elliptic surfaces E(n), Horikawa surfaces H(4k−1), the
//! manifolds Z(g) obtained by gluing Brieskorn complements, the positive
//! signature surfaces Y(x), the fiber sums X(2n) = E(2)♯_f E(2n−2), and
//! user-supplied synthetic blocks.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::invariants::{is_allowed, CharNumbers, InvariantError};
use crate::swring::SwExpr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("bad parameters for {family}: {reason}")]
    BadParams { family: String, reason: String },
    #[error("cannot parse catalog: {0}")]
    Parse(String),
    #[error("invalid catalog entry at {path}: {message}")]
    Validation { path: String, message: String },
    #[error("unknown block `{0}`")]
    UnknownBlock(String),
    #[error("catalog i/o: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    E,
    H,
    Z,
    Y,
    X2n,
    #[serde(rename = "synthetic")]
    Synthetic,
}

impl Family {
    pub fn token(&self) -> &'static str {
        match self {
            Family::E => "E",
            Family::H => "H",
            Family::Z => "Z",
            Family::Y => "Y",
            Family::X2n => "X2n",
            Family::Synthetic => "synthetic",
        }
    }

    pub fn from_token(s: &str) -> Option<Family> {
        match s {
            "E" => Some(Family::E),
            "H" => Some(Family::H),
            "Z" => Some(Family::Z),
            "Y" => Some(Family::Y),
            "X2n" => Some(Family::X2n),
            _ => None,
        }
    }

    /// Parameter names in canonical order.
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            Family::E | Family::X2n => &["n"],
            Family::H => &["k"],
            Family::Z => &["g"],
            Family::Y => &["x", "g"],
            Family::Synthetic => &[],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotKind {
    TorusInCusp,
    Symplectic,
}

/// A square-zero surface available for fiber sums.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSlot {
    pub id: String,
    pub genus: i64,
    pub self_intersection: i64,
    pub kind: SlotKind,
    #[serde(rename = "dual_sphere")]
    pub has_dual_sphere: bool,
    pub host: String,
    /// Name of the homology class carried by the surface. Parallel fibers
    /// share a class, so E(n)'s `f` and `T` both carry `T`.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub class: String,
}

impl SurfaceSlot {
    pub fn class_name(&self) -> &str {
        if self.class.is_empty() {
            &self.id
        } else {
            &self.class
        }
    }

    fn validate(&self) -> Result<(), String> {
        if self.genus < 1 {
            return Err(format!("slot `{}` has genus {} < 1", self.id, self.genus));
        }
        if self.self_intersection != 0 {
            return Err(format!(
                "slot `{}` has self-intersection {}, only square-zero surfaces can be summed",
                self.id, self.self_intersection
            ));
        }
        if self.kind == SlotKind::TorusInCusp && self.genus != 1 {
            return Err(format!("cusp slot `{}` must be a torus", self.id));
        }
        Ok(())
    }
}

/// Formal Seiberg–Witten data attached to a block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SwKind {
    /// (e^T − e^{−T})^{n−2} in the fiber class.
    Elliptic,
    /// e^K + (−1)^χ e^{−K}.
    MinimalGeneralType,
    Explicit { expr: SwExpr },
    /// Only the listed classes are known to be basic.
    Partial { classes: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSpec {
    pub family: Family,
    /// Grammar token; the family token for built-in blocks.
    pub name: String,
    pub params: BTreeMap<String, i64>,
    pub invariants: CharNumbers,
    pub spin: bool,
    pub simply_connected: bool,
    pub surfaces: Vec<SurfaceSlot>,
    pub sw: SwKind,
    pub notes: Vec<String>,
}

fn bad(family: Family, reason: impl Into<String>) -> CatalogError {
    CatalogError::BadParams {
        family: family.token().to_string(),
        reason: reason.into(),
    }
}

fn param(family: Family, params: &BTreeMap<String, i64>, key: &str) -> Result<i64, CatalogError> {
    params
        .get(key)
        .copied()
        .ok_or_else(|| bad(family, format!("missing parameter `{key}`")))
}

fn check_params(family: Family, params: &BTreeMap<String, i64>) -> Result<(), CatalogError> {
    let names = family.param_names();
    for k in params.keys() {
        if !names.contains(&k.as_str()) {
            return Err(bad(family, format!("unexpected parameter `{k}`")));
        }
    }
    let min = |key: &str, lo: i64| -> Result<i64, CatalogError> {
        let v = param(family, params, key)?;
        if v < lo {
            return Err(bad(family, format!("{key} = {v} is below the minimum {lo}")));
        }
        Ok(v)
    };
    match family {
        Family::E => min("n", 1).map(drop),
        Family::H => min("k", 1).map(drop),
        Family::Z => min("g", 1).map(drop),
        Family::Y => min("x", 1).and(min("g", 2)).map(drop),
        Family::X2n => min("n", 2).map(drop),
        Family::Synthetic => Err(bad(family, "synthetic blocks have no formula")),
    }
}

fn overflow(family: Family) -> impl Fn(InvariantError) -> CatalogError {
    move |e| bad(family, e.to_string())
}

fn mul(family: Family, a: i64, b: i64) -> Result<i64, CatalogError> {
    a.checked_mul(b)
        .ok_or_else(|| bad(family, "parameter too large"))
}

/// Exact (χ, c) of a catalog family.
pub fn block_invariants(
    family: Family,
    params: &BTreeMap<String, i64>,
) -> Result<CharNumbers, CatalogError> {
    check_params(family, params)?;
    let (chi, c) = match family {
        Family::E => (param(family, params, "n")?, 0),
        Family::H => {
            let k = param(family, params, "k")?;
            (mul(family, 4, k)? - 1, mul(family, 8, k)? - 8)
        }
        Family::Z => {
            let g = param(family, params, "g")?;
            let g2 = mul(family, g, g)?;
            (2 * g2 - g + 1, 8 * g2 - 16 * g + 8)
        }
        Family::Y => {
            let x = param(family, params, "x")?;
            let x2 = mul(family, x, x)?;
            (mul(family, 6857, x2)?, mul(family, 60068, x2)?)
        }
        Family::X2n => (2 * param(family, params, "n")?, 0),
        Family::Synthetic => unreachable!("rejected by check_params"),
    };
    CharNumbers::from_chi_c(chi, c).map_err(overflow(family))
}

pub fn block_spin(family: Family, params: &BTreeMap<String, i64>) -> Result<bool, CatalogError> {
    check_params(family, params)?;
    Ok(match family {
        Family::E => param(family, params, "n")? % 2 == 0,
        Family::H => param(family, params, "k")? % 2 == 0,
        Family::Z | Family::X2n => true,
        // σ(Y(x)) = 5212x² ≡ 12 (mod 16) for odd x
        Family::Y => param(family, params, "x")? % 2 == 0,
        Family::Synthetic => unreachable!("rejected by check_params"),
    })
}

fn slot(
    id: &str,
    genus: i64,
    kind: SlotKind,
    dual: bool,
    host: impl Into<String>,
    class: &str,
) -> SurfaceSlot {
    SurfaceSlot {
        id: id.to_string(),
        genus,
        self_intersection: 0,
        kind,
        has_dual_sphere: dual,
        host: host.into(),
        class: class.to_string(),
    }
}

pub fn block_surfaces(
    family: Family,
    params: &BTreeMap<String, i64>,
) -> Result<Vec<SurfaceSlot>, CatalogError> {
    check_params(family, params)?;
    use SlotKind::*;
    Ok(match family {
        Family::E => {
            let n = param(family, params, "n")?;
            vec![
                slot(
                    "f",
                    1,
                    TorusInCusp,
                    true,
                    format!("torus in a cusp neighborhood of the Gompf nucleus N({n}); the section is a dual sphere"),
                    "T",
                ),
                slot(
                    "T",
                    1,
                    Symplectic,
                    true,
                    format!("regular fiber of E({n}); the section of square −{n} is a dual sphere"),
                    "T",
                ),
            ]
        }
        Family::H => {
            let k = param(family, params, "k")?;
            vec![
                slot(
                    "f",
                    1,
                    TorusInCusp,
                    true,
                    format!("torus in a cusp neighborhood inside B(2,5,{}) ⊃ B(2,3,7)", 10 * k - 1),
                    "f",
                ),
                slot(
                    "T",
                    2,
                    Symplectic,
                    true,
                    format!("genus-2 surface of the (2,5) torus knot fibration; a section of square −{k} is a dual sphere"),
                    "T",
                ),
            ]
        }
        Family::Z => {
            let g = param(family, params, "g")?;
            let sigma = slot(
                "Σ",
                g,
                Symplectic,
                true,
                format!(
                    "genus-{g} surface T − e in X(2,{},{})♯CP²bar, two copies glued along the boundary; the exceptional spheres glue to a dual sphere",
                    2 * g + 1,
                    4 * g + 1
                ),
                "Σ",
            );
            if g >= 2 {
                vec![
                    slot(
                        "f",
                        1,
                        TorusInCusp,
                        true,
                        format!("torus in a cusp neighborhood inside B(2,{},{}) ⊃ B(2,3,7)", 2 * g + 1, 4 * g + 1),
                        "f",
                    ),
                    sigma,
                ]
            } else {
                vec![sigma]
            }
        }
        Family::Y => {
            let g = param(family, params, "g")?;
            vec![slot(
                "Σ_g",
                g,
                Symplectic,
                true,
                format!("generic fiber of genus {g} of the Lefschetz fibration; the sphere section S is a dual sphere"),
                "Σ_g",
            )]
        }
        Family::X2n => {
            let n = param(family, params, "n")?;
            vec![
                slot(
                    "f",
                    1,
                    TorusInCusp,
                    true,
                    format!("torus in a cusp neighborhood of E(2)♯_f E({}); the section is a dual sphere", 2 * n - 2),
                    "f",
                ),
                slot(
                    "T",
                    1,
                    Symplectic,
                    true,
                    format!("regular fiber of the E({}) side", 2 * n - 2),
                    "T",
                ),
            ]
        }
        Family::Synthetic => unreachable!("rejected by check_params"),
    })
}

fn block_sw(family: Family, params: &BTreeMap<String, i64>) -> Result<SwKind, CatalogError> {
    use crate::swring::{gluing_factor, elliptic_sw, ClassGen};
    Ok(match family {
        Family::E => SwKind::Elliptic,
        Family::H | Family::Y => SwKind::MinimalGeneralType,
        Family::Z => SwKind::Partial {
            classes: vec!["K_Z".to_string()],
        },
        Family::X2n => {
            let n = param(family, params, "n")?;
            let t = ClassGen::new("T", "fiber of the E(2n−2) side");
            let f = ClassGen::new("f", "gluing torus of E(2)♯_f E(2n−2)");
            let expr = elliptic_sw(&t, 2 * n - 2)
                .mul(&gluing_factor(&f))
                .map_err(|e| bad(family, e.to_string()))?;
            SwKind::Explicit { expr }
        }
        Family::Synthetic => unreachable!("rejected by check_params"),
    })
}

fn block_notes(family: Family, params: &BTreeMap<String, i64>) -> Vec<String> {
    let mut notes = Vec::new();
    match family {
        Family::H => notes.push("cusp torus f assumed disjoint from the genus-2 surface T".into()),
        Family::Y => {
            notes.push(
                "invariants use 6857x² and 60068x² as exact values; only their ratio matters".into(),
            );
            if params.get("x").is_some_and(|x| x % 2 != 0) {
                notes.push("σ = 5212x² ≡ 12 (mod 16) for odd x, so spin is not asserted".into());
            }
        }
        Family::Z if params.get("g") == Some(&1) => {
            notes.push("B(2,3,5) has no cusp neighborhood, so Z(1) offers no f slot".into())
        }
        _ => {}
    }
    notes
}

pub fn params_of(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

impl BlockSpec {
    pub fn builtin(family: Family, params: BTreeMap<String, i64>) -> Result<BlockSpec, CatalogError> {
        let invariants = block_invariants(family, &params)?;
        let spin = block_spin(family, &params)?;
        let surfaces = block_surfaces(family, &params)?;
        let sw = block_sw(family, &params)?;
        let notes = block_notes(family, &params);
        Ok(BlockSpec {
            family,
            name: family.token().to_string(),
            params,
            invariants,
            spin,
            simply_connected: true,
            surfaces,
            sw,
            notes,
        })
    }

    pub fn e(n: i64) -> Result<BlockSpec, CatalogError> {
        Self::builtin(Family::E, params_of(&[("n", n)]))
    }

    /// H(4k−1).
    pub fn h(k: i64) -> Result<BlockSpec, CatalogError> {
        Self::builtin(Family::H, params_of(&[("k", k)]))
    }

    pub fn z(g: i64) -> Result<BlockSpec, CatalogError> {
        Self::builtin(Family::Z, params_of(&[("g", g)]))
    }

    pub fn y(x: i64, g: i64) -> Result<BlockSpec, CatalogError> {
        Self::builtin(Family::Y, params_of(&[("x", x), ("g", g)]))
    }

    pub fn x2n(n: i64) -> Result<BlockSpec, CatalogError> {
        Self::builtin(Family::X2n, params_of(&[("n", n)]))
    }

    /// A block given only by its data, validated like a catalog entry.
    #[allow(clippy::too_many_arguments)]
    pub fn synthetic(
        name: &str,
        params: BTreeMap<String, i64>,
        chi: i64,
        c: i64,
        spin: bool,
        simply_connected: bool,
        surfaces: Vec<SurfaceSlot>,
        sw: SwKind,
    ) -> Result<BlockSpec, CatalogError> {
        let raw = RawBlock {
            family: Family::Synthetic,
            name: Some(name.to_string()),
            params,
            chi: Some(chi),
            c: Some(c),
            spin: Some(spin),
            simply_connected: Some(simply_connected),
            surfaces: Some(surfaces),
            sw: Some(sw),
            notes: Vec::new(),
        };
        raw.into_block("block")
    }

    pub fn slot(&self, id: &str) -> Option<&SurfaceSlot> {
        self.surfaces.iter().find(|s| s.id == id)
    }

    /// `E(n=2)`, `Y(x=1,g=3)`, `Xd(c=96,chi=10)`.
    pub fn grammar_token(&self) -> String {
        let mut keys: Vec<&String> = self.params.keys().collect();
        let order = self.family.param_names();
        keys.sort_by_key(|k| {
            (
                order.iter().position(|o| o == k).unwrap_or(usize::MAX),
                (*k).clone(),
            )
        });
        let inner: Vec<String> = keys
            .iter()
            .map(|k| format!("{}={}", k, self.params[*k]))
            .collect();
        format!("{}({})", self.name, inner.join(","))
    }

    /// Human label such as `H(7)` or `E(4)`.
    pub fn label(&self) -> String {
        match self.family {
            Family::H => format!("H({})", 4 * self.params["k"] - 1),
            _ => self.grammar_token(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBlock {
    family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default)]
    params: BTreeMap<String, i64>,
    #[serde(default)]
    chi: Option<i64>,
    #[serde(default)]
    c: Option<i64>,
    #[serde(default)]
    spin: Option<bool>,
    #[serde(default)]
    simply_connected: Option<bool>,
    #[serde(default)]
    surfaces: Option<Vec<SurfaceSlot>>,
    #[serde(default)]
    sw: Option<SwKind>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

impl RawBlock {
    fn from_block(b: &BlockSpec) -> Self {
        RawBlock {
            family: b.family,
            name: (b.family == Family::Synthetic).then(|| b.name.clone()),
            params: b.params.clone(),
            chi: Some(b.invariants.chi()),
            c: Some(b.invariants.c()),
            spin: Some(b.spin),
            simply_connected: Some(b.simply_connected),
            surfaces: Some(b.surfaces.clone()),
            sw: Some(b.sw.clone()),
            notes: b.notes.clone(),
        }
    }

    fn into_block(self, path: &str) -> Result<BlockSpec, CatalogError> {
        let verr = |field: &str, message: String| CatalogError::Validation {
            path: format!("{path}.{field}"),
            message,
        };
        if self.family != Family::Synthetic {
            let family = self.family;
            let built = BlockSpec::builtin(family, self.params.clone())
                .map_err(|e| verr("params", e.to_string()))?;
            if let Some(chi) = self.chi {
                if chi != built.invariants.chi() {
                    return Err(verr(
                        "chi",
                        format!("{} has χ = {}, not {chi}", built.label(), built.invariants.chi()),
                    ));
                }
            }
            if let Some(c) = self.c {
                if c != built.invariants.c() {
                    return Err(verr(
                        "c",
                        format!("{} has c = {}, not {c}", built.label(), built.invariants.c()),
                    ));
                }
            }
            if let Some(spin) = self.spin {
                if spin != built.spin {
                    return Err(verr(
                        "spin",
                        format!("{} is {}spin", built.label(), if built.spin { "" } else { "not " }),
                    ));
                }
            }
            if let Some(sc) = self.simply_connected {
                if sc != built.simply_connected {
                    return Err(verr("simply_connected", format!("{} is simply connected", built.label())));
                }
            }
            if let Some(s) = &self.surfaces {
                if *s != built.surfaces {
                    return Err(verr("surfaces", "differ from the family's surfaces".into()));
                }
            }
            if let Some(sw) = &self.sw {
                if *sw != built.sw {
                    return Err(verr("sw", "differs from the family's SW data".into()));
                }
            }
            return Ok(built);
        }
        let name = self
            .name
            .filter(|n| !n.is_empty())
            .ok_or_else(|| verr("name", "synthetic blocks need a name".into()))?;
        if Family::from_token(&name).is_some() || !name.chars().all(|ch| ch.is_alphanumeric() || ch == '_' || ch == '\'') {
            return Err(verr("name", format!("`{name}` is not a usable synthetic block name")));
        }
        let chi = self.chi.ok_or_else(|| verr("chi", "required".into()))?;
        let c = self.c.ok_or_else(|| verr("c", "required".into()))?;
        let invariants =
            CharNumbers::from_chi_c(chi, c).map_err(|e| verr("chi", e.to_string()))?;
        let spin = self.spin.ok_or_else(|| verr("spin", "required".into()))?;
        if spin {
            let v = is_allowed(invariants.point());
            if !v.allowed {
                let why: Vec<_> = v.violated.iter().map(|x| x.describe()).collect();
                return Err(verr(
                    "spin",
                    format!("spin block at ({chi}, {c}) fails: {}", why.join(", ")),
                ));
            }
        }
        let simply_connected = self
            .simply_connected
            .ok_or_else(|| verr("simply_connected", "required".into()))?;
        let surfaces = self.surfaces.unwrap_or_default();
        for (i, s) in surfaces.iter().enumerate() {
            s.validate().map_err(|m| verr(&format!("surfaces[{i}]"), m))?;
            if surfaces[..i].iter().any(|t| t.id == s.id) {
                return Err(verr(&format!("surfaces[{i}].id"), format!("duplicate slot id `{}`", s.id)));
            }
        }
        let sw = self.sw.ok_or_else(|| verr("sw", "required".into()))?;
        Ok(BlockSpec {
            family: Family::Synthetic,
            name,
            params: self.params,
            invariants,
            spin,
            simply_connected,
            surfaces,
            sw,
            notes: self.notes,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct RawCatalog {
    version: u32,
    blocks: Vec<RawBlock>,
}

/// An immutable set of blocks. Built-in families are always resolvable;
/// the list is what gets saved and what synthetic lookups search.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Catalog {
    pub blocks: Vec<BlockSpec>,
}

/// The synthetic stand-in for the composite X used by the `desk` profile:
/// (χ, c) = (10, 96), spin, simply connected, with a cusp torus.
pub fn desk_block() -> BlockSpec {
    BlockSpec::synthetic(
        "Xd",
        params_of(&[("chi", 10), ("c", 96)]),
        10,
        96,
        true,
        true,
        vec![slot(
            "f",
            1,
            SlotKind::TorusInCusp,
            true,
            "synthetic cusp torus with a dual sphere",
            "f",
        )],
        SwKind::MinimalGeneralType,
    )
    .expect("desk block is valid")
}

impl Catalog {
    pub fn default_catalog() -> Catalog {
        let mut blocks = Vec::new();
        for n in 1..=4 {
            blocks.push(BlockSpec::e(n).unwrap());
        }
        for k in 1..=4 {
            blocks.push(BlockSpec::h(k).unwrap());
        }
        for g in 1..=3 {
            blocks.push(BlockSpec::z(g).unwrap());
        }
        blocks.push(BlockSpec::y(1, 3).unwrap());
        blocks.push(BlockSpec::y(2, 3).unwrap());
        for n in 2..=3 {
            blocks.push(BlockSpec::x2n(n).unwrap());
        }
        blocks.push(desk_block());
        Catalog { blocks }
    }

    /// Looks up a block by grammar name and parameters.
    pub fn resolve(&self, name: &str, params: &BTreeMap<String, i64>) -> Result<BlockSpec, CatalogError> {
        if let Some(family) = Family::from_token(name) {
            return BlockSpec::builtin(family, params.clone());
        }
        self.blocks
            .iter()
            .find(|b| b.family == Family::Synthetic && b.name == name && (params.is_empty() || b.params == *params))
            .cloned()
            .ok_or_else(|| {
                let shown: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                CatalogError::UnknownBlock(format!("{name}({})", shown.join(",")))
            })
    }

    pub fn from_json(text: &str) -> Result<Catalog, CatalogError> {
        let raw: RawCatalog =
            serde_json::from_str(text).map_err(|e| CatalogError::Parse(e.to_string()))?;
        if raw.version != 1 {
            return Err(CatalogError::Validation {
                path: "version".into(),
                message: format!("unsupported version {}", raw.version),
            });
        }
        let blocks = raw
            .blocks
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.into_block(&format!("blocks[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Catalog { blocks })
    }

    pub fn to_json(&self) -> String {
        let raw = RawCatalog {
            version: 1,
            blocks: self.blocks.iter().map(RawBlock::from_block).collect(),
        };
        serde_json::to_string_pretty(&raw).expect("catalog serializes")
    }
}

pub fn load_catalog(path: &Path) -> Result<Catalog, CatalogError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CatalogError::Io(format!("{}: {e}", path.display())))?;
    Catalog::from_json(&text)
}

pub fn save_catalog(path: &Path, catalog: &Catalog) -> Result<(), CatalogError> {
    std::fs::write(path, catalog.to_json())
        .map_err(|e| CatalogError::Io(format!("{}: {e}", path.display())))
}

impl Serialize for BlockSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawBlock::from_block(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlockSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        RawBlock::deserialize(d)?
            .into_block("block")
            .map_err(serde::de::Error::custom)
    }
}
