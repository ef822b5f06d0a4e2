//! Handle-attachment plans for most fundamental handlebodies and the
//! boundary invariants they induce.
//!
//! Attachment data is symbolic: a handle records its index, which boundary
//! component it goes into (or which two it bridges), an orientation flag
//! for 1-handles, and framing/linking integers for m = 4 surgery handles.
//! That is enough for every invariant computed here.
//!
//! Splitting handles (index m-1) are modeled as attached along a separating
//! sphere that cuts a pristine `S^{m-2}`-bounded piece off: the targeted
//! component keeps its accumulated invariants and a fresh sphere component
//! is appended. The single-sphere plan therefore splits first and bridges
//! second, which reproduces the disk-boundary example exactly.

use crate::graph::PreimageLabel;
use crate::zalgebra::{cokernel_invariants, AbelianInvariants, IntMatrix};
use crate::{Error, Result};

/// Which boundary component(s) a handle attaches into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feet {
    Within(usize),
    Bridge(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Handle {
    /// Handle index k, 1 <= k <= m-1.
    pub index: u32,
    pub feet: Feet,
    /// Meaningful for 1-handles; splitting and surgery handles ignore it.
    pub orientation_preserving: bool,
    /// Surgery framing for m = 4 index-2 handles.
    pub framing: Option<i64>,
    /// Linking numbers with the earlier index-2 handles attached into the
    /// same component, in attachment order.
    pub linking: Vec<i64>,
}

impl Handle {
    pub fn plain(index: u32, feet: Feet) -> Self {
        Handle {
            index,
            feet,
            orientation_preserving: true,
            framing: None,
            linking: Vec::new(),
        }
    }

    pub fn reversing(index: u32, feet: Feet) -> Self {
        Handle {
            orientation_preserving: false,
            ..Handle::plain(index, feet)
        }
    }

    pub fn surgery(component: usize, framing: i64, linking: Vec<i64>) -> Self {
        Handle {
            index: 2,
            feet: Feet::Within(component),
            orientation_preserving: true,
            framing: Some(framing),
            linking,
        }
    }
}

/// Ordered handle attachments to the m-disk. At least one handle; the
/// most-fundamental flag asserts all attachment regions sit disjointly in
/// the original disk boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandlebodyPlan {
    pub dimension: u32,
    pub handles: Vec<Handle>,
    pub most_fundamental: bool,
}

impl HandlebodyPlan {
    pub fn new(dimension: u32, handles: Vec<Handle>) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Malformed(format!(
                "plan dimension must be > 1, got {}",
                dimension
            )));
        }
        if handles.is_empty() {
            return Err(Error::Malformed(
                "a handlebody plan needs at least one handle; the bare disk is not a handlebody"
                    .into(),
            ));
        }
        for (i, h) in handles.iter().enumerate() {
            if h.index < 1 || h.index > dimension - 1 {
                return Err(Error::Malformed(format!(
                    "handle {} has index {}, must be within 1..={}",
                    i,
                    h.index,
                    dimension - 1
                )));
            }
            if h.framing.is_some() && !(dimension == 4 && h.index == 2) {
                return Err(Error::Malformed(format!(
                    "handle {} carries a framing but is not an m=4 2-handle",
                    i
                )));
            }
        }
        Ok(HandlebodyPlan {
            dimension,
            handles,
            most_fundamental: true,
        })
    }

    /// Morse index multiset of the plan read upward (handle to singular
    /// point correspondence).
    pub fn indices(&self) -> Vec<u32> {
        self.handles.iter().map(|h| h.index).collect()
    }
}

/// Euler characteristic of the handlebody: disk plus alternating handles.
pub fn euler_characteristic(plan: &HandlebodyPlan) -> i64 {
    1 + plan
        .handles
        .iter()
        .map(|h| if h.index % 2 == 0 { 1i64 } else { -1i64 })
        .sum::<i64>()
}

/// Per-component boundary state tracked through the attachment simulation.
#[derive(Clone, Debug)]
enum CompState {
    /// m = 2: boundary circles.
    Circle,
    /// m = 3: closed surfaces; `crosscaps > 0` means non-orientable.
    Surface { genus: u32, crosscaps: u32 },
    /// m = 4: closed 3-manifolds with an optional surgery presentation.
    ThreeManifold {
        link: Option<Vec<Vec<i64>>>,
        orientable: bool,
    },
    /// Other dimensions: Euler characteristic only.
    Generic { chi: i64 },
}

impl CompState {
    fn pristine(m: u32) -> Self {
        match m {
            2 => CompState::Circle,
            3 => CompState::Surface {
                genus: 0,
                crosscaps: 0,
            },
            4 => CompState::ThreeManifold {
                link: Some(Vec::new()),
                orientable: true,
            },
            _ => CompState::Generic {
                chi: sphere_chi(m - 1),
            },
        }
    }

    fn chi(&self) -> i64 {
        match self {
            CompState::Circle => 0,
            CompState::Surface { genus, crosscaps } => {
                if *crosscaps > 0 {
                    2 - *crosscaps as i64
                } else {
                    2 - 2 * *genus as i64
                }
            }
            CompState::ThreeManifold { .. } => 0,
            CompState::Generic { chi } => *chi,
        }
    }

    fn orientable(&self) -> Option<bool> {
        match self {
            CompState::Circle => Some(true),
            CompState::Surface { crosscaps, .. } => Some(*crosscaps == 0),
            CompState::ThreeManifold { orientable, .. } => Some(*orientable),
            CompState::Generic { .. } => None,
        }
    }
}

fn sphere_chi(dim: u32) -> i64 {
    if dim % 2 == 0 {
        2
    } else {
        0
    }
}

/// Invariants of one boundary component.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentInvariants {
    pub chi: i64,
    pub orientable: Option<bool>,
    /// Genus for orientable m = 3 components.
    pub genus: Option<u32>,
    /// Crosscap count for non-orientable m = 3 components.
    pub crosscaps: Option<u32>,
    /// First homology for m = 4 components with a surgery presentation.
    pub h1: Option<AbelianInvariants>,
}

#[derive(Clone, Debug)]
pub struct BoundaryInvariants {
    pub components: Vec<ComponentInvariants>,
    /// Euler characteristic of the handlebody itself.
    pub total_chi: i64,
}

/// Track boundary components through the plan's attachments.
pub fn boundary_invariants(plan: &HandlebodyPlan) -> Result<BoundaryInvariants> {
    let m = plan.dimension;
    let mut comps: Vec<Option<CompState>> = vec![Some(CompState::pristine(m))];

    let fetch = |comps: &Vec<Option<CompState>>, c: usize| -> Result<CompState> {
        comps
            .get(c)
            .and_then(|s| s.clone())
            .ok_or_else(|| Error::Malformed(format!("handle attaches into missing component {}", c)))
    };

    for h in &plan.handles {
        match (h.feet, h.index) {
            (Feet::Within(c), k) if k == m - 1 && m > 2 => {
                // Splitting handle: fresh sphere split off.
                fetch(&comps, c)?;
                comps.push(Some(CompState::pristine(m)));
            }
            (Feet::Within(c), 1) => {
                let state = fetch(&comps, c)?;
                let new = match state {
                    CompState::Circle => {
                        if h.orientation_preserving {
                            // In m = 2 the within 1-handle is the splitting
                            // handle: circle -> two circles.
                            comps.push(Some(CompState::Circle));
                            CompState::Circle
                        } else {
                            // Moebius handle: component count unchanged.
                            CompState::Circle
                        }
                    }
                    CompState::Surface { genus, crosscaps } => {
                        if crosscaps > 0 {
                            CompState::Surface {
                                genus: 0,
                                crosscaps: crosscaps + 2,
                            }
                        } else if h.orientation_preserving {
                            CompState::Surface {
                                genus: genus + 1,
                                crosscaps: 0,
                            }
                        } else {
                            CompState::Surface {
                                genus: 0,
                                crosscaps: 2 * genus + 2,
                            }
                        }
                    }
                    CompState::ThreeManifold { link, orientable } => {
                        if h.orientation_preserving {
                            // Connected sum with S^1 x S^2: a 0-framed
                            // unlinked unknot component.
                            CompState::ThreeManifold {
                                link: link.map(|l| extend_link(l, 0, &[])),
                                orientable,
                            }
                        } else {
                            CompState::ThreeManifold {
                                link: None,
                                orientable: false,
                            }
                        }
                    }
                    CompState::Generic { chi } => CompState::Generic {
                        chi: chi - 2 + sphere_chi(m - 2),
                    },
                };
                comps[c] = Some(new);
            }
            (Feet::Within(c), 2) if m == 4 => {
                let state = fetch(&comps, c)?;
                let framing = h.framing.ok_or_else(|| {
                    Error::Malformed("m=4 surgery 2-handle without framing".into())
                })?;
                let new = match state {
                    CompState::ThreeManifold { link, orientable } => CompState::ThreeManifold {
                        link: link.map(|l| extend_link(l, framing, &h.linking)),
                        orientable,
                    },
                    _ => unreachable!("m=4 components are ThreeManifold"),
                };
                comps[c] = Some(new);
            }
            (Feet::Within(c), k) => {
                // Middle-index handle in higher dimensions: chi bookkeeping
                // only.
                let state = fetch(&comps, c)?;
                let chi = state.chi() - sphere_chi(k - 1) + sphere_chi(m - k - 1);
                comps[c] = Some(CompState::Generic { chi });
            }
            (Feet::Bridge(c1, c2), 1) => {
                if c1 == c2 {
                    return Err(Error::Malformed(
                        "bridge handle needs two distinct components".into(),
                    ));
                }
                let s1 = fetch(&comps, c1)?;
                let s2 = fetch(&comps, c2)?;
                let merged = merge_components(m, s1, s2)?;
                let (keep, drop) = if c1 < c2 { (c1, c2) } else { (c2, c1) };
                comps[keep] = Some(merged);
                comps[drop] = None;
            }
            (Feet::Bridge(..), k) => {
                return Err(Error::Malformed(format!(
                    "only 1-handles may bridge components, got index {}",
                    k
                )));
            }
        }
    }

    let components: Vec<ComponentInvariants> = comps
        .into_iter()
        .flatten()
        .map(|state| component_invariants(m, state))
        .collect::<Result<_>>()?;

    let total_chi = euler_characteristic(plan);
    if m % 2 == 1 {
        let boundary_chi: i64 = components.iter().map(|c| c.chi).sum();
        if boundary_chi != 2 * total_chi {
            return Err(Error::internal(
                "boundary-chi",
                format!(
                    "odd m: sum chi(boundary) = {} but 2 chi(handlebody) = {}",
                    boundary_chi,
                    2 * total_chi
                ),
            ));
        }
    }

    Ok(BoundaryInvariants {
        components,
        total_chi,
    })
}

fn component_invariants(m: u32, state: CompState) -> Result<ComponentInvariants> {
    let chi = state.chi();
    let orientable = state.orientable();
    let (genus, crosscaps) = match &state {
        CompState::Surface { genus, crosscaps } => {
            if *crosscaps > 0 {
                (None, Some(*crosscaps))
            } else {
                (Some(*genus), None)
            }
        }
        _ => (None, None),
    };
    let h1 = match &state {
        CompState::ThreeManifold {
            link: Some(rows), ..
        } => {
            let n = rows.len();
            let mut entries = Vec::with_capacity(n * n);
            for r in rows {
                for &x in r {
                    entries.push(x.into());
                }
            }
            Some(cokernel_invariants(&IntMatrix::new(n, n, entries)?)?)
        }
        _ => None,
    };
    let _ = m;
    Ok(ComponentInvariants {
        chi,
        orientable,
        genus,
        crosscaps,
        h1,
    })
}

fn merge_components(m: u32, a: CompState, b: CompState) -> Result<CompState> {
    Ok(match (a, b) {
        (CompState::Circle, CompState::Circle) => CompState::Circle,
        (
            CompState::Surface {
                genus: g1,
                crosscaps: c1,
            },
            CompState::Surface {
                genus: g2,
                crosscaps: c2,
            },
        ) => {
            // Connected sum; any non-orientable summand converts genus to
            // crosscaps (N_a # T^g = N_{a+2g}).
            if c1 == 0 && c2 == 0 {
                CompState::Surface {
                    genus: g1 + g2,
                    crosscaps: 0,
                }
            } else {
                CompState::Surface {
                    genus: 0,
                    crosscaps: c1 + 2 * g1 + c2 + 2 * g2,
                }
            }
        }
        (
            CompState::ThreeManifold {
                link: l1,
                orientable: o1,
            },
            CompState::ThreeManifold {
                link: l2,
                orientable: o2,
            },
        ) => {
            // H1 of a connected sum is the direct sum: block-diagonal link.
            let link = match (l1, l2) {
                (Some(a), Some(b)) => Some(block_diag(a, b)),
                _ => None,
            };
            CompState::ThreeManifold {
                link,
                orientable: o1 && o2,
            }
        }
        (a, b) => CompState::Generic {
            chi: a.chi() + b.chi() - 2 + sphere_chi(m - 2),
        },
    })
}

fn extend_link(mut rows: Vec<Vec<i64>>, framing: i64, linking: &[i64]) -> Vec<Vec<i64>> {
    let n = rows.len();
    let mut new_row = vec![0i64; n + 1];
    for (j, &l) in linking.iter().enumerate().take(n) {
        new_row[j] = l;
        rows[j].push(l);
    }
    for row in rows.iter_mut() {
        if row.len() < n + 1 {
            row.push(0);
        }
    }
    new_row[n] = framing;
    rows.push(new_row);
    rows
}

fn block_diag(a: Vec<Vec<i64>>, b: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let (na, nb) = (a.len(), b.len());
    let mut out = vec![vec![0i64; na + nb]; na + nb];
    for i in 0..na {
        out[i][..na].copy_from_slice(&a[i]);
    }
    for i in 0..nb {
        out[na + i][na..].copy_from_slice(&b[i]);
    }
    out
}

/// The disk-boundary plan: split the sphere in two, then bridge the halves.
/// Its boundary is again a single sphere.
pub fn sphere_example_plan(m: u32) -> HandlebodyPlan {
    HandlebodyPlan::new(
        m,
        vec![
            Handle::plain(m - 1, Feet::Within(0)),
            Handle::plain(1, Feet::Bridge(0, 1)),
        ],
    )
    .expect("static plan is valid")
}

/// Build a most fundamental plan whose boundary realizes the target labels,
/// one boundary component per target, in order.
///
/// Layout: `targets.len() - 1` splitting handles first (components 0..l),
/// then per-component decoration: genus or crosscap 1-handles for m = 3,
/// one framed 2-handle per surgery link component for m = 4. A single
/// sphere target gets the split-and-bridge disk plan since a plan may not
/// be empty.
pub fn attach_plan_for_boundary(m: u32, targets: &[PreimageLabel]) -> Result<HandlebodyPlan> {
    if targets.is_empty() {
        return Err(Error::Precondition("targets must be non-empty".into()));
    }
    for t in targets {
        if let Err(msg) = t.legality(m) {
            return Err(Error::Precondition(format!("illegal target for m={}: {}", m, msg)));
        }
    }

    if targets.len() == 1 && targets[0].is_sphere(m) {
        return Ok(sphere_example_plan(m));
    }

    let mut handles = Vec::new();
    for _ in 1..targets.len() {
        handles.push(Handle::plain(m - 1, Feet::Within(0)));
    }
    for (j, target) in targets.iter().enumerate() {
        match target {
            PreimageLabel::Sphere => {}
            PreimageLabel::Surface {
                orientable,
                genus,
                crosscaps,
            } => {
                if *orientable {
                    for _ in 0..*genus {
                        handles.push(Handle::plain(1, Feet::Within(j)));
                    }
                } else {
                    for _ in 0..crosscaps / 2 {
                        handles.push(Handle::reversing(1, Feet::Within(j)));
                    }
                }
            }
            PreimageLabel::Surgery { matrix } => {
                for i in 0..matrix.len() {
                    let linking = matrix[i][..i].to_vec();
                    handles.push(Handle::surgery(j, matrix[i][i], linking));
                }
            }
        }
    }

    // Multi-target plans always have the splits; a single non-sphere target
    // has its decoration handles.
    HandlebodyPlan::new(m, handles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn euler_characteristic_counts() {
        let ex = sphere_example_plan(3);
        assert_eq!(euler_characteristic(&ex), 1);

        let two_ones = HandlebodyPlan::new(
            3,
            vec![
                Handle::plain(1, Feet::Within(0)),
                Handle::plain(1, Feet::Within(0)),
            ],
        )
        .unwrap();
        assert_eq!(euler_characteristic(&two_ones), -1);
    }

    #[test]
    fn disk_example_boundary_is_sphere() {
        for m in [2u32, 3, 4, 5, 6] {
            let plan = sphere_example_plan(m);
            let inv = boundary_invariants(&plan).unwrap();
            assert_eq!(inv.components.len(), 1, "m={}", m);
            let c = &inv.components[0];
            assert_eq!(c.chi, sphere_chi(m - 1), "m={}", m);
            if m == 3 {
                assert_eq!(c.genus, Some(0));
                assert_eq!(c.orientable, Some(true));
            }
            if m == 4 {
                assert!(c.h1.as_ref().unwrap().is_trivial());
            }
        }
    }

    #[test]
    fn genus_two_boundary() {
        let plan = HandlebodyPlan::new(
            3,
            vec![
                Handle::plain(1, Feet::Within(0)),
                Handle::plain(1, Feet::Within(0)),
            ],
        )
        .unwrap();
        let inv = boundary_invariants(&plan).unwrap();
        assert_eq!(inv.components.len(), 1);
        assert_eq!(inv.components[0].genus, Some(2));
        assert_eq!(inv.components[0].chi, -2);
    }

    #[test]
    fn klein_bottle_boundary() {
        let plan = HandlebodyPlan::new(3, vec![Handle::reversing(1, Feet::Within(0))]).unwrap();
        let inv = boundary_invariants(&plan).unwrap();
        assert_eq!(inv.components.len(), 1);
        assert_eq!(inv.components[0].crosscaps, Some(2));
        assert_eq!(inv.components[0].chi, 0);
        assert_eq!(inv.components[0].orientable, Some(false));
    }

    #[test]
    fn zero_framed_surgery_gives_free_h1() {
        let plan = HandlebodyPlan::new(4, vec![Handle::surgery(0, 0, vec![])]).unwrap();
        let inv = boundary_invariants(&plan).unwrap();
        let h1 = inv.components[0].h1.as_ref().unwrap();
        assert_eq!(h1.free_rank, 1);
        assert!(h1.torsion.is_empty());
    }

    #[test]
    fn attach_plan_examples() {
        // Two surfaces of genus 1 and 2.
        let plan = attach_plan_for_boundary(
            3,
            &[PreimageLabel::surface(1), PreimageLabel::surface(2)],
        )
        .unwrap();
        assert_eq!(
            plan.indices(),
            vec![2, 1, 1, 1],
            "one split then three genus handles"
        );
        let inv = boundary_invariants(&plan).unwrap();
        assert_eq!(inv.components.len(), 2);
        assert_eq!(inv.components[0].chi, 0);
        assert_eq!(inv.components[1].chi, -2);

        // Lens-type surgery on one component.
        let plan =
            attach_plan_for_boundary(4, &[PreimageLabel::surgery(vec![vec![3]])]).unwrap();
        assert_eq!(plan.indices(), vec![2]);
        let inv = boundary_invariants(&plan).unwrap();
        let h1 = inv.components[0].h1.as_ref().unwrap();
        assert_eq!(h1.torsion, vec![BigInt::from(3)]);

        // Single sphere target in any dimension is the disk example plan.
        let plan = attach_plan_for_boundary(3, &[PreimageLabel::Sphere]).unwrap();
        assert_eq!(plan.indices(), vec![2, 1]);

        assert!(attach_plan_for_boundary(3, &[]).is_err());
        assert!(attach_plan_for_boundary(2, &[PreimageLabel::surface(1)]).is_err());
    }

    #[test]
    fn round_trip_plan_matches_targets() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let m = if rng.gen_bool(0.5) { 3 } else { 4 };
            let count = rng.gen_range(1..=4);
            let targets: Vec<PreimageLabel> = (0..count)
                .map(|_| random_target(m, &mut rng))
                .collect();
            let plan = attach_plan_for_boundary(m, &targets).unwrap();
            let inv = boundary_invariants(&plan).unwrap();
            assert_eq!(inv.components.len(), targets.len());
            for (comp, target) in inv.components.iter().zip(&targets) {
                match target {
                    PreimageLabel::Sphere => {
                        assert_eq!(comp.chi, sphere_chi(m - 1));
                        if m == 3 {
                            assert_eq!(comp.genus, Some(0));
                        }
                        if m == 4 {
                            assert!(comp.h1.as_ref().unwrap().is_trivial());
                        }
                    }
                    PreimageLabel::Surface { .. } => {
                        assert_eq!(comp.chi, target.surface_chi().unwrap());
                        assert_eq!(comp.orientable, Some(target.orientable()));
                    }
                    PreimageLabel::Surgery { matrix } => {
                        let n = matrix.len();
                        let entries =
                            matrix.iter().flatten().map(|&x| BigInt::from(x)).collect();
                        let expected =
                            cokernel_invariants(&IntMatrix::new(n, n, entries).unwrap()).unwrap();
                        assert_eq!(comp.h1.as_ref().unwrap(), &expected);
                    }
                }
            }
            // Odd-m cross-check runs inside boundary_invariants; even m
            // components are closed odd-dimensional, chi = 0.
            if m % 2 == 0 {
                assert!(inv.components.iter().all(|c| c.chi == 0));
            }
        }
    }

    fn random_target(m: u32, rng: &mut rand_chacha::ChaCha8Rng) -> PreimageLabel {
        if m == 3 {
            match rng.gen_range(0..3) {
                0 => PreimageLabel::Sphere,
                1 => PreimageLabel::surface(rng.gen_range(0..=5)),
                _ => PreimageLabel::klein_sum(2 * rng.gen_range(1..=3)),
            }
        } else {
            if rng.gen_bool(0.25) {
                return PreimageLabel::Sphere;
            }
            let n = rng.gen_range(0..=4);
            let mut matrix = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in 0..=i {
                    let v = rng.gen_range(-5i64..=5);
                    matrix[i][j] = v;
                    matrix[j][i] = v;
                }
            }
            PreimageLabel::surgery(matrix)
        }
    }

    #[test]
    fn determinism() {
        let targets = vec![PreimageLabel::surface(2), PreimageLabel::Sphere];
        let a = attach_plan_for_boundary(3, &targets).unwrap();
        let b = attach_plan_for_boundary(3, &targets).unwrap();
        assert_eq!(a, b);
    }
}
