use super::components::{components, ScanOrder};
use crate::scenario::{BoundaryLabeling, Face, VoxelDomain};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HoleClass {
    /// Every face shared with the domain is Dirichlet; stays outside.
    DirichletEnclosed,
    /// Meets the Neumann part; merged into the completed domain.
    Attached,
}

#[derive(Clone, Debug, Serialize)]
pub struct HoleInfo {
    pub label: u32,
    pub cells: usize,
    pub class: HoleClass,
    pub touches_box: bool,
    pub shared_faces: usize,
    pub shared_dirichlet: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundaryType {
    #[serde(rename = "D")]
    D,
    #[serde(rename = "D ∪ ∂B")]
    DAndBox,
}

impl std::fmt::Display for BoundaryType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundaryType::D => "D",
            BoundaryType::DAndBox => "D ∪ ∂B",
        })
    }
}

/// The completed domain `Ω•`: the original cells plus every attached hole,
/// with Dirichlet faces kept as walls and Neumann cracks opened.
#[derive(Clone, Debug, Serialize)]
pub struct BulletDomain {
    #[serde(skip)]
    pub domain: VoxelDomain,
    pub holes: Vec<HoleInfo>,
    pub boundary_type: BoundaryType,
    pub cells: usize,
}

/// Shared faces between the hole with label `l` and the inside set.
fn shared_faces(domain: &VoxelDomain, labels: &[u32], l: u32) -> Vec<Face> {
    let g = domain.grid();
    let mut out = Vec::new();
    for i in 0..g.len() {
        if labels[i] != l {
            continue;
        }
        for a in 0..g.dim {
            for up in [false, true] {
                if let Some(j) = g.step(i, a, up) {
                    if domain.is_inside(j) {
                        out.push(g.face_of(i, a, up));
                    }
                }
            }
        }
    }
    out
}

fn touches_edge(domain: &VoxelDomain, i: usize) -> bool {
    let g = domain.grid();
    let c = g.coords(i);
    (0..g.dim).any(|a| c[a] == 0 || c[a] + 1 == g.dims[a])
}

pub fn build_bullet(domain: &VoxelDomain, labeling: &BoundaryLabeling) -> BulletDomain {
    build_bullet_ordered(domain, labeling, ScanOrder::Forward)
}

pub fn build_bullet_ordered(domain: &VoxelDomain, labeling: &BoundaryLabeling, order: ScanOrder) -> BulletDomain {
    let g = domain.grid();
    let outside: Vec<bool> = domain.inside().iter().map(|&b| !b).collect();
    let comps = components(domain, &outside, order);
    let mut mask = domain.inside().to_vec();
    let mut holes = Vec::new();
    for l in 0..comps.count as u32 {
        let shared = shared_faces(domain, &comps.labels, l);
        let shared_dirichlet = shared.iter().filter(|f| labeling.is_dirichlet(f)).count();
        let class = if shared_dirichlet == shared.len() { HoleClass::DirichletEnclosed } else { HoleClass::Attached };
        let mut touches_box = false;
        for i in 0..g.len() {
            if comps.labels[i] == l {
                touches_box |= touches_edge(domain, i);
                if class == HoleClass::Attached {
                    mask[i] = true;
                }
            }
        }
        holes.push(HoleInfo {
            label: l,
            cells: comps.sizes[l as usize],
            class,
            touches_box,
            shared_faces: shared.len(),
            shared_dirichlet,
        });
    }
    let blocked: BTreeSet<Face> = labeling
        .dirichlet
        .iter()
        .copied()
        .filter(|&f| match g.face_cells(f) {
            (Some(a), Some(b)) => mask[a] && mask[b],
            _ => false,
        })
        .collect();
    let boundary_type = if (0..g.len()).any(|i| mask[i] && touches_edge(domain, i)) {
        BoundaryType::DAndBox
    } else {
        BoundaryType::D
    };
    let cells = mask.iter().filter(|&&b| b).count();
    BulletDomain { domain: domain.with_cells(mask, blocked), holes, boundary_type, cells }
}

impl BulletDomain {
    /// Labeling of the completed domain in which the whole boundary is Dirichlet.
    pub fn full_labeling(&self) -> BoundaryLabeling {
        BoundaryLabeling::from_faces(&self.domain, self.domain.boundary_faces().into_iter().collect())
    }

    pub fn count(&self, class: HoleClass) -> usize {
        self.holes.iter().filter(|h| h.class == class).count()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BulletCheck {
    pub pass: bool,
    pub boundary_type: BoundaryType,
    pub contains_domain: bool,
    pub connected: bool,
    /// Interior faces of `∂Ω•` that are not in `D`, and `D` faces missing from `∂Ω•`.
    pub discrepancies: Vec<Face>,
    /// Grid-edge faces that should be on `∂Ω•` but are not (or the reverse for type `D`).
    pub box_discrepancies: usize,
    pub holes_consistent: bool,
    pub scan_order_independent: bool,
}

/// Face-level check of `∂Ω• = D` or `∂Ω• = D ∪ ∂B`, plus structural checks
/// and a rebuild with the other flood-fill order.
pub fn verify_bullet(bullet: &BulletDomain, domain: &VoxelDomain, labeling: &BoundaryLabeling) -> BulletCheck {
    let g = domain.grid();
    let b = &bullet.domain;
    let contains_domain = (0..g.len()).all(|i| !domain.is_inside(i) || b.is_inside(i));
    let connected = components(b, b.inside(), ScanOrder::Forward).count == 1;
    let boundary = b.boundary_faces();
    let mut discrepancies = Vec::new();
    let mut edge_faces = 0usize;
    for &f in &boundary {
        if g.on_edge(f) {
            edge_faces += 1;
        } else if !labeling.is_dirichlet(&f) {
            discrepancies.push(f);
        }
    }
    let on_boundary: BTreeSet<Face> = boundary.iter().copied().collect();
    for f in &labeling.dirichlet {
        if !on_boundary.contains(f) {
            discrepancies.push(*f);
        }
    }
    discrepancies.sort_unstable();
    let total_edge: usize = (0..g.dim).map(|a| 2 * g.len() / g.dims[a]).sum();
    let box_discrepancies = match bullet.boundary_type {
        BoundaryType::D => edge_faces,
        // in 1D the box boundary has two points and the completion may reach only one
        BoundaryType::DAndBox if g.dim == 1 => usize::from(edge_faces == 0),
        BoundaryType::DAndBox => total_edge - edge_faces,
    };
    let outside: Vec<bool> = domain.inside().iter().map(|&x| !x).collect();
    let comps = components(domain, &outside, ScanOrder::Forward);
    let holes_consistent = bullet.holes.iter().all(|h| {
        (0..g.len())
            .filter(|&i| comps.labels[i] == h.label)
            .all(|i| b.is_inside(i) == (h.class == HoleClass::Attached))
    });
    let again = build_bullet_ordered(domain, labeling, ScanOrder::Reverse);
    let scan_order_independent = again.domain.inside() == b.inside() && again.domain.blocked() == b.blocked();
    let pass = contains_domain
        && connected
        && discrepancies.is_empty()
        && box_discrepancies == 0
        && holes_consistent
        && scan_order_independent;
    BulletCheck {
        pass,
        boundary_type: bullet.boundary_type,
        contains_domain,
        connected,
        discrepancies,
        box_discrepancies,
        holes_consistent,
        scan_order_independent,
    }
}
