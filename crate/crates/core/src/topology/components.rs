use crate::scenario::{Face, VoxelDomain};
use serde::Serialize;

pub const NO_LABEL: u32 = u32::MAX;

/// Which flood-fill procedure to run. Both give the same canonical labels;
/// they exist so one can check the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanOrder {
    /// Union-find over a forward raster scan.
    Forward,
    /// Breadth-first search seeded from the last cell backwards.
    Reverse,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentLabeling {
    /// Label per grid cell, `NO_LABEL` outside the mask. Labels are numbered
    /// by the smallest cell index of each component.
    #[serde(skip)]
    pub labels: Vec<u32>,
    pub count: usize,
    pub sizes: Vec<usize>,
    /// Faces separating each component from the rest (including walls inside it).
    #[serde(skip)]
    pub boundary_faces: Vec<Vec<Face>>,
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[x as usize];
        parent[x as usize] = parent[p as usize];
        x = p;
    }
    x
}

fn canonical(raw: &[u32]) -> (Vec<u32>, Vec<usize>) {
    let mut map = std::collections::HashMap::new();
    let mut labels = vec![NO_LABEL; raw.len()];
    let mut sizes = Vec::new();
    for (i, &r) in raw.iter().enumerate() {
        if r == NO_LABEL {
            continue;
        }
        let next = map.len() as u32;
        let l = *map.entry(r).or_insert(next);
        if l as usize == sizes.len() {
            sizes.push(0);
        }
        sizes[l as usize] += 1;
        labels[i] = l;
    }
    (labels, sizes)
}

fn linked(domain: &VoxelDomain, mask: &[bool], i: usize, axis: usize, up: bool) -> Option<usize> {
    if domain.is_wall(i, axis, up) {
        return None;
    }
    domain.grid().step(i, axis, up).filter(|&j| mask[j])
}

/// Canonical component labels of `mask` under face adjacency, honoring the
/// domain's blocked faces. Returns labels and sizes.
pub fn label_cells(domain: &VoxelDomain, mask: &[bool]) -> (Vec<u32>, Vec<usize>) {
    label_cells_ordered(domain, mask, ScanOrder::Forward)
}

pub fn label_cells_ordered(domain: &VoxelDomain, mask: &[bool], order: ScanOrder) -> (Vec<u32>, Vec<usize>) {
    let g = domain.grid();
    let n = g.len();
    let mut raw = vec![NO_LABEL; n];
    match order {
        ScanOrder::Forward => {
            let mut parent: Vec<u32> = (0..n as u32).collect();
            for i in 0..n {
                if !mask[i] {
                    continue;
                }
                for a in 0..g.dim {
                    if let Some(j) = linked(domain, mask, i, a, false) {
                        let (ri, rj) = (find(&mut parent, i as u32), find(&mut parent, j as u32));
                        if ri != rj {
                            parent[ri.max(rj) as usize] = ri.min(rj);
                        }
                    }
                }
            }
            for i in 0..n {
                if mask[i] {
                    raw[i] = find(&mut parent, i as u32);
                }
            }
        }
        ScanOrder::Reverse => {
            let mut next = 0u32;
            let mut queue = std::collections::VecDeque::new();
            for s in (0..n).rev() {
                if !mask[s] || raw[s] != NO_LABEL {
                    continue;
                }
                raw[s] = next;
                queue.push_back(s);
                while let Some(i) = queue.pop_front() {
                    for a in (0..g.dim).rev() {
                        for up in [true, false] {
                            if let Some(j) = linked(domain, mask, i, a, up) {
                                if raw[j] == NO_LABEL {
                                    raw[j] = next;
                                    queue.push_back(j);
                                }
                            }
                        }
                    }
                }
                next += 1;
            }
        }
    }
    canonical(&raw)
}

/// Connected components of `mask` with their boundary inventories.
pub fn components(domain: &VoxelDomain, mask: &[bool], order: ScanOrder) -> ComponentLabeling {
    let (labels, sizes) = label_cells_ordered(domain, mask, order);
    let g = domain.grid();
    let mut boundary_faces = vec![Vec::new(); sizes.len()];
    for i in 0..g.len() {
        let l = labels[i];
        if l == NO_LABEL {
            continue;
        }
        for a in 0..g.dim {
            for up in [false, true] {
                let out = match g.step(i, a, up) {
                    None => true,
                    Some(j) => !mask[j] || (up && domain.is_wall(i, a, true)) || (!up && domain.is_wall(i, a, false)),
                };
                // walls between two cells of the component are listed once, from below
                let wall_inside = g.step(i, a, up).map_or(false, |j| mask[j]) && !up;
                if out && !wall_inside {
                    boundary_faces[l as usize].push(g.face_of(i, a, up));
                }
            }
        }
    }
    for b in &mut boundary_faces {
        b.sort_unstable();
    }
    ComponentLabeling { count: sizes.len(), labels, sizes, boundary_faces }
}
