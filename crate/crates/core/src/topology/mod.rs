//! Connected components, the completion `Ω•` and crack removal `Λ★`.

mod bullet;
mod components;
mod star;

pub use bullet::{build_bullet, build_bullet_ordered, verify_bullet, BoundaryType, BulletCheck, BulletDomain, HoleClass, HoleInfo};
pub use components::{components, label_cells, label_cells_ordered, ComponentLabeling, ScanOrder, NO_LABEL};
pub use star::{build_star, StarDomain};
