//! Synthetic Manhattan-style networks.

use crate::density::{Region, StreetAttributes, StreetType, Zone};
use crate::geometry::Point;
use crate::network::{StreetInfo, StreetNetwork, VertexKind};

/// Attribute levels given to the streets of a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridStyle {
    /// East-west streets, one per row.
    pub horizontal: StreetAttributes,
    /// North-south streets, one per column.
    pub vertical: StreetAttributes,
}

impl Default for GridStyle {
    fn default() -> Self {
        GridStyle {
            horizontal: StreetAttributes::new(Region::Central, StreetType::Street, Zone::Mixed),
            vertical: StreetAttributes::new(Region::Central, StreetType::Avenue, Zone::Mixed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GridError {
    #[error("grid needs at least 2 rows and 2 columns, got {rows}x{cols}")]
    TooSmall { rows: usize, cols: usize },
    #[error("block length must be positive, got {0}")]
    InvalidBlock(f64),
}

/// A `rows x cols` lattice with `block`-meter blocks.
///
/// Vertex `r * cols + c` sits at `(c * block, r * block)`. Row `r` is street
/// `r + 1`, column `c` is street `rows + c + 1`. Horizontal edges come
/// first, row by row, then vertical edges, column by column. The depot is
/// the vertex nearest the centroid.
pub fn generate_grid_network(
    rows: usize,
    cols: usize,
    block: f64,
    style: GridStyle,
) -> Result<StreetNetwork, GridError> {
    if rows < 2 || cols < 2 {
        return Err(GridError::TooSmall { rows, cols });
    }
    if !(block > 0.0 && block.is_finite()) {
        return Err(GridError::InvalidBlock(block));
    }
    let mut net = StreetNetwork::new();
    for r in 0..rows {
        net.add_street(StreetInfo {
            id: (r + 1) as u32,
            name: format!("Street {}", r + 1),
            attributes: style.horizontal,
        })
        .expect("fresh ids");
    }
    for c in 0..cols {
        net.add_street(StreetInfo {
            id: (rows + c + 1) as u32,
            name: format!("Avenue {}", c + 1),
            attributes: style.vertical,
        })
        .expect("fresh ids");
    }
    for r in 0..rows {
        for c in 0..cols {
            net.add_vertex(Point::new(c as f64 * block, r as f64 * block), VertexKind::Corner)
                .expect("corners never conflict");
        }
    }
    let id = |r: usize, c: usize| r * cols + c;
    for r in 0..rows {
        for c in 0..cols - 1 {
            net.add_edge(id(r, c), id(r, c + 1), block, (r + 1) as u32)
                .expect("valid grid edge");
        }
    }
    for c in 0..cols {
        for r in 0..rows - 1 {
            net.add_edge(id(r, c), id(r + 1, c), block, (rows + c + 1) as u32)
                .expect("valid grid edge");
        }
    }
    let depot = net.vertex_nearest_centroid().expect("non-empty grid");
    net.set_depot(depot).expect("depot exists");
    Ok(net)
}
