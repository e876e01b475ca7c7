/// World-to-grid map: `g = w * scale + translate` per axis, so voxel
/// `(x, y, z)` covers the half-open world cube mapping onto
/// `[x, x+1) x [y, y+1) x [z, z+1)` in grid coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub scale: f64,
    pub translate: [f64; 3],
}

impl Frame {
    pub const IDENTITY: Frame = Frame { scale: 1.0, translate: [0.0; 3] };

    pub fn to_grid(&self, p: [f64; 3]) -> [f64; 3] {
        [
            p[0] * self.scale + self.translate[0],
            p[1] * self.scale + self.translate[1],
            p[2] * self.scale + self.translate[2],
        ]
    }
}

/// Dense binary occupancy grid, cubic, one byte per voxel (0 free, 1 part).
/// Memory order is x-fastest: `index = x + r*(y + r*z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VoxelGrid {
    r: usize,
    data: Vec<u8>,
    pub frame: Frame,
    /// Set when the source mesh was open, so only surface voxels are marked.
    pub surface_only: bool,
}

impl VoxelGrid {
    pub fn new(r: usize, frame: Frame) -> VoxelGrid {
        assert!(r >= 2, "resolution must be at least 2");
        VoxelGrid { r, data: vec![0; r * r * r], frame, surface_only: false }
    }

    pub fn resolution(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        debug_assert!(x < self.r && y < self.r && z < self.r);
        x + self.r * (y + self.r * z)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> bool {
        self.data[self.index(x, y, z)] != 0
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, z: usize, v: bool) {
        let i = self.index(x, y, z);
        self.data[i] = v as u8;
    }

    pub fn count(&self) -> usize {
        self.data.iter().map(|&v| v as usize).sum()
    }

    pub fn fill_fraction(&self) -> f64 {
        self.count() as f64 / self.data.len() as f64
    }

    /// Raw occupancy bytes in memory order (x-fastest), values 0 or 1.
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    /// Rebuild from raw bytes; `data` must hold r^3 values in {0, 1}.
    pub fn from_data(r: usize, data: Vec<u8>, frame: Frame) -> VoxelGrid {
        assert_eq!(data.len(), r * r * r);
        assert!(data.iter().all(|&v| v <= 1), "occupancy bytes must be 0 or 1");
        VoxelGrid { r, data, frame, surface_only: false }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_is_x_fastest() {
        let mut g = VoxelGrid::new(4, Frame::IDENTITY);
        g.set(1, 0, 0, true);
        g.set(0, 2, 0, true);
        g.set(0, 0, 3, true);
        assert_eq!(g.index(1, 0, 0), 1);
        assert_eq!(g.index(0, 2, 0), 8);
        assert_eq!(g.index(0, 0, 3), 48);
        assert_eq!(g.count(), 3);
        assert!(g.get(0, 2, 0));
        assert!(!g.get(2, 0, 0));
    }

    #[test]
    fn frame_maps_world_to_grid() {
        let f = Frame { scale: 2.0, translate: [1.0, -1.0, 0.5] };
        assert_eq!(f.to_grid([3.0, 3.0, 3.0]), [7.0, 5.0, 6.5]);
    }
}
