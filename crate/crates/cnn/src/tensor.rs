//! Dense rank-4 tensors over `f32` or `f64`.

use num_traits::Float;
use voxelizer::VoxelGrid;

/// Element type of all network math. Everything runs in either `f32`
/// (training speed) or `f64` (verification: gradient checks, determinism,
/// checkpoints are bit-exact in double precision).
pub trait Scalar: Float + Copy + Send + Sync + std::fmt::Debug + 'static {
    fn of(x: f64) -> Self;
    fn f64(self) -> f64;
}

impl Scalar for f32 {
    #[inline(always)]
    fn of(x: f64) -> Self {
        x as f32
    }
    #[inline(always)]
    fn f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    #[inline(always)]
    fn of(x: f64) -> Self {
        x
    }
    #[inline(always)]
    fn f64(self) -> f64 {
        self
    }
}

/// Shape `(channels, x, y, z)`, stored densely with x fastest, then y, then
/// z, channel-major — the same element order a `VoxelGrid` uses, so grid
/// data becomes channel 0 of a tensor without reshuffling.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4<F> {
    dims: [usize; 4],
    data: Vec<F>,
}

impl<F: Scalar> Tensor4<F> {
    pub fn new(dims: [usize; 4], data: Vec<F>) -> Self {
        assert_eq!(
            dims.iter().product::<usize>(),
            data.len(),
            "element count must match the shape"
        );
        Tensor4 { dims, data }
    }

    pub fn zeros(dims: [usize; 4]) -> Self {
        Tensor4 {
            dims,
            data: vec![F::zero(); dims.iter().product()],
        }
    }

    /// An occupancy grid as a 1-channel tensor (0.0 / 1.0 values).
    pub fn from_voxels(grid: &VoxelGrid) -> Self {
        let r = grid.resolution();
        Tensor4 {
            dims: [1, r, r, r],
            data: grid.data().iter().map(|&b| F::of(b as f64)).collect(),
        }
    }

    pub fn dims(&self) -> [usize; 4] {
        self.dims
    }

    /// Spatial side length; the network stack only ever sees cubes.
    pub fn side(&self) -> usize {
        assert!(
            self.dims[1] == self.dims[2] && self.dims[2] == self.dims[3],
            "spatial dims must be cubic"
        );
        self.dims[1]
    }

    pub fn channels(&self) -> usize {
        self.dims[0]
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [F] {
        &mut self.data
    }

    #[inline]
    fn index(&self, c: usize, x: usize, y: usize, z: usize) -> usize {
        let [_, nx, ny, _] = self.dims;
        ((c * self.dims[3] + z) * ny + y) * nx + x
    }

    pub fn get(&self, c: usize, x: usize, y: usize, z: usize) -> F {
        self.data[self.index(c, x, y, z)]
    }

    pub fn set(&mut self, c: usize, x: usize, y: usize, z: usize, v: F) {
        let i = self.index(c, x, y, z);
        self.data[i] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_order_is_x_fastest_then_y_then_z_then_channel() {
        let mut t = Tensor4::<f64>::zeros([2, 3, 3, 3]);
        t.set(0, 1, 0, 0, 1.0);
        t.set(0, 0, 1, 0, 2.0);
        t.set(0, 0, 0, 1, 3.0);
        t.set(1, 0, 0, 0, 4.0);
        assert_eq!(t.data()[1], 1.0);
        assert_eq!(t.data()[3], 2.0);
        assert_eq!(t.data()[9], 3.0);
        assert_eq!(t.data()[27], 4.0);
    }

    #[test]
    fn voxel_grid_data_becomes_channel_zero_verbatim() {
        use voxelizer::Frame;
        let mut g = VoxelGrid::new(4, Frame::IDENTITY);
        g.set(1, 2, 3, true);
        g.set(3, 0, 0, true);
        let t = Tensor4::<f32>::from_voxels(&g);
        assert_eq!(t.dims(), [1, 4, 4, 4]);
        for z in 0..4 {
            for y in 0..4 {
                for x in 0..4 {
                    let want = if g.get(x, y, z) { 1.0 } else { 0.0 };
                    assert_eq!(t.get(0, x, y, z), want);
                }
            }
        }
    }
}
