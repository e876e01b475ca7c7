//! Network architecture descriptions and the Table-2 training presets.

use crate::error::CnnError;

pub const LEAKY_SLOPE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Activation {
    /// Identity; used by the output layer so scores stay raw.
    Linear,
    Relu,
    LeakyRelu(f64),
}

impl Activation {
    pub fn leaky() -> Self {
        Activation::LeakyRelu(LEAKY_SLOPE)
    }
}

/// One layer of the stack. Convolutions are fixed at 3^3 kernels, stride 1,
/// zero padding 1 (spatial size preserved); pooling is a 2^3 max pool
/// (spatial size halved). The activation is applied to the layer's output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LayerSpec {
    Conv {
        in_ch: usize,
        out_ch: usize,
        act: Activation,
    },
    Pool,
    Fc {
        inputs: usize,
        outputs: usize,
        act: Activation,
    },
}

/// The tensor shape flowing between layers: still spatial, or flattened.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Spatial { ch: usize, n: usize },
    Flat(usize),
}

impl Stage {
    pub fn len(&self) -> usize {
        match *self {
            Stage::Spatial { ch, n } => ch * n * n * n,
            Stage::Flat(k) => k,
        }
    }
}

/// An ordered layer stack over a cubic single-channel input of side
/// `resolution`. The first fully connected layer implicitly flattens.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    pub resolution: usize,
    pub layers: Vec<LayerSpec>,
}

impl NetworkSpec {
    /// Walk the stack and compute the shape before/after every layer
    /// (`stages[i]` feeds layer `i`; the last entry is the output).
    /// Any impossible transition reports the offending layer.
    pub fn stages(&self) -> Result<Vec<Stage>, CnnError> {
        let bad = |layer: usize, detail: String| CnnError::Shape { layer, detail };
        if self.resolution == 0 {
            return Err(bad(0, "input resolution must be positive".into()));
        }
        let mut cur = Stage::Spatial {
            ch: 1,
            n: self.resolution,
        };
        let mut out = vec![cur];
        for (i, layer) in self.layers.iter().enumerate() {
            cur = match (*layer, cur) {
                (LayerSpec::Conv { in_ch, out_ch, .. }, Stage::Spatial { ch, n }) => {
                    if in_ch != ch {
                        return Err(bad(i, format!("conv expects {in_ch} channels, gets {ch}")));
                    }
                    if out_ch == 0 {
                        return Err(bad(i, "conv must have at least one output channel".into()));
                    }
                    Stage::Spatial { ch: out_ch, n }
                }
                (LayerSpec::Conv { .. }, Stage::Flat(_)) => {
                    return Err(bad(i, "conv cannot follow a flattened stage".into()));
                }
                (LayerSpec::Pool, Stage::Spatial { ch, n }) => {
                    if n < 2 || n % 2 != 0 {
                        return Err(bad(i, format!("2^3 max pool needs an even side, got {n}")));
                    }
                    Stage::Spatial { ch, n: n / 2 }
                }
                (LayerSpec::Pool, Stage::Flat(_)) => {
                    return Err(bad(i, "pool cannot follow a flattened stage".into()));
                }
                (LayerSpec::Fc { inputs, outputs, .. }, stage) => {
                    if inputs != stage.len() {
                        return Err(bad(
                            i,
                            format!("fc expects {inputs} inputs, gets {}", stage.len()),
                        ));
                    }
                    if outputs == 0 {
                        return Err(bad(i, "fc must have at least one output".into()));
                    }
                    Stage::Flat(outputs)
                }
            };
            out.push(cur);
        }
        Ok(out)
    }

    pub fn output_len(&self) -> Result<usize, CnnError> {
        Ok(self.stages()?.last().unwrap().len())
    }

    /// The classifier stack: `conv_layers` (6 or 8) convolutions with a 2^3
    /// max pool after every second one, then fc 512 -> 128 -> 10 with a
    /// linear output. Channel widths double every pool stage starting at
    /// `base_width` (the reference nets use 16: 16,16,32,32,64,64,128,128).
    pub fn conv_stack(
        resolution: usize,
        conv_layers: usize,
        base_width: usize,
        hidden: Activation,
    ) -> NetworkSpec {
        assert!(
            conv_layers >= 2 && conv_layers % 2 == 0,
            "conv stack pools after every second conv"
        );
        assert!(base_width >= 1);
        let mut layers = Vec::new();
        let mut ch = 1;
        let mut n = resolution;
        for i in 0..conv_layers {
            let out_ch = base_width << (i / 2);
            layers.push(LayerSpec::Conv {
                in_ch: ch,
                out_ch,
                act: hidden,
            });
            ch = out_ch;
            if i % 2 == 1 {
                layers.push(LayerSpec::Pool);
                n /= 2;
            }
        }
        let flat = ch * n * n * n;
        layers.push(LayerSpec::Fc {
            inputs: flat,
            outputs: 512,
            act: hidden,
        });
        layers.push(LayerSpec::Fc {
            inputs: 512,
            outputs: 128,
            act: hidden,
        });
        layers.push(LayerSpec::Fc {
            inputs: 128,
            outputs: 10,
            act: Activation::Linear,
        });
        NetworkSpec { resolution, layers }
    }
}

/// One training run: the network to build plus the optimizer schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Set for the six reference configurations, `None` for custom runs.
    pub config_id: Option<u8>,
    pub resolution: usize,
    pub conv_layers: usize,
    pub base_width: usize,
    pub hidden: Activation,
    pub learning_rate: f64,
    pub batch_size: usize,
    /// Total optimizer batches ("epochs" in the sense of one step per batch).
    pub steps: usize,
    /// Consecutive gradient steps taken on each batch before moving on.
    pub passes_per_batch: usize,
}

impl TrainConfig {
    /// The six reference configurations:
    ///
    /// | id | resolution | stack      | hidden     | lr    | batch | steps |
    /// |----|------------|------------|------------|-------|-------|-------|
    /// | 1  | 32^3       | 8 conv+3fc | ReLU       | 5e-6  | 32    | 250k  |
    /// | 2  | 64^3       | 8 conv+3fc | ReLU       | 5e-6  | 16    | 350k  |
    /// | 3  | 128^3      | 8 conv+3fc | LeakyReLU  | 5e-6  | 2     | 850k  |
    /// | 4  | 128^3      | 8 conv+3fc | LeakyReLU  | 5e-5  | 2     | 850k  |
    /// | 5  | 128^3      | 8 conv+3fc | LeakyReLU  | 1e-4  | 2     | 850k  |
    /// | 6  | 128^3      | 6 conv+3fc | LeakyReLU  | 5e-5  | 2     | 850k  |
    pub fn preset(id: u8) -> TrainConfig {
        let leaky = Activation::leaky();
        let (resolution, conv_layers, hidden, learning_rate, batch_size, steps) = match id {
            1 => (32, 8, Activation::Relu, 5e-6, 32, 250_000),
            2 => (64, 8, Activation::Relu, 5e-6, 16, 350_000),
            3 => (128, 8, leaky, 5e-6, 2, 850_000),
            4 => (128, 8, leaky, 5e-5, 2, 850_000),
            5 => (128, 8, leaky, 1e-4, 2, 850_000),
            6 => (128, 6, leaky, 5e-5, 2, 850_000),
            _ => panic!("preset ids are 1..=6"),
        };
        TrainConfig {
            config_id: Some(id),
            resolution,
            conv_layers,
            base_width: 16,
            hidden,
            learning_rate,
            batch_size,
            steps,
            passes_per_batch: 3,
        }
    }

    pub fn network(&self) -> NetworkSpec {
        NetworkSpec::conv_stack(self.resolution, self.conv_layers, self.base_width, self.hidden)
    }
}
