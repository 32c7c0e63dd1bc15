use crate::tensor::Tensor;

/// Scales below this are treated as zero and residuals compared absolutely.
pub const SCALE_FLOOR: f64 = 1e-12;

/// Max-norm residual of a tensor equation with the magnitude it is judged against.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Residual {
    pub max_residual: f64,
    /// Largest max-norm among the participating tensors.
    pub scale: f64,
}

impl Residual {
    pub fn new(max_residual: f64, scale: f64) -> Self {
        Self { max_residual, scale }
    }

    /// `lhs − rhs`, scaled by the larger side and any `extra` participants.
    pub fn between(lhs: &Tensor, rhs: &Tensor, extra: &[&Tensor]) -> Self {
        let scale = extra
            .iter()
            .map(|t| t.norm_max())
            .fold(lhs.norm_max().max(rhs.norm_max()), f64::max);
        Self {
            max_residual: (lhs - rhs).norm_max(),
            scale,
        }
    }

    /// A defect tensor that should vanish, judged against `participants`.
    pub fn of_defect(defect: &Tensor, participants: &[&Tensor]) -> Self {
        Self {
            max_residual: defect.norm_max(),
            scale: participants.iter().map(|t| t.norm_max()).fold(0.0, f64::max),
        }
    }

    /// `max_residual / scale`, or the absolute residual when the scale is
    /// below [`SCALE_FLOOR`].
    pub fn relative(&self) -> f64 {
        if self.scale < SCALE_FLOOR {
            self.max_residual
        } else {
            self.max_residual / self.scale
        }
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.relative() < tolerance
    }

    /// The residual with the larger relative value.
    pub fn worst(self, other: Residual) -> Residual {
        if other.relative() > self.relative() {
            other
        } else {
            self
        }
    }

    pub fn worst_of(items: impl IntoIterator<Item = Residual>) -> Residual {
        items.into_iter().fold(Residual::default(), Residual::worst)
    }
}
