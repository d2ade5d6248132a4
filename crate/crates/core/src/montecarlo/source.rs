use std::sync::Arc;

use crate::error::{RemapError, Result};
use crate::fem::NodalField;
use crate::geometry::Point;
use crate::locate::{PointLocation, UniformGridLocator};
use crate::scalar::Real;

/// Black-box source: a pure, thread-safe pointwise evaluator. `None` means
/// the field cannot be evaluated at that point.
pub trait SourceField<T>: Sync {
    fn eval(&self, p: Point<T>) -> Option<T>;
}

/// Closed-form field.
#[derive(Clone, Copy, Debug)]
pub struct AnalyticField<F>(pub F);

impl<T, F> SourceField<T> for AnalyticField<F>
where
    F: Fn(Point<T>) -> T + Sync,
{
    #[inline]
    fn eval(&self, p: Point<T>) -> Option<T> {
        Some((self.0)(p))
    }
}

/// What a mesh-backed field does with points outside its mesh.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutsidePolicy {
    /// Evaluate on the nearest element with clamped barycentrics.
    #[default]
    Snap,
    /// Report the point as unevaluable.
    Strict,
}

impl OutsidePolicy {
    pub(crate) fn resolve<T: Real>(
        self,
        locator: &UniformGridLocator<T>,
        p: Point<T>,
    ) -> Option<PointLocation<T>> {
        match self {
            Self::Snap => Some(locator.locate_or_snap(p)),
            Self::Strict => locator.locate(p),
        }
    }
}

/// P1 field queried by point location, hiding its mesh behind [`SourceField`].
#[derive(Clone, Debug)]
pub struct MeshBackedField<T> {
    field: NodalField<T>,
    locator: Arc<UniformGridLocator<T>>,
    policy: OutsidePolicy,
}

impl<T: Real> MeshBackedField<T> {
    pub fn new(field: NodalField<T>, policy: OutsidePolicy) -> Self {
        let locator = Arc::new(UniformGridLocator::new(field.mesh().clone()));
        Self {
            field,
            locator,
            policy,
        }
    }

    pub fn with_locator(
        field: NodalField<T>,
        locator: Arc<UniformGridLocator<T>>,
        policy: OutsidePolicy,
    ) -> Result<Self> {
        if !Arc::ptr_eq(field.mesh(), locator.mesh()) {
            return Err(RemapError::MeshMismatch {
                left: field.mesh().num_nodes(),
                right: locator.mesh().num_nodes(),
            });
        }
        Ok(Self {
            field,
            locator,
            policy,
        })
    }

    pub fn field(&self) -> &NodalField<T> {
        &self.field
    }

    pub fn locator(&self) -> &Arc<UniformGridLocator<T>> {
        &self.locator
    }
}

impl<T: Real> SourceField<T> for MeshBackedField<T> {
    fn eval(&self, p: Point<T>) -> Option<T> {
        let loc = self.policy.resolve(&self.locator, p)?;
        Some(self.field.eval_in(loc.element, loc.bary))
    }
}
