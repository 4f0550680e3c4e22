//! Computable abelian symmetric monoidal module categories over explicit rings.

pub mod fdalgebra;
pub mod ind;
pub mod localize;
pub mod module;
pub mod ring;
pub mod ringhom;

pub use fdalgebra::FdAlgebra;
pub use ind::{ClosedForm, IndElement, IndObject, DEFAULT_STAGE_BOUND};
pub use module::{smith_normal_form, FdModule, HomModule, Module, ModuleMorphism, PresentedModule};
pub use ring::{Elem, EngineKind, ExplicitRing, PidView};
pub use ringhom::RingHom;
