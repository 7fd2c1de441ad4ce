//! Simulation core for the Yui android head and its operator link.
//!
//! Everything in this crate is a pure function or a step-driven state
//! machine, so it builds without `std` (only `alloc` is required). IO, the
//! live bus, daemons and file formats live in the `yui-teleop` crate.
//!
//! Modules:
//!
//! - [`servo`]: PID with duty saturation and direction bit, target
//!   interpolation between host commands, first-order motor plant.
//! - [`rig`]: the 31 head motions, their allocation onto the 21 motors and
//!   the differential neck linkage.
//! - [`expression`]: Action Units, emotion presets and the affine operator
//!   expression map with its least-squares calibration.
//! - [`perception`]: binaural ear gains, stereo rendering and stereo pinhole
//!   projection.
//! - [`protocol`]: bus topics, message schemas, binary framing, audio
//!   chunking and delay buffers.
//! - [`gaze`]: splitting a gaze direction between the eyes and the neck.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod expression;
pub mod gaze;
mod linalg;
mod math;
pub mod perception;
pub mod protocol;
pub mod rig;
pub mod servo;

pub use rig::{MotionId, MotorId, MOTION_COUNT, MOTOR_COUNT};
