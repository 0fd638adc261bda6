//! Coverings of axis-aligned rectangles by congruent closed unit disks.
//!
//! The crate provides:
//!
//! * [`geom`] — points, disks, rectangles, convex polygons, and the circular-chord
//!   helpers everything else is built on;
//! * [`constructions`] — the classical efficient coverings (square chains, hexagonal
//!   lattices, anisotropic lattices) with exact area bookkeeping;
//! * [`verifier`] — a certified coverage decision procedure over an adaptive cell
//!   subdivision, plus scale maximization on top of it;
//! * [`voronoi`] — rectangle-clipped Voronoi cells of the disk centers and the
//!   combinatorics (Euler characteristic, side counts) of the induced net;
//! * [`bounds`] — the analytic machinery for area upper bounds: chord deficit
//!   functions, their convex envelope, and the derived extremal constants;
//! * [`search`] — seeded simulated annealing over disk positions to push the
//!   coverable rectangle area upward from a construction.
//!
//! With the default `parallel` feature the verifier waves, grid scans, and search
//! replicas run on rayon; the `*_seq` twins always use the sequential path and the
//! feature can be disabled entirely for single-threaded builds.

pub mod bounds;
pub mod constructions;
pub mod error;
mod exec;
pub mod geom;
pub mod numeric;
pub mod search;
pub mod verifier;
pub mod voronoi;

pub use error::{Error, Result};
pub use geom::{ConvexPolygon, Covering, Disk, Point, Rect};
pub use verifier::{scale_to_cover, verify, CoverageStatus, CoverageVerdict};
