//! Concrete metric spaces for the magnitude pipelines.
//!
//! Each model supplies Taylor charts of its squared distance (with metric
//! normal collars at the boundary), an exact distance for the numeric
//! oracle, quadrature rules, and closed-form geometric integrals when known.

pub mod charts;
pub mod error;
pub mod expansion;
pub mod models;
pub mod quadrature;

pub use charts::{
    ball_collar, disk_collar, ellipse_collar, embedded_chart, graph_chart, graph_collar, normal_collar,
    sphere_chordal_chart, sphere_geodesic_chart, stereographic, stereographic_coords, stereographic_metric,
    submanifold_chart, GeodesicRoute,
};
pub use error::GeometryError;
pub use expansion::{
    christoffel, embedding_expansion, exponential_series, geodesic_expansion, geodesic_expansion_from,
    inverse_exponential,
};
pub use models::{
    builtin_model, builtin_models, model_from_spec, Ball3, ClosedForm, EllipseDomain, FlatTorus, GeometryModel,
    GeometrySpec, GraphDomain, GraphSubmanifold, Interval, ModelInfo, Sphere2,
};
pub use quadrature::{fibonacci_sphere, gauss_legendre, gauss_legendre_on, pairwise_sum, sunflower_disk, Quadrature};
